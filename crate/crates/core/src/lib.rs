//! Exact p-adic arithmetic and engines for p-adic higher Mahler measures
//! m_{p,k}(f) and p-adic zeta Mahler measures Z_p(s, f) of Laurent
//! polynomials that do not vanish on the p-adic torus, together with
//! closed-form evaluators (polylogarithmic and hypergeometric) and a
//! finite root-of-unity averaging oracle used to cross-verify them.

pub mod closedform;
pub mod error;
pub mod ring;
pub mod verify;

pub mod extension;
pub mod hoffman;
pub mod laurent;
pub mod measure;
pub mod padic;
pub mod series;

pub use closedform::{cross_measure_rhs, cross_polynomial, cross_zeta_rhs, cross_zeta_rhs_in, cross_zeta_rhs_jet, quadratic_measure_rhs, quadratic_zeta_rhs, quadratic_zeta_rhs_in, quadratic_zeta_rhs_jet};
pub use error::{Error, Result};
pub use extension::{eval_laurent, ExtScalar, UnramifiedField};
pub use hoffman::{circled_harmonic, harmonic_product, ones_product_word, Index, Word, WordPoly};
pub use laurent::{quadratic_from_roots, LaurentPoly, UnitDecomposition};
pub use measure::{higher_mahler, radius_bound, shnirelman_average, truncated_log_series, zeta_mahler, zeta_mahler_in, zeta_mahler_jet, Diagnostics, MeasureResult, Method, RadiusBound};
pub use padic::{agreement_valuation, binomial_coefficient, AngleDecomposition, PadicContext, PadicScalar};
pub use series::{binomial_integer, double_constrained_sum, factorial, harmonic_prefix_sums, hypergeometric, jet_agreement, multipolylog, multipolylog_word, pochhammer, polylog_coefficients, wordpoly_coefficients, wordpoly_prefix_sums, SeriesEval, SJet, SJetRing, SRing};
pub use ring::{ilog_p, min_tail_valuation, tail_cutoff, RationalField, Ring, ValuedRing, Valuation};
