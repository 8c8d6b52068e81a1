//! Text and JSON rendering of results. JSON `value` fields use the
//! compact literal grammar so they can be parsed back into scalars at the
//! stated precision.

use clap::ValueEnum;
use serde_json::json;

use mahler_core::measure::{Diagnostics, MeasureResult, RadiusBound};
use mahler_core::padic::PadicScalar;
use mahler_core::ring::Valuation;
use mahler_core::series::{SeriesEval, SJet};

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Text,
    Json,
}

fn diagnostics_json(d: &Diagnostics) -> serde_json::Value {
    let mut map = serde_json::Map::new();
    if let Some(m) = d.log_terms {
        map.insert("log_terms".into(), m.into());
    }
    if let Some(j) = d.exp_terms {
        map.insert("exp_terms".into(), j.into());
    }
    if let Some(m) = d.series_terms {
        map.insert("series_terms".into(), m.into());
    }
    if let Some(n) = d.points {
        map.insert("points".into(), n.into());
    }
    if let Some(v) = d.predicted_agreement {
        map.insert("predicted_agreement".into(), v.into());
    }
    serde_json::Value::Object(map)
}

fn diagnostics_text(d: &Diagnostics) -> String {
    let mut pieces = Vec::new();
    if let Some(m) = d.log_terms {
        pieces.push(format!("log_terms={m}"));
    }
    if let Some(j) = d.exp_terms {
        pieces.push(format!("exp_terms={j}"));
    }
    if let Some(m) = d.series_terms {
        pieces.push(format!("series_terms={m}"));
    }
    if let Some(n) = d.points {
        pieces.push(format!("points={n}"));
    }
    if let Some(v) = d.predicted_agreement {
        pieces.push(format!("predicted_agreement={v}"));
    }
    if pieces.is_empty() {
        "none".into()
    } else {
        pieces.join(" ")
    }
}

pub fn render_scalar_result(
    format: &OutputFormat,
    label: &str,
    result: &MeasureResult<PadicScalar>,
) {
    match format {
        OutputFormat::Text => {
            println!("{label} = {}", result.value.expansion());
            println!("  literal: {}", result.value.literal());
            println!("  certified p-adic digits: {}", result.certified_abs_precision);
            println!("  method: {}", result.method.as_str());
            println!("  diagnostics: {}", diagnostics_text(&result.diagnostics));
        }
        OutputFormat::Json => {
            let doc = json!({
                "label": label,
                "value": result.value.literal(),
                "expansion": result.value.expansion(),
                "precision": result.certified_abs_precision,
                "method": result.method.as_str(),
                "diagnostics": diagnostics_json(&result.diagnostics),
            });
            println!("{doc}");
        }
    }
}

pub fn render_jet_result(format: &OutputFormat, result: &MeasureResult<SJet>) {
    let jet = &result.value;
    let order = jet.order();
    // m_{p,k} = k! * coefficient k
    let ctx = jet.ring().context().clone();
    let mut factorial = ctx.one();
    let mut measures = Vec::with_capacity(order + 1);
    for k in 0..=order {
        if k > 0 {
            factorial = factorial.mul(&ctx.from_i64(k as i64));
        }
        measures.push(jet.coefficient(k).mul(&factorial));
    }
    match format {
        OutputFormat::Text => {
            println!("Z_p(s, f) mod s^{}:", order + 1);
            for k in 0..=order {
                println!("  coefficient of s^{k}: {}", jet.coefficient(k).expansion());
                println!("    m_{{p,{k}}} = k! * coefficient = {}", measures[k].expansion());
            }
            println!("  certified p-adic digits: {}", result.certified_abs_precision);
            println!("  method: {}", result.method.as_str());
            println!("  diagnostics: {}", diagnostics_text(&result.diagnostics));
        }
        OutputFormat::Json => {
            let doc = json!({
                "order": order,
                "coefficients": (0..=order)
                    .map(|k| jet.coefficient(k).literal())
                    .collect::<Vec<_>>(),
                "higher_measures": measures.iter().map(|m| m.literal()).collect::<Vec<_>>(),
                "precision": result.certified_abs_precision,
                "method": result.method.as_str(),
                "diagnostics": diagnostics_json(&result.diagnostics),
            });
            println!("{doc}");
        }
    }
}

pub fn render_average_table(
    format: &OutputFormat,
    engine: &MeasureResult<PadicScalar>,
    rows: &[(u64, MeasureResult<PadicScalar>, Valuation)],
) {
    match format {
        OutputFormat::Text => {
            println!("engine value: {}", engine.value.expansion());
            println!("{:>8} {:>12} {:>11}  average", "N", "agreement", "predicted");
            for (n, avg, agreement) in rows {
                println!(
                    "{n:>8} {:>12} {:>11}  {}",
                    agreement.to_string(),
                    avg.diagnostics
                        .predicted_agreement
                        .map_or("-".into(), |v| v.to_string()),
                    avg.value.literal()
                );
            }
        }
        OutputFormat::Json => {
            let doc = json!({
                "engine": engine.value.literal(),
                "rows": rows.iter().map(|(n, avg, agreement)| json!({
                    "N": n,
                    "value": avg.value.literal(),
                    "agreement": agreement.finite(),
                    "predicted": avg.diagnostics.predicted_agreement,
                    "points": avg.diagnostics.points,
                })).collect::<Vec<_>>(),
            });
            println!("{doc}");
        }
    }
}

pub fn render_radius(format: &OutputFormat, bound: &RadiusBound) {
    match format {
        OutputFormat::Text => {
            match bound.decay {
                Valuation::Infinite => {
                    println!("decay constant: infinite (every higher measure vanishes)")
                }
                Valuation::Finite(c) => println!("decay constant: {c} (|m_k| <= p^(-{c}k))"),
            }
            match &bound.log_radius {
                Some(r) => println!("log_p convergence radius: {r}"),
                None => println!("log_p convergence radius: unbounded"),
            }
            println!("closed unit disc criterion met: {}", bound.closed_disc);
        }
        OutputFormat::Json => {
            let doc = json!({
                "decay": bound.decay.finite(),
                "log_radius": bound.log_radius.as_ref().map(|r| r.to_string()),
                "closed_disc": bound.closed_disc,
            });
            println!("{doc}");
        }
    }
}

pub fn render_series(format: &OutputFormat, label: &str, eval: &SeriesEval<PadicScalar>) {
    match format {
        OutputFormat::Text => {
            println!("{label} = {}", eval.value.expansion());
            println!("  literal: {}", eval.value.literal());
            println!("  certified p-adic digits: {}", eval.certified_abs);
            println!("  terms summed: {}", eval.terms_used);
        }
        OutputFormat::Json => {
            let doc = json!({
                "label": label,
                "value": eval.value.literal(),
                "expansion": eval.value.expansion(),
                "precision": eval.certified_abs,
                "terms": eval.terms_used,
            });
            println!("{doc}");
        }
    }
}
