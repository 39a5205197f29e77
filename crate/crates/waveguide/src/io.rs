//! Plot-ready emitters: JSA grids as CSV, sweep summaries as JSON records.

use crate::diagnostics::JsaDiagnostics;
use serde_json::json;

/// Format a float with 17 significant digits (lossless round trip).
pub fn fmt_float(x: f64) -> String {
    format!("{x:.16e}")
}

/// CSV dump of a JSA grid, one sample per row.
pub fn jsa_csv(d: &JsaDiagnostics) -> String {
    let mut out = String::from("omega1,omega2,re,im\n");
    for (a, &w1) in d.omega_s.iter().enumerate() {
        for (b, &w2) in d.omega_i.iter().enumerate() {
            let z = d.jsa[(a, b)];
            out.push_str(&format!(
                "{},{},{},{}\n",
                fmt_float(w1),
                fmt_float(w2),
                fmt_float(z.re),
                fmt_float(z.im)
            ));
        }
    }
    out
}

/// One sweep-summary record.
pub fn sweep_record(phi: f64, n_pairs: f64, schmidt_number: f64, xi: &[f64]) -> String {
    json!({
        "phi": phi,
        "n_pairs": n_pairs,
        "K": schmidt_number,
        "xi": xi,
    })
    .to_string()
}
