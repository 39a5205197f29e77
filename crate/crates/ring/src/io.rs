//! Plot-ready emitters: squeezing spectra as CSV, run manifests as JSON.

use crate::model::{RingModel, RingScheme};
use crate::spectrum::SqueezingSpectrum;
use serde_json::json;

/// Format a float with 17 significant digits (lossless round trip).
pub fn fmt_float(x: f64) -> String {
    format!("{x:.16e}")
}

/// CSV dump of a squeezing spectrum. S values are linear variances
/// normalized to shot noise (vacuum = 1); the envelope columns bracket the
/// local-oscillator phase sweep and S_at_phi samples the recorded phase.
pub fn spectrum_csv(s: &SqueezingSpectrum) -> String {
    let mut out = String::new();
    out.push_str("# homodyne variance vs shot noise (vacuum = 1), angular frequency in rad/s\n");
    out.push_str(&format!("# local-oscillator phase phi = {}\n", fmt_float(s.phi_lo)));
    out.push_str("omega,S_min,S_max,S_at_phi\n");
    for j in 0..s.omega.len() {
        out.push_str(&format!(
            "{},{},{},{}\n",
            fmt_float(s.omega[j]),
            fmt_float(s.s_min[j]),
            fmt_float(s.s_max[j]),
            fmt_float(s.s_at_phi[j])
        ));
    }
    out
}

fn resonance_json(r: &crate::model::Resonance) -> serde_json::Value {
    json!({
        "omega": r.omega,
        "gamma": r.gamma,
        "gamma_ph": r.gamma_ph,
        "velocity": r.velocity,
    })
}

/// Machine-readable record of every model parameter for a run manifest.
pub fn model_record(model: &RingModel) -> serde_json::Value {
    json!({
        "scheme": match model.scheme {
            RingScheme::SpSfwm => "sp-sfwm",
            RingScheme::DpSfwm => "dp-sfwm",
            RingScheme::Spdc => "spdc",
            RingScheme::SpdcDegenerate => "spdc-degenerate",
        },
        "signal": resonance_json(&model.signal),
        "idler": model.idler.as_ref().map(resonance_json),
        "pump": resonance_json(&model.pump),
        "pump2": model.pump2.as_ref().map(resonance_json),
        "length": model.length,
        "lambda": { "re": model.lambda.re, "im": model.lambda.im },
        "eta_spm": model.eta_spm,
        "zeta_xpm": model.zeta_xpm,
        "delta_pump": model.delta_pump,
        "delta_pump2": model.delta_pump2,
        "delta_ring": model.delta_ring,
    })
}
