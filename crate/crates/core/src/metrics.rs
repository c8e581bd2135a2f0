//! Approximation ratio, efficiency factor and the combined PEI score.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Sensitivity used for medium-scale runs.
pub const ALPHA_MEDIUM: f64 = 0.001;
/// Sensitivity used for large-scale runs.
pub const ALPHA_LARGE: f64 = 0.0001;

/// Exponent clamp for the efficiency sigmoid; `exp(700)` is finite in f64.
pub const EXPONENT_CLAMP: f64 = 700.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PeiInputs {
    pub cut_alg: f64,
    pub cut_opt: f64,
    pub t_alg: f64,
    pub t_base: f64,
    pub alpha: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PeiReport {
    pub ar: f64,
    pub ef: f64,
    pub pei: f64,
    pub inputs: PeiInputs,
}

pub fn approximation_ratio(cut_alg: f64, cut_opt: f64) -> Result<f64> {
    if !(cut_opt.is_finite() && cut_opt > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "reference cut must be positive, got {cut_opt}"
        )));
    }
    if !(cut_alg.is_finite() && cut_alg >= 0.0) {
        return Err(Error::InvalidParameter(format!(
            "cut value must be non-negative, got {cut_alg}"
        )));
    }
    Ok(cut_alg / cut_opt)
}

/// `1 / (1 + exp(alpha * (t_alg - t_base)))`, with the exponent clamped to
/// `[-700, 700]`.
pub fn efficiency_factor(t_alg: f64, t_base: f64, alpha: f64) -> Result<f64> {
    if !(alpha.is_finite() && alpha > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "alpha must be positive, got {alpha}"
        )));
    }
    if !t_alg.is_finite() || !t_base.is_finite() {
        return Err(Error::InvalidParameter("timings must be finite".into()));
    }
    let x = (alpha * (t_alg - t_base)).clamp(-EXPONENT_CLAMP, EXPONENT_CLAMP);
    Ok(1.0 / (1.0 + x.exp()))
}

pub fn pei(inputs: PeiInputs) -> Result<PeiReport> {
    if inputs.t_alg < 0.0 || inputs.t_base < 0.0 {
        return Err(Error::InvalidParameter(
            "timings must be non-negative".into(),
        ));
    }
    let ar = approximation_ratio(inputs.cut_alg, inputs.cut_opt)?;
    let ef = efficiency_factor(inputs.t_alg, inputs.t_base, inputs.alpha)?;
    Ok(PeiReport {
        ar,
        ef,
        pei: ar * ef * 100.0,
        inputs,
    })
}
