use crate::error::{Error, Result};
use alloc::format;
use alloc::vec::Vec;

/// Slack allowed on the `Σ 1/aᵢ ≤ 1` and `Σ 1/aᵢ² ≤ 1` tests.
pub const SCALE_SLACK: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ScaleClass {
    /// `Σ 1/aᵢ ≤ 1`.
    HarmonicFeasible,
    /// `Σ 1/aᵢ² ≤ 1 < Σ 1/aᵢ`.
    SquareFeasibleOnly,
    /// `Σ 1/aᵢ² > 1`.
    Infeasible,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SdClass {
    SdCertified,
    NotSdCertified,
    Unknown,
}

/// Positive scales `(a₁, ..., a_d)` with their feasibility class.
#[derive(Clone, Debug, PartialEq)]
pub struct ScaleVector {
    values: Vec<f64>,
    class: ScaleClass,
}

impl ScaleVector {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InfeasibleScales("empty scale vector".into()));
        }
        if let Some(v) = values.iter().find(|v| !(v.is_finite() && **v > 0.0)) {
            return Err(Error::InfeasibleScales(format!("scale {v} is not a positive real")));
        }
        let class = classify(&values);
        Ok(ScaleVector { values, class })
    }

    pub fn uniform(d: usize, a: f64) -> Result<Self> {
        Self::new(alloc::vec![a; d])
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn d(&self) -> usize {
        self.values.len()
    }

    pub fn class(&self) -> ScaleClass {
        self.class
    }

    pub fn harmonic_sum(&self) -> f64 {
        self.values.iter().map(|a| 1.0 / a).sum()
    }

    pub fn square_sum(&self) -> f64 {
        self.values.iter().map(|a| 1.0 / (a * a)).sum()
    }

    pub fn is_harmonic_feasible(&self) -> bool {
        self.class == ScaleClass::HarmonicFeasible
    }

    pub fn is_square_feasible(&self) -> bool {
        self.class != ScaleClass::Infeasible
    }

    /// Proportionally shrunk scales with `Σ 1/aᵢ = 1`; requires
    /// `Σ 1/aᵢ ≤ 1`.
    pub fn tightened(&self) -> Result<ScaleVector> {
        if !self.is_harmonic_feasible() {
            return Err(Error::InfeasibleScales(format!(
                "sum of reciprocals is {:.6} > 1",
                self.harmonic_sum()
            )));
        }
        let s = self.harmonic_sum();
        Self::new(self.values.iter().map(|a| a * s).collect())
    }
}

fn classify(values: &[f64]) -> ScaleClass {
    let h: f64 = values.iter().map(|a| 1.0 / a).sum();
    let q: f64 = values.iter().map(|a| 1.0 / (a * a)).sum();
    if h <= 1.0 + SCALE_SLACK {
        ScaleClass::HarmonicFeasible
    } else if q <= 1.0 + SCALE_SLACK {
        ScaleClass::SquareFeasibleOnly
    } else {
        ScaleClass::Infeasible
    }
}

/// Three-valued answer to "is `a` an SD-tuple": certified when
/// `Σ 1/aᵢ ≤ 1`, refuted when `Σ 1/aᵢ² > 1`, unknown in between.
pub fn sd_classify(a: &ScaleVector) -> SdClass {
    match a.class() {
        ScaleClass::HarmonicFeasible => SdClass::SdCertified,
        ScaleClass::SquareFeasibleOnly => SdClass::Unknown,
        ScaleClass::Infeasible => SdClass::NotSdCertified,
    }
}
