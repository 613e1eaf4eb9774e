//! Linear coupling in free space, long-time pointlike limit.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::wavepacket::{
    check_ir, effective_ir_cutoff, ln_shell, normalization_n, overlap_c, TwoParticleSpec, WavepacketSpec, Which,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Coupling {
    Linear,
    Quadratic,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DetectorSpec {
    pub omega: f64,
    pub lambda: f64,
    pub coupling: Coupling,
    #[serde(default)]
    pub smearing_delta: f64,
}

impl DetectorSpec {
    pub fn linear(omega: f64, lambda: f64) -> Self {
        DetectorSpec {
            omega,
            lambda,
            coupling: Coupling::Linear,
            smearing_delta: 0.0,
        }
    }

    pub fn quadratic(omega: f64, lambda: f64) -> Self {
        DetectorSpec {
            coupling: Coupling::Quadratic,
            ..DetectorSpec::linear(omega, lambda)
        }
    }

    pub fn with_smearing(mut self, delta: f64) -> Self {
        self.smearing_delta = delta;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.omega > 0.0) || !self.omega.is_finite() {
            return Err(invalid(format!("omega = {} must be finite and > 0", self.omega)));
        }
        if !(self.lambda > 0.0) || !self.lambda.is_finite() {
            return Err(invalid(format!("lambda = {} must be finite and > 0", self.lambda)));
        }
        if !(self.smearing_delta >= 0.0) || !self.smearing_delta.is_finite() {
            return Err(invalid(format!("smearing_delta = {} must be >= 0", self.smearing_delta)));
        }
        Ok(())
    }

    fn expect(&self, coupling: Coupling) -> Result<()> {
        self.validate()?;
        if self.coupling != coupling {
            return Err(invalid(format!("detector coupling is {:?}, expected {:?}", self.coupling, coupling)));
        }
        Ok(())
    }

    pub(crate) fn expect_linear(&self) -> Result<()> {
        self.expect(Coupling::Linear)
    }

    pub(crate) fn expect_quadratic(&self) -> Result<()> {
        self.expect(Coupling::Quadratic)
    }

    /// Gaussian smearing factor `exp(-Delta^2 Omega^2 / 2)`.
    pub fn smearing_factor(&self) -> f64 {
        let x = self.smearing_delta * self.omega;
        (-0.5 * x * x).exp()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProbabilityResult {
    pub value: f64,
    pub error_estimate: f64,
    pub components: Vec<(String, f64)>,
}

impl ProbabilityResult {
    pub(crate) fn closed_form(value: f64) -> Self {
        ProbabilityResult {
            value,
            error_estimate: 64.0 * f64::EPSILON * value.abs(),
            components: Vec::new(),
        }
    }

    pub fn component(&self, name: &str) -> Option<f64> {
        self.components.iter().find(|(k, _)| k == name).map(|(_, v)| *v)
    }
}

/// `lambda` such that the dimensionless coupling `lambda |k0|^{(n-3)/2}` is one.
pub fn unit_tilde_lambda(n: u32, k0: f64) -> f64 {
    k0.powf(-0.5 * (n as f64 - 3.0))
}

pub(crate) fn ln_i_minus_raw(n: u32, k0: f64, sigma: f64, omega: f64) -> f64 {
    let nf = n as f64;
    (2.0 * PI).ln() + (nf - 1.5) * omega.ln() - 0.5 * (2.0 * (2.0 * PI).powf(nf)).ln() + ln_shell(n, k0, sigma, omega)
}

fn guard(wp: &WavepacketSpec, omega: f64) -> Result<()> {
    let cutoff = effective_ir_cutoff(wp.ir_cutoff, &[wp.k0, wp.sigma, omega]);
    check_ir(wp.n, cutoff, &[("k0", wp.k0), ("omega", omega)])
}

/// Co-rotating amplitude `I_-` for a pointlike detector.
pub fn i_minus(wp: &WavepacketSpec, det: &DetectorSpec) -> Result<f64> {
    wp.validate()?;
    det.validate()?;
    guard(wp, det.omega)?;
    Ok(ln_i_minus_raw(wp.n, wp.k0, wp.sigma, det.omega).exp())
}

pub fn prob_one_linear(wp: &WavepacketSpec, det: &DetectorSpec) -> Result<ProbabilityResult> {
    det.expect_linear()?;
    let i = i_minus(wp, det)?;
    let p = det.lambda * det.lambda * i * i * det.smearing_factor();
    let mut r = ProbabilityResult::closed_form(p);
    r.components.push(("i_minus".into(), i));
    Ok(r)
}

/// Probability with the running coupling `gamma = lambda sigma^{(n-3)/2}` held fixed.
pub fn prob_one_running(wp: &WavepacketSpec, omega: f64, gamma: f64) -> Result<ProbabilityResult> {
    if !(gamma > 0.0) || !gamma.is_finite() {
        return Err(invalid(format!("gamma = {gamma} must be finite and > 0")));
    }
    wp.validate()?;
    let lambda = gamma * wp.sigma.powf(0.5 * (3.0 - wp.n as f64));
    prob_one_linear(wp, &DetectorSpec::linear(omega, lambda))
}

/// `M_-` for the selected peak: `N` times `I_-` evaluated at that peak.
pub fn m_minus(spec: &TwoParticleSpec, which: Which, det: &DetectorSpec) -> Result<f64> {
    spec.validate()?;
    det.validate()?;
    let wp = spec.single(which);
    guard(&wp, det.omega)?;
    Ok(normalization_n(spec) * ln_i_minus_raw(wp.n, wp.k0, wp.sigma, det.omega).exp())
}

pub fn prob_two_linear(spec: &TwoParticleSpec, det: &DetectorSpec) -> Result<ProbabilityResult> {
    det.expect_linear()?;
    let m1 = m_minus(spec, Which::Eta1, det)?;
    let m2 = m_minus(spec, Which::Eta2, det)?;
    let l2 = det.lambda * det.lambda * det.smearing_factor();
    let c = overlap_c(spec);
    let p1 = l2 * m1 * m1;
    let p2 = l2 * m2 * m2;
    let cross = 2.0 * c * l2 * m1 * m2;
    let mut r = ProbabilityResult::closed_form(p1 + p2 + cross);
    r.components = vec![("p_eta1".into(), p1), ("p_eta2".into(), p2), ("p_cross".into(), cross)];
    Ok(r)
}
