//! Gaussian one- and two-particle Fock wavepackets.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result, UdwError};
use crate::quadrature::{integrate_semi_infinite_with, QuadratureConfig};
use crate::specfun::{self, ln_gamma, ln_hyp0f1_reg};

/// Isotropic Gaussian spectrum `f(k) = (pi sigma^2)^{-n/4} exp(-|k - k0|^2 / 2 sigma^2)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WavepacketSpec {
    pub n: u32,
    pub k0: f64,
    pub sigma: f64,
    /// Infrared cutoff, consulted only for `n = 1`.
    #[serde(default)]
    pub ir_cutoff: Option<f64>,
}

impl WavepacketSpec {
    pub fn new(n: u32, k0: f64, sigma: f64) -> Result<Self> {
        let spec = WavepacketSpec {
            n,
            k0,
            sigma,
            ir_cutoff: None,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn with_ir_cutoff(mut self, cutoff: f64) -> Self {
        self.ir_cutoff = Some(cutoff);
        self
    }

    pub fn validate(&self) -> Result<()> {
        validate_common(self.n, self.sigma, self.ir_cutoff)?;
        if !(self.k0 >= 0.0) || !self.k0.is_finite() {
            return Err(invalid(format!("k0 = {} must be finite and >= 0", self.k0)));
        }
        Ok(())
    }

    /// Spectrum at a momentum of magnitude `k` making angle `cos_theta` with `k0`.
    pub fn spectrum(&self, k: f64, cos_theta: f64) -> f64 {
        let d2 = k * k + self.k0 * self.k0 - 2.0 * k * self.k0 * cos_theta;
        (ln_norm_prefactor(self.n, self.sigma) - d2 / (2.0 * self.sigma * self.sigma)).exp()
    }
}

/// Two-particle state with collinear spectral peaks at `eta1` and `eta2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TwoParticleSpec {
    pub n: u32,
    pub eta1: f64,
    pub eta2: f64,
    pub sigma: f64,
    #[serde(default)]
    pub ir_cutoff: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Which {
    Eta1,
    Eta2,
}

impl TwoParticleSpec {
    pub fn new(n: u32, eta1: f64, eta2: f64, sigma: f64) -> Result<Self> {
        let spec = TwoParticleSpec {
            n,
            eta1,
            eta2,
            sigma,
            ir_cutoff: None,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        validate_common(self.n, self.sigma, self.ir_cutoff)?;
        for (name, eta) in [("eta1", self.eta1), ("eta2", self.eta2)] {
            if !(eta > 0.0) || !eta.is_finite() {
                return Err(invalid(format!("{name} = {eta} must be finite and > 0")));
            }
        }
        Ok(())
    }

    pub fn eta(&self, which: Which) -> f64 {
        match which {
            Which::Eta1 => self.eta1,
            Which::Eta2 => self.eta2,
        }
    }

    /// The one-particle packet centred on the selected peak.
    pub fn single(&self, which: Which) -> WavepacketSpec {
        WavepacketSpec {
            n: self.n,
            k0: self.eta(which),
            sigma: self.sigma,
            ir_cutoff: self.ir_cutoff,
        }
    }
}

fn validate_common(n: u32, sigma: f64, ir_cutoff: Option<f64>) -> Result<()> {
    if n == 0 {
        return Err(invalid("spatial dimension n must be >= 1"));
    }
    if !(sigma > 0.0) || !sigma.is_finite() {
        return Err(invalid(format!("sigma = {sigma} must be finite and > 0")));
    }
    if let Some(c) = ir_cutoff {
        if !(c >= 0.0) || !c.is_finite() {
            return Err(invalid(format!("ir_cutoff = {c} must be finite and >= 0")));
        }
    }
    Ok(())
}

/// Infrared cutoff actually used: the explicit one, or `1e-6 min(scales)`.
pub fn effective_ir_cutoff(explicit: Option<f64>, scales: &[f64]) -> f64 {
    explicit.unwrap_or_else(|| {
        let m = scales.iter().copied().filter(|s| *s > 0.0).fold(f64::INFINITY, f64::min);
        if m.is_finite() {
            1e-6 * m
        } else {
            0.0
        }
    })
}

/// For `n = 1` every momentum scale must sit above the cutoff.
pub fn check_ir(n: u32, cutoff: f64, scales: &[(&'static str, f64)]) -> Result<()> {
    if n != 1 {
        return Ok(());
    }
    for &(what, scale) in scales {
        if !(scale > cutoff) {
            return Err(UdwError::IrCutoff { what, scale, cutoff });
        }
    }
    Ok(())
}

pub(crate) fn ln_norm_prefactor(n: u32, sigma: f64) -> f64 {
    -0.25 * n as f64 * (PI * sigma * sigma).ln()
}

/// `ln` of the shell integral `int dOmega_{n-1} f(k khat)` for a Gaussian
/// centred at `|k0|`; equals `2 pi^{n/2} 0F1~(n/2; k0^2 k^2 / 4 sigma^4)` times
/// the Gaussian envelope, with the exponentials combined before evaluation.
pub fn ln_shell(n: u32, k0: f64, sigma: f64, k: f64) -> f64 {
    let s2 = sigma * sigma;
    let h = 0.5 * n as f64;
    let z = (k0 * k / (2.0 * s2)).powi(2);
    ln_norm_prefactor(n, sigma) - (k0 * k0 + k * k) / (2.0 * s2) + (2.0f64).ln() + h * PI.ln() + ln_hyp0f1_reg(h, z)
}

/// `ln |int dOmega cos(theta) f(k khat)|`, the dipole moment of the shell.
fn ln_shell_dipole(n: u32, k0: f64, sigma: f64, k: f64) -> f64 {
    let s2 = sigma * sigma;
    let h = 0.5 * n as f64;
    let c = k0 * k / s2;
    ln_norm_prefactor(n, sigma) - (k0 * k0 + k * k) / (2.0 * s2)
        + (2.0f64).ln()
        + h * PI.ln()
        + (0.5 * c).ln()
        + ln_hyp0f1_reg(h + 1.0, 0.25 * c * c)
}

/// `C = exp(-(eta1 - eta2)^2 / 4 sigma^2)`.
pub fn overlap_c(spec: &TwoParticleSpec) -> f64 {
    let d = spec.eta1 - spec.eta2;
    (-d * d / (4.0 * spec.sigma * spec.sigma)).exp()
}

/// `N = 1 / sqrt(1 + C^2)`.
pub fn normalization_n(spec: &TwoParticleSpec) -> f64 {
    let c = overlap_c(spec);
    1.0 / (1.0 + c * c).sqrt()
}

/// `<1_f| H |1_f>`. For `n = 1` the explicit cutoff form is used with
/// `Lambda = ir_cutoff` (zero when unset).
pub fn energy_expectation(spec: &WavepacketSpec) -> Result<f64> {
    spec.validate()?;
    let (k0, s) = (spec.k0, spec.sigma);
    if spec.n == 1 {
        let l = spec.ir_cutoff.unwrap_or(0.0);
        let a = PI.sqrt() * k0 * (specfun::erf((l + k0) / s) - specfun::erf((l - k0) / s));
        let b = s * ((-(l - k0) * (l - k0) / (s * s)).exp() + (-(l + k0) * (l + k0) / (s * s)).exp());
        return Ok((a + b) / (2.0 * PI.sqrt()));
    }
    let h = 0.5 * spec.n as f64;
    let kummer = specfun::hyp1f1_reg(-0.5, h, -(k0 * k0) / (s * s))?;
    Ok(s * (ln_gamma(h + 0.5) + kummer.ln_abs()).exp())
}

/// Breakpoints `centre + width * {-m, ..., m}` clipped to `(lo, inf)`.
pub(crate) fn peak_breakpoints(centre: f64, width: f64, lo: f64) -> Vec<f64> {
    let mut pts: Vec<f64> = [-40.0, -12.0, -4.0, -1.0, 0.0, 1.0, 4.0, 12.0, 40.0]
        .iter()
        .map(|m| centre + m * width)
        .filter(|&x| x > lo)
        .collect();
    if pts.is_empty() {
        pts.push(lo + 40.0 * width);
    }
    pts
}

/// Normal-ordered energy density `<:T_tt:>` at the origin, `A^2 + B^2`.
pub fn energy_density_origin(spec: &WavepacketSpec, rel_tol: f64) -> Result<f64> {
    spec.validate()?;
    let (n, k0, s) = (spec.n, spec.k0, spec.sigma);
    let nf = n as f64;
    let cfg = QuadratureConfig::relative(rel_tol);
    let pts = peak_breakpoints(k0, s, 0.0);
    let ln_measure = |k: f64| (nf - 0.5) * k.ln();
    let a = integrate_semi_infinite_with(|k| (ln_measure(k) + ln_shell(n, k0, s, k)).exp(), 0.0, &pts, &cfg)?;
    let b = if k0 > 0.0 {
        integrate_semi_infinite_with(|k| (ln_measure(k) + ln_shell_dipole(n, k0, s, k)).exp(), 0.0, &pts, &cfg)?
            .value
    } else {
        0.0
    };
    let norm = 2.0 * (2.0 * PI).powf(nf);
    Ok((a.value * a.value + b * b) / norm)
}
