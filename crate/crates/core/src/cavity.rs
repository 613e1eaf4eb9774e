//! Dirichlet box `[0, L]^n`: one-particle excitation with Gaussian switching
//! and energy deposited into the modes of a `(1+1)`-dimensional cavity.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result, UdwError};
use crate::free_linear::{DetectorSpec, ProbabilityResult};
use crate::specfun::{erfc, theta3_nome};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CavitySpec {
    pub n: u32,
    pub l: f64,
    pub x_d: Vec<f64>,
    /// Width of the switching `chi(t) = exp(-t^2 / T^2)`.
    pub t: f64,
    /// Largest mode index per axis; derived from the packet when unset.
    #[serde(default)]
    pub mode_cap: Option<u32>,
}

impl CavitySpec {
    pub fn new(n: u32, l: f64, x_d: Vec<f64>, t: f64) -> Result<Self> {
        let cav = CavitySpec {
            n,
            l,
            x_d,
            t,
            mode_cap: None,
        };
        cav.validate()?;
        Ok(cav)
    }

    /// Detector at `fraction * L` on every axis.
    pub fn with_detector_fraction(n: u32, l: f64, fraction: f64, t: f64) -> Result<Self> {
        CavitySpec::new(n, l, vec![fraction * l; n as usize], t)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(invalid("cavity dimension must be >= 1"));
        }
        if !(self.l > 0.0) || !self.l.is_finite() {
            return Err(invalid(format!("cavity size L = {} must be finite and > 0", self.l)));
        }
        if !(self.t > 0.0) || !self.t.is_finite() {
            return Err(invalid(format!("switching width T = {} must be finite and > 0", self.t)));
        }
        if self.x_d.len() != self.n as usize {
            return Err(invalid(format!(
                "detector position has {} components, cavity has {} axes",
                self.x_d.len(),
                self.n
            )));
        }
        if let Some(x) = self.x_d.iter().find(|&&x| !(x > 0.0 && x < self.l)) {
            return Err(invalid(format!("detector coordinate {x} must lie strictly inside (0, {})", self.l)));
        }
        Ok(())
    }

    pub fn mode_frequency(&self, j: u32) -> f64 {
        j as f64 * PI / self.l
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DepositEntry {
    pub j: u32,
    pub omega_j: f64,
    pub n_j: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DepositSpectrum {
    pub entries: Vec<DepositEntry>,
}

impl DepositSpectrum {
    pub fn argmax(&self) -> Option<u32> {
        self.entries
            .iter()
            .fold(None::<&DepositEntry>, |best, e| match best {
                Some(b) if b.n_j >= e.n_j => Some(b),
                _ => Some(e),
            })
            .map(|e| e.j)
    }

    pub fn total(&self) -> f64 {
        pairwise_sum(&self.entries.iter().map(|e| e.n_j).collect::<Vec<_>>())
    }
}

/// Fourier transform of `exp(-t^2/T^2)`.
pub fn switching_ft(t: f64, omega: f64) -> f64 {
    PI.sqrt() * t * (-0.25 * t * t * omega * omega).exp()
}

/// Dirichlet mode function `(2/L)^{n/2} / sqrt(2|k|) prod sin(k_i x_i)`.
pub fn mode_function(cav: &CavitySpec, index: &[u32]) -> f64 {
    let mut k2 = 0.0;
    let mut prod = 1.0;
    for (&j, &x) in index.iter().zip(&cav.x_d) {
        let k = cav.mode_frequency(j);
        k2 += k * k;
        prod *= mode_sin(cav, j, x);
    }
    (2.0 / cav.l).powf(0.5 * cav.n as f64) / (2.0 * k2.sqrt()).sqrt() * prod
}

/// `sin(pi x)`, exactly zero at integers.
fn sin_pi(x: f64) -> f64 {
    let r = x - 2.0 * (0.5 * x).floor();
    if r == r.round() {
        return 0.0;
    }
    if r <= 0.5 {
        (PI * r).sin()
    } else if r <= 1.5 {
        (PI * (1.0 - r)).sin()
    } else {
        (PI * (r - 2.0)).sin()
    }
}

/// `sin(omega_j x)` for the Dirichlet mode `j`.
fn mode_sin(cav: &CavitySpec, j: u32, x: f64) -> f64 {
    sin_pi(j as f64 * (x / cav.l))
}

pub(crate) fn pairwise_sum(xs: &[f64]) -> f64 {
    if xs.len() <= 8 {
        return xs.iter().sum();
    }
    let mid = xs.len() / 2;
    pairwise_sum(&xs[..mid]) + pairwise_sum(&xs[mid..])
}

fn check_index(cav: &CavitySpec, k0_index: &[u32], sigma: f64) -> Result<()> {
    cav.validate()?;
    if k0_index.len() != cav.n as usize {
        return Err(invalid(format!(
            "peak index has {} components, cavity has {} axes",
            k0_index.len(),
            cav.n
        )));
    }
    if k0_index.contains(&0) {
        return Err(invalid("peak mode indices must be >= 1"));
    }
    if !(sigma > 0.0) || !sigma.is_finite() {
        return Err(invalid(format!("sigma = {sigma} must be finite and > 0")));
    }
    Ok(())
}

/// Normalization `N_sigma` making the lattice spectrum unit-norm.
pub fn discrete_normalization(cav: &CavitySpec, k0_index: &[u32], sigma: f64) -> Result<f64> {
    check_index(cav, k0_index, sigma)?;
    let alpha = PI / (sigma * cav.l);
    let q = (-alpha * alpha).exp();
    let tail = 0.5 * (theta3_nome(q)? - 1.0);
    let mut ln = 0.0;
    for &j0 in k0_index {
        let head: f64 = (0..j0).map(|m| (-(alpha * m as f64).powi(2)).exp()).sum();
        ln -= 0.5 * (head + tail).ln();
    }
    Ok(ln.exp())
}

/// Default per-axis cap `ceil(|k0| L / pi + 12 sigma L / pi + 10)`.
pub fn default_mode_cap(cav: &CavitySpec, k0_index: &[u32], sigma: f64) -> u32 {
    let k0 = k0_norm(cav, k0_index);
    (k0 * cav.l / PI + 12.0 * sigma * cav.l / PI + 10.0).ceil() as u32
}

fn k0_norm(cav: &CavitySpec, k0_index: &[u32]) -> f64 {
    k0_index
        .iter()
        .map(|&j| cav.mode_frequency(j).powi(2))
        .sum::<f64>()
        .sqrt()
}

/// Cap in use and the Gaussian tail weight beyond it, relative to the peak.
pub(crate) fn mode_cap_checked(cav: &CavitySpec, k0_index: &[u32], sigma: f64) -> Result<u32> {
    let cap = cav.mode_cap.unwrap_or_else(|| default_mode_cap(cav, k0_index, sigma));
    let j_top = *k0_index.iter().max().unwrap_or(&1);
    if cap <= j_top {
        return Err(UdwError::Truncation(format!("mode cap {cap} does not exceed the peak index {j_top}")));
    }
    let gap = (cap - j_top) as f64 * PI / (cav.l * sigma);
    let tail = (-0.5 * gap * gap).exp();
    if tail > 1e-10 {
        return Err(UdwError::Truncation(format!(
            "spectral weight beyond mode cap {cap} is {tail:e}, above 1e-10"
        )));
    }
    Ok(cap)
}

/// Visit every multi-index in `[1, cap]^n` in lexicographic order.
pub(crate) fn for_each_index<F: FnMut(&[u32])>(n: usize, cap: u32, mut visit: F) {
    let mut idx = vec![1u32; n];
    loop {
        visit(&idx);
        let mut axis = n;
        loop {
            if axis == 0 {
                return;
            }
            axis -= 1;
            if idx[axis] < cap {
                idx[axis] += 1;
                break;
            }
            idx[axis] = 1;
        }
    }
}

/// `lambda^2 |sum_I f(k_I) chi~(Omega - |k_I|) v_I(x_d)|^2`, co-rotating part only.
pub fn prob_one_cavity(
    cav: &CavitySpec,
    k0_index: &[u32],
    sigma: f64,
    det: &DetectorSpec,
) -> Result<ProbabilityResult> {
    check_index(cav, k0_index, sigma)?;
    det.expect_linear()?;
    if cav.t * det.omega < 5.0 {
        log::warn!(
            "T * Omega = {} < 5: omitted counter-rotating and vacuum terms may not be negligible",
            cav.t * det.omega
        );
    }
    let cap = mode_cap_checked(cav, k0_index, sigma)?;
    let norm = discrete_normalization(cav, k0_index, sigma)?;
    let s2 = sigma * sigma;
    let mut terms = Vec::new();
    for_each_index(cav.n as usize, cap, |idx| {
        let mut d2 = 0.0;
        let mut k2 = 0.0;
        for (&j, &j0) in idx.iter().zip(k0_index) {
            let k = cav.mode_frequency(j);
            let dk = cav.mode_frequency(j) - cav.mode_frequency(j0);
            d2 += dk * dk;
            k2 += k * k;
        }
        let f = (-d2 / (2.0 * s2)).exp();
        if f == 0.0 {
            return;
        }
        terms.push(f * switching_ft(cav.t, det.omega - k2.sqrt()) * mode_function(cav, idx));
    });
    let amplitude = norm * pairwise_sum(&terms);
    let p = det.lambda * det.lambda * amplitude * amplitude;
    let mut r = ProbabilityResult::closed_form(p);
    r.error_estimate = p * 1e-12;
    r.components.push(("amplitude".into(), amplitude));
    r.components.push(("norm".into(), norm));
    Ok(r)
}

/// Monochromatic limit `lambda^2 |chi~(Omega - |k0|) v_{k0}(x_d)|^2`.
pub fn prob_one_cavity_limit(cav: &CavitySpec, k0_index: &[u32], det: &DetectorSpec) -> Result<f64> {
    check_index(cav, k0_index, 1.0)?;
    det.expect_linear()?;
    let a = switching_ft(cav.t, det.omega - k0_norm(cav, k0_index)) * mode_function(cav, k0_index);
    Ok(det.lambda * det.lambda * a * a)
}

fn deposit_checks(cav: &CavitySpec, det: &DetectorSpec, j_max: u32) -> Result<()> {
    cav.validate()?;
    det.validate()?;
    if cav.n != 1 {
        return Err(invalid("energy deposits are defined for a one-dimensional cavity"));
    }
    if j_max == 0 {
        return Err(invalid("j_max must be >= 1"));
    }
    Ok(())
}

/// Mode occupations left by an initially excited, linearly coupled detector.
pub fn deposit_linear(cav: &CavitySpec, det: &DetectorSpec, j_max: u32) -> Result<DepositSpectrum> {
    deposit_checks(cav, det, j_max)?;
    let lt = det.lambda * cav.t;
    let x = cav.x_d[0];
    let entries = (1..=j_max)
        .map(|j| {
            let w = cav.mode_frequency(j);
            let d = cav.t * (det.omega - w);
            let s = mode_sin(cav, j, x);
            DepositEntry {
                j,
                omega_j: w,
                n_j: lt * lt / j as f64 * (-0.5 * d * d).exp() * s * s,
            }
        })
        .collect();
    Ok(DepositSpectrum { entries })
}

fn quad_weight(cav: &CavitySpec, det: &DetectorSpec, j: u32) -> f64 {
    let w = cav.mode_frequency(j);
    let d = cav.t * (det.omega - 2.0 * w);
    let s = mode_sin(cav, j, cav.x_d[0]);
    (-0.25 * d * d).exp() * s * s / j as f64
}

/// Bound on `sum_{k > k_max} e^{-T^2 (Omega - 2 omega_k)^2 / 4} / k`.
pub fn quadratic_tail_bound(cav: &CavitySpec, det: &DetectorSpec, k_max: u32) -> f64 {
    let centre = det.omega * cav.l / (2.0 * PI);
    let k = k_max as f64;
    if k < centre + 1.0 {
        return f64::INFINITY;
    }
    let c = cav.t * PI / cav.l;
    // integral of the decreasing Gaussian from k_max, divided by k_max
    PI.sqrt() / (2.0 * c) * erfc(c * (k - centre)) / k
}

fn default_k_max(cav: &CavitySpec, det: &DetectorSpec) -> u32 {
    let mut k = (det.omega * cav.l / (2.0 * PI)).ceil().max(0.0) as u32 + 1;
    while quadratic_tail_bound(cav, det, k) >= 1e-12 {
        k += 1;
    }
    k
}

/// Mode occupations for the quadratic coupling; the inner mode sum is
/// truncated at `k_max` (chosen automatically when `None`).
pub fn deposit_quadratic(
    cav: &CavitySpec,
    det: &DetectorSpec,
    j_max: u32,
    k_max: Option<u32>,
) -> Result<DepositSpectrum> {
    deposit_checks(cav, det, j_max)?;
    let k_max = match k_max {
        Some(k) => {
            let bound = quadratic_tail_bound(cav, det, k);
            if !(bound < 1e-12) {
                return Err(UdwError::Truncation(format!(
                    "inner sum truncated at k_max = {k} leaves a tail bound {bound:e} >= 1e-12"
                )));
            }
            k
        }
        None => default_k_max(cav, det),
    };
    let inner = pairwise_sum(&(1..=k_max).map(|k| quad_weight(cav, det, k)).collect::<Vec<_>>());
    let lt = det.lambda * cav.t;
    let entries = (1..=j_max)
        .map(|j| DepositEntry {
            j,
            omega_j: cav.mode_frequency(j),
            n_j: 4.0 / PI * lt * lt * quad_weight(cav, det, j) * inner,
        })
        .collect();
    Ok(DepositSpectrum { entries })
}
