//! Quadratic coupling in free space, long-time pointlike limit.
//!
//! Only co-rotating amplitudes contribute for a ground-state detector. The
//! one-particle response needs a single outer radial integral over the
//! momentum of the emitted quantum; the two-particle response splits into the
//! `Q` (one quantum absorbed, one emitted), `R` (both absorbed, sum frequency)
//! and `S` (one absorbed, one emitted from the packet, difference frequency)
//! channels.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::free_linear::{DetectorSpec, ProbabilityResult};
use crate::quadrature::{integrate_semi_infinite_with, integrate_with_breakpoints, QuadratureConfig};
use crate::specfun::unit_sphere_area;
use crate::wavepacket::{
    check_ir, effective_ir_cutoff, ln_shell, normalization_n, overlap_c, peak_breakpoints, TwoParticleSpec,
    WavepacketSpec, Which,
};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadraticComponents {
    pub p_q: f64,
    pub p_r: f64,
    pub p_s: f64,
    pub total: f64,
    pub error_estimate: f64,
}

impl From<QuadraticComponents> for ProbabilityResult {
    fn from(c: QuadraticComponents) -> Self {
        ProbabilityResult {
            value: c.total,
            error_estimate: c.error_estimate,
            components: vec![("p_q".into(), c.p_q), ("p_r".into(), c.p_r), ("p_s".into(), c.p_s)],
        }
    }
}

fn ln_mode_norm(n: u32) -> f64 {
    -0.5 * (2.0 * (2.0 * PI).powf(n as f64)).ln()
}

pub(crate) fn ln_j_minus_raw(n: u32, k0: f64, sigma: f64, omega: f64, k1: f64) -> f64 {
    let e = k1 + omega;
    (n as f64 - 1.5) * e.ln() + ln_mode_norm(n) + ln_shell(n, k0, sigma, e)
}

fn cutoff_for(n: u32, explicit: Option<f64>, scales: &[f64]) -> f64 {
    if n == 1 {
        effective_ir_cutoff(explicit, scales)
    } else {
        0.0
    }
}

/// Amplitude for absorbing the packet quantum and emitting one of momentum `k1`.
pub fn j_minus(wp: &WavepacketSpec, det: &DetectorSpec, k1: f64) -> Result<f64> {
    wp.validate()?;
    det.validate()?;
    let cutoff = cutoff_for(wp.n, wp.ir_cutoff, &[wp.k0, wp.sigma, det.omega]);
    check_ir(wp.n, cutoff, &[("k0", wp.k0), ("omega", det.omega)])?;
    if !(k1 >= 0.0) {
        return Err(crate::error::invalid(format!("k1 = {k1} must be >= 0")));
    }
    Ok(ln_j_minus_raw(wp.n, wp.k0, wp.sigma, det.omega, k1).exp())
}

// Breakpoints for the outer radial integral: the packet peaks at `centres`
// and, for n = 1, geometric points resolving the 1/k growth above the cutoff.
fn outer_breakpoints(n: u32, lo: f64, centres: &[f64], sigma: f64) -> Vec<f64> {
    let mut pts = Vec::new();
    if n == 1 && lo > 0.0 {
        let mut x = 10.0 * lo;
        while x < sigma {
            pts.push(x);
            x *= 10.0;
        }
    }
    for &c in centres {
        pts.extend(peak_breakpoints(c, sigma, lo));
    }
    pts.push(lo + sigma);
    pts.retain(|&x| x > lo);
    pts.sort_by(f64::total_cmp);
    pts.dedup();
    pts
}

fn outer_integral<F: Fn(f64) -> f64>(n: u32, lo: f64, centres: &[f64], sigma: f64, rel_tol: f64, g: F) -> Result<(f64, f64)> {
    let nf = n as f64;
    let pts = outer_breakpoints(n, lo, centres, sigma);
    let cfg = QuadratureConfig::relative(rel_tol);
    let r = integrate_semi_infinite_with(|k| k.powf(nf - 2.0) * g(k), lo, &pts, &cfg)?;
    Ok((r.value, r.error_estimate))
}

pub fn prob_one_quadratic(wp: &WavepacketSpec, det: &DetectorSpec, rel_tol: f64) -> Result<ProbabilityResult> {
    wp.validate()?;
    det.expect_quadratic()?;
    let (n, k0, s, w) = (wp.n, wp.k0, wp.sigma, det.omega);
    let lo = cutoff_for(n, wp.ir_cutoff, &[k0, s, w]);
    check_ir(n, lo, &[("k0", k0), ("omega", w)])?;
    let (integral, err) = outer_integral(n, lo, &[k0 - w], s, rel_tol, |k| {
        (2.0 * ln_j_minus_raw(n, k0, s, w, k)).exp()
    })?;
    let pref = 4.0 * det.lambda * det.lambda * (2.0 * PI).powi(2) / (2.0 * (2.0 * PI).powf(n as f64))
        * unit_sphere_area(n)
        * det.smearing_factor();
    Ok(ProbabilityResult {
        value: pref * integral,
        error_estimate: pref * err,
        components: Vec::new(),
    })
}

fn two_guard(spec: &TwoParticleSpec, det: &DetectorSpec) -> Result<f64> {
    spec.validate()?;
    det.validate()?;
    let lo = cutoff_for(spec.n, spec.ir_cutoff, &[spec.eta1, spec.eta2, spec.sigma, det.omega]);
    check_ir(spec.n, lo, &[("eta1", spec.eta1), ("eta2", spec.eta2), ("omega", det.omega)])?;
    Ok(lo)
}

/// `Q_-` for the selected peak: `N` times `J_-` with that peak as centre.
pub fn q_minus(spec: &TwoParticleSpec, det: &DetectorSpec, which: Which, k1: f64) -> Result<f64> {
    two_guard(spec, det)?;
    let wp = spec.single(which);
    Ok(normalization_n(spec) * ln_j_minus_raw(wp.n, wp.k0, wp.sigma, det.omega, k1).exp())
}

fn ln_pair_prefactor(n: u32) -> f64 {
    (2.0 * PI).ln() + 2.0 * ln_mode_norm(n)
}

/// Sum-frequency amplitude: both packet quanta absorbed, `|k| + |k'| = Omega`.
pub fn r_minus(spec: &TwoParticleSpec, det: &DetectorSpec, rel_tol: f64) -> Result<f64> {
    r_minus_with_error(spec, det, rel_tol).map(|r| r.0)
}

fn r_minus_with_error(spec: &TwoParticleSpec, det: &DetectorSpec, rel_tol: f64) -> Result<(f64, f64)> {
    two_guard(spec, det)?;
    let (n, s, w) = (spec.n, spec.sigma, det.omega);
    let (e1, e2) = (spec.eta1, spec.eta2);
    let nf = n as f64;
    let pref = normalization_n(spec) * ln_pair_prefactor(n).exp();
    // k = Omega (1 - cos phi)/2 turns (k (Omega - k))^{n-3/2} dk into (Omega sin(phi)/2)^{2n-2} dphi
    let to_phi = |k: f64| (1.0 - 2.0 * k / w).clamp(-1.0, 1.0).acos();
    let mut pts = vec![0.0, PI];
    for c in [e1, w - e2] {
        pts.extend(
            peak_breakpoints(c, s, 0.0)
                .into_iter()
                .filter(|&x| x < w)
                .map(to_phi),
        );
    }
    pts.sort_by(f64::total_cmp);
    pts.dedup();
    let integrand = |phi: f64| {
        let (sin, cos) = phi.sin_cos();
        let k = 0.5 * w * (1.0 - cos);
        let q = 0.5 * w * (1.0 + cos);
        let h = 0.5 * w * sin;
        if !(h > 0.0) {
            return 0.0;
        }
        ((2.0 * nf - 2.0) * h.ln() + ln_shell(n, e1, s, k) + ln_shell(n, e2, s, q)).exp()
    };
    let r = integrate_with_breakpoints(integrand, &pts, &QuadratureConfig::relative(rel_tol))?;
    Ok((pref * r.value, pref * r.error_estimate))
}

/// Difference-frequency amplitude: peak `i` supplies the quantum at `|k|`,
/// peak `j` the one at `|k| + Omega`.
pub fn s_minus(spec: &TwoParticleSpec, det: &DetectorSpec, ordered: (Which, Which), rel_tol: f64) -> Result<f64> {
    s_minus_with_error(spec, det, ordered, rel_tol).map(|r| r.0)
}

fn s_minus_with_error(
    spec: &TwoParticleSpec,
    det: &DetectorSpec,
    ordered: (Which, Which),
    rel_tol: f64,
) -> Result<(f64, f64)> {
    two_guard(spec, det)?;
    let (n, s, w) = (spec.n, spec.sigma, det.omega);
    let (ei, ej) = (spec.eta(ordered.0), spec.eta(ordered.1));
    let nf = n as f64;
    let pref = normalization_n(spec) * ln_pair_prefactor(n).exp();
    // k = u^2 turns k^{n-3/2} dk into 2 u^{2n-2} du
    let mut pts = peak_breakpoints(ei, s, 0.0);
    pts.extend(peak_breakpoints(ej - w, s, 0.0));
    pts.push(s);
    let mut pts: Vec<f64> = pts.into_iter().map(f64::sqrt).collect();
    pts.sort_by(f64::total_cmp);
    pts.dedup();
    let integrand = |u: f64| {
        if !(u > 0.0) {
            return 0.0;
        }
        let k = u * u;
        let q = w + k;
        2.0 * ((2.0 * nf - 2.0) * u.ln() + (nf - 1.5) * q.ln() + ln_shell(n, ei, s, k) + ln_shell(n, ej, s, q)).exp()
    };
    let r = integrate_semi_infinite_with(integrand, 0.0, &pts, &QuadratureConfig::relative(rel_tol))?;
    Ok((pref * r.value, pref * r.error_estimate))
}

pub fn prob_two_quadratic(spec: &TwoParticleSpec, det: &DetectorSpec, rel_tol: f64) -> Result<QuadraticComponents> {
    det.expect_quadratic()?;
    let lo = two_guard(spec, det)?;
    let (n, s, w) = (spec.n, spec.sigma, det.omega);
    let (e1, e2) = (spec.eta1, spec.eta2);
    let l2 = 4.0 * det.lambda * det.lambda * det.smearing_factor();
    let c = overlap_c(spec);
    let nn = normalization_n(spec);

    let (q_int, q_err) = outer_integral(n, lo, &[e1 - w, e2 - w], s, rel_tol, |k| {
        let q1 = nn * ln_j_minus_raw(n, e1, s, w, k).exp();
        let q2 = nn * ln_j_minus_raw(n, e2, s, w, k).exp();
        q1 * q1 + q2 * q2 + 2.0 * c * q1 * q2
    })?;
    let q_pref = l2 * (2.0 * PI).powi(2) / (2.0 * (2.0 * PI).powf(n as f64)) * unit_sphere_area(n);
    let p_q = q_pref * q_int;

    let (r, r_err) = r_minus_with_error(spec, det, rel_tol)?;
    let p_r = l2 * r * r;

    let (s12, e12) = s_minus_with_error(spec, det, (Which::Eta1, Which::Eta2), rel_tol)?;
    let (s21, e21) = s_minus_with_error(spec, det, (Which::Eta2, Which::Eta1), rel_tol)?;
    let (s11, e11) = s_minus_with_error(spec, det, (Which::Eta1, Which::Eta1), rel_tol)?;
    let (s22, e22) = s_minus_with_error(spec, det, (Which::Eta2, Which::Eta2), rel_tol)?;
    let p_s = l2 * (s12 * s12 + s21 * s21 + 2.0 * s11 * s22);

    let err_s = l2 * 2.0 * (s12.abs() * e12 + s21.abs() * e21 + s11.abs() * e22 + s22.abs() * e11 + e11 * e22);
    let error_estimate = q_pref * q_err + l2 * (2.0 * r.abs() * r_err + r_err * r_err) + err_s;
    Ok(QuadraticComponents {
        p_q,
        p_r,
        p_s,
        total: p_q + p_r + p_s,
        error_estimate,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn n1_explicit_j_minus() {
        let (k0, s, w) = (1.0, 0.3, 0.8);
        let wp = WavepacketSpec::new(1, k0, s).unwrap();
        let det = DetectorSpec::quadratic(w, 1.0);
        for &k1 in &[0.01, 0.5, 2.0] {
            let e: f64 = w + k1;
            let g = |a: f64| (-a * a / (2.0 * s * s)).exp();
            let explicit = (PI * s * s).powf(-0.25) / (4.0 * PI * e).sqrt() * (g(e + k0) + g(e - k0));
            assert_relative_eq!(j_minus(&wp, &det, k1).unwrap(), explicit, max_relative = 1e-12);
        }
    }

    #[test]
    fn j_minus_decays() {
        let wp = WavepacketSpec::new(3, 1.0, 0.5).unwrap();
        let det = DetectorSpec::quadratic(1.0, 1.0);
        assert!(j_minus(&wp, &det, 40.0).unwrap() < 1e-100);
    }

    #[test]
    fn same_mode_consistency() {
        for n in 1..=3 {
            let spec = TwoParticleSpec::new(n, 1.0, 1.0, 0.5).unwrap();
            let det = DetectorSpec::quadratic(1.0, 1.0);
            let one = prob_one_quadratic(&spec.single(Which::Eta1), &det, 1e-11).unwrap().value;
            let two = prob_two_quadratic(&spec, &det, 1e-11).unwrap();
            assert_relative_eq!(two.p_q, 2.0 * one, max_relative = 1e-10);
            assert_relative_eq!(two.total, two.p_q + two.p_r + two.p_s, max_relative = 1e-12);
            let q = q_minus(&spec, &det, Which::Eta1, 0.3).unwrap();
            let j = j_minus(&spec.single(Which::Eta1), &det, 0.3).unwrap();
            assert_relative_eq!(q, j / 2f64.sqrt(), max_relative = 1e-14);
        }
    }

    #[test]
    fn s_minus_symmetric_point() {
        let spec = TwoParticleSpec::new(3, 1.5, 1.5, 0.5).unwrap();
        let det = DetectorSpec::quadratic(1.0, 1.0);
        let a = s_minus(&spec, &det, (Which::Eta1, Which::Eta2), 1e-10).unwrap();
        let b = s_minus(&spec, &det, (Which::Eta2, Which::Eta1), 1e-10).unwrap();
        assert_relative_eq!(a, b, max_relative = 1e-12);
    }

    #[test]
    fn r_minus_vanishes_for_small_gap() {
        let spec = TwoParticleSpec::new(3, 1.0, 3.0, 0.5).unwrap();
        let tiny = r_minus(&spec, &DetectorSpec::quadratic(1e-4, 1.0), 1e-9).unwrap();
        let peak = r_minus(&spec, &DetectorSpec::quadratic(4.0, 1.0), 1e-9).unwrap();
        assert!(tiny < 1e-12 * peak);
    }

    #[test]
    fn s_minus_vanishes_for_large_gap() {
        let spec = TwoParticleSpec::new(3, 1.0, 3.0, 0.5).unwrap();
        let v = s_minus(&spec, &DetectorSpec::quadratic(40.0, 1.0), (Which::Eta1, Which::Eta2), 1e-9).unwrap();
        assert!(v < 1e-100);
    }
}
