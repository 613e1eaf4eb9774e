//! Brute-force reference values.
//!
//! Nothing here touches the Bessel or hypergeometric routines: the angular
//! part of every momentum integral is done by Gauss-Legendre quadrature in
//! the polar angle (nodes generated here by Newton iteration), sphere areas
//! come from their dimensional recursion, and radial integrals use the
//! adaptive integrator.

use std::f64::consts::PI;
use std::sync::OnceLock;

use crate::cavity::{for_each_index, mode_cap_checked, pairwise_sum, CavitySpec};
use crate::error::{invalid, Result, UdwError};
use crate::free_linear::DetectorSpec;
use crate::quadrature::{integrate_semi_infinite_with, integrate_with_breakpoints, QuadratureConfig};
use crate::wavepacket::{normalization_n, overlap_c, TwoParticleSpec, WavepacketSpec, Which};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleConfig {
    pub rel_tol: f64,
    pub angular_points: usize,
    pub ir_cutoff: f64,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig {
            rel_tol: 1e-10,
            angular_points: 32,
            ir_cutoff: 0.0,
        }
    }
}

impl OracleConfig {
    fn validate(&self) -> Result<()> {
        if self.angular_points < 32 {
            return Err(invalid("oracle needs at least 32 angular points"));
        }
        if !(self.rel_tol > 0.0 && self.rel_tol <= 1e-7) {
            return Err(invalid(format!("oracle rel_tol = {} must lie in (0, 1e-7]", self.rel_tol)));
        }
        Ok(())
    }

    fn quad(&self) -> QuadratureConfig {
        QuadratureConfig::relative(self.rel_tol)
    }
}

const MAX_ANGULAR_POINTS: usize = 4096;
const RULE_LEVELS: usize = 13;

struct Rule {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

fn legendre_rule(m: usize) -> Rule {
    let mut nodes = vec![0.0; m];
    let mut weights = vec![0.0; m];
    for i in 0..m.div_ceil(2) {
        let mut x = (PI * (i as f64 + 0.75) / (m as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=m {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            dp = m as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = x;
        nodes[m - 1 - i] = -x;
        weights[i] = w;
        weights[m - 1 - i] = w;
    }
    Rule { nodes, weights }
}

fn rule(points: usize) -> &'static Rule {
    static RULES: [OnceLock<Rule>; RULE_LEVELS] = [const { OnceLock::new() }; RULE_LEVELS];
    let level = points.next_power_of_two().trailing_zeros() as usize;
    RULES[level.min(RULE_LEVELS - 1)].get_or_init(|| legendre_rule(1 << level.min(RULE_LEVELS - 1)))
}

/// Area of the unit sphere `S^m` embedded in `R^{m+1}`.
pub fn sphere_area(m: u32) -> f64 {
    match m {
        0 => 2.0,
        1 => 2.0 * PI,
        _ => 2.0 * PI * sphere_area(m - 2) / (m as f64 - 1.0),
    }
}

fn polar_pass(n: u32, c: f64, g: &dyn Fn(f64) -> f64, points: usize) -> f64 {
    let r = rule(points);
    let mut sum = 0.0;
    for (&x, &w) in r.nodes.iter().zip(&r.weights) {
        let theta = 0.5 * PI * (x + 1.0);
        let (sin, cos) = theta.sin_cos();
        sum += w * sin.powi(n as i32 - 2) * (c * (cos - 1.0)).exp() * g(cos);
    }
    0.5 * PI * sum
}

/// `int dOmega_{n-1} g(cos theta) exp(c (cos theta - 1))` for `c >= 0`.
fn angular(n: u32, c: f64, g: &dyn Fn(f64) -> f64, start: usize) -> f64 {
    if n == 1 {
        return g(1.0) + (-2.0 * c).exp() * g(-1.0);
    }
    let outer = sphere_area(n - 2);
    let mut points = start.next_power_of_two();
    let mut prev = polar_pass(n, c, g, points);
    while points < MAX_ANGULAR_POINTS {
        points *= 2;
        let next = polar_pass(n, c, g, points);
        let converged = (next - prev).abs() <= 1e-12 * next.abs();
        prev = next;
        if converged {
            break;
        }
    }
    outer * prev
}

/// `int dOmega f(K khat)` for the normalized Gaussian peaked at `|k0|`.
fn shell(n: u32, k0: f64, sigma: f64, k: f64, cfg: &OracleConfig) -> f64 {
    let s2 = sigma * sigma;
    let envelope = (PI * s2).powf(-0.25 * n as f64) * (-(k0 - k) * (k0 - k) / (2.0 * s2)).exp();
    if envelope == 0.0 {
        return 0.0;
    }
    envelope * angular(n, k0 * k / s2, &|_| 1.0, cfg.angular_points)
}

fn mode_norm(n: u32) -> f64 {
    (2.0 * (2.0 * PI).powi(n as i32)).sqrt()
}

fn ir_guard(n: u32, cfg: &OracleConfig, scales: &[(&'static str, f64)]) -> Result<()> {
    if n != 1 {
        return Ok(());
    }
    for &(what, scale) in scales {
        if !(scale > cfg.ir_cutoff) {
            return Err(UdwError::IrCutoff {
                what,
                scale,
                cutoff: cfg.ir_cutoff,
            });
        }
    }
    Ok(())
}

/// `2 pi int d^n k f(k) delta(Omega - |k|) / sqrt(2 (2 pi)^n |k|)`.
pub fn oracle_i_minus(wp: &WavepacketSpec, det: &DetectorSpec, cfg: &OracleConfig) -> Result<f64> {
    cfg.validate()?;
    wp.validate()?;
    det.validate()?;
    ir_guard(wp.n, cfg, &[("k0", wp.k0), ("omega", det.omega)])?;
    let w = det.omega;
    Ok(2.0 * PI * w.powf(wp.n as f64 - 1.5) / mode_norm(wp.n) * shell(wp.n, wp.k0, wp.sigma, w, cfg))
}

/// One-particle quadratic amplitude at emitted momentum `k1`.
pub fn oracle_j_minus(wp: &WavepacketSpec, det: &DetectorSpec, k1: f64, cfg: &OracleConfig) -> Result<f64> {
    cfg.validate()?;
    wp.validate()?;
    det.validate()?;
    ir_guard(wp.n, cfg, &[("k0", wp.k0), ("omega", det.omega)])?;
    let e = k1 + det.omega;
    Ok(e.powf(wp.n as f64 - 1.5) / mode_norm(wp.n) * shell(wp.n, wp.k0, wp.sigma, e, cfg))
}

fn radial_breaks(centres: &[f64], sigma: f64, lo: f64) -> Vec<f64> {
    let mut pts: Vec<f64> = centres
        .iter()
        .flat_map(|&c| [-30.0, -6.0, -1.0, 0.0, 1.0, 6.0, 30.0].map(|m| c + m * sigma))
        .filter(|&x| x > lo)
        .collect();
    pts.push(lo + sigma);
    pts.sort_by(f64::total_cmp);
    pts.dedup();
    pts
}

/// Quadratic one-particle probability from the outer integral of the oracle `J_-`.
pub fn oracle_prob_one_quadratic(wp: &WavepacketSpec, det: &DetectorSpec, cfg: &OracleConfig) -> Result<f64> {
    cfg.validate()?;
    wp.validate()?;
    det.validate()?;
    let n = wp.n;
    let lo = if n == 1 { cfg.ir_cutoff } else { 0.0 };
    ir_guard(n, cfg, &[("k0", wp.k0), ("omega", det.omega)])?;
    if n == 1 && lo <= 0.0 {
        return Err(invalid("the n = 1 quadratic probability needs a positive infrared cutoff"));
    }
    let mut pts = radial_breaks(&[wp.k0 - det.omega], wp.sigma, lo);
    if n == 1 {
        let mut x = 10.0 * lo;
        while x < wp.sigma {
            pts.push(x);
            x *= 10.0;
        }
        pts.sort_by(f64::total_cmp);
    }
    let integrand = |k: f64| {
        let e = k + det.omega;
        let j = e.powf(n as f64 - 1.5) / mode_norm(n) * shell(n, wp.k0, wp.sigma, e, cfg);
        k.powi(n as i32 - 2) * j * j
    };
    let r = integrate_semi_infinite_with(integrand, lo, &pts, &cfg.quad())?;
    let pref = 4.0 * det.lambda * det.lambda * (2.0 * PI).powi(2) / (mode_norm(n) * mode_norm(n)) * sphere_area(n - 1);
    Ok(pref * r.value)
}

fn pair_prefactor(spec: &TwoParticleSpec) -> f64 {
    let m = mode_norm(spec.n);
    normalization_n(spec) * 2.0 * PI / (m * m)
}

/// Sum-frequency amplitude by radial quadrature over the first momentum with
/// both shell integrals done on the angular grid.
pub fn oracle_r_minus(spec: &TwoParticleSpec, det: &DetectorSpec, cfg: &OracleConfig) -> Result<f64> {
    cfg.validate()?;
    spec.validate()?;
    det.validate()?;
    let n = spec.n;
    ir_guard(n, cfg, &[("eta1", spec.eta1), ("eta2", spec.eta2), ("omega", det.omega)])?;
    let w = det.omega;
    let nf = n as f64;
    let weight = |k: f64, q: f64| (k * q).powf(nf - 1.5) * shell(n, spec.eta1, spec.sigma, k, cfg) * shell(n, spec.eta2, spec.sigma, q, cfg);
    // k = u^2 on [0, Omega/2], Omega - k = u^2 on [Omega/2, Omega]
    let half = (0.5 * w).sqrt();
    let low = |u: f64| 2.0 * u * weight(u * u, w - u * u);
    let high = |u: f64| 2.0 * u * weight(w - u * u, u * u);
    let q = cfg.quad();
    let a = integrate_with_breakpoints(low, &sqrt_breaks(&[spec.eta1, w - spec.eta2], spec.sigma, half), &q)?;
    let b = integrate_with_breakpoints(high, &sqrt_breaks(&[w - spec.eta1, spec.eta2], spec.sigma, half), &q)?;
    Ok(pair_prefactor(spec) * (a.value + b.value))
}

fn sqrt_breaks(centres: &[f64], sigma: f64, top: f64) -> Vec<f64> {
    let mut pts = vec![0.0, top];
    for &c in centres {
        for m in [-6.0, 0.0, 6.0] {
            let x = c + m * sigma;
            if x > 0.0 && x.sqrt() < top {
                pts.push(x.sqrt());
            }
        }
    }
    pts.sort_by(f64::total_cmp);
    pts.dedup();
    pts
}

/// Difference-frequency amplitude: peak `i` at `|k|`, peak `j` at `|k| + Omega`.
pub fn oracle_s_minus(
    spec: &TwoParticleSpec,
    det: &DetectorSpec,
    ordered: (Which, Which),
    cfg: &OracleConfig,
) -> Result<f64> {
    cfg.validate()?;
    spec.validate()?;
    det.validate()?;
    let n = spec.n;
    ir_guard(n, cfg, &[("eta1", spec.eta1), ("eta2", spec.eta2), ("omega", det.omega)])?;
    let (ei, ej) = (spec.eta(ordered.0), spec.eta(ordered.1));
    let w = det.omega;
    let nf = n as f64;
    let integrand = |u: f64| {
        let k = u * u;
        let q = k + w;
        2.0 * u * (k * q).powf(nf - 1.5) * shell(n, ei, spec.sigma, k, cfg) * shell(n, ej, spec.sigma, q, cfg)
    };
    let mut pts: Vec<f64> = radial_breaks(&[ei, ej - w], spec.sigma, 0.0).into_iter().map(f64::sqrt).collect();
    pts.sort_by(f64::total_cmp);
    let r = integrate_semi_infinite_with(integrand, 0.0, &pts, &cfg.quad())?;
    Ok(pair_prefactor(spec) * r.value)
}

/// `p_q` of the two-particle quadratic response from oracle amplitudes.
pub fn oracle_p_q(spec: &TwoParticleSpec, det: &DetectorSpec, cfg: &OracleConfig) -> Result<f64> {
    cfg.validate()?;
    spec.validate()?;
    let n = spec.n;
    let lo = if n == 1 { cfg.ir_cutoff } else { 0.0 };
    let c = overlap_c(spec);
    let nn = normalization_n(spec);
    let j = |eta: f64, k: f64| {
        let e = k + det.omega;
        nn * e.powf(n as f64 - 1.5) / mode_norm(n) * shell(n, eta, spec.sigma, e, cfg)
    };
    let integrand = |k: f64| {
        let (q1, q2) = (j(spec.eta1, k), j(spec.eta2, k));
        k.powi(n as i32 - 2) * (q1 * q1 + q2 * q2 + 2.0 * c * q1 * q2)
    };
    let pts = radial_breaks(&[spec.eta1 - det.omega, spec.eta2 - det.omega], spec.sigma, lo);
    let r = integrate_semi_infinite_with(integrand, lo, &pts, &cfg.quad())?;
    let pref = 4.0 * det.lambda * det.lambda * (2.0 * PI).powi(2) / (mode_norm(n) * mode_norm(n)) * sphere_area(n - 1);
    Ok(pref * r.value)
}

/// `int d^n k |f(k)|^2` by radial times angular quadrature.
pub fn oracle_norm(wp: &WavepacketSpec, cfg: &OracleConfig) -> Result<f64> {
    moment(wp, cfg, 0.0)
}

/// `int d^n k |k| |f(k)|^2`, integrated from `cfg.ir_cutoff` for `n = 1`.
pub fn oracle_energy_expectation(wp: &WavepacketSpec, cfg: &OracleConfig) -> Result<f64> {
    moment(wp, cfg, 1.0)
}

fn moment(wp: &WavepacketSpec, cfg: &OracleConfig, power: f64) -> Result<f64> {
    cfg.validate()?;
    wp.validate()?;
    let (n, k0, s) = (wp.n, wp.k0, wp.sigma);
    let s2 = s * s;
    let lo = if n == 1 { cfg.ir_cutoff } else { 0.0 };
    let integrand = |k: f64| {
        let env = (PI * s2).powf(-0.5 * n as f64) * (-(k0 - k) * (k0 - k) / s2).exp();
        if env == 0.0 {
            return 0.0;
        }
        k.powf(n as f64 - 1.0 + power) * env * angular(n, 2.0 * k0 * k / s2, &|_| 1.0, cfg.angular_points)
    };
    let pts = radial_breaks(&[k0], s / 2f64.sqrt(), lo);
    Ok(integrate_semi_infinite_with(integrand, lo, &pts, &cfg.quad())?.value)
}

/// `<:T_tt(0):>` from the two radial-angular integrals `A` and `B`.
pub fn oracle_energy_density(wp: &WavepacketSpec, cfg: &OracleConfig) -> Result<f64> {
    cfg.validate()?;
    wp.validate()?;
    let (n, k0, s) = (wp.n, wp.k0, wp.sigma);
    let s2 = s * s;
    let part = |g: &dyn Fn(f64) -> f64| -> Result<f64> {
        let integrand = |k: f64| {
            let env = (PI * s2).powf(-0.25 * n as f64) * (-(k0 - k) * (k0 - k) / (2.0 * s2)).exp();
            if env == 0.0 {
                return 0.0;
            }
            k.powf(n as f64 - 0.5) * env * angular(n, k0 * k / s2, g, cfg.angular_points)
        };
        let pts = radial_breaks(&[k0], s, 0.0);
        Ok(integrate_semi_infinite_with(integrand, 0.0, &pts, &cfg.quad())?.value)
    };
    let a = part(&|_| 1.0)?;
    let b = part(&|cos| cos)?;
    let m = mode_norm(n);
    Ok((a * a + b * b) / (m * m))
}

fn lattice_sum(cav: &CavitySpec, k0_index: &[u32], sigma: f64) -> Result<f64> {
    let cap = mode_cap_checked(cav, k0_index, sigma)?;
    let mut terms = Vec::new();
    for_each_index(cav.n as usize, cap, |idx| {
        let d2: f64 = idx
            .iter()
            .zip(k0_index)
            .map(|(&j, &j0)| (cav.mode_frequency(j) - cav.mode_frequency(j0)).powi(2))
            .sum();
        terms.push((-d2 / (sigma * sigma)).exp());
    });
    Ok(pairwise_sum(&terms))
}

/// `1 / sqrt(sum_I |f(k_I)|^2)` by direct lattice summation.
pub fn oracle_lattice_normalization(cav: &CavitySpec, k0_index: &[u32], sigma: f64) -> Result<f64> {
    Ok(lattice_sum(cav, k0_index, sigma)?.powf(-0.5))
}

/// `sum_I |N_sigma f(k_I)|^2` with the closed-form `N_sigma`; should be one.
pub fn oracle_lattice_norm(cav: &CavitySpec, k0_index: &[u32], sigma: f64) -> Result<f64> {
    let n = crate::cavity::discrete_normalization(cav, k0_index, sigma)?;
    Ok(n * n * lattice_sum(cav, k0_index, sigma)?)
}
