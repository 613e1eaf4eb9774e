//! Special functions used by the closed-form response expressions.
//!
//! Everything here works on real arguments only. Functions whose value can
//! leave the `f64` range return a [`SpecFunResult`] carrying the natural log
//! of the magnitude; callers combine those logs with the Gaussian prefactors
//! before exponentiating, which keeps the monochromatic limit finite.

use std::f64::consts::PI;

use crate::error::{domain, Result, UdwError};

/// Value of a special function together with `ln |value|`.
///
/// When the magnitude is not representable as an `f64`, `value` holds only
/// the sign (`±1.0`) and `log_scaled` carries the magnitude.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpecFunResult {
    pub value: f64,
    pub log_scaled: Option<f64>,
}

impl SpecFunResult {
    fn from_ln(ln_abs: f64, sign: f64) -> Self {
        let magnitude = ln_abs.exp();
        if magnitude.is_finite() && magnitude > 0.0 {
            SpecFunResult {
                value: sign * magnitude,
                log_scaled: Some(ln_abs),
            }
        } else {
            SpecFunResult {
                value: sign,
                log_scaled: Some(ln_abs),
            }
        }
    }

    fn direct(value: f64) -> Self {
        SpecFunResult {
            value,
            log_scaled: None,
        }
    }

    /// Natural log of the magnitude.
    pub fn ln_abs(&self) -> f64 {
        self.log_scaled.unwrap_or_else(|| self.value.abs().ln())
    }

    /// True when `value` is the actual function value rather than a sign.
    pub fn is_representable(&self) -> bool {
        match self.log_scaled {
            None => true,
            Some(l) => {
                let m = l.exp();
                m.is_finite() && m > 0.0
            }
        }
    }
}

/// Series/asymptotic switchover point for `I_nu` and `0F1~`.
pub fn bessel_switchover(nu: f64) -> f64 {
    30.0 * (1.0 + nu.abs())
}

/// `e^{-x} I_nu(x)` for `nu >= -1/2`, `x >= 0`.
pub fn bessel_i_scaled(nu: f64, x: f64) -> Result<SpecFunResult> {
    if !(x >= 0.0) || !x.is_finite() {
        return Err(domain("bessel_i_scaled", format!("x = {x} must be finite and >= 0")));
    }
    if !(nu >= -0.5) || !nu.is_finite() {
        return Err(domain("bessel_i_scaled", format!("order {nu} must be >= -1/2")));
    }
    if x == 0.0 {
        return if nu == 0.0 {
            Ok(SpecFunResult::direct(1.0))
        } else if nu > 0.0 {
            Ok(SpecFunResult::direct(0.0))
        } else {
            Err(domain("bessel_i_scaled", "I_{-1/2} is singular at x = 0"))
        };
    }
    let ln = ln_bessel_i_scaled(nu, x);
    Ok(SpecFunResult::from_ln(ln, 1.0))
}

/// `ln(e^{-x} I_nu(x))` for `x > 0`; no domain checks.
pub(crate) fn ln_bessel_i_scaled(nu: f64, x: f64) -> f64 {
    if is_half_integer(nu) && x >= half_integer_closed_form_threshold(nu) {
        return half_integer_scaled(nu, x).ln();
    }
    if x <= bessel_switchover(nu) {
        ln_bessel_series_scaled(nu, x)
    } else {
        ln_bessel_asymptotic_scaled(nu, x)
    }
}

fn is_half_integer(nu: f64) -> bool {
    let twice = 2.0 * nu;
    twice == twice.round() && (twice.round() as i64).rem_euclid(2) == 1
}

// Upward recurrence loses digits once the order exceeds ~sqrt(x).
fn half_integer_closed_form_threshold(nu: f64) -> f64 {
    (nu * nu).max(2.0)
}

/// Closed hyperbolic forms `I_{-1/2}`, `I_{1/2}` lifted by upward recurrence.
fn half_integer_scaled(nu: f64, x: f64) -> f64 {
    let pref = 1.0 / (2.0 * PI * x).sqrt();
    let e2 = (-2.0 * x).exp();
    let minus_half = pref * (1.0 + e2);
    let plus_half = pref * -(-2.0 * x).exp_m1();
    if nu < 0.0 {
        return minus_half;
    }
    let (mut prev, mut cur) = (minus_half, plus_half);
    let mut order = 0.5;
    while order < nu - 0.25 {
        let next = prev - 2.0 * order / x * cur;
        prev = cur;
        cur = next;
        order += 1.0;
    }
    cur
}

fn ln_bessel_series_scaled(nu: f64, x: f64) -> f64 {
    let q = 0.25 * x * x;
    let ln_head = nu * (0.5 * x).ln() - ln_gamma(nu + 1.0) - x;
    let mut term = 1.0;
    let mut sum = 1.0;
    let mut m = 0.0;
    loop {
        term *= q / ((m + 1.0) * (m + nu + 1.0));
        sum += term;
        m += 1.0;
        if term < 1e-17 * sum && m > 0.5 * x {
            break;
        }
        if m > 10_000.0 {
            break;
        }
    }
    ln_head + sum.ln()
}

fn ln_bessel_asymptotic_scaled(nu: f64, x: f64) -> f64 {
    let mu = 4.0 * nu * nu;
    let mut term = 1.0;
    let mut sum = 1.0;
    let mut k = 1.0;
    loop {
        let odd = 2.0 * k - 1.0;
        let next = -term * (mu - odd * odd) / (8.0 * k * x);
        if next == 0.0 || next.abs() >= term.abs() {
            break;
        }
        term = next;
        sum += term;
        if term.abs() < 1e-17 * sum.abs() {
            break;
        }
        k += 1.0;
    }
    sum.ln() - 0.5 * (2.0 * PI * x).ln()
}

/// Regularized `0F1~(; b; z) = sum z^m / (m! Gamma(b+m))` for `b > 0`, `z >= 0`.
pub fn hyp0f1_reg(b: f64, z: f64) -> Result<SpecFunResult> {
    if !(b > 0.0) || !b.is_finite() {
        return Err(domain("hyp0f1_reg", format!("b = {b} must be > 0")));
    }
    if !(z >= 0.0) || !z.is_finite() {
        return Err(domain("hyp0f1_reg", format!("z = {z} must be finite and >= 0")));
    }
    Ok(SpecFunResult::from_ln(ln_hyp0f1_reg(b, z), 1.0))
}

/// `ln 0F1~(b; z)`; no domain checks.
pub(crate) fn ln_hyp0f1_reg(b: f64, z: f64) -> f64 {
    if z == 0.0 {
        return -ln_gamma(b);
    }
    let nu = b - 1.0;
    let x = 2.0 * z.sqrt();
    if x <= bessel_switchover(nu) {
        let mut term = 1.0;
        let mut sum = 1.0;
        let mut m = 0.0;
        loop {
            term *= z / ((m + 1.0) * (b + m));
            sum += term;
            m += 1.0;
            if term < 1e-17 * sum && m > x {
                break;
            }
            if m > 10_000.0 {
                break;
            }
        }
        sum.ln() - ln_gamma(b)
    } else {
        // I_{b-1}(2 sqrt z) = z^{(b-1)/2} 0F1~(b; z)
        let ln_i = if nu >= -0.5 {
            ln_bessel_i_scaled(nu, x)
        } else {
            ln_bessel_asymptotic_scaled(nu, x)
        };
        ln_i + x - 0.5 * nu * z.ln()
    }
}

/// Regularized Kummer function `1F1~(a; b; z) = 1F1(a; b; z) / Gamma(b)` for `z <= 0`.
///
/// Only `a < b` is needed (the energy expectation uses `a = -1/2`, `b = n/2`).
pub fn hyp1f1_reg(a: f64, b: f64, z: f64) -> Result<SpecFunResult> {
    if !(b > 0.0) || !b.is_finite() {
        return Err(domain("hyp1f1_reg", format!("b = {b} must be > 0")));
    }
    if !(z <= 0.0) || !z.is_finite() {
        return Err(domain("hyp1f1_reg", format!("z = {z} must be finite and <= 0")));
    }
    if !(b - a > 0.0) {
        return Err(domain("hyp1f1_reg", format!("requires b - a > 0, got a = {a}, b = {b}")));
    }
    let x = -z;
    if x <= 40.0 {
        // Kummer transformation: 1F1(a;b;-x) = e^{-x} 1F1(b-a; b; x), all terms positive.
        let c = b - a;
        let mut term = 1.0;
        let mut sum = 1.0;
        let mut m = 0.0;
        loop {
            term *= (c + m) * x / ((m + 1.0) * (b + m));
            sum += term;
            m += 1.0;
            if term < 1e-17 * sum && m > x {
                break;
            }
            if m > 10_000.0 {
                break;
            }
        }
        Ok(SpecFunResult::from_ln(sum.ln() - x - ln_gamma(b), 1.0))
    } else {
        // Large negative argument; the e^{-x} x^{a-b} branch is below 1e-17 here.
        let mut term = 1.0;
        let mut sum = 1.0;
        let mut s = 0.0;
        loop {
            let next = term * (a + s) * (a - b + 1.0 + s) / ((s + 1.0) * x);
            if next == 0.0 || next.abs() >= term.abs() {
                break;
            }
            term = next;
            sum += term;
            if term.abs() < 1e-17 * sum.abs() {
                break;
            }
            s += 1.0;
        }
        let g = gamma_reciprocal_sign(b - a);
        let ln_abs = -a * x.ln() - ln_gamma(b - a) + sum.abs().ln();
        Ok(SpecFunResult::from_ln(ln_abs, g * sum.signum()))
    }
}

fn gamma_reciprocal_sign(x: f64) -> f64 {
    if x > 0.0 {
        1.0
    } else if ((-x).floor() as i64) % 2 == 0 {
        -1.0
    } else {
        1.0
    }
}

/// Jacobi theta function `theta_3(0, q) = 1 + 2 sum_{m>=1} q^{m^2}` for `0 <= q < 1`.
pub fn theta3_nome(q: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&q) {
        return Err(domain("theta3_nome", format!("nome q = {q} must lie in [0, 1)")));
    }
    if q <= 0.5 {
        Ok(theta3_direct(q))
    } else {
        // q = e^{-pi t}:  theta_3(0, q) = t^{-1/2} theta_3(0, e^{-pi / t})
        let t = -q.ln() / PI;
        Ok(theta3_direct((-PI / t).exp()) / t.sqrt())
    }
}

pub(crate) fn theta3_direct(q: f64) -> f64 {
    if q == 0.0 {
        return 1.0;
    }
    let mut partial = 0.0;
    let mut m = 1u64;
    loop {
        let term = q.powf((m * m) as f64);
        partial += term;
        if term < 1e-16 * partial || term == 0.0 {
            break;
        }
        m += 1;
    }
    1.0 + 2.0 * partial
}

pub fn erf(x: f64) -> f64 {
    libm::erf(x)
}

pub fn erfc(x: f64) -> f64 {
    libm::erfc(x)
}

/// Gamma function; errors at the poles `0, -1, -2, ...`.
pub fn gamma(x: f64) -> Result<f64> {
    if x <= 0.0 && x == x.floor() {
        return Err(UdwError::Pole(x));
    }
    Ok(libm::tgamma(x))
}

/// `ln |Gamma(x)|`.
pub fn ln_gamma(x: f64) -> f64 {
    libm::lgamma(x)
}

/// Area of the unit sphere `S^{n-1}` in `R^n`: `2 pi^{n/2} / Gamma(n/2)`.
/// For `n = 1` this is the two-point "sphere" `{-1, +1}`.
pub fn unit_sphere_area(n: u32) -> f64 {
    let h = 0.5 * n as f64;
    2.0 * (h * PI.ln() - ln_gamma(h)).exp()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn bessel_at_origin() {
        assert_eq!(bessel_i_scaled(0.0, 0.0).unwrap().value, 1.0);
        assert_eq!(bessel_i_scaled(1.0, 0.0).unwrap().value, 0.0);
        assert!(bessel_i_scaled(-0.5, 0.0).is_err());
    }

    #[test]
    fn bessel_domain_errors() {
        assert!(bessel_i_scaled(0.0, -1.0).is_err());
        assert!(bessel_i_scaled(-1.0, 1.0).is_err());
        assert!(bessel_i_scaled(0.0, f64::NAN).is_err());
    }

    #[test]
    fn bessel_half_order_frozen() {
        // e^{-1} sqrt(2/pi) sinh(1), 30-digit arithmetic
        let v = bessel_i_scaled(0.5, 1.0).unwrap().value;
        assert_relative_eq!(v, 0.344_951_313_888_244_6, max_relative = 1e-14);
    }

    #[test]
    fn bessel_large_argument_frozen() {
        // e^{-700} I_0(700), 40-digit arithmetic
        let v = bessel_i_scaled(0.0, 700.0).unwrap().value;
        assert_relative_eq!(v, 0.015_081_295_651_531_358, max_relative = 1e-12);
        assert_relative_eq!(v, 1.0 / (2.0 * PI * 700.0).sqrt(), max_relative = 2e-4);
    }

    #[test]
    fn branches_agree_at_switchover() {
        for &nu in &[0.0, 1.0, 2.0, 0.5, 1.5, 3.0] {
            let x = bessel_switchover(nu);
            for &dx in &[-1.0, 0.0, 1.0] {
                let s = ln_bessel_series_scaled(nu, x + dx);
                let a = ln_bessel_asymptotic_scaled(nu, x + dx);
                assert!((s - a).abs() < 1e-11, "nu={nu} x={} {s} {a}", x + dx);
            }
        }
    }

    #[test]
    fn half_integer_closed_forms_match_series() {
        for &nu in &[-0.5, 0.5, 1.5, 2.5] {
            for &x in &[7.0, 10.0, 25.0] {
                let closed = half_integer_scaled(nu, x).ln();
                let series = ln_bessel_series_scaled(nu, x);
                assert!((closed - series).abs() < 1e-13, "nu={nu} x={x}");
            }
        }
    }

    #[test]
    fn hyp0f1_heads_and_bessel_identity() {
        assert_relative_eq!(hyp0f1_reg(1.0, 0.0).unwrap().value, 1.0);
        // 0F1~(3/2; 1) = I_{1/2}(2) = sinh(2)/sqrt(pi)
        let v = hyp0f1_reg(1.5, 1.0).unwrap().value;
        assert_relative_eq!(v, 2f64.sinh() / PI.sqrt(), max_relative = 1e-12);
    }

    #[test]
    fn hyp0f1_huge_argument_is_log_scaled() {
        // ln 0F1~(2; 1e6) = ln I_1(2000) - ln(1000); frozen from 40-digit arithmetic
        let r = hyp0f1_reg(2.0, 1e6).unwrap();
        assert!(!r.is_representable());
        assert_eq!(r.value, 1.0);
        assert_relative_eq!(r.ln_abs(), 1_988.372_667_411_146_6, max_relative = 1e-13);
    }

    #[test]
    fn hyp1f1_values() {
        let head = hyp1f1_reg(-0.5, 0.5, 0.0).unwrap().value;
        assert_relative_eq!(head, 1.0 / PI.sqrt(), max_relative = 1e-14);
        let big = hyp1f1_reg(-0.5, 1.5, -1e4).unwrap().value;
        assert_relative_eq!(big, 100.0, max_relative = 1e-4);
        // 1F1~(-1/2; 1/2; -x^2) = (e^{-x^2} + sqrt(pi) x erf x)/sqrt(pi)
        for &x in &[0.3f64, 1.0, 3.0, 6.0, 7.0, 20.0] {
            let v = hyp1f1_reg(-0.5, 0.5, -x * x).unwrap().value;
            let expect = ((-x * x).exp() + PI.sqrt() * x * erf(x)) / PI.sqrt();
            assert_relative_eq!(v, expect, max_relative = 1e-13);
        }
        assert!(hyp1f1_reg(-0.5, 0.0, -1.0).is_err());
        assert!(hyp1f1_reg(-0.5, 1.0, 1.0).is_err());
    }

    #[test]
    fn theta3_values() {
        assert_eq!(theta3_nome(0.0).unwrap(), 1.0);
        let mut direct = 0.0;
        for m in 1..40u32 {
            direct += 0.5f64.powi((m * m) as i32);
        }
        assert_relative_eq!(theta3_nome(0.5).unwrap(), 1.0 + 2.0 * direct, max_relative = 1e-15);
        let near_one = theta3_nome(0.99).unwrap();
        assert_relative_eq!(near_one, theta3_direct(0.99), max_relative = 1e-13);
        assert!(near_one >= 1.0);
        assert!(theta3_nome(1.0).is_err());
        assert!(theta3_nome(-0.1).is_err());
    }

    #[test]
    fn theta3_transform_branch_matches_direct() {
        for &q in &[0.51, 0.7, 0.9, 0.95] {
            let t = -f64::ln(q) / PI;
            let transformed = theta3_direct((-PI / t).exp()) / t.sqrt();
            assert_relative_eq!(transformed, theta3_direct(q), max_relative = 1e-13);
        }
    }

    #[test]
    fn erf_and_gamma() {
        assert_eq!(erf(0.0), 0.0);
        assert_relative_eq!(erf(1.0), 0.842_700_792_949_714_9, max_relative = 1e-15);
        assert_relative_eq!(gamma(0.5).unwrap(), PI.sqrt(), max_relative = 1e-15);
        assert!(matches!(gamma(-2.0), Err(UdwError::Pole(_))));
        assert!(gamma(0.0).is_err());
    }

    #[test]
    fn sphere_areas() {
        assert_relative_eq!(unit_sphere_area(1), 2.0, max_relative = 1e-15);
        assert_relative_eq!(unit_sphere_area(2), 2.0 * PI, max_relative = 1e-15);
        assert_relative_eq!(unit_sphere_area(3), 4.0 * PI, max_relative = 1e-15);
        assert_relative_eq!(unit_sphere_area(4), 2.0 * PI * PI, max_relative = 1e-14);
    }
}
