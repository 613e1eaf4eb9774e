//! Peak location on response curves: coarse scan plus golden-section refinement.

use crate::error::{invalid, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Peak {
    pub x: f64,
    pub value: f64,
}

const INV_PHI: f64 = 0.618_033_988_749_894_8;

/// Maximize a unimodal `f` on `[a, b]`.
pub fn golden_section<F: FnMut(f64) -> Result<f64>>(mut f: F, mut a: f64, mut b: f64, tol: f64) -> Result<Peak> {
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f(c)?;
    let mut fd = f(d)?;
    while (b - a).abs() > tol {
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d)?;
        }
    }
    Ok(if fc >= fd { Peak { x: c, value: fc } } else { Peak { x: d, value: fd } })
}

fn grid<F: FnMut(f64) -> Result<f64>>(f: &mut F, lo: f64, hi: f64, step: f64) -> Result<Vec<(f64, f64)>> {
    if !(hi > lo) || !(step > 0.0) {
        return Err(invalid(format!("bad scan window [{lo}, {hi}] with step {step}")));
    }
    let count = ((hi - lo) / step).ceil() as usize;
    (0..=count)
        .map(|i| {
            let x = if i == count { hi } else { lo + i as f64 * step };
            f(x).map(|v| (x, v))
        })
        .collect()
}

/// Interior local maxima of `f` on `[lo, hi]`, refined to `step * 1e-4`.
pub fn local_maxima<F: FnMut(f64) -> Result<f64>>(mut f: F, lo: f64, hi: f64, step: f64) -> Result<Vec<Peak>> {
    let pts = grid(&mut f, lo, hi, step)?;
    let mut peaks = Vec::new();
    for i in 1..pts.len().saturating_sub(1) {
        let (prev, here, next) = (pts[i - 1].1, pts[i].1, pts[i + 1].1);
        if here > prev && here >= next {
            peaks.push(golden_section(&mut f, pts[i - 1].0, pts[i + 1].0, step * 1e-4)?);
        }
    }
    Ok(peaks)
}

/// Global maximum on `[lo, hi]`, endpoints included.
pub fn argmax<F: FnMut(f64) -> Result<f64>>(mut f: F, lo: f64, hi: f64, step: f64) -> Result<Peak> {
    let pts = grid(&mut f, lo, hi, step)?;
    let mut best = 0;
    for (i, p) in pts.iter().enumerate() {
        if p.1 > pts[best].1 {
            best = i;
        }
    }
    if best == 0 || best == pts.len() - 1 {
        return Ok(Peak {
            x: pts[best].0,
            value: pts[best].1,
        });
    }
    let refined = golden_section(&mut f, pts[best - 1].0, pts[best + 1].0, step * 1e-4)?;
    Ok(if refined.value >= pts[best].1 {
        refined
    } else {
        Peak {
            x: pts[best].0,
            value: pts[best].1,
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finds_two_bumps() {
        let f = |x: f64| Ok((-(x - 1.0) * (x - 1.0) * 20.0).exp() + 0.5 * (-(x - 3.0) * (x - 3.0) * 20.0).exp());
        let peaks = local_maxima(f, 0.0, 4.0, 0.05).unwrap();
        assert_eq!(peaks.len(), 2);
        assert!((peaks[0].x - 1.0).abs() < 1e-4);
        assert!((peaks[1].x - 3.0).abs() < 1e-4);
        assert!(peaks[0].value > peaks[1].value);
        let top = argmax(f, 0.0, 4.0, 0.05).unwrap();
        assert!((top.x - 1.0).abs() < 1e-4);
    }

    #[test]
    fn monotone_has_no_interior_peak() {
        let peaks = local_maxima(|x: f64| Ok(-x), 0.0, 1.0, 0.1).unwrap();
        assert!(peaks.is_empty());
        assert_eq!(argmax(|x: f64| Ok(-x), 0.0, 1.0, 0.1).unwrap().x, 0.0);
    }
}
