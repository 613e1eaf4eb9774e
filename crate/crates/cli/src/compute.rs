//! Evaluate one grid point of a scenario.

use udw_core::cavity::{deposit_linear, deposit_quadratic, prob_one_cavity, CavitySpec};
use udw_core::free_linear::{prob_one_linear, prob_two_linear, DetectorSpec, ProbabilityResult};
use udw_core::free_quadratic::{prob_one_quadratic, prob_two_quadratic};
use udw_core::wavepacket::{energy_density_origin, energy_expectation, TwoParticleSpec, WavepacketSpec};
use udw_core::{Result, UdwError};

use crate::scenario::{Kind, Point};

#[derive(Debug, Clone, PartialEq)]
pub struct Row {
    pub value: f64,
    pub components: Vec<(String, f64)>,
    pub error_estimate: f64,
}

impl From<ProbabilityResult> for Row {
    fn from(r: ProbabilityResult) -> Self {
        Row {
            value: r.value,
            components: r.components,
            error_estimate: r.error_estimate,
        }
    }
}

fn get(p: &Point, name: &str) -> Result<f64> {
    p.get(name)
        .copied()
        .ok_or_else(|| UdwError::InvalidSpec(format!("missing parameter `{name}`")))
}

fn get_u32(p: &Point, name: &str) -> Result<u32> {
    let v = get(p, name)?;
    if v.fract() != 0.0 || !(0.0..=u32::MAX as f64).contains(&v) {
        return Err(UdwError::InvalidSpec(format!("`{name}` = {v} is not a valid index")));
    }
    Ok(v as u32)
}

fn wavepacket(p: &Point) -> Result<WavepacketSpec> {
    let mut wp = WavepacketSpec::new(get_u32(p, "n")?, get(p, "k0")?, get(p, "sigma")?)?;
    wp.ir_cutoff = p.get("ir_cutoff").copied();
    wp.validate()?;
    Ok(wp)
}

fn two_particle(p: &Point) -> Result<TwoParticleSpec> {
    let mut s = TwoParticleSpec::new(get_u32(p, "n")?, get(p, "eta1")?, get(p, "eta2")?, get(p, "sigma")?)?;
    s.ir_cutoff = p.get("ir_cutoff").copied();
    s.validate()?;
    Ok(s)
}

fn detector(p: &Point, quadratic: bool) -> Result<DetectorSpec> {
    let (w, l) = (get(p, "omega")?, get(p, "lambda")?);
    let det = if quadratic {
        DetectorSpec::quadratic(w, l)
    } else {
        DetectorSpec::linear(w, l)
    }
    .with_smearing(p.get("smearing_delta").copied().unwrap_or(0.0));
    det.validate()?;
    Ok(det)
}

fn cavity(p: &Point, n: u32) -> Result<CavitySpec> {
    let l = get(p, "l")?;
    CavitySpec::with_detector_fraction(n, l, get(p, "x_frac")?, get(p, "t")?)
}

fn deposit_row(entries: &[udw_core::cavity::DepositEntry]) -> Row {
    let last = entries.last().expect("j >= 1");
    Row {
        value: last.n_j,
        components: vec![("omega_j".into(), last.omega_j)],
        error_estimate: 64.0 * f64::EPSILON * last.n_j.abs(),
    }
}

/// Value, components and error estimate at one point.
pub fn evaluate(kind: Kind, p: &Point, rel_tol: f64) -> Result<Row> {
    match kind {
        Kind::LinearOne => Ok(prob_one_linear(&wavepacket(p)?, &detector(p, false)?)?.into()),
        Kind::QuadraticOne => Ok(prob_one_quadratic(&wavepacket(p)?, &detector(p, true)?, rel_tol)?.into()),
        Kind::LinearTwo => Ok(prob_two_linear(&two_particle(p)?, &detector(p, false)?)?.into()),
        Kind::QuadraticTwo => {
            let c = prob_two_quadratic(&two_particle(p)?, &detector(p, true)?, rel_tol)?;
            Ok(ProbabilityResult::from(c).into())
        }
        Kind::CavityOne => {
            let n = get_u32(p, "n")?;
            let mut cav = cavity(p, n)?;
            if p.contains_key("mode_cap") {
                cav.mode_cap = Some(get_u32(p, "mode_cap")?);
            }
            let mut j0 = Vec::new();
            for axis in 1..=n {
                let key = format!("j0_{axis}");
                if !p.contains_key(&key) {
                    return Err(UdwError::InvalidSpec(format!("cavity with n = {n} needs `{key}`")));
                }
                j0.push(get_u32(p, &key)?);
            }
            Ok(prob_one_cavity(&cav, &j0, get(p, "sigma")?, &detector(p, false)?)?.into())
        }
        Kind::DepositLinear => {
            let spec = deposit_linear(&cavity(p, 1)?, &detector(p, false)?, get_u32(p, "j")?)?;
            Ok(deposit_row(&spec.entries))
        }
        Kind::DepositQuadratic => {
            let k_max = match p.contains_key("k_max") {
                true => Some(get_u32(p, "k_max")?),
                false => None,
            };
            let spec = deposit_quadratic(&cavity(p, 1)?, &detector(p, true)?, get_u32(p, "j")?, k_max)?;
            Ok(deposit_row(&spec.entries))
        }
        Kind::Energy => {
            let wp = wavepacket(p)?;
            let e = energy_expectation(&wp)?;
            let rho = energy_density_origin(&wp, rel_tol)?;
            Ok(Row {
                value: e,
                components: vec![("energy_density_origin".into(), rho)],
                error_estimate: 64.0 * f64::EPSILON * e.abs() + rel_tol * rho.abs(),
            })
        }
    }
}
