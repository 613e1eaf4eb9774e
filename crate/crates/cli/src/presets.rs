//! Built-in figure scenarios. Free-space presets are in units of `k0 = 1`
//! (or `eta1 = 1`); deposit presets use `L = pi`.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use crate::scenario::{Kind, Output, Point, Scenario, Spacing, Sweep};

pub const PRESET_TOL: f64 = 1e-7;

pub struct PresetInfo {
    pub name: &'static str,
    pub about: &'static str,
}

const PRESETS: &[PresetInfo] = &[
    PresetInfo { name: "fig1_n1", about: "linear one-particle, n=1, sigma/k0 in {1, 0.5, 0.25}, Omega sweep" },
    PresetInfo { name: "fig1_n2", about: "linear one-particle, n=2, sigma/k0 in {1, 0.5, 0.25}, Omega sweep" },
    PresetInfo { name: "fig1_n3", about: "linear one-particle, n=3, sigma/k0 in {1, 0.5, 0.25}, Omega sweep" },
    PresetInfo { name: "fig1_n4", about: "linear one-particle, n=4, sigma/k0 in {1, 0.5, 0.25}, Omega sweep" },
    PresetInfo { name: "fig2a", about: "3D cavity, L = pi sqrt(11), resonant P against sigma" },
    PresetInfo { name: "fig2b", about: "3D cavity, plateau in sigma for L and 2L" },
    PresetInfo { name: "fig3_n1", about: "quadratic one-particle, n=1, sigma/k0 in {1, 0.5, 0.25}, Omega sweep" },
    PresetInfo { name: "fig3_n2", about: "quadratic one-particle, n=2, sigma/k0 in {1, 0.5, 0.25}, Omega sweep" },
    PresetInfo { name: "fig3_n3", about: "quadratic one-particle, n=3, sigma/k0 in {1, 0.5, 0.25}, Omega sweep" },
    PresetInfo { name: "fig3_n4", about: "quadratic one-particle, n=4, sigma/k0 in {1, 0.5, 0.25}, Omega sweep" },
    PresetInfo { name: "fig4", about: "linear two-particle, n=3, eta2 = 2 eta1, sigma/eta1 in {0.5, 0.25, 0.125}" },
    PresetInfo { name: "fig5a", about: "quadratic two-particle components, n=3, eta2 = 3 eta1, sigma = 0.5 eta1" },
    PresetInfo { name: "fig5b", about: "sum-frequency window of fig5a (alias fig5_sfg)" },
    PresetInfo { name: "fig5c", about: "difference-frequency window of fig5a (alias fig5_dfg)" },
    PresetInfo { name: "fig6_n1", about: "quadratic two-particle, n=1, eta2 = 3 eta1, sigma/eta1 in {1, 0.5, 0.25}" },
    PresetInfo { name: "fig6_n2", about: "quadratic two-particle, n=2, eta2 = 3 eta1, sigma/eta1 in {1, 0.5, 0.25}" },
    PresetInfo { name: "fig6_n3", about: "quadratic two-particle, n=3, eta2 = 3 eta1, sigma/eta1 in {1, 0.5, 0.25}" },
    PresetInfo { name: "fig6_n4", about: "quadratic two-particle, n=4, eta2 = 3 eta1, sigma/eta1 in {1, 0.5, 0.25}" },
    PresetInfo { name: "deposits_linear", about: "mode occupations, linear coupling, L = pi, Omega = omega_6, T Omega = 20" },
    PresetInfo { name: "deposits_quadratic", about: "mode occupations, quadratic coupling, L = pi, Omega = 5, T Omega = 20" },
];

const ALIASES: &[(&str, &str)] = &[("fig5_sfg", "fig5b"), ("fig5_dfg", "fig5c")];

pub fn presets() -> &'static [PresetInfo] {
    PRESETS
}

pub fn aliases() -> &'static [(&'static str, &'static str)] {
    ALIASES
}

pub fn listing() -> String {
    let mut s = String::new();
    for p in PRESETS {
        s.push_str(&format!("{:<20}{}\n", p.name, p.about));
    }
    for (alias, target) in ALIASES {
        s.push_str(&format!("{:<20}alias of {}\n", alias, target));
    }
    s
}

fn params(pairs: &[(&str, f64)]) -> Point {
    pairs.iter().map(|(k, v)| (k.to_string(), *v)).collect()
}

fn series(var: &str, values: &[f64]) -> Vec<Point> {
    values.iter().map(|&v| params(&[(var, v)])).collect()
}

fn sweep(variable: &str, min: f64, max: f64, points: usize, spacing: Spacing) -> Sweep {
    Sweep {
        variable: variable.into(),
        min,
        max,
        points,
        spacing,
    }
}

fn scenario(name: &str, kind: Kind, p: Point, s: Vec<Point>, sw: Sweep) -> Scenario {
    Scenario {
        name: name.into(),
        kind,
        params: p,
        sweep: sw,
        series: s,
        output: Output::default(),
        rel_tol: Some(PRESET_TOL),
    }
}

fn dimension(name: &str, prefix: &str) -> Option<f64> {
    let n: u32 = name.strip_prefix(prefix)?.parse().ok()?;
    (1..=4).contains(&n).then_some(n as f64)
}

fn cavity_base(x_frac: f64) -> BTreeMap<String, f64> {
    params(&[("n", 3.0), ("t", 20.0), ("x_frac", x_frac), ("omega", 1.0), ("lambda", 1.0)])
}

fn cavity_grid(l: f64) -> Sweep {
    sweep("sigma", 0.02 * PI / l, 2.0 * PI / l, 25, Spacing::Log)
}

fn two_peak(n: f64) -> Point {
    params(&[("n", n), ("eta1", 1.0), ("eta2", 3.0), ("lambda", 1.0)])
}

/// Scenario for a preset name or alias.
pub fn preset(name: &str) -> Option<Scenario> {
    let name = ALIASES.iter().find(|(a, _)| *a == name).map_or(name, |(_, t)| t).to_string();
    let shown = name.as_str();
    let l0 = PI * 11f64.sqrt();
    if let Some(n) = dimension(shown, "fig1_n") {
        return Some(scenario(
            shown,
            Kind::LinearOne,
            params(&[("n", n), ("k0", 1.0), ("lambda", 1.0)]),
            series("sigma", &[1.0, 0.5, 0.25]),
            sweep("omega", 0.02, 3.0, 150, Spacing::Linear),
        ));
    }
    if let Some(n) = dimension(shown, "fig3_n") {
        return Some(scenario(
            shown,
            Kind::QuadraticOne,
            params(&[("n", n), ("k0", 1.0), ("lambda", 1.0)]),
            series("sigma", &[1.0, 0.5, 0.25]),
            sweep("omega", 0.02, 3.0, 100, Spacing::Linear),
        ));
    }
    if let Some(n) = dimension(shown, "fig6_n") {
        return Some(scenario(
            shown,
            Kind::QuadraticTwo,
            two_peak(n),
            series("sigma", &[1.0, 0.5, 0.25]),
            sweep("omega", 0.05, 5.0, 100, Spacing::Linear),
        ));
    }
    let s = match shown {
        "fig2a" => {
            let mut p = cavity_base(0.5);
            p.extend(params(&[("l", l0), ("j0_1", 3.0), ("j0_2", 1.0), ("j0_3", 1.0)]));
            scenario(shown, Kind::CavityOne, p, Vec::new(), cavity_grid(l0))
        }
        "fig2b" => scenario(
            shown,
            Kind::CavityOne,
            cavity_base(0.4),
            vec![
                params(&[("l", l0), ("j0_1", 3.0), ("j0_2", 1.0), ("j0_3", 1.0)]),
                params(&[("l", 2.0 * l0), ("j0_1", 6.0), ("j0_2", 2.0), ("j0_3", 2.0)]),
            ],
            cavity_grid(l0),
        ),
        "fig4" => scenario(
            shown,
            Kind::LinearTwo,
            params(&[("n", 3.0), ("eta1", 1.0), ("eta2", 2.0), ("lambda", 1.0)]),
            series("sigma", &[0.5, 0.25, 0.125]),
            sweep("omega", 0.02, 3.5, 175, Spacing::Linear),
        ),
        "fig5a" => {
            let mut p = two_peak(3.0);
            p.insert("sigma".into(), 0.5);
            scenario(shown, Kind::QuadraticTwo, p, Vec::new(), sweep("omega", 0.05, 6.0, 120, Spacing::Linear))
        }
        "fig5b" => {
            let mut p = two_peak(3.0);
            p.insert("sigma".into(), 0.5);
            scenario(shown, Kind::QuadraticTwo, p, Vec::new(), sweep("omega", 2.0, 6.0, 81, Spacing::Linear))
        }
        "fig5c" => {
            let mut p = two_peak(3.0);
            p.insert("sigma".into(), 0.5);
            scenario(shown, Kind::QuadraticTwo, p, Vec::new(), sweep("omega", 0.5, 4.0, 71, Spacing::Linear))
        }
        "deposits_linear" => scenario(
            shown,
            Kind::DepositLinear,
            params(&[("l", PI), ("t", 20.0 / 6.0), ("x_frac", PI / 7.0), ("omega", 6.0), ("lambda", 1.0)]),
            Vec::new(),
            sweep("j", 1.0, 20.0, 20, Spacing::Linear),
        ),
        "deposits_quadratic" => scenario(
            shown,
            Kind::DepositQuadratic,
            params(&[("l", PI), ("t", 4.0), ("x_frac", 0.5), ("omega", 5.0), ("lambda", 1.0)]),
            Vec::new(),
            sweep("j", 1.0, 20.0, 20, Spacing::Linear),
        ),
        _ => return None,
    };
    Some(s)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_preset_resolves_and_validates() {
        for p in presets() {
            let s = preset(p.name).unwrap_or_else(|| panic!("{} missing", p.name));
            s.validate().unwrap();
        }
        for (alias, target) in aliases() {
            assert_eq!(preset(alias).unwrap().sweep, preset(target).unwrap().sweep);
        }
        assert!(preset("fig7").is_none());
        assert!(preset("fig1_n5").is_none());
    }

    #[test]
    fn listing_contains_fig1_n3() {
        assert!(listing().contains("fig1_n3"));
        assert!(presets().len() >= 14);
    }
}
