use std::f64::consts::PI;

use approx::assert_relative_eq;
use udw_core::cavity::{discrete_normalization, CavitySpec};
use udw_core::free_linear::{i_minus, prob_one_linear, DetectorSpec};
use udw_core::free_quadratic::{j_minus, prob_one_quadratic, prob_two_quadratic, q_minus, r_minus, s_minus};
use udw_core::oracle::*;
use udw_core::specfun::hyp1f1_reg;
use udw_core::wavepacket::{energy_density_origin, energy_expectation, TwoParticleSpec, WavepacketSpec, Which};

fn cfg() -> OracleConfig {
    OracleConfig::default()
}

#[test]
fn linear_probability_grid() {
    for n in 1..=4 {
        for &s in &[0.2, 0.5, 1.0] {
            for &w in &[0.5, 1.0, 2.0] {
                let wp = WavepacketSpec::new(n, 1.0, s).unwrap();
                let det = DetectorSpec::linear(w, 1.0);
                let closed = prob_one_linear(&wp, &det).unwrap().value;
                let i = oracle_i_minus(&wp, &det, &cfg()).unwrap();
                assert_relative_eq!(closed, i * i, max_relative = 1e-9);
            }
        }
    }
}

#[test]
fn linear_spot_points() {
    let wp = WavepacketSpec::new(3, 1.0, 0.5).unwrap();
    let det = DetectorSpec::linear(5.0, 1.0);
    assert_relative_eq!(i_minus(&wp, &det).unwrap(), oracle_i_minus(&wp, &det, &cfg()).unwrap(), max_relative = 1e-8);
    let wp = WavepacketSpec::new(4, 1.0, 0.3).unwrap();
    let det = DetectorSpec::linear(1.0, 1.0);
    let closed = prob_one_linear(&wp, &det).unwrap().value;
    let o = oracle_i_minus(&wp, &det, &cfg()).unwrap();
    assert_relative_eq!(closed, o * o, max_relative = 1e-8);
}

#[test]
fn linear_at_rest_n2() {
    // k0 -> 0 limit of the closed form against the oracle at k0 = 0
    let det = DetectorSpec::linear(0.7, 1.0);
    let oracle = oracle_i_minus(&WavepacketSpec::new(2, 0.0, 0.6).unwrap(), &det, &cfg()).unwrap();
    let closed = i_minus(&WavepacketSpec::new(2, 1e-9, 0.6).unwrap(), &det).unwrap();
    assert_relative_eq!(closed, oracle, max_relative = 1e-8);
}

#[test]
fn quadratic_amplitude_spot_points() {
    let wp = WavepacketSpec::new(3, 1.0, 0.5).unwrap();
    let det = DetectorSpec::quadratic(1.0, 1.0);
    for &k1 in &[0.1, 0.5, 2.0] {
        let closed = j_minus(&wp, &det, k1).unwrap();
        assert_relative_eq!(closed, oracle_j_minus(&wp, &det, k1, &cfg()).unwrap(), max_relative = 1e-7);
    }
    let spec = TwoParticleSpec::new(3, 1.0, 3.0, 0.5).unwrap();
    let q = q_minus(&spec, &det, Which::Eta2, 0.7).unwrap();
    let scale = udw_core::wavepacket::normalization_n(&spec);
    let o = scale * oracle_j_minus(&spec.single(Which::Eta2), &det, 0.7, &cfg()).unwrap();
    assert_relative_eq!(q, o, max_relative = 1e-7);
}

#[test]
fn quadratic_one_particle_outer_integral() {
    for (n, s, w) in [(2, 0.5, 1.0), (3, 1.0, 1.0), (4, 0.25, 0.5)] {
        let wp = WavepacketSpec::new(n, 1.0, s).unwrap();
        let det = DetectorSpec::quadratic(w, 1.0);
        let closed = prob_one_quadratic(&wp, &det, 1e-10).unwrap().value;
        assert_relative_eq!(closed, oracle_prob_one_quadratic(&wp, &det, &cfg()).unwrap(), max_relative = 1e-7);
    }
    let wp = WavepacketSpec::new(1, 1.0, 0.5).unwrap().with_ir_cutoff(1e-4);
    let det = DetectorSpec::quadratic(1.0, 1.0);
    let closed = prob_one_quadratic(&wp, &det, 1e-10).unwrap().value;
    let ocfg = OracleConfig {
        ir_cutoff: 1e-4,
        ..cfg()
    };
    assert_relative_eq!(closed, oracle_prob_one_quadratic(&wp, &det, &ocfg).unwrap(), max_relative = 1e-7);
}

#[test]
fn sum_frequency_spot_points() {
    for (n, e1, e2, s, w) in [(3, 1.0, 3.0, 0.5, 4.0), (2, 1.0, 2.0, 0.5, 2.5), (1, 1.0, 3.0, 0.5, 3.5)] {
        let spec = TwoParticleSpec::new(n, e1, e2, s).unwrap();
        let det = DetectorSpec::quadratic(w, 1.0);
        let closed = r_minus(&spec, &det, 1e-11).unwrap();
        assert_relative_eq!(closed, oracle_r_minus(&spec, &det, &cfg()).unwrap(), max_relative = 1e-6);
    }
}

#[test]
fn difference_frequency_spot_points() {
    let pairs = [(Which::Eta1, Which::Eta2), (Which::Eta2, Which::Eta1), (Which::Eta1, Which::Eta1)];
    for (n, s, w) in [(3, 0.5, 2.0), (2, 0.7, 1.0), (1, 0.5, 2.0)] {
        let spec = TwoParticleSpec::new(n, 1.0, 3.0, s).unwrap();
        let det = DetectorSpec::quadratic(w, 1.0);
        for &pair in &pairs {
            let closed = s_minus(&spec, &det, pair, 1e-11).unwrap();
            assert_relative_eq!(closed, oracle_s_minus(&spec, &det, pair, &cfg()).unwrap(), max_relative = 1e-6);
        }
    }
}

#[test]
fn two_particle_p_q() {
    let spec = TwoParticleSpec::new(3, 1.0, 3.0, 0.5).unwrap();
    let det = DetectorSpec::quadratic(1.5, 1.0);
    let closed = prob_two_quadratic(&spec, &det, 1e-10).unwrap().p_q;
    assert_relative_eq!(closed, oracle_p_q(&spec, &det, &cfg()).unwrap(), max_relative = 1e-7);
}

#[test]
fn sum_frequency_vanishes_at_small_gap() {
    let spec = TwoParticleSpec::new(3, 1.0, 3.0, 0.5).unwrap();
    let v = oracle_r_minus(&spec, &DetectorSpec::quadratic(1e-6, 1.0), &cfg()).unwrap();
    assert!(v.abs() < 1e-20);
}

#[test]
fn norms() {
    for n in 1..=4 {
        for &(k0, s) in &[(1.0, 0.3), (2.0, 1.0), (0.5, 2.0)] {
            let wp = WavepacketSpec::new(n, k0, s).unwrap();
            assert_relative_eq!(oracle_norm(&wp, &cfg()).unwrap(), 1.0, max_relative = 1e-9);
        }
    }
}

#[test]
fn energy_expectation_matches_radial_quadrature() {
    let wp = WavepacketSpec::new(2, 1.0, 1.0).unwrap();
    let closed = energy_expectation(&wp).unwrap();
    assert_relative_eq!(closed, oracle_energy_expectation(&wp, &cfg()).unwrap(), max_relative = 1e-8);
    // 1F1~(-1/2; 1; -1) enters exactly that case
    let kummer = hyp1f1_reg(-0.5, 1.0, -1.0).unwrap().value;
    assert_relative_eq!(kummer * udw_core::specfun::gamma(1.5).unwrap(), closed, max_relative = 1e-14);
    for n in [3, 4] {
        let wp = WavepacketSpec::new(n, 1.5, 0.4).unwrap();
        let closed = energy_expectation(&wp).unwrap();
        assert_relative_eq!(closed, oracle_energy_expectation(&wp, &cfg()).unwrap(), max_relative = 1e-8);
    }
    let wp = WavepacketSpec::new(1, 0.0, 1.0).unwrap().with_ir_cutoff(0.0);
    assert_relative_eq!(oracle_energy_expectation(&wp, &cfg()).unwrap(), 1.0 / PI.sqrt(), max_relative = 1e-9);
    let wp = WavepacketSpec::new(1, 1.0, 0.5).unwrap().with_ir_cutoff(0.2);
    let ocfg = OracleConfig { ir_cutoff: 0.2, ..cfg() };
    assert_relative_eq!(energy_expectation(&wp).unwrap(), oracle_energy_expectation(&wp, &ocfg).unwrap(), max_relative = 1e-9);
}

#[test]
fn energy_density_matches_oracle() {
    for (n, k0, s) in [(1, 1.0, 0.5), (2, 1.0, 0.7), (3, 1.0, 0.3), (1, 0.0, 1.0)] {
        let wp = WavepacketSpec::new(n, k0, s).unwrap();
        let closed = energy_density_origin(&wp, 1e-11).unwrap();
        assert_relative_eq!(closed, oracle_energy_density(&wp, &cfg()).unwrap(), max_relative = 1e-8);
    }
}

#[test]
fn lattice_normalization() {
    let l = PI * 11f64.sqrt();
    let cav = CavitySpec::with_detector_fraction(3, l, 0.5, 20.0).unwrap();
    for &s in &[0.05, 0.1, 0.3, 0.6] {
        let sigma = s * PI / l * 10.0;
        let theta = discrete_normalization(&cav, &[3, 1, 1], sigma).unwrap();
        let direct = oracle_lattice_normalization(&cav, &[3, 1, 1], sigma).unwrap();
        assert_relative_eq!(theta, direct, max_relative = 1e-10);
        assert_relative_eq!(oracle_lattice_norm(&cav, &[3, 1, 1], sigma).unwrap(), 1.0, max_relative = 1e-9);
    }
    let tiny = 1e-3;
    assert_relative_eq!(discrete_normalization(&cav, &[3, 1, 1], tiny).unwrap(), 1.0, max_relative = 1e-12);
    assert_relative_eq!(oracle_lattice_norm(&cav, &[3, 1, 1], tiny).unwrap(), 1.0, max_relative = 1e-12);
}

#[test]
fn oracle_self_consistency() {
    let wp = WavepacketSpec::new(3, 1.0, 0.5).unwrap();
    let det = DetectorSpec::quadratic(0.8, 1.0);
    let loose = oracle_prob_one_quadratic(&wp, &det, &OracleConfig { rel_tol: 1e-8, ..cfg() }).unwrap();
    let tight = oracle_prob_one_quadratic(&wp, &det, &OracleConfig { rel_tol: 5e-9, ..cfg() }).unwrap();
    assert!((loose - tight).abs() <= 1e-8 * tight.abs());
}
