use opcap_core::bounds::*;
use opcap_core::channels::{CrossedCase, Family, SymbolDensity};
use opcap_core::groups::{cyclic, dihedral, symmetric};
use opcap_core::infomeasures::OptimizerConfig;
use opcap_core::matcore::RandomSource;

fn all_families() -> Vec<Family> {
    vec![
        Family::Schur(symmetric(3).unwrap()),
        Family::RandomUnitary(symmetric(3).unwrap()),
        Family::RandomUnitary(dihedral(4).unwrap()),
        Family::Pauli(2),
        Family::Pauli(3),
        Family::Clifford(2),
        Family::Crossed(cyclic(3).unwrap(), CrossedCase::Local),
        Family::Crossed(cyclic(3).unwrap(), CrossedCase::Charge),
        Family::NonUnital(symmetric(3).unwrap()),
    ]
}

#[test]
fn closed_form_reports_satisfy_orderings() {
    let cfg = OptimizerConfig::default();
    let mut rng = RandomSource::new(41);
    for fam in all_families() {
        let spec = fam.spec(&mut rng).unwrap();
        for f in [fam.uniform_density(), fam.point_density(), fam.random_density(&mut rng)] {
            let r = bounds_report(&spec, &f, false, &cfg).unwrap();
            assert!(r.invariants_hold(), "{}: {r:?}", fam.name());
            assert!(r.conditions.all_hold(), "{}", fam.name());
            assert!(r.notes.is_empty());
        }
    }
}

#[test]
fn uniform_symbol_gives_conditional_expectation_values() {
    // f = 1 makes θ_f = E_M, whose capacities are all ln d_M
    let cfg = OptimizerConfig::default();
    let mut rng = RandomSource::new(42);
    let fam = Family::RandomUnitary(symmetric(3).unwrap());
    let spec = fam.spec(&mut rng).unwrap();
    let r = bounds_report(&spec, &fam.uniform_density(), false, &cfg).unwrap();
    assert!(r.tau_flnf.abs() < 1e-14);
    assert!((r.q1_lower - 2f64.ln()).abs() < 1e-12);
    assert!((r.q_upper.unwrap() - 2f64.ln()).abs() < 1e-12);
}

#[test]
fn numerics_inside_brackets() {
    let cfg = OptimizerConfig::default().with_restarts(4);
    let mut rng = RandomSource::new(43);
    for fam in [Family::Pauli(2), Family::RandomUnitary(cyclic(4).unwrap()), Family::Schur(symmetric(3).unwrap())] {
        let spec = fam.spec(&mut rng).unwrap();
        let f = fam.random_density(&mut rng);
        let r = bounds_report(&spec, &f, true, &cfg).unwrap();
        assert!(r.numerics_consistent(1e-4), "{}: {:?}", fam.name(), r.numerics);
        let n = r.numerics.unwrap();
        assert!(n.mutual >= r.cea_lower.unwrap() - 1e-5 && n.mutual <= r.cea_upper.unwrap() + 1e-5);
    }
}

#[test]
fn pauli_published_minimum_is_half_cea() {
    let cfg = OptimizerConfig::default();
    let mut rng = RandomSource::new(44);
    for n in [2, 3, 4] {
        let fam = Family::Pauli(n);
        let spec = fam.spec(&mut rng).unwrap();
        for _ in 0..3 {
            let f = fam.random_density(&mut rng);
            let r = bounds_report(&spec, &f, false, &cfg).unwrap();
            assert!((r.q_upper_min.unwrap() - 0.5 * r.cea_upper.unwrap()).abs() < 1e-12);
            assert!((r.q_upper_min.unwrap() - 0.5 * r.tau_flnf).abs() < 1e-12);
        }
    }
}

#[test]
fn report_serializes() {
    let cfg = OptimizerConfig::default();
    let mut rng = RandomSource::new(45);
    let fam = Family::Clifford(1);
    let spec = fam.spec(&mut rng).unwrap();
    let r = bounds_report(&spec, &fam.random_density(&mut rng), false, &cfg).unwrap();
    let v = serde_json::to_value(&r).unwrap();
    assert!(v.get("q1_lower").is_some());
    assert!(v.get("conditions").is_some());
}

#[test]
fn depolarizing_upper_is_convex() {
    for d in [2, 3, 5] {
        let grid = linspace(1.0 / (d as f64 + 1.0), 1.0, 101);
        let v: Vec<f64> = grid.iter().map(|&q| depolarizing_upper(d, q).unwrap()).collect();
        for w in v.windows(3) {
            assert!(w[0] - 2.0 * w[1] + w[2] >= -1e-12, "d={d}");
        }
    }
}

#[test]
fn hashing_below_every_upper_bound_on_sweeps() {
    for d in [2, 3, 5] {
        let t = sweep_figure2(d, &linspace(1.0 / (d as f64 + 1.0), 1.0, 101)).unwrap();
        for r in &t.rows {
            assert!(r[1] <= r[0] + 1e-9 && r[1] <= r[2] + 1e-9, "d={d}: {r:?}");
        }
    }
    let mut rng = RandomSource::new(46);
    for fam in [Family::Pauli(3), Family::RandomUnitary(symmetric(3).unwrap())] {
        let spec = fam.spec(&mut rng).unwrap();
        let f = fam.random_density(&mut rng);
        let t = sweep_family(&spec, &f, &linspace(0.0, 1.0, 11)).unwrap();
        let h = t.column("hashing").unwrap();
        for name in ["q_upper", "qea_upper"] {
            for (a, b) in h.iter().zip(t.column(name).unwrap()) {
                assert!(*a <= b + 1e-9, "{name}");
            }
        }
    }
}

#[test]
fn figure2_csv_shape() {
    let t = sweep_figure2(5, &linspace(1.0 / 6.0, 1.0, 101)).unwrap();
    let csv = t.to_csv();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines.len(), 102);
    assert_eq!(lines[0], "q,chord,hashing,upper");
    let first: Vec<f64> = lines[1].split(',').map(|x| x.parse().unwrap()).collect();
    assert!(first[3].abs() < 1e-12);
    let last: Vec<f64> = lines[101].split(',').map(|x| x.parse().unwrap()).collect();
    assert!((last[0] - 1.0).abs() < 1e-15 && (last[3] - 5f64.ln()).abs() < 1e-11);
}

#[test]
fn dephasing_sweep_endpoints() {
    let t = sweep_dephasing(&linspace(0.0, 1.0, 11)).unwrap();
    let c = t.column("capacity").unwrap();
    assert!(c[0].abs() < 1e-15);
    assert!((c[10] - 2f64.ln()).abs() < 1e-15);
    let bits = t.scaled(1.0 / 2f64.ln());
    assert!((bits.rows[10][0] - 1.0).abs() < 1e-15);
}

#[test]
fn twirl_monte_carlo_matches_exact() {
    let mut rng = RandomSource::new(47);
    assert!(twirl_verify(3, 0.4, 2000, &mut rng).unwrap() < 3e-2);
    assert!(twirl_verify(2, 1.0, 10, &mut rng).unwrap() < 1e-12);
}

#[test]
fn tau_matches_shannon_form() {
    // τ(f ln f) = ln n − H(f/n) for diagonal f
    let mut rng = RandomSource::new(48);
    for n in [2, 5, 9] {
        let w: Vec<f64> = rng.prob_vector(n).into_iter().map(|p| p * n as f64).collect();
        let f = SymbolDensity::diagonal(&w).unwrap();
        let h: f64 = w.iter().map(|x| x / n as f64).filter(|&p| p > 0.0).map(|p| -p * p.ln()).sum();
        assert!((tau_flnf(&f).unwrap() - ((n as f64).ln() - h)).abs() < 1e-12);
    }
}

#[test]
fn figure1_rejects_bad_parameters() {
    assert!(sweep_figure1(5.0, 4, &[0.0]).is_err());
    assert!(sweep_figure1(0.1, 4, &[]).is_err());
    assert!(sweep_figure2(1, &[0.5]).is_err());
}
