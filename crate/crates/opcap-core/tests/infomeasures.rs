use opcap_core::bounds::tau_flnf;
use opcap_core::channels::{
    conditional_expectation, dephasing, depolarizing, identity_channel, partial_trace_channel,
    vn_channel, Channel, Family, SubalgebraSpec, SymbolDensity,
};
use opcap_core::groups::{cyclic, symmetric};
use opcap_core::infomeasures::*;
use opcap_core::matcore::{
    max_entangled_vector, schatten_norm, von_neumann_entropy, CMatrix, PNorm, RandomSource, C64,
};

fn families() -> Vec<Family> {
    vec![
        Family::Schur(symmetric(3).unwrap()),
        Family::RandomUnitary(symmetric(3).unwrap()),
        Family::Pauli(3),
        Family::Clifford(2),
        Family::NonUnital(symmetric(3).unwrap()),
    ]
}

fn random_channel(fam: &Family, rng: &mut RandomSource) -> Channel {
    let spec = fam.spec(rng).unwrap();
    let f = fam.random_density(rng);
    vn_channel(&spec, &f).unwrap()
}

fn trace_zero_hermitian(d: usize, rng: &mut RandomSource) -> CMatrix {
    let g = rng.gaussian_matrix(d, d);
    let h = g.hermitian_part();
    let t = h.trace().re / d as f64;
    let mut h = h;
    for i in 0..d {
        h[(i, i)] -= C64::new(t, 0.0);
    }
    h.scale_real(1.0 / h.frobenius_norm())
}

#[test]
fn kind_identities_hold_on_families() {
    let mut rng = RandomSource::new(21);
    for fam in families() {
        let phi = random_channel(&fam, &mut rng);
        for _ in 0..3 {
            let rho = rng.density(phi.dim_in());
            let e = channel_entropies(&phi, &rho).unwrap();
            let coh = channel_information(&phi, &rho, InfoKind::Coherent).unwrap();
            let rev = channel_information(&phi, &rho, InfoKind::Reverse).unwrap();
            let mi = channel_information(&phi, &rho, InfoKind::Mutual).unwrap();
            assert!((coh + e.input - mi).abs() < 1e-10, "{}", fam.name());
            assert!((rev + e.output - mi).abs() < 1e-10, "{}", fam.name());
        }
    }
}

#[test]
fn bipartite_forms_agree() {
    // coherent information equals H(B) − H(AB) on the purification
    let mut rng = RandomSource::new(22);
    let phi = depolarizing(3, 0.45).unwrap();
    let rho = rng.density(3);
    let psi = purification_matrix(&rho).unwrap();
    let v: Vec<C64> = psi.data().to_vec();
    let joint = phi.apply_extended(&CMatrix::outer(&v, &v), 3).unwrap();
    let hb = von_neumann_entropy(&phi.apply(&rho)).unwrap();
    let hab = von_neumann_entropy(&joint).unwrap();
    let coh = channel_information(&phi, &rho, InfoKind::Coherent).unwrap();
    assert!((coh - (hb - hab)).abs() < 1e-9);
}

#[test]
fn invalid_inputs_are_rejected() {
    let phi = identity_channel(2);
    let bad = CMatrix::diag_real(&[1.5, -0.5]);
    assert!(channel_information(&phi, &bad, InfoKind::Mutual).is_err());
    assert!(channel_information(&phi, &CMatrix::identity(3), InfoKind::Mutual).is_err());
    assert!(q_p_ratio(&phi, PNorm::Finite(1.0), &OptimizerConfig::default()).is_err());
    assert!("bogus".parse::<InfoKind>().is_err());
    assert_eq!("Mutual".parse::<InfoKind>().unwrap(), InfoKind::Mutual);
}

#[test]
fn analytic_gradient_matches_central_differences() {
    let mut rng = RandomSource::new(23);
    let phi = random_channel(&Family::RandomUnitary(cyclic(3).unwrap()), &mut rng);
    let ev = ChannelEvaluator::new(&phi);
    let h = 1e-5;
    for kind in InfoKind::ALL {
        for _ in 0..10 {
            let rho = rng.density(3);
            let dir = trace_zero_hermitian(3, &mut rng).scale_real(0.1);
            let (_, grad) = ev.information_gradient(&rho, kind).unwrap();
            let analytic = grad.trace_product(&dir).re;
            let mut plus = rho.clone();
            plus.axpy(C64::new(h, 0.0), &dir);
            let mut minus = rho.clone();
            minus.axpy(C64::new(-h, 0.0), &dir);
            let fd = (ev.information(&plus, kind).unwrap() - ev.information(&minus, kind).unwrap()) / (2.0 * h);
            let scale = analytic.abs().max(fd.abs()).max(1e-2);
            assert!((fd - analytic).abs() <= 1e-4 * scale, "{kind}: fd {fd} analytic {analytic}");
        }
    }
}

#[test]
fn mutual_information_is_restart_stable() {
    let mut rng = RandomSource::new(24);
    let cfg = OptimizerConfig::default().with_restarts(6);
    for fam in [Family::Pauli(2), Family::RandomUnitary(symmetric(3).unwrap())] {
        let phi = random_channel(&fam, &mut rng);
        let r = maximize_information(&phi, InfoKind::Mutual, &cfg).unwrap();
        assert!(r.spread() < 1e-6, "{}: spread {}", fam.name(), r.spread());
    }
}

#[test]
fn opt_result_is_consistent() {
    let mut rng = RandomSource::new(25);
    let phi = random_channel(&Family::Clifford(1), &mut rng);
    let cfg = OptimizerConfig::default().with_restarts(4);
    let r = maximize_information(&phi, InfoKind::Coherent, &cfg).unwrap();
    let at = channel_information(&phi, &r.argmax, InfoKind::Coherent).unwrap();
    assert!((at - r.value).abs() < 1e-9);
    let best = r.restart_values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    assert!((best - r.value).abs() < 1e-9);
    assert_eq!(r.restart_values.len(), 2 + 4);
}

#[test]
fn same_seed_same_result() {
    let phi = dephasing(0.2).unwrap();
    let cfg = OptimizerConfig::default().with_restarts(3).with_seed(99);
    let a = maximize_information(&phi, InfoKind::Coherent, &cfg).unwrap();
    let b = maximize_information(&phi, InfoKind::Coherent, &cfg).unwrap();
    assert_eq!(a.restart_values, b.restart_values);
    assert_eq!(a.best_index, b.best_index);
}

#[test]
fn reverse_information_formula_and_argmax() {
    let mut rng = RandomSource::new(26);
    let cfg = OptimizerConfig::default().with_restarts(4);
    for fam in [Family::Pauli(2), Family::RandomUnitary(symmetric(3).unwrap())] {
        let spec = fam.spec(&mut rng).unwrap();
        let f = fam.random_density(&mut rng);
        let phi = vn_channel(&spec, &f).unwrap();
        let mu = spec.m() as f64 / spec.dim_n() as f64;
        let r = maximize_information(&phi, InfoKind::Reverse, &cfg).unwrap();
        let expect = mu.ln() + tau_flnf(&f).unwrap();
        assert!((r.value - expect).abs() < 1e-4, "{}", fam.name());
        let m = spec.m();
        let mixed = CMatrix::identity(m).scale_real(1.0 / m as f64);
        assert!(r.argmax.max_abs_diff(&mixed) < 1e-2);
    }
}

#[test]
fn data_processing_under_unital_preprocessing() {
    let cfg = OptimizerConfig::default().with_restarts(4);
    let mut rng = RandomSource::new(27);
    for q in [0.2, 0.6, 0.9] {
        let phi = dephasing(q).unwrap();
        let pre = random_channel(&Family::Pauli(2), &mut rng);
        let composed = phi.compose_after(&pre);
        let a = maximize_information(&composed, InfoKind::Coherent, &cfg).unwrap().value;
        let b = maximize_information(&phi, InfoKind::Coherent, &cfg).unwrap().value;
        assert!(a <= b + 1e-6, "q={q}: {a} > {b}");
    }
}

#[test]
fn q_p_ratio_examples() {
    let cfg = OptimizerConfig::default().with_restarts(4);
    let r = q_p_ratio(&partial_trace_channel(2, 2).unwrap(), PNorm::Finite(2.0), &cfg).unwrap();
    assert!((r.ratio / 2f64.sqrt() - 1.0).abs() < 0.01, "{}", r.ratio);
    let e = conditional_expectation(&SubalgebraSpec::new(vec![(2, 2)]).unwrap());
    let r = q_p_ratio(&e, PNorm::Finite(2.0), &cfg).unwrap();
    assert!((r.ratio / 2f64.sqrt() - 1.0).abs() < 0.01, "{}", r.ratio);
    // close to p = 1 both norms approach 1
    let mut rng = RandomSource::new(28);
    let phi = random_channel(&Family::Pauli(2), &mut rng);
    let r = q_p_ratio(&phi, PNorm::Finite(1.0001), &cfg).unwrap();
    assert!((r.ratio - 1.0).abs() < 1e-3);
}

#[test]
fn q_p_ratio_is_monotone_in_the_cap() {
    let mut rng = RandomSource::new(29);
    let cfg = OptimizerConfig::default().with_restarts(3);
    let phi = random_channel(&Family::Pauli(2), &mut rng);
    let small = q_p_ratio(&phi, PNorm::Finite(2.0), &cfg).unwrap();
    let large = q_p_ratio_with(&phi, PNorm::Finite(2.0), 4, &[small.psi.clone()], &cfg).unwrap();
    assert!(small.ratio <= large.ratio + 1e-6, "{} vs {}", small.ratio, large.ratio);
}

#[test]
fn ratio_at_matches_direct_norms() {
    let mut rng = RandomSource::new(30);
    let phi = depolarizing(2, 0.3).unwrap();
    let psi = rng.gaussian_matrix(2, 2);
    let psi = psi.scale_real(1.0 / psi.frobenius_norm());
    let v: Vec<C64> = psi.data().to_vec();
    let joint = phi.apply_extended(&CMatrix::outer(&v, &v), 2).unwrap();
    let rho = psi.transpose().matmul(&psi.conj());
    for p in [PNorm::Finite(2.0), PNorm::Inf] {
        let direct = schatten_norm(&joint, p).unwrap() / schatten_norm(&phi.apply(&rho), p).unwrap();
        assert!((ratio_at(&phi, &psi, p).unwrap() - direct).abs() < 1e-10);
    }
}

#[test]
fn choi_norm_examples() {
    let cfg = OptimizerConfig::default().with_restarts(2);
    let mut rng = RandomSource::new(31);
    let phi = random_channel(&Family::Clifford(1), &mut rng);
    let v = choi_vv_norm(&phi.choi(), 2, PNorm::Finite(1.0), &cfg).unwrap();
    assert!((v - 1.0).abs() < 1e-12);
    let fam = Family::Pauli(2);
    let spec = fam.spec(&mut rng).unwrap();
    let f = fam.random_density(&mut rng);
    let chi = vn_channel(&spec, &f).unwrap().choi();
    let inf = choi_vv_norm(&chi, 2, PNorm::Inf, &cfg).unwrap();
    assert!((inf - 0.5 * f.lp_norm(PNorm::Inf).unwrap()).abs() < 1e-10);
    let two = choi_vv_norm(&chi, 2, PNorm::Finite(2.0), &cfg).unwrap();
    assert!((two - 0.5f64.sqrt() * f.lp_norm(PNorm::Finite(2.0)).unwrap()).abs() < 1e-3);
    assert!(choi_vv_norm(&chi, 3, PNorm::Finite(2.0), &cfg).is_err());
}

#[test]
fn pnorm_derivative_examples() {
    let half = CMatrix::identity(2).scale_real(0.5);
    assert!((entropy_pnorm_derivative(&half, 1e-3).unwrap() - 2f64.ln()).abs() < 1e-3);
    let pure = CMatrix::unit(3, 3, 1, 1);
    assert!(entropy_pnorm_derivative(&pure, 0.05).unwrap().abs() < 1e-12);
    let mut rng = RandomSource::new(32);
    let rho = rng.density(4);
    // series oracle: (1 − ‖ρ‖_{1+h})/h = H − h(H + ½Σλ ln²λ) + O(h²)
    let l = opcap_core::matcore::eigvalsh(&rho).unwrap();
    let hv = von_neumann_entropy(&rho).unwrap();
    let s2: f64 = l.iter().filter(|&&x| x > 0.0).map(|&x| x * x.ln() * x.ln()).sum();
    let h = 1e-4;
    let val = entropy_pnorm_derivative(&rho, h).unwrap();
    assert!((val - hv).abs() < 1e-3);
    assert!((val - (hv - h * (hv + 0.5 * s2))).abs() < 1e-6);
    assert!(entropy_pnorm_derivative(&rho, 0.0).is_err());
    assert!(entropy_pnorm_derivative(&rho, 0.2).is_err());
}

#[test]
fn comparison_trivial_and_monte_carlo() {
    let mut rng = RandomSource::new(33);
    let fam = Family::RandomUnitary(cyclic(3).unwrap());
    let spec = fam.spec(&mut rng).unwrap();
    let one = SymbolDensity::one(spec.symbol.clone());
    let s = comparison_probe(&spec, &one, PNorm::Finite(2.0), 5, &mut rng).unwrap();
    assert!(s.min_lower_slack.abs() < 1e-12 && s.min_upper_slack.abs() < 1e-12);
    let f = fam.random_density(&mut rng);
    let s = comparison_probe(&spec, &f, PNorm::Finite(2.0), 50, &mut rng).unwrap();
    assert!(s.worst() >= -1e-9);
    let fam = Family::Pauli(2);
    let spec = fam.spec(&mut rng).unwrap();
    let f = fam.random_density(&mut rng);
    let s = comparison_probe(&spec, &f, PNorm::Inf, 50, &mut rng).unwrap();
    assert!(s.worst() >= -1e-9);
    let f2 = fam.random_density(&mut rng);
    assert!(comparison_probe_pair(&spec, &f, &f2, PNorm::Finite(3.0), 20, &mut rng).unwrap() >= -1e-9);
}

#[test]
fn comparison_rejects_failing_specs() {
    let mut rng = RandomSource::new(34);
    let fam = Family::Pauli(2);
    let mut spec = fam.spec(&mut rng).unwrap();
    spec.xs.pop();
    spec.ys.pop();
    let f = fam.random_density(&mut rng);
    assert!(comparison_probe(&spec, &f, PNorm::Finite(2.0), 1, &mut rng).is_err());
}

#[test]
fn cqe_maximally_entangled_triple() {
    let mut rng = RandomSource::new(35);
    let fam = Family::RandomUnitary(symmetric(3).unwrap());
    let spec = fam.spec(&mut rng).unwrap();
    let f = fam.random_density(&mut rng);
    let phi = vn_channel(&spec, &f).unwrap();
    let m = spec.m();
    let t = cqe_triple(&phi, &[(1.0, max_entangled_vector(m))]).unwrap();
    let tau = tau_flnf(&f).unwrap();
    let ln_m = (m as f64).ln();
    assert!(t.c.abs() < 1e-10);
    assert!((t.q - 0.5 * (ln_m + tau)).abs() < 1e-9);
    assert!((t.e - 0.5 * (-ln_m + tau)).abs() < 1e-9);
}

#[test]
fn cqe_shift_on_abelian_group() {
    let mut rng = RandomSource::new(36);
    let fam = Family::RandomUnitary(cyclic(3).unwrap());
    let spec = fam.spec(&mut rng).unwrap();
    let theta1 = vn_channel(&spec, &SymbolDensity::one(spec.symbol.clone())).unwrap();
    for _ in 0..20 {
        let f = fam.random_density(&mut rng);
        let phi = vn_channel(&spec, &f).unwrap();
        let k = 1 + rng.below(4);
        let ens: Vec<EnsembleMember> = rng
            .prob_vector(k)
            .into_iter()
            .map(|p| (p, rng.pure_bipartite(3, 3)))
            .collect();
        let tf = cqe_triple(&phi, &ens).unwrap();
        let t1 = cqe_triple(&theta1, &ens).unwrap();
        assert!(cqe_shift_check(&tf, &t1, tau_flnf(&f).unwrap()));
    }
}
