//! Closed-form capacity bounds for VN-channels, the depolarizing and
//! dephasing examples, and tabulated sweeps for plotting.

use serde::Serialize;

use crate::channels::{
    build_b_and_check, depolarizing, qudit_dephasing, vn_channel, Channel, ConditionReport,
    SubalgebraSpec, SymbolDensity, VNChannelSpec,
};
use crate::channels::subalgebra::largest_block_projection;
use crate::error::{Error, Result};
use crate::infomeasures::{
    channel_information, maximize_information_with, InfoKind, OptimizerConfig,
};
use crate::matcore::norms::entropy_of_normalized;
use crate::matcore::{binary_entropy, CMatrix, RandomSource};

/// τ(f ln f) from the spectrum of f under the normalized trace.
pub fn tau_flnf(f: &SymbolDensity) -> Result<f64> {
    let s = f.spectrum()?;
    let n = s.len() as f64;
    Ok(s.iter().filter(|&&x| x > 0.0).map(|&x| x * x.ln()).sum::<f64>() / n)
}

/// ln of the largest block size of M.
pub fn ln_d_m(spec: &SubalgebraSpec) -> f64 {
    (spec.d_m() as f64).ln()
}

/// Optimizer values next to the formulas they should reproduce.
#[derive(Debug, Clone, Serialize)]
pub struct NumericChecks {
    pub coherent: f64,
    pub reverse: f64,
    pub mutual: f64,
    /// reverse − scb_formula
    pub scb_delta: f64,
    pub coherent_spread: f64,
    pub converged: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct BoundsReport {
    pub family: String,
    pub m: usize,
    pub dim_n: usize,
    pub mu: f64,
    pub tau_flnf: f64,
    pub d_m: usize,
    pub ln_d_m: f64,
    /// H(ω_f/m) with ω_f = θ_f(1)
    pub omega_entropy: f64,
    /// −S_cb = ln μ + τ(f ln f)
    pub scb_formula: Option<f64>,
    pub hashing_lower: Option<f64>,
    pub q1_lower: f64,
    pub q_upper: Option<f64>,
    pub qea_upper: Option<f64>,
    pub q_upper_min: Option<f64>,
    pub cea_lower: Option<f64>,
    pub cea_upper: Option<f64>,
    pub conditions: ConditionReport,
    pub notes: Vec<String>,
    pub numerics: Option<NumericChecks>,
}

impl BoundsReport {
    /// Orderings every report must satisfy.
    pub fn invariants_hold(&self) -> bool {
        let le = |a: Option<f64>, b: Option<f64>, tol: f64| match (a, b) {
            (Some(a), Some(b)) => a <= b + tol,
            _ => true,
        };
        le(Some(self.q1_lower), self.q_upper, 1e-12)
            && le(self.cea_lower, self.cea_upper, 1e-12)
            && le(self.hashing_lower, Some(self.q1_lower), 1e-9)
            && le(self.hashing_lower, self.q_upper_min, 1e-9)
            && le(self.q_upper_min, self.q_upper, 0.0)
            && le(self.q_upper_min, self.qea_upper, 0.0)
    }

    /// Whether the optimizer values fall inside their brackets, with slack `tol`.
    /// Vacuously true without numerics.
    pub fn numerics_consistent(&self, tol: f64) -> bool {
        let Some(n) = &self.numerics else { return true };
        let within = |x: f64, lo: Option<f64>, hi: Option<f64>| {
            lo.map_or(true, |l| x >= l - tol) && hi.map_or(true, |h| x <= h + tol)
        };
        n.scb_delta.abs() <= tol
            && within(n.mutual, self.cea_lower, self.cea_upper)
            && within(n.coherent, Some(self.q1_lower), self.q_upper)
    }
}

/// Fills every closed-form entry the verified conditions allow. With
/// `with_numerics` the three information maxima are estimated as well.
pub fn bounds_report(
    spec: &VNChannelSpec,
    f: &SymbolDensity,
    with_numerics: bool,
    cfg: &OptimizerConfig,
) -> Result<BoundsReport> {
    let conditions = build_b_and_check(spec);
    let theta = vn_channel(spec, f)?;
    let m = spec.m();
    let tau = tau_flnf(f)?;
    let d_m = spec.subalgebra.d_m();
    let lndm = ln_d_m(&spec.subalgebra);
    let omega = theta.apply(&CMatrix::identity(m));
    let omega_entropy = entropy_of_normalized(&omega)?;
    let ln_m = (m as f64).ln();
    let mut notes = Vec::new();

    let comparison_ok = conditions.c1_to_c3();
    let mu_ok = comparison_ok && conditions.c3prime_holds;
    if !comparison_ok {
        notes.push("C1-C3 fail: comparison bounds omitted".to_string());
    } else if !mu_ok {
        notes.push("B*B is not a multiple of the identity: entropy formulas omitted".to_string());
    }
    let mu = conditions.mu;
    let scb = mu_ok.then(|| mu.ln() + tau);
    let hashing = scb.map(|s| s + omega_entropy - ln_m);
    let q1_lower = hashing.map_or(lndm, |h| h.max(lndm));
    let q_upper = comparison_ok.then_some(tau + lndm);
    let cea_lower = scb.map(|s| s + omega_entropy);
    let cea_upper = scb.map(|s| s + ln_m);
    let qea_upper = cea_upper.map(|c| 0.5 * c);
    let q_upper_min = match (q_upper, qea_upper) {
        (Some(a), Some(b)) => Some(a.min(b)),
        (a, b) => a.or(b),
    };

    let numerics = if with_numerics {
        Some(numeric_checks(spec, &theta, scb, cfg)?)
    } else {
        None
    };

    Ok(BoundsReport {
        family: spec.label.clone(),
        m,
        dim_n: spec.dim_n(),
        mu,
        tau_flnf: tau,
        d_m,
        ln_d_m: lndm,
        omega_entropy,
        scb_formula: scb,
        hashing_lower: hashing,
        q1_lower,
        q_upper,
        qea_upper,
        q_upper_min,
        cea_lower,
        cea_upper,
        conditions,
        notes,
        numerics,
    })
}

fn numeric_checks(
    spec: &VNChannelSpec,
    theta: &Channel,
    scb: Option<f64>,
    cfg: &OptimizerConfig,
) -> Result<NumericChecks> {
    // P/d_M on a largest block of M already carries ln d_M of coherent information
    let mut rng = RandomSource::new(cfg.seed).child(u64::MAX);
    let p = largest_block_projection(&spec.commutant_basis, &mut rng)?;
    let block_state = p.scale_real(1.0 / p.trace().re);
    let coh = maximize_information_with(theta, InfoKind::Coherent, &[block_state], cfg)?;
    let rev = maximize_information_with(theta, InfoKind::Reverse, &[], cfg)?;
    let mutual = maximize_information_with(theta, InfoKind::Mutual, &[], cfg)?;
    Ok(NumericChecks {
        coherent: coh.value,
        reverse: rev.value,
        mutual: mutual.value,
        scb_delta: scb.map_or(f64::NAN, |s| rev.value - s),
        coherent_spread: coh.spread(),
        converged: coh.converged && rev.converged && mutual.converged,
    })
}

fn check_unit(q: f64, what: &str) -> Result<()> {
    if (0.0..=1.0).contains(&q) {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("{what} = {q} outside [0, 1]")))
    }
}

/// Q of the qubit dephasing channel: ln 2 − H₂((1+q)/2).
pub fn dephasing_formula(q: f64) -> Result<f64> {
    check_unit(q, "q")?;
    Ok(2f64.ln() - binary_entropy((1.0 + q) / 2.0))
}

/// Upper bound on Q of the d-dimensional depolarizing channel
/// D_q(ρ) = qρ + (1−q)·1/d; zero at q = 1/(d+1).
pub fn depolarizing_upper(d: usize, q: f64) -> Result<f64> {
    if d < 2 {
        return Err(Error::InvalidParameter(format!("d = {d}, need d >= 2")));
    }
    check_unit(q, "q")?;
    let d2 = (d * d) as f64;
    let x = (q * (d2 - 1.0) + 1.0) / d2;
    Ok((d as f64).ln() - binary_entropy(x) - (1.0 - x) * ((d - 1) as f64).ln())
}

/// Haar twirl of the qudit dephasing channel with parameter q′, which is
/// the depolarizing channel with q = q′ + (1−q′)/(d+1).
pub fn twirl_dephasing(d: usize, qprime: f64) -> Result<Channel> {
    if d < 2 {
        return Err(Error::InvalidParameter(format!("d = {d}, need d >= 2")));
    }
    check_unit(qprime, "q'")?;
    depolarizing(d, qprime + (1.0 - qprime) / (d as f64 + 1.0))
}

/// Max entrywise deviation between the Monte Carlo average of the Choi
/// matrices of U†Φ(U·U†)U and the Choi matrix of `twirl_dephasing`.
pub fn twirl_verify(d: usize, qprime: f64, samples: usize, rng: &mut RandomSource) -> Result<f64> {
    if samples == 0 {
        return Err(Error::InvalidParameter("need at least one sample".into()));
    }
    let exact = twirl_dephasing(d, qprime)?.choi();
    let base = qudit_dephasing(d, qprime)?;
    let mut acc = CMatrix::zeros(d * d, d * d);
    for _ in 0..samples {
        let u = rng.haar_unitary(d);
        acc += &base.conjugated(&u, &u).choi();
    }
    Ok(acc.scale_real(1.0 / samples as f64).max_abs_diff(&exact))
}

/// A grid of named curves, one row per parameter value.
#[derive(Debug, Clone, Serialize)]
pub struct SweepTable {
    pub parameter: String,
    pub columns: Vec<String>,
    pub grid: Vec<f64>,
    pub rows: Vec<Vec<f64>>,
}

impl SweepTable {
    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let j = self.columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|r| r[j]).collect())
    }

    /// Every value multiplied by `factor` (the grid is left alone).
    pub fn scaled(&self, factor: f64) -> SweepTable {
        let mut t = self.clone();
        for r in &mut t.rows {
            r.iter_mut().for_each(|v| *v *= factor);
        }
        t
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        out.push_str(&self.parameter);
        for c in &self.columns {
            out.push(',');
            out.push_str(c);
        }
        out.push('\n');
        for (x, row) in self.grid.iter().zip(&self.rows) {
            out.push_str(&fmt_sig(*x));
            for v in row {
                out.push(',');
                out.push_str(&fmt_sig(*v));
            }
            out.push('\n');
        }
        out
    }
}

/// Formats with 12 significant digits, dropping trailing zeros.
pub fn fmt_sig(x: f64) -> String {
    if !x.is_finite() {
        return format!("{x}").to_lowercase();
    }
    if x == 0.0 {
        return "0".to_string();
    }
    let exp = x.abs().log10().floor() as i32;
    if (-5..12).contains(&exp) {
        let decimals = (11 - exp).max(0) as usize;
        let s = format!("{x:.decimals$}");
        let s = if s.contains('.') { s.trim_end_matches('0').trim_end_matches('.').to_string() } else { s };
        if s == "-0" { "0".to_string() } else { s }
    } else {
        let s = format!("{x:.11e}");
        match s.split_once('e') {
            Some((mant, exp)) if mant.contains('.') => {
                format!("{}e{exp}", mant.trim_end_matches('0').trim_end_matches('.'))
            }
            _ => s,
        }
    }
}

/// `steps` evenly spaced points from `a` to `b` inclusive.
pub fn linspace(a: f64, b: f64, steps: usize) -> Vec<f64> {
    match steps {
        0 => Vec::new(),
        1 => vec![a],
        _ => (0..steps)
            .map(|i| if i + 1 == steps { b } else { a + (b - a) * i as f64 / (steps - 1) as f64 })
            .collect(),
    }
}

fn check_grid(grid: &[f64]) -> Result<()> {
    if grid.is_empty() {
        return Err(Error::InvalidParameter("empty grid".into()));
    }
    if grid.iter().any(|x| !x.is_finite()) || grid.windows(2).any(|w| w[1] < w[0]) {
        return Err(Error::InvalidParameter("grid must be finite and non-decreasing".into()));
    }
    Ok(())
}

fn tabulate(parameter: &str, columns: &[&str], grid: &[f64], row: impl Fn(f64) -> Result<Vec<f64>>) -> Result<SweepTable> {
    check_grid(grid)?;
    let rows = grid.iter().map(|&x| row(x)).collect::<Result<Vec<_>>>()?;
    Ok(SweepTable {
        parameter: parameter.to_string(),
        columns: columns.iter().map(|c| c.to_string()).collect(),
        grid: grid.to_vec(),
        rows,
    })
}

/// Curves over t = τ(f ln f): ln d_M and t (lower), ln d_M + t and
/// ½(ln m + t) (upper).
pub fn sweep_figure1(ln_dm: f64, m: usize, grid: &[f64]) -> Result<SweepTable> {
    if m == 0 || ln_dm < 0.0 || ln_dm > (m as f64).ln() + 1e-12 {
        return Err(Error::InvalidParameter(format!("need 0 <= ln d_M <= ln m (m = {m})")));
    }
    let ln_m = (m as f64).ln();
    tabulate("t", &["ln_dM", "ln_dM_plus_t", "t_lower", "half_ln_m_plus_t"], grid, |t| {
        Ok(vec![ln_dm, ln_dm + t, t, 0.5 * (ln_m + t)])
    })
}

/// Depolarizing channel on q ∈ [1/(d+1), 1]: the chord through
/// (1/(d+1), 0) and (1, ln d), the hashing bound, and `depolarizing_upper`.
pub fn sweep_figure2(d: usize, grid: &[f64]) -> Result<SweepTable> {
    if d < 2 {
        return Err(Error::InvalidParameter(format!("d = {d}, need d >= 2")));
    }
    let q0 = 1.0 / (d as f64 + 1.0);
    let ln_d = (d as f64).ln();
    let mixed = CMatrix::identity(d).scale_real(1.0 / d as f64);
    tabulate("q", &["chord", "hashing", "upper"], grid, |q| {
        let hashing = channel_information(&depolarizing(d, q)?, &mixed, InfoKind::Coherent)?;
        Ok(vec![ln_d * (q - q0) / (1.0 - q0), hashing, depolarizing_upper(d, q)?])
    })
}

pub fn sweep_dephasing(grid: &[f64]) -> Result<SweepTable> {
    tabulate("q", &["capacity"], grid, |q| Ok(vec![dephasing_formula(q)?]))
}

pub const FAMILY_SWEEP_COLUMNS: [&str; 8] = [
    "tau_flnf",
    "scb",
    "hashing",
    "q1_lower",
    "q_upper",
    "qea_upper",
    "cea_lower",
    "cea_upper",
];

/// Closed-form bounds along f_s = (1−s)·1 + s·f, s ∈ [0, 1].
pub fn sweep_family(spec: &VNChannelSpec, f: &SymbolDensity, grid: &[f64]) -> Result<SweepTable> {
    let cfg = OptimizerConfig::default();
    let d = f.algebra().matrix_dim();
    tabulate("s", &FAMILY_SWEEP_COLUMNS, grid, |s| {
        check_unit(s, "s")?;
        let mut mat = CMatrix::identity(d).scale_real(1.0 - s);
        mat.axpy(crate::matcore::C64::new(s, 0.0), f.matrix());
        let fs = SymbolDensity::new(f.algebra().clone(), mat)?;
        let r = bounds_report(spec, &fs, false, &cfg)?;
        let v = |x: Option<f64>| x.unwrap_or(f64::NAN);
        Ok(vec![
            r.tau_flnf,
            v(r.scb_formula),
            v(r.hashing_lower),
            r.q1_lower,
            v(r.q_upper),
            v(r.qea_upper),
            v(r.cea_lower),
            v(r.cea_upper),
        ])
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channels::Family;
    use crate::groups::{cyclic, dihedral};

    #[test]
    fn tau_examples() {
        assert!(tau_flnf(&SymbolDensity::diagonal(&[1.0; 4]).unwrap()).unwrap().abs() < 1e-15);
        let point = SymbolDensity::diagonal(&[5.0, 0.0, 0.0, 0.0, 0.0]).unwrap();
        assert!((tau_flnf(&point).unwrap() - 5f64.ln()).abs() < 1e-12);
        let two = SymbolDensity::diagonal(&[2.0, 2.0, 0.0, 0.0]).unwrap();
        assert!((tau_flnf(&two).unwrap() - 2f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn ln_dm_examples() {
        assert_eq!(ln_d_m(&SubalgebraSpec::diagonal(4)), 0.0);
        assert!((ln_d_m(&SubalgebraSpec::full(3)) - 3f64.ln()).abs() < 1e-15);
        let s = SubalgebraSpec::new(vec![(2, 2), (1, 4)]).unwrap();
        assert!((ln_d_m(&s) - 2f64.ln()).abs() < 1e-15);
    }

    #[test]
    fn dephasing_endpoints() {
        assert!(dephasing_formula(0.0).unwrap().abs() < 1e-15);
        assert!((dephasing_formula(1.0).unwrap() - 2f64.ln()).abs() < 1e-15);
        assert!(dephasing_formula(1.5).is_err());
    }

    #[test]
    fn depolarizing_upper_values() {
        for d in [2, 3, 5] {
            assert!(depolarizing_upper(d, 1.0 / (d as f64 + 1.0)).unwrap().abs() < 1e-12);
            assert!((depolarizing_upper(d, 1.0).unwrap() - (d as f64).ln()).abs() < 1e-12);
        }
        for q in [0.4, 0.7] {
            let bits = 1.0 - binary_entropy((3.0 * q + 1.0) / 4.0) / 2f64.ln();
            assert!((depolarizing_upper(2, q).unwrap() - 2f64.ln() * bits).abs() < 1e-12);
        }
        assert!(depolarizing_upper(1, 0.5).is_err());
    }

    #[test]
    fn twirl_endpoints() {
        let id = twirl_dephasing(3, 1.0).unwrap();
        assert!(id.choi_distance(&crate::channels::identity_channel(3)) < 1e-12);
        let t = twirl_dephasing(2, 0.0).unwrap();
        assert!(t.choi_distance(&depolarizing(2, 1.0 / 3.0).unwrap()) < 1e-12);
    }

    #[test]
    fn abelian_bracket_closes() {
        let fam = Family::RandomUnitary(cyclic(5).unwrap());
        let mut rng = RandomSource::new(3);
        let spec = fam.spec(&mut rng).unwrap();
        let f = fam.random_density(&mut rng);
        let r = bounds_report(&spec, &f, false, &OptimizerConfig::default()).unwrap();
        let tau = tau_flnf(&f).unwrap();
        assert!((r.q1_lower - tau).abs() < 1e-10);
        assert!((r.q_upper.unwrap() - tau).abs() < 1e-10);
        assert!(r.invariants_hold());
    }

    #[test]
    fn dihedral_bracket_width() {
        let g = dihedral(8).unwrap();
        let fam = Family::RandomUnitary(g);
        let mut rng = RandomSource::new(5);
        let spec = fam.spec(&mut rng).unwrap();
        // concentrated f keeps the hashing point above ln d_M
        let f = fam.point_density();
        let r = bounds_report(&spec, &f, false, &OptimizerConfig::default()).unwrap();
        assert_eq!(r.d_m, 2);
        assert!((r.q_upper.unwrap() - r.q1_lower - 2f64.ln()).abs() < 1e-10);
    }

    #[test]
    fn pauli_report_entries() {
        let fam = Family::Pauli(3);
        let mut rng = RandomSource::new(8);
        let spec = fam.spec(&mut rng).unwrap();
        let f = fam.random_density(&mut rng);
        let r = bounds_report(&spec, &f, false, &OptimizerConfig::default()).unwrap();
        let tau = tau_flnf(&f).unwrap();
        assert!((r.scb_formula.unwrap() - (tau - 3f64.ln())).abs() < 1e-10);
        assert!((r.cea_lower.unwrap() - tau).abs() < 1e-10);
        assert!((r.cea_upper.unwrap() - tau).abs() < 1e-10);
        assert!((r.q_upper_min.unwrap() - 0.5 * tau).abs() < 1e-10);
    }

    #[test]
    fn fmt_sig_digits() {
        assert_eq!(fmt_sig(0.0), "0");
        assert_eq!(fmt_sig(1.0), "1");
        assert_eq!(fmt_sig(std::f64::consts::LN_2), "0.69314718056");
        assert_eq!(fmt_sig(-1234.5), "-1234.5");
        assert_eq!(fmt_sig(1.0e-9), "1e-9");
        assert_eq!(fmt_sig(-2.5e-7), "-2.5e-7");
        assert_eq!(fmt_sig(1.234567890123e15), "1.23456789012e15");
    }

    #[test]
    fn linspace_endpoints() {
        let g = linspace(1.0 / 6.0, 1.0, 101);
        assert_eq!(g.len(), 101);
        assert_eq!(g[0], 1.0 / 6.0);
        assert_eq!(g[100], 1.0);
    }

    #[test]
    fn figure_orderings() {
        let m = 16;
        let t = sweep_figure1(0.25 * (m as f64).ln(), m, &linspace(0.0, (m as f64).ln(), 21)).unwrap();
        for r in &t.rows {
            assert!(r[0] <= r[1] && r[2] <= r[3] + 1e-12);
        }
        let t = sweep_figure2(5, &linspace(1.0 / 6.0, 1.0, 41)).unwrap();
        for r in &t.rows {
            assert!(r[2] >= r[1] - 1e-9 && r[0] >= r[1] - 1e-9);
        }
        assert!(t.rows[0][2].abs() < 1e-12);
        assert!(sweep_dephasing(&[]).is_err());
        assert!(sweep_dephasing(&[0.5, 0.2]).is_err());
    }

    #[test]
    fn csv_layout() {
        let t = sweep_dephasing(&[0.0, 1.0]).unwrap();
        let csv = t.to_csv();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "q,capacity");
        assert_eq!(lines[1], "0,0");
        assert_eq!(lines[2], "1,0.69314718056");
    }
}
