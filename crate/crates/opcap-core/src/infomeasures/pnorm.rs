//! Schatten-norm quantities: the Q_p ratio over pure bipartite inputs, the
//! vector-valued norm ‖χ‖_{M_m(S_p)} of a Choi matrix, and the p → 1
//! difference quotient of ‖ρ‖_p.

use serde::Serialize;

use super::optimizer::{multi_start, OptimizerConfig, SphereObjective};
use crate::channels::Channel;
use crate::error::{Error, Result};
use crate::matcore::norms::sqrt_psd;
use crate::matcore::{eigh, eigvalsh, partial_trace, schatten_norm, CMatrix, PNorm, Spectrum, C64};

/// Exponent standing in for p = ∞ inside smooth objectives.
pub const INF_SURROGATE: f64 = 64.0;

/// (1 − ‖ρ‖_{1+h})/h, which tends to H(ρ) as h → 0.
pub fn entropy_pnorm_derivative(rho: &CMatrix, h: f64) -> Result<f64> {
    if !(h > 0.0 && h <= 0.1) {
        return Err(Error::InvalidParameter(format!("h = {h} outside (0, 0.1]")));
    }
    let n = schatten_norm(rho, PNorm::Finite(1.0 + h))?;
    Ok((1.0 - n) / h)
}

/// ln tr(A^p) and A^{p−1}/tr(A^p) for PSD A, scaled by the top eigenvalue so
/// large p does not overflow.
fn log_trace_power(s: &Spectrum, p: f64) -> (f64, CMatrix) {
    let top = s.eigenvalues.iter().cloned().fold(0.0f64, f64::max).max(1e-300);
    let sum: f64 = s.eigenvalues.iter().map(|&l| (l.max(0.0) / top).powf(p)).sum();
    let log_tr = p * top.ln() + sum.ln();
    let scaled = s.map(|l| (l.max(0.0) / top).powf(p - 1.0) / (top * sum));
    (log_tr, scaled)
}

fn finite_exponent(p: PNorm) -> f64 {
    match p {
        PNorm::Inf => INF_SURROGATE,
        PNorm::Finite(x) => x,
    }
}

/// F(Ψ) = (1/p) ln tr X^p − (1/p) ln tr Y^p with X = (id ⊗ Φ)(ψψ†) and
/// Y = Φ(ρ^{A′}); Ψ is the r × d_in coefficient matrix of ψ.
struct RatioObjective<'a> {
    kraus: &'a [CMatrix],
    kraus_t: Vec<CMatrix>,
    kraus_conj: Vec<CMatrix>,
    p: f64,
}

impl<'a> RatioObjective<'a> {
    fn new(phi: &'a Channel, p: f64) -> Self {
        Self {
            kraus: phi.kraus(),
            kraus_t: phi.kraus().iter().map(|k| k.transpose()).collect(),
            kraus_conj: phi.kraus().iter().map(|k| k.conj()).collect(),
            p,
        }
    }

    /// V_k = Ψ K_kᵀ and their Gram matrix.
    fn branches(&self, psi: &CMatrix) -> (Vec<CMatrix>, CMatrix) {
        let vs: Vec<CMatrix> = self.kraus_t.iter().map(|kt| psi.matmul(kt)).collect();
        let r = vs.len();
        let mut gram = CMatrix::zeros(r, r);
        for k in 0..r {
            for l in k..r {
                let v = vs[k].hs_inner(&vs[l]);
                gram[(k, l)] = v;
                gram[(l, k)] = v.conj();
            }
        }
        (vs, gram)
    }

    fn reduced_output(&self, psi: &CMatrix) -> CMatrix {
        let rho = psi.transpose().matmul(&psi.conj());
        let d = self.kraus[0].rows();
        let mut y = CMatrix::zeros(d, d);
        for k in self.kraus {
            y += &k.sandwich(&rho);
        }
        y.hermitian_part()
    }
}

impl SphereObjective for RatioObjective<'_> {
    fn value(&self, psi: &CMatrix) -> Result<f64> {
        let (_, gram) = self.branches(psi);
        let (ln_num, _) = log_trace_power(&eigh(&gram)?, self.p);
        let (ln_den, _) = log_trace_power(&eigh(&self.reduced_output(psi))?, self.p);
        Ok((ln_num - ln_den) / self.p)
    }

    fn gradient(&self, psi: &CMatrix) -> Result<(f64, CMatrix)> {
        let (vs, gram) = self.branches(psi);
        let (ln_num, wn) = log_trace_power(&eigh(&gram)?, self.p);
        let y = self.reduced_output(psi);
        let (ln_den, wd) = log_trace_power(&eigh(&y)?, self.p);
        // numerator: Σ_{l,k} W_{kl} V_k conj(K_l)
        let mut g = CMatrix::zeros(psi.rows(), psi.cols());
        for (l, kc) in self.kraus_conj.iter().enumerate() {
            let mut acc = CMatrix::zeros(vs[0].rows(), vs[0].cols());
            for (k, v) in vs.iter().enumerate() {
                let c = wn[(k, l)];
                if c.norm() > 0.0 {
                    acc.axpy(c, v);
                }
            }
            g += &acc.matmul(kc);
        }
        // denominator: Ψ Φ†(Y^{p−1})ᵀ / tr Y^p
        let mut adj = CMatrix::zeros(psi.cols(), psi.cols());
        for k in self.kraus {
            adj += &k.adjoint().matmul(&wd).matmul(k);
        }
        let gd = psi.matmul(&adj.transpose());
        Ok(((ln_num - ln_den) / self.p, &g - &gd))
    }
}

/// Exact ratio ‖(id ⊗ Φ)(ψψ†)‖_p / ‖Φ(ρ^{A′})‖_p for a coefficient matrix Ψ.
pub fn ratio_at(phi: &Channel, psi: &CMatrix, p: PNorm) -> Result<f64> {
    let n = psi.frobenius_norm();
    let psi = psi.scale_real(1.0 / n);
    let obj = RatioObjective::new(phi, 1.0);
    let (_, gram) = obj.branches(&psi);
    let num = crate::matcore::norms::lp_norm(
        &eigvalsh(&gram)?.into_iter().map(|l| l.max(0.0)).collect::<Vec<_>>(),
        p,
    );
    let den = schatten_norm(&obj.reduced_output(&psi), p)?;
    Ok(num / den)
}

/// Coefficient matrix of the canonical purification of ρ: Ψ = (√ρ)ᵀ.
pub fn purification_matrix(rho: &CMatrix) -> Result<CMatrix> {
    Ok(sqrt_psd(rho)?.transpose())
}

#[derive(Debug, Clone, Serialize)]
pub struct RatioResult {
    pub p: PNorm,
    pub ratio: f64,
    pub cap: usize,
    #[serde(skip)]
    pub psi: CMatrix,
    pub restart_values: Vec<f64>,
    pub best_index: usize,
}

/// Lower estimate of Q_p⁽¹⁾(Φ): the best ratio found over pure states with
/// reference dimension `cap`, starting from the maximally entangled state,
/// the purifications in `starts`, and random unit vectors.
pub fn q_p_ratio_with(
    phi: &Channel,
    p: PNorm,
    cap: usize,
    starts: &[CMatrix],
    cfg: &OptimizerConfig,
) -> Result<RatioResult> {
    if let PNorm::Finite(x) = p {
        if x <= 1.0 {
            return Err(Error::InvalidExponent(x));
        }
    }
    let d = phi.dim_in();
    if cap == 0 {
        return Err(Error::InvalidParameter("reference dimension must be positive".into()));
    }
    let obj = RatioObjective::new(phi, finite_exponent(p));
    let mut init = vec![CMatrix::from_fn(cap, d, |a, i| if a == i { C64::new(1.0, 0.0) } else { C64::new(0.0, 0.0) })];
    for s in starts {
        let mut padded = CMatrix::zeros(cap, d);
        let rows = s.rows().min(cap);
        padded.set_block(0, 0, &s.block(0, 0, rows, d));
        init.push(padded);
    }
    let ms = multi_start(&obj, &init, &|rng| rng.gaussian_matrix(cap, d), cfg)?;
    let values: Vec<f64> = ms.values.iter().map(|v| v.exp()).collect();
    let ratio = ratio_at(phi, &ms.best.x, p)?;
    Ok(RatioResult {
        p,
        ratio,
        cap,
        psi: ms.best.x,
        restart_values: values,
        best_index: ms.best_index,
    })
}

pub fn q_p_ratio(phi: &Channel, p: PNorm, cfg: &OptimizerConfig) -> Result<RatioResult> {
    q_p_ratio_with(phi, p, phi.dim_in(), &[], cfg)
}

/// ‖χ‖_{M_m(S_p)} = sup ‖(a⊗1)χ(a⊗1)‖_p / ‖a‖_{2p}² over a ≥ 0 on the
/// reference factor. Closed forms at p = 1 (λ_max of tr_B χ) and p = ∞
/// (‖χ‖_∞); ascent from a ∝ 1 otherwise.
pub fn choi_vv_norm(chi: &CMatrix, m: usize, p: PNorm, cfg: &OptimizerConfig) -> Result<f64> {
    let n = chi.rows();
    if m == 0 || n % m != 0 || !chi.is_square() {
        return Err(Error::DimensionMismatch(format!("χ is {}x{}, reference {m}", n, chi.cols())));
    }
    let d = n / m;
    match p {
        PNorm::Inf => schatten_norm(chi, PNorm::Inf),
        PNorm::Finite(x) if x == 1.0 => {
            let reduced = partial_trace(chi, &[m, d], &[0])?;
            Ok(eigvalsh(&reduced)?.first().copied().unwrap_or(0.0))
        }
        PNorm::Finite(x) => {
            let obj = ChoiNormObjective { chi, m, d, p: x };
            let ms = multi_start(&obj, &[CMatrix::identity(m)], &|rng| rng.gaussian_matrix(m, m), cfg)?;
            Ok(ms.best.value.exp())
        }
    }
}

/// F(G) = ln‖S‖_p − 2 ln‖a‖_{2p}, S = (a⊗1)χ(a⊗1), a = GG†.
struct ChoiNormObjective<'a> {
    chi: &'a CMatrix,
    m: usize,
    d: usize,
    p: f64,
}

impl ChoiNormObjective<'_> {
    fn lift(&self, a: &CMatrix) -> CMatrix {
        crate::matcore::kron(a, &CMatrix::identity(self.d))
    }
}

impl SphereObjective for ChoiNormObjective<'_> {
    fn value(&self, g: &CMatrix) -> Result<f64> {
        let a = g.matmul_adjoint(g).hermitian_part();
        let al = self.lift(&a);
        let s = al.matmul(self.chi).matmul(&al).hermitian_part();
        let (ln_s, _) = log_trace_power(&eigh(&s)?, self.p);
        let (ln_a, _) = log_trace_power(&eigh(&a)?, 2.0 * self.p);
        Ok((ln_s - ln_a) / self.p)
    }

    fn gradient(&self, g: &CMatrix) -> Result<(f64, CMatrix)> {
        let a = g.matmul_adjoint(g).hermitian_part();
        let al = self.lift(&a);
        let s = al.matmul(self.chi).matmul(&al).hermitian_part();
        let (ln_s, ws) = log_trace_power(&eigh(&s)?, self.p);
        let (ln_a, wa) = log_trace_power(&eigh(&a)?, 2.0 * self.p);
        // Y = tr_B[χ(a⊗1)S^{p−1}]/tr S^p
        let y = partial_trace(&self.chi.matmul(&al).matmul(&ws), &[self.m, self.d], &[0])?;
        let gamma = &(&y + &y.adjoint()) - &wa.scale_real(2.0);
        Ok(((ln_s - ln_a) / self.p, gamma.matmul(g)))
    }
}
