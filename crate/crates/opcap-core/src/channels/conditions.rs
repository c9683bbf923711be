//! Structural checks on a tensor decomposition U = Σ xᵢ ⊗ yᵢ: the xᵢ commute
//! with M, U is unitary, BB* = id and B*B = μ·id.

use serde::Serialize;

use super::vn::VNChannelSpec;
use crate::matcore::{eigvalsh, CMatrix, C64};

pub const CONDITION_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Serialize)]
pub struct ConditionReport {
    pub label: String,
    pub m: usize,
    pub dim_n: usize,
    /// max ‖[xᵢ, a]‖ over a in a basis of M
    pub c1_error: f64,
    /// max |U†U − I|
    pub unitarity_error: f64,
    /// ‖BB* − I‖ in operator norm
    pub bb_star_error: f64,
    /// ‖B*B − μI‖ in operator norm
    pub b_star_b_deviation: f64,
    pub mu: f64,
    /// m / dim L₂(N)
    pub mu_expected: f64,
    pub c3_holds: bool,
    pub c3prime_holds: bool,
}

impl ConditionReport {
    /// C1–C3 hold, i.e. θ₁ is the conditional expectation.
    pub fn c1_to_c3(&self) -> bool {
        self.c1_error <= CONDITION_TOL && self.unitarity_error <= CONDITION_TOL && self.c3_holds
    }

    pub fn all_hold(&self) -> bool {
        self.c1_to_c3() && self.c3prime_holds
    }
}

fn spectral_norm_hermitian(a: &CMatrix) -> f64 {
    eigvalsh(&a.hermitian_part())
        .map(|v| v.iter().fold(0.0f64, |m, x| m.max(x.abs())))
        .unwrap_or(f64::INFINITY)
}

/// τ(c_s* yᵢ) for every basis element c_s.
fn symbol_coords(spec: &VNChannelSpec, y: &CMatrix) -> Vec<C64> {
    let d = spec.symbol.matrix_dim() as f64;
    spec.symbol_basis.iter().map(|c| c.hs_inner(y) / d).collect()
}

/// B with rows indexed by a basis {e_r} of M′ and columns by the τ-orthonormal
/// basis of L₂(N); `coeff(r, x)` gives the coordinate of x along e_r.
fn assemble_b(spec: &VNChannelSpec, rows: usize, coeff: impl Fn(usize, &CMatrix) -> C64) -> CMatrix {
    let cols = spec.dim_n();
    let mut b = CMatrix::zeros(rows, cols);
    for (x, y) in spec.xs.iter().zip(&spec.ys) {
        let yc = symbol_coords(spec, y);
        for r in 0..rows {
            let c = coeff(r, x);
            if c.norm() < 1e-15 {
                continue;
            }
            for (s, &v) in yc.iter().enumerate() {
                b[(r, s)] += c * v;
            }
        }
    }
    b
}

/// Builds B in the two normalizations and reports every condition.
///
/// BB* is taken with rows expanded in the trace-orthogonal Kraus operators
/// k_r of E_M, so that BB* = I is exactly θ₁ = E_M. B*B uses a
/// trace-orthonormal basis of M′, which is where μ = m/n lives.
pub fn build_b_and_check(spec: &VNChannelSpec) -> ConditionReport {
    let ks = &spec.expectation_kraus;
    let knorm: Vec<f64> = ks.iter().map(|k| k.hs_inner(k).re).collect();
    let weighted = assemble_b(spec, ks.len(), |r, x| ks[r].hs_inner(x) / knorm[r]);
    let bb = weighted.matmul_adjoint(&weighted);
    let bb_star_error = spectral_norm_hermitian(&(&bb - &CMatrix::identity(bb.rows())));

    let es = &spec.commutant_basis;
    let plain = assemble_b(spec, es.len(), |r, x| es[r].hs_inner(x));
    let btb = plain.adjoint_matmul(&plain);
    let n = btb.rows();
    let mu = btb.trace().re / n as f64;
    let b_star_b_deviation = spectral_norm_hermitian(&(&btb - &CMatrix::identity(n).scale_real(mu)));

    let mut c1_error = 0.0f64;
    for x in &spec.xs {
        for a in &spec.algebra_basis {
            c1_error = c1_error.max(x.commutator(a).max_abs());
        }
    }
    let m = spec.m();
    let mu_expected = m as f64 / spec.dim_n() as f64;
    ConditionReport {
        label: spec.label.clone(),
        m,
        dim_n: spec.dim_n(),
        c1_error,
        unitarity_error: spec.unitarity_error(),
        bb_star_error,
        b_star_b_deviation,
        mu,
        mu_expected,
        c3_holds: bb_star_error <= CONDITION_TOL,
        c3prime_holds: b_star_b_deviation <= CONDITION_TOL && mu > 0.0,
    }
}
