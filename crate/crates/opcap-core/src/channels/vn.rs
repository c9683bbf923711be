//! The universal constructor θ_f(ρ) = Σᵢⱼ τ(yᵢ f yⱼ*) xᵢ ρ xⱼ* from a tensor
//! decomposition U = Σ xᵢ ⊗ yᵢ.

use super::channel::{make_labelled, Channel};
use super::subalgebra::SubalgebraSpec;
use super::symbol::{SymbolAlgebra, SymbolDensity};
use crate::error::{Error, Result};
use crate::matcore::norms::sqrt_psd;
use crate::matcore::{CMatrix, C64, ZERO};

pub const UNITARITY_TOL: f64 = 1e-10;
/// Pivots below −this abort the factorization.
pub const CHOLESKY_NEG_TOL: f64 = 1e-9;

/// Data of a VN-channel: the decomposition U = Σ xᵢ ⊗ yᵢ together with the
/// bases needed to test the structural conditions.
#[derive(Debug, Clone)]
pub struct VNChannelSpec {
    pub label: String,
    /// xᵢ ∈ M′ ⊆ M_m
    pub xs: Vec<CMatrix>,
    /// yᵢ ∈ N, realised as matrices
    pub ys: Vec<CMatrix>,
    pub symbol: SymbolAlgebra,
    /// τ-orthonormal basis of L₂(N)
    pub symbol_basis: Vec<CMatrix>,
    pub subalgebra: SubalgebraSpec,
    /// trace-orthonormal basis of M
    pub algebra_basis: Vec<CMatrix>,
    /// trace-orthonormal basis of M′
    pub commutant_basis: Vec<CMatrix>,
    /// trace-orthogonal Kraus operators of E_M, all in M′
    pub expectation_kraus: Vec<CMatrix>,
}

impl VNChannelSpec {
    /// Output (and input) dimension m.
    pub fn m(&self) -> usize {
        self.xs[0].rows()
    }

    /// dim L₂(N)
    pub fn dim_n(&self) -> usize {
        self.symbol_basis.len()
    }

    /// Checks shapes, and that U = Σ xᵢ ⊗ yᵢ is unitary.
    pub fn validate(&self) -> Result<()> {
        if self.xs.is_empty() || self.xs.len() != self.ys.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} x-terms vs {} y-terms",
                self.xs.len(),
                self.ys.len()
            )));
        }
        let m = self.m();
        let d = self.symbol.matrix_dim();
        if self.xs.iter().any(|x| x.shape() != (m, m)) || self.ys.iter().any(|y| y.shape() != (d, d)) {
            return Err(Error::DimensionMismatch("inconsistent term shapes".into()));
        }
        if self.subalgebra.ambient_dim() != m {
            return Err(Error::DimensionMismatch("subalgebra ambient dimension differs from m".into()));
        }
        let err = self.unitarity_error();
        if err > UNITARITY_TOL {
            return Err(Error::ConditionFailure(format!(
                "U = Σ x⊗y is not unitary (error {err:.3e})"
            )));
        }
        Ok(())
    }

    /// U = Σ xᵢ ⊗ yᵢ assembled from nonzero entries only.
    pub fn unitary(&self) -> CMatrix {
        let m = self.m();
        let d = self.symbol.matrix_dim();
        let mut u = CMatrix::zeros(m * d, m * d);
        for (x, y) in self.xs.iter().zip(&self.ys) {
            let ynz: Vec<(usize, usize, C64)> = (0..d)
                .flat_map(|c| (0..d).map(move |e| (c, e)))
                .filter_map(|(c, e)| {
                    let v = y[(c, e)];
                    (v != ZERO).then_some((c, e, v))
                })
                .collect();
            for a in 0..m {
                for b in 0..m {
                    let xv = x[(a, b)];
                    if xv == ZERO {
                        continue;
                    }
                    for &(c, e, yv) in &ynz {
                        u[(a * d + c, b * d + e)] += xv * yv;
                    }
                }
            }
        }
        u
    }

    /// max |U†U − I|
    pub fn unitarity_error(&self) -> f64 {
        let u = self.unitary();
        let n = u.rows();
        u.adjoint().matmul(&u).max_abs_diff(&CMatrix::identity(n))
    }

    /// T_ij = τ(yᵢ f yⱼ*)
    pub fn coefficient_matrix(&self, f: &SymbolDensity) -> Result<CMatrix> {
        if f.algebra() != &self.symbol {
            return Err(Error::InvalidDensity(format!(
                "density lives in {:?}, spec expects {:?}",
                f.algebra(),
                self.symbol
            )));
        }
        let s = sqrt_psd(f.matrix())?;
        let d = self.symbol.matrix_dim() as f64;
        let ws: Vec<CMatrix> = self.ys.iter().map(|y| y.matmul(&s)).collect();
        let k = ws.len();
        let mut t = CMatrix::zeros(k, k);
        for i in 0..k {
            for j in i..k {
                let v = ws[j].hs_inner(&ws[i]) / d;
                t[(i, j)] = v;
                t[(j, i)] = v.conj();
            }
        }
        Ok(t)
    }
}

/// Pivoted Cholesky T = L L† of a PSD matrix; L has one column per pivot taken.
pub fn pivoted_cholesky(t: &CMatrix) -> Result<CMatrix> {
    let n = t.rows();
    let mut a = t.hermitian_part();
    let scale = (0..n).map(|i| a[(i, i)].re.abs()).fold(0.0, f64::max).max(1e-300);
    let stop = 1e-14 * scale;
    let mut cols: Vec<Vec<C64>> = Vec::new();
    let mut used = vec![false; n];
    loop {
        let mut piv = None;
        let mut best = f64::NEG_INFINITY;
        for i in 0..n {
            let v = a[(i, i)].re;
            if !used[i] && v > best {
                best = v;
                piv = Some(i);
            }
        }
        let Some(p) = piv else { break };
        if best < -CHOLESKY_NEG_TOL {
            return Err(Error::InvalidDensity(format!(
                "coefficient matrix not PSD (pivot {best:.3e})"
            )));
        }
        if best <= stop {
            // remaining diagonal is within roundoff; the residual must be too
            for i in 0..n {
                if !used[i] && a[(i, i)].re < -CHOLESKY_NEG_TOL {
                    return Err(Error::InvalidDensity("coefficient matrix not PSD".into()));
                }
            }
            break;
        }
        used[p] = true;
        let r = best.sqrt();
        let col: Vec<C64> = (0..n).map(|i| if used[i] && i != p { ZERO } else { a[(i, p)] / r }).collect();
        for i in 0..n {
            if used[i] && i != p {
                continue;
            }
            for j in 0..n {
                if used[j] && j != p {
                    continue;
                }
                let v = col[i] * col[j].conj();
                a[(i, j)] -= v;
            }
        }
        cols.push(col);
    }
    let r = cols.len();
    Ok(CMatrix::from_fn(n, r.max(1), |i, k| if k < r { cols[k][i] } else { ZERO }))
}

/// Builds θ_f in Kraus form K_a = Σᵢ L_{ia} xᵢ with T = LL†.
pub fn vn_channel(spec: &VNChannelSpec, f: &SymbolDensity) -> Result<Channel> {
    let t = spec.coefficient_matrix(f)?;
    let l = pivoted_cholesky(&t)?;
    let m = spec.m();
    let mut kraus = Vec::with_capacity(l.cols());
    for a in 0..l.cols() {
        let mut k = CMatrix::zeros(m, m);
        for (i, x) in spec.xs.iter().enumerate() {
            let c = l[(i, a)];
            if c != ZERO {
                k.axpy(c, x);
            }
        }
        kraus.push(k);
    }
    make_labelled(kraus, &spec.label)
}

/// V_f h = Σᵢ xᵢ h ⊗ |yᵢ √f⟩ in coordinates of the τ-orthonormal basis of
/// L₂(N); rows are ordered (output, environment).
pub fn stinespring_isometry(spec: &VNChannelSpec, f: &SymbolDensity) -> Result<CMatrix> {
    if f.algebra() != &spec.symbol {
        return Err(Error::InvalidDensity("density lives in the wrong algebra".into()));
    }
    let s = sqrt_psd(f.matrix())?;
    let d = spec.symbol.matrix_dim() as f64;
    let env = spec.symbol_basis.len();
    let m = spec.m();
    let mut v = CMatrix::zeros(m * env, m);
    for (x, y) in spec.xs.iter().zip(&spec.ys) {
        let w = y.matmul(&s);
        let coords: Vec<C64> = spec.symbol_basis.iter().map(|c| c.hs_inner(&w) / d).collect();
        for o in 0..m {
            for j in 0..m {
                let xv = x[(o, j)];
                if xv == ZERO {
                    continue;
                }
                for (e, &cv) in coords.iter().enumerate() {
                    v[(o * env + e, j)] += xv * cv;
                }
            }
        }
    }
    Ok(v)
}
