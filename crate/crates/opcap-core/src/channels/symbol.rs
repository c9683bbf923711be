//! Densities on the symbol algebra N with its normalized trace τ.
//!
//! Every symbol algebra is realised concretely inside some M_d, with
//! τ = tr/d. The group algebra L(G) sits in M_{|G|} via the left regular
//! representation, where tr/|G| is the canonical trace.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::groups::FiniteGroup;
use crate::matcore::{eigvalsh, kron, CMatrix, PNorm, RandomSource, C64, ZERO};

pub const DENSITY_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum SymbolAlgebra {
    /// ℓ∞(n) as diagonal n×n matrices.
    Diagonal(usize),
    /// L(G) in the left regular representation; carries the group order.
    GroupAlgebra(usize),
    /// M_n with τ = tr/n.
    FullMatrix(usize),
    /// L(G) ⊗ ℓ∞(G) inside M_{|G|} ⊗ M_{|G|}.
    GroupAlgebraDiagonal(usize),
}

impl SymbolAlgebra {
    /// Side length of the matrices realising the algebra.
    pub fn matrix_dim(&self) -> usize {
        match *self {
            SymbolAlgebra::Diagonal(n)
            | SymbolAlgebra::GroupAlgebra(n)
            | SymbolAlgebra::FullMatrix(n) => n,
            SymbolAlgebra::GroupAlgebraDiagonal(n) => n * n,
        }
    }

    /// Dimension of the algebra as a vector space, i.e. dim L₂(N).
    pub fn dimension(&self) -> usize {
        match *self {
            SymbolAlgebra::Diagonal(n) | SymbolAlgebra::GroupAlgebra(n) => n,
            SymbolAlgebra::FullMatrix(n) | SymbolAlgebra::GroupAlgebraDiagonal(n) => n * n,
        }
    }
}

/// A positive element f with τ(f) = 1.
#[derive(Debug, Clone)]
pub struct SymbolDensity {
    algebra: SymbolAlgebra,
    matrix: CMatrix,
}

/// τ(a) = tr(a)/d for a d×d realisation.
pub fn normalized_trace(a: &CMatrix) -> C64 {
    a.trace() / a.rows() as f64
}

impl SymbolDensity {
    /// Validates positivity and normalization.
    pub fn new(algebra: SymbolAlgebra, matrix: CMatrix) -> Result<Self> {
        let d = algebra.matrix_dim();
        if matrix.shape() != (d, d) {
            return Err(Error::InvalidDensity(format!(
                "expected {d}x{d} realisation, got {:?}",
                matrix.shape()
            )));
        }
        if matrix.hermitian_defect() > DENSITY_TOL {
            return Err(Error::InvalidDensity("not self-adjoint".into()));
        }
        let tau = normalized_trace(&matrix).re;
        if (tau - 1.0).abs() > DENSITY_TOL {
            return Err(Error::InvalidDensity(format!("τ(f) = {tau}, expected 1")));
        }
        let min = eigvalsh(&matrix)?.last().copied().unwrap_or(0.0);
        if min < -DENSITY_TOL {
            return Err(Error::InvalidDensity(format!("negative eigenvalue {min:.3e}")));
        }
        Ok(Self {
            algebra,
            matrix: matrix.hermitian_part(),
        })
    }

    /// f ∈ ℓ∞(n) from weights with mean 1.
    pub fn diagonal(weights: &[f64]) -> Result<Self> {
        if weights.iter().any(|&w| w < 0.0 || !w.is_finite()) {
            return Err(Error::InvalidDensity("negative weight".into()));
        }
        Self::new(SymbolAlgebra::Diagonal(weights.len()), CMatrix::diag_real(weights))
    }

    /// f = Σ c(g) λ(g) ∈ L(G).
    pub fn group_algebra(g: &FiniteGroup, coeffs: &[C64]) -> Result<Self> {
        if coeffs.len() != g.order() {
            return Err(Error::InvalidDensity("coefficient count must equal |G|".into()));
        }
        Self::new(
            SymbolAlgebra::GroupAlgebra(g.order()),
            group_algebra_element(g, coeffs),
        )
    }

    /// f ∈ M_n with τ = tr/n.
    pub fn full_matrix(f: CMatrix) -> Result<Self> {
        Self::new(SymbolAlgebra::FullMatrix(f.rows()), f)
    }

    /// f = Σ_g f_g ⊗ e_gg with f_g ∈ L(G) given by coefficient vectors.
    pub fn group_algebra_diagonal(g: &FiniteGroup, blocks: &[Vec<C64>]) -> Result<Self> {
        let n = g.order();
        if blocks.len() != n || blocks.iter().any(|b| b.len() != n) {
            return Err(Error::InvalidDensity("need |G| coefficient vectors of length |G|".into()));
        }
        let mut m = CMatrix::zeros(n * n, n * n);
        for (x, c) in blocks.iter().enumerate() {
            m += &kron(&group_algebra_element(g, c), &CMatrix::unit(n, n, x, x));
        }
        Self::new(SymbolAlgebra::GroupAlgebraDiagonal(n), m)
    }

    /// The unit f = 1.
    pub fn one(algebra: SymbolAlgebra) -> Self {
        let d = algebra.matrix_dim();
        Self {
            algebra,
            matrix: CMatrix::identity(d),
        }
    }

    pub fn algebra(&self) -> &SymbolAlgebra {
        &self.algebra
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn tau(&self) -> f64 {
        normalized_trace(&self.matrix).re
    }

    /// Eigenvalues of the realisation; each carries weight 1/d under τ.
    pub fn spectrum(&self) -> Result<Vec<f64>> {
        Ok(eigvalsh(&self.matrix)?.into_iter().map(|l| l.max(0.0)).collect())
    }

    /// ‖f‖_{L_p(N, τ)}
    pub fn lp_norm(&self, p: PNorm) -> Result<f64> {
        let s = self.spectrum()?;
        let d = s.len() as f64;
        Ok(match p {
            PNorm::Inf => s.iter().cloned().fold(0.0, f64::max),
            PNorm::Finite(p) => (s.iter().map(|l| l.powf(p)).sum::<f64>() / d).powf(1.0 / p),
        })
    }

    /// Coefficients in L(G): c(g) = τ(f λ(g)*). Only for group-algebra densities.
    pub fn group_coefficients(&self, g: &FiniteGroup) -> Result<Vec<C64>> {
        if self.algebra != SymbolAlgebra::GroupAlgebra(g.order()) {
            return Err(Error::InvalidDensity("not a group-algebra density".into()));
        }
        Ok((0..g.order())
            .map(|x| {
                self.matrix
                    .trace_product(&g.left_regular(x).adjoint())
                    / g.order() as f64
            })
            .collect())
    }
}

/// Σ c(g) λ(g) as a |G|×|G| matrix.
pub fn group_algebra_element(g: &FiniteGroup, coeffs: &[C64]) -> CMatrix {
    let n = g.order();
    let mut m = CMatrix::zeros(n, n);
    for (x, &c) in coeffs.iter().enumerate() {
        if c == ZERO {
            continue;
        }
        for h in 0..n {
            m[(g.mul(x, h), h)] += c;
        }
    }
    m
}

/// Random density on ℓ∞(n): n times a uniform probability vector.
pub fn random_diagonal(n: usize, rng: &mut RandomSource) -> SymbolDensity {
    let p = rng.prob_vector(n);
    SymbolDensity::diagonal(&p.iter().map(|x| x * n as f64).collect::<Vec<_>>())
        .expect("scaled probability vector is a density")
}

/// Random a*a/τ(a*a) with a a Gaussian element of L(G).
pub fn random_group_algebra(g: &FiniteGroup, rng: &mut RandomSource) -> SymbolDensity {
    let n = g.order();
    let c: Vec<C64> = (0..n).map(|_| rng.complex_gaussian()).collect();
    let a = group_algebra_element(g, &c);
    let f = a.adjoint().matmul(&a);
    let t = normalized_trace(&f).re;
    SymbolDensity::new(SymbolAlgebra::GroupAlgebra(n), f.scale_real(1.0 / t))
        .expect("a*a normalized is a density")
}

/// Random n·ρ with ρ a Gaussian density on C^n.
pub fn random_full_matrix(n: usize, rng: &mut RandomSource) -> SymbolDensity {
    SymbolDensity::full_matrix(rng.density(n).scale_real(n as f64))
        .expect("scaled density is a symbol density")
}

/// Random Σ_g f_g ⊗ e_gg with τ(f) = 1.
pub fn random_group_algebra_diagonal(g: &FiniteGroup, rng: &mut RandomSource) -> SymbolDensity {
    let n = g.order();
    let weights = rng.prob_vector(n);
    let blocks: Vec<Vec<C64>> = weights
        .iter()
        .map(|&w| {
            let f = random_group_algebra(g, rng);
            f.group_coefficients(g)
                .expect("group density")
                .into_iter()
                .map(|c| c * (w * n as f64))
                .collect()
        })
        .collect();
    SymbolDensity::group_algebra_diagonal(g, &blocks).expect("convex combination of densities")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::{cyclic, symmetric};

    #[test]
    fn one_has_unit_trace() {
        let f = SymbolDensity::one(SymbolAlgebra::FullMatrix(3));
        assert!((f.tau() - 1.0).abs() < 1e-15);
        assert!((f.lp_norm(PNorm::Finite(2.0)).unwrap() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn invalid_densities_rejected() {
        assert!(SymbolDensity::diagonal(&[1.5, 1.0]).is_err());
        assert!(SymbolDensity::diagonal(&[2.5, -0.5]).is_err());
        assert!(SymbolDensity::full_matrix(CMatrix::diag_real(&[1.0, 0.5])).is_err());
    }

    #[test]
    fn group_coefficients_roundtrip() {
        let g = symmetric(3).unwrap();
        let mut rng = RandomSource::new(2);
        let f = random_group_algebra(&g, &mut rng);
        let c = f.group_coefficients(&g).unwrap();
        assert!((c[g.identity()].re - 1.0).abs() < 1e-12);
        let rebuilt = group_algebra_element(&g, &c);
        assert!(rebuilt.max_abs_diff(f.matrix()) < 1e-12);
    }

    #[test]
    fn multiplier_matrix_of_group_density_is_psd() {
        let g = cyclic(5).unwrap();
        let mut rng = RandomSource::new(3);
        let f = random_group_algebra(&g, &mut rng);
        let c = f.group_coefficients(&g).unwrap();
        let mult = CMatrix::from_fn(5, 5, |a, b| c[g.mul(g.inv(a), b)]);
        assert!(eigvalsh(&mult).unwrap().iter().all(|&l| l > -1e-10));
    }

    #[test]
    fn random_densities_are_valid() {
        let g = cyclic(3).unwrap();
        let mut rng = RandomSource::new(4);
        assert!((random_diagonal(6, &mut rng).tau() - 1.0).abs() < 1e-12);
        assert!((random_full_matrix(4, &mut rng).tau() - 1.0).abs() < 1e-12);
        let f = random_group_algebra_diagonal(&g, &mut rng);
        assert!((f.tau() - 1.0).abs() < 1e-12);
        assert_eq!(f.algebra().dimension(), 9);
    }

    #[test]
    fn lp_norms_of_diagonal_density() {
        let f = SymbolDensity::diagonal(&[2.0, 2.0, 0.0, 0.0]).unwrap();
        assert!((f.lp_norm(PNorm::Inf).unwrap() - 2.0).abs() < 1e-14);
        // τ(f²) = (4 + 4)/4 = 2
        assert!((f.lp_norm(PNorm::Finite(2.0)).unwrap() - 2f64.sqrt()).abs() < 1e-14);
        assert!((f.lp_norm(PNorm::Finite(1.0)).unwrap() - 1.0).abs() < 1e-14);
    }
}
