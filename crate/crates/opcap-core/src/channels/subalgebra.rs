//! Block structure of subalgebras M = ⊕ₖ M_{n_k} ⊗ 1_{m_k} ⊆ M_m and their
//! trace-preserving conditional expectations.

use serde::{Deserialize, Serialize};

use super::channel::{make_labelled, Channel};
use crate::error::{Error, Result};
use crate::groups::cluster_sizes;
use crate::matcore::{eigh, kron, CMatrix, RandomSource};

/// Blocks (n_k, m_k) of M ≅ ⊕ₖ M_{n_k} ⊗ 1_{m_k}.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubalgebraSpec {
    blocks: Vec<(usize, usize)>,
}

impl SubalgebraSpec {
    pub fn new(blocks: Vec<(usize, usize)>) -> Result<Self> {
        if blocks.is_empty() || blocks.iter().any(|&(n, m)| n == 0 || m == 0) {
            return Err(Error::InvalidParameter(format!("invalid block list {blocks:?}")));
        }
        Ok(Self { blocks })
    }

    /// The full algebra M_m.
    pub fn full(m: usize) -> Self {
        Self { blocks: vec![(m, 1)] }
    }

    /// Scalars C·1 inside M_m.
    pub fn scalars(m: usize) -> Self {
        Self { blocks: vec![(1, m)] }
    }

    /// Diagonal algebra ℓ∞(m).
    pub fn diagonal(m: usize) -> Self {
        Self {
            blocks: vec![(1, 1); m],
        }
    }

    pub fn blocks(&self) -> &[(usize, usize)] {
        &self.blocks
    }

    pub fn ambient_dim(&self) -> usize {
        self.blocks.iter().map(|&(n, m)| n * m).sum()
    }

    /// Size of the largest matrix block.
    pub fn d_m(&self) -> usize {
        self.blocks.iter().map(|&(n, _)| n).max().unwrap_or(1)
    }

    /// dim M = Σ n_k²
    pub fn dimension(&self) -> usize {
        self.blocks.iter().map(|&(n, _)| n * n).sum()
    }

    /// dim M′ = Σ m_k²
    pub fn commutant_dimension(&self) -> usize {
        self.blocks.iter().map(|&(_, m)| m * m).sum()
    }

    fn offsets(&self) -> Vec<usize> {
        let mut off = Vec::with_capacity(self.blocks.len());
        let mut o = 0;
        for &(n, m) in &self.blocks {
            off.push(o);
            o += n * m;
        }
        off
    }

    /// Kraus operators (1/√m_k)(1_{n_k} ⊗ e_{b′b}) of the conditional expectation,
    /// embedded at the block offsets. They lie in M′ and are trace-orthogonal.
    pub fn expectation_kraus(&self) -> Vec<CMatrix> {
        let dim = self.ambient_dim();
        let mut out = Vec::with_capacity(self.commutant_dimension());
        for (&(n, m), off) in self.blocks.iter().zip(self.offsets()) {
            let s = 1.0 / (m as f64).sqrt();
            for b in 0..m {
                for bp in 0..m {
                    let local = kron(&CMatrix::identity(n), &CMatrix::unit(m, m, bp, b));
                    let mut k = CMatrix::zeros(dim, dim);
                    k.set_block(off, off, &local.scale_real(s));
                    out.push(k);
                }
            }
        }
        out
    }

    /// Trace-orthonormal basis of M: e_{aa′} ⊗ 1_{m_k}/√m_k per block.
    pub fn algebra_basis(&self) -> Vec<CMatrix> {
        let dim = self.ambient_dim();
        let mut out = Vec::with_capacity(self.dimension());
        for (&(n, m), off) in self.blocks.iter().zip(self.offsets()) {
            let s = 1.0 / (m as f64).sqrt();
            for a in 0..n {
                for ap in 0..n {
                    let local = kron(&CMatrix::unit(n, n, a, ap), &CMatrix::identity(m));
                    let mut b = CMatrix::zeros(dim, dim);
                    b.set_block(off, off, &local.scale_real(s));
                    out.push(b);
                }
            }
        }
        out
    }

    /// Trace-orthonormal basis of M′: 1_{n_k} ⊗ e_{bb′}/√n_k per block.
    pub fn commutant_basis(&self) -> Vec<CMatrix> {
        let dim = self.ambient_dim();
        let mut out = Vec::with_capacity(self.commutant_dimension());
        for (&(n, m), off) in self.blocks.iter().zip(self.offsets()) {
            let s = 1.0 / (n as f64).sqrt();
            for b in 0..m {
                for bp in 0..m {
                    let local = kron(&CMatrix::identity(n), &CMatrix::unit(m, m, b, bp));
                    let mut e = CMatrix::zeros(dim, dim);
                    e.set_block(off, off, &local.scale_real(s));
                    out.push(e);
                }
            }
        }
        out
    }
}

/// E_M = ⊕ₖ (id_{n_k} ⊗ tr_{m_k}) followed by re-embedding with 1/m_k.
pub fn conditional_expectation(spec: &SubalgebraSpec) -> Channel {
    make_labelled(spec.expectation_kraus(), &format!("E_M{:?}", spec.blocks))
        .expect("conditional expectation is trace preserving by construction")
}

/// Choi matrix Σ_r conj(b_r) ⊗ b_r of the trace-preserving projection onto the
/// span of a trace-orthonormal family {b_r}.
pub fn projection_choi(basis: &[CMatrix]) -> CMatrix {
    let d = basis[0].rows();
    let mut chi = CMatrix::zeros(d * d, d * d);
    for b in basis {
        chi += &kron(&b.conj(), b);
    }
    chi
}

/// Random Hermitian element Σ c_r e_r of the span of a basis.
pub fn random_hermitian_in(basis: &[CMatrix], rng: &mut RandomSource) -> CMatrix {
    let d = basis[0].rows();
    let mut a = CMatrix::zeros(d, d);
    for e in basis {
        a.axpy(rng.complex_gaussian(), e);
    }
    // the spans used here are *-closed, so the Hermitian part stays inside
    a.hermitian_part()
}

/// Spectral projection of a generic Hermitian element of M′ onto one of its
/// largest-multiplicity eigenspaces. For M′ = ⊕ 1_{n_k} ⊗ M_{m_k} this has
/// rank d_M = max n_k, and P/d_M is a state on which E_M has coherent
/// information ln d_M.
pub fn largest_block_projection(commutant_basis: &[CMatrix], rng: &mut RandomSource) -> Result<CMatrix> {
    for _ in 0..8 {
        let a = random_hermitian_in(commutant_basis, rng);
        let s = eigh(&a)?;
        let sizes = cluster_sizes(&s.eigenvalues, 1e-7);
        let (mut start, mut best, mut best_start) = (0, 0, 0);
        for &sz in &sizes {
            if sz > best {
                best = sz;
                best_start = start;
            }
            start += sz;
        }
        if best == 0 {
            continue;
        }
        let d = a.rows();
        let mut p = CMatrix::zeros(d, d);
        for k in best_start..best_start + best {
            let v = s.eigenvector(k);
            p += &CMatrix::outer(&v, &v);
        }
        return Ok(p);
    }
    Err(Error::InvalidParameter("could not isolate an eigenspace".into()))
}

/// Eigenvalue multiplicities of a generic Hermitian element of a *-algebra
/// given by a basis, sorted descending.
pub fn generic_multiplicities(basis: &[CMatrix], rng: &mut RandomSource) -> Result<Vec<usize>> {
    let a = random_hermitian_in(basis, rng);
    let vals = crate::matcore::eigvalsh(&a)?;
    let mut sizes = cluster_sizes(&vals, 1e-7);
    sizes.sort_unstable_by(|x, y| y.cmp(x));
    Ok(sizes)
}

/// Recovers the blocks (n_k, m_k) of M from trace-orthonormal bases of M and M′.
///
/// The center M ∩ M′ is the singular-value-1 subspace of the overlap matrix
/// [tr(a_r* e_s)]; a generic central element splits the space into the
/// blocks, and a generic element of M′ compressed to block k has m_k distinct
/// eigenvalues each of multiplicity n_k.
pub fn block_structure(
    algebra_basis: &[CMatrix],
    commutant_basis: &[CMatrix],
    rng: &mut RandomSource,
) -> Result<SubalgebraSpec> {
    let overlap = CMatrix::from_fn(algebra_basis.len(), commutant_basis.len(), |r, s| {
        algebra_basis[r].hs_inner(&commutant_basis[s])
    });
    let s = eigh(&overlap.matmul_adjoint(&overlap))?;
    let center: Vec<CMatrix> = (0..s.eigenvalues.len())
        .filter(|&k| s.eigenvalues[k] > 1.0 - 1e-8)
        .map(|k| {
            let u = s.eigenvector(k);
            let d = algebra_basis[0].rows();
            let mut z = CMatrix::zeros(d, d);
            for (c, a) in u.iter().zip(algebra_basis) {
                z.axpy(*c, a);
            }
            z
        })
        .collect();
    if center.is_empty() {
        return Err(Error::ConditionFailure("M and M′ have trivial intersection".into()));
    }
    for _ in 0..8 {
        let z = eigh(&random_hermitian_in(&center, rng))?;
        let b = random_hermitian_in(commutant_basis, rng);
        let mut blocks = Vec::new();
        let mut start = 0;
        let mut ok = true;
        for size in cluster_sizes(&z.eigenvalues, 1e-7) {
            let d = z.eigenvectors.rows();
            let v = CMatrix::from_fn(d, size, |i, j| z.eigenvectors[(i, start + j)]);
            let local = crate::matcore::eigvalsh(&v.adjoint().matmul(&b).matmul(&v))?;
            let mult = cluster_sizes(&local, 1e-7);
            let n = mult[0];
            if mult.iter().any(|&x| x != n) {
                ok = false;
                break;
            }
            blocks.push((n, mult.len()));
            start += size;
        }
        if ok {
            let spec = SubalgebraSpec::new(blocks)?;
            if spec.dimension() == algebra_basis.len()
                && spec.commutant_dimension() == commutant_basis.len()
            {
                return Ok(spec);
            }
        }
    }
    Err(Error::ConditionFailure("could not resolve the block structure".into()))
}
