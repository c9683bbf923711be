//! Seeded sampling of unitaries, densities and probability vectors.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use super::matrix::{vec_inner, vec_norm, CMatrix, C64};
use crate::error::{Error, Result};

/// Deterministic random stream keyed by a 64-bit seed.
#[derive(Debug, Clone)]
pub struct RandomSource {
    seed: u64,
    rng: ChaCha8Rng,
}

impl RandomSource {
    pub fn new(seed: u64) -> Self {
        Self {
            seed,
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Independent stream for worker `index`, seeded with seed ⊕ index.
    pub fn child(&self, index: u64) -> RandomSource {
        RandomSource::new(self.seed ^ index)
    }

    pub fn uniform(&mut self) -> f64 {
        self.rng.random::<f64>()
    }

    pub fn below(&mut self, n: usize) -> usize {
        self.rng.random_range(0..n)
    }

    pub fn next_u64(&mut self) -> u64 {
        self.rng.random::<u64>()
    }

    pub fn gaussian(&mut self) -> f64 {
        self.rng.sample(StandardNormal)
    }

    /// Standard complex Gaussian with E|z|² = 1.
    pub fn complex_gaussian(&mut self) -> C64 {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        C64::new(self.gaussian() * s, self.gaussian() * s)
    }

    pub fn gaussian_matrix(&mut self, rows: usize, cols: usize) -> CMatrix {
        CMatrix::from_fn(rows, cols, |_, _| self.complex_gaussian())
    }

    pub fn gaussian_vector(&mut self, n: usize) -> Vec<C64> {
        (0..n).map(|_| self.complex_gaussian()).collect()
    }

    /// Haar unitary: Gram–Schmidt on a Gaussian matrix, which fixes the
    /// phases so that the triangular factor has a positive diagonal.
    pub fn haar_unitary(&mut self, d: usize) -> CMatrix {
        let g = self.gaussian_matrix(d, d);
        let mut cols: Vec<Vec<C64>> = Vec::with_capacity(d);
        for j in 0..d {
            let mut v = g.col(j);
            for q in &cols {
                let proj = vec_inner(q, &v);
                for (vi, qi) in v.iter_mut().zip(q) {
                    *vi -= proj * qi;
                }
            }
            let n = vec_norm(&v);
            for vi in v.iter_mut() {
                *vi /= n;
            }
            cols.push(v);
        }
        CMatrix::from_fn(d, d, |i, j| cols[j][i])
    }

    /// Random density GG†/tr(GG†) with square Gaussian G.
    pub fn density(&mut self, d: usize) -> CMatrix {
        self.density_with_rank(d, d)
    }

    pub fn density_with_rank(&mut self, d: usize, rank: usize) -> CMatrix {
        let g = self.gaussian_matrix(d, rank);
        let a = g.matmul(&g.adjoint());
        let t = a.trace().re;
        a.scale_real(1.0 / t)
    }

    /// Unit vector in C^{da} ⊗ C^{db}.
    pub fn pure_bipartite(&mut self, da: usize, db: usize) -> Vec<C64> {
        self.unit_vector(da * db)
    }

    pub fn unit_vector(&mut self, n: usize) -> Vec<C64> {
        let mut v = self.gaussian_vector(n);
        let s = vec_norm(&v);
        for x in v.iter_mut() {
            *x /= s;
        }
        v
    }

    /// Uniform point of the probability simplex.
    pub fn prob_vector(&mut self, n: usize) -> Vec<f64> {
        let e: Vec<f64> = (0..n)
            .map(|_| -(1.0 - self.uniform()).ln())
            .collect();
        let s: f64 = e.iter().sum();
        e.into_iter().map(|x| x / s).collect()
    }
}

/// What [`sample`] should draw.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SampleKind {
    HaarUnitary(usize),
    Density(usize),
    PureBipartite(usize, usize),
    ProbVector(usize),
}

#[derive(Debug, Clone)]
pub enum Sample {
    Matrix(CMatrix),
    Vector(Vec<C64>),
    Probabilities(Vec<f64>),
}

pub fn sample(kind: SampleKind, rng: &mut RandomSource) -> Result<Sample> {
    let positive = |d: usize| {
        if d == 0 {
            Err(Error::InvalidParameter("sample dimensions must be positive".into()))
        } else {
            Ok(())
        }
    };
    Ok(match kind {
        SampleKind::HaarUnitary(d) => {
            positive(d)?;
            Sample::Matrix(rng.haar_unitary(d))
        }
        SampleKind::Density(d) => {
            positive(d)?;
            Sample::Matrix(rng.density(d))
        }
        SampleKind::PureBipartite(a, b) => {
            positive(a)?;
            positive(b)?;
            Sample::Vector(rng.pure_bipartite(a, b))
        }
        SampleKind::ProbVector(n) => {
            positive(n)?;
            Sample::Probabilities(rng.prob_vector(n))
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matcore::eigen::eigvalsh;

    #[test]
    fn same_seed_same_stream() {
        let mut a = RandomSource::new(42);
        let mut b = RandomSource::new(42);
        for _ in 0..10 {
            assert_eq!(a.next_u64(), b.next_u64());
        }
        assert_ne!(RandomSource::new(1).next_u64(), RandomSource::new(2).next_u64());
        assert_eq!(a.child(3).seed(), 42 ^ 3);
    }

    #[test]
    fn haar_is_unitary() {
        let mut rng = RandomSource::new(7);
        let u = rng.haar_unitary(3);
        assert!(u.adjoint().matmul(&u).max_abs_diff(&CMatrix::identity(3)) < 1e-10);
    }

    #[test]
    fn density_is_psd_with_unit_trace() {
        let mut rng = RandomSource::new(8);
        let rho = rng.density(4);
        assert!((rho.trace().re - 1.0).abs() < 1e-12);
        assert!(eigvalsh(&rho).unwrap().iter().all(|&l| l > -1e-14));
    }

    #[test]
    fn haar_first_column_averages_to_maximally_mixed() {
        // Schur orthogonality: E[U e₁e₁† U†] = I/d
        let mut rng = RandomSource::new(9);
        let d = 3;
        let mut acc = CMatrix::zeros(d, d);
        let n = 10_000;
        for _ in 0..n {
            let u = rng.haar_unitary(d);
            let c = u.col(0);
            acc += &CMatrix::outer(&c, &c);
        }
        let mean = acc.scale_real(1.0 / n as f64);
        let target = CMatrix::identity(d).scale_real(1.0 / d as f64);
        assert!(mean.max_abs_diff(&target) < 3e-2);
    }

    #[test]
    fn sample_dispatch() {
        let mut rng = RandomSource::new(1);
        match sample(SampleKind::ProbVector(5), &mut rng).unwrap() {
            Sample::Probabilities(p) => {
                assert_eq!(p.len(), 5);
                assert!((p.iter().sum::<f64>() - 1.0).abs() < 1e-12);
                assert!(p.iter().all(|&x| x >= 0.0));
            }
            _ => panic!("wrong sample kind"),
        }
        match sample(SampleKind::PureBipartite(2, 3), &mut rng).unwrap() {
            Sample::Vector(v) => assert!((vec_norm(&v) - 1.0).abs() < 1e-12),
            _ => panic!("wrong sample kind"),
        }
        assert!(sample(SampleKind::Density(0), &mut rng).is_err());
    }
}
