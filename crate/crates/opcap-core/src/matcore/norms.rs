//! Schatten norms, entropies and matrix functions.

use std::fmt;

use serde::{Deserialize, Serialize};

use super::eigen::{eigh, eigvalsh};
use super::matrix::CMatrix;
use crate::error::{Error, Result};

/// Eigenvalues below this are treated as exact zeros in entropies.
pub const ENTROPY_CLAMP: f64 = 1e-14;
/// Trace and negativity tolerance for density validation.
pub const DENSITY_TOL: f64 = 1e-8;

/// A Schatten exponent in [1, ∞].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum PNorm {
    Finite(f64),
    Inf,
}

impl PNorm {
    pub fn new(p: f64) -> Result<Self> {
        if p.is_nan() || p < 1.0 {
            return Err(Error::InvalidExponent(p));
        }
        if p.is_infinite() {
            Ok(PNorm::Inf)
        } else {
            Ok(PNorm::Finite(p))
        }
    }

    /// Conjugate exponent p′ with 1/p + 1/p′ = 1.
    pub fn conjugate(self) -> PNorm {
        match self {
            PNorm::Inf => PNorm::Finite(1.0),
            PNorm::Finite(p) if p == 1.0 => PNorm::Inf,
            PNorm::Finite(p) => PNorm::Finite(p / (p - 1.0)),
        }
    }

    /// 1/p, zero for p = ∞.
    pub fn reciprocal(self) -> f64 {
        match self {
            PNorm::Inf => 0.0,
            PNorm::Finite(p) => 1.0 / p,
        }
    }

    pub fn as_f64(self) -> f64 {
        match self {
            PNorm::Inf => f64::INFINITY,
            PNorm::Finite(p) => p,
        }
    }
}

impl fmt::Display for PNorm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PNorm::Inf => write!(f, "inf"),
            PNorm::Finite(p) => write!(f, "{p}"),
        }
    }
}

impl std::str::FromStr for PNorm {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim().to_ascii_lowercase();
        if t == "inf" || t == "infinity" || t == "∞" {
            return Ok(PNorm::Inf);
        }
        let p: f64 = t
            .parse()
            .map_err(|_| Error::InvalidParameter(format!("cannot parse exponent '{s}'")))?;
        PNorm::new(p)
    }
}

/// ℓ_p norm of a list of non-negative numbers, computed relative to the max.
pub fn lp_norm(values: &[f64], p: PNorm) -> f64 {
    let top = values.iter().cloned().fold(0.0f64, f64::max);
    if top == 0.0 {
        return 0.0;
    }
    match p {
        PNorm::Inf => top,
        PNorm::Finite(p) => {
            let s: f64 = values.iter().map(|&v| (v / top).powf(p)).sum();
            top * s.powf(1.0 / p)
        }
    }
}

/// Singular values, descending.
pub fn singular_values(a: &CMatrix) -> Result<Vec<f64>> {
    if a.is_square() && a.hermitian_defect() <= 1e-12 * a.frobenius_norm().max(1.0) {
        let mut s: Vec<f64> = eigvalsh(a)?.into_iter().map(f64::abs).collect();
        s.sort_by(|x, y| y.partial_cmp(x).unwrap());
        return Ok(s);
    }
    let g = if a.rows() >= a.cols() {
        a.adjoint().matmul(a)
    } else {
        a.matmul(&a.adjoint())
    };
    Ok(eigvalsh(&g)?.into_iter().map(|l| l.max(0.0).sqrt()).collect())
}

/// Schatten p-norm (Σ sᵢᵖ)^{1/p}; p = ∞ gives the largest singular value.
pub fn schatten_norm(a: &CMatrix, p: PNorm) -> Result<f64> {
    if let PNorm::Finite(x) = p {
        if x.is_nan() || x < 1.0 {
            return Err(Error::InvalidExponent(x));
        }
    }
    Ok(lp_norm(&singular_values(a)?, p))
}

/// −Σ λ ln λ of a probability vector, with 0 ln 0 = 0.
pub fn shannon_entropy(p: &[f64]) -> f64 {
    p.iter()
        .filter(|&&x| x > ENTROPY_CLAMP)
        .map(|&x| -x * x.ln())
        .sum()
}

/// Binary entropy in nats.
pub fn binary_entropy(x: f64) -> f64 {
    shannon_entropy(&[x, 1.0 - x])
}

/// Validates a density up to [`DENSITY_TOL`] and returns its normalized spectrum.
pub fn density_spectrum(rho: &CMatrix) -> Result<Vec<f64>> {
    if !rho.is_square() {
        return Err(Error::NotDensity("not square".into()));
    }
    let defect = rho.hermitian_defect();
    if defect > DENSITY_TOL {
        return Err(Error::NotDensity(format!("Hermitian defect {defect:.3e}")));
    }
    let tr = rho.trace().re;
    if (tr - 1.0).abs() > DENSITY_TOL {
        return Err(Error::NotDensity(format!("trace {tr}")));
    }
    let vals = eigvalsh(rho)?;
    if let Some(&min) = vals.last() {
        if min < -DENSITY_TOL {
            return Err(Error::NotDensity(format!("negative eigenvalue {min:.3e}")));
        }
    }
    Ok(vals.into_iter().map(|l| l.max(0.0) / tr).collect())
}

/// Von Neumann entropy in nats.
pub fn von_neumann_entropy(rho: &CMatrix) -> Result<f64> {
    Ok(shannon_entropy(&density_spectrum(rho)?))
}

/// Entropy of the normalized PSD matrix a/tr(a), without trace validation.
pub fn entropy_of_normalized(a: &CMatrix) -> Result<f64> {
    let vals = eigvalsh(a)?;
    let tr: f64 = vals.iter().map(|l| l.max(0.0)).sum();
    if tr <= 0.0 {
        return Err(Error::NotDensity("zero trace".into()));
    }
    Ok(shannon_entropy(
        &vals.iter().map(|l| l.max(0.0) / tr).collect::<Vec<_>>(),
    ))
}

/// Matrix logarithm of a PSD matrix with eigenvalues clamped below at `floor`.
pub fn log_psd(a: &CMatrix, floor: f64) -> Result<CMatrix> {
    Ok(eigh(a)?.map(|l| l.max(floor).ln()))
}

/// a^t for PSD a (negative eigenvalues clamped to zero).
pub fn power_psd(a: &CMatrix, t: f64) -> Result<CMatrix> {
    Ok(eigh(a)?.map(|l| if l > 0.0 { l.powf(t) } else { 0.0 }))
}

pub fn sqrt_psd(a: &CMatrix) -> Result<CMatrix> {
    power_psd(a, 0.5)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matcore::matrix::C64;
    use crate::matcore::random::RandomSource;

    #[test]
    fn diagonal_two_norm() {
        let a = CMatrix::diag_real(&[0.5, 0.5]);
        let n = schatten_norm(&a, PNorm::Finite(2.0)).unwrap();
        assert!((n - 1.0 / 2f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn rank_one_projector_has_unit_norms() {
        let v = [C64::new(0.6, 0.0), C64::new(0.0, 0.8)];
        let p = CMatrix::outer(&v, &v);
        for q in [PNorm::Finite(1.0), PNorm::Finite(2.5), PNorm::Inf] {
            assert!((schatten_norm(&p, q).unwrap() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn hermitian_three_norm_matches_eigenvalue_powers() {
        let mut rng = RandomSource::new(21);
        let g = rng.gaussian_matrix(4, 4);
        let a = &g + &g.adjoint();
        let vals = eigvalsh(&a).unwrap();
        let oracle = vals.iter().map(|l| l.abs().powi(3)).sum::<f64>().cbrt();
        let n = schatten_norm(&a, PNorm::Finite(3.0)).unwrap();
        assert!((n - oracle).abs() < 1e-10);
    }

    #[test]
    fn non_square_singular_values() {
        let a = CMatrix::from_real_rows(&[vec![3.0, 0.0, 0.0], vec![0.0, 4.0, 0.0]]).unwrap();
        let s = singular_values(&a).unwrap();
        assert!((s[0] - 4.0).abs() < 1e-12 && (s[1] - 3.0).abs() < 1e-12);
        assert!((schatten_norm(&a, PNorm::Finite(2.0)).unwrap() - 5.0).abs() < 1e-12);
    }

    #[test]
    fn exponent_below_one_rejected() {
        assert!(PNorm::new(0.5).is_err());
        assert!(schatten_norm(&CMatrix::identity(2), PNorm::Finite(0.9)).is_err());
        assert_eq!(PNorm::new(f64::INFINITY).unwrap(), PNorm::Inf);
        assert_eq!("inf".parse::<PNorm>().unwrap(), PNorm::Inf);
    }

    #[test]
    fn conjugate_exponents() {
        assert_eq!(PNorm::Finite(2.0).conjugate(), PNorm::Finite(2.0));
        assert_eq!(PNorm::Inf.conjugate(), PNorm::Finite(1.0));
        assert_eq!(PNorm::Finite(1.0).conjugate(), PNorm::Inf);
    }

    #[test]
    fn entropy_examples() {
        for d in [1usize, 2, 5] {
            let rho = CMatrix::identity(d).scale_real(1.0 / d as f64);
            assert!((von_neumann_entropy(&rho).unwrap() - (d as f64).ln()).abs() < 1e-14);
        }
        let v = [C64::new(0.0, 1.0 / 2f64.sqrt()), C64::new(1.0 / 2f64.sqrt(), 0.0)];
        assert!(von_neumann_entropy(&CMatrix::outer(&v, &v)).unwrap().abs() < 1e-14);
        let h = von_neumann_entropy(&CMatrix::diag_real(&[0.25, 0.75])).unwrap();
        let oracle = -(0.25f64 * 0.25f64.ln() + 0.75 * 0.75f64.ln());
        assert!((h - oracle).abs() < 1e-15);
    }

    #[test]
    fn entropy_rejects_invalid_inputs() {
        assert!(von_neumann_entropy(&CMatrix::diag_real(&[0.6, 0.6])).is_err());
        assert!(von_neumann_entropy(&CMatrix::diag_real(&[1.1, -0.1])).is_err());
        // small drift is normalized away
        let h = von_neumann_entropy(&CMatrix::diag_real(&[0.5 + 2e-9, 0.5])).unwrap();
        assert!((h - 2f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn log_and_power_roundtrip() {
        let a = CMatrix::diag_real(&[4.0, 1.0, 0.25]);
        let l = log_psd(&a, 1e-12).unwrap();
        assert!((l[(0, 0)].re - 4f64.ln()).abs() < 1e-14);
        let s = sqrt_psd(&a).unwrap();
        assert!(s.matmul(&s).max_abs_diff(&a) < 1e-13);
    }
}
