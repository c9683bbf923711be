//! One-shot rate triples (C, Q, E) of an ensemble of pure bipartite inputs
//! and the shift test against the resource-trading cone.

use serde::Serialize;

use super::entropic::ChannelEvaluator;
use crate::channels::Channel;
use crate::error::{Error, Result};
use crate::matcore::norms::entropy_of_normalized;
use crate::matcore::matrix::vec_norm;
use crate::matcore::{CMatrix, C64};

pub const CONE_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RateTriple {
    pub c: f64,
    pub q: f64,
    pub e: f64,
}

impl RateTriple {
    pub fn new(c: f64, q: f64, e: f64) -> Self {
        Self { c, q, e }
    }
}

/// One member of an ensemble: probability and a pure state on A ⊗ A′.
pub type EnsembleMember = (f64, Vec<C64>);

/// (I(X;B), ½I(A;B|X), −½I(A;E|X)) on σ^{XABE}.
pub fn cqe_triple(phi: &Channel, ensemble: &[EnsembleMember]) -> Result<RateTriple> {
    if ensemble.is_empty() {
        return Err(Error::InvalidParameter("empty ensemble".into()));
    }
    let total: f64 = ensemble.iter().map(|(p, _)| p).sum();
    if ensemble.iter().any(|(p, _)| *p < 0.0) || (total - 1.0).abs() > 1e-9 {
        return Err(Error::InvalidParameter(format!("probabilities sum to {total}")));
    }
    let d = phi.dim_in();
    let ev = ChannelEvaluator::new(phi);
    let mut avg_b = CMatrix::zeros(phi.dim_out(), phi.dim_out());
    let (mut hb_avg, mut q2, mut e2) = (0.0, 0.0, 0.0);
    for (p, psi) in ensemble {
        if psi.len() % d != 0 {
            return Err(Error::DimensionMismatch(format!(
                "state of length {} does not factor through {d}",
                psi.len()
            )));
        }
        if (vec_norm(psi) - 1.0).abs() > 1e-9 {
            return Err(Error::InvalidParameter("ensemble states must be unit vectors".into()));
        }
        let r = psi.len() / d;
        // ρ^{A′} = Ψᵀ conj(Ψ) for the r × d coefficient matrix Ψ
        let m = CMatrix::from_vec(r, d, psi.clone())?;
        let rho = m.transpose().matmul(&m.conj()).hermitian_part();
        let out = ev.output(&rho);
        let ha = entropy_of_normalized(&rho)?;
        let hb = entropy_of_normalized(&out)?;
        let he = entropy_of_normalized(&ev.environment(&rho))?;
        avg_b.axpy(C64::new(*p, 0.0), &out);
        hb_avg += p * hb;
        q2 += p * (ha + hb - he);
        e2 += p * (ha + he - hb);
    }
    let c = entropy_of_normalized(&avg_b)? - hb_avg;
    Ok(RateTriple::new(c, 0.5 * q2, -0.5 * e2))
}

/// The three cone quantities of Δ = t_f − t₁ − (τ, τ/2, τ/2); all must be ≤ 0.
pub fn cqe_shift_slacks(tf: &RateTriple, t1: &RateTriple, tau: f64) -> [f64; 3] {
    let dc = tf.c - t1.c - tau;
    let dq = tf.q - t1.q - tau / 2.0;
    let de = tf.e - t1.e - tau / 2.0;
    [2.0 * dq + dc, dq + de, dc + dq + de]
}

/// t_f ∈ (τ, τ/2, τ/2) + t₁ + W.
pub fn cqe_shift_check(tf: &RateTriple, t1: &RateTriple, tau: f64) -> bool {
    cqe_shift_slacks(tf, t1, tau).iter().all(|&s| s <= CONE_TOL)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channels::identity_channel;

    #[test]
    fn identity_classical_ensemble() {
        let phi = identity_channel(3);
        let ens: Vec<EnsembleMember> = (0..3)
            .map(|k| {
                let mut v = vec![C64::new(0.0, 0.0); 3];
                v[k] = C64::new(1.0, 0.0);
                (1.0 / 3.0, v)
            })
            .collect();
        let t = cqe_triple(&phi, &ens).unwrap();
        assert!((t.c - 3f64.ln()).abs() < 1e-12);
        assert!(t.q.abs() < 1e-12 && t.e.abs() < 1e-12);
    }

    #[test]
    fn cone_membership() {
        let t1 = RateTriple::new(0.0, 0.0, 0.0);
        assert!(cqe_shift_check(&RateTriple::new(0.5, 0.25, 0.25), &t1, 0.5));
        assert!(!cqe_shift_check(&RateTriple::new(1.0, 0.25, 0.25), &t1, 0.5));
    }

    #[test]
    fn invalid_ensembles_rejected() {
        let phi = identity_channel(2);
        assert!(cqe_triple(&phi, &[]).is_err());
        let v = vec![C64::new(1.0, 0.0), C64::new(0.0, 0.0)];
        assert!(cqe_triple(&phi, &[(0.5, v)]).is_err());
    }
}
