//! Kraus-form channels and the standard operations on them.

use crate::error::{Error, Result};
use crate::matcore::{kron, CMatrix, PNorm, ZERO};

/// Trace-preservation tolerance for [`make_channel`].
pub const TP_TOL: f64 = 1e-10;
/// Kraus operators below this Frobenius norm are dropped.
pub const KRAUS_DROP_TOL: f64 = 1e-12;

/// A completely positive trace-preserving map in Kraus form.
#[derive(Debug, Clone)]
pub struct Channel {
    dim_in: usize,
    dim_out: usize,
    kraus: Vec<CMatrix>,
    /// Free-form family tag, e.g. `pauli(n=3)`.
    pub label: String,
}

/// Validates a Kraus list and builds a channel.
pub fn make_channel(kraus: Vec<CMatrix>) -> Result<Channel> {
    make_labelled(kraus, "kraus")
}

pub fn make_labelled(kraus: Vec<CMatrix>, label: &str) -> Result<Channel> {
    let first = kraus
        .first()
        .ok_or_else(|| Error::DimensionMismatch("empty Kraus list".into()))?;
    let (dim_out, dim_in) = first.shape();
    if kraus.iter().any(|k| k.shape() != (dim_out, dim_in)) {
        return Err(Error::DimensionMismatch("Kraus operators differ in shape".into()));
    }
    let mut kept: Vec<CMatrix> = kraus
        .into_iter()
        .filter(|k| k.frobenius_norm() >= KRAUS_DROP_TOL)
        .collect();
    if kept.is_empty() {
        return Err(Error::NotTracePreserving(1.0));
    }
    kept.shrink_to_fit();
    let ch = Channel {
        dim_in,
        dim_out,
        kraus: kept,
        label: label.to_string(),
    };
    let err = ch.tp_error();
    if err > TP_TOL {
        return Err(Error::NotTracePreserving(err));
    }
    Ok(ch)
}

impl Channel {
    pub fn dim_in(&self) -> usize {
        self.dim_in
    }

    pub fn dim_out(&self) -> usize {
        self.dim_out
    }

    pub fn kraus(&self) -> &[CMatrix] {
        &self.kraus
    }

    pub fn num_kraus(&self) -> usize {
        self.kraus.len()
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    /// max |Σ K†K − I|
    pub fn tp_error(&self) -> f64 {
        let mut s = CMatrix::zeros(self.dim_in, self.dim_in);
        for k in &self.kraus {
            s += &k.adjoint().matmul(k);
        }
        s.max_abs_diff(&CMatrix::identity(self.dim_in))
    }

    /// Φ(ρ) = Σ K ρ K†
    pub fn apply(&self, rho: &CMatrix) -> CMatrix {
        assert_eq!(rho.shape(), (self.dim_in, self.dim_in), "channel input dimension");
        let mut out = CMatrix::zeros(self.dim_out, self.dim_out);
        for k in &self.kraus {
            out += &k.sandwich(rho);
        }
        out
    }

    /// Φ†(X) = Σ K† X K
    pub fn apply_adjoint(&self, x: &CMatrix) -> CMatrix {
        assert_eq!(x.shape(), (self.dim_out, self.dim_out), "channel output dimension");
        let mut out = CMatrix::zeros(self.dim_in, self.dim_in);
        for k in &self.kraus {
            out += &k.adjoint().sandwich(x);
        }
        out
    }

    /// (id_ref ⊗ Φ)(ρ) on C^{dim_ref} ⊗ C^{dim_in}.
    pub fn apply_extended(&self, rho: &CMatrix, dim_ref: usize) -> Result<CMatrix> {
        let n = dim_ref * self.dim_in;
        if rho.shape() != (n, n) {
            return Err(Error::DimensionMismatch(format!(
                "extended input must be {n}x{n}, got {:?}",
                rho.shape()
            )));
        }
        let (di, dout) = (self.dim_in, self.dim_out);
        let mut out = CMatrix::zeros(dim_ref * dout, dim_ref * dout);
        let adj: Vec<CMatrix> = self.kraus.iter().map(|k| k.adjoint()).collect();
        for a in 0..dim_ref {
            for b in 0..dim_ref {
                let blk = rho.block(a * di, b * di, di, di);
                if blk.max_abs() == 0.0 {
                    continue;
                }
                let mut acc = CMatrix::zeros(dout, dout);
                for (k, kd) in self.kraus.iter().zip(&adj) {
                    acc += &k.matmul(&blk).matmul(kd);
                }
                out.set_block(a * dout, b * dout, &acc);
            }
        }
        Ok(out)
    }

    /// Choi matrix Σ e_ij ⊗ Φ(e_ij).
    pub fn choi(&self) -> CMatrix {
        let (di, dout) = (self.dim_in, self.dim_out);
        let n = di * dout;
        let mut chi = CMatrix::zeros(n, n);
        for k in &self.kraus {
            // v[(i, o)] = K[o, i]
            let v: Vec<_> = (0..n).map(|idx| k[(idx % dout, idx / dout)]).collect();
            for (r, &vr) in v.iter().enumerate() {
                if vr == ZERO {
                    continue;
                }
                for (c, vc) in v.iter().enumerate() {
                    chi[(r, c)] += vr * vc.conj();
                }
            }
        }
        chi
    }

    /// Complementary channel with Kraus R_k[i, :] = K_i[k, :].
    pub fn complementary(&self) -> Channel {
        let env = self.kraus.len();
        let kraus = (0..self.dim_out)
            .map(|k| {
                CMatrix::from_fn(env, self.dim_in, |i, j| self.kraus[i][(k, j)])
            })
            .collect();
        Channel {
            dim_in: self.dim_in,
            dim_out: env,
            kraus,
            label: format!("complementary({})", self.label),
        }
    }

    /// Kraus isometry V = Σ K_i ⊗ |i⟩ with output ordered (out, env).
    pub fn stinespring(&self) -> CMatrix {
        let env = self.kraus.len();
        let mut v = CMatrix::zeros(self.dim_out * env, self.dim_in);
        for (i, k) in self.kraus.iter().enumerate() {
            for o in 0..self.dim_out {
                for j in 0..self.dim_in {
                    v[(o * env + i, j)] = k[(o, j)];
                }
            }
        }
        v
    }

    /// self ∘ first
    pub fn compose_after(&self, first: &Channel) -> Channel {
        assert_eq!(first.dim_out, self.dim_in, "composition dimensions");
        let mut kraus = Vec::with_capacity(self.kraus.len() * first.kraus.len());
        for a in &self.kraus {
            for b in &first.kraus {
                let k = a.matmul(b);
                if k.frobenius_norm() >= KRAUS_DROP_TOL {
                    kraus.push(k);
                }
            }
        }
        Channel {
            dim_in: first.dim_in,
            dim_out: self.dim_out,
            kraus,
            label: format!("{}∘{}", self.label, first.label),
        }
    }

    /// Distance between Choi matrices (max entry).
    pub fn choi_distance(&self, other: &Channel) -> f64 {
        self.choi().max_abs_diff(&other.choi())
    }

    /// Conjugates every Kraus operator: K ↦ U† K W.
    pub fn conjugated(&self, u_out: &CMatrix, w_in: &CMatrix) -> Channel {
        let ud = u_out.adjoint();
        Channel {
            dim_in: self.dim_in,
            dim_out: self.dim_out,
            kraus: self.kraus.iter().map(|k| ud.matmul(k).matmul(w_in)).collect(),
            label: self.label.clone(),
        }
    }
}

pub fn identity_channel(d: usize) -> Channel {
    Channel {
        dim_in: d,
        dim_out: d,
        kraus: vec![CMatrix::identity(d)],
        label: format!("identity(d={d})"),
    }
}

/// Φ ⊗ Ψ with Kraus {K ⊗ L}.
pub fn tensor(a: &Channel, b: &Channel) -> Channel {
    let mut kraus = Vec::with_capacity(a.kraus.len() * b.kraus.len());
    for k in &a.kraus {
        for l in &b.kraus {
            kraus.push(kron(k, l));
        }
    }
    Channel {
        dim_in: a.dim_in * b.dim_in,
        dim_out: a.dim_out * b.dim_out,
        kraus,
        label: format!("({})⊗({})", a.label, b.label),
    }
}

/// ⊕ Φ_i with block-diagonally embedded Kraus operators.
pub fn direct_sum(parts: &[Channel]) -> Result<Channel> {
    if parts.is_empty() {
        return Err(Error::InvalidParameter("direct sum of no channels".into()));
    }
    let din: usize = parts.iter().map(|c| c.dim_in).sum();
    let dout: usize = parts.iter().map(|c| c.dim_out).sum();
    let mut kraus = Vec::new();
    let (mut oi, mut oo) = (0, 0);
    for c in parts {
        for k in &c.kraus {
            let mut big = CMatrix::zeros(dout, din);
            big.set_block(oo, oi, k);
            kraus.push(big);
        }
        oi += c.dim_in;
        oo += c.dim_out;
    }
    let label = parts
        .iter()
        .map(|c| c.label.as_str())
        .collect::<Vec<_>>()
        .join("⊕");
    make_labelled(kraus, &label)
}

/// Dephasing ρ ↦ ((1+q)/2)ρ + ((1−q)/2)ZρZ on a qubit.
pub fn dephasing(q: f64) -> Result<Channel> {
    check_unit_interval(q, "dephasing parameter")?;
    let z = CMatrix::diag_real(&[1.0, -1.0]);
    make_labelled(
        vec![
            CMatrix::identity(2).scale_real(((1.0 + q) / 2.0).sqrt()),
            z.scale_real(((1.0 - q) / 2.0).sqrt()),
        ],
        &format!("dephasing(q={q})"),
    )
}

/// Complete dephasing onto the diagonal of M_d.
pub fn complete_dephasing(d: usize) -> Channel {
    Channel {
        dim_in: d,
        dim_out: d,
        kraus: (0..d).map(|i| CMatrix::unit(d, d, i, i)).collect(),
        label: format!("complete_dephasing(d={d})"),
    }
}

/// d-dimensional dephasing ρ ↦ qρ + (1−q)·diag(ρ).
pub fn qudit_dephasing(d: usize, q: f64) -> Result<Channel> {
    check_unit_interval(q, "dephasing parameter")?;
    let mut kraus = vec![CMatrix::identity(d).scale_real(q.sqrt())];
    for i in 0..d {
        kraus.push(CMatrix::unit(d, d, i, i).scale_real((1.0 - q).sqrt()));
    }
    make_labelled(kraus, &format!("dephasing(d={d},q={q})"))
}

/// Completely depolarizing map ρ ↦ tr(ρ) I/d_out.
pub fn completely_depolarizing(d_in: usize, d_out: usize) -> Channel {
    let s = 1.0 / (d_out as f64).sqrt();
    let mut kraus = Vec::with_capacity(d_in * d_out);
    for i in 0..d_out {
        for j in 0..d_in {
            kraus.push(CMatrix::unit(d_out, d_in, i, j).scale_real(s));
        }
    }
    Channel {
        dim_in: d_in,
        dim_out: d_out,
        kraus,
        label: format!("completely_depolarizing({d_in}->{d_out})"),
    }
}

/// id_m ⊗ tr_d on M_m ⊗ M_d.
pub fn partial_trace_channel(m: usize, d: usize) -> Result<Channel> {
    if m == 0 || d == 0 {
        return Err(Error::InvalidParameter("partial trace dims must be positive".into()));
    }
    let kraus = (0..d)
        .map(|k| kron(&CMatrix::identity(m), &CMatrix::unit(1, d, 0, k)))
        .collect();
    make_labelled(kraus, &format!("partial_trace(m={m},d={d})"))
}

pub(crate) fn check_unit_interval(q: f64, what: &str) -> Result<()> {
    if !(0.0..=1.0).contains(&q) || q.is_nan() {
        Err(Error::InvalidParameter(format!("{what} {q} outside [0, 1]")))
    } else {
        Ok(())
    }
}

/// Schatten norm of (id ⊗ Φ)(ρ).
pub fn extended_output_norm(phi: &Channel, rho: &CMatrix, dim_ref: usize, p: PNorm) -> Result<f64> {
    crate::matcore::schatten_norm(&phi.apply_extended(rho, dim_ref)?, p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matcore::{max_entangled_state, RandomSource, C64};

    #[test]
    fn identity_is_valid() {
        let ch = make_channel(vec![CMatrix::identity(3)]).unwrap();
        let mut rng = RandomSource::new(1);
        let rho = rng.density(3);
        assert!(ch.apply(&rho).max_abs_diff(&rho) < 1e-15);
    }

    #[test]
    fn reset_channel_is_constant() {
        // K₁ = |0⟩⟨0|, K₂ = |0⟩⟨1|
        let ch = make_channel(vec![CMatrix::unit(2, 2, 0, 0), CMatrix::unit(2, 2, 0, 1)]).unwrap();
        let mut rng = RandomSource::new(2);
        for _ in 0..5 {
            let out = ch.apply(&rng.density(2));
            assert!(out.max_abs_diff(&CMatrix::unit(2, 2, 0, 0)) < 1e-14);
        }
    }

    #[test]
    fn non_tp_rejected_and_tiny_kraus_dropped() {
        assert!(make_channel(vec![CMatrix::identity(2).scale_real(0.9)]).is_err());
        let ch = make_channel(vec![CMatrix::identity(2), CMatrix::zeros(2, 2)]).unwrap();
        assert_eq!(ch.num_kraus(), 1);
    }

    #[test]
    fn dephasing_from_expanded_kraus() {
        // q = 0.4: (1 − 0.3)ρ + 0.3 ZρZ
        let z = CMatrix::diag_real(&[1.0, -1.0]);
        let hand = make_channel(vec![
            CMatrix::identity(2).scale_real(0.7f64.sqrt()),
            z.scale_real(0.3f64.sqrt()),
        ])
        .unwrap();
        assert!(hand.choi_distance(&dephasing(0.4).unwrap()) < 1e-15);
    }

    #[test]
    fn extended_application() {
        let bell = max_entangled_state(2);
        let dep = completely_depolarizing(2, 2);
        let out = dep.apply_extended(&bell, 2).unwrap();
        assert!(out.max_abs_diff(&CMatrix::identity(4).scale_real(0.25)) < 1e-15);
        // dephasing q on one half: Bell-diagonal with coherence q/2
        let q = 0.35;
        let out = dephasing(q).unwrap().apply_extended(&bell, 2).unwrap();
        let mut expect = CMatrix::zeros(4, 4);
        expect[(0, 0)] = C64::new(0.5, 0.0);
        expect[(3, 3)] = C64::new(0.5, 0.0);
        expect[(0, 3)] = C64::new(q / 2.0, 0.0);
        expect[(3, 0)] = C64::new(q / 2.0, 0.0);
        assert!(out.max_abs_diff(&expect) < 1e-15);
        let id = identity_channel(2);
        assert!(id.apply_extended(&bell, 2).unwrap().max_abs_diff(&bell) < 1e-15);
        assert!(id.apply_extended(&bell, 3).is_err());
    }

    #[test]
    fn choi_examples() {
        let chi = identity_channel(2).choi();
        assert!(chi.max_abs_diff(&max_entangled_state(2).scale_real(2.0)) < 1e-15);
        let chi = completely_depolarizing(2, 3).choi();
        assert!(chi.max_abs_diff(&CMatrix::identity(6).scale_real(1.0 / 3.0)) < 1e-15);
    }

    #[test]
    fn choi_invariant_under_kraus_unitary_freedom() {
        let base = dephasing(0.3).unwrap();
        let (a, b) = (&base.kraus()[0], &base.kraus()[1]);
        let (c, s) = (0.6, 0.8);
        let mixed = make_channel(vec![
            &a.scale_real(c) + &b.scale(C64::new(0.0, s)),
            &a.scale(C64::new(0.0, s)) + &b.scale_real(c),
        ])
        .unwrap();
        assert!(mixed.choi_distance(&base) < 1e-12);
    }

    #[test]
    fn complementary_of_unitary_is_constant() {
        let mut rng = RandomSource::new(4);
        let u = rng.haar_unitary(3);
        let ch = make_channel(vec![u]).unwrap();
        let comp = ch.complementary();
        assert_eq!(comp.dim_out(), 1);
        let out = comp.apply(&rng.density(3));
        assert!((out[(0, 0)].re - 1.0).abs() < 1e-12);
    }

    #[test]
    fn complementary_matches_gram_formula() {
        let mut rng = RandomSource::new(5);
        let ch = dephasing(0.2).unwrap();
        let rho = rng.density(2);
        let out = ch.complementary().apply(&rho);
        for i in 0..2 {
            for j in 0..2 {
                let g = ch.kraus()[j].adjoint().matmul(&ch.kraus()[i]).matmul(&rho).trace();
                assert!((out[(i, j)] - g).norm() < 1e-14);
            }
        }
    }

    #[test]
    fn tensor_of_identities() {
        let t = tensor(&identity_channel(2), &identity_channel(2));
        assert!(t.choi_distance(&identity_channel(4)) < 1e-15);
    }

    #[test]
    fn direct_sum_keeps_blocks() {
        let s = direct_sum(&[identity_channel(2), completely_depolarizing(2, 2)]).unwrap();
        assert!(s.tp_error() < 1e-14);
        let mut rng = RandomSource::new(6);
        let mut rho = CMatrix::zeros(4, 4);
        rho.set_block(0, 0, &rng.density(2).scale_real(0.5));
        rho.set_block(2, 2, &rng.density(2).scale_real(0.5));
        let out = s.apply(&rho);
        assert!(out.block(0, 2, 2, 2).max_abs() < 1e-15);
        assert!(out.block(0, 0, 2, 2).max_abs_diff(&rho.block(0, 0, 2, 2)) < 1e-15);
        // off-diagonal blocks are annihilated
        let full = rng.density(4);
        let out = s.apply(&full);
        assert!(out.block(2, 0, 2, 2).max_abs() < 1e-15);
        assert!((out.trace().re - 1.0).abs() < 1e-12);
    }

    #[test]
    fn partial_trace_channel_output() {
        let ch = partial_trace_channel(2, 3).unwrap();
        let mut rng = RandomSource::new(7);
        let rho = rng.density(6);
        let direct = crate::matcore::partial_trace(&rho, &[2, 3], &[0]).unwrap();
        assert!(ch.apply(&rho).max_abs_diff(&direct) < 1e-14);
    }

    #[test]
    fn dephasing_endpoints() {
        assert!(dephasing(1.0).unwrap().choi_distance(&identity_channel(2)) < 1e-15);
        assert!(dephasing(0.0).unwrap().choi_distance(&complete_dephasing(2)) < 1e-15);
        assert!(dephasing(1.5).is_err());
    }

    #[test]
    fn adjoint_is_dual() {
        let mut rng = RandomSource::new(8);
        let ch = qudit_dephasing(3, 0.4).unwrap();
        let rho = rng.density(3);
        let x = rng.density(3);
        let lhs = ch.apply(&rho).trace_product(&x);
        let rhs = rho.trace_product(&ch.apply_adjoint(&x));
        assert!((lhs - rhs).norm() < 1e-14);
    }
}
