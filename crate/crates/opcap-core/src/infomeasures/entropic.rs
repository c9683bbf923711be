//! Entropic functionals of a channel at a given input, with their gradients.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::channels::Channel;
use crate::error::{Error, Result};
use crate::matcore::norms::{density_spectrum, entropy_of_normalized, log_psd};
use crate::matcore::{shannon_entropy, CMatrix, C64, ZERO};

/// Eigenvalue floor inside matrix logarithms.
pub const LOG_FLOOR: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum InfoKind {
    /// H(Φ(ρ)) − H(Φ^E(ρ))
    Coherent,
    /// H(ρ) − H(Φ^E(ρ))
    Reverse,
    /// H(ρ) + H(Φ(ρ)) − H(Φ^E(ρ))
    Mutual,
}

impl InfoKind {
    pub const ALL: [InfoKind; 3] = [InfoKind::Coherent, InfoKind::Reverse, InfoKind::Mutual];
}

impl fmt::Display for InfoKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            InfoKind::Coherent => "coherent",
            InfoKind::Reverse => "reverse",
            InfoKind::Mutual => "mutual",
        })
    }
}

impl FromStr for InfoKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "coherent" => Ok(InfoKind::Coherent),
            "reverse" => Ok(InfoKind::Reverse),
            "mutual" => Ok(InfoKind::Mutual),
            other => Err(Error::InvalidParameter(format!("unknown objective '{other}'"))),
        }
    }
}

/// The three entropies H(ρ), H(Φ(ρ)), H(Φ^E(ρ)).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Entropies {
    pub input: f64,
    pub output: f64,
    pub environment: f64,
}

impl Entropies {
    pub fn information(&self, kind: InfoKind) -> f64 {
        match kind {
            InfoKind::Coherent => self.output - self.environment,
            InfoKind::Reverse => self.input - self.environment,
            InfoKind::Mutual => self.input + self.output - self.environment,
        }
    }
}

/// Precomputed data for repeated evaluation of Φ, Φ^E and their adjoints.
///
/// Φ^E(ρ)_{ij} = tr(G_{ij} ρ) with G_{ij} = K_j†K_i.
#[derive(Debug, Clone)]
pub struct ChannelEvaluator {
    kraus: Vec<CMatrix>,
    kraus_adj: Vec<CMatrix>,
    gram: Vec<CMatrix>,
    dim_in: usize,
}

impl ChannelEvaluator {
    pub fn new(phi: &Channel) -> Self {
        let kraus = phi.kraus().to_vec();
        let kraus_adj: Vec<CMatrix> = kraus.iter().map(|k| k.adjoint()).collect();
        let r = kraus.len();
        let mut gram = Vec::with_capacity(r * r);
        for i in 0..r {
            for j in 0..r {
                gram.push(kraus_adj[j].matmul(&kraus[i]));
            }
        }
        Self {
            kraus,
            kraus_adj,
            gram,
            dim_in: phi.dim_in(),
        }
    }

    pub fn dim_in(&self) -> usize {
        self.dim_in
    }

    pub fn env_dim(&self) -> usize {
        self.kraus.len()
    }

    pub fn output(&self, rho: &CMatrix) -> CMatrix {
        let d = self.kraus[0].rows();
        let mut out = CMatrix::zeros(d, d);
        for (k, kd) in self.kraus.iter().zip(&self.kraus_adj) {
            out += &k.matmul(rho).matmul(kd);
        }
        out
    }

    pub fn output_adjoint(&self, x: &CMatrix) -> CMatrix {
        let mut out = CMatrix::zeros(self.dim_in, self.dim_in);
        for (k, kd) in self.kraus.iter().zip(&self.kraus_adj) {
            out += &kd.matmul(x).matmul(k);
        }
        out
    }

    pub fn environment(&self, rho: &CMatrix) -> CMatrix {
        let r = self.kraus.len();
        let mut out = CMatrix::zeros(r, r);
        for i in 0..r {
            for j in i..r {
                let v = self.gram[i * r + j].trace_product(rho);
                out[(i, j)] = v;
                if i != j {
                    out[(j, i)] = v.conj();
                }
            }
        }
        out
    }

    /// Φ^E†(L) = Σ_{ij} L_{ji} G_{ij}
    pub fn environment_adjoint(&self, l: &CMatrix) -> CMatrix {
        let r = self.kraus.len();
        let mut out = CMatrix::zeros(self.dim_in, self.dim_in);
        for i in 0..r {
            for j in 0..r {
                let c: C64 = l[(j, i)];
                if c != ZERO {
                    out.axpy(c, &self.gram[i * r + j]);
                }
            }
        }
        out
    }

    pub fn entropies(&self, rho: &CMatrix) -> Result<Entropies> {
        Ok(Entropies {
            input: entropy_of_normalized(rho)?,
            output: entropy_of_normalized(&self.output(rho))?,
            environment: entropy_of_normalized(&self.environment(rho))?,
        })
    }

    pub fn information(&self, rho: &CMatrix, kind: InfoKind) -> Result<f64> {
        let e = match kind {
            // skip the unused eigendecompositions
            InfoKind::Coherent => Entropies {
                input: 0.0,
                output: entropy_of_normalized(&self.output(rho))?,
                environment: entropy_of_normalized(&self.environment(rho))?,
            },
            InfoKind::Reverse => Entropies {
                input: entropy_of_normalized(rho)?,
                output: 0.0,
                environment: entropy_of_normalized(&self.environment(rho))?,
            },
            InfoKind::Mutual => self.entropies(rho)?,
        };
        Ok(e.information(kind))
    }

    /// Value and gradient Γ with dF = tr(Γ dρ) along trace-zero directions.
    pub fn information_gradient(&self, rho: &CMatrix, kind: InfoKind) -> Result<(f64, CMatrix)> {
        let d = self.dim_in;
        let mut value = 0.0;
        let mut grad = CMatrix::zeros(d, d);
        if kind != InfoKind::Coherent {
            let (h, l) = entropy_and_log(rho)?;
            value += h;
            grad = &grad - &l;
        }
        if kind != InfoKind::Reverse {
            let (h, l) = entropy_and_log(&self.output(rho))?;
            value += h;
            grad = &grad - &self.output_adjoint(&l);
        }
        let (h, l) = entropy_and_log(&self.environment(rho))?;
        value -= h;
        grad += &self.environment_adjoint(&l);
        Ok((value, grad.hermitian_part()))
    }
}

/// H(a/tr a) together with ln of a (floored).
fn entropy_and_log(a: &CMatrix) -> Result<(f64, CMatrix)> {
    let s = crate::matcore::eigh(&a.hermitian_part())?;
    let tr: f64 = s.eigenvalues.iter().map(|l| l.max(0.0)).sum();
    let h = shannon_entropy(&s.eigenvalues.iter().map(|l| l.max(0.0) / tr).collect::<Vec<_>>());
    Ok((h, s.map(|l| l.max(LOG_FLOOR).ln())))
}

/// Information quantity of Φ at input ρ (validated as a density).
pub fn channel_information(phi: &Channel, rho: &CMatrix, kind: InfoKind) -> Result<f64> {
    if rho.shape() != (phi.dim_in(), phi.dim_in()) {
        return Err(Error::DimensionMismatch(format!(
            "input is {:?}, channel expects {}",
            rho.shape(),
            phi.dim_in()
        )));
    }
    density_spectrum(rho)?;
    ChannelEvaluator::new(phi).information(rho, kind)
}

/// H(ρ), H(Φ(ρ)), H(Φ^E(ρ)) for a validated density.
pub fn channel_entropies(phi: &Channel, rho: &CMatrix) -> Result<Entropies> {
    density_spectrum(rho)?;
    ChannelEvaluator::new(phi).entropies(rho)
}

/// ln of a PSD matrix with the optimizer's floor.
pub fn floored_log(a: &CMatrix) -> Result<CMatrix> {
    log_psd(a, LOG_FLOOR)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channels::{completely_depolarizing, dephasing, identity_channel};
    use crate::matcore::{binary_entropy, max_entangled_state, trace_out_first, von_neumann_entropy, RandomSource};

    #[test]
    fn identity_coherent_is_ln_d() {
        let v = channel_information(&identity_channel(3), &CMatrix::identity(3).scale_real(1.0 / 3.0), InfoKind::Coherent)
            .unwrap();
        assert!((v - 3f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn depolarizing_coherent_is_minus_input_entropy() {
        let mut rng = RandomSource::new(1);
        let rho = rng.density(2);
        let phi = completely_depolarizing(2, 2);
        let v = channel_information(&phi, &rho, InfoKind::Coherent).unwrap();
        assert!((v + von_neumann_entropy(&rho).unwrap()).abs() < 1e-10);
    }

    #[test]
    fn dephasing_closed_form_at_maximally_mixed() {
        let q = 0.3;
        let v = channel_information(&dephasing(q).unwrap(), &CMatrix::identity(2).scale_real(0.5), InfoKind::Coherent)
            .unwrap();
        assert!((v - (2f64.ln() - binary_entropy((1.0 + q) / 2.0))).abs() < 1e-12);
    }

    #[test]
    fn identities_between_kinds() {
        let mut rng = RandomSource::new(2);
        let phi = dephasing(0.4).unwrap();
        let ev = ChannelEvaluator::new(&phi);
        for _ in 0..5 {
            let rho = rng.density(2);
            let e = ev.entropies(&rho).unwrap();
            let c = e.information(InfoKind::Coherent);
            let r = e.information(InfoKind::Reverse);
            let m = e.information(InfoKind::Mutual);
            assert!((c + e.input - m).abs() < 1e-10);
            assert!((r + e.output - m).abs() < 1e-10);
        }
    }

    #[test]
    fn environment_entropy_matches_purification() {
        let phi = dephasing(0.6).unwrap();
        let ev = ChannelEvaluator::new(&phi);
        let rho = max_entangled_state(2);
        let joint = phi.apply_extended(&rho, 2).unwrap();
        let he = entropy_of_normalized(&ev.environment(&trace_out_first(&rho, 2, 2))).unwrap();
        assert!((he - von_neumann_entropy(&joint).unwrap()).abs() < 1e-10);
    }

    #[test]
    fn adjoints_are_adjoint() {
        let mut rng = RandomSource::new(4);
        let phi = crate::channels::depolarizing(3, 0.3).unwrap();
        let ev = ChannelEvaluator::new(&phi);
        let rho = rng.density(3);
        let x = rng.density(3);
        let l = rng.density(ev.env_dim());
        let a = ev.output(&rho).trace_product(&x);
        let b = rho.trace_product(&ev.output_adjoint(&x));
        assert!((a - b).norm() < 1e-12);
        let a = ev.environment(&rho).trace_product(&l);
        let b = rho.trace_product(&ev.environment_adjoint(&l));
        assert!((a - b).norm() < 1e-12);
    }
}
