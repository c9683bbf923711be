//! Monte Carlo probe of ‖(id⊗θ₁)(ρ)‖_p ≤ ‖(id⊗θ_f)(ρ)‖_p ≤ ‖f‖_p ‖(id⊗θ₁)(ρ)‖_p.

use serde::Serialize;

use crate::channels::{build_b_and_check, vn_channel, SymbolDensity, VNChannelSpec};
use crate::error::{Error, Result};
use crate::matcore::norms::{lp_norm, singular_values};
use crate::matcore::{PNorm, RandomSource};

#[derive(Debug, Clone, Serialize)]
pub struct ComparisonSlack {
    pub p: PNorm,
    pub f_norm: f64,
    pub min_lower_slack: f64,
    pub min_upper_slack: f64,
}

impl ComparisonSlack {
    pub fn worst(&self) -> f64 {
        self.min_lower_slack.min(self.min_upper_slack)
    }
}

/// Slacks over `trials` random densities on C^m ⊗ C^m, for every p at once.
pub fn comparison_probe_many(
    spec: &VNChannelSpec,
    f: &SymbolDensity,
    ps: &[PNorm],
    trials: usize,
    rng: &mut RandomSource,
) -> Result<Vec<ComparisonSlack>> {
    let report = build_b_and_check(spec);
    if !report.c1_to_c3() {
        return Err(Error::ConditionFailure(format!(
            "{}: conditions fail (bb* error {:.3e})",
            spec.label, report.bb_star_error
        )));
    }
    let m = spec.m();
    let theta_f = vn_channel(spec, f)?;
    let theta_1 = vn_channel(spec, &SymbolDensity::one(spec.symbol.clone()))?;
    let mut out: Vec<ComparisonSlack> = ps
        .iter()
        .map(|&p| {
            Ok(ComparisonSlack {
                p,
                f_norm: f.lp_norm(p)?,
                min_lower_slack: f64::INFINITY,
                min_upper_slack: f64::INFINITY,
            })
        })
        .collect::<Result<_>>()?;
    for _ in 0..trials {
        let rho = rng.density(m * m);
        let sf = singular_values(&theta_f.apply_extended(&rho, m)?)?;
        let s1 = singular_values(&theta_1.apply_extended(&rho, m)?)?;
        for slot in out.iter_mut() {
            let nf = lp_norm(&sf, slot.p);
            let n1 = lp_norm(&s1, slot.p);
            slot.min_lower_slack = slot.min_lower_slack.min(nf - n1);
            slot.min_upper_slack = slot.min_upper_slack.min(slot.f_norm * n1 - nf);
        }
    }
    Ok(out)
}

pub fn comparison_probe(
    spec: &VNChannelSpec,
    f: &SymbolDensity,
    p: PNorm,
    trials: usize,
    rng: &mut RandomSource,
) -> Result<ComparisonSlack> {
    Ok(comparison_probe_many(spec, f, &[p], trials, rng)?.remove(0))
}

/// Minimum of ‖f₁‖_p‖f₂‖_p‖(id⊗θ_{f₂})(ρ)‖_p − ‖(id⊗θ_{f₁})(ρ)‖_p.
pub fn comparison_probe_pair(
    spec: &VNChannelSpec,
    f1: &SymbolDensity,
    f2: &SymbolDensity,
    p: PNorm,
    trials: usize,
    rng: &mut RandomSource,
) -> Result<f64> {
    let m = spec.m();
    let t1 = vn_channel(spec, f1)?;
    let t2 = vn_channel(spec, f2)?;
    let scale = f1.lp_norm(p)? * f2.lp_norm(p)?;
    let mut worst = f64::INFINITY;
    for _ in 0..trials {
        let rho = rng.density(m * m);
        let n1 = lp_norm(&singular_values(&t1.apply_extended(&rho, m)?)?, p);
        let n2 = lp_norm(&singular_values(&t2.apply_extended(&rho, m)?)?, p);
        worst = worst.min(scale * n2 - n1);
    }
    Ok(worst)
}
