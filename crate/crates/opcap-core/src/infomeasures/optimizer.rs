//! Restarted gradient ascent on the unit sphere of a complex matrix space.
//!
//! Densities are parametrized as ρ = GG†/tr(GG†); pure bipartite states as
//! unit-norm coefficient matrices. Both are points on a Frobenius sphere.

use serde::{Deserialize, Serialize};

use super::entropic::{ChannelEvaluator, InfoKind};
use crate::channels::Channel;
use crate::error::{Error, Result};
use crate::matcore::norms::sqrt_psd;
use crate::matcore::{CMatrix, RandomSource, C64};

pub const DEFAULT_SEED: u64 = 0x0C0A_9CA9;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct OptimizerConfig {
    pub restarts: usize,
    pub max_iter: usize,
    pub grad_tol: f64,
    pub shrink: f64,
    pub seed: u64,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        Self {
            restarts: 20,
            max_iter: 500,
            grad_tol: 1e-8,
            shrink: 0.5,
            seed: DEFAULT_SEED,
        }
    }
}

impl OptimizerConfig {
    pub fn validate(&self) -> Result<()> {
        if self.restarts == 0 || self.max_iter == 0 {
            return Err(Error::InvalidParameter("restarts and max_iter must be positive".into()));
        }
        if !(self.grad_tol > 0.0) || !(self.shrink > 0.0 && self.shrink < 1.0) {
            return Err(Error::InvalidParameter("need grad_tol > 0 and shrink in (0, 1)".into()));
        }
        Ok(())
    }

    pub fn with_restarts(mut self, restarts: usize) -> Self {
        self.restarts = restarts;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }
}

/// A smooth function on the unit sphere {X : ‖X‖_F = 1}.
pub trait SphereObjective {
    fn value(&self, x: &CMatrix) -> Result<f64>;
    /// Value and Euclidean ascent direction ∂F/∂X̄.
    fn gradient(&self, x: &CMatrix) -> Result<(f64, CMatrix)>;
}

#[derive(Debug, Clone)]
pub struct AscentRun {
    pub x: CMatrix,
    pub value: f64,
    pub iterations: usize,
    pub converged: bool,
}

fn normalized(x: &CMatrix) -> CMatrix {
    let n = x.frobenius_norm();
    x.scale_real(1.0 / n)
}

/// Component of `g` tangent to the sphere at `x`.
fn tangent(x: &CMatrix, g: &CMatrix) -> CMatrix {
    let radial = x.hs_inner(g).re;
    let mut d = g.clone();
    d.axpy(C64::new(-radial, 0.0), x);
    d
}

/// Polak–Ribière conjugate-gradient ascent with Armijo backtracking; the
/// direction falls back to the projected gradient whenever it stops being
/// an ascent direction.
pub fn sphere_ascent(obj: &dyn SphereObjective, x0: &CMatrix, cfg: &OptimizerConfig) -> Result<AscentRun> {
    let mut x = normalized(x0);
    let (mut f, g) = obj.gradient(&x)?;
    let mut grad = tangent(&x, &g);
    let mut dir = grad.clone();
    let mut eta = 1.0;
    let mut flat = 0;
    for it in 0..cfg.max_iter {
        let gn2 = grad.hs_inner(&grad).re;
        if gn2.sqrt() < cfg.grad_tol {
            return Ok(AscentRun { x, value: f, iterations: it, converged: true });
        }
        let mut slope = grad.hs_inner(&dir).re;
        if slope <= 0.0 {
            dir = grad.clone();
            slope = gn2;
        }
        let mut accepted = None;
        while eta > 1e-18 {
            let mut trial = x.clone();
            trial.axpy(C64::new(eta, 0.0), &dir);
            let trial = normalized(&trial);
            let ft = obj.value(&trial)?;
            if ft.is_finite() && ft >= f + 1e-4 * eta * slope {
                accepted = Some((trial, ft));
                break;
            }
            eta *= cfg.shrink;
        }
        // keep shrinking while that still improves, so an accepted step that
        // overshoots the maximum along `dir` cannot bounce back and forth
        while let Some((_, fa)) = &accepted {
            let smaller = eta * cfg.shrink;
            let mut trial = x.clone();
            trial.axpy(C64::new(smaller, 0.0), &dir);
            let trial = normalized(&trial);
            let ft = obj.value(&trial)?;
            if !(ft.is_finite() && ft > *fa) {
                break;
            }
            eta = smaller;
            accepted = Some((trial, ft));
        }
        let Some((xn, fnew)) = accepted else {
            if dir.frobenius_distance(&grad) > 0.0 {
                // retry along the plain gradient before giving up
                dir = grad.clone();
                eta = 1.0;
                continue;
            }
            // no ascent at machine precision: stationary up to roundoff
            return Ok(AscentRun { x, value: f, iterations: it, converged: gn2.sqrt() < 1e-5 });
        };
        if fnew - f <= 1e-15 * (1.0 + f.abs()) {
            flat += 1;
        } else {
            flat = 0;
        }
        x = xn;
        let (fv, g) = obj.gradient(&x)?;
        f = fv;
        let new_grad = tangent(&x, &g);
        let beta = (new_grad.hs_inner(&(&new_grad - &grad)).re / gn2).max(0.0);
        let mut nd = tangent(&x, &dir);
        nd = nd.scale_real(beta);
        nd += &new_grad;
        dir = nd;
        grad = new_grad;
        eta = (eta * 2.0).min(1e6);
        if flat >= 5 {
            return Ok(AscentRun { x, value: f, iterations: it + 1, converged: true });
        }
    }
    Ok(AscentRun { x, value: f, iterations: cfg.max_iter, converged: false })
}

#[derive(Debug, Clone)]
pub struct MultiStart {
    pub best: AscentRun,
    pub best_index: usize,
    pub values: Vec<f64>,
    pub converged: Vec<bool>,
}

/// Runs every start, then `cfg.restarts` random starts drawn by `random`
/// from child seeds; keeps the best value, lowest index on ties.
pub fn multi_start(
    obj: &dyn SphereObjective,
    structured: &[CMatrix],
    random: &dyn Fn(&mut RandomSource) -> CMatrix,
    cfg: &OptimizerConfig,
) -> Result<MultiStart> {
    cfg.validate()?;
    let root = RandomSource::new(cfg.seed);
    let mut runs = Vec::with_capacity(structured.len() + cfg.restarts);
    for s in structured {
        runs.push(sphere_ascent(obj, s, cfg)?);
    }
    for i in 0..cfg.restarts {
        let mut rng = root.child(i as u64);
        let x0 = random(&mut rng);
        runs.push(sphere_ascent(obj, &x0, cfg)?);
    }
    let mut best_index = 0;
    for (i, r) in runs.iter().enumerate() {
        if r.value > runs[best_index].value {
            best_index = i;
        }
    }
    let values = runs.iter().map(|r| r.value).collect();
    let converged = runs.iter().map(|r| r.converged).collect();
    let best = runs.swap_remove(best_index);
    Ok(MultiStart { best, best_index, values, converged })
}

#[derive(Debug, Clone, Serialize)]
pub struct OptResult {
    pub kind: InfoKind,
    pub value: f64,
    #[serde(skip)]
    pub argmax: CMatrix,
    pub restart_values: Vec<f64>,
    pub best_index: usize,
    pub converged: bool,
}

impl OptResult {
    /// max − min over restarts.
    pub fn spread(&self) -> f64 {
        let lo = self.restart_values.iter().cloned().fold(f64::INFINITY, f64::min);
        self.value - lo
    }
}

/// F(GG†/tr(GG†)) for an information objective.
pub struct InfoObjective {
    pub eval: ChannelEvaluator,
    pub kind: InfoKind,
}

impl InfoObjective {
    pub fn new(phi: &Channel, kind: InfoKind) -> Self {
        Self { eval: ChannelEvaluator::new(phi), kind }
    }
}

/// ρ = GG† for a unit-norm G.
pub fn density_of(g: &CMatrix) -> CMatrix {
    g.matmul_adjoint(g).hermitian_part()
}

impl SphereObjective for InfoObjective {
    fn value(&self, g: &CMatrix) -> Result<f64> {
        self.eval.information(&density_of(g), self.kind)
    }

    fn gradient(&self, g: &CMatrix) -> Result<(f64, CMatrix)> {
        let rho = density_of(g);
        let (f, gamma) = self.eval.information_gradient(&rho, self.kind)?;
        Ok((f, gamma.matmul(g).scale_real(2.0)))
    }
}

/// A square-root factor G with GG† = ρ.
pub fn factor_of(rho: &CMatrix) -> Result<CMatrix> {
    sqrt_psd(rho)
}

/// Weight of the identity in the near-pure start; an exactly rank-one factor
/// would keep every iterate rank one.
pub const PURE_START_MIX: f64 = 1e-3;

/// Maximizes an information quantity over input densities. Starts are I/d,
/// (almost) e₁e₁†, any extra densities, then random full-rank factors.
pub fn maximize_information_with(
    phi: &Channel,
    kind: InfoKind,
    extra_starts: &[CMatrix],
    cfg: &OptimizerConfig,
) -> Result<OptResult> {
    let d = phi.dim_in();
    let obj = InfoObjective::new(phi, kind);
    let mut pure = CMatrix::identity(d).scale_real(PURE_START_MIX);
    pure[(0, 0)] = C64::new(1.0, 0.0);
    let mut starts = vec![CMatrix::identity(d), pure];
    for s in extra_starts {
        starts.push(factor_of(s)?);
    }
    let ms = multi_start(&obj, &starts, &|rng| rng.gaussian_matrix(d, d), cfg)?;
    let argmax = density_of(&ms.best.x);
    // re-evaluate so the value is exactly the objective at argmax
    let value = obj.eval.information(&argmax, kind)?;
    Ok(OptResult {
        kind,
        value,
        argmax,
        restart_values: ms.values,
        best_index: ms.best_index,
        converged: ms.best.converged,
    })
}

pub fn maximize_information(phi: &Channel, kind: InfoKind, cfg: &OptimizerConfig) -> Result<OptResult> {
    maximize_information_with(phi, kind, &[], cfg)
}
