//! Property-check suites behind `opcap check`.
//!
//! Without `--family` each suite runs on a built-in list of small channels
//! with random densities drawn from the run seed; with `--family` it runs on
//! that one channel and the density given by `--f`.

use opcap_core::bounds::{fmt_sig, tau_flnf};
use opcap_core::channels::{
    build_b_and_check, make_channel, vn_channel, CrossedCase, Family, SymbolDensity,
};
use opcap_core::groups::{cyclic, symmetric};
use opcap_core::infomeasures::{
    channel_information, choi_vv_norm, comparison_probe_many, cqe_shift_check, cqe_shift_slacks,
    cqe_triple, maximize_information, EnsembleMember, InfoKind, OptimizerConfig,
};
use opcap_core::matcore::{CMatrix, PNorm, RandomSource};
use serde::Serialize;
use serde_json::json;

use crate::args::{CheckArgs, Suite};
use crate::commands::optimizer_config;
use crate::config::RunConfig;
use crate::error::CliError;
use crate::output::json_string;
use crate::select::{build_density, parse_density, parse_family};

const STRUCTURE_TOL: f64 = 1e-10;
const SLACK_TOL: f64 = 1e-9;
const CB_OPT_TOL: f64 = 1e-4;
const CB_MIXED_TOL: f64 = 1e-6;
const CHOI_TOL: f64 = 1e-6;
const CONE_TOL: f64 = 1e-9;

const DEFAULT_TRIALS: usize = 20;
const DEFAULT_COMPARISON_P: [&str; 4] = ["1.5", "2", "3", "inf"];
const DEFAULT_CHOI_P: [&str; 3] = ["1", "2", "inf"];

#[derive(Debug, Clone, Copy, Serialize, PartialEq, Eq)]
#[serde(rename_all = "snake_case")]
pub enum Metric {
    /// passes when value ≤ tolerance
    MaxError,
    /// passes when value ≥ −tolerance
    MinSlack,
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckOutcome {
    pub suite: &'static str,
    pub target: String,
    pub quantity: &'static str,
    pub metric: Metric,
    pub value: f64,
    pub tolerance: f64,
    pub passed: bool,
}

impl CheckOutcome {
    fn new(suite: &'static str, target: String, metric: Metric, value: f64, tolerance: f64) -> Self {
        let passed = match metric {
            Metric::MaxError => value <= tolerance,
            Metric::MinSlack => value >= -tolerance,
        };
        let quantity = match metric {
            Metric::MaxError => "max error",
            Metric::MinSlack => "min slack",
        };
        Self { suite, target, quantity, metric, value, tolerance, passed }
    }

    fn line(&self) -> String {
        let cmp = match self.metric {
            Metric::MaxError => "<= ",
            Metric::MinSlack => ">= -",
        };
        format!(
            "{} {:<11} {:<26} {} {} ({cmp}{})",
            if self.passed { "PASS" } else { "FAIL" },
            self.suite,
            self.target,
            self.quantity,
            fmt_sig(self.value),
            fmt_sig(self.tolerance),
        )
    }
}

struct Target {
    family: Family,
    f: SymbolDensity,
    label: String,
}

struct Context {
    targets_given: Option<Target>,
    seed: u64,
    trials: usize,
    p: Vec<PNorm>,
    cfg: OptimizerConfig,
}

fn parse_p(values: &[String]) -> Result<Vec<PNorm>, CliError> {
    values
        .iter()
        .map(|s| {
            let t = s.trim();
            if t.eq_ignore_ascii_case("inf") || t == "∞" {
                return Ok(PNorm::Inf);
            }
            let x: f64 = t.parse().map_err(|_| CliError::Config(format!("invalid p '{s}'")))?;
            PNorm::new(x).map_err(CliError::from)
        })
        .collect()
}

fn default_families(suite: Suite) -> Vec<Family> {
    let s3 = || symmetric(3).expect("S3");
    let z3 = || cyclic(3).expect("Z3");
    match suite {
        Suite::Cbentropy => vec![Family::RandomUnitary(s3()), Family::Pauli(3), Family::Clifford(2)],
        Suite::ChoiNorm => vec![
            Family::Pauli(2),
            Family::Pauli(3),
            Family::Clifford(1),
            Family::RandomUnitary(z3()),
        ],
        _ => vec![
            Family::Schur(s3()),
            Family::RandomUnitary(s3()),
            Family::Pauli(3),
            Family::Clifford(2),
            Family::Crossed(z3(), CrossedCase::Local),
            Family::Crossed(z3(), CrossedCase::Charge),
            Family::NonUnital(s3()),
        ],
    }
}

impl Context {
    /// Channels for one suite; each default family gets its own child stream.
    fn targets(&self, suite: Suite, index: u64) -> Vec<Target> {
        if let Some(t) = &self.targets_given {
            return vec![Target { family: t.family.clone(), f: t.f.clone(), label: t.label.clone() }];
        }
        let root = RandomSource::new(self.seed).child(100 + index);
        default_families(suite)
            .into_iter()
            .enumerate()
            .map(|(i, family)| {
                let f = family.random_density(&mut root.child(i as u64));
                let label = family.name();
                Target { family, f, label }
            })
            .collect()
    }

    fn rng(&self, suite_index: u64, target: usize) -> RandomSource {
        RandomSource::new(self.seed).child(200 + suite_index).child(target as u64)
    }
}

fn mixed(d: usize) -> CMatrix {
    CMatrix::identity(d).scale_real(1.0 / d as f64)
}

type SuiteFn = fn(&Context, &Target, &mut RandomSource) -> Result<CheckOutcome, CliError>;

fn kraus(_: &Context, t: &Target, rng: &mut RandomSource) -> Result<CheckOutcome, CliError> {
    let spec = t.family.spec(rng)?;
    let phi = vn_channel(&spec, &t.f)?;
    let min_eig = opcap_core::matcore::eigvalsh(&phi.choi())?.last().copied().unwrap_or(0.0);
    let mut err = phi.tp_error().max(-min_eig);
    if let Some(direct) = t.family.direct_channel(&t.f)? {
        err = err.max(phi.choi_distance(&direct));
    }
    Ok(CheckOutcome::new("kraus", t.label.clone(), Metric::MaxError, err, STRUCTURE_TOL))
}

fn conditions(_: &Context, t: &Target, rng: &mut RandomSource) -> Result<CheckOutcome, CliError> {
    let r = build_b_and_check(&t.family.spec(rng)?);
    let err = r
        .c1_error
        .max(r.unitarity_error)
        .max(r.bb_star_error)
        .max(r.b_star_b_deviation)
        .max((r.mu - r.mu_expected).abs());
    let mut out = CheckOutcome::new("conditions", t.label.clone(), Metric::MaxError, err, STRUCTURE_TOL);
    out.passed &= r.all_hold();
    Ok(out)
}

fn comparison(ctx: &Context, t: &Target, rng: &mut RandomSource) -> Result<CheckOutcome, CliError> {
    let spec = t.family.spec(rng)?;
    let slacks = comparison_probe_many(&spec, &t.f, &ctx.p, ctx.trials, rng)?;
    let worst = slacks.iter().map(|s| s.worst()).fold(f64::INFINITY, f64::min);
    Ok(CheckOutcome::new("comparison", t.label.clone(), Metric::MinSlack, worst, SLACK_TOL))
}

fn lemma_mu(_: &Context, t: &Target, rng: &mut RandomSource) -> Result<CheckOutcome, CliError> {
    let spec = t.family.spec(rng)?;
    let theta_f = vn_channel(&spec, &t.f)?;
    let theta_1 = vn_channel(&spec, &SymbolDensity::one(spec.symbol.clone()))?;
    let em = make_channel(spec.expectation_kraus.clone())?;
    let err = theta_1
        .choi_distance(&em)
        .max(theta_1.compose_after(&theta_f).choi_distance(&theta_1));
    Ok(CheckOutcome::new("lemma-mu", t.label.clone(), Metric::MaxError, err, STRUCTURE_TOL))
}

/// Optimizer error against ln μ + τ(f ln f); the maximally mixed input must
/// also be within the tighter tolerance.
fn cbentropy(ctx: &Context, t: &Target, rng: &mut RandomSource) -> Result<CheckOutcome, CliError> {
    let spec = t.family.spec(rng)?;
    let mu = build_b_and_check(&spec).mu;
    let phi = vn_channel(&spec, &t.f)?;
    let formula = mu.ln() + tau_flnf(&t.f)?;
    let r = maximize_information(&phi, InfoKind::Reverse, &ctx.cfg)?;
    let at = channel_information(&phi, &mixed(spec.m()), InfoKind::Reverse)?;
    let mut out = CheckOutcome::new(
        "cbentropy",
        t.label.clone(),
        Metric::MaxError,
        (r.value - formula).abs(),
        CB_OPT_TOL,
    );
    out.passed &= (at - formula).abs() <= CB_MIXED_TOL;
    Ok(out)
}

fn choi_norm(ctx: &Context, t: &Target, rng: &mut RandomSource) -> Result<CheckOutcome, CliError> {
    let spec = t.family.spec(rng)?;
    let mu = build_b_and_check(&spec).mu;
    let chi = vn_channel(&spec, &t.f)?.choi();
    let mut err: f64 = 0.0;
    for &p in &ctx.p {
        let v = choi_vv_norm(&chi, spec.m(), p, &ctx.cfg)?;
        let expect = mu.powf(1.0 - p.reciprocal()) * t.f.lp_norm(p)?;
        err = err.max((v - expect).abs());
    }
    Ok(CheckOutcome::new("choi-norm", t.label.clone(), Metric::MaxError, err, CHOI_TOL))
}

/// Largest cone quantity over random ensembles of 1 to 4 pure states.
fn cqe(ctx: &Context, t: &Target, rng: &mut RandomSource) -> Result<CheckOutcome, CliError> {
    let spec = t.family.spec(rng)?;
    let m = spec.m();
    let theta_f = vn_channel(&spec, &t.f)?;
    let theta_1 = vn_channel(&spec, &SymbolDensity::one(spec.symbol.clone()))?;
    let tau = tau_flnf(&t.f)?;
    let mut worst = f64::NEG_INFINITY;
    let mut all = true;
    for _ in 0..ctx.trials {
        let k = 1 + rng.below(4);
        let ens: Vec<EnsembleMember> =
            rng.prob_vector(k).into_iter().map(|p| (p, rng.pure_bipartite(m, m))).collect();
        let tf = cqe_triple(&theta_f, &ens)?;
        let t1 = cqe_triple(&theta_1, &ens)?;
        worst = cqe_shift_slacks(&tf, &t1, tau).into_iter().fold(worst, f64::max);
        all &= cqe_shift_check(&tf, &t1, tau);
    }
    let mut out = CheckOutcome::new("cqe", t.label.clone(), Metric::MaxError, worst, CONE_TOL);
    out.quantity = "max cone value";
    out.passed &= all;
    Ok(out)
}

fn suite_table() -> [(Suite, SuiteFn); 7] {
    [
        (Suite::Kraus, kraus),
        (Suite::Conditions, conditions),
        (Suite::LemmaMu, lemma_mu),
        (Suite::Comparison, comparison),
        (Suite::Cbentropy, cbentropy),
        (Suite::ChoiNorm, choi_norm),
        (Suite::Cqe, cqe),
    ]
}

/// Runs the requested suites and returns the report and whether all passed.
pub fn check(run: &RunConfig, a: &CheckArgs) -> Result<(String, bool), CliError> {
    let channel = run.channel(&a.channel);
    let targets_given = match channel.family {
        Some(_) => {
            let family = parse_family(&channel)?;
            let choice = parse_density(channel.f.as_deref().unwrap_or("random"))?;
            let mut rng = RandomSource::new(run.seed).child(1);
            let f = build_density(&family, &choice, &mut rng)?;
            let label = family.name();
            Some(Target { family, f, label })
        }
        None => None,
    };
    let trials = a.trials.or(run.file.trials).unwrap_or(DEFAULT_TRIALS);
    if trials == 0 {
        return Err(CliError::Config("--trials must be positive".into()));
    }
    let p_given = run.p_values(&a.p);
    let cfg = optimizer_config(run, a.restarts)?;

    let mut outcomes = Vec::new();
    for (index, (suite, f)) in suite_table().into_iter().enumerate() {
        if a.suite != Suite::All && a.suite != suite {
            continue;
        }
        let defaults: &[&str] = if suite == Suite::ChoiNorm { &DEFAULT_CHOI_P } else { &DEFAULT_COMPARISON_P };
        let p = if p_given.is_empty() {
            parse_p(&defaults.iter().map(|s| s.to_string()).collect::<Vec<_>>())?
        } else {
            parse_p(&p_given)?
        };
        let ctx = Context {
            targets_given: targets_given.as_ref().map(|t| Target {
                family: t.family.clone(),
                f: t.f.clone(),
                label: t.label.clone(),
            }),
            seed: run.seed,
            trials,
            p,
            cfg: cfg.clone(),
        };
        for (i, target) in ctx.targets(suite, index as u64).iter().enumerate() {
            let mut rng = ctx.rng(index as u64, i);
            outcomes.push(f(&ctx, target, &mut rng)?);
        }
    }

    let passed = outcomes.iter().filter(|o| o.passed).count();
    let all = passed == outcomes.len();
    let text = if run.json {
        json_string(json!({
            "seed": run.seed,
            "checks": outcomes,
            "passed": passed,
            "total": outcomes.len(),
            "all_pass": all,
        }))
    } else {
        let mut s: String = outcomes.iter().map(|o| o.line() + "\n").collect();
        s.push_str(&format!("{passed} of {} checks passed\n", outcomes.len()));
        s
    };
    Ok((text, all))
}
