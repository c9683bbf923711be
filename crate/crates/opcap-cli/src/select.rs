//! Turning channel flags into a family, its spec and a symbol density.

use opcap_core::channels::{CrossedCase, Family, SymbolAlgebra, SymbolDensity, VNChannelSpec};
use opcap_core::groups::parse_group;
use opcap_core::matcore::RandomSource;

use crate::args::ChannelArgs;
use crate::error::CliError;

#[derive(Debug, Clone, PartialEq)]
pub enum DensityChoice {
    Uniform,
    Point,
    /// Seeded from the run seed when no explicit seed is given.
    Random(Option<u64>),
    Weights(Vec<f64>),
}

pub fn parse_density(text: &str) -> Result<DensityChoice, CliError> {
    let t = text.trim();
    let bad = |why: &str| CliError::Config(format!("invalid density '{text}': {why}"));
    match t {
        "uniform" | "one" => return Ok(DensityChoice::Uniform),
        "point" => return Ok(DensityChoice::Point),
        "random" => return Ok(DensityChoice::Random(None)),
        _ => {}
    }
    let seeded = t
        .strip_prefix("random:")
        .or_else(|| t.strip_prefix("random(").and_then(|r| r.strip_suffix(')')));
    if let Some(s) = seeded {
        return crate::args::parse_seed(s)
            .map(|seed| DensityChoice::Random(Some(seed)))
            .map_err(|e| bad(&e));
    }
    let weights = t
        .split(',')
        .map(|x| x.trim().parse::<f64>())
        .collect::<Result<Vec<_>, _>>()
        .map_err(|_| bad("expected uniform, point, random[:SEED] or comma-separated numbers"))?;
    if weights.iter().any(|w| !w.is_finite()) {
        return Err(bad("weights must be finite"));
    }
    Ok(DensityChoice::Weights(weights))
}

pub fn parse_family(args: &ChannelArgs) -> Result<Family, CliError> {
    let name = args
        .family
        .as_deref()
        .ok_or_else(|| CliError::Config("missing --family".into()))?;
    let group = || {
        let g = args
            .group
            .as_deref()
            .ok_or_else(|| CliError::Config(format!("family '{name}' needs --group")))?;
        parse_group(g).map_err(CliError::from)
    };
    let case = |c: &str| match c {
        "local" => Ok(CrossedCase::Local),
        "charge" => Ok(CrossedCase::Charge),
        other => Err(CliError::Config(format!("unknown crossed-product case '{other}'"))),
    };
    Ok(match name {
        "schur" => Family::Schur(group()?),
        "group-random-unitary" | "random-unitary" => Family::RandomUnitary(group()?),
        "pauli" => {
            let n = args.dim.ok_or_else(|| CliError::Config("pauli needs --dim".into()))?;
            if n < 2 {
                return Err(CliError::Config("pauli needs --dim >= 2".into()));
            }
            Family::Pauli(n)
        }
        "clifford" => {
            let k = args.k.ok_or_else(|| CliError::Config("clifford needs --k".into()))?;
            if k == 0 {
                return Err(CliError::Config("clifford needs --k >= 1".into()));
            }
            Family::Clifford(k)
        }
        "crossed" => {
            let c = args
                .case
                .as_deref()
                .ok_or_else(|| CliError::Config("crossed needs --case local|charge".into()))?;
            Family::Crossed(group()?, case(c)?)
        }
        "crossed-local" => Family::Crossed(group()?, CrossedCase::Local),
        "crossed-charge" => Family::Crossed(group()?, CrossedCase::Charge),
        "nonunital" => Family::NonUnital(group()?),
        other => return Err(CliError::Config(format!("unknown family '{other}'"))),
    })
}

/// Explicit weights on a commutative symbol algebra are rescaled to τ(f) = 1;
/// other algebras take the vector as given.
pub fn build_density(
    family: &Family,
    choice: &DensityChoice,
    rng: &mut RandomSource,
) -> Result<SymbolDensity, CliError> {
    Ok(match choice {
        DensityChoice::Uniform => family.uniform_density(),
        DensityChoice::Point => family.point_density(),
        DensityChoice::Random(None) => family.random_density(rng),
        DensityChoice::Random(Some(seed)) => family.random_density(&mut RandomSource::new(*seed)),
        DensityChoice::Weights(w) => {
            let w = match family.symbol_algebra() {
                SymbolAlgebra::Diagonal(n) if w.len() == n => {
                    let total: f64 = w.iter().sum();
                    if !(total > 0.0) {
                        return Err(CliError::Config("weights must have a positive sum".into()));
                    }
                    w.iter().map(|x| x * n as f64 / total).collect()
                }
                _ => w.clone(),
            };
            family.density_from_vector(&w)?
        }
    })
}

pub struct Selected {
    pub family: Family,
    pub spec: VNChannelSpec,
    pub f: SymbolDensity,
}

/// Spec and density use separate child streams of the run seed, so the
/// density does not depend on how much randomness the spec consumed.
pub fn select(args: &ChannelArgs, seed: u64, default_f: &str) -> Result<Selected, CliError> {
    let family = parse_family(args)?;
    let root = RandomSource::new(seed);
    let spec = family.spec(&mut root.child(0))?;
    let choice = parse_density(args.f.as_deref().unwrap_or(default_f))?;
    let f = build_density(&family, &choice, &mut root.child(1))?;
    Ok(Selected { family, spec, f })
}
