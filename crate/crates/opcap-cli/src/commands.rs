//! Subcommand implementations other than `check`.

use opcap_core::bounds::{
    bounds_report, fmt_sig, linspace, sweep_dephasing, sweep_family, sweep_figure1, sweep_figure2,
    BoundsReport, SweepTable,
};
use opcap_core::channels::vn_channel;
use opcap_core::groups::{irrep_dimensions, parse_group};
use opcap_core::infomeasures::{maximize_information, InfoKind, OptimizerConfig};
use opcap_core::matcore::RandomSource;
use serde_json::{json, Value};

use crate::args::{
    BoundsArgs, Figure1Args, Figure2Args, FamilySweepArgs, IrrepsArgs, Objective, OptimizeArgs,
    StepsArg, SweepCommand,
};
use crate::config::RunConfig;
use crate::error::CliError;
use crate::output::{json_string, opt, KeyValues};
use crate::select::select;

pub const DEFAULT_STEPS: usize = 101;
pub const DEFAULT_FAMILY_STEPS: usize = 21;

pub fn optimizer_config(run: &RunConfig, restarts: Option<usize>) -> Result<OptimizerConfig, CliError> {
    let mut cfg = OptimizerConfig::default().with_seed(run.seed);
    if let Some(r) = restarts.or(run.file.restarts) {
        cfg = cfg.with_restarts(r);
    }
    cfg.validate()?;
    Ok(cfg)
}

fn bounds_values(r: &BoundsReport, k: f64) -> Vec<(&'static str, &'static str, Option<f64>)> {
    let s = |x: Option<f64>| x.map(|v| v * k);
    vec![
        ("ln_d_m", "ln d_M", Some(r.ln_d_m * k)),
        ("tau_flnf", "τ(f ln f)", Some(r.tau_flnf * k)),
        ("omega_entropy", "H(ω/m)", Some(r.omega_entropy * k)),
        ("scb", "−S_cb formula", s(r.scb_formula)),
        ("hashing_lower", "hashing lower", s(r.hashing_lower)),
        ("q1_lower", "Q⁽¹⁾ lower", Some(r.q1_lower * k)),
        ("q_upper", "Q upper", s(r.q_upper)),
        ("qea_upper", "Q_EA upper", s(r.qea_upper)),
        ("q_upper_min", "Q upper (min)", s(r.q_upper_min)),
        ("cea_lower", "C_EA lower", s(r.cea_lower)),
        ("cea_upper", "C_EA upper", s(r.cea_upper)),
    ]
}

pub fn bounds(run: &RunConfig, a: &BoundsArgs) -> Result<String, CliError> {
    let sel = select(&run.channel(&a.channel), run.seed, "random")?;
    let numerics = a.numerics || run.file.numerics.unwrap_or(false);
    let cfg = optimizer_config(run, a.restarts)?;
    let r = bounds_report(&sel.spec, &sel.f, numerics, &cfg)?;
    let k = run.units.factor();
    let values = bounds_values(&r, k);
    let c = &r.conditions;

    if run.json {
        let vals: serde_json::Map<String, Value> =
            values.iter().map(|(key, _, v)| (key.to_string(), json!(v))).collect();
        let num = r.numerics.as_ref().map(|n| {
            json!({
                "coherent": n.coherent * k,
                "reverse": n.reverse * k,
                "mutual": n.mutual * k,
                "reverse_minus_scb": n.scb_delta * k,
                "coherent_spread": n.coherent_spread * k,
                "converged": n.converged,
            })
        });
        return Ok(json_string(json!({
            "family": r.family,
            "units": run.units.name(),
            "seed": run.seed,
            "m": r.m,
            "dim_n": r.dim_n,
            "mu": r.mu,
            "d_m": r.d_m,
            "bounds": vals,
            "conditions": c,
            "numerics": num,
            "notes": r.notes,
        })));
    }

    let mut kv = KeyValues::default();
    kv.push("family", r.family.clone());
    kv.push("units", run.units.name());
    kv.push("m", r.m.to_string());
    kv.push("dim L₂(N)", r.dim_n.to_string());
    kv.push("μ", fmt_sig(r.mu));
    kv.push("d_M", r.d_m.to_string());
    for (_, label, v) in &values {
        kv.push(*label, opt(*v));
    }
    kv.push("C1–C3", if c.c1_to_c3() { "hold" } else { "fail" });
    kv.push("C3′", if c.c3prime_holds { "holds" } else { "fails" });
    kv.push("‖BB*−I‖", fmt_sig(c.bb_star_error));
    kv.push("‖B*B−μI‖", fmt_sig(c.b_star_b_deviation));
    if let Some(n) = &r.numerics {
        kv.push("max coherent", fmt_sig(n.coherent * k));
        kv.push("max reverse", fmt_sig(n.reverse * k));
        kv.push("max mutual", fmt_sig(n.mutual * k));
        kv.push("reverse − formula", fmt_sig(n.scb_delta * k));
        kv.push("restart spread", fmt_sig(n.coherent_spread * k));
        kv.push("converged", if n.converged { "yes" } else { "no" });
    }
    let mut out = kv.render();
    for note in &r.notes {
        out.push_str(&format!("note: {note}\n"));
    }
    Ok(out)
}

fn steps(flag: Option<usize>, run: &RunConfig, default: usize) -> Result<usize, CliError> {
    let s = flag.or(run.file.steps).unwrap_or(default);
    if s == 0 {
        return Err(CliError::Config("--steps must be positive".into()));
    }
    Ok(s)
}

fn render_table(run: &RunConfig, t: SweepTable, grid_is_entropy: bool) -> String {
    let k = run.units.factor();
    let mut t = t.scaled(k);
    if grid_is_entropy {
        t.grid.iter_mut().for_each(|x| *x *= k);
    }
    if run.json {
        json_string(json!({
            "parameter": t.parameter,
            "columns": t.columns,
            "units": run.units.name(),
            "grid": t.grid,
            "rows": t.rows,
        }))
    } else {
        t.to_csv()
    }
}

pub fn sweep(run: &RunConfig, cmd: &SweepCommand) -> Result<String, CliError> {
    match cmd {
        SweepCommand::Figure1(Figure1Args { m, ln_dm, steps: s }) => {
            let m = m.or(run.file.m).unwrap_or(4);
            let ln_dm = ln_dm.or(run.file.ln_dm).unwrap_or(0.0);
            let grid = linspace(0.0, (m.max(1) as f64).ln(), steps(*s, run, DEFAULT_STEPS)?);
            Ok(render_table(run, sweep_figure1(ln_dm, m, &grid)?, true))
        }
        SweepCommand::Figure2(Figure2Args { d, steps: s }) => {
            let d = d.or(run.file.d).unwrap_or(2);
            let q0 = 1.0 / (d as f64 + 1.0);
            let grid = linspace(q0, 1.0, steps(*s, run, DEFAULT_STEPS)?);
            Ok(render_table(run, sweep_figure2(d, &grid)?, false))
        }
        SweepCommand::Dephasing(StepsArg { steps: s }) => {
            let grid = linspace(0.0, 1.0, steps(*s, run, DEFAULT_STEPS)?);
            Ok(render_table(run, sweep_dephasing(&grid)?, false))
        }
        SweepCommand::Family(FamilySweepArgs { channel, steps: s }) => {
            let sel = select(&run.channel(channel), run.seed, "random")?;
            let grid = linspace(0.0, 1.0, steps(*s, run, DEFAULT_FAMILY_STEPS)?);
            Ok(render_table(run, sweep_family(&sel.spec, &sel.f, &grid)?, false))
        }
    }
}

pub fn irreps(run: &RunConfig, a: &IrrepsArgs) -> Result<String, CliError> {
    let name = a
        .group
        .clone()
        .or_else(|| run.file.group.clone())
        .ok_or_else(|| CliError::Config("missing --group".into()))?;
    let g = parse_group(&name)?;
    let p = irrep_dimensions(&g, &mut RandomSource::new(run.seed))?;
    if run.json {
        return Ok(json_string(json!({
            "group": g.name(),
            "order": g.order(),
            "abelian": g.is_abelian(),
            "dims": p.dims,
            "d_max": p.d_max,
            "burnside_sum": p.burnside_sum(),
        })));
    }
    let dims: Vec<String> = p.dims.iter().map(|d| d.to_string()).collect();
    let mut kv = KeyValues::default();
    kv.push("group", g.name());
    kv.push("order", g.order().to_string());
    kv.push("abelian", if g.is_abelian() { "yes" } else { "no" });
    kv.push("irrep dims", dims.join(" "));
    kv.push("d_max", p.d_max.to_string());
    kv.push("Σ d²", p.burnside_sum().to_string());
    Ok(kv.render())
}

pub fn optimize(run: &RunConfig, a: &OptimizeArgs) -> Result<String, CliError> {
    let sel = select(&run.channel(&a.channel), run.seed, "random")?;
    let kind = match a.objective {
        Some(o) => o,
        None => match run.file.objective.as_deref() {
            None | Some("coherent") => Objective::Coherent,
            Some("reverse") => Objective::Reverse,
            Some("mutual") => Objective::Mutual,
            Some(other) => return Err(CliError::Config(format!("unknown objective '{other}'"))),
        },
    };
    let kind = match kind {
        Objective::Coherent => InfoKind::Coherent,
        Objective::Reverse => InfoKind::Reverse,
        Objective::Mutual => InfoKind::Mutual,
    };
    let cfg = optimizer_config(run, a.restarts)?;
    let phi = vn_channel(&sel.spec, &sel.f)?;
    let r = maximize_information(&phi, kind, &cfg)?;
    let k = run.units.factor();
    let kind_name = format!("{kind:?}").to_lowercase();

    if run.json {
        let restarts: Vec<f64> = r.restart_values.iter().map(|v| v * k).collect();
        return Ok(json_string(json!({
            "family": sel.family.name(),
            "objective": kind_name,
            "units": run.units.name(),
            "seed": run.seed,
            "value": r.value * k,
            "best_restart": r.best_index,
            "spread": r.spread() * k,
            "converged": r.converged,
            "restart_values": restarts,
        })));
    }
    let mut kv = KeyValues::default();
    kv.push("family", sel.family.name());
    kv.push("objective", kind_name);
    kv.push("units", run.units.name());
    kv.push("value", fmt_sig(r.value * k));
    kv.push("best restart", r.best_index.to_string());
    kv.push("spread", fmt_sig(r.spread() * k));
    kv.push("converged", if r.converged { "yes" } else { "no" });
    let mut out = kv.render();
    out.push_str("\nrestart  value\n");
    for (i, v) in r.restart_values.iter().enumerate() {
        let mark = if i == r.best_index { "  *" } else { "" };
        out.push_str(&format!("{i:>7}  {}{mark}\n", fmt_sig(v * k)));
    }
    Ok(out)
}
