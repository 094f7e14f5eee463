use anyhow::{bail, Context, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};
use zerosum_core::property_d::verify_d0_with;
use zerosum_core::{
    d0_compose, Budget, D0Outcome, D0Verdict, DirectOracle, GroupElement, GroupSequence, GroupSpec,
    SearchCheckpoint,
};

use super::{with_run_fields, Ctx};
use crate::args::{ComposeArgs, VerifyD0Args};
use crate::report::{Report, Status};

fn verdict_json(v: &D0Verdict, n: u64, r: usize, checkpoint: Option<&str>) -> Value {
    let (outcome, g, t) = match &v.outcome {
        D0Outcome::Holds => ("holds", None, None),
        D0Outcome::Counterexample { g, t } => (
            "counterexample",
            Some(g.coords().to_vec()),
            Some(t.to_text()),
        ),
        D0Outcome::Inconclusive => ("inconclusive", None, None),
    };
    json!({
        "group": v.group.factors(),
        "group_name": v.group.to_string(),
        "n": n,
        "r": r,
        "c": v.c,
        "outcome": outcome,
        "g": g,
        "t": t,
        "nodes_explored": v.nodes_explored,
        "orbits_tested": v.orbits_tested,
        "checkpoint": checkpoint,
    })
}

/// Runs the search in slices of `--checkpoint-every` nodes, saving the
/// state after each slice, until it finishes or the global budget runs out.
fn run_sliced(ctx: &Ctx, args: &VerifyD0Args, group: &GroupSpec) -> Result<D0Verdict> {
    let mut ckpt = match &args.resume {
        Some(path) => Some(SearchCheckpoint::load(path)?),
        None => None,
    };
    let start_nodes = ckpt.as_ref().map_or(0, |c| c.total_stats().nodes_explored);
    let slice = if args.checkpoint.is_some() {
        args.checkpoint_every.max(1)
    } else {
        u64::MAX
    };
    loop {
        let done = ckpt.as_ref().map_or(0, |c| c.total_stats().nodes_explored) - start_nodes;
        let left = ctx.global.budget_nodes.map(|b| b.saturating_sub(done));
        let step = left.map_or(slice, |l| l.min(slice));
        let mut budget = if step == u64::MAX {
            Budget::unlimited()
        } else {
            Budget::nodes(step)
        };
        if let Some(d) = ctx.remaining_time() {
            budget = budget.with_duration(d);
        }
        let v = verify_d0_with(group, args.c, &budget, ckpt.take(), args.shard_depth)?;
        let Some(next) = &v.checkpoint else {
            return Ok(v);
        };
        if let Some(path) = &args.checkpoint {
            next.save(path)
                .with_context(|| format!("writing checkpoint {}", path.display()))?;
        }
        let spent = next.total_stats().nodes_explored - start_nodes;
        let out_of_nodes = ctx.global.budget_nodes.is_some_and(|b| spent >= b);
        let out_of_time = ctx.remaining_time().is_some_and(|d| d.is_zero());
        if out_of_nodes || out_of_time {
            return Ok(v);
        }
        ckpt = v.checkpoint;
    }
}

pub fn verify_d0(ctx: &Ctx, args: &VerifyD0Args) -> Result<Report> {
    let (n, r) = args.group;
    let group = GroupSpec::homocyclic(n, r)?;
    let params = json!({"group": group.factors(), "c": args.c});
    let ckpt_name = args.checkpoint.as_ref().map(|p| p.display().to_string());
    let stored = ctx.stored("verify-d0", params, || {
        let v = run_sliced(ctx, args, &group)?;
        let written = ckpt_name.as_deref().filter(|_| v.checkpoint.is_some());
        let finished = !matches!(v.outcome, D0Outcome::Inconclusive);
        Ok((verdict_json(&v, n, r, written), finished))
    })?;
    let res = &stored.result;
    let what = format!(
        "{} with respect to c = {}",
        res["group_name"].as_str().unwrap_or("?"),
        args.c
    );
    let (status, mut text) = match res["outcome"].as_str() {
        Some("holds") => (Status::Ok, format!("Property D0 holds for {what}\n")),
        Some("counterexample") => (
            Status::Negative,
            format!(
                "Property D0 fails for {what}\n  g = ({})\n  T:\n{}",
                res["g"]
                    .as_array()
                    .map(|g| g.iter().map(Value::to_string).collect::<Vec<_>>().join(","))
                    .unwrap_or_default(),
                crate::report::indent(res["t"].as_str().unwrap_or_default(), "    ")
            ),
        ),
        _ => {
            let hint = match res["checkpoint"].as_str() {
                Some(p) => format!("resume with --resume {p}"),
                None => "pass --checkpoint to keep the search state".into(),
            };
            (
                Status::Limited,
                format!("undecided for {what}: budget exhausted; {hint}\n"),
            )
        }
    };
    text.push_str(&format!(
        "  {} nodes, {} orbits{}\n",
        res["nodes_explored"],
        res["orbits_tested"],
        if stored.cached {
            ", from the results store"
        } else {
            ""
        }
    ));
    let body = with_run_fields(res, stored.cached, ctx.started.elapsed());
    Ok(Report::new("verify-d0", status, body, text))
}

pub fn compose(args: &ComposeArgs) -> Result<Report> {
    let mn = args.m.checked_mul(args.n).context("m·n overflows")?;
    let group = GroupSpec::homocyclic(mn, args.r)?;
    let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
    let mut random_element = |g: &GroupSpec| -> Result<GroupElement> {
        let coords: Vec<u64> = g.factors().iter().map(|&k| rng.gen_range(0..k)).collect();
        Ok(g.element(&coords)?)
    };
    let t = match &args.terms {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .with_context(|| format!("reading {}", path.display()))?;
            let t = GroupSequence::parse_text(&text)
                .with_context(|| format!("parsing {}", path.display()))?;
            if t.group() != &group {
                bail!("T is over {}, expected {group}", t.group());
            }
            t
        }
        None => {
            let terms = (0..args.c)
                .map(|_| random_element(&group))
                .collect::<Result<Vec<_>>>()?;
            GroupSequence::from_elements(&group, &terms)?
        }
    };
    let g0 = match &args.g0 {
        Some(coords) => group.element(coords)?,
        None => random_element(&group)?,
    };
    let w = d0_compose(args.m, args.n, &g0, &t, &DirectOracle, &DirectOracle)?;
    let body = json!({
        "m": args.m,
        "n": args.n,
        "r": args.r,
        "c": t.len(),
        "group": group.factors(),
        "g0": g0.coords(),
        "t": t.to_text(),
        "witness": w.to_text(),
        "witness_length": w.len(),
        "zero_sum": w.is_zero_sum(),
    });
    let text = format!(
        "g_0 = {g0}\nT:\n{}zero-sum subsequence of length {} in g_0·T^{}:\n{}",
        crate::report::indent(&t.body_text(), "  "),
        w.len(),
        mn - 1,
        crate::report::indent(&w.body_text(), "  ")
    );
    Ok(Report::new("compose-d0", Status::Ok, body, text))
}
