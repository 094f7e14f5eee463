use std::fmt::Write;

use anyhow::{Context, Result};
use serde_json::{json, Value};
use zerosum_core::search::Invariant;
use zerosum_core::{
    davenport, egz_constant, find_zero_sum_fixed_length, g_constant, max_cap,
    verify_d as check_property_d, Error, ExtremalCertificate, GroupSequence, GroupSpec,
};

use super::{with_run_fields, Ctx};
use crate::args::{CapArgs, CheckArgs, ComputeArgs, GroupArgs};
use crate::report::{group_name, indent, Report, Status};

/// Text witnesses shown before eliding the rest.
const SHOWN_WITNESSES: usize = 5;

fn certificate_json(cert: &ExtremalCertificate) -> Value {
    json!({
        "invariant": cert.invariant.symbol(),
        "group": cert.group.factors(),
        "group_name": cert.group.to_string(),
        "value": cert.value,
        "exhaustive": cert.exhaustive,
        "full_symmetry": cert.full_symmetry,
        "nodes_explored": cert.stats.nodes_explored,
        "orbits_tested": cert.stats.orbits_tested,
        "extremal_sequences": cert.extremal_sequences.iter().map(GroupSequence::to_text).collect::<Vec<_>>(),
    })
}

/// Runs a search, turning an exhausted budget into a partial certificate.
fn search(
    run: fn(&GroupSpec, &zerosum_core::Budget) -> zerosum_core::Result<ExtremalCertificate>,
    group: &GroupSpec,
    ctx: &Ctx,
) -> Result<ExtremalCertificate> {
    match run(group, &ctx.budget()) {
        Ok(cert) => Ok(cert),
        Err(Error::BudgetExceeded(partial)) => Ok(*partial),
        Err(e) => Err(e.into()),
    }
}

fn witnesses_text(list: &Value) -> String {
    let seqs = list.as_array().map(Vec::as_slice).unwrap_or_default();
    let mut out = String::new();
    for (i, s) in seqs.iter().take(SHOWN_WITNESSES).enumerate() {
        let _ = writeln!(out, "  witness {}:", i + 1);
        out.push_str(&indent(s.as_str().unwrap_or_default(), "    "));
    }
    if seqs.len() > SHOWN_WITNESSES {
        let _ = writeln!(
            out,
            "  ... {} more (see --json)",
            seqs.len() - SHOWN_WITNESSES
        );
    }
    out
}

pub fn compute(ctx: &Ctx, args: &ComputeArgs) -> Result<Report> {
    let invariant: Invariant = args.invariant.parse()?;
    let group = GroupSpec::new(&args.group.group)?;
    let params = json!({"invariant": invariant.symbol(), "group": group.factors()});
    let run = match invariant {
        Invariant::Davenport => davenport,
        Invariant::Egz => egz_constant,
        Invariant::Squarefree => g_constant,
    };
    let stored = ctx.stored("compute", params, || {
        let cert = search(run, &group, ctx)?;
        Ok((certificate_json(&cert), cert.exhaustive))
    })?;
    let r = &stored.result;
    let status = if stored.exhaustive {
        Status::Ok
    } else {
        Status::Limited
    };
    let mut text = if stored.exhaustive {
        format!(
            "{}({}) = {}  (exhaustive, {} nodes, {} extremal orbit(s))\n",
            invariant,
            group,
            r["value"],
            r["nodes_explored"],
            r["extremal_sequences"].as_array().map_or(0, Vec::len)
        )
    } else {
        format!(
            "{}({}) >= {}  (budget exhausted after {} nodes)\n",
            invariant, group, r["value"], r["nodes_explored"]
        )
    };
    if stored.cached {
        text.push_str("  (from the results store)\n");
    }
    text.push_str(&witnesses_text(&r["extremal_sequences"]));
    let body = with_run_fields(r, stored.cached, ctx.started.elapsed());
    Ok(Report::new("compute", status, body, text))
}

pub fn check(args: &CheckArgs) -> Result<Report> {
    let text = std::fs::read_to_string(&args.file)
        .with_context(|| format!("reading {}", args.file.display()))?;
    let seq = GroupSequence::parse_text(&text)
        .with_context(|| format!("parsing {}", args.file.display()))?;
    let len = args.length.unwrap_or_else(|| seq.group().exponent());
    let witness = find_zero_sum_fixed_length(&seq, len);
    let body = json!({
        "group": seq.group().factors(),
        "sequence_length": seq.len(),
        "length": len,
        "found": witness.is_some(),
        "witness": witness.as_ref().map(GroupSequence::to_text),
    });
    let (status, text) = match &witness {
        Some(w) => (
            Status::Ok,
            format!("zero-sum subsequence of length {len}:\n{}", w.to_text()),
        ),
        None => (
            Status::Negative,
            format!("no zero-sum subsequence of length {len}\n"),
        ),
    };
    Ok(Report::new("check", status, body, text))
}

pub fn verify_d(ctx: &Ctx, args: &GroupArgs) -> Result<Report> {
    let group = GroupSpec::new(&args.group)?;
    let params = json!({"group": group.factors()});
    let stored = ctx.stored("verify-d", params, || {
        let cert = search(egz_constant, &group, ctx)?;
        let mut v = json!({
            "group": group.factors(),
            "group_name": group.to_string(),
            "s": cert.value,
            "exhaustive": cert.exhaustive,
            "extremal_count": cert.extremal_sequences.len(),
            "holds": null,
            "c": null,
            "violators": [],
        });
        if cert.exhaustive {
            let report = check_property_d(&group, &cert)?;
            v["holds"] = report.holds.into();
            v["c"] = report.c.into();
            v["violators"] = report
                .violators
                .iter()
                .map(GroupSequence::to_text)
                .collect();
        }
        Ok((v, cert.exhaustive))
    })?;
    let r = &stored.result;
    let (status, mut text) = match r["holds"].as_bool() {
        Some(true) => (
            Status::Ok,
            format!("{} has Property D with c = {} (s = {})\n", group, r["c"], r["s"]),
        ),
        Some(false) => (
            Status::Negative,
            format!(
                "{} does not have Property D: {} extremal sequence(s) are not of the form T^(n-1)\n",
                group,
                r["violators"].as_array().map_or(0, Vec::len)
            ),
        ),
        None => (
            Status::Limited,
            format!("undecided: budget exhausted while computing s({group}) >= {}\n", r["s"]),
        ),
    };
    text.push_str(&witnesses_text(&r["violators"]));
    let body = with_run_fields(r, stored.cached, ctx.started.elapsed());
    Ok(Report::new("verify-d", status, body, text))
}

pub fn cap(ctx: &Ctx, args: &CapArgs) -> Result<Report> {
    let params = json!({"rank": args.rank});
    let stored = ctx.stored("cap", params, || {
        let v = match max_cap(args.rank, &ctx.budget()) {
            Ok(rep) => json!({
                "rank": rep.rank,
                "size": rep.size,
                "exhaustive": rep.exhaustive,
                "source": rep.source,
                "caps": rep.caps.iter().map(|c| c.iter().map(|p| p.coords().to_vec()).collect::<Vec<_>>()).collect::<Vec<_>>(),
                "budget_exhausted": false,
            }),
            Err(Error::BudgetExceeded(partial)) => json!({
                "rank": args.rank,
                "size": partial.value - 1,
                "exhaustive": false,
                "source": "search",
                "caps": partial.extremal_sequences.iter().map(|s| s.support().map(|p| p.coords().to_vec()).collect::<Vec<_>>()).collect::<Vec<_>>(),
                "budget_exhausted": true,
            }),
            Err(e) => return Err(e.into()),
        };
        let exhaustive = v["exhaustive"].as_bool().unwrap_or(false);
        Ok((v, exhaustive))
    })?;
    let r = &stored.result;
    let limited = r["budget_exhausted"].as_bool().unwrap_or(false);
    let space = group_name(&vec![3; args.rank]);
    let mut text = match (limited, r["source"].as_str()) {
        (true, _) => format!("largest cap in {space} has size >= {}  (budget exhausted)\n", r["size"]),
        (false, Some("stored_cap")) => format!(
            "largest cap in {space} has size {}  (stored cap re-checked; maximality from the known s value)\n",
            r["size"]
        ),
        _ => format!("largest cap in {space} has size {}  (exhaustive)\n", r["size"]),
    };
    if let Some(first) = r["caps"].as_array().and_then(|c| c.first()) {
        let _ = writeln!(text, "  {first}");
    }
    let status = if limited { Status::Limited } else { Status::Ok };
    let body = with_run_fields(r, stored.cached, ctx.started.elapsed());
    Ok(Report::new("cap", status, body, text))
}
