use anyhow::{bail, Result};
use num_bigint::BigUint;
use serde_json::json;
use zerosum_core::bounds::Consistency;
use zerosum_core::search::Invariant;
use zerosum_core::{
    application_threshold, conjecture_42_check, conjecture_43_alpha_range, seed_knowledge_base,
    theorem1_threshold, BigGroup, Rule,
};

use crate::args::{BoundArgs, ConjectureArgs, ThresholdArgs};
use crate::report::{record_json, record_text, Report, Status};

pub fn bound(args: &BoundArgs) -> Result<Report> {
    let invariant: Invariant = args.invariant.parse()?;
    let group = match (&args.group, &args.factors) {
        (Some((n, r)), None) => BigGroup::homocyclic(n.clone(), *r),
        (None, Some(f)) => BigGroup::new(f.clone())?,
        _ => bail!("pass the group as --group n,r or as --factors n1,...,nk"),
    };
    let mut kb = seed_knowledge_base();
    let mut disabled = Vec::new();
    for id in &args.disable {
        let rule: Rule = id.parse()?;
        kb.disable(rule);
        disabled.push(rule.id());
    }
    let rec = kb.query(invariant, &group);
    let mut body = record_json(&rec);
    body["disabled"] = json!(disabled);
    Ok(Report::new("bound", Status::Ok, body, record_text(&rec)))
}

pub fn threshold(args: &ThresholdArgs) -> Result<Report> {
    let (t, body) = match (&args.theorem1, args.app) {
        (Some((n, r, c)), None) => {
            let t = theorem1_threshold(n, *r, c)?;
            let body = json!({"formula": "theorem1", "app": null, "n": n.to_string(), "r": r, "c": c.to_string()});
            (t, body)
        }
        (None, Some(app)) => {
            let Some(n) = &args.n else {
                bail!("--app needs --n");
            };
            let t = application_threshold(app, n, args.r)?;
            let body = json!({"formula": "application", "app": app, "n": n.to_string(), "r": args.r, "c": null});
            (t, body)
        }
        _ => bail!("pass --theorem1 n,r,c or --app K --n N"),
    };
    let mut body = body;
    body["value"] = json!(t.value.to_string());
    body["exact_division"] = json!(t.exact_division);
    body["notes"] = json!(t.notes);
    let mut text = format!("{}\n", t.value);
    for note in &t.notes {
        text.push_str(&format!("note: {note}\n"));
    }
    Ok(Report::new("threshold", Status::Ok, body, text))
}

pub fn conjecture(args: &ConjectureArgs) -> Result<Report> {
    if args.c43 {
        let Some(a) = args.a else {
            bail!("--c43 needs --a");
        };
        let x = conjecture_43_alpha_range(&args.n, args.r, a)?;
        let body = json!({
            "check": "c43",
            "n": args.n.to_string(),
            "r": args.r,
            "a": a,
            "lower": x.lower.to_string(),
            "upper": x.upper.to_string(),
            "alpha_max": x.alpha_max.to_string(),
        });
        let text = format!(
            "conjectured s(C_{{2^{a}·{}}}^{}) in [{}, {}]  (alpha <= {})\n",
            args.n, args.r, x.lower, x.upper, x.alpha_max
        );
        return Ok(Report::new("conjecture", Status::Ok, body, text));
    }
    let kb = seed_knowledge_base();
    let g = match &args.g {
        Some(g) => g.clone(),
        None => {
            let rec = kb.query(
                Invariant::Squarefree,
                &BigGroup::homocyclic(BigUint::from(3u32), args.r),
            );
            match rec.value() {
                Some(v) => v.clone(),
                None => bail!("g(C_3^{}) is not known exactly ({rec}); pass --g", args.r),
            }
        }
    };
    let rep = conjecture_42_check(&kb, &args.n, args.r, &g)?;
    let (status, word) = match rep.status {
        Consistency::Consistent => (Status::Ok, "consistent"),
        Consistency::Unknown => (Status::Limited, "unknown"),
        Consistency::Inconsistent => (Status::Negative, "inconsistent"),
    };
    let body = json!({
        "check": "c42",
        "n": rep.n.to_string(),
        "r": rep.r,
        "g_c3r": rep.g_c3r.to_string(),
        "conjectured": rep.conjectured.to_string(),
        "status": word,
        "record": record_json(&rep.record),
    });
    let text = format!(
        "{word}: conjectured s(C_{}^{}) = {}, proven {}\n",
        rep.n, rep.r, rep.conjectured, rep.record
    );
    Ok(Report::new("conjecture", status, body, text))
}
