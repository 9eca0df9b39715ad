//! One handler per CLI verb. Every handler produces a verdict (driving the
//! exit code), JSON-ready witnesses and data, and the human rendering.

use serde_json::json;
use tvcat_core::completion::SupOutcome;
use tvcat_core::{
    cocomplete_check_with, colimit, kan_check, kz_audit, presheaf_cat, split_fork_audit, sup_phi,
    yoneda_phi, AuditReport, InjectivityUniverse, TCategory,
};

use crate::report::{audit_to_json, matrix_table};
use crate::workspace::{pair_projections, serialize_workspace, Workspace};
use crate::CliError;

pub struct CommandResult {
    pub ok: bool,
    pub verdict: String,
    pub witnesses: Vec<serde_json::Value>,
    pub data: serde_json::Value,
    pub human: String,
}

impl CommandResult {
    fn pass(verdict: &str, data: serde_json::Value, human: String) -> Self {
        CommandResult { ok: true, verdict: verdict.into(), witnesses: Vec::new(), data, human }
    }

    fn fail(
        verdict: &str,
        witnesses: Vec<serde_json::Value>,
        data: serde_json::Value,
        human: String,
    ) -> Self {
        CommandResult { ok: false, verdict: verdict.into(), witnesses, data, human }
    }

    fn from_audit(report: &AuditReport) -> Self {
        let ok = report.all_passed();
        CommandResult {
            ok,
            verdict: if ok { "pass".into() } else { "fail".into() },
            witnesses: audit_to_json(report),
            data: json!({ "sampled": report.sampled }),
            human: report.to_string(),
        }
    }
}

fn map_err(e: tvcat_core::Error) -> CliError {
    match e {
        tvcat_core::Error::CapExceeded(_)
        | tvcat_core::Error::Capability(_)
        | tvcat_core::Error::InfiniteQuantale(_)
        | tvcat_core::Error::Precondition(_) => CliError::Validation(e.to_string()),
        other => CliError::Validation(other.to_string()),
    }
}

pub fn check(ws: &Workspace) -> Result<CommandResult, CliError> {
    // Loading already validated everything; report what is in scope and make
    // sure serialisation round-trips semantically.
    let file = serialize_workspace(ws);
    let reparsed = crate::workspace::build_workspace(file, true, None)?;
    for (name, cat) in &ws.categories {
        let other = reparsed.category(name)?;
        if cat.structure().entries() != other.structure().entries() {
            return Err(CliError::Validation(format!(
                "round-trip changed category `{name}`"
            )));
        }
    }
    let human = format!(
        "workspace ok: quantale `{}`, theory `{}`{}, {} categories, {} functors, {} distributors\n",
        ws.quantale.name(),
        ws.theory.name(),
        if ws.theory_audited_on_load { " (audited on load)" } else { "" },
        ws.categories.len(),
        ws.functors.len(),
        ws.distributors.len(),
    );
    Ok(CommandResult::pass(
        "pass",
        json!({
            "categories": ws.categories.keys().collect::<Vec<_>>(),
            "functors": ws.functors.keys().collect::<Vec<_>>(),
            "distributors": ws.distributors.keys().collect::<Vec<_>>(),
        }),
        human,
    ))
}

pub fn audit_quantale(ws: &Workspace) -> Result<CommandResult, CliError> {
    Ok(CommandResult::from_audit(&ws.quantale.audit()))
}

pub fn audit_theory(ws: &Workspace, cap: usize) -> Result<CommandResult, CliError> {
    if cap == 0 {
        return Err(CliError::Usage("--cap must be at least 1".into()));
    }
    Ok(CommandResult::from_audit(&ws.theory.audit(cap)))
}

pub fn audit_phi(ws: &Workspace, class: &str, cap: usize) -> Result<CommandResult, CliError> {
    let phi = ws.class(class)?;
    let report = phi.audit_axioms(&ws.theory, cap, &ws.caps).map_err(map_err)?;
    let ok = report.all_passed();
    let witnesses = report
        .entries()
        .iter()
        .map(|e| json!({ "law": e.law, "passed": e.passed, "witness": e.witness }))
        .collect();
    let mut human = format!("axiom audit for Φ = {} on {}\n", report.class, report.universe);
    for e in report.entries() {
        match &e.witness {
            Some(w) if !e.passed => human.push_str(&format!("  FAIL  {}  [{}]\n", e.law, w)),
            _ => human.push_str(&format!("  {}  {}\n", if e.passed { "pass" } else { "FAIL" }, e.law)),
        }
    }
    Ok(CommandResult {
        ok,
        verdict: if ok { "pass".into() } else { "fail".into() },
        witnesses,
        data: json!({ "class": report.class, "universe": report.universe }),
        human,
    })
}

fn presheaf_payload(
    ws: &Workspace,
    p: &tvcat_core::PresheafCategory,
) -> (serde_json::Value, String) {
    let q = &ws.quantale;
    let elements: Vec<Vec<String>> = p
        .tables
        .iter()
        .map(|t| t.iter().map(|&v| q.label(v)).collect())
        .collect();
    let mut human = format!(
        "Φ = {}: {} presheaves on `{}` (tables over T(carrier))\n",
        p.phi.name(),
        p.len(),
        p.base.carrier().name()
    );
    for (i, t) in elements.iter().enumerate() {
        human.push_str(&format!("  ψ{i} = [{}]\n", t.join(", ")));
    }
    human.push_str("structure:\n");
    human.push_str(&matrix_table(p.cat.structure(), q));
    (json!({ "elements": elements }), human)
}

pub fn presheaf(ws: &Workspace, x: &str, class: &str) -> Result<CommandResult, CliError> {
    let cat = ws.category(x)?;
    let phi = ws.class(class)?;
    let p = presheaf_cat(cat, phi, &ws.caps).map_err(map_err)?;
    let (data, human) = presheaf_payload(ws, &p);
    Ok(CommandResult::pass("constructed", data, human))
}

pub fn yoneda_cmd(ws: &Workspace, x: &str, class: &str) -> Result<CommandResult, CliError> {
    let cat = ws.category(x)?;
    let phi = ws.class(class)?;
    let (y, p) = yoneda_phi(cat, phi, &ws.caps).map_err(map_err)?;
    let mapping: Vec<(String, usize)> = (0..cat.size())
        .map(|i| (cat.carrier().label(i).to_string(), y.apply(i)))
        .collect();
    let ff = y.fully_faithful();
    let mut human = format!("Yoneda map into Φ = {} presheaves:\n", phi.name());
    for (label, idx) in &mapping {
        let q = &ws.quantale;
        let tbl: Vec<String> = p.tables[*idx].iter().map(|&v| q.label(v)).collect();
        human.push_str(&format!("  {label} ↦ ψ{idx} = [{}]\n", tbl.join(", ")));
    }
    human.push_str(&format!("fully faithful: {ff}\n"));
    let data = json!({
        "map": mapping.iter().map(|(l, i)| json!({ "point": l, "presheaf": i })).collect::<Vec<_>>(),
        "fully_faithful": ff,
    });
    if ff {
        Ok(CommandResult::pass("constructed", data, human))
    } else {
        Ok(CommandResult::fail("fail", vec![json!("Yoneda map is not fully faithful")], data, human))
    }
}

pub fn complete(ws: &Workspace, x: &str, class: &str) -> Result<CommandResult, CliError> {
    let cat = ws.category(x)?;
    let phi = ws.class(class)?;
    let search = sup_phi(cat, phi, &ws.caps).map_err(map_err)?;
    let (mut data, mut human) = presheaf_payload(ws, &search.presheaves);
    match &search.outcome {
        SupOutcome::Present(sup) => {
            // The completion ΦX with its own supremum map, confirming it is
            // Φ-cocomplete with Sup pinned by the inverse-image formula.
            let sup_of_phix = sup_phi(&search.presheaves.cat, phi, &ws.caps).map_err(map_err)?;
            let ok = matches!(sup_of_phix.outcome, SupOutcome::Present(_));
            human.push_str("Sup of X:\n");
            for i in 0..search.presheaves.len() {
                human.push_str(&format!(
                    "  ψ{i} ↦ {}\n",
                    cat.carrier().label(sup.apply(i))
                ));
            }
            data["sup"] = json!(sup.table());
            if ok {
                human.push_str("ΦX is Φ-cocomplete\n");
                Ok(CommandResult::pass("constructed", data, human))
            } else {
                Ok(CommandResult::fail(
                    "fail",
                    vec![json!("ΦX failed to be Φ-cocomplete")],
                    data,
                    human,
                ))
            }
        }
        SupOutcome::Absent { certificate } => {
            let cert = certificate.map(|i| {
                search.presheaves.tables[i]
                    .iter()
                    .map(|&v| ws.quantale.label(v))
                    .collect::<Vec<_>>()
            });
            match &cert {
                Some(c) => human.push_str(&format!(
                    "`{x}` itself is not Φ-cocomplete (certificate ψ = [{}]); ΦX is its completion\n",
                    c.join(", ")
                )),
                None => human
                    .push_str(&format!("`{x}` itself is not Φ-cocomplete; ΦX is its completion\n")),
            }
            let sup_of_phix = sup_phi(&search.presheaves.cat, phi, &ws.caps).map_err(map_err)?;
            let ok = matches!(sup_of_phix.outcome, SupOutcome::Present(_));
            data["certificate"] = json!(cert);
            if ok {
                human.push_str("ΦX is Φ-cocomplete\n");
                Ok(CommandResult::pass("constructed", data, human))
            } else {
                Ok(CommandResult::fail(
                    "fail",
                    vec![json!("ΦX failed to be Φ-cocomplete")],
                    data,
                    human,
                ))
            }
        }
    }
}

pub fn colim(ws: &Workspace, weight: &str, along: &str) -> Result<CommandResult, CliError> {
    let d = ws.distributor(weight)?;
    let h = ws.functor(along)?;
    match colimit(d, h).map_err(map_err)? {
        Some(g) => {
            let table: Vec<(String, String)> = (0..g.dom.size())
                .map(|i| {
                    (
                        g.dom.carrier().label(i).to_string(),
                        g.cod.carrier().label(g.apply(i)).to_string(),
                    )
                })
                .collect();
            let mut human = String::from("colimit exists:\n");
            for (a, b) in &table {
                human.push_str(&format!("  {a} ↦ {b}\n"));
            }
            Ok(CommandResult::pass(
                "constructed",
                json!({ "colimit": table.iter().map(|(a, b)| json!({ "from": a, "to": b })).collect::<Vec<_>>() }),
                human,
            ))
        }
        None => Ok(CommandResult::fail(
            "absent",
            vec![json!({ "weight": weight, "along": along })],
            json!(null),
            format!("no functor realises the colimit of `{weight}` along `{along}`\n"),
        )),
    }
}

pub fn cocomplete(ws: &Workspace, x: &str, class: &str) -> Result<CommandResult, CliError> {
    let cat = ws.category(x)?;
    let phi = ws.class(class)?;
    let universe = InjectivityUniverse::build(&ws.theory, phi, &ws.caps).map_err(map_err)?;
    let record = cocomplete_check_with(cat, phi, &ws.caps, &universe).map_err(map_err)?;
    let flags = json!({
        "injective": record.injective,
        "left_inverse": record.left_inverse,
        "left_adjoint": record.left_adjoint,
        "cocomplete": record.cocomplete,
    });
    let mut human = format!(
        "Φ = {} on `{x}`:\n  (i) injective (bounded): {}\n  (ii) Yoneda left inverse: {}\n  (iii) Yoneda left adjoint: {}\n  (iv) cocomplete: {}\n",
        phi.name(),
        record.injective,
        record.left_inverse,
        record.left_adjoint,
        record.cocomplete
    );
    let mut witnesses = Vec::new();
    if !record.agreement() {
        human.push_str("THEOREM VIOLATION: the four flags disagree\n");
        witnesses.push(json!({ "theorem_violation": flags }));
        if let Some(w) = &record.injective_witness {
            witnesses.push(json!({ "injectivity": w }));
        }
        return Ok(CommandResult::fail(
            "theorem-violation",
            witnesses,
            json!({ "flags": flags }),
            human,
        ));
    }
    if record.cocomplete {
        if let Some(sup) = &record.sup_table {
            human.push_str("Sup table:\n");
            for (elem, point) in sup {
                human.push_str(&format!("  {elem} ↦ {point}\n"));
            }
        }
        Ok(CommandResult::pass(
            "cocomplete",
            json!({ "flags": flags, "sup": record.sup_table }),
            human,
        ))
    } else {
        let cert = record
            .certificate
            .as_ref()
            .map(|t| t.iter().map(|&v| ws.quantale.label(v)).collect::<Vec<_>>());
        if let Some(c) = &cert {
            human.push_str(&format!("certificate ψ = [{}] has no colimit\n", c.join(", ")));
            witnesses.push(json!({ "certificate": c }));
        }
        if let Some(w) = &record.injective_witness {
            witnesses.push(json!({ "injectivity": w }));
        }
        Ok(CommandResult::fail(
            "not-cocomplete",
            witnesses,
            json!({ "flags": flags, "certificate": cert }),
            human,
        ))
    }
}

pub fn injective(
    ws: &Workspace,
    x: &str,
    class: &str,
    cap: Option<usize>,
) -> Result<CommandResult, CliError> {
    let cat = ws.category(x)?;
    let phi = ws.class(class)?;
    let mut caps = ws.caps.clone();
    if let Some(c) = cap {
        caps.injective_b = c;
    }
    let universe = InjectivityUniverse::build(&ws.theory, phi, &caps).map_err(map_err)?;
    match universe.check(cat, &caps).map_err(map_err)? {
        None => Ok(CommandResult::pass(
            "pass",
            json!({ "note": "no counterexample within caps", "triples": universe.triple_count() }),
            format!(
                "`{x}` is Φ-injective for Φ = {} (no counterexample within |B| ≤ {}; {} embeddings tried)\n",
                phi.name(),
                caps.injective_b,
                universe.triple_count()
            ),
        )),
        Some(witness) => Ok(CommandResult::fail(
            "fail",
            vec![json!({ "witness": witness })],
            json!(null),
            format!("`{x}` is not Φ-injective: {witness}\n"),
        )),
    }
}

pub fn kz(ws: &Workspace, x: &str, class: &str) -> Result<CommandResult, CliError> {
    let cat = ws.category(x)?;
    let phi = ws.class(class)?;
    let report = kz_audit(cat, phi, &ws.caps).map_err(map_err)?;
    Ok(CommandResult::from_audit(&report))
}

pub fn split_fork(ws: &Workspace, r: &str, x: &str, class: &str) -> Result<CommandResult, CliError> {
    let rel = ws.category(r)?;
    let base = ws.category(x)?;
    let phi = ws.class(class)?;
    let (p1, p2) = pair_projections(rel, base)?;
    let report = split_fork_audit(&p1, &p2, phi, &ws.caps).map_err(map_err)?;
    Ok(CommandResult::from_audit(&report))
}

pub fn kan(ws: &Workspace, x: &str, y: &str, class: &str) -> Result<CommandResult, CliError> {
    let cx = ws.category(x)?;
    let cy = ws.category(y)?;
    let phi = ws.class(class)?;
    let report = kan_check(cx, cy, phi, &ws.caps).map_err(map_err)?;
    Ok(CommandResult::from_audit(&report))
}

pub fn dual(ws: &Workspace, x: &str) -> Result<CommandResult, CliError> {
    let cat = ws.category(x)?;
    let op = TCategory::dual_op(cat).map_err(map_err)?;
    let human = format!(
        "dual of `{x}` (carrier = T({})):\n{}",
        cat.carrier().name(),
        matrix_table(op.structure(), &ws.quantale)
    );
    Ok(CommandResult::pass("constructed", structure_json(ws, &op), human))
}

pub fn tensor(ws: &Workspace, x: &str, y: &str) -> Result<CommandResult, CliError> {
    let cx = ws.category(x)?;
    let cy = ws.category(y)?;
    let prod = TCategory::tensor(cx, cy).map_err(map_err)?;
    let human = format!(
        "tensor `{x}` ⊗ `{y}`:\n{}",
        matrix_table(prod.structure(), &ws.quantale)
    );
    Ok(CommandResult::pass("constructed", structure_json(ws, &prod), human))
}

fn structure_json(ws: &Workspace, cat: &TCategory) -> serde_json::Value {
    let q = &ws.quantale;
    let rows: Vec<Vec<String>> = (0..cat.t_carrier().size())
        .map(|i| (0..cat.size()).map(|j| q.label(cat.structure().get(i, j))).collect())
        .collect();
    json!({
        "carrier": cat.carrier().labels(),
        "structure": rows,
    })
}
