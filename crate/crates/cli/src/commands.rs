use std::collections::BTreeSet;
use std::fmt::{Display, Write};
use std::path::Path;

use defcheck::engine::{
    check_split_equivalence, entails_literal, finite_lhm, induction_process, lhm as least_herbrand_model, satisfies_def,
    satisfies_fo, to_atoms, unique_expansion, Expansion, Interpretation, Verdict,
};
use defcheck::oracle::{
    brute_force_minimal_check, clark_completion, enumerate_completion_models, horn_entailment_gap_report,
};
use defcheck::parse::{parse_ground_atom, parse_literal, parse_program, parse_structure};
use defcheck::{satisfies_herbrand_axiom, Definition, Exactness, GroundAtom, HerbrandCheck, Program, Structure};
use serde_json::{json, Value};

use crate::report::{Outcome, RunReport, Settings};

type Result<T> = std::result::Result<T, String>;

fn err(e: impl Display) -> String {
    e.to_string()
}

fn load_program(report: &mut RunReport, path: &Path) -> Result<Program> {
    let text = report.read(path)?;
    parse_program(&text, Some(&path.display().to_string())).map_err(err)
}

/// An explicit `--depth` replaces the bound of a term-generated structure.
fn load_structure(s: &Settings, report: &mut RunReport, path: &Path) -> Result<Structure> {
    let text = report.read(path)?;
    let m = parse_structure(&text, Some(&path.display().to_string())).map_err(err)?;
    Ok(match s.depth {
        Some(k) if !m.is_extensional() => m.with_depth_bound(k),
        _ => m,
    })
}

/// The whole definition, or the rules of the `--module`.
fn selected(s: &Settings, p: &Program) -> Result<Definition> {
    match &s.module {
        None => Ok(p.definition.clone()),
        Some(name) => {
            let part = p
                .module(name)
                .ok_or_else(|| format!("the program has no module `{name}`"))?;
            p.definition.subdefinition(&part.rules).map_err(err)
        }
    }
}

fn selected_program(s: &Settings, p: &Program) -> Result<Program> {
    Ok(Program {
        definition: selected(s, p)?,
        constructors: p.constructors.clone(),
        modules: Vec::new(),
    })
}

fn label(s: &Settings) -> String {
    s.module.as_ref().map_or("D".to_string(), |m| format!("D_{m}"))
}

fn note_truncation(warnings: &mut Vec<String>, what: &str, e: &Exactness) {
    if let Exactness::Truncated(reason) = e {
        warnings.push(format!("{what} is truncated: {reason}"));
    }
}

fn atom_list(i: &Interpretation) -> Vec<String> {
    to_atoms(i).iter().map(GroundAtom::to_string).collect()
}

fn verdict_line(name: &str, v: &Verdict) -> String {
    let mut line = format!("{name}: {}", if v.holds { "holds" } else { "fails" });
    if let Exactness::Truncated(_) = v.exactness {
        line.push_str(" (truncated)");
    }
    if let Some(w) = &v.witness {
        write!(line, ": {w}").unwrap();
    }
    line
}

fn herbrand_line(h: &Option<HerbrandCheck>) -> String {
    match h {
        None => "H(CF): not applicable, the program has no constructors".into(),
        Some(h) if h.holds => format!(
            "H(CF): holds{}",
            if h.exactness.is_exact() { "" } else { " (truncated)" }
        ),
        Some(h) => format!("H(CF): fails: {}", h.reason.as_deref().unwrap_or("")),
    }
}

pub fn check(s: &Settings, report: &mut RunReport, program: &Path, structure: &Path) -> Result<Outcome> {
    let p = load_program(report, program)?;
    let m = load_structure(s, report, structure)?;
    let d = selected(s, &p)?;
    let name = label(s);
    let herbrand = (!p.constructors.is_empty()).then(|| satisfies_herbrand_axiom(&m, &p.constructors));
    let definition = satisfies_def(&m, &d, &s.options).map_err(err)?;
    let horn = satisfies_fo(&m, &d, &s.options).map_err(err)?;
    let mut modules = Vec::new();
    if s.module.is_none() {
        for part in &p.modules {
            let sub = p.definition.subdefinition(&part.rules).map_err(err)?;
            modules.push((format!("D_{}", part.name), satisfies_def(&m, &sub, &s.options).map_err(err)?));
        }
    }

    let mut failed = Vec::new();
    let mut warnings = Vec::new();
    let mut exactness = Exactness::Exact;
    if let Some(h) = &herbrand {
        if !h.holds {
            failed.push("H(CF)".to_string());
        }
        note_truncation(&mut warnings, "H(CF)", &h.exactness);
        exactness = exactness.and(h.exactness.clone());
    }
    if !definition.holds {
        failed.push(name.clone());
    }
    note_truncation(&mut warnings, &name, &definition.exactness);
    exactness = exactness.and(definition.exactness.clone());
    for (n, v) in &modules {
        if !v.holds {
            failed.push(n.clone());
        }
        note_truncation(&mut warnings, n, &v.exactness);
    }
    let holds = herbrand.as_ref().map_or(true, |h| h.holds) && definition.holds;

    let mut text = String::new();
    writeln!(text, "{}", herbrand_line(&herbrand)).unwrap();
    writeln!(text, "{}", verdict_line(&name, &definition)).unwrap();
    if !definition.holds {
        if horn.holds {
            writeln!(text, "  the rules hold as implications, so {name} fails minimality").unwrap();
        } else {
            writeln!(text, "  {}", verdict_line("rules as implications", &horn)).unwrap();
        }
    }
    for (n, v) in &modules {
        writeln!(text, "{}", verdict_line(n, v)).unwrap();
    }
    if holds {
        writeln!(text, "model: yes").unwrap();
    } else {
        writeln!(text, "model: no (failed: {})", failed.join(", ")).unwrap();
    }

    let modules_json: Vec<Value> = modules
        .iter()
        .map(|(n, v)| json!({ "name": n, "verdict": v }))
        .collect();
    Ok(Outcome {
        verdict: holds,
        exactness: Some(exactness),
        result: json!({
            "model": holds,
            "failed": failed,
            "herbrand": herbrand,
            "definition": { "name": name, "verdict": definition },
            "horn": horn,
            "modules": modules_json,
        }),
        text,
        warnings,
    })
}

fn expansion_outcome(e: &Expansion, what: &str) -> Outcome {
    let atoms = atom_list(&e.values);
    let mut text = String::new();
    for a in &atoms {
        writeln!(text, "{a}").unwrap();
    }
    writeln!(text, "{} atoms, {}", atoms.len(), e.exactness).unwrap();
    let mut warnings = Vec::new();
    note_truncation(&mut warnings, what, &e.exactness);
    Outcome {
        verdict: true,
        exactness: Some(e.exactness.clone()),
        result: json!({
            "atoms": atoms,
            "universe": {
                "terms": e.scope.len(),
                "full": e.scope.is_full(),
                "complete_depth": e.scope.complete_depth(),
            },
        }),
        text,
        warnings,
    }
}

pub fn eval(s: &Settings, report: &mut RunReport, program: &Path, structure: Option<&Path>) -> Result<Outcome> {
    let p = load_program(report, program)?;
    match structure {
        Some(path) => {
            let m = load_structure(s, report, path)?;
            let d = selected(s, &p)?;
            let e = unique_expansion(&d, &m, &s.options).map_err(err)?;
            Ok(expansion_outcome(&e, "the expansion"))
        }
        None => {
            let q = selected_program(s, &p)?;
            let e = least_herbrand_model(&q, s.depth(), &s.options).map_err(err)?;
            Ok(expansion_outcome(&e, "the least Herbrand model"))
        }
    }
}

pub fn lhm(s: &Settings, report: &mut RunReport, program: &Path) -> Result<Outcome> {
    eval(s, report, program, None)
}

pub fn trace(s: &Settings, report: &mut RunReport, program: &Path, structure: Option<&Path>) -> Result<Outcome> {
    let p = load_program(report, program)?;
    let d = selected(s, &p)?;
    let m = match structure {
        Some(path) => load_structure(s, report, path)?,
        None => Structure::term_generated(p.constructors.clone(), s.depth()).map_err(err)?,
    };
    let t = induction_process(&d, &m, &s.options).map_err(err)?;
    let strata: Vec<Vec<String>> = t
        .strata
        .iter()
        .map(|c| c.iter().map(ToString::to_string).collect())
        .collect();
    let mut text = String::new();
    for (i, c) in strata.iter().enumerate() {
        writeln!(text, "stratum {}: {}", i + 1, c.join(", ")).unwrap();
    }
    for step in &t.steps {
        let new = match step.derived.len() {
            0 => "no new atoms".to_string(),
            1 => "1 new atom".to_string(),
            n => format!("{n} new atoms"),
        };
        writeln!(
            text,
            "step {} (stratum {}): {} rule instances fired, {new}",
            step.step,
            step.stratum + 1,
            step.fired
        )
        .unwrap();
        for dv in &step.derived {
            let bindings: Vec<String> = dv.bindings.iter().map(|(v, t)| format!("{v}={t}")).collect();
            writeln!(text, "  {}  by rule {} with {}", dv.atom, dv.rule + 1, bindings.join(", ")).unwrap();
        }
    }
    let atoms = atom_list(&t.limit);
    writeln!(text, "fixpoint: {} atoms, {}", atoms.len(), t.exactness).unwrap();
    let mut warnings = Vec::new();
    note_truncation(&mut warnings, "the trace", &t.exactness);
    Ok(Outcome {
        verdict: true,
        exactness: Some(t.exactness.clone()),
        result: json!({ "strata": strata, "steps": t.steps, "fixpoint": atoms }),
        text,
        warnings,
    })
}

pub fn query(s: &Settings, report: &mut RunReport, program: &Path, literal: &str) -> Result<Outcome> {
    let p = load_program(report, program)?;
    let q = selected_program(s, &p)?;
    let l = parse_literal(literal).map_err(err)?;
    let v = entails_literal(&q, &l, s.depth(), &s.options).map_err(err)?;
    let answer = if v.holds { "entailed" } else { "not entailed" };
    let mut warnings = Vec::new();
    note_truncation(&mut warnings, "the answer", &v.exactness);
    Ok(Outcome {
        verdict: v.holds,
        exactness: Some(v.exactness.clone()),
        result: json!({ "literal": l.to_string(), "entailed": v.holds }),
        text: format!("{l}: {answer} ({})\n", v.exactness),
        warnings,
    })
}

pub fn split(s: &Settings, report: &mut RunReport, program: &Path, structure: Option<&Path>) -> Result<Outcome> {
    let p = load_program(report, program)?;
    let m = match structure {
        Some(path) => load_structure(s, report, path)?,
        None => match finite_lhm(&p, &s.options).map_err(err)? {
            Some(n) => n,
            None => {
                least_herbrand_model(&p, s.depth(), &s.options)
                    .map_err(err)?
                    .structure
            }
        },
    };
    let r = check_split_equivalence(&p, &m, &s.options).map_err(err)?;
    let yes = |b: bool| if b { "holds" } else { "fails" };
    let names: Vec<&str> = p.modules.iter().map(|m| m.name.as_str()).collect();
    let mut text = String::new();
    writeln!(text, "partition: valid ({} modules: {})", names.len(), names.join(", ")).unwrap();
    writeln!(text, "{}", herbrand_line(&Some(r.herbrand.clone()))).unwrap();
    let iso = match r.isomorphic_to_lhm {
        Some(true) => "holds",
        Some(false) => "fails",
        None => "not decided for this structure",
    };
    writeln!(text, "(1) isomorphic to the least Herbrand model: {iso}").unwrap();
    writeln!(text, "(2) H(CF) and D: {}", yes(r.whole)).unwrap();
    writeln!(text, "(3) H(CF) and every module: {}", yes(r.all_modules)).unwrap();
    for mv in &r.modules {
        writeln!(text, "    {}", verdict_line(&format!("D_{}", mv.name), &mv.verdict)).unwrap();
    }
    writeln!(text, "agreement: {}", if r.agree { "yes" } else { "no" }).unwrap();
    let mut warnings = Vec::new();
    note_truncation(&mut warnings, "the split check", &r.exactness);
    Ok(Outcome {
        verdict: r.agree,
        exactness: Some(r.exactness.clone()),
        result: serde_json::to_value(&r).map_err(err)?,
        text,
        warnings,
    })
}

fn with_values(m: &Structure, d: &Definition, values: &Interpretation) -> Result<Structure> {
    let mut out = m.without_predicates(d.defined());
    for (p, rel) in values {
        out.set_predicate(p.clone(), rel.iter().cloned()).map_err(err)?;
    }
    Ok(out)
}

pub fn completion(s: &Settings, report: &mut RunReport, program: &Path, structure: &Path) -> Result<Outcome> {
    let p = load_program(report, program)?;
    let m = load_structure(s, report, structure)?;
    let d = selected(s, &p)?;
    let theory = clark_completion(&d);
    let models = enumerate_completion_models(&theory, &m, s.budget).map_err(err)?;
    let definitional = unique_expansion(&d, &m, &s.options).map_err(err)?;
    let def_atoms: BTreeSet<GroundAtom> = to_atoms(&definitional.values);

    let mut text = String::new();
    writeln!(text, "completion:").unwrap();
    for c in &theory.completions {
        writeln!(text, "  {c}").unwrap();
    }
    let listed: Vec<String> = def_atoms.iter().map(ToString::to_string).collect();
    writeln!(text, "definitional model: {} ({} atoms)", listed.join(", "), listed.len()).unwrap();

    let mut entries = Vec::new();
    let mut lines = Vec::new();
    let mut accepted = 0;
    for (i, model) in models.iter().enumerate() {
        let atoms = to_atoms(model);
        let added: Vec<String> = atoms.difference(&def_atoms).map(ToString::to_string).collect();
        let removed: Vec<String> = def_atoms.difference(&atoms).map(ToString::to_string).collect();
        let ok = satisfies_def(&with_values(&m, &d, model)?, &d, &s.options)
            .map_err(err)?
            .holds;
        accepted += usize::from(ok);
        let mut line = format!("  model {}:", i + 1);
        if added.is_empty() && removed.is_empty() {
            line.push_str(" the definitional model");
        }
        if !added.is_empty() {
            write!(line, " + {}", added.join(", ")).unwrap();
        }
        if !removed.is_empty() {
            write!(line, " - {}", removed.join(", ")).unwrap();
        }
        if !ok {
            line.push_str("  (not a definitional model)");
        }
        lines.push(line);
        entries.push(json!({
            "atoms": atoms.iter().map(ToString::to_string).collect::<Vec<_>>(),
            "added": added,
            "removed": removed,
            "satisfies_definition": ok,
        }));
    }
    writeln!(
        text,
        "completion models: {}, of which {accepted} satisfy the definition",
        models.len()
    )
    .unwrap();
    for line in lines {
        writeln!(text, "{line}").unwrap();
    }
    let agree = models.len() == 1 && to_atoms(&models[0]) == def_atoms;
    writeln!(
        text,
        "{}",
        if agree {
            "the completion has exactly the definitional model"
        } else {
            "the completion admits models the definition rejects"
        }
    )
    .unwrap();
    let mut warnings = Vec::new();
    note_truncation(&mut warnings, "the definitional model", &definitional.exactness);
    Ok(Outcome {
        verdict: agree,
        exactness: Some(definitional.exactness.clone()),
        result: json!({
            "completion": theory.completions.iter().map(ToString::to_string).collect::<Vec<_>>(),
            "definitional_model": listed,
            "models": entries,
            "accepted": accepted,
        }),
        text,
        warnings,
    })
}

pub fn min_check(s: &Settings, report: &mut RunReport, program: &Path, structure: &Path) -> Result<Outcome> {
    let p = load_program(report, program)?;
    let m = load_structure(s, report, structure)?;
    let d = selected(s, &p)?;
    let oracle = brute_force_minimal_check(&m, &d, s.budget).map_err(err)?;
    let engine = satisfies_def(&m, &d, &s.options).map_err(err)?;
    let yes = |b: bool| if b { "yes" } else { "no" };
    let mut text = format!("{} minimally satisfied (brute force): {}\n", label(s), yes(oracle));
    writeln!(
        text,
        "engine: {} ({})",
        yes(engine.holds),
        if engine.holds == oracle { "agrees" } else { "DISAGREES" }
    )
    .unwrap();
    Ok(Outcome {
        verdict: oracle,
        exactness: Some(Exactness::Exact),
        result: json!({ "oracle": oracle, "engine": engine, "agree": engine.holds == oracle }),
        text,
        warnings: Vec::new(),
    })
}

pub fn gap(s: &Settings, report: &mut RunReport, program: &Path, atoms: &[String]) -> Result<Outcome> {
    let p = load_program(report, program)?;
    let q = selected_program(s, &p)?;
    let atoms = atoms
        .iter()
        .map(|a| parse_ground_atom(a).map_err(err))
        .collect::<Result<Vec<_>>>()?;
    let (entries, all_true) = horn_entailment_gap_report(&q, &atoms, s.depth(), &s.options).map_err(err)?;
    let mut text = String::new();
    let mut warnings = Vec::new();
    let mut exactness = Exactness::Exact;
    for e in &entries {
        let lhm = if e.in_lhm { "true" } else { "false" };
        let horn = if e.true_in_some_horn_model {
            "true in the all-true Horn model"
        } else {
            "false in every Horn model"
        };
        writeln!(text, "{}: {lhm} in the least Herbrand model, {horn}", e.atom).unwrap();
        note_truncation(&mut warnings, &e.atom.to_string(), &e.exactness);
        exactness = exactness.and(e.exactness.clone());
    }
    let no_gap = entries.iter().all(|e| e.in_lhm || !e.true_in_some_horn_model);
    Ok(Outcome {
        verdict: no_gap,
        exactness: Some(exactness),
        result: json!({ "atoms": entries, "all_true_model": all_true }),
        text,
        warnings,
    })
}
