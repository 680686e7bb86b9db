//! Acceptance run: one line per criterion, then a single assertion.

mod common;

use std::io::Write;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

use effect_workbench::algebra::{find_isomorphism, validate_effect_axioms, EffectAlgebra, EffectTables};
use effect_workbench::corpus;
use effect_workbench::enumerate::{
    canonical_forms, census, enumerate_effect_algebras, enumerate_up_to, EnumerateOptions, MinimalNonLattice,
    Strategy,
};
use effect_workbench::implication::{
    check_implication_laws, natural_implication_table, set_implication_table, ElementSet, ImplicationTable,
};
use effect_workbench::logic::{builtin_suite, check_identity, check_quasiidentity, SuiteName};
use effect_workbench::models;
use effect_workbench::proof::{
    check_derivation, soundness_audit, CheckResult, Justification, Rule, Schema, System,
};
use effect_workbench::term::Term;
use effect_workbench::transforms::{
    check_identity_11, implication_to_effect, table_to_effect, validate_implication_axioms, AxiomMode,
    ImplicationAlgebra,
};

type Outcome = Result<String, String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn up_to(n: usize) -> Vec<EffectAlgebra> {
    enumerate_up_to(n, &EnumerateOptions::default()).expect("within cap")
}

fn suite_holds(name: SuiteName, t: &ImplicationTable) -> Result<(), String> {
    for (label, v) in builtin_suite(name).run(t) {
        ensure(v.holds(), || format!("{} {} fails: {:?}", name, label, v))?;
    }
    Ok(())
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let mut checked = 0;
    for e in up_to(5).iter().filter(|e| e.is_lattice()) {
        let il = natural_implication_table(e).map_err(|err| err.to_string())?;
        let r = validate_implication_axioms(&il, AxiomMode::Leia).map_err(|err| err.to_string())?;
        ensure(r.passed() && r.clauses.len() == 12, || r.to_string())?;
        suite_holds(SuiteName::Def31, &il)?;
        ensure(builtin_suite(SuiteName::Th4).entries.len() == 8, || "TH4 size".into())?;
        suite_holds(SuiteName::Th4, &il)?;
        ensure(builtin_suite(SuiteName::Th10).entries.len() == 9, || "TH10 size".into())?;
        suite_holds(SuiteName::Th10, &il)?;
        let i = ImplicationAlgebra::try_from(&il).map_err(|err| err.to_string())?;
        let back = implication_to_effect(&i).map_err(|err| err.to_string())?;
        ensure(back.same_tables(e), || "EL(IL(E)) differs from E".into())?;
        checked += 1;
    }
    let secs = start.elapsed().as_secs_f64();
    ensure(secs < 60.0, || format!("took {:.1}s", secs))?;
    Ok(format!("{} lattice algebras of size <= 5, 0 failures, {:.2}s", checked, secs))
}

fn criterion_2() -> Outcome {
    let start = Instant::now();
    let all = up_to(5);
    for e in &all {
        let t = set_implication_table(e);
        let r = validate_implication_axioms(&t, AxiomMode::Eia).map_err(|err| err.to_string())?;
        ensure(r.passed(), || r.to_string())?;
        suite_holds(SuiteName::Def52, &t)?;
        let r = check_identity_11(e);
        ensure(r.passed() && r.clauses[0].instances == e.size() * e.size(), || r.to_string())?;
        let r = check_implication_laws(e, &t).map_err(|err| err.to_string())?;
        ensure(r.passed() && r.clauses.len() == 7, || r.to_string())?;
        let back = table_to_effect(&t).map_err(|err| err.to_string())?;
        ensure(back.same_tables(e), || "E(I(E)) differs from E".into())?;
    }
    let secs = start.elapsed().as_secs_f64();
    ensure(secs < 120.0, || format!("took {:.1}s", secs))?;
    Ok(format!("{} algebras of size <= 5, 0 failures, {:.2}s", all.len(), secs))
}

fn criterion_3() -> Outcome {
    let mut lattice = 0;
    for e in up_to(5).iter().filter(|e| e.is_lattice()) {
        let set = set_implication_table(e);
        let nat = natural_implication_table(e).map_err(|err| err.to_string())?;
        ensure(set.same_cells(&nat), || format!("cells differ at {:?}", set.diff(&nat)))?;
        ensure(set.max_cell_cardinality() == 1, || "non-singleton cell".into())?;
        lattice += 1;
    }
    let c = census(6).map_err(|err| err.to_string())?;
    match c.minimal_non_lattice_size {
        MinimalNonLattice::Size(n) => {
            let witness = enumerate_effect_algebras(n)
                .map_err(|err| err.to_string())?
                .into_iter()
                .filter(|e| !e.is_lattice())
                .map(|e| set_implication_table(&e).max_cell_cardinality())
                .max()
                .unwrap_or(0);
            ensure(witness >= 2, || format!("non-lattice size {} has only singleton cells", n))?;
            Ok(format!(
                "{} lattice algebras coincide; smallest non-lattice size {} (derived), max cell size {}",
                lattice, n, witness
            ))
        }
        MinimalNonLattice::NotFoundUpToCap => {
            Ok(format!("{} lattice algebras coincide; no non-lattice algebra up to size 6", lattice))
        }
    }
}

fn criterion_4() -> Outcome {
    let start = Instant::now();
    let lib = corpus::corpus();
    let mut required: Vec<String> = "abcdefghij".chars().map(|c| format!("th9{}", c)).collect();
    required.extend("abcd".chars().map(|c| format!("sec6{}", c)));
    for r in &required {
        ensure(lib.ids().any(|id| id.starts_with(r.as_str())), || format!("no fixture for {}", r))?;
    }
    let algebras = up_to(4);
    let il: Vec<ImplicationTable> =
        algebras.iter().filter_map(|e| natural_implication_table(e).ok()).collect();
    let i: Vec<ImplicationTable> = algebras.iter().map(set_implication_table).collect();
    let mut audited = 0;
    for (id, d) in lib.iter() {
        let res = check_derivation(d, &lib);
        ensure(res.is_verified(), || format!("{}: {}", id, res))?;
        if d.hypotheses.is_empty() {
            let models = if d.system == System::A { &il } else { &i };
            let r = soundness_audit(d, models);
            ensure(r.passed(), || format!("{}: {}", id, r))?;
            audited += 1;
        }
    }
    let secs = start.elapsed().as_secs_f64();
    ensure(secs < 60.0, || format!("took {:.1}s", secs))?;
    Ok(format!(
        "{} fixtures verified, {} hypothesis-free fixtures sound on {} models, {:.2}s",
        lib.len(),
        audited,
        algebras.len(),
        secs
    ))
}

fn criterion_5() -> Outcome {
    let algebras = up_to(4);
    let mut tables = Vec::new();
    for e in &algebras {
        if let Ok(t) = natural_implication_table(e) {
            tables.push(t);
        }
        tables.push(set_implication_table(e));
    }
    let mut checks = 0;
    for t in &tables {
        for schema in Schema::ALL {
            for id in schema.identities() {
                let v = check_identity(t, &id);
                ensure(v.holds(), || format!("{:?} fails: {:?}", schema, v))?;
                checks += 1;
            }
        }
        for rule in Rule::ALL {
            let v = check_quasiidentity(t, &rule.quasi_identity());
            ensure(v.holds(), || format!("{:?} fails: {:?}", rule, v))?;
            checks += 1;
        }
    }
    Ok(format!("{} schema and rule checks on {} tables, 0 failures", checks, tables.len()))
}

fn forms(n: usize, strategy: Strategy) -> Result<std::collections::BTreeSet<Vec<u8>>, String> {
    canonical_forms(n, &EnumerateOptions { strategy, ..Default::default() }).map_err(|e| e.to_string())
}

fn criterion_6() -> Outcome {
    let mut counts = Vec::new();
    for n in 2..=5 {
        let a = forms(n, Strategy::ComplementFirst)?;
        let b = forms(n, Strategy::RowsFirst)?;
        ensure(a == b, || format!("strategies disagree at n={}", n))?;
        counts.push(a.len());
    }
    for n in [2, 3] {
        let raw = common::brute_force_all_tables(n);
        let algebras: Vec<EffectAlgebra> = raw
            .iter()
            .map(|(comp, plus)| {
                EffectAlgebra::new(EffectTables {
                    size: n,
                    names: None,
                    zero: 0,
                    one: n - 1,
                    comp: comp.clone(),
                    plus: plus.clone(),
                })
                .expect("oracle-valid table")
            })
            .collect();
        let mut reps: Vec<&EffectAlgebra> = Vec::new();
        for e in &algebras {
            if !reps.iter().any(|r| find_isomorphism(r, e).unwrap().is_some()) {
                reps.push(e);
            }
        }
        ensure(reps.len() == 1, || format!("brute force finds {} classes at n={}", reps.len(), n))?;
        ensure(counts[n - 2] == 1, || format!("enumerator finds {} at n={}", counts[n - 2], n))?;
    }
    for n in [4, 5] {
        let classes = common::class_count(&common::brute_force_reduced(n));
        ensure(classes == counts[n - 2], || format!("n={}: brute force {} vs {}", n, classes, counts[n - 2]))?;
    }
    let named = [models::b4(), models::hs(), models::c4()];
    for (i, a) in named.iter().enumerate() {
        for b in &named[i + 1..] {
            ensure(find_isomorphism(a, b).unwrap().is_none(), || "named models isomorphic".into())?;
        }
    }
    let size4 = enumerate_effect_algebras(4).map_err(|e| e.to_string())?;
    for m in &named {
        let hits = size4.iter().filter(|e| find_isomorphism(m, e).unwrap().is_some()).count();
        ensure(hits == 1, || format!("named model matched {} times", hits))?;
    }
    Ok(format!("strategies agree for n <= 5, counts {:?}; brute force agrees; B4, HS, C4 distinct", counts))
}

fn effect_controls() -> Result<usize, String> {
    let mut controls = 0;
    for e in up_to(5) {
        let t = e.tables();
        let n = t.size;
        let mut mutants: Vec<(EffectTables, Vec<usize>)> = Vec::new();
        for x in 0..n {
            for y in 0..n {
                for v in std::iter::once(None).chain((0..n).map(Some)) {
                    if t.plus[x][y] != v {
                        let mut m = t.clone();
                        m.plus[x][y] = v;
                        mutants.push((m, vec![x, y]));
                    }
                }
            }
            for v in (0..n).filter(|&v| v != t.comp[x]) {
                let mut m = t.clone();
                m.comp[x] = v;
                mutants.push((m, vec![x]));
            }
        }
        for (m, planted) in mutants {
            let oracle = common::is_effect_algebra(m.zero, m.one, &m.comp, &m.plus);
            let r = validate_effect_axioms(&m).map_err(|e| e.to_string())?;
            ensure(r.is_ok() == oracle, || format!("validator and oracle disagree at {:?}", planted))?;
            if oracle {
                continue;
            }
            controls += 1;
            let localized = r.violations.iter().any(|v| planted.iter().all(|p| v.witness.contains(p)));
            ensure(localized, || format!("no witness names {:?}:\n{}", planted, r))?;
        }
    }
    Ok(controls)
}

fn implication_controls(mode: AxiomMode) -> Result<usize, String> {
    let suite = builtin_suite(match mode {
        AxiomMode::Leia => SuiteName::Def31,
        AxiomMode::Eia => SuiteName::Def52,
    });
    let mut controls = 0;
    for e in up_to(5) {
        let t = match mode {
            AxiomMode::Leia => match natural_implication_table(&e) {
                Ok(t) => t,
                Err(_) => continue,
            },
            AxiomMode::Eia => set_implication_table(&e),
        };
        for x in t.elements() {
            for y in t.elements() {
                for v in t.elements() {
                    let cell = ElementSet::from([v]);
                    if t.entry(x, y) == &cell {
                        continue;
                    }
                    let mut m = t.clone();
                    m.set_entry(x, y, cell).map_err(|e| e.to_string())?;
                    let oracle = suite.quasi_identities().all(|q| check_quasiidentity(&m, q).holds());
                    let r = validate_implication_axioms(&m, mode).map_err(|e| e.to_string())?;
                    ensure(r.passed() == oracle, || format!("validator and suite disagree at ({}, {})", x, y))?;
                    if oracle {
                        continue;
                    }
                    controls += 1;
                    // A witness that fails on the mutant but held on the
                    // original must read the planted cell.
                    for c in r.failed_clauses() {
                        let entry = suite.entry(&c.tag).ok_or_else(|| format!("no suite entry {}", c.tag))?;
                        for w in &c.failures {
                            let confirmed = entry.parts.iter().any(|q| common::instance_fails(q, &m, &w.bindings));
                            let fresh = !entry.parts.iter().any(|q| common::instance_fails(q, &t, &w.bindings));
                            ensure(confirmed && fresh, || {
                                format!("{} witness {:?} at cell ({}, {}) not confirmed", c.tag, w.bindings, x, y)
                            })?;
                        }
                    }
                }
            }
        }
    }
    Ok(controls)
}

fn derivation_controls() -> Result<usize, String> {
    let lib = corpus::corpus();
    let mut controls = 0;
    for (id, d) in lib.iter() {
        for k in 0..d.lines.len() {
            let mut mutants = Vec::new();
            let mut m = d.clone();
            m.lines[k].formula = Term::imp(m.lines[k].formula.clone(), Term::Zero);
            mutants.push(m);
            let mut m = d.clone();
            let changed = match &mut m.lines[k].just {
                Justification::Rule { premises, .. } => {
                    premises[0] = k + 1;
                    true
                }
                Justification::Hypothesis { index } => {
                    *index = d.hypotheses.len() + 1;
                    true
                }
                Justification::Axiom { subst, .. } | Justification::Lemma { subst, .. } => {
                    match subst.values_mut().next() {
                        Some(v) => {
                            *v = Term::imp(v.clone(), v.clone());
                            true
                        }
                        None => false,
                    }
                }
            };
            if changed {
                mutants.push(m);
            }
            for m in mutants {
                controls += 1;
                match check_derivation(&m, &lib) {
                    CheckResult::Invalid { line, .. } if line == k + 1 => {}
                    other => return Err(format!("{} line {}: {}", id, k + 1, other)),
                }
            }
        }
    }
    Ok(controls)
}

fn criterion_7() -> Outcome {
    let effect = effect_controls()?;
    let leia = implication_controls(AxiomMode::Leia)?;
    let eia = implication_controls(AxiomMode::Eia)?;
    let proofs = derivation_controls()?;
    Ok(format!(
        "rejected and localized: {} effect, {} lattice implication, {} general implication, {} derivation mutants",
        effect, leia, eia, proofs
    ))
}

#[test]
fn acceptance_criteria() {
    let criteria: [(&str, fn() -> Outcome); 7] = [
        ("exhaustive lattice suite", criterion_1),
        ("exhaustive general suite", criterion_2),
        ("lattice coincidence", criterion_3),
        ("proof corpus", criterion_4),
        ("rule and axiom soundness", criterion_5),
        ("enumerator integrity", criterion_6),
        ("negative controls", criterion_7),
    ];
    let mut failed = Vec::new();
    let mut out = std::io::stdout().lock();
    for (i, (name, f)) in criteria.iter().enumerate() {
        let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|_| Err("panicked".into()));
        let line = match &outcome {
            Ok(msg) => format!("criterion {} PASS {}: {}", i + 1, name, msg),
            Err(msg) => {
                failed.push(i + 1);
                format!("criterion {} FAIL {}: {}", i + 1, name, msg)
            }
        };
        writeln!(out, "{}", line).unwrap();
    }
    assert!(failed.is_empty(), "failed criteria: {:?}", failed);
}
