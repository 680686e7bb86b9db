//! Identities, quasi-identities and semantic consequence over finite models.

use effect_workbench::enumerate::{enumerate_up_to, EnumerateOptions};
use effect_workbench::implication::set_implication_table;
use effect_workbench::logic::{
    builtin_suite, check_identity, check_quasiidentity, semantic_consequence, Identity, QuasiIdentity,
    SuiteName, Verdict,
};
use effect_workbench::models;
use effect_workbench::transforms::effect_to_implication;

fn show(v: &Verdict) -> String {
    match v.countermodel() {
        None => "holds".into(),
        Some(c) => format!("fails at {}", c.render(None)),
    }
}

fn main() {
    let b4 = effect_to_implication(&models::b4());
    let id: Identity = "x -> (y -> x) == 1".parse().unwrap();
    println!("{id} on b4: {}", show(&check_identity(&b4, &id)));
    let id: Identity = "(x -> y) -> y == (y -> x) -> x".parse().unwrap();
    println!("{id} on b4: {}", show(&check_identity(&b4, &id)));
    let q: QuasiIdentity = "x -> y == 1, y -> x == 1 => x == y".parse().unwrap();
    println!("{q} on b4: {}", show(&check_quasiidentity(&b4, &q)));
    let q: QuasiIdentity = "x -> y == 1 => y -> x == 1".parse().unwrap();
    println!("{q} on b4: {}", show(&check_quasiidentity(&b4, &q)));

    println!();
    for name in [SuiteName::Th10, SuiteName::Sec6] {
        for (label, v) in builtin_suite(name).run(&b4) {
            println!("{name} {label}: {}", show(&v));
        }
    }

    let tables: Vec<_> = enumerate_up_to(4, &EnumerateOptions::default())
        .unwrap()
        .iter()
        .map(set_implication_table)
        .collect();
    let sigma: Vec<Identity> = vec!["p == 1".parse().unwrap(), "p -> q == 1".parse().unwrap()];
    for goal in ["q == 1", "q -> p == 1"] {
        let goal: Identity = goal.parse().unwrap();
        let v = semantic_consequence(&tables, &sigma, &goal).unwrap();
        println!("p = 1, p -> q = 1 |= {goal} over sizes <= 4: {}", show(&v));
    }
}
