//! Bounded backward proof search in both systems.

use effect_workbench::corpus::corpus;
use effect_workbench::proof::{check_derivation, search_proof, SearchBound, System};
use effect_workbench::term::{t, Term};

fn main() {
    let goals: [(System, &[&str], &str); 6] = [
        (System::A, &[], "p -> 1"),
        (System::A, &["p -> q"], "(q -> r) -> (p -> r)"),
        (System::A, &["p", "p -> q", "q -> r"], "r"),
        (System::B, &[], "~~p -> p"),
        (System::B, &["p -> q", "q -> p"], "(r -> p) -> (r -> q)"),
        (System::A, &[], "p"),
    ];
    let lib = corpus();
    for (system, hyps, goal) in goals {
        let hyps: Vec<Term> = hyps.iter().map(|h| t(h)).collect();
        match search_proof(system, &hyps, &t(goal), SearchBound::default()) {
            Ok(d) => println!("{d}{}\n", check_derivation(&d, &lib)),
            Err(e) => println!("system {system}: {goal}: {e}\n"),
        }
    }
}
