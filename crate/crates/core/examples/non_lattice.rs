//! The smallest effect algebras whose order is not a lattice: their
//! set-valued implication, the general axiom list, and which proof rules
//! survive the set lifting.

use effect_workbench::algebra::induced_order;
use effect_workbench::cli::render_table;
use effect_workbench::enumerate::{census, enumerate_effect_algebras, MinimalNonLattice};
use effect_workbench::implication::{check_implication_laws, set_implication_table};
use effect_workbench::logic::{check_identity, check_quasiidentity};
use effect_workbench::proof::{Rule, Schema};
use effect_workbench::transforms::{check_identity_11, validate_implication_axioms, AxiomMode};

fn main() {
    let report = census(6).unwrap();
    let MinimalNonLattice::Size(n) = report.minimal_non_lattice_size else {
        println!("no non-lattice algebra up to size 6");
        return;
    };
    for e in enumerate_effect_algebras(n).unwrap().into_iter().filter(|e| !e.is_lattice()) {
        let leq = induced_order(&e).leq;
        for x in e.elements() {
            for y in e.elements().filter(|&y| y > x) {
                let upper: Vec<usize> = e.elements().filter(|&z| leq[x][z] && leq[y][z]).collect();
                let minimal: Vec<usize> =
                    upper.iter().copied().filter(|&z| upper.iter().all(|&w| w == z || !leq[w][z])).collect();
                if minimal.len() > 1 {
                    println!("{x} and {y} have minimal upper bounds {minimal:?}");
                }
            }
        }
        let t = set_implication_table(&e);
        println!("{}", render_table(&t));
        println!("{}", validate_implication_axioms(&t, AxiomMode::Eia).unwrap());
        println!("{}", check_identity_11(&e));
        println!("{}", check_implication_laws(&e, &t).unwrap());
        for schema in Schema::ALL {
            let ok = schema.identities().iter().all(|id| check_identity(&t, id).holds());
            println!("axiom {schema:?}: {}", if ok { "holds" } else { "fails" });
        }
        for rule in Rule::ALL {
            match check_quasiidentity(&t, &rule.quasi_identity()).countermodel() {
                None => println!("rule {rule:?}: sound"),
                Some(c) => println!("rule {rule:?}: unsound at {}", c.render(None)),
            }
        }
    }
}
