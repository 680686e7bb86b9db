//! Validate the named models, show their induced orders, and break one on
//! purpose to see a localized violation.

use effect_workbench::algebra::{check_basic_laws, induced_order, validate_effect_axioms};
use effect_workbench::models;

fn main() {
    for name in models::NAMES {
        let e = models::by_name(name).unwrap();
        let laws = check_basic_laws(e.tables()).unwrap();
        let order = induced_order(&e);
        println!(
            "{name}: {} elements, lattice: {}, basic laws: {}",
            e.size(),
            order.is_lattice,
            if laws.passed() { "pass" } else { "FAIL" }
        );
    }

    let mut t = models::b4().into_tables();
    t.plus[1][2] = None;
    let report = validate_effect_axioms(&t).unwrap();
    println!("\nb4 with a+b removed on one side:\n{report}");
}
