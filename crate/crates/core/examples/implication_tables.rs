//! Natural, Sasaki and set-valued implication tables side by side.

use effect_workbench::cli::render_table;
use effect_workbench::enumerate::{enumerate_effect_algebras, enumerate_up_to, EnumerateOptions};
use effect_workbench::implication::{
    natural_implication_table, sasaki_implication_table, set_implication_table,
};
use effect_workbench::models;

fn main() {
    for e in enumerate_up_to(6, &EnumerateOptions::default()).unwrap().iter().filter(|e| e.is_lattice()) {
        let natural = natural_implication_table(e).unwrap();
        let sasaki = sasaki_implication_table(e).unwrap();
        if natural.diff(&sasaki).is_empty() {
            continue;
        }
        println!("natural:\n{}", render_table(&natural));
        println!("sasaki:\n{}", render_table(&sasaki));
        println!("cells where they differ: {:?}\n", natural.diff(&sasaki));
        break;
    }

    let hs = models::hs();
    let set = set_implication_table(&hs);
    println!("hs, set-valued equals natural: {}", set.same_cells(&natural_implication_table(&hs).unwrap()));

    // The smallest non-lattice algebras have genuinely set-valued cells.
    for e in enumerate_effect_algebras(6).unwrap().into_iter().filter(|e| !e.is_lattice()) {
        let t = set_implication_table(&e);
        println!("\nnon-lattice, max |x -> y| = {}:\n{}", t.max_cell_cardinality(), render_table(&t));
    }
}
