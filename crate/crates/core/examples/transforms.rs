//! Move between effect algebras and implication algebras and back, and
//! check the implication axiom lists on the way.

use effect_workbench::cli::render_table;
use effect_workbench::models;
use effect_workbench::transforms::{
    effect_to_implication, implication_to_effect, round_trip_check, table_to_effect,
    validate_implication_axioms, AxiomMode, ImplicationAlgebra, RoundTripInput,
};

fn main() {
    let c4 = models::c4();
    let il = effect_to_implication(&c4);
    println!("IL(C4):\n{}", render_table(&il));
    println!("{}", validate_implication_axioms(&il, AxiomMode::Leia).unwrap());

    let i = ImplicationAlgebra::try_from(&il).unwrap();
    let back = implication_to_effect(&i).unwrap();
    println!("EL(IL(C4)) = C4: {}", back.same_tables(&c4));
    println!("{}", round_trip_check(&RoundTripInput::Effect(c4)).unwrap());

    // A table that is not an implication algebra: swap two cells of IL(B4).
    let mut bad = effect_to_implication(&models::b4());
    let (x, y) = (1, 2);
    let cell = bad.entry(y, x).clone();
    bad.set_entry(x, y, cell).unwrap();
    println!("{}", validate_implication_axioms(&bad, AxiomMode::Eia).unwrap());
    match table_to_effect(&bad) {
        Ok(e) => println!("still gives an effect algebra of size {}", e.size()),
        Err(err) => println!("{err}"),
    }
}
