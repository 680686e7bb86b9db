//! Check derivations from the corpus, build one with the builder, and audit
//! it against finite models.

use effect_workbench::corpus::corpus;
use effect_workbench::enumerate::{enumerate_up_to, EnumerateOptions};
use effect_workbench::implication::set_implication_table;
use effect_workbench::proof::{check_derivation, inline_lemmas, soundness_audit, Builder, Rule, System};
use effect_workbench::term::t;

fn main() {
    let lib = corpus();
    for (id, d) in lib.iter() {
        println!("{id:<12} {} lines  {}", d.lines.len(), check_derivation(d, &lib));
    }

    let th9j = lib.get("th9j_bwd").unwrap();
    println!("\n{th9j}");
    let flat = inline_lemmas(th9j, &lib).unwrap();
    println!("without lemmas: {} lines, {}", flat.lines.len(), check_derivation(&flat, &lib));

    // p -> q, q -> r |- (r -> s) -> (p -> s), by prefixing twice.
    let mut b = Builder::new(&lib, System::A, &["p -> q", "q -> r"]).unwrap();
    let h1 = b.hyp(1).unwrap();
    let h2 = b.hyp(2).unwrap();
    let l3 = b.splice("th9a", &[], &[h1, h2]).unwrap();
    b.rule(Rule::Sf, &[l3], Some("(r -> s) -> (p -> s)")).unwrap();
    let d = b.finish();
    println!("\n{d}{}", check_derivation(&d, &lib));

    let models: Vec<_> = enumerate_up_to(4, &EnumerateOptions::default())
        .unwrap()
        .iter()
        .map(set_implication_table)
        .collect();
    println!("{}", soundness_audit(&d, &models));

    let mut bad = d.clone();
    bad.lines[2].formula = t("p -> s");
    println!("after editing line 3: {}", check_derivation(&bad, &lib));
}
