//! The shipped derivations: the derived theorems (a)-(j) of system A and
//! (a)-(d) of system B.
//!
//! Variables `p`, `q`, `r` stand for the schematic letters. Every
//! biconditional is split into two fixtures suffixed `_fwd` and `_bwd`.
//! Fixtures are listed in dependency order: a `Lemma` line only cites
//! fixtures that come earlier.

use crate::proof::{Builder, Derivation, FixtureLibrary, ProofError, Rule, Schema, System};

type Step = fn(&mut Builder) -> Result<(), ProofError>;

struct Recipe {
    id: &'static str,
    system: System,
    hypotheses: &'static [&'static str],
    build: Step,
}

// p -> q, q -> r |- p -> r
fn transitivity(b: &mut Builder) -> Result<(), ProofError> {
    let h1 = b.hyp(1)?;
    let h2 = b.hyp(2)?;
    let s = b.rule(Rule::Sf, &[h1], Some("(q -> r) -> (p -> r)"))?;
    b.rule(Rule::MP, &[h2, s], None)?;
    Ok(())
}

fn th9b(b: &mut Builder) -> Result<(), ProofError> {
    let a = b.axiom(Schema::A1, "1 -> (p -> 1)")?;
    let one = b.axiom(Schema::A3, "0 -> 0")?;
    b.rule(Rule::MP, &[one, a], None)?;
    Ok(())
}

// |- q -> (p -> p), the step before substituting a theorem for q
fn th9c_aux(b: &mut Builder) -> Result<(), ProofError> {
    let l1 = b.axiom(Schema::A1, "q -> ((p -> q) -> q)")?;
    let l2 = b.axiom(Schema::A1, "p -> (q -> p)")?;
    let l3 = b.rule(Rule::Sf, &[l2], Some("((q -> p) -> p) -> (p -> p)"))?;
    let l4 = b.axiom(Schema::A2, "((p -> q) -> q) -> ((q -> p) -> p)")?;
    let l5 = b.rule(Rule::Sf, &[l4], Some("(((q -> p) -> p) -> (p -> p)) -> (((p -> q) -> q) -> (p -> p))"))?;
    let l6 = b.rule(Rule::MP, &[l3, l5], None)?;
    let l7 = b.rule(Rule::Sf, &[l1], Some("(((p -> q) -> q) -> (p -> p)) -> (q -> (p -> p))"))?;
    b.rule(Rule::MP, &[l6, l7], None)?;
    Ok(())
}

fn th9c(b: &mut Builder) -> Result<(), ProofError> {
    let l1 = b.lemma("th9c_aux", "1 -> (p -> p)")?;
    let l2 = b.axiom(Schema::A3, "0 -> 0")?;
    b.rule(Rule::MP, &[l2, l1], None)?;
    Ok(())
}

// |- q -> ((q -> p) -> p)
fn th9d(b: &mut Builder) -> Result<(), ProofError> {
    let l1 = b.axiom(Schema::A1, "q -> ((p -> q) -> q)")?;
    let l2 = b.axiom(Schema::A2, "((p -> q) -> q) -> ((q -> p) -> p)")?;
    let l3 = b.rule(Rule::Sf, &[l1], Some("(((p -> q) -> q) -> ((q -> p) -> p)) -> (q -> ((q -> p) -> p))"))?;
    b.rule(Rule::MP, &[l2, l3], None)?;
    Ok(())
}

fn th9e_fwd(b: &mut Builder) -> Result<(), ProofError> {
    let l1 = b.axiom(Schema::A2, "~~p -> ((0 -> p) -> p)")?;
    let l2 = b.lemma("th9d", "(0 -> p) -> (((0 -> p) -> p) -> p)")?;
    let l3 = b.axiom(Schema::A3, "0 -> p")?;
    let l4 = b.rule(Rule::MP, &[l3, l2], None)?;
    let l5 = b.rule(Rule::Sf, &[l1], Some("(((0 -> p) -> p) -> p) -> (~~p -> p)"))?;
    b.rule(Rule::MP, &[l4, l5], None)?;
    Ok(())
}

fn th9e_bwd(b: &mut Builder) -> Result<(), ProofError> {
    b.lemma("th9d", "p -> ~~p")?;
    Ok(())
}

fn th9f_fwd(b: &mut Builder) -> Result<(), ProofError> {
    let h = b.hyp(1)?;
    b.rule(Rule::R1, &[h], None)?;
    Ok(())
}

// p -> q |- (q -> p) -> (~p -> ~q); the double negation laws are cited as
// `fwd`/`bwd`, which are lemmas in system A and axiom B3 in system B
fn contraposition_bwd(b: &mut Builder, dn: &dyn Fn(&mut Builder, &str) -> Result<usize, ProofError>) -> Result<(), ProofError> {
    let h = b.hyp(1)?;
    let l2 = b.rule(Rule::Sf, &[h], Some("~q -> ~p"))?;
    let l3 = b.rule(Rule::R1, &[l2], None)?;
    let l4 = dn(b, "p -> ~~p")?;
    let l5 = dn(b, "~~p -> p")?;
    let l6 = b.rule(Rule::WPf, &[l4, l5], Some("(q -> p) -> (q -> ~~p)"))?;
    let l7 = dn(b, "~~q -> q")?;
    let l8 = b.rule(Rule::Sf, &[l7], Some("(q -> ~~p) -> (~~q -> ~~p)"))?;
    let l9 = b.rule(Rule::Sf, &[l6], Some("((q -> ~~p) -> (~~q -> ~~p)) -> ((q -> p) -> (~~q -> ~~p))"))?;
    let l10 = b.rule(Rule::MP, &[l8, l9], None)?;
    let l11 = b.rule(Rule::Sf, &[l10], Some("((~~q -> ~~p) -> (~p -> ~q)) -> ((q -> p) -> (~p -> ~q))"))?;
    b.rule(Rule::MP, &[l3, l11], None)?;
    Ok(())
}

fn th9f_bwd(b: &mut Builder) -> Result<(), ProofError> {
    contraposition_bwd(b, &|b, f| {
        let id = if f.starts_with("~~") { "th9e_fwd" } else { "th9e_bwd" };
        b.lemma(id, f)
    })
}

fn th9g_1(b: &mut Builder) -> Result<(), ProofError> {
    b.axiom(Schema::A1, "q -> (p \\/ q)")?;
    Ok(())
}

fn th9g_2_fwd(b: &mut Builder) -> Result<(), ProofError> {
    b.axiom(Schema::A2, "(p \\/ q) -> (q \\/ p)")?;
    Ok(())
}

fn th9g_2_bwd(b: &mut Builder) -> Result<(), ProofError> {
    b.axiom(Schema::A2, "(q \\/ p) -> (p \\/ q)")?;
    Ok(())
}

// p -> q, r -> q |- (p \/ r) -> q
fn th9h(b: &mut Builder) -> Result<(), ProofError> {
    let h1 = b.hyp(1)?;
    let h2 = b.hyp(2)?;
    let l3 = b.rule(Rule::Sf, &[h1], Some("(q -> r) -> (p -> r)"))?;
    let l4 = b.rule(Rule::Sf, &[l3], Some("(p \\/ r) -> (q \\/ r)"))?;
    let l5 = b.axiom(Schema::A2, "(q \\/ r) -> (r \\/ q)")?;
    let l6 = b.lemma("th9d", "(r -> q) -> ((r \\/ q) -> q)")?;
    let l7 = b.rule(Rule::MP, &[h2, l6], None)?;
    let l8 = b.rule(Rule::Sf, &[l4], Some("((q \\/ r) -> (r \\/ q)) -> ((p \\/ r) -> (r \\/ q))"))?;
    let l9 = b.rule(Rule::MP, &[l5, l8], None)?;
    let l10 = b.rule(Rule::Sf, &[l9], Some("((r \\/ q) -> q) -> ((p \\/ r) -> q)"))?;
    b.rule(Rule::MP, &[l7, l10], None)?;
    Ok(())
}

fn th9i_fwd(b: &mut Builder) -> Result<(), ProofError> {
    b.lemma("th9d", "(p -> q) -> ((p \\/ q) -> q)")?;
    Ok(())
}

fn th9i_bwd(b: &mut Builder) -> Result<(), ProofError> {
    let l1 = b.axiom(Schema::A2, "((p \\/ q) -> q) -> (q \\/ (p -> q))")?;
    let l2 = b.axiom(Schema::A1, "q -> (p -> q)")?;
    let l3 = b.lemma("th9d", "(q -> (p -> q)) -> ((q \\/ (p -> q)) -> (p -> q))")?;
    let l4 = b.rule(Rule::MP, &[l2, l3], None)?;
    let l5 = b.rule(Rule::Sf, &[l1], Some("((q \\/ (p -> q)) -> (p -> q)) -> (((p \\/ q) -> q) -> (p -> q))"))?;
    b.rule(Rule::MP, &[l4, l5], None)?;
    Ok(())
}

fn th9j_fwd(b: &mut Builder) -> Result<(), ProofError> {
    let l1 = b.axiom(Schema::A1, "p -> (q \\/ p)")?;
    let l2 = b.rule(Rule::R1, &[l1], None)?;
    let l3 = b.lemma("th9i_bwd", "((q \\/ p) -> p) -> (q -> p)")?;
    let l4 = b.rule(Rule::Sf, &[l2], Some("(((q \\/ p) -> p) -> (q -> p)) -> ((~p -> ~(q \\/ p)) -> (q -> p))"))?;
    b.rule(Rule::MP, &[l3, l4], None)?;
    Ok(())
}

fn th9j_bwd(b: &mut Builder) -> Result<(), ProofError> {
    let l1 = b.lemma("th9i_fwd", "(q -> p) -> ((q \\/ p) -> p)")?;
    let l2 = b.axiom(Schema::A1, "p -> (q \\/ p)")?;
    let l3 = b.splice("th9f_bwd", &[("p", "p"), ("q", "q \\/ p")], &[l2])?;
    let l4 = b.rule(Rule::Sf, &[l1], Some("(((q \\/ p) -> p) -> (~p -> ~(q \\/ p))) -> ((q -> p) -> (~p -> ~(q \\/ p)))"))?;
    b.rule(Rule::MP, &[l3, l4], None)?;
    Ok(())
}

fn sec6b(b: &mut Builder) -> Result<(), ProofError> {
    let a = b.axiom(Schema::B1, "1 -> (p -> 1)")?;
    let one = b.axiom(Schema::B4, "0 -> 0")?;
    b.rule(Rule::MP, &[one, a], None)?;
    Ok(())
}

fn sec6c_fwd(b: &mut Builder) -> Result<(), ProofError> {
    b.axiom(Schema::B3, "~~p -> p")?;
    Ok(())
}

fn sec6c_bwd(b: &mut Builder) -> Result<(), ProofError> {
    b.axiom(Schema::B3, "p -> ~~p")?;
    Ok(())
}

fn sec6d_bwd(b: &mut Builder) -> Result<(), ProofError> {
    contraposition_bwd(b, &|b, f| b.axiom(Schema::B3, f))
}

const RECIPES: &[Recipe] = &[
    Recipe { id: "th9a", system: System::A, hypotheses: &["p -> q", "q -> r"], build: transitivity },
    Recipe { id: "th9b", system: System::A, hypotheses: &[], build: th9b },
    Recipe { id: "th9c_aux", system: System::A, hypotheses: &[], build: th9c_aux },
    Recipe { id: "th9c", system: System::A, hypotheses: &[], build: th9c },
    Recipe { id: "th9d", system: System::A, hypotheses: &[], build: th9d },
    Recipe { id: "th9e_fwd", system: System::A, hypotheses: &[], build: th9e_fwd },
    Recipe { id: "th9e_bwd", system: System::A, hypotheses: &[], build: th9e_bwd },
    Recipe { id: "th9f_fwd", system: System::A, hypotheses: &["p -> q"], build: th9f_fwd },
    Recipe { id: "th9f_bwd", system: System::A, hypotheses: &["p -> q"], build: th9f_bwd },
    Recipe { id: "th9g_1", system: System::A, hypotheses: &[], build: th9g_1 },
    Recipe { id: "th9g_2_fwd", system: System::A, hypotheses: &[], build: th9g_2_fwd },
    Recipe { id: "th9g_2_bwd", system: System::A, hypotheses: &[], build: th9g_2_bwd },
    Recipe { id: "th9h", system: System::A, hypotheses: &["p -> q", "r -> q"], build: th9h },
    Recipe { id: "th9i_fwd", system: System::A, hypotheses: &[], build: th9i_fwd },
    Recipe { id: "th9i_bwd", system: System::A, hypotheses: &[], build: th9i_bwd },
    Recipe { id: "th9j_fwd", system: System::A, hypotheses: &[], build: th9j_fwd },
    Recipe { id: "th9j_bwd", system: System::A, hypotheses: &[], build: th9j_bwd },
    Recipe { id: "sec6a", system: System::B, hypotheses: &["p -> q", "q -> r"], build: transitivity },
    Recipe { id: "sec6b", system: System::B, hypotheses: &[], build: sec6b },
    Recipe { id: "sec6c_fwd", system: System::B, hypotheses: &[], build: sec6c_fwd },
    Recipe { id: "sec6c_bwd", system: System::B, hypotheses: &[], build: sec6c_bwd },
    Recipe { id: "sec6d_fwd", system: System::B, hypotheses: &["p -> q"], build: th9f_fwd },
    Recipe { id: "sec6d_bwd", system: System::B, hypotheses: &["p -> q"], build: sec6d_bwd },
];

/// Ids of the shipped fixtures in dependency order.
pub fn fixture_ids() -> Vec<&'static str> {
    RECIPES.iter().map(|s| s.id).collect()
}

/// Build the whole corpus.
pub fn corpus() -> FixtureLibrary {
    let mut lib = FixtureLibrary::new();
    for recipe in RECIPES {
        let d = build(&lib, recipe).unwrap_or_else(|e| panic!("fixture {}: {}", recipe.id, e));
        lib.insert(recipe.id, d);
    }
    lib
}

fn build(lib: &FixtureLibrary, recipe: &Recipe) -> Result<Derivation, ProofError> {
    let mut b = Builder::new(lib, recipe.system, recipe.hypotheses)?;
    (recipe.build)(&mut b)?;
    Ok(b.finish())
}

/// The fixture `id` from a fresh corpus.
pub fn fixture(id: &str) -> Option<Derivation> {
    corpus().get(id).cloned()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::proof::{check_derivation, inline_lemmas, CheckResult};
    use crate::term::t;

    #[test]
    fn every_fixture_verifies() {
        let lib = corpus();
        for (id, d) in lib.iter() {
            assert_eq!(check_derivation(d, &lib), CheckResult::Verified, "{id}\n{d}");
        }
    }

    #[test]
    fn conclusions_are_the_stated_theorems() {
        let lib = corpus();
        let concl = |id: &str| lib.get(id).unwrap().conclusion.clone();
        assert_eq!(concl("th9b"), t("p -> 1"));
        assert_eq!(concl("th9c"), t("p -> p"));
        assert_eq!(concl("th9d"), t("q -> (q \\/ p)"));
        assert_eq!(concl("th9e_fwd"), t("~~p -> p"));
        assert_eq!(concl("th9f_bwd"), t("(q -> p) -> (~p -> ~q)"));
        assert_eq!(concl("th9h"), t("(p \\/ r) -> q"));
        assert_eq!(concl("th9i_bwd"), t("((p \\/ q) -> q) -> (p -> q)"));
        assert_eq!(concl("th9j_fwd"), t("(~p -> ~(q \\/ p)) -> (q -> p)"));
        assert_eq!(concl("th9j_bwd"), t("(q -> p) -> (~p -> ~(q \\/ p))"));
        assert_eq!(concl("sec6d_bwd"), t("(q -> p) -> (~p -> ~q)"));
    }

    #[test]
    fn lemmas_can_be_inlined() {
        let lib = corpus();
        for (id, d) in lib.iter() {
            let flat = inline_lemmas(d, &lib).unwrap();
            assert!(!flat.uses_lemmas(), "{id}");
            assert_eq!(check_derivation(&flat, &FixtureLibrary::new()), CheckResult::Verified, "{id}\n{flat}");
        }
    }
}
