use std::sync::OnceLock;

use proptest::prelude::*;

use effect_workbench::algebra::{relabel, EffectAlgebra};
use effect_workbench::corpus;
use effect_workbench::enumerate::{canonicalize, enumerate_up_to, EnumerateOptions};
use effect_workbench::implication::{set_implication_table, ImplicationTable};
use effect_workbench::logic::{check_identity, evaluate_term, translate, Identity, Translation};
use effect_workbench::proof::{check_derivation, Derivation, Justification, ProofLine, Schema};
use effect_workbench::term::{Substitution, Term};
use effect_workbench::transforms::{round_trip_check, RoundTripInput};

fn algebras() -> &'static [EffectAlgebra] {
    static ALL: OnceLock<Vec<EffectAlgebra>> = OnceLock::new();
    ALL.get_or_init(|| enumerate_up_to(6, &EnumerateOptions::default()).unwrap())
}

fn tables() -> &'static [ImplicationTable] {
    static ALL: OnceLock<Vec<ImplicationTable>> = OnceLock::new();
    ALL.get_or_init(|| algebras().iter().map(set_implication_table).collect())
}

fn arb_term() -> impl Strategy<Value = Term> {
    let leaf = prop_oneof![Just(Term::Zero), prop::sample::select(vec!["p", "q"]).prop_map(Term::var)];
    leaf.prop_recursive(4, 24, 2, |inner| (inner.clone(), inner).prop_map(|(a, b)| Term::imp(a, b)))
}

fn arb_model() -> impl Strategy<Value = usize> {
    0..algebras().len()
}

fn arb_permutation(n: usize) -> impl Strategy<Value = Vec<usize>> {
    Just((0..n).collect::<Vec<_>>()).prop_shuffle()
}

/// Insert `extra` before line `at` (0-based) and renumber premises.
fn insert_line(d: &Derivation, at: usize, extra: ProofLine) -> Derivation {
    let mut out = d.clone();
    for line in &mut out.lines {
        if let Justification::Rule { premises, .. } = &mut line.just {
            for p in premises.iter_mut() {
                if *p > at {
                    *p += 1;
                }
            }
        }
    }
    out.lines.insert(at, extra);
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn every_term_equals_itself(phi in arb_term(), m in arb_model()) {
        let id = Identity::new(phi.clone(), phi);
        prop_assert!(check_identity(&tables()[m], &id).holds());
    }

    #[test]
    fn lattice_models_evaluate_to_singletons(phi in arb_term(), m in arb_model(), p in 0usize..6, q in 0usize..6) {
        let t = &tables()[m];
        prop_assume!(algebras()[m].is_lattice());
        let asg = [("p".to_string(), p % t.size), ("q".to_string(), q % t.size)].into();
        prop_assert_eq!(evaluate_term(&phi, t, &asg).unwrap().len(), 1);
    }

    #[test]
    fn translations_agree_on_lattice_models(phi in arb_term(), m in arb_model()) {
        prop_assume!(algebras()[m].is_lattice());
        let t = &tables()[m];
        let a = check_identity(t, &translate(&phi, Translation::EqualsOne)).holds();
        let b = check_identity(t, &translate(&phi, Translation::SelfImplication)).holds();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn relabelling_preserves_canonical_form_and_round_trips(
        (m, perm) in arb_model().prop_flat_map(|m| (Just(m), arb_permutation(algebras()[m].size())))
    ) {
        let e = &algebras()[m];
        let moved = EffectAlgebra::new(relabel(e.tables(), &perm)).unwrap();
        prop_assert_eq!(canonicalize(&moved), canonicalize(e));
        let r = round_trip_check(&RoundTripInput::Effect(moved.clone())).unwrap();
        prop_assert!(r.passed(), "{}", r);
        let r = round_trip_check(&RoundTripInput::Implication(set_implication_table(&moved))).unwrap();
        prop_assert!(r.passed(), "{}", r);
    }

    #[test]
    fn unused_lines_do_not_break_derivations(
        k in 0usize..23, at in 0usize..64, phi in arb_term(), psi in arb_term()
    ) {
        let lib = corpus::corpus();
        let ids: Vec<&str> = lib.ids().collect();
        let d = lib.get(ids[k % ids.len()]).unwrap();
        let at = at % d.lines.len();
        let schema = d.system.axioms()[0];
        let s: Substitution = [("phi".to_string(), phi), ("psi".to_string(), psi)].into();
        let formula = effect_workbench::proof::instantiate_schema(schema, &s).unwrap().remove(0);
        let extra = ProofLine { formula, just: Justification::Axiom { schema, subst: s } };
        let longer = insert_line(d, at, extra);
        prop_assert!(check_derivation(&longer, &lib).is_verified(), "{}", check_derivation(&longer, &lib));
        prop_assert!(matches!(schema, Schema::A1 | Schema::B1));
    }
}
