use super::*;
use crate::logic::{parse_problem, RecDef};
use crate::natproofs::fo_abstraction;
use indexmap::IndexMap;

/// Base model with a next-pointer graph and a nil constant; recursive
/// symbols are left for `lfp_eval`.
fn pointer_base(next: &[usize], nil: usize) -> FiniteModel {
    let mut m = FiniteModel::empty(next.len(), (-2, 8));
    m.consts.insert("nil".into(), Value::Elem(nil));
    let graph: IndexMap<Vec<Value>, Value> = next
        .iter()
        .enumerate()
        .map(|(i, j)| (vec![Value::Elem(i)], Value::Elem(*j)))
        .collect();
    m.funcs.insert("n".into(), graph);
    m
}

fn list_defs() -> IndexMap<String, RecDef> {
    parse_problem(crate::logic::tests::LIST_PROBLEM).unwrap().defs
}

/// Oracle: an element satisfies list iff it reaches nil through `n`
/// without looping.
fn reaches_nil(next: &[usize], nil: usize, mut x: usize) -> bool {
    for _ in 0..=next.len() {
        if x == nil {
            return true;
        }
        x = next[x];
    }
    false
}

#[test]
fn lfp_on_chain_matches_reachability() {
    // 0 → 1 → 2(=nil), nil self-links
    let next = [1, 2, 2];
    let m = lfp_eval(&pointer_base(&next, 2), &list_defs()).unwrap();
    for e in 0..3 {
        let expected = reaches_nil(&next, 2, e);
        assert_eq!(m.rels["list"][&vec![Value::Elem(e)]], expected, "element {e}");
    }
    assert!(m.total);
}

#[test]
fn lfp_on_cycle_derives_only_nil() {
    // 0 → 1 → 0 cycle, nil = 2 separate
    let next = [1, 0, 2];
    let m = lfp_eval(&pointer_base(&next, 2), &list_defs()).unwrap();
    assert!(!m.rels["list"][&vec![Value::Elem(0)]]);
    assert!(!m.rels["list"][&vec![Value::Elem(1)]]);
    assert!(m.rels["list"][&vec![Value::Elem(2)]]);
}

#[test]
fn eval_on_lfp_model_is_two_valued() {
    let next = [1, 2, 2];
    let m = lfp_eval(&pointer_base(&next, 2), &list_defs()).unwrap();
    let f = crate::logic::parse_formula_str(
        "(list nil)",
        &parse_problem(crate::logic::tests::LIST_PROBLEM).unwrap().sig,
    )
    .unwrap();
    assert_eq!(m.holds(&f), TruthValue::True);
}

#[test]
fn undefined_point_evaluates_unknown() {
    let mut m = pointer_base(&[1, 2, 2], 2);
    // drop n(1) from the graph
    m.funcs.get_mut("n").unwrap().shift_remove(&vec![Value::Elem(1)]);
    m.rels.insert("list".into(), IndexMap::new());
    let sig = parse_problem(crate::logic::tests::LIST_PROBLEM).unwrap().sig;
    let atom = crate::logic::parse_formula_str("(list (n (n nil)))", &sig);
    // nil = element 2, n(2) = 2 defined, but the list table is empty
    assert_eq!(m.holds(&atom.unwrap()), TruthValue::Unknown);
    let deep = crate::logic::parse_formula_str("(= (n (n x)) nil)", &sig).unwrap();
    let (_, matrix) = deep.strip_forall();
    let mut assign = IndexMap::new();
    assign.insert("x".to_string(), Value::Elem(0));
    // n(n(0)) runs through the removed point n(1)
    assert_eq!(m.eval_formula(matrix, &assign), TruthValue::Unknown);
}

fn listlen_problem() -> crate::logic::Problem {
    parse_problem(
        "(foreground-sort Loc)(const nil Loc)(func n (Loc) Loc)\
         (define-rec (list (x Loc)) (or (= x nil) (list (n x))))\
         (define-recfun (listlen (x Loc)) Int (ite (= x nil) 0 (+ 1 (listlen (n x)))))\
         (goal (list nil))",
    )
    .unwrap()
}

/// Oracle: length of the nil-terminated path, −1 when there is none.
fn path_length(next: &[usize], nil: usize, mut x: usize) -> i64 {
    let mut len = 0i64;
    for _ in 0..=next.len() {
        if x == nil {
            return len;
        }
        x = next[x];
        len += 1;
    }
    -1
}

#[test]
fn listlen_on_chain_and_cycle() {
    let p = listlen_problem();
    let chain = [1, 2, 2];
    let m = lfp_eval(&pointer_base(&chain, 2), &p.defs).unwrap();
    for e in 0..3 {
        assert_eq!(
            m.funcs["listlen"][&vec![Value::Elem(e)]],
            Value::Int(path_length(&chain, 2, e)),
            "element {e}"
        );
    }
    let cycle = [1, 0, 2];
    let mc = lfp_eval(&pointer_base(&cycle, 2), &p.defs).unwrap();
    assert_eq!(mc.funcs["listlen"][&vec![Value::Elem(0)]], Value::Int(-1));
    assert_eq!(mc.funcs["listlen"][&vec![Value::Elem(1)]], Value::Int(-1));
    assert_eq!(mc.funcs["listlen"][&vec![Value::Elem(2)]], Value::Int(0));
}

#[test]
fn lfp_is_least_on_small_universes() {
    let p = listlen_problem();
    for next in [[1usize, 2, 2], [1, 0, 2], [0, 0, 2], [2, 2, 2]] {
        let m = lfp_eval(&pointer_base(&next, 2), &p.defs).unwrap();
        assert!(is_least_fixpoint(&m, &p.defs), "next = {next:?}");
    }
}


#[test]
fn gen_zero_models_is_empty() {
    let p = listlen_problem();
    let r = gen_true_models(&p.sig, &p.defs, &p.axioms, &[], 0, &GenConfig::default(), 7);
    assert!(r.models.is_empty());
    assert_eq!(r.requested, 0);
}

#[test]
fn generated_models_satisfy_abstraction_instances() {
    let p = parse_problem(crate::logic::tests::LIST_PROBLEM).unwrap();
    let cfg = GenConfig::default();
    let r = gen_true_models(&p.sig, &p.defs, &p.axioms, &[], 8, &cfg, 42);
    assert_eq!(r.models.len(), 8);
    let abs = fo_abstraction(&p.defs["list"]).unwrap();
    for m in &r.models {
        assert_eq!(m.holds(&abs), TruthValue::True);
    }
}

#[test]
fn generated_models_respect_lemma_constraints() {
    let p = parse_problem(crate::logic::tests::LIST_PROBLEM).unwrap();
    // force: every model must make list(nil) hold and list total on nil
    let lemma = crate::logic::parse_formula_str("(list (n nil))", &p.sig).unwrap();
    let cfg = GenConfig::default();
    let r = gen_true_models(&p.sig, &p.defs, &p.axioms, &[lemma.clone()], 6, &cfg, 43);
    for m in &r.models {
        assert_eq!(m.holds(&lemma), TruthValue::True);
    }
}

#[test]
fn generation_is_deterministic_under_seed() {
    let p = listlen_problem();
    let cfg = GenConfig::default();
    let a = gen_true_models(&p.sig, &p.defs, &p.axioms, &[], 5, &cfg, 11);
    let b = gen_true_models(&p.sig, &p.defs, &p.axioms, &[], 5, &cfg, 11);
    assert_eq!(a.models, b.models);
}

#[test]
fn eval_is_monotone_in_definedness() {
    // extending a partial model only resolves unknowns
    let sig = parse_problem(crate::logic::tests::LIST_PROBLEM).unwrap().sig;
    let partial = {
        let mut m = pointer_base(&[1, 2, 2], 2);
        m.funcs.get_mut("n").unwrap().shift_remove(&vec![Value::Elem(1)]);
        m.rels.insert(
            "list".into(),
            IndexMap::from([(vec![Value::Elem(2)], true)]),
        );
        m
    };
    let extended = {
        let mut m = pointer_base(&[1, 2, 2], 2);
        m.rels.insert(
            "list".into(),
            IndexMap::from([
                (vec![Value::Elem(2)], true),
                (vec![Value::Elem(1)], true),
                (vec![Value::Elem(0)], false),
            ]),
        );
        m
    };
    for text in [
        "(list nil)",
        "(list (n nil))",
        "(list (n (n x)))",
        "(or (list x) (= x nil))",
        "(and (list (n x)) (not (list x)))",
        "(=> (list x) (list (n x)))",
    ] {
        let f = crate::logic::parse_formula_str(text, &sig).unwrap();
        let (_, matrix) = f.strip_forall();
        for e in 0..3 {
            let mut assign = IndexMap::new();
            assign.insert("x".to_string(), Value::Elem(e));
            let before = partial.eval_formula(matrix, &assign);
            let after = extended.eval_formula(matrix, &assign);
            if before != TruthValue::Unknown {
                assert_eq!(before, after, "{text} at {e}");
            }
        }
    }
}

#[test]
fn universal_model_of_two_members() {
    let defs = list_defs();
    let m1 = lfp_eval(&pointer_base(&[1, 1], 1), &defs).unwrap();
    let m2 = lfp_eval(&pointer_base(&[0, 0], 0), &defs).unwrap();
    let u = UniversalModel::build(vec![m1.clone(), m2.clone()]).unwrap();
    assert_eq!(u.fg_size, 5); // 2 + 2 + ⊥
    assert_eq!(u.bot_elem, 4);

    // isolation: member-local atoms agree with the member
    for (mi, m) in [(0, &m1), (1, &m2)] {
        for e in 0..m.fg_size {
            let shared = UValue::Elem(u.offsets[mi] + e);
            assert_eq!(
                u.eval_rel("list", &[shared.clone()]),
                m.rels["list"][&vec![Value::Elem(e)]],
                "member {mi} element {e}"
            );
            let lifted = u.apply_func("n", &[shared]);
            let expect = u.lift(mi, &m.funcs["n"][&vec![Value::Elem(e)]]);
            assert_eq!(lifted, expect);
        }
    }

    // cross-member and ⊥ applications are absorbed
    assert_eq!(u.apply_func("n", &[UValue::Elem(u.bot_elem)]), UValue::Bot);
    assert!(!u.eval_rel("list", &[UValue::Elem(u.bot_elem)]));
}

#[test]
fn universal_model_single_member_isomorphic() {
    let defs = list_defs();
    let m = lfp_eval(&pointer_base(&[1, 2, 2], 2), &defs).unwrap();
    let u = UniversalModel::build(vec![m.clone()]).unwrap();
    assert_eq!(u.fg_size, m.fg_size + 1);
    for e in 0..m.fg_size {
        assert_eq!(
            u.eval_rel("list", &[UValue::Elem(e)]),
            m.rels["list"][&vec![Value::Elem(e)]]
        );
    }
}
