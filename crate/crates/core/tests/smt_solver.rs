//! Solver-in-the-loop checks for the SMT client. These need the
//! bundled solver (`tools/z3smt`, see the README) or a `z3` binary on
//! the path.

use lemsyn::logic::{parse_formula_str, parse_problem, Problem, Sort, Term};
use lemsyn::model::TruthValue;
use lemsyn::natproofs::{fo_abstraction, ground_terms, instantiate};
use lemsyn::smt::{
    check_sat, discovery_roots, extract_finite_model, SatResult, SolverConfig, UnknownReason,
};

fn solver() -> SolverConfig {
    SolverConfig::discover(&discovery_roots(env!("CARGO_MANIFEST_DIR")))
        .expect("no SMT solver available; run `npm install` in tools/z3smt")
}

fn list_problem() -> Problem {
    parse_problem(
        "(foreground-sort Loc)(const nil Loc)(const c Loc)(func n (Loc) Loc)\
         (define-rec (list (x Loc)) (or (= x nil) (list (n x))))\
         (goal (list nil))",
    )
    .unwrap()
}

#[test]
fn contradiction_is_unsat() {
    let p = list_problem();
    let f = parse_formula_str("(list nil)", &p.sig).unwrap();
    let g = parse_formula_str("(not (list nil))", &p.sig).unwrap();
    let r = check_sat(&p.sig, &[f, g], &solver()).unwrap();
    assert!(r.is_unsat());
}

#[test]
fn satisfiable_disequality() {
    let p = list_problem();
    let f = parse_formula_str("(not (= c nil))", &p.sig).unwrap();
    let r = check_sat(&p.sig, &[f], &solver()).unwrap();
    assert!(matches!(r, SatResult::Sat(_)));
}

#[test]
fn extraction_collapses_equal_terms() {
    let p = list_problem();
    let f = parse_formula_str("(= (n nil) nil)", &p.sig).unwrap();
    let g = parse_formula_str("(= c nil)", &p.sig).unwrap();
    let terms = ground_terms(&[], &p.sig, 1);
    let SatResult::Sat(h) = check_sat(&p.sig, &[f, g], &solver()).unwrap() else {
        panic!("expected sat");
    };
    let m = extract_finite_model(&h, &p.sig, &terms).unwrap();
    assert_eq!(m.fg_size, 1);
    let n_graph = &m.funcs["n"];
    assert_eq!(n_graph.len(), 1);
}

#[test]
fn extraction_preserves_forced_chain() {
    let p = parse_problem(
        "(foreground-sort Loc)(const a Loc)(const b Loc)(const nil Loc)(func n (Loc) Loc)\
         (define-rec (list (x Loc)) (or (= x nil) (list (n x))))\
         (goal (list nil))",
    )
    .unwrap();
    let asserts = [
        parse_formula_str("(not (= a b))", &p.sig).unwrap(),
        parse_formula_str("(not (= b nil))", &p.sig).unwrap(),
        parse_formula_str("(not (= a nil))", &p.sig).unwrap(),
        parse_formula_str("(= (n a) b)", &p.sig).unwrap(),
        parse_formula_str("(= (n b) nil)", &p.sig).unwrap(),
    ];
    let terms = ground_terms(&[], &p.sig, 1);
    let SatResult::Sat(h) = check_sat(&p.sig, &asserts, &solver()).unwrap() else {
        panic!("expected sat");
    };
    let m = extract_finite_model(&h, &p.sig, &terms).unwrap();
    assert_eq!(m.fg_size, 3);
    // n(a) = b and n(b) = nil as recorded graph points
    let va = m.consts["a"].clone();
    let vb = m.consts["b"].clone();
    let vnil = m.consts["nil"].clone();
    assert_eq!(m.funcs["n"][&vec![va]], vb);
    assert_eq!(m.funcs["n"][&vec![vb]], vnil);
}

#[test]
fn segment_countermodel_falsifies_proposed_lemma() {
    // instantiated fixpoint abstractions plus the negation of
    // `lseg(nil, y)`: satisfiable, and the witness makes y distinct
    // from nil
    let p = parse_problem(
        "(foreground-sort Loc)(const nil Loc)(const y Loc)(func n (Loc) Loc)\
         (define-rec (lseg (x Loc) (u Loc)) (ite (= x u) true (lseg (n x) u)))\
         (goal (lseg nil nil))",
    )
    .unwrap();
    let abs = fo_abstraction(&p.defs["lseg"]).unwrap();
    let neg = parse_formula_str("(not (lseg nil y))", &p.sig).unwrap();
    let terms = ground_terms(&[abs.clone(), neg.clone()], &p.sig, 1);
    let mut asserts = instantiate(&[abs], &terms).unwrap();
    asserts.push(neg);
    let SatResult::Sat(h) = check_sat(&p.sig, &asserts, &solver()).unwrap() else {
        panic!("expected sat: the lemma is invalid");
    };
    let m = extract_finite_model(&h, &p.sig, &terms).unwrap();
    let vnil = m.consts["nil"].clone();
    let vy = m.consts["y"].clone();
    assert_ne!(vnil, vy, "a countermodel must separate y from nil");
    assert_eq!(m.rels["lseg"][&vec![vnil, vy]], false);

    // extraction is faithful: no assertion evaluates definitely false
    let empty = indexmap::IndexMap::new();
    for a in &asserts {
        assert_ne!(
            m.eval_formula(a, &empty),
            TruthValue::False,
            "assertion {} is false on its own model",
            lemsyn::logic::print_formula(a)
        );
    }
}

#[test]
fn unknown_reported_for_broken_solver() {
    let p = list_problem();
    let f = parse_formula_str("(list nil)", &p.sig).unwrap();
    let mut cfg = solver();
    cfg.path = "/nonexistent/solver".into();
    let r = check_sat(&p.sig, &[f.clone()], &cfg);
    assert!(r.is_err(), "missing binary should surface as an error");

    // a solver that answers unknown
    let dir = tempfile::tempdir().unwrap();
    let fake = dir.path().join("fake-solver");
    std::fs::write(&fake, "#!/bin/sh\ncat > /dev/null\necho unknown\n").unwrap();
    use std::os::unix::fs::PermissionsExt;
    std::fs::set_permissions(&fake, std::fs::Permissions::from_mode(0o755)).unwrap();
    let mut cfg2 = solver();
    cfg2.path = fake;
    cfg2.kind = lemsyn::smt::SolverKind::Other;
    let r2 = check_sat(&p.sig, &[f], &cfg2).unwrap();
    assert!(matches!(
        r2,
        SatResult::Unknown(UnknownReason::SolverSaidUnknown)
    ));
}

#[test]
fn int_terms_extracted_alongside() {
    let p = parse_problem(
        "(foreground-sort Loc)(const nil Loc)(const a Loc)(func n (Loc) Loc)(func key (Loc) Int)\
         (define-rec (list (x Loc)) (or (= x nil) (list (n x))))\
         (goal (list nil))",
    )
    .unwrap();
    let asserts = [
        parse_formula_str("(= (key a) 7)", &p.sig).unwrap(),
        parse_formula_str("(not (= a nil))", &p.sig).unwrap(),
    ];
    let terms = ground_terms(&[], &p.sig, 1);
    let SatResult::Sat(h) = check_sat(&p.sig, &asserts, &solver()).unwrap() else {
        panic!("expected sat");
    };
    let m = extract_finite_model(&h, &p.sig, &terms).unwrap();
    let va = m.consts["a"].clone();
    assert_eq!(
        m.funcs["key"][&vec![va]],
        lemsyn::model::Value::Int(7)
    );
    let key_term = Term::app("key", vec![Term::cst("a")]);
    assert!(m
        .term_values
        .iter()
        .any(|(t, v)| *t == key_term && *v == lemsyn::model::Value::Int(7)));
    let _ = Sort::Int;
}
