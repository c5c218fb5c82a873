use super::*;
use indexmap::IndexMap;

pub(crate) const LIST_PROBLEM: &str = "
(foreground-sort Loc)
(const nil Loc)
(func n (Loc) Loc)
(define-rec (list (x Loc)) (or (= x nil) (list (n x))))
(goal (list nil))
";

#[test]
fn parses_list_definition() {
    let p = parse_problem(LIST_PROBLEM).unwrap();
    let def = &p.defs["list"];
    let RecDef::Rel { name, params, body } = def else {
        panic!("expected a relation definition");
    };
    assert_eq!(name, "list");
    assert_eq!(params, &[("x".to_string(), Sort::Foreground)]);
    let x = Term::var("x", Sort::Foreground);
    let expected = Formula::Or(vec![
        Formula::Eq(x.clone(), Term::cst("nil")),
        Formula::rel("list", vec![Term::app("n", vec![x])]),
    ]);
    assert_eq!(body, &expected);
    assert!(p.axioms.is_empty());
}

#[test]
fn goal_free_vars_are_closed_with_inferred_sorts() {
    let text = "
(foreground-sort Loc)
(const nil Loc)
(func n (Loc) Loc)
(define-rec (list (x Loc)) (or (= x nil) (list (n x))))
(goal (=> (list x) (list (n x))))
";
    let p = parse_problem(text).unwrap();
    let (vars, _) = p.goal.strip_forall();
    assert_eq!(vars, vec![("x".to_string(), Sort::Foreground)]);
}

#[test]
fn positivity_violation_is_a_parse_error() {
    let text = "
(foreground-sort Loc)
(const nil Loc)
(func n (Loc) Loc)
(define-rec (list (x Loc)) (or (= x nil) (not (list (n x)))))
(goal (list nil))
";
    let e = parse_problem(text).unwrap_err();
    assert!(matches!(e, LogicError::Positivity { .. }), "got {e}");
}

#[test]
fn duplicate_definition_rejected() {
    let text = "
(foreground-sort Loc)
(const nil Loc)
(func n (Loc) Loc)
(define-rec (list (x Loc)) (= x nil))
(define-rec (list (x Loc)) (= x nil))
(goal (list nil))
";
    let e = parse_problem(text).unwrap_err();
    assert!(matches!(e, LogicError::DuplicateDef(_)), "got {e}");
}

#[test]
fn parse_error_has_position() {
    let e = parse_problem("(foreground-sort Loc)\n(goal (frob x))").unwrap_err();
    match e {
        LogicError::Parse { line, col, .. } => {
            assert_eq!(line, 2);
            assert!(col > 1);
        }
        other => panic!("expected a parse error, got {other}"),
    }
}

#[test]
fn substitute_rewrites_every_occurrence() {
    let p = parse_problem(LIST_PROBLEM).unwrap();
    let RecDef::Rel { body, .. } = &p.defs["list"] else { unreachable!() };
    // replace list(t) by (psi(t) ∧ list(t)) where psi(t) is t = nil
    let out = substitute_rel(body, "list", 1, &|args| {
        Formula::And(vec![
            Formula::Eq(args[0].clone(), Term::cst("nil")),
            Formula::rel("list", args.to_vec()),
        ])
    })
    .unwrap();
    let x = Term::var("x", Sort::Foreground);
    let nx = Term::app("n", vec![x.clone()]);
    let expected = Formula::Or(vec![
        Formula::Eq(x, Term::cst("nil")),
        Formula::And(vec![
            Formula::Eq(nx.clone(), Term::cst("nil")),
            Formula::rel("list", vec![nx]),
        ]),
    ]);
    assert_eq!(out, expected);
}

#[test]
fn substitute_without_occurrences_is_identity() {
    let p = parse_problem(LIST_PROBLEM).unwrap();
    let RecDef::Rel { body, .. } = &p.defs["list"] else { unreachable!() };
    let out = substitute_rel(body, "other", 1, &|_| Formula::False).unwrap();
    assert_eq!(&out, body);
}

/// Oracle: a naive tree walk that rewrites atoms of a 2-ary relation.
fn naive_rewrite(f: &Formula, rel: &str, mk: &dyn Fn(&[Term]) -> Formula) -> Formula {
    match f {
        Formula::Rel(r, args) if r == rel => mk(args),
        Formula::Not(g) => Formula::not(naive_rewrite(g, rel, mk)),
        Formula::And(fs) => Formula::And(fs.iter().map(|g| naive_rewrite(g, rel, mk)).collect()),
        Formula::Or(fs) => Formula::Or(fs.iter().map(|g| naive_rewrite(g, rel, mk)).collect()),
        Formula::Implies(a, b) => {
            Formula::implies(naive_rewrite(a, rel, mk), naive_rewrite(b, rel, mk))
        }
        Formula::Iff(a, b) => Formula::iff(naive_rewrite(a, rel, mk), naive_rewrite(b, rel, mk)),
        Formula::Ite(c, t, e) => Formula::ite(
            naive_rewrite(c, rel, mk),
            naive_rewrite(t, rel, mk),
            naive_rewrite(e, rel, mk),
        ),
        Formula::Forall(vs, b) => Formula::Forall(vs.clone(), Box::new(naive_rewrite(b, rel, mk))),
        _ => f.clone(),
    }
}

pub(crate) const LSEG_PROBLEM: &str = "
(foreground-sort Loc)
(const nil Loc)
(func n (Loc) Loc)
(func key (Loc) Int)
(define-rec (lseg (x Loc) (y Loc)) (ite (= x y) true (lseg (n x) y)))
(define-rec (slseg (x Loc) (y Loc))
  (ite (= x y) true (and (<= (key x) (key (n x))) (slseg (n x) y))))
(goal (=> (and (slseg x y) (ite (= x y) (= ret y) (= ret (n x)))) (lseg ret y)))
";

#[test]
fn substitute_binary_matches_naive_walk() {
    let p = parse_problem(LSEG_PROBLEM).unwrap();
    let RecDef::Rel { body, .. } = &p.defs["lseg"] else { unreachable!() };
    let mk = |args: &[Term]| {
        Formula::And(vec![
            Formula::Eq(args[0].clone(), args[1].clone()),
            Formula::Rel("lseg".into(), args.to_vec()),
        ])
    };
    let fast = substitute_rel(body, "lseg", 2, &mk).unwrap();
    let slow = naive_rewrite(body, "lseg", &mk);
    assert_eq!(fast, slow);
}

#[test]
fn positivity_examples() {
    let p = parse_problem(LIST_PROBLEM).unwrap();
    assert!(check_positivity(&p.defs["list"], &p.defs).is_ok());

    // body with a negated recursive atom
    let mut defs: IndexMap<String, RecDef> = p.defs.clone();
    let bad = RecDef::Rel {
        name: "bad".into(),
        params: vec![("x".into(), Sort::Foreground)],
        body: Formula::not(Formula::rel(
            "list",
            vec![Term::app("n", vec![Term::var("x", Sort::Foreground)])],
        )),
    };
    defs.insert("bad".into(), bad.clone());
    let v = check_positivity(&bad, &defs).unwrap_err();
    assert!(v.atom.contains("list"));

    // antecedent position desugars to a negation
    let bad2 = RecDef::Rel {
        name: "bad2".into(),
        params: vec![("x".into(), Sort::Foreground)],
        body: Formula::implies(
            Formula::rel(
                "list",
                vec![Term::app("n", vec![Term::var("x", Sort::Foreground)])],
            ),
            Formula::Eq(Term::var("x", Sort::Foreground), Term::cst("nil")),
        ),
    };
    let mut defs2 = p.defs.clone();
    defs2.insert("bad2".into(), bad2.clone());
    let v2 = check_positivity(&bad2, &defs2).unwrap_err();
    assert!(v2.path.contains("=>[0]"), "path was {}", v2.path);
}

#[test]
fn recursive_relation_allowed_in_ite_branch_but_not_condition() {
    let ok = "
(foreground-sort Loc)
(const nil Loc)
(func n (Loc) Loc)
(define-rec (lseg (x Loc) (y Loc)) (ite (= x y) true (lseg (n x) y)))
(goal (lseg nil nil))
";
    assert!(parse_problem(ok).is_ok());
    let bad = "
(foreground-sort Loc)
(const nil Loc)
(func n (Loc) Loc)
(define-rec (p (x Loc)) (ite (p (n x)) (= x nil) true))
(goal (p nil))
";
    let e = parse_problem(bad).unwrap_err();
    assert!(matches!(e, LogicError::Positivity { .. }), "got {e}");
}

#[test]
fn problem_print_parse_round_trip() {
    for text in [LIST_PROBLEM, LSEG_PROBLEM] {
        let p = parse_problem(text).unwrap();
        let printed = print_problem(&p);
        let reparsed = parse_problem(&printed).unwrap_or_else(|e| {
            panic!("reparse failed: {e}\n{printed}");
        });
        assert_eq!(p, reparsed, "round trip changed the problem:\n{printed}");
    }
}

#[test]
fn round_trip_with_recfun_axioms_grammar() {
    let text = "
(foreground-sort Loc)
(const nil Loc)
(const undef SetInt)
(func n (Loc) Loc)
(func key (Loc) Int)
(define-rec (list (x Loc)) (or (= x nil) (list (n x))))
(define-recfun (listlen (x Loc)) Int (ite (= x nil) 0 (+ 1 (listlen (n x)))))
(define-recfun (keys (x Loc)) SetInt
  (ite (= x nil) emptyset (union (singleton (key x)) (keys (n x)))))
(axiom (forall ((x Loc)) (<= 0 (key x))))
(goal (=> (list x) (or (= x nil) (list (n x)))))
(grammar (term-depth 2) (max-size 7) (int-arith true) (set-ops true) (heads list))
(expect-lemma (=> (list x) (list (n x))))
";
    let p = parse_problem(text).unwrap();
    assert_eq!(p.grammar.term_depth, 2);
    assert!(p.grammar.int_arith && p.grammar.set_ops);
    assert_eq!(p.expected.len(), 1);
    let printed = print_problem(&p);
    let reparsed = parse_problem(&printed).unwrap();
    assert_eq!(p, reparsed);
}

#[test]
fn zero_ary_definition_parses() {
    let text = "
(foreground-sort Loc)
(const nil Loc)
(define-rec (p) p)
(goal (= nil nil))
";
    let p = parse_problem(text).unwrap();
    let RecDef::Rel { body, params, .. } = &p.defs["p"] else { unreachable!() };
    assert!(params.is_empty());
    assert_eq!(body, &Formula::Rel("p".into(), vec![]));
}

#[test]
fn term_depth_counts_foreground_nesting() {
    let p = parse_problem(LSEG_PROBLEM).unwrap();
    let x = Term::cst("nil");
    let n1 = Term::app("n", vec![x.clone()]);
    let n2 = Term::app("n", vec![n1.clone()]);
    assert_eq!(x.fg_depth(&p.sig), 0);
    assert_eq!(n1.fg_depth(&p.sig), 1);
    assert_eq!(n2.fg_depth(&p.sig), 2);
    // key is Int-valued: its application adds no foreground nesting
    assert_eq!(Term::app("key", vec![n1]).fg_depth(&p.sig), 1);
}

#[test]
fn quantifying_background_set_sort_rejected() {
    let text = "
(foreground-sort Loc)
(const nil Loc)
(define-rec (list (x Loc)) (= x nil))
(goal (forall ((s SetInt)) (list nil)))
";
    assert!(parse_problem(text).is_err());
}

mod properties {
    use super::*;
    use proptest::prelude::*;

    fn arb_fg_term(depth: u32) -> BoxedStrategy<Term> {
        let leaf = prop_oneof![
            Just(Term::cst("nil")),
            Just(Term::var("x", Sort::Foreground)),
            Just(Term::var("y", Sort::Foreground)),
        ];
        leaf.prop_recursive(depth, 8, 1, |inner| {
            inner.prop_map(|t| Term::app("n", vec![t])).boxed()
        })
        .boxed()
    }

    fn arb_formula(depth: u32) -> BoxedStrategy<Formula> {
        let atom = prop_oneof![
            (arb_fg_term(2), arb_fg_term(2)).prop_map(|(a, b)| Formula::Eq(a, b)),
            arb_fg_term(2).prop_map(|t| Formula::rel("list", vec![t])),
            Just(Formula::True),
        ];
        atom.prop_recursive(depth, 32, 3, |inner| {
            prop_oneof![
                inner.clone().prop_map(Formula::not),
                prop::collection::vec(inner.clone(), 1..3).prop_map(Formula::And),
                prop::collection::vec(inner.clone(), 1..3).prop_map(Formula::Or),
                (inner.clone(), inner.clone())
                    .prop_map(|(a, b)| Formula::implies(a, b)),
                (inner.clone(), inner.clone(), inner)
                    .prop_map(|(c, t, e)| Formula::ite(c, t, e)),
            ]
            .boxed()
        })
        .boxed()
    }

    proptest! {
        /// substituting two distinct relations sequentially equals doing
        /// it simultaneously when neither replacement mentions the other
        #[test]
        fn substitution_composes(f in arb_formula(3)) {
            let p = parse_problem(
                "(foreground-sort Loc)(const nil Loc)(func n (Loc) Loc)\
                 (define-rec (list (x Loc)) (or (= x nil) (list (n x))))\
                 (define-rec (all (x Loc)) true)\
                 (goal (list nil))",
            ).unwrap();
            let _ = &p;
            let r1 = |args: &[Term]| Formula::Eq(args[0].clone(), Term::cst("nil"));
            let r2 = |args: &[Term]| Formula::not(Formula::Eq(args[0].clone(), Term::cst("nil")));
            // f mentions list only; rewrite list then all, vs all then list
            let a = substitute_rel(&substitute_rel(&f, "list", 1, &r1).unwrap(), "all", 1, &r2).unwrap();
            let b = substitute_rel(&substitute_rel(&f, "all", 1, &r2).unwrap(), "list", 1, &r1).unwrap();
            prop_assert_eq!(a, b);
        }

        /// printing then parsing a formula is the identity
        #[test]
        fn formula_round_trip(f in arb_formula(3)) {
            let p = parse_problem(LIST_PROBLEM).unwrap();
            let closed = Formula::forall(f.free_vars(), f);
            let printed = print_formula_with(&closed, &p.sig);
            let reparsed = parse_formula_str(&printed, &p.sig).unwrap();
            prop_assert_eq!(closed, reparsed);
        }
    }
}
