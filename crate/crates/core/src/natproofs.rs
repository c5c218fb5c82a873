//! The first-order reasoning substrate.
//!
//! Recursive definitions are abstracted into plain fixpoint
//! biconditionals, universal formulas are instantiated over all ground
//! foreground terms up to a depth bound, and negated proof obligations
//! are Skolemized. Deciding the resulting quantifier-free set is the
//! solver's job ([`crate::smt`]); if the obligation is valid there is
//! some depth at which the instantiated set becomes unsatisfiable.

use crate::logic::{
    print_term, Formula, FuncSig, LogicError, RecDef, Result, Signature, Sort, Term,
};
use indexmap::{IndexMap, IndexSet};
use itertools::Itertools;

/// Fresh-constant allocator for Skolemization. Constants are recorded
/// per obligation label and never collide with signature names.
#[derive(Debug, Default)]
pub struct SkolemEnv {
    counter: usize,
    pub entries: IndexMap<String, Vec<(String, Sort)>>,
}

impl SkolemEnv {
    pub fn new() -> Self {
        Self::default()
    }

    fn fresh(&mut self, base: &str, sort: Sort, sig: &mut Signature) -> String {
        loop {
            let name = format!("{base}!{}", self.counter);
            self.counter += 1;
            if sig.add_const(name.clone(), sort).is_ok() {
                return name;
            }
        }
    }
}

/// The standard first-order abstraction `∀x̄. R(x̄) ↔ ρ_R(x̄)` of a
/// relation definition: a fixpoint, not a least fixpoint.
pub fn fo_abstraction(def: &RecDef) -> Result<Formula> {
    let RecDef::Rel { name, params, body } = def else {
        return Err(LogicError::Invalid(format!(
            "{} is a function definition; lower it first",
            def.name()
        )));
    };
    let head = Formula::Rel(
        name.clone(),
        params.iter().map(|(v, s)| Term::Var(v.clone(), *s)).collect(),
    );
    Ok(Formula::forall(
        params.clone(),
        Formula::iff(head, body.clone()),
    ))
}

/// A recursive function rewritten for first-order reasoning: a domain
/// predicate plus guarded value axioms and a bottom axiom.
#[derive(Debug, Clone)]
pub struct LoweredFunc {
    pub func: String,
    pub domain_def: RecDef,
    pub axioms: Vec<Formula>,
    pub bottom: Term,
}

/// Name of the domain predicate introduced for a recursive function.
pub fn domain_pred_name(func: &str) -> String {
    format!("{func}_dom")
}

/// Name of the designated undefined-set constant for a set-valued
/// recursive function.
pub fn set_bottom_name(func: &str) -> String {
    format!("{func}_undef")
}

/// Lower a recursive function definition into (a) a recursive domain
/// predicate satisfied exactly by the elements on which the function's
/// computation bottoms out, and (b) universal axioms: one per branch
/// guarding the function's value, and one mapping everything off the
/// domain to the bottom element (−1 for integers).
pub fn lower_recfun(def: &RecDef) -> Result<LoweredFunc> {
    let RecDef::Func {
        name,
        params,
        result,
        body,
    } = def
    else {
        return Err(LogicError::Invalid(format!(
            "{} is not a function definition",
            def.name()
        )));
    };
    let bottom = match result {
        Sort::Int => Term::IntLit(-1),
        Sort::SetInt => Term::Const(set_bottom_name(name)),
        other => {
            return Err(LogicError::Invalid(format!(
                "unsupported result sort {other:?} for recursive function {name}"
            )))
        }
    };
    let dom = domain_pred_name(name);
    let args: Vec<Term> = params.iter().map(|(v, s)| Term::Var(v.clone(), *s)).collect();
    let dom_atom = Formula::Rel(dom.clone(), args.clone());
    let f_app = Term::App(name.clone(), args);

    let dom_body = domain_body(body, name, &dom)?;
    let trivial_domain = dom_body == Formula::True;

    let mut axioms = Vec::new();
    let mut leaves = Vec::new();
    collect_leaves(body, Vec::new(), &mut leaves);
    for (path, leaf) in &leaves {
        let value = Formula::Eq(f_app.clone(), leaf.clone());
        let guarded = match path.len() {
            0 => value,
            1 => Formula::implies(path[0].clone(), value),
            _ => Formula::implies(Formula::And(path.clone()), value),
        };
        let axiom = if trivial_domain {
            guarded
        } else {
            Formula::implies(dom_atom.clone(), guarded)
        };
        axioms.push(Formula::forall(params.clone(), axiom));
    }
    if !trivial_domain {
        axioms.push(Formula::forall(
            params.clone(),
            Formula::implies(
                Formula::not(dom_atom),
                Formula::Eq(f_app, bottom.clone()),
            ),
        ));
    }

    Ok(LoweredFunc {
        func: name.clone(),
        domain_def: RecDef::Rel {
            name: dom,
            params: params.clone(),
            body: dom_body,
        },
        axioms,
        bottom,
    })
}

/// Leaves of the ite tree of a function body, with their path
/// conditions.
fn collect_leaves(t: &Term, path: Vec<Formula>, out: &mut Vec<(Vec<Formula>, Term)>) {
    match t {
        Term::Ite(c, a, b) => {
            let mut then_path = path.clone();
            then_path.push((**c).clone());
            collect_leaves(a, then_path, out);
            let mut else_path = path;
            else_path.push(Formula::not((**c).clone()));
            collect_leaves(b, else_path, out);
        }
        _ => out.push((path, t.clone())),
    }
}

/// Build the domain predicate body: each result leaf becomes the
/// conjunction of the domain predicate at the recursive calls it
/// contains (true when there are none).
fn domain_body(t: &Term, func: &str, dom: &str) -> Result<Formula> {
    match t {
        Term::Ite(c, a, b) => {
            if mentions_func_formula(c, func) {
                return Err(LogicError::Invalid(format!(
                    "recursive call to {func} inside an ite condition is unsupported"
                )));
            }
            Ok(Formula::ite(
                (**c).clone(),
                domain_body(a, func, dom)?,
                domain_body(b, func, dom)?,
            ))
        }
        _ => {
            let mut calls = Vec::new();
            collect_calls(t, func, &mut calls)?;
            if calls.is_empty() {
                Ok(Formula::True)
            } else {
                let conjuncts: Vec<Formula> = calls
                    .into_iter()
                    .map(|args| Formula::Rel(dom.to_string(), args))
                    .collect();
                Ok(if conjuncts.len() == 1 {
                    conjuncts.into_iter().next().unwrap()
                } else {
                    Formula::And(conjuncts)
                })
            }
        }
    }
}

/// Collect the argument tuples of recursive calls inside a result leaf.
/// Calls may sit under arithmetic and set constructors but not under
/// other function applications.
fn collect_calls(t: &Term, func: &str, out: &mut Vec<Vec<Term>>) -> Result<()> {
    match t {
        Term::App(f, args) if f == func => {
            for a in args {
                if mentions_func(a, func) {
                    return Err(LogicError::Invalid(format!(
                        "nested recursive call to {func} is unsupported"
                    )));
                }
            }
            out.push(args.clone());
            Ok(())
        }
        Term::App(f, args) => {
            for a in args {
                if mentions_func(a, func) {
                    return Err(LogicError::Invalid(format!(
                        "recursive call to {func} under application of {f} is unsupported"
                    )));
                }
            }
            Ok(())
        }
        Term::Add(a, b) | Term::Sub(a, b) | Term::Union(a, b) => {
            collect_calls(a, func, out)?;
            collect_calls(b, func, out)
        }
        Term::Singleton(k) => collect_calls(k, func, out),
        Term::Ite(..) => Err(LogicError::Invalid(
            "nested ite inside a result leaf is unsupported".into(),
        )),
        Term::Var(..) | Term::Const(_) | Term::IntLit(_) | Term::EmptySet => Ok(()),
    }
}

fn mentions_func(t: &Term, func: &str) -> bool {
    match t {
        Term::App(f, args) => f == func || args.iter().any(|a| mentions_func(a, func)),
        Term::Add(a, b) | Term::Sub(a, b) | Term::Union(a, b) => {
            mentions_func(a, func) || mentions_func(b, func)
        }
        Term::Singleton(k) => mentions_func(k, func),
        Term::Ite(c, a, b) => {
            mentions_func_formula(c, func) || mentions_func(a, func) || mentions_func(b, func)
        }
        Term::Var(..) | Term::Const(_) | Term::IntLit(_) | Term::EmptySet => false,
    }
}

fn mentions_func_formula(f: &Formula, func: &str) -> bool {
    match f {
        Formula::True | Formula::False => false,
        Formula::Rel(_, args) => args.iter().any(|t| mentions_func(t, func)),
        Formula::Eq(a, b) | Formula::Le(a, b) | Formula::Lt(a, b) | Formula::Member(a, b) => {
            mentions_func(a, func) || mentions_func(b, func)
        }
        Formula::Not(g) => mentions_func_formula(g, func),
        Formula::And(fs) | Formula::Or(fs) => fs.iter().any(|g| mentions_func_formula(g, func)),
        Formula::Implies(a, b) | Formula::Iff(a, b) => {
            mentions_func_formula(a, func) || mentions_func_formula(b, func)
        }
        Formula::Ite(c, t, e) => {
            mentions_func_formula(c, func)
                || mentions_func_formula(t, func)
                || mentions_func_formula(e, func)
        }
        Formula::Forall(_, body) => mentions_func_formula(body, func),
    }
}

/// Ground terms of the foreground sort up to a depth bound, in a
/// deterministic (depth, printed form) order, plus the pool of
/// integer-sorted ground terms used to instantiate integer-quantified
/// variables.
#[derive(Debug, Clone)]
pub struct GroundTermSet {
    pub depth: usize,
    pub terms: Vec<Term>,
    pub int_terms: Vec<Term>,
    /// Set when the base level came out empty.
    pub empty_warning: bool,
}

impl GroundTermSet {
    pub fn contains(&self, t: &Term) -> bool {
        self.terms.contains(t)
    }
}

/// Compute the instantiation terms for a formula set.
///
/// Level 0 holds every declared foreground constant (Skolem constants
/// included) plus every ground foreground subterm appearing in the
/// formulas; purely depth-based generation misses quantifier-free goals
/// whose terms are deeper than the bound, so occurring terms seed the
/// base level. Level `j` adds every application of a foreground
/// function to tuples from level `j-1`.
pub fn ground_terms(formulas: &[Formula], sig: &Signature, k: usize) -> GroundTermSet {
    let mut seen: IndexSet<Term> = IndexSet::new();
    for c in sig.fg_consts() {
        seen.insert(Term::cst(c));
    }
    let mut int_seen: IndexSet<Term> = IndexSet::new();
    for (c, s) in &sig.consts {
        if *s == Sort::Int {
            int_seen.insert(Term::cst(c));
        }
    }
    for f in formulas {
        seed_ground_subterms(f, sig, &mut seen, &mut int_seen);
    }
    let empty_warning = seen.is_empty();

    let fg_funcs: Vec<(String, usize)> = sig
        .fg_funcs()
        .map(|(n, a)| (n.to_string(), a))
        .collect();
    let mut frontier: Vec<Term> = seen.iter().cloned().collect();
    for _ in 0..k {
        let base: Vec<Term> = seen.iter().cloned().collect();
        let mut next = Vec::new();
        for (f, arity) in &fg_funcs {
            // tuples must touch the frontier at least once; the rest may
            // come from anywhere in the current set
            for tuple in std::iter::repeat(base.iter())
                .take(*arity)
                .multi_cartesian_product()
            {
                if !tuple.iter().any(|t| frontier.contains(t)) {
                    continue;
                }
                let term = Term::App(f.clone(), tuple.into_iter().cloned().collect());
                if !seen.contains(&term) {
                    next.push(term);
                }
            }
        }
        for t in &next {
            seen.insert(t.clone());
        }
        frontier = next;
        if frontier.is_empty() {
            break;
        }
    }

    let mut terms: Vec<Term> = seen.into_iter().collect();
    terms.sort_by_key(|t| (t.fg_depth(sig), print_term(t)));

    // integer applications add no foreground nesting, so every tuple of
    // generated terms stays within the depth bound
    for (fname, fsig) in &sig.funcs {
        if fsig.result != Sort::Int || fsig.params.is_empty() {
            continue;
        }
        if !fsig.params.iter().all(|p| *p == Sort::Foreground) {
            continue;
        }
        for tuple in std::iter::repeat(terms.iter())
            .take(fsig.params.len())
            .multi_cartesian_product()
        {
            int_seen.insert(Term::App(fname.clone(), tuple.into_iter().cloned().collect()));
        }
    }
    let mut int_terms: Vec<Term> = int_seen.into_iter().collect();
    int_terms.sort_by_key(|t| (t.fg_depth(sig), print_term(t)));

    GroundTermSet {
        depth: k,
        terms,
        int_terms,
        empty_warning,
    }
}

fn seed_ground_subterms(
    f: &Formula,
    sig: &Signature,
    fg: &mut IndexSet<Term>,
    ints: &mut IndexSet<Term>,
) {
    match f {
        Formula::True | Formula::False => {}
        Formula::Rel(_, args) => args.iter().for_each(|t| seed_term(t, sig, fg, ints)),
        Formula::Eq(a, b) | Formula::Le(a, b) | Formula::Lt(a, b) | Formula::Member(a, b) => {
            seed_term(a, sig, fg, ints);
            seed_term(b, sig, fg, ints);
        }
        Formula::Not(g) => seed_ground_subterms(g, sig, fg, ints),
        Formula::And(fs) | Formula::Or(fs) => {
            fs.iter().for_each(|g| seed_ground_subterms(g, sig, fg, ints))
        }
        Formula::Implies(a, b) | Formula::Iff(a, b) => {
            seed_ground_subterms(a, sig, fg, ints);
            seed_ground_subterms(b, sig, fg, ints);
        }
        Formula::Ite(c, t, e) => {
            seed_ground_subterms(c, sig, fg, ints);
            seed_ground_subterms(t, sig, fg, ints);
            seed_ground_subterms(e, sig, fg, ints);
        }
        Formula::Forall(_, body) => seed_ground_subterms(body, sig, fg, ints),
    }
}

fn seed_term(t: &Term, sig: &Signature, fg: &mut IndexSet<Term>, ints: &mut IndexSet<Term>) {
    if t.is_ground() {
        match t.sort(sig) {
            Ok(Sort::Foreground) => {
                fg.insert(t.clone());
            }
            Ok(Sort::Int) => {
                ints.insert(t.clone());
            }
            _ => {}
        }
    }
    match t {
        Term::App(_, args) => args.iter().for_each(|a| seed_term(a, sig, fg, ints)),
        Term::Add(a, b) | Term::Sub(a, b) | Term::Union(a, b) => {
            seed_term(a, sig, fg, ints);
            seed_term(b, sig, fg, ints);
        }
        Term::Singleton(k) => seed_term(k, sig, fg, ints),
        Term::Ite(c, a, b) => {
            seed_ground_subterms(c, sig, fg, ints);
            seed_term(a, sig, fg, ints);
            seed_term(b, sig, fg, ints);
        }
        Term::Var(..) | Term::Const(_) | Term::IntLit(_) | Term::EmptySet => {}
    }
}

/// Instantiate universal formulas with every tuple of ground terms of
/// matching sorts. Foreground variables range over `T.terms`, integer
/// variables over `T.int_terms`. The result is quantifier-free.
pub fn instantiate(universals: &[Formula], terms: &GroundTermSet) -> Result<Vec<Formula>> {
    let mut out: IndexSet<Formula> = IndexSet::new();
    for f in universals {
        let (vars, matrix) = f.strip_forall();
        if !matrix.is_quantifier_free() {
            return Err(LogicError::Invalid(format!(
                "not a universal-prefix formula: {}",
                crate::logic::print_formula(f)
            )));
        }
        if vars.is_empty() {
            out.insert(matrix.clone());
            continue;
        }
        let pools: Vec<&[Term]> = vars
            .iter()
            .map(|(_, s)| match s {
                Sort::Foreground => terms.terms.as_slice(),
                Sort::Int => terms.int_terms.as_slice(),
                _ => &[],
            })
            .collect();
        if pools.iter().any(|p| p.is_empty()) {
            continue;
        }
        for tuple in pools
            .iter()
            .map(|p| p.iter())
            .multi_cartesian_product()
        {
            let map: IndexMap<String, Term> = vars
                .iter()
                .zip(&tuple)
                .map(|((v, _), t)| (v.clone(), (*t).clone()))
                .collect();
            out.insert(matrix.subst_vars(&map));
        }
    }
    Ok(out.into_iter().collect())
}

/// Skolemize the negation of a universal formula: the universal
/// variables become existential under the negation and are replaced by
/// fresh constants, which are added to the signature (and therefore to
/// subsequent instantiation term sets). Returns `¬matrix[c̄/x̄]` and
/// the fresh constants.
pub fn skolemize_negation(
    f: &Formula,
    label: &str,
    env: &mut SkolemEnv,
    sig: &mut Signature,
) -> (Formula, Vec<(String, Sort)>) {
    let (vars, matrix) = f.strip_forall();
    let mut consts = Vec::new();
    let mut map = IndexMap::new();
    for (v, s) in &vars {
        let name = env.fresh(v, *s, sig);
        map.insert(v.clone(), Term::Const(name.clone()));
        consts.push((name, *s));
    }
    env.entries.insert(label.to_string(), consts.clone());
    (Formula::not(matrix.subst_vars(&map)), consts)
}

/// Register the uninterpreted symbols a lowered function needs: the
/// domain predicate and, for set-valued functions, the undefined-set
/// constant.
pub fn declare_lowered(lowered: &LoweredFunc, sig: &mut Signature) -> Result<()> {
    let RecDef::Rel { name, params, .. } = &lowered.domain_def else {
        unreachable!()
    };
    sig.add_rel(name.clone(), params.iter().map(|(_, s)| *s).collect())?;
    if let Term::Const(c) = &lowered.bottom {
        sig.add_const(c.clone(), Sort::SetInt)?;
    }
    Ok(())
}

/// Sanity view of a function signature for tests.
pub fn func_sig(sig: &Signature, name: &str) -> Option<FuncSig> {
    sig.funcs.get(name).cloned()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::{parse_problem, print_formula, Problem};

    fn list_problem() -> Problem {
        parse_problem(
            "(foreground-sort Loc)(const nil Loc)(func n (Loc) Loc)\
             (define-rec (list (x Loc)) (or (= x nil) (list (n x))))\
             (goal (list nil))",
        )
        .unwrap()
    }

    #[test]
    fn abstraction_of_list() {
        let p = list_problem();
        let f = fo_abstraction(&p.defs["list"]).unwrap();
        assert_eq!(
            print_formula(&f),
            "(forall ((x Fg)) (iff (list x) (or (= x nil) (list (n x)))))"
        );
    }

    #[test]
    fn abstraction_of_zero_ary() {
        let p = parse_problem(
            "(foreground-sort Loc)(const nil Loc)(define-rec (p) p)(goal (= nil nil))",
        )
        .unwrap();
        let f = fo_abstraction(&p.defs["p"]).unwrap();
        assert_eq!(print_formula(&f), "(iff p p)");
    }

    #[test]
    fn abstraction_of_binary_lseg_binds_both_params() {
        let p = parse_problem(crate::logic::tests::LSEG_PROBLEM).unwrap();
        let f = fo_abstraction(&p.defs["lseg"]).unwrap();
        let Formula::Forall(vars, body) = &f else { panic!() };
        assert_eq!(vars.len(), 2);
        let Formula::Iff(lhs, _) = body.as_ref() else { panic!() };
        let Formula::Rel(r, args) = lhs.as_ref() else { panic!() };
        assert_eq!(r, "lseg");
        assert_eq!(args.len(), 2);
    }

    #[test]
    fn lower_listlen_produces_three_axioms_with_bottom() {
        let p = parse_problem(
            "(foreground-sort Loc)(const nil Loc)(func n (Loc) Loc)\
             (define-recfun (listlen (x Loc)) Int (ite (= x nil) 0 (+ 1 (listlen (n x)))))\
             (goal (= nil nil))",
        )
        .unwrap();
        let lowered = lower_recfun(&p.defs["listlen"]).unwrap();
        assert_eq!(lowered.bottom, Term::IntLit(-1));
        assert_eq!(lowered.axioms.len(), 3);
        let RecDef::Rel { name, body, .. } = &lowered.domain_def else { panic!() };
        assert_eq!(name, "listlen_dom");
        assert_eq!(
            print_formula(body),
            "(ite (= x nil) true (listlen_dom (n x)))"
        );
        let printed: Vec<String> = lowered.axioms.iter().map(print_formula).collect();
        assert_eq!(
            printed[0],
            "(forall ((x Fg)) (=> (listlen_dom x) (=> (= x nil) (= (listlen x) 0))))"
        );
        assert!(printed[2].contains("(= (listlen x) -1)"), "{}", printed[2]);
    }

    #[test]
    fn lower_constant_function_is_trivial() {
        let p = parse_problem(
            "(foreground-sort Loc)(const nil Loc)\
             (define-recfun (zero (x Loc)) Int 0)(goal (= nil nil))",
        )
        .unwrap();
        let lowered = lower_recfun(&p.defs["zero"]).unwrap();
        let RecDef::Rel { body, .. } = &lowered.domain_def else { panic!() };
        assert_eq!(body, &Formula::True);
        assert_eq!(lowered.axioms.len(), 1);
        assert_eq!(
            print_formula(&lowered.axioms[0]),
            "(forall ((x Fg)) (= (zero x) 0))"
        );
    }

    #[test]
    fn lower_rejects_call_in_condition() {
        let p = parse_problem(
            "(foreground-sort Loc)(const nil Loc)(func n (Loc) Loc)\
             (define-recfun (f (x Loc)) Int (ite (= (f (n x)) 0) 0 1))\
             (goal (= nil nil))",
        );
        // the positivity walk on function bodies only covers relations,
        // so this surfaces at lowering time
        let p = p.unwrap();
        assert!(lower_recfun(&p.defs["f"]).is_err());
    }

    #[test]
    fn ground_terms_base_and_one_level() {
        let p = list_problem();
        let t = ground_terms(&[], &p.sig, 1);
        let names: Vec<String> = t.terms.iter().map(print_term).collect();
        assert_eq!(names, vec!["nil", "(n nil)"]);
    }

    #[test]
    fn ground_terms_empty_base_warns() {
        let sig = Signature::new("Loc");
        let t = ground_terms(&[], &sig, 3);
        assert!(t.terms.is_empty());
        assert!(t.empty_warning);
    }

    #[test]
    fn ground_terms_for_segment_goal_at_depth_one() {
        // four constants and one unary function give exactly eight terms
        let p = parse_problem(crate::logic::tests::LSEG_PROBLEM).unwrap();
        let mut sig = p.sig.clone();
        sig.add_const("x!0", Sort::Foreground).unwrap();
        sig.add_const("y!1", Sort::Foreground).unwrap();
        sig.add_const("ret!2", Sort::Foreground).unwrap();
        let t = ground_terms(&[], &sig, 1);
        let names: Vec<String> = t.terms.iter().map(print_term).collect();
        assert_eq!(
            names,
            vec![
                "nil",
                "ret!2",
                "x!0",
                "y!1",
                "(n nil)",
                "(n ret!2)",
                "(n x!0)",
                "(n y!1)",
            ]
        );
        // key applications over depth-0 terms are available for
        // integer-variable instantiation
        assert!(t.int_terms.contains(&Term::app("key", vec![Term::cst("nil")])));
    }

    #[test]
    fn ground_terms_seed_occurring_subterms() {
        let p = list_problem();
        let goal = crate::logic::parse_formula_str(
            "(list (n (n nil)))",
            &p.sig,
        )
        .unwrap();
        let t = ground_terms(&[goal], &p.sig, 0);
        let names: Vec<String> = t.terms.iter().map(print_term).collect();
        assert_eq!(names, vec!["nil", "(n nil)", "(n (n nil))"]);
    }

    #[test]
    fn ground_terms_monotone_in_depth() {
        let p = parse_problem(crate::logic::tests::LSEG_PROBLEM).unwrap();
        let t1 = ground_terms(&[], &p.sig, 1);
        let t2 = ground_terms(&[], &p.sig, 2);
        for t in &t1.terms {
            assert!(t2.contains(t));
        }
        assert!(t1.terms.iter().all(|t| t.fg_depth(&p.sig) <= 1));
        assert!(t2.terms.iter().all(|t| t.fg_depth(&p.sig) <= 2));
    }

    #[test]
    fn instantiate_counts() {
        let p = list_problem();
        let abs = fo_abstraction(&p.defs["list"]).unwrap();
        let t = ground_terms(&[], &p.sig, 1);
        assert_eq!(t.terms.len(), 2);
        let inst = instantiate(&[abs], &t).unwrap();
        assert_eq!(inst.len(), 2);
        assert!(inst.iter().all(|f| f.is_quantifier_free()));

        let p2 = parse_problem(crate::logic::tests::LSEG_PROBLEM).unwrap();
        let abs2 = fo_abstraction(&p2.defs["lseg"]).unwrap();
        let mut sig = p2.sig.clone();
        sig.add_const("c!0", Sort::Foreground).unwrap();
        sig.add_const("c!1", Sort::Foreground).unwrap();
        sig.add_const("c!2", Sort::Foreground).unwrap();
        let t2 = ground_terms(&[], &sig, 0);
        assert_eq!(t2.terms.len(), 4);
        let inst2 = instantiate(&[abs2], &t2).unwrap();
        assert_eq!(inst2.len(), 16);
    }

    #[test]
    fn instantiate_rejects_non_universal() {
        let p = list_problem();
        let f = Formula::not(Formula::forall(
            vec![("x".into(), Sort::Foreground)],
            Formula::rel("list", vec![Term::var("x", Sort::Foreground)]),
        ));
        let t = ground_terms(&[], &p.sig, 0);
        assert!(instantiate(&[f], &t).is_err());
    }

    #[test]
    fn skolemize_examples() {
        let p = list_problem();
        let mut sig = p.sig.clone();
        let mut env = SkolemEnv::new();
        let f = Formula::forall(
            vec![("x".into(), Sort::Foreground)],
            Formula::rel("list", vec![Term::var("x", Sort::Foreground)]),
        );
        let (neg, consts) = skolemize_negation(&f, "goal", &mut env, &mut sig);
        assert_eq!(consts.len(), 1);
        assert_eq!(print_formula(&neg), format!("(not (list {}))", consts[0].0));
        assert!(sig.consts.contains_key(&consts[0].0));

        // skolemizing twice yields disjoint tuples
        let (_, consts2) = skolemize_negation(&f, "goal2", &mut env, &mut sig);
        assert_ne!(consts[0].0, consts2[0].0);
    }

    #[test]
    fn instantiation_is_monotone() {
        let p = list_problem();
        let abs = fo_abstraction(&p.defs["list"]).unwrap();
        let t1 = ground_terms(&[], &p.sig, 1);
        let t2 = ground_terms(&[], &p.sig, 2);
        let i1 = instantiate(std::slice::from_ref(&abs), &t1).unwrap();
        let i2 = instantiate(std::slice::from_ref(&abs), &t2).unwrap();
        for f in &i1 {
            assert!(i2.contains(f));
        }
    }
}
