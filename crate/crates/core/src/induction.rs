//! Pre-fixpoint obligations and induction principles.
//!
//! For a lemma `L = ∀x̄. R(x̄) → ψ(x̄)` over a recursively defined
//! relation `R(x̄) := ρ_R(x̄)`, the induction step is
//!
//! ```text
//! PFP(L) = ∀x̄. ρ_R(x̄, R ← (ψ ∧ R)) → ψ(x̄)
//! ```
//!
//! i.e. ψ cuts out a pre-fixpoint of ρ_R. First-order validity of
//! `PFP(L)` implies `L` holds in every least-fixpoint model; this is
//! the only place least-fixpoint semantics enters the proof system.

use crate::logic::{substitute_rel, Formula, Lemma, LogicError, RecDef, Result, Sort, Term};
use crate::natproofs::{skolemize_negation, SkolemEnv};
use crate::Signature;
use indexmap::IndexMap;

/// The induction-principle formula `∀x̄. ¬PFP(L[c̄]) ∨ L(x̄)` for a
/// lemma, with the negated pre-fixpoint part already Skolemized on the
/// fresh constants `c̄`.
#[derive(Debug, Clone)]
pub struct InductionPrinciple {
    pub lemma: Lemma,
    pub skolem_consts: Vec<(String, Sort)>,
    pub formula: Formula,
}

/// Build `PFP(L)`: only occurrences of `L.head` itself inside its
/// definition body are rewritten to `ψ(t̄) ∧ R(t̄)`; other recursive
/// relations in the body stay untouched.
pub fn make_pfp(lemma: &Lemma, defs: &IndexMap<String, RecDef>) -> Result<Formula> {
    let def = defs.get(&lemma.head).ok_or_else(|| {
        LogicError::Invalid(format!("lemma head {} has no definition", lemma.head))
    })?;
    let RecDef::Rel { name, params, body } = def else {
        return Err(LogicError::Invalid(format!(
            "lemma head {} is a recursive function; use its domain predicate",
            lemma.head
        )));
    };
    if params.len() != lemma.vars.len() {
        return Err(LogicError::Arity {
            symbol: name.clone(),
            expected: params.len(),
            got: lemma.vars.len(),
        });
    }

    // rename the definition's parameters to the lemma's variables
    let rename: IndexMap<String, Term> = params
        .iter()
        .zip(&lemma.vars)
        .map(|((p, _), (v, s))| (p.clone(), Term::Var(v.clone(), *s)))
        .collect();
    let rho = body.subst_vars(&rename);

    let psi_at = |args: &[Term]| -> Formula {
        let map: IndexMap<String, Term> = lemma
            .vars
            .iter()
            .zip(args)
            .map(|((v, _), t)| (v.clone(), t.clone()))
            .collect();
        lemma.body.subst_vars(&map)
    };
    let head = lemma.head.clone();
    let substituted = substitute_rel(&rho, &lemma.head, lemma.vars.len(), &|args| {
        Formula::And(vec![psi_at(args), Formula::Rel(head.clone(), args.to_vec())])
    })?;

    Ok(Formula::forall(
        lemma.vars.clone(),
        Formula::implies(substituted, lemma.body.clone()),
    ))
}

/// Build `IP(L, c̄)`: Skolemize `¬PFP(L)` with fresh constants and
/// disjoin it with the lemma's matrix under the lemma's quantifier.
pub fn make_ip(
    lemma: &Lemma,
    defs: &IndexMap<String, RecDef>,
    env: &mut SkolemEnv,
    sig: &mut Signature,
) -> Result<InductionPrinciple> {
    let pfp = make_pfp(lemma, defs)?;
    let label = format!("ip:{lemma}");
    let (neg_pfp, consts) = skolemize_negation(&pfp, &label, env, sig);
    let formula = Formula::forall(
        lemma.vars.clone(),
        Formula::Or(vec![neg_pfp, lemma.matrix()]),
    );
    Ok(InductionPrinciple {
        lemma: lemma.clone(),
        skolem_consts: consts,
        formula,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::{parse_problem, print_formula, Problem};

    fn lseg_problem() -> Problem {
        parse_problem(crate::logic::tests::LSEG_PROBLEM).unwrap()
    }

    fn fg(v: &str) -> Term {
        Term::var(v, Sort::Foreground)
    }

    /// The worked pre-fixpoint formula for `∀x,y. lseg(x,y) → lseg(nil,y)`.
    /// The substitution rewrites inside ρ only, producing
    /// `ite(x=y, true, lseg(nil,y) ∧ lseg(n(x),y)) → lseg(nil,y)`
    /// (ψ does not mention its first argument, so ψ(n(x),y) = lseg(nil,y)).
    #[test]
    fn pfp_of_worked_segment_lemma() {
        let p = lseg_problem();
        let lemma = Lemma::new(
            "lseg",
            vec![
                ("x".into(), Sort::Foreground),
                ("y".into(), Sort::Foreground),
            ],
            Formula::rel("lseg", vec![Term::cst("nil"), fg("y")]),
        );
        let pfp = make_pfp(&lemma, &p.defs).unwrap();
        assert_eq!(
            print_formula(&pfp),
            "(forall ((x Fg) (y Fg)) (=> (ite (= x y) true \
             (and (lseg nil y) (lseg (n x) y))) (lseg nil y)))"
        );
    }

    #[test]
    fn pfp_of_trivial_body_is_trivially_valid_shape() {
        let p = lseg_problem();
        let lemma = Lemma::new(
            "lseg",
            vec![
                ("x".into(), Sort::Foreground),
                ("y".into(), Sort::Foreground),
            ],
            Formula::True,
        );
        let pfp = make_pfp(&lemma, &p.defs).unwrap();
        let (_, matrix) = pfp.strip_forall();
        let Formula::Implies(_, rhs) = matrix else { panic!() };
        assert_eq!(**rhs, Formula::True);
    }

    #[test]
    fn pfp_leaves_other_recursive_relations_alone() {
        let p = lseg_problem();
        // head slseg, body mentions lseg: only slseg occurrences rewrite
        let lemma = Lemma::new(
            "slseg",
            vec![
                ("x".into(), Sort::Foreground),
                ("y".into(), Sort::Foreground),
            ],
            Formula::rel("lseg", vec![fg("x"), fg("y")]),
        );
        let pfp = make_pfp(&lemma, &p.defs).unwrap();
        let printed = print_formula(&pfp);
        assert_eq!(
            printed,
            "(forall ((x Fg) (y Fg)) (=> (ite (= x y) true \
             (and (<= (key x) (key (n x))) (and (lseg (n x) y) (slseg (n x) y)))) \
             (lseg x y)))"
        );
    }

    #[test]
    fn pfp_errors_on_undefined_head() {
        let p = lseg_problem();
        let lemma = Lemma::new("nothere", vec![("x".into(), Sort::Foreground)], Formula::True);
        assert!(make_pfp(&lemma, &p.defs).is_err());
    }

    #[test]
    fn ip_uses_fresh_constants_per_call() {
        let p = lseg_problem();
        let mut sig = p.sig.clone();
        let mut env = SkolemEnv::new();
        let lemma = Lemma::new(
            "lseg",
            vec![
                ("x".into(), Sort::Foreground),
                ("y".into(), Sort::Foreground),
            ],
            Formula::rel("lseg", vec![Term::cst("nil"), fg("y")]),
        );
        let ip1 = make_ip(&lemma, &p.defs, &mut env, &mut sig).unwrap();
        let ip2 = make_ip(&lemma, &p.defs, &mut env, &mut sig).unwrap();
        assert_eq!(ip1.skolem_consts.len(), 2);
        assert_eq!(ip2.skolem_consts.len(), 2);
        assert!(ip1
            .skolem_consts
            .iter()
            .all(|c| !ip2.skolem_consts.contains(c)));
        // the matrix is a disjunction of the Skolemized negated
        // pre-fixpoint obligation and the lemma matrix
        let (vars, matrix) = ip1.formula.strip_forall();
        assert_eq!(vars.len(), 2);
        let Formula::Or(parts) = matrix else { panic!() };
        assert_eq!(parts.len(), 2);
        assert!(matches!(parts[0], Formula::Not(_)));
    }

    #[test]
    fn ip_for_unary_head_has_one_constant() {
        let p = parse_problem(crate::logic::tests::LIST_PROBLEM).unwrap();
        let mut sig = p.sig.clone();
        let mut env = SkolemEnv::new();
        let lemma = Lemma::new(
            "list",
            vec![("x".into(), Sort::Foreground)],
            Formula::Eq(fg("x"), fg("x")),
        );
        let ip = make_ip(&lemma, &p.defs, &mut env, &mut sig).unwrap();
        assert_eq!(ip.skolem_consts.len(), 1);
    }
}
