//! The lemma proposer.
//!
//! Candidates `∀x̄. R(x̄) → ψ(x̄)` are drawn from a finite vocabulary of
//! atoms over the head's variables, foreground constants, and shallow
//! function applications, combined with boolean connectives and emitted
//! in nondecreasing body size. The stream is deduplicated up to a cheap
//! normal form and is fair: only finitely many candidates precede any
//! given one, and the order is a pure function of the grammar.
//!
//! Filtering evaluates the counterexample-guided constraints against
//! finite models: usefulness on the current pseudomodel, inductiveness
//! against stored countermodels (or Skolem tuples), and truth on
//! sampled least-fixpoint models. Everything is three-valued; only a
//! definitely-false observation prunes.

mod sygus;

pub use sygus::{emit_sygus, parse_sygus, SygusQuery};

use crate::induction::make_pfp;
use crate::logic::{
    print_formula, Formula, GrammarConfig, Lemma, RecDef, Signature, Sort, Term,
};
use crate::model::{FiniteModel, TruthValue, Value};
use indexmap::{IndexMap, IndexSet};
use itertools::Itertools;

/// The instantiated grammar: per-head atom vocabularies plus size
/// bounds.
#[derive(Debug, Clone)]
pub struct LemmaGrammar {
    pub heads: Vec<Head>,
    pub max_body_size: usize,
}

#[derive(Debug, Clone)]
pub struct Head {
    pub rel: String,
    pub vars: Vec<(String, Sort)>,
    pub atoms: Vec<Formula>,
}

impl LemmaGrammar {
    /// Build the grammar for a problem: heads default to every
    /// recursively defined relation (declaration order), and the atom
    /// vocabulary contains every relation atom, equality, and
    /// background comparison over terms up to the configured depth.
    pub fn build(
        sig: &Signature,
        defs: &IndexMap<String, RecDef>,
        cfg: &GrammarConfig,
    ) -> LemmaGrammar {
        let head_names: Vec<String> = match &cfg.heads {
            Some(hs) => hs.clone(),
            None => defs
                .values()
                .filter_map(|d| match d {
                    RecDef::Rel { name, .. } => Some(name.clone()),
                    RecDef::Func { .. } => None,
                })
                .collect(),
        };
        let int_literals = collect_int_literals(defs);
        let heads = head_names
            .into_iter()
            .filter_map(|rel| {
                let def = defs.get(&rel)?;
                let vars: Vec<(String, Sort)> = def.params().to_vec();
                let atoms = atom_vocabulary(sig, &vars, cfg, &int_literals);
                Some(Head { rel, vars, atoms })
            })
            .collect();
        LemmaGrammar {
            heads,
            max_body_size: cfg.max_body_size,
        }
    }
}

fn collect_int_literals(defs: &IndexMap<String, RecDef>) -> Vec<i64> {
    // literals appearing in definition bodies tend to matter (0 for
    // lengths, etc.); keep them available to the grammar
    fn walk_term(t: &Term, out: &mut IndexSet<i64>) {
        match t {
            Term::IntLit(n) => {
                out.insert(*n);
            }
            Term::App(_, args) => args.iter().for_each(|a| walk_term(a, out)),
            Term::Add(a, b) | Term::Sub(a, b) | Term::Union(a, b) => {
                walk_term(a, out);
                walk_term(b, out);
            }
            Term::Singleton(k) => walk_term(k, out),
            Term::Ite(c, a, b) => {
                walk_formula(c, out);
                walk_term(a, out);
                walk_term(b, out);
            }
            _ => {}
        }
    }
    fn walk_formula(f: &Formula, out: &mut IndexSet<i64>) {
        match f {
            Formula::Rel(_, args) => args.iter().for_each(|t| walk_term(t, out)),
            Formula::Eq(a, b) | Formula::Le(a, b) | Formula::Lt(a, b) | Formula::Member(a, b) => {
                walk_term(a, out);
                walk_term(b, out);
            }
            Formula::Not(g) => walk_formula(g, out),
            Formula::And(fs) | Formula::Or(fs) => fs.iter().for_each(|g| walk_formula(g, out)),
            Formula::Implies(a, b) | Formula::Iff(a, b) => {
                walk_formula(a, out);
                walk_formula(b, out);
            }
            Formula::Ite(c, t, e) => {
                walk_formula(c, out);
                walk_formula(t, out);
                walk_formula(e, out);
            }
            Formula::Forall(_, body) => walk_formula(body, out),
            Formula::True | Formula::False => {}
        }
    }
    let mut out = IndexSet::new();
    for d in defs.values() {
        match d {
            RecDef::Rel { body, .. } => walk_formula(body, &mut out),
            RecDef::Func { body, .. } => walk_term(body, &mut out),
        }
    }
    out.into_iter().collect()
}

fn atom_vocabulary(
    sig: &Signature,
    vars: &[(String, Sort)],
    cfg: &GrammarConfig,
    int_literals: &[i64],
) -> Vec<Formula> {
    // foreground term pool up to the configured depth
    let base_fg: Vec<Term> = vars
        .iter()
        .filter(|(_, s)| *s == Sort::Foreground)
        .map(|(v, s)| Term::Var(v.clone(), *s))
        .chain(sig.fg_consts().map(Term::cst))
        .collect();
    let mut fg_terms = base_fg.clone();
    let fg_funcs: Vec<(String, usize)> = sig.fg_funcs().map(|(n, a)| (n.to_string(), a)).collect();
    let mut layer = fg_terms.clone();
    for _ in 0..cfg.term_depth {
        let mut next = Vec::new();
        for (f, arity) in &fg_funcs {
            for tuple in std::iter::repeat(layer.iter())
                .take(*arity)
                .multi_cartesian_product()
            {
                next.push(Term::App(f.clone(), tuple.into_iter().cloned().collect()));
            }
        }
        fg_terms.extend(next.iter().cloned());
        layer = next;
    }

    // background-valued applications take depth-zero arguments only;
    // deeper background terms blow the vocabulary up without ever
    // appearing in the target lemmas
    let mut int_terms: Vec<Term> = vars
        .iter()
        .filter(|(_, s)| *s == Sort::Int)
        .map(|(v, s)| Term::Var(v.clone(), *s))
        .collect();
    int_terms.extend(
        sig.consts
            .iter()
            .filter(|(_, s)| **s == Sort::Int)
            .map(|(c, _)| Term::cst(c)),
    );
    int_terms.extend(int_literals.iter().map(|n| Term::IntLit(*n)));
    for (f, fs) in &sig.funcs {
        if fs.result == Sort::Int && !fs.params.is_empty()
            && fs.params.iter().all(|p| *p == Sort::Foreground)
        {
            for tuple in std::iter::repeat(base_fg.iter())
                .take(fs.params.len())
                .multi_cartesian_product()
            {
                int_terms.push(Term::App(f.clone(), tuple.into_iter().cloned().collect()));
            }
        }
    }

    let mut set_terms: Vec<Term> = Vec::new();
    if cfg.set_ops {
        set_terms.extend(
            sig.consts
                .iter()
                .filter(|(_, s)| **s == Sort::SetInt)
                .map(|(c, _)| Term::cst(c)),
        );
        set_terms.push(Term::EmptySet);
        for (f, fs) in &sig.funcs {
            if fs.result == Sort::SetInt && !fs.params.is_empty()
                && fs.params.iter().all(|p| *p == Sort::Foreground)
            {
                for tuple in std::iter::repeat(base_fg.iter())
                    .take(fs.params.len())
                    .multi_cartesian_product()
                {
                    set_terms.push(Term::App(f.clone(), tuple.into_iter().cloned().collect()));
                }
            }
        }
    }

    let mut atoms: Vec<Formula> = vec![Formula::True];
    // relation atoms over every declared relation with matching pools
    for (r, params) in &sig.rels {
        let pools: Vec<&[Term]> = params
            .iter()
            .map(|p| match p {
                Sort::Foreground => fg_terms.as_slice(),
                Sort::Int => int_terms.as_slice(),
                Sort::SetInt => set_terms.as_slice(),
                Sort::Bool => &[],
            })
            .collect();
        if pools.iter().any(|p| p.is_empty()) {
            if params.is_empty() {
                atoms.push(Formula::Rel(r.clone(), Vec::new()));
            }
            continue;
        }
        for tuple in pools.iter().map(|p| p.iter()).multi_cartesian_product() {
            atoms.push(Formula::Rel(
                r.clone(),
                tuple.into_iter().cloned().collect(),
            ));
        }
    }
    // foreground equalities (unordered pairs)
    for (i, a) in fg_terms.iter().enumerate() {
        for b in fg_terms.iter().skip(i + 1) {
            atoms.push(Formula::Eq(a.clone(), b.clone()));
        }
    }
    // integer atoms
    for (i, a) in int_terms.iter().enumerate() {
        for (j, b) in int_terms.iter().enumerate() {
            if i < j {
                atoms.push(Formula::Eq(a.clone(), b.clone()));
            }
            if i != j {
                atoms.push(Formula::Le(a.clone(), b.clone()));
                atoms.push(Formula::Lt(a.clone(), b.clone()));
            }
        }
    }
    // sum-equation atoms: a + b = c over the integer pool
    if cfg.int_arith {
        for (i, a) in int_terms.iter().enumerate() {
            for b in int_terms.iter().skip(i) {
                for c in &int_terms {
                    atoms.push(Formula::Eq(
                        Term::Add(a.clone().into(), b.clone().into()),
                        c.clone(),
                    ));
                }
            }
        }
    }
    // set atoms: equalities, membership, and union equations
    if cfg.set_ops {
        for (i, a) in set_terms.iter().enumerate() {
            for b in set_terms.iter().skip(i + 1) {
                atoms.push(Formula::Eq(a.clone(), b.clone()));
            }
        }
        for k in &int_terms {
            for s in &set_terms {
                atoms.push(Formula::Member(k.clone(), s.clone()));
            }
        }
        for (i, a) in set_terms.iter().enumerate() {
            for b in set_terms.iter().skip(i) {
                for c in &set_terms {
                    if c == a || c == b {
                        continue;
                    }
                    atoms.push(Formula::Eq(
                        Term::Union(a.clone().into(), b.clone().into()),
                        c.clone(),
                    ));
                }
            }
        }
    }
    atoms
}

/// Cheap normal form used for deduplication: commutative arguments
/// sorted, idempotent conjunction/disjunction collapsed, reflexive
/// equalities and constant operands folded.
pub fn normal_form(f: &Formula) -> Formula {
    match f {
        Formula::Eq(a, b) => {
            if a == b {
                Formula::True
            } else if print_formula(&Formula::Eq(b.clone(), a.clone()))
                < print_formula(&Formula::Eq(a.clone(), b.clone()))
            {
                Formula::Eq(b.clone(), a.clone())
            } else {
                f.clone()
            }
        }
        Formula::Lt(a, b) if a == b => Formula::False,
        Formula::Le(a, b) if a == b => Formula::True,
        Formula::Not(g) => match normal_form(g) {
            Formula::Not(inner) => *inner,
            Formula::True => Formula::False,
            Formula::False => Formula::True,
            h => Formula::not(h),
        },
        Formula::And(fs) | Formula::Or(fs) => {
            let is_and = matches!(f, Formula::And(_));
            let (unit, zero) = if is_and {
                (Formula::True, Formula::False)
            } else {
                (Formula::False, Formula::True)
            };
            let mut parts: Vec<Formula> = Vec::new();
            for g in fs {
                let n = normal_form(g);
                if n == zero {
                    return zero;
                }
                if n != unit && !parts.contains(&n) {
                    parts.push(n);
                }
            }
            parts.sort_by_key(print_formula);
            match parts.len() {
                0 => unit,
                1 => parts.into_iter().next().unwrap(),
                _ => {
                    if is_and {
                        Formula::And(parts)
                    } else {
                        Formula::Or(parts)
                    }
                }
            }
        }
        Formula::Implies(a, b) => {
            let (na, nb) = (normal_form(a), normal_form(b));
            match (&na, &nb) {
                (Formula::True, _) => nb,
                (Formula::False, _) => Formula::True,
                (_, Formula::True) => Formula::True,
                _ if na == nb => Formula::True,
                _ => Formula::implies(na, nb),
            }
        }
        Formula::Iff(a, b) => {
            let (na, nb) = (normal_form(a), normal_form(b));
            if na == nb {
                Formula::True
            } else if print_formula(&nb) < print_formula(&na) {
                Formula::iff(nb, na)
            } else {
                Formula::iff(na, nb)
            }
        }
        Formula::Ite(c, t, e) => {
            let (nc, nt, ne) = (normal_form(c), normal_form(t), normal_form(e));
            if nt == ne {
                nt
            } else {
                match nc {
                    Formula::True => nt,
                    Formula::False => ne,
                    _ => Formula::ite(nc, nt, ne),
                }
            }
        }
        _ => f.clone(),
    }
}

/// Body size: node count of the formula tree, atoms counting one.
pub fn body_size(f: &Formula) -> usize {
    match f {
        Formula::Not(g) => 1 + body_size(g),
        Formula::And(fs) | Formula::Or(fs) => 1 + fs.iter().map(body_size).sum::<usize>(),
        Formula::Implies(a, b) | Formula::Iff(a, b) => 1 + body_size(a) + body_size(b),
        Formula::Ite(c, t, e) => 1 + body_size(c) + body_size(t) + body_size(e),
        _ => 1,
    }
}

/// Materialize the candidate stream in fair order: nondecreasing body
/// size, heads in declaration order within a size, deduplicated up to
/// [`normal_form`] per head. At most `max` candidates are produced;
/// generation stops as soon as the cap is reached.
pub fn enumerate_candidates(grammar: &LemmaGrammar, max: usize) -> Vec<Lemma> {
    let mut out: Vec<Lemma> = Vec::new();
    let mut seen: Vec<IndexSet<String>> = grammar.heads.iter().map(|_| IndexSet::new()).collect();
    // deduplicated bodies per head per size, the building blocks of the
    // next sizes
    let mut kept: Vec<Vec<Vec<Formula>>> = grammar.heads.iter().map(|_| Vec::new()).collect();

    for size in 1..=grammar.max_body_size {
        for (hi, head) in grammar.heads.iter().enumerate() {
            let mut level: Vec<Formula> = Vec::new();
            let full = generate_level(&head.atoms, &kept[hi], size, |body| {
                if out.len() >= max {
                    return false;
                }
                let key = print_formula(&normal_form(&body));
                if seen[hi].insert(key) {
                    out.push(Lemma::new(head.rel.clone(), head.vars.clone(), body.clone()));
                    level.push(body);
                }
                true
            });
            kept[hi].push(level);
            if !full {
                return out;
            }
        }
    }
    out
}

/// Feed every body of exactly `size` nodes to `emit`; `kept[s-1]` holds
/// the deduplicated bodies of size `s`. Returns false when `emit`
/// signalled the cap.
fn generate_level(
    atoms: &[Formula],
    kept: &[Vec<Formula>],
    size: usize,
    mut emit: impl FnMut(Formula) -> bool,
) -> bool {
    if size == 1 {
        for a in atoms {
            if !emit(a.clone()) {
                return false;
            }
        }
        return true;
    }
    if size == 2 {
        // negation applies to atoms only
        for a in atoms {
            if !matches!(a, Formula::True | Formula::False) && !emit(Formula::not(a.clone())) {
                return false;
            }
        }
        return true;
    }
    for left_size in 1..=(size - 2) {
        let right_size = size - 1 - left_size;
        for l in &kept[left_size - 1] {
            for r in &kept[right_size - 1] {
                for body in [
                    Formula::And(vec![l.clone(), r.clone()]),
                    Formula::Or(vec![l.clone(), r.clone()]),
                    Formula::implies(l.clone(), r.clone()),
                    Formula::iff(l.clone(), r.clone()),
                ] {
                    if !emit(body) {
                        return false;
                    }
                }
            }
        }
    }
    if size >= 4 {
        for c_size in 1..=(size - 3) {
            for t_size in 1..=(size - 2 - c_size) {
                let e_size = size - 1 - c_size - t_size;
                for c in &kept[c_size - 1] {
                    for t in &kept[t_size - 1] {
                        for e in &kept[e_size - 1] {
                            if !emit(Formula::ite(c.clone(), t.clone(), e.clone())) {
                                return false;
                            }
                        }
                    }
                }
            }
        }
    }
    true
}

/// A stored witness that a lemma head currently has no inductive proof.
#[derive(Debug, Clone)]
pub struct CounterModel {
    pub model: FiniteModel,
    /// Names of the Skolem constants the negated obligation was
    /// instantiated on (their denotations sit in `model.consts`).
    pub skolem: Vec<String>,
}

/// The model-based constraints a candidate must satisfy.
pub struct SynthesisConstraints<'a> {
    /// The pseudomodel from the failed goal proof.
    pub pseudomodel: &'a FiniteModel,
    /// Per-head countermodels from failed inductive proofs.
    pub countermodels: &'a IndexMap<String, Vec<CounterModel>>,
    /// Per-head Skolem tuples, checked on the pseudomodel.
    pub skolem_tuples: &'a IndexMap<String, Vec<Vec<String>>>,
    /// Sampled true least-fixpoint models.
    pub true_models: &'a [FiniteModel],
    /// Cap on the number of tuples examined per constraint.
    pub tuple_cap: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Accept,
    /// (a) fails: no instantiated tuple definitely falsifies the lemma.
    RejectUsefulness,
    /// (b) fails: a stored witness definitely falsifies the candidate's
    /// pre-fixpoint obligation.
    RejectInductiveness,
    /// (c) fails: the lemma is definitely false on a true model.
    RejectTruth,
}

impl Verdict {
    pub fn label(self) -> &'static str {
        match self {
            Verdict::Accept => "accept",
            Verdict::RejectUsefulness => "reject-usefulness",
            Verdict::RejectInductiveness => "reject-inductiveness",
            Verdict::RejectTruth => "reject-truth",
        }
    }
}

/// Iterate assignments of model values to the lemma variables; stops
/// early when `f` returns true. Returns whether the tuple space was
/// truncated by the cap.
fn for_each_tuple(
    model: &FiniteModel,
    vars: &[(String, Sort)],
    cap: usize,
    mut f: impl FnMut(&IndexMap<String, Value>) -> bool,
) -> bool {
    let pools: Vec<Vec<Value>> = vars.iter().map(|(_, s)| model.sort_values(*s)).collect();
    if pools.iter().any(|p| p.is_empty()) {
        return false;
    }
    let mut count = 0usize;
    let mut idx = vec![0usize; vars.len()];
    loop {
        let mut assign: IndexMap<String, Value> = IndexMap::with_capacity(vars.len());
        for (pos, (v, _)) in vars.iter().enumerate() {
            assign.insert(v.clone(), pools[pos][idx[pos]].clone());
        }
        if f(&assign) {
            return false;
        }
        count += 1;
        if count >= cap {
            return true;
        }
        let mut i = vars.len();
        loop {
            if i == 0 {
                return false;
            }
            i -= 1;
            idx[i] += 1;
            if idx[i] < pools[i].len() {
                break;
            }
            idx[i] = 0;
        }
    }
}

/// Apply the constraint filter.
///
/// (a) some tuple of instantiated values definitely falsifies the
///     lemma matrix on the pseudomodel;
/// (b) no stored countermodel for the head definitely falsifies the
///     candidate's pre-fixpoint matrix on any of its tuples, and no
///     recorded Skolem tuple does so on the pseudomodel;
/// (c) every true model satisfies the lemma on all tuples.
pub fn filter_candidate(
    lemma: &Lemma,
    constraints: &SynthesisConstraints,
    defs: &IndexMap<String, RecDef>,
) -> Verdict {
    let matrix = lemma.matrix();

    // (a) usefulness
    let mut useful = false;
    for_each_tuple(
        constraints.pseudomodel,
        &lemma.vars,
        constraints.tuple_cap,
        |assign| {
            if constraints.pseudomodel.eval_formula(&matrix, assign) == TruthValue::False {
                useful = true;
                return true;
            }
            false
        },
    );
    if !useful {
        return Verdict::RejectUsefulness;
    }

    // (b) inductiveness filters
    let pfp = match make_pfp(lemma, defs) {
        Ok(f) => f,
        Err(_) => return Verdict::RejectInductiveness,
    };
    let (pfp_vars, pfp_matrix) = pfp.strip_forall();
    if let Some(models) = constraints.countermodels.get(&lemma.head) {
        for cm in models {
            let mut falsified = false;
            for_each_tuple(&cm.model, &pfp_vars, constraints.tuple_cap, |assign| {
                if cm.model.eval_formula(pfp_matrix, assign) == TruthValue::False {
                    falsified = true;
                    return true;
                }
                false
            });
            if falsified {
                return Verdict::RejectInductiveness;
            }
        }
    }
    if let Some(tuples) = constraints.skolem_tuples.get(&lemma.head) {
        for consts in tuples {
            let values: Option<Vec<Value>> = consts
                .iter()
                .map(|c| constraints.pseudomodel.consts.get(c).cloned())
                .collect();
            let Some(values) = values else { continue };
            if values.len() != pfp_vars.len() {
                continue;
            }
            let assign: IndexMap<String, Value> = pfp_vars
                .iter()
                .zip(values)
                .map(|((v, _), val)| (v.clone(), val))
                .collect();
            if constraints.pseudomodel.eval_formula(pfp_matrix, &assign) == TruthValue::False {
                return Verdict::RejectInductiveness;
            }
        }
    }

    // (c) truth filters
    for g in constraints.true_models {
        let mut false_somewhere = false;
        for_each_tuple(g, &lemma.vars, constraints.tuple_cap, |assign| {
            if g.eval_formula(&matrix, assign) == TruthValue::False {
                false_somewhere = true;
                return true;
            }
            false
        });
        if false_somewhere {
            return Verdict::RejectTruth;
        }
    }

    Verdict::Accept
}
