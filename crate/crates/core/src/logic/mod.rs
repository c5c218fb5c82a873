//! Sorted abstract syntax for first-order logic with recursive
//! definitions: sorts, signatures, terms, formulas, definitions, and the
//! structural operations the rest of the system is built on
//! (substitution, well-sortedness, positivity).
//!
//! There is a single uninterpreted foreground sort per problem; all
//! quantifiers range over it (or over `Int`, for definitions that carry
//! an integer parameter). Background sorts are fixed: linear integer
//! arithmetic and finite sets of integers.

mod parse;
mod print;

pub use parse::{parse_formula_str, parse_problem};
pub use print::{print_formula, print_formula_with, print_problem, print_term};

use indexmap::IndexMap;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum LogicError {
    #[error("parse error at {line}:{col}: {msg}")]
    Parse { line: usize, col: usize, msg: String },
    #[error("sort error: {0}")]
    Sort(String),
    #[error("positivity violation in definition of {rel}: {atom} occurs under a negation (path: {path})")]
    Positivity { rel: String, atom: String, path: String },
    #[error("duplicate definition of {0}")]
    DuplicateDef(String),
    #[error("duplicate declaration of {0}")]
    DuplicateDecl(String),
    #[error("arity mismatch for {symbol}: expected {expected}, got {got}")]
    Arity { symbol: String, expected: usize, got: usize },
    #[error("{0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, LogicError>;

/// A sort. The foreground sort is uninterpreted; the others carry fixed
/// theory semantics.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sort {
    Foreground,
    Int,
    SetInt,
    Bool,
}

impl Sort {
    pub fn is_background(self) -> bool {
        self != Sort::Foreground
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FuncSig {
    pub params: Vec<Sort>,
    pub result: Sort,
}

/// Constants, functions, and relations. Names are unique across all
/// three namespaces.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Signature {
    /// Printed name of the foreground sort (e.g. `Loc`).
    pub foreground_sort: String,
    pub consts: IndexMap<String, Sort>,
    pub funcs: IndexMap<String, FuncSig>,
    pub rels: IndexMap<String, Vec<Sort>>,
}

impl Signature {
    pub fn new(foreground_sort: impl Into<String>) -> Self {
        Signature {
            foreground_sort: foreground_sort.into(),
            ..Default::default()
        }
    }

    fn check_fresh(&self, name: &str) -> Result<()> {
        if self.consts.contains_key(name)
            || self.funcs.contains_key(name)
            || self.rels.contains_key(name)
        {
            return Err(LogicError::DuplicateDecl(name.to_string()));
        }
        Ok(())
    }

    pub fn add_const(&mut self, name: impl Into<String>, sort: Sort) -> Result<()> {
        let name = name.into();
        self.check_fresh(&name)?;
        self.consts.insert(name, sort);
        Ok(())
    }

    pub fn add_func(&mut self, name: impl Into<String>, params: Vec<Sort>, result: Sort) -> Result<()> {
        let name = name.into();
        self.check_fresh(&name)?;
        self.funcs.insert(name, FuncSig { params, result });
        Ok(())
    }

    pub fn add_rel(&mut self, name: impl Into<String>, params: Vec<Sort>) -> Result<()> {
        let name = name.into();
        self.check_fresh(&name)?;
        self.rels.insert(name, params);
        Ok(())
    }

    /// Foreground constants, in declaration order.
    pub fn fg_consts(&self) -> impl Iterator<Item = &str> {
        self.consts
            .iter()
            .filter(|(_, s)| **s == Sort::Foreground)
            .map(|(n, _)| n.as_str())
    }

    /// Functions from foreground tuples to the foreground sort.
    pub fn fg_funcs(&self) -> impl Iterator<Item = (&str, usize)> {
        self.funcs.iter().filter_map(|(n, f)| {
            if f.result == Sort::Foreground && f.params.iter().all(|p| *p == Sort::Foreground) {
                Some((n.as_str(), f.params.len()))
            } else {
                None
            }
        })
    }
}

/// A term of the syntax. Background operations are first-class nodes;
/// `App` covers declared (and recursively defined) functions.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Term {
    Var(String, Sort),
    Const(String),
    App(String, Vec<Term>),
    IntLit(i64),
    Add(Box<Term>, Box<Term>),
    Sub(Box<Term>, Box<Term>),
    EmptySet,
    Singleton(Box<Term>),
    Union(Box<Term>, Box<Term>),
    Ite(Box<Formula>, Box<Term>, Box<Term>),
}

impl Term {
    pub fn var(name: impl Into<String>, sort: Sort) -> Term {
        Term::Var(name.into(), sort)
    }

    pub fn cst(name: impl Into<String>) -> Term {
        Term::Const(name.into())
    }

    pub fn app(name: impl Into<String>, args: Vec<Term>) -> Term {
        Term::App(name.into(), args)
    }

    /// Sort of the term under a signature and bound-variable context.
    pub fn sort(&self, sig: &Signature) -> Result<Sort> {
        match self {
            Term::Var(_, s) => Ok(*s),
            Term::Const(c) => sig
                .consts
                .get(c)
                .copied()
                .ok_or_else(|| LogicError::Sort(format!("unknown constant {c}"))),
            Term::App(f, args) => {
                let fs = sig
                    .funcs
                    .get(f)
                    .ok_or_else(|| LogicError::Sort(format!("unknown function {f}")))?;
                if fs.params.len() != args.len() {
                    return Err(LogicError::Arity {
                        symbol: f.clone(),
                        expected: fs.params.len(),
                        got: args.len(),
                    });
                }
                for (a, expect) in args.iter().zip(&fs.params) {
                    let got = a.sort(sig)?;
                    if got != *expect {
                        return Err(LogicError::Sort(format!(
                            "argument {} of {f} has sort {got:?}, expected {expect:?}",
                            print_term(a)
                        )));
                    }
                }
                Ok(fs.result)
            }
            Term::IntLit(_) => Ok(Sort::Int),
            Term::Add(a, b) | Term::Sub(a, b) => {
                for t in [a, b] {
                    if t.sort(sig)? != Sort::Int {
                        return Err(LogicError::Sort("arithmetic on non-Int term".into()));
                    }
                }
                Ok(Sort::Int)
            }
            Term::EmptySet => Ok(Sort::SetInt),
            Term::Singleton(k) => {
                if k.sort(sig)? != Sort::Int {
                    return Err(LogicError::Sort("singleton of non-Int term".into()));
                }
                Ok(Sort::SetInt)
            }
            Term::Union(a, b) => {
                for t in [a, b] {
                    if t.sort(sig)? != Sort::SetInt {
                        return Err(LogicError::Sort("union of non-set term".into()));
                    }
                }
                Ok(Sort::SetInt)
            }
            Term::Ite(c, t, e) => {
                c.well_sorted(sig)?;
                let st = t.sort(sig)?;
                let se = e.sort(sig)?;
                if st != se {
                    return Err(LogicError::Sort("ite branches have different sorts".into()));
                }
                Ok(st)
            }
        }
    }

    /// Maximum nesting of foreground-sort function applications.
    pub fn fg_depth(&self, sig: &Signature) -> usize {
        match self {
            Term::Var(..) | Term::Const(_) | Term::IntLit(_) | Term::EmptySet => 0,
            Term::App(f, args) => {
                let inner = args.iter().map(|a| a.fg_depth(sig)).max().unwrap_or(0);
                let own = match sig.funcs.get(f) {
                    Some(fs) if fs.result == Sort::Foreground => 1,
                    _ => 0,
                };
                own + inner
            }
            Term::Add(a, b) | Term::Sub(a, b) | Term::Union(a, b) => {
                a.fg_depth(sig).max(b.fg_depth(sig))
            }
            Term::Singleton(k) => k.fg_depth(sig),
            Term::Ite(c, t, e) => c
                .max_fg_depth(sig)
                .max(t.fg_depth(sig))
                .max(e.fg_depth(sig)),
        }
    }

    pub fn is_ground(&self) -> bool {
        match self {
            Term::Var(..) => false,
            Term::Const(_) | Term::IntLit(_) | Term::EmptySet => true,
            Term::App(_, args) => args.iter().all(|a| a.is_ground()),
            Term::Add(a, b) | Term::Sub(a, b) | Term::Union(a, b) => {
                a.is_ground() && b.is_ground()
            }
            Term::Singleton(k) => k.is_ground(),
            Term::Ite(c, t, e) => c.free_vars().is_empty() && t.is_ground() && e.is_ground(),
        }
    }

    /// Simultaneous substitution of variables by terms.
    pub fn subst_vars(&self, map: &IndexMap<String, Term>) -> Term {
        match self {
            Term::Var(v, _) => map.get(v).cloned().unwrap_or_else(|| self.clone()),
            Term::Const(_) | Term::IntLit(_) | Term::EmptySet => self.clone(),
            Term::App(f, args) => {
                Term::App(f.clone(), args.iter().map(|a| a.subst_vars(map)).collect())
            }
            Term::Add(a, b) => Term::Add(a.subst_vars(map).into(), b.subst_vars(map).into()),
            Term::Sub(a, b) => Term::Sub(a.subst_vars(map).into(), b.subst_vars(map).into()),
            Term::Union(a, b) => Term::Union(a.subst_vars(map).into(), b.subst_vars(map).into()),
            Term::Singleton(k) => Term::Singleton(k.subst_vars(map).into()),
            Term::Ite(c, t, e) => Term::Ite(
                c.subst_vars(map).into(),
                t.subst_vars(map).into(),
                e.subst_vars(map).into(),
            ),
        }
    }

    fn collect_vars<'a>(&'a self, out: &mut Vec<(&'a str, Sort)>) {
        match self {
            Term::Var(v, s) => {
                if !out.iter().any(|(n, _)| *n == v) {
                    out.push((v, *s));
                }
            }
            Term::Const(_) | Term::IntLit(_) | Term::EmptySet => {}
            Term::App(_, args) => args.iter().for_each(|a| a.collect_vars(out)),
            Term::Add(a, b) | Term::Sub(a, b) | Term::Union(a, b) => {
                a.collect_vars(out);
                b.collect_vars(out);
            }
            Term::Singleton(k) => k.collect_vars(out),
            Term::Ite(c, t, e) => {
                c.collect_vars_formula(out);
                t.collect_vars(out);
                e.collect_vars(out);
            }
        }
    }
}

/// A formula. Quantifiers bind foreground- or `Int`-sorted variables
/// only, and implication and ite are kept first class (the polarity walk
/// desugars them internally).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Formula {
    True,
    False,
    Rel(String, Vec<Term>),
    Eq(Term, Term),
    Le(Term, Term),
    Lt(Term, Term),
    Member(Term, Term),
    Not(Box<Formula>),
    And(Vec<Formula>),
    Or(Vec<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Iff(Box<Formula>, Box<Formula>),
    Ite(Box<Formula>, Box<Formula>, Box<Formula>),
    Forall(Vec<(String, Sort)>, Box<Formula>),
}

impl Formula {
    pub fn rel(name: impl Into<String>, args: Vec<Term>) -> Formula {
        Formula::Rel(name.into(), args)
    }

    pub fn not(f: Formula) -> Formula {
        Formula::Not(Box::new(f))
    }

    pub fn implies(a: Formula, b: Formula) -> Formula {
        Formula::Implies(Box::new(a), Box::new(b))
    }

    pub fn iff(a: Formula, b: Formula) -> Formula {
        Formula::Iff(Box::new(a), Box::new(b))
    }

    pub fn ite(c: Formula, t: Formula, e: Formula) -> Formula {
        Formula::Ite(Box::new(c), Box::new(t), Box::new(e))
    }

    pub fn forall(vars: Vec<(String, Sort)>, body: Formula) -> Formula {
        if vars.is_empty() {
            body
        } else {
            Formula::Forall(vars, Box::new(body))
        }
    }

    pub fn is_quantifier_free(&self) -> bool {
        match self {
            Formula::Forall(..) => false,
            Formula::True | Formula::False => true,
            Formula::Rel(_, args) => args.iter().all(term_qf),
            Formula::Eq(a, b) | Formula::Le(a, b) | Formula::Lt(a, b) | Formula::Member(a, b) => {
                term_qf(a) && term_qf(b)
            }
            Formula::Not(f) => f.is_quantifier_free(),
            Formula::And(fs) | Formula::Or(fs) => fs.iter().all(|f| f.is_quantifier_free()),
            Formula::Implies(a, b) | Formula::Iff(a, b) => {
                a.is_quantifier_free() && b.is_quantifier_free()
            }
            Formula::Ite(c, t, e) => {
                c.is_quantifier_free() && t.is_quantifier_free() && e.is_quantifier_free()
            }
        }
    }

    /// Split a universal formula into its (possibly empty) prefix and
    /// quantifier-free matrix. Nested prefixes are merged.
    pub fn strip_forall(&self) -> (Vec<(String, Sort)>, &Formula) {
        let mut vars = Vec::new();
        let mut cur = self;
        while let Formula::Forall(vs, body) = cur {
            vars.extend(vs.iter().cloned());
            cur = body;
        }
        (vars, cur)
    }

    /// Free variables in first-occurrence order.
    pub fn free_vars(&self) -> Vec<(String, Sort)> {
        let mut out = Vec::new();
        self.free_vars_into(&mut Vec::new(), &mut out);
        out
    }

    fn free_vars_into(&self, bound: &mut Vec<String>, out: &mut Vec<(String, Sort)>) {
        let mut term_vars = Vec::new();
        match self {
            Formula::True | Formula::False => {}
            Formula::Rel(_, args) => args.iter().for_each(|a| a.collect_vars(&mut term_vars)),
            Formula::Eq(a, b) | Formula::Le(a, b) | Formula::Lt(a, b) | Formula::Member(a, b) => {
                a.collect_vars(&mut term_vars);
                b.collect_vars(&mut term_vars);
            }
            Formula::Not(f) => f.free_vars_into(bound, out),
            Formula::And(fs) | Formula::Or(fs) => {
                fs.iter().for_each(|f| f.free_vars_into(bound, out))
            }
            Formula::Implies(a, b) | Formula::Iff(a, b) => {
                a.free_vars_into(bound, out);
                b.free_vars_into(bound, out);
            }
            Formula::Ite(c, t, e) => {
                c.free_vars_into(bound, out);
                t.free_vars_into(bound, out);
                e.free_vars_into(bound, out);
            }
            Formula::Forall(vs, body) => {
                let n = bound.len();
                bound.extend(vs.iter().map(|(v, _)| v.clone()));
                body.free_vars_into(bound, out);
                bound.truncate(n);
            }
        }
        for (v, s) in term_vars {
            if !bound.iter().any(|b| b == v) && !out.iter().any(|(n, _)| n == v) {
                out.push((v.to_string(), s));
            }
        }
    }

    fn collect_vars_formula<'a>(&'a self, out: &mut Vec<(&'a str, Sort)>) {
        match self {
            Formula::True | Formula::False => {}
            Formula::Rel(_, args) => args.iter().for_each(|a| a.collect_vars(out)),
            Formula::Eq(a, b) | Formula::Le(a, b) | Formula::Lt(a, b) | Formula::Member(a, b) => {
                a.collect_vars(out);
                b.collect_vars(out);
            }
            Formula::Not(f) => f.collect_vars_formula(out),
            Formula::And(fs) | Formula::Or(fs) => {
                fs.iter().for_each(|f| f.collect_vars_formula(out))
            }
            Formula::Implies(a, b) | Formula::Iff(a, b) => {
                a.collect_vars_formula(out);
                b.collect_vars_formula(out);
            }
            Formula::Ite(c, t, e) => {
                c.collect_vars_formula(out);
                t.collect_vars_formula(out);
                e.collect_vars_formula(out);
            }
            Formula::Forall(_, body) => body.collect_vars_formula(out),
        }
    }

    fn max_fg_depth(&self, sig: &Signature) -> usize {
        match self {
            Formula::True | Formula::False => 0,
            Formula::Rel(_, args) => args.iter().map(|a| a.fg_depth(sig)).max().unwrap_or(0),
            Formula::Eq(a, b) | Formula::Le(a, b) | Formula::Lt(a, b) | Formula::Member(a, b) => {
                a.fg_depth(sig).max(b.fg_depth(sig))
            }
            Formula::Not(f) => f.max_fg_depth(sig),
            Formula::And(fs) | Formula::Or(fs) => {
                fs.iter().map(|f| f.max_fg_depth(sig)).max().unwrap_or(0)
            }
            Formula::Implies(a, b) | Formula::Iff(a, b) => a.max_fg_depth(sig).max(b.max_fg_depth(sig)),
            Formula::Ite(c, t, e) => c
                .max_fg_depth(sig)
                .max(t.max_fg_depth(sig))
                .max(e.max_fg_depth(sig)),
            Formula::Forall(_, body) => body.max_fg_depth(sig),
        }
    }

    /// Simultaneous substitution of free variables by terms. Respects
    /// shadowing but does not rename binders; replacement terms must not
    /// mention variables that are bound in the formula.
    pub fn subst_vars(&self, map: &IndexMap<String, Term>) -> Formula {
        match self {
            Formula::True | Formula::False => self.clone(),
            Formula::Rel(r, args) => {
                Formula::Rel(r.clone(), args.iter().map(|a| a.subst_vars(map)).collect())
            }
            Formula::Eq(a, b) => Formula::Eq(a.subst_vars(map), b.subst_vars(map)),
            Formula::Le(a, b) => Formula::Le(a.subst_vars(map), b.subst_vars(map)),
            Formula::Lt(a, b) => Formula::Lt(a.subst_vars(map), b.subst_vars(map)),
            Formula::Member(a, b) => Formula::Member(a.subst_vars(map), b.subst_vars(map)),
            Formula::Not(f) => Formula::not(f.subst_vars(map)),
            Formula::And(fs) => Formula::And(fs.iter().map(|f| f.subst_vars(map)).collect()),
            Formula::Or(fs) => Formula::Or(fs.iter().map(|f| f.subst_vars(map)).collect()),
            Formula::Implies(a, b) => Formula::implies(a.subst_vars(map), b.subst_vars(map)),
            Formula::Iff(a, b) => Formula::iff(a.subst_vars(map), b.subst_vars(map)),
            Formula::Ite(c, t, e) => {
                Formula::ite(c.subst_vars(map), t.subst_vars(map), e.subst_vars(map))
            }
            Formula::Forall(vs, body) => {
                let mut inner = map.clone();
                for (v, _) in vs {
                    inner.shift_remove(v);
                }
                Formula::Forall(vs.clone(), Box::new(body.subst_vars(&inner)))
            }
        }
    }

    /// Well-sortedness under a signature, with `bound` giving the sorts
    /// of the free variables in scope.
    pub fn well_sorted(&self, sig: &Signature) -> Result<()> {
        match self {
            Formula::True | Formula::False => Ok(()),
            Formula::Rel(r, args) => {
                let params = sig
                    .rels
                    .get(r)
                    .ok_or_else(|| LogicError::Sort(format!("unknown relation {r}")))?;
                if params.len() != args.len() {
                    return Err(LogicError::Arity {
                        symbol: r.clone(),
                        expected: params.len(),
                        got: args.len(),
                    });
                }
                for (a, expect) in args.iter().zip(params) {
                    let got = a.sort(sig)?;
                    if got != *expect {
                        return Err(LogicError::Sort(format!(
                            "argument {} of {r} has sort {got:?}, expected {expect:?}",
                            print_term(a)
                        )));
                    }
                }
                Ok(())
            }
            Formula::Eq(a, b) => {
                let (sa, sb) = (a.sort(sig)?, b.sort(sig)?);
                if sa != sb {
                    return Err(LogicError::Sort(format!(
                        "equality between {sa:?} and {sb:?}"
                    )));
                }
                Ok(())
            }
            Formula::Le(a, b) | Formula::Lt(a, b) => {
                if a.sort(sig)? != Sort::Int || b.sort(sig)? != Sort::Int {
                    return Err(LogicError::Sort("comparison on non-Int terms".into()));
                }
                Ok(())
            }
            Formula::Member(k, s) => {
                if k.sort(sig)? != Sort::Int || s.sort(sig)? != Sort::SetInt {
                    return Err(LogicError::Sort("member expects Int and SetInt".into()));
                }
                Ok(())
            }
            Formula::Not(f) => f.well_sorted(sig),
            Formula::And(fs) | Formula::Or(fs) => fs.iter().try_for_each(|f| f.well_sorted(sig)),
            Formula::Implies(a, b) | Formula::Iff(a, b) => {
                a.well_sorted(sig)?;
                b.well_sorted(sig)
            }
            Formula::Ite(c, t, e) => {
                c.well_sorted(sig)?;
                t.well_sorted(sig)?;
                e.well_sorted(sig)
            }
            Formula::Forall(vs, body) => {
                for (v, s) in vs {
                    if *s == Sort::SetInt || *s == Sort::Bool {
                        return Err(LogicError::Sort(format!(
                            "quantified variable {v} has background sort {s:?}"
                        )));
                    }
                }
                body.well_sorted(sig)
            }
        }
    }
}

fn term_qf(t: &Term) -> bool {
    match t {
        Term::Var(..) | Term::Const(_) | Term::IntLit(_) | Term::EmptySet => true,
        Term::App(_, args) => args.iter().all(term_qf),
        Term::Add(a, b) | Term::Sub(a, b) | Term::Union(a, b) => term_qf(a) && term_qf(b),
        Term::Singleton(k) => term_qf(k),
        Term::Ite(c, t, e) => c.is_quantifier_free() && term_qf(t) && term_qf(e),
    }
}

/// A recursive definition, either of a relation or of a function whose
/// body is built from ite terms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RecDef {
    Rel {
        name: String,
        params: Vec<(String, Sort)>,
        body: Formula,
    },
    Func {
        name: String,
        params: Vec<(String, Sort)>,
        result: Sort,
        body: Term,
    },
}

impl RecDef {
    pub fn name(&self) -> &str {
        match self {
            RecDef::Rel { name, .. } | RecDef::Func { name, .. } => name,
        }
    }

    pub fn params(&self) -> &[(String, Sort)] {
        match self {
            RecDef::Rel { params, .. } | RecDef::Func { params, .. } => params,
        }
    }
}

/// `∀x̄. R(x̄) → ψ(x̄)` for a recursively defined relation `R` and a
/// quantifier-free `ψ`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Lemma {
    pub head: String,
    pub vars: Vec<(String, Sort)>,
    pub body: Formula,
}

impl Lemma {
    pub fn new(head: impl Into<String>, vars: Vec<(String, Sort)>, body: Formula) -> Lemma {
        Lemma {
            head: head.into(),
            vars,
            body,
        }
    }

    /// The quantifier-free matrix `R(x̄) → ψ(x̄)`.
    pub fn matrix(&self) -> Formula {
        Formula::implies(
            Formula::Rel(
                self.head.clone(),
                self.vars
                    .iter()
                    .map(|(v, s)| Term::Var(v.clone(), *s))
                    .collect(),
            ),
            self.body.clone(),
        )
    }

    /// The closed universal formula.
    pub fn to_formula(&self) -> Formula {
        Formula::forall(self.vars.clone(), self.matrix())
    }
}

impl std::fmt::Display for Lemma {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", print_formula(&self.to_formula()))
    }
}

/// Knobs for the candidate-lemma grammar, read from the problem file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GrammarConfig {
    /// Head relations to enumerate over; defaults to every recursively
    /// defined relation.
    pub heads: Option<Vec<String>>,
    /// Maximum foreground term depth in atoms (1 or 2).
    pub term_depth: usize,
    /// Largest body size (node count) the enumerator will reach.
    pub max_body_size: usize,
    /// Allow `+`/`-` between integer atoms' operands.
    pub int_arith: bool,
    /// Allow set-algebra atoms.
    pub set_ops: bool,
}

impl Default for GrammarConfig {
    fn default() -> Self {
        GrammarConfig {
            heads: None,
            term_depth: 1,
            max_body_size: 5,
            int_arith: false,
            set_ops: false,
        }
    }
}

/// A parsed input: signature, recursive definitions, axioms, goal, and
/// grammar configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct Problem {
    pub sig: Signature,
    pub defs: IndexMap<String, RecDef>,
    pub axioms: Vec<Formula>,
    pub goal: Formula,
    pub grammar: GrammarConfig,
    /// Expected-result annotations used by the corpus runner.
    pub expected: Vec<Lemma>,
}

impl Problem {
    /// Relation definitions, in declaration order.
    pub fn rel_defs(&self) -> impl Iterator<Item = &RecDef> {
        self.defs.values().filter(|d| matches!(d, RecDef::Rel { .. }))
    }

    pub fn func_defs(&self) -> impl Iterator<Item = &RecDef> {
        self.defs.values().filter(|d| matches!(d, RecDef::Func { .. }))
    }
}

/// Replace every atom `R(t̄)` in `f` by `replacement(t̄)`, leaving all
/// other structure (including other relations) untouched.
pub fn substitute_rel(
    f: &Formula,
    rel: &str,
    arity: usize,
    replacement: &dyn Fn(&[Term]) -> Formula,
) -> Result<Formula> {
    Ok(match f {
        Formula::Rel(r, args) if r == rel => {
            if args.len() != arity {
                return Err(LogicError::Arity {
                    symbol: rel.to_string(),
                    expected: arity,
                    got: args.len(),
                });
            }
            replacement(args)
        }
        Formula::True | Formula::False | Formula::Rel(..) | Formula::Eq(..) | Formula::Le(..)
        | Formula::Lt(..) | Formula::Member(..) => f.clone(),
        Formula::Not(g) => Formula::not(substitute_rel(g, rel, arity, replacement)?),
        Formula::And(fs) => Formula::And(
            fs.iter()
                .map(|g| substitute_rel(g, rel, arity, replacement))
                .collect::<Result<_>>()?,
        ),
        Formula::Or(fs) => Formula::Or(
            fs.iter()
                .map(|g| substitute_rel(g, rel, arity, replacement))
                .collect::<Result<_>>()?,
        ),
        Formula::Implies(a, b) => Formula::implies(
            substitute_rel(a, rel, arity, replacement)?,
            substitute_rel(b, rel, arity, replacement)?,
        ),
        Formula::Iff(a, b) => Formula::iff(
            substitute_rel(a, rel, arity, replacement)?,
            substitute_rel(b, rel, arity, replacement)?,
        ),
        Formula::Ite(c, t, e) => Formula::ite(
            substitute_rel(c, rel, arity, replacement)?,
            substitute_rel(t, rel, arity, replacement)?,
            substitute_rel(e, rel, arity, replacement)?,
        ),
        Formula::Forall(vs, body) => Formula::Forall(
            vs.clone(),
            Box::new(substitute_rel(body, rel, arity, replacement)?),
        ),
    })
}

/// Result of the polarity walk: `Ok(())` or the first violating atom.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PositivityViolation {
    pub rel: String,
    pub atom: String,
    pub path: String,
}

/// Check that every occurrence of a recursively defined relation in
/// `def`'s body sits under an even number of negations, with `→`, `↔`,
/// and ite desugared.
pub fn check_positivity(
    def: &RecDef,
    all_defs: &IndexMap<String, RecDef>,
) -> std::result::Result<(), PositivityViolation> {
    let body = match def {
        RecDef::Rel { body, .. } => body.clone(),
        RecDef::Func { body, .. } => {
            // a function body can mention recursive relations inside ite
            // conditions; collect those conditions and walk them
            let mut conds = Vec::new();
            collect_term_conditions(body, &mut conds);
            Formula::And(conds)
        }
    };
    walk_polarity(&body, true, "body", def.name(), all_defs)
}

fn collect_term_conditions(t: &Term, out: &mut Vec<Formula>) {
    match t {
        Term::Ite(c, a, b) => {
            out.push((**c).clone());
            collect_term_conditions(a, out);
            collect_term_conditions(b, out);
        }
        Term::App(_, args) => args.iter().for_each(|a| collect_term_conditions(a, out)),
        Term::Add(a, b) | Term::Sub(a, b) | Term::Union(a, b) => {
            collect_term_conditions(a, out);
            collect_term_conditions(b, out);
        }
        Term::Singleton(k) => collect_term_conditions(k, out),
        Term::Var(..) | Term::Const(_) | Term::IntLit(_) | Term::EmptySet => {}
    }
}

fn walk_polarity(
    f: &Formula,
    positive: bool,
    path: &str,
    def_name: &str,
    defs: &IndexMap<String, RecDef>,
) -> std::result::Result<(), PositivityViolation> {
    match f {
        Formula::Rel(r, _) if defs.contains_key(r) => {
            if positive {
                Ok(())
            } else {
                Err(PositivityViolation {
                    rel: def_name.to_string(),
                    atom: print_formula(f),
                    path: path.to_string(),
                })
            }
        }
        Formula::True | Formula::False | Formula::Rel(..) | Formula::Eq(..) | Formula::Le(..)
        | Formula::Lt(..) | Formula::Member(..) => Ok(()),
        Formula::Not(g) => walk_polarity(g, !positive, &format!("{path}/not"), def_name, defs),
        Formula::And(fs) => fs.iter().enumerate().try_for_each(|(i, g)| {
            walk_polarity(g, positive, &format!("{path}/and[{i}]"), def_name, defs)
        }),
        Formula::Or(fs) => fs.iter().enumerate().try_for_each(|(i, g)| {
            walk_polarity(g, positive, &format!("{path}/or[{i}]"), def_name, defs)
        }),
        Formula::Implies(a, b) => {
            walk_polarity(a, !positive, &format!("{path}/=>[0]"), def_name, defs)?;
            walk_polarity(b, positive, &format!("{path}/=>[1]"), def_name, defs)
        }
        Formula::Iff(a, b) => {
            // both polarities on both sides
            for (i, g) in [a, b].into_iter().enumerate() {
                walk_polarity(g, positive, &format!("{path}/iff[{i}]"), def_name, defs)?;
                walk_polarity(g, !positive, &format!("{path}/iff[{i}]"), def_name, defs)?;
            }
            Ok(())
        }
        Formula::Ite(c, t, e) => {
            // ite(c, t, e) ≡ (c → t) ∧ (¬c → e): c appears in both polarities
            walk_polarity(c, positive, &format!("{path}/ite-cond"), def_name, defs)?;
            walk_polarity(c, !positive, &format!("{path}/ite-cond"), def_name, defs)?;
            walk_polarity(t, positive, &format!("{path}/ite-then"), def_name, defs)?;
            walk_polarity(e, positive, &format!("{path}/ite-else"), def_name, defs)
        }
        Formula::Forall(_, body) => {
            walk_polarity(body, positive, &format!("{path}/forall"), def_name, defs)
        }
    }
}

#[cfg(test)]
pub(crate) mod tests;
