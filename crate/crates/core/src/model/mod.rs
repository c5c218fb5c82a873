//! Finite-model machinery: partial models with three-valued evaluation,
//! least-fixpoint evaluation of recursive definitions, random true-model
//! generation, and the universal-model packaging used by the SyGuS
//! emission path.

mod gen;
mod lfp;
mod universal;

pub use gen::{gen_true_models, GenConfig, GenReport};
pub use lfp::{is_least_fixpoint, lfp_eval, LfpError};
pub use universal::{UniversalModel, UValue};

use crate::logic::{Formula, Sort, Term};
use indexmap::IndexMap;
use std::collections::BTreeSet;

/// A value in a finite model. Foreground elements are abstract ids;
/// background values are literals. `SetBottom` is the designated
/// undefined-set value, distinct from every constructed set.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Value {
    Elem(usize),
    Int(i64),
    Bool(bool),
    Set(BTreeSet<i64>),
    SetBottom,
}

impl Value {
    pub fn render(&self) -> String {
        match self {
            Value::Elem(e) => format!("e{e}"),
            Value::Int(n) => n.to_string(),
            Value::Bool(b) => b.to_string(),
            Value::Set(s) => format!("{{{}}}", s.iter().map(|n| n.to_string()).collect::<Vec<_>>().join(",")),
            Value::SetBottom => "set-bottom".to_string(),
        }
    }

    fn matches_sort(&self, sort: Sort) -> bool {
        matches!(
            (self, sort),
            (Value::Elem(_), Sort::Foreground)
                | (Value::Int(_), Sort::Int)
                | (Value::Bool(_), Sort::Bool)
                | (Value::Set(_), Sort::SetInt)
                | (Value::SetBottom, Sort::SetInt)
        )
    }
}

/// Three-valued truth under partial interpretations; `Unknown` arises
/// only from undefined interpretation points.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TruthValue {
    True,
    False,
    Unknown,
}

impl TruthValue {
    pub fn from_bool(b: bool) -> Self {
        if b {
            TruthValue::True
        } else {
            TruthValue::False
        }
    }

    pub fn negate(self) -> Self {
        match self {
            TruthValue::True => TruthValue::False,
            TruthValue::False => TruthValue::True,
            TruthValue::Unknown => TruthValue::Unknown,
        }
    }

    pub fn and(self, other: Self) -> Self {
        match (self, other) {
            (TruthValue::False, _) | (_, TruthValue::False) => TruthValue::False,
            (TruthValue::True, TruthValue::True) => TruthValue::True,
            _ => TruthValue::Unknown,
        }
    }

    pub fn or(self, other: Self) -> Self {
        match (self, other) {
            (TruthValue::True, _) | (_, TruthValue::True) => TruthValue::True,
            (TruthValue::False, TruthValue::False) => TruthValue::False,
            _ => TruthValue::Unknown,
        }
    }
}

/// A finite, possibly partial interpretation. Functions and relations
/// are graphs defined only on recorded points; queries off the recorded
/// domain yield `None`/`Unknown` unless the model is marked total, in
/// which case missing relation tuples read as false (closed world).
#[derive(Debug, Clone, PartialEq)]
pub struct FiniteModel {
    /// Foreground universe: elements `0..fg_size`.
    pub fg_size: usize,
    /// Canonical display names per element (representative terms for
    /// extracted models).
    pub elem_names: Vec<String>,
    pub consts: IndexMap<String, Value>,
    pub funcs: IndexMap<String, IndexMap<Vec<Value>, Value>>,
    pub rels: IndexMap<String, IndexMap<Vec<Value>, bool>>,
    /// Denotations of the instantiated ground terms (the provenance of
    /// an extracted model), in term order.
    pub term_values: Vec<(Term, Value)>,
    /// Window of integer values recorded for set membership and used
    /// to range integer-sorted variables.
    pub int_range: (i64, i64),
    /// Total models evaluate missing relation tuples as false.
    pub total: bool,
}

impl FiniteModel {
    pub fn empty(fg_size: usize, int_range: (i64, i64)) -> Self {
        FiniteModel {
            fg_size,
            elem_names: (0..fg_size).map(|i| format!("e{i}")).collect(),
            consts: IndexMap::new(),
            funcs: IndexMap::new(),
            rels: IndexMap::new(),
            term_values: Vec::new(),
            int_range,
            total: false,
        }
    }

    pub fn fg_elements(&self) -> impl Iterator<Item = Value> + '_ {
        (0..self.fg_size).map(Value::Elem)
    }

    pub fn int_window(&self) -> impl Iterator<Item = Value> + '_ {
        (self.int_range.0..=self.int_range.1).map(Value::Int)
    }

    /// Distinct recorded values per sort, for quantifying constraint
    /// checks over a model. Total models range integers over the whole
    /// window; partial (extracted) models use the recorded denotations.
    pub fn sort_values(&self, sort: Sort) -> Vec<Value> {
        match sort {
            Sort::Foreground => self.fg_elements().collect(),
            Sort::Int => {
                if self.total {
                    self.int_window().collect()
                } else {
                    let mut vals: Vec<Value> = Vec::new();
                    for v in self
                        .consts
                        .values()
                        .chain(self.term_values.iter().map(|(_, v)| v))
                    {
                        if matches!(v, Value::Int(_)) && !vals.contains(v) {
                            vals.push(v.clone());
                        }
                    }
                    vals
                }
            }
            _ => Vec::new(),
        }
    }

    /// Evaluate a term under an assignment; `None` means the value runs
    /// through an undefined interpretation point.
    pub fn eval_term(&self, t: &Term, assign: &IndexMap<String, Value>) -> Option<Value> {
        match t {
            Term::Var(v, s) => {
                let val = assign
                    .get(v)
                    .unwrap_or_else(|| panic!("unassigned variable {v}"));
                assert!(
                    val.matches_sort(*s),
                    "sort mismatch: {v} is {s:?} but assigned {val:?}"
                );
                Some(val.clone())
            }
            Term::Const(c) => self.consts.get(c).cloned(),
            Term::App(f, args) => {
                let mut vals = Vec::with_capacity(args.len());
                for a in args {
                    vals.push(self.eval_term(a, assign)?);
                }
                self.funcs.get(f).and_then(|g| g.get(&vals)).cloned()
            }
            Term::IntLit(n) => Some(Value::Int(*n)),
            Term::Add(a, b) | Term::Sub(a, b) => {
                let (Value::Int(x), Value::Int(y)) =
                    (self.eval_term(a, assign)?, self.eval_term(b, assign)?)
                else {
                    return None;
                };
                Some(Value::Int(if matches!(t, Term::Add(..)) {
                    x + y
                } else {
                    x - y
                }))
            }
            Term::EmptySet => Some(Value::Set(BTreeSet::new())),
            Term::Singleton(k) => {
                let Value::Int(n) = self.eval_term(k, assign)? else {
                    return None;
                };
                Some(Value::Set(BTreeSet::from([n])))
            }
            Term::Union(a, b) => {
                match (self.eval_term(a, assign)?, self.eval_term(b, assign)?) {
                    (Value::Set(x), Value::Set(y)) => {
                        Some(Value::Set(x.union(&y).copied().collect()))
                    }
                    // the undefined set absorbs
                    (Value::SetBottom, _) | (_, Value::SetBottom) => Some(Value::SetBottom),
                    _ => None,
                }
            }
            Term::Ite(c, a, b) => match self.eval_formula(c, assign) {
                TruthValue::True => self.eval_term(a, assign),
                TruthValue::False => self.eval_term(b, assign),
                TruthValue::Unknown => {
                    let (va, vb) = (self.eval_term(a, assign), self.eval_term(b, assign));
                    if va.is_some() && va == vb {
                        va
                    } else {
                        None
                    }
                }
            },
        }
    }

    /// Strong-Kleene evaluation. Universal quantifiers range foreground
    /// variables over the universe and integer variables over the
    /// recorded window (they only appear when total models check
    /// axioms and lemmas).
    pub fn eval_formula(&self, f: &Formula, assign: &IndexMap<String, Value>) -> TruthValue {
        match f {
            Formula::True => TruthValue::True,
            Formula::False => TruthValue::False,
            Formula::Rel(r, args) => {
                let mut vals = Vec::with_capacity(args.len());
                for a in args {
                    match self.eval_term(a, assign) {
                        Some(v) => vals.push(v),
                        None => return TruthValue::Unknown,
                    }
                }
                match self.rels.get(r).and_then(|g| g.get(&vals)) {
                    Some(b) => TruthValue::from_bool(*b),
                    None if self.total => TruthValue::False,
                    None => TruthValue::Unknown,
                }
            }
            Formula::Eq(a, b) => {
                match (self.eval_term(a, assign), self.eval_term(b, assign)) {
                    (Some(x), Some(y)) => TruthValue::from_bool(x == y),
                    _ => TruthValue::Unknown,
                }
            }
            Formula::Le(a, b) | Formula::Lt(a, b) => {
                match (self.eval_term(a, assign), self.eval_term(b, assign)) {
                    (Some(Value::Int(x)), Some(Value::Int(y))) => {
                        TruthValue::from_bool(if matches!(f, Formula::Le(..)) {
                            x <= y
                        } else {
                            x < y
                        })
                    }
                    _ => TruthValue::Unknown,
                }
            }
            Formula::Member(k, s) => {
                match (self.eval_term(k, assign), self.eval_term(s, assign)) {
                    (Some(Value::Int(n)), Some(Value::Set(set))) => {
                        TruthValue::from_bool(set.contains(&n))
                    }
                    (Some(Value::Int(_)), Some(Value::SetBottom)) => TruthValue::Unknown,
                    _ => TruthValue::Unknown,
                }
            }
            Formula::Not(g) => self.eval_formula(g, assign).negate(),
            Formula::And(fs) => fs
                .iter()
                .map(|g| self.eval_formula(g, assign))
                .fold(TruthValue::True, TruthValue::and),
            Formula::Or(fs) => fs
                .iter()
                .map(|g| self.eval_formula(g, assign))
                .fold(TruthValue::False, TruthValue::or),
            Formula::Implies(a, b) => self
                .eval_formula(a, assign)
                .negate()
                .or(self.eval_formula(b, assign)),
            Formula::Iff(a, b) => {
                match (self.eval_formula(a, assign), self.eval_formula(b, assign)) {
                    (TruthValue::Unknown, _) | (_, TruthValue::Unknown) => TruthValue::Unknown,
                    (x, y) => TruthValue::from_bool(x == y),
                }
            }
            Formula::Ite(c, t, e) => match self.eval_formula(c, assign) {
                TruthValue::True => self.eval_formula(t, assign),
                TruthValue::False => self.eval_formula(e, assign),
                TruthValue::Unknown => {
                    let (vt, ve) = (self.eval_formula(t, assign), self.eval_formula(e, assign));
                    if vt == ve && vt != TruthValue::Unknown {
                        vt
                    } else {
                        TruthValue::Unknown
                    }
                }
            },
            Formula::Forall(vars, body) => {
                let pools: Vec<Vec<Value>> =
                    vars.iter().map(|(_, s)| self.sort_values(*s)).collect();
                let mut result = TruthValue::True;
                let mut idx = vec![0usize; vars.len()];
                if pools.iter().any(|p| p.is_empty()) {
                    return TruthValue::True;
                }
                loop {
                    let mut inner = assign.clone();
                    for (i, (v, _)) in vars.iter().enumerate() {
                        inner.insert(v.clone(), pools[i][idx[i]].clone());
                    }
                    result = result.and(self.eval_formula(body, &inner));
                    if result == TruthValue::False {
                        return TruthValue::False;
                    }
                    // odometer
                    let mut i = vars.len();
                    loop {
                        if i == 0 {
                            return result;
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
        }
    }

    /// Evaluate a closed universal formula over all tuples.
    pub fn holds(&self, f: &Formula) -> TruthValue {
        self.eval_formula(f, &IndexMap::new())
    }

    /// JSON rendering for debugging and the SyGuS emission path.
    pub fn to_json(&self) -> serde_json::Value {
        use serde_json::json;
        let funcs: serde_json::Map<String, serde_json::Value> = self
            .funcs
            .iter()
            .map(|(f, graph)| {
                let points: Vec<serde_json::Value> = graph
                    .iter()
                    .map(|(args, v)| {
                        json!({
                            "args": args.iter().map(Value::render).collect::<Vec<_>>(),
                            "value": v.render(),
                        })
                    })
                    .collect();
                (f.clone(), serde_json::Value::Array(points))
            })
            .collect();
        let rels: serde_json::Map<String, serde_json::Value> = self
            .rels
            .iter()
            .map(|(r, graph)| {
                let points: Vec<serde_json::Value> = graph
                    .iter()
                    .map(|(args, v)| {
                        json!({
                            "args": args.iter().map(Value::render).collect::<Vec<_>>(),
                            "value": v,
                        })
                    })
                    .collect();
                (r.clone(), serde_json::Value::Array(points))
            })
            .collect();
        json!({
            "foreground_elements": self.elem_names,
            "consts": self
                .consts
                .iter()
                .map(|(c, v)| (c.clone(), serde_json::Value::String(v.render())))
                .collect::<serde_json::Map<_, _>>(),
            "funcs": funcs,
            "rels": rels,
            "total": self.total,
            "int_range": [self.int_range.0, self.int_range.1],
        })
    }
}

#[cfg(test)]
mod tests;
