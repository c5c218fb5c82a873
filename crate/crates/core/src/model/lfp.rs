//! Least-fixpoint evaluation of recursive definitions over a finite
//! universe by simultaneous Kleene iteration.

use super::{FiniteModel, TruthValue, Value};
use crate::logic::{RecDef, Sort};
use indexmap::IndexMap;
use itertools::Itertools;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum LfpError {
    #[error("iteration did not stabilize within {0} rounds")]
    Diverged(usize),
    #[error("definition {0} has a parameter sort without a finite value pool")]
    BadParamSort(String),
}

fn param_pool(model: &FiniteModel, sort: Sort) -> Option<Vec<Value>> {
    match sort {
        Sort::Foreground => Some(model.fg_elements().collect()),
        Sort::Int => Some(model.int_window().collect()),
        _ => None,
    }
}

/// Fill in the recursive relations and functions of `base` with their
/// least fixpoints. `base` must interpret every non-recursive symbol;
/// relations start empty, functions start undefined, and every
/// definition body is re-evaluated until nothing changes. Relations
/// with integer parameters are tabulated over the model's recorded
/// integer window. The result is a total model: recursive functions map
/// points that never become defined to the bottom of their result sort
/// (−1 for integers).
pub fn lfp_eval(
    base: &FiniteModel,
    defs: &IndexMap<String, RecDef>,
) -> Result<FiniteModel, LfpError> {
    let mut m = base.clone();
    m.total = false;

    // tuple spaces, computed once
    let mut spaces: IndexMap<String, Vec<Vec<Value>>> = IndexMap::new();
    for def in defs.values() {
        let pools: Option<Vec<Vec<Value>>> = def
            .params()
            .iter()
            .map(|(_, s)| param_pool(&m, *s))
            .collect();
        let pools = pools.ok_or_else(|| LfpError::BadParamSort(def.name().to_string()))?;
        let tuples: Vec<Vec<Value>> = if pools.is_empty() {
            vec![Vec::new()]
        } else {
            pools
                .iter()
                .map(|p| p.iter().cloned())
                .multi_cartesian_product()
                .collect()
        };
        spaces.insert(def.name().to_string(), tuples);
    }

    for def in defs.values() {
        match def {
            RecDef::Rel { name, .. } => {
                let table: IndexMap<Vec<Value>, bool> = spaces[name]
                    .iter()
                    .map(|t| (t.clone(), false))
                    .collect();
                m.rels.insert(name.clone(), table);
            }
            RecDef::Func { name, .. } => {
                m.funcs.entry(name.clone()).or_default();
            }
        }
    }

    let max_rounds: usize = spaces.values().map(|s| s.len()).sum::<usize>() + 2;
    for _round in 0..max_rounds {
        let mut changed = false;
        let mut rel_updates: Vec<(String, Vec<Value>)> = Vec::new();
        let mut func_updates: Vec<(String, Vec<Value>, Value)> = Vec::new();
        for def in defs.values() {
            match def {
                RecDef::Rel { name, params, body } => {
                    for tuple in &spaces[name] {
                        if m.rels[name][tuple] {
                            continue;
                        }
                        let assign: IndexMap<String, Value> = params
                            .iter()
                            .zip(tuple)
                            .map(|((v, _), val)| (v.clone(), val.clone()))
                            .collect();
                        if m.eval_formula(body, &assign) == TruthValue::True {
                            rel_updates.push((name.clone(), tuple.clone()));
                        }
                    }
                }
                RecDef::Func { name, params, body, .. } => {
                    for tuple in &spaces[name] {
                        if m.funcs[name].contains_key(tuple) {
                            continue;
                        }
                        let assign: IndexMap<String, Value> = params
                            .iter()
                            .zip(tuple)
                            .map(|((v, _), val)| (v.clone(), val.clone()))
                            .collect();
                        if let Some(v) = m.eval_term(body, &assign) {
                            func_updates.push((name.clone(), tuple.clone(), v));
                        }
                    }
                }
            }
        }
        for (name, tuple) in rel_updates {
            m.rels.get_mut(&name).unwrap().insert(tuple, true);
            changed = true;
        }
        for (name, tuple, v) in func_updates {
            m.funcs.get_mut(&name).unwrap().insert(tuple, v);
            changed = true;
        }
        if !changed {
            // stationary: totalize recursive functions with bottoms
            for def in defs.values() {
                if let RecDef::Func { name, result, .. } = def {
                    let bottom = match result {
                        Sort::SetInt => Value::SetBottom,
                        _ => Value::Int(-1),
                    };
                    let graph = m.funcs.get_mut(name).unwrap();
                    for tuple in &spaces[name] {
                        graph.entry(tuple.clone()).or_insert_with(|| bottom.clone());
                    }
                }
            }
            m.total = true;
            return Ok(m);
        }
    }
    Err(LfpError::Diverged(max_rounds))
}

/// True when removing any derived tuple of a recursive relation breaks
/// some definition instance; brute-force check used by tests on small
/// universes.
pub fn is_least_fixpoint(model: &FiniteModel, defs: &IndexMap<String, RecDef>) -> bool {
    for def in defs.values() {
        let RecDef::Rel { name, params, body } = def else {
            continue;
        };
        let table = &model.rels[name];
        for (tuple, held) in table {
            if !held {
                continue;
            }
            let mut weakened = model.clone();
            weakened
                .rels
                .get_mut(name)
                .unwrap()
                .insert(tuple.clone(), false);
            // the weakened valuation must now violate some instance of
            // the fixpoint equations, otherwise the original was not
            // least
            let mut violates = false;
            'outer: for d in defs.values() {
                let RecDef::Rel {
                    name: dn,
                    params: dp,
                    body: db,
                } = d
                else {
                    continue;
                };
                for (dt, _) in &model.rels[dn] {
                    let assign: IndexMap<String, Value> = dp
                        .iter()
                        .zip(dt)
                        .map(|((v, _), val)| (v.clone(), val.clone()))
                        .collect();
                    let body_val = weakened.eval_formula(db, &assign);
                    let head_val =
                        TruthValue::from_bool(weakened.rels[dn][dt]);
                    if body_val != TruthValue::Unknown && body_val != head_val {
                        violates = true;
                        break 'outer;
                    }
                }
            }
            let _ = (params, body);
            if !violates {
                return false;
            }
        }
    }
    true
}
