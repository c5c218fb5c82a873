//! Seeded random generation of true least-fixpoint models, used to
//! reject invalid lemma candidates early.

use super::{lfp_eval, FiniteModel, TruthValue, Value};
use crate::logic::{Formula, RecDef, Signature, Sort};
use indexmap::IndexMap;
use itertools::Itertools;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeSet;

#[derive(Debug, Clone)]
pub struct GenConfig {
    /// Maximum foreground universe size; each model samples a size in
    /// `1..=max_size`.
    pub max_size: usize,
    /// Range background integer values are sampled from, and the window
    /// integer-parameterized definitions are tabulated over.
    pub int_range: (i64, i64),
    /// Resampling budget per requested model.
    pub max_rejects: usize,
}

impl Default for GenConfig {
    fn default() -> Self {
        GenConfig {
            max_size: 3,
            int_range: (-2, 8),
            max_rejects: 200,
        }
    }
}

#[derive(Debug)]
pub struct GenReport {
    pub models: Vec<FiniteModel>,
    pub requested: usize,
    /// Models abandoned after exhausting the rejection budget.
    pub gave_up: usize,
}

/// Sample up to `n` finite models that interpret the recursive
/// definitions as least fixpoints and satisfy every axiom and every
/// formula in `constraints` (the lemmas proven so far). Non-recursive
/// interpretations are sampled uniformly; a model violating the
/// requirements is rejected and resampled.
pub fn gen_true_models(
    sig: &Signature,
    defs: &IndexMap<String, RecDef>,
    axioms: &[Formula],
    constraints: &[Formula],
    n: usize,
    cfg: &GenConfig,
    seed: u64,
) -> GenReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut models = Vec::new();
    let mut gave_up = 0usize;
    'models: for _ in 0..n {
        for _ in 0..cfg.max_rejects {
            let candidate = sample_base(sig, defs, &mut rng, cfg);
            let Ok(m) = lfp_eval(&candidate, defs) else {
                continue;
            };
            let ok = axioms
                .iter()
                .chain(constraints)
                .all(|f| m.holds(f) == TruthValue::True);
            if ok {
                models.push(m);
                continue 'models;
            }
        }
        gave_up += 1;
    }
    GenReport {
        models,
        requested: n,
        gave_up,
    }
}

fn random_value(rng: &mut ChaCha8Rng, sort: Sort, fg_size: usize, range: (i64, i64)) -> Value {
    match sort {
        Sort::Foreground => Value::Elem(rng.gen_range(0..fg_size)),
        Sort::Int => Value::Int(rng.gen_range(range.0..=range.1)),
        Sort::Bool => Value::Bool(rng.gen()),
        Sort::SetInt => {
            let mut s = BTreeSet::new();
            for v in range.0..=range.1 {
                if rng.gen_bool(0.3) {
                    s.insert(v);
                }
            }
            Value::Set(s)
        }
    }
}

fn sample_base(
    sig: &Signature,
    defs: &IndexMap<String, RecDef>,
    rng: &mut ChaCha8Rng,
    cfg: &GenConfig,
) -> FiniteModel {
    let fg_size = rng.gen_range(1..=cfg.max_size.max(1));
    let mut m = FiniteModel::empty(fg_size, cfg.int_range);
    for (c, sort) in &sig.consts {
        m.consts.insert(
            c.clone(),
            random_value(rng, *sort, fg_size, cfg.int_range),
        );
    }
    for (f, fs) in &sig.funcs {
        if defs.contains_key(f) {
            continue; // recursive: filled by the fixpoint
        }
        let pools: Vec<Vec<Value>> = fs
            .params
            .iter()
            .map(|p| match p {
                Sort::Foreground => m.fg_elements().collect(),
                Sort::Int => m.int_window().collect(),
                _ => Vec::new(),
            })
            .collect();
        let mut graph = IndexMap::new();
        if pools.iter().all(|p| !p.is_empty()) {
            for tuple in pools
                .iter()
                .map(|p| p.iter().cloned())
                .multi_cartesian_product()
            {
                graph.insert(tuple, random_value(rng, fs.result, fg_size, cfg.int_range));
            }
        }
        m.funcs.insert(f.clone(), graph);
    }
    for (r, params) in &sig.rels {
        if defs.contains_key(r) {
            continue;
        }
        let pools: Vec<Vec<Value>> = params
            .iter()
            .map(|p| match p {
                Sort::Foreground => m.fg_elements().collect(),
                Sort::Int => m.int_window().collect(),
                _ => Vec::new(),
            })
            .collect();
        let mut graph = IndexMap::new();
        if pools.iter().all(|p| !p.is_empty()) {
            for tuple in pools
                .iter()
                .map(|p| p.iter().cloned())
                .multi_cartesian_product()
            {
                graph.insert(tuple, rng.gen());
            }
        } else if params.is_empty() {
            graph.insert(Vec::new(), rng.gen());
        }
        m.rels.insert(r.clone(), graph);
    }
    m
}
