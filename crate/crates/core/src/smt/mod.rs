//! SMT-LIB2 client.
//!
//! Each query runs one solver process in batch mode: the client writes
//! the complete script (declarations, quantifier-free assertions,
//! `check-sat`, and any `get-value` commands) to the solver's stdin,
//! closes it, and reads the responses. Stateless sessions keep timeout
//! handling trivial and work identically for a native `z3`, `cvc5`, or
//! the bundled WebAssembly build.
//!
//! Identifiers are sanitized into the SMT-LIB simple-symbol alphabet
//! with a reversible mangling, the foreground sort is an uninterpreted
//! sort, and integer sets are encoded as `(Array Int Bool)` with
//! membership as `select`; set values are extracted pointwise over the
//! configured integer window.

mod sexpr;

pub use sexpr::{parse_all, Sexp};

use crate::logic::{print_term, Formula, Signature, Sort, Term};
use crate::model::{FiniteModel, Value};
use crate::natproofs::GroundTermSet;
use indexmap::IndexMap;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::{Command, Stdio};
use std::time::{Duration, Instant};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SmtError {
    #[error("cannot launch solver {path}: {source}")]
    Spawn {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("solver i/o failed: {0}")]
    Io(#[from] std::io::Error),
    #[error("solver reported an error: {0}")]
    Solver(String),
    #[error("formula is not ground quantifier-free: {0}")]
    NotGround(String),
    #[error("model extraction failed: {0}")]
    Extraction(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolverKind {
    /// Native z3: reads stdin with `-in`, hard timeout via `-T`.
    Z3,
    /// The bundled z3 WebAssembly wrapper: batch stdin, soft timeout as
    /// first argument (milliseconds).
    Z3Wasm,
    /// cvc5 or another conforming solver; extra arguments supplied by
    /// the caller.
    Other,
}

#[derive(Debug, Clone)]
pub struct SolverConfig {
    pub path: PathBuf,
    pub kind: SolverKind,
    pub extra_args: Vec<String>,
    /// Hard per-query wall-clock timeout.
    pub timeout: Duration,
    pub seed: Option<u64>,
    /// Integer window for set-value extraction.
    pub int_range: (i64, i64),
}

impl SolverConfig {
    pub fn new(path: impl Into<PathBuf>, kind: SolverKind) -> Self {
        SolverConfig {
            path: path.into(),
            kind,
            extra_args: Vec::new(),
            timeout: Duration::from_secs(10),
            seed: None,
            int_range: (-2, 8),
        }
    }

    /// Locate a usable solver: `$LEMSYN_SOLVER`, then `z3` on `PATH`,
    /// then the bundled wrapper under any of the given roots.
    pub fn discover(roots: &[PathBuf]) -> Option<SolverConfig> {
        if let Ok(path) = std::env::var("LEMSYN_SOLVER") {
            let kind = if path.contains("z3smt") {
                SolverKind::Z3Wasm
            } else if path.contains("z3") {
                SolverKind::Z3
            } else {
                SolverKind::Other
            };
            return Some(SolverConfig::new(path, kind));
        }
        if let Some(z3) = find_in_path("z3") {
            return Some(SolverConfig::new(z3, SolverKind::Z3));
        }
        for root in roots {
            let shim = root.join("tools/z3smt/z3smt");
            if shim.is_file() {
                return Some(SolverConfig::new(shim, SolverKind::Z3Wasm));
            }
        }
        None
    }

    fn command_args(&self) -> Vec<String> {
        let mut args = Vec::new();
        match self.kind {
            SolverKind::Z3 => {
                args.push("-in".to_string());
                args.push(format!("-T:{}", self.timeout.as_secs().max(1)));
            }
            SolverKind::Z3Wasm => {
                args.push(self.timeout.as_millis().to_string());
            }
            SolverKind::Other => {}
        }
        args.extend(self.extra_args.iter().cloned());
        args
    }
}

fn find_in_path(name: &str) -> Option<PathBuf> {
    let path = std::env::var_os("PATH")?;
    for dir in std::env::split_paths(&path) {
        let cand = dir.join(name);
        if cand.is_file() {
            return Some(cand);
        }
    }
    None
}

/// Why a query came back without an answer. Callers must treat any of
/// these as "no proof", never as unsatisfiability.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum UnknownReason {
    Timeout,
    SolverSaidUnknown,
    IoError(String),
}

/// Result of a satisfiability check. A `Sat` handle replays the query
/// with value commands appended; the solver is deterministic for a
/// fixed script, so the replay sees the same model.
#[derive(Debug)]
pub enum SatResult {
    Sat(ModelHandle),
    Unsat,
    Unknown(UnknownReason),
}

impl SatResult {
    pub fn is_unsat(&self) -> bool {
        matches!(self, SatResult::Unsat)
    }
}

#[derive(Debug)]
pub struct ModelHandle {
    script: String,
    cfg: SolverConfig,
}

// ---- identifier mangling ----

/// Map an identifier into the SMT-LIB simple-symbol alphabet. The `v_`
/// prefix keeps mangled names clear of reserved words; `_` is doubled
/// and any other non-alphanumeric byte becomes `_xHH_`.
pub fn mangle(name: &str) -> String {
    let mut out = String::from("v_");
    for c in name.chars() {
        if c.is_ascii_alphanumeric() {
            out.push(c);
        } else if c == '_' {
            out.push_str("__");
        } else {
            let mut buf = [0u8; 4];
            for b in c.encode_utf8(&mut buf).bytes() {
                out.push_str(&format!("_x{b:02x}_"));
            }
        }
    }
    out
}

/// Inverse of [`mangle`].
pub fn demangle(sym: &str) -> Option<String> {
    let body = sym.strip_prefix("v_")?;
    let mut out_bytes: Vec<u8> = Vec::new();
    let mut chars = body.chars().peekable();
    while let Some(c) = chars.next() {
        if c != '_' {
            let mut buf = [0u8; 4];
            out_bytes.extend(c.encode_utf8(&mut buf).bytes());
            continue;
        }
        match chars.next() {
            Some('_') => out_bytes.push(b'_'),
            Some('x') => {
                let hi = chars.next()?;
                let lo = chars.next()?;
                if chars.next() != Some('_') {
                    return None;
                }
                let byte = u8::from_str_radix(&format!("{hi}{lo}"), 16).ok()?;
                out_bytes.push(byte);
            }
            _ => return None,
        }
    }
    String::from_utf8(out_bytes).ok()
}

// ---- script emission ----

fn smt_sort(s: Sort, fg: &str) -> String {
    match s {
        Sort::Foreground => mangle(fg),
        Sort::Int => "Int".to_string(),
        Sort::SetInt => "SetInt".to_string(),
        Sort::Bool => "Bool".to_string(),
    }
}

pub fn smt_term(t: &Term) -> Result<String, SmtError> {
    Ok(match t {
        Term::Var(v, _) => {
            return Err(SmtError::NotGround(format!("free variable {v}")));
        }
        Term::Const(c) => mangle(c),
        Term::App(f, args) => {
            let mut out = format!("({}", mangle(f));
            for a in args {
                out.push(' ');
                out.push_str(&smt_term(a)?);
            }
            out.push(')');
            out
        }
        Term::IntLit(n) => {
            if *n < 0 {
                format!("(- {})", -n)
            } else {
                n.to_string()
            }
        }
        Term::Add(a, b) => format!("(+ {} {})", smt_term(a)?, smt_term(b)?),
        Term::Sub(a, b) => format!("(- {} {})", smt_term(a)?, smt_term(b)?),
        Term::EmptySet => "((as const SetInt) false)".to_string(),
        Term::Singleton(k) => format!("(store ((as const SetInt) false) {} true)", smt_term(k)?),
        Term::Union(a, b) => format!("((_ map or) {} {})", smt_term(a)?, smt_term(b)?),
        Term::Ite(c, a, b) => format!(
            "(ite {} {} {})",
            smt_formula(c)?,
            smt_term(a)?,
            smt_term(b)?
        ),
    })
}

pub fn smt_formula(f: &Formula) -> Result<String, SmtError> {
    Ok(match f {
        Formula::True => "true".to_string(),
        Formula::False => "false".to_string(),
        Formula::Rel(r, args) => {
            if args.is_empty() {
                mangle(r)
            } else {
                let mut out = format!("({}", mangle(r));
                for a in args {
                    out.push(' ');
                    out.push_str(&smt_term(a)?);
                }
                out.push(')');
                out
            }
        }
        Formula::Eq(a, b) => format!("(= {} {})", smt_term(a)?, smt_term(b)?),
        Formula::Le(a, b) => format!("(<= {} {})", smt_term(a)?, smt_term(b)?),
        Formula::Lt(a, b) => format!("(< {} {})", smt_term(a)?, smt_term(b)?),
        Formula::Member(k, s) => format!("(select {} {})", smt_term(s)?, smt_term(k)?),
        Formula::Not(g) => format!("(not {})", smt_formula(g)?),
        Formula::And(fs) => nary("and", fs, "true")?,
        Formula::Or(fs) => nary("or", fs, "false")?,
        Formula::Implies(a, b) => format!("(=> {} {})", smt_formula(a)?, smt_formula(b)?),
        Formula::Iff(a, b) => format!("(= {} {})", smt_formula(a)?, smt_formula(b)?),
        Formula::Ite(c, t, e) => format!(
            "(ite {} {} {})",
            smt_formula(c)?,
            smt_formula(t)?,
            smt_formula(e)?
        ),
        Formula::Forall(..) => {
            return Err(SmtError::NotGround(
                "quantified formula reached the solver layer".into(),
            ));
        }
    })
}

fn nary(op: &str, fs: &[Formula], empty: &str) -> Result<String, SmtError> {
    match fs.len() {
        0 => Ok(empty.to_string()),
        1 => smt_formula(&fs[0]),
        _ => {
            let mut out = format!("({op}");
            for f in fs {
                out.push(' ');
                out.push_str(&smt_formula(f)?);
            }
            out.push(')');
            Ok(out)
        }
    }
}

fn declarations(sig: &Signature) -> String {
    let fg = &sig.foreground_sort;
    let mut out = String::new();
    out.push_str(&format!("(declare-sort {} 0)\n", mangle(fg)));
    out.push_str("(define-sort SetInt () (Array Int Bool))\n");
    for (c, s) in &sig.consts {
        out.push_str(&format!("(declare-const {} {})\n", mangle(c), smt_sort(*s, fg)));
    }
    for (f, fs) in &sig.funcs {
        let params: Vec<String> = fs.params.iter().map(|p| smt_sort(*p, fg)).collect();
        out.push_str(&format!(
            "(declare-fun {} ({}) {})\n",
            mangle(f),
            params.join(" "),
            smt_sort(fs.result, fg)
        ));
    }
    for (r, params) in &sig.rels {
        let ps: Vec<String> = params.iter().map(|p| smt_sort(*p, fg)).collect();
        out.push_str(&format!("(declare-fun {} ({}) Bool)\n", mangle(r), ps.join(" ")));
    }
    out
}

fn build_script(
    sig: &Signature,
    assertions: &[Formula],
    cfg: &SolverConfig,
) -> Result<String, SmtError> {
    let mut out = String::new();
    out.push_str("(set-option :produce-models true)\n");
    if matches!(cfg.kind, SolverKind::Z3 | SolverKind::Z3Wasm) {
        out.push_str(&format!("(set-option :timeout {})\n", cfg.timeout.as_millis()));
        if let Some(seed) = cfg.seed {
            out.push_str(&format!("(set-option :smt.random_seed {seed})\n"));
        }
    }
    out.push_str("(set-logic ALL)\n");
    out.push_str(&declarations(sig));
    for a in assertions {
        out.push_str(&format!("(assert {})\n", smt_formula(a)?));
    }
    out.push_str("(check-sat)\n");
    Ok(out)
}

// ---- process driving ----

fn run_solver(cfg: &SolverConfig, script: &str) -> Result<(String, bool), SmtError> {
    let mut child = Command::new(&cfg.path)
        .args(cfg.command_args())
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .map_err(|e| SmtError::Spawn {
            path: cfg.path.clone(),
            source: e,
        })?;

    let mut stdin = child.stdin.take().expect("piped stdin");
    let script_owned = script.to_string();
    let writer = std::thread::spawn(move || {
        let _ = stdin.write_all(script_owned.as_bytes());
        // dropping stdin closes the pipe
    });
    let mut stdout = child.stdout.take().expect("piped stdout");
    let reader = std::thread::spawn(move || {
        use std::io::Read;
        let mut buf = String::new();
        let _ = stdout.read_to_string(&mut buf);
        buf
    });

    // the solver enforces a soft limit; add slack for process startup
    let deadline = Instant::now() + cfg.timeout + Duration::from_secs(20);
    let mut timed_out = false;
    loop {
        match child.try_wait()? {
            Some(_) => break,
            None => {
                if Instant::now() >= deadline {
                    let _ = child.kill();
                    let _ = child.wait();
                    timed_out = true;
                    break;
                }
                std::thread::sleep(Duration::from_millis(10));
            }
        }
    }
    let _ = writer.join();
    let output = reader.join().unwrap_or_default();
    Ok((output, timed_out))
}

fn parse_status(output: &str) -> Option<&str> {
    output
        .lines()
        .map(str::trim)
        .find(|l| matches!(*l, "sat" | "unsat" | "unknown" | "timeout"))
}

/// Check satisfiability of a set of ground quantifier-free assertions
/// under the given signature. `Unknown` covers timeouts, solver
/// failures, and i/o problems.
pub fn check_sat(
    sig: &Signature,
    assertions: &[Formula],
    cfg: &SolverConfig,
) -> Result<SatResult, SmtError> {
    let script = build_script(sig, assertions, cfg)?;
    let (output, timed_out) = run_solver(cfg, &script)?;
    match parse_status(&output) {
        Some("sat") => Ok(SatResult::Sat(ModelHandle {
            script,
            cfg: cfg.clone(),
        })),
        Some("unsat") => Ok(SatResult::Unsat),
        Some("timeout") => Ok(SatResult::Unknown(UnknownReason::Timeout)),
        Some(_) => Ok(SatResult::Unknown(if timed_out {
            UnknownReason::Timeout
        } else {
            UnknownReason::SolverSaidUnknown
        })),
        None => {
            if timed_out {
                Ok(SatResult::Unknown(UnknownReason::Timeout))
            } else {
                Ok(SatResult::Unknown(UnknownReason::IoError(format!(
                    "no status in solver output: {}",
                    output.lines().next().unwrap_or("<empty>")
                ))))
            }
        }
    }
}

fn parse_value(sexp: &Sexp) -> Option<ParsedValue> {
    match sexp {
        Sexp::Atom(a) => {
            if a == "true" {
                Some(ParsedValue::Bool(true))
            } else if a == "false" {
                Some(ParsedValue::Bool(false))
            } else if let Ok(n) = a.parse::<i64>() {
                Some(ParsedValue::Int(n))
            } else {
                Some(ParsedValue::Token(a.clone()))
            }
        }
        Sexp::List(items) => {
            if items.len() == 2 && items[0].atom() == Some("-") {
                if let Some(ParsedValue::Int(n)) = parse_value(&items[1]) {
                    return Some(ParsedValue::Int(-n));
                }
            }
            None
        }
        Sexp::Str(_) => None,
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum ParsedValue {
    Bool(bool),
    Int(i64),
    /// An element of an uninterpreted sort, identified by its printed
    /// token; two terms denote the same element iff the tokens match.
    Token(String),
}

impl ModelHandle {
    /// Raw value query: rerun the underlying script with `get-value`
    /// commands for the given rendered SMT terms. Returns a map from
    /// the echoed term rendering to its parsed value.
    fn query_values(&self, queries: &[String]) -> Result<IndexMap<String, ParsedValue>, SmtError> {
        let mut script = self.script.clone();
        for q in queries {
            script.push_str(&format!("(get-value ({q}))\n"));
        }
        let (output, timed_out) = run_solver(&self.cfg, &script)?;
        if timed_out {
            return Err(SmtError::Extraction("value query timed out".into()));
        }
        match parse_status(&output) {
            Some("sat") => {}
            other => {
                return Err(SmtError::Extraction(format!(
                    "replay produced status {other:?}"
                )));
            }
        }
        let mut values = IndexMap::new();
        // skip to after the status token; each response is ((term value))
        let body = output
            .split_once("sat")
            .map(|(_, rest)| rest)
            .unwrap_or(&output);
        for sexp in parse_all(body) {
            let Sexp::List(outer) = &sexp else { continue };
            if outer.first().and_then(Sexp::atom) == Some("error") {
                continue;
            }
            for entry in outer {
                let Sexp::List(pair) = entry else { continue };
                if pair.len() != 2 {
                    continue;
                }
                if let Some(v) = parse_value(&pair[1]) {
                    values.insert(pair[0].render(), v);
                }
            }
        }
        Ok(values)
    }
}

/// Extract a finite partial model over the instantiated terms: the
/// value of every foreground and integer term in `terms`, every ground
/// atom of every relation over the foreground representatives, integer-
/// and set-valued applications over them, and set membership pointwise
/// over the configured window. Foreground elements are equivalence
/// classes of terms under solver-reported equality; everything not
/// queried stays undefined.
pub fn extract_finite_model(
    handle: &ModelHandle,
    sig: &Signature,
    terms: &GroundTermSet,
) -> Result<FiniteModel, SmtError> {
    let mut queries: Vec<String> = Vec::new();
    let fg_rendered: Vec<String> = terms
        .terms
        .iter()
        .map(|t| smt_term(t))
        .collect::<Result<_, _>>()?;
    let int_rendered: Vec<String> = terms
        .int_terms
        .iter()
        .map(|t| smt_term(t))
        .collect::<Result<_, _>>()?;
    queries.extend(fg_rendered.iter().cloned());
    queries.extend(int_rendered.iter().cloned());

    let first_pass = handle.query_values(&queries)?;

    // group foreground terms into elements by token
    let mut token_to_elem: IndexMap<String, usize> = IndexMap::new();
    let mut elem_names: Vec<String> = Vec::new();
    let mut reprs: Vec<String> = Vec::new(); // rendered SMT form per element
    let mut term_values: Vec<(Term, Value)> = Vec::new();
    let mut fg_term_value: IndexMap<String, Value> = IndexMap::new(); // rendered -> value
    for (t, rendered) in terms.terms.iter().zip(&fg_rendered) {
        let Some(ParsedValue::Token(tok)) = first_pass.get(rendered).cloned() else {
            return Err(SmtError::Extraction(format!(
                "no value for term {}",
                print_term(t)
            )));
        };
        let next_id = token_to_elem.len();
        let id = *token_to_elem.entry(tok).or_insert(next_id);
        if id == elem_names.len() {
            elem_names.push(print_term(t));
            reprs.push(rendered.clone());
        }
        term_values.push((t.clone(), Value::Elem(id)));
        fg_term_value.insert(rendered.clone(), Value::Elem(id));
    }
    let fg_size = elem_names.len();

    let mut int_term_value: IndexMap<String, Value> = IndexMap::new();
    for (t, rendered) in terms.int_terms.iter().zip(&int_rendered) {
        let Some(ParsedValue::Int(n)) = first_pass.get(rendered).cloned() else {
            return Err(SmtError::Extraction(format!(
                "no integer value for term {}",
                print_term(t)
            )));
        };
        term_values.push((t.clone(), Value::Int(n)));
        int_term_value.insert(rendered.clone(), Value::Int(n));
    }

    // second pass: relation atoms over representatives, background
    // applications, set membership over the window
    let mut atom_queries: Vec<String> = Vec::new();
    let mut atom_meta: Vec<(String, Vec<Value>)> = Vec::new(); // (relation, tuple)
    for (r, params) in &sig.rels {
        if params.is_empty() {
            atom_queries.push(mangle(r));
            atom_meta.push((r.clone(), Vec::new()));
            continue;
        }
        if !params.iter().all(|p| *p == Sort::Foreground) {
            // integer-parameterized relations: instantiate integer
            // positions with the recorded integer terms
            let pools: Vec<Vec<(String, Value)>> = params
                .iter()
                .map(|p| match p {
                    Sort::Foreground => reprs
                        .iter()
                        .enumerate()
                        .map(|(i, r)| (r.clone(), Value::Elem(i)))
                        .collect(),
                    Sort::Int => int_term_value
                        .iter()
                        .map(|(r, v)| (r.clone(), v.clone()))
                        .collect(),
                    _ => Vec::new(),
                })
                .collect();
            if pools.iter().any(|p| p.is_empty()) {
                continue;
            }
            push_atom_tuples(r, &pools, &mut atom_queries, &mut atom_meta);
            continue;
        }
        let pools: Vec<Vec<(String, Value)>> = params
            .iter()
            .map(|_| {
                reprs
                    .iter()
                    .enumerate()
                    .map(|(i, rr)| (rr.clone(), Value::Elem(i)))
                    .collect()
            })
            .collect();
        push_atom_tuples(r, &pools, &mut atom_queries, &mut atom_meta);
    }
    // set-valued applications over representatives, read pointwise
    let mut set_queries: Vec<String> = Vec::new();
    let mut set_meta: Vec<(String, Vec<Value>, i64)> = Vec::new();
    let (lo, hi) = handle.cfg.int_range;
    for (f, fs) in &sig.funcs {
        if fs.result != Sort::SetInt || !fs.params.iter().all(|p| *p == Sort::Foreground) {
            continue;
        }
        if fs.params.is_empty() {
            continue;
        }
        let tuples = cartesian(&vec![fg_size; fs.params.len()]);
        for tuple in tuples {
            let args: Vec<String> = tuple.iter().map(|i| reprs[*i].clone()).collect();
            let app = format!("({} {})", mangle(f), args.join(" "));
            for point in lo..=hi {
                set_queries.push(format!("(select {app} {point})"));
                set_meta.push((
                    f.clone(),
                    tuple.iter().map(|i| Value::Elem(*i)).collect(),
                    point,
                ));
            }
        }
    }

    let mut all_queries = atom_queries.clone();
    all_queries.extend(set_queries.iter().cloned());
    let second_pass = if all_queries.is_empty() {
        IndexMap::new()
    } else {
        handle.query_values(&all_queries)?
    };

    let mut model = FiniteModel::empty(fg_size, handle.cfg.int_range);
    model.elem_names = elem_names;
    model.term_values = term_values;

    for ((r, tuple), q) in atom_meta.iter().zip(&atom_queries) {
        if let Some(ParsedValue::Bool(b)) = second_pass.get(q) {
            model
                .rels
                .entry(r.clone())
                .or_default()
                .insert(tuple.clone(), *b);
        }
    }
    let mut set_acc: IndexMap<(String, Vec<Value>), std::collections::BTreeSet<i64>> =
        IndexMap::new();
    let mut set_defined: IndexMap<(String, Vec<Value>), bool> = IndexMap::new();
    for ((f, tuple, point), q) in set_meta.iter().zip(&set_queries) {
        let key = (f.clone(), tuple.clone());
        match second_pass.get(q) {
            Some(ParsedValue::Bool(b)) => {
                set_defined.entry(key.clone()).or_insert(true);
                if *b {
                    set_acc.entry(key).or_default().insert(*point);
                }
            }
            _ => {
                set_defined.insert(key, false);
            }
        }
    }
    for (key, defined) in set_defined {
        if defined {
            let members = set_acc.shift_remove(&key).unwrap_or_default();
            model
                .funcs
                .entry(key.0.clone())
                .or_default()
                .insert(key.1, Value::Set(members));
        }
    }

    // constants and function graph points induced by the term values
    for (t, v) in model.term_values.clone() {
        match &t {
            Term::Const(c) => {
                model.consts.insert(c.clone(), v);
            }
            Term::App(f, args) => {
                let arg_vals: Option<Vec<Value>> = args
                    .iter()
                    .map(|a| {
                        let rendered = smt_term(a).ok()?;
                        fg_term_value
                            .get(&rendered)
                            .or_else(|| int_term_value.get(&rendered))
                            .cloned()
                    })
                    .collect();
                if let Some(arg_vals) = arg_vals {
                    model
                        .funcs
                        .entry(f.clone())
                        .or_default()
                        .insert(arg_vals, v);
                }
            }
            _ => {}
        }
    }
    Ok(model)
}

fn push_atom_tuples(
    rel: &str,
    pools: &[Vec<(String, Value)>],
    queries: &mut Vec<String>,
    meta: &mut Vec<(String, Vec<Value>)>,
) {
    let sizes: Vec<usize> = pools.iter().map(|p| p.len()).collect();
    for idx in cartesian(&sizes) {
        let mut args = Vec::with_capacity(pools.len());
        let mut tuple = Vec::with_capacity(pools.len());
        for (pool, i) in pools.iter().zip(&idx) {
            args.push(pool[*i].0.clone());
            tuple.push(pool[*i].1.clone());
        }
        queries.push(format!("({} {})", mangle(rel), args.join(" ")));
        meta.push((rel.to_string(), tuple));
    }
}

fn cartesian(sizes: &[usize]) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for &n in sizes {
        let mut next = Vec::with_capacity(out.len() * n);
        for prefix in &out {
            for i in 0..n {
                let mut p = prefix.clone();
                p.push(i);
                next.push(p);
            }
        }
        out = next;
    }
    out
}

/// Expose the script for debugging and the solver-facing tests.
pub fn render_script(
    sig: &Signature,
    assertions: &[Formula],
    cfg: &SolverConfig,
) -> Result<String, SmtError> {
    build_script(sig, assertions, cfg)
}

/// Hint roots for [`SolverConfig::discover`] relative to a manifest
/// directory (the crate itself, its workspace, and the current dir).
pub fn discovery_roots(manifest_dir: &str) -> Vec<PathBuf> {
    let mut roots = Vec::new();
    let manifest = Path::new(manifest_dir);
    roots.push(manifest.to_path_buf());
    if let Some(ws) = manifest.parent().and_then(Path::parent) {
        roots.push(ws.to_path_buf());
    }
    if let Ok(cwd) = std::env::current_dir() {
        roots.push(cwd.clone());
        let mut cur = cwd.as_path();
        while let Some(parent) = cur.parent() {
            roots.push(parent.to_path_buf());
            cur = parent;
        }
    }
    roots
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mangle_round_trip_basics() {
        for name in ["list", "x!0", "lseg-keys", "under_score", "a b", "héllo"] {
            let m = mangle(name);
            assert!(m
                .chars()
                .all(|c| c.is_ascii_alphanumeric() || c == '_'));
            assert_eq!(demangle(&m).as_deref(), Some(name), "mangled: {m}");
        }
    }

    #[test]
    fn mangle_is_injective_on_tricky_pairs() {
        let pairs = [("x_", "x__"), ("a_x21_", "a!"), ("v_a", "a")];
        for (a, b) in pairs {
            assert_ne!(mangle(a), mangle(b));
        }
    }

    #[test]
    fn formula_rendering() {
        let f = Formula::implies(
            Formula::rel("list", vec![Term::cst("nil")]),
            Formula::Member(Term::IntLit(-3), Term::EmptySet),
        );
        assert_eq!(
            smt_formula(&f).unwrap(),
            "(=> (v_list v_nil) (select ((as const SetInt) false) (- 3)))"
        );
    }

    #[test]
    fn quantified_formula_is_rejected() {
        let f = Formula::forall(
            vec![("x".into(), Sort::Foreground)],
            Formula::Eq(Term::var("x", Sort::Foreground), Term::cst("nil")),
        );
        assert!(matches!(smt_formula(&f), Err(SmtError::NotGround(_))));
    }

    mod properties {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn mangle_round_trips(name in "[ -~]{1,24}") {
                let m = mangle(&name);
                prop_assert!(m.chars().all(|c| c.is_ascii_alphanumeric() || c == '_'));
                prop_assert_eq!(demangle(&m), Some(name));
            }
        }
    }
}
