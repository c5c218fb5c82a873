//! SyGuS-IF v2 emission: an interoperability path that phrases the
//! current synthesis constraints as a query for an external solver.
//!
//! All constraint models are packaged into one universal model
//! ([`UniversalModel`]); foreground elements become integer indices,
//! every function and relation becomes a finite lookup table, and two
//! functions are synthesized: `lemmalhs`, choosing the head relation by
//! number, and one body function per head. The usefulness constraint
//! disjoins lemma falsity over the pseudomodel's tuples, the
//! inductiveness constraints conjoin pre-fixpoint truth over each
//! countermodel's tuples, and each true model contributes a conjunction
//! of lemma-truth constraints.
//!
//! Constants resolve to their interpretation in the first member; set
//! sorts are not supported on this path.

use super::{LemmaGrammar, SynthesisConstraints};
use crate::induction::make_pfp;
use crate::logic::{Formula, LogicError, RecDef, Signature, Sort, Term};
use crate::model::{UValue, UniversalModel, Value};
use crate::smt::{mangle, parse_all, Sexp};
use indexmap::IndexMap;
use std::fmt::Write;

fn uvalue_sygus(v: &UValue, u: &UniversalModel, int_bot: i64) -> String {
    match v {
        UValue::Elem(e) => e.to_string(),
        UValue::Int(n) => int_lit(*n),
        UValue::Bool(b) => b.to_string(),
        UValue::Set(_) => int_lit(int_bot),
        UValue::Bot => u.bot_elem.to_string(),
    }
}

fn int_lit(n: i64) -> String {
    if n < 0 {
        format!("(- {})", -n)
    } else {
        n.to_string()
    }
}

fn sygus_sort(s: Sort) -> Result<&'static str, LogicError> {
    match s {
        Sort::Foreground => Ok("Int"),
        Sort::Int => Ok("Int"),
        Sort::Bool => Ok("Bool"),
        Sort::SetInt => Err(LogicError::Invalid(
            "set sorts are not supported by the SyGuS emission path".into(),
        )),
    }
}

/// Render a formula over the universal model's integer element domain;
/// variables resolve through `vars`.
fn render_formula(
    f: &Formula,
    vars: &IndexMap<String, String>,
) -> Result<String, LogicError> {
    Ok(match f {
        Formula::True => "true".into(),
        Formula::False => "false".into(),
        Formula::Rel(r, args) => {
            if args.is_empty() {
                mangle(r)
            } else {
                let rendered: Vec<String> = args
                    .iter()
                    .map(|t| render_term(t, vars))
                    .collect::<Result<_, _>>()?;
                format!("({} {})", mangle(r), rendered.join(" "))
            }
        }
        Formula::Eq(a, b) => format!("(= {} {})", render_term(a, vars)?, render_term(b, vars)?),
        Formula::Le(a, b) => format!("(<= {} {})", render_term(a, vars)?, render_term(b, vars)?),
        Formula::Lt(a, b) => format!("(< {} {})", render_term(a, vars)?, render_term(b, vars)?),
        Formula::Member(..) => {
            return Err(LogicError::Invalid(
                "set membership is not supported by the SyGuS emission path".into(),
            ))
        }
        Formula::Not(g) => format!("(not {})", render_formula(g, vars)?),
        Formula::And(fs) => render_nary("and", fs, vars, "true")?,
        Formula::Or(fs) => render_nary("or", fs, vars, "false")?,
        Formula::Implies(a, b) => format!(
            "(=> {} {})",
            render_formula(a, vars)?,
            render_formula(b, vars)?
        ),
        Formula::Iff(a, b) => format!(
            "(= {} {})",
            render_formula(a, vars)?,
            render_formula(b, vars)?
        ),
        Formula::Ite(c, t, e) => format!(
            "(ite {} {} {})",
            render_formula(c, vars)?,
            render_formula(t, vars)?,
            render_formula(e, vars)?
        ),
        Formula::Forall(..) => {
            return Err(LogicError::Invalid(
                "quantifier reached the SyGuS emitter".into(),
            ))
        }
    })
}

fn render_nary(
    op: &str,
    fs: &[Formula],
    vars: &IndexMap<String, String>,
    empty: &str,
) -> Result<String, LogicError> {
    match fs.len() {
        0 => Ok(empty.to_string()),
        1 => render_formula(&fs[0], vars),
        _ => {
            let parts: Vec<String> = fs
                .iter()
                .map(|f| render_formula(f, vars))
                .collect::<Result<_, _>>()?;
            Ok(format!("({op} {})", parts.join(" ")))
        }
    }
}

fn render_term(t: &Term, vars: &IndexMap<String, String>) -> Result<String, LogicError> {
    Ok(match t {
        Term::Var(v, _) => vars
            .get(v)
            .cloned()
            .ok_or_else(|| LogicError::Invalid(format!("unbound variable {v}")))?,
        Term::Const(c) => mangle(c),
        Term::App(f, args) => {
            let rendered: Vec<String> = args
                .iter()
                .map(|a| render_term(a, vars))
                .collect::<Result<_, _>>()?;
            format!("({} {})", mangle(f), rendered.join(" "))
        }
        Term::IntLit(n) => int_lit(*n),
        Term::Add(a, b) => format!("(+ {} {})", render_term(a, vars)?, render_term(b, vars)?),
        Term::Sub(a, b) => format!("(- {} {})", render_term(a, vars)?, render_term(b, vars)?),
        Term::Ite(c, a, b) => format!(
            "(ite {} {} {})",
            render_formula(c, vars)?,
            render_term(a, vars)?,
            render_term(b, vars)?
        ),
        Term::EmptySet | Term::Singleton(_) | Term::Union(..) => {
            return Err(LogicError::Invalid(
                "set terms are not supported by the SyGuS emission path".into(),
            ))
        }
    })
}

/// Lookup-table definition of a symbol over the universal model.
fn define_fun_table(
    u: &UniversalModel,
    name: &str,
    arity: usize,
    result_bool: bool,
    int_result: bool,
    int_bot: i64,
    eval: impl Fn(&[UValue]) -> UValue,
) -> String {
    let params: Vec<String> = (0..arity).map(|i| format!("(a{i} Int)")).collect();
    let result = if result_bool { "Bool" } else { "Int" };
    let default = if result_bool {
        "false".to_string()
    } else if int_result {
        int_lit(int_bot)
    } else {
        u.bot_elem.to_string()
    };
    let elems = u.member_elements();
    let mut body = default;
    let mut tuples = vec![Vec::new()];
    for _ in 0..arity {
        let mut next = Vec::new();
        for t in &tuples {
            for e in &elems {
                let mut t2: Vec<UValue> = t.clone();
                t2.push(e.clone());
                next.push(t2);
            }
        }
        tuples = next;
    }
    for tuple in tuples.iter().rev() {
        let out = eval(tuple);
        let rendered = if result_bool {
            match out {
                UValue::Bool(b) => b.to_string(),
                _ => "false".to_string(),
            }
        } else if int_result && matches!(out, UValue::Bot) {
            int_lit(int_bot)
        } else {
            uvalue_sygus(&out, u, int_bot)
        };
        // skip points that coincide with the default to keep tables small
        if rendered == body && !body.contains("ite") {
            continue;
        }
        let guard: Vec<String> = tuple
            .iter()
            .enumerate()
            .map(|(i, e)| format!("(= a{i} {})", uvalue_sygus(e, u, int_bot)))
            .collect();
        let cond = if guard.len() == 1 {
            guard.into_iter().next().unwrap()
        } else {
            format!("(and {})", guard.join(" "))
        };
        body = format!("(ite {cond} {rendered} {body})");
    }
    format!(
        "(define-fun {name} ({}) {result} {body})",
        params.join(" ")
    )
}

/// Emit the full SyGuS-IF query for the current constraints.
pub fn emit_sygus(
    constraints: &SynthesisConstraints,
    grammar: &LemmaGrammar,
    defs: &IndexMap<String, RecDef>,
    sig: &Signature,
) -> Result<String, LogicError> {
    // collect members: pseudomodel first, then countermodels, then true
    // models, remembering which member each constraint refers to
    let mut members = vec![constraints.pseudomodel.clone()];
    let mut cm_members: Vec<(String, usize)> = Vec::new();
    for (head, cms) in constraints.countermodels {
        for cm in cms {
            cm_members.push((head.clone(), members.len()));
            members.push(cm.model.clone());
        }
    }
    let mut true_members: Vec<usize> = Vec::new();
    for g in constraints.true_models {
        true_members.push(members.len());
        members.push(g.clone());
    }
    let u = UniversalModel::build(members)?;
    let int_bot = constraints.pseudomodel.int_range.0 - 1000;

    let mut out = String::new();
    let _ = writeln!(out, "(set-logic ALL)");
    let _ = writeln!(
        out,
        "; universal model: {} foreground elements, index {} is the undefined element",
        u.fg_size, u.bot_elem
    );

    // symbol tables
    for (c, s) in &sig.consts {
        if *s == Sort::SetInt {
            continue;
        }
        let v = u.const_in(0, c);
        let _ = writeln!(
            out,
            "(define-fun {} () {} {})",
            mangle(c),
            sygus_sort(*s)?,
            uvalue_sygus(&v, &u, int_bot)
        );
    }
    for (f, fs) in &sig.funcs {
        if fs.result == Sort::SetInt || fs.params.iter().any(|p| *p == Sort::SetInt) {
            continue;
        }
        let table = define_fun_table(
            &u,
            &mangle(f),
            fs.params.len(),
            false,
            fs.result == Sort::Int,
            int_bot,
            |args| u.apply_func(f, args),
        );
        let _ = writeln!(out, "{table}");
    }
    for (r, params) in &sig.rels {
        if params.iter().any(|p| *p == Sort::SetInt) {
            continue;
        }
        let table = define_fun_table(&u, &mangle(r), params.len(), true, false, int_bot, |args| {
            UValue::Bool(u.eval_rel(r, args))
        });
        let _ = writeln!(out, "{table}");
    }

    // synthesis functions: the head chooser and one body per head
    let nheads = grammar.heads.len();
    let choices: Vec<String> = (1..=nheads).map(|i| i.to_string()).collect();
    let _ = writeln!(
        out,
        "(synth-fun lemmalhs () Int ((Start Int)) ((Start Int ({}))))",
        choices.join(" ")
    );
    let mut rhs_names = Vec::new();
    for head in &grammar.heads {
        let name = format!("lemmarhs_{}", mangle(&head.rel));
        let params: Vec<String> = head
            .vars
            .iter()
            .map(|(v, s)| Ok(format!("({} {})", mangle(v), sygus_sort(*s)?)))
            .collect::<Result<_, LogicError>>()?;
        let var_map: IndexMap<String, String> = head
            .vars
            .iter()
            .map(|(v, _)| (v.clone(), mangle(v)))
            .collect();
        let mut productions = Vec::new();
        for atom in &head.atoms {
            productions.push(render_formula(atom, &var_map)?);
        }
        let _ = writeln!(
            out,
            "(synth-fun {name} ({}) Bool\n  ((Start Bool))\n  ((Start Bool ({}\n    (not Start) (and Start Start) (or Start Start) (=> Start Start)))))",
            params.join(" "),
            productions.join("\n    ")
        );
        rhs_names.push(name);
    }

    // usefulness: some pseudomodel tuple falsifies the chosen lemma
    let mut disjuncts = Vec::new();
    for (hi, head) in grammar.heads.iter().enumerate() {
        let pools: Vec<Vec<String>> = head
            .vars
            .iter()
            .map(|(_, s)| member_pool(&u, 0, *s, int_bot))
            .collect();
        for tuple in tuples_of(&pools) {
            let app_args = tuple.join(" ");
            let rel = format!("({} {})", mangle(&head.rel), app_args);
            let rhs = format!("({} {})", rhs_names[hi], app_args);
            disjuncts.push(format!(
                "(and (= lemmalhs {}) (not (=> {rel} {rhs})))",
                hi + 1
            ));
        }
    }
    let _ = writeln!(out, "(constraint (or {}))", disjuncts.join(" "));

    // inductiveness: the pre-fixpoint obligation of the chosen head
    // holds at every tuple of each countermodel
    for (head_name, member) in &cm_members {
        let Some(hi) = grammar.heads.iter().position(|h| &h.rel == head_name) else {
            continue;
        };
        let head = &grammar.heads[hi];
        let pseudo = crate::logic::Lemma::new(
            head.rel.clone(),
            head.vars.clone(),
            Formula::Rel(
                format!("@rhs{hi}"),
                head.vars
                    .iter()
                    .map(|(v, s)| Term::Var(v.clone(), *s))
                    .collect(),
            ),
        );
        let pfp = make_pfp(&pseudo, defs)?;
        let (pfp_vars, pfp_matrix) = pfp.strip_forall();
        let pools: Vec<Vec<String>> = pfp_vars
            .iter()
            .map(|(_, s)| member_pool(&u, *member, *s, int_bot))
            .collect();
        let mut conjuncts = Vec::new();
        for tuple in tuples_of(&pools) {
            let var_map: IndexMap<String, String> = pfp_vars
                .iter()
                .map(|(v, _)| v.clone())
                .zip(tuple.iter().cloned())
                .collect();
            let rendered = render_formula(pfp_matrix, &var_map)?
                .replace(&mangle(&format!("@rhs{hi}")), &rhs_names[hi]);
            conjuncts.push(rendered);
        }
        let _ = writeln!(
            out,
            "(constraint (=> (= lemmalhs {}) (and {})))",
            hi + 1,
            conjuncts.join(" ")
        );
    }

    // truth: the chosen lemma holds on every tuple of each true model
    for member in &true_members {
        for (hi, head) in grammar.heads.iter().enumerate() {
            let pools: Vec<Vec<String>> = head
                .vars
                .iter()
                .map(|(_, s)| member_pool(&u, *member, *s, int_bot))
                .collect();
            let mut conjuncts = Vec::new();
            for tuple in tuples_of(&pools) {
                let app_args = tuple.join(" ");
                conjuncts.push(format!(
                    "(=> ({} {app_args}) ({} {app_args}))",
                    mangle(&head.rel),
                    rhs_names[hi]
                ));
            }
            let _ = writeln!(
                out,
                "(constraint (=> (= lemmalhs {}) (and {})))",
                hi + 1,
                conjuncts.join(" ")
            );
        }
    }

    let _ = writeln!(out, "(check-synth)");
    Ok(out)
}

fn member_pool(u: &UniversalModel, member: usize, sort: Sort, int_bot: i64) -> Vec<String> {
    match sort {
        Sort::Foreground => {
            let m = &u.members[member];
            (0..m.fg_size)
                .map(|e| (u.offsets[member] + e).to_string())
                .collect()
        }
        Sort::Int => {
            let m = &u.members[member];
            m.sort_values(Sort::Int)
                .into_iter()
                .map(|v| match v {
                    Value::Int(n) => int_lit(n),
                    _ => int_lit(int_bot),
                })
                .collect()
        }
        _ => Vec::new(),
    }
}

fn tuples_of(pools: &[Vec<String>]) -> Vec<Vec<String>> {
    let mut out = vec![Vec::new()];
    for pool in pools {
        let mut next = Vec::new();
        for prefix in &out {
            for item in pool {
                let mut p = prefix.clone();
                p.push(item.clone());
                next.push(p);
            }
        }
        out = next;
    }
    out
}

/// A structurally validated SyGuS-IF query, as much of it as this
/// project needs to check its own output.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SygusQuery {
    pub logic: Option<String>,
    /// (name, parameter count)
    pub synth_funs: Vec<(String, usize)>,
    pub define_funs: Vec<String>,
    pub constraints: Vec<Sexp>,
    pub check_synth: bool,
}

/// Parse a SyGuS-IF file into its top-level commands.
pub fn parse_sygus(text: &str) -> Result<SygusQuery, LogicError> {
    let without_comments: String = text
        .lines()
        .map(|l| l.split(';').next().unwrap_or(""))
        .collect::<Vec<_>>()
        .join("\n");
    let sexps = parse_all(&without_comments);
    let mut q = SygusQuery {
        logic: None,
        synth_funs: Vec::new(),
        define_funs: Vec::new(),
        constraints: Vec::new(),
        check_synth: false,
    };
    for s in sexps {
        let Sexp::List(items) = &s else {
            return Err(LogicError::Invalid(format!(
                "stray token at top level: {}",
                s.render()
            )));
        };
        let head = items
            .first()
            .and_then(Sexp::atom)
            .ok_or_else(|| LogicError::Invalid("empty command".into()))?;
        match head {
            "set-logic" => {
                q.logic = items.get(1).and_then(Sexp::atom).map(String::from);
            }
            "define-fun" => {
                let name = items
                    .get(1)
                    .and_then(Sexp::atom)
                    .ok_or_else(|| LogicError::Invalid("define-fun without a name".into()))?;
                if items.len() != 5 {
                    return Err(LogicError::Invalid(format!(
                        "malformed define-fun {name}"
                    )));
                }
                q.define_funs.push(name.to_string());
            }
            "synth-fun" => {
                let name = items
                    .get(1)
                    .and_then(Sexp::atom)
                    .ok_or_else(|| LogicError::Invalid("synth-fun without a name".into()))?;
                let Some(Sexp::List(params)) = items.get(2) else {
                    return Err(LogicError::Invalid(format!(
                        "synth-fun {name} without parameters"
                    )));
                };
                q.synth_funs.push((name.to_string(), params.len()));
            }
            "constraint" => {
                let body = items
                    .get(1)
                    .ok_or_else(|| LogicError::Invalid("empty constraint".into()))?;
                q.constraints.push(body.clone());
            }
            "check-synth" => q.check_synth = true,
            other => {
                return Err(LogicError::Invalid(format!(
                    "unknown SyGuS command {other}"
                )))
            }
        }
    }
    if !q.check_synth {
        return Err(LogicError::Invalid("missing check-synth".into()));
    }
    Ok(q)
}
