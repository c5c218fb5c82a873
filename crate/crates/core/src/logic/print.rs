//! Printing back to the problem-file surface syntax. `parse(print(x))`
//! reproduces `x` for well-formed inputs.

use super::*;
use std::fmt::Write;

pub fn print_term(t: &Term) -> String {
    match t {
        Term::Var(v, _) => v.clone(),
        Term::Const(c) => c.clone(),
        Term::App(f, args) => print_call(f, args.iter().map(print_term)),
        Term::IntLit(n) => n.to_string(),
        Term::Add(a, b) => format!("(+ {} {})", print_term(a), print_term(b)),
        Term::Sub(a, b) => format!("(- {} {})", print_term(a), print_term(b)),
        Term::EmptySet => "emptyset".to_string(),
        Term::Singleton(k) => format!("(singleton {})", print_term(k)),
        Term::Union(a, b) => format!("(union {} {})", print_term(a), print_term(b)),
        Term::Ite(c, t, e) => format!(
            "(ite {} {} {})",
            print_formula(c),
            print_term(t),
            print_term(e)
        ),
    }
}

fn print_call(head: &str, args: impl Iterator<Item = String>) -> String {
    let mut out = String::new();
    out.push('(');
    out.push_str(head);
    for a in args {
        out.push(' ');
        out.push_str(&a);
    }
    out.push(')');
    out
}

pub fn print_formula(f: &Formula) -> String {
    match f {
        Formula::True => "true".to_string(),
        Formula::False => "false".to_string(),
        Formula::Rel(r, args) => {
            if args.is_empty() {
                r.clone()
            } else {
                print_call(r, args.iter().map(print_term))
            }
        }
        Formula::Eq(a, b) => format!("(= {} {})", print_term(a), print_term(b)),
        Formula::Le(a, b) => format!("(<= {} {})", print_term(a), print_term(b)),
        Formula::Lt(a, b) => format!("(< {} {})", print_term(a), print_term(b)),
        Formula::Member(k, s) => format!("(member {} {})", print_term(k), print_term(s)),
        Formula::Not(g) => format!("(not {})", print_formula(g)),
        Formula::And(fs) => print_call("and", fs.iter().map(print_formula)),
        Formula::Or(fs) => print_call("or", fs.iter().map(print_formula)),
        Formula::Implies(a, b) => format!("(=> {} {})", print_formula(a), print_formula(b)),
        Formula::Iff(a, b) => format!("(iff {} {})", print_formula(a), print_formula(b)),
        Formula::Ite(c, t, e) => format!(
            "(ite {} {} {})",
            print_formula(c),
            print_formula(t),
            print_formula(e)
        ),
        Formula::Forall(vars, body) => {
            let mut out = String::from("(forall (");
            for (i, (v, s)) in vars.iter().enumerate() {
                if i > 0 {
                    out.push(' ');
                }
                let _ = write!(out, "({v} {})", sort_token(*s));
            }
            let _ = write!(out, ") {})", print_formula(body));
            out
        }
    }
}

fn sort_token(s: Sort) -> &'static str {
    match s {
        // the foreground token is substituted by the problem printer;
        // formulas printed standalone use a placeholder name
        Sort::Foreground => "Fg",
        Sort::Int => "Int",
        Sort::SetInt => "SetInt",
        Sort::Bool => "Bool",
    }
}

fn sort_name(s: Sort, sig: &Signature) -> String {
    match s {
        Sort::Foreground => sig.foreground_sort.clone(),
        _ => sort_token(s).to_string(),
    }
}

/// Print a formula using the problem's declared foreground sort name
/// in binders.
pub fn print_formula_with(f: &Formula, sig: &Signature) -> String {
    // identical to print_formula except foreground binders use the
    // declared sort name
    match f {
        Formula::Forall(vars, body) => {
            let mut out = String::from("(forall (");
            for (i, (v, s)) in vars.iter().enumerate() {
                if i > 0 {
                    out.push(' ');
                }
                let _ = write!(out, "({v} {})", sort_name(*s, sig));
            }
            let _ = write!(out, ") {})", print_formula_with(body, sig));
            out
        }
        Formula::Not(g) => format!("(not {})", print_formula_with(g, sig)),
        Formula::And(fs) => print_call("and", fs.iter().map(|g| print_formula_with(g, sig))),
        Formula::Or(fs) => print_call("or", fs.iter().map(|g| print_formula_with(g, sig))),
        Formula::Implies(a, b) => format!(
            "(=> {} {})",
            print_formula_with(a, sig),
            print_formula_with(b, sig)
        ),
        Formula::Iff(a, b) => format!(
            "(iff {} {})",
            print_formula_with(a, sig),
            print_formula_with(b, sig)
        ),
        Formula::Ite(c, t, e) => format!(
            "(ite {} {} {})",
            print_formula_with(c, sig),
            print_formula_with(t, sig),
            print_formula_with(e, sig)
        ),
        _ => print_formula(f),
    }
}

/// Print a whole problem in the input grammar.
pub fn print_problem(p: &Problem) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "(foreground-sort {})", p.sig.foreground_sort);
    for (name, sort) in &p.sig.consts {
        let _ = writeln!(out, "(const {name} {})", sort_name(*sort, &p.sig));
    }
    for (name, fs) in &p.sig.funcs {
        if p.defs.contains_key(name) {
            continue;
        }
        let params: Vec<String> = fs.params.iter().map(|s| sort_name(*s, &p.sig)).collect();
        let _ = writeln!(
            out,
            "(func {name} ({}) {})",
            params.join(" "),
            sort_name(fs.result, &p.sig)
        );
    }
    for (name, params) in &p.sig.rels {
        if p.defs.contains_key(name) {
            continue;
        }
        let ps: Vec<String> = params.iter().map(|s| sort_name(*s, &p.sig)).collect();
        let _ = writeln!(out, "(pred {name} ({}))", ps.join(" "));
    }
    for def in p.defs.values() {
        match def {
            RecDef::Rel { name, params, body } => {
                let ps: Vec<String> = params
                    .iter()
                    .map(|(v, s)| format!("({v} {})", sort_name(*s, &p.sig)))
                    .collect();
                let _ = writeln!(
                    out,
                    "(define-rec ({name}{}{}) {})",
                    if ps.is_empty() { "" } else { " " },
                    ps.join(" "),
                    print_formula_with(body, &p.sig)
                );
            }
            RecDef::Func {
                name,
                params,
                result,
                body,
            } => {
                let ps: Vec<String> = params
                    .iter()
                    .map(|(v, s)| format!("({v} {})", sort_name(*s, &p.sig)))
                    .collect();
                let _ = writeln!(
                    out,
                    "(define-recfun ({name}{}{}) {} {})",
                    if ps.is_empty() { "" } else { " " },
                    ps.join(" "),
                    sort_name(*result, &p.sig),
                    print_term(body)
                );
            }
        }
    }
    for a in &p.axioms {
        let _ = writeln!(out, "(axiom {})", print_formula_with(a, &p.sig));
    }
    let _ = writeln!(out, "(goal {})", print_formula_with(&p.goal, &p.sig));
    {
        let g = &p.grammar;
        let d = GrammarConfig::default();
        let mut opts = Vec::new();
        if g.term_depth != d.term_depth {
            opts.push(format!("(term-depth {})", g.term_depth));
        }
        if g.max_body_size != d.max_body_size {
            opts.push(format!("(max-size {})", g.max_body_size));
        }
        if g.int_arith {
            opts.push("(int-arith true)".to_string());
        }
        if g.set_ops {
            opts.push("(set-ops true)".to_string());
        }
        if let Some(heads) = &g.heads {
            opts.push(format!("(heads {})", heads.join(" ")));
        }
        if !opts.is_empty() {
            let _ = writeln!(out, "(grammar {})", opts.join(" "));
        }
    }
    for l in &p.expected {
        let _ = writeln!(out, "(expect-lemma {})", print_formula_with(&l.to_formula(), &p.sig));
    }
    out
}
