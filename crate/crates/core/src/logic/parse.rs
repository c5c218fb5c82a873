//! S-expression reader for problem files.
//!
//! A problem is a sequence of declarations:
//!
//! ```text
//! (foreground-sort Loc)
//! (const nil Loc)
//! (func n (Loc) Loc)
//! (pred p (Loc Int))
//! (define-rec (list (x Loc)) (or (= x nil) (list (n x))))
//! (define-recfun (listlen (x Loc)) Int (ite (= x nil) 0 (+ 1 (listlen (n x)))))
//! (axiom FORMULA)
//! (goal FORMULA)
//! (grammar (term-depth 1) (max-size 5) ...)
//! (expect-lemma FORMULA)
//! ```
//!
//! Sorts are `Int`, `SetInt`, `Bool`, and the declared foreground sort.
//! Free variables in the goal (and in `expect-lemma`) are implicitly
//! universally quantified; their sorts are inferred from use.

use super::*;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Pos {
    line: usize,
    col: usize,
}

#[derive(Debug, Clone)]
enum Sexp {
    Atom(String, Pos),
    List(Vec<Sexp>, Pos),
}

impl Sexp {
    fn pos(&self) -> Pos {
        match self {
            Sexp::Atom(_, p) | Sexp::List(_, p) => *p,
        }
    }

    fn atom(&self) -> Option<&str> {
        match self {
            Sexp::Atom(s, _) => Some(s),
            Sexp::List(..) => None,
        }
    }
}

fn err(pos: Pos, msg: impl Into<String>) -> LogicError {
    LogicError::Parse {
        line: pos.line,
        col: pos.col,
        msg: msg.into(),
    }
}

fn lex(text: &str) -> Result<Vec<Sexp>> {
    let mut stack: Vec<(Vec<Sexp>, Pos)> = Vec::new();
    let mut top: Vec<Sexp> = Vec::new();
    let mut line = 1usize;
    let mut col = 1usize;
    let mut chars = text.chars().peekable();
    while let Some(c) = chars.next() {
        let pos = Pos { line, col };
        match c {
            '\n' => {
                line += 1;
                col = 1;
                continue;
            }
            ';' => {
                for d in chars.by_ref() {
                    if d == '\n' {
                        line += 1;
                        col = 1;
                        break;
                    }
                }
                continue;
            }
            c if c.is_whitespace() => {}
            '(' => stack.push((Vec::new(), pos)),
            ')' => {
                let (items, open) = stack
                    .pop()
                    .ok_or_else(|| err(pos, "unbalanced closing parenthesis"))?;
                let sexp = Sexp::List(items, open);
                match stack.last_mut() {
                    Some((parent, _)) => parent.push(sexp),
                    None => top.push(sexp),
                }
            }
            _ => {
                let mut tok = String::new();
                tok.push(c);
                while let Some(&d) = chars.peek() {
                    if d.is_whitespace() || d == '(' || d == ')' || d == ';' {
                        break;
                    }
                    tok.push(d);
                    chars.next();
                    col += 1;
                }
                let sexp = Sexp::Atom(tok, pos);
                match stack.last_mut() {
                    Some((parent, _)) => parent.push(sexp),
                    None => top.push(sexp),
                }
            }
        }
        col += 1;
    }
    if let Some((_, open)) = stack.last() {
        return Err(err(*open, "unclosed parenthesis"));
    }
    Ok(top)
}

/// Variable environment used while parsing a formula. `inferred`
/// collects free variables whose sorts were pinned by their first typed
/// occurrence.
struct VarEnv {
    bound: Vec<(String, Sort)>,
    inferred: IndexMap<String, Sort>,
    allow_inference: bool,
}

impl VarEnv {
    fn lookup(&self, name: &str) -> Option<Sort> {
        self.bound
            .iter()
            .rev()
            .find(|(v, _)| v == name)
            .map(|(_, s)| *s)
            .or_else(|| self.inferred.get(name).copied())
    }
}

fn parse_sort(fg: &str, s: &Sexp) -> Result<Sort> {
    let name = s
        .atom()
        .ok_or_else(|| err(s.pos(), "expected a sort name"))?;
    match name {
        "Int" => Ok(Sort::Int),
        "SetInt" => Ok(Sort::SetInt),
        "Bool" => Ok(Sort::Bool),
        n if n == fg => Ok(Sort::Foreground),
        n => Err(err(s.pos(), format!("unknown sort {n}"))),
    }
}

struct Parser<'a> {
    sig: &'a Signature,
}

impl<'a> Parser<'a> {
    fn sort(&self, s: &Sexp) -> Result<Sort> {
        parse_sort(&self.sig.foreground_sort, s)
    }

    fn term(&self, s: &Sexp, expected: Option<Sort>, env: &mut VarEnv) -> Result<Term> {
        match s {
            Sexp::Atom(tok, pos) => {
                if let Ok(n) = tok.parse::<i64>() {
                    return Ok(Term::IntLit(n));
                }
                if tok == "emptyset" {
                    return Ok(Term::EmptySet);
                }
                if let Some(sort) = env.lookup(tok) {
                    return Ok(Term::Var(tok.clone(), sort));
                }
                if self.sig.consts.contains_key(tok) {
                    return Ok(Term::Const(tok.clone()));
                }
                if env.allow_inference {
                    if let Some(sort) = expected {
                        env.inferred.insert(tok.clone(), sort);
                        return Ok(Term::Var(tok.clone(), sort));
                    }
                }
                Err(err(*pos, format!("unknown symbol {tok}")))
            }
            Sexp::List(items, pos) => {
                let head = items
                    .first()
                    .and_then(|h| h.atom())
                    .ok_or_else(|| err(*pos, "expected an operator or function name"))?;
                let args = &items[1..];
                match head {
                    "+" | "-" => {
                        if args.len() != 2 {
                            return Err(err(*pos, format!("{head} expects 2 arguments")));
                        }
                        let a = self.term(&args[0], Some(Sort::Int), env)?;
                        let b = self.term(&args[1], Some(Sort::Int), env)?;
                        Ok(if head == "+" {
                            Term::Add(a.into(), b.into())
                        } else {
                            Term::Sub(a.into(), b.into())
                        })
                    }
                    "union" => {
                        if args.len() != 2 {
                            return Err(err(*pos, "union expects 2 arguments"));
                        }
                        let a = self.term(&args[0], Some(Sort::SetInt), env)?;
                        let b = self.term(&args[1], Some(Sort::SetInt), env)?;
                        Ok(Term::Union(a.into(), b.into()))
                    }
                    "singleton" => {
                        if args.len() != 1 {
                            return Err(err(*pos, "singleton expects 1 argument"));
                        }
                        Ok(Term::Singleton(self.term(&args[0], Some(Sort::Int), env)?.into()))
                    }
                    "emptyset" => Ok(Term::EmptySet),
                    "ite" => {
                        if args.len() != 3 {
                            return Err(err(*pos, "ite expects 3 arguments"));
                        }
                        let c = self.formula(&args[0], env)?;
                        let t = self.term(&args[1], expected, env)?;
                        let t_sort = t.sort(self.sig).ok();
                        let e = self.term(&args[2], expected.or(t_sort), env)?;
                        Ok(Term::Ite(c.into(), t.into(), e.into()))
                    }
                    f => {
                        let fs = self
                            .sig
                            .funcs
                            .get(f)
                            .ok_or_else(|| err(*pos, format!("unknown function {f}")))?
                            .clone();
                        if fs.params.len() != args.len() {
                            return Err(err(
                                *pos,
                                format!("{f} expects {} arguments, got {}", fs.params.len(), args.len()),
                            ));
                        }
                        let mut parsed = Vec::with_capacity(args.len());
                        for (a, p) in args.iter().zip(&fs.params) {
                            parsed.push(self.term(a, Some(*p), env)?);
                        }
                        Ok(Term::App(f.to_string(), parsed))
                    }
                }
            }
        }
    }

    /// Parse `(= a b)`-style binary atoms where the sort of either side
    /// may determine the other.
    fn binary_terms(
        &self,
        args: &[Sexp],
        pos: Pos,
        op: &str,
        expected: Option<Sort>,
        env: &mut VarEnv,
    ) -> Result<(Term, Term)> {
        if args.len() != 2 {
            return Err(err(pos, format!("{op} expects 2 arguments")));
        }
        match self.term(&args[0], expected, env) {
            Ok(a) => {
                let hint = a.sort(self.sig).ok().or(expected);
                let b = self.term(&args[1], hint, env)?;
                Ok((a, b))
            }
            Err(first_err) => {
                // left side may be a free variable whose sort comes from
                // the right side
                let b = self.term(&args[1], expected, env).map_err(|_| first_err)?;
                let hint = b.sort(self.sig).ok().or(expected);
                let a = self.term(&args[0], hint, env)?;
                Ok((a, b))
            }
        }
    }

    fn formula(&self, s: &Sexp, env: &mut VarEnv) -> Result<Formula> {
        match s {
            Sexp::Atom(tok, pos) => match tok.as_str() {
                "true" => Ok(Formula::True),
                "false" => Ok(Formula::False),
                r if self.sig.rels.get(r).is_some_and(|p| p.is_empty()) => {
                    Ok(Formula::Rel(r.to_string(), Vec::new()))
                }
                _ => Err(err(*pos, format!("expected a formula, got {tok}"))),
            },
            Sexp::List(items, pos) => {
                let head = items
                    .first()
                    .and_then(|h| h.atom())
                    .ok_or_else(|| err(*pos, "expected a connective or relation"))?;
                let args = &items[1..];
                match head {
                    "not" => {
                        if args.len() != 1 {
                            return Err(err(*pos, "not expects 1 argument"));
                        }
                        Ok(Formula::not(self.formula(&args[0], env)?))
                    }
                    "and" | "or" => {
                        let fs = args
                            .iter()
                            .map(|a| self.formula(a, env))
                            .collect::<Result<Vec<_>>>()?;
                        Ok(if head == "and" {
                            Formula::And(fs)
                        } else {
                            Formula::Or(fs)
                        })
                    }
                    "=>" | "implies" => {
                        if args.len() != 2 {
                            return Err(err(*pos, "=> expects 2 arguments"));
                        }
                        Ok(Formula::implies(
                            self.formula(&args[0], env)?,
                            self.formula(&args[1], env)?,
                        ))
                    }
                    "iff" => {
                        if args.len() != 2 {
                            return Err(err(*pos, "iff expects 2 arguments"));
                        }
                        Ok(Formula::iff(
                            self.formula(&args[0], env)?,
                            self.formula(&args[1], env)?,
                        ))
                    }
                    "ite" => {
                        if args.len() != 3 {
                            return Err(err(*pos, "ite expects 3 arguments"));
                        }
                        Ok(Formula::ite(
                            self.formula(&args[0], env)?,
                            self.formula(&args[1], env)?,
                            self.formula(&args[2], env)?,
                        ))
                    }
                    "=" => {
                        let (a, b) = self.binary_terms(args, *pos, "=", None, env)?;
                        Ok(Formula::Eq(a, b))
                    }
                    "<=" => {
                        let (a, b) = self.binary_terms(args, *pos, "<=", Some(Sort::Int), env)?;
                        Ok(Formula::Le(a, b))
                    }
                    "<" => {
                        let (a, b) = self.binary_terms(args, *pos, "<", Some(Sort::Int), env)?;
                        Ok(Formula::Lt(a, b))
                    }
                    ">=" => {
                        let (a, b) = self.binary_terms(args, *pos, ">=", Some(Sort::Int), env)?;
                        Ok(Formula::Le(b, a))
                    }
                    ">" => {
                        let (a, b) = self.binary_terms(args, *pos, ">", Some(Sort::Int), env)?;
                        Ok(Formula::Lt(b, a))
                    }
                    "member" => {
                        if args.len() != 2 {
                            return Err(err(*pos, "member expects 2 arguments"));
                        }
                        let k = self.term(&args[0], Some(Sort::Int), env)?;
                        let set = self.term(&args[1], Some(Sort::SetInt), env)?;
                        Ok(Formula::Member(k, set))
                    }
                    "forall" => {
                        if args.len() != 2 {
                            return Err(err(*pos, "forall expects a binder list and a body"));
                        }
                        let binders = match &args[0] {
                            Sexp::List(bs, _) => bs,
                            Sexp::Atom(_, p) => {
                                return Err(err(*p, "expected a binder list"));
                            }
                        };
                        let mut vars = Vec::new();
                        for b in binders {
                            let Sexp::List(pair, bp) = b else {
                                return Err(err(b.pos(), "expected (name sort) binder"));
                            };
                            if pair.len() != 2 {
                                return Err(err(*bp, "expected (name sort) binder"));
                            }
                            let name = pair[0]
                                .atom()
                                .ok_or_else(|| err(pair[0].pos(), "expected a variable name"))?;
                            let sort = self.sort(&pair[1])?;
                            if sort == Sort::SetInt || sort == Sort::Bool {
                                return Err(err(
                                    *bp,
                                    format!("cannot quantify over sort {sort:?}"),
                                ));
                            }
                            vars.push((name.to_string(), sort));
                        }
                        let n = env.bound.len();
                        env.bound.extend(vars.iter().cloned());
                        let body = self.formula(&args[1], env)?;
                        env.bound.truncate(n);
                        Ok(Formula::forall(vars, body))
                    }
                    r if self.sig.rels.contains_key(r) => {
                        let params = self.sig.rels[r].clone();
                        if params.len() != args.len() {
                            return Err(err(
                                *pos,
                                format!("{r} expects {} arguments, got {}", params.len(), args.len()),
                            ));
                        }
                        let mut parsed = Vec::with_capacity(args.len());
                        for (a, p) in args.iter().zip(&params) {
                            parsed.push(self.term(a, Some(*p), env)?);
                        }
                        Ok(Formula::Rel(r.to_string(), parsed))
                    }
                    other => Err(err(*pos, format!("unknown relation or connective {other}"))),
                }
            }
        }
    }
}

fn binder_list(fg: &str, items: &[Sexp], pos: Pos) -> Result<Vec<(String, Sort)>> {
    let mut params = Vec::new();
    for item in items {
        let Sexp::List(pair, pp) = item else {
            return Err(err(item.pos(), "expected (name sort) parameter"));
        };
        if pair.len() != 2 {
            return Err(err(*pp, "expected (name sort) parameter"));
        }
        let name = pair[0]
            .atom()
            .ok_or_else(|| err(pair[0].pos(), "expected a parameter name"))?;
        let sort = parse_sort(fg, &pair[1])?;
        if sort == Sort::SetInt || sort == Sort::Bool {
            return Err(err(*pp, "definition parameters must be foreground or Int"));
        }
        if params.iter().any(|(n, _)| n == name) {
            return Err(err(*pp, format!("duplicate parameter {name}")));
        }
        params.push((name.to_string(), sort));
    }
    let _ = pos;
    Ok(params)
}

/// Destructure a closed universal implication into a [`Lemma`]. The
/// matrix must be `R(x̄) → ψ` with the bound variables, in order, as
/// the arguments of `R`.
pub(crate) fn lemma_from_formula(f: &Formula, defs: &IndexMap<String, RecDef>) -> Result<Lemma> {
    let (vars, matrix) = f.strip_forall();
    let Formula::Implies(lhs, body) = matrix else {
        return Err(LogicError::Invalid(format!(
            "expected an implication lemma, got {}",
            print_formula(matrix)
        )));
    };
    let Formula::Rel(head, args) = lhs.as_ref() else {
        return Err(LogicError::Invalid(
            "lemma antecedent must be a recursive-relation atom".into(),
        ));
    };
    if !defs.contains_key(head) {
        return Err(LogicError::Invalid(format!(
            "lemma head {head} has no recursive definition"
        )));
    }
    if args.len() != vars.len()
        || !args
            .iter()
            .zip(&vars)
            .all(|(t, (v, s))| matches!(t, Term::Var(n, ts) if n == v && ts == s))
    {
        return Err(LogicError::Invalid(
            "lemma antecedent must apply the head to the bound variables in order".into(),
        ));
    }
    if !body.is_quantifier_free() {
        return Err(LogicError::Invalid("lemma body must be quantifier-free".into()));
    }
    Ok(Lemma::new(head.clone(), vars, (**body).clone()))
}

/// Close a formula over its free (inference-collected) variables.
fn close_over(inferred: &IndexMap<String, Sort>, f: Formula) -> Formula {
    let free = f.free_vars();
    let vars: Vec<(String, Sort)> = free
        .into_iter()
        .filter(|(v, _)| inferred.contains_key(v))
        .collect();
    Formula::forall(vars, f)
}

/// Parse and validate a problem file.
pub fn parse_problem(text: &str) -> Result<Problem> {
    let decls = lex(text)?;

    // first pass: declarations and definition headers, so bodies may
    // reference definitions in any order
    let mut sig = Signature::default();
    let mut fg_seen = false;
    for d in &decls {
        let Sexp::List(items, pos) = d else {
            return Err(err(d.pos(), "expected a declaration list"));
        };
        let head = items
            .first()
            .and_then(|h| h.atom())
            .ok_or_else(|| err(*pos, "expected a declaration keyword"))?;
        if head == "foreground-sort" {
            if fg_seen {
                return Err(err(*pos, "foreground sort declared twice"));
            }
            if items.len() != 2 {
                return Err(err(*pos, "foreground-sort expects a name"));
            }
            sig.foreground_sort = items[1]
                .atom()
                .ok_or_else(|| err(items[1].pos(), "expected a sort name"))?
                .to_string();
            fg_seen = true;
        }
    }
    if !fg_seen {
        return Err(LogicError::Invalid("no foreground-sort declaration".into()));
    }

    let mut def_headers: Vec<(&Sexp, bool)> = Vec::new(); // (decl, is_func)
    {
        let fg = sig.foreground_sort.clone();
        for d in &decls {
            let Sexp::List(items, pos) = d else { continue };
            let head = items.first().and_then(|h| h.atom()).unwrap_or("");
            match head {
                "const" => {
                    if items.len() != 3 {
                        return Err(err(*pos, "const expects a name and a sort"));
                    }
                    let name = items[1]
                        .atom()
                        .ok_or_else(|| err(items[1].pos(), "expected a constant name"))?;
                    let sort = parse_sort(&fg, &items[2])?;
                    sig.add_const(name, sort)?;
                }
                "func" => {
                    if items.len() != 4 {
                        return Err(err(*pos, "func expects a name, parameter sorts, and a result sort"));
                    }
                    let name = items[1]
                        .atom()
                        .ok_or_else(|| err(items[1].pos(), "expected a function name"))?;
                    let Sexp::List(ps, _) = &items[2] else {
                        return Err(err(items[2].pos(), "expected a parameter sort list"));
                    };
                    let params = ps.iter().map(|p| parse_sort(&fg, p)).collect::<Result<Vec<_>>>()?;
                    let result = parse_sort(&fg, &items[3])?;
                    sig.add_func(name, params, result)?;
                }
                "pred" => {
                    if items.len() != 3 {
                        return Err(err(*pos, "pred expects a name and parameter sorts"));
                    }
                    let name = items[1]
                        .atom()
                        .ok_or_else(|| err(items[1].pos(), "expected a relation name"))?;
                    let Sexp::List(ps, _) = &items[2] else {
                        return Err(err(items[2].pos(), "expected a parameter sort list"));
                    };
                    let params = ps.iter().map(|p| parse_sort(&fg, p)).collect::<Result<Vec<_>>>()?;
                    sig.add_rel(name, params)?;
                }
                "define-rec" | "define-recfun" => {
                    let is_func = head == "define-recfun";
                    let min = if is_func { 4 } else { 3 };
                    if items.len() != min {
                        return Err(err(*pos, format!("malformed {head}")));
                    }
                    let Sexp::List(sig_items, hp) = &items[1] else {
                        return Err(err(items[1].pos(), "expected (name (param sort)*)"));
                    };
                    let name = sig_items
                        .first()
                        .and_then(|h| h.atom())
                        .ok_or_else(|| err(*hp, "expected a definition name"))?;
                    let params = binder_list(&fg, &sig_items[1..], *hp)?;
                    let sorts: Vec<Sort> = params.iter().map(|(_, s)| *s).collect();
                    if is_func {
                        let result = parse_sort(&fg, &items[2])?;
                        if sig.rels.contains_key(name) || sig.funcs.contains_key(name) {
                            return Err(LogicError::DuplicateDef(name.to_string()));
                        }
                        sig.add_func(name, sorts, result)?;
                    } else {
                        if sig.rels.contains_key(name) {
                            return Err(LogicError::DuplicateDef(name.to_string()));
                        }
                        sig.add_rel(name, sorts)?;
                    }
                    def_headers.push((d, is_func));
                }
                _ => {}
            }
        }
    }

    // second pass: bodies, axioms, goal, grammar, annotations
    let parser = Parser { sig: &sig };
    let mut defs: IndexMap<String, RecDef> = IndexMap::new();
    for (d, is_func) in def_headers {
        let Sexp::List(items, _) = d else { unreachable!() };
        let Sexp::List(sig_items, hp) = &items[1] else { unreachable!() };
        let name = sig_items[0].atom().unwrap().to_string();
        let params = binder_list(&sig.foreground_sort, &sig_items[1..], *hp)?;
        if defs.contains_key(&name) {
            return Err(LogicError::DuplicateDef(name));
        }
        let mut env = VarEnv {
            bound: params.clone(),
            inferred: IndexMap::new(),
            allow_inference: false,
        };
        let def = if is_func {
            let result = parser.sort(&items[2])?;
            let body = parser.term(&items[3], Some(result), &mut env)?;
            let got = body.sort(&sig)?;
            if got != result {
                return Err(LogicError::Sort(format!(
                    "body of {name} has sort {got:?}, declared {result:?}"
                )));
            }
            RecDef::Func { name: name.clone(), params, result, body }
        } else {
            let body = parser.formula(&items[2], &mut env)?;
            body.well_sorted(&sig)?;
            RecDef::Rel { name: name.clone(), params, body }
        };
        defs.insert(name, def);
    }

    for def in defs.values() {
        if let Err(v) = check_positivity(def, &defs) {
            return Err(LogicError::Positivity {
                rel: v.rel,
                atom: v.atom,
                path: v.path,
            });
        }
    }

    let mut axioms = Vec::new();
    let mut goal = None;
    let mut grammar = GrammarConfig::default();
    let mut expected = Vec::new();
    for d in &decls {
        let Sexp::List(items, pos) = d else { continue };
        let head = items.first().and_then(|h| h.atom()).unwrap_or("");
        match head {
            "axiom" | "goal" | "expect-lemma" => {
                if items.len() != 2 {
                    return Err(err(*pos, format!("{head} expects one formula")));
                }
                let mut env = VarEnv {
                    bound: Vec::new(),
                    inferred: IndexMap::new(),
                    allow_inference: true,
                };
                let f = parser.formula(&items[1], &mut env)?;
                let f = close_over(&env.inferred, f);
                f.well_sorted(&sig)?;
                match head {
                    "axiom" => axioms.push(f),
                    "goal" => {
                        if goal.is_some() {
                            return Err(err(*pos, "goal declared twice"));
                        }
                        goal = Some(f);
                    }
                    _ => expected.push(lemma_from_formula(&f, &defs)?),
                }
            }
            "grammar" => {
                for opt in &items[1..] {
                    let Sexp::List(kv, op) = opt else {
                        return Err(err(opt.pos(), "expected a (key value...) grammar option"));
                    };
                    let key = kv
                        .first()
                        .and_then(|k| k.atom())
                        .ok_or_else(|| err(*op, "expected a grammar option keyword"))?;
                    let int_arg = |i: usize| -> Result<usize> {
                        kv.get(i)
                            .and_then(|v| v.atom())
                            .and_then(|v| v.parse().ok())
                            .ok_or_else(|| err(*op, format!("{key} expects a number")))
                    };
                    let bool_arg = |i: usize| -> Result<bool> {
                        match kv.get(i).and_then(|v| v.atom()) {
                            Some("true") => Ok(true),
                            Some("false") => Ok(false),
                            _ => Err(err(*op, format!("{key} expects true or false"))),
                        }
                    };
                    match key {
                        "term-depth" => {
                            grammar.term_depth = int_arg(1)?;
                            if grammar.term_depth > 2 {
                                return Err(err(*op, "term-depth is at most 2"));
                            }
                        }
                        "max-size" => grammar.max_body_size = int_arg(1)?,
                        "int-arith" => grammar.int_arith = bool_arg(1)?,
                        "set-ops" => grammar.set_ops = bool_arg(1)?,
                        "heads" => {
                            let mut heads = Vec::new();
                            for h in &kv[1..] {
                                let name = h
                                    .atom()
                                    .ok_or_else(|| err(h.pos(), "expected a relation name"))?;
                                heads.push(name.to_string());
                            }
                            grammar.heads = Some(heads);
                        }
                        other => return Err(err(*op, format!("unknown grammar option {other}"))),
                    }
                }
            }
            "foreground-sort" | "const" | "func" | "pred" | "define-rec" | "define-recfun" => {}
            other => return Err(err(*pos, format!("unknown declaration {other}"))),
        }
    }

    let goal = goal.ok_or_else(|| LogicError::Invalid("no goal declaration".into()))?;
    if let Some(heads) = &grammar.heads {
        for h in heads {
            if !defs.contains_key(h) {
                return Err(LogicError::Invalid(format!(
                    "grammar head {h} has no recursive definition"
                )));
            }
        }
    }
    for a in &axioms {
        a.well_sorted(&sig)?;
    }

    Ok(Problem {
        sig,
        defs,
        axioms,
        goal,
        grammar,
        expected,
    })
}

/// Parse a single formula in the context of a problem's signature,
/// closing over free variables. Intended for tests and tooling.
pub fn parse_formula_str(text: &str, sig: &Signature) -> Result<Formula> {
    let sexps = lex(text)?;
    if sexps.len() != 1 {
        return Err(LogicError::Invalid("expected exactly one formula".into()));
    }
    let parser = Parser { sig };
    let mut env = VarEnv {
        bound: Vec::new(),
        inferred: IndexMap::new(),
        allow_inference: true,
    };
    let f = parser.formula(&sexps[0], &mut env)?;
    let f = close_over(&env.inferred, f);
    f.well_sorted(sig)?;
    Ok(f)
}
