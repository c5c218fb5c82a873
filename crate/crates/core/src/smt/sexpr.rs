//! Minimal S-expression reader for solver responses.

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Sexp {
    Atom(String),
    Str(String),
    List(Vec<Sexp>),
}

impl Sexp {
    pub fn atom(&self) -> Option<&str> {
        match self {
            Sexp::Atom(s) => Some(s),
            _ => None,
        }
    }

    /// Canonical single-space rendering, used to match echoed terms
    /// against emitted queries.
    pub fn render(&self) -> String {
        match self {
            Sexp::Atom(s) => s.clone(),
            Sexp::Str(s) => format!("\"{s}\""),
            Sexp::List(items) => {
                let inner: Vec<String> = items.iter().map(|i| i.render()).collect();
                format!("({})", inner.join(" "))
            }
        }
    }
}

/// Parse a whole response into a sequence of top-level S-expressions.
/// Quoted strings and `|`-quoted symbols are handled; anything
/// unreadable terminates the parse at that point.
pub fn parse_all(text: &str) -> Vec<Sexp> {
    let mut out = Vec::new();
    let mut stack: Vec<Vec<Sexp>> = Vec::new();
    let mut chars = text.chars().peekable();
    while let Some(c) = chars.next() {
        match c {
            c if c.is_whitespace() => {}
            '(' => stack.push(Vec::new()),
            ')' => {
                let Some(items) = stack.pop() else { return out };
                let sexp = Sexp::List(items);
                match stack.last_mut() {
                    Some(parent) => parent.push(sexp),
                    None => out.push(sexp),
                }
            }
            '"' => {
                let mut s = String::new();
                while let Some(d) = chars.next() {
                    if d == '"' {
                        // SMT-LIB escapes a quote by doubling it
                        if chars.peek() == Some(&'"') {
                            s.push('"');
                            chars.next();
                        } else {
                            break;
                        }
                    } else {
                        s.push(d);
                    }
                }
                let sexp = Sexp::Str(s);
                match stack.last_mut() {
                    Some(parent) => parent.push(sexp),
                    None => out.push(sexp),
                }
            }
            '|' => {
                let mut s = String::new();
                for d in chars.by_ref() {
                    if d == '|' {
                        break;
                    }
                    s.push(d);
                }
                let sexp = Sexp::Atom(s);
                match stack.last_mut() {
                    Some(parent) => parent.push(sexp),
                    None => out.push(sexp),
                }
            }
            _ => {
                let mut tok = String::new();
                tok.push(c);
                while let Some(&d) = chars.peek() {
                    if d.is_whitespace() || d == '(' || d == ')' || d == '"' || d == '|' {
                        break;
                    }
                    tok.push(d);
                    chars.next();
                }
                let sexp = Sexp::Atom(tok);
                match stack.last_mut() {
                    Some(parent) => parent.push(sexp),
                    None => out.push(sexp),
                }
            }
        }
    }
    out
}
