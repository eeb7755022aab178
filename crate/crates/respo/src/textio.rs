//! Line-oriented text formats for TBoxes, ABoxes and queries.
//!
//! ```text
//! # TBox                          # ABox                    # query
//! Seafood <= FishBased            f1: hasIng(c, sole)       hasIng(c, ?y), Fish(?y)
//! exists r- <= B                  Fish(sole)                OR
//! A <= !exists s                                            r(?x, ?y), ?x != ?y
//! role: hasGrnsh <= hasIng
//! A & B <= C
//! exists hasIng.FishBased <= FishBased
//! ```
//!
//! Constants that are not plain identifiers are written in double quotes.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use respo_core::{
    ABox, Atom, Axiom, BasicConcept, Fact, GroundAtom, Name, Role, TBox, Term, CQ, UCQ,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Severity {
    Error,
    Warning,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Diagnostic {
    pub line: usize,
    pub column: usize,
    pub message: String,
    pub severity: Severity,
}

impl Diagnostic {
    fn error(line: usize, column: usize, message: impl Into<String>) -> Self {
        Diagnostic {
            line,
            column,
            message: message.into(),
            severity: Severity::Error,
        }
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sev = match self.severity {
            Severity::Error => "error",
            Severity::Warning => "warning",
        };
        write!(f, "{}:{}: {sev}: {}", self.line, self.column, self.message)
    }
}

/// Every diagnostic of a file that had at least one error.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    pub diagnostics: Vec<Diagnostic>,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, d) in self.diagnostics.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "{d}")?;
        }
        Ok(())
    }
}

impl std::error::Error for ParseError {}

impl ParseError {
    fn single(d: Diagnostic) -> Self {
        ParseError {
            diagnostics: vec![d],
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Name(String),
    Str(String),
    Var(String),
    Le,
    Neq,
    Bang,
    Amp,
    Dot,
    LParen,
    RParen,
    Comma,
    Colon,
    Minus,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Name(n) => write!(f, "`{n}`"),
            Tok::Str(s) => write!(f, "\"{s}\""),
            Tok::Var(v) => write!(f, "`?{v}`"),
            Tok::Le => f.write_str("`<=`"),
            Tok::Neq => f.write_str("`!=`"),
            Tok::Bang => f.write_str("`!`"),
            Tok::Amp => f.write_str("`&`"),
            Tok::Dot => f.write_str("`.`"),
            Tok::LParen => f.write_str("`(`"),
            Tok::RParen => f.write_str("`)`"),
            Tok::Comma => f.write_str("`,`"),
            Tok::Colon => f.write_str("`:`"),
            Tok::Minus => f.write_str("`-`"),
        }
    }
}

fn is_name_char(c: char) -> bool {
    c.is_alphanumeric() || c == '_'
}

/// Tokens with 1-based columns; comments start at `#`.
fn lex(line: &str, lineno: usize) -> Result<Vec<(Tok, usize)>, Diagnostic> {
    let chars: Vec<char> = line.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let col = i + 1;
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        if c == '#' {
            break;
        }
        let two = chars.get(i + 1).copied();
        let tok = match c {
            '<' if two == Some('=') => {
                i += 2;
                Tok::Le
            }
            '!' if two == Some('=') => {
                i += 2;
                Tok::Neq
            }
            '!' => {
                i += 1;
                Tok::Bang
            }
            '&' | '.' | '(' | ')' | ',' | ':' | '-' => {
                i += 1;
                match c {
                    '&' => Tok::Amp,
                    '.' => Tok::Dot,
                    '(' => Tok::LParen,
                    ')' => Tok::RParen,
                    ',' => Tok::Comma,
                    ':' => Tok::Colon,
                    _ => Tok::Minus,
                }
            }
            '"' => {
                let mut s = String::new();
                i += 1;
                loop {
                    match chars.get(i) {
                        None => return Err(Diagnostic::error(lineno, col, "unterminated string")),
                        Some('"') => {
                            i += 1;
                            break;
                        }
                        Some('\\') => {
                            match chars.get(i + 1) {
                                Some(&e @ ('"' | '\\')) => s.push(e),
                                _ => {
                                    return Err(Diagnostic::error(
                                        lineno,
                                        i + 1,
                                        "only \\\" and \\\\ escapes are allowed",
                                    ))
                                }
                            }
                            i += 2;
                        }
                        Some(&ch) => {
                            s.push(ch);
                            i += 1;
                        }
                    }
                }
                if s.is_empty() {
                    return Err(Diagnostic::error(lineno, col, "empty constant"));
                }
                Tok::Str(s)
            }
            '?' => {
                let start = i + 1;
                let mut j = start;
                while j < chars.len() && is_name_char(chars[j]) {
                    j += 1;
                }
                if j == start {
                    return Err(Diagnostic::error(lineno, col, "`?` must be followed by a variable name"));
                }
                i = j;
                Tok::Var(chars[start..j].iter().collect())
            }
            c if is_name_char(c) => {
                let mut j = i;
                while j < chars.len() && is_name_char(chars[j]) {
                    j += 1;
                }
                let s: String = chars[i..j].iter().collect();
                i = j;
                Tok::Name(s)
            }
            other => return Err(Diagnostic::error(lineno, col, format!("unexpected character `{other}`"))),
        };
        out.push((tok, col));
    }
    Ok(out)
}

struct Cursor<'a> {
    toks: &'a [(Tok, usize)],
    pos: usize,
    line: usize,
    end_col: usize,
}

impl<'a> Cursor<'a> {
    fn new(toks: &'a [(Tok, usize)], line: usize, text: &str) -> Self {
        Cursor {
            toks,
            pos: 0,
            line,
            end_col: text.chars().count() + 1,
        }
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _)| t)
    }

    fn peek2(&self) -> Option<&Tok> {
        self.toks.get(self.pos + 1).map(|(t, _)| t)
    }

    fn col(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end_col, |(_, c)| *c)
    }

    fn err(&self, msg: impl Into<String>) -> Diagnostic {
        Diagnostic::error(self.line, self.col(), msg)
    }

    fn unexpected(&self, wanted: &str) -> Diagnostic {
        match self.peek() {
            Some(t) => self.err(format!("expected {wanted}, found {t}")),
            None => self.err(format!("expected {wanted}, found end of line")),
        }
    }

    fn eat(&mut self, t: &Tok) -> bool {
        if self.peek() == Some(t) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, t: &Tok, wanted: &str) -> Result<(), Diagnostic> {
        if self.eat(t) {
            Ok(())
        } else {
            Err(self.unexpected(wanted))
        }
    }

    fn name(&mut self, wanted: &str) -> Result<(String, usize), Diagnostic> {
        match self.toks.get(self.pos) {
            Some((Tok::Name(n), c)) => {
                self.pos += 1;
                Ok((n.clone(), *c))
            }
            _ => Err(self.unexpected(wanted)),
        }
    }

    fn end(&self) -> Result<(), Diagnostic> {
        match self.peek() {
            None => Ok(()),
            Some(t) => Err(self.err(format!("unexpected {t} after the end of the statement"))),
        }
    }
}

/// Tracks whether each name is used as a concept (1) or role (2).
#[derive(Default)]
struct Kinds(BTreeMap<String, (usize, usize)>);

impl Kinds {
    fn note(&mut self, name: &str, arity: usize, line: usize, col: usize) -> Result<(), Diagnostic> {
        let what = |a: usize| if a == 1 { "a concept" } else { "a role" };
        match self.0.get(name) {
            Some(&(a, l)) if a != arity => Err(Diagnostic::error(
                line,
                col,
                format!("`{name}` is used as {} here but as {} on line {l}", what(arity), what(a)),
            )),
            Some(_) => Ok(()),
            None => {
                self.0.insert(name.to_string(), (arity, line));
                Ok(())
            }
        }
    }
}

fn parse_role(cur: &mut Cursor, kinds: &mut Kinds) -> Result<Role, Diagnostic> {
    let (n, col) = cur.name("a role name")?;
    kinds.note(&n, 2, cur.line, col)?;
    if cur.eat(&Tok::Minus) {
        Ok(Role::inverse_of(n.as_str()))
    } else {
        Ok(Role::named(n.as_str()))
    }
}

fn concept_name(cur: &mut Cursor, kinds: &mut Kinds) -> Result<Name, Diagnostic> {
    let (n, col) = cur.name("a concept name")?;
    if n == "exists" {
        return Err(Diagnostic::error(cur.line, col, "`exists` is a keyword, not a concept name"));
    }
    kinds.note(&n, 1, cur.line, col)?;
    Ok(Name::new(&n))
}

fn parse_basic(cur: &mut Cursor, kinds: &mut Kinds) -> Result<BasicConcept, Diagnostic> {
    if cur.eat(&Tok::Name("exists".into())) {
        Ok(BasicConcept::Exists(parse_role(cur, kinds)?))
    } else {
        Ok(BasicConcept::Name(concept_name(cur, kinds)?))
    }
}

fn parse_axiom(cur: &mut Cursor, kinds: &mut Kinds) -> Result<Axiom, Diagnostic> {
    if cur.peek() == Some(&Tok::Name("role".into())) && cur.peek2() == Some(&Tok::Colon) {
        cur.pos += 2;
        let lhs = parse_role(cur, kinds)?;
        cur.expect(&Tok::Le, "`<=`")?;
        let negated = cur.eat(&Tok::Bang);
        let rhs = parse_role(cur, kinds)?;
        cur.end()?;
        return Ok(Axiom::Role { lhs, rhs, negated });
    }
    if cur.peek() == Some(&Tok::Bang) {
        return Err(cur.err("the left-hand side of an inclusion cannot be negated"));
    }
    let lhs = if cur.eat(&Tok::Name("exists".into())) {
        let role = parse_role(cur, kinds)?;
        if cur.eat(&Tok::Dot) {
            let filler = concept_name(cur, kinds)?;
            cur.expect(&Tok::Le, "`<=`")?;
            let rhs = concept_name(cur, kinds)?;
            cur.end()?;
            return Ok(Axiom::QualifiedExists { role, filler, rhs });
        }
        BasicConcept::Exists(role)
    } else {
        let a = concept_name(cur, kinds)?;
        if cur.eat(&Tok::Amp) {
            let b = concept_name(cur, kinds)?;
            cur.expect(&Tok::Le, "`<=`")?;
            let c = concept_name(cur, kinds)?;
            cur.end()?;
            return Ok(Axiom::Conjunction {
                left: a,
                right: b,
                rhs: c,
            });
        }
        BasicConcept::Name(a)
    };
    cur.expect(&Tok::Le, "`<=`")?;
    let negated = cur.eat(&Tok::Bang);
    let rhs = parse_basic(cur, kinds)?;
    cur.end()?;
    Ok(Axiom::Concept { lhs, rhs, negated })
}

fn finish<T>(value: T, diags: Vec<Diagnostic>) -> Result<T, ParseError> {
    if diags.iter().any(|d| d.severity == Severity::Error) {
        Err(ParseError { diagnostics: diags })
    } else {
        Ok(value)
    }
}

pub fn parse_tbox(text: &str) -> Result<TBox, ParseError> {
    let mut kinds = Kinds::default();
    let mut diags = Vec::new();
    let mut axioms = Vec::new();
    let mut seen = BTreeSet::new();
    for (i, line) in text.lines().enumerate() {
        let ln = i + 1;
        let toks = match lex(line, ln) {
            Ok(t) => t,
            Err(d) => {
                diags.push(d);
                continue;
            }
        };
        if toks.is_empty() {
            continue;
        }
        let mut cur = Cursor::new(&toks, ln, line);
        match parse_axiom(&mut cur, &mut kinds) {
            Ok(ax) => {
                if !seen.insert(ax.clone()) {
                    diags.push(Diagnostic {
                        line: ln,
                        column: 1,
                        message: format!("duplicate axiom `{ax}` ignored"),
                        severity: Severity::Warning,
                    });
                }
                axioms.push(ax);
            }
            Err(d) => diags.push(d),
        }
    }
    let errs = diags.iter().any(|d| d.severity == Severity::Error);
    if errs {
        return Err(ParseError { diagnostics: diags });
    }
    let tbox = TBox::new(axioms).map_err(|e| ParseError::single(Diagnostic::error(1, 1, e.to_string())))?;
    finish(tbox, diags)
}

fn constant(cur: &mut Cursor) -> Result<Name, Diagnostic> {
    match cur.toks.get(cur.pos) {
        Some((Tok::Name(n) | Tok::Str(n), _)) => {
            cur.pos += 1;
            Ok(Name::new(n))
        }
        Some((Tok::Var(_), _)) => Err(cur.err("ABox facts cannot contain variables")),
        _ => Err(cur.unexpected("a constant")),
    }
}

pub fn parse_abox(text: &str) -> Result<ABox, ParseError> {
    let mut kinds = Kinds::default();
    let mut diags = Vec::new();
    let mut facts: Vec<Fact> = Vec::new();
    let mut labels: BTreeMap<Name, usize> = BTreeMap::new();
    let mut contents: BTreeMap<GroundAtom, usize> = BTreeMap::new();
    for (i, line) in text.lines().enumerate() {
        let ln = i + 1;
        let toks = match lex(line, ln) {
            Ok(t) => t,
            Err(d) => {
                diags.push(d);
                continue;
            }
        };
        if toks.is_empty() {
            continue;
        }
        let mut cur = Cursor::new(&toks, ln, line);
        let parsed = (|| {
            let label = if cur.peek2() == Some(&Tok::Colon) {
                let (l, col) = cur.name("a fact label")?;
                cur.pos += 1;
                Some((Name::new(&l), col))
            } else {
                None
            };
            let (pred, pcol) = cur.name("a predicate name")?;
            cur.expect(&Tok::LParen, "`(`")?;
            let mut args = vec![constant(&mut cur)?];
            if cur.eat(&Tok::Comma) {
                args.push(constant(&mut cur)?);
            }
            if cur.peek() == Some(&Tok::Comma) {
                return Err(cur.err("predicates take one or two arguments"));
            }
            cur.expect(&Tok::RParen, "`)`")?;
            cur.end()?;
            kinds.note(&pred, args.len(), ln, pcol)?;
            Ok((label, GroundAtom::new(pred.as_str(), args).expect("one or two arguments")))
        })();
        match parsed {
            Ok((label, atom)) => {
                let (label, lcol) = label.unwrap_or_else(|| (Name::new(&format!("f{}", facts.len())), 1));
                if let Some(prev) = labels.get(&label) {
                    diags.push(Diagnostic::error(ln, lcol, format!("label `{label}` already used on line {prev}")));
                    continue;
                }
                if let Some(prev) = contents.get(&atom) {
                    diags.push(Diagnostic::error(ln, 1, format!("{atom} is already asserted on line {prev}")));
                    continue;
                }
                labels.insert(label.clone(), ln);
                contents.insert(atom.clone(), ln);
                facts.push(Fact::new(label, atom));
            }
            Err(d) => diags.push(d),
        }
    }
    if diags.iter().any(|d| d.severity == Severity::Error) {
        return Err(ParseError { diagnostics: diags });
    }
    let abox = ABox::new(facts).map_err(|e| ParseError::single(Diagnostic::error(1, 1, e.to_string())))?;
    finish(abox, diags)
}

/// A parsed query file before answer variables are bound.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QueryFile {
    pub free: Vec<Name>,
    disjuncts: Vec<(usize, Vec<Atom>)>,
}

fn term(cur: &mut Cursor) -> Result<Term, Diagnostic> {
    match cur.toks.get(cur.pos) {
        Some((Tok::Var(v), _)) => {
            cur.pos += 1;
            Ok(Term::var(v.as_str()))
        }
        Some((Tok::Name(n) | Tok::Str(n), _)) => {
            cur.pos += 1;
            Ok(Term::constant(n.as_str()))
        }
        _ => Err(cur.unexpected("a variable or constant")),
    }
}

fn parse_atoms(cur: &mut Cursor, kinds: &mut Kinds, out: &mut Vec<Atom>) -> Result<(), Diagnostic> {
    loop {
        if cur.peek().is_none() {
            return Ok(());
        }
        let is_pred = matches!(cur.peek(), Some(Tok::Name(_))) && cur.peek2() == Some(&Tok::LParen);
        if is_pred {
            let (pred, pcol) = cur.name("a predicate")?;
            cur.pos += 1;
            let mut args = vec![term(cur)?];
            if cur.eat(&Tok::Comma) {
                args.push(term(cur)?);
            }
            if cur.peek() == Some(&Tok::Comma) {
                return Err(cur.err("predicates take one or two arguments"));
            }
            cur.expect(&Tok::RParen, "`)`")?;
            kinds.note(&pred, args.len(), cur.line, pcol)?;
            out.push(Atom::rel(pred.as_str(), args).expect("one or two arguments"));
        } else {
            let col = cur.col();
            let a = term(cur)?;
            cur.expect(&Tok::Neq, "`!=` or an atom `P(...)`")?;
            let b = term(cur)?;
            out.push(Atom::neq(a, b).map_err(|e| Diagnostic::error(cur.line, col, e.to_string()))?);
        }
        if cur.peek().is_none() {
            return Ok(());
        }
        cur.expect(&Tok::Comma, "`,` between atoms")?;
    }
}

pub fn parse_query_file(text: &str) -> Result<QueryFile, ParseError> {
    let mut kinds = Kinds::default();
    let mut diags = Vec::new();
    let mut free: Vec<Name> = Vec::new();
    let mut disjuncts: Vec<(usize, Vec<Atom>)> = Vec::new();
    let mut current: Option<(usize, Vec<Atom>)> = None;
    let mut last_line = 0;
    for (i, line) in text.lines().enumerate() {
        let ln = i + 1;
        last_line = ln;
        let toks = match lex(line, ln) {
            Ok(t) => t,
            Err(d) => {
                diags.push(d);
                continue;
            }
        };
        if toks.is_empty() {
            continue;
        }
        if toks.len() == 1 && toks[0].0 == Tok::Name("OR".into()) {
            match current.take() {
                Some(d) if !d.1.is_empty() => disjuncts.push(d),
                _ => diags.push(Diagnostic::error(ln, 1, "`OR` without a preceding disjunct")),
            }
            continue;
        }
        let mut cur = Cursor::new(&toks, ln, line);
        if cur.peek() == Some(&Tok::Name("free".into())) && cur.peek2() == Some(&Tok::Colon) {
            if !disjuncts.is_empty() || current.is_some() {
                diags.push(Diagnostic::error(ln, 1, "`free:` must come before the query atoms"));
                continue;
            }
            cur.pos += 2;
            loop {
                match cur.toks.get(cur.pos) {
                    Some((Tok::Var(v), c)) => {
                        let v = Name::new(v);
                        if free.contains(&v) {
                            diags.push(Diagnostic::error(ln, *c, format!("?{v} is declared twice")));
                        }
                        free.push(v);
                        cur.pos += 1;
                    }
                    _ => {
                        diags.push(cur.unexpected("an answer variable `?x`"));
                        break;
                    }
                }
                if cur.peek().is_none() {
                    break;
                }
                if let Err(d) = cur.expect(&Tok::Comma, "`,`") {
                    diags.push(d);
                    break;
                }
            }
            continue;
        }
        let entry = current.get_or_insert_with(|| (ln, Vec::new()));
        if let Err(d) = parse_atoms(&mut cur, &mut kinds, &mut entry.1) {
            diags.push(d);
        }
    }
    match current.take() {
        Some(d) if !d.1.is_empty() => disjuncts.push(d),
        Some(_) | None if !disjuncts.is_empty() => {
            diags.push(Diagnostic::error(last_line, 1, "`OR` without a following disjunct"))
        }
        _ => {}
    }
    if disjuncts.is_empty() && diags.is_empty() {
        diags.push(Diagnostic::error(1, 1, "empty query"));
    }
    for (ln, atoms) in &disjuncts {
        let vars: BTreeSet<&Name> = atoms.iter().flat_map(|a| a.vars()).collect();
        for v in &free {
            if !vars.contains(v) {
                diags.push(Diagnostic::error(*ln, 1, format!("answer variable ?{v} does not occur in this disjunct")));
            }
        }
        if let Err(e) = CQ::new(atoms.clone()) {
            diags.push(Diagnostic::error(*ln, 1, e.to_string()));
        }
    }
    finish(QueryFile { free, disjuncts }, diags)
}

impl QueryFile {
    /// Replaces every answer variable by its bound constant.
    pub fn instantiate(&self, bindings: &BTreeMap<Name, Name>) -> Result<UCQ, ParseError> {
        let top = |msg: String| ParseError::single(Diagnostic::error(1, 1, msg));
        for v in &self.free {
            if !bindings.contains_key(v) {
                return Err(top(format!("answer variable ?{v} is not bound; pass --answer {v}=<constant>")));
            }
        }
        if let Some(v) = bindings.keys().find(|v| !self.free.contains(v)) {
            return Err(top(format!("?{v} is not an answer variable of the query")));
        }
        let map: BTreeMap<Name, Term> = bindings
            .iter()
            .map(|(v, c)| (v.clone(), Term::Const(c.clone())))
            .collect();
        let mut out = Vec::new();
        for (ln, atoms) in &self.disjuncts {
            let cq = CQ::new(atoms.clone()).map_err(|e| top(e.to_string()))?;
            match cq.rename(&map) {
                Some(q) => out.push(q),
                None => {
                    return Err(ParseError::single(Diagnostic::error(
                        *ln,
                        1,
                        "binding makes a disequality compare a constant with itself",
                    )))
                }
            }
        }
        UCQ::new(out).map_err(|e| top(e.to_string()))
    }
}

/// Parses a Boolean query; files declaring answer variables are rejected.
pub fn parse_query(text: &str) -> Result<UCQ, ParseError> {
    let file = parse_query_file(text)?;
    if !file.free.is_empty() {
        let vs: Vec<String> = file.free.iter().map(|v| format!("?{v}")).collect();
        return Err(ParseError::single(Diagnostic::error(
            1,
            1,
            format!("query has answer variables {}; only Boolean queries are accepted here", vs.join(", ")),
        )));
    }
    file.instantiate(&BTreeMap::new())
}

fn is_plain(s: &str) -> bool {
    !s.is_empty() && s.chars().all(is_name_char)
}

pub fn render_constant(c: &str) -> String {
    if is_plain(c) {
        c.to_string()
    } else {
        format!("\"{}\"", c.replace('\\', "\\\\").replace('"', "\\\""))
    }
}

fn render_term(t: &Term) -> String {
    match t {
        Term::Var(v) => format!("?{v}"),
        Term::Const(c) => render_constant(c),
        Term::Anon => "<anon>".to_string(),
    }
}

pub fn render_atom(a: &Atom) -> String {
    match a {
        Atom::Rel { pred, args } => {
            let args: Vec<String> = args.iter().map(render_term).collect();
            format!("{pred}({})", args.join(", "))
        }
        Atom::Neq(x, y) => format!("{} != {}", render_term(x), render_term(y)),
    }
}

pub fn render_tbox(t: &TBox) -> String {
    t.axioms().iter().map(|a| format!("{a}\n")).collect()
}

pub fn render_ground(g: &GroundAtom) -> String {
    let args: Vec<String> = g.args().iter().map(|c| render_constant(c)).collect();
    format!("{}({})", g.pred(), args.join(", "))
}

pub fn render_abox(a: &ABox) -> String {
    a.facts()
        .iter()
        .map(|f| format!("{}: {}\n", f.label, render_ground(&f.atom)))
        .collect()
}

pub fn render_cq(q: &CQ) -> String {
    let atoms: Vec<String> = q.atoms().iter().map(render_atom).collect();
    atoms.join(", ")
}

pub fn render_query(q: &UCQ) -> String {
    let ds: Vec<String> = q.disjuncts().iter().map(render_cq).collect();
    let mut s = ds.join("\nOR\n");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tbox_lines() {
        let t = parse_tbox("Seafood <= FishBased\nexists r- <= B\n# note\n\nA <= !exists s\nrole: r <= !t-\n").unwrap();
        assert_eq!(t.len(), 4);
        assert_eq!(
            t.axioms()[1],
            Axiom::concept(BasicConcept::exists(Role::inverse_of("r")), BasicConcept::name("B"))
        );
        assert_eq!(
            t.axioms()[2],
            Axiom::concept_neg(BasicConcept::name("A"), BasicConcept::exists(Role::named("s")))
        );
        assert!(!t.is_horn_extended());
    }

    #[test]
    fn tbox_errors_carry_positions() {
        let e = parse_tbox("A <= B\n!A <= B\n").unwrap_err();
        assert_eq!((e.diagnostics[0].line, e.diagnostics[0].column), (2, 1));
        let e = parse_tbox("A <= B\nexists A <= C\n").unwrap_err();
        assert_eq!(e.diagnostics[0].line, 2);
        assert!(e.diagnostics[0].message.contains("concept"));
        let e = parse_tbox("A <= B C\n").unwrap_err();
        assert_eq!(e.diagnostics[0].column, 8);
        assert!(parse_tbox("A <= $\n").is_err());
    }

    #[test]
    fn horn_shapes() {
        let t = parse_tbox(
            "exists hasIng.FishBased <= FishBased\nrole: hasGrnsh <= hasIng\nSeafood <= FishBased\nFish <= FishBased\n",
        )
        .unwrap();
        assert_eq!(t.len(), 4);
        assert!(t.is_horn_extended());
        assert!(parse_tbox("A & B <= C").unwrap().is_horn_extended());
    }

    #[test]
    fn abox_lines() {
        let a = parse_abox("f3: hasIng(sole, sauce)\nFish(stock)\n").unwrap();
        assert_eq!(a.facts()[0].label.as_str(), "f3");
        assert_eq!(a.facts()[1].label.as_str(), "f1");
        let e = parse_abox("f3: Fish(a)\nf4: Fish(a, b)\n").unwrap_err();
        assert_eq!(e.diagnostics[0].line, 2);
        assert!(parse_abox("f1: A(c)\nf1: B(c)\n").is_err());
        assert!(parse_abox("A(?x)\n").is_err());
    }

    #[test]
    fn query_forms() {
        let q = parse_query("FishBased(cancalaiseSole)").unwrap();
        assert_eq!(q.disjuncts().len(), 1);
        assert!(q.disjuncts()[0].vars().is_empty());
        let q = parse_query("r(?x,?y), ?x != ?y").unwrap();
        assert!(q.has_neq());
        let q = parse_query("A(?x)\nOR\nB(?x)\n").unwrap();
        assert_eq!(q.disjuncts().len(), 2);
        assert!(parse_query("A(?x) B(?x)").is_err());
        assert!(parse_query("free: ?x\nA(?x)").is_err());
        assert!(parse_query("A(?x)\nOR\n").is_err());
    }

    #[test]
    fn answer_bindings() {
        let f = parse_query_file("free: ?x\nr(?x, ?y), A(?y)\n").unwrap();
        let b: BTreeMap<Name, Name> = [(Name::new("x"), Name::new("c"))].into_iter().collect();
        let q = f.instantiate(&b).unwrap();
        assert_eq!(render_query(&q), "A(?y), r(c, ?y)\n");
        assert!(f.instantiate(&BTreeMap::new()).is_err());
    }

    #[test]
    fn quoted_constants_round_trip() {
        let a = parse_abox("f0: A(\"o'hara\")\nf1: r(\"a b\", \"q\\\"x\")\n").unwrap();
        assert_eq!(a.facts()[0].atom.args()[0].as_str(), "o'hara");
        assert_eq!(parse_abox(&render_abox(&a)).unwrap(), a);
    }
}
