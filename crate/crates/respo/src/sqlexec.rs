//! A small in-memory engine for the SQL subset the emitter produces:
//! `CREATE TABLE`, `INSERT INTO ... VALUES`, and
//! `SELECT COUNT(*) FROM t AS a, ... WHERE x = y AND x <> y`.

use std::collections::BTreeMap;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("sql: {0}")]
pub struct SqlError(pub String);

type SqlResult<T> = Result<T, SqlError>;

fn fail<T>(msg: impl Into<String>) -> SqlResult<T> {
    Err(SqlError(msg.into()))
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Str(String),
    Num(String),
    Sym(&'static str),
}

fn lex(sql: &str) -> SqlResult<Vec<Tok>> {
    let cs: Vec<char> = sql.chars().collect();
    let mut i = 0;
    let mut out = Vec::new();
    while i < cs.len() {
        let c = cs[i];
        if c.is_whitespace() {
            i += 1;
        } else if c == '\'' {
            let mut s = String::new();
            i += 1;
            loop {
                match cs.get(i) {
                    None => return fail("unterminated string literal"),
                    Some('\'') if cs.get(i + 1) == Some(&'\'') => {
                        s.push('\'');
                        i += 2;
                    }
                    Some('\'') => {
                        i += 1;
                        break;
                    }
                    Some(&ch) => {
                        s.push(ch);
                        i += 1;
                    }
                }
            }
            out.push(Tok::Str(s));
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < cs.len() && (cs[i].is_ascii_alphanumeric() || cs[i] == '_') {
                i += 1;
            }
            out.push(Tok::Ident(cs[start..i].iter().collect::<String>().to_ascii_lowercase()));
        } else if c.is_ascii_digit() {
            let start = i;
            while i < cs.len() && cs[i].is_ascii_digit() {
                i += 1;
            }
            out.push(Tok::Num(cs[start..i].iter().collect()));
        } else {
            let sym = match (c, cs.get(i + 1)) {
                ('<', Some('>')) => "<>",
                ('(', _) => "(",
                (')', _) => ")",
                (',', _) => ",",
                (';', _) => ";",
                ('.', _) => ".",
                ('=', _) => "=",
                ('*', _) => "*",
                _ => return fail(format!("unexpected character `{c}`")),
            };
            i += sym.len();
            out.push(Tok::Sym(sym));
        }
    }
    Ok(out)
}

struct P {
    toks: Vec<Tok>,
    pos: usize,
}

impl P {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).cloned();
        self.pos += 1;
        t
    }

    fn kw(&mut self, k: &str) -> bool {
        if self.peek() == Some(&Tok::Ident(k.to_string())) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect_kw(&mut self, k: &str) -> SqlResult<()> {
        if self.kw(k) {
            Ok(())
        } else {
            fail(format!("expected `{}`, found {:?}", k.to_ascii_uppercase(), self.peek()))
        }
    }

    fn sym(&mut self, s: &str) -> bool {
        if self.peek() == Some(&Tok::Sym(match s {
            "<>" => "<>",
            "(" => "(",
            ")" => ")",
            "," => ",",
            ";" => ";",
            "." => ".",
            "=" => "=",
            _ => "*",
        })) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect_sym(&mut self, s: &str) -> SqlResult<()> {
        if self.sym(s) {
            Ok(())
        } else {
            fail(format!("expected `{s}`, found {:?}", self.peek()))
        }
    }

    fn ident(&mut self) -> SqlResult<String> {
        match self.next() {
            Some(Tok::Ident(s)) => Ok(s),
            t => fail(format!("expected an identifier, found {t:?}")),
        }
    }

    fn done(&self) -> bool {
        self.pos >= self.toks.len()
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
struct Table {
    columns: Vec<String>,
    rows: Vec<Vec<String>>,
}

#[derive(Clone, Debug)]
enum Operand {
    Col(usize, usize),
    Lit(String),
}

#[derive(Clone, Debug)]
struct Cond {
    left: Operand,
    right: Operand,
    equal: bool,
}

#[derive(Clone, Debug, Default)]
pub struct Database {
    tables: BTreeMap<String, Table>,
}

impl Database {
    pub fn new() -> Self {
        Database::default()
    }

    pub fn row_count(&self, table: &str) -> Option<usize> {
        self.tables.get(table).map(|t| t.rows.len())
    }

    /// Runs `CREATE TABLE` and `INSERT` statements separated by `;`.
    pub fn execute_script(&mut self, script: &str) -> SqlResult<()> {
        let toks = lex(script)?;
        let mut stmts: Vec<Vec<Tok>> = vec![Vec::new()];
        for t in toks {
            if t == Tok::Sym(";") {
                stmts.push(Vec::new());
            } else {
                stmts.last_mut().unwrap().push(t);
            }
        }
        for s in stmts.into_iter().filter(|s| !s.is_empty()) {
            let mut p = P { toks: s, pos: 0 };
            if p.kw("create") {
                self.create(&mut p)?;
            } else if p.kw("insert") {
                self.insert(&mut p)?;
            } else {
                return fail(format!("unsupported statement starting with {:?}", p.peek()));
            }
            if !p.done() {
                return fail(format!("trailing tokens: {:?}", p.peek()));
            }
        }
        Ok(())
    }

    fn create(&mut self, p: &mut P) -> SqlResult<()> {
        p.expect_kw("table")?;
        let name = p.ident()?;
        p.expect_sym("(")?;
        let mut columns = Vec::new();
        loop {
            columns.push(p.ident()?);
            // type and constraints
            while !matches!(p.peek(), Some(Tok::Sym(",")) | Some(Tok::Sym(")")) | None) {
                if p.sym("(") {
                    while !p.sym(")") {
                        if p.next().is_none() {
                            return fail("unterminated type arguments");
                        }
                    }
                } else {
                    p.next();
                }
            }
            if p.sym(")") {
                break;
            }
            p.expect_sym(",")?;
        }
        if self.tables.contains_key(&name) {
            return fail(format!("table {name} already exists"));
        }
        self.tables.insert(name, Table { columns, rows: Vec::new() });
        Ok(())
    }

    fn insert(&mut self, p: &mut P) -> SqlResult<()> {
        p.expect_kw("into")?;
        let name = p.ident()?;
        p.expect_kw("values")?;
        p.expect_sym("(")?;
        let mut row = Vec::new();
        loop {
            match p.next() {
                Some(Tok::Str(s)) | Some(Tok::Num(s)) => row.push(s),
                t => return fail(format!("expected a literal, found {t:?}")),
            }
            if p.sym(")") {
                break;
            }
            p.expect_sym(",")?;
        }
        let table = self
            .tables
            .get_mut(&name)
            .ok_or_else(|| SqlError(format!("no table {name}")))?;
        if row.len() != table.columns.len() {
            return fail(format!("{name} has {} columns, got {} values", table.columns.len(), row.len()));
        }
        table.rows.push(row);
        Ok(())
    }

    /// Evaluates a single `SELECT COUNT(*)` statement.
    pub fn count(&self, sql: &str) -> SqlResult<u128> {
        let mut toks = lex(sql)?;
        if toks.last() == Some(&Tok::Sym(";")) {
            toks.pop();
        }
        let mut p = P { toks, pos: 0 };
        p.expect_kw("select")?;
        p.expect_kw("count")?;
        p.expect_sym("(")?;
        p.expect_sym("*")?;
        p.expect_sym(")")?;
        p.expect_kw("from")?;
        let mut aliases: Vec<(String, &Table)> = Vec::new();
        loop {
            let t = p.ident()?;
            let table = self.tables.get(&t).ok_or_else(|| SqlError(format!("no table {t}")))?;
            p.expect_kw("as")?;
            let a = p.ident()?;
            if aliases.iter().any(|(x, _)| *x == a) {
                return fail(format!("alias {a} used twice"));
            }
            aliases.push((a, table));
            if !p.sym(",") {
                break;
            }
        }
        let mut conds = Vec::new();
        if p.kw("where") {
            loop {
                let left = self.operand(&mut p, &aliases)?;
                let equal = if p.sym("=") {
                    true
                } else if p.sym("<>") {
                    false
                } else {
                    return fail(format!("expected `=` or `<>`, found {:?}", p.peek()));
                };
                let right = self.operand(&mut p, &aliases)?;
                conds.push(Cond { left, right, equal });
                if !p.kw("and") {
                    break;
                }
            }
        }
        if !p.done() {
            return fail(format!("trailing tokens: {:?}", p.peek()));
        }
        // each condition is checked once all of its aliases are bound
        let ready_at = |c: &Cond| {
            let side = |o: &Operand| match o {
                Operand::Col(a, _) => *a,
                Operand::Lit(_) => 0,
            };
            side(&c.left).max(side(&c.right))
        };
        let mut by_level: Vec<Vec<&Cond>> = vec![Vec::new(); aliases.len()];
        for c in &conds {
            by_level[ready_at(c)].push(c);
        }
        let tables: Vec<&Table> = aliases.iter().map(|(_, t)| *t).collect();
        let mut chosen: Vec<usize> = vec![0; tables.len()];
        Ok(count_rec(0, &tables, &by_level, &mut chosen))
    }

    fn operand(&self, p: &mut P, aliases: &[(String, &Table)]) -> SqlResult<Operand> {
        match p.next() {
            Some(Tok::Str(s)) | Some(Tok::Num(s)) => Ok(Operand::Lit(s)),
            Some(Tok::Ident(a)) => {
                p.expect_sym(".")?;
                let col = p.ident()?;
                let ai = aliases
                    .iter()
                    .position(|(x, _)| *x == a)
                    .ok_or_else(|| SqlError(format!("unknown alias {a}")))?;
                let ci = aliases[ai]
                    .1
                    .columns
                    .iter()
                    .position(|c| *c == col)
                    .ok_or_else(|| SqlError(format!("{a} has no column {col}")))?;
                Ok(Operand::Col(ai, ci))
            }
            t => fail(format!("expected a column or literal, found {t:?}")),
        }
    }
}

fn value<'a>(o: &'a Operand, tables: &[&'a Table], chosen: &[usize]) -> &'a str {
    match o {
        Operand::Col(a, c) => &tables[*a].rows[chosen[*a]][*c],
        Operand::Lit(s) => s,
    }
}

fn count_rec(level: usize, tables: &[&Table], conds: &[Vec<&Cond>], chosen: &mut [usize]) -> u128 {
    if level == tables.len() {
        return 1;
    }
    let mut n = 0;
    for r in 0..tables[level].rows.len() {
        chosen[level] = r;
        let ok = conds[level].iter().all(|c| {
            (value(&c.left, tables, chosen) == value(&c.right, tables, chosen)) == c.equal
        });
        if ok {
            n += count_rec(level + 1, tables, conds, chosen);
        }
    }
    n
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn load_and_count() {
        let mut db = Database::new();
        db.execute_script(
            "CREATE TABLE a (c VARCHAR(1024) NOT NULL);\nCREATE TABLE r (s VARCHAR(1024) NOT NULL, o VARCHAR(1024) NOT NULL);\n\
             INSERT INTO a VALUES ('c');\nINSERT INTO r VALUES ('c','d');\nINSERT INTO r VALUES ('c','c');\nINSERT INTO a VALUES ('o''x');\n",
        )
        .unwrap();
        assert_eq!(db.row_count("r"), Some(2));
        assert_eq!(db.count("SELECT COUNT(*) FROM r AS a0 WHERE a0.s <> a0.o").unwrap(), 1);
        assert_eq!(
            db.count("SELECT COUNT(*) FROM a AS a0, r AS a1 WHERE a0.c = a1.s AND a0.c <> a1.o").unwrap(),
            1
        );
        assert_eq!(db.count("SELECT COUNT(*) FROM a AS a0 WHERE a0.c = 'o''x'").unwrap(), 1);
        assert_eq!(db.count("SELECT COUNT(*) FROM a AS a0, a AS a1").unwrap(), 4);
        assert!(db.count("SELECT COUNT(*) FROM a AS a0 WHERE a0.z = 'c'").is_err());
        assert!(db.count("SELECT * FROM a AS a0").is_err());
    }
}
