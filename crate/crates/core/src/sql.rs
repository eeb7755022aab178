//! SQL-92 text for the counting queries: schema, loader and one
//! `SELECT COUNT(*)` per counting query. Scaling by the coefficients and
//! summing is left to the caller.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::error::{invalid, Result};
use crate::model::{ABox, Atom, Name, Rational, Term, CQ, UCQ};
use crate::support::partition::PartitionPlan;

const RESERVED: &[&str] = &[
    "all", "and", "as", "by", "count", "create", "delete", "distinct", "from", "group", "in",
    "insert", "into", "is", "not", "null", "or", "order", "select", "table", "union", "update",
    "values", "where",
];

fn sanitize(name: &str) -> String {
    let mut s: String = name
        .chars()
        .map(|c| {
            if c.is_ascii_alphanumeric() {
                c.to_ascii_lowercase()
            } else {
                '_'
            }
        })
        .collect();
    if s.is_empty() || s.starts_with(|c: char| c.is_ascii_digit()) || RESERVED.contains(&s.as_str()) {
        s.insert_str(0, "t_");
    }
    s
}

/// Table names for a signature of unary (column `c`) and binary (columns
/// `s`, `o`) predicates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SqlSchema {
    tables: BTreeMap<Name, (String, usize)>,
}

impl SqlSchema {
    /// Names are lowercased with other characters replaced by `_`; later
    /// predicates (in name order) that clash get `_2`, `_3`, ...
    pub fn new(signature: &BTreeMap<Name, usize>) -> Self {
        let mut used: BTreeSet<String> = BTreeSet::new();
        let mut tables = BTreeMap::new();
        for (pred, &arity) in signature {
            let base = sanitize(pred.as_str());
            let mut name = base.clone();
            let mut i = 2;
            while used.contains(&name) {
                name = format!("{base}_{i}");
                i += 1;
            }
            used.insert(name.clone());
            tables.insert(pred.clone(), (name, arity));
        }
        SqlSchema { tables }
    }

    pub fn table(&self, pred: &Name) -> Option<&str> {
        self.tables.get(pred).map(|(t, _)| t.as_str())
    }

    pub fn ddl(&self) -> String {
        let mut out = String::new();
        for (table, arity) in self.tables.values() {
            let cols = if *arity == 1 {
                "c VARCHAR(1024) NOT NULL"
            } else {
                "s VARCHAR(1024) NOT NULL, o VARCHAR(1024) NOT NULL"
            };
            out.push_str(&format!("CREATE TABLE {table} ({cols});\n"));
        }
        out
    }
}

/// Predicate arities of the ABox and the queries.
pub fn signature<'a>(abox: &ABox, queries: impl IntoIterator<Item = &'a UCQ>) -> BTreeMap<Name, usize> {
    let mut sig = abox.arities();
    for q in queries {
        sig.extend(q.arities());
    }
    sig
}

pub fn emit_schema(signature: &BTreeMap<Name, usize>) -> String {
    SqlSchema::new(signature).ddl()
}

fn literal(c: &Name) -> String {
    format!("'{}'", c.as_str().replace('\'', "''"))
}

fn columns(arity: usize) -> &'static [&'static str] {
    if arity == 1 {
        &["c"]
    } else {
        &["s", "o"]
    }
}

/// `SELECT COUNT(*)` whose result is the number of homomorphisms of `cq`
/// into the loaded tables.
pub fn emit_count_query(cq: &CQ, schema: &SqlSchema) -> Result<String> {
    let mut from = Vec::new();
    let mut conds = Vec::new();
    let mut first: BTreeMap<&Name, String> = BTreeMap::new();
    for (i, atom) in cq.relational().enumerate() {
        let pred = atom.pred().unwrap();
        let table = schema
            .table(pred)
            .ok_or_else(|| invalid(format!("predicate `{pred}` is not in the schema")))?;
        from.push(format!("{table} AS a{i}"));
        for (t, col) in atom.args().iter().zip(columns(atom.args().len())) {
            let r = format!("a{i}.{col}");
            match t {
                Term::Const(c) => conds.push(format!("{r} = {}", literal(c))),
                Term::Var(v) => match first.get(v) {
                    Some(prev) => conds.push(format!("{prev} = {r}")),
                    None => {
                        first.insert(v, r);
                    }
                },
                Term::Anon => return Err(invalid("anonymous term in a query")),
            }
        }
    }
    for a in cq.atoms() {
        if let Atom::Neq(x, y) = a {
            let side = |t: &Term| match t {
                Term::Var(v) => first[v].clone(),
                Term::Const(c) => literal(c),
                Term::Anon => String::from("NULL"),
            };
            conds.push(format!("{} <> {}", side(x), side(y)));
        }
    }
    let mut sql = format!("SELECT COUNT(*) FROM {}", from.join(", "));
    if !conds.is_empty() {
        sql.push_str(" WHERE ");
        sql.push_str(&conds.join(" AND "));
    }
    Ok(sql)
}

/// One `INSERT` per fact, in ABox order.
pub fn emit_loader(abox: &ABox, schema: &SqlSchema) -> Result<String> {
    let mut out = String::new();
    for f in abox.facts() {
        let table = schema
            .table(f.atom.pred())
            .ok_or_else(|| invalid(format!("predicate `{}` is not in the schema", f.atom.pred())))?;
        let vals: Vec<String> = f.atom.args().iter().map(literal).collect();
        out.push_str(&format!("INSERT INTO {table} VALUES ({});\n", vals.join(",")));
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ManifestEntry {
    pub id: String,
    pub sql: String,
    pub gamma: Rational,
    pub size: usize,
}

/// Independent count queries; `countFMS(k)` is the sum of `gamma * count`
/// over the entries of size `k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SqlManifest {
    pub schema: String,
    pub queries: Vec<ManifestEntry>,
}

impl SqlManifest {
    pub const AGGREGATION: &'static str =
        "countFMS(k) = sum over entries of size k of gamma * (result of sql); entries are independent";

    /// Manifest for the counting queries of `ucq`, restricted to size `k`
    /// when given.
    pub fn build(ucq: &UCQ, k: Option<usize>, schema: &SqlSchema) -> Result<Self> {
        let plan = PartitionPlan::new(ucq)?;
        let mut queries = Vec::new();
        for (&size, qs) in &plan.by_size {
            if k.is_some_and(|k| k != size) {
                continue;
            }
            for (j, q) in qs.iter().enumerate() {
                queries.push(ManifestEntry {
                    id: format!("k{size}_q{j}"),
                    sql: emit_count_query(&q.cq, schema)?,
                    gamma: q.gamma.clone(),
                    size,
                });
            }
        }
        Ok(SqlManifest {
            schema: schema.ddl(),
            queries,
        })
    }

    /// Combines per-entry counts (in entry order) into a histogram by size.
    pub fn aggregate(&self, counts: &[u128]) -> Result<BTreeMap<usize, Rational>> {
        if counts.len() != self.queries.len() {
            return Err(invalid("one count per manifest entry is required"));
        }
        let mut out: BTreeMap<usize, Rational> = BTreeMap::new();
        for (e, &c) in self.queries.iter().zip(counts) {
            *out.entry(e.size).or_insert_with(Rational::zero) += e.gamma.clone() * Rational::from_u128(c);
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::GroundAtom;

    fn v(n: &str) -> Term {
        Term::var(n)
    }

    fn schema(preds: &[(&str, usize)]) -> SqlSchema {
        SqlSchema::new(&preds.iter().map(|(p, a)| (Name::new(p), *a)).collect())
    }

    #[test]
    fn table_names() {
        let s = schema(&[("A", 1), ("hasIng", 2), ("a", 1), ("select", 1)]);
        assert_eq!(s.table(&Name::new("A")), Some("a"));
        assert_eq!(s.table(&Name::new("a")), Some("a_2"));
        assert_eq!(s.table(&Name::new("hasIng")), Some("hasing"));
        assert_eq!(s.table(&Name::new("select")), Some("t_select"));
        assert!(s.ddl().contains("CREATE TABLE hasing (s VARCHAR(1024) NOT NULL, o VARCHAR(1024) NOT NULL);"));
    }

    #[test]
    fn count_queries() {
        let s = schema(&[("A", 1), ("r", 2)]);
        let q = CQ::new([
            Atom::role("r", v("x"), v("y")),
            Atom::neq(v("x"), v("y")).unwrap(),
        ])
        .unwrap();
        assert_eq!(
            emit_count_query(&q, &s).unwrap(),
            "SELECT COUNT(*) FROM r AS a0 WHERE a0.s <> a0.o"
        );
        let q = CQ::new([
            Atom::concept("A", v("x")),
            Atom::role("r", v("x"), v("y")),
            Atom::neq(v("x"), v("y")).unwrap(),
        ])
        .unwrap();
        assert_eq!(
            emit_count_query(&q, &s).unwrap(),
            "SELECT COUNT(*) FROM a AS a0, r AS a1 WHERE a0.c = a1.s AND a0.c <> a1.o"
        );
        let q = CQ::new([Atom::concept("A", Term::constant("c"))]).unwrap();
        assert_eq!(
            emit_count_query(&q, &s).unwrap(),
            "SELECT COUNT(*) FROM a AS a0 WHERE a0.c = 'c'"
        );
    }

    #[test]
    fn loader() {
        let abox = ABox::from_atoms([
            GroundAtom::unary("A", "c"),
            GroundAtom::binary("r", "c", "d"),
            GroundAtom::unary("A", "o'hara"),
        ])
        .unwrap();
        let s = SqlSchema::new(&abox.arities());
        assert_eq!(
            emit_loader(&abox, &s).unwrap(),
            "INSERT INTO a VALUES ('c');\nINSERT INTO r VALUES ('c','d');\nINSERT INTO a VALUES ('o''hara');\n"
        );
    }
}
