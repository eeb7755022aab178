use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use super::treedec::TreeDecomposition;
use crate::error::{invalid, Error, Result};
use crate::model::{Atom, Name, Term, WeightedDatabase, CQ};

/// A table over a sorted list of query variables.
#[derive(Clone, Debug)]
struct Factor {
    vars: Vec<usize>,
    table: BTreeMap<Vec<u32>, u128>,
}

fn mul(a: u128, b: u128) -> Result<u128> {
    a.checked_mul(b).ok_or(Error::Overflow("weighted homomorphism count"))
}

fn add(a: u128, b: u128) -> Result<u128> {
    a.checked_add(b).ok_or(Error::Overflow("weighted homomorphism count"))
}

impl Factor {
    fn scalar(w: u128) -> Self {
        let mut table = BTreeMap::new();
        if w > 0 {
            table.insert(Vec::new(), w);
        }
        Factor {
            vars: Vec::new(),
            table,
        }
    }

    fn join(&self, other: &Factor) -> Result<Factor> {
        let mut vars = self.vars.clone();
        vars.extend(other.vars.iter().copied());
        vars.sort_unstable();
        vars.dedup();
        let shared: Vec<usize> = self
            .vars
            .iter()
            .copied()
            .filter(|v| other.vars.contains(v))
            .collect();
        let pos = |vs: &[usize], v: usize| vs.iter().position(|&w| w == v).expect("factor variable");
        let mut index: BTreeMap<Vec<u32>, Vec<(&Vec<u32>, u128)>> = BTreeMap::new();
        for (row, &w) in &other.table {
            let key = shared.iter().map(|&v| row[pos(&other.vars, v)]).collect();
            index.entry(key).or_default().push((row, w));
        }
        let mut table = BTreeMap::new();
        for (row, &w) in &self.table {
            let key: Vec<u32> = shared.iter().map(|&v| row[pos(&self.vars, v)]).collect();
            let Some(partners) = index.get(&key) else {
                continue;
            };
            for &(orow, ow) in partners {
                let out: Vec<u32> = vars
                    .iter()
                    .map(|&v| match self.vars.iter().position(|&x| x == v) {
                        Some(i) => row[i],
                        None => orow[pos(&other.vars, v)],
                    })
                    .collect();
                let e = table.entry(out).or_insert(0u128);
                *e = add(*e, mul(w, ow)?)?;
            }
        }
        Ok(Factor { vars, table })
    }

    fn sum_out(&self, v: usize) -> Result<Factor> {
        let i = match self.vars.iter().position(|&x| x == v) {
            Some(i) => i,
            None => return Ok(self.clone()),
        };
        let mut vars = self.vars.clone();
        vars.remove(i);
        let mut table = BTreeMap::new();
        for (row, &w) in &self.table {
            let mut key = row.clone();
            key.remove(i);
            let e = table.entry(key).or_insert(0u128);
            *e = add(*e, w)?;
        }
        Ok(Factor { vars, table })
    }
}

struct Interner(BTreeMap<Name, u32>);

impl Interner {
    fn id(&mut self, n: &Name) -> u32 {
        let next = self.0.len() as u32;
        *self.0.entry(n.clone()).or_insert(next)
    }
}

fn atom_factor(
    atom: &Atom,
    vars: &[Name],
    wdb: &WeightedDatabase,
    ids: &mut Interner,
) -> Result<Factor> {
    let pred = atom.pred().expect("relational atom");
    let args = atom.args();
    let var_idx = |v: &Name| vars.binary_search(v).expect("query variable");
    let mut fvars: Vec<usize> = atom.vars().map(var_idx).collect();
    fvars.sort_unstable();
    fvars.dedup();
    let mut table: BTreeMap<Vec<u32>, u128> = BTreeMap::new();
    'tuples: for (g, w) in wdb.iter() {
        if g.pred() != pred || g.arity() != args.len() {
            continue;
        }
        let mut row = vec![u32::MAX; fvars.len()];
        for (t, c) in args.iter().zip(g.args()) {
            match t {
                Term::Const(k) => {
                    if k != c {
                        continue 'tuples;
                    }
                }
                Term::Var(v) => {
                    let slot = fvars.binary_search(&var_idx(v)).expect("factor variable");
                    let e = ids.id(c);
                    if row[slot] != u32::MAX && row[slot] != e {
                        continue 'tuples;
                    }
                    row[slot] = e;
                }
                Term::Anon => return Err(invalid("anonymous term in a query atom")),
            }
        }
        let e = table.entry(row).or_insert(0);
        *e = add(*e, w)?;
    }
    Ok(Factor { vars: fvars, table })
}

/// `sum over h: q -> D of prod over atoms of w(h(atom))`, by eliminating
/// variables in the decomposition's order.
pub fn weighted_eval(q: &CQ, wdb: &WeightedDatabase, td: &TreeDecomposition) -> Result<u128> {
    if q.has_neq() {
        return Err(invalid("weighted evaluation does not support disequalities"));
    }
    let vars: Vec<Name> = q.vars().into_iter().collect();
    if vars != td.vars || td.order.len() != vars.len() {
        return Err(invalid("tree decomposition belongs to a different query"));
    }
    let mut ids = Interner(BTreeMap::new());
    let mut factors = Vec::new();
    for a in q.relational() {
        factors.push(atom_factor(a, &vars, wdb, &mut ids)?);
    }
    for &v in &td.order {
        let (with, without): (Vec<Factor>, Vec<Factor>) =
            factors.into_iter().partition(|f| f.vars.contains(&v));
        factors = without;
        let mut joined = Factor::scalar(1);
        for f in &with {
            joined = joined.join(f)?;
            if joined.table.is_empty() {
                return Ok(0);
            }
        }
        factors.push(joined.sum_out(v)?);
    }
    let mut total = 1u128;
    for f in &factors {
        debug_assert!(f.vars.is_empty());
        total = mul(total, f.table.values().copied().sum())?;
    }
    Ok(total)
}

/// The same sum by enumerating every assignment into the active domain.
pub fn weighted_eval_naive(q: &CQ, wdb: &WeightedDatabase) -> Result<u128> {
    let vars: Vec<Name> = q.vars().into_iter().collect();
    let mut domain: Vec<Name> = wdb
        .iter()
        .flat_map(|(g, _)| g.args().iter().cloned())
        .collect();
    domain.sort();
    domain.dedup();
    let atoms: Vec<&Atom> = q.relational().collect();
    let mut choice = vec![0usize; vars.len()];
    let mut total = 0u128;
    if !vars.is_empty() && domain.is_empty() {
        return Ok(0);
    }
    loop {
        let mut prod = 1u128;
        for a in &atoms {
            let args: Vec<Name> = a
                .args()
                .iter()
                .map(|t| match t {
                    Term::Var(v) => domain[choice[vars.binary_search(v).unwrap()]].clone(),
                    Term::Const(c) => c.clone(),
                    Term::Anon => unreachable!("queries have no anonymous terms"),
                })
                .collect();
            let g = crate::model::GroundAtom::new(a.pred().unwrap().clone(), args)?;
            prod = mul(prod, wdb.weight(&g))?;
            if prod == 0 {
                break;
            }
        }
        total = add(total, prod)?;
        let mut i = 0;
        loop {
            if i == vars.len() {
                return Ok(total);
            }
            choice[i] += 1;
            if choice[i] < domain.len() {
                break;
            }
            choice[i] = 0;
            i += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::super::treedec::tree_decompose;
    use super::*;
    use crate::model::GroundAtom;

    fn v(n: &str) -> Term {
        Term::var(n)
    }

    #[test]
    fn unit_weights_count_homomorphisms() {
        let q = CQ::new([Atom::concept("A", v("x")), Atom::role("r", v("x"), v("y"))]).unwrap();
        let db: WeightedDatabase = [
            (GroundAtom::unary("A", "c"), 1),
            (GroundAtom::binary("r", "c", "d"), 1),
            (GroundAtom::binary("r", "c", "e"), 1),
        ]
        .into_iter()
        .collect();
        assert_eq!(weighted_eval(&q, &db, &tree_decompose(&q)).unwrap(), 2);
        assert_eq!(weighted_eval_naive(&q, &db).unwrap(), 2);
    }

    #[test]
    fn weight_scales_single_atom() {
        let q = CQ::new([Atom::concept("A", v("x"))]).unwrap();
        let db: WeightedDatabase = [(GroundAtom::unary("A", "c"), 3)].into_iter().collect();
        assert_eq!(weighted_eval(&q, &db, &tree_decompose(&q)).unwrap(), 3);
    }

    #[test]
    fn every_order_agrees_on_a_cycle() {
        let q = CQ::new([
            Atom::role("r", v("a"), v("b")),
            Atom::role("r", v("b"), v("c")),
            Atom::role("r", v("c"), v("a")),
            Atom::concept("A", v("a")),
        ])
        .unwrap();
        let mut db = WeightedDatabase::new();
        for (i, (x, y)) in [("1", "2"), ("2", "3"), ("3", "1"), ("1", "1"), ("2", "1")]
            .into_iter()
            .enumerate()
        {
            db.add(GroundAtom::binary("r", x, y), i as u128 + 1);
        }
        db.add(GroundAtom::unary("A", "1"), 2);
        db.add(GroundAtom::unary("A", "3"), 5);
        let naive = weighted_eval_naive(&q, &db).unwrap();
        assert!(naive > 0);
        for order in [[0, 1, 2], [2, 1, 0], [1, 0, 2], [0, 2, 1]] {
            let td = TreeDecomposition::from_order(&q, &order);
            assert!(td.is_valid_for(&q));
            assert_eq!(weighted_eval(&q, &db, &td).unwrap(), naive);
        }
    }

    #[test]
    fn constants_and_ground_atoms() {
        let q = CQ::new([
            Atom::role("r", Term::constant("1"), v("x")),
            Atom::concept("A", Term::constant("3")),
        ])
        .unwrap();
        let mut db = WeightedDatabase::new();
        db.add(GroundAtom::binary("r", "1", "2"), 2);
        db.add(GroundAtom::binary("r", "1", "3"), 3);
        db.add(GroundAtom::binary("r", "2", "3"), 7);
        db.add(GroundAtom::unary("A", "3"), 4);
        assert_eq!(weighted_eval(&q, &db, &tree_decompose(&q)).unwrap(), 20);
        assert_eq!(weighted_eval_naive(&q, &db).unwrap(), 20);
    }
}
