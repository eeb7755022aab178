//! Backtracking homomorphism search from a CQ± into a finite relational
//! structure.
//!
//! A [`Structure`] is used for three kinds of targets: plain databases (every
//! two distinct elements count as different), other queries (variables become
//! elements that are only known to differ when a disequality says so) and
//! canonical-model slices built by the reasoner.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::model::{connected_components, Atom, GroundAtom, Name, Term, CQ};

#[derive(Clone, Debug, Default)]
struct Relation {
    arity: usize,
    tuples: Vec<(u32, u32, usize)>,
    by_first: BTreeMap<u32, Vec<usize>>,
    by_second: BTreeMap<u32, Vec<usize>>,
    exact: BTreeMap<(u32, u32), Vec<usize>>,
}

impl Relation {
    fn push(&mut self, a: u32, b: u32, tag: usize) {
        let i = self.tuples.len();
        self.tuples.push((a, b, tag));
        self.by_first.entry(a).or_default().push(i);
        self.by_second.entry(b).or_default().push(i);
        self.exact.entry((a, b)).or_default().push(i);
    }
}

/// Finite structure over elements `0..len`. Every tuple carries a tag
/// (typically the index of the fact or atom it came from).
#[derive(Clone, Debug, Default)]
pub struct Structure {
    len: u32,
    consts: BTreeMap<Name, u32>,
    rels: BTreeMap<Name, Relation>,
    /// `None`: distinct elements are different. `Some(pairs)`: only the
    /// listed (ordered low, high) pairs are known to be different.
    distinct: Option<BTreeSet<(u32, u32)>>,
}

impl Structure {
    pub fn new() -> Self {
        Structure::default()
    }

    pub fn len(&self) -> usize {
        self.len as usize
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn add_element(&mut self) -> u32 {
        self.len += 1;
        self.len - 1
    }

    /// Element denoting the named constant, created on first use.
    pub fn constant(&mut self, name: &Name) -> u32 {
        if let Some(&e) = self.consts.get(name) {
            return e;
        }
        let e = self.add_element();
        self.consts.insert(name.clone(), e);
        e
    }

    pub fn constant_id(&self, name: &str) -> Option<u32> {
        self.consts.get(name).copied()
    }

    pub fn add_tuple(&mut self, pred: &Name, args: &[u32], tag: usize) {
        let rel = self.rels.entry(pred.clone()).or_default();
        rel.arity = args.len();
        let b = if args.len() == 2 { args[1] } else { args[0] };
        rel.push(args[0], b, tag);
    }

    /// Database structure; tuple `i` is tagged `i`.
    pub fn from_atoms<'a>(atoms: impl IntoIterator<Item = &'a GroundAtom>) -> Self {
        let mut s = Structure::new();
        for (i, a) in atoms.into_iter().enumerate() {
            let args: Vec<u32> = a.args().iter().map(|c| s.constant(c)).collect();
            s.add_tuple(a.pred(), &args, i);
        }
        s
    }

    /// Query viewed as a structure: each variable and constant is an element,
    /// `extra` constants are added, and tuple `i` is tagged with the index of
    /// the relational atom in `q.atoms()`. Two elements are known to differ
    /// when both are constants or a disequality relates them.
    pub fn from_query<'a>(q: &CQ, extra: impl IntoIterator<Item = &'a Name>) -> Self {
        let mut s = Structure::new();
        let mut vars = BTreeMap::new();
        for v in q.vars() {
            let e = s.add_element();
            vars.insert(v, e);
        }
        for c in q.constants().iter() {
            s.constant(c);
        }
        for c in extra {
            s.constant(c);
        }
        let elem = |s: &Structure, t: &Term| match t {
            Term::Var(v) => vars[v],
            Term::Const(c) => s.consts[c],
            Term::Anon => unreachable!("queries have no anonymous terms"),
        };
        let mut distinct = BTreeSet::new();
        let cs: Vec<u32> = s.consts.values().copied().collect();
        for (i, &a) in cs.iter().enumerate() {
            for &b in &cs[i + 1..] {
                distinct.insert((a.min(b), a.max(b)));
            }
        }
        for (i, atom) in q.atoms().iter().enumerate() {
            match atom {
                Atom::Rel { pred, args } => {
                    let ids: Vec<u32> = args.iter().map(|t| elem(&s, t)).collect();
                    s.add_tuple(pred, &ids, i);
                }
                Atom::Neq(a, b) => {
                    let (a, b) = (elem(&s, a), elem(&s, b));
                    distinct.insert((a.min(b), a.max(b)));
                }
            }
        }
        s.distinct = Some(distinct);
        s
    }

    fn differ(&self, a: u32, b: u32) -> bool {
        if a == b {
            return false;
        }
        match &self.distinct {
            None => true,
            Some(d) => d.contains(&(a.min(b), a.max(b))),
        }
    }

    /// Number of tuples of a predicate.
    pub fn tuple_count(&self, pred: &str) -> usize {
        self.rels.get(pred).map_or(0, |r| r.tuples.len())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Slot {
    Var(usize),
    Elem(u32),
    /// Constant with no element in the target.
    Missing(u32),
}

/// Restrictions on a search.
#[derive(Clone, Copy, Default)]
pub struct Options<'a> {
    /// `domain(v, e)`: may variable number `v` (in [`CQ::vars`] order) take
    /// element `e`?
    pub domain: Option<&'a dyn Fn(usize, u32) -> bool>,
    /// Only tuples whose tag `t` has `tags[t] == true` may be used.
    pub tags: Option<&'a [bool]>,
}

/// One homomorphism, as reported to a search callback.
pub struct Match<'a> {
    /// Element per variable, in [`CQ::vars`] order.
    pub values: &'a [u32],
    /// Tag of the tuple matched by each relational atom (in plan order).
    pub tags: &'a [usize],
}

struct Plan {
    nvars: usize,
    atoms: Vec<(Name, Vec<Slot>)>,
    /// Disequalities to check once atom `i` has been matched.
    neq_after: Vec<Vec<(Slot, Slot)>>,
    /// Variables occurring in no relational atom, and their disequalities.
    loose: Vec<usize>,
    loose_neqs: Vec<(Slot, Slot)>,
    /// Disequalities between two constants.
    ground_neqs: Vec<(Slot, Slot)>,
}

fn compile(q: &CQ, s: &Structure) -> Plan {
    let vars: Vec<Name> = q.vars().into_iter().collect();
    let var_idx: BTreeMap<&Name, usize> = vars.iter().enumerate().map(|(i, v)| (v, i)).collect();
    let mut missing = BTreeMap::new();
    let mut slot = |t: &Term| match t {
        Term::Var(v) => Slot::Var(var_idx[v]),
        Term::Const(c) => match s.consts.get(c) {
            Some(&e) => Slot::Elem(e),
            None => {
                let n = missing.len() as u32;
                Slot::Missing(*missing.entry(c.clone()).or_insert(n))
            }
        },
        Term::Anon => unreachable!("queries have no anonymous terms"),
    };
    let mut rel: Vec<(Name, Vec<Slot>)> = Vec::new();
    let mut neqs: Vec<(Slot, Slot)> = Vec::new();
    for a in q.atoms() {
        match a {
            Atom::Rel { pred, args } => rel.push((pred.clone(), args.iter().map(&mut slot).collect())),
            Atom::Neq(x, y) => neqs.push((slot(x), slot(y))),
        }
    }

    // greedy static order: most already-bound positions first, then the
    // smallest relation
    let mut bound = vec![false; vars.len()];
    let mut order: Vec<(Name, Vec<Slot>)> = Vec::new();
    let mut bound_at: Vec<usize> = vec![usize::MAX; vars.len()];
    while !rel.is_empty() {
        let score = |(p, args): &(Name, Vec<Slot>)| {
            let b = args
                .iter()
                .filter(|sl| match sl {
                    Slot::Var(v) => bound[*v],
                    _ => true,
                })
                .count();
            (b, usize::MAX - s.tuple_count(p))
        };
        let best = (0..rel.len()).max_by_key(|&i| score(&rel[i])).unwrap();
        let atom = rel.swap_remove(best);
        for sl in &atom.1 {
            if let Slot::Var(v) = *sl {
                if !bound[v] {
                    bound[v] = true;
                    bound_at[v] = order.len();
                }
            }
        }
        order.push(atom);
    }

    let mut neq_after = vec![Vec::new(); order.len()];
    let loose: Vec<usize> = (0..vars.len()).filter(|&v| !bound[v]).collect();
    let mut loose_neqs = Vec::new();
    let mut ground_neqs = Vec::new();
    for (x, y) in neqs {
        let at = |sl: Slot| match sl {
            Slot::Var(v) => Some(bound_at[v]),
            _ => None,
        };
        match (at(x), at(y)) {
            (None, None) => ground_neqs.push((x, y)),
            (a, b) => {
                let a = a.unwrap_or(0);
                let b = b.unwrap_or(0);
                let last = a.max(b);
                if last == usize::MAX {
                    loose_neqs.push((x, y));
                } else {
                    neq_after[last].push((x, y));
                }
            }
        }
    }
    Plan {
        nvars: vars.len(),
        atoms: order,
        neq_after,
        loose,
        loose_neqs,
        ground_neqs,
    }
}

struct Search<'a, F> {
    s: &'a Structure,
    plan: &'a Plan,
    opts: Options<'a>,
    values: Vec<u32>,
    set: Vec<bool>,
    tags: Vec<usize>,
    f: F,
}

impl<'a, F: FnMut(&Match) -> bool> Search<'a, F> {
    fn value(&self, sl: Slot) -> Option<u32> {
        match sl {
            Slot::Var(v) => self.set[v].then(|| self.values[v]),
            Slot::Elem(e) => Some(e),
            Slot::Missing(_) => None,
        }
    }

    fn neq_holds(&self, x: Slot, y: Slot) -> bool {
        match (x, y) {
            (Slot::Missing(a), Slot::Missing(b)) => a != b,
            (Slot::Missing(_), _) | (_, Slot::Missing(_)) => true,
            _ => {
                let a = self.value(x).expect("bound");
                let b = self.value(y).expect("bound");
                self.s.differ(a, b)
            }
        }
    }

    fn allowed(&self, v: usize, e: u32) -> bool {
        self.opts.domain.is_none_or(|d| d(v, e))
    }

    /// Returns false when the callback asked to stop.
    fn run(&mut self, depth: usize) -> bool {
        if depth == self.plan.atoms.len() {
            return self.run_loose(0);
        }
        let (pred, args) = &self.plan.atoms[depth];
        let Some(rel) = self.s.rels.get(pred) else {
            return true;
        };
        if rel.arity != args.len() || args.iter().any(|a| matches!(a, Slot::Missing(_))) {
            return true;
        }
        let first = self.value(args[0]);
        let second = if args.len() == 2 { self.value(args[1]) } else { first };
        let all: Vec<usize>;
        let cands: &[usize] = match (first, second) {
            (Some(a), Some(b)) if args.len() == 2 => {
                rel.exact.get(&(a, b)).map_or(&[], Vec::as_slice)
            }
            (Some(a), _) => rel.by_first.get(&a).map_or(&[], Vec::as_slice),
            (None, Some(b)) => rel.by_second.get(&b).map_or(&[], Vec::as_slice),
            (None, None) => {
                all = (0..rel.tuples.len()).collect();
                &all
            }
        };
        for &ti in cands {
            let (a, b, tag) = rel.tuples[ti];
            if let Some(mask) = self.opts.tags {
                if !mask.get(tag).copied().unwrap_or(false) {
                    continue;
                }
            }
            let vals = [a, b];
            let mut newly: [usize; 2] = [usize::MAX; 2];
            let mut ok = true;
            for (i, sl) in args.iter().enumerate() {
                match *sl {
                    Slot::Var(v) => {
                        if self.set[v] {
                            if self.values[v] != vals[i] {
                                ok = false;
                                break;
                            }
                        } else if self.allowed(v, vals[i]) {
                            self.set[v] = true;
                            self.values[v] = vals[i];
                            newly[i] = v;
                        } else {
                            ok = false;
                            break;
                        }
                    }
                    Slot::Elem(e) => {
                        if e != vals[i] {
                            ok = false;
                            break;
                        }
                    }
                    Slot::Missing(_) => unreachable!(),
                }
            }
            if ok {
                ok = self.plan.neq_after[depth]
                    .iter()
                    .all(|&(x, y)| self.neq_holds(x, y));
            }
            let mut keep_going = true;
            if ok {
                self.tags.push(tag);
                keep_going = self.run(depth + 1);
                self.tags.pop();
            }
            for v in newly {
                if v != usize::MAX {
                    self.set[v] = false;
                }
            }
            if !keep_going {
                return false;
            }
        }
        true
    }

    fn run_loose(&mut self, i: usize) -> bool {
        if i == self.plan.loose.len() {
            if !self.plan.loose_neqs.iter().all(|&(x, y)| self.neq_holds(x, y)) {
                return true;
            }
            let m = Match {
                values: &self.values,
                tags: &self.tags,
            };
            return (self.f)(&m);
        }
        let v = self.plan.loose[i];
        for e in 0..self.s.len {
            if !self.allowed(v, e) {
                continue;
            }
            self.set[v] = true;
            self.values[v] = e;
            let go = self.run_loose(i + 1);
            self.set[v] = false;
            if !go {
                return false;
            }
        }
        true
    }
}

/// Calls `f` on every homomorphism from `q` into `s` until `f` returns
/// false. Constants map to themselves and disequalities must map to
/// different elements.
pub fn for_each(q: &CQ, s: &Structure, opts: Options, f: impl FnMut(&Match) -> bool) {
    let plan = compile(q, s);
    let mut search = Search {
        s,
        plan: &plan,
        opts,
        values: vec![0; plan.nvars],
        set: vec![false; plan.nvars],
        tags: Vec::new(),
        f,
    };
    if !plan.ground_neqs.iter().all(|&(x, y)| search.neq_holds(x, y)) {
        return;
    }
    search.run(0);
}

pub fn exists(q: &CQ, s: &Structure, opts: Options) -> bool {
    let mut found = false;
    for_each(q, s, opts, |_| {
        found = true;
        false
    });
    found
}

fn count_connected(q: &CQ, s: &Structure, opts: Options) -> Result<u128> {
    let mut n: u128 = 0;
    let mut overflow = false;
    for_each(q, s, opts, |_| match n.checked_add(1) {
        Some(m) => {
            n = m;
            true
        }
        None => {
            overflow = true;
            false
        }
    });
    if overflow {
        return Err(Error::Overflow("homomorphism count"));
    }
    Ok(n)
}

/// Number of homomorphisms from `q` into `s`. Components connected through
/// neither shared variables nor disequalities are counted separately and
/// multiplied.
pub fn count(q: &CQ, s: &Structure) -> Result<u128> {
    count_with(q, s, Options::default())
}

/// As [`count`], restricted to tuples allowed by `opts.tags`. The `domain`
/// restriction refers to variable numbers of the whole query, so when it is
/// set no splitting into components happens.
pub fn count_with(q: &CQ, s: &Structure, opts: Options) -> Result<u128> {
    if opts.domain.is_some() {
        return count_connected(q, s, opts);
    }
    let parts = match connected_components(q) {
        Ok(p) => p,
        // a disequality across components: count as one block
        Err(_) => return count_connected(q, s, opts),
    };
    let mut total: u128 = 1;
    for p in parts {
        let c = count_connected(&p, s, opts)?;
        if c == 0 {
            return Ok(0);
        }
        total = total
            .checked_mul(c)
            .ok_or(Error::Overflow("homomorphism count"))?;
    }
    Ok(total)
}

/// Homomorphism between two queries. `extra` lists the source's constants so
/// that the target knows them even when it does not mention them.
pub fn query_hom_exists(from: &CQ, to: &CQ) -> bool {
    let s = Structure::from_query(to, from.constants().iter());
    exists(from, &s, Options::default())
}

/// Are the two queries equal up to a renaming of variables?
pub fn isomorphic(a: &CQ, b: &CQ) -> bool {
    if a.atoms().len() != b.atoms().len() || a.constants() != b.constants() {
        return false;
    }
    let nvars = a.vars().len();
    if nvars != b.vars().len() {
        return false;
    }
    let s = Structure::from_query(b, a.constants().iter());
    // elements 0..nvars of `s` are the variables of `b`
    let to_var = |_: usize, e: u32| (e as usize) < nvars;
    let mut found = false;
    for_each(
        a,
        &s,
        Options {
            domain: Some(&to_var),
            tags: None,
        },
        |m| {
            let mut seen = vec![false; nvars];
            let injective = m.values.iter().all(|&e| !core::mem::replace(&mut seen[e as usize], true));
            if injective {
                // an injective renaming is a bijection on variables, so the
                // image has as many atoms as `a`, i.e. all of `b`
                found = true;
            }
            !found
        },
    );
    found
}

/// Sets of target tags hit by the homomorphisms from `from` into `s`.
pub fn images(q: &CQ, s: &Structure, opts: Options) -> BTreeSet<Vec<usize>> {
    let mut out = BTreeSet::new();
    for_each(q, s, opts, |m| {
        let mut img: Vec<usize> = m.tags.to_vec();
        img.sort_unstable();
        img.dedup();
        out.insert(img);
        true
    });
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Atom;

    fn v(n: &str) -> Term {
        Term::var(n)
    }

    fn r(a: Term, b: Term) -> Atom {
        Atom::role("r", a, b)
    }

    fn db(pairs: &[(&str, &str)]) -> Structure {
        let atoms: Vec<GroundAtom> = pairs
            .iter()
            .map(|(a, b)| GroundAtom::binary("r", *a, *b))
            .collect();
        Structure::from_atoms(atoms.iter())
    }

    #[test]
    fn plain_count() {
        let q = CQ::new([r(v("x"), v("y"))]).unwrap();
        assert_eq!(count(&q, &db(&[("c", "d"), ("d", "c")])).unwrap(), 2);
    }

    #[test]
    fn neq_blocks_self_loop() {
        let q = CQ::new([r(v("x"), v("y")), Atom::neq(v("x"), v("y")).unwrap()]).unwrap();
        assert_eq!(count(&q, &db(&[("e", "e")])).unwrap(), 0);
    }

    #[test]
    fn two_cycle_both_orientations() {
        let q = CQ::new([
            r(v("x"), v("y")),
            r(v("y"), v("x")),
            Atom::neq(v("x"), v("y")).unwrap(),
        ])
        .unwrap();
        assert_eq!(count(&q, &db(&[("c", "d"), ("d", "c")])).unwrap(), 2);
    }

    #[test]
    fn components_multiply() {
        let q = CQ::new([r(v("x"), v("y")), r(v("z"), v("w"))]).unwrap();
        assert_eq!(count(&q, &db(&[("a", "b"), ("b", "c"), ("c", "c")])).unwrap(), 9);
    }

    #[test]
    fn constants_are_fixed() {
        let q = CQ::new([r(Term::constant("a"), v("y"))]).unwrap();
        assert_eq!(count(&q, &db(&[("a", "b"), ("b", "c"), ("a", "a")])).unwrap(), 2);
        let q = CQ::new([r(Term::constant("zz"), v("y"))]).unwrap();
        assert_eq!(count(&q, &db(&[("a", "b")])).unwrap(), 0);
    }

    #[test]
    fn query_homs_respect_disequalities() {
        let loop_q = CQ::new([r(v("x"), v("x"))]).unwrap();
        let edge = CQ::new([r(v("x"), v("y"))]).unwrap();
        let edge_neq = CQ::new([r(v("x"), v("y")), Atom::neq(v("x"), v("y")).unwrap()]).unwrap();
        assert!(query_hom_exists(&edge, &loop_q));
        assert!(!query_hom_exists(&loop_q, &edge));
        assert!(query_hom_exists(&edge, &edge_neq));
        assert!(!query_hom_exists(&edge_neq, &loop_q));
        assert!(!query_hom_exists(&edge_neq, &edge));
    }

    #[test]
    fn isomorphism_up_to_renaming() {
        let a = CQ::new([r(v("x"), v("y")), Atom::concept("A", v("y"))]).unwrap();
        let b = CQ::new([r(v("u"), v("w")), Atom::concept("A", v("w"))]).unwrap();
        let c = CQ::new([r(v("u"), v("w")), Atom::concept("A", v("u"))]).unwrap();
        assert!(isomorphic(&a, &b));
        assert!(!isomorphic(&a, &c));
        let d = CQ::new([r(v("x"), v("y")), r(v("y"), v("x"))]).unwrap();
        let e = CQ::new([r(v("x"), v("x")), r(v("y"), v("y"))]).unwrap();
        assert!(!isomorphic(&d, &e));
    }

    #[test]
    fn tag_mask_restricts_tuples() {
        let q = CQ::new([r(v("x"), v("y"))]).unwrap();
        let s = db(&[("c", "d"), ("d", "c"), ("e", "e")]);
        let mask = [true, false, true];
        let opts = Options {
            domain: None,
            tags: Some(&mask),
        };
        assert_eq!(count_with(&q, &s, opts).unwrap(), 2);
    }
}
