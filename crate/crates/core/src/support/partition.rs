use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::homomorphism::{self, isomorphic, Options, Structure};
use crate::model::{Atom, Name, Rational, SupportHistogram, Term, CQ, UCQ};

/// A CQ± with disequalities between every two of its variables and between
/// every variable and every constant of the source UCQ, weighted by one
/// over its number of automorphisms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CountingQuery {
    pub cq: CQ,
    pub automorphisms: u128,
    pub gamma: Rational,
    pub size: usize,
}

/// Every way of merging variables of `q` with each other or with one of the
/// `consts`, each block holding at most one constant. Merges that collapse
/// a disequality are dropped.
fn collapses(q: &CQ, consts: &BTreeSet<Name>) -> Vec<CQ> {
    let vars: Vec<Name> = q.vars().into_iter().collect();
    let consts: Vec<Name> = consts.iter().cloned().collect();
    let mut out = Vec::new();
    // assignment: var i -> Term (representative variable or constant)
    let mut assign: Vec<Term> = Vec::with_capacity(vars.len());
    fn go(
        i: usize,
        vars: &[Name],
        consts: &[Name],
        assign: &mut Vec<Term>,
        q: &CQ,
        out: &mut Vec<CQ>,
    ) {
        if i == vars.len() {
            let map: BTreeMap<Name, Term> = vars.iter().cloned().zip(assign.iter().cloned()).collect();
            if let Some(r) = q.rename(&map) {
                out.push(r);
            }
            return;
        }
        let mut options: Vec<Term> = Vec::new();
        // join the block of an earlier representative variable
        for t in assign.iter() {
            if let Term::Var(_) = t {
                if !options.contains(t) {
                    options.push(t.clone());
                }
            }
        }
        options.push(Term::Var(vars[i].clone()));
        for c in consts {
            let t = Term::Const(c.clone());
            if !options.contains(&t) {
                options.push(t);
            }
        }
        for t in options {
            assign.push(t);
            go(i + 1, vars, consts, assign, q, out);
            assign.pop();
        }
    }
    go(0, &vars, &consts, &mut assign, q, &mut out);
    out
}

/// `q` plus disequalities between all pairs of its variables and between
/// each variable and each of `consts`.
pub fn with_all_pairs_neq(q: &CQ, consts: &BTreeSet<Name>) -> CQ {
    let vars: Vec<Name> = q.vars().into_iter().collect();
    let mut extra = Vec::new();
    for (i, x) in vars.iter().enumerate() {
        for y in &vars[i + 1..] {
            extra.push(Atom::neq(Term::Var(x.clone()), Term::Var(y.clone())).expect("distinct"));
        }
        for c in consts {
            extra.push(Atom::neq(Term::Var(x.clone()), Term::Const(c.clone())).expect("distinct"));
        }
    }
    q.with_atoms(extra).expect("adding disequalities keeps a query valid")
}

fn ucq_constants(ucq: &UCQ) -> BTreeSet<Name> {
    ucq.disjuncts().iter().flat_map(|d| d.constants()).collect()
}

/// Does some disjunct map into `target` with an image of fewer than `k`
/// relational atoms?
fn has_smaller_image(ucq: &UCQ, target: &CQ, k: usize) -> bool {
    let consts = ucq_constants(ucq);
    let s = Structure::from_query(target, consts.iter());
    ucq.disjuncts().iter().any(|d| {
        let mut smaller = false;
        homomorphism::for_each(d, &s, Options::default(), |m| {
            let img: BTreeSet<usize> = m.tags.iter().copied().collect();
            smaller = img.len() < k;
            !smaller
        });
        smaller
    })
}

/// Reducts of the disjuncts with exactly `k` relational atoms whose
/// supports are minimal: no disjunct maps into the reduct (with all
/// disequalities added) using fewer than `k` of its atoms. Isomorphic
/// reducts are listed once.
pub fn reducts(ucq: &UCQ, k: usize) -> Vec<CQ> {
    let consts = ucq_constants(ucq);
    let mut out: Vec<CQ> = Vec::new();
    for d in ucq.disjuncts() {
        if d.rel_count() < k {
            continue;
        }
        for r in collapses(d, &consts) {
            if r.rel_count() != k || out.iter().any(|o| isomorphic(o, &r)) {
                continue;
            }
            if !has_smaller_image(ucq, &with_all_pairs_neq(&r, &consts), k) {
                out.push(r);
            }
        }
    }
    out
}

/// Homomorphisms of `q` onto itself respecting constants and disequalities.
pub fn count_automorphisms(q: &CQ) -> Result<u128> {
    let s = Structure::from_query(q, core::iter::empty());
    homomorphism::count(q, &s)
}

/// The counting queries for support size `k`.
pub fn build_counting_queries(ucq: &UCQ, k: usize) -> Result<Vec<CountingQuery>> {
    let consts = ucq_constants(ucq);
    let mut qs: Vec<CQ> = reducts(ucq, k)
        .iter()
        .map(|r| with_all_pairs_neq(r, &consts))
        .collect();
    // drop any query another remaining one maps into; among hom-equivalent
    // queries the larger canonical form goes
    loop {
        let mut victim = None;
        'scan: for i in 0..qs.len() {
            for j in 0..qs.len() {
                if i != j && homomorphism::query_hom_exists(&qs[j], &qs[i]) {
                    let back = homomorphism::query_hom_exists(&qs[i], &qs[j]);
                    if !back || qs[i] > qs[j] {
                        victim = Some(i);
                        break 'scan;
                    }
                }
            }
        }
        match victim {
            Some(i) => {
                qs.remove(i);
            }
            None => break,
        }
    }
    qs.into_iter()
        .map(|cq| {
            let automorphisms = count_automorphisms(&cq)?;
            if automorphisms == 0 {
                return Err(Error::Invariant(format!("counting query `{cq}` has no identity")));
            }
            Ok(CountingQuery {
                gamma: Rational::new(1, 1) / Rational::from_u128(automorphisms),
                automorphisms,
                size: k,
                cq,
            })
        })
        .collect()
}

/// Counting queries for every support size a UCQ can have.
#[derive(Clone, Debug)]
pub struct PartitionPlan {
    pub by_size: BTreeMap<usize, Vec<CountingQuery>>,
}

impl PartitionPlan {
    pub fn new(ucq: &UCQ) -> Result<Self> {
        let mut by_size = BTreeMap::new();
        for k in 1..=ucq.max_rel_count() {
            let qs = build_counting_queries(ucq, k)?;
            if !qs.is_empty() {
                by_size.insert(k, qs);
            }
        }
        Ok(PartitionPlan { by_size })
    }

    pub fn queries(&self) -> impl Iterator<Item = &CountingQuery> {
        self.by_size.values().flatten()
    }

    /// Number of minimal supports of size `k` among the active tuples.
    pub fn count(&self, k: usize, db: &Structure, active: Option<&[bool]>) -> Result<u128> {
        let opts = Options {
            domain: None,
            tags: active,
        };
        let mut sum = Rational::zero();
        for q in self.by_size.get(&k).into_iter().flatten() {
            let n = homomorphism::count_with(&q.cq, db, opts)?;
            sum += Rational::from_u128(n) * q.gamma.clone();
        }
        sum.to_u128().ok_or_else(|| {
            Error::Invariant(format!("support count for size {k} is {sum}, not a natural number"))
        })
    }

    pub fn histogram(&self, db: &Structure, active: Option<&[bool]>) -> Result<SupportHistogram> {
        let mut h = SupportHistogram::new();
        for &k in self.by_size.keys() {
            h.add(k, self.count(k, db, active)?);
        }
        Ok(h)
    }
}

/// `countFMS(k)` of a UCQ± over a database by the counting-query sum.
pub fn count_fms(ucq: &UCQ, k: usize, db: &Structure) -> Result<u128> {
    let plan = PartitionPlan {
        by_size: [(k, build_counting_queries(ucq, k)?)].into_iter().collect(),
    };
    plan.count(k, db, None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::GroundAtom;

    fn v(n: &str) -> Term {
        Term::var(n)
    }

    fn r(a: Term, b: Term) -> Atom {
        Atom::role("r", a, b)
    }

    fn ucq(atoms: Vec<Atom>) -> UCQ {
        UCQ::single(CQ::new(atoms).unwrap())
    }

    fn db(pairs: &[(&str, &str)]) -> Structure {
        let atoms: Vec<GroundAtom> = pairs.iter().map(|(a, b)| GroundAtom::binary("r", *a, *b)).collect();
        Structure::from_atoms(atoms.iter())
    }

    #[test]
    fn reducts_of_an_edge() {
        let q = ucq(vec![r(v("x"), v("y"))]);
        let rs = reducts(&q, 1);
        assert_eq!(rs.len(), 2);
        assert!(rs.iter().any(|c| isomorphic(c, &CQ::new([r(v("x"), v("x"))]).unwrap())));
    }

    #[test]
    fn reducts_of_a_two_cycle() {
        let q = ucq(vec![r(v("x"), v("y")), r(v("y"), v("x"))]);
        let one = reducts(&q, 1);
        assert_eq!(one.len(), 1);
        assert!(isomorphic(&one[0], &CQ::new([r(v("x"), v("x"))]).unwrap()));
        let two = reducts(&q, 2);
        assert_eq!(two.len(), 1);
        let cq = build_counting_queries(&q, 2).unwrap();
        assert_eq!(cq.len(), 1);
        assert_eq!(cq[0].gamma, Rational::new(1, 2));
    }

    #[test]
    fn counting_queries_of_an_edge() {
        let q = ucq(vec![r(v("x"), v("y"))]);
        let cqs = build_counting_queries(&q, 1).unwrap();
        assert_eq!(cqs.len(), 2);
        assert!(cqs.iter().all(|c| c.gamma == Rational::one()));
        let ground = ucq(vec![Atom::concept("A", Term::constant("c"))]);
        let g = build_counting_queries(&ground, 1).unwrap();
        assert_eq!(g.len(), 1);
        assert_eq!(g[0].gamma, Rational::one());
    }

    #[test]
    fn automorphisms() {
        let two_cycle = CQ::new([
            r(v("x"), v("y")),
            r(v("y"), v("x")),
            Atom::neq(v("x"), v("y")).unwrap(),
        ])
        .unwrap();
        assert_eq!(count_automorphisms(&two_cycle).unwrap(), 2);
        let edge = CQ::new([r(v("x"), v("y")), Atom::neq(v("x"), v("y")).unwrap()]).unwrap();
        assert_eq!(count_automorphisms(&edge).unwrap(), 1);
        let tri = with_all_pairs_neq(
            &CQ::new([r(v("x"), v("y")), r(v("y"), v("z")), r(v("z"), v("x"))]).unwrap(),
            &BTreeSet::new(),
        );
        assert_eq!(count_automorphisms(&tri).unwrap(), 3);
    }

    #[test]
    fn partition_counts() {
        let q = ucq(vec![r(v("x"), v("y"))]);
        assert_eq!(count_fms(&q, 1, &db(&[("c", "d"), ("d", "c"), ("e", "e")])).unwrap(), 3);
        let q = ucq(vec![r(v("x"), v("y")), r(v("y"), v("x"))]);
        assert_eq!(count_fms(&q, 2, &db(&[("c", "d"), ("d", "c")])).unwrap(), 1);
        assert_eq!(count_fms(&q, 3, &db(&[("c", "d"), ("d", "c")])).unwrap(), 0);
    }

    #[test]
    fn constants_collapse() {
        // r(c, x) over {r(c, c)}: only the collapsed reduct r(c, c) counts
        let q = ucq(vec![r(Term::constant("c"), v("x"))]);
        assert_eq!(count_fms(&q, 1, &db(&[("c", "c"), ("c", "d"), ("d", "d")])).unwrap(), 2);
    }
}
