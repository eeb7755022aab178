//! UCQ rewriting of DL-Lite_R OMQs by backward application of the entailed
//! positive inclusions, interleaved with atom unification.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::error::{unsupported, Error, Result};
use crate::homomorphism::{isomorphic, query_hom_exists};
use crate::model::{Atom, BasicConcept, Name, Role, Term, CQ, OMQ, UCQ};
use crate::reasoner::SaturatedTBox;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Step {
    pub from: usize,
    pub to: usize,
    pub by: String,
}

/// Result of [`rewrite`]. The first disjuncts of `result` are the source
/// query's own disjuncts, in order.
#[derive(Clone, Debug)]
pub struct Rewriting {
    pub source: OMQ,
    pub result: UCQ,
    /// How each produced disjunct was obtained, indexed into the disjunct
    /// list before minimization.
    pub steps: Vec<Step>,
}

/// Round limit for a source with `tbox_len` axioms and `atoms` atoms.
pub fn round_limit(tbox_len: usize, atoms: usize) -> usize {
    let n = tbox_len + atoms;
    (n * n).max(1)
}

fn role_atom(r: &Role, s: Term, o: Term) -> Atom {
    if r.inverse {
        Atom::role(r.name.clone(), o, s)
    } else {
        Atom::role(r.name.clone(), s, o)
    }
}

fn basic_atom(b: &BasicConcept, x: Term, fresh: Term) -> Atom {
    match b {
        BasicConcept::Name(a) => Atom::concept(a.clone(), x),
        BasicConcept::Exists(r) => role_atom(r, x, fresh),
    }
}

fn fresh_var(q: &CQ) -> Term {
    let vars = q.vars();
    let mut i = 0usize;
    loop {
        let n: Name = format!("_u{i}").into();
        if !vars.contains(&n) {
            return Term::Var(n);
        }
        i += 1;
    }
}

struct Rewriter {
    /// (sub, super) with sub != super
    concept_incl: Vec<(BasicConcept, BasicConcept)>,
    role_incl: Vec<(Role, Role)>,
}

impl Rewriter {
    /// All queries obtained from `q` by one backward inclusion step.
    fn atom_steps(&self, q: &CQ) -> Vec<(CQ, String)> {
        // argument positions, so that r(?x, ?x) binds ?x
        let mut occ: BTreeMap<&Name, usize> = BTreeMap::new();
        for v in q.atoms().iter().flat_map(|a| a.vars()) {
            *occ.entry(v).or_insert(0) += 1;
        }
        let unbound = |t: &Term| match t {
            Term::Var(v) => occ.get(v).copied().unwrap_or(0) == 1,
            _ => false,
        };
        let mut out = Vec::new();
        for g in q.relational() {
            let args = g.args();
            let pred = g.pred().expect("relational").clone();
            // the basic concepts `g` expresses about one of its terms
            let mut views: Vec<(BasicConcept, Term)> = Vec::new();
            if args.len() == 1 {
                views.push((BasicConcept::Name(pred.clone()), args[0].clone()));
            } else {
                if unbound(&args[1]) {
                    views.push((BasicConcept::Exists(Role::named(pred.clone())), args[0].clone()));
                }
                if unbound(&args[0]) {
                    views.push((BasicConcept::Exists(Role::inverse_of(pred.clone())), args[1].clone()));
                }
            }
            let rest = q.atoms().iter().filter(|a| *a != g).cloned();
            let rest: Vec<Atom> = rest.collect();
            for (b, x) in &views {
                for (sub, sup) in &self.concept_incl {
                    if sup != b {
                        continue;
                    }
                    let fresh = fresh_var(q);
                    let new = basic_atom(sub, x.clone(), fresh);
                    if let Ok(q2) = CQ::new(rest.iter().cloned().chain([new])) {
                        out.push((q2, format!("{sub} <= {sup}")));
                    }
                }
            }
            if args.len() == 2 {
                let me = Role::named(pred.clone());
                for (sub, sup) in &self.role_incl {
                    if *sup != me {
                        continue;
                    }
                    let new = role_atom(sub, args[0].clone(), args[1].clone());
                    if let Ok(q2) = CQ::new(rest.iter().cloned().chain([new])) {
                        out.push((q2, format!("role: {sub} <= {sup}")));
                    }
                }
            }
        }
        out
    }
}

/// Most general unifier of two atoms as a variable substitution.
fn unify(a: &Atom, b: &Atom) -> Option<BTreeMap<Name, Term>> {
    if a.pred() != b.pred() || a.args().len() != b.args().len() {
        return None;
    }
    // tiny union-find over terms
    let mut classes: Vec<BTreeSet<Term>> = Vec::new();
    for (x, y) in a.args().iter().zip(b.args()) {
        let ix = classes.iter().position(|c| c.contains(x));
        let iy = classes.iter().position(|c| c.contains(y));
        match (ix, iy) {
            (Some(i), Some(j)) if i == j => {}
            (Some(i), Some(j)) => {
                let (lo, hi) = (i.min(j), i.max(j));
                let moved = classes.remove(hi);
                classes[lo].extend(moved);
            }
            (Some(i), None) => {
                classes[i].insert(y.clone());
            }
            (None, Some(j)) => {
                classes[j].insert(x.clone());
            }
            (None, None) => classes.push([x.clone(), y.clone()].into_iter().collect()),
        }
    }
    let mut map = BTreeMap::new();
    for c in classes {
        let consts: Vec<&Term> = c.iter().filter(|t| !t.is_var()).collect();
        if consts.len() > 1 {
            return None;
        }
        let rep = consts.first().copied().cloned().unwrap_or_else(|| c.iter().next().unwrap().clone());
        for t in &c {
            if let Term::Var(v) = t {
                if *t != rep {
                    map.insert(v.clone(), rep.clone());
                }
            }
        }
    }
    Some(map)
}

fn reduce_steps(q: &CQ) -> Vec<CQ> {
    let rel: Vec<&Atom> = q.relational().collect();
    let mut out = Vec::new();
    for i in 0..rel.len() {
        for j in i + 1..rel.len() {
            if let Some(s) = unify(rel[i], rel[j]) {
                if let Some(q2) = q.rename(&s) {
                    out.push(q2);
                }
            }
        }
    }
    out
}

/// Index of an isomorphic copy of `q` among `known`, bucketed by a cheap
/// invariant.
#[derive(Default)]
struct Seen {
    buckets: BTreeMap<(usize, usize, Vec<Name>), Vec<usize>>,
}

impl Seen {
    fn key(q: &CQ) -> (usize, usize, Vec<Name>) {
        let mut preds: Vec<Name> = q.relational().filter_map(|a| a.pred().cloned()).collect();
        preds.sort();
        (q.atoms().len(), q.vars().len(), preds)
    }

    fn find(&self, all: &[CQ], q: &CQ) -> Option<usize> {
        self.buckets
            .get(&Seen::key(q))?
            .iter()
            .copied()
            .find(|&i| isomorphic(&all[i], q))
    }

    fn insert(&mut self, q: &CQ, idx: usize) {
        self.buckets.entry(Seen::key(q)).or_default().push(idx);
    }
}

/// Rewrites a DL-Lite_R OMQ into a UCQ over the ABox signature.
pub fn rewrite(omq: &OMQ) -> Result<Rewriting> {
    if omq.tbox.is_horn_extended() {
        return Err(unsupported(
            "rewriting under conjunctions or qualified existentials (no finite UCQ rewriting in general)",
        ));
    }
    if !omq.tbox.is_empty() && omq.query.has_neq() {
        return Err(unsupported("rewriting a query with disequalities under a non-empty TBox"));
    }
    let sat = SaturatedTBox::new(&omq.tbox)?;
    let rw = Rewriter {
        concept_incl: sat
            .concept_inclusions()
            .filter(|(a, b)| a != b)
            .map(|(a, b)| (a.clone(), b.clone()))
            .collect(),
        role_incl: sat
            .role_inclusions()
            .filter(|(a, b)| a != b)
            .map(|(a, b)| (a.clone(), b.clone()))
            .collect(),
    };

    let mut all: Vec<CQ> = Vec::new();
    let mut seen = Seen::default();
    let mut steps = Vec::new();
    let original = omq.query.disjuncts().len();
    let mut frontier = Vec::new();
    for d in omq.query.disjuncts() {
        all.push(d.clone());
        seen.insert(d, all.len() - 1);
        frontier.push(all.len() - 1);
    }
    let atoms: usize = omq.query.disjuncts().iter().map(|d| d.atoms().len()).sum();
    let limit = round_limit(omq.tbox.len(), atoms);
    let mut rounds = 0;
    while !frontier.is_empty() {
        if rounds == limit {
            return Err(Error::RewriteDiverged(limit));
        }
        rounds += 1;
        let mut next = Vec::new();
        for &i in &frontier {
            let q = all[i].clone();
            let mut produced: Vec<(CQ, String)> = rw.atom_steps(&q);
            produced.extend(reduce_steps(&q).into_iter().map(|c| (c, String::from("unify"))));
            for (c, by) in produced {
                let to = match seen.find(&all, &c) {
                    Some(j) => j,
                    None => {
                        all.push(c.clone());
                        seen.insert(&c, all.len() - 1);
                        next.push(all.len() - 1);
                        all.len() - 1
                    }
                };
                steps.push(Step { from: i, to, by });
            }
        }
        frontier = next;
    }

    let kept = minimize(&all, original);
    Ok(Rewriting {
        source: omq.clone(),
        result: UCQ::new(kept)?,
        steps,
    })
}

/// Drops disjuncts into which another kept disjunct maps, keeping the first
/// `protected` disjuncts unconditionally. Among hom-equivalent disjuncts the
/// earliest survives.
pub fn minimize(all: &[CQ], protected: usize) -> Vec<CQ> {
    let mut removed = vec![false; all.len()];
    for i in protected..all.len() {
        for j in 0..all.len() {
            if i == j || removed[j] {
                continue;
            }
            let j_to_i = query_hom_exists(&all[j], &all[i]);
            if !j_to_i {
                continue;
            }
            let equivalent = query_hom_exists(&all[i], &all[j]);
            if !equivalent || j < i {
                removed[i] = true;
                break;
            }
        }
    }
    all.iter()
        .zip(&removed)
        .filter(|(_, r)| !**r)
        .map(|(q, _)| q.clone())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{Axiom, TBox};

    fn v(n: &str) -> Term {
        Term::var(n)
    }

    fn contains_iso(u: &UCQ, q: &CQ) -> bool {
        u.disjuncts().iter().any(|d| isomorphic(d, q))
    }

    #[test]
    fn concept_inclusion() {
        let t = TBox::new([Axiom::concept(BasicConcept::name("A"), BasicConcept::name("B"))]).unwrap();
        let q = CQ::new([Atom::concept("B", Term::constant("c"))]).unwrap();
        let r = rewrite(&OMQ::cq(t, q.clone()).unwrap()).unwrap();
        assert_eq!(r.result.disjuncts().len(), 2);
        assert_eq!(r.result.disjuncts()[0], q);
        assert!(contains_iso(&r.result, &CQ::new([Atom::concept("A", Term::constant("c"))]).unwrap()));
    }

    #[test]
    fn empty_tbox_is_identity() {
        let q = CQ::new([Atom::role("r", v("x"), v("y")), Atom::concept("A", v("y"))]).unwrap();
        let r = rewrite(&OMQ::cq(TBox::empty(), q.clone()).unwrap()).unwrap();
        assert_eq!(r.result.disjuncts(), &[q]);
    }

    #[test]
    fn inverse_existential() {
        let t = TBox::new([Axiom::concept(
            BasicConcept::exists(Role::inverse_of("r")),
            BasicConcept::name("B"),
        )])
        .unwrap();
        let q = CQ::new([Atom::concept("B", v("x"))]).unwrap();
        let r = rewrite(&OMQ::cq(t, q).unwrap()).unwrap();
        assert_eq!(r.result.disjuncts().len(), 2);
        assert!(contains_iso(&r.result, &CQ::new([Atom::role("r", v("x"), v("y"))]).unwrap()));
    }

    #[test]
    fn unification_makes_variable_unbound() {
        // r(x,y), r(z,y) unifies to r(x,y) whose y is unbound
        let t = TBox::new([Axiom::concept(BasicConcept::name("A"), BasicConcept::exists(Role::named("r")))]).unwrap();
        let q = CQ::new([Atom::role("r", v("x"), v("y")), Atom::role("r", v("z"), v("y"))]).unwrap();
        let r = rewrite(&OMQ::cq(t, q).unwrap()).unwrap();
        assert!(contains_iso(&r.result, &CQ::new([Atom::concept("A", v("x"))]).unwrap()));
    }

    #[test]
    fn self_loop_keeps_variable_bound() {
        let t = TBox::new([Axiom::concept(BasicConcept::name("A"), BasicConcept::exists(Role::named("r")))]).unwrap();
        let q = CQ::new([Atom::role("r", v("x"), v("x"))]).unwrap();
        let r = rewrite(&OMQ::cq(t, q).unwrap()).unwrap();
        assert_eq!(r.result.disjuncts().len(), 1);
    }

    #[test]
    fn disequalities_need_empty_tbox() {
        let t = TBox::new([Axiom::concept(BasicConcept::name("A"), BasicConcept::name("B"))]).unwrap();
        let q = CQ::new([Atom::role("r", v("x"), v("y")), Atom::neq(v("x"), v("y")).unwrap()]).unwrap();
        assert!(rewrite(&OMQ::cq(t, q.clone()).unwrap()).is_err());
        assert!(rewrite(&OMQ::cq(TBox::empty(), q).unwrap()).is_ok());
    }

    #[test]
    fn minimization_keeps_originals() {
        let a = CQ::new([Atom::concept("A", v("x"))]).unwrap();
        let ab = CQ::new([Atom::concept("A", v("x")), Atom::concept("B", v("x"))]).unwrap();
        let kept = minimize(&[ab.clone(), a.clone(), ab.clone()], 2);
        assert_eq!(kept, [ab, a]);
    }
}
