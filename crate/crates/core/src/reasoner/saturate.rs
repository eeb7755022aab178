use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec::Vec;

use crate::error::{unsupported, Result};
use crate::model::{Axiom, BasicConcept, Name, Role, TBox};

/// Inclusions entailed by a DL-Lite_R TBox.
///
/// Only the signature of the TBox is materialized; for any other concept or
/// role the entailed inclusions are the reflexive ones.
#[derive(Clone, Debug)]
pub struct SaturatedTBox {
    concept_sup: BTreeMap<BasicConcept, BTreeSet<BasicConcept>>,
    role_sup: BTreeMap<Role, BTreeSet<Role>>,
    concept_disj: BTreeSet<(BasicConcept, BasicConcept)>,
    role_disj: BTreeSet<(Role, Role)>,
    unsat_concepts: BTreeSet<BasicConcept>,
    unsat_roles: BTreeSet<Role>,
    roles: BTreeSet<Name>,
}

fn closure<T: Ord + Clone>(nodes: &BTreeSet<T>, edges: &BTreeMap<T, Vec<T>>) -> BTreeMap<T, BTreeSet<T>> {
    let mut out = BTreeMap::new();
    for n in nodes {
        let mut seen = BTreeSet::new();
        seen.insert(n.clone());
        let mut stack = vec![n.clone()];
        while let Some(x) = stack.pop() {
            for y in edges.get(&x).into_iter().flatten() {
                if seen.insert(y.clone()) {
                    stack.push(y.clone());
                }
            }
        }
        out.insert(n.clone(), seen);
    }
    out
}

impl SaturatedTBox {
    pub fn new(tbox: &TBox) -> Result<Self> {
        if tbox.is_horn_extended() {
            return Err(unsupported(
                "DL-Lite_R saturation of a TBox with conjunctions or qualified existentials",
            ));
        }
        let (concepts, roles) = tbox.signature();
        let mut cnodes: BTreeSet<BasicConcept> = concepts.iter().cloned().map(BasicConcept::Name).collect();
        let mut rnodes: BTreeSet<Role> = BTreeSet::new();
        for r in &roles {
            rnodes.insert(Role::named(r.clone()));
            rnodes.insert(Role::inverse_of(r.clone()));
            cnodes.insert(BasicConcept::Exists(Role::named(r.clone())));
            cnodes.insert(BasicConcept::Exists(Role::inverse_of(r.clone())));
        }

        let mut cedges: BTreeMap<BasicConcept, Vec<BasicConcept>> = BTreeMap::new();
        let mut redges: BTreeMap<Role, Vec<Role>> = BTreeMap::new();
        let mut cneg = Vec::new();
        let mut rneg = Vec::new();
        for ax in tbox.axioms() {
            match ax {
                Axiom::Concept { lhs, rhs, negated: false } => {
                    cedges.entry(lhs.clone()).or_default().push(rhs.clone())
                }
                Axiom::Concept { lhs, rhs, negated: true } => cneg.push((lhs.clone(), rhs.clone())),
                Axiom::Role { lhs, rhs, negated: false } => {
                    redges.entry(lhs.clone()).or_default().push(rhs.clone());
                    redges.entry(lhs.inv()).or_default().push(rhs.inv());
                    cedges
                        .entry(BasicConcept::Exists(lhs.clone()))
                        .or_default()
                        .push(BasicConcept::Exists(rhs.clone()));
                    cedges
                        .entry(BasicConcept::Exists(lhs.inv()))
                        .or_default()
                        .push(BasicConcept::Exists(rhs.inv()));
                }
                Axiom::Role { lhs, rhs, negated: true } => {
                    rneg.push((lhs.clone(), rhs.clone()));
                    rneg.push((lhs.inv(), rhs.inv()));
                }
                _ => unreachable!("Horn shapes rejected above"),
            }
        }
        let concept_sup = closure(&cnodes, &cedges);
        let role_sup = closure(&rnodes, &redges);

        // X <= X0, Y <= Y0, X0 <= !Y0 gives X <= !Y (and Y <= !X)
        let mut concept_disj = BTreeSet::new();
        for (x0, y0) in &cneg {
            for (x, xs) in &concept_sup {
                if !xs.contains(x0) {
                    continue;
                }
                for (y, ys) in &concept_sup {
                    if ys.contains(y0) {
                        concept_disj.insert((x.clone(), y.clone()));
                        concept_disj.insert((y.clone(), x.clone()));
                    }
                }
            }
        }
        let mut role_disj = BTreeSet::new();
        for (x0, y0) in &rneg {
            for (x, xs) in &role_sup {
                if !xs.contains(x0) {
                    continue;
                }
                for (y, ys) in &role_sup {
                    if ys.contains(y0) {
                        role_disj.insert((x.clone(), y.clone()));
                        role_disj.insert((y.clone(), x.clone()));
                    }
                }
            }
        }

        let mut unsat_concepts: BTreeSet<BasicConcept> = cnodes
            .iter()
            .filter(|b| concept_disj.contains(&((*b).clone(), (*b).clone())))
            .cloned()
            .collect();
        let mut unsat_roles: BTreeSet<Role> = rnodes
            .iter()
            .filter(|r| role_disj.contains(&((*r).clone(), (*r).clone())))
            .cloned()
            .collect();
        loop {
            let mut changed = false;
            for b in &cnodes {
                if unsat_concepts.contains(b) {
                    continue;
                }
                let via_sup = concept_sup[b].iter().any(|s| unsat_concepts.contains(s));
                let via_role = match b {
                    BasicConcept::Exists(r) => unsat_roles.contains(r),
                    _ => false,
                };
                if via_sup || via_role {
                    unsat_concepts.insert(b.clone());
                    changed = true;
                }
            }
            for r in &rnodes {
                if unsat_roles.contains(r) {
                    continue;
                }
                let via_sup = role_sup[r].iter().any(|s| unsat_roles.contains(s));
                let via_inv = unsat_roles.contains(&r.inv());
                let via_exists = unsat_concepts.contains(&BasicConcept::Exists(r.clone()))
                    || unsat_concepts.contains(&BasicConcept::Exists(r.inv()));
                if via_sup || via_inv || via_exists {
                    unsat_roles.insert(r.clone());
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
        Ok(SaturatedTBox {
            concept_sup,
            role_sup,
            concept_disj,
            role_disj,
            unsat_concepts,
            unsat_roles,
            roles,
        })
    }

    /// `T |= b <= c`.
    pub fn subsumes(&self, b: &BasicConcept, c: &BasicConcept) -> bool {
        match self.concept_sup.get(b) {
            Some(s) => s.contains(c),
            None => b == c,
        }
    }

    /// `T |= r <= s`.
    pub fn role_subsumes(&self, r: &Role, s: &Role) -> bool {
        match self.role_sup.get(r) {
            Some(sup) => sup.contains(s),
            None => r == s,
        }
    }

    /// Entailed superconcepts of `b`, including `b`.
    pub fn supers(&self, b: &BasicConcept) -> BTreeSet<BasicConcept> {
        self.concept_sup.get(b).cloned().unwrap_or_else(|| [b.clone()].into_iter().collect())
    }

    /// Entailed superroles of `r`, including `r`.
    pub fn role_supers(&self, r: &Role) -> BTreeSet<Role> {
        self.role_sup.get(r).cloned().unwrap_or_else(|| [r.clone()].into_iter().collect())
    }

    /// Entailed subconcepts of `c`, including `c`, within the TBox
    /// signature (plus `c` itself).
    pub fn subs(&self, c: &BasicConcept) -> BTreeSet<BasicConcept> {
        let mut out: BTreeSet<BasicConcept> = self
            .concept_sup
            .iter()
            .filter(|(_, s)| s.contains(c))
            .map(|(b, _)| b.clone())
            .collect();
        out.insert(c.clone());
        out
    }

    /// Entailed subroles of `s`, including `s`.
    pub fn role_subs(&self, s: &Role) -> BTreeSet<Role> {
        let mut out: BTreeSet<Role> = self
            .role_sup
            .iter()
            .filter(|(_, sup)| sup.contains(s))
            .map(|(r, _)| r.clone())
            .collect();
        out.insert(s.clone());
        out
    }

    /// `T |= b <= !c`.
    pub fn disjoint(&self, b: &BasicConcept, c: &BasicConcept) -> bool {
        self.concept_disj.contains(&(b.clone(), c.clone()))
    }

    pub fn roles_disjoint(&self, r: &Role, s: &Role) -> bool {
        self.role_disj.contains(&(r.clone(), s.clone()))
    }

    pub fn unsatisfiable(&self, b: &BasicConcept) -> bool {
        self.unsat_concepts.contains(b)
    }

    pub fn role_unsatisfiable(&self, r: &Role) -> bool {
        self.unsat_roles.contains(r)
    }

    /// Role names of the TBox.
    pub fn role_names(&self) -> &BTreeSet<Name> {
        &self.roles
    }

    /// Every entailed positive concept inclusion between distinct basic
    /// concepts of the TBox signature.
    pub fn concept_inclusions(&self) -> impl Iterator<Item = (&BasicConcept, &BasicConcept)> {
        self.concept_sup
            .iter()
            .flat_map(|(b, s)| s.iter().map(move |c| (b, c)))
    }

    pub fn role_inclusions(&self) -> impl Iterator<Item = (&Role, &Role)> {
        self.role_sup.iter().flat_map(|(r, s)| s.iter().map(move |t| (r, t)))
    }
}
