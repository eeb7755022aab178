use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::vec::Vec;

use crate::error::{unsupported, Result};
use crate::model::{Axiom, BasicConcept, GroundAtom, Name, Role, TBox};

/// Forward-chaining rules for the Horn axiom shapes `A <= B`,
/// `A & B <= C`, `exists R.A <= B`, `exists R <= B` and `role: R <= S`.
/// None of them creates new elements, so the least fixpoint over the ABox
/// individuals is the whole story.
#[derive(Clone, Debug)]
pub struct HornRules {
    subclass: BTreeMap<Name, Vec<Name>>,
    conj: BTreeMap<Name, Vec<(Name, Name)>>,
    /// Keyed by filler concept.
    qexists: BTreeMap<Name, Vec<(Role, Name)>>,
    /// Keyed by role name.
    exists: BTreeMap<Name, Vec<(bool, Name)>>,
    /// Keyed by role name: (lhs inverted, rhs).
    roles: BTreeMap<Name, Vec<(bool, Role)>>,
    qexists_by_role: BTreeMap<Name, Vec<(Role, Name, Name)>>,
}

impl HornRules {
    pub fn new(tbox: &TBox) -> Result<Self> {
        let mut h = HornRules {
            subclass: BTreeMap::new(),
            conj: BTreeMap::new(),
            qexists: BTreeMap::new(),
            exists: BTreeMap::new(),
            roles: BTreeMap::new(),
            qexists_by_role: BTreeMap::new(),
        };
        for ax in tbox.axioms() {
            match ax {
                Axiom::Concept {
                    lhs: BasicConcept::Name(a),
                    rhs: BasicConcept::Name(b),
                    negated: false,
                } => h.subclass.entry(a.clone()).or_default().push(b.clone()),
                Axiom::Concept {
                    lhs: BasicConcept::Exists(r),
                    rhs: BasicConcept::Name(b),
                    negated: false,
                } => h
                    .exists
                    .entry(r.name.clone())
                    .or_default()
                    .push((r.inverse, b.clone())),
                Axiom::Role {
                    lhs,
                    rhs,
                    negated: false,
                } => h
                    .roles
                    .entry(lhs.name.clone())
                    .or_default()
                    .push((lhs.inverse, rhs.clone())),
                Axiom::Conjunction { left, right, rhs } => {
                    h.conj
                        .entry(left.clone())
                        .or_default()
                        .push((right.clone(), rhs.clone()));
                    h.conj
                        .entry(right.clone())
                        .or_default()
                        .push((left.clone(), rhs.clone()));
                }
                Axiom::QualifiedExists { role, filler, rhs } => {
                    h.qexists
                        .entry(filler.clone())
                        .or_default()
                        .push((role.clone(), rhs.clone()));
                    h.qexists_by_role.entry(role.name.clone()).or_default().push((
                        role.clone(),
                        filler.clone(),
                        rhs.clone(),
                    ));
                }
                other => {
                    return Err(unsupported(format!(
                        "axiom `{other}` in a TBox evaluated by forward chaining"
                    )))
                }
            }
        }
        Ok(h)
    }

    /// Least set of ground atoms over the given individuals closed under the
    /// rules.
    pub fn saturate<'a>(&self, atoms: impl IntoIterator<Item = &'a GroundAtom>) -> BTreeSet<GroundAtom> {
        let mut derived: BTreeSet<GroundAtom> = BTreeSet::new();
        let mut queue: Vec<GroundAtom> = Vec::new();
        for a in atoms {
            if derived.insert(a.clone()) {
                queue.push(a.clone());
            }
        }
        // concept memberships per individual and role edges, for joins
        let mut concepts: BTreeSet<(Name, Name)> = BTreeSet::new(); // (individual, concept)
        let mut out_edges: BTreeMap<(Name, Name), BTreeSet<Name>> = BTreeMap::new(); // (role, subj) -> objs
        let mut in_edges: BTreeMap<(Name, Name), BTreeSet<Name>> = BTreeMap::new(); // (role, obj) -> subjs
        let push = |a: GroundAtom, derived: &mut BTreeSet<GroundAtom>, queue: &mut Vec<GroundAtom>| {
            if derived.insert(a.clone()) {
                queue.push(a);
            }
        };
        while let Some(a) = queue.pop() {
            let args = a.args();
            if a.is_concept() {
                let (c, x) = (a.pred().clone(), args[0].clone());
                concepts.insert((x.clone(), c.clone()));
                for b in self.subclass.get(&c).into_iter().flatten() {
                    push(GroundAtom::unary(b.clone(), x.clone()), &mut derived, &mut queue);
                }
                for (other, rhs) in self.conj.get(&c).into_iter().flatten() {
                    if concepts.contains(&(x.clone(), other.clone())) {
                        push(GroundAtom::unary(rhs.clone(), x.clone()), &mut derived, &mut queue);
                    }
                }
                // exists R.C <= B with x as the filler
                for (role, rhs) in self.qexists.get(&c).into_iter().flatten() {
                    // R(y, x) holds: for plain R, y ranges over subjects of
                    // role edges into x; for R-, over objects of edges out of x
                    let ys = if role.inverse {
                        out_edges.get(&(role.name.clone(), x.clone()))
                    } else {
                        in_edges.get(&(role.name.clone(), x.clone()))
                    };
                    for y in ys.into_iter().flatten() {
                        push(GroundAtom::unary(rhs.clone(), y.clone()), &mut derived, &mut queue);
                    }
                }
            } else {
                let (r, s, o) = (a.pred().clone(), args[0].clone(), args[1].clone());
                out_edges.entry((r.clone(), s.clone())).or_default().insert(o.clone());
                in_edges.entry((r.clone(), o.clone())).or_default().insert(s.clone());
                for (inv, b) in self.exists.get(&r).into_iter().flatten() {
                    let who = if *inv { o.clone() } else { s.clone() };
                    push(GroundAtom::unary(b.clone(), who), &mut derived, &mut queue);
                }
                for (inv, sup) in self.roles.get(&r).into_iter().flatten() {
                    // lhs R(s, o) or R-(s, o) = r(o, s)
                    let (x, y) = if *inv { (o.clone(), s.clone()) } else { (s.clone(), o.clone()) };
                    let atom = if sup.inverse {
                        GroundAtom::binary(sup.name.clone(), y, x)
                    } else {
                        GroundAtom::binary(sup.name.clone(), x, y)
                    };
                    push(atom, &mut derived, &mut queue);
                }
                for (role, filler, rhs) in self.qexists_by_role.get(&r).into_iter().flatten() {
                    // R(y, z) with z the filler
                    let (y, z) = if role.inverse { (o.clone(), s.clone()) } else { (s.clone(), o.clone()) };
                    if concepts.contains(&(z, filler.clone())) {
                        push(GroundAtom::unary(rhs.clone(), y), &mut derived, &mut queue);
                    }
                }
            }
        }
        derived
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn qualified_existential_one_step() {
        let t = TBox::new([Axiom::QualifiedExists {
            role: Role::named("r"),
            filler: "A".into(),
            rhs: "A".into(),
        }])
        .unwrap();
        let h = HornRules::new(&t).unwrap();
        let abox = [GroundAtom::binary("r", "c", "d"), GroundAtom::unary("A", "d")];
        assert!(h.saturate(abox.iter()).contains(&GroundAtom::unary("A", "c")));
        // order of derivation does not matter
        let abox = [GroundAtom::unary("A", "d"), GroundAtom::binary("r", "c", "d")];
        assert!(h.saturate(abox.iter()).contains(&GroundAtom::unary("A", "c")));
    }

    #[test]
    fn conjunction_needs_both() {
        let t = TBox::new([Axiom::Conjunction {
            left: "A".into(),
            right: "B".into(),
            rhs: "C".into(),
        }])
        .unwrap();
        let h = HornRules::new(&t).unwrap();
        let one = [GroundAtom::unary("A", "c")];
        assert!(!h.saturate(one.iter()).contains(&GroundAtom::unary("C", "c")));
        let both = [GroundAtom::unary("A", "c"), GroundAtom::unary("B", "c")];
        assert!(h.saturate(both.iter()).contains(&GroundAtom::unary("C", "c")));
    }

    #[test]
    fn self_conjunction() {
        let t = TBox::new([Axiom::Conjunction {
            left: "A".into(),
            right: "A".into(),
            rhs: "C".into(),
        }])
        .unwrap();
        let h = HornRules::new(&t).unwrap();
        let one = [GroundAtom::unary("A", "c")];
        assert!(h.saturate(one.iter()).contains(&GroundAtom::unary("C", "c")));
    }

    #[test]
    fn inverse_role_inclusion() {
        let t = TBox::new([
            Axiom::role(Role::inverse_of("r"), Role::named("s")),
            Axiom::Conjunction {
                left: "A".into(),
                right: "B".into(),
                rhs: "C".into(),
            },
        ])
        .unwrap();
        let h = HornRules::new(&t).unwrap();
        let abox = [GroundAtom::binary("r", "c", "d")];
        assert!(h.saturate(abox.iter()).contains(&GroundAtom::binary("s", "d", "c")));
    }

    #[test]
    fn rejects_existential_rhs() {
        let t = TBox::new([
            Axiom::concept(BasicConcept::name("A"), BasicConcept::exists(Role::named("r"))),
        ])
        .unwrap();
        assert!(HornRules::new(&t).is_err());
    }
}
