use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec::Vec;

use super::saturate::SaturatedTBox;
use crate::error::{Error, Result};
use crate::homomorphism::Structure;
use crate::model::{BasicConcept, GroundAtom, Name, Role};

/// Largest number of elements a slice may have.
pub const SLICE_LIMIT: usize = 200_000;

/// What the TBox makes of a set of assertions on the named individuals:
/// entailed basic concepts per individual and entailed roles per ordered
/// pair.
#[derive(Clone, Debug, Default)]
pub struct NamedPart {
    pub individuals: Vec<Name>,
    pub asserted: BTreeMap<Name, BTreeSet<BasicConcept>>,
    pub types: BTreeMap<Name, BTreeSet<BasicConcept>>,
    pub asserted_roles: BTreeMap<(Name, Name), BTreeSet<Role>>,
    pub roles: BTreeMap<(Name, Name), BTreeSet<Role>>,
}

impl NamedPart {
    pub fn new<'a>(sat: &SaturatedTBox, atoms: impl IntoIterator<Item = &'a GroundAtom>) -> Self {
        let mut p = NamedPart::default();
        let mut seen = BTreeSet::new();
        for a in atoms {
            for c in a.args() {
                if seen.insert(c.clone()) {
                    p.individuals.push(c.clone());
                }
            }
            let args = a.args();
            if a.is_concept() {
                p.asserted
                    .entry(args[0].clone())
                    .or_default()
                    .insert(BasicConcept::Name(a.pred().clone()));
            } else {
                let r = Role::named(a.pred().clone());
                p.asserted
                    .entry(args[0].clone())
                    .or_default()
                    .insert(BasicConcept::Exists(r.clone()));
                p.asserted
                    .entry(args[1].clone())
                    .or_default()
                    .insert(BasicConcept::Exists(r.inv()));
                p.asserted_roles
                    .entry((args[0].clone(), args[1].clone()))
                    .or_default()
                    .insert(r.clone());
                p.asserted_roles
                    .entry((args[1].clone(), args[0].clone()))
                    .or_default()
                    .insert(r.inv());
            }
        }
        for (c, bs) in &p.asserted {
            let t: BTreeSet<BasicConcept> = bs.iter().flat_map(|b| sat.supers(b)).collect();
            p.types.insert(c.clone(), t);
        }
        for (pair, rs) in &p.asserted_roles {
            let t: BTreeSet<Role> = rs.iter().flat_map(|r| sat.role_supers(r)).collect();
            p.roles.insert(pair.clone(), t);
        }
        p
    }

    pub fn has_type(&self, c: &Name, b: &BasicConcept) -> bool {
        self.types.get(c).is_some_and(|t| t.contains(b))
    }

    pub fn has_role(&self, a: &Name, b: &Name, r: &Role) -> bool {
        self.roles
            .get(&(a.clone(), b.clone()))
            .is_some_and(|t| t.contains(r))
    }

    /// Does some individual `b` satisfy `R(a, b)`?
    pub fn has_named_successor(&self, a: &Name, r: &Role) -> bool {
        self.roles
            .range((a.clone(), Name::new(""))..)
            .take_while(|((x, _), _)| x == a)
            .any(|(_, t)| t.contains(r))
    }

    pub fn is_consistent(&self, sat: &SaturatedTBox) -> bool {
        for bs in self.asserted.values() {
            if bs.iter().any(|b| sat.unsatisfiable(b)) {
                return false;
            }
        }
        for t in self.types.values() {
            for x in t {
                if t.iter().any(|y| sat.disjoint(x, y)) {
                    return false;
                }
            }
        }
        for t in self.roles.values() {
            for x in t {
                if sat.role_unsatisfiable(x) || t.iter().any(|y| sat.roles_disjoint(x, y)) {
                    return false;
                }
            }
        }
        true
    }
}

/// The canonical model truncated to words of at most `depth` roles, as a
/// structure for homomorphism search.
#[derive(Clone, Debug)]
pub struct CanonicalSlice {
    pub structure: Structure,
    /// Root individual and role word of each element.
    pub words: Vec<(Name, Vec<Role>)>,
    pub depth: usize,
}

impl CanonicalSlice {
    pub fn build(sat: &SaturatedTBox, named: &NamedPart, depth: usize) -> Result<Self> {
        let mut s = Structure::new();
        let mut words = Vec::new();
        for c in &named.individuals {
            let e = s.constant(c);
            debug_assert_eq!(e as usize, words.len());
            words.push((c.clone(), Vec::new()));
        }
        for (c, t) in &named.types {
            let e = s.constant(c);
            for b in t {
                if let BasicConcept::Name(a) = b {
                    s.add_tuple(a, &[e], 0);
                }
            }
        }
        for ((a, b), t) in &named.roles {
            let (ea, eb) = (s.constant(a), s.constant(b));
            for r in t {
                if !r.inverse {
                    s.add_tuple(&r.name, &[ea, eb], 0);
                }
            }
        }

        let all_roles: Vec<Role> = sat
            .role_names()
            .iter()
            .flat_map(|n| [Role::named(n.clone()), Role::inverse_of(n.clone())])
            .collect();
        // (element, last role, word length)
        let mut frontier: Vec<(u32, Role, usize)> = Vec::new();
        if depth >= 1 {
            for c in &named.individuals {
                for r in &all_roles {
                    if named.has_type(c, &BasicConcept::Exists(r.clone()))
                        && !named.has_named_successor(c, r)
                    {
                        let parent = s.constant_id(c).expect("individual");
                        let e = add_child(&mut s, &mut words, sat, parent, r)?;
                        frontier.push((e, r.clone(), 1));
                    }
                }
            }
        }
        while let Some((w, last, len)) = frontier.pop() {
            if len >= depth {
                continue;
            }
            let from = BasicConcept::Exists(last.inv());
            for r in &all_roles {
                if *r != last.inv() && sat.subsumes(&from, &BasicConcept::Exists(r.clone())) {
                    let e = add_child(&mut s, &mut words, sat, w, r)?;
                    frontier.push((e, r.clone(), len + 1));
                }
            }
        }
        Ok(CanonicalSlice {
            structure: s,
            words,
            depth,
        })
    }

    pub fn is_anonymous(&self, e: u32) -> bool {
        !self.words[e as usize].1.is_empty()
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }
}

fn add_child(
    s: &mut Structure,
    words: &mut Vec<(Name, Vec<Role>)>,
    sat: &SaturatedTBox,
    parent: u32,
    r: &Role,
) -> Result<u32> {
    if words.len() >= SLICE_LIMIT {
        return Err(Error::TooLarge {
            what: "canonical model slice",
            actual: words.len() + 1,
            limit: SLICE_LIMIT,
        });
    }
    let e = s.add_element();
    let (root, mut path) = words[parent as usize].clone();
    path.push(r.clone());
    words.push((root, path));
    for b in sat.supers(&BasicConcept::Exists(r.inv())) {
        if let BasicConcept::Name(a) = b {
            s.add_tuple(&a, &[e], 0);
        }
    }
    for sr in sat.role_supers(r) {
        if sr.inverse {
            s.add_tuple(&sr.name, &[e, parent], 0);
        } else {
            s.add_tuple(&sr.name, &[parent, e], 0);
        }
    }
    Ok(e)
}
