use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::vec::Vec;
use core::fmt;

use super::Name;
use crate::error::{invalid, Result};

/// A predicate applied to one or two constants.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct GroundAtom {
    pred: Name,
    args: Vec<Name>,
}

impl GroundAtom {
    pub fn unary(pred: impl Into<Name>, a: impl Into<Name>) -> Self {
        GroundAtom {
            pred: pred.into(),
            args: vec![a.into()],
        }
    }

    pub fn binary(pred: impl Into<Name>, a: impl Into<Name>, b: impl Into<Name>) -> Self {
        GroundAtom {
            pred: pred.into(),
            args: vec![a.into(), b.into()],
        }
    }

    pub fn new(pred: impl Into<Name>, args: Vec<Name>) -> Result<Self> {
        let pred = pred.into();
        if args.is_empty() || args.len() > 2 {
            return Err(invalid(format!(
                "`{pred}` applied to {} arguments; only unary and binary predicates exist",
                args.len()
            )));
        }
        Ok(GroundAtom { pred, args })
    }

    pub fn pred(&self) -> &Name {
        &self.pred
    }

    pub fn args(&self) -> &[Name] {
        &self.args
    }

    pub fn arity(&self) -> usize {
        self.args.len()
    }

    pub fn is_concept(&self) -> bool {
        self.args.len() == 1
    }
}

impl fmt::Display for GroundAtom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}(", self.pred)?;
        for (i, a) in self.args.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{a}")?;
        }
        f.write_str(")")
    }
}

/// A labeled assertion.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Fact {
    pub label: Name,
    pub atom: GroundAtom,
}

impl Fact {
    pub fn new(label: impl Into<Name>, atom: GroundAtom) -> Self {
        Fact {
            label: label.into(),
            atom,
        }
    }
}

impl fmt::Display for Fact {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.label, self.atom)
    }
}

/// Ordered collection of facts with unique labels and unique contents.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct ABox {
    facts: Vec<Fact>,
}

impl ABox {
    pub fn new(facts: Vec<Fact>) -> Result<Self> {
        let mut labels = BTreeSet::new();
        let mut contents = BTreeMap::new();
        let mut arity: BTreeMap<&Name, usize> = BTreeMap::new();
        for f in &facts {
            if !labels.insert(&f.label) {
                return Err(invalid(format!("duplicate fact label `{}`", f.label)));
            }
            if let Some(prev) = contents.insert(&f.atom, &f.label) {
                return Err(invalid(format!(
                    "facts `{prev}` and `{}` both assert {}",
                    f.label, f.atom
                )));
            }
            let a = *arity.entry(f.atom.pred()).or_insert(f.atom.arity());
            if a != f.atom.arity() {
                return Err(invalid(format!(
                    "`{}` used with arity {} and {}",
                    f.atom.pred(),
                    a,
                    f.atom.arity()
                )));
            }
        }
        Ok(ABox { facts })
    }

    /// Builds an ABox with labels `f0, f1, ...` in the given order.
    pub fn from_atoms(atoms: impl IntoIterator<Item = GroundAtom>) -> Result<Self> {
        ABox::new(
            atoms
                .into_iter()
                .enumerate()
                .map(|(i, a)| Fact::new(format!("f{i}"), a))
                .collect(),
        )
    }

    pub fn empty() -> Self {
        ABox { facts: Vec::new() }
    }

    pub fn facts(&self) -> &[Fact] {
        &self.facts
    }

    pub fn len(&self) -> usize {
        self.facts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.facts.is_empty()
    }

    pub fn atoms(&self) -> Vec<&GroundAtom> {
        self.facts.iter().map(|f| &f.atom).collect()
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.facts.iter().position(|f| f.label.as_str() == label)
    }

    /// Constants occurring in the facts, in order of first occurrence.
    pub fn individuals(&self) -> Vec<Name> {
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        for f in &self.facts {
            for a in f.atom.args() {
                if seen.insert(a.clone()) {
                    out.push(a.clone());
                }
            }
        }
        out
    }

    /// Sub-ABox keeping the facts whose index satisfies `keep`.
    pub fn filter(&self, mut keep: impl FnMut(usize) -> bool) -> ABox {
        ABox {
            facts: self
                .facts
                .iter()
                .enumerate()
                .filter(|(i, _)| keep(*i))
                .map(|(_, f)| f.clone())
                .collect(),
        }
    }

    pub fn without(&self, index: usize) -> ABox {
        self.filter(|i| i != index)
    }

    /// Predicate arities used by the facts.
    pub fn arities(&self) -> BTreeMap<Name, usize> {
        self.facts
            .iter()
            .map(|f| (f.atom.pred().clone(), f.atom.arity()))
            .collect()
    }
}

impl fmt::Display for ABox {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for fact in &self.facts {
            writeln!(f, "{fact}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn individuals_are_exactly_fact_constants() {
        let a = ABox::from_atoms([
            GroundAtom::binary("r", "c", "d"),
            GroundAtom::unary("A", "e"),
            GroundAtom::unary("A", "c"),
        ])
        .unwrap();
        let ind = a.individuals();
        let ind: Vec<&str> = ind.iter().map(|n| n.as_str()).collect();
        assert_eq!(ind, ["c", "d", "e"]);
    }

    #[test]
    fn rejects_duplicate_labels_and_contents() {
        let dup_label = ABox::new(vec![
            Fact::new("f1", GroundAtom::unary("A", "c")),
            Fact::new("f1", GroundAtom::unary("B", "c")),
        ]);
        assert!(dup_label.is_err());
        let dup_content = ABox::new(vec![
            Fact::new("f1", GroundAtom::unary("A", "c")),
            Fact::new("f2", GroundAtom::unary("A", "c")),
        ]);
        assert!(dup_content.is_err());
    }

    #[test]
    fn rejects_arity_clash() {
        let r = ABox::from_atoms([
            GroundAtom::unary("A", "c"),
            GroundAtom::binary("A", "c", "d"),
        ]);
        assert!(r.is_err());
        assert!(GroundAtom::new("A", vec![]).is_err());
    }
}
