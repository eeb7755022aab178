use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::vec::Vec;
use core::fmt;

use super::Name;
use crate::error::{invalid, Result};

/// A role name or its inverse.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Role {
    pub name: Name,
    pub inverse: bool,
}

impl Role {
    pub fn named(name: impl Into<Name>) -> Self {
        Role {
            name: name.into(),
            inverse: false,
        }
    }

    pub fn inverse_of(name: impl Into<Name>) -> Self {
        Role {
            name: name.into(),
            inverse: true,
        }
    }

    /// `inv(r) = r-`, `inv(r-) = r`.
    pub fn inv(&self) -> Role {
        Role {
            name: self.name.clone(),
            inverse: !self.inverse,
        }
    }
}

/// Canonical form of a role. Inversion is stored as a flag, so the canonical
/// form is the role itself and double inversion collapses by construction.
pub fn normalize_role(role: &Role) -> Role {
    role.clone()
}

impl fmt::Display for Role {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.inverse {
            write!(f, "{}-", self.name)
        } else {
            write!(f, "{}", self.name)
        }
    }
}

/// `A` or `exists R`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum BasicConcept {
    Name(Name),
    Exists(Role),
}

impl BasicConcept {
    pub fn name(n: impl Into<Name>) -> Self {
        BasicConcept::Name(n.into())
    }

    pub fn exists(r: Role) -> Self {
        BasicConcept::Exists(r)
    }
}

impl fmt::Display for BasicConcept {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BasicConcept::Name(n) => write!(f, "{n}"),
            BasicConcept::Exists(r) => write!(f, "exists {r}"),
        }
    }
}

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Axiom {
    /// `B <= C` or `B <= !C`.
    Concept {
        lhs: BasicConcept,
        rhs: BasicConcept,
        negated: bool,
    },
    /// `R <= S` or `R <= !S`.
    Role { lhs: Role, rhs: Role, negated: bool },
    /// Horn extension: `A & B <= C`.
    Conjunction { left: Name, right: Name, rhs: Name },
    /// Horn extension: `exists R.A <= B`.
    QualifiedExists { role: Role, filler: Name, rhs: Name },
}

impl Axiom {
    pub fn concept(lhs: BasicConcept, rhs: BasicConcept) -> Self {
        Axiom::Concept {
            lhs,
            rhs,
            negated: false,
        }
    }

    pub fn concept_neg(lhs: BasicConcept, rhs: BasicConcept) -> Self {
        Axiom::Concept {
            lhs,
            rhs,
            negated: true,
        }
    }

    pub fn role(lhs: Role, rhs: Role) -> Self {
        Axiom::Role {
            lhs,
            rhs,
            negated: false,
        }
    }

    pub fn role_neg(lhs: Role, rhs: Role) -> Self {
        Axiom::Role {
            lhs,
            rhs,
            negated: true,
        }
    }

    pub fn is_horn_shape(&self) -> bool {
        matches!(
            self,
            Axiom::Conjunction { .. } | Axiom::QualifiedExists { .. }
        )
    }

    fn collect_names(&self, concepts: &mut Vec<Name>, roles: &mut Vec<Name>) {
        let basic = |b: &BasicConcept, concepts: &mut Vec<Name>, roles: &mut Vec<Name>| match b {
            BasicConcept::Name(n) => concepts.push(n.clone()),
            BasicConcept::Exists(r) => roles.push(r.name.clone()),
        };
        match self {
            Axiom::Concept { lhs, rhs, .. } => {
                basic(lhs, concepts, roles);
                basic(rhs, concepts, roles);
            }
            Axiom::Role { lhs, rhs, .. } => {
                roles.push(lhs.name.clone());
                roles.push(rhs.name.clone());
            }
            Axiom::Conjunction { left, right, rhs } => {
                concepts.push(left.clone());
                concepts.push(right.clone());
                concepts.push(rhs.clone());
            }
            Axiom::QualifiedExists { role, filler, rhs } => {
                roles.push(role.name.clone());
                concepts.push(filler.clone());
                concepts.push(rhs.clone());
            }
        }
    }
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let bang = |neg: bool| if neg { "!" } else { "" };
        match self {
            Axiom::Concept { lhs, rhs, negated } => write!(f, "{lhs} <= {}{rhs}", bang(*negated)),
            Axiom::Role { lhs, rhs, negated } => {
                write!(f, "role: {lhs} <= {}{rhs}", bang(*negated))
            }
            Axiom::Conjunction { left, right, rhs } => write!(f, "{left} & {right} <= {rhs}"),
            Axiom::QualifiedExists { role, filler, rhs } => {
                write!(f, "exists {role}.{filler} <= {rhs}")
            }
        }
    }
}

/// Finite, duplicate-free set of axioms. Insertion order is kept for
/// rendering.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct TBox {
    axioms: Vec<Axiom>,
}

impl TBox {
    /// Builds a TBox, dropping duplicate axioms and rejecting names used both
    /// as a concept and as a role.
    pub fn new(axioms: impl IntoIterator<Item = Axiom>) -> Result<Self> {
        let mut seen = BTreeSet::new();
        let mut kept = Vec::new();
        for ax in axioms {
            if seen.insert(ax.clone()) {
                kept.push(ax);
            }
        }
        let tbox = TBox { axioms: kept };
        let (concepts, roles) = tbox.signature();
        if let Some(clash) = concepts.intersection(&roles).next() {
            return Err(invalid(format!(
                "`{clash}` is used both as a concept and as a role"
            )));
        }
        Ok(tbox)
    }

    pub fn empty() -> Self {
        TBox { axioms: Vec::new() }
    }

    pub fn axioms(&self) -> &[Axiom] {
        &self.axioms
    }

    pub fn len(&self) -> usize {
        self.axioms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.axioms.is_empty()
    }

    /// True when some axiom lies outside DL-Lite_R.
    pub fn is_horn_extended(&self) -> bool {
        self.axioms.iter().any(Axiom::is_horn_shape)
    }

    /// Concept names and role names mentioned by the axioms.
    pub fn signature(&self) -> (BTreeSet<Name>, BTreeSet<Name>) {
        let mut concepts = Vec::new();
        let mut roles = Vec::new();
        for ax in &self.axioms {
            ax.collect_names(&mut concepts, &mut roles);
        }
        (concepts.into_iter().collect(), roles.into_iter().collect())
    }

    /// Predicate arities implied by the axioms (1 for concepts, 2 for roles).
    pub fn arities(&self) -> BTreeMap<Name, usize> {
        let (concepts, roles) = self.signature();
        concepts
            .into_iter()
            .map(|c| (c, 1))
            .chain(roles.into_iter().map(|r| (r, 2)))
            .collect()
    }
}

impl fmt::Display for TBox {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for ax in &self.axioms {
            writeln!(f, "{ax}")?;
        }
        Ok(())
    }
}
