//! Entailment under a TBox.
//!
//! DL-Lite_R TBoxes are saturated into their entailed inclusions; CQs are
//! then matched against a slice of the canonical model. TBoxes using the Horn
//! extension are evaluated by forward chaining over the named individuals.

mod canonical;
mod horn;
mod saturate;

use alloc::format;
use alloc::vec::Vec;

pub use canonical::{CanonicalSlice, NamedPart, SLICE_LIMIT};
pub use horn::HornRules;
pub use saturate::SaturatedTBox;

use crate::error::{invalid, unsupported, Error, Result};
use crate::homomorphism::{self, Options, Structure};
use crate::model::{Assignment, BasicConcept, GroundAtom, Name, Role, TBox, Term, CQ, UCQ};

/// Slice depth used to decide a CQ with `nvars` variables.
pub fn slice_depth(nvars: usize) -> usize {
    nvars + 1
}

#[derive(Clone, Debug)]
pub enum Reasoner {
    DlLite(SaturatedTBox),
    Horn(HornRules),
}

impl Reasoner {
    pub fn new(tbox: &TBox) -> Result<Self> {
        if tbox.is_horn_extended() {
            Ok(Reasoner::Horn(HornRules::new(tbox)?))
        } else {
            Ok(Reasoner::DlLite(SaturatedTBox::new(tbox)?))
        }
    }

    pub fn saturated(&self) -> Option<&SaturatedTBox> {
        match self {
            Reasoner::DlLite(s) => Some(s),
            Reasoner::Horn(_) => None,
        }
    }

    /// Horn TBoxes accepted here have no negative inclusions, so every ABox
    /// is consistent with them.
    pub fn is_consistent(&self, atoms: &[&GroundAtom]) -> bool {
        match self {
            Reasoner::DlLite(sat) => NamedPart::new(sat, atoms.iter().copied()).is_consistent(sat),
            Reasoner::Horn(_) => true,
        }
    }

    /// Does the KB entail the Boolean CQ? The caller guarantees consistency.
    pub fn entails_cq(&self, atoms: &[&GroundAtom], q: &CQ) -> Result<bool> {
        match self {
            Reasoner::DlLite(sat) => {
                let named = NamedPart::new(sat, atoms.iter().copied());
                let slice = CanonicalSlice::build(sat, &named, slice_depth(q.vars().len()))?;
                Ok(homomorphism::exists(q, &slice.structure, Options::default()))
            }
            Reasoner::Horn(h) => {
                let closed = h.saturate(atoms.iter().copied());
                let s = Structure::from_atoms(closed.iter());
                Ok(homomorphism::exists(q, &s, Options::default()))
            }
        }
    }

    pub fn entails_ucq(&self, atoms: &[&GroundAtom], q: &UCQ) -> Result<bool> {
        match self {
            Reasoner::DlLite(sat) => {
                let named = NamedPart::new(sat, atoms.iter().copied());
                let depth = q
                    .disjuncts()
                    .iter()
                    .map(|d| slice_depth(d.vars().len()))
                    .max()
                    .unwrap_or(1);
                let slice = CanonicalSlice::build(sat, &named, depth)?;
                Ok(q
                    .disjuncts()
                    .iter()
                    .any(|d| homomorphism::exists(d, &slice.structure, Options::default())))
            }
            Reasoner::Horn(h) => {
                let closed = h.saturate(atoms.iter().copied());
                let s = Structure::from_atoms(closed.iter());
                Ok(q
                    .disjuncts()
                    .iter()
                    .any(|d| homomorphism::exists(d, &s, Options::default())))
            }
        }
    }

    /// Entailment of a concept or role assertion.
    pub fn entails_atom(&self, atoms: &[&GroundAtom], atom: &GroundAtom) -> bool {
        match self {
            Reasoner::DlLite(sat) => {
                let named = NamedPart::new(sat, atoms.iter().copied());
                let args = atom.args();
                if atom.is_concept() {
                    named.has_type(&args[0], &BasicConcept::Name(atom.pred().clone()))
                } else {
                    named.has_role(&args[0], &args[1], &Role::named(atom.pred().clone()))
                }
            }
            Reasoner::Horn(h) => h.saturate(atoms.iter().copied()).contains(atom),
        }
    }

    /// Entailment of `exists R(c)`.
    pub fn entails_exists(&self, atoms: &[&GroundAtom], role: &Role, c: &Name) -> Result<bool> {
        match self {
            Reasoner::DlLite(sat) => {
                let named = NamedPart::new(sat, atoms.iter().copied());
                Ok(named.has_type(c, &BasicConcept::Exists(role.clone())))
            }
            Reasoner::Horn(h) => Ok(h.saturate(atoms.iter().copied()).iter().any(|a| {
                a.pred() == &role.name
                    && a.arity() == 2
                    && a.args()[usize::from(role.inverse)] == *c
            })),
        }
    }

    /// `(A, T) |=_mu q`: a match of `q` in the canonical model sending each
    /// variable with `mu(x) = c` to `c` and each variable with
    /// `mu(x) = <anon>` to an anonymous element.
    pub fn holds_under(&self, atoms: &[&GroundAtom], q: &CQ, mu: &Assignment) -> Result<bool> {
        let sat = match self {
            Reasoner::DlLite(s) => s,
            Reasoner::Horn(_) => {
                return Err(unsupported("assignment semantics over a Horn-extended TBox"))
            }
        };
        let named = NamedPart::new(sat, atoms.iter().copied());
        let slice = CanonicalSlice::build(sat, &named, slice_depth(q.vars().len()))?;
        holds_in_slice(&slice, q, mu)
    }
}

/// [`Reasoner::holds_under`] against a prebuilt slice, which must be deep
/// enough for `q`.
pub fn holds_in_slice(slice: &CanonicalSlice, q: &CQ, mu: &Assignment) -> Result<bool> {
    let vars: Vec<Name> = q.vars().into_iter().collect();
    let mut want: Vec<Option<u32>> = Vec::with_capacity(vars.len());
    for v in &vars {
        match mu.get(v) {
            None => return Err(invalid(format!("assignment misses variable ?{v}"))),
            Some(Term::Anon) => want.push(None),
            Some(Term::Const(c)) => match slice.structure.constant_id(c) {
                Some(e) => want.push(Some(e)),
                None => return Ok(false),
            },
            Some(Term::Var(_)) => return Err(invalid(format!("assignment maps ?{v} to a variable"))),
        }
    }
    let domain = |i: usize, e: u32| match want[i] {
        Some(w) => w == e,
        None => slice.is_anonymous(e),
    };
    Ok(homomorphism::exists(
        q,
        &slice.structure,
        Options {
            domain: Some(&domain),
            tags: None,
        },
    ))
}

/// Checks consistency and reports an error when it fails.
pub fn require_consistent(r: &Reasoner, atoms: &[&GroundAtom]) -> Result<()> {
    if r.is_consistent(atoms) {
        Ok(())
    } else {
        Err(Error::Inconsistent)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{Atom, Axiom, BasicConcept as B};
    use alloc::string::{String, ToString};

    fn ex3() -> TBox {
        TBox::new([
            Axiom::concept(B::name("A"), B::exists(Role::named("r"))),
            Axiom::concept(B::exists(Role::inverse_of("r")), B::name("B")),
        ])
        .unwrap()
    }

    fn v(n: &str) -> Term {
        Term::var(n)
    }

    #[test]
    fn example_three() {
        let r = Reasoner::new(&ex3()).unwrap();
        let abox = [GroundAtom::unary("A", "c")];
        let atoms: Vec<&GroundAtom> = abox.iter().collect();
        let bx = CQ::new([Atom::concept("B", v("x"))]).unwrap();
        let bc = CQ::new([Atom::concept("B", Term::constant("c"))]).unwrap();
        assert!(r.entails_cq(&atoms, &bx).unwrap());
        assert!(!r.entails_cq(&atoms, &bc).unwrap());
        let anon: Assignment = [(Name::new("x"), Term::Anon)].into_iter().collect();
        let at_c: Assignment = [(Name::new("x"), Term::constant("c"))].into_iter().collect();
        assert!(r.holds_under(&atoms, &bx, &anon).unwrap());
        assert!(!r.holds_under(&atoms, &bx, &at_c).unwrap());
        assert!(!r.entails_cq(&[], &bc).unwrap());
    }

    #[test]
    fn consistency() {
        let t = TBox::new([Axiom::concept_neg(B::name("A"), B::name("B"))]).unwrap();
        let r = Reasoner::new(&t).unwrap();
        let ok = [GroundAtom::unary("A", "c")];
        let bad = [GroundAtom::unary("A", "c"), GroundAtom::unary("B", "c")];
        assert!(r.is_consistent(&ok.iter().collect::<Vec<_>>()));
        assert!(!r.is_consistent(&bad.iter().collect::<Vec<_>>()));
        let t = TBox::new([Axiom::concept_neg(
            B::exists(Role::named("r")),
            B::exists(Role::named("r")),
        )])
        .unwrap();
        let r = Reasoner::new(&t).unwrap();
        let edge = [GroundAtom::binary("r", "c", "d")];
        assert!(!r.is_consistent(&edge.iter().collect::<Vec<_>>()));
    }

    #[test]
    fn ground_atoms() {
        let t = TBox::new([Axiom::role(Role::named("hasGrnsh"), Role::named("hasIng"))]).unwrap();
        let r = Reasoner::new(&t).unwrap();
        let abox = [GroundAtom::binary("hasGrnsh", "x", "y")];
        let atoms: Vec<&GroundAtom> = abox.iter().collect();
        assert!(r.entails_atom(&atoms, &GroundAtom::binary("hasIng", "x", "y")));
        assert!(!r.entails_atom(&atoms, &GroundAtom::binary("hasIng", "y", "x")));

        let t = TBox::new([Axiom::concept(B::exists(Role::inverse_of("r")), B::name("B"))]).unwrap();
        let r = Reasoner::new(&t).unwrap();
        let abox = [GroundAtom::binary("r", "c", "d")];
        let atoms: Vec<&GroundAtom> = abox.iter().collect();
        assert!(r.entails_atom(&atoms, &GroundAtom::unary("B", "d")));

        let t = TBox::new([Axiom::concept(B::name("A"), B::exists(Role::named("r")))]).unwrap();
        let r = Reasoner::new(&t).unwrap();
        let abox = [GroundAtom::unary("A", "c")];
        let atoms: Vec<&GroundAtom> = abox.iter().collect();
        assert!(r.entails_exists(&atoms, &Role::named("r"), &Name::new("c")).unwrap());
        assert!(!r.entails_atom(&atoms, &GroundAtom::binary("r", "c", "c")));
    }

    #[test]
    fn slices() {
        let t = ex3();
        let sat = SaturatedTBox::new(&t).unwrap();
        let abox = [GroundAtom::unary("A", "c")];
        let named = NamedPart::new(&sat, abox.iter());
        let s = CanonicalSlice::build(&sat, &named, 1).unwrap();
        assert_eq!(s.len(), 2);
        assert!(s.is_anonymous(1));

        // guard: a named r-successor blocks the anonymous one
        let abox = [GroundAtom::unary("A", "c"), GroundAtom::binary("r", "c", "d")];
        let t2 = TBox::new([Axiom::concept(B::name("A"), B::exists(Role::named("r")))]).unwrap();
        let sat2 = SaturatedTBox::new(&t2).unwrap();
        let named = NamedPart::new(&sat2, abox.iter());
        let s = CanonicalSlice::build(&sat2, &named, 1).unwrap();
        assert_eq!(s.len(), 2);
        assert!(!s.is_anonymous(1));

        // chain c, c.r, c.r.s, c.r.s.r
        let t3 = TBox::new([
            Axiom::concept(B::name("A"), B::exists(Role::named("r"))),
            Axiom::concept(B::exists(Role::inverse_of("r")), B::exists(Role::named("s"))),
            Axiom::concept(B::exists(Role::inverse_of("s")), B::exists(Role::named("r"))),
        ])
        .unwrap();
        let sat3 = SaturatedTBox::new(&t3).unwrap();
        let abox = [GroundAtom::unary("A", "c")];
        let named = NamedPart::new(&sat3, abox.iter());
        let s = CanonicalSlice::build(&sat3, &named, 3).unwrap();
        let words: Vec<String> = s
            .words
            .iter()
            .map(|(root, path)| {
                let mut w = root.to_string();
                for r in path {
                    w.push('.');
                    w.push_str(&r.to_string());
                }
                w
            })
            .collect();
        assert_eq!(words, ["c", "c.r", "c.r.s", "c.r.s.r"]);
    }

    #[test]
    fn horn_fig1_entailment() {
        let t = TBox::new([
            Axiom::QualifiedExists {
                role: Role::named("hasIng"),
                filler: "FishBased".into(),
                rhs: "FishBased".into(),
            },
            Axiom::role(Role::named("hasGrnsh"), Role::named("hasIng")),
            Axiom::concept(B::name("Seafood"), B::name("FishBased")),
            Axiom::concept(B::name("Fish"), B::name("FishBased")),
        ])
        .unwrap();
        let r = Reasoner::new(&t).unwrap();
        let abox = [
            GroundAtom::binary("hasIng", "cancalaiseSole", "normandeSauce"),
            GroundAtom::binary("hasGrnsh", "normandeSauce", "shrimps"),
            GroundAtom::unary("Seafood", "shrimps"),
        ];
        let atoms: Vec<&GroundAtom> = abox.iter().collect();
        let q = CQ::new([Atom::concept("FishBased", Term::constant("cancalaiseSole"))]).unwrap();
        assert!(r.entails_cq(&atoms, &q).unwrap());
        assert!(!r.entails_cq(&atoms[..2], &q).unwrap());
    }
}
