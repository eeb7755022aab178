//! Interaction-free OMQs: when no single assertion can satisfy two different
//! (atom, assignment) pairs of the query, minimal supports have exactly one
//! fact per atom, and counting them reduces to a weighted homomorphism count
//! over per-atom singleton-support weights.

mod treedec;
mod weighted;

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

pub use treedec::{
    exact_order, min_fill_order, primal_graph, tree_decompose, TreeDecomposition, EXACT_LIMIT,
};
pub use weighted::{weighted_eval, weighted_eval_naive};

use crate::error::{invalid, unsupported, Error, Result};
use crate::model::{
    connected_components, ABox, Assignment, Atom, BasicConcept, GroundAtom, Name, Role,
    SupportHistogram, Term, WeightedDatabase, CQ, OMQ,
};
use crate::reasoner::{holds_in_slice, slice_depth, CanonicalSlice, NamedPart, SaturatedTBox};

/// A generic assertion satisfying two different (atom, assignment) pairs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InteractionWitness {
    pub fact: GroundAtom,
    pub first: (Atom, Assignment),
    pub second: (Atom, Assignment),
}

fn show_assignment(mu: &Assignment) -> String {
    if mu.is_empty() {
        return String::from("no variables");
    }
    let parts: Vec<String> = mu.iter().map(|(v, t)| format!("?{v} -> {t}")).collect();
    parts.join(", ")
}

impl fmt::Display for InteractionWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "the assertion {} satisfies {} with {} and {} with {}",
            self.fact,
            self.first.0,
            show_assignment(&self.first.1),
            self.second.0,
            show_assignment(&self.second.1)
        )
    }
}

fn saturate(omq: &OMQ) -> Result<SaturatedTBox> {
    if omq.tbox.is_horn_extended() {
        return Err(unsupported("interaction-freeness needs a DL-Lite_R TBox"));
    }
    if omq.query.has_neq() {
        return Err(unsupported("interaction-freeness is defined for queries without disequalities"));
    }
    SaturatedTBox::new(&omq.tbox)
}

fn fresh_constants(taken: &BTreeSet<Name>, n: usize) -> Vec<Name> {
    let mut out = Vec::new();
    let mut i = 0;
    while out.len() < n {
        let c = Name::new(&format!("_c{i}"));
        if !taken.contains(&c) {
            out.push(c);
        }
        i += 1;
    }
    out
}

/// Generic fact shapes: every concept over one constant and every role over
/// two (possibly equal) constants, drawn from the query constants plus fresh
/// ones.
fn fact_shapes(omq: &OMQ) -> Vec<GroundAtom> {
    let (mut concepts, mut roles) = omq.tbox.signature();
    for (p, a) in omq.query.arities() {
        if a == 1 {
            concepts.insert(p);
        } else {
            roles.insert(p);
        }
    }
    let qconsts: BTreeSet<Name> = omq
        .query
        .disjuncts()
        .iter()
        .flat_map(|d| d.constants())
        .collect();
    let fresh = fresh_constants(&qconsts, 2);
    let mut pool: Vec<Name> = qconsts.into_iter().collect();
    let unary_pool: Vec<Name> = pool.iter().cloned().chain([fresh[0].clone()]).collect();
    pool.extend(fresh);
    let mut shapes = Vec::new();
    for c in &concepts {
        for a in &unary_pool {
            shapes.push(GroundAtom::unary(c.clone(), a.clone()));
        }
    }
    for r in &roles {
        for a in &pool {
            for b in &pool {
                shapes.push(GroundAtom::binary(r.clone(), a.clone(), b.clone()));
            }
        }
    }
    shapes
}

fn assignments(vars: &[Name], values: &[Term]) -> Vec<Assignment> {
    let mut out = vec![Assignment::new()];
    for v in vars {
        let mut next = Vec::with_capacity(out.len() * values.len());
        for mu in &out {
            for t in values {
                let mut m = mu.clone();
                m.insert(v.clone(), t.clone());
                next.push(m);
            }
        }
        out = next;
    }
    out
}

/// Returns a witness of interaction, or `None` when the OMQ is
/// interaction-free. For a UCQ the pairs may also come from two different
/// disjuncts: the disjuncts must not share relevant assertions either.
pub fn check_interaction_free(omq: &OMQ) -> Result<Option<InteractionWitness>> {
    let sat = saturate(omq)?;
    let atoms: Vec<(usize, &Atom)> = omq
        .query
        .disjuncts()
        .iter()
        .enumerate()
        .flat_map(|(i, d)| d.relational().map(move |a| (i, a)))
        .collect();
    let singles: Vec<CQ> = atoms
        .iter()
        .map(|(_, a)| CQ::new([(*a).clone()]))
        .collect::<Result<_>>()?;
    for shape in fact_shapes(omq) {
        let named = NamedPart::new(&sat, [&shape]);
        if !named.is_consistent(&sat) {
            continue;
        }
        let slice = CanonicalSlice::build(&sat, &named, slice_depth(2))?;
        let mut values: Vec<Term> = shape.args().iter().cloned().map(Term::Const).collect();
        values.dedup();
        values.push(Term::Anon);
        let mut hit: Option<(Atom, Assignment)> = None;
        for ((_, atom), single) in atoms.iter().zip(&singles) {
            let vars: Vec<Name> = single.vars().into_iter().collect();
            for mu in assignments(&vars, &values) {
                if !holds_in_slice(&slice, single, &mu)? {
                    continue;
                }
                match hit.take() {
                    None => hit = Some(((*atom).clone(), mu)),
                    Some(first) => {
                        return Ok(Some(InteractionWitness {
                            fact: shape,
                            first,
                            second: ((*atom).clone(), mu),
                        }))
                    }
                }
            }
        }
    }
    Ok(None)
}

/// Per-fact entailments used for singleton-support weights.
struct FactTypes<'a> {
    sat: &'a SaturatedTBox,
    parts: Vec<NamedPart>,
}

impl<'a> FactTypes<'a> {
    fn new(sat: &'a SaturatedTBox, abox: &ABox) -> Self {
        let parts = abox
            .facts()
            .iter()
            .map(|f| NamedPart::new(sat, [&f.atom]))
            .collect();
        FactTypes { sat, parts }
    }

    fn ground(&self, atom: &GroundAtom) -> u128 {
        let args = atom.args();
        self.parts
            .iter()
            .filter(|p| {
                if atom.is_concept() {
                    p.has_type(&args[0], &BasicConcept::Name(atom.pred().clone()))
                } else {
                    p.has_role(&args[0], &args[1], &Role::named(atom.pred().clone()))
                }
            })
            .count() as u128
    }

    /// Facts entailing `exists R(c)` without any named `R`-successor of `c`.
    fn anonymous(&self, role: &Role, c: &Name) -> u128 {
        self.parts
            .iter()
            .filter(|p| {
                p.has_type(c, &BasicConcept::Exists(role.clone())) && !p.has_named_successor(c, role)
            })
            .count() as u128
    }

    /// Facts that alone entail the single-atom query.
    fn entailing(&self, q: &CQ) -> Result<u128> {
        let depth = slice_depth(q.vars().len());
        let mut n = 0;
        for part in &self.parts {
            let slice = CanonicalSlice::build(self.sat, part, depth)?;
            if crate::homomorphism::exists(q, &slice.structure, Default::default()) {
                n += 1;
            }
        }
        Ok(n)
    }
}

/// Number of facts `f` with `({f}, T) |=_mu atom`, for an assignment into
/// constants and at most one anonymous position of a role atom.
pub fn atom_support_weight(abox: &ABox, omq: &OMQ, atom: &Atom, mu: &Assignment) -> Result<u128> {
    let sat = saturate(omq)?;
    let types = FactTypes::new(&sat, abox);
    let pred = atom.pred().ok_or_else(|| invalid("weights are defined for relational atoms"))?;
    let mut args = Vec::new();
    for t in atom.args() {
        args.push(match t {
            Term::Var(v) => mu
                .get(v)
                .cloned()
                .ok_or_else(|| invalid(format!("assignment misses variable ?{v}")))?,
            other => other.clone(),
        });
    }
    let anon = args.iter().filter(|t| **t == Term::Anon).count();
    match (anon, args.as_slice()) {
        (0, _) => {
            let names = args.iter().map(|t| t.as_const().unwrap().clone()).collect();
            Ok(types.ground(&GroundAtom::new(pred.clone(), names)?))
        }
        (1, [Term::Const(c), Term::Anon]) => Ok(types.anonymous(&Role::named(pred.clone()), c)),
        (1, [Term::Anon, Term::Const(c)]) => {
            Ok(types.anonymous(&Role::inverse_of(pred.clone()), c))
        }
        (1, [Term::Anon]) => {
            let q = CQ::new([Atom::concept(pred.clone(), Term::var("x"))])?;
            let mu: Assignment = [(Name::new("x"), Term::Anon)].into_iter().collect();
            let mut n = 0;
            for part in &types.parts {
                let slice = CanonicalSlice::build(&sat, part, slice_depth(1))?;
                if holds_in_slice(&slice, &q, &mu)? {
                    n += 1;
                }
            }
            Ok(n)
        }
        _ => Err(invalid("both positions of a role atom are anonymous")),
    }
}

/// A query whose atom occurrences carry their own predicates, with the
/// weighted database over those predicates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightedInstance {
    pub query: CQ,
    pub db: WeightedDatabase,
}

fn tagged(pred: &Name, i: usize) -> Name {
    Name::new(&format!("{pred}@{i}"))
}

fn single_cq(omq: &OMQ) -> Result<&CQ> {
    match omq.query.disjuncts() {
        [q] => Ok(q),
        _ => Err(invalid("expected a conjunctive query")),
    }
}

fn shared_vars(q: &CQ) -> BTreeSet<Name> {
    q.occurrences()
        .into_iter()
        .filter(|(_, n)| *n >= 2)
        .map(|(v, _)| v)
        .collect()
}

fn build_with(types: &FactTypes, q: &CQ) -> Result<WeightedInstance> {
    let atoms: Vec<&Atom> = q.relational().collect();
    let mut tagged_atoms = Vec::with_capacity(atoms.len());
    let mut db = WeightedDatabase::new();
    for (i, atom) in atoms.iter().enumerate() {
        let pred = atom.pred().unwrap();
        let tp = tagged(pred, i);
        tagged_atoms.push(Atom::rel(tp.clone(), atom.args().to_vec())?);
        let mut found: BTreeSet<Vec<Name>> = BTreeSet::new();
        for p in &types.parts {
            if atom.args().len() == 1 {
                for (c, t) in &p.types {
                    if t.contains(&BasicConcept::Name(pred.clone())) {
                        found.insert(vec![c.clone()]);
                    }
                }
            } else {
                let r = Role::named(pred.clone());
                for ((a, b), t) in &p.roles {
                    if t.contains(&r) {
                        found.insert(vec![a.clone(), b.clone()]);
                    }
                }
            }
        }
        for args in found {
            if !matches_pattern(atom.args(), &args) {
                continue;
            }
            let g = GroundAtom::new(pred.clone(), args.clone())?;
            let w = types.ground(&g);
            db.add(GroundAtom::new(tp.clone(), args)?, w);
        }
    }
    Ok(WeightedInstance {
        query: CQ::new(tagged_atoms)?,
        db,
    })
}

fn matches_pattern(pattern: &[Term], args: &[Name]) -> bool {
    let mut bound: BTreeMap<&Name, &Name> = BTreeMap::new();
    for (t, c) in pattern.iter().zip(args) {
        match t {
            Term::Const(k) if k != c => return false,
            Term::Var(v) if *bound.entry(v).or_insert(c) != c => return false,
            _ => {}
        }
    }
    true
}

fn extend_with(types: &FactTypes, abox: &ABox, q: &CQ, inst: &mut WeightedInstance) -> Result<()> {
    let shared = shared_vars(q);
    let individuals = abox.individuals();
    for (i, atom) in q.relational().enumerate() {
        let args = atom.args();
        if args.len() != 2 {
            continue;
        }
        let pred = atom.pred().unwrap();
        let is_shared = |t: &Term| t.as_var().is_some_and(|v| shared.contains(v));
        let is_loose = |t: &Term| t.as_var().is_some_and(|v| !shared.contains(v));
        let (role, forward) = if is_shared(&args[0]) && is_loose(&args[1]) {
            (Role::named(pred.clone()), true)
        } else if is_loose(&args[0]) && is_shared(&args[1]) {
            (Role::inverse_of(pred.clone()), false)
        } else {
            continue;
        };
        let anon = Name::new(&format!("_anon@{i}"));
        let tp = tagged(pred, i);
        for c in &individuals {
            let w = types.anonymous(&role, c);
            let g = if forward {
                GroundAtom::binary(tp.clone(), c.clone(), anon.clone())
            } else {
                GroundAtom::binary(tp.clone(), anon.clone(), c.clone())
            };
            inst.db.add(g, w);
        }
    }
    Ok(())
}

/// Instantiations of each atom over the ABox constants, weighted by the
/// number of facts that alone entail them.
pub fn build_weighted_db(omq: &OMQ, abox: &ABox) -> Result<WeightedInstance> {
    let sat = saturate(omq)?;
    let types = FactTypes::new(&sat, abox);
    build_with(&types, single_cq(omq)?)
}

/// Adds, for each role atom with one shared and one unshared variable, a
/// fresh per-atom constant standing for an anonymous witness.
pub fn extend_with_anonymous(inst: &mut WeightedInstance, omq: &OMQ, abox: &ABox) -> Result<()> {
    let sat = saturate(omq)?;
    let types = FactTypes::new(&sat, abox);
    extend_with(&types, abox, single_cq(omq)?, inst)
}

/// Counts minimal supports of interaction-free OMQs. Construction checks
/// the query once; [`InteractionFreePipeline::histogram`] can then be run on
/// any ABox.
#[derive(Clone, Debug)]
pub struct InteractionFreePipeline {
    sat: SaturatedTBox,
    components: Vec<(usize, Vec<CQ>)>,
}

impl InteractionFreePipeline {
    pub fn new(omq: &OMQ) -> Result<Self> {
        let sat = saturate(omq)?;
        if check_interaction_free(omq)?.is_some() {
            return Err(Error::NotInteractionFree);
        }
        let mut components = Vec::new();
        for d in omq.query.disjuncts() {
            components.push((d.rel_count(), connected_components(d)?));
        }
        Ok(InteractionFreePipeline { sat, components })
    }

    pub fn histogram(&self, abox: &ABox) -> Result<SupportHistogram> {
        let named = NamedPart::new(&self.sat, abox.atoms());
        if !named.is_consistent(&self.sat) {
            return Err(Error::Inconsistent);
        }
        let types = FactTypes::new(&self.sat, abox);
        let mut hist = SupportHistogram::new();
        for (size, comps) in &self.components {
            let mut product = 1u128;
            for c in comps {
                let n = if c.rel_count() == 1 {
                    types.entailing(c)?
                } else {
                    let mut inst = build_with(&types, c)?;
                    extend_with(&types, abox, c, &mut inst)?;
                    let td = tree_decompose(&inst.query);
                    weighted_eval(&inst.query, &inst.db, &td)?
                };
                product = product
                    .checked_mul(n)
                    .ok_or(Error::Overflow("interaction-free support count"))?;
                if product == 0 {
                    break;
                }
            }
            hist.add(*size, product);
        }
        Ok(hist)
    }
}

/// Histogram of minimal supports by size for an interaction-free OMQ.
pub fn count_ms_interaction_free(omq: &OMQ, abox: &ABox) -> Result<SupportHistogram> {
    InteractionFreePipeline::new(omq)?.histogram(abox)
}

pub fn is_interaction_free(omq: &OMQ) -> Result<bool> {
    Ok(check_interaction_free(omq)?.is_none())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{Axiom, BasicConcept as B, TBox};
    use alloc::string::ToString;

    fn v(n: &str) -> Term {
        Term::var(n)
    }

    fn c(n: &str) -> Term {
        Term::constant(n)
    }

    fn omq(axioms: Vec<Axiom>, atoms: Vec<Atom>) -> OMQ {
        OMQ::cq(TBox::new(axioms).unwrap(), CQ::new(atoms).unwrap()).unwrap()
    }

    fn exists(r: Role) -> B {
        B::exists(r)
    }

    #[test]
    fn self_join_on_distinct_constants_is_interaction_free() {
        let q = omq(
            vec![],
            vec![Atom::role("r", c("c"), v("x")), Atom::role("r", c("d"), v("x"))],
        );
        assert_eq!(check_interaction_free(&q).unwrap(), None);
    }

    #[test]
    fn domain_and_range_interact() {
        let q = omq(
            vec![
                Axiom::concept(exists(Role::named("r")), B::name("A")),
                Axiom::concept(exists(Role::inverse_of("r")), B::name("A")),
            ],
            vec![Atom::concept("A", v("x"))],
        );
        let w = check_interaction_free(&q).unwrap().expect("witness");
        assert_eq!(w.fact.pred().as_str(), "r");
        assert_ne!(w.first.1, w.second.1);
        assert_ne!(w.fact.args()[0], w.fact.args()[1]);
    }

    #[test]
    fn ontology_lets_one_fact_satisfy_two_atoms() {
        let q = omq(
            vec![Axiom::concept(B::name("A"), exists(Role::named("r")))],
            vec![Atom::concept("A", v("x")), Atom::role("r", v("x"), v("y"))],
        );
        let w = check_interaction_free(&q).unwrap().expect("witness");
        assert_eq!(w.fact.pred().as_str(), "A");
        assert!(!w.to_string().is_empty());
    }

    #[test]
    fn horn_tbox_is_refused() {
        let q = omq(
            vec![Axiom::Conjunction {
                left: "A".into(),
                right: "B".into(),
                rhs: "C".into(),
            }],
            vec![Atom::concept("C", v("x"))],
        );
        assert!(matches!(check_interaction_free(&q), Err(Error::Unsupported(_))));
    }

    #[test]
    fn support_weights() {
        let t = vec![Axiom::role(Role::named("hasGrnsh"), Role::named("hasIng"))];
        let q = omq(t, vec![Atom::role("hasIng", v("x"), v("y"))]);
        let abox = ABox::from_atoms([GroundAtom::binary("hasGrnsh", "sole", "sauce")]).unwrap();
        let mu: Assignment = [(Name::new("x"), c("sole")), (Name::new("y"), c("sauce"))]
            .into_iter()
            .collect();
        let atom = Atom::role("hasIng", v("x"), v("y"));
        assert_eq!(atom_support_weight(&abox, &q, &atom, &mu).unwrap(), 1);
        assert_eq!(atom_support_weight(&ABox::empty(), &q, &atom, &mu).unwrap(), 0);

        let q = omq(
            vec![Axiom::concept(B::name("A"), exists(Role::named("r")))],
            vec![Atom::role("r", v("x"), v("y"))],
        );
        let abox = ABox::from_atoms([
            GroundAtom::unary("A", "c"),
            GroundAtom::binary("r", "c", "d"),
        ])
        .unwrap();
        let mu: Assignment = [(Name::new("x"), c("c")), (Name::new("y"), Term::Anon)]
            .into_iter()
            .collect();
        let atom = Atom::role("r", v("x"), v("y"));
        assert_eq!(atom_support_weight(&abox, &q, &atom, &mu).unwrap(), 1);
        let both: Assignment = [(Name::new("x"), Term::Anon), (Name::new("y"), Term::Anon)]
            .into_iter()
            .collect();
        assert!(atom_support_weight(&abox, &q, &atom, &both).is_err());
    }

    #[test]
    fn weighted_db_and_evaluation() {
        let q = omq(vec![], vec![Atom::concept("A", v("x")), Atom::role("r", v("x"), v("y"))]);
        let abox = ABox::from_atoms([
            GroundAtom::unary("A", "c"),
            GroundAtom::binary("r", "c", "d"),
            GroundAtom::binary("r", "c", "e"),
        ])
        .unwrap();
        let inst = build_weighted_db(&q, &abox).unwrap();
        assert_eq!(inst.db.len(), 3);
        assert!(inst.db.iter().all(|(_, w)| w == 1));
        let td = tree_decompose(&inst.query);
        assert_eq!(weighted_eval(&inst.query, &inst.db, &td).unwrap(), 2);
        assert!(build_weighted_db(&q, &ABox::empty()).unwrap().db.is_empty());

        let mut ext = inst.clone();
        extend_with_anonymous(&mut ext, &q, &abox).unwrap();
        assert_eq!(ext, inst);
    }

    #[test]
    fn anonymous_extension() {
        let q = omq(
            vec![Axiom::concept(B::name("A"), exists(Role::named("r")))],
            vec![Atom::concept("C", v("x")), Atom::role("r", v("x"), v("y"))],
        );
        let abox = ABox::from_atoms([
            GroundAtom::unary("C", "c"),
            GroundAtom::unary("A", "c"),
            GroundAtom::binary("r", "c", "d"),
        ])
        .unwrap();
        let mut inst = build_weighted_db(&q, &abox).unwrap();
        let before = inst.db.len();
        extend_with_anonymous(&mut inst, &q, &abox).unwrap();
        assert_eq!(inst.db.len(), before + 1);
        let anon: Vec<_> = inst
            .db
            .iter()
            .filter(|(g, _)| g.args().iter().any(|a| a.as_str().starts_with("_anon@")))
            .collect();
        assert_eq!(anon.len(), 1);
        assert_eq!(anon[0].1, 1);
        assert_eq!(anon[0].0.args()[0].as_str(), "c");
        assert_eq!(count_ms_interaction_free(&q, &abox).unwrap().get(2), 2);
    }

    #[test]
    fn two_loose_atoms_get_distinct_witnesses() {
        let q = omq(
            vec![Axiom::concept(B::name("A"), exists(Role::named("r")))],
            vec![
                Atom::concept("C", v("x")),
                Atom::role("r", v("x"), v("y")),
                Atom::role("s", v("x"), v("z")),
            ],
        );
        let abox = ABox::from_atoms([GroundAtom::unary("A", "c")]).unwrap();
        let mut inst = build_weighted_db(&q, &abox).unwrap();
        extend_with_anonymous(&mut inst, &q, &abox).unwrap();
        let names: BTreeSet<&str> = inst
            .db
            .iter()
            .flat_map(|(g, _)| g.args().iter().map(|a| a.as_str()))
            .filter(|a| a.starts_with("_anon@"))
            .collect();
        assert!(names.len() <= 2);
        let q2 = omq(
            vec![
                Axiom::concept(B::name("A"), exists(Role::named("r"))),
                Axiom::concept(B::name("A2"), exists(Role::named("s"))),
            ],
            vec![
                Atom::concept("C", v("x")),
                Atom::role("r", v("x"), v("y")),
                Atom::role("s", v("x"), v("z")),
            ],
        );
        let abox = ABox::from_atoms([GroundAtom::unary("A", "c"), GroundAtom::unary("A2", "c")])
            .unwrap();
        let mut inst = build_weighted_db(&q2, &abox).unwrap();
        extend_with_anonymous(&mut inst, &q2, &abox).unwrap();
        let names: BTreeSet<&str> = inst
            .db
            .iter()
            .flat_map(|(g, _)| g.args().iter().map(|a| a.as_str()))
            .filter(|a| a.starts_with("_anon@"))
            .collect();
        assert_eq!(names.len(), 2);
    }

    #[test]
    fn anonymous_leaf_is_counted() {
        let q = omq(
            vec![
                Axiom::concept(B::name("A"), exists(Role::named("r"))),
                Axiom::concept(exists(Role::inverse_of("r")), B::name("B")),
            ],
            vec![Atom::concept("B", v("x"))],
        );
        let abox = ABox::from_atoms([GroundAtom::unary("A", "c")]).unwrap();
        let h = count_ms_interaction_free(&q, &abox).unwrap();
        assert_eq!(h.total(), 1);
        assert_eq!(h.get(1), 1);
    }

    #[test]
    fn components_multiply() {
        let q = omq(vec![], vec![Atom::concept("A", v("x")), Atom::concept("B", v("y"))]);
        let abox = ABox::from_atoms([
            GroundAtom::unary("A", "c"),
            GroundAtom::unary("A", "d"),
            GroundAtom::unary("B", "e"),
        ])
        .unwrap();
        assert_eq!(count_ms_interaction_free(&q, &abox).unwrap().get(2), 2);
    }

    #[test]
    fn interacting_query_is_refused() {
        let q = omq(
            vec![Axiom::concept(B::name("A"), exists(Role::named("r")))],
            vec![Atom::concept("A", v("x")), Atom::role("r", v("x"), v("y"))],
        );
        assert_eq!(
            count_ms_interaction_free(&q, &ABox::empty()).unwrap_err(),
            Error::NotInteractionFree
        );
    }
}
