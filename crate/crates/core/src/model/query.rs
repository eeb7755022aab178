use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::vec::Vec;
use core::fmt;

use super::{Name, TBox};
use crate::error::{invalid, Result};

/// Query term. `Anon` only ever appears as the value of an [`Assignment`];
/// it stands for "some element outside the ABox individuals".
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Term {
    Var(Name),
    Const(Name),
    Anon,
}

impl Term {
    pub fn var(n: impl Into<Name>) -> Self {
        Term::Var(n.into())
    }

    pub fn constant(n: impl Into<Name>) -> Self {
        Term::Const(n.into())
    }

    pub fn is_var(&self) -> bool {
        matches!(self, Term::Var(_))
    }

    pub fn as_var(&self) -> Option<&Name> {
        match self {
            Term::Var(v) => Some(v),
            _ => None,
        }
    }

    pub fn as_const(&self) -> Option<&Name> {
        match self {
            Term::Const(c) => Some(c),
            _ => None,
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(v) => write!(f, "?{v}"),
            Term::Const(c) => write!(f, "{c}"),
            Term::Anon => f.write_str("<anon>"),
        }
    }
}

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Atom {
    /// Concept atom (one argument) or role atom (two arguments).
    Rel { pred: Name, args: Vec<Term> },
    /// Disequality between two syntactically distinct terms, stored with the
    /// smaller term first.
    Neq(Term, Term),
}

impl Atom {
    pub fn concept(pred: impl Into<Name>, t: Term) -> Self {
        Atom::Rel {
            pred: pred.into(),
            args: vec![t],
        }
    }

    pub fn role(pred: impl Into<Name>, s: Term, o: Term) -> Self {
        Atom::Rel {
            pred: pred.into(),
            args: vec![s, o],
        }
    }

    pub fn rel(pred: impl Into<Name>, args: Vec<Term>) -> Result<Self> {
        let pred = pred.into();
        if args.is_empty() || args.len() > 2 {
            return Err(invalid(format!(
                "`{pred}` applied to {} arguments",
                args.len()
            )));
        }
        Ok(Atom::Rel { pred, args })
    }

    pub fn neq(a: Term, b: Term) -> Result<Self> {
        if a == b {
            return Err(invalid(format!("disequality `{a} != {b}` between identical terms")));
        }
        Ok(if a <= b { Atom::Neq(a, b) } else { Atom::Neq(b, a) })
    }

    pub fn is_relational(&self) -> bool {
        matches!(self, Atom::Rel { .. })
    }

    pub fn terms(&self) -> impl Iterator<Item = &Term> {
        let (rel, pair): (&[Term], [Option<&Term>; 2]) = match self {
            Atom::Rel { args, .. } => (args.as_slice(), [None, None]),
            Atom::Neq(a, b) => (&[], [Some(a), Some(b)]),
        };
        rel.iter().chain(pair.into_iter().flatten())
    }

    pub fn vars(&self) -> impl Iterator<Item = &Name> {
        self.terms().filter_map(Term::as_var)
    }

    pub fn pred(&self) -> Option<&Name> {
        match self {
            Atom::Rel { pred, .. } => Some(pred),
            Atom::Neq(..) => None,
        }
    }

    pub fn args(&self) -> &[Term] {
        match self {
            Atom::Rel { args, .. } => args,
            Atom::Neq(..) => &[],
        }
    }

    fn map_terms(&self, f: &impl Fn(&Term) -> Term) -> Option<Atom> {
        match self {
            Atom::Rel { pred, args } => Some(Atom::Rel {
                pred: pred.clone(),
                args: args.iter().map(f).collect(),
            }),
            Atom::Neq(a, b) => Atom::neq(f(a), f(b)).ok(),
        }
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Atom::Rel { pred, args } => {
                write!(f, "{pred}(")?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{a}")?;
                }
                f.write_str(")")
            }
            Atom::Neq(a, b) => write!(f, "{a} != {b}"),
        }
    }
}

/// Boolean conjunctive query, possibly with disequalities, treated as a set of
/// atoms (kept sorted and duplicate-free).
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct CQ {
    atoms: Vec<Atom>,
}

impl CQ {
    /// Builds a CQ. Every variable of a disequality must also occur in a
    /// relational atom, and no term may be anonymous.
    pub fn new(atoms: impl IntoIterator<Item = Atom>) -> Result<Self> {
        let set: BTreeSet<Atom> = atoms.into_iter().collect();
        let atoms: Vec<Atom> = set.into_iter().collect();
        if !atoms.iter().any(Atom::is_relational) {
            return Err(invalid("query has no relational atom"));
        }
        if atoms.iter().flat_map(Atom::terms).any(|t| *t == Term::Anon) {
            return Err(invalid("anonymous term inside a query"));
        }
        let rel_vars: BTreeSet<&Name> = atoms
            .iter()
            .filter(|a| a.is_relational())
            .flat_map(Atom::vars)
            .collect();
        for a in &atoms {
            if let Atom::Neq(..) = a {
                if let Some(v) = a.vars().find(|v| !rel_vars.contains(v)) {
                    return Err(invalid(format!(
                        "variable ?{v} occurs only in a disequality"
                    )));
                }
            }
        }
        Ok(CQ { atoms })
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn relational(&self) -> impl Iterator<Item = &Atom> {
        self.atoms.iter().filter(|a| a.is_relational())
    }

    pub fn neqs(&self) -> impl Iterator<Item = (&Term, &Term)> {
        self.atoms.iter().filter_map(|a| match a {
            Atom::Neq(x, y) => Some((x, y)),
            _ => None,
        })
    }

    pub fn has_neq(&self) -> bool {
        self.neqs().next().is_some()
    }

    pub fn rel_count(&self) -> usize {
        self.relational().count()
    }

    pub fn vars(&self) -> BTreeSet<Name> {
        self.atoms.iter().flat_map(Atom::vars).cloned().collect()
    }

    pub fn constants(&self) -> BTreeSet<Name> {
        self.atoms
            .iter()
            .flat_map(Atom::terms)
            .filter_map(Term::as_const)
            .cloned()
            .collect()
    }

    /// Variables and constants, variables first.
    pub fn terms(&self) -> Vec<Term> {
        let mut out: Vec<Term> = self.vars().into_iter().map(Term::Var).collect();
        out.extend(self.constants().into_iter().map(Term::Const));
        out
    }

    /// Predicate arities used by the relational atoms.
    pub fn arities(&self) -> BTreeMap<Name, usize> {
        self.relational()
            .filter_map(|a| a.pred().map(|p| (p.clone(), a.args().len())))
            .collect()
    }

    /// Number of relational atoms each variable occurs in.
    pub fn occurrences(&self) -> BTreeMap<Name, usize> {
        let mut occ = BTreeMap::new();
        for a in self.relational() {
            let vs: BTreeSet<&Name> = a.vars().collect();
            for v in vs {
                *occ.entry(v.clone()).or_insert(0) += 1;
            }
        }
        occ
    }

    /// Applies a term substitution. Returns `None` when a disequality
    /// collapses onto a single term.
    pub fn substitute(&self, f: impl Fn(&Term) -> Term) -> Option<CQ> {
        let mut atoms = Vec::with_capacity(self.atoms.len());
        for a in &self.atoms {
            atoms.push(a.map_terms(&f)?);
        }
        CQ::new(atoms).ok()
    }

    /// Renames variables through a map, leaving unmapped terms alone.
    pub fn rename(&self, map: &BTreeMap<Name, Term>) -> Option<CQ> {
        self.substitute(|t| match t {
            Term::Var(v) => map.get(v).cloned().unwrap_or_else(|| t.clone()),
            _ => t.clone(),
        })
    }

    pub fn with_atoms(&self, extra: impl IntoIterator<Item = Atom>) -> Result<CQ> {
        CQ::new(self.atoms.iter().cloned().chain(extra))
    }
}

impl fmt::Display for CQ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        // relational atoms first, disequalities last
        let mut first = true;
        for a in self.relational().chain(self.atoms.iter().filter(|a| !a.is_relational())) {
            if !first {
                f.write_str(", ")?;
            }
            first = false;
            write!(f, "{a}")?;
        }
        Ok(())
    }
}

/// Nonempty disjunction of Boolean CQs.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct UCQ {
    disjuncts: Vec<CQ>,
}

impl UCQ {
    pub fn new(disjuncts: Vec<CQ>) -> Result<Self> {
        if disjuncts.is_empty() {
            return Err(invalid("union of conjunctive queries with no disjunct"));
        }
        Ok(UCQ { disjuncts })
    }

    pub fn single(cq: CQ) -> Self {
        UCQ {
            disjuncts: vec![cq],
        }
    }

    pub fn disjuncts(&self) -> &[CQ] {
        &self.disjuncts
    }

    pub fn max_rel_count(&self) -> usize {
        self.disjuncts.iter().map(CQ::rel_count).max().unwrap_or(0)
    }

    pub fn has_neq(&self) -> bool {
        self.disjuncts.iter().any(CQ::has_neq)
    }

    pub fn arities(&self) -> BTreeMap<Name, usize> {
        self.disjuncts.iter().flat_map(|d| d.arities()).collect()
    }
}

impl fmt::Display for UCQ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, d) in self.disjuncts.iter().enumerate() {
            if i > 0 {
                f.write_str("\nOR\n")?;
            }
            write!(f, "{d}")?;
        }
        Ok(())
    }
}

/// Ontology-mediated query.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct OMQ {
    pub tbox: TBox,
    pub query: UCQ,
}

impl OMQ {
    pub fn new(tbox: TBox, query: UCQ) -> Result<Self> {
        let tb = tbox.arities();
        for (p, a) in query.arities() {
            if let Some(&b) = tb.get(&p) {
                if a != b {
                    return Err(invalid(format!(
                        "`{p}` has arity {a} in the query but {b} in the TBox"
                    )));
                }
            }
        }
        Ok(OMQ { tbox, query })
    }

    pub fn cq(tbox: TBox, cq: CQ) -> Result<Self> {
        OMQ::new(tbox, UCQ::single(cq))
    }
}

/// Map from variables to constants or [`Term::Anon`].
pub type Assignment = BTreeMap<Name, Term>;

/// Splits a CQ into its maximal connected subqueries. Relational atoms are
/// connected when they share a variable; each ground atom is its own
/// component. Disequalities follow their variables; one that joins two
/// different components is rejected. Disequalities between constants go with
/// the first component.
pub fn connected_components(q: &CQ) -> Result<Vec<CQ>> {
    let rel: Vec<&Atom> = q.relational().collect();
    let mut parent: Vec<usize> = (0..rel.len()).collect();
    fn find(p: &mut [usize], mut i: usize) -> usize {
        while p[i] != i {
            p[i] = p[p[i]];
            i = p[i];
        }
        i
    }
    let mut owner: BTreeMap<&Name, usize> = BTreeMap::new();
    for (i, a) in rel.iter().enumerate() {
        for v in a.vars() {
            match owner.get(v) {
                Some(&j) => {
                    let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                    parent[ri] = rj;
                }
                None => {
                    owner.insert(v, i);
                }
            }
        }
    }
    let mut groups: BTreeMap<usize, Vec<Atom>> = BTreeMap::new();
    let mut order = Vec::new();
    for (i, a) in rel.iter().enumerate() {
        let r = find(&mut parent, i);
        if !groups.contains_key(&r) {
            order.push(r);
        }
        groups.entry(r).or_default().push((*a).clone());
    }
    for a in q.atoms().iter().filter(|a| !a.is_relational()) {
        let roots: BTreeSet<usize> = a
            .vars()
            .map(|v| {
                let i = owner[v];
                find(&mut parent, i)
            })
            .collect();
        let target = match roots.len() {
            0 => order[0],
            1 => *roots.iter().next().unwrap(),
            _ => {
                return Err(invalid(format!(
                    "disequality `{a}` spans two connected components"
                )))
            }
        };
        groups.get_mut(&target).unwrap().push(a.clone());
    }
    order
        .into_iter()
        .map(|r| CQ::new(groups.remove(&r).unwrap()))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(n: &str) -> Term {
        Term::var(n)
    }

    #[test]
    fn cq_is_a_set() {
        let q = CQ::new([
            Atom::concept("A", v("x")),
            Atom::concept("A", v("x")),
            Atom::role("r", v("x"), v("y")),
        ])
        .unwrap();
        assert_eq!(q.atoms().len(), 2);
        assert_eq!(q.vars().len(), 2);
    }

    #[test]
    fn neq_validation() {
        assert!(Atom::neq(v("x"), v("x")).is_err());
        let dangling = CQ::new([
            Atom::concept("A", v("x")),
            Atom::neq(v("x"), v("z")).unwrap(),
        ]);
        assert!(dangling.is_err());
    }

    #[test]
    fn components_of_disjoint_atoms() {
        let q = CQ::new([Atom::concept("A", v("x")), Atom::concept("B", v("y"))]).unwrap();
        assert_eq!(connected_components(&q).unwrap().len(), 2);
    }

    #[test]
    fn components_share_variable() {
        let q = CQ::new([Atom::concept("A", v("x")), Atom::role("r", v("x"), v("y"))]).unwrap();
        assert_eq!(connected_components(&q).unwrap().len(), 1);
    }

    #[test]
    fn components_path_plus_isolated() {
        let q = CQ::new([
            Atom::role("r", v("x"), v("y")),
            Atom::role("r", v("y"), v("z")),
            Atom::concept("B", v("w")),
        ])
        .unwrap();
        let comps = connected_components(&q).unwrap();
        assert_eq!(comps.len(), 2);
        let sizes: Vec<usize> = comps.iter().map(CQ::rel_count).collect();
        assert!(sizes.contains(&2) && sizes.contains(&1));
    }

    #[test]
    fn cross_component_neq_rejected() {
        let q = CQ::new([
            Atom::concept("A", v("x")),
            Atom::concept("B", v("y")),
            Atom::neq(v("x"), v("y")).unwrap(),
        ])
        .unwrap();
        assert!(connected_components(&q).is_err());
    }

    #[test]
    fn substitute_collapsing_neq_is_none() {
        let q = CQ::new([
            Atom::role("r", v("x"), v("y")),
            Atom::neq(v("x"), v("y")).unwrap(),
        ])
        .unwrap();
        assert!(q.substitute(|_| v("x")).is_none());
    }
}
