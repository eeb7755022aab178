//! Benchmark instances from the hardness reductions, each with a
//! combinatorial ground truth: minimal vertex covers under conjunctions,
//! reachability under `exists r.A <= A`, and perfect matchings through
//! self-join free acyclic queries.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::vec::Vec;

use crate::error::{invalid, Error, Result};
use crate::model::{
    ABox, Atom, Axiom, GroundAtom, Name, Role, SupportHistogram, TBox, Term, CQ, OMQ, UCQ,
};

/// Largest vertex count accepted by the enumeration oracles.
pub const ORACLE_LIMIT: usize = 12;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    pub vertices: Vec<Name>,
    pub edges: Vec<(usize, usize)>,
    pub directed: bool,
    /// Left and right vertex indices of a bipartite graph.
    pub bipartition: Option<(Vec<usize>, Vec<usize>)>,
}

fn index_edges(vertices: &[Name], edges: &[(Name, Name)], directed: bool) -> Result<Vec<(usize, usize)>> {
    let pos: BTreeMap<&Name, usize> = vertices.iter().enumerate().map(|(i, v)| (v, i)).collect();
    if pos.len() != vertices.len() {
        return Err(invalid("duplicate vertex"));
    }
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for (u, v) in edges {
        let (Some(&a), Some(&b)) = (pos.get(u), pos.get(v)) else {
            return Err(invalid(format!("edge {u} {v} uses an undeclared vertex")));
        };
        let key = if directed || a <= b { (a, b) } else { (b, a) };
        if seen.insert(key) {
            out.push((a, b));
        }
    }
    Ok(out)
}

impl Graph {
    pub fn undirected(vertices: Vec<Name>, edges: &[(Name, Name)]) -> Result<Self> {
        let edges = index_edges(&vertices, edges, false)?;
        if edges.iter().any(|(a, b)| a == b) {
            return Err(invalid("self-loop in an undirected graph"));
        }
        Ok(Graph {
            vertices,
            edges,
            directed: false,
            bipartition: None,
        })
    }

    pub fn directed(vertices: Vec<Name>, edges: &[(Name, Name)]) -> Result<Self> {
        Ok(Graph {
            edges: index_edges(&vertices, edges, true)?,
            vertices,
            directed: true,
            bipartition: None,
        })
    }

    /// Edges must join a left vertex to a right one.
    pub fn bipartite(left: Vec<Name>, right: Vec<Name>, edges: &[(Name, Name)]) -> Result<Self> {
        let n = left.len();
        let vertices: Vec<Name> = left.into_iter().chain(right).collect();
        let mut idx = index_edges(&vertices, edges, false)?;
        for e in idx.iter_mut() {
            let (a, b) = *e;
            match (a < n, b < n) {
                (true, false) => {}
                (false, true) => *e = (b, a),
                _ => return Err(invalid("edge inside one side of the bipartition")),
            }
        }
        let m = vertices.len();
        Ok(Graph {
            vertices,
            edges: idx,
            directed: false,
            bipartition: Some(((0..n).collect(), (n..m).collect())),
        })
    }

    /// Vertex names in order, from a list of endpoint pairs.
    pub fn vertices_of(edges: &[(Name, Name)]) -> Vec<Name> {
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        for (u, v) in edges {
            for x in [u, v] {
                if seen.insert(x.clone()) {
                    out.push(x.clone());
                }
            }
        }
        out
    }

    pub fn index_of(&self, v: &str) -> Option<usize> {
        self.vertices.iter().position(|x| x.as_str() == v)
    }
}

/// A generated OMQ with its ABox.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Instance {
    pub omq: OMQ,
    pub abox: ABox,
}

/// Concept names: `A_<vertex>` per vertex, `B_<i>` per edge, `D_<i>` for the
/// chain, `C` at the end; the ABox asserts every `A_<vertex>(c)` and the
/// query is `C(c)`.
pub fn gen_mvc(g: &Graph) -> Result<Instance> {
    if g.directed {
        return Err(invalid("vertex covers need an undirected graph"));
    }
    if g.edges.is_empty() {
        return Err(invalid("vertex covers of an edgeless graph are degenerate"));
    }
    let a = |u: usize| Name::new(&format!("A_{}", g.vertices[u]));
    let b = |i: usize| Name::new(&format!("B_{}", i + 1));
    let mut axioms = Vec::new();
    for (i, &(u, v)) in g.edges.iter().enumerate() {
        for w in [u, v] {
            axioms.push(Axiom::Conjunction {
                left: a(w),
                right: a(w),
                rhs: b(i),
            });
        }
    }
    let k = g.edges.len();
    let c = Name::new("C");
    if k == 1 {
        axioms.push(Axiom::Conjunction {
            left: b(0),
            right: b(0),
            rhs: c.clone(),
        });
    } else {
        let mut acc = b(0);
        for i in 1..k {
            let rhs = if i == k - 1 {
                c.clone()
            } else {
                Name::new(&format!("D_{}", i + 1))
            };
            axioms.push(Axiom::Conjunction {
                left: acc,
                right: b(i),
                rhs: rhs.clone(),
            });
            acc = rhs;
        }
    }
    let abox = ABox::from_atoms((0..g.vertices.len()).map(|u| GroundAtom::unary(a(u), "c")))?;
    let query = CQ::new([Atom::concept(c, Term::constant("c"))])?;
    Ok(Instance {
        omq: OMQ::cq(TBox::new(axioms)?, query)?,
        abox,
    })
}

/// `exists r.A <= A` with an `r` fact per edge and `A(d)`; the query is
/// `A(c)`.
pub fn gen_reachability(g: &Graph, c: &str, d: &str) -> Result<Instance> {
    if !g.directed {
        return Err(invalid("reachability needs a directed graph"));
    }
    for v in [c, d] {
        if g.index_of(v).is_none() {
            return Err(invalid(format!("unknown vertex {v}")));
        }
    }
    let tbox = TBox::new([Axiom::QualifiedExists {
        role: Role::named("r"),
        filler: "A".into(),
        rhs: "A".into(),
    }])?;
    let mut facts: Vec<GroundAtom> = g
        .edges
        .iter()
        .map(|&(u, v)| GroundAtom::binary("r", g.vertices[u].clone(), g.vertices[v].clone()))
        .collect();
    facts.push(GroundAtom::unary("A", d));
    let query = CQ::new([Atom::concept("A", Term::constant(c))])?;
    Ok(Instance {
        omq: OMQ::cq(tbox, query)?,
        abox: ABox::from_atoms(facts)?,
    })
}

/// Database and queries whose minimal-support counts differ by the number
/// of perfect matchings.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatchingInstance {
    pub db: ABox,
    pub q1: CQ,
    pub q2: UCQ,
}

pub fn gen_perfect_matching(g: &Graph) -> Result<MatchingInstance> {
    let (left, right) = g
        .bipartition
        .as_ref()
        .ok_or_else(|| invalid("perfect matchings need a bipartite graph"))?;
    let n = left.len();
    if n == 0 || right.len() != n {
        return Err(invalid("both sides of the bipartition must have the same positive size"));
    }
    let li = |u: usize| left.iter().position(|&x| x == u).unwrap() + 1;
    let rj = |v: usize| right.iter().position(|&x| x == v).unwrap() + 1;
    let mut db = Vec::new();
    for i in 1..=n {
        for j in 1..=n {
            let (a, b, o) = (
                format!("ORina_{i}_{j}"),
                format!("ORinb_{i}_{j}"),
                format!("ORout_{i}_{j}"),
            );
            db.push(GroundAtom::binary(a.as_str(), "0", "00"));
            db.push(GroundAtom::binary(a.as_str(), "0", "01"));
            db.push(GroundAtom::binary(a.as_str(), "1", "10"));
            db.push(GroundAtom::binary(b.as_str(), "0", "00"));
            db.push(GroundAtom::binary(b.as_str(), "0", "10"));
            db.push(GroundAtom::binary(b.as_str(), "1", "01"));
            db.push(GroundAtom::binary(o.as_str(), "00", "0"));
            db.push(GroundAtom::binary(o.as_str(), "01", "1"));
            db.push(GroundAtom::binary(o.as_str(), "10", "1"));
            db.push(GroundAtom::unary(format!("Val_{i}_{j}").as_str(), "0"));
            db.push(GroundAtom::unary(format!("Val_{i}_{j}").as_str(), "1"));
        }
        db.push(GroundAtom::unary(format!("One_{i}").as_str(), "1"));
        db.push(GroundAtom::unary(format!("Zero_{i}").as_str(), "0"));
    }
    let x = |i: usize, j: usize| Term::var(format!("x_{i}_{j}").as_str());
    let mut rows: BTreeMap<usize, Vec<usize>> = (1..=n).map(|i| (i, Vec::new())).collect();
    let mut cols: BTreeMap<usize, Vec<usize>> = (1..=n).map(|j| (j, Vec::new())).collect();
    for &(u, v) in &g.edges {
        let (i, j) = (li(u), rj(v));
        rows.get_mut(&i).unwrap().push(j);
        cols.get_mut(&j).unwrap().push(i);
    }
    let mut q1 = Vec::new();
    for (&i, js) in rows.iter_mut() {
        js.sort_unstable();
        for &j in js.iter() {
            q1.push(Atom::concept(format!("Val_{i}_{j}").as_str(), x(i, j)));
        }
        match js.len() {
            // no facts use this predicate, so no support exists
            0 => q1.push(Atom::concept(format!("Unmatched_{i}").as_str(), Term::var(format!("u_{i}").as_str()))),
            1 => q1.push(Atom::concept(format!("One_{i}").as_str(), x(i, js[0]))),
            m => {
                let mut acc = x(i, js[0]);
                for t in 2..=m {
                    let w = Term::var(format!("w_{i}_{t}").as_str());
                    let z = Term::var(format!("z_{i}_{t}").as_str());
                    q1.push(Atom::role(format!("ORina_{i}_{t}").as_str(), acc, w.clone()));
                    q1.push(Atom::role(format!("ORinb_{i}_{t}").as_str(), x(i, js[t - 1]), w.clone()));
                    q1.push(Atom::role(format!("ORout_{i}_{t}").as_str(), w, z.clone()));
                    acc = z;
                }
                q1.push(Atom::concept(format!("One_{i}").as_str(), acc));
            }
        }
    }
    let q1 = CQ::new(q1)?;
    let mut q2 = Vec::new();
    for (&j, is) in cols.iter_mut() {
        is.sort_unstable();
        let p = is
            .iter()
            .enumerate()
            .map(|(t, &i)| Atom::concept(format!("Zero_{}", t + 1).as_str(), x(i, j)));
        q2.push(q1.with_atoms(p)?);
    }
    Ok(MatchingInstance {
        db: ABox::from_atoms(db)?,
        q1,
        q2: UCQ::new(q2)?,
    })
}

/// No predicate occurs twice among the relational atoms.
pub fn is_self_join_free(q: &CQ) -> bool {
    let preds: Vec<&Name> = q.relational().filter_map(Atom::pred).collect();
    let set: BTreeSet<&Name> = preds.iter().copied().collect();
    set.len() == preds.len()
}

/// Alpha-acyclicity of the query hypergraph by GYO reduction.
pub fn is_acyclic(q: &CQ) -> bool {
    let mut edges: Vec<BTreeSet<Name>> = q
        .relational()
        .map(|a| a.vars().cloned().collect())
        .collect();
    loop {
        let mut changed = false;
        // drop variables occurring in a single edge
        let mut count: BTreeMap<Name, usize> = BTreeMap::new();
        for e in &edges {
            for v in e {
                *count.entry(v.clone()).or_insert(0) += 1;
            }
        }
        for e in edges.iter_mut() {
            let before = e.len();
            e.retain(|v| count[v] > 1);
            changed |= e.len() != before;
        }
        // drop edges contained in another edge
        let mut i = 0;
        while i < edges.len() {
            let contained = edges
                .iter()
                .enumerate()
                .any(|(j, f)| j != i && edges[i].is_subset(f));
            if contained || edges[i].is_empty() {
                edges.remove(i);
                changed = true;
            } else {
                i += 1;
            }
        }
        if edges.is_empty() {
            return true;
        }
        if !changed {
            return false;
        }
    }
}

fn check_oracle_size(g: &Graph) -> Result<()> {
    if g.vertices.len() > ORACLE_LIMIT {
        return Err(Error::TooLarge {
            what: "vertex count for the enumeration oracle",
            actual: g.vertices.len(),
            limit: ORACLE_LIMIT,
        });
    }
    Ok(())
}

/// Number of inclusion-minimal vertex covers.
pub fn oracle_mvc(g: &Graph) -> Result<u128> {
    check_oracle_size(g)?;
    let n = g.vertices.len();
    let covers = |s: u32| g.edges.iter().all(|&(a, b)| s >> a & 1 == 1 || s >> b & 1 == 1);
    let mut count = 0;
    for s in 0u32..(1 << n) {
        if covers(s) && (0..n).filter(|&v| s >> v & 1 == 1).all(|v| !covers(s & !(1 << v))) {
            count += 1;
        }
    }
    Ok(count)
}

/// Simple directed paths from `c` to `d`, counted by number of edges.
pub fn oracle_simple_paths(g: &Graph, c: &str, d: &str) -> Result<SupportHistogram> {
    check_oracle_size(g)?;
    let (Some(s), Some(t)) = (g.index_of(c), g.index_of(d)) else {
        return Err(invalid("unknown endpoint"));
    };
    let mut out = SupportHistogram::new();
    fn walk(
        g: &Graph,
        at: usize,
        t: usize,
        visited: &mut Vec<bool>,
        len: usize,
        out: &mut SupportHistogram,
    ) {
        if at == t {
            out.add(len, 1);
            return;
        }
        for &(u, v) in &g.edges {
            if u == at && !visited[v] {
                visited[v] = true;
                walk(g, v, t, visited, len + 1, out);
                visited[v] = false;
            }
        }
    }
    let mut visited = vec![false; g.vertices.len()];
    visited[s] = true;
    walk(g, s, t, &mut visited, 0, &mut out);
    Ok(out)
}

/// Number of perfect matchings of a bipartite graph.
pub fn oracle_matchings(g: &Graph) -> Result<u128> {
    check_oracle_size(g)?;
    let (left, right) = g
        .bipartition
        .as_ref()
        .ok_or_else(|| invalid("perfect matchings need a bipartite graph"))?;
    if left.len() != right.len() {
        return Ok(0);
    }
    let adj: BTreeSet<(usize, usize)> = g.edges.iter().copied().collect();
    fn go(i: usize, left: &[usize], right: &[usize], used: &mut [bool], adj: &BTreeSet<(usize, usize)>) -> u128 {
        if i == left.len() {
            return 1;
        }
        let mut n = 0;
        for (k, &r) in right.iter().enumerate() {
            if !used[k] && adj.contains(&(left[i], r)) {
                used[k] = true;
                n += go(i + 1, left, right, used, adj);
                used[k] = false;
            }
        }
        n
    }
    let mut used = vec![false; right.len()];
    Ok(go(0, left, right, &mut used, &adj))
}
