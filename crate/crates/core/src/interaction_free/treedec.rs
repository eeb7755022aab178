use alloc::collections::BTreeSet;
use alloc::vec::Vec;

use crate::model::{Name, CQ};

/// Queries with at most this many variables get a minimum-width
/// decomposition; larger ones use the min-fill heuristic.
pub const EXACT_LIMIT: usize = 13;

/// Tree decomposition of a query's variable graph, built from an
/// elimination order: eliminating `order[i]` creates bag `i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TreeDecomposition {
    pub vars: Vec<Name>,
    pub order: Vec<usize>,
    pub bags: Vec<BTreeSet<usize>>,
    pub parent: Vec<Option<usize>>,
    pub width: usize,
}

/// Adjacency matrix of the variable co-occurrence graph.
pub fn primal_graph(q: &CQ) -> (Vec<Name>, Vec<Vec<bool>>) {
    let vars: Vec<Name> = q.vars().into_iter().collect();
    let n = vars.len();
    let mut adj = vec![vec![false; n]; n];
    for a in q.relational() {
        let ids: Vec<usize> = a
            .vars()
            .map(|v| vars.binary_search(v).expect("query variable"))
            .collect();
        for &x in &ids {
            for &y in &ids {
                if x != y {
                    adj[x][y] = true;
                }
            }
        }
    }
    (vars, adj)
}

impl TreeDecomposition {
    /// Decomposition induced by eliminating the variables (indices into
    /// [`CQ::vars`]) in the given order.
    pub fn from_order(q: &CQ, order: &[usize]) -> Self {
        let (vars, mut adj) = primal_graph(q);
        let n = vars.len();
        assert_eq!(order.len(), n, "elimination order must list every variable once");
        let mut pos = vec![usize::MAX; n];
        for (i, &v) in order.iter().enumerate() {
            pos[v] = i;
        }
        assert!(pos.iter().all(|&p| p != usize::MAX), "elimination order is not a permutation");
        let mut bags = Vec::with_capacity(n);
        let mut parent = vec![None; n];
        let mut alive = vec![true; n];
        for (i, &v) in order.iter().enumerate() {
            let nb: Vec<usize> = (0..n).filter(|&w| alive[w] && w != v && adj[v][w]).collect();
            for &a in &nb {
                for &b in &nb {
                    if a != b {
                        adj[a][b] = true;
                    }
                }
            }
            alive[v] = false;
            parent[i] = nb.iter().map(|&w| pos[w]).min();
            let mut bag: BTreeSet<usize> = nb.into_iter().collect();
            bag.insert(v);
            bags.push(bag);
        }
        // join the trees of a forest into one tree
        let roots: Vec<usize> = (0..n).filter(|&i| parent[i].is_none()).collect();
        if let Some(&last) = roots.last() {
            for &r in &roots[..roots.len() - 1] {
                parent[r] = Some(last);
            }
        }
        let width = bags.iter().map(|b| b.len()).max().unwrap_or(1).saturating_sub(1);
        TreeDecomposition {
            vars,
            order: order.to_vec(),
            bags,
            parent,
            width,
        }
    }

    /// Every atom inside some bag, the bags of each variable connected, and
    /// the parent links forming a tree.
    pub fn is_valid_for(&self, q: &CQ) -> bool {
        let n = self.bags.len();
        // tree: exactly one root and every node reaches it
        if n > 0 {
            if self.parent.iter().filter(|p| p.is_none()).count() != 1 {
                return false;
            }
            for start in 0..n {
                let mut cur = start;
                let mut steps = 0;
                while let Some(p) = self.parent[cur] {
                    cur = p;
                    steps += 1;
                    if steps > n {
                        return false;
                    }
                }
            }
        }
        for a in q.relational() {
            let ids: BTreeSet<usize> = a
                .vars()
                .filter_map(|v| self.vars.binary_search(v).ok())
                .collect();
            if !ids.is_empty() && !self.bags.iter().any(|b| ids.is_subset(b)) {
                return false;
            }
        }
        for v in 0..self.vars.len() {
            let holding: Vec<usize> = (0..n).filter(|&i| self.bags[i].contains(&v)).collect();
            if holding.is_empty() {
                return false;
            }
            // connected: all but one holding bag has its parent holding too
            let tops = holding
                .iter()
                .filter(|&&i| self.parent[i].is_none_or(|p| !self.bags[p].contains(&v)))
                .count();
            if tops != 1 {
                return false;
            }
        }
        true
    }
}

fn q_set(adj: &[Vec<bool>], s: u32, v: usize) -> u32 {
    // vertices outside S and != v reachable from v through S
    let n = adj.len();
    let mut seen: u32 = 1 << v;
    let mut stack = vec![v];
    let mut out: u32 = 0;
    while let Some(x) = stack.pop() {
        for (y, &edge) in adj[x].iter().enumerate().take(n) {
            if !edge || seen >> y & 1 == 1 {
                continue;
            }
            seen |= 1 << y;
            if s >> y & 1 == 1 {
                stack.push(y);
            } else {
                out |= 1 << y;
            }
        }
    }
    out
}

/// Minimum-width elimination order by dynamic programming over vertex
/// subsets.
pub fn exact_order(adj: &[Vec<bool>]) -> Vec<usize> {
    let n = adj.len();
    assert!(n <= EXACT_LIMIT + 3, "exact treewidth search is exponential");
    let full: u32 = if n == 32 { u32::MAX } else { (1u32 << n) - 1 };
    let mut tw = vec![usize::MAX; 1 << n];
    let mut choice = vec![0usize; 1 << n];
    tw[0] = 0;
    for s in 1..=full {
        let mut best = usize::MAX;
        let mut arg = 0;
        for v in 0..n {
            if s >> v & 1 == 0 {
                continue;
            }
            let rest = s & !(1 << v);
            let cost = tw[rest as usize].max(q_set(adj, rest, v).count_ones() as usize);
            if cost < best {
                best = cost;
                arg = v;
            }
        }
        tw[s as usize] = best;
        choice[s as usize] = arg;
    }
    let mut order = Vec::with_capacity(n);
    let mut s = full;
    while s != 0 {
        let v = choice[s as usize];
        order.push(v);
        s &= !(1 << v);
    }
    order.reverse();
    order
}

/// Min-fill elimination order.
pub fn min_fill_order(adj: &[Vec<bool>]) -> Vec<usize> {
    let n = adj.len();
    let mut adj: Vec<Vec<bool>> = adj.to_vec();
    let mut alive = vec![true; n];
    let mut order = Vec::with_capacity(n);
    for _ in 0..n {
        let mut best = (usize::MAX, usize::MAX, usize::MAX);
        for v in (0..n).filter(|&v| alive[v]) {
            let nb: Vec<usize> = (0..n).filter(|&w| alive[w] && w != v && adj[v][w]).collect();
            let mut fill = 0;
            for (i, &a) in nb.iter().enumerate() {
                for &b in &nb[i + 1..] {
                    if !adj[a][b] {
                        fill += 1;
                    }
                }
            }
            best = best.min((fill, nb.len(), v));
        }
        let v = best.2;
        let nb: Vec<usize> = (0..n).filter(|&w| alive[w] && w != v && adj[v][w]).collect();
        for &a in &nb {
            for &b in &nb {
                if a != b {
                    adj[a][b] = true;
                }
            }
        }
        alive[v] = false;
        order.push(v);
    }
    order
}

pub fn tree_decompose(q: &CQ) -> TreeDecomposition {
    let (vars, adj) = primal_graph(q);
    let order = if vars.len() <= EXACT_LIMIT {
        exact_order(&adj)
    } else {
        min_fill_order(&adj)
    };
    TreeDecomposition::from_order(q, &order)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{Atom, Term};

    fn r(a: &str, b: &str) -> Atom {
        Atom::role("r", Term::var(a), Term::var(b))
    }

    #[test]
    fn widths() {
        let path = CQ::new([r("x", "y"), r("y", "z")]).unwrap();
        let td = tree_decompose(&path);
        assert_eq!(td.width, 1);
        assert!(td.is_valid_for(&path));

        let tri = CQ::new([r("x", "y"), r("y", "z"), r("z", "x")]).unwrap();
        let td = tree_decompose(&tri);
        assert_eq!(td.width, 2);
        assert!(td.is_valid_for(&tri));

        let single = CQ::new([r("x", "y")]).unwrap();
        assert!(tree_decompose(&single).width <= 1);

        let ground = CQ::new([Atom::concept("A", Term::constant("c"))]).unwrap();
        let td = tree_decompose(&ground);
        assert!(td.bags.is_empty() && td.is_valid_for(&ground));
    }

    #[test]
    fn four_cycle_has_width_two() {
        let c4 = CQ::new([r("a", "b"), r("b", "c"), r("c", "d"), r("d", "a")]).unwrap();
        assert_eq!(tree_decompose(&c4).width, 2);
        let (_, adj) = primal_graph(&c4);
        let td = TreeDecomposition::from_order(&c4, &min_fill_order(&adj));
        assert_eq!(td.width, 2);
        assert!(td.is_valid_for(&c4));
    }

    #[test]
    fn disconnected_becomes_one_tree() {
        let q = CQ::new([r("x", "y"), r("u", "w")]).unwrap();
        let td = tree_decompose(&q);
        assert!(td.is_valid_for(&q));
    }
}
