//! Structural decomposition of a digraph: strongly connected components,
//! condensation, rooted nodes, leaders/followers and weak components.
//! Edge signs never matter here; only the non-zero pattern does.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, VecDeque};

use serde_json::json;

use crate::error::GraphError;
use crate::graph::SignedDigraph;

#[derive(Debug, Clone, PartialEq)]
pub struct ConnectivityReport {
    /// SCC member lists, each ascending. Ids follow a topological order of
    /// the condensation, ties broken by smallest member.
    pub sccs: Vec<Vec<usize>>,
    pub scc_of: Vec<usize>,
    /// Deduplicated condensation edges `(from, to)` between SCC ids, sorted.
    pub condensation: Vec<(usize, usize)>,
    /// Ids of SCCs without incoming condensation edges.
    pub source_sccs: Vec<usize>,
    /// `𝒱_r`; empty unless the graph is quasi-strongly connected.
    pub roots: Vec<usize>,
    pub is_quasi_strongly_connected: bool,
    pub leaders: Vec<usize>,
    pub followers: Vec<usize>,
    /// Components of the undirected support, ordered by smallest member.
    pub weak_components: Vec<Vec<usize>>,
    /// Indices into `weak_components` of components with more than one
    /// source SCC, i.e. without a spanning tree.
    pub unrooted_components: Vec<usize>,
}

impl ConnectivityReport {
    pub fn is_leader(&self, v: usize) -> bool {
        self.leaders.binary_search(&v).is_ok()
    }

    pub fn is_root(&self, v: usize) -> bool {
        self.roots.binary_search(&v).is_ok()
    }

    /// Source SCCs as node lists, in id order.
    pub fn leader_groups(&self) -> Vec<&[usize]> {
        self.source_sccs
            .iter()
            .map(|&s| self.sccs[s].as_slice())
            .collect()
    }

    /// JSON with 1-based node numbers and SCC ids.
    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "sccs": self.sccs.iter().map(|s| one_based(s)).collect::<Vec<_>>(),
            "condensation": self.condensation.iter().map(|&(a, b)| [a + 1, b + 1]).collect::<Vec<_>>(),
            "roots": one_based(&self.roots),
            "is_quasi_strongly_connected": self.is_quasi_strongly_connected,
            "leaders": one_based(&self.leaders),
            "followers": one_based(&self.followers),
            "weak_components": self.weak_components.iter().map(|c| one_based(c)).collect::<Vec<_>>(),
            "components_without_spanning_tree": one_based(&self.unrooted_components),
        })
    }
}

pub(crate) fn one_based(v: &[usize]) -> Vec<usize> {
    v.iter().map(|x| x + 1).collect()
}

pub fn analyze_connectivity(g: &SignedDigraph) -> ConnectivityReport {
    let n = g.node_count();
    let raw = tarjan(g);

    // order SCCs topologically, smallest-member first among ready ones
    let k = raw.len();
    let mut raw_of = vec![0; n];
    for (c, members) in raw.iter().enumerate() {
        for &v in members {
            raw_of[v] = c;
        }
    }
    let mut raw_edges: Vec<(usize, usize)> = g
        .edges()
        .iter()
        .map(|e| (raw_of[e.src], raw_of[e.dst]))
        .filter(|(a, b)| a != b)
        .collect();
    raw_edges.sort_unstable();
    raw_edges.dedup();
    let mut indeg = vec![0usize; k];
    let mut succ = vec![Vec::new(); k];
    for &(a, b) in &raw_edges {
        indeg[b] += 1;
        succ[a].push(b);
    }
    let mut heap: BinaryHeap<Reverse<(usize, usize)>> = (0..k)
        .filter(|&c| indeg[c] == 0)
        .map(|c| Reverse((raw[c][0], c)))
        .collect();
    let mut new_id = vec![usize::MAX; k];
    let mut sccs = Vec::with_capacity(k);
    while let Some(Reverse((_, c))) = heap.pop() {
        new_id[c] = sccs.len();
        sccs.push(raw[c].clone());
        for &d in &succ[c] {
            indeg[d] -= 1;
            if indeg[d] == 0 {
                heap.push(Reverse((raw[d][0], d)));
            }
        }
    }
    let scc_of: Vec<usize> = raw_of.iter().map(|&c| new_id[c]).collect();
    let mut condensation: Vec<(usize, usize)> = raw_edges
        .iter()
        .map(|&(a, b)| (new_id[a], new_id[b]))
        .collect();
    condensation.sort_unstable();

    let mut has_in = vec![false; k];
    for &(_, b) in &condensation {
        has_in[b] = true;
    }
    let source_sccs: Vec<usize> = (0..k).filter(|&c| !has_in[c]).collect();
    let mut leaders: Vec<usize> = source_sccs
        .iter()
        .flat_map(|&c| sccs[c].iter().copied())
        .collect();
    leaders.sort_unstable();
    let followers: Vec<usize> = (0..n)
        .filter(|v| leaders.binary_search(v).is_err())
        .collect();

    let is_qsc = source_sccs.len() == 1;
    let roots = if is_qsc {
        sccs[source_sccs[0]].clone()
    } else {
        Vec::new()
    };

    let weak_components = weak_components(g);
    let unrooted_components = weak_components
        .iter()
        .enumerate()
        .filter(|(_, comp)| {
            let mut sources: Vec<usize> = comp
                .iter()
                .map(|&v| scc_of[v])
                .filter(|&c| !has_in[c])
                .collect();
            sources.sort_unstable();
            sources.dedup();
            sources.len() > 1
        })
        .map(|(i, _)| i)
        .collect();

    ConnectivityReport {
        sccs,
        scc_of,
        condensation,
        source_sccs,
        roots,
        is_quasi_strongly_connected: is_qsc,
        leaders,
        followers,
        weak_components,
        unrooted_components,
    }
}

/// Iterative Tarjan. Returns SCCs with ascending members, in no particular order.
fn tarjan(g: &SignedDigraph) -> Vec<Vec<usize>> {
    let n = g.node_count();
    let out: Vec<Vec<usize>> = (0..n).map(|v| g.out_neighbors(v).collect()).collect();
    let mut index = vec![usize::MAX; n];
    let mut low = vec![0; n];
    let mut on_stack = vec![false; n];
    let mut stack = Vec::new();
    let mut comps = Vec::new();
    let mut next = 0;

    for start in 0..n {
        if index[start] != usize::MAX {
            continue;
        }
        let mut call: Vec<(usize, usize)> = vec![(start, 0)];
        index[start] = next;
        low[start] = next;
        next += 1;
        stack.push(start);
        on_stack[start] = true;

        while let Some(top) = call.last_mut() {
            let v = top.0;
            if top.1 < out[v].len() {
                let w = out[v][top.1];
                top.1 += 1;
                if index[w] == usize::MAX {
                    index[w] = next;
                    low[w] = next;
                    next += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    call.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
            } else {
                call.pop();
                if let Some(&(parent, _)) = call.last() {
                    low[parent] = low[parent].min(low[v]);
                }
                if low[v] == index[v] {
                    let mut comp = Vec::new();
                    loop {
                        let w = stack.pop().expect("tarjan stack underflow");
                        on_stack[w] = false;
                        comp.push(w);
                        if w == v {
                            break;
                        }
                    }
                    comp.sort_unstable();
                    comps.push(comp);
                }
            }
        }
    }
    comps
}

/// Connected components of the undirected support.
pub fn weak_components(g: &SignedDigraph) -> Vec<Vec<usize>> {
    let n = g.node_count();
    let mut comp = vec![usize::MAX; n];
    let mut out = Vec::new();
    for s in 0..n {
        if comp[s] != usize::MAX {
            continue;
        }
        let id = out.len();
        let mut members = vec![s];
        comp[s] = id;
        let mut queue = VecDeque::from([s]);
        while let Some(v) = queue.pop_front() {
            for w in g.in_neighbors(v).chain(g.out_neighbors(v)) {
                if comp[w] == usize::MAX {
                    comp[w] = id;
                    members.push(w);
                    queue.push_back(w);
                }
            }
        }
        members.sort_unstable();
        out.push(members);
    }
    out
}

/// `𝒱̂_i^o`: every node with a directed path to `i`, plus `i` itself.
pub fn ancestor_closure(g: &SignedDigraph, i: usize) -> Result<Vec<usize>, GraphError> {
    g.check_node(i)?;
    Ok(reach(g, &[i], |g, v| g.in_neighbors(v).collect()))
}

/// Every node reachable from `sources` (inclusive).
pub fn descendants(g: &SignedDigraph, sources: &[usize]) -> Result<Vec<usize>, GraphError> {
    for &s in sources {
        g.check_node(s)?;
    }
    Ok(reach(g, sources, |g, v| g.out_neighbors(v).collect()))
}

fn reach(
    g: &SignedDigraph,
    sources: &[usize],
    next: impl Fn(&SignedDigraph, usize) -> Vec<usize>,
) -> Vec<usize> {
    let mut seen = vec![false; g.node_count()];
    let mut queue: VecDeque<usize> = VecDeque::new();
    for &s in sources {
        if !seen[s] {
            seen[s] = true;
            queue.push_back(s);
        }
    }
    while let Some(v) = queue.pop_front() {
        for w in next(g, v) {
            if !seen[w] {
                seen[w] = true;
                queue.push_back(w);
            }
        }
    }
    (0..g.node_count()).filter(|&v| seen[v]).collect()
}
