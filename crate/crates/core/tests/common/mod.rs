#![allow(dead_code)]

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use signed_consensus::random::{random_graph, RandomGraphOptions};
use signed_consensus::{
    analyze_connectivity, classify_root_condition, RootCondition, SignedDigraph,
};

pub type Q = BigRational;

pub fn q(num: i64, den: i64) -> Q {
    Q::new(num.into(), den.into())
}

/// The 13-agent example, transcribed from its printed Laplacian.
pub const EXAMPLE_LAPLACIAN: [[f64; 13]; 13] = [
    [
        1.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0,
    ],
    [
        -3.0, 3.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0,
    ],
    [
        0.0, -1.5, 4.0, 0.0, 0.0, 2.5, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0,
    ],
    [0.0; 13],
    [
        0.0, 0.0, 0.0, 0.0, 1.0, 1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0,
    ],
    [
        -2.0, 0.0, 0.0, 0.0, 0.0, 2.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0,
    ],
    [
        0.0, 0.0, -1.0, 0.0, 0.0, -2.0, 4.0, 0.0, 0.0, 0.0, -1.0, 0.0, 0.0,
    ],
    [
        0.0, 0.0, 0.0, 2.0, 0.0, 0.0, 0.0, 3.0, 1.0, 0.0, 0.0, 0.0, 0.0,
    ],
    [
        0.0, 0.0, 0.0, -1.0, 0.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0,
    ],
    [0.0; 13],
    [
        0.0, 0.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, -4.0, 5.0, 0.0, 0.0,
    ],
    [
        0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, -1.5, 5.5, 3.0,
    ],
    [
        0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, -2.0, 0.0, 0.0, 0.0, 2.0,
    ],
];

pub const EXAMPLE_X0: [f64; 13] = [
    1.0, 2.0, -1.0, 2.0, 1.0, -2.0, 1.0, -1.0, 1.0, -1.0, -3.0, -2.0, 2.0,
];

/// Published null vector of the example Laplacian.
pub fn example_xi() -> Vec<Q> {
    let one = q(1, 1);
    vec![
        -one.clone(),
        -one.clone(),
        q(1, 4),
        one.clone(),
        one.clone(),
        -one.clone(),
        q(-3, 16),
        -one.clone(),
        one.clone(),
        one.clone(),
        one.clone(),
        q(-7, 22),
        one,
    ]
}

/// Signs the example fixes on its three leader groups.
pub const EXAMPLE_LEADER_SIGNS: [(usize, i8); 3] = [(0, -1), (3, 1), (9, 1)];

pub fn example_graph() -> SignedDigraph {
    let rows: Vec<Vec<f64>> = EXAMPLE_LAPLACIAN
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let off: f64 = row
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .map(|(_, v)| v.abs())
                .sum();
            assert_eq!(off, row[i], "row {} is not a signed Laplacian row", i + 1);
            row.iter()
                .enumerate()
                .map(|(j, &l)| if i == j { 0.0 } else { -l })
                .collect()
        })
        .collect();
    SignedDigraph::from_weight_rows(&rows).unwrap()
}

pub fn data_path(name: &str) -> std::path::PathBuf {
    std::path::Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../data")
        .join(name)
}

// ---- oracles ----

/// `reach[a][b]`: a directed path `a -> ... -> b` exists (or `a == b`).
pub fn reachability(g: &SignedDigraph) -> Vec<Vec<bool>> {
    let n = g.node_count();
    let mut reach = vec![vec![false; n]; n];
    for (i, row) in reach.iter_mut().enumerate() {
        row[i] = true;
    }
    for e in g.edges() {
        reach[e.src][e.dst] = true;
    }
    for k in 0..n {
        for a in 0..n {
            if reach[a][k] {
                let via = reach[k].clone();
                for (dst, r) in reach[a].iter_mut().enumerate() {
                    *r |= via[dst];
                }
            }
        }
    }
    reach
}

pub fn ancestors(g: &SignedDigraph, i: usize) -> Vec<usize> {
    let reach = reachability(g);
    (0..g.node_count()).filter(|&a| reach[a][i]).collect()
}

pub fn roots(g: &SignedDigraph) -> Vec<usize> {
    let reach = reachability(g);
    (0..g.node_count())
        .filter(|&r| reach[r].iter().all(|&b| b))
        .collect()
}

/// Tries every sign assignment on `nodes`.
pub fn balanced_by_search(g: &SignedDigraph, nodes: &[usize]) -> bool {
    let k = nodes.len();
    if k <= 1 {
        return true;
    }
    (0u32..1 << (k - 1)).any(|mask| {
        let sign = |idx: usize| {
            if idx == 0 || mask >> (idx - 1) & 1 == 0 {
                1.0
            } else {
                -1.0
            }
        };
        nodes.iter().enumerate().all(|(a, &u)| {
            nodes
                .iter()
                .enumerate()
                .all(|(b, &v)| sign(a) * sign(b) * g.weight(u, v) >= 0.0)
        })
    })
}

pub fn node_balance_by_search(g: &SignedDigraph) -> Vec<bool> {
    (0..g.node_count())
        .map(|i| balanced_by_search(g, &ancestors(g, i)))
        .collect()
}

pub fn exact_laplacian(g: &SignedDigraph) -> Vec<Vec<Q>> {
    let n = g.node_count();
    let a = |i: usize, j: usize| Q::from_float(g.weight(i, j)).unwrap();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if i == j {
                        (0..n).fold(Q::zero(), |s, k| s + a(i, k).abs())
                    } else {
                        -a(i, j)
                    }
                })
                .collect()
        })
        .collect()
}

pub fn transpose(m: &[Vec<Q>]) -> Vec<Vec<Q>> {
    let n = m.len();
    (0..n)
        .map(|j| (0..n).map(|i| m[i][j].clone()).collect())
        .collect()
}

/// Exact null space by reduced row echelon form.
pub fn exact_null_space(m: &[Vec<Q>]) -> Vec<Vec<Q>> {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut a: Vec<Vec<Q>> = m.to_vec();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let inv = Q::one() / a[r][c].clone();
        for v in a[r].iter_mut() {
            *v = v.clone() * inv.clone();
        }
        for i in 0..rows {
            if i != r && !a[i][c].is_zero() {
                let f = a[i][c].clone();
                let pivot_row = a[r].clone();
                for (x, p) in a[i].iter_mut().zip(&pivot_row) {
                    *x = x.clone() - f.clone() * p.clone();
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows {
            break;
        }
    }
    (0..cols)
        .filter(|c| !pivots.contains(c))
        .map(|free| {
            let mut v = vec![Q::zero(); cols];
            v[free] = Q::one();
            for (row, &pc) in pivots.iter().enumerate() {
                v[pc] = -a[row][free].clone();
            }
            v
        })
        .collect()
}

/// `v` is a scalar multiple of the single basis vector.
pub fn proportional(basis: &[Vec<Q>], v: &[Q]) -> bool {
    if basis.len() != 1 {
        return false;
    }
    let b = &basis[0];
    let Some(k) = b.iter().position(|x| !x.is_zero()) else {
        return false;
    };
    let scale = v[k].clone() / b[k].clone();
    b.iter()
        .zip(v)
        .all(|(x, y)| x.clone() * scale.clone() == *y)
}

// ---- corpora ----

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_state(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    (0..n).map(|_| rng.random_range(-3.0..3.0)).collect()
}

fn spanning_graph(rng: &mut ChaCha8Rng, n: usize, balanced: bool) -> SignedDigraph {
    let opts = RandomGraphOptions {
        spanning_tree: true,
        balanced,
        neg_fraction: if balanced {
            None
        } else {
            Some(rng.random_range(0.1..0.6))
        },
        ..RandomGraphOptions::new(n, rng.random_range(0.1..0.5), rng.random())
    };
    random_graph(&opts).unwrap()
}

/// Flips the sign of each edge entering a non-root with probability 1/2.
/// The root block, and with it the root condition, is untouched.
fn scramble_followers(rng: &mut ChaCha8Rng, g: &SignedDigraph) -> SignedDigraph {
    let report = analyze_connectivity(g);
    let edges: Vec<(usize, usize, f64)> = g
        .edges()
        .into_iter()
        .map(|e| {
            let flip = !report.is_root(e.dst) && rng.random_bool(0.5);
            (e.src, e.dst, if flip { -e.weight } else { e.weight })
        })
        .collect();
    SignedDigraph::from_edges(g.node_count(), &edges).unwrap()
}

/// Quasi-strongly connected graphs, `2 ≤ n ≤ 8`, satisfying C1 or C2.
/// Half have a balanced root block with scrambled followers, half are
/// unconstrained draws filtered on the root condition.
pub fn zero_eigenvalue_corpus(count: usize, seed: u64) -> Vec<SignedDigraph> {
    let mut rng = rng(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let n = rng.random_range(2..=8);
        let g = if out.len() % 2 == 0 {
            let base = spanning_graph(&mut rng, n, true);
            scramble_followers(&mut rng, &base)
        } else {
            spanning_graph(&mut rng, n, false)
        };
        let report = analyze_connectivity(&g);
        if classify_root_condition(&g, &report).unwrap() != RootCondition::C3 {
            out.push(g);
        }
    }
    out
}

/// Quasi-strongly connected graphs, `2 ≤ n ≤ 8`, with every root condition.
pub fn mixed_condition_corpus(count: usize, seed: u64) -> Vec<SignedDigraph> {
    let mut rng = rng(seed);
    (0..count)
        .map(|k| {
            let n = rng.random_range(2..=8);
            let g = spanning_graph(&mut rng, n, k % 3 == 0);
            if k % 3 == 1 {
                scramble_followers(&mut rng, &g)
            } else {
                g
            }
        })
        .collect()
}
