//! Seeded random signed digraphs.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::GeneratorError;
use crate::graph::SignedDigraph;

/// Used when no negative-edge fraction is given.
pub const DEFAULT_NEG_FRACTION: f64 = 0.3;

#[derive(Debug, Clone, PartialEq)]
pub struct RandomGraphOptions {
    pub n: usize,
    /// Probability of each ordered pair carrying an edge.
    pub density: f64,
    /// Probability of an edge being negative. Not allowed with `balanced`,
    /// where signs follow the sampled gauge.
    pub neg_fraction: Option<f64>,
    /// Add a random directed spanning tree so the result has a root.
    pub spanning_tree: bool,
    pub balanced: bool,
    pub seed: u64,
}

impl RandomGraphOptions {
    pub fn new(n: usize, density: f64, seed: u64) -> Self {
        Self {
            n,
            density,
            neg_fraction: None,
            spanning_tree: false,
            balanced: false,
            seed,
        }
    }

    fn validate(&self) -> Result<(), GeneratorError> {
        if self.n < 2 {
            return Err(GeneratorError::InvalidParameter(format!(
                "n must be at least 2, got {}",
                self.n
            )));
        }
        if !(self.density > 0.0 && self.density <= 1.0) {
            return Err(GeneratorError::InvalidParameter(format!(
                "density must lie in (0, 1], got {}",
                self.density
            )));
        }
        if let Some(p) = self.neg_fraction {
            if !(0.0..=1.0).contains(&p) {
                return Err(GeneratorError::InvalidParameter(format!(
                    "neg-fraction must lie in [0, 1], got {p}"
                )));
            }
            if self.balanced {
                return Err(GeneratorError::Conflict(
                    "--balanced fixes edge signs from the gauge; drop --neg-fraction".into(),
                ));
            }
        }
        Ok(())
    }
}

/// Magnitudes are multiples of 1/4 in `[1/4, 2]`, so they are exact in
/// binary and keep rational arithmetic cheap.
pub fn random_graph(opts: &RandomGraphOptions) -> Result<SignedDigraph, GeneratorError> {
    opts.validate()?;
    let n = opts.n;
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let gauge: Vec<f64> = (0..n)
        .map(|i| {
            if opts.balanced && i > 0 && rng.random_bool(0.5) {
                -1.0
            } else {
                1.0
            }
        })
        .collect();

    let mut present = vec![false; n * n];
    for dst in 0..n {
        for src in 0..n {
            if src != dst && rng.random_bool(opts.density) {
                present[dst * n + src] = true;
            }
        }
    }
    if opts.spanning_tree {
        let mut order: Vec<usize> = (0..n).collect();
        order.shuffle(&mut rng);
        for k in 1..n {
            let parent = order[rng.random_range(0..k)];
            present[order[k] * n + parent] = true;
        }
    }

    let neg = opts.neg_fraction.unwrap_or(DEFAULT_NEG_FRACTION);
    let mut edges = Vec::new();
    for dst in 0..n {
        for src in 0..n {
            if !present[dst * n + src] {
                continue;
            }
            let magnitude = f64::from(rng.random_range(1u8..=8)) / 4.0;
            let sign = if opts.balanced {
                gauge[src] * gauge[dst]
            } else if rng.random_bool(neg) {
                -1.0
            } else {
                1.0
            };
            edges.push((src, dst, sign * magnitude));
        }
    }
    Ok(SignedDigraph::from_edges(n, &edges).expect("generated edges are valid"))
}

/// Initial state with entries uniform in `[-1, 1]`.
pub fn random_state(n: usize, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n).map(|_| rng.random_range(-1.0..=1.0)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::balance::graph_balance;
    use crate::connectivity::analyze_connectivity;

    #[test]
    fn deterministic_per_seed() {
        let opts = RandomGraphOptions::new(6, 0.4, 11);
        assert_eq!(random_graph(&opts).unwrap(), random_graph(&opts).unwrap());
        let other = RandomGraphOptions {
            seed: 12,
            ..opts.clone()
        };
        assert_ne!(random_graph(&opts).unwrap(), random_graph(&other).unwrap());
    }

    #[test]
    fn random_state_is_seeded() {
        let x = random_state(5, 9);
        assert_eq!(x, random_state(5, 9));
        assert!(x.iter().all(|v| (-1.0..=1.0).contains(v)));
    }

    #[test]
    fn flags_are_honored() {
        for seed in 0..30 {
            let opts = RandomGraphOptions {
                spanning_tree: true,
                balanced: true,
                ..RandomGraphOptions::new(5, 0.2, seed)
            };
            let g = random_graph(&opts).unwrap();
            assert!(!analyze_connectivity(&g).roots.is_empty());
            assert!(graph_balance(&g));
        }
        let all_neg = RandomGraphOptions {
            neg_fraction: Some(1.0),
            ..RandomGraphOptions::new(4, 1.0, 3)
        };
        let g = random_graph(&all_neg).unwrap();
        assert_eq!(g.edge_count(), 12);
        assert!(g.edges().iter().all(|e| e.weight < 0.0));
    }

    #[test]
    fn rejects_bad_options() {
        let bad = [
            RandomGraphOptions::new(1, 0.5, 0),
            RandomGraphOptions::new(4, 0.0, 0),
            RandomGraphOptions::new(4, 1.5, 0),
            RandomGraphOptions {
                neg_fraction: Some(-0.1),
                ..RandomGraphOptions::new(4, 0.5, 0)
            },
        ];
        for opts in &bad {
            assert!(matches!(
                random_graph(opts),
                Err(GeneratorError::InvalidParameter(_))
            ));
        }
        let conflict = RandomGraphOptions {
            neg_fraction: Some(0.5),
            balanced: true,
            ..RandomGraphOptions::new(4, 0.5, 0)
        };
        assert!(matches!(
            random_graph(&conflict),
            Err(GeneratorError::Conflict(_))
        ));
    }
}
