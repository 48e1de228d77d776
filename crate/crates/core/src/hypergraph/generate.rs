use std::collections::VecDeque;

use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{Girth, Hypergraph, Vertex};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct GenerateConfig {
    pub vertices: usize,
    pub min_girth: u32,
    pub seed: u64,
    /// Number of random 3-sets to try.
    pub attempts: usize,
    /// Stop once this many edges are placed. Falling short sets
    /// [`Generated::exhausted`].
    pub target_edges: Option<usize>,
}

impl GenerateConfig {
    pub fn new(vertices: usize, min_girth: u32, seed: u64) -> Self {
        GenerateConfig {
            vertices,
            min_girth,
            seed,
            attempts: 1000,
            target_edges: None,
        }
    }
}

#[derive(Clone, Debug)]
pub struct Generated {
    pub hypergraph: Hypergraph,
    pub attempts_used: usize,
    /// The attempt budget ran out before `target_edges` was reached.
    pub exhausted: bool,
    pub girth: Girth,
    pub chromatic_number: usize,
}

/// Shortest path between two vertices in the incidence graph, counted in
/// incidence steps.
fn incidence_distance(
    n: usize,
    edges: &[[Vertex; 3]],
    inc: &[Vec<usize>],
    from: Vertex,
    to: Vertex,
) -> Option<usize> {
    let mut dist = vec![usize::MAX; n + edges.len()];
    dist[from as usize] = 0;
    let mut queue = VecDeque::from([from as usize]);
    while let Some(a) = queue.pop_front() {
        if a == to as usize {
            return Some(dist[a]);
        }
        let next: Vec<usize> = if a < n {
            inc[a].iter().map(|&e| n + e).collect()
        } else {
            edges[a - n].iter().map(|&v| v as usize).collect()
        };
        for b in next {
            if dist[b] == usize::MAX {
                dist[b] = dist[a] + 1;
                queue.push_back(b);
            }
        }
    }
    None
}

/// Seeded random hypergraph avoiding cycles shorter than `min_girth`.
/// Candidate 3-sets are drawn uniformly; a candidate is kept only if every
/// cycle through it has length at least `min_girth`. Deterministic in the
/// configuration.
pub fn generate_high_girth(config: &GenerateConfig) -> Result<Generated> {
    let n = config.vertices;
    if n < 3 {
        return Err(Error::InvalidParameter(format!(
            "generator needs at least 3 vertices, got {n}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut edges: Vec<[Vertex; 3]> = Vec::new();
    let mut inc: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut attempts_used = 0;
    let total_triples = n * (n - 1) * (n - 2) / 6;
    for _ in 0..config.attempts {
        if config.target_edges.is_some_and(|t| edges.len() >= t) || edges.len() == total_triples {
            break;
        }
        attempts_used += 1;
        let picked = sample(&mut rng, n, 3);
        let mut e = [
            picked.index(0) as Vertex,
            picked.index(1) as Vertex,
            picked.index(2) as Vertex,
        ];
        e.sort_unstable();
        if edges.contains(&e) {
            continue;
        }
        // a new cycle through e enters at one vertex of e and leaves at
        // another: length (distance + 2) / 2 in hypergraph terms
        let mut shortest = usize::MAX;
        for (i, j) in [(0, 1), (0, 2), (1, 2)] {
            if let Some(d) = incidence_distance(n, &edges, &inc, e[i], e[j]) {
                shortest = shortest.min((d + 2) / 2);
            }
        }
        if shortest < config.min_girth as usize {
            continue;
        }
        for &v in &e {
            inc[v as usize].push(edges.len());
        }
        edges.push(e);
    }
    let hypergraph = Hypergraph::from_edges(n, &edges)?;
    let exhausted = config.target_edges.is_some_and(|t| edges.len() < t);
    Ok(Generated {
        girth: hypergraph.girth(),
        chromatic_number: hypergraph.chromatic_number(),
        hypergraph,
        attempts_used,
        exhausted,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generated_instances_meet_girth_bound() {
        for seed in 0..20 {
            let g = generate_high_girth(&GenerateConfig::new(9, 4, seed)).unwrap();
            let c = g.hypergraph.check_conditions();
            assert!(c.one && c.two, "seed {seed}");
            assert!(g.girth.at_least(4));
            if g.hypergraph.edge_count() > 0 {
                assert!(g.chromatic_number >= 2);
            }
        }
    }

    #[test]
    fn huge_girth_gives_hyperforest() {
        for seed in 0..10 {
            let g = generate_high_girth(&GenerateConfig::new(6, 100, seed)).unwrap();
            assert!(g.hypergraph.is_hyperforest());
        }
    }

    #[test]
    fn deterministic_in_seed() {
        let cfg = GenerateConfig::new(12, 5, 42);
        let a = generate_high_girth(&cfg).unwrap();
        let b = generate_high_girth(&cfg).unwrap();
        assert_eq!(a.hypergraph, b.hypergraph);
    }

    #[test]
    fn three_vertices_give_single_edge() {
        let g = generate_high_girth(&GenerateConfig::new(3, 4, 7)).unwrap();
        assert_eq!(g.hypergraph.edges(), &[[0, 1, 2]]);
        assert!(generate_high_girth(&GenerateConfig::new(2, 4, 7)).is_err());
    }

    #[test]
    fn unreachable_target_reports_exhaustion() {
        let mut cfg = GenerateConfig::new(6, 100, 3);
        cfg.target_edges = Some(10);
        cfg.attempts = 50;
        let g = generate_high_girth(&cfg).unwrap();
        assert!(g.exhausted);
        assert!(g.hypergraph.is_hyperforest());
    }
}
