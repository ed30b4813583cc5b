//! Seeded generators of connected multigraphs, moduli and harmonic covers.
//!
//! Graphs: draw a vertex count, scatter random edges (loops and parallel
//! edges allowed), then join the remaining components by one edge each.

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::{build_graph, Graph, Modulus};
use crate::morphisms::{EdgeImage, GraphMorphism};

pub use rand::SeedableRng;

/// Largest vertex count accepted by the generators.
pub const MAX_VERTICES: usize = 8;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RandomConfig {
    pub max_vertices: usize,
    pub max_edges: usize,
    pub max_modulus: usize,
}

impl Default for RandomConfig {
    fn default() -> Self {
        RandomConfig {
            max_vertices: 6,
            max_edges: 10,
            max_modulus: 4,
        }
    }
}

impl RandomConfig {
    pub fn with_max_vertices(max_vertices: usize) -> Result<Self> {
        let c = RandomConfig {
            max_vertices,
            ..Self::default()
        };
        c.validate()?;
        Ok(c)
    }

    fn validate(&self) -> Result<()> {
        if self.max_vertices == 0 || self.max_vertices > MAX_VERTICES {
            return Err(Error::PreconditionViolated(format!(
                "max vertices must lie in 1..={MAX_VERTICES}"
            )));
        }
        if self.max_edges + 1 < self.max_vertices || self.max_edges == 0 {
            return Err(Error::PreconditionViolated(
                "edge budget too small for a connected graph".into(),
            ));
        }
        if self.max_modulus == 0 {
            return Err(Error::PreconditionViolated(
                "modulus size must be positive".into(),
            ));
        }
        Ok(())
    }
}

pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn vertex_names(n: usize) -> Vec<String> {
    (0..n).map(|i| format!("v{i}")).collect()
}

/// A connected multigraph without isolated vertices.
pub fn random_graph(rng: &mut ChaCha8Rng, config: &RandomConfig) -> Result<Graph> {
    config.validate()?;
    let n = rng.gen_range(1..=config.max_vertices);
    // Leave room for at most n - 1 repair edges.
    let budget = config.max_edges - (n - 1);
    let k = rng.gen_range(usize::from(n == 1)..=budget);
    let mut pairs: Vec<(usize, usize)> = (0..k)
        .map(|_| (rng.gen_range(0..n), rng.gen_range(0..n)))
        .collect();
    let mut parent: Vec<usize> = (0..n).collect();
    fn root(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            x = p[x];
        }
        x
    }
    for &(a, b) in &pairs {
        let (ra, rb) = (root(&mut parent, a), root(&mut parent, b));
        parent[ra.max(rb)] = ra.min(rb);
    }
    for v in 1..n {
        let (r0, rv) = (root(&mut parent, 0), root(&mut parent, v));
        if r0 != rv {
            let u = rng.gen_range(0..n);
            let u = if root(&mut parent, u) == rv { 0 } else { u };
            let pair = if rng.gen_bool(0.5) { (u, v) } else { (v, u) };
            pairs.push(pair);
            let ru = root(&mut parent, u);
            parent[ru.max(rv)] = ru.min(rv);
        }
    }
    let names = vertex_names(n);
    let triples: Vec<(String, String, String)> = pairs
        .iter()
        .enumerate()
        .map(|(i, &(a, b))| (format!("e{i}"), names[a].clone(), names[b].clone()))
        .collect();
    build_graph(&names, &triples)
}

/// `|I|` uniform in `1..=max_modulus`, points uniform with repetition.
pub fn random_modulus(rng: &mut ChaCha8Rng, g: &Graph, config: &RandomConfig) -> Modulus {
    let len = rng.gen_range(1..=config.max_modulus);
    let points = (0..len)
        .map(|_| rng.gen_range(0..g.vertex_count()))
        .collect();
    Modulus::from_indices(g, points).expect("points inside the graph")
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RandomInstance {
    pub index: usize,
    pub graph: Graph,
    pub modulus: Modulus,
}

/// `count` instances drawn in order from one stream seeded by `seed`.
pub fn random_instances(
    seed: u64,
    count: usize,
    config: &RandomConfig,
) -> Result<Vec<RandomInstance>> {
    config.validate()?;
    let mut rng = rng_from_seed(seed);
    (0..count)
        .map(|index| {
            let graph = random_graph(&mut rng, config)?;
            let modulus = random_modulus(&mut rng, &graph, config);
            Ok(RandomInstance {
                index,
                graph,
                modulus,
            })
        })
        .collect()
}

/// A connected degree-`degree` covering `Γ̃ -> base` with all
/// multiplicities 1: each edge lifts through a random permutation of the
/// sheets. Needs a base with a cycle so that connected covers exist.
pub fn random_cover(rng: &mut ChaCha8Rng, base: &Graph, degree: usize) -> Result<GraphMorphism> {
    if degree == 0 || !base.is_connected() {
        return Err(Error::PreconditionViolated(
            "cover needs a connected base and degree > 0".into(),
        ));
    }
    let tree = base.spanning_forest().edges;
    let extra = (0..base.edge_count()).find(|e| !tree.contains(e));
    if extra.is_none() && degree > 1 {
        return Err(Error::PreconditionViolated(
            "a tree has no connected covers".into(),
        ));
    }
    for attempt in 0..32 {
        let perms: Vec<Vec<usize>> = (0..base.edge_count())
            .map(|e| {
                let mut p: Vec<usize> = (0..degree).collect();
                if attempt < 31 {
                    p.shuffle(rng);
                } else if Some(e) == extra {
                    // Last resort: a single cyclic shift on a non-tree edge.
                    p.rotate_left(1);
                }
                p
            })
            .collect();
        let cover = build_cover(base, degree, &perms)?;
        if cover.source().is_connected() {
            return Ok(cover);
        }
    }
    Err(Error::violation("random_cover", "no connected cover found"))
}

fn build_cover(base: &Graph, degree: usize, perms: &[Vec<usize>]) -> Result<GraphMorphism> {
    let n = base.vertex_count();
    let names: Vec<String> = (0..degree)
        .flat_map(|k| (0..n).map(move |v| (k, v)))
        .map(|(k, v)| format!("{}.{k}", base.vertex_id(v)))
        .collect();
    let mut triples = Vec::new();
    let mut edge_map = Vec::new();
    for k in 0..degree {
        for (e, p) in perms.iter().enumerate() {
            let o = k * n + base.origin(e);
            let t = p[k] * n + base.terminus(e);
            triples.push((
                format!("{}.{k}", base.edge(e).id),
                names[o].clone(),
                names[t].clone(),
            ));
            edge_map.push(EdgeImage::Edge(e));
        }
    }
    let src = build_graph(&names, &triples)?;
    let vertex_map = (0..degree * n).map(|i| i % n).collect();
    GraphMorphism::new(&src, base, vertex_map, edge_map)
}

/// A random cover of a random graph with a cycle, with `S' ⊂ V'` nonempty
/// and `S = φ⁻¹(S')`, so both directions of functoriality apply.
#[derive(Clone, Debug)]
pub struct RandomCover {
    pub index: usize,
    pub morphism: GraphMorphism,
    pub source_modulus: Modulus,
    pub target_modulus: Modulus,
}

pub fn random_covers(seed: u64, count: usize, config: &RandomConfig) -> Result<Vec<RandomCover>> {
    config.validate()?;
    let mut rng = rng_from_seed(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let base = random_graph(&mut rng, config)?;
        if base.edge_count() < base.vertex_count() {
            continue;
        }
        let degree = rng.gen_range(2..=3);
        let morphism = random_cover(&mut rng, &base, degree)?;
        let n = base.vertex_count();
        let mut s2: Vec<usize> = (0..n).filter(|_| rng.gen_bool(0.5)).collect();
        if s2.is_empty() {
            s2.push(rng.gen_range(0..n));
        }
        let s: Vec<usize> = (0..morphism.source().vertex_count())
            .filter(|&v| s2.contains(&morphism.vertex_image(v)))
            .collect();
        out.push(RandomCover {
            index: out.len(),
            source_modulus: Modulus::from_indices(morphism.source(), s)?,
            target_modulus: Modulus::from_indices(&base, s2)?,
            morphism,
        });
    }
    Ok(out)
}
