//! Finite oriented multigraphs, moduli and the extended graph.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default id of the auxiliary vertex of an extended graph.
pub const STAR: &str = "⋆";

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Edge {
    pub id: String,
    pub origin: usize,
    pub terminus: usize,
}

impl Edge {
    pub fn is_loop(&self) -> bool {
        self.origin == self.terminus
    }
}

/// Oriented multigraph. Loops and parallel edges are allowed.
///
/// Insertion order of vertices and edges fixes every basis used downstream.
#[derive(Clone, Debug)]
pub struct Graph {
    vertices: Vec<String>,
    edges: Vec<Edge>,
    vertex_index: HashMap<String, usize>,
    edge_index: HashMap<String, usize>,
}

impl PartialEq for Graph {
    fn eq(&self, other: &Self) -> bool {
        self.vertices == other.vertices && self.edges == other.edges
    }
}

impl Eq for Graph {}

/// Builds a graph from vertex ids and `(id, origin, terminus)` triples.
pub fn build_graph<V, E>(vertices: &[V], edges: &[(E, E, E)]) -> Result<Graph>
where
    V: AsRef<str>,
    E: AsRef<str>,
{
    if vertices.is_empty() {
        return Err(Error::EmptyVertexSet);
    }
    let mut vertex_index = HashMap::new();
    for (i, v) in vertices.iter().enumerate() {
        if vertex_index.insert(v.as_ref().to_string(), i).is_some() {
            return Err(Error::DuplicateId(v.as_ref().to_string()));
        }
    }
    let mut edge_index = HashMap::new();
    let mut out = Vec::with_capacity(edges.len());
    for (k, (id, o, t)) in edges.iter().enumerate() {
        let id = id.as_ref().to_string();
        let lookup = |v: &E| {
            vertex_index
                .get(v.as_ref())
                .copied()
                .ok_or_else(|| Error::DanglingEndpoint {
                    edge: id.clone(),
                    vertex: v.as_ref().to_string(),
                })
        };
        let origin = lookup(o)?;
        let terminus = lookup(t)?;
        if edge_index.insert(id.clone(), k).is_some() {
            return Err(Error::DuplicateId(id));
        }
        out.push(Edge {
            id,
            origin,
            terminus,
        });
    }
    Ok(Graph {
        vertices: vertices.iter().map(|v| v.as_ref().to_string()).collect(),
        edges: out,
        vertex_index,
        edge_index,
    })
}

/// Spanning forest together with the component labelling of the vertices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpanningForest {
    /// Selected edge indices, increasing.
    pub edges: Vec<usize>,
    /// Component label per vertex; labels are numbered by first vertex.
    pub component: Vec<usize>,
    pub component_count: usize,
}

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

impl Graph {
    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn vertex_id(&self, v: usize) -> &str {
        &self.vertices[v]
    }

    pub fn edge(&self, e: usize) -> &Edge {
        &self.edges[e]
    }

    pub fn vertex_index(&self, id: &str) -> Option<usize> {
        self.vertex_index.get(id).copied()
    }

    pub fn edge_index(&self, id: &str) -> Option<usize> {
        self.edge_index.get(id).copied()
    }

    pub fn origin(&self, e: usize) -> usize {
        self.edges[e].origin
    }

    pub fn terminus(&self, e: usize) -> usize {
        self.edges[e].terminus
    }

    /// Number of edge ends at `v` (a loop counts twice).
    pub fn valence(&self, v: usize) -> usize {
        self.edges
            .iter()
            .map(|e| usize::from(e.origin == v) + usize::from(e.terminus == v))
            .sum()
    }

    /// Ordered scan of the edges, keeping each edge that joins two components.
    pub fn spanning_forest(&self) -> SpanningForest {
        let n = self.vertex_count();
        let mut parent: Vec<usize> = (0..n).collect();
        let mut edges = Vec::new();
        for (k, e) in self.edges.iter().enumerate() {
            let a = find(&mut parent, e.origin);
            let b = find(&mut parent, e.terminus);
            if a != b {
                parent[a.max(b)] = a.min(b);
                edges.push(k);
            }
        }
        let mut label = HashMap::new();
        let mut component = Vec::with_capacity(n);
        for v in 0..n {
            let root = find(&mut parent, v);
            let next = label.len();
            component.push(*label.entry(root).or_insert(next));
        }
        SpanningForest {
            edges,
            component_count: label.len(),
            component,
        }
    }

    pub fn component_count(&self) -> usize {
        self.spanning_forest().component_count
    }

    pub fn is_connected(&self) -> bool {
        self.component_count() == 1
    }

    /// Copy of the graph with the orientation of the named edges reversed.
    pub fn reverse_edges<S: AsRef<str>>(&self, subset: &[S]) -> Result<Graph> {
        let mut g = self.clone();
        for id in subset {
            let k = self
                .edge_index(id.as_ref())
                .ok_or_else(|| Error::UnknownEdge(id.as_ref().to_string()))?;
            let e = &mut g.edges[k];
            std::mem::swap(&mut e.origin, &mut e.terminus);
        }
        Ok(g)
    }

    /// Subgraph on the given edges (all vertices kept).
    pub fn with_edges(&self, keep: &[usize]) -> Graph {
        let triples: Vec<(String, String, String)> = keep
            .iter()
            .map(|&k| {
                let e = &self.edges[k];
                (
                    e.id.clone(),
                    self.vertices[e.origin].clone(),
                    self.vertices[e.terminus].clone(),
                )
            })
            .collect();
        build_graph(&self.vertices, &triples).expect("subgraph of a valid graph")
    }
}

/// Modulus `sum_i w_i`: a nonempty indexed family of vertices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Modulus {
    points: Vec<usize>,
}

impl Modulus {
    pub fn new<S: AsRef<str>>(graph: &Graph, points: &[S]) -> Result<Modulus> {
        if points.is_empty() {
            return Err(Error::EmptyModulus);
        }
        let points = points
            .iter()
            .map(|p| {
                graph
                    .vertex_index(p.as_ref())
                    .ok_or_else(|| Error::UnknownVertex(p.as_ref().to_string()))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Modulus { points })
    }

    /// Modulus from vertex indices.
    pub fn from_indices(graph: &Graph, points: Vec<usize>) -> Result<Modulus> {
        if points.is_empty() {
            return Err(Error::EmptyModulus);
        }
        if let Some(&p) = points.iter().find(|&&p| p >= graph.vertex_count()) {
            return Err(Error::UnknownVertex(format!("#{p}")));
        }
        Ok(Modulus { points })
    }

    /// Size of the index set `I`.
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Vertex `w_i`.
    pub fn point(&self, i: usize) -> usize {
        self.points[i]
    }

    pub fn points(&self) -> &[usize] {
        &self.points
    }

    /// Distinct vertices of the modulus in vertex order.
    pub fn support(&self) -> Vec<usize> {
        let mut s = self.points.clone();
        s.sort_unstable();
        s.dedup();
        s
    }

    pub fn is_reduced(&self) -> bool {
        self.support().len() == self.points.len()
    }

    /// Indices `i` with `w_i = v`.
    pub fn indices_at(&self, v: usize) -> Vec<usize> {
        (0..self.points.len())
            .filter(|&i| self.points[i] == v)
            .collect()
    }

    /// The reduced modulus on the support.
    pub fn reduced(&self) -> Modulus {
        Modulus {
            points: self.support(),
        }
    }

    pub fn names(&self, graph: &Graph) -> Vec<String> {
        self.points
            .iter()
            .map(|&p| graph.vertex_id(p).to_string())
            .collect()
    }
}

/// The graph with an extra vertex joined to each modulus point.
#[derive(Clone, Debug)]
pub struct ExtendedGraph {
    pub graph: Graph,
    /// Index of the auxiliary vertex (the last vertex).
    pub star: usize,
    /// Edge index of `e_i`, for each modulus index `i`.
    pub modulus_edges: Vec<usize>,
    pub base_vertex_count: usize,
    pub base_edge_count: usize,
}

/// Extended graph with the default star id.
pub fn extend_with_modulus(g: &Graph, m: &Modulus) -> Result<ExtendedGraph> {
    extend_with_star(g, m, STAR)
}

/// Extended graph with a caller-chosen star id.
///
/// The auxiliary edges are named `"{star}:{i}"`.
pub fn extend_with_star(g: &Graph, m: &Modulus, star: &str) -> Result<ExtendedGraph> {
    if g.vertex_index(star).is_some() {
        return Err(Error::ReservedId(star.to_string()));
    }
    let mut vertices = g.vertices.clone();
    vertices.push(star.to_string());
    let mut triples: Vec<(String, String, String)> = g
        .edges
        .iter()
        .map(|e| {
            (
                e.id.clone(),
                g.vertices[e.origin].clone(),
                g.vertices[e.terminus].clone(),
            )
        })
        .collect();
    for (i, &w) in m.points.iter().enumerate() {
        let id = format!("{star}:{i}");
        if g.edge_index(&id).is_some() {
            return Err(Error::ReservedId(id));
        }
        triples.push((id, star.to_string(), g.vertices[w].clone()));
    }
    let graph = build_graph(&vertices, &triples)?;
    let base_edge_count = g.edge_count();
    Ok(ExtendedGraph {
        graph,
        star: g.vertex_count(),
        modulus_edges: (base_edge_count..base_edge_count + m.len()).collect(),
        base_vertex_count: g.vertex_count(),
        base_edge_count,
    })
}

impl ExtendedGraph {
    /// Drops the star vertex and the modulus edges.
    pub fn base_graph(&self) -> Graph {
        let keep: Vec<usize> = (0..self.base_edge_count).collect();
        let sub = self.graph.with_edges(&keep);
        let vertices = &sub.vertices[..self.base_vertex_count];
        let triples: Vec<(String, String, String)> = sub
            .edges
            .iter()
            .map(|e| {
                (
                    e.id.clone(),
                    sub.vertices[e.origin].clone(),
                    sub.vertices[e.terminus].clone(),
                )
            })
            .collect();
        build_graph(vertices, &triples).expect("base graph")
    }
}

/// JSON form of an edge.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeSpec {
    pub id: String,
    pub o: String,
    pub t: String,
}

/// JSON form of a graph with optional modulus.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphSpec {
    pub vertices: Vec<String>,
    pub edges: Vec<EdgeSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub modulus: Option<Vec<String>>,
}

impl GraphSpec {
    pub fn from_json(text: &str) -> Result<GraphSpec> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn from_graph(g: &Graph, m: Option<&Modulus>) -> GraphSpec {
        GraphSpec {
            vertices: g.vertices.clone(),
            edges: g
                .edges
                .iter()
                .map(|e| EdgeSpec {
                    id: e.id.clone(),
                    o: g.vertices[e.origin].clone(),
                    t: g.vertices[e.terminus].clone(),
                })
                .collect(),
            modulus: m.map(|m| m.names(g)),
        }
    }

    pub fn build(&self) -> Result<(Graph, Option<Modulus>)> {
        let triples: Vec<(&str, &str, &str)> = self
            .edges
            .iter()
            .map(|e| (e.id.as_str(), e.o.as_str(), e.t.as_str()))
            .collect();
        let g = build_graph(&self.vertices, &triples)?;
        let m = match &self.modulus {
            Some(points) => Some(Modulus::new(&g, points)?),
            None => None,
        };
        Ok((g, m))
    }
}
