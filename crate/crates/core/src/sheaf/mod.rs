//! Cellular sheaves on the geometric realization of a graph.
//!
//! A sheaf constant on open edges is recorded by its vertex stalks
//! `F_v`, edge stalks `F_e` and the restrictions `ξ⁰_e : F_{o(e)} -> F_e`,
//! `ξ¹_e : F_{t(e)} -> F_e`. All stalks are free of finite rank.

pub mod picard;
pub mod standard;

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::linalg::{kernel_basis, subquotient, FgAbGroup, GroupHom, IntMatrix};

pub use picard::{
    picard_geometric, rigidified_picard, verify_sign_law, verify_sign_law_m, GeometricPicard,
    RigidifiedPicard,
};
pub use standard::{build_standard_sheaves, half_edges, HalfEdge, StandardSheaves};

#[derive(Clone, Debug)]
pub struct CellularSheaf {
    graph: Arc<Graph>,
    vertex_ranks: Vec<usize>,
    edge_ranks: Vec<usize>,
    xi0: Vec<IntMatrix>,
    xi1: Vec<IntMatrix>,
}

impl CellularSheaf {
    pub fn new(
        graph: Arc<Graph>,
        vertex_ranks: Vec<usize>,
        edge_ranks: Vec<usize>,
        xi0: Vec<IntMatrix>,
        xi1: Vec<IntMatrix>,
    ) -> Result<Self> {
        if vertex_ranks.len() != graph.vertex_count()
            || edge_ranks.len() != graph.edge_count()
            || xi0.len() != graph.edge_count()
            || xi1.len() != graph.edge_count()
        {
            return Err(Error::DimensionMismatch("one stalk per cell".into()));
        }
        if let Some(v) = (0..graph.vertex_count()).find(|&v| graph.valence(v) == 0) {
            return Err(Error::IsolatedVertex(graph.vertex_id(v).to_string()));
        }
        for e in 0..graph.edge_count() {
            let (o, t) = (graph.origin(e), graph.terminus(e));
            let ok0 = xi0[e].rows() == edge_ranks[e] && xi0[e].cols() == vertex_ranks[o];
            let ok1 = xi1[e].rows() == edge_ranks[e] && xi1[e].cols() == vertex_ranks[t];
            if !(ok0 && ok1) {
                return Err(Error::DimensionMismatch(format!(
                    "restriction maps at edge `{}`",
                    graph.edge(e).id
                )));
            }
        }
        Ok(CellularSheaf {
            graph,
            vertex_ranks,
            edge_ranks,
            xi0,
            xi1,
        })
    }

    /// The constant sheaf `Z^rank`.
    pub fn constant(graph: Arc<Graph>, rank: usize) -> Result<Self> {
        let (n, m) = (graph.vertex_count(), graph.edge_count());
        let id = IntMatrix::identity(rank);
        CellularSheaf::new(
            graph,
            vec![rank; n],
            vec![rank; m],
            vec![id.clone(); m],
            vec![id; m],
        )
    }

    /// `⊕_v v_* Z^{ranks[v]}`: edge stalks are zero.
    pub fn skyscrapers(graph: Arc<Graph>, ranks: Vec<usize>) -> Result<Self> {
        let m = graph.edge_count();
        let xi0 = (0..m)
            .map(|e| IntMatrix::zeros(0, ranks[graph.origin(e)]))
            .collect();
        let xi1 = (0..m)
            .map(|e| IntMatrix::zeros(0, ranks[graph.terminus(e)]))
            .collect();
        CellularSheaf::new(graph, ranks, vec![0; m], xi0, xi1)
    }

    /// Subsheaf with vertex stalks spanned by the columns of `bases[v]` and
    /// unchanged edge stalks.
    pub fn restrict_vertex_stalks(&self, bases: &[IntMatrix]) -> Result<Self> {
        if bases.len() != self.vertex_ranks.len()
            || bases
                .iter()
                .zip(&self.vertex_ranks)
                .any(|(b, &r)| b.rows() != r)
        {
            return Err(Error::DimensionMismatch(
                "one basis per vertex stalk".into(),
            ));
        }
        let g = &self.graph;
        let xi0 = (0..g.edge_count())
            .map(|e| &self.xi0[e] * &bases[g.origin(e)])
            .collect();
        let xi1 = (0..g.edge_count())
            .map(|e| &self.xi1[e] * &bases[g.terminus(e)])
            .collect();
        CellularSheaf::new(
            self.graph.clone(),
            bases.iter().map(IntMatrix::cols).collect(),
            self.edge_ranks.clone(),
            xi0,
            xi1,
        )
    }

    pub fn graph(&self) -> &Arc<Graph> {
        &self.graph
    }

    pub fn vertex_rank(&self, v: usize) -> usize {
        self.vertex_ranks[v]
    }

    pub fn edge_rank(&self, e: usize) -> usize {
        self.edge_ranks[e]
    }

    pub fn xi0(&self, e: usize) -> &IntMatrix {
        &self.xi0[e]
    }

    pub fn xi1(&self, e: usize) -> &IntMatrix {
        &self.xi1[e]
    }

    /// Offset of `F_v` inside `C⁰ = ⊕_v F_v`.
    pub fn vertex_offset(&self, v: usize) -> usize {
        self.vertex_ranks[..v].iter().sum()
    }

    pub fn edge_offset(&self, e: usize) -> usize {
        self.edge_ranks[..e].iter().sum()
    }

    pub fn c0_rank(&self) -> usize {
        self.vertex_ranks.iter().sum()
    }

    pub fn c1_rank(&self) -> usize {
        self.edge_ranks.iter().sum()
    }

    /// `d_F(a)_e = ξ¹_e(a_{t(e)}) - ξ⁰_e(a_{o(e)})`.
    pub fn differential(&self) -> IntMatrix {
        let g = &self.graph;
        let mut d = IntMatrix::zeros(self.c1_rank(), self.c0_rank());
        for e in 0..g.edge_count() {
            let row = self.edge_offset(e);
            let (o, t) = (g.origin(e), g.terminus(e));
            add_block(&mut d, row, self.vertex_offset(t), &self.xi1[e], false);
            add_block(&mut d, row, self.vertex_offset(o), &self.xi0[e], true);
        }
        d
    }

    /// `(H⁰, H¹)`: kernel and cokernel of `d_F`.
    pub fn cech_cohomology(&self) -> Result<(FgAbGroup, FgAbGroup)> {
        let d = self.differential();
        let h0 = subquotient(d.cols(), &kernel_basis(&d), &IntMatrix::zeros(d.cols(), 0))?;
        let h1 = FgAbGroup::quotient(&d)?;
        Ok((h0, h1))
    }
}

/// Adds (or subtracts) `block` into `m` at `(r0, c0)`.
pub(crate) fn add_block(m: &mut IntMatrix, r0: usize, c0: usize, block: &IntMatrix, negate: bool) {
    for i in 0..block.rows() {
        for j in 0..block.cols() {
            let entry = m.entry_mut(r0 + i, c0 + j);
            if negate {
                *entry -= block.get(i, j);
            } else {
                *entry += block.get(i, j);
            }
        }
    }
}

fn block_diagonal(blocks: &[IntMatrix]) -> IntMatrix {
    let rows = blocks.iter().map(IntMatrix::rows).sum();
    let cols = blocks.iter().map(IntMatrix::cols).sum();
    let mut m = IntMatrix::zeros(rows, cols);
    let (mut r, mut c) = (0, 0);
    for b in blocks {
        m.paste(r, c, b);
        r += b.rows();
        c += b.cols();
    }
    m
}

/// Morphism of cellular sheaves given stalkwise.
#[derive(Clone, Debug)]
pub struct SheafMap {
    source: Arc<CellularSheaf>,
    target: Arc<CellularSheaf>,
    vertex_maps: Vec<IntMatrix>,
    edge_maps: Vec<IntMatrix>,
}

impl SheafMap {
    /// Checks shapes and `φ_e ξ_e = ξ'_e φ_v` at both ends of every edge.
    pub fn new(
        source: Arc<CellularSheaf>,
        target: Arc<CellularSheaf>,
        vertex_maps: Vec<IntMatrix>,
        edge_maps: Vec<IntMatrix>,
    ) -> Result<Self> {
        let g = source.graph().clone();
        if target.graph().vertex_count() != g.vertex_count()
            || target.graph().edge_count() != g.edge_count()
            || vertex_maps.len() != g.vertex_count()
            || edge_maps.len() != g.edge_count()
        {
            return Err(Error::DimensionMismatch(
                "sheaves live on different graphs".into(),
            ));
        }
        for (v, m) in vertex_maps.iter().enumerate() {
            if m.rows() != target.vertex_rank(v) || m.cols() != source.vertex_rank(v) {
                return Err(Error::DimensionMismatch(format!(
                    "stalk map at vertex `{}`",
                    g.vertex_id(v)
                )));
            }
        }
        for (e, m) in edge_maps.iter().enumerate() {
            if m.rows() != target.edge_rank(e) || m.cols() != source.edge_rank(e) {
                return Err(Error::DimensionMismatch(format!(
                    "stalk map at edge `{}`",
                    g.edge(e).id
                )));
            }
            let (o, t) = (g.origin(e), g.terminus(e));
            let at_o = m * source.xi0(e) == target.xi0(e) * &vertex_maps[o];
            let at_t = m * source.xi1(e) == target.xi1(e) * &vertex_maps[t];
            if !(at_o && at_t) {
                return Err(Error::NonCommutingSheafMap(g.edge(e).id.clone()));
            }
        }
        Ok(SheafMap {
            source,
            target,
            vertex_maps,
            edge_maps,
        })
    }

    pub fn source(&self) -> &Arc<CellularSheaf> {
        &self.source
    }

    pub fn target(&self) -> &Arc<CellularSheaf> {
        &self.target
    }

    pub fn vertex_map(&self, v: usize) -> &IntMatrix {
        &self.vertex_maps[v]
    }

    pub fn edge_map(&self, e: usize) -> &IntMatrix {
        &self.edge_maps[e]
    }

    /// The map on `C⁰`.
    pub fn on_c0(&self) -> IntMatrix {
        block_diagonal(&self.vertex_maps)
    }

    /// The map on `C¹`.
    pub fn on_c1(&self) -> IntMatrix {
        block_diagonal(&self.edge_maps)
    }

    /// Induced map on `H¹`, both groups as returned by `cech_cohomology`.
    pub fn on_h1(
        &self,
        source_h1: &Arc<FgAbGroup>,
        target_h1: &Arc<FgAbGroup>,
    ) -> Result<GroupHom> {
        GroupHom::induced(source_h1, target_h1, &self.on_c1())
    }
}

/// A rank-`rank` skyscraper at `vertex`, target of a two-term complex.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Skyscraper {
    pub vertex: usize,
    pub rank: usize,
}

/// `[F -> ⊕_j v_{j*} Z^{r_j}]` in degrees 0 and 1.
#[derive(Clone, Debug)]
pub struct TwoTermSheafComplex {
    sheaf: Arc<CellularSheaf>,
    targets: Vec<Skyscraper>,
    differential: Vec<IntMatrix>,
}

impl TwoTermSheafComplex {
    pub fn new(
        sheaf: Arc<CellularSheaf>,
        targets: Vec<Skyscraper>,
        differential: Vec<IntMatrix>,
    ) -> Result<Self> {
        if targets.len() != differential.len() {
            return Err(Error::DimensionMismatch("one map per skyscraper".into()));
        }
        for (s, m) in targets.iter().zip(&differential) {
            if s.vertex >= sheaf.graph().vertex_count() {
                return Err(Error::UnknownVertex(s.vertex.to_string()));
            }
            if m.rows() != s.rank || m.cols() != sheaf.vertex_rank(s.vertex) {
                return Err(Error::DimensionMismatch(format!(
                    "skyscraper map at vertex `{}`",
                    sheaf.graph().vertex_id(s.vertex)
                )));
            }
        }
        Ok(TwoTermSheafComplex {
            sheaf,
            targets,
            differential,
        })
    }

    pub fn sheaf(&self) -> &Arc<CellularSheaf> {
        &self.sheaf
    }

    pub fn targets(&self) -> &[Skyscraper] {
        &self.targets
    }

    pub fn target_rank(&self) -> usize {
        self.targets.iter().map(|s| s.rank).sum()
    }

    /// `C⁰(F) -> C¹(F) ⊕ ⊕_j Z^{r_j}`, `a ↦ (d_F a, (φ_j a_{v_j})_j)`.
    pub fn total_differential(&self) -> IntMatrix {
        let f = &self.sheaf;
        let mut lower = IntMatrix::zeros(self.target_rank(), f.c0_rank());
        let mut row = 0;
        for (s, m) in self.targets.iter().zip(&self.differential) {
            add_block(&mut lower, row, f.vertex_offset(s.vertex), m, false);
            row += s.rank;
        }
        IntMatrix::vcat(f.c0_rank(), &[&f.differential(), &lower])
    }

    pub fn hypercohomology(&self) -> Result<(FgAbGroup, FgAbGroup)> {
        let d = self.total_differential();
        let h0 = subquotient(d.cols(), &kernel_basis(&d), &IntMatrix::zeros(d.cols(), 0))?;
        let h1 = FgAbGroup::quotient(&d)?;
        Ok((h0, h1))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::build_graph;
    use crate::linalg::GroupSummary;

    fn summary(s: &str) -> GroupSummary {
        s.parse().unwrap()
    }

    fn cycle3() -> Arc<Graph> {
        Arc::new(
            build_graph(
                &["a", "b", "c"],
                &[("x", "a", "b"), ("y", "b", "c"), ("z", "c", "a")],
            )
            .unwrap(),
        )
    }

    #[test]
    fn constant_sheaf_on_circle() {
        let f = CellularSheaf::constant(cycle3(), 1).unwrap();
        let (h0, h1) = f.cech_cohomology().unwrap();
        assert_eq!(h0.summary(), summary("Z"));
        assert_eq!(h1.summary(), summary("Z"));
    }

    #[test]
    fn constant_sheaf_on_tree() {
        let g = build_graph(&["a", "b", "c"], &[("x", "a", "b"), ("y", "a", "c")]).unwrap();
        let (h0, h1) = CellularSheaf::constant(Arc::new(g), 1)
            .unwrap()
            .cech_cohomology()
            .unwrap();
        assert_eq!(h0.summary(), summary("Z"));
        assert!(h1.is_trivial());
    }

    #[test]
    fn skyscraper_at_one_vertex() {
        let f = CellularSheaf::skyscrapers(cycle3(), vec![1, 0, 0]).unwrap();
        let (h0, h1) = f.cech_cohomology().unwrap();
        assert_eq!(h0.summary(), summary("Z"));
        assert!(h1.is_trivial());
    }

    #[test]
    fn isolated_vertices_are_rejected() {
        let g = build_graph(&["a", "b", "c"], &[("x", "a", "b")]).unwrap();
        assert!(matches!(
            CellularSheaf::constant(Arc::new(g), 1),
            Err(Error::IsolatedVertex(v)) if v == "c"
        ));
    }

    #[test]
    fn non_commuting_map_is_rejected() {
        let z = Arc::new(CellularSheaf::constant(cycle3(), 1).unwrap());
        let id = IntMatrix::identity(1);
        let two = IntMatrix::from_rows(&[vec![2]]);
        let err = SheafMap::new(
            z.clone(),
            z.clone(),
            vec![id.clone(), id.clone(), id.clone()],
            vec![id.clone(), two, id],
        );
        assert!(matches!(err, Err(Error::NonCommutingSheafMap(e)) if e == "y"));
    }

    #[test]
    fn two_term_complex_with_point_evaluation() {
        // [Z -> a_* Z] on a circle: H¹ = Z ⊕ Z / (d, ev_a) ≅ Z.
        let z = Arc::new(CellularSheaf::constant(cycle3(), 1).unwrap());
        let cx = TwoTermSheafComplex::new(
            z,
            vec![Skyscraper { vertex: 0, rank: 1 }],
            vec![IntMatrix::identity(1)],
        )
        .unwrap();
        let (h0, h1) = cx.hypercohomology().unwrap();
        assert!(h0.is_trivial());
        assert_eq!(h1.summary(), summary("Z"));
    }
}
