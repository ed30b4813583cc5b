//! Chain and cochain complexes of a finite graph.
//!
//! With the standard bases the pairings on `C_p` and `C^p` are the dot
//! product and the identifications `C_p = C^p` are identities, so
//! `∂♯ = ∂ᵀ`, `d = ∂ᵀ` and `d♯ = ∂`.

use num_bigint::BigInt;
use num_traits::{One, Signed};

use crate::graph::Graph;
use crate::linalg::{kernel_basis, IntMatrix, Lattice};
use crate::report::CheckReport;

#[derive(Clone, Debug)]
pub struct GraphComplex {
    graph: Graph,
    boundary: IntMatrix,
    adjoint_boundary: IntMatrix,
    d: IntMatrix,
    d_adj: IntMatrix,
    laplacian0: IntMatrix,
    laplacian1: IntMatrix,
}

/// Incidence matrix `|V| x |E|` with column `e` equal to `t(e) - o(e)`.
pub fn incidence_matrix(g: &Graph) -> IntMatrix {
    let mut m = IntMatrix::zeros(g.vertex_count(), g.edge_count());
    for (k, e) in g.edges().iter().enumerate() {
        if e.is_loop() {
            continue;
        }
        m.set(e.terminus, k, BigInt::one());
        m.set(e.origin, k, -BigInt::one());
    }
    m
}

impl GraphComplex {
    pub fn new(graph: &Graph) -> Self {
        let boundary = incidence_matrix(graph);
        // ∂♯(v) = Σ_{t(e)=v} e − Σ_{o(e)=v} e, i.e. the transpose of ∂.
        let mut adjoint_boundary = IntMatrix::zeros(graph.edge_count(), graph.vertex_count());
        for (k, e) in graph.edges().iter().enumerate() {
            *adjoint_boundary.entry_mut(k, e.terminus) += 1;
            *adjoint_boundary.entry_mut(k, e.origin) -= 1;
        }
        let d = boundary.transpose();
        let d_adj = adjoint_boundary.transpose();
        let laplacian0 = &boundary * &adjoint_boundary;
        let laplacian1 = &adjoint_boundary * &boundary;
        GraphComplex {
            graph: graph.clone(),
            boundary,
            adjoint_boundary,
            d,
            d_adj,
            laplacian0,
            laplacian1,
        }
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    /// `∂ : C_1 -> C_0`.
    pub fn boundary(&self) -> &IntMatrix {
        &self.boundary
    }

    /// `∂♯ : C_0 -> C_1`.
    pub fn adjoint_boundary(&self) -> &IntMatrix {
        &self.adjoint_boundary
    }

    /// `d : C^0 -> C^1`.
    pub fn d(&self) -> &IntMatrix {
        &self.d
    }

    /// `d♯ : C^1 -> C^0`.
    pub fn d_adj(&self) -> &IntMatrix {
        &self.d_adj
    }

    /// `Δ₀ = ∂ ∂♯`.
    pub fn laplacian0(&self) -> &IntMatrix {
        &self.laplacian0
    }

    /// `Δ₁ = ∂♯ ∂`.
    pub fn laplacian1(&self) -> &IntMatrix {
        &self.laplacian1
    }

    /// `□₀ = d♯ d`, the transpose of `Δ₀`.
    pub fn box0(&self) -> IntMatrix {
        &self.d_adj * &self.d
    }

    /// `□₁ = d d♯`.
    pub fn box1(&self) -> IntMatrix {
        &self.d * &self.d_adj
    }

    /// Saturated basis of `Ha¹ = ker d♯`.
    pub fn harmonic_one_forms(&self) -> IntMatrix {
        kernel_basis(&self.d_adj)
    }

    /// Saturated basis of `H_1 = ker ∂`.
    pub fn cycle_space(&self) -> IntMatrix {
        kernel_basis(&self.boundary)
    }

    /// First Betti number `|E| - |V| + #components`.
    pub fn betti1(&self) -> usize {
        self.graph.edge_count() + self.graph.component_count() - self.graph.vertex_count()
    }

    /// Edges `E'` with `C_1 = im ∂♯ ⊕ Z[E']`.
    ///
    /// `∂♯` restricted to a spanning forest is injective with saturated
    /// image, so the edges off the forest complete any basis of `im ∂♯`.
    pub fn image_complement(&self) -> Vec<usize> {
        let forest = self.graph.spanning_forest();
        let mut in_forest = vec![false; self.graph.edge_count()];
        for &e in &forest.edges {
            in_forest[e] = true;
        }
        (0..self.graph.edge_count())
            .filter(|&e| !in_forest[e])
            .collect()
    }

    /// Whether `[basis of im ∂♯ | unit vectors of subset]` is a basis of `Z^E`.
    pub fn completes_image(&self, subset: &[usize]) -> bool {
        let image = Lattice::from_generators(&self.adjoint_boundary);
        let units = IntMatrix::identity(self.graph.edge_count()).select_columns(subset);
        let m = IntMatrix::hcat(self.graph.edge_count(), &[image.basis(), &units]);
        m.is_square() && m.det().abs().is_one()
    }

    /// Checks of the finite Hodge decomposition, one entry per clause.
    pub fn hodge_checks(&self) -> CheckReport {
        let mut r = CheckReport::new();
        let ker = |m: &IntMatrix| Lattice::from_generators(&kernel_basis(m));
        let span = |m: &IntMatrix| Lattice::from_generators(m);

        let h0 = ker(&self.d);
        r.record("ker_box0_eq_ker_d", ker(&self.box0()) == h0, || {
            format!(
                "ker □₀ = {} vs ker d = {}",
                ker(&self.box0()).basis(),
                h0.basis()
            )
        });
        let ha1 = ker(&self.d_adj);
        r.record("ker_box1_eq_harmonic", ker(&self.box1()) == ha1, || {
            format!(
                "ker □₁ = {} vs Ha¹ = {}",
                ker(&self.box1()).basis(),
                ha1.basis()
            )
        });
        let h1 = ker(&self.boundary);
        r.record("cycles_eq_harmonic", h1 == ha1, || {
            format!("H₁ = {} vs Ha¹ = {}", h1.basis(), ha1.basis())
        });

        let im_dadj = span(&self.d_adj);
        r.record(
            "im_dadj_perp_eq_h0",
            im_dadj.orthogonal_complement() == h0,
            || format!("(im d♯)⊥ = {}", im_dadj.orthogonal_complement().basis()),
        );
        r.record(
            "h0_perp_eq_im_dadj",
            h0.orthogonal_complement() == im_dadj,
            || format!("H⁰⊥ = {}", h0.orthogonal_complement().basis()),
        );
        let im_d = span(&self.d);
        r.record(
            "im_d_perp_eq_harmonic",
            im_d.orthogonal_complement() == ha1,
            || format!("(im d)⊥ = {}", im_d.orthogonal_complement().basis()),
        );
        r.record(
            "harmonic_perp_eq_im_d",
            ha1.orthogonal_complement() == im_d,
            || format!("Ha¹⊥ = {}", ha1.orthogonal_complement().basis()),
        );

        let complement = self.image_complement();
        r.record(
            "image_complement",
            self.completes_image(&complement),
            || format!("E' = {complement:?}"),
        );

        if self.graph.is_connected() {
            let n = self.graph.vertex_count();
            let degree_zero =
                Lattice::from_generators(&IntMatrix::from_columns(n, &[vec![BigInt::one(); n]]))
                    .orthogonal_complement();
            r.record("im_dadj_eq_degree_zero", im_dadj == degree_zero, || {
                format!("im d♯ = {}", im_dadj.basis())
            });
            let coker = crate::linalg::FgAbGroup::quotient(&self.d_adj)
                .expect("quotient of the ambient lattice");
            r.record(
                "coker_dadj_is_z",
                coker.free_rank() == 1 && coker.invariant_factors().is_empty(),
                || format!("coker d♯ = {}", coker.summary()),
            );
        } else {
            r.skip("im_dadj_eq_degree_zero", "graph not connected");
            r.skip("coker_dadj_is_z", "graph not connected");
        }
        r
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::build_graph;
    use crate::linalg::{hermite_basis, int_vec};
    use crate::report::Status;

    fn cycle3() -> Graph {
        build_graph(
            &["a", "b", "c"],
            &[("x", "a", "b"), ("y", "b", "c"), ("z", "c", "a")],
        )
        .unwrap()
    }

    fn tree() -> Graph {
        build_graph(
            &["a", "b", "c", "d"],
            &[("x", "a", "b"), ("y", "b", "c"), ("z", "b", "d")],
        )
        .unwrap()
    }

    fn loop_graph() -> Graph {
        build_graph(&["u"], &[("l", "u", "u")]).unwrap()
    }

    fn banana() -> Graph {
        build_graph(&["u", "v"], &[("e1", "u", "v"), ("e2", "u", "v")]).unwrap()
    }

    fn single_column(m: &IntMatrix) -> Vec<i64> {
        assert_eq!(m.cols(), 1);
        m.column(0)
            .iter()
            .map(|x| i64::try_from(x).unwrap())
            .collect()
    }

    #[test]
    fn harmonic_forms_of_cycle() {
        let c = GraphComplex::new(&cycle3());
        let w = single_column(&c.harmonic_one_forms());
        assert!(w == vec![1, 1, 1] || w == vec![-1, -1, -1]);
        assert_eq!(c.betti1(), 1);
    }

    #[test]
    fn harmonic_forms_small_cases() {
        let edge = build_graph(&["u", "v"], &[("e", "u", "v")]).unwrap();
        assert_eq!(GraphComplex::new(&edge).harmonic_one_forms().cols(), 0);
        let w = single_column(&GraphComplex::new(&loop_graph()).harmonic_one_forms());
        assert_eq!(w.iter().map(|x| x.abs()).collect::<Vec<_>>(), vec![1]);
    }

    #[test]
    fn cycle_spaces() {
        let w = single_column(&GraphComplex::new(&cycle3()).cycle_space());
        assert!(w == vec![1, 1, 1] || w == vec![-1, -1, -1]);
        assert_eq!(GraphComplex::new(&tree()).cycle_space().cols(), 0);
        let b = single_column(&GraphComplex::new(&banana()).cycle_space());
        assert!(b == vec![1, -1] || b == vec![-1, 1]);
    }

    #[test]
    fn image_complements() {
        let c = GraphComplex::new(&cycle3());
        assert_eq!(c.image_complement().len(), 1);
        assert!(c.completes_image(&c.image_complement()));
        assert!(GraphComplex::new(&tree()).image_complement().is_empty());
        assert_eq!(GraphComplex::new(&loop_graph()).image_complement(), vec![0]);
        assert!(GraphComplex::new(&loop_graph()).completes_image(&[0]));
    }

    #[test]
    fn hodge_clauses() {
        let r = GraphComplex::new(&cycle3()).hodge_checks();
        assert!(r.passed(), "{r:?}");
        let two = build_graph(
            &["a", "b", "c", "d", "e", "f"],
            &[
                ("x", "a", "b"),
                ("y", "b", "c"),
                ("z", "c", "a"),
                ("p", "d", "e"),
                ("q", "e", "f"),
                ("r", "f", "d"),
            ],
        )
        .unwrap();
        let r = GraphComplex::new(&two).hodge_checks();
        assert!(r.passed());
        assert_eq!(r.get("coker_dadj_is_z").unwrap().status, Status::Skipped);
        let lc = GraphComplex::new(&loop_graph());
        assert!(lc.hodge_checks().passed());
        assert_eq!(kernel_basis(&lc.box1()).cols(), 1);
    }

    #[test]
    fn adjoint_identities() {
        for g in [cycle3(), tree(), loop_graph(), banana()] {
            let c = GraphComplex::new(&g);
            assert_eq!(c.boundary(), c.d_adj());
            assert_eq!(c.adjoint_boundary(), c.d());
            assert!(c.laplacian0().is_symmetric());
            let ones = vec![BigInt::one(); g.vertex_count()];
            assert!(c
                .laplacian0()
                .mul_vec(&ones)
                .iter()
                .all(|x| x == &BigInt::from(0)));
            // Orthogonality of im ∂♯ and ker d♯.
            assert!((&c.adjoint_boundary().transpose() * &c.harmonic_one_forms()).is_zero());
            assert!((&c.boundary().transpose() * &kernel_basis(c.d())).is_zero());
        }
    }

    #[test]
    fn laplacian_ignores_orientation() {
        let g = cycle3();
        let r = g.reverse_edges(&["x", "z"]).unwrap();
        assert_eq!(
            GraphComplex::new(&g).laplacian0(),
            GraphComplex::new(&r).laplacian0()
        );
        let all = g.reverse_edges(&["x", "y", "z"]).unwrap();
        assert_eq!(
            GraphComplex::new(&g).laplacian0(),
            GraphComplex::new(&all).laplacian0()
        );
    }

    #[test]
    fn cycle_and_harmonic_lattices_coincide() {
        let c = GraphComplex::new(&banana());
        assert_eq!(
            hermite_basis(&c.cycle_space()),
            hermite_basis(&c.harmonic_one_forms())
        );
        assert_eq!(c.laplacian0().row(0), int_vec(&[2, -2]));
    }
}
