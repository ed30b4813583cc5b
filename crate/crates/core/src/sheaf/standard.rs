//! The sheaves `PL ⊃ Harm`, `Ω`, `Z` and the maps `diff`, `ediff`, `q`.
//!
//! Stalk coordinates:
//! - `PL_v = Z ⊕ Z^{H(v)}`: the value at `v` and one slope per half-edge at
//!   `v`, measured along the distance from `v`;
//! - `PL_e = Z²`: the function `a + bx` on the edge;
//! - `∏ ẽ_* Z` has vertex stalk `Z^{H(v)}` and edge stalk `Z`.

use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::One;

use super::{CellularSheaf, SheafMap};
use crate::error::{Error, Result};
use crate::graph::{Graph, Modulus};
use crate::linalg::{kernel_basis, solve_matrix, IntMatrix, Lattice};
use crate::report::CheckReport;

/// End `end` of edge `edge`: 0 at the origin, 1 at the terminus.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct HalfEdge {
    pub edge: usize,
    pub end: u8,
}

/// Half-edges at `v` in edge order; a loop contributes both ends.
pub fn half_edges(g: &Graph, v: usize) -> Vec<HalfEdge> {
    let mut out = Vec::new();
    for e in 0..g.edge_count() {
        if g.origin(e) == v {
            out.push(HalfEdge { edge: e, end: 0 });
        }
        if g.terminus(e) == v {
            out.push(HalfEdge { edge: e, end: 1 });
        }
    }
    out
}

fn row_selector(width: usize, pos: usize) -> IntMatrix {
    let mut m = IntMatrix::zeros(1, width);
    m.set(0, pos, BigInt::one());
    m
}

#[derive(Clone, Debug)]
pub struct StandardSheaves {
    graph: Arc<Graph>,
    half_edges: Vec<Vec<HalfEdge>>,
    /// Position of `(e, 0)` and `(e, 1)` among the half-edges at their vertex.
    positions: Vec<[usize; 2]>,
    pub pl: Arc<CellularSheaf>,
    pub harm: Arc<CellularSheaf>,
    pub omega: Arc<CellularSheaf>,
    pub constant: Arc<CellularSheaf>,
    /// `∏_e ẽ_* Z`.
    pub edge_sheaf: Arc<CellularSheaf>,
    /// `∏_v v_* Z`.
    pub vertex_sheaf: Arc<CellularSheaf>,
    /// Columns: basis of `Harm_v` inside `PL_v`.
    pub harm_basis: Vec<IntMatrix>,
    /// Columns: basis of `Ω_v` inside `Z^{H(v)}`.
    pub omega_basis: Vec<IntMatrix>,
    pub diff: SheafMap,
    pub ediff: SheafMap,
    pub ediff_harm: SheafMap,
    pub q: SheafMap,
    pub harm_inclusion: SheafMap,
}

/// Builds the standard sheaves of `g`; fails on isolated vertices.
pub fn build_standard_sheaves(g: &Graph) -> Result<StandardSheaves> {
    let graph = Arc::new(g.clone());
    let n = g.vertex_count();
    let m = g.edge_count();
    if let Some(v) = (0..n).find(|&v| g.valence(v) == 0) {
        return Err(Error::IsolatedVertex(g.vertex_id(v).to_string()));
    }
    let half: Vec<Vec<HalfEdge>> = (0..n).map(|v| half_edges(g, v)).collect();
    let mut positions = vec![[0usize; 2]; m];
    for hs in &half {
        for (j, h) in hs.iter().enumerate() {
            positions[h.edge][h.end as usize] = j;
        }
    }

    // PL
    let pl_ranks: Vec<usize> = half.iter().map(|hs| 1 + hs.len()).collect();
    let mut pl_xi0 = Vec::with_capacity(m);
    let mut pl_xi1 = Vec::with_capacity(m);
    for (e, pos) in positions.iter().enumerate() {
        let (o, t) = (g.origin(e), g.terminus(e));
        let mut x0 = IntMatrix::zeros(2, pl_ranks[o]);
        x0.set(0, 0, BigInt::one());
        x0.set(1, 1 + pos[0], BigInt::one());
        let mut x1 = IntMatrix::zeros(2, pl_ranks[t]);
        let b = 1 + pos[1];
        x1.set(0, 0, BigInt::one());
        x1.set(0, b, BigInt::one());
        x1.set(1, b, -BigInt::one());
        pl_xi0.push(x0);
        pl_xi1.push(x1);
    }
    let pl = Arc::new(CellularSheaf::new(
        graph.clone(),
        pl_ranks.clone(),
        vec![2; m],
        pl_xi0,
        pl_xi1,
    )?);

    // diff_v = -Σ b_h, ediff_v = (±b_h)
    let diff_rows: Vec<IntMatrix> = half
        .iter()
        .map(|hs| {
            let mut r = IntMatrix::zeros(1, 1 + hs.len());
            for j in 0..hs.len() {
                r.set(0, 1 + j, -BigInt::one());
            }
            r
        })
        .collect();
    let ediff_v: Vec<IntMatrix> = half
        .iter()
        .map(|hs| {
            let mut r = IntMatrix::zeros(hs.len(), 1 + hs.len());
            for (j, h) in hs.iter().enumerate() {
                let sign = if h.end == 0 {
                    BigInt::one()
                } else {
                    -BigInt::one()
                };
                r.set(j, 1 + j, sign);
            }
            r
        })
        .collect();

    let vertex_sheaf = Arc::new(CellularSheaf::skyscrapers(graph.clone(), vec![1; n])?);
    let diff = SheafMap::new(
        pl.clone(),
        vertex_sheaf.clone(),
        diff_rows.clone(),
        vec![IntMatrix::zeros(0, 2); m],
    )?;

    let edge_sheaf = Arc::new(CellularSheaf::new(
        graph.clone(),
        half.iter().map(Vec::len).collect(),
        vec![1; m],
        (0..m)
            .map(|e| row_selector(half[g.origin(e)].len(), positions[e][0]))
            .collect(),
        (0..m)
            .map(|e| row_selector(half[g.terminus(e)].len(), positions[e][1]))
            .collect(),
    )?);
    let slope = IntMatrix::from_rows(&[vec![0, 1]]);
    let ediff = SheafMap::new(
        pl.clone(),
        edge_sheaf.clone(),
        ediff_v.clone(),
        vec![slope.clone(); m],
    )?;

    let harm_basis: Vec<IntMatrix> = diff_rows.iter().map(kernel_basis).collect();
    let harm = Arc::new(pl.restrict_vertex_stalks(&harm_basis)?);
    let harm_inclusion = SheafMap::new(
        harm.clone(),
        pl.clone(),
        harm_basis.clone(),
        vec![IntMatrix::identity(2); m],
    )?;

    // Ω_v = ker of the signed sum (+1 on terminal, -1 on initial half-edges).
    let omega_basis: Vec<IntMatrix> = half
        .iter()
        .map(|hs| {
            let mut r = IntMatrix::zeros(1, hs.len());
            for (j, h) in hs.iter().enumerate() {
                let sign = if h.end == 1 {
                    BigInt::one()
                } else {
                    -BigInt::one()
                };
                r.set(0, j, sign);
            }
            kernel_basis(&r)
        })
        .collect();
    let omega = Arc::new(edge_sheaf.restrict_vertex_stalks(&omega_basis)?);
    let mut ediff_harm_v = Vec::with_capacity(n);
    for v in 0..n {
        let image = &ediff_v[v] * &harm_basis[v];
        let coords = solve_matrix(&omega_basis[v], &image).ok_or_else(|| {
            Error::violation(
                "ediff",
                format!("ediff(Harm_v) ⊄ Ω_v at `{}`", g.vertex_id(v)),
            )
        })?;
        ediff_harm_v.push(coords);
    }
    let ediff_harm = SheafMap::new(harm.clone(), omega.clone(), ediff_harm_v, vec![slope; m])?;

    let constant = Arc::new(CellularSheaf::constant(graph.clone(), 1)?);
    let mut q_v = Vec::with_capacity(n);
    for v in 0..n {
        let unit = row_selector(pl_ranks[v], 0).transpose();
        q_v.push(solve_matrix(&harm_basis[v], &unit).expect("constants are harmonic"));
    }
    let q = SheafMap::new(
        constant.clone(),
        harm.clone(),
        q_v,
        vec![IntMatrix::from_rows(&[vec![1], vec![0]]); m],
    )?;

    Ok(StandardSheaves {
        graph,
        half_edges: half,
        positions,
        pl,
        harm,
        omega,
        constant,
        edge_sheaf,
        vertex_sheaf,
        harm_basis,
        omega_basis,
        diff,
        ediff,
        ediff_harm,
        q,
        harm_inclusion,
    })
}

impl StandardSheaves {
    pub fn graph(&self) -> &Arc<Graph> {
        &self.graph
    }

    pub fn half_edges_at(&self, v: usize) -> &[HalfEdge] {
        &self.half_edges[v]
    }

    /// Position of half-edge `(e, end)` in `PL_v` (after the value slot).
    pub fn slope_index(&self, e: usize, end: u8) -> usize {
        1 + self.positions[e][end as usize]
    }

    /// `Z^V -> C⁰(PL)`: a vertex function as the PL function linear on edges.
    pub fn pl_functions(&self) -> IntMatrix {
        let g = &self.graph;
        let pl = &self.pl;
        let mut m = IntMatrix::zeros(pl.c0_rank(), g.vertex_count());
        for u in 0..g.vertex_count() {
            let off = pl.vertex_offset(u);
            m.set(off, u, BigInt::one());
            for (j, h) in self.half_edges[u].iter().enumerate() {
                let other = if h.end == 0 {
                    g.terminus(h.edge)
                } else {
                    g.origin(h.edge)
                };
                *m.entry_mut(off + 1 + j, other) += 1;
                *m.entry_mut(off + 1 + j, u) -= 1;
            }
        }
        m
    }

    /// `Z^V -> C⁰(PL)` with `diff ∘ lift = id`: at `v`, value 0 and slope
    /// `-1` on the first half-edge.
    pub fn diff_lift(&self) -> IntMatrix {
        let n = self.graph.vertex_count();
        let mut m = IntMatrix::zeros(self.pl.c0_rank(), n);
        for v in 0..n {
            m.set(self.pl.vertex_offset(v) + 1, v, -BigInt::one());
        }
        m
    }

    /// `C⁰(PL) -> Z^I`, evaluation at the modulus points.
    pub fn evaluation(&self, m: &Modulus) -> IntMatrix {
        let mut ev = IntMatrix::zeros(m.len(), self.pl.c0_rank());
        for i in 0..m.len() {
            ev.set(i, self.pl.vertex_offset(m.point(i)), BigInt::one());
        }
        ev
    }

    /// `Z^E -> C¹(Harm)`, the constant function on each edge (`q` on `C¹`).
    pub fn constant_on_edges(&self) -> IntMatrix {
        self.q.on_c1()
    }

    /// The connecting map `Z^V -> C¹(Harm)`, `c ↦ d_PL(lift c)`.
    pub fn delta_matrix(&self) -> IntMatrix {
        &self.pl.differential() * &self.diff_lift()
    }

    /// Stalkwise exactness of `0 -> Harm -> PL -> ∏ v_*Z -> 0` and
    /// `0 -> Z -> Harm -> Ω -> 0`.
    pub fn stalk_exactness(&self) -> CheckReport {
        let mut r = CheckReport::new();
        let g = &self.graph;
        for v in 0..g.vertex_count() {
            let id = g.vertex_id(v);
            let diff_v = self.diff.vertex_map(v);
            r.record(
                format!("divisor.{id}"),
                diff_v.rank() == 1
                    && Lattice::from_generators(&kernel_basis(diff_v))
                        == Lattice::from_generators(&self.harm_basis[v])
                    && Lattice::from_generators(diff_v) == Lattice::full(1),
                || "Harm_v ≠ ker diff_v or diff_v not onto".into(),
            );
            let ed = self.ediff_harm.vertex_map(v);
            let onto = Lattice::from_generators(ed) == Lattice::full(ed.rows());
            let ker_is_q = Lattice::from_generators(&kernel_basis(ed))
                == Lattice::from_generators(self.q.vertex_map(v));
            r.record(format!("dlog.{id}"), onto && ker_is_q, || {
                format!("onto Ω_v: {onto}, ker = im q: {ker_is_q}")
            });
        }
        r
    }

    /// `diff` on global sections is `□₀`; `H⁰(Harm) = ker □₀`;
    /// `H⁰(Ω) = Ha¹` and `H¹(Ω) ≅ coker d♯`.
    pub fn global_sections(&self) -> Result<CheckReport> {
        let mut r = CheckReport::new();
        let g = &self.graph;
        let cx = crate::complexes::GraphComplex::new(g);
        let f = self.pl_functions();
        r.record(
            "pl_functions_are_sections",
            (&self.pl.differential() * &f).is_zero(),
            || "d_PL ≠ 0 on vertex functions".into(),
        );
        let (h0_pl, h1_pl) = self.pl.cech_cohomology()?;
        r.record(
            "h0_pl_is_zv",
            h0_pl.free_rank() == g.vertex_count() && h0_pl.torsion_rank() == 0,
            || format!("H⁰(PL) = {h0_pl}"),
        );
        r.record("h1_pl_vanishes", h1_pl.is_trivial(), || {
            format!("H¹(PL) = {h1_pl}")
        });
        let diff_global = &self.diff.on_c0() * &f;
        r.record("diff_eq_box0", diff_global == cx.box0(), || {
            format!("diff = {diff_global}")
        });

        let values = {
            let mut m = IntMatrix::zeros(g.vertex_count(), self.harm.c0_rank());
            for v in 0..g.vertex_count() {
                let first_row = self.harm_basis[v].row(0);
                for (j, x) in first_row.into_iter().enumerate() {
                    m.set(v, self.harm.vertex_offset(v) + j, x);
                }
            }
            m
        };
        let h0_harm = &values * &kernel_basis(&self.harm.differential());
        r.record(
            "h0_harm_eq_ker_box0",
            Lattice::from_generators(&h0_harm)
                == Lattice::from_generators(&kernel_basis(&cx.box0())),
            || "H⁰(Harm) ≠ ker □₀".into(),
        );

        let mut restrict = IntMatrix::zeros(g.edge_count(), self.omega.c0_rank());
        for e in 0..g.edge_count() {
            let xi = self.omega.xi0(e);
            let off = self.omega.vertex_offset(g.origin(e));
            for j in 0..xi.cols() {
                restrict.set(e, off + j, xi.get(0, j).clone());
            }
        }
        let h0_omega = &restrict * &kernel_basis(&self.omega.differential());
        r.record(
            "h0_omega_eq_harmonic",
            Lattice::from_generators(&h0_omega)
                == Lattice::from_generators(&cx.harmonic_one_forms()),
            || "H⁰(Ω) ≠ Ha¹".into(),
        );
        let (_, h1_omega) = self.omega.cech_cohomology()?;
        let coker = crate::linalg::FgAbGroup::quotient(cx.d_adj())?;
        r.record(
            "h1_omega_eq_coker_dadj",
            h1_omega.isomorphic_to(&coker),
            || format!("H¹(Ω) = {h1_omega}, coker d♯ = {coker}"),
        );
        Ok(r)
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

    fn cycle3() -> Graph {
        build_graph(
            &["a", "b", "c"],
            &[("x", "a", "b"), ("y", "b", "c"), ("z", "c", "a")],
        )
        .unwrap()
    }

    #[test]
    fn loops_contribute_two_half_edges() {
        let g = build_graph(&["a"], &[("l", "a", "a")]).unwrap();
        assert_eq!(
            half_edges(&g, 0),
            vec![HalfEdge { edge: 0, end: 0 }, HalfEdge { edge: 0, end: 1 }]
        );
        let s = build_standard_sheaves(&g).unwrap();
        assert_eq!(s.pl.vertex_rank(0), 3);
        assert!(s.global_sections().unwrap().passed());
    }

    #[test]
    fn circle_sections() {
        let s = build_standard_sheaves(&cycle3()).unwrap();
        let r = s.global_sections().unwrap();
        assert!(r.passed(), "{r:?}");
        assert!(s.stalk_exactness().passed());
        let (h0, _) = s.harm.cech_cohomology().unwrap();
        assert_eq!(h0.summary(), summary("Z"));
        let (h0, h1) = s.omega.cech_cohomology().unwrap();
        assert_eq!(h0.summary(), summary("Z"));
        assert_eq!(h1.summary(), summary("Z"));
    }

    #[test]
    fn diff_lift_is_a_section() {
        let s = build_standard_sheaves(&cycle3()).unwrap();
        assert_eq!(&s.diff.on_c0() * &s.diff_lift(), IntMatrix::identity(3));
    }

    #[test]
    fn isolated_vertex() {
        let g = build_graph(&["a", "b"], &[("l", "a", "a")]).unwrap();
        assert!(matches!(
            build_standard_sheaves(&g),
            Err(Error::IsolatedVertex(_))
        ));
    }
}
