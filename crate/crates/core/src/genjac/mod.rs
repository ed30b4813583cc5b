//! Ray class groups, generalized Jacobians and Picard groups with modulus.

pub mod abstract_engine;
pub mod duality;
pub mod sequences;

use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::complexes::GraphComplex;
use crate::error::{Error, Result};
use crate::graph::{extend_with_modulus, ExtendedGraph, Graph, Modulus};
use crate::jacobian::JacobianContext;
use crate::linalg::{
    solve_integer, solve_matrix, subquotient, FgAbGroup, GroupElement, GroupHom, IntMatrix,
    IntVector,
};
use crate::report::CheckReport;

/// `|I| x |V|` matrix of `r = ρᵀ`: entry `(i, w_i)` is 1.
pub fn modulus_restriction(m: &Modulus, vertex_count: usize) -> IntMatrix {
    let mut r = IntMatrix::zeros(m.len(), vertex_count);
    for i in 0..m.len() {
        r.set(i, m.point(i), BigInt::one());
    }
    r
}

/// Everything attached to a connected graph with a finite modulus.
///
/// Coordinates: `Cl⁰_m` lives on `{v - v₀ : v ≠ v₀}` followed by `I`;
/// `C¹(Γ_m) = Z^E ⊕ Z^I` in the edge order of the extended graph; `J_m`
/// is presented on the dual basis of the harmonic basis `W_m` of `Γ_m`.
#[derive(Clone, Debug)]
pub struct ModulusContext {
    base: JacobianContext,
    modulus: Modulus,
    extended: ExtendedGraph,
    extended_complex: GraphComplex,
    harmonic_m: IntMatrix,
    cl0m: Arc<FgAbGroup>,
    jm: Arc<FgAbGroup>,
    pm: Arc<FgAbGroup>,
    clhat0m: Arc<FgAbGroup>,
}

impl ModulusContext {
    pub fn new(g: &Graph, m: &Modulus) -> Result<Self> {
        let base = JacobianContext::new(g)?;
        Self::from_base(base, m)
    }

    pub fn from_base(base: JacobianContext, m: &Modulus) -> Result<Self> {
        let g = base.graph().clone();
        let n = g.vertex_count();
        let e = g.edge_count();
        let ni = m.len();
        if m.points().iter().any(|&p| p >= n) {
            return Err(Error::UnknownVertex(
                "modulus point outside the graph".into(),
            ));
        }
        let extended = extend_with_modulus(&g, m)?;
        let extended_complex = GraphComplex::new(&extended.graph);
        let harmonic_m = extended_complex.harmonic_one_forms();
        let r = modulus_restriction(m, n);
        let lap = base.complex().laplacian0();

        // Cl⁰_m: relations (Δ₀ v, I(v)) written on {v - v₀} ∪ I.
        let mut rel = IntMatrix::zeros(n - 1 + ni, n);
        for v in 0..n {
            for u in 1..n {
                rel.set(u - 1, v, lap.get(u, v).clone());
            }
            for i in m.indices_at(v) {
                rel.set(n - 1 + i, v, BigInt::one());
            }
        }
        let cl0m = FgAbGroup::quotient(&rel)?;

        let jstar_k = pad_rows(base.cycles(), ni);
        let jm = FgAbGroup::quotient(&(&harmonic_m.transpose() * &jstar_k))?;

        let jshriek_w = pad_rows(base.harmonic(), ni);
        let pm = FgAbGroup::quotient(&IntMatrix::hcat(
            e + ni,
            &[&jshriek_w, extended_complex.d()],
        ))?;

        let numerator = IntMatrix::block_diag(base.complex().d_adj(), &IntMatrix::identity(ni));
        let relations = IntMatrix::vcat(n, &[&base.complex().box0(), &r]);
        let clhat0m = subquotient(n + ni, &numerator, &relations)?;

        Ok(ModulusContext {
            base,
            modulus: m.clone(),
            extended,
            extended_complex,
            harmonic_m,
            cl0m: Arc::new(cl0m),
            jm: Arc::new(jm),
            pm: Arc::new(pm),
            clhat0m: Arc::new(clhat0m),
        })
    }

    pub fn base(&self) -> &JacobianContext {
        &self.base
    }

    pub fn graph(&self) -> &Graph {
        self.base.graph()
    }

    pub fn modulus(&self) -> &Modulus {
        &self.modulus
    }

    pub fn extended(&self) -> &ExtendedGraph {
        &self.extended
    }

    pub fn extended_complex(&self) -> &GraphComplex {
        &self.extended_complex
    }

    /// Basis `W_m` of `Ha¹(Γ_m)`.
    pub fn harmonic_m(&self) -> &IntMatrix {
        &self.harmonic_m
    }

    pub fn cl0m(&self) -> &Arc<FgAbGroup> {
        &self.cl0m
    }

    pub fn jm(&self) -> &Arc<FgAbGroup> {
        &self.jm
    }

    pub fn pm(&self) -> &Arc<FgAbGroup> {
        &self.pm
    }

    pub fn clhat0m(&self) -> &Arc<FgAbGroup> {
        &self.clhat0m
    }

    fn vertex_count(&self) -> usize {
        self.graph().vertex_count()
    }

    fn edge_count(&self) -> usize {
        self.graph().edge_count()
    }

    /// `r = ρᵀ : Z^V -> Z^I`.
    pub fn restriction(&self) -> IntMatrix {
        modulus_restriction(&self.modulus, self.vertex_count())
    }

    /// `Cl_m = (Z[V] ⊕ Z[I]) / Prin_m`.
    pub fn clm(&self) -> FgAbGroup {
        let lap = self.base.complex().laplacian0();
        let rho_adj = self.restriction();
        FgAbGroup::quotient(&IntMatrix::vcat(self.vertex_count(), &[lap, &rho_adj]))
            .expect("quotient of Z^V ⊕ Z^I")
    }

    /// `Ĉl_m = (Z^V ⊕ Z^I) / P̂rin_m`.
    pub fn clhatm(&self) -> FgAbGroup {
        let box0 = self.base.complex().box0();
        FgAbGroup::quotient(&IntMatrix::vcat(
            self.vertex_count(),
            &[&box0, &self.restriction()],
        ))
        .expect("quotient of Z^V ⊕ Z^I")
    }

    /// `d_m : C⁰(Γ_m) -> C¹(Γ_m)`, `(f, a) ↦ (df, ρᵀf - a)`.
    pub fn d_m(&self) -> &IntMatrix {
        self.extended_complex.d()
    }

    /// `j_! W`: the harmonic basis of `Γ` extended by zero.
    pub fn jshriek_harmonic(&self) -> IntMatrix {
        pad_rows(self.base.harmonic(), self.modulus.len())
    }

    /// Coordinates of `(D, k) ∈ Div⁰_m` in the ambient of `Cl⁰_m`.
    pub fn divisor_coords(&self, divisor: &[BigInt], k: &[BigInt]) -> Result<IntVector> {
        if k.len() != self.modulus.len() {
            return Err(Error::DimensionMismatch(
                "one coefficient per modulus index".into(),
            ));
        }
        let mut c = self.base.degree_zero_coords(divisor)?;
        c.extend_from_slice(k);
        Ok(c)
    }

    /// `ε_i`: the row of `W_m` at the edge `e_i`.
    pub fn epsilon(&self, i: usize) -> IntVector {
        self.harmonic_m.row(self.edge_count() + i)
    }

    /// Matrix of `AJ̃_m` on the ambient of `Cl⁰_m`.
    pub fn abel_jacobi_matrix(&self) -> IntMatrix {
        let n = self.vertex_count();
        let ni = self.modulus.len();
        let wt = self.harmonic_m.transpose();
        let mut cols = Vec::with_capacity(n - 1 + ni);
        for v in 1..n {
            let mut d = vec![BigInt::zero(); n];
            d[v] = BigInt::one();
            d[0] = -BigInt::one();
            let gamma = self.base.chain_with_boundary(&d).expect("connected graph");
            cols.push(wt.mul_vec(&pad_vec(&gamma, ni)));
        }
        for i in 0..ni {
            cols.push(self.epsilon(i));
        }
        IntMatrix::from_columns(wt.rows(), &cols)
    }

    /// `AJ_m(D, k)`, the class of `W_mᵀ (j_*γ_D + Σ k_i e_i)`.
    pub fn abel_jacobi_m(&self, divisor: &[BigInt], k: &[BigInt]) -> Result<GroupElement> {
        if k.len() != self.modulus.len() {
            return Err(Error::DimensionMismatch(
                "one coefficient per modulus index".into(),
            ));
        }
        let gamma = self.base.chain_with_boundary(divisor)?;
        let mut chain = gamma;
        chain.extend_from_slice(k);
        self.jm
            .project(&self.harmonic_m.transpose().mul_vec(&chain))
    }

    pub fn abel_jacobi_hom(&self) -> Result<GroupHom> {
        GroupHom::induced(&self.cl0m, &self.jm, &self.abel_jacobi_matrix())
    }

    /// `AJ_m`, checked to be an isomorphism.
    pub fn verify_abel_m(&self) -> Result<GroupHom> {
        let aj = self.abel_jacobi_hom()?;
        if !aj.is_isomorphism() {
            return Err(Error::violation(
                "abel_m",
                format!("AJ_m: {} -> {} is not an isomorphism", self.cl0m, self.jm),
            ));
        }
        if self.jm.free_rank() + 1 != self.modulus.len() {
            return Err(Error::violation(
                "jm_free_rank",
                format!(
                    "free rank {} with |I| = {}",
                    self.jm.free_rank(),
                    self.modulus.len()
                ),
            ));
        }
        Ok(aj)
    }

    /// `ι_m : Cl⁰_m -> Ĉl⁰_m`.
    pub fn iota_m(&self) -> Result<GroupHom> {
        let n = self.vertex_count();
        let ni = self.modulus.len();
        let mut m = IntMatrix::zeros(n + ni, n - 1 + ni);
        for v in 1..n {
            m.set(v, v - 1, BigInt::one());
            m.set(0, v - 1, -BigInt::one());
        }
        for i in 0..ni {
            m.set(n + i, n - 1 + i, BigInt::one());
        }
        GroupHom::induced(&self.cl0m, &self.clhat0m, &m)
    }

    /// `χ_m : P_m -> Ĉl⁰_m`, induced by `d♯ ⊕ id`.
    pub fn chi_m(&self) -> Result<GroupHom> {
        let m = IntMatrix::block_diag(
            self.base.complex().d_adj(),
            &IntMatrix::identity(self.modulus.len()),
        );
        GroupHom::induced(&self.pm, &self.clhat0m, &m)
    }

    /// `ζ_m : J_m -> P_m`: `λ ↦` class of any `ω` with `W_mᵀ ω = λ`.
    pub fn zeta_m(&self) -> Result<GroupHom> {
        let k = self.harmonic_m.cols();
        let lifts = solve_matrix(&self.harmonic_m.transpose(), &IntMatrix::identity(k))
            .ok_or_else(|| Error::violation("zeta_m", "W_mᵀ is not surjective"))?;
        GroupHom::induced(&self.jm, &self.pm, &lifts)
    }

    /// `(P_m, χ_m, ζ_m)` after checking that both maps are isomorphisms.
    pub fn generalized_picard(&self) -> Result<(Arc<FgAbGroup>, GroupHom, GroupHom)> {
        let chi = self.chi_m()?;
        let zeta = self.zeta_m()?;
        if !chi.is_isomorphism() {
            return Err(Error::violation("chi_m_iso", "χ_m is not an isomorphism"));
        }
        if !zeta.is_isomorphism() {
            return Err(Error::violation("zeta_m_iso", "ζ_m is not an isomorphism"));
        }
        Ok((self.pm.clone(), chi, zeta))
    }

    /// `ι_m = χ_m ∘ ζ_m ∘ AJ_m` with every arrow an isomorphism.
    pub fn verify_diagram_m(&self) -> CheckReport {
        let mut r = CheckReport::new();
        let Some(aj) = r.record_result("aj_m_iso", self.verify_abel_m()) else {
            return r;
        };
        let Some((_, chi, zeta)) = r.record_result("picard_m_maps", self.generalized_picard())
        else {
            return r;
        };
        let Some(iota) = r.record_result("iota_m", self.iota_m()) else {
            return r;
        };
        r.record("iota_m_iso", iota.is_isomorphism(), || {
            "ι_m not bijective".into()
        });
        match zeta.compose(&aj).and_then(|za| chi.compose(&za)) {
            Ok(composite) => r.record("chi_zeta_aj_eq_iota", composite.equals(&iota), || {
                format!(
                    "differs on generator {:?}",
                    composite.first_difference(&iota)
                )
            }),
            Err(e) => r.fail("chi_zeta_aj_eq_iota", e.to_string()),
        }
        r
    }

    /// Factors an `m`-harmonic map `(f, g)` into `A` through `Cl_m`.
    pub fn universal_factorization(
        &self,
        target: &Arc<FgAbGroup>,
        f: &[GroupElement],
        g: &[GroupElement],
    ) -> Result<GroupHom> {
        let n = self.vertex_count();
        let ni = self.modulus.len();
        if f.len() != n || g.len() != ni {
            return Err(Error::DimensionMismatch("values on V and on I".into()));
        }
        let box0 = self.base.complex().box0();
        for v in 0..n {
            let mut acc = target.zero();
            for (u, fu) in f.iter().enumerate() {
                acc = target.add(&acc, &target.scale(box0.get(v, u), fu));
            }
            for i in self.modulus.indices_at(v) {
                acc = target.add(&acc, &g[i]);
            }
            if !acc.is_zero() {
                return Err(Error::NotHarmonic(self.graph().vertex_id(v).to_string()));
            }
        }
        let clm = Arc::new(self.clm());
        let images: Vec<IntVector> = f.iter().chain(g).map(|x| target.lift(x)).collect();
        GroupHom::from_generators(
            &clm,
            target,
            &IntMatrix::identity(n + ni),
            &IntMatrix::from_columns(target.ambient_rank(), &images),
        )
    }

    /// Solves `W_m T = j_! W`.
    pub fn harmonic_inclusion(&self) -> Result<IntMatrix> {
        solve_matrix(&self.harmonic_m, &self.jshriek_harmonic())
            .ok_or_else(|| Error::violation("harmonic_inclusion", "j_! Ha¹ ⊄ Ha¹(Γ_m)"))
    }

    /// Whether `ω ∈ C¹(Γ_m)` is `m`-harmonic, i.e. lies in `Ha¹(Γ_m)`.
    pub fn is_harmonic_m(&self, omega: &[BigInt]) -> bool {
        solve_integer(&self.harmonic_m, omega).is_some()
    }
}

/// Appends `extra` zero rows.
pub(crate) fn pad_rows(m: &IntMatrix, extra: usize) -> IntMatrix {
    IntMatrix::vcat(m.cols(), &[m, &IntMatrix::zeros(extra, m.cols())])
}

pub(crate) fn pad_vec(v: &[BigInt], extra: usize) -> IntVector {
    let mut out = v.to_vec();
    out.resize(v.len() + extra, BigInt::zero());
    out
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::graph::build_graph;
    use crate::linalg::{int_vec, GroupSummary};

    pub(crate) fn triangle() -> Graph {
        build_graph(
            &["w1", "w2", "v"],
            &[("g", "w1", "w2"), ("h", "w2", "v"), ("f", "v", "w1")],
        )
        .unwrap()
    }

    pub(crate) fn figure_one() -> ModulusContext {
        let g = triangle();
        let m = Modulus::new(&g, &["w1", "w2"]).unwrap();
        ModulusContext::new(&g, &m).unwrap()
    }

    fn summary(s: &str) -> GroupSummary {
        s.parse().unwrap()
    }

    #[test]
    fn figure_one_groups() {
        let ctx = figure_one();
        for grp in [ctx.cl0m(), ctx.jm(), ctx.pm(), ctx.clhat0m()] {
            assert_eq!(grp.summary(), summary("Z"));
        }
        assert!(ctx.verify_abel_m().unwrap().is_isomorphism());
    }

    #[test]
    fn figure_one_relation() {
        let ctx = figure_one();
        // Prin_m(2 w1 + v) = (3 w1 - 3 w2, 2 i₁).
        let rel = ctx
            .divisor_coords(&int_vec(&[3, -3, 0]), &int_vec(&[2, 0]))
            .unwrap();
        assert!(ctx.cl0m().project(&rel).unwrap().is_zero());
        let a = ctx
            .abel_jacobi_m(&int_vec(&[1, -1, 0]), &int_vec(&[0, 0]))
            .unwrap();
        let b = ctx
            .abel_jacobi_m(&int_vec(&[0, 0, 0]), &int_vec(&[1, 0]))
            .unwrap();
        let jm = ctx.jm();
        assert_eq!(
            jm.scale(&BigInt::from(3), &a),
            jm.neg(&jm.scale(&BigInt::from(2), &b))
        );
    }

    #[test]
    fn abel_m_trivial_inputs() {
        let ctx = figure_one();
        assert!(ctx
            .abel_jacobi_m(&int_vec(&[0, 0, 0]), &int_vec(&[0, 0]))
            .unwrap()
            .is_zero());
        let lap = ctx.base().complex().laplacian0();
        for v in 0..3 {
            let k: IntVector = (0..2)
                .map(|i| BigInt::from(i64::from(ctx.modulus().point(i) == v)))
                .collect();
            assert!(ctx.abel_jacobi_m(&lap.column(v), &k).unwrap().is_zero());
        }
        assert!(matches!(
            ctx.abel_jacobi_m(&int_vec(&[1, 0, 0]), &int_vec(&[0, 0])),
            Err(Error::NonZeroDegree(_))
        ));
    }

    #[test]
    fn single_point_modulus() {
        let g = triangle();
        let m = Modulus::new(&g, &["w1"]).unwrap();
        let ctx = ModulusContext::new(&g, &m).unwrap();
        assert_eq!(ctx.cl0m().summary(), summary("Z/3"));
        assert_eq!(ctx.jm().summary(), summary("Z/3"));
        assert_eq!(ctx.pm().summary(), summary("Z/3"));
        assert!(ctx.verify_diagram_m().passed());
    }

    #[test]
    fn banana_both_ends() {
        let g = build_graph(&["u", "v"], &[("e1", "u", "v"), ("e2", "u", "v")]).unwrap();
        let m = Modulus::new(&g, &["u", "v"]).unwrap();
        let ctx = ModulusContext::new(&g, &m).unwrap();
        assert_eq!(ctx.cl0m().summary(), summary("Z"));
    }

    #[test]
    fn tree_with_two_leaves() {
        let g = build_graph(&["a", "b", "c"], &[("x", "a", "b"), ("y", "b", "c")]).unwrap();
        let m = Modulus::new(&g, &["a", "c"]).unwrap();
        let ctx = ModulusContext::new(&g, &m).unwrap();
        assert_eq!(ctx.jm().summary(), summary("Z"));
        assert_eq!(ctx.pm().summary(), summary("Z"));
        assert!(ctx.verify_diagram_m().passed());
    }

    #[test]
    fn diagram_commutes_for_repeated_points() {
        let g = triangle();
        for pts in [
            vec!["v", "v"],
            vec!["w1", "w1", "w2"],
            vec!["w1", "w2", "v", "v"],
        ] {
            let m = Modulus::new(&g, &pts).unwrap();
            let ctx = ModulusContext::new(&g, &m).unwrap();
            let r = ctx.verify_diagram_m();
            assert!(r.passed(), "{pts:?}: {r:?}");
            assert_eq!(ctx.jm().free_rank(), pts.len() - 1);
        }
    }

    #[test]
    fn m_harmonic_universal_property() {
        let ctx = figure_one();
        let z = Arc::new(FgAbGroup::free(1));
        let el = |x: i64| z.element(&int_vec(&[x]));
        let zero_f = vec![el(0), el(0), el(0)];
        assert!(ctx
            .universal_factorization(&z, &zero_f, &[el(0), el(0)])
            .is_ok());
        // □₀ f = (2, -1, -1) is nonzero at v, which carries no modulus point.
        let f = vec![el(1), el(0), el(0)];
        assert!(matches!(
            ctx.universal_factorization(&z, &f, &[el(-2), el(1)]),
            Err(Error::NotHarmonic(_))
        ));
        // f = 1 constant: □₀ f = 0, so g = 0.
        let ones = vec![el(1), el(1), el(1)];
        let h = ctx
            .universal_factorization(&z, &ones, &[el(0), el(0)])
            .unwrap();
        assert_eq!(h.apply_ambient(&int_vec(&[1, 0, 0, 0, 0])).unwrap(), el(1));
    }

    #[test]
    fn orientation_invariance() {
        let g = triangle();
        let r = g.reverse_edges(&["g", "f"]).unwrap();
        let m = Modulus::new(&g, &["w1", "v", "v"]).unwrap();
        let a = ModulusContext::new(&g, &m).unwrap();
        let b = ModulusContext::new(&r, &m).unwrap();
        assert_eq!(a.jm().summary(), b.jm().summary());
        assert_eq!(a.cl0m().summary(), b.cl0m().summary());
        assert_eq!(a.pm().summary(), b.pm().summary());
    }
}
