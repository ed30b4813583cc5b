//! Class groups, the Jacobian and the Picard group of a connected graph.

use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::complexes::GraphComplex;
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::linalg::{
    solve_integer, solve_matrix, FgAbGroup, GroupElement, GroupHom, IntMatrix, IntVector,
};
use crate::report::CheckReport;

/// Reduces a rational into `[0, 1)`.
pub fn mod_one(x: BigRational) -> BigRational {
    let f = x.floor();
    x - f
}

/// Sum of the coefficients.
pub fn degree(divisor: &[BigInt]) -> BigInt {
    divisor.iter().sum()
}

/// Groups and matrices of the empty-modulus theory.
///
/// `Cl⁰` lives on the basis `{v - v₀ : v ≠ v₀}` where `v₀` is the first
/// vertex. `J` is presented on the dual basis of the harmonic basis `W`.
#[derive(Clone, Debug)]
pub struct JacobianContext {
    complex: GraphComplex,
    harmonic: IntMatrix,
    cycles: IntMatrix,
    cl0: Arc<FgAbGroup>,
    jac: Arc<FgAbGroup>,
    pic: Arc<FgAbGroup>,
    clhat0: Arc<FgAbGroup>,
}

impl JacobianContext {
    pub fn new(g: &Graph) -> Result<Self> {
        if !g.is_connected() {
            return Err(Error::NotConnected);
        }
        let complex = GraphComplex::new(g);
        let n = g.vertex_count();
        let e = g.edge_count();
        let harmonic = complex.harmonic_one_forms();
        let cycles = complex.cycle_space();
        let k = harmonic.cols();

        let reduced_laplacian = drop_first_row(complex.laplacian0());
        let cl0 = FgAbGroup::quotient(&reduced_laplacian)?;
        let jac = FgAbGroup::quotient(&(&harmonic.transpose() * &cycles))?;
        debug_assert_eq!(jac.ambient_rank(), k);
        let pic = FgAbGroup::quotient(&IntMatrix::hcat(e, &[complex.d(), &harmonic]))?;
        let clhat0 = crate::linalg::subquotient(n, complex.d_adj(), &complex.box0())?;
        Ok(JacobianContext {
            complex,
            harmonic,
            cycles,
            cl0: Arc::new(cl0),
            jac: Arc::new(jac),
            pic: Arc::new(pic),
            clhat0: Arc::new(clhat0),
        })
    }

    pub fn graph(&self) -> &Graph {
        self.complex.graph()
    }

    pub fn complex(&self) -> &GraphComplex {
        &self.complex
    }

    /// Basis `W` of `Ha¹`.
    pub fn harmonic(&self) -> &IntMatrix {
        &self.harmonic
    }

    /// Basis `K` of `H_1`.
    pub fn cycles(&self) -> &IntMatrix {
        &self.cycles
    }

    pub fn cl0(&self) -> &Arc<FgAbGroup> {
        &self.cl0
    }

    pub fn jac(&self) -> &Arc<FgAbGroup> {
        &self.jac
    }

    pub fn pic(&self) -> &Arc<FgAbGroup> {
        &self.pic
    }

    pub fn clhat0(&self) -> &Arc<FgAbGroup> {
        &self.clhat0
    }

    /// Full class group `Z^V / Δ₀ Z^V`.
    pub fn cl(&self) -> FgAbGroup {
        FgAbGroup::quotient(self.complex.laplacian0()).expect("quotient of Z^V")
    }

    /// Full codivisor class group `Z^V / □₀ Z^V`.
    pub fn clhat(&self) -> FgAbGroup {
        FgAbGroup::quotient(&self.complex.box0()).expect("quotient of Z^V")
    }

    /// Coordinates of a degree-zero divisor on the basis `{v - v₀}`.
    pub fn degree_zero_coords(&self, divisor: &[BigInt]) -> Result<IntVector> {
        let n = self.graph().vertex_count();
        if divisor.len() != n {
            return Err(Error::DimensionMismatch(format!(
                "divisor of length {} on {n} vertices",
                divisor.len()
            )));
        }
        let deg = degree(divisor);
        if !deg.is_zero() {
            return Err(Error::NonZeroDegree(deg));
        }
        Ok(divisor[1..].to_vec())
    }

    /// Inverse of [`Self::degree_zero_coords`].
    pub fn divisor_from_coords(&self, coords: &[BigInt]) -> IntVector {
        let mut d = Vec::with_capacity(coords.len() + 1);
        d.push(-coords.iter().sum::<BigInt>());
        d.extend_from_slice(coords);
        d
    }

    /// Some 1-chain `γ` with `∂γ = D`.
    pub fn chain_with_boundary(&self, divisor: &[BigInt]) -> Result<IntVector> {
        let deg = degree(divisor);
        if !deg.is_zero() {
            return Err(Error::NonZeroDegree(deg));
        }
        solve_integer(self.complex.boundary(), divisor)
            .ok_or_else(|| Error::violation("boundary_solve", "degree-zero divisor not a boundary"))
    }

    /// Matrix whose column `v - 1` is `Wᵀ γ_v` with `∂γ_v = v - v₀`.
    pub fn abel_jacobi_matrix(&self) -> IntMatrix {
        let n = self.graph().vertex_count();
        let wt = self.harmonic.transpose();
        let cols: Vec<IntVector> = (1..n)
            .map(|v| {
                let mut d = vec![BigInt::zero(); n];
                d[v] = BigInt::one();
                d[0] = -BigInt::one();
                wt.mul_vec(&self.chain_with_boundary(&d).expect("connected graph"))
            })
            .collect();
        IntMatrix::from_columns(wt.rows(), &cols)
    }

    /// `AJ(D)` for a degree-zero divisor `D`.
    pub fn abel_jacobi(&self, divisor: &[BigInt]) -> Result<GroupElement> {
        if divisor.len() != self.graph().vertex_count() {
            return Err(Error::DimensionMismatch("divisor length".into()));
        }
        let gamma = self.chain_with_boundary(divisor)?;
        self.jac.project(&self.harmonic.transpose().mul_vec(&gamma))
    }

    /// `AJ : Cl⁰ -> J`.
    pub fn abel_jacobi_hom(&self) -> Result<GroupHom> {
        GroupHom::induced(&self.cl0, &self.jac, &self.abel_jacobi_matrix())
    }

    /// `AJ`, checked to be an isomorphism.
    pub fn verify_abel(&self) -> Result<GroupHom> {
        let aj = self.abel_jacobi_hom()?;
        if !aj.is_isomorphism() {
            return Err(Error::violation(
                "abel",
                format!("AJ: {} -> {} is not an isomorphism", self.cl0, self.jac),
            ));
        }
        Ok(aj)
    }

    /// `ι⁰ : Cl⁰ -> Ĉl⁰`, `v - v₀ ↦ v̂ - v̂₀`.
    pub fn iota0(&self) -> Result<GroupHom> {
        let n = self.graph().vertex_count();
        let mut m = IntMatrix::zeros(n, n - 1);
        for v in 1..n {
            m.set(v, v - 1, BigInt::one());
            m.set(0, v - 1, -BigInt::one());
        }
        GroupHom::induced(&self.cl0, &self.clhat0, &m)
    }

    /// `χ : P -> Ĉl⁰`, induced by `d♯`.
    pub fn chi(&self) -> Result<GroupHom> {
        GroupHom::induced(&self.pic, &self.clhat0, self.complex.d_adj())
    }

    /// `θ̃ = Wᵀ : C¹ -> Ha¹∨`.
    pub fn theta_tilde(&self) -> IntMatrix {
        self.harmonic.transpose()
    }

    /// `θ : P -> J`.
    pub fn theta(&self) -> Result<GroupHom> {
        GroupHom::induced(&self.pic, &self.jac, &self.theta_tilde())
    }

    /// `ζ : J -> P`: the dual basis vector `λ` goes to the class of any `ω`
    /// with `Wᵀω = λ`.
    pub fn zeta(&self) -> Result<GroupHom> {
        let k = self.harmonic.cols();
        let lifts = solve_matrix(&self.harmonic.transpose(), &IntMatrix::identity(k))
            .ok_or_else(|| Error::violation("zeta", "Wᵀ is not surjective"))?;
        GroupHom::induced(&self.jac, &self.pic, &lifts)
    }

    /// `(χ, ζ, θ̃)` after checking `ζ = θ⁻¹` and that `χ` is an isomorphism.
    pub fn picard_maps(&self) -> Result<(GroupHom, GroupHom, IntMatrix)> {
        let chi = self.chi()?;
        let zeta = self.zeta()?;
        let theta = self.theta()?;
        if !chi.is_isomorphism() {
            return Err(Error::violation("chi_iso", "χ is not an isomorphism"));
        }
        let zt = zeta.compose(&theta)?;
        if !zt.equals(&GroupHom::identity(&self.pic)) {
            return Err(Error::violation("zeta_theta", "ζ∘θ ≠ id on P"));
        }
        let tz = theta.compose(&zeta)?;
        if !tz.equals(&GroupHom::identity(&self.jac)) {
            return Err(Error::violation("theta_zeta", "θ∘ζ ≠ id on J"));
        }
        Ok((chi, zeta, self.theta_tilde()))
    }

    /// The commutative diagram `χ⁻¹∘ι⁰ = ζ∘AJ` with all maps isomorphisms.
    pub fn verify_diagram(&self) -> CheckReport {
        let mut r = CheckReport::new();
        let Some(aj) = r.record_result("aj_iso", self.verify_abel()) else {
            return r;
        };
        let Some((chi, zeta, _)) = r.record_result("picard_maps", self.picard_maps()) else {
            return r;
        };
        let Some(iota) = r.record_result("iota0", self.iota0()) else {
            return r;
        };
        r.record("iota0_iso", iota.is_isomorphism(), || {
            "ι⁰ not bijective".into()
        });
        let left = chi.inverse().and_then(|ci| ci.compose(&iota));
        let right = zeta.compose(&aj);
        match (left, right) {
            (Ok(l), Ok(rt)) => r.record("chi_inv_iota_eq_zeta_aj", l.equals(&rt), || {
                format!("differs on generator {:?}", l.first_difference(&rt))
            }),
            (Err(e), _) | (_, Err(e)) => r.fail("chi_inv_iota_eq_zeta_aj", e.to_string()),
        }
        r
    }

    /// `⟨j, p⟩ ∈ Q/Z` for `j ∈ J`, `p ∈ P`.
    ///
    /// With `n` the order of `p`, write `n ω = W a + d f`; the value is
    /// `λ(a) / n`.
    pub fn duality_pairing(&self, j: &GroupElement, p: &GroupElement) -> BigRational {
        let lambda = self.jac.lift(j);
        let omega = self.pic.lift(p);
        let n = self.pic.element_order(p).expect("P is finite");
        let e = self.graph().edge_count();
        let k = self.harmonic.cols();
        let m = IntMatrix::hcat(e, &[&self.harmonic, self.complex.d()]);
        let target: IntVector = omega.iter().map(|x| x * &n).collect();
        let sol = solve_integer(&m, &target).expect("n ω lies in Ha¹ + im d");
        let value: BigInt = lambda.iter().zip(&sol[..k]).map(|(x, y)| x * y).sum();
        mod_one(BigRational::new(value, n))
    }

    /// Pairing values on normal-form generators, `table[i][j] = ⟨J_i, P_j⟩`.
    pub fn pairing_table(&self) -> Vec<Vec<BigRational>> {
        (0..self.jac.coord_rank())
            .map(|i| {
                let ji = self.jac.generator(i);
                (0..self.pic.coord_rank())
                    .map(|j| self.duality_pairing(&ji, &self.pic.generator(j)))
                    .collect()
            })
            .collect()
    }

    /// Whether the pairing has trivial kernels on both sides.
    pub fn pairing_is_perfect(&self) -> Result<bool> {
        let table = self.pairing_table();
        let left = pairing_injective(&self.jac, &table)?;
        let transposed: Vec<Vec<BigRational>> = (0..self.pic.coord_rank())
            .map(|j| table.iter().map(|row| row[j].clone()).collect())
            .collect();
        let right = pairing_injective(&self.pic, &transposed)?;
        Ok(left && right)
    }

    /// `L#/L` for `L = Ha¹` with the restricted standard inner product.
    pub fn harmonic_discriminant(&self) -> Result<DiscriminantForm> {
        let gram = &self.harmonic.transpose() * &self.harmonic;
        discriminant_group(&self.harmonic, &gram)
    }

    /// Factors a harmonic map `h : V -> A` through `Cl = Z^V / Δ₀`.
    pub fn universal_factorization(
        &self,
        target: &Arc<FgAbGroup>,
        values: &[GroupElement],
    ) -> Result<GroupHom> {
        let g = self.graph();
        let n = g.vertex_count();
        if values.len() != n {
            return Err(Error::DimensionMismatch("one value per vertex".into()));
        }
        let lap = self.complex.laplacian0();
        for v in 0..n {
            let mut acc = target.zero();
            for (u, hu) in values.iter().enumerate() {
                acc = target.add(&acc, &target.scale(lap.get(u, v), hu));
            }
            if !acc.is_zero() {
                return Err(Error::NotHarmonic(g.vertex_id(v).to_string()));
            }
        }
        let cl = Arc::new(self.cl());
        let images: Vec<IntVector> = values.iter().map(|h| target.lift(h)).collect();
        GroupHom::from_generators(
            &cl,
            target,
            &IntMatrix::identity(n),
            &IntMatrix::from_columns(target.ambient_rank(), &images),
        )
    }
}

fn drop_first_row(m: &IntMatrix) -> IntMatrix {
    let idx: Vec<usize> = (1..m.rows()).collect();
    m.select_rows(&idx)
}

/// Whether `x ↦ (Σ_i x_i table[i][j])_j` is injective on `group`.
fn pairing_injective(group: &Arc<FgAbGroup>, table: &[Vec<BigRational>]) -> Result<bool> {
    if group.is_trivial() {
        return Ok(true);
    }
    let cols = table.first().map_or(0, Vec::len);
    let n = group.exponent();
    if !group.is_finite() || n.is_one() {
        return Ok(group.is_trivial());
    }
    let target = Arc::new(FgAbGroup::quotient(&IntMatrix::identity(cols).scale(&n))?);
    let mut m = IntMatrix::zeros(cols, group.coord_rank());
    for (i, row) in table.iter().enumerate() {
        for (j, q) in row.iter().enumerate() {
            let scaled = q * BigRational::from_integer(n.clone());
            if !scaled.is_integer() {
                return Err(Error::violation("pairing", "value not in (1/n)Z"));
            }
            m.set(j, i, scaled.to_integer());
        }
    }
    Ok(GroupHom::from_coords(group, &target, &m)?.is_injective())
}

/// Discriminant group of an integral lattice with its `Q/Z` pairing.
#[derive(Clone, Debug)]
pub struct DiscriminantForm {
    group: Arc<FgAbGroup>,
    gram: IntMatrix,
    det: BigInt,
}

/// `L#/L` presented as `Z^r / G Z^r` on the dual basis, pairing `xᵀ G⁻¹ y`.
pub fn discriminant_group(lattice_basis: &IntMatrix, gram: &IntMatrix) -> Result<DiscriminantForm> {
    if !gram.is_square() || gram.rows() != lattice_basis.cols() {
        return Err(Error::DimensionMismatch(
            "gram matrix must be r x r for a rank-r basis".into(),
        ));
    }
    if !gram.is_symmetric() {
        return Err(Error::NotSymmetric);
    }
    for k in 1..=gram.rows() {
        let idx: Vec<usize> = (0..k).collect();
        if !gram
            .select_rows(&idx)
            .select_columns(&idx)
            .det()
            .is_positive()
        {
            return Err(Error::NotPositiveDefinite);
        }
    }
    Ok(DiscriminantForm {
        group: Arc::new(FgAbGroup::quotient(gram)?),
        gram: gram.clone(),
        det: gram.det(),
    })
}

impl DiscriminantForm {
    pub fn group(&self) -> &Arc<FgAbGroup> {
        &self.group
    }

    pub fn determinant(&self) -> &BigInt {
        &self.det
    }

    /// Pairing of two dual-basis vectors.
    pub fn pair_ambient(&self, x: &[BigInt], y: &[BigInt]) -> BigRational {
        let scaled: IntVector = y.iter().map(|v| v * &self.det).collect();
        let z = solve_integer(&self.gram, &scaled).expect("det · G⁻¹ is integral");
        let num: BigInt = x.iter().zip(&z).map(|(a, b)| a * b).sum();
        mod_one(BigRational::new(num, self.det.clone()))
    }

    pub fn pair(&self, a: &GroupElement, b: &GroupElement) -> BigRational {
        self.pair_ambient(&self.group.lift(a), &self.group.lift(b))
    }

    /// Values on normal-form generators.
    pub fn table(&self) -> Vec<Vec<BigRational>> {
        let r = self.group.coord_rank();
        (0..r)
            .map(|i| {
                (0..r)
                    .map(|j| self.pair(&self.group.generator(i), &self.group.generator(j)))
                    .collect()
            })
            .collect()
    }

    /// Whether the pairing has trivial left kernel.
    pub fn is_nondegenerate(&self) -> Result<bool> {
        pairing_injective(&self.group, &self.table())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::build_graph;
    use crate::linalg::{int_vec, GroupSummary};

    fn cycle(n: usize) -> Graph {
        let names: Vec<String> = (0..n).map(|i| format!("v{i}")).collect();
        let edges: Vec<(String, String, String)> = (0..n)
            .map(|i| {
                (
                    format!("e{i}"),
                    names[i].clone(),
                    names[(i + 1) % n].clone(),
                )
            })
            .collect();
        build_graph(&names, &edges).unwrap()
    }

    fn k4() -> Graph {
        let v = ["a", "b", "c", "d"];
        let mut edges = Vec::new();
        for i in 0..4 {
            for j in i + 1..4 {
                edges.push((
                    format!("{}{}", v[i], v[j]),
                    v[i].to_string(),
                    v[j].to_string(),
                ));
            }
        }
        build_graph(&v, &edges).unwrap()
    }

    fn banana() -> Graph {
        build_graph(&["u", "v"], &[("e1", "u", "v"), ("e2", "u", "v")]).unwrap()
    }

    fn summary(s: &str) -> GroupSummary {
        s.parse().unwrap()
    }

    #[test]
    fn jacobian_examples() {
        assert_eq!(
            JacobianContext::new(&cycle(3)).unwrap().jac().summary(),
            summary("Z/3")
        );
        assert_eq!(
            JacobianContext::new(&k4()).unwrap().jac().summary(),
            summary("Z/4 ⊕ Z/4")
        );
        let tree = build_graph(&["a", "b", "c"], &[("x", "a", "b"), ("y", "a", "c")]).unwrap();
        assert!(JacobianContext::new(&tree).unwrap().jac().is_trivial());
        let two = build_graph(&["a", "b"], &[] as &[(&str, &str, &str)]).unwrap();
        assert_eq!(JacobianContext::new(&two).unwrap_err(), Error::NotConnected);
    }

    #[test]
    fn four_groups_agree() {
        for g in [cycle(3), cycle(5), k4(), banana()] {
            let ctx = JacobianContext::new(&g).unwrap();
            let s = ctx.jac().summary();
            assert_eq!(ctx.cl0().summary(), s);
            assert_eq!(ctx.pic().summary(), s);
            assert_eq!(ctx.clhat0().summary(), s);
        }
    }

    #[test]
    fn abel_jacobi_examples() {
        let ctx = JacobianContext::new(&cycle(3)).unwrap();
        let x = ctx.abel_jacobi(&int_vec(&[1, -1, 0])).unwrap();
        assert_eq!(ctx.jac().element_order(&x), Some(BigInt::from(3)));
        assert!(ctx.abel_jacobi(&int_vec(&[0, 0, 0])).unwrap().is_zero());
        for v in 0..3 {
            let principal = ctx.complex().laplacian0().column(v);
            assert!(ctx.abel_jacobi(&principal).unwrap().is_zero());
        }
        assert_eq!(
            ctx.abel_jacobi(&int_vec(&[1, 0, 0])).unwrap_err(),
            Error::NonZeroDegree(BigInt::one())
        );
    }

    #[test]
    fn abel_and_diagrams() {
        for g in [cycle(3), k4(), banana(), cycle(1)] {
            let ctx = JacobianContext::new(&g).unwrap();
            assert!(ctx.verify_abel().unwrap().is_isomorphism());
            let r = ctx.verify_diagram();
            assert!(r.passed(), "{r:?}");
        }
    }

    #[test]
    fn pairing_on_cycle() {
        let ctx = JacobianContext::new(&cycle(3)).unwrap();
        let v = ctx.duality_pairing(&ctx.jac().generator(0), &ctx.pic().generator(0));
        let third = BigRational::new(BigInt::one(), BigInt::from(3));
        assert!(v == third || v == BigRational::one() - &third);
        assert!(ctx
            .duality_pairing(&ctx.jac().zero(), &ctx.pic().generator(0))
            .is_zero());
        assert!(ctx.pairing_is_perfect().unwrap());
    }

    #[test]
    fn pairing_symmetric_under_theta() {
        let ctx = JacobianContext::new(&cycle(4)).unwrap();
        let zeta = ctx.zeta().unwrap();
        let elems = ctx.jac().elements();
        assert_eq!(elems.len(), 4);
        for a in &elems {
            for b in &elems {
                let ab = ctx.duality_pairing(a, &zeta.apply(b));
                let ba = ctx.duality_pairing(b, &zeta.apply(a));
                assert_eq!(ab, ba);
            }
        }
    }

    #[test]
    fn discriminant_examples() {
        let basis = IntMatrix::from_rows(&[vec![1]]);
        let f = discriminant_group(&basis, &IntMatrix::from_rows(&[vec![3]])).unwrap();
        assert_eq!(f.group().summary(), summary("Z/3"));
        let g = f.group().generator(0);
        assert_eq!(
            f.pair(&g, &g),
            BigRational::new(BigInt::one(), BigInt::from(3))
        );
        let id = discriminant_group(&IntMatrix::identity(2), &IntMatrix::identity(2)).unwrap();
        assert!(id.group().is_trivial());
        assert_eq!(
            discriminant_group(&basis, &IntMatrix::from_rows(&[vec![-1]])).unwrap_err(),
            Error::NotPositiveDefinite
        );
        let ctx = JacobianContext::new(&cycle(3)).unwrap();
        let disc = ctx.harmonic_discriminant().unwrap();
        assert_eq!(disc.group().summary(), ctx.jac().summary());
        assert!(disc.is_nondegenerate().unwrap());
    }

    #[test]
    fn universal_property() {
        let ctx = JacobianContext::new(&cycle(3)).unwrap();
        let z3 = Arc::new(FgAbGroup::cyclic(3));
        let vals: Vec<GroupElement> = [0, 1, 2]
            .iter()
            .map(|&c| z3.element(&int_vec(&[c])))
            .collect();
        let h = ctx.universal_factorization(&z3, &vals).unwrap();
        assert_eq!(h.apply_ambient(&int_vec(&[0, 1, 0])).unwrap(), vals[1]);
        let bad: Vec<GroupElement> = [0, 1, 0]
            .iter()
            .map(|&c| z3.element(&int_vec(&[c])))
            .collect();
        assert!(matches!(
            ctx.universal_factorization(&z3, &bad),
            Err(Error::NotHarmonic(_))
        ));
        let constant: Vec<GroupElement> = (0..3).map(|_| z3.generator(0)).collect();
        assert!(ctx.universal_factorization(&z3, &constant).is_ok());
    }
}
