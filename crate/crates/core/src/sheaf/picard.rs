//! `Pic(|Γ|)`, `Pic_m(|Γ|)` and the comparison with the combinatorial groups.

use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::One;

use super::standard::{build_standard_sheaves, StandardSheaves};
use super::{CellularSheaf, Skyscraper, TwoTermSheafComplex};
use crate::complexes::GraphComplex;
use crate::error::{Error, Result};
use crate::genjac::sequences::check_pushout;
use crate::genjac::{modulus_restriction, ModulusContext};
use crate::graph::{Graph, Modulus};
use crate::jacobian::JacobianContext;
use crate::linalg::{kernel_basis, subquotient, FgAbGroup, GroupHom, IntMatrix};
use crate::report::CheckReport;

/// `Pic(|Γ|) = H¹(Harm)` with `δ̄ : Ĉl(Γ) -> Pic(|Γ|)` and `Pic⁰`.
#[derive(Clone, Debug)]
pub struct GeometricPicard {
    pub pic: Arc<FgAbGroup>,
    pub delta_bar: GroupHom,
    /// Presented in the normal-form coordinates of `pic`.
    pub pic0: FgAbGroup,
    /// `ediff_* : Pic(|Γ|) -> H¹(Ω)`.
    pub to_omega: GroupHom,
    pub report: CheckReport,
}

fn as_violation(check: &str) -> impl Fn(Error) -> Error + '_ {
    move |e| match e {
        Error::TheoremViolation { .. } => e,
        other => Error::violation(check, other.to_string()),
    }
}

fn h1_omega(s: &StandardSheaves) -> Result<(Arc<FgAbGroup>, Arc<FgAbGroup>)> {
    let h1_harm = Arc::new(FgAbGroup::quotient(&s.harm.differential())?);
    let h1_omega = Arc::new(FgAbGroup::quotient(&s.omega.differential())?);
    Ok((h1_harm, h1_omega))
}

pub fn picard_geometric(g: &Graph) -> Result<GeometricPicard> {
    let s = build_standard_sheaves(g)?;
    picard_from_sheaves(&s)
}

fn picard_from_sheaves(s: &StandardSheaves) -> Result<GeometricPicard> {
    let g = s.graph().clone();
    let cx = GraphComplex::new(&g);
    let mut report = s.global_sections()?;
    report.extend("stalks", s.stalk_exactness());

    let (pic, h1_omega) = h1_omega(s)?;
    let clhat = Arc::new(FgAbGroup::quotient(&cx.box0())?);
    let delta = s.delta_matrix();
    let delta_bar =
        GroupHom::induced(&clhat, &pic, &delta).map_err(as_violation("delta_bar_well_defined"))?;
    report.record("delta_bar_iso", delta_bar.is_isomorphism(), || {
        format!("δ̄: {clhat} -> {pic}")
    });
    let to_omega = s
        .ediff_harm
        .on_h1(&pic, &h1_omega)
        .map_err(as_violation("ediff_on_h1"))?;
    let pic0 = to_omega.kernel();

    if g.is_connected() {
        report.record(
            "pic_mod_pic0_is_z",
            to_omega.is_surjective() && h1_omega.summary().to_string() == "Z",
            || format!("H¹(Ω) = {h1_omega}"),
        );
        let clhat0 = Arc::new(subquotient(g.vertex_count(), cx.d_adj(), &cx.box0())?);
        let restricted = GroupHom::induced(&clhat0, &pic, &delta)?;
        report.record(
            "delta_clhat0_eq_pic0",
            restricted.image_lattice() == to_omega.kernel_lattice(),
            || "δ̄(Ĉl⁰) ≠ Pic⁰".into(),
        );
    } else {
        report.skip("pic_mod_pic0_is_z", "graph is not connected");
        report.skip("delta_clhat0_eq_pic0", "graph is not connected");
    }
    Ok(GeometricPicard {
        pic,
        delta_bar,
        pic0,
        to_omega,
        report,
    })
}

/// `δ̄(d♯ ê) = -q_*(ê)` for every edge, and the triangle with `χ` and `q_*`.
pub fn verify_sign_law(g: &Graph) -> Result<CheckReport> {
    let ctx = JacobianContext::new(g)?;
    let s = build_standard_sheaves(g)?;
    let geo = picard_from_sheaves(&s)?;
    let mut r = CheckReport::new();
    let delta = s.delta_matrix();
    let q = s.constant_on_edges();
    let boundary = ctx.complex().d_adj();
    for e in 0..g.edge_count() {
        let lhs = delta.mul_vec(&boundary.column(e));
        let sum: Vec<BigInt> = lhs.iter().zip(q.column(e)).map(|(a, b)| a + b).collect();
        let zero = geo.pic.project(&sum)?.is_zero();
        r.record(format!("edge.{}", g.edge(e).id), zero, || {
            format!(
                "δ̄(d♯ê) + q_*(ê) = {:?}",
                geo.pic.project(&sum).map(|x| x.coords())
            )
        });
    }
    let homs = (|| -> Result<(bool, bool, bool)> {
        let q_star = GroupHom::induced(ctx.pic(), &geo.pic, &q)?;
        let delta0 = GroupHom::induced(ctx.clhat0(), &geo.pic, &delta)?;
        let triangle = delta0.compose(&ctx.chi()?)?.equals(&q_star.neg());
        let onto_pic0 = q_star.image_lattice() == geo.to_omega.kernel_lattice();
        Ok((triangle, q_star.is_injective(), onto_pic0))
    })();
    match homs {
        Ok((triangle, injective, onto)) => {
            r.record("triangle", triangle, || "-δ̄∘χ ≠ q_*".into());
            r.record("q_star_iso_onto_pic0", injective && onto, || {
                format!("injective: {injective}, image = Pic⁰: {onto}")
            });
        }
        Err(e) => r.fail("triangle", e.to_string()),
    }
    Ok(r)
}

/// `Pic_m(|Γ|) = H¹(Harm_m)` with `δ̄_m` on `Ĉl_m(Γ)` and `Pic⁰_m`.
#[derive(Clone, Debug)]
pub struct RigidifiedPicard {
    pub picm: Arc<FgAbGroup>,
    pub delta_bar_m: GroupHom,
    /// Presented in the normal-form coordinates of `picm`.
    pub pic0m: FgAbGroup,
    pub report: CheckReport,
}

/// Cochain data of `Harm_m = [Harm -> ∏ w_{i*} Z]`.
struct HarmM {
    h1: Arc<FgAbGroup>,
    /// `Z^V ⊕ Z^I -> C¹(Harm) ⊕ Z^I`, `(a, k) ↦ (d_PL f, ev_I f - k)`, `diff f = a`.
    delta: IntMatrix,
    /// `Z^E ⊕ Z^I -> C¹(Harm) ⊕ Z^I`, the map `(**)` from `C¹(Γ_m)`.
    from_extended: IntMatrix,
}

fn harm_m(s: &StandardSheaves, m: &Modulus) -> Result<HarmM> {
    let ni = m.len();
    let targets = m
        .points()
        .iter()
        .map(|&w| Skyscraper { vertex: w, rank: 1 })
        .collect();
    let evals = m
        .points()
        .iter()
        .map(|&w| s.harm_basis[w].select_rows(&[0]))
        .collect();
    let complex = TwoTermSheafComplex::new(s.harm.clone(), targets, evals)?;
    let (_, h1) = complex.hypercohomology()?;
    let lift = s.diff_lift();
    let top = &s.pl.differential() * &lift;
    let bottom = &s.evaluation(m) * &lift;
    let c1 = s.harm.c1_rank();
    let delta = IntMatrix::vcat(
        top.cols() + ni,
        &[
            &IntMatrix::hcat(c1, &[&top, &IntMatrix::zeros(c1, ni)]),
            &IntMatrix::hcat(ni, &[&bottom, &-&IntMatrix::identity(ni)]),
        ],
    );
    let from_extended = IntMatrix::block_diag(&s.constant_on_edges(), &IntMatrix::identity(ni));
    Ok(HarmM {
        h1: Arc::new(h1),
        delta,
        from_extended,
    })
}

pub fn rigidified_picard(g: &Graph, m: &Modulus) -> Result<RigidifiedPicard> {
    let s = build_standard_sheaves(g)?;
    rigidified_from_sheaves(&s, m)
}

fn rigidified_from_sheaves(s: &StandardSheaves, m: &Modulus) -> Result<RigidifiedPicard> {
    let g = s.graph().clone();
    let n = g.vertex_count();
    let ni = m.len();
    let cx = GraphComplex::new(&g);
    let rho_t = modulus_restriction(m, n);
    let mut report = CheckReport::new();

    let hm = harm_m(s, m)?;
    let clhatm = Arc::new(FgAbGroup::quotient(&IntMatrix::vcat(
        n,
        &[&cx.box0(), &rho_t],
    ))?);
    let delta_bar_m = GroupHom::induced(&clhatm, &hm.h1, &hm.delta)
        .map_err(as_violation("delta_m_well_defined"))?;
    report.record("delta_m_iso", delta_bar_m.is_isomorphism(), || {
        format!("δ̄_m: {clhatm} -> {}", hm.h1)
    });

    let (pic, h1_omega) = h1_omega(s)?;
    let c1 = s.harm.c1_rank();
    let forget = GroupHom::induced(
        &hm.h1,
        &pic,
        &IntMatrix::hcat(c1, &[&IntMatrix::identity(c1), &IntMatrix::zeros(c1, ni)]),
    )?;
    report.record("forget_onto_pic", forget.is_surjective(), || {
        "Pic_m -> Pic not onto".into()
    });
    let to_omega = s.ediff_harm.on_h1(&pic, &h1_omega)?.compose(&forget)?;
    let pic0m = to_omega.kernel();

    // Z_m = [Z -> ∏ w_{i*}Z] against C•(Γ_m).
    let zm = TwoTermSheafComplex::new(
        s.constant.clone(),
        m.points()
            .iter()
            .map(|&w| Skyscraper { vertex: w, rank: 1 })
            .collect(),
        vec![IntMatrix::identity(1); ni],
    )?;
    let (_, h1_zm) = zm.hypercohomology()?;
    let ext = crate::graph::extend_with_modulus(&g, m)?;
    let h1_ext = FgAbGroup::quotient(GraphComplex::new(&ext.graph).d())?;
    let e = g.edge_count();
    match GroupHom::induced(
        &Arc::new(h1_zm),
        &Arc::new(h1_ext),
        &IntMatrix::identity(e + ni),
    ) {
        Ok(h) => report.record("h1_zm_eq_h1_extended", h.is_isomorphism(), || {
            "H¹(Z_m) -> H¹(Γ_m) not bijective".into()
        }),
        Err(err) => report.fail("h1_zm_eq_h1_extended", err.to_string()),
    }

    if g.is_connected() {
        let ctx = ModulusContext::new(&g, m)?;
        let checks = (|| -> Result<(bool, bool, bool)> {
            let delta0 = GroupHom::induced(ctx.clhat0m(), &hm.h1, &hm.delta)?;
            let star = GroupHom::induced(ctx.pm(), &hm.h1, &hm.from_extended)?;
            let triangle = delta0.compose(&ctx.chi_m()?)?.equals(&star.neg());
            let image = delta0.image_lattice() == to_omega.kernel_lattice();
            Ok((triangle, image, star.is_injective()))
        })();
        match checks {
            Ok((triangle, image, injective)) => {
                report.record("triangle_m", triangle, || "-δ̄_m∘χ_m ≠ (**)".into());
                report.record("delta_clhat0m_eq_pic0m", image, || {
                    "δ̄_m(Ĉl⁰_m) ≠ Pic⁰_m".into()
                });
                report.record("pm_injects", injective, || {
                    "P_m -> Pic_m not injective".into()
                });
            }
            Err(err) => report.fail("triangle_m", err.to_string()),
        }
    } else {
        report.skip("triangle_m", "graph is not connected");
    }

    if m.is_reduced() {
        report.extend("reduced", reduced_checks(s, m, &hm)?);
    } else {
        report.extend("pushout", rigidification_pushout(s, m, &hm)?);
    }

    Ok(RigidifiedPicard {
        picm: hm.h1,
        delta_bar_m,
        pic0m,
        report,
    })
}

/// `Harm' = ker(Harm -> ∏ w_{i*}Z)` for a reduced modulus.
fn reduced_checks(s: &StandardSheaves, m: &Modulus, hm: &HarmM) -> Result<CheckReport> {
    let mut r = CheckReport::new();
    let g = s.graph();
    let n = g.vertex_count();
    let mut bases = s.harm_basis.clone();
    for &w in m.points() {
        let rows = IntMatrix::vcat(
            s.pl.vertex_rank(w),
            &[s.diff.vertex_map(w), &s.evaluation_row(w)],
        );
        bases[w] = kernel_basis(&rows);
    }
    let harm_p: CellularSheaf = s.pl.restrict_vertex_stalks(&bases)?;
    let h1p = Arc::new(FgAbGroup::quotient(&harm_p.differential())?);
    let cx = GraphComplex::new(g);
    let outside: Vec<usize> = (0..n).filter(|v| !m.points().contains(v)).collect();
    let clhat_red = Arc::new(FgAbGroup::quotient(&cx.box0().select_columns(&outside))?);
    let delta = s.delta_matrix();
    match GroupHom::induced(&clhat_red, &h1p, &delta) {
        Ok(h) => r.record("delta_iso", h.is_isomorphism(), || {
            format!("δ̄_m: {clhat_red} -> {h1p}")
        }),
        Err(e) => r.fail("delta_iso", e.to_string()),
    }
    let c1 = harm_p.c1_rank();
    let ni = m.len();
    let embed = IntMatrix::vcat(c1, &[&IntMatrix::identity(c1), &IntMatrix::zeros(ni, c1)]);
    match GroupHom::induced(&h1p, &hm.h1, &embed) {
        Ok(h) => r.record("matches_general", h.is_isomorphism(), || {
            "H¹(Harm') -> H¹(Harm_m) not bijective".into()
        }),
        Err(e) => r.fail("matches_general", e.to_string()),
    }
    let q = s.constant_on_edges();
    for e in 0..g.edge_count() {
        let lhs = delta.mul_vec(&cx.d_adj().column(e));
        let sum: Vec<BigInt> = lhs.iter().zip(q.column(e)).map(|(a, b)| a + b).collect();
        r.record(
            format!("sign_law.{}", g.edge(e).id),
            h1p.project(&sum)?.is_zero(),
            || "δ̄_m(d♯ê) ≠ -q_m*(ê)".into(),
        );
    }
    Ok(r)
}

/// `Pic_m` as the pushout of `Pic_{m₀} <- Z^S -> Z^I` for the reduction `m₀`.
fn rigidification_pushout(s: &StandardSheaves, m: &Modulus, hm: &HarmM) -> Result<CheckReport> {
    let mut r = CheckReport::new();
    let m0 = m.reduced();
    let h0 = harm_m(s, &m0)?;
    let support = m0.points().to_vec();
    let (ns, ni) = (support.len(), m.len());
    let mut fibre = IntMatrix::zeros(ni, ns);
    for (j, &w) in support.iter().enumerate() {
        for i in m.indices_at(w) {
            fibre.set(i, j, BigInt::one());
        }
    }
    let c1 = s.harm.c1_rank();
    let zs = Arc::new(FgAbGroup::free(ns));
    let zi = Arc::new(FgAbGroup::free(ni));
    let maps = (|| -> Result<[GroupHom; 4]> {
        let f = GroupHom::induced(
            &zs,
            &h0.h1,
            &IntMatrix::vcat(ns, &[&IntMatrix::zeros(c1, ns), &IntMatrix::identity(ns)]),
        )?;
        let gmap = GroupHom::induced(&zs, &zi, &fibre)?;
        let h = GroupHom::induced(
            &h0.h1,
            &hm.h1,
            &IntMatrix::block_diag(&IntMatrix::identity(c1), &fibre),
        )?;
        let k = GroupHom::induced(
            &zi,
            &hm.h1,
            &IntMatrix::vcat(ni, &[&IntMatrix::zeros(c1, ni), &IntMatrix::identity(ni)]),
        )?;
        Ok([f, gmap, h, k])
    })();
    match maps {
        Ok([f, gmap, h, k]) => check_pushout(&mut r, "rigidifications", &f, &gmap, &h, &k),
        Err(e) => r.fail("rigidifications.maps", e.to_string()),
    }
    Ok(r)
}

/// `δ_m(d♯ g, k) = -(**)(g, k)` on every basis vector of `C¹(Γ_m)`.
pub fn verify_sign_law_m(g: &Graph, m: &Modulus) -> Result<CheckReport> {
    let s = build_standard_sheaves(g)?;
    let hm = harm_m(&s, m)?;
    let cx = GraphComplex::new(g);
    let (e, ni) = (g.edge_count(), m.len());
    let chi = IntMatrix::block_diag(cx.d_adj(), &IntMatrix::identity(ni));
    let mut r = CheckReport::new();
    for j in 0..e + ni {
        let lhs = hm.delta.mul_vec(&chi.column(j));
        let rhs = hm.from_extended.column(j);
        let sum: Vec<BigInt> = lhs.iter().zip(rhs).map(|(a, b)| a + b).collect();
        let name = if j < e {
            format!("edge.{}", g.edge(j).id)
        } else {
            format!("index.{}", j - e)
        };
        r.record(name, hm.h1.project(&sum)?.is_zero(), || {
            "δ_m(d♯g, k) ≠ -(g, k)".into()
        });
    }
    let zero = vec![BigInt::from(0); hm.delta.cols()];
    r.record(
        "zero",
        hm.h1.project(&hm.delta.mul_vec(&zero))?.is_zero(),
        || "δ_m(0) ≠ 0".into(),
    );
    Ok(r)
}

impl StandardSheaves {
    /// Evaluation `PL_v -> Z` as a 1-row matrix.
    pub fn evaluation_row(&self, v: usize) -> IntMatrix {
        let mut row = IntMatrix::zeros(1, self.pl.vertex_rank(v));
        row.set(0, 0, BigInt::one());
        row
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

    fn triangle() -> Graph {
        build_graph(
            &["w1", "w2", "v"],
            &[("g", "w1", "w2"), ("h", "w2", "v"), ("f", "v", "w1")],
        )
        .unwrap()
    }

    fn banana() -> Graph {
        build_graph(&["u", "v"], &[("e1", "u", "v"), ("e2", "v", "u")]).unwrap()
    }

    #[test]
    fn circle_picard() {
        let p = picard_geometric(&triangle()).unwrap();
        assert!(p.report.passed(), "{:?}", p.report);
        assert_eq!(p.pic.summary(), summary("Z ⊕ Z/3"));
        assert_eq!(p.pic0.summary(), summary("Z/3"));
    }

    #[test]
    fn tree_and_banana() {
        let tree = build_graph(&["a", "b", "c"], &[("x", "a", "b"), ("y", "b", "c")]).unwrap();
        let p = picard_geometric(&tree).unwrap();
        assert_eq!(p.pic.summary(), summary("Z"));
        assert!(p.pic0.is_trivial());
        let p = picard_geometric(&banana()).unwrap();
        assert_eq!(p.pic.summary(), summary("Z ⊕ Z/2"));
        assert!(p.report.passed());
    }

    #[test]
    fn sign_law_on_examples() {
        for g in [
            triangle(),
            banana(),
            build_graph(&["a"], &[("l", "a", "a")]).unwrap(),
        ] {
            let r = verify_sign_law(&g).unwrap();
            assert!(r.passed(), "{r:?}");
        }
    }

    #[test]
    fn figure_one_rigidified() {
        let g = triangle();
        let m = Modulus::new(&g, &["w1", "w2"]).unwrap();
        let p = rigidified_picard(&g, &m).unwrap();
        assert!(p.report.passed(), "{:?}", p.report);
        assert_eq!(p.picm.summary(), summary("Z^2"));
        assert_eq!(p.pic0m.summary(), summary("Z"));
        let r = verify_sign_law_m(&g, &m).unwrap();
        assert!(r.passed(), "{r:?}");
        assert_eq!(r.checks.len(), 6);
    }

    #[test]
    fn single_point_and_repeated_point() {
        let g = triangle();
        let one = Modulus::new(&g, &["v"]).unwrap();
        let p = rigidified_picard(&g, &one).unwrap();
        assert!(p.report.passed(), "{:?}", p.report);
        assert_eq!(p.pic0m.summary(), summary("Z/3"));
        let twice = Modulus::new(&g, &["v", "v"]).unwrap();
        let p = rigidified_picard(&g, &twice).unwrap();
        assert!(p.report.passed(), "{:?}", p.report);
        assert!(p.report.get("pushout.rigidifications.universal").is_some());
    }

    #[test]
    fn tree_with_leaf_modulus() {
        let tree = build_graph(&["a", "b", "c"], &[("x", "a", "b"), ("y", "b", "c")]).unwrap();
        let m = Modulus::new(&tree, &["c"]).unwrap();
        let r = verify_sign_law_m(&tree, &m).unwrap();
        assert!(r.passed(), "{r:?}");
        let p = rigidified_picard(&tree, &m).unwrap();
        assert!(p.report.passed(), "{:?}", p.report);
        assert_eq!(p.picm.torsion_rank(), 0);
    }
}
