//! Extension sequences, reduced presentations and pushout squares.

use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::One;

use super::ModulusContext;
use crate::error::Result;
use crate::linalg::{is_exact_at, subquotient, FgAbGroup, GroupHom, IntMatrix};
use crate::report::CheckReport;

/// Checks that `f : A -> B` and `g : A -> C` pushed out along `h : B -> D`
/// and `k : C -> D` form a co-Cartesian square.
///
/// All four maps must carry ambient matrices and `A` must be free on its
/// ambient basis.
pub fn check_pushout(
    r: &mut CheckReport,
    name: &str,
    f: &GroupHom,
    g: &GroupHom,
    h: &GroupHom,
    k: &GroupHom,
) {
    match (h.compose(f), k.compose(g)) {
        (Ok(hf), Ok(kg)) => r.record(format!("{name}.commutes"), hf.equals(&kg), || {
            format!("differs on generator {:?}", hf.first_difference(&kg))
        }),
        (Err(e), _) | (_, Err(e)) => {
            r.fail(format!("{name}.commutes"), e.to_string());
            return;
        }
    }
    let (Some(fa), Some(ga), Some(ha), Some(ka)) = (
        f.ambient_matrix(),
        g.ambient_matrix(),
        h.ambient_matrix(),
        k.ambient_matrix(),
    ) else {
        r.fail(format!("{name}.universal"), "maps lack ambient matrices");
        return;
    };
    let (b, c) = (h.source(), k.source());
    let (nb, nc) = (b.ambient_rank(), c.ambient_rank());
    let a_num = f.source().numerator();
    let numerator = IntMatrix::block_diag(b.numerator(), c.numerator());
    let glued = IntMatrix::vcat(a_num.cols(), &[&(fa * a_num), &-&(ga * a_num)]);
    let relations = IntMatrix::hcat(
        nb + nc,
        &[&IntMatrix::block_diag(b.relations(), c.relations()), &glued],
    );
    let outcome = subquotient(nb + nc, &numerator, &relations).and_then(|p| {
        let p = Arc::new(p);
        let ambient = IntMatrix::hcat(ha.rows(), &[ha, ka]);
        GroupHom::induced(&p, h.target(), &ambient)
    });
    match outcome {
        Ok(u) => r.record(format!("{name}.universal"), u.is_isomorphism(), || {
            "pushout does not map isomorphically".into()
        }),
        Err(e) => r.fail(format!("{name}.universal"), e.to_string()),
    }
}

fn exactness(r: &mut CheckReport, name: &str, f: &Result<GroupHom>, g: &Result<GroupHom>) {
    match (f, g) {
        (Ok(f), Ok(g)) => r.record(name, is_exact_at(f, g), || "ker ≠ im".into()),
        (Err(e), _) | (_, Err(e)) => r.fail(name, e.to_string()),
    }
}

impl ModulusContext {
    /// `Z -> Z[I] -> J_m -> J`, with the last map `Tᵀ` for `j_! W = W_m T`.
    pub fn jacobian_extension(&self) -> CheckReport {
        let mut r = CheckReport::new();
        let ni = self.modulus().len();
        let z = Arc::new(FgAbGroup::free(1));
        let zi = Arc::new(FgAbGroup::free(ni));
        let zero_j = Arc::new(FgAbGroup::free(0));
        let zero_z = Arc::new(FgAbGroup::free(0));

        let diag = GroupHom::induced(
            &z,
            &zi,
            &IntMatrix::from_columns(ni, &[vec![BigInt::one(); ni]]),
        );
        let eps_cols: Vec<_> = (0..ni).map(|i| self.epsilon(i)).collect();
        let eps = GroupHom::induced(
            &zi,
            self.jm(),
            &IntMatrix::from_columns(self.harmonic_m().cols(), &eps_cols),
        );
        let restrict = self
            .harmonic_inclusion()
            .and_then(|t| GroupHom::induced(self.jm(), self.base().jac(), &t.transpose()));
        let into_z = Ok(GroupHom::zero(&zero_z, &z));
        let out_j = Ok(GroupHom::zero(self.base().jac(), &zero_j));

        exactness(&mut r, "exact_at_z", &into_z, &diag);
        exactness(&mut r, "exact_at_zi", &diag, &eps);
        exactness(&mut r, "exact_at_jm", &eps, &restrict);
        exactness(&mut r, "exact_at_j", &restrict, &out_j);
        r
    }

    /// `Z^I/Z -> P_m -> P`, the second map induced by restriction `j*`.
    pub fn picard_extension(&self) -> CheckReport {
        let mut r = CheckReport::new();
        let ni = self.modulus().len();
        let e = self.graph().edge_count();
        let zi_mod_z =
            FgAbGroup::quotient(&IntMatrix::from_columns(ni, &[vec![BigInt::one(); ni]]))
                .map(Arc::new);
        let zero = Arc::new(FgAbGroup::free(0));
        let Some(zi_mod_z) = r.record_result("z_i_mod_z", zi_mod_z) else {
            return r;
        };
        let inclusion = GroupHom::induced(
            &zi_mod_z,
            self.pm(),
            &IntMatrix::vcat(ni, &[&IntMatrix::zeros(e, ni), &IntMatrix::identity(ni)]),
        );
        let restrict = GroupHom::induced(
            self.pm(),
            self.base().pic(),
            &IntMatrix::hcat(e, &[&IntMatrix::identity(e), &IntMatrix::zeros(e, ni)]),
        );
        exactness(
            &mut r,
            "exact_at_z_i_mod_z",
            &Ok(GroupHom::zero(&zero, &zi_mod_z)),
            &inclusion,
        );
        exactness(&mut r, "exact_at_pm", &inclusion, &restrict);
        exactness(
            &mut r,
            "exact_at_p",
            &restrict,
            &Ok(GroupHom::zero(self.base().pic(), &zero)),
        );
        r
    }

    /// Presentations valid for a reduced modulus, compared with the general ones.
    pub fn reduced_presentations(&self) -> CheckReport {
        let mut r = CheckReport::new();
        if !self.modulus().is_reduced() {
            r.skip("reduced", "modulus is not reduced");
            return r;
        }
        let g = self.graph();
        let n = g.vertex_count();
        let e = g.edge_count();
        let ni = self.modulus().len();
        let outside: Vec<usize> = (0..n)
            .filter(|v| self.modulus().indices_at(*v).is_empty())
            .collect();
        let cx = self.base().complex();
        let lap_out = cx.laplacian0().select_columns(&outside);
        let box_out = cx.box0().select_columns(&outside);
        let rows: Vec<usize> = (1..n).collect();

        // Z[V]_0 / Δ₀(Z[V∖S]) -> Cl⁰_m
        let cl_red = FgAbGroup::quotient(&lap_out.select_rows(&rows)).map(Arc::new);
        let to_cl = cl_red.and_then(|a| {
            let m = IntMatrix::vcat(
                n - 1,
                &[&IntMatrix::identity(n - 1), &IntMatrix::zeros(ni, n - 1)],
            );
            GroupHom::induced(&a, self.cl0m(), &m)
        });
        match to_cl {
            Ok(h) => r.record("cl0m_reduced_iso", h.is_isomorphism(), || {
                "not bijective".into()
            }),
            Err(e) => r.fail("cl0m_reduced_iso", e.to_string()),
        }

        // Z^{V,0} / □₀(Z^{V∖S}) -> Ĉl⁰_m
        let embed_v = IntMatrix::vcat(n, &[&IntMatrix::identity(n), &IntMatrix::zeros(ni, n)]);
        let clhat_red = subquotient(n, cx.d_adj(), &box_out).map(Arc::new);
        let to_clhat = clhat_red
            .clone()
            .and_then(|a| GroupHom::induced(&a, self.clhat0m(), &embed_v));
        match &to_clhat {
            Ok(h) => r.record("clhat0m_reduced_iso", h.is_isomorphism(), || {
                "not bijective".into()
            }),
            Err(e) => r.fail("clhat0m_reduced_iso", e.to_string()),
        }

        // Z^E / (d(Z^{V∖S}) + Ha¹) -> P_m
        let d_out = cx.d().select_columns(&outside);
        let p_red = FgAbGroup::quotient(&IntMatrix::hcat(e, &[&d_out, self.base().harmonic()]))
            .map(Arc::new);
        let embed_e = IntMatrix::vcat(e, &[&IntMatrix::identity(e), &IntMatrix::zeros(ni, e)]);
        let to_p = p_red
            .clone()
            .and_then(|a| GroupHom::induced(&a, self.pm(), &embed_e));
        match &to_p {
            Ok(h) => r.record("pm_reduced_iso", h.is_isomorphism(), || {
                "not bijective".into()
            }),
            Err(e) => r.fail("pm_reduced_iso", e.to_string()),
        }

        // χ_m ∘ (reduced P_m) = (reduced Ĉl⁰_m) ∘ d♯
        let square = (|| -> Result<bool> {
            let p_red = p_red?;
            let clhat_red = clhat_red?;
            let dadj = GroupHom::induced(&p_red, &clhat_red, cx.d_adj())?;
            let left = self.chi_m()?.compose(&to_p.clone()?)?;
            let right = to_clhat.clone()?.compose(&dadj)?;
            Ok(left.equals(&right))
        })();
        match square {
            Ok(ok) => r.record("reduced_square", ok, || "square does not commute".into()),
            Err(e) => r.fail("reduced_square", e.to_string()),
        }
        r
    }

    /// Pushout squares relating `Cl⁰_m`, `Ĉl⁰_m` to the reduced modulus.
    pub fn pushout_squares(&self) -> CheckReport {
        let mut r = CheckReport::new();
        let reduced_modulus = self.modulus().reduced();
        let reduced = match ModulusContext::from_base(self.base().clone(), &reduced_modulus) {
            Ok(c) => c,
            Err(e) => {
                r.fail("reduced_context", e.to_string());
                return r;
            }
        };
        let n = self.graph().vertex_count();
        let support = reduced_modulus.points().to_vec();
        let ns = support.len();
        let ni = self.modulus().len();
        // S -> I incidence: (i, s) = 1 when w_i = s.
        let mut fibre = IntMatrix::zeros(ni, ns);
        for (j, &s) in support.iter().enumerate() {
            for i in self.modulus().indices_at(s) {
                fibre.set(i, j, BigInt::one());
            }
        }
        let zs = Arc::new(FgAbGroup::free(ns));
        let zi = Arc::new(FgAbGroup::free(ni));

        let tail = |rows: usize, cols: usize, offset: usize| {
            let mut m = IntMatrix::zeros(rows, cols);
            for j in 0..cols {
                m.set(offset + j, j, BigInt::one());
            }
            m
        };

        let cl = (|| -> Result<[GroupHom; 4]> {
            let f = GroupHom::induced(&zs, reduced.cl0m(), &tail(n - 1 + ns, ns, n - 1))?;
            let g = GroupHom::induced(&zs, &zi, &fibre)?;
            let h = GroupHom::induced(
                reduced.cl0m(),
                self.cl0m(),
                &IntMatrix::block_diag(&IntMatrix::identity(n - 1), &fibre),
            )?;
            let k = GroupHom::induced(&zi, self.cl0m(), &tail(n - 1 + ni, ni, n - 1))?;
            Ok([f, g, h, k])
        })();
        match cl {
            Ok([f, g, h, k]) => check_pushout(&mut r, "cl0", &f, &g, &h, &k),
            Err(e) => r.fail("cl0.maps", e.to_string()),
        }

        let clhat = (|| -> Result<[GroupHom; 4]> {
            let f = GroupHom::induced(&zs, reduced.clhat0m(), &tail(n + ns, ns, n))?;
            let g = GroupHom::induced(&zs, &zi, &fibre)?;
            let h = GroupHom::induced(
                reduced.clhat0m(),
                self.clhat0m(),
                &IntMatrix::block_diag(&IntMatrix::identity(n), &fibre),
            )?;
            let k = GroupHom::induced(&zi, self.clhat0m(), &tail(n + ni, ni, n))?;
            Ok([f, g, h, k])
        })();
        match clhat {
            Ok([f, g, h, k]) => check_pushout(&mut r, "clhat0", &f, &g, &h, &k),
            Err(e) => r.fail("clhat0.maps", e.to_string()),
        }
        r
    }

    /// All sequence, presentation and pushout checks.
    pub fn extension_sequences(&self) -> CheckReport {
        let mut r = CheckReport::new();
        r.extend("jacobian", self.jacobian_extension());
        r.extend("picard", self.picard_extension());
        r.extend("reduced", self.reduced_presentations());
        r.extend("pushout", self.pushout_squares());
        r
    }
}

#[cfg(test)]
mod tests {
    use super::super::tests::{figure_one, triangle};
    use super::*;
    use crate::graph::Modulus;
    use crate::report::Status;

    #[test]
    fn figure_one_sequences() {
        let ctx = figure_one();
        let r = ctx.extension_sequences();
        assert!(r.passed(), "{r:?}");
        assert_eq!(
            r.get("reduced.cl0m_reduced_iso").unwrap().status,
            Status::Pass
        );
    }

    #[test]
    fn epsilon_image_has_index_three() {
        let ctx = figure_one();
        let img: Vec<_> = (0..2).map(|i| ctx.epsilon(i)).collect();
        let sub = FgAbGroup::quotient(&IntMatrix::hcat(
            ctx.jm().ambient_rank(),
            &[
                ctx.jm().relations(),
                &IntMatrix::from_columns(ctx.jm().ambient_rank(), &img),
            ],
        ))
        .unwrap();
        assert_eq!(sub.order(), Some(BigInt::from(3)));
    }

    #[test]
    fn non_reduced_pushouts() {
        let g = triangle();
        for pts in [vec!["v", "v"], vec!["w1", "v", "w1", "w1"], vec!["w2"]] {
            let m = Modulus::new(&g, &pts).unwrap();
            let ctx = ModulusContext::new(&g, &m).unwrap();
            let r = ctx.extension_sequences();
            assert!(r.passed(), "{pts:?}: {r:?}");
        }
    }
}
