//! Named verification suites and the group summaries shown by the CLI.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::genjac::abstract_engine::compare_with_modulus;
use crate::genjac::ModulusContext;
use crate::graph::{Graph, Modulus};
use crate::jacobian::JacobianContext;
use crate::linalg::FgAbGroup;
use crate::morphisms::{functoriality_suite, GraphMorphism};
use crate::report::CheckReport;
use crate::sheaf::{picard_geometric, rigidified_picard, verify_sign_law, verify_sign_law_m};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    Abel,
    AbelM,
    Diagrams,
    Sheaf,
    SheafM,
    ExtDuality,
    Abstract,
    Functoriality,
}

impl Suite {
    pub const ALL: [Suite; 8] = [
        Suite::Abel,
        Suite::AbelM,
        Suite::Diagrams,
        Suite::Sheaf,
        Suite::SheafM,
        Suite::ExtDuality,
        Suite::Abstract,
        Suite::Functoriality,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Abel => "abel",
            Suite::AbelM => "abel-m",
            Suite::Diagrams => "diagrams",
            Suite::Sheaf => "sheaf",
            Suite::SheafM => "sheaf-m",
            Suite::ExtDuality => "ext-duality",
            Suite::Abstract => "abstract",
            Suite::Functoriality => "functoriality",
        }
    }

    pub fn needs_modulus(self) -> bool {
        matches!(
            self,
            Suite::AbelM | Suite::SheafM | Suite::ExtDuality | Suite::Abstract
        )
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| Error::Parse(format!("unknown suite `{s}`")))
    }
}

/// One group of the `groups` command.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GroupRecord {
    pub name: String,
    pub group: String,
    pub free_rank: usize,
    pub invariant_factors: Vec<String>,
}

impl GroupRecord {
    pub fn new(name: &str, g: &FgAbGroup) -> Self {
        let s = g.summary();
        GroupRecord {
            name: name.to_string(),
            group: s.to_string(),
            free_rank: s.free_rank,
            invariant_factors: s.invariant_factors.iter().map(BigInt::to_string).collect(),
        }
    }
}

/// `J, Cl⁰, P, Ĉl⁰` and, with a modulus, `J_m, Cl⁰_m, P_m, Pic_m(|Γ|)`.
pub fn group_records(g: &Graph, m: Option<&Modulus>) -> Result<Vec<GroupRecord>> {
    let ctx = JacobianContext::new(g)?;
    let mut out = vec![
        GroupRecord::new("J(Γ)", ctx.jac()),
        GroupRecord::new("Cl⁰(Γ)", ctx.cl0()),
        GroupRecord::new("P(Γ)", ctx.pic()),
        GroupRecord::new("Ĉl⁰(Γ)", ctx.clhat0()),
    ];
    if let Some(m) = m {
        let mc = ModulusContext::from_base(ctx, m)?;
        out.push(GroupRecord::new("J_m(Γ)", mc.jm()));
        out.push(GroupRecord::new("Cl⁰_m(Γ)", mc.cl0m()));
        out.push(GroupRecord::new("P_m(Γ)", mc.pm()));
        // The sheaf model needs every vertex to carry an edge.
        if g.edge_count() > 0 {
            out.push(GroupRecord::new(
                "Pic_m(|Γ|)",
                &rigidified_picard(g, m)?.picm,
            ));
        }
    }
    Ok(out)
}

fn reduced_laplacian_det(ctx: &JacobianContext) -> BigInt {
    let n = ctx.graph().vertex_count();
    let keep: Vec<usize> = (1..n).collect();
    ctx.complex()
        .laplacian0()
        .select_rows(&keep)
        .select_columns(&keep)
        .det()
}

fn require_modulus(suite: Suite, m: Option<&Modulus>) -> Result<&Modulus> {
    m.ok_or_else(|| Error::PreconditionViolated(format!("suite `{suite}` needs a modulus")))
}

/// Runs `suite` on a graph. Theorem failures are recorded in the report;
/// structural problems such as a disconnected graph are errors.
pub fn run_suite(suite: Suite, g: &Graph, m: Option<&Modulus>) -> Result<CheckReport> {
    let mut r = CheckReport::new();
    match suite {
        Suite::Abel => {
            let ctx = JacobianContext::new(g)?;
            r.record_result("abel", ctx.verify_abel());
            let det = reduced_laplacian_det(&ctx);
            let order = ctx.jac().order();
            r.record("matrix_tree", order.as_ref() == Some(&det), || {
                format!("|J| = {order:?}, det Δ₀' = {det}")
            });
            match ctx.pairing_is_perfect() {
                Ok(ok) => r.record("pairing_perfect", ok, || "J x P pairing degenerate".into()),
                Err(e) => r.fail("pairing_perfect", e.to_string()),
            }
            match ctx.harmonic_discriminant() {
                Ok(d) => r.record(
                    "discriminant_eq_jac",
                    d.group().isomorphic_to(ctx.jac()),
                    || format!("Ha¹#/Ha¹ = {} vs J = {}", d.group(), ctx.jac()),
                ),
                Err(e) => r.fail("discriminant_eq_jac", e.to_string()),
            }
            r.extend("hodge", ctx.complex().hodge_checks());
        }
        Suite::AbelM => {
            let ctx = ModulusContext::new(g, require_modulus(suite, m)?)?;
            r.record_result("abel_m", ctx.verify_abel_m());
        }
        Suite::Diagrams => {
            let ctx = JacobianContext::new(g)?;
            r.extend("plain", ctx.verify_diagram());
            if let Some(m) = m {
                let mc = ModulusContext::from_base(ctx, m)?;
                r.extend("modulus", mc.verify_diagram_m());
                r.extend("sequences", mc.extension_sequences());
            }
        }
        Suite::Sheaf => {
            if !g.is_connected() {
                return Err(Error::NotConnected);
            }
            r.extend("picard", picard_geometric(g)?.report);
            r.extend("sign", verify_sign_law(g)?);
        }
        Suite::SheafM => {
            let m = require_modulus(suite, m)?;
            if !g.is_connected() {
                return Err(Error::NotConnected);
            }
            r.extend("picard_m", rigidified_picard(g, m)?.report);
            r.extend("sign_m", verify_sign_law_m(g, m)?);
        }
        Suite::ExtDuality => {
            let ctx = ModulusContext::new(g, require_modulus(suite, m)?)?;
            let out = ctx.ext_duality()?;
            r.extend("ext", out.report);
        }
        Suite::Abstract => {
            let ctx = ModulusContext::new(g, require_modulus(suite, m)?)?;
            r.extend("engine", compare_with_modulus(&ctx));
        }
        Suite::Functoriality => {
            return Err(Error::PreconditionViolated(
                "suite `functoriality` needs a morphism".into(),
            ))
        }
    }
    Ok(r)
}

/// The functoriality suite on a morphism with optional moduli.
pub fn run_functoriality(
    f: &GraphMorphism,
    m: Option<&Modulus>,
    m2: Option<&Modulus>,
) -> Result<CheckReport> {
    functoriality_suite(f, m, m2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::build_graph;
    use crate::linalg::GroupSummary;

    fn triangle() -> Graph {
        build_graph(
            &["w1", "w2", "v"],
            &[("g", "w1", "w2"), ("h", "w2", "v"), ("f", "v", "w1")],
        )
        .unwrap()
    }

    #[test]
    fn suite_names_round_trip() {
        for s in Suite::ALL {
            assert_eq!(s.name().parse::<Suite>().unwrap(), s);
        }
        assert!("nope".parse::<Suite>().is_err());
    }

    #[test]
    fn triangle_groups() {
        let g = triangle();
        let m = Modulus::new(&g, &["w1", "w2"]).unwrap();
        let recs = group_records(&g, Some(&m)).unwrap();
        let get = |n: &str| recs.iter().find(|r| r.name == n).unwrap().group.clone();
        assert_eq!(get("J(Γ)"), "Z/3");
        assert_eq!(get("J_m(Γ)"), "Z");
        for rec in &recs {
            let s: GroupSummary = rec.group.parse().unwrap();
            assert_eq!(s.free_rank, rec.free_rank);
            let f: Vec<String> = s.invariant_factors.iter().map(|d| d.to_string()).collect();
            assert_eq!(f, rec.invariant_factors);
        }
    }

    #[test]
    fn every_suite_passes_on_figure_one() {
        let g = triangle();
        let m = Modulus::new(&g, &["w1", "w2"]).unwrap();
        for s in Suite::ALL
            .into_iter()
            .filter(|&s| s != Suite::Functoriality)
        {
            let r = run_suite(s, &g, Some(&m)).unwrap();
            assert!(r.passed(), "{s}: {r:?}");
        }
        assert!(matches!(
            run_suite(Suite::AbelM, &g, None),
            Err(Error::PreconditionViolated(_))
        ));
    }

    #[test]
    fn disconnected_graph_is_an_error() {
        let g = build_graph(&["a", "b"], &[("l", "a", "a"), ("k", "b", "b")]).unwrap();
        for s in [Suite::Abel, Suite::Sheaf] {
            assert_eq!(run_suite(s, &g, None).unwrap_err(), Error::NotConnected);
        }
    }
}
