//! The extension class of `0 -> Z^I/Z -> P_m -> P -> 0` against Abel–Jacobi.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use super::ModulusContext;
use crate::error::{Error, Result};
use crate::graph::Modulus;
use crate::jacobian::{mod_one, JacobianContext};
use crate::linalg::{solve_integer, GroupElement, IntMatrix, IntVector};
use crate::report::CheckReport;

/// One row of the comparison: `D = i_k - i_0` against a generator of `P`.
#[derive(Clone, Debug, Serialize)]
pub struct ExtPairingValue {
    pub index: usize,
    pub generator: usize,
    pub connecting: String,
    pub pairing: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct ExtDuality {
    /// `None` when every value vanishes and the sign is undetermined.
    pub sign: Option<i8>,
    pub values: Vec<ExtPairingValue>,
    pub report: CheckReport,
}

impl ModulusContext {
    /// Evaluates the connecting map `P -> Ext(Z[I]₀, Q/Z)` on `(D, x)`.
    ///
    /// Lifts `x` to `P_m` by extension by zero, multiplies by its order `n`,
    /// reads off `n x̃ = (0, g)` modulo `j_! Ha¹ + im d_m` and returns
    /// `D·g / n` modulo 1.
    pub fn connecting_value(&self, d: &[BigInt], x: &GroupElement) -> Result<BigRational> {
        let ni = self.modulus().len();
        if d.len() != ni {
            return Err(Error::DimensionMismatch(
                "one coefficient per modulus index".into(),
            ));
        }
        if !d.iter().sum::<BigInt>().is_zero() {
            return Err(Error::NonZeroDegree(d.iter().sum()));
        }
        let pic = self.base().pic();
        let n = pic
            .element_order(x)
            .ok_or_else(|| Error::PreconditionViolated("P(Γ) element of infinite order".into()))?;
        let e = self.graph().edge_count();
        let omega = pic.lift(x);
        let embed_i = IntMatrix::vcat(ni, &[&IntMatrix::zeros(e, ni), &IntMatrix::identity(ni)]);
        let system = IntMatrix::hcat(e + ni, &[&self.jshriek_harmonic(), self.d_m(), &embed_i]);
        let mut target: IntVector = omega.iter().map(|w| w * &n).collect();
        target.resize(e + ni, BigInt::zero());
        let sol = solve_integer(&system, &target)
            .ok_or_else(|| Error::violation("connecting_value", "n x̃ not in the image of Z^I"))?;
        let g = &sol[sol.len() - ni..];
        let value: BigInt = d.iter().zip(g).map(|(a, b)| a * b).sum();
        Ok(mod_one(BigRational::new(value, n)))
    }

    /// `ρ_* D ∈ Div⁰(Γ)` for `D ∈ Z[I]₀`.
    pub fn push_to_vertices(&self, d: &[BigInt]) -> IntVector {
        self.restriction().transpose().mul_vec(d)
    }

    /// Compares the connecting map with `⟨AJ(ρ_* D), x⟩` on generators.
    pub fn ext_duality(&self) -> Result<ExtDuality> {
        let ni = self.modulus().len();
        let pic = self.base().pic();
        let mut values = Vec::new();
        let (mut plus, mut minus, mut nonzero) = (true, true, false);
        for k in 1..ni {
            let mut d = vec![BigInt::zero(); ni];
            d[k] = BigInt::one();
            d[0] = -BigInt::one();
            let aj = self.base().abel_jacobi(&self.push_to_vertices(&d))?;
            for j in 0..pic.coord_rank() {
                let x = pic.generator(j);
                let c = self.connecting_value(&d, &x)?;
                let p = self.base().duality_pairing(&aj, &x);
                plus &= c == p;
                minus &= c == mod_one(-p.clone());
                nonzero |= !c.is_zero() || !p.is_zero();
                values.push(ExtPairingValue {
                    index: k,
                    generator: j,
                    connecting: c.to_string(),
                    pairing: p.to_string(),
                });
            }
        }
        let mut report = CheckReport::new();
        report.record("equal_up_to_sign", plus || minus, || {
            let bad = values
                .iter()
                .find(|v| v.connecting != v.pairing)
                .map(|v| format!("{v:?}"))
                .unwrap_or_default();
            format!("no global sign fits, e.g. {bad}")
        });
        let sign = match (nonzero, plus, minus) {
            (false, _, _) => None,
            (true, true, _) => Some(1),
            (true, false, true) => Some(-1),
            _ => None,
        };
        match sign {
            Some(s) => report.note("sign", s.to_string()),
            None => report.skip("sign", "all values vanish or no sign fits"),
        }
        Ok(ExtDuality {
            sign,
            values,
            report,
        })
    }
}

/// `ext_duality` for `m` on an already built base context.
pub fn ext_class_vs_aj(base: &JacobianContext, m: &Modulus) -> Result<ExtDuality> {
    ModulusContext::from_base(base.clone(), m)?.ext_duality()
}

#[cfg(test)]
mod tests {
    use super::super::tests::{figure_one, triangle};
    use super::*;
    use crate::graph::build_graph;
    use crate::linalg::int_vec;

    fn third(k: i64) -> BigRational {
        BigRational::new(BigInt::from(k), BigInt::from(3))
    }

    #[test]
    fn figure_one_values_are_thirds() {
        let ctx = figure_one();
        let x = ctx.base().pic().generator(0);
        let c = ctx.connecting_value(&int_vec(&[1, -1]), &x).unwrap();
        assert!(c == third(1) || c == third(2), "{c}");
        let out = ctx.ext_duality().unwrap();
        assert!(out.report.passed(), "{:?}", out.report);
        assert_eq!(out.sign, Some(1));
    }

    #[test]
    fn sign_is_global() {
        let k4 = build_graph(
            &["a", "b", "c", "d"],
            &[
                ("ab", "a", "b"),
                ("ac", "a", "c"),
                ("ad", "a", "d"),
                ("bc", "b", "c"),
                ("bd", "b", "d"),
                ("cd", "c", "d"),
            ],
        )
        .unwrap();
        let base = JacobianContext::new(&k4).unwrap();
        for pts in [vec!["a", "b"], vec!["a", "c", "d"], vec!["b", "b", "d"]] {
            let m = Modulus::new(&k4, &pts).unwrap();
            let out = ext_class_vs_aj(&base, &m).unwrap();
            assert_eq!(out.sign, Some(1), "{pts:?}");
        }
        let tri = triangle();
        let m = Modulus::new(&tri, &["v"]).unwrap();
        let out = ext_class_vs_aj(&JacobianContext::new(&tri).unwrap(), &m).unwrap();
        assert_eq!(out.sign, None);
        assert!(out.report.passed());
    }

    #[test]
    fn rejects_positive_degree() {
        let ctx = figure_one();
        let x = ctx.base().pic().generator(0);
        assert!(matches!(
            ctx.connecting_value(&int_vec(&[1, 0]), &x),
            Err(Error::NonZeroDegree(_))
        ));
    }
}
