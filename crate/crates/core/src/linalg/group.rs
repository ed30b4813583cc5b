//! Finitely generated abelian groups presented as subquotients `A / B` of `Z^n`.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::lattice::Lattice;
use super::matrix::{IntMatrix, IntVector};
use super::snf::{hermite_basis, snf, solve_with, SnfResult};
use crate::error::{Error, Result};

/// Element of an [`FgAbGroup`] in normal form.
///
/// Torsion coordinates are reduced modulo the matching invariant factor, so
/// two elements of the same group are equal iff their coordinates are.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GroupElement {
    pub torsion: IntVector,
    pub free: IntVector,
}

impl GroupElement {
    /// Torsion coordinates followed by free coordinates.
    pub fn coords(&self) -> IntVector {
        self.torsion.iter().chain(&self.free).cloned().collect()
    }

    pub fn is_zero(&self) -> bool {
        self.torsion.iter().chain(&self.free).all(Zero::is_zero)
    }
}

/// Isomorphism type `Z^r ⊕ Z/d1 ⊕ ... ⊕ Z/dk` with `d1 | d2 | ... | dk`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GroupSummary {
    pub free_rank: usize,
    pub invariant_factors: Vec<BigInt>,
}

impl fmt::Display for GroupSummary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        for d in &self.invariant_factors {
            parts.push(format!("Z/{d}"));
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" ⊕ "))
        }
    }
}

impl FromStr for GroupSummary {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let mut summary = GroupSummary {
            free_rank: 0,
            invariant_factors: Vec::new(),
        };
        if s == "0" {
            return Ok(summary);
        }
        let bad = || Error::Parse(format!("malformed group string `{s}`"));
        for part in s.split('⊕').map(str::trim) {
            if part == "Z" {
                summary.free_rank += 1;
            } else if let Some(r) = part.strip_prefix("Z^") {
                summary.free_rank += r.parse::<usize>().map_err(|_| bad())?;
            } else if let Some(d) = part.strip_prefix("Z/") {
                let d: BigInt = d.parse().map_err(|_| bad())?;
                if d < BigInt::from(2) {
                    return Err(bad());
                }
                summary.invariant_factors.push(d);
            } else {
                return Err(bad());
            }
        }
        Ok(summary)
    }
}

#[derive(Clone, Debug)]
struct Normalizer {
    numerator_snf: SnfResult,
    /// Maps numerator coordinates (after dividing by the numerator SNF
    /// diagonal) to normal-form coordinates.
    to_coords: IntMatrix,
}

/// Finitely generated abelian group `A / B` with `B ⊆ A ⊆ Z^n`.
#[derive(Clone, Debug)]
pub struct FgAbGroup {
    ambient_rank: usize,
    numerator: IntMatrix,
    relations: IntMatrix,
    invariant_factors: Vec<BigInt>,
    free_rank: usize,
    generators: IntMatrix,
    normalizer: Normalizer,
}

impl PartialEq for FgAbGroup {
    /// Equality of presentations: same ambient lattice, numerator and relation lattice.
    fn eq(&self, other: &Self) -> bool {
        self.ambient_rank == other.ambient_rank
            && self.numerator == other.numerator
            && Lattice::from_generators(&self.relations)
                == Lattice::from_generators(&other.relations)
    }
}

/// Builds the group `span(numerator) / span(denominator)` inside `Z^ambient_rank`.
pub fn subquotient(
    ambient_rank: usize,
    numerator: &IntMatrix,
    denominator: &IntMatrix,
) -> Result<FgAbGroup> {
    if numerator.rows() != ambient_rank || denominator.rows() != ambient_rank {
        return Err(Error::DimensionMismatch(format!(
            "subquotient of Z^{ambient_rank} with generator rows {} and {}",
            numerator.rows(),
            denominator.rows()
        )));
    }
    let basis = hermite_basis(numerator);
    let a = basis.cols();
    let numerator_snf = snf(&basis);
    let mut rel_coords = Vec::with_capacity(denominator.cols());
    for (j, col) in denominator.columns().iter().enumerate() {
        match solve_with(&numerator_snf, col) {
            Some(y) => rel_coords.push(y),
            None => return Err(Error::NotASubgroup { column: j }),
        }
    }
    let x = IntMatrix::from_columns(a, &rel_coords);
    let rel_snf = snf(&x);
    let diag = rel_snf.diagonal();
    let rank = diag.len();
    let mut kept = Vec::new();
    let mut invariant_factors = Vec::new();
    for (i, d) in diag.iter().enumerate() {
        if !d.is_one() {
            kept.push(i);
            invariant_factors.push(d.clone());
        }
    }
    kept.extend(rank..a);
    let free_rank = a - rank;
    let to_coords = (&rel_snf.u * &numerator_snf.v).select_rows(&kept);
    let generators = (&basis * &rel_snf.u_inv).select_columns(&kept);
    Ok(FgAbGroup {
        ambient_rank,
        numerator: basis,
        relations: denominator.clone(),
        invariant_factors,
        free_rank,
        generators,
        normalizer: Normalizer {
            numerator_snf,
            to_coords,
        },
    })
}

impl FgAbGroup {
    /// `Z^n / span(relations)`.
    pub fn quotient(relations: &IntMatrix) -> Result<FgAbGroup> {
        let n = relations.rows();
        subquotient(n, &IntMatrix::identity(n), relations)
    }

    /// Free group `Z^n` on the standard basis.
    pub fn free(n: usize) -> FgAbGroup {
        subquotient(n, &IntMatrix::identity(n), &IntMatrix::zeros(n, 0))
            .expect("free group presentation")
    }

    /// Cyclic group `Z/n` (`Z` for `n = 0`).
    pub fn cyclic(n: i64) -> FgAbGroup {
        FgAbGroup::quotient(&IntMatrix::from_rows(&[vec![n]])).expect("cyclic presentation")
    }

    pub fn ambient_rank(&self) -> usize {
        self.ambient_rank
    }

    /// Hermite basis of the numerator lattice.
    pub fn numerator(&self) -> &IntMatrix {
        &self.numerator
    }

    /// Relation generators as supplied at construction.
    pub fn relations(&self) -> &IntMatrix {
        &self.relations
    }

    pub fn invariant_factors(&self) -> &[BigInt] {
        &self.invariant_factors
    }

    pub fn free_rank(&self) -> usize {
        self.free_rank
    }

    pub fn torsion_rank(&self) -> usize {
        self.invariant_factors.len()
    }

    /// Number of normal-form coordinates.
    pub fn coord_rank(&self) -> usize {
        self.invariant_factors.len() + self.free_rank
    }

    /// Ambient representatives of the normal-form generators, as columns.
    pub fn generators(&self) -> &IntMatrix {
        &self.generators
    }

    pub fn summary(&self) -> GroupSummary {
        GroupSummary {
            free_rank: self.free_rank,
            invariant_factors: self.invariant_factors.clone(),
        }
    }

    pub fn is_trivial(&self) -> bool {
        self.coord_rank() == 0
    }

    pub fn is_finite(&self) -> bool {
        self.free_rank == 0
    }

    /// Group order, or `None` if infinite.
    pub fn order(&self) -> Option<BigInt> {
        self.is_finite()
            .then(|| self.invariant_factors.iter().product())
    }

    /// Exponent of the torsion subgroup.
    pub fn exponent(&self) -> BigInt {
        self.invariant_factors
            .last()
            .cloned()
            .unwrap_or_else(BigInt::one)
    }

    /// Coordinate relations: column `i` is `d_i e_i` for each torsion coordinate.
    pub fn coord_relations(&self) -> IntMatrix {
        let n = self.coord_rank();
        let mut m = IntMatrix::zeros(n, self.torsion_rank());
        for (i, d) in self.invariant_factors.iter().enumerate() {
            m.set(i, i, d.clone());
        }
        m
    }

    /// Normal form of a coordinate vector.
    pub fn element(&self, coords: &[BigInt]) -> GroupElement {
        assert_eq!(
            coords.len(),
            self.coord_rank(),
            "coordinate length mismatch"
        );
        let t = self.torsion_rank();
        GroupElement {
            torsion: coords[..t]
                .iter()
                .zip(&self.invariant_factors)
                .map(|(c, d)| c.mod_floor(d))
                .collect(),
            free: coords[t..].to_vec(),
        }
    }

    pub fn zero(&self) -> GroupElement {
        self.element(&vec![BigInt::zero(); self.coord_rank()])
    }

    /// The `i`-th normal-form generator.
    pub fn generator(&self, i: usize) -> GroupElement {
        let mut c = vec![BigInt::zero(); self.coord_rank()];
        c[i] = BigInt::one();
        self.element(&c)
    }

    /// Normal form of an ambient vector of the numerator.
    pub fn project(&self, x: &[BigInt]) -> Result<GroupElement> {
        if x.len() != self.ambient_rank {
            return Err(Error::DimensionMismatch(format!(
                "vector of length {} in Z^{}",
                x.len(),
                self.ambient_rank
            )));
        }
        let s = &self.normalizer.numerator_snf;
        let w = s.u.mul_vec(x);
        let diag = s.diagonal();
        let mut y = vec![BigInt::zero(); diag.len()];
        for (i, wi) in w.iter().enumerate() {
            match diag.get(i) {
                Some(d) => {
                    let (q, r) = wi.div_rem(d);
                    if !r.is_zero() {
                        return Err(Error::NotInSubgroup);
                    }
                    y[i] = q;
                }
                None if !wi.is_zero() => return Err(Error::NotInSubgroup),
                None => {}
            }
        }
        Ok(self.element(&self.normalizer.to_coords.mul_vec(&y)))
    }

    /// Ambient representative of an element.
    pub fn lift(&self, e: &GroupElement) -> IntVector {
        self.generators.mul_vec(&e.coords())
    }

    pub fn add(&self, a: &GroupElement, b: &GroupElement) -> GroupElement {
        let c: IntVector = a
            .coords()
            .iter()
            .zip(b.coords())
            .map(|(x, y)| x + y)
            .collect();
        self.element(&c)
    }

    pub fn neg(&self, a: &GroupElement) -> GroupElement {
        let c: IntVector = a.coords().iter().map(|x| -x).collect();
        self.element(&c)
    }

    pub fn sub(&self, a: &GroupElement, b: &GroupElement) -> GroupElement {
        self.add(a, &self.neg(b))
    }

    pub fn scale(&self, k: &BigInt, a: &GroupElement) -> GroupElement {
        let c: IntVector = a.coords().iter().map(|x| x * k).collect();
        self.element(&c)
    }

    /// Order of an element, or `None` if it has infinite order.
    pub fn element_order(&self, a: &GroupElement) -> Option<BigInt> {
        if a.free.iter().any(|x| !x.is_zero()) {
            return None;
        }
        Some(
            a.torsion
                .iter()
                .zip(&self.invariant_factors)
                .fold(BigInt::one(), |acc, (c, d)| acc.lcm(&(d / c.gcd(d)))),
        )
    }

    /// All elements of a finite group in lexicographic coordinate order.
    pub fn elements(&self) -> Vec<GroupElement> {
        assert!(self.is_finite(), "enumerating an infinite group");
        let mut out = vec![Vec::<BigInt>::new()];
        for d in &self.invariant_factors {
            let mut next = Vec::new();
            for prefix in &out {
                let mut k = BigInt::zero();
                while &k < d {
                    let mut c = prefix.clone();
                    c.push(k.clone());
                    next.push(c);
                    k += 1;
                }
            }
            out = next;
        }
        out.into_iter().map(|c| self.element(&c)).collect()
    }

    /// Lattice of coordinate vectors representing zero.
    pub fn relation_lattice(&self) -> Lattice {
        Lattice::from_generators(&self.coord_relations())
    }

    /// Whether two presentations have the same isomorphism type.
    pub fn isomorphic_to(&self, other: &FgAbGroup) -> bool {
        self.summary() == other.summary()
    }
}

impl fmt::Display for FgAbGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.summary())
    }
}

/// Formats a vector for witness messages.
pub(crate) fn describe_vector(v: &[BigInt]) -> String {
    let parts: Vec<String> = v.iter().map(|x| x.to_string()).collect();
    format!("({})", parts.join(", "))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::matrix::int_vec;

    #[test]
    fn cyclic_of_order_two() {
        let g = subquotient(
            1,
            &IntMatrix::identity(1),
            &IntMatrix::from_rows(&[vec![2]]),
        )
        .unwrap();
        assert_eq!(g.invariant_factors(), &int_vec(&[2])[..]);
        assert_eq!(g.project(&int_vec(&[3])).unwrap().torsion, int_vec(&[1]));
        assert!(g.project(&int_vec(&[2])).unwrap().is_zero());
    }

    #[test]
    fn diag_2_3_is_cyclic_of_order_six() {
        let g = FgAbGroup::quotient(&IntMatrix::from_rows(&[vec![2, 0], vec![0, 3]])).unwrap();
        assert_eq!(g.summary().to_string(), "Z/6");
        assert_eq!(g.free_rank(), 0);
        let e = g.project(&int_vec(&[1, 1])).unwrap();
        assert_eq!(g.element_order(&e), Some(BigInt::from(6)));
    }

    #[test]
    fn free_of_rank_two() {
        let g = subquotient(2, &IntMatrix::identity(2), &IntMatrix::zeros(2, 0)).unwrap();
        assert_eq!(g.free_rank(), 2);
        assert_eq!(g.summary().to_string(), "Z^2");
    }

    #[test]
    fn containment_is_checked() {
        let num = IntMatrix::from_rows(&[vec![2]]);
        let den = IntMatrix::from_rows(&[vec![3]]);
        assert!(matches!(
            subquotient(1, &num, &den),
            Err(Error::NotASubgroup { column: 0 })
        ));
    }

    #[test]
    fn project_rejects_vectors_outside_numerator() {
        let g = subquotient(
            1,
            &IntMatrix::from_rows(&[vec![2]]),
            &IntMatrix::from_rows(&[vec![6]]),
        )
        .unwrap();
        assert_eq!(g.summary().to_string(), "Z/3");
        assert!(matches!(
            g.project(&int_vec(&[1])),
            Err(Error::NotInSubgroup)
        ));
        assert_eq!(
            g.element_order(&g.project(&int_vec(&[2])).unwrap()),
            Some(BigInt::from(3))
        );
    }

    #[test]
    fn summary_round_trip() {
        for s in ["0", "Z", "Z^3", "Z/2 ⊕ Z/4", "Z^2 ⊕ Z/3 ⊕ Z/6"] {
            let parsed: GroupSummary = s.parse().unwrap();
            assert_eq!(parsed.to_string(), s);
        }
        assert!("Z/1".parse::<GroupSummary>().is_err());
        assert!("Q".parse::<GroupSummary>().is_err());
    }

    #[test]
    fn lift_then_project_is_identity() {
        let g = FgAbGroup::quotient(&IntMatrix::from_rows(&[
            vec![4, 6],
            vec![6, 10],
            vec![0, 0],
        ]))
        .unwrap();
        assert_eq!(g.summary().to_string(), "Z ⊕ Z/2 ⊕ Z/2");
        for i in 0..g.coord_rank() {
            let e = g.generator(i);
            assert_eq!(g.project(&g.lift(&e)).unwrap(), e);
        }
    }

    #[test]
    fn enumeration_counts() {
        let g = FgAbGroup::quotient(&IntMatrix::from_rows(&[vec![2, 0], vec![0, 4]])).unwrap();
        assert_eq!(g.elements().len(), 8);
    }
}
