//! Sublattices of `Z^n` in canonical form.

use num_bigint::BigInt;

use super::matrix::{IntMatrix, IntVector};
use super::snf::{hermite_basis, kernel_basis, solve_integer};

/// A sublattice of `Z^dim`, stored by its canonical Hermite basis.
///
/// Equality of values is equality of lattices.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Lattice {
    dim: usize,
    basis: IntMatrix,
}

impl Lattice {
    pub fn from_generators(gens: &IntMatrix) -> Self {
        Lattice {
            dim: gens.rows(),
            basis: hermite_basis(gens),
        }
    }

    pub fn zero(dim: usize) -> Self {
        Lattice {
            dim,
            basis: IntMatrix::zeros(dim, 0),
        }
    }

    pub fn full(dim: usize) -> Self {
        Lattice {
            dim,
            basis: IntMatrix::identity(dim),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.basis.cols()
    }

    pub fn basis(&self) -> &IntMatrix {
        &self.basis
    }

    pub fn contains(&self, v: &[BigInt]) -> bool {
        solve_integer(&self.basis, v).is_some()
    }

    pub fn contains_lattice(&self, other: &Lattice) -> bool {
        other.basis.columns().iter().all(|c| self.contains(c))
    }

    pub fn sum(&self, other: &Lattice) -> Lattice {
        Lattice::from_generators(&IntMatrix::hcat(self.dim, &[&self.basis, &other.basis]))
    }

    /// `{x : <x, y> = 0 for all y in self}` under the standard inner product.
    pub fn orthogonal_complement(&self) -> Lattice {
        if self.rank() == 0 {
            return Lattice::full(self.dim);
        }
        Lattice::from_generators(&kernel_basis(&self.basis.transpose()))
    }

    /// Image of the lattice under `m`.
    pub fn image(&self, m: &IntMatrix) -> Lattice {
        Lattice::from_generators(&(m * &self.basis))
    }

    /// Whether the lattice is a direct summand (`Z^n / L` torsion free).
    pub fn is_saturated(&self) -> bool {
        let s = super::snf::snf(&self.basis);
        s.diagonal().iter().all(|d| *d == BigInt::from(1))
    }

    pub fn basis_columns(&self) -> Vec<IntVector> {
        self.basis.columns()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::matrix::int_vec;

    #[test]
    fn orthogonal_complement_of_diagonal() {
        let l = Lattice::from_generators(&IntMatrix::from_rows(&[vec![1], vec![1], vec![1]]));
        let perp = l.orthogonal_complement();
        assert_eq!(perp.rank(), 2);
        assert!(perp.contains(&int_vec(&[1, -1, 0])));
        assert_eq!(perp.orthogonal_complement(), l);
    }

    #[test]
    fn saturation() {
        let l = Lattice::from_generators(&IntMatrix::from_rows(&[vec![2], vec![0]]));
        assert!(!l.is_saturated());
        assert!(Lattice::full(3).is_saturated());
    }
}
