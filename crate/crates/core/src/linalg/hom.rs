//! Verified homomorphisms between presented groups.

use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::group::{describe_vector, subquotient, FgAbGroup, GroupElement};
use super::lattice::Lattice;
use super::matrix::{IntMatrix, IntVector};
use super::snf::{kernel_basis, snf, solve_with};
use crate::error::{Error, Result};

/// Homomorphism between two [`FgAbGroup`]s.
///
/// Stored as a matrix on normal-form coordinates, normalized column by
/// column, so equality of homs is equality of generator images. When the hom
/// was induced by an ambient matrix that matrix is kept as well.
#[derive(Clone, Debug)]
pub struct GroupHom {
    source: Arc<FgAbGroup>,
    target: Arc<FgAbGroup>,
    matrix: IntMatrix,
    ambient: Option<IntMatrix>,
}

/// Equal presentations can still carry different normal-form coordinates,
/// so the chosen generators must agree too.
fn same_group(a: &Arc<FgAbGroup>, b: &Arc<FgAbGroup>) -> bool {
    Arc::ptr_eq(a, b) || (**a == **b && a.generators() == b.generators())
}

impl GroupHom {
    /// Hom induced by an ambient matrix `Z^n -> Z^m`.
    ///
    /// Checks that the numerator of `source` lands in the numerator of
    /// `target` and that relations land in relations.
    pub fn induced(
        source: &Arc<FgAbGroup>,
        target: &Arc<FgAbGroup>,
        ambient: &IntMatrix,
    ) -> Result<GroupHom> {
        if ambient.rows() != target.ambient_rank() || ambient.cols() != source.ambient_rank() {
            return Err(Error::DimensionMismatch(format!(
                "ambient matrix {}x{} for Z^{} -> Z^{}",
                ambient.rows(),
                ambient.cols(),
                source.ambient_rank(),
                target.ambient_rank()
            )));
        }
        let images = ambient * source.numerator();
        let mut hom = GroupHom::from_generators(source, target, source.numerator(), &images)?;
        hom.ambient = Some(ambient.clone());
        Ok(hom)
    }

    /// Hom sending the ambient vectors `gens` (columns spanning the source
    /// numerator) to the ambient vectors `images` of the target.
    ///
    /// Well-definedness is checked on the integer relations among `gens` and
    /// on the source relations.
    pub fn from_generators(
        source: &Arc<FgAbGroup>,
        target: &Arc<FgAbGroup>,
        gens: &IntMatrix,
        images: &IntMatrix,
    ) -> Result<GroupHom> {
        if gens.rows() != source.ambient_rank()
            || images.rows() != target.ambient_rank()
            || gens.cols() != images.cols()
        {
            return Err(Error::DimensionMismatch(
                "generator and image matrices do not match the groups".into(),
            ));
        }
        let mut image_coords = Vec::with_capacity(images.cols());
        for (j, col) in images.columns().iter().enumerate() {
            match target.project(col) {
                Ok(e) => image_coords.push(e.coords()),
                Err(_) => {
                    return Err(Error::NotWellDefined(format!(
                        "image {} of generator {j} lies outside the target numerator",
                        describe_vector(col)
                    )))
                }
            }
        }
        let coords = IntMatrix::from_columns(target.coord_rank(), &image_coords);
        for (j, k) in kernel_basis(gens).columns().iter().enumerate() {
            if !target.element(&coords.mul_vec(k)).is_zero() {
                return Err(Error::NotWellDefined(format!(
                    "generator relation {j} {} has nonzero image",
                    describe_vector(k)
                )));
            }
        }
        let gens_snf = snf(gens);
        for (j, r) in source.relations().columns().iter().enumerate() {
            let Some(y) = solve_with(&gens_snf, r) else {
                return Err(Error::NotWellDefined(format!(
                    "relation column {j} is not generated by the given generators"
                )));
            };
            if !target.element(&coords.mul_vec(&y)).is_zero() {
                return Err(Error::NotWellDefined(format!(
                    "relation column {j} {} maps outside the target relations",
                    describe_vector(r)
                )));
            }
        }
        let mut columns = Vec::with_capacity(source.coord_rank());
        for c in source.generators().columns() {
            let y = solve_with(&gens_snf, &c).ok_or_else(|| {
                Error::NotWellDefined("generators do not span the source numerator".into())
            })?;
            columns.push(target.element(&coords.mul_vec(&y)).coords());
        }
        Ok(GroupHom {
            source: source.clone(),
            target: target.clone(),
            matrix: IntMatrix::from_columns(target.coord_rank(), &columns),
            ambient: None,
        })
    }

    /// Hom given directly on normal-form coordinates.
    pub fn from_coords(
        source: &Arc<FgAbGroup>,
        target: &Arc<FgAbGroup>,
        matrix: &IntMatrix,
    ) -> Result<GroupHom> {
        if matrix.rows() != target.coord_rank() || matrix.cols() != source.coord_rank() {
            return Err(Error::DimensionMismatch("coordinate matrix shape".into()));
        }
        for (i, d) in source.invariant_factors().iter().enumerate() {
            let col: IntVector = matrix.column(i).iter().map(|x| x * d).collect();
            if !target.element(&col).is_zero() {
                return Err(Error::NotWellDefined(format!(
                    "torsion generator {i} of order {d} has image of larger order"
                )));
            }
        }
        let columns: Vec<IntVector> = matrix
            .columns()
            .iter()
            .map(|c| target.element(c).coords())
            .collect();
        Ok(GroupHom {
            source: source.clone(),
            target: target.clone(),
            matrix: IntMatrix::from_columns(target.coord_rank(), &columns),
            ambient: None,
        })
    }

    pub fn identity(group: &Arc<FgAbGroup>) -> GroupHom {
        GroupHom {
            source: group.clone(),
            target: group.clone(),
            matrix: IntMatrix::identity(group.coord_rank()),
            ambient: Some(IntMatrix::identity(group.ambient_rank())),
        }
    }

    pub fn zero(source: &Arc<FgAbGroup>, target: &Arc<FgAbGroup>) -> GroupHom {
        GroupHom {
            source: source.clone(),
            target: target.clone(),
            matrix: IntMatrix::zeros(target.coord_rank(), source.coord_rank()),
            ambient: None,
        }
    }

    pub fn source(&self) -> &Arc<FgAbGroup> {
        &self.source
    }

    pub fn target(&self) -> &Arc<FgAbGroup> {
        &self.target
    }

    /// Matrix on normal-form coordinates.
    pub fn matrix(&self) -> &IntMatrix {
        &self.matrix
    }

    pub fn ambient_matrix(&self) -> Option<&IntMatrix> {
        self.ambient.as_ref()
    }

    pub fn apply(&self, e: &GroupElement) -> GroupElement {
        self.target.element(&self.matrix.mul_vec(&e.coords()))
    }

    /// Image of the class of an ambient vector of the source numerator.
    pub fn apply_ambient(&self, x: &[BigInt]) -> Result<GroupElement> {
        Ok(self.apply(&self.source.project(x)?))
    }

    /// `self ∘ first`.
    pub fn compose(&self, first: &GroupHom) -> Result<GroupHom> {
        if !same_group(&first.target, &self.source) {
            return Err(Error::DimensionMismatch(
                "composing homs with mismatched groups".into(),
            ));
        }
        let m = &self.matrix * &first.matrix;
        let ambient = match (&self.ambient, &first.ambient) {
            (Some(a), Some(b)) => Some(a * b),
            _ => None,
        };
        let mut h = GroupHom::from_coords(&first.source, &self.target, &m)?;
        h.ambient = ambient;
        Ok(h)
    }

    pub fn neg(&self) -> GroupHom {
        let m = -&self.matrix;
        GroupHom::from_coords(&self.source, &self.target, &m).expect("negation is well defined")
    }

    pub fn add(&self, other: &GroupHom) -> Result<GroupHom> {
        if !same_group(&self.source, &other.source) || !same_group(&self.target, &other.target) {
            return Err(Error::DimensionMismatch(
                "adding homs with mismatched groups".into(),
            ));
        }
        GroupHom::from_coords(&self.source, &self.target, &(&self.matrix + &other.matrix))
    }

    /// Equality on generator images.
    pub fn equals(&self, other: &GroupHom) -> bool {
        same_group(&self.source, &other.source)
            && same_group(&self.target, &other.target)
            && self.matrix == other.matrix
    }

    /// First source generator on which two parallel homs differ.
    pub fn first_difference(&self, other: &GroupHom) -> Option<usize> {
        (0..self.matrix.cols()).find(|&j| self.matrix.column(j) != other.matrix.column(j))
    }

    pub fn is_zero(&self) -> bool {
        self.matrix.is_zero()
    }

    /// Kernel as a lattice of source coordinates (containing the source relations).
    pub fn kernel_lattice(&self) -> Lattice {
        let s = self.source.coord_rank();
        let block = IntMatrix::hcat(
            self.target.coord_rank(),
            &[&self.matrix, &self.target.coord_relations()],
        );
        let k = kernel_basis(&block);
        let idx: Vec<usize> = (0..s).collect();
        Lattice::from_generators(&k.select_rows(&idx))
    }

    /// Image plus target relations, as a lattice of target coordinates.
    pub fn image_lattice(&self) -> Lattice {
        Lattice::from_generators(&IntMatrix::hcat(
            self.target.coord_rank(),
            &[&self.matrix, &self.target.coord_relations()],
        ))
    }

    /// Preimage of a lattice of target coordinates containing the target relations.
    pub fn preimage_lattice(&self, sub: &Lattice) -> Lattice {
        let s = self.source.coord_rank();
        let block = IntMatrix::hcat(self.target.coord_rank(), &[&self.matrix, sub.basis()]);
        let k = kernel_basis(&block);
        let idx: Vec<usize> = (0..s).collect();
        Lattice::from_generators(&k.select_rows(&idx)).sum(&self.source.relation_lattice())
    }

    /// Kernel as a group presented in source coordinates.
    pub fn kernel(&self) -> FgAbGroup {
        let k = self.kernel_lattice();
        subquotient(
            self.source.coord_rank(),
            k.basis(),
            &self.source.coord_relations(),
        )
        .expect("relations lie in the kernel")
    }

    /// Image as a group presented in target coordinates.
    pub fn image(&self) -> FgAbGroup {
        let im = self.image_lattice();
        subquotient(
            self.target.coord_rank(),
            im.basis(),
            &self.target.coord_relations(),
        )
        .expect("relations lie in the image lattice")
    }

    pub fn cokernel(&self) -> FgAbGroup {
        let n = self.target.coord_rank();
        subquotient(n, &IntMatrix::identity(n), self.image_lattice().basis())
            .expect("cokernel presentation")
    }

    pub fn is_injective(&self) -> bool {
        self.kernel_lattice() == self.source.relation_lattice()
    }

    pub fn is_surjective(&self) -> bool {
        self.image_lattice() == Lattice::full(self.target.coord_rank())
    }

    pub fn is_isomorphism(&self) -> bool {
        self.is_injective() && self.is_surjective()
    }

    /// Inverse of an isomorphism.
    pub fn inverse(&self) -> Result<GroupHom> {
        if !self.is_isomorphism() {
            return Err(Error::NotWellDefined("inverse of a non-isomorphism".into()));
        }
        let t = self.target.coord_rank();
        let s = self.source.coord_rank();
        let block = IntMatrix::hcat(t, &[&self.matrix, &self.target.coord_relations()]);
        let block_snf = snf(&block);
        let mut columns = Vec::with_capacity(t);
        for j in 0..t {
            let mut e = vec![BigInt::zero(); t];
            e[j] = BigInt::one();
            let z = solve_with(&block_snf, &e).expect("surjective hom has preimages");
            columns.push(z[..s].to_vec());
        }
        GroupHom::from_coords(
            &self.target,
            &self.source,
            &IntMatrix::from_columns(s, &columns),
        )
    }
}

/// Whether `A --f--> B --g--> C` is exact at `B`.
pub fn is_exact_at(f: &GroupHom, g: &GroupHom) -> bool {
    same_group(&f.target, &g.source) && f.image_lattice() == g.kernel_lattice()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::matrix::int_vec;

    fn cyclic(n: i64) -> Arc<FgAbGroup> {
        Arc::new(FgAbGroup::cyclic(n))
    }

    #[test]
    fn identity_is_isomorphism() {
        let g = Arc::new(
            FgAbGroup::quotient(&IntMatrix::from_rows(&[vec![2, 0], vec![0, 0]])).unwrap(),
        );
        let id = GroupHom::induced(&g, &g, &IntMatrix::identity(2)).unwrap();
        assert!(id.is_isomorphism());
        assert!(id.equals(&GroupHom::identity(&g)));
    }

    #[test]
    fn doubling_on_z4() {
        let z4 = cyclic(4);
        let two = GroupHom::induced(&z4, &z4, &IntMatrix::from_rows(&[vec![2]])).unwrap();
        assert!(!two.is_injective());
        assert!(!two.is_surjective());
        assert_eq!(two.kernel().order(), Some(BigInt::from(2)));
        assert_eq!(two.cokernel().order(), Some(BigInt::from(2)));
    }

    #[test]
    fn z2_to_z3_is_not_well_defined() {
        let r = GroupHom::induced(&cyclic(2), &cyclic(3), &IntMatrix::identity(1));
        assert!(matches!(r, Err(Error::NotWellDefined(_))));
    }

    #[test]
    fn inverse_and_composition() {
        let z5 = cyclic(5);
        let three = GroupHom::induced(&z5, &z5, &IntMatrix::from_rows(&[vec![3]])).unwrap();
        let inv = three.inverse().unwrap();
        assert!(inv
            .compose(&three)
            .unwrap()
            .equals(&GroupHom::identity(&z5)));
        assert_eq!(inv.apply(&z5.generator(0)).torsion, int_vec(&[2]));
    }

    #[test]
    fn exactness_of_short_sequence() {
        // 0 -> Z --x2--> Z -> Z/2 -> 0
        let z = Arc::new(FgAbGroup::free(1));
        let z2 = cyclic(2);
        let f = GroupHom::induced(&z, &z, &IntMatrix::from_rows(&[vec![2]])).unwrap();
        let g = GroupHom::induced(&z, &z2, &IntMatrix::identity(1)).unwrap();
        assert!(f.is_injective());
        assert!(g.is_surjective());
        assert!(is_exact_at(&f, &g));
        assert!(!is_exact_at(&GroupHom::zero(&z, &z), &g));
    }
}
