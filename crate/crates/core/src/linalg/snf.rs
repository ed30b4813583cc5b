//! Smith and Hermite normal forms, kernels and integer solving.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::matrix::{IntMatrix, IntVector};

/// Smith decomposition `u * m * v = d`.
///
/// `u_inv` is the inverse of `u`; it is kept because images of `m` are
/// spanned by the scaled columns of `u_inv`.
#[derive(Clone, Debug)]
pub struct SnfResult {
    pub u: IntMatrix,
    pub u_inv: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
}

impl SnfResult {
    /// Nonzero diagonal entries, in order.
    pub fn diagonal(&self) -> Vec<BigInt> {
        let n = self.d.rows().min(self.d.cols());
        (0..n)
            .map(|i| self.d.get(i, i).clone())
            .take_while(|x| !x.is_zero())
            .collect()
    }

    pub fn rank(&self) -> usize {
        self.diagonal().len()
    }
}

struct Work {
    a: IntMatrix,
    u: IntMatrix,
    u_inv: IntMatrix,
    v: IntMatrix,
}

impl Work {
    fn swap_rows(&mut self, i: usize, j: usize) {
        self.a.swap_rows(i, j);
        self.u.swap_rows(i, j);
        self.u_inv.swap_cols(i, j);
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        self.a.swap_cols(i, j);
        self.v.swap_cols(i, j);
    }

    /// `row[target] += k * row[source]`
    fn add_row(&mut self, target: usize, source: usize, k: &BigInt) {
        self.a.add_row_multiple(target, source, k);
        self.u.add_row_multiple(target, source, k);
        self.u_inv.add_col_multiple(source, target, &-k);
    }

    /// `col[target] += k * col[source]`
    fn add_col(&mut self, target: usize, source: usize, k: &BigInt) {
        self.a.add_col_multiple(target, source, k);
        self.v.add_col_multiple(target, source, k);
    }

    fn negate_row(&mut self, i: usize) {
        self.a.negate_row(i);
        self.u.negate_row(i);
        self.u_inv.negate_col(i);
    }
}

/// Smith normal form with unimodular transforms.
///
/// Pivots on the entry of least absolute value in the remaining block.
pub fn snf(m: &IntMatrix) -> SnfResult {
    let (rows, cols) = (m.rows(), m.cols());
    let mut w = Work {
        a: m.clone(),
        u: IntMatrix::identity(rows),
        u_inv: IntMatrix::identity(rows),
        v: IntMatrix::identity(cols),
    };
    for t in 0..rows.min(cols) {
        let Some((pi, pj)) = min_abs_entry(&w.a, t, t) else {
            break;
        };
        w.swap_rows(t, pi);
        w.swap_cols(t, pj);
        loop {
            let p = w.a.get(t, t).clone();
            let mut clean = true;
            for i in t + 1..rows {
                if w.a.get(i, t).is_zero() {
                    continue;
                }
                let q = w.a.get(i, t).div_floor(&p);
                w.add_row(i, t, &-q);
                if !w.a.get(i, t).is_zero() {
                    clean = false;
                }
            }
            for j in t + 1..cols {
                if w.a.get(t, j).is_zero() {
                    continue;
                }
                let q = w.a.get(t, j).div_floor(&p);
                w.add_col(j, t, &-q);
                if !w.a.get(t, j).is_zero() {
                    clean = false;
                }
            }
            if !clean {
                let best_row = (t + 1..rows)
                    .filter(|&i| !w.a.get(i, t).is_zero())
                    .min_by_key(|&i| w.a.get(i, t).abs());
                let best_col = (t + 1..cols)
                    .filter(|&j| !w.a.get(t, j).is_zero())
                    .min_by_key(|&j| w.a.get(t, j).abs());
                let row_val = best_row.map(|i| w.a.get(i, t).abs());
                let col_val = best_col.map(|j| w.a.get(t, j).abs());
                match (row_val, col_val) {
                    (Some(r), Some(c)) if c < r => w.swap_cols(t, best_col.unwrap()),
                    (Some(_), _) => w.swap_rows(t, best_row.unwrap()),
                    (None, Some(_)) => w.swap_cols(t, best_col.unwrap()),
                    (None, None) => unreachable!("unclean pivot without residue"),
                }
                continue;
            }
            // Row and column are clear; enforce divisibility of the rest.
            let offender =
                (t + 1..rows).find(|&i| (t + 1..cols).any(|j| !w.a.get(i, j).is_multiple_of(&p)));
            match offender {
                Some(i) => w.add_row(t, i, &BigInt::one()),
                None => break,
            }
        }
        if w.a.get(t, t).is_negative() {
            w.negate_row(t);
        }
    }
    SnfResult {
        u: w.u,
        u_inv: w.u_inv,
        d: w.a,
        v: w.v,
    }
}

fn min_abs_entry(a: &IntMatrix, r0: usize, c0: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize, BigInt)> = None;
    for i in r0..a.rows() {
        for j in c0..a.cols() {
            let x = a.get(i, j);
            if x.is_zero() {
                continue;
            }
            let ax = x.abs();
            if best.as_ref().is_none_or(|(_, _, b)| ax < *b) {
                best = Some((i, j, ax));
            }
        }
    }
    best.map(|(i, j, _)| (i, j))
}

/// Saturated basis of `{x : m x = 0}` as the columns of the result.
pub fn kernel_basis(m: &IntMatrix) -> IntMatrix {
    let s = snf(m);
    let r = s.rank();
    let idx: Vec<usize> = (r..m.cols()).collect();
    s.v.select_columns(&idx)
}

/// Some integer solution of `m x = b`, if one exists.
pub fn solve_integer(m: &IntMatrix, b: &[BigInt]) -> Option<IntVector> {
    assert_eq!(b.len(), m.rows(), "right-hand side length mismatch");
    let s = snf(m);
    solve_with(&s, b)
}

/// Solves `m x = b` reusing a precomputed decomposition of `m`.
pub fn solve_with(s: &SnfResult, b: &[BigInt]) -> Option<IntVector> {
    let c = s.u.mul_vec(b);
    let diag = s.diagonal();
    let mut y = vec![BigInt::zero(); s.v.rows()];
    for (i, ci) in c.iter().enumerate() {
        match diag.get(i) {
            Some(di) => {
                let (q, r) = ci.div_rem(di);
                if !r.is_zero() {
                    return None;
                }
                y[i] = q;
            }
            None => {
                if !ci.is_zero() {
                    return None;
                }
            }
        }
    }
    Some(s.v.mul_vec(&y))
}

/// Solves `m X = b` column by column.
pub fn solve_matrix(m: &IntMatrix, b: &IntMatrix) -> Option<IntMatrix> {
    let s = snf(m);
    let cols: Option<Vec<IntVector>> = b.columns().iter().map(|c| solve_with(&s, c)).collect();
    cols.map(|c| IntMatrix::from_columns(m.cols(), &c))
}

/// Canonical column Hermite basis of the lattice spanned by the columns of `gens`.
///
/// The result is lower echelon: each column has a positive pivot below the
/// pivots of earlier columns, and entries to the left of a pivot are reduced
/// into `[0, pivot)`. Two generating sets span the same lattice iff their
/// Hermite bases are equal.
pub fn hermite_basis(gens: &IntMatrix) -> IntMatrix {
    let mut a = gens.clone();
    let (rows, cols) = (a.rows(), a.cols());
    let mut pc = 0;
    for i in 0..rows {
        if pc == cols {
            break;
        }
        loop {
            let best = (pc..cols)
                .filter(|&j| !a.get(i, j).is_zero())
                .min_by_key(|&j| a.get(i, j).abs());
            let Some(j) = best else { break };
            a.swap_cols(pc, j);
            let p = a.get(i, pc).clone();
            let mut done = true;
            for k in pc + 1..cols {
                if a.get(i, k).is_zero() {
                    continue;
                }
                let q = a.get(i, k).div_floor(&p);
                a.add_col_multiple(k, pc, &-q);
                if !a.get(i, k).is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if a.get(i, pc).is_zero() {
            continue;
        }
        if a.get(i, pc).is_negative() {
            a.negate_col(pc);
        }
        let p = a.get(i, pc).clone();
        for k in 0..pc {
            let q = a.get(i, k).div_floor(&p);
            a.add_col_multiple(k, pc, &-q);
        }
        pc += 1;
    }
    let idx: Vec<usize> = (0..pc).collect();
    a.select_columns(&idx)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::matrix::int_vec;

    fn check(m: &IntMatrix) -> SnfResult {
        let s = snf(m);
        assert_eq!(&(&s.u * m) * &s.v, s.d);
        assert_eq!(s.u.det().abs(), BigInt::one());
        assert_eq!(s.v.det().abs(), BigInt::one());
        assert_eq!(&s.u * &s.u_inv, IntMatrix::identity(m.rows()));
        let d = s.diagonal();
        for w in d.windows(2) {
            assert!(w[1].is_multiple_of(&w[0]));
        }
        s
    }

    #[test]
    fn snf_of_diag_2_3() {
        let s = check(&IntMatrix::from_rows(&[vec![2, 0], vec![0, 3]]));
        assert_eq!(s.diagonal(), int_vec(&[1, 6]));
    }

    #[test]
    fn snf_of_zero_matrix() {
        let s = check(&IntMatrix::zeros(2, 3));
        assert!(s.d.is_zero());
        assert_eq!(s.u, IntMatrix::identity(2));
        assert_eq!(s.v, IntMatrix::identity(3));
    }

    #[test]
    fn snf_of_symmetric_example() {
        let s = check(&IntMatrix::from_rows(&[vec![4, 6], vec![6, 10]]));
        assert_eq!(s.diagonal(), int_vec(&[2, 2]));
    }

    #[test]
    fn snf_of_empty_shapes() {
        check(&IntMatrix::zeros(0, 3));
        check(&IntMatrix::zeros(3, 0));
    }

    #[test]
    fn kernel_of_row_of_ones() {
        let m = IntMatrix::from_rows(&[vec![1, 1, 1]]);
        let k = kernel_basis(&m);
        assert_eq!(k.cols(), 2);
        assert!((&m * &k).is_zero());
        let expected = IntMatrix::from_rows(&[vec![1, 0], vec![-1, 1], vec![0, -1]]);
        assert_eq!(hermite_basis(&k), hermite_basis(&expected));
    }

    #[test]
    fn kernel_of_injective_map_is_empty() {
        assert_eq!(kernel_basis(&IntMatrix::identity(3)).cols(), 0);
    }

    #[test]
    fn kernel_is_primitive() {
        let k = kernel_basis(&IntMatrix::from_rows(&[vec![2, 4]]));
        assert_eq!(k.cols(), 1);
        let col = k.column(0);
        assert!(col == int_vec(&[-2, 1]) || col == int_vec(&[2, -1]));
    }

    #[test]
    fn solving() {
        let two = IntMatrix::from_rows(&[vec![2]]);
        assert_eq!(solve_integer(&two, &int_vec(&[4])), Some(int_vec(&[2])));
        assert_eq!(solve_integer(&two, &int_vec(&[3])), None);
        let m = IntMatrix::from_rows(&[vec![1, 1], vec![0, 2]]);
        assert_eq!(solve_integer(&m, &int_vec(&[3, 4])), Some(int_vec(&[1, 2])));
    }

    #[test]
    fn hermite_is_canonical() {
        let a = IntMatrix::from_rows(&[vec![2, 4], vec![1, 3]]);
        let b = IntMatrix::from_rows(&[vec![6, 2, 0], vec![4, 1, 0]]);
        // Both span {(x, y) : x even}.
        assert_eq!(hermite_basis(&a), hermite_basis(&b));
        assert_eq!(
            hermite_basis(&a),
            IntMatrix::from_rows(&[vec![2, 0], vec![0, 1]])
        );
    }
}
