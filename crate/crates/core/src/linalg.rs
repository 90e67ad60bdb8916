//! Dense exact linear algebra.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Row-major dense matrix.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Mat<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Scalar> Mat<T> {
    pub fn new(rows: usize, cols: usize, data: Vec<T>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::Dimension(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(Mat { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Mat { rows, cols, data: vec![T::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = T::one();
        }
        m
    }

    /// Builds a matrix from equal-length rows. `cols` is needed for the
    /// zero-row case.
    pub fn from_rows(rows: &[Vec<T>], cols: usize) -> Result<Self> {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for (i, r) in rows.iter().enumerate() {
            if r.len() != cols {
                return Err(Error::Dimension(format!(
                    "row {i} has {} entries, expected {cols}",
                    r.len()
                )));
            }
            data.extend(r.iter().cloned());
        }
        Ok(Mat { rows: rows.len(), cols, data })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Mat { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> Vec<T> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<T>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn select_rows(&self, idx: &[usize]) -> Self {
        Self::from_fn(idx.len(), self.cols, |i, j| self[(idx[i], j)].clone())
    }

    pub fn select_cols(&self, idx: &[usize]) -> Self {
        Self::from_fn(self.rows, idx.len(), |i, j| self[(i, idx[j])].clone())
    }

    /// Stacks `other` below `self`.
    pub fn vstack(&self, other: &Self) -> Result<Self> {
        if self.cols != other.cols {
            return Err(Error::Dimension("vstack column mismatch".into()));
        }
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        Ok(Mat { rows: self.rows + other.rows, cols: self.cols, data })
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::Dimension(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(Self::from_fn(self.rows, other.cols, |i, j| {
            (0..self.cols).fold(T::zero(), |acc, k| acc + self[(i, k)].clone() * other[(k, j)].clone())
        }))
    }

    pub fn mul_vec(&self, v: &[T]) -> Result<Vec<T>> {
        if v.len() != self.cols {
            return Err(Error::Dimension("vector length differs from column count".into()));
        }
        Ok((0..self.rows).map(|i| dot(self.row(i), v)).collect())
    }

    fn pick_pivot(&self, col: usize, from: usize) -> Option<usize> {
        if T::EXACT {
            (from..self.rows).find(|&r| !self[(r, col)].negligible())
        } else {
            (from..self.rows)
                .filter(|&r| !self[(r, col)].negligible())
                .max_by(|&a, &b| {
                    self[(a, col)].abs().partial_cmp(&self[(b, col)].abs()).unwrap_or(std::cmp::Ordering::Equal)
                })
        }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    /// Determinant by fraction-free (Bareiss) elimination.
    pub fn det(&self) -> Result<T> {
        if self.rows != self.cols {
            return Err(Error::Dimension(format!("det of non-square {}x{} matrix", self.rows, self.cols)));
        }
        let n = self.rows;
        if n == 0 {
            return Ok(T::one());
        }
        let mut a = self.clone();
        let mut negate = false;
        let mut prev = T::one();
        for k in 0..n - 1 {
            let Some(p) = a.pick_pivot(k, k) else {
                return Ok(T::zero());
            };
            if p != k {
                a.swap_rows(p, k);
                negate = !negate;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (a[(i, j)].clone() * a[(k, k)].clone() - a[(i, k)].clone() * a[(k, j)].clone())
                        / prev.clone();
                    a[(i, j)] = v;
                }
            }
            prev = a[(k, k)].clone();
        }
        let d = a[(n - 1, n - 1)].clone();
        Ok(if negate { -d } else { d })
    }

    /// Reduced row echelon form and pivot columns.
    pub fn rref(&self) -> (Self, Vec<usize>) {
        let mut a = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..a.cols {
            if r == a.rows {
                break;
            }
            let Some(p) = a.pick_pivot(c, r) else { continue };
            a.swap_rows(p, r);
            let inv = T::one() / a[(r, c)].clone();
            for j in c..a.cols {
                let v = a[(r, j)].clone() * inv.clone();
                a[(r, j)] = v;
            }
            for i in 0..a.rows {
                if i == r || a[(i, c)].negligible() {
                    continue;
                }
                let f = a[(i, c)].clone();
                for j in c..a.cols {
                    let v = a[(i, j)].clone() - f.clone() * a[(r, j)].clone();
                    a[(i, j)] = v;
                }
            }
            if !T::EXACT {
                for i in 0..a.rows {
                    if i != r {
                        a[(i, c)] = T::zero();
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        (a, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Right kernel basis as the rows of a matrix in reduced echelon form,
    /// so the first nonzero entry of every vector is one.
    pub fn kernel_basis(&self) -> Vec<Vec<T>> {
        let (r, pivots) = self.rref();
        let mut basis = Vec::new();
        for f in (0..self.cols).filter(|c| !pivots.contains(c)) {
            let mut v = vec![T::zero(); self.cols];
            v[f] = T::one();
            for (i, &p) in pivots.iter().enumerate() {
                v[p] = -r[(i, f)].clone();
            }
            basis.push(v);
        }
        if basis.is_empty() {
            return basis;
        }
        let k = Mat::from_rows(&basis, self.cols).expect("uniform kernel rows");
        let (e, piv) = k.rref();
        (0..piv.len()).map(|i| e.row(i).to_vec()).collect()
    }

    /// Solves `self * x = b`. Free variables are set to zero; `None` when the
    /// system is inconsistent.
    pub fn solve(&self, b: &[T]) -> Result<Option<Vec<T>>> {
        if b.len() != self.rows {
            return Err(Error::Dimension(format!(
                "right-hand side has length {}, expected {}",
                b.len(),
                self.rows
            )));
        }
        let aug = Self::from_fn(self.rows, self.cols + 1, |i, j| {
            if j < self.cols { self[(i, j)].clone() } else { b[i].clone() }
        });
        let (r, pivots) = aug.rref();
        if pivots.last() == Some(&self.cols) {
            return Ok(None);
        }
        let mut x = vec![T::zero(); self.cols];
        for (i, &p) in pivots.iter().enumerate() {
            x[p] = r[(i, self.cols)].clone();
        }
        Ok(Some(x))
    }

    pub fn inverse(&self) -> Result<Option<Self>> {
        if self.rows != self.cols {
            return Err(Error::Dimension("inverse of non-square matrix".into()));
        }
        let n = self.rows;
        let aug = Self::from_fn(n, 2 * n, |i, j| {
            if j < n {
                self[(i, j)].clone()
            } else if j - n == i {
                T::one()
            } else {
                T::zero()
            }
        });
        let (r, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return Ok(None);
        }
        Ok(Some(Self::from_fn(n, n, |i, j| r[(i, n + j)].clone())))
    }
}

impl<T> std::ops::Index<(usize, usize)> for Mat<T> {
    type Output = T;
    fn index(&self, (i, j): (usize, usize)) -> &T {
        &self.data[i * self.cols + j]
    }
}

impl<T> std::ops::IndexMut<(usize, usize)> for Mat<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        &mut self.data[i * self.cols + j]
    }
}

impl<T: Scalar> fmt::Debug for Mat<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl<T: Scalar> fmt::Display for Mat<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            let cells: Vec<String> = self.row(i).iter().map(|v| v.to_string()).collect();
            write!(f, "{}", cells.join(" "))?;
        }
        write!(f, "]")
    }
}

pub fn dot<T: Scalar>(a: &[T], b: &[T]) -> T {
    a.iter().zip(b).fold(T::zero(), |acc, (x, y)| acc + x.clone() * y.clone())
}

/// Z-basis of `{l in Z^n : a l = 0}` for an integer matrix with `n` columns,
/// returned in Hermite normal form (positive pivots, entries above each
/// pivot reduced into `[0, pivot)`).
pub fn integer_kernel_basis(a: &[Vec<BigInt>], n: usize) -> Vec<Vec<BigInt>> {
    let m = a.len();
    // Rows of w are [A^T | I]; unimodular row operations keep the right
    // block a basis of Z^n while the left block becomes echelon.
    let mut w: Vec<Vec<BigInt>> = (0..n)
        .map(|i| {
            let mut row: Vec<BigInt> = (0..m).map(|r| a[r][i].clone()).collect();
            row.extend((0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }));
            row
        })
        .collect();
    let mut rank = 0;
    for c in 0..m {
        if rank == n {
            break;
        }
        for r in rank + 1..n {
            if w[r][c].is_zero() {
                continue;
            }
            if w[rank][c].is_zero() {
                w.swap(rank, r);
                continue;
            }
            let (x, y, g) = ext_gcd(&w[rank][c], &w[r][c]);
            let p = &w[rank][c] / &g;
            let q = &w[r][c] / &g;
            let (top, bottom) = (w[rank].clone(), w[r].clone());
            w[rank] = combine(&x, &top, &y, &bottom);
            w[r] = combine(&-q, &top, &p, &bottom);
        }
        if !w[rank][c].is_zero() {
            rank += 1;
        }
    }
    let basis: Vec<Vec<BigInt>> = w[rank..].iter().map(|row| row[m..].to_vec()).collect();
    hermite_rows(basis, n)
}

fn combine(a: &BigInt, u: &[BigInt], b: &BigInt, v: &[BigInt]) -> Vec<BigInt> {
    u.iter().zip(v).map(|(s, t)| a * s + b * t).collect()
}

/// Returns `(x, y, g)` with `a x + b y = g = gcd(a, b) >= 0`.
pub fn ext_gcd(a: &BigInt, b: &BigInt) -> (BigInt, BigInt, BigInt) {
    let e = a.extended_gcd(b);
    if e.gcd.is_negative() {
        (-e.x, -e.y, -e.gcd)
    } else {
        (e.x, e.y, e.gcd)
    }
}

/// Row Hermite normal form of a lattice basis.
fn hermite_rows(mut rows: Vec<Vec<BigInt>>, n: usize) -> Vec<Vec<BigInt>> {
    let k = rows.len();
    let mut r = 0;
    for c in 0..n {
        if r == k {
            break;
        }
        for i in r + 1..k {
            if rows[i][c].is_zero() {
                continue;
            }
            if rows[r][c].is_zero() {
                rows.swap(r, i);
                continue;
            }
            let (x, y, g) = ext_gcd(&rows[r][c], &rows[i][c]);
            let p = &rows[r][c] / &g;
            let q = &rows[i][c] / &g;
            let (top, bottom) = (rows[r].clone(), rows[i].clone());
            rows[r] = combine(&x, &top, &y, &bottom);
            rows[i] = combine(&-q, &top, &p, &bottom);
        }
        if rows[r][c].is_zero() {
            continue;
        }
        if rows[r][c].is_negative() {
            rows[r] = rows[r].iter().map(|v| -v).collect();
        }
        for i in 0..r {
            let f = rows[i][c].div_floor(&rows[r][c]);
            if !f.is_zero() {
                let pivot = rows[r].clone();
                rows[i] = rows[i].iter().zip(&pivot).map(|(s, t)| s - &f * t).collect();
            }
        }
        r += 1;
    }
    rows
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, rat};
    use crate::Rat;
    use proptest::prelude::*;

    fn m(rows: &[&[i64]]) -> Mat<Rat> {
        let cols = rows.first().map_or(0, |r| r.len());
        let r: Vec<Vec<Rat>> = rows.iter().map(|r| r.iter().map(|&v| int(v)).collect()).collect();
        Mat::from_rows(&r, cols).unwrap()
    }

    // Laplace expansion along the first row; independent of elimination.
    fn cofactor_det(a: &Mat<Rat>) -> Rat {
        let n = a.rows();
        if n == 0 {
            return int(1);
        }
        let mut acc = int(0);
        for j in 0..n {
            let minor = Mat::from_fn(n - 1, n - 1, |r, c| a[(r + 1, if c < j { c } else { c + 1 })].clone());
            let term = a[(0, j)].clone() * cofactor_det(&minor);
            acc = if j % 2 == 0 { acc + term } else { acc - term };
        }
        acc
    }

    fn small_mat(n: usize) -> impl Strategy<Value = Mat<Rat>> {
        prop::collection::vec(-5i64..=5, n * n)
            .prop_map(move |v| Mat::new(n, n, v.into_iter().map(int).collect()).unwrap())
    }

    #[test]
    fn det_examples() {
        assert_eq!(Mat::<Rat>::identity(2).det().unwrap(), int(1));
        assert_eq!(m(&[&[1, 0], &[0, 1]]).det().unwrap(), int(1));
        assert_eq!(m(&[&[0, 2], &[3, 4]]).det().unwrap(), int(-6));
        assert!(matches!(m(&[&[1, 2, 3]]).det(), Err(Error::Dimension(_))));
    }

    #[test]
    fn float_det_matches_exact() {
        let a = m(&[&[2, -1, 0], &[4, 3, 1], &[0, 5, -2]]);
        let f = Mat::from_fn(3, 3, |i, j| crate::scalar::to_f64(&a[(i, j)]));
        let exact = crate::scalar::to_f64(&a.det().unwrap());
        assert!((f.det().unwrap() - exact).abs() < 1e-9);
    }

    #[test]
    fn kernel_examples() {
        let z = Mat::<Rat>::zeros(3, 3);
        assert_eq!(z.kernel_basis(), vec![vec![int(1), int(0), int(0)], vec![int(0), int(1), int(0)], vec![
            int(0),
            int(0),
            int(1)
        ]]);
        // Polygon M matrices with unit minors: entry 1 iff the ray is off the cone.
        let polygon_m = |n: usize| {
            Mat::from_fn(n, n, |r, c| if r == c || r == (c + 1) % n { int(0) } else { int(1) })
        };
        let hex = polygon_m(6);
        assert_eq!(hex.kernel_basis(), vec![[1, -1, 1, -1, 1, -1].iter().map(|&v| int(v)).collect::<Vec<_>>()]);
        assert!(polygon_m(5).kernel_basis().is_empty());
    }

    #[test]
    fn solve_examples() {
        let id = Mat::<Rat>::identity(2);
        assert_eq!(id.solve(&[rat(1, 2), int(3)]).unwrap(), Some(vec![rat(1, 2), int(3)]));
        let u = m(&[&[1, 0], &[0, 1]]);
        assert_eq!(u.solve(&[int(-1), int(-1)]).unwrap(), Some(vec![int(-1), int(-1)]));
        let bad = m(&[&[1], &[1]]);
        assert_eq!(bad.solve(&[int(0), int(1)]).unwrap(), None);
        let under = m(&[&[1, 1]]);
        assert_eq!(under.solve(&[int(2)]).unwrap(), Some(vec![int(2), int(0)]));
    }

    #[test]
    fn inverse_roundtrip() {
        let a = m(&[&[2, 1], &[7, 4]]);
        let inv = a.inverse().unwrap().unwrap();
        assert_eq!(a.mul(&inv).unwrap(), Mat::identity(2));
        assert_eq!(m(&[&[1, 2], &[2, 4]]).inverse().unwrap(), None);
    }

    #[test]
    fn integer_kernel_of_hexagon_exponents() {
        // Exponent matrix of the hexagon monomial map; the lattice is
        // generated by the single alternating relation.
        let e: Vec<Vec<BigInt>> = (0..6)
            .map(|r| (0..6).map(|c| BigInt::from(if r == c || r == (c + 1) % 6 { 0 } else { 1 })).collect())
            .collect();
        let k = integer_kernel_basis(&e, 6);
        assert_eq!(k.len(), 1);
        let v: Vec<i64> = k[0].iter().map(|x| i64::try_from(x).unwrap()).collect();
        assert_eq!(v, vec![1, -1, 1, -1, 1, -1]);
    }

    #[test]
    fn integer_kernel_is_saturated() {
        // ker of (2 4) over Z is generated by (-2, 1), not (-4, 2).
        let k = integer_kernel_basis(&[vec![BigInt::from(2), BigInt::from(4)]], 2);
        assert_eq!(k, vec![vec![BigInt::from(2), BigInt::from(-1)]]);
    }

    proptest! {
        #[test]
        fn det_matches_cofactor_expansion(a in small_mat(4)) {
            prop_assert_eq!(a.det().unwrap(), cofactor_det(&a));
        }

        #[test]
        fn det_is_multiplicative(n in 1usize..=5, seed in any::<u64>()) {
            use rand::{Rng, SeedableRng};
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let mut gen = || Mat::from_fn(n, n, |_, _| int(rng.gen_range(-4..=4)));
            let (a, b) = (gen(), gen());
            prop_assert_eq!(a.mul(&b).unwrap().det().unwrap(), a.det().unwrap() * b.det().unwrap());
        }

        #[test]
        fn rank_nullity(r in 1usize..5, c in 1usize..6, v in prop::collection::vec(-2i64..=2, 30)) {
            let a = Mat::from_fn(r, c, |i, j| int(v[i * c + j]));
            let k = a.kernel_basis();
            prop_assert_eq!(a.rank() + k.len(), c);
            for x in &k {
                prop_assert!(a.mul_vec(x).unwrap().iter().all(|e| e.is_zero()));
            }
        }

        #[test]
        fn row_swap_flips_sign(a in small_mat(4), i in 0usize..4, j in 0usize..4) {
            prop_assume!(i != j);
            let mut order: Vec<usize> = (0..4).collect();
            order.swap(i, j);
            prop_assert_eq!(a.select_rows(&order).det().unwrap(), -a.det().unwrap());
        }
    }
}
