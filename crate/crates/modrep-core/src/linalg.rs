//! Exact dense linear algebra over a runtime-chosen field.

use std::fmt::Debug;
use std::hash::Hash;

/// A field whose elements are small `Copy` handles and whose arithmetic is
/// carried by the field value itself.
pub trait Field {
    type Elem: Copy + Eq + Ord + Hash + Debug;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn add(&self, a: Self::Elem, b: Self::Elem) -> Self::Elem;
    fn neg(&self, a: Self::Elem) -> Self::Elem;
    fn mul(&self, a: Self::Elem, b: Self::Elem) -> Self::Elem;
    /// `None` for zero.
    fn inv(&self, a: Self::Elem) -> Option<Self::Elem>;

    fn sub(&self, a: Self::Elem, b: Self::Elem) -> Self::Elem {
        self.add(a, self.neg(b))
    }

    fn is_zero(&self, a: Self::Elem) -> bool {
        a == self.zero()
    }
}

/// Row-major dense matrix.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Matrix<E> {
    rows: usize,
    cols: usize,
    data: Vec<E>,
}

impl<E: Copy> Matrix<E> {
    pub fn filled(rows: usize, cols: usize, fill: E) -> Self {
        Matrix { rows, cols, data: vec![fill; rows * cols] }
    }

    pub fn from_rows(rows: &[Vec<E>], cols: usize) -> Self {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            assert_eq!(r.len(), cols, "ragged rows");
            data.extend_from_slice(r);
        }
        Matrix { rows: rows.len(), cols, data }
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_cols(cols: &[Vec<E>], rows: usize, fill: E) -> Self {
        let mut m = Matrix::filled(rows, cols.len(), fill);
        for (j, c) in cols.iter().enumerate() {
            assert_eq!(c.len(), rows, "ragged columns");
            for (i, &x) in c.iter().enumerate() {
                m.set(i, j, x);
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> E {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, x: E) {
        self.data[i * self.cols + j] = x;
    }

    pub fn row(&self, i: usize) -> &[E] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> Vec<E> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut data = Vec::with_capacity(self.data.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                data.push(self.get(i, j));
            }
        }
        Matrix { rows: self.cols, cols: self.rows, data }
    }
}

pub fn identity<F: Field>(f: &F, n: usize) -> Matrix<F::Elem> {
    let mut m = Matrix::filled(n, n, f.zero());
    for i in 0..n {
        m.set(i, i, f.one());
    }
    m
}

pub fn mat_mul<F: Field>(f: &F, a: &Matrix<F::Elem>, b: &Matrix<F::Elem>) -> Matrix<F::Elem> {
    assert_eq!(a.cols, b.rows, "shape mismatch");
    let mut out = Matrix::filled(a.rows, b.cols, f.zero());
    for i in 0..a.rows {
        for k in 0..a.cols {
            let x = a.get(i, k);
            if f.is_zero(x) {
                continue;
            }
            for j in 0..b.cols {
                let idx = i * out.cols + j;
                out.data[idx] = f.add(out.data[idx], f.mul(x, b.get(k, j)));
            }
        }
    }
    out
}

pub fn mat_vec<F: Field>(f: &F, a: &Matrix<F::Elem>, v: &[F::Elem]) -> Vec<F::Elem> {
    assert_eq!(a.cols, v.len(), "shape mismatch");
    (0..a.rows)
        .map(|i| {
            a.row(i)
                .iter()
                .zip(v)
                .fold(f.zero(), |acc, (&x, &y)| f.add(acc, f.mul(x, y)))
        })
        .collect()
}

pub fn mat_add<F: Field>(f: &F, a: &Matrix<F::Elem>, b: &Matrix<F::Elem>) -> Matrix<F::Elem> {
    assert!(a.rows == b.rows && a.cols == b.cols, "shape mismatch");
    let data = a.data.iter().zip(&b.data).map(|(&x, &y)| f.add(x, y)).collect();
    Matrix { rows: a.rows, cols: a.cols, data }
}

pub fn mat_sub<F: Field>(f: &F, a: &Matrix<F::Elem>, b: &Matrix<F::Elem>) -> Matrix<F::Elem> {
    assert!(a.rows == b.rows && a.cols == b.cols, "shape mismatch");
    let data = a.data.iter().zip(&b.data).map(|(&x, &y)| f.sub(x, y)).collect();
    Matrix { rows: a.rows, cols: a.cols, data }
}

pub fn mat_scale<F: Field>(f: &F, c: F::Elem, a: &Matrix<F::Elem>) -> Matrix<F::Elem> {
    let data = a.data.iter().map(|&x| f.mul(c, x)).collect();
    Matrix { rows: a.rows, cols: a.cols, data }
}

pub fn is_zero_matrix<F: Field>(f: &F, a: &Matrix<F::Elem>) -> bool {
    a.data.iter().all(|&x| f.is_zero(x))
}

pub fn vec_add<F: Field>(f: &F, a: &[F::Elem], b: &[F::Elem]) -> Vec<F::Elem> {
    a.iter().zip(b).map(|(&x, &y)| f.add(x, y)).collect()
}

pub fn vec_sub<F: Field>(f: &F, a: &[F::Elem], b: &[F::Elem]) -> Vec<F::Elem> {
    a.iter().zip(b).map(|(&x, &y)| f.sub(x, y)).collect()
}

pub fn vec_scale<F: Field>(f: &F, c: F::Elem, a: &[F::Elem]) -> Vec<F::Elem> {
    a.iter().map(|&x| f.mul(c, x)).collect()
}

pub fn is_zero_vec<F: Field>(f: &F, a: &[F::Elem]) -> bool {
    a.iter().all(|&x| f.is_zero(x))
}

/// Reduced row echelon form in place; returns pivot columns.
pub fn rref<F: Field>(f: &F, m: &mut Matrix<F::Elem>) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..m.cols {
        if r == m.rows {
            break;
        }
        let Some(p) = (r..m.rows).find(|&i| !f.is_zero(m.get(i, c))) else {
            continue;
        };
        if p != r {
            for j in 0..m.cols {
                m.data.swap(p * m.cols + j, r * m.cols + j);
            }
        }
        let inv = f.inv(m.get(r, c)).expect("nonzero pivot");
        for j in c..m.cols {
            let x = m.get(r, j);
            m.set(r, j, f.mul(inv, x));
        }
        for i in 0..m.rows {
            if i == r {
                continue;
            }
            let factor = m.get(i, c);
            if f.is_zero(factor) {
                continue;
            }
            for j in c..m.cols {
                let x = f.sub(m.get(i, j), f.mul(factor, m.get(r, j)));
                m.set(i, j, x);
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank<F: Field>(f: &F, m: &Matrix<F::Elem>) -> usize {
    let mut w = m.clone();
    rref(f, &mut w).len()
}

/// Basis of the right kernel `{x : m x = 0}`.
pub fn kernel<F: Field>(f: &F, m: &Matrix<F::Elem>) -> Vec<Vec<F::Elem>> {
    let mut w = m.clone();
    let pivots = rref(f, &mut w);
    let mut is_pivot = vec![false; m.cols];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    let mut basis = Vec::new();
    for free in (0..m.cols).filter(|&c| !is_pivot[c]) {
        let mut x = vec![f.zero(); m.cols];
        x[free] = f.one();
        for (r, &p) in pivots.iter().enumerate() {
            x[p] = f.neg(w.get(r, free));
        }
        basis.push(x);
    }
    basis
}

/// One solution of `a x = b`, if any.
pub fn solve<F: Field>(f: &F, a: &Matrix<F::Elem>, b: &[F::Elem]) -> Option<Vec<F::Elem>> {
    assert_eq!(a.rows, b.len(), "shape mismatch");
    let mut aug = Matrix::filled(a.rows, a.cols + 1, f.zero());
    for i in 0..a.rows {
        for j in 0..a.cols {
            aug.set(i, j, a.get(i, j));
        }
        aug.set(i, a.cols, b[i]);
    }
    let pivots = rref(f, &mut aug);
    if pivots.last() == Some(&a.cols) {
        return None;
    }
    let mut x = vec![f.zero(); a.cols];
    for (r, &p) in pivots.iter().enumerate() {
        x[p] = aug.get(r, a.cols);
    }
    Some(x)
}

pub fn inverse<F: Field>(f: &F, a: &Matrix<F::Elem>) -> Option<Matrix<F::Elem>> {
    assert_eq!(a.rows, a.cols, "square matrix expected");
    let n = a.rows;
    let mut aug = Matrix::filled(n, 2 * n, f.zero());
    for i in 0..n {
        for j in 0..n {
            aug.set(i, j, a.get(i, j));
        }
        aug.set(i, n + i, f.one());
    }
    let pivots = rref(f, &mut aug);
    if pivots.len() < n || pivots[n - 1] != n - 1 {
        return None;
    }
    let mut out = Matrix::filled(n, n, f.zero());
    for i in 0..n {
        for j in 0..n {
            out.set(i, j, aug.get(i, n + j));
        }
    }
    Some(out)
}

/// Incrementally built subspace in reduced echelon form.
#[derive(Clone, Debug)]
pub struct Echelon<E> {
    dim: usize,
    rows: Vec<Vec<E>>,
    pivots: Vec<usize>,
}

impl<E: Copy + Eq> Echelon<E> {
    pub fn new(dim: usize) -> Self {
        Echelon { dim, rows: Vec::new(), pivots: Vec::new() }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn ambient_dim(&self) -> usize {
        self.dim
    }

    pub fn basis(&self) -> &[Vec<E>] {
        &self.rows
    }

    fn reduce<F: Field<Elem = E>>(&self, f: &F, v: &[E]) -> Vec<E> {
        let mut w = v.to_vec();
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            let c = w[p];
            if !f.is_zero(c) {
                for (x, &y) in w.iter_mut().zip(row) {
                    *x = f.sub(*x, f.mul(c, y));
                }
            }
        }
        w
    }

    pub fn contains<F: Field<Elem = E>>(&self, f: &F, v: &[E]) -> bool {
        is_zero_vec(f, &self.reduce(f, v))
    }

    /// Adds `v`; returns whether the rank grew.
    pub fn insert<F: Field<Elem = E>>(&mut self, f: &F, v: &[E]) -> bool {
        assert_eq!(v.len(), self.dim, "dimension mismatch");
        let mut w = self.reduce(f, v);
        let Some(p) = w.iter().position(|&x| !f.is_zero(x)) else {
            return false;
        };
        let inv = f.inv(w[p]).expect("nonzero");
        for x in w.iter_mut() {
            *x = f.mul(inv, *x);
        }
        for row in self.rows.iter_mut() {
            let c = row[p];
            if !f.is_zero(c) {
                for (x, &y) in row.iter_mut().zip(&w) {
                    *x = f.sub(*x, f.mul(c, y));
                }
            }
        }
        self.rows.push(w);
        self.pivots.push(p);
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Small prime field used only to exercise the generic code.
    struct Zp(u32);

    impl Field for Zp {
        type Elem = u32;
        fn zero(&self) -> u32 {
            0
        }
        fn one(&self) -> u32 {
            1
        }
        fn add(&self, a: u32, b: u32) -> u32 {
            (a + b) % self.0
        }
        fn neg(&self, a: u32) -> u32 {
            (self.0 - a) % self.0
        }
        fn mul(&self, a: u32, b: u32) -> u32 {
            (a * b) % self.0
        }
        fn inv(&self, a: u32) -> Option<u32> {
            (1..self.0).find(|&x| (x * a) % self.0 == 1)
        }
    }

    #[test]
    fn kernel_of_rank_two() {
        let f = Zp(5);
        let m = Matrix::from_rows(&[vec![1, 2, 3], vec![0, 1, 1]], 3);
        let k = kernel(&f, &m);
        assert_eq!(k.len(), 1);
        assert!(is_zero_vec(&f, &mat_vec(&f, &m, &k[0])));
    }

    #[test]
    fn inverse_roundtrip() {
        let f = Zp(7);
        let m = Matrix::from_rows(&[vec![1, 2], vec![3, 4]], 2);
        let inv = inverse(&f, &m).unwrap();
        assert_eq!(mat_mul(&f, &m, &inv), identity(&f, 2));
        let sing = Matrix::from_rows(&[vec![1, 2], vec![2, 4]], 2);
        assert!(inverse(&f, &sing).is_none());
    }

    #[test]
    fn solve_inconsistent() {
        let f = Zp(3);
        let m = Matrix::from_rows(&[vec![1, 1], vec![1, 1]], 2);
        assert!(solve(&f, &m, &[1, 2]).is_none());
        let x = solve(&f, &m, &[2, 2]).unwrap();
        assert_eq!(mat_vec(&f, &m, &x), vec![2, 2]);
    }

    #[test]
    fn echelon_tracks_rank() {
        let f = Zp(3);
        let mut e = Echelon::new(3);
        assert!(e.insert(&f, &[1, 2, 0]));
        assert!(!e.insert(&f, &[2, 1, 0]));
        assert!(e.insert(&f, &[0, 0, 1]));
        assert!(e.contains(&f, &[1, 2, 2]));
        assert!(!e.contains(&f, &[0, 1, 0]));
    }
}
