//! Exact linear algebra over [`ScalarExpr`].
//!
//! Elimination over the parameter field picks the generic branch at every
//! pivot and records the nonvanishing condition it relied on, so callers can
//! surface genericity hypotheses (`a != 0`, `s+t != 0`, ...) instead of
//! silently assuming them.

use std::collections::BTreeSet;
use std::fmt;

use crate::scalar::{poly_to_string, Poly, ScalarExpr};

/// Set of polynomial nonvanishing assumptions accumulated by eliminations.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct Assumptions(BTreeSet<Poly>);

impl Assumptions {
    pub fn new() -> Self {
        Assumptions::default()
    }

    /// Record that a pivot value must not vanish. Constants are discarded.
    pub fn record(&mut self, pivot: &ScalarExpr) {
        let num = pivot.numerator();
        if num.is_constant() {
            return;
        }
        self.0.insert(num.monic());
    }

    pub fn merge(&mut self, other: &Assumptions) {
        self.0.extend(other.0.iter().cloned());
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Poly> {
        self.0.iter()
    }

    pub fn render(&self) -> Vec<String> {
        self.0
            .iter()
            .map(|p| format!("{} != 0", poly_to_string(p)))
            .collect()
    }
}

impl fmt::Display for Assumptions {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            write!(f, "none")
        } else {
            write!(f, "{}", self.render().join(", "))
        }
    }
}

/// Dense matrix over the exact scalar field.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Mat {
    pub rows: usize,
    pub cols: usize,
    data: Vec<ScalarExpr>,
}

impl Mat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Mat {
            rows,
            cols,
            data: vec![ScalarExpr::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            *m.at_mut(i, i) = ScalarExpr::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<ScalarExpr>>) -> Self {
        let r = rows.len();
        let c = rows.first().map(|x| x.len()).unwrap_or(0);
        assert!(rows.iter().all(|x| x.len() == c), "ragged matrix rows");
        Mat {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn at(&self, i: usize, j: usize) -> &ScalarExpr {
        &self.data[i * self.cols + j]
    }

    pub fn at_mut(&mut self, i: usize, j: usize) -> &mut ScalarExpr {
        &mut self.data[i * self.cols + j]
    }

    pub fn row(&self, i: usize) -> &[ScalarExpr] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn transpose(&self) -> Mat {
        let mut out = Mat::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                *out.at_mut(j, i) = self.at(i, j).clone();
            }
        }
        out
    }

    pub fn mul(&self, rhs: &Mat) -> Mat {
        assert_eq!(self.cols, rhs.rows, "matrix dimension mismatch");
        let mut out = Mat::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.at(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = rhs.at(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let cur = out.at(i, j).clone();
                    *out.at_mut(i, j) = &cur + &(a * b);
                }
            }
        }
        out
    }

    pub fn add(&self, rhs: &Mat) -> Mat {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        let mut out = self.clone();
        for (a, b) in out.data.iter_mut().zip(&rhs.data) {
            *a = &*a + b;
        }
        out
    }

    pub fn scale(&self, c: &ScalarExpr) -> Mat {
        let mut out = self.clone();
        for a in out.data.iter_mut() {
            *a = &*a * c;
        }
        out
    }

    pub fn neg(&self) -> Mat {
        self.scale(&ScalarExpr::from_int(-1))
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn apply(&self, v: &[ScalarExpr]) -> Vec<ScalarExpr> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                let mut acc = ScalarExpr::zero();
                for (j, x) in v.iter().enumerate() {
                    if !x.is_zero() && !self.at(i, j).is_zero() {
                        acc = &acc + &(self.at(i, j) * x);
                    }
                }
                acc
            })
            .collect()
    }

    /// Reduced row echelon form; returns pivot columns and the recorded
    /// nonvanishing assumptions.
    pub fn rref(&self) -> (Mat, Vec<usize>, Assumptions) {
        let mut m = self.clone();
        let mut assumptions = Assumptions::new();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..m.cols {
            if row >= m.rows {
                break;
            }
            // Prefer nonzero constant pivots, then fewest-term entries, so
            // assumptions stay minimal and deterministic.
            let mut best: Option<(usize, usize)> = None; // (score, row)
            for r in row..m.rows {
                let e = m.at(r, col);
                if e.is_zero() {
                    continue;
                }
                let score = if e.is_constant() {
                    0
                } else {
                    e.numerator().terms.len() + e.numerator().total_degree() as usize
                };
                if best.map(|(s, _)| score < s).unwrap_or(true) {
                    best = Some((score, r));
                }
            }
            let Some((_, prow)) = best else { continue };
            m.swap_rows(row, prow);
            let pivot = m.at(row, col).clone();
            assumptions.record(&pivot);
            let inv = pivot.inv();
            for j in col..m.cols {
                let v = m.at(row, j).clone();
                *m.at_mut(row, j) = &v * &inv;
            }
            for r in 0..m.rows {
                if r == row || m.at(r, col).is_zero() {
                    continue;
                }
                let factor = m.at(r, col).clone();
                for j in col..m.cols {
                    let v = &*m.at(r, j) - &(&factor * m.at(row, j));
                    *m.at_mut(r, j) = v;
                }
            }
            pivots.push(col);
            row += 1;
        }
        (m, pivots, assumptions)
    }

    pub fn rank(&self) -> (usize, Assumptions) {
        let (_, pivots, a) = self.rref();
        (pivots.len(), a)
    }

    /// Exact basis of the right kernel, with recorded pivot assumptions.
    pub fn kernel(&self) -> (Vec<Vec<ScalarExpr>>, Assumptions) {
        let (r, pivots, assumptions) = self.rref();
        let pivot_set: BTreeSet<usize> = pivots.iter().copied().collect();
        let mut basis = Vec::new();
        for free in 0..self.cols {
            if pivot_set.contains(&free) {
                continue;
            }
            let mut v = vec![ScalarExpr::zero(); self.cols];
            v[free] = ScalarExpr::one();
            for (prow, pcol) in pivots.iter().enumerate() {
                v[*pcol] = -r.at(prow, free);
            }
            basis.push(v);
        }
        (basis, assumptions)
    }

    /// Solve `self * x = b`; `None` when inconsistent (generically).
    pub fn solve(&self, b: &[ScalarExpr]) -> (Option<Vec<ScalarExpr>>, Assumptions) {
        assert_eq!(b.len(), self.rows);
        let mut aug = Mat::zeros(self.rows, self.cols + 1);
        for i in 0..self.rows {
            for j in 0..self.cols {
                *aug.at_mut(i, j) = self.at(i, j).clone();
            }
            *aug.at_mut(i, self.cols) = b[i].clone();
        }
        let (r, pivots, assumptions) = aug.rref();
        if pivots.contains(&self.cols) {
            return (None, assumptions);
        }
        let mut x = vec![ScalarExpr::zero(); self.cols];
        for (prow, pcol) in pivots.iter().enumerate() {
            x[*pcol] = r.at(prow, self.cols).clone();
        }
        (Some(x), assumptions)
    }

    /// Inverse of a square matrix; `None` when generically singular.
    pub fn inverse(&self) -> (Option<Mat>, Assumptions) {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut aug = Mat::zeros(n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                *aug.at_mut(i, j) = self.at(i, j).clone();
            }
            *aug.at_mut(i, n + i) = ScalarExpr::one();
        }
        let (r, pivots, assumptions) = aug.rref();
        if pivots.len() < n || pivots.iter().enumerate().any(|(i, &c)| c != i) {
            return (None, assumptions);
        }
        let mut inv = Mat::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                *inv.at_mut(i, j) = r.at(i, n + j).clone();
            }
        }
        (Some(inv), assumptions)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }
}

/// Row-reduced basis of the span of the given vectors.
pub fn span_basis(vectors: &[Vec<ScalarExpr>]) -> (Vec<Vec<ScalarExpr>>, Assumptions) {
    if vectors.is_empty() {
        return (Vec::new(), Assumptions::new());
    }
    let m = Mat::from_rows(vectors.to_vec());
    let (r, pivots, assumptions) = m.rref();
    let basis = (0..pivots.len()).map(|i| r.row(i).to_vec()).collect();
    (basis, assumptions)
}

/// Does `v` lie in the span of `basis`?
pub fn in_span(basis: &[Vec<ScalarExpr>], v: &[ScalarExpr]) -> (bool, Assumptions) {
    let (rank_before, mut a) = if basis.is_empty() {
        (0, Assumptions::new())
    } else {
        Mat::from_rows(basis.to_vec()).rank()
    };
    let mut rows = basis.to_vec();
    rows.push(v.to_vec());
    let (rank_after, a2) = Mat::from_rows(rows).rank();
    a.merge(&a2);
    (rank_after == rank_before, a)
}

/// Span equality of two families of vectors of the same arity.
pub fn span_eq(a: &[Vec<ScalarExpr>], b: &[Vec<ScalarExpr>]) -> (bool, Assumptions) {
    let mut assumptions = Assumptions::new();
    for v in b {
        let (ok, asm) = in_span(a, v);
        assumptions.merge(&asm);
        if !ok {
            return (false, assumptions);
        }
    }
    for v in a {
        let (ok, asm) = in_span(b, v);
        assumptions.merge(&asm);
        if !ok {
            return (false, assumptions);
        }
    }
    (true, assumptions)
}

/// Basis of the intersection of two spans (in a common ambient dimension).
pub fn span_intersection(
    a: &[Vec<ScalarExpr>],
    b: &[Vec<ScalarExpr>],
) -> (Vec<Vec<ScalarExpr>>, Assumptions) {
    if a.is_empty() || b.is_empty() {
        return (Vec::new(), Assumptions::new());
    }
    let dim = a[0].len();
    // Solve x·A = y·B by finding the kernel of the stacked transpose.
    let mut cols = Vec::new();
    for v in a {
        cols.push(v.clone());
    }
    for v in b {
        cols.push(v.iter().map(|x| -x).collect());
    }
    let m = Mat::from_rows(cols).transpose();
    let (ker, mut assumptions) = m.kernel();
    let mut vectors = Vec::new();
    for k in ker {
        let mut v = vec![ScalarExpr::zero(); dim];
        for (i, coef) in k.iter().take(a.len()).enumerate() {
            for (j, x) in a[i].iter().enumerate() {
                v[j] = &v[j] + &(coef * x);
            }
        }
        if v.iter().any(|x| !x.is_zero()) {
            vectors.push(v);
        }
    }
    let (basis, a2) = span_basis(&vectors);
    assumptions.merge(&a2);
    (basis, assumptions)
}

pub fn standard_basis_vector(dim: usize, i: usize) -> Vec<ScalarExpr> {
    let mut v = vec![ScalarExpr::zero(); dim];
    v[i] = ScalarExpr::one();
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse_scalar as p;

    fn m(rows: &[&[&str]]) -> Mat {
        Mat::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|s| p(s).unwrap()).collect())
                .collect(),
        )
    }

    #[test]
    fn identity_has_trivial_kernel() {
        let (k, a) = Mat::identity(3).kernel();
        assert!(k.is_empty());
        assert!(a.is_empty());
    }

    #[test]
    fn zero_matrix_has_full_kernel() {
        let (k, _) = Mat::zeros(2, 2).kernel();
        assert_eq!(k.len(), 2);
    }

    #[test]
    fn skew_pairing_kernel_with_recorded_assumption() {
        // 6x6 pairing with entries (2,5) = a, (3,4) = -a and skew counterparts.
        let mut b = Mat::zeros(6, 6);
        *b.at_mut(1, 4) = p("a").unwrap();
        *b.at_mut(4, 1) = p("-a").unwrap();
        *b.at_mut(2, 3) = p("-a").unwrap();
        *b.at_mut(3, 2) = p("a").unwrap();
        let (k, assumptions) = b.kernel();
        assert_eq!(k.len(), 2);
        let (ok, _) = span_eq(
            &k,
            &[standard_basis_vector(6, 0), standard_basis_vector(6, 5)],
        );
        assert!(ok);
        assert_eq!(assumptions.render(), vec!["a != 0".to_string()]);
    }

    #[test]
    fn kernel_vectors_annihilated_exactly() {
        let mat = m(&[
            &["1", "2", "3"],
            &["2", "4", "6"],
            &["0", "s", "s"],
        ]);
        let (k, _) = mat.kernel();
        assert_eq!(k.len(), 1);
        for v in &k {
            for y in mat.apply(v) {
                assert!(y.is_zero());
            }
        }
    }

    #[test]
    fn solve_and_inverse() {
        let mat = m(&[&["1", "1"], &["0", "t"]]);
        let (x, a) = mat.solve(&[p("2").unwrap(), p("t").unwrap()]);
        assert_eq!(x.unwrap(), vec![p("1").unwrap(), p("1").unwrap()]);
        assert_eq!(a.render(), vec!["t != 0".to_string()]);
        let (inv, _) = mat.inverse();
        let prod = mat.mul(&inv.unwrap());
        assert_eq!(prod, Mat::identity(2));
    }

    #[test]
    fn span_intersection_of_planes() {
        let e1 = standard_basis_vector(3, 0);
        let e2 = standard_basis_vector(3, 1);
        let e3 = standard_basis_vector(3, 2);
        let (basis, _) = span_intersection(
            &[e1.clone(), e2.clone()],
            &[e2.clone(), e3.clone()],
        );
        assert_eq!(basis.len(), 1);
        let (ok, _) = span_eq(&basis, &[e2]);
        assert!(ok);
    }
}
