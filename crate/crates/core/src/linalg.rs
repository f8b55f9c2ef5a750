//! Dense exact linear algebra over the rationals.
//!
//! Everything in the homological layer reduces to rank, kernel and solve
//! computations on small matrices with `BigRational` entries, so this module
//! keeps a deliberately plain row-major representation and does classical
//! Gaussian elimination with exact pivots. There is no floating point
//! anywhere; a rank is a rank.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::fmt;
use std::str::FromStr;

/// Exact rational scalar used throughout the crate.
pub type Q = BigRational;

/// Rational from an integer.
pub fn qi(n: i64) -> Q {
    BigRational::from_integer(BigInt::from(n))
}

/// Parse an exact rational written as `p/q` or `p`.
pub fn parse_q(s: &str) -> Result<Q, String> {
    let t = s.trim();
    match t.split_once('/') {
        None => {
            let n = BigInt::from_str(t).map_err(|e| format!("bad rational {s:?}: {e}"))?;
            Ok(BigRational::from_integer(n))
        }
        Some((p, q)) => {
            let p = BigInt::from_str(p.trim()).map_err(|e| format!("bad rational {s:?}: {e}"))?;
            let q = BigInt::from_str(q.trim()).map_err(|e| format!("bad rational {s:?}: {e}"))?;
            if q.is_zero() {
                return Err(format!("bad rational {s:?}: zero denominator"));
            }
            Ok(BigRational::new(p, q))
        }
    }
}

/// Render a rational as `p/q`, eliding the denominator when it is 1.
pub fn show_q(x: &Q) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Dense rational matrix, row-major.
#[derive(Clone, PartialEq, Eq)]
pub struct QMat {
    rows: usize,
    cols: usize,
    data: Vec<Q>,
}

impl fmt::Debug for QMat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "QMat {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| show_q(self.at(i, j))).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

impl QMat {
    pub fn zero(rows: usize, cols: usize) -> Self {
        QMat {
            rows,
            cols,
            data: vec![Q::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = QMat::zero(n, n);
        for i in 0..n {
            m.set(i, i, Q::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Q>>) -> Result<Self, String> {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        for row in &rows {
            if row.len() != c {
                return Err(format!(
                    "ragged matrix: expected {} columns, found {}",
                    c,
                    row.len()
                ));
            }
        }
        Ok(QMat {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        let data = rows.iter().flat_map(|r| r.iter().map(|&n| qi(n))).collect();
        QMat {
            rows: rows.len(),
            cols: rows.first().map_or(0, |r| r.len()),
            data,
        }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Q) -> Self {
        let mut m = QMat::zero(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m.set(i, j, f(i, j));
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

    pub fn at(&self, i: usize, j: usize) -> &Q {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Q) {
        self.data[i * self.cols + j] = v;
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn transpose(&self) -> QMat {
        QMat::from_fn(self.cols, self.rows, |i, j| self.at(j, i).clone())
    }

    pub fn scale(&self, c: &Q) -> QMat {
        QMat::from_fn(self.rows, self.cols, |i, j| self.at(i, j) * c)
    }

    pub fn neg(&self) -> QMat {
        self.scale(&-Q::one())
    }

    pub fn add(&self, other: &QMat) -> QMat {
        assert_eq!(
            (self.rows, self.cols),
            (other.rows, other.cols),
            "shape mismatch in add"
        );
        QMat::from_fn(self.rows, self.cols, |i, j| self.at(i, j) + other.at(i, j))
    }

    pub fn sub(&self, other: &QMat) -> QMat {
        assert_eq!(
            (self.rows, self.cols),
            (other.rows, other.cols),
            "shape mismatch in sub"
        );
        QMat::from_fn(self.rows, self.cols, |i, j| self.at(i, j) - other.at(i, j))
    }

    pub fn mul(&self, other: &QMat) -> QMat {
        assert_eq!(
            self.cols, other.rows,
            "shape mismatch in mul: {}x{} * {}x{}",
            self.rows, self.cols, other.rows, other.cols
        );
        let mut out = QMat::zero(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.at(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.at(k, j);
                    if !b.is_zero() {
                        let cur = out.at(i, j) + a * b;
                        out.set(i, j, cur);
                    }
                }
            }
        }
        out
    }

    /// Stack `[self; below]` vertically.
    pub fn vstack(&self, below: &QMat) -> QMat {
        assert_eq!(self.cols, below.cols, "shape mismatch in vstack");
        let mut data = self.data.clone();
        data.extend(below.data.iter().cloned());
        QMat {
            rows: self.rows + below.rows,
            cols: self.cols,
            data,
        }
    }

    /// Stack `[self, right]` horizontally.
    pub fn hstack(&self, right: &QMat) -> QMat {
        assert_eq!(self.rows, right.rows, "shape mismatch in hstack");
        QMat::from_fn(self.rows, self.cols + right.cols, |i, j| {
            if j < self.cols {
                self.at(i, j).clone()
            } else {
                right.at(i, j - self.cols).clone()
            }
        })
    }

    /// Assemble a block matrix from a grid of blocks. Row heights and column
    /// widths are taken from the blocks themselves and must be consistent.
    pub fn block(grid: &[Vec<&QMat>]) -> QMat {
        if grid.is_empty() || grid[0].is_empty() {
            return QMat::zero(0, 0);
        }
        let heights: Vec<usize> = grid.iter().map(|r| r[0].rows).collect();
        let widths: Vec<usize> = grid[0].iter().map(|b| b.cols).collect();
        for (bi, row) in grid.iter().enumerate() {
            assert_eq!(row.len(), widths.len(), "ragged block grid");
            for (bj, b) in row.iter().enumerate() {
                assert_eq!(b.rows, heights[bi], "block height mismatch at ({bi},{bj})");
                assert_eq!(b.cols, widths[bj], "block width mismatch at ({bi},{bj})");
            }
        }
        let mut out = QMat::zero(heights.iter().sum(), widths.iter().sum());
        let mut roff = 0;
        for (bi, row) in grid.iter().enumerate() {
            let mut coff = 0;
            for (bj, b) in row.iter().enumerate() {
                for i in 0..b.rows {
                    for j in 0..b.cols {
                        out.set(roff + i, coff + j, b.at(i, j).clone());
                    }
                }
                coff += widths[bj];
            }
            roff += heights[bi];
        }
        out
    }

    /// Submatrix on the given row and column indices.
    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> QMat {
        QMat::from_fn(rows.len(), cols.len(), |i, j| {
            self.at(rows[i], cols[j]).clone()
        })
    }

    /// Reduced row echelon form; returns the pivot column indices.
    pub fn rref(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| !self.at(i, c).is_zero()) else {
                continue;
            };
            if p != r {
                for j in 0..self.cols {
                    self.data.swap(r * self.cols + j, p * self.cols + j);
                }
            }
            let inv = self.at(r, c).clone();
            for j in c..self.cols {
                let v = self.at(r, j) / &inv;
                self.set(r, j, v);
            }
            for i in 0..self.rows {
                if i != r && !self.at(i, c).is_zero() {
                    let factor = self.at(i, c).clone();
                    for j in c..self.cols {
                        let v = self.at(i, j) - &factor * self.at(r, j);
                        self.set(i, j, v);
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        m.rref().len()
    }

    /// Basis of the null space, returned as the columns of a matrix
    /// (`cols x nullity`).
    pub fn kernel_basis(&self) -> QMat {
        let mut m = self.clone();
        let pivots = m.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut out = QMat::zero(self.cols, free.len());
        for (k, &fc) in free.iter().enumerate() {
            out.set(fc, k, Q::one());
            for (r, &pc) in pivots.iter().enumerate() {
                out.set(pc, k, -m.at(r, fc).clone());
            }
        }
        out
    }

    /// Basis of the column space, as columns selected from `self`.
    pub fn column_space_basis(&self) -> QMat {
        let mut m = self.clone();
        let pivots = m.rref();
        QMat::from_fn(self.rows, pivots.len(), |i, j| {
            self.at(i, pivots[j]).clone()
        })
    }

    /// Solve `self * X = rhs` for all columns of `rhs` simultaneously.
    /// Returns `None` when any column is inconsistent.
    pub fn solve(&self, rhs: &QMat) -> Option<QMat> {
        assert_eq!(self.rows, rhs.rows, "shape mismatch in solve");
        let mut aug = self.hstack(rhs);
        let pivots = aug.rref();
        // A pivot inside the rhs block means an inconsistent column.
        if pivots.iter().any(|&c| c >= self.cols) {
            return None;
        }
        let mut x = QMat::zero(self.cols, rhs.cols);
        for (r, &pc) in pivots.iter().enumerate() {
            for j in 0..rhs.cols {
                x.set(pc, j, aug.at(r, self.cols + j).clone());
            }
        }
        Some(x)
    }

    /// Inverse of a square matrix, if it exists.
    pub fn inverse(&self) -> Option<QMat> {
        if self.rows != self.cols {
            return None;
        }
        let x = self.solve(&QMat::identity(self.rows))?;
        if self.mul(&x) == QMat::identity(self.rows) {
            Some(x)
        } else {
            None
        }
    }

    /// Exact determinant by elimination.
    pub fn det(&self) -> Q {
        assert_eq!(self.rows, self.cols, "det of non-square matrix");
        let n = self.rows;
        let mut m = self.clone();
        let mut det = Q::one();
        for c in 0..n {
            let Some(p) = (c..n).find(|&i| !m.at(i, c).is_zero()) else {
                return Q::zero();
            };
            if p != c {
                for j in 0..n {
                    m.data.swap(c * n + j, p * n + j);
                }
                det = -det;
            }
            let piv = m.at(c, c).clone();
            det *= &piv;
            for i in (c + 1)..n {
                if !m.at(i, c).is_zero() {
                    let factor = m.at(i, c) / &piv;
                    for j in c..n {
                        let v = m.at(i, j) - &factor * m.at(c, j);
                        m.set(i, j, v);
                    }
                }
            }
        }
        det
    }
}

/// Determinant of an integer minor: rows and columns pick a square submatrix
/// of `m`. The empty minor has determinant 1. Arithmetic runs in `i128`;
/// overflow panics rather than wrapping.
pub fn int_minor_det(m: &[Vec<i64>], rows: &[usize], cols: &[usize]) -> i64 {
    assert_eq!(rows.len(), cols.len(), "minor must be square");
    let n = rows.len();
    if n == 0 {
        return 1;
    }
    // Laplace expansion along the first row; minors here never exceed 6x6.
    fn expand(m: &[Vec<i64>], rows: &[usize], cols: &[usize]) -> i128 {
        let n = rows.len();
        if n == 1 {
            return m[rows[0]][cols[0]] as i128;
        }
        let mut acc: i128 = 0;
        let sub_rows = &rows[1..];
        for (j, &c) in cols.iter().enumerate() {
            let a = m[rows[0]][c] as i128;
            if a == 0 {
                continue;
            }
            let sub_cols: Vec<usize> = cols
                .iter()
                .enumerate()
                .filter(|&(k, _)| k != j)
                .map(|(_, &cc)| cc)
                .collect();
            let sign = if j % 2 == 0 { 1 } else { -1 };
            acc += sign * a * expand(m, sub_rows, &sub_cols);
        }
        acc
    }
    let v = expand(m, rows, cols);
    i64::try_from(v).expect("minor determinant overflows i64")
}

/// Integer matrix product `a * b`.
pub fn int_mat_mul(a: &[Vec<i64>], b: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let (ra, ca) = (a.len(), a.first().map_or(0, |r| r.len()));
    let (rb, cb) = (b.len(), b.first().map_or(0, |r| r.len()));
    assert_eq!(ca, rb, "shape mismatch in integer product");
    let mut out = vec![vec![0i64; cb]; ra];
    for i in 0..ra {
        for k in 0..ca {
            if a[i][k] == 0 {
                continue;
            }
            for j in 0..cb {
                out[i][j] = out[i][j]
                    .checked_add(
                        a[i][k]
                            .checked_mul(b[k][j])
                            .expect("integer product overflow"),
                    )
                    .expect("integer product overflow");
            }
        }
    }
    out
}

/// All strictly increasing `k`-subsets of `0..n`, in lexicographic order.
pub fn increasing_subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// Sign of a nonzero rational (+1 / -1), or 0.
pub fn sign_of(x: &Q) -> i32 {
    if x.is_zero() {
        0
    } else if x.is_positive() {
        1
    } else {
        -1
    }
}
