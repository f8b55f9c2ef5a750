//! Bounded cochain complexes of finite-dimensional rational vector spaces.
//!
//! A complex stores one dimension per degree and the differentials between
//! consecutive degrees; `d` raises degree by one and `d ∘ d = 0` is enforced
//! at construction. Complexes are kept in a trimmed canonical form (no zero
//! dimensions at either end) so structural equality is equality.

use crate::linalg::QMat;
use std::collections::BTreeMap;
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ComplexError {
    #[error("differential at degree {0} has shape {1}x{2}, expected {3}x{4}")]
    DifferentialShape(i64, usize, usize, usize, usize),
    #[error("d^2 != 0 between degrees {0} and {1}")]
    SquareNonzero(i64, i64),
    #[error("wrong number of differentials: {0} dims need {1}, found {2}")]
    DifferentialCount(usize, usize, usize),
    #[error("chain map component at degree {0} has shape {1}x{2}, expected {3}x{4}")]
    MapShape(i64, usize, usize, usize, usize),
    #[error("chain map does not commute with differentials at degree {0}")]
    NotChainMap(i64),
    #[error("chain maps are not composable: source/target mismatch")]
    NotComposable,
    #[error("{0}")]
    Other(String),
}

/// A bounded cochain complex over the rationals.
#[derive(Clone, PartialEq, Eq)]
pub struct QComplex {
    lo: i64,
    dims: Vec<usize>,
    /// `diffs[j]` maps degree `lo + j` to `lo + j + 1`.
    diffs: Vec<QMat>,
}

impl fmt::Debug for QComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "QComplex[{}..={}] dims {:?}",
            self.lo,
            self.hi(),
            self.dims
        )
    }
}

impl QComplex {
    /// The zero complex.
    pub fn zero() -> Self {
        QComplex {
            lo: 0,
            dims: Vec::new(),
            diffs: Vec::new(),
        }
    }

    /// A single vector space in one degree.
    pub fn concentrated(degree: i64, dim: usize) -> Self {
        if dim == 0 {
            return QComplex::zero();
        }
        QComplex {
            lo: degree,
            dims: vec![dim],
            diffs: Vec::new(),
        }
    }

    /// Build and validate: shapes must line up and `d ∘ d = 0`.
    pub fn new(lo: i64, dims: Vec<usize>, diffs: Vec<QMat>) -> Result<Self, ComplexError> {
        let expected = dims.len().saturating_sub(1);
        if diffs.len() != expected {
            return Err(ComplexError::DifferentialCount(
                dims.len(),
                expected,
                diffs.len(),
            ));
        }
        for (j, d) in diffs.iter().enumerate() {
            if d.rows() != dims[j + 1] || d.cols() != dims[j] {
                return Err(ComplexError::DifferentialShape(
                    lo + j as i64,
                    d.rows(),
                    d.cols(),
                    dims[j + 1],
                    dims[j],
                ));
            }
        }
        for j in 0..diffs.len().saturating_sub(1) {
            if !diffs[j + 1].mul(&diffs[j]).is_zero() {
                return Err(ComplexError::SquareNonzero(
                    lo + j as i64,
                    lo + j as i64 + 2,
                ));
            }
        }
        let mut c = QComplex { lo, dims, diffs };
        c.trim();
        Ok(c)
    }

    fn trim(&mut self) {
        while self.dims.last() == Some(&0) {
            self.dims.pop();
            self.diffs.pop();
        }
        while self.dims.first() == Some(&0) {
            self.dims.remove(0);
            if !self.diffs.is_empty() {
                self.diffs.remove(0);
            }
            self.lo += 1;
        }
        if self.dims.is_empty() {
            self.lo = 0;
            self.diffs.clear();
        }
    }

    pub fn is_zero(&self) -> bool {
        self.dims.is_empty()
    }

    /// Lowest degree with a nonzero space (0 for the zero complex).
    pub fn lo(&self) -> i64 {
        self.lo
    }

    /// Highest degree with a nonzero space (-1 for the zero complex, so that
    /// `lo() > hi()` detects emptiness).
    pub fn hi(&self) -> i64 {
        self.lo + self.dims.len() as i64 - 1
    }

    /// Dimension in a degree; zero outside the stored range.
    pub fn dim(&self, k: i64) -> usize {
        if k < self.lo {
            return 0;
        }
        usize::try_from(k - self.lo)
            .ok()
            .and_then(|j| self.dims.get(j).copied())
            .unwrap_or(0)
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().sum()
    }

    /// The differential out of degree `k`, shaped `dim(k+1) x dim(k)`.
    pub fn d(&self, k: i64) -> QMat {
        if k >= self.lo && k < self.hi() {
            self.diffs[(k - self.lo) as usize].clone()
        } else {
            QMat::zero(self.dim(k + 1), self.dim(k))
        }
    }

    /// Degrees where this complex or an adjacent differential lives.
    pub fn degrees(&self) -> impl Iterator<Item = i64> {
        self.lo..=self.hi()
    }

    /// Dimensions of the cohomology in every degree (only nonzero entries).
    pub fn homology_dims(&self) -> BTreeMap<i64, usize> {
        let mut out = BTreeMap::new();
        for k in self.lo..=self.hi() {
            let rk_out = self.d(k).rank();
            let rk_in = self.d(k - 1).rank();
            let h = self.dim(k) - rk_out - rk_in;
            if h > 0 {
                out.insert(k, h);
            }
        }
        out
    }

    pub fn is_acyclic(&self) -> bool {
        self.homology_dims().is_empty()
    }

    /// Alternating sum of the dimensions.
    pub fn euler_class(&self) -> i64 {
        self.degrees()
            .map(|k| {
                let s = if k.rem_euclid(2) == 0 { 1 } else { -1 };
                s * self.dim(k) as i64
            })
            .sum()
    }

    /// Direct sum, with the four structural chain maps
    /// (inclusions of and projections onto each summand).
    pub fn direct_sum(&self, other: &QComplex) -> (QComplex, SumMaps) {
        let lo = if self.is_zero() {
            other.lo
        } else if other.is_zero() {
            self.lo
        } else {
            self.lo.min(other.lo)
        };
        let hi = self.hi().max(other.hi());
        let mut dims = Vec::new();
        let mut diffs = Vec::new();
        for k in lo..=hi {
            dims.push(self.dim(k) + other.dim(k));
        }
        for k in lo..hi {
            let a = self.d(k);
            let b = other.d(k);
            let z_ab = QMat::zero(a.rows(), b.cols());
            let z_ba = QMat::zero(b.rows(), a.cols());
            diffs.push(QMat::block(&[vec![&a, &z_ab], vec![&z_ba, &b]]));
        }
        let sum = QComplex::new(lo, dims, diffs).expect("direct sum is a complex");
        let inc_a = ChainMap::from_fn(self, &sum, |k| {
            let i = QMat::identity(self.dim(k));
            let z = QMat::zero(other.dim(k), self.dim(k));
            i.vstack(&z)
        });
        let inc_b = ChainMap::from_fn(other, &sum, |k| {
            let z = QMat::zero(self.dim(k), other.dim(k));
            let i = QMat::identity(other.dim(k));
            z.vstack(&i)
        });
        let proj_a = ChainMap::from_fn(&sum, self, |k| {
            let i = QMat::identity(self.dim(k));
            let z = QMat::zero(self.dim(k), other.dim(k));
            i.hstack(&z)
        });
        let proj_b = ChainMap::from_fn(&sum, other, |k| {
            let z = QMat::zero(other.dim(k), self.dim(k));
            let i = QMat::identity(other.dim(k));
            z.hstack(&i)
        });
        (
            sum,
            SumMaps {
                inc_a,
                inc_b,
                proj_a,
                proj_b,
            },
        )
    }
}

/// Structural maps of a binary direct sum.
#[derive(Clone, Debug)]
pub struct SumMaps {
    pub inc_a: ChainMap,
    pub inc_b: ChainMap,
    pub proj_a: ChainMap,
    pub proj_b: ChainMap,
}

/// A degreewise linear map commuting with the differentials.
#[derive(Clone, PartialEq, Eq)]
pub struct ChainMap {
    source: QComplex,
    target: QComplex,
    lo: i64,
    comps: Vec<QMat>,
}

impl fmt::Debug for ChainMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ChainMap {:?} -> {:?}", self.source, self.target)
    }
}

impl ChainMap {
    /// Build from explicit components (any map absent from `comps` is zero)
    /// and validate shapes and commutation with the differentials.
    pub fn new(
        source: QComplex,
        target: QComplex,
        comps: BTreeMap<i64, QMat>,
    ) -> Result<Self, ComplexError> {
        for (&k, m) in &comps {
            if m.rows() != target.dim(k) || m.cols() != source.dim(k) {
                return Err(ComplexError::MapShape(
                    k,
                    m.rows(),
                    m.cols(),
                    target.dim(k),
                    source.dim(k),
                ));
            }
        }
        let lo = source.lo().min(target.lo());
        let hi = source.hi().max(target.hi());
        let mut stored = Vec::new();
        for k in lo..=hi {
            stored.push(
                comps
                    .get(&k)
                    .cloned()
                    .unwrap_or_else(|| QMat::zero(target.dim(k), source.dim(k))),
            );
        }
        let map = ChainMap {
            source,
            target,
            lo,
            comps: stored,
        };
        for k in lo - 1..=hi {
            let left = map.target.d(k).mul(&map.comp(k));
            let right = map.comp(k + 1).mul(&map.source.d(k));
            if left != right {
                return Err(ComplexError::NotChainMap(k));
            }
        }
        Ok(map)
    }

    /// Build from a component formula; panics if the result is not a chain
    /// map (use for structural maps that are correct by construction).
    pub fn from_fn(source: &QComplex, target: &QComplex, mut f: impl FnMut(i64) -> QMat) -> Self {
        let lo = source.lo().min(target.lo());
        let hi = source.hi().max(target.hi());
        let mut comps = BTreeMap::new();
        for k in lo..=hi {
            comps.insert(k, f(k));
        }
        ChainMap::new(source.clone(), target.clone(), comps).expect("structural chain map")
    }

    pub fn identity(c: &QComplex) -> Self {
        ChainMap::from_fn(c, c, |k| QMat::identity(c.dim(k)))
    }

    pub fn zero_map(source: &QComplex, target: &QComplex) -> Self {
        ChainMap::from_fn(source, target, |k| QMat::zero(target.dim(k), source.dim(k)))
    }

    pub fn source(&self) -> &QComplex {
        &self.source
    }

    pub fn target(&self) -> &QComplex {
        &self.target
    }

    /// Component at degree `k`, shaped `target.dim(k) x source.dim(k)`.
    pub fn comp(&self, k: i64) -> QMat {
        if k < self.lo {
            return QMat::zero(self.target.dim(k), self.source.dim(k));
        }
        usize::try_from(k - self.lo)
            .ok()
            .and_then(|j| self.comps.get(j).cloned())
            .unwrap_or_else(|| QMat::zero(self.target.dim(k), self.source.dim(k)))
    }

    /// Composite `self ∘ first`.
    pub fn compose(&self, first: &ChainMap) -> Result<ChainMap, ComplexError> {
        if first.target != self.source {
            return Err(ComplexError::NotComposable);
        }
        Ok(ChainMap::from_fn(&first.source, &self.target, |k| {
            self.comp(k).mul(&first.comp(k))
        }))
    }

    pub fn is_identity(&self) -> bool {
        self.source == self.target
            && self
                .source
                .degrees()
                .all(|k| self.comp(k) == QMat::identity(self.source.dim(k)))
    }

    /// Sum of two parallel chain maps.
    pub fn add(&self, other: &ChainMap) -> Result<ChainMap, ComplexError> {
        if self.source != other.source || self.target != other.target {
            return Err(ComplexError::NotComposable);
        }
        Ok(ChainMap::from_fn(&self.source, &self.target, |k| {
            self.comp(k).add(&other.comp(k))
        }))
    }
}

/// Mapping cone: `cone(f)^k = source^{k+1} ⊕ target^k` with differential
/// `[[-d_src, 0], [f, d_tgt]]`.
pub fn cone(f: &ChainMap) -> QComplex {
    let src = f.source();
    let tgt = f.target();
    if src.is_zero() && tgt.is_zero() {
        return QComplex::zero();
    }
    let lo = (src.lo() - 1).min(tgt.lo());
    let hi = (src.hi() - 1).max(tgt.hi());
    let mut dims = Vec::new();
    for k in lo..=hi {
        dims.push(src.dim(k + 1) + tgt.dim(k));
    }
    let mut diffs = Vec::new();
    for k in lo..hi {
        let a = src.d(k + 1).neg();
        let z = QMat::zero(src.dim(k + 2), tgt.dim(k));
        let fm = f.comp(k + 1);
        let b = tgt.d(k);
        diffs.push(QMat::block(&[vec![&a, &z], vec![&fm, &b]]));
    }
    QComplex::new(lo, dims, diffs).expect("cone of a chain map is a complex")
}

/// A chain map is a quasi-isomorphism exactly when its cone is acyclic.
pub fn is_quasi_iso(f: &ChainMap) -> bool {
    cone(f).is_acyclic()
}

/// Cylinder object with its structural maps.
#[derive(Clone, Debug)]
pub struct Cylinder {
    pub cyl: QComplex,
    /// End inclusion at face 0; a section of `collapse`.
    pub delta0: ChainMap,
    /// End inclusion at face 1; a section of `collapse`.
    pub delta1: ChainMap,
    /// Projection back onto the original complex.
    pub collapse: ChainMap,
}

/// Cylinder: `Cyl^k = X^k ⊕ X^{k+1} ⊕ X^k` with
/// `d(a, b, c) = (da - b, -db, b + dc)`; `collapse ∘ delta_i = id` exactly.
pub fn cylinder(x: &QComplex) -> Cylinder {
    if x.is_zero() {
        let z = QComplex::zero();
        let id = ChainMap::identity(&z);
        return Cylinder {
            cyl: z,
            delta0: id.clone(),
            delta1: id.clone(),
            collapse: id,
        };
    }
    let lo = x.lo() - 1;
    let hi = x.hi();
    let mut dims = Vec::new();
    for k in lo..=hi {
        dims.push(2 * x.dim(k) + x.dim(k + 1));
    }
    let mut diffs = Vec::new();
    for k in lo..hi {
        // Block order per degree: (a in X^k, b in X^{k+1}, c in X^k),
        // d(a, b, c) = (da - b, -db, b + dc).
        let d = x.d(k);
        let neg_d1 = x.d(k + 1).neg();
        let i_mid = QMat::identity(x.dim(k + 1));
        let neg_i_mid = i_mid.neg();
        let z_next = QMat::zero(x.dim(k + 2), x.dim(k));
        let z_same = QMat::zero(x.dim(k + 1), x.dim(k));
        diffs.push(QMat::block(&[
            vec![&d, &neg_i_mid, &z_same],
            vec![&z_next, &neg_d1, &z_next],
            vec![&z_same, &i_mid, &d],
        ]));
    }
    let cyl = QComplex::new(lo, dims, diffs).expect("cylinder is a complex");
    let delta0 = ChainMap::from_fn(x, &cyl, |k| {
        let i = QMat::identity(x.dim(k));
        let z1 = QMat::zero(x.dim(k + 1), x.dim(k));
        let z2 = QMat::zero(x.dim(k), x.dim(k));
        i.vstack(&z1).vstack(&z2)
    });
    let delta1 = ChainMap::from_fn(x, &cyl, |k| {
        let z2 = QMat::zero(x.dim(k), x.dim(k));
        let z1 = QMat::zero(x.dim(k + 1), x.dim(k));
        let i = QMat::identity(x.dim(k));
        z2.vstack(&z1).vstack(&i)
    });
    let collapse = ChainMap::from_fn(&cyl, x, |k| {
        let i = QMat::identity(x.dim(k));
        let z = QMat::zero(x.dim(k), x.dim(k + 1));
        i.hstack(&z).hstack(&i)
    });
    Cylinder {
        cyl,
        delta0,
        delta1,
        collapse,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::qi;

    fn two_term(n: i64, m: QMat) -> QComplex {
        let (r, c) = (m.rows(), m.cols());
        QComplex::new(n, vec![c, r], vec![m]).unwrap()
    }

    #[test]
    fn rejects_non_square_zero() {
        let d0 = QMat::from_i64(&[&[1]]);
        let d1 = QMat::from_i64(&[&[1]]);
        assert!(matches!(
            QComplex::new(0, vec![1, 1, 1], vec![d0, d1]),
            Err(ComplexError::SquareNonzero(..))
        ));
    }

    #[test]
    fn homology_of_two_term_identity() {
        let c = two_term(0, QMat::identity(2));
        assert!(c.is_acyclic());
        assert_eq!(c.euler_class(), 0);
    }

    #[test]
    fn cone_of_zero_map_on_points() {
        // 0 -> Q in degree 0 each; cone has homology (1, 1) in degrees -1, 0.
        let a = QComplex::concentrated(0, 1);
        let b = QComplex::concentrated(0, 1);
        let f = ChainMap::zero_map(&a, &b);
        let c = cone(&f);
        let h = c.homology_dims();
        assert_eq!(h.get(&-1), Some(&1));
        assert_eq!(h.get(&0), Some(&1));
        assert_eq!(h.len(), 2);
        assert!(!is_quasi_iso(&f));
    }

    #[test]
    fn cone_euler_relation() {
        let a = two_term(0, QMat::from_i64(&[&[0, 1]]));
        let b = QComplex::concentrated(1, 3);
        let f = ChainMap::zero_map(&a, &b);
        let c = cone(&f);
        assert_eq!(c.euler_class(), b.euler_class() - a.euler_class());
    }

    #[test]
    fn identity_is_quasi_iso() {
        let a = two_term(-1, QMat::from_i64(&[&[1], &[0]]));
        assert!(is_quasi_iso(&ChainMap::identity(&a)));
    }

    #[test]
    fn cylinder_identities() {
        let x = two_term(0, QMat::from_i64(&[&[2, 0], &[0, 0]]));
        let cyl = cylinder(&x);
        assert!(cyl.collapse.compose(&cyl.delta0).unwrap().is_identity());
        assert!(cyl.collapse.compose(&cyl.delta1).unwrap().is_identity());
        assert!(is_quasi_iso(&cyl.delta0));
        assert!(is_quasi_iso(&cyl.delta1));
        assert!(is_quasi_iso(&cyl.collapse));
    }

    #[test]
    fn direct_sum_shapes_and_maps() {
        let a = QComplex::concentrated(0, 2);
        let b = two_term(1, QMat::from_i64(&[&[1]]));
        let (s, maps) = a.direct_sum(&b);
        assert_eq!(s.dim(0), 2);
        assert_eq!(s.dim(1), 1);
        assert_eq!(s.dim(2), 1);
        assert!(maps.proj_a.compose(&maps.inc_a).unwrap().is_identity());
        assert!(maps.proj_b.compose(&maps.inc_b).unwrap().is_identity());
        // Inclusion of a summand with acyclic complement is a quasi-iso.
        assert!(b.is_acyclic());
        assert!(is_quasi_iso(&maps.inc_a));
    }

    #[test]
    fn chain_map_validation() {
        let a = two_term(0, QMat::from_i64(&[&[1]]));
        let b = QComplex::concentrated(0, 1);
        // Including the point into degree 0 of [Q -> Q] does not commute:
        // d(fx) = x in degree 1 but f(dx) = 0.
        let mut comps = BTreeMap::new();
        comps.insert(0, QMat::identity(1));
        assert!(matches!(
            ChainMap::new(b.clone(), a.clone(), comps.clone()),
            Err(ComplexError::NotChainMap(0))
        ));
        // The other direction (projection onto degree 0) does commute.
        assert!(ChainMap::new(a.clone(), b.clone(), comps).is_ok());
        let ok = ChainMap::zero_map(&a, &b);
        assert_eq!(ok.comp(0), QMat::zero(1, 1));
        let _ = qi(0);
    }

    #[test]
    fn trimming_canonicalizes() {
        let c = QComplex::new(0, vec![0, 1, 0], vec![QMat::zero(1, 0), QMat::zero(0, 1)]).unwrap();
        assert_eq!(c.lo(), 1);
        assert_eq!(c.hi(), 1);
        assert_eq!(c, QComplex::concentrated(1, 1));
    }
}
