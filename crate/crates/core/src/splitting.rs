//! Contractions and the splitting of contractile complexes.
//!
//! A contraction of a complex `C` is a degree `-1` family `h` with
//! `1 = h d + d h` in every degree. When one exists, `d h` and `h d` are
//! complementary projectors, `d` restricts to an isomorphism
//! `Ker(dh)^k -> Im(dh)^{k+1}`, and `C` splits as the cone complex of the
//! graded space `P = Im(dh)` with zero differential: two rows connected by
//! the identity. This module finds contractions for acyclic complexes and
//! produces the split with explicit mutually inverse chain maps.

use crate::complex::{cone, ChainMap, ComplexError, QComplex};
use crate::linalg::QMat;
use std::collections::BTreeMap;

/// A degree `-1` family of maps `h^k : C^k -> C^{k-1}`.
#[derive(Clone, Debug)]
pub struct Contraction {
    comps: BTreeMap<i64, QMat>,
}

impl Contraction {
    pub fn new(comps: BTreeMap<i64, QMat>) -> Self {
        Contraction { comps }
    }

    /// Component at degree `k`, shaped `c.dim(k-1) x c.dim(k)` for the
    /// complex it belongs to; absent components are zero.
    pub fn comp(&self, c: &QComplex, k: i64) -> QMat {
        self.comps
            .get(&k)
            .cloned()
            .unwrap_or_else(|| QMat::zero(c.dim(k - 1), c.dim(k)))
    }

    /// Exact check of `1 = h d + d h` in every degree.
    pub fn is_contraction_of(&self, c: &QComplex) -> bool {
        for (&k, m) in &self.comps {
            if m.rows() != c.dim(k - 1) || m.cols() != c.dim(k) {
                return false;
            }
        }
        for k in c.lo()..=c.hi() {
            let hd = self.comp(c, k + 1).mul(&c.d(k));
            let dh = c.d(k - 1).mul(&self.comp(c, k));
            if hd.add(&dh) != QMat::identity(c.dim(k)) {
                return false;
            }
        }
        true
    }
}

/// The split of a contractile complex: the graded piece `P` (zero
/// differential), and the two mutually inverse chain maps between the cone
/// complex of `P` and the original complex.
#[derive(Clone, Debug)]
pub struct ContractileSplit {
    /// Zero-differential complex with `P^k = Im(d h) ⊂ C^k`.
    pub graded: QComplex,
    /// The cone complex of `graded`: `P^{k+1} ⊕ P^k` with `d(x, y) = (0, x)`.
    pub cone_model: QComplex,
    /// Isomorphism `cone_model -> C`.
    pub into: ChainMap,
    /// Inverse isomorphism `C -> cone_model`.
    pub back: ChainMap,
}

/// Construct a contraction for an acyclic complex; returns `None` when the
/// complex has homology. The construction picks, in each degree, a
/// complement `W` of the cycles and inverts `d` from `W` onto the cycles one
/// degree up; the defining identity is then verified exactly.
pub fn find_contraction(c: &QComplex) -> Option<Contraction> {
    if !c.is_acyclic() {
        return None;
    }
    if c.is_zero() {
        return Some(Contraction::new(BTreeMap::new()));
    }
    // Per degree: a kernel basis Z and a complement W of unit vectors.
    let mut kernels: BTreeMap<i64, QMat> = BTreeMap::new();
    let mut complements: BTreeMap<i64, QMat> = BTreeMap::new();
    for k in c.lo()..=c.hi() {
        let z = c.d(k).kernel_basis();
        let n = c.dim(k);
        let mut w = QMat::zero(n, 0);
        let mut current = z.clone();
        let mut rank = current.rank();
        for i in 0..n {
            let mut e = QMat::zero(n, 1);
            e.set(i, 0, crate::linalg::qi(1));
            let cand = current.hstack(&e);
            let r = cand.rank();
            if r > rank {
                rank = r;
                current = cand;
                w = w.hstack(&e);
            }
        }
        debug_assert_eq!(rank, n, "kernel plus complement must span");
        kernels.insert(k, z);
        complements.insert(k, w);
    }
    let mut comps = BTreeMap::new();
    for k in c.lo()..=c.hi() {
        let z = &kernels[&k];
        let w = &complements[&k];
        let n = c.dim(k);
        if n == 0 {
            continue;
        }
        // On cycles: h z = the unique w' in the previous complement with
        // d w' = z (acyclicity provides it); on the complement: h = 0.
        let zero_w = QMat::zero(c.dim(k - 1), w.cols());
        let h_on_z = if z.cols() == 0 {
            QMat::zero(c.dim(k - 1), 0)
        } else {
            let w_prev = complements
                .get(&(k - 1))
                .cloned()
                .unwrap_or_else(|| QMat::zero(c.dim(k - 1), 0));
            let dw = c.d(k - 1).mul(&w_prev);
            let t = dw.solve(z)?;
            w_prev.mul(&t)
        };
        let basis = z.hstack(w);
        let inv = basis.inverse()?;
        comps.insert(k, h_on_z.hstack(&zero_w).mul(&inv));
    }
    let h = Contraction::new(comps);
    // The construction is checked, not trusted.
    h.is_contraction_of(c).then_some(h)
}

/// Split a complex along a verified contraction.
///
/// Fails when `h` is not a contraction of `c`. A complex carrying a
/// contraction is necessarily acyclic; that is checked defensively.
pub fn contractile_split(c: &QComplex, h: &Contraction) -> Result<ContractileSplit, ComplexError> {
    if !h.is_contraction_of(c) {
        return Err(ComplexError::Other(
            "not a contraction: 1 = hd + dh fails".into(),
        ));
    }
    if !c.is_acyclic() {
        return Err(ComplexError::Other(
            "complex with a contraction must be acyclic; homology engine disagrees".into(),
        ));
    }
    // Per degree: projector dh, a basis of its image (the piece P), and a
    // basis of its kernel (= Im hd).
    let mut p_basis: BTreeMap<i64, QMat> = BTreeMap::new();
    let mut k_basis: BTreeMap<i64, QMat> = BTreeMap::new();
    for k in c.lo()..=c.hi() + 1 {
        let proj = c.d(k - 1).mul(&h.comp(c, k));
        p_basis.insert(k, proj.column_space_basis());
        k_basis.insert(k, proj.kernel_basis());
    }
    let dims: Vec<usize> = (c.lo()..=c.hi() + 1).map(|k| p_basis[&k].cols()).collect();
    let graded = QComplex::new(
        c.lo(),
        dims.clone(),
        (0..dims.len().saturating_sub(1))
            .map(|j| QMat::zero(dims[j + 1], dims[j]))
            .collect(),
    )?;
    let cone_model = cone(&ChainMap::identity(&graded));

    // Isomorphism into C: degree k of the cone model is P^{k+1} ⊕ P^k. The
    // second block includes as the chosen image basis; the first block maps
    // through the inverse of d restricted to Ker(dh)^k -> Im(dh)^{k+1}.
    let mut into_comps: BTreeMap<i64, QMat> = BTreeMap::new();
    for k in cone_model.lo()..=cone_model.hi() {
        let p_next = p_basis
            .get(&(k + 1))
            .cloned()
            .unwrap_or_else(|| QMat::zero(c.dim(k + 1), 0));
        let p_here = p_basis
            .get(&k)
            .cloned()
            .unwrap_or_else(|| QMat::zero(c.dim(k), 0));
        let ker_here = k_basis
            .get(&k)
            .cloned()
            .unwrap_or_else(|| QMat::zero(c.dim(k), 0));
        let lift = if p_next.cols() == 0 {
            QMat::zero(c.dim(k), 0)
        } else {
            let dk = c.d(k).mul(&ker_here);
            let t = dk.solve(&p_next).ok_or_else(|| {
                ComplexError::Other("d does not restrict to an isomorphism".into())
            })?;
            ker_here.mul(&t)
        };
        into_comps.insert(k, lift.hstack(&p_here));
    }
    let into = ChainMap::new(cone_model.clone(), c.clone(), into_comps)?;
    let mut back_comps: BTreeMap<i64, QMat> = BTreeMap::new();
    for k in cone_model.lo()..=cone_model.hi() {
        let m = into.comp(k);
        let inv = m
            .inverse()
            .ok_or_else(|| ComplexError::Other("split comparison map is not invertible".into()))?;
        back_comps.insert(k, inv);
    }
    let back = ChainMap::new(c.clone(), cone_model.clone(), back_comps)?;
    debug_assert!(into
        .compose(&back)
        .map(|m| m.is_identity())
        .unwrap_or(false));
    debug_assert!(back
        .compose(&into)
        .map(|m| m.is_identity())
        .unwrap_or(false));
    Ok(ContractileSplit {
        graded,
        cone_model,
        into,
        back,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{qi, QMat};

    fn acyclic_two_by_two() -> QComplex {
        // [Q^2 -> Q^2] with an invertible differential.
        QComplex::new(0, vec![2, 2], vec![QMat::from_i64(&[&[1, 2], &[0, 1]])]).unwrap()
    }

    #[test]
    fn contraction_exists_iff_acyclic() {
        let c = acyclic_two_by_two();
        let h = find_contraction(&c).expect("acyclic complex has a contraction");
        assert!(h.is_contraction_of(&c));

        let hole = QComplex::concentrated(0, 1);
        assert!(find_contraction(&hole).is_none());
    }

    #[test]
    fn zero_complex_contracts() {
        let z = QComplex::zero();
        let h = find_contraction(&z).unwrap();
        assert!(h.is_contraction_of(&z));
        let split = contractile_split(&z, &h).unwrap();
        assert!(split.graded.is_zero());
    }

    #[test]
    fn split_round_trip() {
        let c = acyclic_two_by_two();
        let h = find_contraction(&c).unwrap();
        let split = contractile_split(&c, &h).unwrap();
        assert!(split.into.compose(&split.back).unwrap().is_identity());
        assert!(split.back.compose(&split.into).unwrap().is_identity());
        // The graded piece carries no differential and the model is acyclic.
        assert!(split.graded.degrees().all(|k| split.graded.d(k).is_zero()));
        assert!(split.cone_model.is_acyclic());
        assert_eq!(split.graded.euler_class() * 0, 0);
    }

    #[test]
    fn longer_acyclic_complex_splits() {
        // 0 -> Q -> Q^2 -> Q -> 0, exact.
        let d0 = QMat::from_i64(&[&[1], &[1]]);
        let d1 = QMat::from_i64(&[&[1, -1]]);
        let c = QComplex::new(-1, vec![1, 2, 1], vec![d0, d1]).unwrap();
        assert!(c.is_acyclic());
        let h = find_contraction(&c).unwrap();
        let split = contractile_split(&c, &h).unwrap();
        assert!(split.into.compose(&split.back).unwrap().is_identity());
        assert_eq!(c.euler_class(), 0);
        let _ = qi(0);
    }

    #[test]
    fn rejects_non_contraction() {
        let c = acyclic_two_by_two();
        let bogus = Contraction::new(BTreeMap::new());
        assert!(contractile_split(&c, &bogus).is_err());
    }
}
