//! Finite cubical orders.
//!
//! An index is a finitely supported 0/1 sequence; a cubical order is a finite,
//! nonempty, interval-closed set of such indices under the componentwise
//! order. These are the shapes over which diagrams of complexes are indexed.
//! The augmented `n`-cube has every 0/1 vector on `n + 1` coordinates; the
//! non-augmented one drops the all-zero vertex.

use std::collections::BTreeSet;
use std::fmt;

/// A finitely supported 0/1 sequence in canonical form (no trailing zeros).
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CubeIndex {
    /// Coordinates from position 0 up to the last 1; empty means all-zero.
    bits: Vec<bool>,
}

impl fmt::Debug for CubeIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CubeIndex({})", self)
    }
}

impl fmt::Display for CubeIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.bits.is_empty() {
            return write!(f, "0");
        }
        for &b in &self.bits {
            write!(f, "{}", if b { '1' } else { '0' })?;
        }
        Ok(())
    }
}

impl CubeIndex {
    /// Build from raw coordinates (position 0 first); trailing zeros are
    /// stripped so equality is structural.
    pub fn new(bits: impl IntoIterator<Item = bool>) -> Self {
        let mut bits: Vec<bool> = bits.into_iter().collect();
        while bits.last() == Some(&false) {
            bits.pop();
        }
        CubeIndex { bits }
    }

    /// The all-zero index.
    pub fn zero() -> Self {
        CubeIndex { bits: Vec::new() }
    }

    /// Parse a bit string such as `"01"`; position 0 is the first character.
    pub fn parse(s: &str) -> Result<Self, String> {
        let mut bits = Vec::new();
        for c in s.chars() {
            match c {
                '0' => bits.push(false),
                '1' => bits.push(true),
                _ => return Err(format!("bad cube index {s:?}: expected only 0/1")),
            }
        }
        Ok(CubeIndex::new(bits))
    }

    /// Render with at least `width` coordinates (padding with zeros).
    pub fn to_bit_string(&self, width: usize) -> String {
        (0..width.max(self.bits.len()))
            .map(|i| if self.bit(i) { '1' } else { '0' })
            .collect()
    }

    pub fn bit(&self, i: usize) -> bool {
        self.bits.get(i).copied().unwrap_or(false)
    }

    /// Number of coordinates up to the last 1.
    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    /// Number of 1 entries.
    pub fn weight(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }

    /// Positions of the 1 entries.
    pub fn support(&self) -> Vec<usize> {
        (0..self.bits.len()).filter(|&i| self.bit(i)).collect()
    }

    /// Componentwise order: every 1 of `self` is a 1 of `other`.
    pub fn leq(&self, other: &CubeIndex) -> bool {
        (0..self.bits.len()).all(|i| !self.bit(i) || other.bit(i))
    }

    /// Index with the bit at `i` set.
    pub fn with_bit(&self, i: usize) -> CubeIndex {
        let mut bits = self.bits.clone();
        if bits.len() <= i {
            bits.resize(i + 1, false);
        }
        bits[i] = true;
        CubeIndex::new(bits)
    }

    /// Index with the bit at `i` cleared.
    pub fn without_bit(&self, i: usize) -> CubeIndex {
        let mut bits = self.bits.clone();
        if i < bits.len() {
            bits[i] = false;
        }
        CubeIndex::new(bits)
    }

    /// Index built from a support set.
    pub fn from_support(support: &BTreeSet<usize>) -> CubeIndex {
        let n = support.iter().max().map_or(0, |m| m + 1);
        CubeIndex::new((0..n).map(|i| support.contains(&i)))
    }

    /// Concatenate: `self` on the first `left_width` coordinates, `other`
    /// shifted after them.
    pub fn concat(&self, left_width: usize, other: &CubeIndex) -> CubeIndex {
        assert!(
            self.len() <= left_width,
            "left index exceeds its coordinate block"
        );
        let mut bits: Vec<bool> = (0..left_width).map(|i| self.bit(i)).collect();
        bits.extend((0..other.len()).map(|i| other.bit(i)));
        CubeIndex::new(bits)
    }

    /// Split into the first `left_width` coordinates and the rest.
    pub fn split(&self, left_width: usize) -> (CubeIndex, CubeIndex) {
        let left = CubeIndex::new((0..left_width).map(|i| self.bit(i)));
        let right = CubeIndex::new((left_width..self.len().max(left_width)).map(|i| self.bit(i)));
        (left, right)
    }
}

/// How a product order's coordinates split between its two factors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProductSplit {
    pub left: CubicalOrder,
    pub right: CubicalOrder,
    /// Width of the left coordinate block.
    pub left_width: usize,
    /// Width of the right coordinate block.
    pub right_width: usize,
}

/// A finite nonempty interval-closed set of cube indices.
#[derive(Clone, PartialEq, Eq)]
pub struct CubicalOrder {
    members: BTreeSet<CubeIndex>,
}

impl fmt::Debug for CubicalOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let w = self.coord_width();
        let names: Vec<String> = self
            .members
            .iter()
            .map(|m| m.to_bit_string(w.max(1)))
            .collect();
        write!(f, "CubicalOrder{{{}}}", names.join(", "))
    }
}

/// Every index between `lo` and `hi` in the componentwise order.
pub fn interval(lo: &CubeIndex, hi: &CubeIndex) -> Vec<CubeIndex> {
    if !lo.leq(hi) {
        return Vec::new();
    }
    let base: BTreeSet<usize> = lo.support().into_iter().collect();
    let extra: Vec<usize> = hi
        .support()
        .into_iter()
        .filter(|i| !base.contains(i))
        .collect();
    let mut out = Vec::new();
    for mask in 0..(1u32 << extra.len()) {
        let mut s = base.clone();
        for (j, &pos) in extra.iter().enumerate() {
            if mask & (1 << j) != 0 {
                s.insert(pos);
            }
        }
        out.push(CubeIndex::from_support(&s));
    }
    out
}

/// Whether a finite set of indices is a cubical order: nonempty and closed
/// under intervals.
pub fn is_cubical_order(members: &BTreeSet<CubeIndex>) -> bool {
    if members.is_empty() {
        return false;
    }
    for lo in members {
        for hi in members {
            if lo.leq(hi) && !interval(lo, hi).iter().all(|g| members.contains(g)) {
                return false;
            }
        }
    }
    true
}

impl CubicalOrder {
    pub fn new(members: BTreeSet<CubeIndex>) -> Result<Self, String> {
        if members.is_empty() {
            return Err("a cubical order must be nonempty".into());
        }
        if !is_cubical_order(&members) {
            return Err("index set is not interval-closed".into());
        }
        Ok(CubicalOrder { members })
    }

    /// The augmented (`augmented = true`) or plain `n`-cube: all 0/1 vectors
    /// on `n + 1` coordinates, the plain one without the all-zero vertex.
    pub fn standard_cube(n: usize, augmented: bool) -> Self {
        let coords = n + 1;
        assert!(coords <= 20, "standard cube too large");
        let mut members = BTreeSet::new();
        for mask in 0..(1u32 << coords) {
            if mask == 0 && !augmented {
                continue;
            }
            members.insert(CubeIndex::new((0..coords).map(|i| mask & (1 << i) != 0)));
        }
        CubicalOrder { members }
    }

    /// The one-point order `{1}` on a single coordinate.
    pub fn point() -> Self {
        let mut members = BTreeSet::new();
        members.insert(CubeIndex::new([true]));
        CubicalOrder { members }
    }

    pub fn members(&self) -> impl Iterator<Item = &CubeIndex> {
        self.members.iter()
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn contains(&self, idx: &CubeIndex) -> bool {
        self.members.contains(idx)
    }

    /// Width of the coordinate block spanned by the members.
    pub fn coord_width(&self) -> usize {
        self.members.iter().map(|m| m.len()).max().unwrap_or(0)
    }

    /// Smallest `n` with every member inside the `n`-cube (`n + 1` coords);
    /// the all-zero-only order sits inside the 0-cube.
    pub fn ambient_arity(&self) -> usize {
        self.coord_width().saturating_sub(1)
    }

    /// Covering edges `(lower, upper, direction)`: pairs differing in exactly
    /// the bit `direction`.
    pub fn covering_edges(&self) -> Vec<(CubeIndex, CubeIndex, usize)> {
        let w = self.coord_width();
        let mut out = Vec::new();
        for m in &self.members {
            for i in 0..w {
                if !m.bit(i) {
                    let up = m.with_bit(i);
                    if self.members.contains(&up) {
                        out.push((m.clone(), up.clone(), i));
                    }
                }
            }
        }
        out
    }

    /// Concatenated-coordinate product. The split descriptor records which
    /// coordinates belong to each factor.
    pub fn product(&self, other: &CubicalOrder) -> (CubicalOrder, ProductSplit) {
        let lw = self.coord_width();
        let rw = other.coord_width();
        let mut members = BTreeSet::new();
        for a in &self.members {
            for b in &other.members {
                members.insert(a.concat(lw, b));
            }
        }
        let order = CubicalOrder { members };
        debug_assert!(is_cubical_order(&order.members));
        let split = ProductSplit {
            left: self.clone(),
            right: other.clone(),
            left_width: lw,
            right_width: rw,
        };
        (order, split)
    }
}
