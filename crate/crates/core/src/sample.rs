//! Seeded random generators for the verification suites: complexes with
//! controlled homology, chain maps sampled from the full solution space of
//! the commutation equations, quasi-isomorphisms by construction, commuting
//! cubical diagrams, diagram morphisms, strata lattices, and integer
//! matrices. Everything draws from a ChaCha stream so runs are reproducible
//! from a single seed across platforms.

use crate::complex::{ChainMap, QComplex};
use crate::cubical::{CubeIndex, CubicalOrder};
use crate::diagram::{CubicalDiagram, DiagramMorphism};
use crate::gysin::{Sigma, SncPair};
use crate::linalg::{qi, QMat, Q};
use crate::motive::{Atom, AtomRegistry};
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeMap;

pub struct Sampler {
    rng: ChaCha8Rng,
}

impl Sampler {
    pub fn new(seed: u64) -> Sampler {
        Sampler {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn int_in(&mut self, lo: i64, hi: i64) -> i64 {
        self.rng.gen_range(lo..=hi)
    }

    pub fn usize_in(&mut self, lo: usize, hi: usize) -> usize {
        self.rng.gen_range(lo..=hi)
    }

    pub fn chance(&mut self, p: f64) -> bool {
        self.rng.gen_bool(p)
    }

    /// A random integer matrix with determinant ±1, built from shears,
    /// swaps, and sign flips, so its inverse is again an integer matrix.
    pub fn unimodular(&mut self, n: usize) -> QMat {
        let mut m = QMat::identity(n);
        if n < 2 {
            if n == 1 && self.chance(0.5) {
                m = m.neg();
            }
            return m;
        }
        let ops = self.usize_in(n, 3 * n);
        for _ in 0..ops {
            let i = self.usize_in(0, n - 1);
            let mut j = self.usize_in(0, n - 2);
            if j >= i {
                j += 1;
            }
            match self.usize_in(0, 3) {
                0 | 1 => {
                    // Row shear: row_i += c * row_j.
                    let c = qi(if self.chance(0.5) { 1 } else { -1 });
                    for col in 0..n {
                        let v = m.at(i, col).clone() + c.clone() * m.at(j, col).clone();
                        m.set(i, col, v);
                    }
                }
                2 => {
                    for col in 0..n {
                        let a = m.at(i, col).clone();
                        let b = m.at(j, col).clone();
                        m.set(i, col, b);
                        m.set(j, col, a);
                    }
                }
                _ => {
                    for col in 0..n {
                        let v = -m.at(i, col).clone();
                        m.set(i, col, v);
                    }
                }
            }
        }
        m
    }

    /// A random complex in degrees `[lo, hi]` with every term of dimension
    /// at most `max_dim`: a direct sum of points (homology) and intervals
    /// (acyclic pieces), conjugated by unimodular changes of basis so the
    /// differentials are dense.
    pub fn complex(&mut self, lo: i64, hi: i64, max_dim: usize) -> QComplex {
        self.summand_complex(lo, hi, max_dim, true)
    }

    /// Same shape of generator, but only interval summands: the result is
    /// acyclic (possibly zero).
    pub fn acyclic_complex(&mut self, lo: i64, hi: i64, max_dim: usize) -> QComplex {
        self.summand_complex(lo, hi, max_dim, false)
    }

    fn summand_complex(&mut self, lo: i64, hi: i64, max_dim: usize, points: bool) -> QComplex {
        assert!(lo <= hi);
        let span = (hi - lo + 1) as usize;
        // Per degree: `free` point generators, plus interval summands
        // spanning (k, k+1) — a generator is exactly one of point, interval
        // source, or interval target, so d^2 = 0 holds block by block.
        let mut free = vec![0usize; span];
        let mut ivals = vec![0usize; span.saturating_sub(1)];
        let dims_at = |free: &[usize], ivals: &[usize], k: usize| -> usize {
            free[k] + if k < span - 1 { ivals[k] } else { 0 } + if k > 0 { ivals[k - 1] } else { 0 }
        };
        let budget = self.usize_in(0, 2 * span.min(4));
        for _ in 0..budget {
            if points && self.chance(0.4) {
                let k = self.usize_in(0, span - 1);
                if dims_at(&free, &ivals, k) < max_dim {
                    free[k] += 1;
                }
            } else if span >= 2 {
                let k = self.usize_in(0, span - 2);
                if dims_at(&free, &ivals, k) < max_dim && dims_at(&free, &ivals, k + 1) < max_dim {
                    ivals[k] += 1;
                }
            }
        }
        let dims: Vec<usize> = (0..span).map(|k| dims_at(&free, &ivals, k)).collect();
        let mut diffs = Vec::new();
        for k in 0..span - 1 {
            // Interval sources sit right after the points of degree k;
            // their targets occupy the tail of degree k+1.
            let mut d = QMat::zero(dims[k + 1], dims[k]);
            for t in 0..ivals[k] {
                d.set(dims[k + 1] - ivals[k] + t, free[k] + t, qi(1));
            }
            diffs.push(d);
        }
        let plain = QComplex::new(lo, dims, diffs).expect("summand differentials square to zero");
        self.conjugate(&plain).0
    }

    /// Conjugate a complex by fresh unimodular bases; returns the new
    /// complex with the iso into it and the inverse iso.
    pub fn conjugate(&mut self, x: &QComplex) -> (QComplex, ChainMap, ChainMap) {
        if x.is_zero() {
            let id = ChainMap::identity(x);
            return (x.clone(), id.clone(), id);
        }
        let lo = x.lo();
        let hi = x.hi();
        let mut us = BTreeMap::new();
        let mut invs = BTreeMap::new();
        for k in lo..=hi {
            let u = self.unimodular(x.dim(k));
            invs.insert(k, u.inverse().expect("unimodular is invertible"));
            us.insert(k, u);
        }
        let dims: Vec<usize> = (lo..=hi).map(|k| x.dim(k)).collect();
        let diffs: Vec<QMat> = (lo..hi)
            .map(|k| us[&(k + 1)].mul(&x.d(k)).mul(&invs[&k]))
            .collect();
        let y = QComplex::new(lo, dims, diffs).expect("conjugation preserves d^2 = 0");
        let fwd = ChainMap::from_fn(x, &y, |k| {
            us.get(&k)
                .cloned()
                .unwrap_or_else(|| QMat::zero(y.dim(k), x.dim(k)))
        });
        let back = ChainMap::from_fn(&y, x, |k| {
            invs.get(&k)
                .cloned()
                .unwrap_or_else(|| QMat::zero(x.dim(k), y.dim(k)))
        });
        (y, fwd, back)
    }

    /// A uniform-ish random chain map: solve the commutation equations
    /// exactly, then take a random small-integer combination of a kernel
    /// basis of the solution space.
    pub fn chain_map(&mut self, src: &QComplex, tgt: &QComplex) -> ChainMap {
        let lo = src.lo().min(tgt.lo());
        let hi = src.hi().max(tgt.hi());
        // Unknown layout: entries of f_k, degree by degree, row-major.
        let mut offsets = BTreeMap::new();
        let mut total = 0usize;
        for k in lo..=hi {
            offsets.insert(k, total);
            total += tgt.dim(k) * src.dim(k);
        }
        if total == 0 {
            return ChainMap::zero_map(src, tgt);
        }
        // Constraints: d_tgt(k) f_k - f_{k+1} d_src(k) = 0 for each k.
        let mut rows = Vec::new();
        for k in lo..hi {
            let dt = tgt.d(k);
            let ds = src.d(k);
            for r in 0..tgt.dim(k + 1) {
                for c in 0..src.dim(k) {
                    let mut row = vec![Q::zero(); total];
                    for m in 0..tgt.dim(k) {
                        // coefficient of f_k[m][c]
                        row[offsets[&k] + m * src.dim(k) + c] =
                            row[offsets[&k] + m * src.dim(k) + c].clone() + dt.at(r, m).clone();
                    }
                    for m in 0..src.dim(k + 1) {
                        row[offsets[&(k + 1)] + r * src.dim(k + 1) + m] =
                            row[offsets[&(k + 1)] + r * src.dim(k + 1) + m].clone()
                                - ds.at(m, c).clone();
                    }
                    rows.push(row);
                }
            }
        }
        let solution = if rows.is_empty() {
            // No constraints: any assignment works.
            let mut v = vec![Q::zero(); total];
            for x in v.iter_mut() {
                *x = qi(self.int_in(-2, 2));
            }
            v
        } else {
            let sys = QMat::from_rows(rows).expect("constraint rows share a width");
            let basis = sys.kernel_basis();
            let mut v = vec![Q::zero(); total];
            for col in 0..basis.cols() {
                let c = qi(self.int_in(-2, 2));
                for (i, x) in v.iter_mut().enumerate() {
                    *x = x.clone() + c.clone() * basis.at(i, col).clone();
                }
            }
            v
        };
        ChainMap::from_fn(src, tgt, |k| {
            let mut m = QMat::zero(tgt.dim(k), src.dim(k));
            if let Some(&off) = offsets.get(&k) {
                for r in 0..tgt.dim(k) {
                    for c in 0..src.dim(k) {
                        m.set(r, c, solution[off + r * src.dim(k) + c].clone());
                    }
                }
            }
            m
        })
    }

    /// A random quasi-isomorphism out of `x`: an iso onto a conjugated
    /// copy, or the inclusion into the sum with a random acyclic complex,
    /// or both composed.
    pub fn quasi_iso_from(&mut self, x: &QComplex) -> ChainMap {
        let (_, iso, _) = self.conjugate(x);
        match self.usize_in(0, 2) {
            0 => iso,
            _ => {
                let lo = x.lo() - 1;
                let hi = x.hi() + 1;
                let pad = self.acyclic_complex(lo, hi, 2);
                let (_, maps) = iso.target().direct_sum(&pad);
                maps.inc_a
                    .compose(&iso)
                    .expect("inclusion after iso composes")
            }
        }
    }

    /// A random commuting diagram on `shape`: a direct sum of corner
    /// cells (a complex spread over an up-set or a down-set with identity
    /// edges), conjugated vertexwise.
    pub fn diagram(
        &mut self,
        shape: &CubicalOrder,
        lo: i64,
        hi: i64,
        max_dim: usize,
        cells: usize,
    ) -> CubicalDiagram {
        let members: Vec<CubeIndex> = shape.members().cloned().collect();
        struct Cell {
            complex: QComplex,
            present: Vec<bool>,
        }
        let mut built = Vec::new();
        for _ in 0..cells {
            let c = self.complex(lo, hi, max_dim);
            if c.is_zero() {
                continue;
            }
            let corner = &members[self.usize_in(0, members.len() - 1)];
            let upward = self.chance(0.5);
            let present: Vec<bool> = members
                .iter()
                .map(|a| if upward { corner.leq(a) } else { a.leq(corner) })
                .collect();
            built.push(Cell {
                complex: c,
                present,
            });
        }
        let mut vertices = BTreeMap::new();
        for (vi, alpha) in members.iter().enumerate() {
            let mut acc = QComplex::zero();
            for cell in &built {
                if cell.present[vi] {
                    acc = acc.direct_sum(&cell.complex).0;
                }
            }
            vertices.insert(alpha.clone(), acc);
        }
        let mut edges = BTreeMap::new();
        for (a, b, _) in shape.covering_edges() {
            let ai = members.iter().position(|m| m == &a).unwrap();
            let bi = members.iter().position(|m| m == &b).unwrap();
            let src = vertices[&a].clone();
            let tgt = vertices[&b].clone();
            let mut comps = BTreeMap::new();
            for n in src.lo().min(tgt.lo())..=src.hi().max(tgt.hi()) {
                let mut m = QMat::zero(tgt.dim(n), src.dim(n));
                let mut src_off = 0usize;
                let mut tgt_off = 0usize;
                for cell in &built {
                    let w = cell.complex.dim(n);
                    if cell.present[ai] && cell.present[bi] {
                        for t in 0..w {
                            m.set(tgt_off + t, src_off + t, qi(1));
                        }
                    }
                    if cell.present[ai] {
                        src_off += w;
                    }
                    if cell.present[bi] {
                        tgt_off += w;
                    }
                }
                comps.insert(n, m);
            }
            edges.insert(
                (a, b),
                ChainMap::new(src, tgt, comps).expect("cell edges commute"),
            );
        }
        let plain = CubicalDiagram::new(shape.clone(), vertices, edges)
            .expect("corner-cell diagram commutes");
        self.conjugate_diagram(&plain)
    }

    /// Conjugate every vertex by a fresh basis, rewriting the edges to
    /// match; the result is a diagram isomorphic to the input.
    pub fn conjugate_diagram(&mut self, d: &CubicalDiagram) -> CubicalDiagram {
        let shape = d.shape().clone();
        let mut vertices = BTreeMap::new();
        let mut fwd = BTreeMap::new();
        let mut back = BTreeMap::new();
        for alpha in shape.members() {
            let (y, f, b) = self.conjugate(d.vertex(alpha));
            vertices.insert(alpha.clone(), y);
            fwd.insert(alpha.clone(), f);
            back.insert(alpha.clone(), b);
        }
        let mut edges = BTreeMap::new();
        for (a, b, _) in shape.covering_edges() {
            let e = fwd[&b]
                .compose(
                    &d.edge(&a, &b)
                        .compose(&back[&a])
                        .expect("edge after inverse"),
                )
                .expect("iso after edge");
            edges.insert((a, b), e);
        }
        CubicalDiagram::new(shape, vertices, edges).expect("conjugation preserves commutation")
    }

    /// A morphism out of `d` whose vertex maps are all quasi-isomorphisms:
    /// either an iso onto a conjugated copy or the inclusion into the sum
    /// with a random acyclic diagram.
    pub fn qis_morphism(&mut self, d: &CubicalDiagram) -> DiagramMorphism {
        if self.chance(0.5) {
            let shape = d.shape().clone();
            let mut vertices = BTreeMap::new();
            let mut fwd = BTreeMap::new();
            let mut back = BTreeMap::new();
            for alpha in shape.members() {
                let (y, f, bk) = self.conjugate(d.vertex(alpha));
                vertices.insert(alpha.clone(), y);
                fwd.insert(alpha.clone(), f);
                back.insert(alpha.clone(), bk);
            }
            let mut edges = BTreeMap::new();
            for (a, b, _) in shape.covering_edges() {
                let e = fwd[&b]
                    .compose(&d.edge(&a, &b).compose(&back[&a]).expect("compose"))
                    .expect("compose");
                edges.insert((a, b), e);
            }
            let target =
                CubicalDiagram::new(shape, vertices, edges).expect("conjugated diagram commutes");
            DiagramMorphism::new(d.clone(), target, fwd).expect("conjugation isos commute")
        } else {
            // Pad with an acyclic diagram: every vertex map is the
            // left-summand inclusion, a quasi-isomorphism.
            let lo = d
                .shape()
                .members()
                .map(|a| d.vertex(a).lo())
                .min()
                .unwrap_or(0)
                - 1;
            let hi = d
                .shape()
                .members()
                .map(|a| d.vertex(a).hi())
                .max()
                .unwrap_or(0)
                + 1;
            let pad = self.acyclic_diagram(d.shape(), lo, hi, 2);
            let target = crate::diagram::product_diagram(d, &pad).expect("sum diagram commutes");
            let mut maps = BTreeMap::new();
            for alpha in d.shape().members() {
                let (_, sum_maps) = d.vertex(alpha).direct_sum(pad.vertex(alpha));
                maps.insert(alpha.clone(), sum_maps.inc_a);
            }
            DiagramMorphism::new(d.clone(), target, maps).expect("inclusions commute with edges")
        }
    }

    /// A commuting diagram all of whose vertices are acyclic.
    pub fn acyclic_diagram(
        &mut self,
        shape: &CubicalOrder,
        lo: i64,
        hi: i64,
        max_dim: usize,
    ) -> CubicalDiagram {
        let members: Vec<CubeIndex> = shape.members().cloned().collect();
        let mut vertices = BTreeMap::new();
        for alpha in &members {
            vertices.insert(alpha.clone(), self.acyclic_complex(lo, hi, max_dim));
        }
        // Zero edges always commute and preserve acyclicity.
        let mut edges = BTreeMap::new();
        for (a, b, _) in shape.covering_edges() {
            edges.insert(
                (a.clone(), b.clone()),
                ChainMap::zero_map(&vertices[&a], &vertices[&b]),
            );
        }
        CubicalDiagram::new(shape.clone(), vertices, edges).expect("zero edges commute")
    }

    /// The zero morphism from the all-zero diagram into `d`; its vertex
    /// maps are quasi-isomorphisms exactly when every vertex of `d` is
    /// acyclic — the standard negative control.
    pub fn zero_into(&mut self, d: &CubicalDiagram) -> DiagramMorphism {
        let shape = d.shape().clone();
        let mut vertices = BTreeMap::new();
        let mut maps = BTreeMap::new();
        for alpha in shape.members() {
            vertices.insert(alpha.clone(), QComplex::zero());
            maps.insert(
                alpha.clone(),
                ChainMap::zero_map(&QComplex::zero(), d.vertex(alpha)),
            );
        }
        let mut edges = BTreeMap::new();
        for (a, b, _) in shape.covering_edges() {
            edges.insert((a, b), ChainMap::identity(&QComplex::zero()));
        }
        let source = CubicalDiagram::new(shape, vertices, edges).expect("zero diagram commutes");
        DiagramMorphism::new(source, d.clone(), maps).expect("zero maps commute")
    }

    /// A random monotone strata lattice with synthetic atoms, registered
    /// under names derived from `tag`; the result always validates.
    pub fn snc_pair(
        &mut self,
        registry: &mut AtomRegistry,
        tag: &str,
        max_components: usize,
    ) -> SncPair {
        let r = self.usize_in(1, max_components);
        let dim_x = self.int_in(1, 4);
        let max_weight = (r as i64).min(dim_x) as usize;
        // One synthetic atom per dimension, shaped like projective space.
        let mut atom_for = BTreeMap::new();
        for m in 0..=dim_x {
            let name = if m == 0 {
                "pt".to_string()
            } else {
                format!("synt-{tag}-d{m}")
            };
            atom_for.insert(m, name);
        }
        for m in 1..=dim_x {
            let name = &atom_for[&m];
            if !registry.contains(name) {
                let entries: Vec<(i64, i64, i64, i64)> =
                    (0..=m).map(|i| (2 * i, i, i, 1)).collect();
                registry
                    .register(Atom::new(name.clone(), m, &entries).expect("synthetic atom valid"))
                    .expect("synthetic atom fresh");
            }
        }
        let mut strata: BTreeMap<Sigma, String> = BTreeMap::new();
        let mut by_weight: Vec<Vec<Sigma>> = vec![vec![Sigma::new()]];
        let singletons: Vec<Sigma> = (1..=r).map(|i| Sigma::from([i])).collect();
        for s in &singletons {
            strata.insert(s.clone(), atom_for[&(dim_x - 1)].clone());
        }
        by_weight.push(singletons);
        for w in 2..=max_weight {
            let mut level = Vec::new();
            for ix in crate::linalg::increasing_subsets(r, w) {
                let sigma: Sigma = ix.iter().map(|&i| i + 1).collect();
                let all_subsets_present = sigma.iter().all(|&drop| {
                    let mut sub = sigma.clone();
                    sub.remove(&drop);
                    by_weight[w - 1].contains(&sub)
                });
                if all_subsets_present && self.chance(0.6) {
                    strata.insert(sigma.clone(), atom_for[&(dim_x - w as i64)].clone());
                    level.push(sigma);
                }
            }
            by_weight.push(level);
        }
        let components = (1..=r).map(|i| format!("c{i}")).collect();
        let strata_no_empty: BTreeMap<Sigma, String> =
            strata.into_iter().filter(|(s, _)| !s.is_empty()).collect();
        SncPair::new(
            registry,
            format!("random-{tag}"),
            atom_for[&dim_x].clone(),
            components,
            strata_no_empty,
            format!("open-{tag}"),
        )
        .expect("sampled lattice is monotone and transverse")
    }

    /// A random matrix with entries in `[0, max_entry]`.
    pub fn nonneg_matrix(&mut self, rows: usize, cols: usize, max_entry: i64) -> Vec<Vec<i64>> {
        (0..rows)
            .map(|_| (0..cols).map(|_| self.int_in(0, max_entry)).collect())
            .collect()
    }
}
