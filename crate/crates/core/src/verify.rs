//! Named verification suites.
//!
//! Each suite bundles a family of executable checks — the descent axioms on
//! sampled diagrams, saturation of quasi-isomorphisms, contractile
//! splittings, blow-up identities, functoriality of the residue complex,
//! class-level descent, duality, and independence of compactification —
//! and reports one labelled pass/fail line per check with exact counts in
//! the detail string.  The suites are shared by the command-line runner and
//! the integration tests.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::complex::{is_quasi_iso, ChainMap, QComplex};
use crate::cubical::CubicalOrder;
use crate::diagram::{
    componentwise_qis_implies_total, iterate_simple, iterated_naturality_check, product_diagram,
    simple, simple_with_layout, tot, weight_bookkeeping_check, CubicalDiagram,
};
use crate::fixture::Bundle;
use crate::gysin::{
    additivity_check, cauchy_binet_count, compactification_independence, compose_morphisms,
    descent_class_check, duality_check, gysin_complex, induced_morphism, laplace_commutation,
    laplace_identity_count, manin_class_check, manin_implies_additivity, manin_sequence_check,
    PairMorphism,
};
use crate::linalg::{qi, QMat};
use crate::sample::Sampler;
use crate::splitting::{contractile_split, find_contraction};

/// One named check with its outcome and an exact-count detail string.
#[derive(Clone, Debug, Serialize)]
pub struct CheckLine {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

impl CheckLine {
    fn new(name: impl Into<String>, pass: bool, detail: impl Into<String>) -> CheckLine {
        CheckLine {
            name: name.into(),
            pass,
            detail: detail.into(),
        }
    }
}

/// The outcome of one suite: its name, the case budget it ran with, and
/// one line per check.
#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub cases: usize,
    pub lines: Vec<CheckLine>,
}

impl SuiteReport {
    pub fn pass(&self) -> bool {
        self.lines.iter().all(|l| l.pass)
    }
}

/// The standard mix of diagram shapes used by the random suites: cubes of
/// arity up to two, with and without the augmentation vertex.
fn shape_mix() -> Vec<CubicalOrder> {
    vec![
        CubicalOrder::standard_cube(0, true),
        CubicalOrder::standard_cube(1, false),
        CubicalOrder::standard_cube(1, true),
        CubicalOrder::standard_cube(2, false),
        CubicalOrder::standard_cube(2, true),
    ]
}

/// Build the block-permutation comparison from the simple of a vertexwise
/// sum to the sum of the simples, and report whether it is a genuine
/// isomorphism of complexes.  The chain-map constructor validates that the
/// permutation commutes with both differentials, which is the substance of
/// the product axiom.
fn product_comparison_is_iso(
    p: &CubicalDiagram,
    x: &CubicalDiagram,
    y: &CubicalDiagram,
) -> Result<bool, String> {
    let (sp, lay_p) = simple_with_layout(p);
    let (sx, lay_x) = simple_with_layout(x);
    let (sy, lay_y) = simple_with_layout(y);
    let (sum, _) = sx.direct_sum(&sy);
    if sp.is_zero() || sum.is_zero() {
        return Ok(sp.is_zero() && sum.is_zero());
    }
    let lo = sp.lo().min(sum.lo());
    let hi = sp.hi().max(sum.hi());
    let mut comps = BTreeMap::new();
    for k in lo..=hi {
        let mut m = QMat::zero(sum.dim(k), sp.dim(k));
        for (alpha, off, _) in lay_p.blocks.get(&k).map(|v| v.as_slice()).unwrap_or(&[]) {
            let inner = k - alpha.weight() as i64;
            let wx = x.vertex(alpha).dim(inner);
            let wy = y.vertex(alpha).dim(inner);
            if wx > 0 {
                let (offx, w) = lay_x
                    .find(k, alpha)
                    .ok_or("left block missing from layout")?;
                if w != wx {
                    return Err("left block width mismatch".into());
                }
                for j in 0..wx {
                    m.set(offx + j, off + j, qi(1));
                }
            }
            if wy > 0 {
                let (offy, w) = lay_y
                    .find(k, alpha)
                    .ok_or("right block missing from layout")?;
                if w != wy {
                    return Err("right block width mismatch".into());
                }
                for j in 0..wy {
                    m.set(sx.dim(k) + offy + j, off + wx + j, qi(1));
                }
            }
        }
        comps.insert(k, m);
    }
    let cmp = ChainMap::new(sp.clone(), sum.clone(), comps).map_err(|e| e.to_string())?;
    let same_dims = (lo..=hi).all(|k| sp.dim(k) == sum.dim(k));
    let full_rank = (lo..=hi).all(|k| cmp.comp(k).rank() == sp.dim(k));
    Ok(same_dims && full_rank)
}

/// Run the five descent axioms (final object, products, cone detection,
/// componentwise quasi-isomorphisms, iterated simples with naturality) on
/// `cases` sampled diagrams, plus the weight bookkeeping of every diagram
/// sampled along the way.
pub fn axioms_suite(seed: u64, cases: usize) -> SuiteReport {
    let mut s = Sampler::new(seed);
    let shapes = shape_mix();
    let mut s1 = 0usize;
    let mut s2 = 0usize;
    let (mut s3, mut s3_known_qis, mut s3_not_qis) = (0usize, 0usize, 0usize);
    let (mut s4, mut s4_premise, mut s4_negative) = (0usize, 0usize, 0usize);
    let (mut s5, mut s5_nat) = (0usize, 0usize);
    let mut weights = 0usize;
    let mut failures: Vec<String> = Vec::new();

    for case in 0..cases {
        let shape = &shapes[case % shapes.len()];

        // (S1) the simple of `X -> 0` returns X on the nose.
        let x = s.complex(-2, 2, 3);
        let to_zero = ChainMap::zero_map(&x, &QComplex::zero());
        if simple(&tot(&to_zero)) == x {
            s1 += 1;
        } else {
            failures.push(format!(
                "case {case}: simple of the terminal map altered the complex"
            ));
        }

        // (S2) the simple of a vertexwise sum splits as the sum of simples
        // through an explicit block permutation.
        let dx = s.diagram(shape, -2, 1, 2, 2);
        let dy = s.diagram(shape, -2, 1, 2, 2);
        match product_diagram(&dx, &dy) {
            Ok(p) => {
                if weight_bookkeeping_check(&p) {
                    weights += 1;
                } else {
                    failures.push(format!("case {case}: weight bookkeeping failed on a sum"));
                }
                match product_comparison_is_iso(&p, &dx, &dy) {
                    Ok(true) => s2 += 1,
                    Ok(false) => {
                        failures.push(format!("case {case}: product comparison not an iso"))
                    }
                    Err(e) => failures.push(format!("case {case}: product comparison: {e}")),
                }
            }
            Err(e) => failures.push(format!("case {case}: vertexwise sum rejected: {e}")),
        }

        // (S3) a map is a quasi-isomorphism exactly when the simple of its
        // two-vertex diagram is acyclic.  Odd cases use a map that is a
        // quasi-isomorphism by construction, even cases a random chain map.
        let src = s.complex(-2, 1, 3);
        let f = if case % 2 == 1 {
            s.quasi_iso_from(&src)
        } else {
            let tgt = s.complex(-2, 1, 3);
            s.chain_map(&src, &tgt)
        };
        let qis = is_quasi_iso(&f);
        let total_acyclic = simple(&tot(&f)).is_acyclic();
        if qis == total_acyclic {
            s3 += 1;
            if case % 2 == 1 {
                if qis {
                    s3_known_qis += 1;
                } else {
                    failures.push(format!(
                        "case {case}: constructed quasi-isomorphism rejected"
                    ));
                }
            } else if !qis {
                s3_not_qis += 1;
            }
        } else {
            failures.push(format!(
                "case {case}: cone criterion disagrees (qis={qis}, total acyclic={total_acyclic})"
            ));
        }

        // (S4) componentwise quasi-isomorphisms induce one on simples; a
        // zero morphism out of the empty diagram is the negative control.
        let d = s.diagram(shape, -2, 1, 2, 2);
        let m = if case % 4 == 3 {
            s.zero_into(&d)
        } else {
            s.qis_morphism(&d)
        };
        let verdict = componentwise_qis_implies_total(&m);
        if verdict.all_vertices_qis {
            s4_premise += 1;
            if verdict.total_qis {
                s4 += 1;
            } else {
                failures.push(format!(
                    "case {case}: componentwise qis did not pass to simples"
                ));
            }
        } else {
            s4 += 1;
            if !verdict.total_qis {
                s4_negative += 1;
            }
        }

        // (S5) the two iterated simples agree with the direct one.
        let arities = [(0usize, 0usize), (0, 1), (1, 0), (1, 1)];
        let (la, ra) = arities[case % arities.len()];
        let left = CubicalOrder::standard_cube(la, case % 2 == 0);
        let right = CubicalOrder::standard_cube(ra, case % 3 == 0);
        let (pshape, split) = left.product(&right);
        let pd = s.diagram(&pshape, -1, 1, 2, 2).with_split(split);
        if weight_bookkeeping_check(&pd) {
            weights += 1;
        } else {
            failures.push(format!(
                "case {case}: weight bookkeeping failed on a product shape"
            ));
        }
        match iterate_simple(&pd) {
            Ok(its) => {
                let on_the_nose =
                    its.direct == its.left_of_right && its.cmp_left_of_right.is_identity();
                let both_iso =
                    is_quasi_iso(&its.cmp_right_of_left) && is_quasi_iso(&its.cmp_left_of_right);
                if on_the_nose && both_iso {
                    s5 += 1;
                } else {
                    failures.push(format!(
                        "case {case}: iterated simples disagree (nose={on_the_nose}, iso={both_iso})"
                    ));
                }
            }
            Err(e) => failures.push(format!("case {case}: iterated simple failed: {e}")),
        }
        if case % 5 == 0 {
            let pm = s.qis_morphism(&pd);
            match iterated_naturality_check(&pm) {
                Ok(true) => s5_nat += 1,
                Ok(false) => failures.push(format!("case {case}: iterated comparison not natural")),
                Err(e) => failures.push(format!("case {case}: naturality check failed: {e}")),
            }
        }
    }

    let nat_budget = cases.div_ceil(5);
    let lines = vec![
        CheckLine::new(
            "S1-final-object",
            s1 == cases,
            format!("{s1}/{cases} on the nose"),
        ),
        CheckLine::new(
            "S2-products-split",
            s2 == cases,
            format!("{s2}/{cases} block isos"),
        ),
        CheckLine::new(
            "S3-cone-detects-qis",
            s3 == cases && s3_known_qis > 0 && s3_not_qis > 0,
            format!("{s3}/{cases} agree; {s3_known_qis} constructed qis, {s3_not_qis} non-qis"),
        ),
        CheckLine::new(
            "S4-componentwise-qis",
            s4 == cases && s4_premise > 0 && s4_negative > 0,
            format!("{s4}/{cases} ok; premise held {s4_premise}, negatives {s4_negative}"),
        ),
        CheckLine::new(
            "S5-iterated-simples",
            s5 == cases,
            format!("{s5}/{cases} agree"),
        ),
        CheckLine::new(
            "S5-naturality",
            s5_nat == nat_budget,
            format!("{s5_nat}/{nat_budget} natural"),
        ),
        CheckLine::new(
            "weight-bookkeeping",
            weights == 2 * cases,
            format!("{weights}/{} filtrations exact", 2 * cases),
        ),
    ];
    let mut lines = lines;
    if !failures.is_empty() {
        let shown = failures
            .iter()
            .take(3)
            .cloned()
            .collect::<Vec<_>>()
            .join("; ");
        lines.push(CheckLine::new(
            "failures",
            false,
            format!("{} failure(s): {shown}", failures.len()),
        ));
    }
    SuiteReport {
        suite: "axioms".into(),
        cases,
        lines,
    }
}

/// Saturation of quasi-isomorphisms: the two-of-three rule on composable
/// pairs and the four-object rule (if `v∘u` and `w∘v` are
/// quasi-isomorphisms, so are `u`, `v`, `w`, and `w∘v∘u`), with zero-map
/// negative controls.
pub fn saturation_suite(seed: u64, cases: usize) -> SuiteReport {
    let mut s = Sampler::new(seed);
    let (mut triples, mut triple_checks, mut triple_negatives) = (0usize, 0usize, 0usize);
    let (mut quads, mut quad_premises, mut quad_negatives) = (0usize, 0usize, 0usize);
    let mut failures: Vec<String> = Vec::new();

    for case in 0..cases {
        // Composable pair with every factor a quasi-isomorphism by
        // construction: all three two-of-three premises hold, so all three
        // conclusions are exercised.
        let a = s.complex(-2, 1, 3);
        let f = s.quasi_iso_from(&a);
        let g = s.quasi_iso_from(f.target());
        let gf = g.compose(&f).expect("composable by construction");
        let (fq, gq, gfq) = (is_quasi_iso(&f), is_quasi_iso(&g), is_quasi_iso(&gf));
        if fq && gq && gfq {
            triples += 1;
            triple_checks += 3;
        } else {
            failures.push(format!(
                "case {case}: constructed pair not saturated ({fq},{gq},{gfq})"
            ));
        }
        // Contrapositive: with homology present, the zero endomorphism is
        // not a quasi-isomorphism and neither is its composite with one.
        if case % 3 == 0 && !a.is_acyclic() {
            let z = ChainMap::zero_map(&a, &a);
            let fz = f.compose(&z).expect("composable");
            if !is_quasi_iso(&z) && !is_quasi_iso(&fz) {
                triple_negatives += 1;
            } else {
                failures.push(format!(
                    "case {case}: zero map passed as a quasi-isomorphism"
                ));
            }
        }

        // Four-object instance: premises checked computationally, then all
        // four conclusions.
        let u = s.quasi_iso_from(&a);
        let v = s.quasi_iso_from(u.target());
        let w = s.quasi_iso_from(v.target());
        let vu = v.compose(&u).expect("composable");
        let wv = w.compose(&v).expect("composable");
        let wvu = w.compose(&vu).expect("composable");
        if is_quasi_iso(&vu) && is_quasi_iso(&wv) {
            quad_premises += 1;
            if is_quasi_iso(&u) && is_quasi_iso(&v) && is_quasi_iso(&w) && is_quasi_iso(&wvu) {
                quads += 1;
            } else {
                failures.push(format!("case {case}: four-object conclusion failed"));
            }
        } else {
            failures.push(format!(
                "case {case}: constructed premises not quasi-isomorphisms"
            ));
        }
        // Negative: a zero middle map breaks the premise whenever homology
        // is present, so the rule is not vacuous.
        if case % 3 == 1 && !a.is_acyclic() {
            let z = ChainMap::zero_map(u.target(), v.target());
            let zu = z.compose(&u).expect("composable");
            if !is_quasi_iso(&zu) {
                quad_negatives += 1;
            } else {
                failures.push(format!(
                    "case {case}: zero composite passed as a quasi-isomorphism"
                ));
            }
        }
    }

    let mut lines = vec![
        CheckLine::new(
            "two-of-three",
            triples == cases && triple_negatives > 0,
            format!(
                "{triples}/{cases} pairs, {triple_checks} implications, {triple_negatives} negatives"
            ),
        ),
        CheckLine::new(
            "four-object",
            quads == cases && quad_premises == cases && quad_negatives > 0,
            format!("{quads}/{cases} chains, premises {quad_premises}, negatives {quad_negatives}"),
        ),
    ];
    if !failures.is_empty() {
        let shown = failures
            .iter()
            .take(3)
            .cloned()
            .collect::<Vec<_>>()
            .join("; ");
        lines.push(CheckLine::new(
            "failures",
            false,
            format!("{} failure(s): {shown}", failures.len()),
        ));
    }
    SuiteReport {
        suite: "saturation".into(),
        cases,
        lines,
    }
}

/// Contractile splittings of acyclic complexes: a contraction is found,
/// the induced splitting maps are mutually inverse isomorphisms with the
/// cone model, and the Euler class vanishes.
pub fn splitting_suite(seed: u64, cases: usize) -> SuiteReport {
    let mut s = Sampler::new(seed);
    let (mut found, mut inverse, mut euler) = (0usize, 0usize, 0usize);
    let mut failures: Vec<String> = Vec::new();

    for case in 0..cases {
        let c = s.acyclic_complex(-2, 2, 3);
        let Some(h) = find_contraction(&c) else {
            failures.push(format!(
                "case {case}: no contraction found for an acyclic complex"
            ));
            continue;
        };
        if !h.is_contraction_of(&c) {
            failures.push(format!(
                "case {case}: returned contraction fails its own identity"
            ));
            continue;
        }
        found += 1;
        match contractile_split(&c, &h) {
            Ok(sp) => {
                let there = sp
                    .into
                    .compose(&sp.back)
                    .map(|m| m.is_identity())
                    .unwrap_or(false);
                let back = sp
                    .back
                    .compose(&sp.into)
                    .map(|m| m.is_identity())
                    .unwrap_or(false);
                if there && back {
                    inverse += 1;
                } else {
                    failures.push(format!(
                        "case {case}: splitting maps are not mutually inverse"
                    ));
                }
            }
            Err(e) => failures.push(format!("case {case}: splitting failed: {e}")),
        }
        if c.euler_class() == 0 {
            euler += 1;
        } else {
            failures.push(format!(
                "case {case}: acyclic complex with nonzero Euler class"
            ));
        }
    }

    let mut lines = vec![
        CheckLine::new(
            "contraction-exists",
            found == cases,
            format!("{found}/{cases} found"),
        ),
        CheckLine::new(
            "split-inverse-pair",
            inverse == cases,
            format!("{inverse}/{cases} mutually inverse"),
        ),
        CheckLine::new(
            "euler-vanishes",
            euler == cases,
            format!("{euler}/{cases} zero"),
        ),
    ];
    if !failures.is_empty() {
        let shown = failures
            .iter()
            .take(3)
            .cloned()
            .collect::<Vec<_>>()
            .join("; ");
        lines.push(CheckLine::new(
            "failures",
            false,
            format!("{} failure(s): {shown}", failures.len()),
        ));
    }
    SuiteReport {
        suite: "splitting".into(),
        cases,
        lines,
    }
}

/// Blow-up identities: the decomposition classes of every bundled blow-up
/// hold under the relations and under the Hodge realization, the
/// additivity consequence holds symbolically for every codimension up to
/// six, and every bundled realized square is exact and split (or fails,
/// where the fixture says it must) with both computation routes agreeing.
pub fn manin_suite(bundle: &Bundle) -> SuiteReport {
    let mut lines = Vec::new();
    for (name, b) in &bundle.blowups {
        match manin_class_check(&bundle.registry, &bundle.relations, b) {
            Ok(ok) => lines.push(CheckLine::new(
                format!("blowup:{name}"),
                ok,
                "decomposition classes hold under relations and realization",
            )),
            Err(e) => lines.push(CheckLine::new(
                format!("blowup:{name}"),
                false,
                e.to_string(),
            )),
        }
    }
    lines.push(CheckLine::new(
        "additivity-symbolic",
        manin_implies_additivity(6),
        "descent additivity follows formally for codimension up to 6",
    ));
    for (name, sq) in &bundle.squares {
        let expect = bundle
            .square_expectations
            .get(name)
            .copied()
            .unwrap_or(true);
        match manin_sequence_check(&bundle.registry, sq) {
            Ok(rep) => {
                let pass = if expect {
                    rep.exact_and_split() && rep.routes_agree
                } else {
                    !rep.exact() && rep.routes_agree
                };
                let detail = if rep.exact() {
                    format!(
                        "exact in every bidegree; split={}; routes agree={}",
                        rep.split, rep.routes_agree
                    )
                } else {
                    format!(
                        "failing bidegrees {:?}; routes agree={}",
                        rep.failures, rep.routes_agree
                    )
                };
                lines.push(CheckLine::new(format!("sequence:{name}"), pass, detail));
            }
            Err(e) => lines.push(CheckLine::new(
                format!("sequence:{name}"),
                false,
                e.to_string(),
            )),
        }
    }
    SuiteReport {
        suite: "manin".into(),
        cases: bundle.blowups.len() + bundle.squares.len(),
        lines,
    }
}

/// Functoriality of the residue complex: the boundary squares to zero on
/// bundled and random strata lattices, induced maps of bundled morphisms
/// satisfy the minor-expansion commutation law, identity morphisms compose
/// neutrally, and a batch of random matrices certifies the minor-expansion
/// and product-minor identities at least `min_identities` times.
pub fn functoriality_suite(bundle: &Bundle, seed: u64, min_identities: usize) -> SuiteReport {
    let mut s = Sampler::new(seed);
    let mut lines = Vec::new();

    for (name, pair) in &bundle.pairs {
        match gysin_complex(pair) {
            Ok(g) => {
                let euler_ok = g.euler() == pair.chi_open();
                lines.push(CheckLine::new(
                    format!("gamma-squared:{name}"),
                    euler_ok,
                    if euler_ok {
                        "boundary squares to zero; Euler class matches the open class".to_string()
                    } else {
                        "Euler class differs from the open class".to_string()
                    },
                ));
            }
            Err(e) => lines.push(CheckLine::new(
                format!("gamma-squared:{name}"),
                false,
                e.to_string(),
            )),
        }
    }

    let mut registry = bundle.registry.clone();
    let mut random_ok = 0usize;
    let random_total = 40usize;
    let mut random_err = String::new();
    for i in 0..random_total {
        let pair = s.snc_pair(&mut registry, &format!("fx{i}"), 5);
        match gysin_complex(&pair) {
            Ok(g) if g.euler() == pair.chi_open() => random_ok += 1,
            Ok(_) => random_err = format!("lattice {i}: Euler class mismatch"),
            Err(e) => random_err = format!("lattice {i}: {e}"),
        }
    }
    lines.push(CheckLine::new(
        "gamma-squared-random",
        random_ok == random_total,
        if random_err.is_empty() {
            format!("{random_ok}/{random_total} random lattices (components up to 5)")
        } else {
            random_err
        },
    ));

    for (name, f) in &bundle.morphisms {
        let commuted = laplace_commutation(f);
        let induced = induced_morphism(f);
        match (commuted, induced) {
            (Ok(n), Ok(_)) => lines.push(CheckLine::new(
                format!("chain-map:{name}"),
                true,
                format!("{n} commutation identities; induced map built"),
            )),
            (Err(e), _) | (_, Err(e)) => lines.push(CheckLine::new(
                format!("chain-map:{name}"),
                false,
                e.to_string(),
            )),
        }
    }

    for (name, pair) in &bundle.pairs {
        let id = PairMorphism::identity(pair);
        match compose_morphisms(&id, &id, &id) {
            Ok(rep) => lines.push(CheckLine::new(
                format!("compose-identity:{name}"),
                rep.gysin_maps_equal,
                format!(
                    "{} product-minor identities; induced maps compose",
                    rep.minor_identities
                ),
            )),
            Err(e) => lines.push(CheckLine::new(
                format!("compose-identity:{name}"),
                false,
                e.to_string(),
            )),
        }
    }
    for (name, f) in &bundle.morphisms {
        let post = PairMorphism::identity(f.target());
        let pre = PairMorphism::identity(f.source());
        let left = compose_morphisms(f, &post, f);
        let right = compose_morphisms(f, f, &pre);
        let pass = matches!(&left, Ok(r) if r.gysin_maps_equal)
            && matches!(&right, Ok(r) if r.gysin_maps_equal);
        let detail = match (&left, &right) {
            (Ok(a), Ok(b)) => {
                format!(
                    "{} identities against the two identity morphisms",
                    a.minor_identities + b.minor_identities
                )
            }
            (Err(e), _) | (_, Err(e)) => e.to_string(),
        };
        lines.push(CheckLine::new(
            format!("compose-neutral:{name}"),
            pass,
            detail,
        ));
    }

    let mut identities = 0usize;
    let mut minor_err = String::new();
    while identities < min_identities && minor_err.is_empty() {
        let rows = s.usize_in(1, 5);
        let mid = s.usize_in(1, 5);
        let cols = s.usize_in(1, 5);
        let m = s.nonneg_matrix(rows, cols, 4);
        match laplace_identity_count(&m) {
            Ok(n) => identities += n,
            Err((sigma, tau, _)) => {
                minor_err = format!("minor expansion failed at ({sigma}|{tau})")
            }
        }
        let a = s.nonneg_matrix(rows, mid, 4);
        let b = s.nonneg_matrix(mid, cols, 4);
        match cauchy_binet_count(&a, &b) {
            Ok(n) => identities += n,
            Err((sigma, tau)) => minor_err = format!("product minors failed at ({sigma}|{tau})"),
        }
    }
    lines.push(CheckLine::new(
        "minor-identities",
        minor_err.is_empty() && identities >= min_identities,
        if minor_err.is_empty() {
            format!("{identities} expansion and product-minor identities verified")
        } else {
            minor_err
        },
    ));

    SuiteReport {
        suite: "functoriality".into(),
        cases: bundle.pairs.len() + bundle.morphisms.len() + random_total,
        lines,
    }
}

/// Class-level descent: the alternating sum of corner classes of every
/// bundled square reduces to zero.
pub fn descent_suite(bundle: &Bundle) -> SuiteReport {
    let mut lines = Vec::new();
    for (name, sq) in &bundle.class_squares {
        match descent_class_check(&bundle.registry, &bundle.relations, &bundle.spaces, sq) {
            Ok(ok) => lines.push(CheckLine::new(
                format!("class-square:{name}"),
                ok,
                "alternating corner sum reduces to zero",
            )),
            Err(e) => lines.push(CheckLine::new(
                format!("class-square:{name}"),
                false,
                e.to_string(),
            )),
        }
    }
    SuiteReport {
        suite: "descent".into(),
        cases: bundle.class_squares.len(),
        lines,
    }
}

/// Duality and additivity of every bundled strata pair: the open classes
/// are exchanged by duality and the closed class decomposes over the
/// strata.
pub fn duality_suite(bundle: &Bundle) -> SuiteReport {
    let mut lines = Vec::new();
    for (name, pair) in &bundle.pairs {
        match duality_check(&bundle.registry, pair) {
            Ok(ok) => lines.push(CheckLine::new(
                format!("duality:{name}"),
                ok,
                "dual of the open class is the compact open class",
            )),
            Err(e) => lines.push(CheckLine::new(
                format!("duality:{name}"),
                false,
                e.to_string(),
            )),
        }
        lines.push(CheckLine::new(
            format!("additivity:{name}"),
            additivity_check(pair),
            "ambient class decomposes over the strata",
        ));
    }
    SuiteReport {
        suite: "duality".into(),
        cases: bundle.pairs.len(),
        lines,
    }
}

/// Independence of compactification: for every bundled comparison, the two
/// pairs share an open part and their open classes agree (or are reported
/// unequal, where the fixture expects it).
pub fn independence_suite(bundle: &Bundle) -> SuiteReport {
    let mut lines = Vec::new();
    for (name, spec) in &bundle.independence {
        let (Some(a), Some(b)) = (
            bundle.pairs.get(&spec.pairs[0]),
            bundle.pairs.get(&spec.pairs[1]),
        ) else {
            lines.push(CheckLine::new(
                format!("compare:{name}"),
                false,
                "comparison names a pair that is not in the fixture",
            ));
            continue;
        };
        match compactification_independence(&bundle.relations, a, b) {
            Ok(rep) => {
                let pass = rep.equal == spec.expect_equal;
                lines.push(CheckLine::new(
                    format!("compare:{name}"),
                    pass,
                    format!(
                        "open part {}: chi {} vs {}, compact chi {} vs {} ({})",
                        rep.open_part,
                        rep.chi_open_a,
                        rep.chi_open_b,
                        rep.chi_c_open_a,
                        rep.chi_c_open_b,
                        if rep.equal { "equal" } else { "unequal" },
                    ),
                ));
            }
            Err(e) => lines.push(CheckLine::new(
                format!("compare:{name}"),
                false,
                e.to_string(),
            )),
        }
    }
    SuiteReport {
        suite: "independence".into(),
        cases: bundle.independence.len(),
        lines,
    }
}
