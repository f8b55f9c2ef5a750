//! The bundled fixture files load, resolve, stay in canonical form, and
//! pass every fixture-driven verification suite.

use std::fs;
use std::path::PathBuf;

use cdesc_core::fixture::{canonical_json, load_fixture, resolve, Bundle};
use cdesc_core::verify::{
    descent_suite, duality_suite, functoriality_suite, independence_suite, manin_suite,
};

fn fixture_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(name)
}

/// Parse a bundled fixture and assert it is serialized canonically.  Set
/// `REGEN_FIXTURES=1` to rewrite the file in place instead of failing
/// (snapshot maintenance, not part of a normal run).
fn load_canonical(name: &str) -> Bundle {
    let path = fixture_path(name);
    let text = fs::read_to_string(&path).expect("bundled fixture is readable");
    let fixture = load_fixture(&path).unwrap_or_else(|e| panic!("{name}: {e}"));
    let canon = canonical_json(&fixture);
    if text != canon {
        if std::env::var_os("REGEN_FIXTURES").is_some() {
            fs::write(&path, &canon).expect("rewrite fixture");
        } else {
            panic!("{name} is not in canonical form; run with REGEN_FIXTURES=1 to rewrite");
        }
    }
    resolve(&fixture).unwrap_or_else(|errs| {
        let msgs: Vec<String> = errs.iter().map(|e| e.to_string()).collect();
        panic!("{name} failed to resolve:\n{}", msgs.join("\n"))
    })
}

#[test]
fn projective_space_fixture_loads_and_telescopes() {
    let b = load_canonical("pn.fixture");
    for n in 1..=6 {
        assert!(b.registry.contains(&format!("P{n}")));
        assert!(b.relations.has_rule(&format!("P{n}")));
    }
    // The cell decomposition of each projective space telescopes to the
    // ambient class before reduction and to the Tate sum after.
    for n in 1..=6i64 {
        let cells = b
            .spaces
            .class_raw(&b.registry, &format!("p{n}-cells"))
            .expect("cell space resolves");
        let mut expect_raw = cdesc_core::motive::MotiveClass::zero();
        expect_raw.add_term(&format!("P{n}"), 0, 1);
        assert_eq!(cells, expect_raw, "P{n} cells do not telescope");
        let mut tate_sum = cdesc_core::motive::MotiveClass::zero();
        for i in 0..=n {
            tate_sum.add_term("pt", i, 1);
        }
        assert_eq!(
            b.relations.reduce(&cells),
            tate_sum,
            "P{n} reduction is not the Tate sum"
        );
    }
}

#[test]
fn standard_fixture_loads_and_passes_all_suites() {
    let b = load_canonical("standard.fixture");
    let manin = manin_suite(&b);
    assert!(manin.pass(), "manin: {:?}", manin.lines);
    let fun = functoriality_suite(&b, 17, 500);
    assert!(fun.pass(), "functoriality: {:?}", fun.lines);
    let descent = descent_suite(&b);
    assert!(descent.pass(), "descent: {:?}", descent.lines);
    let duality = duality_suite(&b);
    assert!(duality.pass(), "duality: {:?}", duality.lines);
    let indep = independence_suite(&b);
    assert!(indep.pass(), "independence: {:?}", indep.lines);
}

#[test]
fn standard_fixture_contents_are_complete() {
    let b = load_canonical("standard.fixture");
    for pair in [
        "p1-pt",
        "p2-one-line",
        "p2-two-lines",
        "p1xp1-two-rulings",
        "blp2-two",
    ] {
        assert!(b.pairs.contains_key(pair), "missing pair {pair}");
    }
    assert!(b.squares.contains_key("p2-blowup"));
    assert_eq!(b.square_expectations.get("p2-blowup-broken"), Some(&false));
    for cs in ["p2-blowup", "p3-line-blowup", "cone-conic", "identity"] {
        assert!(
            b.class_squares.contains_key(cs),
            "missing class square {cs}"
        );
    }
    for bl in ["p2-point", "p3-line", "divisor"] {
        assert!(b.blowups.contains_key(bl), "missing blow-up {bl}");
    }
    assert_eq!(b.independence.len(), 3);
    assert!(!b.complexes.is_empty() && !b.diagrams.is_empty());
}
