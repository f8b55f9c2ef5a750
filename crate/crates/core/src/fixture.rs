//! The fixture document: one JSON file bundling atoms, relations,
//! complexes, diagrams, pairs, morphisms, realized squares, class squares,
//! blow-ups, space presentations, and independence declarations.
//!
//! Loading parses the document, resolves every cross-reference, and runs
//! every construction-time invariant, collecting all failures as located
//! issues instead of stopping at the first. Serialization is canonical:
//! maps are ordered, rationals print as exact `p/q` strings, and
//! `save(load(f))` is a fixed point after one pass.

use crate::complex::{ChainMap, QComplex};
use crate::cubical::{CubeIndex, CubicalOrder};
use crate::diagram::CubicalDiagram;
use crate::gysin::{BlowupFixture, ClassSquare, PairMorphism, RealizedSquare, Sigma, SncPair};
use crate::linalg::{parse_q, show_q, QMat};
use crate::motive::{parse_class, Atom, AtomRegistry, Presentation, RelationSet, SpaceTable};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;

/// One located validation failure.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LoadIssue {
    pub location: String,
    pub message: String,
}

impl fmt::Display for LoadIssue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.location, self.message)
    }
}

fn issue(location: impl Into<String>, message: impl fmt::Display) -> LoadIssue {
    LoadIssue {
        location: location.into(),
        message: message.to_string(),
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Fixture {
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub atoms: Vec<AtomSpec>,
    /// Rewrite rules, each "[atom] -> class-expression".
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub relations: Vec<String>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub spaces: BTreeMap<String, SpaceSpec>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub complexes: BTreeMap<String, ComplexSpec>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub diagrams: BTreeMap<String, DiagramSpec>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub pairs: BTreeMap<String, PairSpec>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub morphisms: BTreeMap<String, MorphismSpec>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub squares: BTreeMap<String, SquareSpec>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub class_squares: BTreeMap<String, ClassSquareSpec>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub blowups: BTreeMap<String, BlowupSpec>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub independence: BTreeMap<String, IndependenceSpec>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AtomSpec {
    pub name: String,
    pub dim: i64,
    /// Rows `[k, p, q, h]` of the Hodge table.
    pub hodge: Vec<[i64; 4]>,
}

/// A space presentation: an atom, a reference to another space, a
/// difference, a finite disjoint union, or a Tate twist.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SpaceSpec {
    Atom(String),
    Ref(String),
    Diff(Box<SpaceSpec>, Box<SpaceSpec>),
    Union(Vec<SpaceSpec>),
    Twist(Box<SpaceSpec>, i64),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComplexSpec {
    pub lo: i64,
    pub dims: Vec<usize>,
    /// One matrix per consecutive degree, entries as exact "p/q" strings.
    pub diffs: Vec<Vec<Vec<String>>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DiagramSpec {
    /// The members of the cubical order as bit-strings.
    pub shape: Vec<String>,
    /// Vertex index (bit-string) to complex name.
    pub vertices: BTreeMap<String, String>,
    /// Edge key "α->β" to a map of degree (as string) to matrix.
    pub edges: BTreeMap<String, BTreeMap<String, Vec<Vec<String>>>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PairSpec {
    pub ambient: String,
    pub components: Vec<String>,
    /// Stratum key "1,2" to atom name; only nonempty strata appear.
    pub strata: BTreeMap<String, String>,
    pub open_part: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MorphismSpec {
    pub source: String,
    pub target: String,
    #[serde(rename = "M")]
    pub m: Vec<Vec<i64>>,
    /// Key "σ|τ" (e.g. "1,2|1,3") to the name of the realizing map.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub strata_maps: BTreeMap<String, String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SquareSpec {
    pub x: String,
    pub y: String,
    pub xt: String,
    pub yt: String,
    /// Matrix blocks keyed "k,p,q"; omitted blocks are zero.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub i: BTreeMap<String, Vec<Vec<String>>>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub f: BTreeMap<String, Vec<Vec<String>>>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub g: BTreeMap<String, Vec<Vec<String>>>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub j: BTreeMap<String, Vec<Vec<String>>>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub excess: BTreeMap<String, Vec<Vec<String>>>,
    #[serde(default = "default_true")]
    pub expect_exact: bool,
}

fn default_true() -> bool {
    true
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClassSquareSpec {
    pub x: String,
    pub y: String,
    pub xt: String,
    pub yt: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BlowupSpec {
    pub x: String,
    pub y: String,
    pub xt: String,
    pub yt: String,
    pub r: i64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IndependenceSpec {
    pub pairs: [String; 2],
    pub expect_equal: bool,
}

/// Everything a fixture resolves to, fully validated.
#[derive(Debug)]
pub struct Bundle {
    pub registry: AtomRegistry,
    pub relations: RelationSet,
    pub spaces: SpaceTable,
    pub complexes: BTreeMap<String, QComplex>,
    pub diagrams: BTreeMap<String, CubicalDiagram>,
    pub pairs: BTreeMap<String, SncPair>,
    pub morphisms: BTreeMap<String, PairMorphism>,
    pub squares: BTreeMap<String, RealizedSquare>,
    pub square_expectations: BTreeMap<String, bool>,
    pub class_squares: BTreeMap<String, ClassSquare>,
    pub blowups: BTreeMap<String, BlowupFixture>,
    pub independence: BTreeMap<String, IndependenceSpec>,
}

/// Canonical serialization of a fixture document.
pub fn canonical_json(f: &Fixture) -> String {
    let mut s = serde_json::to_string_pretty(f).expect("fixture serializes");
    s.push('\n');
    s
}

pub fn parse_fixture(text: &str) -> Result<Fixture, LoadIssue> {
    serde_json::from_str(text).map_err(|e| issue("document", e))
}

pub fn load_fixture(path: &Path) -> Result<Fixture, LoadIssue> {
    let text = std::fs::read_to_string(path).map_err(|e| issue(path.display().to_string(), e))?;
    parse_fixture(&text)
}

/// Load and fully resolve a fixture file.
pub fn load_bundle(path: &Path) -> Result<Bundle, Vec<LoadIssue>> {
    let fixture = load_fixture(path).map_err(|e| vec![e])?;
    resolve(&fixture)
}

fn parse_sigma(s: &str) -> Result<Sigma, String> {
    let mut out = Sigma::new();
    for part in s.split(',') {
        let part = part.trim();
        if part.is_empty() {
            return Err(format!("empty component index in '{s}'"));
        }
        let i: usize = part
            .parse()
            .map_err(|_| format!("bad component index '{part}'"))?;
        if !out.insert(i) {
            return Err(format!("repeated component index {i}"));
        }
    }
    if out.is_empty() {
        return Err("stratum key must name at least one component".into());
    }
    Ok(out)
}

/// Canonical stratum key for a set of component indices.
pub fn sigma_key(s: &Sigma) -> String {
    s.iter()
        .map(|i| i.to_string())
        .collect::<Vec<_>>()
        .join(",")
}

fn parse_kpq(s: &str) -> Result<(i64, i64, i64), String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    if parts.len() != 3 {
        return Err(format!("block key '{s}' must be 'k,p,q'"));
    }
    let k = parts[0]
        .parse()
        .map_err(|_| format!("bad degree '{}'", parts[0]))?;
    let p = parts[1]
        .parse()
        .map_err(|_| format!("bad Hodge index '{}'", parts[1]))?;
    let q = parts[2]
        .parse()
        .map_err(|_| format!("bad Hodge index '{}'", parts[2]))?;
    Ok((k, p, q))
}

fn parse_matrix(rows: &[Vec<String>], location: &str, issues: &mut Vec<LoadIssue>) -> Option<QMat> {
    let r = rows.len();
    let c = rows.first().map_or(0, |row| row.len());
    if rows.iter().any(|row| row.len() != c) {
        issues.push(issue(location, "ragged matrix"));
        return None;
    }
    let mut m = QMat::zero(r, c);
    let mut ok = true;
    for (i, row) in rows.iter().enumerate() {
        for (jx, cell) in row.iter().enumerate() {
            match parse_q(cell) {
                Ok(v) => m.set(i, jx, v),
                Err(e) => {
                    issues.push(issue(format!("{location}[{i}][{jx}]"), e));
                    ok = false;
                }
            }
        }
    }
    ok.then_some(m)
}

fn matrix_to_rows(m: &QMat) -> Vec<Vec<String>> {
    (0..m.rows())
        .map(|i| (0..m.cols()).map(|j| show_q(m.at(i, j))).collect())
        .collect()
}

fn parse_blocks(
    blocks: &BTreeMap<String, Vec<Vec<String>>>,
    location: &str,
    issues: &mut Vec<LoadIssue>,
) -> BTreeMap<(i64, i64, i64), QMat> {
    let mut out = BTreeMap::new();
    for (key, rows) in blocks {
        let kpq = match parse_kpq(key) {
            Ok(v) => v,
            Err(e) => {
                issues.push(issue(format!("{location}.{key}"), e));
                continue;
            }
        };
        if let Some(m) = parse_matrix(rows, &format!("{location}.{key}"), issues) {
            out.insert(kpq, m);
        }
    }
    out
}

fn space_to_presentation(s: &SpaceSpec) -> Presentation {
    match s {
        SpaceSpec::Atom(a) => Presentation::Atom(a.clone()),
        SpaceSpec::Ref(r) => Presentation::Ref(r.clone()),
        SpaceSpec::Diff(a, b) => Presentation::Diff(
            Box::new(space_to_presentation(a)),
            Box::new(space_to_presentation(b)),
        ),
        SpaceSpec::Union(parts) => {
            Presentation::Union(parts.iter().map(space_to_presentation).collect())
        }
        SpaceSpec::Twist(a, t) => Presentation::Twist(Box::new(space_to_presentation(a)), *t),
    }
}

/// Resolve every section, collecting all issues; a bundle is returned only
/// when the whole document validates.
pub fn resolve(fixture: &Fixture) -> Result<Bundle, Vec<LoadIssue>> {
    let mut issues = Vec::new();

    let mut registry = AtomRegistry::new();
    for spec in &fixture.atoms {
        let loc = format!("atoms.{}", spec.name);
        let entries: Vec<(i64, i64, i64, i64)> = spec
            .hodge
            .iter()
            .map(|r| (r[0], r[1], r[2], r[3]))
            .collect();
        match Atom::new(spec.name.clone(), spec.dim, &entries) {
            Ok(atom) => {
                if let Err(e) = registry.register(atom) {
                    issues.push(issue(&loc, e));
                }
            }
            Err(e) => issues.push(issue(&loc, e)),
        }
    }

    let mut rules = Vec::new();
    for (ix, rule) in fixture.relations.iter().enumerate() {
        let loc = format!("relations[{ix}]");
        let Some((lhs, rhs)) = rule.split_once("->") else {
            issues.push(issue(&loc, "rule must be written 'lhs -> rhs'"));
            continue;
        };
        let lhs = lhs.trim();
        let name = match lhs.strip_prefix('[').and_then(|s| s.strip_suffix(']')) {
            Some(n) if !n.is_empty() => n.to_string(),
            _ => {
                issues.push(issue(
                    &loc,
                    format!("left side '{lhs}' must be a single [atom]"),
                ));
                continue;
            }
        };
        match parse_class(rhs.trim()) {
            Ok(c) => rules.push((name, c)),
            Err(e) => issues.push(issue(&loc, e)),
        }
    }
    let relations = match RelationSet::new(&registry, rules) {
        Ok(r) => r,
        Err(e) => {
            issues.push(issue("relations", e));
            RelationSet::new(&registry, Vec::new()).expect("empty relation set is valid")
        }
    };

    let presentations: BTreeMap<String, Presentation> = fixture
        .spaces
        .iter()
        .map(|(name, s)| (name.clone(), space_to_presentation(s)))
        .collect();
    let spaces = match SpaceTable::new(presentations) {
        Ok(t) => t,
        Err(e) => {
            issues.push(issue("spaces", e));
            SpaceTable::default()
        }
    };
    for name in fixture.spaces.keys() {
        if let Err(e) = spaces.class_raw(&registry, name) {
            issues.push(issue(format!("spaces.{name}"), e));
        }
    }

    let mut complexes = BTreeMap::new();
    for (name, spec) in &fixture.complexes {
        let loc = format!("complexes.{name}");
        if spec.diffs.len() + 1 != spec.dims.len()
            && !(spec.dims.is_empty() && spec.diffs.is_empty())
        {
            issues.push(issue(
                &loc,
                format!(
                    "{} terms need {} differentials, found {}",
                    spec.dims.len(),
                    spec.dims.len().saturating_sub(1),
                    spec.diffs.len()
                ),
            ));
            continue;
        }
        let mut mats = Vec::new();
        let mut ok = true;
        for (ix, rows) in spec.diffs.iter().enumerate() {
            match parse_matrix(rows, &format!("{loc}.diffs[{ix}]"), &mut issues) {
                Some(m) => mats.push(m),
                None => ok = false,
            }
        }
        if !ok {
            continue;
        }
        match QComplex::new(spec.lo, spec.dims.clone(), mats) {
            Ok(c) => {
                complexes.insert(name.clone(), c);
            }
            Err(e) => issues.push(issue(&loc, e)),
        }
    }

    let mut diagrams = BTreeMap::new();
    'diagram: for (name, spec) in &fixture.diagrams {
        let loc = format!("diagrams.{name}");
        let mut members = std::collections::BTreeSet::new();
        for bits in &spec.shape {
            match CubeIndex::parse(bits) {
                Ok(ix) => {
                    members.insert(ix);
                }
                Err(e) => {
                    issues.push(issue(format!("{loc}.shape"), e));
                    continue 'diagram;
                }
            }
        }
        let shape = match CubicalOrder::new(members) {
            Ok(s) => s,
            Err(e) => {
                issues.push(issue(format!("{loc}.shape"), e));
                continue;
            }
        };
        let mut vertices = BTreeMap::new();
        for (key, cname) in &spec.vertices {
            let ix = match CubeIndex::parse(key) {
                Ok(ix) => ix,
                Err(e) => {
                    issues.push(issue(format!("{loc}.vertices.{key}"), e));
                    continue 'diagram;
                }
            };
            let Some(c) = complexes.get(cname) else {
                issues.push(issue(
                    format!("{loc}.vertices.{key}"),
                    format!("unknown complex '{cname}'"),
                ));
                continue 'diagram;
            };
            vertices.insert(ix, c.clone());
        }
        let mut edges = BTreeMap::new();
        for (key, degrees) in &spec.edges {
            let Some((a, b)) = key.split_once("->") else {
                issues.push(issue(
                    format!("{loc}.edges.{key}"),
                    "edge key must be written 'α->β'",
                ));
                continue 'diagram;
            };
            let (a, b) = match (CubeIndex::parse(a.trim()), CubeIndex::parse(b.trim())) {
                (Ok(a), Ok(b)) => (a, b),
                _ => {
                    issues.push(issue(format!("{loc}.edges.{key}"), "bad edge endpoints"));
                    continue 'diagram;
                }
            };
            let (Some(src), Some(tgt)) = (vertices.get(&a), vertices.get(&b)) else {
                issues.push(issue(
                    format!("{loc}.edges.{key}"),
                    "edge endpoints must be declared vertices",
                ));
                continue 'diagram;
            };
            let mut comps = BTreeMap::new();
            let mut ok = true;
            for (deg, rows) in degrees {
                let Ok(k) = deg.trim().parse::<i64>() else {
                    issues.push(issue(
                        format!("{loc}.edges.{key}.{deg}"),
                        "degree keys must be integers",
                    ));
                    ok = false;
                    continue;
                };
                match parse_matrix(rows, &format!("{loc}.edges.{key}.{deg}"), &mut issues) {
                    Some(m) => {
                        comps.insert(k, m);
                    }
                    None => ok = false,
                }
            }
            if !ok {
                continue 'diagram;
            }
            match ChainMap::new(src.clone(), tgt.clone(), comps) {
                Ok(e) => {
                    edges.insert((a, b), e);
                }
                Err(e) => {
                    issues.push(issue(format!("{loc}.edges.{key}"), e));
                    continue 'diagram;
                }
            }
        }
        match CubicalDiagram::new(shape, vertices, edges) {
            Ok(d) => {
                diagrams.insert(name.clone(), d);
            }
            Err(e) => issues.push(issue(&loc, e)),
        }
    }

    let mut pairs = BTreeMap::new();
    for (name, spec) in &fixture.pairs {
        let loc = format!("pairs.{name}");
        let mut strata = BTreeMap::new();
        let mut ok = true;
        for (key, atom) in &spec.strata {
            match parse_sigma(key) {
                Ok(sigma) => {
                    strata.insert(sigma, atom.clone());
                }
                Err(e) => {
                    issues.push(issue(format!("{loc}.strata.{key}"), e));
                    ok = false;
                }
            }
        }
        if !ok {
            continue;
        }
        match SncPair::new(
            &registry,
            name.clone(),
            spec.ambient.clone(),
            spec.components.clone(),
            strata,
            spec.open_part.clone(),
        ) {
            Ok(p) => {
                pairs.insert(name.clone(), p);
            }
            Err(e) => issues.push(issue(&loc, e)),
        }
    }

    let mut morphisms = BTreeMap::new();
    for (name, spec) in &fixture.morphisms {
        let loc = format!("morphisms.{name}");
        let (Some(source), Some(target)) = (pairs.get(&spec.source), pairs.get(&spec.target))
        else {
            issues.push(issue(
                &loc,
                format!(
                    "source '{}' and target '{}' must be declared pairs",
                    spec.source, spec.target
                ),
            ));
            continue;
        };
        let mut strata_maps = BTreeMap::new();
        let mut ok = true;
        for (key, map_ref) in &spec.strata_maps {
            let Some((s, t)) = key.split_once('|') else {
                issues.push(issue(
                    format!("{loc}.strata_maps.{key}"),
                    "key must be written 'σ|τ'",
                ));
                ok = false;
                continue;
            };
            match (parse_sigma(s), parse_sigma(t)) {
                (Ok(sigma), Ok(tau)) => {
                    strata_maps.insert((sigma, tau), map_ref.clone());
                }
                _ => {
                    issues.push(issue(
                        format!("{loc}.strata_maps.{key}"),
                        "both sides must be stratum keys",
                    ));
                    ok = false;
                }
            }
        }
        if !ok {
            continue;
        }
        match PairMorphism::new(source.clone(), target.clone(), spec.m.clone(), strata_maps) {
            Ok(m) => {
                morphisms.insert(name.clone(), m);
            }
            Err(e) => issues.push(issue(&loc, e)),
        }
    }

    let mut squares = BTreeMap::new();
    let mut square_expectations = BTreeMap::new();
    for (name, spec) in &fixture.squares {
        let loc = format!("squares.{name}");
        let square = RealizedSquare {
            name: name.clone(),
            x: spec.x.clone(),
            y: spec.y.clone(),
            xt: spec.xt.clone(),
            yt: spec.yt.clone(),
            i_star: parse_blocks(&spec.i, &format!("{loc}.i"), &mut issues),
            f_star: parse_blocks(&spec.f, &format!("{loc}.f"), &mut issues),
            g_star: parse_blocks(&spec.g, &format!("{loc}.g"), &mut issues),
            j_star: parse_blocks(&spec.j, &format!("{loc}.j"), &mut issues),
            excess: parse_blocks(&spec.excess, &format!("{loc}.excess"), &mut issues),
        };
        match square.validate(&registry) {
            Ok(()) => {
                squares.insert(name.clone(), square);
                square_expectations.insert(name.clone(), spec.expect_exact);
            }
            Err(e) => issues.push(issue(&loc, e)),
        }
    }

    let mut class_squares = BTreeMap::new();
    for (name, spec) in &fixture.class_squares {
        let loc = format!("class_squares.{name}");
        let mut ok = true;
        for corner in [&spec.x, &spec.y, &spec.xt, &spec.yt] {
            if !spaces.contains(corner) && registry.get(corner).is_err() {
                issues.push(issue(
                    &loc,
                    format!("corner '{corner}' is neither a space nor an atom"),
                ));
                ok = false;
            }
        }
        if ok {
            class_squares.insert(
                name.clone(),
                ClassSquare {
                    name: name.clone(),
                    x: spec.x.clone(),
                    y: spec.y.clone(),
                    xt: spec.xt.clone(),
                    yt: spec.yt.clone(),
                },
            );
        }
    }

    let mut blowups = BTreeMap::new();
    for (name, spec) in &fixture.blowups {
        let loc = format!("blowups.{name}");
        let b = BlowupFixture {
            name: name.clone(),
            x: spec.x.clone(),
            y: spec.y.clone(),
            xt: spec.xt.clone(),
            yt: spec.yt.clone(),
            r: spec.r,
        };
        match crate::gysin::manin_decomposition(&registry, &b) {
            Ok(_) => {
                blowups.insert(name.clone(), b);
            }
            Err(e) => issues.push(issue(&loc, e)),
        }
    }

    let mut independence = BTreeMap::new();
    for (name, spec) in &fixture.independence {
        let loc = format!("independence.{name}");
        let mut ok = true;
        for p in &spec.pairs {
            if !pairs.contains_key(p) {
                issues.push(issue(&loc, format!("unknown pair '{p}'")));
                ok = false;
            }
        }
        if ok {
            independence.insert(name.clone(), spec.clone());
        }
    }

    if issues.is_empty() {
        Ok(Bundle {
            registry,
            relations,
            spaces,
            complexes,
            diagrams,
            pairs,
            morphisms,
            squares,
            square_expectations,
            class_squares,
            blowups,
            independence,
        })
    } else {
        Err(issues)
    }
}

/// Render a rational matrix back into fixture rows (used when writing
/// fixtures programmatically).
pub fn encode_matrix(m: &QMat) -> Vec<Vec<String>> {
    matrix_to_rows(m)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small_fixture_text() -> String {
        serde_json::json!({
            "atoms": [
                {"name": "P1", "dim": 1, "hodge": [[0,0,0,1],[2,1,1,1]]}
            ],
            "relations": ["[P1] -> 1 + L"],
            "spaces": {
                "a1": {"diff": [{"atom": "P1"}, {"atom": "pt"}]}
            },
            "complexes": {
                "unit": {"lo": 0, "dims": [1], "diffs": []},
                "edge": {"lo": 0, "dims": [1, 1], "diffs": [[["1"]]]}
            },
            "diagrams": {
                "square": {
                    "shape": ["00", "01", "1", "11"],
                    "vertices": {"00": "unit", "01": "unit", "1": "unit", "11": "unit"},
                    "edges": {
                        "00->01": {"0": [["2"]]},
                        "00->1": {"0": [["3"]]},
                        "01->11": {"0": [["15"]]},
                        "1->11": {"0": [["10"]]}
                    }
                }
            },
            "pairs": {
                "p1-pt": {
                    "ambient": "P1",
                    "components": ["infinity"],
                    "strata": {"1": "pt"},
                    "open_part": "A1"
                }
            },
            "morphisms": {
                "id": {
                    "source": "p1-pt",
                    "target": "p1-pt",
                    "M": [[1]],
                    "strata_maps": {"1|1": "id"}
                }
            },
            "independence": {
                "self": {"pairs": ["p1-pt", "p1-pt"], "expect_equal": true}
            }
        })
        .to_string()
    }

    #[test]
    fn round_trip_is_canonical() {
        let f = parse_fixture(&small_fixture_text()).unwrap();
        let once = canonical_json(&f);
        let again = canonical_json(&parse_fixture(&once).unwrap());
        assert_eq!(once, again);
    }

    #[test]
    fn resolve_builds_everything() {
        let f = parse_fixture(&small_fixture_text()).unwrap();
        let b = resolve(&f).unwrap();
        assert!(b.registry.contains("P1"));
        assert!(b.relations.has_rule("P1"));
        assert!(b.spaces.contains("a1"));
        assert_eq!(b.complexes.len(), 2);
        assert_eq!(b.diagrams.len(), 1);
        assert!(b.pairs.contains_key("p1-pt"));
        assert!(b.morphisms.contains_key("id"));
        assert!(b.independence.contains_key("self"));
    }

    #[test]
    fn bad_hodge_table_names_the_invariant() {
        let text = serde_json::json!({
            "atoms": [
                {"name": "bad", "dim": 1, "hodge": [[0,0,0,1],[1,1,0,1]]}
            ]
        })
        .to_string();
        let f = parse_fixture(&text).unwrap();
        let errs = resolve(&f).unwrap_err();
        assert_eq!(errs.len(), 1);
        assert_eq!(errs[0].location, "atoms.bad");
        assert!(
            errs[0].message.contains("Poincare"),
            "got: {}",
            errs[0].message
        );
    }

    #[test]
    fn issues_accumulate_across_sections() {
        let text = serde_json::json!({
            "complexes": {
                "broken": {"lo": 0, "dims": [1, 1], "diffs": [[["x"]]]}
            },
            "pairs": {
                "orphan": {
                    "ambient": "nowhere",
                    "components": [],
                    "strata": {},
                    "open_part": "U"
                }
            }
        })
        .to_string();
        let f = parse_fixture(&text).unwrap();
        let errs = resolve(&f).unwrap_err();
        assert!(errs.len() >= 2);
        assert!(errs
            .iter()
            .any(|e| e.location.starts_with("complexes.broken")));
        assert!(errs.iter().any(|e| e.location.starts_with("pairs.orphan")));
    }

    #[test]
    fn empty_document_is_a_parse_error() {
        assert!(parse_fixture("").is_err());
    }

    #[test]
    fn non_commuting_diagram_is_rejected_at_load() {
        let text = serde_json::json!({
            "complexes": {"unit": {"lo": 0, "dims": [1], "diffs": []}},
            "diagrams": {
                "square": {
                    "shape": ["00", "01", "1", "11"],
                    "vertices": {"00": "unit", "01": "unit", "1": "unit", "11": "unit"},
                    "edges": {
                        "00->01": {"0": [["2"]]},
                        "00->1": {"0": [["3"]]},
                        "01->11": {"0": [["1"]]},
                        "1->11": {"0": [["1"]]}
                    }
                }
            }
        })
        .to_string();
        let f = parse_fixture(&text).unwrap();
        let errs = resolve(&f).unwrap_err();
        assert!(
            errs[0].message.contains("commute"),
            "got: {}",
            errs[0].message
        );
    }
}
