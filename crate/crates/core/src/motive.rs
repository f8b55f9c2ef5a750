//! A small Grothendieck-class calculus.
//!
//! Classes are integer combinations of `[A]*L^t` where `A` is a registered
//! atom (a smooth projective building block with a Hodge table) and `L` is
//! the Tate twist. The reserved atom `pt` is the unit; `[pt]*L^t` displays
//! as `L^t`. Relations rewrite atoms into classes of other atoms; loading
//! checks they form an acyclic, single-rule-per-atom system so reduction is
//! well defined. Realization sends a class to its E-polynomial in `u, v`.

use crate::linalg::Q;
use num_traits::{One, Zero};
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use thiserror::Error;

pub const UNIT_ATOM: &str = "pt";

#[derive(Debug, Error)]
pub enum MotiveError {
    #[error("unknown atom {0}")]
    UnknownAtom(String),
    #[error("atom {0} is already registered")]
    DuplicateAtom(String),
    #[error("atom {name}: {msg}")]
    BadHodgeTable { name: String, msg: String },
    #[error("more than one rewrite rule for atom {0}")]
    DuplicateRule(String),
    #[error("the unit atom cannot be rewritten")]
    RuleForUnit,
    #[error("rewrite rules form a cycle through {0}")]
    RuleCycle(String),
    #[error("unknown space {0}")]
    UnknownSpace(String),
    #[error("space presentations form a cycle through {0}")]
    SpaceCycle(String),
    #[error("class expression: {0}")]
    Parse(String),
    #[error("reduction disagrees between substitution orders for {0}")]
    Inconsistent(String),
}

/// Hodge table of an atom: `(k, p, q) -> h^{p,q}(H^k)`, zero entries omitted.
pub type HodgeTable = BTreeMap<(i64, i64, i64), i64>;

/// A smooth projective building block.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Atom {
    pub name: String,
    pub dim: i64,
    pub hodge: HodgeTable,
}

impl Atom {
    pub fn new(
        name: impl Into<String>,
        dim: i64,
        entries: &[(i64, i64, i64, i64)],
    ) -> Result<Atom, MotiveError> {
        let name = name.into();
        let mut hodge = HodgeTable::new();
        for &(k, p, q, h) in entries {
            if hodge.insert((k, p, q), h).is_some() {
                return Err(MotiveError::BadHodgeTable {
                    name,
                    msg: format!("duplicate entry for (k,p,q) = ({k},{p},{q})"),
                });
            }
        }
        let atom = Atom { name, dim, hodge };
        atom.validate()?;
        Ok(atom)
    }

    fn validate(&self) -> Result<(), MotiveError> {
        let bad = |msg: String| MotiveError::BadHodgeTable {
            name: self.name.clone(),
            msg,
        };
        if self.dim < 0 {
            return Err(bad("dimension must be nonnegative".into()));
        }
        let d = self.dim;
        for (&(k, p, q), &h) in &self.hodge {
            if h <= 0 {
                return Err(bad(format!(
                    "entry ({k},{p},{q}) must be positive, got {h}"
                )));
            }
            if p + q != k {
                return Err(bad(format!("entry ({k},{p},{q}) violates p + q = k")));
            }
            if k < 0 || k > 2 * d || p < 0 || q < 0 {
                return Err(bad(format!(
                    "entry ({k},{p},{q}) is out of range for dimension {d}"
                )));
            }
            let mirror = (2 * d - k, d - p, d - q);
            if self.hodge.get(&mirror) != Some(&h) {
                return Err(bad(format!(
                    "Poincare duality fails: entry ({k},{p},{q}) has no equal partner at \
                     ({},{},{})",
                    mirror.0, mirror.1, mirror.2
                )));
            }
        }
        if self.hodge.get(&(0, 0, 0)).copied().unwrap_or(0) < 1 {
            return Err(bad("h^{0,0} of H^0 must be at least 1".into()));
        }
        Ok(())
    }

    fn unit() -> Atom {
        Atom {
            name: UNIT_ATOM.into(),
            dim: 0,
            hodge: [((0, 0, 0), 1)].into_iter().collect(),
        }
    }
}

/// The known atoms. The unit `pt` is always present.
#[derive(Clone, Debug)]
pub struct AtomRegistry {
    atoms: BTreeMap<String, Atom>,
}

impl Default for AtomRegistry {
    fn default() -> Self {
        Self::new()
    }
}

impl AtomRegistry {
    pub fn new() -> Self {
        let mut atoms = BTreeMap::new();
        atoms.insert(UNIT_ATOM.to_string(), Atom::unit());
        AtomRegistry { atoms }
    }

    pub fn register(&mut self, atom: Atom) -> Result<(), MotiveError> {
        if self.atoms.contains_key(&atom.name) {
            return Err(MotiveError::DuplicateAtom(atom.name));
        }
        self.atoms.insert(atom.name.clone(), atom);
        Ok(())
    }

    pub fn get(&self, name: &str) -> Result<&Atom, MotiveError> {
        self.atoms
            .get(name)
            .ok_or_else(|| MotiveError::UnknownAtom(name.into()))
    }

    pub fn contains(&self, name: &str) -> bool {
        self.atoms.contains_key(name)
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.atoms.keys().map(|s| s.as_str())
    }
}

/// An integer combination of twisted atom classes `[A]*L^t`.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct MotiveClass {
    terms: BTreeMap<(String, i64), i64>,
}

impl MotiveClass {
    pub fn zero() -> Self {
        MotiveClass::default()
    }

    pub fn int(n: i64) -> Self {
        let mut c = MotiveClass::zero();
        c.add_term(UNIT_ATOM, 0, n);
        c
    }

    pub fn atom(name: &str) -> Self {
        let mut c = MotiveClass::zero();
        c.add_term(name, 0, 1);
        c
    }

    pub fn l_power(t: i64) -> Self {
        let mut c = MotiveClass::zero();
        c.add_term(UNIT_ATOM, t, 1);
        c
    }

    pub fn add_term(&mut self, name: &str, twist: i64, coeff: i64) {
        if coeff == 0 {
            return;
        }
        let key = (name.to_string(), twist);
        let entry = self.terms.entry(key.clone()).or_insert(0);
        *entry += coeff;
        if *entry == 0 {
            self.terms.remove(&key);
        }
    }

    pub fn add(&self, other: &MotiveClass) -> MotiveClass {
        let mut out = self.clone();
        for ((name, t), c) in &other.terms {
            out.add_term(name, *t, *c);
        }
        out
    }

    pub fn neg(&self) -> MotiveClass {
        let mut out = MotiveClass::zero();
        for ((name, t), c) in &self.terms {
            out.add_term(name, *t, -c);
        }
        out
    }

    pub fn sub(&self, other: &MotiveClass) -> MotiveClass {
        self.add(&other.neg())
    }

    pub fn scale(&self, n: i64) -> MotiveClass {
        let mut out = MotiveClass::zero();
        for ((name, t), c) in &self.terms {
            out.add_term(name, *t, c * n);
        }
        out
    }

    /// Multiply by `L^t`.
    pub fn twist(&self, t: i64) -> MotiveClass {
        let mut out = MotiveClass::zero();
        for ((name, s), c) in &self.terms {
            out.add_term(name, s + t, *c);
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&str, i64, i64)> {
        self.terms.iter().map(|((n, t), c)| (n.as_str(), *t, *c))
    }

    /// Every atom name appearing in the class.
    pub fn atoms_used(&self) -> BTreeSet<&str> {
        self.terms.keys().map(|(n, _)| n.as_str()).collect()
    }
}

impl fmt::Display for MotiveClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, ((name, t), c)) in self.terms.iter().enumerate() {
            let mag = c.abs();
            let mut pieces: Vec<String> = Vec::new();
            let unit = name == UNIT_ATOM;
            if mag != 1 || (unit && *t == 0) {
                pieces.push(mag.to_string());
            }
            if !unit {
                pieces.push(format!("[{name}]"));
            }
            if *t != 0 {
                pieces.push(if *t == 1 {
                    "L".into()
                } else {
                    format!("L^{t}")
                });
            }
            let term = pieces.join("*");
            if i == 0 {
                if *c < 0 {
                    write!(f, "-{term}")?;
                } else {
                    write!(f, "{term}")?;
                }
            } else if *c < 0 {
                write!(f, " - {term}")?;
            } else {
                write!(f, " + {term}")?;
            }
        }
        Ok(())
    }
}

#[derive(Debug, PartialEq)]
enum Token {
    Int(i64),
    L,
    Caret,
    Star,
    Plus,
    Minus,
    Name(String),
}

fn tokenize(s: &str) -> Result<Vec<Token>, MotiveError> {
    let err = |msg: String| MotiveError::Parse(msg);
    let mut out = Vec::new();
    let chars: Vec<char> = s.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        match c {
            ' ' | '\t' => i += 1,
            '+' => {
                out.push(Token::Plus);
                i += 1;
            }
            '-' => {
                out.push(Token::Minus);
                i += 1;
            }
            '*' => {
                out.push(Token::Star);
                i += 1;
            }
            '^' => {
                out.push(Token::Caret);
                i += 1;
            }
            'L' => {
                out.push(Token::L);
                i += 1;
            }
            '[' => {
                let mut j = i + 1;
                while j < chars.len() && chars[j] != ']' {
                    j += 1;
                }
                if j == chars.len() {
                    return Err(err("unclosed '['".into()));
                }
                let name: String = chars[i + 1..j].iter().collect();
                if name.is_empty() {
                    return Err(err("empty atom name".into()));
                }
                out.push(Token::Name(name));
                i = j + 1;
            }
            '0'..='9' => {
                let mut j = i;
                while j < chars.len() && chars[j].is_ascii_digit() {
                    j += 1;
                }
                let lit: String = chars[i..j].iter().collect();
                let n = lit
                    .parse::<i64>()
                    .map_err(|e| err(format!("bad integer {lit}: {e}")))?;
                out.push(Token::Int(n));
                i = j;
            }
            other => return Err(err(format!("unexpected character '{other}'"))),
        }
    }
    Ok(out)
}

/// Parse a class expression: integers, `L` with optional `^` exponent,
/// bracketed atom names, products within a term, sums and differences of
/// terms. Each term may mention at most one atom — there is no product of
/// atom classes here.
pub fn parse_class(s: &str) -> Result<MotiveClass, MotiveError> {
    let toks = tokenize(s)?;
    let err = |msg: &str| MotiveError::Parse(msg.into());
    let mut out = MotiveClass::zero();
    let mut i = 0;
    let mut first = true;
    while i < toks.len() || first {
        // Sign.
        let mut sign = 1i64;
        if first {
            if toks.get(i) == Some(&Token::Minus) {
                sign = -1;
                i += 1;
            }
        } else {
            match toks.get(i) {
                Some(Token::Plus) => i += 1,
                Some(Token::Minus) => {
                    sign = -1;
                    i += 1;
                }
                _ => return Err(err("expected '+' or '-' between terms")),
            }
        }
        first = false;
        // One term: factors joined by '*'.
        let mut coeff = sign;
        let mut twist = 0i64;
        let mut atom: Option<String> = None;
        loop {
            match toks.get(i) {
                Some(Token::Int(n)) => {
                    coeff *= n;
                    i += 1;
                }
                Some(Token::L) => {
                    i += 1;
                    if toks.get(i) == Some(&Token::Caret) {
                        i += 1;
                        let mut esign = 1i64;
                        if toks.get(i) == Some(&Token::Minus) {
                            esign = -1;
                            i += 1;
                        }
                        match toks.get(i) {
                            Some(Token::Int(n)) => {
                                twist += esign * n;
                                i += 1;
                            }
                            _ => return Err(err("expected an integer exponent after '^'")),
                        }
                    } else {
                        twist += 1;
                    }
                }
                Some(Token::Name(n)) => {
                    if atom.is_some() {
                        return Err(err("a term may mention at most one atom class"));
                    }
                    atom = Some(n.clone());
                    i += 1;
                }
                _ => return Err(err("expected an integer, 'L', or '[atom]'")),
            }
            if toks.get(i) == Some(&Token::Star) {
                i += 1;
                continue;
            }
            break;
        }
        let name = atom.unwrap_or_else(|| UNIT_ATOM.to_string());
        out.add_term(&name, twist, coeff);
        if i >= toks.len() {
            break;
        }
    }
    Ok(out)
}

/// Laurent polynomial in `u, v` with integer coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct EPoly {
    terms: BTreeMap<(i64, i64), i64>,
}

impl EPoly {
    pub fn zero() -> Self {
        EPoly::default()
    }

    pub fn monomial(p: i64, q: i64, c: i64) -> Self {
        let mut e = EPoly::zero();
        e.add_term(p, q, c);
        e
    }

    pub fn one() -> Self {
        EPoly::monomial(0, 0, 1)
    }

    pub fn add_term(&mut self, p: i64, q: i64, c: i64) {
        if c == 0 {
            return;
        }
        let e = self.terms.entry((p, q)).or_insert(0);
        *e += c;
        if *e == 0 {
            self.terms.remove(&(p, q));
        }
    }

    pub fn add(&self, other: &EPoly) -> EPoly {
        let mut out = self.clone();
        for (&(p, q), &c) in &other.terms {
            out.add_term(p, q, c);
        }
        out
    }

    pub fn sub(&self, other: &EPoly) -> EPoly {
        let mut out = self.clone();
        for (&(p, q), &c) in &other.terms {
            out.add_term(p, q, -c);
        }
        out
    }

    pub fn mul(&self, other: &EPoly) -> EPoly {
        let mut out = EPoly::zero();
        for (&(p1, q1), &c1) in &self.terms {
            for (&(p2, q2), &c2) in &other.terms {
                out.add_term(p1 + p2, q1 + q2, c1 * c2);
            }
        }
        out
    }

    pub fn scale(&self, n: i64) -> EPoly {
        let mut out = EPoly::zero();
        for (&(p, q), &c) in &self.terms {
            out.add_term(p, q, c * n);
        }
        out
    }

    /// Substitute `u -> 1/u`, `v -> 1/v`.
    pub fn invert_vars(&self) -> EPoly {
        let mut out = EPoly::zero();
        for (&(p, q), &c) in &self.terms {
            out.add_term(-p, -q, c);
        }
        out
    }

    /// Value at `u = v = 1` (the Euler number of a realized class).
    pub fn eval_at_one(&self) -> i64 {
        self.terms.values().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn eval(&self, u: &Q, v: &Q) -> Q {
        let mut acc = Q::zero();
        for (&(p, q), &c) in &self.terms {
            let up = int_pow(u, p);
            let vq = int_pow(v, q);
            acc += up * vq * Q::from_integer(c.into());
        }
        acc
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, i64, i64)> + '_ {
        self.terms.iter().map(|(&(p, q), &c)| (p, q, c))
    }
}

fn int_pow(x: &Q, n: i64) -> Q {
    let mut acc = Q::one();
    let base = if n >= 0 { x.clone() } else { x.recip() };
    for _ in 0..n.abs() {
        acc *= base.clone();
    }
    acc
}

impl fmt::Display for EPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        // Highest total degree first, deterministically.
        let mut keys: Vec<(i64, i64)> = self.terms.keys().copied().collect();
        keys.sort_by_key(|&(p, q)| (-(p + q), -p, -q));
        for (i, (p, q)) in keys.iter().enumerate() {
            let c = self.terms[&(*p, *q)];
            let mag = c.abs();
            let mut pieces: Vec<String> = Vec::new();
            if mag != 1 || (*p == 0 && *q == 0) {
                pieces.push(mag.to_string());
            }
            if *p != 0 {
                pieces.push(if *p == 1 {
                    "u".into()
                } else {
                    format!("u^{p}")
                });
            }
            if *q != 0 {
                pieces.push(if *q == 1 {
                    "v".into()
                } else {
                    format!("v^{q}")
                });
            }
            let term = pieces.join("*");
            if i == 0 {
                if c < 0 {
                    write!(f, "-{term}")?;
                } else {
                    write!(f, "{term}")?;
                }
            } else if c < 0 {
                write!(f, " - {term}")?;
            } else {
                write!(f, " + {term}")?;
            }
        }
        Ok(())
    }
}

/// E-polynomial of a class: each atom contributes its Hodge table with the
/// sign `(-1)^k`, each twist multiplies by `uv`.
pub fn realize_e(registry: &AtomRegistry, class: &MotiveClass) -> Result<EPoly, MotiveError> {
    let mut out = EPoly::zero();
    for (name, t, c) in class.terms() {
        let atom = registry.get(name)?;
        for (&(k, p, q), &h) in &atom.hodge {
            let sign = if k % 2 == 0 { 1 } else { -1 };
            out.add_term(p + t, q + t, sign * h * c);
        }
    }
    Ok(out)
}

/// Duality on classes: `[A]*L^t -> [A]*L^{-dim A - t}`.
pub fn dual_class(
    registry: &AtomRegistry,
    class: &MotiveClass,
) -> Result<MotiveClass, MotiveError> {
    let mut out = MotiveClass::zero();
    for (name, t, c) in class.terms() {
        let d = registry.get(name)?.dim;
        out.add_term(name, -d - t, c);
    }
    Ok(out)
}

/// Atom rewrite rules, one per atom, acyclic.
#[derive(Clone, Debug, Default)]
pub struct RelationSet {
    rules: BTreeMap<String, MotiveClass>,
}

impl RelationSet {
    pub fn new(
        registry: &AtomRegistry,
        rules: Vec<(String, MotiveClass)>,
    ) -> Result<Self, MotiveError> {
        let mut map: BTreeMap<String, MotiveClass> = BTreeMap::new();
        for (lhs, rhs) in rules {
            if lhs == UNIT_ATOM {
                return Err(MotiveError::RuleForUnit);
            }
            if !registry.contains(&lhs) {
                return Err(MotiveError::UnknownAtom(lhs));
            }
            for a in rhs.atoms_used() {
                if !registry.contains(a) {
                    return Err(MotiveError::UnknownAtom(a.into()));
                }
            }
            if map.insert(lhs.clone(), rhs).is_some() {
                return Err(MotiveError::DuplicateRule(lhs));
            }
        }
        let set = RelationSet { rules: map };
        set.check_acyclic()?;
        Ok(set)
    }

    fn check_acyclic(&self) -> Result<(), MotiveError> {
        // Colors: 0 unseen, 1 on stack, 2 done.
        let mut color: BTreeMap<&str, u8> = BTreeMap::new();
        fn visit<'a>(
            rules: &'a BTreeMap<String, MotiveClass>,
            color: &mut BTreeMap<&'a str, u8>,
            name: &'a str,
        ) -> Result<(), MotiveError> {
            match color.get(name) {
                Some(1) => return Err(MotiveError::RuleCycle(name.into())),
                Some(2) => return Ok(()),
                _ => {}
            }
            color.insert(name, 1);
            if let Some(rhs) = rules.get(name) {
                for ((dep, _), _) in &rhs.terms {
                    if rules.contains_key(dep) {
                        visit(rules, color, dep)?;
                    }
                }
            }
            color.insert(name, 2);
            Ok(())
        }
        for name in self.rules.keys() {
            visit(&self.rules, &mut color, name)?;
        }
        Ok(())
    }

    pub fn has_rule(&self, name: &str) -> bool {
        self.rules.contains_key(name)
    }

    pub fn rules(&self) -> impl Iterator<Item = (&str, &MotiveClass)> {
        self.rules.iter().map(|(n, c)| (n.as_str(), c))
    }

    /// Fully rewritten form of one atom.
    fn reduced_atom(&self, name: &str, memo: &mut BTreeMap<String, MotiveClass>) -> MotiveClass {
        if let Some(c) = memo.get(name) {
            return c.clone();
        }
        let out = match self.rules.get(name) {
            None => MotiveClass::atom(name),
            Some(rhs) => {
                let mut acc = MotiveClass::zero();
                for (dep, t, c) in rhs.terms() {
                    let red = self.reduced_atom(dep, memo);
                    acc = acc.add(&red.twist(t).scale(c));
                }
                acc
            }
        };
        memo.insert(name.into(), out.clone());
        out
    }

    /// Rewrite every atom with a rule until none applies.
    pub fn reduce(&self, class: &MotiveClass) -> MotiveClass {
        let mut memo = BTreeMap::new();
        let mut out = MotiveClass::zero();
        for (name, t, c) in class.terms() {
            let red = self.reduced_atom(name, &mut memo);
            out = out.add(&red.twist(t).scale(c));
        }
        out
    }

    /// Two classes are equal under the relations.
    pub fn equal(&self, a: &MotiveClass, b: &MotiveClass) -> bool {
        self.reduce(a) == self.reduce(b)
    }
}

/// How a space is presented for compactly supported classes: a smooth
/// projective atom, a reference to another presented space, a complement, a
/// disjoint union, or a product with an affine space (`Twist`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Presentation {
    Atom(String),
    Ref(String),
    Diff(Box<Presentation>, Box<Presentation>),
    Union(Vec<Presentation>),
    Twist(Box<Presentation>, i64),
}

/// Named space presentations with cycle-free references.
#[derive(Clone, Debug, Default)]
pub struct SpaceTable {
    spaces: BTreeMap<String, Presentation>,
}

impl SpaceTable {
    pub fn new(spaces: BTreeMap<String, Presentation>) -> Result<Self, MotiveError> {
        let table = SpaceTable { spaces };
        // Reject unknown references and reference cycles.
        let mut color: BTreeMap<String, u8> = BTreeMap::new();
        for name in table.spaces.keys() {
            table.walk(name, &mut color)?;
        }
        Ok(table)
    }

    fn walk(&self, name: &str, color: &mut BTreeMap<String, u8>) -> Result<(), MotiveError> {
        match color.get(name) {
            Some(1) => return Err(MotiveError::SpaceCycle(name.into())),
            Some(2) => return Ok(()),
            _ => {}
        }
        let Some(pres) = self.spaces.get(name) else {
            return Err(MotiveError::UnknownSpace(name.into()));
        };
        color.insert(name.into(), 1);
        self.walk_pres(pres, color)?;
        color.insert(name.into(), 2);
        Ok(())
    }

    fn walk_pres(
        &self,
        pres: &Presentation,
        color: &mut BTreeMap<String, u8>,
    ) -> Result<(), MotiveError> {
        match pres {
            Presentation::Atom(_) => Ok(()),
            Presentation::Ref(name) => self.walk(name, color),
            Presentation::Diff(a, b) => {
                self.walk_pres(a, color)?;
                self.walk_pres(b, color)
            }
            Presentation::Union(parts) => {
                for p in parts {
                    self.walk_pres(p, color)?;
                }
                Ok(())
            }
            Presentation::Twist(p, _) => self.walk_pres(p, color),
        }
    }

    pub fn contains(&self, name: &str) -> bool {
        self.spaces.contains_key(name)
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.spaces.keys().map(|s| s.as_str())
    }

    /// Formal compactly supported class of a named space (no relations
    /// applied).
    pub fn class_raw(
        &self,
        registry: &AtomRegistry,
        name: &str,
    ) -> Result<MotiveClass, MotiveError> {
        let Some(pres) = self.spaces.get(name) else {
            return Err(MotiveError::UnknownSpace(name.into()));
        };
        self.class_of_pres(registry, pres)
    }

    pub fn class_of_pres(
        &self,
        registry: &AtomRegistry,
        pres: &Presentation,
    ) -> Result<MotiveClass, MotiveError> {
        match pres {
            Presentation::Atom(a) => {
                registry.get(a)?;
                Ok(MotiveClass::atom(a))
            }
            Presentation::Ref(name) => self.class_raw(registry, name),
            Presentation::Diff(a, b) => Ok(self
                .class_of_pres(registry, a)?
                .sub(&self.class_of_pres(registry, b)?)),
            Presentation::Union(parts) => {
                let mut acc = MotiveClass::zero();
                for p in parts {
                    acc = acc.add(&self.class_of_pres(registry, p)?);
                }
                Ok(acc)
            }
            Presentation::Twist(p, t) => Ok(self.class_of_pres(registry, p)?.twist(*t)),
        }
    }

    /// Class of a named space with the relations applied.
    pub fn class_reduced(
        &self,
        registry: &AtomRegistry,
        relations: &RelationSet,
        name: &str,
    ) -> Result<MotiveClass, MotiveError> {
        Ok(relations.reduce(&self.class_raw(registry, name)?))
    }
}

/// The two Euler-type classes of the affine cone over a smooth projective
/// base: compactly supported and ordinary.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConeClasses {
    pub chi_c: MotiveClass,
    pub chi: MotiveClass,
}

/// Affine cone over the atom `y`: the compactly supported class is
/// `1 + [y]*L - [y]` (cone point plus the punctured cone, an `L - 1`
/// bundle over the base), the ordinary class is `1` (the cone contracts).
/// Both substitution orders through the relations must agree.
pub fn cone_classes(
    registry: &AtomRegistry,
    relations: &RelationSet,
    y: &str,
) -> Result<ConeClasses, MotiveError> {
    let base = MotiveClass::atom(y);
    registry.get(y)?;
    let formal = MotiveClass::int(1).add(&base.twist(1)).sub(&base);
    let chi_c = relations.reduce(&formal);
    // Cross-check: reduce the base first, then twist and subtract.
    let red = relations.reduce(&base);
    let alt = MotiveClass::int(1).add(&red.twist(1)).sub(&red);
    if chi_c != alt {
        return Err(MotiveError::Inconsistent(y.into()));
    }
    Ok(ConeClasses {
        chi_c,
        chi: MotiveClass::int(1),
    })
}
