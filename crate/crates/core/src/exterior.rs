//! Exterior algebra on an ordered set of generators.
//!
//! A [`Blade`] is a bit set over generator positions; a [`Multivector`] is a
//! sparse rational combination of blades over a fixed ambient generator count.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num::{BigInt, One, Signed, Zero};
use thiserror::Error;

use crate::linalg::{format_rational, zero_vector, Rational, Vector};

/// Upper bound imposed by the `u64` blade encoding.
pub const MAX_GENERATORS: usize = 64;

/// Default cap on ambient generators; `2^20` blades.
pub const DEFAULT_GENERATOR_CAP: usize = 20;

/// Basis monomial `x_{i1} ^ ... ^ x_{ip}` with `i1 < ... < ip`.
///
/// Ordered by degree first, then by the index set read as a binary number.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Blade(u64);

impl Blade {
    pub const EMPTY: Blade = Blade(0);

    pub fn from_bits(bits: u64) -> Self {
        Blade(bits)
    }

    /// Blade on the given zero-based generator positions. Duplicates collapse.
    pub fn from_indices(indices: &[usize]) -> Self {
        Blade(indices.iter().fold(0u64, |acc, &i| acc | (1 << i)))
    }

    pub fn generator(i: usize) -> Self {
        Blade(1 << i)
    }

    pub fn bits(self) -> u64 {
        self.0
    }

    pub fn degree(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn contains(self, i: usize) -> bool {
        self.0 >> i & 1 == 1
    }

    pub fn indices(self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.degree());
        let mut bits = self.0;
        while bits != 0 {
            out.push(bits.trailing_zeros() as usize);
            bits &= bits - 1;
        }
        out
    }

    /// Highest generator position used plus one.
    pub fn span(self) -> usize {
        64 - self.0.leading_zeros() as usize
    }

    /// `self ^ other` as `(negated, blade)`, or `None` when the index sets meet.
    pub fn wedge(self, other: Blade) -> Option<(bool, Blade)> {
        if self.0 & other.0 != 0 {
            return None;
        }
        // inversions: pairs (i in self, j in other) with i > j
        let mut inversions = 0u32;
        let mut bits = other.0;
        while bits != 0 {
            let j = bits.trailing_zeros();
            let above = if j >= 63 { 0 } else { self.0 >> (j + 1) };
            inversions += above.count_ones();
            bits &= bits - 1;
        }
        Some((inversions % 2 == 1, Blade(self.0 | other.0)))
    }
}

impl Ord for Blade {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then(self.0.cmp(&other.0))
    }
}

impl PartialOrd for Blade {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Blade {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Blade{:?}", self.indices())
    }
}

/// All degree-`p` blades over `m` generators in canonical order.
pub fn blades_of_degree(m: usize, p: usize) -> Vec<Blade> {
    assert!(m <= MAX_GENERATORS);
    if p > m {
        return Vec::new();
    }
    if p == 0 {
        return vec![Blade::EMPTY];
    }
    let limit: u128 = 1u128 << m;
    let mut out = Vec::new();
    let mut v: u128 = (1u128 << p) - 1;
    // Gosper's hack enumerates fixed-popcount words in increasing order.
    while v < limit {
        out.push(Blade(v as u64));
        let c = v & v.wrapping_neg();
        let r = v + c;
        v = (((r ^ v) >> 2) / c) | r;
    }
    out
}

/// Position of each blade of degree `p` inside [`blades_of_degree`].
pub fn blade_positions(m: usize, p: usize) -> BTreeMap<Blade, usize> {
    blades_of_degree(m, p)
        .into_iter()
        .enumerate()
        .map(|(i, b)| (b, i))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormError {
    #[error("unknown generator `{name}` at position {pos}")]
    UnknownGenerator { name: String, pos: usize },
    #[error("generator `{name}` repeated within one monomial at position {pos}")]
    RepeatedGenerator { name: String, pos: usize },
    #[error("malformed rational at position {pos}: {reason}")]
    MalformedRational { pos: usize, reason: String },
    #[error("syntax error at position {pos}: {reason}")]
    Syntax { pos: usize, reason: String },
    #[error("ambient mismatch: {left} vs {right} generators")]
    AmbientMismatch { left: usize, right: usize },
    #[error("{count} generators exceeds the limit of {limit}")]
    TooManyGenerators { count: usize, limit: usize },
}

/// Sparse element of the exterior algebra over `ambient` generators.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Multivector {
    ambient: usize,
    terms: BTreeMap<Blade, Rational>,
}

impl Multivector {
    pub fn zero(ambient: usize) -> Self {
        assert!(ambient <= MAX_GENERATORS);
        Multivector {
            ambient,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(ambient: usize) -> Self {
        Self::from_blade(ambient, Blade::EMPTY, Rational::one())
    }

    pub fn generator(ambient: usize, i: usize) -> Self {
        Self::from_blade(ambient, Blade::generator(i), Rational::one())
    }

    pub fn from_blade(ambient: usize, blade: Blade, coeff: Rational) -> Self {
        assert!(blade.span() <= ambient, "blade outside ambient");
        let mut mv = Self::zero(ambient);
        mv.add_term(blade, coeff);
        mv
    }

    /// Homogeneous degree-`p` element with coordinates `coords` in the
    /// [`blades_of_degree`] basis.
    pub fn from_coordinates(ambient: usize, p: usize, coords: &[Rational]) -> Self {
        let blades = blades_of_degree(ambient, p);
        assert_eq!(blades.len(), coords.len());
        let mut mv = Self::zero(ambient);
        for (b, c) in blades.into_iter().zip(coords) {
            mv.add_term(b, c.clone());
        }
        mv
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn terms(&self) -> impl Iterator<Item = (Blade, &Rational)> {
        self.terms.iter().map(|(&b, c)| (b, c))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, blade: Blade) -> Rational {
        self.terms.get(&blade).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn add_term(&mut self, blade: Blade, coeff: Rational) {
        assert!(blade.span() <= self.ambient, "blade outside ambient");
        if coeff.is_zero() {
            return;
        }
        match self.terms.get_mut(&blade) {
            Some(c) => {
                *c += coeff;
                if c.is_zero() {
                    self.terms.remove(&blade);
                }
            }
            None => {
                self.terms.insert(blade, coeff);
            }
        }
    }

    /// `Some(p)` when every term has degree `p`; zero is homogeneous of every
    /// degree and reports `None`.
    pub fn homogeneous_degree(&self) -> Option<usize> {
        let mut degrees = self.terms.keys().map(|b| b.degree());
        let first = degrees.next()?;
        degrees.all(|d| d == first).then_some(first)
    }

    pub fn is_homogeneous(&self) -> bool {
        self.is_zero() || self.homogeneous_degree().is_some()
    }

    pub fn homogeneous_part(&self, p: usize) -> Multivector {
        Multivector {
            ambient: self.ambient,
            terms: self
                .terms
                .iter()
                .filter(|(b, _)| b.degree() == p)
                .map(|(&b, c)| (b, c.clone()))
                .collect(),
        }
    }

    /// Coordinates of the degree-`p` part in the [`blades_of_degree`] basis.
    pub fn coordinates(&self, p: usize) -> Vector {
        let pos = blade_positions(self.ambient, p);
        let mut v = zero_vector(pos.len());
        for (b, c) in &self.terms {
            if let Some(&i) = pos.get(b) {
                v[i] = c.clone();
            }
        }
        v
    }

    pub fn scale(&self, s: &Rational) -> Multivector {
        let mut out = Self::zero(self.ambient);
        if s.is_zero() {
            return out;
        }
        for (&b, c) in &self.terms {
            out.terms.insert(b, c * s);
        }
        out
    }

    fn check_ambient(&self, other: &Multivector) -> Result<(), FormError> {
        if self.ambient != other.ambient {
            return Err(FormError::AmbientMismatch {
                left: self.ambient,
                right: other.ambient,
            });
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Multivector) -> Result<Multivector, FormError> {
        self.check_ambient(other)?;
        let mut out = self.clone();
        for (&b, c) in &other.terms {
            out.add_term(b, c.clone());
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &Multivector) -> Result<Multivector, FormError> {
        self.try_add(&other.scale(&-Rational::one()))
    }

    pub fn wedge(&self, other: &Multivector) -> Result<Multivector, FormError> {
        self.check_ambient(other)?;
        let mut out = Self::zero(self.ambient);
        for (&a, ca) in &self.terms {
            for (&b, cb) in &other.terms {
                if let Some((neg, blade)) = a.wedge(b) {
                    let c = ca * cb;
                    out.add_term(blade, if neg { -c } else { c });
                }
            }
        }
        Ok(out)
    }

    /// `self ^ self ^ ... ^ self` (`k` factors); the unit for `k = 0`.
    pub fn wedge_power(&self, k: usize) -> Multivector {
        let mut out = Self::one(self.ambient);
        for _ in 0..k {
            out = out.wedge(self).expect("same ambient");
        }
        out
    }
}

impl fmt::Debug for Multivector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = (1..=self.ambient).map(|i| format!("e{i}")).collect();
        write!(f, "Multivector({})", format_form(self, &names))
    }
}

/// Render in the form grammar accepted by [`parse_form`].
pub fn format_form<S: AsRef<str>>(mv: &Multivector, names: &[S]) -> String {
    if mv.is_zero() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (i, (blade, coeff)) in mv.terms().enumerate() {
        let negative = coeff.is_negative();
        let magnitude = coeff.abs();
        match (i, negative) {
            (0, true) => out.push('-'),
            (0, false) => {}
            (_, true) => out.push_str(" - "),
            (_, false) => out.push_str(" + "),
        }
        let monomial: Vec<&str> = blade.indices().iter().map(|&g| names[g].as_ref()).collect();
        let monomial = monomial.join("^");
        if monomial.is_empty() {
            out.push_str(&format_rational(&magnitude));
        } else if magnitude.is_one() {
            out.push_str(&monomial);
        } else {
            out.push_str(&format_rational(&magnitude));
            out.push(' ');
            out.push_str(&monomial);
        }
    }
    out
}

/// Parse a form such as `"x1^y1 + x2^x3 - 3/2 y2^y3"` over the ordered `names`.
///
/// Grammar: `form := term (('+'|'-') term)*`, `term := [rational] monomial | rational`,
/// `rational := integer ['/' positive-integer]`, `monomial := name ('^' name)*`.
/// The first term may carry a leading sign. Whitespace is ignored.
pub fn parse_form<S: AsRef<str>>(text: &str, names: &[S]) -> Result<Multivector, FormError> {
    if names.len() > MAX_GENERATORS {
        return Err(FormError::TooManyGenerators {
            count: names.len(),
            limit: MAX_GENERATORS,
        });
    }
    let index: BTreeMap<&str, usize> = names
        .iter()
        .enumerate()
        .map(|(i, n)| (n.as_ref(), i))
        .collect();
    let mut p = FormParser {
        src: text,
        pos: 0,
        names: &index,
        ambient: names.len(),
    };
    p.form()
}

struct FormParser<'a> {
    src: &'a str,
    pos: usize,
    names: &'a BTreeMap<&'a str, usize>,
    ambient: usize,
}

fn is_name_start(c: char) -> bool {
    c.is_ascii_alphabetic() || c == '_'
}

fn is_name_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_'
}

impl FormParser<'_> {
    fn peek(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn skip_ws(&mut self) {
        while let Some(c) = self.peek() {
            if !c.is_whitespace() {
                break;
            }
            self.pos += c.len_utf8();
        }
    }

    fn syntax(&self, reason: &str) -> FormError {
        FormError::Syntax {
            pos: self.pos,
            reason: reason.to_string(),
        }
    }

    fn form(&mut self) -> Result<Multivector, FormError> {
        let mut out = Multivector::zero(self.ambient);
        self.skip_ws();
        let mut negative = match self.peek() {
            Some('-') => {
                self.pos += 1;
                true
            }
            Some('+') => {
                self.pos += 1;
                false
            }
            _ => false,
        };
        loop {
            let (blade, coeff) = self.term()?;
            out.add_term(blade, if negative { -coeff } else { coeff });
            self.skip_ws();
            match self.peek() {
                None => return Ok(out),
                Some('+') => negative = false,
                Some('-') => negative = true,
                Some(_) => return Err(self.syntax("expected `+`, `-` or end of input")),
            }
            self.pos += 1;
        }
    }

    fn digits(&mut self) -> &str {
        let start = self.pos;
        while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            self.pos += 1;
        }
        &self.src[start..self.pos]
    }

    fn term(&mut self) -> Result<(Blade, Rational), FormError> {
        self.skip_ws();
        let start = self.pos;
        let mut coeff = None;
        if matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            let num: BigInt = self.digits().parse().expect("ascii digits");
            self.skip_ws();
            let mut q = Rational::from_integer(num);
            if self.peek() == Some('/') {
                self.pos += 1;
                self.skip_ws();
                let den_pos = self.pos;
                let den = self.digits();
                if den.is_empty() {
                    return Err(FormError::MalformedRational {
                        pos: den_pos,
                        reason: "missing denominator".into(),
                    });
                }
                let den: BigInt = den.parse().expect("ascii digits");
                if den.is_zero() {
                    return Err(FormError::MalformedRational {
                        pos: den_pos,
                        reason: "zero denominator".into(),
                    });
                }
                q /= Rational::from_integer(den);
            }
            self.skip_ws();
            coeff = Some(q);
        }
        let (blade, negated) = if matches!(self.peek(), Some(c) if is_name_start(c)) {
            self.monomial()?
        } else if coeff.is_some() {
            (Blade::EMPTY, false)
        } else {
            self.pos = start;
            return Err(self.syntax("expected a coefficient or a monomial"));
        };
        let coeff = coeff.unwrap_or_else(Rational::one);
        Ok((blade, if negated { -coeff } else { coeff }))
    }

    /// Canonical blade of a monomial plus whether reordering flipped the sign.
    fn monomial(&mut self) -> Result<(Blade, bool), FormError> {
        let mut blade = Blade::EMPTY;
        let mut negated = false;
        loop {
            let (g, at, name) = self.name()?;
            match blade.wedge(Blade::generator(g)) {
                Some((neg, b)) => {
                    blade = b;
                    negated ^= neg;
                }
                None => {
                    return Err(FormError::RepeatedGenerator {
                        name: name.to_string(),
                        pos: at,
                    })
                }
            }
            self.skip_ws();
            if self.peek() != Some('^') {
                return Ok((blade, negated));
            }
            self.pos += 1;
        }
    }
}

impl FormParser<'_> {
    fn name(&mut self) -> Result<(usize, usize, &str), FormError> {
        self.skip_ws();
        let start = self.pos;
        match self.peek() {
            Some(c) if is_name_start(c) => {}
            _ => return Err(self.syntax("expected a generator name")),
        }
        while matches!(self.peek(), Some(c) if is_name_char(c)) {
            self.pos += 1;
        }
        let name = &self.src[start..self.pos];
        match self.names.get(name) {
            Some(&g) => Ok((g, start, name)),
            None => Err(FormError::UnknownGenerator {
                name: name.to_string(),
                pos: start,
            }),
        }
    }
}
