//! The rational group ring of a free group.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rustc_hash::FxHashMap;

use crate::error::{Error, Result};
use crate::word::{Letter, Word};

/// Finite rational combination of reduced words. Zero coefficients are never
/// stored, and iteration follows the length-lex order of [`Word`].
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct GroupRingElement {
    terms: BTreeMap<Word, BigRational>,
}

pub fn rational(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

impl GroupRingElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::from_word(Word::identity())
    }

    pub fn from_word(w: Word) -> Self {
        Self::term(w, BigRational::one())
    }

    pub fn scalar(c: BigRational) -> Self {
        Self::term(Word::identity(), c)
    }

    pub fn term(w: Word, c: BigRational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(w, c);
        }
        Self { terms }
    }

    pub fn from_terms<I: IntoIterator<Item = (Word, BigRational)>>(iter: I) -> Self {
        let mut x = Self::zero();
        for (w, c) in iter {
            x.add_term(w, &c);
        }
        x
    }

    pub fn add_term(&mut self, w: Word, c: &BigRational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(w) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c.clone());
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn support_len(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &BigRational)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, w: &Word) -> BigRational {
        self.terms.get(w).cloned().unwrap_or_else(BigRational::zero)
    }

    /// Coefficient of the identity, i.e. the canonical trace `<x δ_e, δ_e>`.
    pub fn trace_e(&self) -> BigRational {
        self.coefficient(&Word::identity())
    }

    /// Sum of all coefficients (image under the trivial representation).
    pub fn augmentation(&self) -> BigRational {
        self.terms.values().fold(BigRational::zero(), |acc, c| acc + c)
    }

    /// `Σ |coefficient|`, an upper bound for the norm under any unitary representation.
    pub fn l1_norm(&self) -> BigRational {
        self.terms.values().fold(BigRational::zero(), |acc, c| acc + c.abs())
    }

    /// `g ↦ g⁻¹` extended linearly (coefficients are real).
    pub fn involution(&self) -> Self {
        Self { terms: self.terms.iter().map(|(w, c)| (w.inverse(), c.clone())).collect() }
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self { terms: self.terms.iter().map(|(w, x)| (w.clone(), x * c)).collect() }
    }

    pub fn max_generator(&self) -> Option<usize> {
        self.terms.keys().filter_map(Word::max_generator).max()
    }

    /// Convolution product.
    pub fn mul_ref(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut acc: FxHashMap<Word, BigRational> = FxHashMap::default();
        for (u, x) in &self.terms {
            for (v, y) in &other.terms {
                let c = x * y;
                let w = u.mul(v);
                match acc.get_mut(&w) {
                    Some(slot) => *slot += c,
                    None => {
                        acc.insert(w, c);
                    }
                }
            }
        }
        Self { terms: acc.into_iter().filter(|(_, c)| !c.is_zero()).collect() }
    }

    /// `Σ_w x(w) y(w)`, which equals `trace_e(x y*)`.
    pub fn pairing(&self, other: &Self) -> BigRational {
        let (small, large) = if self.terms.len() <= other.terms.len() { (self, other) } else { (other, self) };
        small
            .terms
            .iter()
            .filter_map(|(w, c)| large.terms.get(w).map(|d| c * d))
            .fold(BigRational::zero(), |acc, v| acc + v)
    }

    /// Textual form such as `3/2*a*b^-1 + 1`.
    pub fn to_text(&self, names: &[String]) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (k, (w, c)) in self.terms.iter().enumerate() {
            let negative = c.is_negative();
            let mag = c.abs();
            if k == 0 {
                if negative {
                    out.push('-');
                }
            } else {
                out.push_str(if negative { " - " } else { " + " });
            }
            if w.is_identity() {
                out.push_str(&mag.to_string());
            } else if mag.is_one() {
                out.push_str(&w.to_text(names));
            } else {
                out.push_str(&format!("{}*{}", mag, w.to_text(names)));
            }
        }
        out
    }

    /// Parses the textual form produced by [`to_text`](Self::to_text). Factors
    /// may also be written `x^k` for any integer `k`.
    pub fn parse(text: &str, names: &[String]) -> Result<Self> {
        let text = text.trim();
        if text.is_empty() {
            return Err(Error::Parse("empty group-ring element".into()));
        }
        let mut result = Self::zero();
        for (sign, term_text) in split_terms(text)? {
            let (coef, word) = parse_term(term_text, names)?;
            result.add_term(word, &(coef * rational(sign)));
        }
        Ok(result)
    }
}

// Splits at top-level `+`/`-`; the minus in `x^-1` belongs to the factor.
fn split_terms(text: &str) -> Result<Vec<(i64, &str)>> {
    let mut terms = Vec::new();
    let mut sign = 1;
    let mut start = 0;
    let mut prev: Option<u8> = None;
    for (i, &b) in text.as_bytes().iter().enumerate() {
        if (b == b'+' || b == b'-') && prev != Some(b'^') {
            if prev.is_some() {
                terms.push((sign, &text[start..i]));
                sign = 1;
            }
            if b == b'-' {
                sign = -sign;
            }
            start = i + 1;
            prev = None;
        } else if !b.is_ascii_whitespace() {
            prev = Some(b);
        }
    }
    if prev.is_none() {
        return Err(Error::Parse(format!("dangling sign or empty term in `{text}`")));
    }
    terms.push((sign, &text[start..]));
    Ok(terms)
}

fn parse_term(text: &str, names: &[String]) -> Result<(BigRational, Word)> {
    let text = text.trim();
    if text.is_empty() {
        return Err(Error::Parse("empty term".into()));
    }
    let mut coef = BigRational::one();
    let mut letters: Vec<Letter> = Vec::new();
    for factor in text.split('*') {
        let factor = factor.trim();
        if factor.is_empty() {
            return Err(Error::Parse(format!("empty factor in `{text}`")));
        }
        if factor.starts_with(|c: char| c.is_ascii_digit()) {
            coef *= parse_rational(factor)?;
        } else {
            parse_power_factor(factor, names, &mut letters)?;
        }
    }
    Ok((coef, Word::reduce(&letters, names.len())?))
}

fn parse_power_factor(factor: &str, names: &[String], letters: &mut Vec<Letter>) -> Result<()> {
    let (name, exponent) = match factor.split_once('^') {
        Some((n, e)) => {
            let e: i64 = e.trim().parse().map_err(|_| Error::Parse(format!("bad exponent in `{factor}`")))?;
            (n.trim(), e)
        }
        None => (factor, 1),
    };
    let index = names
        .iter()
        .position(|n| n == name)
        .ok_or_else(|| Error::UnknownGeneratorName(name.to_string()))?;
    let l = if exponent < 0 { -(index as Letter + 1) } else { index as Letter + 1 };
    letters.extend(std::iter::repeat_n(l, exponent.unsigned_abs() as usize));
    Ok(())
}

/// Parses `p`, `-p` or `p/q`.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("bad rational `{s}`"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(BigRational::new(n, d))
        }
        None => Ok(BigRational::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

/// Parses a single word such as `a*b^-1*a` or `a^3`; `1` is the identity.
pub fn parse_word(text: &str, names: &[String]) -> Result<Word> {
    let text = text.trim();
    if text == "1" {
        return Ok(Word::identity());
    }
    let mut letters = Vec::new();
    for factor in text.split('*') {
        let factor = factor.trim();
        if factor.is_empty() {
            return Err(Error::Parse(format!("empty factor in word `{text}`")));
        }
        parse_power_factor(factor, names, &mut letters)?;
    }
    Word::reduce(&letters, names.len())
}

/// Default generator names: `a, b, c, ...` then `x26, x27, ...`.
pub fn default_names(count: usize) -> Vec<String> {
    (0..count)
        .map(|i| if i < 26 { ((b'a' + i as u8) as char).to_string() } else { format!("x{i}") })
        .collect()
}

impl fmt::Debug for GroupRingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.max_generator().map_or(0, |g| g + 1);
        write!(f, "{}", self.to_text(&default_names(n)))
    }
}

impl Add for &GroupRingElement {
    type Output = GroupRingElement;
    fn add(self, rhs: &GroupRingElement) -> GroupRingElement {
        let mut out = self.clone();
        for (w, c) in &rhs.terms {
            out.add_term(w.clone(), c);
        }
        out
    }
}

impl Sub for &GroupRingElement {
    type Output = GroupRingElement;
    fn sub(self, rhs: &GroupRingElement) -> GroupRingElement {
        let mut out = self.clone();
        for (w, c) in &rhs.terms {
            out.add_term(w.clone(), &-c);
        }
        out
    }
}

impl Neg for &GroupRingElement {
    type Output = GroupRingElement;
    fn neg(self) -> GroupRingElement {
        self.scale(&rational(-1))
    }
}

impl Mul for &GroupRingElement {
    type Output = GroupRingElement;
    fn mul(self, rhs: &GroupRingElement) -> GroupRingElement {
        self.mul_ref(rhs)
    }
}
