//! Freely reduced words over a symmetric alphabet.
//!
//! A letter is a nonzero signed integer: `i + 1` is generator `i` and
//! `-(i + 1)` its inverse. Words are always kept freely reduced.

use std::cmp::Ordering;
use std::fmt;

use smallvec::SmallVec;

use crate::error::{Error, Result};

pub type Letter = i32;

/// Letter for generator `index` (0-based).
pub fn letter(index: usize) -> Letter {
    index as Letter + 1
}

/// Letter for the inverse of generator `index` (0-based).
pub fn inverse_letter(index: usize) -> Letter {
    -(index as Letter + 1)
}

/// 0-based generator index of a letter.
pub fn generator_of(l: Letter) -> usize {
    (l.unsigned_abs() - 1) as usize
}

// a < a^-1 < b < b^-1 < ...
fn letter_key(l: Letter) -> u32 {
    2 * (l.unsigned_abs() - 1) + u32::from(l < 0)
}

#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Word(SmallVec<[Letter; 8]>);

impl Word {
    pub fn identity() -> Self {
        Word(SmallVec::new())
    }

    pub fn generator(index: usize) -> Self {
        Word(smallvec::smallvec![letter(index)])
    }

    /// Freely reduces `letters`, checking every index against `generator_count`.
    pub fn reduce(letters: &[Letter], generator_count: usize) -> Result<Self> {
        let mut out: SmallVec<[Letter; 8]> = SmallVec::with_capacity(letters.len());
        for &l in letters {
            if l == 0 || generator_of(l) >= generator_count {
                return Err(Error::UnknownGenerator { index: l as i64, count: generator_count });
            }
            if out.last() == Some(&-l) {
                out.pop();
            } else {
                out.push(l);
            }
        }
        Ok(Word(out))
    }

    pub(crate) fn from_reduced_unchecked(letters: SmallVec<[Letter; 8]>) -> Self {
        debug_assert!(letters.windows(2).all(|w| w[0] != -w[1]));
        Word(letters)
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_identity(&self) -> bool {
        self.0.is_empty()
    }

    pub fn inverse(&self) -> Self {
        Word(self.0.iter().rev().map(|&l| -l).collect())
    }

    /// Reduced product `self * other`.
    pub fn mul(&self, other: &Word) -> Word {
        let a = &self.0;
        let b = &other.0;
        let mut k = 0;
        while k < a.len() && k < b.len() && a[a.len() - 1 - k] == -b[k] {
            k += 1;
        }
        let mut out: SmallVec<[Letter; 8]> = SmallVec::with_capacity(a.len() + b.len() - 2 * k);
        out.extend_from_slice(&a[..a.len() - k]);
        out.extend_from_slice(&b[k..]);
        Word(out)
    }

    pub fn pow(&self, exponent: i64) -> Word {
        let base = if exponent < 0 { self.inverse() } else { self.clone() };
        let mut out = Word::identity();
        for _ in 0..exponent.unsigned_abs() {
            out = out.mul(&base);
        }
        out
    }

    /// Commutator `u v u^-1 v^-1`.
    pub fn commutator(u: &Word, v: &Word) -> Word {
        u.mul(v).mul(&u.inverse()).mul(&v.inverse())
    }

    /// Largest 0-based generator index used, if any.
    pub fn max_generator(&self) -> Option<usize> {
        self.0.iter().map(|&l| generator_of(l)).max()
    }

    /// Cyclic reduction: strips matching first/last letters `x ... x^-1`.
    pub fn cyclically_reduced(&self) -> Word {
        let s = &self.0;
        let (mut lo, mut hi) = (0, s.len());
        while hi - lo >= 2 && s[lo] == -s[hi - 1] {
            lo += 1;
            hi -= 1;
        }
        Word(SmallVec::from_slice(&s[lo..hi]))
    }

    /// True when the word is `u^k` for some word `u` and `k >= 2`.
    pub fn is_proper_power(&self) -> bool {
        let s = &self.0;
        let n = s.len();
        (1..n).filter(|p| n % p == 0).any(|p| (p..n).all(|i| s[i] == s[i - p]))
    }

    /// Renders the word using `names`, e.g. `a*b^-1`; the identity prints as `1`.
    pub fn to_text(&self, names: &[String]) -> String {
        if self.0.is_empty() {
            return "1".to_string();
        }
        self.0
            .iter()
            .map(|&l| {
                let name = &names[generator_of(l)];
                if l > 0 {
                    name.clone()
                } else {
                    format!("{name}^-1")
                }
            })
            .collect::<Vec<_>>()
            .join("*")
    }
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0
            .len()
            .cmp(&other.0.len())
            .then_with(|| self.0.iter().map(|&l| letter_key(l)).cmp(other.0.iter().map(|&l| letter_key(l))))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Word{:?}", self.0.as_slice())
    }
}
