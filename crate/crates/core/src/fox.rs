//! Free differential calculus.

use num_traits::One;
use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::matrix::GroupRingMatrix;
use crate::ring::GroupRingElement;
use crate::word::{generator_of, Word};

/// Fox derivative `∂w/∂g` for a reduced word `w` and 0-based generator `g`.
pub fn fox_derivative(w: &Word, generator: usize, generator_count: usize) -> Result<GroupRingElement> {
    if generator >= generator_count {
        return Err(Error::UnknownGenerator { index: generator as i64, count: generator_count });
    }
    if let Some(g) = w.max_generator() {
        if g >= generator_count {
            return Err(Error::UnknownGenerator { index: g as i64, count: generator_count });
        }
    }
    let one = BigRational::one();
    let minus_one = -one.clone();
    let mut out = GroupRingElement::zero();
    let letters = w.letters();
    for (k, &l) in letters.iter().enumerate() {
        if generator_of(l) != generator {
            continue;
        }
        if l > 0 {
            // prefix x_1..x_{k-1}
            out.add_term(prefix(letters, k), &one);
        } else {
            // -prefix·g⁻¹, i.e. minus the prefix including this letter
            out.add_term(prefix(letters, k + 1), &minus_one);
        }
    }
    Ok(out)
}

fn prefix(letters: &[i32], len: usize) -> Word {
    Word::from_reduced_unchecked(letters[..len].iter().copied().collect())
}

/// Jacobian `(∂r_j/∂g_i)`: one row per relator, one column per generator.
pub fn fox_jacobian(relators: &[Word], generator_count: usize) -> Result<GroupRingMatrix> {
    let mut entries = Vec::with_capacity(relators.len() * generator_count);
    for r in relators {
        for g in 0..generator_count {
            entries.push(fox_derivative(r, g, generator_count)?);
        }
    }
    GroupRingMatrix::new(relators.len(), generator_count, entries)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::default_names;

    fn el(s: &str) -> GroupRingElement {
        GroupRingElement::parse(s, &default_names(2)).unwrap()
    }

    fn commutator() -> Word {
        Word::commutator(&Word::generator(0), &Word::generator(1))
    }

    #[test]
    fn commutator_derivatives() {
        assert_eq!(fox_derivative(&commutator(), 0, 2).unwrap(), el("1 - a*b*a^-1"));
        assert_eq!(fox_derivative(&commutator(), 1, 2).unwrap(), el("a - a*b*a^-1*b^-1"));
    }

    #[test]
    fn derivative_of_other_generator_vanishes() {
        assert!(fox_derivative(&Word::generator(0), 1, 2).unwrap().is_zero());
    }

    #[test]
    fn power_and_inverse() {
        let a3 = Word::generator(0).pow(3);
        assert_eq!(fox_derivative(&a3, 0, 1).unwrap(), GroupRingElement::parse("1 + a + a^2", &default_names(1)).unwrap());
        let ai = Word::generator(0).inverse();
        assert_eq!(fox_derivative(&ai, 0, 1).unwrap(), GroupRingElement::parse("-a^-1", &default_names(1)).unwrap());
    }

    #[test]
    fn unknown_generator() {
        assert!(fox_derivative(&commutator(), 2, 2).is_err());
        assert!(fox_derivative(&commutator(), 0, 1).is_err());
    }
}
