//! Finite presentations `⟨S | R⟩`.

use std::collections::HashSet;

use crate::error::{Error, Result};
use crate::ring::parse_word;
use crate::word::Word;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Presentation {
    generator_names: Vec<String>,
    relators: Vec<Word>,
}

impl Presentation {
    pub fn new(generator_names: Vec<String>, relators: Vec<Word>) -> Result<Self> {
        let mut seen = HashSet::new();
        for name in &generator_names {
            let valid = name.chars().next().is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
                && name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_');
            if !valid {
                return Err(Error::InvalidInput(format!("bad generator name `{name}`")));
            }
            if !seen.insert(name.as_str()) {
                return Err(Error::InvalidInput(format!("duplicate generator name `{name}`")));
            }
        }
        for r in &relators {
            if r.is_identity() {
                return Err(Error::InvalidInput("relator reduces to the identity".into()));
            }
            if let Some(g) = r.max_generator() {
                if g >= generator_names.len() {
                    return Err(Error::UnknownGenerator { index: g as i64 + 1, count: generator_names.len() });
                }
            }
        }
        Ok(Self { generator_names, relators })
    }

    /// Builds a presentation from generator names and relator strings like `a*b*a^-1*b^-1`.
    pub fn parse<S: AsRef<str>>(generator_names: &[S], relators: &[S]) -> Result<Self> {
        let names: Vec<String> = generator_names.iter().map(|s| s.as_ref().trim().to_string()).collect();
        let relators = relators.iter().map(|r| parse_word(r.as_ref(), &names)).collect::<Result<Vec<_>>>()?;
        Self::new(names, relators)
    }

    pub fn generator_count(&self) -> usize {
        self.generator_names.len()
    }

    pub fn generator_names(&self) -> &[String] {
        &self.generator_names
    }

    pub fn relators(&self) -> &[Word] {
        &self.relators
    }

    /// The symmetric generating set `S = S⁻¹`, as `[a, a⁻¹, b, b⁻¹, ...]`.
    pub fn symmetric_generating_set(&self) -> Vec<Word> {
        (0..self.generator_count())
            .flat_map(|i| {
                let g = Word::generator(i);
                [g.clone(), g.inverse()]
            })
            .collect()
    }

    /// Same generators, relators extended by `extra` (a quotient by their normal closure).
    pub fn with_extra_relators(&self, extra: &[Word]) -> Result<Self> {
        let mut relators = self.relators.clone();
        relators.extend(extra.iter().cloned());
        Self::new(self.generator_names.clone(), relators)
    }

    /// Whether the presentation 2-complex is known to be aspherical: free
    /// groups, and one-relator presentations whose relator is not a proper
    /// power (Lyndon).
    pub fn is_known_aspherical(&self) -> bool {
        match self.relators.as_slice() {
            [] => true,
            [r] => !r.cyclically_reduced().is_proper_power(),
            _ => false,
        }
    }

    pub fn free_group(rank: usize) -> Self {
        Self::new(crate::ring::default_names(rank), Vec::new()).expect("valid")
    }

    /// `⟨a | a^order⟩`.
    pub fn cyclic(order: usize) -> Self {
        Self::new(vec!["a".into()], vec![Word::generator(0).pow(order as i64)]).expect("valid")
    }

    /// Closed orientable surface group `⟨a1, b1, ... | [a1,b1]...[ag,bg]⟩`;
    /// genus 2 uses the names `a, b, c, d`.
    pub fn surface_group(genus: usize) -> Self {
        let names = crate::ring::default_names(2 * genus);
        let relator = (0..genus).fold(Word::identity(), |acc, i| {
            acc.mul(&Word::commutator(&Word::generator(2 * i), &Word::generator(2 * i + 1)))
        });
        let relators = if genus == 0 { vec![] } else { vec![relator] };
        Self::new(names, relators).expect("valid")
    }
}
