//! Chains of finite quotients `G/N_1, G/N_2, ...` and their representations.

use rayon::prelude::*;
use serde::Serialize;

use crate::coset::{todd_coxeter, CosetTable};
use crate::error::{Error, Result};
use crate::presentation::Presentation;
use crate::representation::Representation;
use crate::word::{inverse_letter, letter, Letter, Word};

pub const DEFAULT_BALL_RADIUS: usize = 6;

#[derive(Clone, Debug)]
pub struct QuotientMember {
    /// Words whose normal closure is `N_i`.
    pub extra_relators: Vec<Word>,
    pub table: CosetTable,
    pub representation: Representation,
}

impl QuotientMember {
    /// `[G : N_i]`.
    pub fn index(&self) -> usize {
        self.table.coset_count()
    }
}

/// Result of testing `∩ N_i = {e}` on a ball of reduced words.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SeparationReport {
    pub radius: usize,
    pub words_checked: u64,
    /// Nontrivial words of length ≤ radius that act trivially in every quotient.
    pub unseparated: u64,
    pub examples: Vec<String>,
}

impl SeparationReport {
    pub fn separated(&self) -> bool {
        self.unseparated == 0
    }
}

#[derive(Clone, Debug)]
pub struct QuotientChain {
    pub members: Vec<QuotientMember>,
    pub separation: SeparationReport,
    pub warnings: Vec<String>,
}

impl QuotientChain {
    pub fn indices(&self) -> Vec<usize> {
        self.members.iter().map(QuotientMember::index).collect()
    }

    pub fn representations(&self) -> Vec<&Representation> {
        self.members.iter().map(|m| &m.representation).collect()
    }
}

/// Extra relators `g^m`, `[g_i, g_j]` whose quotient is `(ℤ/m)^n`.
pub fn abelian_quotient_relators(generator_count: usize, m: i64) -> Vec<Word> {
    let gens: Vec<Word> = (0..generator_count).map(Word::generator).collect();
    let mut spec: Vec<Word> = gens.iter().map(|g| g.pow(m)).collect();
    for i in 0..generator_count {
        for j in i + 1..generator_count {
            spec.push(Word::commutator(&gens[i], &gens[j]));
        }
    }
    spec
}

/// Enumerates every quotient (in parallel), checks that indices strictly
/// increase and reports residual separation on the word ball of `ball_radius`.
pub fn quotient_chain(
    p: &Presentation,
    chain_spec: &[Vec<Word>],
    ball_radius: usize,
    max_cosets: usize,
) -> Result<QuotientChain> {
    if chain_spec.is_empty() {
        return Err(Error::InvalidInput("quotient chain is empty".into()));
    }
    let members = chain_spec
        .par_iter()
        .enumerate()
        .map(|(i, extra)| {
            let table = todd_coxeter(p, extra, max_cosets)?;
            let representation = Representation::from_coset_table(&table, format!("lambda_{}", i + 1));
            Ok(QuotientMember { extra_relators: extra.clone(), table, representation })
        })
        .collect::<Result<Vec<_>>>()?;
    for pair in members.windows(2) {
        if pair[1].index() <= pair[0].index() {
            return Err(Error::InvalidInput(format!(
                "quotient indices must strictly increase, got {} then {}",
                pair[0].index(),
                pair[1].index()
            )));
        }
    }
    let tables: Vec<&CosetTable> = members.iter().map(|m| &m.table).collect();
    let separation = separation_check(&tables, p.generator_count(), ball_radius, p.generator_names());
    let mut warnings = Vec::new();
    if !separation.separated() {
        warnings.push(format!(
            "separation fails at radius {}: {} nontrivial word(s) act trivially in every quotient (e.g. {})",
            ball_radius,
            separation.unseparated,
            separation.examples.first().cloned().unwrap_or_default()
        ));
    }
    Ok(QuotientChain { members, separation, warnings })
}

fn separation_check(tables: &[&CosetTable], generator_count: usize, radius: usize, names: &[String]) -> SeparationReport {
    let inverses: Vec<Vec<Vec<usize>>> = tables.iter().map(|t| t.inverse_actions()).collect();
    let letters: Vec<Letter> = (0..generator_count).flat_map(|g| [letter(g), inverse_letter(g)]).collect();
    let mut report = SeparationReport { radius, words_checked: 0, unseparated: 0, examples: Vec::new() };
    let mut word: Vec<Letter> = Vec::with_capacity(radius);
    let mut states: Vec<Vec<usize>> = vec![vec![0; tables.len()]];

    fn visit(
        tables: &[&CosetTable],
        inverses: &[Vec<Vec<usize>>],
        letters: &[Letter],
        radius: usize,
        names: &[String],
        word: &mut Vec<Letter>,
        states: &mut Vec<Vec<usize>>,
        report: &mut SeparationReport,
    ) {
        if word.len() == radius {
            return;
        }
        for &l in letters {
            if word.last() == Some(&-l) {
                continue;
            }
            let g = crate::word::generator_of(l);
            let current = states.last().expect("nonempty");
            let next: Vec<usize> = current
                .iter()
                .enumerate()
                .map(|(q, &c)| if l > 0 { tables[q].action(g)[c] } else { inverses[q][g][c] })
                .collect();
            word.push(l);
            report.words_checked += 1;
            if next.iter().all(|&c| c == 0) {
                report.unseparated += 1;
                if report.examples.len() < 5 {
                    let w = Word::reduce(word, names.len()).expect("valid letters");
                    report.examples.push(w.to_text(names));
                }
            }
            states.push(next);
            visit(tables, inverses, letters, radius, names, word, states, report);
            states.pop();
            word.pop();
        }
    }

    visit(tables, &inverses, &letters, radius, names, &mut word, &mut states, &mut report);
    report
}
