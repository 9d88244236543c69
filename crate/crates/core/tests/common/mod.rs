#![allow(dead_code)]

use kazlab_core::ring::{rational, GroupRingElement};
use kazlab_core::Word;
use proptest::prelude::*;

pub fn letters(gens: i32, max_len: usize) -> impl Strategy<Value = Vec<i32>> {
    prop::collection::vec((1..=gens, any::<bool>()).prop_map(|(g, neg)| if neg { -g } else { g }), 0..=max_len)
}

pub fn word(gens: i32, max_len: usize) -> impl Strategy<Value = Word> {
    letters(gens, max_len).prop_map(move |l| Word::reduce(&l, gens as usize).unwrap())
}

pub fn element(gens: i32, max_len: usize, max_terms: usize) -> impl Strategy<Value = GroupRingElement> {
    prop::collection::vec((word(gens, max_len), -4i64..=4), 0..=max_terms)
        .prop_map(|terms| GroupRingElement::from_terms(terms.into_iter().map(|(w, c)| (w, rational(c)))))
}
