//! Checks shared by the property suite and the acceptance target.

#![allow(dead_code)]

use std::collections::BTreeSet;

use mdlcomp::canon::canonicalize;
use mdlcomp::generator::{derives, enumerate_language, DEFAULT_LIMIT};
use mdlcomp::grammar::{sym, Corpus, Sentence, Symbol};
use mdlcomp::induction::{induce, initial_grammar, InductionConfig, Variant};
use proptest::collection::vec;
use proptest::prelude::*;

pub const VOCABULARY: usize = 12;

pub fn word(i: usize) -> Symbol {
    sym(&format!("w{i}"))
}

/// Up to 40 sentences of one to four words over a twelve-word vocabulary.
pub fn small_corpus() -> impl Strategy<Value = Corpus> {
    vec(vec(0..VOCABULARY, 1..=4), 1..=40)
        .prop_map(|rows| Corpus::from_sentences(rows.into_iter().map(|r| r.into_iter().map(word).collect())))
}

/// Every corpus sentence, and every sentence one word away from one.
fn probes(corpus: &Corpus) -> BTreeSet<Sentence> {
    let mut out = BTreeSet::new();
    for s in corpus.distinct() {
        out.insert(s.clone());
        for i in 0..s.len() {
            for w in 0..VOCABULARY {
                let mut t = s.clone();
                t[i] = word(w);
                out.insert(t);
            }
        }
    }
    out
}

/// Runs both strict variants and returns a description of every broken
/// invariant.
pub fn strict_violations(corpus: &Corpus) -> Vec<String> {
    let mut bad = Vec::new();
    let target: BTreeSet<Sentence> = corpus.distinct().cloned().collect();

    let g0 = initial_grammar(corpus).unwrap();
    let c0 = canonicalize(&g0, DEFAULT_LIMIT).unwrap();
    if canonicalize(&c0, DEFAULT_LIMIT).unwrap() != c0 {
        bad.push("canonicalize is not idempotent on the initial grammar".into());
    }

    for v in [Variant::VeryGreedy, Variant::Partial] {
        let (g, trace) = match induce(corpus, &InductionConfig::new(v)) {
            Ok(r) => r,
            Err(e) => {
                bad.push(format!("{v}: induction failed: {e}"));
                continue;
            }
        };
        let lang = enumerate_language(&g, DEFAULT_LIMIT).unwrap();
        if lang != target {
            bad.push(format!("{v}: language differs from the corpus"));
        }
        let mut last = trace.initial_dl;
        for r in &trace.records {
            if r.dl_before != last || r.dl_after >= r.dl_before || r.overgen_count != 0 {
                bad.push(format!("{v}: trace step {} does not strictly decrease", r.iteration));
            }
            last = r.dl_after;
        }
        if canonicalize(&g, DEFAULT_LIMIT).unwrap() != g {
            bad.push(format!("{v}: canonicalize is not idempotent on the result"));
        }
        for s in probes(corpus) {
            if derives(&g, &s) != lang.contains(&s) {
                bad.push(format!("{v}: derives disagrees with enumeration"));
                break;
            }
        }
    }
    bad
}
