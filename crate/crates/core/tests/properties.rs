mod common;

use common::{small_corpus, strict_violations};
use mdlcomp::canon::canonicalize;
use mdlcomp::dl::DescriptionLength;
use mdlcomp::generator::{enumerate_language, DEFAULT_LIMIT};
use mdlcomp::grammar::listing_grammar;
use mdlcomp::induction::{induce, InductionConfig, Variant};
use mdlcomp::io::{parse_corpus, parse_grammar, serialize_corpus, serialize_grammar, token_count};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn strict_induction_invariants(corpus in small_corpus()) {
        let bad = strict_violations(&corpus);
        prop_assert!(bad.is_empty(), "{bad:?}");
    }

    #[test]
    fn overgen_never_loses_sentences(corpus in small_corpus()) {
        let (g, trace) = induce(&corpus, &InductionConfig::new(Variant::Overgen)).unwrap();
        let lang = enumerate_language(&g, DEFAULT_LIMIT).unwrap();
        prop_assert!(corpus.distinct().all(|s| lang.contains(s)));
        prop_assert!(trace.final_dl() <= trace.initial_dl);
    }

    #[test]
    fn grammar_text_round_trips(corpus in small_corpus()) {
        let (g, _) = induce(&corpus, &InductionConfig::new(Variant::Partial)).unwrap();
        let text = serialize_grammar(&g);
        prop_assert_eq!(token_count(&text), g.dl());
        prop_assert_eq!(parse_grammar(&text).unwrap(), g);
    }

    #[test]
    fn corpus_text_round_trips(corpus in small_corpus()) {
        prop_assert_eq!(parse_corpus(&serialize_corpus(&corpus)).unwrap(), corpus);
    }

    #[test]
    fn listing_grammar_is_already_canonical(corpus in small_corpus()) {
        let g = listing_grammar(&corpus).unwrap();
        prop_assert_eq!(canonicalize(&g, DEFAULT_LIMIT).unwrap(), g);
    }
}
