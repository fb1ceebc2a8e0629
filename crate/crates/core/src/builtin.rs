//! Demonstration corpora and the hand-written grammars that go with them.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::grammar::{sentence, Corpus, Grammar};
use crate::induction::initial_grammar;
use crate::io::parse_grammar;

pub const DEMO_CORPORA: [&str; 3] = ["xyz1", "xyz2", "kick-bucket"];

pub const BUILTIN_GRAMMARS: [&str; 11] = [
    "xxd",
    "listing-xyz1",
    "listing-xyz2",
    "xyz-three-row",
    "g0",
    "gv1",
    "gv0",
    "gv1n1",
    "gv0n1",
    "gv1n0",
    "gv0n0",
];

const XYZ1: [&str; 6] = ["X a 0", "Y c 1", "X b 0", "X c 0", "Y a 0", "Y b 0"];
const XYZ2_EXTRA: [&str; 6] = ["Z a 0", "W c 0", "Z b 0", "Z c 0", "W a 0", "W b 0"];

pub fn verbs() -> Vec<String> {
    std::iter::once("kick".to_string()).chain((1..=9).map(|j| format!("v_{j}"))).collect()
}

pub fn nouns() -> Vec<String> {
    std::iter::once("bucket".to_string()).chain((1..=99).map(|i| format!("n_{i}"))).collect()
}

pub const IDIOM: &str = "kick bucket action die object nil";

/// `v n action v object n` for every verb and noun, except that "kick
/// bucket" means die.
fn kick_bucket() -> Corpus {
    let mut out = Vec::with_capacity(1000);
    for v in verbs() {
        for n in nouns() {
            if v == "kick" && n == "bucket" {
                out.push(sentence(IDIOM));
            } else {
                out.push(sentence(&format!("{v} {n} action {v} object {n}")));
            }
        }
    }
    Corpus::from_sentences(out)
}

pub fn demo_corpus(name: &str) -> Result<Corpus> {
    match name {
        "xyz1" => Ok(Corpus::from_sentences(XYZ1.map(sentence))),
        "xyz2" => Ok(Corpus::from_sentences(XYZ1.iter().chain(&XYZ2_EXTRA).map(|s| sentence(s)))),
        "kick-bucket" => Ok(kick_bucket()),
        _ => Err(Error::UnknownName(format!("demo corpus {name:?}"))),
    }
}

fn alternatives(items: &[String]) -> String {
    items.join(" | ")
}

fn row(verb: &str, noun: &str) -> String {
    format!("{{ {verb} }} {{ {noun} }} {{ action }} {{ {verb} }} {{ object }} {{ {noun} }}\n")
}

const IDIOM_ROW: &str = "{ kick } { bucket } { action } { die } { object } { nil }\n";

fn grammar_text(name: &str) -> Option<String> {
    let v1 = format!("V(1) = {{ {} }}\n", alternatives(&verbs()[1..]));
    let n1 = format!("N(1) = {{ {} }}\n", alternatives(&nouns()[1..]));
    let mut t = String::new();
    match name {
        "xxd" => t.push_str("X = { a | b }\n{ X } { X | d }\n"),
        "listing-xyz1" => {
            let _ = writeln!(t, "{{ {} }}", XYZ1.join(" | "));
        }
        "listing-xyz2" => {
            let all: Vec<&str> = XYZ1.iter().chain(&XYZ2_EXTRA).copied().collect();
            let _ = writeln!(t, "{{ {} }}", all.join(" | "));
        }
        "xyz-three-row" => t.push_str("{ X | Y | Z | W } { a | b } { 0 }\n{ Y } { c } { 1 }\n{ X | Z | W } { c } { 0 }\n"),
        "gv1" => {
            t.push_str(&v1);
            for n in nouns() {
                t.push_str(&row("V(1)", &n));
            }
            t.push_str(IDIOM_ROW);
            for n in &nouns()[1..] {
                t.push_str(&row("kick", n));
            }
        }
        "gv0" => {
            t.push_str(&v1);
            t.push_str("V(0) = { kick | V(1) }\n");
            t.push_str(&row("V(1)", "bucket"));
            for n in &nouns()[1..] {
                t.push_str(&row("V(0)", n));
            }
            t.push_str(IDIOM_ROW);
        }
        "gv1n1" => {
            t.push_str(&v1);
            t.push_str(&n1);
            t.push_str(&row("V(1)", "bucket"));
            t.push_str(&row("V(1)", "N(1)"));
            t.push_str(IDIOM_ROW);
            t.push_str(&row("kick", "N(1)"));
        }
        "gv0n1" => {
            t.push_str("V(0) = { kick | V(1) }\n");
            t.push_str(&v1);
            t.push_str(&n1);
            t.push_str(&row("V(0)", "N(1)"));
            t.push_str(&row("V(1)", "bucket"));
            t.push_str(IDIOM_ROW);
        }
        "gv1n0" => {
            t.push_str(&v1);
            t.push_str(&n1);
            t.push_str("N(0) = { bucket | N(1) }\n");
            t.push_str(&row("V(1)", "N(0)"));
            t.push_str(&row("kick", "N(1)"));
            t.push_str(IDIOM_ROW);
        }
        "gv0n0" => {
            let _ = writeln!(t, "V = {{ {} }}", alternatives(&verbs()));
            let _ = writeln!(t, "N = {{ {} }}", alternatives(&nouns()));
            t.push_str(&row("V", "N"));
            t.push_str(IDIOM_ROW);
        }
        _ => return None,
    }
    Some(t)
}

/// A hand-written grammar by name. `g0` is the initial grammar of the
/// kick-bucket corpus; the `gv*` grammars are the intermediate and final
/// grammars of induction on it.
pub fn builtin_grammar(name: &str) -> Result<Grammar> {
    if name == "g0" {
        return initial_grammar(&kick_bucket());
    }
    match grammar_text(name) {
        Some(text) => parse_grammar(&text),
        None => Err(Error::UnknownName(format!("grammar {name:?}"))),
    }
}
