//! Description length by symbol counting.
//!
//! Every symbol, class name, `{`, `}`, `|`, `=` and `,` counts one; line
//! breaks count nothing. Rule boundaries are not charged, and neither is the
//! constant-size generator that interprets grammars.

use crate::error::{Error, Result};
use crate::generator::coverage;
use crate::grammar::{ensure_valid, ClassBody, ClassDef, Corpus, Grammar, InlineClass, Rule, Term};

pub const DEFAULT_PENALTY: usize = 10;

pub trait DescriptionLength {
    fn dl(&self) -> usize;
}

impl DescriptionLength for Term {
    fn dl(&self) -> usize {
        match self {
            Term::Seq(s) => s.len(),
            Term::Ref(_) => 1,
        }
    }
}

impl DescriptionLength for InlineClass {
    fn dl(&self) -> usize {
        2 + self.alts.iter().map(Term::dl).sum::<usize>() + self.alts.len().saturating_sub(1)
    }
}

impl DescriptionLength for ClassDef {
    fn dl(&self) -> usize {
        2 + match &self.body {
            ClassBody::Alternatives(c) => c.dl(),
            ClassBody::Concat(parts) => parts.iter().map(InlineClass::dl).sum(),
            ClassBody::Rename(_) => 1,
        }
    }
}

impl DescriptionLength for Rule {
    fn dl(&self) -> usize {
        self.body.iter().map(InlineClass::dl).sum()
    }
}

impl DescriptionLength for Grammar {
    fn dl(&self) -> usize {
        self.defs.iter().map(ClassDef::dl).sum::<usize>() + self.rules.iter().map(Rule::dl).sum::<usize>()
    }
}

pub fn term_dl<T: DescriptionLength + ?Sized>(item: &T) -> usize {
    item.dl()
}

pub fn grammar_dl(grammar: &Grammar) -> Result<usize> {
    ensure_valid(grammar)?;
    Ok(grammar.dl())
}

pub use crate::tuple::MeaningTable;

pub fn table_dl(table: &MeaningTable) -> usize {
    table.dl()
}

/// Grammar size plus a linear charge for every generated sentence that is
/// not in the corpus.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DlReport {
    pub grammar_dl: usize,
    pub overgen_count: usize,
    pub penalty: usize,
    pub total: usize,
}

impl DlReport {
    pub fn new(grammar_dl: usize, overgen_count: usize, penalty: usize) -> DlReport {
        DlReport {
            grammar_dl,
            overgen_count,
            penalty,
            total: grammar_dl + penalty * overgen_count,
        }
    }
}

pub fn total_dl(grammar: &Grammar, corpus: &Corpus, penalty: usize, limit: usize) -> Result<DlReport> {
    let g = grammar_dl(grammar)?;
    let cov = coverage(grammar, corpus, limit)?;
    if !cov.missing.is_empty() {
        return Err(Error::Coverage(cov.missing.into_iter().collect()));
    }
    Ok(DlReport::new(g, cov.extra.len(), penalty))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grammar::{sym, Symbol};

    fn words(ws: &[&str]) -> Vec<Term> {
        ws.iter().map(|w| Term::word(sym(w))).collect()
    }

    fn indexed(prefix: &str, range: std::ops::RangeInclusive<usize>) -> Vec<Term> {
        range.map(|i| Term::word(sym(&format!("{prefix}{i}")))).collect()
    }

    #[test]
    fn inline_class_counts_braces_bars_and_symbols() {
        let c = InlineClass::new(vec![
            Term::word(sym("a")),
            Term::word(sym("b")),
            Term::Seq(vec![sym("a"), sym("c")]),
        ]);
        assert_eq!(term_dl(&c), 8);
    }

    #[test]
    fn singleton_term_costs_length_plus_two() {
        for k in 1..6 {
            let t: Vec<Symbol> = (0..k).map(|i| sym(&format!("s{i}"))).collect();
            assert_eq!(InlineClass::new(vec![Term::Seq(t)]).dl(), k + 2);
        }
    }

    #[test]
    fn definition_sizes() {
        assert_eq!(ClassDef::alternatives(sym("N(1)"), indexed("n_", 1..=99)).dl(), 201);
        assert_eq!(ClassDef::alternatives(sym("V(1)"), indexed("v_", 1..=9)).dl(), 21);
        assert_eq!(ClassDef::alternatives(sym("V"), words(&["v_1", "v_2"])).dl(), 7);
        let concat = ClassDef {
            name: sym("X"),
            body: ClassBody::Concat(vec![InlineClass::word(sym("a")), InlineClass::word(sym("b"))]),
        };
        assert_eq!(concat.dl(), 8);
        let rename = ClassDef { name: sym("N1"), body: ClassBody::Rename(sym("N")) };
        assert_eq!(rename.dl(), 3);
    }

    #[test]
    fn rule_sizes() {
        let r = Rule::new(vec![
            InlineClass::new(words(&["X", "Y", "Z", "W"])),
            InlineClass::new(words(&["a", "b"])),
            InlineClass::word(sym("0")),
        ]);
        assert_eq!(r.dl(), 17);
        let six = Rule::from_words(&["kick", "bucket", "action", "die", "object", "nil"].map(sym));
        assert_eq!(six.dl(), 18);
    }

    #[test]
    fn report_total_is_never_below_grammar_dl() {
        let r = DlReport::new(262, 1, 10);
        assert_eq!(r.total, 272);
        assert!(r.total >= r.grammar_dl);
        assert_eq!(DlReport::new(5, 0, 0).total, 5);
    }
}
