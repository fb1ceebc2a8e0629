//! Language generation under unification semantics.
//!
//! Within one derivation every named class is bound to a single alternative,
//! and that binding is applied at every occurrence of the name, including
//! occurrences nested inside other definitions. Anonymous inline classes are
//! chosen independently at each position. A renamed class (`N1 = N`) is its
//! own binding key, so `N1` and `N2 = N` vary independently.

use std::collections::BTreeSet;

use rustc_hash::{FxHashMap as HashMap, FxHashSet as HashSet};

use crate::error::{Error, Result};
use crate::grammar::{ensure_valid, ClassBody, ClassDef, Corpus, Grammar, InlineClass, Rule, Sentence, Symbol, Term};

pub const DEFAULT_LIMIT: usize = 1_000_000;

#[derive(Clone, Copy)]
enum Item<'g> {
    Lit(&'g Symbol),
    Anon(&'g InlineClass),
    Named(usize),
}

#[derive(PartialEq)]
enum Flow {
    Continue,
    Stop,
}

/// Expands rules against a fixed set of class definitions.
pub(crate) struct Expander<'g> {
    defs: Vec<&'g ClassDef>,
    ids: HashMap<&'g Symbol, usize>,
}

struct Run<'g, 'v> {
    target: Option<&'v [Symbol]>,
    out: Vec<Symbol>,
    assign: Vec<Option<usize>>,
    stack: Vec<Item<'g>>,
    visit: &'v mut dyn FnMut(&[Symbol]) -> bool,
}

impl<'g> Expander<'g> {
    pub(crate) fn new<I: IntoIterator<Item = &'g ClassDef>>(defs: I) -> Expander<'g> {
        let defs: Vec<&ClassDef> = defs.into_iter().collect();
        let ids = defs.iter().enumerate().map(|(i, d)| (&d.name, i)).collect();
        Expander { defs, ids }
    }

    pub(crate) fn for_grammar(g: &'g Grammar) -> Expander<'g> {
        Expander::new(g.defs.iter())
    }

    /// Follows rename chains to a body that offers alternatives or a
    /// concatenation.
    fn resolve(&self, mut id: usize) -> &'g ClassBody {
        loop {
            match &self.defs[id].body {
                ClassBody::Rename(t) => id = self.ids[t],
                body => return body,
            }
        }
    }

    fn push_term(&self, t: &'g Term, stack: &mut Vec<Item<'g>>) {
        match t {
            Term::Seq(syms) => stack.extend(syms.iter().rev().map(Item::Lit)),
            Term::Ref(n) => stack.push(Item::Named(self.ids[n])),
        }
    }

    fn step(&self, run: &mut Run<'g, '_>) -> Flow {
        let Some(item) = run.stack.pop() else {
            if let Some(t) = run.target {
                if run.out.len() != t.len() {
                    return Flow::Continue;
                }
            }
            return if (run.visit)(&run.out) { Flow::Continue } else { Flow::Stop };
        };
        let base = run.stack.len();
        let flow = match item {
            Item::Lit(s) => {
                if let Some(t) = run.target {
                    if t.get(run.out.len()) != Some(s) {
                        run.stack.push(item);
                        return Flow::Continue;
                    }
                }
                run.out.push(*s);
                let f = self.step(run);
                run.out.pop();
                f
            }
            Item::Anon(c) => {
                let mut f = Flow::Continue;
                for t in &c.alts {
                    self.push_term(t, &mut run.stack);
                    f = self.step(run);
                    run.stack.truncate(base);
                    if f == Flow::Stop {
                        break;
                    }
                }
                f
            }
            Item::Named(id) => match self.resolve(id) {
                ClassBody::Alternatives(c) => {
                    if let Some(k) = run.assign[id] {
                        self.push_term(&c.alts[k], &mut run.stack);
                        let f = self.step(run);
                        run.stack.truncate(base);
                        f
                    } else {
                        let mut f = Flow::Continue;
                        for (k, t) in c.alts.iter().enumerate() {
                            run.assign[id] = Some(k);
                            self.push_term(t, &mut run.stack);
                            f = self.step(run);
                            run.stack.truncate(base);
                            if f == Flow::Stop {
                                break;
                            }
                        }
                        run.assign[id] = None;
                        f
                    }
                }
                ClassBody::Concat(parts) => {
                    run.stack.extend(parts.iter().rev().map(Item::Anon));
                    let f = self.step(run);
                    run.stack.truncate(base);
                    f
                }
                ClassBody::Rename(_) => unreachable!("resolve strips renames"),
            },
        };
        run.stack.push(item);
        flow
    }

    /// Calls `visit` for every derivation of `rule` (optionally only those
    /// spelling `target`). `visit` returns false to stop early.
    fn derivations(&self, rule: &'g Rule, target: Option<&[Symbol]>, visit: &mut dyn FnMut(&[Symbol]) -> bool) {
        let mut run = Run {
            target,
            out: Vec::new(),
            assign: vec![None; self.defs.len()],
            stack: rule.body.iter().rev().map(Item::Anon).collect(),
            visit,
        };
        self.step(&mut run);
    }

    /// Distinct sentences of one rule, failing past `limit`.
    pub(crate) fn rule_language(&self, rule: &'g Rule, limit: usize) -> Result<HashSet<Sentence>> {
        let mut lang = HashSet::default();
        let mut over = false;
        self.derivations(rule, None, &mut |s| {
            if !lang.contains(s) {
                lang.insert(s.to_vec());
                if lang.len() > limit {
                    over = true;
                    return false;
                }
            }
            true
        });
        if over {
            Err(Error::LimitExceeded { limit, reached: lang.len() })
        } else {
            Ok(lang)
        }
    }

    pub(crate) fn rule_derives(&self, rule: &'g Rule, sentence: &[Symbol]) -> bool {
        let mut found = false;
        self.derivations(rule, Some(sentence), &mut |_| {
            found = true;
            false
        });
        found
    }

    pub(crate) fn count_derivations(&self, rule: &'g Rule) -> usize {
        let mut n = 0;
        self.derivations(rule, None, &mut |_| {
            n += 1;
            true
        });
        n
    }
}

/// Every sentence derivable from any rule under any consistent assignment.
pub fn enumerate_language(grammar: &Grammar, limit: usize) -> Result<BTreeSet<Sentence>> {
    ensure_valid(grammar)?;
    let ex = Expander::for_grammar(grammar);
    let mut lang = BTreeSet::new();
    for r in &grammar.rules {
        let rl = ex.rule_language(r, limit).map_err(|e| match e {
            Error::LimitExceeded { reached, .. } => Error::LimitExceeded {
                limit,
                reached: reached.max(lang.len()),
            },
            e => e,
        })?;
        lang.extend(rl);
        if lang.len() > limit {
            return Err(Error::LimitExceeded { limit, reached: lang.len() });
        }
    }
    Ok(lang)
}

/// Language of a single rule of `grammar`.
pub fn rule_language(grammar: &Grammar, rule_index: usize, limit: usize) -> Result<BTreeSet<Sentence>> {
    ensure_valid(grammar)?;
    let ex = Expander::for_grammar(grammar);
    Ok(ex.rule_language(&grammar.rules[rule_index], limit)?.into_iter().collect())
}

/// Number of derivations of a rule (assignments, counted with repeats).
pub fn derivation_count(grammar: &Grammar, rule_index: usize) -> usize {
    Expander::for_grammar(grammar).count_derivations(&grammar.rules[rule_index])
}

/// Membership by matching, without enumerating the language.
pub fn derives(grammar: &Grammar, sentence: &[Symbol]) -> bool {
    let ex = Expander::for_grammar(grammar);
    grammar.rules.iter().any(|r| ex.rule_derives(r, sentence))
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CoverageReport {
    pub covered: BTreeSet<Sentence>,
    pub missing: BTreeSet<Sentence>,
    pub extra: BTreeSet<Sentence>,
}

impl CoverageReport {
    pub fn is_exact(&self) -> bool {
        self.missing.is_empty() && self.extra.is_empty()
    }
}

pub fn coverage(grammar: &Grammar, corpus: &Corpus, limit: usize) -> Result<CoverageReport> {
    let lang = enumerate_language(grammar, limit)?;
    let mut report = CoverageReport::default();
    for s in corpus.distinct() {
        if lang.contains(s) {
            report.covered.insert(s.clone());
        } else {
            report.missing.insert(s.clone());
        }
    }
    report.extra = lang.into_iter().filter(|s| !corpus.contains(s)).collect();
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grammar::{sentence, sym, ClassDef};

    fn xxd() -> Grammar {
        Grammar::new(
            vec![ClassDef::alternatives(sym("X"), vec![Term::word(sym("a")), Term::word(sym("b"))])],
            vec![Rule::new(vec![
                InlineClass::class_ref(sym("X")),
                InlineClass::new(vec![Term::Ref(sym("X")), Term::word(sym("d"))]),
            ])],
        )
    }

    fn set(items: &[&str]) -> BTreeSet<Sentence> {
        items.iter().map(|s| sentence(s)).collect()
    }

    #[test]
    fn repeated_variable_unifies() {
        let lang = enumerate_language(&xxd(), 100).unwrap();
        assert_eq!(lang, set(&["a a", "a d", "b b", "b d"]));
        assert!(!derives(&xxd(), &sentence("a b")));
        assert!(derives(&xxd(), &sentence("b d")));
    }

    #[test]
    fn single_terminal_rule() {
        let g = Grammar::new(vec![], vec![Rule::from_words(&[sym("a")])]);
        assert_eq!(enumerate_language(&g, 10).unwrap(), set(&["a"]));
    }

    #[test]
    fn xx_never_mixes() {
        let g = Grammar::new(
            vec![ClassDef::alternatives(sym("X"), vec![Term::word(sym("a")), Term::word(sym("b"))])],
            vec![Rule::new(vec![InlineClass::class_ref(sym("X")), InlineClass::class_ref(sym("X"))])],
        );
        assert_eq!(enumerate_language(&g, 10).unwrap(), set(&["a a", "b b"]));
    }

    #[test]
    fn nested_binding_is_global() {
        // V0 = { v0 | V1 }, V1 = { v1 | v2 }; rule { V0 } { V1 }
        let g = Grammar::new(
            vec![
                ClassDef::alternatives(sym("V1"), vec![Term::word(sym("v1")), Term::word(sym("v2"))]),
                ClassDef::alternatives(sym("V0"), vec![Term::word(sym("v0")), Term::Ref(sym("V1"))]),
            ],
            vec![Rule::new(vec![InlineClass::class_ref(sym("V0")), InlineClass::class_ref(sym("V1"))])],
        );
        let lang = enumerate_language(&g, 10).unwrap();
        assert_eq!(lang, set(&["v0 v1", "v0 v2", "v1 v1", "v2 v2"]));
    }

    #[test]
    fn renamed_classes_vary_independently() {
        let g = Grammar::new(
            vec![
                ClassDef::alternatives(sym("N"), vec![Term::word(sym("ann")), Term::word(sym("bob"))]),
                ClassDef { name: sym("N1"), body: ClassBody::Rename(sym("N")) },
                ClassDef { name: sym("N2"), body: ClassBody::Rename(sym("N")) },
            ],
            vec![Rule::new(vec![
                InlineClass::class_ref(sym("N1")),
                InlineClass::word(sym("know")),
                InlineClass::class_ref(sym("N2")),
            ])],
        );
        assert_eq!(enumerate_language(&g, 10).unwrap().len(), 4);
    }

    #[test]
    fn concatenation_classes_expand_in_place() {
        let g = Grammar::new(
            vec![
                ClassDef::alternatives(sym("A"), vec![Term::word(sym("a")), Term::word(sym("b"))]),
                ClassDef {
                    name: sym("X"),
                    body: ClassBody::Concat(vec![InlineClass::class_ref(sym("A")), InlineClass::word(sym("c"))]),
                },
            ],
            vec![Rule::new(vec![InlineClass::class_ref(sym("X")), InlineClass::class_ref(sym("A"))])],
        );
        assert_eq!(enumerate_language(&g, 10).unwrap(), set(&["a c a", "b c b"]));
    }

    #[test]
    fn limit_is_enforced() {
        let g = xxd();
        assert!(matches!(enumerate_language(&g, 3), Err(Error::LimitExceeded { limit: 3, .. })));
    }

    #[test]
    fn coverage_partitions_corpus() {
        let c = Corpus::from_sentences([sentence("a a"), sentence("a b")]);
        let r = coverage(&xxd(), &c, 100).unwrap();
        assert_eq!(r.covered, set(&["a a"]));
        assert_eq!(r.missing, set(&["a b"]));
        assert_eq!(r.extra, set(&["a d", "b b", "b d"]));
    }
}
