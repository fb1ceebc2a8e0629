//! Language-preserving normal form.
//!
//! 1. repeated alternatives inside a class are dropped;
//! 2. a rule is dropped when another single rule generates a strict superset
//!    of its language, or an earlier rule generates the same language;
//! 3. definitions nobody references are dropped;
//! 4. a definition referenced exactly once is spliced into its use site when
//!    that is expressible (always saving at least five symbols).
//!
//! Steps repeat until nothing changes. Class names are left as they are.

use std::borrow::Cow;
use rustc_hash::{FxHashMap as HashMap, FxHashSet as HashSet};

use crate::error::{Error, Result};
use crate::generator::Expander;
use crate::grammar::{validate, ClassBody, ClassDef, Diagnostic, Grammar, InlineClass, Rule, Sentence, Symbol, Term};

/// Validity check that tolerates the defects canonicalization repairs.
pub(crate) fn ensure_canonicalizable(grammar: &Grammar) -> Result<()> {
    let diags: Vec<Diagnostic> = validate(grammar)
        .into_iter()
        .filter(|d| !matches!(d, Diagnostic::DuplicateRule { .. } | Diagnostic::DuplicateAlternative { .. }))
        .collect();
    if diags.is_empty() {
        Ok(())
    } else {
        Err(Error::Invalid(diags))
    }
}

pub fn canonicalize(grammar: &Grammar, limit: usize) -> Result<Grammar> {
    ensure_canonicalizable(grammar)?;
    let mut defs = grammar.defs.clone();
    let mut rules: Vec<Cow<Rule>> = grammar.rules.iter().map(Cow::Borrowed).collect();
    loop {
        let mut changed = false;
        for d in &mut defs {
            changed |= dedupe_body(&mut d.body);
        }
        for r in &mut rules {
            if r.body.iter().any(has_repeats) {
                changed = true;
                for c in &mut r.to_mut().body {
                    dedupe_alternatives(c);
                }
            }
        }

        let ex = Expander::new(defs.iter());
        let langs = rules
            .iter()
            .map(|r| ex.rule_language(r, limit))
            .collect::<Result<Vec<_>>>()?;
        let refs: Vec<&HashSet<Sentence>> = langs.iter().collect();
        let alive = subsumption_survivors(&refs);
        if alive.iter().any(|a| !a) {
            changed = true;
            let mut i = 0;
            rules.retain(|_| {
                i += 1;
                alive[i - 1]
            });
        }

        changed |= cleanup_defs(&mut defs, &mut rules);
        if !changed {
            break;
        }
    }
    Ok(Grammar::new(defs, rules.into_iter().map(Cow::into_owned).collect()))
}

fn has_repeats(c: &InlineClass) -> bool {
    let mut seen = HashSet::default();
    c.alts.iter().any(|t| !seen.insert(t))
}

pub(crate) fn dedupe_alternatives(c: &mut InlineClass) -> bool {
    if !has_repeats(c) {
        return false;
    }
    let mut seen = HashSet::default();
    c.alts.retain(|t| seen.insert(t.clone()));
    true
}

fn dedupe_body(body: &mut ClassBody) -> bool {
    match body {
        ClassBody::Alternatives(c) => dedupe_alternatives(c),
        ClassBody::Concat(parts) => parts.iter_mut().fold(false, |acc, c| dedupe_alternatives(c) | acc),
        ClassBody::Rename(_) => false,
    }
}

/// Which rules survive subsumption removal, given each rule's language.
///
/// Rule `i` is removed iff some other rule's language strictly contains it,
/// or an earlier rule's language equals it. The verdict does not depend on
/// the order removals are performed in.
pub(crate) fn subsumption_survivors(langs: &[&HashSet<Sentence>]) -> Vec<bool> {
    let mut index: HashMap<&Sentence, Vec<usize>> = HashMap::default();
    for (i, l) in langs.iter().enumerate() {
        for s in l.iter() {
            index.entry(s).or_default().push(i);
        }
    }
    langs
        .iter()
        .enumerate()
        .map(|(i, li)| {
            let Some(first) = li.iter().next() else { return true };
            !index[first].iter().any(|&j| {
                j != i && langs[j].len() >= li.len() && (langs[j].len() > li.len() || j < i) && li.is_subset(langs[j])
            })
        })
        .collect()
}

pub(crate) fn count_class_refs(c: &InlineClass, counts: &mut HashMap<Symbol, usize>) {
    for t in &c.alts {
        if let Term::Ref(n) = t {
            *counts.entry(*n).or_insert(0) += 1;
        }
    }
}

pub(crate) fn def_reference_counts(defs: &[ClassDef], counts: &mut HashMap<Symbol, usize>) {
    for d in defs {
        match &d.body {
            ClassBody::Alternatives(c) => count_class_refs(c, counts),
            ClassBody::Concat(parts) => parts.iter().for_each(|c| count_class_refs(c, counts)),
            ClassBody::Rename(t) => *counts.entry(*t).or_insert(0) += 1,
        }
    }
}

pub(crate) fn reference_counts(defs: &[ClassDef], rules: &[Cow<Rule>]) -> HashMap<Symbol, usize> {
    let mut counts = HashMap::default();
    def_reference_counts(defs, &mut counts);
    for r in rules {
        r.body.iter().for_each(|c| count_class_refs(c, &mut counts));
    }
    counts
}

/// Splices the alternatives of `name` in place of its reference in `c`.
fn splice_alternatives(c: &mut InlineClass, name: &Symbol, alts: &[Term]) -> bool {
    let Some(pos) = c.alts.iter().position(|t| matches!(t, Term::Ref(n) if n == name)) else {
        return false;
    };
    c.alts.splice(pos..=pos, alts.iter().cloned());
    dedupe_alternatives(c);
    true
}

/// Replaces a singleton `{ name }` in a class sequence with `parts`.
fn splice_concat(seq: &mut Vec<InlineClass>, name: &Symbol, parts: &[InlineClass]) -> bool {
    let Some(pos) = seq
        .iter()
        .position(|c| matches!(c.single(), Some(Term::Ref(n)) if n == name))
    else {
        return false;
    };
    seq.splice(pos..=pos, parts.iter().cloned());
    true
}

fn mentions(c: &InlineClass, name: &Symbol) -> bool {
    c.alts.iter().any(|t| matches!(t, Term::Ref(n) if n == name))
}

/// Inlines the single use of definition `k`, if the use site allows it.
fn inline_single_use(k: usize, defs: &mut [ClassDef], rules: &mut [Cow<Rule>]) -> bool {
    let name = defs[k].name;
    let body = defs[k].body.clone();
    match &body {
        ClassBody::Alternatives(src) => {
            for (j, d) in defs.iter_mut().enumerate() {
                if j == k {
                    continue;
                }
                match &mut d.body {
                    ClassBody::Alternatives(c) => {
                        if splice_alternatives(c, &name, &src.alts) {
                            return true;
                        }
                    }
                    // Parts of a concatenation are re-chosen at each of its
                    // uses, so a bound class cannot be spliced into them.
                    ClassBody::Concat(parts) if parts.iter().any(|c| mentions(c, &name)) => return false,
                    ClassBody::Rename(t) if t == &name => return false,
                    ClassBody::Concat(_) | ClassBody::Rename(_) => {}
                }
            }
            for r in rules.iter_mut() {
                if r.body.iter().any(|c| mentions(c, &name)) {
                    for c in &mut r.to_mut().body {
                        if splice_alternatives(c, &name, &src.alts) {
                            return true;
                        }
                    }
                }
            }
            false
        }
        ClassBody::Concat(parts) => {
            for (j, d) in defs.iter_mut().enumerate() {
                if j == k {
                    continue;
                }
                if let ClassBody::Concat(seq) = &mut d.body {
                    if splice_concat(seq, &name, parts) {
                        return true;
                    }
                }
            }
            for r in rules.iter_mut() {
                let singleton_use = r
                    .body
                    .iter()
                    .any(|c| matches!(c.single(), Some(Term::Ref(n)) if n == &name));
                if singleton_use {
                    return splice_concat(&mut r.to_mut().body, &name, parts);
                }
            }
            false
        }
        ClassBody::Rename(_) => false,
    }
}

/// Drops unreferenced definitions and inlines single-use ones, to a fixpoint.
pub(crate) fn cleanup_defs(defs: &mut Vec<ClassDef>, rules: &mut [Cow<Rule>]) -> bool {
    cleanup_defs_with(defs, rules, None)
}

/// `cleanup_defs`, starting from reference counts the caller already has.
pub(crate) fn cleanup_defs_with(
    defs: &mut Vec<ClassDef>,
    rules: &mut [Cow<Rule>],
    mut known: Option<HashMap<Symbol, usize>>,
) -> bool {
    let mut changed = false;
    loop {
        let counts = known.take().unwrap_or_else(|| reference_counts(defs, rules));
        if let Some(k) = defs.iter().position(|d| counts.get(&d.name).copied().unwrap_or(0) == 0) {
            defs.remove(k);
            changed = true;
            continue;
        }
        let mut progressed = false;
        for k in 0..defs.len() {
            if counts.get(&defs[k].name) == Some(&1) && inline_single_use(k, defs, rules) {
                defs.remove(k);
                progressed = true;
                break;
            }
        }
        if !progressed {
            return changed;
        }
        changed = true;
    }
}
