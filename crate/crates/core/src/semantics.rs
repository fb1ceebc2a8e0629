//! Meaning functions read off induced grammars.
//!
//! A sentence of a semantic corpus is a two-word surface form followed by
//! its meaning, e.g. `v_1 n_7 action v_1 object n_7`. The meaning of `s t`
//! is either built by ⊕ from μ(s) and μ(t), or given outright by a more
//! specific entry, which is what makes the sentence an idiom.
//!
//! Rules of a grammar are sorted into three kinds by looking at their
//! meaning part. A *general* rule has a class of several words at both form
//! positions and repeats both of them in its meaning; it becomes a ⊕ rule.
//! An *idiom* rule fails to repeat at least one form position, so its
//! meaning cannot come from ⊕. Everything else is *specific*: compositional
//! in shape but tied to particular words, and left out of ⊕.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::error::{Error, Result};
use crate::grammar::{ensure_valid, sentence_to_string, sym, ClassBody, Corpus, Grammar, InlineClass, Sentence, Symbol, Term};
use crate::tuple::{MeaningTable, Tuple};

/// Number of words in a surface form. Only two-argument meaning functions
/// are supported.
pub const FORM_WIDTH: usize = 2;

/// Category base names used for the two form positions.
pub const DEFAULT_CATEGORIES: [&str; 2] = ["verb", "noun"];

const NONID: &str = "_nonid";

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Category {
    pub position: usize,
    pub base: String,
    pub nonid: bool,
}

impl Category {
    fn plain(&self) -> Category {
        Category { nonid: false, ..self.clone() }
    }

    pub fn symbol(&self) -> Symbol {
        sym(&self.to_string())
    }
}

impl fmt::Display for Category {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.base)?;
        if self.nonid {
            f.write_str(NONID)?;
        }
        Ok(())
    }
}

/// One row of μ: a word and its meaning `[word, category]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MeaningEntry {
    pub word: Symbol,
    pub meaning: Tuple,
}

/// Groups a flat meaning into attribute pairs when it has even length, so
/// `action die object nil` reads `[[action, die], [object, nil]]`.
pub fn meaning_tuple(words: &[Symbol]) -> Tuple {
    if !words.is_empty() && words.len().is_multiple_of(2) {
        Tuple::List(words.chunks(2).map(|p| Tuple::pair(Tuple::Atom(p[0]), Tuple::Atom(p[1]))).collect())
    } else {
        Tuple::List(words.iter().map(Tuple::atom).collect())
    }
}

/// μ: a category for each word, plus meanings given directly to whole
/// two-word phrases.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct MeaningFunction {
    words: BTreeMap<Symbol, Category>,
    phrases: BTreeMap<(Symbol, Symbol), Vec<Symbol>>,
}

impl MeaningFunction {
    pub fn new() -> MeaningFunction {
        MeaningFunction::default()
    }

    /// Assigns a category unless the word already has one.
    pub fn insert_word(&mut self, word: Symbol, category: Category) {
        self.words.entry(word).or_insert(category);
    }

    pub fn insert_phrase(&mut self, left: Symbol, right: Symbol, meaning: Vec<Symbol>) {
        self.phrases.insert((left, right), meaning);
    }

    pub fn category(&self, word: &Symbol) -> Option<&Category> {
        self.words.get(word)
    }

    pub fn meaning(&self, word: &Symbol) -> Option<Tuple> {
        self.words.get(word).map(|c| Tuple::pair(Tuple::atom(word), Tuple::Atom(c.symbol())))
    }

    pub fn phrase(&self, left: &Symbol, right: &Symbol) -> Option<&[Symbol]> {
        self.phrases.get(&(*left, *right)).map(Vec::as_slice)
    }

    pub fn words_at(&self, position: usize) -> impl Iterator<Item = &Symbol> + '_ {
        self.words.iter().filter(move |(_, c)| c.position == position).map(|(w, _)| w)
    }

    pub fn word_count(&self) -> usize {
        self.words.len()
    }

    pub fn entries(&self) -> Vec<MeaningEntry> {
        self.words
            .keys()
            .map(|w| MeaningEntry { word: *w, meaning: self.meaning(w).expect("word is in the table") })
            .collect()
    }

    /// The table form: `[w, [w, cat]]` per word and
    /// `[[[s, cat], [t, cat]], meaning]` per phrase.
    pub fn table(&self) -> MeaningTable {
        let mut entries: Vec<Tuple> =
            self.entries().into_iter().map(|e| Tuple::pair(Tuple::Atom(e.word), e.meaning)).collect();
        for ((s, t), m) in &self.phrases {
            entries.push(Tuple::pair(Tuple::pair(self.argument(s), self.argument(t)), meaning_tuple(m)));
        }
        MeaningTable { entries }
    }

    fn argument(&self, word: &Symbol) -> Tuple {
        self.meaning(word).unwrap_or_else(|| Tuple::atom(word))
    }

    /// A plain lookup table: every word gets its position's category and
    /// every corpus sentence is listed as a phrase.
    pub fn lookup_table(corpus: &Corpus) -> MeaningFunction {
        let mut mu = MeaningFunction::new();
        for s in corpus.distinct().filter(|s| s.len() >= FORM_WIDTH) {
            for (p, w) in s[..FORM_WIDTH].iter().enumerate() {
                mu.insert_word(*w, Category { position: p, base: DEFAULT_CATEGORIES[p].to_string(), nonid: false });
            }
            mu.insert_phrase(s[0], s[1], s[FORM_WIDTH..].to_vec());
        }
        mu
    }
}

impl fmt::Display for MeaningFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for e in self.table().entries {
            writeln!(f, "{e}")?;
        }
        Ok(())
    }
}

/// A position in a ⊕ template.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Slot {
    Const(Symbol),
    Arg(usize),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OplusRule {
    pub left: Category,
    pub right: Category,
    pub template: Vec<Slot>,
}

fn variable(position: usize) -> String {
    match position {
        0 => "v".into(),
        1 => "n".into(),
        p => format!("x{p}"),
    }
}

fn fill(template: &[Slot], args: [&Symbol; 2]) -> Vec<Symbol> {
    template
        .iter()
        .map(|s| match s {
            Slot::Const(c) => *c,
            Slot::Arg(i) => *args[*i],
        })
        .collect()
}

impl OplusRule {
    pub fn pattern(&self, position: usize) -> &Category {
        if position == 0 {
            &self.left
        } else {
            &self.right
        }
    }

    pub fn matches(&self, left: &Category, right: &Category) -> bool {
        &self.left == left && &self.right == right
    }

    pub fn apply(&self, left: &Symbol, right: &Symbol) -> Vec<Symbol> {
        fill(&self.template, [left, right])
    }

    fn template_words(&self) -> Vec<Symbol> {
        self.template
            .iter()
            .map(|s| match s {
                Slot::Const(c) => *c,
                Slot::Arg(i) => sym(&variable(*i)),
            })
            .collect()
    }

    pub fn tuple(&self) -> Tuple {
        let arg = |p: usize, c: &Category| Tuple::pair(Tuple::Atom(sym(&variable(p))), Tuple::Atom(c.symbol()));
        Tuple::pair(Tuple::pair(arg(0, &self.left), arg(1, &self.right)), meaning_tuple(&self.template_words()))
    }
}

impl fmt::Display for OplusRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .template
            .chunks(2)
            .map(|c| match c {
                [Slot::Const(a), Slot::Arg(i)] => format!("{a}.{}", variable(*i)),
                _ => c
                    .iter()
                    .map(|s| match s {
                        Slot::Const(a) => a.to_string(),
                        Slot::Arg(i) => variable(*i),
                    })
                    .collect::<Vec<_>>()
                    .join(", "),
            })
            .collect();
        write!(
            f,
            "⊕([[{}, {}], [{}, {}]]) = [{}]",
            variable(0),
            self.left,
            variable(1),
            self.right,
            parts.join(", ")
        )
    }
}

/// ⊕: general rules over categories, word pairs excluded from its domain,
/// and word pairs whose meaning a more specific rule fixes.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct OplusTable {
    pub rules: Vec<OplusRule>,
    pub exclusions: BTreeSet<(Symbol, Symbol)>,
    pub overrides: BTreeMap<(Symbol, Symbol), Vec<Symbol>>,
}

impl OplusTable {
    fn general(&self, mu: &MeaningFunction, left: &Symbol, right: &Symbol) -> Option<&OplusRule> {
        let (l, r) = (mu.category(left)?, mu.category(right)?);
        self.rules.iter().find(|rule| rule.matches(l, r))
    }

    /// μ(s) ⊕ μ(t), or None outside the domain.
    pub fn apply(&self, mu: &MeaningFunction, left: &Symbol, right: &Symbol) -> Option<Vec<Symbol>> {
        mu.category(left)?;
        mu.category(right)?;
        let key = (*left, *right);
        if let Some(m) = self.overrides.get(&key) {
            return Some(m.clone());
        }
        if self.exclusions.contains(&key) {
            return None;
        }
        self.general(mu, left, right).map(|r| r.apply(left, right))
    }

    pub fn dl(&self, mu: &MeaningFunction) -> usize {
        let pair = |s: &Symbol, t: &Symbol| Tuple::pair(mu.argument(s), mu.argument(t));
        self.rules.iter().map(|r| r.tuple().dl()).sum::<usize>()
            + self.exclusions.iter().map(|(s, t)| pair(s, t).dl()).sum::<usize>()
            + self
                .overrides
                .iter()
                .map(|((s, t), m)| Tuple::pair(pair(s, t), meaning_tuple(m)).dl())
                .sum::<usize>()
    }

    pub fn render(&self, mu: &MeaningFunction) -> String {
        let mut out = String::new();
        for r in &self.rules {
            out.push_str(&format!("{r}\n"));
        }
        for (s, t) in &self.exclusions {
            out.push_str(&format!("exclude [{}, {}]\n", mu.argument(s), mu.argument(t)));
        }
        for ((s, t), m) in &self.overrides {
            out.push_str(&format!("override [{}, {}] = {}\n", mu.argument(s), mu.argument(t), meaning_tuple(m)));
        }
        out
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum RuleKind {
    General,
    Specific,
    Idiom,
}

struct RuleShape {
    form: [Vec<Symbol>; 2],
    template: Vec<Slot>,
    kind: RuleKind,
}

impl RuleShape {
    fn sentence(&self, left: &Symbol, right: &Symbol) -> Sentence {
        let mut s = vec![*left, *right];
        s.extend(fill(&self.template, [left, right]));
        s
    }
}

fn class_words(grammar: &Grammar, class: &InlineClass, out: &mut Vec<Symbol>) -> Result<()> {
    for t in &class.alts {
        match t {
            Term::Seq(w) if w.len() == 1 => {
                if !out.contains(&w[0]) {
                    out.push(w[0]);
                }
            }
            Term::Seq(w) => {
                return Err(Error::Shape(format!("form alternative {:?} is not a single word", sentence_to_string(w))))
            }
            Term::Ref(name) => def_words(grammar, name, out)?,
        }
    }
    Ok(())
}

fn def_words(grammar: &Grammar, name: &Symbol, out: &mut Vec<Symbol>) -> Result<()> {
    match grammar.def(name).map(|d| &d.body) {
        Some(ClassBody::Alternatives(c)) => class_words(grammar, c, out),
        Some(ClassBody::Rename(target)) => def_words(grammar, target, out),
        Some(ClassBody::Concat(_)) => Err(Error::Shape(format!("class {name} in a form position is a concatenation"))),
        None => Err(Error::UnknownName(name.to_string())),
    }
}

fn rule_shapes(grammar: &Grammar, form_width: usize) -> Result<Vec<RuleShape>> {
    if form_width != FORM_WIDTH {
        return Err(Error::Shape(format!("form width {form_width}: only two-word forms can be analyzed")));
    }
    ensure_valid(grammar)?;
    let mut shapes = Vec::with_capacity(grammar.rules.len());
    for (i, rule) in grammar.rules.iter().enumerate() {
        if rule.body.len() < FORM_WIDTH {
            return Err(Error::Shape(format!("rule {} has fewer than two constituents", i + 1)));
        }
        let mut form = [Vec::new(), Vec::new()];
        for (p, words) in form.iter_mut().enumerate() {
            class_words(grammar, &rule.body[p], words)?;
        }
        let mut template = Vec::new();
        for c in &rule.body[FORM_WIDTH..] {
            if let Some(p) = rule.body[..FORM_WIDTH].iter().position(|f| f == c) {
                template.push(Slot::Arg(p));
            } else if let Some(Term::Seq(w)) = c.single().filter(|t| matches!(t, Term::Seq(w) if w.len() == 1)) {
                template.push(Slot::Const(w[0]));
            } else {
                return Err(Error::Shape(format!(
                    "rule {}: meaning class {c} neither repeats a form class nor is a single word",
                    i + 1
                )));
            }
        }
        let uses = |p| template.contains(&Slot::Arg(p));
        let kind = if !(uses(0) && uses(1)) {
            RuleKind::Idiom
        } else if form.iter().all(|w| w.len() > 1) {
            RuleKind::General
        } else {
            RuleKind::Specific
        };
        shapes.push(RuleShape { form, template, kind });
    }
    Ok(shapes)
}

pub fn extract_semantics(grammar: &Grammar, form_width: usize) -> Result<(MeaningFunction, OplusTable)> {
    extract_semantics_with(grammar, form_width, &DEFAULT_CATEGORIES)
}

/// Translates a grammar into (μ, ⊕). Words in the classes of general rules
/// get the `_nonid` marker; every other form word gets its position's plain
/// category. When one position carries several distinct general classes,
/// their categories are told apart by a numeric suffix.
pub fn extract_semantics_with(
    grammar: &Grammar,
    form_width: usize,
    names: &[&str; 2],
) -> Result<(MeaningFunction, OplusTable)> {
    let shapes = rule_shapes(grammar, form_width)?;
    Ok(translate(grammar, &shapes, names))
}

fn translate(grammar: &Grammar, shapes: &[RuleShape], names: &[&str; 2]) -> (MeaningFunction, OplusTable) {
    let general: Vec<(&RuleShape, &[InlineClass])> = shapes
        .iter()
        .zip(&grammar.rules)
        .filter(|(s, _)| s.kind == RuleKind::General)
        .map(|(s, r)| (s, &r.body[..FORM_WIDTH]))
        .collect();

    let mut classes: [Vec<&InlineClass>; 2] = [Vec::new(), Vec::new()];
    for (_, form) in &general {
        for p in 0..FORM_WIDTH {
            if !classes[p].contains(&&form[p]) {
                classes[p].push(&form[p]);
            }
        }
    }
    let category = |p: usize, class: &InlineClass| {
        let k = classes[p].iter().position(|c| *c == class).expect("class was collected");
        let base = if classes[p].len() == 1 { names[p].to_string() } else { format!("{}{}", names[p], k + 1) };
        Category { position: p, base, nonid: true }
    };

    let mut mu = MeaningFunction::new();
    let mut oplus = OplusTable::default();
    for (shape, form) in &general {
        let cats = [category(0, &form[0]), category(1, &form[1])];
        for (words, cat) in shape.form.iter().zip(&cats) {
            for w in words {
                mu.insert_word(*w, cat.clone());
            }
        }
        let [left, right] = cats;
        if !oplus.rules.iter().any(|r| r.matches(&left, &right)) {
            oplus.rules.push(OplusRule { left, right, template: shape.template.clone() });
        }
    }
    for shape in shapes {
        for (p, (words, base)) in shape.form.iter().zip(names).enumerate() {
            for w in words {
                mu.insert_word(*w, Category { position: p, base: base.to_string(), nonid: false });
            }
        }
    }
    for shape in shapes.iter().filter(|s| s.kind == RuleKind::Idiom) {
        for s in &shape.form[0] {
            for t in &shape.form[1] {
                let meaning = fill(&shape.template, [s, t]);
                if oplus.general(&mu, s, t).is_some() {
                    oplus.overrides.insert((*s, *t), meaning);
                } else {
                    oplus.exclusions.insert((*s, *t));
                    mu.insert_phrase(*s, *t, meaning);
                }
            }
        }
    }
    (mu, oplus)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub sentence: Sentence,
    pub expected: Vec<Symbol>,
    pub produced: Vec<Symbol>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CompositionalityReport {
    /// Corpus sentences with a two-word form.
    pub sentences: usize,
    /// Those on which ⊕ is defined.
    pub in_domain: usize,
    pub violations: Vec<Violation>,
}

impl CompositionalityReport {
    pub fn coverage(&self) -> f64 {
        if self.sentences == 0 {
            0.0
        } else {
            self.in_domain as f64 / self.sentences as f64
        }
    }

    pub fn holds(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks μ(s.t) = μ(s) ⊕ μ(t) against the corpus meaning of every
/// sentence on which ⊕ is defined.
pub fn check_compositional(mu: &MeaningFunction, oplus: &OplusTable, corpus: &Corpus) -> CompositionalityReport {
    let mut report = CompositionalityReport::default();
    for s in corpus.distinct().filter(|s| s.len() >= FORM_WIDTH) {
        report.sentences += 1;
        let Some(produced) = oplus.apply(mu, &s[0], &s[1]) else { continue };
        report.in_domain += 1;
        let expected = &s[FORM_WIDTH..];
        if produced != expected {
            report.violations.push(Violation { sentence: s.clone(), expected: expected.to_vec(), produced });
        }
    }
    report
}

/// Larger domain is better; on equal domains the shorter encoding is.
/// `Ord` puts the better score last.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CompositionalityScore {
    pub domain: usize,
    pub encoding: usize,
}

impl Ord for CompositionalityScore {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.domain.cmp(&other.domain).then(other.encoding.cmp(&self.encoding))
    }
}

impl PartialOrd for CompositionalityScore {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for CompositionalityScore {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[domain, {}], [encoding, {}]]", self.domain, self.encoding)
    }
}

/// Domain = words in μ plus word pairs on which ⊕ is defined. Encoding =
/// size of the μ table plus size of the ⊕ table.
pub fn compositionality_score(mu: &MeaningFunction, oplus: &OplusTable) -> CompositionalityScore {
    let lefts: Vec<&Symbol> = mu.words_at(0).collect();
    let rights: Vec<&Symbol> = mu.words_at(1).collect();
    let pairs = lefts
        .iter()
        .map(|s| rights.iter().filter(|t| oplus.apply(mu, s, t).is_some()).count())
        .sum::<usize>();
    CompositionalityScore { domain: mu.word_count() + pairs, encoding: mu.table().dl() + oplus.dl(mu) }
}

/// Drops the `_nonid` marker at one position, in μ and in the ⊕ patterns.
/// Excluded pairs that a widened rule now reaches are handed to that rule.
/// None if there is no marker to drop or the widened rules would clash.
fn widen(mu: &MeaningFunction, oplus: &OplusTable, position: usize) -> Option<(MeaningFunction, OplusTable)> {
    let marked = mu.words.values().any(|c| c.position == position && c.nonid)
        || oplus.rules.iter().any(|r| r.pattern(position).nonid);
    if !marked {
        return None;
    }
    let mut mu2 = mu.clone();
    for c in mu2.words.values_mut().filter(|c| c.position == position) {
        *c = c.plain();
    }
    let mut rules: Vec<OplusRule> = Vec::new();
    for r in &oplus.rules {
        let mut r = r.clone();
        if position == 0 {
            r.left = r.left.plain();
        } else {
            r.right = r.right.plain();
        }
        match rules.iter().find(|q| q.matches(&r.left, &r.right)) {
            Some(q) if q.template != r.template => return None,
            Some(_) => {}
            None => rules.push(r),
        }
    }
    let mut oplus2 = OplusTable { rules, ..oplus.clone() };
    let reached: Vec<(Symbol, Symbol)> =
        oplus2.exclusions.iter().filter(|(s, t)| oplus2.general(&mu2, s, t).is_some()).copied().collect();
    for pair in reached {
        oplus2.exclusions.remove(&pair);
    }
    Some((mu2, oplus2))
}

/// Widens positions one at a time while the postulate still holds on the
/// corpus, the domain grows and the encoding does not get longer.
///
/// Positions are tried right to left, so the argument (noun) is widened
/// before the functor (verb). The order matters: once one side of an idiom
/// pair has been widened, widening the other side reaches the pair and is
/// refused.
pub fn maximal_extension(mu: &MeaningFunction, oplus: &OplusTable, corpus: &Corpus) -> (MeaningFunction, OplusTable) {
    let mut current = (mu.clone(), oplus.clone());
    loop {
        let mut changed = false;
        for p in (0..FORM_WIDTH).rev() {
            let Some(candidate) = widen(&current.0, &current.1, p) else { continue };
            if accepts(&current, &candidate, corpus) {
                current = candidate;
                changed = true;
            }
        }
        if !changed {
            return current;
        }
    }
}

fn accepts(
    current: &(MeaningFunction, OplusTable),
    candidate: &(MeaningFunction, OplusTable),
    corpus: &Corpus,
) -> bool {
    let before = compositionality_score(&current.0, &current.1);
    let after = compositionality_score(&candidate.0, &candidate.1);
    after.domain > before.domain
        && after.encoding <= before.encoding
        && check_compositional(&candidate.0, &candidate.1, corpus).holds()
}

/// Every single-position widening of (μ, ⊕), paired with whether the
/// maximal-extension step would accept it.
pub fn single_widenings(
    mu: &MeaningFunction,
    oplus: &OplusTable,
    corpus: &Corpus,
) -> Vec<(usize, MeaningFunction, OplusTable, bool)> {
    let current = (mu.clone(), oplus.clone());
    (0..FORM_WIDTH)
        .filter_map(|p| {
            widen(mu, oplus, p).map(|c| {
                let ok = accepts(&current, &c, corpus);
                (p, c.0, c.1, ok)
            })
        })
        .collect()
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct IdiomReport {
    pub sentences: BTreeSet<Sentence>,
    pub items: BTreeSet<Symbol>,
    /// The idiom rule that fixes each sentence's meaning.
    pub justification: BTreeMap<Sentence, String>,
}

impl IdiomReport {
    pub fn is_empty(&self) -> bool {
        self.sentences.is_empty() && self.items.is_empty()
    }
}

impl fmt::Display for IdiomReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.sentences {
            let words: Vec<Tuple> = s.iter().map(Tuple::atom).collect();
            writeln!(f, "[idiom, {}, [rule, {}]]", Tuple::List(words), self.justification[s].trim_end())?;
        }
        let items: Vec<Tuple> = self.items.iter().map(Tuple::atom).collect();
        writeln!(f, "[idiomatic_items, {}]", Tuple::List(items))
    }
}

/// Idiomatic sentences are corpus sentences that only an idiom rule derives.
/// An idiomatic word is a form word of such a sentence that, after maximal
/// extension, no general ⊕ pattern at its position accepts.
pub fn idiom_items(grammar: &Grammar, corpus: &Corpus, form_width: usize) -> Result<IdiomReport> {
    let shapes = rule_shapes(grammar, form_width)?;
    let (mu, oplus) = translate(grammar, &shapes, &DEFAULT_CATEGORIES);
    let (mu, oplus) = maximal_extension(&mu, &oplus, corpus);

    let derived_elsewhere = |s: &Sentence| {
        shapes.iter().any(|sh| {
            sh.kind != RuleKind::Idiom
                && sh.form[0].contains(&s[0])
                && sh.form[1].contains(&s[1])
                && sh.sentence(&s[0], &s[1]) == *s
        })
    };
    let mut report = IdiomReport::default();
    for (shape, rule) in shapes.iter().zip(&grammar.rules).filter(|(s, _)| s.kind == RuleKind::Idiom) {
        for l in &shape.form[0] {
            for r in &shape.form[1] {
                let s = shape.sentence(l, r);
                if !corpus.contains(&s) || derived_elsewhere(&s) {
                    continue;
                }
                for (p, w) in [(0, l), (1, r)] {
                    let accepted = mu
                        .category(w)
                        .is_some_and(|c| oplus.rules.iter().any(|rule| rule.pattern(p) == c));
                    if !accepted {
                        report.items.insert(*w);
                    }
                }
                report.justification.entry(s.clone()).or_insert_with(|| rule.to_string());
                report.sentences.insert(s);
            }
        }
    }
    Ok(report)
}

/// Token count of a λ expression: λ, `.`, brackets, commas and names each
/// count one.
pub fn lambda_token_count(text: &str) -> usize {
    let mut n = 0;
    let mut in_name = false;
    for c in text.chars() {
        match c {
            'λ' | '.' | '[' | ']' | ',' => {
                n += 1;
                in_name = false;
            }
            c if c.is_whitespace() => in_name = false,
            _ => {
                if !in_name {
                    n += 1;
                }
                in_name = true;
            }
        }
    }
    n
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LambdaReport {
    pub definitions: Vec<String>,
    pub definition_size: usize,
    /// One tag per word of μ's domain.
    pub domain_size: usize,
}

impl LambdaReport {
    pub fn sizes(&self) -> (usize, usize) {
        (self.definition_size, self.domain_size)
    }
}

impl fmt::Display for LambdaReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for d in &self.definitions {
            writeln!(f, "{d}")?;
        }
        writeln!(f, "size(interpreter) + {} + {}", self.definition_size, self.domain_size)
    }
}

fn lambda_var(position: usize) -> String {
    match position {
        0 => "Y".into(),
        1 => "X".into(),
        p => format!("X{p}"),
    }
}

fn render_pairs(items: &[String]) -> Result<String> {
    if !items.len().is_multiple_of(2) {
        return Err(Error::Shape(format!("meaning [{}] is not a list of attribute pairs", items.join(", "))));
    }
    let pairs: Vec<String> = items.chunks(2).map(|p| format!("[{}, {}]", p[0], p[1])).collect();
    Ok(format!("[{}]", pairs.join(", ")))
}

/// Writes (μ, ⊕) as λ definitions: one `λX . [cat, X]` per category, one
/// per general ⊕ rule and one per idiom, with markers left out.
pub fn lambda_encoding_report(mu: &MeaningFunction, oplus: &OplusTable) -> Result<LambdaReport> {
    let mut defs = Vec::new();
    let bases: BTreeSet<(usize, &str)> = mu.words.values().map(|c| (c.position, c.base.as_str())).collect();
    for (p, base) in &bases {
        let x = lambda_var(*p);
        defs.push(format!("λ{x} . [{base}, {x}]"));
    }
    for r in &oplus.rules {
        let body: Vec<String> = r
            .template
            .iter()
            .map(|s| match s {
                Slot::Const(c) => c.to_string(),
                Slot::Arg(i) => lambda_var(*i),
            })
            .collect();
        defs.push(format!(
            "λ [{}, {}] [{}, {}] . {}",
            r.left.base,
            lambda_var(0),
            r.right.base,
            lambda_var(1),
            render_pairs(&body)?
        ));
    }
    let idioms = oplus
        .exclusions
        .iter()
        .filter_map(|(s, t)| mu.phrase(s, t).map(|m| ((s, t), m)))
        .chain(oplus.overrides.iter().map(|((s, t), m)| ((s, t), m.as_slice())));
    for ((s, t), m) in idioms {
        let base = |w: &Symbol| mu.category(w).map(|c| c.base.clone()).unwrap_or_default();
        let body: Vec<String> = m.iter().map(Symbol::to_string).collect();
        defs.push(format!("λ [{}, {s}] [{}, {t}] . {}", base(s), base(t), render_pairs(&body)?));
    }
    let definition_size = defs.iter().map(|d| lambda_token_count(d)).sum();
    Ok(LambdaReport { definitions: defs, definition_size, domain_size: mu.word_count() })
}
