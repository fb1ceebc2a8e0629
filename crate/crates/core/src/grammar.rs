//! Symbols, terms, classes, rules and grammars.
//!
//! A grammar is a list of named class definitions plus a list of rules.
//! Each rule is a sequence of inline classes, and each inline class is a set
//! of alternative terms. A term is either a run of terminal symbols or a
//! reference to a named class. Class names and terminals share one token
//! namespace: a token is a class reference iff some definition has it as its
//! left-hand side.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::{Mutex, OnceLock};

use crate::error::{Error, Result};

/// Characters that can never be part of a symbol.
pub const RESERVED_CHARS: &[char] = &['{', '}', '|', '=', '#'];

/// An atomic token. Every symbol has length one under the description-length
/// metric, however many characters it is spelled with.
///
/// Symbols are interned for the life of the process (the spellings are
/// leaked, which is fine for a vocabulary), so equality and hashing work on
/// the pointer. Ordering is by spelling.
#[derive(Clone, Copy)]
pub struct Symbol(&'static str);

fn intern(text: &str) -> &'static str {
    static TABLE: OnceLock<Mutex<HashSet<&'static str>>> = OnceLock::new();
    let mut table = TABLE
        .get_or_init(Default::default)
        .lock()
        .unwrap_or_else(|poisoned| poisoned.into_inner());
    if let Some(existing) = table.get(text) {
        return existing;
    }
    let fresh: &'static str = Box::leak(text.to_owned().into_boxed_str());
    table.insert(fresh);
    fresh
}

impl PartialEq for Symbol {
    fn eq(&self, other: &Symbol) -> bool {
        std::ptr::eq(self.0.as_ptr(), other.0.as_ptr())
    }
}

impl Eq for Symbol {}

impl Hash for Symbol {
    fn hash<H: Hasher>(&self, state: &mut H) {
        (self.0.as_ptr() as usize).hash(state);
    }
}

impl PartialOrd for Symbol {
    fn partial_cmp(&self, other: &Symbol) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Symbol {
    fn cmp(&self, other: &Symbol) -> std::cmp::Ordering {
        if self == other {
            std::cmp::Ordering::Equal
        } else {
            self.0.cmp(other.0)
        }
    }
}

impl Symbol {
    pub fn new(text: &str) -> Result<Symbol> {
        if text.is_empty() {
            return Err(Error::Parse {
                line: 0,
                column: 0,
                message: "empty symbol".into(),
            });
        }
        if let Some(c) = text
            .chars()
            .find(|c| c.is_whitespace() || RESERVED_CHARS.contains(c))
        {
            return Err(Error::Parse {
                line: 0,
                column: 0,
                message: format!("symbol {text:?} contains reserved character {c:?}"),
            });
        }
        Ok(Symbol(intern(text)))
    }

    pub fn as_str(&self) -> &'static str {
        self.0
    }
}

/// Builds a symbol from a literal, panicking if it is not a valid token.
pub fn sym(text: &str) -> Symbol {
    Symbol::new(text).unwrap_or_else(|e| panic!("invalid symbol literal {text:?}: {e}"))
}

/// Splits on whitespace and builds a sentence from literal tokens.
pub fn sentence(text: &str) -> Sentence {
    text.split_whitespace().map(sym).collect()
}

impl fmt::Debug for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.0)
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.0)
    }
}

pub type Sentence = Vec<Symbol>;

pub fn sentence_to_string(s: &Sentence) -> String {
    s.iter().map(Symbol::as_str).collect::<Vec<_>>().join(" ")
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    /// One or more terminal symbols.
    Seq(Vec<Symbol>),
    /// A named class.
    Ref(Symbol),
}

impl Term {
    pub fn word(s: Symbol) -> Term {
        Term::Seq(vec![s])
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Seq(syms) => f.write_str(&sentence_to_string(syms)),
            Term::Ref(name) => write!(f, "{name}"),
        }
    }
}

/// `{ t_1 | ... | t_k }`
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct InlineClass {
    pub alts: Vec<Term>,
}

impl InlineClass {
    pub fn new(alts: Vec<Term>) -> InlineClass {
        InlineClass { alts }
    }

    /// The singleton word class `{ w }`.
    pub fn word(s: Symbol) -> InlineClass {
        InlineClass {
            alts: vec![Term::word(s)],
        }
    }

    /// The singleton reference `{ X }`.
    pub fn class_ref(name: Symbol) -> InlineClass {
        InlineClass {
            alts: vec![Term::Ref(name)],
        }
    }

    /// The sole term when this is a singleton class.
    pub fn single(&self) -> Option<&Term> {
        match self.alts.as_slice() {
            [t] => Some(t),
            _ => None,
        }
    }
}

impl fmt::Display for InlineClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{ ")?;
        for (i, t) in self.alts.iter().enumerate() {
            if i > 0 {
                f.write_str(" | ")?;
            }
            write!(f, "{t}")?;
        }
        f.write_str(" }")
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum ClassBody {
    /// `X = { t_i | ... | t_k }`
    Alternatives(InlineClass),
    /// `X = { A } { B } ...`, two or more classes.
    Concat(Vec<InlineClass>),
    /// `X = Y`: same alternatives as `Y`, chosen independently of it.
    Rename(Symbol),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ClassDef {
    pub name: Symbol,
    pub body: ClassBody,
}

impl ClassDef {
    pub fn alternatives(name: Symbol, alts: Vec<Term>) -> ClassDef {
        ClassDef {
            name,
            body: ClassBody::Alternatives(InlineClass::new(alts)),
        }
    }
}

impl fmt::Display for ClassDef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} = ", self.name)?;
        match &self.body {
            ClassBody::Alternatives(c) => write!(f, "{c}"),
            ClassBody::Concat(parts) => write_classes(f, parts),
            ClassBody::Rename(target) => write!(f, "{target}"),
        }
    }
}

fn write_classes(f: &mut fmt::Formatter<'_>, classes: &[InlineClass]) -> fmt::Result {
    for (i, c) in classes.iter().enumerate() {
        if i > 0 {
            f.write_str(" ")?;
        }
        write!(f, "{c}")?;
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Rule {
    pub body: Vec<InlineClass>,
}

impl Rule {
    pub fn new(body: Vec<InlineClass>) -> Rule {
        Rule { body }
    }

    /// One singleton word class per symbol.
    pub fn from_words(words: &[Symbol]) -> Rule {
        Rule {
            body: words.iter().cloned().map(InlineClass::word).collect(),
        }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_classes(f, &self.body)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Grammar {
    pub defs: Vec<ClassDef>,
    pub rules: Vec<Rule>,
}

impl Grammar {
    pub fn new(defs: Vec<ClassDef>, rules: Vec<Rule>) -> Grammar {
        Grammar { defs, rules }
    }

    pub fn def(&self, name: &Symbol) -> Option<&ClassDef> {
        self.defs.iter().find(|d| &d.name == name)
    }

    pub fn def_names(&self) -> HashSet<Symbol> {
        self.defs.iter().map(|d| d.name).collect()
    }

    /// Every terminal symbol mentioned anywhere in the grammar.
    pub fn terminals(&self) -> BTreeSet<Symbol> {
        let mut out = BTreeSet::new();
        let mut add = |c: &InlineClass| {
            for t in &c.alts {
                if let Term::Seq(s) = t {
                    out.extend(s.iter().cloned());
                }
            }
        };
        for d in &self.defs {
            match &d.body {
                ClassBody::Alternatives(c) => add(c),
                ClassBody::Concat(parts) => parts.iter().for_each(&mut add),
                ClassBody::Rename(_) => {}
            }
        }
        for r in &self.rules {
            r.body.iter().for_each(&mut add);
        }
        out
    }
}

impl fmt::Display for Grammar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for d in &self.defs {
            writeln!(f, "{d}")?;
        }
        for r in &self.rules {
            writeln!(f, "{r}")?;
        }
        Ok(())
    }
}

/// A bag of sentences. Iteration order is sorted, never insertion order.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Corpus {
    counts: BTreeMap<Sentence, usize>,
}

impl Corpus {
    pub fn new() -> Corpus {
        Corpus::default()
    }

    pub fn from_sentences<I: IntoIterator<Item = Sentence>>(sentences: I) -> Corpus {
        let mut c = Corpus::new();
        for s in sentences {
            c.add(s, 1);
        }
        c
    }

    pub fn add(&mut self, s: Sentence, multiplicity: usize) {
        if multiplicity > 0 {
            *self.counts.entry(s).or_insert(0) += multiplicity;
        }
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    /// Number of distinct sentences.
    pub fn len(&self) -> usize {
        self.counts.len()
    }

    pub fn total(&self) -> usize {
        self.counts.values().sum()
    }

    pub fn multiplicity(&self, s: &[Symbol]) -> usize {
        self.counts.get(s).copied().unwrap_or(0)
    }

    pub fn contains(&self, s: &[Symbol]) -> bool {
        self.counts.contains_key(s)
    }

    pub fn distinct(&self) -> impl Iterator<Item = &Sentence> {
        self.counts.keys()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Sentence, usize)> {
        self.counts.iter().map(|(s, &n)| (s, n))
    }

    pub fn vocabulary(&self) -> BTreeSet<Symbol> {
        self.counts.keys().flatten().cloned().collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Location {
    Def(Symbol),
    Rule(usize),
}

impl fmt::Display for Location {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Location::Def(n) => write!(f, "definition of {n}"),
            Location::Rule(i) => write!(f, "rule {}", i + 1),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Diagnostic {
    UndefinedReference { name: Symbol, at: Location },
    Cycle { names: Vec<Symbol> },
    DuplicateName(Symbol),
    EmptyClass { at: Location },
    EmptyTerm { at: Location },
    DuplicateAlternative { at: Location },
    DuplicateRule { first: usize, second: usize },
    ShortConcat(Symbol),
    /// A class name used inside a terminal run.
    ClassNameAsTerminal { name: Symbol, at: Location },
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Diagnostic::UndefinedReference { name, at } => {
                write!(f, "undefined class {name} in {at}")
            }
            Diagnostic::Cycle { names } => {
                let path: Vec<_> = names.iter().map(Symbol::as_str).collect();
                write!(f, "cyclic definitions: {}", path.join(" -> "))
            }
            Diagnostic::DuplicateName(n) => write!(f, "class {n} defined more than once"),
            Diagnostic::EmptyClass { at } => write!(f, "empty class in {at}"),
            Diagnostic::EmptyTerm { at } => write!(f, "empty term in {at}"),
            Diagnostic::DuplicateAlternative { at } => {
                write!(f, "repeated alternative in {at}")
            }
            Diagnostic::DuplicateRule { first, second } => {
                write!(f, "rule {} repeats rule {}", second + 1, first + 1)
            }
            Diagnostic::ShortConcat(n) => {
                write!(f, "concatenation {n} needs at least two classes")
            }
            Diagnostic::ClassNameAsTerminal { name, at } => {
                write!(f, "class name {name} used inside a symbol run in {at}")
            }
        }
    }
}

/// Diagnostics for a grammar; the grammar is well formed iff the list is empty.
pub fn validate(grammar: &Grammar) -> Vec<Diagnostic> {
    let mut diags = Vec::new();
    let mut seen = HashSet::new();
    for d in &grammar.defs {
        if !seen.insert(d.name) {
            diags.push(Diagnostic::DuplicateName(d.name));
        }
    }
    let names = grammar.def_names();

    let check_class = |c: &InlineClass, at: &Location, diags: &mut Vec<Diagnostic>| {
        if c.alts.is_empty() {
            diags.push(Diagnostic::EmptyClass { at: at.clone() });
        }
        let mut alts = HashSet::new();
        for t in &c.alts {
            if !alts.insert(t) {
                diags.push(Diagnostic::DuplicateAlternative { at: at.clone() });
            }
            match t {
                Term::Seq(s) if s.is_empty() => {
                    diags.push(Diagnostic::EmptyTerm { at: at.clone() })
                }
                Term::Seq(s) => {
                    for x in s.iter().filter(|x| names.contains(*x)) {
                        diags.push(Diagnostic::ClassNameAsTerminal {
                            name: *x,
                            at: at.clone(),
                        });
                    }
                }
                Term::Ref(n) if !names.contains(n) => {
                    diags.push(Diagnostic::UndefinedReference {
                        name: *n,
                        at: at.clone(),
                    })
                }
                Term::Ref(_) => {}
            }
        }
    };

    for d in &grammar.defs {
        let at = Location::Def(d.name);
        match &d.body {
            ClassBody::Alternatives(c) => check_class(c, &at, &mut diags),
            ClassBody::Concat(parts) => {
                if parts.len() < 2 {
                    diags.push(Diagnostic::ShortConcat(d.name));
                }
                for c in parts {
                    check_class(c, &at, &mut diags);
                }
            }
            ClassBody::Rename(target) => {
                if !names.contains(target) {
                    diags.push(Diagnostic::UndefinedReference {
                        name: *target,
                        at,
                    });
                }
            }
        }
    }

    let mut rule_seen: HashMap<&Rule, usize> = HashMap::new();
    for (i, r) in grammar.rules.iter().enumerate() {
        let at = Location::Rule(i);
        if r.body.is_empty() {
            diags.push(Diagnostic::EmptyClass { at: at.clone() });
        }
        for c in &r.body {
            check_class(c, &at, &mut diags);
        }
        if let Some(&first) = rule_seen.get(r) {
            diags.push(Diagnostic::DuplicateRule { first, second: i });
        } else {
            rule_seen.insert(r, i);
        }
    }

    if let Some(cycle) = find_cycle(grammar) {
        diags.push(Diagnostic::Cycle { names: cycle });
    }
    diags
}

pub fn ensure_valid(grammar: &Grammar) -> Result<()> {
    let diags = validate(grammar);
    if diags.is_empty() {
        Ok(())
    } else {
        Err(Error::Invalid(diags))
    }
}

/// Names referenced directly by a definition body.
pub(crate) fn body_refs(body: &ClassBody) -> Vec<&Symbol> {
    fn class_refs<'a>(c: &'a InlineClass, out: &mut Vec<&'a Symbol>) {
        for t in &c.alts {
            if let Term::Ref(n) = t {
                out.push(n);
            }
        }
    }
    let mut out = Vec::new();
    match body {
        ClassBody::Alternatives(c) => class_refs(c, &mut out),
        ClassBody::Concat(parts) => parts.iter().for_each(|c| class_refs(c, &mut out)),
        ClassBody::Rename(t) => out.push(t),
    }
    out
}

fn find_cycle(grammar: &Grammar) -> Option<Vec<Symbol>> {
    #[derive(Clone, Copy, PartialEq)]
    enum Mark {
        Unseen,
        Active,
        Done,
    }
    let index: HashMap<&Symbol, usize> = grammar
        .defs
        .iter()
        .enumerate()
        .map(|(i, d)| (&d.name, i))
        .collect();
    let mut marks = vec![Mark::Unseen; grammar.defs.len()];
    let mut path = Vec::new();

    fn visit(
        i: usize,
        grammar: &Grammar,
        index: &HashMap<&Symbol, usize>,
        marks: &mut [Mark],
        path: &mut Vec<usize>,
    ) -> Option<Vec<Symbol>> {
        marks[i] = Mark::Active;
        path.push(i);
        for n in body_refs(&grammar.defs[i].body) {
            let Some(&j) = index.get(n) else { continue };
            match marks[j] {
                Mark::Active => {
                    let start = path.iter().position(|&p| p == j).unwrap_or(0);
                    let mut names: Vec<Symbol> = path[start..]
                        .iter()
                        .map(|&p| grammar.defs[p].name)
                        .collect();
                    names.push(grammar.defs[j].name);
                    return Some(names);
                }
                Mark::Unseen => {
                    if let Some(c) = visit(j, grammar, index, marks, path) {
                        return Some(c);
                    }
                }
                Mark::Done => {}
            }
        }
        path.pop();
        marks[i] = Mark::Done;
        None
    }

    for i in 0..grammar.defs.len() {
        if marks[i] == Mark::Unseen {
            if let Some(c) = visit(i, grammar, &index, &mut marks, &mut path) {
                return Some(c);
            }
        }
    }
    None
}

/// The grammar that lists every distinct sentence as one alternative of a
/// single class.
pub fn listing_grammar(corpus: &Corpus) -> Result<Grammar> {
    if corpus.is_empty() {
        return Err(Error::EmptyInput("corpus has no sentences"));
    }
    let alts = corpus.distinct().map(|s| Term::Seq(s.clone())).collect();
    Ok(Grammar::new(vec![], vec![Rule::new(vec![InlineClass::new(alts)])]))
}

/// True if the grammars differ only in the names of their classes and in
/// the order of definitions, rules and alternatives.
pub fn structurally_equal(a: &Grammar, b: &Grammar) -> bool {
    if a.defs.len() != b.defs.len() || a.rules.len() != b.rules.len() {
        return false;
    }
    let (sa, sb) = (shape_signatures(a), shape_signatures(b));
    let target = rendered(b, &HashMap::new());
    let mut map = HashMap::new();
    let mut used = vec![false; b.defs.len()];
    match_defs(0, a, b, &sa, &sb, &mut map, &mut used, &target)
}

#[allow(clippy::too_many_arguments)]
fn match_defs(
    i: usize,
    a: &Grammar,
    b: &Grammar,
    sa: &HashMap<Symbol, String>,
    sb: &HashMap<Symbol, String>,
    map: &mut HashMap<Symbol, Symbol>,
    used: &mut [bool],
    target: &(Vec<String>, Vec<String>),
) -> bool {
    let Some(def) = a.defs.get(i) else {
        return rendered(a, map) == *target;
    };
    for (j, other) in b.defs.iter().enumerate() {
        if used[j] || sa[&def.name] != sb[&other.name] {
            continue;
        }
        used[j] = true;
        map.insert(def.name, other.name);
        if match_defs(i + 1, a, b, sa, sb, map, used, target) {
            return true;
        }
        used[j] = false;
    }
    map.remove(&def.name);
    false
}

fn sorted_class(c: &InlineClass, name_of: &dyn Fn(&Symbol) -> String) -> String {
    let mut alts: Vec<String> = c
        .alts
        .iter()
        .map(|t| match t {
            Term::Seq(w) => sentence_to_string(w),
            Term::Ref(n) => format!("@{}", name_of(n)),
        })
        .collect();
    alts.sort();
    format!("{{{}}}", alts.join("|"))
}

fn body_shape(body: &ClassBody, name_of: &dyn Fn(&Symbol) -> String) -> String {
    match body {
        ClassBody::Alternatives(c) => sorted_class(c, name_of),
        ClassBody::Concat(parts) => parts.iter().map(|c| sorted_class(c, name_of)).collect::<Vec<_>>().join(" "),
        ClassBody::Rename(t) => format!("=@{}", name_of(t)),
    }
}

/// A name-free description of every definition, with references replaced by
/// the description of what they refer to.
fn shape_signatures(g: &Grammar) -> HashMap<Symbol, String> {
    fn sig(g: &Grammar, name: &Symbol, memo: &mut HashMap<Symbol, String>) -> String {
        if let Some(s) = memo.get(name) {
            return s.clone();
        }
        let body = &g.def(name).expect("validated grammar").body;
        let subs: HashMap<Symbol, String> = body_refs(body).into_iter().map(|r| (*r, sig(g, r, memo))).collect();
        let s = body_shape(body, &|n| format!("({})", subs[n]));
        memo.insert(*name, s.clone());
        s
    }
    let mut memo = HashMap::new();
    for d in &g.defs {
        sig(g, &d.name, &mut memo);
    }
    memo
}

fn rendered(g: &Grammar, map: &HashMap<Symbol, Symbol>) -> (Vec<String>, Vec<String>) {
    let name_of = |n: &Symbol| map.get(n).unwrap_or(n).to_string();
    let mut defs: Vec<String> =
        g.defs.iter().map(|d| format!("{}={}", name_of(&d.name), body_shape(&d.body, &name_of))).collect();
    let mut rules: Vec<String> = g
        .rules
        .iter()
        .map(|r| r.body.iter().map(|c| sorted_class(c, &name_of)).collect::<Vec<_>>().join(" "))
        .collect();
    defs.sort();
    rules.sort();
    (defs, rules)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn xxd() -> Grammar {
        Grammar::new(
            vec![ClassDef::alternatives(
                sym("X"),
                vec![Term::word(sym("a")), Term::word(sym("b"))],
            )],
            vec![Rule::new(vec![
                InlineClass::class_ref(sym("X")),
                InlineClass::new(vec![Term::Ref(sym("X")), Term::word(sym("d"))]),
            ])],
        )
    }

    #[test]
    fn unification_example_is_valid() {
        assert!(validate(&xxd()).is_empty());
    }

    #[test]
    fn undefined_reference_is_reported() {
        let g = Grammar::new(vec![], vec![Rule::new(vec![InlineClass::class_ref(sym("Y"))])]);
        let diags = validate(&g);
        assert_eq!(diags.len(), 1);
        assert!(matches!(&diags[0], Diagnostic::UndefinedReference { name, .. } if name.as_str() == "Y"));
    }

    #[test]
    fn two_node_cycle_is_reported() {
        let g = Grammar::new(
            vec![
                ClassDef { name: sym("A"), body: ClassBody::Rename(sym("B")) },
                ClassDef { name: sym("B"), body: ClassBody::Rename(sym("A")) },
            ],
            vec![Rule::new(vec![InlineClass::class_ref(sym("A"))])],
        );
        let diags = validate(&g);
        assert!(diags.iter().any(|d| matches!(d, Diagnostic::Cycle { .. })));
    }

    #[test]
    fn duplicate_names_rules_and_empty_classes() {
        let mut g = xxd();
        g.defs.push(g.defs[0].clone());
        g.rules.push(g.rules[0].clone());
        g.rules.push(Rule::new(vec![InlineClass::new(vec![])]));
        let diags = validate(&g);
        assert!(diags.contains(&Diagnostic::DuplicateName(sym("X"))));
        assert!(diags.contains(&Diagnostic::DuplicateRule { first: 0, second: 1 }));
        assert!(diags.contains(&Diagnostic::EmptyClass { at: Location::Rule(2) }));
    }

    #[test]
    fn symbols_reject_reserved_characters() {
        assert!(Symbol::new("a|b").is_err());
        assert!(Symbol::new("").is_err());
        assert!(Symbol::new("x y").is_err());
        assert!(Symbol::new("V(1)").is_ok());
    }

    #[test]
    fn listing_grammar_has_one_alternative_per_distinct_sentence() {
        let c = Corpus::from_sentences([sentence("a b"), sentence("c"), sentence("a b")]);
        let g = listing_grammar(&c).unwrap();
        assert!(g.defs.is_empty());
        assert_eq!(g.rules.len(), 1);
        assert_eq!(g.rules[0].body.len(), 1);
        assert_eq!(g.rules[0].body[0].alts.len(), 2);
        assert_eq!(c.multiplicity(&sentence("a b")), 2);
        assert!(listing_grammar(&Corpus::new()).is_err());
    }

    #[test]
    fn structural_equality_ignores_names_and_order() {
        let renamed = Grammar::new(
            vec![ClassDef::alternatives(sym("Q"), vec![Term::word(sym("b")), Term::word(sym("a"))])],
            vec![Rule::new(vec![
                InlineClass::class_ref(sym("Q")),
                InlineClass::new(vec![Term::word(sym("d")), Term::Ref(sym("Q"))]),
            ])],
        );
        assert!(structurally_equal(&xxd(), &renamed));
        let broken = Grammar::new(
            renamed.defs.clone(),
            vec![Rule::new(vec![InlineClass::class_ref(sym("Q")), InlineClass::word(sym("d"))])],
        );
        assert!(!structurally_equal(&xxd(), &broken));
    }
}
