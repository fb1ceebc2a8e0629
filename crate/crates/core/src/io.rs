//! Text formats for corpora, grammars and induction traces.
//!
//! Corpus files hold sentences separated by newlines or `+`. A `#` starts a
//! comment; a trailing comment of the form `# x3` gives every sentence on
//! that line multiplicity 3.
//!
//! Grammar files hold one definition or rule per line, in the notation the
//! description-length metric counts, so the number of tokens in a
//! serialized grammar is its description length.

use std::collections::HashSet;
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::grammar::{
    ensure_valid, sentence_to_string, ClassBody, ClassDef, Corpus, Grammar, InlineClass, Rule, Sentence, Symbol, Term,
};
use crate::induction::{CandidateOp, ClassKey, InductionTrace, OpKind, TraceRecord};

fn parse_error(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Parse { line, column, message: message.into() }
}

/// Splits off a trailing `#` comment, returning the content and the comment.
fn split_comment(line: &str) -> (&str, Option<&str>) {
    match line.find('#') {
        Some(i) => (&line[..i], Some(&line[i + 1..])),
        None => (line, None),
    }
}

fn multiplicity(comment: Option<&str>) -> Option<usize> {
    let c = comment?.trim();
    c.strip_prefix('x')?.parse().ok().filter(|&n| n > 0)
}

pub fn parse_corpus(text: &str) -> Result<Corpus> {
    let mut corpus = Corpus::new();
    for (ln, line) in text.lines().enumerate() {
        let ln = ln + 1;
        let (content, comment) = split_comment(line);
        let count = multiplicity(comment).unwrap_or(1);
        let mut column = 1;
        for part in content.split('+') {
            let mut s: Sentence = Vec::new();
            let mut offset = 0;
            for tok in part.split_whitespace() {
                let at = part[offset..].find(tok).map_or(offset, |i| offset + i);
                offset = at + tok.len();
                let sym = Symbol::new(tok)
                    .map_err(|_| parse_error(ln, column + at, format!("reserved character in token {tok:?}")))?;
                s.push(sym);
            }
            if !s.is_empty() {
                corpus.add(s, count);
            }
            column += part.chars().count() + 1;
        }
    }
    Ok(corpus)
}

/// Sorted distinct sentences, one per line, with a `# xN` suffix when a
/// sentence occurs more than once.
pub fn serialize_corpus(corpus: &Corpus) -> String {
    let mut out = String::new();
    for (s, n) in corpus.iter() {
        out.push_str(&sentence_to_string(s));
        if n > 1 {
            let _ = write!(out, " # x{n}");
        }
        out.push('\n');
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok<'a> {
    Open,
    Close,
    Bar,
    Eq,
    Word(&'a str),
}

struct Lexed<'a> {
    tok: Tok<'a>,
    column: usize,
}

fn lex(line: &str) -> Vec<Lexed<'_>> {
    let mut out = Vec::new();
    let mut start: Option<usize> = None;
    fn flush<'a>(line: &'a str, start: &mut Option<usize>, end: usize, out: &mut Vec<Lexed<'a>>) {
        if let Some(s) = start.take() {
            out.push(Lexed { tok: Tok::Word(&line[s..end]), column: line[..s].chars().count() + 1 });
        }
    }
    for (i, c) in line.char_indices() {
        let punct = match c {
            '{' => Some(Tok::Open),
            '}' => Some(Tok::Close),
            '|' => Some(Tok::Bar),
            '=' => Some(Tok::Eq),
            _ => None,
        };
        if let Some(tok) = punct {
            flush(line, &mut start, i, &mut out);
            out.push(Lexed { tok, column: line[..i].chars().count() + 1 });
        } else if c.is_whitespace() {
            flush(line, &mut start, i, &mut out);
        } else if start.is_none() {
            start = Some(i);
        }
    }
    flush(line, &mut start, line.len(), &mut out);
    out
}

struct LineParser<'a, 'n> {
    toks: Vec<Lexed<'a>>,
    pos: usize,
    line: usize,
    end_column: usize,
    names: &'n HashSet<&'a str>,
}

impl<'a> LineParser<'a, '_> {
    fn column(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end_column, |t| t.column)
    }

    fn err(&self, message: impl Into<String>) -> Error {
        parse_error(self.line, self.column(), message)
    }

    fn at_end(&self) -> bool {
        self.pos >= self.toks.len()
    }

    fn symbol(&self, text: &str, column: usize) -> Result<Symbol> {
        Symbol::new(text).map_err(|_| parse_error(self.line, column, format!("invalid symbol {text:?}")))
    }

    fn term(&mut self) -> Result<Term> {
        let mut words: Vec<(&'a str, usize)> = Vec::new();
        while let Some(Lexed { tok: Tok::Word(w), column }) = self.toks.get(self.pos) {
            words.push((w, *column));
            self.pos += 1;
        }
        match words.as_slice() {
            [] => Err(self.err("expected a term")),
            [(w, col)] if self.names.contains(w) => Ok(Term::Ref(self.symbol(w, *col)?)),
            _ => {
                if let Some((w, col)) = words.iter().find(|(w, _)| self.names.contains(w)) {
                    return Err(parse_error(
                        self.line,
                        *col,
                        format!("class name {w:?} inside a multi-symbol term"),
                    ));
                }
                words.iter().map(|(w, c)| self.symbol(w, *c)).collect::<Result<_>>().map(Term::Seq)
            }
        }
    }

    fn class(&mut self) -> Result<InlineClass> {
        if !matches!(self.toks.get(self.pos).map(|t| &t.tok), Some(Tok::Open)) {
            return Err(self.err("expected '{'"));
        }
        self.pos += 1;
        let mut alts = vec![self.term()?];
        loop {
            match self.toks.get(self.pos).map(|t| &t.tok) {
                Some(Tok::Bar) => {
                    self.pos += 1;
                    alts.push(self.term()?);
                }
                Some(Tok::Close) => {
                    self.pos += 1;
                    return Ok(InlineClass::new(alts));
                }
                Some(_) => return Err(self.err("expected '|' or '}'")),
                None => return Err(self.err("unclosed '{'")),
            }
        }
    }

    fn classes(&mut self) -> Result<Vec<InlineClass>> {
        let mut out = Vec::new();
        while !self.at_end() {
            out.push(self.class()?);
        }
        Ok(out)
    }
}

fn is_def_line(toks: &[Lexed]) -> bool {
    matches!(toks, [Lexed { tok: Tok::Word(_), .. }, Lexed { tok: Tok::Eq, .. }, ..])
}

/// Parses and validates a grammar. A single-token term naming a defined
/// class is a reference; any other term is a terminal sequence.
pub fn parse_grammar(text: &str) -> Result<Grammar> {
    let lines: Vec<(usize, &str, Vec<Lexed>)> = text
        .lines()
        .enumerate()
        .map(|(i, l)| {
            let content = split_comment(l).0;
            (i + 1, content, lex(content))
        })
        .filter(|(_, _, toks)| !toks.is_empty())
        .collect();
    let names: HashSet<&str> = lines
        .iter()
        .filter(|(_, _, toks)| is_def_line(toks))
        .map(|(_, _, toks)| match toks[0].tok {
            Tok::Word(w) => w,
            _ => unreachable!(),
        })
        .collect();

    let mut grammar = Grammar::default();
    for (line, content, toks) in lines {
        let def_name = match (is_def_line(&toks), &toks[0]) {
            (true, Lexed { tok: Tok::Word(w), column }) => Some((*w, *column)),
            _ => None,
        };
        let mut p = LineParser {
            toks,
            pos: 0,
            line,
            end_column: content.chars().count() + 1,
            names: &names,
        };
        match def_name {
            Some((name, column)) => {
                let name = p.symbol(name, column)?;
                p.pos = 2;
                let body = match p.toks.get(2).map(|t| t.tok.clone()) {
                    Some(Tok::Word(target)) if p.toks.len() == 3 => {
                        if !names.contains(target) {
                            return Err(p.err(format!("{target:?} is not a defined class")));
                        }
                        let col = p.column();
                        ClassBody::Rename(p.symbol(target, col)?)
                    }
                    Some(Tok::Open) => {
                        let mut parts = p.classes()?;
                        if parts.len() == 1 {
                            ClassBody::Alternatives(parts.remove(0))
                        } else {
                            ClassBody::Concat(parts)
                        }
                    }
                    _ => return Err(p.err("expected '{' or a class name after '='")),
                };
                grammar.defs.push(ClassDef { name, body });
            }
            None => {
                let body = p.classes()?;
                grammar.rules.push(Rule::new(body));
            }
        }
    }
    ensure_valid(&grammar)?;
    Ok(grammar)
}

pub fn serialize_grammar(grammar: &Grammar) -> String {
    grammar.to_string()
}

/// Number of description-length tokens in a grammar text. Comments and
/// layout are free.
pub fn token_count(text: &str) -> usize {
    text.lines().map(|l| lex(split_comment(l).0).len()).sum()
}

const TRACE_HEADER: &str =
    "# iteration\top\tleft\tright\tnew_class\tdl_before\tdl_after\tdelta\tovergen_count\trules_before\trules_after";

pub fn serialize_trace(trace: &InductionTrace) -> String {
    let mut out = format!("# initial_dl\t{}\n{TRACE_HEADER}\n", trace.initial_dl);
    for r in &trace.records {
        let _ = writeln!(
            out,
            "{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}",
            r.iteration,
            r.op.kind,
            r.op.left,
            r.op.right,
            r.new_class,
            r.dl_before,
            r.dl_after,
            r.delta,
            r.overgen_count,
            r.rules_before,
            r.rules_after
        );
    }
    out
}

fn parse_operand(text: &str, line: usize) -> Result<ClassKey> {
    let key = match text.strip_prefix('{').and_then(|t| t.strip_suffix('}')) {
        Some(inner) => ClassKey::Word(
            inner
                .split_whitespace()
                .map(Symbol::new)
                .collect::<Result<Vec<_>>>()
                .map_err(|_| parse_error(line, 1, format!("bad operand {text:?}")))?,
        ),
        None => ClassKey::Named(Symbol::new(text).map_err(|_| parse_error(line, 1, format!("bad operand {text:?}")))?),
    };
    if matches!(&key, ClassKey::Word(w) if w.is_empty()) {
        return Err(parse_error(line, 1, "empty operand"));
    }
    Ok(key)
}

pub fn parse_trace(text: &str) -> Result<InductionTrace> {
    let mut trace = InductionTrace::default();
    for (ln, line) in text.lines().enumerate() {
        let ln = ln + 1;
        if let Some(rest) = line.strip_prefix("# initial_dl\t") {
            trace.initial_dl = rest
                .trim()
                .parse()
                .map_err(|_| parse_error(ln, 1, "initial_dl must be a number"))?;
            continue;
        }
        if line.starts_with('#') || line.trim().is_empty() {
            continue;
        }
        let f: Vec<&str> = line.split('\t').collect();
        if f.len() != 11 {
            return Err(parse_error(ln, 1, format!("expected 11 fields, found {}", f.len())));
        }
        let num = |i: usize| -> Result<usize> {
            f[i].parse()
                .map_err(|_| parse_error(ln, 1, format!("field {} is not a count: {:?}", i + 1, f[i])))
        };
        let kind: OpKind = f[1].parse().map_err(|_| parse_error(ln, 1, format!("unknown operation {:?}", f[1])))?;
        trace.records.push(TraceRecord {
            iteration: num(0)?,
            op: CandidateOp { kind, left: parse_operand(f[2], ln)?, right: parse_operand(f[3], ln)? },
            new_class: Symbol::new(f[4]).map_err(|_| parse_error(ln, 1, "bad class name"))?,
            dl_before: num(5)?,
            dl_after: num(6)?,
            delta: f[7].parse().map_err(|_| parse_error(ln, 1, "delta is not an integer"))?,
            overgen_count: num(8)?,
            rules_before: num(9)?,
            rules_after: num(10)?,
        });
    }
    Ok(trace)
}
