//! Nested bracketed tuples such as `[v_1, [verb, v_1]]`, the textual form of
//! meanings and meaning-function tables.

use std::fmt;

use crate::error::{Error, Result};
use crate::grammar::Symbol;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Tuple {
    Atom(Symbol),
    List(Vec<Tuple>),
}

impl Tuple {
    pub fn atom(s: &Symbol) -> Tuple {
        Tuple::Atom(*s)
    }

    pub fn pair(a: Tuple, b: Tuple) -> Tuple {
        Tuple::List(vec![a, b])
    }

    /// Symbols, brackets and commas each count one.
    pub fn dl(&self) -> usize {
        match self {
            Tuple::Atom(_) => 1,
            Tuple::List(items) => {
                2 + items.iter().map(Tuple::dl).sum::<usize>() + items.len().saturating_sub(1)
            }
        }
    }

    /// Parses `[a, [b, c]]`. Atoms are any runs of characters other than
    /// brackets, commas and whitespace.
    pub fn parse(text: &str) -> Result<Tuple> {
        let mut p = TupleParser { chars: text.char_indices().peekable(), text };
        let t = p.tuple()?;
        p.skip_ws();
        match p.chars.peek() {
            None => Ok(t),
            Some(&(i, c)) => Err(parse_err(i, format!("unexpected {c:?} after tuple"))),
        }
    }
}

impl fmt::Display for Tuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tuple::Atom(s) => write!(f, "{s}"),
            Tuple::List(items) => {
                f.write_str("[")?;
                for (i, t) in items.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{t}")?;
                }
                f.write_str("]")
            }
        }
    }
}

fn parse_err(offset: usize, message: String) -> Error {
    Error::Parse { line: 1, column: offset + 1, message }
}

struct TupleParser<'a> {
    chars: std::iter::Peekable<std::str::CharIndices<'a>>,
    text: &'a str,
}

impl TupleParser<'_> {
    fn skip_ws(&mut self) {
        while matches!(self.chars.peek(), Some((_, c)) if c.is_whitespace()) {
            self.chars.next();
        }
    }

    fn tuple(&mut self) -> Result<Tuple> {
        self.skip_ws();
        match self.chars.peek().copied() {
            None => Err(parse_err(self.text.len(), "unexpected end of tuple".into())),
            Some((_, '[')) => {
                self.chars.next();
                let mut items = Vec::new();
                self.skip_ws();
                if let Some((_, ']')) = self.chars.peek() {
                    self.chars.next();
                    return Ok(Tuple::List(items));
                }
                loop {
                    items.push(self.tuple()?);
                    self.skip_ws();
                    match self.chars.next() {
                        Some((_, ',')) => continue,
                        Some((_, ']')) => return Ok(Tuple::List(items)),
                        Some((i, c)) => {
                            return Err(parse_err(i, format!("expected ',' or ']', found {c:?}")))
                        }
                        None => {
                            return Err(parse_err(self.text.len(), "unclosed '['".into()))
                        }
                    }
                }
            }
            Some((start, _)) => {
                let mut end = start;
                while let Some(&(i, c)) = self.chars.peek() {
                    if c == '[' || c == ']' || c == ',' || c.is_whitespace() {
                        break;
                    }
                    end = i + c.len_utf8();
                    self.chars.next();
                }
                if end == start {
                    return Err(parse_err(start, "expected atom".into()));
                }
                Symbol::new(&self.text[start..end])
                    .map(Tuple::Atom)
                    .map_err(|_| parse_err(start, "invalid atom".into()))
            }
        }
    }
}

/// A meaning-function table: a list of `[argument, value]` tuples. Entry
/// separators are layout only and cost nothing.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct MeaningTable {
    pub entries: Vec<Tuple>,
}

impl MeaningTable {
    pub fn dl(&self) -> usize {
        self.entries.iter().map(Tuple::dl).sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts_brackets_commas_and_atoms() {
        let t = Tuple::parse("[v_0, [verb, v_0]]").unwrap();
        assert_eq!(t.dl(), 9);
        let t = Tuple::parse("[[[verb, v_9], [noun, n_99]], [[action, v_9], [object, n_99]]]").unwrap();
        assert_eq!(t.dl(), 29);
        assert_eq!(Tuple::parse("[]").unwrap().dl(), 2);
    }

    #[test]
    fn display_round_trips() {
        let text = "[[action, die], [object, nil]]";
        assert_eq!(Tuple::parse(text).unwrap().to_string(), text);
    }

    #[test]
    fn rejects_unbalanced_input() {
        assert!(Tuple::parse("[a, b").is_err());
        assert!(Tuple::parse("[a b]").is_err());
        assert!(Tuple::parse("a]").is_err());
    }
}
