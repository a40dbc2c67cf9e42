//! Words over the signed generators, with the CLI text syntax.
//!
//! Syntax: whitespace-separated tokens `x<i>` with an optional `^<k>` power,
//! k a nonzero integer. The leftmost token is the leftmost factor of the
//! product. Negative powers expand into repeated inverse letters.

use std::fmt;
use std::str::FromStr;

use crate::forest::Letter;
use crate::{Error, Result};

/// A sequence of signed generators.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Word {
    letters: Vec<Letter>,
}

impl Word {
    pub fn empty() -> Word {
        Word { letters: Vec::new() }
    }

    pub fn from_letters(letters: Vec<Letter>) -> Word {
        Word { letters }
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    /// Number of letters counting exponent multiplicities.
    pub fn letter_count(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// Checks every letter index against the arity.
    pub fn validate(&self, n: usize) -> Result<()> {
        for l in &self.letters {
            l.validate(n)?;
        }
        Ok(())
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, l) in self.letters.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

impl FromStr for Word {
    type Err = Error;

    fn from_str(s: &str) -> Result<Word> {
        let mut letters = Vec::new();
        let mut rest = s;
        let mut offset = 0;
        loop {
            let trimmed = rest.trim_start();
            offset += rest.len() - trimmed.len();
            rest = trimmed;
            if rest.is_empty() {
                break;
            }
            let end = rest.find(char::is_whitespace).unwrap_or(rest.len());
            let token = &rest[..end];
            parse_token(token, offset, &mut letters)?;
            offset += end;
            rest = &rest[end..];
        }
        Ok(Word { letters })
    }
}

fn parse_token(token: &str, pos: usize, out: &mut Vec<Letter>) -> Result<()> {
    let err = |msg: &str| Error::Parse { pos, msg: format!("{msg} in token '{token}'") };
    let body = token.strip_prefix('x').ok_or_else(|| err("expected 'x<i>'"))?;
    let (index_str, power_str) = match body.split_once('^') {
        Some((i, p)) => (i, Some(p)),
        None => (body, None),
    };
    let index: usize = index_str.parse().map_err(|_| err("bad generator index"))?;
    let power: i64 = match power_str {
        Some(p) => p.parse().map_err(|_| err("bad exponent"))?,
        None => 1,
    };
    if power == 0 {
        return Err(err("exponent must be nonzero"));
    }
    let letter = if power > 0 { Letter::gen(index) } else { Letter::inv(index) };
    for _ in 0..power.unsigned_abs() {
        out.push(letter);
    }
    Ok(())
}
