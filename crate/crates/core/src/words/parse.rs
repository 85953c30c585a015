//! Recursive-descent parser for the word grammar.
//!
//! ```text
//! word   := factor*                  (juxtaposition, `*` optional)
//! factor := atom ('^' integer)?
//! atom   := 'x' digits | '(' word ')' | '[' word ',' word ']' | '1'
//! ```

use super::{Word, WordError};

pub fn parse_word(text: &str, rank: usize) -> Result<Word, WordError> {
    let mut p = Parser {
        bytes: text.as_bytes(),
        pos: 0,
        rank,
    };
    let w = p.parse_sequence(&[])?;
    p.skip_seps();
    if p.pos < p.bytes.len() {
        return Err(p.err("unexpected trailing input"));
    }
    Ok(w)
}

struct Parser<'a> {
    bytes: &'a [u8],
    pos: usize,
    rank: usize,
}

impl<'a> Parser<'a> {
    fn err(&self, msg: &str) -> WordError {
        WordError::Syntax {
            pos: self.pos,
            msg: msg.to_string(),
        }
    }

    fn peek(&self) -> Option<u8> {
        self.bytes.get(self.pos).copied()
    }

    fn skip_seps(&mut self) {
        while let Some(c) = self.peek() {
            if c.is_ascii_whitespace() || c == b'*' {
                self.pos += 1;
            } else {
                break;
            }
        }
    }

    /// Parses factors until end of input or one of `stop` is seen.
    fn parse_sequence(&mut self, stop: &[u8]) -> Result<Word, WordError> {
        let mut out = Word::identity(self.rank);
        loop {
            self.skip_seps();
            match self.peek() {
                None => break,
                Some(c) if stop.contains(&c) => break,
                Some(_) => {
                    let f = self.parse_factor()?;
                    out = super::multiply(&out, &f)?;
                }
            }
        }
        Ok(out)
    }

    fn parse_factor(&mut self) -> Result<Word, WordError> {
        let atom = self.parse_atom()?;
        self.skip_seps();
        if self.peek() == Some(b'^') {
            self.pos += 1;
            let exp = self.parse_integer()?;
            Ok(atom.pow(exp))
        } else {
            Ok(atom)
        }
    }

    fn parse_atom(&mut self) -> Result<Word, WordError> {
        match self.peek() {
            Some(b'x') => {
                self.pos += 1;
                let k = self.parse_integer()? as usize;
                Word::generator(k, self.rank)
            }
            Some(b'(') => {
                self.pos += 1;
                let w = self.parse_sequence(&[b')'])?;
                if self.peek() != Some(b')') {
                    return Err(self.err("expected ')'"));
                }
                self.pos += 1;
                Ok(w)
            }
            Some(b'[') => {
                self.pos += 1;
                let left = self.parse_sequence(&[b','])?;
                if self.peek() != Some(b',') {
                    return Err(self.err("expected ',' in commutator"));
                }
                self.pos += 1;
                let right = self.parse_sequence(&[b']'])?;
                if self.peek() != Some(b']') {
                    return Err(self.err("expected ']'"));
                }
                self.pos += 1;
                left.commutator(&right)
            }
            Some(b'1') => {
                self.pos += 1;
                Ok(Word::identity(self.rank))
            }
            _ => Err(self.err("expected 'x<k>', '(', '[' or '1'")),
        }
    }

    fn parse_integer(&mut self) -> Result<i64, WordError> {
        let start = self.pos;
        if self.peek() == Some(b'-') {
            self.pos += 1;
        }
        let digits_start = self.pos;
        while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            self.pos += 1;
        }
        if self.pos == digits_start {
            return Err(self.err("expected an integer"));
        }
        std::str::from_utf8(&self.bytes[start..self.pos])
            .unwrap()
            .parse()
            .map_err(|_| self.err("integer out of range"))
    }
}
