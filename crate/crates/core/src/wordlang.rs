//! Text form of [`Element`]s.
//!
//! ```text
//! expr   := ['-'] term (('+' | '-') term)*
//! term   := [scalar '*'] word
//! word   := letter (ws letter)* | '1'
//! letter := 'u' ['*'] '(' int ',' int ')' | 'g' ['-'] '(' int ')'
//! scalar := decimal | '(' decimal ',' decimal ')'
//! ```
//!
//! Juxtaposition is the product and binds tighter than `+`. A leading minus
//! is accepted so that printed elements with a negative first coefficient
//! read back.

use num_complex::Complex64 as C64;
use std::fmt;
use thiserror::Error;

use crate::kernel::{ONE, ZERO};
use crate::words::{Alphabet, Element, Letter, Word};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ParseErrorKind {
    Syntax(String),
    IndexOutOfRange { index: u64, max: usize },
    WrongLetterKind { letter: String, expected: &'static str },
}

/// Parse failure; `position` is the 0-based byte offset into the input.
#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("at position {position}: {kind}")]
pub struct ParseError {
    pub position: usize,
    pub kind: ParseErrorKind,
}

impl fmt::Display for ParseErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParseErrorKind::Syntax(msg) => write!(f, "syntax error: {msg}"),
            ParseErrorKind::IndexOutOfRange { index, max } => {
                write!(f, "index {index} out of range 1..={max}")
            }
            ParseErrorKind::WrongLetterKind { letter, expected } => {
                write!(f, "letter {letter} not allowed here, expected {expected} letters")
            }
        }
    }
}

struct Parser<'a> {
    src: &'a str,
    bytes: &'a [u8],
    pos: usize,
    alphabet: Alphabet,
}

impl<'a> Parser<'a> {
    fn err<T>(&self, at: usize, msg: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError {
            position: at,
            kind: ParseErrorKind::Syntax(msg.into()),
        })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<u8> {
        self.bytes.get(self.pos).copied()
    }

    fn expect(&mut self, c: u8) -> Result<(), ParseError> {
        self.skip_ws();
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            self.err(self.pos, format!("expected '{}'", c as char))
        }
    }

    fn expr(&mut self) -> Result<Element, ParseError> {
        let mut out = Element::zero();
        self.skip_ws();
        let mut sign = 1.0;
        if self.peek() == Some(b'-') {
            self.pos += 1;
            sign = -1.0;
        }
        loop {
            let (c, w) = self.term()?;
            out.add_term(w, c * sign);
            self.skip_ws();
            match self.peek() {
                None => return Ok(out),
                Some(b'+') => sign = 1.0,
                Some(b'-') => sign = -1.0,
                Some(_) => return self.err(self.pos, "expected '+', '-' or end of input"),
            }
            self.pos += 1;
        }
    }

    fn term(&mut self) -> Result<(C64, Word), ParseError> {
        self.skip_ws();
        let start = self.pos;
        match self.peek() {
            Some(b'0'..=b'9') | Some(b'.') => {
                let (x, text) = self.decimal(false)?;
                self.skip_ws();
                if self.peek() == Some(b'*') {
                    self.pos += 1;
                    Ok((C64::new(x, 0.0), self.word()?))
                } else if text == "1" {
                    Ok((ONE, Word::unit()))
                } else if text == "0" {
                    // Printed form of the empty element.
                    Ok((ZERO, Word::unit()))
                } else {
                    self.err(start, "a scalar must be followed by '*' and a word")
                }
            }
            Some(b'(') => {
                let c = self.complex()?;
                self.expect(b'*')?;
                Ok((c, self.word()?))
            }
            Some(b'u') | Some(b'g') => Ok((ONE, self.word()?)),
            Some(_) => self.err(start, "expected a scalar, a letter or '1'"),
            None => self.err(start, "unexpected end of input"),
        }
    }

    fn word(&mut self) -> Result<Word, ParseError> {
        self.skip_ws();
        if self.peek() == Some(b'1') {
            let at = self.pos;
            self.pos += 1;
            if matches!(self.peek(), Some(b'0'..=b'9') | Some(b'.')) {
                return self.err(at, "expected a word");
            }
            return Ok(Word::unit());
        }
        let mut letters = vec![self.letter()?];
        loop {
            self.skip_ws();
            match self.peek() {
                Some(b'u') | Some(b'g') => letters.push(self.letter()?),
                _ => return Ok(Word::new(letters)),
            }
        }
    }

    fn letter(&mut self) -> Result<Letter, ParseError> {
        self.skip_ws();
        let start = self.pos;
        let letter = match self.peek() {
            Some(b'u') => {
                self.pos += 1;
                let star = self.peek() == Some(b'*');
                if star {
                    self.pos += 1;
                }
                self.expect(b'(')?;
                let i = self.index()?;
                self.expect(b',')?;
                let j = self.index()?;
                self.expect(b')')?;
                Letter::U { i: i.1, j: j.1, star }
            }
            Some(b'g') => {
                self.pos += 1;
                let inv = self.peek() == Some(b'-');
                if inv {
                    self.pos += 1;
                }
                self.expect(b'(')?;
                let i = self.index()?;
                self.expect(b')')?;
                Letter::G { i: i.1, inv }
            }
            _ => return self.err(start, "expected a letter 'u' or 'g'"),
        };
        self.check_letter(letter, start)?;
        Ok(letter)
    }

    fn check_letter(&self, letter: Letter, at: usize) -> Result<(), ParseError> {
        let (expected, n) = match self.alphabet {
            Alphabet::Matrix(n) => ("fundamental u(i,j)", n),
            Alphabet::Group(n) => ("free-group g(i)", n),
        };
        let kind_ok = matches!(
            (self.alphabet, letter),
            (Alphabet::Matrix(_), Letter::U { .. }) | (Alphabet::Group(_), Letter::G { .. })
        );
        if !kind_ok {
            return Err(ParseError {
                position: at,
                kind: ParseErrorKind::WrongLetterKind {
                    letter: letter.to_string(),
                    expected,
                },
            });
        }
        let indices: &[u32] = match letter {
            Letter::U { i, j, .. } => &[i, j],
            Letter::G { i, .. } => &[i],
        };
        for &k in indices {
            if k == 0 || k as usize > n {
                return Err(ParseError {
                    position: at,
                    kind: ParseErrorKind::IndexOutOfRange {
                        index: k as u64,
                        max: n,
                    },
                });
            }
        }
        Ok(())
    }

    fn index(&mut self) -> Result<(usize, u32), ParseError> {
        self.skip_ws();
        let start = self.pos;
        while matches!(self.peek(), Some(b'0'..=b'9')) {
            self.pos += 1;
        }
        if start == self.pos {
            return self.err(start, "expected an integer index");
        }
        let text = &self.src[start..self.pos];
        match text.parse::<u32>() {
            Ok(v) => Ok((start, v)),
            Err(_) => Err(ParseError {
                position: start,
                kind: ParseErrorKind::IndexOutOfRange {
                    index: text.parse::<u64>().unwrap_or(u64::MAX),
                    max: self.alphabet.size(),
                },
            }),
        }
    }

    fn decimal(&mut self, signed: bool) -> Result<(f64, &'a str), ParseError> {
        self.skip_ws();
        let start = self.pos;
        if signed && matches!(self.peek(), Some(b'-') | Some(b'+')) {
            self.pos += 1;
        }
        let digits_start = self.pos;
        while matches!(self.peek(), Some(b'0'..=b'9') | Some(b'.')) {
            self.pos += 1;
        }
        if self.pos == digits_start {
            return self.err(start, "expected a number");
        }
        if matches!(self.peek(), Some(b'e') | Some(b'E')) {
            let save = self.pos;
            self.pos += 1;
            if matches!(self.peek(), Some(b'-') | Some(b'+')) {
                self.pos += 1;
            }
            let exp_start = self.pos;
            while matches!(self.peek(), Some(b'0'..=b'9')) {
                self.pos += 1;
            }
            if exp_start == self.pos {
                self.pos = save;
            }
        }
        let text = &self.src[start..self.pos];
        match text.parse::<f64>() {
            Ok(x) => Ok((x, text)),
            Err(_) => self.err(start, format!("malformed number '{text}'")),
        }
    }

    fn complex(&mut self) -> Result<C64, ParseError> {
        self.expect(b'(')?;
        let (re, _) = self.decimal(true)?;
        self.expect(b',')?;
        let (im, _) = self.decimal(true)?;
        self.expect(b')')?;
        Ok(C64::new(re, im))
    }
}

/// Parses `text` into an element whose letters belong to `alphabet`.
pub fn parse(text: &str, alphabet: Alphabet) -> Result<Element, ParseError> {
    let mut p = Parser {
        src: text,
        bytes: text.as_bytes(),
        pos: 0,
        alphabet,
    };
    p.expr()
}

fn fmt_real(x: f64) -> String {
    // Display gives the shortest string that reads back to the same f64.
    format!("{}", x + 0.0)
}

fn fmt_coeff(c: C64) -> Option<String> {
    if c == ONE {
        None
    } else if c.im == 0.0 {
        Some(fmt_real(c.re))
    } else {
        Some(format!("({},{})", fmt_real(c.re), fmt_real(c.im)))
    }
}

/// Canonical text form: terms in graded-lexicographic word order, unit
/// coefficients omitted, negative real coefficients written with `-`.
pub fn print(x: &Element) -> String {
    if x.is_zero() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (k, (w, c)) in x.iter().enumerate() {
        let mut c = *c;
        let negative = c.im == 0.0 && c.re < 0.0;
        if negative {
            c = -c;
        }
        match (k, negative) {
            (0, true) => out.push('-'),
            (0, false) => {}
            (_, true) => out.push_str(" - "),
            (_, false) => out.push_str(" + "),
        }
        match fmt_coeff(c) {
            Some(s) => {
                out.push_str(&s);
                out.push('*');
            }
            None => {}
        }
        out.push_str(&w.to_string());
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    const U2: Alphabet = Alphabet::Matrix(2);

    #[test]
    fn parses_products() {
        let e = parse("u(1,2) u*(2,1)", U2).unwrap();
        let want = Element::from(Word::new(vec![Letter::u(1, 2), Letter::u_star(2, 1)]));
        assert_eq!(e, want);
    }

    #[test]
    fn parses_scalars() {
        let e = parse("(0,1)*u(1,1) + 2*u(2,2)", U2).unwrap();
        let mut want = Element::zero();
        want.add_term(Word::from(Letter::u(1, 1)), C64::new(0.0, 1.0));
        want.add_term(Word::from(Letter::u(2, 2)), C64::new(2.0, 0.0));
        assert_eq!(e, want);
    }

    #[test]
    fn rejects_out_of_range_index() {
        let err = parse("u(3,1)", U2).unwrap_err();
        assert_eq!(err.position, 0);
        assert!(matches!(err.kind, ParseErrorKind::IndexOutOfRange { index: 3, max: 2 }));
    }

    #[test]
    fn rejects_wrong_letter_kind() {
        let err = parse("u(1,1) g(1)", U2).unwrap_err();
        assert_eq!(err.position, 7);
        assert!(matches!(err.kind, ParseErrorKind::WrongLetterKind { .. }));
        assert!(parse("u(1,1)", Alphabet::Group(2)).is_err());
    }

    #[test]
    fn syntax_errors_carry_positions() {
        assert_eq!(parse("u(1,", U2).unwrap_err().position, 4);
        assert_eq!(parse("2 u(1,1)", U2).unwrap_err().position, 0);
        assert!(parse("", U2).is_err());
        assert!(parse("u(1,1) +", U2).is_err());
    }

    #[test]
    fn prints_examples() {
        let e = Element::term(C64::new(0.0, 1.0), Word::from(Letter::u(1, 1)));
        assert_eq!(print(&e), "(0,1)*u(1,1)");
        assert_eq!(print(&Element::zero()), "0");
        assert_eq!(print(&Element::unit()), "1");
        assert_eq!(parse("0", U2).unwrap(), Element::zero());
    }

    #[test]
    fn group_letters_and_unit() {
        let e = parse("1 - 0.5*g(1) g-(2)", Alphabet::Group(2)).unwrap();
        assert_eq!(e.len(), 2);
        assert_eq!(print(&e), "1 - 0.5*g(1) g-(2)");
        assert_eq!(parse(&print(&e), Alphabet::Group(2)).unwrap(), e);
    }

    #[test]
    fn negative_first_term_round_trips() {
        let e = Element::term(C64::new(-2.5, 0.0), Word::from(Letter::u(1, 2)));
        assert_eq!(print(&e), "-2.5*u(1,2)");
        assert_eq!(parse(&print(&e), U2).unwrap(), e);
    }

    #[test]
    fn exponent_scalars() {
        let e = parse("1e-7*u(1,1) + (2.5E3,-1e-2)*u(2,1)", U2).unwrap();
        assert_eq!(e.coefficient(&Word::from(Letter::u(1, 1))), C64::new(1e-7, 0.0));
        assert_eq!(e.coefficient(&Word::from(Letter::u(2, 1))), C64::new(2500.0, -0.01));
    }
}
