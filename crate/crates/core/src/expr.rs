//! Tiny arithmetic expression reader for thresholds such as `9/100` or
//! `(4+sqrt(5))/44`.
//!
//! Grammar: `expr := term (('+'|'-') term)*`, `term := factor (('*'|'/') factor)*`,
//! `factor := ('+'|'-') factor | number | '(' expr ')' | 'sqrt' '(' expr ')'`.

use crate::error::{params, Result};

pub fn parse_real(text: &str) -> Result<f64> {
    let raw: Vec<char> = text.chars().collect();
    for w in raw.windows(3) {
        if w[1].is_whitespace() && is_word(w[0]) && is_word(w[2]) {
            return Err(params(format!("`{text}`: missing operator between tokens")));
        }
    }
    let mut p = Parser {
        chars: text.chars().filter(|c| !c.is_whitespace()).collect(),
        pos: 0,
        source: text,
    };
    if p.chars.is_empty() {
        return Err(params("empty expression"));
    }
    let v = p.expr()?;
    if p.pos != p.chars.len() {
        return Err(p.error("unexpected trailing input"));
    }
    if !v.is_finite() {
        return Err(params(format!("`{text}` is not a finite number")));
    }
    Ok(v)
}

fn is_word(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '.'
}

struct Parser<'a> {
    chars: Vec<char>,
    pos: usize,
    source: &'a str,
}

impl Parser<'_> {
    fn error(&self, what: &str) -> crate::error::Error {
        params(format!("{what} at position {} in `{}`", self.pos, self.source))
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<f64> {
        let mut v = self.term()?;
        loop {
            if self.eat('+') {
                v += self.term()?;
            } else if self.eat('-') {
                v -= self.term()?;
            } else {
                return Ok(v);
            }
        }
    }

    fn term(&mut self) -> Result<f64> {
        let mut v = self.factor()?;
        loop {
            if self.eat('*') {
                v *= self.factor()?;
            } else if self.eat('/') {
                let d = self.factor()?;
                if d == 0.0 {
                    return Err(self.error("division by zero"));
                }
                v /= d;
            } else {
                return Ok(v);
            }
        }
    }

    fn factor(&mut self) -> Result<f64> {
        if self.eat('-') {
            return Ok(-self.factor()?);
        }
        if self.eat('+') {
            return self.factor();
        }
        if self.eat('(') {
            let v = self.expr()?;
            if !self.eat(')') {
                return Err(self.error("expected `)`"));
            }
            return Ok(v);
        }
        let rest: String = self.chars[self.pos..].iter().collect();
        if rest.starts_with("sqrt(") {
            self.pos += 5;
            let v = self.expr()?;
            if !self.eat(')') {
                return Err(self.error("expected `)`"));
            }
            if v < 0.0 {
                return Err(self.error("square root of a negative number"));
            }
            return Ok(v.sqrt());
        }
        let start = self.pos;
        while matches!(self.peek(), Some(c) if c.is_ascii_digit() || c == '.') {
            self.pos += 1;
        }
        // exponent part, e.g. 1e-3
        if matches!(self.peek(), Some('e' | 'E')) && self.pos > start {
            let save = self.pos;
            self.pos += 1;
            if matches!(self.peek(), Some('+' | '-')) {
                self.pos += 1;
            }
            let digits = self.pos;
            while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
                self.pos += 1;
            }
            if self.pos == digits {
                self.pos = save;
            }
        }
        let token: String = self.chars[start..self.pos].iter().collect();
        token.parse().map_err(|_| {
            self.pos = start;
            self.error("expected a number")
        })
    }
}
