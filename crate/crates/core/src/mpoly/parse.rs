use rug::Integer;

use crate::error::{Error, Result};
use crate::field::{Backend, Rat};

use super::XYPoly;

/// Parses a polynomial in `x` and `y`.
///
/// ```text
/// expr     = ["+" | "-"] term { ("+" | "-") term }
/// term     = factor { ["*"] factor }
/// factor   = number | "i" | "x" ["^" xexp] | "y" ["^" uint] | "(" expr ")" ["^" uint]
/// xexp     = uint | "(" uint ["/" uint] ")"
/// number   = uint "/" uint | digits ["." digits] [("e" | "E") ["+" | "-"] digits]
/// ```
///
/// Whitespace is ignored between tokens. Positions in errors are 1-based
/// character columns.
pub fn parse_poly(input: &str, backend: Backend) -> Result<XYPoly> {
    let mut p = Parser {
        chars: input.chars().collect(),
        pos: 0,
        backend,
    };
    p.skip_ws();
    if p.peek().is_none() {
        return Err(p.syntax("empty input"));
    }
    let poly = p.expr()?;
    p.skip_ws();
    match p.peek() {
        None => Ok(poly),
        Some(')') => Err(p.syntax("unbalanced ')'")),
        Some(c) => Err(p.syntax(&format!("unexpected character '{c}'"))),
    }
}

struct Parser {
    chars: Vec<char>,
    pos: usize,
    backend: Backend,
}

impl Parser {
    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn peek_at(&self, offset: usize) -> Option<char> {
        self.chars.get(self.pos + offset).copied()
    }

    fn column(&self) -> usize {
        self.pos + 1
    }

    fn syntax(&self, message: &str) -> Error {
        Error::Syntax {
            position: self.column(),
            message: message.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        while self.peek().is_some_and(char::is_whitespace) {
            self.pos += 1;
        }
    }

    fn eat(&mut self, c: char) -> bool {
        self.skip_ws();
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn constant(&self, r: Rat) -> XYPoly {
        XYPoly::monomial(self.backend, 0, Rat::new(), self.backend.from_rat(&r))
    }

    fn expr(&mut self) -> Result<XYPoly> {
        self.skip_ws();
        let negate = if self.eat('-') {
            true
        } else {
            self.eat('+');
            false
        };
        let mut acc = self.term()?;
        if negate {
            acc = acc.neg();
        }
        loop {
            if self.eat('+') {
                acc = acc.add(&self.term()?);
            } else if self.eat('-') {
                acc = acc.sub(&self.term()?);
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<XYPoly> {
        let mut acc = self.factor()?;
        loop {
            if self.eat('*') {
                acc = acc.mul(&self.factor()?);
                continue;
            }
            self.skip_ws();
            match self.peek() {
                Some(c) if c.is_ascii_digit() || matches!(c, '.' | 'x' | 'y' | 'i' | '(') => {
                    acc = acc.mul(&self.factor()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn factor(&mut self) -> Result<XYPoly> {
        self.skip_ws();
        match self.peek() {
            None => Err(self.syntax("unexpected end of input")),
            Some(c) if c.is_ascii_digit() || c == '.' => {
                let r = self.number()?;
                Ok(self.constant(r))
            }
            Some('i') => match self.backend.imaginary_unit() {
                Some(unit) => {
                    self.pos += 1;
                    Ok(XYPoly::monomial(self.backend, 0, Rat::new(), unit))
                }
                None => Err(Error::ImaginaryInExactBackend {
                    position: self.column(),
                }),
            },
            Some('x') => {
                self.pos += 1;
                let exp = if self.eat('^') { self.x_exponent()? } else { Rat::from(1) };
                Ok(XYPoly::monomial(self.backend, 0, exp, self.backend.one()))
            }
            Some('y') => {
                self.pos += 1;
                let exp = if self.eat('^') { self.y_exponent()? } else { 1 };
                Ok(XYPoly::monomial(self.backend, exp, Rat::new(), self.backend.one()))
            }
            Some('(') => {
                self.pos += 1;
                let inner = self.expr()?;
                if !self.eat(')') {
                    return Err(self.syntax("expected ')'"));
                }
                if self.eat('^') {
                    let exp = self.y_exponent()?;
                    Ok(inner.pow(exp))
                } else {
                    Ok(inner)
                }
            }
            Some(c) => Err(self.syntax(&format!("unexpected character '{c}'"))),
        }
    }

    fn digits(&mut self) -> Option<String> {
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        (self.pos > start).then(|| self.chars[start..self.pos].iter().collect())
    }

    fn uint(&mut self) -> Result<Integer> {
        self.skip_ws();
        match self.digits() {
            Some(d) => Ok(d.parse().expect("digit string")),
            None => Err(self.syntax("expected an unsigned integer")),
        }
    }

    fn number(&mut self) -> Result<Rat> {
        let int_part = self.digits().unwrap_or_default();
        let mut frac_part = String::new();
        if self.peek() == Some('.') {
            self.pos += 1;
            frac_part = self.digits().unwrap_or_default();
            if int_part.is_empty() && frac_part.is_empty() {
                return Err(self.syntax("malformed number"));
            }
        }
        let mut exponent: i64 = 0;
        if matches!(self.peek(), Some('e' | 'E')) {
            let (sign, digit_at) = match self.peek_at(1) {
                Some('-') => (-1, 2),
                Some('+') => (1, 2),
                _ => (1, 1),
            };
            if self.peek_at(digit_at).is_some_and(|c| c.is_ascii_digit()) {
                self.pos += digit_at;
                let d = self.digits().expect("checked digit");
                exponent = sign * d.parse::<i64>().map_err(|_| self.syntax("exponent too large"))?;
            }
        }
        let mantissa: Integer = format!("{int_part}{frac_part}").parse().unwrap_or_default();
        let scale = exponent - frac_part.len() as i64;
        if scale.unsigned_abs() > 100_000 {
            return Err(self.syntax("exponent too large"));
        }
        let mut value = Rat::from(mantissa);
        let pow = Integer::from(Integer::u_pow_u(10, scale.unsigned_abs() as u32));
        if scale >= 0 {
            value *= pow;
        } else {
            value /= pow;
        }
        let plain_integer = frac_part.is_empty() && exponent == 0 && !int_part.is_empty();
        if plain_integer && self.peek() == Some('/') && self.peek_at(1).is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
            let den_at = self.column();
            let den = self.uint()?;
            if den == 0 {
                return Err(Error::Syntax {
                    position: den_at,
                    message: "zero denominator".into(),
                });
            }
            value /= den;
        }
        Ok(value)
    }

    fn negative_sign(&mut self) -> Option<usize> {
        self.skip_ws();
        let at = self.column();
        self.eat('-').then_some(at)
    }

    fn x_exponent(&mut self) -> Result<Rat> {
        self.skip_ws();
        let paren = self.eat('(');
        let minus = self.negative_sign();
        let num = self.uint()?;
        let mut value = Rat::from(num);
        if paren {
            if self.eat('/') {
                let den_at = self.column();
                let den = self.uint()?;
                if den == 0 {
                    return Err(Error::Syntax {
                        position: den_at,
                        message: "zero denominator".into(),
                    });
                }
                value /= den;
            }
            if !self.eat(')') {
                return Err(self.syntax("expected ')' after exponent"));
            }
        }
        match minus {
            Some(position) if value != 0 => Err(Error::NegativeExponent { position }),
            _ => Ok(value),
        }
    }

    fn y_exponent(&mut self) -> Result<u32> {
        self.skip_ws();
        let paren = self.eat('(');
        let minus = self.negative_sign();
        let num = self.uint()?;
        if paren {
            if self.peek() == Some('/') {
                return Err(self.syntax("y-exponents and powers must be integers"));
            }
            if !self.eat(')') {
                return Err(self.syntax("expected ')' after exponent"));
            }
        }
        if let Some(position) = minus.filter(|_| num != 0) {
            return Err(Error::NegativeExponent { position });
        }
        num.to_u32().ok_or_else(|| self.syntax("exponent too large"))
    }
}
