//! Expression reader for polynomials and rational functions.
//!
//! Accepts the canonical output of [`Poly::canonical`] as well as ordinary
//! hand-written expressions: `+ - * / ^`, parentheses, integer literals,
//! variable names of the ring (trailing primes allowed, e.g. `Z1'`) and the
//! imaginary unit `i` (unless the ring has a variable named `i`).

use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;

use super::gauss::GaussRat;
use super::linalg::Matrix;
use super::poly::{Poly, Ring};
use super::ArithError;

/// Numerator/denominator pair produced by the reader. No simplification
/// beyond exact arithmetic is attempted.
#[derive(Clone, Debug)]
pub struct Fraction {
    pub num: Poly,
    pub den: Poly,
}

impl Fraction {
    fn poly(p: Poly) -> Self {
        let den = Poly::one(p.ring());
        Fraction { num: p, den }
    }

    fn add(self, o: Fraction) -> Fraction {
        if self.den == o.den {
            return Fraction { num: &self.num + &o.num, den: self.den };
        }
        Fraction { num: &(&self.num * &o.den) + &(&o.num * &self.den), den: &self.den * &o.den }
    }

    fn neg(self) -> Fraction {
        Fraction { num: -&self.num, den: self.den }
    }

    fn mul(self, o: Fraction) -> Fraction {
        Fraction { num: &self.num * &o.num, den: &self.den * &o.den }
    }

    fn inv(self, pos: usize) -> Result<Fraction, ArithError> {
        if self.num.is_zero() {
            return Err(ArithError::Parse { pos, msg: "division by zero".into() });
        }
        Ok(Fraction { num: self.den, den: self.num })
    }

    fn pow(self, e: i64, pos: usize) -> Result<Fraction, ArithError> {
        let base = if e < 0 { self.inv(pos)? } else { self };
        let k = e.unsigned_abs() as u32;
        Ok(Fraction { num: base.num.pow(k), den: base.den.pow(k) })
    }
}

struct Reader<'a> {
    src: &'a [u8],
    pos: usize,
    ring: &'a Arc<Ring>,
}

impl<'a> Reader<'a> {
    fn err<T>(&self, msg: impl Into<String>) -> Result<T, ArithError> {
        Err(ArithError::Parse { pos: self.pos, msg: msg.into() })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<Fraction, ArithError> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    acc = acc.add(self.term()?);
                }
                Some(b'-') => {
                    self.pos += 1;
                    acc = acc.add(self.term()?.neg());
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Fraction, ArithError> {
        let mut acc = self.power()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    acc = acc.mul(self.power()?);
                }
                Some(b'/') => {
                    self.pos += 1;
                    let at = self.pos;
                    acc = acc.mul(self.power()?.inv(at)?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn power(&mut self) -> Result<Fraction, ArithError> {
        let base = self.unary()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            let at = self.pos;
            let e = self.exponent()?;
            return base.pow(e, at);
        }
        Ok(base)
    }

    fn exponent(&mut self) -> Result<i64, ArithError> {
        let neg = if self.peek() == Some(b'-') {
            self.pos += 1;
            true
        } else {
            false
        };
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return self.err("expected integer exponent");
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
        let v: i64 = match text.parse() {
            Ok(v) if v <= 1024 => v,
            _ => return self.err("exponent out of range"),
        };
        Ok(if neg { -v } else { v })
    }

    fn unary(&mut self) -> Result<Fraction, ArithError> {
        match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                Ok(self.unary()?.neg())
            }
            Some(b'+') => {
                self.pos += 1;
                self.unary()
            }
            _ => self.primary(),
        }
    }

    fn primary(&mut self) -> Result<Fraction, ArithError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                if self.peek() != Some(b')') {
                    return self.err("expected ')'");
                }
                self.pos += 1;
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => {
                let start = self.pos;
                while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                    self.pos += 1;
                }
                let text = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
                let n: BigInt = text.parse().expect("digits");
                let c = GaussRat::from_rat(BigRational::from_integer(n));
                Ok(Fraction::poly(Poly::constant(self.ring, c)))
            }
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                let start = self.pos;
                while self.pos < self.src.len()
                    && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
                {
                    self.pos += 1;
                }
                while self.pos < self.src.len() && self.src[self.pos] == b'\'' {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
                if let Some(idx) = self.ring.index_of(name) {
                    return Ok(Fraction::poly(Poly::var(self.ring, idx)));
                }
                if name == "i" {
                    return Ok(Fraction::poly(Poly::constant(self.ring, GaussRat::i())));
                }
                self.pos = start;
                Err(ArithError::UnknownVariable(name.to_string()))
            }
            Some(c) => self.err(format!("unexpected character '{}'", c as char)),
            None => self.err("unexpected end of input"),
        }
    }
}

/// Reads a rational expression.
pub fn parse_fraction(ring: &Arc<Ring>, text: &str) -> Result<Fraction, ArithError> {
    let mut r = Reader { src: text.as_bytes(), pos: 0, ring };
    let out = r.expr()?;
    if r.peek().is_some() {
        return r.err("trailing input");
    }
    Ok(out)
}

/// Reads a polynomial: the expression must have a constant denominator.
pub fn parse_poly(ring: &Arc<Ring>, text: &str) -> Result<Poly, ArithError> {
    let f = parse_fraction(ring, text)?;
    match f.den.constant_value() {
        Some(c) => Ok(f.num.scale(&c.inv().ok_or(ArithError::DivisionByZero)?)),
        None => match f.num.exact_div(&f.den) {
            Some(q) => Ok(q),
            None => Err(ArithError::Parse { pos: 0, msg: format!("not a polynomial: {text}") }),
        },
    }
}

/// Reads a constant of ℚ(i), e.g. `-3/5`, `1/2+2*i`.
pub fn parse_gauss(text: &str) -> Result<GaussRat, ArithError> {
    let ring = Ring::new::<&str>(&[]);
    parse_poly(&ring, text)?
        .constant_value().ok_or_else(|| ArithError::Parse { pos: 0, msg: format!("not a constant: {text}") })
}

/// Reads a matrix given row by row as constant texts.
pub fn parse_matrix<S: AsRef<str>>(rows: &[Vec<S>]) -> Result<Matrix, ArithError> {
    let cols = rows.first().map_or(0, Vec::len);
    if rows.is_empty() || rows.iter().any(|r| r.len() != cols) {
        return Err(ArithError::Parse { pos: 0, msg: "matrix rows must be nonempty and of equal length".into() });
    }
    let data = rows.iter().map(|r| r.iter().map(|x| parse_gauss(x.as_ref())).collect()).collect::<Result<Vec<Vec<_>>, _>>()?;
    Ok(Matrix::from_rows(data))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reads_hand_written_and_canonical() {
        let r = Ring::new(&["t", "c", "s"]);
        let p = parse_poly(&r, "2*s^2 - (1/2)*c + 3").unwrap();
        assert_eq!(p.canonical(), "2/1*s^2 + -1/2*c + 3/1");
        assert_eq!(parse_poly(&r, &p.canonical()).unwrap(), p);
        let q = parse_poly(&r, "i*s + (1/2-3/4*i)*t").unwrap();
        assert_eq!(q.canonical(), "(0/1+1/1*i)*s + (1/2-3/4*i)*t");
        assert_eq!(parse_poly(&r, &q.canonical()).unwrap(), q);
    }

    #[test]
    fn fractions_and_errors() {
        let r = Ring::new(&["t", "g"]);
        let f = parse_fraction(&r, "g/(2*t)").unwrap();
        assert_eq!(f.num.canonical(), "1/1*g");
        assert_eq!(f.den.canonical(), "2/1*t");
        assert!(matches!(parse_poly(&r, "u + 1"), Err(ArithError::UnknownVariable(_))));
        assert!(matches!(parse_poly(&r, "g +"), Err(ArithError::Parse { .. })));
        assert!(matches!(parse_poly(&r, "1/t"), Err(ArithError::Parse { .. })));
        assert!(matches!(parse_fraction(&r, "1/0"), Err(ArithError::Parse { .. })));
    }

    #[test]
    fn primes_in_names() {
        let r = Ring::new(&["t", "Z1", "Z1'"]);
        let p = parse_poly(&r, "Z1' - Z1").unwrap();
        assert_eq!(p.canonical(), "1/1*Z1' + -1/1*Z1");
    }
}
