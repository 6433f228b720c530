//! Parser for Laurent polynomials in `t`.
//!
//! ```text
//! expr   = sign? term (('+' | '-') term)*
//! term   = factor ('*'? factor)*
//! factor = atom ('^' '-'? digits)?
//! atom   = digits | 't' | '(' expr ')'
//! ```
//!
//! Whitespace is ignored between tokens.  A negative exponent is accepted
//! only on a unit `±t^k`.

use num_bigint::BigInt;
use num_traits::{One, Signed};

use crate::error::{Error, Result};
use crate::poly::LaurentPoly;

/// Largest accepted exponent magnitude.
pub const MAX_EXPONENT: u64 = 1 << 20;

/// Parse a polynomial such as `t^2-3t+1`, `t^-1 - 3 + t` or `2*(t-1)^2`.
pub fn parse_poly(text: &str) -> Result<LaurentPoly> {
    let mut p = Parser {
        s: text.as_bytes(),
        pos: 0,
    };
    let v = p.expr()?;
    p.skip_ws();
    if p.pos < p.s.len() {
        return Err(p.error("unexpected character"));
    }
    Ok(v)
}

struct Parser<'a> {
    s: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn error(&self, message: &str) -> Error {
        let found = match self.s.get(self.pos) {
            Some(&c) => format!(" `{}`", c as char),
            None => " end of input".to_string(),
        };
        Error::Syntax {
            offset: self.pos,
            message: format!("{message}, found{found}"),
        }
    }

    fn skip_ws(&mut self) {
        while self.s.get(self.pos).is_some_and(u8::is_ascii_whitespace) {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.s.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<LaurentPoly> {
        let mut acc = match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                -self.term()?
            }
            Some(b'+') => {
                self.pos += 1;
                self.term()?
            }
            _ => self.term()?,
        };
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    acc = &acc + &self.term()?;
                }
                Some(b'-') => {
                    self.pos += 1;
                    acc = &acc - &self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<LaurentPoly> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    acc = &acc * &self.factor()?;
                }
                Some(c) if c.is_ascii_digit() || c == b't' || c == b'(' => {
                    acc = &acc * &self.factor()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn factor(&mut self) -> Result<LaurentPoly> {
        let base = self.atom()?;
        if self.peek() != Some(b'^') {
            return Ok(base);
        }
        let caret = self.pos;
        self.pos += 1;
        let negative = if self.peek() == Some(b'-') {
            self.pos += 1;
            true
        } else {
            false
        };
        self.skip_ws();
        let start = self.pos;
        let digits = self.digits();
        if digits.is_empty() {
            return Err(self.error("expected an exponent"));
        }
        let e: u64 = match digits.parse() {
            Ok(e) if e <= MAX_EXPONENT => e,
            _ => {
                return Err(Error::Syntax {
                    offset: start,
                    message: format!("exponent {digits} is too large"),
                })
            }
        };
        if !negative {
            return Ok(base.pow(e as u32));
        }
        let is_unit = base.coeffs().len() == 1 && base.leading().abs().is_one();
        if !is_unit {
            return Err(Error::Syntax {
                offset: caret,
                message: format!("negative exponent on `{base}`, which is not a unit"),
            });
        }
        // (±t^k)^-e = ±t^(-ke) with the sign raised to the e-th power.
        let sign = if base.leading().is_negative() && e % 2 == 1 {
            -1
        } else {
            1
        };
        Ok(LaurentPoly::monomial(sign, -base.min_exp() * e as i64))
    }

    fn digits(&mut self) -> String {
        let start = self.pos;
        while self.s.get(self.pos).is_some_and(u8::is_ascii_digit) {
            self.pos += 1;
        }
        String::from_utf8_lossy(&self.s[start..self.pos]).into_owned()
    }

    fn atom(&mut self) -> Result<LaurentPoly> {
        match self.peek() {
            Some(c) if c.is_ascii_digit() => {
                let d = self.digits();
                let n: BigInt = d.parse().expect("ascii digits");
                Ok(LaurentPoly::constant(n))
            }
            Some(b't') => {
                self.pos += 1;
                Ok(LaurentPoly::monomial(1, 1))
            }
            Some(b'(') => {
                self.pos += 1;
                let v = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.error("expected `)`"));
                }
                self.pos += 1;
                Ok(v)
            }
            _ => Err(self.error("expected a number, `t` or `(`")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(c: &[i64]) -> LaurentPoly {
        LaurentPoly::from_coeffs(c)
    }

    #[test]
    fn examples() {
        assert_eq!(parse_poly("t^2-3t+1").unwrap(), p(&[1, -3, 1]));
        assert_eq!(
            parse_poly("t^-1 - 3 + t").unwrap(),
            LaurentPoly::from_laurent(&[1, -3, 1], -1)
        );
        match parse_poly("t^^2") {
            Err(Error::Syntax { offset, .. }) => assert_eq!(offset, 2),
            other => panic!("expected a syntax error, got {other:?}"),
        }
    }

    #[test]
    fn products_and_parentheses() {
        let f = p(&[1, -3, 1]);
        assert_eq!(
            parse_poly("2*(t^2-3t+1)").unwrap(),
            f.scale(&BigInt::from(2))
        );
        assert_eq!(parse_poly("(t-1)*(t^2-3t+1)").unwrap(), &p(&[-1, 1]) * &f);
        assert_eq!(parse_poly("6(t - 1)").unwrap(), p(&[-6, 6]));
        assert_eq!(parse_poly("(t-1)(t+1)").unwrap(), p(&[-1, 0, 1]));
        assert_eq!(parse_poly("-t").unwrap(), p(&[0, -1]));
        assert_eq!(
            parse_poly("  - 2 t ^ 3 ").unwrap(),
            LaurentPoly::monomial(-2, 3)
        );
        assert_eq!(
            parse_poly("(-t)^-3").unwrap(),
            LaurentPoly::monomial(-1, -3)
        );
        assert_eq!(
            parse_poly("(t^2)^-2").unwrap(),
            LaurentPoly::monomial(1, -4)
        );
        assert_eq!(parse_poly("0").unwrap(), LaurentPoly::zero());
        assert_eq!(
            parse_poly("123456789012345678901234567890").unwrap(),
            LaurentPoly::constant("123456789012345678901234567890".parse::<BigInt>().unwrap())
        );
    }

    #[test]
    fn errors() {
        for bad in [
            "",
            "t +",
            "(t-1",
            "x",
            "t^",
            "2t)",
            "(2t)^-1",
            "t^99999999999",
        ] {
            assert!(
                matches!(parse_poly(bad), Err(Error::Syntax { .. })),
                "{bad:?} should not parse"
            );
        }
    }

    proptest! {
        #[test]
        fn print_parse_round_trip(c in prop::collection::vec(-20i64..=20, 0..8), k in -5i64..=5) {
            let f = LaurentPoly::from_laurent(&c, k);
            prop_assert_eq!(parse_poly(&f.to_string()).unwrap(), f);
        }
    }
}
