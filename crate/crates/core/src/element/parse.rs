//! Text syntax for elements.
//!
//! ```text
//! expr   := factor (('*' | whitespace) factor)*      empty input is the identity
//! factor := atom ('^' exp)?
//! atom   := 'x0' | 'x1' | 'id' | '{' pairs '}' | '(' expr ')'
//! pairs  := (word '->' word (',' word '->' word)*)?
//! exp    := '-'? digits | '{' '-'? digits '}'
//! ```

use super::Element;
use crate::error::{Error, Result};
use crate::words::BinaryWord;

pub fn parse(text: &str) -> Result<Element> {
    let mut p = Parser {
        src: text.as_bytes(),
        pos: 0,
    };
    let e = p.expr()?;
    p.skip_ws();
    if p.pos < p.src.len() {
        return Err(p.error(format!("unexpected {:?}", p.src[p.pos] as char)));
    }
    Ok(e)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn error(&self, message: impl Into<String>) -> Error {
        Error::Syntax {
            position: self.pos,
            message: message.into(),
        }
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

    fn expect(&mut self, c: u8) -> Result<()> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.error(format!("expected {:?}", c as char)))
        }
    }

    fn expr(&mut self) -> Result<Element> {
        let mut acc = Element::identity();
        let mut need_factor = false;
        let mut any = false;
        loop {
            match self.peek() {
                None | Some(b')') => {
                    if need_factor {
                        return Err(self.error("expected a factor after '*'"));
                    }
                    return Ok(acc);
                }
                Some(b'*') => {
                    if need_factor || !any {
                        return Err(self.error("unexpected '*'"));
                    }
                    self.pos += 1;
                    need_factor = true;
                }
                Some(_) => {
                    let f = self.factor()?;
                    acc = acc.compose(&f);
                    need_factor = false;
                    any = true;
                }
            }
        }
    }

    fn factor(&mut self) -> Result<Element> {
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            let k = self.exponent()?;
            Ok(base.pow(k))
        } else {
            Ok(base)
        }
    }

    fn atom(&mut self) -> Result<Element> {
        let rest = &self.src[self.pos..];
        if rest.starts_with(b"x0") {
            self.pos += 2;
            Ok(Element::x0())
        } else if rest.starts_with(b"x1") {
            self.pos += 2;
            Ok(Element::x1())
        } else if rest.starts_with(b"id") {
            self.pos += 2;
            Ok(Element::identity())
        } else if rest.starts_with(b"(") {
            self.pos += 1;
            let e = self.expr()?;
            self.expect(b')')?;
            Ok(e)
        } else if rest.starts_with(b"{") {
            let start = self.pos;
            self.pos += 1;
            let pairs = self.pairs()?;
            self.expect(b'}')?;
            Element::from_branch_pairs(pairs).map_err(|e| match e {
                Error::InvalidElement(m) => {
                    Error::InvalidElement(format!("at position {start}: {m}"))
                }
                other => other,
            })
        } else {
            Err(self.error("expected x0, x1, id, '{' or '('"))
        }
    }

    fn pairs(&mut self) -> Result<Vec<(BinaryWord, BinaryWord)>> {
        let mut out = Vec::new();
        if self.peek() == Some(b'}') {
            return Ok(out);
        }
        loop {
            let u = self.word();
            self.skip_ws();
            if !self.src[self.pos..].starts_with(b"->") {
                return Err(self.error("expected '->'"));
            }
            self.pos += 2;
            let v = self.word();
            out.push((u, v));
            match self.peek() {
                Some(b',') => self.pos += 1,
                _ => return Ok(out),
            }
        }
    }

    /// A possibly empty run of binary digits.
    fn word(&mut self) -> BinaryWord {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && matches!(self.src[self.pos], b'0' | b'1') {
            self.pos += 1;
        }
        BinaryWord::from_digits(self.src[start..self.pos].iter().map(|b| b - b'0'))
    }

    fn exponent(&mut self) -> Result<i64> {
        let braced = self.peek() == Some(b'{');
        if braced {
            self.pos += 1;
        }
        let negative = self.peek() == Some(b'-');
        if negative {
            self.pos += 1;
        }
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected an integer exponent"));
        }
        let digits = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
        let k: i64 = digits.parse().map_err(|_| Error::Syntax {
            position: start,
            message: "exponent out of range".into(),
        })?;
        if braced {
            self.expect(b'}')?;
        }
        Ok(if negative { -k } else { k })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generator_words_fold_left_to_right() {
        assert_eq!(
            parse("x0 x1").unwrap(),
            Element::x0().compose(&Element::x1())
        );
        assert_eq!(parse("x0*x1").unwrap(), parse("x0 x1").unwrap());
        assert!(parse("x0^-1 x0").unwrap().is_identity());
        assert_eq!(parse("x0^{-2}").unwrap(), Element::x0().pow(-2));
        assert_eq!(parse("(x0 x1)^2").unwrap(), parse("x0 x1 x0 x1").unwrap());
        assert!(parse("").unwrap().is_identity());
        assert!(parse("  id ").unwrap().is_identity());
    }

    #[test]
    fn branch_pair_syntax() {
        assert_eq!(parse("{00->0, 01->10, 1->11}").unwrap(), Element::x0());
        assert!(parse("{->}").unwrap().is_identity());
        assert_eq!(
            parse("{00->0,01->10,1->11} x1").unwrap(),
            Element::x0().compose(&Element::x1())
        );
    }

    #[test]
    fn round_trip_through_display() {
        for s in ["x0", "x1^-3", "x0 x1^2 x0^-1", ""] {
            let e = parse(s).unwrap();
            assert_eq!(parse(&e.to_string()).unwrap(), e);
        }
    }

    #[test]
    fn errors_carry_positions() {
        assert!(matches!(
            parse("x2"),
            Err(Error::Syntax { position: 0, .. })
        ));
        assert!(matches!(
            parse("x0 ^"),
            Err(Error::Syntax { position: 4, .. })
        ));
        assert!(matches!(
            parse("(x0"),
            Err(Error::Syntax { position: 3, .. })
        ));
        assert!(matches!(parse("x0 * * x1"), Err(Error::Syntax { .. })));
        assert!(matches!(parse("{0->0}"), Err(Error::InvalidElement(_))));
        assert!(matches!(parse("{0->0 1->1}"), Err(Error::Syntax { .. })));
    }
}
