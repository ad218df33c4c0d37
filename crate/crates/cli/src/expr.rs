//! Text syntax for cylinder-set expressions.
//!
//! ```text
//! expr  := term (("U" | "∪") term)*
//! term  := "A{" group (";" group)* "}"
//! group := [prime ("," prime)*] mark
//! mark  := "|"            divisible by every listed prime
//!        | "∤" | "!|"     divisible by none of them
//! ```
//!
//! `A{2|;3∤} U A{5|}` is the set of integers that are even and not multiples
//! of 3, together with the multiples of 5. `A{}` is every positive integer.
//! Primes are written as primes and converted to ranks (`2 -> 1`, `3 -> 2`).

use std::fmt::Write as _;

use coprime_core::measure::{CylinderSet, SetExpression};
use coprime_core::sieve::PrimeTable;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ParseError {
    #[error("at offset {pos}: expected {expected}")]
    Expected { pos: usize, expected: &'static str },
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("{value} is beyond the prime table limit {limit}")]
    BeyondTable { value: u64, limit: u64 },
    #[error("prime {0} is both required and excluded")]
    Conflict(u64),
    #[error("empty expression")]
    Empty,
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn rest(&self) -> &'a str {
        &self.src[self.pos..]
    }

    fn skip_ws(&mut self) {
        let trimmed = self.rest().trim_start();
        self.pos = self.src.len() - trimmed.len();
    }

    fn eat(&mut self, token: &str) -> bool {
        self.skip_ws();
        if self.rest().starts_with(token) {
            self.pos += token.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, token: &str, expected: &'static str) -> Result<(), ParseError> {
        if self.eat(token) {
            Ok(())
        } else {
            Err(ParseError::Expected {
                pos: self.pos,
                expected,
            })
        }
    }

    fn number(&mut self) -> Option<u64> {
        self.skip_ws();
        let digits = self.rest().bytes().take_while(u8::is_ascii_digit).count();
        if digits == 0 {
            return None;
        }
        let value = self.rest()[..digits].parse().ok()?;
        self.pos += digits;
        Some(value)
    }

    fn term(&mut self, primes: &PrimeTable) -> Result<CylinderSet, ParseError> {
        self.expect("A{", "`A{`")?;
        let mut divisible = Vec::new();
        let mut excluded = Vec::new();
        loop {
            let mut listed = Vec::new();
            if let Some(n) = self.number() {
                listed.push(n);
                while self.eat(",") {
                    let n = self.number().ok_or(ParseError::Expected {
                        pos: self.pos,
                        expected: "a prime after `,`",
                    })?;
                    listed.push(n);
                }
            }
            if self.eat("∤") || self.eat("!|") {
                excluded.extend(listed);
            } else if self.eat("|") {
                divisible.extend(listed);
            } else if !listed.is_empty() {
                return Err(ParseError::Expected {
                    pos: self.pos,
                    expected: "`|` or `∤` after the prime list",
                });
            }
            if !self.eat(";") {
                break;
            }
        }
        self.expect("}", "`}`")?;
        if let Some(&p) = divisible.iter().find(|p| excluded.contains(p)) {
            return Err(ParseError::Conflict(p));
        }
        let to_ranks = |list: Vec<u64>| -> Result<Vec<usize>, ParseError> {
            list.into_iter().map(|p| rank_of(p, primes)).collect()
        };
        let cylinder = CylinderSet::new(to_ranks(divisible)?, to_ranks(excluded)?)
            .expect("ranks are positive and conflicts were rejected");
        Ok(cylinder)
    }
}

fn rank_of(p: u64, primes: &PrimeTable) -> Result<usize, ParseError> {
    match primes.is_prime(p) {
        None => Err(ParseError::BeyondTable {
            value: p,
            limit: primes.limit(),
        }),
        Some(false) => Err(ParseError::NotPrime(p)),
        Some(true) => Ok(primes.rank(p).expect("prime is in table")),
    }
}

/// Parses an expression; primes are resolved against `primes`.
pub fn parse_expression(src: &str, primes: &PrimeTable) -> Result<SetExpression, ParseError> {
    let mut parser = Parser { src, pos: 0 };
    parser.skip_ws();
    if parser.rest().is_empty() {
        return Err(ParseError::Empty);
    }
    let mut terms = vec![parser.term(primes)?];
    while parser.eat("U") || parser.eat("∪") {
        terms.push(parser.term(primes)?);
    }
    parser.skip_ws();
    if !parser.rest().is_empty() {
        return Err(ParseError::Expected {
            pos: parser.pos,
            expected: "`U` or end of input",
        });
    }
    Ok(SetExpression::union_of(terms))
}

/// Renders a cylinder back into the text syntax, with primes (not ranks).
pub fn format_cylinder(c: &CylinderSet, primes: &PrimeTable) -> String {
    let list = |ranks: &[usize]| {
        ranks
            .iter()
            .map(|&r| {
                primes
                    .nth(r)
                    .map_or_else(|| format!("#{r}"), |p| p.to_string())
            })
            .collect::<Vec<_>>()
            .join(",")
    };
    let mut out = String::from("A{");
    match (c.divisible().is_empty(), c.not_divisible().is_empty()) {
        (true, true) => {}
        (false, true) => write!(out, "{}|", list(c.divisible())).unwrap(),
        (true, false) => write!(out, "{}∤", list(c.not_divisible())).unwrap(),
        (false, false) => {
            write!(out, "{}|;{}∤", list(c.divisible()), list(c.not_divisible())).unwrap()
        }
    }
    out.push('}');
    out
}

/// Renders a whole expression; the empty set is written `∅`.
pub fn format_expression(e: &SetExpression, primes: &PrimeTable) -> String {
    if e.is_empty() {
        return "∅".into();
    }
    e.terms()
        .iter()
        .map(|c| format_cylinder(c, primes))
        .collect::<Vec<_>>()
        .join(" U ")
}
