//! Parser for the operator mini-language.
//!
//! Grammar:
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := scalar '*' factor*          (scalar-prefixed; factors optional)
//!         | factor factor*
//! factor := gen ('^' nat)?
//! gen    := "A+" | "A3" | "A-" | "B+" | "B3" | "B-" | "K" | "L"
//! scalar := number | number 'i' | number ('+'|'-') number 'i'
//! ```
//!
//! Factors inside one term must appear in the canonical monomial order
//! A+ A3 A- B+ B3 B-; anything else is rejected as out of order rather
//! than rewritten. K and L are accepted wherever A3 and B3 may stand and
//! are expanded by the parser through K = A3 − 1/2 and L = B3 − 1/2, so
//! the result is always a sum of ordered monomials.
//!
//! `"1.0*"` (a scalar with an empty word) denotes a multiple of the
//! identity. Errors carry the byte offset of the offending input.

use std::fmt;

use num_complex::Complex64;
use zernike_disk::ladder::{OperatorExpr, UeaMonomial};

/// Parse failure with the byte offset where it was detected.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub offset: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "parse error at byte {}: {}", self.offset, self.message)
    }
}

impl std::error::Error for ParseError {}

/// Slot of each generator in the canonical word A+ A3 A- B+ B3 B-.
/// K and L stand in the A3 and B3 slots.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Token {
    Direct(usize),
    KDiag, // slot 1, expands to A3 − 1/2
    LDiag, // slot 4, expands to B3 − 1/2
}

impl Token {
    fn slot(self) -> usize {
        match self {
            Token::Direct(s) => s,
            Token::KDiag => 1,
            Token::LDiag => 4,
        }
    }
}

const SLOT_NAMES: [&str; 6] = ["A+", "A3", "A-", "B+", "B3", "B-"];
const ORDER_RULE: &str = "factors must follow the canonical monomial order A+ A3 A- B+ B3 B-";

struct Cursor<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn new(src: &'a str) -> Self {
        Self { src: src.as_bytes(), pos: 0 }
    }

    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn bump(&mut self) -> Option<u8> {
        let b = self.peek();
        if b.is_some() {
            self.pos += 1;
        }
        b
    }

    fn skip_ws(&mut self) {
        while self.peek().is_some_and(|b| b.is_ascii_whitespace()) {
            self.pos += 1;
        }
    }

    fn err<T>(&self, at: usize, message: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError { offset: at, message: message.into() })
    }
}

/// Parses an operator expression from source text.
pub fn parse_operator(src: &str) -> Result<OperatorExpr, ParseError> {
    let mut cur = Cursor::new(src);
    let mut monomials = Vec::new();
    cur.skip_ws();
    if cur.peek().is_none() {
        return cur.err(0, "empty operator expression");
    }
    let mut sign = 1.0;
    loop {
        let term = parse_term(&mut cur)?;
        monomials.extend(term.into_iter().map(|m| {
            UeaMonomial::new(m.coefficient * sign, m.exponents)
        }));
        cur.skip_ws();
        match cur.peek() {
            None => break,
            Some(b'+') => {
                cur.bump();
                sign = 1.0;
            }
            Some(b'-') => {
                cur.bump();
                sign = -1.0;
            }
            Some(c) => {
                return cur.err(cur.pos, format!("unexpected character '{}'", c as char));
            }
        }
        cur.skip_ws();
        if cur.peek().is_none() {
            return cur.err(cur.pos, "expected a term after '+' or '-'");
        }
    }
    Ok(OperatorExpr::from_monomials(monomials))
}

fn starts_scalar(b: u8) -> bool {
    b.is_ascii_digit() || b == b'.' || b == b'+' || b == b'-'
}

fn parse_term(cur: &mut Cursor<'_>) -> Result<Vec<UeaMonomial>, ParseError> {
    cur.skip_ws();
    let start = cur.pos;
    let scalar = match cur.peek() {
        Some(b) if starts_scalar(b) => {
            let value = parse_scalar(cur)?;
            cur.skip_ws();
            if cur.peek() != Some(b'*') {
                return cur.err(cur.pos, "expected '*' after a scalar coefficient");
            }
            cur.bump();
            Some(value)
        }
        Some(_) => None,
        None => return cur.err(start, "expected a term"),
    };

    // partial monomials; K/L expansion can fan one partial into several
    let mut partials: Vec<(Complex64, [u32; 6])> =
        vec![(scalar.unwrap_or(Complex64::new(1.0, 0.0)), [0u32; 6])];
    let mut last_slot: Option<usize> = None;
    let mut any_factor = false;
    loop {
        cur.skip_ws();
        let at = cur.pos;
        let token = match peek_generator(cur) {
            Some(t) => t,
            None => break,
        };
        let exponent = parse_exponent(cur)?;
        if let Some(prev) = last_slot {
            if token.slot() < prev {
                return cur.err(
                    at,
                    format!(
                        "generator {} out of order after {}: {}",
                        SLOT_NAMES[token.slot()], SLOT_NAMES[prev], ORDER_RULE
                    ),
                );
            }
        }
        last_slot = Some(token.slot());
        any_factor = true;
        partials = expand_factor(partials, token, exponent);
    }
    if !any_factor && scalar.is_none() {
        return cur.err(cur.pos, "expected a generator or a scalar coefficient");
    }
    Ok(partials
        .into_iter()
        .map(|(coefficient, exponents)| UeaMonomial::new(coefficient, exponents))
        .collect())
}

/// Consumes a generator token if one starts here.
fn peek_generator(cur: &mut Cursor<'_>) -> Option<Token> {
    let token = match cur.peek()? {
        b'A' | b'B' => {
            let family = cur.src[cur.pos];
            let suffix = cur.src.get(cur.pos + 1).copied()?;
            let base = if family == b'A' { 0 } else { 3 };
            let slot = match suffix {
                b'+' => base,
                b'3' => base + 1,
                b'-' => base + 2,
                _ => return None,
            };
            cur.pos += 2;
            Token::Direct(slot)
        }
        b'K' => {
            cur.pos += 1;
            Token::KDiag
        }
        b'L' => {
            cur.pos += 1;
            Token::LDiag
        }
        _ => return None,
    };
    Some(token)
}

fn parse_exponent(cur: &mut Cursor<'_>) -> Result<u32, ParseError> {
    if cur.peek() != Some(b'^') {
        return Ok(1);
    }
    cur.bump();
    let at = cur.pos;
    let mut digits = String::new();
    while cur.peek().is_some_and(|b| b.is_ascii_digit()) {
        digits.push(cur.bump().unwrap() as char);
    }
    if digits.is_empty() {
        return cur.err(at, "expected exponent digits after '^'");
    }
    digits
        .parse::<u32>()
        .map_err(|_| ParseError { offset: at, message: "exponent out of range".into() })
}

/// Applies one factor `token^exponent` to every partial monomial.
fn expand_factor(
    partials: Vec<(Complex64, [u32; 6])>,
    token: Token,
    exponent: u32,
) -> Vec<(Complex64, [u32; 6])> {
    match token {
        Token::Direct(slot) => partials
            .into_iter()
            .map(|(c, mut e)| {
                e[slot] += exponent;
                (c, e)
            })
            .collect(),
        Token::KDiag | Token::LDiag => {
            // (X3 − 1/2)^p = Σ_j C(p, j) (−1/2)^{p−j} X3^j
            let slot = token.slot();
            let mut out = Vec::with_capacity(partials.len() * (exponent as usize + 1));
            for (c, e) in partials {
                let mut binom = 1.0f64;
                for j in 0..=exponent {
                    if j > 0 {
                        binom = binom * (exponent - j + 1) as f64 / j as f64;
                    }
                    let factor = binom * (-0.5f64).powi((exponent - j) as i32);
                    let mut exps = e;
                    exps[slot] += j;
                    out.push((c * factor, exps));
                }
            }
            out
        }
    }
}

/// Parses a complex scalar: `a`, `ai`, or `a+bi` / `a-bi`.
fn parse_scalar(cur: &mut Cursor<'_>) -> Result<Complex64, ParseError> {
    let first = parse_number(cur)?;
    if cur.peek() == Some(b'i') {
        cur.bump();
        return Ok(Complex64::new(0.0, first));
    }
    if matches!(cur.peek(), Some(b'+') | Some(b'-')) {
        let mark = cur.pos;
        let sign = if cur.bump() == Some(b'-') { -1.0 } else { 1.0 };
        if cur.peek().is_some_and(|b| b.is_ascii_digit() || b == b'.') {
            if let Ok(second) = parse_number(cur) {
                if cur.peek() == Some(b'i') {
                    cur.bump();
                    return Ok(Complex64::new(first, sign * second));
                }
            }
        }
        // not an imaginary tail; the sign belongs to the next term
        cur.pos = mark;
    }
    Ok(Complex64::new(first, 0.0))
}

fn parse_number(cur: &mut Cursor<'_>) -> Result<f64, ParseError> {
    let start = cur.pos;
    if matches!(cur.peek(), Some(b'+') | Some(b'-')) {
        cur.bump();
    }
    let mut saw_digit = false;
    while cur.peek().is_some_and(|b| b.is_ascii_digit()) {
        cur.bump();
        saw_digit = true;
    }
    if cur.peek() == Some(b'.') {
        cur.bump();
        while cur.peek().is_some_and(|b| b.is_ascii_digit()) {
            cur.bump();
            saw_digit = true;
        }
    }
    if !saw_digit {
        return cur.err(start, "expected a number");
    }
    if matches!(cur.peek(), Some(b'e') | Some(b'E')) {
        let mark = cur.pos;
        cur.bump();
        if matches!(cur.peek(), Some(b'+') | Some(b'-')) {
            cur.bump();
        }
        let mut exp_digits = false;
        while cur.peek().is_some_and(|b| b.is_ascii_digit()) {
            cur.bump();
            exp_digits = true;
        }
        if !exp_digits {
            cur.pos = mark; // bare 'e' is not an exponent
        }
    }
    let text = std::str::from_utf8(&cur.src[start..cur.pos]).expect("ascii slice");
    text.parse::<f64>()
        .map_err(|_| ParseError { offset: start, message: format!("invalid number {text:?}") })
}

/// Prints an expression in a form that reparses to the identical value.
pub fn to_source(expr: &OperatorExpr) -> String {
    if expr.monomials.is_empty() {
        return "0*".to_string();
    }
    let mut out = String::new();
    for (i, m) in expr.monomials.iter().enumerate() {
        let c = m.coefficient;
        let fold_sign = i > 0 && c.im == 0.0 && c.re < 0.0;
        if i > 0 {
            out.push_str(if fold_sign { " - " } else { " + " });
        }
        let effective = if fold_sign { Complex64::new(-c.re, 0.0) } else { c };
        out.push_str(&monomial_source(effective, &m.exponents));
    }
    out
}

fn monomial_source(c: Complex64, exponents: &[u32; 6]) -> String {
    let word: Vec<String> = exponents
        .iter()
        .enumerate()
        .filter(|(_, &e)| e > 0)
        .map(|(slot, &e)| {
            if e == 1 {
                SLOT_NAMES[slot].to_string()
            } else {
                format!("{}^{}", SLOT_NAMES[slot], e)
            }
        })
        .collect();
    let word = word.join(" ");
    if word.is_empty() {
        format!("{}*", scalar_source(c))
    } else if c == Complex64::new(1.0, 0.0) {
        word
    } else {
        format!("{}*{}", scalar_source(c), word)
    }
}

fn scalar_source(c: Complex64) -> String {
    if c.im == 0.0 {
        format!("{}", c.re)
    } else if c.re == 0.0 {
        format!("{}i", c.im)
    } else if c.im < 0.0 {
        format!("{}-{}i", c.re, -c.im)
    } else {
        format!("{}+{}i", c.re, c.im)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn single_generator() {
        let e = parse_operator("A+").unwrap();
        assert_eq!(e.monomials, vec![UeaMonomial::new(c(1.0, 0.0), [1, 0, 0, 0, 0, 0])]);
    }

    #[test]
    fn scaled_word_with_exponents() {
        let e = parse_operator("2.0*A+^2 B-").unwrap();
        assert_eq!(e.monomials, vec![UeaMonomial::new(c(2.0, 0.0), [2, 0, 0, 0, 0, 1])]);
    }

    #[test]
    fn k_expands_to_a3_minus_half() {
        let e = parse_operator("K").unwrap();
        assert_eq!(
            e.monomials,
            vec![
                UeaMonomial::new(c(-0.5, 0.0), [0; 6]),
                UeaMonomial::new(c(1.0, 0.0), [0, 1, 0, 0, 0, 0]),
            ]
        );
    }

    #[test]
    fn k_squared_expands_binomially() {
        // (A3 − 1/2)² = 1/4 − A3 + A3²
        let e = parse_operator("K^2").unwrap();
        assert_eq!(
            e.monomials,
            vec![
                UeaMonomial::new(c(0.25, 0.0), [0; 6]),
                UeaMonomial::new(c(-1.0, 0.0), [0, 1, 0, 0, 0, 0]),
                UeaMonomial::new(c(1.0, 0.0), [0, 2, 0, 0, 0, 0]),
            ]
        );
    }

    #[test]
    fn identity_spelling() {
        let e = parse_operator("1.0*").unwrap();
        assert_eq!(e.monomials, vec![UeaMonomial::new(c(1.0, 0.0), [0; 6])]);
    }

    #[test]
    fn full_ordered_word() {
        let e = parse_operator("A+ A3 A- B+ B3 B-").unwrap();
        assert_eq!(e.monomials, vec![UeaMonomial::new(c(1.0, 0.0), [1; 6])]);
    }

    #[test]
    fn multi_term_with_sign_folding() {
        let e = parse_operator("A+ B+ + A- B- - 2*A3").unwrap();
        assert_eq!(
            e.monomials,
            vec![
                UeaMonomial::new(c(1.0, 0.0), [1, 0, 0, 1, 0, 0]),
                UeaMonomial::new(c(1.0, 0.0), [0, 0, 1, 0, 0, 1]),
                UeaMonomial::new(c(-2.0, 0.0), [0, 1, 0, 0, 0, 0]),
            ]
        );
    }

    #[test]
    fn complex_scalars() {
        let e = parse_operator("1+2i*A+").unwrap();
        assert_eq!(e.monomials, vec![UeaMonomial::new(c(1.0, 2.0), [1, 0, 0, 0, 0, 0])]);
        let e = parse_operator("2i*B-").unwrap();
        assert_eq!(e.monomials, vec![UeaMonomial::new(c(0.0, 2.0), [0, 0, 0, 0, 0, 1])]);
        let e = parse_operator("1.5-0.25i*L").unwrap();
        assert_eq!(e.monomials.len(), 2);
        let e = parse_operator("-0.5*A3").unwrap();
        assert_eq!(e.monomials, vec![UeaMonomial::new(c(-0.5, 0.0), [0, 1, 0, 0, 0, 0])]);
    }

    #[test]
    fn compact_and_spaced_words_agree() {
        let spaced = parse_operator("3*A+ B+").unwrap();
        let compact = parse_operator("3*A+B+").unwrap();
        assert_eq!(spaced, compact);
        let padded = parse_operator("   A+   ").unwrap();
        assert_eq!(padded, parse_operator("A+").unwrap());
    }

    #[test]
    fn scientific_and_fractional_scalars() {
        let e = parse_operator("1e-2*A+").unwrap();
        assert_eq!(e.monomials[0].coefficient, c(0.01, 0.0));
        let e = parse_operator(".5*B3").unwrap();
        assert_eq!(e.monomials[0].coefficient, c(0.5, 0.0));
    }

    #[test]
    fn same_slot_factors_accumulate() {
        let e = parse_operator("A3 K").unwrap();
        // A3 (A3 − 1/2) = −A3/2 + A3²
        assert_eq!(
            e.monomials,
            vec![
                UeaMonomial::new(c(-0.5, 0.0), [0, 1, 0, 0, 0, 0]),
                UeaMonomial::new(c(1.0, 0.0), [0, 2, 0, 0, 0, 0]),
            ]
        );
        let e = parse_operator("A+ A+^2").unwrap();
        assert_eq!(e.monomials, vec![UeaMonomial::new(c(1.0, 0.0), [3, 0, 0, 0, 0, 0])]);
    }

    #[test]
    fn ordering_violations_rejected() {
        for src in ["A- A+", "B+ A+", "A- K", "B- B+", "L A3", "B3 A-", "K A+"] {
            let err = parse_operator(src).unwrap_err();
            assert!(err.message.contains("order"), "{src}: {}", err.message);
        }
    }

    #[test]
    fn syntax_errors_carry_offsets() {
        let err = parse_operator("A+^").unwrap_err();
        assert_eq!(err.offset, 3);

        let err = parse_operator("2.0 A+").unwrap_err();
        assert_eq!(err.offset, 4);
        assert!(err.message.contains('*'));

        let err = parse_operator("C+").unwrap_err();
        assert_eq!(err.offset, 0);

        let err = parse_operator("A*").unwrap_err();
        assert_eq!(err.offset, 0);

        let err = parse_operator("").unwrap_err();
        assert_eq!(err.offset, 0);

        let err = parse_operator("A+ +").unwrap_err();
        assert_eq!(err.offset, 4);

        let err = parse_operator("A+^x").unwrap_err();
        assert_eq!(err.offset, 3);

        let err = parse_operator("A+ (B-)").unwrap_err();
        assert!(err.message.contains("unexpected character"));

        let err = parse_operator("1+2i B+").unwrap_err();
        assert!(err.message.contains('*'));
    }

    #[test]
    fn print_parse_round_trip() {
        let sources = [
            "A+",
            "2.0*A+^2 B-",
            "K",
            "1.0*",
            "A+ A3 A- B+ B3 B-",
            "1+2i*A+ - 0.5*B3",
            "2i*B- + A+^3",
            "K^2 L",
            "-1.5*A3 B3",
            "0.0078125*A+ A-",
        ];
        for src in sources {
            let parsed = parse_operator(src).unwrap();
            let printed = to_source(&parsed);
            let reparsed = parse_operator(&printed).unwrap();
            assert_eq!(parsed, reparsed, "{src} -> {printed}");
        }
    }
}
