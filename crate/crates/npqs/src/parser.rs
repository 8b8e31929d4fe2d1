//! Textual language for holomorphic expressions.
//!
//! Grammar (EBNF):
//!
//! ```text
//! expr   := term (('+'|'-') term)*
//! term   := factor (('*'|'/') factor)*
//! factor := atom ['^' signed_number]          -- '^' binds tighter than unary '-'
//! atom   := number | number'i' | 'i' | var | call | '(' expr ')' | '-' factor
//! var    := 'z' digits                        -- 1-based, <= n
//! call   := ('log'|'exp') '(' expr ')' | 'dot' '(' 'z' ',' vector ')'
//! vector := '[' complex (',' complex)* ']'
//! complex:= ['-'] (number | number'i') [('+'|'-') number'i']
//! ```
//!
//! Integer exponents map to `IntPow`, any other to `RealPow`. Chained
//! exponents fold right-associatively into a single literal (`z1^2^3` is
//! `z1^8`). `dot(z,[..])` denotes `⟨z,b⟩` with the bracketed constants on
//! the conjugated side. Constant `+ - * /` arithmetic folds at parse time,
//! which is what lets printed complex literals like `(2+3i)` read back as a
//! single `Const` node.

use alloc::borrow::ToOwned;
use alloc::boxed::Box;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use num_complex::Complex64;
#[allow(unused_imports)] // f64 math methods come from this trait without std
use num_traits::Float;

use crate::expr::HoloExpr;

/// Byte range into the source string; `start <= end <= input.len()`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SourceSpan {
    pub start: usize,
    pub end: usize,
}

impl SourceSpan {
    fn new(start: usize, end: usize) -> Self {
        Self { start, end }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ParseErrorKind {
    UnexpectedToken,
    UnknownIdentifier,
    ArityMismatch,
    DimensionExceeded,
    BadNumber,
}

/// Parse failure with the byte span of the offending lexeme. The message
/// always names the lexeme verbatim.
#[derive(Debug, Clone, PartialEq)]
pub struct ParseError {
    pub span: SourceSpan,
    pub kind: ParseErrorKind,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{:?} at bytes {}..{}: {}",
            self.kind, self.span.start, self.span.end, self.message
        )
    }
}

#[cfg(feature = "std")]
impl std::error::Error for ParseError {}

// ---------------------------------------------------------------------------
// Lexer
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Number(f64),
    /// A number immediately followed by `i`, e.g. `0.5i`.
    Imag(f64),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    LBracket,
    RBracket,
    Comma,
    Eof,
}

#[derive(Debug, Clone)]
struct Lexeme {
    tok: Tok,
    span: SourceSpan,
}

fn lex(input: &str) -> Result<Vec<Lexeme>, ParseError> {
    let bytes = input.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let start = i;
        let ch = input[i..].chars().next().unwrap();
        let tok = match ch {
            c if c.is_whitespace() => {
                i += c.len_utf8();
                continue;
            }
            '+' => {
                i += 1;
                Tok::Plus
            }
            '-' => {
                i += 1;
                Tok::Minus
            }
            '*' => {
                i += 1;
                Tok::Star
            }
            '/' => {
                i += 1;
                Tok::Slash
            }
            '^' => {
                i += 1;
                Tok::Caret
            }
            '(' => {
                i += 1;
                Tok::LParen
            }
            ')' => {
                i += 1;
                Tok::RParen
            }
            '[' => {
                i += 1;
                Tok::LBracket
            }
            ']' => {
                i += 1;
                Tok::RBracket
            }
            ',' => {
                i += 1;
                Tok::Comma
            }
            c if c.is_ascii_digit() => {
                let (value, end, imag) = lex_number(input, i)?;
                i = end;
                if imag {
                    Tok::Imag(value)
                } else {
                    Tok::Number(value)
                }
            }
            c if c.is_ascii_alphabetic() => {
                let mut end = i;
                for (off, c2) in input[i..].char_indices() {
                    if c2.is_ascii_alphanumeric() {
                        end = i + off + c2.len_utf8();
                    } else {
                        break;
                    }
                }
                let word = &input[i..end];
                i = end;
                Tok::Ident(word.to_owned())
            }
            c => {
                let end = i + c.len_utf8();
                return Err(ParseError {
                    span: SourceSpan::new(i, end),
                    kind: ParseErrorKind::UnexpectedToken,
                    message: format!("unexpected character `{}`", &input[i..end]),
                });
            }
        };
        out.push(Lexeme { tok, span: SourceSpan::new(start, i) });
    }
    out.push(Lexeme { tok: Tok::Eof, span: SourceSpan::new(input.len(), input.len()) });
    Ok(out)
}

/// Lexes `digits ['.' digits] [('e'|'E') ['+'|'-'] digits] ['i']` starting at
/// byte `start`. Returns (value, end offset, had-imaginary-suffix).
fn lex_number(input: &str, start: usize) -> Result<(f64, usize, bool), ParseError> {
    let bytes = input.as_bytes();
    let mut i = start;
    while i < bytes.len() && bytes[i].is_ascii_digit() {
        i += 1;
    }
    if i < bytes.len() && bytes[i] == b'.' {
        i += 1;
        let frac_start = i;
        while i < bytes.len() && bytes[i].is_ascii_digit() {
            i += 1;
        }
        if i == frac_start {
            return Err(ParseError {
                span: SourceSpan::new(start, i),
                kind: ParseErrorKind::BadNumber,
                message: format!("malformed number `{}`", &input[start..i]),
            });
        }
    }
    if i < bytes.len() && (bytes[i] == b'e' || bytes[i] == b'E') {
        let mut j = i + 1;
        if j < bytes.len() && (bytes[j] == b'+' || bytes[j] == b'-') {
            j += 1;
        }
        let exp_start = j;
        while j < bytes.len() && bytes[j].is_ascii_digit() {
            j += 1;
        }
        if j > exp_start {
            i = j;
        }
        // otherwise the 'e' belongs to a following identifier, leave it
    }
    let text = &input[start..i];
    let value: f64 = text.parse().map_err(|_| ParseError {
        span: SourceSpan::new(start, i),
        kind: ParseErrorKind::BadNumber,
        message: format!("malformed number `{text}`"),
    })?;
    // An immediately following lone 'i' marks an imaginary literal, unless it
    // starts a longer identifier.
    if i < bytes.len() && bytes[i] == b'i' {
        let after = i + 1;
        let next_alnum = after < bytes.len() && bytes[after].is_ascii_alphanumeric();
        if !next_alnum {
            return Ok((value, after, true));
        }
    }
    Ok((value, i, false))
}

// ---------------------------------------------------------------------------
// Parser
// ---------------------------------------------------------------------------

struct Parser<'a> {
    input: &'a str,
    toks: Vec<Lexeme>,
    pos: usize,
    n: usize,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> &Lexeme {
        &self.toks[self.pos]
    }

    fn bump(&mut self) -> Lexeme {
        let lx = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        lx
    }

    fn lexeme_text(&self, span: SourceSpan) -> &str {
        &self.input[span.start..span.end]
    }

    fn err(&self, span: SourceSpan, kind: ParseErrorKind, message: String) -> ParseError {
        ParseError { span, kind, message }
    }

    fn unexpected(&self, lx: &Lexeme, wanted: &str) -> ParseError {
        let shown = if matches!(lx.tok, Tok::Eof) {
            "end of input".to_owned()
        } else {
            format!("`{}`", self.lexeme_text(lx.span))
        };
        self.err(
            lx.span,
            ParseErrorKind::UnexpectedToken,
            format!("expected {wanted}, found {shown}"),
        )
    }

    fn expect(&mut self, tok: Tok, wanted: &str) -> Result<Lexeme, ParseError> {
        if self.peek().tok == tok {
            Ok(self.bump())
        } else {
            let lx = self.peek().clone();
            Err(self.unexpected(&lx, wanted))
        }
    }

    fn parse_expr(&mut self) -> Result<HoloExpr, ParseError> {
        let mut acc = self.parse_term()?;
        loop {
            match self.peek().tok {
                Tok::Plus => {
                    self.bump();
                    let rhs = self.parse_term()?;
                    acc = fold_binary(BinOp::Add, acc, rhs);
                }
                Tok::Minus => {
                    self.bump();
                    let rhs = self.parse_term()?;
                    acc = fold_binary(BinOp::Sub, acc, rhs);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn parse_term(&mut self) -> Result<HoloExpr, ParseError> {
        let mut acc = self.parse_factor()?;
        loop {
            match self.peek().tok {
                Tok::Star => {
                    self.bump();
                    let rhs = self.parse_factor()?;
                    acc = fold_binary(BinOp::Mul, acc, rhs);
                }
                Tok::Slash => {
                    self.bump();
                    let rhs = self.parse_factor()?;
                    acc = fold_binary(BinOp::Div, acc, rhs);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn parse_factor(&mut self) -> Result<HoloExpr, ParseError> {
        // '^' binds tighter than unary '-', so '-' distributes over the whole
        // exponentiated atom: -z1^2 is -(z1^2).
        if self.peek().tok == Tok::Minus {
            self.bump();
            let inner = self.parse_factor()?;
            return Ok(negate(inner));
        }
        let base = self.parse_atom()?;
        if self.peek().tok == Tok::Caret {
            self.bump();
            let exponent = self.parse_exponent_tower()?;
            if exponent.fract() == 0.0 && exponent.abs() <= i32::MAX as f64 {
                return Ok(HoloExpr::IntPow(Box::new(base), exponent as i32));
            }
            return Ok(HoloExpr::RealPow(Box::new(base), exponent));
        }
        Ok(base)
    }

    /// `signed_number ('^' signed_number)*`, folded right-associatively into
    /// one literal value.
    fn parse_exponent_tower(&mut self) -> Result<f64, ParseError> {
        let negative = if self.peek().tok == Tok::Minus {
            self.bump();
            true
        } else {
            false
        };
        let lx = self.peek().clone();
        let value = match lx.tok {
            Tok::Number(v) => {
                self.bump();
                v
            }
            _ => return Err(self.unexpected(&lx, "a numeric exponent")),
        };
        let mut value = if negative { -value } else { value };
        if self.peek().tok == Tok::Caret {
            let caret = self.bump();
            let upper = self.parse_exponent_tower()?;
            let folded = libm::pow(value, upper);
            if !folded.is_finite() {
                return Err(self.err(
                    caret.span,
                    ParseErrorKind::BadNumber,
                    format!("exponent tower `^` folds to a non-finite value"),
                ));
            }
            value = folded;
        }
        Ok(value)
    }

    fn parse_atom(&mut self) -> Result<HoloExpr, ParseError> {
        let lx = self.peek().clone();
        match &lx.tok {
            Tok::Number(v) => {
                self.bump();
                Ok(HoloExpr::Const(Complex64::new(*v, 0.0)))
            }
            Tok::Imag(v) => {
                self.bump();
                Ok(HoloExpr::Const(Complex64::new(0.0, *v)))
            }
            Tok::LParen => {
                self.bump();
                let inner = self.parse_expr()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(inner)
            }
            Tok::Minus => {
                self.bump();
                let inner = self.parse_factor()?;
                Ok(negate(inner))
            }
            Tok::Ident(word) => {
                self.bump();
                self.parse_ident(word, lx.span)
            }
            _ => Err(self.unexpected(&lx, "a number, variable, call or `(`")),
        }
    }

    fn parse_ident(&mut self, word: &str, span: SourceSpan) -> Result<HoloExpr, ParseError> {
        match word {
            "i" => Ok(HoloExpr::Const(Complex64::new(0.0, 1.0))),
            "log" | "exp" => {
                self.expect(Tok::LParen, "`(` after function name")?;
                let inner = self.parse_expr()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(if word == "log" {
                    HoloExpr::Log(Box::new(inner))
                } else {
                    HoloExpr::Exp(Box::new(inner))
                })
            }
            "dot" => self.parse_dot(span),
            _ => {
                if let Some(rest) = word.strip_prefix('z') {
                    if !rest.is_empty() && rest.bytes().all(|b| b.is_ascii_digit()) {
                        let k: usize = rest.parse().map_err(|_| {
                            self.err(
                                span,
                                ParseErrorKind::DimensionExceeded,
                                format!("variable `{word}` index out of range"),
                            )
                        })?;
                        if k == 0 || k > self.n {
                            return Err(self.err(
                                span,
                                ParseErrorKind::DimensionExceeded,
                                format!(
                                    "variable `{word}` exceeds dimension {n}",
                                    n = self.n
                                ),
                            ));
                        }
                        return Ok(HoloExpr::Var(k));
                    }
                }
                Err(self.err(
                    span,
                    ParseErrorKind::UnknownIdentifier,
                    format!("unknown identifier `{word}`"),
                ))
            }
        }
    }

    fn parse_dot(&mut self, dot_span: SourceSpan) -> Result<HoloExpr, ParseError> {
        self.expect(Tok::LParen, "`(` after `dot`")?;
        let lx = self.peek().clone();
        match &lx.tok {
            Tok::Ident(w) if w == "z" => {
                self.bump();
            }
            _ => return Err(self.unexpected(&lx, "`z` as the first argument of dot")),
        }
        self.expect(Tok::Comma, "`,`")?;
        self.expect(Tok::LBracket, "`[`")?;
        let mut coeffs = Vec::new();
        loop {
            coeffs.push(self.parse_complex_literal()?);
            let lx = self.peek().clone();
            match lx.tok {
                Tok::Comma => {
                    self.bump();
                }
                Tok::RBracket => {
                    self.bump();
                    break;
                }
                _ => return Err(self.unexpected(&lx, "`,` or `]`")),
            }
        }
        self.expect(Tok::RParen, "`)`")?;
        if coeffs.len() != self.n {
            return Err(self.err(
                dot_span,
                ParseErrorKind::ArityMismatch,
                format!(
                    "`dot` vector has {} entries but the dimension is {}",
                    coeffs.len(),
                    self.n
                ),
            ));
        }
        Ok(HoloExpr::LinForm(coeffs))
    }

    /// `['-'] (number | number'i') [('+'|'-') number'i']`
    fn parse_complex_literal(&mut self) -> Result<Complex64, ParseError> {
        let negative = if self.peek().tok == Tok::Minus {
            self.bump();
            true
        } else {
            false
        };
        let lx = self.peek().clone();
        let mut value = match lx.tok {
            Tok::Number(v) => {
                self.bump();
                Complex64::new(v, 0.0)
            }
            Tok::Imag(v) => {
                self.bump();
                Complex64::new(0.0, v)
            }
            _ => return Err(self.unexpected(&lx, "a complex literal")),
        };
        if negative {
            value = -value;
        }
        // Optional imaginary tail is only meaningful after a real head.
        if value.im == 0.0 {
            let sign = match self.peek().tok {
                Tok::Plus => Some(1.0),
                Tok::Minus => Some(-1.0),
                _ => None,
            };
            if let Some(sign) = sign {
                self.bump();
                let lx = self.peek().clone();
                match lx.tok {
                    Tok::Imag(v) => {
                        self.bump();
                        value.im = sign * v;
                    }
                    _ => return Err(self.unexpected(&lx, "an imaginary part like `0.5i`")),
                }
            }
        }
        Ok(value)
    }
}

#[derive(Clone, Copy)]
enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
}

/// Builds a binary node, folding when both operands are constants (division
/// by a zero constant is kept as a node so evaluation reports the pole).
fn fold_binary(op: BinOp, a: HoloExpr, b: HoloExpr) -> HoloExpr {
    if let (HoloExpr::Const(x), HoloExpr::Const(y)) = (&a, &b) {
        match op {
            BinOp::Add => return HoloExpr::Const(x + y),
            BinOp::Sub => return HoloExpr::Const(x - y),
            BinOp::Mul => return HoloExpr::Const(x * y),
            BinOp::Div if y.norm_sqr() != 0.0 => return HoloExpr::Const(x / y),
            BinOp::Div => {}
        }
    }
    match op {
        BinOp::Add => HoloExpr::Add(Box::new(a), Box::new(b)),
        BinOp::Sub => HoloExpr::Sub(Box::new(a), Box::new(b)),
        BinOp::Mul => HoloExpr::Mul(Box::new(a), Box::new(b)),
        BinOp::Div => HoloExpr::Div(Box::new(a), Box::new(b)),
    }
}

fn negate(e: HoloExpr) -> HoloExpr {
    match e {
        HoloExpr::Const(c) => HoloExpr::Const(-c),
        other => HoloExpr::Mul(
            Box::new(HoloExpr::Const(Complex64::new(-1.0, 0.0))),
            Box::new(other),
        ),
    }
}

/// Parses `text` into an AST over `z1..zn`. Total: any input yields either an
/// AST or a typed [`ParseError`] whose span indexes a real substring.
pub fn parse(text: &str, n: usize) -> Result<HoloExpr, ParseError> {
    assert!(n >= 1, "dimension must be at least 1");
    let toks = lex(text)?;
    let mut p = Parser { input: text, toks, pos: 0, n };
    let e = p.parse_expr()?;
    let lx = p.peek().clone();
    if lx.tok != Tok::Eof {
        return Err(p.unexpected(&lx, "end of input"));
    }
    Ok(e)
}

/// Parses a standalone complex literal such as `0.5`, `0.5i`, `-1+0.25i`.
pub fn parse_complex(text: &str) -> Result<Complex64, ParseError> {
    let toks = lex(text)?;
    let mut p = Parser { input: text, toks, pos: 0, n: 1 };
    let v = p.parse_complex_literal()?;
    let lx = p.peek().clone();
    if lx.tok != Tok::Eof {
        return Err(p.unexpected(&lx, "end of input"));
    }
    Ok(v)
}

// ---------------------------------------------------------------------------
// Pretty printer
// ---------------------------------------------------------------------------

/// Renders `f` in the textual grammar; `parse(pretty_print(f), n)` recovers
/// the same tree (modulo the parser's constant folding).
pub fn pretty_print(f: &HoloExpr) -> String {
    format!("{f}")
}

fn prec(e: &HoloExpr) -> u8 {
    match e {
        HoloExpr::Add(..) | HoloExpr::Sub(..) => 1,
        HoloExpr::Mul(..) | HoloExpr::Div(..) => 2,
        HoloExpr::IntPow(..) | HoloExpr::RealPow(..) => 4,
        _ => 5,
    }
}

fn fmt_complex_literal(c: Complex64, out: &mut fmt::Formatter<'_>) -> fmt::Result {
    // Matches the vector-element grammar: re, imi, re+imi, re-imi.
    if c.im == 0.0 {
        write!(out, "{}", c.re)
    } else if c.re == 0.0 {
        write!(out, "{}i", c.im)
    } else if c.im < 0.0 {
        write!(out, "{}-{}i", c.re, -c.im)
    } else {
        write!(out, "{}+{}i", c.re, c.im)
    }
}

fn fmt_child(
    e: &HoloExpr,
    parens_at_or_below: u8,
    out: &mut fmt::Formatter<'_>,
) -> fmt::Result {
    if prec(e) <= parens_at_or_below {
        write!(out, "({e})")
    } else {
        write!(out, "{e}")
    }
}

impl fmt::Display for HoloExpr {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HoloExpr::Const(c) => {
                // Bare nonnegative reals need no parentheses; everything else
                // is wrapped so it reads back as one constant.
                if c.im == 0.0 && c.re >= 0.0 {
                    write!(out, "{}", c.re)
                } else {
                    write!(out, "(")?;
                    fmt_complex_literal(*c, out)?;
                    write!(out, ")")
                }
            }
            HoloExpr::Var(k) => write!(out, "z{k}"),
            HoloExpr::Add(a, b) => {
                fmt_child(a, 0, out)?;
                write!(out, " + ")?;
                fmt_child(b, 1, out)
            }
            HoloExpr::Sub(a, b) => {
                fmt_child(a, 0, out)?;
                write!(out, " - ")?;
                fmt_child(b, 1, out)
            }
            HoloExpr::Mul(a, b) => {
                // Unary minus prints as a prefix.
                if let HoloExpr::Const(c) = &**a {
                    if c.re == -1.0 && c.im == 0.0 {
                        write!(out, "-")?;
                        return fmt_child(b, 3, out);
                    }
                }
                fmt_child(a, 1, out)?;
                write!(out, "*")?;
                fmt_child(b, 2, out)
            }
            HoloExpr::Div(a, b) => {
                fmt_child(a, 1, out)?;
                write!(out, "/")?;
                fmt_child(b, 2, out)
            }
            HoloExpr::IntPow(a, m) => {
                fmt_pow_base(a, out)?;
                write!(out, "^{m}")
            }
            HoloExpr::RealPow(a, t) => {
                fmt_pow_base(a, out)?;
                write!(out, "^{t}")
            }
            HoloExpr::Log(a) => write!(out, "log({a})"),
            HoloExpr::Exp(a) => write!(out, "exp({a})"),
            HoloExpr::LinForm(b) => {
                write!(out, "dot(z,[")?;
                for (i, c) in b.iter().enumerate() {
                    if i > 0 {
                        write!(out, ", ")?;
                    }
                    fmt_complex_literal(*c, out)?;
                }
                write!(out, "])")
            }
        }
    }
}

fn fmt_pow_base(base: &HoloExpr, out: &mut fmt::Formatter<'_>) -> fmt::Result {
    match base {
        HoloExpr::Var(_) | HoloExpr::Log(_) | HoloExpr::Exp(_) | HoloExpr::LinForm(_) => {
            write!(out, "{base}")
        }
        HoloExpr::Const(c) if c.im == 0.0 && c.re >= 0.0 => write!(out, "{}", c.re),
        HoloExpr::Const(_) => write!(out, "{base}"), // already parenthesized
        other => write!(out, "({other})"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn parses_spec_examples() {
        let got = parse("z1^2 + 3*z2", 2).unwrap();
        let want = HoloExpr::Add(
            Box::new(HoloExpr::IntPow(Box::new(HoloExpr::Var(1)), 2)),
            Box::new(HoloExpr::Mul(
                Box::new(HoloExpr::Const(c(3.0, 0.0))),
                Box::new(HoloExpr::Var(2)),
            )),
        );
        assert_eq!(got, want);

        let got = parse("(1 - dot(z,[0.5, 0.5i]))^-1.5", 2).unwrap();
        let want = HoloExpr::RealPow(
            Box::new(HoloExpr::Sub(
                Box::new(HoloExpr::Const(c(1.0, 0.0))),
                Box::new(HoloExpr::LinForm(vec![c(0.5, 0.0), c(0.0, 0.5)])),
            )),
            -1.5,
        );
        assert_eq!(got, want);
    }

    #[test]
    fn dimension_exceeded_names_the_lexeme() {
        let input = "1 + z3";
        let err = parse(input, 2).unwrap_err();
        assert_eq!(err.kind, ParseErrorKind::DimensionExceeded);
        assert_eq!(&input[err.span.start..err.span.end], "z3");
        assert!(err.message.contains("z3"));
    }

    #[test]
    fn unknown_identifier() {
        let err = parse("sin(z1)", 1).unwrap_err();
        assert_eq!(err.kind, ParseErrorKind::UnknownIdentifier);
        assert!(err.message.contains("sin"));
    }

    #[test]
    fn dot_arity_mismatch() {
        let err = parse("dot(z,[0.5])", 2).unwrap_err();
        assert_eq!(err.kind, ParseErrorKind::ArityMismatch);
    }

    #[test]
    fn bad_number() {
        let err = parse("1.", 1).unwrap_err();
        assert_eq!(err.kind, ParseErrorKind::BadNumber);
    }

    #[test]
    fn exponent_tower_folds_right() {
        // z1^2^3 = z1^(2^3) = z1^8
        let got = parse("z1^2^3", 1).unwrap();
        assert_eq!(got, HoloExpr::IntPow(Box::new(HoloExpr::Var(1)), 8));
        // non-integer result becomes RealPow
        let got = parse("z1^2^-1", 1).unwrap();
        assert_eq!(got, HoloExpr::RealPow(Box::new(HoloExpr::Var(1)), 0.5));
    }

    #[test]
    fn unary_minus_binds_below_pow() {
        // -z1^2 = -(z1^2)
        let got = parse("-z1^2", 1).unwrap();
        let want = HoloExpr::Mul(
            Box::new(HoloExpr::Const(c(-1.0, 0.0))),
            Box::new(HoloExpr::IntPow(Box::new(HoloExpr::Var(1)), 2)),
        );
        assert_eq!(got, want);
    }

    #[test]
    fn constant_folding_constructs_complex_literals() {
        assert_eq!(parse("(2+3i)", 1).unwrap(), HoloExpr::Const(c(2.0, 3.0)));
        assert_eq!(parse("-0.5", 1).unwrap(), HoloExpr::Const(c(-0.5, 0.0)));
        assert_eq!(parse("0.5i", 1).unwrap(), HoloExpr::Const(c(0.0, 0.5)));
    }

    #[test]
    fn pretty_print_examples() {
        let f = HoloExpr::IntPow(Box::new(HoloExpr::Var(1)), 2);
        assert_eq!(pretty_print(&f), "z1^2");
        let f = HoloExpr::Const(c(2.0, 3.0));
        assert_eq!(pretty_print(&f), "(2+3i)");
        let f = HoloExpr::LinForm(vec![c(0.5, 0.0), c(0.0, -0.25)]);
        assert_eq!(pretty_print(&f), "dot(z,[0.5, -0.25i])");
    }

    #[test]
    fn pretty_print_round_trips_spec_shapes() {
        for (src, n) in [
            ("z1^2 + 3*z2", 2),
            ("(1 - dot(z,[0.5, 0.5i]))^-1.5", 2),
            ("log(1 - z1)", 1),
            ("exp(z1*z2) / (1 - z2)", 2),
            ("-z1^2 - (2-3i)", 1),
        ] {
            let ast = parse(src, n).unwrap();
            let printed = pretty_print(&ast);
            let reparsed = parse(&printed, n).unwrap();
            assert_eq!(ast, reparsed, "round trip of `{src}` via `{printed}`");
        }
    }

    #[test]
    fn parse_complex_component() {
        assert_eq!(parse_complex("0.5").unwrap(), c(0.5, 0.0));
        assert_eq!(parse_complex("0.5i").unwrap(), c(0.0, 0.5));
        assert_eq!(parse_complex("-1+0.25i").unwrap(), c(-1.0, 0.25));
        assert_eq!(parse_complex("2-3i").unwrap(), c(2.0, -3.0));
        assert!(parse_complex("0.5+").is_err());
    }

    #[test]
    fn error_spans_are_valid_substrings() {
        for bad in ["z1 + ", "(z1", "dot(w,[1])", "1..2", "z1 ^ z2", "@", "z1 z2"] {
            if let Err(e) = parse(bad, 2) {
                assert!(e.span.start <= e.span.end && e.span.end <= bad.len());
                assert!(bad.is_char_boundary(e.span.start) && bad.is_char_boundary(e.span.end));
            }
        }
    }
}
