//! A small textual language for photon states.
//!
//! ```text
//! state   := mixture | super ;
//! mixture := "mix" weighted (";" weighted)* ;
//! weighted:= number ":" super ;
//! super   := ["+"|"-"] term (("+"|"-") term)* ;
//! term    := [scalar "*"] ket | [scalar "*"] "(" super ")" [ "/" scalar ] ;
//! ket     := "|" slot ("," slot)* ">" ;
//! slot    := integer | "c:" complex ;
//! complex := ["+"|"-"] (number [("+"|"-") number "i"] | number "i") ;
//! ```
//!
//! `i` alone means `1i`. Superpositions are always renormalized; mixture
//! probabilities must be positive and sum to one.
//!
//! ```
//! use weylcorr::dsl::{parse, lower};
//! let rho = lower(&parse("mix 0.5: |1,0>; 0.5: |0,1>").unwrap()).unwrap();
//! assert_eq!(rho.terms().len(), 2);
//! ```

use std::fmt;

use num_complex::Complex64 as C64;
use thiserror::Error;

use crate::error::{Error, Result};
use crate::states::{KetKind, ModeSlot, OperatorEnsemble, ProductKet};

/// Tolerance on the sum of mixture probabilities.
pub const PROBABILITY_SUM_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ParseErrorCode {
    Lexical,
    UnexpectedToken,
    ModeCountMismatch,
    KindMismatch,
    ProbabilitySum,
}

impl ParseErrorCode {
    pub fn as_str(&self) -> &'static str {
        match self {
            ParseErrorCode::Lexical => "E-LEX",
            ParseErrorCode::UnexpectedToken => "E-SYNTAX",
            ParseErrorCode::ModeCountMismatch => "E-MODES",
            ParseErrorCode::KindMismatch => "E-KIND",
            ParseErrorCode::ProbabilitySum => "E-PROB",
        }
    }
}

impl fmt::Display for ParseErrorCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A diagnostic with a 1-based line/column and the tokens that would have
/// been accepted.
#[derive(Debug, Clone, PartialEq, Error)]
#[error("{code} at {line}:{column}: {message}{}", expected_suffix(.expected))]
pub struct ParseError {
    pub code: ParseErrorCode,
    pub offset: usize,
    pub line: usize,
    pub column: usize,
    pub expected: Vec<String>,
    pub message: String,
}

fn expected_suffix(expected: &[String]) -> String {
    if expected.is_empty() {
        String::new()
    } else {
        format!(" (expected one of: {})", expected.join(", "))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Tok {
    Number(f64),
    Integer(u32),
    Imag(f64),
    Mix,
    CoherentPrefix,
    Pipe,
    Close,
    Comma,
    Semicolon,
    Colon,
    Plus,
    Minus,
    Star,
    Slash,
    LParen,
    RParen,
    Eof,
}

impl Tok {
    fn describe(&self) -> &'static str {
        match self {
            Tok::Number(_) => "number",
            Tok::Integer(_) => "integer",
            Tok::Imag(_) => "imaginary number",
            Tok::Mix => "'mix'",
            Tok::CoherentPrefix => "'c:'",
            Tok::Pipe => "'|'",
            Tok::Close => "'>'",
            Tok::Comma => "','",
            Tok::Semicolon => "';'",
            Tok::Colon => "':'",
            Tok::Plus => "'+'",
            Tok::Minus => "'-'",
            Tok::Star => "'*'",
            Tok::Slash => "'/'",
            Tok::LParen => "'('",
            Tok::RParen => "')'",
            Tok::Eof => "end of input",
        }
    }

    fn is_number_like(&self) -> bool {
        matches!(self, Tok::Number(_) | Tok::Integer(_) | Tok::Imag(_))
    }
}

#[derive(Debug, Clone, Copy)]
struct Spanned {
    tok: Tok,
    offset: usize,
}

fn line_col(text: &str, offset: usize) -> (usize, usize) {
    let before = &text[..offset.min(text.len())];
    let line = before.matches('\n').count() + 1;
    let column = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
    (line, column)
}

fn error_at(
    text: &str,
    offset: usize,
    code: ParseErrorCode,
    message: String,
    expected: &[&str],
) -> ParseError {
    let (line, column) = line_col(text, offset);
    ParseError {
        code,
        offset,
        line,
        column,
        expected: expected.iter().map(|s| s.to_string()).collect(),
        message,
    }
}

fn lex(text: &str) -> std::result::Result<Vec<Spanned>, ParseError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let b = bytes[i];
        let start = i;
        let single = match b {
            b' ' | b'\t' | b'\r' | b'\n' => {
                i += 1;
                continue;
            }
            b'|' => Some(Tok::Pipe),
            b'>' => Some(Tok::Close),
            b',' => Some(Tok::Comma),
            b';' => Some(Tok::Semicolon),
            b':' => Some(Tok::Colon),
            b'+' => Some(Tok::Plus),
            b'-' => Some(Tok::Minus),
            b'*' => Some(Tok::Star),
            b'/' => Some(Tok::Slash),
            b'(' => Some(Tok::LParen),
            b')' => Some(Tok::RParen),
            _ => None,
        };
        if let Some(tok) = single {
            out.push(Spanned { tok, offset: start });
            i += 1;
            continue;
        }
        if b.is_ascii_digit() || b == b'.' {
            let mut j = i;
            let mut is_int = true;
            while j < bytes.len() && bytes[j].is_ascii_digit() {
                j += 1;
            }
            if j < bytes.len() && bytes[j] == b'.' {
                is_int = false;
                j += 1;
                while j < bytes.len() && bytes[j].is_ascii_digit() {
                    j += 1;
                }
            }
            if j < bytes.len() && (bytes[j] == b'e' || bytes[j] == b'E') {
                let mut k = j + 1;
                if k < bytes.len() && (bytes[k] == b'+' || bytes[k] == b'-') {
                    k += 1;
                }
                if k < bytes.len() && bytes[k].is_ascii_digit() {
                    is_int = false;
                    while k < bytes.len() && bytes[k].is_ascii_digit() {
                        k += 1;
                    }
                    j = k;
                }
            }
            let lexeme = &text[i..j];
            let value: f64 = lexeme.parse().map_err(|_| {
                error_at(
                    text,
                    start,
                    ParseErrorCode::Lexical,
                    format!("malformed number '{lexeme}'"),
                    &[],
                )
            })?;
            let tok =
                if j < bytes.len() && bytes[j] == b'i' && !is_ident_byte(bytes.get(j + 1).copied())
                {
                    j += 1;
                    Tok::Imag(value)
                } else if is_int {
                    match lexeme.parse::<u32>() {
                        Ok(n) => Tok::Integer(n),
                        Err(_) => Tok::Number(value),
                    }
                } else {
                    Tok::Number(value)
                };
            out.push(Spanned { tok, offset: start });
            i = j;
            continue;
        }
        if b.is_ascii_alphabetic() {
            let mut j = i;
            while j < bytes.len() && (bytes[j].is_ascii_alphanumeric() || bytes[j] == b'_') {
                j += 1;
            }
            let word = &text[i..j];
            match word {
                "mix" => out.push(Spanned {
                    tok: Tok::Mix,
                    offset: start,
                }),
                "i" => out.push(Spanned {
                    tok: Tok::Imag(1.0),
                    offset: start,
                }),
                "c" if bytes.get(j) == Some(&b':') => {
                    out.push(Spanned {
                        tok: Tok::CoherentPrefix,
                        offset: start,
                    });
                    j += 1;
                }
                _ => {
                    return Err(error_at(
                        text,
                        start,
                        ParseErrorCode::Lexical,
                        format!("unknown word '{word}'"),
                        &["'mix'", "'c:'", "'i'"],
                    ))
                }
            }
            i = j;
            continue;
        }
        let ch = text[i..].chars().next().unwrap_or('?');
        return Err(error_at(
            text,
            start,
            ParseErrorCode::Lexical,
            format!("unexpected character '{ch}'"),
            &[],
        ));
    }
    out.push(Spanned {
        tok: Tok::Eof,
        offset: text.len(),
    });
    Ok(out)
}

fn is_ident_byte(b: Option<u8>) -> bool {
    b.is_some_and(|b| b.is_ascii_alphanumeric() || b == b'_')
}

/// Parse tree of a state expression.
#[derive(Debug, Clone, PartialEq)]
pub enum StateExpr {
    Pure(Superposition),
    Mixture(Vec<Weighted>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Weighted {
    pub probability: f64,
    pub state: Superposition,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Superposition {
    pub terms: Vec<Term>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Term {
    Ket { coeff: C64, ket: ProductKet },
    Group { coeff: C64, inner: Superposition },
}

impl StateExpr {
    pub fn n_modes(&self) -> usize {
        self.first_ket().len()
    }

    /// The first ket as written.
    pub fn first_ket(&self) -> &ProductKet {
        match self {
            StateExpr::Pure(s) => s.first_ket(),
            StateExpr::Mixture(parts) => parts[0].state.first_ket(),
        }
    }
}

impl Superposition {
    fn first_ket(&self) -> &ProductKet {
        match &self.terms[0] {
            Term::Ket { ket, .. } => ket,
            Term::Group { inner, .. } => inner.first_ket(),
        }
    }

    fn flatten_into(&self, scale: C64, out: &mut Vec<(C64, ProductKet)>) {
        for t in &self.terms {
            match t {
                Term::Ket { coeff, ket } => out.push((scale * coeff, ket.clone())),
                Term::Group { coeff, inner } => inner.flatten_into(scale * coeff, out),
            }
        }
    }

    /// Unnormalized `(coefficient, ket)` list with groups expanded.
    pub fn components(&self) -> Vec<(C64, ProductKet)> {
        let mut out = Vec::new();
        self.flatten_into(C64::new(1.0, 0.0), &mut out);
        out
    }
}

struct Parser<'a> {
    text: &'a str,
    toks: Vec<Spanned>,
    pos: usize,
    // shape of the first ket seen, with its offset
    shape: Option<(usize, KetKind)>,
}

type PResult<T> = std::result::Result<T, ParseError>;

impl<'a> Parser<'a> {
    fn peek(&self) -> Tok {
        self.toks[self.pos].tok
    }

    fn peek_at(&self, ahead: usize) -> Tok {
        self.toks[(self.pos + ahead).min(self.toks.len() - 1)].tok
    }

    fn offset(&self) -> usize {
        self.toks[self.pos].offset
    }

    fn bump(&mut self) -> Spanned {
        let t = self.toks[self.pos];
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn unexpected(&self, expected: &[&str]) -> ParseError {
        let found = self.peek().describe();
        error_at(
            self.text,
            self.offset(),
            ParseErrorCode::UnexpectedToken,
            format!("unexpected {found}"),
            expected,
        )
    }

    fn expect(&mut self, tok: Tok) -> PResult<()> {
        if std::mem::discriminant(&self.peek()) == std::mem::discriminant(&tok) {
            self.bump();
            Ok(())
        } else {
            Err(self.unexpected(&[tok.describe()]))
        }
    }

    fn state(&mut self) -> PResult<StateExpr> {
        let expr = if self.peek() == Tok::Mix {
            self.bump();
            self.mixture()?
        } else {
            StateExpr::Pure(self.superposition()?)
        };
        if self.peek() != Tok::Eof {
            return Err(self.unexpected(&["'+'", "'-'", "';'", "end of input"]));
        }
        Ok(expr)
    }

    fn mixture(&mut self) -> PResult<StateExpr> {
        let start = self.offset();
        let mut parts = Vec::new();
        loop {
            let at = self.offset();
            let probability = match self.peek() {
                Tok::Number(v) => v,
                Tok::Integer(n) => n as f64,
                _ => return Err(self.unexpected(&["number"])),
            };
            self.bump();
            if probability.is_nan() || probability <= 0.0 {
                return Err(error_at(
                    self.text,
                    at,
                    ParseErrorCode::ProbabilitySum,
                    format!("mixture probability must be positive, got {probability}"),
                    &[],
                ));
            }
            self.expect(Tok::Colon)?;
            let state = self.superposition()?;
            parts.push(Weighted { probability, state });
            if self.peek() == Tok::Semicolon {
                self.bump();
            } else {
                break;
            }
        }
        let sum: f64 = parts.iter().map(|p| p.probability).sum();
        if (sum - 1.0).abs() > PROBABILITY_SUM_TOLERANCE {
            return Err(error_at(
                self.text,
                start,
                ParseErrorCode::ProbabilitySum,
                format!("mixture probabilities sum to {sum}, not 1"),
                &[],
            ));
        }
        Ok(StateExpr::Mixture(parts))
    }

    fn superposition(&mut self) -> PResult<Superposition> {
        let mut terms = Vec::new();
        let mut sign = 1.0;
        match self.peek() {
            Tok::Plus => {
                self.bump();
            }
            Tok::Minus => {
                self.bump();
                sign = -1.0;
            }
            _ => {}
        }
        loop {
            terms.push(self.term(sign)?);
            match self.peek() {
                Tok::Plus => sign = 1.0,
                Tok::Minus => sign = -1.0,
                _ => break,
            }
            self.bump();
        }
        Ok(Superposition { terms })
    }

    fn term(&mut self, sign: f64) -> PResult<Term> {
        let mut coeff = C64::new(sign, 0.0);
        if self.peek().is_number_like() {
            coeff *= self.complex(true)?;
            self.expect(Tok::Star)?;
        }
        match self.peek() {
            Tok::Pipe => {
                let ket = self.ket()?;
                Ok(Term::Ket { coeff, ket })
            }
            Tok::LParen => {
                self.bump();
                let inner = self.superposition()?;
                self.expect(Tok::RParen)?;
                if self.peek() == Tok::Slash {
                    self.bump();
                    let at = self.offset();
                    let divisor = self.complex(false)?;
                    if divisor == C64::new(0.0, 0.0) {
                        return Err(error_at(
                            self.text,
                            at,
                            ParseErrorCode::UnexpectedToken,
                            "division by zero".into(),
                            &[],
                        ));
                    }
                    coeff /= divisor;
                }
                Ok(Term::Group { coeff, inner })
            }
            _ => Err(self.unexpected(&["'|'", "'('", "number"])),
        }
    }

    /// `allow_pair`: whether `a + bi` may be absorbed (false for divisors).
    fn complex(&mut self, allow_pair: bool) -> PResult<C64> {
        let mut sign = 1.0;
        match self.peek() {
            Tok::Plus => {
                self.bump();
            }
            Tok::Minus => {
                self.bump();
                sign = -1.0;
            }
            _ => {}
        }
        let first = match self.peek() {
            Tok::Number(v) => C64::new(v, 0.0),
            Tok::Integer(n) => C64::new(n as f64, 0.0),
            Tok::Imag(v) => {
                self.bump();
                return Ok(C64::new(0.0, sign * v));
            }
            _ => return Err(self.unexpected(&["number", "imaginary number"])),
        };
        self.bump();
        let mut value = first * sign;
        if allow_pair && matches!(self.peek(), Tok::Plus | Tok::Minus) {
            if let Tok::Imag(v) = self.peek_at(1) {
                let s = if self.peek() == Tok::Minus { -1.0 } else { 1.0 };
                self.bump();
                self.bump();
                value.im += s * v;
            }
        }
        Ok(value)
    }

    fn ket(&mut self) -> PResult<ProductKet> {
        let start = self.offset();
        self.expect(Tok::Pipe)?;
        let mut slots = Vec::new();
        loop {
            let slot_at = self.offset();
            let slot = match self.peek() {
                Tok::Integer(n) => {
                    self.bump();
                    ModeSlot::Fock(n)
                }
                Tok::CoherentPrefix => {
                    self.bump();
                    ModeSlot::Coherent(self.complex(true)?)
                }
                _ => return Err(self.unexpected(&["integer", "'c:'"])),
            };
            if let Some(first) = slots.first().map(ModeSlot::kind) {
                if slot.kind() != first {
                    return Err(error_at(
                        self.text,
                        slot_at,
                        ParseErrorCode::KindMismatch,
                        "a ket cannot mix Fock and coherent slots".into(),
                        &[],
                    ));
                }
            }
            slots.push(slot);
            match self.peek() {
                Tok::Comma => {
                    self.bump();
                }
                Tok::Close => {
                    self.bump();
                    break;
                }
                _ => return Err(self.unexpected(&["','", "'>'"])),
            }
        }
        let kind = slots[0].kind();
        match self.shape {
            None => self.shape = Some((slots.len(), kind)),
            Some((n, _)) if n != slots.len() => {
                return Err(error_at(
                    self.text,
                    start,
                    ParseErrorCode::ModeCountMismatch,
                    format!("ket has {} modes but earlier kets have {n}", slots.len()),
                    &[],
                ))
            }
            Some((_, k)) if k != kind => {
                return Err(error_at(
                    self.text,
                    start,
                    ParseErrorCode::KindMismatch,
                    "all kets must be of the same kind (Fock or coherent)".into(),
                    &[],
                ))
            }
            _ => {}
        }
        ProductKet::new(slots).map_err(|e| {
            error_at(
                self.text,
                start,
                ParseErrorCode::Lexical,
                e.to_string(),
                &[],
            )
        })
    }
}

/// Parses a state expression.
pub fn parse(text: &str) -> std::result::Result<StateExpr, ParseError> {
    let toks = lex(text)?;
    let mut p = Parser {
        text,
        toks,
        pos: 0,
        shape: None,
    };
    p.state()
}

/// Lowers a parse tree to a dyad-sum ensemble. Superpositions become
/// normalized pure states; mixtures become probability-weighted unions.
pub fn lower(expr: &StateExpr) -> Result<OperatorEnsemble> {
    match expr {
        StateExpr::Pure(s) => OperatorEnsemble::pure_superposition(&s.components()),
        StateExpr::Mixture(parts) => {
            let lowered = parts
                .iter()
                .map(|p| {
                    Ok((
                        p.probability,
                        OperatorEnsemble::pure_superposition(&p.state.components())?,
                    ))
                })
                .collect::<Result<Vec<_>>>()?;
            OperatorEnsemble::mix(&lowered)
        }
    }
}

/// `parse` followed by `lower`.
pub fn parse_state(text: &str) -> Result<OperatorEnsemble> {
    lower(&parse(text).map_err(Error::Parse)?)
}

fn clean(x: f64) -> f64 {
    // avoid rendering negative zero
    x + 0.0
}

/// Complex literal in the DSL's `a+bi` form.
pub fn format_complex(z: C64) -> String {
    let (re, im) = (clean(z.re), clean(z.im));
    if im == 0.0 {
        format!("{re:?}")
    } else if im < 0.0 {
        format!("{re:?}-{:?}i", -im)
    } else {
        format!("{re:?}+{im:?}i")
    }
}

fn format_term(first: bool, coeff: C64, ket: &ProductKet) -> String {
    let (sign, c) = if clean(coeff.re) < 0.0 || (coeff.re == 0.0 && coeff.im < 0.0) {
        ("-", -coeff)
    } else {
        ("+", coeff)
    };
    let lead = match (first, sign) {
        (true, "+") => String::new(),
        (true, _) => "-".to_string(),
        (false, s) => format!(" {s} "),
    };
    format!("{lead}{}*{ket}", format_complex(c))
}

/// Writes an ensemble back as a state expression: a mixture when all dyads
/// are diagonal, a superposition when the weight matrix is rank one.
pub fn render(rho: &OperatorEnsemble) -> Result<String> {
    let mut kets: Vec<ProductKet> = Vec::new();
    for d in rho.terms() {
        for k in [&d.ket, &d.bra] {
            if !kets.contains(k) {
                kets.push(k.clone());
            }
        }
    }
    let n = kets.len();
    let index = |k: &ProductKet| kets.iter().position(|x| x == k).expect("collected above");
    let mut m = vec![vec![C64::new(0.0, 0.0); n]; n];
    for d in rho.terms() {
        m[index(&d.ket)][index(&d.bra)] += d.weight;
    }

    let diagonal = rho.terms().iter().all(|d| d.ket == d.bra);
    if diagonal {
        if let [only] = kets.as_slice() {
            return Ok(format!("{only}"));
        }
        let mut parts = Vec::with_capacity(n);
        for (i, k) in kets.iter().enumerate() {
            let p = m[i][i];
            if p.im.abs() > 1e-12 || p.re <= 0.0 {
                return Err(Error::NotRepresentable(format!(
                    "diagonal weight {p} is not a probability"
                )));
            }
            parts.push(format!("{:?}: {k}", p.re));
        }
        return Ok(format!("mix {}", parts.join("; ")));
    }

    let pivot = (0..n)
        .max_by(|&a, &b| m[a][a].norm().total_cmp(&m[b][b].norm()))
        .expect("nonempty ensemble");
    let pivot_weight = m[pivot][pivot];
    if pivot_weight.re <= 0.0 {
        return Err(Error::NotRepresentable(
            "no positive diagonal weight".into(),
        ));
    }
    let root = pivot_weight.re.sqrt();
    let coeffs: Vec<C64> = (0..n).map(|j| m[j][pivot] / root).collect();
    for i in 0..n {
        for j in 0..n {
            if (m[i][j] - coeffs[i] * coeffs[j].conj()).norm() > 1e-12 {
                return Err(Error::NotRepresentable(
                    "weight matrix is neither diagonal nor rank one".into(),
                ));
            }
        }
    }
    Ok(coeffs
        .iter()
        .zip(&kets)
        .enumerate()
        .map(|(i, (c, k))| format_term(i == 0, *c, k))
        .collect())
}
