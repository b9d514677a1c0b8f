//! Text syntax shared by config files and golden tests.
//!
//! Numbers are complex expressions: `1.5`, `-2i`, `0.5+0.1i`, `pi/2`,
//! `polar(1, pi/3)`, `exp(i*pi/4)`. Domains are prefix expressions such as
//! `complement(arc(0, pi))`; measures and functions are bracketed lists:
//!
//! ```text
//! arcs[(0, pi, 0, 1)] atoms[(0.5, 1), (i, 2, 0.3)]
//! poly[1, 0, 2i] atoms[(0.5, 1)] arcs[(0, pi)]
//! ```

use std::fmt;

use num_complex::Complex64;

use crate::functions::AnalyticFn;
use crate::geometry::DomainExpr;
use crate::measures::{ArcPiece, Atom, CircleMeasure};

#[derive(Debug, Clone, PartialEq)]
pub struct SyntaxError {
    pub message: String,
    pub column: usize,
}

impl fmt::Display for SyntaxError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (column {})", self.message, self.column + 1)
    }
}

impl std::error::Error for SyntaxError {}

/// Shortest round-tripping decimal, with exponent for extreme magnitudes.
pub fn format_real(x: f64) -> String {
    let s = format!("{x:?}");
    match s.strip_suffix(".0") {
        Some(t) => t.to_string(),
        None => s,
    }
}

pub fn format_complex(z: Complex64) -> String {
    if z.im == 0.0 {
        return format_real(z.re);
    }
    let im = if z.im.abs() == 1.0 {
        String::new()
    } else {
        format_real(z.im.abs())
    };
    let sign = if z.im < 0.0 { "-" } else { "+" };
    if z.re == 0.0 {
        let lead = if z.im < 0.0 { "-" } else { "" };
        return format!("{lead}{im}i");
    }
    format!("{}{sign}{im}i", format_real(z.re))
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(f64),
    Imag(f64),
    Ident(String),
    Open,
    Close,
    OpenList,
    CloseList,
    Comma,
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
}

fn tokenize(text: &str) -> Result<Vec<(Tok, usize)>, SyntaxError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        let start = i;
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        let simple = match c {
            '(' => Some(Tok::Open),
            ')' => Some(Tok::Close),
            '[' => Some(Tok::OpenList),
            ']' => Some(Tok::CloseList),
            ',' => Some(Tok::Comma),
            '+' => Some(Tok::Plus),
            '-' => Some(Tok::Minus),
            '*' => Some(Tok::Star),
            '/' => Some(Tok::Slash),
            '^' => Some(Tok::Caret),
            _ => None,
        };
        if let Some(t) = simple {
            out.push((t, start));
            i += 1;
            continue;
        }
        if c.is_ascii_digit() || c == '.' {
            while i < bytes.len() && (bytes[i].is_ascii_digit() || bytes[i] == b'.') {
                i += 1;
            }
            if i < bytes.len() && (bytes[i] == b'e' || bytes[i] == b'E') {
                let mut j = i + 1;
                if j < bytes.len() && (bytes[j] == b'+' || bytes[j] == b'-') {
                    j += 1;
                }
                if j < bytes.len() && bytes[j].is_ascii_digit() {
                    i = j;
                    while i < bytes.len() && bytes[i].is_ascii_digit() {
                        i += 1;
                    }
                }
            }
            let value: f64 = text[start..i].parse().map_err(|_| SyntaxError {
                message: format!("bad number '{}'", &text[start..i]),
                column: start,
            })?;
            let imaginary = i < bytes.len()
                && bytes[i] == b'i'
                && !bytes.get(i + 1).is_some_and(|b| b.is_ascii_alphanumeric() || *b == b'_');
            if imaginary {
                i += 1;
                out.push((Tok::Imag(value), start));
            } else {
                out.push((Tok::Num(value), start));
            }
            continue;
        }
        if c.is_ascii_alphabetic() || c == '_' {
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                i += 1;
            }
            out.push((Tok::Ident(text[start..i].to_ascii_lowercase()), start));
            continue;
        }
        return Err(SyntaxError {
            message: format!("unexpected character '{c}'"),
            column: start,
        });
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    end: usize,
}

impl Parser {
    fn new(text: &str) -> Result<Self, SyntaxError> {
        Ok(Parser {
            toks: tokenize(text)?,
            pos: 0,
            end: text.len(),
        })
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _)| t)
    }

    fn column(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |(_, c)| *c)
    }

    fn error<T>(&self, message: impl Into<String>) -> Result<T, SyntaxError> {
        Err(SyntaxError {
            message: message.into(),
            column: self.column(),
        })
    }

    fn eat(&mut self, tok: &Tok) -> bool {
        if self.peek() == Some(tok) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<(), SyntaxError> {
        if self.eat(&tok) {
            Ok(())
        } else {
            self.error(format!("expected {what}"))
        }
    }

    fn finish(&self) -> Result<(), SyntaxError> {
        if self.pos == self.toks.len() {
            Ok(())
        } else {
            self.error("trailing input")
        }
    }

    fn ident(&mut self) -> Result<String, SyntaxError> {
        match self.peek() {
            Some(Tok::Ident(s)) => {
                let s = s.clone();
                self.pos += 1;
                Ok(s)
            }
            _ => self.error("expected a name"),
        }
    }

    fn expr(&mut self) -> Result<Complex64, SyntaxError> {
        let mut acc = self.term()?;
        loop {
            if self.eat(&Tok::Plus) {
                acc += self.term()?;
            } else if self.eat(&Tok::Minus) {
                acc -= self.term()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<Complex64, SyntaxError> {
        let mut acc = self.unary()?;
        loop {
            if self.eat(&Tok::Star) {
                acc *= self.unary()?;
            } else if self.eat(&Tok::Slash) {
                acc /= self.unary()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<Complex64, SyntaxError> {
        if self.eat(&Tok::Minus) {
            return Ok(-self.unary()?);
        }
        if self.eat(&Tok::Plus) {
            return self.unary();
        }
        let base = self.atom()?;
        if self.eat(&Tok::Caret) {
            let e = self.unary()?;
            if e.im == 0.0 && e.re.fract() == 0.0 && e.re.abs() <= i32::MAX as f64 {
                return Ok(base.powi(e.re as i32));
            }
            return Ok(base.powc(e));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Complex64, SyntaxError> {
        let column = self.column();
        match self.peek().cloned() {
            Some(Tok::Num(v)) => {
                self.pos += 1;
                Ok(Complex64::new(v, 0.0))
            }
            Some(Tok::Imag(v)) => {
                self.pos += 1;
                Ok(Complex64::new(0.0, v))
            }
            Some(Tok::Open) => {
                self.pos += 1;
                let v = self.expr()?;
                self.expect(Tok::Close, "')'")?;
                Ok(v)
            }
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                match name.as_str() {
                    "i" => Ok(Complex64::new(0.0, 1.0)),
                    "pi" => Ok(Complex64::new(std::f64::consts::PI, 0.0)),
                    "inf" => Ok(Complex64::new(f64::INFINITY, 0.0)),
                    "polar" => {
                        let args = self.args()?;
                        match args.as_slice() {
                            [r, t] if r.im == 0.0 && t.im == 0.0 => Ok(Complex64::from_polar(r.re, t.re)),
                            _ => Err(SyntaxError {
                                message: "polar takes two real arguments".into(),
                                column,
                            }),
                        }
                    }
                    "exp" | "sqrt" | "conj" => {
                        let args = self.args()?;
                        let [z] = args.as_slice() else {
                            return Err(SyntaxError {
                                message: format!("{name} takes one argument"),
                                column,
                            });
                        };
                        Ok(match name.as_str() {
                            "exp" => z.exp(),
                            "sqrt" => z.sqrt(),
                            _ => z.conj(),
                        })
                    }
                    _ => Err(SyntaxError {
                        message: format!("unknown name '{name}'"),
                        column,
                    }),
                }
            }
            _ => self.error("expected a number"),
        }
    }

    fn args(&mut self) -> Result<Vec<Complex64>, SyntaxError> {
        self.expect(Tok::Open, "'('")?;
        let mut out = Vec::new();
        if self.eat(&Tok::Close) {
            return Ok(out);
        }
        loop {
            out.push(self.expr()?);
            if self.eat(&Tok::Close) {
                return Ok(out);
            }
            self.expect(Tok::Comma, "',' or ')'")?;
        }
    }

    fn real(&mut self) -> Result<f64, SyntaxError> {
        let column = self.column();
        let z = self.expr()?;
        if z.im != 0.0 {
            return Err(SyntaxError {
                message: "expected a real number".into(),
                column,
            });
        }
        Ok(z.re)
    }

    fn integer(&mut self) -> Result<i32, SyntaxError> {
        let column = self.column();
        let x = self.real()?;
        if x.fract() != 0.0 || x.abs() > i32::MAX as f64 {
            return Err(SyntaxError {
                message: "expected an integer".into(),
                column,
            });
        }
        Ok(x as i32)
    }

    fn domain(&mut self) -> Result<DomainExpr, SyntaxError> {
        let column = self.column();
        let name = self.ident()?;
        self.expect(Tok::Open, "'('")?;
        let expr = match name.as_str() {
            "disc" => {
                let c = self.expr()?;
                self.expect(Tok::Comma, "','")?;
                let r = self.real()?;
                DomainExpr::disc(c, r)
            }
            "halfplane" => {
                let n = self.expr()?;
                self.expect(Tok::Comma, "','")?;
                let off = self.real()?;
                DomainExpr::half_plane(n, off)
            }
            "sphere" => DomainExpr::FullSphere,
            "arc" => {
                let a = self.real()?;
                self.expect(Tok::Comma, "','")?;
                let b = self.real()?;
                DomainExpr::arc(a, b)
            }
            "complement" => DomainExpr::complement(self.domain()?),
            "intersection" | "union" => {
                let mut parts = vec![self.domain()?];
                while self.eat(&Tok::Comma) {
                    parts.push(self.domain()?);
                }
                if name == "union" {
                    DomainExpr::union(parts)
                } else {
                    DomainExpr::intersection(parts)
                }
            }
            _ => {
                return Err(SyntaxError {
                    message: format!("unknown domain '{name}'"),
                    column,
                })
            }
        };
        self.expect(Tok::Close, "')'")?;
        Ok(expr)
    }

    /// `[ (…), (…) ]` where each tuple holds complex expressions.
    fn tuple_list(&mut self) -> Result<Vec<(Vec<Complex64>, usize)>, SyntaxError> {
        self.expect(Tok::OpenList, "'['")?;
        let mut out = Vec::new();
        if self.eat(&Tok::CloseList) {
            return Ok(out);
        }
        loop {
            let column = self.column();
            out.push((self.args()?, column));
            if self.eat(&Tok::CloseList) {
                return Ok(out);
            }
            self.expect(Tok::Comma, "',' or ']'")?;
        }
    }

    fn value_list(&mut self) -> Result<Vec<Complex64>, SyntaxError> {
        self.expect(Tok::OpenList, "'['")?;
        let mut out = Vec::new();
        if self.eat(&Tok::CloseList) {
            return Ok(out);
        }
        loop {
            out.push(self.expr()?);
            if self.eat(&Tok::CloseList) {
                return Ok(out);
            }
            self.expect(Tok::Comma, "',' or ']'")?;
        }
    }

    fn sections(&mut self, allow_poly: bool) -> Result<(Vec<Complex64>, Vec<Atom>, Vec<ArcPiece>), SyntaxError> {
        let mut poly = Vec::new();
        let mut atoms = Vec::new();
        let mut arcs = Vec::new();
        let mut seen = Vec::new();
        while self.pos < self.toks.len() {
            let column = self.column();
            let name = self.ident()?;
            if seen.contains(&name) {
                return Err(SyntaxError {
                    message: format!("section '{name}' given twice"),
                    column,
                });
            }
            match name.as_str() {
                "poly" if allow_poly => poly = self.value_list()?,
                "atoms" => {
                    for (t, col) in self.tuple_list()? {
                        atoms.push(atom_from_tuple(&t, col)?);
                    }
                }
                "arcs" => {
                    for (t, col) in self.tuple_list()? {
                        arcs.push(arc_from_tuple(&t, col)?);
                    }
                }
                _ => {
                    return Err(SyntaxError {
                        message: format!("unknown section '{name}'"),
                        column,
                    })
                }
            }
            seen.push(name);
        }
        Ok((poly, atoms, arcs))
    }
}

fn real_part(z: Complex64, column: usize, what: &str) -> Result<f64, SyntaxError> {
    if z.im != 0.0 {
        return Err(SyntaxError {
            message: format!("{what} must be real"),
            column,
        });
    }
    Ok(z.re)
}

fn int_part(z: Complex64, column: usize) -> Result<i32, SyntaxError> {
    let x = real_part(z, column, "power")?;
    if x.fract() != 0.0 || x.abs() > i32::MAX as f64 {
        return Err(SyntaxError {
            message: "power must be an integer".into(),
            column,
        });
    }
    Ok(x as i32)
}

fn atom_from_tuple(t: &[Complex64], column: usize) -> Result<Atom, SyntaxError> {
    match t {
        [pos, w] => Ok(Atom::new(*pos, *w)),
        [pos, m, w] => Ok(Atom {
            position: *pos,
            power: int_part(*m, column)?,
            weight: *w,
        }),
        _ => Err(SyntaxError {
            message: "atom is (position, weight) or (position, power, weight)".into(),
            column,
        }),
    }
}

fn arc_from_tuple(t: &[Complex64], column: usize) -> Result<ArcPiece, SyntaxError> {
    let (a, b, m, w) = match t {
        [a, b] => (*a, *b, 0, Complex64::new(1.0, 0.0)),
        [a, b, m, w] => (*a, *b, int_part(*m, column)?, *w),
        _ => {
            return Err(SyntaxError {
                message: "arc is (start, end) or (start, end, power, weight)".into(),
                column,
            })
        }
    };
    Ok(ArcPiece::new(
        real_part(a, column, "arc start")?,
        real_part(b, column, "arc end")?,
        m,
        w,
    ))
}

pub fn parse_complex(text: &str) -> Result<Complex64, SyntaxError> {
    let mut p = Parser::new(text)?;
    let v = p.expr()?;
    p.finish()?;
    Ok(v)
}

pub fn parse_real(text: &str) -> Result<f64, SyntaxError> {
    let mut p = Parser::new(text)?;
    let v = p.real()?;
    p.finish()?;
    Ok(v)
}

pub fn parse_integer(text: &str) -> Result<i32, SyntaxError> {
    let mut p = Parser::new(text)?;
    let v = p.integer()?;
    p.finish()?;
    Ok(v)
}

/// Comma-separated list of real expressions, with optional brackets.
pub fn parse_real_list(text: &str) -> Result<Vec<f64>, SyntaxError> {
    let mut p = Parser::new(text)?;
    let bracketed = p.eat(&Tok::OpenList);
    let mut out = Vec::new();
    if !(bracketed && p.eat(&Tok::CloseList)) {
        loop {
            out.push(p.real()?);
            if !p.eat(&Tok::Comma) {
                break;
            }
        }
        if bracketed {
            p.expect(Tok::CloseList, "']'")?;
        }
    }
    p.finish()?;
    Ok(out)
}

pub fn parse_domain(text: &str) -> Result<DomainExpr, SyntaxError> {
    let mut p = Parser::new(text)?;
    let d = p.domain()?;
    p.finish()?;
    Ok(d)
}

/// Parses `arcs[...] atoms[...]` into a measure without checking the support.
pub fn parse_measure(text: &str) -> Result<CircleMeasure, SyntaxError> {
    let mut p = Parser::new(text)?;
    let (_, atoms, arcs) = p.sections(false)?;
    Ok(CircleMeasure { atoms, arcs })
}

pub fn parse_function(text: &str) -> Result<AnalyticFn, SyntaxError> {
    let mut p = Parser::new(text)?;
    let (poly, atoms, arcs) = p.sections(true)?;
    Ok(AnalyticFn {
        poly,
        kernel: CircleMeasure { atoms, arcs },
    })
}

fn write_atoms(out: &mut String, atoms: &[Atom]) {
    let items: Vec<String> = atoms
        .iter()
        .map(|a| {
            if a.power == 0 {
                format!("({}, {})", format_complex(a.position), format_complex(a.weight))
            } else {
                format!(
                    "({}, {}, {})",
                    format_complex(a.position),
                    a.power,
                    format_complex(a.weight)
                )
            }
        })
        .collect();
    out.push_str(&format!("atoms[{}]", items.join(", ")));
}

fn write_arcs(out: &mut String, arcs: &[ArcPiece]) {
    let items: Vec<String> = arcs
        .iter()
        .map(|p| {
            format!(
                "({}, {}, {}, {})",
                format_real(p.start),
                format_real(p.end),
                p.power,
                format_complex(p.weight)
            )
        })
        .collect();
    out.push_str(&format!("arcs[{}]", items.join(", ")));
}

pub fn format_measure(nu: &CircleMeasure) -> String {
    let mut out = String::new();
    write_arcs(&mut out, &nu.arcs);
    out.push(' ');
    write_atoms(&mut out, &nu.atoms);
    out
}

pub fn format_function(f: &AnalyticFn) -> String {
    let coeffs: Vec<String> = f.poly.iter().map(|c| format_complex(*c)).collect();
    format!("poly[{}] {}", coeffs.join(", "), format_measure(&f.kernel))
}
