//! Line-oriented algebra definition files.
//!
//! ```text
//! # comment
//! [params]
//! a = sqrt(2)
//! [algebra]
//! dim = 4
//! (1,2) -> a*e2
//! (3,4) -> b*e4
//! [complex]
//! e1 -> e2
//! e3 -> e4
//! [deviance]
//! c2 = 3/2
//! [lambda]
//! lambda = -1/sqrt(2)*u2 - 1/2*u4
//! ```
//!
//! Expressions evaluate to left-invariant forms: numbers and parameters are
//! 0-forms, `e1..eN` / `u1..uN` are 1-forms, `^` is the wedge product and
//! `*`, `/` scale by 0-forms. `i` is the imaginary unit.

use std::collections::BTreeMap;
use std::fmt;

use nalgebra::DMatrix;
use num_complex::Complex64;
use psk::deviance::Deviance;
use psk::lie_kahler::{KahlerStructure, LieAlgebra};
use psk::tensor_core::AlternatingForm;

type Form = AlternatingForm<Complex64>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}, column {}: {}", self.line, self.column, self.message)
    }
}

impl std::error::Error for ParseError {}

type Parsed<T> = Result<T, ParseError>;

fn err<T>(line: usize, column: usize, message: impl Into<String>) -> Parsed<T> {
    Err(ParseError { line, column, message: message.into() })
}

/// Named parameter values, e.g. from `--param a=sqrt(2)`.
pub type Bindings = BTreeMap<String, Complex64>;

/// Parses `name=expr` command-line bindings; later bindings may refer to earlier ones.
pub fn parse_bindings(args: &[String]) -> Parsed<Bindings> {
    let mut out = Bindings::new();
    for (n, arg) in args.iter().enumerate() {
        let Some((name, expr)) = arg.split_once('=') else {
            return err(0, n + 1, format!("parameter binding `{arg}` is not of the form name=value"));
        };
        let name = name.trim();
        if !is_identifier(name) {
            return err(0, n + 1, format!("invalid parameter name `{name}`"));
        }
        let ctx = Context { dim: 0, atoms: None, params: &out };
        let value = ctx.scalar(expr, 0, name.len() + 2)?;
        out.insert(name.to_string(), value);
    }
    Ok(out)
}

fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_') && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

#[derive(Clone, Debug, PartialEq)]
enum Token {
    Num(f64),
    Ident(String),
    Op(char),
}

fn tokenize(text: &str, line: usize, col0: usize) -> Parsed<Vec<(Token, usize)>> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let col = col0 + i;
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() || (c == '.' && chars.get(i + 1).is_some_and(char::is_ascii_digit)) {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '.') {
                i += 1;
            }
            if i < chars.len() && matches!(chars[i], 'e' | 'E') {
                let mut j = i + 1;
                if j < chars.len() && matches!(chars[j], '+' | '-') {
                    j += 1;
                }
                if j < chars.len() && chars[j].is_ascii_digit() {
                    i = j;
                    while i < chars.len() && chars[i].is_ascii_digit() {
                        i += 1;
                    }
                }
            }
            let s: String = chars[start..i].iter().collect();
            match s.parse::<f64>() {
                Ok(v) => out.push((Token::Num(v), col)),
                Err(_) => return err(line, col, format!("malformed number `{s}`")),
            }
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push((Token::Ident(chars[start..i].iter().collect()), col));
        } else if "+-*/^()·".contains(c) {
            out.push((Token::Op(if c == '·' { '*' } else { c }), col));
            i += 1;
        } else {
            return err(line, col, format!("unexpected character `{c}`"));
        }
    }
    Ok(out)
}

/// Evaluation context: frame dimension, which basis atoms are allowed
/// (`e` or `u`), and parameter values.
struct Context<'a> {
    dim: usize,
    atoms: Option<char>,
    params: &'a Bindings,
}

struct Parser<'a, 'c> {
    ctx: &'c Context<'a>,
    tokens: Vec<(Token, usize)>,
    pos: usize,
    line: usize,
    end_col: usize,
}

impl Context<'_> {
    fn form(&self, text: &str, line: usize, col0: usize) -> Parsed<Form> {
        let tokens = tokenize(text, line, col0)?;
        let mut p = Parser { ctx: self, tokens, pos: 0, line, end_col: col0 + text.chars().count() };
        let v = p.expr()?;
        if let Some((tok, col)) = p.tokens.get(p.pos) {
            return err(line, *col, format!("unexpected {}", describe(tok)));
        }
        Ok(v)
    }

    fn scalar(&self, text: &str, line: usize, col0: usize) -> Parsed<Complex64> {
        let f = self.form(text, line, col0)?;
        if f.degree() != 0 {
            return err(line, col0, format!("expected a number, found a {}-form", f.degree()));
        }
        Ok(f.coefficient(&[]))
    }

    fn form_of_degree(&self, text: &str, degree: usize, line: usize, col0: usize) -> Parsed<Form> {
        let f = self.form(text, line, col0)?;
        if f.degree() != degree && !(f.degree() == 0 && f.coefficient(&[]) == Complex64::new(0.0, 0.0)) {
            return err(line, col0, format!("expected a {degree}-form, found a {}-form", f.degree()));
        }
        Ok(if f.degree() == degree { f } else { Form::zero(self.dim, degree) })
    }
}

fn describe(t: &Token) -> String {
    match t {
        Token::Num(v) => format!("number {v}"),
        Token::Ident(s) => format!("`{s}`"),
        Token::Op(c) => format!("`{c}`"),
    }
}

impl Parser<'_, '_> {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos).map(|(t, _)| t)
    }

    fn col(&self) -> usize {
        self.tokens.get(self.pos).map_or(self.end_col, |(_, c)| *c)
    }

    fn eat(&mut self, op: char) -> bool {
        if self.peek() == Some(&Token::Op(op)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn scalar_form(&self, c: Complex64) -> Form {
        Form::constant(self.ctx.dim, c)
    }

    fn expr(&mut self) -> Parsed<Form> {
        let mut acc = self.term()?;
        loop {
            let col = self.col();
            let sign = if self.eat('+') {
                1.0
            } else if self.eat('-') {
                -1.0
            } else {
                return Ok(acc);
            };
            let rhs = self.term()?;
            if rhs.degree() != acc.degree() {
                return err(self.line, col, format!("cannot add a {}-form and a {}-form", acc.degree(), rhs.degree()));
            }
            acc = &acc + &rhs.scale(&Complex64::new(sign, 0.0));
        }
    }

    fn term(&mut self) -> Parsed<Form> {
        let mut acc = self.unary()?;
        loop {
            let col = self.col();
            if self.eat('*') {
                let rhs = self.unary()?;
                acc = match (acc.degree(), rhs.degree()) {
                    (0, _) => rhs.scale(&acc.coefficient(&[])),
                    (_, 0) => acc.scale(&rhs.coefficient(&[])),
                    _ => return err(self.line, col, "`*` needs a number on one side; use `^` for wedge products"),
                };
            } else if self.eat('/') {
                let rhs = self.unary()?;
                if rhs.degree() != 0 {
                    return err(self.line, col, "division by a form");
                }
                let d = rhs.coefficient(&[]);
                if d.norm() == 0.0 {
                    return err(self.line, col, "division by zero");
                }
                acc = acc.scale(&(Complex64::new(1.0, 0.0) / d));
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Parsed<Form> {
        if self.eat('-') {
            return Ok(self.unary()?.scale(&Complex64::new(-1.0, 0.0)));
        }
        if self.eat('+') {
            return self.unary();
        }
        self.wedge()
    }

    fn wedge(&mut self) -> Parsed<Form> {
        let mut acc = self.primary()?;
        while self.eat('^') {
            let rhs = self.primary()?;
            acc = acc.wedge(&rhs);
        }
        Ok(acc)
    }

    fn primary(&mut self) -> Parsed<Form> {
        let col = self.col();
        let Some((tok, _)) = self.tokens.get(self.pos).cloned() else {
            return err(self.line, col, "unexpected end of expression");
        };
        self.pos += 1;
        match tok {
            Token::Num(v) => Ok(self.scalar_form(Complex64::new(v, 0.0))),
            Token::Op('(') => {
                let v = self.expr()?;
                if !self.eat(')') {
                    return err(self.line, self.col(), "expected `)`");
                }
                Ok(v)
            }
            Token::Op(c) => err(self.line, col, format!("unexpected `{c}`")),
            Token::Ident(name) if name == "sqrt" => {
                if !self.eat('(') {
                    return err(self.line, self.col(), "expected `(` after sqrt");
                }
                let arg = self.expr()?;
                if !self.eat(')') {
                    return err(self.line, self.col(), "expected `)`");
                }
                if arg.degree() != 0 {
                    return err(self.line, col, "sqrt of a form");
                }
                let z = arg.coefficient(&[]);
                let root = if z.im == 0.0 && z.re >= 0.0 { Complex64::new(z.re.sqrt(), 0.0) } else { z.sqrt() };
                Ok(self.scalar_form(root))
            }
            Token::Ident(name) if name == "i" => Ok(self.scalar_form(Complex64::new(0.0, 1.0))),
            Token::Ident(name) => {
                if let Some(index) = basis_index(&name) {
                    let prefix = name.chars().next().unwrap();
                    if self.ctx.atoms != Some(prefix) {
                        return err(self.line, col, format!("`{name}` is not allowed here"));
                    }
                    if index == 0 || index > self.ctx.dim {
                        return err(self.line, col, format!("`{name}` is out of range for dimension {}", self.ctx.dim));
                    }
                    return Ok(Form::basis(self.ctx.dim, index - 1));
                }
                match self.ctx.params.get(&name) {
                    Some(v) => Ok(self.scalar_form(*v)),
                    None => err(self.line, col, format!("unbound parameter `{name}`")),
                }
            }
        }
    }
}

/// `e3`, `e_3`, `u12` → index; anything else is a parameter name.
fn basis_index(name: &str) -> Option<usize> {
    let rest = name.strip_prefix('e').or_else(|| name.strip_prefix('u'))?;
    let digits = rest.strip_prefix('_').unwrap_or(rest);
    if digits.is_empty() || !digits.chars().all(|c| c.is_ascii_digit()) {
        return None;
    }
    digits.parse().ok()
}

/// Contents of an algebra definition file.
#[derive(Clone, Debug)]
pub struct AlgebraFile {
    pub structure: KahlerStructure,
    pub deviance: Option<Deviance>,
    pub lambda: Option<AlternatingForm<Complex64>>,
    pub params: Bindings,
}

struct Line<'a> {
    number: usize,
    text: &'a str,
    /// 1-based column of the first character of `text`.
    col: usize,
}

const SECTIONS: [&str; 6] = ["params", "algebra", "complex", "omega", "deviance", "lambda"];

fn split_sections(text: &str) -> Parsed<BTreeMap<&'static str, Vec<Line<'_>>>> {
    let mut sections: BTreeMap<&'static str, Vec<Line<'_>>> = BTreeMap::new();
    let mut current: Option<&'static str> = None;
    for (i, raw) in text.lines().enumerate() {
        let number = i + 1;
        let content = raw.split('#').next().unwrap_or("");
        let trimmed = content.trim();
        if trimmed.is_empty() {
            continue;
        }
        let col = content.len() - content.trim_start().len() + 1;
        if let Some(name) = trimmed.strip_prefix('[') {
            let Some(name) = name.strip_suffix(']') else {
                return err(number, col, "unterminated section header");
            };
            let Some(&known) = SECTIONS.iter().find(|s| **s == name.trim()) else {
                return err(number, col + 1, format!("unknown section `{}`", name.trim()));
            };
            if sections.contains_key(known) {
                return err(number, col, format!("section `{known}` appears twice"));
            }
            sections.insert(known, Vec::new());
            current = Some(known);
            continue;
        }
        let Some(section) = current else {
            return err(number, col, "content before the first section header");
        };
        sections.get_mut(section).unwrap().push(Line { number, text: trimmed, col });
    }
    Ok(sections)
}

/// Splits `lhs <sep> rhs`, returning the trimmed sides and the column of `rhs`.
fn split_at<'a>(line: &Line<'a>, sep: &str) -> Parsed<(&'a str, &'a str, usize)> {
    let Some(pos) = line.text.find(sep) else {
        return err(line.number, line.col, format!("expected `{sep}`"));
    };
    let lhs = line.text[..pos].trim();
    let rhs_raw = &line.text[pos + sep.len()..];
    let rhs_col = line.col + pos + sep.len() + (rhs_raw.len() - rhs_raw.trim_start().len());
    Ok((lhs, rhs_raw.trim(), rhs_col))
}

/// Parses a definition file with parameter bindings taking precedence over
/// the file's `[params]` defaults.
pub fn parse_algebra(text: &str, bindings: &Bindings) -> Parsed<AlgebraFile> {
    let sections = split_sections(text)?;
    let mut params = bindings.clone();
    for line in sections.get("params").into_iter().flatten() {
        let (name, expr, col) = split_at(line, "=")?;
        if !is_identifier(name) || basis_index(name).is_some() || name == "i" || name == "sqrt" {
            return err(line.number, line.col, format!("invalid parameter name `{name}`"));
        }
        if bindings.contains_key(name) {
            continue;
        }
        let value = Context { dim: 0, atoms: None, params: &params }.scalar(expr, line.number, col)?;
        params.insert(name.to_string(), value);
    }

    let Some(algebra) = sections.get("algebra") else {
        return err(1, 1, "missing [algebra] section");
    };
    let mut lines = algebra.iter();
    let dim = match lines.next() {
        Some(line) => {
            let (key, value, col) = split_at(line, "=")?;
            if key != "dim" {
                return err(line.number, line.col, "the [algebra] section must start with `dim = N`");
            }
            match value.parse::<usize>() {
                Ok(d) if d > 0 && d % 2 == 0 => d,
                _ => return err(line.number, col, format!("dimension must be a positive even integer, got `{value}`")),
            }
        }
        None => return err(1, 1, "empty [algebra] section"),
    };
    let ctx_e = Context { dim, atoms: Some('e'), params: &params };
    let mut alg = LieAlgebra::abelian(dim);
    let mut seen = std::collections::BTreeSet::new();
    for line in lines {
        let (lhs, rhs, col) = split_at(line, "->")?;
        let (i, j) = parse_pair(lhs, dim, line)?;
        if !seen.insert((i.min(j), i.max(j))) {
            return err(line.number, line.col, format!("bracket ({},{}) defined twice", i + 1, j + 1));
        }
        let v = ctx_e.form_of_degree(rhs, 1, line.number, col)?;
        let mut terms = Vec::new();
        for k in 0..dim {
            let c = v.coefficient(&[k]);
            if c.im != 0.0 {
                return err(line.number, col, "structure constants must be real");
            }
            if c.re != 0.0 {
                terms.push((k, c.re));
            }
        }
        alg = alg.with_bracket(i, j, &terms);
    }

    let imat = match sections.get("complex") {
        None => psk::lie_kahler::standard_complex_structure(dim),
        Some(lines) => parse_complex(lines, &ctx_e)?,
    };
    let mut structure = KahlerStructure::new(alg, imat);

    let ctx_u = Context { dim, atoms: Some('u'), params: &params };
    if let Some(lines) = sections.get("omega") {
        structure.omega = single_assignment(lines, "omega", |rhs, n, c| ctx_u.form_of_degree(rhs, 2, n, c))?;
    }
    let lambda = match sections.get("lambda") {
        Some(lines) => Some(single_assignment(lines, "lambda", |rhs, n, c| ctx_u.form_of_degree(rhs, 1, n, c))?),
        None => None,
    };
    let deviance = match sections.get("deviance") {
        Some(lines) => Some(parse_deviance(lines, dim, &params)?),
        None => None,
    };
    Ok(AlgebraFile { structure, deviance, lambda, params })
}

fn parse_pair(lhs: &str, dim: usize, line: &Line<'_>) -> Parsed<(usize, usize)> {
    let inner = lhs.strip_prefix('(').and_then(|s| s.strip_suffix(')'));
    let Some(inner) = inner else {
        return err(line.number, line.col, "expected `(i,j)`");
    };
    let parts: Vec<&str> = inner.split(',').map(str::trim).collect();
    let index = |s: &str| -> Parsed<usize> {
        match s.parse::<usize>() {
            Ok(k) if (1..=dim).contains(&k) => Ok(k - 1),
            _ => err(line.number, line.col + 1, format!("index `{s}` is not in 1..{dim}")),
        }
    };
    if parts.len() != 2 {
        return err(line.number, line.col, "expected `(i,j)`");
    }
    let (i, j) = (index(parts[0])?, index(parts[1])?);
    if i == j {
        return err(line.number, line.col, "a bracket needs two distinct indices");
    }
    Ok((i, j))
}

fn parse_complex(lines: &[Line<'_>], ctx: &Context<'_>) -> Parsed<DMatrix<f64>> {
    let dim = ctx.dim;
    if lines.len() == 1 && lines[0].text == "standard" {
        return Ok(psk::lie_kahler::standard_complex_structure(dim));
    }
    let mut columns: Vec<Option<Vec<f64>>> = vec![None; dim];
    for line in lines {
        let (lhs, rhs, col) = split_at(line, "->")?;
        let src = match basis_index(lhs) {
            Some(k) if lhs.starts_with('e') && (1..=dim).contains(&k) => k - 1,
            _ => return err(line.number, line.col, format!("expected a basis vector e1..e{dim}, found `{lhs}`")),
        };
        let v = ctx.form_of_degree(rhs, 1, line.number, col)?;
        let image: Vec<f64> = (0..dim).map(|k| v.coefficient(&[k]).re).collect();
        if let Some(existing) = &columns[src] {
            if existing.iter().zip(&image).any(|(x, y)| (x - y).abs() > 1e-12) {
                return err(line.number, line.col, format!("I {lhs} contradicts an earlier line"));
            }
        }
        let support: Vec<usize> = (0..dim).filter(|&k| image[k] != 0.0).collect();
        if let [target] = support[..] {
            // I(c e_t) = e_s forces I e_t = −e_s / c.
            if columns[target].is_none() && target != src {
                let mut back = vec![0.0; dim];
                back[src] = -1.0 / image[target];
                columns[target] = Some(back);
            }
        }
        columns[src] = Some(image);
    }
    let mut m = DMatrix::zeros(dim, dim);
    for (j, c) in columns.iter().enumerate() {
        let Some(c) = c else {
            return err(lines[0].number, 1, format!("complex structure leaves I e{} undetermined", j + 1));
        };
        for i in 0..dim {
            m[(i, j)] = c[i];
        }
    }
    Ok(m)
}

fn single_assignment(lines: &[Line<'_>], key: &str, eval: impl Fn(&str, usize, usize) -> Parsed<Form>) -> Parsed<Form> {
    let [line] = lines else {
        let at = lines.get(1).map_or(1, |l| l.number);
        return err(at, 1, format!("expected exactly one `{key} = ...` line"));
    };
    let (lhs, rhs, col) = split_at(line, "=")?;
    if lhs != key {
        return err(line.number, line.col, format!("expected `{key} = ...`"));
    }
    eval(rhs, line.number, col)
}

fn parse_deviance(lines: &[Line<'_>], dim: usize, params: &Bindings) -> Parsed<Deviance> {
    if dim != 4 {
        return err(lines.first().map_or(1, |l| l.number), 1, "a [deviance] section needs dimension 4");
    }
    let ctx = Context { dim: 0, atoms: None, params };
    let mut c = [Complex64::new(0.0, 0.0); 4];
    let mut set = [false; 4];
    for line in lines {
        let (lhs, rhs, col) = split_at(line, "=")?;
        let k = match lhs {
            "c1" => 0,
            "c2" => 1,
            "c3" => 2,
            "c4" => 3,
            _ => return err(line.number, line.col, format!("expected c1..c4, found `{lhs}`")),
        };
        if set[k] {
            return err(line.number, line.col, format!("`{lhs}` assigned twice"));
        }
        c[k] = ctx.scalar(rhs, line.number, col)?;
        set[k] = true;
    }
    Ok(Deviance::from_cubic(c))
}
