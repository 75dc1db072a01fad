//! The `.sul` text format and report rendering.
//!
//! ```text
//! # model: sphere:2
//! generator x 2
//! generator y 3
//! d x = 0
//! d y = x^2
//! ```

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::algebra::{FreeAlgebra, GradedElement, Rational};
use crate::cohomology::CohomologyReport;
use crate::hilali::{HilaliVerdict, OddTowerReport};
use crate::model::{Classification, SullivanModel};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseErrorKind {
    #[error("{0}")]
    Syntax(String),
    #[error("unknown generator {0}")]
    UnknownGenerator(String),
    #[error("generator {0} declared twice")]
    DuplicateGenerator(String),
    #[error("differential of {0} declared twice")]
    DuplicateDifferential(String),
    #[error("generator degrees must be positive")]
    ZeroDegree,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("line {line}, column {col}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub kind: ParseErrorKind,
}

fn syntax(line: usize, col: usize, msg: impl Into<String>) -> ParseError {
    ParseError {
        line,
        col,
        kind: ParseErrorKind::Syntax(msg.into()),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
}

fn is_ident_start(c: char) -> bool {
    c.is_ascii_alphabetic() || c == '_'
}

fn is_ident(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_'
}

// (token, 1-based column)
fn tokenize(s: &str, line: usize, col0: usize) -> Result<Vec<(Tok, usize)>, ParseError> {
    let chars: Vec<char> = s.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let col = col0 + i;
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        let single = match c {
            '+' => Some(Tok::Plus),
            '-' => Some(Tok::Minus),
            '*' => Some(Tok::Star),
            '/' => Some(Tok::Slash),
            '^' => Some(Tok::Caret),
            _ => None,
        };
        if let Some(t) = single {
            out.push((t, col));
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            if i < chars.len() && is_ident_start(chars[i]) {
                return Err(syntax(line, col0 + i, "expected an operator after a number"));
            }
            let text: String = chars[start..i].iter().collect();
            out.push((Tok::Int(text.parse().expect("digits")), col));
        } else if is_ident_start(c) {
            let start = i;
            while i < chars.len() && is_ident(chars[i]) {
                i += 1;
            }
            out.push((Tok::Ident(chars[start..i].iter().collect()), col));
        } else {
            return Err(syntax(line, col, format!("unexpected character `{c}`")));
        }
    }
    Ok(out)
}

struct ExprParser<'a> {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    line: usize,
    end_col: usize,
    alg: &'a FreeAlgebra,
}

impl ExprParser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _)| t)
    }

    fn col(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end_col, |(_, c)| *c)
    }

    fn err(&self, msg: &str) -> ParseError {
        syntax(self.line, self.col(), msg)
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|(t, _)| t.clone());
        self.pos += 1;
        t
    }

    fn int(&mut self, what: &str) -> Result<BigInt, ParseError> {
        match self.peek() {
            Some(Tok::Int(n)) => {
                let n = n.clone();
                self.pos += 1;
                Ok(n)
            }
            _ => Err(self.err(&format!("expected {what}"))),
        }
    }

    fn expr(&mut self) -> Result<GradedElement, ParseError> {
        if self.toks.is_empty() {
            return Err(self.err("expected an expression"));
        }
        let mut out = GradedElement::zero();
        let mut first = true;
        while self.pos < self.toks.len() || first {
            let negative = match self.peek() {
                Some(Tok::Plus) if !first => {
                    self.pos += 1;
                    false
                }
                Some(Tok::Minus) => {
                    self.pos += 1;
                    true
                }
                _ if first => false,
                _ => return Err(self.err("expected `+` or `-`")),
            };
            first = false;
            let (c, m) = self.term()?;
            out = self
                .alg
                .add_scaled(&out, &if negative { -c } else { c }, &m)
                .expect("same algebra");
        }
        Ok(out)
    }

    // [int[/int] '*'] mono | int[/int]
    fn term(&mut self) -> Result<(Rational, GradedElement), ParseError> {
        let mut coeff = Rational::one();
        if let Some(Tok::Int(_)) = self.peek() {
            let num = self.int("a coefficient")?;
            let mut den = BigInt::one();
            if self.peek() == Some(&Tok::Slash) {
                self.pos += 1;
                let col = self.col();
                den = self.int("a denominator")?;
                if den.is_zero() {
                    return Err(syntax(self.line, col, "zero denominator"));
                }
            }
            coeff = Rational::new(num, den);
            if self.peek() != Some(&Tok::Star) {
                return Ok((coeff, self.alg.one()));
            }
            self.pos += 1;
        }
        let mut raw = Vec::new();
        loop {
            let col = self.col();
            let name = match self.next() {
                Some(Tok::Ident(n)) => n,
                _ => return Err(syntax(self.line, col, "expected a generator name")),
            };
            let idx = self.alg.generator_index(&name).ok_or(ParseError {
                line: self.line,
                col,
                kind: ParseErrorKind::UnknownGenerator(name),
            })?;
            let mut exp = 1u32;
            if self.peek() == Some(&Tok::Caret) {
                self.pos += 1;
                let col = self.col();
                exp = self
                    .int("an exponent")?
                    .try_into()
                    .map_err(|_| syntax(self.line, col, "exponent out of range"))?;
            }
            raw.push((idx, exp));
            if self.peek() == Some(&Tok::Star) {
                self.pos += 1;
            } else {
                break;
            }
        }
        let (sign, mono) = self.alg.normal_form(&raw).expect("indices from the algebra");
        let elem = if sign == 0 {
            GradedElement::zero()
        } else {
            GradedElement::from_monomial(mono, Rational::from_integer(sign.into()))
        };
        Ok((coeff, elem))
    }
}

fn skip_ws(s: &str, from: usize) -> usize {
    from + s[from..].len() - s[from..].trim_start().len()
}

/// Splits off one whitespace-delimited word starting at byte `from`.
fn word(s: &str, from: usize) -> Option<(usize, &str, usize)> {
    let start = skip_ws(s, from);
    let rest = &s[start..];
    if rest.is_empty() {
        return None;
    }
    let len = rest.find(char::is_whitespace).unwrap_or(rest.len());
    Some((start, &rest[..len], start + len))
}

fn valid_name(s: &str) -> bool {
    let mut chars = s.chars();
    chars.next().is_some_and(is_ident_start) && chars.all(is_ident)
}

struct DiffLine<'a> {
    line: usize,
    name: String,
    name_col: usize,
    expr: &'a str,
    expr_col: usize,
}

/// Parses a `.sul` document. Generators and differentials may appear in any
/// order; differentials that are not given are zero.
pub fn parse_model(text: &str) -> Result<SullivanModel, ParseError> {
    let mut name = None;
    let mut gens: Vec<(String, u32)> = Vec::new();
    let mut diffs: Vec<DiffLine> = Vec::new();
    for (ln, raw) in text.lines().enumerate() {
        let line = ln + 1;
        let content = raw.split('#').next().unwrap_or("");
        if let Some(c) = raw.trim_start().strip_prefix('#') {
            if let Some(n) = c.trim().strip_prefix("model:") {
                name = Some(n.trim().to_string());
            }
        }
        let Some((kw_at, kw, after)) = word(content, 0) else {
            continue;
        };
        match kw {
            "generator" => {
                let (at, gname, after) =
                    word(content, after).ok_or_else(|| syntax(line, after + 1, "expected a generator name"))?;
                if !valid_name(gname) {
                    return Err(syntax(line, at + 1, format!("invalid generator name `{gname}`")));
                }
                let (dat, deg, after) =
                    word(content, after).ok_or_else(|| syntax(line, after + 1, "expected a degree"))?;
                let deg: u32 = deg
                    .parse()
                    .map_err(|_| syntax(line, dat + 1, format!("invalid degree `{deg}`")))?;
                if deg == 0 {
                    return Err(ParseError {
                        line,
                        col: dat + 1,
                        kind: ParseErrorKind::ZeroDegree,
                    });
                }
                if let Some((extra, _, _)) = word(content, after) {
                    return Err(syntax(line, extra + 1, "unexpected trailing input"));
                }
                if gens.iter().any(|(n, _)| n == gname) {
                    return Err(ParseError {
                        line,
                        col: at + 1,
                        kind: ParseErrorKind::DuplicateGenerator(gname.to_string()),
                    });
                }
                gens.push((gname.to_string(), deg));
            }
            "d" => {
                let (at, dname, after) =
                    word(content, after).ok_or_else(|| syntax(line, after + 1, "expected a generator name"))?;
                if !valid_name(dname) {
                    return Err(syntax(line, at + 1, format!("invalid generator name `{dname}`")));
                }
                let eq = skip_ws(content, after);
                if !content[eq..].starts_with('=') {
                    return Err(syntax(line, eq + 1, "expected `=`"));
                }
                diffs.push(DiffLine {
                    line,
                    name: dname.to_string(),
                    name_col: at + 1,
                    expr: &content[eq + 1..],
                    expr_col: eq + 2,
                });
            }
            other => {
                return Err(syntax(line, kw_at + 1, format!("unknown statement `{other}`")));
            }
        }
    }
    let alg = FreeAlgebra::new(gens);
    let mut differential: Vec<Option<GradedElement>> = vec![None; alg.arity()];
    for d in diffs {
        let idx = alg.generator_index(&d.name).ok_or(ParseError {
            line: d.line,
            col: d.name_col,
            kind: ParseErrorKind::UnknownGenerator(d.name.clone()),
        })?;
        if differential[idx].is_some() {
            return Err(ParseError {
                line: d.line,
                col: d.name_col,
                kind: ParseErrorKind::DuplicateDifferential(d.name),
            });
        }
        let toks = tokenize(d.expr, d.line, d.expr_col)?;
        let mut p = ExprParser {
            end_col: d.expr_col + d.expr.chars().count(),
            toks,
            pos: 0,
            line: d.line,
            alg: &alg,
        };
        differential[idx] = Some(p.expr()?);
    }
    let differential = differential
        .into_iter()
        .map(Option::unwrap_or_default)
        .collect();
    let model = SullivanModel::new(alg, differential).expect("built against the parsed algebra");
    Ok(match name {
        Some(n) if !n.is_empty() => model.with_name(n),
        _ => model,
    })
}

/// Canonical text: name header, generators in index order, then every
/// differential in graded order.
pub fn serialize_model(m: &SullivanModel) -> String {
    let mut out = String::new();
    if let Some(name) = m.name() {
        let _ = writeln!(out, "# model: {name}");
    }
    for g in m.generators() {
        let _ = writeln!(out, "generator {} {}", g.name, g.degree);
    }
    for (name, d) in m.differential_strings() {
        let _ = writeln!(out, "d {name} = {d}");
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Human,
    Machine,
}

/// Field order of the machine report is fixed by declaration order here.
#[derive(Serialize)]
struct MachineReport<'a> {
    model_name: &'a str,
    dim_v: usize,
    chi_pi: i64,
    betti: Vec<usize>,
    chi_c: i64,
    fd_predicted: i64,
    fd_observed: u32,
    total_dim: usize,
    classification: Classification,
    hilali_holds: bool,
    margin: i64,
    theorems: BTreeMap<&'static str, &'static str>,
    ellipticity_evidence: bool,
    window: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    odd_tower: Option<&'a OddTowerReport>,
}

fn classification_words(c: &Classification) -> String {
    let words: Vec<&str> = [
        (c.minimal, "minimal"),
        (c.pure, "pure"),
        (c.hyperelliptic, "hyperelliptic"),
        (c.odd_generated, "odd-generated"),
    ]
    .iter()
    .filter(|(b, _)| *b)
    .map(|(_, w)| *w)
    .collect();
    if words.is_empty() {
        "-".to_string()
    } else {
        words.join(" ")
    }
}

fn join<T: ToString>(v: &[T]) -> String {
    v.iter().map(T::to_string).collect::<Vec<_>>().join(" ")
}

/// Renders a full check result.
pub fn emit_report(
    m: &SullivanModel,
    verdict: &HilaliVerdict,
    report: &CohomologyReport,
    format: Format,
) -> String {
    let inv = m.invariants();
    let class = m.classify();
    let name = m.name().unwrap_or("unnamed");
    match format {
        Format::Machine => {
            let doc = MachineReport {
                model_name: name,
                dim_v: verdict.dim_v,
                chi_pi: inv.chi_pi,
                betti: report.betti(),
                chi_c: report.chi_c,
                fd_predicted: report.fd_predicted,
                fd_observed: report.fd_observed,
                total_dim: report.total_dim,
                classification: class,
                hilali_holds: verdict.holds,
                margin: verdict.margin,
                theorems: verdict
                    .applicable_theorems
                    .iter()
                    .map(|t| (t.tag, t.status.as_str()))
                    .collect(),
                ellipticity_evidence: verdict.ellipticity_evidence,
                window: report.window,
                odd_tower: verdict.odd_tower.as_ref(),
            };
            serde_json::to_string_pretty(&doc).expect("report serializes") + "\n"
        }
        Format::Human => {
            let mut rows: Vec<(&str, String)> = vec![
                ("model", name.to_string()),
                ("dim V", verdict.dim_v.to_string()),
                ("dim H", verdict.dim_h.to_string()),
                ("betti", join(&report.betti())),
                ("chi_pi", inv.chi_pi.to_string()),
                ("chi_c", report.chi_c.to_string()),
                ("fd predicted", report.fd_predicted.to_string()),
                ("fd observed", report.fd_observed.to_string()),
                ("classification", classification_words(&class)),
                (
                    "evidence",
                    format!(
                        "{} (window {})",
                        if verdict.ellipticity_evidence { "elliptic" } else { "inconclusive" },
                        report.window
                    ),
                ),
            ];
            for t in &verdict.applicable_theorems {
                rows.push(("theorem", format!("{:<3} {}", t.tag, t.status.as_str())));
            }
            rows.push((
                "verdict",
                format!(
                    "{} ≤ {} {} (margin {})",
                    verdict.dim_v,
                    verdict.dim_h,
                    if verdict.holds { "HOLDS" } else { "FAILS" },
                    verdict.margin
                ),
            ));
            table(&rows)
        }
    }
}

fn table(rows: &[(&str, String)]) -> String {
    let width = rows.iter().map(|(k, _)| k.len()).max().unwrap_or(0) + 2;
    rows.iter()
        .map(|(k, v)| format!("{k:<width$}{v}\n"))
        .collect()
}

/// Per-degree dimensions of cochains, cocycles, coboundaries and cohomology.
pub fn emit_cohomology(m: &SullivanModel, report: &CohomologyReport, format: Format) -> String {
    match format {
        Format::Machine => {
            #[derive(Serialize)]
            struct Doc<'a> {
                model_name: &'a str,
                report: &'a CohomologyReport,
            }
            serde_json::to_string_pretty(&Doc {
                model_name: m.name().unwrap_or("unnamed"),
                report,
            })
            .expect("report serializes")
                + "\n"
        }
        Format::Human => {
            let mut out = format!(
                "{:>3}  {:>8}  {:>8}  {:>12}  {:>5}\n",
                "k", "cochains", "cocycles", "coboundaries", "betti"
            );
            for s in &report.slices {
                let _ = writeln!(
                    out,
                    "{:>3}  {:>8}  {:>8}  {:>12}  {:>5}",
                    s.degree, s.dim_cochains, s.dim_cocycles, s.dim_coboundaries, s.betti
                );
            }
            out + &table(&[
                ("total", report.total_dim.to_string()),
                ("chi_c", report.chi_c.to_string()),
                ("fd observed", report.fd_observed.to_string()),
                ("duality", report.duality_ok.to_string()),
            ])
        }
    }
}

/// One line per tower stage.
pub fn emit_tower(report: &OddTowerReport, format: Format) -> String {
    match format {
        Format::Machine => serde_json::to_string_pretty(report).expect("report serializes") + "\n",
        Format::Human => {
            let mut out = format!(
                "{:>5}  {:>7}  {:>6}  {:>3}  {:>3}  {:>9}  {}\n",
                "stage", "|alpha|", "source", "ker", "im", "ker > im", "factorable"
            );
            for s in &report.stages {
                let _ = writeln!(
                    out,
                    "{:>5}  {:>7}  {:>6}  {:>3}  {:>3}  {:>9}  {}",
                    s.i,
                    s.alpha_degree,
                    s.source_dim,
                    s.ker_dim,
                    s.im_dim,
                    if s.condition_ok { "yes" } else { "no" },
                    if s.alpha_is_zero {
                        "trivial"
                    } else if s.c1_factorable {
                        "yes"
                    } else {
                        "not found"
                    }
                );
            }
            out
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::frac;
    use crate::model::term;

    const S2: &str = "generator x 2\ngenerator y 3\nd x = 0\nd y = x^2\n";

    #[test]
    fn parses_sphere_two() {
        let m = parse_model(S2).unwrap();
        assert_eq!(m.generators().len(), 2);
        assert_eq!(*m.d_of(1), term(m.algebra(), 1, &[("x", 2)]));
        assert_eq!(serialize_model(&m), S2);
    }

    #[test]
    fn reordered_odd_product_flips_sign() {
        let m = parse_model("generator y1 3\ngenerator y2 3\ngenerator z 5\nd z = y2*y1").unwrap();
        assert_eq!(*m.d_of(2), term(m.algebra(), -1, &[("y1", 1), ("y2", 1)]));
        assert!(serialize_model(&m).contains("d z = - y1*y2"));
    }

    #[test]
    fn unknown_generator_reports_position() {
        let e = parse_model("generator x 2\nd z = x").unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::UnknownGenerator("z".into()));
        assert_eq!((e.line, e.col), (2, 3));
        assert!(e.to_string().contains("unknown generator z"));
    }

    #[test]
    fn fractional_coefficients_round_trip() {
        let m = parse_model("generator x 2\ngenerator y 3\nd y = -5/3*x^2").unwrap();
        assert_eq!(m.d_of(1).coefficient(m.d_of(1).terms().next().unwrap().0), frac(-5, 3));
        let text = serialize_model(&m);
        assert!(text.contains("d y = - 5/3*x^2"), "{text}");
        assert_eq!(parse_model(&text).unwrap(), m);
    }

    #[test]
    fn rejections() {
        for bad in [
            "generator x 0",
            "generator x 2\ngenerator x 4",
            "generator x 2\ngenerator y 3\nd y = x^2\nd y = 0",
            "generator x two",
            "generator x 2 3",
            "gen x 2",
            "generator x 2\nd x x",
            "generator x 2\nd x = x +",
            "generator x 2\nd x = 2x",
            "generator x 2\nd x = 1/0*x",
            "generator x 2\nd x = x^",
            "generator x 2\nd x =",
            "generator 2x 2",
        ] {
            assert!(parse_model(bad).is_err(), "accepted {bad:?}");
        }
    }

    #[test]
    fn name_header_and_comments() {
        let m = parse_model("# model: s2\n# a comment\ngenerator x 2 # trailing\ngenerator y 3\nd y = x*x\n").unwrap();
        assert_eq!(m.name(), Some("s2"));
        assert_eq!(serialize_model(&m), format!("# model: s2\n{S2}"));
    }
}
