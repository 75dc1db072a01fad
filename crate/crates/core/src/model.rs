//! Minimal Sullivan algebras: the differential, validation, classification
//! and the invariants that can be read off the generators.

use std::fmt;

use num_traits::One;
use serde::Serialize;

use crate::algebra::{FreeAlgebra, Generator, GradedElement, Monomial, Rational};
use crate::error::{AlgebraError, Result};
use crate::fh_enum;

/// `(⋀V, d)` with `d` stored on generators and extended as a derivation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SullivanModel {
    name: Option<String>,
    algebra: FreeAlgebra,
    differential: Vec<GradedElement>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    DegreeMismatch {
        generator: String,
        expected: u32,
        found: Vec<u32>,
    },
    NotTriangular {
        generator: String,
        uses: String,
    },
    NotDecomposable {
        generator: String,
        term: String,
    },
    DSquaredNonzero {
        generator: String,
        value: String,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::DegreeMismatch {
                generator,
                expected,
                found,
            } => write!(
                f,
                "degree: d {generator} should have degree {expected}, found terms of degree {found:?}"
            ),
            Violation::NotTriangular { generator, uses } => write!(
                f,
                "triangularity: d {generator} involves {uses}, which is not declared before {generator}"
            ),
            Violation::NotDecomposable { generator, term } => write!(
                f,
                "minimality: d {generator} has the term {term} of word length < 2"
            ),
            Violation::DSquaredNonzero { generator, value } => {
                write!(f, "d^2: d(d {generator}) = {value}, expected 0")
            }
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Classification {
    pub minimal: bool,
    pub pure: bool,
    pub hyperelliptic: bool,
    pub odd_generated: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ModelInvariants {
    /// Number of even generators.
    pub n: usize,
    /// Odd count minus even count.
    pub p: i64,
    pub chi_pi: i64,
    pub dim_v: usize,
    pub dim_v_even: usize,
    pub dim_v_odd: usize,
    pub fd_predicted: i64,
    /// Whether the model's own degree multisets satisfy the degree inequalities.
    pub fh_inequalities_hold: bool,
}

impl SullivanModel {
    pub fn new(algebra: FreeAlgebra, differential: Vec<GradedElement>) -> Result<Self> {
        if differential.len() != algebra.arity() {
            return Err(AlgebraError::MismatchedGenerators {
                expected: algebra.arity(),
                found: differential.len(),
            });
        }
        for e in &differential {
            algebra.check_element(e)?;
        }
        Ok(SullivanModel {
            name: None,
            algebra,
            differential,
        })
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn algebra(&self) -> &FreeAlgebra {
        &self.algebra
    }

    pub fn generators(&self) -> &[Generator] {
        self.algebra.generators()
    }

    pub fn differential(&self) -> &[GradedElement] {
        &self.differential
    }

    pub fn d_of(&self, index: usize) -> &GradedElement {
        &self.differential[index]
    }

    pub fn even_degrees(&self) -> Vec<u32> {
        let mut v: Vec<u32> = self
            .generators()
            .iter()
            .filter(|g| g.is_even())
            .map(|g| g.degree)
            .collect();
        v.sort_unstable();
        v
    }

    pub fn odd_degrees(&self) -> Vec<u32> {
        let mut v: Vec<u32> = self
            .generators()
            .iter()
            .filter(|g| g.is_odd())
            .map(|g| g.degree)
            .collect();
        v.sort_unstable();
        v
    }

    pub fn max_generator_degree(&self) -> u32 {
        self.generators().iter().map(|g| g.degree).max().unwrap_or(0)
    }

    /// The sub-algebra on the first `k` generators; well defined for
    /// triangular models.
    pub fn truncated(&self, k: usize) -> SullivanModel {
        let gens = self.generators()[..k]
            .iter()
            .map(|g| (g.name.clone(), g.degree));
        let algebra = FreeAlgebra::new(gens);
        let differential = self.differential[..k]
            .iter()
            .map(|e| {
                GradedElement::from_terms(e.terms().map(|(m, c)| {
                    (
                        Monomial::from_exponents(m.exponents()[..k].to_vec()),
                        c.clone(),
                    )
                }))
            })
            .collect();
        SullivanModel {
            name: None,
            algebra,
            differential,
        }
    }

    /// `d` on a single normal-form monomial, by the graded Leibniz rule.
    pub fn d_monomial(&self, m: &Monomial) -> GradedElement {
        let alg = &self.algebra;
        let exps = m.exponents();
        let mut out = GradedElement::zero();
        let mut prefix_degree = 0u32;
        for (i, g) in self.generators().iter().enumerate() {
            let a = exps[i];
            if a == 0 {
                continue;
            }
            let dg = &self.differential[i];
            if !dg.is_zero() {
                let mut prefix = vec![0; exps.len()];
                prefix[..i].copy_from_slice(&exps[..i]);
                let mut rest = exps.to_vec();
                rest[..i].iter_mut().for_each(|e| *e = 0);
                // the factor g^a becomes a * g^(a-1) * dg
                rest[i] = a - 1;
                let sign = if prefix_degree % 2 == 1 { -1 } else { 1 };
                let coeff = Rational::from_integer((sign * a as i64).into());
                let prefix = Monomial::from_exponents(prefix);
                let rest = Monomial::from_exponents(rest);
                for (t, c) in dg.terms() {
                    // prefix * t * rest; g^(a-1) is even or absent, so it commutes with t
                    let Some((n1, pt)) = alg.monomial_product(&prefix, t) else {
                        continue;
                    };
                    let Some((n2, ptr)) = alg.monomial_product(&pt, &rest) else {
                        continue;
                    };
                    let v = &coeff * c;
                    out.add_term(ptr, if n1 ^ n2 { -v } else { v });
                }
            }
            prefix_degree += a * g.degree;
        }
        out
    }

    pub fn apply_differential(&self, e: &GradedElement) -> Result<GradedElement> {
        self.algebra.check_element(e)?;
        let mut out = GradedElement::zero();
        for (m, c) in e.terms() {
            for (t, v) in self.d_monomial(m).terms() {
                out.add_term(t.clone(), v * c);
            }
        }
        Ok(out)
    }

    /// Checks degrees, triangularity, decomposability and `d∘d = 0`,
    /// collecting every violation.
    pub fn validate(&self) -> ValidationReport {
        let alg = &self.algebra;
        let mut violations = Vec::new();
        for (i, g) in self.generators().iter().enumerate() {
            let dg = &self.differential[i];
            let expected = g.degree + 1;
            let mut found: Vec<u32> = dg.terms().map(|(m, _)| alg.monomial_degree(m)).collect();
            found.sort_unstable();
            found.dedup();
            if found.iter().any(|&d| d != expected) {
                violations.push(Violation::DegreeMismatch {
                    generator: g.name.clone(),
                    expected,
                    found,
                });
            }
            let mut later: Vec<usize> = dg
                .terms()
                .flat_map(|(m, _)| m.support().filter(|&j| j >= i).collect::<Vec<_>>())
                .collect();
            later.sort_unstable();
            later.dedup();
            if !later.is_empty() {
                let uses = later
                    .iter()
                    .map(|&j| self.generators()[j].name.clone())
                    .collect::<Vec<_>>()
                    .join(", ");
                violations.push(Violation::NotTriangular {
                    generator: g.name.clone(),
                    uses,
                });
            }
            for (m, _) in dg.terms() {
                if m.word_length() < 2 {
                    violations.push(Violation::NotDecomposable {
                        generator: g.name.clone(),
                        term: alg.format_monomial(m),
                    });
                }
            }
            let dd = self
                .apply_differential(dg)
                .expect("differential shares the model's generators");
            if !dd.is_zero() {
                violations.push(Violation::DSquaredNonzero {
                    generator: g.name.clone(),
                    value: alg.format_element(&dd),
                });
            }
        }
        ValidationReport { violations }
    }

    fn monomial_has_even(&self, m: &Monomial) -> bool {
        m.support().any(|j| self.generators()[j].is_even())
    }

    fn monomial_has_odd(&self, m: &Monomial) -> bool {
        m.support().any(|j| self.generators()[j].is_odd())
    }

    pub fn classify(&self) -> Classification {
        let gens = self.generators();
        let minimal = gens.iter().enumerate().all(|(i, _)| {
            self.differential[i]
                .terms()
                .all(|(m, _)| m.word_length() >= 2 && m.support().all(|j| j < i))
        });
        let even_closed = gens
            .iter()
            .zip(&self.differential)
            .all(|(g, d)| g.is_odd() || d.is_zero());
        let odd_terms = || {
            gens.iter()
                .zip(&self.differential)
                .filter(|(g, _)| g.is_odd())
                .flat_map(|(_, d)| d.terms().map(|(m, _)| m))
        };
        let pure = even_closed && odd_terms().all(|m| !self.monomial_has_odd(m));
        let hyperelliptic = even_closed && odd_terms().all(|m| self.monomial_has_even(m));
        Classification {
            minimal,
            pure,
            hyperelliptic,
            odd_generated: gens.iter().all(|g| g.is_odd()),
        }
    }

    /// Splits `d(g)` into its purely even part and the mixed remainder.
    pub fn split_differential(&self, index: usize) -> (GradedElement, GradedElement) {
        let mut even_part = GradedElement::zero();
        let mut rest = GradedElement::zero();
        for (m, c) in self.differential[index].terms() {
            if self.monomial_has_odd(m) {
                rest.add_term(m.clone(), c.clone());
            } else {
                even_part.add_term(m.clone(), c.clone());
            }
        }
        (even_part, rest)
    }

    pub fn invariants(&self) -> ModelInvariants {
        let even = self.even_degrees();
        let odd = self.odd_degrees();
        let fd_predicted = odd.iter().map(|&d| d as i64).sum::<i64>()
            - even.iter().map(|&d| d as i64 - 1).sum::<i64>();
        let fh_inequalities_hold =
            fd_predicted >= 0 && fh_enum::satisfies_constraints(&even, &odd, fd_predicted as u32);
        ModelInvariants {
            n: even.len(),
            p: odd.len() as i64 - even.len() as i64,
            chi_pi: even.len() as i64 - odd.len() as i64,
            dim_v: even.len() + odd.len(),
            dim_v_even: even.len(),
            dim_v_odd: odd.len(),
            fd_predicted,
            fh_inequalities_hold,
        }
    }

    /// `d(g)` for every generator, as text, in generator order.
    pub fn differential_strings(&self) -> Vec<(String, String)> {
        self.generators()
            .iter()
            .zip(&self.differential)
            .map(|(g, d)| (g.name.clone(), self.algebra.format_element(d)))
            .collect()
    }
}

/// Builds a differential term `coeff * Π name^exp` against an algebra.
///
/// Panics on unknown names; meant for hand-assembled models.
pub fn term(alg: &FreeAlgebra, coeff: i64, factors: &[(&str, u32)]) -> GradedElement {
    let raw: Vec<(usize, u32)> = factors
        .iter()
        .map(|(n, e)| {
            (
                alg.generator_index(n)
                    .unwrap_or_else(|| panic!("unknown generator {n}")),
                *e,
            )
        })
        .collect();
    let (sign, m) = alg.normal_form(&raw).expect("indices come from the algebra");
    if sign == 0 {
        return GradedElement::zero();
    }
    GradedElement::from_monomial(m, Rational::from_integer((coeff * sign as i64).into()))
}

/// Sum of terms, see [`term`].
pub fn poly(alg: &FreeAlgebra, terms: &[(i64, &[(&str, u32)])]) -> GradedElement {
    let mut out = GradedElement::zero();
    for (c, f) in terms {
        out = alg
            .add_scaled(&out, &Rational::one(), &term(alg, *c, f))
            .expect("same algebra");
    }
    out
}

/// Assembles a model from generator declarations and `(name, d(name))` pairs;
/// generators without an entry get `d = 0`.
pub fn assemble(
    gens: &[(&str, u32)],
    diffs: impl FnOnce(&FreeAlgebra) -> Vec<(&'static str, GradedElement)>,
) -> SullivanModel {
    let alg = FreeAlgebra::new(gens.iter().map(|(n, d)| (n.to_string(), *d)));
    let mut differential = vec![GradedElement::zero(); alg.arity()];
    for (name, e) in diffs(&alg) {
        let i = alg
            .generator_index(name)
            .unwrap_or_else(|| panic!("unknown generator {name}"));
        differential[i] = e;
    }
    SullivanModel::new(alg, differential).expect("differentials built on the same algebra")
}
