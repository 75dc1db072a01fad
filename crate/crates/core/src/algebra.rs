//! The free graded-commutative algebra over the rationals.
//!
//! Monomials are exponent vectors indexed by generator position. Odd
//! generators carry exponent 0 or 1; even generators are polynomial. The
//! canonical factor order is ascending generator index, and any sign produced
//! by reordering odd factors lives in the coefficient.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{AlgebraError, Result};

/// Exact rational coefficient; always stored in lowest terms with a positive denominator.
pub type Rational = BigRational;

/// Shorthand for an integer-valued rational.
pub fn rat(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

/// Shorthand for `num/den`, reduced.
pub fn frac(num: i64, den: i64) -> Rational {
    Rational::new(num.into(), den.into())
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Generator {
    pub name: String,
    pub index: usize,
    pub degree: u32,
}

impl Generator {
    pub fn is_odd(&self) -> bool {
        self.degree % 2 == 1
    }

    pub fn is_even(&self) -> bool {
        !self.is_odd()
    }
}

/// A normal-form monomial: one exponent per generator.
///
/// Ordering is lexicographic with larger exponents first, so for two
/// generators `x1^2 < x1*x2 < x2^2`. Callers that need the graded order
/// compare degrees first (see [`FreeAlgebra::graded_cmp`]).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn one(arity: usize) -> Self {
        Monomial(vec![0; arity])
    }

    pub fn generator(arity: usize, index: usize) -> Self {
        let mut exps = vec![0; arity];
        exps[index] = 1;
        Monomial(exps)
    }

    pub fn from_exponents(exps: Vec<u32>) -> Self {
        Monomial(exps)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn arity(&self) -> usize {
        self.0.len()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    /// Number of generator factors counted with multiplicity.
    pub fn word_length(&self) -> u32 {
        self.0.iter().sum()
    }

    /// Indices of generators with non-zero exponent.
    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().enumerate().filter(|(_, &e)| e > 0).map(|(i, _)| i)
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0
            .len()
            .cmp(&other.0.len())
            .then_with(|| other.0.cmp(&self.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A finite rational combination of normal-form monomials.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct GradedElement {
    terms: BTreeMap<Monomial, Rational>,
}

impl GradedElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn from_monomial(m: Monomial, c: Rational) -> Self {
        let mut e = Self::zero();
        e.add_term(m, c);
        e
    }

    pub fn from_terms<I: IntoIterator<Item = (Monomial, Rational)>>(terms: I) -> Self {
        let mut e = Self::zero();
        for (m, c) in terms {
            e.add_term(m, c);
        }
        e
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    /// Adds `c * m`, dropping the term if it cancels.
    pub fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn scaled(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        GradedElement {
            terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect(),
        }
    }

    pub fn neg(&self) -> Self {
        GradedElement {
            terms: self.terms.iter().map(|(m, v)| (m.clone(), -v)).collect(),
        }
    }
}

/// The free graded-commutative algebra on an ordered list of generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FreeAlgebra {
    generators: Vec<Generator>,
}

impl FreeAlgebra {
    /// Builds the algebra from `(name, degree)` pairs; indices follow list order.
    pub fn new<S: Into<String>>(gens: impl IntoIterator<Item = (S, u32)>) -> Self {
        let generators = gens
            .into_iter()
            .enumerate()
            .map(|(index, (name, degree))| Generator {
                name: name.into(),
                index,
                degree,
            })
            .collect();
        FreeAlgebra { generators }
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    pub fn arity(&self) -> usize {
        self.generators.len()
    }

    pub fn generator_index(&self, name: &str) -> Option<usize> {
        self.generators.iter().position(|g| g.name == name)
    }

    /// The element consisting of the single generator `index`.
    pub fn gen(&self, index: usize) -> GradedElement {
        GradedElement::from_monomial(Monomial::generator(self.arity(), index), Rational::one())
    }

    pub fn one(&self) -> GradedElement {
        GradedElement::from_monomial(Monomial::one(self.arity()), Rational::one())
    }

    pub fn monomial_degree(&self, m: &Monomial) -> u32 {
        m.0.iter()
            .zip(&self.generators)
            .map(|(e, g)| e * g.degree)
            .sum()
    }

    /// Graded order: degree first, then the monomial order.
    pub fn graded_cmp(&self, a: &Monomial, b: &Monomial) -> Ordering {
        self.monomial_degree(a)
            .cmp(&self.monomial_degree(b))
            .then_with(|| a.cmp(b))
    }

    pub fn check_element(&self, e: &GradedElement) -> Result<()> {
        match e.terms.keys().find(|m| m.arity() != self.arity()) {
            Some(m) => Err(AlgebraError::MismatchedGenerators {
                expected: self.arity(),
                found: m.arity(),
            }),
            None => Ok(()),
        }
    }

    /// `Ok(None)` for the zero element, `Ok(Some(k))` when every term has degree `k`.
    pub fn homogeneous_degree(&self, e: &GradedElement) -> Result<Option<u32>> {
        self.check_element(e)?;
        let mut degrees = e.terms.keys().map(|m| self.monomial_degree(m));
        let Some(first) = degrees.next() else {
            return Ok(None);
        };
        if degrees.all(|d| d == first) {
            Ok(Some(first))
        } else {
            Err(AlgebraError::NotHomogeneous)
        }
    }

    /// Sorts a raw product of generator powers into normal form.
    ///
    /// Returns the sign of the reordering (0 when an odd generator repeats)
    /// together with the sorted monomial.
    pub fn normal_form(&self, raw: &[(usize, u32)]) -> Result<(i8, Monomial)> {
        let n = self.arity();
        let mut exps = vec![0u32; n];
        let mut odd_sequence = Vec::new();
        let mut vanishes = false;
        for &(idx, e) in raw {
            let g = self
                .generators
                .get(idx)
                .ok_or(AlgebraError::UnknownGenerator(idx))?;
            if e == 0 {
                continue;
            }
            if g.is_odd() {
                if e >= 2 || exps[idx] > 0 {
                    vanishes = true;
                }
                odd_sequence.push(idx);
            }
            exps[idx] += e;
        }
        if vanishes {
            return Ok((0, Monomial(exps)));
        }
        let inversions = odd_sequence
            .iter()
            .enumerate()
            .map(|(i, a)| odd_sequence[i + 1..].iter().filter(|b| *b < a).count())
            .sum::<usize>();
        let sign = if inversions % 2 == 0 { 1 } else { -1 };
        Ok((sign, Monomial(exps)))
    }

    /// Product of two normal-form monomials: `None` when it vanishes,
    /// otherwise `(negative, monomial)`.
    pub fn monomial_product(&self, a: &Monomial, b: &Monomial) -> Option<(bool, Monomial)> {
        let mut exps = Vec::with_capacity(a.0.len());
        // odd factors of `a` with index strictly greater than the current one
        let mut odd_a_after: u32 = a
            .0
            .iter()
            .zip(&self.generators)
            .filter(|(&e, g)| e > 0 && g.is_odd())
            .count() as u32;
        let mut swaps = 0u32;
        for ((&ea, &eb), g) in a.0.iter().zip(&b.0).zip(&self.generators) {
            if g.is_odd() {
                if ea > 0 {
                    odd_a_after -= 1;
                }
                if ea > 0 && eb > 0 {
                    return None;
                }
                if eb > 0 {
                    swaps += odd_a_after;
                }
            }
            exps.push(ea + eb);
        }
        Some((swaps % 2 == 1, Monomial(exps)))
    }

    pub fn multiply(&self, a: &GradedElement, b: &GradedElement) -> Result<GradedElement> {
        self.check_element(a)?;
        self.check_element(b)?;
        let mut out = GradedElement::zero();
        for (ma, ca) in &a.terms {
            for (mb, cb) in &b.terms {
                if let Some((neg, m)) = self.monomial_product(ma, mb) {
                    let c = ca * cb;
                    out.add_term(m, if neg { -c } else { c });
                }
            }
        }
        Ok(out)
    }

    /// `a + c * b`.
    pub fn add_scaled(
        &self,
        a: &GradedElement,
        c: &Rational,
        b: &GradedElement,
    ) -> Result<GradedElement> {
        self.check_element(a)?;
        self.check_element(b)?;
        let mut out = a.clone();
        if !c.is_zero() {
            for (m, v) in &b.terms {
                out.add_term(m.clone(), v * c);
            }
        }
        Ok(out)
    }

    pub fn power(&self, a: &GradedElement, k: u32) -> Result<GradedElement> {
        let mut acc = self.one();
        for _ in 0..k {
            acc = self.multiply(&acc, a)?;
        }
        Ok(acc)
    }

    /// Every normal-form monomial of total degree exactly `k`, in canonical order.
    pub fn basis_of_degree(&self, k: u32) -> Vec<Monomial> {
        let mut out = Vec::new();
        let mut exps = vec![0u32; self.arity()];
        self.fill_basis(0, k, &mut exps, &mut out);
        out
    }

    fn fill_basis(&self, pos: usize, remaining: u32, exps: &mut Vec<u32>, out: &mut Vec<Monomial>) {
        if pos == self.generators.len() {
            if remaining == 0 {
                out.push(Monomial(exps.clone()));
            }
            return;
        }
        let g = &self.generators[pos];
        let cap = if g.is_odd() {
            (remaining / g.degree).min(1)
        } else {
            remaining / g.degree
        };
        for e in (0..=cap).rev() {
            exps[pos] = e;
            self.fill_basis(pos + 1, remaining - e * g.degree, exps, out);
        }
        exps[pos] = 0;
    }

    /// Human-readable rendering of a monomial, e.g. `x^2*y1`; `1` for the unit.
    pub fn format_monomial(&self, m: &Monomial) -> String {
        if m.is_one() {
            return "1".to_string();
        }
        m.0.iter()
            .zip(&self.generators)
            .filter(|(&e, _)| e > 0)
            .map(|(&e, g)| {
                if e == 1 {
                    g.name.clone()
                } else {
                    format!("{}^{}", g.name, e)
                }
            })
            .collect::<Vec<_>>()
            .join("*")
    }

    /// Canonical text form: graded order, `- 5/3*x^2` style signs, `0` for zero.
    pub fn format_element(&self, e: &GradedElement) -> String {
        if e.is_zero() {
            return "0".to_string();
        }
        let mut terms: Vec<_> = e.terms.iter().collect();
        terms.sort_by(|a, b| self.graded_cmp(a.0, b.0));
        let mut out = String::new();
        for (i, (m, c)) in terms.into_iter().enumerate() {
            let negative = c.is_negative();
            match (i, negative) {
                (0, false) => {}
                (0, true) => out.push_str("- "),
                (_, false) => out.push_str(" + "),
                (_, true) => out.push_str(" - "),
            }
            let abs = c.abs();
            if m.is_one() {
                out.push_str(&abs.to_string());
            } else if abs.is_one() {
                out.push_str(&self.format_monomial(m));
            } else {
                out.push_str(&format!("{}*{}", abs, self.format_monomial(m)));
            }
        }
        out
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.name, self.degree)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn xyy() -> FreeAlgebra {
        FreeAlgebra::new([("x", 2), ("y1", 3), ("y2", 3)])
    }

    #[test]
    fn normal_form_swaps_odd_factors() {
        let a = xyy();
        let (s, m) = a.normal_form(&[(2, 1), (1, 1)]).unwrap();
        assert_eq!(s, -1);
        assert_eq!(m.exponents(), &[0, 1, 1]);
    }

    #[test]
    fn normal_form_odd_square_vanishes() {
        let a = xyy();
        assert_eq!(a.normal_form(&[(1, 1), (1, 1)]).unwrap().0, 0);
        assert_eq!(a.normal_form(&[(1, 2)]).unwrap().0, 0);
    }

    #[test]
    fn normal_form_even_commutes() {
        let a = FreeAlgebra::new([("x", 2), ("y", 3)]);
        let (s, m) = a.normal_form(&[(0, 2), (1, 1), (0, 1)]).unwrap();
        assert_eq!(s, 1);
        assert_eq!(m.exponents(), &[3, 1]);
    }

    #[test]
    fn normal_form_rejects_unknown_index() {
        assert_eq!(
            xyy().normal_form(&[(7, 1)]),
            Err(AlgebraError::UnknownGenerator(7))
        );
    }

    #[test]
    fn multiply_examples() {
        let a = xyy();
        let x = a.gen(0);
        let y1 = a.gen(1);
        let y2 = a.gen(2);
        let y1y2 = a.multiply(&y1, &y2).unwrap();
        let lhs = a.add_scaled(&x, &rat(1), &y1y2).unwrap();
        assert_eq!(a.multiply(&lhs, &y1).unwrap(), a.multiply(&x, &y1).unwrap());

        let p = a
            .multiply(&x.scaled(&frac(3, 2)), &x.scaled(&frac(2, 3)))
            .unwrap();
        assert_eq!(p, a.multiply(&x, &x).unwrap());

        let s = a.add_scaled(&y1, &rat(1), &y2).unwrap();
        assert!(a.multiply(&s, &s).unwrap().is_zero());
    }

    #[test]
    fn multiply_rejects_foreign_elements() {
        let a = xyy();
        let other = FreeAlgebra::new([("x", 2)]);
        assert!(matches!(
            a.multiply(&a.gen(0), &other.gen(0)),
            Err(AlgebraError::MismatchedGenerators { .. })
        ));
    }

    #[test]
    fn basis_examples() {
        let a = FreeAlgebra::new([("x", 2), ("y", 3)]);
        let fmt = |k| {
            a.basis_of_degree(k)
                .iter()
                .map(|m| a.format_monomial(m))
                .collect::<Vec<_>>()
        };
        assert_eq!(fmt(5), vec!["x*y"]);
        assert_eq!(fmt(4), vec!["x^2"]);
        assert_eq!(fmt(0), vec!["1"]);
        assert!(fmt(1).is_empty());
        let b = FreeAlgebra::new([("x1", 2), ("x2", 2)]);
        let names: Vec<_> = b
            .basis_of_degree(4)
            .iter()
            .map(|m| b.format_monomial(m))
            .collect();
        assert_eq!(names, vec!["x1^2", "x1*x2", "x2^2"]);
    }

    #[test]
    fn add_scaled_examples() {
        let a = xyy();
        let x = a.gen(0);
        assert!(a.add_scaled(&x, &rat(-1), &x).unwrap().is_zero());
        let e = a
            .add_scaled(&GradedElement::zero(), &frac(5, 3), &a.gen(1))
            .unwrap();
        assert_eq!(a.format_element(&e), "5/3*y1");
        let x2 = a.multiply(&x, &x).unwrap();
        let y1y2 = a.multiply(&a.gen(1), &a.gen(2)).unwrap();
        assert_eq!(
            a.format_element(&a.add_scaled(&x2, &rat(1), &y1y2).unwrap()),
            "x^2 + y1*y2"
        );
    }

    #[test]
    fn format_negative_fraction() {
        let a = FreeAlgebra::new([("x", 2)]);
        let e = a.power(&a.gen(0), 2).unwrap().scaled(&frac(-5, 3));
        assert_eq!(a.format_element(&e), "- 5/3*x^2");
    }

    #[test]
    fn homogeneity() {
        let a = xyy();
        assert_eq!(a.homogeneous_degree(&GradedElement::zero()), Ok(None));
        assert_eq!(a.homogeneous_degree(&a.gen(1)), Ok(Some(3)));
        let mixed = a.add_scaled(&a.gen(0), &rat(1), &a.gen(1)).unwrap();
        assert_eq!(
            a.homogeneous_degree(&mixed),
            Err(AlgebraError::NotHomogeneous)
        );
    }
}
