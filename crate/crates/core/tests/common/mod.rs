//! Shared test helpers: an independent dense cohomology oracle and a seeded
//! generator of valid random models.

#![allow(dead_code)]

use num_traits::{One, Zero};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use sullivan::algebra::{FreeAlgebra, GradedElement, Monomial, Rational};
use sullivan::linalg::kernel_basis;
use sullivan::model::SullivanModel;

/// A monomial as a nondecreasing list of generator indices.
type Word = Vec<usize>;

/// Naive cohomology of a model: its own basis enumeration, its own sign
/// handling, dense rational Gaussian elimination.
pub struct Oracle {
    degrees: Vec<u32>,
    diffs: Vec<Vec<(Rational, Word)>>,
}

impl Oracle {
    pub fn new(m: &SullivanModel) -> Self {
        let degrees = m.generators().iter().map(|g| g.degree).collect();
        let diffs = m
            .differential()
            .iter()
            .map(|d| {
                d.terms()
                    .map(|(mono, c)| {
                        let word = mono
                            .exponents()
                            .iter()
                            .enumerate()
                            .flat_map(|(i, &e)| std::iter::repeat_n(i, e as usize))
                            .collect();
                        (c.clone(), word)
                    })
                    .collect()
            })
            .collect();
        Oracle { degrees, diffs }
    }

    fn odd(&self, i: usize) -> bool {
        self.degrees[i] % 2 == 1
    }

    fn basis(&self, k: u32) -> Vec<Word> {
        let mut out = Vec::new();
        self.fill(0, k, &mut Vec::new(), &mut out);
        out
    }

    fn fill(&self, from: usize, remaining: u32, cur: &mut Word, out: &mut Vec<Word>) {
        if remaining == 0 {
            out.push(cur.clone());
            return;
        }
        for i in from..self.degrees.len() {
            let d = self.degrees[i];
            if d > remaining {
                continue;
            }
            let next = if self.odd(i) { i + 1 } else { i };
            cur.push(i);
            self.fill(next, remaining - d, cur, out);
            cur.pop();
        }
    }

    /// Bubble-sorts a word; `None` when an odd generator repeats.
    fn normalize(&self, mut w: Word) -> Option<(i32, Word)> {
        let mut sign = 1;
        for pass in 0..w.len() {
            for j in 0..w.len().saturating_sub(1 + pass) {
                if w[j] > w[j + 1] {
                    if self.odd(w[j]) && self.odd(w[j + 1]) {
                        sign = -sign;
                    }
                    w.swap(j, j + 1);
                }
            }
        }
        if w.windows(2).any(|p| p[0] == p[1] && self.odd(p[0])) {
            return None;
        }
        Some((sign, w))
    }

    fn d_word(&self, w: &Word) -> Vec<(Rational, Word)> {
        let mut out = Vec::new();
        let mut prefix_degree = 0;
        for (pos, &g) in w.iter().enumerate() {
            let sign = if prefix_degree % 2 == 0 { 1 } else { -1 };
            for (c, dw) in &self.diffs[g] {
                let mut word = w[..pos].to_vec();
                word.extend(dw);
                word.extend(&w[pos + 1..]);
                if let Some((s, nw)) = self.normalize(word) {
                    out.push((c * Rational::from_integer((sign * s).into()), nw));
                }
            }
            prefix_degree += self.degrees[g];
        }
        out
    }

    fn matrix(&self, k: u32) -> Vec<Vec<Rational>> {
        let source = self.basis(k);
        let target = self.basis(k + 1);
        source
            .iter()
            .map(|w| {
                let mut row = vec![Rational::zero(); target.len()];
                for (c, nw) in self.d_word(w) {
                    let j = target.iter().position(|t| *t == nw).expect("degree +1");
                    row[j] += c;
                }
                row
            })
            .collect()
    }

    pub fn betti(&self, up_to: u32) -> Vec<usize> {
        let ranks: Vec<usize> = (0..=up_to).map(|k| dense_rank(self.matrix(k))).collect();
        (0..=up_to as usize)
            .map(|k| {
                let dim = self.basis(k as u32).len();
                dim - ranks[k] - if k == 0 { 0 } else { ranks[k - 1] }
            })
            .collect()
    }
}

/// Textbook Gaussian elimination on a dense rational matrix.
pub fn dense_rank(mut a: Vec<Vec<Rational>>) -> usize {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..rows).find(|&r| !a[r][c].is_zero()) else {
            continue;
        };
        a.swap(rank, p);
        let pivot_row = a[rank].clone();
        for (r, row) in a.iter_mut().enumerate() {
            if r != rank && !row[c].is_zero() {
                let f = &row[c] / &pivot_row[c];
                for (x, v) in row[c..].iter_mut().zip(&pivot_row[c..]) {
                    *x -= v * &f;
                }
            }
        }
        rank += 1;
    }
    rank
}

fn small_rational(rng: &mut ChaCha8Rng) -> Rational {
    let n: i64 = rng.gen_range(-3..=3);
    let d: i64 = rng.gen_range(1..=2);
    Rational::new(n.into(), d.into())
}

/// A random valid minimal model: each `d(v_i)` is a random decomposable
/// cocycle of the right degree in the generators before it.
pub fn random_model(rng: &mut ChaCha8Rng, max_gens: usize, max_degree: u32) -> SullivanModel {
    let count = rng.gen_range(2..=max_gens.max(2));
    // small degrees first, so later generators have decomposable targets
    let pool: Vec<u32> = [2, 2, 3, 3, 4, 5, 6, 7].into_iter().filter(|&d| d <= max_degree).collect();
    let mut degrees: Vec<u32> = (0..count).map(|_| pool[rng.gen_range(0..pool.len())]).collect();
    degrees.sort_unstable();
    let names: Vec<String> = (0..count).map(|i| format!("v{}", i + 1)).collect();
    let alg = FreeAlgebra::new(names.iter().cloned().zip(degrees.iter().copied()));
    let mut differential: Vec<GradedElement> = Vec::new();
    for i in 0..count {
        let prev = SullivanModel::new(
            FreeAlgebra::new(names[..i].iter().cloned().zip(degrees[..i].iter().copied())),
            differential
                .iter()
                .map(|d| truncate(d, i))
                .collect(),
        )
        .expect("consistent");
        let target = degrees[i] + 1;
        let decomposables: Vec<Monomial> = prev
            .algebra()
            .basis_of_degree(target)
            .into_iter()
            .filter(|mono| mono.word_length() >= 2)
            .collect();
        let next = prev.algebra().basis_of_degree(target + 1);
        let rows: Vec<Vec<(usize, Rational)>> = decomposables
            .iter()
            .map(|mono| {
                let image = prev.d_monomial(mono);
                let mut v = Vec::new();
                for (tm, c) in image.terms() {
                    v.push((next.iter().position(|x| x == tm).expect("degree +1"), c.clone()));
                }
                v.sort_by_key(|(j, _)| *j);
                v
            })
            .collect();
        // rows of d indexed by target monomial, columns by source monomial
        let mut by_target: Vec<Vec<(usize, Rational)>> = vec![Vec::new(); next.len()];
        for (src, row) in rows.iter().enumerate() {
            for (j, c) in row {
                by_target[*j].push((src, c.clone()));
            }
        }
        let kernel = kernel_basis(decomposables.len(), &by_target);
        let mut d = GradedElement::zero();
        if !kernel.is_empty() && rng.gen_bool(0.9) {
            for v in &kernel {
                let coeff = small_rational(rng);
                for (src, c) in v {
                    d.add_term(pad(&decomposables[*src], count), c * &coeff);
                }
            }
        }
        differential.push(d);
    }
    let m = SullivanModel::new(alg, differential).expect("consistent");
    assert!(m.validate().is_ok(), "generator produced an invalid model");
    m
}

fn pad(m: &Monomial, arity: usize) -> Monomial {
    let mut e = m.exponents().to_vec();
    e.resize(arity, 0);
    Monomial::from_exponents(e)
}

fn truncate(e: &GradedElement, k: usize) -> GradedElement {
    GradedElement::from_terms(
        e.terms()
            .map(|(m, c)| (Monomial::from_exponents(m.exponents()[..k].to_vec()), c.clone())),
    )
}

/// A random homogeneous element of degree `k` with up to `terms` terms.
pub fn random_element(rng: &mut ChaCha8Rng, alg: &FreeAlgebra, k: u32, terms: usize) -> GradedElement {
    let basis = alg.basis_of_degree(k);
    let mut e = GradedElement::zero();
    if basis.is_empty() {
        return e;
    }
    for _ in 0..rng.gen_range(1..=terms) {
        let m = basis[rng.gen_range(0..basis.len())].clone();
        e.add_term(m, small_rational(rng));
    }
    e
}

pub fn one() -> Rational {
    Rational::one()
}
