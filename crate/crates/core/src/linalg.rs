//! Exact sparse linear algebra over the integers and the rationals.
//!
//! Matrices are handed around as lists of sparse rows: `(column, value)` pairs
//! sorted by column with no stored zeros.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::algebra::Rational;

pub type SparseVec<T> = Vec<(usize, T)>;

/// Rank by fraction-free elimination over the integers.
///
/// Each incoming row is reduced on its leading column against the current
/// pivot rows by integer cross-multiplication, then divided by its content,
/// so every stored row stays primitive.
pub fn rank_fraction_free(mut rows: Vec<SparseVec<BigInt>>) -> usize {
    rows.retain(|r| !r.is_empty());
    rows.sort_by_key(|r| r.len());
    let mut pivots: HashMap<usize, SparseVec<BigInt>> = HashMap::new();
    for mut row in rows {
        make_primitive(&mut row);
        while let Some((lead, lead_val)) = row.first().cloned() {
            match pivots.get(&lead) {
                Some(p) => {
                    let g = lead_val.gcd(&p[0].1);
                    let a = &p[0].1 / &g;
                    let b = &lead_val / &g;
                    row = combine_int(&row, &a, p, &b);
                    make_primitive(&mut row);
                }
                None => {
                    pivots.insert(lead, row);
                    break;
                }
            }
        }
    }
    pivots.len()
}

/// Clears denominators row by row and returns the fraction-free rank.
pub fn rank_of_rational_rows(rows: &[SparseVec<Rational>]) -> usize {
    rank_fraction_free(rows.iter().map(clear_denominators).collect())
}

pub fn clear_denominators(row: &SparseVec<Rational>) -> SparseVec<BigInt> {
    let lcm = row
        .iter()
        .fold(BigInt::one(), |acc, (_, v)| acc.lcm(v.denom()));
    row.iter()
        .map(|(c, v)| (*c, v.numer() * (&lcm / v.denom())))
        .collect()
}

// a*x - b*y
fn combine_int(x: &SparseVec<BigInt>, a: &BigInt, y: &SparseVec<BigInt>, b: &BigInt) -> SparseVec<BigInt> {
    let mut out = Vec::with_capacity(x.len() + y.len());
    let (mut i, mut j) = (0, 0);
    while i < x.len() || j < y.len() {
        let take_x = j >= y.len() || (i < x.len() && x[i].0 < y[j].0);
        let take_y = i >= x.len() || (j < y.len() && y[j].0 < x[i].0);
        if take_x {
            out.push((x[i].0, &x[i].1 * a));
            i += 1;
        } else if take_y {
            out.push((y[j].0, -(&y[j].1 * b)));
            j += 1;
        } else {
            let v = &x[i].1 * a - &y[j].1 * b;
            if !v.is_zero() {
                out.push((x[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

fn make_primitive(row: &mut SparseVec<BigInt>) {
    let Some(first) = row.first() else { return };
    let mut g = first.1.abs();
    for (_, v) in row.iter().skip(1) {
        if g.is_one() {
            break;
        }
        g = g.gcd(v);
    }
    if row[0].1.is_negative() {
        g = -g;
    }
    if !g.is_one() {
        for (_, v) in row.iter_mut() {
            *v = &*v / &g;
        }
    }
}

fn to_map(v: &SparseVec<Rational>) -> BTreeMap<usize, Rational> {
    v.iter().cloned().collect()
}

fn from_map(m: BTreeMap<usize, Rational>) -> SparseVec<Rational> {
    m.into_iter().filter(|(_, v)| !v.is_zero()).collect()
}

fn axpy(target: &mut BTreeMap<usize, Rational>, coef: &Rational, row: &SparseVec<Rational>) {
    for (c, v) in row {
        let entry = target.entry(*c).or_insert_with(Rational::zero);
        *entry -= coef * v;
        if entry.is_zero() {
            target.remove(c);
        }
    }
}

#[derive(Clone, Debug)]
struct EchelonRow {
    vec: SparseVec<Rational>,
    // expresses `vec` in terms of the inserted vectors
    combo: SparseVec<Rational>,
}

/// Row echelon basis over the rationals with unit leading entries.
///
/// `reduce` removes every entry at a pivot column, which gives a normal form
/// modulo the span that does not depend on insertion history. Accepted
/// (independent) vectors are numbered in the order they were accepted, so a
/// reduction can also report the combination it subtracted.
#[derive(Clone, Debug, Default)]
pub struct Echelon {
    rows: BTreeMap<usize, EchelonRow>,
    track: bool,
}

impl Echelon {
    pub fn new() -> Self {
        Self::default()
    }

    /// An echelon that records combinations, for [`Echelon::reduce_tracked`].
    pub fn tracked() -> Self {
        Echelon {
            rows: BTreeMap::new(),
            track: true,
        }
    }

    pub fn from_rows<'a>(rows: impl IntoIterator<Item = &'a SparseVec<Rational>>) -> Self {
        let mut e = Self::new();
        for r in rows {
            e.insert(r);
        }
        e
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn pivot_columns(&self) -> impl Iterator<Item = usize> + '_ {
        self.rows.keys().copied()
    }

    /// Inserts `v`; returns whether it was independent of the current span.
    pub fn insert(&mut self, v: &SparseVec<Rational>) -> bool {
        let idx = self.rows.len();
        let (rem, used) = if self.track {
            self.reduce_tracked(v)
        } else {
            (self.reduce(v), Vec::new())
        };
        if rem.is_empty() {
            return false;
        }
        let inv = rem[0].1.recip();
        let vec: SparseVec<Rational> = rem.into_iter().map(|(c, x)| (c, x * &inv)).collect();
        let combo = if self.track {
            // vec = v - Σ used_i * accepted_i
            let mut combo = to_map(&used);
            for c in combo.values_mut() {
                *c = -&*c;
            }
            combo.insert(idx, Rational::one());
            from_map(combo)
                .into_iter()
                .map(|(c, x)| (c, x * &inv))
                .collect()
        } else {
            Vec::new()
        };
        self.rows.insert(vec[0].0, EchelonRow { vec, combo });
        true
    }

    pub fn reduce(&self, v: &SparseVec<Rational>) -> SparseVec<Rational> {
        let mut work = to_map(v);
        let mut cursor = 0usize;
        loop {
            let next = work
                .range(cursor..)
                .find(|(c, _)| self.rows.contains_key(c))
                .map(|(c, x)| (*c, x.clone()));
            let Some((col, coef)) = next else { break };
            axpy(&mut work, &coef, &self.rows[&col].vec);
            cursor = col + 1;
        }
        from_map(work)
    }

    /// Reduces `v` and reports `(remainder, coefficients)` with
    /// `v = remainder + Σ coefficients_i * accepted_i`. The coefficients are
    /// empty unless the echelon was built with [`Echelon::tracked`].
    pub fn reduce_tracked(&self, v: &SparseVec<Rational>) -> (SparseVec<Rational>, SparseVec<Rational>) {
        let mut work = to_map(v);
        let mut used: BTreeMap<usize, Rational> = BTreeMap::new();
        let mut cursor = 0usize;
        loop {
            let next = work
                .range(cursor..)
                .find(|(c, _)| self.rows.contains_key(c))
                .map(|(c, x)| (*c, x.clone()));
            let Some((col, coef)) = next else { break };
            let row = &self.rows[&col];
            axpy(&mut work, &coef, &row.vec);
            let neg = -&coef;
            axpy(&mut used, &neg, &row.combo);
            cursor = col + 1;
        }
        (from_map(work), from_map(used))
    }

    pub fn contains(&self, v: &SparseVec<Rational>) -> bool {
        self.reduce(v).is_empty()
    }

    /// Reduced row echelon form: each pivot row with all other pivot columns cleared.
    pub fn reduced_rows(&self) -> Vec<SparseVec<Rational>> {
        self.rows
            .iter()
            .map(|(&lead, row)| {
                let tail: SparseVec<Rational> = row.vec[1..].to_vec();
                let mut out = vec![(lead, Rational::one())];
                out.extend(self.reduce(&tail));
                out
            })
            .collect()
    }
}

/// A basis of `{x : A x = 0}` where `A` is given by its sparse rows and has
/// `ncols` columns. One vector per free column, in ascending column order.
pub fn kernel_basis(ncols: usize, rows: &[SparseVec<Rational>]) -> Vec<SparseVec<Rational>> {
    let echelon = Echelon::from_rows(rows);
    let rref = echelon.reduced_rows();
    let mut kernel: BTreeMap<usize, SparseVec<Rational>> = (0..ncols)
        .filter(|c| !echelon.rows.contains_key(c))
        .map(|c| (c, vec![(c, Rational::one())]))
        .collect();
    for row in &rref {
        let lead = row[0].0;
        for (c, v) in &row[1..] {
            if let Some(k) = kernel.get_mut(c) {
                k.push((lead, -v));
            }
        }
    }
    kernel
        .into_values()
        .map(|mut v| {
            v.sort_by_key(|(c, _)| *c);
            v
        })
        .collect()
}

/// Rank of a small dense rational matrix (row-major).
pub fn dense_rank(rows: &[Vec<Rational>]) -> usize {
    let sparse: Vec<SparseVec<Rational>> = rows
        .iter()
        .map(|r| {
            r.iter()
                .enumerate()
                .filter(|(_, v)| !v.is_zero())
                .map(|(c, v)| (c, v.clone()))
                .collect()
        })
        .collect();
    rank_of_rational_rows(&sparse)
}
