//! Degree-wise cohomology of a model by exact linear algebra.
//!
//! Betti numbers come from fraction-free ranks of the differential matrices.
//! When representatives are requested, cocycles are obtained from a reduced
//! echelon form over the rationals, reduced modulo coboundaries, and kept when
//! independent of the classes already chosen.

use std::collections::HashMap;
use std::sync::Arc;

use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::algebra::{GradedElement, Monomial, Rational};
use crate::error::{AlgebraError, Result};
use crate::linalg::{self, Echelon, SparseVec};
use crate::model::SullivanModel;

/// The cochains of one degree with a lookup from monomial to column.
#[derive(Debug)]
struct DegreeBasis {
    monomials: Vec<Monomial>,
    index: HashMap<Monomial, usize>,
}

impl DegreeBasis {
    fn new(m: &SullivanModel, k: u32) -> Self {
        let monomials = m.algebra().basis_of_degree(k);
        let index = monomials
            .iter()
            .enumerate()
            .map(|(i, mono)| (mono.clone(), i))
            .collect();
        DegreeBasis { monomials, index }
    }

    fn len(&self) -> usize {
        self.monomials.len()
    }

    fn to_vector(&self, e: &GradedElement) -> Option<SparseVec<Rational>> {
        let mut v: SparseVec<Rational> = e
            .terms()
            .map(|(mono, c)| self.index.get(mono).map(|&i| (i, c.clone())))
            .collect::<Option<_>>()?;
        v.sort_by_key(|(i, _)| *i);
        Some(v)
    }

    fn to_element(&self, v: &SparseVec<Rational>) -> GradedElement {
        GradedElement::from_terms(v.iter().map(|(i, c)| (self.monomials[*i].clone(), c.clone())))
    }
}

/// Images of the degree-`k` basis under `d`, one sparse row per source monomial.
fn image_rows(m: &SullivanModel, source: &DegreeBasis, target: &DegreeBasis) -> Vec<SparseVec<Rational>> {
    source
        .monomials
        .iter()
        .map(|mono| {
            target
                .to_vector(&m.d_monomial(mono))
                .expect("d raises degree by one")
        })
        .collect()
}

/// Rank of `d: C^k -> C^(k+1)`.
pub fn differential_rank(m: &SullivanModel, k: u32) -> usize {
    let source = DegreeBasis::new(m, k);
    let target = DegreeBasis::new(m, k + 1);
    linalg::rank_of_rational_rows(&image_rows(m, &source, &target))
}

#[derive(Debug)]
struct Quotient {
    basis: DegreeBasis,
    coboundaries: Echelon,
    classes: Echelon,
}

#[derive(Clone, Debug, Serialize)]
pub struct CohomologySlice {
    pub degree: u32,
    pub dim_cochains: usize,
    pub dim_cocycles: usize,
    pub dim_coboundaries: usize,
    pub betti: usize,
    #[serde(skip)]
    pub class_representatives: Vec<GradedElement>,
    #[serde(skip)]
    quotient: Option<Arc<Quotient>>,
}

impl CohomologySlice {
    pub fn has_representatives(&self) -> bool {
        self.quotient.is_some()
    }

    /// Coordinates of the class of the cocycle `e` in the representative basis.
    pub fn class_coordinates(&self, e: &GradedElement) -> Result<Vec<Rational>> {
        let q = self
            .quotient
            .as_ref()
            .ok_or(AlgebraError::MissingRepresentatives(self.degree))?;
        let v = q.basis.to_vector(e).ok_or(AlgebraError::NotHomogeneous)?;
        let reduced = q.coboundaries.reduce(&v);
        let (rem, used) = q.classes.reduce_tracked(&reduced);
        if !rem.is_empty() {
            return Err(AlgebraError::NotACocycle { index: 0 });
        }
        let mut coords = vec![Rational::zero(); self.betti];
        for (i, c) in used {
            coords[i] = c;
        }
        Ok(coords)
    }

    /// `Σ coords_i * representative_i`.
    pub fn element_of(&self, coords: &[Rational]) -> Result<GradedElement> {
        if coords.len() != self.betti {
            return Err(AlgebraError::BadCoordinates {
                degree: self.degree,
                expected: self.betti,
                found: coords.len(),
            });
        }
        if !self.has_representatives() && self.betti > 0 {
            return Err(AlgebraError::MissingRepresentatives(self.degree));
        }
        let mut out = GradedElement::zero();
        for (c, r) in coords.iter().zip(&self.class_representatives) {
            for (mono, v) in r.terms() {
                out.add_term(mono.clone(), v * c);
            }
        }
        Ok(out)
    }

    /// Whether `e` (of this degree) is a coboundary.
    pub fn is_coboundary(&self, e: &GradedElement) -> Result<bool> {
        let q = self
            .quotient
            .as_ref()
            .ok_or(AlgebraError::MissingRepresentatives(self.degree))?;
        let v = q.basis.to_vector(e).ok_or(AlgebraError::NotHomogeneous)?;
        Ok(q.coboundaries.contains(&v))
    }
}

/// Full slice at degree `k`, including class representatives.
pub fn cohomology_slice(m: &SullivanModel, k: u32) -> CohomologySlice {
    let here = DegreeBasis::new(m, k);
    let above = DegreeBasis::new(m, k + 1);
    let out_rows = image_rows(m, &here, &above);
    let in_rows = if k == 0 {
        Vec::new()
    } else {
        let below = DegreeBasis::new(m, k - 1);
        image_rows(m, &below, &here)
    };
    let rank_out = linalg::rank_of_rational_rows(&out_rows);
    let rank_in = linalg::rank_of_rational_rows(&in_rows);

    // d as a matrix with one row per target coordinate
    let mut target_rows: Vec<SparseVec<Rational>> = vec![Vec::new(); above.len()];
    for (j, row) in out_rows.iter().enumerate() {
        for (t, c) in row {
            target_rows[*t].push((j, c.clone()));
        }
    }
    let cocycles = linalg::kernel_basis(here.len(), &target_rows);
    let coboundaries = Echelon::from_rows(&in_rows);
    let mut classes = Echelon::tracked();
    let mut representatives = Vec::new();
    for z in &cocycles {
        let normal = coboundaries.reduce(z);
        if classes.insert(&normal) {
            representatives.push(here.to_element(&normal));
        }
    }
    debug_assert_eq!(cocycles.len(), here.len() - rank_out);
    debug_assert_eq!(coboundaries.rank(), rank_in);
    let dim_cocycles = here.len() - rank_out;
    CohomologySlice {
        degree: k,
        dim_cochains: here.len(),
        dim_cocycles,
        dim_coboundaries: rank_in,
        betti: dim_cocycles - rank_in,
        class_representatives: representatives,
        quotient: Some(Arc::new(Quotient {
            basis: here,
            coboundaries,
            classes,
        })),
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CohomologyReport {
    pub window: u32,
    pub slices: Vec<CohomologySlice>,
    pub chi_c: i64,
    pub fd_observed: u32,
    pub fd_predicted: i64,
    pub total_dim: usize,
    pub even_dim: usize,
    pub odd_dim: usize,
    pub duality_ok: bool,
    /// Betti numbers vanish strictly between the predicted formal dimension
    /// and the window top, and the observed top degree matches the prediction.
    /// Evidence only: no finite window certifies ellipticity.
    pub ellipticity_evidence: bool,
}

impl CohomologyReport {
    pub fn betti(&self) -> Vec<usize> {
        self.slices.iter().map(|s| s.betti).collect()
    }

    pub fn slice(&self, k: u32) -> Result<&CohomologySlice> {
        self.slices.get(k as usize).ok_or(AlgebraError::OutsideWindow {
            degree: k,
            window: self.window,
        })
    }

    fn assemble(m: &SullivanModel, window: u32, slices: Vec<CohomologySlice>) -> Self {
        let betti: Vec<usize> = slices.iter().map(|s| s.betti).collect();
        let even_dim: usize = betti.iter().step_by(2).sum();
        let odd_dim: usize = betti.iter().skip(1).step_by(2).sum();
        let fd_observed = betti.iter().rposition(|&b| b > 0).unwrap_or(0) as u32;
        let duality_ok = (0..betti.len()).all(|k| {
            let mirror = if k as u32 <= fd_observed {
                betti[(fd_observed - k as u32) as usize]
            } else {
                0
            };
            betti[k] == mirror
        });
        let fd_predicted = m.invariants().fd_predicted;
        let ellipticity_evidence = (window as i64) > fd_predicted
            && fd_observed as i64 == fd_predicted
            && betti
                .iter()
                .enumerate()
                .skip((fd_predicted + 1).max(0) as usize)
                .all(|(_, &b)| b == 0);
        CohomologyReport {
            window,
            slices,
            chi_c: even_dim as i64 - odd_dim as i64,
            fd_observed,
            fd_predicted,
            total_dim: even_dim + odd_dim,
            even_dim,
            odd_dim,
            duality_ok,
            ellipticity_evidence,
        }
    }
}

/// `fd_predicted + max generator degree`, the default certification window.
pub fn default_window(m: &SullivanModel) -> u32 {
    let fd = m.invariants().fd_predicted.max(0) as u32;
    (fd + m.max_generator_degree()).max(1)
}

fn check_window(up_to: i64) -> Result<u32> {
    if up_to <= 0 {
        return Err(AlgebraError::InvalidWindow(up_to));
    }
    Ok(up_to as u32)
}

/// All slices `0..=up_to` with representatives.
pub fn betti_table(m: &SullivanModel, up_to: i64) -> Result<CohomologyReport> {
    let window = check_window(up_to)?;
    let slices: Vec<CohomologySlice> = (0..=window)
        .into_par_iter()
        .map(|k| cohomology_slice(m, k))
        .collect();
    Ok(CohomologyReport::assemble(m, window, slices))
}

/// Betti numbers only; cheaper than [`betti_table`] on large models.
pub fn betti_numbers(m: &SullivanModel, up_to: i64) -> Result<CohomologyReport> {
    let window = check_window(up_to)?;
    let dims: Vec<usize> = (0..=window)
        .into_par_iter()
        .map(|k| m.algebra().basis_of_degree(k).len())
        .collect();
    let ranks: Vec<usize> = (0..=window)
        .into_par_iter()
        .map(|k| differential_rank(m, k))
        .collect();
    let slices = (0..=window as usize)
        .map(|k| {
            let rank_in = if k == 0 { 0 } else { ranks[k - 1] };
            let dim_cocycles = dims[k] - ranks[k];
            CohomologySlice {
                degree: k as u32,
                dim_cochains: dims[k],
                dim_cocycles,
                dim_coboundaries: rank_in,
                betti: dim_cocycles - rank_in,
                class_representatives: Vec::new(),
                quotient: None,
            }
        })
        .collect();
    Ok(CohomologyReport::assemble(m, window, slices))
}

/// Product of two classes given by coordinates, as coordinates in degree `j + k`.
pub fn cup_class(
    m: &SullivanModel,
    report: &CohomologyReport,
    a: (u32, &[Rational]),
    b: (u32, &[Rational]),
) -> Result<Vec<Rational>> {
    let (j, ca) = a;
    let (k, cb) = b;
    if j + k > report.window {
        return Err(AlgebraError::OutsideWindow {
            degree: j + k,
            window: report.window,
        });
    }
    let ea = report.slice(j)?.element_of(ca)?;
    let eb = report.slice(k)?.element_of(cb)?;
    let prod = m.algebra().multiply(&ea, &eb)?;
    report.slice(j + k)?.class_coordinates(&prod)
}

/// Unit vector `e_i` of length `n`.
pub fn unit_coords(n: usize, i: usize) -> Vec<Rational> {
    let mut v = vec![Rational::zero(); n];
    v[i] = Rational::one();
    v
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LefschetzOutcome {
    pub passed: bool,
    pub first_failure: Option<u32>,
}

/// Checks that multiplication by `w^k` maps `H^(half-k)` isomorphically onto
/// `H^(half+k)` for `k = 0..=half`, where `w` is a degree-2 class.
pub fn lefschetz_check(
    m: &SullivanModel,
    report: &CohomologyReport,
    w: &[Rational],
    half_dim: u32,
) -> Result<LefschetzOutcome> {
    if report.fd_observed % 2 == 1 {
        return Err(AlgebraError::OddFormalDimension(report.fd_observed));
    }
    if report.fd_observed != 2 * half_dim {
        return Err(AlgebraError::HalfDimensionMismatch {
            observed: report.fd_observed,
            half: half_dim,
        });
    }
    let w_elem = report.slice(2)?.element_of(w)?;
    let alg = m.algebra();
    for k in 0..=half_dim {
        let src = report.slice(half_dim - k)?;
        let tgt = report.slice(half_dim + k)?;
        if src.betti != tgt.betti {
            return Ok(LefschetzOutcome {
                passed: false,
                first_failure: Some(k),
            });
        }
        let wk = alg.power(&w_elem, k)?;
        let rows = src
            .class_representatives
            .iter()
            .map(|r| tgt.class_coordinates(&alg.multiply(&wk, r)?))
            .collect::<Result<Vec<_>>>()?;
        if linalg::dense_rank(&rows) != src.betti {
            return Ok(LefschetzOutcome {
                passed: false,
                first_failure: Some(k),
            });
        }
    }
    Ok(LefschetzOutcome {
        passed: true,
        first_failure: None,
    })
}

/// `b_k = b_(2n+1-k)` and `b_0 <= b_1 <= ... <= b_n` on a Betti sequence of length `2n+2`.
pub fn cosymplectic_profile(betti: &[usize], n: usize) -> Result<bool> {
    if betti.len() != 2 * n + 2 {
        return Err(AlgebraError::LengthMismatch {
            expected: 2 * n + 2,
            found: betti.len(),
        });
    }
    let top = 2 * n + 1;
    let symmetric = (0..=top).all(|k| betti[k] == betti[top - k]);
    let monotone = betti[..=n].windows(2).all(|w| w[0] <= w[1]);
    Ok(symmetric && monotone)
}
