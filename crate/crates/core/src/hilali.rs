//! The `dim V <= dim H` checker and the sufficient-condition predicates
//! attached to it.

use std::collections::BTreeMap;

use num_traits::Zero;
use serde::Serialize;

use crate::algebra::{GradedElement, Monomial, Rational};
use crate::cohomology::{
    self, betti_numbers, betti_table, default_window, lefschetz_check, unit_coords,
    CohomologyReport,
};
use crate::error::{AlgebraError, Result};
use crate::linalg::{self, Echelon, SparseVec};
use crate::model::{Classification, SullivanModel};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Unknown,
}

impl Status {
    fn from_bool(b: bool) -> Self {
        if b {
            Status::Pass
        } else {
            Status::Fail
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Unknown => "unknown",
        }
    }
}

/// Which branch of the small-`p` hyperelliptic analysis applies.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SmallExcessCase {
    /// `p = 0`, the pure case.
    Pure,
    /// `p = 1`: `n^2 - n + 1 >= 0` for every `n`.
    OneExtraOdd,
    /// `p = 2, n >= 2`: `n^2 - n - 2 >= 0`.
    TwoExtraOddLargeN,
    /// `p = 2, n <= 1`: the even part alone gives `dim H >= 2 + 2n = dim V`.
    TwoExtraOddSmallN,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Trinomial {
    pub value: i64,
    pub satisfied: bool,
    pub small_excess_case: Option<SmallExcessCase>,
}

/// `P(n, p) = n^2 - n - 3p + 4` and the case split deciding when the
/// hyperelliptic bound suffices.
pub fn trinomial_condition(n: u64, p: u64) -> Trinomial {
    let (ni, pi) = (n as i64, p as i64);
    let value = ni * ni - ni - 3 * pi + 4;
    // n >= (1 + sqrt(12p - 15)) / 2  <=>  2n - 1 >= 0 and (2n - 1)^2 >= 12p - 15
    let satisfied = match p {
        0 | 1 => true,
        _ => n >= 1 && (2 * ni - 1).pow(2) >= 12 * pi - 15,
    };
    let small_excess_case = match (p, n) {
        (0, _) => Some(SmallExcessCase::Pure),
        (1, _) => Some(SmallExcessCase::OneExtraOdd),
        (2, 0 | 1) => Some(SmallExcessCase::TwoExtraOddSmallN),
        (2, _) => Some(SmallExcessCase::TwoExtraOddLargeN),
        _ => None,
    };
    Trinomial {
        value,
        satisfied,
        small_excess_case,
    }
}

/// Lower bound `n(n+1)/2 - p + 2` on the even cohomology of a non-pure
/// hyperelliptic model; the total dimension is at least twice this.
pub fn hyperelliptic_even_bound(n: u64, p: u64) -> i64 {
    (n * (n + 1) / 2) as i64 - p as i64 + 2
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ToralRankInterval {
    pub lower: usize,
    pub upper: usize,
    pub exact: bool,
}

/// Bounds on the toral rank from the model alone, plus the three-valued
/// verdict on `fd - rk <= 6` over the interval. `None` when `χπ > 0`.
pub fn toral_rank_interval(m: &SullivanModel) -> Option<(ToralRankInterval, Status)> {
    let inv = m.invariants();
    if inv.p < 0 {
        return None;
    }
    let p = inv.p as usize;
    let interval = if m.classify().pure {
        ToralRankInterval {
            lower: p,
            upper: p,
            exact: true,
        }
    } else {
        // non-pure forces χπ < -rk
        let upper = p.saturating_sub(1);
        ToralRankInterval {
            lower: 0,
            upper,
            exact: false,
        }
    };
    let holds: Vec<bool> = (interval.lower..=interval.upper)
        .map(|rk| inv.fd_predicted - rk as i64 <= 6)
        .collect();
    let status = if holds.iter().all(|&h| h) {
        Status::Pass
    } else if holds.iter().all(|&h| !h) {
        Status::Fail
    } else {
        Status::Unknown
    };
    Some((interval, status))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FactorizationWitness {
    pub gamma1_degree: u32,
    /// Index of `γ1` among the representatives of its degree.
    pub gamma1_index: usize,
    pub gamma2_degree: u32,
    /// Coordinates of `γ2`, as reduced fractions.
    pub gamma2_coords: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OddTowerStage {
    /// 1-based generator position.
    pub i: usize,
    pub alpha_degree: u32,
    /// Coordinates of `[d y_i]` in the cohomology of the previous stage.
    #[serde(skip)]
    pub alpha_class: Vec<Rational>,
    pub alpha_is_zero: bool,
    pub alpha_square_zero: bool,
    /// Dimension of the previous stage's total cohomology.
    pub source_dim: usize,
    pub ker_dim: usize,
    pub im_dim: usize,
    pub condition_ok: bool,
    pub c1_factorable: bool,
    pub witness: Option<FactorizationWitness>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OddTowerReport {
    pub stages: Vec<OddTowerStage>,
    pub all_conditions_ok: bool,
    /// Square-zero and factorization hypotheses hold at every stage from 3 on.
    pub factorization_hypotheses: bool,
}

fn total_window(m: &SullivanModel) -> u32 {
    m.generators().iter().map(|g| g.degree).sum::<u32>().max(1)
}

fn restrict(e: &GradedElement, k: usize) -> GradedElement {
    GradedElement::from_terms(
        e.terms()
            .map(|(mono, c)| (Monomial::from_exponents(mono.exponents()[..k].to_vec()), c.clone())),
    )
}

fn zero_coords(n: usize) -> Vec<Rational> {
    vec![Rational::zero(); n]
}

/// Coordinates of the class of `e` (degree `deg`), zero beyond the window.
fn coords_or_zero(report: &CohomologyReport, deg: u32, e: &GradedElement) -> Result<Vec<Rational>> {
    if deg > report.window {
        return Ok(Vec::new());
    }
    report.slice(deg)?.class_coordinates(e)
}

fn to_sparse(v: &[Rational], offset: usize) -> SparseVec<Rational> {
    v.iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(i, c)| (offset + i, c.clone()))
        .collect()
}

fn stage(m: &SullivanModel, i: usize) -> Result<OddTowerStage> {
    let sub = m.truncated(i - 1);
    let window = total_window(&sub);
    let report = betti_table(&sub, window as i64)?;
    let alg = sub.algebra();
    let alpha = restrict(m.d_of(i - 1), i - 1);
    let alpha_degree = m.generators()[i - 1].degree + 1;
    let alpha_class = coords_or_zero(&report, alpha_degree, &alpha)?;
    let alpha_is_zero = alpha_class.iter().all(Zero::is_zero);

    // global coordinates: degrees laid out one after another
    let mut offsets = Vec::with_capacity(report.slices.len());
    let mut acc = 0;
    for s in &report.slices {
        offsets.push(acc);
        acc += s.betti;
    }
    let source_dim = acc;
    let mut images = Vec::new();
    for s in &report.slices {
        for r in &s.class_representatives {
            let prod = alg.multiply(r, &alpha)?;
            let deg = s.degree + alpha_degree;
            let c = coords_or_zero(&report, deg, &prod)?;
            if !c.is_empty() {
                images.push(to_sparse(&c, offsets[deg as usize]));
            }
        }
    }
    let im_dim = linalg::rank_of_rational_rows(&images);
    let ker_dim = source_dim - im_dim;

    let square = alg.multiply(&alpha, &alpha)?;
    let alpha_square_zero = coords_or_zero(&report, 2 * alpha_degree, &square)?
        .iter()
        .all(Zero::is_zero);

    let witness = if alpha_is_zero {
        None
    } else {
        find_factorization(&sub, &report, alpha_degree, &alpha_class)?
    };
    Ok(OddTowerStage {
        i,
        alpha_degree,
        alpha_class,
        alpha_is_zero,
        alpha_square_zero,
        source_dim,
        ker_dim,
        im_dim,
        condition_ok: ker_dim > im_dim,
        c1_factorable: alpha_is_zero || witness.is_some(),
        witness,
    })
}

/// Looks for `α = γ1 γ2` with `γ1` a square-zero representative and `γ2`
/// solved for linearly in the complementary degree.
fn find_factorization(
    m: &SullivanModel,
    report: &CohomologyReport,
    alpha_degree: u32,
    alpha: &[Rational],
) -> Result<Option<FactorizationWitness>> {
    let alg = m.algebra();
    for j in 1..alpha_degree {
        let k = alpha_degree - j;
        let (s1, s2) = (report.slice(j)?, report.slice(k)?);
        for (idx, g1) in s1.class_representatives.iter().enumerate() {
            let sq = alg.multiply(g1, g1)?;
            if !coords_or_zero(report, 2 * j, &sq)?.iter().all(Zero::is_zero) {
                continue;
            }
            let mut columns = Echelon::tracked();
            let mut accepted = Vec::new();
            for (l, g2) in s2.class_representatives.iter().enumerate() {
                let c = report
                    .slice(alpha_degree)?
                    .class_coordinates(&alg.multiply(g1, g2)?)?;
                if columns.insert(&to_sparse(&c, 0)) {
                    accepted.push(l);
                }
            }
            let (rem, used) = columns.reduce_tracked(&to_sparse(alpha, 0));
            if rem.is_empty() {
                let mut coords = zero_coords(s2.betti);
                for (a, c) in used {
                    coords[accepted[a]] = c;
                }
                return Ok(Some(FactorizationWitness {
                    gamma1_degree: j,
                    gamma1_index: idx,
                    gamma2_degree: k,
                    gamma2_coords: coords.iter().map(|c| c.to_string()).collect(),
                }));
            }
        }
    }
    Ok(None)
}

/// Runs every stage of the odd tower `A_0 ⊂ A_1 ⊂ ...`.
pub fn odd_tower_check(m: &SullivanModel) -> Result<OddTowerReport> {
    if !m.classify().odd_generated {
        return Err(AlgebraError::NotOddGenerated);
    }
    let stages = (1..=m.generators().len())
        .map(|i| stage(m, i))
        .collect::<Result<Vec<_>>>()?;
    let all_conditions_ok = stages.iter().all(|s| s.condition_ok);
    let factorization_hypotheses = stages
        .iter()
        .filter(|s| s.i >= 3)
        .all(|s| s.alpha_square_zero && s.c1_factorable);
    Ok(OddTowerReport {
        stages,
        all_conditions_ok,
        factorization_hypotheses,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct TowerIdentity {
    pub dim_h_total: usize,
    pub twice_ker_dim: usize,
    pub equal: bool,
}

/// Compares `dim H(⋀{y_1..y_n})` with `2 dim ker δ_n`.
pub fn tower_dimension_identity(m: &SullivanModel, n: usize) -> Result<TowerIdentity> {
    if !m.classify().odd_generated {
        return Err(AlgebraError::NotOddGenerated);
    }
    let len = m.generators().len();
    if n == 0 || n > len {
        return Err(AlgebraError::StageOutOfRange { stage: n, len });
    }
    let st = stage(m, n)?;
    let sub = m.truncated(n);
    let dim_h_total = betti_numbers(&sub, total_window(&sub) as i64)?.total_dim;
    Ok(TowerIdentity {
        dim_h_total,
        twice_ker_dim: 2 * st.ker_dim,
        equal: dim_h_total == 2 * st.ker_dim,
    })
}

/// Rank of the span of the classes of the given cocycles.
pub fn independent_in_cohomology(m: &SullivanModel, elements: &[GradedElement]) -> Result<usize> {
    let alg = m.algebra();
    let mut by_degree: BTreeMap<u32, Vec<&GradedElement>> = BTreeMap::new();
    for (index, e) in elements.iter().enumerate() {
        let deg = alg.homogeneous_degree(e)?;
        if !m.apply_differential(e)?.is_zero() {
            return Err(AlgebraError::NotACocycle { index });
        }
        if let Some(deg) = deg {
            by_degree.entry(deg).or_default().push(e);
        }
    }
    let mut rank = 0;
    for (deg, elems) in by_degree {
        let here = alg.basis_of_degree(deg);
        let index: std::collections::HashMap<&Monomial, usize> =
            here.iter().enumerate().map(|(i, mono)| (mono, i)).collect();
        let to_vec = |e: &GradedElement| -> SparseVec<Rational> {
            let mut v: SparseVec<Rational> = e.terms().map(|(mono, c)| (index[mono], c.clone())).collect();
            v.sort_by_key(|(i, _)| *i);
            v
        };
        let coboundaries = if deg == 0 {
            Echelon::new()
        } else {
            let images: Vec<SparseVec<Rational>> = alg
                .basis_of_degree(deg - 1)
                .iter()
                .map(|mono| to_vec(&m.d_monomial(mono)))
                .collect();
            Echelon::from_rows(&images)
        };
        let mut classes = Echelon::new();
        for e in elems {
            if classes.insert(&coboundaries.reduce(&to_vec(e))) {
                rank += 1;
            }
        }
    }
    Ok(rank)
}

#[derive(Clone, Debug, Serialize)]
pub struct TheoremResult {
    pub tag: &'static str,
    pub status: Status,
}

#[derive(Clone, Debug, Serialize)]
pub struct HilaliVerdict {
    pub dim_v: usize,
    pub dim_h: usize,
    pub holds: bool,
    pub margin: i64,
    pub ellipticity_evidence: bool,
    pub applicable_theorems: Vec<TheoremResult>,
    pub trinomial: Option<Trinomial>,
    pub toral_rank: Option<ToralRankInterval>,
    pub odd_tower: Option<OddTowerReport>,
}

impl HilaliVerdict {
    pub fn theorem(&self, tag: &str) -> Option<Status> {
        self.applicable_theorems
            .iter()
            .find(|t| t.tag == tag)
            .map(|t| t.status)
    }
}

/// The full check: Betti numbers over the window and every applicable
/// sufficient condition.
pub fn check_hilali(m: &SullivanModel, window: Option<i64>) -> Result<(HilaliVerdict, CohomologyReport)> {
    let window = window.unwrap_or_else(|| default_window(m) as i64);
    let report = betti_numbers(m, window)?;
    let inv = m.invariants();
    let class: Classification = m.classify();
    let mut theorems = Vec::new();
    let p = inv.p.max(0) as u64;
    let n = inv.n as u64;

    let trinomial = class.hyperelliptic.then(|| trinomial_condition(n, p));
    if let Some(t) = &trinomial {
        theorems.push(TheoremResult {
            tag: "A",
            status: Status::from_bool(class.pure || t.satisfied),
        });
        theorems.push(TheoremResult {
            tag: "A1",
            status: Status::from_bool(p <= 2),
        });
    }
    theorems.push(TheoremResult {
        tag: "B",
        status: Status::from_bool(report.fd_observed <= 10),
    });
    let odd_tower = if class.odd_generated && !m.generators().is_empty() {
        let t = odd_tower_check(m)?;
        theorems.push(TheoremResult {
            tag: "C",
            status: Status::from_bool(t.all_conditions_ok),
        });
        theorems.push(TheoremResult {
            tag: "C1",
            status: Status::from_bool(t.factorization_hypotheses),
        });
        Some(t)
    } else {
        None
    };
    let toral = toral_rank_interval(m);
    if class.hyperelliptic {
        let status = match &toral {
            Some((iv, _)) if iv.exact => Status::Pass,
            // rk lies in [0, p-1]; every value is p-1 or p-2 once p <= 2
            Some(_) if p <= 2 => Status::Pass,
            _ => Status::Unknown,
        };
        theorems.push(TheoremResult { tag: "D", status });
    }
    if let Some((_, e)) = &toral {
        theorems.push(TheoremResult { tag: "E", status: *e });
    }
    if report.fd_observed % 2 == 0 && report.fd_observed > 0 {
        theorems.push(TheoremResult {
            tag: "F",
            status: lefschetz_status(m, &report)?,
        });
    } else if report.fd_observed % 2 == 1 {
        let fd = report.fd_observed as usize;
        let betti = report.betti();
        let ok = cohomology::cosymplectic_profile(&betti[..=fd], (fd - 1) / 2)?;
        theorems.push(TheoremResult {
            tag: "G",
            status: Status::from_bool(ok),
        });
    }

    let dim_v = inv.dim_v;
    let dim_h = report.total_dim;
    let verdict = HilaliVerdict {
        dim_v,
        dim_h,
        holds: dim_v <= dim_h,
        margin: dim_h as i64 - dim_v as i64,
        ellipticity_evidence: report.ellipticity_evidence,
        applicable_theorems: theorems,
        trinomial,
        toral_rank: toral.map(|t| t.0),
        odd_tower,
    };
    Ok((verdict, report))
}

/// Searches the representative degree-2 classes (and their sum) for a
/// Lefschetz class. `Fail` when no class can work: some even Betti number
/// below the top vanishes, or `b_2 = 1` and the only line of classes fails.
fn lefschetz_status(m: &SullivanModel, rank_report: &CohomologyReport) -> Result<Status> {
    let half = rank_report.fd_observed / 2;
    let betti = rank_report.betti();
    if (0..=half).any(|i| betti[2 * i as usize] == 0) {
        return Ok(Status::Fail);
    }
    let report = betti_table(m, rank_report.fd_observed as i64)?;
    let b2 = report.slice(2)?.betti;
    let mut candidates: Vec<Vec<Rational>> = (0..b2).map(|i| unit_coords(b2, i)).collect();
    if b2 > 1 {
        candidates.push(vec![Rational::from_integer(1.into()); b2]);
    }
    for w in candidates {
        if lefschetz_check(m, &report, &w, half)?.passed {
            return Ok(Status::Pass);
        }
    }
    // with one degree-2 class every candidate is a multiple of it
    Ok(if b2 == 1 { Status::Fail } else { Status::Unknown })
}
