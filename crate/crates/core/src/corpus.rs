//! Named model families: spheres, projective spaces, products, odd towers and
//! the explicit witness models used for the hyperelliptic bounds.

use serde::Serialize;

use crate::algebra::{FreeAlgebra, GradedElement, Monomial};
use crate::error::{AlgebraError, Result};
use crate::model::{assemble, poly, term, Classification, SullivanModel};

/// Values the pipeline must reproduce for a corpus entry.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Expected {
    pub dim_v: usize,
    /// Exact total dimension, when pinned.
    pub total_dim: Option<usize>,
    /// Lower bound on the total dimension.
    pub total_dim_at_least: usize,
    pub fd: u32,
    pub classification: Classification,
}

#[derive(Clone, Debug)]
pub struct CorpusEntry {
    pub name: String,
    pub parameters: Vec<i64>,
    pub model: SullivanModel,
    pub expected: Option<Expected>,
}

fn invalid(name: &str, reason: impl Into<String>) -> AlgebraError {
    AlgebraError::InvalidParameters {
        name: name.to_string(),
        reason: reason.into(),
    }
}

fn int_params(key: &str, raw: &str) -> Result<Vec<i64>> {
    raw.split(',')
        .map(|s| {
            s.trim()
                .parse::<i64>()
                .map_err(|_| invalid(key, format!("`{s}` is not an integer")))
        })
        .collect()
}

fn single(key: &str, raw: &str) -> Result<i64> {
    match int_params(key, raw)?.as_slice() {
        [k] => Ok(*k),
        _ => Err(invalid(key, "expected one integer parameter")),
    }
}

/// Builds a model from its registry key, e.g. `sphere:4`, `cpn:2`,
/// `product:sphere:3,sphere:5`, `oddtower:3,3,5`.
pub fn build_named_model(key: &str) -> Result<SullivanModel> {
    let (family, rest) = key.split_once(':').unwrap_or((key, ""));
    let model = match family {
        "sphere" => sphere(key, single(key, rest)?)?,
        "cpn" => cpn(key, single(key, rest)?)?,
        "product" => {
            let parts = split_product(rest);
            if parts.len() < 2 {
                return Err(invalid(key, "a product needs at least two factors"));
            }
            let factors = parts
                .iter()
                .map(|p| build_named_model(p))
                .collect::<Result<Vec<_>>>()?;
            product(&factors)
        }
        "oddtower" => oddtower(key, &int_params(key, rest)?)?,
        "thmD" => match rest {
            "n1p3" => thm_d_n1p3(),
            "n2p3:W0" => thm_d_n2p3_w0(),
            "n3p4:W2zero" => thm_d_n3p4_w2zero(),
            _ => return Err(AlgebraError::UnknownModel(key.to_string())),
        },
        "hyperelliptic" if rest == "sample" => hyperelliptic_sample(),
        _ => return Err(AlgebraError::UnknownModel(key.to_string())),
    };
    Ok(model.with_name(key))
}

// `sphere:3,sphere:5` -> ["sphere:3", "sphere:5"]; commas before a digit stay inside a factor.
fn split_product(rest: &str) -> Vec<&str> {
    let mut parts = Vec::new();
    let mut start = 0;
    let bytes = rest.as_bytes();
    for (i, &b) in bytes.iter().enumerate() {
        if b == b',' && bytes.get(i + 1).is_some_and(u8::is_ascii_alphabetic) {
            parts.push(&rest[start..i]);
            start = i + 1;
        }
    }
    if !rest.is_empty() {
        parts.push(&rest[start..]);
    }
    parts
}

fn sphere(key: &str, k: i64) -> Result<SullivanModel> {
    if k < 1 {
        return Err(invalid(key, "dimension must be at least 1"));
    }
    let k = k as u32;
    Ok(if k % 2 == 1 {
        assemble(&[("y", k)], |_| vec![])
    } else {
        assemble(&[("x", k), ("y", 2 * k - 1)], |a| {
            vec![("y", term(a, 1, &[("x", 2)]))]
        })
    })
}

fn cpn(key: &str, m: i64) -> Result<SullivanModel> {
    if m < 1 {
        return Err(invalid(key, "m must be at least 1"));
    }
    let m = m as u32;
    Ok(assemble(&[("x", 2), ("y", 2 * m + 1)], |a| {
        vec![("y", term(a, 1, &[("x", m + 1)]))]
    }))
}

/// Disjoint union of generators, `name_i` for factor `i`, with the
/// componentwise differential.
pub fn product(factors: &[SullivanModel]) -> SullivanModel {
    let mut gens = Vec::new();
    for (i, f) in factors.iter().enumerate() {
        for g in f.generators() {
            gens.push((format!("{}_{}", g.name, i + 1), g.degree));
        }
    }
    let alg = FreeAlgebra::new(gens);
    let arity = alg.arity();
    let mut differential = Vec::with_capacity(arity);
    let mut offset = 0;
    for f in factors {
        for d in f.differential() {
            differential.push(GradedElement::from_terms(d.terms().map(|(mono, c)| {
                let mut exps = vec![0; arity];
                exps[offset..offset + mono.arity()].copy_from_slice(mono.exponents());
                (Monomial::from_exponents(exps), c.clone())
            })));
        }
        offset += f.generators().len();
    }
    SullivanModel::new(alg, differential).expect("factors are consistent")
}

fn oddtower(key: &str, degrees: &[i64]) -> Result<SullivanModel> {
    let &[a, b, c] = degrees else {
        return Err(invalid(key, "expected three degrees"));
    };
    if [a, b, c].iter().any(|d| *d < 1 || d % 2 == 0) {
        return Err(invalid(key, "degrees must be odd and positive"));
    }
    if c != a + b - 1 {
        return Err(invalid(key, "the third degree must be the sum of the first two minus one"));
    }
    Ok(assemble(
        &[("y1", a as u32), ("y2", b as u32), ("y3", c as u32)],
        |alg| vec![("y3", term(alg, 1, &[("y1", 1), ("y2", 1)]))],
    ))
}

// dy_i = P_i(x) with q = r = s = 2, a = 1, b = 0; y4 closed.
fn thm_d_n1p3() -> SullivanModel {
    assemble(&[("x", 2), ("y1", 3), ("y2", 3), ("y3", 3), ("y4", 3)], |a| {
        vec![
            ("y1", term(a, 1, &[("x", 2)])),
            ("y2", term(a, 1, &[("x", 2)])),
        ]
    })
}

// dy4 = d(y1 y2 y3): the mixed part closes up the three quadrics.
fn thm_d_n2p3_w0() -> SullivanModel {
    assemble(
        &[
            ("x1", 2),
            ("x2", 2),
            ("y1", 3),
            ("y2", 3),
            ("y3", 3),
            ("y4", 9),
            ("y5", 3),
        ],
        |a| {
            vec![
                ("y1", term(a, 1, &[("x1", 2)])),
                ("y2", term(a, 1, &[("x1", 1), ("x2", 1)])),
                ("y3", term(a, 1, &[("x2", 2)])),
                (
                    "y4",
                    poly(
                        a,
                        &[
                            (1, &[("x1", 2), ("y2", 1), ("y3", 1)]),
                            (-1, &[("x1", 1), ("x2", 1), ("y1", 1), ("y3", 1)]),
                            (1, &[("x2", 2), ("y1", 1), ("y2", 1)]),
                        ],
                    ),
                ),
            ]
        },
    )
}

fn thm_d_n3p4_w2zero() -> SullivanModel {
    assemble(
        &[
            ("x1", 2),
            ("x2", 2),
            ("x3", 2),
            ("y1", 3),
            ("y2", 3),
            ("y3", 3),
            ("y4", 3),
            ("y5", 3),
            ("y6", 3),
            ("y7", 3),
        ],
        |a| {
            vec![
                ("y1", term(a, 1, &[("x1", 2)])),
                ("y2", term(a, 1, &[("x2", 2)])),
                ("y3", term(a, 1, &[("x3", 2)])),
                ("y4", term(a, 1, &[("x1", 1), ("x2", 1)])),
                ("y5", term(a, 1, &[("x1", 1), ("x3", 1)])),
                ("y6", term(a, 1, &[("x2", 1), ("x3", 1)])),
            ]
        },
    )
}

/// The six cocycles `x_j y_i - x_i y_k` on `thmD:n3p4:W2zero`.
pub fn w2zero_witnesses(m: &SullivanModel) -> Vec<GradedElement> {
    let a = m.algebra();
    let pairs: [(&str, &str, &str, &str); 6] = [
        ("x2", "y1", "x1", "y4"),
        ("x1", "y2", "x2", "y4"),
        ("x3", "y1", "x1", "y5"),
        ("x1", "y3", "x3", "y5"),
        ("x3", "y2", "x2", "y6"),
        ("x2", "y3", "x3", "y6"),
    ];
    pairs
        .iter()
        .map(|(p, q, r, s)| poly(a, &[(1, &[(p, 1), (q, 1)]), (-1, &[(r, 1), (s, 1)])]))
        .collect()
}

/// Non-pure hyperelliptic: `dy4` carries the mixed term `x y2 y3`.
fn hyperelliptic_sample() -> SullivanModel {
    assemble(&[("x", 2), ("y1", 3), ("y2", 3), ("y3", 3), ("y4", 7)], |a| {
        vec![
            ("y1", term(a, 1, &[("x", 2)])),
            (
                "y4",
                poly(a, &[(1, &[("x", 4)]), (1, &[("x", 1), ("y2", 1), ("y3", 1)])]),
            ),
        ]
    })
}

const fn class(pure: bool, hyperelliptic: bool, odd_generated: bool) -> Classification {
    Classification {
        minimal: true,
        pure,
        hyperelliptic,
        odd_generated,
    }
}

const fn exact(dim_v: usize, total: usize, fd: u32, c: Classification) -> Expected {
    Expected {
        dim_v,
        total_dim: Some(total),
        total_dim_at_least: total,
        fd,
        classification: c,
    }
}

/// `(key, expected)` for every registered entry.
fn registry() -> Vec<(String, Expected)> {
    let odd = class(true, true, true);
    let even_sphere = class(true, true, false);
    let mut out = Vec::new();
    for k in 2..=7u32 {
        let e = if k % 2 == 1 {
            exact(1, 2, k, odd)
        } else {
            exact(2, 2, k, even_sphere)
        };
        out.push((format!("sphere:{k}"), e));
    }
    for m in 1..=5u32 {
        out.push((format!("cpn:{m}"), exact(2, m as usize + 1, 2 * m, even_sphere)));
    }
    out.push(("product:sphere:3,sphere:5".into(), exact(2, 4, 8, odd)));
    out.push(("product:sphere:2,sphere:4".into(), exact(4, 4, 6, even_sphere)));
    out.push(("oddtower:3,3,5".into(), exact(3, 6, 11, class(false, false, true))));
    out.push(("thmD:n1p3".into(), exact(5, 16, 11, even_sphere)));
    out.push((
        "thmD:n2p3:W0".into(),
        exact(7, 24, 19, class(false, true, false)),
    ));
    out.push((
        "thmD:n3p4:W2zero".into(),
        Expected {
            dim_v: 10,
            total_dim: Some(72),
            total_dim_at_least: 12,
            fd: 18,
            classification: even_sphere,
        },
    ));
    out.push((
        "hyperelliptic:sample".into(),
        exact(5, 14, 15, class(false, true, false)),
    ));
    out
}

/// Every registry entry with its expected-results record.
pub fn all_entries() -> Vec<CorpusEntry> {
    registry()
        .into_iter()
        .map(|(name, expected)| {
            let model = build_named_model(&name).expect("registry keys build");
            let parameters = name
                .rsplit(':')
                .next()
                .and_then(|t| int_params(&name, t).ok())
                .unwrap_or_default();
            CorpusEntry {
                name,
                parameters,
                model,
                expected: Some(expected),
            }
        })
        .collect()
}
