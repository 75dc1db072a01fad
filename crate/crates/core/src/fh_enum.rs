//! Degree sequences admissible for a given formal dimension.
//!
//! A sequence is a pair of multisets: even generator degrees `x` and odd
//! generator degrees `y`. The constraints checked here are
//!
//! * `|y| >= |x|` as counts,
//! * the `n = |x|` largest odd degrees, sorted, dominate `2x_i - 1` pairwise,
//! * `Σx <= fd`, `Σy <= 2fd - 1`,
//! * `Σy - Σ(x - 1) = fd`.

use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;

use crate::error::{AlgebraError, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct DegreeSequence {
    pub even_degrees: Vec<u32>,
    pub odd_degrees: Vec<u32>,
    pub fd: u32,
}

impl DegreeSequence {
    fn sort_key(&self) -> (usize, &[u32], &[u32]) {
        (self.even_degrees.len(), &self.even_degrees, &self.odd_degrees)
    }

    /// `fd=4: (2) | (5)`
    pub fn to_row(&self) -> String {
        format!(
            "fd={}: {} | {}",
            self.fd,
            tuple(&self.even_degrees),
            tuple(&self.odd_degrees)
        )
    }
}

impl Ord for DegreeSequence {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.fd
            .cmp(&other.fd)
            .then_with(|| self.sort_key().cmp(&other.sort_key()))
    }
}

impl PartialOrd for DegreeSequence {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for DegreeSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_row())
    }
}

fn tuple(v: &[u32]) -> String {
    let inner = v.iter().map(u32::to_string).collect::<Vec<_>>().join(",");
    format!("({inner})")
}

/// Checks the degree constraints for ascending `even` and `odd`.
pub fn satisfies_constraints(even: &[u32], odd: &[u32], fd: u32) -> bool {
    let n = even.len();
    if odd.len() < n {
        return false;
    }
    let top = &odd[odd.len() - n..];
    let paired = even.iter().zip(top).all(|(&x, &y)| y + 1 >= 2 * x);
    let sum_x: i64 = even.iter().map(|&x| x as i64).sum();
    let sum_y: i64 = odd.iter().map(|&y| y as i64).sum();
    let fd = fd as i64;
    paired
        && sum_x <= fd
        && sum_y < 2 * fd
        && sum_y - even.iter().map(|&x| x as i64 - 1).sum::<i64>() == fd
}

/// Every admissible sequence for `fd`, ordered by even count then lexicographically.
pub fn enumerate_fh(fd: u32) -> Result<Vec<DegreeSequence>> {
    if fd < 2 {
        return Err(AlgebraError::FormalDimensionTooSmall(fd));
    }
    let mut out = Vec::new();
    let mut evens = Vec::new();
    even_multisets(fd, 2, &mut Vec::new(), &mut evens);
    for even in evens {
        let target = fd + even.iter().map(|x| x - 1).sum::<u32>();
        if target > 2 * fd - 1 {
            continue;
        }
        let mut odds = Vec::new();
        odd_partitions(target, 3, &mut Vec::new(), &mut odds);
        for odd in odds {
            if satisfies_constraints(&even, &odd, fd) {
                out.push(DegreeSequence {
                    even_degrees: even.clone(),
                    odd_degrees: odd,
                    fd,
                });
            }
        }
    }
    out.sort();
    Ok(out)
}

fn even_multisets(budget: u32, min: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
    out.push(cur.clone());
    let mut part = min;
    while part <= budget {
        cur.push(part);
        even_multisets(budget - part, part, cur, out);
        cur.pop();
        part += 2;
    }
}

fn odd_partitions(remaining: u32, min: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
    if remaining == 0 {
        out.push(cur.clone());
        return;
    }
    let mut part = min;
    while part <= remaining {
        cur.push(part);
        odd_partitions(remaining - part, part, cur, out);
        cur.pop();
        part += 2;
    }
}

/// Parses one `fd=K: (..) | (..)` row, rejecting unsorted or wrong-parity entries.
pub fn parse_row(line: &str) -> Result<DegreeSequence> {
    let bad = || AlgebraError::MalformedRow(line.to_string());
    let rest = line.trim().strip_prefix("fd=").ok_or_else(bad)?;
    let (fd, rest) = rest.split_once(':').ok_or_else(bad)?;
    let fd: u32 = fd.trim().parse().map_err(|_| bad())?;
    let (even, odd) = rest.split_once('|').ok_or_else(bad)?;
    let parse_tuple = |s: &str, parity: u32, min: u32| -> Result<Vec<u32>> {
        let inner = s
            .trim()
            .strip_prefix('(')
            .and_then(|s| s.strip_suffix(')'))
            .ok_or_else(bad)?;
        if inner.trim().is_empty() {
            return Ok(Vec::new());
        }
        let v = inner
            .split(',')
            .map(|t| t.trim().parse::<u32>().map_err(|_| bad()))
            .collect::<Result<Vec<_>>>()?;
        if v.windows(2).any(|w| w[0] > w[1]) || v.iter().any(|&d| d % 2 != parity || d < min) {
            return Err(bad());
        }
        Ok(v)
    };
    Ok(DegreeSequence {
        even_degrees: parse_tuple(even, 0, 2)?,
        odd_degrees: parse_tuple(odd, 1, 3)?,
        fd,
    })
}

/// Parses a table file; blank lines and `#` comments are skipped.
pub fn parse_table(text: &str) -> Result<Vec<DegreeSequence>> {
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(parse_row)
        .collect()
}

pub fn render_table(rows: &[DegreeSequence]) -> String {
    rows.iter().map(|r| r.to_row() + "\n").collect()
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Audit {
    pub missing_from_enumeration: Vec<DegreeSequence>,
    pub extra_in_enumeration: Vec<DegreeSequence>,
}

/// Set differences between the enumeration for `fd` and a reference table.
pub fn audit_against_reference(fd: u32, reference: &[DegreeSequence]) -> Result<Audit> {
    if let Some(r) = reference.iter().find(|r| r.fd != fd) {
        return Err(AlgebraError::MalformedRow(format!(
            "{} (expected fd={fd})",
            r.to_row()
        )));
    }
    let enumerated: BTreeSet<DegreeSequence> = enumerate_fh(fd)?.into_iter().collect();
    let reference: BTreeSet<DegreeSequence> = reference.iter().cloned().collect();
    Ok(Audit {
        missing_from_enumeration: reference.difference(&enumerated).cloned().collect(),
        extra_in_enumeration: enumerated.difference(&reference).cloned().collect(),
    })
}

/// Bundled reference tables for formal dimensions 2 through 10.
pub fn reference_table(fd: u32) -> Option<&'static str> {
    Some(match fd {
        2 => include_str!("../data/reference/fd2.tbl"),
        3 => include_str!("../data/reference/fd3.tbl"),
        4 => include_str!("../data/reference/fd4.tbl"),
        5 => include_str!("../data/reference/fd5.tbl"),
        6 => include_str!("../data/reference/fd6.tbl"),
        7 => include_str!("../data/reference/fd7.tbl"),
        8 => include_str!("../data/reference/fd8.tbl"),
        9 => include_str!("../data/reference/fd9.tbl"),
        10 => include_str!("../data/reference/fd10.tbl"),
        _ => return None,
    })
}
