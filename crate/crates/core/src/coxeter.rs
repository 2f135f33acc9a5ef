//! Coxeter matrices and their text / JSON input formats.

use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// An entry `m_ij` of a Coxeter matrix.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Exponent {
    Finite(u32),
    Infinite,
}

impl Exponent {
    pub fn is_infinite(self) -> bool {
        matches!(self, Exponent::Infinite)
    }

    pub fn finite(self) -> Option<u32> {
        match self {
            Exponent::Finite(m) => Some(m),
            Exponent::Infinite => None,
        }
    }

    /// Diagram edge: `m >= 3` or infinite.
    pub fn is_edge(self) -> bool {
        match self {
            Exponent::Finite(m) => m >= 3,
            Exponent::Infinite => true,
        }
    }
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Exponent::Finite(m) => write!(f, "{m}"),
            Exponent::Infinite => write!(f, "inf"),
        }
    }
}

impl FromStr for Exponent {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.eq_ignore_ascii_case("inf") || s == "∞" {
            return Ok(Exponent::Infinite);
        }
        s.parse::<u32>()
            .map(Exponent::Finite)
            .map_err(|_| Error::Malformed(format!("bad exponent {s:?}")))
    }
}

/// The datum `(S, m_ij)` of a Coxeter system.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CoxeterMatrix {
    rank: usize,
    entries: Vec<Exponent>,
    labels: Option<Vec<String>>,
}

impl CoxeterMatrix {
    /// Validates a full matrix. Indices in errors are 1-based.
    pub fn new(rows: Vec<Vec<Exponent>>) -> Result<Self> {
        let rank = rows.len();
        if rank == 0 {
            return Err(Error::EmptyRank);
        }
        for (i, row) in rows.iter().enumerate() {
            if row.len() != rank {
                return Err(Error::Malformed(format!(
                    "row {} has {} entries, expected {rank}",
                    i + 1,
                    row.len()
                )));
            }
        }
        for i in 0..rank {
            if rows[i][i] != Exponent::Finite(1) {
                return Err(Error::DiagonalNotOne { index: i + 1 });
            }
            for j in 0..rank {
                if i == j {
                    continue;
                }
                if rows[i][j] != rows[j][i] {
                    let (r, c) = if i < j { (i, j) } else { (j, i) };
                    return Err(Error::Asymmetric { row: r + 1, col: c + 1 });
                }
                if let Exponent::Finite(v) = rows[i][j] {
                    if v < 2 {
                        return Err(Error::ExponentTooSmall {
                            row: i + 1,
                            col: j + 1,
                            value: v,
                        });
                    }
                }
            }
        }
        Ok(Self {
            rank,
            entries: rows.into_iter().flatten().collect(),
            labels: None,
        })
    }

    /// Matrix with the given upper-triangle entries (0-based `(i, j, m)`, `i != j`);
    /// unassigned pairs default to 2.
    pub fn from_pairs(rank: usize, pairs: &[(usize, usize, Exponent)]) -> Result<Self> {
        if rank == 0 {
            return Err(Error::EmptyRank);
        }
        let mut rows = vec![vec![Exponent::Finite(2); rank]; rank];
        for (i, row) in rows.iter_mut().enumerate() {
            row[i] = Exponent::Finite(1);
        }
        for &(i, j, m) in pairs {
            if i >= rank || j >= rank {
                return Err(Error::IndexOutOfRange {
                    row: i + 1,
                    col: j + 1,
                    rank,
                });
            }
            if i == j {
                return Err(Error::Malformed(format!("assignment to diagonal entry m{0}{0}", i + 1)));
            }
            rows[i][j] = m;
            rows[j][i] = m;
        }
        Self::new(rows)
    }

    /// Free Coxeter group on `k` generators: all off-diagonal entries infinite.
    pub fn free(k: usize) -> Result<Self> {
        let mut pairs = Vec::new();
        for i in 0..k {
            for j in i + 1..k {
                pairs.push((i, j, Exponent::Infinite));
            }
        }
        Self::from_pairs(k, &pairs)
    }

    /// Parses the `rank <k>` / `m<i><j>=<v>` text grammar.
    ///
    /// Tokens are separated by whitespace or `;`. Indices are 1-based; two-digit
    /// indices may be written `m<i>_<j>` or `m<i>,<j>`.
    pub fn parse(text: &str) -> Result<Self> {
        let mut tokens = text
            .split(|c: char| c.is_whitespace() || c == ';')
            .filter(|t| !t.is_empty());
        match tokens.next() {
            Some(t) if t.eq_ignore_ascii_case("rank") => {}
            Some(t) => return Err(Error::Malformed(format!("expected \"rank\", found {t:?}"))),
            None => return Err(Error::Malformed("empty input".into())),
        }
        let rank: usize = tokens
            .next()
            .ok_or_else(|| Error::Malformed("missing rank value".into()))?
            .parse()
            .map_err(|_| Error::Malformed("rank must be a positive integer".into()))?;
        if rank == 0 {
            return Err(Error::EmptyRank);
        }
        let mut rows = vec![vec![Exponent::Finite(2); rank]; rank];
        for (i, row) in rows.iter_mut().enumerate() {
            row[i] = Exponent::Finite(1);
        }
        let mut seen = vec![vec![false; rank]; rank];
        for tok in tokens {
            let (lhs, rhs) = tok
                .split_once('=')
                .ok_or_else(|| Error::Malformed(format!("expected m<i><j>=<v>, found {tok:?}")))?;
            let idx = lhs
                .strip_prefix('m')
                .ok_or_else(|| Error::Malformed(format!("expected m<i><j>=<v>, found {tok:?}")))?;
            let (i, j) = parse_index_pair(idx)
                .ok_or_else(|| Error::Malformed(format!("bad index pair in {tok:?}")))?;
            if i == 0 || j == 0 || i > rank || j > rank {
                return Err(Error::IndexOutOfRange { row: i, col: j, rank });
            }
            let v: Exponent = rhs.parse()?;
            let (i, j) = (i - 1, j - 1);
            if i == j {
                if v != Exponent::Finite(1) {
                    return Err(Error::DiagonalNotOne { index: i + 1 });
                }
                continue;
            }
            if i > j {
                return Err(Error::Malformed(format!(
                    "assignments must satisfy i < j, found m{}{}",
                    i + 1,
                    j + 1
                )));
            }
            if seen[i][j] && rows[i][j] != v {
                return Err(Error::Asymmetric { row: i + 1, col: j + 1 });
            }
            seen[i][j] = true;
            rows[i][j] = v;
            rows[j][i] = v;
        }
        Self::new(rows)
    }

    /// Parses the JSON form: a full symmetric integer matrix with infinity encoded
    /// as 0, either bare or as `{"matrix": [[...]], "labels": [...]}`.
    pub fn from_json(text: &str) -> Result<Self> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Input {
            Bare(Vec<Vec<u32>>),
            Wrapped {
                matrix: Vec<Vec<u32>>,
                #[serde(default)]
                labels: Option<Vec<String>>,
            },
        }
        let input: Input =
            serde_json::from_str(text).map_err(|e| Error::Malformed(format!("json: {e}")))?;
        let (matrix, labels) = match input {
            Input::Bare(m) => (m, None),
            Input::Wrapped { matrix, labels } => (matrix, labels),
        };
        let rows = matrix
            .into_iter()
            .map(|r| {
                r.into_iter()
                    .map(|v| if v == 0 { Exponent::Infinite } else { Exponent::Finite(v) })
                    .collect()
            })
            .collect();
        let cm = Self::new(rows)?;
        match labels {
            Some(l) => cm.with_labels(l),
            None => Ok(cm),
        }
    }

    /// Accepts either input format.
    pub fn parse_any(text: &str) -> Result<Self> {
        let t = text.trim_start();
        if t.starts_with('[') || t.starts_with('{') {
            Self::from_json(text)
        } else {
            Self::parse(text)
        }
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.rank {
            return Err(Error::Malformed(format!(
                "{} labels for rank {}",
                labels.len(),
                self.rank
            )));
        }
        self.labels = Some(labels);
        Ok(self)
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    /// Generator name: the label if present, else `a, b, c, ...` for small ranks, else `s<i>`.
    pub fn generator_name(&self, i: usize) -> String {
        if let Some(l) = &self.labels {
            return l[i].clone();
        }
        if self.rank <= 26 {
            ((b'a' + i as u8) as char).to_string()
        } else {
            format!("s{}", i + 1)
        }
    }

    /// `m_ij`, 0-based.
    pub fn get(&self, i: usize, j: usize) -> Exponent {
        self.entries[i * self.rank + j]
    }

    pub fn rows(&self) -> Vec<Vec<Exponent>> {
        (0..self.rank)
            .map(|i| (0..self.rank).map(|j| self.get(i, j)).collect())
            .collect()
    }

    /// lcm of the finite off-diagonal exponents `>= 3` (1 if there are none).
    /// Exponent 2 contributes the Gram entry 0 and needs no field support.
    pub fn finite_lcm(&self) -> u32 {
        let mut l = 1u32;
        for i in 0..self.rank {
            for j in i + 1..self.rank {
                if let Exponent::Finite(m @ 3..) = self.get(i, j) {
                    l = l.lcm(&m);
                }
            }
        }
        l
    }

    /// Special subgroup on `subset` (0-based indices, in the given order).
    pub fn restrict(&self, subset: &[usize]) -> Result<Self> {
        for &s in subset {
            if s >= self.rank {
                return Err(Error::GeneratorOutOfRange {
                    index: s,
                    rank: self.rank,
                });
            }
        }
        let rows = subset
            .iter()
            .map(|&i| subset.iter().map(|&j| self.get(i, j)).collect())
            .collect();
        let mut cm = Self::new(rows)?;
        if let Some(l) = &self.labels {
            cm.labels = Some(subset.iter().map(|&i| l[i].clone()).collect());
        }
        Ok(cm)
    }

    /// Relabels generators: new generator `k` is old generator `perm[k]`.
    pub fn permute(&self, perm: &[usize]) -> Result<Self> {
        let mut sorted = perm.to_vec();
        sorted.sort_unstable();
        if sorted != (0..self.rank).collect::<Vec<_>>() {
            return Err(Error::Malformed("not a permutation".into()));
        }
        self.restrict(perm)
    }

    /// True when every off-diagonal entry is infinite.
    pub fn is_free(&self) -> bool {
        (0..self.rank).all(|i| (0..self.rank).all(|j| i == j || self.get(i, j).is_infinite()))
    }

    /// Canonical text form (`rank k; m12=3 ...`, only non-2 entries).
    pub fn to_text(&self) -> String {
        let mut s = format!("rank {}", self.rank);
        let mut first = true;
        for i in 0..self.rank {
            for j in i + 1..self.rank {
                let m = self.get(i, j);
                if m != Exponent::Finite(2) {
                    s.push_str(if first { "; " } else { " " });
                    first = false;
                    if self.rank <= 9 {
                        s.push_str(&format!("m{}{}={m}", i + 1, j + 1));
                    } else {
                        s.push_str(&format!("m{}_{}={m}", i + 1, j + 1));
                    }
                }
            }
        }
        s
    }

    /// JSON matrix with infinity as 0.
    pub fn to_json_matrix(&self) -> Vec<Vec<u32>> {
        self.rows()
            .into_iter()
            .map(|r| r.into_iter().map(|m| m.finite().unwrap_or(0)).collect())
            .collect()
    }
}

fn parse_index_pair(s: &str) -> Option<(usize, usize)> {
    if let Some((a, b)) = s.split_once(['_', ',']) {
        return Some((a.parse().ok()?, b.parse().ok()?));
    }
    let b = s.as_bytes();
    if b.len() == 2 && b.iter().all(u8::is_ascii_digit) {
        return Some(((b[0] - b'0') as usize, (b[1] - b'0') as usize));
    }
    None
}

impl fmt::Debug for CoxeterMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CoxeterMatrix({})", self.to_text())
    }
}

impl fmt::Display for CoxeterMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

impl Serialize for CoxeterMatrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_text().serialize(s)
    }
}
