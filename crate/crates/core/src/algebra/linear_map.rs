use std::collections::HashSet;
use std::fmt;

use num_traits::{One, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::rational::{format_rational, rat, Entry, Rational};
use crate::error::{Error, Result};

/// Dense exact matrix `K^cols -> K^rows` with labelled bases on both sides.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LinearMap {
    rows: usize,
    cols: usize,
    entries: Vec<Rational>,
    domain: Vec<String>,
    codomain: Vec<String>,
}

/// `["{prefix}0", "{prefix}1", ...]`.
pub fn default_labels(prefix: &str, n: usize) -> Vec<String> {
    (0..n).map(|i| format!("{prefix}{i}")).collect()
}

fn check_labels(labels: &[String], what: &str) -> Result<()> {
    let mut seen = HashSet::new();
    for l in labels {
        if !seen.insert(l.as_str()) {
            return Err(Error::shape(format!("duplicate {what} label {l:?}")));
        }
    }
    Ok(())
}

impl LinearMap {
    /// Entries are row-major; `codomain.len()` rows by `domain.len()` columns.
    pub fn new(codomain: Vec<String>, domain: Vec<String>, entries: Vec<Rational>) -> Result<Self> {
        let (rows, cols) = (codomain.len(), domain.len());
        if entries.len() != rows * cols {
            return Err(Error::shape(format!(
                "{} entries for a {rows}x{cols} matrix",
                entries.len()
            )));
        }
        check_labels(&domain, "domain")?;
        check_labels(&codomain, "codomain")?;
        Ok(Self {
            rows,
            cols,
            entries,
            domain,
            codomain,
        })
    }

    fn unlabelled(rows: usize, cols: usize, entries: Vec<Rational>) -> Self {
        debug_assert_eq!(entries.len(), rows * cols);
        Self {
            rows,
            cols,
            entries,
            domain: default_labels("x", cols),
            codomain: default_labels("y", rows),
        }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self::unlabelled(rows, cols, vec![Rational::zero(); rows * cols])
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.entries[i * n + i] = Rational::one();
        }
        m.domain = default_labels("x", n);
        m.codomain = m.domain.clone();
        m
    }

    pub fn from_ints(rows: usize, cols: usize, data: &[i64]) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::shape(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(Self::unlabelled(
            rows,
            cols,
            data.iter().map(|&x| rat(x)).collect(),
        ))
    }

    pub fn from_rows(rows: &[Vec<Rational>], cols: usize) -> Result<Self> {
        let mut entries = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            if r.len() != cols {
                return Err(Error::shape(format!(
                    "ragged row of length {} (expected {cols})",
                    r.len()
                )));
            }
            entries.extend(r.iter().cloned());
        }
        Ok(Self::unlabelled(rows.len(), cols, entries))
    }

    /// Matrix whose columns are the given vectors, each of length `rows`.
    pub fn from_columns(columns: &[Vec<Rational>], rows: usize) -> Result<Self> {
        let cols = columns.len();
        let mut m = Self::zeros(rows, cols);
        for (j, c) in columns.iter().enumerate() {
            if c.len() != rows {
                return Err(Error::shape(format!(
                    "column of length {} (expected {rows})",
                    c.len()
                )));
            }
            for (i, x) in c.iter().enumerate() {
                m.entries[i * cols + j] = x.clone();
            }
        }
        Ok(m)
    }

    pub fn with_bases(mut self, codomain: Vec<String>, domain: Vec<String>) -> Result<Self> {
        if codomain.len() != self.rows || domain.len() != self.cols {
            return Err(Error::shape(format!(
                "bases of sizes {}x{} for a {}x{} matrix",
                codomain.len(),
                domain.len(),
                self.rows,
                self.cols
            )));
        }
        check_labels(&domain, "domain")?;
        check_labels(&codomain, "codomain")?;
        self.domain = domain;
        self.codomain = codomain;
        Ok(self)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn domain_basis(&self) -> &[String] {
        &self.domain
    }

    pub fn codomain_basis(&self) -> &[String] {
        &self.codomain
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.entries[i * self.cols + j]
    }

    fn set(&mut self, i: usize, j: usize, x: Rational) {
        self.entries[i * self.cols + j] = x;
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<Rational> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn row_vectors(&self) -> Vec<Vec<Rational>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    /// The single entry of a 1x1 matrix.
    pub fn scalar(&self) -> Option<&Rational> {
        (self.rows == 1 && self.cols == 1).then(|| &self.entries[0])
    }

    /// `self ∘ rhs`.
    pub fn compose(&self, rhs: &LinearMap) -> Result<LinearMap> {
        if self.cols != rhs.rows {
            return Err(Error::shape(format!(
                "cannot compose {}x{} after {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let mut out = Vec::with_capacity(self.rows * rhs.cols);
        for i in 0..self.rows {
            for j in 0..rhs.cols {
                let mut acc = Rational::zero();
                for k in 0..self.cols {
                    let (a, b) = (self.get(i, k), rhs.get(k, j));
                    if !a.is_zero() && !b.is_zero() {
                        acc += a * b;
                    }
                }
                out.push(acc);
            }
        }
        Ok(LinearMap {
            rows: self.rows,
            cols: rhs.cols,
            entries: out,
            domain: rhs.domain.clone(),
            codomain: self.codomain.clone(),
        })
    }

    pub fn apply(&self, x: &[Rational]) -> Result<Vec<Rational>> {
        if x.len() != self.cols {
            return Err(Error::shape(format!(
                "vector of length {} for {} columns",
                x.len(),
                self.cols
            )));
        }
        Ok((0..self.rows)
            .map(|i| self.row(i).iter().zip(x).map(|(a, b)| a * b).sum())
            .collect())
    }

    fn zip_with(
        &self,
        rhs: &LinearMap,
        f: impl Fn(&Rational, &Rational) -> Rational,
    ) -> Result<LinearMap> {
        if self.rows != rhs.rows || self.cols != rhs.cols {
            return Err(Error::shape(format!(
                "{}x{} vs {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let entries = self
            .entries
            .iter()
            .zip(&rhs.entries)
            .map(|(a, b)| f(a, b))
            .collect();
        Ok(LinearMap {
            entries,
            ..self.clone()
        })
    }

    pub fn add(&self, rhs: &LinearMap) -> Result<LinearMap> {
        self.zip_with(rhs, |a, b| a + b)
    }

    pub fn sub(&self, rhs: &LinearMap) -> Result<LinearMap> {
        self.zip_with(rhs, |a, b| a - b)
    }

    pub fn scale(&self, s: &Rational) -> LinearMap {
        LinearMap {
            entries: self.entries.iter().map(|a| a * s).collect(),
            ..self.clone()
        }
    }

    /// `self - 1` for a square map.
    pub fn minus_identity(&self) -> Result<LinearMap> {
        if !self.is_square() {
            return Err(Error::shape("minus_identity on a non-square map"));
        }
        let mut m = self.clone();
        for i in 0..self.rows {
            let x = m.get(i, i) - Rational::one();
            m.set(i, i, x);
        }
        Ok(m)
    }

    /// `self + 1` for a square map.
    pub fn plus_identity(&self) -> Result<LinearMap> {
        if !self.is_square() {
            return Err(Error::shape("plus_identity on a non-square map"));
        }
        let mut m = self.clone();
        for i in 0..self.rows {
            let x = m.get(i, i) + Rational::one();
            m.set(i, i, x);
        }
        Ok(m)
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Zero::is_zero)
    }

    pub fn is_identity(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| {
                (0..self.cols).all(|j| {
                    let x = self.get(i, j);
                    if i == j {
                        x.is_one()
                    } else {
                        x.is_zero()
                    }
                })
            })
    }

    /// Equal entries, ignoring basis labels.
    pub fn same_matrix(&self, other: &LinearMap) -> bool {
        self.rows == other.rows && self.cols == other.cols && self.entries == other.entries
    }

    pub fn is_integral(&self) -> bool {
        self.entries.iter().all(|x| x.is_integer())
    }

    /// `[self | rhs]`.
    pub fn hstack(&self, rhs: &LinearMap) -> Result<LinearMap> {
        if self.rows != rhs.rows {
            return Err(Error::shape("hstack with different row counts"));
        }
        let cols = self.cols + rhs.cols;
        let mut entries = Vec::with_capacity(self.rows * cols);
        for i in 0..self.rows {
            entries.extend_from_slice(self.row(i));
            entries.extend_from_slice(rhs.row(i));
        }
        Ok(Self::unlabelled(self.rows, cols, entries))
    }

    /// `[self ; rhs]`.
    pub fn vstack(&self, rhs: &LinearMap) -> Result<LinearMap> {
        if self.cols != rhs.cols {
            return Err(Error::shape("vstack with different column counts"));
        }
        let mut entries = self.entries.clone();
        entries.extend_from_slice(&rhs.entries);
        Ok(Self::unlabelled(self.rows + rhs.rows, self.cols, entries))
    }

    pub fn block_diag(&self, rhs: &LinearMap) -> LinearMap {
        let (rows, cols) = (self.rows + rhs.rows, self.cols + rhs.cols);
        let mut m = Self::zeros(rows, cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m.set(i, j, self.get(i, j).clone());
            }
        }
        for i in 0..rhs.rows {
            for j in 0..rhs.cols {
                m.set(self.rows + i, self.cols + j, rhs.get(i, j).clone());
            }
        }
        m
    }

    pub fn select_rows(&self, idx: &[usize]) -> LinearMap {
        let mut entries = Vec::with_capacity(idx.len() * self.cols);
        for &i in idx {
            entries.extend_from_slice(self.row(i));
        }
        Self::unlabelled(idx.len(), self.cols, entries)
    }

    pub fn select_columns(&self, idx: &[usize]) -> LinearMap {
        let mut entries = Vec::with_capacity(self.rows * idx.len());
        for i in 0..self.rows {
            entries.extend(idx.iter().map(|&j| self.get(i, j).clone()));
        }
        Self::unlabelled(self.rows, idx.len(), entries)
    }

    /// Reduced row echelon form and the pivot column of each nonzero row.
    pub fn rref(&self) -> (LinearMap, Vec<usize>) {
        let mut m = Self::unlabelled(self.rows, self.cols, self.entries.clone());
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| !m.get(i, c).is_zero()) else {
                continue;
            };
            m.swap_rows(r, p);
            let inv = m.get(r, c).recip();
            for j in c..self.cols {
                let x = m.get(r, j) * &inv;
                m.set(r, j, x);
            }
            for i in 0..self.rows {
                if i == r {
                    continue;
                }
                let f = m.get(i, c).clone();
                if f.is_zero() {
                    continue;
                }
                for j in c..self.cols {
                    if m.get(r, j).is_zero() {
                        continue;
                    }
                    let x = m.get(i, j) - &f * m.get(r, j);
                    m.set(i, j, x);
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.entries.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of the null space; vector `k` has a 1 in the `k`-th free column,
    /// zeros in the other free columns.
    pub fn kernel_basis(&self) -> Vec<Vec<Rational>> {
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![Rational::zero(); self.cols];
                v[f] = Rational::one();
                for (row, &p) in pivots.iter().enumerate() {
                    v[p] = -r.get(row, f).clone();
                }
                v
            })
            .collect()
    }

    pub fn invert(&self) -> Result<LinearMap> {
        if !self.is_square() {
            return Err(Error::shape(format!(
                "cannot invert a {}x{} map",
                self.rows, self.cols
            )));
        }
        let n = self.rows;
        let aug = self.hstack(&LinearMap::identity(n))?;
        let (r, pivots) = aug.rref();
        if (0..n).any(|i| pivots.get(i) != Some(&i)) {
            return Err(Error::Singular {
                rank: self.rank(),
                size: n,
            });
        }
        let inv = r.select_columns(&(n..2 * n).collect::<Vec<_>>());
        Ok(LinearMap {
            domain: self.codomain.clone(),
            codomain: self.domain.clone(),
            ..inv
        })
    }

    pub fn is_invertible(&self) -> bool {
        self.is_square() && self.rank() == self.rows
    }
}

impl fmt::Display for LinearMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cells: Vec<Vec<String>> = (0..self.rows)
            .map(|i| self.row(i).iter().map(format_rational).collect())
            .collect();
        let width = cells
            .iter()
            .flatten()
            .chain(self.domain.iter())
            .map(String::len)
            .max()
            .unwrap_or(1);
        let label_w = self.codomain.iter().map(String::len).max().unwrap_or(0);
        write!(f, "{:label_w$} ", "")?;
        for d in &self.domain {
            write!(f, " {d:>width$}")?;
        }
        writeln!(f)?;
        for (i, row) in cells.iter().enumerate() {
            write!(f, "{:>label_w$} [", self.codomain[i])?;
            for c in row {
                write!(f, " {c:>width$}")?;
            }
            writeln!(f, " ]")?;
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct LinearMapJson {
    domain: Vec<String>,
    codomain: Vec<String>,
    entries: Vec<Vec<Entry>>,
}

impl Serialize for LinearMap {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        LinearMapJson {
            domain: self.domain.clone(),
            codomain: self.codomain.clone(),
            entries: (0..self.rows)
                .map(|i| self.row(i).iter().map(Entry::from_rational).collect())
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for LinearMap {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let raw = LinearMapJson::deserialize(d)?;
        if raw.entries.len() != raw.codomain.len() {
            return Err(D::Error::custom("row count does not match codomain basis"));
        }
        let mut entries = Vec::new();
        for row in &raw.entries {
            if row.len() != raw.domain.len() {
                return Err(D::Error::custom("row length does not match domain basis"));
            }
            for e in row {
                entries.push(
                    e.to_rational()
                        .ok_or_else(|| D::Error::custom("bad matrix entry"))?,
                );
            }
        }
        LinearMap::new(raw.codomain, raw.domain, entries).map_err(D::Error::custom)
    }
}
