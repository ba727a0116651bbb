use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use super::int::{Checked, Int};
use crate::error::{Error, Result};

/// Exact sparse integer matrix, stored by columns with rows sorted and no
/// explicit zeros.
#[derive(Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SparseIntMatrix {
    rows: usize,
    cols: usize,
    columns: Vec<Vec<(usize, BigInt)>>,
}

impl SparseIntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        SparseIntMatrix {
            rows,
            cols,
            columns: vec![Vec::new(); cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let columns = (0..n).map(|i| vec![(i, BigInt::from(1))]).collect();
        SparseIntMatrix {
            rows: n,
            cols: n,
            columns,
        }
    }

    /// Square diagonal matrix.
    pub fn diagonal(entries: &[BigInt]) -> Self {
        let n = entries.len();
        let columns = entries
            .iter()
            .enumerate()
            .map(|(i, d)| {
                if d.is_zero() {
                    vec![]
                } else {
                    vec![(i, d.clone())]
                }
            })
            .collect();
        SparseIntMatrix {
            rows: n,
            cols: n,
            columns,
        }
    }

    pub fn from_dense(rows: usize, cols: usize, data: &[Vec<i64>]) -> Self {
        assert_eq!(data.len(), rows, "row count");
        let mut m = SparseIntMatrix::zeros(rows, cols);
        for (i, row) in data.iter().enumerate() {
            assert_eq!(row.len(), cols, "column count");
            for (j, &v) in row.iter().enumerate() {
                if v != 0 {
                    m.columns[j].push((i, BigInt::from(v)));
                }
            }
        }
        m
    }

    /// Builds from column entry lists; duplicate rows are summed and zeros dropped.
    pub fn from_columns<I, E>(rows: usize, columns: I) -> Result<Self>
    where
        I: IntoIterator<Item = Vec<(usize, E)>>,
        E: Into<BigInt>,
    {
        let mut out = Vec::new();
        for col in columns {
            let mut acc: BTreeMap<usize, BigInt> = BTreeMap::new();
            for (r, v) in col {
                if r >= rows {
                    return Err(Error::Dimension(format!("row {r} out of range 0..{rows}")));
                }
                *acc.entry(r).or_default() += v.into();
            }
            out.push(acc.into_iter().filter(|(_, v)| !v.is_zero()).collect());
        }
        Ok(SparseIntMatrix {
            rows,
            cols: out.len(),
            columns: out,
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn nnz(&self) -> usize {
        self.columns.iter().map(Vec::len).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.columns.iter().all(Vec::is_empty)
    }

    pub fn column(&self, j: usize) -> &[(usize, BigInt)] {
        &self.columns[j]
    }

    pub fn columns(&self) -> impl Iterator<Item = &[(usize, BigInt)]> {
        self.columns.iter().map(Vec::as_slice)
    }

    pub fn get(&self, r: usize, c: usize) -> BigInt {
        assert!(r < self.rows && c < self.cols, "index out of range");
        match self.columns[c].binary_search_by_key(&r, |(i, _)| *i) {
            Ok(k) => self.columns[c][k].1.clone(),
            Err(_) => BigInt::zero(),
        }
    }

    pub fn set(&mut self, r: usize, c: usize, v: BigInt) {
        assert!(r < self.rows && c < self.cols, "index out of range");
        let col = &mut self.columns[c];
        match col.binary_search_by_key(&r, |(i, _)| *i) {
            Ok(k) if v.is_zero() => {
                col.remove(k);
            }
            Ok(k) => col[k].1 = v,
            Err(_) if v.is_zero() => {}
            Err(k) => col.insert(k, (r, v)),
        }
    }

    /// Iterates nonzero entries as `(row, col, value)` in column-major order.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &BigInt)> {
        self.columns
            .iter()
            .enumerate()
            .flat_map(|(j, col)| col.iter().map(move |(i, v)| (*i, j, v)))
    }

    pub fn transpose(&self) -> Self {
        let mut columns = vec![Vec::new(); self.rows];
        for (i, j, v) in self.entries() {
            columns[i].push((j, v.clone()));
        }
        SparseIntMatrix {
            rows: self.cols,
            cols: self.rows,
            columns,
        }
    }

    /// `self * other`.
    pub fn mul(&self, other: &SparseIntMatrix) -> Result<SparseIntMatrix> {
        if self.cols != other.rows {
            return Err(Error::Dimension(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let columns = other.columns.iter().map(|col| self.apply_sparse(col));
        SparseIntMatrix::from_columns(self.rows, columns.collect::<Vec<_>>())
    }

    fn apply_sparse(&self, v: &[(usize, BigInt)]) -> Vec<(usize, BigInt)> {
        let mut acc: BTreeMap<usize, BigInt> = BTreeMap::new();
        for (k, x) in v {
            for (i, a) in &self.columns[*k] {
                *acc.entry(*i).or_default() += a * x;
            }
        }
        acc.into_iter().filter(|(_, v)| !v.is_zero()).collect()
    }

    /// `[self | other]`.
    pub fn hstack(&self, other: &SparseIntMatrix) -> Result<SparseIntMatrix> {
        if self.rows != other.rows {
            return Err(Error::Dimension(format!(
                "hstack of {} and {} rows",
                self.rows, other.rows
            )));
        }
        let mut columns = self.columns.clone();
        columns.extend(other.columns.iter().cloned());
        Ok(SparseIntMatrix {
            rows: self.rows,
            cols: columns.len(),
            columns,
        })
    }

    /// `[self ; other]`.
    pub fn vstack(&self, other: &SparseIntMatrix) -> Result<SparseIntMatrix> {
        if self.cols != other.cols {
            return Err(Error::Dimension(format!(
                "vstack of {} and {} columns",
                self.cols, other.cols
            )));
        }
        let columns = self
            .columns
            .iter()
            .zip(&other.columns)
            .map(|(a, b)| {
                let mut c = a.clone();
                c.extend(b.iter().map(|(i, v)| (i + self.rows, v.clone())));
                c
            })
            .collect();
        Ok(SparseIntMatrix {
            rows: self.rows + other.rows,
            cols: self.cols,
            columns,
        })
    }

    /// Block diagonal `diag(self, other)`.
    pub fn block_diag(&self, other: &SparseIntMatrix) -> SparseIntMatrix {
        let mut columns = self.columns.clone();
        columns.extend(
            other
                .columns
                .iter()
                .map(|c| c.iter().map(|(i, v)| (i + self.rows, v.clone())).collect()),
        );
        SparseIntMatrix {
            rows: self.rows + other.rows,
            cols: self.cols + other.cols,
            columns,
        }
    }

    /// Keeps the rows in `range`, renumbered from zero.
    pub fn row_slice(&self, range: std::ops::Range<usize>) -> SparseIntMatrix {
        let columns = self
            .columns
            .iter()
            .map(|c| {
                c.iter()
                    .filter(|(i, _)| range.contains(i))
                    .map(|(i, v)| (i - range.start, v.clone()))
                    .collect()
            })
            .collect();
        SparseIntMatrix {
            rows: range.len(),
            cols: self.cols,
            columns,
        }
    }

    pub fn scaled(&self, c: &BigInt) -> SparseIntMatrix {
        if c.is_zero() {
            return SparseIntMatrix::zeros(self.rows, self.cols);
        }
        let columns = self
            .columns
            .iter()
            .map(|col| col.iter().map(|(i, v)| (*i, v * c)).collect())
            .collect();
        SparseIntMatrix {
            rows: self.rows,
            cols: self.cols,
            columns,
        }
    }

    pub fn to_dense(&self) -> Vec<Vec<BigInt>> {
        let mut out = vec![vec![BigInt::zero(); self.cols]; self.rows];
        for (i, j, v) in self.entries() {
            out[i][j] = v.clone();
        }
        out
    }

    pub(crate) fn dense_as<T: Int>(&self) -> Checked<Vec<Vec<T>>> {
        let mut out = vec![vec![T::zero(); self.cols]; self.rows];
        for (i, j, v) in self.entries() {
            out[i][j] = T::from_big(v)?;
        }
        Ok(out)
    }

    /// Column `j` as a dense vector of length `rows`.
    pub(crate) fn dense_column<T: Int>(&self, j: usize) -> Checked<Vec<T>> {
        let mut v = vec![T::zero(); self.rows];
        for (i, x) in &self.columns[j] {
            v[*i] = T::from_big(x)?;
        }
        Ok(v)
    }

    pub(crate) fn from_dense_columns<T: Int>(rows: usize, cols: &[Vec<T>]) -> SparseIntMatrix {
        let columns = cols
            .iter()
            .map(|c| {
                c.iter()
                    .enumerate()
                    .filter(|(_, v)| !v.is_zero())
                    .map(|(i, v)| (i, v.to_big()))
                    .collect()
            })
            .collect();
        SparseIntMatrix {
            rows,
            cols: cols.len(),
            columns,
        }
    }

    /// True when every column has at most one entry and no two share a row.
    pub(crate) fn is_monomial(&self) -> bool {
        let mut seen = vec![false; self.rows];
        for col in &self.columns {
            match col.as_slice() {
                [] => {}
                [(i, _)] if !seen[*i] => seen[*i] = true,
                _ => return false,
            }
        }
        true
    }
}

impl fmt::Debug for SparseIntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.rows <= 12 && self.cols <= 12 {
            writeln!(f, "SparseIntMatrix {}x{} [", self.rows, self.cols)?;
            for row in self.to_dense() {
                let cells: Vec<String> = row.iter().map(ToString::to_string).collect();
                writeln!(f, "  [{}]", cells.join(", "))?;
            }
            write!(f, "]")
        } else {
            write!(
                f,
                "SparseIntMatrix {}x{} ({} nonzeros)",
                self.rows,
                self.cols,
                self.nnz()
            )
        }
    }
}
