use num_bigint::BigInt;

use super::int::{with_fallback, Checked, Int};
use super::matrix::SparseIntMatrix;

/// Smith normal form `U * A * V = diag(factors)` with `factors[i] | factors[i+1]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SnfResult {
    pub rows: usize,
    pub cols: usize,
    /// Nonzero invariant factors, all positive, in divisibility order.
    pub factors: Vec<BigInt>,
    pub u: SparseIntMatrix,
    pub v: SparseIntMatrix,
}

impl SnfResult {
    pub fn rank(&self) -> usize {
        self.factors.len()
    }

    /// The `rows x cols` diagonal matrix of invariant factors.
    pub fn diagonal(&self) -> SparseIntMatrix {
        let mut d = SparseIntMatrix::zeros(self.rows, self.cols);
        for (i, f) in self.factors.iter().enumerate() {
            d.set(i, i, f.clone());
        }
        d
    }
}

struct Reduction<T> {
    a: Vec<Vec<T>>,
    u: Option<Vec<Vec<T>>>,
    v: Option<Vec<Vec<T>>>,
    rows: usize,
    cols: usize,
}

fn identity<T: Int>(n: usize) -> Vec<Vec<T>> {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { T::one() } else { T::zero() })
                .collect()
        })
        .collect()
}

impl<T: Int> Reduction<T> {
    fn new(a: Vec<Vec<T>>, rows: usize, cols: usize, track: bool) -> Self {
        Reduction {
            a,
            u: track.then(|| identity(rows)),
            v: track.then(|| identity(cols)),
            rows,
            cols,
        }
    }

    fn swap_rows(&mut self, i: usize, k: usize) {
        if i != k {
            self.a.swap(i, k);
            if let Some(u) = &mut self.u {
                u.swap(i, k);
            }
        }
    }

    fn swap_cols(&mut self, j: usize, k: usize) {
        if j != k {
            for row in &mut self.a {
                row.swap(j, k);
            }
            if let Some(v) = &mut self.v {
                for row in v {
                    row.swap(j, k);
                }
            }
        }
    }

    /// `row_i -= c * row_t`
    fn row_sub(&mut self, i: usize, c: &T, t: usize) -> Checked<()> {
        let (src, dst) = pick(&mut self.a, t, i);
        sub_row(dst, c, src)?;
        if let Some(u) = &mut self.u {
            let (src, dst) = pick(u, t, i);
            sub_row(dst, c, src)?;
        }
        Ok(())
    }

    /// `col_j -= c * col_t`
    fn col_sub(&mut self, j: usize, c: &T, t: usize) -> Checked<()> {
        for row in &mut self.a {
            if !row[t].is_zero() {
                row[j] = row[j].sub(&c.mul(&row[t])?)?;
            }
        }
        if let Some(v) = &mut self.v {
            for row in v {
                if !row[t].is_zero() {
                    row[j] = row[j].sub(&c.mul(&row[t])?)?;
                }
            }
        }
        Ok(())
    }

    fn negate_row(&mut self, t: usize) -> Checked<()> {
        for x in &mut self.a[t] {
            *x = x.neg()?;
        }
        if let Some(u) = &mut self.u {
            for x in &mut u[t] {
                *x = x.neg()?;
            }
        }
        Ok(())
    }

    /// Nonzero entry of least absolute value in the trailing block, ties to the
    /// smallest `(row, col)`.
    fn min_pivot(&self, t: usize) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize)> = None;
        for i in t..self.rows {
            for j in t..self.cols {
                let x = &self.a[i][j];
                if x.is_zero() {
                    continue;
                }
                let better = match best {
                    None => true,
                    Some((bi, bj)) => x.cmp_abs(&self.a[bi][bj]).is_lt(),
                };
                if better {
                    best = Some((i, j));
                }
            }
        }
        best
    }

    fn run(&mut self) -> Checked<Vec<T>> {
        let mut factors = Vec::new();
        for t in 0..self.rows.min(self.cols) {
            loop {
                let Some((pi, pj)) = self.min_pivot(t) else {
                    return Ok(factors);
                };
                self.swap_rows(t, pi);
                self.swap_cols(t, pj);
                let pivot = self.a[t][t].clone();
                let mut clean = true;
                for i in t + 1..self.rows {
                    if !self.a[i][t].is_zero() {
                        let q = self.a[i][t].quot(&pivot)?;
                        self.row_sub(i, &q, t)?;
                        clean &= self.a[i][t].is_zero();
                    }
                }
                for j in t + 1..self.cols {
                    if !self.a[t][j].is_zero() {
                        let q = self.a[t][j].quot(&pivot)?;
                        self.col_sub(j, &q, t)?;
                        clean &= self.a[t][j].is_zero();
                    }
                }
                if !clean {
                    continue;
                }
                let offender = (t + 1..self.rows)
                    .find(|&i| (t + 1..self.cols).any(|j| !pivot.divides(&self.a[i][j])));
                match offender {
                    Some(i) => {
                        let minus_one = T::one().neg()?;
                        self.row_sub(t, &minus_one, i)?;
                    }
                    None => break,
                }
            }
            if self.a[t][t].is_negative() {
                self.negate_row(t)?;
            }
            factors.push(self.a[t][t].clone());
        }
        Ok(factors)
    }
}

fn pick<T>(m: &mut [Vec<T>], src: usize, dst: usize) -> (&Vec<T>, &mut Vec<T>) {
    assert_ne!(src, dst);
    if src < dst {
        let (lo, hi) = m.split_at_mut(dst);
        (&lo[src], &mut hi[0])
    } else {
        let (lo, hi) = m.split_at_mut(src);
        (&hi[0], &mut lo[dst])
    }
}

fn sub_row<T: Int>(dst: &mut [T], c: &T, src: &[T]) -> Checked<()> {
    for (x, y) in dst.iter_mut().zip(src) {
        if !y.is_zero() {
            *x = x.sub(&c.mul(y)?)?;
        }
    }
    Ok(())
}

fn snf_as<T: Int>(a: &SparseIntMatrix) -> Checked<SnfResult> {
    let mut red = Reduction::new(a.dense_as::<T>()?, a.rows(), a.cols(), true);
    let factors = red.run()?;
    let to_sparse = |m: Vec<Vec<T>>, n: usize| {
        let cols: Vec<Vec<T>> = (0..n)
            .map(|j| m.iter().map(|row| row[j].clone()).collect())
            .collect();
        SparseIntMatrix::from_dense_columns(n, &cols)
    };
    Ok(SnfResult {
        rows: a.rows(),
        cols: a.cols(),
        factors: factors.iter().map(Int::to_big).collect(),
        u: to_sparse(red.u.take().unwrap(), a.rows()),
        v: to_sparse(red.v.take().unwrap(), a.cols()),
    })
}

/// Smith normal form with unimodular transforms.
pub fn snf(a: &SparseIntMatrix) -> SnfResult {
    with_fallback(|| snf_as::<i64>(a), || snf_as::<BigInt>(a))
}

pub(crate) fn factors_of_dense<T: Int>(
    a: Vec<Vec<T>>,
    rows: usize,
    cols: usize,
) -> Checked<Vec<T>> {
    Reduction::new(a, rows, cols, false).run()
}

/// Nonzero invariant factors only, without computing transforms.
pub fn invariant_factors(a: &SparseIntMatrix) -> Vec<BigInt> {
    let run = |dense: Checked<Vec<Vec<i64>>>| -> Checked<Vec<BigInt>> {
        let f = factors_of_dense(dense?, a.rows(), a.cols())?;
        Ok(f.iter().map(Int::to_big).collect())
    };
    with_fallback(
        || run(a.dense_as::<i64>()),
        || {
            let f = factors_of_dense(a.dense_as::<BigInt>()?, a.rows(), a.cols())?;
            Ok(f)
        },
    )
}
