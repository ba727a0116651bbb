use num_bigint::BigInt;

use super::fpgroup::FPAbelianGroup;
use super::int::{ext_gcd, sub_scaled, with_fallback, Checked, Int};
use super::matrix::SparseIntMatrix;
use super::snf::factors_of_dense;
use crate::error::{Error, Result};

/// Row-echelon basis of a lattice, built by inserting generators one at a
/// time with unimodular 2x2 steps.
///
/// Vectors have `head + tail` coordinates; only the head takes part in the
/// echelon structure. Generators whose head reduces to zero leave their tail
/// behind, which is how kernels are extracted.
pub(crate) struct Echelon<T> {
    head: usize,
    rows: Vec<Option<Vec<T>>>,
    leftovers: Vec<Vec<T>>,
    keep_leftovers: bool,
}

impl<T: Int> Echelon<T> {
    pub(crate) fn new(head: usize, keep_leftovers: bool) -> Self {
        Echelon {
            head,
            rows: vec![None; head],
            leftovers: Vec::new(),
            keep_leftovers,
        }
    }

    pub(crate) fn insert(&mut self, mut v: Vec<T>) -> Checked<()> {
        let mut start = 0;
        loop {
            let Some(r) = (start..self.head).find(|&i| !v[i].is_zero()) else {
                if self.keep_leftovers && v[self.head..].iter().any(|x| !x.is_zero()) {
                    self.leftovers.push(v.split_off(self.head));
                }
                return Ok(());
            };
            match &mut self.rows[r] {
                slot @ None => {
                    if v[r].is_negative() {
                        for x in &mut v[r..] {
                            *x = x.neg()?;
                        }
                    }
                    *slot = Some(v);
                    return Ok(());
                }
                Some(b) => {
                    if b[r].divides(&v[r]) {
                        let q = v[r].quot(&b[r])?;
                        sub_scaled(&mut v, &q, b, r)?;
                    } else {
                        let (g, s, t) = ext_gcd(&b[r], &v[r])?;
                        let (bq, vq) = (b[r].quot(&g)?, v[r].quot(&g)?);
                        let mut new_b = Vec::with_capacity(v.len());
                        let mut new_v = Vec::with_capacity(v.len());
                        for k in 0..v.len() {
                            if k < r {
                                new_b.push(T::zero());
                                new_v.push(T::zero());
                                continue;
                            }
                            let (x, y) = (&b[k], &v[k]);
                            new_b.push(s.mul(x)?.add(&t.mul(y)?)?);
                            new_v.push(vq.mul(x)?.sub(&bq.mul(y)?)?);
                        }
                        *b = new_b;
                        v = new_v;
                    }
                    start = r + 1;
                }
            }
        }
    }

    /// Basis vectors in order of their leading coordinate.
    pub(crate) fn basis(&self) -> impl Iterator<Item = (usize, &Vec<T>)> {
        self.rows
            .iter()
            .enumerate()
            .filter_map(|(r, b)| b.as_ref().map(|b| (r, b)))
    }

    pub(crate) fn rank(&self) -> usize {
        self.rows.iter().filter(|b| b.is_some()).count()
    }

    /// Coordinates of `v` (head only) in the basis, or `None` if `v` is not in the lattice.
    pub(crate) fn coordinates(&self, v: &[T]) -> Checked<Option<Vec<T>>> {
        let mut v = v[..self.head].to_vec();
        let mut coords = Vec::new();
        for (r, b) in self.basis() {
            if v[..r].iter().any(|x| !x.is_zero()) {
                return Ok(None);
            }
            if !b[r].divides(&v[r]) {
                return Ok(None);
            }
            let q = v[r].quot(&b[r])?;
            if !q.is_zero() {
                sub_scaled(&mut v, &q, &b[..self.head], r)?;
            }
            coords.push(q);
        }
        Ok(v.iter().all(Int::is_zero).then_some(coords))
    }
}

fn echelon_of<T: Int>(gens: &SparseIntMatrix) -> Checked<Echelon<T>> {
    let mut e = Echelon::new(gens.rows(), false);
    for j in 0..gens.cols() {
        if !gens.column(j).is_empty() {
            e.insert(gens.dense_column(j)?)?;
        }
    }
    Ok(e)
}

/// Echelon basis of the lattice spanned by the columns of `gens`.
pub fn column_lattice_basis(gens: &SparseIntMatrix) -> SparseIntMatrix {
    fn run<T: Int>(gens: &SparseIntMatrix) -> Checked<SparseIntMatrix> {
        let e = echelon_of::<T>(gens)?;
        let cols: Vec<Vec<T>> = e.basis().map(|(_, b)| b.clone()).collect();
        Ok(SparseIntMatrix::from_dense_columns(gens.rows(), &cols))
    }
    with_fallback(|| run::<i64>(gens), || run::<BigInt>(gens))
}

/// A basis of `{x : A x = 0}`, as the columns of the returned matrix.
pub fn kernel_basis(a: &SparseIntMatrix) -> SparseIntMatrix {
    fn run<T: Int>(a: &SparseIntMatrix) -> Checked<SparseIntMatrix> {
        let (rows, cols) = (a.rows(), a.cols());
        let mut e = Echelon::new(rows, true);
        for j in 0..cols {
            let mut v = vec![T::zero(); rows + cols];
            for (i, x) in a.column(j) {
                v[*i] = T::from_big(x)?;
            }
            v[rows + j] = T::one();
            e.insert(v)?;
        }
        Ok(SparseIntMatrix::from_dense_columns(cols, &e.leftovers))
    }
    with_fallback(|| run::<i64>(a), || run::<BigInt>(a))
}

/// First column of `x` outside the column lattice of `r`, if any.
pub fn columns_in_lattice(r: &SparseIntMatrix, x: &SparseIntMatrix) -> Result<Option<usize>> {
    if r.rows() != x.rows() {
        return Err(Error::Dimension(format!(
            "{} vs {} rows",
            r.rows(),
            x.rows()
        )));
    }
    if r.is_monomial() {
        // diagonal-style relations: entrywise divisibility
        let mut modulus: Vec<Option<&BigInt>> = vec![None; r.rows()];
        for col in r.columns() {
            if let [(i, d)] = col {
                modulus[*i] = Some(d);
            }
        }
        for (j, col) in x.columns().enumerate() {
            let ok = col
                .iter()
                .all(|(i, v)| modulus[*i].is_some_and(|d| Int::divides(d, v)));
            if !ok {
                return Ok(Some(j));
            }
        }
        return Ok(None);
    }
    fn run<T: Int>(r: &SparseIntMatrix, x: &SparseIntMatrix) -> Checked<Option<usize>> {
        let e = echelon_of::<T>(r)?;
        for j in 0..x.cols() {
            if e.coordinates(&x.dense_column::<T>(j)?)?.is_none() {
                return Ok(Some(j));
            }
        }
        Ok(None)
    }
    Ok(with_fallback(|| run::<i64>(r, x), || run::<BigInt>(r, x)))
}

/// Coordinates of each column of `x` in the echelon basis of `lattice(gens)`
/// (as returned by [`column_lattice_basis`]). Fails with the first column
/// that is not in the lattice.
pub fn express_in_basis(gens: &SparseIntMatrix, x: &SparseIntMatrix) -> Result<SparseIntMatrix> {
    if gens.rows() != x.rows() {
        return Err(Error::Dimension(format!(
            "{} vs {} rows",
            gens.rows(),
            x.rows()
        )));
    }
    fn run<T: Int>(
        gens: &SparseIntMatrix,
        x: &SparseIntMatrix,
    ) -> Checked<Result<SparseIntMatrix>> {
        let e = echelon_of::<T>(gens)?;
        let mut cols = Vec::with_capacity(x.cols());
        for j in 0..x.cols() {
            match e.coordinates(&x.dense_column::<T>(j)?)? {
                Some(c) => cols.push(c),
                None => return Ok(Err(Error::NotSublattice { column: j })),
            }
        }
        Ok(Ok(SparseIntMatrix::from_dense_columns(e.rank(), &cols)))
    }
    with_fallback(|| run::<i64>(gens, x), || run::<BigInt>(gens, x))
}

/// `lattice(k) / lattice(i)` in invariant-factor form.
///
/// Both arguments are generating sets (columns, possibly dependent). The
/// inclusion `lattice(i) ⊆ lattice(k)` is checked; on failure the error names
/// a column of `i` outside `lattice(k)`.
pub fn quotient_lattice(k: &SparseIntMatrix, i: &SparseIntMatrix) -> Result<FPAbelianGroup> {
    if k.rows() != i.rows() {
        return Err(Error::Dimension(format!(
            "{} vs {} rows",
            k.rows(),
            i.rows()
        )));
    }
    fn run<T: Int>(k: &SparseIntMatrix, i: &SparseIntMatrix) -> Checked<Result<FPAbelianGroup>> {
        let ke = echelon_of::<T>(k)?;
        let ie = echelon_of::<T>(i)?;
        let s = ke.rank();
        let mut coeffs: Vec<Vec<T>> = Vec::new();
        for (_, b) in ie.basis() {
            match ke.coordinates(b)? {
                Some(c) => coeffs.push(c),
                None => {
                    for j in 0..i.cols() {
                        if ke.coordinates(&i.dense_column::<T>(j)?)?.is_none() {
                            return Ok(Err(Error::NotSublattice { column: j }));
                        }
                    }
                    unreachable!("echelon basis vector outside the lattice of its generators");
                }
            }
        }
        // rows = basis of k, columns = generators of i
        let dense: Vec<Vec<T>> = (0..s)
            .map(|r| coeffs.iter().map(|c| c[r].clone()).collect())
            .collect();
        let factors = factors_of_dense(dense, s, coeffs.len())?;
        let rank = factors.len();
        let torsion: Vec<BigInt> = factors
            .iter()
            .map(Int::to_big)
            .filter(|f| *f != BigInt::from(1))
            .collect();
        Ok(Ok(FPAbelianGroup::from_invariants(s - rank, torsion)))
    }
    with_fallback(|| run::<i64>(k, i), || run::<BigInt>(k, i))
}
