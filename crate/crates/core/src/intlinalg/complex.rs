use super::fpgroup::FPAbelianGroup;
use super::lattice::{columns_in_lattice, kernel_basis, quotient_lattice};
use super::matrix::SparseIntMatrix;
use crate::error::{Error, Result};

/// A chain complex of finitely presented abelian groups on degrees `lo..=hi`.
///
/// Degree `n` is `Z^{k_n} / lattice(R_n)`; the differential `d_n` is given on
/// generators. The complex is zero below `lo`. Above `hi` it is unknown
/// (truncated) unless marked bounded, in which case it is zero there too.
#[derive(Clone, Debug)]
pub struct FPComplex {
    lo: usize,
    relations: Vec<SparseIntMatrix>,
    diffs: Vec<SparseIntMatrix>,
    bounded_above: bool,
}

impl FPComplex {
    /// `relations[j]` presents degree `lo + j`; `diffs[j]` is `d_{lo+j+1}`.
    pub fn new(
        lo: usize,
        relations: Vec<SparseIntMatrix>,
        diffs: Vec<SparseIntMatrix>,
    ) -> Result<Self> {
        if relations.is_empty() || diffs.len() + 1 != relations.len() {
            return Err(Error::Dimension(format!(
                "{} chain groups need {} differentials, got {}",
                relations.len(),
                relations.len().saturating_sub(1),
                diffs.len()
            )));
        }
        let c = FPComplex {
            lo,
            relations,
            diffs,
            bounded_above: false,
        };
        c.validate()?;
        Ok(c)
    }

    /// A complex of free groups `Z^{ranks[j]}` in degree `lo + j`.
    pub fn free(lo: usize, ranks: &[usize], diffs: Vec<SparseIntMatrix>) -> Result<Self> {
        let relations = ranks
            .iter()
            .map(|&k| SparseIntMatrix::zeros(k, 0))
            .collect();
        FPComplex::new(lo, relations, diffs)
    }

    /// Declares the complex zero above `hi`.
    pub fn bounded_above(mut self) -> Self {
        self.bounded_above = true;
        self
    }

    pub fn lo(&self) -> usize {
        self.lo
    }

    pub fn hi(&self) -> usize {
        self.lo + self.relations.len() - 1
    }

    fn slot(&self, n: usize) -> Result<usize> {
        if n < self.lo || n > self.hi() {
            return Err(Error::Window {
                degree: n,
                lo: self.lo,
                hi: self.hi(),
            });
        }
        Ok(n - self.lo)
    }

    /// Number of generators in degree `n`.
    pub fn generators(&self, n: usize) -> Result<usize> {
        Ok(self.relations[self.slot(n)?].rows())
    }

    pub fn relations(&self, n: usize) -> Result<&SparseIntMatrix> {
        Ok(&self.relations[self.slot(n)?])
    }

    /// `d_n`, or `None` at the bottom degree.
    pub fn differential(&self, n: usize) -> Result<Option<&SparseIntMatrix>> {
        let s = self.slot(n)?;
        Ok((s > 0).then(|| &self.diffs[s - 1]))
    }

    /// The presented group in degree `n`.
    pub fn chain_group(&self, n: usize) -> Result<FPAbelianGroup> {
        let r = self.relations(n)?;
        quotient_lattice(&SparseIntMatrix::identity(r.rows()), r)
    }

    fn validate(&self) -> Result<()> {
        for (j, d) in self.diffs.iter().enumerate() {
            let n = self.lo + j + 1;
            let (src, dst) = (&self.relations[j + 1], &self.relations[j]);
            if d.cols() != src.rows() || d.rows() != dst.rows() {
                return Err(Error::Dimension(format!(
                    "d_{n} is {}x{} between groups on {} and {} generators",
                    d.rows(),
                    d.cols(),
                    src.rows(),
                    dst.rows()
                )));
            }
            if let Some(col) = columns_in_lattice(dst, &d.mul(src)?)? {
                return Err(Error::NotAComplex(format!(
                    "d_{n} does not preserve relations (relation {col})"
                )));
            }
            if j > 0 {
                let dd = self.diffs[j - 1].mul(d)?;
                if let Some(col) = columns_in_lattice(&self.relations[j - 1], &dd)? {
                    return Err(Error::NotAComplex(format!(
                        "d_{} d_{n} is nonzero on generator {col}",
                        n - 1
                    )));
                }
            }
        }
        Ok(())
    }

    /// Generators of the cycle lattice `Z_n ⊆ Z^{k_n}`.
    pub fn cycles(&self, n: usize) -> Result<SparseIntMatrix> {
        let k = self.generators(n)?;
        let Some(d) = self.differential(n)? else {
            return Ok(SparseIntMatrix::identity(k));
        };
        let rel = self.relations(n - 1)?;
        if rel.cols() == 0 {
            return Ok(kernel_basis(d));
        }
        let stacked = d.hstack(&rel.scaled(&(-1).into()))?;
        let ker = kernel_basis(&stacked);
        Ok(ker.row_slice(0..k))
    }

    /// Generators of the boundary lattice `B_n = lattice(d_{n+1}) + lattice(R_n)`.
    pub fn boundaries(&self, n: usize) -> Result<SparseIntMatrix> {
        let rel = self.relations(n)?;
        if n < self.hi() {
            return self.diffs[n + 1 - self.lo - 1].hstack(rel);
        }
        if self.bounded_above {
            return Ok(rel.clone());
        }
        Err(Error::Window {
            degree: n + 1,
            lo: self.lo,
            hi: self.hi(),
        })
    }

    /// `H_n = Z_n / B_n` in canonical form.
    pub fn homology(&self, n: usize) -> Result<FPAbelianGroup> {
        let b = self.boundaries(n)?;
        let z = self.cycles(n)?;
        quotient_lattice(&z, &b)
    }
}

/// Whether the chain map with degree-`n` component `map` (on generators)
/// induces an isomorphism `H_n(source) -> H_n(target)`.
///
/// Finitely generated abelian groups are Hopfian, so this holds exactly when
/// the two homology groups are isomorphic and the induced map is onto.
pub fn induces_isomorphism(
    source: &FPComplex,
    target: &FPComplex,
    map: &SparseIntMatrix,
    n: usize,
) -> Result<bool> {
    if map.rows() != target.generators(n)? || map.cols() != source.generators(n)? {
        return Err(Error::Dimension(format!(
            "map is {}x{}, degree {n} groups have {} and {} generators",
            map.rows(),
            map.cols(),
            source.generators(n)?,
            target.generators(n)?
        )));
    }
    if source.homology(n)? != target.homology(n)? {
        return Ok(false);
    }
    let image = map.mul(&source.cycles(n)?)?;
    let covered = image.hstack(&target.boundaries(n)?)?;
    Ok(quotient_lattice(&target.cycles(n)?, &covered)?.is_trivial())
}

/// `H_n` of a complex of finitely presented groups.
pub fn homology_of_fp_complex(c: &FPComplex, n: usize) -> Result<FPAbelianGroup> {
    c.homology(n)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: usize, cols: usize, data: &[Vec<i64>]) -> SparseIntMatrix {
        SparseIntMatrix::from_dense(rows, cols, data)
    }

    #[test]
    fn multiplication_by_two() {
        let c = FPComplex::free(0, &[1, 1], vec![m(1, 1, &[vec![2]])])
            .unwrap()
            .bounded_above();
        assert_eq!(c.homology(0).unwrap().to_string(), "Z/2");
        assert_eq!(c.homology(1).unwrap().to_string(), "0");
        assert!(matches!(c.homology(2), Err(Error::Window { .. })));
    }

    #[test]
    fn zero_differential_between_torsion_groups() {
        let two = m(1, 1, &[vec![2]]);
        let c = FPComplex::new(0, vec![two.clone(), two], vec![m(1, 1, &[vec![0]])])
            .unwrap()
            .bounded_above();
        assert_eq!(c.homology(0).unwrap().to_string(), "Z/2");
        assert_eq!(c.homology(1).unwrap().to_string(), "Z/2");
    }

    #[test]
    fn projection_onto_torsion() {
        // Z --2--> Z --1--> Z/2
        let c = FPComplex::new(
            0,
            vec![
                m(1, 1, &[vec![2]]),
                SparseIntMatrix::zeros(1, 0),
                SparseIntMatrix::zeros(1, 0),
            ],
            vec![m(1, 1, &[vec![1]]), m(1, 1, &[vec![2]])],
        )
        .unwrap()
        .bounded_above();
        assert_eq!(c.homology(1).unwrap().to_string(), "0");
        assert_eq!(c.homology(0).unwrap().to_string(), "0");
        assert_eq!(c.homology(2).unwrap().to_string(), "0");
    }

    #[test]
    fn truncated_complex_refuses_top_degree() {
        let c = FPComplex::free(0, &[1, 1], vec![m(1, 1, &[vec![2]])]).unwrap();
        assert!(c.homology(0).is_ok());
        assert!(matches!(
            c.homology(1),
            Err(Error::Window { degree: 2, .. })
        ));
    }

    #[test]
    fn rejects_non_complexes() {
        let err = FPComplex::free(
            0,
            &[1, 1, 1],
            vec![m(1, 1, &[vec![1]]), m(1, 1, &[vec![1]])],
        );
        assert!(matches!(err, Err(Error::NotAComplex(_))));
        let err = FPComplex::new(
            0,
            vec![SparseIntMatrix::zeros(1, 0), m(1, 1, &[vec![2]])],
            vec![m(1, 1, &[vec![1]])],
        );
        assert!(matches!(err, Err(Error::NotAComplex(_))));
    }

    #[test]
    fn isomorphism_check() {
        let c = FPComplex::free(0, &[1, 1], vec![m(1, 1, &[vec![2]])])
            .unwrap()
            .bounded_above();
        assert!(induces_isomorphism(&c, &c, &SparseIntMatrix::identity(1), 0).unwrap());
        assert!(!induces_isomorphism(&c, &c, &m(1, 1, &[vec![2]]), 0).unwrap());
        assert!(induces_isomorphism(&c, &c, &m(1, 1, &[vec![3]]), 0).unwrap());
    }
}
