use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::matrix::SparseIntMatrix;
use super::snf::invariant_factors;
use crate::error::Error;

/// A finitely generated abelian group `Z^free_rank ⊕ Z/t_1 ⊕ ... ⊕ Z/t_k`
/// with `t_1 | t_2 | ... | t_k` and every `t_i >= 2`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FPAbelianGroup {
    free_rank: usize,
    torsion: Vec<BigInt>,
}

impl FPAbelianGroup {
    pub fn zero() -> Self {
        FPAbelianGroup {
            free_rank: 0,
            torsion: vec![],
        }
    }

    pub fn free(rank: usize) -> Self {
        FPAbelianGroup {
            free_rank: rank,
            torsion: vec![],
        }
    }

    /// Canonicalizes arbitrary cyclic orders (zeros count as free summands,
    /// units are dropped).
    pub fn from_invariants(free_rank: usize, orders: Vec<BigInt>) -> Self {
        let mut free_rank = free_rank;
        let mut finite = Vec::new();
        for d in orders {
            let d = d.abs();
            if d.is_zero() {
                free_rank += 1;
            } else if !d.is_one() {
                finite.push(d);
            }
        }
        let chain = finite.windows(2).all(|w| (&w[1] % &w[0]).is_zero());
        let torsion = if chain {
            finite
        } else {
            invariant_factors(&SparseIntMatrix::diagonal(&finite))
                .into_iter()
                .filter(|d| !d.is_one())
                .collect()
        };
        FPAbelianGroup { free_rank, torsion }
    }

    pub fn cyclic(n: u64) -> Self {
        Self::from_invariants(0, vec![BigInt::from(n)])
    }

    pub fn free_rank(&self) -> usize {
        self.free_rank
    }

    pub fn torsion(&self) -> &[BigInt] {
        &self.torsion
    }

    pub fn is_trivial(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }

    /// Order of a finite group, `None` when there is a free summand.
    pub fn order(&self) -> Option<BigInt> {
        (self.free_rank == 0).then(|| self.torsion.iter().product())
    }

    pub fn direct_sum(&self, other: &FPAbelianGroup) -> FPAbelianGroup {
        let mut orders = self.torsion.clone();
        orders.extend(other.torsion.iter().cloned());
        FPAbelianGroup::from_invariants(self.free_rank + other.free_rank, orders)
    }
}

impl fmt::Display for FPAbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_trivial() {
            return write!(f, "0");
        }
        let mut parts: Vec<String> = vec!["Z".to_string(); self.free_rank];
        parts.extend(self.torsion.iter().map(|t| format!("Z/{t}")));
        write!(f, "{}", parts.join("+"))
    }
}

impl FromStr for FPAbelianGroup {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s == "0" {
            return Ok(FPAbelianGroup::zero());
        }
        let mut free = 0;
        let mut orders = Vec::new();
        for part in s.split('+') {
            match part.trim() {
                "Z" => free += 1,
                p => {
                    let n = p
                        .strip_prefix("Z/")
                        .and_then(|d| d.parse::<BigInt>().ok())
                        .filter(|n| *n >= BigInt::from(2))
                        .ok_or_else(|| Error::Parse(format!("bad group summand `{p}`")))?;
                    orders.push(n);
                }
            }
        }
        Ok(FPAbelianGroup::from_invariants(free, orders))
    }
}
