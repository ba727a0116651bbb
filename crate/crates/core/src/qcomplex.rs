//! MacLane's cubical Q-construction for finite abelian groups.
//!
//! `Q'_n(A)` is free on all functions `C_n -> A` from the vertices of the
//! `n`-cube. A function is degenerate when one of its `2n` facet restrictions
//! is constantly zero; degenerate functions span the subcomplex `N_n`, so
//! `Q_n(A) = Q'_n(A) / N_n(A)` is free on the non-degenerate functions and no
//! linear algebra is needed to form the quotient.
//!
//! Cube vertices are bitmasks with coordinate 1 in the lowest bit. A function
//! is stored as its value table indexed by vertex, each value an element index
//! of the group. A basis is the sorted list of table codes, where the code
//! reads the table as a base-`|A|` numeral with vertex 0 most significant, so
//! numeric order on codes is lexicographic order on tables.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::abgroup::{FinAbGroup, GroupArith, RingTable};
use crate::error::{Error, Result};
use crate::intlinalg::{FPAbelianGroup, FPComplex, SparseIntMatrix};

/// Default cap on enumerated cube functions per degree.
pub const DEFAULT_BUDGET: u64 = 100_000_000;

const CHUNK: u64 = 1 << 15;

/// Inserts `bit` at coordinate `i` (1-based) of a vertex of `C_n`.
pub fn insert_coordinate(vertex: u32, n: usize, i: usize, bit: u8) -> Result<u32> {
    if i == 0 || i > n + 1 {
        return Err(Error::Position {
            position: i,
            max: n + 1,
        });
    }
    if n >= 31 || vertex >> n != 0 || bit > 1 {
        return Err(Error::Domain(format!(
            "{vertex:#b} with bit {bit} is not a vertex of C_{n}"
        )));
    }
    Ok(insert_bit(vertex, i, bit))
}

#[inline]
fn insert_bit(vertex: u32, i: usize, bit: u8) -> u32 {
    let low = vertex & ((1 << (i - 1)) - 1);
    let high = vertex >> (i - 1);
    low | ((bit as u32) << (i - 1)) | (high << i)
}

/// The cube `C_n = {0,1}^n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Cube {
    n: usize,
}

impl Cube {
    pub fn new(n: usize) -> Self {
        Cube { n }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn vertex_count(&self) -> usize {
        1 << self.n
    }

    pub fn vertices(&self) -> impl Iterator<Item = u32> {
        0..(1u32 << self.n)
    }

    /// Vertex as a coordinate tuple `(e_1, ..., e_n)`.
    pub fn coordinates(&self, vertex: u32) -> Vec<u8> {
        (0..self.n).map(|k| ((vertex >> k) & 1) as u8).collect()
    }
}

/// A function `C_n -> A`, values given as element indices.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CubeFunction {
    n: usize,
    values: Vec<u32>,
}

impl CubeFunction {
    pub fn new(n: usize, values: Vec<u32>) -> Result<Self> {
        if values.len() != 1 << n {
            return Err(Error::Dimension(format!(
                "a function on C_{n} needs {} values, got {}",
                1 << n,
                values.len()
            )));
        }
        Ok(CubeFunction { n, values })
    }

    pub fn constant(n: usize, value: u32) -> Self {
        CubeFunction {
            n,
            values: vec![value; 1 << n],
        }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn values(&self) -> &[u32] {
        &self.values
    }

    pub fn value(&self, vertex: u32) -> u32 {
        self.values[vertex as usize]
    }

    pub fn is_degenerate(&self) -> bool {
        is_degenerate(&self.values, self.n)
    }

    /// Restriction along the facet inclusion inserting `bit` at coordinate `i`.
    pub fn face(&self, i: usize, bit: u8) -> CubeFunction {
        CubeFunction {
            n: self.n - 1,
            values: face_values(&self.values, self.n, i, bit),
        }
    }
}

fn face_values(values: &[u32], n: usize, i: usize, bit: u8) -> Vec<u32> {
    (0..1u32 << (n - 1))
        .map(|e| values[insert_bit(e, i, bit) as usize])
        .collect()
}

/// True when some facet restriction is constantly zero (for `n = 0`: the
/// value itself is zero).
pub fn is_degenerate(values: &[u32], n: usize) -> bool {
    if n == 0 {
        return values[0] == 0;
    }
    // seen[2*(i-1) + bit]: the facet {e_i = bit} has a nonzero value
    let mut seen = [false; 64];
    let mut remaining = 2 * n;
    for (v, &x) in values.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for k in 0..n {
            let slot = 2 * k + ((v >> k) & 1);
            if !seen[slot] {
                seen[slot] = true;
                remaining -= 1;
            }
        }
        if remaining == 0 {
            return false;
        }
    }
    true
}

/// `|A|^(2^n)`, saturating.
pub fn enumeration_size(group: &FinAbGroup, n: usize) -> u128 {
    let base = group.order() as u128;
    let mut acc = 1u128;
    for _ in 0..(1u64 << n.min(63)) {
        acc = acc.saturating_mul(base);
        if acc == u128::MAX || base <= 1 {
            break;
        }
    }
    acc
}

/// Ordered basis of `Q_n(A)`: the non-degenerate functions `C_n -> A`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QBasis {
    group: FinAbGroup,
    n: usize,
    codes: Vec<u64>,
}

impl QBasis {
    pub fn group(&self) -> &FinAbGroup {
        &self.group
    }

    pub fn degree(&self) -> usize {
        self.n
    }

    pub fn rank(&self) -> usize {
        self.codes.len()
    }

    pub fn codes(&self) -> &[u64] {
        &self.codes
    }

    fn radix(&self) -> u64 {
        self.group.order() as u64
    }

    pub fn encode(&self, values: &[u32]) -> u64 {
        let r = self.radix();
        values.iter().fold(0u64, |acc, &x| acc * r + x as u64)
    }

    pub fn decode(&self, code: u64) -> Vec<u32> {
        let r = self.radix();
        let mut values = vec![0u32; 1 << self.n];
        let mut rest = code;
        for slot in values.iter_mut().rev() {
            *slot = (rest % r) as u32;
            rest /= r;
        }
        values
    }

    pub fn values(&self, k: usize) -> Vec<u32> {
        self.decode(self.codes[k])
    }

    pub fn function(&self, k: usize) -> CubeFunction {
        CubeFunction {
            n: self.n,
            values: self.values(k),
        }
    }

    /// Position of a value table in the basis; `None` for degenerate tables.
    pub fn index_of_values(&self, values: &[u32]) -> Option<usize> {
        self.codes.binary_search(&self.encode(values)).ok()
    }

    pub fn index_of(&self, f: &CubeFunction) -> Option<usize> {
        if f.n != self.n {
            return None;
        }
        self.index_of_values(&f.values)
    }

    pub fn functions(&self) -> impl Iterator<Item = CubeFunction> + '_ {
        (0..self.rank()).map(|k| self.function(k))
    }
}

/// Enumerates the non-degenerate functions `C_n -> A`, refusing when
/// `|A|^(2^n)` exceeds `budget`.
pub fn q_basis(group: &FinAbGroup, n: usize, budget: u64) -> Result<QBasis> {
    let required = enumeration_size(group, n);
    if required > budget as u128 {
        return Err(Error::Budget {
            degree: n,
            required,
            budget,
        });
    }
    let total = required as u64;
    let radix = group.order() as u32;
    let width = 1usize << n;
    let chunks = total.div_ceil(CHUNK);
    let codes: Vec<u64> = (0..chunks)
        .into_par_iter()
        .flat_map_iter(|c| {
            let start = c * CHUNK;
            let end = (start + CHUNK).min(total);
            let mut digits = vec![0u32; width];
            let mut rest = start;
            for slot in digits.iter_mut().rev() {
                *slot = (rest % radix as u64) as u32;
                rest /= radix as u64;
            }
            let mut out = Vec::new();
            for code in start..end {
                if !is_degenerate(&digits, n) {
                    out.push(code);
                }
                // odometer increment, last vertex least significant
                for slot in digits.iter_mut().rev() {
                    *slot += 1;
                    if *slot < radix {
                        break;
                    }
                    *slot = 0;
                }
            }
            out
        })
        .collect();
    log::debug!(
        "Q_{n}({group}): {} of {total} functions non-degenerate",
        codes.len()
    );
    Ok(QBasis {
        group: group.clone(),
        n,
        codes,
    })
}

/// `δ'(f) = Σ_i (-1)^i (P_i - R_i - S_i) f` in `Q'_{n-1}(A)`, like terms
/// combined and zero coefficients dropped. Degenerate terms are kept.
pub fn delta_prime(arith: &GroupArith, f: &CubeFunction) -> Result<Vec<(CubeFunction, i64)>> {
    if f.n == 0 {
        return Err(Error::Domain("the differential starts in degree 1".into()));
    }
    let mut acc: BTreeMap<Vec<u32>, i64> = BTreeMap::new();
    for (values, c) in delta_terms(arith, &f.values, f.n) {
        *acc.entry(values).or_default() += c;
    }
    Ok(acc
        .into_iter()
        .filter(|(_, c)| *c != 0)
        .map(|(values, c)| (CubeFunction { n: f.n - 1, values }, c))
        .collect())
}

fn delta_terms(arith: &GroupArith, values: &[u32], n: usize) -> Vec<(Vec<u32>, i64)> {
    let mut out = Vec::with_capacity(3 * n);
    for i in 1..=n {
        let sign = if i % 2 == 0 { 1 } else { -1 };
        let r = face_values(values, n, i, 0);
        let s = face_values(values, n, i, 1);
        let p: Vec<u32> = r.iter().zip(&s).map(|(&a, &b)| arith.add(a, b)).collect();
        out.push((p, sign));
        out.push((r, -sign));
        out.push((s, -sign));
    }
    out
}

/// Matrix of `δ: Q_n(A) -> Q_{n-1}(A)` in the given bases.
pub fn delta_matrix(source: &QBasis, target: &QBasis) -> Result<SparseIntMatrix> {
    if source.n == 0 {
        return Err(Error::Domain("the differential starts in degree 1".into()));
    }
    if target.n + 1 != source.n || target.group != source.group {
        return Err(Error::Dimension(format!(
            "δ goes from degree {} to {}, got target degree {}",
            source.n,
            source.n - 1,
            target.n
        )));
    }
    let arith = GroupArith::new(&source.group);
    let columns: Vec<Vec<(usize, i64)>> = (0..source.rank())
        .into_par_iter()
        .map(|k| {
            delta_terms(&arith, &source.values(k), source.n)
                .into_iter()
                .filter_map(|(values, c)| target.index_of_values(&values).map(|row| (row, c)))
                .collect()
        })
        .collect();
    SparseIntMatrix::from_columns(target.rank(), columns)
}

/// A biadditive map `A x B -> C` as a table on element indices.
#[derive(Clone, Debug)]
pub struct BilinearMap {
    left: FinAbGroup,
    right: FinAbGroup,
    target: FinAbGroup,
    table: Vec<u32>,
}

impl BilinearMap {
    pub fn from_ring(ring: &RingTable) -> Self {
        let g = ring.additive().clone();
        BilinearMap {
            left: g.clone(),
            right: g.clone(),
            target: g,
            table: ring.table().to_vec(),
        }
    }

    /// Tabulates `f` and checks biadditivity on generators.
    pub fn from_fn(
        left: FinAbGroup,
        right: FinAbGroup,
        target: FinAbGroup,
        f: impl Fn(u32, u32) -> u32,
    ) -> Result<Self> {
        let (na, nb) = (left.order() as u32, right.order() as u32);
        let table = (0..na)
            .flat_map(|a| (0..nb).map(move |b| (a, b)))
            .map(|(a, b)| f(a, b))
            .collect();
        let map = BilinearMap {
            left,
            right,
            target,
            table,
        };
        for a in 0..na {
            for b in 0..nb {
                for j in 0..map.right.rank() {
                    let e = map.right.index_of(&map.right.generator(j))?;
                    let lhs = map.apply(a, map.right.add_idx(b, e));
                    if lhs != map.target.add_idx(map.apply(a, b), map.apply(a, e)) {
                        return Err(Error::Validation {
                            message: "map is not additive in its right argument".into(),
                            witness: vec![a as usize, b as usize, e as usize],
                        });
                    }
                }
                for j in 0..map.left.rank() {
                    let e = map.left.index_of(&map.left.generator(j))?;
                    let lhs = map.apply(map.left.add_idx(a, e), b);
                    if lhs != map.target.add_idx(map.apply(a, b), map.apply(e, b)) {
                        return Err(Error::Validation {
                            message: "map is not additive in its left argument".into(),
                            witness: vec![a as usize, e as usize, b as usize],
                        });
                    }
                }
            }
        }
        Ok(map)
    }

    #[inline]
    pub fn apply(&self, a: u32, b: u32) -> u32 {
        self.table[a as usize * self.right.order() + b as usize]
    }
}

/// Pointwise product over `C_n x C_m ≅ C_{n+m}`, coordinates of `f` first.
pub fn dixmier_values(f: &[u32], n: usize, g: &[u32], m: usize, mul: &BilinearMap) -> Vec<u32> {
    let mut h = vec![0u32; 1 << (n + m)];
    for (y, &gy) in g.iter().enumerate() {
        for (x, &fx) in f.iter().enumerate() {
            h[x | (y << n)] = mul.apply(fx, gy);
        }
    }
    h
}

pub fn dixmier_product(f: &CubeFunction, g: &CubeFunction, mul: &BilinearMap) -> CubeFunction {
    CubeFunction {
        n: f.n + g.n,
        values: dixmier_values(&f.values, f.n, &g.values, g.n, mul),
    }
}

/// Matrix of `Q_n(A) ⊗ Q_m(B) -> Q_{n+m}(C)`; the column of `[f_i] ⊗ [g_j]`
/// is `i * rank(B) + j`.
pub fn dixmier_matrix(
    a: &QBasis,
    b: &QBasis,
    c: &QBasis,
    mul: &BilinearMap,
) -> Result<SparseIntMatrix> {
    if c.n != a.n + b.n || a.group != mul.left || b.group != mul.right || c.group != mul.target {
        return Err(Error::Dimension(
            "Dixmier product bases do not match".into(),
        ));
    }
    let gs: Vec<Vec<u32>> = (0..b.rank()).map(|j| b.values(j)).collect();
    let columns: Vec<Vec<(usize, i64)>> = (0..a.rank())
        .into_par_iter()
        .flat_map_iter(|i| {
            let f = a.values(i);
            gs.iter()
                .map(|g| {
                    let h = dixmier_values(&f, a.n, g, b.n, mul);
                    c.index_of_values(&h)
                        .map(|row| vec![(row, 1)])
                        .unwrap_or_default()
                })
                .collect::<Vec<_>>()
        })
        .collect();
    SparseIntMatrix::from_columns(c.rank(), columns)
}

/// Matrix of `Q_0(A) -> A`, `[a] ↦ a`, with rows the invariant-factor
/// coordinates of `A`.
pub fn augmentation_matrix(basis: &QBasis) -> Result<SparseIntMatrix> {
    if basis.n != 0 {
        return Err(Error::Domain(
            "the augmentation is concentrated in degree 0".into(),
        ));
    }
    let g = &basis.group;
    let columns: Vec<Vec<(usize, i64)>> = (0..basis.rank())
        .map(|k| {
            let e = g.element(basis.values(k)[0]);
            e.coords()
                .iter()
                .enumerate()
                .map(|(r, &c)| (r, c as i64))
                .collect()
        })
        .collect();
    SparseIntMatrix::from_columns(g.rank(), columns)
}

/// A group homomorphism as a table on element indices.
#[derive(Clone, Debug)]
pub struct GroupHom {
    source: FinAbGroup,
    target: FinAbGroup,
    table: Vec<u32>,
}

impl GroupHom {
    pub fn from_fn(source: FinAbGroup, target: FinAbGroup, f: impl Fn(u32) -> u32) -> Result<Self> {
        let table: Vec<u32> = (0..source.order() as u32).map(f).collect();
        let hom = GroupHom {
            source,
            target,
            table,
        };
        let n = hom.source.order() as u32;
        for a in 0..n {
            for b in 0..n {
                let lhs = hom.apply(hom.source.add_idx(a, b));
                if lhs != hom.target.add_idx(hom.apply(a), hom.apply(b)) {
                    return Err(Error::Validation {
                        message: "map is not a homomorphism".into(),
                        witness: vec![a as usize, b as usize],
                    });
                }
            }
        }
        Ok(hom)
    }

    /// `U -> U ⊕ V`, `u ↦ (u, 0)`.
    pub fn inclusion_left(u: &FinAbGroup, v: &FinAbGroup) -> Result<Self> {
        let sum = u.direct_sum(v)?;
        let scale = v.order() as u32;
        GroupHom::from_fn(u.clone(), sum, |a| a * scale)
    }

    /// `V -> U ⊕ V`, `v ↦ (0, v)`.
    pub fn inclusion_right(u: &FinAbGroup, v: &FinAbGroup) -> Result<Self> {
        let sum = u.direct_sum(v)?;
        GroupHom::from_fn(v.clone(), sum, |b| b)
    }

    #[inline]
    pub fn apply(&self, a: u32) -> u32 {
        self.table[a as usize]
    }
}

/// Matrix of `Q_n(φ)` for a homomorphism `φ`, degenerate images dropped.
pub fn induced_matrix(hom: &GroupHom, source: &QBasis, target: &QBasis) -> Result<SparseIntMatrix> {
    if source.n != target.n || source.group != hom.source || target.group != hom.target {
        return Err(Error::Dimension("induced map bases do not match".into()));
    }
    let columns: Vec<Vec<(usize, i64)>> = (0..source.rank())
        .into_par_iter()
        .map(|k| {
            let image: Vec<u32> = source.values(k).iter().map(|&a| hom.apply(a)).collect();
            target
                .index_of_values(&image)
                .map(|row| vec![(row, 1)])
                .unwrap_or_default()
        })
        .collect();
    SparseIntMatrix::from_columns(target.rank(), columns)
}

/// `Q_n(U) ⊕ Q_n(V) -> Q_n(U ⊕ V)` induced by the two inclusions; columns of
/// `Q_n(U)` come first.
pub fn additivity_map(u: &QBasis, v: &QBasis, sum: &QBasis) -> Result<SparseIntMatrix> {
    let left = induced_matrix(&GroupHom::inclusion_left(&u.group, &v.group)?, u, sum)?;
    let right = induced_matrix(&GroupHom::inclusion_right(&u.group, &v.group)?, v, sum)?;
    left.hstack(&right)
}

/// Bases and differentials of `Q_*(A)` in degrees `0..=max_n`.
#[derive(Clone, Debug)]
pub struct QChainData {
    group: FinAbGroup,
    bases: Vec<QBasis>,
    deltas: Vec<SparseIntMatrix>,
}

impl QChainData {
    pub fn build(group: &FinAbGroup, max_n: usize, budget: u64) -> Result<Self> {
        let bases = (0..=max_n)
            .map(|n| q_basis(group, n, budget))
            .collect::<Result<Vec<_>>>()?;
        let deltas = (1..=max_n)
            .map(|n| delta_matrix(&bases[n], &bases[n - 1]))
            .collect::<Result<Vec<_>>>()?;
        QChainData::from_parts(group.clone(), bases, deltas)
    }

    /// Assembles precomputed pieces, checking shapes and `δ² = 0`.
    pub fn from_parts(
        group: FinAbGroup,
        bases: Vec<QBasis>,
        deltas: Vec<SparseIntMatrix>,
    ) -> Result<Self> {
        if bases.is_empty() || deltas.len() + 1 != bases.len() {
            return Err(Error::Dimension(
                "need one differential per positive degree".into(),
            ));
        }
        for (n, b) in bases.iter().enumerate() {
            if b.n != n || b.group != group {
                return Err(Error::Dimension(format!(
                    "basis in slot {n} has degree {}",
                    b.n
                )));
            }
        }
        for (k, d) in deltas.iter().enumerate() {
            if d.cols() != bases[k + 1].rank() || d.rows() != bases[k].rank() {
                return Err(Error::Dimension(format!("δ_{} has the wrong shape", k + 1)));
            }
            if k > 0 && !deltas[k - 1].mul(d)?.is_zero() {
                return Err(Error::NotAComplex(format!("δ_{} δ_{} ≠ 0", k, k + 1)));
            }
        }
        Ok(QChainData {
            group,
            bases,
            deltas,
        })
    }

    pub fn group(&self) -> &FinAbGroup {
        &self.group
    }

    pub fn max_degree(&self) -> usize {
        self.bases.len() - 1
    }

    pub fn basis(&self, n: usize) -> &QBasis {
        &self.bases[n]
    }

    pub fn bases(&self) -> &[QBasis] {
        &self.bases
    }

    /// `δ_n: Q_n -> Q_{n-1}` for `n >= 1`.
    pub fn delta(&self, n: usize) -> &SparseIntMatrix {
        &self.deltas[n - 1]
    }

    pub fn deltas(&self) -> &[SparseIntMatrix] {
        &self.deltas
    }

    /// `(Q_*, δ)` truncated at `max_degree`.
    pub fn complex(&self) -> Result<FPComplex> {
        let ranks: Vec<usize> = self.bases.iter().map(QBasis::rank).collect();
        FPComplex::free(0, &ranks, self.deltas.clone())
    }
}

/// `H_k(Q_*(A))`.
pub fn q_homology(group: &FinAbGroup, k: usize, budget: u64) -> Result<FPAbelianGroup> {
    QChainData::build(group, k + 1, budget)?
        .complex()?
        .homology(k)
}

/// For each `k <= max_k`, whether `Q(U) ⊕ Q(V) -> Q(U ⊕ V)` is an isomorphism on `H_k`.
pub fn additivity_isomorphisms(
    u: &FinAbGroup,
    v: &FinAbGroup,
    max_k: usize,
    budget: u64,
) -> Result<Vec<bool>> {
    let sum = u.direct_sum(v)?;
    let cu = QChainData::build(u, max_k + 1, budget)?;
    let cv = QChainData::build(v, max_k + 1, budget)?;
    let cs = QChainData::build(&sum, max_k + 1, budget)?;
    additivity_isomorphisms_from(&cu, &cv, &cs, max_k)
}

pub fn additivity_isomorphisms_from(
    cu: &QChainData,
    cv: &QChainData,
    cs: &QChainData,
    max_k: usize,
) -> Result<Vec<bool>> {
    let ranks: Vec<usize> = (0..=max_k + 1)
        .map(|n| cu.basis(n).rank() + cv.basis(n).rank())
        .collect();
    let diffs = (1..=max_k + 1)
        .map(|n| cu.delta(n).block_diag(cv.delta(n)))
        .collect();
    let source = FPComplex::free(0, &ranks, diffs)?;
    let target = cs.complex()?;
    (0..=max_k)
        .map(|k| {
            let map = additivity_map(cu.basis(k), cv.basis(k), cs.basis(k))?;
            crate::intlinalg::induces_isomorphism(&source, &target, &map, k)
        })
        .collect()
}
