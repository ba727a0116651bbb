//! Hochschild homology of the chain algebra `Q_*(R)` with coefficients in an
//! `R`-bimodule `M` placed in degree 0.
//!
//! Bar level `p`, internal degree `q` is `M ⊗ Q_{q_1} ⊗ ... ⊗ Q_{q_p}` summed
//! over compositions of `q`, presented as one copy of `M` per tensor of basis
//! cube functions. Faces come from the `χ`-images of the `Δ^op` faces: each
//! target slot multiplies its ordered fiber, and the fiber through the `M`
//! slot acts on `M` from both sides through the augmentation. The total
//! differential on bidegree `(p, q)` is `D = b + (-1)^p d_int`.

use std::collections::HashMap;

use num_bigint::BigInt;
use rayon::prelude::*;

use crate::abgroup::{BimoduleTable, FinAbGroup, RingTable};
use crate::abop::{face_morphisms, ABMorphism};
use crate::error::{Error, Result};
use crate::intlinalg::{FPAbelianGroup, FPComplex, SparseIntMatrix};
use crate::qcomplex::{dixmier_values, BilinearMap, QChainData};

/// All compositions of `q` into `p` nonnegative parts, lexicographically.
pub fn compositions(q: usize, p: usize) -> Vec<Vec<usize>> {
    fn go(q: usize, p: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if p == 0 {
            if q == 0 {
                out.push(prefix.clone());
            }
            return;
        }
        if p == 1 {
            prefix.push(q);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for first in 0..=q {
            prefix.push(first);
            go(q - first, p - 1, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    go(q, p, &mut Vec::new(), &mut out);
    out
}

/// One generator of a bar term: an `M` generator and a basis index per factor.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BarGenerator {
    pub degrees: Vec<usize>,
    pub m_generator: usize,
    pub factors: Vec<usize>,
}

/// Basis bookkeeping for `M ⊗ Q_{q_1} ⊗ ... ⊗ Q_{q_p}`.
#[derive(Clone, Debug)]
pub struct BarTerm {
    p: usize,
    q: usize,
    m_orders: Vec<u64>,
    compositions: Vec<Vec<usize>>,
    factor_ranks: Vec<Vec<usize>>,
    offsets: Vec<usize>,
    lookup: HashMap<Vec<usize>, usize>,
    rank: usize,
}

impl BarTerm {
    fn new(p: usize, q: usize, m_orders: &[u64], q_ranks: &[usize]) -> Self {
        // Level 0 is M alone, which sits in internal degree 0.
        let compositions = if p == 0 && q > 0 {
            Vec::new()
        } else {
            compositions(q, p)
        };
        let mut offsets = Vec::with_capacity(compositions.len());
        let mut factor_ranks = Vec::with_capacity(compositions.len());
        let mut lookup = HashMap::new();
        let mut rank = 0;
        for (c, comp) in compositions.iter().enumerate() {
            let ranks: Vec<usize> = comp.iter().map(|&d| q_ranks[d]).collect();
            offsets.push(rank);
            lookup.insert(comp.clone(), c);
            rank += m_orders.len() * ranks.iter().product::<usize>();
            factor_ranks.push(ranks);
        }
        BarTerm {
            p,
            q,
            m_orders: m_orders.to_vec(),
            compositions,
            factor_ranks,
            offsets,
            lookup,
            rank,
        }
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn factor_degrees(&self) -> &[Vec<usize>] {
        &self.compositions
    }

    /// Number of generators, i.e. copies of `M`'s cyclic factors.
    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Number of copies of `M`.
    pub fn summands(&self) -> usize {
        if self.m_orders.is_empty() {
            return self
                .factor_ranks
                .iter()
                .map(|r| r.iter().product::<usize>())
                .sum();
        }
        self.rank / self.m_orders.len()
    }

    pub fn index_of(&self, g: &BarGenerator) -> Option<usize> {
        let c = *self.lookup.get(&g.degrees)?;
        let ranks = &self.factor_ranks[c];
        if g.m_generator >= self.m_orders.len() || g.factors.len() != ranks.len() {
            return None;
        }
        let mut idx = g.m_generator;
        for (&k, &r) in g.factors.iter().zip(ranks) {
            if k >= r {
                return None;
            }
            idx = idx * r + k;
        }
        Some(self.offsets[c] + idx)
    }

    pub fn generator(&self, index: usize) -> BarGenerator {
        assert!(index < self.rank, "generator index out of range");
        let c = self.offsets.partition_point(|&o| o <= index) - 1;
        let ranks = &self.factor_ranks[c];
        let mut rest = index - self.offsets[c];
        let mut factors = vec![0; ranks.len()];
        for (slot, &r) in factors.iter_mut().zip(ranks).rev() {
            *slot = rest % r;
            rest /= r;
        }
        BarGenerator {
            degrees: self.compositions[c].clone(),
            m_generator: rest,
            factors,
        }
    }

    /// Diagonal relations killing `ord(e_j)` times each generator.
    pub fn relations(&self) -> SparseIntMatrix {
        let orders: Vec<BigInt> = (0..self.rank)
            .map(|k| BigInt::from(self.m_orders[self.generator(k).m_generator]))
            .collect();
        SparseIntMatrix::diagonal(&orders)
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct TotalOptions {
    /// Work modulo tensors with a unit factor `[1]`.
    pub normalized: bool,
}

/// The data shared by every bar term: the ring, the bimodule and `Q_*(R)`.
#[derive(Clone, Debug)]
pub struct HochschildData {
    ring: RingTable,
    bimodule: BimoduleTable,
    chains: QChainData,
    mul: BilinearMap,
    m_orders: Vec<u64>,
    m_generators: Vec<u32>,
    q_ranks: Vec<usize>,
    unit: Option<usize>,
}

impl HochschildData {
    /// Builds `Q_*(R)` through degree `max_q`.
    pub fn new(
        ring: &RingTable,
        bimodule: &BimoduleTable,
        max_q: usize,
        budget: u64,
    ) -> Result<Self> {
        let group = ring.additive();
        let mut bases = Vec::new();
        let mut deltas = Vec::new();
        for q in 0..=max_q {
            let b = crate::qcomplex::q_basis(group, q, budget).map_err(|e| Error::BarBudget {
                p: q.min(1),
                q,
                source: Box::new(e),
            })?;
            if q > 0 {
                deltas.push(crate::qcomplex::delta_matrix(&b, &bases[q - 1])?);
            }
            bases.push(b);
        }
        let chains = QChainData::from_parts(group.clone(), bases, deltas)?;
        HochschildData::from_chains(ring, bimodule, chains)
    }

    /// Uses precomputed (for instance cached) chain data for `Q_*(R)`.
    pub fn from_chains(
        ring: &RingTable,
        bimodule: &BimoduleTable,
        chains: QChainData,
    ) -> Result<Self> {
        if chains.group() != ring.additive() {
            return Err(Error::MismatchedGroups);
        }
        let m = bimodule.group();
        let m_generators = (0..m.rank())
            .map(|j| m.index_of(&m.generator(j)))
            .collect::<Result<Vec<_>>>()?;
        let q_ranks = chains.bases().iter().map(|b| b.rank()).collect();
        let unit = chains.basis(0).index_of_values(&[ring.one_idx()]);
        Ok(HochschildData {
            ring: ring.clone(),
            bimodule: bimodule.clone(),
            mul: BilinearMap::from_ring(ring),
            m_orders: m.factors().to_vec(),
            m_generators,
            q_ranks,
            unit,
            chains,
        })
    }

    pub fn ring(&self) -> &RingTable {
        &self.ring
    }

    pub fn bimodule(&self) -> &BimoduleTable {
        &self.bimodule
    }

    pub fn chains(&self) -> &QChainData {
        &self.chains
    }

    pub fn max_q(&self) -> usize {
        self.chains.max_degree()
    }

    pub fn bar_term(&self, p: usize, q: usize) -> Result<BarTerm> {
        if p > 0 && q > self.max_q() {
            return Err(Error::BarBudget {
                p,
                q,
                source: Box::new(Error::Domain(format!(
                    "Q_* was built through degree {}",
                    self.max_q()
                ))),
            });
        }
        Ok(BarTerm::new(p, q, &self.m_orders, &self.q_ranks))
    }

    fn m_group(&self) -> &FinAbGroup {
        self.bimodule.group()
    }

    /// Applies an `AB`-morphism out of `({0..p}, {0})` to one generator,
    /// returning the image as coefficients on target generators.
    fn apply_morphism(
        &self,
        f: &ABMorphism,
        g: &BarGenerator,
        target: &BarTerm,
    ) -> Vec<(usize, i64)> {
        let p = g.factors.len();
        let slot_degree = |s: usize| if s == 0 { 0 } else { g.degrees[s - 1] };

        // Koszul sign of listing the slots fiber by fiber.
        let order: Vec<usize> = f.fibers().iter().flatten().copied().collect();
        let mut odd = false;
        for a in 0..order.len() {
            for b in a + 1..order.len() {
                if order[a] > order[b]
                    && slot_degree(order[a]) % 2 == 1
                    && slot_degree(order[b]) % 2 == 1
                {
                    odd = !odd;
                }
            }
        }
        let sign = if odd { -1 } else { 1 };

        // The M slot: degree-0 factors act through the augmentation.
        let base = f.fiber(0);
        let at = base
            .iter()
            .position(|&s| s == 0)
            .expect("base fiber contains the base point");
        let ring_value = |slots: &[usize]| -> Option<u32> {
            let mut r = self.ring.one_idx();
            for &s in slots {
                if slot_degree(s) != 0 {
                    return None;
                }
                r = self
                    .ring
                    .mul_idx(r, self.chains.basis(0).values(g.factors[s - 1])[0]);
            }
            Some(r)
        };
        let (Some(left), Some(right)) = (ring_value(&base[..at]), ring_value(&base[at + 1..]))
        else {
            return Vec::new();
        };
        let m = self.m_generators[g.m_generator];
        let m = self
            .bimodule
            .left_idx(left, self.bimodule.right_idx(m, right));
        let m = self.m_group().element(m);

        // The other slots multiply their fibers in order.
        let target_p = f.target().size() - 1;
        let mut degrees = Vec::with_capacity(target_p);
        let mut factors = Vec::with_capacity(target_p);
        for t in 1..=target_p {
            let (mut values, mut n) = (vec![self.ring.one_idx()], 0usize);
            for &s in f.fiber(t) {
                let d = slot_degree(s);
                let x = self.chains.basis(d).values(g.factors[s - 1]);
                values = dixmier_values(&values, n, &x, d, &self.mul);
                n += d;
            }
            if n > self.max_q() {
                return Vec::new();
            }
            match self.chains.basis(n).index_of_values(&values) {
                Some(k) => {
                    degrees.push(n);
                    factors.push(k);
                }
                None => return Vec::new(),
            }
        }
        debug_assert!(p >= target_p);

        let mut out = Vec::new();
        for (j, &c) in m.coords().iter().enumerate() {
            if c == 0 {
                continue;
            }
            let image = BarGenerator {
                degrees: degrees.clone(),
                m_generator: j,
                factors: factors.clone(),
            };
            let row = target
                .index_of(&image)
                .expect("face image lies in the target bar term");
            out.push((row, sign * c as i64));
        }
        out
    }

    /// Matrix of the `i`-th face `d_i` from bidegree `(p, q)` to `(p-1, q)`.
    pub fn face_matrix(&self, i: usize, p: usize, q: usize) -> Result<SparseIntMatrix> {
        let faces = face_morphisms(p)?;
        let face = faces
            .get(i)
            .ok_or_else(|| Error::Domain(format!("no face d_{i} at level {p}")))?;
        self.morphism_matrix(face, p, q)
    }

    /// Matrix of an arbitrary `AB`-morphism `({0..p}, {0}) -> ({0..p'}, {0})`
    /// on internal degree `q`.
    pub fn morphism_matrix(&self, f: &ABMorphism, p: usize, q: usize) -> Result<SparseIntMatrix> {
        if f.source().size() != p + 1 || f.target().size() == 0 {
            return Err(Error::Dimension(format!(
                "morphism does not start at level {p}"
            )));
        }
        let source = self.bar_term(p, q)?;
        let target = self.bar_term(f.target().size() - 1, q)?;
        let columns: Vec<Vec<(usize, i64)>> = (0..source.rank())
            .into_par_iter()
            .map(|k| self.apply_morphism(f, &source.generator(k), &target))
            .collect();
        SparseIntMatrix::from_columns(target.rank(), columns)
    }

    /// `b = Σ (-1)^i d_i` from `(p, q)` to `(p-1, q)`.
    pub fn bar_differential(&self, p: usize, q: usize) -> Result<SparseIntMatrix> {
        let source = self.bar_term(p, q)?;
        let target = self.bar_term(p - 1, q)?;
        let faces = face_morphisms(p)?;
        let columns: Vec<Vec<(usize, i64)>> = (0..source.rank())
            .into_par_iter()
            .map(|k| {
                let g = source.generator(k);
                let mut col = Vec::new();
                for (i, f) in faces.iter().enumerate() {
                    let s = if i % 2 == 0 { 1 } else { -1 };
                    col.extend(
                        self.apply_morphism(f, &g, &target)
                            .into_iter()
                            .map(|(r, c)| (r, s * c)),
                    );
                }
                col
            })
            .collect();
        SparseIntMatrix::from_columns(target.rank(), columns)
    }

    /// `d_int` from `(p, q)` to `(p, q-1)`, with Koszul signs.
    pub fn internal_differential(&self, p: usize, q: usize) -> Result<SparseIntMatrix> {
        if q == 0 {
            return Err(Error::Domain(
                "the internal differential starts in degree 1".into(),
            ));
        }
        let source = self.bar_term(p, q)?;
        let target = self.bar_term(p, q - 1)?;
        let columns: Vec<Vec<(usize, BigInt)>> = (0..source.rank())
            .into_par_iter()
            .map(|k| {
                let g = source.generator(k);
                let mut col = Vec::new();
                let mut passed = 0;
                for i in 0..p {
                    let d = g.degrees[i];
                    if d > 0 {
                        let sign = if passed % 2 == 0 { 1 } else { -1 };
                        for (row, c) in self.chains.delta(d).column(g.factors[i]) {
                            let mut image = g.clone();
                            image.degrees[i] = d - 1;
                            image.factors[i] = *row;
                            let r = target
                                .index_of(&image)
                                .expect("internal image lies in the target");
                            col.push((r, c * sign));
                        }
                    }
                    passed += d;
                }
                col
            })
            .collect();
        SparseIntMatrix::from_columns(target.rank(), columns)
    }

    /// Whether a generator has a unit factor `[1]`.
    fn is_degenerate(&self, g: &BarGenerator) -> bool {
        self.unit.is_some_and(|u| {
            g.degrees
                .iter()
                .zip(&g.factors)
                .any(|(&d, &k)| d == 0 && k == u)
        })
    }

    /// Total complex on degrees `0..=max_degree + 1`.
    pub fn total_complex(&self, max_degree: usize, options: TotalOptions) -> Result<TotalComplex> {
        let top = max_degree + 1;
        if top > 0 && top - 1 > self.max_q() {
            return Err(Error::BarBudget {
                p: 1,
                q: top - 1,
                source: Box::new(Error::Domain(format!(
                    "Q_* was built through degree {}",
                    self.max_q()
                ))),
            });
        }
        // Blocks of each total degree, ordered by bar level.
        let blocks: Vec<Vec<BarTerm>> = (0..=top)
            .map(|n| {
                (0..=n)
                    .map(|p| self.bar_term(p, n - p))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<_>>()?;
        let offsets: Vec<Vec<usize>> = blocks
            .iter()
            .map(|bs| {
                bs.iter()
                    .scan(0, |acc, b| {
                        let o = *acc;
                        *acc += b.rank();
                        Some(o)
                    })
                    .collect()
            })
            .collect();
        let sizes: Vec<usize> = blocks
            .iter()
            .map(|bs| bs.iter().map(BarTerm::rank).sum())
            .collect();

        let mut relations: Vec<SparseIntMatrix> = Vec::new();
        for bs in &blocks {
            let mut r = SparseIntMatrix::zeros(0, 0);
            for b in bs {
                r = r.block_diag(&b.relations());
            }
            relations.push(r);
        }

        let mut diffs = Vec::new();
        for n in 1..=top {
            let mut entries: Vec<Vec<(usize, BigInt)>> = vec![Vec::new(); sizes[n]];
            for p in 0..=n {
                let q = n - p;
                let col0 = offsets[n][p];
                if p >= 1 && blocks[n][p].rank() > 0 {
                    let b = self.bar_differential(p, q)?;
                    let row0 = offsets[n - 1][p - 1];
                    for (r, c, v) in b.entries() {
                        entries[col0 + c].push((row0 + r, v.clone()));
                    }
                }
                if q >= 1 && p >= 1 && blocks[n][p].rank() > 0 {
                    let d = self.internal_differential(p, q)?;
                    let row0 = offsets[n - 1][p];
                    let sign = BigInt::from(if p % 2 == 0 { 1 } else { -1 });
                    for (r, c, v) in d.entries() {
                        entries[col0 + c].push((row0 + r, v * &sign));
                    }
                }
            }
            diffs.push(SparseIntMatrix::from_columns(sizes[n - 1], entries)?);
        }

        let generators: Vec<Vec<BarGenerator>> = blocks
            .iter()
            .map(|bs| {
                bs.iter()
                    .flat_map(|b| (0..b.rank()).map(move |k| b.generator(k)))
                    .collect()
            })
            .collect();

        let (relations, diffs, generators) = if options.normalized {
            let keep: Vec<Vec<usize>> = generators
                .iter()
                .map(|gs| {
                    (0..gs.len())
                        .filter(|&k| !self.is_degenerate(&gs[k]))
                        .collect()
                })
                .collect();
            let relations = relations
                .iter()
                .zip(&keep)
                .map(|(r, k)| restrict(r, k, k))
                .collect();
            let diffs = diffs
                .iter()
                .enumerate()
                .map(|(j, d)| restrict(d, &keep[j], &keep[j + 1]))
                .collect();
            let generators = generators
                .into_iter()
                .zip(&keep)
                .map(|(gs, k)| k.iter().map(|&i| gs[i].clone()).collect())
                .collect();
            (relations, diffs, generators)
        } else {
            (relations, diffs, generators)
        };

        let complex = FPComplex::new(0, relations, diffs)?;
        Ok(TotalComplex {
            max_degree,
            complex,
            generators,
        })
    }
}

/// Keeps rows `rows` and columns `cols` of `m`, renumbered in order.
fn restrict(m: &SparseIntMatrix, rows: &[usize], cols: &[usize]) -> SparseIntMatrix {
    let mut new_row = vec![usize::MAX; m.rows()];
    for (i, &r) in rows.iter().enumerate() {
        new_row[r] = i;
    }
    let columns: Vec<Vec<(usize, BigInt)>> = cols
        .iter()
        .map(|&c| {
            m.column(c)
                .iter()
                .filter(|(r, _)| new_row[*r] != usize::MAX)
                .map(|(r, v)| (new_row[*r], v.clone()))
                .collect()
        })
        .collect();
    SparseIntMatrix::from_columns(rows.len(), columns).expect("rows were renumbered in range")
}

/// The total complex on the window `[0, max_degree + 1]`.
#[derive(Clone, Debug)]
pub struct TotalComplex {
    max_degree: usize,
    complex: FPComplex,
    generators: Vec<Vec<BarGenerator>>,
}

impl TotalComplex {
    pub fn max_degree(&self) -> usize {
        self.max_degree
    }

    pub fn complex(&self) -> &FPComplex {
        &self.complex
    }

    /// Generators of total degree `n`, in the order of the chain group.
    pub fn generators(&self, n: usize) -> &[BarGenerator] {
        &self.generators[n]
    }

    pub fn chain_group(&self, n: usize) -> Result<FPAbelianGroup> {
        self.complex.chain_group(n)
    }

    pub fn differential(&self, n: usize) -> Result<Option<&SparseIntMatrix>> {
        self.complex.differential(n)
    }

    pub fn homology(&self, n: usize) -> Result<FPAbelianGroup> {
        if n > self.max_degree {
            return Err(Error::Window {
                degree: n,
                lo: 0,
                hi: self.max_degree,
            });
        }
        self.complex.homology(n)
    }
}

/// Standalone bar term, building the `Q` bases it needs.
pub fn bar_term(
    ring: &RingTable,
    bimodule: &BimoduleTable,
    p: usize,
    q: usize,
    budget: u64,
) -> Result<BarTerm> {
    HochschildData::new(ring, bimodule, q, budget)?.bar_term(p, q)
}

pub fn total_complex(
    ring: &RingTable,
    bimodule: &BimoduleTable,
    max_degree: usize,
    budget: u64,
    options: TotalOptions,
) -> Result<TotalComplex> {
    HochschildData::new(ring, bimodule, max_degree, budget)?.total_complex(max_degree, options)
}

/// `HML_k(R, M)`.
pub fn hml(
    ring: &RingTable,
    bimodule: &BimoduleTable,
    k: usize,
    budget: u64,
) -> Result<FPAbelianGroup> {
    total_complex(ring, bimodule, k, budget, TotalOptions::default())?.homology(k)
}

/// `HML_0, ..., HML_max_degree` from a single total complex.
pub fn hml_range(
    ring: &RingTable,
    bimodule: &BimoduleTable,
    max_degree: usize,
    budget: u64,
    options: TotalOptions,
) -> Result<Vec<FPAbelianGroup>> {
    let total = total_complex(ring, bimodule, max_degree, budget, options)?;
    (0..=max_degree).map(|n| total.homology(n)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::abgroup::self_bimodule;
    use crate::qcomplex::DEFAULT_BUDGET;

    fn data(n: u64, max_q: usize) -> HochschildData {
        let r = RingTable::cyclic(n).unwrap();
        HochschildData::new(&r, &self_bimodule(&r), max_q, DEFAULT_BUDGET).unwrap()
    }

    #[test]
    fn composition_order() {
        assert_eq!(compositions(2, 2), vec![vec![0, 2], vec![1, 1], vec![2, 0]]);
        assert_eq!(compositions(0, 0), vec![Vec::<usize>::new()]);
        assert!(compositions(1, 0).is_empty());
        assert_eq!(compositions(3, 3).len(), 10);
    }

    #[test]
    fn bar_term_sizes() {
        let h = data(2, 2);
        assert_eq!(h.bar_term(0, 0).unwrap().summands(), 1);
        assert_eq!(h.bar_term(0, 1).unwrap().rank(), 0);
        assert_eq!(h.bar_term(1, 0).unwrap().summands(), 1);
        assert_eq!(h.bar_term(2, 2).unwrap().summands(), 15);
        let t = h.bar_term(2, 2).unwrap();
        for k in 0..t.rank() {
            assert_eq!(t.index_of(&t.generator(k)), Some(k));
        }
    }

    #[test]
    fn low_faces() {
        let h = data(2, 1);
        let d0 = h.face_matrix(0, 1, 0).unwrap();
        let d1 = h.face_matrix(1, 1, 0).unwrap();
        assert_eq!(d0, d1);
        assert!(h.bar_differential(1, 0).unwrap().is_zero());
        assert!(h.face_matrix(0, 1, 1).unwrap().is_zero());
        assert!(h.face_matrix(1, 1, 1).unwrap().is_zero());
    }

    #[test]
    fn middle_face_is_ring_product() {
        let h = data(4, 0);
        let d1 = h.face_matrix(1, 2, 0).unwrap();
        let source = h.bar_term(2, 0).unwrap();
        let b0 = h.chains().basis(0);
        for k in 0..source.rank() {
            let g = source.generator(k);
            let (a, b) = (b0.values(g.factors[0])[0], b0.values(g.factors[1])[0]);
            let ab = (a * b) % 4;
            let col = d1.column(k);
            if ab == 0 {
                assert!(col.is_empty());
            } else {
                let image = BarGenerator {
                    degrees: vec![0],
                    m_generator: 0,
                    factors: vec![b0.index_of_values(&[ab]).unwrap()],
                };
                assert_eq!(
                    col,
                    &[(
                        h.bar_term(1, 0).unwrap().index_of(&image).unwrap(),
                        BigInt::from(1)
                    )]
                );
            }
        }
    }

    #[test]
    fn f2_total_complex() {
        let h = data(2, 0);
        let t = h.total_complex(0, TotalOptions::default()).unwrap();
        assert_eq!(t.chain_group(0).unwrap().to_string(), "Z/2");
        assert_eq!(t.chain_group(1).unwrap().to_string(), "Z/2");
        assert!(t.differential(1).unwrap().unwrap().is_zero());
        assert_eq!(t.homology(0).unwrap().to_string(), "Z/2");
    }

    #[test]
    fn hml_of_f2() {
        let r = RingTable::cyclic(2).unwrap();
        let groups: Vec<String> = hml_range(
            &r,
            &self_bimodule(&r),
            2,
            DEFAULT_BUDGET,
            TotalOptions::default(),
        )
        .unwrap()
        .iter()
        .map(ToString::to_string)
        .collect();
        assert_eq!(groups, ["Z/2", "0", "Z/2"]);
    }

    #[test]
    fn zeroth_homology_is_the_ring() {
        for n in [2, 3, 4] {
            let r = RingTable::cyclic(n).unwrap();
            assert_eq!(
                hml(&r, &self_bimodule(&r), 0, DEFAULT_BUDGET)
                    .unwrap()
                    .to_string(),
                format!("Z/{n}")
            );
        }
    }

    #[test]
    fn normalized_agrees() {
        let h = data(2, 2);
        let plain = h.total_complex(2, TotalOptions::default()).unwrap();
        let norm = h
            .total_complex(2, TotalOptions { normalized: true })
            .unwrap();
        for n in 0..=2 {
            assert_eq!(plain.homology(n).unwrap(), norm.homology(n).unwrap());
        }
        assert!(norm.generators(2).len() < plain.generators(2).len());
    }

    /// Classical faces written out by hand: `d_0` is the right action, inner
    /// faces multiply neighbours, `d_p` is the wrap-around left action.
    fn classical_face(h: &HochschildData, i: usize, p: usize, q: usize) -> SparseIntMatrix {
        let source = h.bar_term(p, q).unwrap();
        let target = h.bar_term(p - 1, q).unwrap();
        let b0 = h.chains().basis(0);
        let ring = h.ring();
        let columns: Vec<Vec<(usize, i64)>> = (0..source.rank())
            .map(|k| {
                let g = source.generator(k);
                let m = h.m_generators[g.m_generator];
                let mut degrees = g.degrees.clone();
                let mut factors = g.factors.clone();
                let new_m = if i == 0 || i == p {
                    let s = if i == 0 { 0 } else { p - 1 };
                    if degrees[s] != 0 {
                        return vec![];
                    }
                    let a = b0.values(factors[s])[0];
                    degrees.remove(s);
                    factors.remove(s);
                    if i == 0 {
                        h.bimodule.right_idx(m, a)
                    } else {
                        h.bimodule.left_idx(a, m)
                    }
                } else {
                    let (d1, d2) = (degrees[i - 1], degrees[i]);
                    let x = h.chains().basis(d1).values(factors[i - 1]);
                    let y = h.chains().basis(d2).values(factors[i]);
                    let prod: Vec<u32> = {
                        let mut v = vec![0; 1 << (d1 + d2)];
                        for (b, &yb) in y.iter().enumerate() {
                            for (a, &xa) in x.iter().enumerate() {
                                v[a | (b << d1)] = ring.mul_idx(xa, yb);
                            }
                        }
                        v
                    };
                    let Some(kk) = h.chains().basis(d1 + d2).index_of_values(&prod) else {
                        return vec![];
                    };
                    degrees.splice(i - 1..=i, [d1 + d2]);
                    factors.splice(i - 1..=i, [kk]);
                    m
                };
                let coords = h.m_group().element(new_m).coords().to_vec();
                coords
                    .iter()
                    .enumerate()
                    .filter(|(_, &c)| c != 0)
                    .map(|(j, &c)| {
                        let image = BarGenerator {
                            degrees: degrees.clone(),
                            m_generator: j,
                            factors: factors.clone(),
                        };
                        (target.index_of(&image).unwrap(), c as i64)
                    })
                    .collect()
            })
            .collect();
        SparseIntMatrix::from_columns(target.rank(), columns).unwrap()
    }

    #[test]
    fn chi_faces_match_classical_faces() {
        let h = data(2, 2);
        for p in 1..=3 {
            for q in 0..=2 {
                for i in 0..=p {
                    assert_eq!(
                        h.face_matrix(i, p, q).unwrap(),
                        classical_face(&h, i, p, q),
                        "d_{i} at ({p},{q})"
                    );
                }
            }
        }
    }

    #[test]
    fn budget_errors_name_the_bar_term() {
        let r = RingTable::cyclic(2).unwrap();
        let err =
            total_complex(&r, &self_bimodule(&r), 3, 10, TotalOptions::default()).unwrap_err();
        assert!(matches!(err, Error::BarBudget { .. }), "{err}");
    }
}
