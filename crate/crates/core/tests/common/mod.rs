//! Independent oracles shared by the integration tests.
#![allow(dead_code)]

use std::collections::HashMap;

use maclane::abgroup::{self_bimodule, GroupArith};
use maclane::abgroup::{FinAbGroup, RingTable};
use maclane::abop::{chi, compose_ab, face_morphisms, DeltaOpMorphism};
use maclane::hochschild::{HochschildData, TotalOptions};
use maclane::intlinalg::SparseIntMatrix;
use maclane::qcomplex::{
    augmentation_matrix, delta_prime, dixmier_matrix, BilinearMap, CubeFunction, QChainData,
    DEFAULT_BUDGET,
};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

pub type Check = Result<String, String>;

// ---------------------------------------------------------------------------
// Invariant factors through determinantal divisors

fn det_i128(mut m: Vec<Vec<i128>>) -> i128 {
    // Bareiss fraction-free elimination
    let n = m.len();
    if n == 0 {
        return 1;
    }
    let mut sign = 1;
    let mut prev = 1i128;
    for k in 0..n - 1 {
        if m[k][k] == 0 {
            match (k + 1..n).find(|&r| m[r][k] != 0) {
                Some(r) => {
                    m.swap(k, r);
                    sign = -sign;
                }
                None => return 0,
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev;
            }
        }
        prev = m[k][k];
    }
    sign * m[n - 1][n - 1]
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    (0u32..1 << n)
        .filter(|s| s.count_ones() as usize == k)
        .map(|s| (0..n).filter(|i| s >> i & 1 == 1).collect())
        .collect()
}

/// Nonzero invariant factors as quotients of gcds of `k x k` minors.
pub fn invariant_factors_by_minors(a: &[Vec<i64>]) -> Vec<BigInt> {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut divisors = vec![BigInt::from(1)];
    for k in 1..=rows.min(cols) {
        let mut g = BigInt::zero();
        for rs in subsets(rows, k) {
            for cs in subsets(cols, k) {
                let minor = rs
                    .iter()
                    .map(|&r| cs.iter().map(|&c| a[r][c] as i128).collect())
                    .collect();
                g = g.gcd(&BigInt::from(det_i128(minor)));
            }
        }
        if g.is_zero() {
            break;
        }
        divisors.push(g);
    }
    divisors.windows(2).map(|w| &w[1] / &w[0]).collect()
}

// ---------------------------------------------------------------------------
// Dense F_p model of the Hochschild total complex of Q_*(F_p)

fn facet(f: &[u32], n: usize, i: usize, bit: usize) -> Vec<u32> {
    (0..1usize << (n - 1))
        .map(|w| {
            let low = w & ((1 << (i - 1)) - 1);
            let high = w >> (i - 1);
            f[low | bit << (i - 1) | high << i]
        })
        .collect()
}

fn nondegenerate(f: &[u32], n: usize) -> bool {
    if n == 0 {
        return f[0] != 0;
    }
    (1..=n).all(|i| (0..2).all(|b| facet(f, n, i, b).iter().any(|&x| x != 0)))
}

pub struct DenseQ {
    p: u32,
    bases: Vec<Vec<Vec<u32>>>,
    index: Vec<HashMap<Vec<u32>, usize>>,
}

impl DenseQ {
    pub fn new(p: u32, max_n: usize) -> Self {
        let mut bases = Vec::new();
        let mut index = Vec::new();
        for n in 0..=max_n {
            let width = 1usize << n;
            let mut basis = Vec::new();
            for code in 0..(p as u64).pow(width as u32) {
                let mut f = vec![0u32; width];
                let mut rest = code;
                for v in f.iter_mut() {
                    *v = (rest % p as u64) as u32;
                    rest /= p as u64;
                }
                if nondegenerate(&f, n) {
                    basis.push(f);
                }
            }
            index.push(
                basis
                    .iter()
                    .cloned()
                    .enumerate()
                    .map(|(k, f)| (f, k))
                    .collect(),
            );
            bases.push(basis);
        }
        DenseQ { p, bases, index }
    }

    pub fn rank(&self, n: usize) -> usize {
        self.bases[n].len()
    }

    fn delta(&self, n: usize, k: usize) -> Vec<(usize, i64)> {
        let f = &self.bases[n][k];
        let mut out = Vec::new();
        for i in 1..=n {
            let s = if i.is_multiple_of(2) { 1 } else { -1 };
            let r = facet(f, n, i, 0);
            let t = facet(f, n, i, 1);
            let sum: Vec<u32> = r.iter().zip(&t).map(|(a, b)| (a + b) % self.p).collect();
            for (g, c) in [(sum, s), (r, -s), (t, -s)] {
                if let Some(&j) = self.index[n - 1].get(&g) {
                    out.push((j, c));
                }
            }
        }
        out
    }

    fn product(&self, n: usize, a: usize, m: usize, b: usize) -> Option<usize> {
        let (f, g) = (&self.bases[n][a], &self.bases[m][b]);
        let mut h = vec![0u32; 1 << (n + m)];
        for (y, gy) in g.iter().enumerate() {
            for (x, fx) in f.iter().enumerate() {
                h[x | y << n] = fx * gy % self.p;
            }
        }
        self.index[n + m].get(&h).copied()
    }
}

type Gen = Vec<(usize, usize)>;

fn compositions(q: usize, p: usize) -> Vec<Vec<usize>> {
    if p == 0 {
        return if q == 0 { vec![vec![]] } else { vec![] };
    }
    (0..=q)
        .flat_map(|first| {
            compositions(q - first, p - 1)
                .into_iter()
                .map(move |mut rest| {
                    rest.insert(0, first);
                    rest
                })
        })
        .collect()
}

fn generators(q: &DenseQ, n: usize) -> Vec<Gen> {
    let mut out = vec![];
    if n == 0 {
        out.push(vec![]);
    }
    for p in 1..=n {
        for comp in compositions(n - p, p) {
            let mut acc: Vec<Gen> = vec![vec![]];
            for &d in &comp {
                acc = acc
                    .into_iter()
                    .flat_map(|g| {
                        (0..q.rank(d)).map(move |k| {
                            let mut g = g.clone();
                            g.push((d, k));
                            g
                        })
                    })
                    .collect();
            }
            out.extend(acc);
        }
    }
    out
}

fn total_differential(q: &DenseQ, g: &Gen) -> Vec<(Gen, i64)> {
    let p = g.len();
    let mut out = Vec::new();
    if p == 0 {
        return out;
    }
    let value = |(d, k): (usize, usize)| -> i64 {
        if d == 0 {
            q.bases[0][k][0] as i64
        } else {
            0
        }
    };
    // d_0: right action of the first factor
    let a = value(g[0]);
    if a != 0 {
        out.push((g[1..].to_vec(), a));
    }
    for i in 1..p {
        let s = if i.is_multiple_of(2) { 1 } else { -1 };
        let ((n, x), (m, y)) = (g[i - 1], g[i]);
        if n + m < q.bases.len() {
            if let Some(k) = q.product(n, x, m, y) {
                let mut h = g.clone();
                h.splice(i - 1..=i, [(n + m, k)]);
                out.push((h, s));
            }
        }
    }
    // d_p: left action of the last factor
    let a = value(g[p - 1]);
    if a != 0 {
        let s = if p.is_multiple_of(2) { 1 } else { -1 };
        out.push((g[..p - 1].to_vec(), s * a));
    }
    let outer = if p.is_multiple_of(2) { 1 } else { -1 };
    let mut passed = 0;
    for i in 0..p {
        let (d, k) = g[i];
        if d > 0 {
            let s = outer * if passed % 2 == 0 { 1 } else { -1 };
            for (j, c) in q.delta(d, k) {
                let mut h = g.clone();
                h[i] = (d - 1, j);
                out.push((h, s * c));
            }
        }
        passed += d;
    }
    out
}

fn rank_mod_p(mut rows: Vec<Vec<u32>>, p: u32) -> usize {
    let cols = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(r) = (rank..rows.len()).find(|&r| rows[r][c] != 0) else {
            continue;
        };
        rows.swap(rank, r);
        let inv = (1..p).find(|&x| x * rows[rank][c] % p == 1).unwrap();
        for v in rows[rank].iter_mut() {
            *v = *v * inv % p;
        }
        let pivot = rows[rank].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != rank && row[c] != 0 {
                let f = row[c];
                for (x, y) in row.iter_mut().zip(&pivot) {
                    *x = (*x + p * p - f * y % p) % p;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// `HML_n(F_p, F_p)` for `n <= max_degree`, as canonical strings, computed
/// with dense linear algebra over `F_p`.
pub fn dense_hml(p: u32, max_degree: usize) -> Vec<String> {
    let q = DenseQ::new(p, max_degree);
    let gens: Vec<Vec<Gen>> = (0..=max_degree + 1).map(|n| generators(&q, n)).collect();
    let index: Vec<HashMap<Gen, usize>> = gens
        .iter()
        .map(|gs| {
            gs.iter()
                .cloned()
                .enumerate()
                .map(|(k, g)| (g, k))
                .collect()
        })
        .collect();
    let mut ranks = vec![0usize; max_degree + 2];
    for n in 1..=max_degree + 1 {
        let mut rows = vec![vec![0u32; gens[n].len()]; gens[n - 1].len()];
        for (c, g) in gens[n].iter().enumerate() {
            for (h, v) in total_differential(&q, g) {
                let r = index[n - 1][&h];
                rows[r][c] = ((rows[r][c] as i64 + v).rem_euclid(p as i64)) as u32;
            }
        }
        ranks[n] = rank_mod_p(rows, p);
    }
    (0..=max_degree)
        .map(|n| {
            let dim = gens[n].len() - ranks[n] - ranks[n + 1];
            if dim == 0 {
                "0".to_string()
            } else {
                vec![format!("Z/{p}"); dim].join("+")
            }
        })
        .collect()
}

// ---------------------------------------------------------------------------
// Structural checks through the public matrix API

fn kron_identity_right(a: &SparseIntMatrix, k: usize) -> SparseIntMatrix {
    // a ⊗ I_k, tensor index i * k + j
    let cols = (0..a.cols() * k).map(|c| {
        let (i, j) = (c / k, c % k);
        a.column(i)
            .iter()
            .map(|(r, v)| (r * k + j, v.clone()))
            .collect::<Vec<_>>()
    });
    SparseIntMatrix::from_columns(a.rows() * k, cols.collect::<Vec<_>>()).unwrap()
}

fn kron_identity_left(k: usize, b: &SparseIntMatrix) -> SparseIntMatrix {
    // I_k ⊗ b
    let cols = (0..k * b.cols()).map(|c| {
        let (i, j) = (c / b.cols(), c % b.cols());
        b.column(j)
            .iter()
            .map(|(r, v)| (i * b.rows() + r, v.clone()))
            .collect::<Vec<_>>()
    });
    SparseIntMatrix::from_columns(k * b.rows(), cols.collect::<Vec<_>>()).unwrap()
}

fn groups_up_to_four() -> Vec<(FinAbGroup, usize)> {
    vec![
        (FinAbGroup::cyclic(2).unwrap(), 4),
        (FinAbGroup::cyclic(3).unwrap(), 3),
        (FinAbGroup::cyclic(4).unwrap(), 3),
        (FinAbGroup::new(vec![2, 2]).unwrap(), 3),
    ]
}

pub fn delta_squared() -> Check {
    for (g, max_n) in groups_up_to_four() {
        let chains = QChainData::build(&g, max_n, DEFAULT_BUDGET).map_err(|e| e.to_string())?;
        for n in 2..=max_n {
            if !chains.delta(n - 1).mul(chains.delta(n)).unwrap().is_zero() {
                return Err(format!("δ_{} δ_{n} ≠ 0 over {g}", n - 1));
            }
        }
    }
    Ok("Z/2 to degree 4; Z/3, Z/4, Z/2xZ/2 to degree 3".into())
}

pub fn n_stability() -> Check {
    for (g, _) in groups_up_to_four() {
        let arith = GroupArith::new(&g);
        let order = g.order() as u32;
        for n in 1..=2usize {
            let width = 1usize << n;
            for code in 0..(order as u64).pow(width as u32) {
                let f: Vec<u32> = (0..width)
                    .map(|v| ((code / (order as u64).pow(v as u32)) % order as u64) as u32)
                    .collect();
                if nondegenerate(&f, n) {
                    continue;
                }
                let terms = delta_prime(&arith, &CubeFunction::new(n, f.clone()).unwrap()).unwrap();
                if let Some((h, _)) = terms.iter().find(|(h, _)| nondegenerate(h.values(), n - 1)) {
                    return Err(format!(
                        "δ'({f:?}) over {g} has non-degenerate term {:?}",
                        h.values()
                    ));
                }
            }
        }
    }
    Ok("degenerate functions through degree 2, |A| <= 4".into())
}

pub fn leibniz() -> Check {
    for n in [2u64, 3, 4] {
        let ring = RingTable::cyclic(n).unwrap();
        let mul = BilinearMap::from_ring(&ring);
        let chains = QChainData::build(ring.additive(), 3, DEFAULT_BUDGET).unwrap();
        for a in 0..=3usize {
            for b in 0..=3 - a {
                if a + b == 0 {
                    continue;
                }
                let (qa, qb, qab) = (chains.basis(a), chains.basis(b), chains.basis(a + b));
                let lhs = chains
                    .delta(a + b)
                    .mul(&dixmier_matrix(qa, qb, qab, &mul).unwrap())
                    .unwrap();
                let mut rhs = SparseIntMatrix::zeros(lhs.rows(), lhs.cols());
                if a > 0 {
                    let m = dixmier_matrix(chains.basis(a - 1), qb, chains.basis(a + b - 1), &mul)
                        .unwrap();
                    let t = m
                        .mul(&kron_identity_right(chains.delta(a), qb.rank()))
                        .unwrap();
                    rhs = add(&rhs, &t);
                }
                if b > 0 {
                    let m = dixmier_matrix(qa, chains.basis(b - 1), chains.basis(a + b - 1), &mul)
                        .unwrap();
                    let t = m
                        .mul(&kron_identity_left(qa.rank(), chains.delta(b)))
                        .unwrap();
                    let sign = BigInt::from(if a % 2 == 0 { 1 } else { -1 });
                    rhs = add(&rhs, &t.scaled(&sign));
                }
                if lhs != rhs {
                    return Err(format!("Leibniz fails over Z/{n} in bidegree ({a}, {b})"));
                }
            }
        }
    }
    Ok("Z/2, Z/3, Z/4 at total degree <= 3".into())
}

fn add(a: &SparseIntMatrix, b: &SparseIntMatrix) -> SparseIntMatrix {
    let cols = (0..a.cols()).map(|c| {
        let mut v = a.column(c).to_vec();
        v.extend(b.column(c).iter().cloned());
        v
    });
    SparseIntMatrix::from_columns(a.rows(), cols.collect::<Vec<_>>()).unwrap()
}

pub fn associativity() -> Check {
    for n in [2u64, 4] {
        let ring = RingTable::cyclic(n).unwrap();
        let mul = BilinearMap::from_ring(&ring);
        let q = QChainData::build(ring.additive(), 3, DEFAULT_BUDGET).unwrap();
        for a in 0..=3usize {
            for b in 0..=3 - a {
                for c in 0..=3 - a - b {
                    let ab = dixmier_matrix(q.basis(a), q.basis(b), q.basis(a + b), &mul).unwrap();
                    let ab_c = dixmier_matrix(q.basis(a + b), q.basis(c), q.basis(a + b + c), &mul)
                        .unwrap();
                    let bc = dixmier_matrix(q.basis(b), q.basis(c), q.basis(b + c), &mul).unwrap();
                    let a_bc = dixmier_matrix(q.basis(a), q.basis(b + c), q.basis(a + b + c), &mul)
                        .unwrap();
                    let left = ab_c
                        .mul(&kron_identity_right(&ab, q.basis(c).rank()))
                        .unwrap();
                    let right = a_bc
                        .mul(&kron_identity_left(q.basis(a).rank(), &bc))
                        .unwrap();
                    if left != right {
                        return Err(format!(
                            "associativity fails over Z/{n} in degrees ({a}, {b}, {c})"
                        ));
                    }
                }
            }
        }
    }
    Ok("Z/2, Z/4 at total degree <= 3".into())
}

pub fn augmentation_monoidal() -> Check {
    for n in [2u64, 3, 4, 6] {
        let ring = RingTable::cyclic(n).unwrap();
        let mul = BilinearMap::from_ring(&ring);
        let q = QChainData::build(ring.additive(), 0, DEFAULT_BUDGET).unwrap();
        let b0 = q.basis(0);
        let eps = augmentation_matrix(b0).unwrap();
        let lhs = eps.mul(&dixmier_matrix(b0, b0, b0, &mul).unwrap()).unwrap();
        for i in 0..b0.rank() {
            for j in 0..b0.rank() {
                let (a, b) = (b0.values(i)[0] as u64, b0.values(j)[0] as u64);
                let got = lhs.get(0, i * b0.rank() + j);
                if got != BigInt::from(a * b % n) {
                    return Err(format!("ε([{a}][{b}]) = {got} in Z/{n}"));
                }
            }
        }
    }
    Ok("Z/2, Z/3, Z/4, Z/6".into())
}

/// `D_{n-1} D_n` vanishes modulo the relations of the target.
pub fn total_d_squared() -> Check {
    for (n, k) in [(2u64, 3usize), (3, 2), (4, 2)] {
        let ring = RingTable::cyclic(n).unwrap();
        let h = HochschildData::new(&ring, &self_bimodule(&ring), k, DEFAULT_BUDGET)
            .map_err(|e| e.to_string())?;
        let t = h
            .total_complex(k, TotalOptions::default())
            .map_err(|e| e.to_string())?;
        for d in 2..=k + 1 {
            let dd = t
                .differential(d - 1)
                .unwrap()
                .unwrap()
                .mul(t.differential(d).unwrap().unwrap())
                .unwrap();
            let bad = dd
                .entries()
                .find(|(_, _, v)| !(*v % BigInt::from(n)).is_zero())
                .map(|(r, c, _)| (r, c));
            if let Some((r, c)) = bad {
                return Err(format!(
                    "D² over Z/{n} is nonzero at ({r}, {c}) in degree {d}"
                ));
            }
        }
    }
    Ok("F_2 at K = 3; Z/3, Z/4 at K = 2".into())
}

pub fn simplicial_identities() -> Check {
    for p in 2..=5 {
        let outer = face_morphisms(p - 1).unwrap();
        let inner = face_morphisms(p).unwrap();
        for j in 1..=p {
            for i in 0..j {
                let lhs = compose_ab(&outer[i], &inner[j]).unwrap();
                let rhs = compose_ab(&outer[j - 1], &inner[i]).unwrap();
                if lhs != rhs {
                    return Err(format!("d_{i} d_{j} != d_{} d_{i} at level {p}", j - 1));
                }
            }
        }
    }
    Ok("levels 2..=5 with fiber orders".into())
}

fn random_monotone(rng: &mut StdRng, n: usize, m: usize) -> DeltaOpMorphism {
    let mut map = vec![0];
    let mut cur = 0;
    for _ in 0..n {
        cur = rng.gen_range(cur..=m + 1);
        map.push(cur);
    }
    map.push(m + 1);
    DeltaOpMorphism::new(n, m, map).unwrap()
}

pub fn chi_functoriality(seed: u64, trials: usize) -> Check {
    let mut rng = StdRng::seed_from_u64(seed);
    for _ in 0..trials {
        let (a, b, c) = (
            rng.gen_range(0..7),
            rng.gen_range(0..7),
            rng.gen_range(0..7),
        );
        let f = random_monotone(&mut rng, a, b);
        let g = random_monotone(&mut rng, b, c);
        let lhs = chi(&g.after(&f).unwrap());
        let rhs = compose_ab(&chi(&g), &chi(&f)).unwrap();
        if lhs != rhs {
            return Err(format!("chi fails on {:?} after {:?}", g.map(), f.map()));
        }
    }
    Ok(format!("{trials} random composable pairs"))
}
