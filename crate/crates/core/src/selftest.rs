//! Structural invariants checked at runtime by `maclane selftest`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use serde::Serialize;

use crate::abgroup::{self_bimodule, FinAbGroup, GroupArith, RingTable};
use crate::abop::{chi, compose_ab, face_morphisms, DeltaOpMorphism};
use crate::error::Result;
use crate::hochschild::{HochschildData, TotalOptions};
use crate::intlinalg::{invariant_factors, snf, SparseIntMatrix};
use crate::qcomplex::{
    delta_prime, dixmier_values, is_degenerate, q_homology, BilinearMap, CubeFunction, QChainData,
    DEFAULT_BUDGET,
};

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    fn from(name: &str, outcome: Result<std::result::Result<String, String>>) -> Self {
        let (passed, detail) = match outcome {
            Ok(Ok(d)) => (true, d),
            Ok(Err(d)) => (false, d),
            Err(e) => (false, e.to_string()),
        };
        Check {
            name: name.to_string(),
            passed,
            detail,
        }
    }
}

type Outcome = Result<std::result::Result<String, String>>;

fn small_groups() -> Vec<(FinAbGroup, usize)> {
    vec![
        (FinAbGroup::cyclic(2).unwrap(), 4),
        (FinAbGroup::cyclic(3).unwrap(), 3),
        (FinAbGroup::cyclic(4).unwrap(), 3),
        (FinAbGroup::new(vec![2, 2]).unwrap(), 3),
    ]
}

/// `δ² = 0` is asserted when the chain data is assembled.
pub fn check_delta_squared() -> Outcome {
    for (g, n) in small_groups() {
        QChainData::build(&g, n, DEFAULT_BUDGET)?;
    }
    Ok(Ok(
        "Z/2 through degree 4; Z/3, Z/4, Z/2 x Z/2 through degree 3".into(),
    ))
}

/// `δ'` maps degenerate functions to combinations of degenerate functions.
pub fn check_n_stability() -> Outcome {
    for (g, max_n) in small_groups() {
        let arith = GroupArith::new(&g);
        let radix = g.order() as u64;
        for n in 1..=max_n.min(2) {
            let width = 1usize << n;
            for code in 0..radix.pow(width as u32) {
                let mut values = vec![0u32; width];
                let mut rest = code;
                for v in values.iter_mut().rev() {
                    *v = (rest % radix) as u32;
                    rest /= radix;
                }
                if !is_degenerate(&values, n) {
                    continue;
                }
                let f = CubeFunction::new(n, values)?;
                if let Some((h, _)) = delta_prime(&arith, &f)?
                    .into_iter()
                    .find(|(h, _)| !h.is_degenerate())
                {
                    return Ok(Err(format!(
                        "δ'{:?} has non-degenerate term {:?} over {g}",
                        f.values(),
                        h.values()
                    )));
                }
            }
        }
    }
    Ok(Ok("exhaustive through degree 2".into()))
}

fn product_in(
    chains: &QChainData,
    mul: &BilinearMap,
    n: usize,
    f: usize,
    m: usize,
    g: usize,
) -> Option<usize> {
    let h = dixmier_values(
        &chains.basis(n).values(f),
        n,
        &chains.basis(m).values(g),
        m,
        mul,
    );
    chains.basis(n + m).index_of_values(&h)
}

/// `δ(fg) = δf·g + (-1)^|f| f·δg` on basis elements of total degree at most 3.
pub fn check_leibniz() -> Outcome {
    for n in [2u64, 3] {
        let ring = RingTable::cyclic(n)?;
        let mul = BilinearMap::from_ring(&ring);
        let chains = QChainData::build(ring.additive(), 3, DEFAULT_BUDGET)?;
        for total in 1..=3 {
            for a in 0..=total {
                let b = total - a;
                for f in 0..chains.basis(a).rank() {
                    for g in 0..chains.basis(b).rank() {
                        let mut lhs: BTreeMap<usize, BigInt> = BTreeMap::new();
                        if let Some(k) = product_in(&chains, &mul, a, f, b, g) {
                            for (r, c) in chains.delta(total).column(k) {
                                *lhs.entry(*r).or_default() += c;
                            }
                        }
                        let mut rhs: BTreeMap<usize, BigInt> = BTreeMap::new();
                        if a > 0 {
                            for (r, c) in chains.delta(a).column(f) {
                                if let Some(k) = product_in(&chains, &mul, a - 1, *r, b, g) {
                                    *rhs.entry(k).or_default() += c;
                                }
                            }
                        }
                        if b > 0 {
                            let sign = BigInt::from(if a % 2 == 0 { 1 } else { -1 });
                            for (r, c) in chains.delta(b).column(g) {
                                if let Some(k) = product_in(&chains, &mul, a, f, b - 1, *r) {
                                    *rhs.entry(k).or_default() += c * &sign;
                                }
                            }
                        }
                        lhs.retain(|_, v| *v != BigInt::from(0));
                        rhs.retain(|_, v| *v != BigInt::from(0));
                        if lhs != rhs {
                            return Ok(Err(format!(
                                "Leibniz fails over Z/{n} in degrees ({a}, {b}) at ({f}, {g})"
                            )));
                        }
                    }
                }
            }
        }
    }
    Ok(Ok("Z/2 and Z/3, total degree at most 3".into()))
}

/// `(fg)h = f(gh)` on basis elements of total degree at most 3.
pub fn check_associativity() -> Outcome {
    let ring = RingTable::cyclic(4)?;
    let mul = BilinearMap::from_ring(&ring);
    let chains = QChainData::build(ring.additive(), 3, DEFAULT_BUDGET)?;
    for a in 0..=3 {
        for b in 0..=3 - a {
            for c in 0..=3 - a - b {
                for f in 0..chains.basis(a).rank() {
                    for g in 0..chains.basis(b).rank() {
                        for h in 0..chains.basis(c).rank() {
                            let (x, y, z) = (
                                chains.basis(a).values(f),
                                chains.basis(b).values(g),
                                chains.basis(c).values(h),
                            );
                            let left = dixmier_values(
                                &dixmier_values(&x, a, &y, b, &mul),
                                a + b,
                                &z,
                                c,
                                &mul,
                            );
                            let right = dixmier_values(
                                &x,
                                a,
                                &dixmier_values(&y, b, &z, c, &mul),
                                b + c,
                                &mul,
                            );
                            if left != right {
                                return Ok(Err(format!(
                                    "degrees ({a}, {b}, {c}) at ({f}, {g}, {h})"
                                )));
                            }
                        }
                    }
                }
            }
        }
    }
    Ok(Ok("Z/4, total degree at most 3".into()))
}

/// `ε([a][b]) = ab` in degree 0.
pub fn check_augmentation_monoidal() -> Outcome {
    for n in [2u64, 3, 4, 6] {
        let ring = RingTable::cyclic(n)?;
        let mul = BilinearMap::from_ring(&ring);
        for a in 0..n as u32 {
            for b in 0..n as u32 {
                if dixmier_values(&[a], 0, &[b], 0, &mul) != vec![ring.mul_idx(a, b)] {
                    return Ok(Err(format!("ε([{a}][{b}]) ≠ {a}·{b} in Z/{n}")));
                }
            }
        }
    }
    Ok(Ok("Z/2, Z/3, Z/4, Z/6".into()))
}

/// `D² = 0` is asserted when the total complex is built.
pub fn check_total_differential() -> Outcome {
    for (n, k) in [(2u64, 3usize), (3, 2), (4, 2)] {
        let ring = RingTable::cyclic(n)?;
        HochschildData::new(&ring, &self_bimodule(&ring), k, DEFAULT_BUDGET)?
            .total_complex(k, TotalOptions::default())?;
    }
    Ok(Ok("F_2 at K = 3; Z/3, Z/4 at K = 2".into()))
}

pub fn check_simplicial_identities() -> Outcome {
    for p in 2..=5 {
        let outer = face_morphisms(p - 1)?;
        let inner = face_morphisms(p)?;
        for j in 1..=p {
            for i in 0..j {
                if compose_ab(&outer[i], &inner[j])? != compose_ab(&outer[j - 1], &inner[i])? {
                    return Ok(Err(format!("d_{i} d_{j} ≠ d_{} d_{i} at level {p}", j - 1)));
                }
            }
        }
    }
    Ok(Ok("levels 2 to 5, fiber orders included".into()))
}

/// A uniformly chosen endpoint-preserving monotone map `[n] -> [m]`.
pub fn random_delta_op(rng: &mut impl Rng, n: usize, m: usize) -> DeltaOpMorphism {
    let mut inner: Vec<usize> = (0..n).map(|_| rng.gen_range(0..=m + 1)).collect();
    inner.sort_unstable();
    let mut map = vec![0];
    map.extend(inner);
    map.push(m + 1);
    DeltaOpMorphism::new(n, m, map).expect("sorted interior values give a valid map")
}

pub fn check_chi_functoriality() -> Outcome {
    let mut rng = StdRng::seed_from_u64(0x5eed);
    for _ in 0..500 {
        let (a, b, c) = (
            rng.gen_range(0..6),
            rng.gen_range(0..6),
            rng.gen_range(0..6),
        );
        let f = random_delta_op(&mut rng, a, b);
        let g = random_delta_op(&mut rng, b, c);
        if chi(&g.after(&f)?) != compose_ab(&chi(&g), &chi(&f))? {
            return Ok(Err(format!("χ({:?} ∘ {:?})", g.map(), f.map())));
        }
    }
    Ok(Ok("500 random composable pairs".into()))
}

pub fn check_zeroth_q_homology() -> Outcome {
    for (g, _) in small_groups() {
        let h = q_homology(&g, 0, DEFAULT_BUDGET)?;
        let expected: Vec<BigInt> = invariant_factors(&SparseIntMatrix::diagonal(
            &g.factors()
                .iter()
                .map(|&d| BigInt::from(d))
                .collect::<Vec<_>>(),
        ))
        .into_iter()
        .filter(|d| *d != BigInt::from(1))
        .collect();
        if h.free_rank() != 0 || h.torsion() != expected.as_slice() {
            return Ok(Err(format!("H_0(Q({g})) = {h}")));
        }
    }
    Ok(Ok("Z/2, Z/3, Z/4, Z/2 x Z/2".into()))
}

pub fn check_snf() -> Outcome {
    let mut rng = StdRng::seed_from_u64(7);
    for _ in 0..100 {
        let (r, c) = (rng.gen_range(1..=5), rng.gen_range(1..=5));
        let data: Vec<Vec<i64>> = (0..r)
            .map(|_| (0..c).map(|_| rng.gen_range(-9..=9)).collect())
            .collect();
        let a = SparseIntMatrix::from_dense(r, c, &data);
        let s = snf(&a);
        if s.u.mul(&a)?.mul(&s.v)? != s.diagonal() {
            return Ok(Err(format!("U·A·V ≠ D for {data:?}")));
        }
    }
    Ok(Ok("100 random matrices up to 5x5".into()))
}

pub fn run_all() -> Vec<Check> {
    vec![
        Check::from("delta squared", check_delta_squared()),
        Check::from("N-stability", check_n_stability()),
        Check::from("Dixmier Leibniz", check_leibniz()),
        Check::from("Dixmier associativity", check_associativity()),
        Check::from("augmentation monoidal", check_augmentation_monoidal()),
        Check::from("total D squared", check_total_differential()),
        Check::from("simplicial identities", check_simplicial_identities()),
        Check::from("chi functoriality", check_chi_functoriality()),
        Check::from("H_0 of Q", check_zeroth_q_homology()),
        Check::from("Smith normal form", check_snf()),
    ]
}
