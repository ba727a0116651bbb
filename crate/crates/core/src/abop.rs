//! The category of finite sets with a marked subset and totally ordered
//! fibers, the interval model of `Δ^op`, and the functor `χ` between them.
//!
//! A morphism `(S, U) -> (T, V)` is a map `S -> T` restricting to a bijection
//! `U -> V`, together with a total order on every fiber. Composition
//! concatenates fibers: the fiber of `g ∘ f` over `x` lists the fibers of `f`
//! over the points of `g⁻¹(x)`, in the order `g` puts those points.
//!
//! `Δ^op` is modelled by the sets `[n] = {0, ..., n+1}` and monotone maps
//! preserving both endpoints. `χ` sends `[n]` to `({0, ..., n}, {0})`, folding
//! the top endpoint onto `0`. The cyclic bar construction reads its face maps
//! off `χ`: a fiber `[a, b]` means "multiply `a` by `b`", and the fiber
//! `[p, 0]` produced by the last face is the wrap-around left action on the
//! coefficient slot.

use std::collections::BTreeSet;

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ABObject {
    size: usize,
    marked: BTreeSet<usize>,
}

impl ABObject {
    pub fn new(size: usize, marked: impl IntoIterator<Item = usize>) -> Result<Self> {
        let marked: BTreeSet<usize> = marked.into_iter().collect();
        if let Some(&u) = marked.iter().find(|&&u| u >= size) {
            return Err(Error::InvalidMorphism(format!(
                "marked point {u} outside 0..{size}"
            )));
        }
        Ok(ABObject { size, marked })
    }

    /// `({0, ..., size-1}, {0})`.
    pub fn pointed(size: usize) -> Self {
        assert!(size > 0, "pointed object needs a base point");
        ABObject {
            size,
            marked: BTreeSet::from([0]),
        }
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn marked(&self) -> &BTreeSet<usize> {
        &self.marked
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ABMorphism {
    source: ABObject,
    target: ABObject,
    map: Vec<usize>,
    fibers: Vec<Vec<usize>>,
}

impl ABMorphism {
    pub fn new(
        source: ABObject,
        target: ABObject,
        map: Vec<usize>,
        fibers: Vec<Vec<usize>>,
    ) -> Result<Self> {
        if map.len() != source.size {
            return Err(Error::InvalidMorphism(format!(
                "map has {} entries for a source of size {}",
                map.len(),
                source.size
            )));
        }
        if let Some(&t) = map.iter().find(|&&t| t >= target.size) {
            return Err(Error::InvalidMorphism(format!(
                "image {t} outside the target"
            )));
        }
        if fibers.len() != target.size {
            return Err(Error::InvalidMorphism(
                "need one fiber order per target point".into(),
            ));
        }
        for (t, fiber) in fibers.iter().enumerate() {
            let mut listed = fiber.clone();
            listed.sort_unstable();
            let preimage: Vec<usize> = (0..source.size).filter(|&s| map[s] == t).collect();
            if listed != preimage {
                return Err(Error::InvalidMorphism(format!(
                    "fiber order {fiber:?} over {t} is not a listing of {preimage:?}"
                )));
            }
        }
        let image: BTreeSet<usize> = source.marked.iter().map(|&u| map[u]).collect();
        if image != target.marked || image.len() != source.marked.len() {
            return Err(Error::InvalidMorphism(
                "map does not restrict to a bijection of marked sets".into(),
            ));
        }
        Ok(ABMorphism {
            source,
            target,
            map,
            fibers,
        })
    }

    pub fn identity(object: &ABObject) -> Self {
        ABMorphism {
            source: object.clone(),
            target: object.clone(),
            map: (0..object.size).collect(),
            fibers: (0..object.size).map(|s| vec![s]).collect(),
        }
    }

    pub fn source(&self) -> &ABObject {
        &self.source
    }

    pub fn target(&self) -> &ABObject {
        &self.target
    }

    pub fn map(&self) -> &[usize] {
        &self.map
    }

    pub fn apply(&self, s: usize) -> usize {
        self.map[s]
    }

    /// The ordered fiber over `t`.
    pub fn fiber(&self, t: usize) -> &[usize] {
        &self.fibers[t]
    }

    pub fn fibers(&self) -> &[Vec<usize>] {
        &self.fibers
    }
}

/// `g ∘ f`, fibers concatenated in the order of `g`'s fibers.
pub fn compose_ab(g: &ABMorphism, f: &ABMorphism) -> Result<ABMorphism> {
    if f.target != g.source {
        return Err(Error::NotComposable(format!(
            "target of size {} vs source of size {}",
            f.target.size, g.source.size
        )));
    }
    let map = f.map.iter().map(|&t| g.map[t]).collect();
    let fibers = g
        .fibers
        .iter()
        .map(|gf| {
            gf.iter()
                .flat_map(|&t| f.fibers[t].iter().copied())
                .collect()
        })
        .collect();
    Ok(ABMorphism {
        source: f.source.clone(),
        target: g.target.clone(),
        map,
        fibers,
    })
}

/// An endpoint-preserving monotone map `[n] -> [m]`, i.e. from
/// `{0, ..., n+1}` to `{0, ..., m+1}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DeltaOpMorphism {
    n: usize,
    m: usize,
    map: Vec<usize>,
}

impl DeltaOpMorphism {
    pub fn new(n: usize, m: usize, map: Vec<usize>) -> Result<Self> {
        if map.len() != n + 2 {
            return Err(Error::InvalidMorphism(format!(
                "[{n}] has {} points",
                n + 2
            )));
        }
        if map[0] != 0 || map[n + 1] != m + 1 {
            return Err(Error::InvalidMorphism("endpoints are not preserved".into()));
        }
        if map.windows(2).any(|w| w[0] > w[1]) || map.iter().any(|&j| j > m + 1) {
            return Err(Error::InvalidMorphism(format!(
                "{map:?} is not monotone into [{m}]"
            )));
        }
        Ok(DeltaOpMorphism { n, m, map })
    }

    pub fn identity(n: usize) -> Self {
        DeltaOpMorphism {
            n,
            m: n,
            map: (0..n + 2).collect(),
        }
    }

    /// The face `[p] -> [p-1]` identifying `i` and `i+1`: `j ↦ j` for
    /// `j <= i`, `j ↦ j-1` for `j > i`.
    pub fn face(p: usize, i: usize) -> Result<Self> {
        if p == 0 || i > p {
            return Err(Error::Domain(format!("no face d_{i} out of level {p}")));
        }
        let map = (0..p + 2).map(|j| if j <= i { j } else { j - 1 }).collect();
        DeltaOpMorphism::new(p, p - 1, map)
    }

    pub fn source_level(&self) -> usize {
        self.n
    }

    pub fn target_level(&self) -> usize {
        self.m
    }

    pub fn map(&self) -> &[usize] {
        &self.map
    }

    /// `self ∘ f`.
    pub fn after(&self, f: &DeltaOpMorphism) -> Result<DeltaOpMorphism> {
        if f.m != self.n {
            return Err(Error::NotComposable(format!("[{}] vs [{}]", f.m, self.n)));
        }
        let map = f.map.iter().map(|&j| self.map[j]).collect();
        Ok(DeltaOpMorphism {
            n: f.n,
            m: self.m,
            map,
        })
    }
}

/// `χ(f): ({0..n}, {0}) -> ({0..m}, {0})`. The top endpoint folds onto `0`,
/// and the fiber over `0` lists the points sent to `m+1` before those sent
/// to `0`.
pub fn chi(f: &DeltaOpMorphism) -> ABMorphism {
    let (n, m) = (f.n, f.m);
    let map: Vec<usize> = (0..=n)
        .map(|i| if f.map[i] == m + 1 { 0 } else { f.map[i] })
        .collect();
    let mut fibers: Vec<Vec<usize>> = (0..=m)
        .map(|j| (0..=n).filter(|&i| f.map[i] == j).collect())
        .collect();
    let mut base: Vec<usize> = (0..=n).filter(|&i| f.map[i] == m + 1).collect();
    base.append(&mut fibers[0]);
    fibers[0] = base;
    ABMorphism {
        source: ABObject::pointed(n + 1),
        target: ABObject::pointed(m + 1),
        map,
        fibers,
    }
}

/// `χ` of the faces `d_0, ..., d_p` out of level `p`.
pub fn face_morphisms(p: usize) -> Result<Vec<ABMorphism>> {
    if p == 0 {
        return Err(Error::Domain("level 0 has no faces".into()));
    }
    (0..=p)
        .map(|i| DeltaOpMorphism::face(p, i).map(|d| chi(&d)))
        .collect()
}
