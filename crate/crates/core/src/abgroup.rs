//! Finite abelian groups, finite rings given by multiplication tables, and
//! bimodules over them.
//!
//! Elements are addressed two ways: as [`GroupElement`] coordinates in the
//! invariant-factor decomposition, and as a dense `u32` index in the canonical
//! enumeration (lexicographic on coordinates, first factor most significant).
//! The zero element always has index 0. The inner loops of the Q-construction
//! only ever touch indices.

use std::fmt;
use std::path::Path;

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Rings and bimodules up to this size are validated exhaustively.
pub const EXHAUSTIVE_LIMIT: usize = 256;
/// Number of random triples checked beyond [`EXHAUSTIVE_LIMIT`].
pub const SAMPLED_TRIPLES: usize = 10_000;

/// Largest group for which a full multiplication table is stored.
const TABLE_LIMIT: usize = 4096;

/// `Z/d_1 x ... x Z/d_r`, each `d_i >= 2`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FinAbGroup {
    factors: Vec<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GroupElement {
    coords: Vec<u64>,
}

impl GroupElement {
    pub fn new(coords: Vec<u64>) -> Self {
        GroupElement { coords }
    }

    pub fn coords(&self) -> &[u64] {
        &self.coords
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (k, c) in self.coords.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

impl FinAbGroup {
    pub fn new(factors: Vec<u64>) -> Result<Self> {
        if let Some(d) = factors.iter().find(|&&d| d < 2) {
            return Err(Error::Domain(format!(
                "cyclic factor Z/{d} must have order at least 2"
            )));
        }
        let group = FinAbGroup { factors };
        group
            .checked_order()
            .ok_or_else(|| Error::Domain(format!("group {group} is too large to enumerate")))?;
        Ok(group)
    }

    pub fn trivial() -> Self {
        FinAbGroup { factors: vec![] }
    }

    pub fn cyclic(n: u64) -> Result<Self> {
        Self::new(vec![n])
    }

    pub fn factors(&self) -> &[u64] {
        &self.factors
    }

    pub fn rank(&self) -> usize {
        self.factors.len()
    }

    fn checked_order(&self) -> Option<usize> {
        self.factors
            .iter()
            .try_fold(1usize, |acc, &d| acc.checked_mul(usize::try_from(d).ok()?))
            .filter(|&n| n <= u32::MAX as usize)
    }

    /// Number of elements.
    pub fn order(&self) -> usize {
        self.checked_order().expect("order checked at construction")
    }

    /// The direct sum `self ⊕ other`, factors of `self` first.
    pub fn direct_sum(&self, other: &FinAbGroup) -> Result<FinAbGroup> {
        let mut factors = self.factors.clone();
        factors.extend_from_slice(&other.factors);
        FinAbGroup::new(factors)
    }

    /// Canonical spec text, e.g. `Z/2 x Z/4`. The trivial group prints as `0`.
    pub fn spec(&self) -> String {
        self.to_string()
    }

    pub fn zero(&self) -> GroupElement {
        GroupElement {
            coords: vec![0; self.factors.len()],
        }
    }

    /// The `j`-th standard generator.
    pub fn generator(&self, j: usize) -> GroupElement {
        let mut e = self.zero();
        e.coords[j] = 1;
        e
    }

    pub fn contains(&self, a: &GroupElement) -> bool {
        a.coords.len() == self.factors.len()
            && a.coords.iter().zip(&self.factors).all(|(c, d)| c < d)
    }

    fn check(&self, a: &GroupElement) -> Result<()> {
        if self.contains(a) {
            Ok(())
        } else {
            Err(Error::MismatchedGroups)
        }
    }

    pub fn add(&self, a: &GroupElement, b: &GroupElement) -> Result<GroupElement> {
        self.check(a)?;
        self.check(b)?;
        let coords = a
            .coords
            .iter()
            .zip(&b.coords)
            .zip(&self.factors)
            .map(|((x, y), d)| (x + y) % d)
            .collect();
        Ok(GroupElement { coords })
    }

    pub fn neg(&self, a: &GroupElement) -> Result<GroupElement> {
        self.check(a)?;
        let coords = a
            .coords
            .iter()
            .zip(&self.factors)
            .map(|(x, d)| (d - x) % d)
            .collect();
        Ok(GroupElement { coords })
    }

    pub fn sub(&self, a: &GroupElement, b: &GroupElement) -> Result<GroupElement> {
        self.add(a, &self.neg(b)?)
    }

    pub fn is_zero(&self, a: &GroupElement) -> Result<bool> {
        self.check(a)?;
        Ok(a.coords.iter().all(|&c| c == 0))
    }

    /// Canonical enumeration index of an element.
    pub fn index_of(&self, a: &GroupElement) -> Result<u32> {
        self.check(a)?;
        Ok(self.encode(&a.coords))
    }

    fn encode(&self, coords: &[u64]) -> u32 {
        let mut idx = 0u64;
        for (c, d) in coords.iter().zip(&self.factors) {
            idx = idx * d + c;
        }
        idx as u32
    }

    /// Element at canonical enumeration index `idx`.
    pub fn element(&self, idx: u32) -> GroupElement {
        let mut coords = vec![0; self.factors.len()];
        let mut rest = idx as u64;
        for (slot, d) in coords.iter_mut().zip(&self.factors).rev() {
            *slot = rest % d;
            rest /= d;
        }
        GroupElement { coords }
    }

    /// All elements in canonical order.
    pub fn elements(&self) -> impl Iterator<Item = GroupElement> + '_ {
        (0..self.order() as u32).map(move |i| self.element(i))
    }

    pub fn add_idx(&self, a: u32, b: u32) -> u32 {
        let (mut a, mut b) = (a as u64, b as u64);
        let mut out = 0u64;
        let mut scale = 1u64;
        for d in self.factors.iter().rev() {
            out += ((a % d + b % d) % d) * scale;
            scale *= d;
            a /= d;
            b /= d;
        }
        out as u32
    }

    pub fn neg_idx(&self, a: u32) -> u32 {
        let mut a = a as u64;
        let mut out = 0u64;
        let mut scale = 1u64;
        for d in self.factors.iter().rev() {
            out += ((d - a % d) % d) * scale;
            scale *= d;
            a /= d;
        }
        out as u32
    }
}

impl fmt::Display for FinAbGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return write!(f, "0");
        }
        for (k, d) in self.factors.iter().enumerate() {
            if k > 0 {
                write!(f, " x ")?;
            }
            write!(f, "Z/{d}")?;
        }
        Ok(())
    }
}

/// Parses `Z/n ( x Z/n )*`. Whitespace around `x` is not significant.
pub fn group_from_spec(spec: &str) -> Result<FinAbGroup> {
    let trimmed = spec.trim();
    if trimmed.is_empty() {
        return Err(Error::Parse("empty group spec".into()));
    }
    let mut factors = Vec::new();
    for part in trimmed.split('x') {
        let part = part.trim();
        let digits = part
            .strip_prefix("Z/")
            .ok_or_else(|| Error::Parse(format!("expected `Z/n`, found `{part}`")))?;
        if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return Err(Error::Parse(format!("expected a modulus in `{part}`")));
        }
        let n: u64 = digits
            .parse()
            .map_err(|_| Error::Parse(format!("modulus too large in `{part}`")))?;
        factors.push(n);
    }
    FinAbGroup::new(factors)
}

/// Collapses runs of whitespace so equivalent spellings share a cache key.
pub fn normalize_spec(spec: &str) -> String {
    spec.split_whitespace().collect::<Vec<_>>().join(" ")
}

/// Index-level arithmetic tables for a group, used by the hot loops.
#[derive(Clone, Debug)]
pub struct GroupArith {
    group: FinAbGroup,
    add: Option<Vec<u32>>,
}

impl GroupArith {
    pub fn new(group: &FinAbGroup) -> Self {
        let n = group.order();
        let add = (n <= 1024).then(|| {
            let mut t = Vec::with_capacity(n * n);
            for a in 0..n as u32 {
                for b in 0..n as u32 {
                    t.push(group.add_idx(a, b));
                }
            }
            t
        });
        GroupArith {
            group: group.clone(),
            add,
        }
    }

    pub fn group(&self) -> &FinAbGroup {
        &self.group
    }

    #[inline]
    pub fn add(&self, a: u32, b: u32) -> u32 {
        match &self.add {
            Some(t) => t[a as usize * self.group.order() + b as usize],
            None => self.group.add_idx(a, b),
        }
    }
}

/// A finite ring: an additive group together with a bilinear, associative,
/// unital multiplication stored as a full table on element indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RingTable {
    additive: FinAbGroup,
    mul: Vec<u32>,
    one: u32,
}

#[derive(Debug, Serialize, Deserialize)]
struct RingTableFile {
    group: String,
    one: Vec<u64>,
    mul: Vec<[Vec<u64>; 3]>,
}

#[derive(Debug, Serialize, Deserialize)]
struct BimoduleTableFile {
    group: String,
    left: Vec<[Vec<u64>; 3]>,
    right: Vec<[Vec<u64>; 3]>,
}

fn check_table_size(group: &FinAbGroup) -> Result<usize> {
    let n = group.order();
    if n > TABLE_LIMIT {
        return Err(Error::Domain(format!(
            "group {group} has {n} elements; multiplication tables are limited to {TABLE_LIMIT}"
        )));
    }
    Ok(n)
}

/// Reads `[[x], [y], [z]]` triples into a dense table, rejecting gaps and conflicts.
fn fill_table(
    rows: &FinAbGroup,
    cols: &FinAbGroup,
    target: &FinAbGroup,
    entries: &[[Vec<u64>; 3]],
    what: &str,
) -> Result<Vec<u32>> {
    let (nr, nc) = (rows.order(), cols.order());
    let mut table = vec![u32::MAX; nr * nc];
    for (k, [x, y, z]) in entries.iter().enumerate() {
        let parse = |g: &FinAbGroup, v: &Vec<u64>| {
            g.index_of(&GroupElement::new(v.clone())).map_err(|_| {
                Error::Parse(format!("{what} entry {k}: {v:?} is not an element of {g}"))
            })
        };
        let (i, j, t) = (parse(rows, x)?, parse(cols, y)?, parse(target, z)?);
        let slot = &mut table[i as usize * nc + j as usize];
        if *slot != u32::MAX && *slot != t {
            return Err(Error::Validation {
                message: format!("{what} table lists two different products"),
                witness: vec![i as usize, j as usize],
            });
        }
        *slot = t;
    }
    if let Some(pos) = table.iter().position(|&t| t == u32::MAX) {
        return Err(Error::Validation {
            message: format!("{what} table is missing a pair"),
            witness: vec![pos / nc, pos % nc],
        });
    }
    Ok(table)
}

/// Triples to test for an associativity-type law over sets of the given sizes.
fn triples(sizes: [usize; 3], seed: u64) -> Box<dyn Iterator<Item = [u32; 3]>> {
    let total = sizes.iter().product::<usize>();
    if sizes.iter().all(|&s| s <= EXHAUSTIVE_LIMIT) && total <= EXHAUSTIVE_LIMIT.pow(3) {
        let [a, b, c] = sizes.map(|s| s as u32);
        Box::new((0..a).flat_map(move |x| (0..b).flat_map(move |y| (0..c).map(move |z| [x, y, z]))))
    } else {
        let mut rng = StdRng::seed_from_u64(seed);
        Box::new((0..SAMPLED_TRIPLES).map(move |_| {
            [
                rng.gen_range(0..sizes[0] as u32),
                rng.gen_range(0..sizes[1] as u32),
                rng.gen_range(0..sizes[2] as u32),
            ]
        }))
    }
}

fn witness(t: &[u32]) -> Vec<usize> {
    t.iter().map(|&x| x as usize).collect()
}

impl RingTable {
    /// Builds and validates a ring from a multiplication function on indices.
    pub fn from_fn(additive: FinAbGroup, one: u32, mul: impl Fn(u32, u32) -> u32) -> Result<Self> {
        let n = check_table_size(&additive)?;
        let mut table = Vec::with_capacity(n * n);
        for a in 0..n as u32 {
            for b in 0..n as u32 {
                table.push(mul(a, b));
            }
        }
        let ring = RingTable {
            additive,
            mul: table,
            one,
        };
        ring.validate()?;
        Ok(ring)
    }

    /// `Z/n` with its standard multiplication.
    pub fn cyclic(n: u64) -> Result<Self> {
        let group = FinAbGroup::cyclic(n)?;
        RingTable::from_fn(group, 1 % n as u32, |a, b| {
            ((a as u64 * b as u64) % n) as u32
        })
    }

    /// Parses the JSON table format: `{"group": .., "one": [..], "mul": [[a, b, ab], ..]}`.
    pub fn from_json(text: &str) -> Result<Self> {
        let file: RingTableFile = serde_json::from_str(text)?;
        let additive = group_from_spec(&file.group)?;
        check_table_size(&additive)?;
        let one = additive
            .index_of(&GroupElement::new(file.one.clone()))
            .map_err(|_| Error::Parse(format!("unit {:?} is not an element", file.one)))?;
        let mul = fill_table(&additive, &additive, &additive, &file.mul, "multiplication")?;
        let ring = RingTable { additive, mul, one };
        ring.validate()?;
        Ok(ring)
    }

    /// Serializes to the JSON table format, pairs in canonical order.
    pub fn to_json(&self) -> String {
        let g = &self.additive;
        let n = g.order() as u32;
        let mut mul = Vec::with_capacity((n * n) as usize);
        for a in 0..n {
            for b in 0..n {
                mul.push([
                    g.element(a).coords,
                    g.element(b).coords,
                    g.element(self.mul_idx(a, b)).coords,
                ]);
            }
        }
        let file = RingTableFile {
            group: g.spec(),
            one: g.element(self.one).coords,
            mul,
        };
        serde_json::to_string(&file).expect("ring table serializes")
    }

    pub fn additive(&self) -> &FinAbGroup {
        &self.additive
    }

    pub fn one_idx(&self) -> u32 {
        self.one
    }

    pub fn one(&self) -> GroupElement {
        self.additive.element(self.one)
    }

    pub fn order(&self) -> usize {
        self.additive.order()
    }

    #[inline]
    pub fn mul_idx(&self, a: u32, b: u32) -> u32 {
        self.mul[a as usize * self.order() + b as usize]
    }

    pub fn mul(&self, a: &GroupElement, b: &GroupElement) -> Result<GroupElement> {
        let (a, b) = (self.additive.index_of(a)?, self.additive.index_of(b)?);
        Ok(self.additive.element(self.mul_idx(a, b)))
    }

    /// Full multiplication table, row-major on element indices.
    pub fn table(&self) -> &[u32] {
        &self.mul
    }

    pub fn is_commutative(&self) -> bool {
        let n = self.order() as u32;
        (0..n).all(|a| (0..n).all(|b| self.mul_idx(a, b) == self.mul_idx(b, a)))
    }

    /// Checks bilinearity (on generators), unit laws, and associativity.
    pub fn validate(&self) -> Result<()> {
        let g = &self.additive;
        let n = g.order() as u32;
        let gens: Vec<u32> = (0..g.rank())
            .map(|j| g.index_of(&g.generator(j)).unwrap())
            .collect();
        for a in 0..n {
            for b in 0..n {
                for &e in &gens {
                    let be = g.add_idx(b, e);
                    if self.mul_idx(a, be) != g.add_idx(self.mul_idx(a, b), self.mul_idx(a, e)) {
                        return Err(Error::Validation {
                            message: "multiplication is not additive in the right argument".into(),
                            witness: witness(&[a, b, e]),
                        });
                    }
                    if self.mul_idx(be, a) != g.add_idx(self.mul_idx(b, a), self.mul_idx(e, a)) {
                        return Err(Error::Validation {
                            message: "multiplication is not additive in the left argument".into(),
                            witness: witness(&[b, e, a]),
                        });
                    }
                }
            }
            if self.mul_idx(self.one, a) != a || self.mul_idx(a, self.one) != a {
                return Err(Error::Validation {
                    message: "unit law fails".into(),
                    witness: witness(&[a]),
                });
            }
        }
        let size = n as usize;
        for t @ [a, b, c] in triples([size; 3], 0x5eed) {
            if self.mul_idx(self.mul_idx(a, b), c) != self.mul_idx(a, self.mul_idx(b, c)) {
                return Err(Error::Validation {
                    message: "multiplication is not associative".into(),
                    witness: witness(&t),
                });
            }
        }
        Ok(())
    }
}

/// Resolves a ring spec: either `Z/n` or a path to a JSON table file.
pub fn ring_from_spec(spec: &str) -> Result<RingTable> {
    let trimmed = spec.trim();
    if trimmed.starts_with("Z/") {
        let group = group_from_spec(trimmed)?;
        return match group.factors() {
            [n] => RingTable::cyclic(*n),
            _ => Err(Error::Parse(format!(
                "ring spec `{trimmed}` is not cyclic; supply a multiplication table file"
            ))),
        };
    }
    let path = Path::new(trimmed);
    if !path.is_file() {
        return Err(Error::Parse(format!(
            "`{trimmed}` is neither `Z/n` nor a ring table file"
        )));
    }
    RingTable::from_json(&std::fs::read_to_string(path)?)
}

/// An `R`-bimodule on a finite abelian group, actions stored as tables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BimoduleTable {
    group: FinAbGroup,
    ring_order: usize,
    left: Vec<u32>,
    right: Vec<u32>,
}

impl BimoduleTable {
    pub fn from_fns(
        ring: &RingTable,
        group: FinAbGroup,
        left: impl Fn(u32, u32) -> u32,
        right: impl Fn(u32, u32) -> u32,
    ) -> Result<Self> {
        let (nr, nm) = (ring.order() as u32, check_table_size(&group)? as u32);
        let left = (0..nr)
            .flat_map(|r| (0..nm).map(move |m| (r, m)))
            .map(|(r, m)| left(r, m))
            .collect();
        let right = (0..nm)
            .flat_map(|m| (0..nr).map(move |r| (m, r)))
            .map(|(m, r)| right(m, r))
            .collect();
        let module = BimoduleTable {
            group,
            ring_order: nr as usize,
            left,
            right,
        };
        module.validate(ring)?;
        Ok(module)
    }

    /// Parses `{"group": .., "left": [[r, m, rm], ..], "right": [[m, r, mr], ..]}`.
    pub fn from_json(ring: &RingTable, text: &str) -> Result<Self> {
        let file: BimoduleTableFile = serde_json::from_str(text)?;
        let group = group_from_spec(&file.group)?;
        check_table_size(&group)?;
        let left = fill_table(ring.additive(), &group, &group, &file.left, "left action")?;
        let right = fill_table(&group, ring.additive(), &group, &file.right, "right action")?;
        let module = BimoduleTable {
            group,
            ring_order: ring.order(),
            left,
            right,
        };
        module.validate(ring)?;
        Ok(module)
    }

    pub fn group(&self) -> &FinAbGroup {
        &self.group
    }

    #[inline]
    pub fn left_idx(&self, r: u32, m: u32) -> u32 {
        self.left[r as usize * self.group.order() + m as usize]
    }

    #[inline]
    pub fn right_idx(&self, m: u32, r: u32) -> u32 {
        self.right[m as usize * self.ring_order + r as usize]
    }

    pub fn left(
        &self,
        ring: &RingTable,
        r: &GroupElement,
        m: &GroupElement,
    ) -> Result<GroupElement> {
        let r = ring.additive().index_of(r)?;
        let m = self.group.index_of(m)?;
        Ok(self.group.element(self.left_idx(r, m)))
    }

    pub fn right(
        &self,
        ring: &RingTable,
        m: &GroupElement,
        r: &GroupElement,
    ) -> Result<GroupElement> {
        let m = self.group.index_of(m)?;
        let r = ring.additive().index_of(r)?;
        Ok(self.group.element(self.right_idx(m, r)))
    }

    /// Checks biadditivity, both associativity laws, the bimodule law and unitality.
    pub fn validate(&self, ring: &RingTable) -> Result<()> {
        if self.ring_order != ring.order() {
            return Err(Error::MismatchedGroups);
        }
        let (rg, mg) = (ring.additive(), &self.group);
        let (nr, nm) = (ring.order() as u32, mg.order() as u32);
        let fail = |message: &str, t: &[u32]| Error::Validation {
            message: message.into(),
            witness: witness(t),
        };
        let rgens: Vec<u32> = (0..rg.rank())
            .map(|j| rg.index_of(&rg.generator(j)).unwrap())
            .collect();
        let mgens: Vec<u32> = (0..mg.rank())
            .map(|j| mg.index_of(&mg.generator(j)).unwrap())
            .collect();
        for r in 0..nr {
            for m in 0..nm {
                for &e in &mgens {
                    let me = mg.add_idx(m, e);
                    if self.left_idx(r, me) != mg.add_idx(self.left_idx(r, m), self.left_idx(r, e))
                    {
                        return Err(fail(
                            "left action is not additive in the module",
                            &[r, m, e],
                        ));
                    }
                    if self.right_idx(me, r)
                        != mg.add_idx(self.right_idx(m, r), self.right_idx(e, r))
                    {
                        return Err(fail(
                            "right action is not additive in the module",
                            &[m, e, r],
                        ));
                    }
                }
                for &e in &rgens {
                    let re = rg.add_idx(r, e);
                    if self.left_idx(re, m) != mg.add_idx(self.left_idx(r, m), self.left_idx(e, m))
                    {
                        return Err(fail("left action is not additive in the ring", &[r, e, m]));
                    }
                    if self.right_idx(m, re)
                        != mg.add_idx(self.right_idx(m, r), self.right_idx(m, e))
                    {
                        return Err(fail("right action is not additive in the ring", &[m, r, e]));
                    }
                }
            }
        }
        for m in 0..nm {
            if self.left_idx(ring.one_idx(), m) != m || self.right_idx(m, ring.one_idx()) != m {
                return Err(fail("module is not unital", &[m]));
            }
        }
        for t @ [r, s, m] in triples([nr as usize, nr as usize, nm as usize], 0xb1) {
            if self.left_idx(ring.mul_idx(r, s), m) != self.left_idx(r, self.left_idx(s, m)) {
                return Err(fail("left action is not associative", &t));
            }
            if self.right_idx(m, ring.mul_idx(r, s)) != self.right_idx(self.right_idx(m, r), s) {
                return Err(fail("right action is not associative", &[m, r, s]));
            }
        }
        for [r, m, s] in triples([nr as usize, nm as usize, nr as usize], 0xb2) {
            if self.right_idx(self.left_idx(r, m), s) != self.left_idx(r, self.right_idx(m, s)) {
                return Err(fail("left and right actions do not commute", &[r, m, s]));
            }
        }
        Ok(())
    }
}

/// `R` as a bimodule over itself by left and right multiplication.
pub fn self_bimodule(ring: &RingTable) -> BimoduleTable {
    BimoduleTable {
        group: ring.additive().clone(),
        ring_order: ring.order(),
        left: ring.table().to_vec(),
        right: ring.table().to_vec(),
    }
}

/// Resolves a coefficient spec: `self` or a path to a bimodule table file.
pub fn bimodule_from_spec(ring: &RingTable, spec: &str) -> Result<BimoduleTable> {
    let trimmed = spec.trim();
    if trimmed == "self" {
        return Ok(self_bimodule(ring));
    }
    let path = Path::new(trimmed);
    if !path.is_file() {
        return Err(Error::Parse(format!(
            "`{trimmed}` is neither `self` nor a bimodule table file"
        )));
    }
    BimoduleTable::from_json(ring, &std::fs::read_to_string(path)?)
}
