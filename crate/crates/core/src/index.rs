//! Multi-indices, finite index sets, index maps and the equivalence classes
//! they induce, slot permutations, and a fixed enumeration of `Z^l`.
//!
//! Canonical order of an index set is lexicographic with the *last*
//! coordinate slowest. On a rectangular set this makes the position of a
//! point equal to its mixed-radix value `i1 + n1*i2 + n1*n2*i3 + ...`.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_integer::Roots;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MultiIndex(Vec<i64>);

impl MultiIndex {
    pub fn new(coords: Vec<i64>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::Arity { expected: 1, got: 0 });
        }
        Ok(Self(coords))
    }

    pub fn coords(&self) -> &[i64] {
        &self.0
    }

    pub fn arity(&self) -> usize {
        self.0.len()
    }

    pub fn dot(&self, other: &Self) -> i64 {
        self.0.iter().zip(&other.0).map(|(a, b)| a * b).sum()
    }

    /// Order with the last coordinate slowest.
    pub fn canonical_cmp(&self, other: &Self) -> Ordering {
        self.0.iter().rev().cmp(other.0.iter().rev())
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (k, c) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// Shorthand for building a multi-index from literal coordinates.
pub fn mi(coords: &[i64]) -> MultiIndex {
    MultiIndex::new(coords.to_vec()).expect("non-empty multi-index")
}

#[derive(Debug, Clone)]
enum SetKind {
    Rectangular(Vec<usize>),
    Explicit,
}

/// A finite set of multi-indices of a common arity, stored in canonical order.
#[derive(Debug, Clone)]
pub struct IndexSet {
    kind: SetKind,
    arity: usize,
    points: Vec<MultiIndex>,
}

impl PartialEq for IndexSet {
    fn eq(&self, other: &Self) -> bool {
        self.arity == other.arity && self.points == other.points
    }
}

impl Eq for IndexSet {}

impl IndexSet {
    /// The box `[0, n_1) x ... x [0, n_l)`.
    pub fn rectangular(dims: &[usize]) -> Result<Self> {
        if dims.is_empty() {
            return Err(Error::Arity { expected: 1, got: 0 });
        }
        if dims.contains(&0) {
            return Err(Error::Dimension("rectangular dimensions must be positive".into()));
        }
        let total: usize = dims.iter().product();
        let points = (0..total)
            .map(|pos| {
                let mut rest = pos;
                let coords = dims
                    .iter()
                    .map(|&n| {
                        let c = rest % n;
                        rest /= n;
                        c as i64
                    })
                    .collect();
                MultiIndex(coords)
            })
            .collect();
        Ok(Self {
            kind: SetKind::Rectangular(dims.to_vec()),
            arity: dims.len(),
            points,
        })
    }

    /// An explicit finite set. Points must be distinct and share one arity.
    pub fn explicit(points: Vec<MultiIndex>) -> Result<Self> {
        let arity = points.first().map(MultiIndex::arity).ok_or_else(|| {
            Error::Dimension("explicit index set must be non-empty".into())
        })?;
        if let Some(p) = points.iter().find(|p| p.arity() != arity) {
            return Err(Error::Arity {
                expected: arity,
                got: p.arity(),
            });
        }
        let mut points = points;
        points.sort_by(MultiIndex::canonical_cmp);
        if let Some(w) = points.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::Dimension(format!("duplicate point {}", w[0])));
        }
        Ok(Self {
            kind: SetKind::Explicit,
            arity,
            points,
        })
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[MultiIndex] {
        &self.points
    }

    pub fn point(&self, pos: usize) -> &MultiIndex {
        &self.points[pos]
    }

    /// `Some(dims)` for rectangular sets.
    pub fn dims(&self) -> Option<&[usize]> {
        match &self.kind {
            SetKind::Rectangular(d) => Some(d),
            SetKind::Explicit => None,
        }
    }

    pub fn is_rectangular(&self) -> bool {
        self.dims().is_some()
    }

    /// Position of a point in canonical order.
    pub fn position(&self, p: &MultiIndex) -> Option<usize> {
        if p.arity() != self.arity {
            return None;
        }
        match &self.kind {
            SetKind::Rectangular(dims) => {
                let mut pos = 0usize;
                let mut stride = 1usize;
                for (&c, &n) in p.coords().iter().zip(dims) {
                    if c < 0 || c as usize >= n {
                        return None;
                    }
                    pos += stride * c as usize;
                    stride *= n;
                }
                Some(pos)
            }
            SetKind::Explicit => self.points.binary_search_by(|q| q.canonical_cmp(p)).ok(),
        }
    }

    pub fn contains(&self, p: &MultiIndex) -> bool {
        self.position(p).is_some()
    }
}

/// The rule defining `F`, independent of the set it is evaluated on.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MapRule {
    /// `F(i) = k . i`.
    Linear(MultiIndex),
    /// `F(i) = i1 + n1*i2 + ... + n1...n_{l-1}*il` on a rectangular set.
    MixedRadix,
    /// `F(i) = max_s i_s`.
    MaxCoord,
    /// Explicit values; must be total on the domain.
    Table(BTreeMap<MultiIndex, i64>),
    /// The fixed bijection `Z^l -> Z` of [`enumerate_z`].
    Enumeration,
}

/// An index map `F: A -> Z` bound to its domain. Values are computed once at
/// construction, so every later evaluation is a lookup.
#[derive(Debug, Clone)]
pub struct IndexMap {
    domain: IndexSet,
    rule: MapRule,
    values: Vec<i64>,
}

impl PartialEq for IndexMap {
    /// Pointwise equality on equal domains.
    fn eq(&self, other: &Self) -> bool {
        self.domain == other.domain && self.values == other.values
    }
}

impl IndexMap {
    pub fn new(domain: IndexSet, rule: MapRule) -> Result<Self> {
        let values = match &rule {
            MapRule::Linear(k) => {
                if k.arity() != domain.arity() {
                    return Err(Error::Arity {
                        expected: domain.arity(),
                        got: k.arity(),
                    });
                }
                domain.points().iter().map(|p| k.dot(p)).collect()
            }
            MapRule::MixedRadix => {
                if !domain.is_rectangular() {
                    return Err(Error::NotRectangular);
                }
                (0..domain.len() as i64).collect()
            }
            MapRule::MaxCoord => domain
                .points()
                .iter()
                .map(|p| *p.coords().iter().max().expect("non-empty"))
                .collect(),
            MapRule::Table(pairs) => {
                if let Some(extra) = pairs.keys().find(|p| !domain.contains(p)) {
                    return Err(Error::DomainMismatch(format!("table entry {extra} lies outside the index set")));
                }
                domain
                    .points()
                    .iter()
                    .map(|p| {
                        pairs
                            .get(p)
                            .copied()
                            .ok_or_else(|| Error::DomainMismatch(format!("table has no value for {p}")))
                    })
                    .collect::<Result<_>>()?
            }
            MapRule::Enumeration => domain.points().iter().map(enumerate_z).collect::<Result<_>>()?,
        };
        Ok(Self { domain, rule, values })
    }

    pub fn linear(domain: IndexSet, k: &[i64]) -> Result<Self> {
        Self::new(domain, MapRule::Linear(MultiIndex::new(k.to_vec())?))
    }

    pub fn mixed_radix(domain: IndexSet) -> Result<Self> {
        Self::new(domain, MapRule::MixedRadix)
    }

    pub fn max_coord(domain: IndexSet) -> Result<Self> {
        Self::new(domain, MapRule::MaxCoord)
    }

    pub fn table(domain: IndexSet, pairs: BTreeMap<MultiIndex, i64>) -> Result<Self> {
        Self::new(domain, MapRule::Table(pairs))
    }

    pub fn enumeration(domain: IndexSet) -> Result<Self> {
        Self::new(domain, MapRule::Enumeration)
    }

    pub fn domain(&self) -> &IndexSet {
        &self.domain
    }

    pub fn rule(&self) -> &MapRule {
        &self.rule
    }

    /// `F` at each domain point, in canonical order.
    pub fn values(&self) -> &[i64] {
        &self.values
    }

    pub fn evaluate(&self, p: &MultiIndex) -> Result<i64> {
        self.domain
            .position(p)
            .map(|pos| self.values[pos])
            .ok_or_else(|| Error::OutsideDomain {
                point: p.coords().to_vec(),
            })
    }

    pub fn value_at(&self, pos: usize) -> i64 {
        self.values[pos]
    }

    pub fn is_injective(&self) -> bool {
        let mut v = self.values.clone();
        v.sort_unstable();
        v.windows(2).all(|w| w[0] != w[1])
    }

    /// The same map materialized as a table.
    pub fn to_table(&self) -> Self {
        let pairs = self.domain.points().iter().cloned().zip(self.values.iter().copied()).collect();
        Self {
            domain: self.domain.clone(),
            rule: MapRule::Table(pairs),
            values: self.values.clone(),
        }
    }

    pub fn partition(&self) -> ClassPartition {
        let mut groups: BTreeMap<i64, Vec<usize>> = BTreeMap::new();
        for (pos, &v) in self.values.iter().enumerate() {
            groups.entry(v).or_default().push(pos);
        }
        let mut class_of = vec![0; self.values.len()];
        let classes = groups
            .into_iter()
            .enumerate()
            .map(|(c, (value, positions))| {
                for &p in &positions {
                    class_of[p] = c;
                }
                EqClass {
                    value,
                    members: positions.iter().map(|&p| self.domain.point(p).clone()).collect(),
                    positions,
                }
            })
            .collect();
        ClassPartition { classes, class_of }
    }

    /// The table map `i -> F(sigma(i))` on the same domain. Requires
    /// `sigma(A) ⊆ A`, checked exhaustively.
    pub fn compose_with_permutation(&self, sigma: &Permutation) -> Result<Self> {
        let mut pairs = BTreeMap::new();
        for p in self.domain.points() {
            let q = sigma.apply(p)?;
            let v = self
                .evaluate(&q)
                .map_err(|_| Error::PermutationDomain(format!("sigma{p} = {q} is outside the index set")))?;
            pairs.insert(p.clone(), v);
        }
        Self::table(self.domain.clone(), pairs)
    }
}

/// One equivalence class of `~_F`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EqClass {
    pub value: i64,
    pub members: Vec<MultiIndex>,
    /// Positions of the members in the domain's canonical order.
    pub positions: Vec<usize>,
}

impl EqClass {
    pub fn size(&self) -> usize {
        self.members.len()
    }
}

/// Classes of `~_F`, ordered by ascending `F` value.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassPartition {
    classes: Vec<EqClass>,
    class_of: Vec<usize>,
}

impl ClassPartition {
    pub fn classes(&self) -> &[EqClass] {
        &self.classes
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    /// Class index of the domain point at `pos`.
    pub fn class_of(&self, pos: usize) -> usize {
        self.class_of[pos]
    }

    /// Sorted distinct values of `F`.
    pub fn labels(&self) -> Vec<i64> {
        self.classes.iter().map(|c| c.value).collect()
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.classes.iter().map(EqClass::size).collect()
    }
}

/// A permutation of the slots `1..=l`, acting on multi-indices by
/// `sigma(i) = (i_{sigma(1)}, ..., i_{sigma(l)})`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Permutation(Vec<usize>);

impl Permutation {
    /// From one-line notation over `1..=l`.
    pub fn from_one_line(one_line: &[usize]) -> Result<Self> {
        let l = one_line.len();
        if l == 0 {
            return Err(Error::InvalidPermutation("empty".into()));
        }
        let mut seen = vec![false; l];
        for &s in one_line {
            if s == 0 || s > l || std::mem::replace(&mut seen[s - 1], true) {
                return Err(Error::InvalidPermutation(format!("{one_line:?} is not a bijection of 1..={l}")));
            }
        }
        Ok(Self(one_line.iter().map(|s| s - 1).collect()))
    }

    /// Parses comma-separated one-line notation such as `"2,1"`.
    pub fn parse(s: &str) -> Result<Self> {
        let slots = s
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<usize>()
                    .map_err(|_| Error::parse("sigma", format!("`{t}` is not a slot number")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_one_line(&slots)
    }

    pub fn identity(l: usize) -> Self {
        Self((0..l).collect())
    }

    pub fn reversal(l: usize) -> Self {
        Self((0..l).rev().collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn one_line(&self) -> Vec<usize> {
        self.0.iter().map(|s| s + 1).collect()
    }

    /// Function composition: `(self ∘ other)(k) = self(other(k))`.
    pub fn compose(&self, other: &Self) -> Self {
        Self(other.0.iter().map(|&k| self.0[k]).collect())
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.0.len()];
        for (k, &s) in self.0.iter().enumerate() {
            inv[s] = k;
        }
        Self(inv)
    }

    pub fn apply(&self, p: &MultiIndex) -> Result<MultiIndex> {
        if p.arity() != self.len() {
            return Err(Error::Arity {
                expected: self.len(),
                got: p.arity(),
            });
        }
        Ok(MultiIndex(self.0.iter().map(|&s| p.0[s]).collect()))
    }
}

fn zigzag(z: i64) -> u128 {
    if z >= 0 {
        2 * z as u128
    } else {
        2 * (-(z as i128)) as u128 - 1
    }
}

fn unzigzag(n: u128) -> Result<i64> {
    let v: i128 = if n.is_multiple_of(2) { (n / 2) as i128 } else { -(n.div_ceil(2) as i128) };
    i64::try_from(v).map_err(|_| Error::Overflow("enumeration"))
}

fn cantor_pair(a: u128, b: u128) -> Result<u128> {
    let s = a.checked_add(b).ok_or(Error::Overflow("enumeration"))?;
    let tri = s
        .checked_mul(s + 1)
        .map(|x| x / 2)
        .ok_or(Error::Overflow("enumeration"))?;
    tri.checked_add(b).ok_or(Error::Overflow("enumeration"))
}

fn cantor_unpair(z: u128) -> (u128, u128) {
    let mut w = ((8 * z + 1).sqrt() - 1) / 2;
    // Guard against rounding at the edges of the integer square root.
    while w * (w + 1) / 2 > z {
        w -= 1;
    }
    while (w + 1) * (w + 2) / 2 <= z {
        w += 1;
    }
    let b = z - w * (w + 1) / 2;
    (w - b, b)
}

/// The fixed bijection `Z^l -> Z`: zigzag each coordinate into `N`, fold the
/// results left to right with the Cantor pairing, and map back to `Z` with
/// the inverse zigzag.
pub fn enumerate_z(p: &MultiIndex) -> Result<i64> {
    let mut acc = zigzag(p.0[0]);
    for &c in &p.0[1..] {
        acc = cantor_pair(acc, zigzag(c))?;
    }
    unzigzag(acc)
}

/// Inverse of [`enumerate_z`] for a given arity.
pub fn enumerate_z_inverse(n: i64, arity: usize) -> Result<MultiIndex> {
    if arity == 0 {
        return Err(Error::Arity { expected: 1, got: 0 });
    }
    let mut acc = zigzag(n);
    let mut coords = vec![0; arity];
    for k in (1..arity).rev() {
        let (rest, last) = cantor_unpair(acc);
        coords[k] = unzigzag(last)?;
        acc = rest;
    }
    coords[0] = unzigzag(acc)?;
    Ok(MultiIndex(coords))
}
