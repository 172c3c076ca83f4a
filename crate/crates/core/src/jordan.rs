//! Jordan structure of stretched Kronecker products of Jordan sums.
//!
//! Closed forms come in three layers: [`jordan_pair`] for two single cells,
//! [`jordan_nfold`] which distributes direct sums over the factors and folds
//! pairwise, and [`explicit_pair_matrix`] which writes down `ρ(C ⊗ D)` for
//! two Jordan sums entry by entry. [`jordan_oracle`] certifies any of them
//! from exact ranks of `(M - λI)^k`.

use std::cmp::Ordering;

use crate::error::{Error, Result};
use crate::linalg::{kron, mat_mul, rank, DenseMatrix};
use crate::scalar::ExactScalar;

#[derive(Debug, Clone, PartialEq)]
pub struct JordanBlock<S> {
    pub size: usize,
    pub eigenvalue: S,
}

/// A multiset of Jordan cells, kept sorted by eigenvalue and then by size
/// descending, so multiset equality is plain equality.
#[derive(Debug, Clone, PartialEq)]
pub struct JordanSpec<S> {
    blocks: Vec<JordanBlock<S>>,
}

fn block_order<S: ExactScalar>(x: &JordanBlock<S>, y: &JordanBlock<S>) -> Ordering {
    x.eigenvalue
        .canonical_cmp(&y.eigenvalue)
        .then_with(|| y.size.cmp(&x.size))
}

impl<S: ExactScalar> JordanSpec<S> {
    pub fn new(blocks: impl IntoIterator<Item = (usize, S)>) -> Result<Self> {
        let mut blocks: Vec<JordanBlock<S>> = blocks
            .into_iter()
            .map(|(size, eigenvalue)| JordanBlock { size, eigenvalue })
            .collect();
        if blocks.iter().any(|b| b.size == 0) {
            return Err(Error::Dimension("Jordan block sizes must be positive".into()));
        }
        blocks.sort_by(block_order);
        Ok(Self { blocks })
    }

    pub fn single(size: usize, eigenvalue: S) -> Result<Self> {
        Self::new([(size, eigenvalue)])
    }

    pub fn blocks(&self) -> &[JordanBlock<S>] {
        &self.blocks
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    pub fn dimension(&self) -> usize {
        self.blocks.iter().map(|b| b.size).sum()
    }

    /// Distinct eigenvalues in canonical order.
    pub fn eigenvalues(&self) -> Vec<S> {
        let mut out: Vec<S> = Vec::new();
        for b in &self.blocks {
            if out.last() != Some(&b.eigenvalue) {
                out.push(b.eigenvalue.clone());
            }
        }
        out
    }

    /// `⊕ J_size(eigenvalue)` in canonical block order.
    pub fn to_matrix(&self) -> DenseMatrix<S> {
        let cells: Vec<_> = self
            .blocks
            .iter()
            .map(|b| DenseMatrix::jordan_block(b.size, &b.eigenvalue))
            .collect();
        DenseMatrix::direct_sum(&cells)
    }

    fn merge(parts: impl IntoIterator<Item = Self>) -> Self {
        let mut blocks: Vec<_> = parts.into_iter().flat_map(|s| s.blocks).collect();
        blocks.sort_by(block_order);
        Self { blocks }
    }
}

/// Jordan form of `ρ_{p,q}(J_p(a) ⊗ J_q(b))`.
///
/// With `ab ≠ 0` the cells are `J_{p+q-2k+1}(ab)` for `k = 1..=min(p,q)`.
/// When exactly one of `a`, `b` vanishes the product is nilpotent: `p` copies
/// of `J_q(0)` if `b = 0`, `q` copies of `J_p(0)` if `a = 0`. When both
/// vanish the cells are two copies of `J_k(0)` for each `k < min(p,q)` plus
/// `|p-q|+1` copies of `J_{min(p,q)}(0)`.
pub fn jordan_pair<S: ExactScalar>(p: usize, a: &S, q: usize, b: &S) -> Result<JordanSpec<S>> {
    if p == 0 || q == 0 {
        return Err(Error::Dimension("Jordan block sizes must be positive".into()));
    }
    let zero = S::zero();
    let lo = p.min(q);
    let blocks: Vec<(usize, S)> = match (a.is_zero(), b.is_zero()) {
        (false, false) => {
            let ab = a.clone() * b.clone();
            (1..=lo).map(|k| (p + q + 1 - 2 * k, ab.clone())).collect()
        }
        (false, true) => vec![(q, zero); p],
        (true, false) => vec![(p, zero); q],
        (true, true) => (1..lo)
            .flat_map(|k| [(k, zero.clone()), (k, zero.clone())])
            .chain(std::iter::repeat_n((lo, zero.clone()), p.abs_diff(q) + 1))
            .collect(),
    };
    JordanSpec::new(blocks)
}

/// Jordan form of the stretched tensor product of all the given Jordan sums,
/// folded left to right: every pair of cells from the accumulator and the
/// next factor contributes its [`jordan_pair`] form.
pub fn jordan_nfold<S: ExactScalar>(specs: &[JordanSpec<S>]) -> Result<JordanSpec<S>> {
    let (first, rest) = specs
        .split_first()
        .ok_or_else(|| Error::Dimension("need at least one Jordan spec".into()))?;
    rest.iter().try_fold(first.clone(), |acc, next| {
        let mut parts = Vec::with_capacity(acc.blocks.len() * next.blocks.len());
        for x in &acc.blocks {
            for y in &next.blocks {
                parts.push(jordan_pair(x.size, &x.eigenvalue, y.size, &y.eigenvalue)?);
            }
        }
        Ok(JordanSpec::merge(parts))
    })
}

/// `ρ(C ⊗ D)` written out from the cell structure of `C = ⊕ J_{μ_l}(a_l)` and
/// `D = ⊕ J_{ν_s}(b_s)`. With `M = dim C` and `I = i + M j`:
/// `ab` on the diagonal, `b` at `(I, I+1)` inside a `C` cell, `a` at `(I, I+M)`
/// inside a `D` cell, and `1` at `(I, I+M+1)` inside both.
pub fn explicit_pair_matrix<S: ExactScalar>(c: &JordanSpec<S>, d: &JordanSpec<S>) -> Result<DenseMatrix<S>> {
    if c.is_empty() || d.is_empty() {
        return Err(Error::Dimension("both Jordan specs must be non-empty".into()));
    }
    let m = c.dimension();
    let n = d.dimension();
    let mut out = DenseMatrix::zeros(m * n, m * n);
    let c_cells = cell_ranges(c);
    let d_cells = cell_ranges(d);
    for (c_start, c_end, a) in &c_cells {
        for (d_start, d_end, b) in &d_cells {
            for i in *c_start..*c_end {
                for j in *d_start..*d_end {
                    let idx = i + m * j;
                    let (c_inner, d_inner) = (i + 1 < *c_end, j + 1 < *d_end);
                    out.add_at(idx, idx, a.clone() * b.clone());
                    if c_inner {
                        out.add_at(idx, idx + 1, b.clone());
                    }
                    if d_inner {
                        out.add_at(idx, idx + m, a.clone());
                    }
                    if c_inner && d_inner {
                        out.add_at(idx, idx + m + 1, S::one());
                    }
                }
            }
        }
    }
    Ok(out)
}

/// `(start, end, eigenvalue)` for each cell, using running partial sums of sizes.
fn cell_ranges<S: ExactScalar>(spec: &JordanSpec<S>) -> Vec<(usize, usize, S)> {
    let mut start = 0;
    spec.blocks
        .iter()
        .map(|b| {
            let r = (start, start + b.size, b.eigenvalue.clone());
            start += b.size;
            r
        })
        .collect()
}

/// Jordan structure at one eigenvalue.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenStructure<S> {
    pub eigenvalue: S,
    /// `w_k = nullity((M - λI)^k)` for `k = 1, 2, ...` until it stops growing.
    pub weyr: Vec<usize>,
    /// Cell sizes, descending.
    pub block_sizes: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct JordanOracleResult<S> {
    pub per_eigenvalue: Vec<EigenStructure<S>>,
}

impl<S: ExactScalar> JordanOracleResult<S> {
    pub fn to_spec(&self) -> JordanSpec<S> {
        JordanSpec::merge(self.per_eigenvalue.iter().map(|e| JordanSpec {
            blocks: e
                .block_sizes
                .iter()
                .map(|&size| JordanBlock {
                    size,
                    eigenvalue: e.eigenvalue.clone(),
                })
                .collect(),
        }))
    }
}

/// Block sizes from a Weyr sequence: `w_k - w_{k-1}` cells have size `>= k`.
fn blocks_from_weyr(weyr: &[usize]) -> Vec<usize> {
    let at_least: Vec<usize> = std::iter::once(0)
        .chain(weyr.iter().copied())
        .collect::<Vec<_>>()
        .windows(2)
        .map(|w| w[1] - w[0])
        .collect();
    let mut sizes = Vec::new();
    for k in (0..at_least.len()).rev() {
        let exactly = at_least[k] - at_least.get(k + 1).copied().unwrap_or(0);
        sizes.extend(std::iter::repeat_n(k + 1, exactly));
    }
    sizes
}

/// Jordan structure of `m` from exact ranks, given an exhaustive list of its
/// eigenvalues. Fails if the generalized eigenspaces do not fill the space.
pub fn jordan_oracle<S: ExactScalar>(m: &DenseMatrix<S>, eigenvalues: &[S]) -> Result<JordanOracleResult<S>> {
    if !m.is_square() {
        return Err(Error::NotSquare {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    let n = m.rows();
    let mut distinct = eigenvalues.to_vec();
    distinct.sort_by(|x, y| x.canonical_cmp(y));
    distinct.dedup();

    let mut per_eigenvalue = Vec::with_capacity(distinct.len());
    let mut covered = 0;
    for lambda in distinct {
        let shifted = m.clone().unlabeled().sub(&DenseMatrix::identity(n).scale(&lambda))?;
        let mut power = shifted.clone();
        let mut weyr: Vec<usize> = Vec::new();
        loop {
            let nullity = n - rank(&power)?;
            if weyr.last() == Some(&nullity) {
                break;
            }
            weyr.push(nullity);
            if nullity == n || weyr.len() > n {
                break;
            }
            power = mat_mul(&power, &shifted)?;
        }
        if weyr == [0] {
            weyr.clear();
        }
        covered += weyr.last().copied().unwrap_or(0);
        per_eigenvalue.push(EigenStructure {
            block_sizes: blocks_from_weyr(&weyr),
            eigenvalue: lambda,
            weyr,
        });
    }
    if covered != n {
        return Err(Error::MissedEigenvalue { covered, dim: n });
    }
    Ok(JordanOracleResult { per_eigenvalue })
}

/// `ρ(C_1 ⊗ ... ⊗ C_n)` for the Jordan matrices of the given specs.
pub fn nfold_matrix<S: ExactScalar>(specs: &[JordanSpec<S>]) -> Result<DenseMatrix<S>> {
    let (first, rest) = specs
        .split_first()
        .ok_or_else(|| Error::Dimension("need at least one Jordan spec".into()))?;
    Ok(rest.iter().fold(first.to_matrix(), |acc, s| kron(&acc, &s.to_matrix())))
}

/// Every product of one eigenvalue from each spec; the spectrum of the
/// stretched tensor product.
pub fn nfold_eigenvalues<S: ExactScalar>(specs: &[JordanSpec<S>]) -> Vec<S> {
    let mut acc = vec![S::one()];
    for s in specs {
        let evs = s.eigenvalues();
        acc = acc
            .iter()
            .flat_map(|x| evs.iter().map(move |e| x.clone() * e.clone()))
            .collect();
        acc.sort_by(|x, y| x.canonical_cmp(y));
        acc.dedup();
    }
    acc
}

/// Closed form, oracle, and whether they agree.
pub fn certify_nfold<S: ExactScalar>(specs: &[JordanSpec<S>]) -> Result<(JordanSpec<S>, JordanSpec<S>, bool)> {
    let closed = jordan_nfold(specs)?;
    let oracle = jordan_oracle(&nfold_matrix(specs)?, &nfold_eigenvalues(specs))?.to_spec();
    let agree = closed == oracle;
    Ok((closed, oracle, agree))
}
