//! The space `Mat(A)` of square tensors indexed by `A x A`, the vectors
//! `C^A`, and the operations that make `Mat(A)` an algebra for a given index
//! map: convolution, identity, adjoint, action on vectors, and averaging.

use crate::error::{Error, Result};
use crate::index::{ClassPartition, IndexMap, IndexSet, MultiIndex};
use crate::linalg::DenseMatrix;
use crate::scalar::Scalar;

/// `T ∈ Mat(A)`, stored densely in canonical order (row-major over `A x A`).
#[derive(Debug, Clone, PartialEq)]
pub struct Tensor<S> {
    domain: IndexSet,
    entries: Vec<S>,
}

/// `x ∈ C^A`, stored densely in canonical order.
#[derive(Debug, Clone, PartialEq)]
pub struct TensorVector<S> {
    domain: IndexSet,
    entries: Vec<S>,
}

pub(crate) fn same_domain(a: &IndexSet, b: &IndexSet, what: &str) -> Result<()> {
    if a == b {
        Ok(())
    } else {
        Err(Error::DomainMismatch(format!(
            "{what}: index sets differ ({} vs {} points)",
            a.len(),
            b.len()
        )))
    }
}

impl<S: Scalar> Tensor<S> {
    pub fn zeros(domain: IndexSet) -> Self {
        let n = domain.len();
        Self {
            domain,
            entries: vec![S::zero(); n * n],
        }
    }

    pub fn from_entries(domain: IndexSet, entries: Vec<S>) -> Result<Self> {
        let n = domain.len();
        if entries.len() != n * n {
            return Err(Error::Dimension(format!(
                "{} entries for an index set of {n} points",
                entries.len()
            )));
        }
        Ok(Self { domain, entries })
    }

    /// Entry at canonical positions `(r, c)` given by `f`.
    pub fn from_fn(domain: IndexSet, mut f: impl FnMut(usize, usize) -> S) -> Self {
        let n = domain.len();
        let entries = (0..n * n).map(|k| f(k / n, k % n)).collect();
        Self { domain, entries }
    }

    /// The tensor with a single one at `(row, col)`.
    pub fn matrix_unit(domain: IndexSet, row: usize, col: usize) -> Self {
        let mut t = Self::zeros(domain);
        t.set_pos(row, col, S::one());
        t
    }

    /// `Id_{i,j} = prod_m delta(i_m, j_m)`.
    pub fn identity(domain: IndexSet) -> Self {
        Self::from_fn(domain, |r, c| if r == c { S::one() } else { S::zero() })
    }

    pub fn domain(&self) -> &IndexSet {
        &self.domain
    }

    pub fn entries(&self) -> &[S] {
        &self.entries
    }

    /// Number of points in the domain (the side of the entry array).
    pub fn side(&self) -> usize {
        self.domain.len()
    }

    pub fn get_pos(&self, r: usize, c: usize) -> &S {
        &self.entries[r * self.side() + c]
    }

    pub fn set_pos(&mut self, r: usize, c: usize, v: S) {
        let n = self.side();
        self.entries[r * n + c] = v;
    }

    fn locate(&self, p: &MultiIndex) -> Result<usize> {
        self.domain.position(p).ok_or_else(|| Error::OutsideDomain {
            point: p.coords().to_vec(),
        })
    }

    pub fn get(&self, row: &MultiIndex, col: &MultiIndex) -> Result<&S> {
        Ok(self.get_pos(self.locate(row)?, self.locate(col)?))
    }

    pub fn set(&mut self, row: &MultiIndex, col: &MultiIndex, v: S) -> Result<()> {
        let (r, c) = (self.locate(row)?, self.locate(col)?);
        self.set_pos(r, c, v);
        Ok(())
    }

    /// The `|A| x |A|` array in canonical order. For a rectangular domain this
    /// is the tensor-product (mixed-radix) matricization.
    pub fn as_matrix(&self) -> DenseMatrix<S> {
        DenseMatrix::new(self.side(), self.side(), self.entries.clone()).expect("square by construction")
    }

    pub fn from_matrix(domain: IndexSet, m: &DenseMatrix<S>) -> Result<Self> {
        if m.rows() != domain.len() || m.cols() != domain.len() {
            return Err(Error::Dimension(format!(
                "{}x{} matrix for an index set of {} points",
                m.rows(),
                m.cols(),
                domain.len()
            )));
        }
        Self::from_entries(domain, m.data().to_vec())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        same_domain(&self.domain, &other.domain, "add")?;
        Ok(Self {
            domain: self.domain.clone(),
            entries: self.entries.iter().zip(&other.entries).map(|(a, b)| a.clone() + b.clone()).collect(),
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(&-S::one()))
    }

    pub fn scale(&self, c: &S) -> Self {
        Self {
            domain: self.domain.clone(),
            entries: self.entries.iter().map(|x| x.clone() * c.clone()).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|x| x.is_zero())
    }

    pub fn approx_eq(&self, other: &Self) -> bool {
        self.domain == other.domain && self.as_matrix().approx_eq(&other.as_matrix())
    }

    /// `(⋆T)_{i,j} = T_{j,i}`.
    pub fn star(&self) -> Self {
        let n = self.side();
        Self::from_fn(self.domain.clone(), |r, c| self.entries[c * n + r].clone())
    }
}

impl<S: Scalar> TensorVector<S> {
    pub fn zeros(domain: IndexSet) -> Self {
        let n = domain.len();
        Self {
            domain,
            entries: vec![S::zero(); n],
        }
    }

    pub fn from_entries(domain: IndexSet, entries: Vec<S>) -> Result<Self> {
        if entries.len() != domain.len() {
            return Err(Error::Dimension(format!(
                "{} entries for an index set of {} points",
                entries.len(),
                domain.len()
            )));
        }
        Ok(Self { domain, entries })
    }

    /// The basis vector `e_p`.
    pub fn basis(domain: IndexSet, p: &MultiIndex) -> Result<Self> {
        let pos = domain.position(p).ok_or_else(|| Error::OutsideDomain {
            point: p.coords().to_vec(),
        })?;
        let mut v = Self::zeros(domain);
        v.entries[pos] = S::one();
        Ok(v)
    }

    pub fn domain(&self) -> &IndexSet {
        &self.domain
    }

    pub fn entries(&self) -> &[S] {
        &self.entries
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        same_domain(&self.domain, &other.domain, "add")?;
        Ok(Self {
            domain: self.domain.clone(),
            entries: self.entries.iter().zip(&other.entries).map(|(a, b)| a.clone() + b.clone()).collect(),
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        let neg = Self {
            domain: other.domain.clone(),
            entries: other.entries.iter().map(|x| -x.clone()).collect(),
        };
        self.add(&neg)
    }

    pub fn approx_eq(&self, other: &Self) -> bool {
        self.domain == other.domain && self.entries.iter().zip(&other.entries).all(|(a, b)| a.approx_eq(b))
    }
}

/// `A_1 ⊗ ... ⊗ A_l` as an element of `Mat(A)` on the rectangular set with
/// dims `(n_1, ..., n_l)`: `T_{i,j} = A^1_{i1,j1} ... A^l_{il,jl}`.
pub fn pure_tensor<S: Scalar>(factors: &[DenseMatrix<S>]) -> Result<Tensor<S>> {
    if factors.is_empty() {
        return Err(Error::Dimension("pure tensor needs at least one factor".into()));
    }
    if let Some(f) = factors.iter().find(|f| !f.is_square()) {
        return Err(Error::NotSquare {
            rows: f.rows(),
            cols: f.cols(),
        });
    }
    let dims: Vec<usize> = factors.iter().map(DenseMatrix::rows).collect();
    let domain = IndexSet::rectangular(&dims)?;
    let points = domain.points().to_vec();
    Ok(Tensor::from_fn(domain, |r, c| {
        factors
            .iter()
            .zip(points[r].coords().iter().zip(points[c].coords()))
            .fold(S::one(), |acc, (a, (&i, &j))| acc * a.get(i as usize, j as usize).clone())
    }))
}

fn check_map<S: Scalar>(t: &Tensor<S>, map: &IndexMap) -> Result<()> {
    same_domain(t.domain(), map.domain(), "tensor and index map")
}

/// Row sums of `t` over each class: `P[r][c] = sum_{m in class c} T_{r,m}`.
fn row_class_sums<S: Scalar>(t: &Tensor<S>, part: &ClassPartition) -> Vec<Vec<S>> {
    (0..t.side())
        .map(|r| {
            part.classes()
                .iter()
                .map(|cl| cl.positions.iter().fold(S::zero(), |acc, &m| acc + t.get_pos(r, m).clone()))
                .collect()
        })
        .collect()
}

/// Column sums of `t` over each class: `Q[c][j] = sum_{n in class c} T_{n,j}`.
fn col_class_sums<S: Scalar>(t: &Tensor<S>, part: &ClassPartition) -> Vec<Vec<S>> {
    part.classes()
        .iter()
        .map(|cl| {
            (0..t.side())
                .map(|j| cl.positions.iter().fold(S::zero(), |acc, &n| acc + t.get_pos(n, j).clone()))
                .collect()
        })
        .collect()
}

/// `(T1 ∗ T2)_{i,j} = sum_{m ~ n} T1_{i,m} T2_{n,j}`.
///
/// The pair sum factors through classes: it equals
/// `sum_c (sum_{m in c} T1_{i,m}) (sum_{n in c} T2_{n,j})`.
pub fn convolve<S: Scalar>(t1: &Tensor<S>, t2: &Tensor<S>, map: &IndexMap) -> Result<Tensor<S>> {
    same_domain(t1.domain(), t2.domain(), "convolve")?;
    check_map(t1, map)?;
    let part = map.partition();
    let left = row_class_sums(t1, &part);
    let right = col_class_sums(t2, &part);
    Ok(Tensor::from_fn(t1.domain().clone(), |r, c| {
        left[r]
            .iter()
            .zip(&right)
            .fold(S::zero(), |acc, (p, q)| acc + p.clone() * q[c].clone())
    }))
}

/// `(T ∗ x)_i = sum_{j ~ l} T_{i,j} x_l`.
pub fn act<S: Scalar>(t: &Tensor<S>, x: &TensorVector<S>, map: &IndexMap) -> Result<TensorVector<S>> {
    same_domain(t.domain(), x.domain(), "act")?;
    check_map(t, map)?;
    let part = map.partition();
    let left = row_class_sums(t, &part);
    let x_sums: Vec<S> = part
        .classes()
        .iter()
        .map(|cl| cl.positions.iter().fold(S::zero(), |acc, &l| acc + x.entries()[l].clone()))
        .collect();
    let entries = left
        .iter()
        .map(|row| row.iter().zip(&x_sums).fold(S::zero(), |acc, (p, s)| acc + p.clone() * s.clone()))
        .collect();
    TensorVector::from_entries(t.domain().clone(), entries)
}

/// `Id_n`: the identity with each diagonal entry divided by its class size.
pub fn normalized_identity<S: Scalar>(map: &IndexMap) -> Tensor<S> {
    let part = map.partition();
    Tensor::from_fn(map.domain().clone(), |r, c| {
        if r == c {
            S::one() / S::from_i64(part.classes()[part.class_of(r)].size() as i64)
        } else {
            S::zero()
        }
    })
}

/// The averaging map. Raw mode is `Ψ(T) = Id ∗ (T ∗ Id)`, which replaces
/// every entry by the sum of `T` over its class-pair block. Normalized mode
/// uses `Id_n` in place of `Id`, which yields the block mean instead.
pub fn average<S: Scalar>(t: &Tensor<S>, map: &IndexMap, normalized: bool) -> Result<Tensor<S>> {
    check_map(t, map)?;
    let id = if normalized {
        normalized_identity(map)
    } else {
        Tensor::identity(map.domain().clone())
    };
    convolve(&id, &convolve(t, &id, map)?, map)
}
