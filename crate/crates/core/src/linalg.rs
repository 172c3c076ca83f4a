//! Dense matrix kernel: products, Kronecker products, determinants, ranks.
//!
//! Matrices may carry integer row and column labels. The kernel never
//! interprets them; it only threads them through where the meaning is
//! unambiguous (e.g. `mat_mul` keeps the left rows and right columns).

use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix<S> {
    rows: usize,
    cols: usize,
    data: Vec<S>,
    row_labels: Option<Vec<i64>>,
    col_labels: Option<Vec<i64>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DenseVector<S> {
    data: Vec<S>,
    labels: Option<Vec<i64>>,
}

impl<S: Scalar> DenseMatrix<S> {
    pub fn new(rows: usize, cols: usize, data: Vec<S>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::Dimension(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(Self {
            rows,
            cols,
            data,
            row_labels: None,
            col_labels: None,
        })
    }

    pub fn from_rows(rows: Vec<Vec<S>>) -> Result<Self> {
        let n_rows = rows.len();
        let n_cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != n_cols) {
            return Err(Error::Dimension("ragged rows".into()));
        }
        Self::new(n_rows, n_cols, rows.into_iter().flatten().collect())
    }

    /// Builds a matrix from integer rows; handy for fixtures and tests.
    pub fn from_i64_rows(rows: &[&[i64]]) -> Result<Self> {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&v| S::from_i64(v)).collect())
                .collect(),
        )
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![S::zero(); rows * cols],
            row_labels: None,
            col_labels: None,
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = S::one();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> S) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self {
            rows,
            cols,
            data,
            row_labels: None,
            col_labels: None,
        }
    }

    pub fn with_labels(mut self, row_labels: Option<Vec<i64>>, col_labels: Option<Vec<i64>>) -> Result<Self> {
        if row_labels.as_ref().is_some_and(|l| l.len() != self.rows)
            || col_labels.as_ref().is_some_and(|l| l.len() != self.cols)
        {
            return Err(Error::Dimension("label count does not match matrix shape".into()));
        }
        self.row_labels = row_labels;
        self.col_labels = col_labels;
        Ok(self)
    }

    /// Drops any labels.
    pub fn unlabeled(mut self) -> Self {
        self.row_labels = None;
        self.col_labels = None;
        self
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn data(&self) -> &[S] {
        &self.data
    }

    pub fn row_labels(&self) -> Option<&[i64]> {
        self.row_labels.as_deref()
    }

    pub fn col_labels(&self) -> Option<&[i64]> {
        self.col_labels.as_deref()
    }

    pub fn get(&self, i: usize, j: usize) -> &S {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: S) {
        self.data[i * self.cols + j] = v;
    }

    pub fn add_at(&mut self, i: usize, j: usize, v: S) {
        let slot = &mut self.data[i * self.cols + j];
        *slot = slot.clone() + v;
    }

    pub fn row(&self, i: usize) -> &[S] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<S>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        Self {
            rows: self.cols,
            cols: self.rows,
            data: Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone()).data,
            row_labels: self.col_labels.clone(),
            col_labels: self.row_labels.clone(),
        }
    }

    pub fn map(&self, f: impl Fn(&S) -> S) -> Self {
        Self {
            data: self.data.iter().map(f).collect(),
            ..self.clone()
        }
    }

    pub fn scale(&self, c: &S) -> Self {
        self.map(|x| x.clone() * c.clone())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a.clone() + b.clone())
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a.clone() - b.clone())
    }

    fn zip_with(&self, other: &Self, f: impl Fn(&S, &S) -> S) -> Result<Self> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::Dimension(format!(
                "{}x{} vs {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(Self {
            data: self.data.iter().zip(&other.data).map(|(a, b)| f(a, b)).collect(),
            ..self.clone()
        })
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|x| x.magnitude().powi(2)).sum::<f64>().sqrt()
    }

    /// Entrywise comparison: exact for exact fields, otherwise relative
    /// Frobenius error bounded by `REL_TOL` with an `ABS_FLOOR` floor.
    pub fn approx_eq(&self, other: &Self) -> bool {
        if self.rows != other.rows || self.cols != other.cols {
            return false;
        }
        if S::EXACT {
            return self.data == other.data;
        }
        let diff = self.sub(other).expect("shapes checked").frobenius_norm();
        let scale = self.frobenius_norm().max(other.frobenius_norm());
        diff <= crate::scalar::ABS_FLOOR.max(crate::scalar::REL_TOL * scale)
    }

    /// Block-diagonal sum of square or rectangular blocks.
    pub fn direct_sum(blocks: &[Self]) -> Self {
        let rows = blocks.iter().map(|b| b.rows).sum();
        let cols = blocks.iter().map(|b| b.cols).sum();
        let mut m = Self::zeros(rows, cols);
        let (mut r0, mut c0) = (0, 0);
        for b in blocks {
            for i in 0..b.rows {
                for j in 0..b.cols {
                    m.set(r0 + i, c0 + j, b.get(i, j).clone());
                }
            }
            r0 += b.rows;
            c0 += b.cols;
        }
        m
    }

    /// `J_size(eigenvalue)`: eigenvalue on the diagonal, ones on the superdiagonal.
    pub fn jordan_block(size: usize, eigenvalue: &S) -> Self {
        Self::from_fn(size, size, |i, j| {
            if i == j {
                eigenvalue.clone()
            } else if j == i + 1 {
                S::one()
            } else {
                S::zero()
            }
        })
    }

    fn require_square(&self) -> Result<()> {
        if self.is_square() {
            Ok(())
        } else {
            Err(Error::NotSquare {
                rows: self.rows,
                cols: self.cols,
            })
        }
    }
}

impl<S: Scalar> DenseVector<S> {
    pub fn new(data: Vec<S>) -> Self {
        Self { data, labels: None }
    }

    pub fn with_labels(mut self, labels: Vec<i64>) -> Result<Self> {
        if labels.len() != self.data.len() {
            return Err(Error::Dimension("label count does not match vector length".into()));
        }
        self.labels = Some(labels);
        Ok(self)
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn data(&self) -> &[S] {
        &self.data
    }

    pub fn labels(&self) -> Option<&[i64]> {
        self.labels.as_deref()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn approx_eq(&self, other: &Self) -> bool {
        self.data.len() == other.data.len() && self.data.iter().zip(&other.data).all(|(a, b)| a.approx_eq(b))
    }
}

/// Standard matrix product. Labels: rows from `a`, columns from `b`.
pub fn mat_mul<S: Scalar>(a: &DenseMatrix<S>, b: &DenseMatrix<S>) -> Result<DenseMatrix<S>> {
    if a.cols != b.rows {
        return Err(Error::Dimension(format!(
            "cannot multiply {}x{} by {}x{}",
            a.rows, a.cols, b.rows, b.cols
        )));
    }
    let mut out = DenseMatrix::zeros(a.rows, b.cols);
    for i in 0..a.rows {
        for k in 0..a.cols {
            let aik = a.get(i, k);
            if aik.is_zero() {
                continue;
            }
            for j in 0..b.cols {
                let bkj = b.get(k, j);
                if !bkj.is_zero() {
                    out.add_at(i, j, aik.clone() * bkj.clone());
                }
            }
        }
    }
    out.row_labels = a.row_labels.clone();
    out.col_labels = b.col_labels.clone();
    Ok(out)
}

pub fn mat_vec<S: Scalar>(a: &DenseMatrix<S>, x: &DenseVector<S>) -> Result<DenseVector<S>> {
    if a.cols != x.len() {
        return Err(Error::Dimension(format!(
            "cannot apply {}x{} matrix to vector of length {}",
            a.rows,
            a.cols,
            x.len()
        )));
    }
    let data = (0..a.rows)
        .map(|i| {
            a.row(i)
                .iter()
                .zip(&x.data)
                .fold(S::zero(), |acc, (m, v)| acc + m.clone() * v.clone())
        })
        .collect();
    Ok(DenseVector {
        data,
        labels: a.row_labels.clone(),
    })
}

/// Kronecker product with the first factor varying fastest:
/// entry `(i1 + p*i2, j1 + r*j2)` is `a[i1][j1] * b[i2][j2]` for `a` of shape
/// `p x r`. This is the layout of the mixed-radix index `i1 + n1*i2 + ...`.
pub fn kron<S: Scalar>(a: &DenseMatrix<S>, b: &DenseMatrix<S>) -> DenseMatrix<S> {
    let (p, r) = (a.rows, a.cols);
    let mut out = DenseMatrix::zeros(p * b.rows, r * b.cols);
    for i2 in 0..b.rows {
        for j2 in 0..b.cols {
            let bv = b.get(i2, j2);
            if bv.is_zero() {
                continue;
            }
            for i1 in 0..p {
                for j1 in 0..r {
                    let av = a.get(i1, j1);
                    if !av.is_zero() {
                        out.set(i1 + p * i2, j1 + r * j2, av.clone() * bv.clone());
                    }
                }
            }
        }
    }
    out
}

/// Determinant. Exact fields use fraction-free Bareiss elimination; floating
/// fields use LU with partial pivoting.
pub fn det<S: Scalar>(a: &DenseMatrix<S>) -> Result<S> {
    a.require_square()?;
    if S::EXACT {
        Ok(det_bareiss(a))
    } else {
        Ok(det_lu(a))
    }
}

fn det_bareiss<S: Scalar>(a: &DenseMatrix<S>) -> S {
    let n = a.rows;
    if n == 0 {
        return S::one();
    }
    let mut m = a.to_rows();
    let mut negate = false;
    let mut prev = S::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&r| !m[r][k].is_zero()) {
                Some(r) => {
                    m.swap(k, r);
                    negate = !negate;
                }
                None => return S::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (m[i][j].clone() * m[k][k].clone() - m[i][k].clone() * m[k][j].clone()) / prev.clone();
                m[i][j] = v;
            }
            m[i][k] = S::zero();
        }
        prev = m[k][k].clone();
    }
    let d = m[n - 1][n - 1].clone();
    if negate {
        -d
    } else {
        d
    }
}

fn det_lu<S: Scalar>(a: &DenseMatrix<S>) -> S {
    let n = a.rows;
    let mut m = a.to_rows();
    let mut d = S::one();
    for k in 0..n {
        let pivot = (k..n)
            .max_by(|&x, &y| m[x][k].magnitude().total_cmp(&m[y][k].magnitude()))
            .expect("non-empty range");
        if m[pivot][k].is_zero() {
            return S::zero();
        }
        if pivot != k {
            m.swap(k, pivot);
            d = -d;
        }
        let pk = m[k][k].clone();
        d = d * pk.clone();
        for i in k + 1..n {
            let factor = m[i][k].clone() / pk.clone();
            if factor.is_zero() {
                continue;
            }
            let (upper, lower) = m.split_at_mut(i);
            for (x, y) in lower[0][k + 1..].iter_mut().zip(&upper[k][k + 1..]) {
                *x = x.clone() - factor.clone() * y.clone();
            }
        }
    }
    d
}

/// Exact rank by Gaussian elimination. Floating-point input is rejected.
pub fn rank<S: Scalar>(a: &DenseMatrix<S>) -> Result<usize> {
    if !S::EXACT {
        return Err(Error::InexactScalar("rank"));
    }
    let mut m = a.to_rows();
    let mut r = 0;
    for c in 0..a.cols {
        let Some(p) = (r..a.rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let pivot = m[r][c].clone();
        for i in r + 1..a.rows {
            if m[i][c].is_zero() {
                continue;
            }
            let factor = m[i][c].clone() / pivot.clone();
            let (upper, lower) = m.split_at_mut(i);
            for (x, y) in lower[0][c..].iter_mut().zip(&upper[r][c..]) {
                *x = x.clone() - factor.clone() * y.clone();
            }
        }
        r += 1;
        if r == a.rows {
            break;
        }
    }
    Ok(r)
}

/// `[nullity((a - lambda I)^k)]` for `k = 1..=k_max`.
pub fn nullity_sequence<S: Scalar>(a: &DenseMatrix<S>, lambda: &S, k_max: usize) -> Result<Vec<usize>> {
    if !S::EXACT {
        return Err(Error::InexactScalar("nullity_sequence"));
    }
    a.require_square()?;
    if k_max == 0 {
        return Err(Error::Dimension("k_max must be at least 1".into()));
    }
    let n = a.rows;
    let shifted = a.sub(&DenseMatrix::identity(n).scale(lambda))?.unlabeled();
    let mut power = shifted.clone();
    let mut out = Vec::with_capacity(k_max);
    for k in 1..=k_max {
        let nullity = n - rank(&power)?;
        out.push(nullity);
        if k < k_max {
            // Once the nullity saturates at n the power is zero and stays so.
            if nullity == n {
                out.resize(k_max, n);
                break;
            }
            power = mat_mul(&power, &shifted)?;
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{gq, gqi, GaussQ, Rational, C64};

    type Q = DenseMatrix<GaussQ>;

    #[test]
    fn identity_and_involution() {
        let m = Q::from_i64_rows(&[&[1, 2, 3], &[4, 5, 6], &[7, 8, 10]]).unwrap();
        assert_eq!(mat_mul(&Q::identity(3), &m).unwrap(), m);
        let swap = Q::from_i64_rows(&[&[0, 1], &[1, 0]]).unwrap();
        assert_eq!(mat_mul(&swap, &swap).unwrap(), Q::identity(2));
    }

    #[test]
    fn mat_mul_rejects_bad_shapes() {
        let a = Q::zeros(2, 3);
        assert!(matches!(mat_mul(&a, &a), Err(Error::Dimension(_))));
    }

    #[test]
    fn kron_layout_first_factor_fastest() {
        let a = Q::from_i64_rows(&[&[1, 2], &[3, 4]]).unwrap();
        let b = Q::from_i64_rows(&[&[5, 6], &[7, 8]]).unwrap();
        // kron(A, I2) is diag(A, A) under this layout.
        let k = kron(&a, &Q::identity(2));
        assert_eq!(k, Q::direct_sum(&[a.clone(), a.clone()]));
        // kron(I2, B) interleaves: entry (i1 + 2 i2, j1 + 2 j2) = delta(i1,j1) b[i2][j2].
        let k = kron(&Q::identity(2), &b);
        let expected = Q::from_i64_rows(&[&[5, 0, 6, 0], &[0, 5, 0, 6], &[7, 0, 8, 0], &[0, 7, 0, 8]]).unwrap();
        assert_eq!(k, expected);
        // entry at I = 1 + 2*1, J = 0 + 2*1 is a[1][0] b[1][1]
        assert_eq!(kron(&a, &b).get(3, 2), &gqi(3 * 8));
    }

    #[test]
    fn kron_rectangular() {
        let a = Q::from_i64_rows(&[&[1, 2, 3]]).unwrap();
        let b = Q::from_i64_rows(&[&[1], &[10]]).unwrap();
        let k = kron(&a, &b);
        assert_eq!((k.rows(), k.cols()), (2, 3));
        assert_eq!(k.row(1), &[gqi(10), gqi(20), gqi(30)]);
    }

    #[test]
    fn small_determinants() {
        assert_eq!(det(&Q::identity(5)).unwrap(), gqi(1));
        let m = Q::from_i64_rows(&[&[1, 2], &[3, 4]]).unwrap();
        assert_eq!(det(&m).unwrap(), gqi(-2));
        let f = DenseMatrix::<C64>::from_i64_rows(&[&[1, 2], &[3, 4]]).unwrap();
        assert!(det(&f).unwrap().approx_eq(&C64::new(-2.0, 0.0)));
        let r = DenseMatrix::<Rational>::from_i64_rows(&[&[0, 1], &[1, 0]]).unwrap();
        assert_eq!(det(&r).unwrap(), Rational::from_i64(-1));
        assert!(matches!(det(&Q::zeros(2, 3)), Err(Error::NotSquare { .. })));
    }

    #[test]
    fn det_handles_zero_pivots() {
        let m = Q::from_i64_rows(&[&[0, 0, 1], &[0, 1, 0], &[1, 0, 0]]).unwrap();
        assert_eq!(det(&m).unwrap(), gqi(-1));
        let singular = Q::from_i64_rows(&[&[1, 2], &[2, 4]]).unwrap();
        assert_eq!(det(&singular).unwrap(), gqi(0));
        assert_eq!(det(&Q::zeros(0, 0)).unwrap(), gqi(1));
    }

    #[test]
    fn ranks() {
        assert_eq!(rank(&Q::zeros(3, 3)).unwrap(), 0);
        assert_eq!(rank(&Q::jordan_block(3, &gqi(0))).unwrap(), 2);
        let n2 = Q::jordan_block(2, &gqi(0));
        assert_eq!(rank(&kron(&n2, &n2)).unwrap(), 1);
        let f = DenseMatrix::<C64>::identity(2);
        assert_eq!(rank(&f), Err(Error::InexactScalar("rank")));
    }

    #[test]
    fn nullity_sequences() {
        let j3 = Q::jordan_block(3, &gqi(0));
        assert_eq!(nullity_sequence(&j3, &gqi(0), 4).unwrap(), vec![1, 2, 3, 3]);
        let j2 = Q::jordan_block(2, &gqi(5));
        assert_eq!(nullity_sequence(&j2, &gqi(5), 3).unwrap(), vec![1, 2, 2]);
        // Blocks of size >= k are w_k - w_{k-1}: here [2, 1, 1] -> sizes {3, 1}.
        let k = kron(&Q::jordan_block(2, &gqi(2)), &Q::jordan_block(2, &gqi(3)));
        assert_eq!(nullity_sequence(&k, &gqi(6), 5).unwrap(), vec![2, 3, 4, 4, 4]);
        assert!(nullity_sequence(&j3, &gqi(0), 0).is_err());
    }

    #[test]
    fn complex_entries() {
        let i = gq(0, 1, 1, 1);
        let m = Q::from_rows(vec![vec![i.clone(), gqi(0)], vec![gqi(0), i.clone()]]).unwrap();
        assert_eq!(det(&m).unwrap(), gqi(-1));
    }

    #[test]
    fn labels_are_carried() {
        let a = Q::identity(2).with_labels(Some(vec![-1, 4]), Some(vec![0, 1])).unwrap();
        let b = Q::identity(2).with_labels(Some(vec![0, 1]), Some(vec![7, 9])).unwrap();
        let c = mat_mul(&a, &b).unwrap();
        assert_eq!(c.row_labels(), Some(&[-1, 4][..]));
        assert_eq!(c.col_labels(), Some(&[7, 9][..]));
        assert!(Q::identity(2).with_labels(Some(vec![1]), None).is_err());
    }
}
