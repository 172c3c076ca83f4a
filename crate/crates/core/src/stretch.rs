//! Stretching maps `ρ_F` and `ρ_F⁰`, the determinant character `κ`, slot
//! permutation operators, the similarity witness between an injective map
//! and the tensor-product map, and checks of the averaging decomposition.

use rand::Rng;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::index::{IndexMap, Permutation};
use crate::linalg::{det, mat_mul, rank, DenseMatrix, DenseVector};
use crate::random::RandomScalar;
use crate::scalar::{GaussQ, Scalar};
use crate::tensor::{average, same_domain, Tensor, TensorVector};

/// `ρ_F^A(T)`: a square matrix whose rows and columns are labeled by the
/// sorted distinct values of `F` on the domain.
#[derive(Debug, Clone, PartialEq)]
pub struct StretchedMatrix<S> {
    matrix: DenseMatrix<S>,
    labels: Vec<i64>,
}

impl<S: Scalar> StretchedMatrix<S> {
    pub fn from_parts(matrix: DenseMatrix<S>, labels: Vec<i64>) -> Result<Self> {
        if !matrix.is_square() || matrix.rows() != labels.len() {
            return Err(Error::Dimension("stretched matrix must be square with one label per row".into()));
        }
        if labels.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Dimension("labels must be strictly increasing".into()));
        }
        let matrix = matrix.with_labels(Some(labels.clone()), Some(labels.clone()))?;
        Ok(Self { matrix, labels })
    }

    pub fn matrix(&self) -> &DenseMatrix<S> {
        &self.matrix
    }

    pub fn into_matrix(self) -> DenseMatrix<S> {
        self.matrix
    }

    pub fn labels(&self) -> &[i64] {
        &self.labels
    }

    pub fn side(&self) -> usize {
        self.labels.len()
    }

    /// Entry at the given `F` values.
    pub fn at(&self, row_label: i64, col_label: i64) -> Option<&S> {
        let r = self.labels.binary_search(&row_label).ok()?;
        let c = self.labels.binary_search(&col_label).ok()?;
        Some(self.matrix.get(r, c))
    }
}

/// `ρ_F(T)`: entry `(F(i), F(j))` accumulates `T_{i,j}` over all preimages.
pub fn stretch<S: Scalar>(t: &Tensor<S>, map: &IndexMap) -> Result<StretchedMatrix<S>> {
    same_domain(t.domain(), map.domain(), "stretch")?;
    let part = map.partition();
    let n = part.len();
    let mut m = DenseMatrix::zeros(n, n);
    for r in 0..t.side() {
        let cr = part.class_of(r);
        for c in 0..t.side() {
            let v = t.get_pos(r, c);
            if !v.is_zero() {
                m.add_at(cr, part.class_of(c), v.clone());
            }
        }
    }
    StretchedMatrix::from_parts(m, part.labels())
}

/// `ρ_F⁰(x)`: component `F(i)` accumulates `x_i` over the class.
pub fn stretch_vector<S: Scalar>(x: &TensorVector<S>, map: &IndexMap) -> Result<DenseVector<S>> {
    same_domain(x.domain(), map.domain(), "stretch_vector")?;
    let part = map.partition();
    let data = part
        .classes()
        .iter()
        .map(|cl| cl.positions.iter().fold(S::zero(), |acc, &p| acc + x.entries()[p].clone()))
        .collect();
    DenseVector::new(data).with_labels(part.labels())
}

/// `κ(T) = det ρ_F^A(T)`.
pub fn kappa<S: Scalar>(t: &Tensor<S>, map: &IndexMap) -> Result<S> {
    det(stretch(t, map)?.matrix())
}

/// `R_σ(ρ_F(T)) = ρ_{F∘σ}(T)`.
pub fn permute_stretch<S: Scalar>(t: &Tensor<S>, map: &IndexMap, sigma: &Permutation) -> Result<StretchedMatrix<S>> {
    stretch(t, &map.compose_with_permutation(sigma)?)
}

/// A permutation `σ` of `{0, ..., N-1}` with `F = σ ∘ F_TP` once `F(A)` is
/// relabeled to `{0, ..., N-1}` by rank.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimilarityWitness {
    permutation: Vec<usize>,
}

impl SimilarityWitness {
    /// `σ` in one-line notation over `0..N`.
    pub fn permutation(&self) -> &[usize] {
        &self.permutation
    }

    /// `U_σ` with `U[σ(k)][k] = 1`.
    pub fn matrix<S: Scalar>(&self) -> DenseMatrix<S> {
        let n = self.permutation.len();
        let mut u = DenseMatrix::zeros(n, n);
        for (k, &s) in self.permutation.iter().enumerate() {
            u.set(s, k, S::one());
        }
        u
    }

    /// `U_σ M U_σ⁻¹`, with `U_σ⁻¹ = U_σᵗ`.
    pub fn conjugate<S: Scalar>(&self, m: &DenseMatrix<S>) -> Result<DenseMatrix<S>> {
        let u = self.matrix::<S>();
        mat_mul(&mat_mul(&u, m)?, &u.transpose())
    }

    /// Checks `ρ_F(E) = U_σ ρ_TP(E) U_σ⁻¹` on every matrix unit `E`, which
    /// span `Mat(A)`.
    pub fn verify(&self, map: &IndexMap) -> Result<bool> {
        let domain = map.domain();
        let tp = IndexMap::mixed_radix(domain.clone())?;
        let n = domain.len();
        for r in 0..n {
            for c in 0..n {
                let e = Tensor::<GaussQ>::matrix_unit(domain.clone(), r, c);
                let lhs = stretch(&e, map)?.into_matrix().unlabeled();
                let rhs = self.conjugate(&stretch(&e, &tp)?.into_matrix().unlabeled())?.unlabeled();
                if lhs != rhs {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }
}

/// Witness that an injective map on a rectangular set is similar to the
/// tensor-product map.
pub fn tp_similarity_witness(map: &IndexMap) -> Result<SimilarityWitness> {
    if !map.domain().is_rectangular() {
        return Err(Error::NotRectangular);
    }
    if !map.is_injective() {
        return Err(Error::NotInjective("two points share an F value".into()));
    }
    let mut sorted = map.values().to_vec();
    sorted.sort_unstable();
    // Point k sits at row F_TP = k of ρ_TP and at row rank(F(k)) of ρ_F.
    let permutation = map
        .values()
        .iter()
        .map(|v| sorted.binary_search(v).expect("value present"))
        .collect();
    Ok(SimilarityWitness { permutation })
}

/// Outcome of a named check, serialized as `{"check", "passed", "details"}`.
#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub check: String,
    pub passed: bool,
    pub details: Value,
}

impl Report {
    pub fn to_json(&self) -> Value {
        json!({ "check": self.check, "passed": self.passed, "details": self.details })
    }
}

/// Class-pair indicator tensors `1_{a x b}` in class order (row-major over pairs).
fn class_pair_indicators(map: &IndexMap) -> Vec<Tensor<GaussQ>> {
    let part = map.partition();
    let mut out = Vec::with_capacity(part.len() * part.len());
    for a in part.classes() {
        for b in part.classes() {
            let mut t = Tensor::zeros(map.domain().clone());
            for &r in &a.positions {
                for &c in &b.positions {
                    t.set_pos(r, c, GaussQ::from_i64(1));
                }
            }
            out.push(t);
        }
    }
    out
}

/// Rank of `ρ_F` restricted to the span of class-pair indicators.
pub fn indicator_stretch_rank(map: &IndexMap) -> Result<usize> {
    let images = class_pair_indicators(map)
        .iter()
        .map(|t| stretch(t, map).map(|s| s.into_matrix().data().to_vec()))
        .collect::<Result<Vec<_>>>()?;
    rank(&DenseMatrix::from_rows(images)?)
}

/// Checks, for one tensor:
/// (i) `ρ_F(Ψ̂(T)) = ρ_F(T)`;
/// (ii) `ρ_F` is injective on the span of class-pair indicators;
/// (iii) `ρ_F(Ψ(T)) = D ρ_F(T) D` with `D = diag(class sizes)`.
pub fn verify_averaging_decomposition<S: Scalar>(t: &Tensor<S>, map: &IndexMap) -> Result<Report> {
    let base = stretch(t, map)?;
    let normalized = stretch(&average(t, map, true)?, map)?;
    let preserves = normalized.matrix().approx_eq(base.matrix());

    let classes = map.partition().len();
    let indicator_rank = indicator_stretch_rank(map)?;
    let injective = indicator_rank == classes * classes;

    let sizes = map.partition().sizes();
    let d = DenseMatrix::from_fn(classes, classes, |i, j| {
        if i == j {
            S::from_i64(sizes[i] as i64)
        } else {
            S::zero()
        }
    });
    let raw = stretch(&average(t, map, false)?, map)?;
    let scaled = mat_mul(&mat_mul(&d, &base.matrix().clone().unlabeled())?, &d)?;
    let raw_ok = raw.matrix().clone().unlabeled().approx_eq(&scaled);

    Ok(Report {
        check: "averaging-decomposition".into(),
        passed: preserves && injective && raw_ok,
        details: json!({
            "normalized_preserves_stretch": preserves,
            "indicator_rank": indicator_rank,
            "class_count": classes,
            "injective_on_indicators": injective,
            "raw_equals_scaled": raw_ok,
        }),
    })
}

/// Samples tensors in the kernel of `ρ_F` (combinations of within-class
/// differences `E_{i,j} - E_{i',j'}` with `i ~ i'`, `j ~ j'`) and checks that
/// they stay in the kernel of `ρ_{F∘σ}`.
pub fn kernel_preservation_check<R: Rng + ?Sized>(
    map: &IndexMap,
    sigma: &Permutation,
    trials: usize,
    rng: &mut R,
) -> Result<Report> {
    let permuted = map.compose_with_permutation(sigma)?;
    let part = map.partition();
    let domain = map.domain();
    let nontrivial: Vec<_> = part.classes().iter().filter(|c| c.size() > 1).collect();
    if nontrivial.is_empty() {
        return Ok(Report {
            check: "kernel-preservation".into(),
            passed: true,
            details: json!({ "trials": 0, "failures": 0, "kernel": "trivial" }),
        });
    }

    let mut failures = 0;
    let mut first_failure = Value::Null;
    for trial in 0..trials {
        let mut t = Tensor::<GaussQ>::zeros(domain.clone());
        for _ in 0..3 {
            // Row pair from one class, column pair from any class.
            let rows = nontrivial[rng.gen_range(0..nontrivial.len())];
            let cols = &part.classes()[rng.gen_range(0..part.len())];
            let (r1, r2) = (pick(rng, &rows.positions), pick(rng, &rows.positions));
            let (c1, c2) = (pick(rng, &cols.positions), pick(rng, &cols.positions));
            let coeff = GaussQ::random(rng);
            let mut d = Tensor::zeros(domain.clone());
            d.set_pos(r1, c1, coeff.clone());
            let prev = d.get_pos(r2, c2).clone();
            d.set_pos(r2, c2, prev - coeff);
            t = t.add(&d)?;
        }
        debug_assert!(stretch(&t, map)?.matrix().is_zero());
        if !stretch(&t, &permuted)?.matrix().is_zero() {
            failures += 1;
            if first_failure.is_null() {
                first_failure = json!({ "trial": trial });
            }
        }
    }
    Ok(Report {
        check: "kernel-preservation".into(),
        passed: failures == 0,
        details: json!({ "trials": trials, "failures": failures, "first_failure": first_failure }),
    })
}

fn pick<R: Rng + ?Sized>(rng: &mut R, xs: &[usize]) -> usize {
    xs[rng.gen_range(0..xs.len())]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::index::{mi, IndexSet};
    use crate::random::seeded;
    use crate::scalar::gqi;
    use crate::tensor::{convolve, pure_tensor};
    use std::collections::BTreeMap;

    type Q = DenseMatrix<GaussQ>;

    fn sq2() -> IndexSet {
        IndexSet::rectangular(&[2, 2]).unwrap()
    }

    #[test]
    fn tp_identity_stretches_to_identity() {
        let t = pure_tensor(&[Q::identity(2), Q::identity(3), Q::identity(2)]).unwrap();
        let f = IndexMap::mixed_radix(t.domain().clone()).unwrap();
        let s = stretch(&t, &f).unwrap();
        assert_eq!(s.matrix().clone().unlabeled(), Q::identity(12));
        assert_eq!(s.labels(), (0..12).collect::<Vec<_>>());
    }

    #[test]
    fn negative_labels_are_kept() {
        let t = Tensor::<GaussQ>::identity(sq2());
        let f = IndexMap::linear(sq2(), &[1, -1]).unwrap();
        let s = stretch(&t, &f).unwrap();
        assert_eq!(s.labels(), &[-1, 0, 1]);
        assert_eq!(s.at(0, 0), Some(&gqi(2)));
        assert_eq!(s.matrix().row_labels(), Some(&[-1, 0, 1][..]));
    }

    #[test]
    fn stretch_vector_examples() {
        let f = IndexMap::linear(sq2(), &[1, 1]).unwrap();
        let a = TensorVector::<GaussQ>::basis(sq2(), &mi(&[0, 1])).unwrap();
        let b = TensorVector::<GaussQ>::basis(sq2(), &mi(&[1, 0])).unwrap();
        let sum = stretch_vector(&a.add(&b).unwrap(), &f).unwrap();
        assert_eq!(sum.data(), &[gqi(0), gqi(2), gqi(0)]);
        assert!(stretch_vector(&a.sub(&b).unwrap(), &f).unwrap().is_zero());
    }

    #[test]
    fn kappa_of_identity_and_kronecker() {
        let f = IndexMap::linear(sq2(), &[3, 1]).unwrap();
        assert_eq!(kappa(&Tensor::<GaussQ>::identity(sq2()), &f).unwrap(), gqi(1));
        let a = Q::from_i64_rows(&[&[1, 2], &[3, 4]]).unwrap();
        let b = Q::from_i64_rows(&[&[2, 1], &[1, 3]]).unwrap();
        let t = pure_tensor(&[a.clone(), b.clone()]).unwrap();
        let tp = IndexMap::mixed_radix(sq2()).unwrap();
        let da = det(&a).unwrap();
        let db = det(&b).unwrap();
        assert_eq!(kappa(&t, &tp).unwrap(), da.clone() * da * db.clone() * db);
    }

    #[test]
    fn witness_for_small_table() {
        let d = IndexSet::rectangular(&[3]).unwrap();
        let pairs: BTreeMap<_, _> = [(mi(&[0]), 2), (mi(&[1]), 0), (mi(&[2]), 1)].into_iter().collect();
        let f = IndexMap::table(d.clone(), pairs).unwrap();
        let w = tp_similarity_witness(&f).unwrap();
        // F = σ ∘ F_TP: σ(0) = 2, σ(1) = 0, σ(2) = 1.
        assert_eq!(w.permutation(), &[2, 0, 1]);
        assert!(w.verify(&f).unwrap());

        let tp = IndexMap::mixed_radix(sq2()).unwrap();
        assert_eq!(tp_similarity_witness(&tp).unwrap().permutation(), &[0, 1, 2, 3]);

        // k = (1, 2) on {0,1}^2 takes values 0,1,2,3 at (0,0),(1,0),(0,1),(1,1).
        let lin = IndexMap::linear(sq2(), &[1, 2]).unwrap();
        let w = tp_similarity_witness(&lin).unwrap();
        assert_eq!(w.permutation(), &[0, 1, 2, 3]);
        let lin = IndexMap::linear(sq2(), &[2, 1]).unwrap();
        let w = tp_similarity_witness(&lin).unwrap();
        assert_eq!(w.permutation(), &[0, 2, 1, 3]);
        assert!(w.verify(&lin).unwrap());
    }

    #[test]
    fn witness_rejects_bad_maps() {
        let f = IndexMap::linear(sq2(), &[1, 1]).unwrap();
        assert!(matches!(tp_similarity_witness(&f), Err(Error::NotInjective(_))));
        let e = IndexSet::explicit(vec![mi(&[0]), mi(&[5])]).unwrap();
        let g = IndexMap::linear(e, &[1]).unwrap();
        assert_eq!(tp_similarity_witness(&g), Err(Error::NotRectangular));
    }

    #[test]
    fn averaging_decomposition_holds_for_diagonal_map() {
        let mut rng = seeded(3);
        let f = IndexMap::linear(sq2(), &[1, 1]).unwrap();
        let t = crate::random::random_tensor::<GaussQ, _>(&mut rng, &sq2());
        let r = verify_averaging_decomposition(&t, &f).unwrap();
        assert!(r.passed, "{:?}", r.details);
        assert_eq!(r.details["indicator_rank"], 9);
    }

    #[test]
    fn kernel_check_examples() {
        let mut rng = seeded(5);
        let swap = Permutation::parse("2,1").unwrap();
        let tp = IndexMap::mixed_radix(sq2()).unwrap();
        assert!(kernel_preservation_check(&tp, &swap, 10, &mut rng).unwrap().passed);

        // e_(0,1) ⊗ e_(0,0) − e_(1,0) ⊗ e_(0,0) under F = (1,1)
        let f = IndexMap::linear(sq2(), &[1, 1]).unwrap();
        let mut t = Tensor::<GaussQ>::zeros(sq2());
        t.set(&mi(&[0, 1]), &mi(&[0, 0]), gqi(1)).unwrap();
        t.set(&mi(&[1, 0]), &mi(&[0, 0]), gqi(-1)).unwrap();
        assert!(stretch(&t, &f).unwrap().matrix().is_zero());
        assert!(permute_stretch(&t, &f, &swap).unwrap().matrix().is_zero());
        assert!(kernel_preservation_check(&f, &swap, 20, &mut rng).unwrap().passed);

        let m = IndexMap::max_coord(sq2()).unwrap();
        assert!(kernel_preservation_check(&m, &swap, 20, &mut rng).unwrap().passed);
    }

    #[test]
    fn kernel_not_preserved_for_asymmetric_map() {
        // k = (1, 2) on {0,1,2}^2: (2,0) ~ (0,1), but their swaps (0,2) and (1,0)
        // take the values 4 and 1, so ρ_{F∘σ} separates them.
        let d = IndexSet::rectangular(&[3, 3]).unwrap();
        let f = IndexMap::linear(d.clone(), &[1, 2]).unwrap();
        let swap = Permutation::parse("2,1").unwrap();
        let mut t = Tensor::<GaussQ>::zeros(d);
        t.set(&mi(&[2, 0]), &mi(&[0, 0]), gqi(1)).unwrap();
        t.set(&mi(&[0, 1]), &mi(&[0, 0]), gqi(-1)).unwrap();
        assert!(stretch(&t, &f).unwrap().matrix().is_zero());
        assert!(!permute_stretch(&t, &f, &swap).unwrap().matrix().is_zero());
        let r = kernel_preservation_check(&f, &swap, 30, &mut seeded(1)).unwrap();
        assert!(!r.passed);
    }

    #[test]
    fn homomorphism_smoke() {
        let mut rng = seeded(9);
        let d = IndexSet::rectangular(&[2, 3]).unwrap();
        let f = IndexMap::linear(d.clone(), &[1, 1]).unwrap();
        let t1 = crate::random::random_tensor::<GaussQ, _>(&mut rng, &d);
        let t2 = crate::random::random_tensor::<GaussQ, _>(&mut rng, &d);
        let lhs = stretch(&convolve(&t1, &t2, &f).unwrap(), &f).unwrap();
        let rhs = mat_mul(stretch(&t1, &f).unwrap().matrix(), stretch(&t2, &f).unwrap().matrix()).unwrap();
        assert_eq!(lhs.matrix(), &rhs);
    }
}
