//! Seeded property suites. Each trial draws from its own generator, derived
//! from the suite seed and the trial index, so a report does not depend on
//! how many trials ran before it.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use rand::seq::SliceRandom;
use rand::Rng;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::index::{IndexMap, IndexSet, Permutation};
use crate::jordan::{certify_nfold, jordan_nfold, jordan_oracle, jordan_pair, JordanSpec};
use crate::linalg::{det, kron, mat_mul, mat_vec, DenseMatrix};
use crate::random::{random_injective_table, random_matrix, random_rectangle, random_table, random_tensor, random_vector, seeded, RandomScalar, SeededRng};
use crate::scalar::{gqi, ExactScalar, GaussQ, Scalar};
use crate::stretch::{kappa, kernel_preservation_check, permute_stretch, stretch, stretch_vector, tp_similarity_witness, verify_averaging_decomposition};
use crate::tensor::{act, average, convolve, pure_tensor, Tensor};

pub const SUITES: [&str; 8] = [
    "homomorphism",
    "associativity",
    "adjoint",
    "kappa",
    "averaging",
    "permutation",
    "jordan",
    "tp-witness",
];

/// Pass/fail counts for one suite run.
#[derive(Debug, Clone, PartialEq)]
pub struct SuiteReport {
    pub suite: String,
    pub seed: u64,
    pub trials: usize,
    pub passed: usize,
    pub failed: usize,
    pub failures: Vec<Value>,
}

impl SuiteReport {
    pub fn all_passed(&self) -> bool {
        self.failed == 0
    }

    pub fn to_json(&self) -> Value {
        json!({
            "suite": self.suite,
            "seed": self.seed,
            "trials": self.trials,
            "passed": self.passed,
            "failed": self.failed,
            "ok": self.all_passed(),
            "failures": self.failures,
        })
    }
}

/// The generator for trial `trial` of a run seeded with `seed`.
pub fn trial_rng(seed: u64, trial: usize) -> SeededRng {
    let mut rng = seeded(seed);
    rng.set_stream(trial as u64);
    rng
}

/// A trial returns the names of the clauses that failed.
type Clauses = Vec<&'static str>;

fn run_trials(suite: &str, seed: u64, trials: usize, mut body: impl FnMut(usize, &mut SeededRng) -> Result<Clauses>) -> SuiteReport {
    let mut report = SuiteReport {
        suite: suite.to_string(),
        seed,
        trials,
        passed: 0,
        failed: 0,
        failures: Vec::new(),
    };
    for trial in 0..trials {
        let mut rng = trial_rng(seed, trial);
        match body(trial, &mut rng) {
            Ok(bad) if bad.is_empty() => report.passed += 1,
            Ok(bad) => {
                report.failed += 1;
                report.failures.push(json!({ "trial": trial, "clauses": bad }));
            }
            Err(e) => {
                report.failed += 1;
                report.failures.push(json!({ "trial": trial, "error": e.to_string() }));
            }
        }
    }
    report
}

fn clause(bad: &mut Clauses, name: &'static str, ok: bool) {
    if !ok {
        bad.push(name);
    }
}

/// Runs a named suite. `trials = 0` is allowed; the Jordan suite still runs
/// its fixed grid.
pub fn run_suite(name: &str, trials: usize, seed: u64) -> Result<SuiteReport> {
    Ok(match name {
        "homomorphism" => homomorphism(trials, seed),
        "associativity" => associativity(trials, seed),
        "adjoint" => adjoint(trials, seed),
        "kappa" => kappa_suite(trials, seed),
        "averaging" => averaging(trials, seed),
        "permutation" => permutation(trials, seed),
        "jordan" => jordan(trials, seed),
        "tp-witness" => tp_witness(trials, seed),
        other => {
            return Err(Error::parse(
                "suite",
                format!("unknown suite `{other}`; expected one of {}", SUITES.join(", ")),
            ))
        }
    })
}

/// Linear with `k ∈ [-2, 2]^l`, mixed radix, max coordinate, or a random table.
pub fn random_algebra_map<R: Rng + ?Sized>(rng: &mut R, domain: &IndexSet) -> IndexMap {
    match rng.gen_range(0..4) {
        0 => {
            let k: Vec<i64> = (0..domain.arity()).map(|_| rng.gen_range(-2..=2)).collect();
            IndexMap::linear(domain.clone(), &k).expect("arity matches")
        }
        1 => IndexMap::mixed_radix(domain.clone()).expect("rectangular"),
        2 => IndexMap::max_coord(domain.clone()).expect("total"),
        _ => random_table(rng, domain),
    }
}

fn setup(rng: &mut SeededRng) -> (IndexSet, IndexMap) {
    let domain = random_rectangle(rng, 3, 3);
    let map = random_algebra_map(rng, &domain);
    (domain, map)
}

type QTensor = Tensor<GaussQ>;

fn homomorphism(trials: usize, seed: u64) -> SuiteReport {
    run_trials("homomorphism", seed, trials, |_, rng| {
        let (domain, map) = setup(rng);
        let t1: QTensor = random_tensor(rng, &domain);
        let t2: QTensor = random_tensor(rng, &domain);
        let x = random_vector::<GaussQ, _>(rng, &domain);
        let mut bad = Clauses::new();

        let lhs = stretch(&convolve(&t1, &t2, &map)?, &map)?;
        let rhs = mat_mul(stretch(&t1, &map)?.matrix(), stretch(&t2, &map)?.matrix())?;
        clause(&mut bad, "convolution", lhs.matrix() == &rhs);

        let lhs = stretch_vector(&act(&t1, &x, &map)?, &map)?;
        let rhs = mat_vec(stretch(&t1, &map)?.matrix(), &stretch_vector(&x, &map)?)?;
        clause(&mut bad, "action", lhs.data() == rhs.data());
        Ok(bad)
    })
}

/// `(T ∗ Id)_{i,j} = sum_{m ~ j} T_{i,m}` and `(Id ∗ T)_{i,j} = sum_{m ~ i} T_{m,j}`,
/// computed straight from the partition.
fn identity_formulas(t: &QTensor, map: &IndexMap) -> (QTensor, QTensor) {
    let part = map.partition();
    let class = |p: usize| &part.classes()[part.class_of(p)].positions;
    let right = Tensor::from_fn(t.domain().clone(), |i, j| {
        class(j).iter().fold(GaussQ::zero(), |acc, &m| acc + t.get_pos(i, m).clone())
    });
    let left = Tensor::from_fn(t.domain().clone(), |i, j| {
        class(i).iter().fold(GaussQ::zero(), |acc, &m| acc + t.get_pos(m, j).clone())
    });
    (right, left)
}

fn associativity(trials: usize, seed: u64) -> SuiteReport {
    run_trials("associativity", seed, trials, |_, rng| {
        let (domain, map) = setup(rng);
        let [t1, t2, t3]: [QTensor; 3] = std::array::from_fn(|_| random_tensor(rng, &domain));
        let mut bad = Clauses::new();

        let left = convolve(&convolve(&t1, &t2, &map)?, &t3, &map)?;
        let right = convolve(&t1, &convolve(&t2, &t3, &map)?, &map)?;
        clause(&mut bad, "associative", left == right);

        let id = Tensor::identity(domain.clone());
        let (t_id, id_t) = identity_formulas(&t1, &map);
        clause(&mut bad, "right-identity-formula", convolve(&t1, &id, &map)? == t_id);
        clause(&mut bad, "left-identity-formula", convolve(&id, &t1, &map)? == id_t);
        Ok(bad)
    })
}

fn adjoint(trials: usize, seed: u64) -> SuiteReport {
    run_trials("adjoint", seed, trials, |_, rng| {
        let (domain, map) = setup(rng);
        let t1: QTensor = random_tensor(rng, &domain);
        let t2: QTensor = random_tensor(rng, &domain);
        let mut bad = Clauses::new();

        let lhs = stretch(&convolve(&t2, &t1, &map)?, &map)?.into_matrix().transpose();
        let rhs = stretch(&convolve(&t1.star(), &t2.star(), &map)?, &map)?.into_matrix();
        clause(&mut bad, "transpose-law", lhs == rhs);

        let injective = IndexMap::mixed_radix(domain.clone())?;
        let lhs = convolve(&t1, &t2, &injective)?.star();
        let rhs = convolve(&t2.star(), &t1.star(), &injective)?;
        clause(&mut bad, "anti-automorphism", lhs == rhs);
        clause(&mut bad, "involution", t1.star().star() == t1);
        Ok(bad)
    })
}

fn det_power(d: &GaussQ, e: usize) -> GaussQ {
    (0..e).fold(GaussQ::one(), |acc, _| acc * d.clone())
}

fn kappa_suite(trials: usize, seed: u64) -> SuiteReport {
    run_trials("kappa", seed, trials, |_, rng| {
        let (domain, map) = setup(rng);
        let t1: QTensor = random_tensor(rng, &domain);
        let t2: QTensor = random_tensor(rng, &domain);
        let mut bad = Clauses::new();
        let k12 = kappa(&convolve(&t1, &t2, &map)?, &map)?;
        clause(&mut bad, "multiplicative", k12 == kappa(&t1, &map)? * kappa(&t2, &map)?);

        // Tensor-product case: det(A ⊗ B) = det(A)^{n_B} det(B)^{n_A}.
        let (n, m) = (rng.gen_range(1..=3), rng.gen_range(1..=3));
        let a: DenseMatrix<GaussQ> = random_matrix(rng, n, n);
        let b: DenseMatrix<GaussQ> = random_matrix(rng, m, m);
        let t = pure_tensor(&[a.clone(), b.clone()])?;
        let tp = IndexMap::mixed_radix(t.domain().clone())?;
        let expected = det_power(&det(&a)?, m) * det_power(&det(&b)?, n);
        clause(&mut bad, "tensor-product", kappa(&t, &tp)? == expected);
        Ok(bad)
    })
}

/// Maps on `{0,1}^2` used by the averaging suite, chosen per trial in turn.
pub fn averaging_maps() -> Vec<(&'static str, IndexMap)> {
    let sq = IndexSet::rectangular(&[2, 2]).expect("valid dims");
    vec![
        ("linear(1,1)", IndexMap::linear(sq.clone(), &[1, 1]).expect("arity 2")),
        ("linear(1,-1)", IndexMap::linear(sq.clone(), &[1, -1]).expect("arity 2")),
        ("max", IndexMap::max_coord(sq).expect("total")),
    ]
}

fn averaging(trials: usize, seed: u64) -> SuiteReport {
    let maps = averaging_maps();
    run_trials("averaging", seed, trials, |trial, rng| {
        let map = &maps[trial % maps.len()].1;
        let t: QTensor = random_tensor(rng, map.domain());
        let mut bad = Clauses::new();

        let report = verify_averaging_decomposition(&t, map)?;
        let detail = |key: &str| report.details[key].as_bool() == Some(true);
        clause(&mut bad, "normalized-preserves-stretch", detail("normalized_preserves_stretch"));
        clause(&mut bad, "injective-on-indicators", detail("injective_on_indicators"));
        clause(&mut bad, "raw-equals-scaled", detail("raw_equals_scaled"));

        let avg = average(&t, map, true)?;
        clause(&mut bad, "idempotent", average(&avg, map, true)? == avg);

        let part = map.partition();
        let mut block_means = true;
        for a in part.classes() {
            for b in part.classes() {
                let mut sum = GaussQ::zero();
                for &r in &a.positions {
                    for &c in &b.positions {
                        sum += t.get_pos(r, c).clone();
                    }
                }
                let mean = sum / GaussQ::from_i64((a.size() * b.size()) as i64);
                for &r in &a.positions {
                    for &c in &b.positions {
                        block_means &= avg.get_pos(r, c) == &mean;
                    }
                }
            }
        }
        clause(&mut bad, "block-means", block_means);
        Ok(bad)
    })
}

pub fn random_permutation<R: Rng + ?Sized>(rng: &mut R, l: usize) -> Permutation {
    let mut slots: Vec<usize> = (1..=l).collect();
    slots.shuffle(rng);
    Permutation::from_one_line(&slots).expect("shuffle of 1..=l")
}

/// `{0..n-1}^l`, so every slot permutation maps the set into itself.
fn random_cube<R: Rng + ?Sized>(rng: &mut R) -> IndexSet {
    let l = rng.gen_range(2..=3);
    let n = rng.gen_range(1..=3);
    IndexSet::rectangular(&vec![n; l]).expect("positive dims")
}

/// Maps whose classes are unions of orbits of slot permutations: their
/// kernels are carried into the kernels of the permuted maps.
fn random_symmetric_map<R: Rng + ?Sized>(rng: &mut R, domain: &IndexSet) -> IndexMap {
    match rng.gen_range(0..3) {
        0 => {
            let c = [1, 2, -1][rng.gen_range(0..3)];
            IndexMap::linear(domain.clone(), &vec![c; domain.arity()]).expect("arity matches")
        }
        1 => IndexMap::max_coord(domain.clone()).expect("total"),
        _ => {
            let mut by_orbit: BTreeMap<Vec<i64>, i64> = BTreeMap::new();
            let pairs = domain
                .points()
                .iter()
                .map(|p| {
                    let mut key = p.coords().to_vec();
                    key.sort_unstable();
                    let v = *by_orbit.entry(key).or_insert_with(|| rng.gen_range(-2..=2));
                    (p.clone(), v)
                })
                .collect();
            IndexMap::table(domain.clone(), pairs).expect("total table")
        }
    }
}

fn sorted_entries(m: &DenseMatrix<GaussQ>) -> Vec<GaussQ> {
    let mut v = m.data().to_vec();
    v.sort_by(|a, b| a.canonical_cmp(b));
    v
}

fn frobenius_sq(m: &DenseMatrix<GaussQ>) -> GaussQ {
    m.data().iter().fold(GaussQ::zero(), |acc, z| acc + GaussQ::new(z.norm_sqr(), Zero::zero()))
}

fn permutation(trials: usize, seed: u64) -> SuiteReport {
    run_trials("permutation", seed, trials, |_, rng| {
        let domain = random_cube(rng);
        let l = domain.arity();
        let n = domain.dims().expect("rectangular")[0];
        let (s1, s2) = (random_permutation(rng, l), random_permutation(rng, l));
        let t: QTensor = random_tensor(rng, &domain);
        let mut bad = Clauses::new();

        // R_{s2} after R_{s1} acts as a single slot permutation.
        let map = random_algebra_map(rng, &domain);
        let two_step = permute_stretch(&t, &map.compose_with_permutation(&s1)?, &s2)?;
        let one_step = permute_stretch(&t, &map, &s2.compose(&s1))?;
        clause(&mut bad, "composition", two_step == one_step);
        clause(&mut bad, "identity", permute_stretch(&t, &map, &Permutation::identity(l))? == stretch(&t, &map)?);

        // Tensor-product setting.
        let tp = IndexMap::mixed_radix(domain.clone())?;
        let before = stretch(&t, &tp)?.into_matrix();
        let after = permute_stretch(&t, &tp, &s1)?.into_matrix();
        clause(&mut bad, "isometry", frobenius_sq(&before) == frobenius_sq(&after));
        clause(&mut bad, "entry-multiset", sorted_entries(&before) == sorted_entries(&after));

        let factors: Vec<DenseMatrix<GaussQ>> = (0..l).map(|_| random_matrix(rng, n, n)).collect();
        let pure = pure_tensor(&factors)?;
        let permuted = permute_stretch(&pure, &tp, &s1)?.into_matrix().unlabeled();
        let order = s1.one_line();
        let expected = order[1..]
            .iter()
            .fold(factors[order[0] - 1].clone(), |acc, &k| kron(&acc, &factors[k - 1]));
        clause(&mut bad, "factor-reorder", permuted == expected);

        let symmetric = random_symmetric_map(rng, &domain);
        let kernel = kernel_preservation_check(&symmetric, &s1, 2, rng)?;
        clause(&mut bad, "kernel-preserved", kernel.passed);
        Ok(bad)
    })
}

/// Cases `(a, b)` of the Jordan grid.
pub const JORDAN_GRID_PAIRS: [(i64, i64); 4] = [(2, 3), (2, 0), (0, 3), (0, 0)];

/// Closed form against the oracle on `J_p(a) ⊗ J_q(b)` for `p, q ≤ 5`.
pub fn jordan_grid_case(p: usize, a: i64, q: usize, b: i64) -> Result<bool> {
    let (a, b) = (gqi(a), gqi(b));
    let closed = jordan_pair(p, &a, q, &b)?;
    let m = kron(
        &DenseMatrix::jordan_block(p, &a),
        &DenseMatrix::jordan_block(q, &b),
    );
    let oracle = jordan_oracle(&m, &[a * b])?.to_spec();
    Ok(closed == oracle)
}

fn random_eigenvalue<R: Rng + ?Sized>(rng: &mut R) -> GaussQ {
    match rng.gen_range(0..4) {
        0 => gqi(0),
        1 => GaussQ::random(rng),
        _ => gqi(rng.gen_range(-2..=3)),
    }
}

fn random_spec<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> JordanSpec<GaussQ> {
    let mut left = dim;
    let mut blocks = Vec::new();
    let mut eigs: Vec<GaussQ> = vec![random_eigenvalue(rng)];
    while left > 0 {
        let size = rng.gen_range(1..=left);
        left -= size;
        if rng.gen_bool(0.3) {
            eigs.push(random_eigenvalue(rng));
        }
        blocks.push((size, eigs[rng.gen_range(0..eigs.len())].clone()));
    }
    JordanSpec::new(blocks).expect("positive sizes")
}

/// Three factor dimensions with product at most 24.
fn random_dims<R: Rng + ?Sized>(rng: &mut R) -> [usize; 3] {
    loop {
        let d = [rng.gen_range(1..=4), rng.gen_range(1..=4), rng.gen_range(1..=3)];
        if d.iter().product::<usize>() <= 24 {
            return d;
        }
    }
}

fn jordan(trials: usize, seed: u64) -> SuiteReport {
    let grid: Vec<(usize, i64, usize, i64)> = JORDAN_GRID_PAIRS
        .iter()
        .flat_map(|&(a, b)| (1..=5).flat_map(move |p| (1..=5).map(move |q| (p, a, q, b))))
        .collect();
    let mut report = run_trials("jordan", seed, grid.len() + trials, |trial, rng| {
        let mut bad = Clauses::new();
        if let Some(&(p, a, q, b)) = grid.get(trial) {
            clause(&mut bad, "pair-grid", jordan_grid_case(p, a, q, b)?);
            return Ok(bad);
        }
        let specs: Vec<_> = random_dims(rng).iter().map(|&d| random_spec(rng, d)).collect();
        let (closed, _, agree) = certify_nfold(&specs)?;
        clause(&mut bad, "nfold-oracle", agree);
        let total: usize = specs.iter().map(JordanSpec::dimension).product();
        clause(&mut bad, "dimension", closed.dimension() == total);
        let mut shuffled = specs.clone();
        shuffled.shuffle(rng);
        clause(&mut bad, "order-independent", jordan_nfold(&shuffled)? == closed);
        Ok(bad)
    });
    report.trials = grid.len() + trials;
    report
}

/// A rectangular set with at most 16 points.
fn small_rectangle<R: Rng + ?Sized>(rng: &mut R) -> IndexSet {
    loop {
        let d = random_rectangle(rng, 3, 4);
        if d.len() <= 16 {
            return d;
        }
    }
}

fn tp_witness(trials: usize, seed: u64) -> SuiteReport {
    run_trials("tp-witness", seed, trials, |_, rng| {
        let domain = small_rectangle(rng);
        let map = random_injective_table(rng, &domain);
        let witness = tp_similarity_witness(&map)?;
        let mut bad = Clauses::new();
        clause(&mut bad, "conjugation", witness.verify(&map)?);

        // The witness also transports a random tensor, not just matrix units.
        let t: QTensor = random_tensor(rng, &domain);
        let direct = stretch(&t, &map)?.into_matrix().unlabeled();
        let via = witness.conjugate(&stretch(&t, &IndexMap::mixed_radix(domain)?)?.into_matrix().unlabeled())?;
        clause(&mut bad, "random-tensor", direct == via.unlabeled());
        Ok(bad)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_suite_passes_a_few_trials() {
        for name in SUITES {
            let r = run_suite(name, 3, 11).unwrap();
            assert!(r.all_passed(), "{}", r.to_json());
        }
    }

    #[test]
    fn unknown_suite_is_rejected() {
        assert!(matches!(run_suite("nope", 1, 0), Err(Error::Parse { .. })));
    }

    #[test]
    fn reports_are_deterministic() {
        let a = run_suite("homomorphism", 5, 3).unwrap().to_json();
        let b = run_suite("homomorphism", 5, 3).unwrap().to_json();
        assert_eq!(a, b);
    }

    #[test]
    fn jordan_grid_runs_with_zero_trials() {
        let r = run_suite("jordan", 0, 0).unwrap();
        assert_eq!((r.trials, r.passed), (100, 100));
    }
}
