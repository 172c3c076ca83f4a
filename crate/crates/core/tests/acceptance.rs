//! Acceptance run: one line per criterion, non-zero exit if any fails.
//!
//! Runs without the libtest harness so the criterion lines are always shown.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use stretchkit::index::IndexSet;
use stretchkit::jordan::{explicit_pair_matrix, jordan_oracle, jordan_pair};
use stretchkit::linalg::{kron, DenseMatrix};
use stretchkit::random::{random_matrix, seeded, RandomScalar, SeededRng};
use stretchkit::scalar::{gqi, GaussQ, Scalar, C64};
use stretchkit::stretch::stretch;
use stretchkit::tensor::pure_tensor;
use stretchkit::verify::{run_suite, SuiteReport};
use stretchkit::{IndexMap, JordanSpec};

/// Absolute entrywise tolerance for the floating-point reproduction.
const ABS_TOL_C64: f64 = 1e-12;
const SEED: u64 = 20_240_601;

type Q = DenseMatrix<GaussQ>;

struct Outcome {
    passed: bool,
    summary: String,
}

fn from_suites(reports: &[SuiteReport]) -> Outcome {
    let passed = reports.iter().all(SuiteReport::all_passed);
    let summary = reports
        .iter()
        .map(|r| {
            let mut s = format!("{} {}/{}", r.suite, r.passed, r.trials);
            if !r.failures.is_empty() {
                s.push_str(&format!(" first failure {}", r.failures[0]));
            }
            s
        })
        .collect::<Vec<_>>()
        .join(", ");
    Outcome { passed, summary }
}

fn suite(name: &str, trials: usize) -> SuiteReport {
    run_suite(name, trials, SEED).expect("known suite")
}

fn sum_map(dims: &[usize], k: &[i64]) -> IndexMap {
    IndexMap::linear(IndexSet::rectangular(dims).unwrap(), k).unwrap()
}

fn stretched<S: Scalar>(a: &DenseMatrix<S>, b: &DenseMatrix<S>, map: &IndexMap) -> DenseMatrix<S> {
    stretch(&pure_tensor(&[a.clone(), b.clone()]).unwrap(), map).unwrap().into_matrix().unlabeled()
}

fn jordan2<S: Scalar>(x: &S) -> DenseMatrix<S> {
    DenseMatrix::jordan_block(2, x)
}

/// The closed-form 3x3 for `F = (1, 1)` on `{0,1}^2`, entry by entry.
fn sum_map_display<S: Scalar>(a: &DenseMatrix<S>, b: &DenseMatrix<S>) -> DenseMatrix<S> {
    let x = |i, j| a.get(i, j).clone();
    let y = |i, j| b.get(i, j).clone();
    DenseMatrix::from_rows(vec![
        vec![x(0, 0) * y(0, 0), x(0, 1) * y(0, 0) + x(0, 0) * y(0, 1), x(0, 1) * y(0, 1)],
        vec![
            x(0, 0) * y(1, 0) + x(1, 0) * y(0, 0),
            x(0, 0) * y(1, 1) + x(1, 1) * y(0, 0) + x(0, 1) * y(1, 0) + x(1, 0) * y(0, 1),
            x(0, 1) * y(1, 1) + x(1, 1) * y(0, 1),
        ],
        vec![x(1, 0) * y(1, 0), x(1, 0) * y(1, 1) + x(1, 1) * y(1, 0), x(1, 1) * y(1, 1)],
    ])
    .unwrap()
}

/// The closed-form 3x3 for `F = (1, -1)` on `{0,1}^2`, rows and columns at labels -1, 0, 1.
fn difference_map_display(a: &Q, b: &Q) -> Q {
    let x = |i, j| a.get(i, j).clone();
    let y = |i, j| b.get(i, j).clone();
    Q::from_rows(vec![
        vec![x(0, 0) * y(1, 1), x(0, 0) * y(1, 0) + x(0, 1) * y(1, 1), x(0, 1) * y(1, 0)],
        vec![
            x(0, 0) * y(0, 1) + x(1, 0) * y(1, 1),
            x(0, 0) * y(0, 0) + x(1, 1) * y(1, 1) + x(0, 1) * y(0, 1) + x(1, 0) * y(1, 0),
            x(0, 1) * y(0, 0) + x(1, 1) * y(1, 0),
        ],
        vec![x(1, 0) * y(0, 1), x(1, 0) * y(0, 0) + x(1, 1) * y(0, 1), x(1, 1) * y(0, 0)],
    ])
    .unwrap()
}

/// `sum_{i,j} a_{ij} * (block placed with its corner at (i, j))` in an `n x n` matrix.
fn shifted_blocks(a: &Q, block: &Q, n: usize) -> Q {
    let mut out = Q::zeros(n, n);
    for i in 0..a.rows() {
        for j in 0..a.cols() {
            for r in 0..block.rows() {
                for c in 0..block.cols() {
                    out.add_at(i + r, j + c, a.get(i, j).clone() * block.get(r, c).clone());
                }
            }
        }
    }
    out
}

fn rng_for(criterion: u64) -> SeededRng {
    seeded(SEED ^ (criterion << 32))
}

fn criterion_1() -> Outcome {
    let mut rng = rng_for(1);
    let map = sum_map(&[2, 2], &[1, 1]);
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let a: DenseMatrix<C64> = random_matrix(&mut rng, 2, 2);
        let b: DenseMatrix<C64> = random_matrix(&mut rng, 2, 2);
        let got = stretched(&a, &b, &map);
        let want = sum_map_display(&a, &b);
        for (g, w) in got.data().iter().zip(want.data()) {
            worst = worst.max((g - w).norm());
        }
    }
    let mut exact = true;
    for _ in 0..25 {
        let (lam, mu) = (GaussQ::random(&mut rng), GaussQ::random(&mut rng));
        let lm = lam.clone() * mu.clone();
        let s = lam.clone() + mu.clone();
        let zero = gqi(0);
        let want = Q::from_rows(vec![
            vec![lm.clone(), s.clone(), gqi(1)],
            vec![zero.clone(), gqi(2) * lm.clone(), s],
            vec![zero.clone(), zero, lm],
        ])
        .unwrap();
        exact &= stretched(&jordan2(&lam), &jordan2(&mu), &map) == want;
    }
    Outcome {
        passed: worst <= ABS_TOL_C64 && exact,
        summary: format!("max abs error {worst:.1e} (tol {ABS_TOL_C64:.0e}) over 100 cases; Jordan instance exact: {exact}"),
    }
}

fn criterion_2() -> Outcome {
    let mut rng = rng_for(2);
    let diff = sum_map(&[2, 2], &[1, -1]);
    let sum23 = sum_map(&[2, 3], &[1, 1]);
    let max = IndexMap::max_coord(IndexSet::rectangular(&[2, 2]).unwrap()).unwrap();
    let (mut diff_ok, mut reflect_ok, mut jordan_ok, mut block_ok, mut max_ok) = (true, true, true, true, true);
    for _ in 0..50 {
        let a: Q = random_matrix(&mut rng, 2, 2);
        let b: Q = random_matrix(&mut rng, 2, 2);
        let got = stretched(&a, &b, &diff);
        diff_ok &= got == difference_map_display(&a, &b);
        // Same matrix as shifted copies of B reflected in both diagonals.
        let b_reflected = Q::from_fn(2, 2, |i, j| b.get(1 - i, 1 - j).clone());
        reflect_ok &= got == shifted_blocks(&a, &b_reflected, 3);

        let (lam, mu) = (GaussQ::random(&mut rng), GaussQ::random(&mut rng));
        let lm = lam.clone() * mu.clone();
        let want = Q::from_rows(vec![
            vec![lm.clone(), mu.clone(), gqi(0)],
            vec![lam.clone(), gqi(2) * lm.clone() + gqi(1), mu.clone()],
            vec![gqi(0), lam.clone(), lm],
        ])
        .unwrap();
        jordan_ok &= stretched(&jordan2(&lam), &jordan2(&mu), &diff) == want;

        let b3: Q = random_matrix(&mut rng, 3, 3);
        block_ok &= stretched(&a, &b3, &sum23) == shifted_blocks(&a, &b3, 4);

        let y = |i, j| b.get(i, j).clone();
        let x = |i, j| a.get(i, j).clone();
        let z = gqi(0);
        let terms = [
            (x(0, 0), b.clone()),
            (x(0, 1), Q::from_rows(vec![vec![z.clone(), y(0, 0) + y(0, 1)], vec![z.clone(), y(1, 0) + y(1, 1)]]).unwrap()),
            (x(1, 0), Q::from_rows(vec![vec![z.clone(), z.clone()], vec![y(0, 0) + y(1, 0), y(0, 1) + y(1, 1)]]).unwrap()),
            (x(1, 1), Q::from_rows(vec![vec![z.clone(), z.clone()], vec![z.clone(), y(0, 0) + y(1, 0) + y(0, 1) + y(1, 1)]]).unwrap()),
        ];
        let want = terms.iter().fold(Q::zeros(2, 2), |acc, (c, m)| acc.add(&m.scale(c)).unwrap());
        max_ok &= stretched(&a, &b, &max) == want;
    }
    Outcome {
        passed: diff_ok && reflect_ok && jordan_ok && block_ok && max_ok,
        summary: format!(
            "difference map {diff_ok}, reflected blocks {reflect_ok}, Jordan center 2λμ+1 {jordan_ok}, \
             2x3 shifted blocks {block_ok}, max map {max_ok} (50 exact cases each)"
        ),
    }
}

fn criterion_3() -> Outcome {
    from_suites(&[suite("homomorphism", 200)])
}

fn criterion_4() -> Outcome {
    from_suites(&[suite("associativity", 100), suite("adjoint", 100), suite("kappa", 100)])
}

fn criterion_5() -> Outcome {
    let report = suite("jordan", 20);
    let grid_ok = report.trials == 120;
    // Exactly one nonzero eigenvalue: the cells sit at 0, not at the nonzero one.
    let zero_eigs = [(2, 1, 3, 0), (3, 0, 2, 5), (1, 4, 4, 0)].iter().all(|&(p, a, q, b)| {
        let closed = jordan_pair(p, &gqi(a), q, &gqi(b)).unwrap();
        let m = kron(&DenseMatrix::jordan_block(p, &gqi(a)), &DenseMatrix::jordan_block(q, &gqi(b)));
        let oracle = jordan_oracle(&m, &[gqi(0)]).unwrap().to_spec();
        let nonzero = if a != 0 { a } else { b };
        let as_printed = JordanSpec::new(closed.blocks().iter().map(|c| (c.size, gqi(nonzero)))).unwrap();
        closed.blocks().iter().all(|c| c.eigenvalue == gqi(0)) && closed == oracle && as_printed != oracle
    });
    let mut out = from_suites(&[report]);
    out.passed &= grid_ok && zero_eigs;
    out.summary.push_str(&format!(" (100 grid + 20 n-fold); one-zero cases have eigenvalue 0: {zero_eigs}"));
    out
}

fn partitions(n: usize, max: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    (1..=n.min(max))
        .rev()
        .flat_map(|first| {
            partitions(n - first, first).into_iter().map(move |mut rest| {
                rest.insert(0, first);
                rest
            })
        })
        .collect()
}

fn criterion_6() -> Outcome {
    let mut rng = rng_for(6);
    let shapes: Vec<Vec<usize>> = (1..=6).flat_map(|d| partitions(d, d)).collect();
    let mut random_spec = |sizes: &[usize]| {
        JordanSpec::new(sizes.iter().map(|&s| (s, GaussQ::random(&mut rng)))).unwrap()
    };
    let mut cases = 0;
    let mut mismatches = 0;
    for c_sizes in &shapes {
        for d_sizes in &shapes {
            let (c, d) = (random_spec(c_sizes), random_spec(d_sizes));
            let t = pure_tensor(&[c.to_matrix(), d.to_matrix()]).unwrap();
            let tp = IndexMap::mixed_radix(t.domain().clone()).unwrap();
            let generic = stretch(&t, &tp).unwrap().into_matrix().unlabeled();
            cases += 1;
            if explicit_pair_matrix(&c, &d).unwrap() != generic {
                mismatches += 1;
            }
        }
    }
    Outcome {
        passed: mismatches == 0,
        summary: format!("{cases} pairs of Jordan sums (each of dimension <= 6), {mismatches} mismatches"),
    }
}

fn criterion_7() -> Outcome {
    from_suites(&[suite("tp-witness", 20)])
}

fn criterion_8() -> Outcome {
    // The suite cycles through its three maps, so 150 trials is 50 per map.
    from_suites(&[suite("averaging", 150)])
}

fn criterion_9() -> Outcome {
    from_suites(&[suite("permutation", 100)])
}

type Criterion = (&'static str, fn() -> Outcome, Duration);

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("sum-map 3x3 reproduction", criterion_1, Duration::from_secs(1)),
        ("difference, 2x3 and max map reproduction", criterion_2, Duration::from_secs(1)),
        ("homomorphism suite", criterion_3, Duration::from_secs(30)),
        ("convolution algebra", criterion_4, Duration::from_secs(30)),
        ("Jordan grid and n-fold", criterion_5, Duration::from_secs(120)),
        ("explicit pair matrix", criterion_6, Duration::from_secs(60)),
        ("similarity witness", criterion_7, Duration::from_secs(30)),
        ("averaging decomposition", criterion_8, Duration::from_secs(10)),
        ("permutation operators", criterion_9, Duration::from_secs(10)),
    ];
    let mut all = true;
    for (k, (name, run, budget)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let out = run();
        let elapsed = start.elapsed();
        let ok = out.passed && elapsed <= *budget;
        all &= ok;
        println!(
            "criterion {}: {} - {name}: {} [{:.2}s, budget {}s]",
            k + 1,
            if ok { "PASS" } else { "FAIL" },
            out.summary,
            elapsed.as_secs_f64(),
            budget.as_secs()
        );
    }
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
