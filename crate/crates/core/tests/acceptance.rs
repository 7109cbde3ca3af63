//! Acceptance suite: one test per criterion, each printing a PASS/FAIL line
//! (visible under `cargo test --test acceptance -- --nocapture`). Thresholds
//! and tolerances are pinned in the constants below; golden baselines were
//! frozen from the first verified run and double-checked against independent
//! brute-force implementations.

use linrep::counterexample::{
    gap_statistic_exact, pair_lower_bound_holds, prefix_property_holds,
    square_occurrence_property, theorem_b1_demo,
};
use linrep::ergodic::{means, SubadditiveFn};
use linrep::geometry::{
    delone_params, locality_check_with_cutoff, polygon_area, voronoi_tiling, Point2, PointSet2D,
    Rect,
};
use linrep::repetitivity::{lr_constant_estimate, LrEstimateOptions};
use linrep::spectral::{
    eigen_count_tridiagonal, ids, lyapunov, transfer_log_norm_fn, PotentialMap,
};
use linrep::words::{language_sample, ByteBudget, Generator, SturmianSpec, SubstitutionRule};
use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::time::Instant;

fn golden_spec(depth: usize) -> SturmianSpec {
    SturmianSpec::golden(depth)
}

fn fast_spec(depth: usize) -> SturmianSpec {
    SturmianSpec::powers_of_two(depth)
}

fn fib_generator() -> Generator {
    Generator::Sturmian(golden_spec(40))
}

fn constant_word_generator() -> Generator {
    Generator::Substitution(SubstitutionRule::parse("0->00").expect("doubling rule"))
}

fn report(criterion: &str, pass: bool, detail: &str) {
    println!(
        "criterion {criterion}: {} - {detail}",
        if pass { "PASS" } else { "FAIL" }
    );
}

/// Criterion 1: tower combinatorics for the golden and fast specs at depth
/// 10, exact and tolerance-free: (i) s_n is a prefix of s_{n-1} s_n for
/// every n >= 2; (ii) s_n occurs in s_n s_n exactly at 0 and |s_n| for
/// every n. Runtime below 10 s.
#[test]
fn criterion_01_tower_combinatorics() {
    let start = Instant::now();
    let budget = ByteBudget::default();
    let mut failures: Vec<String> = Vec::new();
    for (name, spec) in [("golden", golden_spec(10)), ("fast", fast_spec(10))] {
        for n in 2..=10 {
            if !prefix_property_holds(&spec, n).expect("in range") {
                failures.push(format!(
                    "{name}: s_{n} is not a prefix of s_{}s_{n} \
                     (a_1 = {} makes s_0 \u{2284} s_1; holds for all n >= 3)",
                    n - 1,
                    spec.coefficient(1)
                ));
            }
        }
        for n in 0..=10 {
            if !square_occurrence_property(&spec, n, budget).expect("in range") {
                failures.push(format!("{name}: s_{n} has a nontrivial occurrence in its square"));
            }
        }
    }
    let elapsed = start.elapsed();
    if elapsed.as_secs_f64() >= 10.0 {
        failures.push(format!("runtime {elapsed:?} exceeds 10 s"));
    }
    let pass = failures.is_empty();
    report(
        "01 tower combinatorics",
        pass,
        &if pass {
            format!("both specs, n <= 10, exact; {elapsed:?}")
        } else {
            failures.join("; ")
        },
    );
    assert!(pass, "{}", failures.join("; "));
}

/// Criterion 2: the persistent-gap reproduction. Fast spec at depth 10 in
/// exact integer arithmetic: gap statistic >= 0.5 and the per-level lower
/// bound G(pair) >= G(s_n) + |pair| at every n >= 2 (exact rationals).
/// Golden contrast run: gap statistic <= 0.05. Runtime below 60 s.
#[test]
fn criterion_02_persistent_gap() {
    let start = Instant::now();
    let fast = fast_spec(10);
    let demo = theorem_b1_demo(&fast, 10).expect("demo");
    let gap_exact = gap_statistic_exact(&fast, 10).expect("gap");
    let mut failures: Vec<String> = Vec::new();
    if demo.gap_statistic < 0.5 {
        failures.push(format!("fast gap {} < 0.5", demo.gap_statistic));
    }
    if gap_exact.to_f64().unwrap_or(0.0) < 0.5 {
        failures.push("exact rational gap below 1/2".into());
    }
    for n in 2..=10 {
        if !pair_lower_bound_holds(&fast, n).expect("in range") {
            failures.push(format!("lower-bound inequality fails at n={n}"));
        }
    }
    let gold = golden_spec(10);
    let contrast = theorem_b1_demo(&gold, 10).expect("contrast");
    if contrast.gap_statistic > 0.05 {
        failures.push(format!("golden gap {} > 0.05", contrast.gap_statistic));
    }
    let elapsed = start.elapsed();
    if elapsed.as_secs_f64() >= 60.0 {
        failures.push(format!("runtime {elapsed:?} exceeds 60 s"));
    }
    let pass = failures.is_empty();
    report(
        "02 persistent gap",
        pass,
        &if pass {
            format!(
                "fast gap {:.4} >= 0.5, golden gap {:.4} <= 0.05, bounds exact; {elapsed:?}",
                demo.gap_statistic, contrast.gap_statistic
            )
        } else {
            failures.join("; ")
        },
    );
    assert!(pass, "{}", failures.join("; "));
}

/// Criterion 3: uniform shrinking of the means gap for the transfer-matrix
/// log norm over the golden language with potential 1 -> 1, 0 -> 0, at
/// E in {0, 1, 3}: gap(512) < gap(16) and gap(512) < 0.05. Means are
/// exhaustive over all (n + 1) factors per length. Runtime below 120 s.
#[test]
fn criterion_03_uniform_gap_shrinks() {
    let start = Instant::now();
    let budget = ByteBudget::default();
    let generator = fib_generator();
    let pot = PotentialMap::<f64>::new(vec![0.0, 1.0]).expect("potential");
    let mut failures: Vec<String> = Vec::new();
    let mut details: Vec<String> = Vec::new();
    for energy in [0.0f64, 1.0, 3.0] {
        let f = transfer_log_norm_fn(energy, &pot);
        let mut gaps = [0.0f64; 2];
        for (slot, n) in [(0usize, 16usize), (1, 512)] {
            let sample = language_sample(&generator, n, 2.0, budget).expect("sample");
            assert!(sample.saturated, "sample at n={n} saturated");
            assert_eq!(sample.count(), n + 1, "exhaustive factor count at n={n}");
            gaps[slot] = means(&f, &sample).expect("means").gap;
        }
        details.push(format!(
            "E={energy}: gap(16)={:.5}, gap(512)={:.6}",
            gaps[0], gaps[1]
        ));
        if !(gaps[1] < gaps[0]) {
            failures.push(format!("E={energy}: gap(512) not below gap(16)"));
        }
        if !(gaps[1] < 0.05) {
            failures.push(format!("E={energy}: gap(512)={} >= 0.05", gaps[1]));
        }
    }
    let elapsed = start.elapsed();
    if elapsed.as_secs_f64() >= 120.0 {
        failures.push(format!("runtime {elapsed:?} exceeds 120 s"));
    }
    let pass = failures.is_empty();
    report(
        "03 uniform gap shrinks",
        pass,
        &if pass {
            format!("{}; {elapsed:?}", details.join("; "))
        } else {
            failures.join("; ")
        },
    );
    assert!(pass, "{}", failures.join("; "));
}

/// Criterion 4: Fekete inequalities for zero-defect functionals over the
/// golden language, exhaustively: F+(k n0) <= F+(n0) + 1e-9 for
/// n0 in {8, 16}, k <= 16; and the splitting bound
/// F+(m+n) <= (m F+(m) + n F+(n)) / (m+n) + 1e-9 for all m, n <= 100.
#[test]
fn criterion_04_fekete_inequalities() {
    let budget = ByteBudget::default();
    let generator = fib_generator();
    let pot = PotentialMap::<f64>::new(vec![0.0, 1.0]).expect("potential");
    let functions: Vec<(&str, SubadditiveFn<'_, f64>)> = vec![
        (
            "letter-frequency",
            SubadditiveFn::from_letter_weights(vec![0.0, 1.0]),
        ),
        ("log-norm E=1", transfer_log_norm_fn(1.0, &pot)),
    ];
    let mut failures: Vec<String> = Vec::new();
    for (name, f) in &functions {
        // tabulate F+(n) for every n <= 256 (covers both sub-criteria)
        let mut fplus = vec![f64::NAN; 257];
        for n in 1..=256usize {
            let sample = language_sample(&generator, n, 2.0, budget).expect("sample");
            fplus[n] = means(f, &sample).expect("means").f_plus;
        }
        for n0 in [8usize, 16] {
            for k in 1..=16usize {
                if k * n0 > 256 {
                    break;
                }
                if fplus[k * n0] > fplus[n0] + 1e-9 {
                    failures.push(format!(
                        "{name}: F+({}) = {} exceeds F+({n0}) = {}",
                        k * n0,
                        fplus[k * n0],
                        fplus[n0]
                    ));
                }
            }
        }
        for m in 1..=100usize {
            for n in 1..=100usize {
                let lhs = fplus[m + n];
                let rhs = (m as f64 * fplus[m] + n as f64 * fplus[n]) / (m + n) as f64;
                if lhs > rhs + 1e-9 {
                    failures.push(format!("{name}: splitting bound fails at ({m}, {n})"));
                }
            }
        }
    }
    let pass = failures.is_empty();
    report(
        "04 fekete inequalities",
        pass,
        &if pass {
            "both zero-defect functionals, exhaustive m,n <= 100 and k n0 <= 256".into()
        } else {
            failures[..failures.len().min(5)].join("; ")
        },
    );
    assert!(pass, "{}", failures.join("; "));
}

/// Criterion 5: Lyapunov oracle at zero potential. The language {0^n}
/// makes the product a constant-matrix power: at E=3 the growth rate is
/// ln((3+sqrt 5)/2) and the certified estimate at n_max = 2^20 lands within
/// 1e-6; at E=0 the product rotates and gamma vanishes within 5e-3 at
/// n_max = 512. Runtime below 10 s.
#[test]
fn criterion_05_lyapunov_oracle() {
    let start = Instant::now();
    let budget = ByteBudget::default();
    let generator = constant_word_generator();
    let pot = PotentialMap::<f64>::zero(1);
    let exact = ((3.0 + 5f64.sqrt()) / 2.0).ln();
    let rep3 = lyapunov(3.0, &generator, &pot, 1 << 20, false, budget).expect("lyapunov E=3");
    let err3 = (rep3.gamma - exact).abs();
    let rep0 = lyapunov(0.0, &generator, &pot, 512, false, budget).expect("lyapunov E=0");
    let err0 = rep0.gamma.abs();
    let elapsed = start.elapsed();
    let mut failures: Vec<String> = Vec::new();
    if err3 >= 1e-6 {
        failures.push(format!("E=3: |gamma - ln((3+sqrt5)/2)| = {err3:.2e} >= 1e-6"));
    }
    if err0 >= 5e-3 {
        failures.push(format!("E=0: |gamma| = {err0:.2e} >= 5e-3"));
    }
    if elapsed.as_secs_f64() >= 10.0 {
        failures.push(format!("runtime {elapsed:?} exceeds 10 s"));
    }
    let pass = failures.is_empty();
    report(
        "05 lyapunov oracle",
        pass,
        &if pass {
            format!("E=3 error {err3:.2e}, E=0 error {err0:.2e}; {elapsed:?}")
        } else {
            failures.join("; ")
        },
    );
    assert!(pass, "{}", failures.join("; "));
}

/// Criterion 6: free integrated density of states. Zero potential, window
/// of 2000 sites, Dirichlet truncation: against the closed-form count from
/// the path-graph eigenvalues 2 cos(k pi / (n+1)), the sup error over a
/// 401-point grid in [-2.5, 2.5] of |k(lambda) - (1 - arccos(lambda/2)/pi)|
/// stays below 5e-3. Runtime below 30 s.
#[test]
fn criterion_06_free_ids_oracle() {
    let start = Instant::now();
    let budget = ByteBudget::default();
    let generator = constant_word_generator();
    let pot = PotentialMap::<f64>::zero(1);
    let grid: Vec<f64> = (0..401).map(|i| -2.5 + 5.0 * i as f64 / 400.0).collect();
    let rep = ids(&generator, &pot, &grid, &[2000], 1, budget).expect("ids");
    let mut worst = 0.0f64;
    for (i, &lambda) in grid.iter().enumerate() {
        let k = rep.curves[0].values[i];
        let x = (lambda / 2.0).clamp(-1.0, 1.0);
        let oracle = (1.0 - x.acos() / std::f64::consts::PI).clamp(0.0, 1.0);
        worst = worst.max((k - oracle).abs());
    }
    let elapsed = start.elapsed();
    let mut failures: Vec<String> = Vec::new();
    if worst >= 5e-3 {
        failures.push(format!("sup error {worst:.2e} >= 5e-3"));
    }
    if elapsed.as_secs_f64() >= 30.0 {
        failures.push(format!("runtime {elapsed:?} exceeds 30 s"));
    }
    let pass = failures.is_empty();
    report(
        "06 free ids oracle",
        pass,
        &if pass {
            format!("sup error {worst:.2e} over 401 grid points; {elapsed:?}")
        } else {
            failures.join("; ")
        },
    );
    assert!(pass, "{}", failures.join("; "));
}

/// Criterion 7: uniformity of the counting curves in the window position.
/// Golden-word potential (1 -> 1, 0 -> 0), sizes 200 and 1000 with 20
/// offsets each: the sup-over-lambda spread across offsets shrinks with the
/// size and stays below 0.02 at size 1000.
#[test]
fn criterion_07_ids_uniformity() {
    let budget = ByteBudget::default();
    let generator = fib_generator();
    let pot = PotentialMap::<f64>::new(vec![0.0, 1.0]).expect("potential");
    let grid: Vec<f64> = (0..401).map(|i| -2.5 + 6.5 * i as f64 / 400.0).collect();
    let rep = ids(&generator, &pot, &grid, &[200, 1000], 20, budget).expect("ids");
    let spread_200 = rep.spreads.iter().find(|s| s.size == 200).unwrap().spread;
    let spread_1000 = rep.spreads.iter().find(|s| s.size == 1000).unwrap().spread;
    let mut failures: Vec<String> = Vec::new();
    if !(spread_1000 < spread_200) {
        failures.push(format!(
            "spread(1000) = {spread_1000} not below spread(200) = {spread_200}"
        ));
    }
    if !(spread_1000 < 0.02) {
        failures.push(format!("spread(1000) = {spread_1000} >= 0.02"));
    }
    let pass = failures.is_empty();
    report(
        "07 ids uniformity",
        pass,
        &if pass {
            format!("spread(200) = {spread_200:.4}, spread(1000) = {spread_1000:.4}")
        } else {
            failures.join("; ")
        },
    );
    assert!(pass, "{}", failures.join("; "));
}

/// Jacobi eigenvalue iteration on a dense symmetric matrix; the
/// implementation-independent oracle for the Sturm counts.
fn jacobi_eigenvalues(mut a: Vec<Vec<f64>>) -> Vec<f64> {
    let n = a.len();
    for _sweep in 0..100 {
        let mut off = 0.0f64;
        for i in 0..n {
            for j in i + 1..n {
                off += a[i][j] * a[i][j];
            }
        }
        if off < 1e-26 {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                if a[p][q].abs() < 1e-18 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[k][p];
                    let akq = a[k][q];
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[p][k];
                    let aqk = a[q][k];
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
            }
        }
    }
    let mut ev: Vec<f64> = (0..n).map(|i| a[i][i]).collect();
    ev.sort_by(|x, y| x.partial_cmp(y).unwrap());
    ev
}

/// Criterion 8: Sturm counts against a dense eigensolve. 200 random
/// symmetric tridiagonal matrices of size at most 8 with entries in
/// [-3, 3]; counting thresholds sampled at least 1e-6 away from every
/// eigenvalue must match the dense count exactly.
#[test]
fn criterion_08_sturm_count_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut checked = 0usize;
    for _ in 0..200 {
        let n = rng.gen_range(1..=8);
        let diag: Vec<f64> = (0..n).map(|_| rng.gen_range(-3.0..3.0)).collect();
        let off: Vec<f64> = (0..n - 1).map(|_| rng.gen_range(-3.0..3.0)).collect();
        let mut dense = vec![vec![0.0; n]; n];
        for i in 0..n {
            dense[i][i] = diag[i];
            if i + 1 < n {
                dense[i][i + 1] = off[i];
                dense[i + 1][i] = off[i];
            }
        }
        let eigen = jacobi_eigenvalues(dense);
        for _ in 0..8 {
            let lambda = rng.gen_range(-7.0..7.0);
            if eigen.iter().any(|&e| (e - lambda).abs() <= 1e-6) {
                continue;
            }
            let expected = eigen.iter().filter(|&&e| e <= lambda).count();
            let got = eigen_count_tridiagonal(&diag, &off, lambda);
            assert_eq!(
                got, expected,
                "count mismatch at lambda={lambda} diag={diag:?} off={off:?}"
            );
            checked += 1;
        }
    }
    report(
        "08 sturm count oracle",
        true,
        &format!("{checked} threshold checks across 200 random matrices, all exact"),
    );
    assert!(checked > 1000);
}

/// Golden baseline: R(n) for the golden word over n = 1..=64, frozen from
/// the first verified run on a 2^20-letter source (values confirmed stable
/// against doubled and independently against 5x longer sources).
const GOLDEN_R_TABLE: [usize; 64] = [
    3, 6, 10, 11, 17, 18, 19, 28, 29, 30, 31, 32, 46, 47, 48, 49, 50, 51, 52, 53, 75, 76, 77, 78,
    79, 80, 81, 82, 83, 84, 85, 86, 87, 122, 123, 124, 125, 126, 127, 128, 129, 130, 131, 132,
    133, 134, 135, 136, 137, 138, 139, 140, 141, 142, 198, 199, 200, 201, 202, 203, 204, 205, 206,
    207,
];

/// Criterion 9: the repetitivity dichotomy. The golden word's max R(n)/n
/// over n <= 64 must equal its frozen baseline (and stay below 20); the
/// fast spec must exhibit some R(n)/n at n <= 16 exceeding four times that
/// baseline.
///
/// The second clause is kept as stated even though the measured values
/// refute it for this coefficient sequence: the fast spec's largest ratio
/// at n <= 16 is 91/9 = 10.11 (driven by the scale jump |s_2| = 9 to
/// |s_3| = 74), which exceeds the golden baseline 3.6 by a factor of 2.8,
/// not 4. The dichotomy itself is real and strict; the factor is not.
#[test]
fn criterion_09_repetitivity_dichotomy() {
    let opts = LrEstimateOptions {
        source_length: 1 << 20,
        budget: ByteBudget::default(),
    };
    let n_list: Vec<usize> = (1..=64).collect();
    let fib = lr_constant_estimate(&fib_generator(), &n_list, opts).expect("golden R table");
    let mut failures: Vec<String> = Vec::new();
    for (entry, &expected) in fib.entries.iter().zip(GOLDEN_R_TABLE.iter()) {
        if entry.r != expected {
            failures.push(format!(
                "R({}) = {} departs from the frozen baseline {expected}",
                entry.n, entry.r
            ));
        }
    }
    if fib.max_ratio > 20.0 {
        failures.push(format!("golden max ratio {} > 20", fib.max_ratio));
    }
    let baseline = fib.max_ratio;

    let fast_gen = Generator::Sturmian(fast_spec(10));
    let fast_n: Vec<usize> = (1..=16).collect();
    let fast = lr_constant_estimate(&fast_gen, &fast_n, opts).expect("fast R table");
    let threshold = 4.0 * baseline;
    if !(fast.max_ratio > threshold) {
        failures.push(format!(
            "fast spec max R(n)/n = {:.4} at n <= 16 does not exceed 4 x baseline = {:.1} \
             (baseline {:.1}; measured multiple {:.2})",
            fast.max_ratio,
            threshold,
            baseline,
            fast.max_ratio / baseline
        ));
    }
    let pass = failures.is_empty();
    report(
        "09 repetitivity dichotomy",
        pass,
        &if pass {
            format!(
                "baseline {:.2} (= 198/55), fast max {:.2}",
                baseline, fast.max_ratio
            )
        } else {
            failures.join("; ")
        },
    );
    assert!(pass, "{}", failures.join("; "));
}

/// Criterion 10: cell locality on random perturbed lattices. Over 100
/// seeded point sets, rebuilding interior cells from only the sites within
/// twice the covering radius must reproduce the full construction, and the
/// half-covering-radius cutoff must fail to (negative control), each on at
/// least 95 of the 100 sets; cell radii, bisector symmetry, and the
/// partition property hold within their stated tolerances. Runtime < 60 s.
#[test]
fn criterion_10_voronoi_locality() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let mut positive = 0usize;
    let mut negative = 0usize;
    let mut invariant_failures: Vec<String> = Vec::new();
    let sets = 100usize;
    for set_idx in 0..sets {
        let n = 12usize;
        let eps = rng.gen_range(0.05..0.3);
        let mut pts = Vec::new();
        for i in 0..=n {
            for j in 0..=n {
                let x = (i as f64 + rng.gen_range(-eps..eps)).clamp(0.0, n as f64);
                let y = (j as f64 + rng.gen_range(-eps..eps)).clamp(0.0, n as f64);
                pts.push(Point2::new(x, y));
            }
        }
        let domain = Rect::new(Point2::new(0.0, 0.0), Point2::new(n as f64, n as f64)).unwrap();
        let ps = PointSet2D::new(pts, domain).expect("perturbed lattice");
        let params = delone_params(&ps).expect("params");
        if locality_check_with_cutoff(&ps, 10, 2.0 * params.covering, &mut rng).expect("locality")
        {
            positive += 1;
        }
        if !locality_check_with_cutoff(&ps, 10, params.covering / 2.0, &mut rng)
            .expect("negative control")
        {
            negative += 1;
        }
        // invariants on a subsample of sets to keep the runtime bounded
        if set_idx % 10 == 0 {
            let cells = voronoi_tiling(&ps).expect("tiling");
            let margin = 2.0 * params.covering;
            for c in &cells {
                if ps.domain().boundary_distance(&c.site) < margin {
                    continue;
                }
                if c.inner_radius < params.packing - 1e-9 {
                    invariant_failures
                        .push(format!("set {set_idx}: cell inside radius below packing"));
                }
                if c.outer_radius > params.covering * (1.0 + 1e-9) {
                    invariant_failures
                        .push(format!("set {set_idx}: cell outside radius above covering"));
                }
            }
            // partition of the margin-shrunk square
            let d = ps.domain();
            let inner = [
                Point2::new(d.min.x + margin, d.min.y + margin),
                Point2::new(d.max.x - margin, d.min.y + margin),
                Point2::new(d.max.x - margin, d.max.y - margin),
                Point2::new(d.min.x + margin, d.max.y - margin),
            ];
            let covered: f64 = cells
                .iter()
                .map(|c| linrep::geometry::convex_intersection_area(&c.vertices, &inner))
                .sum();
            let expect = polygon_area(&inner);
            if (covered - expect).abs() > 1e-6 * expect {
                invariant_failures.push(format!(
                    "set {set_idx}: partition area {covered} vs {expect}"
                ));
            }
        }
    }
    let elapsed = start.elapsed();
    let mut failures = invariant_failures;
    if positive < 95 {
        failures.push(format!("locality held on only {positive}/100 sets"));
    }
    if negative < 95 {
        failures.push(format!(
            "negative control failed to fail on {}/100 sets",
            100 - negative
        ));
    }
    if elapsed.as_secs_f64() >= 60.0 {
        failures.push(format!("runtime {elapsed:?} exceeds 60 s"));
    }
    let pass = failures.is_empty();
    report(
        "10 voronoi locality",
        pass,
        &if pass {
            format!("locality {positive}/100, negative control {negative}/100; {elapsed:?}")
        } else {
            failures.join("; ")
        },
    );
    assert!(pass, "{}", failures.join("; "));
}

/// Criterion 11: no universal convergence rate. The functional |w| f(|w|)
/// converges at the speed of f: with f = 1/ln(e + x) the normalized value
/// at 10^4 letters still exceeds 0.1, while f = 1/x pushes it below 1e-3
/// on the same harness.
#[test]
fn criterion_11_no_rate() {
    let budget = ByteBudget::default();
    let word = golden_spec(40).prefix(10_000, budget).expect("prefix");
    let slow = SubadditiveFn::<f64>::no_rate_example(|x| 1.0 / (std::f64::consts::E + x).ln())
        .expect("nonincreasing");
    let fast = SubadditiveFn::<f64>::no_rate_example(|x| 1.0 / x).expect("nonincreasing");
    let slow_ratio = slow.value(&word) / word.len() as f64;
    let fast_ratio = fast.value(&word) / word.len() as f64;
    let pass = slow_ratio > 0.1 && fast_ratio < 1e-3;
    report(
        "11 no rate",
        pass,
        &format!("slow profile {slow_ratio:.4} > 0.1, fast profile {fast_ratio:.1e} < 1e-3"),
    );
    assert!(
        slow_ratio > 0.1,
        "slow profile ratio {slow_ratio} should exceed 0.1"
    );
    assert!(
        fast_ratio < 1e-3,
        "fast profile ratio {fast_ratio} should be below 1e-3"
    );
}
