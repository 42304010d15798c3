//! Acceptance criteria, one test per criterion. Each prints a single
//! `criterion NN: PASS|FAIL ...` line before asserting.

use std::process::Command;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use random_betti::asymptotics::{
    binomial_gaussian_ratio, gaussian_experiment, p_of, EntrySource, GaussianSequenceSpec,
};
use random_betti::combinatorics::Subsets;
use random_betti::curves::{curve_k_p1, curve_normalized, koszul_oracle_p1, CurveEmbedding, RegimeGuard};
use random_betti::decomposition::{decompose, generic_module_table};
use random_betti::sampling::{
    analytic_ratio_std, estimate_deviation_probability, expected_table, normalized_entry_samples, table_of,
    table_of_rational, SamplingConfig,
};
use random_betti::tables::{
    herzog_kuhl_check, hilbert_function, multiplicity, pure_diagram, sigma_b, ExactTable, IndexSet,
};
use random_betti::weighted::{riemann_ratio, weighted_expected_exact, weighted_sample, WeightFunction};

fn report(id: u32, ok: bool, detail: String) {
    println!("criterion {id:02}: {} {detail}", if ok { "PASS" } else { "FAIL" });
    assert!(ok, "criterion {id} failed: {detail}");
}

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

#[test]
fn criterion_01_golden_pure_diagram() {
    let is = IndexSet::new(7, 3, vec![2, 4]).unwrap();
    let _ = pure_diagram(7, 3, &is).unwrap();
    let start = Instant::now();
    let pd = pure_diagram(7, 3, &is).unwrap();
    let elapsed = start.elapsed();
    let t = &pd.table;
    let got = [t.get(0, 1), t.get(1, 2), t.get(2, 3), t.get(3, 3), t.get(4, 3)];
    let want = [q(1, 10), q(1, 2), q(3, 2), q(8, 5), q(1, 2)];
    let nonzero = t.iter().filter(|(_, _, v)| !v.is_zero()).count();
    let ok = got.iter().zip(&want).all(|(a, b)| *a == b) && nonzero == 5 && elapsed < Duration::from_millis(1);
    report(1, ok, format!("entries {got:?}, {nonzero} nonzero, {elapsed:?} (< 1 ms)"));
}

#[test]
fn criterion_02_multiplicity_normalization() {
    let start = Instant::now();
    let mut count = 0;
    let mut bad = Vec::new();
    for n in 2..=3 {
        for r in n + 1..=12 {
            for is in IndexSet::all(r, n).unwrap() {
                let t = pure_diagram(r, n, &is).unwrap().table;
                if multiplicity(&t) != Ok(BigRational::one()) {
                    bad.push(format!("r={r} I={is}"));
                }
                count += 1;
            }
        }
    }
    let elapsed = start.elapsed();
    let ok = bad.is_empty() && elapsed < Duration::from_secs(10);
    report(2, ok, format!("{count} diagrams, failures {bad:?}, {elapsed:?} (< 10 s)"));
}

#[test]
fn criterion_03_expected_table_oracle() {
    let start = Instant::now();
    let half = q(1, 2);
    let mut bad = Vec::new();
    for n in 2..=3 {
        for r in n + 1..=14 {
            let mut sum = ExactTable::zeros(r, n).unwrap();
            for is in IndexSet::all(r, n).unwrap() {
                sum = sum.add_scaled(&half, &pure_diagram(r, n, &is).unwrap().table);
            }
            if expected_table(r, n).unwrap() != sum {
                bad.push((r, n));
            }
        }
    }
    let elapsed = start.elapsed();
    let ok = bad.is_empty() && elapsed < Duration::from_secs(30);
    report(3, ok, format!("mismatches {bad:?}, {elapsed:?} (< 30 s)"));
}

#[test]
fn criterion_04_sigma_brute_force() {
    let start = Instant::now();
    let mut bad = Vec::new();
    for a in 0..=12usize {
        for b in 0..=4usize.min(a) {
            let brute: BigInt = if b == 0 {
                BigInt::one()
            } else {
                Subsets::new(a, b).map(|s| s.iter().map(|&x| BigInt::from(x)).product::<BigInt>()).sum()
            };
            if sigma_b(a, b).unwrap() != brute {
                bad.push((a, b));
            }
        }
    }
    let elapsed = start.elapsed();
    let ok = bad.is_empty() && elapsed < Duration::from_secs(1);
    report(4, ok, format!("mismatches {bad:?}, {elapsed:?} (< 1 s)"));
}

#[test]
fn criterion_05_variance_calibration() {
    let start = Instant::now();
    let cfg = SamplingConfig::default();
    let xs = normalized_entry_samples(200, 2, 100, 1, 10_000, 0, &cfg).unwrap();
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let std = (xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt();
    let analytic = analytic_ratio_std(200, 2, 100, 1, &cfg).unwrap();
    let rel = (std / analytic - 1.0).abs();
    let elapsed = start.elapsed();
    let ok = rel <= 0.05 && elapsed < Duration::from_secs(60);
    report(5, ok, format!("empirical {std:.5}, analytic {analytic:.5}, rel {rel:.4} (<= 0.05), {elapsed:?} (< 60 s)"));
}

#[test]
fn criterion_06_convergence_in_probability() {
    let start = Instant::now();
    let cfg = SamplingConfig::default();
    let at = |r: usize| estimate_deviation_probability(r, 2, r / 2, 1, 0.1, 1000, 0, &cfg).unwrap();
    let (small, large) = (at(500), at(2000));
    let elapsed = start.elapsed();
    let ok =
        large.hit_fraction <= 0.01 && large.hit_fraction < small.hit_fraction && elapsed < Duration::from_secs(300);
    report(
        6,
        ok,
        format!(
            "P(r=500) = {}, P(r=2000) = {} (<= 0.01 and smaller), {elapsed:?} (< 5 min)",
            small.hit_fraction, large.hit_fraction
        ),
    );
}

#[test]
fn criterion_07_stirling_binomial_limit() {
    let start = Instant::now();
    let r = 10_000;
    let centre = binomial_gaussian_ratio(r, r / 2).unwrap();
    let one = binomial_gaussian_ratio(r, p_of(r, 1.0).unwrap()).unwrap();
    let target = (-0.5f64).exp();
    let rel = (one / target - 1.0).abs();
    let elapsed = start.elapsed();
    let ok = (0.999..=1.001).contains(&centre) && rel <= 0.01 && elapsed < Duration::from_secs(1);
    report(7, ok, format!("centre {centre:.6} in [0.999, 1.001], a=1 rel {rel:.5} (<= 0.01), {elapsed:?} (< 1 s)"));
}

#[test]
fn criterion_08_gaussian_profile() {
    let start = Instant::now();
    let cfg = SamplingConfig::default();
    let mut lines = Vec::new();
    let mut ok = true;
    for a in [0.0, 1.0, 2.0] {
        let spec = GaussianSequenceSpec { a, r_values: vec![2000], n: 2, q: 1 };
        let rep = gaussian_experiment(&spec, EntrySource::Expected, 0.05, &cfg).unwrap();
        let pt = rep.last().unwrap();
        ok &= rep.passed;
        lines.push(format!(
            "a={a}: value {:.5} target {:.5} rel {:+.4}",
            pt.value,
            pt.target,
            (pt.value - pt.target) / pt.target
        ));
    }
    let elapsed = start.elapsed();
    ok &= elapsed < Duration::from_secs(10);
    report(8, ok, format!("{} (tolerance 0.05), {elapsed:?} (< 10 s)", lines.join("; ")));
}

#[test]
fn criterion_09_curve_oracle() {
    let start = Instant::now();
    let mut bad = Vec::new();
    let mut quartic = Vec::new();
    for d in 2..=7usize {
        let e = CurveEmbedding::with_guard(0, d, RegimeGuard::Warn).unwrap();
        for p in 1..d {
            let formula = curve_k_p1(&e, p).unwrap();
            let oracle = koszul_oracle_p1(d, p).unwrap();
            if formula != BigRational::from_integer(BigInt::from(oracle)) {
                bad.push((d, p, formula.to_string(), oracle));
            }
            if d == 4 {
                quartic.push(oracle);
            }
        }
    }
    let elapsed = start.elapsed();
    let ok = bad.is_empty() && quartic == vec![6, 8, 3] && elapsed < Duration::from_secs(60);
    report(9, ok, format!("d=4 gives {quartic:?}, mismatches {bad:?}, {elapsed:?} (< 60 s)"));
}

#[test]
fn criterion_10_curve_normalization() {
    let start = Instant::now();
    let mut lines = Vec::new();
    let mut ok = true;
    for g in [0usize, 10] {
        let e = CurveEmbedding::new(g, 400).unwrap();
        let p = p_of(e.r_d(), 0.0).unwrap();
        let v = curve_normalized(&e, p).unwrap();
        ok &= (v - 1.0).abs() <= 0.05;
        lines.push(format!("g={g}: {v:.5}"));
    }
    let elapsed = start.elapsed();
    ok &= elapsed < Duration::from_secs(1);
    report(10, ok, format!("{} (within 0.05 of 1), {elapsed:?} (< 1 s)", lines.join(", ")));
}

#[test]
fn criterion_11_weighted_reduction_and_vanishing() {
    let start = Instant::now();
    let cfg = SamplingConfig::default();
    let one = WeightFunction::constant(1.0).unwrap();
    let mut mismatches = Vec::new();
    for r in 3..=40usize {
        let uniform = expected_table(r, 2).unwrap();
        for p in 0..=r - 2 {
            for qq in 1..=2 {
                if &weighted_expected_exact(r, p, qq, &one).unwrap() != uniform.get(p, qq) {
                    mismatches.push((r, p, qq));
                }
            }
        }
    }
    let half = WeightFunction::table(vec![(0.0, 1.0), (0.5, 1.0), (0.5 + 1e-9, 0.0), (1.0, 0.0)]).unwrap();
    let r = 100;
    let mut nonzero = 0;
    for seed in 0..100u64 {
        let t = table_of(&weighted_sample(r, 2, &half, seed).unwrap(), &cfg).unwrap();
        nonzero += (r / 2 + 1..=r - 2).filter(|&p| *t.get(p, 1) != 0.0).count();
    }
    let elapsed = start.elapsed();
    let ok = mismatches.is_empty() && nonzero == 0 && elapsed < Duration::from_secs(30);
    report(
        11,
        ok,
        format!("exact mismatches {mismatches:?}, nonzero vanishing entries {nonzero}, {elapsed:?} (< 30 s)"),
    );
}

#[test]
fn criterion_12_weighted_riemann_limit() {
    let start = Instant::now();
    let mut lines = Vec::new();
    let mut ok = true;
    for h in [WeightFunction::constant(1.0).unwrap(), WeightFunction::sin2(0.35).unwrap()] {
        let ratio = riemann_ratio(2000, 1000, &h).unwrap();
        ok &= (ratio - 1.0).abs() <= 0.01;
        lines.push(format!("{h}: {ratio:.6}"));
    }
    let elapsed = start.elapsed();
    ok &= elapsed < Duration::from_secs(5);
    report(12, ok, format!("{} (within 0.01 of 1), {elapsed:?} (< 5 s)", lines.join(", ")));
}

#[test]
fn criterion_13_generic_module_identity() {
    let start = Instant::now();
    let mut bad = Vec::new();
    for r in 4..=15usize {
        let t = generic_module_table(r).unwrap();
        let hf = hilbert_function(&t);
        let s = BigRational::from_integer(BigInt::from(r - 1));
        let shape_ok = hf.support() == vec![1, 2] && hf.at(1) == s && hf.at(2) == s;
        let pure_ok = if r % 2 == 1 {
            let mid = IndexSet::new(r, 2, vec![r.div_ceil(2)]).unwrap();
            t == pure_diagram(r, 2, &mid).unwrap().table.scaled(&BigRational::from_integer(BigInt::from(2 * (r - 1))))
        } else {
            true
        };
        if !(shape_ok && pure_ok && herzog_kuhl_check(&t)) {
            bad.push(r);
        }
    }
    let elapsed = start.elapsed();
    let ok = bad.is_empty() && elapsed < Duration::from_secs(10);
    report(13, ok, format!("failing r {bad:?}, {elapsed:?} (< 10 s)"));
}

#[test]
fn criterion_14_decomposition_round_trip() {
    let start = Instant::now();
    let cfg = SamplingConfig::default();
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    let mut failures = 0;
    let mut trials = 0;
    for r in [5usize, 10, 14] {
        for _ in 0..100 {
            let x: Vec<BigRational> = (0..r).map(|_| q(rng.random_range(0..=50), rng.random_range(1..=20))).collect();
            let t = table_of_rational(r, 2, &x, &cfg).unwrap();
            if decompose(&t).map(|d| d.coefficients().to_vec()) != Ok(x) {
                failures += 1;
            }
            trials += 1;
        }
    }
    let elapsed = start.elapsed();
    let ok = failures == 0 && elapsed < Duration::from_secs(30);
    report(14, ok, format!("{failures}/{trials} round trips failed, {elapsed:?} (< 30 s)"));
}

#[test]
fn criterion_15_cli_reproducibility() {
    let runs: [&[&str]; 3] = [
        &["sample", "--r", "60", "--n", "2", "--seed", "42", "--format", "csv"],
        &["pure", "--r", "7", "--n", "3", "--index", "2,4", "--format", "json"],
        &[
            "gauss",
            "--source",
            "sampled",
            "--r-values",
            "100,200",
            "--samples",
            "50",
            "--seed",
            "7",
            "--format",
            "json",
        ],
    ];
    let mut lines = Vec::new();
    let mut ok = true;
    for args in runs {
        let go = || Command::new(env!("CARGO_BIN_EXE_betti")).args(args).output().unwrap();
        let (a, b) = (go(), go());
        let same = a.status.success() && b.status.success() && !a.stdout.is_empty() && a.stdout == b.stdout;
        ok &= same;
        lines.push(format!("{}: {}", args[0], if same { "identical" } else { "differs" }));
    }
    report(15, ok, lines.join(", "));
}
