//! Random Betti tables `B_r = sum_I X_I * pi(r, I)` with independent uniform
//! coefficients, their exact expectation, and Monte Carlo estimates of how
//! far a normalized entry strays from one.
//!
//! Every entry of a pure diagram factors as `C(r-n, p) * c_I(p, q)` with
//! `c_I(p, q) in [0, 1]` (see [`reduced_entry`]). Sums over `I` are carried
//! out on the `c_I` so that nothing overflows even when `C(r-n, p)` does not
//! fit in a double.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::combinatorics::{binomial, checked_subset_count, ln_binomial, subset_rank, DEFAULT_ENUMERATION_CAP};
use crate::error::{Error, Result};
use crate::tables::{
    check_shape, rational_to_f64, reduced_entry, reduced_entry_f64, ExactTable, FloatTable, IndexSet, SigmaTable,
};

/// Environment variable overriding [`SamplingConfig::enumeration_cap`].
pub const ENUMERATION_CAP_ENV: &str = "BETTI_ENUMERATION_CAP";

/// Knobs shared by the sampling routines.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SamplingConfig {
    /// Refuse to enumerate more than this many index sets.
    pub enumeration_cap: u64,
    /// Up to this `r`, float tables are built from exact pure-diagram entries.
    pub exact_cutoff: usize,
}

impl Default for SamplingConfig {
    fn default() -> Self {
        SamplingConfig { enumeration_cap: DEFAULT_ENUMERATION_CAP, exact_cutoff: 40 }
    }
}

impl SamplingConfig {
    /// Defaults, with the enumeration cap taken from `BETTI_ENUMERATION_CAP` when set.
    pub fn from_env() -> Result<Self> {
        let mut cfg = SamplingConfig::default();
        if let Ok(raw) = std::env::var(ENUMERATION_CAP_ENV) {
            cfg.enumeration_cap = raw
                .trim()
                .parse()
                .map_err(|_| Error::Parameter(format!("{ENUMERATION_CAP_ENV}={raw:?} is not an integer")))?;
        }
        Ok(cfg)
    }
}

/// Boij-Soderberg coefficients `x_I in [0, 1]`, one per index set, stored in
/// lexicographic order of `I`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoefficientVector {
    r: usize,
    n: usize,
    seed: Option<u64>,
    values: Vec<f64>,
}

impl CoefficientVector {
    pub fn new(r: usize, n: usize, values: Vec<f64>, seed: Option<u64>) -> Result<Self> {
        check_shape(r, n)?;
        let count = checked_subset_count(r, n - 1, u64::MAX)?;
        if values.len() != count {
            return Err(Error::Parameter(format!(
                "expected {count} coefficients for (r={r}, n={n}), got {}",
                values.len()
            )));
        }
        if let Some((i, v)) = values.iter().enumerate().find(|(_, v)| !(0.0..=1.0).contains(*v)) {
            return Err(Error::Parameter(format!("coefficient #{i} = {v} lies outside [0, 1]")));
        }
        Ok(CoefficientVector { r, n, seed, values })
    }

    pub fn constant(r: usize, n: usize, value: f64, cfg: &SamplingConfig) -> Result<Self> {
        check_shape(r, n)?;
        let count = checked_subset_count(r, n - 1, cfg.enumeration_cap)?;
        Self::new(r, n, vec![value; count], None)
    }

    /// The vector with `x_I = 1` and every other coefficient zero.
    pub fn indicator(index_set: &IndexSet, cfg: &SamplingConfig) -> Result<Self> {
        let mut v = Self::constant(index_set.r(), index_set.n(), 0.0, cfg)?;
        let k = subset_rank(index_set.r(), index_set.elements());
        v.values[k] = 1.0;
        Ok(v)
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn seed(&self) -> Option<u64> {
        self.seed
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn get(&self, index_set: &IndexSet) -> f64 {
        self.values[subset_rank(self.r, index_set.elements())]
    }

    /// Pairs each coefficient with its index set.
    pub fn iter(&self) -> impl Iterator<Item = (IndexSet, f64)> + '_ {
        IndexSet::all(self.r, self.n).expect("shape validated at construction").zip(self.values.iter().copied())
    }
}

/// SplitMix64 finalizer, used to derive per-sample seeds.
fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed of sample `index` in an experiment with `master_seed`. Sample `i` is
/// always `sample_uniform(r, n, derive_seed(master_seed, i))`, independent of
/// how the work is scheduled.
pub fn derive_seed(master_seed: u64, index: u64) -> u64 {
    splitmix64(splitmix64(master_seed) ^ index)
}

/// The generator behind every coefficient draw.
pub fn stream(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Draws every `x_I` independently and uniformly from `[0, 1)`.
pub fn sample_uniform(r: usize, n: usize, seed: u64, cfg: &SamplingConfig) -> Result<CoefficientVector> {
    check_shape(r, n)?;
    let count = checked_subset_count(r, n - 1, cfg.enumeration_cap)?;
    let mut rng = stream(seed);
    let values = (0..count).map(|_| rng.random::<f64>()).collect();
    Ok(CoefficientVector { r, n, seed: Some(seed), values })
}

/// `k_{p,q}(x) = sum_I x_I * k_{p,q}(pi(r, I))`, accumulated in lexicographic order of `I`.
///
/// Up to `cfg.exact_cutoff` each pure-diagram entry is formed exactly and then
/// rounded; beyond it the column factor `C(r-n, p)` comes from log-gamma.
/// Entries that do not fit in a double yield [`Error::Overflow`].
pub fn table_of(coeffs: &CoefficientVector, cfg: &SamplingConfig) -> Result<FloatTable> {
    let (r, n) = (coeffs.r, coeffs.n);
    checked_subset_count(r, n - 1, cfg.enumeration_cap)?;
    let cols = r + 1 - n;
    let mut table = FloatTable::zeros(r, n)?;
    if r <= cfg.exact_cutoff {
        let scale: Vec<BigRational> =
            (0..cols).map(|p| BigRational::from_integer(binomial((r - n) as i64, p as i64))).collect();
        for (is, x) in coeffs.iter() {
            if x == 0.0 {
                continue;
            }
            for (p, dp) in is.degree_sequence().degrees().iter().enumerate() {
                let q = dp - p;
                let entry = rational_to_f64(&(&scale[p] * reduced_entry(&is, p, q)));
                let slot = &mut table.entries_mut()[(q - 1) * cols + p];
                *slot += x * entry;
            }
        }
    } else {
        for (is, x) in coeffs.iter() {
            if x == 0.0 {
                continue;
            }
            for (p, dp) in is.degree_sequence().degrees().iter().enumerate() {
                let q = dp - p;
                table.entries_mut()[(q - 1) * cols + p] += x * reduced_entry_f64(&is, p, q);
            }
        }
        for (i, v) in table.entries_mut().iter_mut().enumerate() {
            let p = i % cols;
            if *v != 0.0 {
                *v *= ln_binomial((r - n) as i64, p as i64).exp();
            }
        }
    }
    if let Some((p, q, _)) = table.iter().find(|(_, _, v)| !v.is_finite()) {
        return Err(Error::Overflow(format!("entry ({p}, {q}) of a table with r = {r} exceeds the double range")));
    }
    Ok(table)
}

/// Exact combination `sum_I x_I * pi(r, I)` for rational coefficients given in lexicographic order.
pub fn table_of_rational(r: usize, n: usize, coeffs: &[BigRational], cfg: &SamplingConfig) -> Result<ExactTable> {
    check_shape(r, n)?;
    let count = checked_subset_count(r, n - 1, cfg.enumeration_cap)?;
    if coeffs.len() != count {
        return Err(Error::Parameter(format!(
            "expected {count} coefficients for (r={r}, n={n}), got {}",
            coeffs.len()
        )));
    }
    if let Some(x) = coeffs.iter().find(|x| *x < &BigRational::zero()) {
        return Err(Error::Parameter(format!("coefficient {x} is negative")));
    }
    let cols = r + 1 - n;
    let scale: Vec<BigRational> =
        (0..cols).map(|p| BigRational::from_integer(binomial((r - n) as i64, p as i64))).collect();
    let mut table = ExactTable::zeros(r, n)?;
    for (is, x) in IndexSet::all(r, n)?.zip(coeffs) {
        if x.is_zero() {
            continue;
        }
        for (p, dp) in is.degree_sequence().degrees().iter().enumerate() {
            let q = dp - p;
            let slot = &mut table.entries_mut()[(q - 1) * cols + p];
            *slot += x * &scale[p] * reduced_entry(&is, p, q);
        }
    }
    Ok(table)
}

fn check_entry(r: usize, n: usize, p: usize, q: usize) -> Result<()> {
    check_shape(r, n)?;
    if p > r - n || !(1..=n).contains(&q) {
        return Err(Error::Parameter(format!("entry (p={p}, q={q}) outside 0..={} x 1..={n}", r - n)));
    }
    Ok(())
}

/// `c_I(p, q)` for every `I`, in lexicographic order: the weights with
/// `k_{p,q}(x) = C(r-n, p) * sum_I c_I * x_I`.
pub fn entry_coefficients(r: usize, n: usize, p: usize, q: usize, cfg: &SamplingConfig) -> Result<Vec<f64>> {
    check_entry(r, n, p, q)?;
    checked_subset_count(r, n - 1, cfg.enumeration_cap)?;
    Ok(IndexSet::all(r, n)?.map(|is| reduced_entry_f64(&is, p, q)).collect())
}

/// `e_{p,q} / C(r-n, p)`: the expected coefficient sum, in closed form via `sigma_b`.
pub fn expected_reduced(r: usize, n: usize, p: usize, q: usize) -> Result<BigRational> {
    check_entry(r, n, p, q)?;
    let sigma = SigmaTable::new(r, n - 1);
    Ok(expected_reduced_with(&sigma, r, n, p, q))
}

fn expected_reduced_with(sigma: &SigmaTable, r: usize, n: usize, p: usize, q: usize) -> BigRational {
    let low_den: BigInt = (1..q).map(|t| BigInt::from(p + t)).product();
    let high_den: BigInt = (1..=n - q).map(|t| BigInt::from(r - p - n + t)).product();
    let low = sigma.get(p + q - 1, q - 1).expect("p + q - 1 >= q - 1");
    let high = sigma.get(r - p - q, n - q).expect("p <= r - n");
    BigRational::new(low * high, low_den * high_den * 2)
}

/// Exact expected entry `e_{p,q}(B_r)`.
pub fn expected_entry(r: usize, n: usize, p: usize, q: usize) -> Result<BigRational> {
    Ok(expected_reduced(r, n, p, q)? * BigRational::from_integer(binomial((r - n) as i64, p as i64)))
}

/// The exact expected table of `B_r`, without enumerating index sets.
pub fn expected_table(r: usize, n: usize) -> Result<ExactTable> {
    check_shape(r, n)?;
    let sigma = SigmaTable::new(r, n - 1);
    let mut table = ExactTable::zeros(r, n)?;
    for q in 1..=n {
        for p in 0..=r - n {
            let scale = BigRational::from_integer(binomial((r - n) as i64, p as i64));
            table.set(p, q, scale * expected_reduced_with(&sigma, r, n, p, q));
        }
    }
    Ok(table)
}

/// `mu(r, p) = p^{q-1} (r-p-n)^{n-q} / (2^n (q-1)! (n-q)!)`, the leading term
/// of `e_{p,q} / C(r-n, p)`.
pub fn mu(r: usize, p: usize, q: usize, n: usize) -> Result<BigRational> {
    check_entry(r, n, p, q)?;
    let num = BigInt::from(p).pow((q - 1) as u32) * BigInt::from(r - p - n).pow((n - q) as u32);
    let den = (BigInt::one() << n)
        * crate::combinatorics::factorial((q - 1) as u64)
        * crate::combinatorics::factorial((n - q) as u64);
    Ok(BigRational::new(num, den))
}

fn nonzero_mu(r: usize, p: usize, q: usize, n: usize) -> Result<f64> {
    let m = mu(r, p, q, n)?;
    if m.is_zero() {
        return Err(Error::DegenerateNormalizer(format!("mu(r={r}, p={p}, q={q}, n={n}) = 0")));
    }
    Ok(rational_to_f64(&m))
}

/// `k_{p,q}(x) / (C(r-n, p) * mu)`, computed as `sum_I c_I x_I / mu`.
pub fn normalized_entry(coeffs: &CoefficientVector, p: usize, q: usize) -> Result<f64> {
    let (r, n) = (coeffs.r, coeffs.n);
    check_entry(r, n, p, q)?;
    let m = nonzero_mu(r, p, q, n)?;
    let sum: f64 = coeffs.iter().map(|(is, x)| x * reduced_entry_f64(&is, p, q)).sum();
    Ok(sum / m)
}

/// Exact standard deviation of [`normalized_entry`] under uniform sampling:
/// `sqrt(sum_I c_I^2 / 12) / mu`.
pub fn analytic_ratio_std(r: usize, n: usize, p: usize, q: usize, cfg: &SamplingConfig) -> Result<f64> {
    let m = nonzero_mu(r, p, q, n)?;
    let c = entry_coefficients(r, n, p, q, cfg)?;
    let sum_sq: f64 = c.iter().map(|c| c * c).sum();
    Ok((sum_sq / 12.0).sqrt() / m)
}

/// `N` draws of the normalized entry, sample `i` taken from `derive_seed(master_seed, i)`.
/// The returned vector is in sample order regardless of thread count.
pub fn normalized_entry_samples(
    r: usize,
    n: usize,
    p: usize,
    q: usize,
    samples: usize,
    master_seed: u64,
    cfg: &SamplingConfig,
) -> Result<Vec<f64>> {
    let m = nonzero_mu(r, p, q, n)?;
    let c = entry_coefficients(r, n, p, q, cfg)?;
    Ok((0..samples as u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = stream(derive_seed(master_seed, i));
            // same draw order as sample_uniform
            c.iter().map(|ci| ci * rng.random::<f64>()).sum::<f64>() / m
        })
        .collect())
}

/// Monte Carlo estimate of `P(|normalized_entry - 1| > epsilon)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DeviationEstimate {
    pub r: usize,
    pub n: usize,
    pub p: usize,
    pub q: usize,
    pub epsilon: f64,
    pub samples: usize,
    pub master_seed: u64,
    pub hit_fraction: f64,
    pub standard_error: f64,
    pub analytic_ratio_std: f64,
}

#[allow(clippy::too_many_arguments)]
pub fn estimate_deviation_probability(
    r: usize,
    n: usize,
    p: usize,
    q: usize,
    epsilon: f64,
    samples: usize,
    master_seed: u64,
    cfg: &SamplingConfig,
) -> Result<DeviationEstimate> {
    if samples == 0 {
        return Err(Error::Parameter("need at least one sample".into()));
    }
    if epsilon.is_nan() || epsilon < 0.0 {
        return Err(Error::Parameter(format!("epsilon must be nonnegative, got {epsilon}")));
    }
    let values = normalized_entry_samples(r, n, p, q, samples, master_seed, cfg)?;
    let hits = values.iter().filter(|v| (*v - 1.0).abs() > epsilon).count();
    let hit_fraction = hits as f64 / samples as f64;
    Ok(DeviationEstimate {
        r,
        n,
        p,
        q,
        epsilon,
        samples,
        master_seed,
        hit_fraction,
        standard_error: (hit_fraction * (1.0 - hit_fraction) / samples as f64).sqrt(),
        analytic_ratio_std: analytic_ratio_std(r, n, p, q, cfg)?,
    })
}

/// Entrywise mean and standard error of `N` sampled tables.
#[derive(Debug, Clone, PartialEq)]
pub struct MeanTable {
    pub mean: FloatTable,
    pub standard_error: FloatTable,
    pub samples: usize,
    pub master_seed: u64,
}

// Samples are summed in fixed chunks and the chunks merged in order, so the
// result does not depend on how rayon schedules the work.
const MEAN_CHUNK: usize = 64;

#[derive(Clone)]
struct Moments {
    count: f64,
    mean: Vec<f64>,
    m2: Vec<f64>,
}

impl Moments {
    fn empty(len: usize) -> Self {
        Moments { count: 0.0, mean: vec![0.0; len], m2: vec![0.0; len] }
    }

    fn push(&mut self, xs: &[f64]) {
        self.count += 1.0;
        for ((m, s), &x) in self.mean.iter_mut().zip(self.m2.iter_mut()).zip(xs) {
            let delta = x - *m;
            *m += delta / self.count;
            *s += delta * (x - *m);
        }
    }

    fn merge(mut self, other: &Moments) -> Moments {
        let total = self.count + other.count;
        if other.count == 0.0 {
            return self;
        }
        for i in 0..self.mean.len() {
            let delta = other.mean[i] - self.mean[i];
            self.mean[i] += delta * other.count / total;
            self.m2[i] += other.m2[i] + delta * delta * self.count * other.count / total;
        }
        self.count = total;
        self
    }
}

/// Mean of `N` random tables; table `i` uses seed `derive_seed(master_seed, i)`.
pub fn mean_table(r: usize, n: usize, samples: usize, master_seed: u64, cfg: &SamplingConfig) -> Result<MeanTable> {
    if samples == 0 {
        return Err(Error::Parameter("need at least one sample".into()));
    }
    let template = FloatTable::zeros(r, n)?;
    let len = n * (r + 1 - n);
    let chunks: Vec<Moments> = (0..samples.div_ceil(MEAN_CHUNK))
        .into_par_iter()
        .map(|c| -> Result<Moments> {
            let mut acc = Moments::empty(len);
            for i in c * MEAN_CHUNK..((c + 1) * MEAN_CHUNK).min(samples) {
                let x = sample_uniform(r, n, derive_seed(master_seed, i as u64), cfg)?;
                let t = table_of(&x, cfg)?;
                let flat: Vec<f64> = t.iter().map(|(_, _, v)| *v).collect();
                acc.push(&flat);
            }
            Ok(acc)
        })
        .collect::<Result<_>>()?;
    let total = chunks.iter().fold(Moments::empty(len), |acc, c| acc.merge(c));
    let mut mean = template.clone();
    let mut se = template;
    for i in 0..len {
        mean.entries_mut()[i] = total.mean[i];
        let var = if samples > 1 { total.m2[i] / (total.count - 1.0) } else { 0.0 };
        se.entries_mut()[i] = (var.max(0.0) / total.count).sqrt();
    }
    Ok(MeanTable { mean, standard_error: se, samples, master_seed })
}
