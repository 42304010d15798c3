//! Two-row random tables whose coefficients are rescaled by a weight
//! function: `x_i` uniform on `[0, h(i/r)]`.

use std::cmp::Ordering;
use std::f64::consts::{LN_2, PI};
use std::fmt;
use std::io::Read;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::asymptotics::p_of;
use crate::combinatorics::{binomial, ln_binomial};
use crate::error::{Error, Result};
use crate::report::{ExperimentPoint, ExperimentReport};
use crate::sampling::{derive_seed, stream, CoefficientVector};

/// Grid used to check the range and the support of preset weights.
const GRID: usize = 10_000;
const QUAD_RTOL: f64 = 1e-10;
const QUAD_MAX_DEPTH: u32 = 48;

/// A weight `h : [0, 1] -> [0, 1]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum WeightFunction {
    Constant {
        value: f64,
    },
    /// `sin^2(2 pi (t - shift))`.
    Sin2 {
        shift: f64,
    },
    /// Linear interpolation through `(t, h)` samples, held constant outside `[t_0, t_last]`.
    Table {
        t: Vec<f64>,
        h: Vec<f64>,
    },
}

impl WeightFunction {
    pub fn constant(value: f64) -> Result<Self> {
        let w = WeightFunction::Constant { value };
        w.check_range()?;
        Ok(w)
    }

    pub fn sin2(shift: f64) -> Result<Self> {
        if !shift.is_finite() {
            return Err(Error::Parameter(format!("shift {shift} is not finite")));
        }
        Ok(WeightFunction::Sin2 { shift })
    }

    pub fn table(points: Vec<(f64, f64)>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::Parameter("weight table is empty".into()));
        }
        if points.windows(2).any(|w| w[0].0.partial_cmp(&w[1].0) != Some(Ordering::Less)) {
            return Err(Error::Parameter("weight table t values must be strictly increasing".into()));
        }
        let (t, h): (Vec<f64>, Vec<f64>) = points.into_iter().unzip();
        if t.iter().any(|x| !(0.0..=1.0).contains(x)) {
            return Err(Error::Parameter("weight table t values must lie in [0, 1]".into()));
        }
        let w = WeightFunction::Table { t, h };
        w.check_range()?;
        Ok(w)
    }

    /// Reads a two-column `t,h` CSV; a header row and `#` comment lines are skipped.
    pub fn from_csv<R: Read>(reader: R) -> Result<Self> {
        let mut rdr =
            csv::ReaderBuilder::new().has_headers(false).comment(Some(b'#')).trim(csv::Trim::All).from_reader(reader);
        let mut points = Vec::new();
        for (line, rec) in rdr.records().enumerate() {
            let rec = rec.map_err(|e| Error::Parse(e.to_string()))?;
            if rec.len() != 2 {
                return Err(Error::Parse(format!("weight row {} has {} fields, expected 2", line + 1, rec.len())));
            }
            let parsed: std::result::Result<Vec<f64>, _> = rec.iter().map(str::parse::<f64>).collect();
            match parsed {
                Ok(v) => points.push((v[0], v[1])),
                Err(_) if line == 0 => continue,
                Err(e) => return Err(Error::Parse(format!("weight row {}: {e}", line + 1))),
            }
        }
        Self::table(points)
    }

    pub fn eval(&self, t: f64) -> f64 {
        match self {
            WeightFunction::Constant { value } => *value,
            WeightFunction::Sin2 { shift } => (2.0 * PI * (t - shift)).sin().powi(2),
            WeightFunction::Table { t: ts, h } => {
                let k = ts.partition_point(|&x| x <= t);
                if k == 0 {
                    h[0]
                } else if k == ts.len() {
                    h[k - 1]
                } else {
                    let s = (t - ts[k - 1]) / (ts[k] - ts[k - 1]);
                    h[k - 1] + s * (h[k] - h[k - 1])
                }
            }
        }
    }

    /// Exact value at a rational point, for weights that take rational values there.
    pub fn exact_value(&self, t: &BigRational) -> Option<BigRational> {
        let rat = |x: f64| BigRational::from_float(x);
        match self {
            WeightFunction::Constant { value } => rat(*value),
            WeightFunction::Sin2 { .. } => None,
            WeightFunction::Table { t: ts, h } => {
                let ts: Vec<BigRational> = ts.iter().map(|&x| rat(x)).collect::<Option<_>>()?;
                let k = ts.partition_point(|x| x <= t);
                if k == 0 {
                    rat(h[0])
                } else if k == ts.len() {
                    rat(h[k - 1])
                } else {
                    let (h0, h1) = (rat(h[k - 1])?, rat(h[k])?);
                    let s = (t - &ts[k - 1]) / (&ts[k] - &ts[k - 1]);
                    Some(&h0 + s * (h1 - &h0))
                }
            }
        }
    }

    /// Presets count as smooth; interpolated tables have kinks.
    pub fn is_smooth(&self) -> bool {
        !matches!(self, WeightFunction::Table { .. })
    }

    /// Constants and table values are checked exactly; `sin2` lies in `[0, 1]` by construction.
    pub fn check_range(&self) -> Result<()> {
        let bad = |v: f64| !(0.0..=1.0).contains(&v);
        let offending = match self {
            WeightFunction::Constant { value } => bad(*value).then_some(*value),
            WeightFunction::Sin2 { .. } => (0..=GRID).map(|k| self.eval(k as f64 / GRID as f64)).find(|&v| bad(v)),
            WeightFunction::Table { h, .. } => h.iter().copied().find(|&v| bad(v)),
        };
        match offending {
            Some(v) => Err(Error::Parameter(format!("weight value {v} lies outside [0, 1]"))),
            None => Ok(()),
        }
    }

    /// Whether `h` vanishes at every grid point of `[lo, hi]`.
    pub fn vanishes_on(&self, lo: f64, hi: f64) -> bool {
        (0..=GRID).all(|k| self.eval(lo + (hi - lo) * k as f64 / GRID as f64) == 0.0)
    }
}

impl fmt::Display for WeightFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WeightFunction::Constant { value } => write!(f, "constant({value})"),
            WeightFunction::Sin2 { shift } => write!(f, "sin2({shift})"),
            WeightFunction::Table { t, .. } => write!(f, "table({} points)", t.len()),
        }
    }
}

fn check_two_row(n: usize) -> Result<()> {
    if n != 2 {
        return Err(Error::UnsupportedDimension(n));
    }
    Ok(())
}

/// Weighted coefficient vector for `n = 2`: `x_i = h(i/r) U_i`, with `U_i`
/// the draws `sample_uniform` would make for the same seed.
pub fn weighted_sample(r: usize, n: usize, h: &WeightFunction, seed: u64) -> Result<CoefficientVector> {
    check_two_row(n)?;
    crate::tables::check_shape(r, n)?;
    let mut rng = stream(seed);
    let values = (1..=r).map(|i| h.eval(i as f64 / r as f64) * rng.random::<f64>()).collect();
    CoefficientVector::new(r, n, values, Some(seed))
}

fn simpson(f: &impl Fn(f64) -> f64, a: f64, fa: f64, b: f64, fb: f64) -> (f64, f64, f64) {
    let m = 0.5 * (a + b);
    let fm = f(m);
    (m, fm, (b - a) / 6.0 * (fa + 4.0 * fm + fb))
}

#[allow(clippy::too_many_arguments)]
fn adaptive(
    f: &impl Fn(f64) -> f64,
    a: f64,
    fa: f64,
    b: f64,
    fb: f64,
    whole: (f64, f64, f64),
    tol: f64,
    depth: u32,
) -> f64 {
    let (m, fm, s) = whole;
    let left = simpson(f, a, fa, m, fm);
    let right = simpson(f, m, fm, b, fb);
    let delta = left.2 + right.2 - s;
    if depth == 0 || delta.abs() <= 15.0 * tol {
        // Richardson correction
        return left.2 + right.2 + delta / 15.0;
    }
    adaptive(f, a, fa, m, fm, left, tol / 2.0, depth - 1) + adaptive(f, m, fm, b, fb, right, tol / 2.0, depth - 1)
}

/// Adaptive Simpson quadrature of `f` over `[a, b]` to relative tolerance `rtol`.
pub fn integrate(f: impl Fn(f64) -> f64, a: f64, b: f64, rtol: f64) -> f64 {
    const PANELS: usize = 64;
    let width = (b - a) / PANELS as f64;
    let knots: Vec<f64> = (0..=PANELS).map(|k| a + width * k as f64).collect();
    let values: Vec<f64> = knots.iter().map(|&x| f(x)).collect();
    let wholes: Vec<_> = (0..PANELS).map(|k| simpson(&f, knots[k], values[k], knots[k + 1], values[k + 1])).collect();
    let coarse: f64 = wholes.iter().map(|w| w.2.abs()).sum();
    if coarse == 0.0 {
        return 0.0;
    }
    let tol = rtol * coarse / PANELS as f64;
    (0..PANELS)
        .map(|k| adaptive(&f, knots[k], values[k], knots[k + 1], values[k + 1], wholes[k], tol, QUAD_MAX_DEPTH))
        .sum()
}

/// `H(r, p) = ∫_c^1 h(t) (t - c) dt / (2 (1 - c))` with `c = (p+1)/r`.
#[allow(non_snake_case)]
pub fn H_integral(r: usize, p: f64, h: &WeightFunction) -> Result<f64> {
    if r == 0 || p.is_nan() || p + 1.0 >= r as f64 {
        return Err(Error::DegenerateInterval(format!("need p + 1 < r, got p = {p}, r = {r}")));
    }
    let c = (p + 1.0) / r as f64;
    let integral = integrate(|t| h.eval(t) * (t - c), c, 1.0, QUAD_RTOL);
    Ok(integral / (2.0 * (1.0 - c)))
}

fn check_column(r: usize, p: usize, q: usize) -> Result<()> {
    crate::tables::check_shape(r, 2)?;
    if p > r - 2 || !(1..=2).contains(&q) {
        return Err(Error::Parameter(format!("entry (p={p}, q={q}) outside 0..={} x 1..=2", r - 2)));
    }
    Ok(())
}

/// Indices `i` and weights `w_i` with `e_{p,q}(B_r^h) = C(r-2, p) Σ h(i/r) w_i`.
fn row_weights(r: usize, p: usize, q: usize) -> Vec<(usize, BigRational)> {
    let w = |num: usize, den: usize| BigRational::new(BigInt::from(num), BigInt::from(2 * den));
    if q == 1 {
        (p + 2..=r).map(|i| (i, w(i - p - 1, r - p - 1))).collect()
    } else {
        (1..=p + 1).map(|i| (i, w(p + 2 - i, p + 1))).collect()
    }
}

/// `e_{p,q}(B_r^h) / C(r-2, p)`.
pub fn weighted_expected_reduced(r: usize, p: usize, q: usize, h: &WeightFunction) -> Result<f64> {
    check_column(r, p, q)?;
    Ok(row_weights(r, p, q)
        .into_iter()
        .map(|(i, w)| h.eval(i as f64 / r as f64) * crate::tables::rational_to_f64(&w))
        .sum())
}

/// `e_{p,q}(B_r^h)` in floating point, the binomial taken from log-gamma.
pub fn weighted_expected(r: usize, p: usize, q: usize, h: &WeightFunction) -> Result<f64> {
    let reduced = weighted_expected_reduced(r, p, q, h)?;
    if reduced == 0.0 {
        return Ok(0.0);
    }
    let value = ln_binomial((r - 2) as i64, p as i64).exp() * reduced;
    if !value.is_finite() {
        return Err(Error::Overflow(format!("weighted expectation at (r={r}, p={p}) exceeds f64")));
    }
    Ok(value)
}

pub fn weighted_expected_k_p1(r: usize, p: usize, h: &WeightFunction) -> Result<f64> {
    weighted_expected(r, p, 1, h)
}

pub fn weighted_expected_k_p2(r: usize, p: usize, h: &WeightFunction) -> Result<f64> {
    weighted_expected(r, p, 2, h)
}

/// Exact `e_{p,q}(B_r^h)`; fails with [`Error::Mode`] when `h` is not rational-valued.
pub fn weighted_expected_exact(r: usize, p: usize, q: usize, h: &WeightFunction) -> Result<BigRational> {
    check_column(r, p, q)?;
    let mut sum = BigRational::zero();
    for (i, w) in row_weights(r, p, q) {
        let t = BigRational::new(BigInt::from(i), BigInt::from(r));
        let hv = h.exact_value(&t).ok_or_else(|| Error::Mode(format!("weight {h} has no exact rational values")))?;
        sum += hv * w;
    }
    Ok(sum * BigRational::from_integer(binomial((r - 2) as i64, p as i64)))
}

/// `e_{p,1}(B_r^h) / (C(r-2, p) r H(r, p))`, the Riemann-sum ratio.
pub fn riemann_ratio(r: usize, p: usize, h: &WeightFunction) -> Result<f64> {
    let big_h = H_integral(r, p as f64, h)?;
    Ok(weighted_expected_reduced(r, p, 1, h)? / (r as f64 * big_h))
}

/// `ln F_1(r)` with `F_1(r) = sqrt(2 pi r) / (2^{r-1} r H(r, r/2))`.
pub fn ln_weighted_normalizer(r: usize, h: &WeightFunction) -> Result<f64> {
    let big_h = H_integral(r, r as f64 / 2.0, h)?;
    if big_h.is_nan() || big_h <= 0.0 {
        return Err(Error::HypothesisViolation(format!("H(r, r/2) = {big_h} for r = {r}")));
    }
    let r_f = r as f64;
    Ok(0.5 * (2.0 * PI * r_f).ln() - (r_f - 1.0) * LN_2 - r_f.ln() - big_h.ln())
}

/// Mean over `samples` weighted tables of `F_1(r) k_{p_r,1}`, compared with `exp(-a^2/2)`.
pub fn weighted_gaussian_experiment(
    h: &WeightFunction,
    r_values: &[usize],
    a: f64,
    seed: u64,
    samples: usize,
    tolerance: f64,
) -> Result<ExperimentReport> {
    if h.vanishes_on(0.0, 0.5) || h.vanishes_on(0.5, 1.0) {
        return Err(Error::HypothesisViolation(format!("weight {h} vanishes identically on half of [0, 1]")));
    }
    if !h.is_smooth() {
        return Err(Error::HypothesisViolation(format!("weight {h} is not a smooth preset")));
    }
    if r_values.is_empty() || r_values.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Parameter(format!("r grid {r_values:?} must be nonempty and increasing")));
    }
    if samples == 0 {
        return Err(Error::Parameter("need at least one sample".into()));
    }
    let target = (-a * a / 2.0).exp();
    let mut points = Vec::with_capacity(r_values.len());
    for &r in r_values {
        crate::tables::check_shape(r, 2)?;
        let p = p_of(r, a)?;
        check_column(r, p, 1)?;
        let ln_scale = ln_weighted_normalizer(r, h)? + ln_binomial((r - 2) as i64, p as i64);
        let c: Vec<f64> = row_weights(r, p, 1)
            .into_iter()
            .map(|(i, w)| h.eval(i as f64 / r as f64) * 2.0 * crate::tables::rational_to_f64(&w))
            .collect();
        let offset = p + 2;
        let sums: Vec<f64> = (0..samples as u64)
            .into_par_iter()
            .map(|k| {
                let mut rng = stream(derive_seed(seed, k));
                let u: Vec<f64> = (0..r).map(|_| rng.random::<f64>()).collect();
                c.iter().enumerate().map(|(j, cj)| cj * u[offset + j - 1]).sum::<f64>()
            })
            .collect();
        let mean = sums.iter().sum::<f64>() / samples as f64;
        let value = if mean == 0.0 { 0.0 } else { ln_scale.exp() * mean };
        points.push(ExperimentPoint::new(r, p, value, target));
    }
    let spec = serde_json::json!({ "weight": h, "a": a, "r_values": r_values, "samples": samples, "q": 1 });
    Ok(ExperimentReport::new("weighted_gaussian", spec, Some(seed), tolerance, points))
}
