//! Stirling-normalized Gaussian limits: the binomial limit, the normalizer
//! `F(r)` for random tables, and the convergence of `F(r) * k_{p_r,q}`
//! towards `exp(-a^2 / 2)` along `p_r = round(r/2 + a sqrt(r)/2)`.

use std::f64::consts::{LN_2, PI};

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::combinatorics::{ln_binomial, ln_factorial};
use crate::error::{Error, Result};
use crate::report::{ExperimentPoint, ExperimentReport};
use crate::sampling::{derive_seed, entry_coefficients, expected_reduced, stream, SamplingConfig};
use crate::tables::{check_shape, rational_to_f64};

/// `round(r/2 + a * sqrt(r) / 2)` with ties rounded away from zero; must land in `[0, r]`.
pub fn p_of(r: usize, a: f64) -> Result<usize> {
    let raw = r as f64 / 2.0 + a * (r as f64).sqrt() / 2.0;
    let p = raw.round();
    if !p.is_finite() || p < 0.0 || p > r as f64 {
        return Err(Error::Range { value: p as i64, min: 0, max: r as i64 });
    }
    Ok(p as usize)
}

/// Abscissa, grid of `r` values and the table entry `(n, q)` followed by an experiment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GaussianSequenceSpec {
    pub a: f64,
    pub r_values: Vec<usize>,
    pub n: usize,
    pub q: usize,
}

impl GaussianSequenceSpec {
    /// Checks the grid is increasing and every `p_r` lies in `[0, r - n]`.
    pub fn validate(&self) -> Result<()> {
        if self.r_values.is_empty() {
            return Err(Error::Parameter("empty r grid".into()));
        }
        if self.r_values.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Parameter(format!("r grid {:?} is not increasing", self.r_values)));
        }
        if !(1..=self.n).contains(&self.q) {
            return Err(Error::Parameter(format!("q = {} outside 1..={}", self.q, self.n)));
        }
        for &r in &self.r_values {
            self.p_r(r)?;
        }
        Ok(())
    }

    pub fn p_r(&self, r: usize) -> Result<usize> {
        check_shape(r, self.n)?;
        let p = p_of(r, self.a)?;
        if p > r - self.n {
            return Err(Error::Range { value: p as i64, min: 0, max: (r - self.n) as i64 });
        }
        Ok(p)
    }

    pub fn target(&self) -> f64 {
        (-self.a * self.a / 2.0).exp()
    }
}

/// `ln F(r)` with `F(r) = (q-1)! (n-q)! sqrt(2 pi r) / (2^{r+2-3n} r^{n-1})`.
pub fn ln_stirling_normalizer(r: usize, n: usize, q: usize) -> f64 {
    let r_f = r as f64;
    ln_factorial((q - 1) as u64) + ln_factorial((n - q) as u64) + 0.5 * (2.0 * PI * r_f).ln()
        - (r as f64 + 2.0 - 3.0 * n as f64) * LN_2
        - (n as f64 - 1.0) * r_f.ln()
}

pub fn stirling_normalizer(r: usize, n: usize, q: usize) -> Result<f64> {
    if n < 2 || !(1..=n).contains(&q) || r == 0 {
        return Err(Error::Parameter(format!("invalid (r={r}, n={n}, q={q})")));
    }
    Ok(ln_stirling_normalizer(r, n, q).exp())
}

/// `sqrt(2 pi r) / 2^{r+1} * C(r, p)`, evaluated through log-gamma.
pub fn binomial_gaussian_ratio(r: usize, p: usize) -> Result<f64> {
    if p > r {
        return Err(Error::Range { value: p as i64, min: 0, max: r as i64 });
    }
    let r_f = r as f64;
    Ok((0.5 * (2.0 * PI * r_f).ln() - (r_f + 1.0) * LN_2 + ln_binomial(r as i64, p as i64)).exp())
}

/// Where the entries `k_{p_r,q}` of a Gaussian experiment come from.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum EntrySource {
    /// The exact expected table.
    Expected,
    /// The mean over `samples` random tables, sample `i` seeded with `derive_seed(seed, i)`.
    Sampled { seed: u64, samples: usize },
    /// Every coefficient frozen at `value`.
    Constant { value: f64 },
}

/// `F(r) * k_{p_r,q}` along the grid of `spec`, compared with `exp(-a^2/2)`.
pub fn gaussian_experiment(
    spec: &GaussianSequenceSpec,
    source: EntrySource,
    tolerance: f64,
    cfg: &SamplingConfig,
) -> Result<ExperimentReport> {
    spec.validate()?;
    let target = spec.target();
    let (n, q) = (spec.n, spec.q);
    let mut points = Vec::with_capacity(spec.r_values.len());
    for &r in &spec.r_values {
        let p = spec.p_r(r)?;
        let ln_scale = ln_stirling_normalizer(r, n, q) + ln_binomial((r - n) as i64, p as i64);
        let reduced = match source {
            EntrySource::Expected => rational_to_f64(&expected_reduced(r, n, p, q)?),
            EntrySource::Constant { value } => {
                if !(0.0..=1.0).contains(&value) {
                    return Err(Error::Parameter(format!("coefficient {value} outside [0, 1]")));
                }
                value * entry_coefficients(r, n, p, q, cfg)?.iter().sum::<f64>()
            }
            EntrySource::Sampled { seed, samples } => {
                if samples == 0 {
                    return Err(Error::Parameter("need at least one sample".into()));
                }
                let c = entry_coefficients(r, n, p, q, cfg)?;
                let sums: Vec<f64> = (0..samples as u64)
                    .into_par_iter()
                    .map(|i| {
                        let mut rng = stream(derive_seed(seed, i));
                        c.iter().map(|ci| ci * rng.random::<f64>()).sum::<f64>()
                    })
                    .collect();
                sums.iter().sum::<f64>() / samples as f64
            }
        };
        let value = if reduced == 0.0 { 0.0 } else { ln_scale.exp() * reduced };
        points.push(ExperimentPoint::new(r, p, value, target));
    }
    let seed = match source {
        EntrySource::Sampled { seed, .. } => Some(seed),
        _ => None,
    };
    let spec_json = serde_json::json!({ "sequence": spec, "source": source });
    Ok(ExperimentReport::new("gaussian", spec_json, seed, tolerance, points))
}
