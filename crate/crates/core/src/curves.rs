//! Betti numbers `k_{p,1}` of curves embedded by a line bundle of large
//! degree, their Gaussian normalization, and a Koszul-complex oracle for
//! rational normal curves.

use std::collections::BTreeMap;
use std::f64::consts::{LN_2, PI};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::combinatorics::{binomial, ln_binomial, Subsets};
use crate::error::{Error, Result};
use crate::linalg::{rank, Matrix};
use crate::tables::rational_to_f64;

/// Largest degree accepted by [`koszul_oracle_p1`].
pub const ORACLE_MAX_DEGREE: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum RegimeGuard {
    /// Reject `d < 2g + 3`.
    #[default]
    Strict,
    /// Log a warning and continue.
    Warn,
}

/// A curve of genus `g` embedded by a line bundle of degree `d` into `P^{r_d}`, `r_d = d - g`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CurveEmbedding {
    genus: usize,
    degree: usize,
}

impl CurveEmbedding {
    pub fn new(genus: usize, degree: usize) -> Result<Self> {
        Self::with_guard(genus, degree, RegimeGuard::Strict)
    }

    pub fn with_guard(genus: usize, degree: usize, guard: RegimeGuard) -> Result<Self> {
        if degree <= 2 * genus {
            return Err(Error::Parameter(format!("degree {degree} must exceed 2g = {}", 2 * genus)));
        }
        if degree < 2 * genus + 3 {
            let msg = format!("degree {degree} below the guard 2g + 3 = {}", 2 * genus + 3);
            match guard {
                RegimeGuard::Strict => return Err(Error::Parameter(msg)),
                RegimeGuard::Warn => log::warn!("{msg}"),
            }
        }
        Ok(CurveEmbedding { genus, degree })
    }

    pub fn genus(&self) -> usize {
        self.genus
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn r_d(&self) -> usize {
        self.degree - self.genus
    }

    /// Last `p` covered by the closed formula, `r_d - g`.
    pub fn regime_max(&self) -> usize {
        self.r_d() - self.genus
    }

    fn check_regime(&self, p: usize) -> Result<()> {
        if p == 0 || p > self.regime_max() {
            return Err(Error::OutOfRegime { p: p as u64, max: self.regime_max() as u64 });
        }
        Ok(())
    }

    /// `-p d/(d-g) + (d+1-g) - (d+1-g)/(p+1)`.
    fn bracket(&self, p: usize) -> BigRational {
        let (d, g, p) = (self.degree as i64, self.genus as i64, p as i64);
        let q = |a: i64, b: i64| BigRational::new(BigInt::from(a), BigInt::from(b));
        -q(p * d, d - g) + q(d + 1 - g, 1) - q(d + 1 - g, p + 1)
    }
}

/// `k_{p,1} = C(d-g, p) (-p d/(d-g) + (d+1-g) - (d+1-g)/(p+1))` for `1 <= p <= r_d - g`.
pub fn curve_k_p1(embedding: &CurveEmbedding, p: usize) -> Result<BigRational> {
    embedding.check_regime(p)?;
    let c = binomial(embedding.r_d() as i64, p as i64);
    Ok(BigRational::from_integer(c) * embedding.bracket(p))
}

/// `C(d+1-g, p) (d+1-g)`, zero once `p > d+1-g`.
pub fn curve_k_p1_upper_bound(embedding: &CurveEmbedding, p: usize) -> BigRational {
    let m = (embedding.r_d() + 1) as i64;
    BigRational::from_integer(binomial(m, p as i64) * BigInt::from(m))
}

/// `2^{-r_d} sqrt(2 pi / r_d) k_{p,1}`, evaluated in log space.
pub fn curve_normalized(embedding: &CurveEmbedding, p: usize) -> Result<f64> {
    embedding.check_regime(p)?;
    let bracket = embedding.bracket(p);
    if bracket.is_zero() {
        return Ok(0.0);
    }
    let r = embedding.r_d() as f64;
    let ln = ln_binomial(embedding.r_d() as i64, p as i64) - r * LN_2 + 0.5 * (2.0 * PI / r).ln();
    Ok(ln.exp() * rational_to_f64(&bracket))
}

/// `(p, k_{p,1})` over the whole formula regime.
pub fn curve_profile(embedding: &CurveEmbedding) -> Vec<(usize, BigRational)> {
    (1..=embedding.regime_max()).map(|p| (p, curve_k_p1(embedding, p).expect("p inside regime"))).collect()
}

/// Element of `Λ^k V ⊗ W_e`: exponents of the wedged monomials and of the
/// polynomial factor. Its torus weight is the total exponent.
type Basis = (Vec<usize>, usize);

fn weight(b: &Basis) -> usize {
    b.0.iter().sum::<usize>() + b.1
}

/// `v_0 ∧ ... ∧ v_k ⊗ s ↦ Σ_i (-1)^i (omit v_i) ⊗ v_i s`.
fn koszul_image(b: &Basis) -> Vec<(Basis, i64)> {
    let (wedge, s) = b;
    (0..wedge.len())
        .map(|i| {
            let mut rest = wedge.clone();
            let v = rest.remove(i);
            ((rest, s + v), if i % 2 == 0 { 1 } else { -1 })
        })
        .collect()
}

/// Rank of the Koszul differential on `domain`, computed one weight space at a time.
fn koszul_rank(domain: Vec<Basis>) -> usize {
    let mut blocks: BTreeMap<usize, Vec<Basis>> = BTreeMap::new();
    for b in domain {
        blocks.entry(weight(&b)).or_default().push(b);
    }
    blocks
        .into_values()
        .map(|cols| {
            let images: Vec<_> = cols.iter().map(koszul_image).collect();
            let mut rows: BTreeMap<Basis, usize> = BTreeMap::new();
            for (target, _) in images.iter().flatten() {
                let next = rows.len();
                rows.entry(target.clone()).or_insert(next);
            }
            let mut m: Matrix = vec![vec![BigRational::zero(); cols.len()]; rows.len()];
            for (j, image) in images.iter().enumerate() {
                for (target, sign) in image {
                    m[rows[target]][j] += BigRational::from_integer(BigInt::from(*sign));
                }
            }
            rank(m)
        })
        .sum()
}

fn wedge_basis(d: usize, k: usize, poly_degree: usize) -> Vec<Basis> {
    let mut out = Vec::new();
    for subset in Subsets::new(d + 1, k) {
        let wedge: Vec<usize> = subset.iter().map(|&x| x - 1).collect();
        for s in 0..=poly_degree {
            out.push((wedge.clone(), s));
        }
    }
    out
}

/// `k_{p,1}(P^1, O(d))` as the middle homology of
/// `Λ^{p+1}V → Λ^p V ⊗ W_d → Λ^{p-1}V ⊗ W_{2d}`, `V = W_d`, by exact rank computation.
pub fn koszul_oracle_p1(d: usize, p: usize) -> Result<u64> {
    if d > ORACLE_MAX_DEGREE {
        return Err(Error::Capacity(format!("oracle degree {d} exceeds {ORACLE_MAX_DEGREE}")));
    }
    if p == 0 || p + 1 > d {
        return Err(Error::Parameter(format!("p = {p} outside 1..={}", d.saturating_sub(1))));
    }
    let middle = wedge_basis(d, p, d);
    let middle_dim = middle.len();
    let outgoing = koszul_rank(middle);
    let incoming = koszul_rank(wedge_basis(d, p + 1, 0));
    Ok((middle_dim - outgoing - incoming) as u64)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn int(n: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(n))
    }

    #[test]
    fn rational_normal_quartic() {
        let e = CurveEmbedding::new(0, 4).unwrap();
        let got: Vec<_> = (1..=3).map(|p| curve_k_p1(&e, p).unwrap()).collect();
        assert_eq!(got, vec![int(6), int(8), int(3)]);
        assert_eq!(curve_k_p1(&e, 4).unwrap(), int(0));
        assert!(matches!(curve_k_p1(&e, 5), Err(Error::OutOfRegime { .. })));
        assert!(matches!(curve_k_p1(&e, 0), Err(Error::OutOfRegime { .. })));
    }

    #[test]
    fn genus_zero_simplification() {
        for d in 3..30usize {
            let e = CurveEmbedding::new(0, d).unwrap();
            for p in 1..=d {
                let want = BigInt::from(p) * binomial(d as i64, p as i64 + 1);
                assert_eq!(curve_k_p1(&e, p).unwrap(), BigRational::from_integer(want));
            }
            assert_eq!(curve_k_p1(&e, d - 1).unwrap(), int(d as i64 - 1));
        }
    }

    #[test]
    fn upper_bound_examples() {
        let e = CurveEmbedding::new(0, 6).unwrap();
        assert_eq!(curve_k_p1_upper_bound(&e, 2), int(147));
        assert_eq!(curve_k_p1(&e, 2).unwrap(), int(40));
        let far = CurveEmbedding::new(10, 75).unwrap();
        assert_eq!(curve_k_p1_upper_bound(&far, 70), int(0));
    }

    #[test]
    fn guard_modes() {
        assert!(CurveEmbedding::new(10, 22).is_err());
        assert!(CurveEmbedding::with_guard(10, 22, RegimeGuard::Warn).is_ok());
        assert!(CurveEmbedding::with_guard(10, 20, RegimeGuard::Warn).is_err());
        assert_eq!(CurveEmbedding::new(10, 75).unwrap().r_d(), 65);
    }

    #[test]
    fn normalized_values() {
        let e = CurveEmbedding::new(0, 400).unwrap();
        let v = curve_normalized(&e, 200).unwrap();
        assert!((v - 1.0).abs() < 0.05, "{v}");
        let e = CurveEmbedding::new(0, 30).unwrap();
        assert_eq!(curve_normalized(&e, 30).unwrap(), 0.0);
        let exact = rational_to_f64(&curve_k_p1(&e, 12).unwrap()) * (2.0 * PI / 30.0).sqrt() / 2f64.powi(30);
        assert!((curve_normalized(&e, 12).unwrap() / exact - 1.0).abs() < 1e-12);
    }

    #[test]
    fn oracle_examples() {
        assert_eq!(koszul_oracle_p1(4, 2).unwrap(), 8);
        assert_eq!(koszul_oracle_p1(3, 1).unwrap(), 3);
        assert_eq!(koszul_oracle_p1(2, 1).unwrap(), 1);
        assert!(matches!(koszul_oracle_p1(9, 2), Err(Error::Capacity(_))));
        assert!(matches!(koszul_oracle_p1(4, 4), Err(Error::Parameter(_))));
        assert!(matches!(koszul_oracle_p1(4, 0), Err(Error::Parameter(_))));
    }

    #[test]
    fn koszul_differential_squares_to_zero() {
        for b in wedge_basis(5, 3, 0) {
            let mut total: BTreeMap<Basis, i64> = BTreeMap::new();
            for (mid, s1) in koszul_image(&b) {
                for (end, s2) in koszul_image(&mid) {
                    *total.entry(end).or_default() += s1 * s2;
                }
            }
            assert!(total.values().all(|&c| c == 0));
        }
    }
}
