//! Unique decomposition of two-row tables into the pure diagrams `π(r, i)`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde_json::json;

use crate::error::{Error, Result};
use crate::io::format_rational;
use crate::linalg::{solve, Matrix, SolveError};
use crate::tables::{check_shape, pure_diagram, ExactTable, IndexSet};

/// Coefficients `x_1, ..., x_r` with `Σ x_i π(r, i)` equal to the decomposed table.
#[derive(Debug, Clone, PartialEq)]
pub struct Decomposition {
    r: usize,
    coefficients: Vec<BigRational>,
}

impl Decomposition {
    pub fn r(&self) -> usize {
        self.r
    }

    /// `x_i` sits at position `i - 1`.
    pub fn coefficients(&self) -> &[BigRational] {
        &self.coefficients
    }

    pub fn coefficient(&self, i: usize) -> &BigRational {
        &self.coefficients[i - 1]
    }

    pub fn reconstruct(&self) -> Result<ExactTable> {
        let basis = pure_basis(self.r)?;
        let mut table = ExactTable::zeros(self.r, 2)?;
        for (x, pi) in self.coefficients.iter().zip(&basis) {
            if !x.is_zero() {
                table = table.add_scaled(x, pi);
            }
        }
        Ok(table)
    }

    pub fn to_json(&self) -> serde_json::Value {
        let coefficients: Vec<_> = self
            .coefficients
            .iter()
            .enumerate()
            .map(|(k, x)| json!({ "i": k + 1, "value": format_rational(x) }))
            .collect();
        json!({ "r": self.r, "coefficients": coefficients, "residual": "0" })
    }
}

fn pure_basis(r: usize) -> Result<Vec<ExactTable>> {
    check_shape(r, 2)?;
    (1..=r).map(|i| Ok(pure_diagram(r, 2, &IndexSet::new(r, 2, vec![i])?)?.table)).collect()
}

/// The `2(r-1) x r` matrix whose column `i` is `π(r, i)` flattened row by row.
pub fn pure_basis_matrix(r: usize) -> Result<Matrix> {
    let basis = pure_basis(r)?;
    let rows = 2 * (r - 1);
    Ok((0..rows).map(|k| basis.iter().map(|pi| flatten(pi)[k].clone()).collect()).collect())
}

fn flatten(table: &ExactTable) -> Vec<BigRational> {
    table.iter().map(|(_, _, v)| v.clone()).collect()
}

/// Solves `table = Σ x_i π(r, i)` exactly and checks `x_i >= 0`.
pub fn decompose(table: &ExactTable) -> Result<Decomposition> {
    if table.n() != 2 {
        return Err(Error::UnsupportedDimension(table.n()));
    }
    let r = table.r();
    let a = pure_basis_matrix(r)?;
    let coefficients = match solve(&a, &flatten(table)) {
        Ok(x) => x,
        Err(SolveError::Inconsistent { row }) => return Err(Error::NotInSpan { row }),
        Err(SolveError::Underdetermined { rank }) => {
            unreachable!("pure diagrams are independent, rank {rank} < {r}")
        }
    };
    if let Some((k, x)) = coefficients.iter().enumerate().find(|(_, x)| x.is_negative()) {
        return Err(Error::NotInCone { index: k + 1, value: format_rational(x) });
    }
    Ok(Decomposition { r, coefficients })
}

/// `(r-1) (π(r, ⌊(r+1)/2⌋) + π(r, ⌈(r+1)/2⌉))`.
pub fn generic_module_table(r: usize) -> Result<ExactTable> {
    if r < 4 {
        return Err(Error::Parameter(format!("generic module table needs r >= 4, got {r}")));
    }
    let lo = pure_diagram(r, 2, &IndexSet::new(r, 2, vec![r.div_ceil(2)])?)?.table;
    let hi = pure_diagram(r, 2, &IndexSet::new(r, 2, vec![(r + 2) / 2])?)?.table;
    let s = BigRational::from_integer(BigInt::from(r - 1));
    Ok(lo.scaled(&s).add_scaled(&s, &hi))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::rank;
    use crate::tables::{herzog_kuhl_check, hilbert_function, multiplicity};

    fn int(n: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(n))
    }

    #[test]
    fn pure_diagrams_decompose_to_indicators() {
        for i in 1..=7 {
            let pi = pure_diagram(7, 2, &IndexSet::new(7, 2, vec![i]).unwrap()).unwrap().table;
            let d = decompose(&pi).unwrap();
            for j in 1..=7 {
                assert_eq!(d.coefficient(j), &int((i == j) as i64));
            }
            assert_eq!(d.reconstruct().unwrap(), pi);
        }
    }

    #[test]
    fn perturbation_leaves_the_span() {
        let mut pi = pure_diagram(7, 2, &IndexSet::new(7, 2, vec![4]).unwrap()).unwrap().table;
        let v = pi.get(0, 1) + BigRational::new(1.into(), 1000.into());
        pi.set_checked(0, 1, v).unwrap();
        assert!(matches!(decompose(&pi), Err(Error::NotInSpan { .. })));
    }

    #[test]
    fn negative_coefficients_leave_the_cone() {
        let a = pure_diagram(6, 2, &IndexSet::new(6, 2, vec![2]).unwrap()).unwrap().table;
        let b = pure_diagram(6, 2, &IndexSet::new(6, 2, vec![5]).unwrap()).unwrap().table;
        let diff = a.scaled(&int(3)).add_scaled(&BigRational::new((-1).into(), 2.into()), &b);
        if let Err(Error::NotInCone { index, value }) = decompose(&diff) {
            assert_eq!(index, 5);
            assert_eq!(value, "-1/2");
        } else {
            panic!("expected a cone violation");
        }
    }

    #[test]
    fn basis_has_full_rank() {
        for r in 3..=12 {
            assert_eq!(rank(pure_basis_matrix(r).unwrap()), r);
        }
    }

    #[test]
    fn generic_module_examples() {
        let t7 = generic_module_table(7).unwrap();
        let pi = pure_diagram(7, 2, &IndexSet::new(7, 2, vec![4]).unwrap()).unwrap().table;
        assert_eq!(t7, pi.scaled(&int(12)));
        let hf = hilbert_function(&t7);
        assert_eq!(hf.support(), vec![1, 2]);
        assert_eq!(hf.at(1), int(6));
        assert_eq!(hf.at(2), int(6));
        let t8 = generic_module_table(8).unwrap();
        assert_eq!(hilbert_function(&t8).at(1), int(7));
        assert!(herzog_kuhl_check(&t8));
        assert_eq!(multiplicity(&t8).unwrap(), int(14));
        let d = decompose(&t8).unwrap();
        assert_eq!(d.coefficient(4), &int(7));
        assert_eq!(d.coefficient(5), &int(7));
        assert!(generic_module_table(3).is_err());
    }

    #[test]
    fn json_shape() {
        let d = decompose(&generic_module_table(5).unwrap()).unwrap();
        let v = d.to_json();
        assert_eq!(v["r"], 5);
        assert_eq!(v["residual"], "0");
        assert_eq!(v["coefficients"][2], json!({ "i": 3, "value": "8/1" }));
        assert_eq!(v["coefficients"][0]["value"], "0/1");
    }
}
