//! Betti tables, exact pure diagrams and the homological invariants used to
//! validate them (Hilbert function, multiplicity, Herzog-Kuhl equations).
//!
//! A table with `n` rows and width parameter `r` has columns `p = 0..=r-n`
//! and rows `q = 1..=n`; entry `k_{p,q}` counts `p`-th syzygies of weight `q`.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::combinatorics::{binomial, factorial, Subsets};
use crate::error::{Error, Result};

/// An `(n-1)`-element subset `i_1 < ... < i_{n-1}` of `[1, r]` labelling a pure diagram.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct IndexSet {
    r: usize,
    n: usize,
    elements: Vec<usize>,
}

impl IndexSet {
    pub fn new(r: usize, n: usize, elements: Vec<usize>) -> Result<Self> {
        check_shape(r, n)?;
        if elements.len() != n - 1 {
            return Err(Error::Parameter(format!(
                "index set for n = {n} needs {} elements, got {}",
                n - 1,
                elements.len()
            )));
        }
        if elements.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Parameter(format!("index set {elements:?} is not strictly increasing")));
        }
        if elements.first().is_some_and(|&i| i < 1) || elements.last().is_some_and(|&i| i > r) {
            return Err(Error::Parameter(format!("index set {elements:?} is not contained in [1, {r}]")));
        }
        Ok(IndexSet { r, n, elements })
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn elements(&self) -> &[usize] {
        &self.elements
    }

    /// All `C(r, n-1)` index sets in lexicographic order.
    pub fn all(r: usize, n: usize) -> Result<impl Iterator<Item = IndexSet>> {
        check_shape(r, n)?;
        Ok(Subsets::new(r, n - 1).map(move |elements| IndexSet { r, n, elements }))
    }

    /// The reflected set `{r + 1 - i}`; its pure diagram is the transpose-mirror of ours.
    pub fn reflect(&self) -> IndexSet {
        let mut elements: Vec<usize> = self.elements.iter().map(|&i| self.r + 1 - i).collect();
        elements.reverse();
        IndexSet { r: self.r, n: self.n, elements }
    }

    pub fn degree_sequence(&self) -> DegreeSequence {
        degree_sequence_of(self)
    }
}

impl fmt::Display for IndexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.elements.iter().map(ToString::to_string).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

/// Degrees `d_0 < ... < d_{r-n}`: the complement of an index set in `[1, r]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeSequence(Vec<usize>);

impl DegreeSequence {
    pub fn degrees(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

pub fn degree_sequence_of(index_set: &IndexSet) -> DegreeSequence {
    let mut skip = index_set.elements.iter().peekable();
    let mut degrees = Vec::with_capacity(index_set.r + 1 - index_set.n);
    for d in 1..=index_set.r {
        if skip.peek() == Some(&&d) {
            skip.next();
        } else {
            degrees.push(d);
        }
    }
    DegreeSequence(degrees)
}

pub(crate) fn check_shape(r: usize, n: usize) -> Result<()> {
    if n < 2 || n + 1 > r {
        return Err(Error::Parameter(format!("need 2 <= n <= r - 1, got r = {r}, n = {n}")));
    }
    Ok(())
}

/// Whether a table holds exact rationals or floating point values.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Exact,
    Float,
}

/// Entry types a [`BettiTable`] can hold.
pub trait Entry: Clone + Zero + PartialOrd + fmt::Debug {
    const MODE: Mode;
}

impl Entry for BigRational {
    const MODE: Mode = Mode::Exact;
}

impl Entry for f64 {
    const MODE: Mode = Mode::Float;
}

/// An `n x (r + 1 - n)` grid of nonnegative entries `k_{p,q}`.
#[derive(Debug, Clone, PartialEq)]
pub struct BettiTable<T> {
    n: usize,
    r: usize,
    // row-major: index (q - 1) * columns + p
    entries: Vec<T>,
}

pub type ExactTable = BettiTable<BigRational>;
pub type FloatTable = BettiTable<f64>;

impl<T: Entry> BettiTable<T> {
    pub fn zeros(r: usize, n: usize) -> Result<Self> {
        check_shape(r, n)?;
        Ok(BettiTable { n, r, entries: vec![T::zero(); n * (r + 1 - n)] })
    }

    /// Builds a table from `(p, q, value)` triples; unspecified entries are zero.
    pub fn from_entries<I>(r: usize, n: usize, entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize, T)>,
    {
        let mut table = Self::zeros(r, n)?;
        for (p, q, v) in entries {
            table.set_checked(p, q, v)?;
        }
        Ok(table)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn mode(&self) -> Mode {
        T::MODE
    }

    /// Number of columns, `r + 1 - n`.
    pub fn columns(&self) -> usize {
        self.r + 1 - self.n
    }

    fn index(&self, p: usize, q: usize) -> usize {
        assert!(
            p < self.columns() && (1..=self.n).contains(&q),
            "entry ({p}, {q}) outside a {} x {} table",
            self.n,
            self.columns()
        );
        (q - 1) * self.columns() + p
    }

    pub fn get(&self, p: usize, q: usize) -> &T {
        &self.entries[self.index(p, q)]
    }

    pub(crate) fn set(&mut self, p: usize, q: usize, value: T) {
        let i = self.index(p, q);
        self.entries[i] = value;
    }

    /// Sets an entry, rejecting negative values and out-of-range positions.
    pub fn set_checked(&mut self, p: usize, q: usize, value: T) -> Result<()> {
        if p >= self.columns() || !(1..=self.n).contains(&q) {
            return Err(Error::Parameter(format!("entry ({p}, {q}) outside a {} x {} table", self.n, self.columns())));
        }
        // NaN compares as None and is rejected too
        if !matches!(value.partial_cmp(&T::zero()), Some(Ordering::Greater | Ordering::Equal)) {
            return Err(Error::Parameter(format!(
                "Betti table entries must be nonnegative, got {value:?} at ({p}, {q})"
            )));
        }
        self.set(p, q, value);
        Ok(())
    }

    /// Entries in `(p, q, value)` form, row by row.
    pub fn iter(&self) -> impl Iterator<Item = (usize, usize, &T)> + '_ {
        let cols = self.columns();
        self.entries.iter().enumerate().map(move |(i, v)| (i % cols, i / cols + 1, v))
    }

    /// Row `q` as a slice indexed by `p`.
    pub fn row(&self, q: usize) -> &[T] {
        let start = self.index(0, q);
        &self.entries[start..start + self.columns()]
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Zero::is_zero)
    }

    pub(crate) fn entries_mut(&mut self) -> &mut [T] {
        &mut self.entries
    }

    fn same_shape(&self, other: &Self) {
        assert!(
            self.n == other.n && self.r == other.r,
            "table shapes differ: (r={}, n={}) vs (r={}, n={})",
            self.r,
            self.n,
            other.r,
            other.n
        );
    }
}

impl<T: Entry> BettiTable<T>
where
    for<'a> &'a T: Add<&'a T, Output = T> + Mul<&'a T, Output = T>,
{
    /// `self + scale * other`, entrywise.
    pub fn add_scaled(&self, scale: &T, other: &Self) -> Self {
        self.same_shape(other);
        let entries = self.entries.iter().zip(&other.entries).map(|(a, b)| a + &(scale * b)).collect();
        BettiTable { n: self.n, r: self.r, entries }
    }

    pub fn scaled(&self, scale: &T) -> Self {
        let entries = self.entries.iter().map(|a| scale * a).collect();
        BettiTable { n: self.n, r: self.r, entries }
    }
}

impl ExactTable {
    /// Lossy conversion to floating point.
    pub fn to_float(&self) -> FloatTable {
        BettiTable { n: self.n, r: self.r, entries: self.entries.iter().map(rational_to_f64).collect() }
    }
}

pub fn rational_to_f64(x: &BigRational) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

impl fmt::Display for ExactTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for q in 1..=self.n {
            let cells: Vec<String> =
                self.row(q).iter().map(|v| if v.is_zero() { "-".to_string() } else { v.to_string() }).collect();
            writeln!(f, "{q}: {}", cells.join("\t"))?;
        }
        Ok(())
    }
}

/// A pure Betti diagram normalized to formal multiplicity one.
#[derive(Debug, Clone, PartialEq)]
pub struct PureDiagram {
    pub index_set: IndexSet,
    pub degree_sequence: DegreeSequence,
    pub table: ExactTable,
}

fn positive_part(m: i64) -> i64 {
    m.max(0)
}

/// The two products in the entry formula: over `alpha < q` of `(p + q - i_alpha)_+`
/// and over `alpha >= q` of `(i_alpha - p - q)_+`.
fn entry_numerator(index_set: &IndexSet, p: usize, q: usize) -> i128 {
    let shift = (p + q) as i64;
    index_set
        .elements
        .iter()
        .enumerate()
        .map(|(alpha, &i)| {
            let i = i as i64;
            // alpha is zero-based here, so alpha + 1 <= q - 1 is the lower block
            if alpha + 1 < q {
                positive_part(shift - i)
            } else {
                positive_part(i - shift)
            }
        })
        .fold(1i128, |acc, f| acc * f as i128)
}

/// The coefficient `c_I(p, q)` with `k_{p,q}(pi(r, I)) = C(r-n, p) * c_I(p, q)`.
///
/// Its denominator is `(p+q-1)...(p+1) * (r-p-q)...(r-p-n+1)`; every value lies in `[0, 1]`.
pub fn reduced_entry(index_set: &IndexSet, p: usize, q: usize) -> BigRational {
    let num = entry_numerator(index_set, p, q);
    if num == 0 {
        return BigRational::zero();
    }
    BigRational::new(BigInt::from(num), BigInt::from(reduced_denominator(index_set.r, index_set.n, p, q)))
}

/// Floating point evaluation of [`reduced_entry`]; no factorials are involved.
pub fn reduced_entry_f64(index_set: &IndexSet, p: usize, q: usize) -> f64 {
    let num = entry_numerator(index_set, p, q);
    if num == 0 {
        return 0.0;
    }
    num as f64 / reduced_denominator(index_set.r, index_set.n, p, q) as f64
}

fn reduced_denominator(r: usize, n: usize, p: usize, q: usize) -> i128 {
    let low: i128 = (1..q).map(|t| (p + t) as i128).product();
    let high: i128 = (1..=n - q).map(|t| (r - p - n + t) as i128).product();
    low * high
}

/// Factorials `0!, ..., r!` reused across the entries of one diagram.
struct Factorials(Vec<BigInt>);

impl Factorials {
    fn up_to(r: usize) -> Self {
        let mut v = Vec::with_capacity(r + 1);
        v.push(BigInt::one());
        for k in 1..=r {
            let next = &v[k - 1] * k;
            v.push(next);
        }
        Factorials(v)
    }

    fn get(&self, k: usize) -> &BigInt {
        &self.0[k]
    }
}

fn check_index_set(r: usize, n: usize, index_set: &IndexSet) -> Result<()> {
    check_shape(r, n)?;
    if index_set.r != r || index_set.n != n {
        return Err(Error::Parameter(format!(
            "index set {index_set} was built for (r={}, n={}), not (r={r}, n={n})",
            index_set.r, index_set.n
        )));
    }
    Ok(())
}

/// Builds `pi(r, I)` from the product-of-positive-parts entry formula, which is
/// evaluated at every `(p, q)` so that purity is a consequence rather than an assumption.
pub fn pure_diagram(r: usize, n: usize, index_set: &IndexSet) -> Result<PureDiagram> {
    check_index_set(r, n, index_set)?;
    let fact = Factorials::up_to(r);
    let mut table = ExactTable::zeros(r, n)?;
    for q in 1..=n {
        for p in 0..=r - n {
            let num = entry_numerator(index_set, p, q);
            if num == 0 {
                continue;
            }
            let numer = fact.get(r - n) * BigInt::from(num);
            let denom = fact.get(p + q - 1) * fact.get(r - p - q);
            table.set(p, q, BigRational::new(numer, denom));
        }
    }
    let diagram = PureDiagram { index_set: index_set.clone(), degree_sequence: index_set.degree_sequence(), table };
    debug_assert_eq!(
        diagram.table,
        pure_diagram_from_degrees(r, n, index_set)?.table,
        "entry formulas disagree for pi({r}, {index_set})"
    );
    Ok(diagram)
}

/// Builds `pi(r, I)` from the degree sequence: the only nonzero entry of column
/// `p` sits in row `d_p - p` and equals `(r-n)! / prod_{l != p} |d_l - d_p|`.
pub fn pure_diagram_from_degrees(r: usize, n: usize, index_set: &IndexSet) -> Result<PureDiagram> {
    check_index_set(r, n, index_set)?;
    let degrees = index_set.degree_sequence();
    let mut table = ExactTable::zeros(r, n)?;
    let top = factorial((r - n) as u64);
    let ds = degrees.degrees();
    for (p, &dp) in ds.iter().enumerate() {
        let denom = ds
            .iter()
            .enumerate()
            .filter(|&(l, _)| l != p)
            .fold(BigInt::one(), |acc, (_, &dl)| acc * (dl as i64 - dp as i64).abs());
        table.set(p, dp - p, BigRational::new(top.clone(), denom));
    }
    Ok(PureDiagram { index_set: index_set.clone(), degree_sequence: degrees, table })
}

/// Elementary symmetric sums `e_b(1, 2, ..., a)` for all `a <= a_max`, `b <= b_max`.
#[derive(Debug, Clone)]
pub struct SigmaTable {
    b_max: usize,
    // values[a][b]
    values: Vec<Vec<BigInt>>,
}

impl SigmaTable {
    /// Dynamic programme `e_b(1..a) = e_b(1..a-1) + a * e_{b-1}(1..a-1)`.
    pub fn new(a_max: usize, b_max: usize) -> Self {
        let mut values = Vec::with_capacity(a_max + 1);
        let mut row = vec![BigInt::zero(); b_max + 1];
        row[0] = BigInt::one();
        values.push(row.clone());
        for a in 1..=a_max {
            for b in (1..=b_max.min(a)).rev() {
                let add = &row[b - 1] * a;
                row[b] += add;
            }
            values.push(row.clone());
        }
        SigmaTable { b_max, values }
    }

    pub fn get(&self, a: usize, b: usize) -> Result<&BigInt> {
        if b > a {
            return Err(Error::Parameter(format!("sigma_b(a) needs a >= b, got a = {a}, b = {b}")));
        }
        if a >= self.values.len() || b > self.b_max {
            return Err(Error::Parameter(format!(
                "sigma table covers a <= {}, b <= {}; asked for ({a}, {b})",
                self.values.len() - 1,
                self.b_max
            )));
        }
        Ok(&self.values[a][b])
    }
}

/// `sigma_b(a)`: the sum of `j_1 j_2 ... j_b` over all `b`-subsets of `[1, a]`.
pub fn sigma_b(a: usize, b: usize) -> Result<BigInt> {
    if a < b {
        return Err(Error::Parameter(format!("sigma_b(a) needs a >= b, got a = {a}, b = {b}")));
    }
    SigmaTable::new(a, b).get(a, b).cloned()
}

/// Hilbert function of the formal module a table describes, over a polynomial
/// ring in `m = r - n` variables.
#[derive(Debug, Clone, PartialEq)]
pub struct HilbertFunction {
    /// `values[j - 1] = HF(j)`, trailing zeros trimmed.
    values: Vec<BigRational>,
    /// Whether HF vanishes identically beyond degree `r`.
    finite: bool,
}

impl HilbertFunction {
    pub fn values(&self) -> &[BigRational] {
        &self.values
    }

    pub fn at(&self, degree: usize) -> BigRational {
        match degree {
            0 => BigRational::zero(),
            j => self.values.get(j - 1).cloned().unwrap_or_else(BigRational::zero),
        }
    }

    pub fn is_finite_length(&self) -> bool {
        self.finite
    }

    /// Degrees with a nonzero value.
    pub fn support(&self) -> Vec<usize> {
        self.values.iter().enumerate().filter(|(_, v)| !v.is_zero()).map(|(i, _)| i + 1).collect()
    }
}

/// `HF(j) = sum (-1)^p k_{p,q} C(m - 1 + j - (p + q), m - 1)` with `m = r - n`.
///
/// Degrees `1..=r` are reported. Beyond `r` every binomial is a polynomial in
/// `j` of degree `m - 1`, so `HF` is identically zero there iff it vanishes at
/// the `m` degrees `r+1..=r+m`.
pub fn hilbert_function(table: &ExactTable) -> HilbertFunction {
    let r = table.r;
    let m = (r - table.n) as i64;
    let value_at = |j: usize| -> BigRational {
        table.iter().filter(|(_, _, v)| !v.is_zero()).fold(BigRational::zero(), |acc, (p, q, v)| {
            let c = binomial(m - 1 + j as i64 - (p + q) as i64, m - 1);
            if c.is_zero() {
                return acc;
            }
            let term = v * BigRational::from_integer(c);
            if p % 2 == 0 {
                acc + term
            } else {
                acc - term
            }
        })
    };
    let mut values: Vec<BigRational> = (1..=r).map(value_at).collect();
    let finite = (r + 1..=r + m as usize).all(|j| value_at(j).is_zero());
    while values.last().is_some_and(Zero::is_zero) {
        values.pop();
    }
    HilbertFunction { values, finite }
}

/// Formal multiplicity: the total length `sum_j HF(j)`.
pub fn multiplicity(table: &ExactTable) -> Result<BigRational> {
    let hf = hilbert_function(table);
    if !hf.finite {
        return Err(Error::NotFiniteLength { degree: table.r });
    }
    Ok(hf.values.iter().fold(BigRational::zero(), |acc, v| acc + v))
}

/// True iff `sum (-1)^p k_{p,q} (p + q)^j = 0` for every `j = 0, ..., r - n - 1`.
pub fn herzog_kuhl_check(table: &ExactTable) -> bool {
    let m = table.r - table.n;
    (0..m).all(|j| {
        let total = table.iter().filter(|(_, _, v)| !v.is_zero()).fold(BigRational::zero(), |acc, (p, q, v)| {
            let power = BigInt::from(p + q).pow(j as u32);
            let term = v * BigRational::from_integer(power);
            if p % 2 == 0 {
                acc + term
            } else {
                acc - term
            }
        });
        total.is_zero()
    })
}

/// `true` when every entry is nonnegative; tables built through the public API always are.
pub fn is_nonnegative(table: &ExactTable) -> bool {
    table.iter().all(|(_, _, v)| !v.is_negative())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn set(r: usize, n: usize, e: &[usize]) -> IndexSet {
        IndexSet::new(r, n, e.to_vec()).unwrap()
    }

    #[test]
    fn degree_sequences() {
        assert_eq!(set(7, 3, &[2, 4]).degree_sequence().degrees(), &[1, 3, 5, 6, 7]);
        assert_eq!(set(3, 2, &[1]).degree_sequence().degrees(), &[2, 3]);
        assert_eq!(set(5, 3, &[1, 5]).degree_sequence().degrees(), &[2, 3, 4]);
    }

    #[test]
    fn index_set_validation() {
        assert!(IndexSet::new(7, 3, vec![4, 2]).is_err());
        assert!(IndexSet::new(7, 3, vec![2]).is_err());
        assert!(IndexSet::new(7, 3, vec![0, 2]).is_err());
        assert!(IndexSet::new(7, 3, vec![2, 8]).is_err());
        assert!(IndexSet::new(3, 3, vec![1, 2]).is_err());
        assert!(IndexSet::new(7, 1, vec![]).is_err());
    }

    #[test]
    fn golden_pure_diagram() {
        let d = pure_diagram(7, 3, &set(7, 3, &[2, 4])).unwrap();
        let expected = [((0, 1), q(1, 10)), ((1, 2), q(1, 2)), ((2, 3), q(3, 2)), ((3, 3), q(8, 5)), ((4, 3), q(1, 2))];
        for (p, row, v) in d.table.iter() {
            let want = expected
                .iter()
                .find(|((ep, eq), _)| *ep == p && *eq == row)
                .map_or_else(BigRational::zero, |(_, v)| v.clone());
            assert_eq!(*v, want, "entry ({p}, {row})");
        }
    }

    #[test]
    fn two_row_diagram() {
        let d = pure_diagram(7, 2, &set(7, 2, &[4])).unwrap();
        assert_eq!(d.table.row(1), &[q(1, 2), q(2, 1), q(5, 2), q(0, 1), q(0, 1), q(0, 1)]);
        assert_eq!(d.table.row(2), &[q(0, 1), q(0, 1), q(0, 1), q(5, 2), q(2, 1), q(1, 2)]);
    }

    #[test]
    fn mismatched_index_set_is_rejected() {
        assert!(pure_diagram(8, 3, &set(7, 3, &[2, 4])).is_err());
    }

    #[test]
    fn sigma_small_values() {
        assert_eq!(sigma_b(5, 0).unwrap(), BigInt::from(1));
        assert_eq!(sigma_b(3, 1).unwrap(), BigInt::from(6));
        assert_eq!(sigma_b(4, 2).unwrap(), BigInt::from(35));
        assert!(sigma_b(2, 3).is_err());
    }

    #[test]
    fn hilbert_function_examples() {
        let d = pure_diagram(7, 3, &set(7, 3, &[2, 4])).unwrap();
        let hf = hilbert_function(&d.table);
        assert_eq!(hf.values(), &[q(1, 10), q(2, 5), q(1, 2)]);
        assert_eq!(hf.at(5), BigRational::zero());
        assert_eq!(hf.at(6), BigRational::zero());
        assert!(hf.is_finite_length());

        let d = pure_diagram(7, 2, &set(7, 2, &[4])).unwrap();
        assert_eq!(hilbert_function(&d.table).values(), &[q(1, 2), q(1, 2)]);

        let zero = ExactTable::zeros(7, 3).unwrap();
        assert!(hilbert_function(&zero).values().is_empty());
        assert_eq!(multiplicity(&zero).unwrap(), BigRational::zero());
    }

    #[test]
    fn multiplicity_examples() {
        let d = pure_diagram(7, 3, &set(7, 3, &[2, 4])).unwrap();
        assert_eq!(multiplicity(&d.table).unwrap(), BigRational::one());
        let d = pure_diagram(7, 2, &set(7, 2, &[4])).unwrap();
        let twelve = BigRational::from_integer(12.into());
        assert_eq!(multiplicity(&d.table.scaled(&twelve)).unwrap(), twelve);
    }

    #[test]
    fn multiplicity_rejects_infinite_length() {
        // a single generator in degree 1: HF(j) = C(m - 1 + j - 1, m - 1) never vanishes
        let t = ExactTable::from_entries(7, 3, [(0, 1, BigRational::one())]).unwrap();
        assert!(!hilbert_function(&t).is_finite_length());
        assert_eq!(multiplicity(&t), Err(Error::NotFiniteLength { degree: 7 }));
    }

    #[test]
    fn herzog_kuhl_examples() {
        let d = pure_diagram(7, 3, &set(7, 3, &[2, 4])).unwrap();
        assert!(herzog_kuhl_check(&d.table));
        let mut perturbed = d.table.clone();
        perturbed.set_checked(0, 1, q(1, 5)).unwrap();
        assert!(!herzog_kuhl_check(&perturbed));

        let other = pure_diagram(7, 3, &set(7, 3, &[1, 6])).unwrap();
        let combo = d.table.add_scaled(&q(3, 7), &other.table);
        assert!(herzog_kuhl_check(&combo));
    }

    #[test]
    fn reduced_entries_rebuild_the_diagram() {
        for is in IndexSet::all(9, 3).unwrap() {
            let d = pure_diagram(9, 3, &is).unwrap();
            for (p, row, v) in d.table.iter() {
                let c = BigRational::from_integer(binomial(6, p as i64));
                assert_eq!(&(c * reduced_entry(&is, p, row)), v);
                let f = reduced_entry_f64(&is, p, row);
                assert!((0.0..=1.0).contains(&f));
            }
        }
    }

    #[test]
    fn negative_entries_are_rejected() {
        let mut t = ExactTable::zeros(5, 2).unwrap();
        assert!(t.set_checked(0, 1, q(-1, 2)).is_err());
        assert!(t.set_checked(9, 1, q(1, 2)).is_err());
        let mut f = FloatTable::zeros(5, 2).unwrap();
        assert!(f.set_checked(0, 1, f64::NAN).is_err());
    }

    #[test]
    fn display_marks_zeros() {
        let d = pure_diagram(7, 3, &set(7, 3, &[2, 4])).unwrap();
        let s = d.table.to_string();
        assert!(s.starts_with("1: 1/10\t-"));
    }
}
