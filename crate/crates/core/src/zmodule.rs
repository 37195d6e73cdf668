//! Exact integer arithmetic on signed multisets.
//!
//! A [`SignedMultiset`] is an integer-valued function on a finite ordered
//! index set. Complexes, flux vectors and conservation vectors are all
//! carried by this type. The module also provides the gcd reducing map, the
//! lcm-based fraction-free row elimination and the saturation membership
//! test `m ∈ cl(X)`.

use std::fmt;
use std::ops::{Add, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

/// Shared, ordered label set.
pub type IndexSet = Arc<[String]>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ZModuleError {
    #[error("index set has {expected} labels but {found} values were given")]
    LengthMismatch { expected: usize, found: usize },
    #[error("index sets differ")]
    IndexMismatch,
    #[error("unknown label `{0}`")]
    UnknownLabel(String),
    #[error("entry at `{0}` is zero; cannot eliminate on it")]
    ZeroEntry(String),
    #[error("matrix row {row} has {found} entries, expected {expected}")]
    RaggedRow { row: usize, expected: usize, found: usize },
}

pub fn index_set<I, S>(labels: I) -> IndexSet
where
    I: IntoIterator<Item = S>,
    S: Into<String>,
{
    labels.into_iter().map(Into::into).collect::<Vec<_>>().into()
}

/// An integer-valued function on an ordered label set.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SignedMultiset {
    index: IndexSet,
    values: Vec<BigInt>,
}

impl SignedMultiset {
    pub fn new(index: IndexSet, values: Vec<BigInt>) -> Result<Self, ZModuleError> {
        if index.len() != values.len() {
            return Err(ZModuleError::LengthMismatch {
                expected: index.len(),
                found: values.len(),
            });
        }
        Ok(Self { index, values })
    }

    pub fn from_i64(index: IndexSet, values: &[i64]) -> Result<Self, ZModuleError> {
        Self::new(index, values.iter().map(|&v| BigInt::from(v)).collect())
    }

    /// Convenience constructor labelling entries `0, 1, 2, ...`.
    pub fn unlabeled(values: &[i64]) -> Self {
        let index = index_set((0..values.len()).map(|i| i.to_string()));
        Self::from_i64(index, values).expect("lengths agree")
    }

    pub fn zero(index: IndexSet) -> Self {
        let values = vec![BigInt::zero(); index.len()];
        Self { index, values }
    }

    pub fn index(&self) -> &IndexSet {
        &self.index
    }

    pub fn labels(&self) -> &[String] {
        &self.index
    }

    pub fn values(&self) -> &[BigInt] {
        &self.values
    }

    pub fn into_values(self) -> Vec<BigInt> {
        self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn position(&self, label: &str) -> Option<usize> {
        self.index.iter().position(|l| l == label)
    }

    pub fn get(&self, label: &str) -> Option<&BigInt> {
        self.position(label).map(|i| &self.values[i])
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(Zero::is_zero)
    }

    /// Labels with a nonzero value.
    pub fn support(&self) -> Vec<&str> {
        self.index
            .iter()
            .zip(&self.values)
            .filter(|(_, v)| !v.is_zero())
            .map(|(l, _)| l.as_str())
            .collect()
    }

    pub fn support_size(&self) -> usize {
        self.values.iter().filter(|v| !v.is_zero()).count()
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        Self {
            index: self.index.clone(),
            values: self.values.iter().map(|v| v * k).collect(),
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, ZModuleError> {
        self.same_index(other)?;
        Ok(Self {
            index: self.index.clone(),
            values: self.values.iter().zip(&other.values).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self, ZModuleError> {
        self.checked_add(&-other)
    }

    /// Integer dot product over a shared index set.
    pub fn dot(&self, other: &Self) -> Result<BigInt, ZModuleError> {
        self.same_index(other)?;
        Ok(dot(&self.values, &other.values))
    }

    /// Flip the sign so that the first nonzero entry is positive.
    pub fn sign_normalized(mut self) -> Self {
        if first_nonzero_is_negative(&self.values) {
            self.values.iter_mut().for_each(|v| *v = -&*v);
        }
        self
    }

    fn same_index(&self, other: &Self) -> Result<(), ZModuleError> {
        if Arc::ptr_eq(&self.index, &other.index) || self.index == other.index {
            Ok(())
        } else {
            Err(ZModuleError::IndexMismatch)
        }
    }
}

impl Add for &SignedMultiset {
    type Output = SignedMultiset;

    fn add(self, rhs: Self) -> SignedMultiset {
        self.checked_add(rhs)
            .expect("signed multisets over different index sets")
    }
}

impl Sub for &SignedMultiset {
    type Output = SignedMultiset;

    fn sub(self, rhs: Self) -> SignedMultiset {
        self.checked_sub(rhs)
            .expect("signed multisets over different index sets")
    }
}

impl Neg for &SignedMultiset {
    type Output = SignedMultiset;

    fn neg(self) -> SignedMultiset {
        SignedMultiset {
            index: self.index.clone(),
            values: self.values.iter().map(|v| -v).collect(),
        }
    }
}

impl fmt::Display for SignedMultiset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "⟨")?;
        for (i, v) in self.values.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "⟩")
    }
}

pub(crate) fn dot(a: &[BigInt], b: &[BigInt]) -> BigInt {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub(crate) fn first_nonzero_is_negative(values: &[BigInt]) -> bool {
    values.iter().find(|v| !v.is_zero()).is_some_and(|v| v.is_negative())
}

/// Nonnegative gcd of all entries; zero for the zero vector.
pub fn content(values: &[BigInt]) -> BigInt {
    let mut g = BigInt::zero();
    for v in values {
        if g.is_one() {
            break;
        }
        g = g.gcd(v);
    }
    g
}

/// The reducing map: returns `(g, x / g)` where `g` is the gcd of the
/// entries. The zero multiset maps to `(0, 0)`.
pub fn reduce(x: &SignedMultiset) -> (BigInt, SignedMultiset) {
    let g = content(&x.values);
    if g.is_zero() || g.is_one() {
        return (g, x.clone());
    }
    let values = x.values.iter().map(|v| v / &g).collect();
    (
        g,
        SignedMultiset {
            index: x.index.clone(),
            values,
        },
    )
}

pub fn is_irreducible(x: &SignedMultiset) -> bool {
    let g = content(&x.values);
    g.is_zero() || g.is_one()
}

/// Bézout coefficients `α` with `Σ α(i)·x(i) = gcd(x)`.
pub fn bezout(values: &[BigInt]) -> (BigInt, Vec<BigInt>) {
    let mut g = BigInt::zero();
    let mut alpha: Vec<BigInt> = Vec::with_capacity(values.len());
    for v in values {
        let e = g.extended_gcd(v);
        // e.gcd = e.x * g + e.y * v
        for a in alpha.iter_mut() {
            *a = &*a * &e.x;
        }
        alpha.push(e.y);
        g = e.gcd;
    }
    if g.is_negative() {
        g = -g;
        alpha.iter_mut().for_each(|a| *a = -&*a);
    }
    (g, alpha)
}

fn eliminate_in_place(pivot: &[BigInt], target: &mut [BigInt], col: usize) {
    let p = &pivot[col];
    let t = &target[col];
    let c = p.lcm(t);
    let a = &c / p;
    let b = &c / t;
    for (dst, src) in target.iter_mut().zip(pivot) {
        *dst = &b * &*dst - &a * src;
    }
}

fn divide_content(row: &mut [BigInt]) {
    let g = content(row);
    if !g.is_zero() && !g.is_one() {
        row.iter_mut().for_each(|v| *v = &*v / &g);
    }
}

/// One lcm elimination update: `b·target − a·pivot` with
/// `c = lcm(|pivot[col]|, |target[col]|)`, `a = c / pivot[col]`,
/// `b = c / target[col]`. The result is zero at `col`.
pub fn row_eliminate_step(
    pivot: &SignedMultiset,
    target: &SignedMultiset,
    col: &str,
) -> Result<SignedMultiset, ZModuleError> {
    pivot.same_index(target)?;
    let j = pivot
        .position(col)
        .ok_or_else(|| ZModuleError::UnknownLabel(col.to_string()))?;
    if pivot.values[j].is_zero() || target.values[j].is_zero() {
        return Err(ZModuleError::ZeroEntry(col.to_string()));
    }
    let mut values = target.values.clone();
    eliminate_in_place(&pivot.values, &mut values, j);
    Ok(SignedMultiset {
        index: target.index.clone(),
        values,
    })
}

/// Dense labelled integer matrix. Rows are signed multisets over the column
/// labels.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntegerMatrix {
    row_labels: IndexSet,
    col_labels: IndexSet,
    rows: Vec<Vec<BigInt>>,
}

impl IntegerMatrix {
    pub fn new(row_labels: IndexSet, col_labels: IndexSet, rows: Vec<Vec<BigInt>>) -> Result<Self, ZModuleError> {
        if rows.len() != row_labels.len() {
            return Err(ZModuleError::LengthMismatch {
                expected: row_labels.len(),
                found: rows.len(),
            });
        }
        for (i, row) in rows.iter().enumerate() {
            if row.len() != col_labels.len() {
                return Err(ZModuleError::RaggedRow {
                    row: i,
                    expected: col_labels.len(),
                    found: row.len(),
                });
            }
        }
        Ok(Self {
            row_labels,
            col_labels,
            rows,
        })
    }

    pub fn from_i64(row_labels: IndexSet, col_labels: IndexSet, rows: &[Vec<i64>]) -> Result<Self, ZModuleError> {
        let rows = rows
            .iter()
            .map(|r| r.iter().map(|&v| BigInt::from(v)).collect())
            .collect();
        Self::new(row_labels, col_labels, rows)
    }

    /// Rows and columns labelled by their position.
    pub fn unlabeled(rows: &[Vec<i64>]) -> Self {
        let ncols = rows.first().map_or(0, Vec::len);
        Self::from_i64(
            index_set((0..rows.len()).map(|i| i.to_string())),
            index_set((0..ncols).map(|i| i.to_string())),
            rows,
        )
        .expect("rectangular input")
    }

    pub fn zeros(row_labels: IndexSet, col_labels: IndexSet) -> Self {
        let rows = vec![vec![BigInt::zero(); col_labels.len()]; row_labels.len()];
        Self {
            row_labels,
            col_labels,
            rows,
        }
    }

    pub fn identity(labels: IndexSet) -> Self {
        let mut m = Self::zeros(labels.clone(), labels);
        for i in 0..m.rows.len() {
            m.rows[i][i] = BigInt::one();
        }
        m
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.col_labels.len()
    }

    pub fn row_labels(&self) -> &IndexSet {
        &self.row_labels
    }

    pub fn col_labels(&self) -> &IndexSet {
        &self.col_labels
    }

    pub fn rows(&self) -> &[Vec<BigInt>] {
        &self.rows
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.rows[i][j]
    }

    pub fn entry(&self, row: &str, col: &str) -> Option<&BigInt> {
        let i = self.row_labels.iter().position(|l| l == row)?;
        let j = self.col_labels.iter().position(|l| l == col)?;
        Some(&self.rows[i][j])
    }

    pub fn row(&self, i: usize) -> SignedMultiset {
        SignedMultiset {
            index: self.col_labels.clone(),
            values: self.rows[i].clone(),
        }
    }

    pub fn column(&self, j: usize) -> SignedMultiset {
        SignedMultiset {
            index: self.row_labels.clone(),
            values: self.rows.iter().map(|r| r[j].clone()).collect(),
        }
    }

    pub fn to_i64(&self) -> Option<Vec<Vec<i64>>> {
        use num_traits::ToPrimitive;
        self.rows
            .iter()
            .map(|r| r.iter().map(ToPrimitive::to_i64).collect())
            .collect()
    }

    pub fn transpose(&self) -> Self {
        let rows = (0..self.ncols())
            .map(|j| self.rows.iter().map(|r| r[j].clone()).collect())
            .collect();
        Self {
            row_labels: self.col_labels.clone(),
            col_labels: self.row_labels.clone(),
            rows,
        }
    }

    /// `[self | right]`, both sharing the row labels.
    pub fn hstack(&self, right: &Self) -> Result<Self, ZModuleError> {
        if self.nrows() != right.nrows() {
            return Err(ZModuleError::LengthMismatch {
                expected: self.nrows(),
                found: right.nrows(),
            });
        }
        let col_labels = index_set(self.col_labels.iter().chain(right.col_labels.iter()).cloned());
        let rows = self
            .rows
            .iter()
            .zip(&right.rows)
            .map(|(a, b)| a.iter().chain(b).cloned().collect())
            .collect();
        Ok(Self {
            row_labels: self.row_labels.clone(),
            col_labels,
            rows,
        })
    }

    /// Column block `[start, end)` with the matching labels.
    pub fn columns(&self, start: usize, end: usize) -> Self {
        Self {
            row_labels: self.row_labels.clone(),
            col_labels: self.col_labels[start..end].to_vec().into(),
            rows: self.rows.iter().map(|r| r[start..end].to_vec()).collect(),
        }
    }

    pub fn mul(&self, rhs: &Self) -> Result<Self, ZModuleError> {
        if self.ncols() != rhs.nrows() {
            return Err(ZModuleError::LengthMismatch {
                expected: self.ncols(),
                found: rhs.nrows(),
            });
        }
        let rows = self
            .rows
            .iter()
            .map(|r| {
                (0..rhs.ncols())
                    .map(|j| r.iter().zip(&rhs.rows).map(|(a, b)| a * &b[j]).sum())
                    .collect()
            })
            .collect();
        Ok(Self {
            row_labels: self.row_labels.clone(),
            col_labels: rhs.col_labels.clone(),
            rows,
        })
    }

    /// `self · v` where `v` is indexed by the column labels.
    pub fn mul_vec(&self, v: &SignedMultiset) -> Result<SignedMultiset, ZModuleError> {
        if v.index != self.col_labels {
            return Err(ZModuleError::IndexMismatch);
        }
        Ok(SignedMultiset {
            index: self.row_labels.clone(),
            values: self.rows.iter().map(|r| dot(r, &v.values)).collect(),
        })
    }

    /// Rank over the rationals.
    pub fn rank(&self) -> usize {
        let all: Vec<usize> = (0..self.ncols()).collect();
        eliminate(self.rows.clone(), &all, EliminationOptions::default())
            .1
            .len()
    }
}

impl fmt::Display for IntegerMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cells: Vec<Vec<String>> = self
            .rows
            .iter()
            .map(|r| r.iter().map(ToString::to_string).collect())
            .collect();
        let label_w = self.row_labels.iter().map(|l| l.chars().count()).max().unwrap_or(0);
        let widths: Vec<usize> = (0..self.ncols())
            .map(|j| {
                cells
                    .iter()
                    .map(|r| r[j].len())
                    .chain(std::iter::once(self.col_labels[j].chars().count()))
                    .max()
                    .unwrap_or(1)
            })
            .collect();
        write!(f, "{:label_w$}", "")?;
        for (j, l) in self.col_labels.iter().enumerate() {
            write!(f, "  {:>w$}", l, w = widths[j])?;
        }
        writeln!(f)?;
        for (i, l) in self.row_labels.iter().enumerate() {
            write!(f, "{l:label_w$}")?;
            for (j, c) in cells[i].iter().enumerate() {
                write!(f, "  {:>w$}", c, w = widths[j])?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EliminationOptions {
    /// Divide each updated row by the gcd of its entries. Preserves the
    /// saturation of the row lattice and bounds coefficient growth.
    pub reduce_content: bool,
}

impl Default for EliminationOptions {
    fn default() -> Self {
        Self { reduce_content: true }
    }
}

/// Outcome of [`integer_row_eliminate`]. Pivot rows come first, in pivot
/// order; rows whose leading block vanished follow.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EchelonResult {
    pub matrix: IntegerMatrix,
    pub pivot_cols: Vec<String>,
    pub row_rank: usize,
}

impl EchelonResult {
    /// Rows whose leading block is entirely zero.
    pub fn null_rows(&self) -> &[Vec<BigInt>] {
        &self.matrix.rows[self.row_rank..]
    }

    pub fn pivot_rows(&self) -> &[Vec<BigInt>] {
        &self.matrix.rows[..self.row_rank]
    }
}

/// Core elimination on raw rows. Pivots are searched only in `leading`
/// (column indices, processed left to right). Returns the rows and the
/// pivot column indices.
pub(crate) fn eliminate(
    mut rows: Vec<Vec<BigInt>>,
    leading: &[usize],
    opts: EliminationOptions,
) -> (Vec<Vec<BigInt>>, Vec<usize>) {
    let mut leading = leading.to_vec();
    leading.sort_unstable();
    leading.dedup();
    let mut pivots = Vec::new();
    let mut next = 0;
    for &col in &leading {
        if next == rows.len() {
            break;
        }
        // smallest |entry| among the remaining rows; ties go to the earliest row
        let Some(p) = (next..rows.len())
            .filter(|&i| !rows[i][col].is_zero())
            .min_by(|&a, &b| rows[a][col].abs().cmp(&rows[b][col].abs()).then(a.cmp(&b)))
        else {
            continue;
        };
        rows.swap(next, p);
        if opts.reduce_content {
            divide_content(&mut rows[next]);
        }
        if rows[next][col].is_negative() {
            rows[next].iter_mut().for_each(|v| *v = -&*v);
        }
        let (before, rest) = rows.split_at_mut(next);
        let (pivot, after) = rest.split_first_mut().expect("pivot row exists");
        for row in before.iter_mut().chain(after.iter_mut()) {
            if row[col].is_zero() {
                continue;
            }
            eliminate_in_place(pivot, row, col);
            if opts.reduce_content {
                divide_content(row);
            }
        }
        pivots.push(col);
        next += 1;
    }
    (rows, pivots)
}

/// Fraction-free Gauss–Jordan elimination with pivots restricted to
/// `leading_cols`.
pub fn integer_row_eliminate(m: &IntegerMatrix, leading_cols: &[&str]) -> Result<EchelonResult, ZModuleError> {
    integer_row_eliminate_with(m, leading_cols, EliminationOptions::default())
}

pub fn integer_row_eliminate_with(
    m: &IntegerMatrix,
    leading_cols: &[&str],
    opts: EliminationOptions,
) -> Result<EchelonResult, ZModuleError> {
    let leading = leading_cols
        .iter()
        .map(|c| {
            m.col_labels
                .iter()
                .position(|l| l == c)
                .ok_or_else(|| ZModuleError::UnknownLabel(c.to_string()))
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(eliminate_indices(m, &leading, opts))
}

pub(crate) fn eliminate_indices(m: &IntegerMatrix, leading: &[usize], opts: EliminationOptions) -> EchelonResult {
    let (rows, pivots) = eliminate(m.rows.clone(), leading, opts);
    let row_rank = pivots.len();
    // Row labels no longer identify original rows after swaps and updates.
    let row_labels = index_set((0..rows.len()).map(|i| format!("row{}", i + 1)));
    EchelonResult {
        matrix: IntegerMatrix {
            row_labels,
            col_labels: m.col_labels.clone(),
            rows,
        },
        pivot_cols: pivots.iter().map(|&j| m.col_labels[j].clone()).collect(),
        row_rank,
    }
}

/// Certificate for `m ∈ cl(X)`: `b·m = Σ α(x)·x` with `b > 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClosureWitness {
    pub b: BigInt,
    pub alpha: Vec<BigInt>,
}

impl ClosureWitness {
    pub fn verify(&self, generators: &[SignedMultiset], m: &SignedMultiset) -> bool {
        if self.b.is_zero() || self.alpha.len() != generators.len() {
            return false;
        }
        let lhs: Vec<BigInt> = m.values.iter().map(|v| v * &self.b).collect();
        let mut rhs = vec![BigInt::zero(); m.len()];
        for (a, x) in self.alpha.iter().zip(generators) {
            if x.len() != rhs.len() {
                return false;
            }
            for (r, v) in rhs.iter_mut().zip(&x.values) {
                *r += a * v;
            }
        }
        lhs == rhs
    }
}

/// Saturation membership: is some nonzero multiple of `m` an integer
/// combination of `generators`? Returns a witness when it is.
pub fn closure_witness(
    generators: &[SignedMultiset],
    m: &SignedMultiset,
) -> Result<Option<ClosureWitness>, ZModuleError> {
    for x in generators {
        m.same_index(x)?;
    }
    let dim = m.len();
    let k = generators.len();
    // rows [x_i | e_i | 0] and [m | 0 | 1]; a relation with a nonzero last
    // coordinate d reads d·m = −Σ c_i·x_i
    let width = dim + k + 1;
    let mut rows: Vec<Vec<BigInt>> = Vec::with_capacity(k + 1);
    for (i, x) in generators.iter().enumerate() {
        let mut row = Vec::with_capacity(width);
        row.extend(x.values.iter().cloned());
        row.extend((0..=k).map(|j| if j == i { BigInt::one() } else { BigInt::zero() }));
        rows.push(row);
    }
    let mut last = Vec::with_capacity(width);
    last.extend(m.values.iter().cloned());
    last.extend((0..k).map(|_| BigInt::zero()));
    last.push(BigInt::one());
    rows.push(last);

    let leading: Vec<usize> = (0..dim).collect();
    let (rows, pivots) = eliminate(rows, &leading, EliminationOptions::default());
    let found = rows[pivots.len()..].iter().find(|r| !r[width - 1].is_zero()).map(|r| {
        let mut d = r[width - 1].clone();
        let mut alpha: Vec<BigInt> = r[dim..dim + k].iter().map(|c| -c).collect();
        if d.is_negative() {
            d = -d;
            alpha.iter_mut().for_each(|a| *a = -&*a);
        }
        ClosureWitness { b: d, alpha }
    });
    Ok(found)
}

pub fn closure_contains(generators: &[SignedMultiset], m: &SignedMultiset) -> Result<bool, ZModuleError> {
    Ok(closure_witness(generators, m)?.is_some())
}

/// `cl(X) = cl(Y)`, checked by mutual membership.
pub fn same_closure(x: &[SignedMultiset], y: &[SignedMultiset]) -> Result<bool, ZModuleError> {
    for v in y {
        if !closure_contains(x, v)? {
            return Ok(false);
        }
    }
    for v in x {
        if !closure_contains(y, v)? {
            return Ok(false);
        }
    }
    Ok(true)
}
