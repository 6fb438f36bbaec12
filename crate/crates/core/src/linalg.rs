//! Exact rational linear algebra.
//!
//! Two independent elimination routes are provided. The fraction-free route
//! clears denominators row by row and runs Bareiss elimination over the
//! integers, dividing exactly by the previous pivot. The rational route runs
//! textbook Gauss–Jordan over `BigRational` with a configurable pivot rule.
//! Both end in the reduced row echelon form, which is unique, so kernels and
//! particular solutions agree between routes bit for bit.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::Coeff;

/// Matrices with fewer entries than this are eliminated directly over the
/// rationals by the default entry points.
const FRACTION_FREE_THRESHOLD: usize = 64;

#[derive(Clone, PartialEq, Eq)]
pub struct RationalMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Coeff>,
}

impl fmt::Debug for RationalMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "RationalMatrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            write!(f, "  ")?;
            for c in 0..self.cols {
                write!(f, "{} ", self.get(r, c))?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

impl RationalMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![Coeff::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Coeff::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Coeff>>) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::Dimension("ragged rows".into()));
        }
        let n = rows.len();
        Ok(Self { rows: n, cols, data: rows.into_iter().flatten().collect() })
    }

    pub fn from_i64_rows(rows: &[&[i64]]) -> Result<Self> {
        Self::from_rows(rows.iter().map(|r| r.iter().map(|&x| Coeff::from_integer(x.into())).collect()).collect())
    }

    /// Builds a matrix from its columns (`rows` is needed for the empty case).
    pub fn from_columns(rows: usize, columns: Vec<Vec<Coeff>>) -> Result<Self> {
        let cols = columns.len();
        let mut m = Self::zeros(rows, cols);
        for (c, col) in columns.into_iter().enumerate() {
            if col.len() != rows {
                return Err(Error::Dimension("column length".into()));
            }
            for (r, v) in col.into_iter().enumerate() {
                m.set(r, c, v);
            }
        }
        Ok(m)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &Coeff {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Coeff) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[Coeff] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<Coeff> {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn mul(&self, rhs: &RationalMatrix) -> Result<RationalMatrix> {
        if self.cols != rhs.rows {
            return Err(Error::Dimension(alloc::format!("{}x{} * {}x{}", self.rows, self.cols, rhs.rows, rhs.cols)));
        }
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = rhs.get(k, j);
                    if !b.is_zero() {
                        let idx = i * out.cols + j;
                        out.data[idx] += a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[Coeff]) -> Result<Vec<Coeff>> {
        if self.cols != v.len() {
            return Err(Error::Dimension(alloc::format!("{}x{} * vector of length {}", self.rows, self.cols, v.len())));
        }
        Ok((0..self.rows)
            .map(|r| {
                self.row(r).iter().zip(v).filter(|(a, b)| !a.is_zero() && !b.is_zero()).map(|(a, b)| a * b).sum()
            })
            .collect())
    }

    /// Stacks `self` on top of `other`.
    pub fn vstack(&self, other: &RationalMatrix) -> Result<RationalMatrix> {
        if self.cols != other.cols {
            return Err(Error::Dimension("vstack column mismatch".into()));
        }
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Ok(Self { rows: self.rows + other.rows, cols: self.cols, data })
    }

    pub fn sub(&self, other: &RationalMatrix) -> Result<RationalMatrix> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::Dimension("sub shape mismatch".into()));
        }
        Ok(Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect(),
        })
    }

    pub fn rank(&self) -> usize {
        self.rref(default_strategy(self)).pivots.len()
    }

    /// Reduced row echelon form computed with the given strategy.
    pub fn rref(&self, strategy: Strategy) -> Echelon {
        match strategy {
            Strategy::FractionFree => fraction_free_rref(self),
            Strategy::Rational(rule) => rational_rref(self, rule),
        }
    }
}

/// Elimination route.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Strategy {
    /// Bareiss elimination over the integers after clearing denominators.
    FractionFree,
    /// Gauss–Jordan over the rationals.
    Rational(PivotRule),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PivotRule {
    /// First nonzero entry at or below the current row.
    FirstNonzero,
    /// Entry with the largest absolute numerator (ties: topmost).
    LargestNumerator,
}

impl Strategy {
    /// Rational elimination for small systems, fraction-free otherwise.
    pub fn for_shape(rows: usize, cols: usize) -> Strategy {
        if rows * cols < FRACTION_FREE_THRESHOLD {
            Strategy::Rational(PivotRule::FirstNonzero)
        } else {
            Strategy::FractionFree
        }
    }

    /// The independent cross-check route.
    pub fn oracle() -> Strategy {
        Strategy::Rational(PivotRule::LargestNumerator)
    }
}

fn default_strategy(m: &RationalMatrix) -> Strategy {
    Strategy::for_shape(m.rows, m.cols)
}

/// Reduced row echelon form: the nonzero rows, each with a leading 1 in its
/// pivot column and zeros in every other pivot column.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Echelon {
    pub cols: usize,
    pub rows: Vec<Vec<Coeff>>,
    pub pivots: Vec<usize>,
}

impl Echelon {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Basis of the right kernel, one vector per free column, with a 1 in
    /// that column and 0 in the other free columns.
    pub fn kernel(&self) -> Vec<Vec<Coeff>> {
        let mut is_pivot = vec![false; self.cols];
        for &p in &self.pivots {
            is_pivot[p] = true;
        }
        (0..self.cols)
            .filter(|&c| !is_pivot[c])
            .map(|free| {
                let mut v = vec![Coeff::zero(); self.cols];
                v[free] = Coeff::one();
                for (row, &p) in self.rows.iter().zip(&self.pivots) {
                    v[p] = -row[free].clone();
                }
                v
            })
            .collect()
    }
}

fn rational_rref(m: &RationalMatrix, rule: PivotRule) -> Echelon {
    let mut a: Vec<Vec<Coeff>> = (0..m.rows).map(|r| m.row(r).to_vec()).collect();
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..m.cols {
        if row == m.rows {
            break;
        }
        let candidates = (row..m.rows).filter(|&r| !a[r][col].is_zero());
        let pick = match rule {
            PivotRule::FirstNonzero => candidates.min(),
            PivotRule::LargestNumerator => {
                let mut best: Option<(usize, BigInt)> = None;
                for r in candidates {
                    let mag = a[r][col].numer().abs();
                    if best.as_ref().is_none_or(|(_, b)| mag > *b) {
                        best = Some((r, mag));
                    }
                }
                best.map(|(r, _)| r)
            }
        };
        let Some(p) = pick else { continue };
        a.swap(row, p);
        let inv = a[row][col].recip();
        for v in a[row].iter_mut() {
            if !v.is_zero() {
                *v *= &inv;
            }
        }
        let pivot_row = a[row].clone();
        for (r, other) in a.iter_mut().enumerate() {
            if r == row || other[col].is_zero() {
                continue;
            }
            let f = other[col].clone();
            for (x, y) in other.iter_mut().zip(&pivot_row) {
                if !y.is_zero() {
                    *x -= &f * y;
                }
            }
        }
        pivots.push(col);
        row += 1;
    }
    a.truncate(pivots.len());
    Echelon { cols: m.cols, rows: a, pivots }
}

fn fraction_free_rref(m: &RationalMatrix) -> Echelon {
    // Clear denominators row by row; the row space is unchanged.
    let mut a: Vec<Vec<BigInt>> = (0..m.rows)
        .map(|r| {
            let row = m.row(r);
            let l = row.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
            row.iter().map(|x| x.numer() * (&l / x.denom())).collect()
        })
        .collect();
    let mut pivots = Vec::new();
    let mut prev = BigInt::one();
    let mut row = 0;
    for col in 0..m.cols {
        if row == m.rows {
            break;
        }
        let Some(p) = (row..m.rows).find(|&r| !a[r][col].is_zero()) else { continue };
        a.swap(row, p);
        let (top, rest) = a.split_at_mut(row + 1);
        let pivot_row = &top[row];
        let pv = pivot_row[col].clone();
        for other in rest.iter_mut() {
            let f = other[col].clone();
            for c in col..m.cols {
                let num = &pv * &other[c] - &f * &pivot_row[c];
                let (q, rem) = num.div_rem(&prev);
                debug_assert!(rem.is_zero(), "Bareiss division must be exact");
                other[c] = q;
            }
        }
        prev = pv;
        pivots.push(col);
        row += 1;
    }
    // Back substitution on the echelon rows, over the rationals.
    let mut r: Vec<Vec<Coeff>> = a
        .into_iter()
        .take(pivots.len())
        .map(|row| row.into_iter().map(Coeff::from_integer).collect())
        .collect();
    for i in (0..pivots.len()).rev() {
        let col = pivots[i];
        let inv = r[i][col].recip();
        for v in r[i].iter_mut() {
            if !v.is_zero() {
                *v *= &inv;
            }
        }
        let pivot_row = r[i].clone();
        for other in r.iter_mut().take(i) {
            if other[col].is_zero() {
                continue;
            }
            let f = other[col].clone();
            for (x, y) in other.iter_mut().zip(&pivot_row) {
                if !y.is_zero() {
                    *x -= &f * y;
                }
            }
        }
    }
    Echelon { cols: m.cols, rows: r, pivots }
}

/// Basis of `{v : M v = 0}`.
pub fn kernel(m: &RationalMatrix) -> Vec<Vec<Coeff>> {
    m.rref(default_strategy(m)).kernel()
}

pub fn kernel_with(m: &RationalMatrix, strategy: Strategy) -> Vec<Vec<Coeff>> {
    m.rref(strategy).kernel()
}

/// Solution of `M x = b`: the particular solution with zero free
/// coordinates, plus a kernel basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Solution {
    pub particular: Vec<Coeff>,
    pub kernel: Vec<Vec<Coeff>>,
}

pub fn solve(m: &RationalMatrix, b: &[Coeff]) -> Result<Solution> {
    solve_with(m, b, default_strategy(m))
}

pub fn solve_with(m: &RationalMatrix, b: &[Coeff], strategy: Strategy) -> Result<Solution> {
    if b.len() != m.rows {
        return Err(Error::Dimension(alloc::format!("rhs length {} for {} rows", b.len(), m.rows)));
    }
    let mut aug = RationalMatrix::zeros(m.rows, m.cols + 1);
    for r in 0..m.rows {
        for c in 0..m.cols {
            aug.set(r, c, m.get(r, c).clone());
        }
        aug.set(r, m.cols, b[r].clone());
    }
    let e = aug.rref(strategy);
    if e.pivots.last() == Some(&m.cols) {
        return Err(Error::NoSolution);
    }
    let mut particular = vec![Coeff::zero(); m.cols];
    for (row, &p) in e.rows.iter().zip(&e.pivots) {
        particular[p] = row[m.cols].clone();
    }
    let reduced = Echelon {
        cols: m.cols,
        rows: e.rows.iter().map(|r| r[..m.cols].to_vec()).collect(),
        pivots: e.pivots.clone(),
    };
    Ok(Solution { particular, kernel: reduced.kernel() })
}

/// Result of a nilpotency analysis on a finite-dimensional space.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NilpotencyReport {
    /// Smallest `r` with `N^r = 0`; 0 only for the zero-dimensional space.
    pub max_chain: usize,
    /// Coordinates of a vector with `N^{r-1} v ≠ 0` (a basis vector: the
    /// first whose column of `N^{r-1}` is nonzero).
    pub witness: Vec<Coeff>,
    pub witness_index: Option<usize>,
}

pub fn nilpotency_rank(n: &RationalMatrix) -> Result<NilpotencyReport> {
    if n.rows != n.cols {
        return Err(Error::Dimension("nilpotency needs a square matrix".into()));
    }
    let dim = n.rows;
    if dim == 0 {
        return Ok(NilpotencyReport { max_chain: 0, witness: Vec::new(), witness_index: None });
    }
    let mut prev = RationalMatrix::identity(dim);
    for r in 1..=dim {
        let next = n.mul(&prev)?;
        if next.is_zero() {
            let idx = (0..dim).find(|&c| prev.column(c).iter().any(|x| !x.is_zero())).expect("nonzero power");
            let mut witness = vec![Coeff::zero(); dim];
            witness[idx] = Coeff::one();
            return Ok(NilpotencyReport { max_chain: r, witness, witness_index: Some(idx) });
        }
        prev = next;
    }
    Err(Error::NotNilpotent { dim })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> Coeff {
        Coeff::from_integer(n.into())
    }

    #[test]
    fn kernel_examples() {
        assert_eq!(kernel(&RationalMatrix::zeros(3, 3)).len(), 3);
        assert!(kernel(&RationalMatrix::identity(3)).is_empty());
        let m = RationalMatrix::from_i64_rows(&[&[1, 2], &[2, 4]]).unwrap();
        let k = kernel(&m);
        assert_eq!(k.len(), 1);
        // proportional to (2, -1)
        assert_eq!(&k[0][0] * q(-1), &k[0][1] * q(2));
    }

    #[test]
    fn solve_examples() {
        let b = [q(3), q(-1), q(7)];
        let s = solve(&RationalMatrix::identity(3), &b).unwrap();
        assert_eq!(s.particular, b.to_vec());
        assert!(s.kernel.is_empty());

        let m = RationalMatrix::from_i64_rows(&[&[1, 1]]).unwrap();
        let s = solve(&m, &[q(2)]).unwrap();
        assert_eq!(s.particular, vec![q(2), q(0)]);
        assert_eq!(s.kernel, vec![vec![q(-1), q(1)]]);

        let m = RationalMatrix::from_i64_rows(&[&[0]]).unwrap();
        assert_eq!(solve(&m, &[q(1)]), Err(Error::NoSolution));
    }

    #[test]
    fn nilpotency_examples() {
        let r = nilpotency_rank(&RationalMatrix::zeros(4, 4)).unwrap();
        assert_eq!(r.max_chain, 1);
        // N e_2 = e_1, N e_1 = e_0
        let j = RationalMatrix::from_i64_rows(&[&[0, 1, 0], &[0, 0, 1], &[0, 0, 0]]).unwrap();
        let r = nilpotency_rank(&j).unwrap();
        assert_eq!(r.max_chain, 3);
        assert_eq!(r.witness_index, Some(2));
        assert!(matches!(nilpotency_rank(&RationalMatrix::identity(2)), Err(Error::NotNilpotent { dim: 2 })));
    }

    #[test]
    fn strategies_agree_on_rank_deficient_input() {
        let m = RationalMatrix::from_i64_rows(&[
            &[0, 2, 4, 0, 6],
            &[0, 1, 2, 0, 3],
            &[1, 0, 1, 1, 0],
            &[2, 3, 8, 2, 9],
            &[0, 0, 0, 0, 0],
        ])
        .unwrap();
        let a = m.rref(Strategy::FractionFree);
        let b = m.rref(Strategy::Rational(PivotRule::LargestNumerator));
        let c = m.rref(Strategy::Rational(PivotRule::FirstNonzero));
        assert_eq!(a, b);
        assert_eq!(b, c);
        assert_eq!(a.rank(), 2);
        for v in a.kernel() {
            assert!(m.mul_vec(&v).unwrap().iter().all(Zero::is_zero));
        }
    }
}
