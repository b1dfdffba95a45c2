//! Dense exact-rational simplex for problems of the form
//! `max c^T x  s.t.  A x <= b,  x >= 0` with `b >= 0`.
//!
//! Nonnegative right-hand sides make the slack basis feasible, so there is
//! no phase one. The tableau keeps the basis inverse alive in its slack
//! block, which lets callers append columns after optimizing and continue
//! pivoting from the current basis; the lazy constraint loop in the parent
//! module leans on that. Bland's smallest-index rule picks both the entering
//! column and the leaving row tie-break, so the method never cycles and runs
//! the same way every time.
//!
//! Arithmetic is abstract over [`Scalar`]: a machine-word rational with
//! checked operations for speed, escalating to arbitrary precision when any
//! operation would overflow. Every returned number is exact.

use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use num_traits::{CheckedAdd, CheckedDiv, CheckedMul, CheckedSub, One, Signed, Zero};

/// Exact field arithmetic with overflow reporting.
///
/// `None` from any operation means the representation cannot hold the exact
/// result; the caller retries the whole computation with a wider type.
pub(crate) trait Scalar: Clone + PartialEq + PartialOrd + std::fmt::Debug {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn is_positive(&self) -> bool;
    fn checked_add(&self, other: &Self) -> Option<Self>;
    fn checked_sub(&self, other: &Self) -> Option<Self>;
    fn checked_mul(&self, other: &Self) -> Option<Self>;
    fn checked_div(&self, other: &Self) -> Option<Self>;
    fn neg(&self) -> Self;
    fn from_big(value: &BigRational) -> Option<Self>;
    fn to_big(&self) -> BigRational;
}

impl Scalar for Ratio<i64> {
    fn zero() -> Self {
        <Ratio<i64> as Zero>::zero()
    }
    fn one() -> Self {
        <Ratio<i64> as One>::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn is_positive(&self) -> bool {
        Signed::is_positive(self)
    }
    fn checked_add(&self, other: &Self) -> Option<Self> {
        CheckedAdd::checked_add(self, other)
    }
    fn checked_sub(&self, other: &Self) -> Option<Self> {
        CheckedSub::checked_sub(self, other)
    }
    fn checked_mul(&self, other: &Self) -> Option<Self> {
        CheckedMul::checked_mul(self, other)
    }
    fn checked_div(&self, other: &Self) -> Option<Self> {
        if Zero::is_zero(other) {
            return None;
        }
        CheckedDiv::checked_div(self, other)
    }
    fn neg(&self) -> Self {
        -self
    }
    fn from_big(value: &BigRational) -> Option<Self> {
        let numer: i64 = value.numer().try_into().ok()?;
        let denom: i64 = value.denom().try_into().ok()?;
        Some(Ratio::new(numer, denom))
    }
    fn to_big(&self) -> BigRational {
        BigRational::new(BigInt::from(*self.numer()), BigInt::from(*self.denom()))
    }
}

impl Scalar for BigRational {
    fn zero() -> Self {
        <BigRational as Zero>::zero()
    }
    fn one() -> Self {
        <BigRational as One>::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn is_positive(&self) -> bool {
        Signed::is_positive(self)
    }
    fn checked_add(&self, other: &Self) -> Option<Self> {
        Some(self + other)
    }
    fn checked_sub(&self, other: &Self) -> Option<Self> {
        Some(self - other)
    }
    fn checked_mul(&self, other: &Self) -> Option<Self> {
        Some(self * other)
    }
    fn checked_div(&self, other: &Self) -> Option<Self> {
        if Zero::is_zero(other) {
            return None;
        }
        Some(self / other)
    }
    fn neg(&self) -> Self {
        -self
    }
    fn from_big(value: &BigRational) -> Option<Self> {
        Some(value.clone())
    }
    fn to_big(&self) -> BigRational {
        self.clone()
    }
}

/// Maximization tableau with a fixed row set and a growing column set.
///
/// Variable ids: slack for row i is id `i`; the j-th structural column is id
/// `rows + j`. Column ids equal tableau column positions throughout.
pub(crate) struct ColumnLp<F> {
    rows: usize,
    rhs: Vec<F>,
    tab: Vec<Vec<F>>,
    zrow: Vec<F>,
    zval: F,
    basis: Vec<usize>,
}

impl<F: Scalar> ColumnLp<F> {
    /// Starts at the all-slack basis; requires `rhs >= 0`.
    pub fn new(rhs: Vec<F>) -> Self {
        let rows = rhs.len();
        debug_assert!(rhs.iter().all(|b| b.is_zero() || b.is_positive()));
        let mut tab = Vec::with_capacity(rows);
        for i in 0..rows {
            let mut row = vec![F::zero(); rows];
            row[i] = F::one();
            tab.push(row);
        }
        ColumnLp {
            rows,
            rhs,
            tab,
            zrow: vec![F::zero(); rows],
            zval: F::zero(),
            basis: (0..rows).collect(),
        }
    }

    /// Appends a structural column with the given objective coefficient and
    /// sparse constraint entries, priced against the current basis.
    pub fn add_column(&mut self, obj: F, entries: &[(usize, F)]) -> Option<()> {
        // Tableau form of the new column is B^-1 a; the slack block of the
        // tableau is exactly B^-1.
        let mut tab_col = vec![F::zero(); self.rows];
        for (i, slot) in tab_col.iter_mut().enumerate() {
            let mut acc = F::zero();
            for (k, a) in entries {
                let term = self.tab[i][*k].checked_mul(a)?;
                acc = acc.checked_add(&term)?;
            }
            *slot = acc;
        }
        // Reduced cost: obj minus the dual prices applied to the raw column.
        let mut cbar = obj;
        for (k, a) in entries {
            let term = self.zrow[*k].checked_mul(a)?;
            cbar = cbar.checked_add(&term)?;
        }
        for (i, value) in tab_col.into_iter().enumerate() {
            self.tab[i].push(value);
        }
        self.zrow.push(cbar);
        Some(())
    }

    /// Pivots until no reduced cost is positive. `None` signals arithmetic
    /// overflow in the scalar type. Panics on an unbounded ray, which the
    /// problems built by this crate cannot produce.
    pub fn optimize(&mut self) -> Option<()> {
        loop {
            let Some(entering) = self.zrow.iter().position(|c| c.is_positive()) else {
                return Some(());
            };
            let mut pivot_row: Option<usize> = None;
            let mut best_ratio: Option<F> = None;
            for i in 0..self.rows {
                if !self.tab[i][entering].is_positive() {
                    continue;
                }
                let ratio = self.rhs[i].checked_div(&self.tab[i][entering])?;
                let better = match &best_ratio {
                    None => true,
                    Some(b) => {
                        ratio < *b
                            || (ratio == *b
                                && self.basis[i]
                                    < self.basis[pivot_row.expect("ratio set implies row set")])
                    }
                };
                if better {
                    best_ratio = Some(ratio);
                    pivot_row = Some(i);
                }
            }
            let p = pivot_row.expect("unbounded program: every cover/packing LP here is bounded");
            self.pivot(p, entering)?;
        }
    }

    fn pivot(&mut self, p: usize, e: usize) -> Option<()> {
        let piv = self.tab[p][e].clone();
        for x in self.tab[p].iter_mut() {
            *x = x.checked_div(&piv)?;
        }
        self.rhs[p] = self.rhs[p].checked_div(&piv)?;
        for i in 0..self.rows {
            if i == p || self.tab[i][e].is_zero() {
                continue;
            }
            let f = self.tab[i][e].clone();
            for j in 0..self.tab[i].len() {
                let delta = f.checked_mul(&self.tab[p][j])?;
                self.tab[i][j] = self.tab[i][j].checked_sub(&delta)?;
            }
            let delta = f.checked_mul(&self.rhs[p])?;
            self.rhs[i] = self.rhs[i].checked_sub(&delta)?;
        }
        let cbar = self.zrow[e].clone();
        let gain = cbar.checked_mul(&self.rhs[p])?;
        self.zval = self.zval.checked_add(&gain)?;
        for j in 0..self.zrow.len() {
            let delta = cbar.checked_mul(&self.tab[p][j])?;
            self.zrow[j] = self.zrow[j].checked_sub(&delta)?;
        }
        self.basis[p] = e;
        Some(())
    }

    pub fn value(&self) -> &F {
        &self.zval
    }

    /// Dual prices, one per row: the negated reduced costs of the slacks.
    /// At optimality these solve the dual program exactly.
    pub fn duals(&self) -> Vec<F> {
        (0..self.rows).map(|k| self.zrow[k].neg()).collect()
    }
}
