//! Banded Gaussian elimination with partial pivoting.
//!
//! The backward-Euler systems are tridiagonal except for the interface
//! rows, which can couple up to two inward unknowns, so the solver keeps
//! `kl` sub- and `ku` superdiagonals plus `kl` extra superdiagonals of
//! pivoting fill.

use crate::error::{Error, Result};
use alloc::vec;
use alloc::vec::Vec;
use num_complex::Complex64;

pub(crate) trait Scalar:
    Copy
    + core::ops::Add<Output = Self>
    + core::ops::Sub<Output = Self>
    + core::ops::Mul<Output = Self>
    + core::ops::Div<Output = Self>
{
    const ZERO: Self;
    fn magnitude(self) -> f64;
}

impl Scalar for f64 {
    const ZERO: Self = 0.0;
    fn magnitude(self) -> f64 {
        self.abs()
    }
}

impl Scalar for Complex64 {
    const ZERO: Self = Complex64::new(0.0, 0.0);
    fn magnitude(self) -> f64 {
        // hypot-free: elimination only compares magnitudes.
        self.re.abs() + self.im.abs()
    }
}

/// Square banded matrix. Row `i` stores columns `[i - kl, i + kl + ku]`;
/// the trailing `kl` slots hold elimination fill.
pub(crate) struct BandedMatrix<T> {
    n: usize,
    kl: usize,
    ku: usize,
    width: usize,
    data: Vec<T>,
}

impl<T: Scalar> BandedMatrix<T> {
    pub fn new(n: usize, kl: usize, ku: usize) -> Self {
        let width = 2 * kl + ku + 1;
        Self { n, kl, ku, width, data: vec![T::ZERO; n * width] }
    }

    #[inline]
    fn idx(&self, i: usize, j: usize) -> usize {
        debug_assert!(i < self.n && j < self.n);
        debug_assert!(j + self.kl >= i && j <= i + self.kl + self.ku);
        i * self.width + (j + self.kl - i)
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, value: T) {
        let k = self.idx(i, j);
        self.data[k] = value;
    }

    #[inline]
    fn get(&self, i: usize, j: usize) -> T {
        self.data[self.idx(i, j)]
    }

    /// Solve `A x = rhs`, consuming the matrix.
    #[allow(clippy::needless_range_loop)]
    pub fn solve(mut self, mut rhs: Vec<T>) -> Result<Vec<T>> {
        let n = self.n;
        assert_eq!(rhs.len(), n);
        for col in 0..n {
            let row_end = (col + self.kl).min(n - 1);
            let mut pivot_row = col;
            let mut pivot_mag = self.get(col, col).magnitude();
            for r in (col + 1)..=row_end {
                let mag = self.get(r, col).magnitude();
                if mag > pivot_mag {
                    pivot_mag = mag;
                    pivot_row = r;
                }
            }
            if !(pivot_mag > 1e-300) {
                return Err(Error::SingularSystem { column: col });
            }
            let col_end = (col + self.kl + self.ku).min(n - 1);
            if pivot_row != col {
                for j in col..=col_end {
                    let a = self.idx(col, j);
                    let b = self.idx(pivot_row, j);
                    self.data.swap(a, b);
                }
                rhs.swap(col, pivot_row);
            }
            let pivot = self.get(col, col);
            for r in (col + 1)..=row_end {
                let factor = self.get(r, col) / pivot;
                self.set(r, col, T::ZERO);
                for j in (col + 1)..=col_end {
                    let updated = self.get(r, j) - factor * self.get(col, j);
                    self.set(r, j, updated);
                }
                rhs[r] = rhs[r] - factor * rhs[col];
            }
        }
        for i in (0..n).rev() {
            let mut acc = rhs[i];
            let col_end = (i + self.kl + self.ku).min(n - 1);
            for j in (i + 1)..=col_end {
                acc = acc - self.get(i, j) * rhs[j];
            }
            rhs[i] = acc / self.get(i, i);
        }
        Ok(rhs)
    }
}
