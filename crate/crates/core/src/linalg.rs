//! Exact determinants: fraction-free elimination for general matrices and the
//! closed-form Cauchy alternants used for the structured ones.

use num_integer::Integer as _;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exact::{rat, rat_int, IndexSet, Integer, Rational};

/// Dense square matrix over the rationals, stored row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalMatrix {
    order: usize,
    entries: Vec<Rational>,
}

impl RationalMatrix {
    pub fn from_fn(order: usize, mut f: impl FnMut(usize, usize) -> Rational) -> Self {
        let mut entries = Vec::with_capacity(order * order);
        for i in 0..order {
            for j in 0..order {
                entries.push(f(i, j));
            }
        }
        RationalMatrix { order, entries }
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Result<Self> {
        let order = rows.len();
        if let Some(bad) = rows.iter().find(|r| r.len() != order) {
            return Err(Error::LengthMismatch {
                expected: order,
                actual: bad.len(),
            });
        }
        Ok(RationalMatrix {
            order,
            entries: rows.into_iter().flatten().collect(),
        })
    }

    pub fn identity(order: usize) -> Self {
        Self::from_fn(order, |i, j| {
            if i == j {
                Rational::one()
            } else {
                Rational::zero()
            }
        })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.entries[i * self.order + j]
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.entries[i * self.order..(i + 1) * self.order]
    }

    /// Exact determinant; the empty matrix has determinant 1.
    ///
    /// Each row is scaled to integers by the lcm of its denominators, the
    /// integer determinant is taken by Bareiss elimination, and the scale
    /// factors are divided back out.
    pub fn det(&self) -> Rational {
        let n = self.order;
        let mut scale = Integer::one();
        let mut rows = Vec::with_capacity(n);
        for i in 0..n {
            let row = self.row(i);
            let l = row.iter().fold(Integer::one(), |acc, x| acc.lcm(x.denom()));
            rows.push(
                row.iter()
                    .map(|x| x.numer() * (&l / x.denom()))
                    .collect::<Vec<_>>(),
            );
            scale *= l;
        }
        Rational::new(det_integer(rows), scale)
    }
}

/// Bareiss fraction-free determinant of a square integer matrix.
///
/// Pivots on the first nonzero entry of the current column; a column with no
/// usable pivot makes the determinant 0.
pub fn det_integer(mut a: Vec<Vec<Integer>>) -> Integer {
    let n = a.len();
    debug_assert!(a.iter().all(|r| r.len() == n));
    if n == 0 {
        return Integer::one();
    }
    let mut negate = false;
    let mut prev = Integer::one();
    for k in 0..n {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(k, i);
                    negate = !negate;
                }
                None => return Integer::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
                a[i][j] = v;
            }
        }
        prev = a[k][k].clone();
    }
    let d = a[n - 1][n - 1].clone();
    if negate {
        -d
    } else {
        d
    }
}

fn check_sums(x: &[Rational], y: &[Rational]) -> Result<()> {
    for (j, xj) in x.iter().enumerate() {
        for (k, yk) in y.iter().enumerate() {
            if (xj + yk).is_zero() {
                return Err(Error::ZeroSum {
                    row: j + 1,
                    col: k + 1,
                });
            }
        }
    }
    Ok(())
}

fn difference_product(v: &[Rational]) -> Rational {
    let mut p = Rational::one();
    for j in 0..v.len() {
        for k in j + 1..v.len() {
            p *= &v[k] - &v[j];
        }
    }
    p
}

fn sum_product(x: &[Rational], y: &[Rational]) -> Rational {
    let mut p = Rational::one();
    for xj in x {
        for yk in y {
            p *= xj + yk;
        }
    }
    p
}

/// `det(1 / (X_j + Y_k))` by the Cauchy double alternant
/// `prod_{j<k} (X_j - X_k)(Y_j - Y_k) / prod_{j,k} (X_j + Y_k)`.
pub fn cauchy_alternant(x: &[Rational], y: &[Rational]) -> Result<Rational> {
    if x.len() != y.len() {
        return Err(Error::LengthMismatch {
            expected: x.len(),
            actual: y.len(),
        });
    }
    check_sums(x, y)?;
    Ok(difference_product(x) * difference_product(y) / sum_product(x, y))
}

/// Determinant of the `n x n` matrix whose first `n-1` rows are
/// `1 / (X_j + Y_k)` and whose last row is all ones.
///
/// Its value is `prod_{j<k<n} (X_k - X_j) prod_{j<k<=n} (Y_k - Y_j)` over
/// `prod (X_j + Y_k)`; the orientation of the differences matters here since
/// the two products have `(n-1)^2` factors between them.
pub fn cauchy_alternant_odd(x: &[Rational], y: &[Rational]) -> Result<Rational> {
    if y.is_empty() || x.len() + 1 != y.len() {
        return Err(Error::LengthMismatch {
            expected: x.len() + 1,
            actual: y.len(),
        });
    }
    check_sums(x, y)?;
    Ok(difference_product(x) * difference_product(y) / sum_product(x, y))
}

fn check_within(set: &IndexSet, max: usize) -> Result<()> {
    match set.max() {
        Some(m) if m > max => Err(Error::IndexOutOfRange { index: m, max }),
        _ => Ok(()),
    }
}

/// Minor of `(1 / ((2j)^2 - (2k-1)^2))_{1<=j,k<=s}` on rows `rows` and
/// columns `cols`. With both sets equal to `{1..s}` this is the full `D_s`.
pub fn ds_minor(s: usize, rows: &IndexSet, cols: &IndexSet) -> Result<Rational> {
    if rows.len() != cols.len() {
        return Err(Error::LengthMismatch {
            expected: rows.len(),
            actual: cols.len(),
        });
    }
    check_within(rows, s)?;
    check_within(cols, s)?;
    let x: Vec<_> = rows.iter().map(|j| rat_int((4 * j * j) as i64)).collect();
    let y: Vec<_> = cols
        .iter()
        .map(|k| {
            let odd = (2 * k - 1) as i64;
            rat_int(-odd * odd)
        })
        .collect();
    cauchy_alternant(&x, &y)
}

/// Which partial Hilbert matrix a [`hilbert_minor`] is taken from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HilbertShift {
    /// Entries `1 / (j + k)`.
    Zero,
    /// Entries `1 / (j + k - 1)`.
    MinusOne,
}

/// `det(1 / (j + k + shift))_{j,k in K}`; the empty minor is 1.
pub fn hilbert_minor(set: &IndexSet, shift: HilbertShift) -> Rational {
    let offset = match shift {
        HilbertShift::Zero => 0,
        HilbertShift::MinusOne => -1,
    };
    let x: Vec<_> = set.iter().map(|j| rat(j as i64, 1)).collect();
    let y: Vec<_> = set.iter().map(|k| rat(k as i64 + offset, 1)).collect();
    // j + k + shift >= 1 for positive indices
    cauchy_alternant(&x, &y).expect("partial Hilbert entries are finite")
}
