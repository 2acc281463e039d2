//! Exact arithmetic kernel: big rationals, ordered index sets and the
//! integer combinatorics (factorials, binomials, trinomials, Legendre values)
//! that the volume formulas are built from.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision integer.
pub type Integer = BigInt;

/// Arbitrary-precision rational, always kept reduced with a positive
/// denominator (zero is `0/1`).
pub type Rational = num_rational::BigRational;

pub fn int(n: i64) -> Integer {
    Integer::from(n)
}

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(Integer::from(n), Integer::from(d))
}

pub fn rat_int(n: impl Into<Integer>) -> Rational {
    Rational::from_integer(n.into())
}

/// Canonical `p/q` rendering. Integers keep their `/1`.
pub fn format_rational(x: &Rational) -> String {
    format!("{}/{}", x.numer(), x.denom())
}

/// Parses `p/q` or a bare integer `p`; the result is reduced.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let bad = || Error::ParseRational(s.to_string());
    let t = s.trim();
    match t.split_once('/') {
        Some((p, q)) => {
            let p = Integer::from_str(p.trim()).map_err(|_| bad())?;
            let q = Integer::from_str(q.trim()).map_err(|_| bad())?;
            if q.is_zero() {
                return Err(bad());
            }
            Ok(Rational::new(p, q))
        }
        None => Integer::from_str(t).map(rat_int).map_err(|_| bad()),
    }
}

pub fn to_f64(x: &Rational) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

pub fn is_integer(x: &Rational) -> bool {
    x.denom().is_one()
}

pub fn pow2(e: u32) -> Integer {
    Integer::one() << e as usize
}

pub fn factorial(n: u64) -> Integer {
    (2..=n).fold(Integer::one(), |acc, k| acc * k)
}

/// `C(n, k)` for arbitrary integers. Zero for `k < 0` and for `0 <= n < k`;
/// negative `n` follows the falling-factorial extension.
pub fn binomial(n: i64, k: i64) -> Integer {
    if k < 0 || (n >= 0 && k > n) {
        return Integer::zero();
    }
    let k = if n >= 0 { k.min(n - k) } else { k };
    let mut acc = Integer::one();
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

pub fn double_factorial(n: u64) -> Integer {
    (1..=n)
        .rev()
        .step_by(2)
        .fold(Integer::one(), |acc, k| acc * k)
}

/// Multinomial `n! / (a! b! c!)`.
pub fn trinomial(n: u64, a: u64, b: u64, c: u64) -> Result<Integer> {
    if a.checked_add(b).and_then(|ab| ab.checked_add(c)) != Some(n) {
        return Err(Error::TrinomialParts { n, a, b, c });
    }
    Ok(binomial(n as i64, a as i64) * binomial((n - a) as i64, b as i64))
}

/// `P_d(x) = sum_j C(d+j, 2j) C(2j, j) ((x-1)/2)^j`.
pub fn legendre_eval(d: u64, x: &Rational) -> Rational {
    let t = (x - Rational::one()) / rat(2, 1);
    let mut power = Rational::one();
    let mut sum = Rational::zero();
    for j in 0..=d as i64 {
        let coeff = binomial(d as i64 + j, 2 * j) * binomial(2 * j, j);
        sum += &power * rat_int(coeff);
        power *= &t;
    }
    sum
}

/// Strictly increasing sequence of positive integers.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IndexSet(Vec<usize>);

impl IndexSet {
    pub fn new(elements: Vec<usize>) -> Result<Self> {
        let ok =
            elements.first().is_none_or(|&e| e >= 1) && elements.windows(2).all(|w| w[0] < w[1]);
        if ok {
            Ok(IndexSet(elements))
        } else {
            Err(Error::BadIndexSet(elements))
        }
    }

    pub fn empty() -> Self {
        IndexSet(Vec::new())
    }

    /// `{1, ..., n}`.
    pub fn full(n: usize) -> Self {
        IndexSet((1..=n).collect())
    }

    /// Subset of `{1, ..., n}` whose bit `i` selects element `i + 1`.
    pub fn from_mask(mask: u64, n: usize) -> Self {
        IndexSet(
            (0..n)
                .filter(|i| mask >> i & 1 == 1)
                .map(|i| i + 1)
                .collect(),
        )
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().copied()
    }

    pub fn contains(&self, x: usize) -> bool {
        self.0.binary_search(&x).is_ok()
    }

    pub fn max(&self) -> Option<usize> {
        self.0.last().copied()
    }

    /// Elements of `{1, ..., n}` not in `self`.
    pub fn complement(&self, n: usize) -> Self {
        IndexSet((1..=n).filter(|&x| !self.contains(x)).collect())
    }

    pub fn sum(&self) -> usize {
        self.0.iter().sum()
    }
}

impl fmt::Display for IndexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, "}}")
    }
}
