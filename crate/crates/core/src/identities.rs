//! Signed permutation sums `H` and `S`, their product closed forms, the two
//! subset-convolution identities, and the parity bookkeeping (parity
//! splitting, oe-order sign) that the volume formulas rest on.
//!
//! Everything is evaluated exactly at rational points; the identities are
//! rational functions of bounded degree, so agreement at enough random points
//! is a proof-grade check.

use std::ops::Deref;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exact::{pow2, rat_int, IndexSet, Rational};

/// Largest `r` for which the `r!`-term permutation sums are evaluated.
pub const PERMUTATION_CAP: usize = 8;
/// Largest `r` for which the `2^r`-term subset convolutions are evaluated.
pub const SUBSET_CAP: usize = 12;

/// Values of the ordered indeterminates `X_1 < ... < X_r` (or `Y`).
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RationalPoint(pub Vec<Rational>);

impl RationalPoint {
    /// Coordinates selected by `mask` (bit `i` picks coordinate `i`) and the
    /// remaining ones, both in their original order.
    pub fn split(&self, mask: u64) -> (RationalPoint, RationalPoint) {
        let (mut inside, mut outside) = (Vec::new(), Vec::new());
        for (i, x) in self.0.iter().enumerate() {
            if mask >> i & 1 == 1 {
                inside.push(x.clone());
            } else {
                outside.push(x.clone());
            }
        }
        (RationalPoint(inside), RationalPoint(outside))
    }
}

impl Deref for RationalPoint {
    type Target = [Rational];
    fn deref(&self) -> &[Rational] {
        &self.0
    }
}

impl From<Vec<Rational>> for RationalPoint {
    fn from(v: Vec<Rational>) -> Self {
        RationalPoint(v)
    }
}

/// Visits every permutation of `0..r` in lexicographic order together with
/// its sign. The sign is updated from the swap and suffix reversal that
/// produce the next permutation.
fn for_each_permutation(
    r: usize,
    mut visit: impl FnMut(&[usize], bool) -> Result<()>,
) -> Result<()> {
    let mut p: Vec<usize> = (0..r).collect();
    let mut odd = false;
    loop {
        visit(&p, odd)?;
        let Some(i) = (0..r.saturating_sub(1)).rev().find(|&i| p[i] < p[i + 1]) else {
            return Ok(());
        };
        let j = (i + 1..r)
            .rev()
            .find(|&j| p[j] > p[i])
            .expect("successor exists");
        p.swap(i, j);
        p[i + 1..].reverse();
        let reversal_swaps = (r - i - 1) / 2;
        odd ^= reversal_swaps.is_multiple_of(2);
    }
}

fn one_based(p: &[usize]) -> Vec<usize> {
    p.iter().map(|i| i + 1).collect()
}

fn check_cap(size: usize, cap: usize) -> Result<()> {
    if size > cap {
        Err(Error::CapExceeded { size, cap })
    } else {
        Ok(())
    }
}

/// `H(X) = sum_sigma sgn(sigma) prod_i (1 - X_i) / (1 - X_sigma(1) ... X_sigma(i))`
/// by full enumeration. `H` of the empty point is 1.
pub fn h_perm(x: &RationalPoint) -> Result<Rational> {
    h_perm_with_cap(x, PERMUTATION_CAP)
}

pub fn h_perm_with_cap(x: &RationalPoint, cap: usize) -> Result<Rational> {
    check_cap(x.len(), cap)?;
    let numerator: Rational = x.iter().map(|xi| Rational::one() - xi).product();
    let mut sum = Rational::zero();
    for_each_permutation(x.len(), |p, odd| {
        let mut prefix = Rational::one();
        let mut denominator = Rational::one();
        for (i, &idx) in p.iter().enumerate() {
            prefix *= &x[idx];
            let factor = Rational::one() - &prefix;
            if factor.is_zero() {
                return Err(Error::VanishingPrefix {
                    perm: one_based(p),
                    prefix: i + 1,
                });
            }
            denominator *= factor;
        }
        let term = &numerator / denominator;
        if odd {
            sum -= term;
        } else {
            sum += term;
        }
        Ok(())
    })?;
    Ok(sum)
}

/// `H(X) = prod_{j<k} (X_j - X_k) / (1 - X_j X_k)`.
pub fn h_closed(x: &[Rational]) -> Result<Rational> {
    let mut acc = Rational::one();
    for j in 0..x.len() {
        for k in j + 1..x.len() {
            let den = Rational::one() - &x[j] * &x[k];
            if den.is_zero() {
                return Err(Error::VanishingPair {
                    what: "1 - X_j X_k",
                    j: j + 1,
                    k: k + 1,
                });
            }
            acc *= (&x[j] - &x[k]) / den;
        }
    }
    Ok(acc)
}

/// `S(Y) = sum_sigma sgn(sigma) / prod_i (Y_sigma(1) + ... + Y_sigma(i))` by
/// full enumeration. `S` of the empty point is 1.
pub fn s_perm(y: &RationalPoint) -> Result<Rational> {
    s_perm_with_cap(y, PERMUTATION_CAP)
}

pub fn s_perm_with_cap(y: &RationalPoint, cap: usize) -> Result<Rational> {
    check_cap(y.len(), cap)?;
    let mut sum = Rational::zero();
    for_each_permutation(y.len(), |p, odd| {
        let mut prefix = Rational::zero();
        let mut denominator = Rational::one();
        for (i, &idx) in p.iter().enumerate() {
            prefix += &y[idx];
            if prefix.is_zero() {
                return Err(Error::VanishingPrefix {
                    perm: one_based(p),
                    prefix: i + 1,
                });
            }
            denominator *= &prefix;
        }
        let term = denominator.recip();
        if odd {
            sum -= term;
        } else {
            sum += term;
        }
        Ok(())
    })?;
    Ok(sum)
}

/// `S(Y) = 1/(Y_1 ... Y_r) prod_{j<k} (Y_k - Y_j) / (Y_k + Y_j)`.
pub fn s_closed(y: &[Rational]) -> Result<Rational> {
    let mut acc = Rational::one();
    for (i, yi) in y.iter().enumerate() {
        if yi.is_zero() {
            return Err(Error::ZeroCoordinate { index: i + 1 });
        }
        acc /= yi;
    }
    for j in 0..y.len() {
        for k in j + 1..y.len() {
            let den = &y[k] + &y[j];
            if den.is_zero() {
                return Err(Error::VanishingPair {
                    what: "Y_j + Y_k",
                    j: j + 1,
                    k: k + 1,
                });
            }
            acc *= (&y[k] - &y[j]) / den;
        }
    }
    Ok(acc)
}

fn subset_convolution(
    x: &RationalPoint,
    f: impl Fn(&[Rational]) -> Result<Rational>,
) -> Result<Rational> {
    check_cap(x.len(), SUBSET_CAP)?;
    let mut sum = Rational::zero();
    for mask in 0..1u64 << x.len() {
        let (inside, outside) = x.split(mask);
        sum += f(&inside)? * f(&outside)?;
    }
    Ok(sum)
}

/// `sum_{K subset [r]} H(X_K) H(X_{[r] \ K})`, with `H` in closed form.
pub fn conv_h_lhs(x: &RationalPoint) -> Result<Rational> {
    subset_convolution(x, h_closed)
}

/// Product form of the `H` convolution:
/// `2^ceil(r/2) prod_{j+r odd} (1 + X_j) prod_{j even} (1 - X_j)
///  prod_{j<k, k-j even} (X_j - X_k) prod_{j<k, k-j odd} 1/(1 - X_j X_k)`.
pub fn conv_h_rhs(x: &[Rational]) -> Result<Rational> {
    let r = x.len();
    let mut acc = rat_int(pow2(r.div_ceil(2) as u32));
    for j in 1..=r {
        if (j + r) % 2 == 1 {
            acc *= Rational::one() + &x[j - 1];
        }
        if j % 2 == 0 {
            acc *= Rational::one() - &x[j - 1];
        }
    }
    for j in 1..=r {
        for k in j + 1..=r {
            if (k - j) % 2 == 0 {
                acc *= &x[j - 1] - &x[k - 1];
            } else {
                let den = Rational::one() - &x[j - 1] * &x[k - 1];
                if den.is_zero() {
                    return Err(Error::VanishingPair {
                        what: "1 - X_j X_k",
                        j,
                        k,
                    });
                }
                acc /= den;
            }
        }
    }
    Ok(acc)
}

/// `sum_{K subset [r]} S(Y_K) S(Y_{[r] \ K})`, with `S` in closed form.
pub fn conv_s_lhs(y: &RationalPoint) -> Result<Rational> {
    subset_convolution(y, s_closed)
}

/// Product form of the `S` convolution:
/// `2^r prod_{j<k, k-j even} (Y_k - Y_j) prod_{j odd} 1/Y_j
///  prod_{j<k, k-j odd} 1/(Y_k + Y_j)`.
pub fn conv_s_rhs(y: &[Rational]) -> Result<Rational> {
    let r = y.len();
    let mut acc = rat_int(pow2(r as u32));
    for j in (1..=r).step_by(2) {
        if y[j - 1].is_zero() {
            return Err(Error::ZeroCoordinate { index: j });
        }
        acc /= &y[j - 1];
    }
    for j in 1..=r {
        for k in j + 1..=r {
            if (k - j) % 2 == 0 {
                acc *= &y[k - 1] - &y[j - 1];
            } else {
                let den = &y[k - 1] + &y[j - 1];
                if den.is_zero() {
                    return Err(Error::VanishingPair {
                        what: "Y_j + Y_k",
                        j,
                        k,
                    });
                }
                acc /= den;
            }
        }
    }
    Ok(acc)
}

/// Right side of the degree-lowering recurrence shared by both sides of the
/// `H` convolution, for `r >= 2`:
///
/// `(1+X_{r-1})(1-X_r)/(1-X_{r-1}X_r) h(X_1..X_{r-1})
///  - sum_{i<r, i+r even} (1+X_{r-1})(1-X_i)/(1-X_{r-1}X_i)
///    h(X_1..X_{i-1}, X_r, X_{i+1}..X_{r-1})`.
pub fn convolution_recurrence_rhs(
    x: &[Rational],
    h: impl Fn(&[Rational]) -> Result<Rational>,
) -> Result<Rational> {
    let r = x.len();
    assert!(r >= 2, "recurrence starts at r = 2");
    let one = Rational::one();
    let (xr1, xr) = (&x[r - 2], &x[r - 1]);
    let ratio = |xi: &Rational, i: usize| -> Result<Rational> {
        let den = &one - xr1 * xi;
        if den.is_zero() {
            return Err(Error::VanishingPair {
                what: "1 - X_{r-1} X_i",
                j: r - 1,
                k: i,
            });
        }
        Ok((&one + xr1) * (&one - xi) / den)
    };
    let mut acc = ratio(xr, r)? * h(&x[..r - 1])?;
    for i in (1..r).filter(|i| (i + r).is_multiple_of(2)) {
        let mut moved = x[..r - 1].to_vec();
        moved[i - 1] = xr.clone();
        acc -= ratio(&x[i - 1], i)? * h(&moved)?;
    }
    Ok(acc)
}

/// Even and odd elements of an index set, rescaled: `2 * even_part` are the
/// even elements and `2 * odd_part - 1` the odd ones.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParitySplit {
    pub even_part: IndexSet,
    pub odd_part: IndexSet,
}

impl ParitySplit {
    pub fn is_balanced(&self) -> bool {
        self.even_part.len() == self.odd_part.len()
    }

    /// The set this split came from.
    pub fn rejoin(&self) -> IndexSet {
        let mut v: Vec<usize> = self
            .even_part
            .iter()
            .map(|x| 2 * x)
            .chain(self.odd_part.iter().map(|x| 2 * x - 1))
            .collect();
        v.sort_unstable();
        IndexSet::new(v).expect("rescaled parts are positive and disjoint")
    }
}

pub fn parity_split(set: &IndexSet) -> ParitySplit {
    let even = set.iter().filter(|x| x % 2 == 0).map(|x| x / 2).collect();
    let odd = set
        .iter()
        .filter(|x| x % 2 == 1)
        .map(|x| x.div_ceil(2))
        .collect();
    ParitySplit {
        even_part: IndexSet::new(even).expect("halving keeps order"),
        odd_part: IndexSet::new(odd).expect("halving keeps order"),
    }
}

/// Sign of the permutation taking `set` from ascending order to increasing
/// oe-order (odd, even, odd, even, ... with both parts ascending).
pub fn oe_sign(set: &IndexSet) -> Result<i8> {
    let odds: Vec<usize> = set.iter().filter(|x| x % 2 == 1).collect();
    let evens: Vec<usize> = set.iter().filter(|x| x % 2 == 0).collect();
    if odds.len() != set.len().div_ceil(2) || evens.len() != set.len() / 2 {
        return Err(Error::OeCounts(set.as_slice().to_vec()));
    }
    let mut arranged = Vec::with_capacity(set.len());
    for (i, &o) in odds.iter().enumerate() {
        arranged.push(o);
        if let Some(&e) = evens.get(i) {
            arranged.push(e);
        }
    }
    let inversions = (0..arranged.len())
        .flat_map(|i| (i + 1..arranged.len()).map(move |j| (i, j)))
        .filter(|&(i, j)| arranged[i] > arranged[j])
        .count();
    Ok(if inversions % 2 == 0 { 1 } else { -1 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;

    fn pt(v: &[(i64, i64)]) -> RationalPoint {
        RationalPoint(v.iter().map(|&(n, d)| rat(n, d)).collect())
    }

    fn set(v: &[usize]) -> IndexSet {
        IndexSet::new(v.to_vec()).unwrap()
    }

    #[test]
    fn permutation_signs_match_inversion_count() {
        let mut seen = 0;
        for_each_permutation(5, |p, odd| {
            let inv = (0..5)
                .flat_map(|i| (i + 1..5).map(move |j| (i, j)))
                .filter(|&(i, j)| p[i] > p[j])
                .count();
            assert_eq!(odd, inv % 2 == 1, "{p:?}");
            seen += 1;
            Ok(())
        })
        .unwrap();
        assert_eq!(seen, 120);
    }

    #[test]
    fn permutations_are_lexicographic() {
        let mut all = Vec::new();
        for_each_permutation(3, |p, _| {
            all.push(p.to_vec());
            Ok(())
        })
        .unwrap();
        assert_eq!(
            all,
            vec![
                vec![0, 1, 2],
                vec![0, 2, 1],
                vec![1, 0, 2],
                vec![1, 2, 0],
                vec![2, 0, 1],
                vec![2, 1, 0]
            ]
        );
    }

    #[test]
    fn h_examples() {
        assert_eq!(h_perm(&pt(&[])).unwrap(), rat(1, 1));
        assert_eq!(h_perm(&pt(&[(1, 2)])).unwrap(), rat(1, 1));
        assert_eq!(h_perm(&pt(&[(1, 2), (1, 3)])).unwrap(), rat(1, 5));
        assert_eq!(h_closed(&pt(&[])).unwrap(), rat(1, 1));
        assert_eq!(h_closed(&pt(&[(1, 2), (1, 3)])).unwrap(), rat(1, 5));
        assert_eq!(h_closed(&pt(&[(1, 3), (1, 2)])).unwrap(), rat(-1, 5));
    }

    #[test]
    fn h_errors() {
        assert!(matches!(
            h_perm(&pt(&[(1, 1), (1, 2)])),
            Err(Error::VanishingPrefix { prefix: 1, .. })
        ));
        assert!(matches!(
            h_closed(&pt(&[(2, 1), (1, 2)])),
            Err(Error::VanishingPair { j: 1, k: 2, .. })
        ));
        let big = RationalPoint(vec![rat(1, 2); 9]);
        assert_eq!(h_perm(&big), Err(Error::CapExceeded { size: 9, cap: 8 }));
    }

    #[test]
    fn s_examples() {
        assert_eq!(s_perm(&pt(&[])).unwrap(), rat(1, 1));
        assert_eq!(s_perm(&pt(&[(5, 1)])).unwrap(), rat(1, 5));
        assert_eq!(s_perm(&pt(&[(1, 1), (2, 1)])).unwrap(), rat(1, 6));
        assert_eq!(s_closed(&pt(&[(1, 1), (2, 1)])).unwrap(), rat(1, 6));
        assert_eq!(s_closed(&pt(&[(3, 1)])).unwrap(), rat(1, 3));
        assert_eq!(s_closed(&pt(&[(1, 1), (3, 1)])).unwrap(), rat(1, 6));
        assert_eq!(s_perm(&pt(&[(1, 1), (3, 1)])).unwrap(), rat(1, 6));
    }

    #[test]
    fn s_errors() {
        assert!(matches!(
            s_perm(&pt(&[(1, 1), (-1, 1)])),
            Err(Error::VanishingPrefix { prefix: 2, .. })
        ));
        assert_eq!(
            s_closed(&pt(&[(1, 1), (0, 1)])),
            Err(Error::ZeroCoordinate { index: 2 })
        );
        assert!(matches!(
            s_closed(&pt(&[(1, 2), (-1, 2)])),
            Err(Error::VanishingPair { .. })
        ));
    }

    #[test]
    fn convolution_examples() {
        assert_eq!(conv_h_lhs(&pt(&[(1, 7)])).unwrap(), rat(2, 1));
        assert_eq!(conv_h_lhs(&pt(&[(1, 2), (1, 3)])).unwrap(), rat(12, 5));
        assert_eq!(conv_h_lhs(&pt(&[])).unwrap(), rat(1, 1));
        assert_eq!(conv_h_rhs(&pt(&[(1, 7)])).unwrap(), rat(2, 1));
        assert_eq!(conv_h_rhs(&pt(&[(1, 2), (1, 3)])).unwrap(), rat(12, 5));
        assert_eq!(conv_h_rhs(&pt(&[])).unwrap(), rat(1, 1));

        assert_eq!(conv_s_lhs(&pt(&[(1, 1), (2, 1)])).unwrap(), rat(4, 3));
        assert_eq!(conv_s_rhs(&pt(&[(1, 1), (2, 1)])).unwrap(), rat(4, 3));
        assert_eq!(conv_s_lhs(&pt(&[(3, 1)])).unwrap(), rat(2, 3));
        assert_eq!(conv_s_rhs(&pt(&[(3, 1)])).unwrap(), rat(2, 3));
        assert_eq!(conv_s_lhs(&pt(&[])).unwrap(), rat(1, 1));
        assert_eq!(conv_s_rhs(&pt(&[])).unwrap(), rat(1, 1));
    }

    #[test]
    fn recurrence_base_case() {
        let x = pt(&[(1, 3), (-2, 5)]);
        assert_eq!(
            convolution_recurrence_rhs(&x, conv_h_rhs).unwrap(),
            conv_h_rhs(&x).unwrap()
        );
        assert_eq!(conv_h_rhs(&pt(&[(4, 9)])).unwrap(), rat(2, 1));
    }

    #[test]
    fn parity_split_examples() {
        let split = parity_split(&set(&[1, 3, 4, 5, 6]));
        assert_eq!(split.even_part, set(&[2, 3]));
        assert_eq!(split.odd_part, set(&[1, 2, 3]));
        assert!(!split.is_balanced());
        assert_eq!(split.rejoin(), set(&[1, 3, 4, 5, 6]));

        let empty = parity_split(&IndexSet::empty());
        assert!(empty.even_part.is_empty() && empty.odd_part.is_empty());

        let evens = parity_split(&set(&[2, 4]));
        assert_eq!(evens.even_part, set(&[1, 2]));
        assert!(evens.odd_part.is_empty());
    }

    #[test]
    fn parity_split_rejoins() {
        for mask in 0..1u64 << 10 {
            let s = IndexSet::from_mask(mask, 10);
            assert_eq!(parity_split(&s).rejoin(), s);
        }
    }

    #[test]
    fn oe_sign_examples() {
        assert_eq!(oe_sign(&set(&[1, 3, 4, 5, 6])).unwrap(), 1);
        assert_eq!(oe_sign(&set(&[1])).unwrap(), 1);
        assert_eq!(oe_sign(&set(&[1, 2, 3, 4])).unwrap(), 1);
        assert_eq!(oe_sign(&IndexSet::empty()).unwrap(), 1);
        assert_eq!(oe_sign(&set(&[1, 2, 3, 5, 6, 8])).unwrap(), -1);
        assert_eq!(oe_sign(&set(&[1, 3, 4, 6])).unwrap(), -1);
        assert!(oe_sign(&set(&[2, 4])).is_err());
        assert!(oe_sign(&set(&[1, 3])).is_err());
    }
}
