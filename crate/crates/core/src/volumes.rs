//! Volumes `v_d^(s)` of the signature strata of the Schur-Cohn region and the
//! ratios `v_d^(s) / v_d^(0)`.
//!
//! Each quantity has several independent evaluation paths (closed products,
//! determinant sums over index sets, partial Hilbert minors, a Legendre
//! value). They share only the exact-arithmetic kernel, so bit-exact
//! agreement between paths is a meaningful check.

use std::fmt;
use std::str::FromStr;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exact::{
    binomial, factorial, legendre_eval, pow2, rat, rat_int, trinomial, IndexSet, Integer, Rational,
};
use crate::linalg::{
    cauchy_alternant, cauchy_alternant_odd, det_integer, ds_minor, hilbert_minor, HilbertShift,
    RationalMatrix,
};
use crate::par::Exec;

/// Degree `d` and number `s` of nonreal root pairs, with `0 <= 2s <= d`.
/// The number of real roots is `d - 2s`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Signature {
    d: usize,
    s: usize,
}

impl Signature {
    pub fn new(d: usize, s: usize) -> Result<Self> {
        if d == 0 || 2 * s > d {
            Err(Error::InvalidSignature { d, s })
        } else {
            Ok(Signature { d, s })
        }
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn s(&self) -> usize {
        self.s
    }

    pub fn real_roots(&self) -> usize {
        self.d - 2 * self.s
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TotallyComplexMethod {
    Closed,
    Determinant,
}

/// Which of the two determinant sums for even degree: the special rows or the
/// special columns are indexed by `J`. Odd degree only has the rows form.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum DetmixVariant {
    Rows,
    Cols,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RatioMethod {
    /// Trinomial coefficients times squared difference quotients.
    Trinomial,
    /// Binomial weights times minors of `(1/(j+k))`.
    Hilbert,
    /// Minors of the integer matrix `C(d+2j, 2j+2k) C(2j+2k-1, 2j-1)`.
    Binomdet,
    /// Even degree only: minors of `(1/(j+k-1))`.
    Evenalt,
    /// Quotient of the mixed determinant sum by the totally real volume.
    Detmix,
    /// `s = 1` only: `(P_d(3) - 2d - 1) / 4`.
    Legendre,
}

impl RatioMethod {
    pub const ALL: [RatioMethod; 6] = [
        RatioMethod::Trinomial,
        RatioMethod::Hilbert,
        RatioMethod::Binomdet,
        RatioMethod::Evenalt,
        RatioMethod::Detmix,
        RatioMethod::Legendre,
    ];

    pub fn name(self) -> &'static str {
        match self {
            RatioMethod::Trinomial => "trinomial",
            RatioMethod::Hilbert => "hilbert",
            RatioMethod::Binomdet => "binomdet",
            RatioMethod::Evenalt => "evenalt",
            RatioMethod::Detmix => "detmix",
            RatioMethod::Legendre => "legendre",
        }
    }

    /// Whether the method is defined at `(d, s)`; `(d, s)` itself is assumed
    /// to be a valid signature.
    pub fn applies(self, d: usize, s: usize) -> bool {
        match self {
            RatioMethod::Evenalt => d.is_multiple_of(2),
            RatioMethod::Legendre => s == 1,
            RatioMethod::Detmix => d.is_multiple_of(2) || s < d.div_ceil(2),
            _ => true,
        }
    }
}

impl fmt::Display for RatioMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for RatioMethod {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        RatioMethod::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| format!("unknown ratio method `{s}`"))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TotalRatioMethod {
    Closed,
    Det,
}

/// The formula path behind a [`VolumeRecord`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum VolumeMethod {
    /// `v_real(d) * ratio(d, s, method)`.
    Ratio(RatioMethod),
    Detmix(DetmixVariant),
    TotallyComplex(TotallyComplexMethod),
}

impl VolumeMethod {
    pub fn name(self) -> &'static str {
        match self {
            VolumeMethod::Ratio(m) => m.name(),
            VolumeMethod::Detmix(DetmixVariant::Rows) => "rows",
            VolumeMethod::Detmix(DetmixVariant::Cols) => "cols",
            VolumeMethod::TotallyComplex(TotallyComplexMethod::Closed) => "closed",
            VolumeMethod::TotallyComplex(TotallyComplexMethod::Determinant) => "determinant",
        }
    }
}

impl fmt::Display for VolumeMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for VolumeMethod {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        Ok(match s {
            "rows" => VolumeMethod::Detmix(DetmixVariant::Rows),
            "cols" => VolumeMethod::Detmix(DetmixVariant::Cols),
            "closed" => VolumeMethod::TotallyComplex(TotallyComplexMethod::Closed),
            "determinant" => VolumeMethod::TotallyComplex(TotallyComplexMethod::Determinant),
            other => VolumeMethod::Ratio(
                other
                    .parse()
                    .map_err(|_| format!("unknown volume method `{other}`"))?,
            ),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VolumeRecord {
    pub signature: Signature,
    pub value: Rational,
    pub method: VolumeMethod,
}

fn check_degree(d: usize) -> Result<()> {
    if d == 0 {
        Err(Error::ZeroDegree)
    } else {
        Ok(())
    }
}

fn pow2_rat(e: usize) -> Rational {
    rat_int(pow2(e as u32))
}

/// Volume of the whole region: `2^d prod_{j<=d/2} (1 + 1/(2j))^(2j-d)`.
pub fn v_full(d: usize) -> Result<Rational> {
    check_degree(d)?;
    let mut v = pow2_rat(d);
    for j in 1..=d / 2 {
        let base = rat(2 * j as i64 + 1, 2 * j as i64);
        v *= base.pow(2 * j as i32 - d as i32);
    }
    Ok(v)
}

/// Totally real volume `2^(d(d+1)/2) prod_{j=1}^d (j-1)!^2 / (2j-1)!`.
pub fn v_real(d: usize) -> Result<Rational> {
    check_degree(d)?;
    let mut v = pow2_rat(d * (d + 1) / 2);
    for j in 1..=d as u64 {
        let f = factorial(j - 1);
        v *= Rational::new(&f * &f, factorial(2 * j - 1));
    }
    Ok(v)
}

/// Totally real volume as a scaled determinant, evaluated with the Cauchy
/// alternants after pulling `1/(2k-1)` out of every column.
pub fn v_real_det(d: usize) -> Result<Rational> {
    check_degree(d)?;
    let n = d.div_ceil(2);
    let ys: Vec<Rational> = (1..=n).map(|k| rat(2 * k as i64 - 1, 1)).collect();
    let column_scale: Rational = ys.iter().map(|y| y.recip()).product();
    let det = if d.is_multiple_of(2) {
        let xs: Vec<Rational> = (1..=n).map(|j| rat(2 * j as i64, 1)).collect();
        cauchy_alternant(&xs, &ys)?
    } else {
        let xs: Vec<Rational> = (1..n).map(|j| rat(2 * j as i64, 1)).collect();
        cauchy_alternant_odd(&xs, &ys)?
    };
    Ok(pow2_rat(d) * column_scale * det)
}

/// `prod_{j=0}^{2s-1} C(2j+1, j)`.
fn odd_central_product(s: usize) -> Integer {
    (0..2 * s as i64).map(|j| binomial(2 * j + 1, j)).product()
}

/// Even-degree totally real volume in the closed form
/// `2^(s(2s+1)) / (2s)! / prod_{j<2s} C(2j+1, j)`.
pub fn v_real_even_closed(s: usize) -> Result<Rational> {
    if s == 0 {
        return Err(Error::ZeroDegree);
    }
    Ok(Rational::new(
        pow2((s * (2 * s + 1)) as u32),
        factorial(2 * s as u64) * odd_central_product(s),
    ))
}

/// `v_{2s}^(s)`: all roots nonreal.
pub fn v_totally_complex(s: usize, method: TotallyComplexMethod) -> Result<Rational> {
    if s == 0 {
        return Err(Error::InvalidSignature { d: 0, s });
    }
    match method {
        TotallyComplexMethod::Closed => {
            let f = factorial(s as u64);
            Ok(Rational::new(
                pow2((s * (4 * s - 1)) as u32),
                &f * &f * odd_central_product(s),
            ))
        }
        TotallyComplexMethod::Determinant => {
            let full = IndexSet::full(s);
            Ok(pow2_rat(3 * s) * ds_minor(s, &full, &full)?)
        }
    }
}

/// `1/((2j)^2 - (2k-1)^2)`.
fn complex_entry(j: usize, k: usize) -> Rational {
    let (a, b) = (2 * j as i64, 2 * k as i64 - 1);
    rat(1, a * a - b * b)
}

/// `1/((2k-1)(2j+2k-1))`.
fn real_entry(j: usize, k: usize) -> Rational {
    let b = 2 * k as i64 - 1;
    rat(1, b * (2 * j as i64 + b))
}

fn subsets_of_size(n: usize, size: usize) -> impl Iterator<Item = IndexSet> {
    (0..1u64 << n)
        .filter(move |m| m.count_ones() as usize == size)
        .map(move |m| IndexSet::from_mask(m, n))
}

/// `v_d^(s)` as a sum of determinants over the `s`-subsets `J` of
/// `{1..n}`; rows (or columns, even `d` only) in `J` take the complex-pair
/// entries, the rest the real-root entries, and for odd `d` the last row is
/// `1/(2k-1)`.
pub fn v_mixed(d: usize, s: usize, variant: DetmixVariant) -> Result<Rational> {
    // The odd-degree range is checked first so that its diagnostic wins over
    // the generic signature bound.
    if d % 2 == 1 && s > d / 2 {
        return Err(Error::OddDegreeRange { d, s, max: d / 2 });
    }
    Signature::new(d, s)?;
    if d.is_multiple_of(2) {
        let n = d / 2;
        let mut sum = Rational::zero();
        for set in subsets_of_size(n, s) {
            let m = RationalMatrix::from_fn(n, |j, k| {
                let (j, k) = (j + 1, k + 1);
                let special = match variant {
                    DetmixVariant::Rows => set.contains(j),
                    DetmixVariant::Cols => set.contains(k),
                };
                if special {
                    complex_entry(j, k)
                } else {
                    real_entry(j, k)
                }
            });
            sum += m.det();
        }
        Ok(pow2_rat(2 * n + s) * sum)
    } else {
        let n = d.div_ceil(2);
        if variant == DetmixVariant::Cols {
            return Err(Error::NeedsEvenDegree { method: "cols", d });
        }
        let mut sum = Rational::zero();
        for set in subsets_of_size(n - 1, s) {
            let m = RationalMatrix::from_fn(n, |j, k| {
                let (j, k) = (j + 1, k + 1);
                if j == n {
                    rat(1, 2 * k as i64 - 1)
                } else if set.contains(j) {
                    complex_entry(j, k)
                } else {
                    real_entry(j, k)
                }
            });
            sum += m.det();
        }
        Ok(pow2_rat(2 * n + s - 1) * sum)
    }
}

/// `sum_{K subset {1..m}} C(m-|K|, s-|K|) (-1)^(s+|K|) term(K)`, subsets in
/// ascending bitmask order. Subsets larger than `s` have zero weight.
fn signed_subset_sum(m: usize, s: usize, term: impl Fn(&IndexSet) -> Rational) -> Rational {
    let mut total = Rational::zero();
    for mask in 0..1u64 << m {
        let set = IndexSet::from_mask(mask, m);
        let size = set.len();
        if size > s {
            continue;
        }
        let mut weight = binomial((m - size) as i64, (s - size) as i64);
        if (s + size) % 2 == 1 {
            weight = -weight;
        }
        total += rat_int(weight) * term(&set);
    }
    total
}

fn squared_quotients(set: &IndexSet, shift: i64) -> Rational {
    let v = set.as_slice();
    let mut acc = Rational::one();
    for (a, &j) in v.iter().enumerate() {
        for &k in &v[a + 1..] {
            let (j, k) = (j as i64, k as i64);
            acc *= rat((k - j) * (k - j), (k + j + shift) * (k + j + shift));
        }
    }
    acc
}

fn trinomial_term(d: usize, set: &IndexSet) -> Rational {
    let d = d as u64;
    let mut acc = Rational::one();
    for k in set.iter().map(|k| k as u64) {
        let t = trinomial(d + 2 * k, d - 2 * k, 2 * k, 2 * k).expect("parts sum to d + 2k");
        acc *= Rational::new(t, Integer::from(2));
    }
    acc * squared_quotients(set, 0)
}

fn hilbert_term(d: usize, set: &IndexSet) -> Rational {
    let d = d as i64;
    let weight: Integer = set
        .iter()
        .map(|k| {
            let k = k as i64;
            binomial(d + 2 * k, 4 * k) * binomial(4 * k - 1, 2 * k - 1) * (2 * k)
        })
        .product();
    rat_int(weight) * hilbert_minor(set, HilbertShift::Zero)
}

fn binomdet_matrix(d: usize, set: &IndexSet, shift: i64) -> Vec<Vec<Integer>> {
    let d = d as i64;
    set.iter()
        .map(|j| {
            set.iter()
                .map(|k| {
                    let (j, k) = (j as i64, k as i64);
                    binomial(d + 2 * j + shift, 2 * j + 2 * k + 2 * shift)
                        * binomial(2 * j + 2 * k - 1 + 2 * shift, 2 * j - 1 + shift)
                })
                .collect()
        })
        .collect()
}

fn binomdet_term(d: usize, set: &IndexSet) -> Rational {
    rat_int(det_integer(binomdet_matrix(d, set, 0)))
}

/// Even `d = 2n`, Hilbert-minor form built on `(1/(j+k-1))`.
fn evenalt_hilbert_term(d: usize, set: &IndexSet) -> Rational {
    let d = d as i64;
    let weight: Integer = set
        .iter()
        .map(|k| {
            let k = k as i64;
            binomial(d + 2 * k - 1, 4 * k - 2) * binomial(4 * k - 3, 2 * k - 1) * (2 * k - 1)
        })
        .product();
    rat_int(weight) * hilbert_minor(set, HilbertShift::MinusOne)
}

fn evenalt_trinomial_term(d: usize, set: &IndexSet) -> Rational {
    let d = d as u64;
    let mut acc = Rational::one();
    for k in set.iter().map(|k| k as u64) {
        let t = trinomial(d + 2 * k - 1, d - 2 * k + 1, 2 * k - 1, 2 * k - 1)
            .expect("parts sum to d + 2k - 1");
        acc *= Rational::new(t, Integer::from(2));
    }
    acc * squared_quotients(set, -1)
}

fn evenalt_det_term(d: usize, set: &IndexSet) -> Rational {
    // C(2n+2j-1, 2j+2k-2) C(2j+2k-3, 2j-2) is the shift -1/2 of the binomdet
    // entry pattern; spelled out for clarity.
    let d = d as i64;
    let rows: Vec<Vec<Integer>> = set
        .iter()
        .map(|j| {
            set.iter()
                .map(|k| {
                    let (j, k) = (j as i64, k as i64);
                    binomial(d + 2 * j - 1, 2 * j + 2 * k - 2)
                        * binomial(2 * j + 2 * k - 3, 2 * j - 2)
                })
                .collect()
        })
        .collect();
    rat_int(det_integer(rows))
}

/// The three even-degree alternative forms (trinomial, Hilbert minor with
/// shift -1, integer determinant), in that order.
pub fn ratio_evenalt_forms(d: usize, s: usize) -> Result<[Rational; 3]> {
    Signature::new(d, s)?;
    if !d.is_multiple_of(2) {
        return Err(Error::NeedsEvenDegree {
            method: "evenalt",
            d,
        });
    }
    let m = d / 2;
    Ok([
        signed_subset_sum(m, s, |k| evenalt_trinomial_term(d, k)),
        signed_subset_sum(m, s, |k| evenalt_hilbert_term(d, k)),
        signed_subset_sum(m, s, |k| evenalt_det_term(d, k)),
    ])
}

/// `v_d^(s) / v_d^(0)` by the chosen formula path.
pub fn ratio(d: usize, s: usize, method: RatioMethod) -> Result<Rational> {
    // v_mixed validates its own range, with a more specific diagnostic.
    if method != RatioMethod::Detmix {
        Signature::new(d, s)?;
    }
    let m = d / 2;
    match method {
        RatioMethod::Trinomial => Ok(signed_subset_sum(m, s, |k| trinomial_term(d, k))),
        RatioMethod::Hilbert => Ok(signed_subset_sum(m, s, |k| hilbert_term(d, k))),
        RatioMethod::Binomdet => Ok(signed_subset_sum(m, s, |k| binomdet_term(d, k))),
        RatioMethod::Evenalt => {
            if !d.is_multiple_of(2) {
                return Err(Error::NeedsEvenDegree {
                    method: "evenalt",
                    d,
                });
            }
            Ok(signed_subset_sum(m, s, |k| evenalt_hilbert_term(d, k)))
        }
        RatioMethod::Detmix => Ok(v_mixed(d, s, DetmixVariant::Rows)? / v_real(d)?),
        RatioMethod::Legendre => {
            if s != 1 {
                return Err(Error::NeedsOnePair {
                    method: "legendre",
                    s,
                });
            }
            ratio_legendre_s1(d)
        }
    }
}

/// `(P_d(3) - 2d - 1) / 4`; zero at `d = 1`, where no pair fits.
pub fn ratio_legendre_s1(d: usize) -> Result<Rational> {
    check_degree(d)?;
    let p = legendre_eval(d as u64, &rat(3, 1));
    Ok((p - rat(2 * d as i64 + 1, 1)) / rat(4, 1))
}

/// `v_d / v_d^(0)`, the sum of all ratios at degree `d`.
pub fn total_ratio(d: usize, method: TotalRatioMethod) -> Result<Rational> {
    check_degree(d)?;
    match method {
        TotalRatioMethod::Closed => {
            let n = d.div_ceil(2) as i64;
            let central = |j: i64| rat_int(binomial(2 * j, j));
            let top = if d.is_multiple_of(2) {
                n + 1..=2 * n
            } else {
                n..=2 * n - 1
            };
            let mut v = Rational::new(Integer::one(), pow2(n as u32));
            for j in top {
                v *= central(j);
            }
            for j in 1..n {
                v /= central(j);
            }
            Ok(v)
        }
        TotalRatioMethod::Det => Ok(rat_int(det_integer(binomdet_matrix(
            d,
            &IndexSet::full(d / 2),
            0,
        )))),
    }
}

/// `v_d^(s)` by the requested path.
pub fn volume(d: usize, s: usize, method: VolumeMethod) -> Result<VolumeRecord> {
    let signature = Signature::new(d, s)?;
    let value = match method {
        VolumeMethod::Ratio(m) => v_real(d)? * ratio(d, s, m)?,
        VolumeMethod::Detmix(variant) => v_mixed(d, s, variant)?,
        VolumeMethod::TotallyComplex(m) => {
            if d != 2 * s {
                return Err(Error::NeedsTotallyComplex {
                    method: method.name(),
                    d,
                    s,
                });
            }
            v_totally_complex(s, m)?
        }
    };
    Ok(VolumeRecord {
        signature,
        value,
        method,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RowChecksum {
    pub d: usize,
    pub sum: Rational,
    pub full: Rational,
}

impl RowChecksum {
    pub fn matches(&self) -> bool {
        self.sum == self.full
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VolumeTable {
    /// Ordered by `(d, s)`.
    pub records: Vec<VolumeRecord>,
    pub rows: Vec<RowChecksum>,
}

/// Every `v_d^(s)` for `d <= d_max` as `v_real(d) * ratio(d, s, binomdet)`,
/// plus a per-degree check that the strata add up to the full volume.
pub fn volume_table(d_max: usize, exec: Exec) -> Result<VolumeTable> {
    check_degree(d_max)?;
    let cells: Vec<(usize, usize)> = (1..=d_max)
        .flat_map(|d| (0..=d / 2).map(move |s| (d, s)))
        .collect();
    let method = VolumeMethod::Ratio(RatioMethod::Binomdet);
    let records = exec
        .map(cells, |(d, s)| volume(d, s, method))
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
    let mut rows = Vec::with_capacity(d_max);
    for d in 1..=d_max {
        let sum = records
            .iter()
            .filter(|r| r.signature.d() == d)
            .map(|r| &r.value)
            .sum();
        rows.push(RowChecksum {
            d,
            sum,
            full: v_full(d)?,
        });
    }
    Ok(VolumeTable { records, rows })
}
