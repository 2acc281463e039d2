//! Invariant suites behind `scvol verify`. Every check is exact; random points
//! come from fixed seeds so failures reproduce.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::exact::{binomial, format_rational, is_integer, rat, rat_int, IndexSet, Rational};
use crate::identities::{
    conv_h_lhs, conv_h_rhs, conv_s_lhs, conv_s_rhs, convolution_recurrence_rhs, h_closed, h_perm,
    oe_sign, parity_split, s_closed, s_perm, RationalPoint,
};
use crate::linalg::ds_minor;
use crate::par::Exec;
use crate::volumes::{
    ratio, total_ratio, v_full, v_mixed, v_real, v_real_det, v_real_even_closed, v_totally_complex,
    DetmixVariant, RatioMethod, TotalRatioMethod, TotallyComplexMethod,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Suite {
    Identities,
    Convolution,
    Signs,
    Volumes,
    Integrality,
    All,
}

impl Suite {
    pub const EACH: [Suite; 5] = [
        Suite::Identities,
        Suite::Convolution,
        Suite::Signs,
        Suite::Volumes,
        Suite::Integrality,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Identities => "identities",
            Suite::Convolution => "convolution",
            Suite::Signs => "signs",
            Suite::Volumes => "volumes",
            Suite::Integrality => "integrality",
            Suite::All => "all",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        Suite::EACH
            .into_iter()
            .chain([Suite::All])
            .find(|x| x.name() == s)
            .ok_or_else(|| format!("unknown suite `{s}`"))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckResult {
    pub suite: &'static str,
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

fn check(
    suite: &'static str,
    name: impl Into<String>,
    failures: Vec<String>,
    cases: usize,
) -> CheckResult {
    let passed = failures.is_empty();
    let detail = if passed {
        format!("{cases} cases")
    } else {
        format!(
            "{} of {cases} cases failed; first: {}",
            failures.len(),
            failures[0]
        )
    };
    CheckResult {
        suite,
        name: name.into(),
        passed,
        detail,
    }
}

pub fn run_suite(suite: Suite, exec: Exec) -> Vec<CheckResult> {
    match suite {
        Suite::Identities => identities_suite(),
        Suite::Convolution => convolution_suite(),
        Suite::Signs => signs_suite(),
        Suite::Volumes => volumes_suite(exec),
        Suite::Integrality => integrality_suite(exec),
        Suite::All => Suite::EACH
            .into_iter()
            .flat_map(|s| run_suite(s, exec))
            .collect(),
    }
}

/// Rational in `(-1, 1) \ {0}`: numerator in `[-9, 9] \ {0}`, denominator in
/// `[10, 19]`.
pub fn random_coordinate(rng: &mut impl Rng) -> Rational {
    let mut n = rng.gen_range(1..=9i64);
    if rng.gen_bool(0.5) {
        n = -n;
    }
    rat(n, rng.gen_range(10..=19i64))
}

pub fn random_point(rng: &mut impl Rng, r: usize) -> RationalPoint {
    RationalPoint((0..r).map(|_| random_coordinate(rng)).collect())
}

/// Evaluates `lhs` and `rhs` at `count` random points of size `r`,
/// redrawing points where either side is undefined.
fn compare_at_points(
    seed: u64,
    r: usize,
    count: usize,
    lhs: impl Fn(&RationalPoint) -> Result<Rational>,
    rhs: impl Fn(&RationalPoint) -> Result<Rational>,
) -> Vec<String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut failures = Vec::new();
    let mut done = 0;
    while done < count {
        let x = random_point(&mut rng, r);
        let (Ok(a), Ok(b)) = (lhs(&x), rhs(&x)) else {
            continue;
        };
        if a != b {
            let coords: Vec<String> = x.iter().map(format_rational).collect();
            failures.push(format!(
                "r={r} at [{}]: {} vs {}",
                coords.join(", "),
                format_rational(&a),
                format_rational(&b)
            ));
        }
        done += 1;
    }
    failures
}

fn swapped(x: &RationalPoint) -> RationalPoint {
    let mut v = x.0.clone();
    v.swap(0, 1);
    RationalPoint(v)
}

fn identities_suite() -> Vec<CheckResult> {
    const S: &str = "identities";
    let mut out = Vec::new();
    let mut h = Vec::new();
    let mut s = Vec::new();
    let mut anti = Vec::new();
    for r in 0..=6 {
        h.extend(compare_at_points(100 + r as u64, r, 100, h_perm, |x| {
            h_closed(x)
        }));
        s.extend(compare_at_points(200 + r as u64, r, 100, s_perm, |y| {
            s_closed(y)
        }));
        if r >= 2 {
            anti.extend(compare_at_points(
                300 + r as u64,
                r,
                100,
                |x| h_closed(&swapped(x)),
                |x| h_closed(x).map(|v| -v),
            ));
            anti.extend(compare_at_points(
                400 + r as u64,
                r,
                100,
                |y| s_closed(&swapped(y)),
                |y| s_closed(y).map(|v| -v),
            ));
        }
    }
    out.push(check(S, "h_perm = h_closed, r <= 6", h, 700));
    out.push(check(S, "s_perm = s_closed, r <= 6", s, 700));
    out.push(check(S, "closed forms are antisymmetric", anti, 1000));
    out
}

fn convolution_suite() -> Vec<CheckResult> {
    const S: &str = "convolution";
    let mut h = Vec::new();
    let mut s = Vec::new();
    for r in 0..=8 {
        h.extend(compare_at_points(500 + r as u64, r, 50, conv_h_lhs, |x| {
            conv_h_rhs(x)
        }));
        s.extend(compare_at_points(600 + r as u64, r, 50, conv_s_lhs, |y| {
            conv_s_rhs(y)
        }));
    }
    let mut rec = Vec::new();
    if conv_h_rhs(&[rat(1, 3)]).ok() != Some(rat(2, 1)) {
        rec.push("g_1 != 2".to_string());
    }
    for r in 2..=6 {
        rec.extend(compare_at_points(
            700 + r as u64,
            r,
            20,
            |x| conv_h_rhs(x),
            |x| convolution_recurrence_rhs(x, conv_h_rhs),
        ));
        rec.extend(compare_at_points(800 + r as u64, r, 20, conv_h_lhs, |x| {
            convolution_recurrence_rhs(x, |y| conv_h_lhs(&RationalPoint(y.to_vec())))
        }));
    }
    vec![
        check(S, "H convolution, r <= 8", h, 450),
        check(S, "S convolution, r <= 8", s, 450),
        check(S, "degree-lowering recurrence, 2 <= r <= 6", rec, 201),
    ]
}

/// For parity-balanced `M` in `{1..2nu}` with complement `N` split into
/// `(N1, N2)`: `oe(M) oe(N) = (-1)^(sum N1 + sum N2)`.
pub fn sign_identity_failures(nu: usize) -> (Vec<String>, usize) {
    let mut failures = Vec::new();
    let mut cases = 0;
    let n = 2 * nu;
    for mask in 0..1u64 << n {
        let m = IndexSet::from_mask(mask, n);
        if !parity_split(&m).is_balanced() {
            continue;
        }
        cases += 1;
        let comp = m.complement(n);
        let split = parity_split(&comp);
        let exponent = split.even_part.sum() + split.odd_part.sum();
        let expected = if exponent.is_multiple_of(2) { 1 } else { -1 };
        match (oe_sign(&m), oe_sign(&comp)) {
            (Ok(a), Ok(b)) if a * b == expected => {}
            (a, b) => failures.push(format!("nu={nu} M={m}: {a:?} * {b:?} vs {expected}")),
        }
    }
    (failures, cases)
}

fn signs_suite() -> Vec<CheckResult> {
    let mut failures = Vec::new();
    let mut cases = 0;
    for nu in 1..=5 {
        let (f, c) = sign_identity_failures(nu);
        failures.extend(f);
        cases += c;
    }
    let mut split = Vec::new();
    for mask in 0..1u64 << 10 {
        let x = IndexSet::from_mask(mask, 10);
        if parity_split(&x).rejoin() != x {
            split.push(format!("{x}"));
        }
    }
    vec![
        check("signs", "oe sign product identity, nu <= 5", failures, cases),
        check(
            "signs",
            "parity split rejoins, subsets of {1..10}",
            split,
            1024,
        ),
    ]
}

fn cells(d_max: usize) -> Vec<(usize, usize)> {
    (1..=d_max)
        .flat_map(|d| (0..=d / 2).map(move |s| (d, s)))
        .collect()
}

fn collect_failures(results: Vec<Option<String>>) -> (Vec<String>, usize) {
    let n = results.len();
    (results.into_iter().flatten().collect(), n)
}

fn err_text(e: impl fmt::Display) -> Option<String> {
    Some(e.to_string())
}

/// All applicable ratio paths at `(d, s)` agree; returns the disagreement.
pub fn ratio_disagreement(d: usize, s: usize) -> Option<String> {
    let base = match ratio(d, s, RatioMethod::Binomdet) {
        Ok(v) => v,
        Err(e) => return err_text(e),
    };
    for m in RatioMethod::ALL {
        if !m.applies(d, s) {
            continue;
        }
        match ratio(d, s, m) {
            Ok(v) if v == base => {}
            Ok(v) => {
                return Some(format!(
                    "d={d} s={s}: {m} gives {} but binomdet gives {}",
                    format_rational(&v),
                    format_rational(&base)
                ))
            }
            Err(e) => return Some(format!("d={d} s={s}: {m}: {e}")),
        }
    }
    None
}

fn volumes_suite(exec: Exec) -> Vec<CheckResult> {
    const S: &str = "volumes";
    let mut out = Vec::new();

    let (f, n) = collect_failures(exec.map(cells(12), |(d, s)| ratio_disagreement(d, s)));
    out.push(check(S, "ratio paths agree, d <= 12", f, n));

    let (f, n) = collect_failures(exec.map((1..=6).collect(), |s: usize| {
        let expected = rat_int(
            crate::exact::pow2((2 * s * (s - 1)) as u32) * binomial(2 * s as i64, s as i64),
        );
        RatioMethod::ALL
            .into_iter()
            .filter(|m| m.applies(2 * s, s))
            .find_map(|m| match ratio(2 * s, s, m) {
                Ok(v) if v == expected => None,
                Ok(v) => Some(format!("s={s} {m}: {}", format_rational(&v))),
                Err(e) => Some(format!("s={s} {m}: {e}")),
            })
    }));
    out.push(check(S, "totally complex ratio closed form, s <= 6", f, n));

    let (f, n) = collect_failures(exec.map((1..=12).collect(), |d: usize| {
        let sum: Result<Rational> = (0..=d / 2)
            .map(|s| Ok(v_real(d)? * ratio(d, s, RatioMethod::Binomdet)?))
            .sum();
        match (sum, v_full(d)) {
            (Ok(a), Ok(b)) if a == b => None,
            (a, b) => Some(format!("d={d}: {a:?} vs {b:?}")),
        }
    }));
    out.push(check(S, "strata sum to the full volume, d <= 12", f, n));

    let (f, n) = collect_failures(exec.map((1..=12).collect(), |d: usize| {
        match (v_real(d), v_real_det(d)) {
            (Ok(a), Ok(b)) if a == b => None,
            (a, b) => Some(format!("d={d}: {a:?} vs {b:?}")),
        }
    }));
    out.push(check(
        S,
        "totally real product = determinant, d <= 12",
        f,
        n,
    ));

    let f: Vec<String> = (1..=6)
        .filter_map(|s| match (v_real(2 * s), v_real_even_closed(s)) {
            (Ok(a), Ok(b)) if a == b => None,
            (a, b) => Some(format!("s={s}: {a:?} vs {b:?}")),
        })
        .collect();
    out.push(check(S, "even totally real closed form, s <= 6", f, 6));

    let f: Vec<String> = (1..=6)
        .filter_map(|s| {
            match (
                v_totally_complex(s, TotallyComplexMethod::Closed),
                v_totally_complex(s, TotallyComplexMethod::Determinant),
            ) {
                (Ok(a), Ok(b)) if a == b => None,
                (a, b) => Some(format!("s={s}: {a:?} vs {b:?}")),
            }
        })
        .collect();
    out.push(check(
        S,
        "totally complex closed = determinant, s <= 6",
        f,
        6,
    ));

    let f: Vec<String> = (1..=8)
        .filter_map(|s| {
            let full = |t: usize| ds_minor(t, &IndexSet::full(t), &IndexSet::full(t));
            let expected = Rational::new(
                crate::exact::pow2(8 * s as u32),
                crate::exact::int(((s + 1) * (s + 1)) as i64)
                    * binomial(4 * s as i64 + 3, 2 * s as i64 + 1)
                    * binomial(4 * s as i64 + 1, 2 * s as i64),
            );
            match (full(s + 1), full(s)) {
                (Ok(a), Ok(b)) if &a / &b == expected => None,
                _ => Some(format!("s={s}")),
            }
        })
        .collect();
    out.push(check(S, "D_s quotient recurrence, s <= 8", f, 8));

    let even: Vec<(usize, usize)> = (1..=5).flat_map(|n| (0..=n).map(move |s| (n, s))).collect();
    let (f, n) = collect_failures(exec.map(even, |(n, s)| {
        match (
            v_mixed(2 * n, s, DetmixVariant::Rows),
            v_mixed(2 * n, s, DetmixVariant::Cols),
        ) {
            (Ok(a), Ok(b)) if a == b => None,
            (a, b) => Some(format!("n={n} s={s}: {a:?} vs {b:?}")),
        }
    }));
    out.push(check(S, "mixed determinant rows = cols, n <= 5", f, n));

    let in_range: Vec<(usize, usize)> = cells(12)
        .into_iter()
        .filter(|&(d, s)| RatioMethod::Detmix.applies(d, s))
        .collect();
    let (f, n) = collect_failures(exec.map(in_range, |(d, s)| {
        let lhs = v_mixed(d, s, DetmixVariant::Rows);
        let rhs = v_real(d).and_then(|v| Ok(v * ratio(d, s, RatioMethod::Binomdet)?));
        match (lhs, rhs) {
            (Ok(a), Ok(b)) if a == b => None,
            (a, b) => Some(format!("d={d} s={s}: {a:?} vs {b:?}")),
        }
    }));
    out.push(check(
        S,
        "mixed determinant sum = v_real * ratio, d <= 12",
        f,
        n,
    ));
    out
}

fn integrality_suite(exec: Exec) -> Vec<CheckResult> {
    const S: &str = "integrality";
    let (f, n) = collect_failures(exec.map(cells(12), |(d, s)| {
        match ratio(d, s, RatioMethod::Binomdet) {
            Ok(v) if is_integer(&v) && v >= Rational::from_integer(0.into()) => None,
            Ok(v) => Some(format!("d={d} s={s}: {}", format_rational(&v))),
            Err(e) => Some(format!("d={d} s={s}: {e}")),
        }
    }));
    let mut out = vec![check(S, "ratios are nonnegative integers, d <= 12", f, n)];
    let f: Vec<String> = (1..=12)
        .filter_map(|d| {
            match (
                total_ratio(d, TotalRatioMethod::Closed),
                total_ratio(d, TotalRatioMethod::Det),
            ) {
                (Ok(a), Ok(b)) if a == b && is_integer(&a) => None,
                (a, b) => Some(format!("d={d}: {a:?} vs {b:?}")),
            }
        })
        .collect();
    out.push(check(
        S,
        "total ratio integral, closed = det, d <= 12",
        f,
        12,
    ));
    out
}
