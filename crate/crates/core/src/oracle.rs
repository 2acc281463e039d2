//! Independent numerical check of the exact volumes: an exact Schur-Cohn
//! contractivity test, Sturm-sequence real-root counting, and a seeded
//! Monte-Carlo estimator over the coefficient box.
//!
//! Polynomials are handled internally as integer coefficient vectors in
//! ascending powers, so every classification is exact.

use num_integer::Integer as _;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::exact::{binomial, to_f64, Integer, Rational};
use crate::par::Exec;

/// `X^d + a_1 X^(d-1) + ... + a_d`, stored as `(a_1, ..., a_d)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RealPolynomial {
    coeffs: Vec<Rational>,
}

impl RealPolynomial {
    pub fn new(coeffs: Vec<Rational>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::ZeroDegree);
        }
        Ok(RealPolynomial { coeffs })
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    /// The polynomial whose roots are the negated roots: `a_i -> (-1)^i a_i`.
    pub fn negate_roots(&self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, a)| if i % 2 == 0 { -a } else { a.clone() })
            .collect();
        RealPolynomial { coeffs }
    }

    /// Integer multiple with positive leading coefficient, ascending powers.
    fn to_integer(&self) -> Vec<Integer> {
        let lcm = self
            .coeffs
            .iter()
            .fold(Integer::one(), |acc, a| acc.lcm(a.denom()));
        let mut c: Vec<Integer> = self
            .coeffs
            .iter()
            .rev()
            .map(|a| a.numer() * (&lcm / a.denom()))
            .collect();
        c.push(lcm);
        c
    }
}

/// Result of classifying a polynomial by its roots.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Classification {
    /// `real` real roots and `pairs` conjugate pairs of nonreal roots.
    Signature { real: usize, pairs: usize },
    /// A repeated root; the signature is not stable under perturbation.
    Degenerate,
}

pub fn is_contractive(p: &RealPolynomial) -> bool {
    schur_cohn(p.to_integer())
}

/// Number of distinct real roots.
pub fn real_root_count(p: &RealPolynomial) -> usize {
    let c = p.to_integer();
    let g = poly_gcd(&c, &derivative(&c));
    let squarefree = exact_quotient(&c, &g);
    sign_changes_at_infinity(&sturm_chain(squarefree))
}

pub fn signature_of(p: &RealPolynomial) -> Classification {
    classify(p.to_integer())
}

fn trim(mut c: Vec<Integer>) -> Vec<Integer> {
    while c.len() > 1 && c.last().is_some_and(Zero::is_zero) {
        c.pop();
    }
    c
}

fn is_zero_poly(c: &[Integer]) -> bool {
    c.iter().all(Zero::is_zero)
}

fn content(c: &[Integer]) -> Integer {
    c.iter().fold(Integer::zero(), |g, x| g.gcd(x))
}

/// Divides out the (positive) content; signs are preserved.
fn primitive(mut c: Vec<Integer>) -> Vec<Integer> {
    let g = content(&c);
    if !g.is_zero() && !g.is_one() {
        for x in &mut c {
            *x /= &g;
        }
    }
    c
}

fn derivative(c: &[Integer]) -> Vec<Integer> {
    if c.len() <= 1 {
        return vec![Integer::zero()];
    }
    trim(
        c.iter()
            .enumerate()
            .skip(1)
            .map(|(i, x)| x * Integer::from(i))
            .collect(),
    )
}

/// Contractivity by the Schur-Cohn reduction
/// `q_(i-1) = c_d c_i - c_0 c_(d-i)`, which requires `|c_0| < |c_d|` at every
/// step. Points on the boundary fail.
fn schur_cohn(mut c: Vec<Integer>) -> bool {
    loop {
        let d = c.len() - 1;
        if d == 0 {
            return !c[0].is_zero();
        }
        if c[0].abs() >= c[d].abs() {
            return false;
        }
        let q: Vec<Integer> = (1..=d).map(|i| &c[d] * &c[i] - &c[0] * &c[d - i]).collect();
        if is_zero_poly(&q) {
            return false;
        }
        c = primitive(trim(q));
    }
}

/// Remainder `r` of `a` by `b` with `lc(b)^m a = q b + r`, sign-corrected so
/// that `r` is a positive multiple of the true remainder.
fn pseudo_remainder(a: &[Integer], b: &[Integer]) -> Vec<Integer> {
    let db = b.len() - 1;
    let lb = &b[db];
    let mut r = a.to_vec();
    let mut steps = 0u32;
    while r.len() > db && !is_zero_poly(&r) {
        let dr = r.len() - 1;
        let lr = r[dr].clone();
        for x in &mut r {
            *x *= lb;
        }
        for (i, bi) in b.iter().enumerate() {
            r[dr - db + i] -= &lr * bi;
        }
        r = trim(r);
        steps += 1;
    }
    if lb.is_negative() && steps % 2 == 1 {
        for x in &mut r {
            *x = -x.clone();
        }
    }
    r
}

fn poly_gcd(a: &[Integer], b: &[Integer]) -> Vec<Integer> {
    let (mut a, mut b) = (primitive(a.to_vec()), primitive(b.to_vec()));
    while !is_zero_poly(&b) {
        let r = primitive(pseudo_remainder(&a, &b));
        a = b;
        b = r;
    }
    a
}

/// `a / b` when `b` divides `a`; integer division is exact at every step
/// because `b` is primitive.
fn exact_quotient(a: &[Integer], b: &[Integer]) -> Vec<Integer> {
    let db = b.len() - 1;
    if db == 0 {
        return a.iter().map(|x| x / &b[0]).collect();
    }
    let mut r = a.to_vec();
    let mut q = vec![Integer::zero(); a.len() - db];
    for k in (0..q.len()).rev() {
        let coef = &r[k + db] / &b[db];
        for (i, bi) in b.iter().enumerate() {
            r[k + i] -= &coef * bi;
        }
        q[k] = coef;
    }
    trim(q)
}

/// `p, p', -rem(p, p'), ...` up to positive factors, ending at the last
/// nonzero term.
fn sturm_chain(p: Vec<Integer>) -> Vec<Vec<Integer>> {
    let p = primitive(p);
    let dp = primitive(derivative(&p));
    let mut chain = vec![p];
    if is_zero_poly(&dp) {
        return chain;
    }
    chain.push(dp);
    loop {
        let n = chain.len();
        let mut r = pseudo_remainder(&chain[n - 2], &chain[n - 1]);
        if is_zero_poly(&r) {
            return chain;
        }
        for x in &mut r {
            *x = -x.clone();
        }
        chain.push(primitive(r));
    }
}

fn count_changes(signs: impl Iterator<Item = i8>) -> usize {
    let mut last = 0i8;
    let mut changes = 0;
    for s in signs.filter(|&s| s != 0) {
        if last != 0 && s != last {
            changes += 1;
        }
        last = s;
    }
    changes
}

/// `V(-inf) - V(+inf)`.
fn sign_changes_at_infinity(chain: &[Vec<Integer>]) -> usize {
    let sign = |x: &Integer| if x.is_negative() { -1i8 } else { 1 };
    let at_plus = chain.iter().map(|c| sign(c.last().unwrap()));
    let at_minus = chain.iter().map(|c| {
        let s = sign(c.last().unwrap());
        if (c.len() - 1) % 2 == 1 {
            -s
        } else {
            s
        }
    });
    count_changes(at_minus) - count_changes(at_plus)
}

fn classify(c: Vec<Integer>) -> Classification {
    let d = c.len() - 1;
    let chain = sturm_chain(c);
    // The last chain element is gcd(p, p') up to a constant.
    if chain.last().is_some_and(|g| g.len() > 1) {
        return Classification::Degenerate;
    }
    let real = sign_changes_at_infinity(&chain);
    Classification::Signature {
        real,
        pairs: (d - real) / 2,
    }
}

/// Cheap necessary conditions for contractivity: `p(1) > 0` and
/// `(-1)^d p(-1) > 0`.
fn passes_endpoint_signs(c: &[Integer]) -> bool {
    let at_one: Integer = c.iter().sum();
    let at_minus_one: Integer = c
        .iter()
        .enumerate()
        .map(|(i, x)| if i % 2 == 0 { x.clone() } else { -x })
        .sum();
    let d = c.len() - 1;
    at_one.is_positive()
        && if d.is_multiple_of(2) {
            at_minus_one.is_positive()
        } else {
            at_minus_one.is_negative()
        }
}

/// Samples are drawn in chunks of this size; chunk `k` has its own stream.
pub const MC_CHUNK: u64 = 8192;

const SIGNIFICAND_BITS: u32 = 53;

#[derive(Clone, Debug, PartialEq)]
pub struct McStratum {
    pub s: usize,
    pub hits: u64,
    pub estimate: f64,
    pub stderr: f64,
}

impl McStratum {
    /// Distance from `exact` in standard errors; a zero standard error gives
    /// 0 on an exact match and infinity otherwise.
    pub fn z_score(&self, exact: &Rational) -> f64 {
        z_score(self.estimate, self.stderr, to_f64(exact))
    }
}

pub fn z_score(estimate: f64, stderr: f64, exact: f64) -> f64 {
    let diff = estimate - exact;
    if stderr > 0.0 {
        diff / stderr
    } else if diff == 0.0 {
        0.0
    } else {
        f64::INFINITY
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct McReport {
    pub d: usize,
    pub samples: u64,
    pub seed: u64,
    pub box_volume: Rational,
    pub per_s: Vec<McStratum>,
    /// Samples outside the region.
    pub misses: u64,
    /// Samples with a repeated root, excluded from every stratum.
    pub degenerate: u64,
}

impl McReport {
    /// Estimate and binomial standard error of the whole region's volume.
    pub fn total(&self) -> (f64, f64) {
        let hits = self.per_s.iter().map(|x| x.hits).sum();
        proportion_estimate(to_f64(&self.box_volume), hits, self.samples)
    }
}

fn proportion_estimate(box_volume: f64, hits: u64, n: u64) -> (f64, f64) {
    let p = hits as f64 / n as f64;
    (
        box_volume * p,
        box_volume * (p * (1.0 - p) / n as f64).sqrt(),
    )
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
struct Tally {
    hits: Vec<u64>,
    misses: u64,
    degenerate: u64,
}

impl Tally {
    fn new(strata: usize) -> Self {
        Tally {
            hits: vec![0; strata],
            misses: 0,
            degenerate: 0,
        }
    }

    fn merge(mut self, other: Tally) -> Tally {
        for (a, b) in self.hits.iter_mut().zip(other.hits) {
            *a += b;
        }
        self.misses += other.misses;
        self.degenerate += other.degenerate;
        self
    }
}

fn run_chunk(d: usize, seed: u64, chunk: u64, count: u64, bounds: &[Integer]) -> Tally {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(chunk);
    let half = Integer::one() << (SIGNIFICAND_BITS - 1);
    let mut tally = Tally::new(d / 2 + 1);
    let mut c = vec![Integer::zero(); d + 1];
    for _ in 0..count {
        // a_i = b_i (m - 2^52) / 2^52 with m uniform on [0, 2^53), scaled by
        // 2^52 to integer coefficients.
        c[d] = half.clone();
        for i in 1..=d {
            let m: u64 = rng.gen_range(0..1u64 << SIGNIFICAND_BITS);
            c[d - i] = &bounds[i] * (Integer::from(m) - &half);
        }
        if !passes_endpoint_signs(&c) || !schur_cohn(trim(c.clone())) {
            tally.misses += 1;
            continue;
        }
        match classify(trim(c.clone())) {
            Classification::Signature { pairs, .. } => tally.hits[pairs] += 1,
            Classification::Degenerate => tally.degenerate += 1,
        }
    }
    tally
}

/// Monte-Carlo estimate of every `v_d^(s)` from `samples` uniform draws in
/// the box `prod_i [-C(d,i), C(d,i)]`. The report depends only on
/// `(d, samples, seed)`, never on `exec`.
pub fn mc_estimate(d: usize, samples: u64, seed: u64, exec: Exec) -> Result<McReport> {
    if d == 0 {
        return Err(Error::ZeroDegree);
    }
    if samples == 0 {
        return Err(Error::NoSamples);
    }
    let bounds: Vec<Integer> = (0..=d as i64).map(|i| binomial(d as i64, i)).collect();
    let box_volume: Integer = bounds[1..].iter().map(|b| b * 2).product();
    let box_volume = Rational::from_integer(box_volume);
    let chunks: Vec<u64> = (0..samples.div_ceil(MC_CHUNK)).collect();
    let tally = exec
        .map(chunks, |k| {
            let count = MC_CHUNK.min(samples - k * MC_CHUNK);
            run_chunk(d, seed, k, count, &bounds)
        })
        .into_iter()
        .fold(Tally::new(d / 2 + 1), Tally::merge);
    let bv = to_f64(&box_volume);
    let per_s = tally
        .hits
        .iter()
        .enumerate()
        .map(|(s, &hits)| {
            let (estimate, stderr) = proportion_estimate(bv, hits, samples);
            McStratum {
                s,
                hits,
                estimate,
                stderr,
            }
        })
        .collect();
    Ok(McReport {
        d,
        samples,
        seed,
        box_volume,
        per_s,
        misses: tally.misses,
        degenerate: tally.degenerate,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;
    use proptest::prelude::*;

    fn poly(a: &[(i64, i64)]) -> RealPolynomial {
        RealPolynomial::new(a.iter().map(|&(n, d)| rat(n, d)).collect()).unwrap()
    }

    #[test]
    fn contractivity_examples() {
        assert!(is_contractive(&poly(&[(0, 1), (0, 1)])));
        assert!(!is_contractive(&poly(&[(0, 1), (1, 1)])));
        assert!(!is_contractive(&poly(&[(3, 1), (0, 1)])));
        assert!(is_contractive(&poly(&[(0, 1)])));
        assert!(!is_contractive(&poly(&[(1, 1)])));
        // (x - 1/2)^3
        assert!(is_contractive(&poly(&[(-3, 2), (3, 4), (-1, 8)])));
        // (x - 1/2)(x^2 + 4/9)... roots of modulus 2/3
        assert!(is_contractive(&poly(&[(-1, 2), (4, 9), (-2, 9)])));
        // (x - 1/2)(x - 5/4)
        assert!(!is_contractive(&poly(&[(-7, 4), (5, 8)])));
    }

    #[test]
    fn root_count_examples() {
        assert_eq!(real_root_count(&poly(&[(0, 1), (1, 1)])), 0);
        assert_eq!(real_root_count(&poly(&[(0, 1), (-1, 4)])), 2);
        assert_eq!(real_root_count(&poly(&[(0, 1), (-1, 1), (0, 1)])), 3);
        // (x - 1)^2 (x + 2) = x^3 - 3x + 2: two distinct roots
        assert_eq!(real_root_count(&poly(&[(0, 1), (-3, 1), (2, 1)])), 2);
        // x^4 + 1
        assert_eq!(real_root_count(&poly(&[(0, 1), (0, 1), (0, 1), (1, 1)])), 0);
    }

    #[test]
    fn signature_examples() {
        assert_eq!(
            signature_of(&poly(&[(0, 1), (1, 1)])),
            Classification::Signature { real: 0, pairs: 1 }
        );
        assert_eq!(
            signature_of(&poly(&[(0, 1), (-1, 4), (0, 1)])),
            Classification::Signature { real: 3, pairs: 0 }
        );
        assert_eq!(
            signature_of(&poly(&[(0, 1), (0, 1)])),
            Classification::Degenerate
        );
        // (x^2 + 1)^2 has no real roots but is still degenerate.
        assert_eq!(
            signature_of(&poly(&[(0, 1), (2, 1), (0, 1), (1, 1)])),
            Classification::Degenerate
        );
    }

    fn small_rational() -> impl Strategy<Value = Rational> {
        (-40i64..=40, 1i64..=16).prop_map(|(n, d)| rat(n, d))
    }

    fn small_poly(max_degree: usize) -> impl Strategy<Value = RealPolynomial> {
        prop::collection::vec(small_rational(), 1..=max_degree)
            .prop_map(|c| RealPolynomial::new(c).unwrap())
    }

    proptest! {
        #[test]
        fn quadratic_matches_closed_conditions(a1 in small_rational(), a2 in small_rational()) {
            let p = RealPolynomial::new(vec![a1.clone(), a2.clone()]).unwrap();
            let one = Rational::one();
            let expected = a2.abs() < one && a1.abs() < &one + &a2;
            prop_assert_eq!(is_contractive(&p), expected);
        }

        #[test]
        fn contractivity_ignores_root_negation(p in small_poly(6)) {
            prop_assert_eq!(is_contractive(&p), is_contractive(&p.negate_roots()));
        }

        #[test]
        fn root_count_ignores_negation(p in small_poly(6)) {
            prop_assert_eq!(real_root_count(&p), real_root_count(&p.negate_roots()));
        }

        #[test]
        fn signature_parity(p in small_poly(7)) {
            if let Classification::Signature { real, pairs } = signature_of(&p) {
                prop_assert_eq!(real + 2 * pairs, p.degree());
                prop_assert_eq!(real, real_root_count(&p));
            }
        }

        /// Products of linear and quadratic factors with known roots.
        #[test]
        fn signature_of_built_polynomial(
            reals in prop::collection::btree_set(-20i64..=20, 0..4),
            quads in prop::collection::vec((-5i64..=5, 1i64..=6), 0..3),
        ) {
            prop_assume!(!reals.is_empty() || !quads.is_empty());
            // ascending coefficients of prod (x - r/4) prod ((x - u/4)^2 + (v/4)^2)
            let mut c = vec![Rational::one()];
            let mul = |c: &[Rational], f: &[Rational]| {
                let mut out = vec![Rational::zero(); c.len() + f.len() - 1];
                for (i, x) in c.iter().enumerate() {
                    for (j, y) in f.iter().enumerate() {
                        out[i + j] += x * y;
                    }
                }
                out
            };
            for &r in &reals {
                c = mul(&c, &[rat(-r, 4), Rational::one()]);
            }
            for &(u, v) in &quads {
                let (u, v) = (rat(u, 4), rat(v, 4));
                c = mul(&c, &[&u * &u + &v * &v, -(&u + &u), Rational::one()]);
            }
            let a: Vec<Rational> = c.iter().rev().skip(1).cloned().collect();
            let p = RealPolynomial::new(a).unwrap();
            let distinct_quads: std::collections::BTreeSet<_> = quads.iter().collect();
            let expected = if distinct_quads.len() < quads.len() {
                Classification::Degenerate
            } else {
                Classification::Signature { real: reals.len(), pairs: quads.len() }
            };
            prop_assert_eq!(signature_of(&p), expected);
            let all_inside = reals.iter().all(|r| r.abs() < 4)
                && quads.iter().all(|&(u, v)| u * u + v * v < 16);
            prop_assert_eq!(is_contractive(&p), all_inside);
        }
    }

    #[test]
    fn linear_box_is_the_region() {
        let report = mc_estimate(1, 1000, 7, Exec::Sequential).unwrap();
        assert_eq!(report.per_s.len(), 1);
        assert_eq!(
            report.per_s[0].hits + report.degenerate + report.misses,
            1000
        );
        assert_eq!(report.box_volume, rat(2, 1));
        assert!(report.per_s[0].hits >= 999);
    }

    #[test]
    fn report_is_execution_independent() {
        let a = mc_estimate(3, 30_000, 5, Exec::Sequential).unwrap();
        let b = mc_estimate(3, 30_000, 5, Exec::threads(3)).unwrap();
        let c = mc_estimate(3, 30_000, 5, Exec::threads(0)).unwrap();
        assert_eq!(a, b);
        assert_eq!(a, c);
        let total: u64 = a.per_s.iter().map(|x| x.hits).sum::<u64>() + a.misses + a.degenerate;
        assert_eq!(total, 30_000);
        assert_ne!(a, mc_estimate(3, 30_000, 6, Exec::Sequential).unwrap());
    }

    #[test]
    fn rejects_empty_runs() {
        assert_eq!(
            mc_estimate(0, 10, 1, Exec::Sequential),
            Err(Error::ZeroDegree)
        );
        assert_eq!(
            mc_estimate(2, 0, 1, Exec::Sequential),
            Err(Error::NoSamples)
        );
    }

    #[test]
    fn z_score_edges() {
        assert_eq!(z_score(2.0, 0.0, 2.0), 0.0);
        assert!(z_score(2.0, 0.0, 1.0).is_infinite());
        assert_eq!(z_score(3.0, 0.5, 2.0), 2.0);
    }
}
