//! Exact arc arithmetic on `T = R/Z` for the monomial family `z^m - w^n`.
//!
//! A step sends `alpha` to the `n` values `(m alpha + k)/n`, so an arc
//! `[a, b)` goes to the arcs `[(ma + k)/n, (mb + k)/n)`.

use super::CircleCorrespondence;
use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

/// Largest number of arcs [`propagate_arcs`] will hold before merging.
pub const ARC_CAP: usize = 1_000_000;

/// A half-open arc `[start, end)` of `R/Z` with `0 <= start < end <= 1`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Arc {
    pub start: BigRational,
    pub end: BigRational,
}

impl Arc {
    pub fn new(start: BigRational, end: BigRational) -> Self {
        Arc { start, end }
    }

    pub fn from_ints(a: i64, da: i64, b: i64, db: i64) -> Self {
        Arc::new(ratio(a, da), ratio(b, db))
    }

    pub fn length(&self) -> BigRational {
        &self.end - &self.start
    }
}

fn ratio(a: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(a), BigInt::from(d))
}

/// A finite union of disjoint half-open arcs, sorted and merged.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ArcSet {
    arcs: Vec<Arc>,
}

impl ArcSet {
    pub fn empty() -> Self {
        ArcSet { arcs: Vec::new() }
    }

    pub fn full() -> Self {
        ArcSet {
            arcs: vec![Arc::new(BigRational::zero(), BigRational::one())],
        }
    }

    /// The image of `[a, b)` in `R/Z`. Arcs of length `>= 1` cover everything;
    /// `a > b` is rejected.
    pub fn from_arc(a: BigRational, b: BigRational) -> Result<Self> {
        ArcSet::from_arcs(vec![(a, b)])
    }

    /// Normalizes arbitrary real intervals `[a, b)` modulo 1.
    pub fn from_arcs(raw: Vec<(BigRational, BigRational)>) -> Result<Self> {
        let mut pieces = Vec::with_capacity(raw.len());
        for (a, b) in raw {
            if a > b {
                return Err(Error::invalid(format!(
                    "arc [{a}, {b}) has start after end"
                )));
            }
            if &b - &a >= BigRational::one() {
                return Ok(ArcSet::full());
            }
            push_mod_one(&mut pieces, a, b);
        }
        Ok(ArcSet::merge(pieces))
    }

    /// Arcs with `0 <= a < b <= 1`, in any order and possibly overlapping.
    fn merge(mut pieces: Vec<Arc>) -> Self {
        pieces.sort();
        let mut arcs: Vec<Arc> = Vec::with_capacity(pieces.len());
        for p in pieces {
            match arcs.last_mut() {
                Some(last) if p.start <= last.end => {
                    if p.end > last.end {
                        last.end = p.end;
                    }
                }
                _ => arcs.push(p),
            }
        }
        ArcSet { arcs }
    }

    pub fn arcs(&self) -> &[Arc] {
        &self.arcs
    }

    pub fn len(&self) -> usize {
        self.arcs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.arcs.is_empty()
    }

    pub fn measure(&self) -> BigRational {
        self.arcs
            .iter()
            .fold(BigRational::zero(), |acc, a| acc + a.length())
    }

    pub fn is_full(&self) -> bool {
        self.arcs.len() == 1 && self.arcs[0].start.is_zero() && self.arcs[0].end.is_one()
    }

    /// Membership of `x mod 1`.
    pub fn contains(&self, x: &BigRational) -> bool {
        let x = frac(x);
        self.arcs.iter().any(|a| a.start <= x && x < a.end)
    }

    pub fn is_subset(&self, other: &ArcSet) -> bool {
        self.arcs.iter().all(|a| {
            other
                .arcs
                .iter()
                .any(|b| b.start <= a.start && a.end <= b.end)
        })
    }

    pub fn union(&self, other: &ArcSet) -> ArcSet {
        ArcSet::merge(self.arcs.iter().chain(&other.arcs).cloned().collect())
    }

    /// `[num_a, den_a, num_b, den_b]` per arc.
    pub fn quads(&self) -> Vec<[BigInt; 4]> {
        self.arcs
            .iter()
            .map(|a| {
                [
                    a.start.numer().clone(),
                    a.start.denom().clone(),
                    a.end.numer().clone(),
                    a.end.denom().clone(),
                ]
            })
            .collect()
    }

    /// Least common multiple of the endpoint denominators.
    pub fn denominator_lcm(&self) -> BigInt {
        self.arcs.iter().fold(BigInt::one(), |acc, a| {
            acc.lcm(a.start.denom()).lcm(a.end.denom())
        })
    }
}

fn frac(x: &BigRational) -> BigRational {
    x - x.floor()
}

/// Pushes `[a, b)` with `0 < b - a < 1` reduced into `[0, 1)`, split at 1.
fn push_mod_one(out: &mut Vec<Arc>, a: BigRational, b: BigRational) {
    if a == b {
        return;
    }
    let shift = a.floor();
    let (a, b) = (a - &shift, b - shift);
    if b <= BigRational::one() {
        out.push(Arc::new(a, b));
    } else {
        out.push(Arc::new(a, BigRational::one()));
        out.push(Arc::new(BigRational::zero(), b - BigRational::one()));
    }
}

/// `U^(steps)` for `z^m - w^n`, computed arc by arc.
pub fn propagate_arcs(cc: &CircleCorrespondence, u: &ArcSet, steps: usize) -> Result<ArcSet> {
    let (m, n) = cc.monomial_degrees()?;
    let mb = BigRational::from_integer(BigInt::from(m));
    let nb = BigRational::from_integer(BigInt::from(n));
    let mut cur = u.clone();
    for _ in 0..steps {
        if cur.is_full() || cur.is_empty() {
            break;
        }
        if cur.len().saturating_mul(n) > ARC_CAP {
            return Err(Error::resource(format!(
                "arc propagation needs more than {ARC_CAP} arcs"
            )));
        }
        let mut pieces = Vec::with_capacity(cur.len() * n);
        for arc in cur.arcs() {
            let a = &mb * &arc.start / &nb;
            let b = &mb * &arc.end / &nb;
            if &b - &a >= BigRational::one() {
                return Ok(ArcSet::full());
            }
            for k in 0..n {
                let shift = BigRational::new(BigInt::from(k), BigInt::from(n));
                push_mod_one(&mut pieces, &a + &shift, &b + &shift);
            }
        }
        cur = ArcSet::merge(pieces);
    }
    Ok(cur)
}

/// Result of the covering oracle.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OracleOutcome {
    /// The seed covered `T` within the step budget.
    pub expansive: bool,
    /// Steps taken: the first step with full coverage, or the budget.
    pub steps: usize,
    /// Measure of the last computed `U^(k)` as `(num, den)` strings.
    pub measure: (String, String),
}

/// Runs `U, U^(1), U^(2), ...` from `seed` until it covers `T`.
///
/// Uses that `U^(k) = V_k + (1/N_k) Z` for a set `V_k` inside one period:
/// with `g = gcd(m, N_k)` the next period is `1/N_{k+1}`, `N_{k+1} = n N_k / g`,
/// and after rescaling a period to `[0, 1)` the set `V_k` is just multiplied
/// by `m / g` modulo 1. The number of arcs therefore never exceeds that of
/// the seed (plus wraparound splits), even when `m` divides `n`.
pub fn expansive_oracle(
    cc: &CircleCorrespondence,
    seed: &ArcSet,
    max_steps: usize,
) -> Result<OracleOutcome> {
    let (m, n) = cc.monomial_degrees()?;
    if seed.is_empty() {
        return Err(Error::invalid("seed arc set is empty"));
    }
    let mut period = BigInt::one();
    let mut v = seed.clone();
    // the measure of U^(k) equals that of the rescaled V
    let outcome = |expansive, steps, v: &ArcSet| {
        let mu = v.measure();
        OracleOutcome {
            expansive,
            steps,
            measure: (mu.numer().to_string(), mu.denom().to_string()),
        }
    };
    if v.is_full() {
        return Ok(outcome(true, 0, &v));
    }
    let mb = BigInt::from(m);
    for step in 1..=max_steps {
        let g = mb.gcd(&period);
        let factor = BigRational::from_integer(&mb / &g);
        period = &period * BigInt::from(n) / &g;
        let raw = v
            .arcs()
            .iter()
            .map(|a| (&a.start * &factor, &a.end * &factor))
            .collect();
        v = ArcSet::from_arcs(raw)?;
        if v.len() > ARC_CAP {
            return Err(Error::resource(format!("more than {ARC_CAP} arcs")));
        }
        if v.is_full() {
            return Ok(outcome(true, step, &v));
        }
    }
    Ok(outcome(false, max_steps, &v))
}

/// Expands the periodic representation back to an explicit arc set.
#[cfg(test)]
fn unfold(v: &ArcSet, period: &BigInt) -> ArcSet {
    let p = BigRational::from_integer(period.clone());
    let mut pieces = Vec::new();
    let count: usize = period.try_into().expect("small period");
    for j in 0..count {
        let j = BigRational::from_integer(BigInt::from(j));
        for a in v.arcs() {
            pieces.push(Arc::new((&a.start + &j) / &p, (&a.end + &j) / &p));
        }
    }
    ArcSet::merge(pieces)
}

/// `|U|` as `f64`.
pub fn measure_f64(u: &ArcSet) -> f64 {
    u.measure().to_f64().unwrap_or(f64::NAN)
}
