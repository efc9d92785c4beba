//! Exact storage/bandwidth tradeoff geometry for secure exact-repair codes.
//!
//! Everything here is exact rational arithmetic on `i128` with checked
//! operations. Points are normalized pairs `(ᾱ, β̄) = (α/B, β/B)`.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::layered::binomial;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RegionError {
    #[error("arithmetic overflow in exact rational computation")]
    Overflow,
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("cannot parse rational '{0}'")]
    Parse(String),
    #[error("rate coordinates must be positive, got ({0}, {1})")]
    NonPositive(Rational, Rational),
}

fn gcd(mut a: i128, mut b: i128) -> i128 {
    a = a.abs();
    b = b.abs();
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Reduced fraction with a positive denominator.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Rational {
    num: i128,
    den: i128,
}

impl Rational {
    pub const ZERO: Rational = Rational { num: 0, den: 1 };
    pub const ONE: Rational = Rational { num: 1, den: 1 };

    pub fn new(num: i128, den: i128) -> Result<Self, RegionError> {
        if den == 0 {
            return Err(RegionError::ZeroDenominator);
        }
        let g = gcd(num, den).max(1);
        let (mut num, mut den) = (num / g, den / g);
        if den < 0 {
            num = num.checked_neg().ok_or(RegionError::Overflow)?;
            den = den.checked_neg().ok_or(RegionError::Overflow)?;
        }
        Ok(Rational { num, den })
    }

    pub fn integer(value: i128) -> Self {
        Rational { num: value, den: 1 }
    }

    pub fn numer(&self) -> i128 {
        self.num
    }

    pub fn denom(&self) -> i128 {
        self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num == 0
    }

    pub fn is_positive(&self) -> bool {
        self.num > 0
    }

    pub fn is_negative(&self) -> bool {
        self.num < 0
    }

    pub fn checked_add(self, other: Rational) -> Result<Rational, RegionError> {
        let g = gcd(self.den, other.den);
        let (a, b) = (self.den / g, other.den / g);
        let num = self
            .num
            .checked_mul(b)
            .zip(other.num.checked_mul(a))
            .and_then(|(x, y)| x.checked_add(y))
            .ok_or(RegionError::Overflow)?;
        let den = self.den.checked_mul(b).ok_or(RegionError::Overflow)?;
        Rational::new(num, den)
    }

    pub fn checked_neg(self) -> Result<Rational, RegionError> {
        Ok(Rational {
            num: self.num.checked_neg().ok_or(RegionError::Overflow)?,
            den: self.den,
        })
    }

    pub fn checked_sub(self, other: Rational) -> Result<Rational, RegionError> {
        self.checked_add(other.checked_neg()?)
    }

    pub fn checked_mul(self, other: Rational) -> Result<Rational, RegionError> {
        // Cross-reduce first to keep intermediates small.
        let g1 = gcd(self.num, other.den).max(1);
        let g2 = gcd(other.num, self.den).max(1);
        let num = (self.num / g1)
            .checked_mul(other.num / g2)
            .ok_or(RegionError::Overflow)?;
        let den = (self.den / g2)
            .checked_mul(other.den / g1)
            .ok_or(RegionError::Overflow)?;
        Rational::new(num, den)
    }

    pub fn recip(self) -> Result<Rational, RegionError> {
        Rational::new(self.den, self.num)
    }

    pub fn checked_div(self, other: Rational) -> Result<Rational, RegionError> {
        self.checked_mul(other.recip()?)
    }

    /// Lossy; for display only.
    pub fn to_f64(&self) -> f64 {
        self.num as f64 / self.den as f64
    }
}

impl Ord for Rational {
    /// Exact comparison by continued-fraction expansion; never overflows.
    fn cmp(&self, other: &Self) -> Ordering {
        let (mut a, mut b, mut c, mut d) = (self.num, self.den, other.num, other.den);
        let mut flipped = false;
        loop {
            let (q1, r1) = (a.div_euclid(b), a.rem_euclid(b));
            let (q2, r2) = (c.div_euclid(d), c.rem_euclid(d));
            let ord = match q1.cmp(&q2) {
                Ordering::Equal => match (r1 == 0, r2 == 0) {
                    (true, true) => Ordering::Equal,
                    (true, false) => Ordering::Less,
                    (false, true) => Ordering::Greater,
                    (false, false) => {
                        // r1/b vs r2/d is the reverse of b/r1 vs d/r2
                        (a, b, c, d) = (b, r1, d, r2);
                        flipped = !flipped;
                        continue;
                    }
                },
                ord => ord,
            };
            return if flipped { ord.reverse() } else { ord };
        }
    }
}

impl PartialOrd for Rational {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == 1 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

impl FromStr for Rational {
    type Err = RegionError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || RegionError::Parse(s.to_string());
        match s.trim().split_once('/') {
            Some((n, d)) => Rational::new(
                n.trim().parse().map_err(|_| bad())?,
                d.trim().parse().map_err(|_| bad())?,
            ),
            None => Ok(Rational::integer(s.trim().parse().map_err(|_| bad())?)),
        }
    }
}

impl Serialize for Rational {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Rational {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

fn ratio(num: u64, den: u64) -> Result<Rational, RegionError> {
    let num = i128::from(num);
    let den = i128::from(den);
    Rational::new(num, den)
}

/// Normalized storage/bandwidth pair `(ᾱ, β̄)`, both positive.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RatePoint {
    alpha_bar: Rational,
    beta_bar: Rational,
}

impl RatePoint {
    pub fn new(alpha_bar: Rational, beta_bar: Rational) -> Result<Self, RegionError> {
        if !alpha_bar.is_positive() || !beta_bar.is_positive() {
            return Err(RegionError::NonPositive(alpha_bar, beta_bar));
        }
        Ok(RatePoint { alpha_bar, beta_bar })
    }

    pub fn from_fractions(a: (i128, i128), b: (i128, i128)) -> Result<Self, RegionError> {
        Self::new(Rational::new(a.0, a.1)?, Rational::new(b.0, b.1)?)
    }

    pub fn alpha_bar(&self) -> Rational {
        self.alpha_bar
    }

    pub fn beta_bar(&self) -> Rational {
        self.beta_bar
    }

    /// True when `self` is no better than `other` in both coordinates and
    /// the two points differ.
    pub fn is_dominated_by(&self, other: &RatePoint) -> bool {
        self != other && self.alpha_bar >= other.alpha_bar && self.beta_bar >= other.beta_bar
    }
}

impl fmt::Display for RatePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.alpha_bar, self.beta_bar)
    }
}

/// `(n, k, d, ℓ)` with `n >= d+1 >= k+1 >= 2` and `0 <= ℓ < k`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SystemParams {
    pub n: usize,
    pub k: usize,
    pub d: usize,
    pub ell: usize,
}

impl SystemParams {
    pub fn new(n: usize, k: usize, d: usize, ell: usize) -> Result<Self, RegionError> {
        if !(k >= 1 && d >= k && n > d) {
            return Err(RegionError::InvalidParams(format!(
                "need n >= d+1 >= k+1 >= 2, got (n, k, d) = ({n}, {k}, {d})"
            )));
        }
        if ell >= k {
            return Err(RegionError::InvalidParams(format!("need ell < k, got ell = {ell}, k = {k}")));
        }
        Ok(SystemParams { n, k, d, ell })
    }

    /// The `k = d = n-1` family the layered construction covers.
    pub fn is_full_repair(&self) -> bool {
        self.k == self.n - 1 && self.d == self.n - 1
    }
}

/// `T_{k,d,ℓ} = Σ_{i=ℓ+1}^{k} (d+1-i)`.
pub fn threshold_t(k: usize, d: usize, ell: usize) -> Result<u64, RegionError> {
    if ell >= k || k > d {
        return Err(RegionError::InvalidParams(format!(
            "need ell < k <= d, got (k, d, ell) = ({k}, {d}, {ell})"
        )));
    }
    Ok(((ell + 1)..=k).map(|i| (d + 1 - i) as u64).sum())
}

/// Smallest `ℓ >= 1` with `T_{k,d,ℓ} <= d + sqrt(dℓ)`, decided in integers:
/// either `T <= d`, or `(T - d)^2 <= dℓ`.
pub fn ell_star(k: usize, d: usize) -> Result<usize, RegionError> {
    if k < 2 || k > d {
        return Err(RegionError::InvalidParams(format!(
            "need 2 <= k <= d, got (k, d) = ({k}, {d})"
        )));
    }
    for ell in 1..k {
        let t = threshold_t(k, d, ell)? as u128;
        let d = d as u128;
        if t <= d || (t - d) * (t - d) <= d * ell as u128 {
            return Ok(ell);
        }
    }
    unreachable!("T_{{k,d,k-1}} = d+1-k <= d always satisfies the condition")
}

/// `(d/T, 1/T)`; with `ℓ = 0` this is the MBR point.
pub fn srk_point(k: usize, d: usize, ell: usize) -> Result<RatePoint, RegionError> {
    let t = threshold_t(k, d, ell)?;
    RatePoint::new(ratio(d as u64, t)?, ratio(1, t)?)
}

/// Layered-code point for `k = d = n-1`:
/// `ᾱ_t = C(n-1,t-1) / (C(n-ℓ,t)(t-1))`, `β̄_t = C(n-1,t-1) / (C(n-ℓ,t)(n-1))`.
pub fn theorem2_point(n: usize, ell: usize, t: usize) -> Result<RatePoint, RegionError> {
    if n < 3 || ell < 1 || ell > n - 2 {
        return Err(RegionError::InvalidParams(format!(
            "need n >= 3 and 1 <= ell <= n-2, got (n, ell) = ({n}, {ell})"
        )));
    }
    if t < 2 || t > n - ell {
        return Err(RegionError::InvalidParams(format!(
            "t = {t} outside [2, n-ell] = [2, {}]",
            n - ell
        )));
    }
    let alpha = binomial(n - 1, t - 1).ok_or(RegionError::Overflow)?;
    let groups = binomial(n - ell, t).ok_or(RegionError::Overflow)?;
    let b_alpha = groups.checked_mul(t as u64 - 1).ok_or(RegionError::Overflow)?;
    let b_beta = groups.checked_mul(n as u64 - 1).ok_or(RegionError::Overflow)?;
    RatePoint::new(ratio(alpha, b_alpha)?, ratio(alpha, b_beta)?)
}

/// Half-plane `a·ᾱ + b·β̄ >= rhs`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LinearBound {
    pub name: String,
    pub alpha_coef: Rational,
    pub beta_coef: Rational,
    pub rhs: Rational,
}

impl LinearBound {
    pub fn new(name: &str, alpha_coef: Rational, beta_coef: Rational, rhs: Rational) -> Self {
        LinearBound {
            name: name.to_string(),
            alpha_coef,
            beta_coef,
            rhs,
        }
    }

    /// `a·ᾱ + b·β̄ - rhs`; non-negative iff the point satisfies the bound.
    pub fn slack(&self, p: &RatePoint) -> Result<Rational, RegionError> {
        self.alpha_coef
            .checked_mul(p.alpha_bar)?
            .checked_add(self.beta_coef.checked_mul(p.beta_bar)?)?
            .checked_sub(self.rhs)
    }

    pub fn is_satisfied(&self, p: &RatePoint) -> Result<bool, RegionError> {
        Ok(!self.slack(p)?.is_negative())
    }

    /// Intersection of the two boundary lines, if they are not parallel.
    pub fn intersect(&self, other: &LinearBound) -> Result<Option<(Rational, Rational)>, RegionError> {
        let det = self
            .alpha_coef
            .checked_mul(other.beta_coef)?
            .checked_sub(self.beta_coef.checked_mul(other.alpha_coef)?)?;
        if det.is_zero() {
            return Ok(None);
        }
        let alpha = self
            .rhs
            .checked_mul(other.beta_coef)?
            .checked_sub(self.beta_coef.checked_mul(other.rhs)?)?
            .checked_div(det)?;
        let beta = self
            .alpha_coef
            .checked_mul(other.rhs)?
            .checked_sub(self.rhs.checked_mul(other.alpha_coef)?)?
            .checked_div(det)?;
        Ok(Some((alpha, beta)))
    }
}

/// `β̄ >= 1/T`.
pub fn bound_c1(k: usize, d: usize, ell: usize) -> Result<LinearBound, RegionError> {
    let t = threshold_t(k, d, ell)?;
    Ok(LinearBound::new("C1", Rational::ZERO, Rational::ONE, ratio(1, t)?))
}

/// `ᾱ >= d/T`, proven only for `ℓ >= ℓ*(k, d)`.
pub fn bound_c2(k: usize, d: usize, ell: usize) -> Result<LinearBound, RegionError> {
    let t = threshold_t(k, d, ell)?;
    Ok(LinearBound::new("C2", Rational::ONE, Rational::ZERO, ratio(d as u64, t)?))
}

/// `nᾱ + (n-1)(n-6)/2 · β̄ >= 3`, for `(n, n-1, n-1, 1)` with `n >= 7`.
pub fn bound_c3(n: usize) -> Result<LinearBound, RegionError> {
    let n = n as i128;
    Ok(LinearBound::new(
        "C3",
        Rational::integer(n),
        Rational::new((n - 1) * (n - 6), 2)?,
        Rational::integer(3),
    ))
}

/// `ᾱ >= 3/8`, for `(7, 6, 6, 1)`.
pub fn bound_c4() -> LinearBound {
    LinearBound::new("C4", Rational::ONE, Rational::ZERO, Rational { num: 3, den: 8 })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum BoundStatus {
    Satisfied { slack: Rational },
    Violated { slack: Rational },
    NotApplicable { reason: String },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BoundCheck {
    pub name: String,
    pub bound: Option<LinearBound>,
    #[serde(flatten)]
    pub status: BoundStatus,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BoundReport {
    pub point: RatePoint,
    pub checks: Vec<BoundCheck>,
}

impl BoundReport {
    pub fn get(&self, name: &str) -> Option<&BoundCheck> {
        self.checks.iter().find(|c| c.name == name)
    }

    /// No applicable bound is violated.
    pub fn all_satisfied(&self) -> bool {
        !self
            .checks
            .iter()
            .any(|c| matches!(c.status, BoundStatus::Violated { .. }))
    }
}

/// A bound by name, or the reason it does not apply.
pub type NamedBound = (String, Result<LinearBound, String>);

/// Bounds that apply to `params`, in order C1..C4.
pub fn applicable_bounds(params: &SystemParams) -> Result<Vec<NamedBound>, RegionError> {
    let SystemParams { n, k, d, ell } = *params;
    let mut out = vec![("C1".to_string(), Ok(bound_c1(k, d, ell)?))];

    let c2 = if ell == 0 {
        Err("requires ell >= 1".to_string())
    } else {
        let star = ell_star(k, d)?;
        if ell >= star {
            Ok(bound_c2(k, d, ell)?)
        } else {
            Err(format!("requires ell >= ell*(k,d) = {star}"))
        }
    };
    out.push(("C2".to_string(), c2));

    let c3 = if params.is_full_repair() && ell == 1 && n >= 7 {
        Ok(bound_c3(n)?)
    } else {
        Err("requires k = d = n-1, ell = 1, n >= 7".to_string())
    };
    out.push(("C3".to_string(), c3));

    let c4 = if (n, k, d, ell) == (7, 6, 6, 1) {
        Ok(bound_c4())
    } else {
        Err("requires (n, k, d, ell) = (7, 6, 6, 1)".to_string())
    };
    out.push(("C4".to_string(), c4));
    Ok(out)
}

pub fn check_bounds(point: &RatePoint, params: &SystemParams) -> Result<BoundReport, RegionError> {
    let checks = applicable_bounds(params)?
        .into_iter()
        .map(|(name, bound)| {
            Ok(match bound {
                Ok(bound) => {
                    let slack = bound.slack(point)?;
                    let status = if slack.is_negative() {
                        BoundStatus::Violated { slack }
                    } else {
                        BoundStatus::Satisfied { slack }
                    };
                    BoundCheck {
                        name,
                        bound: Some(bound),
                        status,
                    }
                }
                Err(reason) => BoundCheck {
                    name,
                    bound: None,
                    status: BoundStatus::NotApplicable { reason },
                },
            })
        })
        .collect::<Result<_, RegionError>>()?;
    Ok(BoundReport {
        point: *point,
        checks,
    })
}

/// A region given by half-planes, with its vertices.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Region {
    pub facets: Vec<LinearBound>,
    pub corners: Vec<RatePoint>,
}

impl Region {
    pub fn from_facets(facets: Vec<LinearBound>) -> Result<Self, RegionError> {
        let corners = corner_points(&facets)?;
        Ok(Region { facets, corners })
    }

    pub fn contains(&self, p: &RatePoint) -> Result<bool, RegionError> {
        for f in &self.facets {
            if !f.is_satisfied(p)? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// Feasible pairwise intersections of the facet lines, sorted by `ᾱ`.
pub fn corner_points(facets: &[LinearBound]) -> Result<Vec<RatePoint>, RegionError> {
    let mut corners: Vec<RatePoint> = Vec::new();
    for (i, a) in facets.iter().enumerate() {
        for b in &facets[i + 1..] {
            let Some((alpha, beta)) = a.intersect(b)? else { continue };
            let Ok(p) = RatePoint::new(alpha, beta) else { continue };
            let mut feasible = true;
            for f in facets {
                feasible &= f.is_satisfied(&p)?;
            }
            if feasible && !corners.contains(&p) {
                corners.push(p);
            }
        }
    }
    corners.sort_by(|x, y| x.alpha_bar.cmp(&y.alpha_bar).then(x.beta_bar.cmp(&y.beta_bar)));
    Ok(corners)
}

/// The closed tradeoff region of `(7, 6, 6, 1)`:
/// `β̄ >= 1/15`, `7ᾱ + 3β̄ >= 3`, `ᾱ >= 3/8`.
pub fn region_7661() -> Result<Region, RegionError> {
    let c1 = bound_c1(6, 6, 1)?;
    let c3 = bound_c3(7)?;
    Region::from_facets(vec![c1, c3, bound_c4()])
}

/// Layered-code points for `t` in `[2, n-ℓ]` that no other such point
/// dominates, sorted by `ᾱ`. Each entry carries its `t`.
pub fn corner_scan(n: usize, ell: usize) -> Result<Vec<(usize, RatePoint)>, RegionError> {
    let points: Vec<(usize, RatePoint)> = (2..=n.saturating_sub(ell))
        .map(|t| Ok((t, theorem2_point(n, ell, t)?)))
        .collect::<Result<_, RegionError>>()?;
    let mut survivors: Vec<(usize, RatePoint)> = points
        .iter()
        .filter(|(_, p)| !points.iter().any(|(_, q)| p.is_dominated_by(q)))
        .copied()
        .collect();
    survivors.sort_by_key(|(_, x)| x.alpha_bar);
    Ok(survivors)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn r(n: i128, d: i128) -> Rational {
        Rational::new(n, d).unwrap()
    }

    fn pt(a: (i128, i128), b: (i128, i128)) -> RatePoint {
        RatePoint::from_fractions(a, b).unwrap()
    }

    #[test]
    fn rational_basics() {
        assert_eq!(r(6, -4), r(-3, 2));
        assert_eq!(r(0, 5), Rational::ZERO);
        assert_eq!(Rational::new(1, 0), Err(RegionError::ZeroDenominator));
        assert_eq!(r(1, 3).checked_add(r(1, 6)).unwrap(), r(1, 2));
        assert_eq!(r(2, 5).checked_mul(r(7, 1)).unwrap(), r(14, 5));
        assert_eq!(r(3, 8).checked_div(r(1, 8)).unwrap(), Rational::integer(3));
        assert!(r(3, 8) < r(2, 5));
        assert!(r(-1, 2) < r(-1, 3));
        assert_eq!("3/8".parse::<Rational>().unwrap(), r(3, 8));
        assert_eq!("-4".parse::<Rational>().unwrap(), Rational::integer(-4));
        assert!("3/0".parse::<Rational>().is_err());
        assert_eq!(r(2, 5).to_string(), "2/5");
        assert_eq!(Rational::integer(3).to_string(), "3");
        let big = Rational::integer(i128::MAX / 2 + 1);
        assert_eq!(big.checked_add(big), Err(RegionError::Overflow));
        assert_eq!(big.checked_mul(Rational::integer(2)), Err(RegionError::Overflow));
    }

    proptest! {
        #[test]
        fn rational_order_matches_cross_multiplication(
            a in -10_000i128..10_000, b in 1i128..10_000, c in -10_000i128..10_000, d in 1i128..10_000
        ) {
            prop_assert_eq!(r(a, b).cmp(&r(c, d)), (a * d).cmp(&(c * b)));
        }

        #[test]
        fn rational_strings_round_trip(a in -1_000_000i128..1_000_000, b in 1i128..1_000_000) {
            let x = r(a, b);
            prop_assert_eq!(x.to_string().parse::<Rational>().unwrap(), x);
            let json = serde_json::to_string(&x).unwrap();
            prop_assert_eq!(serde_json::from_str::<Rational>(&json).unwrap(), x);
        }
    }

    #[test]
    fn threshold_examples() {
        assert_eq!(threshold_t(6, 6, 1).unwrap(), 15);
        assert_eq!(threshold_t(6, 6, 0).unwrap(), 21);
        for k in 1..8 {
            for d in k..10 {
                let mbr: u64 = (1..=k).map(|i| (d + 1 - i) as u64).sum();
                assert_eq!(threshold_t(k, d, 0).unwrap(), mbr);
                assert_eq!(threshold_t(k, d, k - 1).unwrap(), (d + 1 - k) as u64);
            }
        }
        assert!(threshold_t(3, 4, 3).is_err());
        assert!(threshold_t(5, 4, 1).is_err());
    }

    #[test]
    fn ell_star_examples() {
        assert_eq!(ell_star(6, 6).unwrap(), 3);
        for d in 2..=4 {
            for k in 2..=d {
                assert_eq!(ell_star(k, d).unwrap(), 1);
            }
        }
        assert!(ell_star(1, 3).is_err());
    }

    /// Floating-point evaluation of the defining inequality, kept away from
    /// exact ties.
    #[test]
    fn ell_star_agrees_with_real_valued_definition() {
        for d in 2..=30usize {
            for k in 2..=d {
                let expected = (1..k)
                    .find(|&l| {
                        let t = threshold_t(k, d, l).unwrap() as f64;
                        t <= d as f64 + ((d * l) as f64).sqrt() + 1e-9
                    })
                    .unwrap();
                assert_eq!(ell_star(k, d).unwrap(), expected, "(k, d) = ({k}, {d})");
            }
        }
    }

    #[test]
    fn srk_points() {
        assert_eq!(srk_point(6, 6, 1).unwrap(), pt((2, 5), (1, 15)));
        assert_eq!(srk_point(3, 3, 1).unwrap(), pt((1, 1), (1, 3)));
        // MBR point of (n, k, d): (2d/(k(2d-k+1)), 2/(k(2d-k+1))).
        for k in 1..6i128 {
            for d in k..8 {
                let denom = k * (2 * d - k + 1);
                assert_eq!(
                    srk_point(k as usize, d as usize, 0).unwrap(),
                    pt((2 * d, denom), (2, denom))
                );
            }
        }
    }

    #[test]
    fn srk_meets_c1_and_c2_with_equality() {
        for d in 2..=12 {
            for k in 2..=d {
                let star = ell_star(k, d).unwrap();
                for ell in star..k {
                    let params = SystemParams::new(d + 1, k, d, ell).unwrap();
                    let report = check_bounds(&srk_point(k, d, ell).unwrap(), &params).unwrap();
                    for name in ["C1", "C2"] {
                        assert_eq!(
                            report.get(name).unwrap().status,
                            BoundStatus::Satisfied { slack: Rational::ZERO }
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn theorem2_points() {
        assert_eq!(theorem2_point(7, 1, 3).unwrap(), pt((3, 8), (1, 8)));
        assert_eq!(theorem2_point(7, 1, 2).unwrap(), pt((2, 5), (1, 15)));
        assert_eq!(theorem2_point(13, 1, 2).unwrap(), pt((2, 11), (1, 66)));
        assert_eq!(theorem2_point(13, 1, 3).unwrap(), pt((3, 20), (1, 40)));
        assert_eq!(theorem2_point(13, 1, 4).unwrap(), pt((4, 27), (1, 27)));
        assert!(theorem2_point(7, 1, 1).is_err());
        assert!(theorem2_point(7, 1, 7).is_err());
        assert!(theorem2_point(7, 2, 6).is_err());
    }

    #[test]
    fn theorem2_closed_forms_for_single_eavesdropper() {
        for n in 3..40i128 {
            for t in 2..n {
                let p = theorem2_point(n as usize, 1, t as usize).unwrap();
                assert_eq!(p, pt((t, (t - 1) * (n - t)), (t, (n - 1) * (n - t))));
            }
            if n >= 7 {
                let c3 = bound_c3(n as usize).unwrap();
                for t in [2, 3] {
                    let p = theorem2_point(n as usize, 1, t).unwrap();
                    assert_eq!(c3.slack(&p).unwrap(), Rational::ZERO, "n = {n}, t = {t}");
                }
            }
        }
    }

    #[test]
    fn srk_equals_t2_point_for_full_repair() {
        for n in 3..30 {
            assert_eq!(srk_point(n - 1, n - 1, 1).unwrap(), theorem2_point(n, 1, 2).unwrap());
        }
    }

    #[test]
    fn monotone_when_t_squared_plus_t_below_n() {
        for n in 3..120usize {
            for t in 2..n - 1 {
                if t * t + t >= n {
                    continue;
                }
                let a = theorem2_point(n, 1, t).unwrap();
                let b = theorem2_point(n, 1, t + 1).unwrap();
                assert!(b.beta_bar() > a.beta_bar());
                assert!(b.alpha_bar() < a.alpha_bar());
            }
        }
    }

    #[test]
    fn bound_examples() {
        let params = SystemParams::new(7, 6, 6, 1).unwrap();
        let srk = check_bounds(&pt((2, 5), (1, 15)), &params).unwrap();
        assert_eq!(srk.get("C3").unwrap().status, BoundStatus::Satisfied { slack: Rational::ZERO });
        assert!(matches!(srk.get("C2").unwrap().status, BoundStatus::NotApplicable { .. }));
        let second = check_bounds(&pt((3, 8), (1, 8)), &params).unwrap();
        assert_eq!(second.get("C3").unwrap().status, BoundStatus::Satisfied { slack: Rational::ZERO });
        assert_eq!(second.get("C4").unwrap().status, BoundStatus::Satisfied { slack: Rational::ZERO });
        assert!(second.all_satisfied());

        let below = check_bounds(&pt((1, 3), (1, 15)), &params).unwrap();
        assert!(matches!(below.get("C4").unwrap().status, BoundStatus::Violated { .. }));
        assert!(!below.all_satisfied());

        let other = SystemParams::new(8, 5, 6, 2).unwrap();
        let report = check_bounds(&pt((1, 1), (1, 1)), &other).unwrap();
        assert!(matches!(report.get("C3").unwrap().status, BoundStatus::NotApplicable { .. }));
        assert!(matches!(report.get("C4").unwrap().status, BoundStatus::NotApplicable { .. }));
    }

    #[test]
    fn region_7661_geometry() {
        let region = region_7661().unwrap();
        assert_eq!(region.corners, vec![pt((3, 8), (1, 8)), pt((2, 5), (1, 15))]);
        let c3 = bound_c3(7).unwrap();
        for c in &region.corners {
            assert_eq!(c3.slack(c).unwrap(), Rational::ZERO);
        }
        for t in 2..=6 {
            assert!(region.contains(&theorem2_point(7, 1, t).unwrap()).unwrap());
        }
        assert!(!region.contains(&pt((3, 8), (1, 15))).unwrap());
    }

    #[test]
    fn corner_scans() {
        let seven: Vec<_> = corner_scan(7, 1).unwrap();
        assert_eq!(seven, vec![(3, pt((3, 8), (1, 8))), (2, pt((2, 5), (1, 15)))]);
        let thirteen: Vec<usize> = corner_scan(13, 1).unwrap().into_iter().map(|(t, _)| t).collect();
        assert_eq!(thirteen, vec![4, 3, 2]);
        let five = corner_scan(5, 1).unwrap();
        assert_eq!(five, vec![(2, theorem2_point(5, 1, 2).unwrap())]);
    }

    #[test]
    fn system_params_validation() {
        assert!(SystemParams::new(7, 6, 6, 1).is_ok());
        assert!(SystemParams::new(6, 6, 6, 1).is_err());
        assert!(SystemParams::new(7, 6, 5, 1).is_err());
        assert!(SystemParams::new(7, 6, 6, 6).is_err());
        assert!(SystemParams::new(2, 1, 1, 0).is_ok());
    }
}
