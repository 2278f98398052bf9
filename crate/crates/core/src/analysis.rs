//! Price-amplitude profiles, locus sampling, and logarithmic scoring-rule
//! quantities.

use std::fmt;
use std::io::{self, Write};

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::curves::CurveSpec;
use crate::engine::Market;
use crate::error::{AmmError, Result};
use crate::solver::{solve_locus, swap_exact_out, SolverConfig, SwapProblem};

/// Interval endpoint. Unbounded and open-at-zero ends are explicit markers,
/// serialized as `"0+"`, `"0-"`, `"inf"`, `"-inf"`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Bound {
    Finite(f64),
    ZeroPlus,
    ZeroMinus,
    Infinity,
    NegInfinity,
}

impl Bound {
    pub fn negate(self) -> Bound {
        match self {
            Bound::Finite(v) => Bound::Finite(-v),
            Bound::ZeroPlus => Bound::ZeroMinus,
            Bound::ZeroMinus => Bound::ZeroPlus,
            Bound::Infinity => Bound::NegInfinity,
            Bound::NegInfinity => Bound::Infinity,
        }
    }

    pub fn finite(self) -> Option<f64> {
        match self {
            Bound::Finite(v) => Some(v),
            _ => None,
        }
    }

    fn marker(self) -> Option<&'static str> {
        match self {
            Bound::Finite(_) => None,
            Bound::ZeroPlus => Some("0+"),
            Bound::ZeroMinus => Some("0-"),
            Bound::Infinity => Some("inf"),
            Bound::NegInfinity => Some("-inf"),
        }
    }
}

impl fmt::Display for Bound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self, self.marker()) {
            (_, Some(m)) => f.write_str(m),
            (Bound::Finite(v), None) => match f.precision() {
                Some(p) => write!(f, "{v:.p$}"),
                None => write!(f, "{v}"),
            },
            _ => unreachable!(),
        }
    }
}

impl Serialize for Bound {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match (self, self.marker()) {
            (_, Some(m)) => s.serialize_str(m),
            (Bound::Finite(v), None) => s.serialize_f64(*v),
            _ => unreachable!(),
        }
    }
}

impl<'de> Deserialize<'de> for Bound {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Number(f64),
            Marker(String),
        }
        match Repr::deserialize(d)? {
            Repr::Number(v) => Ok(Bound::Finite(v)),
            Repr::Marker(m) => match m.as_str() {
                "0+" => Ok(Bound::ZeroPlus),
                "0-" => Ok(Bound::ZeroMinus),
                "inf" => Ok(Bound::Infinity),
                "-inf" => Ok(Bound::NegInfinity),
                other => Err(serde::de::Error::custom(format!("unknown bound marker {other:?}"))),
            },
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub low: Bound,
    pub high: Bound,
}

impl Interval {
    pub fn point(v: f64) -> Self {
        Interval {
            low: Bound::Finite(v),
            high: Bound::Finite(v),
        }
    }

    /// Image under `x ↦ −x`.
    pub fn negate(self) -> Self {
        Interval {
            low: self.high.negate(),
            high: self.low.negate(),
        }
    }

    pub fn is_point(&self) -> bool {
        matches!((self.low, self.high), (Bound::Finite(a), Bound::Finite(b)) if a == b)
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p = f.precision().unwrap_or(4);
        if self.is_point() {
            write!(f, "{:.p$}", self.low)
        } else {
            write!(f, "({:.p$}, {:.p$})", self.low, self.high)
        }
    }
}

/// Attainable price ratios `P_x/P_y` and tangent slopes along a market's locus.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MarketProfile {
    pub market_cost: f64,
    pub ratio_interval: Interval,
    pub slope_interval: Interval,
}

/// Profiles a two-token market. Finite ratio ranges are read off the two axis
/// intersections of the locus, reached by draining each token in turn; the
/// ratio is monotone along the locus for every family.
pub fn profile(market: &Market) -> Result<MarketProfile> {
    let shares = market.shares();
    if shares.len() != 2 {
        return Err(AmmError::domain("profiles are defined for two-token markets"));
    }
    let spec = market.spec();
    let ratio_interval = match spec {
        CurveSpec::ConstantProduct {} | CurveSpec::ConstantMean { .. } => Interval {
            low: Bound::ZeroPlus,
            high: Bound::Infinity,
        },
        CurveSpec::ConstantSum {} => Interval::point(spec.price_ratio(shares)?),
        _ => {
            let a = spec.price_ratio(&drained(spec, shares, 0, market.solver())?)?;
            let b = spec.price_ratio(&drained(spec, shares, 1, market.solver())?)?;
            Interval {
                low: Bound::Finite(a.min(b)),
                high: Bound::Finite(a.max(b)),
            }
        }
    };
    Ok(MarketProfile {
        market_cost: market.cost_value(),
        ratio_interval,
        slope_interval: ratio_interval.negate(),
    })
}

/// State reached by buying out every share of `token`.
fn drained(spec: &CurveSpec, q: &[f64], token: usize, cfg: &SolverConfig) -> Result<Vec<f64>> {
    let other = 1 - token;
    let paid = swap_exact_out(&SwapProblem::new(spec, q, other, token, q[token]), cfg)?;
    let mut end = q.to_vec();
    end[token] = 0.0;
    end[other] += paid;
    Ok(end)
}

/// Points on one two-token constant-cost locus.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurveSample {
    pub points: Vec<(f64, f64)>,
    pub cost_value: f64,
}

impl CurveSample {
    /// Two-column CSV with header `x,y`, 12 significant digits.
    pub fn write_csv<W: Write>(&self, mut w: W) -> io::Result<()> {
        writeln!(w, "x,y")?;
        for (x, y) in &self.points {
            writeln!(w, "{},{}", format_significant(*x, 12), format_significant(*y, 12))?;
        }
        Ok(())
    }
}

/// `y` on the locus `C(x, y) = cost_value`, on the branch the spec selects.
pub fn locus_y(spec: &CurveSpec, cost_value: f64, x: f64, cfg: &SolverConfig) -> Result<f64> {
    if !(x.is_finite() && x >= 0.0) {
        return Err(AmmError::domain(format!("x = {x} is outside the first quadrant")));
    }
    solve_locus(spec, &[x, 0.0], 1, cost_value, (0.0, f64::INFINITY), cfg)?.ok_or_else(|| {
        AmmError::domain(format!(
            "x = {x} is outside the locus C = {cost_value} in the first quadrant"
        ))
    })
}

/// Samples `n_points` on a uniform grid over `[x_min, x_max]`.
pub fn sample_curve(
    spec: &CurveSpec,
    cost_value: f64,
    x_min: f64,
    x_max: f64,
    n_points: usize,
) -> Result<CurveSample> {
    if n_points < 2 {
        return Err(AmmError::domain("a sample needs at least two points"));
    }
    if !(x_min.is_finite() && x_max.is_finite() && x_min < x_max) {
        return Err(AmmError::domain(format!("invalid range [{x_min}, {x_max}]")));
    }
    let cfg = SolverConfig::default();
    let step = (x_max - x_min) / (n_points - 1) as f64;
    let points = (0..n_points)
        .map(|k| {
            let x = if k == n_points - 1 {
                x_max
            } else {
                x_min + step * k as f64
            };
            locus_y(spec, cost_value, x, &cfg).map(|y| (x, y))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(CurveSample { points, cost_value })
}

/// Formats like C's `%.{digits}g`: `digits` significant digits, trailing zeros
/// trimmed, exponent form only for very large or small magnitudes.
pub fn format_significant(v: f64, digits: usize) -> String {
    if v == 0.0 || !v.is_finite() {
        return if v == 0.0 { "0".to_string() } else { v.to_string() };
    }
    let digits = digits.max(1);
    let sci = format!("{:.*e}", digits - 1, v);
    let (mantissa, exp) = sci.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -5 || exp >= digits as i32 {
        format!("{}e{exp}", trim_zeros(mantissa))
    } else {
        let decimals = (digits as i32 - 1 - exp).max(0) as usize;
        trim_zeros(&format!("{v:.decimals$}")).to_string()
    }
}

/// `v` rounded to `digits` significant digits.
pub fn round_significant(v: f64, digits: usize) -> f64 {
    format_significant(v, digits).parse().unwrap_or(v)
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// A probability vector: nonnegative, summing to one within 1e-12.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProbabilityEstimate(Vec<f64>);

impl ProbabilityEstimate {
    pub fn new(p: Vec<f64>) -> Result<Self> {
        if p.is_empty() {
            return Err(AmmError::domain("empty probability vector"));
        }
        if p.iter().any(|v| !(v.is_finite() && *v >= 0.0)) {
            return Err(AmmError::domain("probabilities must be finite and nonnegative"));
        }
        let total: f64 = p.iter().sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(AmmError::domain(format!("probabilities sum to {total}, not 1")));
        }
        Ok(ProbabilityEstimate(p))
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }
}

/// Logarithmic scoring reward `b ln(2 p(outcome))`.
pub fn scoring_reward(p: &ProbabilityEstimate, outcome: usize, b: f64) -> Result<f64> {
    check_liquidity(b)?;
    let prob = *p
        .0
        .get(outcome)
        .ok_or_else(|| AmmError::domain(format!("outcome {outcome} out of range")))?;
    if prob == 0.0 {
        return Err(AmmError::domain(format!("outcome {outcome} has probability zero")));
    }
    Ok(b * (2.0 * prob).ln())
}

/// Expected profit of moving the estimate from `p1` to `p2` when `p2` is the
/// truth: `b · D(p2 || p1)`.
pub fn expected_profit(p1: &ProbabilityEstimate, p2: &ProbabilityEstimate, b: f64) -> Result<f64> {
    check_liquidity(b)?;
    if p1.0.len() != p2.0.len() {
        return Err(AmmError::domain("probability vectors differ in length"));
    }
    let mut divergence = 0.0;
    for (i, (prior, post)) in p1.0.iter().zip(&p2.0).enumerate() {
        if *post == 0.0 {
            continue;
        }
        if *prior == 0.0 {
            return Err(AmmError::domain(format!(
                "outcome {i} has zero prior probability but positive posterior"
            )));
        }
        divergence += post * (post / prior).ln();
    }
    Ok(b * divergence)
}

fn check_liquidity(b: f64) -> Result<()> {
    if b.is_finite() && b > 0.0 {
        Ok(())
    } else {
        Err(AmmError::domain(format!("b must be positive, got {b}")))
    }
}
