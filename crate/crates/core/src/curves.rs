//! Cost functions, marginal prices, and tangent slopes for the six curve
//! families.
//!
//! A state `q` holds the outstanding shares of each token. Every family
//! exposes a scalar cost `C(q)` whose level sets are the trading loci, and
//! marginal prices `P_i = ∂C/∂q_i`:
//!
//! | family             | cost                                   |
//! |--------------------|----------------------------------------|
//! | `Lmsr`             | `b ln Σ exp(q_i / b)`                  |
//! | `LsLmsr`           | same with `b(q) = α Σ q_i`             |
//! | `ConstantProduct`  | `Π q_i`                                |
//! | `ConstantMean`     | `Π q_i^{w_i}`                          |
//! | `ConstantSum`      | `Σ q_i`                                |
//! | `Ellipse`          | `Σ (q_i − a)² + c Σ_{i<j} q_i q_j`     |
//!
//! Prices are raw signed derivatives. On the convex arc of an ellipse centred
//! in the first quadrant both prices are negative; use [`CurveSpec::price_magnitude`]
//! or [`CurveSpec::price_ratio`] where a positive quote is wanted.

use serde::{Deserialize, Serialize};

use crate::error::{AmmError, Result};

/// Which arc of an ellipse is used as the trading locus.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Branch {
    /// Lower-left arc: the smaller root when solving for a coordinate. Convex locus.
    #[default]
    ConvexLower,
    /// Upper-right arc: the larger root. Concave locus.
    ConcaveUpper,
}

/// One cost-function family together with its parameters.
///
/// Serialized with a `family` discriminator and only that family's parameters,
/// e.g. `{"family":"ls_lmsr","alpha":1}`. Unknown keys are rejected.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case", deny_unknown_fields)]
pub enum CurveSpec {
    Lmsr {
        #[serde(rename = "b_liquidity")]
        liquidity: f64,
    },
    LsLmsr {
        alpha: f64,
    },
    ConstantProduct {},
    ConstantMean {
        weights: Vec<f64>,
    },
    ConstantSum {},
    Ellipse {
        #[serde(rename = "center_a")]
        center: f64,
        #[serde(rename = "cross_b", default)]
        cross: f64,
        #[serde(default)]
        branch: Branch,
    },
}

impl CurveSpec {
    pub fn lmsr(liquidity: f64) -> Self {
        CurveSpec::Lmsr { liquidity }
    }

    pub fn ls_lmsr(alpha: f64) -> Self {
        CurveSpec::LsLmsr { alpha }
    }

    pub fn constant_product() -> Self {
        CurveSpec::ConstantProduct {}
    }

    pub fn constant_mean(weights: Vec<f64>) -> Self {
        CurveSpec::ConstantMean { weights }
    }

    pub fn constant_sum() -> Self {
        CurveSpec::ConstantSum {}
    }

    pub fn ellipse(center: f64, cross: f64, branch: Branch) -> Self {
        CurveSpec::Ellipse {
            center,
            cross,
            branch,
        }
    }

    /// Circle `Σ (q_i − a)²` traded on its convex lower-left arc.
    pub fn circle(center: f64) -> Self {
        Self::ellipse(center, 0.0, Branch::ConvexLower)
    }

    pub fn name(&self) -> &'static str {
        match self {
            CurveSpec::Lmsr { .. } => "lmsr",
            CurveSpec::LsLmsr { .. } => "ls_lmsr",
            CurveSpec::ConstantProduct {} => "constant_product",
            CurveSpec::ConstantMean { .. } => "constant_mean",
            CurveSpec::ConstantSum {} => "constant_sum",
            CurveSpec::Ellipse { .. } => "ellipse",
        }
    }

    /// True when the tangent slope of every two-token locus is constant.
    pub fn has_constant_slope(&self) -> bool {
        matches!(self, CurveSpec::ConstantSum {})
    }

    /// Checks the family parameters.
    pub fn validate(&self) -> Result<()> {
        let positive = |v: f64, what: &str| {
            if v.is_finite() && v > 0.0 {
                Ok(())
            } else {
                Err(AmmError::domain(format!("{what} must be positive and finite, got {v}")))
            }
        };
        match self {
            CurveSpec::Lmsr { liquidity } => positive(*liquidity, "b_liquidity"),
            CurveSpec::LsLmsr { alpha } => positive(*alpha, "alpha"),
            CurveSpec::ConstantMean { weights } => {
                if weights.len() < 2 {
                    return Err(AmmError::domain("constant mean needs at least two weights"));
                }
                weights.iter().try_for_each(|w| positive(*w, "weight"))
            }
            CurveSpec::Ellipse { center, cross, .. } => {
                if center.is_finite() && cross.is_finite() {
                    Ok(())
                } else {
                    Err(AmmError::domain("ellipse parameters must be finite"))
                }
            }
            CurveSpec::ConstantProduct {} | CurveSpec::ConstantSum {} => Ok(()),
        }
    }

    /// Checks that `q` is a state this curve can be evaluated at.
    pub fn check_state(&self, q: &[f64]) -> Result<()> {
        self.validate()?;
        if q.len() < 2 {
            return Err(AmmError::domain(format!(
                "state needs at least two tokens, got {}",
                q.len()
            )));
        }
        if let Some(v) = q.iter().find(|v| !v.is_finite() || **v < 0.0) {
            return Err(AmmError::domain(format!(
                "share counts must be finite and nonnegative, got {v}"
            )));
        }
        match self {
            CurveSpec::LsLmsr { .. } if q.iter().sum::<f64>() <= 0.0 => Err(AmmError::domain(
                "ls_lmsr is undefined when the total share count is zero",
            )),
            CurveSpec::ConstantMean { weights } if weights.len() != q.len() => {
                Err(AmmError::domain(format!(
                    "constant mean has {} weights but the state has {} tokens",
                    weights.len(),
                    q.len()
                )))
            }
            _ => Ok(()),
        }
    }

    pub fn cost(&self, q: &[f64]) -> Result<f64> {
        self.check_state(q)?;
        let c = match self {
            CurveSpec::Lmsr { liquidity } => log_sum_exp(q, *liquidity).value(*liquidity),
            CurveSpec::LsLmsr { alpha } => {
                let b = alpha * q.iter().sum::<f64>();
                log_sum_exp(q, b).value(b)
            }
            CurveSpec::ConstantProduct {} => q.iter().product(),
            CurveSpec::ConstantMean { weights } => {
                q.iter().zip(weights).map(|(x, w)| x.powf(*w)).product()
            }
            CurveSpec::ConstantSum {} => q.iter().sum(),
            CurveSpec::Ellipse { center, cross, .. } => {
                let square: f64 = q.iter().map(|x| (x - center).powi(2)).sum();
                square + cross * pair_sum(q)
            }
        };
        Ok(c)
    }

    /// Raw marginal price `∂C/∂q_i`.
    pub fn price(&self, q: &[f64], i: usize) -> Result<f64> {
        self.check_state(q)?;
        if i >= q.len() {
            return Err(AmmError::domain(format!(
                "token index {i} out of range for {} tokens",
                q.len()
            )));
        }
        let p = match self {
            CurveSpec::Lmsr { liquidity } => {
                let lse = log_sum_exp(q, *liquidity);
                lse.weight(q[i]) / lse.shifted_sum
            }
            CurveSpec::LsLmsr { alpha } => {
                let total: f64 = q.iter().sum();
                let b = alpha * total;
                let lse = log_sum_exp(q, b);
                let weighted: f64 = q.iter().map(|x| x * lse.weight(*x)).sum();
                alpha * lse.log_sum() + (lse.weight(q[i]) * total - weighted) / (total * lse.shifted_sum)
            }
            CurveSpec::ConstantProduct {} => others(q, i).product(),
            CurveSpec::ConstantMean { weights } => {
                let rest: f64 = q
                    .iter()
                    .zip(weights)
                    .enumerate()
                    .filter(|(j, _)| *j != i)
                    .map(|(_, (x, w))| x.powf(*w))
                    .product();
                let w = weights[i];
                let own = if q[i] == 0.0 && w == 1.0 {
                    1.0
                } else {
                    w * q[i].powf(w - 1.0)
                };
                own * rest
            }
            CurveSpec::ConstantSum {} => 1.0,
            CurveSpec::Ellipse { center, cross, .. } => {
                2.0 * (q[i] - center) + cross * others(q, i).sum::<f64>()
            }
        };
        if !p.is_finite() {
            return Err(AmmError::domain(format!(
                "price of token {i} is unbounded at this state"
            )));
        }
        Ok(p)
    }

    pub fn price_magnitude(&self, q: &[f64], i: usize) -> Result<f64> {
        self.price(q, i).map(f64::abs)
    }

    pub fn gradient(&self, q: &[f64]) -> Result<Vec<f64>> {
        (0..q.len()).map(|i| self.price(q, i)).collect()
    }

    /// `P_x / P_y` on a two-token state.
    pub fn price_ratio(&self, q: &[f64]) -> Result<f64> {
        if q.len() != 2 {
            return Err(AmmError::domain("price ratio is defined for two-token states"));
        }
        let px = self.price(q, 0)?;
        let py = self.price(q, 1)?;
        if py == 0.0 {
            return Err(AmmError::SingularSlope { token: 1 });
        }
        Ok(px / py)
    }

    /// Slope `dy/dx = −P_x / P_y` of the constant-cost curve through a two-token state.
    pub fn tangent_slope(&self, q: &[f64]) -> Result<f64> {
        self.price_ratio(q).map(|r| -r)
    }
}

/// `Σ exp(q_i / b)` evaluated as `exp(shift) · shifted_sum` with
/// `shift = max q_i / b`, so every exponent is ≤ 0.
struct LogSumExp {
    scale: f64,
    shift: f64,
    shifted_sum: f64,
}

impl LogSumExp {
    fn weight(&self, x: f64) -> f64 {
        (x / self.scale - self.shift).exp()
    }

    fn log_sum(&self) -> f64 {
        self.shift + self.shifted_sum.ln()
    }

    fn value(&self, b: f64) -> f64 {
        b * self.log_sum()
    }
}

fn log_sum_exp(q: &[f64], scale: f64) -> LogSumExp {
    let shift = q.iter().fold(f64::NEG_INFINITY, |m, x| m.max(x / scale));
    let shifted_sum = q.iter().map(|x| (x / scale - shift).exp()).sum();
    LogSumExp {
        scale,
        shift,
        shifted_sum,
    }
}

/// Sum over unordered pairs, `Σ_{i<j} q_i q_j`.
pub(crate) fn pair_sum(q: &[f64]) -> f64 {
    let mut acc = 0.0;
    for (i, x) in q.iter().enumerate() {
        for y in &q[i + 1..] {
            acc += x * y;
        }
    }
    acc
}

fn others(q: &[f64], i: usize) -> impl Iterator<Item = f64> + '_ {
    q.iter()
        .enumerate()
        .filter(move |(j, _)| *j != i)
        .map(|(_, x)| *x)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn reference_costs() {
        let q = [1000.0, 1000.0];
        assert!(close(CurveSpec::ls_lmsr(1.0).cost(&q).unwrap(), 2386.294362, 1e-6));
        assert!(close(CurveSpec::lmsr(1.0).cost(&q).unwrap(), 1000.693147, 1e-6));
        assert_eq!(CurveSpec::circle(6000.0).cost(&q).unwrap(), 50_000_000.0);
        assert_eq!(CurveSpec::constant_sum().cost(&q).unwrap(), 2000.0);
        assert_eq!(CurveSpec::constant_product().cost(&q).unwrap(), 1_000_000.0);
        let c = CurveSpec::lmsr(1.0).cost(&[0.0, 0.0]).unwrap();
        assert!(close(c, std::f64::consts::LN_2, 1e-15));
    }

    #[test]
    fn reference_prices() {
        let q = [1000.0, 1000.0];
        assert_eq!(CurveSpec::lmsr(1.0).price(&q, 0).unwrap(), 0.5);
        let p = CurveSpec::ls_lmsr(1.0).price(&q, 0).unwrap();
        assert!(close(p, 1.193147181, 1e-9));
        assert_eq!(CurveSpec::circle(6000.0).price(&q, 0).unwrap(), -10000.0);
        assert_eq!(CurveSpec::circle(6000.0).price_magnitude(&q, 1).unwrap(), 10000.0);
        assert_eq!(CurveSpec::constant_sum().price(&[3.0, 7.0, 2.0], 2).unwrap(), 1.0);
    }

    #[test]
    fn ls_lmsr_prices_on_the_axis() {
        let q = [0.0, 1817.07452949];
        let spec = CurveSpec::ls_lmsr(1.0);
        assert!(close(spec.price(&q, 0).unwrap(), 0.8511445298, 1e-9));
        assert!(close(spec.price(&q, 1).unwrap(), 1.313261687, 1e-9));
        assert!(close(spec.price_ratio(&q).unwrap(), 0.6481149479, 1e-9));
        let r = spec.price_ratio(&[100.0, 1750.618429]).unwrap();
        assert!(close(r, 0.6809820540, 1e-9));
    }

    #[test]
    fn slopes() {
        assert_eq!(CurveSpec::constant_sum().tangent_slope(&[1000.0, 1000.0]).unwrap(), -1.0);
        assert_eq!(CurveSpec::constant_product().tangent_slope(&[2000.0, 500.0]).unwrap(), -0.25);
        let s = CurveSpec::circle(6000.0).tangent_slope(&[0.0, 2258.342613]).unwrap();
        assert!(close(s, -1.603567451, 1e-8));
        for spec in [
            CurveSpec::lmsr(3.0),
            CurveSpec::ls_lmsr(0.5),
            CurveSpec::constant_product(),
            CurveSpec::constant_mean(vec![2.0, 2.0]),
            CurveSpec::constant_sum(),
            CurveSpec::circle(6000.0),
            CurveSpec::ellipse(-6000.0, 0.0, Branch::ConcaveUpper),
        ] {
            assert!(close(spec.price_ratio(&[321.0, 321.0]).unwrap(), 1.0, 1e-12), "{spec:?}");
        }
    }

    #[test]
    fn vertical_tangent_is_singular() {
        let err = CurveSpec::constant_product().tangent_slope(&[5.0, 0.0]);
        assert!(err.is_ok());
        let err = CurveSpec::constant_product().tangent_slope(&[0.0, 5.0]).unwrap_err();
        assert_eq!(err, AmmError::SingularSlope { token: 1 });
    }

    #[test]
    fn lmsr_survives_large_exponents() {
        let spec = CurveSpec::lmsr(1.0);
        let q = [1.0e6, 1.0e6 - 3.0];
        let c = spec.cost(&q).unwrap();
        assert!(c.is_finite());
        assert!(close(c, 1.0e6 + (1.0 + (-3.0f64).exp()).ln(), 1e-9));
        let p: f64 = spec.gradient(&q).unwrap().iter().sum();
        assert!(close(p, 1.0, 1e-15));
    }

    #[test]
    fn domain_errors() {
        assert!(matches!(
            CurveSpec::ls_lmsr(1.0).cost(&[0.0, 0.0]),
            Err(AmmError::Domain(_))
        ));
        assert!(matches!(CurveSpec::constant_sum().cost(&[1.0]), Err(AmmError::Domain(_))));
        assert!(matches!(CurveSpec::lmsr(0.0).cost(&[1.0, 1.0]), Err(AmmError::Domain(_))));
        assert!(matches!(CurveSpec::lmsr(1.0).cost(&[-1.0, 1.0]), Err(AmmError::Domain(_))));
        assert!(matches!(
            CurveSpec::constant_mean(vec![1.0, 2.0]).cost(&[1.0, 1.0, 1.0]),
            Err(AmmError::Domain(_))
        ));
        assert!(matches!(
            CurveSpec::constant_mean(vec![0.5, 2.0]).price(&[0.0, 1.0], 0),
            Err(AmmError::Domain(_))
        ));
    }

    #[test]
    fn ellipse_cross_term_counts_each_pair_once() {
        // (x-10)^2 + (y-10)^2 + 1.5xy at (2, 3)
        let spec = CurveSpec::ellipse(10.0, 1.5, Branch::ConvexLower);
        assert_eq!(spec.cost(&[2.0, 3.0]).unwrap(), 64.0 + 49.0 + 9.0);
        assert_eq!(pair_sum(&[1.0, 2.0, 3.0]), 11.0);
    }

    #[test]
    fn spec_json_is_strict() {
        let spec: CurveSpec = serde_json::from_str(r#"{"family":"ls_lmsr","alpha":1}"#).unwrap();
        assert_eq!(spec, CurveSpec::ls_lmsr(1.0));
        let spec: CurveSpec = serde_json::from_str(r#"{"family":"ellipse","center_a":6000}"#).unwrap();
        assert_eq!(spec, CurveSpec::circle(6000.0));
        let err = serde_json::from_str::<CurveSpec>(r#"{"family":"constant_sum","alpha":1}"#)
            .unwrap_err()
            .to_string();
        assert!(err.contains("alpha"), "{err}");
        assert!(serde_json::from_str::<CurveSpec>(r#"{"family":"lmsr"}"#).is_err());
    }
}
