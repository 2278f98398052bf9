//! Stateful markets: creation from coin deposits, quoting and executing
//! trades, and rebasing the share-to-coin mapping.
//!
//! A market stores shares, not coins. Each token carries a scale (coins per
//! share) so that the curve can be evaluated in share units while deposits,
//! quotes, and receipts are expressed in coins.

use serde::{Deserialize, Serialize};

use crate::curves::{Branch, CurveSpec};
use crate::error::{AmmError, Result};
use crate::solver::{solve_locus, swap_exact_in, swap_exact_out, SolverConfig, SwapProblem};

/// Relative tolerance on the cached cost value after any trade.
pub const COST_DRIFT_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Market {
    spec: CurveSpec,
    shares: Vec<f64>,
    scales: Vec<f64>,
    cost_value: f64,
    #[serde(skip)]
    solver: SolverConfig,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TradeReceipt {
    pub token_in: usize,
    pub token_out: usize,
    pub coins_in: f64,
    pub coins_out: f64,
    pub shares_in: f64,
    pub shares_out: f64,
    pub cost_before: f64,
    pub cost_after: f64,
    /// `coins_in / coins_out`; zero for an empty trade.
    pub average_price: f64,
}

/// A liquidity rebase computed against one market snapshot.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RebasePlan {
    pub token: usize,
    pub target_shares: Vec<f64>,
    pub new_scales: Vec<f64>,
    pub deposit_coins: Vec<f64>,
    basis_shares: Vec<f64>,
    basis_scales: Vec<f64>,
}

impl Market {
    /// Opens a market from coin deposits. `scales[i]` is the number of coins
    /// represented by one share of token `i`.
    pub fn create(spec: CurveSpec, coin_deposits: &[f64], scales: &[f64]) -> Result<Self> {
        spec.validate()?;
        if coin_deposits.len() != scales.len() {
            return Err(AmmError::domain(format!(
                "{} deposits but {} scales",
                coin_deposits.len(),
                scales.len()
            )));
        }
        if let Some(d) = coin_deposits.iter().find(|d| !(d.is_finite() && **d > 0.0)) {
            return Err(AmmError::domain(format!(
                "deposits must be positive and finite, got {d}"
            )));
        }
        if let Some(s) = scales.iter().find(|s| !(s.is_finite() && **s > 0.0)) {
            return Err(AmmError::domain(format!(
                "scales must be positive and finite, got {s}"
            )));
        }
        let shares: Vec<f64> = coin_deposits.iter().zip(scales).map(|(c, s)| c / s).collect();
        let cost_value = spec.cost(&shares)?;
        check_branch(&spec, &shares, cost_value)?;
        Ok(Market {
            spec,
            shares,
            scales: scales.to_vec(),
            cost_value,
            solver: SolverConfig::default(),
        })
    }

    pub fn with_solver(mut self, solver: SolverConfig) -> Self {
        self.solver = solver;
        self
    }

    pub fn spec(&self) -> &CurveSpec {
        &self.spec
    }

    pub fn shares(&self) -> &[f64] {
        &self.shares
    }

    pub fn scales(&self) -> &[f64] {
        &self.scales
    }

    pub fn cost_value(&self) -> f64 {
        self.cost_value
    }

    pub fn solver(&self) -> &SolverConfig {
        &self.solver
    }

    /// Coins held per token, `shares · scale`.
    pub fn coins(&self) -> Vec<f64> {
        self.shares.iter().zip(&self.scales).map(|(q, s)| q * s).collect()
    }

    pub fn price_ratio(&self) -> Result<f64> {
        self.spec.price_ratio(&self.shares)
    }

    /// Preview of paying exactly `coins_in` of `token_in` for `token_out`.
    pub fn quote(&self, token_in: usize, token_out: usize, coins_in: f64) -> Result<TradeReceipt> {
        self.check_tokens(token_in, token_out)?;
        let shares_in = coins_in / self.scales[token_in];
        let problem = SwapProblem::new(&self.spec, &self.shares, token_in, token_out, shares_in);
        let shares_out = swap_exact_in(&problem, &self.solver)?;
        self.receipt(token_in, token_out, shares_in, shares_out)
    }

    /// Preview of receiving exactly `coins_out` of `token_out` for `token_in`.
    pub fn quote_exact_out(
        &self,
        token_in: usize,
        token_out: usize,
        coins_out: f64,
    ) -> Result<TradeReceipt> {
        self.check_tokens(token_in, token_out)?;
        let shares_out = coins_out / self.scales[token_out];
        let problem = SwapProblem::new(&self.spec, &self.shares, token_in, token_out, shares_out);
        let shares_in = swap_exact_out(&problem, &self.solver)?;
        self.receipt(token_in, token_out, shares_in, shares_out)
    }

    /// Executes an exact-input trade. The market is unchanged on error.
    pub fn execute(&mut self, token_in: usize, token_out: usize, coins_in: f64) -> Result<TradeReceipt> {
        let receipt = self.quote(token_in, token_out, coins_in)?;
        self.apply(receipt)
    }

    /// Executes an exact-output trade. The market is unchanged on error.
    pub fn execute_exact_out(
        &mut self,
        token_in: usize,
        token_out: usize,
        coins_out: f64,
    ) -> Result<TradeReceipt> {
        let receipt = self.quote_exact_out(token_in, token_out, coins_out)?;
        self.apply(receipt)
    }

    fn check_tokens(&self, token_in: usize, token_out: usize) -> Result<()> {
        let n = self.shares.len();
        if token_in >= n || token_out >= n || token_in == token_out {
            return Err(AmmError::domain(format!(
                "invalid token pair ({token_in}, {token_out}) for {n} tokens"
            )));
        }
        Ok(())
    }

    fn receipt(
        &self,
        token_in: usize,
        token_out: usize,
        shares_in: f64,
        shares_out: f64,
    ) -> Result<TradeReceipt> {
        let after = self.post_trade_shares(token_in, token_out, shares_in, shares_out)?;
        let coins_in = shares_in * self.scales[token_in];
        let coins_out = shares_out * self.scales[token_out];
        Ok(TradeReceipt {
            token_in,
            token_out,
            coins_in,
            coins_out,
            shares_in,
            shares_out,
            cost_before: self.cost_value,
            cost_after: self.spec.cost(&after)?,
            average_price: if coins_out > 0.0 { coins_in / coins_out } else { 0.0 },
        })
    }

    fn post_trade_shares(
        &self,
        token_in: usize,
        token_out: usize,
        shares_in: f64,
        shares_out: f64,
    ) -> Result<Vec<f64>> {
        let mut after = self.shares.clone();
        after[token_in] += shares_in;
        after[token_out] = if shares_out == self.shares[token_out] {
            0.0
        } else {
            after[token_out] - shares_out
        };
        reject_negative(&after)?;
        Ok(after)
    }

    fn apply(&mut self, receipt: TradeReceipt) -> Result<TradeReceipt> {
        let after = self.post_trade_shares(
            receipt.token_in,
            receipt.token_out,
            receipt.shares_in,
            receipt.shares_out,
        )?;
        check_drift(self.cost_value, receipt.cost_after)?;
        self.shares = after;
        Ok(receipt)
    }

    /// Plans a rebase of `token` toward a symmetric state.
    ///
    /// `reference_rate` is the external value of one coin of `token` in coins
    /// of the other token. The deficient token's shares are raised to match the
    /// other side, and its new scale is `P_other / (rate · P_token)` evaluated
    /// at the current state. The numeraire's scale never changes.
    pub fn plan_rebase(&self, token: usize, reference_rate: f64) -> Result<RebasePlan> {
        if self.shares.len() != 2 || token > 1 {
            return Err(AmmError::domain("rebase is defined for two-token markets"));
        }
        if !(reference_rate.is_finite() && reference_rate > 0.0) {
            return Err(AmmError::domain(format!(
                "reference price ratio must be positive, got {reference_rate}"
            )));
        }
        let other = 1 - token;
        let mut plan = RebasePlan {
            token,
            target_shares: self.shares.clone(),
            new_scales: self.scales.clone(),
            deposit_coins: vec![0.0; 2],
            basis_shares: self.shares.clone(),
            basis_scales: self.scales.clone(),
        };
        if self.shares[token] == self.shares[other] {
            return Ok(plan);
        }
        if self.shares[token] > self.shares[other] {
            return Err(AmmError::domain(format!(
                "token {token} holds more shares than token {other}; rebase the deficient side"
            )));
        }
        let p_token = self.spec.price(&self.shares, token)?;
        let p_other = self.spec.price(&self.shares, other)?;
        let new_scale = p_other / (reference_rate * p_token);
        if !(new_scale.is_finite() && new_scale > 0.0) {
            return Err(AmmError::domain(format!(
                "rebase would set a non-positive scale {new_scale}"
            )));
        }
        let target = self.shares[other];
        let deposit = new_scale * target - self.shares[token] * self.scales[token];
        if deposit < 0.0 {
            return Err(AmmError::WithdrawalRequired {
                token,
                coins: -deposit,
            });
        }
        plan.target_shares[token] = target;
        plan.new_scales[token] = new_scale;
        plan.deposit_coins[token] = deposit;
        Ok(plan)
    }

    /// Applies a plan produced by [`Market::plan_rebase`] on this exact state.
    pub fn apply_rebase(&mut self, plan: &RebasePlan) -> Result<()> {
        if plan.basis_shares != self.shares || plan.basis_scales != self.scales {
            return Err(AmmError::StalePlan);
        }
        if plan.deposit_coins.iter().any(|d| *d < 0.0) {
            return Err(AmmError::WithdrawalRequired {
                token: plan.token,
                coins: -plan.deposit_coins[plan.token],
            });
        }
        let cost_value = self.spec.cost(&plan.target_shares)?;
        self.shares = plan.target_shares.clone();
        self.scales = plan.new_scales.clone();
        self.cost_value = cost_value;
        Ok(())
    }
}

fn reject_negative(q: &[f64]) -> Result<()> {
    match q.iter().position(|v| *v < 0.0) {
        Some(token) => Err(AmmError::NegativeReserveRejected {
            token,
            value: q[token],
        }),
        None => Ok(()),
    }
}

fn check_drift(cached: f64, actual: f64) -> Result<()> {
    if (actual - cached).abs() <= COST_DRIFT_TOL * cached.abs().max(1.0) {
        Ok(())
    } else {
        Err(AmmError::CostDrift { cached, actual })
    }
}

/// The ellipse state must sit on the arc its branch selects, otherwise trades
/// would jump to the opposite arc.
fn check_branch(spec: &CurveSpec, shares: &[f64], level: f64) -> Result<()> {
    let CurveSpec::Ellipse { branch, .. } = spec else {
        return Ok(());
    };
    let cfg = SolverConfig::default();
    for target in 0..shares.len() {
        let on_branch = solve_locus(spec, shares, target, level, (0.0, f64::INFINITY), &cfg)?;
        let matches = on_branch
            .map(|v| (v - shares[target]).abs() <= 1e-9 * shares[target].abs().max(1.0))
            .unwrap_or(false);
        if !matches {
            let arc = match branch {
                Branch::ConvexLower => "convex lower",
                Branch::ConcaveUpper => "concave upper",
            };
            return Err(AmmError::Geometry(format!(
                "deposits do not lie on the {arc} arc of the ellipse in the first quadrant"
            )));
        }
    }
    Ok(())
}
