//! Front-running (sandwich) simulation.
//!
//! The attacker sees a victim's pending exact-input order, buys the victim's
//! out-token with a fixed budget of the in-token, lets the victim trade at the
//! worse price, then buys back exactly the budget. Whatever out-token is left
//! over is the attacker's profit and equals the victim's slippage when the
//! attacker's legs are the only other trades.

use serde::{Deserialize, Serialize};

use crate::curves::CurveSpec;
use crate::engine::Market;
use crate::error::{AmmError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VictimOrder {
    pub token_in: usize,
    pub coins_in: f64,
}

/// All amounts in coins. Profit is denominated in the victim's out-token.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FrontRunReport {
    pub attacker_budget: f64,
    pub attacker_bought: f64,
    pub attacker_sold: f64,
    pub attacker_profit: f64,
    pub victim_received: f64,
    pub victim_baseline: f64,
    pub victim_slippage: f64,
}

/// A report plus the share vectors after each of the three legs.
#[derive(Debug, Clone, PartialEq)]
pub struct FrontRunTrace {
    pub report: FrontRunReport,
    pub after_front_run: Vec<f64>,
    pub after_victim: Vec<f64>,
    pub after_back_run: Vec<f64>,
}

pub fn simulate_frontrun(market: &Market, victim: &VictimOrder, budget: f64) -> Result<FrontRunReport> {
    trace_frontrun(market, victim, budget).map(|t| t.report)
}

/// Runs the three legs on a scratch copy of `market`; the original is not touched.
pub fn trace_frontrun(market: &Market, victim: &VictimOrder, budget: f64) -> Result<FrontRunTrace> {
    if market.shares().len() != 2 {
        return Err(AmmError::domain("front-running is simulated on two-token markets"));
    }
    if !(budget.is_finite() && budget >= 0.0) {
        return Err(AmmError::domain(format!("budget must be nonnegative, got {budget}")));
    }
    if victim.token_in > 1 {
        return Err(AmmError::domain(format!("victim token {} out of range", victim.token_in)));
    }
    let input = victim.token_in;
    let output = 1 - input;
    let leg = |leg: &'static str| move |e: AmmError| AmmError::InfeasibleAttack {
        leg,
        source: Box::new(e),
    };

    let victim_baseline = market
        .quote(input, output, victim.coins_in)
        .map_err(leg("baseline"))?
        .coins_out;

    let mut scratch = market.clone();
    let front = scratch.execute(input, output, budget).map_err(leg("front-run"))?;
    let after_front_run = scratch.shares().to_vec();
    let victim_trade = scratch
        .execute(input, output, victim.coins_in)
        .map_err(leg("victim"))?;
    let after_victim = scratch.shares().to_vec();
    let back = scratch
        .execute_exact_out(output, input, budget)
        .map_err(leg("back-run"))?;

    let report = FrontRunReport {
        attacker_budget: budget,
        attacker_bought: front.coins_out,
        attacker_sold: back.coins_in,
        attacker_profit: front.coins_out - back.coins_in,
        victim_received: victim_trade.coins_out,
        victim_baseline,
        victim_slippage: victim_baseline - victim_trade.coins_out,
    };
    Ok(FrontRunTrace {
        report,
        after_front_run,
        after_victim,
        after_back_run: scratch.shares().to_vec(),
    })
}

/// Outcome of one family in [`compare_families`].
#[derive(Debug, Clone, PartialEq)]
pub struct FamilyOutcome {
    pub spec: CurveSpec,
    pub result: Result<FrontRunReport>,
}

/// Runs the same sandwich against each family, all opened with the same coin
/// deposits at unit scale. Per-family failures are recorded, not propagated.
pub fn compare_families(
    specs: &[CurveSpec],
    deposits: &[f64],
    victim: &VictimOrder,
    budget: f64,
) -> Vec<FamilyOutcome> {
    let scales = vec![1.0; deposits.len()];
    specs
        .iter()
        .map(|spec| {
            let result = Market::create(spec.clone(), deposits, &scales)
                .map_err(|e| AmmError::InfeasibleAttack {
                    leg: "setup",
                    source: Box::new(e),
                })
                .and_then(|m| simulate_frontrun(&m, victim, budget));
            FamilyOutcome {
                spec: spec.clone(),
                result,
            }
        })
        .collect()
}
