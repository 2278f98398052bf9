//! Scenario files: one market and an ordered list of actions against it.
//!
//! ```json
//! {
//!   "curve": {"family": "ls_lmsr", "alpha": 1},
//!   "deposits": [1000, 1000],
//!   "actions": [{"action": "swap", "token_in": 0, "token_out": 1, "coins_in": 500}]
//! }
//! ```

use amm_core::attacks::trace_frontrun;
use amm_core::{profile, sample_curve, CurveSpec, Market, VictimOrder};
use serde::Deserialize;
use serde_json::{json, Value};

use crate::{to_rounded_json, CliError};

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    pub curve: CurveSpec,
    pub deposits: Vec<f64>,
    /// Coins per share for each token; all ones when omitted.
    #[serde(default)]
    pub scales: Option<Vec<f64>>,
    pub actions: Vec<Action>,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(tag = "action", rename_all = "snake_case", deny_unknown_fields)]
pub enum Action {
    /// Executes a trade. Exactly one of `coins_in`, `coins_out` must be set.
    Swap {
        token_in: usize,
        token_out: usize,
        coins_in: Option<f64>,
        coins_out: Option<f64>,
    },
    /// Prices a trade without executing it.
    Quote {
        token_in: usize,
        token_out: usize,
        coins_in: Option<f64>,
        coins_out: Option<f64>,
    },
    /// Simulates a sandwich against the current state; the market is unchanged.
    Frontrun { victim: VictimOrder, budget: f64 },
    /// Plans and applies a rebase of `token`.
    Rebase { token: usize, reference_rate: f64 },
    Profile {},
    /// Samples the current locus on `[xmin, xmax]`.
    Sample { xmin: f64, xmax: f64, points: usize },
}

impl ScenarioFile {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let file: ScenarioFile = serde_json::from_str(text).map_err(|e| CliError::Parse(e.to_string()))?;
        if let Some(scales) = &file.scales {
            if scales.len() != file.deposits.len() {
                return Err(CliError::Parse(format!(
                    "{} deposits but {} scales",
                    file.deposits.len(),
                    scales.len()
                )));
            }
        }
        for (i, action) in file.actions.iter().enumerate() {
            if let Action::Swap { coins_in, coins_out, .. } | Action::Quote { coins_in, coins_out, .. } = action {
                if coins_in.is_some() == coins_out.is_some() {
                    return Err(CliError::Parse(format!(
                        "action {i}: exactly one of `coins_in` and `coins_out` is required"
                    )));
                }
            }
        }
        Ok(file)
    }

    pub fn market(&self) -> Result<Market, CliError> {
        let scales = self.scales.clone().unwrap_or_else(|| vec![1.0; self.deposits.len()]);
        Ok(Market::create(self.curve.clone(), &self.deposits, &scales)?)
    }
}

/// Outcome of running a scenario: the emitted JSON lines and, if an action
/// failed, the error and the index of the failing action (`None` when the
/// market itself could not be created).
pub struct RunOutput {
    pub lines: Vec<Value>,
    pub failure: Option<(Option<usize>, CliError)>,
}

impl RunOutput {
    pub fn exit_code(&self) -> u8 {
        self.failure.as_ref().map_or(0, |(_, e)| e.exit_code())
    }

    /// Newline-delimited JSON, including the error object on failure.
    pub fn render(&self) -> String {
        let mut out = String::new();
        let error = self.failure.as_ref().map(|(i, e)| e.to_json(*i));
        for line in self.lines.iter().chain(error.as_ref()) {
            out.push_str(&line.to_string());
            out.push('\n');
        }
        out
    }
}

/// Runs every action in order, stopping at the first failure.
pub fn run(file: &ScenarioFile) -> RunOutput {
    let mut lines = Vec::new();
    let mut market = match file.market() {
        Ok(m) => m,
        Err(e) => return RunOutput { lines, failure: Some((None, e)) },
    };
    for (i, action) in file.actions.iter().enumerate() {
        match apply(&mut market, action) {
            Ok(v) => lines.push(v),
            Err(e) => return RunOutput { lines, failure: Some((Some(i), e)) },
        }
    }
    RunOutput { lines, failure: None }
}

pub fn run_text(text: &str) -> RunOutput {
    match ScenarioFile::parse(text) {
        Ok(file) => run(&file),
        Err(e) => RunOutput {
            lines: Vec::new(),
            failure: Some((None, e)),
        },
    }
}

fn apply(market: &mut Market, action: &Action) -> Result<Value, CliError> {
    let value = match *action {
        Action::Swap { token_in, token_out, coins_in, coins_out } => {
            let receipt = match (coins_in, coins_out) {
                (Some(c), _) => market.execute(token_in, token_out, c)?,
                (None, Some(c)) => market.execute_exact_out(token_in, token_out, c)?,
                (None, None) => unreachable!("checked at parse time"),
            };
            json!({
                "action": "swap",
                "receipt": to_rounded_json(&receipt),
                "shares": to_rounded_json(&market.shares()),
            })
        }
        Action::Quote { token_in, token_out, coins_in, coins_out } => {
            let receipt = match (coins_in, coins_out) {
                (Some(c), _) => market.quote(token_in, token_out, c)?,
                (None, Some(c)) => market.quote_exact_out(token_in, token_out, c)?,
                (None, None) => unreachable!("checked at parse time"),
            };
            json!({ "action": "quote", "receipt": to_rounded_json(&receipt) })
        }
        Action::Frontrun { victim, budget } => {
            let trace = trace_frontrun(market, &victim, budget)?;
            json!({
                "action": "frontrun",
                "report": to_rounded_json(&trace.report),
                "after_front_run": to_rounded_json(&trace.after_front_run),
                "after_victim": to_rounded_json(&trace.after_victim),
                "after_back_run": to_rounded_json(&trace.after_back_run),
            })
        }
        Action::Rebase { token, reference_rate } => {
            let plan = market.plan_rebase(token, reference_rate)?;
            market.apply_rebase(&plan)?;
            json!({
                "action": "rebase",
                "target_shares": to_rounded_json(&plan.target_shares),
                "new_scales": to_rounded_json(&plan.new_scales),
                "deposit_coins": to_rounded_json(&plan.deposit_coins),
                "coins": to_rounded_json(&market.coins()),
            })
        }
        Action::Profile {} => json!({ "action": "profile", "profile": to_rounded_json(&profile(market)?) }),
        Action::Sample { xmin, xmax, points } => {
            let sample = sample_curve(market.spec(), market.cost_value(), xmin, xmax, points)?;
            json!({ "action": "sample", "sample": to_rounded_json(&sample) })
        }
    };
    Ok(value)
}
