//! Automated market makers built on cost functions.
//!
//! Six families are supported: LMSR, liquidity-sensitive LMSR, constant
//! product, constant mean, constant sum, and constant ellipse/circle. The
//! crate covers pure pricing ([`curves`]), swap solving on a constant-cost
//! locus ([`solver`]), stateful markets with share scaling and liquidity
//! rebases ([`engine`]), price-amplitude profiles and scoring-rule utilities
//! ([`analysis`]), and sandwich-attack simulation ([`attacks`]).
//!
//! ```
//! use amm_core::{CurveSpec, Market};
//!
//! let mut market = Market::create(CurveSpec::ls_lmsr(1.0), &[1000.0, 1000.0], &[1.0, 1.0])?;
//! let receipt = market.execute(0, 1, 500.0)?;
//! assert!((receipt.coins_out - 559.926783).abs() < 1e-5);
//! # Ok::<(), amm_core::AmmError>(())
//! ```

pub mod analysis;
pub mod attacks;
pub mod curves;
pub mod engine;
pub mod error;
pub mod solver;

pub use analysis::{
    expected_profit, profile, sample_curve, scoring_reward, Bound, CurveSample, Interval,
    MarketProfile, ProbabilityEstimate,
};
pub use attacks::{compare_families, simulate_frontrun, FamilyOutcome, FrontRunReport, VictimOrder};
pub use curves::{Branch, CurveSpec};
pub use engine::{Market, RebasePlan, TradeReceipt};
pub use error::{AmmError, Result};
pub use solver::{swap_exact_in, swap_exact_out, SolverConfig, SwapProblem};
