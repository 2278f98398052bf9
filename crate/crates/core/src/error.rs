use thiserror::Error;

/// Errors produced by curve evaluation, swap solving, and market operations.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum AmmError {
    /// Input outside the domain of a curve or operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// The constant-cost curve has a vertical tangent at the queried state.
    #[error("singular slope: price of token {token} is zero")]
    SingularSlope { token: usize },

    #[error("insufficient liquidity: {0}")]
    InsufficientLiquidity(String),

    #[error("solver did not converge after {iterations} iterations")]
    NoConvergence { iterations: usize },

    /// The trade would leave a negative share component in the pool.
    #[error("trade rejected: reserve of token {token} would become {value}")]
    NegativeReserveRejected { token: usize, value: f64 },

    /// Ellipse locus does not pass through the deposits on the requested branch.
    #[error("geometry error: {0}")]
    Geometry(String),

    #[error("rebase plan is stale: market changed since planning")]
    StalePlan,

    /// A rebase would have to withdraw coins from the pool instead of depositing them.
    #[error("rebase rejected: token {token} would need a withdrawal of {coins} coins")]
    WithdrawalRequired { token: usize, coins: f64 },

    #[error("cost drift: cached {cached}, recomputed {actual}")]
    CostDrift { cached: f64, actual: f64 },

    #[error("infeasible attack at {leg} leg: {source}")]
    InfeasibleAttack {
        leg: &'static str,
        #[source]
        source: Box<AmmError>,
    },
}

impl AmmError {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        AmmError::Domain(msg.into())
    }

    /// Stable snake_case identifier, used in structured error output.
    pub fn kind(&self) -> &'static str {
        match self {
            AmmError::Domain(_) => "domain_error",
            AmmError::SingularSlope { .. } => "singular_slope",
            AmmError::InsufficientLiquidity(_) => "insufficient_liquidity",
            AmmError::NoConvergence { .. } => "no_convergence",
            AmmError::NegativeReserveRejected { .. } => "negative_reserve_rejected",
            AmmError::Geometry(_) => "geometry_error",
            AmmError::StalePlan => "stale_plan",
            AmmError::WithdrawalRequired { .. } => "withdrawal_required",
            AmmError::CostDrift { .. } => "cost_drift",
            AmmError::InfeasibleAttack { .. } => "infeasible_attack",
        }
    }

    /// Innermost error, looking through attack-leg wrappers.
    pub fn root_cause(&self) -> &AmmError {
        match self {
            AmmError::InfeasibleAttack { source, .. } => source.root_cause(),
            other => other,
        }
    }
}

pub type Result<T> = std::result::Result<T, AmmError>;
