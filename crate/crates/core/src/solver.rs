//! Swap quoting on a constant-cost locus.
//!
//! A swap adds `amount_in` shares of one token and removes `amount_out` shares
//! of another so that the cost value is unchanged. Every family except LS-LMSR
//! has a closed-form inverse along one coordinate; LS-LMSR is solved by
//! bisection on a bracket that is guaranteed to hold the root when a feasible
//! trade exists.

use crate::curves::{pair_sum, Branch, CurveSpec};
use crate::error::{AmmError, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverConfig {
    /// Cost-conservation tolerance, relative to `max(1, |C|)`.
    pub abs_tol: f64,
    pub max_iter: usize,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            abs_tol: 1e-12,
            max_iter: 200,
        }
    }
}

impl SolverConfig {
    fn check(&self) -> Result<()> {
        if self.abs_tol > 0.0 && self.max_iter > 0 {
            Ok(())
        } else {
            Err(AmmError::domain("solver tolerance and iteration limit must be positive"))
        }
    }

    fn tolerance(&self, level: f64) -> f64 {
        self.abs_tol * level.abs().max(1.0)
    }
}

/// A two-sided trade against a pool. `amount` is the exact input for
/// [`swap_exact_in`] and the exact output for [`swap_exact_out`].
#[derive(Debug, Clone, Copy)]
pub struct SwapProblem<'a> {
    pub spec: &'a CurveSpec,
    pub reserves: &'a [f64],
    pub token_in: usize,
    pub token_out: usize,
    pub amount: f64,
}

impl<'a> SwapProblem<'a> {
    pub fn new(
        spec: &'a CurveSpec,
        reserves: &'a [f64],
        token_in: usize,
        token_out: usize,
        amount: f64,
    ) -> Self {
        SwapProblem {
            spec,
            reserves,
            token_in,
            token_out,
            amount,
        }
    }

    fn check(&self) -> Result<f64> {
        let level = self.spec.cost(self.reserves)?;
        let n = self.reserves.len();
        if self.token_in >= n || self.token_out >= n {
            return Err(AmmError::domain(format!(
                "token index out of range for {n} tokens"
            )));
        }
        if self.token_in == self.token_out {
            return Err(AmmError::domain("token_in and token_out must differ"));
        }
        if !(self.amount.is_finite() && self.amount >= 0.0) {
            return Err(AmmError::domain(format!(
                "trade amount must be finite and nonnegative, got {}",
                self.amount
            )));
        }
        Ok(level)
    }
}

/// Shares of `token_out` received for exactly `amount` shares of `token_in`.
pub fn swap_exact_in(p: &SwapProblem<'_>, cfg: &SolverConfig) -> Result<f64> {
    cfg.check()?;
    let level = p.check()?;
    if p.amount == 0.0 {
        return Ok(0.0);
    }
    let mut after = p.reserves.to_vec();
    after[p.token_in] += p.amount;
    if !after[p.token_in].is_finite() {
        return Err(AmmError::domain("post-trade reserve overflows"));
    }
    let reserve_out = p.reserves[p.token_out];
    let t = solve_locus(p.spec, &after, p.token_out, level, (0.0, reserve_out), cfg)?
        .ok_or_else(|| {
            AmmError::InsufficientLiquidity(format!(
                "no point on the locus pays out within the {reserve_out} shares of token {} held",
                p.token_out
            ))
        })?;
    after[p.token_out] = t;
    verify_level(p.spec, &after, level, cfg)?;
    Ok((reserve_out - t).max(0.0))
}

/// Shares of `token_in` that must be paid to receive exactly `amount` shares
/// of `token_out`.
pub fn swap_exact_out(p: &SwapProblem<'_>, cfg: &SolverConfig) -> Result<f64> {
    cfg.check()?;
    let level = p.check()?;
    if p.amount == 0.0 {
        return Ok(0.0);
    }
    let reserve_out = p.reserves[p.token_out];
    if p.amount > reserve_out {
        return Err(AmmError::InsufficientLiquidity(format!(
            "requested {} shares of token {} but only {reserve_out} are held",
            p.amount, p.token_out
        )));
    }
    let mut after = p.reserves.to_vec();
    after[p.token_out] = if p.amount == reserve_out {
        0.0
    } else {
        reserve_out - p.amount
    };
    let reserve_in = p.reserves[p.token_in];
    let t = solve_locus(
        p.spec,
        &after,
        p.token_in,
        level,
        (reserve_in, f64::INFINITY),
        cfg,
    )?
    .ok_or_else(|| {
        AmmError::InsufficientLiquidity(format!(
            "no finite payment of token {} releases {} shares of token {}",
            p.token_in, p.amount, p.token_out
        ))
    })?;
    after[p.token_in] = t;
    verify_level(p.spec, &after, level, cfg)?;
    Ok((t - reserve_in).max(0.0))
}

fn verify_level(spec: &CurveSpec, q: &[f64], level: f64, cfg: &SolverConfig) -> Result<()> {
    let drift = (cost_or_limit(spec, q)? - level).abs();
    if drift <= cfg.tolerance(level) {
        Ok(())
    } else {
        Err(AmmError::NoConvergence {
            iterations: cfg.max_iter,
        })
    }
}

/// Value of coordinate `target` that puts `q` (other coordinates fixed) on
/// the level set `C = level`, restricted to `bracket`. The upper end of the
/// bracket may be infinite, in which case it is searched for by doubling.
///
/// Returns `Ok(None)` when the locus has no point inside the bracket. A root
/// within cost tolerance of a bracket end snaps to that end.
pub fn solve_locus(
    spec: &CurveSpec,
    q: &[f64],
    target: usize,
    level: f64,
    bracket: (f64, f64),
    cfg: &SolverConfig,
) -> Result<Option<f64>> {
    cfg.check()?;
    spec.validate()?;
    if target >= q.len() || q.len() < 2 {
        return Err(AmmError::domain("target coordinate out of range"));
    }
    let (lo, hi) = bracket;
    if !(lo.is_finite() && lo >= 0.0 && hi >= lo) {
        return Err(AmmError::domain(format!("invalid bracket [{lo}, {hi}]")));
    }
    let tol = cfg.tolerance(level);
    let mut probe = q.to_vec();
    let mut residual = |t: f64| -> Result<f64> {
        probe[target] = t;
        Ok(cost_or_limit(spec, &probe)? - level)
    };

    let candidate = match closed_form(spec, q, target, level) {
        ClosedForm::Root(t) => t,
        ClosedForm::NoRoot => None,
        ClosedForm::Bisect => return bisect(&mut residual, lo, hi, tol, cfg.max_iter),
    };

    match candidate {
        Some(t) if t >= lo && t <= hi => Ok(Some(t)),
        _ => {
            // Rounding can push a boundary root just outside the bracket.
            for end in [lo, hi] {
                if end.is_finite() && residual(end)?.abs() <= tol {
                    return Ok(Some(end));
                }
            }
            Ok(None)
        }
    }
}

enum ClosedForm {
    Root(Option<f64>),
    NoRoot,
    Bisect,
}

fn closed_form(spec: &CurveSpec, q: &[f64], target: usize, level: f64) -> ClosedForm {
    let rest = || {
        q.iter()
            .enumerate()
            .filter(move |(j, _)| *j != target)
            .map(|(_, v)| *v)
    };
    match spec {
        CurveSpec::ConstantSum {} => ClosedForm::Root(Some(level - rest().sum::<f64>())),
        CurveSpec::ConstantProduct {} => {
            let others: f64 = rest().product();
            if others > 0.0 {
                ClosedForm::Root(Some(level / others))
            } else {
                ClosedForm::NoRoot
            }
        }
        CurveSpec::ConstantMean { weights } => {
            if level <= 0.0 || rest().any(|v| v == 0.0) || weights.len() != q.len() {
                return ClosedForm::NoRoot;
            }
            let log_rest: f64 = q
                .iter()
                .zip(weights)
                .enumerate()
                .filter(|(j, _)| *j != target)
                .map(|(_, (v, w))| w * v.ln())
                .sum();
            ClosedForm::Root(Some(((level.ln() - log_rest) / weights[target]).exp()))
        }
        CurveSpec::Lmsr { liquidity } => {
            // t = b ln(exp(K/b) - Σ exp(q_j/b)) = K + b ln(1 - Σ exp((q_j - K)/b))
            let s: f64 = rest().map(|v| ((v - level) / liquidity).exp()).sum();
            if s < 1.0 {
                ClosedForm::Root(Some(level + liquidity * (-s).ln_1p()))
            } else {
                ClosedForm::NoRoot
            }
        }
        CurveSpec::Ellipse {
            center,
            cross,
            branch,
        } => {
            let others: Vec<f64> = rest().collect();
            let linear = cross * others.iter().sum::<f64>() - 2.0 * center;
            let constant = others.iter().map(|v| (v - center).powi(2)).sum::<f64>()
                + center * center
                + cross * pair_sum(&others)
                - level;
            match quadratic_roots(linear, constant) {
                Some((small, large)) => ClosedForm::Root(Some(match branch {
                    Branch::ConvexLower => small,
                    Branch::ConcaveUpper => large,
                })),
                None => ClosedForm::NoRoot,
            }
        }
        CurveSpec::LsLmsr { .. } => ClosedForm::Bisect,
    }
}

/// Real roots of `t² + b t + c = 0` in ascending order. A discriminant that is
/// negative by no more than `1e-9 · max(1, b²)` is treated as a double root.
pub(crate) fn quadratic_roots(b: f64, c: f64) -> Option<(f64, f64)> {
    let mut disc = b * b - 4.0 * c;
    if disc < 0.0 {
        if disc >= -1e-9 * (b * b).max(1.0) {
            disc = 0.0;
        } else {
            return None;
        }
    }
    let root = disc.sqrt();
    let big = -0.5 * (b + root.copysign(b));
    if big == 0.0 {
        return Some((0.0, 0.0));
    }
    let (r1, r2) = (big, c / big);
    Some((r1.min(r2), r1.max(r2)))
}

/// Cost with the LS-LMSR singularity at the origin replaced by its limit 0.
fn cost_or_limit(spec: &CurveSpec, q: &[f64]) -> Result<f64> {
    if matches!(spec, CurveSpec::LsLmsr { .. }) && q.iter().all(|v| *v == 0.0) {
        return Ok(0.0);
    }
    spec.cost(q)
}

fn bisect(
    f: &mut impl FnMut(f64) -> Result<f64>,
    mut lo: f64,
    hi: f64,
    tol: f64,
    max_iter: usize,
) -> Result<Option<f64>> {
    let mut f_lo = f(lo)?;
    if f_lo == 0.0 {
        return Ok(Some(lo));
    }
    let (mut hi, mut f_hi) = if hi.is_finite() {
        (hi, f(hi)?)
    } else {
        let mut step = lo.max(1.0);
        let mut expanded = None;
        for _ in 0..max_iter {
            let probe = lo + step;
            let value = f(probe)?;
            if value.signum() != f_lo.signum() || value.abs() <= tol {
                expanded = Some((probe, value));
                break;
            }
            step *= 2.0;
        }
        match expanded {
            Some(found) => found,
            None => return Ok(None),
        }
    };
    if f_hi == 0.0 {
        return Ok(Some(hi));
    }
    if f_lo.signum() == f_hi.signum() {
        return Ok(if f_lo.abs() <= tol {
            Some(lo)
        } else if f_hi.abs() <= tol {
            Some(hi)
        } else {
            None
        });
    }

    let mut collapsed = false;
    for _ in 0..max_iter {
        let mid = lo + 0.5 * (hi - lo);
        if mid <= lo || mid >= hi {
            collapsed = true;
            break;
        }
        let f_mid = f(mid)?;
        if f_mid == 0.0 {
            return Ok(Some(mid));
        }
        if f_mid.signum() == f_lo.signum() {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
            f_hi = f_mid;
        }
    }
    let (best, residual) = if f_lo.abs() <= f_hi.abs() {
        (lo, f_lo)
    } else {
        (hi, f_hi)
    };
    if collapsed || residual.abs() <= tol {
        Ok(Some(best))
    } else {
        Err(AmmError::NoConvergence {
            iterations: max_iter,
        })
    }
}
