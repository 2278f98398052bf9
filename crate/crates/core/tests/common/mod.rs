//! Independent reference computations shared by the integration tests.
//!
//! Nothing here calls into the solver; costs are evaluated with the plain
//! textbook formulas so that they can check the stabilized implementations.

#![allow(dead_code)]

use amm_core::CurveSpec;

/// LS-LMSR cost `b ln(Σ exp(q_i/b))`, `b = α Σ q`, without any shifting.
pub fn naive_ls_lmsr_cost(alpha: f64, q: &[f64]) -> f64 {
    let b = alpha * q.iter().sum::<f64>();
    b * q.iter().map(|v| (v / b).exp()).sum::<f64>().ln()
}

/// Output of an exact-input LS-LMSR swap found by a uniform grid scan for the
/// first sign change followed by plain bisection.
pub fn ls_lmsr_swap_oracle(alpha: f64, q: [f64; 2], amount_in: f64) -> Option<f64> {
    let level = naive_ls_lmsr_cost(alpha, &q);
    let x = q[0] + amount_in;
    let g = |y: f64| naive_ls_lmsr_cost(alpha, &[x, y]) - level;
    let steps = 2000;
    let mut prev_y = 0.0;
    let mut prev_g = g(prev_y);
    if prev_g == 0.0 {
        return Some(q[1]);
    }
    for k in 1..=steps {
        let y = q[1] * k as f64 / steps as f64;
        let gy = g(y);
        if gy == 0.0 {
            return Some(q[1] - y);
        }
        if gy.signum() != prev_g.signum() {
            let (mut lo, mut hi) = (prev_y, y);
            let g_lo = prev_g;
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                if mid == lo || mid == hi {
                    break;
                }
                if g(mid).signum() == g_lo.signum() {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            return Some(q[1] - 0.5 * (lo + hi));
        }
        prev_y = y;
        prev_g = gy;
    }
    None
}

/// Central finite difference of the cost with step `max(1e-6 |q_i|, 1e-6)`.
pub fn fd_price(spec: &CurveSpec, q: &[f64], i: usize) -> f64 {
    let h = (1e-6 * q[i].abs()).max(1e-6);
    let mut up = q.to_vec();
    let mut down = q.to_vec();
    up[i] += h;
    down[i] -= h;
    let up_x = up[i];
    let down_x = down[i];
    (spec.cost(&up).unwrap() - spec.cost(&down).unwrap()) / (up_x - down_x)
}

pub fn rel_err(actual: f64, expected: f64) -> f64 {
    (actual - expected).abs() / expected.abs().max(f64::MIN_POSITIVE)
}
