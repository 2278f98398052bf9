//! Swap and rebase results checked against independently computed values.

mod common;

use amm_core::attacks::trace_frontrun;
use amm_core::{swap_exact_in, CurveSpec, Market, SolverConfig, SwapProblem, VictimOrder};
use common::{ls_lmsr_swap_oracle, naive_ls_lmsr_cost};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn ls_lmsr_swaps_match_grid_bisection_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x15_1a5);
    let cfg = SolverConfig::default();
    let mut checked = 0;
    while checked < 1000 {
        let alpha = rng.gen_range(0.1..2.0);
        let q = [rng.gen_range(1.0..5000.0), rng.gen_range(1.0..5000.0)];
        let amount = rng.gen_range(0.0..q[1]);
        let spec = CurveSpec::ls_lmsr(alpha);
        let got = swap_exact_in(&SwapProblem::new(&spec, &q, 0, 1, amount), &cfg);
        match (got, ls_lmsr_swap_oracle(alpha, q, amount)) {
            (Ok(out), Some(expected)) => {
                assert!(
                    (out - expected).abs() <= 1e-8,
                    "alpha={alpha} q={q:?} in={amount}: {out} vs {expected}"
                );
                checked += 1;
            }
            (Err(_), None) => {}
            (got, expected) => panic!("alpha={alpha} q={q:?} in={amount}: {got:?} vs {expected:?}"),
        }
    }
}

#[test]
fn stabilized_cost_agrees_with_textbook_formula() {
    let spec = CurveSpec::ls_lmsr(0.7);
    for q in [[1.0, 2.0], [1000.0, 1000.0], [0.0, 55.0], [1e-3, 4e3]] {
        let a = spec.cost(&q).unwrap();
        let b = naive_ls_lmsr_cost(0.7, &q);
        assert!((a - b).abs() <= 1e-12 * b.abs().max(1.0), "{q:?}");
    }
}

// After the 500-coin trade the pool sits at (1500, 440.073217). The oracle puts
// one more coin at 1.26068429137985 out; the marginal price ratio there is
// 1.260346709.
#[test]
fn one_coin_after_large_trade() {
    let spec = CurveSpec::ls_lmsr(1.0);
    let q = [1500.0, 440.073217];
    let out = swap_exact_in(&SwapProblem::new(&spec, &q, 0, 1, 1.0), &SolverConfig::default()).unwrap();
    let oracle = ls_lmsr_swap_oracle(1.0, q, 1.0).unwrap();
    assert!((out - oracle).abs() < 1e-10);
    assert!((out - 1.26068429137985).abs() < 1e-9);
    assert!((spec.price_ratio(&q).unwrap() - 1.260346709).abs() < 1e-9);
}

// Frozen from a 40-digit evaluation of the rebase formula at (500, 1500):
// new scale P_1/P_0 = 1.23541089033632, deposit 1.23541089033632 * 1500 - 500.
#[test]
fn rebase_from_asymmetric_state() {
    let mut m = Market::create(CurveSpec::ls_lmsr(1.0), &[500.0, 1500.0], &[1.0, 1.0]).unwrap();
    let plan = m.plan_rebase(0, 1.0).unwrap();
    assert!((plan.new_scales[0] - 1.23541089033632).abs() < 1e-12);
    assert!((plan.deposit_coins[0] - 1353.11633550448).abs() < 1e-9);
    assert_eq!(plan.target_shares, vec![1500.0, 1500.0]);
    m.apply_rebase(&plan).unwrap();
    assert_eq!(m.coins(), vec![1500.0 * plan.new_scales[0], 1500.0]);
    assert_eq!(m.cost_value(), CurveSpec::ls_lmsr(1.0).cost(&[1500.0, 1500.0]).unwrap());
}

// Frozen from an independent 40-digit root solve of each leg.
#[test]
fn ls_lmsr_sandwich_legs() {
    let m = Market::create(CurveSpec::ls_lmsr(1.0), &[1000.0, 1000.0], &[1.0, 1.0]).unwrap();
    let victim = VictimOrder {
        token_in: 0,
        coins_in: 50.0,
    };
    let t = trace_frontrun(&m, &victim, 200.0).unwrap();
    let r = &t.report;
    assert!((r.attacker_bought - 208.776188715249).abs() < 1e-8);
    assert!((r.victim_received - 55.1152768255206).abs() < 1e-8);
    assert!((r.attacker_sold - 213.361994707683).abs() < 1e-8);
    assert!((r.victim_baseline - 50.5294708330873).abs() < 1e-8);
    assert!((r.attacker_profit - -4.58580599243333).abs() < 1e-8);

    // Each leg against the grid oracle as well.
    let bought = ls_lmsr_swap_oracle(1.0, [1000.0, 1000.0], 200.0).unwrap();
    assert!((bought - r.attacker_bought).abs() < 1e-8);
    let victim_out = ls_lmsr_swap_oracle(1.0, t.after_front_run.clone().try_into().unwrap(), 50.0).unwrap();
    assert!((victim_out - r.victim_received).abs() < 1e-8);
}
