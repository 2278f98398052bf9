//! The four-row price comparison table for markets opened with 1000 coins of
//! each token: LS-LMSR (α = 1), constant product, constant sum, and the
//! constant circle centred at 6000.

use std::fmt::Write;

use amm_core::{profile, Bound, CurveSpec, Market, MarketProfile};
use serde::Serialize;
use serde_json::Value;

use crate::{to_rounded_json, CliError};

/// Largest accepted gap between a computed cell and its reference value.
pub const TOLERANCE: f64 = 5e-5;

/// Published reference row: cost, then ratio interval endpoints.
struct Reference {
    name: &'static str,
    cost: f64,
    ratio: (Bound, Bound),
}

const REFERENCE: [Reference; 4] = [
    Reference {
        name: "LS-LMSR",
        cost: 2386.294362,
        ratio: (Bound::Finite(0.6481), Bound::Finite(1.5430)),
    },
    Reference {
        name: "constant product",
        cost: 1_000_000.0,
        ratio: (Bound::ZeroPlus, Bound::Infinity),
    },
    Reference {
        name: "constant sum",
        cost: 2000.0,
        ratio: (Bound::Finite(1.0), Bound::Finite(1.0)),
    },
    Reference {
        name: "constant circle",
        cost: 50_000_000.0,
        ratio: (Bound::Finite(0.6236), Bound::Finite(1.6036)),
    },
];

#[derive(Debug, Clone, Serialize)]
pub struct Row {
    pub name: &'static str,
    pub spec: CurveSpec,
    pub profile: MarketProfile,
    /// Cells differing from the reference by more than [`TOLERANCE`].
    pub mismatches: Vec<String>,
}

fn specs() -> [CurveSpec; 4] {
    [
        CurveSpec::ls_lmsr(1.0),
        CurveSpec::constant_product(),
        CurveSpec::constant_sum(),
        CurveSpec::circle(6000.0),
    ]
}

pub fn rows() -> Result<Vec<Row>, CliError> {
    specs()
        .into_iter()
        .zip(REFERENCE.iter())
        .map(|(spec, reference)| {
            let market = Market::create(spec.clone(), &[1000.0, 1000.0], &[1.0, 1.0])?;
            let profile = profile(&market)?;
            let mismatches = compare(&profile, reference);
            Ok(Row {
                name: reference.name,
                spec,
                profile,
                mismatches,
            })
        })
        .collect()
}

fn compare(p: &MarketProfile, r: &Reference) -> Vec<String> {
    let mut out = Vec::new();
    if (p.market_cost - r.cost).abs() > TOLERANCE {
        out.push(format!("market cost {} vs {}", p.market_cost, r.cost));
    }
    let (low, high) = r.ratio;
    let cells = [
        ("ratio low", p.ratio_interval.low, low),
        ("ratio high", p.ratio_interval.high, high),
        ("slope low", p.slope_interval.low, high.negate()),
        ("slope high", p.slope_interval.high, low.negate()),
    ];
    for (label, got, want) in cells {
        let ok = match (got, want) {
            (Bound::Finite(a), Bound::Finite(b)) => (a - b).abs() <= TOLERANCE,
            (a, b) => a == b,
        };
        if !ok {
            out.push(format!("{label} {got} vs {want}"));
        }
    }
    out
}

pub fn render_json(rows: &[Row]) -> String {
    let v: Vec<Value> = rows.iter().map(to_rounded_json).collect();
    serde_json::to_string_pretty(&v).expect("rows serialize") + "\n"
}

pub fn render_text(rows: &[Row]) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "{:<18} {:>16}  {:<20} {:<22} check",
        "family", "market cost", "price ratio", "tangent slope"
    );
    for row in rows {
        let check = if row.mismatches.is_empty() {
            "ok".to_string()
        } else {
            format!("MISMATCH: {}", row.mismatches.join("; "))
        };
        let _ = writeln!(
            out,
            "{:<18} {:>16}  {:<20} {:<22} {}",
            row.name,
            amm_core::analysis::format_significant(row.profile.market_cost, 10),
            row.profile.ratio_interval.to_string(),
            row.profile.slope_interval.to_string(),
            check
        );
    }
    out
}
