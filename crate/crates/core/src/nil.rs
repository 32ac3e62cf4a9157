//! Search driver for Nil Seifert fibred surgery slopes.
//!
//! On the trefoil, `p/q`-surgery is Nil Seifert fibred exactly when
//! `p = 6q +- 6` and `p != 0`. The driver enumerates those targets up to a
//! slope bound, runs the obstruction engine with candidate denominator
//! `Q = 1` for both orientations, and reports the surviving integer slopes
//! with their recovered V-sequences and Alexander polynomials. Survivors
//! whose polynomial is the trefoil's are tracked separately: they are not
//! ruled out by the obstruction but correspond to the trefoil itself.

use rayon::prelude::*;

use crate::alexander::{trefoil, trefoil_v, AlexanderPolynomial};
use crate::error::Error;
use crate::matching::{match_candidate, MatchConfig, MatchProblem, Survivor};
use crate::numeric::{gcd_u64, Sign};
use crate::surgery::SurgeryDescription;

/// A slope `p = 6q + 6*zeta` on the trefoil, `gcd(q, 6) = 1`, `p > 0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct NilTarget {
    pub p: u64,
    pub q: u64,
    pub zeta: Sign,
}

/// All targets with `p <= p_max`, sorted by `(p, q)`.
pub fn enumerate_targets(p_max: u64) -> Vec<NilTarget> {
    let mut out = Vec::new();
    let mut q = 1u64;
    while 6 * q - 6 <= p_max {
        if gcd_u64(q, 6) == 1 {
            for zeta in [Sign::Plus, Sign::Minus] {
                let p = (6 * q as i64 + 6 * zeta.value()) as u64;
                if p > 0 && p <= p_max {
                    out.push(NilTarget { p, q, zeta });
                }
            }
        }
        q += 1;
    }
    out.sort();
    out
}

#[derive(Clone, Debug)]
pub struct NilRow {
    pub target: NilTarget,
    pub epsilon: Sign,
    pub survivor: Survivor,
}

#[derive(Clone, Debug)]
pub struct NilReport {
    pub p_max: u64,
    /// Survivors whose polynomial differs from the trefoil's.
    pub survivors: Vec<NilRow>,
    /// Survivors recovering the trefoil polynomial itself.
    pub trefoil_survivors: Vec<NilRow>,
}

impl NilReport {
    pub fn slopes(&self) -> Vec<(u64, Sign, u64)> {
        let mut out: Vec<(u64, Sign, u64)> = self
            .survivors
            .iter()
            .map(|row| (row.target.p, row.epsilon, row.target.q))
            .collect();
        out.dedup();
        out
    }

    pub fn to_json(&self) -> serde_json::Value {
        let row_json = |row: &NilRow| {
            serde_json::json!({
                "p": row.target.p,
                "q": row.target.q,
                "zeta": row.target.zeta.value(),
                "epsilon": row.epsilon.value(),
                "a": row.survivor.ident.a,
                "b": row.survivor.ident.b,
                "alpha": row.survivor.ident.alpha,
                "V": row.survivor.v.values(),
                "alexander": row.survivor.alexander.to_json()["a"],
                "flags": {
                    "v_tail_zero": row.survivor.flags.v_tail_zero,
                    "valid_v": row.survivor.flags.valid_v,
                    "normalized": row.survivor.flags.normalized,
                },
            })
        };
        serde_json::json!({
            "p_max": self.p_max,
            "survivors": self.survivors.iter().map(row_json).collect::<Vec<_>>(),
            "trefoil_survivors": self
                .trefoil_survivors
                .iter()
                .map(row_json)
                .collect::<Vec<_>>(),
        })
    }
}

/// Runs the obstruction over every target and both orientations.
pub fn nil_search(p_max: u64, config: &MatchConfig) -> Result<NilReport, Error> {
    let targets = enumerate_targets(p_max);
    let mut problems: Vec<(NilTarget, Sign)> = Vec::new();
    for target in targets {
        for epsilon in Sign::BOTH {
            problems.push((target, epsilon));
        }
    }

    let outcomes: Result<Vec<Vec<NilRow>>, Error> = problems
        .par_iter()
        .map(|&(target, epsilon)| {
            let desc = SurgeryDescription::new(trefoil_v(), target.p, target.q, epsilon)?;
            let problem = MatchProblem::new(desc, 1)?;
            let outcome = match_candidate(&problem, config)?;
            Ok(outcome
                .survivors
                .into_iter()
                .map(|survivor| NilRow {
                    target,
                    epsilon,
                    survivor,
                })
                .collect())
        })
        .collect();

    let mut rows: Vec<NilRow> = outcomes?.into_iter().flatten().collect();
    rows.sort_by_key(|row| {
        (
            row.target.p,
            row.target.q,
            row.epsilon,
            row.survivor.ident.a,
            row.survivor.ident.b,
            row.survivor.ident.alpha,
        )
    });

    let trefoil_poly = trefoil();
    let (trefoil_rows, rest): (Vec<NilRow>, Vec<NilRow>) = rows
        .into_iter()
        .partition(|row| row.survivor.alexander == trefoil_poly);

    Ok(NilReport {
        p_max,
        survivors: rest,
        trefoil_survivors: trefoil_rows,
    })
}

/// Default engine configuration for this driver: the prefilter probes with
/// stride 6, matching the `p = 6q +- 6` structure of the targets.
pub fn nil_config() -> MatchConfig {
    MatchConfig::with_stride(6)
}

/// A cable whose surgery can be Nil Seifert fibred: the `(s, t)`-cable over
/// the trefoil with slope `p/q`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CableSolution {
    pub s: u64,
    pub t: u64,
    pub p: u64,
    pub q: u64,
}

/// Solves the cable slope conditions `p = s t q + e1` and
/// `s t q + e1 = 6 t^2 q + 6 e2` over `e1, e2 in {+-1}`, `t >= 2`,
/// `q >= 1` exhaustively in a window far beyond where solutions exist:
/// `t q (s - 6t) = 6 e2 - e1` forces `t q` to divide 5 or 7.
pub fn cable_solutions() -> Vec<CableSolution> {
    let mut out = Vec::new();
    for t in 2..=100u64 {
        for q in 1..=100u64 {
            if t * q > 7 {
                // |6 e2 - e1| <= 7, so larger t q admits no integer s - 6t
                break;
            }
            for e1 in Sign::BOTH {
                for e2 in Sign::BOTH {
                    let rhs = 6 * e2.value() - e1.value();
                    if rhs % (t * q) as i64 != 0 {
                        continue;
                    }
                    let s = 6 * t as i64 + rhs / (t * q) as i64;
                    if s < 2 || gcd_u64(s as u64, t) != 1 {
                        continue;
                    }
                    let p = s * (t * q) as i64 + e1.value();
                    if p <= 0 {
                        continue;
                    }
                    let sol = CableSolution {
                        s: s as u64,
                        t,
                        p: p as u64,
                        q,
                    };
                    if !out.contains(&sol) {
                        out.push(sol);
                    }
                }
            }
        }
    }
    out.sort_by_key(|c| (c.p, c.s, c.t));
    out
}

/// Alexander polynomial of the `(s, t)`-cable over the trefoil:
/// the torus polynomial of `T(s, t)` times the trefoil polynomial in `t^t`.
pub fn cable_polynomial(s: u64, t: u64) -> Result<AlexanderPolynomial, Error> {
    let pattern = crate::alexander::torus_alexander(s, t)?;
    let companion = trefoil().substitute_power(t as u32);
    Ok(&pattern * &companion)
}

/// One expected survivor of the bounded search: slope, orientation, and
/// the Alexander polynomial of the knot realizing it.
#[derive(Clone, Debug)]
pub struct ClassificationEntry {
    pub p: u64,
    pub q: u64,
    pub epsilon: Sign,
    /// `(s, t)` when the polynomial is a cable product.
    pub cable: Option<(u64, u64)>,
    pub poly: AlexanderPolynomial,
}

fn tabulated(text: &str) -> AlexanderPolynomial {
    let value: serde_json::Value = serde_json::from_str(text).expect("golden file parses");
    AlexanderPolynomial::from_json(&value).expect("golden polynomial is normalized")
}

/// The eight expected polynomials of the classification, keyed by slope and
/// orientation: two at 60, one at each 144 target, two at 156, one each at
/// 288 and 300. Four are cable products; the rest are tabulated.
pub fn classification_polynomials() -> Vec<ClassificationEntry> {
    let entry = |p, q, epsilon, cable, poly| ClassificationEntry {
        p,
        q,
        epsilon,
        cable,
        poly,
    };
    let cable = |s, t| cable_polynomial(s, t).expect("cable polynomial");
    vec![
        entry(
            60,
            11,
            Sign::Minus,
            None,
            tabulated(include_str!("../data/poly_60_11_i.json")),
        ),
        entry(
            60,
            11,
            Sign::Minus,
            None,
            tabulated(include_str!("../data/poly_60_11_ii.json")),
        ),
        entry(
            144,
            23,
            Sign::Minus,
            None,
            tabulated(include_str!("../data/poly_144_23.json")),
        ),
        entry(144, 25, Sign::Plus, Some((29, 5)), cable(29, 5)),
        entry(156, 25, Sign::Plus, Some((31, 5)), cable(31, 5)),
        entry(
            156,
            25,
            Sign::Plus,
            None,
            tabulated(include_str!("../data/poly_156_25_ii.json")),
        ),
        entry(288, 49, Sign::Plus, Some((41, 7)), cable(41, 7)),
        entry(300, 49, Sign::Plus, Some((43, 7)), cable(43, 7)),
    ]
}
