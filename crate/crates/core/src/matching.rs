//! The surgery obstruction engine.
//!
//! Given a target surgery `epsilon * S^3_L(p/q)` and a candidate denominator
//! `Q`, a knot `K` with `S^3_K(p/Q)` homeomorphic to the target must admit an
//! affine identification `phi` of spin^c labels commuting with conjugation,
//! under which
//!
//! ```text
//! delta(i) = d(L(p,Q), i) - epsilon * d(S^3_L(p/q), phi(i)) = 2 V^K_{kappa_Q(i)}
//! ```
//!
//! for every label. The engine enumerates every admissible `phi`, computes
//! the delta profile, and solves for a V-sequence; a candidate survives only
//! if the profile is constant on each `kappa_Q` fiber, even and nonnegative,
//! and solves to a valid V-sequence.

use std::collections::BTreeSet;

use rayon::prelude::*;

use crate::alexander::{alexander_from_torsion, AlexanderPolynomial, VSequence};
use crate::error::{Error, VSeqViolation};
use crate::lens::{d_lens_vector, DVector};
use crate::numeric::{gcd_u64, is_even_nonneg_integer, modu, rational_int, Rational, Sign};
use crate::surgery::{oriented_d, SurgeryDescription};

/// An affine map `phi(i) = a(i - b) + ((1-alpha)p + q - 1)/2  (mod p)`
/// sending the candidate's spin^c labels to the target's.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct AffineIdentification {
    pub a: u64,
    pub b: u64,
    pub alpha: u8,
    p: u64,
    translation: u64,
}

impl AffineIdentification {
    pub(crate) fn new(a: u64, b: u64, alpha: u8, p: u64, q: u64) -> Option<AffineIdentification> {
        let t2 = (1 - alpha as i128) * p as i128 + q as i128 - 1;
        if t2 % 2 != 0 {
            return None;
        }
        Some(AffineIdentification {
            a,
            b: modu(b as i128, p),
            alpha,
            p,
            translation: modu(t2 / 2, p),
        })
    }

    pub fn apply(&self, i: u64) -> u64 {
        let x = self.a as i128 * (i as i128 - self.b as i128) + self.translation as i128;
        modu(x, self.p)
    }
}

/// All admissible identifications for the pair `(p/Q) -> (p/q)`:
/// `b` a conjugation fixed point on the candidate side, `alpha` selecting the
/// fixed point on the target side (the translation must be integral), and
/// `0 < a < p/2` coprime to `p` (higher `a` are redundant by conjugation
/// symmetry; for `p <= 2` the lone unit `a = 1` is kept).
pub fn enumerate_identifications(p: u64, q: u64, cand_q: u64) -> Vec<AffineIdentification> {
    enumerate_with_range(p, q, cand_q, false)
}

pub(crate) fn enumerate_with_range(
    p: u64,
    q: u64,
    cand_q: u64,
    full_a_range: bool,
) -> Vec<AffineIdentification> {
    let mut b_cands: Vec<u64> = Vec::new();
    for raw in [cand_q as i128 - 1, p as i128 + cand_q as i128 - 1] {
        if raw % 2 == 0 {
            let b = modu(raw / 2, p);
            if !b_cands.contains(&b) {
                b_cands.push(b);
            }
        }
    }
    let a_max = if full_a_range {
        p.saturating_sub(1).max(1)
    } else if p <= 2 {
        1
    } else {
        (p - 1) / 2
    };
    let mut out = Vec::new();
    for a in 1..=a_max {
        if gcd_u64(a, p) != 1 {
            continue;
        }
        for &b in &b_cands {
            for alpha in [0u8, 1] {
                if let Some(ident) = AffineIdentification::new(a, b, alpha, p, q) {
                    out.push(ident);
                }
            }
        }
    }
    out.sort();
    out
}

/// A matching problem: the target surgery and the candidate denominator.
#[derive(Clone, Debug)]
pub struct MatchProblem {
    pub target: SurgeryDescription,
    pub cand_q: u64,
}

impl MatchProblem {
    pub fn new(target: SurgeryDescription, cand_q: u64) -> Result<MatchProblem, Error> {
        if cand_q == 0 {
            return Err(Error::ZeroDenom);
        }
        let g = gcd_u64(target.p, cand_q);
        if g != 1 {
            return Err(Error::NotCoprime {
                a: target.p,
                b: cand_q as i64,
                g,
            });
        }
        Ok(MatchProblem { target, cand_q })
    }
}

/// Necessary-condition prefilter: probes `delta(b + stride*k + 1) -
/// delta(b + stride*k)` for `k = 0..=probes` and drops the identification
/// unless each difference is 0 or +-2. Adjacent labels land in `kappa_Q`
/// fibers at distance at most one, so a genuine match always passes; the
/// full profile re-verifies every survivor.
#[derive(Clone, Copy, Debug)]
pub struct Prefilter {
    pub stride: u64,
    pub probes: u32,
}

impl Default for Prefilter {
    fn default() -> Self {
        Prefilter {
            stride: 1,
            probes: 4,
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct MatchConfig {
    pub prefilter: Option<Prefilter>,
    pub full_a_range: bool,
}

impl Default for MatchConfig {
    fn default() -> Self {
        MatchConfig {
            prefilter: Some(Prefilter::default()),
            full_a_range: false,
        }
    }
}

impl MatchConfig {
    pub fn with_stride(stride: u64) -> MatchConfig {
        MatchConfig {
            prefilter: Some(Prefilter { stride, probes: 4 }),
            full_a_range: false,
        }
    }

    pub fn no_prefilter() -> MatchConfig {
        MatchConfig {
            prefilter: None,
            full_a_range: false,
        }
    }
}

/// Why a delta profile admits no V-sequence.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SolveReject {
    /// Two labels in the same `kappa_Q` fiber carry different delta values.
    FiberMismatch { index: u64 },
    /// A delta value is odd, fractional, or negative.
    NotEvenNonneg { label: u64 },
    /// The solved values violate the V-sequence constraints.
    InvalidV(VSeqViolation),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolvedV {
    pub v: VSequence,
    /// Whether the value at the last label-determined index was already 0
    /// (indices past it are extended by zero regardless).
    pub tail_zero: bool,
}

/// Groups the profile by `kappa_Q` and solves `delta = 2V`.
pub fn solve_v(delta: &[Rational], p: u64, cand_q: u64) -> Result<SolvedV, SolveReject> {
    debug_assert_eq!(delta.len(), p as usize);
    let kap = |i: u64| {
        let far = ((p as u128 + cand_q as u128 - 1 - i as u128) / cand_q as u128) as u64;
        (i / cand_q).min(far)
    };
    let k_max = (0..p).map(kap).max().unwrap_or(0);
    let mut groups: Vec<Option<&Rational>> = vec![None; k_max as usize + 1];
    for i in 0..p {
        let j = kap(i) as usize;
        match groups[j] {
            None => groups[j] = Some(&delta[i as usize]),
            Some(seen) => {
                if seen != &delta[i as usize] {
                    return Err(SolveReject::FiberMismatch { index: j as u64 });
                }
            }
        }
    }
    let mut values: Vec<i64> = Vec::with_capacity(groups.len());
    for (j, slot) in groups.iter().enumerate() {
        let d = slot.expect("kappa image is contiguous from 0");
        if !is_even_nonneg_integer(d) {
            let label = (0..p).find(|&i| kap(i) == j as u64).unwrap();
            return Err(SolveReject::NotEvenNonneg { label });
        }
        let half = d / rational_int(2);
        values.push(i64::try_from(half.to_integer()).expect("V fits i64"));
    }
    let tail_zero = values.last().copied() == Some(0) || values.is_empty();
    let v = VSequence::new(values).map_err(SolveReject::InvalidV)?;
    Ok(SolvedV { v, tail_zero })
}

/// Flags carried by a survivor so the result is auditable: the solved
/// sequence is always valid and the recovered polynomial normalized, and
/// `v_tail_zero` records whether the V-sequence had already reached 0 at the
/// last label-determined index.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SurvivorFlags {
    pub v_tail_zero: bool,
    pub valid_v: bool,
    pub normalized: bool,
}

#[derive(Clone, Debug)]
pub struct Survivor {
    pub ident: AffineIdentification,
    pub v: VSequence,
    pub alexander: AlexanderPolynomial,
    pub flags: SurvivorFlags,
}

#[derive(Clone, Debug)]
pub struct MatchOutcome {
    pub p: u64,
    pub q: u64,
    pub cand_q: u64,
    pub epsilon: Sign,
    pub survivors: Vec<Survivor>,
}

impl MatchOutcome {
    pub fn to_json(&self) -> serde_json::Value {
        let survivors: Vec<serde_json::Value> = self
            .survivors
            .iter()
            .map(|s| {
                serde_json::json!({
                    "a": s.ident.a,
                    "b": s.ident.b,
                    "alpha": s.ident.alpha,
                    "V": s.v.values(),
                    "alexander": s.alexander.to_json()["a"],
                    "flags": {
                        "v_tail_zero": s.flags.v_tail_zero,
                        "valid_v": s.flags.valid_v,
                        "normalized": s.flags.normalized,
                    },
                })
            })
            .collect();
        serde_json::json!({
            "p": self.p,
            "q": self.q,
            "Q": self.cand_q,
            "epsilon": self.epsilon.value(),
            "survivors": survivors,
        })
    }
}

/// Shared read-only tables for one problem.
struct ProblemTables {
    cand_lens: DVector,
    target_d: DVector,
}

fn prepare(problem: &MatchProblem) -> Result<ProblemTables, Error> {
    let p = problem.target.p;
    Ok(ProblemTables {
        cand_lens: d_lens_vector(p, problem.cand_q as i64)?,
        target_d: oriented_d(&problem.target)?,
    })
}

fn delta_at(tables: &ProblemTables, ident: &AffineIdentification, i: u64) -> Rational {
    tables.cand_lens.get(i) - tables.target_d.get(ident.apply(i))
}

/// The profile `delta(i)` over all labels for one identification.
pub fn delta_profile(
    problem: &MatchProblem,
    ident: &AffineIdentification,
) -> Result<Vec<Rational>, Error> {
    let tables = prepare(problem)?;
    Ok((0..problem.target.p)
        .map(|i| delta_at(&tables, ident, i))
        .collect())
}

fn passes_prefilter(
    tables: &ProblemTables,
    ident: &AffineIdentification,
    p: u64,
    filter: &Prefilter,
) -> bool {
    let two = rational_int(2);
    let minus_two = rational_int(-2);
    let zero = rational_int(0);
    for k in 0..=filter.probes as u64 {
        let base = ident.b as i128 + (filter.stride * k) as i128;
        let lo = modu(base, p);
        let hi = modu(base + 1, p);
        let diff = delta_at(tables, ident, hi) - delta_at(tables, ident, lo);
        if diff != zero && diff != two && diff != minus_two {
            return false;
        }
    }
    true
}

/// Runs the full obstruction for one problem. Candidates are screened by the
/// configured prefilter, surviving profiles are solved for V, and survivors
/// are deduplicated by V-sequence (first identification in `(a, b, alpha)`
/// order wins).
pub fn match_candidate(
    problem: &MatchProblem,
    config: &MatchConfig,
) -> Result<MatchOutcome, Error> {
    let p = problem.target.p;
    let tables = prepare(problem)?;
    let idents = enumerate_with_range(p, problem.target.q, problem.cand_q, config.full_a_range);

    let mut hits: Vec<(AffineIdentification, SolvedV)> = idents
        .par_iter()
        .filter_map(|ident| {
            if let Some(filter) = &config.prefilter {
                if !passes_prefilter(&tables, ident, p, filter) {
                    return None;
                }
            }
            let delta: Vec<Rational> = (0..p).map(|i| delta_at(&tables, ident, i)).collect();
            solve_v(&delta, p, problem.cand_q)
                .ok()
                .map(|solved| (*ident, solved))
        })
        .collect();
    hits.sort_by_key(|(ident, _)| *ident);

    let mut seen: BTreeSet<VSequence> = BTreeSet::new();
    let mut survivors = Vec::new();
    for (ident, solved) in hits {
        if !seen.insert(solved.v.clone()) {
            continue;
        }
        let alexander = alexander_from_torsion(&solved.v);
        survivors.push(Survivor {
            ident,
            v: solved.v,
            alexander,
            flags: SurvivorFlags {
                v_tail_zero: solved.tail_zero,
                valid_v: true,
                normalized: true,
            },
        });
    }

    Ok(MatchOutcome {
        p,
        q: problem.target.q,
        cand_q: problem.cand_q,
        epsilon: problem.target.epsilon,
        survivors,
    })
}
