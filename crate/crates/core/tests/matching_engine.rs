//! Engine-level checks: self-match completeness on torus knots, soundness of
//! the prefilter, and redundancy of the restricted a-range.

use nilsurf_core::alexander::{torus_alexander, v_sequence, VSequence};
use nilsurf_core::matching::{match_candidate, MatchConfig, MatchProblem};
use nilsurf_core::nil::{enumerate_targets, nil_config};
use nilsurf_core::numeric::{gcd_u64, Sign};
use nilsurf_core::surgery::SurgeryDescription;

/// The V-sequence a self-match can recover: the knot's own V truncated to
/// the window the labels determine and extended by zero.
fn recoverable_v(v: &VSequence, p: u64, q: u64) -> VSequence {
    let kappa_max = (0..p)
        .map(|i| (i / q).min((p + q - 1 - i) / q))
        .max()
        .unwrap();
    let values: Vec<i64> = (0..=kappa_max).map(|j| v.get(j) as i64).collect();
    VSequence::new(values).expect("truncation of a low sequence stays valid")
}

#[test]
fn self_match_recovers_torus_knots() {
    for (m, n) in [(3u64, 2u64), (5, 2), (4, 3)] {
        let v = v_sequence(&torus_alexander(m, n).unwrap()).unwrap();
        for p in 1u64..=40 {
            for q in 1..p.max(2) {
                if gcd_u64(p, q) != 1 {
                    continue;
                }
                let target =
                    SurgeryDescription::new(v.clone(), p, q, Sign::Plus).unwrap();
                let problem = MatchProblem::new(target, q).unwrap();
                let outcome = match_candidate(&problem, &MatchConfig::default()).unwrap();
                let expected = recoverable_v(&v, p, q);
                assert!(
                    outcome.survivors.iter().any(|s| s.v == expected),
                    "T({m},{n}) at {p}/{q}: expected V {:?} among {:?}",
                    expected.values(),
                    outcome
                        .survivors
                        .iter()
                        .map(|s| s.v.values().to_vec())
                        .collect::<Vec<_>>()
                );
            }
        }
    }
}

#[test]
fn prefilter_is_sound_on_nil_targets() {
    // disabling the filter must not change survivors on any target
    let trefoil_v = nilsurf_core::alexander::trefoil_v();
    for target in enumerate_targets(400) {
        for epsilon in Sign::BOTH {
            let desc =
                SurgeryDescription::new(trefoil_v.clone(), target.p, target.q, epsilon).unwrap();
            let problem = MatchProblem::new(desc, 1).unwrap();
            let filtered = match_candidate(&problem, &nil_config()).unwrap();
            let unfiltered = match_candidate(&problem, &MatchConfig::no_prefilter()).unwrap();
            let lhs: Vec<_> = filtered.survivors.iter().map(|s| s.v.clone()).collect();
            let rhs: Vec<_> = unfiltered.survivors.iter().map(|s| s.v.clone()).collect();
            assert_eq!(lhs, rhs, "p={} q={} eps={epsilon}", target.p, target.q);
        }
    }
}

#[test]
fn restricted_a_range_loses_nothing() {
    // 0 < a < p/2 yields the same survivor V-classes as 0 < a < p
    let trefoil_v = nilsurf_core::alexander::trefoil_v();
    for target in enumerate_targets(100) {
        for epsilon in Sign::BOTH {
            let desc =
                SurgeryDescription::new(trefoil_v.clone(), target.p, target.q, epsilon).unwrap();
            let problem = MatchProblem::new(desc, 1).unwrap();
            let half = match_candidate(&problem, &MatchConfig::default()).unwrap();
            let full = match_candidate(
                &problem,
                &MatchConfig {
                    full_a_range: true,
                    ..MatchConfig::default()
                },
            )
            .unwrap();
            let mut lhs: Vec<_> = half.survivors.iter().map(|s| s.v.clone()).collect();
            let mut rhs: Vec<_> = full.survivors.iter().map(|s| s.v.clone()).collect();
            lhs.sort();
            rhs.sort();
            rhs.dedup();
            assert_eq!(lhs, rhs, "p={} q={} eps={epsilon}", target.p, target.q);
        }
    }
}

#[test]
fn survivor_deltas_are_even_nonneg_and_symmetric() {
    use nilsurf_core::lens::conjugate;
    use nilsurf_core::matching::delta_profile;
    use nilsurf_core::numeric::is_even_nonneg_integer;

    let trefoil_v = nilsurf_core::alexander::trefoil_v();
    for (p, q, epsilon) in [(60u64, 11u64, Sign::Minus), (156, 25, Sign::Plus)] {
        let desc = SurgeryDescription::new(trefoil_v.clone(), p, q, epsilon).unwrap();
        let problem = MatchProblem::new(desc, 1).unwrap();
        let outcome = match_candidate(&problem, &nil_config()).unwrap();
        assert!(!outcome.survivors.is_empty());
        for s in &outcome.survivors {
            let delta = delta_profile(&problem, &s.ident).unwrap();
            for (i, d) in delta.iter().enumerate() {
                assert!(is_even_nonneg_integer(d), "p={p} i={i}: {d}");
                let j = conjugate(i as u64, p, 1).unwrap();
                assert_eq!(d, &delta[j as usize]);
            }
        }
    }
}

#[test]
fn survivors_reverify_through_public_profile() {
    // every reported survivor must reproduce its V when its profile is
    // recomputed and solved through the public functions
    use nilsurf_core::matching::{delta_profile, solve_v};

    let v52 = v_sequence(&torus_alexander(5, 2).unwrap()).unwrap();
    let cases = [
        (nilsurf_core::alexander::trefoil_v(), 60, 11, Sign::Minus, 1),
        (nilsurf_core::alexander::trefoil_v(), 156, 25, Sign::Plus, 1),
        (v52.clone(), 45, 7, Sign::Plus, 7),
        (v52, 38, 9, Sign::Plus, 9),
    ];
    for (v, p, q, epsilon, cand_q) in cases {
        let desc = SurgeryDescription::new(v, p, q, epsilon).unwrap();
        let problem = MatchProblem::new(desc, cand_q).unwrap();
        let outcome = match_candidate(&problem, &MatchConfig::default()).unwrap();
        assert!(!outcome.survivors.is_empty(), "p={p} q={q}");
        for s in &outcome.survivors {
            let delta = delta_profile(&problem, &s.ident).unwrap();
            let solved = solve_v(&delta, p, cand_q).unwrap();
            assert_eq!(solved.v, s.v, "p={p} q={q} ident={:?}", s.ident);
            assert_eq!(solved.tail_zero, s.flags.v_tail_zero);
        }
    }
}

#[test]
fn lens_cache_is_shareable_across_threads() {
    use nilsurf_core::lens::{d_lens_vector, LensCache};
    use std::sync::Arc;

    let cache = Arc::new(LensCache::new());
    let handles: Vec<_> = (0..8)
        .map(|t| {
            let cache = Arc::clone(&cache);
            std::thread::spawn(move || {
                for (p, q) in [(60u64, 11i64), (144, 25), (156, 25)] {
                    let vec = cache.vector(p, q).unwrap();
                    assert_eq!(vec.as_ref(), &d_lens_vector(p, q).unwrap(), "thread {t}");
                    let i = (t * 7) % p;
                    assert_eq!(&cache.d(p, q, i).unwrap(), vec.get(i));
                }
            })
        })
        .collect();
    for h in handles {
        h.join().unwrap();
    }
}

#[test]
fn degenerate_small_orders_have_identifications() {
    // p = 1 and p = 2 keep the single unit a = 1
    for (p, q) in [(1u64, 1u64), (2, 1)] {
        let idents = nilsurf_core::matching::enumerate_identifications(p, q, q);
        assert!(!idents.is_empty(), "p={p}");
        assert!(idents.iter().all(|i| i.a == 1));
    }
}
