mod common;

use antidist::constructions::{build_v, build_w_tensor};
use antidist::experiments::{
    check_states, check_unitaries, random_hierarchy, repro, sweep_p, ReproOptions, ReproVerdict, TheoremId,
    UnitaryCheck, PUBLISHED_P_STAR,
};
use antidist::linalg::PureState;
use antidist::states::{three_pure_condition, OverlapTriple, StateEnsemble, Verdict};
use antidist::unitary::{ProbeMode, ProbeSpec};
use antidist::{Config, Error};
use common::pbr_states;

fn opts(seed: u64) -> ReproOptions {
    ReproOptions {
        seed,
        ..ReproOptions::default()
    }
}

#[test]
fn theorem_ids_parse() {
    for id in TheoremId::ALL {
        assert_eq!(id.to_string().parse::<TheoremId>().unwrap(), id);
    }
    assert!(matches!("thm10".parse::<TheoremId>(), Err(Error::Parse(_))));
}

#[test]
fn reports_are_deterministic_without_timing() {
    let cfg = Config::default();
    for id in [TheoremId::Thm1, TheoremId::Thm6, TheoremId::Thm9] {
        let o = ReproOptions {
            trials: Some(20),
            ..opts(5)
        };
        let a = repro(id, &o, &cfg).unwrap().to_json();
        let b = repro(id, &o, &cfg).unwrap().to_json();
        assert_eq!(a, b);
        assert!(!a.contains("wall_time"));
    }
}

#[test]
fn thm1_spread_is_tiny() {
    let o = ReproOptions {
        d: Some(3),
        trials: Some(100),
        ..opts(1)
    };
    let r = repro(TheoremId::Thm1, &o, &Config::default()).unwrap();
    assert!(r.is_reproduced());
    assert!(r.quantity("max_overlap_spread").unwrap().value.as_f64().unwrap() <= 1e-9);
}

#[test]
fn thm3_maxent_fails_and_probe_succeeds() {
    let o = ReproOptions {
        d: Some(3),
        p: Some(0.9),
        ..opts(0)
    };
    let r = repro(TheoremId::Thm3, &o, &Config::default()).unwrap();
    assert!(r.is_reproduced(), "{}", r.table());
    assert_eq!(r.quantity("maxent_verdict").unwrap().value, "not_antidistinguishable");
    assert_eq!(r.quantity("probe_verdict").unwrap().value, "antidistinguishable");
}

#[test]
fn thm3_below_the_boundary_is_a_discrepancy() {
    let o = ReproOptions {
        p: Some(0.5),
        ..opts(0)
    };
    let r = repro(TheoremId::Thm3, &o, &Config::default()).unwrap();
    assert!(matches!(r.verdict, ReproVerdict::Discrepancy(_)));
}

#[test]
fn sweep_rows_and_boundary() {
    let cfg = Config::default();
    let s = sweep_p(3, 0.05, 1.0, 20, &cfg).unwrap();
    assert_eq!(s.rows.len(), 20);
    assert!(s.rows.windows(2).all(|w| w[0].p < w[1].p));
    let last = s.rows.last().unwrap();
    assert_eq!(last.p, 1.0);
    assert_eq!(last.verdict, Verdict::Antidistinguishable);

    let p_star = s.summary.p_star.unwrap();
    // the cubic condition on x(p) vanishes at p = 2 - 2 sqrt(3/7)
    assert!((p_star - (2.0 - 2.0 * (3.0f64 / 7.0).sqrt())).abs() < 1e-8);
    assert!(s.summary.cubic_margin_at_p_star.unwrap().abs() < 1e-8);
    assert!(s.summary.internally_consistent);
    assert!(!s.summary.agrees_with_published);
    assert!((PUBLISHED_P_STAR - (14.0 - 2.0 * 7f64.sqrt()) / 21.0).abs() < 1e-15);

    let csv = s.to_csv();
    assert!(csv.starts_with("p,x1,x2,x3,sum_margin,cubic_margin,verdict,sdp_value\n"));
    assert_eq!(csv.lines().count(), 22);
    assert!(csv.lines().last().unwrap().starts_with("# p_star="));
}

#[test]
fn sweep_row_at_one_half_follows_the_conditions() {
    let cfg = Config::default();
    let s = sweep_p(3, 0.5, 1.0, 2, &cfg).unwrap();
    let r = &s.rows[0];
    for (got, want) in [r.x1, r.x2, r.x3].iter().zip([0.25, 0.5625, 0.140625]) {
        assert!((got - want).abs() < 1e-12);
    }
    let expected = three_pure_condition(&OverlapTriple::new(0.25, 0.5625, 0.140625).unwrap(), 1e-9).unwrap();
    assert_eq!(r.verdict, expected.verdict);
    assert_eq!(r.verdict, Verdict::NotAntidistinguishable);
    assert!(r.sdp_value < 1.0 - 1e-6);
}

#[test]
fn sweep_argument_checks() {
    let cfg = Config::default();
    assert!(matches!(sweep_p(3, 0.0, 1.0, 10, &cfg), Err(Error::OutOfRange(_))));
    assert!(matches!(sweep_p(3, 0.5, 0.4, 10, &cfg), Err(Error::OutOfRange(_))));
    assert!(matches!(sweep_p(3, 0.1, 1.0, 1, &cfg), Err(Error::OutOfRange(_))));
}

#[test]
fn check_states_examples() {
    let cfg = Config::default();
    let (r, ok) = check_states(&StateEnsemble::uniform_pure(pbr_states()).unwrap(), &cfg).unwrap();
    assert!(ok);
    assert!((r.quantity("value").unwrap().value.as_f64().unwrap() - 1.0).abs() <= 1e-6);
    let (r, ok) = check_states(&StateEnsemble::uniform_pure(vec![PureState::basis(2, 0)]).unwrap(), &cfg).unwrap();
    assert!(!ok);
    assert_eq!(r.quantity("value").unwrap().value.as_f64().unwrap(), 0.0);
}

#[test]
fn check_unitaries_examples() {
    let cfg = Config::default();
    let probe = ProbeSpec::SingleSystem(PureState::basis(4, 0));
    let (_, ok) = check_unitaries(&build_w_tensor(), &UnitaryCheck::Probe(probe), &cfg).unwrap();
    assert!(ok);
    let v = build_v(3).unwrap();
    let (r, ok) = check_unitaries(&v, &UnitaryCheck::Probe(ProbeSpec::MaximallyEntangled), &cfg).unwrap();
    assert!(!ok);
    assert_eq!(r.quantity("closed_form_verdict").unwrap().value, "not_antidistinguishable");
    let (_, ok) = check_unitaries(&v, &UnitaryCheck::Optimize(ProbeMode::Single), &cfg).unwrap();
    assert!(ok);
}

#[test]
fn hierarchy_report() {
    let r = random_hierarchy(1000, 42, &Config::default()).unwrap();
    assert!(r.is_reproduced());
    assert_eq!(r.quantity("counterexamples").unwrap().value, 0);
    assert!(random_hierarchy(0, 42, &Config::default()).is_err());
}

#[test]
fn small_monte_carlo_theorems_reproduce() {
    let cfg = Config::default();
    for (id, trials) in [(TheoremId::Thm2, 300), (TheoremId::Thm4, 300), (TheoremId::Thm6, 10), (TheoremId::Thm7, 6)] {
        let o = ReproOptions {
            trials: Some(trials),
            ..opts(3)
        };
        let r = repro(id, &o, &cfg).unwrap();
        assert!(r.is_reproduced(), "{}", r.table());
    }
    for id in [TheoremId::Thm5, TheoremId::Thm8] {
        assert!(repro(id, &opts(0), &cfg).unwrap().is_reproduced());
    }
}
