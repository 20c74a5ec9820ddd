use entdist_core::protocols::{run_suite, CheckReport, Suite, SuiteOptions};

fn quick(suite: Suite, trials: usize) -> CheckReport {
    let opts = SuiteOptions {
        seed: 11,
        trials: Some(trials),
        ..SuiteOptions::default()
    };
    run_suite(suite, &opts).unwrap()
}

#[test]
fn suite_names_round_trip() {
    for s in Suite::ALL {
        assert_eq!(s.name().parse::<Suite>().unwrap(), s);
        let json = serde_json::to_string(&s).unwrap();
        assert_eq!(json, format!("\"{}\"", s.name()));
    }
    assert!("nope".parse::<Suite>().is_err());
}

#[test]
fn cheap_suites_pass() {
    for (s, n) in [
        (Suite::PauliOpt, 20),
        (Suite::Subadditive, 50),
        (Suite::Teleport, 20),
        (Suite::Schatten, 20),
        (Suite::Main, 3),
        (Suite::Noisy, 3),
        (Suite::Divisible, 4),
    ] {
        let r = quick(s, n);
        assert!(r.passed(), "{s}: {:?}", r.failures);
        assert!(r.worst_slack >= 0.0);
        assert_eq!(r.n_trials, n);
    }
}

#[test]
fn reports_are_reproducible_and_serialisable() {
    let a = quick(Suite::Subadditive, 10);
    let b = quick(Suite::Subadditive, 10);
    assert_eq!(a, b);
    let json = serde_json::to_value(&a).unwrap();
    for key in ["check", "seed", "n_trials", "worst_slack", "failures"] {
        assert!(json.get(key).is_some(), "{key}");
    }
    let back: CheckReport = serde_json::from_value(json).unwrap();
    assert_eq!(back, a);
}

#[test]
fn reversed_injection_is_reported_as_expected() {
    let opts = SuiteOptions {
        trials: Some(1),
        reversed_injection: true,
        ..SuiteOptions::default()
    };
    let r = run_suite(Suite::Markov, &opts).unwrap();
    assert!(r.passed());
    assert_eq!(r.expected_violations.len(), 1);
}
