use sixvertex::oracles::{run_suite, to_json_lines, CheckReport, Status, SuiteName, SuiteOptions, Tally};

fn run_default(name: SuiteName) -> Vec<CheckReport> {
    let reports = run_suite(name, 1, &SuiteOptions::default()).unwrap();
    let failures: Vec<&CheckReport> = reports.iter().filter(|r| r.status == Status::Fail).collect();
    for f in failures.iter().take(5) {
        eprintln!("{}", serde_json::to_string(f).unwrap());
    }
    let tally = Tally::of(&reports);
    eprintln!("{name}: {tally:?}");
    assert!(tally.all_pass(), "{name}: {} failures", tally.fail);
    assert!(tally.pass > 0, "{name}: nothing ran");
    reports
}

macro_rules! suite_test {
    ($($fn_name:ident => $suite:ident),* $(,)?) => {
        $(
            #[test]
            fn $fn_name() {
                run_default(SuiteName::$suite);
            }
        )*
    };
}

suite_test! {
    ybe_suite => Ybe,
    rtt_suite => Rtt,
    yangian_actions_suite => YangianActions,
    modified_actions_suite => ModifiedActions,
    mult_actions_suite => MultActions,
    linear_systems_suite => LinearSystems,
    recursion_suite => Recursion,
    offshell_suite => Offshell,
    izergin_equiv_suite => IzerginEquiv,
    izergin_limits_suite => IzerginLimits,
    cauchy_suite => Cauchy,
    binomial_suite => Binomial,
    asymptotics_suite => Asymptotics,
    full_equivalence_suite => FullEquivalence,
}

#[test]
fn ybe_hundred_instances_pass() {
    let reports = run_suite(SuiteName::Ybe, 1, &SuiteOptions { max_size: None, instances: Some(100) }).unwrap();
    assert_eq!(reports.len(), 100);
    assert!(reports.iter().all(|r| r.status == Status::Pass));
}

#[test]
fn reports_are_reproducible() {
    let opts = SuiteOptions { max_size: Some(2), instances: Some(12) };
    for name in [SuiteName::FullEquivalence, SuiteName::ModifiedActions] {
        let a = to_json_lines(&run_suite(name, 7, &opts).unwrap());
        let b = to_json_lines(&run_suite(name, 7, &opts).unwrap());
        assert_eq!(a, b);
        assert_ne!(a, to_json_lines(&run_suite(name, 8, &opts).unwrap()));
    }
}

#[test]
fn every_line_is_a_report() {
    let opts = SuiteOptions { max_size: Some(2), instances: Some(3) };
    let text = to_json_lines(&run_suite(SuiteName::Rtt, 3, &opts).unwrap());
    for line in text.lines() {
        let v: serde_json::Value = serde_json::from_str(line).unwrap();
        for key in ["check_name", "instance", "status", "suite", "index"] {
            assert!(v.get(key).is_some(), "missing {key} in {line}");
        }
    }
}

#[test]
fn binomial_row_four() {
    // instance 4 of the binomial suite uses a set of four rapidities
    let opts = SuiteOptions { max_size: Some(4), instances: Some(5) };
    let reports = run_suite(SuiteName::Binomial, 1, &opts).unwrap();
    let four = reports.iter().find(|r| r.index == 4).unwrap();
    assert_eq!(four.instance["params"]["u"].as_array().unwrap().len(), 4);
    assert_eq!(four.status, Status::Pass);
}
