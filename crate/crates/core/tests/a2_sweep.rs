//! The pipeline against the A2 closed forms on every instance with d1, d2 ≤ 3.

use qdesing::a2::A2Instance;
use qdesing::a2_sweep::{check_instance, sweep, SweepConfig};

#[test]
fn exhaustive_sweep_up_to_three() {
    let t0 = std::time::Instant::now();
    let r = sweep(&SweepConfig::default()).unwrap();
    eprintln!("{:?} {:?}", t0.elapsed(), r.passed);
    for f in &r.failures {
        eprintln!("{f:?}");
    }
    assert!(r.ok(), "{} failures", r.failures.len());
    assert_eq!(r.instances, A2Instance::all_up_to(3).len());
    for k in ["emptiness", "orbit types", "tangent dim", "strata bijection", "components", "closure dominance", "fibres", "orbit degree"] {
        assert!(r.passed.get(k).copied().unwrap_or(0) > 0, "{k} never exercised");
    }
}

#[test]
fn reducible_instance_has_two_components() {
    let inst = A2Instance::new(2, 2, 1, 1, 1).unwrap();
    let (passed, failures) = check_instance(inst, &SweepConfig::default()).unwrap();
    assert!(failures.is_empty(), "{failures:?}");
    assert_eq!(passed["components"], 2);
    assert_eq!(inst.components().len(), 2);
}
