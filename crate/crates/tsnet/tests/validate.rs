use tsnet::validate::{ValidationReport, Verdict};
use tsnet::{validate, SimSettings};
use tsnet_core::SystemParams;

fn small(seed: u64) -> SimSettings {
    SimSettings {
        samples: 3_000,
        disk_radius: 15.0,
        replicates: 3,
        seed,
        ..SimSettings::default()
    }
}

/// Bit patterns, so that NaN fields compare equal.
fn bits(r: &ValidationReport) -> Vec<(String, [u64; 4], Verdict)> {
    r.checks
        .iter()
        .map(|c| {
            let v = [c.analytic, c.reference, c.delta, c.tolerance].map(f64::to_bits);
            (c.quantity.clone(), v, c.verdict)
        })
        .collect()
}

#[test]
fn deterministic_per_seed() {
    let p = SystemParams::default();
    let a = validate(&p, &small(5)).unwrap();
    let b = validate(&p, &small(5)).unwrap();
    assert_eq!(bits(&a), bits(&b));
    assert_eq!(a.render(), b.render());
    let c = validate(&p, &small(6)).unwrap();
    assert_ne!(bits(&a), bits(&c));
}

#[test]
fn exact_checks_pass_and_approximations_are_informational() {
    let r = validate(&SystemParams::default(), &small(11)).unwrap();
    for c in &r.checks {
        if c.quantity.starts_with("laplace") || c.quantity.starts_with("beta") {
            assert_eq!(c.verdict, Verdict::Pass, "{c:?}");
        }
        if c.quantity == "pi_s_joint" || c.quantity.starts_with("meta_ks") {
            assert_eq!(c.verdict, Verdict::Info);
        }
    }
    let mut csv = Vec::new();
    r.write_csv(&mut csv).unwrap();
    assert_eq!(
        String::from_utf8(csv).unwrap().lines().count(),
        r.checks.len() + 1
    );
}
