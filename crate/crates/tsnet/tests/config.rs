use std::io::Write;

use tsnet::config::{Axis, Config, CouplingMode, SweepKind};
use tsnet::presets::PRESETS;
use tsnet::Error;

const FULL: &str = "\
[params]
lambda1 = 0.1
lambda2 = 1
p1 = 1
t_i = 0.5
t_e = 0.5
d = 1
alpha = 3
sigma2_dbm = -50
epsilon = 0.1
e_sat = 0.5
rho = 2
zeta_db = -10
";

fn with_sweep(params: &str) -> String {
    format!("{params}\n[sweep]\nname = coverage\nparam = zeta_db\ngrid = -10, -5, 0\n")
}

#[test]
fn dbm_keys_are_converted() {
    let cfg = Config::parse(&with_sweep(FULL)).unwrap();
    assert!((cfg.params.sigma2 - 1e-8).abs() < 1e-22);
    assert!((cfg.params.zeta - 0.1).abs() < 1e-15);
    let w = Config::parse(&with_sweep(&FULL.replace("p1 = 1", "p1_dbm = 30"))).unwrap();
    assert!((w.params.p1 - 1.0).abs() < 1e-12);
}

#[test]
fn missing_alpha_is_rejected() {
    let text = with_sweep(&FULL.replace("alpha = 3\n", ""));
    let e = Config::parse(&text).unwrap_err();
    assert_eq!(e.key, "alpha");
    assert!(e.reason.contains("missing"));
}

#[test]
fn alpha_two_is_rejected_with_its_line() {
    let text = with_sweep(&FULL.replace("alpha = 3", "alpha = 2"));
    let e = Config::parse(&text).unwrap_err();
    assert_eq!(e.key, "alpha");
    assert_eq!(e.line, Some(8));
    assert!(e.reason.contains("alpha must exceed 2"), "{e}");
    assert!(e.to_string().starts_with("line 8: "));
}

#[test]
fn bad_entries_carry_line_numbers() {
    let cases = [
        (FULL.replace("d = 1", "distance = 1"), 7, "distance"),
        (FULL.replace("rho = 2", "rho = two"), 12, "rho"),
        (format!("{FULL}sigma2 = 1e-8\n"), 14, "sigma2"),
        (format!("{FULL}[extras]\n"), 14, "extras"),
    ];
    for (params, line, key) in cases {
        let e = Config::parse(&with_sweep(&params)).unwrap_err();
        assert_eq!((e.line, e.key.as_str()), (Some(line), key), "{e}");
    }
    let e = Config::parse("lambda1 = 0.1\n").unwrap_err();
    assert_eq!(e.line, Some(1));
}

#[test]
fn sweep_block_is_checked() {
    let base = format!("{FULL}\n[sweep]\nname = coverage\n");
    let e = Config::parse(&format!("{base}param = zeta_db\ngrid = 0, -5\n")).unwrap_err();
    assert_eq!(e.key, "grid");
    assert!(e.reason.contains("strictly increasing"));
    let e = Config::parse(&format!("{base}param = speed\ngrid = 1\n")).unwrap_err();
    assert_eq!(e.key, "param");
    let e = Config::parse(&format!(
        "{base}param = zeta_db\ngrid = 1\nseries = zeta_db = 3\n"
    ))
    .unwrap_err();
    assert!(e.reason.contains("swept parameter"));
    let e = Config::parse(&format!("{base}param = x\ngrid = 0.5\n")).unwrap_err();
    assert_eq!(e.key, "param");
    let e = Config::parse(&format!("{base}param = zeta_db\ngrid = 1\nmode = fast\n")).unwrap_err();
    assert_eq!(e.key, "mode");
    // A grid value that makes the parameters invalid.
    let e = Config::parse(&format!(
        "{FULL}\n[sweep]\nname = coverage\nparam = alpha\ngrid = 2, 3\n"
    ))
    .unwrap_err();
    assert!(e.reason.contains("alpha must exceed 2"), "{e}");
}

#[test]
fn simulation_block() {
    let text = format!(
        "{}[simulation]\nsamples = 500\nreplicates = 3\nseed = 9\ncoupling = coupled-realized\n",
        with_sweep(FULL)
    );
    let cfg = Config::parse(&text).unwrap();
    assert_eq!(cfg.simulation.samples, 500);
    assert_eq!(cfg.simulation.replicates, 3);
    assert_eq!(cfg.simulation.seed, 9);
    assert!(matches!(cfg.simulation.coupling, CouplingMode::Coupled(_)));
    let e = Config::parse(&format!(
        "{}[simulation]\nreplicates = 0\n",
        with_sweep(FULL)
    ))
    .unwrap_err();
    assert_eq!(e.key, "replicates");
}

#[test]
fn effective_config_round_trips() {
    let mut texts: Vec<String> = PRESETS.iter().map(|p| p.text.to_string()).collect();
    texts.push(format!(
        "{}rate = 2.5\n\n[sweep]\nname = meta\nparam = x\ngrid = linspace(0, 1, 7)\n\
         series = label = a, rho = 0, k_factor = 3, interferers = same\nseries = sigma2_dbm = -60\n\
         output = out/m.csv\n[simulation]\ncoupling = coupled-average\ndisk_radius = 12.5\n",
        FULL.replace("lambda1 = 0.1", "lambda1 = 0.123456789012345")
    ));
    for text in texts {
        let cfg = Config::parse(&text).unwrap();
        let written = cfg.to_text();
        let again = Config::parse(&written).unwrap_or_else(|e| panic!("{e}\n{written}"));
        assert_eq!(cfg, again, "{written}");
        assert_eq!(again.to_text(), written);
    }
}

#[test]
fn load_reads_files_and_reports_io_errors() {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    f.write_all(PRESETS[1].text.as_bytes()).unwrap();
    let cfg = Config::load(f.path()).unwrap();
    assert_eq!(cfg.sweep.kind, SweepKind::TransmitProb);
    assert!(matches!(cfg.sweep.axis, Axis::Param(k) if k.field() == "lambda1"));
    assert_eq!(cfg.sweep.grid.len(), 30);
    assert_eq!(cfg.sweep.series.len(), 4);
    let missing = f.path().with_extension("absent");
    assert!(matches!(Config::load(&missing), Err(Error::Io { .. })));
}
