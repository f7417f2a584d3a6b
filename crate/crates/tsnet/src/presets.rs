//! Figure presets, bundled into the binary.

pub struct Preset {
    pub name: &'static str,
    pub summary: &'static str,
    pub text: &'static str,
}

macro_rules! preset {
    ($name:literal, $summary:literal) => {
        Preset {
            name: $name,
            summary: $summary,
            text: include_str!(concat!("../presets/", $name, ".conf")),
        }
    };
}

pub const PRESETS: [Preset; 7] = [
    preset!("fig2", "energy coverage vs harvesting threshold"),
    preset!("fig3", "transmit probability vs primary density"),
    preset!("fig4", "coverage vs SINR threshold, rho and d"),
    preset!("fig5", "coverage with Rician desired links (simulated)"),
    preset!("fig6", "spatial throughput vs primary density"),
    preset!("fig7", "meta distribution at -5 dB, rho = 0 and 2"),
    preset!(
        "fig8",
        "meta distribution at -10 dB, epsilon = 0.05 and 0.1"
    ),
];

pub fn find(name: &str) -> Option<&'static Preset> {
    PRESETS.iter().find(|p| p.name == name)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::Config;

    #[test]
    fn every_preset_parses() {
        for p in &PRESETS {
            let cfg = Config::parse(p.text).unwrap_or_else(|e| panic!("{}: {e}", p.name));
            assert_eq!(
                cfg.sweep.output.as_deref(),
                Some(std::path::Path::new(&format!("{}.csv", p.name)))
            );
        }
    }
}
