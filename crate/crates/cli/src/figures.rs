//! Canonical figure configurations bundled into the binary.
//!
//! `reproduce` re-runs these embedded configs, so the published figures can
//! be rebuilt without carrying any files around. Fixed labels keep each
//! figure in a stable subdirectory of the output directory.

use crate::config::{KIND_SPECTRUM, KIND_SPIKED};
use crate::error::{CliError, Result};

pub struct Canonical {
    pub name: &'static str,
    pub kind: &'static str,
    pub text: &'static str,
}

pub const CANONICAL: [Canonical; 5] = [
    Canonical {
        name: "fig4a",
        kind: KIND_SPECTRUM,
        text: include_str!("../configs/fig4a.toml"),
    },
    Canonical {
        name: "fig4b",
        kind: KIND_SPECTRUM,
        text: include_str!("../configs/fig4b.toml"),
    },
    Canonical {
        name: "fig5a",
        kind: KIND_SPECTRUM,
        text: include_str!("../configs/fig5a.toml"),
    },
    Canonical {
        name: "fig5b",
        kind: KIND_SPECTRUM,
        text: include_str!("../configs/fig5b.toml"),
    },
    Canonical {
        name: "fig6",
        kind: KIND_SPIKED,
        text: include_str!("../configs/fig6.toml"),
    },
];

/// Expands a reproduce target into its canonical configs.
pub fn select(target: &str) -> Result<Vec<&'static Canonical>> {
    let names: &[&str] = match target {
        "all" => &["fig4a", "fig4b", "fig5a", "fig5b", "fig6"],
        "fig4" => &["fig4a", "fig4b"],
        "fig5" => &["fig5a", "fig5b"],
        "fig6" => &["fig6"],
        other => {
            return Err(CliError::Config(format!(
                "unknown reproduce target `{other}` (expected all, fig4, fig5, or fig6)"
            )))
        }
    };
    Ok(names
        .iter()
        .map(|n| {
            CANONICAL
                .iter()
                .find(|c| c.name == *n)
                .expect("every target name is bundled")
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_canonical_config_parses_as_its_kind() {
        use crate::config::{parse_config, SpectrumConfig, SpikedConfig};
        for c in &CANONICAL {
            match c.kind {
                KIND_SPECTRUM => {
                    let cfg: SpectrumConfig = parse_config(c.text, "spectrum", c.kind).unwrap();
                    assert_eq!(cfg.label.as_deref(), Some(c.name));
                }
                KIND_SPIKED => {
                    let cfg: SpikedConfig = parse_config(c.text, "spiked", c.kind).unwrap();
                    assert_eq!(cfg.label.as_deref(), Some(c.name));
                }
                other => panic!("unexpected canonical kind {other}"),
            }
        }
    }

    #[test]
    fn targets_expand_to_expected_figures() {
        assert_eq!(select("all").unwrap().len(), 5);
        assert_eq!(select("fig4").unwrap().len(), 2);
        assert_eq!(select("fig6").unwrap()[0].name, "fig6");
        assert!(select("fig7").is_err());
    }
}
