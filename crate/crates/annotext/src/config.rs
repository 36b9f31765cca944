//! Pipeline configuration files (TOML, or JSON by extension).

use std::fs;
use std::path::Path;

use anyhow::{bail, Context, Result};
use annotext_core::pipeline::PipelineConfig;

/// Reads and checks a configuration file. Missing keys take their defaults;
/// warnings about legal but suspicious values are logged.
pub fn load_config(path: &Path) -> Result<PipelineConfig> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let config = parse_config(&text, path.extension().is_some_and(|e| e == "json"))
        .with_context(|| format!("parsing {}", path.display()))?;
    Ok(config)
}

pub fn parse_config(text: &str, json: bool) -> Result<PipelineConfig> {
    let config: PipelineConfig = if json {
        serde_json::from_str(text)?
    } else {
        toml::from_str(text)?
    };
    match config.check() {
        Ok(warnings) => {
            for w in warnings {
                tracing::warn!("config: {w}");
            }
        }
        Err(e) => bail!(e),
    }
    Ok(config)
}

/// The default configuration as TOML, every key spelled out.
pub fn default_toml() -> String {
    toml::to_string_pretty(&PipelineConfig::default()).expect("default config serializes")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_round_trip() {
        let text = default_toml();
        for key in ["lambda1", "lambda2", "lambda3", "window", "cooccur_cap", "epsilon", "tau_pos", "tau_neg", "lookback", "max_input_bytes"] {
            assert!(text.contains(key), "{key} missing from\n{text}");
        }
        assert_eq!(parse_config(&text, false).unwrap(), PipelineConfig::default());
    }

    #[test]
    fn partial_and_invalid() {
        let c = parse_config("[edl]\nlambda3 = 0.2\n", false).unwrap();
        assert_eq!(c.edl.lambda3, 0.2);
        assert_eq!(c.edl.lambda1, 0.75);
        assert!(parse_config("[edl]\nlambda1 = 1.5\n", false).is_err());
        let c = parse_config(r#"{"sentiment": {"epsilon": 2.0}}"#, true).unwrap();
        assert_eq!(c.sentiment.epsilon, 2.0);
    }
}
