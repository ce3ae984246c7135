use std::path::Path;

use winshift_core::builtin::{builtin, gtm_params, NAMES};
use winshift_core::{GtmParams, Substitution};

use crate::commands::CliError;

/// A substitution named on the command line, with its generalized
/// Thue–Morse parameters when it is one.
pub struct Source {
    pub tau: Substitution,
    pub gtm: Option<GtmParams>,
}

/// Resolves a built-in name first, then a JSON file path.
pub fn load(spec: &str) -> Result<Source, CliError> {
    if let Some(tau) = builtin(spec) {
        let tau = tau?;
        let gtm = spec.strip_prefix("gtm:").map(gtm_params).transpose()?;
        return Ok(Source { tau, gtm });
    }
    let path = Path::new(spec);
    if !path.exists() {
        return Err(CliError::Usage(format!(
            "{spec:?} is neither a built-in ({}) nor an existing file",
            NAMES.join(", ")
        )));
    }
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read {spec}: {e}")))?;
    let tau = Substitution::from_json(&text)?;
    Ok(Source { tau, gtm: None })
}
