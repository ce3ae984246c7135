//! Named substitutions: `tm`, `ex42`, `ex46` and `gtm:b,m`.

use crate::error::{Error, Result};
use crate::gtm::GtmParams;
use crate::substitution::Substitution;

pub const NAMES: &[&str] = &["tm", "ex42", "ex46", "gtm:b,m"];

/// Looks up a built-in by name. `None` when the name is not a built-in.
pub fn builtin(name: &str) -> Option<Result<Substitution>> {
    let images: &[&str] = match name {
        "tm" => &["01", "10"],
        // left-marked only; desubstitution fails
        "ex42" => &["001", "120", "201"],
        // not left-marked
        "ex46" => &["021", "010", "210"],
        _ => {
            return name
                .strip_prefix("gtm:")
                .map(|p| gtm_params(p).map(|g| g.substitution()))
        }
    };
    Some(Substitution::from_strs(images).map(|s| s.with_name(name)))
}

/// Parses `b,m`.
pub fn gtm_params(spec: &str) -> Result<GtmParams> {
    let bad = || Error::InvalidArgument(format!("expected gtm:b,m with integers, got {spec:?}"));
    let (b, m) = spec.split_once(',').ok_or_else(bad)?;
    GtmParams::new(
        b.trim().parse().map_err(|_| bad())?,
        m.trim().parse().map_err(|_| bad())?,
    )
}
