//! Channel specs shipped with the binary.

use crate::channels::SpecFile;
use crate::error::{Error, Result};

pub const BUILTINS: [(&str, &str); 5] = [
    ("noiseless-pair", include_str!("../../specs/noiseless-pair.json")),
    ("noiseless-adder", include_str!("../../specs/noiseless-adder.json")),
    ("bsc-pair", include_str!("../../specs/bsc-pair.json")),
    ("superposition-wiretap", include_str!("../../specs/superposition-wiretap.json")),
    ("generalized-v", include_str!("../../specs/generalized-v.json")),
];

pub const DEFAULT_BUILTIN: &str = "noiseless-pair";

pub fn builtin_names() -> Vec<&'static str> {
    BUILTINS.iter().map(|(n, _)| *n).collect()
}

pub fn builtin(name: &str) -> Result<SpecFile> {
    let text = BUILTINS
        .iter()
        .find(|(n, _)| *n == name)
        .map(|(_, t)| *t)
        .ok_or_else(|| {
            Error::InvalidParameter(format!(
                "unknown builtin spec '{name}'; available: {}",
                builtin_names().join(", ")
            ))
        })?;
    let file: SpecFile = serde_json::from_str(text)?;
    // validate eagerly so a broken bundled file fails loudly
    file.clone().into_spec()?;
    Ok(file)
}
