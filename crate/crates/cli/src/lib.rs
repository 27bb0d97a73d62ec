//! Library half of the `crosspoly` binary: single computations, `(n, t)`
//! sweeps with CSV/JSON emission, and the exit-code conventions.
//!
//! Exit codes: `0` success, `1` verification failure, `2` usage or regime error.

pub mod compute;
pub mod sweep;

use thiserror::Error;

pub const EXIT_OK: u8 = 0;
pub const EXIT_VERIFY_FAILED: u8 = 1;
pub const EXIT_USAGE: u8 = 2;

/// Environment variable read for the default seed.
pub const SEED_ENV: &str = "CROSSPOLY_SEED";

/// Seed used when neither a flag, a config file nor the environment sets one.
pub const DEFAULT_SEED: u64 = 42;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] crosspoly::Error),
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("config {path}: {message}")]
    Config { path: String, message: String },
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, CliError>;

/// Parses `1,0,-0.5` into coordinates.
pub fn parse_coords(s: &str) -> Result<Vec<f64>> {
    s.split(',')
        .map(|c| {
            let c = c.trim();
            c.parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| CliError::Usage(format!("`{c}` is not a finite number in `{s}`")))
        })
        .collect()
}

/// Parses a dimension list: `3`, `3,4,6` or the inclusive range `3:6`.
pub fn parse_dims(s: &str) -> Result<Vec<usize>> {
    let bad = || CliError::Usage(format!("`{s}` is not a dimension, list or range like 3:6"));
    let dims: Vec<usize> = if let Some((lo, hi)) = s.split_once(':') {
        let lo: usize = lo.trim().parse().map_err(|_| bad())?;
        let hi: usize = hi.trim().parse().map_err(|_| bad())?;
        (lo..=hi).collect()
    } else {
        s.split(',').map(|p| p.trim().parse().map_err(|_| bad())).collect::<Result<_>>()?
    };
    if dims.is_empty() {
        return Err(bad());
    }
    Ok(dims)
}

/// The seed from the environment, if set and valid.
pub fn env_seed() -> Result<Option<u64>> {
    match std::env::var(SEED_ENV) {
        Ok(v) => v
            .trim()
            .parse()
            .map(Some)
            .map_err(|_| CliError::Usage(format!("{SEED_ENV}=`{v}` is not an unsigned integer"))),
        Err(_) => Ok(None),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn coordinates() {
        assert_eq!(parse_coords("1, 0,-0.5").unwrap(), vec![1.0, 0.0, -0.5]);
        assert!(parse_coords("1,,2").is_err());
        assert!(parse_coords("1,nan").is_err());
    }

    #[test]
    fn dimensions() {
        assert_eq!(parse_dims("3").unwrap(), vec![3]);
        assert_eq!(parse_dims("3:5").unwrap(), vec![3, 4, 5]);
        assert_eq!(parse_dims("2,6").unwrap(), vec![2, 6]);
        assert!(parse_dims("5:3").is_err());
        assert!(parse_dims("x").is_err());
    }
}
