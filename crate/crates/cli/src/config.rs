//! Run configuration shared by every subcommand.

use std::str::FromStr;

use fiberforge::construction::DEFAULT_SEARCH_CAP;
use fiberforge::construction::{B2Mode, PipelineConfig};
use fiberforge::smallcanc::{one_sixth, Lambda};
use fiberforge::subgroups::DEFAULT_MAX_COSETS;

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OutputFormat {
    #[default]
    Text,
    Json,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunConfig {
    pub max_cosets: usize,
    pub search_cap: usize,
    pub lambda: Lambda,
    pub b2_mode: B2Mode,
    pub format: OutputFormat,
    pub seed: u64,
    pub trace: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            max_cosets: DEFAULT_MAX_COSETS,
            search_cap: DEFAULT_SEARCH_CAP,
            lambda: one_sixth(),
            b2_mode: B2Mode::FiniteGroup,
            format: OutputFormat::Text,
            seed: 0,
            trace: false,
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<(), CliError> {
        if self.max_cosets == 0 {
            return Err(CliError::Usage("--max-cosets must be at least 1".into()));
        }
        if self.search_cap == 0 {
            return Err(CliError::Usage("--search-cap must be at least 1".into()));
        }
        if *self.lambda.numer() == 0 || self.lambda >= Lambda::from_integer(1) {
            return Err(CliError::Usage(format!("--lambda must lie strictly between 0 and 1, got {}", self.lambda)));
        }
        Ok(())
    }

    pub fn pipeline(&self) -> PipelineConfig {
        PipelineConfig { max_cosets: self.max_cosets, search_cap: self.search_cap }
    }
}

/// `P/Q` or a plain integer.
pub fn parse_lambda(s: &str) -> Result<Lambda, String> {
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s.trim(), "1"),
    };
    let n = u64::from_str(n).map_err(|e| format!("bad numerator `{n}`: {e}"))?;
    let d = u64::from_str(d).map_err(|e| format!("bad denominator `{d}`: {e}"))?;
    if d == 0 {
        return Err("denominator is zero".into());
    }
    Ok(Lambda::new(n, d))
}

/// `finite-group`, `aspherical` (or `aspherical-assertion`), or a natural
/// number taken as the explicit value.
pub fn parse_b2_mode(s: &str) -> Result<B2Mode, String> {
    match s {
        "finite-group" | "finite" => Ok(B2Mode::FiniteGroup),
        "aspherical" | "aspherical-assertion" => Ok(B2Mode::AsphericalAssertion),
        _ => {
            let v = s.strip_prefix("explicit=").unwrap_or(s);
            v.parse()
                .map(B2Mode::Explicit)
                .map_err(|_| format!("unknown b2 mode `{s}`; use finite-group, aspherical or a number"))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lambda_parsing() {
        assert_eq!(parse_lambda("1/6").unwrap(), one_sixth());
        assert_eq!(parse_lambda("2/12").unwrap(), one_sixth());
        assert!(parse_lambda("1/0").is_err());
        assert!(parse_lambda("x").is_err());
    }

    #[test]
    fn validation() {
        assert!(RunConfig::default().validate().is_ok());
        let bad = RunConfig { lambda: Lambda::new(1, 1), ..RunConfig::default() };
        assert!(bad.validate().is_err());
        let bad = RunConfig { max_cosets: 0, ..RunConfig::default() };
        assert!(bad.validate().is_err());
    }

    #[test]
    fn b2_modes() {
        assert_eq!(parse_b2_mode("finite-group").unwrap(), B2Mode::FiniteGroup);
        assert_eq!(parse_b2_mode("aspherical").unwrap(), B2Mode::AsphericalAssertion);
        assert_eq!(parse_b2_mode("3").unwrap(), B2Mode::Explicit(3));
        assert_eq!(parse_b2_mode("explicit=2").unwrap(), B2Mode::Explicit(2));
        assert!(parse_b2_mode("maybe").is_err());
    }
}
