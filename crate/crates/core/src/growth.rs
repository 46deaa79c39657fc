//! Named registry of slowly growing parameter functions used by block-size
//! selection, Lupanov parameter choice and the bound formulas.

use std::fmt;
use std::str::FromStr;

use crate::error::Error;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GrowthFn {
    /// `log2 n`
    Log2,
    /// `sqrt n`
    Sqrt,
    /// `log2 log2 n`
    LogLog,
    /// `n / (log2 n + 1)`, the largest admissible choice for `psi = 2`.
    LinearOverLog,
    /// A constant.
    Const(f64),
}

impl GrowthFn {
    /// Registry entries, for sweeps and help text.
    pub const REGISTRY: [GrowthFn; 6] = [
        GrowthFn::Log2,
        GrowthFn::Sqrt,
        GrowthFn::LogLog,
        GrowthFn::LinearOverLog,
        GrowthFn::Const(1.0),
        GrowthFn::Const(2.0),
    ];

    pub fn eval(&self, n: usize) -> f64 {
        let x = n as f64;
        match *self {
            GrowthFn::Log2 => x.log2(),
            GrowthFn::Sqrt => x.sqrt(),
            GrowthFn::LogLog => x.log2().log2(),
            GrowthFn::LinearOverLog => x / (x.log2() + 1.0),
            GrowthFn::Const(c) => c,
        }
    }
}

impl fmt::Display for GrowthFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GrowthFn::Log2 => f.write_str("log2"),
            GrowthFn::Sqrt => f.write_str("sqrt"),
            GrowthFn::LogLog => f.write_str("loglog"),
            GrowthFn::LinearOverLog => f.write_str("n-over-log2"),
            GrowthFn::Const(c) => write!(f, "const:{c}"),
        }
    }
}

impl FromStr for GrowthFn {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "log2" => Ok(GrowthFn::Log2),
            "sqrt" => Ok(GrowthFn::Sqrt),
            "loglog" => Ok(GrowthFn::LogLog),
            "n-over-log2" => Ok(GrowthFn::LinearOverLog),
            _ => {
                let c = s
                    .strip_prefix("const:")
                    .and_then(|v| v.parse::<f64>().ok())
                    .filter(|c| c.is_finite() && *c > 0.0)
                    .ok_or_else(|| {
                        Error::Parameter(format!(
                            "unknown growth function `{s}` (expected log2, sqrt, loglog, n-over-log2 or const:<positive>)"
                        ))
                    })?;
                Ok(GrowthFn::Const(c))
            }
        }
    }
}
