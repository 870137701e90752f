//! Grid specifiers `linear:a:b:n` and `geometric:a:b:n`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::LabError;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum GridSpec {
    Linear { start: f64, end: f64, n: usize },
    Geometric { start: f64, end: f64, n: usize },
}

impl GridSpec {
    /// Grid points; the first and last equal `start` and `end` exactly.
    pub fn points(&self) -> Vec<f64> {
        match *self {
            GridSpec::Linear { start, end, n } => (0..n)
                .map(|k| {
                    if k + 1 == n {
                        end
                    } else {
                        start + (end - start) * (k as f64 / (n - 1) as f64)
                    }
                })
                .collect(),
            GridSpec::Geometric { start, end, n } => {
                let ratio = (end / start).ln();
                (0..n)
                    .map(|k| {
                        if k == 0 {
                            start
                        } else if k + 1 == n {
                            end
                        } else {
                            start * (ratio * (k as f64 / (n - 1) as f64)).exp()
                        }
                    })
                    .collect()
            }
        }
    }
}

impl FromStr for GridSpec {
    type Err = LabError;

    fn from_str(spec: &str) -> Result<Self, Self::Err> {
        let bad = |reason: &str| LabError::BadGridSpec {
            spec: spec.to_string(),
            reason: reason.to_string(),
        };
        let parts: Vec<&str> = spec.split(':').collect();
        let [kind, a, b, n] = parts.as_slice() else {
            return Err(bad("expected kind:a:b:n"));
        };
        let start: f64 = a.trim().parse().map_err(|_| bad("start is not a number"))?;
        let end: f64 = b.trim().parse().map_err(|_| bad("end is not a number"))?;
        let n: usize = n.trim().parse().map_err(|_| bad("n is not a count"))?;
        if !start.is_finite() || !end.is_finite() {
            return Err(bad("endpoints must be finite"));
        }
        if n < 2 {
            return Err(bad("n must be at least 2"));
        }
        if start == end {
            return Err(bad("endpoints must differ"));
        }
        match kind.trim() {
            "linear" => Ok(GridSpec::Linear { start, end, n }),
            "geometric" => {
                if start <= 0.0 || end <= 0.0 {
                    Err(bad("geometric endpoints must be positive"))
                } else {
                    Ok(GridSpec::Geometric { start, end, n })
                }
            }
            _ => Err(bad("kind must be `linear` or `geometric`")),
        }
    }
}

impl fmt::Display for GridSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GridSpec::Linear { start, end, n } => write!(f, "linear:{start}:{end}:{n}"),
            GridSpec::Geometric { start, end, n } => write!(f, "geometric:{start}:{end}:{n}"),
        }
    }
}

impl TryFrom<String> for GridSpec {
    type Error = LabError;
    fn try_from(s: String) -> Result<Self, Self::Error> {
        s.parse()
    }
}

impl From<GridSpec> for String {
    fn from(g: GridSpec) -> String {
        g.to_string()
    }
}
