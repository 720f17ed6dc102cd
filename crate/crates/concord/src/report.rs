//! Output envelope shared by all commands: a payload plus structured
//! warnings, rendered as TSV (header row, fixed decimal places: kappas and
//! p-values with four, percentages with one) or as schema-stable JSON.
//! Formatting is locale-independent by construction.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Tsv,
    Json,
}

impl std::str::FromStr for OutputFormat {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "tsv" => Ok(OutputFormat::Tsv),
            "json" => Ok(OutputFormat::Json),
            other => Err(format!("unknown format '{other}' (valid: tsv, json)")),
        }
    }
}

/// A structured note that must reach the user (data caveats, published-value
/// discrepancies, clamped estimates).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Warning {
    pub code: String,
    pub message: String,
}

impl Warning {
    pub fn new(code: impl Into<String>, message: impl Into<String>) -> Self {
        Self {
            code: code.into(),
            message: message.into(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Envelope<P: Serialize> {
    pub format: OutputFormat,
    pub warnings: Vec<Warning>,
    pub payload: P,
}

/// A payload that knows how to print itself as TSV.
pub trait TsvPayload {
    fn write_tsv(&self, out: &mut String);
}

impl<P: Serialize + TsvPayload> Envelope<P> {
    pub fn new(format: OutputFormat, payload: P) -> Self {
        Self {
            format,
            warnings: Vec::new(),
            payload,
        }
    }

    pub fn warn(&mut self, code: impl Into<String>, message: impl Into<String>) {
        self.warnings.push(Warning::new(code, message));
    }

    /// Rendered stdout body. TSV warnings go to stderr via [`Self::stderr`]
    /// so the table stays machine-readable; JSON embeds them.
    pub fn stdout(&self) -> String {
        match self.format {
            OutputFormat::Json => {
                let mut s = serde_json::to_string_pretty(self).expect("serializable payload");
                s.push('\n');
                s
            }
            OutputFormat::Tsv => {
                let mut s = String::new();
                self.payload.write_tsv(&mut s);
                s
            }
        }
    }

    pub fn stderr(&self) -> String {
        match self.format {
            OutputFormat::Json => String::new(),
            OutputFormat::Tsv => {
                let mut s = String::new();
                for w in &self.warnings {
                    s.push_str(&format!("warning[{}]: {}\n", w.code, w.message));
                }
                s
            }
        }
    }
}

/// Four decimals, the precision the published kappa tables use.
pub fn fmt_kappa(v: f64) -> String {
    format!("{v:.4}")
}

/// Four decimals, the precision the published p-value table uses.
pub fn fmt_p(v: f64) -> String {
    format!("{v:.4}")
}

/// One-decimal percentage.
pub fn fmt_pct(fraction: f64) -> String {
    format!("{:.1}", fraction * 100.0)
}

/// Significance stars: * p < 0.05, ** p < 0.01, *** p < 0.001.
pub fn significance_stars(p: f64) -> &'static str {
    if p < 0.001 {
        "***"
    } else if p < 0.01 {
        "**"
    } else if p < 0.05 {
        "*"
    } else {
        ""
    }
}
