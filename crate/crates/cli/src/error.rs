use serde::Serialize;
use serde_json::{Map, Value};

use competing_exchange::Error;

pub const EXIT_BATTERY: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_MODEL_INPUT: i32 = 3;
pub const EXIT_IO: i32 = 4;
pub const EXIT_GRAPH: i32 = 5;
pub const EXIT_SIZE: i32 = 6;
pub const EXIT_DIVERGENCE: i32 = 7;

#[derive(Debug, Clone, PartialEq)]
pub struct CliError {
    pub code: i32,
    pub kind: &'static str,
    pub message: String,
    /// Extra fields merged into the error record.
    pub detail: Map<String, Value>,
}

impl CliError {
    pub fn new(code: i32, kind: &'static str, message: impl Into<String>) -> Self {
        Self {
            code,
            kind,
            message: message.into(),
            detail: Map::new(),
        }
    }

    pub fn usage(message: impl Into<String>) -> Self {
        Self::new(EXIT_USAGE, "usage", message)
    }

    pub fn io(message: impl Into<String>) -> Self {
        Self::new(EXIT_IO, "io", message)
    }

    pub fn with(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.detail.insert(key.to_string(), value.into());
        self
    }

    pub fn to_json(&self) -> String {
        #[derive(Serialize)]
        struct Record<'a> {
            schema_version: u32,
            kind: &'a str,
            exit_code: i32,
            message: &'a str,
            #[serde(skip_serializing_if = "Map::is_empty")]
            detail: &'a Map<String, Value>,
        }
        let r = Record {
            schema_version: crate::output::SCHEMA_VERSION,
            kind: self.kind,
            exit_code: self.code,
            message: &self.message,
            detail: &self.detail,
        };
        serde_json::to_string(&serde_json::json!({ "error": r })).expect("error record serializes")
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let message = e.to_string();
        let (code, kind) = match &e {
            Error::DegenerateCouplings | Error::SpinGlassPoint | Error::ZeroDenominator(_) => {
                (EXIT_MODEL_INPUT, "model_input")
            }
            Error::NotBipartite | Error::NonUniformCoordination { .. } => (EXIT_GRAPH, "graph_constraint"),
            Error::SizeLimit { .. } => (EXIT_SIZE, "size_limit"),
            Error::NonConvergence { .. } | Error::QuadratureDivergence { .. } => (EXIT_DIVERGENCE, "divergence"),
            Error::DimensionMismatch { .. } => (EXIT_BATTERY, "internal"),
            Error::InvalidCouplings { .. } | Error::Domain { .. } | Error::InvalidInput(_) | Error::InvalidExtent(_) => {
                (EXIT_USAGE, "usage")
            }
        };
        let mut out = CliError::new(code, kind, message);
        if let Error::QuadratureDivergence { quantity, estimate, limit } = e {
            out = out.with("quantity", quantity).with("estimate", estimate).with("limit", limit);
        }
        out
    }
}

pub type CliResult<T> = Result<T, CliError>;
