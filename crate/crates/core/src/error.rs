use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("unknown layer `{0}`")]
    UnknownLayer(String),
    #[error("unknown entity `{0}`")]
    UnknownEntity(String),
    #[error("layer `{0}` is already part of the network")]
    DuplicateLayer(String),
    #[error("layer `{layer}` has zero variance over its present scores")]
    DegenerateLayer { layer: String },
    #[error("layer `{layer}` has {present} present scores, at least 2 are required")]
    InsufficientData { layer: String, present: usize },
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("table failed validation with {} violation(s): {}", .0.len(), summarize(.0))]
    Validation(Vec<crate::model::Violation>),
    #[error("total quantized edge weight exceeds 2^63-1")]
    WeightOverflow,
    #[error("binomial success probability {0} is outside [0, 1]")]
    InvalidProbability(f64),
    #[error("graph has no edges, modularity is undefined")]
    EmptyGraph,
    #[error("partitions share no entities, similarity is undefined")]
    UndefinedSimilarity,
    #[error("normal equations are singular")]
    SingularSystem,
    #[error("target has zero variance, R^2 is undefined")]
    UndefinedR2,
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("xml: {0}")]
    Xml(String),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

fn summarize(violations: &[crate::model::Violation]) -> String {
    let shown: Vec<String> = violations.iter().take(5).map(|v| v.to_string()).collect();
    let mut s = shown.join("; ");
    if violations.len() > 5 {
        s.push_str("; ...");
    }
    s
}

impl Error {
    /// True for failures caused by the numbers rather than the input shape.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::WeightOverflow
                | Error::InvalidProbability(_)
                | Error::SingularSystem
                | Error::UndefinedR2
                | Error::Numerical(_)
        )
    }
}
