use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Invalid(String),
    #[error("{0} verification check(s) failed")]
    VerificationFailed(usize),
    #[error("{context}: {source}")]
    Io {
        context: String,
        #[source]
        source: std::io::Error,
    },
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::VerificationFailed(_) => 1,
            CliError::Invalid(_) => 2,
            CliError::Io { .. } => 3,
        }
    }

    pub fn io(context: impl Into<String>, source: std::io::Error) -> Self {
        CliError::Io { context: context.into(), source }
    }
}

impl From<fadeq::analytic::AnalyticError> for CliError {
    fn from(e: fadeq::analytic::AnalyticError) -> Self {
        CliError::Invalid(e.to_string())
    }
}

impl From<fadeq::channel::ChannelError> for CliError {
    fn from(e: fadeq::channel::ChannelError) -> Self {
        CliError::Invalid(e.to_string())
    }
}

impl From<fadeq::sim::SimError> for CliError {
    fn from(e: fadeq::sim::SimError) -> Self {
        CliError::Invalid(e.to_string())
    }
}

impl From<fadeq::markov::ChainError> for CliError {
    fn from(e: fadeq::markov::ChainError) -> Self {
        CliError::Invalid(e.to_string())
    }
}
