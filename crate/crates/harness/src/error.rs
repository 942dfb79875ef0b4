use thiserror::Error;

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("config error: {0}")]
    Config(String),
    #[error("numeric failure: {0}")]
    Numeric(String),
    #[error("budget exhausted: {0}")]
    Budget(String),
    #[error("output: {0}")]
    Output(String),
}

impl HarnessError {
    pub fn exit_code(&self) -> i32 {
        match self {
            HarnessError::Config(_) => 2,
            HarnessError::Numeric(_) => 3,
            HarnessError::Budget(_) => 4,
            HarnessError::Output(_) => 1,
        }
    }
}

impl From<mhd_couette::Error> for HarnessError {
    fn from(e: mhd_couette::Error) -> Self {
        use mhd_couette::Error as E;
        match e {
            E::InvalidGrid(_) | E::InvalidParameter(_) | E::DimensionMismatch { .. } => {
                HarnessError::Config(e.to_string())
            }
            E::Io(_) | E::Checkpoint(_) => HarnessError::Output(e.to_string()),
            _ => HarnessError::Numeric(e.to_string()),
        }
    }
}

impl From<std::io::Error> for HarnessError {
    fn from(e: std::io::Error) -> Self {
        HarnessError::Output(e.to_string())
    }
}

impl From<csv::Error> for HarnessError {
    fn from(e: csv::Error) -> Self {
        HarnessError::Output(e.to_string())
    }
}
