use thiserror::Error;

use crate::linegraph::ObstructionWitness;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    Input(String),
    #[error("frustration graph is not a line graph (forbidden subgraph #{})", .0.beineke_index)]
    Obstruction(Box<ObstructionWitness>),
    #[error("resource cap exceeded: {0}")]
    ResourceCap(String),
}

impl Error {
    pub(crate) fn input(msg: impl Into<String>) -> Self {
        Error::Input(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
