//! Error classes and their exit codes.

use relhyp_core::augmented::AugError;
use relhyp_core::complex::CogError;
use relhyp_core::development::DevError;
use relhyp_core::graph::GraphError;
use relhyp_core::group::{SpecError, TcError};
use relhyp_core::hyperbolicity::HypError;

pub const EXIT_INPUT: u8 = 2;
pub const EXIT_BUDGET: u8 = 3;

#[derive(Debug)]
pub enum Failure {
    Input(anyhow::Error),
    Budget(anyhow::Error),
}

impl Failure {
    pub fn input(msg: impl std::fmt::Display) -> Self {
        Failure::Input(anyhow::anyhow!("{msg}"))
    }

    pub fn code(&self) -> u8 {
        match self {
            Failure::Input(_) => EXIT_INPUT,
            Failure::Budget(_) => EXIT_BUDGET,
        }
    }

    pub fn error(&self) -> &anyhow::Error {
        match self {
            Failure::Input(e) | Failure::Budget(e) => e,
        }
    }
}

fn graph_is_budget(e: &GraphError) -> bool {
    matches!(e, GraphError::BudgetExceeded(_) | GraphError::TooLarge { .. })
}

fn classify(budget: bool, e: impl Into<anyhow::Error>) -> Failure {
    if budget {
        Failure::Budget(e.into())
    } else {
        Failure::Input(e.into())
    }
}

impl From<GraphError> for Failure {
    fn from(e: GraphError) -> Self {
        classify(graph_is_budget(&e), e)
    }
}

impl From<HypError> for Failure {
    fn from(e: HypError) -> Self {
        let budget = match &e {
            HypError::TooLarge { .. } => true,
            HypError::Graph(g) => graph_is_budget(g),
            _ => false,
        };
        classify(budget, e)
    }
}

impl From<AugError> for Failure {
    fn from(e: AugError) -> Self {
        let budget = match &e {
            AugError::BudgetExceeded { .. } => true,
            AugError::Graph(g) => graph_is_budget(g),
            _ => false,
        };
        classify(budget, e)
    }
}

impl From<DevError> for Failure {
    fn from(e: DevError) -> Self {
        let budget = match &e {
            DevError::BudgetExceeded(_) | DevError::InfiniteIndex { .. } => true,
            DevError::Graph(g) => graph_is_budget(g),
            _ => false,
        };
        classify(budget, e)
    }
}

impl From<CogError> for Failure {
    fn from(e: CogError) -> Self {
        Failure::Input(e.into())
    }
}

impl From<SpecError> for Failure {
    fn from(e: SpecError) -> Self {
        Failure::Input(e.into())
    }
}

impl From<TcError> for Failure {
    fn from(e: TcError) -> Self {
        Failure::Input(e.into())
    }
}
