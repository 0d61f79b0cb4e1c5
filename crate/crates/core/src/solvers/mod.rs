//! Deciders and semi-deciders for the snake problems.
//!
//! Every YES or NO [`Decision`] carries a [`Certificate`] that
//! [`crate::certificates::verify`] accepts. UNKNOWN means the budget ran out.

mod enumerate;
mod infinite;
mod ouroboros;
mod reach;
mod walk;
mod y_snake;

pub use enumerate::{count_snakes, enumerate_snakes, OutOfBudget, SnakeSearch};
pub use infinite::solve_infinite_snake;
pub use ouroboros::solve_ouroboros;
pub use reach::solve_reachability;
pub use y_snake::solve_y_snake;

use crate::certificates::{Certificate, Verdict, Witness};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SolveBudget {
    pub max_snake_length: usize,
    pub max_ouroboros_length: usize,
    pub approximation_order: usize,
    /// Cap on search nodes across one solver call.
    pub max_nodes: u64,
}

impl Default for SolveBudget {
    fn default() -> Self {
        SolveBudget {
            max_snake_length: 12,
            max_ouroboros_length: 12,
            approximation_order: 4,
            max_nodes: 50_000_000,
        }
    }
}

impl SolveBudget {
    /// Sets both length limits to `n`.
    pub fn with_length(n: usize) -> Self {
        SolveBudget {
            max_snake_length: n,
            max_ouroboros_length: n,
            ..Self::default()
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct BudgetSpent {
    pub max_length_searched: usize,
    pub nodes_expanded: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decision {
    pub verdict: Verdict,
    /// Present exactly for YES and NO.
    pub certificate: Option<Certificate>,
    pub spent: BudgetSpent,
}

impl Decision {
    pub fn witness(&self) -> Option<&Witness> {
        self.certificate.as_ref().map(|c| &c.witness)
    }

    fn unknown(spent: BudgetSpent) -> Self {
        Decision {
            verdict: Verdict::Unknown,
            certificate: None,
            spent,
        }
    }

    fn certified(cert: Certificate, spent: BudgetSpent) -> Self {
        Decision {
            verdict: cert.verdict,
            certificate: Some(cert),
            spent,
        }
    }
}
