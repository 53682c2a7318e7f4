//! Error budgets, lattice geometry, optimization and pulse-level simulation
//! for multi-control Rydberg blockade gates.

pub mod budget;
pub mod error;
pub mod lattice;
pub mod model;
pub mod optimize;
pub mod oracle;
pub mod sequential;
pub mod sim;
pub mod simultaneous;

/// Largest supported number of control atoms.
pub const MAX_CONTROLS: u32 = 64;

pub use budget::{ErrorBudget, Mode, Scheme};
pub use error::{BudgetError, ModelError, OptimizeError, SimError};
pub use lattice::LatticeGeometry;
pub use model::{GateParams, InteractionModel, Law, RydbergLevel};
