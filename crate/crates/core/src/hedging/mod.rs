//! Hedge-weight solvers, the rebalancing ledger, its Taylor-term
//! decomposition and the Riemann-sum defect bound.

mod export;
mod ledger;
mod riemann;
mod taylor;
mod weights;

pub use export::{write_ledger_csv, LedgerSummary};
pub use ledger::{run_hedge, HedgeSetup, HedgeWeights, PnLLedger};
pub use riemann::{riemann_sum_defect, RiemannDefect};
pub use taylor::{decompose_ledger, taylor_decomposition, TaylorDecomposition, TaylorTerm, TAYLOR_INDEX};
pub use weights::{solve_delta_gamma_weights, solve_delta_weights, WeightRule};
