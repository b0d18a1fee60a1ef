//! Zero-rate Black-Scholes pricing, exact PDE-solution instruments and
//! residual checks.

mod black_scholes;
mod instrument;
mod normal;
mod payoff;
mod quadrature;
mod residual;

pub use black_scholes::{bs_quote, bs_quote_quadrature, log_ladder, Greeks, LogLadder, QuoteMethod};
pub use instrument::{analytic_instrument, Instrument, Jet, PricedInstrument, Pricer, State, VolSource, AUX, T, X};
pub use normal::{hermite_he, norm_cdf, norm_pdf};
pub use payoff::{Payoff, PayoffKind, TabulatedPayoff};
pub use quadrature::{gauss_hermite, gauss_legendre, QuadratureRule};
pub use residual::{fd_greeks, pde_residual, pde_residual_fd, vega_gamma_defect};
