//! Black-Scholes quotes at zero rate: closed form against quadrature and
//! finite differences, put-call parity and the PDE and vega-gamma checks.
//!
//! Run with `cargo run --example greeks`.

use pathwise::pricing::{
    bs_quote, bs_quote_quadrature, fd_greeks, pde_residual, vega_gamma_defect, Instrument, Payoff,
};

fn main() -> pathwise::Result<()> {
    let (k, t_mat, sigma) = (100.0, 1.0, 0.2);
    let call = Payoff::call(k, t_mat)?;
    let put = Payoff::put(k, t_mat)?;
    let instr = Instrument::black_scholes(call.clone());

    println!(
        "{:>6} {:>11} {:>9} {:>10} {:>10} {:>10} {:>10}",
        "spot", "value", "delta", "gamma", "theta", "vega", "quad err"
    );
    for s in [60.0, 80.0, 100.0, 120.0, 160.0] {
        let g = bs_quote(&call, sigma, 0.0, s)?;
        let q = bs_quote_quadrature(&call, sigma, 0.0, s)?;
        println!(
            "{s:>6.1} {:>11.6} {:>9.5} {:>10.3e} {:>10.4} {:>10.4} {:>10.1e}",
            g.value,
            g.delta,
            g.gamma,
            g.theta,
            g.vega,
            (g.value - q.value).abs()
        );
    }

    let (t, s) = (0.4, 93.0);
    let g = bs_quote(&call, sigma, t, s)?;
    let fd = fd_greeks(&instr, sigma, t, s)?;
    println!("\nat t={t}, s={s}:");
    println!("  delta {:.10} (fd {:.10})", g.delta, fd.delta);
    println!("  gamma {:.10} (fd {:.10})", g.gamma, fd.gamma);
    let parity = g.value - bs_quote(&put, sigma, t, s)?.value - (s - k);
    println!("  call - put - (s - K) = {parity:.2e}");
    println!("  PDE residual         = {:.2e}", pde_residual(&instr, sigma, t, s)?);
    println!(
        "  vega - sigma tau s^2 gamma = {:.2e}",
        vega_gamma_defect(&instr, sigma, t, s)?
    );
    Ok(())
}
