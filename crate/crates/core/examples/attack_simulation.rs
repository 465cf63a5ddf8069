//! Monte-Carlo impersonation and substitution attacks compared with the
//! exact success probabilities.
//!
//! cargo run --release --example attack_simulation -- 200000

use rmacode::{best_substitution_strategy, run_impersonation, run_substitution, AuthConfig};

fn main() -> rmacode::Result<()> {
    let trials = std::env::args().nth(1).map_or(100_000, |t| t.parse().expect("trial count"));
    let config = AuthConfig::rm(4, 1, 4, 3)?;

    let imp = run_impersonation(&config, trials, 1)?;
    println!("{}", imp.record_line());

    let (strategy, p_s) = best_substitution_strategy(&config)?;
    println!("optimal offset: delta_s={} delta_t={} (P_S = {p_s})", strategy.delta_s(), strategy.delta_t());
    let sub = run_substitution(&config, &strategy, trials, 2)?;
    println!("{}", sub.record_line());
    Ok(())
}
