//! Decides acceptance of an ultimately periodic trace with the automaton
//! and cross-checks the answer against the direct semantics.
//!
//! $ cargo run --example lasso_acceptance

use std::path::Path;

use ltlfo::acceptance::{lasso_accepts_with_limit, oracle_eval, DEFAULT_STATE_LIMIT};
use ltlfo::cli::read_formula;
use ltlfo::{build_automaton, to_nnf, LassoTrace};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let data = Path::new(env!("CARGO_MANIFEST_DIR")).join("examples/data");
    let phi = read_formula(&data.join("order_confirmed.ltl"))?;
    let automaton = build_automaton(&to_nnf(&phi))?;
    println!("{phi}\n");

    for name in ["orders_lasso.json", "orders_unconfirmed.json"] {
        let t = LassoTrace::parse(&std::fs::read_to_string(data.join(name))?)?;
        let outcome = lasso_accepts_with_limit(&automaton, &t, DEFAULT_STATE_LIMIT)?;
        let oracle = oracle_eval(&phi, &t, 0)?;
        println!(
            "{name:<26} prefix {} loop {}  automaton {:<6} oracle {:<6} ({} product states, {} edges)",
            t.prefix().len(),
            t.cycle().len(),
            outcome.accepted,
            oracle,
            outcome.stats.product_states,
            outcome.stats.product_edges,
        );
        assert_eq!(outcome.accepted, oracle);
    }
    Ok(())
}
