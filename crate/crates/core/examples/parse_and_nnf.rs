//! Parses a formula, prints its structure, and rewrites it into negation
//! normal form.
//!
//! $ cargo run --example parse_and_nnf
//! $ cargo run --example parse_and_nnf -- 'G (x = "a" -> F x != "a")'

use ltlfo::formula::{subformulas, temporal_depth};
use ltlfo::{negate, parse, to_nnf};

const DEFAULT: &str = r#"G ((exists a in "/message/action" : a = "placeBuyOrder")
    -> F !(exists c in "/message/confirm/name" : c = "none"))"#;

fn main() {
    let text = std::env::args()
        .nth(1)
        .unwrap_or_else(|| DEFAULT.to_string());
    let phi = match parse(&text) {
        Ok(phi) => phi,
        Err(e) => {
            eprintln!("error: {e}");
            std::process::exit(3);
        }
    };
    let nnf = to_nnf(&phi);
    println!("input    {phi}");
    println!("nnf      {nnf}");
    println!("negated  {}", negate(&phi));
    println!(
        "size {} -> {}, temporal depth {} -> {}",
        phi.size(),
        nnf.size(),
        temporal_depth(&phi),
        temporal_depth(&nnf)
    );
    println!("closure:");
    for (i, f) in subformulas(&nnf).iter().enumerate() {
        println!("  {i:>2}  {f}");
    }
}
