//! Seeded random comparison of automaton acceptance against the direct
//! semantics.
//!
//! $ cargo run --release --example fuzz_equivalence -- 42 1000
//! ...
//! AGREE 1000/1000

use ltlfo::acceptance::{fuzz_compare, FuzzBounds, FuzzCase};

fn main() {
    let mut args = std::env::args()
        .skip(1)
        .map(|a| a.parse::<u64>().expect("integer argument"));
    let seed = args.next().unwrap_or(42);
    let count = args.next().unwrap_or(200) as usize;
    let bounds = FuzzBounds::default();

    for i in 0..3 {
        let case = FuzzCase::generate(seed, i, &bounds);
        println!(
            "case {i}: {}\n        {}",
            case.formula,
            case.lasso.to_json()
        );
    }

    let report = fuzz_compare(seed, count, &bounds);
    print!("{report}");
    println!("{:.3}s", report.elapsed.as_secs_f64());
    if !report.all_agree() {
        std::process::exit(1);
    }
}
