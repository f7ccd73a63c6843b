//! Runs the three-valued monitor over a JSON Lines trace, printing the
//! verdict after each message.
//!
//! $ cargo run --example monitor_trace
//! $ cargo run --example monitor_trace -- formula.ltl trace.jsonl

use std::fs::File;
use std::io::BufReader;
use std::path::PathBuf;

use ltlfo::cli::read_formula;
use ltlfo::events::TraceReader;
use ltlfo::Monitor;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let data = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("examples/data");
    let mut args = std::env::args().skip(1);
    let formula = args
        .next()
        .map(PathBuf::from)
        .unwrap_or(data.join("never_sell.ltl"));
    let trace = args
        .next()
        .map(PathBuf::from)
        .unwrap_or(data.join("sells.jsonl"));

    let phi = read_formula(&formula)?;
    println!("{phi}");
    let mut monitor = Monitor::new(&phi)?;
    for (i, msg) in TraceReader::new(BufReader::new(File::open(&trace)?)).enumerate() {
        let msg = msg?;
        let verdict = monitor.step(&msg);
        let width = monitor.configuration().dnf().len();
        println!("{i}\t{verdict:<12}\twidth {width}\t{}", msg.to_json());
    }
    println!("RESULT {}", monitor.verdict());
    Ok(())
}
