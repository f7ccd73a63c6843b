//! Builds the alternating automaton for a formula and lists its states.
//! Pass `--dot` to print Graphviz output instead.
//!
//! $ cargo run --example compile_automaton
//! $ cargo run --example compile_automaton -- --dot | dot -Tsvg > a.svg

use ltlfo::automaton::Valuation;
use ltlfo::{build_automaton, parse, to_nnf, Message};

const FORMULA: &str = include_str!("data/order_confirmed.ltl");

fn main() {
    let source: String = FORMULA
        .lines()
        .filter(|l| !l.trim_start().starts_with('#'))
        .collect();
    let a = build_automaton(&to_nnf(&parse(&source).unwrap())).unwrap();

    if std::env::args().any(|a| a == "--dot") {
        print!("{}", a.to_dot());
        return;
    }

    for s in a.states() {
        let mark = match (s == a.initial_state(), a.is_accepting(s)) {
            (true, true) => "->*",
            (true, false) => "-> ",
            (false, true) => "  *",
            (false, false) => "   ",
        };
        println!("{mark} {:>2}  {}", s.0, a.label(s));
    }

    let m = Message::parse(
        r#"{"message":{"action":"placeBuyOrder","stock":{"name":"stock-1","amount":"1"}}}"#,
    )
    .unwrap();
    println!("\ndelta from the initial state on {}:", m.to_json());
    println!(
        "  {}",
        a.delta(&Valuation::empty(), a.initial_state(), &m).unwrap()
    );
}
