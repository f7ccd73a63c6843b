//! Path domains over a tree-structured message.
//!
//! $ cargo run --example stock_domain
//! /message/stock/name     {"stock-1", "stock-2"}
//! /message/stock/amount   {"123", "456"}
//! ...

use ltlfo::events::Node;
use ltlfo::formula::Path;
use ltlfo::Message;

fn main() {
    let m = Message::new(Node::element(
        "message",
        vec![
            Node::leaf("action", "placeBuyOrder"),
            Node::element(
                "stock",
                vec![Node::leaf("name", "stock-1"), Node::leaf("amount", "123")],
            ),
            Node::element(
                "stock",
                vec![Node::leaf("name", "stock-2"), Node::leaf("amount", "456")],
            ),
        ],
    ))
    .expect("root is an element");

    println!("{}", m.to_json());
    for p in [
        "/message/stock/name",
        "/message/stock/amount",
        "/message/action",
        "/message/stock",
        "/message/price",
    ] {
        let path: Path = p.parse().unwrap();
        println!("{p:<24}{:?}", m.dom(&path));
    }

    // the same message read from JSON
    let parsed = Message::parse(
        r#"{"message":{"action":"placeBuyOrder","stock":[{"name":"stock-1","amount":"123"},{"name":"stock-2","amount":"456"}]}}"#,
    )
    .unwrap();
    assert_eq!(parsed, m);
}
