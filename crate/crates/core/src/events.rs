//! Tree-structured messages, the path domain function, and trace containers.
//!
//! Messages are ingested from JSON: a message is a single-key object whose
//! key names the root element. String values become text leaves, objects
//! become child elements (key order preserved), and arrays expand into
//! repeated children carrying the same name.

use std::collections::BTreeSet;
use std::io::BufRead;

use serde_json::{Map, Value};
use thiserror::Error;

use crate::formula::Path;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EventError {
    #[error("line {line}: {reason}")]
    MalformedInput { line: usize, reason: String },
    #[error("lasso loop must contain at least one message")]
    EmptyLoop,
}

fn malformed(line: usize, reason: impl Into<String>) -> EventError {
    EventError::MalformedInput {
        line,
        reason: reason.into(),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Node {
    Element { name: String, children: Vec<Node> },
    Text(String),
}

impl Node {
    pub fn element(name: impl Into<String>, children: Vec<Node>) -> Self {
        Node::Element {
            name: name.into(),
            children,
        }
    }

    /// `<name>text</name>`
    pub fn leaf(name: impl Into<String>, text: impl Into<String>) -> Self {
        Node::element(name, vec![Node::Text(text.into())])
    }

    fn text_value(&self) -> Option<&str> {
        match self {
            Node::Element { children, .. } => match children.as_slice() {
                [Node::Text(t)] => Some(t),
                _ => None,
            },
            Node::Text(_) => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Message {
    root: Node,
}

impl Message {
    /// Wraps an element node. Text nodes cannot be message roots.
    pub fn new(root: Node) -> Option<Self> {
        match root {
            Node::Element { ref name, .. } if !name.is_empty() => Some(Message { root }),
            _ => None,
        }
    }

    pub fn root(&self) -> &Node {
        &self.root
    }

    /// Values found at the end of `path`: text of every element reached by
    /// following the path's names from the root, among those whose only
    /// child is a text leaf.
    pub fn dom(&self, path: &Path) -> BTreeSet<String> {
        let segments = path.segments();
        let mut frontier: Vec<&Node> = match &self.root {
            Node::Element { name, .. } if *name == segments[0] => vec![&self.root],
            _ => return BTreeSet::new(),
        };
        for seg in &segments[1..] {
            frontier = frontier
                .into_iter()
                .flat_map(|n| match n {
                    Node::Element { children, .. } => children.as_slice(),
                    Node::Text(_) => &[],
                })
                .filter(|c| matches!(c, Node::Element { name, .. } if name == seg))
                .collect();
        }
        frontier
            .into_iter()
            .filter_map(Node::text_value)
            .map(str::to_string)
            .collect()
    }

    pub fn to_json(&self) -> Value {
        let Node::Element { name, .. } = &self.root else {
            unreachable!("message roots are elements")
        };
        let mut map = Map::new();
        map.insert(name.clone(), node_value(&self.root));
        Value::Object(map)
    }

    pub fn from_json(value: &Value) -> Result<Self, String> {
        let Value::Object(map) = value else {
            return Err("message must be a JSON object".into());
        };
        if map.len() != 1 {
            return Err(format!(
                "message must have exactly one root key, found {}",
                map.len()
            ));
        }
        let (name, inner) = map.iter().next().expect("one entry");
        if name.is_empty() {
            return Err("element names must be non-empty".into());
        }
        if inner.is_array() {
            return Err("message root cannot be an array".into());
        }
        let mut nodes = Vec::new();
        expand(name, inner, &mut nodes)?;
        Ok(Message {
            root: nodes.pop().expect("one root"),
        })
    }

    pub fn parse(text: &str) -> Result<Self, EventError> {
        let value: Value =
            serde_json::from_str(text).map_err(|e| malformed(e.line(), e.to_string()))?;
        Message::from_json(&value).map_err(|r| malformed(1, r))
    }
}

// Converts `name: value` into one element per repetition.
fn expand(name: &str, value: &Value, out: &mut Vec<Node>) -> Result<(), String> {
    match value {
        Value::String(s) => out.push(Node::leaf(name, s.clone())),
        Value::Object(map) => {
            let mut children = Vec::new();
            for (k, v) in map {
                if k.is_empty() {
                    return Err("element names must be non-empty".into());
                }
                expand(k, v, &mut children)?;
            }
            out.push(Node::element(name, children));
        }
        Value::Array(items) => {
            for item in items {
                if item.is_array() {
                    return Err(format!("nested array under `{name}`"));
                }
                expand(name, item, out)?;
            }
        }
        other => return Err(format!("unsupported value for `{name}`: {other}")),
    }
    Ok(())
}

fn node_value(node: &Node) -> Value {
    match node {
        Node::Text(t) => Value::String(t.clone()),
        Node::Element { children, .. } => {
            if let Some(t) = node.text_value() {
                return Value::String(t.to_string());
            }
            let mut map = Map::new();
            for child in children {
                let Node::Element { name, .. } = child else {
                    continue;
                };
                let v = node_value(child);
                match map.get_mut(name) {
                    Some(Value::Array(items)) => items.push(v),
                    Some(existing) => {
                        let first = existing.take();
                        *existing = Value::Array(vec![first, v]);
                    }
                    None => {
                        map.insert(name.clone(), v);
                    }
                }
            }
            Value::Object(map)
        }
    }
}

/// A finite sequence of messages.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Trace {
    pub messages: Vec<Message>,
}

impl Trace {
    pub fn new(messages: Vec<Message>) -> Self {
        Trace { messages }
    }

    pub fn len(&self) -> usize {
        self.messages.len()
    }

    pub fn is_empty(&self) -> bool {
        self.messages.is_empty()
    }

    /// Reads a JSON Lines trace. Blank lines are skipped.
    pub fn load<R: BufRead>(reader: R) -> Result<Self, EventError> {
        TraceReader::new(reader)
            .collect::<Result<Vec<_>, _>>()
            .map(Trace::new)
    }

    pub fn to_jsonl(&self) -> String {
        self.messages
            .iter()
            .map(|m| format!("{}\n", m.to_json()))
            .collect()
    }
}

/// Streams messages from JSON Lines input, one at a time.
pub struct TraceReader<R> {
    lines: std::io::Lines<R>,
    line: usize,
}

impl<R: BufRead> TraceReader<R> {
    pub fn new(reader: R) -> Self {
        TraceReader {
            lines: reader.lines(),
            line: 0,
        }
    }
}

impl<R: BufRead> Iterator for TraceReader<R> {
    type Item = Result<Message, EventError>;

    fn next(&mut self) -> Option<Self::Item> {
        loop {
            self.line += 1;
            let line = match self.lines.next()? {
                Ok(l) => l,
                Err(e) => return Some(Err(malformed(self.line, e.to_string()))),
            };
            if line.trim().is_empty() {
                continue;
            }
            let parsed = serde_json::from_str::<Value>(&line)
                .map_err(|e| e.to_string())
                .and_then(|v| Message::from_json(&v));
            return Some(parsed.map_err(|r| malformed(self.line, r)));
        }
    }
}

/// The infinite trace `prefix · loop^ω`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LassoTrace {
    prefix: Vec<Message>,
    cycle: Vec<Message>,
}

impl LassoTrace {
    pub fn new(prefix: Vec<Message>, cycle: Vec<Message>) -> Result<Self, EventError> {
        if cycle.is_empty() {
            return Err(EventError::EmptyLoop);
        }
        Ok(LassoTrace { prefix, cycle })
    }

    pub fn prefix(&self) -> &[Message] {
        &self.prefix
    }

    pub fn cycle(&self) -> &[Message] {
        &self.cycle
    }

    /// Number of distinct positions, `prefix + loop`.
    pub fn period_end(&self) -> usize {
        self.prefix.len() + self.cycle.len()
    }

    /// Message at absolute position `i` of the infinite trace.
    pub fn message(&self, i: usize) -> &Message {
        let k = self.prefix.len();
        if i < k {
            &self.prefix[i]
        } else {
            &self.cycle[(i - k) % self.cycle.len()]
        }
    }

    /// Successor of a canonical position (`< period_end()`), folding the
    /// end of the loop back to its start.
    pub fn successor(&self, i: usize) -> usize {
        if i + 1 < self.period_end() {
            i + 1
        } else {
            self.prefix.len()
        }
    }

    pub fn to_json(&self) -> Value {
        let msgs = |ms: &[Message]| Value::Array(ms.iter().map(Message::to_json).collect());
        let mut map = Map::new();
        map.insert("prefix".into(), msgs(&self.prefix));
        map.insert("loop".into(), msgs(&self.cycle));
        Value::Object(map)
    }

    pub fn parse(text: &str) -> Result<Self, EventError> {
        let value: Value =
            serde_json::from_str(text).map_err(|e| malformed(e.line(), e.to_string()))?;
        let Value::Object(map) = &value else {
            return Err(malformed(1, "lasso must be a JSON object"));
        };
        if let Some(k) = map.keys().find(|k| *k != "prefix" && *k != "loop") {
            return Err(malformed(1, format!("unexpected key `{k}`")));
        }
        let list = |key: &str| -> Result<Vec<Message>, EventError> {
            match map.get(key) {
                None if key == "prefix" => Ok(Vec::new()),
                None => Err(malformed(1, format!("missing `{key}`"))),
                Some(Value::Array(items)) => items
                    .iter()
                    .enumerate()
                    .map(|(i, v)| {
                        Message::from_json(v).map_err(|r| malformed(1, format!("{key}[{i}]: {r}")))
                    })
                    .collect(),
                Some(_) => Err(malformed(1, format!("`{key}` must be an array"))),
            }
        };
        LassoTrace::new(list("prefix")?, list("loop")?)
    }
}
