//! Recursive-descent parser for the textual formula syntax.
//!
//! ```text
//! phi  := "G" phi | "F" phi | "X" phi | "!" phi
//!       | "exists" IDENT "in" PATH ":" phi | "forall" IDENT "in" PATH ":" phi
//!       | phi "U" phi | phi "R" phi | phi "&" phi | phi "|" phi | phi "->" phi
//!       | term "=" term | term "!=" term | "(" phi ")" | "true" | "false"
//! term := IDENT | STRING
//! ```
//!
//! Binding strength, tightest first: prefix operators and quantifiers,
//! `U`/`R` (right-assoc), `&`, `|`, `->` (right-assoc).

use super::{check_well_formed, Formula, FormulaError, Path, Term};

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Str(String),
    LParen,
    RParen,
    Bang,
    NotEq,
    Eq,
    And,
    Or,
    Arrow,
    Colon,
    Eof,
}

const KEYWORDS: &[&str] = &[
    "G", "F", "X", "U", "R", "exists", "forall", "in", "true", "false",
];

struct Lexer<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn syntax(&self, position: usize, expected: &str) -> FormulaError {
        FormulaError::Syntax {
            position,
            expected: expected.to_string(),
        }
    }

    fn tokenize(mut self) -> Result<Vec<(usize, Tok)>, FormulaError> {
        let mut out = Vec::new();
        loop {
            let rest = &self.src[self.pos..];
            let trimmed = rest.trim_start();
            self.pos += rest.len() - trimmed.len();
            let start = self.pos;
            let Some(c) = trimmed.chars().next() else {
                out.push((start, Tok::Eof));
                return Ok(out);
            };
            let tok = match c {
                '(' => {
                    self.pos += 1;
                    Tok::LParen
                }
                ')' => {
                    self.pos += 1;
                    Tok::RParen
                }
                '&' => {
                    self.pos += 1;
                    Tok::And
                }
                '|' => {
                    self.pos += 1;
                    Tok::Or
                }
                ':' => {
                    self.pos += 1;
                    Tok::Colon
                }
                '=' => {
                    self.pos += 1;
                    Tok::Eq
                }
                '!' if trimmed.starts_with("!=") => {
                    self.pos += 2;
                    Tok::NotEq
                }
                '!' => {
                    self.pos += 1;
                    Tok::Bang
                }
                '-' if trimmed.starts_with("->") => {
                    self.pos += 2;
                    Tok::Arrow
                }
                '"' => Tok::Str(self.string()?),
                c if c.is_ascii_alphabetic() || c == '_' => {
                    let len = trimmed
                        .find(|c: char| !(c.is_ascii_alphanumeric() || c == '_'))
                        .unwrap_or(trimmed.len());
                    self.pos += len;
                    Tok::Ident(trimmed[..len].to_string())
                }
                _ => return Err(self.syntax(start, "a formula token")),
            };
            out.push((start, tok));
        }
    }

    fn string(&mut self) -> Result<String, FormulaError> {
        let start = self.pos;
        let mut chars = self.src[self.pos + 1..].char_indices();
        let mut value = String::new();
        while let Some((i, c)) = chars.next() {
            match c {
                '"' => {
                    self.pos += i + 2;
                    return Ok(value);
                }
                '\\' => match chars.next() {
                    Some((_, e @ ('"' | '\\'))) => value.push(e),
                    _ => return Err(self.syntax(start + 1 + i, "escape \\\" or \\\\")),
                },
                c => value.push(c),
            }
        }
        Err(self.syntax(self.src.len(), "closing '\"'"))
    }
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    idx: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.idx].1
    }

    fn pos(&self) -> usize {
        self.toks[self.idx].0
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.idx].1.clone();
        if t != Tok::Eof {
            self.idx += 1;
        }
        t
    }

    fn err(&self, expected: &str) -> FormulaError {
        FormulaError::Syntax {
            position: self.pos(),
            expected: expected.to_string(),
        }
    }

    fn is_kw(&self, kw: &str) -> bool {
        matches!(self.peek(), Tok::Ident(s) if s == kw)
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<(), FormulaError> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            Err(self.err(what))
        }
    }

    fn implication(&mut self) -> Result<Formula, FormulaError> {
        let lhs = self.disjunction()?;
        if *self.peek() == Tok::Arrow {
            self.bump();
            let rhs = self.implication()?;
            return Ok(Formula::implies(lhs, rhs));
        }
        Ok(lhs)
    }

    fn disjunction(&mut self) -> Result<Formula, FormulaError> {
        let mut lhs = self.conjunction()?;
        while *self.peek() == Tok::Or {
            self.bump();
            lhs = Formula::or(lhs, self.conjunction()?);
        }
        Ok(lhs)
    }

    fn conjunction(&mut self) -> Result<Formula, FormulaError> {
        let mut lhs = self.temporal()?;
        while *self.peek() == Tok::And {
            self.bump();
            lhs = Formula::and(lhs, self.temporal()?);
        }
        Ok(lhs)
    }

    fn temporal(&mut self) -> Result<Formula, FormulaError> {
        let lhs = self.unary()?;
        if self.is_kw("U") {
            self.bump();
            return Ok(Formula::until(lhs, self.temporal()?));
        }
        if self.is_kw("R") {
            self.bump();
            return Ok(Formula::release(lhs, self.temporal()?));
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Formula, FormulaError> {
        match self.peek().clone() {
            Tok::Bang => {
                self.bump();
                Ok(Formula::not(self.unary()?))
            }
            Tok::LParen => {
                self.bump();
                let f = self.implication()?;
                self.expect(Tok::RParen, "')'")?;
                Ok(f)
            }
            Tok::Ident(kw) => match kw.as_str() {
                "G" => {
                    self.bump();
                    Ok(Formula::globally(self.unary()?))
                }
                "F" => {
                    self.bump();
                    Ok(Formula::finally(self.unary()?))
                }
                "X" => {
                    self.bump();
                    Ok(Formula::next(self.unary()?))
                }
                "true" => {
                    self.bump();
                    Ok(Formula::True)
                }
                "false" => {
                    self.bump();
                    Ok(Formula::False)
                }
                "exists" | "forall" => self.quantifier(kw == "exists"),
                _ => self.atom(),
            },
            Tok::Str(_) => self.atom(),
            _ => Err(self.err("a formula")),
        }
    }

    fn quantifier(&mut self, existential: bool) -> Result<Formula, FormulaError> {
        self.bump();
        let var = match self.bump() {
            Tok::Ident(name) if !KEYWORDS.contains(&name.as_str()) => name,
            _ => {
                self.idx -= 1;
                return Err(self.err("a variable name"));
            }
        };
        if !self.is_kw("in") {
            return Err(self.err("'in'"));
        }
        self.bump();
        let path_pos = self.pos();
        let path: Path = match self.bump() {
            Tok::Str(s) => s.parse().map_err(|_| FormulaError::Syntax {
                position: path_pos,
                expected: "a path of the form \"/seg(/seg)*\"".to_string(),
            })?,
            _ => {
                self.idx -= 1;
                return Err(self.err("a quoted path"));
            }
        };
        self.expect(Tok::Colon, "':'")?;
        let body = self.unary()?;
        Ok(if existential {
            Formula::exists(var, path, body)
        } else {
            Formula::forall(var, path, body)
        })
    }

    fn term(&mut self) -> Result<Term, FormulaError> {
        match self.peek().clone() {
            Tok::Ident(name) if !KEYWORDS.contains(&name.as_str()) => {
                self.bump();
                Ok(Term::Var(name))
            }
            Tok::Str(value) => {
                self.bump();
                Ok(Term::Const(value))
            }
            _ => Err(self.err("a variable or a quoted constant")),
        }
    }

    fn atom(&mut self) -> Result<Formula, FormulaError> {
        let lhs = self.term()?;
        match self.peek() {
            Tok::Eq => {
                self.bump();
                Ok(Formula::Eq(lhs, self.term()?))
            }
            Tok::NotEq => {
                self.bump();
                Ok(Formula::Neq(lhs, self.term()?))
            }
            _ => Err(self.err("'=' or '!='")),
        }
    }
}

/// Parses a formula and checks that it is well formed: every variable is
/// bound by an enclosing quantifier and no quantifier rebinds a name that is
/// already in scope.
pub fn parse(text: &str) -> Result<Formula, FormulaError> {
    let toks = Lexer { src: text, pos: 0 }.tokenize()?;
    let mut parser = Parser { toks, idx: 0 };
    let f = parser.implication()?;
    if *parser.peek() != Tok::Eof {
        return Err(parser.err("end of input"));
    }
    check_well_formed(&f)?;
    Ok(f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(v: &str) -> Term {
        Term::constant(v)
    }

    #[test]
    fn quantified_equality() {
        let f = parse(r#"exists x in "/m/a" : x = "v""#).unwrap();
        assert_eq!(
            f,
            Formula::exists(
                "x",
                "/m/a".parse().unwrap(),
                Formula::eq(Term::var("x"), c("v"))
            )
        );
    }

    #[test]
    fn unbound_variable_rejected() {
        assert_eq!(
            parse(r#"x = "v""#),
            Err(FormulaError::UnboundVariable("x".into()))
        );
    }

    #[test]
    fn shadowing_rejected() {
        let err = parse(r#"exists x in "/m" : X forall x in "/m" : x = "v""#).unwrap_err();
        assert_eq!(err, FormulaError::ShadowedVariable("x".into()));
    }

    #[test]
    fn literals() {
        assert_eq!(parse("true").unwrap(), Formula::True);
        assert_eq!(parse("false").unwrap(), Formula::False);
    }

    #[test]
    fn precedence_and_associativity() {
        let a = || Formula::eq(c("a"), c("a"));
        let b = || Formula::eq(c("b"), c("b"));
        let d = || Formula::eq(c("d"), c("d"));
        // & binds tighter than |, which binds tighter than ->
        assert_eq!(
            parse(r#""a"="a" | "b"="b" & "d"="d""#).unwrap(),
            Formula::or(a(), Formula::and(b(), d()))
        );
        assert_eq!(
            parse(r#""a"="a" -> "b"="b" -> "d"="d""#).unwrap(),
            Formula::implies(a(), Formula::implies(b(), d()))
        );
        // U is right-associative and binds tighter than &
        assert_eq!(
            parse(r#""a"="a" U "b"="b" U "d"="d" & "a"="a""#).unwrap(),
            Formula::and(Formula::until(a(), Formula::until(b(), d())), a())
        );
        // prefix operators bind tighter than U
        assert_eq!(
            parse(r#"G "a"="a" R X "b"="b""#).unwrap(),
            Formula::release(Formula::globally(a()), Formula::next(b()))
        );
        assert_eq!(parse(r#"!"a" = "a""#).unwrap(), Formula::not(a()));
    }

    #[test]
    fn quantifier_body_is_unary() {
        let f = parse(r#"exists x in "/m" : x = "a" & "b" = "b""#).unwrap();
        assert!(matches!(f, Formula::And(..)));
        let g = parse(r#"exists x in "/m" : (x = "a" & "b" = "b")"#).unwrap();
        assert!(matches!(g, Formula::Exists { .. }));
    }

    #[test]
    fn string_escapes() {
        let f = parse(r#""a\"b" = "c\\d""#).unwrap();
        assert_eq!(f, Formula::eq(c("a\"b"), c("c\\d")));
        assert_eq!(parse(&f.to_string()).unwrap(), f);
    }

    #[test]
    fn syntax_errors_carry_positions() {
        match parse(r#"("a" = "b""#) {
            Err(FormulaError::Syntax { position, expected }) => {
                assert_eq!(position, 10);
                assert_eq!(expected, "')'");
            }
            other => panic!("{other:?}"),
        }
        assert!(matches!(
            parse(r#""a" = "#),
            Err(FormulaError::Syntax { .. })
        ));
        assert!(matches!(
            parse(r#""a" = "b" "c""#),
            Err(FormulaError::Syntax { position: 10, .. })
        ));
        assert!(matches!(
            parse(r#"exists x in "m/a" : x = "v""#),
            Err(FormulaError::Syntax { position: 12, .. })
        ));
        assert!(matches!(
            parse("G = \"a\""),
            Err(FormulaError::Syntax { .. })
        ));
        assert!(matches!(parse("\"abc"), Err(FormulaError::Syntax { .. })));
        assert!(matches!(
            parse("#"),
            Err(FormulaError::Syntax { position: 0, .. })
        ));
    }

    fn arb_formula() -> impl Strategy<Value = Formula> {
        let atom = (0..3usize, 0..3usize, any::<bool>()).prop_map(|(a, b, eq)| {
            let (a, b) = (c(&format!("v{a}")), c(&format!("v{b}")));
            if eq {
                Formula::Eq(a, b)
            } else {
                Formula::Neq(a, b)
            }
        });
        let leaf = prop_oneof![atom, Just(Formula::True), Just(Formula::False)];
        leaf.prop_recursive(4, 24, 2, |inner| {
            prop_oneof![
                inner.clone().prop_map(Formula::not),
                inner.clone().prop_map(Formula::next),
                inner.clone().prop_map(Formula::finally),
                inner.clone().prop_map(Formula::globally),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::and(a, b)),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::or(a, b)),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::implies(a, b)),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::until(a, b)),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::release(a, b)),
                inner.clone().prop_map(|b| Formula::exists(
                    "q",
                    "/m/a".parse().unwrap(),
                    Formula::or(b, Formula::eq(Term::var("q"), c("v0")))
                )),
            ]
        })
    }

    proptest! {
        #[test]
        fn display_round_trips(f in arb_formula()) {
            prop_assume!(check_well_formed(&f).is_ok());
            prop_assert_eq!(parse(&f.to_string()).unwrap(), f);
        }
    }
}
