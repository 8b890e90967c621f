//! Recursive-descent parser for the concrete formula syntax.
//!
//! ```text
//! formula := imp ( "<->" imp )*
//! imp     := or ( "->" imp )?
//! or      := and ( "|" and )*
//! and     := unary ( "&" unary )*
//! unary   := "~" unary | "[" program "]" unary | "<" program ">" unary
//!          | "(" formula ")" | "true" | "false" | IDENT
//! program := IDENT                          agent
//!          | "*" "{" IDENT ( "," IDENT )* "}"   common-knowledge closure
//!          | "{" IDENT ( "," IDENT )* "}"       group, expands to a conjunction
//!          | IDENT "@" IDENT ( "," IDENT )*     update with its point-set
//! ```

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use thiserror::Error;

use super::{Formula, Program};
use crate::ids::{is_ident_continue, is_ident_start, Agent};
use crate::models::{PointedUpdate, UpdateModel};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseError {
    #[error("syntax error at column {pos}: {message}")]
    Syntax { pos: usize, message: String },
    #[error("unknown update {name:?} at column {pos}")]
    UnknownUpdate { pos: usize, name: String },
    #[error("update {update:?} has no event {event:?} (column {pos})")]
    UnknownEvent { pos: usize, update: String, event: String },
    #[error("empty agent group at column {pos}")]
    EmptyGroup { pos: usize },
}

/// Looks up update models referenced by name in formula text.
pub trait UpdateResolver {
    fn resolve(&self, name: &str) -> Option<Arc<UpdateModel>>;
}

/// A resolver that knows no updates.
pub struct NoUpdates;

impl UpdateResolver for NoUpdates {
    fn resolve(&self, _: &str) -> Option<Arc<UpdateModel>> {
        None
    }
}

impl UpdateResolver for BTreeMap<String, Arc<UpdateModel>> {
    fn resolve(&self, name: &str) -> Option<Arc<UpdateModel>> {
        self.get(name).cloned()
    }
}

impl<F> UpdateResolver for F
where
    F: Fn(&str) -> Option<Arc<UpdateModel>>,
{
    fn resolve(&self, name: &str) -> Option<Arc<UpdateModel>> {
        self(name)
    }
}

pub fn parse(text: &str, updates: &dyn UpdateResolver) -> Result<Formula, ParseError> {
    let tokens = lex(text)?;
    let mut parser = Parser { tokens, pos: 0, end: text.len(), updates };
    let f = parser.formula()?;
    match parser.peek() {
        None => Ok(f),
        Some(t) => Err(ParseError::Syntax { pos: t.pos, message: format!("unexpected {}", t.tok.describe()) }),
    }
}

/// Parses a formula that references no update models.
pub fn parse_plain(text: &str) -> Result<Formula, ParseError> {
    parse(text, &NoUpdates)
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    True,
    False,
    Not,
    And,
    Or,
    Imp,
    Iff,
    LBrack,
    RBrack,
    Lt,
    Gt,
    LParen,
    RParen,
    LBrace,
    RBrace,
    Star,
    Comma,
    At,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("identifier {s:?}"),
            Tok::True => "'true'".into(),
            Tok::False => "'false'".into(),
            Tok::Not => "'~'".into(),
            Tok::And => "'&'".into(),
            Tok::Or => "'|'".into(),
            Tok::Imp => "'->'".into(),
            Tok::Iff => "'<->'".into(),
            Tok::LBrack => "'['".into(),
            Tok::RBrack => "']'".into(),
            Tok::Lt => "'<'".into(),
            Tok::Gt => "'>'".into(),
            Tok::LParen => "'('".into(),
            Tok::RParen => "')'".into(),
            Tok::LBrace => "'{'".into(),
            Tok::RBrace => "'}'".into(),
            Tok::Star => "'*'".into(),
            Tok::Comma => "','".into(),
            Tok::At => "'@'".into(),
        }
    }
}

#[derive(Clone, Debug)]
struct Token {
    tok: Tok,
    pos: usize,
}

fn lex(text: &str) -> Result<Vec<Token>, ParseError> {
    let mut out = Vec::new();
    let mut chars = text.char_indices().peekable();
    while let Some(&(pos, c)) = chars.peek() {
        if c.is_whitespace() {
            chars.next();
            continue;
        }
        if is_ident_start(c) {
            let mut end = pos;
            while let Some(&(i, c)) = chars.peek() {
                if i == pos || is_ident_continue(c) {
                    end = i + c.len_utf8();
                    chars.next();
                } else {
                    break;
                }
            }
            let word = &text[pos..end];
            let tok = match word {
                "true" => Tok::True,
                "false" => Tok::False,
                _ => Tok::Ident(word.to_string()),
            };
            out.push(Token { tok, pos });
            continue;
        }
        let rest = &text[pos..];
        let (tok, len) = if rest.starts_with("<->") {
            (Tok::Iff, 3)
        } else if rest.starts_with("->") {
            (Tok::Imp, 2)
        } else {
            let tok = match c {
                '~' => Tok::Not,
                '&' => Tok::And,
                '|' => Tok::Or,
                '[' => Tok::LBrack,
                ']' => Tok::RBrack,
                '<' => Tok::Lt,
                '>' => Tok::Gt,
                '(' => Tok::LParen,
                ')' => Tok::RParen,
                '{' => Tok::LBrace,
                '}' => Tok::RBrace,
                '*' => Tok::Star,
                ',' => Tok::Comma,
                '@' => Tok::At,
                other => {
                    return Err(ParseError::Syntax { pos, message: format!("unexpected character {other:?}") })
                }
            };
            (tok, c.len_utf8())
        };
        out.push(Token { tok, pos });
        for _ in 0..len {
            chars.next();
        }
    }
    Ok(out)
}

struct Parser<'a> {
    tokens: Vec<Token>,
    pos: usize,
    end: usize,
    updates: &'a dyn UpdateResolver,
}

enum Modality {
    Single(Program),
    Group(BTreeSet<Agent>),
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn here(&self) -> usize {
        self.peek().map_or(self.end, |t| t.pos)
    }

    fn eat(&mut self, tok: &Tok) -> bool {
        if self.peek().is_some_and(|t| &t.tok == tok) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, tok: Tok) -> Result<(), ParseError> {
        if self.eat(&tok) {
            Ok(())
        } else {
            Err(self.unexpected(&format!("expected {}", tok.describe())))
        }
    }

    fn unexpected(&self, message: &str) -> ParseError {
        let found = self.peek().map_or("end of input".to_string(), |t| t.tok.describe());
        ParseError::Syntax { pos: self.here(), message: format!("{message}, found {found}") }
    }

    fn ident(&mut self) -> Result<(String, usize), ParseError> {
        match self.peek() {
            Some(Token { tok: Tok::Ident(s), pos }) => {
                let out = (s.clone(), *pos);
                self.pos += 1;
                Ok(out)
            }
            _ => Err(self.unexpected("expected identifier")),
        }
    }

    fn ident_list(&mut self) -> Result<Vec<(String, usize)>, ParseError> {
        let mut items = vec![self.ident()?];
        while self.eat(&Tok::Comma) {
            items.push(self.ident()?);
        }
        Ok(items)
    }

    fn formula(&mut self) -> Result<Formula, ParseError> {
        let mut left = self.implication()?;
        while self.eat(&Tok::Iff) {
            let right = self.implication()?;
            left = Formula::iff(left, right);
        }
        Ok(left)
    }

    fn implication(&mut self) -> Result<Formula, ParseError> {
        let left = self.disjunction()?;
        if self.eat(&Tok::Imp) {
            let right = self.implication()?;
            return Ok(Formula::implies(left, right));
        }
        Ok(left)
    }

    fn disjunction(&mut self) -> Result<Formula, ParseError> {
        let mut left = self.conjunction()?;
        while self.eat(&Tok::Or) {
            let right = self.conjunction()?;
            left = Formula::or(left, right);
        }
        Ok(left)
    }

    fn conjunction(&mut self) -> Result<Formula, ParseError> {
        let mut left = self.unary()?;
        while self.eat(&Tok::And) {
            let right = self.unary()?;
            left = Formula::and(left, right);
        }
        Ok(left)
    }

    fn unary(&mut self) -> Result<Formula, ParseError> {
        let Some(token) = self.peek().cloned() else {
            return Err(self.unexpected("expected formula"));
        };
        self.pos += 1;
        match token.tok {
            Tok::Not => Ok(Formula::not(self.unary()?)),
            Tok::True => Ok(Formula::Top),
            Tok::False => Ok(Formula::Bottom),
            Tok::Ident(name) => Ok(Formula::atom(&name)),
            Tok::LParen => {
                let f = self.formula()?;
                self.expect(Tok::RParen)?;
                Ok(f)
            }
            Tok::LBrack => {
                let modality = self.program()?;
                self.expect(Tok::RBrack)?;
                let body = self.unary()?;
                Ok(match modality {
                    Modality::Single(p) => Formula::boxed(p, body),
                    Modality::Group(group) => Formula::everyone(&group, &body),
                })
            }
            Tok::Lt => {
                let modality = self.program()?;
                self.expect(Tok::Gt)?;
                let body = self.unary()?;
                Ok(match modality {
                    Modality::Single(p) => Formula::diamond(p, body),
                    Modality::Group(group) => Formula::disj(
                        group.into_iter().map(|a| Formula::diamond(Program::Agent(a), body.clone())),
                    ),
                })
            }
            _ => {
                self.pos -= 1;
                Err(self.unexpected("expected formula"))
            }
        }
    }

    fn agent_set(&mut self) -> Result<BTreeSet<Agent>, ParseError> {
        let open = self.here();
        self.expect(Tok::LBrace)?;
        if self.peek().is_some_and(|t| t.tok == Tok::RBrace) {
            return Err(ParseError::EmptyGroup { pos: open });
        }
        let names = self.ident_list()?;
        self.expect(Tok::RBrace)?;
        Ok(names.into_iter().map(|(n, _)| Agent::new(n)).collect())
    }

    fn program(&mut self) -> Result<Modality, ParseError> {
        match self.peek().map(|t| &t.tok) {
            Some(Tok::Star) => {
                self.pos += 1;
                Ok(Modality::Single(Program::Star(self.agent_set()?)))
            }
            Some(Tok::LBrace) => Ok(Modality::Group(self.agent_set()?)),
            Some(Tok::Ident(_)) => {
                let (name, pos) = self.ident()?;
                if !self.eat(&Tok::At) {
                    return Ok(Modality::Single(Program::Agent(Agent::new(name))));
                }
                let model = self
                    .updates
                    .resolve(&name)
                    .ok_or(ParseError::UnknownUpdate { pos, name: name.clone() })?;
                let mut points = BTreeSet::new();
                for (event, epos) in self.ident_list()? {
                    let e = model.event_index(&event).ok_or(ParseError::UnknownEvent {
                        pos: epos,
                        update: name.clone(),
                        event: event.clone(),
                    })?;
                    points.insert(e);
                }
                Ok(Modality::Single(Program::Update(PointedUpdate { model, points })))
            }
            _ => Err(self.unexpected("expected agent, group or update")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ids::Agent;
    use crate::models::UpdateModel;

    fn lookup() -> BTreeMap<String, Arc<UpdateModel>> {
        let u1 = UpdateModel::builder("U1", ["a", "b"])
            .event("pe", Formula::atom("p"))
            .event("np", Formula::not(Formula::atom("p")))
            .reflexive("a")
            .universal("b")
            .build()
            .unwrap();
        BTreeMap::from([("U1".to_string(), Arc::new(u1))])
    }

    #[test]
    fn grammar_examples() {
        assert_eq!(
            parse_plain("p & ~[b]p").unwrap(),
            Formula::and(Formula::atom("p"), Formula::not(Formula::knows("b", Formula::atom("p"))))
        );
        assert_eq!(
            parse_plain("[*{a,b}] p").unwrap(),
            Formula::boxed(Program::star(["a", "b"]), Formula::atom("p"))
        );
        let ws = lookup();
        let f = parse("<U1 @ pe> [a]p", &ws).unwrap();
        let pu = PointedUpdate::at(ws["U1"].clone(), &["pe"]).unwrap();
        assert_eq!(f, Formula::diamond(Program::Update(pu), Formula::knows("a", Formula::atom("p"))));
    }

    #[test]
    fn precedence_and_associativity() {
        let f = parse_plain("p | q & r -> s -> t <-> u").unwrap();
        assert_eq!(f.to_string(), "(((p | (q & r)) -> (s -> t)) <-> u)");
        assert_eq!(parse_plain("~p & q").unwrap().to_string(), "(~p & q)");
        assert_eq!(parse_plain("[a]p & q").unwrap().to_string(), "([a]p & q)");
        assert_eq!(parse_plain("<a>->p").unwrap_err(), ParseError::Syntax {
            pos: 3,
            message: "expected formula, found '->'".into()
        });
        assert_eq!(parse_plain("<a>~p->q").unwrap().to_string(), "(<a>~p -> q)");
    }

    #[test]
    fn group_box_expands() {
        let f = parse_plain("[{a,b}]p").unwrap();
        assert_eq!(f, Formula::everyone(&[Agent::new("a"), Agent::new("b")], &Formula::atom("p")));
        let g = parse_plain("<{a,b}>p").unwrap();
        assert_eq!(g.to_string(), "(<a>p | <b>p)");
    }

    #[test]
    fn multi_point_update() {
        let ws = lookup();
        let f = parse("[U1 @ pe,np]p", &ws).unwrap();
        assert_eq!(f.to_string(), "[U1 @ pe,np]p");
    }

    #[test]
    fn error_cases() {
        let ws = lookup();
        assert_eq!(parse("[U9 @ pe]p", &ws), Err(ParseError::UnknownUpdate { pos: 1, name: "U9".into() }));
        assert_eq!(
            parse("[U1 @ zz]p", &ws),
            Err(ParseError::UnknownEvent { pos: 6, update: "U1".into(), event: "zz".into() })
        );
        assert_eq!(parse_plain("[*{}]p"), Err(ParseError::EmptyGroup { pos: 2 }));
        assert!(matches!(parse_plain("p &"), Err(ParseError::Syntax { pos: 3, .. })));
        assert!(matches!(parse_plain("p $ q"), Err(ParseError::Syntax { pos: 2, .. })));
        assert!(matches!(parse_plain("(p"), Err(ParseError::Syntax { .. })));
        assert!(matches!(parse_plain("p q"), Err(ParseError::Syntax { pos: 2, .. })));
    }

    #[test]
    fn atoms_include_update_contents() {
        let u = UpdateModel::builder("U1", ["a"])
            .event("pe", Formula::atom("p"))
            .assign("pe", "s", Formula::atom("q"))
            .reflexive("a")
            .build()
            .unwrap();
        let ws = BTreeMap::from([("U1".to_string(), Arc::new(u))]);
        let f = parse("[U1 @ pe]r", &ws).unwrap();
        let names: Vec<String> = f.atoms().iter().map(ToString::to_string).collect();
        assert_eq!(names, ["p", "q", "r", "s"]);
    }
}
