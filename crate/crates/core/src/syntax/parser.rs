//! Recursive-descent parser for the ASCII concrete syntax.
//!
//! ```text
//! sys   := comp ("||" comp)*
//! comp  := "!" comp | "zero" | "(" sys ")" | mproc? "<" sys? ">" ("@" IDENT)?
//! mproc := "0" | act ("." unary)? | "(" proc ")"
//! proc  := unary ("|" unary)*
//! unary := "!" unary | mproc
//! ```
//!
//! A leading `!` in system position is system replication; replicated
//! membrane processes must be parenthesised.

use std::collections::BTreeSet;

use thiserror::Error;

use super::{BraneAction, ChannelName, MembraneId, MembraneProcess, SystemTerm, ROOT_NAME};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParseErrorKind {
    Syntax(String),
    DuplicateLabel(String),
    ReservedLabel,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{line}:{column}: {}", describe(.kind))]
pub struct ParseError {
    pub kind: ParseErrorKind,
    pub line: usize,
    pub column: usize,
}

fn describe(kind: &ParseErrorKind) -> String {
    match kind {
        ParseErrorKind::Syntax(msg) => format!("syntax error: {msg}"),
        ParseErrorKind::DuplicateLabel(l) => format!("duplicate membrane label `{l}`"),
        ParseErrorKind::ReservedLabel => "the label `*` is reserved for the outermost membrane".into(),
    }
}

/// Parses a system. Unlabelled membranes get `m1, m2, ...` in source order,
/// skipping names already used explicitly.
pub fn parse(text: &str) -> Result<SystemTerm, ParseError> {
    let mut p = Parser::new(text);
    let mut term = p.system()?;
    p.skip_ws();
    if !p.at_end() {
        return Err(p.error("unexpected trailing input"));
    }

    let mut seen = BTreeSet::new();
    for (label, pos) in &p.labels {
        if let Some(label) = label {
            if !seen.insert(label.clone()) {
                let (line, column) = p.line_col(*pos);
                return Err(ParseError {
                    kind: ParseErrorKind::DuplicateLabel(label.clone()),
                    line,
                    column,
                });
            }
        }
    }
    let mut next = 1usize;
    let mut fresh = p.labels.iter().map(|(label, _)| match label {
        Some(l) => MembraneId::new(l),
        None => loop {
            let candidate = format!("m{next}");
            next += 1;
            if !seen.contains(&candidate) {
                break MembraneId::new(candidate);
            }
        },
    });
    assign_labels(&mut term, &mut fresh);
    Ok(term)
}

/// Parses a bare membrane process, e.g. the `ρ` of a query action.
pub fn parse_process(text: &str) -> Result<MembraneProcess, ParseError> {
    let mut p = Parser::new(text);
    let proc = p.process()?;
    p.skip_ws();
    if !p.at_end() {
        return Err(p.error("unexpected trailing input"));
    }
    Ok(proc)
}

/// Parses a single action such as `cobud(m, drip(0))`, normalized.
pub fn parse_action(text: &str) -> Result<BraneAction, ParseError> {
    let mut p = Parser::new(text);
    let a = p.action()?;
    p.skip_ws();
    if !p.at_end() {
        return Err(p.error("unexpected trailing input after the action"));
    }
    Ok(a.normalized())
}

fn assign_labels(t: &mut SystemTerm, fresh: &mut impl Iterator<Item = MembraneId>) {
    match t {
        SystemTerm::Diamond => {}
        SystemTerm::Compose(a, b) => {
            assign_labels(a, fresh);
            assign_labels(b, fresh);
        }
        SystemTerm::Bang(a) => assign_labels(a, fresh),
        SystemTerm::Membrane { content, label, .. } => {
            *label = fresh.next().expect("one label per membrane");
            assign_labels(content, fresh);
        }
    }
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
    /// Explicit label (if any) and source offset, in membrane preorder.
    labels: Vec<(Option<String>, usize)>,
}

const ACTION_KEYWORDS: [&str; 10] = [
    "mate", "comate", "bud", "cobud", "drip", "phago", "cophago", "exo", "coexo", "pino",
];

impl<'a> Parser<'a> {
    fn new(src: &'a str) -> Self {
        Parser {
            src,
            pos: 0,
            labels: Vec::new(),
        }
    }

    fn rest(&self) -> &'a str {
        &self.src[self.pos..]
    }

    fn at_end(&self) -> bool {
        self.pos >= self.src.len()
    }

    fn skip_ws(&mut self) {
        let trimmed = self.rest().trim_start();
        self.pos = self.src.len() - trimmed.len();
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.rest().chars().next()
    }

    fn line_col(&self, pos: usize) -> (usize, usize) {
        let before = &self.src[..pos.min(self.src.len())];
        let line = before.matches('\n').count() + 1;
        let column = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
        (line, column)
    }

    fn error(&self, msg: impl Into<String>) -> ParseError {
        let (line, column) = self.line_col(self.pos);
        ParseError {
            kind: ParseErrorKind::Syntax(msg.into()),
            line,
            column,
        }
    }

    fn eat(&mut self, tok: &str) -> bool {
        self.skip_ws();
        if self.rest().starts_with(tok) {
            self.pos += tok.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, tok: &str) -> Result<(), ParseError> {
        if self.eat(tok) {
            Ok(())
        } else {
            Err(self.error(format!("expected `{tok}`")))
        }
    }

    fn peek_ident(&mut self) -> Option<&'a str> {
        self.skip_ws();
        let rest = self.rest();
        let mut chars = rest.char_indices();
        match chars.next() {
            Some((_, c)) if c.is_ascii_alphabetic() => {}
            _ => return None,
        }
        let end = chars
            .find(|(_, c)| !(c.is_ascii_alphanumeric() || *c == '_'))
            .map_or(rest.len(), |(i, _)| i);
        Some(&rest[..end])
    }

    fn ident(&mut self) -> Result<&'a str, ParseError> {
        match self.peek_ident() {
            Some(id) => {
                self.pos += id.len();
                Ok(id)
            }
            None => Err(self.error("expected an identifier")),
        }
    }

    fn system(&mut self) -> Result<SystemTerm, ParseError> {
        let mut acc = self.component()?;
        while self.eat("||") {
            let rhs = self.component()?;
            acc = SystemTerm::compose(acc, rhs);
        }
        Ok(acc)
    }

    fn component(&mut self) -> Result<SystemTerm, ParseError> {
        match self.peek() {
            Some('!') => {
                self.pos += 1;
                Ok(SystemTerm::bang(self.component()?))
            }
            Some('(') => {
                // Either a parenthesised membrane process or a grouped system.
                let save = (self.pos, self.labels.len());
                match self.membrane() {
                    Ok(m) => Ok(m),
                    Err(e) if !matches!(e.kind, ParseErrorKind::Syntax(_)) => Err(e),
                    Err(membrane_err) => {
                        let membrane_pos = self.pos;
                        self.pos = save.0;
                        self.labels.truncate(save.1);
                        self.expect("(")?;
                        match self.system().and_then(|s| self.expect(")").map(|_| s)) {
                            Ok(s) => Ok(s),
                            // Report whichever reading got further.
                            Err(e) if self.pos >= membrane_pos => Err(e),
                            Err(_) => Err(membrane_err),
                        }
                    }
                }
            }
            _ => {
                if self.peek_ident() == Some("zero") {
                    self.pos += 4;
                    return Ok(SystemTerm::Diamond);
                }
                self.membrane()
            }
        }
    }

    fn membrane(&mut self) -> Result<SystemTerm, ParseError> {
        let start = {
            self.skip_ws();
            self.pos
        };
        // An omitted process before `<` stands for `0`.
        let process = if self.peek() == Some('<') {
            MembraneProcess::Zero
        } else {
            self.membrane_process()?
        };
        self.expect("<")?;
        let slot = self.labels.len();
        self.labels.push((None, start));
        let content = if self.peek() == Some('>') {
            SystemTerm::Diamond
        } else {
            self.system()?
        };
        self.expect(">")?;
        if self.eat("@") {
            if self.peek() == Some('*') {
                let (line, column) = self.line_col(self.pos);
                return Err(ParseError {
                    kind: ParseErrorKind::ReservedLabel,
                    line,
                    column,
                });
            }
            let at = self.pos;
            let name = self.ident()?;
            debug_assert_ne!(name, ROOT_NAME);
            self.labels[slot] = (Some(name.to_string()), at);
        }
        Ok(SystemTerm::membrane(process, content, MembraneId::new("")))
    }

    fn process(&mut self) -> Result<MembraneProcess, ParseError> {
        let mut acc = self.unary()?;
        loop {
            self.skip_ws();
            if self.rest().starts_with('|') && !self.rest().starts_with("||") {
                self.pos += 1;
                let rhs = self.unary()?;
                acc = MembraneProcess::par(acc, rhs);
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<MembraneProcess, ParseError> {
        if self.peek() == Some('!') {
            self.pos += 1;
            return Ok(MembraneProcess::bang(self.unary()?));
        }
        self.membrane_process()
    }

    fn membrane_process(&mut self) -> Result<MembraneProcess, ParseError> {
        match self.peek() {
            Some('0') => {
                self.pos += 1;
                Ok(MembraneProcess::Zero)
            }
            Some('(') => {
                self.pos += 1;
                let p = self.process()?;
                self.expect(")")?;
                Ok(p)
            }
            _ => {
                let a = self.action()?;
                let k = if self.eat(".") {
                    self.unary()?
                } else {
                    MembraneProcess::Zero
                };
                Ok(MembraneProcess::seq(a, k))
            }
        }
    }

    fn channel(&mut self) -> Result<ChannelName, ParseError> {
        Ok(ChannelName::new(self.ident()?))
    }

    fn action(&mut self) -> Result<BraneAction, ParseError> {
        let kw = match self.peek_ident() {
            Some(k) if ACTION_KEYWORDS.contains(&k) => k,
            Some(other) => return Err(self.error(format!("unknown action `{other}`"))),
            None => return Err(self.error("expected an action, `0` or `(`")),
        };
        self.pos += kw.len();
        self.expect("(")?;
        let a = match kw {
            "mate" => BraneAction::Mate(self.channel()?),
            "comate" => BraneAction::CoMate(self.channel()?),
            "bud" => BraneAction::Bud(self.channel()?),
            "phago" => BraneAction::Phago(self.channel()?),
            "exo" => BraneAction::Exo(self.channel()?),
            "coexo" => BraneAction::CoExo(self.channel()?),
            "drip" => BraneAction::Drip(Box::new(self.process()?)),
            "pino" => BraneAction::Pino(Box::new(self.process()?)),
            "cobud" | "cophago" => {
                let n = self.channel()?;
                // `cobud(n)` abbreviates `cobud(n, 0)`.
                let rho = Box::new(if self.eat(",") {
                    self.process()?
                } else {
                    MembraneProcess::Zero
                });
                if kw == "cobud" {
                    BraneAction::CoBud(n, rho)
                } else {
                    BraneAction::CoPhago(n, rho)
                }
            }
            _ => unreachable!(),
        };
        self.expect(")")?;
        Ok(a)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn id(s: &str) -> MembraneId {
        MembraneId::new(s)
    }

    #[test]
    fn drip_drip_membrane() {
        let t = parse("drip(0).drip(0)<>@P").unwrap();
        let drip = BraneAction::Drip(Box::new(MembraneProcess::Zero));
        let expected = SystemTerm::membrane(
            MembraneProcess::seq(drip.clone(), MembraneProcess::prefix(drip)),
            SystemTerm::Diamond,
            id("P"),
        );
        assert_eq!(t, expected);
    }

    #[test]
    fn action_shorthand() {
        assert_eq!(
            parse_action("cobud(o)").unwrap(),
            parse_action("cobud(o, 0 | 0)").unwrap()
        );
        assert!(parse_action("mate(n).bud(m)").is_err());
    }

    #[test]
    fn reserved_root_label() {
        let err = parse("<>@*").unwrap_err();
        assert_eq!(err.kind, ParseErrorKind::ReservedLabel);
        assert_eq!((err.line, err.column), (1, 4));
        let err = parse("0<>@*").unwrap_err();
        assert_eq!(err.kind, ParseErrorKind::ReservedLabel);
    }

    #[test]
    fn duplicate_label() {
        let err = parse("0<>@a || 0<>@a").unwrap_err();
        assert_eq!(err.kind, ParseErrorKind::DuplicateLabel("a".into()));
        assert_eq!(err.column, 14);
    }

    #[test]
    fn auto_labels_in_source_order_skip_explicit_names() {
        let t = parse("0<0<>>@m1 || 0<> || 0<>").unwrap();
        let labels: Vec<_> = t.labels().iter().map(|l| l.to_string()).collect();
        assert_eq!(labels, ["m1", "m2", "m3", "m4"]);
    }

    #[test]
    fn syntax_error_position() {
        let err = parse("mate(n)<>@a ||\n  bogus(x)<>").unwrap_err();
        assert!(matches!(err.kind, ParseErrorKind::Syntax(_)));
        assert_eq!((err.line, err.column), (2, 3));
    }

    #[test]
    fn bang_in_system_position_replicates_the_membrane() {
        let t = parse("!mate(n)<>@a").unwrap();
        assert!(matches!(t, SystemTerm::Bang(_)));
        let t = parse("(!mate(n))<>@a").unwrap();
        assert!(matches!(
            t,
            SystemTerm::Membrane {
                process: MembraneProcess::Bang(_),
                ..
            }
        ));
    }

    #[test]
    fn grouped_systems_and_processes() {
        let t = parse("(mate(n) | cobud(m, 0))<bud(m)<>@P0 || (zero || 0<>@x)>@P").unwrap();
        assert_eq!(t.labels(), vec![id("P"), id("P0"), id("x")]);
    }

    #[test]
    fn process_precedence() {
        let p = parse_process("!mate(a).comate(b) | exo(c)").unwrap();
        match p {
            MembraneProcess::Par(l, _) => assert!(matches!(*l, MembraneProcess::Bang(_))),
            other => panic!("unexpected {other:?}"),
        }
    }
}
