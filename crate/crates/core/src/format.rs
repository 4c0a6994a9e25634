//! Line-oriented fault-tree text format.
//!
//! ```text
//! # comment
//! event A exp rate=0.001
//! event B weibull shape=1.5 scale=2000
//! event C prob p=0.25
//! gate G or A B
//! gate N nand ~A C        # `~` marks complemented inputs, nand only
//! gate T and G N
//! toplevel T
//! ```

use std::collections::HashMap;
use std::fmt::{self, Write as _};

use thiserror::Error;

use crate::distributions::{Kind, LifetimeModel};
use crate::error::TreeError;
use crate::model::{is_identifier, EventId, FaultTree, GateKind};

#[derive(Debug, Clone, PartialEq, Error)]
#[error("line {line}, column {column}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub kind: ParseErrorKind,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ParseErrorKind {
    #[error("{0}")]
    Syntax(String),
    #[error("`~` is only allowed on nand operands")]
    NandTildeOutsideNand,
    #[error("nand needs at least one `~` operand and at least one plain operand")]
    NandMissingTilde,
    #[error("{0}")]
    InvalidParameter(String),
    #[error("missing `toplevel` declaration")]
    MissingToplevel,
    #[error("second `toplevel` declaration")]
    DuplicateToplevel,
    #[error(transparent)]
    Tree(#[from] TreeError),
}

/// One non-blank line of a document.
#[derive(Debug, Clone, PartialEq)]
pub enum Decl {
    Event { id: EventId, model: LifetimeModel },
    Gate { id: EventId, kind: GateKind },
    Toplevel(EventId),
    Comment(String),
}

/// Declarations in file order, each with its 1-based line number.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct FtDocument {
    pub decls: Vec<(usize, Decl)>,
}

struct Token<'a> {
    text: &'a str,
    column: usize,
}

fn tokenize(line: &str) -> Vec<Token<'_>> {
    let mut out = Vec::new();
    let mut start: Option<usize> = None;
    for (i, c) in line.char_indices() {
        if c.is_whitespace() {
            if let Some(s) = start.take() {
                out.push((s, i));
            }
        } else if start.is_none() {
            start = Some(i);
        }
    }
    if let Some(s) = start {
        out.push((s, line.len()));
    }
    out.into_iter()
        .map(|(s, e)| Token {
            text: &line[s..e],
            column: line[..s].chars().count() + 1,
        })
        .collect()
}

struct LineParser<'a> {
    line: usize,
    tokens: Vec<Token<'a>>,
    pos: usize,
    end_column: usize,
}

impl<'a> LineParser<'a> {
    fn err(&self, column: usize, kind: ParseErrorKind) -> ParseError {
        ParseError {
            line: self.line,
            column,
            kind,
        }
    }

    fn syntax(&self, column: usize, msg: impl Into<String>) -> ParseError {
        self.err(column, ParseErrorKind::Syntax(msg.into()))
    }

    fn next(&mut self, what: &str) -> Result<&Token<'a>, ParseError> {
        match self.tokens.get(self.pos) {
            Some(_) => {
                self.pos += 1;
                Ok(&self.tokens[self.pos - 1])
            }
            None => Err(self.syntax(self.end_column, format!("expected {what}"))),
        }
    }

    fn ident(&mut self, what: &str) -> Result<EventId, ParseError> {
        let tok = self.next(what)?;
        let (text, column) = (tok.text, tok.column);
        EventId::new(text)
            .map_err(|_| self.syntax(column, format!("expected {what}, found `{text}`")))
    }

    /// Parses `key=FLOAT`.
    fn param(&mut self, key: &str) -> Result<(f64, usize), ParseError> {
        let tok = self.next(&format!("`{key}=`"))?;
        let (text, column) = (tok.text, tok.column);
        let value = text
            .strip_prefix(key)
            .and_then(|rest| rest.strip_prefix('='))
            .ok_or_else(|| self.syntax(column, format!("expected `{key}=`, found `{text}`")))?;
        let parsed = value
            .parse::<f64>()
            .ok()
            .filter(|v| v.is_finite())
            .ok_or_else(|| self.syntax(column, format!("`{value}` is not a finite number")))?;
        Ok((parsed, column))
    }

    fn finish(&self) -> Result<(), ParseError> {
        match self.tokens.get(self.pos) {
            Some(tok) => Err(self.syntax(tok.column, format!("unexpected `{}`", tok.text))),
            None => Ok(()),
        }
    }

    fn event(&mut self) -> Result<Decl, ParseError> {
        let id = self.ident("event name")?;
        let dist = self.next("distribution (`exp`, `weibull` or `prob`)")?;
        let (dist_text, dist_column) = (dist.text, dist.column);
        let model = match dist_text {
            "exp" => {
                let (rate, col) = self.param("rate")?;
                LifetimeModel::exponential(rate).map_err(|e| (e, col))
            }
            "weibull" => {
                let (shape, col) = self.param("shape")?;
                let (scale, _) = self.param("scale")?;
                LifetimeModel::weibull(shape, scale).map_err(|e| (e, col))
            }
            "prob" => {
                let (p, col) = self.param("p")?;
                LifetimeModel::fixed(p).map_err(|e| (e, col))
            }
            other => {
                return Err(self.syntax(
                    dist_column,
                    format!("unknown distribution `{other}`, expected `exp`, `weibull` or `prob`"),
                ))
            }
        }
        .map_err(|(e, col)| self.err(col, ParseErrorKind::InvalidParameter(e.to_string())))?;
        self.finish()?;
        Ok(Decl::Event { id, model })
    }

    fn gate(&mut self) -> Result<Decl, ParseError> {
        let id = self.ident("gate name")?;
        let kind_tok = self.next("gate kind")?;
        let (keyword, kind_column) = (kind_tok.text, kind_tok.column);
        if !matches!(keyword, "and" | "or" | "nor" | "nand" | "xor" | "not") {
            return Err(self.syntax(
                kind_column,
                format!("unknown gate kind `{keyword}`, expected and, or, nor, nand, xor or not"),
            ));
        }

        let mut negated = Vec::new();
        let mut normal = Vec::new();
        while self.pos < self.tokens.len() {
            let tok = &self.tokens[self.pos];
            self.pos += 1;
            let (text, column) = (tok.text, tok.column);
            let (complemented, name, name_column) = if text == "~" {
                let next = self.next("operand after `~`")?;
                (true, next.text, next.column)
            } else if let Some(rest) = text.strip_prefix('~') {
                (true, rest, column + 1)
            } else {
                (false, text, column)
            };
            if complemented && keyword != "nand" {
                return Err(self.err(column, ParseErrorKind::NandTildeOutsideNand));
            }
            if !is_identifier(name) {
                return Err(self.syntax(name_column, format!("expected operand, found `{name}`")));
            }
            let operand = EventId::new(name).expect("checked identifier");
            if complemented {
                negated.push(operand);
            } else {
                normal.push(operand);
            }
        }
        if negated.is_empty() && normal.is_empty() {
            return Err(self.syntax(self.end_column, "expected at least one operand"));
        }

        let bad_arity = |reason: String| {
            self.err(
                kind_column,
                ParseErrorKind::Tree(TreeError::BadArity {
                    gate: id.to_string(),
                    reason,
                }),
            )
        };
        let kind = match keyword {
            "and" => GateKind::And(normal),
            "or" => GateKind::Or(normal),
            "nor" => GateKind::Nor(normal),
            "nand" => {
                if negated.is_empty() || normal.is_empty() {
                    return Err(self.err(kind_column, ParseErrorKind::NandMissingTilde));
                }
                GateKind::Nand { negated, normal }
            }
            "xor" => match <[EventId; 2]>::try_from(normal) {
                Ok([a, b]) => GateKind::Xor(a, b),
                Err(v) => {
                    return Err(bad_arity(format!(
                        "xor gate needs exactly 2 inputs, got {}",
                        v.len()
                    )))
                }
            },
            "not" => match <[EventId; 1]>::try_from(normal) {
                Ok([a]) => GateKind::Not(a),
                Err(v) => {
                    return Err(bad_arity(format!(
                        "not gate needs exactly 1 input, got {}",
                        v.len()
                    )))
                }
            },
            _ => unreachable!(),
        };
        kind.check_arity().map_err(bad_arity)?;
        Ok(Decl::Gate { id, kind })
    }
}

fn parse_line(line_no: usize, raw: &str) -> Result<Option<Decl>, ParseError> {
    let (code, comment) = match raw.find('#') {
        Some(i) => (&raw[..i], Some(raw[i + 1..].trim())),
        None => (raw, None),
    };
    let tokens = tokenize(code);
    if tokens.is_empty() {
        return Ok(comment.map(|c| Decl::Comment(c.to_string())));
    }
    let mut p = LineParser {
        line: line_no,
        tokens,
        pos: 1,
        end_column: code.trim_end().chars().count() + 1,
    };
    let head = &p.tokens[0];
    let decl = match head.text {
        "event" => p.event()?,
        "gate" => p.gate()?,
        "toplevel" => {
            let id = p.ident("top event name")?;
            p.finish()?;
            Decl::Toplevel(id)
        }
        other => {
            return Err(p.syntax(
                head.column,
                format!("expected `event`, `gate` or `toplevel`, found `{other}`"),
            ))
        }
    };
    Ok(Some(decl))
}

/// Parses the declarations of a document without building the tree.
pub fn parse_document(text: &str) -> Result<FtDocument, ParseError> {
    let mut decls = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        if let Some(decl) = parse_line(i + 1, raw)? {
            decls.push((i + 1, decl));
        }
    }
    Ok(FtDocument { decls })
}

impl FtDocument {
    /// Validates the document as a whole and builds the tree.
    pub fn to_tree(&self) -> Result<FaultTree, ParseError> {
        let mut events = Vec::new();
        let mut gates = Vec::new();
        let mut top: Option<(usize, EventId)> = None;
        // first and latest line per id, for error locations
        let mut lines: HashMap<&str, Vec<usize>> = HashMap::new();
        let last_line = self.decls.last().map_or(1, |(l, _)| *l);

        for (line, decl) in &self.decls {
            match decl {
                Decl::Event { id, model } => {
                    lines.entry(id.as_str()).or_default().push(*line);
                    events.push((id.clone(), *model));
                }
                Decl::Gate { id, kind } => {
                    lines.entry(id.as_str()).or_default().push(*line);
                    gates.push((id.clone(), kind.clone()));
                }
                Decl::Toplevel(id) => {
                    if top.is_some() {
                        return Err(ParseError {
                            line: *line,
                            column: 1,
                            kind: ParseErrorKind::DuplicateToplevel,
                        });
                    }
                    top = Some((*line, id.clone()));
                }
                Decl::Comment(_) => {}
            }
        }
        let (top_line, top) = top.ok_or(ParseError {
            line: last_line,
            column: 1,
            kind: ParseErrorKind::MissingToplevel,
        })?;

        FaultTree::new(events, gates, top).map_err(|e| {
            let line = match &e {
                TreeError::DuplicateId(id) => {
                    lines.get(id.as_str()).and_then(|v| v.get(1)).copied()
                }
                TreeError::UnknownReference { node, .. } if node == "toplevel" => Some(top_line),
                TreeError::UnknownReference { node, .. } | TreeError::Cycle(node) => {
                    lines.get(node.as_str()).map(|v| v[0])
                }
                TreeError::BadArity { gate, .. } => lines.get(gate.as_str()).map(|v| v[0]),
                TreeError::InvalidId(_) => None,
            };
            ParseError {
                line: line.unwrap_or(top_line),
                column: 1,
                kind: ParseErrorKind::Tree(e),
            }
        })
    }
}

/// Parses and validates a fault-tree document.
pub fn parse_ft(text: &str) -> Result<FaultTree, ParseError> {
    parse_document(text)?.to_tree()
}

/// Canonical text: events sorted by id, gates in topological order, then
/// the top event. Floats use the shortest representation that round-trips.
pub fn print_ft(tree: &FaultTree) -> String {
    let mut out = String::new();
    for (id, model) in tree.events() {
        writeln!(out, "event {id} {}", Model(model)).unwrap();
    }
    for (id, kind) in tree.gates() {
        write!(out, "gate {id} {}", kind.keyword()).unwrap();
        match kind {
            GateKind::Nand { negated, normal } => {
                negated.iter().for_each(|i| write!(out, " ~{i}").unwrap());
                normal.iter().for_each(|i| write!(out, " {i}").unwrap());
            }
            other => other
                .inputs()
                .iter()
                .for_each(|i| write!(out, " {i}").unwrap()),
        }
        out.push('\n');
    }
    writeln!(out, "toplevel {}", tree.top()).unwrap();
    out
}

struct Model<'a>(&'a LifetimeModel);

impl fmt::Display for Model<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        // `{:?}` keeps a trailing `.0` on integral values and round-trips exactly
        match self.0.kind() {
            Kind::Exponential { rate } => write!(f, "exp rate={rate:?}"),
            Kind::Weibull { shape, scale } => write!(f, "weibull shape={shape:?} scale={scale:?}"),
            Kind::FixedProb { p } => write!(f, "prob p={p:?}"),
        }
    }
}
