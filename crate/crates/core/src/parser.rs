//! Plain-text reaction DSL.
//!
//! One statement per line, whitespace separated, `#` to end of line is a
//! comment:
//!
//! ```text
//! s + e <-> c            # two reactions, forward then reverse
//! c -> p + e ; cat       # labelled
//! Raf -[PKC]-> Raf*      # enzymatic shorthand, three reactions
//! MAPK <-[MAPKK**]-[MKP1]-> MAPK_tyr*   # coupled enzymatic, six reactions
//! ```
//!
//! Enzymatic `S -[E]-> P` expands to `S + E -> S:E`, `S:E -> S + E`,
//! `S:E -> E + P`. Unlabelled reactions are named `r1, r2, ...` by their
//! position in the expanded network; a label on a multi-reaction statement
//! names them `label.1, label.2, ...`.

use std::collections::HashSet;
use std::fmt;

use thiserror::Error;

use crate::network::{Complex, NetworkError, NetworkOptions, Reaction, ReactionNetwork, Term};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SourceSpan {
    /// 1-based line.
    pub line: usize,
    /// 1-based column, counted in characters.
    pub column: usize,
    pub length: usize,
}

impl fmt::Display for SourceSpan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.column)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("invalid token `{0}`")]
    Lexical(String),
    #[error("malformed arrow `{0}`")]
    MalformedArrow(String),
    #[error("statement has no arrow")]
    MissingArrow,
    #[error("statement has more than one arrow")]
    MultipleArrows,
    #[error("coefficient must be positive")]
    ZeroCoefficient,
    #[error("coefficient {0} is too large")]
    CoefficientOverflow(String),
    #[error("dangling `+`")]
    DanglingPlus,
    #[error("expected `+` between terms")]
    MissingPlus,
    #[error("coefficient without a species")]
    MissingSpecies,
    #[error("empty complex (closed systems require at least one species)")]
    EmptyComplex,
    #[error("expected a single reaction id after `;`")]
    BadLabel,
    #[error("duplicate reaction id `{0}`")]
    DuplicateReactionId(String),
    #[error("enzymatic arrows take a single species on each side")]
    EnzymaticSide,
    #[error(transparent)]
    Enzymatic(#[from] EnzymaticError),
    #[error(transparent)]
    Network(NetworkError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{span}: {kind}")]
pub struct ParseError {
    pub kind: ParseErrorKind,
    pub span: SourceSpan,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EnzymaticError {
    #[error("substrate and product are both `{0}`")]
    SubstrateIsProduct(String),
    #[error("enzyme `{0}` is also the substrate or product")]
    EnzymeIsReagent(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Arrow {
    Irreversible,
    Reversible,
    Enzymatic(String),
    CoupledEnzymatic(String, String),
}

impl Arrow {
    /// Number of elementary reactions the arrow expands to.
    pub fn reaction_count(&self) -> usize {
        match self {
            Arrow::Irreversible => 1,
            Arrow::Reversible => 2,
            Arrow::Enzymatic(_) => 3,
            Arrow::CoupledEnzymatic(..) => 6,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReactionStatement {
    pub lhs: Vec<Term>,
    pub arrow: Arrow,
    pub rhs: Vec<Term>,
    pub label: Option<String>,
    pub span: SourceSpan,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ParseOptions {
    pub open_system: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Plus,
    Semi,
    Int(u64),
    Arrow(Arrow),
    Name(String),
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    span: SourceSpan,
}

fn err(kind: ParseErrorKind, span: SourceSpan) -> ParseError {
    ParseError { kind, span }
}

fn classify(text: &str, span: SourceSpan) -> Result<Tok, ParseError> {
    match text {
        "+" => return Ok(Tok::Plus),
        ";" => return Ok(Tok::Semi),
        "->" => return Ok(Tok::Arrow(Arrow::Irreversible)),
        "<->" => return Ok(Tok::Arrow(Arrow::Reversible)),
        _ => {}
    }
    if text.bytes().all(|b| b.is_ascii_digit()) {
        return text
            .parse::<u64>()
            .map(Tok::Int)
            .map_err(|_| err(ParseErrorKind::CoefficientOverflow(text.into()), span));
    }
    let enzyme_ok = |e: &str| !e.is_empty() && !e.contains(['[', ']']);
    if let Some(inner) = text.strip_prefix("<-[").and_then(|t| t.strip_suffix("]->")) {
        if let Some((e1, e2)) = inner.split_once("]-[") {
            if enzyme_ok(e1) && enzyme_ok(e2) {
                return Ok(Tok::Arrow(Arrow::CoupledEnzymatic(e1.into(), e2.into())));
            }
        }
        return Err(err(ParseErrorKind::MalformedArrow(text.into()), span));
    }
    if let Some(inner) = text.strip_prefix("-[").and_then(|t| t.strip_suffix("]->")) {
        if enzyme_ok(inner) {
            return Ok(Tok::Arrow(Arrow::Enzymatic(inner.into())));
        }
        return Err(err(ParseErrorKind::MalformedArrow(text.into()), span));
    }
    const ARROWISH: [&str; 6] = ["<-", "->", "-[", "=>", "<=", "-->"];
    if ARROWISH.iter().any(|p| text.starts_with(p)) || text == "-" {
        return Err(err(ParseErrorKind::MalformedArrow(text.into()), span));
    }
    if text.contains(['[', ']']) {
        return Err(err(ParseErrorKind::Lexical(text.into()), span));
    }
    Ok(Tok::Name(text.into()))
}

fn tokenize_line(line: &str, lineno: usize) -> Result<Vec<Token>, ParseError> {
    let mut out = Vec::new();
    let chars = line.char_indices();
    let mut col = 0usize;
    let mut current: Option<(usize, usize)> = None; // (byte start, column)
    let flush = |current: &mut Option<(usize, usize)>, end: usize, out: &mut Vec<Token>| {
        if let Some((start, column)) = current.take() {
            let text = &line[start..end];
            let span = SourceSpan {
                line: lineno,
                column,
                length: text.chars().count(),
            };
            out.push(Token {
                tok: classify(text, span)?,
                span,
            });
        }
        Ok::<(), ParseError>(())
    };
    for (i, c) in chars {
        col += 1;
        if c == '#' {
            flush(&mut current, i, &mut out)?;
            return Ok(out);
        }
        if c.is_whitespace() {
            flush(&mut current, i, &mut out)?;
            continue;
        }
        if c == ';' {
            flush(&mut current, i, &mut out)?;
            out.push(Token {
                tok: Tok::Semi,
                span: SourceSpan {
                    line: lineno,
                    column: col,
                    length: 1,
                },
            });
            continue;
        }
        if c.is_control() {
            return Err(err(
                ParseErrorKind::Lexical(c.escape_default().to_string()),
                SourceSpan {
                    line: lineno,
                    column: col,
                    length: 1,
                },
            ));
        }
        if current.is_none() {
            current = Some((i, col));
        }
    }
    flush(&mut current, line.len(), &mut out)?;
    Ok(out)
}

fn parse_complex(toks: &[Token], anchor: SourceSpan, allow_empty: bool) -> Result<Vec<Term>, ParseError> {
    if toks.is_empty() {
        return if allow_empty {
            Ok(Vec::new())
        } else {
            Err(err(ParseErrorKind::EmptyComplex, anchor))
        };
    }
    let mut terms = Vec::new();
    let mut i = 0;
    loop {
        let coefficient = match toks.get(i) {
            Some(Token { tok: Tok::Int(k), span }) => {
                if *k == 0 {
                    return Err(err(ParseErrorKind::ZeroCoefficient, *span));
                }
                i += 1;
                *k
            }
            _ => 1,
        };
        match toks.get(i) {
            Some(Token { tok: Tok::Name(n), .. }) => {
                terms.push(Term::new(coefficient, n.clone()));
                i += 1;
            }
            Some(Token { tok: Tok::Plus, span }) => {
                return Err(err(ParseErrorKind::DanglingPlus, *span));
            }
            Some(t) => return Err(err(ParseErrorKind::MissingSpecies, t.span)),
            None => {
                let t = &toks[i - 1];
                let kind = if t.tok == Tok::Plus {
                    ParseErrorKind::DanglingPlus
                } else {
                    ParseErrorKind::MissingSpecies
                };
                return Err(err(kind, t.span));
            }
        }
        match toks.get(i) {
            None => return Ok(terms),
            Some(Token { tok: Tok::Plus, span }) => {
                if i + 1 == toks.len() {
                    return Err(err(ParseErrorKind::DanglingPlus, *span));
                }
                i += 1;
            }
            Some(t) => return Err(err(ParseErrorKind::MissingPlus, t.span)),
        }
    }
}

fn parse_statement(toks: Vec<Token>, opts: ParseOptions) -> Result<ReactionStatement, ParseError> {
    let first = toks[0].span;
    let last = toks[toks.len() - 1].span;
    let span = SourceSpan {
        line: first.line,
        column: first.column,
        length: last.column + last.length - first.column,
    };

    let mut body = toks.as_slice();
    let mut label = None;
    if let Some(semi) = toks.iter().position(|t| t.tok == Tok::Semi) {
        match &toks[semi + 1..] {
            [Token { tok: Tok::Name(id), .. }] => label = Some(id.clone()),
            [] => return Err(err(ParseErrorKind::BadLabel, toks[semi].span)),
            [t, ..] => return Err(err(ParseErrorKind::BadLabel, t.span)),
        }
        body = &toks[..semi];
    }

    let arrows: Vec<usize> = body
        .iter()
        .enumerate()
        .filter(|(_, t)| matches!(t.tok, Tok::Arrow(_)))
        .map(|(i, _)| i)
        .collect();
    let at = match arrows.as_slice() {
        [] => return Err(err(ParseErrorKind::MissingArrow, span)),
        [a] => *a,
        [_, b, ..] => return Err(err(ParseErrorKind::MultipleArrows, body[*b].span)),
    };
    let Tok::Arrow(arrow) = body[at].tok.clone() else {
        unreachable!("position selected by arrow filter")
    };
    let arrow_span = body[at].span;
    let lhs = parse_complex(&body[..at], arrow_span, opts.open_system)?;
    let rhs = parse_complex(&body[at + 1..], arrow_span, opts.open_system)?;

    if matches!(arrow, Arrow::Enzymatic(_) | Arrow::CoupledEnzymatic(..)) {
        let single = |ts: &[Term]| ts.len() == 1 && ts[0].coefficient == 1;
        if !single(&lhs) || !single(&rhs) {
            return Err(err(ParseErrorKind::EnzymaticSide, arrow_span));
        }
    }
    Ok(ReactionStatement {
        lhs,
        arrow,
        rhs,
        label,
        span,
    })
}

/// Parse statements without expanding them.
pub fn parse_statements(text: &str, opts: ParseOptions) -> Result<Vec<ReactionStatement>, ParseError> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let toks = tokenize_line(line, i + 1)?;
        if toks.is_empty() {
            continue;
        }
        out.push(parse_statement(toks, opts)?);
    }
    Ok(out)
}

fn complex_label(s: &str, e: &str) -> String {
    format!("{s}:{e}")
}

/// `S -[E]-> P` as `[S + E -> S:E, S:E -> S + E, S:E -> E + P]`.
pub fn expand_enzymatic(
    substrate: &str,
    enzyme: &str,
    product: &str,
) -> Result<[(Complex, Complex); 3], EnzymaticError> {
    if substrate == product {
        return Err(EnzymaticError::SubstrateIsProduct(substrate.into()));
    }
    if enzyme == substrate || enzyme == product {
        return Err(EnzymaticError::EnzymeIsReagent(enzyme.into()));
    }
    let bound = complex_label(substrate, enzyme);
    Ok([
        (Complex::of(&[substrate, enzyme]), Complex::of(&[bound.as_str()])),
        (Complex::of(&[bound.as_str()]), Complex::of(&[substrate, enzyme])),
        (Complex::of(&[bound.as_str()]), Complex::of(&[enzyme, product])),
    ])
}

fn expand(stmt: &ReactionStatement) -> Result<Vec<(Complex, Complex)>, ParseError> {
    let to_complex = |ts: &[Term]| Complex::new(ts.iter().cloned());
    let net_err = |e| err(ParseErrorKind::Network(e), stmt.span);
    let lhs = to_complex(&stmt.lhs).map_err(net_err)?;
    let rhs = to_complex(&stmt.rhs).map_err(net_err)?;
    let enz =
        |s: &str, e: &str, p: &str| expand_enzymatic(s, e, p).map_err(|e| err(ParseErrorKind::Enzymatic(e), stmt.span));
    Ok(match &stmt.arrow {
        Arrow::Irreversible => vec![(lhs, rhs)],
        Arrow::Reversible => vec![(lhs.clone(), rhs.clone()), (rhs, lhs)],
        Arrow::Enzymatic(e) => enz(&stmt.lhs[0].species, e, &stmt.rhs[0].species)?.to_vec(),
        Arrow::CoupledEnzymatic(e1, e2) => {
            let (s, p) = (&stmt.lhs[0].species, &stmt.rhs[0].species);
            let mut v = enz(s, e1, p)?.to_vec();
            v.extend(enz(p, e2, s)?);
            v
        }
    })
}

/// Parse and expand a network description.
pub fn parse_network(text: &str) -> Result<ReactionNetwork, ParseError> {
    parse_network_with(text, ParseOptions::default())
}

pub fn parse_network_with(text: &str, opts: ParseOptions) -> Result<ReactionNetwork, ParseError> {
    let stmts = parse_statements(text, opts)?;
    let mut reactions = Vec::new();
    let mut spans = Vec::new();
    let mut ids = HashSet::new();
    for stmt in &stmts {
        let expanded = expand(stmt)?;
        let k = expanded.len();
        for (j, (reactant, product)) in expanded.into_iter().enumerate() {
            let id = match &stmt.label {
                Some(l) if k == 1 => l.clone(),
                Some(l) => format!("{l}.{}", j + 1),
                None => format!("r{}", reactions.len() + 1),
            };
            if !ids.insert(id.clone()) {
                return Err(err(ParseErrorKind::DuplicateReactionId(id), stmt.span));
            }
            reactions.push(Reaction::new(id, reactant, product));
            spans.push(stmt.span);
        }
    }
    let order: Vec<String> = reactions.iter().map(|r| r.id.clone()).collect();
    let net_opts = NetworkOptions {
        open_system: opts.open_system,
    };
    ReactionNetwork::new(reactions, net_opts).map_err(|e| {
        let span = match &e {
            NetworkError::TrivialReaction(id)
            | NetworkError::DuplicateReactionId(id)
            | NetworkError::EmptyComplex(id) => order.iter().position(|o| o == id).map(|i| spans[i]),
            _ => None,
        };
        err(
            ParseErrorKind::Network(e),
            span.unwrap_or(SourceSpan {
                line: 1,
                column: 1,
                length: 0,
            }),
        )
    })
}

fn format_complex(c: &Complex, out: &mut String) {
    for (i, t) in c.terms().iter().enumerate() {
        if i > 0 {
            out.push_str(" + ");
        }
        if t.coefficient > 1 {
            out.push_str(&t.coefficient.to_string());
            out.push(' ');
        }
        out.push_str(&t.species);
    }
}

/// One fully expanded, labelled reaction per line.
pub fn format_canonical(net: &ReactionNetwork) -> String {
    let mut out = String::new();
    for r in net.reactions() {
        format_complex(&r.reactant, &mut out);
        if !r.reactant.is_empty() {
            out.push(' ');
        }
        out.push_str("->");
        if !r.product.is_empty() {
            out.push(' ');
        }
        format_complex(&r.product, &mut out);
        out.push_str("; ");
        out.push_str(&r.id);
        out.push('\n');
    }
    out
}
