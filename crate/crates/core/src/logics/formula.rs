use std::fmt;

use super::{Connective, Logic, Modality};
use crate::error::{Error, Result};
use crate::linalg::{format_rational, parse_rational, Rational};

/// A modal formula. Labels are kept by name and resolved against a model at
/// evaluation time; `None` stands for the unique label of a single-relation
/// system (written `dia` / `box`).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Formula {
    Top,
    Bot,
    /// An atomic proposition, or the output letter `p` of linear logics.
    Atom(String),
    Dia(Option<String>, Box<Formula>),
    Box(Option<String>, Box<Formula>),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Zero,
    Add(Box<Formula>, Box<Formula>),
    Scale(Rational, Box<Formula>),
}

impl Formula {
    pub fn dia(label: &str, f: Formula) -> Formula {
        Formula::Dia(Some(label.to_string()), Box::new(f))
    }

    pub fn boxed(label: &str, f: Formula) -> Formula {
        Formula::Box(Some(label.to_string()), Box::new(f))
    }

    pub fn atom(name: &str) -> Formula {
        Formula::Atom(name.to_string())
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Formula {
        Formula::Not(Box::new(f))
    }

    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Formula {
        Formula::Or(Box::new(a), Box::new(b))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn add(a: Formula, b: Formula) -> Formula {
        Formula::Add(Box::new(a), Box::new(b))
    }

    pub fn scale(r: Rational, f: Formula) -> Formula {
        Formula::Scale(r, Box::new(f))
    }

    /// `<a1>...<ak> T`.
    pub fn trace<S: AsRef<str>>(word: &[S]) -> Formula {
        word.iter()
            .rev()
            .fold(Formula::Top, |f, a| Formula::dia(a.as_ref(), f))
    }

    /// Nesting depth of modal operators.
    pub fn depth(&self) -> usize {
        match self {
            Formula::Top | Formula::Bot | Formula::Atom(_) | Formula::Zero => 0,
            Formula::Dia(_, f) | Formula::Box(_, f) => 1 + f.depth(),
            Formula::Not(f) | Formula::Scale(_, f) => f.depth(),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Add(a, b) => a.depth().max(b.depth()),
        }
    }

    /// Errors unless every constructor is admitted by `logic`.
    pub fn check(&self, logic: &Logic) -> Result<()> {
        if self.well_formed(logic) {
            Ok(())
        } else {
            Err(Error::IllFormedFormula {
                logic: logic.name().to_string(),
                formula: self.to_string(),
            })
        }
    }

    fn well_formed(&self, logic: &Logic) -> bool {
        let has = |m: Modality| logic.modalities().contains(&m);
        let conn = |c: Connective| logic.admits(c);
        match self {
            Formula::Top => has(Modality::Top) || conn(Connective::Top),
            Formula::Bot => conn(Connective::Bot),
            Formula::Zero => conn(Connective::Zero),
            Formula::Atom(name) => {
                if has(Modality::Output) {
                    name == "p"
                } else {
                    has(Modality::Prop)
                }
            }
            Formula::Dia(_, f) => has(Modality::Diamond) && f.well_formed(logic),
            Formula::Box(_, f) => has(Modality::Box) && f.well_formed(logic),
            Formula::Not(f) => conn(Connective::Not) && f.well_formed(logic),
            Formula::And(a, b) => conn(Connective::And) && a.well_formed(logic) && b.well_formed(logic),
            Formula::Or(a, b) => conn(Connective::Or) && a.well_formed(logic) && b.well_formed(logic),
            Formula::Add(a, b) => conn(Connective::Add) && a.well_formed(logic) && b.well_formed(logic),
            Formula::Scale(_, f) => conn(Connective::Scale) && f.well_formed(logic),
        }
    }

    /// Whether this is a trace formula `<a1>...<ak> T`.
    pub fn is_trace(&self) -> bool {
        match self {
            Formula::Top => true,
            Formula::Dia(_, f) => f.is_trace(),
            _ => false,
        }
    }

    fn precedence(&self) -> u8 {
        match self {
            Formula::Or(..) => 1,
            Formula::And(..) => 2,
            Formula::Add(..) => 3,
            Formula::Scale(..) => 4,
            Formula::Dia(..) | Formula::Box(..) | Formula::Not(..) => 5,
            _ => 6,
        }
    }

    fn fmt_child(&self, child: &Formula, min: u8, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if child.precedence() < min {
            write!(f, "({child})")
        } else {
            write!(f, "{child}")
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::Top => f.write_str("T"),
            Formula::Bot => f.write_str("F"),
            Formula::Zero => f.write_str("0"),
            Formula::Atom(a) => f.write_str(a),
            Formula::Dia(l, g) | Formula::Box(l, g) => {
                let is_dia = matches!(self, Formula::Dia(..));
                match (l, is_dia) {
                    (Some(l), true) => write!(f, "<{l}>")?,
                    (Some(l), false) => write!(f, "[{l}]")?,
                    (None, true) => f.write_str("dia ")?,
                    (None, false) => f.write_str("box ")?,
                }
                self.fmt_child(g, 5, f)
            }
            Formula::Not(g) => {
                f.write_str("!")?;
                self.fmt_child(g, 5, f)
            }
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Add(a, b) => {
                let (op, p) = match self {
                    Formula::And(..) => (" & ", 2),
                    Formula::Or(..) => (" | ", 1),
                    _ => (" + ", 3),
                };
                self.fmt_child(a, p, f)?;
                f.write_str(op)?;
                self.fmt_child(b, p + 1, f)
            }
            Formula::Scale(r, g) => {
                write!(f, "{} * ", format_rational(r))?;
                self.fmt_child(g, 5, f)
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Ident(String),
    Num(String),
    LAngle,
    RAngle,
    LBrack,
    RBrack,
    LParen,
    RParen,
    Amp,
    Bar,
    Bang,
    Plus,
    Star,
}

fn lex(src: &str) -> Result<Vec<(usize, Tok)>> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        let start = i;
        let simple = match c {
            '<' => Some(Tok::LAngle),
            '>' => Some(Tok::RAngle),
            '[' => Some(Tok::LBrack),
            ']' => Some(Tok::RBrack),
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            '&' => Some(Tok::Amp),
            '|' => Some(Tok::Bar),
            '!' => Some(Tok::Bang),
            '+' => Some(Tok::Plus),
            '*' => Some(Tok::Star),
            _ => None,
        };
        if let Some(t) = simple {
            out.push((start, t));
            i += 1;
        } else if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() || c == '-' {
            i += 1;
            while i < bytes.len() && (bytes[i].is_ascii_digit() || bytes[i] == b'/') {
                i += 1;
            }
            out.push((start, Tok::Num(src[start..i].to_string())));
        } else if c.is_alphanumeric() || c == '_' {
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_' || bytes[i] == b'\'') {
                i += 1;
            }
            out.push((start, Tok::Ident(src[start..i].to_string())));
        } else {
            return Err(Error::FormulaSyntax {
                pos: start,
                msg: format!("unexpected character `{c}`"),
            });
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn here(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |(p, _)| *p)
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::FormulaSyntax {
            pos: self.here(),
            msg: msg.into(),
        })
    }

    fn eat(&mut self, t: &Tok) -> bool {
        if self.peek() == Some(t) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, t: Tok) -> Result<()> {
        if self.eat(&t) {
            Ok(())
        } else {
            self.err(format!("expected {t:?}"))
        }
    }

    fn or(&mut self) -> Result<Formula> {
        let mut f = self.and()?;
        while self.eat(&Tok::Bar) {
            f = Formula::or(f, self.and()?);
        }
        Ok(f)
    }

    fn and(&mut self) -> Result<Formula> {
        let mut f = self.sum()?;
        while self.eat(&Tok::Amp) {
            f = Formula::and(f, self.sum()?);
        }
        Ok(f)
    }

    fn sum(&mut self) -> Result<Formula> {
        let mut f = self.term()?;
        while self.eat(&Tok::Plus) {
            f = Formula::add(f, self.term()?);
        }
        Ok(f)
    }

    fn term(&mut self) -> Result<Formula> {
        if let Some(Tok::Num(n)) = self.peek().cloned() {
            if self.toks.get(self.pos + 1).map(|(_, t)| t) == Some(&Tok::Star) {
                let r = parse_rational(&n).or_else(|_| self.err(format!("bad scalar `{n}`")))?;
                self.pos += 2;
                return Ok(Formula::scale(r, self.unary()?));
            }
        }
        self.unary()
    }

    fn label(&mut self, close: Tok) -> Result<String> {
        let Some(Tok::Ident(l)) = self.peek().cloned() else {
            return self.err("expected a label");
        };
        self.pos += 1;
        self.expect(close)?;
        Ok(l)
    }

    fn unary(&mut self) -> Result<Formula> {
        match self.peek().cloned() {
            Some(Tok::Bang) => {
                self.pos += 1;
                Ok(Formula::not(self.unary()?))
            }
            Some(Tok::LAngle) => {
                self.pos += 1;
                let l = self.label(Tok::RAngle)?;
                Ok(Formula::Dia(Some(l), Box::new(self.unary()?)))
            }
            Some(Tok::LBrack) => {
                self.pos += 1;
                let l = self.label(Tok::RBrack)?;
                Ok(Formula::Box(Some(l), Box::new(self.unary()?)))
            }
            Some(Tok::Ident(id)) if id == "dia" || id == "box" => {
                self.pos += 1;
                let g = Box::new(self.unary()?);
                Ok(if id == "dia" { Formula::Dia(None, g) } else { Formula::Box(None, g) })
            }
            _ => self.atom(),
        }
    }

    fn atom(&mut self) -> Result<Formula> {
        match self.peek().cloned() {
            Some(Tok::LParen) => {
                self.pos += 1;
                let f = self.or()?;
                self.expect(Tok::RParen)?;
                Ok(f)
            }
            Some(Tok::Ident(id)) => {
                self.pos += 1;
                Ok(match id.as_str() {
                    "T" => Formula::Top,
                    "F" => Formula::Bot,
                    _ => Formula::Atom(id),
                })
            }
            Some(Tok::Num(n)) if n == "0" => {
                self.pos += 1;
                Ok(Formula::Zero)
            }
            Some(t) => self.err(format!("unexpected {t:?}")),
            None => self.err("unexpected end of formula"),
        }
    }
}

/// Parses the textual formula syntax:
/// `T`, `F`, `0`, identifiers, `<a> f`, `[a] f`, `dia f`, `box f`, `!f`,
/// `f & g`, `f | g`, `f + g`, `r * f` and parentheses.
pub fn parse_formula(src: &str) -> Result<Formula> {
    let toks = lex(src)?;
    let mut p = Parser {
        toks,
        pos: 0,
        end: src.len(),
    };
    let f = p.or()?;
    if p.pos != p.toks.len() {
        return p.err("trailing input");
    }
    Ok(f)
}
