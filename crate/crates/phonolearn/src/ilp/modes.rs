//! Mode declarations: the syntactic bias driving saturation and refinement.
//!
//! File syntax, one declaration per line:
//!
//! ```text
//! modeh(prefix(+phone,+context,+context)).
//! modeb(head(+context,-phone)).
//! modeb(1,equal(+phone,#phone)).
//! ```
//!
//! `+t` marks an input (must be bound to an already-introduced value of
//! type `t`), `-t` an output (introduces values), `#t` a ground constant
//! spliced into the clause. The optional leading integer is the recall
//! bound: how many answers per distinct input binding saturation keeps.

use std::fmt;

use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
#[error("line {line}: {message}")]
pub struct ModeError {
    pub line: usize,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ArgMode {
    Input(String),
    Output(String),
    Constant(String),
}

impl ArgMode {
    pub fn type_name(&self) -> &str {
        match self {
            ArgMode::Input(t) | ArgMode::Output(t) | ArgMode::Constant(t) => t,
        }
    }
}

impl fmt::Display for ArgMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ArgMode::Input(t) => write!(f, "+{t}"),
            ArgMode::Output(t) => write!(f, "-{t}"),
            ArgMode::Constant(t) => write!(f, "#{t}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModeKind {
    Head,
    Body,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Recall {
    Bounded(usize),
    Unbounded,
}

impl Recall {
    /// Solution cap to hand the prover.
    pub fn limit(self) -> usize {
        match self {
            Recall::Bounded(n) => n,
            Recall::Unbounded => usize::MAX,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModeDeclaration {
    pub kind: ModeKind,
    pub predicate: String,
    pub args: Vec<ArgMode>,
    pub recall: Recall,
}

impl ModeDeclaration {
    pub fn head(predicate: impl Into<String>, args: Vec<ArgMode>) -> ModeDeclaration {
        ModeDeclaration {
            kind: ModeKind::Head,
            predicate: predicate.into(),
            args,
            recall: Recall::Unbounded,
        }
    }

    pub fn body(recall: Recall, predicate: impl Into<String>, args: Vec<ArgMode>) -> ModeDeclaration {
        ModeDeclaration {
            kind: ModeKind::Body,
            predicate: predicate.into(),
            args,
            recall,
        }
    }

    pub fn arity(&self) -> usize {
        self.args.len()
    }
}

impl fmt::Display for ModeDeclaration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            ModeKind::Head => write!(f, "modeh(")?,
            ModeKind::Body => write!(f, "modeb(")?,
        }
        if let Recall::Bounded(n) = self.recall {
            write!(f, "{n},")?;
        }
        write!(f, "{}(", self.predicate)?;
        for (i, a) in self.args.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{a}")?;
        }
        write!(f, ")).")
    }
}

struct Scanner<'a> {
    src: &'a [u8],
    pos: usize,
    line: usize,
}

impl<'a> Scanner<'a> {
    fn error(&self, message: impl Into<String>) -> ModeError {
        ModeError {
            line: self.line,
            message: message.into(),
        }
    }

    fn skip_trivia(&mut self) {
        while let Some(&c) = self.src.get(self.pos) {
            if c == b'%' {
                while let Some(&c) = self.src.get(self.pos) {
                    self.pos += 1;
                    if c == b'\n' {
                        self.line += 1;
                        break;
                    }
                }
            } else if c.is_ascii_whitespace() {
                if c == b'\n' {
                    self.line += 1;
                }
                self.pos += 1;
            } else {
                break;
            }
        }
    }

    fn eat(&mut self, c: u8) -> Result<(), ModeError> {
        self.skip_trivia();
        if self.src.get(self.pos) == Some(&c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.error(format!("expected '{}'", c as char)))
        }
    }

    fn ident(&mut self) -> Result<String, ModeError> {
        self.skip_trivia();
        let start = self.pos;
        while let Some(&c) = self.src.get(self.pos) {
            if c.is_ascii_alphanumeric() || c == b'_' {
                self.pos += 1;
            } else {
                break;
            }
        }
        if self.pos == start {
            return Err(self.error("expected an identifier"));
        }
        Ok(String::from_utf8_lossy(&self.src[start..self.pos]).into_owned())
    }

    fn declaration(&mut self) -> Result<ModeDeclaration, ModeError> {
        let keyword = self.ident()?;
        let kind = match keyword.as_str() {
            "modeh" => ModeKind::Head,
            "modeb" => ModeKind::Body,
            other => return Err(self.error(format!("expected modeh or modeb, found '{other}'"))),
        };
        self.eat(b'(')?;
        self.skip_trivia();
        // Optional recall bound: integer or `*` before the schema.
        let mut recall = Recall::Unbounded;
        match self.src.get(self.pos) {
            Some(b'*') => {
                self.pos += 1;
                self.eat(b',')?;
            }
            Some(c) if c.is_ascii_digit() => {
                let n = self.ident()?;
                let n: usize = n
                    .parse()
                    .map_err(|_| self.error(format!("bad recall bound '{n}'")))?;
                if n == 0 {
                    return Err(self.error("recall bound must be positive"));
                }
                recall = Recall::Bounded(n);
                self.eat(b',')?;
            }
            _ => {}
        }
        let predicate = self.ident()?;
        self.eat(b'(')?;
        let mut args = Vec::new();
        loop {
            self.skip_trivia();
            let role = match self.src.get(self.pos) {
                Some(b'+') => ArgMode::Input as fn(String) -> ArgMode,
                Some(b'-') => ArgMode::Output as fn(String) -> ArgMode,
                Some(b'#') => ArgMode::Constant as fn(String) -> ArgMode,
                _ => return Err(self.error("expected an argument role '+', '-' or '#'")),
            };
            self.pos += 1;
            args.push(role(self.ident()?));
            self.skip_trivia();
            match self.src.get(self.pos) {
                Some(b',') => {
                    self.pos += 1;
                }
                Some(b')') => {
                    self.pos += 1;
                    break;
                }
                _ => return Err(self.error("expected ',' or ')'")),
            }
        }
        self.eat(b')')?;
        self.eat(b'.')?;
        Ok(ModeDeclaration {
            kind,
            predicate,
            args,
            recall,
        })
    }
}

pub fn parse_modes(src: &str) -> Result<Vec<ModeDeclaration>, ModeError> {
    let mut scanner = Scanner {
        src: src.as_bytes(),
        pos: 0,
        line: 1,
    };
    let mut modes = Vec::new();
    loop {
        scanner.skip_trivia();
        if scanner.pos >= scanner.src.len() {
            return Ok(modes);
        }
        modes.push(scanner.declaration()?);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_head_mode() {
        let modes = parse_modes("modeh(prefix(+phone,+context,+context)).").unwrap();
        assert_eq!(modes.len(), 1);
        assert_eq!(modes[0].kind, ModeKind::Head);
        assert_eq!(modes[0].predicate, "prefix");
        assert_eq!(
            modes[0].args,
            vec![
                ArgMode::Input("phone".into()),
                ArgMode::Input("context".into()),
                ArgMode::Input("context".into()),
            ]
        );
        assert_eq!(modes[0].recall, Recall::Unbounded);
    }

    #[test]
    fn parses_recall_and_roles() {
        let src = "% list access\nmodeb(1,head(+context,-phone)).\nmodeb(*,manner(#value,+phone)).\n";
        let modes = parse_modes(src).unwrap();
        assert_eq!(modes[0].recall, Recall::Bounded(1));
        assert_eq!(modes[1].recall, Recall::Unbounded);
        assert_eq!(modes[1].args[0], ArgMode::Constant("value".into()));
    }

    #[test]
    fn display_round_trips() {
        let src = "modeh(prefix(+phone,+context,+context)).\nmodeb(2,rest(+context,-context)).\nmodeb(equal(+phone,#phone)).";
        let modes = parse_modes(src).unwrap();
        let printed: Vec<String> = modes.iter().map(|m| m.to_string()).collect();
        let reparsed = parse_modes(&printed.join("\n")).unwrap();
        assert_eq!(reparsed, modes);
    }

    #[test]
    fn rejects_missing_role_marker() {
        let err = parse_modes("modeb(head(context,-phone)).").unwrap_err();
        assert!(err.message.contains("argument role"));
    }

    #[test]
    fn rejects_zero_recall() {
        assert!(parse_modes("modeb(0,head(+context,-phone)).").is_err());
    }

    #[test]
    fn reports_line_numbers() {
        let err = parse_modes("modeb(1,head(+context,-phone)).\nmodex(q(+t)).").unwrap_err();
        assert_eq!(err.line, 2);
    }
}
