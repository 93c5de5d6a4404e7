//! Textual clause syntax.
//!
//! `head :- lit1, lit2.` with a `.` terminator; lists as `[a,b]` or
//! `[H|T]`; variables start uppercase or with `_`, constants lowercase,
//! numeric, or quoted (`'^'`). Comments run from `%` to end of line.

use std::fmt;

use thiserror::Error;

use super::{Clause, Literal, Term, CONS, NIL};

#[derive(Debug, Error, PartialEq, Eq)]
#[error("line {line}: {message}")]
pub struct TextError {
    pub line: usize,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Token {
    Atom(String),
    Variable(String),
    Open,
    Close,
    ListOpen,
    ListClose,
    Comma,
    Bar,
    Neck,
    Stop,
}

struct Lexer<'a> {
    src: &'a [u8],
    pos: usize,
    line: usize,
}

impl<'a> Lexer<'a> {
    fn new(src: &'a str) -> Lexer<'a> {
        Lexer {
            src: src.as_bytes(),
            pos: 0,
            line: 1,
        }
    }

    fn error(&self, message: impl Into<String>) -> TextError {
        TextError {
            line: self.line,
            message: message.into(),
        }
    }

    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn bump(&mut self) -> Option<u8> {
        let c = self.peek()?;
        self.pos += 1;
        if c == b'\n' {
            self.line += 1;
        }
        Some(c)
    }

    fn skip_trivia(&mut self) {
        loop {
            match self.peek() {
                Some(c) if c.is_ascii_whitespace() => {
                    self.bump();
                }
                Some(b'%') => {
                    while let Some(c) = self.peek() {
                        if c == b'\n' {
                            break;
                        }
                        self.bump();
                    }
                }
                _ => break,
            }
        }
    }

    /// Returns the next token with the line it started on, or `None` at EOF.
    fn next_token(&mut self) -> Result<Option<(Token, usize)>, TextError> {
        self.skip_trivia();
        let line = self.line;
        let c = match self.peek() {
            Some(c) => c,
            None => return Ok(None),
        };
        let token = match c {
            b'(' => {
                self.bump();
                Token::Open
            }
            b')' => {
                self.bump();
                Token::Close
            }
            b'[' => {
                self.bump();
                Token::ListOpen
            }
            b']' => {
                self.bump();
                Token::ListClose
            }
            b',' => {
                self.bump();
                Token::Comma
            }
            b'|' => {
                self.bump();
                Token::Bar
            }
            b'.' => {
                self.bump();
                Token::Stop
            }
            b':' if self.src.get(self.pos + 1) == Some(&b'-') => {
                self.bump();
                self.bump();
                Token::Neck
            }
            b'\'' => {
                self.bump();
                let mut name = String::new();
                loop {
                    match self.bump() {
                        Some(b'\'') => {
                            // Doubled quote is an escaped quote.
                            if self.peek() == Some(b'\'') {
                                self.bump();
                                name.push('\'');
                            } else {
                                break;
                            }
                        }
                        Some(c) => name.push(c as char),
                        None => return Err(self.error("unterminated quoted atom")),
                    }
                }
                Token::Atom(name)
            }
            b'A'..=b'Z' | b'_' => {
                let name = self.take_word();
                Token::Variable(name)
            }
            b'a'..=b'z' => {
                let name = self.take_word();
                Token::Atom(name)
            }
            b'0'..=b'9' => {
                let mut name = String::new();
                while let Some(c) = self.peek() {
                    if c.is_ascii_digit() || (c == b'.' && matches!(self.src.get(self.pos + 1), Some(d) if d.is_ascii_digit())) {
                        name.push(c as char);
                        self.bump();
                    } else {
                        break;
                    }
                }
                Token::Atom(name)
            }
            // A lone `:` (not followed by `-`) is a constant symbol; it is
            // the long-vowel mark in phoneme lists.
            b':' => {
                self.bump();
                Token::Atom(":".into())
            }
            other => {
                return Err(self.error(format!("unexpected character '{}'", other as char)));
            }
        };
        Ok(Some((token, line)))
    }

    fn take_word(&mut self) -> String {
        let mut name = String::new();
        while let Some(c) = self.peek() {
            if c.is_ascii_alphanumeric() || c == b'_' {
                name.push(c as char);
                self.bump();
            } else {
                break;
            }
        }
        name
    }
}

struct Parser {
    tokens: Vec<(Token, usize)>,
    pos: usize,
    last_line: usize,
}

impl Parser {
    fn new(src: &str) -> Result<Parser, TextError> {
        let mut lexer = Lexer::new(src);
        let mut tokens = Vec::new();
        while let Some(t) = lexer.next_token()? {
            tokens.push(t);
        }
        Ok(Parser {
            tokens,
            pos: 0,
            last_line: 1,
        })
    }

    fn error(&self, message: impl Into<String>) -> TextError {
        let line = self
            .tokens
            .get(self.pos)
            .map(|(_, l)| *l)
            .unwrap_or(self.last_line);
        TextError {
            line,
            message: message.into(),
        }
    }

    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos).map(|(t, _)| t)
    }

    fn bump(&mut self) -> Option<Token> {
        let entry = self.tokens.get(self.pos).cloned();
        if let Some((t, line)) = entry {
            self.pos += 1;
            self.last_line = line;
            Some(t)
        } else {
            None
        }
    }

    fn expect(&mut self, want: Token, what: &str) -> Result<(), TextError> {
        match self.bump() {
            Some(t) if t == want => Ok(()),
            Some(t) => Err(self.error(format!("expected {what}, found {t:?}"))),
            None => Err(self.error(format!("expected {what}, found end of input"))),
        }
    }

    fn at_end(&self) -> bool {
        self.pos >= self.tokens.len()
    }

    fn parse_term(&mut self) -> Result<Term, TextError> {
        match self.bump() {
            Some(Token::Variable(v)) => Ok(Term::Var(v)),
            Some(Token::Atom(a)) => {
                if self.peek() == Some(&Token::Open) {
                    self.bump();
                    let args = self.parse_args()?;
                    Ok(Term::Compound(a, args))
                } else {
                    Ok(Term::Const(a))
                }
            }
            Some(Token::ListOpen) => self.parse_list(),
            Some(t) => Err(self.error(format!("expected a term, found {t:?}"))),
            None => Err(self.error("expected a term, found end of input")),
        }
    }

    fn parse_args(&mut self) -> Result<Vec<Term>, TextError> {
        let mut args = Vec::new();
        if self.peek() == Some(&Token::Close) {
            self.bump();
            return Ok(args);
        }
        loop {
            args.push(self.parse_term()?);
            match self.bump() {
                Some(Token::Comma) => continue,
                Some(Token::Close) => return Ok(args),
                Some(t) => return Err(self.error(format!("expected ',' or ')', found {t:?}"))),
                None => return Err(self.error("unterminated argument list")),
            }
        }
    }

    fn parse_list(&mut self) -> Result<Term, TextError> {
        if self.peek() == Some(&Token::ListClose) {
            self.bump();
            return Ok(Term::Const(NIL.into()));
        }
        let mut items = Vec::new();
        let tail;
        loop {
            items.push(self.parse_term()?);
            match self.bump() {
                Some(Token::Comma) => continue,
                Some(Token::ListClose) => {
                    tail = Term::Const(NIL.into());
                    break;
                }
                Some(Token::Bar) => {
                    tail = self.parse_term()?;
                    self.expect(Token::ListClose, "']'")?;
                    break;
                }
                Some(t) => return Err(self.error(format!("expected ',', '|' or ']', found {t:?}"))),
                None => return Err(self.error("unterminated list")),
            }
        }
        let mut term = tail;
        for item in items.into_iter().rev() {
            term = Term::Compound(CONS.into(), vec![item, term]);
        }
        Ok(term)
    }

    fn parse_literal(&mut self) -> Result<Literal, TextError> {
        match self.bump() {
            Some(Token::Atom(name)) => {
                if self.peek() == Some(&Token::Open) {
                    self.bump();
                    let args = self.parse_args()?;
                    Ok(Literal::new(name, args))
                } else {
                    Ok(Literal::new(name, vec![]))
                }
            }
            Some(t) => Err(self.error(format!("expected a predicate symbol, found {t:?}"))),
            None => Err(self.error("expected a predicate symbol, found end of input")),
        }
    }

    fn parse_clause(&mut self) -> Result<Clause, TextError> {
        let head = self.parse_literal()?;
        let mut body = Vec::new();
        match self.bump() {
            Some(Token::Stop) => return Ok(Clause { head, body }),
            Some(Token::Neck) => {}
            Some(t) => return Err(self.error(format!("expected ':-' or '.', found {t:?}"))),
            None => return Err(self.error("clause is missing its '.' terminator")),
        }
        loop {
            body.push(self.parse_literal()?);
            match self.bump() {
                Some(Token::Comma) => continue,
                Some(Token::Stop) => return Ok(Clause { head, body }),
                Some(t) => return Err(self.error(format!("expected ',' or '.', found {t:?}"))),
                None => return Err(self.error("clause is missing its '.' terminator")),
            }
        }
    }
}

/// Parses a single term, e.g. `[a,:]`.
pub fn parse_term(src: &str) -> Result<Term, TextError> {
    let mut p = Parser::new(src)?;
    let t = p.parse_term()?;
    if !p.at_end() {
        return Err(p.error("trailing input after term"));
    }
    Ok(t)
}

/// Parses a single literal without terminator, e.g. `prefix(m,[],[a,:])`.
pub fn parse_literal(src: &str) -> Result<Literal, TextError> {
    let mut p = Parser::new(src)?;
    let l = p.parse_literal()?;
    if !p.at_end() {
        return Err(p.error("trailing input after literal"));
    }
    Ok(l)
}

/// Parses a single `.`-terminated clause.
pub fn parse_clause(src: &str) -> Result<Clause, TextError> {
    let mut p = Parser::new(src)?;
    let c = p.parse_clause()?;
    if !p.at_end() {
        return Err(p.error("trailing input after clause"));
    }
    Ok(c)
}

/// Parses a whole program: any number of clauses, `%` comments allowed.
pub fn parse_program(src: &str) -> Result<Vec<Clause>, TextError> {
    let mut p = Parser::new(src)?;
    let mut clauses = Vec::new();
    while !p.at_end() {
        clauses.push(p.parse_clause()?);
    }
    Ok(clauses)
}

fn atom_needs_quotes(name: &str) -> bool {
    // The lexer reads a lone `:` back as a constant, so it prints bare.
    if name == ":" {
        return false;
    }
    let mut chars = name.chars();
    match chars.next() {
        None => return true,
        Some(c) if c.is_ascii_lowercase() => {
            return !chars.all(|c| c.is_ascii_alphanumeric() || c == '_');
        }
        Some(c) if c.is_ascii_digit() => {
            // Numeric constants print bare when they lex back as one token.
            return !name
                .chars()
                .all(|c| c.is_ascii_digit() || c == '.')
                || name.starts_with('.')
                || name.ends_with('.')
                || name.contains("..");
        }
        _ => return true,
    }
}

fn write_atom(f: &mut fmt::Formatter<'_>, name: &str) -> fmt::Result {
    if atom_needs_quotes(name) {
        write!(f, "'{}'", name.replace('\'', "''"))
    } else {
        f.write_str(name)
    }
}

pub(super) fn write_term(f: &mut fmt::Formatter<'_>, t: &Term) -> fmt::Result {
    match t {
        Term::Var(v) => f.write_str(v),
        Term::Const(c) if c == NIL => f.write_str("[]"),
        Term::Const(c) => write_atom(f, c),
        Term::Compound(functor, args) if functor == CONS && args.len() == 2 => {
            write!(f, "[")?;
            write_term(f, &args[0])?;
            let mut tail = &args[1];
            loop {
                match tail {
                    Term::Const(c) if c == NIL => break,
                    Term::Compound(functor, args) if functor == CONS && args.len() == 2 => {
                        write!(f, ",")?;
                        write_term(f, &args[0])?;
                        tail = &args[1];
                    }
                    other => {
                        write!(f, "|")?;
                        write_term(f, other)?;
                        break;
                    }
                }
            }
            write!(f, "]")
        }
        Term::Compound(functor, args) => {
            write_atom(f, functor)?;
            write!(f, "(")?;
            for (i, a) in args.iter().enumerate() {
                if i > 0 {
                    write!(f, ",")?;
                }
                write_term(f, a)?;
            }
            write!(f, ")")
        }
    }
}

pub(super) fn write_literal(f: &mut fmt::Formatter<'_>, lit: &Literal) -> fmt::Result {
    write_atom(f, &lit.predicate)?;
    if !lit.args.is_empty() {
        write!(f, "(")?;
        for (i, a) in lit.args.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write_term(f, a)?;
        }
        write!(f, ")")?;
    }
    Ok(())
}

pub(super) fn write_clause(f: &mut fmt::Formatter<'_>, clause: &Clause) -> fmt::Result {
    write_literal(f, &clause.head)?;
    if !clause.body.is_empty() {
        write!(f, " :- ")?;
        for (i, lit) in clause.body.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write_literal(f, lit)?;
        }
    }
    write!(f, ".")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_ground_affix_atom() {
        let lit = parse_literal("prefix(m,[],[a,:])").unwrap();
        assert_eq!(lit.predicate, "prefix");
        assert_eq!(lit.args[0], Term::constant("m"));
        assert_eq!(lit.args[1], Term::list(vec![]));
        assert_eq!(
            lit.args[2],
            Term::list(vec![Term::constant("a"), Term::constant(":")])
        );
    }

    #[test]
    fn parses_quoted_caret() {
        let lit = parse_literal("suffix('^',[t,k],[:,a])").unwrap();
        assert_eq!(lit.args[0], Term::constant("^"));
    }

    #[test]
    fn parses_rule_with_partial_list() {
        let c = parse_clause("head([H|T],H).").unwrap();
        assert!(c.is_fact());
        assert_eq!(c.head.predicate, "head");
        assert_eq!(
            c.head.args[0],
            Term::compound(CONS, vec![Term::var("H"), Term::var("T")])
        );
    }

    #[test]
    fn parses_body_and_comments() {
        let src = "% a rule\np(X) :- q(X), r(X,a). % trailing\nq(b).\n";
        let clauses = parse_program(src).unwrap();
        assert_eq!(clauses.len(), 2);
        assert_eq!(clauses[0].body.len(), 2);
    }

    #[test]
    fn display_roundtrip_is_stable() {
        for src in [
            "prefix(m,[],[a,:]).",
            "suffix('^',[t,k],[:,a]).",
            "p(X) :- q(X), r(X,a).",
            "head([H|T],H).",
            "sonority(2.25,n).",
            "p([a|T]).",
        ] {
            let c = parse_clause(src).unwrap();
            assert_eq!(c.to_string(), *src);
            let reparsed = parse_clause(&c.to_string()).unwrap();
            assert_eq!(reparsed, c);
        }
    }

    #[test]
    fn numeric_constants_lex_as_single_tokens() {
        let t = parse_term("2.25").unwrap();
        assert_eq!(t, Term::constant("2.25"));
        let l = parse_term("[2,2.25,4]").unwrap();
        assert_eq!(l.as_list().unwrap().len(), 3);
    }

    #[test]
    fn error_reports_line() {
        let err = parse_program("p(a).\nq(b) :- .\n").unwrap_err();
        assert_eq!(err.line, 2);
    }

    #[test]
    fn unterminated_clause_is_an_error() {
        assert!(parse_program("p(a)").is_err());
    }
}
