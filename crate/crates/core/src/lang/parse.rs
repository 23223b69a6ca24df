//! Recursive-descent parser for the textual process syntax.
//!
//! ```text
//! process  := "0" | process "||" process | "new" ident "." process
//!           | ident "->" ident | ident "=>" "[" identlist? "]"
//!           | "?" ident | "+" ident | "*" ident | "(" process ")"
//! ```
//!
//! `||` binds weakest and `new` extends to the end of the enclosing group.
//! Chains of `||` (including parenthesized ones) are flattened into a single
//! n-ary `Par`, so grouping never shows up in the AST.

use thiserror::Error;

use super::ast::{Channel, Process};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("syntax error at {line}:{column}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    ParBar,
    Arrow,
    FatArrow,
    LBracket,
    RBracket,
    Comma,
    Dot,
    Question,
    Plus,
    Star,
    LParen,
    RParen,
    Eof,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::ParBar => "`||`".into(),
            Tok::Arrow => "`->`".into(),
            Tok::FatArrow => "`=>`".into(),
            Tok::LBracket => "`[`".into(),
            Tok::RBracket => "`]`".into(),
            Tok::Comma => "`,`".into(),
            Tok::Dot => "`.`".into(),
            Tok::Question => "`?`".into(),
            Tok::Plus => "`+`".into(),
            Tok::Star => "`*`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::Eof => "end of input".into(),
        }
    }
}

#[derive(Debug, Clone)]
struct Spanned {
    tok: Tok,
    line: usize,
    column: usize,
}

fn lex(text: &str) -> Result<Vec<Spanned>, ParseError> {
    let mut out = Vec::new();
    let chars: Vec<char> = text.chars().collect();
    let (mut i, mut line, mut col) = (0usize, 1usize, 1usize);
    while i < chars.len() {
        let c = chars[i];
        let (start_line, start_col) = (line, col);
        let push = |tok: Tok, out: &mut Vec<Spanned>| {
            out.push(Spanned { tok, line: start_line, column: start_col })
        };
        match c {
            '\n' => {
                i += 1;
                line += 1;
                col = 1;
                continue;
            }
            c if c.is_whitespace() => {
                i += 1;
                col += 1;
                continue;
            }
            '#' => {
                while i < chars.len() && chars[i] != '\n' {
                    i += 1;
                }
                continue;
            }
            c if c.is_ascii_alphanumeric() || c == '_' => {
                let start = i;
                while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                let word: String = chars[start..i].iter().collect();
                col += i - start;
                push(Tok::Ident(word), &mut out);
                continue;
            }
            _ => {}
        }
        let two: Option<Tok> = match (c, chars.get(i + 1)) {
            ('|', Some('|')) => Some(Tok::ParBar),
            ('-', Some('>')) => Some(Tok::Arrow),
            ('=', Some('>')) => Some(Tok::FatArrow),
            _ => None,
        };
        if let Some(tok) = two {
            push(tok, &mut out);
            i += 2;
            col += 2;
            continue;
        }
        let one = match c {
            '[' => Tok::LBracket,
            ']' => Tok::RBracket,
            ',' => Tok::Comma,
            '.' => Tok::Dot,
            '?' => Tok::Question,
            '+' => Tok::Plus,
            '*' => Tok::Star,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            other => {
                return Err(ParseError {
                    line,
                    column: col,
                    message: format!("unexpected character `{other}`"),
                })
            }
        };
        push(one, &mut out);
        i += 1;
        col += 1;
    }
    out.push(Spanned { tok: Tok::Eof, line, column: col });
    Ok(out)
}

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn peek_at(&self, offset: usize) -> &Tok {
        let idx = (self.pos + offset).min(self.toks.len() - 1);
        &self.toks[idx].tok
    }

    fn bump(&mut self) -> Tok {
        let tok = self.toks[self.pos].tok.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        tok
    }

    fn error(&self, message: impl Into<String>) -> ParseError {
        let s = &self.toks[self.pos];
        ParseError { line: s.line, column: s.column, message: message.into() }
    }

    fn expect(&mut self, want: Tok) -> Result<(), ParseError> {
        if *self.peek() == want {
            self.bump();
            Ok(())
        } else {
            Err(self.error(format!("expected {}, found {}", want.describe(), self.peek().describe())))
        }
    }

    fn ident(&mut self) -> Result<Channel, ParseError> {
        match self.peek().clone() {
            Tok::Ident(name) if name != "new" => {
                self.bump();
                Ok(Channel::new(name))
            }
            other => Err(self.error(format!("expected channel name, found {}", other.describe()))),
        }
    }

    fn par(&mut self) -> Result<Process, ParseError> {
        let mut children = Vec::new();
        loop {
            let unit = self.unit()?;
            match unit {
                Process::Par(inner) => children.extend(inner),
                other => children.push(other),
            }
            if *self.peek() == Tok::ParBar {
                self.bump();
            } else {
                break;
            }
        }
        if children.len() == 1 {
            Ok(children.pop().expect("one child"))
        } else {
            Ok(Process::Par(children))
        }
    }

    fn unit(&mut self) -> Result<Process, ParseError> {
        match self.peek().clone() {
            Tok::Ident(word) if word == "new" => {
                self.bump();
                let c = self.ident()?;
                self.expect(Tok::Dot)?;
                let body = self.par()?;
                Ok(Process::New(c, Box::new(body)))
            }
            Tok::Ident(word)
                if word == "0" && !matches!(self.peek_at(1), Tok::Arrow | Tok::FatArrow) =>
            {
                self.bump();
                Ok(Process::Stop)
            }
            Tok::Ident(_) => {
                let source = self.ident()?;
                match self.bump() {
                    Tok::Arrow => Ok(Process::Bridge(source, self.ident()?)),
                    Tok::FatArrow => {
                        self.expect(Tok::LBracket)?;
                        let mut targets = Vec::new();
                        if *self.peek() != Tok::RBracket {
                            targets.push(self.ident()?);
                            while *self.peek() == Tok::Comma {
                                self.bump();
                                targets.push(self.ident()?);
                            }
                        }
                        self.expect(Tok::RBracket)?;
                        Ok(Process::Distribute(source, targets))
                    }
                    _ => {
                        self.pos -= 1;
                        Err(self.error(format!(
                            "expected `->` or `=>` after channel, found {}",
                            self.peek().describe()
                        )))
                    }
                }
            }
            Tok::Question => {
                self.bump();
                Ok(Process::Lose(self.ident()?))
            }
            Tok::Plus => {
                self.bump();
                Ok(Process::Dup(self.ident()?))
            }
            Tok::Star => {
                self.bump();
                Ok(Process::Duplose(self.ident()?))
            }
            Tok::LParen => {
                self.bump();
                let inner = self.par()?;
                self.expect(Tok::RParen)?;
                Ok(inner)
            }
            other => Err(self.error(format!("expected a process, found {}", other.describe()))),
        }
    }
}

/// Parses process text. Channels that are not restricted are free; no
/// binding errors are raised.
pub fn parse(text: &str) -> Result<Process, ParseError> {
    let toks = lex(text)?;
    let mut parser = Parser { toks, pos: 0 };
    let p = parser.par()?;
    if *parser.peek() != Tok::Eof {
        return Err(parser.error(format!("unexpected {}", parser.peek().describe())));
    }
    Ok(p)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_stop() {
        assert_eq!(parse("0").unwrap(), Process::Stop);
    }

    #[test]
    fn parses_bridge() {
        assert_eq!(parse("s0 -> m").unwrap(), Process::bridge("s0", "m"));
    }

    #[test]
    fn parses_restricted_medium() {
        let p = parse("new m. (*m || s0 -> m || m -> r0)").unwrap();
        assert_eq!(
            p,
            Process::new_channel(
                "m",
                Process::par([
                    Process::duplose("m"),
                    Process::bridge("s0", "m"),
                    Process::bridge("m", "r0"),
                ])
            )
        );
    }

    #[test]
    fn new_extends_to_end_of_group() {
        let a = parse("new m. *m || s0 -> m").unwrap();
        let b = parse("new m. (*m || s0 -> m)").unwrap();
        assert_eq!(a, b);
        let c = parse("(new m. *m) || s0 -> m").unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn grouping_is_invisible() {
        let a = parse("(a -> b || c -> d) || e -> f").unwrap();
        let b = parse("a->b||(c->d||e->f)").unwrap();
        assert_eq!(a, b);
        assert_eq!(parse("((a -> b))").unwrap(), Process::bridge("a", "b"));
    }

    #[test]
    fn distributor_forms() {
        assert_eq!(parse("a => []").unwrap(), Process::distribute("a", Vec::<Channel>::new()));
        assert_eq!(parse("a => [b, c]").unwrap(), Process::distribute("a", ["b", "c"]));
        assert_eq!(parse("0 -> a").unwrap(), Process::bridge("0", "a"));
    }

    #[test]
    fn comments_and_sugar() {
        let p = parse("# header\n?a || +b # trailing\n|| *c").unwrap();
        assert_eq!(p, Process::par([Process::lose("a"), Process::dup("b"), Process::duplose("c")]));
    }

    #[test]
    fn reports_position() {
        let err = parse("a -> b ||\n  c => [d,").unwrap_err();
        assert_eq!((err.line, err.column), (2, 11));
        let err = parse("a b").unwrap_err();
        assert_eq!((err.line, err.column), (1, 3));
        assert!(parse("a -> b )").is_err());
        assert!(parse("a $ b").is_err());
        assert!(parse("new new. 0").is_err());
    }
}
