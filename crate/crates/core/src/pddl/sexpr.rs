//! Positioned s-expression reader shared by the domain, problem and plan
//! parsers.

use std::fmt;

use serde::Serialize;

use super::{ParseError, ParseErrorKind};

/// Nesting deeper than this is rejected instead of recursing further.
pub const MAX_DEPTH: usize = 64;

/// 1-based line and column (in characters).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Pos {
    pub line: usize,
    pub col: usize,
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Sexpr {
    Atom(String, Pos),
    List(Vec<Sexpr>, Pos),
}

impl Sexpr {
    pub fn pos(&self) -> Pos {
        match self {
            Sexpr::Atom(_, pos) | Sexpr::List(_, pos) => *pos,
        }
    }

    pub fn as_atom(&self) -> Option<&str> {
        match self {
            Sexpr::Atom(s, _) => Some(s),
            Sexpr::List(..) => None,
        }
    }

    pub fn as_list(&self) -> Option<&[Sexpr]> {
        match self {
            Sexpr::List(items, _) => Some(items),
            Sexpr::Atom(..) => None,
        }
    }

    /// Lower-cased atom text, if this is an atom.
    pub fn keyword(&self) -> Option<String> {
        self.as_atom().map(str::to_lowercase)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Token {
    Open,
    Close,
    Word(String),
}

struct Lexer<'a> {
    chars: std::iter::Peekable<std::str::Chars<'a>>,
    line: usize,
    col: usize,
}

impl<'a> Lexer<'a> {
    fn new(text: &'a str) -> Self {
        Lexer {
            chars: text.chars().peekable(),
            line: 1,
            col: 1,
        }
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.chars.next()?;
        if c == '\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(c)
    }

    fn pos(&self) -> Pos {
        Pos {
            line: self.line,
            col: self.col,
        }
    }

    fn next_token(&mut self) -> Option<(Token, Pos)> {
        loop {
            let c = *self.chars.peek()?;
            if c.is_whitespace() {
                self.bump();
            } else if c == ';' {
                while let Some(&c) = self.chars.peek() {
                    if c == '\n' {
                        break;
                    }
                    self.bump();
                }
            } else {
                break;
            }
        }
        let pos = self.pos();
        match self.bump()? {
            '(' => Some((Token::Open, pos)),
            ')' => Some((Token::Close, pos)),
            first => {
                let mut word = String::from(first);
                while let Some(&c) = self.chars.peek() {
                    if c.is_whitespace() || c == '(' || c == ')' || c == ';' {
                        break;
                    }
                    word.push(c);
                    self.bump();
                }
                Some((Token::Word(word), pos))
            }
        }
    }
}

/// Reads every top-level expression in `text`.
pub fn read_all(text: &str) -> Result<Vec<Sexpr>, ParseError> {
    let mut lexer = Lexer::new(text);
    // Explicit stack of open lists so deep nesting cannot overflow.
    let mut stack: Vec<(Vec<Sexpr>, Pos)> = Vec::new();
    let mut top = Vec::new();
    while let Some((token, pos)) = lexer.next_token() {
        match token {
            Token::Open => {
                if stack.len() >= MAX_DEPTH {
                    return Err(ParseError::new(pos, ParseErrorKind::TooDeep(MAX_DEPTH)));
                }
                stack.push((Vec::new(), pos));
            }
            Token::Close => {
                let (items, open) = stack.pop().ok_or_else(|| ParseError::syntax(pos, "unexpected `)`"))?;
                let list = Sexpr::List(items, open);
                match stack.last_mut() {
                    Some((parent, _)) => parent.push(list),
                    None => top.push(list),
                }
            }
            Token::Word(word) => {
                let atom = Sexpr::Atom(word, pos);
                match stack.last_mut() {
                    Some((parent, _)) => parent.push(atom),
                    None => top.push(atom),
                }
            }
        }
    }
    if let Some((_, open)) = stack.last() {
        return Err(ParseError::syntax(*open, "unclosed `(`"));
    }
    Ok(top)
}

/// Reads exactly one top-level list.
pub fn read_one(text: &str) -> Result<Sexpr, ParseError> {
    let mut all = read_all(text)?;
    match all.len() {
        0 => Err(ParseError::syntax(Pos { line: 1, col: 1 }, "empty input")),
        1 => Ok(all.pop().unwrap()),
        _ => Err(ParseError::syntax(all[1].pos(), "trailing input after the definition")),
    }
}
