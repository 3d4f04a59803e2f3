//! Shared tokenizer for the policy and rulebook text formats.
//!
//! Both formats are a small extension of JSON: bare identifiers (possibly
//! namespaced, e.g. `spl:AnyData` or `Art12-22_SubjectRights`) are allowed
//! wherever JSON would demand a string, and integers may carry a duration
//! unit suffix (`365`, `1year`, `30d`). `#` starts a comment that runs to the
//! end of the line.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

/// Source position, 1-based, for diagnostics.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Pos {
    pub line: u32,
    pub col: u32,
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}, column {}", self.line, self.col)
    }
}

/// Parse failure with source location.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub pos: Pos,
    pub message: String,
}

impl ParseError {
    pub fn new(pos: Pos, message: impl Into<String>) -> Self {
        ParseError {
            pos,
            message: message.into(),
        }
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.pos, self.message)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Token {
    LBrace,
    RBrace,
    LBracket,
    RBracket,
    LParen,
    RParen,
    Comma,
    Colon,
    Star,
    /// Bare identifier: letters, digits, `_`, `:`, `-`, `.`.
    Word(String),
    /// Double-quoted string.
    Str(String),
    /// Bare non-negative integer.
    Int(u64),
    /// Integer with a trailing unit, e.g. `1year` or `365d`.
    UnitInt(u64, String),
}

impl fmt::Display for Token {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Token::LBrace => write!(f, "'{{'"),
            Token::RBrace => write!(f, "'}}'"),
            Token::LBracket => write!(f, "'['"),
            Token::RBracket => write!(f, "']'"),
            Token::LParen => write!(f, "'('"),
            Token::RParen => write!(f, "')'"),
            Token::Comma => write!(f, "','"),
            Token::Colon => write!(f, "':'"),
            Token::Star => write!(f, "'*'"),
            Token::Word(w) => write!(f, "'{w}'"),
            Token::Str(s) => write!(f, "\"{s}\""),
            Token::Int(n) => write!(f, "'{n}'"),
            Token::UnitInt(n, u) => write!(f, "'{n}{u}'"),
        }
    }
}

fn is_word_start(c: char) -> bool {
    c.is_ascii_alphabetic() || c == '_'
}

fn is_word_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || matches!(c, '_' | '-' | '.')
}

/// Tokenize `src` into a positioned token list.
///
/// A `:` joins a word only when a word character follows immediately
/// (`spl:AnyData`); otherwise it is the key separator (`has_data: X`).
pub fn tokenize(src: &str) -> Result<Vec<(Token, Pos)>, ParseError> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let mut i = 0usize;
    let mut line: u32 = 1;
    let mut col: u32 = 1;

    macro_rules! bump {
        () => {{
            let c = chars.get(i).copied();
            if let Some(c) = c {
                i += 1;
                if c == '\n' {
                    line += 1;
                    col = 1;
                } else {
                    col += 1;
                }
            }
            c
        }};
    }

    while let Some(&c) = chars.get(i) {
        let pos = Pos { line, col };
        match c {
            ' ' | '\t' | '\r' | '\n' => {
                bump!();
            }
            '#' => {
                while let Some(&c) = chars.get(i) {
                    if c == '\n' {
                        break;
                    }
                    bump!();
                }
            }
            '{' => {
                bump!();
                out.push((Token::LBrace, pos));
            }
            '}' => {
                bump!();
                out.push((Token::RBrace, pos));
            }
            '[' => {
                bump!();
                out.push((Token::LBracket, pos));
            }
            ']' => {
                bump!();
                out.push((Token::RBracket, pos));
            }
            '(' => {
                bump!();
                out.push((Token::LParen, pos));
            }
            ')' => {
                bump!();
                out.push((Token::RParen, pos));
            }
            ',' => {
                bump!();
                out.push((Token::Comma, pos));
            }
            ':' => {
                bump!();
                out.push((Token::Colon, pos));
            }
            '*' => {
                bump!();
                out.push((Token::Star, pos));
            }
            '"' => {
                bump!();
                let mut s = String::new();
                loop {
                    match bump!() {
                        None => return Err(ParseError::new(pos, "unterminated string")),
                        Some('"') => break,
                        Some('\\') => match bump!() {
                            Some('"') => s.push('"'),
                            Some('\\') => s.push('\\'),
                            Some('n') => s.push('\n'),
                            Some('t') => s.push('\t'),
                            Some(other) => {
                                return Err(ParseError::new(
                                    Pos { line, col },
                                    alloc::format!("unsupported escape '\\{}'", other),
                                ))
                            }
                            None => return Err(ParseError::new(pos, "unterminated string")),
                        },
                        Some(other) => s.push(other),
                    }
                }
                out.push((Token::Str(s), pos));
            }
            d if d.is_ascii_digit() => {
                let mut value: u64 = 0;
                while let Some(&c) = chars.get(i) {
                    if let Some(digit) = c.to_digit(10) {
                        bump!();
                        value = value
                            .checked_mul(10)
                            .and_then(|v| v.checked_add(u64::from(digit)))
                            .ok_or_else(|| ParseError::new(pos, "integer literal too large"))?;
                    } else {
                        break;
                    }
                }
                let mut unit = String::new();
                while let Some(&c) = chars.get(i) {
                    if c.is_ascii_alphabetic() {
                        bump!();
                        unit.push(c);
                    } else {
                        break;
                    }
                }
                if unit.is_empty() {
                    out.push((Token::Int(value), pos));
                } else {
                    out.push((Token::UnitInt(value, unit), pos));
                }
            }
            w if is_word_start(w) => {
                let mut word = String::new();
                while let Some(&c) = chars.get(i) {
                    if is_word_char(c) {
                        bump!();
                        word.push(c);
                    } else if c == ':'
                        && chars.get(i + 1).map(|&n| is_word_char(n)).unwrap_or(false)
                    {
                        bump!();
                        word.push(':');
                    } else {
                        break;
                    }
                }
                out.push((Token::Word(word), pos));
            }
            other => {
                return Err(ParseError::new(
                    pos,
                    alloc::format!("unexpected character '{}'", other),
                ))
            }
        }
    }
    Ok(out)
}

/// Token cursor with lookahead used by the recursive-descent parsers.
pub struct TokenStream {
    tokens: Vec<(Token, Pos)>,
    index: usize,
    end: Pos,
}

impl TokenStream {
    pub fn new(src: &str) -> Result<Self, ParseError> {
        let tokens = tokenize(src)?;
        let end = tokens
            .last()
            .map(|(_, p)| Pos {
                line: p.line,
                col: p.col + 1,
            })
            .unwrap_or(Pos { line: 1, col: 1 });
        Ok(TokenStream {
            tokens,
            index: 0,
            end,
        })
    }

    pub fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.index).map(|(t, _)| t)
    }

    pub fn pos(&self) -> Pos {
        self.tokens
            .get(self.index)
            .map(|(_, p)| *p)
            .unwrap_or(self.end)
    }

    pub fn advance(&mut self) -> Option<Token> {
        let t = self.tokens.get(self.index).map(|(t, _)| t.clone());
        if t.is_some() {
            self.index += 1;
        }
        t
    }

    pub fn at_end(&self) -> bool {
        self.index >= self.tokens.len()
    }

    pub fn error(&self, message: impl Into<String>) -> ParseError {
        ParseError::new(self.pos(), message)
    }

    /// Consume the next token if it equals `tok`.
    pub fn eat(&mut self, tok: &Token) -> bool {
        if self.peek() == Some(tok) {
            self.index += 1;
            true
        } else {
            false
        }
    }

    pub fn expect(&mut self, tok: &Token) -> Result<(), ParseError> {
        if self.eat(tok) {
            Ok(())
        } else {
            match self.peek() {
                Some(found) => Err(self.error(alloc::format!("expected {tok}, found {found}"))),
                None => Err(self.error(alloc::format!("expected {tok}, found end of input"))),
            }
        }
    }

    /// Expect a bare word or quoted string and return its text.
    pub fn expect_name(&mut self, what: &str) -> Result<String, ParseError> {
        match self.advance() {
            Some(Token::Word(w)) => Ok(w),
            Some(Token::Str(s)) => Ok(s),
            Some(found) => {
                self.index -= 1;
                Err(self.error(alloc::format!("expected {what}, found {found}")))
            }
            None => Err(self.error(alloc::format!("expected {what}, found end of input"))),
        }
    }
}
