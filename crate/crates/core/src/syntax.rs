//! Character cursor and lexical helpers shared by the Turtle, rule and query
//! parsers.

use std::fmt;

use thiserror::Error;

use crate::graph::{is_valid_prefix_label, PrefixMap};
use crate::ns;
use crate::term::{Iri, Literal, Variable};

/// A syntax error with a 1-based position inside the document.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
    /// The offending token text; empty at end of input.
    pub token: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: {}", self.line, self.column, self.message)?;
        if !self.token.is_empty() {
            write!(f, " (found {:?})", self.token)?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) struct Position {
    pub offset: usize,
    pub line: usize,
    pub column: usize,
}

#[derive(Debug, Clone)]
pub(crate) struct Cursor<'a> {
    text: &'a str,
    pos: Position,
}

impl<'a> Cursor<'a> {
    pub fn new(text: &'a str) -> Self {
        Cursor {
            text,
            pos: Position {
                offset: 0,
                line: 1,
                column: 1,
            },
        }
    }

    pub fn position(&self) -> Position {
        self.pos
    }

    pub fn rest(&self) -> &'a str {
        &self.text[self.pos.offset..]
    }

    pub fn is_eof(&self) -> bool {
        self.pos.offset >= self.text.len()
    }

    pub fn peek(&self) -> Option<char> {
        self.rest().chars().next()
    }

    pub fn peek_nth(&self, n: usize) -> Option<char> {
        self.rest().chars().nth(n)
    }

    pub fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.pos.offset += c.len_utf8();
        if c == '\n' {
            self.pos.line += 1;
            self.pos.column = 1;
        } else {
            self.pos.column += 1;
        }
        Some(c)
    }

    pub fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.bump();
            true
        } else {
            false
        }
    }

    pub fn starts_with(&self, s: &str) -> bool {
        self.rest().starts_with(s)
    }

    /// Consumes `word` case-insensitively when it is not followed by a name character.
    pub fn eat_keyword(&mut self, word: &str) -> bool {
        let rest = self.rest();
        if rest.len() < word.len() || !rest.is_char_boundary(word.len()) || !rest[..word.len()].eq_ignore_ascii_case(word) {
            return false;
        }
        if rest[word.len()..].chars().next().is_some_and(is_name_char) {
            return false;
        }
        for _ in word.chars() {
            self.bump();
        }
        true
    }

    /// Skips whitespace and `#` comments; reports whether a line break was crossed.
    pub fn skip_trivia(&mut self) -> bool {
        let mut newline = false;
        loop {
            match self.peek() {
                Some(c) if c.is_whitespace() => {
                    newline |= c == '\n';
                    self.bump();
                }
                Some('#') => {
                    while let Some(c) = self.peek() {
                        if c == '\n' {
                            break;
                        }
                        self.bump();
                    }
                }
                _ => return newline,
            }
        }
    }

    /// Skips spaces, tabs and comments but stops before a line break.
    pub fn skip_inline_trivia(&mut self) {
        loop {
            match self.peek() {
                Some(c) if c.is_whitespace() && c != '\n' => {
                    self.bump();
                }
                Some('#') => {
                    while let Some(c) = self.peek() {
                        if c == '\n' {
                            break;
                        }
                        self.bump();
                    }
                }
                _ => return,
            }
        }
    }

    /// Text of the token starting at the cursor, for diagnostics.
    pub fn current_token(&self) -> String {
        let rest = self.rest();
        let Some(first) = rest.chars().next() else {
            return String::new();
        };
        if !is_name_char(first) {
            return first.to_string();
        }
        rest.chars().take_while(|c| is_name_char(*c) || *c == ':').collect()
    }

    pub fn error_at(&self, at: Position, message: impl Into<String>, token: impl Into<String>) -> ParseError {
        ParseError {
            line: at.line,
            column: at.column,
            message: message.into(),
            token: token.into(),
        }
    }

    pub fn error(&self, message: impl Into<String>) -> ParseError {
        self.error_at(self.pos, message, self.current_token())
    }

    pub fn expect(&mut self, c: char, what: &str) -> Result<(), ParseError> {
        if self.eat(c) {
            Ok(())
        } else if self.is_eof() {
            Err(self.error(format!("unexpected end of input, expected {what}")))
        } else {
            Err(self.error(format!("expected {what}")))
        }
    }

    /// Reads `<...>` and requires an absolute IRI.
    pub fn read_iriref(&mut self) -> Result<Iri, ParseError> {
        let start = self.pos;
        self.expect('<', "'<'")?;
        let mut text = String::new();
        loop {
            match self.bump() {
                Some('>') => break,
                Some('\\') => text.push(self.read_unicode_escape(start)?),
                Some(c) if c.is_whitespace() || matches!(c, '<' | '"' | '{' | '}' | '|' | '^' | '`') => {
                    return Err(self.error_at(start, "invalid character in IRI", c.to_string()));
                }
                Some(c) => text.push(c),
                None => return Err(self.error_at(self.pos, "unterminated IRI", "")),
            }
        }
        if !text.contains(':') {
            return Err(self.error_at(start, "relative IRIs are not supported", format!("<{text}>")));
        }
        Iri::new(&text).map_err(|e| self.error_at(start, e.to_string(), format!("<{text}>")))
    }

    fn read_unicode_escape(&mut self, start: Position) -> Result<char, ParseError> {
        let digits = match self.bump() {
            Some('u') => 4,
            Some('U') => 8,
            other => {
                return Err(self.error_at(start, "invalid escape sequence", other.map(String::from).unwrap_or_default()));
            }
        };
        let mut hex = String::new();
        for _ in 0..digits {
            match self.bump() {
                Some(c) if c.is_ascii_hexdigit() => hex.push(c),
                _ => return Err(self.error_at(start, "invalid unicode escape", hex)),
            }
        }
        u32::from_str_radix(&hex, 16)
            .ok()
            .and_then(char::from_u32)
            .ok_or_else(|| self.error_at(start, "invalid unicode code point", hex))
    }

    /// Reads `prefix:local` and returns both halves. The local part may be empty.
    pub fn read_pname(&mut self) -> Result<(String, String), ParseError> {
        let start = self.pos;
        let mut prefix = String::new();
        while let Some(c) = self.peek() {
            if c.is_ascii_alphanumeric() || c == '_' || c == '-' {
                prefix.push(c);
                self.bump();
            } else {
                break;
            }
        }
        if !self.eat(':') {
            let token = self.current_token();
            return Err(self.error_at(start, "expected a prefixed name", if prefix.is_empty() { token } else { prefix }));
        }
        if !is_valid_prefix_label(&prefix) {
            return Err(self.error_at(start, "invalid prefix label", prefix));
        }
        let mut local = String::new();
        loop {
            match self.peek() {
                Some(c) if c.is_ascii_alphanumeric() || c == '_' || c == '-' => {
                    local.push(c);
                    self.bump();
                }
                // A dot belongs to the name only when a name character follows.
                Some('.') if !local.is_empty() && self.peek_nth(1).is_some_and(|c| c.is_ascii_alphanumeric() || c == '_' || c == '-') => {
                    local.push('.');
                    self.bump();
                }
                _ => break,
            }
        }
        if local.starts_with('-') {
            return Err(self.error_at(start, "invalid local name", format!("{prefix}:{local}")));
        }
        Ok((prefix, local))
    }

    /// Reads a prefixed name and expands it. Unbound prefixes are parse errors.
    pub fn read_prefixed_iri(&mut self, prefixes: &PrefixMap) -> Result<Iri, ParseError> {
        let start = self.pos;
        let (prefix, local) = self.read_pname()?;
        let ns = prefixes
            .get(&prefix)
            .ok_or_else(|| self.error_at(start, format!("unbound prefix {prefix:?}"), format!("{prefix}:{local}")))?;
        Iri::new(format!("{}{local}", ns.as_str())).map_err(|e| self.error_at(start, e.to_string(), format!("{prefix}:{local}")))
    }

    /// Reads a single-line quoted string (`"..."` or `'...'`) with escapes.
    pub fn read_string(&mut self) -> Result<String, ParseError> {
        let start = self.pos;
        let quote = match self.peek() {
            Some(q @ ('"' | '\'')) => q,
            _ => return Err(self.error("expected a string literal")),
        };
        let triple: String = std::iter::repeat_n(quote, 3).collect();
        if self.starts_with(&triple) {
            return Err(self.error_at(start, "long string literals are not supported", triple));
        }
        self.bump();
        let mut text = String::new();
        loop {
            match self.bump() {
                Some(c) if c == quote => return Ok(text),
                Some('\\') => {
                    let c = match self.peek() {
                        Some('t') => '\t',
                        Some('n') => '\n',
                        Some('r') => '\r',
                        Some('b') => '\u{8}',
                        Some('f') => '\u{c}',
                        Some('"') => '"',
                        Some('\'') => '\'',
                        Some('\\') => '\\',
                        Some('u' | 'U') => {
                            text.push(self.read_unicode_escape(start)?);
                            continue;
                        }
                        other => {
                            return Err(self.error_at(self.pos, "invalid escape sequence", other.map(String::from).unwrap_or_default()));
                        }
                    };
                    self.bump();
                    text.push(c);
                }
                Some('\n' | '\r') => return Err(self.error_at(start, "line break in string literal", "")),
                Some(c) => text.push(c),
                None => return Err(self.error_at(self.pos, "unterminated string literal", "")),
            }
        }
    }

    pub fn read_language_tag(&mut self) -> Result<String, ParseError> {
        let start = self.pos;
        self.expect('@', "'@'")?;
        let mut tag = String::new();
        while let Some(c) = self.peek() {
            if c.is_ascii_alphanumeric() || c == '-' {
                tag.push(c);
                self.bump();
            } else {
                break;
            }
        }
        if tag.is_empty() || !tag.starts_with(|c: char| c.is_ascii_alphabetic()) {
            return Err(self.error_at(start, "invalid language tag", tag));
        }
        Ok(tag)
    }

    /// Reads an integer or decimal shorthand literal, keeping its exact text.
    pub fn read_number(&mut self) -> Result<Literal, ParseError> {
        let start = self.pos;
        let mut text = String::new();
        if let Some(sign @ ('+' | '-')) = self.peek() {
            text.push(sign);
            self.bump();
        }
        while let Some(c) = self.peek().filter(char::is_ascii_digit) {
            text.push(c);
            self.bump();
        }
        let mut datatype = ns::xsd::integer();
        if self.peek() == Some('.') && self.peek_nth(1).is_some_and(|c| c.is_ascii_digit()) {
            text.push('.');
            self.bump();
            while let Some(c) = self.peek().filter(char::is_ascii_digit) {
                text.push(c);
                self.bump();
            }
            datatype = ns::xsd::decimal();
        }
        if !text.chars().any(|c| c.is_ascii_digit()) {
            return Err(self.error_at(start, "expected a number", text));
        }
        if matches!(self.peek(), Some('e' | 'E')) {
            return Err(self.error_at(start, "exponent (double) literals are not supported", text));
        }
        Ok(Literal::new_typed(text, datatype))
    }

    /// Reads `?name` or `$name`.
    pub fn read_variable(&mut self) -> Result<Variable, ParseError> {
        let start = self.pos;
        if !(self.eat('?') || self.eat('$')) {
            return Err(self.error("expected a variable"));
        }
        let mut name = String::new();
        while let Some(c) = self.peek().filter(|c| c.is_alphanumeric() || *c == '_') {
            name.push(c);
            self.bump();
        }
        Variable::new(&name).map_err(|_| self.error_at(start, "empty variable name", format!("?{name}")))
    }
}

pub(crate) fn is_name_char(c: char) -> bool {
    c.is_alphanumeric() || c == '_' || c == '-'
}
