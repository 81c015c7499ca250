//! Tolerant tokenizer for Java-syntax source text.
//!
//! Comments and whitespace are dropped. `<` and `>` are always emitted as
//! single-character tokens so that nested generic closers (`>>`) can be
//! balanced without knowing whether the context is a type or an expression.

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TokenKind {
    Ident,
    Literal,
    Punct,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Token<'a> {
    pub kind: TokenKind,
    pub text: &'a str,
    pub start: usize,
    pub end: usize,
    pub line: u32,
}

impl Token<'_> {
    pub fn is(&self, s: &str) -> bool {
        self.text == s
    }

    pub fn is_ident(&self) -> bool {
        self.kind == TokenKind::Ident
    }

    pub fn is_punct(&self, s: &str) -> bool {
        self.kind == TokenKind::Punct && self.text == s
    }
}

pub struct Lexed<'a> {
    pub tokens: Vec<Token<'a>>,
    /// Set when a comment, string or char literal ran off the end of input.
    pub unterminated: bool,
}

const MULTI_PUNCT: &[&str] = &[
    "...", "->", "::", "++", "--", "&&", "||", "==", "!=", "<=", "+=", "-=", "*=", "/=", "%=",
    "&=", "|=", "^=",
];

pub fn tokenize(src: &str) -> Lexed<'_> {
    let bytes = src.as_bytes();
    let mut tokens = Vec::new();
    let mut unterminated = false;
    let mut i = 0;
    let mut line: u32 = 1;

    while i < bytes.len() {
        let c = bytes[i];
        match c {
            b'\n' => {
                line += 1;
                i += 1;
            }
            b' ' | b'\t' | b'\r' | 0x0c => i += 1,
            b'/' if bytes.get(i + 1) == Some(&b'/') => {
                while i < bytes.len() && bytes[i] != b'\n' {
                    i += 1;
                }
            }
            b'/' if bytes.get(i + 1) == Some(&b'*') => {
                i += 2;
                loop {
                    if i + 1 >= bytes.len() {
                        unterminated = true;
                        i = bytes.len();
                        break;
                    }
                    if bytes[i] == b'*' && bytes[i + 1] == b'/' {
                        i += 2;
                        break;
                    }
                    if bytes[i] == b'\n' {
                        line += 1;
                    }
                    i += 1;
                }
            }
            b'"' | b'\'' => {
                let start = i;
                let start_line = line;
                let (end, lines, ok) = scan_quoted(bytes, i);
                unterminated |= !ok;
                line += lines;
                i = end;
                tokens.push(Token {
                    kind: TokenKind::Literal,
                    text: &src[start..end],
                    start,
                    end,
                    line: start_line,
                });
            }
            b'0'..=b'9' => {
                let start = i;
                i = scan_number(bytes, i);
                tokens.push(Token { kind: TokenKind::Literal, text: &src[start..i], start, end: i, line });
            }
            b'.' if bytes.get(i + 1).is_some_and(u8::is_ascii_digit) => {
                let start = i;
                i = scan_number(bytes, i);
                tokens.push(Token { kind: TokenKind::Literal, text: &src[start..i], start, end: i, line });
            }
            _ if is_ident_start(src, i) => {
                let start = i;
                i = scan_ident(src, i);
                tokens.push(Token { kind: TokenKind::Ident, text: &src[start..i], start, end: i, line });
            }
            _ if c.is_ascii() => {
                let start = i;
                let rest = &src[i..];
                let len = MULTI_PUNCT
                    .iter()
                    .find(|p| rest.starts_with(**p))
                    .map_or(1, |p| p.len());
                i += len;
                tokens.push(Token { kind: TokenKind::Punct, text: &src[start..i], start, end: i, line });
            }
            _ => {
                // stray non-ASCII, non-identifier character
                let ch_len = src[i..].chars().next().map_or(1, char::len_utf8);
                i += ch_len;
            }
        }
    }
    Lexed { tokens, unterminated }
}

fn is_ident_start(src: &str, i: usize) -> bool {
    src[i..]
        .chars()
        .next()
        .is_some_and(|ch| ch == '_' || ch == '$' || ch.is_alphabetic())
}

fn scan_ident(src: &str, mut i: usize) -> usize {
    for ch in src[i..].chars() {
        if ch == '_' || ch == '$' || ch.is_alphanumeric() {
            i += ch.len_utf8();
        } else {
            break;
        }
    }
    i
}

fn scan_number(bytes: &[u8], mut i: usize) -> usize {
    while i < bytes.len() {
        let c = bytes[i];
        if c.is_ascii_alphanumeric() || c == b'_' || c == b'.' {
            // stop before `..` or a member access like `1.f` is not valid java anyway
            if c == b'.' && bytes.get(i + 1) == Some(&b'.') {
                break;
            }
            i += 1;
        } else if (c == b'+' || c == b'-') && matches!(bytes[i - 1], b'e' | b'E' | b'p' | b'P') {
            let hex = bytes[..i].iter().rev().take_while(|b| b.is_ascii_alphanumeric() || **b == b'.' || **b == b'_').any(|b| *b == b'x' || *b == b'X');
            if matches!(bytes[i - 1], b'e' | b'E') && hex {
                break;
            }
            i += 1;
        } else {
            break;
        }
    }
    i
}

/// Returns (end offset, newlines consumed, terminated).
fn scan_quoted(bytes: &[u8], start: usize) -> (usize, u32, bool) {
    let quote = bytes[start];
    if quote == b'"' && bytes[start..].starts_with(b"\"\"\"") {
        let mut i = start + 3;
        let mut lines = 0;
        while i < bytes.len() {
            match bytes[i] {
                b'\\' => i += 2,
                b'"' if bytes[i..].starts_with(b"\"\"\"") => return (i + 3, lines, true),
                b'\n' => {
                    lines += 1;
                    i += 1;
                }
                _ => i += 1,
            }
        }
        return (bytes.len(), lines, false);
    }
    let mut i = start + 1;
    while i < bytes.len() {
        match bytes[i] {
            b'\\' => i += 2,
            b'\n' => return (i, 0, false),
            c if c == quote => return (i + 1, 0, true),
            _ => i += 1,
        }
    }
    (bytes.len().min(i), 0, false)
}
