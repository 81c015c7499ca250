//! Surface extraction of method declarations, invocations, imports and the
//! package declaration from Java-syntax text.
//!
//! The extractor never fails on malformed input: unbalanced delimiters and
//! unterminated literals are tolerated and reported through
//! [`FileSurface::parse_degraded`].

mod java;
pub mod lexer;

use serde::{Deserialize, Serialize};

pub use java::statement_count;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MethodDeclaration {
    pub simple_name: String,
    pub arity: usize,
    /// Return type, name and parameter list with generics, annotations and
    /// parameter modifiers removed.
    pub signature_text: String,
    /// `{ ... }` including braces, empty for abstract and interface methods.
    pub body_text: String,
    pub file_path: String,
    pub start_line: u32,
    pub end_line: u32,
    pub modifiers: Vec<String>,
    pub annotations: Vec<String>,
    pub is_static: bool,
    pub return_type_text: String,
    /// Simple name of the declaring type.
    pub enclosing_type: String,
    /// Declared directly in an interface body, where methods are implicitly public.
    pub interface_member: bool,
}

impl MethodDeclaration {
    pub fn is_public(&self) -> bool {
        self.modifiers.iter().any(|m| m == "public")
            || (self.interface_member && !self.modifiers.iter().any(|m| m == "private"))
    }

    pub fn has_body(&self) -> bool {
        !self.body_text.is_empty()
    }

    pub fn is_deprecated(&self) -> bool {
        self.annotations
            .iter()
            .any(|a| a == "Deprecated" || a == "java.lang.Deprecated")
    }

    pub fn key(&self) -> (&str, usize) {
        (&self.simple_name, self.arity)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MethodInvocation {
    pub simple_name: String,
    pub arg_count: usize,
    pub receiver_text: String,
    pub file_path: String,
    pub line: u32,
    /// Byte range of the whole call expression (receiver through closing
    /// parenthesis) within the parsed text.
    #[serde(skip)]
    pub span: (usize, usize),
    /// The argument list ran off the end of the text, so `arg_count` is a
    /// lower bound.
    #[serde(skip)]
    pub truncated: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct ImportStatement {
    pub imported_path: String,
    pub is_static: bool,
    pub is_wildcard: bool,
    pub file_path: String,
}

impl ImportStatement {
    /// Candidate package names this import can belong to, most specific first.
    ///
    /// `import a.b.C;` yields `a.b.C`, `a.b`, `a` since the split between
    /// package and nested type names is not syntactically visible.
    pub fn package_candidates(&self) -> impl Iterator<Item = &str> {
        let path = self.imported_path.as_str();
        std::iter::once(path).chain(path.rmatch_indices('.').map(move |(i, _)| &path[..i]))
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct FileSurface {
    pub file_path: String,
    pub package_name: Option<String>,
    pub declarations: Vec<MethodDeclaration>,
    pub invocations: Vec<MethodInvocation>,
    pub imports: Vec<ImportStatement>,
    pub parse_degraded: bool,
    /// The input contained bytes that are not valid UTF-8 and were replaced.
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub lossy_decoding: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum MethodKind {
    Getter,
    Setter,
    MainMethod,
    Ordinary,
}

pub fn parse_file(source: &str, file_path: &str) -> FileSurface {
    java::parse_unit(source, file_path)
}

/// Decodes raw file bytes (lossily) and parses them.
pub fn parse_bytes(bytes: &[u8], file_path: &str) -> FileSurface {
    match std::str::from_utf8(bytes) {
        Ok(text) => parse_file(text, file_path),
        Err(_) => {
            let text = String::from_utf8_lossy(bytes);
            let mut surface = parse_file(&text, file_path);
            surface.lossy_decoding = true;
            surface
        }
    }
}

/// Extracts call expressions from an expression or statement fragment, as
/// if it were the body of a synthetic method.
pub fn parse_fragment(fragment: &str) -> Vec<MethodInvocation> {
    java::parse_code_fragment(fragment)
}

/// Calls in `fragment` that are not nested inside another call's span
/// (neither as an argument nor as a receiver).
pub fn outermost_calls(fragment: &str) -> Vec<MethodInvocation> {
    let calls = parse_fragment(fragment);
    calls
        .iter()
        .enumerate()
        .filter(|(i, c)| {
            !calls.iter().enumerate().any(|(j, o)| {
                *i != j
                    && o.span.0 <= c.span.0
                    && c.span.1 <= o.span.1
                    && (o.span != c.span || j < *i)
            })
        })
        .map(|(_, c)| c.clone())
        .collect()
}

pub fn classify_method(decl: &MethodDeclaration) -> MethodKind {
    let name = decl.simple_name.as_str();
    if name == "main" && decl.is_static && decl.arity == 1 {
        return MethodKind::MainMethod;
    }
    let short_body = statement_count(&decl.body_text) <= 1;
    if decl.arity == 0 && short_body && (has_bean_prefix(name, "get") || has_bean_prefix(name, "is")) {
        return MethodKind::Getter;
    }
    if decl.arity == 1 && short_body && has_bean_prefix(name, "set") {
        return MethodKind::Setter;
    }
    MethodKind::Ordinary
}

fn has_bean_prefix(name: &str, prefix: &str) -> bool {
    name.strip_prefix(prefix)
        .and_then(|rest| rest.chars().next())
        .is_some_and(char::is_uppercase)
}

pub fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    chars
        .next()
        .is_some_and(|c| c == '_' || c == '$' || c.is_alphabetic())
        && chars.all(|c| c == '_' || c == '$' || c.is_alphanumeric())
}
