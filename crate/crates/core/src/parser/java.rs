use super::lexer::{tokenize, Token, TokenKind};
use super::{FileSurface, ImportStatement, MethodDeclaration, MethodInvocation};

const MODIFIERS: &[&str] = &[
    "public", "protected", "private", "static", "final", "abstract", "synchronized", "native",
    "strictfp", "default", "transient", "volatile", "sealed",
];

const PRIMITIVES: &[&str] = &["void", "boolean", "byte", "char", "short", "int", "long", "float", "double"];

const KEYWORDS: &[&str] = &[
    "abstract", "assert", "boolean", "break", "byte", "case", "catch", "char", "class", "const",
    "continue", "default", "do", "double", "else", "enum", "extends", "final", "finally", "float",
    "for", "goto", "if", "implements", "import", "instanceof", "int", "interface", "long", "native",
    "new", "package", "private", "protected", "public", "return", "short", "static", "strictfp",
    "super", "switch", "synchronized", "this", "throw", "throws", "transient", "try", "void",
    "volatile", "while", "true", "false", "null",
];

fn is_keyword(s: &str) -> bool {
    KEYWORDS.contains(&s)
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum TypeKind {
    Unit,
    Class,
    Interface,
    Enum,
    Record,
    Annotation,
}

#[derive(Clone)]
struct TypeCtx {
    kind: TypeKind,
    name: String,
    emit: bool,
}

struct Parser<'a> {
    src: &'a str,
    toks: Vec<Token<'a>>,
    /// Index of the matching bracket for `(`, `[`, `{` and their closers.
    matching: Vec<Option<usize>>,
    file_path: &'a str,
    out: FileSurface,
}

pub(super) fn parse_unit(src: &str, file_path: &str) -> FileSurface {
    let mut p = Parser::new(src, file_path);
    let ctx = TypeCtx { kind: TypeKind::Unit, name: String::new(), emit: true };
    let n = p.toks.len();
    p.parse_members(0, n, &ctx);
    p.out
}

pub(super) fn parse_code_fragment(src: &str) -> Vec<MethodInvocation> {
    let mut p = Parser::new(src, "");
    let n = p.toks.len();
    p.scan_code(0, n);
    p.out.invocations
}

/// Top-level statements in a `{ ... }` block (or in bare statement text).
pub fn statement_count(body: &str) -> usize {
    let lexed = tokenize(body);
    let toks = &lexed.tokens;
    let (lo, hi) = match (toks.first(), toks.last()) {
        (Some(f), Some(l)) if f.is_punct("{") && l.is_punct("}") => (1, toks.len() - 1),
        _ => (0, toks.len()),
    };
    let mut depth = 0i32;
    let mut count = 0;
    let mut pending = false;
    for (i, t) in toks.iter().enumerate().take(hi).skip(lo) {
        match t.text {
            "(" | "[" | "{" if t.kind == TokenKind::Punct => {
                depth += 1;
                pending = true;
            }
            ")" | "]" if t.kind == TokenKind::Punct => depth -= 1,
            "}" if t.kind == TokenKind::Punct => {
                depth -= 1;
                if depth == 0 {
                    let next = toks.get(i + 1).filter(|_| i + 1 < hi).map(|t| t.text);
                    let continues = matches!(
                        next,
                        Some(";" | ")" | "," | "." | "else" | "catch" | "finally" | "while")
                    );
                    if !continues && pending {
                        count += 1;
                        pending = false;
                    }
                }
            }
            ";" if t.kind == TokenKind::Punct && depth == 0 => {
                if pending {
                    count += 1;
                }
                pending = false;
            }
            _ => pending = true,
        }
    }
    if pending {
        count += 1;
    }
    count
}

impl<'a> Parser<'a> {
    fn new(src: &'a str, file_path: &'a str) -> Self {
        let lexed = tokenize(src);
        let toks = lexed.tokens;
        let (matching, balanced) = match_brackets(&toks);
        Parser {
            src,
            toks,
            matching,
            file_path,
            out: FileSurface {
                file_path: file_path.to_string(),
                parse_degraded: lexed.unterminated || !balanced,
                ..FileSurface::default()
            },
        }
    }

    fn text(&self, i: usize) -> &'a str {
        self.toks.get(i).map_or("", |t| t.text)
    }

    fn punct(&self, i: usize, s: &str) -> bool {
        self.toks.get(i).is_some_and(|t| t.is_punct(s))
    }

    fn ident(&self, i: usize) -> bool {
        self.toks.get(i).is_some_and(Token::is_ident)
    }

    fn slice(&self, from: usize, to_inclusive: usize) -> &'a str {
        &self.src[self.toks[from].start..self.toks[to_inclusive].end]
    }

    /// Matching closer of the opener at `i`, clamped to `hi`; `None` when
    /// the opener is unbalanced.
    fn close_of(&self, i: usize, hi: usize) -> Option<usize> {
        self.matching[i].filter(|&c| c > i && c < hi)
    }

    /// Past the end of a bracket group starting at `i`, or `hi` when unclosed.
    fn skip_group(&mut self, i: usize, hi: usize) -> usize {
        match self.close_of(i, hi) {
            Some(c) => c + 1,
            None => {
                self.out.parse_degraded = true;
                hi
            }
        }
    }

    /// Forward match of a `<` that opens type arguments. Returns the index of
    /// the closing `>` when the enclosed tokens look like a type list.
    fn angle_close(&self, open: usize, hi: usize) -> Option<usize> {
        let mut depth = 0usize;
        let mut i = open;
        while i < hi {
            let t = &self.toks[i];
            match t.text {
                "<" if t.kind == TokenKind::Punct => depth += 1,
                ">" if t.kind == TokenKind::Punct => {
                    depth -= 1;
                    if depth == 0 {
                        return Some(i);
                    }
                }
                "," | "." | "?" | "&" | "@" => {}
                "[" | "]" if t.kind == TokenKind::Punct => {}
                "(" if t.kind == TokenKind::Punct && i > 0 && self.toks[i - 1].is_ident() && self.punct(i.wrapping_sub(2), "@") => {
                    // annotation arguments on a type argument
                    i = self.close_of(i, hi)?;
                }
                _ if t.kind == TokenKind::Ident => {}
                _ => return None,
            }
            i += 1;
        }
        None
    }

    /// Backward match of a `>` closing type arguments, checking the same
    /// type-list shape as [`angle_close`].
    fn angle_open(&self, close: usize, lo: usize) -> Option<usize> {
        let mut depth = 0usize;
        let mut i = close;
        loop {
            let t = &self.toks[i];
            match t.text {
                ">" if t.kind == TokenKind::Punct => depth += 1,
                "<" if t.kind == TokenKind::Punct => {
                    depth -= 1;
                    if depth == 0 {
                        return Some(i);
                    }
                }
                "," | "." | "?" | "&" | "[" | "]" => {}
                _ if t.kind == TokenKind::Ident => {
                    if is_keyword(t.text) && !PRIMITIVES.contains(&t.text) && t.text != "extends" && t.text != "super" {
                        return None;
                    }
                }
                _ => return None,
            }
            if i == lo {
                return None;
            }
            i -= 1;
        }
    }

    /// Skips `@Name`, `@a.b.Name` and `@Name(...)`; returns the annotation's
    /// simple name and the index after it.
    fn skip_annotation(&mut self, at: usize, hi: usize) -> (String, usize) {
        let mut i = at + 1;
        let mut name = String::new();
        while i < hi && self.ident(i) {
            if !name.is_empty() {
                name.push('.');
            }
            name.push_str(self.text(i));
            i += 1;
            if self.punct(i, ".") && self.ident(i + 1) {
                i += 1;
            } else {
                break;
            }
        }
        if self.punct(i, "(") {
            i = self.skip_group(i, hi);
        }
        (name, i)
    }

    fn is_annotation_start(&self, i: usize) -> bool {
        self.punct(i, "@") && self.ident(i + 1) && self.text(i + 1) != "interface"
    }

    /// End of a statement-like run starting at `from`: the index of the first
    /// `;` at bracket depth zero, or `hi`.
    fn statement_end(&mut self, from: usize, hi: usize) -> usize {
        let mut i = from;
        while i < hi {
            if self.punct(i, ";") {
                return i;
            }
            if self.punct(i, "(") || self.punct(i, "[") || self.punct(i, "{") {
                i = self.skip_group(i, hi);
            } else if self.punct(i, "}") {
                // member ended without a terminator
                self.out.parse_degraded = true;
                return i;
            } else {
                i += 1;
            }
        }
        hi
    }

    fn parse_members(&mut self, lo: usize, hi: usize, ctx: &TypeCtx) {
        let mut i = lo;
        while i < hi {
            if self.punct(i, ";") {
                i += 1;
                continue;
            }
            if self.punct(i, ")") || self.punct(i, "]") || self.punct(i, "}") {
                // stray closer
                self.out.parse_degraded = true;
                i += 1;
                continue;
            }
            if ctx.kind == TypeKind::Unit && (self.text(i) == "package" || self.text(i) == "import") && self.ident(i) {
                i = self.parse_unit_header(i, hi);
                continue;
            }
            i = self.parse_member(i, hi, ctx);
        }
    }

    fn parse_unit_header(&mut self, at: usize, hi: usize) -> usize {
        let end = self.statement_end(at, hi);
        let mut i = at + 1;
        let is_import = self.text(at) == "import";
        let is_static = is_import && self.text(i) == "static" && self.ident(i);
        if is_static {
            i += 1;
        }
        let mut path = String::new();
        for t in &self.toks[i..end] {
            path.push_str(t.text);
        }
        if is_import {
            let is_wildcard = path.ends_with(".*");
            let imported_path = path.trim_end_matches(".*").to_string();
            if !imported_path.is_empty() {
                self.out.imports.push(ImportStatement {
                    imported_path,
                    is_static,
                    is_wildcard,
                    file_path: self.file_path.to_string(),
                });
            }
        } else if !path.is_empty() && self.out.package_name.is_none() {
            self.out.package_name = Some(path);
        }
        end + 1
    }

    fn parse_member(&mut self, start: usize, hi: usize, ctx: &TypeCtx) -> usize {
        let mut annotations = Vec::new();
        // non-annotation header tokens
        let mut parts: Vec<usize> = Vec::new();
        let mut i = start;
        let mut body: Option<usize> = None;
        while i < hi {
            if self.is_annotation_start(i) {
                let (name, next) = self.skip_annotation(i, hi);
                annotations.push(name);
                i = next;
                continue;
            }
            let t = self.toks[i];
            if t.is_punct(";") {
                break;
            }
            if t.is_punct("{") {
                body = Some(i);
                break;
            }
            if t.is_punct("}") {
                self.out.parse_degraded = true;
                break;
            }
            if t.is_punct("=") {
                // field with initializer
                let end = self.statement_end(i + 1, hi);
                self.scan_code(i + 1, end);
                return end + 1;
            }
            if t.is_punct("->") {
                // not a declaration; most likely statements at member level
                let end = self.statement_end(i + 1, hi);
                self.scan_code(start, end);
                return end + 1;
            }
            parts.push(i);
            if t.is_punct("(") || t.is_punct("[") {
                i = self.skip_group(i, hi);
            } else {
                i += 1;
            }
        }
        let end = body.map_or(i, |b| self.close_of(b, hi).unwrap_or(hi));
        if body.is_some() && end == hi {
            self.out.parse_degraded = true;
        }
        let next = end + 1;

        if let Some((kind_at, kind)) = self.type_keyword(&parts) {
            let name = parts
                .iter()
                .copied()
                .find(|&p| p > kind_at && self.ident(p))
                .map(|p| self.text(p).to_string())
                .unwrap_or_default();
            if let Some(b) = body {
                let inner = TypeCtx { kind, name, emit: true };
                self.parse_type_body(b, end.min(hi), &inner);
            }
            return next;
        }

        let paren = parts
            .iter()
            .position(|&p| self.punct(p, "(") && p > start && self.ident(p - 1) && parts.contains(&(p - 1)));
        if let Some(pi) = paren {
            let open = parts[pi];
            let name_at = open - 1;
            let before: Vec<usize> = parts[..pi - 1].to_vec();
            let name = self.text(name_at);
            let mut modifiers = Vec::new();
            let mut rest = Vec::new();
            let mut j = 0;
            while j < before.len() {
                let b = before[j];
                let text = self.text(b);
                if rest.is_empty() && MODIFIERS.contains(&text) {
                    modifiers.push(text.to_string());
                } else if rest.is_empty() && text == "non" && self.punct(b + 1, "-") && self.text(b + 2) == "sealed" {
                    modifiers.push("non-sealed".to_string());
                    j += 2;
                } else if rest.is_empty() && self.punct(b, "<") {
                    // method type parameters
                    match self.angle_close(b, hi) {
                        Some(c) => {
                            while j + 1 < before.len() && before[j + 1] <= c {
                                j += 1;
                            }
                        }
                        None => rest.push(b),
                    }
                } else {
                    rest.push(b);
                }
                j += 1;
            }
            let has_invalid = is_keyword(name) && !PRIMITIVES.contains(&name);
            let is_method = !rest.is_empty() && !has_invalid && ctx.kind != TypeKind::Annotation;
            if is_method && ctx.emit {
                let close = self.close_of(open, hi);
                let params = self.parameters(open, close.unwrap_or(hi));
                let return_type_text = self.join(&rest, false);
                let signature_text = format!(
                    "{} {}({})",
                    self.join(&rest, true),
                    name,
                    params.iter().map(|p| self.join(p, true)).collect::<Vec<_>>().join(", ")
                );
                let body_text = match body {
                    Some(b) if end < hi => self.slice(b, end).to_string(),
                    Some(b) => self.src[self.toks[b].start..].to_string(),
                    None => String::new(),
                };
                let end_tok = if end < self.toks.len() { end } else { self.toks.len() - 1 };
                let is_static = modifiers.iter().any(|m| m == "static");
                self.out.declarations.push(MethodDeclaration {
                    simple_name: name.to_string(),
                    arity: params.len(),
                    signature_text,
                    body_text,
                    file_path: self.file_path.to_string(),
                    start_line: self.toks[start].line,
                    end_line: self.toks[end_tok].line.max(self.toks[start].line),
                    modifiers,
                    annotations,
                    is_static,
                    return_type_text,
                    enclosing_type: ctx.name.clone(),
                    interface_member: ctx.kind == TypeKind::Interface,
                });
            }
            if let Some(b) = body {
                self.scan_code(b + 1, end.min(hi));
            }
            return next;
        }

        // initializer blocks, compact record constructors, stray statements
        match body {
            Some(b) => self.scan_code(b + 1, end.min(hi)),
            None => {
                if !parts.is_empty() {
                    self.scan_code(start, i.min(hi));
                }
            }
        }
        next
    }

    fn type_keyword(&self, parts: &[usize]) -> Option<(usize, TypeKind)> {
        for (k, &p) in parts.iter().enumerate() {
            if !self.ident(p) {
                continue;
            }
            let after_dot = k > 0 && self.punct(parts[k - 1], ".");
            if after_dot {
                continue;
            }
            let kind = match self.text(p) {
                "class" => TypeKind::Class,
                "enum" => TypeKind::Enum,
                "interface" if k > 0 && self.punct(parts[k - 1], "@") => TypeKind::Annotation,
                "interface" => TypeKind::Interface,
                "record" if parts.get(k + 1).is_some_and(|&n| self.ident(n))
                    && parts.get(k + 2).is_some_and(|&n| self.punct(n, "(") || self.punct(n, "<")) =>
                {
                    TypeKind::Record
                }
                _ => continue,
            };
            return Some((p, kind));
        }
        None
    }

    fn parse_type_body(&mut self, open: usize, close: usize, ctx: &TypeCtx) {
        let mut i = open + 1;
        if ctx.kind == TypeKind::Enum {
            i = self.parse_enum_constants(i, close);
        }
        self.parse_members(i, close, ctx);
    }

    /// Returns the index after the constant list (past the `;` if present).
    fn parse_enum_constants(&mut self, lo: usize, hi: usize) -> usize {
        let mut i = lo;
        while i < hi {
            if self.punct(i, ";") {
                return i + 1;
            }
            if self.punct(i, ",") {
                i += 1;
                continue;
            }
            if self.is_annotation_start(i) {
                i = self.skip_annotation(i, hi).1;
                continue;
            }
            if self.ident(i) {
                i += 1;
                if self.punct(i, "(") {
                    let end = self.close_of(i, hi).unwrap_or(hi);
                    self.scan_code(i + 1, end);
                    i = (end + 1).min(hi);
                }
                if self.punct(i, "{") {
                    let end = self.close_of(i, hi).unwrap_or(hi);
                    let anon = TypeCtx { kind: TypeKind::Class, name: String::new(), emit: false };
                    self.parse_type_body(i, end, &anon);
                    i = (end + 1).min(hi);
                }
                continue;
            }
            // not an enum constant list after all
            return i;
        }
        hi
    }

    /// Parameter token groups between `(` at `open` and `close`, with
    /// annotations, `final` and generic arguments removed. Receiver
    /// parameters (`Foo this`) are dropped.
    fn parameters(&self, open: usize, close: usize) -> Vec<Vec<usize>> {
        let mut params = Vec::new();
        let mut cur = Vec::new();
        let mut i = open + 1;
        let mut angle = 0usize;
        while i < close {
            let t = self.toks[i];
            if t.is_punct("@") && self.ident(i + 1) {
                i += 2;
                while self.punct(i, ".") && self.ident(i + 1) {
                    i += 2;
                }
                if self.punct(i, "(") {
                    i = self.close_of(i, close).map_or(close, |c| c + 1);
                }
                continue;
            }
            match t.text {
                "<" if t.kind == TokenKind::Punct => angle += 1,
                ">" if t.kind == TokenKind::Punct => angle = angle.saturating_sub(1),
                "," if angle == 0 => {
                    if !cur.is_empty() {
                        params.push(std::mem::take(&mut cur));
                    }
                }
                "final" if angle == 0 => {}
                "(" | "[" | "{" if t.kind == TokenKind::Punct => {
                    let c = self.close_of(i, close).unwrap_or(close);
                    if angle == 0 {
                        cur.extend(i..=c.min(close - 1));
                    }
                    i = c + 1;
                    continue;
                }
                _ => {
                    if angle == 0 {
                        cur.push(i);
                    }
                }
            }
            i += 1;
        }
        if !cur.is_empty() {
            params.push(cur);
        }
        params.retain(|p| !p.last().is_some_and(|&l| self.text(l) == "this"));
        params
    }

    fn join(&self, idx: &[usize], strip_generics: bool) -> String {
        let mut out = String::new();
        let mut angle = 0usize;
        let mut prev: Option<&Token> = None;
        for &i in idx {
            let t = &self.toks[i];
            if strip_generics {
                if t.is_punct("<") {
                    angle += 1;
                    continue;
                }
                if t.is_punct(">") {
                    angle = angle.saturating_sub(1);
                    continue;
                }
                if angle > 0 {
                    continue;
                }
            }
            if let Some(p) = prev {
                let word = |t: &Token| t.kind != TokenKind::Punct;
                let space = (word(t) && (word(p) || p.is_punct("]") || p.is_punct("...") || p.is_punct(">")))
                    || p.is_punct(",");
                if space {
                    out.push(' ');
                }
            }
            out.push_str(t.text);
            prev = Some(t);
        }
        out
    }

    /// Linear scan of statement/expression tokens for invocations, nested
    /// local types and anonymous class bodies.
    fn scan_code(&mut self, lo: usize, hi: usize) {
        let mut i = lo;
        while i < hi {
            let t = self.toks[i];
            if t.is_punct("@") {
                if self.ident(i + 1) && self.text(i + 1) != "interface" {
                    i = self.skip_annotation(i, hi).1;
                } else {
                    i += 1;
                }
                continue;
            }
            if !t.is_ident() {
                i += 1;
                continue;
            }
            let after_dot = i > lo && self.punct(i - 1, ".");
            match t.text {
                "new" if !self.punct(i + 1, "(") => {
                    i = self.scan_creation(i, hi);
                    continue;
                }
                "class" | "interface" | "enum" if !after_dot && self.ident(i + 1) && !self.punct(i.wrapping_sub(1), "::") => {
                    i = self.scan_local_type(i, hi);
                    continue;
                }
                "record"
                    if !after_dot
                        && self.ident(i + 1)
                        && (self.punct(i + 2, "(") || self.punct(i + 2, "<"))
                        && (i == lo || self.at_statement_start(i)) =>
                {
                    i = self.scan_local_type(i, hi);
                    continue;
                }
                _ => {}
            }
            if self.punct(i + 1, "(") && self.is_call_name(i, lo) {
                self.record_call(i, lo, hi);
            }
            i += 1;
        }
    }

    fn at_statement_start(&self, i: usize) -> bool {
        let prev = self.text(i - 1);
        matches!(prev, ";" | "{" | "}" | ")") || MODIFIERS.contains(&prev)
    }

    fn is_call_name(&self, i: usize, lo: usize) -> bool {
        let name = self.text(i);
        if is_keyword(name) {
            return false;
        }
        // unqualified `yield (...)` is a yield statement
        if name == "yield" && !(i > lo && self.punct(i - 1, ".")) {
            return false;
        }
        if i == lo {
            return true;
        }
        let prev = self.toks[i - 1];
        match prev.kind {
            TokenKind::Ident => {
                // `Type name(` is a declaration header, not a call;
                // statement keywords may precede a call
                matches!(prev.text, "return" | "throw" | "else" | "do" | "assert" | "yield")
            }
            TokenKind::Literal => false,
            TokenKind::Punct => match prev.text {
                "::" | "@" | "]" => false,
                ">" => match self.angle_open(i - 1, lo) {
                    Some(open) if open > lo && self.punct(open - 1, ".") => true,
                    Some(open) if open > lo && self.ident(open - 1) => false,
                    _ => true,
                },
                _ => true,
            },
        }
    }

    fn record_call(&mut self, name_at: usize, lo: usize, hi: usize) {
        let open = name_at + 1;
        let close = self.close_of(open, hi);
        if close.is_none() {
            self.out.parse_degraded = true;
        }
        let arg_count = self.count_args(open, close.unwrap_or(hi));
        // receiver: `recv.name(`, `recv.<T>name(`
        let mut q = name_at;
        if q > lo && self.punct(q - 1, ">") {
            if let Some(open_angle) = self.angle_open(q - 1, lo) {
                q = open_angle;
            }
        }
        let (receiver_text, span_start) = if q > lo && self.punct(q - 1, ".") {
            let dot = q - 1;
            match self.receiver_start(dot, lo) {
                Some(s) => (self.slice(s, dot - 1).to_string(), self.toks[s].start),
                None => (String::new(), self.toks[name_at].start),
            }
        } else {
            (String::new(), self.toks[name_at].start)
        };
        let span_end = match close {
            Some(c) => self.toks[c].end,
            None => self.toks[hi.min(self.toks.len()) - 1].end,
        };
        self.out.invocations.push(MethodInvocation {
            simple_name: self.text(name_at).to_string(),
            arg_count,
            receiver_text,
            file_path: self.file_path.to_string(),
            line: self.toks[name_at].line,
            span: (span_start, span_end),
            truncated: close.is_none(),
        });
    }

    /// First token of the primary/postfix chain that ends right before `dot`.
    fn receiver_start(&self, dot: usize, lo: usize) -> Option<usize> {
        if dot <= lo {
            return None;
        }
        let mut j = dot - 1;
        loop {
            // trailing call/index groups: `foo(...)`, `a[0]`, `(expr)`
            let mut start;
            loop {
                let t = &self.toks[j];
                if t.is_punct(")") || t.is_punct("]") {
                    let o = self.matching[j].filter(|&o| o >= lo && o < j)?;
                    start = o;
                    if o == lo {
                        return Some(o);
                    }
                    j = o - 1;
                    let prev = &self.toks[j];
                    let attaches = prev.is_ident() && (!is_keyword(prev.text) || matches!(prev.text, "this" | "super"))
                        || prev.is_punct(")")
                        || prev.is_punct("]")
                        || prev.is_punct(">") && self.toks[o].is_punct("(");
                    if !attaches {
                        return Some(start);
                    }
                    continue;
                }
                break;
            }
            let t = &self.toks[j];
            if t.is_punct(">") {
                // `new Foo<T>(...)` or `.<T>call(...)`
                let Some(o) = self.angle_open(j, lo) else {
                    return if j + 1 < dot { Some(j + 1) } else { None };
                };
                if o == lo {
                    return Some(o);
                }
                j = o - 1;
                if self.punct(j, ".") {
                    // `.<T>` belongs to the call; continue with its receiver
                    if j == lo {
                        return Some(j + 1);
                    }
                    j -= 1;
                    continue;
                }
            }
            let t = &self.toks[j];
            match t.kind {
                TokenKind::Ident if !is_keyword(t.text) || matches!(t.text, "this" | "super" | "class" | "true" | "false" | "null") || PRIMITIVES.contains(&t.text) => {
                    start = j;
                }
                TokenKind::Literal => start = j,
                _ => return if j + 1 < dot { Some(j + 1) } else { None },
            }
            if start == lo {
                return Some(start);
            }
            let prev = &self.toks[start - 1];
            if prev.is_punct(".") {
                if start - 1 == lo {
                    return Some(start);
                }
                j = start - 2;
                continue;
            }
            if prev.is_ident() && prev.text == "new" {
                return Some(start - 1);
            }
            return Some(start);
        }
    }

    fn count_args(&self, open: usize, close: usize) -> usize {
        if open + 1 >= close.min(self.toks.len()) {
            return 0;
        }
        let mut commas = 0;
        let mut i = open + 1;
        let mut after_new = false;
        while i < close {
            let t = &self.toks[i];
            if t.is_punct("(") || t.is_punct("[") || t.is_punct("{") {
                i = self.close_of(i, close).map_or(close, |c| c + 1);
                after_new = false;
                continue;
            }
            if t.is_punct("<") {
                let typed = self.punct(i - 1, ".") || after_new;
                if typed {
                    if let Some(c) = self.angle_close(i, close) {
                        i = c + 1;
                        continue;
                    }
                }
            }
            if t.is_punct(",") {
                commas += 1;
            }
            if t.is_ident() && (t.text == "new" || t.text == "instanceof") {
                after_new = true;
            } else if !(t.is_ident() || t.is_punct(".") || t.is_punct("@")) {
                after_new = false;
            }
            i += 1;
        }
        commas + 1
    }

    /// Handles `new T(...)`, `new T(...) { ... }` and `new T[...]`. Returns
    /// the index to continue scanning from.
    fn scan_creation(&mut self, at: usize, hi: usize) -> usize {
        let mut i = at + 1;
        let mut name = String::new();
        while i < hi {
            if self.is_annotation_start(i) {
                i = self.skip_annotation(i, hi).1;
            } else if self.punct(i, "<") {
                match self.angle_close(i, hi) {
                    Some(c) => i = c + 1,
                    None => break,
                }
            } else if self.ident(i) {
                name = self.text(i).to_string();
                i += 1;
            } else if self.punct(i, ".") {
                i += 1;
            } else {
                break;
            }
        }
        if !self.punct(i, "(") {
            return i;
        }
        let close = self.close_of(i, hi);
        let Some(close) = close else {
            self.out.parse_degraded = true;
            return i + 1;
        };
        self.scan_code(i + 1, close);
        if self.punct(close + 1, "{") && close + 1 < hi {
            let end = self.close_of(close + 1, hi).unwrap_or(hi);
            let anon = TypeCtx { kind: TypeKind::Class, name, emit: false };
            self.parse_type_body(close + 1, end, &anon);
            return end + 1;
        }
        close + 1
    }

    fn scan_local_type(&mut self, at: usize, hi: usize) -> usize {
        let kind = match self.text(at) {
            "enum" => TypeKind::Enum,
            "interface" => TypeKind::Interface,
            "record" => TypeKind::Record,
            _ => TypeKind::Class,
        };
        let name = self.text(at + 1).to_string();
        let mut i = at + 2;
        while i < hi && !self.punct(i, "{") && !self.punct(i, ";") {
            if self.punct(i, "(") {
                i = self.skip_group(i, hi);
            } else {
                i += 1;
            }
        }
        if !self.punct(i, "{") || i >= hi {
            return i;
        }
        let end = self.close_of(i, hi).unwrap_or(hi);
        let ctx = TypeCtx { kind, name, emit: true };
        self.parse_type_body(i, end, &ctx);
        end + 1
    }
}

/// Pairs brackets; returns the matching table and whether everything balanced.
fn match_brackets(toks: &[Token<'_>]) -> (Vec<Option<usize>>, bool) {
    let mut matching = vec![None; toks.len()];
    let mut stack: Vec<usize> = Vec::new();
    let mut balanced = true;
    for (i, t) in toks.iter().enumerate() {
        if t.kind != TokenKind::Punct {
            continue;
        }
        let opener = match t.text {
            "(" | "[" | "{" => {
                stack.push(i);
                continue;
            }
            ")" => "(",
            "]" => "[",
            "}" => "{",
            _ => continue,
        };
        match stack.iter().rposition(|&o| toks[o].text == opener) {
            Some(pos) => {
                if pos + 1 != stack.len() {
                    balanced = false;
                }
                // openers above `pos` stay unmatched
                let o = stack[pos];
                stack.truncate(pos);
                matching[o] = Some(i);
                matching[i] = Some(o);
            }
            None => balanced = false,
        }
    }
    if !stack.is_empty() {
        balanced = false;
    }
    (matching, balanced)
}
