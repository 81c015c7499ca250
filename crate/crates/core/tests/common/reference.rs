//! Independent reference extraction built on the tree-sitter Java grammar.

use std::collections::BTreeMap;
use tree_sitter::{Node, Parser};

#[derive(Debug, Default, Clone, PartialEq, Eq)]
pub struct RefSurface {
    /// (name, arity, is_public) of every method declaration outside
    /// anonymous class and enum-constant bodies.
    pub declarations: Vec<(String, usize, bool)>,
    pub invocations: Vec<(String, usize)>,
    pub has_error: bool,
}

impl RefSurface {
    pub fn decl_multiset(&self) -> BTreeMap<(String, usize), usize> {
        let mut m = BTreeMap::new();
        for (n, a, _) in &self.declarations {
            *m.entry((n.clone(), *a)).or_default() += 1;
        }
        m
    }

    pub fn call_multiset(&self) -> BTreeMap<(String, usize), usize> {
        let mut m = BTreeMap::new();
        for (n, a) in &self.invocations {
            *m.entry((n.clone(), *a)).or_default() += 1;
        }
        m
    }

    pub fn public_count(&self) -> usize {
        self.declarations.iter().filter(|d| d.2).count()
    }
}

pub fn reference_parse(source: &str) -> RefSurface {
    let mut parser = Parser::new();
    parser
        .set_language(&tree_sitter_java::LANGUAGE.into())
        .expect("java grammar");
    let tree = parser.parse(source, None).expect("tree");
    let mut out = RefSurface { has_error: tree.root_node().has_error(), ..Default::default() };
    visit(tree.root_node(), source.as_bytes(), &mut out);
    out
}

fn visit(node: Node, src: &[u8], out: &mut RefSurface) {
    match node.kind() {
        "method_declaration" => {
            let body_owner = node.parent().and_then(|p| p.parent());
            let anonymous = body_owner
                .is_some_and(|o| o.kind() == "object_creation_expression" || o.kind() == "enum_constant");
            if !anonymous {
                let name = node
                    .child_by_field_name("name")
                    .and_then(|n| n.utf8_text(src).ok())
                    .unwrap_or_default()
                    .to_string();
                let arity = node
                    .child_by_field_name("parameters")
                    .map(|p| {
                        let mut c = p.walk();
                        p.named_children(&mut c)
                            .filter(|ch| matches!(ch.kind(), "formal_parameter" | "spread_parameter"))
                            .count()
                    })
                    .unwrap_or(0);
                out.declarations.push((name, arity, is_public(node, src)));
            }
        }
        "method_invocation" => {
            let name = node
                .child_by_field_name("name")
                .and_then(|n| n.utf8_text(src).ok())
                .unwrap_or_default()
                .to_string();
            let args = node
                .child_by_field_name("arguments")
                .map(|a| {
                    let mut c = a.walk();
                    a.named_children(&mut c)
                        .filter(|ch| !matches!(ch.kind(), "line_comment" | "block_comment"))
                        .count()
                })
                .unwrap_or(0);
            out.invocations.push((name, args));
        }
        _ => {}
    }
    let mut cursor = node.walk();
    for child in node.children(&mut cursor) {
        visit(child, src, out);
    }
}

fn is_public(method: Node, src: &[u8]) -> bool {
    let mut modifiers = Vec::new();
    let mut c = method.walk();
    for ch in method.children(&mut c) {
        if ch.kind() == "modifiers" {
            let mut c2 = ch.walk();
            for m in ch.children(&mut c2) {
                if let Ok(t) = m.utf8_text(src) {
                    modifiers.push(t.to_string());
                }
            }
        }
    }
    if modifiers.iter().any(|m| m == "public") {
        return true;
    }
    let in_interface = method
        .parent()
        .is_some_and(|p| p.kind() == "interface_body");
    in_interface && !modifiers.iter().any(|m| m == "private")
}
