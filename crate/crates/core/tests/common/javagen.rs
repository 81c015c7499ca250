//! Seeded generator of syntactically valid Java compilation units that mix
//! the constructs a surface parser has to get right: generics, varargs,
//! nested/local/anonymous types, enums with constant bodies, records,
//! lambdas, method references, text blocks and call-like text inside
//! comments and strings.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const NAMES: &[&str] = &[
    "compute", "apply", "indexOf", "contains", "isNumeric", "render", "load", "save", "merge",
    "split", "join", "trim", "parse", "format", "check", "validate", "build", "reset", "flush",
    "encode", "decode", "size", "value", "next", "accept", "randomString", "normalize",
];
const TYPES: &[&str] = &["int", "long", "String", "boolean", "double", "Object", "List<String>", "Map<String, Integer>", "String[]", "char"];
const VARS: &[&str] = &["a", "b", "count", "items", "name", "users", "x", "y", "map", "list"];
const RECV: &[&str] = &["this", "super", "obj", "StringUtils", "ArrayUtils", "list", "map", "Helper", "System.out", "Objects"];

pub struct JavaGen {
    rng: ChaCha8Rng,
    depth: u32,
}

impl JavaGen {
    pub fn new(seed: u64) -> Self {
        JavaGen { rng: ChaCha8Rng::seed_from_u64(seed), depth: 0 }
    }

    fn pick<'a>(&mut self, xs: &[&'a str]) -> &'a str {
        xs.choose(&mut self.rng).copied().unwrap()
    }

    fn name(&mut self) -> String {
        let base = self.pick(NAMES);
        if self.rng.gen_bool(0.3) {
            format!("{base}{}", self.rng.gen_range(0..5))
        } else {
            base.to_string()
        }
    }

    pub fn unit(&mut self, index: usize) -> String {
        let mut s = String::new();
        if self.rng.gen_bool(0.3) {
            s.push_str("/*\n * Licensed under the Apache License. call(this) is not code.\n */\n");
        }
        s.push_str(&format!("package org.gen.p{};\n\n", index % 7));
        for _ in 0..self.rng.gen_range(0..4) {
            let imp = self.pick(&["java.util.List", "java.util.*", "org.apache.commons.lang3.StringUtils", "java.util.function.Function"]);
            s.push_str(&format!("import {imp};\n"));
        }
        if self.rng.gen_bool(0.2) {
            s.push_str("import static java.util.Objects.requireNonNull;\n");
        }
        s.push('\n');
        let kind = self.rng.gen_range(0..10);
        match kind {
            0 => s.push_str(&self.interface(&format!("Gen{index}"))),
            1 => s.push_str(&self.enumeration(&format!("Gen{index}"))),
            2 => s.push_str(&self.record(&format!("Gen{index}"))),
            _ => s.push_str(&self.class(&format!("Gen{index}"), true)),
        }
        if self.rng.gen_bool(0.3) {
            s.push_str(&self.class(&format!("Extra{index}"), false));
        }
        s
    }

    fn class(&mut self, name: &str, public: bool) -> String {
        let mut s = String::new();
        if self.rng.gen_bool(0.2) {
            s.push_str("@SuppressWarnings({\"unchecked\", \"rawtypes\"})\n");
        }
        let generic = if self.rng.gen_bool(0.3) { "<T extends Comparable<T>>" } else { "" };
        s.push_str(&format!("{}class {name}{generic} {{\n", if public { "public " } else { "" }));
        for _ in 0..self.rng.gen_range(0..3) {
            s.push_str(&self.field());
        }
        if self.rng.gen_bool(0.2) {
            s.push_str(&format!("    static {{\n{}    }}\n", self.block(2)));
        }
        if self.rng.gen_bool(0.4) {
            s.push_str(&format!("    {name}() {{\n        this(0);\n    }}\n"));
            s.push_str(&format!("    {name}(int v) {{\n        super();\n{}    }}\n", self.block(2)));
        }
        for _ in 0..self.rng.gen_range(1..6) {
            s.push_str(&self.method(false));
        }
        if self.depth < 1 && self.rng.gen_bool(0.3) {
            self.depth += 1;
            let inner_name = format!("Inner{}", self.rng.gen_range(0..100));
            let inner = self.class(&inner_name, false);
            self.depth -= 1;
            s.push_str(&indent(&format!("static {inner}")));
        }
        s.push_str("}\n");
        s
    }

    fn interface(&mut self, name: &str) -> String {
        let mut s = format!("public interface {name} {{\n");
        for _ in 0..self.rng.gen_range(1..5) {
            match self.rng.gen_range(0..4) {
                0 => s.push_str(&format!("    default {} {}() {{\n{}        return {};\n    }}\n", "int", self.name(), self.block(2), self.rng.gen_range(0..9))),
                1 => s.push_str(&format!("    static void {}(String... args) {{\n{}    }}\n", self.name(), self.block(2))),
                _ => s.push_str(&format!("    {} {}({});\n", self.pick(TYPES), self.name(), self.params())),
            }
        }
        s.push_str("}\n");
        s
    }

    fn enumeration(&mut self, name: &str) -> String {
        let mut s = format!("public enum {name} {{\n");
        s.push_str(&format!("    ALPHA(\"a\") {{\n        @Override\n        public String label() {{\n            return {};\n        }}\n    }},\n", self.expr(0)));
        s.push_str(&format!("    BETA({}),\n    GAMMA(\"g\");\n\n", self.call(1)));
        s.push_str("    private final String tag;\n\n");
        s.push_str(&format!("    {name}(String tag) {{\n        this.tag = tag;\n    }}\n"));
        s.push_str("    public String label() {\n        return tag.toUpperCase();\n    }\n");
        for _ in 0..self.rng.gen_range(0..3) {
            s.push_str(&self.method(false));
        }
        s.push_str("}\n");
        s
    }

    fn record(&mut self, name: &str) -> String {
        let mut s = format!("public record {name}(String name, int count) {{\n");
        s.push_str(&format!("    public {name} {{\n        requireNonNull(name);\n    }}\n"));
        for _ in 0..self.rng.gen_range(1..3) {
            s.push_str(&self.method(false));
        }
        s.push_str("}\n");
        s
    }

    fn field(&mut self) -> String {
        match self.rng.gen_range(0..5) {
            0 => format!("    private {} {};\n", self.pick(TYPES), self.pick(VARS)),
            1 => format!("    private final Object {} = {};\n", self.pick(VARS), self.expr(0)),
            2 => format!(
                "    private final Runnable task = new Runnable() {{\n        @Override\n        public void run() {{\n{}        }}\n    }};\n",
                self.block(3)
            ),
            3 => format!("    static final Function<String, Integer> {} = s -> {};\n", self.pick(VARS), self.call(0)),
            _ => format!("    int[] table = {{ 1, 2, {} }};\n", self.rng.gen_range(3..9)),
        }
    }

    fn params(&mut self) -> String {
        let n = self.rng.gen_range(0..4);
        let mut ps: Vec<String> = (0..n).map(|i| format!("{} p{i}", self.pick(TYPES))).collect();
        if n > 0 && self.rng.gen_bool(0.2) {
            ps[0] = format!("final {}", ps[0]);
        }
        if self.rng.gen_bool(0.15) {
            ps.push("Object... rest".to_string());
        }
        if self.rng.gen_bool(0.1) {
            ps.insert(0, "@Deprecated String annotated".to_string());
        }
        ps.join(", ")
    }

    fn method(&mut self, _in_anon: bool) -> String {
        let mods = self.pick(&["public ", "private ", "protected ", "", "public static ", "static ", "public final "]);
        let generic = if self.rng.gen_bool(0.15) { "<K, V extends List<K>> " } else { "" };
        let ret = self.pick(&["void", "int", "String", "boolean", "List<String>", "Map<String, List<Integer>>", "int[]"]);
        let name = self.name();
        let params = self.params();
        let throws = if self.rng.gen_bool(0.2) { " throws IllegalStateException, java.io.IOException" } else { "" };
        let ann = if self.rng.gen_bool(0.2) { "    @Override\n" } else if self.rng.gen_bool(0.1) { "    @Deprecated\n" } else { "" };
        let mut body = self.block(2);
        if self.rng.gen_bool(0.2) {
            body.push_str(&format!(
                "        class Local {{\n            int twice(int v) {{\n                return {} * 2;\n            }}\n        }}\n",
                self.call(0)
            ));
        }
        let ret_stmt = match ret {
            "void" => String::new(),
            "int" => "        return 0;\n".to_string(),
            "boolean" => format!("        return {} != null;\n", self.call(0)),
            _ => "        return null;\n".to_string(),
        };
        format!("{ann}    {mods}{generic}{ret} {name}({params}){throws} {{\n{body}{ret_stmt}    }}\n")
    }

    fn block(&mut self, level: usize) -> String {
        let mut s = String::new();
        let pad = "    ".repeat(level);
        for _ in 0..self.rng.gen_range(0..5) {
            let stmt = self.statement(level);
            s.push_str(&pad);
            s.push_str(&stmt);
            s.push('\n');
        }
        s
    }

    fn statement(&mut self, level: usize) -> String {
        let pad = "    ".repeat(level);
        match self.rng.gen_range(0..14) {
            0 => format!("{};", self.call(0)),
            1 => format!("Object {} = {};", self.fresh_var(), self.expr(0)),
            2 => format!("if ({} && {}) {{ {}; }} else {{ {}; }}", self.cond(), self.cond(), self.call(0), self.call(1)),
            3 => format!("for (int i = 0; i < {}; i++) {{ {}; }}", self.rng.gen_range(1..9), self.call(0)),
            4 => format!("for (String s : {}) {{ {}; }}", self.pick(&["items", "list", "names"]), self.call(1)),
            5 => format!("// {}; is commented out", self.call(0)),
            6 => format!("String msg = \"not a call: {}(x, y)\";", self.name()),
            7 => format!("list.forEach(e -> {{ {}; }});", self.call(1)),
            8 => format!("items.stream().map(String::trim).filter(s -> {}).count();", self.cond()),
            9 => format!(
                "try (java.io.InputStream in = open({})) {{\n{pad}    {};\n{pad}}} catch (Exception e) {{\n{pad}    throw new IllegalStateException(e.getMessage(), e);\n{pad}}}",
                self.pick(VARS),
                self.call(0)
            ),
            10 => format!(
                "Object r = switch ({}) {{\n{pad}    case 1 -> {};\n{pad}    default -> {{\n{pad}        yield {};\n{pad}    }}\n{pad}}};",
                self.pick(VARS),
                self.call(0),
                self.expr(0)
            ),
            11 => format!("String block = \"\"\"\n{pad}    text {}(1, 2) block\n{pad}    \"\"\";", self.name()),
            12 => format!(
                "Comparator<String> c = new Comparator<String>() {{\n{pad}    public int compare(String l, String r) {{ return {}; }}\n{pad}}};",
                self.call(0)
            ),
            _ => format!("if ({} instanceof String str) {{ {}; }}", self.pick(VARS), self.call(0)),
        }
    }

    fn fresh_var(&mut self) -> String {
        format!("v{}", self.rng.gen_range(0..100000))
    }

    fn cond(&mut self) -> String {
        match self.rng.gen_range(0..4) {
            0 => format!("{} > {}", self.pick(VARS), self.rng.gen_range(0..9)),
            1 => format!("{} < {}", self.pick(VARS), self.pick(VARS)),
            2 => format!("!{}", self.call(1)),
            _ => format!("{} == null", self.pick(VARS)),
        }
    }

    fn expr(&mut self, depth: u32) -> String {
        if depth > 2 {
            return self.pick(VARS).to_string();
        }
        match self.rng.gen_range(0..9) {
            0..=2 => self.call(depth + 1),
            3 => format!("{} + {}", self.expr(depth + 1), self.expr(depth + 1)),
            4 => format!("new java.util.HashMap<String, Integer>({})", self.rng.gen_range(1..9)),
            5 => format!("({}) {}", self.pick(&["String", "Object", "Integer"]), self.expr(depth + 1)),
            6 => format!("{} ? {} : {}", self.cond(), self.expr(depth + 1), self.expr(depth + 1)),
            7 => format!("new int[] {{ {}, 2 }}", self.rng.gen_range(0..9)),
            _ => self.pick(VARS).to_string(),
        }
    }

    fn call(&mut self, depth: u32) -> String {
        let n = self.rng.gen_range(0..4);
        let args: Vec<String> = (0..n)
            .map(|_| if depth < 3 { self.expr(depth + 1) } else { self.pick(VARS).to_string() })
            .collect();
        let name = self.name();
        match self.rng.gen_range(0..6) {
            0 => format!("{name}({})", args.join(", ")),
            1 => format!("{}.{name}({})", self.pick(RECV), args.join(", ")),
            2 => format!("{}.{name}({}).{}()", self.pick(RECV), args.join(", "), self.name()),
            3 => format!("Collections.<String, Integer>{name}({})", args.join(", ")),
            4 => format!("new Builder({}).{name}()", args.join(", ")),
            _ => format!("{}[0].{name}({})", self.pick(VARS), args.join(", ")),
        }
    }
}

fn indent(s: &str) -> String {
    s.lines()
        .map(|l| if l.is_empty() { String::new() } else { format!("    {l}\n") })
        .collect()
}
