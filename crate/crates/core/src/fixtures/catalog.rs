//! Custom-method templates, each paired with the library API that
//! replaces it.

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Template {
    pub method: &'static str,
    pub return_type: &'static str,
    pub params: &'static str,
    pub body: &'static [&'static str],
    /// Parameters of the calling method.
    pub caller_params: &'static str,
    pub caller_return: &'static str,
    /// Call-site statement; `{recv}` and `{m}` are substituted.
    pub old_stmt: &'static str,
    /// Rewritten statement; `{recv}` names the API class.
    pub new_stmt: &'static str,
    pub api_class: &'static str,
    pub api_name: &'static str,
    pub api_package: &'static str,
    pub library: &'static str,
}

impl Template {
    pub fn arity(&self) -> usize {
        if self.params.trim().is_empty() {
            0
        } else {
            self.params.split(',').count()
        }
    }

    pub fn param_names(&self) -> Vec<&'static str> {
        self.params
            .split(',')
            .filter_map(|p| p.split_whitespace().last())
            .collect()
    }

    pub fn api_import(&self) -> String {
        format!("{}.{}", self.api_package, self.api_class)
    }
}

pub const LANG3: &str = "org.apache.commons:commons-lang3:3.12.0";
pub const COLLECTIONS4: &str = "org.apache.commons:commons-collections4:4.4";
pub const TEXT: &str = "org.apache.commons:commons-text:1.10.0";

const L3: &str = "org.apache.commons.lang3";

pub const TEMPLATES: &[Template] = &[
    Template {
        method: "indexOf",
        return_type: "int",
        params: "String[] array, String name",
        body: &[
            "for (int i = 0; i < array.length; i++) {",
            "    if (array[i].equals(name)) {",
            "        return i;",
            "    }",
            "}",
            "return -1;",
        ],
        caller_params: "String[] values, String key",
        caller_return: "boolean",
        old_stmt: "return {recv}.{m}(values, key) != -1;",
        new_stmt: "return {recv}.contains(values, key);",
        api_class: "ArrayUtils",
        api_name: "contains",
        api_package: L3,
        library: LANG3,
    },
    Template {
        method: "looksNumeric",
        return_type: "boolean",
        params: "String text",
        body: &[
            "if (text == null || text.length() == 0) {",
            "    return false;",
            "}",
            "try {",
            "    Double.parseDouble(text);",
            "    return true;",
            "} catch (NumberFormatException e) {",
            "    return false;",
            "}",
        ],
        caller_params: "String input",
        caller_return: "boolean",
        old_stmt: "return {recv}.{m}(input);",
        new_stmt: "return {recv}.isCreatable(input);",
        api_class: "NumberUtils",
        api_name: "isCreatable",
        api_package: "org.apache.commons.lang3.math",
        library: LANG3,
    },
    Template {
        method: "randomString",
        return_type: "String",
        params: "int length",
        body: &[
            "StringBuilder sb = new StringBuilder(length);",
            "java.util.Random random = new java.util.Random();",
            "for (int i = 0; i < length; i++) {",
            "    sb.append((char) ('a' + random.nextInt(26)));",
            "}",
            "return sb.toString();",
        ],
        caller_params: "int size",
        caller_return: "String",
        old_stmt: "return {recv}.{m}(size);",
        new_stmt: "return {recv}.randomAlphabetic(size);",
        api_class: "RandomStringUtils",
        api_name: "randomAlphabetic",
        api_package: L3,
        library: LANG3,
    },
    Template {
        method: "isBlankText",
        return_type: "boolean",
        params: "String s",
        body: &[
            "if (s == null) {",
            "    return true;",
            "}",
            "for (int i = 0; i < s.length(); i++) {",
            "    if (!Character.isWhitespace(s.charAt(i))) {",
            "        return false;",
            "    }",
            "}",
            "return true;",
        ],
        caller_params: "String value",
        caller_return: "boolean",
        old_stmt: "return !{recv}.{m}(value);",
        new_stmt: "return !{recv}.isBlank(value);",
        api_class: "StringUtils",
        api_name: "isBlank",
        api_package: L3,
        library: LANG3,
    },
    Template {
        method: "capitalizeFirst",
        return_type: "String",
        params: "String word",
        body: &[
            "if (word == null || word.length() == 0) {",
            "    return word;",
            "}",
            "return Character.toUpperCase(word.charAt(0)) + word.substring(1);",
        ],
        caller_params: "String title",
        caller_return: "String",
        old_stmt: "return \"* \" + {recv}.{m}(title);",
        new_stmt: "return \"* \" + {recv}.capitalize(title);",
        api_class: "StringUtils",
        api_name: "capitalize",
        api_package: L3,
        library: LANG3,
    },
    Template {
        method: "joinWith",
        return_type: "String",
        params: "java.util.List<String> parts, String separator",
        body: &[
            "StringBuilder sb = new StringBuilder();",
            "for (int i = 0; i < parts.size(); i++) {",
            "    if (i > 0) {",
            "        sb.append(separator);",
            "    }",
            "    sb.append(parts.get(i));",
            "}",
            "return sb.toString();",
        ],
        caller_params: "java.util.List<String> items",
        caller_return: "String",
        old_stmt: "return {recv}.{m}(items, \", \");",
        new_stmt: "return {recv}.join(items, \", \");",
        api_class: "StringUtils",
        api_name: "join",
        api_package: L3,
        library: LANG3,
    },
    Template {
        method: "reverseInPlace",
        return_type: "void",
        params: "int[] data",
        body: &[
            "for (int i = 0, j = data.length - 1; i < j; i++, j--) {",
            "    int tmp = data[i];",
            "    data[i] = data[j];",
            "    data[j] = tmp;",
            "}",
        ],
        caller_params: "int[] samples",
        caller_return: "void",
        old_stmt: "{recv}.{m}(samples);",
        new_stmt: "{recv}.reverse(samples);",
        api_class: "ArrayUtils",
        api_name: "reverse",
        api_package: L3,
        library: LANG3,
    },
    Template {
        method: "maxValue",
        return_type: "int",
        params: "int[] values",
        body: &[
            "int best = values[0];",
            "for (int v : values) {",
            "    if (v > best) {",
            "        best = v;",
            "    }",
            "}",
            "return best;",
        ],
        caller_params: "int[] readings",
        caller_return: "int",
        old_stmt: "return {recv}.{m}(readings);",
        new_stmt: "return {recv}.max(readings);",
        api_class: "NumberUtils",
        api_name: "max",
        api_package: "org.apache.commons.lang3.math",
        library: LANG3,
    },
    Template {
        method: "repeatText",
        return_type: "String",
        params: "String s, int times",
        body: &[
            "StringBuilder sb = new StringBuilder();",
            "for (int i = 0; i < times; i++) {",
            "    sb.append(s);",
            "}",
            "return sb.toString();",
        ],
        caller_params: "String unit, int count",
        caller_return: "String",
        old_stmt: "return {recv}.{m}(unit, count);",
        new_stmt: "return {recv}.repeat(unit, count);",
        api_class: "StringUtils",
        api_name: "repeat",
        api_package: L3,
        library: LANG3,
    },
    Template {
        method: "isEmptyCollection",
        return_type: "boolean",
        params: "java.util.Collection<?> c",
        body: &["return c == null || c.size() == 0;"],
        caller_params: "java.util.Collection<String> names",
        caller_return: "boolean",
        old_stmt: "return {recv}.{m}(names);",
        new_stmt: "return {recv}.isEmpty(names);",
        api_class: "CollectionUtils",
        api_name: "isEmpty",
        api_package: "org.apache.commons.collections4",
        library: COLLECTIONS4,
    },
    Template {
        method: "orDefault",
        return_type: "Object",
        params: "Object value, Object fallback",
        body: &[
            "if (value != null) {",
            "    return value;",
            "}",
            "return fallback;",
        ],
        caller_params: "Object setting",
        caller_return: "Object",
        old_stmt: "return {recv}.{m}(setting, \"none\");",
        new_stmt: "return {recv}.defaultIfNull(setting, \"none\");",
        api_class: "ObjectUtils",
        api_name: "defaultIfNull",
        api_package: L3,
        library: LANG3,
    },
    Template {
        method: "shorten",
        return_type: "String",
        params: "String s, int max",
        body: &[
            "if (s.length() <= max) {",
            "    return s;",
            "}",
            "return s.substring(0, max - 3) + \"...\";",
        ],
        caller_params: "String message",
        caller_return: "String",
        old_stmt: "return {recv}.{m}(message, 40);",
        new_stmt: "return {recv}.abbreviate(message, 40);",
        api_class: "StringUtils",
        api_name: "abbreviate",
        api_package: L3,
        library: LANG3,
    },
    Template {
        method: "countChar",
        return_type: "int",
        params: "String s, char c",
        body: &[
            "int n = 0;",
            "for (char x : s.toCharArray()) {",
            "    if (x == c) {",
            "        n++;",
            "    }",
            "}",
            "return n;",
        ],
        caller_params: "String path",
        caller_return: "int",
        old_stmt: "return {recv}.{m}(path, '/');",
        new_stmt: "return {recv}.countMatches(path, '/');",
        api_class: "StringUtils",
        api_name: "countMatches",
        api_package: L3,
        library: LANG3,
    },
    Template {
        method: "leftPadZeros",
        return_type: "String",
        params: "String s, int width",
        body: &[
            "StringBuilder sb = new StringBuilder();",
            "while (sb.length() + s.length() < width) {",
            "    sb.append('0');",
            "}",
            "return sb.append(s).toString();",
        ],
        caller_params: "String code",
        caller_return: "String",
        old_stmt: "return {recv}.{m}(code, 8);",
        new_stmt: "return {recv}.leftPad(code, 8, '0');",
        api_class: "StringUtils",
        api_name: "leftPad",
        api_package: L3,
        library: LANG3,
    },
    Template {
        method: "escapeForHtml",
        return_type: "String",
        params: "String raw",
        body: &[
            "return raw.replace(\"&\", \"&amp;\")",
            "        .replace(\"<\", \"&lt;\")",
            "        .replace(\">\", \"&gt;\");",
        ],
        caller_params: "String comment",
        caller_return: "String",
        old_stmt: "return \"<p>\" + {recv}.{m}(comment) + \"</p>\";",
        new_stmt: "return \"<p>\" + {recv}.escapeHtml4(comment) + \"</p>\";",
        api_class: "StringEscapeUtils",
        api_name: "escapeHtml4",
        api_package: "org.apache.commons.text",
        library: TEXT,
    },
    Template {
        method: "wrapLines",
        return_type: "String",
        params: "String text, int width",
        body: &[
            "StringBuilder out = new StringBuilder();",
            "int col = 0;",
            "for (String word : text.split(\" \")) {",
            "    if (col + word.length() > width) {",
            "        out.append('\\n');",
            "        col = 0;",
            "    }",
            "    out.append(word).append(' ');",
            "    col += word.length() + 1;",
            "}",
            "return out.toString().trim();",
        ],
        caller_params: "String paragraph",
        caller_return: "String",
        old_stmt: "return {recv}.{m}(paragraph, 72);",
        new_stmt: "return {recv}.wrap(paragraph, 72);",
        api_class: "WordUtils",
        api_name: "wrap",
        api_package: "org.apache.commons.text",
        library: TEXT,
    },
    Template {
        method: "parseIntOr",
        return_type: "int",
        params: "String s, int fallback",
        body: &[
            "try {",
            "    return Integer.parseInt(s);",
            "} catch (NumberFormatException e) {",
            "    return fallback;",
            "}",
        ],
        caller_params: "String port",
        caller_return: "int",
        old_stmt: "return {recv}.{m}(port, 8080);",
        new_stmt: "return {recv}.toInt(port, 8080);",
        api_class: "NumberUtils",
        api_name: "toInt",
        api_package: "org.apache.commons.lang3.math",
        library: LANG3,
    },
    Template {
        method: "unionOf",
        return_type: "java.util.Collection<String>",
        params: "java.util.Collection<String> a, java.util.Collection<String> b",
        body: &[
            "java.util.Set<String> all = new java.util.LinkedHashSet<>(a);",
            "all.addAll(b);",
            "return all;",
        ],
        caller_params: "java.util.Collection<String> left, java.util.Collection<String> right",
        caller_return: "java.util.Collection<String>",
        old_stmt: "return {recv}.{m}(left, right);",
        new_stmt: "return {recv}.union(left, right);",
        api_class: "CollectionUtils",
        api_name: "union",
        api_package: "org.apache.commons.collections4",
        library: COLLECTIONS4,
    },
    Template {
        method: "invertCase",
        return_type: "String",
        params: "String s",
        body: &[
            "char[] cs = s.toCharArray();",
            "for (int i = 0; i < cs.length; i++) {",
            "    char c = cs[i];",
            "    cs[i] = Character.isUpperCase(c) ? Character.toLowerCase(c) : Character.toUpperCase(c);",
            "}",
            "return new String(cs);",
        ],
        caller_params: "String name",
        caller_return: "String",
        old_stmt: "return {recv}.{m}(name);",
        new_stmt: "return {recv}.swapCase(name);",
        api_class: "StringUtils",
        api_name: "swapCase",
        api_package: L3,
        library: LANG3,
    },
    Template {
        method: "isAllDigits",
        return_type: "boolean",
        params: "String s",
        body: &[
            "if (s == null || s.length() == 0) {",
            "    return false;",
            "}",
            "for (char c : s.toCharArray()) {",
            "    if (!Character.isDigit(c)) {",
            "        return false;",
            "    }",
            "}",
            "return true;",
        ],
        caller_params: "String zip",
        caller_return: "boolean",
        old_stmt: "return {recv}.{m}(zip);",
        new_stmt: "return {recv}.isNumeric(zip);",
        api_class: "StringUtils",
        api_name: "isNumeric",
        api_package: L3,
        library: LANG3,
    },
];

pub fn template(method: &str) -> Option<&'static Template> {
    TEMPLATES.iter().find(|t| t.method == method)
}
