use super::{HistoryError, ReplacedCallPair};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Segment {
    Context(String),
    Deleted(String),
    Added(String),
}

/// One body line of `git diff --word-diff=plain` output.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WordDiffLine {
    pub segments: Vec<Segment>,
    /// Line number on the new side (for pure deletions, the line the
    /// deletion sits before).
    pub new_line: u32,
}

impl WordDiffLine {
    /// Parent-side text: context plus deleted runs.
    pub fn old_side(&self) -> String {
        self.segments
            .iter()
            .filter_map(|s| match s {
                Segment::Context(t) | Segment::Deleted(t) => Some(t.as_str()),
                Segment::Added(_) => None,
            })
            .collect()
    }

    /// Commit-side text: context plus added runs.
    pub fn new_side(&self) -> String {
        self.segments
            .iter()
            .filter_map(|s| match s {
                Segment::Context(t) | Segment::Added(t) => Some(t.as_str()),
                Segment::Deleted(_) => None,
            })
            .collect()
    }

    fn has_new_side(&self) -> bool {
        self.segments.iter().any(|s| match s {
            Segment::Context(t) => !t.trim().is_empty(),
            Segment::Added(_) => true,
            Segment::Deleted(_) => false,
        })
    }
}

const HEADER_PREFIXES: &[&str] = &[
    "diff --git ", "index ", "--- ", "+++ ", "similarity index ", "dissimilarity index ", "rename from ",
    "rename to ", "copy from ", "copy to ", "new file mode ", "deleted file mode ", "old mode ", "new mode ",
    "Binary files ",
];

pub fn parse_word_diff(output: &str) -> Result<Vec<WordDiffLine>, HistoryError> {
    let mut lines = Vec::new();
    let mut in_hunk = false;
    let mut next_new: u32 = 0;
    for raw in output.lines() {
        if raw.starts_with("diff --git ") {
            in_hunk = false;
            continue;
        }
        if raw.starts_with("@@") {
            next_new = parse_hunk_new_start(raw)?;
            in_hunk = true;
            continue;
        }
        if !in_hunk {
            if raw.is_empty() || HEADER_PREFIXES.iter().any(|p| raw.starts_with(p)) {
                continue;
            }
            return Err(HistoryError::Malformed(format!("unexpected word-diff line {raw:?}")));
        }
        let segments = parse_line(raw)?;
        let line = WordDiffLine { segments, new_line: next_new };
        if line.has_new_side() {
            next_new += 1;
        }
        lines.push(line);
    }
    Ok(lines)
}

fn parse_hunk_new_start(header: &str) -> Result<u32, HistoryError> {
    // @@ -a[,b] +c[,d] @@ ...
    let bad = || HistoryError::Malformed(format!("hunk header {header:?}"));
    let plus = header.split_whitespace().nth(2).ok_or_else(bad)?;
    let start = plus.strip_prefix('+').ok_or_else(bad)?;
    let start = start.split(',').next().ok_or_else(bad)?;
    start.parse().map_err(|_| bad())
}

fn parse_line(raw: &str) -> Result<Vec<Segment>, HistoryError> {
    let mut segments = Vec::new();
    let mut context = String::new();
    let mut rest = raw;
    while !rest.is_empty() {
        let (open, close, is_del) = if rest.starts_with("[-") {
            ("[-", "-]", true)
        } else if rest.starts_with("{+") {
            ("{+", "+}", false)
        } else {
            let ch = rest.chars().next().expect("non-empty");
            context.push(ch);
            rest = &rest[ch.len_utf8()..];
            continue;
        };
        let body = &rest[open.len()..];
        let Some(end) = body.find(close) else {
            return Err(HistoryError::Malformed(format!("unterminated {open} in {raw:?}")));
        };
        if !context.is_empty() {
            segments.push(Segment::Context(std::mem::take(&mut context)));
        }
        let text = body[..end].to_string();
        segments.push(if is_del { Segment::Deleted(text) } else { Segment::Added(text) });
        rest = &body[end + close.len()..];
    }
    if !context.is_empty() {
        segments.push(Segment::Context(context));
    }
    Ok(segments)
}

/// Each deleted run immediately followed (modulo whitespace) by an added run.
pub fn replaced_pairs(lines: &[WordDiffLine], file_path: &str) -> Vec<ReplacedCallPair> {
    let mut pairs = Vec::new();
    for line in lines {
        let segs = &line.segments;
        let mut i = 0;
        while i < segs.len() {
            if let Segment::Deleted(old) = &segs[i] {
                let mut j = i + 1;
                if matches!(segs.get(j), Some(Segment::Context(c)) if c.trim().is_empty()) {
                    j += 1;
                }
                if let Some(Segment::Added(new)) = segs.get(j) {
                    let (old, new) = (old.trim(), new.trim());
                    if !old.is_empty() && !new.is_empty() {
                        pairs.push(ReplacedCallPair {
                            file_path: file_path.to_string(),
                            old_fragment: old.to_string(),
                            new_fragment: new.to_string(),
                            line_hint: line.new_line,
                        });
                    }
                    i = j + 1;
                    continue;
                }
            }
            i += 1;
        }
    }
    pairs
}
