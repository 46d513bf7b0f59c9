use serde_json::{json, Value};
use sha2::{Digest, Sha256};

/// Everything a command produces; the format flag picks what is printed.
pub struct Report {
    pub command: &'static str,
    pub table: String,
    pub json: Value,
    pub dot: Option<String>,
    /// Names of identity checks that failed.
    pub failures: Vec<String>,
}

impl Report {
    pub fn new(command: &'static str) -> Self {
        Report { command, table: String::new(), json: json!({}), dot: None, failures: Vec::new() }
    }

    pub fn check(&mut self, name: impl Into<String>, ok: bool) -> bool {
        if !ok {
            self.failures.push(name.into());
        }
        ok
    }

    /// JSON envelope with sorted keys (serde_json maps are ordered).
    pub fn envelope(&self) -> Value {
        let mut v = self.json.clone();
        if let Value::Object(m) = &mut v {
            m.insert("schema".into(), json!("lgc/1"));
            m.insert("command".into(), json!(self.command));
            m.insert("failures".into(), json!(self.failures));
        }
        v
    }
}

/// Left-aligned text table.
pub fn table(title: &str, header: &[&str], rows: &[Vec<String>]) -> String {
    let mut width: Vec<usize> = header.iter().map(|h| h.chars().count()).collect();
    for r in rows {
        for (k, c) in r.iter().enumerate() {
            width[k] = width[k].max(c.chars().count());
        }
    }
    let line = |cells: Vec<&str>| -> String {
        let parts: Vec<String> =
            cells.iter().zip(&width).map(|(c, w)| format!("{c}{}", " ".repeat(w - c.chars().count()))).collect();
        parts.join("  ").trim_end().to_string()
    };
    let mut out = format!("{title}\n");
    out.push_str(&line(header.to_vec()));
    out.push('\n');
    let sep: Vec<String> = width.iter().map(|&w| "-".repeat(w)).collect();
    out.push_str(&line(sep.iter().map(String::as_str).collect()));
    out.push('\n');
    for r in rows {
        out.push_str(&line(r.iter().map(String::as_str).collect()));
        out.push('\n');
    }
    out
}

/// Stable vertex name: the first 16 hex digits of the SHA-256 of a key.
pub fn content_hash(key: &str) -> String {
    let d = Sha256::digest(key.as_bytes());
    format!("v{}", &hex::encode(d)[..16])
}

pub fn join<T: std::fmt::Display>(xs: &[T], sep: &str) -> String {
    xs.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(sep)
}
