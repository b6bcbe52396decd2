//! Plain-text tables and shared JSON pieces.

use padic_entropy::PadicScalar;
use serde_json::{json, Value};

pub const SCHEMA_VERSION: u32 = 1;

/// Left-aligned columns separated by two spaces.
pub fn table(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut width: Vec<usize> = header.iter().map(|h| h.len()).collect();
    for row in rows {
        for (w, cell) in width.iter_mut().zip(row) {
            *w = (*w).max(cell.len());
        }
    }
    let line = |cells: Vec<&str>| {
        let s: Vec<String> = cells.iter().zip(&width).map(|(c, w)| format!("{c:<w$}")).collect();
        s.join("  ").trim_end().to_string() + "\n"
    };
    let mut out = line(header.to_vec());
    for row in rows {
        out += &line(row.iter().map(String::as_str).collect());
    }
    out
}

/// `key  value` lines.
pub fn fields(pairs: &[(&str, String)]) -> String {
    let w = pairs.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
    pairs.iter().map(|(k, v)| format!("{k:<w$}  {v}\n")).collect()
}

/// `residue (mod p^k)` for p-adic integers, the full form otherwise.
pub fn padic(x: &PadicScalar) -> String {
    match x.to_residue() {
        Some(r) => format!("{r} (mod {}^{})", x.prime(), x.abs_precision()),
        None => x.to_string(),
    }
}

pub fn envelope(command: &str, result: Value) -> String {
    let doc = json!({ "schema_version": SCHEMA_VERSION, "command": command, "result": result });
    serde_json::to_string_pretty(&doc).expect("serializable") + "\n"
}

pub fn error_envelope(command: &str, code: &str, message: &str) -> String {
    let doc = json!({
        "schema_version": SCHEMA_VERSION,
        "command": command,
        "error": { "code": code, "message": message },
    });
    serde_json::to_string_pretty(&doc).expect("serializable") + "\n"
}
