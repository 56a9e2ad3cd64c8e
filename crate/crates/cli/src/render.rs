//! Markdown rendering of the JSON documents.

use std::fmt::Write;

use serde_json::Value as Json;

fn cell(v: &Json) -> String {
    match v {
        Json::Null => String::new(),
        Json::String(s) => format!("`{}`", s.replace('|', "\\|")),
        other => format!("`{other}`"),
    }
}

fn entries_table(out: &mut String, entries: &[Json]) {
    out.push_str("| index | value |\n|---|---|\n");
    for e in entries {
        let _ = writeln!(out, "| {} | {} |", cell(&e["index"]), cell(&e["value"]));
    }
    out.push('\n');
}

pub fn verify_md(doc: &Json) -> String {
    let mut out = String::from("# verify\n\n");
    for run in doc["runs"].as_array().into_iter().flatten() {
        let point = run["point"].as_str().map(|p| format!(" at s = {p}")).unwrap_or_default();
        let _ = writeln!(
            out,
            "## N = {} ({}{point}): {} passed, {} failed, {} info\n",
            run["n"], run["mode"].as_str().unwrap_or(""), run["passed"], run["failed"], run["info"]
        );
        out.push_str("| check | status | residual | ms |\n|---|---|---|---|\n");
        for c in run["checks"].as_array().into_iter().flatten() {
            let _ = writeln!(
                out,
                "| {} | {} | {} | {} |",
                c["check_id"].as_str().unwrap_or(""),
                c["status"].as_str().unwrap_or(""),
                cell(&c["residual"]),
                c["timing_ms"].as_u64().map(|t| t.to_string()).unwrap_or_default()
            );
        }
        out.push('\n');
    }
    let _ = writeln!(out, "all pass: {}", doc["all_pass"]);
    out
}

fn walk(out: &mut String, title: &str, v: &Json) {
    match v {
        Json::Array(items) if items.iter().all(|e| e.get("index").is_some()) => {
            let _ = writeln!(out, "### {title}\n");
            entries_table(out, items);
        }
        Json::Object(map) => {
            for (k, v) in map {
                let t = if title.is_empty() { k.clone() } else { format!("{title}.{k}") };
                walk(out, &t, v);
            }
        }
        other => {
            let _ = writeln!(out, "- {title}: {}\n", cell(other));
        }
    }
}

pub fn emit_md(doc: &Json) -> String {
    let mut out = format!("# emit {} (N = {})\n\n", doc["what"].as_str().unwrap_or(""), doc["n"]);
    walk(&mut out, "", &doc["data"]);
    out
}

/// Key/value documents (`normalize`, `parse-check`).
pub fn fields_md(doc: &Json) -> String {
    let mut out = format!("# {}\n\n", doc["command"].as_str().unwrap_or(""));
    for (k, v) in doc.as_object().into_iter().flatten() {
        if k != "command" && k != "schema" {
            let _ = writeln!(out, "- {k}: {}", cell(v));
        }
    }
    out
}
