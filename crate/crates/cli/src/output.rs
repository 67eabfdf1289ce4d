use serde_json::{json, Map, Value};

use crate::args::{Cli, Format};
use crate::commands::Output;

pub const SCHEMA: &str = "stab/1";

fn config(cli: &Cli, argv: &[String]) -> Value {
    json!({
        "argv": argv,
        "format": format!("{:?}", cli.format).to_lowercase(),
        "seed": cli.seed,
        "workers": cli.workers,
        "version": env!("CARGO_PKG_VERSION"),
    })
}

fn flatten(prefix: &str, v: &Value, out: &mut Map<String, Value>) {
    match v {
        Value::Object(m) => {
            for (k, x) in m {
                let key = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                flatten(&key, x, out);
            }
        }
        _ => {
            out.insert(prefix.to_string(), v.clone());
        }
    }
}

fn cell(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::String(s) => s.clone(),
        Value::Array(a) => a.iter().map(cell).collect::<Vec<_>>().join(" "),
        other => other.to_string(),
    }
}

fn csv_table(result: &Value) -> String {
    let rows: Vec<Map<String, Value>> = match result.get("rows").and_then(Value::as_array) {
        Some(rows) => rows
            .iter()
            .map(|r| {
                let mut m = Map::new();
                flatten("", r, &mut m);
                m
            })
            .collect(),
        None => {
            let mut m = Map::new();
            flatten("", result, &mut m);
            vec![m]
        }
    };
    let header: Vec<String> = rows.first().map(|r| r.keys().cloned().collect()).unwrap_or_default();
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(&header).expect("in-memory write");
    for r in &rows {
        w.write_record(header.iter().map(|k| r.get(k).map(cell).unwrap_or_default())).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf8 output")
}

pub fn render(cli: &Cli, argv: &[String], out: &Output) -> String {
    match cli.format {
        Format::Json => {
            let body = json!({"schema": SCHEMA, "config": config(cli, argv), "result": out.result});
            format!("{}\n", serde_json::to_string_pretty(&body).expect("json output"))
        }
        Format::Csv => format!("# {SCHEMA} {}\n{}", argv.join(" "), csv_table(&out.result)),
        Format::Human => {
            let mut s = String::new();
            for line in &out.human {
                s.push_str(line);
                s.push('\n');
            }
            s
        }
    }
}
