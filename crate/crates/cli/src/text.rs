//! Plain-text rendering of a JSON report: one `path: value` line per leaf,
//! with short arrays of scalars kept on one line.

use serde_json::Value;

pub fn render(v: &Value) -> String {
    let mut out = String::new();
    walk(v, "", &mut out);
    out
}

fn scalar(v: &Value) -> Option<String> {
    match v {
        Value::Null => Some("-".into()),
        Value::Bool(b) => Some(b.to_string()),
        Value::Number(n) => Some(n.to_string()),
        Value::String(s) => Some(s.clone()),
        Value::Array(a) if a.len() <= 16 && a.iter().all(|x| !x.is_object() && !x.is_array()) => {
            Some(format!("[{}]", a.iter().filter_map(scalar).collect::<Vec<_>>().join(", ")))
        }
        _ => None,
    }
}

fn walk(v: &Value, path: &str, out: &mut String) {
    if let Some(s) = scalar(v) {
        out.push_str(&format!("{path}: {s}\n"));
        return;
    }
    let join = |k: &str| if path.is_empty() { k.to_string() } else { format!("{path}.{k}") };
    match v {
        Value::Object(m) => {
            // an abelian group renders as its structure string
            if let Some(Value::String(s)) = m.get("structure") {
                out.push_str(&format!("{path}: {s}\n"));
                return;
            }
            for (k, x) in m {
                walk(x, &join(k), out);
            }
        }
        Value::Array(a) => {
            for (i, x) in a.iter().enumerate() {
                walk(x, &format!("{path}[{i}]"), out);
            }
        }
        _ => unreachable!("scalars handled above"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn renders_paths() {
        let v = serde_json::json!({"a": {"structure": "Z/2", "free_rank": 0}, "b": [1, 2], "c": [{"d": true}]});
        assert_eq!(render(&v), "a: Z/2\nb: [1, 2]\nc[0].d: true\n");
    }
}
