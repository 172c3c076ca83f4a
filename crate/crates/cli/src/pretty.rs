//! Plain-text tables for `--pretty`.

use serde_json::Value;

/// `{"re": .., "im": ..}` as `a`, `bi` or `a+bi`, with `p/1` shown as `p`.
fn scalar(v: &Value) -> String {
    let part = |key: &str| -> (String, bool) {
        match v.get(key) {
            Some(Value::String(s)) => {
                let s = s.strip_suffix("/1").unwrap_or(s).to_string();
                let zero = s == "0";
                (s, zero)
            }
            Some(Value::Number(n)) => {
                let zero = n.as_f64() == Some(0.0);
                (n.to_string(), zero)
            }
            _ => ("0".into(), true),
        }
    };
    let ((re, re_zero), (im, im_zero)) = (part("re"), part("im"));
    match (re_zero, im_zero) {
        (_, true) => re,
        (true, false) => format!("{im}i"),
        (false, false) if im.starts_with('-') => format!("{re}{im}i"),
        (false, false) => format!("{re}+{im}i"),
    }
}

fn labels(v: Option<&Value>, n: usize) -> Vec<String> {
    match v.and_then(Value::as_array) {
        Some(ls) => ls.iter().map(|l| l.to_string()).collect(),
        None => (0..n).map(|k| k.to_string()).collect(),
    }
}

fn table(rows: &[Vec<String>]) -> String {
    let cols = rows.iter().map(Vec::len).max().unwrap_or(0);
    let widths: Vec<usize> = (0..cols)
        .map(|c| rows.iter().filter_map(|r| r.get(c)).map(|s| s.chars().count()).max().unwrap_or(0))
        .collect();
    let mut out = String::new();
    for r in rows {
        let cells: Vec<String> = r.iter().zip(&widths).map(|(s, w)| format!("{s:>w$}")).collect();
        out.push_str(cells.join("  ").trim_end());
        out.push('\n');
    }
    out
}

fn matrix(v: &Value) -> String {
    let data = v["data"].as_array().cloned().unwrap_or_default();
    let cols = v["cols"].as_u64().unwrap_or(0) as usize;
    let row_labels = labels(v.get("row_labels"), data.len());
    let mut rows = vec![std::iter::once(String::new()).chain(labels(v.get("col_labels"), cols)).collect::<Vec<_>>()];
    for (label, row) in row_labels.into_iter().zip(&data) {
        let cells = row.as_array().map(|r| r.iter().map(scalar).collect::<Vec<_>>()).unwrap_or_default();
        rows.push(std::iter::once(label).chain(cells).collect());
    }
    table(&rows)
}

fn point(v: &Value) -> String {
    let coords: Vec<String> = v.as_array().map(|a| a.iter().map(|c| c.to_string()).collect()).unwrap_or_default();
    format!("({})", coords.join(","))
}

fn entries(v: &Value) -> String {
    let mut rows = Vec::new();
    for e in v["entries"].as_array().into_iter().flatten() {
        let mut row = Vec::new();
        if let Some(p) = e.get("point") {
            row.push(point(p));
        } else {
            row.push(point(&e["row"]));
            row.push(point(&e["col"]));
        }
        row.push(scalar(&e["value"]));
        rows.push(row);
    }
    if rows.is_empty() {
        "(all entries zero)\n".into()
    } else {
        table(&rows)
    }
}

fn jordan(spec: &Value) -> String {
    let rows: Vec<Vec<String>> = spec["blocks"]
        .as_array()
        .into_iter()
        .flatten()
        .map(|b| vec![format!("J_{}", b["size"]), format!("({})", scalar(&b["eigenvalue"]))])
        .collect();
    table(&rows)
}

pub fn render(v: &Value) -> String {
    if v.get("data").is_some() && v.get("rows").is_some() {
        return matrix(v);
    }
    if v.get("data").is_some() && v.get("n").is_some() {
        let data = v["data"].as_array().cloned().unwrap_or_default();
        let ls = labels(v.get("labels"), data.len());
        let rows: Vec<Vec<String>> = ls.into_iter().zip(&data).map(|(l, x)| vec![l, scalar(x)]).collect();
        return table(&rows);
    }
    if v.get("entries").is_some() {
        return entries(v);
    }
    if let Some(k) = v.get("kappa") {
        return format!("kappa = {}\n", scalar(k));
    }
    if let Some(closed) = v.get("closed_form") {
        let mut out = format!("closed form:\n{}", jordan(closed));
        if let Some(oracle) = v.get("oracle") {
            out.push_str(&format!("oracle:\n{}agree: {}\n", jordan(oracle), v["agree"]));
        }
        return out;
    }
    if let Some(suite) = v.get("suite").and_then(Value::as_str) {
        let mut out = format!(
            "{suite}: {}/{} passed (seed {})\n",
            v["passed"], v["trials"], v["seed"]
        );
        for f in v["failures"].as_array().into_iter().flatten() {
            out.push_str(&format!("  {f}\n"));
        }
        return out;
    }
    if let Some(check) = v.get("check").and_then(Value::as_str) {
        let perm: Vec<String> = v["details"]["permutation"]
            .as_array()
            .into_iter()
            .flatten()
            .map(|x| x.to_string())
            .collect();
        return format!("{check}: {}\npermutation: [{}]\n", v["passed"], perm.join(", "));
    }
    stretchkit::json::render(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn scalars() {
        assert_eq!(scalar(&json!({ "re": "3/1", "im": "0/1" })), "3");
        assert_eq!(scalar(&json!({ "re": "0/1", "im": "-1/2" })), "-1/2i");
        assert_eq!(scalar(&json!({ "re": "1/1", "im": "-2/1" })), "1-2i");
        assert_eq!(scalar(&json!({ "re": 0.5, "im": 0.0 })), "0.5");
    }

    #[test]
    fn labeled_matrix() {
        let v = json!({
            "rows": 2, "cols": 2, "scalar": "gq",
            "row_labels": [-1, 0], "col_labels": [-1, 0],
            "data": [[{ "re": "1/1", "im": "0/1" }, { "re": "0/1", "im": "0/1" }],
                     [{ "re": "0/1", "im": "0/1" }, { "re": "10/1", "im": "0/1" }]],
        });
        assert_eq!(render(&v), "    -1   0\n-1   1   0\n 0   0  10\n");
    }
}
