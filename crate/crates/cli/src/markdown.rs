//! Markdown rendering of reports, driven by the JSON form so cached and
//! fresh runs print the same tables.

use std::fmt::Write;

use serde_json::Value;

fn cell(v: &Value) -> String {
    match v {
        Value::String(s) if s == "Infinite" => "∞".into(),
        Value::String(s) => s.clone(),
        Value::Null => "-".into(),
        Value::Object(m) if m.len() == 1 && m.contains_key("Finite") => m["Finite"].to_string(),
        other => other.to_string(),
    }
}

fn table(out: &mut String, head: &[&str], rows: impl IntoIterator<Item = Vec<String>>) {
    let _ = writeln!(out, "| {} |", head.join(" | "));
    let _ = writeln!(out, "|{}", "---|".repeat(head.len()));
    for r in rows {
        let _ = writeln!(out, "| {} |", r.join(" | "));
    }
    out.push('\n');
}

fn verdict(v: &Value) -> String {
    if v.is_null() {
        return "-".into();
    }
    let kind = if v["kind"] == "Exactly" { "Exactly" } else { "AtLeast" };
    format!("{kind}({}) [window {}]", v["k"], v["window"])
}

pub fn render(r: &Value) -> String {
    let mut out = String::new();
    let job = &r["job"];
    let ring = if job["ring"] == "F" { format!("F{}", job["prime"]) } else { "Z".into() };
    let _ = writeln!(out, "# cobarlab {}\n", cell(&r["command"]));
    let _ = writeln!(
        out,
        "input `{}` ({}...), ring {ring}, depth {}, window {}, level cap {}\n",
        cell(&job["input_name"]),
        &cell(&job["input_sha256"])[..12.min(cell(&job["input_sha256"]).len())],
        job["depth"],
        job["window"],
        job["level_cap"]
    );
    match r["command"].as_str().unwrap_or_default() {
        "homology" => {
            let rows = r["homology"]["rows"].as_array().cloned().unwrap_or_default();
            table(
                &mut out,
                &["degree", "reduced homology", "homotopy of free module", "agree"],
                rows.iter().map(|x| vec![cell(&x["degree"]), cell(&x["reduced_homology"]), cell(&x["homotopy"]), cell(&x["agree"])]),
            );
        }
        "resolve" => {
            let st = &r["stages"];
            let levels = st["levels"].as_array().cloned().unwrap_or_default();
            table(&mut out, &["stage", "dims by simplicial level"], levels.iter().enumerate().map(|(n, d)| vec![n.to_string(), cell(d)]));
            let _ = writeln!(out, "cosimplicial identities: {}\n", cell(&st["cosimplicial_identities"]));
            let tower = r["tower"].as_array().cloned().unwrap_or_default();
            table(
                &mut out,
                &["n", "Tot_n -> Tot_n-1", "claim", "status", "total fiber", "claim", "status"],
                tower.iter().map(|e| {
                    vec![
                        cell(&e["n"]),
                        verdict(&e["map_verdict"]),
                        cell(&e["claim"]),
                        cell(&e["status"]),
                        verdict(&e["total_fiber_verdict"]),
                        cell(&e["total_fiber_claim"]),
                        cell(&e["total_fiber_status"]),
                    ]
                }),
            );
            if let Some(n) = st["notice"].as_str() {
                let _ = writeln!(out, "notice: {n}\n");
            }
        }
        "cube" => {
            let c = &r["cube"];
            let _ = writeln!(out, "bound k = {} via partition {}\n", cell(&c["bound"]["k"]), cell(&c["bound"]["witness"]));
            let subs = c["cartesian"]["subcubes"].as_array().cloned().unwrap_or_default();
            table(
                &mut out,
                &["subcube", "claim", "measured cartesian", "status"],
                subs.iter().map(|s| vec![format!("base {} petals {}", s["embedding"]["base"], s["embedding"]["petals"]), cell(&s["claim"]), verdict(&s["verdict"]), cell(&s["status"])]),
            );
            let _ = writeln!(out, "cocartesian: {} ({})\n", verdict(&c["cocartesian"]), cell(&c["cocartesian_status"]));
        }
        "interchange" => {
            let c = &r["interchange"];
            let _ = writeln!(out, "stage n = {}: {}\n", c["n"], cell(&c["summary"]));
            table(
                &mut out,
                &["measured", "claim", "status"],
                [vec![verdict(&c["verdict"]), cell(&c["claim"]), cell(&c["status"])]],
            );
        }
        "ss" => {
            let s = &r["ss"];
            let _ = writeln!(out, "{}\n", cell(&s["summary"]));
            for p in s["pages"].as_array().cloned().unwrap_or_default() {
                let _ = writeln!(out, "## E^{}\n", p["r"]);
                let entries = p["entries"].as_array().cloned().unwrap_or_default();
                table(&mut out, &["s", "t", "dim"], entries.iter().map(|e| vec![cell(&e["s"]), cell(&e["t"]), cell(&e["dim"])]));
            }
            let c = &s["convergence"];
            let _ = writeln!(
                out,
                "stabilizes: {}, finitely many filtrations: {}, abutment matches: {}\n",
                c["stabilizes"], c["finitely_many"], c["abutment_matches"]
            );
        }
        _ => {}
    }
    let _ = writeln!(out, "violations: {}", r["violations"]);
    out
}
