//! Output in the two formats. JSON output is the machine dump; pretty output
//! renders `X^a` as `D[a1,...,an]` and tensors with `⊗`.

use std::fmt::Write;

use deformq::cochain::{tensor_to_string, Bivector, Cochain};
use deformq::exactmath::Poly;
use deformq::hochschild::GradedBlock;
use deformq::starprod::{AssocReport, BiderivationSeries, StarProduct};
use serde::Serialize;
use serde_json::json;

use crate::config::Format;

fn dump<T: Serialize + ?Sized>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("plain data serializes");
    s.push('\n');
    s
}

pub fn cochain(c: &Cochain, format: Format) -> String {
    match format {
        Format::Json => dump(&c.to_json()),
        Format::Pretty => format!("{}\n", c.pretty()),
    }
}

pub fn star(star: &StarProduct, pi: Option<&BiderivationSeries>, format: Format) -> String {
    match format {
        Format::Json => dump(&star.to_json(pi)),
        Format::Pretty => {
            let mut out = String::new();
            if let Some(pi) = pi {
                out.push_str(&biderivations(pi, format));
            }
            for k in 1..=star.order() {
                writeln!(out, "Π_{k} = {}", star.coeff(k).pretty()).unwrap();
            }
            out
        }
    }
}

pub fn biderivations(pi: &BiderivationSeries, format: Format) -> String {
    match format {
        Format::Json => dump(&pi.to_json()),
        Format::Pretty => {
            let mut out = String::new();
            for (k, b) in pi.terms().iter().enumerate() {
                writeln!(out, "π_{} = {}", k + 1, bivector_pretty(b)).unwrap();
            }
            out
        }
    }
}

fn bivector_pretty(b: &Bivector) -> String {
    let entries: Vec<String> = b
        .upper()
        .map(|(i, j, p)| format!("[{},{}]: {p}", i + 1, j + 1))
        .collect();
    if entries.is_empty() {
        "0".into()
    } else {
        entries.join(", ")
    }
}

pub fn series(coeffs: &[Poly], format: Format) -> String {
    match format {
        Format::Json => dump(&json!({
            "order": coeffs.len() - 1,
            "coefficients": coeffs.iter().map(ToString::to_string).collect::<Vec<_>>(),
        })),
        Format::Pretty => {
            let mut out = String::new();
            for (k, p) in coeffs.iter().enumerate() {
                writeln!(out, "t^{k}: {p}").unwrap();
            }
            out
        }
    }
}

pub fn assoc(report: &AssocReport, trials: usize, format: Format) -> String {
    let rows: Vec<(usize, bool, usize)> = report
        .operator
        .iter()
        .zip(&report.evaluated)
        .enumerate()
        .map(|(i, (op, ev))| {
            (
                i + 1,
                op.is_zero(),
                ev.iter().filter(|p| !p.is_zero()).count(),
            )
        })
        .collect();
    match format {
        Format::Json => dump(&json!({
            "trials": trials,
            "associative": report.first_failure().is_none(),
            "orders": rows.iter().map(|(k, op, bad)| json!({
                "order": k,
                "operator_zero": op,
                "failing_triples": bad,
            })).collect::<Vec<_>>(),
        })),
        Format::Pretty => {
            let mut out = String::new();
            for ((k, op, bad), residual) in rows.iter().zip(&report.operator) {
                let status = if *op && *bad == 0 { "ok" } else { "FAIL" };
                writeln!(out, "order {k}: {status} ({bad}/{trials} triples fail)").unwrap();
                if !op {
                    writeln!(out, "  residual: {}", residual.pretty()).unwrap();
                }
            }
            out
        }
    }
}

pub fn decomposition(pi: &Bivector, lambda: &Cochain, format: Format) -> String {
    match format {
        Format::Json => dump(&json!({
            "pi": serde_json::to_value(pi.to_json()).expect("plain data serializes"),
            "lambda": lambda.to_json(),
        })),
        Format::Pretty => format!("π = {}\nλ = {}\n", bivector_pretty(pi), lambda.pretty()),
    }
}

pub fn block(b: &GradedBlock, format: Format) -> String {
    let source: Vec<String> = b.source.iter().map(|t| tensor_to_string(t)).collect();
    let target: Vec<String> = b.target.iter().map(|t| tensor_to_string(t)).collect();
    let rows: Vec<Vec<String>> = (0..b.matrix.rows())
        .map(|i| b.matrix.row(i).iter().map(ToString::to_string).collect())
        .collect();
    match format {
        Format::Json => dump(&json!({
            "op": b.op.name(),
            "arity_in": b.arity_in,
            "arity_out": b.arity_out,
            "grade": b.grade,
            "dim": b.dim,
            "source": source,
            "target": target,
            "matrix": rows,
        })),
        Format::Pretty => {
            let mut out = String::new();
            writeln!(
                out,
                "{} block, arity {} -> {}, grade {}, dim {}: {}x{}",
                b.op.name(),
                b.arity_in,
                b.arity_out,
                b.grade,
                b.dim,
                rows.len(),
                source.len()
            )
            .unwrap();
            for (t, row) in target.iter().zip(&rows) {
                let entries: Vec<String> = row
                    .iter()
                    .zip(&source)
                    .filter(|(v, _)| v.as_str() != "0")
                    .map(|(v, s)| format!("({v}) {s}"))
                    .collect();
                let rhs = if entries.is_empty() {
                    "0".to_string()
                } else {
                    entries.join(" + ")
                };
                writeln!(out, "{t} <- {rhs}").unwrap();
            }
            out
        }
    }
}
