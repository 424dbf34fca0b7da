//! Rendering of records, fits, verdicts and exploration reports as aligned
//! tables, CSV, canonical JSON, and plot-data series.

use std::str::FromStr;

use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::input::render_input;
use crate::lab::{
    Analysis, ExploreReport, FamilyEvaluation, FitEntry, FitKind, InvariantRecord, ModuleEntry,
    StableEntry, Verdict, VerdictStatus, VerifyReport,
};
use crate::modules::{FamilySpec, Val};
use crate::prime::{render_prime_set, MonomialPrime};
use crate::ring::Ring;

/// Output encodings shared by every subcommand.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Table,
    Csv,
    Json,
    Plot,
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Format> {
        match s {
            "table" => Ok(Format::Table),
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            "plot" => Ok(Format::Plot),
            other => Err(Error::invalid(format!(
                "unknown format `{other}` (expected table, csv, json, or plot)"
            ))),
        }
    }
}

fn module_entries(r: &InvariantRecord) -> Vec<(&'static str, &ModuleEntry)> {
    let mut out = vec![("M/I^nN", &r.quotient)];
    if let Some(layer) = &r.layer {
        out.push(("layer", layer));
    }
    out.extend([("(0:I)", &r.colon), ("Gamma", &r.gamma), ("M/N", &r.base)]);
    out
}

fn record_rows(r: &InvariantRecord, ring: &Ring) -> Vec<Vec<String>> {
    let n = r.n.to_string();
    let mut out = Vec::new();
    for (token, entry) in module_entries(r) {
        for (p, w) in &entry.vnum.locals {
            out.push(vec![
                n.clone(),
                token.to_string(),
                p.render(),
                w.value.to_string(),
                w.monomial.render(ring),
                entry.indeg.to_string(),
            ]);
        }
        out.push(vec![
            n.clone(),
            token.to_string(),
            "*".to_string(),
            entry.vnum.global.to_string(),
            String::new(),
            entry.indeg.to_string(),
        ]);
    }
    out.push(vec![
        n,
        "I^nN".to_string(),
        String::new(),
        String::new(),
        String::new(),
        r.indeg_power.to_string(),
    ]);
    out
}

fn records_csv(records: &[InvariantRecord], ring: &Ring) -> String {
    let mut wtr = csv::Writer::from_writer(Vec::new());
    wtr.write_record(["n", "module", "prime", "v", "witness", "indeg"])
        .expect("in-memory csv");
    for r in records {
        for row in record_rows(r, ring) {
            wtr.write_record(&row).expect("in-memory csv");
        }
    }
    String::from_utf8(wtr.into_inner().expect("in-memory csv")).expect("csv is utf-8")
}

/// Pads every column to its widest cell; trailing spaces are trimmed.
fn aligned(rows: &[Vec<String>]) -> String {
    let cols = rows.iter().map(Vec::len).max().unwrap_or(0);
    let mut width = vec![0usize; cols];
    for row in rows {
        for (i, cell) in row.iter().enumerate() {
            width[i] = width[i].max(cell.chars().count());
        }
    }
    let mut out = String::new();
    for row in rows {
        let mut line = String::new();
        for (i, cell) in row.iter().enumerate() {
            if i > 0 {
                line.push_str("  ");
            }
            line.push_str(cell);
            if i + 1 < row.len() {
                for _ in cell.chars().count()..width[i] {
                    line.push(' ');
                }
            }
        }
        out.push_str(line.trim_end());
        out.push('\n');
    }
    out
}

fn header_row() -> Vec<String> {
    ["n", "module", "prime", "v", "witness", "indeg"]
        .map(String::from)
        .to_vec()
}

fn linear_expr(slope: i64, intercept: i64) -> String {
    let head = if slope == 1 {
        "n".to_string()
    } else {
        format!("{slope}n")
    };
    match intercept {
        0 => head,
        i if i > 0 => format!("{head} + {i}"),
        i => format!("{head} - {}", -i),
    }
}

/// Human form of one fit, e.g. `v_(X,Y) [M/I^nN] = 3n - 1 (n ≥ 3)`.
pub fn fit_line(entry: &FitEntry) -> String {
    let head = match &entry.prime {
        Some(p) => format!("v_{} [{}]", p.render(), entry.module),
        None => format!("v [{}]", entry.module),
    };
    match &entry.fit.kind {
        FitKind::Constant(v) => {
            format!(
                "{head} = {v} (n ≥ {}, window {})",
                entry.fit.onset, entry.fit.window
            )
        }
        FitKind::Linear { slope, intercept } => {
            format!(
                "{head} = {} (n ≥ {})",
                linear_expr(*slope, *intercept),
                entry.fit.onset
            )
        }
        FitKind::Undetermined => format!("{head} undetermined"),
    }
}

fn stable_line(entry: &StableEntry) -> String {
    match entry.onset {
        Some(n) => format!(
            "Ass [{}] = {} (n ≥ {n})",
            entry.module,
            render_prime_set(&entry.set)
        ),
        None => format!("Ass [{}] not stabilized within the horizon", entry.module),
    }
}

fn evaluation_preamble(eval: &FamilyEvaluation) -> String {
    let mut out = render_input(&eval.spec);
    out.push_str(&format!("gamma onset {}\n", eval.gamma_onset));
    if let Some(abort) = &eval.aborted {
        out.push_str(&format!(
            "aborted at n = {}: {} generators exceed the cap {}\n",
            abort.n, abort.generators, eval.options.generator_cap
        ));
    }
    out
}

fn analysis_table(analysis: &Analysis) -> String {
    let ring = analysis.evaluation.spec.ring();
    let mut out = evaluation_preamble(&analysis.evaluation);
    out.push('\n');
    let mut rows = vec![header_row()];
    for r in &analysis.evaluation.records {
        rows.extend(record_rows(r, ring));
    }
    out.push_str(&aligned(&rows));
    out.push('\n');
    for entry in &analysis.stabilization {
        out.push_str(&stable_line(entry));
        out.push('\n');
    }
    out.push('\n');
    for entry in &analysis.fits {
        out.push_str(&fit_line(entry));
        out.push('\n');
    }
    out
}

fn paint(text: String, status: VerdictStatus, color: bool) -> String {
    if !color {
        return text;
    }
    let code = match status {
        VerdictStatus::Pass => "32",
        VerdictStatus::Fail => "31",
        VerdictStatus::NotApplicable => "90",
        VerdictStatus::Undetermined => "33",
    };
    format!("\x1b[{code}m{text}\x1b[0m")
}

fn verdict_lines(verdicts: &[Verdict], color: bool) -> String {
    let mut out = String::new();
    for v in verdicts {
        let label = paint(format!("{:<12}", v.status.label()), v.status, color);
        out.push_str(&format!("{label}  {:<25} {}\n", v.id, v.details));
    }
    let count = |s: VerdictStatus| verdicts.iter().filter(|v| v.status == s).count();
    let overall = if count(VerdictStatus::Fail) > 0 {
        VerdictStatus::Fail
    } else {
        VerdictStatus::Pass
    };
    out.push_str(&format!(
        "overall {} ({} pass, {} fail, {} n/a, {} undetermined)\n",
        paint(overall.label().to_string(), overall, color),
        count(VerdictStatus::Pass),
        count(VerdictStatus::Fail),
        count(VerdictStatus::NotApplicable),
        count(VerdictStatus::Undetermined),
    ));
    out
}

fn val_json(v: Val) -> Value {
    match v {
        Val::Finite(i) => Value::from(i),
        Val::Infinity => Value::from("inf"),
    }
}

fn entry_json(e: &ModuleEntry, ring: &Ring) -> Value {
    let locals: Vec<Value> = e
        .vnum
        .locals
        .iter()
        .map(|(p, w)| {
            json!({
                "prime": p.render(),
                "v": w.value,
                "witness": w.monomial.render(ring),
                "component": w.component,
            })
        })
        .collect();
    json!({ "global": val_json(e.vnum.global), "indeg": val_json(e.indeg), "locals": locals })
}

fn record_json(r: &InvariantRecord, ring: &Ring) -> Value {
    let mut modules = Map::new();
    for (token, entry) in module_entries(r) {
        modules.insert(token.to_string(), entry_json(entry, ring));
    }
    json!({ "n": r.n, "indeg_power": val_json(r.indeg_power), "modules": Value::Object(modules) })
}

fn fit_json(f: &FitEntry) -> Value {
    let mut map = Map::new();
    map.insert("module".into(), Value::from(f.module));
    map.insert(
        "prime".into(),
        f.prime
            .as_ref()
            .map_or(Value::Null, |p| Value::from(p.render())),
    );
    map.insert("onset".into(), Value::from(f.fit.onset));
    map.insert("window".into(), Value::from(f.fit.window));
    match &f.fit.kind {
        FitKind::Constant(v) => {
            map.insert("kind".into(), Value::from("constant"));
            map.insert("value".into(), val_json(*v));
        }
        FitKind::Linear { slope, intercept } => {
            map.insert("kind".into(), Value::from("linear"));
            map.insert("slope".into(), Value::from(*slope));
            map.insert("intercept".into(), Value::from(*intercept));
        }
        FitKind::Undetermined => {
            map.insert("kind".into(), Value::from("undetermined"));
        }
    }
    Value::Object(map)
}

fn stable_json(s: &StableEntry) -> Value {
    json!({
        "module": s.module,
        "onset": s.onset,
        "set": s.set.iter().map(MonomialPrime::render).collect::<Vec<_>>(),
    })
}

fn verdict_json(v: &Verdict) -> Value {
    json!({ "id": v.id, "status": v.status.label(), "details": v.details })
}

fn envelope(
    spec: &FamilySpec,
    records: &[InvariantRecord],
    fits: &[FitEntry],
    stabilization: &[StableEntry],
    verdicts: &[Verdict],
) -> String {
    let ring = spec.ring();
    let value = json!({
        "spec_echo": render_input(spec),
        "records": records.iter().map(|r| record_json(r, ring)).collect::<Vec<_>>(),
        "fits": fits.iter().map(fit_json).collect::<Vec<_>>(),
        "stabilization": stabilization.iter().map(stable_json).collect::<Vec<_>>(),
        "verdicts": verdicts.iter().map(verdict_json).collect::<Vec<_>>(),
    });
    let mut text = serde_json::to_string_pretty(&value).expect("report serializes");
    text.push('\n');
    text
}

fn plot_series(records: &[InvariantRecord]) -> String {
    let mut out = String::new();
    let mut push_series = |title: String, points: Vec<(u32, String)>| {
        if points.is_empty() {
            return;
        }
        if !out.is_empty() {
            out.push('\n');
        }
        out.push_str(&format!("# {title}\n"));
        for (n, v) in points {
            out.push_str(&format!("{n} {v}\n"));
        }
    };
    type Pick = fn(&InvariantRecord) -> Option<&ModuleEntry>;
    let picks: [(&str, Pick); 2] = [
        ("M/I^nN", |r| Some(&r.quotient)),
        ("layer", |r| r.layer.as_ref()),
    ];
    for (token, pick) in picks {
        let global: Vec<(u32, String)> = records
            .iter()
            .filter_map(|r| pick(r).map(|e| (r.n, e.vnum.global.to_string())))
            .collect();
        push_series(format!("v [{token}]"), global);
        let mut primes = std::collections::BTreeSet::new();
        for r in records {
            if let Some(e) = pick(r) {
                primes.extend(e.vnum.locals.keys().cloned());
            }
        }
        for p in primes {
            let points: Vec<(u32, String)> = records
                .iter()
                .filter_map(|r| {
                    pick(r)
                        .and_then(|e| e.vnum.locals.get(&p))
                        .map(|w| (r.n, w.value.to_string()))
                })
                .collect();
            push_series(format!("v_{} [{token}]", p.render()), points);
        }
    }
    out
}

/// Renders an `analyze` result in the requested format.
pub fn render_analysis(analysis: &Analysis, format: Format, _color: bool) -> String {
    match format {
        Format::Table => analysis_table(analysis),
        Format::Csv => records_csv(
            &analysis.evaluation.records,
            analysis.evaluation.spec.ring(),
        ),
        Format::Json => envelope(
            &analysis.evaluation.spec,
            &analysis.evaluation.records,
            &analysis.fits,
            &analysis.stabilization,
            &[],
        ),
        Format::Plot => plot_series(&analysis.evaluation.records),
    }
}

/// Renders a `verify` result; CSV stays the record export, verdicts appear
/// in the table and JSON forms.
pub fn render_verify(report: &VerifyReport, format: Format, color: bool) -> String {
    let analysis = &report.analysis;
    match format {
        Format::Table => {
            let mut out = evaluation_preamble(&analysis.evaluation);
            out.push('\n');
            out.push_str(&verdict_lines(&report.verdicts, color));
            out.push('\n');
            for entry in &analysis.stabilization {
                out.push_str(&stable_line(entry));
                out.push('\n');
            }
            out.push('\n');
            for entry in &analysis.fits {
                out.push_str(&fit_line(entry));
                out.push('\n');
            }
            out
        }
        Format::Csv => records_csv(
            &analysis.evaluation.records,
            analysis.evaluation.spec.ring(),
        ),
        Format::Json => envelope(
            &analysis.evaluation.spec,
            &analysis.evaluation.records,
            &analysis.fits,
            &analysis.stabilization,
            &report.verdicts,
        ),
        Format::Plot => plot_series(&analysis.evaluation.records),
    }
}

/// Renders the single-`n` record used by `ass` and `vnumber`.
pub fn render_record(
    spec: &FamilySpec,
    record: &InvariantRecord,
    format: Format,
    _color: bool,
) -> String {
    let ring = spec.ring();
    match format {
        Format::Table => {
            let mut out = render_input(spec);
            out.push('\n');
            let mut rows = vec![header_row()];
            rows.extend(record_rows(record, ring));
            out.push_str(&aligned(&rows));
            out
        }
        Format::Csv => records_csv(std::slice::from_ref(record), ring),
        Format::Json => envelope(spec, std::slice::from_ref(record), &[], &[], &[]),
        Format::Plot => plot_series(std::slice::from_ref(record)),
    }
}

/// Renders an `explore-q45` report.
pub fn render_explore(report: &ExploreReport, format: Format, _color: bool) -> String {
    match format {
        Format::Json => {
            let flags: Vec<Value> = report
                .flags
                .iter()
                .map(|f| {
                    json!({
                        "trial": f.trial,
                        "seed": f.seed,
                        "prime": f.prime.render(),
                        "window": f.fit.window,
                        "input": f.input,
                    })
                })
                .collect();
            let value =
                json!({ "trials": report.trials, "examined": report.examined, "flags": flags });
            let mut text = serde_json::to_string_pretty(&value).expect("report serializes");
            text.push('\n');
            text
        }
        Format::Csv => {
            let mut wtr = csv::Writer::from_writer(Vec::new());
            wtr.write_record(["trial", "seed", "prime"])
                .expect("in-memory csv");
            for f in &report.flags {
                wtr.write_record([f.trial.to_string(), f.seed.to_string(), f.prime.render()])
                    .expect("in-memory csv");
            }
            String::from_utf8(wtr.into_inner().expect("in-memory csv")).expect("csv is utf-8")
        }
        Format::Table | Format::Plot => {
            let mut out = format!(
                "explore-q45: {} trials, {} series examined, {} flagged\n",
                report.trials,
                report.examined,
                report.flags.len()
            );
            for f in &report.flags {
                out.push_str(&format!(
                    "\nflag: trial {}, seed {}, prime {} undetermined\n",
                    f.trial,
                    f.seed,
                    f.prime.render()
                ));
                for line in f.input.lines() {
                    out.push_str(&format!("  {line}\n"));
                }
            }
            out
        }
    }
}
