//! Argument handling and output rendering for the `scvol` binary.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use scvol::exact::{format_rational, to_f64, Rational};
use scvol::oracle::{mc_estimate, McReport};
use scvol::verify::{run_suite, CheckResult, Suite};
use scvol::volumes::{ratio, v_real, volume, volume_table, RatioMethod, VolumeMethod, VolumeTable};
use scvol::Exec;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "scvol",
    version,
    about = "Exact volumes of the signature strata of the Schur-Cohn region"
)]
pub struct CliConfig {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Volume v_d^(s) of the polynomials with s nonreal root pairs.
    Volume {
        #[arg(long)]
        d: usize,
        #[arg(long)]
        s: usize,
        /// A ratio method (times the totally real volume), rows, cols,
        /// closed or determinant (the last two for d = 2s only).
        #[arg(long, default_value = "binomdet", value_parser = parse_volume_method)]
        method: VolumeMethod,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Integer ratio v_d^(s) / v_d^(0).
    Ratio {
        #[arg(long)]
        d: usize,
        #[arg(long)]
        s: usize,
        /// trinomial, hilbert, binomdet, evenalt, detmix, legendre or all.
        #[arg(long, default_value = "all", value_parser = parse_ratio_choice)]
        method: RatioChoice,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Every v_d^(s) up to a degree, with row sums checked against v_d.
    Table {
        #[arg(long = "dmax")]
        d_max: usize,
        #[arg(long, value_enum, default_value_t = Format::Markdown)]
        format: Format,
        #[command(flatten)]
        threads: Threads,
    },
    /// Run invariant suites; exit status 1 if any check fails.
    Verify {
        #[arg(long, default_value = "all", value_parser = parse_suite)]
        suite: Suite,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        #[command(flatten)]
        threads: Threads,
    },
    /// Monte-Carlo estimate of every v_d^(s), compared with the exact values.
    Mc {
        #[arg(long)]
        d: usize,
        #[arg(long, default_value_t = 1_000_000)]
        samples: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        #[command(flatten)]
        threads: Threads,
    },
}

#[derive(Debug, Clone, Copy, Args)]
pub struct Threads {
    /// Worker threads; 0 picks automatically. Results do not depend on it.
    #[arg(long = "threads", default_value_t = 0)]
    pub count: usize,
}

impl Threads {
    fn exec(self) -> Exec {
        Exec::threads(self.count)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
    Markdown,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RatioChoice {
    One(RatioMethod),
    All,
}

fn parse_volume_method(s: &str) -> Result<VolumeMethod, String> {
    s.parse()
}

fn parse_ratio_choice(s: &str) -> Result<RatioChoice, String> {
    if s == "all" {
        Ok(RatioChoice::All)
    } else {
        s.parse().map(RatioChoice::One)
    }
}

fn parse_suite(s: &str) -> Result<Suite, String> {
    s.parse()
}

/// Parses `args` (program name first) and runs the command. Returns the exit
/// status.
pub fn main_with_args<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    match CliConfig::try_parse_from(args) {
        Ok(config) => run(&config, out, err),
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                err.write_all(text.as_bytes())
            } else {
                out.write_all(text.as_bytes())
            };
            code
        }
    }
}

/// Output of one command: rendered text and whether every check passed.
struct Rendered {
    text: String,
    passed: bool,
}

impl Rendered {
    fn ok(text: String) -> Self {
        Rendered { text, passed: true }
    }
}

pub fn run(config: &CliConfig, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let result = match &config.command {
        Command::Volume {
            d,
            s,
            method,
            format,
        } => run_volume(*d, *s, *method, *format),
        Command::Ratio {
            d,
            s,
            method,
            format,
        } => run_ratio(*d, *s, *method, *format),
        Command::Table {
            d_max,
            format,
            threads,
        } => volume_table(*d_max, threads.exec()).map(|t| render_table(&t, *format)),
        Command::Verify {
            suite,
            format,
            threads,
        } => Ok(render_checks(&run_suite(*suite, threads.exec()), *format)),
        Command::Mc {
            d,
            samples,
            seed,
            format,
            threads,
        } => {
            if *d > 6 {
                let _ = writeln!(
                    err,
                    "warning: the box hit rate is tiny for d > 6; estimates will be noisy"
                );
            }
            mc_estimate(*d, *samples, *seed, threads.exec()).and_then(|r| render_mc(&r, *format))
        }
    };
    match result {
        Ok(rendered) => {
            if out.write_all(rendered.text.as_bytes()).is_err() {
                return EXIT_FAILED;
            }
            if rendered.passed {
                EXIT_OK
            } else {
                EXIT_FAILED
            }
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_USAGE
        }
    }
}

fn approx(x: &Rational) -> String {
    format!("{:.6}", to_f64(x))
}

/// Float JSON value; non-finite values become null.
fn json_f64(x: f64) -> Value {
    serde_json::Number::from_f64(x).map_or(Value::Null, Value::Number)
}

fn json_rational(x: &Rational) -> Value {
    Value::String(format_rational(x))
}

fn to_json_text(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("values serialize");
    s.push('\n');
    s
}

fn markdown_table(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut s = format!("| {} |\n", header.join(" | "));
    let _ = writeln!(s, "|{}", "---|".repeat(header.len()));
    for row in rows {
        let _ = writeln!(s, "| {} |", row.join(" | "));
    }
    s
}

fn csv_table(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut s = header.join(",");
    s.push('\n');
    for row in rows {
        s.push_str(&row.join(","));
        s.push('\n');
    }
    s
}

fn run_volume(d: usize, s: usize, method: VolumeMethod, format: Format) -> scvol::Result<Rendered> {
    let record = volume(d, s, method)?;
    let value = &record.value;
    let text = match format {
        Format::Text => format!("{value} (≈ {})\n", approx(value)),
        Format::Json => to_json_text(&json!({
            "d": d,
            "s": s,
            "method": method.name(),
            "value": json_rational(value),
            "approx": json_f64(to_f64(value)),
        })),
        Format::Csv => csv_table(
            &["d", "s", "method", "value", "approx"],
            &[vec![
                d.to_string(),
                s.to_string(),
                method.name().into(),
                format_rational(value),
                to_f64(value).to_string(),
            ]],
        ),
        Format::Markdown => markdown_table(
            &["d", "s", "method", "value"],
            &[vec![
                d.to_string(),
                s.to_string(),
                method.name().into(),
                format!("{} ({})", format_rational(value), approx(value)),
            ]],
        ),
    };
    Ok(Rendered::ok(text))
}

fn run_ratio(d: usize, s: usize, choice: RatioChoice, format: Format) -> scvol::Result<Rendered> {
    let methods: Vec<RatioMethod> = match choice {
        RatioChoice::One(m) => vec![m],
        RatioChoice::All => {
            // Rejects an invalid signature before filtering by applicability.
            ratio(d, s, RatioMethod::Binomdet)?;
            RatioMethod::ALL
                .into_iter()
                .filter(|m| m.applies(d, s))
                .collect()
        }
    };
    let values = methods
        .iter()
        .map(|&m| ratio(d, s, m).map(|v| (m, v)))
        .collect::<scvol::Result<Vec<_>>>()?;
    let agree = values.iter().all(|(_, v)| *v == values[0].1);
    let rows: Vec<Vec<String>> = values
        .iter()
        .map(|(m, v)| {
            vec![
                d.to_string(),
                s.to_string(),
                m.name().into(),
                format_rational(v),
            ]
        })
        .collect();
    let text = match format {
        Format::Text => {
            let mut t = String::new();
            if values.len() == 1 {
                let _ = writeln!(t, "{}", values[0].1);
            } else {
                for (m, v) in &values {
                    let _ = writeln!(t, "{:<10} {v}", m.name());
                }
                let verdict = if agree { "agree" } else { "DISAGREE" };
                let _ = writeln!(t, "{} methods {verdict}", values.len());
            }
            t
        }
        Format::Json => {
            let results: Vec<Value> = values
                .iter()
                .map(|(m, v)| {
                    json!({
                        "method": m.name(),
                        "value": json_rational(v),
                        "approx": json_f64(to_f64(v)),
                    })
                })
                .collect();
            to_json_text(&json!({ "d": d, "s": s, "agree": agree, "results": results }))
        }
        Format::Csv => csv_table(&["d", "s", "method", "value"], &rows),
        Format::Markdown => markdown_table(&["d", "s", "method", "value"], &rows),
    };
    Ok(Rendered {
        text,
        passed: agree,
    })
}

fn render_table(table: &VolumeTable, format: Format) -> Rendered {
    let passed = table.rows.iter().all(|r| r.matches());
    let text = match format {
        Format::Json => {
            let records: Vec<Value> = table
                .records
                .iter()
                .map(|r| {
                    json!({
                        "d": r.signature.d(),
                        "s": r.signature.s(),
                        "method": r.method.name(),
                        "value": json_rational(&r.value),
                        "approx": json_f64(to_f64(&r.value)),
                    })
                })
                .collect();
            let rows: Vec<Value> = table
                .rows
                .iter()
                .map(|r| {
                    json!({
                        "d": r.d,
                        "sum": json_rational(&r.sum),
                        "full": json_rational(&r.full),
                        "matches": r.matches(),
                    })
                })
                .collect();
            to_json_text(&json!({ "records": records, "row_sums": rows }))
        }
        Format::Csv => {
            let mut rows: Vec<Vec<String>> = Vec::new();
            for row in &table.rows {
                for r in table.records.iter().filter(|r| r.signature.d() == row.d) {
                    rows.push(vec![
                        row.d.to_string(),
                        r.signature.s().to_string(),
                        format_rational(&r.value),
                        to_f64(&r.value).to_string(),
                        String::new(),
                    ]);
                }
                rows.push(vec![
                    row.d.to_string(),
                    "sum".into(),
                    format_rational(&row.sum),
                    to_f64(&row.sum).to_string(),
                    if row.matches() { "ok" } else { "MISMATCH" }.into(),
                ]);
            }
            csv_table(&["d", "s", "value", "approx", "full_volume_check"], &rows)
        }
        Format::Text | Format::Markdown => {
            let cells: Vec<Vec<String>> = table
                .records
                .iter()
                .map(|r| {
                    let ratio = &r.value / v_real(r.signature.d()).expect("d >= 1");
                    vec![
                        r.signature.d().to_string(),
                        r.signature.s().to_string(),
                        format!("{} ({})", format_rational(&r.value), approx(&r.value)),
                        ratio.to_string(),
                    ]
                })
                .collect();
            let sums: Vec<Vec<String>> = table
                .rows
                .iter()
                .map(|r| {
                    vec![
                        r.d.to_string(),
                        format_rational(&r.sum),
                        format_rational(&r.full),
                        if r.matches() { "ok" } else { "MISMATCH" }.into(),
                    ]
                })
                .collect();
            format!(
                "{}\n{}",
                markdown_table(&["d", "s", "volume", "ratio"], &cells),
                markdown_table(&["d", "sum over s", "full volume", "check"], &sums)
            )
        }
    };
    Rendered { text, passed }
}

fn render_checks(results: &[CheckResult], format: Format) -> Rendered {
    let passed = results.iter().all(|r| r.passed);
    let verdict = |r: &CheckResult| if r.passed { "PASS" } else { "FAIL" };
    let rows: Vec<Vec<String>> = results
        .iter()
        .map(|r| {
            vec![
                r.suite.into(),
                r.name.clone(),
                verdict(r).into(),
                r.detail.clone(),
            ]
        })
        .collect();
    let text = match format {
        Format::Text => {
            let mut t = String::new();
            for r in results {
                let _ = writeln!(t, "{}  {}: {} ({})", verdict(r), r.suite, r.name, r.detail);
            }
            let failed = results.iter().filter(|r| !r.passed).count();
            let _ = writeln!(t, "{} checks, {failed} failed", results.len());
            t
        }
        Format::Json => {
            let items: Vec<Value> = results
                .iter()
                .map(|r| {
                    json!({
                        "suite": r.suite,
                        "name": r.name,
                        "passed": r.passed,
                        "detail": r.detail,
                    })
                })
                .collect();
            to_json_text(&json!({ "passed": passed, "results": items }))
        }
        Format::Csv => csv_table(
            &["suite", "name", "result", "detail"],
            &rows
                .into_iter()
                .map(|r| r.into_iter().map(|c| csv_quote(&c)).collect())
                .collect::<Vec<_>>(),
        ),
        Format::Markdown => markdown_table(&["suite", "check", "result", "detail"], &rows),
    };
    Rendered { text, passed }
}

fn csv_quote(cell: &str) -> String {
    if cell.contains([',', '"', '\n']) {
        format!("\"{}\"", cell.replace('"', "\"\""))
    } else {
        cell.to_string()
    }
}

fn render_mc(report: &McReport, format: Format) -> scvol::Result<Rendered> {
    let d = report.d;
    let vr = v_real(d)?;
    let mut strata = Vec::new();
    for st in &report.per_s {
        let exact = &vr * ratio(d, st.s, RatioMethod::Binomdet)?;
        let z = st.z_score(&exact);
        strata.push((st, exact, z));
    }
    let text = match format {
        Format::Json => {
            let per_s: Vec<Value> = strata
                .iter()
                .map(|(st, exact, z)| {
                    json!({
                        "s": st.s,
                        "hits": st.hits,
                        "estimate": json_f64(st.estimate),
                        "stderr": json_f64(st.stderr),
                        "exact": json_rational(exact),
                        "z": json_f64(*z),
                    })
                })
                .collect();
            to_json_text(&json!({
                "d": d,
                "samples": report.samples,
                "seed": report.seed,
                "box_volume": json_rational(&report.box_volume),
                "per_s": per_s,
                "misses": report.misses,
                "degenerate": report.degenerate,
            }))
        }
        _ => {
            let rows: Vec<Vec<String>> = strata
                .iter()
                .map(|(st, exact, z)| {
                    vec![
                        st.s.to_string(),
                        st.hits.to_string(),
                        format!("{:.6}", st.estimate),
                        format!("{:.6}", st.stderr),
                        format_rational(exact),
                        format!("{z:.3}"),
                    ]
                })
                .collect();
            let header = ["s", "hits", "estimate", "stderr", "exact", "z"];
            match format {
                Format::Csv => csv_table(&header, &rows),
                _ => {
                    let (total, total_err) = report.total();
                    format!(
                        "d = {d}, samples = {}, seed = {}, box volume = {}\n\n{}\n\
                         total {total:.6} ± {total_err:.6}; misses {}, degenerate {}\n",
                        report.samples,
                        report.seed,
                        format_rational(&report.box_volume),
                        markdown_table(&header, &rows),
                        report.misses,
                        report.degenerate
                    )
                }
            }
        }
    };
    Ok(Rendered::ok(text))
}
