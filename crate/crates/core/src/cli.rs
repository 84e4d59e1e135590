//! The `qcdim` command line: `bounds`, `verify`, `optimize`, `dim`.
//!
//! Exit codes: 0 success, 1 failed claim or invariant, 2 usage error.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use chrono::{DateTime, Utc};
use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use crate::bounds::{BoundMethod, DimensionValue, Distortion};
use crate::claims::{verify_all, ClaimContext};
use crate::error::QcError;
use crate::fractal::{
    apply_map, box_dimension, generate_cantor, sandwich_check, sandwich_table, CantorSpec, ModelMap, SandwichOptions,
    DEFAULT_SCALES,
};
use crate::numerics::{HPReal, Precision, DEFAULT_DIGITS, MIN_DIGITS};
use crate::optimizer::{improvement_table, rows_to_table, Direction};
use crate::output::{envelope, to_json_string, Format, Table};
use crate::tolerances::{parse_override, Tolerances};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "qcdim", version, about = "Quasiconformal dimension-distortion bounds on the real line")]
struct Cli {
    /// Working precision in significant decimal digits (at least 30).
    #[arg(long, global = true, env = "QCDIM_PRECISION")]
    precision: Option<u32>,
    /// Output format: csv, json or text.
    #[arg(long, global = true, default_value = "text")]
    format: Format,
    /// Write the output here instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Treat invalid grid cells as failures.
    #[arg(long, global = true)]
    strict: bool,
    /// Seed for randomized grids.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Tolerance override `key=value` (keys: x0, y0, range, threshold, g2, sandwich).
    #[arg(long = "tol", global = true, value_parser = parse_tol)]
    tol: Vec<(String, f64)>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Tabulate bounds over L and K grids.
    Bounds {
        /// Dimension: a value, a list `a,b,c` or a grid `start:stop:count`.
        #[arg(long = "L")]
        l: String,
        /// Distortion K >= 1, same syntax as --L.
        #[arg(long = "K", default_value = "1")]
        k: String,
        /// Comma-separated methods, or `all`.
        #[arg(long, default_value = "all")]
        methods: String,
    },
    /// Recompute the published numerical claims.
    Verify {
        /// Glob on claim ids, e.g. `range.*`.
        #[arg(long)]
        filter: Option<String>,
        /// Also write the JSON report here.
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Optimize the split parameter k2.
    Optimize {
        #[arg(long = "L")]
        l: String,
        #[arg(long = "K", default_value = "2")]
        k: String,
        /// lower, upper or both.
        #[arg(long, default_value = "both")]
        direction: String,
    },
    /// Box-counting dimension of a mapped Cantor set.
    Dim {
        /// `pieces:inverse_ratio:depth`, e.g. `2:3:12`.
        #[arg(long)]
        cantor: String,
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        offset: f64,
        #[arg(long, default_value_t = 1.0)]
        scale: f64,
        /// `identity`, `affine:a:b` or `power:a`.
        #[arg(long, default_value = "identity")]
        map: String,
        #[arg(long, default_value_t = DEFAULT_SCALES)]
        scales: usize,
        /// Comma-separated methods to compare against, or `all`.
        #[arg(long)]
        sandwich: Option<String>,
        /// Write the mapped cover as `left,right` CSV.
        #[arg(long)]
        export_cover: Option<PathBuf>,
    },
}

fn parse_tol(s: &str) -> Result<(String, f64), String> {
    parse_override(s).map_err(|e| e.to_string())
}

/// Parses `v`, `a,b,c` or `start:stop:count` (inclusive endpoints).
pub fn parse_grid(s: &str, prec: Precision) -> Result<Vec<HPReal>, QcError> {
    let s = s.trim();
    let parts: Vec<&str> = s.split(':').collect();
    match parts.as_slice() {
        [single] => single.split(',').map(|v| HPReal::parse(v, prec)).collect(),
        [start, stop, count] => {
            let n: usize = count
                .trim()
                .parse()
                .map_err(|_| QcError::Parse(format!("grid count must be a positive integer in {s:?}")))?;
            let (a, b) = (HPReal::parse(start, prec)?, HPReal::parse(stop, prec)?);
            match n {
                0 => Err(QcError::Parse(format!("grid count must be positive in {s:?}"))),
                1 => Ok(vec![a]),
                _ => {
                    let step = (&b - &a) / (n as i64 - 1);
                    Ok((0..n).map(|i| if i == n - 1 { b.clone() } else { &a + &(&step * i as i64) }).collect())
                }
            }
        }
        _ => Err(QcError::Parse(format!("expected a value, a list a,b,c or start:stop:count, got {s:?}"))),
    }
}

fn parse_methods(s: &str) -> Result<Vec<BoundMethod>, QcError> {
    if s.trim().eq_ignore_ascii_case("all") {
        return Ok(BoundMethod::ALL.to_vec());
    }
    s.split(',').map(str::parse).collect()
}

/// Report timestamp: `SOURCE_DATE_EPOCH` when set, so reruns are
/// byte-identical; the current second otherwise.
fn report_timestamp() -> DateTime<Utc> {
    std::env::var("SOURCE_DATE_EPOCH")
        .ok()
        .and_then(|v| v.trim().parse::<i64>().ok())
        .and_then(|secs| DateTime::from_timestamp(secs, 0))
        .unwrap_or_else(|| DateTime::from_timestamp(Utc::now().timestamp(), 0).expect("current time"))
}

struct Ctx<'a> {
    cli: &'a Cli,
    prec: Precision,
    tolerances: Tolerances,
    out: &'a mut dyn Write,
    err: &'a mut dyn Write,
}

impl Ctx<'_> {
    fn config(&self, command: &str, args: Value) -> Value {
        let overrides: BTreeMap<&str, f64> = self.cli.tol.iter().map(|(k, v)| (k.as_str(), *v)).collect();
        json!({
            "command": command,
            "precision_digits": self.prec.digits(),
            "format": self.cli.format.to_string(),
            "seed": self.cli.seed,
            "strict": self.cli.strict,
            "tolerance_overrides": overrides,
            "args": args,
        })
    }

    fn emit(&mut self, text: &str) -> i32 {
        let res = match &self.cli.out {
            Some(path) => std::fs::write(path, text),
            None => self.out.write_all(text.as_bytes()),
        };
        match res {
            Ok(()) => EXIT_OK,
            Err(e) => {
                let _ = writeln!(self.err, "error: cannot write output: {e}");
                EXIT_USAGE
            }
        }
    }

    fn emit_table(&mut self, table: &Table, config: Value, header: Option<Value>) -> i32 {
        let text = match self.cli.format {
            Format::Csv => table.to_csv(),
            Format::Text => table.to_text(),
            Format::Json => to_json_string(&envelope(config, header, table.json_rows())),
        };
        self.emit(&text)
    }

    fn usage(&mut self, msg: impl std::fmt::Display) -> i32 {
        let _ = writeln!(self.err, "error: {msg}");
        EXIT_USAGE
    }

    fn warn(&mut self, msg: impl std::fmt::Display) {
        let _ = writeln!(self.err, "warning: {msg}");
    }
}

/// Runs the CLI on `args` (including the program name).
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let rendered = e.render().to_string();
            let _ = if e.use_stderr() { err.write_all(rendered.as_bytes()) } else { out.write_all(rendered.as_bytes()) };
            return code;
        }
    };

    let digits = cli.precision.unwrap_or(DEFAULT_DIGITS);
    let is_verify = matches!(cli.command, Command::Verify { .. });
    let prec = match Precision::new(digits) {
        Ok(p) => p,
        Err(_) if is_verify && digits > 0 => {
            let _ = writeln!(err, "warning: precision {digits} is below the supported floor of {MIN_DIGITS} digits; claims may fail");
            Precision::below_floor(digits)
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return EXIT_USAGE;
        }
    };
    let overrides: BTreeMap<String, f64> = cli.tol.iter().cloned().collect();
    let tolerances = match Tolerances::default().with_overrides(&overrides) {
        Ok(t) => t,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return EXIT_USAGE;
        }
    };

    let mut ctx = Ctx { cli: &cli, prec, tolerances, out, err };
    match &cli.command {
        Command::Bounds { l, k, methods } => cmd_bounds(&mut ctx, l, k, methods),
        Command::Verify { filter, report } => cmd_verify(&mut ctx, filter.as_deref(), report.as_ref()),
        Command::Optimize { l, k, direction } => cmd_optimize(&mut ctx, l, k, direction),
        Command::Dim { cantor, offset, scale, map, scales, sandwich, export_cover } => {
            cmd_dim(&mut ctx, cantor, *offset, *scale, map, *scales, sandwich.as_deref(), export_cover.as_ref())
        }
    }
}

/// Rejects grid points outside `(0, 1)`, or `(0, 2]` when `allow_above_one`.
fn check_l_grid(ctx: &mut Ctx, ls: &[HPReal], allow_above_one: bool) -> Result<(), i32> {
    let one = HPReal::one(ctx.prec);
    let two = HPReal::from_i64(2, ctx.prec);
    for l in ls {
        let outside = !l.is_positive() || if allow_above_one { *l > two } else { *l >= one };
        if outside {
            let domain = if allow_above_one { "(0,1) of the line bounds, or (0,2] for the general bound" } else { "(0,1)" };
            return Err(ctx.usage(format!(
                "L = {} lies outside the open domain {domain}; grid endpoints are not clamped",
                l.to_sci_string(6)
            )));
        }
    }
    Ok(())
}

fn check_k_grid(ctx: &mut Ctx, ks: &[HPReal]) -> Result<(), i32> {
    let one = HPReal::one(ctx.prec);
    if let Some(k) = ks.iter().find(|k| **k < one || !k.is_finite()) {
        return Err(ctx.usage(format!("K = {} must be at least 1", k.to_sci_string(6))));
    }
    Ok(())
}

fn cmd_bounds(ctx: &mut Ctx, l: &str, k: &str, methods: &str) -> i32 {
    let (ls, ks, methods) = match (parse_grid(l, ctx.prec), parse_grid(k, ctx.prec), parse_methods(methods)) {
        (Ok(a), Ok(b), Ok(c)) => (a, b, c),
        (Err(e), _, _) | (_, Err(e), _) | (_, _, Err(e)) => return ctx.usage(e),
    };
    if let Err(code) = check_l_grid(ctx, &ls, true).and_then(|_| check_k_grid(ctx, &ks)) {
        return code;
    }

    let mut table = Table::new(["L", "K", "method", "lower", "upper", "hypotheses_met", "note"]);
    let mut errors = 0;
    for l in &ls {
        let t = DimensionValue::new(l.clone()).expect("checked above");
        for k in &ks {
            let d = Distortion::from_big_k(k.clone()).expect("checked above");
            for m in &methods {
                match m.evaluate(&t, &d) {
                    Ok(b) => table.push(vec![
                        l.into(),
                        k.into(),
                        m.as_str().into(),
                        b.lower.into(),
                        b.upper.into(),
                        b.hypotheses_met.into(),
                        b.notes.into(),
                    ]),
                    Err(e) => {
                        errors += 1;
                        table.push(vec![
                            l.into(),
                            k.into(),
                            m.as_str().into(),
                            None::<HPReal>.into(),
                            None::<HPReal>.into(),
                            false.into(),
                            e.to_string().into(),
                        ]);
                    }
                }
            }
        }
    }
    let config = ctx.config("bounds", json!({"L": l, "K": k, "methods": methods.iter().map(|m| m.as_str()).collect::<Vec<_>>()}));
    let code = ctx.emit_table(&table, config, None);
    if code != EXIT_OK {
        return code;
    }
    if errors > 0 {
        ctx.warn(format!("{errors} cell(s) outside a method's domain"));
        if ctx.cli.strict {
            return EXIT_FAILED;
        }
    }
    EXIT_OK
}

fn cmd_verify(ctx: &mut Ctx, filter: Option<&str>, report_path: Option<&PathBuf>) -> i32 {
    let pattern = match filter.map(glob::Pattern::new).transpose() {
        Ok(p) => p,
        Err(e) => return ctx.usage(format!("bad claim filter: {e}")),
    };
    let claim_ctx = ClaimContext { precision: ctx.prec, tolerances: ctx.tolerances.clone(), seed: ctx.cli.seed, ..ClaimContext::new(ctx.prec) };
    let report = verify_all(&claim_ctx, pattern.as_ref(), report_timestamp());
    let summary = report.summary();
    if summary.total == 0 {
        ctx.warn(format!("no claim matches {:?}", filter.unwrap_or("")));
    }
    let config = ctx.config("verify", json!({"filter": filter}));
    if let Some(path) = report_path {
        if let Err(e) = report.write_json(path, config.clone()) {
            return ctx.usage(format!("cannot write report: {e}"));
        }
    }
    let text = match ctx.cli.format {
        Format::Json => to_json_string(&report.to_json(config)),
        Format::Csv => report.table().to_csv(),
        Format::Text => format!(
            "{}\n{} claims: {} passed, {} failed (precision {} digits)\n",
            report.table().to_text(),
            summary.total,
            summary.passed,
            summary.failed,
            ctx.prec.digits()
        ),
    };
    let code = ctx.emit(&text);
    if code != EXIT_OK {
        return code;
    }
    if report.all_passed() {
        EXIT_OK
    } else {
        EXIT_FAILED
    }
}

fn cmd_optimize(ctx: &mut Ctx, l: &str, k: &str, direction: &str) -> i32 {
    let directions = match direction.trim().to_ascii_lowercase().as_str() {
        "both" => vec![Direction::Lower, Direction::Upper],
        other => match other.parse::<Direction>() {
            Ok(d) => vec![d],
            Err(e) => return ctx.usage(e),
        },
    };
    let (ls, ks) = match (parse_grid(l, ctx.prec), parse_grid(k, ctx.prec)) {
        (Ok(a), Ok(b)) => (a, b),
        (Err(e), _) | (_, Err(e)) => return ctx.usage(e),
    };
    if let Err(code) = check_l_grid(ctx, &ls, false).and_then(|_| check_k_grid(ctx, &ks)) {
        return code;
    }
    let rows = improvement_table(&ls, &ks, &directions);
    let mut failed = false;
    for r in &rows {
        match &r.result {
            Err(e) => {
                ctx.warn(format!("L={} K={} {}: {e}", r.l.to_sci_string(6), r.big_k.to_sci_string(6), r.direction));
                failed |= ctx.cli.strict;
            }
            Ok(o) if !o.dominates_theorem() => {
                let _ = writeln!(ctx.err, "error: optimizer result worse than the schedule at L={} K={}", r.l.to_sci_string(6), r.big_k.to_sci_string(6));
                failed = true;
            }
            Ok(_) => {}
        }
    }
    let config = ctx.config("optimize", json!({"L": l, "K": k, "direction": direction}));
    let code = ctx.emit_table(&rows_to_table(&rows), config, None);
    if code != EXIT_OK {
        return code;
    }
    if failed {
        EXIT_FAILED
    } else {
        EXIT_OK
    }
}

#[allow(clippy::too_many_arguments)]
fn cmd_dim(
    ctx: &mut Ctx,
    cantor: &str,
    offset: f64,
    scale: f64,
    map: &str,
    scales: usize,
    sandwich: Option<&str>,
    export_cover: Option<&PathBuf>,
) -> i32 {
    let spec = match cantor.parse::<CantorSpec>().and_then(|s| s.with_placement(offset, scale)) {
        Ok(s) => s,
        Err(e) => return ctx.usage(e),
    };
    let map: ModelMap = match map.parse() {
        Ok(m) => m,
        Err(e) => return ctx.usage(e),
    };
    let methods = match sandwich.map(parse_methods).transpose() {
        Ok(m) => m,
        Err(e) => return ctx.usage(e),
    };
    let cover = match generate_cantor(&spec).and_then(|c| apply_map(&map, &c)) {
        Ok(c) => c,
        Err(e) => return ctx.usage(e),
    };
    if let Some(path) = export_cover {
        if let Err(e) = std::fs::write(path, cover.to_csv()) {
            return ctx.usage(format!("cannot write cover: {e}"));
        }
    }
    let config = ctx.config(
        "dim",
        json!({"cantor": cantor, "offset": offset, "scale": scale, "map": map.to_string(), "scales": scales, "sandwich": sandwich}),
    );

    match methods {
        None => {
            let est = match box_dimension(&cover, scales) {
                Ok(e) => e,
                Err(e) => return ctx.usage(e),
            };
            let mut t = Table::new(["spec", "map", "L_analytic", "estimate", "r2", "scales_used", "delta_min", "delta_max"]);
            t.push(vec![
                spec.to_string().into(),
                map.to_string().into(),
                spec.analytic_dimension().into(),
                est.value.into(),
                est.r2.into(),
                est.scales_used.into(),
                est.scale_range.0.into(),
                est.scale_range.1.into(),
            ]);
            ctx.emit_table(&t, config, None)
        }
        Some(methods) => {
            let opts = SandwichOptions { num_scales: scales, slack: ctx.tolerances.sandwich, precision: ctx.prec };
            let rows = match sandwich_check(&spec, &map, &methods, &opts) {
                Ok(r) => r,
                Err(e) => return ctx.usage(e),
            };
            let code = ctx.emit_table(&sandwich_table(&rows), config, None);
            if code != EXIT_OK {
                return code;
            }
            let violations: Vec<_> = rows.iter().filter(|r| r.is_violation()).collect();
            for r in &violations {
                let _ = writeln!(ctx.err, "error: estimate {:.4} outside the {} sandwich", r.estimate.value, r.method);
            }
            if violations.is_empty() {
                EXIT_OK
            } else {
                EXIT_FAILED
            }
        }
    }
}
