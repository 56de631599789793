//! Command-line front end.
//!
//! Every option may also come from a `--config` file of `key=value` lines
//! (`#` starts a comment; keys are the long flag names, plus `command` for the
//! verb). Flags on the command line win over the file.
//!
//! Exit codes: 0 success, 2 usage error, 3 domain error, 4 non-convergence.

use std::collections::HashMap;
use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::PathBuf;
use std::str::FromStr;

use clap::{Parser, Subcommand, ValueEnum};

use crate::catalog::{fixed_point, parse_real, verify_root_like, FunctionSpec};
use crate::chebyshev::{
    cheb_candidate_limit, cheb_candidate_limit_scaled, cheb_nested_table, cheb_poly,
};
use crate::eigen::{build_phi_series, phi_series_error, DEFAULT_QUAD_POINTS};
use crate::error::{Error, Result};
use crate::iteration::{
    candidate_sequence, estimate_limit, limit_for, orbit_in, LimitEstimate, DEFAULT_TERMS,
};
use crate::koenigs::{
    cardioid_containment_check, currie_c, disk_self_map_check, non_surjectivity_witness,
};
use crate::mobius::{associated_q, candidate_limit_exact, lms_from_abd, MobiusCoeffs};
use crate::numeric::{Ext, Precision};
use crate::repro;

#[derive(Parser, Debug)]
#[command(
    name = "orbitkit",
    version,
    about = "Candidate sequences and their limits for iterated contractions"
)]
struct Cli {
    #[command(subcommand)]
    command: Option<Verb>,
    #[command(flatten)]
    opts: Opts,
}

#[derive(Subcommand, Debug, Clone, Copy, PartialEq, Eq)]
enum Verb {
    /// Orbit t_n = f⁽ⁿ⁾(t0).
    Orbit,
    /// Candidate sequence c_n = |L − t_n|/mⁿ.
    Candidate,
    /// Numeric limit of the candidate sequence with an error bound.
    Limit,
    /// Closed-form limit for a Möbius spec, with the numeric estimate beside it.
    MobiusLimit,
    /// Associated Q-function of a spec, with Q''(L) = f''(L) − gap.
    QConstruct,
    /// Eigen-function Taylor series of √(C + t) as exact rationals.
    PhiSeries,
    /// Functional-equation residuals of the truncated eigen-function series.
    PhiError,
    /// Chebyshev inverse f_K: polynomial, candidate table and limit.
    Cheby,
    /// C(L) from the candidate limit of √(L² − L + t).
    CurrieC,
    /// Disk self-map, non-surjectivity and cardioid checks on D_L(L).
    KoenigsCheck,
    /// Sampled root-like check on an interval.
    VerifyRootlike,
    /// The acceptance table; exit 0 iff every criterion passes.
    Repro,
}

impl FromStr for Verb {
    type Err = Error;
    fn from_str(s: &str) -> Result<Verb> {
        Ok(match s.trim() {
            "orbit" => Verb::Orbit,
            "candidate" => Verb::Candidate,
            "limit" => Verb::Limit,
            "mobius-limit" => Verb::MobiusLimit,
            "q-construct" => Verb::QConstruct,
            "phi-series" => Verb::PhiSeries,
            "phi-error" => Verb::PhiError,
            "cheby" => Verb::Cheby,
            "currie-c" => Verb::CurrieC,
            "koenigs-check" => Verb::KoenigsCheck,
            "verify-rootlike" => Verb::VerifyRootlike,
            "repro" => Verb::Repro,
            other => return Err(Error::Parse(format!("unknown command {other:?}"))),
        })
    }
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum PrecisionArg {
    Double,
    Extended,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum Format {
    Table,
    Csv,
}

#[derive(clap::Args, Debug, Default, Clone)]
struct Opts {
    /// Function spec in text form, e.g. "sqrt_affine(c=2)".
    #[arg(long, global = true)]
    spec: Option<String>,
    /// Starting point (decimal or p/q).
    #[arg(long, global = true, allow_hyphen_values = true)]
    t0: Option<String>,
    /// Number of iterates or table rows.
    #[arg(long, global = true)]
    n: Option<usize>,
    /// Candidate terms for limits, or series terms for phi-series/phi-error.
    #[arg(long, global = true)]
    terms: Option<usize>,
    /// Constant C of √(C + t).
    #[arg(long, global = true)]
    c: Option<String>,
    /// Chebyshev index K.
    #[arg(long, global = true)]
    k: Option<u32>,
    /// Use the scaled Chebyshev inverse.
    #[arg(long, global = true)]
    scaled: Option<bool>,
    #[arg(long, global = true, value_enum)]
    precision: Option<PrecisionArg>,
    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Fixed point L for currie-c and koenigs-check.
    #[arg(long, global = true)]
    l: Option<String>,
    /// Second-derivative gap for q-construct.
    #[arg(long, global = true)]
    gap: Option<String>,
    /// Interval "a,b" for verify-rootlike, or θ-range for phi-error.
    #[arg(long, global = true, allow_hyphen_values = true)]
    interval: Option<String>,
    /// Grid points for verify-rootlike.
    #[arg(long, global = true)]
    grid: Option<usize>,
    /// Sample count for koenigs-check.
    #[arg(long, global = true)]
    samples: Option<usize>,
    /// Relative tolerance for limit estimates.
    #[arg(long, global = true)]
    rel_tol: Option<f64>,
    /// key=value file supplying defaults for any flag.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
}

fn parse_value<T: FromStr>(key: &str, v: &str) -> Result<T> {
    v.trim()
        .parse()
        .map_err(|_| Error::Parse(format!("bad value {v:?} for {key}")))
}

fn parse_enum<T: ValueEnum>(key: &str, v: &str) -> Result<T> {
    T::from_str(v.trim(), true).map_err(|_| Error::Parse(format!("bad value {v:?} for {key}")))
}

/// Parses `key=value` lines. Blank lines and `#` comments are skipped.
fn parse_config(text: &str) -> Result<HashMap<String, String>> {
    let mut map = HashMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| Error::Parse(format!("config line {}: expected key=value", i + 1)))?;
        let key = k.trim().trim_start_matches("--").replace('_', "-");
        map.insert(key, v.trim().to_string());
    }
    Ok(map)
}

impl Opts {
    /// Fills unset options from a config map; unknown keys are errors.
    fn fill_from(&mut self, map: &HashMap<String, String>) -> Result<()> {
        fn set<T>(slot: &mut Option<T>, v: Result<T>) -> Result<()> {
            if slot.is_none() {
                *slot = Some(v?);
            }
            Ok(())
        }
        for (key, v) in map {
            match key.as_str() {
                "command" => {}
                "spec" => set(&mut self.spec, Ok(v.clone()))?,
                "t0" => set(&mut self.t0, Ok(v.clone()))?,
                "n" => set(&mut self.n, parse_value(key, v))?,
                "terms" => set(&mut self.terms, parse_value(key, v))?,
                "c" => set(&mut self.c, Ok(v.clone()))?,
                "k" => set(&mut self.k, parse_value(key, v))?,
                "scaled" => set(&mut self.scaled, parse_value(key, v))?,
                "precision" => set(&mut self.precision, parse_enum(key, v))?,
                "out" => set(&mut self.out, Ok(PathBuf::from(v)))?,
                "format" => set(&mut self.format, parse_enum(key, v))?,
                "l" => set(&mut self.l, Ok(v.clone()))?,
                "gap" => set(&mut self.gap, Ok(v.clone()))?,
                "interval" => set(&mut self.interval, Ok(v.clone()))?,
                "grid" => set(&mut self.grid, parse_value(key, v))?,
                "samples" => set(&mut self.samples, parse_value(key, v))?,
                "rel-tol" => set(&mut self.rel_tol, parse_value(key, v))?,
                other => return Err(Error::Parse(format!("unknown config key {other:?}"))),
            }
        }
        Ok(())
    }

    fn spec(&self) -> Result<FunctionSpec> {
        let text = self.spec.as_deref().ok_or_else(|| missing("spec"))?;
        let spec: FunctionSpec = text.parse()?;
        spec.validate()?;
        Ok(spec)
    }

    fn t0(&self) -> Result<f64> {
        parse_real(self.t0.as_deref().ok_or_else(|| missing("t0"))?)
    }

    fn real(&self, name: &str, v: &Option<String>) -> Result<f64> {
        parse_real(v.as_deref().ok_or_else(|| missing(name))?)
    }

    fn precision(&self) -> Precision {
        match self.precision {
            Some(PrecisionArg::Double) => Precision::Double,
            _ => Precision::Extended,
        }
    }

    fn rel_tol(&self) -> f64 {
        self.rel_tol.unwrap_or(1e-8)
    }

    fn pair(&self) -> Result<Option<(f64, f64)>> {
        let Some(text) = self.interval.as_deref() else {
            return Ok(None);
        };
        let (a, b) = text
            .split_once(',')
            .ok_or_else(|| Error::Parse(format!("interval {text:?} is not \"a,b\"")))?;
        Ok(Some((parse_real(a)?, parse_real(b)?)))
    }
}

fn missing(flag: &str) -> Error {
    Error::InvalidParameter(format!("--{flag} is required"))
}

/// Parses `args` (program name first), runs the verb, and returns the exit
/// code. Diagnostics go to stderr.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("orbitkit: {e}");
            e.exit_code()
        }
    }
}

fn run(cli: Cli) -> Result<i32> {
    let mut opts = cli.opts;
    let mut command = cli.command;
    if let Some(path) = opts.config.clone() {
        let text = std::fs::read_to_string(&path)
            .map_err(|e| Error::InvalidParameter(format!("cannot read {}: {e}", path.display())))?;
        let map = parse_config(&text)?;
        if command.is_none() {
            command = map.get("command").map(|v| v.parse()).transpose()?;
        }
        opts.fill_from(&map)?;
    }
    let verb = command.ok_or_else(|| Error::InvalidParameter("no command given".into()))?;
    let format = opts.format.unwrap_or(if verb == Verb::PhiSeries {
        Format::Csv
    } else {
        Format::Table
    });
    let mut out = Vec::new();
    let code = dispatch(verb, &opts, format, &mut out)?;
    match &opts.out {
        Some(path) => std::fs::write(path, &out).map_err(|e| {
            Error::InvalidParameter(format!("cannot write {}: {e}", path.display()))
        })?,
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(&out)
                .and_then(|_| stdout.flush())
                .map_err(|e| Error::Unsupported(format!("stdout: {e}")))?;
        }
    }
    Ok(code)
}

/// Two-column output: CSV with a header row, or an aligned table.
fn write_rows(
    out: &mut Vec<u8>,
    format: Format,
    header: &[&str],
    rows: &[Vec<String>],
) -> Result<()> {
    match format {
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            let io = |e: csv::Error| Error::Unsupported(format!("CSV output failed: {e}"));
            w.write_record(header).map_err(io)?;
            for r in rows {
                w.write_record(r).map_err(io)?;
            }
            w.flush()
                .map_err(|e| Error::Unsupported(format!("CSV output failed: {e}")))?;
        }
        Format::Table => {
            let mut widths: Vec<usize> = header.iter().map(|h| h.chars().count()).collect();
            for r in rows {
                for (w, cell) in widths.iter_mut().zip(r) {
                    *w = (*w).max(cell.chars().count());
                }
            }
            let mut text = String::new();
            let line = |cells: Vec<&str>, text: &mut String| {
                let padded: Vec<String> = cells
                    .iter()
                    .zip(&widths)
                    .map(|(c, w)| format!("{c:>w$}"))
                    .collect();
                let _ = writeln!(text, "{}", padded.join("  ").trim_end());
            };
            line(header.to_vec(), &mut text);
            for r in rows {
                line(r.iter().map(String::as_str).collect(), &mut text);
            }
            out.extend_from_slice(text.as_bytes());
        }
    }
    Ok(())
}

fn fmt_value(precision: Precision, v: Ext) -> String {
    match precision {
        Precision::Double => format!("{:e}", v.to_f64()),
        Precision::Extended => v.to_string(),
    }
}

fn fmt_estimate(est: &LimitEstimate) -> String {
    format!(
        "{} ± {:.2e} ({}, {} terms)",
        est.value,
        est.abs_error_bound,
        est.method.as_str(),
        est.n_used
    )
}

fn dispatch(verb: Verb, o: &Opts, format: Format, out: &mut Vec<u8>) -> Result<i32> {
    let mut text = String::new();
    match verb {
        Verb::Orbit => {
            let spec = o.spec()?;
            let precision = o.precision();
            let orbit = orbit_in(&spec, Ext::from_f64(o.t0()?), o.n.unwrap_or(20), precision)?;
            let rows: Vec<Vec<String>> = orbit
                .values
                .iter()
                .enumerate()
                .map(|(n, v)| vec![n.to_string(), fmt_value(precision, *v)])
                .collect();
            write_rows(out, format, &["n", "t_n"], &rows)?;
        }
        Verb::Candidate => {
            let spec = o.spec()?;
            let fp = fixed_point(&spec)?;
            let precision = o.precision();
            let cs = candidate_sequence(
                &spec,
                fp.l_ext,
                fp.m.abs(),
                Ext::from_f64(o.t0()?),
                o.n.unwrap_or(20),
                precision,
            )?;
            let rows: Vec<Vec<String>> =
                cs.c.iter()
                    .enumerate()
                    .map(|(n, v)| vec![n.to_string(), fmt_value(precision, *v)])
                    .collect();
            write_rows(out, format, &["n", "c_n"], &rows)?;
        }
        Verb::Limit => {
            let spec = o.spec()?;
            let fp = fixed_point(&spec)?;
            let cs = candidate_sequence(
                &spec,
                fp.l_ext,
                fp.m.abs(),
                Ext::from_f64(o.t0()?),
                o.terms.unwrap_or(DEFAULT_TERMS),
                o.precision(),
            )?;
            let est = estimate_limit(&cs, o.rel_tol())?;
            match format {
                Format::Csv => write_rows(
                    out,
                    format,
                    &["value", "abs_error_bound", "method", "n_used"],
                    &[vec![
                        est.value.to_string(),
                        format!("{:e}", est.abs_error_bound),
                        est.method.as_str().to_string(),
                        est.n_used.to_string(),
                    ]],
                )?,
                Format::Table => {
                    let _ = writeln!(text, "spec   {spec}");
                    let _ = writeln!(text, "L      {}  m = {}", fp.l, fp.m);
                    let _ = writeln!(text, "limit  {}", fmt_estimate(&est));
                    if o.precision() == Precision::Extended {
                        let _ = writeln!(text, "       double-double {:.30}", est.value_ext);
                    }
                }
            }
        }
        Verb::MobiusLimit => {
            let spec = o.spec()?;
            let (a, b, d) = spec
                .mobius_coeffs()
                .ok_or_else(|| Error::Unsupported(format!("{spec} (not a Möbius spec)")))?;
            let mc = MobiusCoeffs::new(a, b, d)?;
            let t0 = o.t0()?;
            let exact = candidate_limit_exact(&mc, t0)?;
            let numeric = limit_for(&spec, t0, o.precision(), o.rel_tol());
            match format {
                Format::Csv => {
                    let mut rows =
                        vec![vec![exact.to_string(), "0".into(), "exact-formula".into()]];
                    if let Ok(est) = &numeric {
                        rows.push(vec![
                            est.value.to_string(),
                            format!("{:e}", est.abs_error_bound),
                            est.method.as_str().into(),
                        ]);
                    }
                    write_rows(out, format, &["value", "abs_error_bound", "method"], &rows)?;
                }
                Format::Table => {
                    let _ = writeln!(text, "limit    {exact} (exact-formula)");
                    match &numeric {
                        Ok(est) => {
                            let _ = writeln!(text, "numeric  {}", fmt_estimate(est));
                        }
                        Err(e) => {
                            let _ = writeln!(text, "numeric  unavailable: {e}");
                        }
                    }
                }
            }
        }
        Verb::QConstruct => {
            let spec = o.spec()?;
            let gap = o.real("gap", &o.gap)?;
            let q = associated_q(&spec, gap)?;
            let fp = fixed_point(&spec)?;
            let p = lms_from_abd(&q, fp.l)?;
            let rows = vec![vec![
                q.a.to_string(),
                q.b.to_string(),
                q.d.to_string(),
                p.l.to_string(),
                p.m.to_string(),
                p.s.to_string(),
            ]];
            if format == Format::Table {
                let _ = writeln!(text, "Q = {}", q.spec());
            }
            write_rows(out, format, &["a", "b", "d", "L", "m", "s"], &rows)?;
        }
        Verb::PhiSeries => {
            let c = o.real("c", &o.c)?;
            let rs = build_phi_series(c, o.terms.unwrap_or(6))?;
            match format {
                Format::Csv => rs.write_csv(&mut *out)?,
                Format::Table => {
                    let mut buf = Vec::new();
                    rs.write_csv(&mut buf)?;
                    let mut rdr = csv::Reader::from_reader(buf.as_slice());
                    let rows: Vec<Vec<String>> = rdr
                        .records()
                        .map(|r| r.map(|r| r.iter().map(String::from).collect()))
                        .collect::<std::result::Result<_, _>>()
                        .map_err(|e| Error::Unsupported(format!("CSV round trip failed: {e}")))?;
                    write_rows(
                        out,
                        format,
                        &["n", "numerator", "denominator", "decimal"],
                        &rows,
                    )?;
                }
            }
        }
        Verb::PhiError => {
            let c = o.real("c", &o.c)?;
            let rs = build_phi_series(c, o.terms.unwrap_or(6))?;
            let range = o.pair()?.unwrap_or((-2.0, 2.0));
            let degrees: Vec<usize> = match o.n {
                Some(n) => vec![n],
                None => (3..=rs.degree()).collect(),
            };
            let mut rows = Vec::new();
            for n in degrees {
                let r = phi_series_error(&rs, n, range, DEFAULT_QUAD_POINTS)?;
                rows.push(vec![
                    n.to_string(),
                    format!("{:.6e}", r.max_error),
                    format!("{:.6e}", r.avg_error),
                ]);
            }
            write_rows(out, format, &["n", "max_error", "avg_error"], &rows)?;
        }
        Verb::Cheby => {
            let k = o.k.ok_or_else(|| missing("k"))?;
            let scaled = o.scaled.unwrap_or(false);
            let t0 = o.t0.as_deref().map(parse_real).transpose()?.unwrap_or(0.0);
            let rows_wanted = o.n.unwrap_or(10);
            let cs = cheb_nested_table(
                k,
                t0,
                o.terms.unwrap_or(DEFAULT_TERMS).max(rows_wanted + 1),
                scaled,
            )?;
            let est = estimate_limit(&cs, o.rel_tol())?;
            let closed = if scaled {
                cheb_candidate_limit_scaled(k, t0)?
            } else {
                cheb_candidate_limit(k, t0)?
            };
            if format == Format::Table {
                let _ = writeln!(text, "p_{k}(t) = {}", cheb_poly(k)?);
                let _ = writeln!(text, "limit    {closed} (exact-formula)");
                let _ = writeln!(text, "numeric  {}", fmt_estimate(&est));
            }
            let rows: Vec<Vec<String>> =
                cs.c.iter()
                    .take(rows_wanted + 1)
                    .enumerate()
                    .map(|(n, v)| vec![n.to_string(), v.to_string()])
                    .collect();
            out.extend_from_slice(text.as_bytes());
            text.clear();
            write_rows(out, format, &["n", "c_n"], &rows)?;
        }
        Verb::CurrieC => {
            let l = o.real("l", &o.l)?;
            let v = currie_c(l)?;
            write_rows(
                out,
                format,
                &["L", "C"],
                &[vec![l.to_string(), v.to_string()]],
            )?;
        }
        Verb::KoenigsCheck => {
            let l = o.real("l", &o.l)?;
            let samples = o.samples.unwrap_or(10_000);
            let disk = disk_self_map_check(l, samples)?;
            let (in_a, in_b) = non_surjectivity_witness(l)?;
            let cardioid = cardioid_containment_check(l, samples)?;
            let rows = vec![
                vec![
                    "disk-self-map".into(),
                    disk.ok.to_string(),
                    format!("min margin {:.6e} at {}", disk.margin, disk.worst),
                ],
                vec![
                    "non-surjective".into(),
                    (in_a && !in_b).to_string(),
                    format!("z = L + 2/3 in A: {in_a}; z² in B: {in_b}"),
                ],
                vec![
                    "cardioid".into(),
                    cardioid.to_string(),
                    format!("{samples} angles"),
                ],
            ];
            write_rows(out, format, &["check", "ok", "detail"], &rows)?;
            if !(disk.ok && in_a && !in_b && cardioid) {
                return Ok(3);
            }
        }
        Verb::VerifyRootlike => {
            let spec = o.spec()?;
            let interval = match o.pair()? {
                Some(iv) => iv,
                None => spec.sample_interval()?,
            };
            let r = verify_root_like(&spec, interval, o.grid.unwrap_or(256))?;
            let rows = vec![vec![
                format!("{}", r.interval.0),
                format!("{}", r.interval.1),
                r.is_contraction.to_string(),
                r.fprime_positive.to_string(),
                r.fsecond_negative.to_string(),
                r.verdict.to_string(),
            ]];
            write_rows(
                out,
                format,
                &[
                    "lo",
                    "hi",
                    "contraction",
                    "fprime_positive",
                    "fsecond_negative",
                    "root_like",
                ],
                &rows,
            )?;
        }
        Verb::Repro => {
            let results = repro::run_all();
            let all = results.iter().all(|r| r.passed);
            match format {
                Format::Csv => {
                    let rows: Vec<Vec<String>> = results
                        .iter()
                        .map(|r| {
                            vec![
                                r.id.to_string(),
                                r.name.into(),
                                if r.passed { "pass" } else { "fail" }.into(),
                                r.detail.clone(),
                            ]
                        })
                        .collect();
                    write_rows(out, format, &["id", "name", "result", "detail"], &rows)?;
                }
                Format::Table => {
                    for r in &results {
                        let _ = writeln!(text, "{}", r.line());
                    }
                    let passed = results.iter().filter(|r| r.passed).count();
                    let _ = writeln!(text, "{passed}/{} criteria pass", results.len());
                }
            }
            out.extend_from_slice(text.as_bytes());
            return Ok(if all { 0 } else { 1 });
        }
    }
    out.extend_from_slice(text.as_bytes());
    Ok(0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn opts(args: &[&str]) -> Cli {
        Cli::try_parse_from(std::iter::once("orbitkit").chain(args.iter().copied())).unwrap()
    }

    #[test]
    fn config_parsing() {
        let map = parse_config(
            "# comment\ncommand = limit\nspec=sqrt_affine(c=2) # trailing\n\nrel_tol=1e-9\n",
        )
        .unwrap();
        assert_eq!(map["command"], "limit");
        assert_eq!(map["spec"], "sqrt_affine(c=2)");
        assert_eq!(map["rel-tol"], "1e-9");
        assert!(parse_config("no equals sign").is_err());
    }

    #[test]
    fn flags_win_over_config() {
        let mut cli = opts(&["limit", "--t0", "1"]);
        let map = parse_config("t0=3\nspec=sqrt_affine(c=2)\nprecision=double").unwrap();
        cli.opts.fill_from(&map).unwrap();
        assert_eq!(cli.opts.t0.as_deref(), Some("1"));
        assert_eq!(cli.opts.spec.as_deref(), Some("sqrt_affine(c=2)"));
        assert_eq!(cli.opts.precision, Some(PrecisionArg::Double));
        let bad = parse_config("colour=blue").unwrap();
        assert!(cli.opts.fill_from(&bad).is_err());
    }

    #[test]
    fn negative_starts_parse() {
        let cli = opts(&["orbit", "--t0", "-1.5", "--spec", "sqrt_affine(c=2)"]);
        assert_eq!(cli.opts.t0().unwrap(), -1.5);
        assert_eq!(cli.command, Some(Verb::Orbit));
    }

    #[test]
    fn verbs_round_trip_from_text() {
        for v in [
            "orbit",
            "candidate",
            "limit",
            "mobius-limit",
            "q-construct",
            "phi-series",
            "phi-error",
            "cheby",
            "currie-c",
            "koenigs-check",
            "verify-rootlike",
            "repro",
        ] {
            assert!(v.parse::<Verb>().is_ok(), "{v}");
        }
        assert!("plot".parse::<Verb>().is_err());
    }

    #[test]
    fn usage_errors_exit_2() {
        assert_eq!(main_with_args(["orbitkit", "frobnicate"]), 2);
        assert_eq!(
            main_with_args(["orbitkit", "limit", "--precision", "quad"]),
            2
        );
        assert_eq!(main_with_args(["orbitkit", "limit", "--t0", "0"]), 2);
        assert_eq!(main_with_args(["orbitkit"]), 2);
    }
}
