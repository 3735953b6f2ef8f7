//! Command implementations. Each returns the complete stdout text so that a
//! failure part-way through never leaves partial output behind.

use std::collections::HashSet;
use std::fmt::Write as _;

use ratcycles_core::cycles::CycleSolution;
use ratcycles_core::enumerate::{enumerate_words, WordParams};
use ratcycles_core::integrality::{
    canonical_witness, decompose_m, remark_edge, search_witnesses, theorem_combination, Witness,
};
use ratcycles_core::padic::{digit_glyph, pattern_check, table_rows, render_table};
use ratcycles_core::{parse_spec, solve_cycle, AffineStep, BigInt, Composition, Error, ErrorKind, Rational};
use serde::{Deserialize, Serialize};

use crate::args::{Cli, Command, Format, SpecSource};

#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    fn validation(message: impl Into<String>) -> Self {
        Failure {
            code: 2,
            message: message.into(),
        }
    }

    fn parse(message: impl Into<String>) -> Self {
        Failure {
            code: 3,
            message: message.into(),
        }
    }

    fn internal(message: impl Into<String>) -> Self {
        Failure {
            code: 1,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e.kind() {
            ErrorKind::Parse => 3,
            ErrorKind::Validation => 2,
            ErrorKind::Internal => 1,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

type CmdResult = Result<String, Failure>;

pub fn run(cli: &Cli) -> CmdResult {
    let format = cli.format;
    match &cli.command {
        Command::Solve { source } => solve(&load(source)?, format),
        Command::Witness {
            source,
            alpha_bound,
            beta_bound,
            canonical,
        } => witness(&load(source)?, format, *alpha_bound, *beta_bound, *canonical),
        Command::Check {
            source,
            alpha,
            beta,
            b,
            decompose,
        } => check(&load(source)?, format, *alpha, *beta, *b, *decompose),
        Command::Padic {
            source,
            base,
            digits,
            pattern,
        } => padic(&load(source)?, format, *base, *digits, *pattern),
        Command::Enumerate {
            q,
            p,
            k_s,
            k_t,
            max_len,
            integers_only,
            dedup_rotations,
        } => enumerate(
            WordParams {
                q: *q,
                p: *p,
                k_s: *k_s,
                k_t: *k_t,
            },
            format,
            *max_len,
            *integers_only,
            *dedup_rotations,
        ),
    }
}

// Accepts `{"q":…, "steps":[…]}`, which covers both composition JSON and
// the output of `solve --format json`.
#[derive(Deserialize)]
struct JsonSpec {
    q: i64,
    steps: Vec<AffineStep>,
}

fn load(source: &SpecSource) -> Result<Composition, Failure> {
    let text = match (&source.spec, &source.spec_inline) {
        (Some(path), None) => std::fs::read_to_string(path)
            .map_err(|e| Failure::validation(format!("cannot read {}: {e}", path.display())))?,
        (None, Some(text)) => text.clone(),
        _ => return Err(Failure::validation("give exactly one of --spec and --spec-inline")),
    };
    if text.trim_start().starts_with('{') {
        let raw: JsonSpec =
            serde_json::from_str(&text).map_err(|e| Failure::parse(format!("bad composition JSON: {e}")))?;
        return Ok(Composition::new(raw.q, raw.steps)?);
    }
    Ok(parse_spec(&text)?)
}

fn json<T: Serialize + ?Sized>(value: &T) -> CmdResult {
    let mut s = serde_json::to_string_pretty(value).map_err(|e| Failure::internal(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

fn csv_text<R: Serialize>(rows: impl IntoIterator<Item = R>) -> CmdResult {
    let mut w = csv::Writer::from_writer(Vec::new());
    for row in rows {
        w.serialize(row).map_err(|e| Failure::internal(e.to_string()))?;
    }
    let bytes = w.into_inner().map_err(|e| Failure::internal(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| Failure::internal(e.to_string()))
}

#[derive(Serialize)]
struct SolveJson<'a> {
    q: i64,
    n: usize,
    steps: &'a [AffineStep],
    #[serde(rename = "prodP")]
    prod_p: String,
    #[serde(rename = "D")]
    d: String,
    #[serde(rename = "U")]
    u: &'a [Rational],
    x: &'a [Rational],
    #[serde(rename = "commonDen")]
    common_den: String,
}

#[derive(Serialize)]
struct SolveRow {
    index: usize,
    u_num: String,
    u_den: String,
    x_num: String,
    x_den: String,
}

fn solve(c: &Composition, format: Format) -> CmdResult {
    let sol = solve_cycle(c)?;
    match format {
        Format::Json => json(&SolveJson {
            q: sol.q,
            n: sol.n(),
            steps: c.steps(),
            prod_p: sol.prod_p.to_string(),
            d: sol.d.to_string(),
            u: &sol.u,
            x: &sol.x,
            common_den: sol.common_den.to_string(),
        }),
        Format::Csv => csv_text(sol.u.iter().enumerate().map(|(i, u)| {
            let (x_num, x_den) = sol
                .x
                .get(i)
                .map(|x| (x.numer().to_string(), x.denom().to_string()))
                .unwrap_or_default();
            SolveRow {
                index: i,
                u_num: u.numer().to_string(),
                u_den: u.denom().to_string(),
                x_num,
                x_den,
            }
        })),
        Format::Text => {
            let mut out = String::new();
            let _ = writeln!(out, "q = {}", sol.q);
            let _ = writeln!(out, "n = {}", sol.n());
            let _ = writeln!(out, "prodP = {}", sol.prod_p);
            let _ = writeln!(out, "D = {}", sol.d);
            for (i, u) in sol.u.iter().enumerate() {
                let _ = writeln!(out, "U_{i} = {u}");
            }
            for (i, x) in sol.x.iter().enumerate() {
                let _ = writeln!(out, "x_{i} = {x}");
            }
            let _ = writeln!(out, "commonDen = {}", sol.common_den);
            Ok(out)
        }
    }
}

#[derive(Serialize)]
struct WitnessRow {
    alpha: String,
    beta: String,
    b: usize,
    #[serde(rename = "D")]
    d: String,
    value: String,
}

fn witness(c: &Composition, format: Format, alpha_bound: i64, beta_bound: i64, canonical: Option<i64>) -> CmdResult {
    let found = match canonical {
        Some(k) => vec![canonical_witness(c, &BigInt::from(k))?],
        None => search_witnesses(c, alpha_bound, beta_bound)?,
    };
    match format {
        Format::Json => json(&found),
        Format::Csv => csv_text(found.iter().map(|w| WitnessRow {
            alpha: w.alpha().to_string(),
            beta: w.beta().to_string(),
            b: w.b(),
            d: w.discriminant().to_string(),
            value: w.certificate().to_string(),
        })),
        Format::Text if found.is_empty() => Ok("no witnesses in window\n".into()),
        Format::Text => {
            let mut out = String::new();
            for w in &found {
                let _ = writeln!(
                    out,
                    "{w}  {} + {}*{}^{} = {}*{}",
                    w.alpha(),
                    w.beta(),
                    c.q(),
                    w.b(),
                    w.certificate(),
                    w.discriminant()
                );
            }
            Ok(out)
        }
    }
}

#[derive(Serialize)]
struct CheckRow {
    i: usize,
    combination: String,
    #[serde(rename = "M", skip_serializing_if = "Option::is_none")]
    m: Option<Vec<String>>,
}

fn check(c: &Composition, format: Format, alpha: i64, beta: i64, b: i64, decompose: bool) -> CmdResult {
    let sol: CycleSolution = solve_cycle(c)?;
    let n = c.len();
    let (alpha, beta) = (BigInt::from(alpha), BigInt::from(beta));

    let (header, rows) = if b == 0 || b == n as i64 {
        let values = remark_edge(c, &sol, &alpha, &beta, b)?;
        let header = format!("alpha = {alpha}, beta = {beta}, b = {b} (edge case): {} divides the coefficient", sol.d);
        let rows = values
            .into_iter()
            .enumerate()
            .map(|(i, v)| CheckRow {
                i,
                combination: v.to_string(),
                m: None,
            })
            .collect::<Vec<_>>();
        (header, rows)
    } else {
        let w = Witness::certify(c, alpha, beta, b)?;
        let header = format!(
            "alpha = {}, beta = {}, b = {}: {} divides {}",
            w.alpha(),
            w.beta(),
            w.b(),
            w.discriminant(),
            w.certificate() * w.discriminant()
        );
        let rows = (0..n)
            .map(|i| {
                let combination = theorem_combination(c, &sol, &w, i as i64)?;
                let m = if decompose && i + w.b() < n {
                    Some(decompose_m(c, &sol, &w, i as i64)?.m.iter().map(BigInt::to_string).collect())
                } else {
                    None
                };
                Ok(CheckRow {
                    i,
                    combination: combination.to_string(),
                    m,
                })
            })
            .collect::<Result<Vec<_>, Error>>()?;
        (header, rows)
    };

    match format {
        Format::Json => json(&rows),
        Format::Csv => csv_text(rows.iter().map(|r| (r.i, &r.combination))),
        Format::Text => {
            let mut out = header;
            out.push('\n');
            for r in &rows {
                let _ = write!(out, "i = {}  combination = {}", r.i, r.combination);
                match &r.m {
                    Some(m) => {
                        let _ = write!(out, "  M = [{}]", m.join(", "));
                    }
                    None if decompose && b > 0 && b < n as i64 => out.push_str("  (wraparound)"),
                    None => {}
                }
                out.push('\n');
            }
            Ok(out)
        }
    }
}

#[derive(Serialize)]
struct PadicRow {
    row: usize,
    term: usize,
    x_num: String,
    x_den: String,
    shift: usize,
    preperiod: String,
    period: String,
    /// Least significant digit first.
    digits: String,
    step: String,
}

fn glyphs(ds: &[u64]) -> String {
    ds.iter().map(|&d| digit_glyph(d)).collect::<Vec<_>>().join(" ")
}

fn padic(c: &Composition, format: Format, base: Option<i64>, digits: usize, pattern: Option<(u32, i64, usize)>) -> CmdResult {
    let sol = solve_cycle(c)?;
    if let Some((l, i, b)) = pattern {
        let rep = pattern_check(c, &sol, l, i, b)?;
        return match format {
            Format::Json => json(&rep),
            Format::Csv => csv_text([&rep]),
            Format::Text => Ok(format!(
                "l = {}, i = {}, b = {}: sigma = {}, difference = {}, {}\n",
                rep.l, rep.i, rep.b, rep.sigma, rep.difference, rep.mode
            )),
        };
    }

    let base = match base {
        Some(p) => p,
        None => c
            .two_type_multiplier()?
            .ok_or_else(|| Failure::validation("every step is T-type; pass --base"))?,
    };
    match format {
        Format::Text => Ok(render_table(c, &sol, base, digits)?),
        Format::Json | Format::Csv => {
            let rows: Vec<PadicRow> = table_rows(c, &sol, base, digits)?
                .into_iter()
                .enumerate()
                .map(|(row, r)| {
                    let mut lsd_first = r.shown.clone();
                    lsd_first.reverse();
                    PadicRow {
                        row,
                        term: r.term,
                        x_num: r.value.numer().to_string(),
                        x_den: r.value.denom().to_string(),
                        shift: r.shift,
                        preperiod: glyphs(&r.expansion.preperiod),
                        period: glyphs(&r.expansion.period),
                        digits: glyphs(&lsd_first),
                        step: r.step_label,
                    }
                })
                .collect();
            if format == Format::Json {
                json(&rows)
            } else {
                csv_text(rows)
            }
        }
    }
}

fn enumerate(params: WordParams, format: Format, max_len: usize, integers_only: bool, dedup: bool) -> CmdResult {
    let mut records = enumerate_words(params, max_len)?;
    let mut seen = HashSet::new();
    let kept: Vec<_> = records
        .by_ref()
        .filter(|r| !integers_only || r.is_integer)
        .filter(|r| !dedup || seen.insert(r.rotation_class.clone()))
        .collect();
    let skipped = records.skipped();

    match format {
        Format::Json => json(&kept),
        Format::Csv => csv_text(&kept),
        Format::Text => {
            let mut table = vec![[
                "word".to_string(),
                "n".into(),
                "m".into(),
                "D".into(),
                "x0".into(),
                "integer".into(),
                "rotation_class".into(),
            ]];
            table.extend(kept.iter().map(|r| {
                [
                    r.word.clone(),
                    r.n.to_string(),
                    r.m.to_string(),
                    r.d.to_string(),
                    r.x0.to_string(),
                    r.is_integer.to_string(),
                    r.rotation_class.clone(),
                ]
            }));
            let mut widths = [0usize; 7];
            for row in &table {
                for (w, cell) in widths.iter_mut().zip(row) {
                    *w = (*w).max(cell.len());
                }
            }
            let mut out = String::new();
            for row in &table {
                let line: Vec<String> = row
                    .iter()
                    .zip(widths)
                    .enumerate()
                    .map(|(col, (cell, w))| if col == 0 || col == 6 { format!("{cell:<w$}") } else { format!("{cell:>w$}") })
                    .collect();
                let _ = writeln!(out, "{}", line.join("  ").trim_end());
            }
            let _ = writeln!(out, "# {} records, {} words skipped with D = 0", kept.len(), skipped);
            Ok(out)
        }
    }
}
