use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "ratcycles", version, about = "Rational cycles of generalized Collatz compositions")]
pub struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    pub format: Format,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
pub struct SpecSource {
    /// Spec file (the `q=`/`steps=` grammar, or composition/solve JSON).
    #[arg(long, value_name = "PATH")]
    pub spec: Option<PathBuf>,

    /// Spec text given inline, same grammar as --spec.
    #[arg(long, value_name = "TEXT")]
    pub spec_inline: Option<String>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Discriminant, U_i and every cycle term x_i.
    Solve {
        #[command(flatten)]
        source: SpecSource,
    },
    /// Witnesses (alpha, beta, b) with D | alpha + beta*q^b in a window.
    Witness {
        #[command(flatten)]
        source: SpecSource,
        #[arg(long, default_value_t = 10)]
        alpha_bound: i64,
        #[arg(long, default_value_t = 10)]
        beta_bound: i64,
        /// Print the totient witness (k, -k*q^(phi(|D|)-1), 1) instead of searching.
        #[arg(long, value_name = "K", allow_negative_numbers = true)]
        canonical: Option<i64>,
    },
    /// Integer combinations alpha*x_i + beta*p_i..p_{i+b-1}*x_{i+b} for every i.
    Check {
        #[command(flatten)]
        source: SpecSource,
        #[arg(long, allow_negative_numbers = true)]
        alpha: i64,
        #[arg(long, allow_negative_numbers = true)]
        beta: i64,
        /// Shift, 0 <= b <= n (b = 0 and b = n are the trivial edge cases).
        #[arg(long)]
        b: i64,
        /// Also list the M_j terms for non-wraparound rows.
        #[arg(long)]
        decompose: bool,
    },
    /// Base-p digit table of the cycle terms.
    Padic {
        #[command(flatten)]
        source: SpecSource,
        /// Digit base; defaults to the S-step multiplier p.
        #[arg(long)]
        base: Option<i64>,
        #[arg(long, default_value_t = 10)]
        digits: usize,
        /// Check p^l*x_i - p^sigma(i,i+b)*x_{i+b} instead of printing the table.
        #[arg(long, value_name = "L,I,B", value_parser = parse_pattern)]
        pattern: Option<(u32, i64, usize)>,
    },
    /// Solve every S/T word up to a length.
    Enumerate {
        #[arg(long, allow_negative_numbers = true)]
        q: i64,
        #[arg(long, allow_negative_numbers = true)]
        p: i64,
        #[arg(long, default_value_t = 1, allow_negative_numbers = true)]
        k_s: i64,
        #[arg(long, default_value_t = 0, allow_negative_numbers = true)]
        k_t: i64,
        #[arg(long, default_value_t = 11)]
        max_len: usize,
        #[arg(long)]
        integers_only: bool,
        /// Keep only the first word of each rotation class.
        #[arg(long)]
        dedup_rotations: bool,
    },
}

fn parse_pattern(s: &str) -> Result<(u32, i64, usize), String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let [l, i, b] = parts[..] else {
        return Err("expected three comma-separated values l,i,b".into());
    };
    Ok((
        l.parse().map_err(|e| format!("l: {e}"))?,
        i.parse().map_err(|e| format!("i: {e}"))?,
        b.parse().map_err(|e| format!("b: {e}"))?,
    ))
}
