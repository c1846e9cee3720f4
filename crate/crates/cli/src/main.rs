use std::io::Write;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use rhomboid_core::complexity::{discrepancy_report, generated_row, reference_row};
use rhomboid_core::{
    build_sr, check_exact, check_fingerprint, closed_form, induced_subgraph, recurrence_table, to_dot, Config,
    Generator, LabeledDigraph, PrimeField, ProductStyle, SplitRounding, SubExprKey, Terminal, MERSENNE_61,
};

const SCHEMA_VERSION: u32 = 1;

const TERMINAL_HELP: &str = "Terminals are written as a kind letter followed by an index: \
b<i> for basic vertex i (1..=n), u<i> for upper vertex i and l<i> for lower vertex i (1..n). \
A pair is given as SRC,DST, e.g. `--sub b1,u3`.";

#[derive(Parser)]
#[command(name = "rhomboid", version, about = "Factored path expressions for square rhomboids", after_help = TERMINAL_HELP)]
struct Cli {
    #[arg(long, value_enum, default_value_t = Output::Text, global = true)]
    output: Output,
    /// Split vertex rounding where the middle is not an integer
    #[arg(long, value_enum, default_value_t = Rounding::Ceil, global = true)]
    rounding: Rounding,
    #[arg(long, default_value_t = 42, global = true)]
    seed: u64,
    #[arg(long, default_value_t = 10, global = true)]
    trials: u32,
    #[arg(long, default_value_t = MERSENNE_61, global = true)]
    prime: u64,
    /// Cap on expanded monomials for exact checks
    #[arg(long, default_value_t = 1_000_000, global = true)]
    limit: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Output {
    Text,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum Rounding {
    Ceil,
    Floor,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Exact,
    Fingerprint,
}

#[derive(Subcommand)]
enum Command {
    /// Print the expression for SR(N) or one of its subgraphs
    #[command(after_help = TERMINAL_HELP)]
    Gen {
        n: u32,
        #[arg(long)]
        count_only: bool,
        #[arg(long, value_name = "SRC,DST", value_parser = parse_pair)]
        sub: Option<(Terminal, Terminal)>,
        /// Write products without `*`
        #[arg(long)]
        juxtapose: bool,
    },
    /// Check the expression for SR(N) against the graph
    Verify {
        n: u32,
        #[arg(long, value_enum, default_value_t = Mode::Exact)]
        mode: Mode,
    },
    /// Literal counts next to the published reference figures
    Table {
        #[arg(long, default_value_t = 4)]
        from: u32,
        #[arg(long, default_value_t = 10)]
        to: u32,
    },
    /// Compare closed forms, recurrences and generation at n = 2^K
    ClosedForm {
        #[arg(long, value_parser = clap::value_parser!(u32).range(..=20))]
        k: u32,
    },
    /// Emit SR(N) or a subgraph in DOT format
    #[command(after_help = TERMINAL_HELP)]
    Dot {
        n: u32,
        #[arg(long, value_name = "SRC,DST", value_parser = parse_pair)]
        sub: Option<(Terminal, Terminal)>,
    },
    /// Compare published base values and relations with derived ones
    Report,
}

fn parse_pair(s: &str) -> Result<(Terminal, Terminal), String> {
    let (src, dst) = s.split_once(',').ok_or("expected SRC,DST")?;
    let src = src.trim().parse().map_err(|e| format!("{e}"))?;
    let dst = dst.trim().parse().map_err(|e| format!("{e}"))?;
    Ok((src, dst))
}

/// Outcome of a command that ran to completion.
enum Status {
    Ok,
    Mismatch,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(Status::Ok) => ExitCode::SUCCESS,
        Ok(Status::Mismatch) => ExitCode::from(1),
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(2)
        }
    }
}

fn config(cli: &Cli) -> Config {
    let rounding = match cli.rounding {
        Rounding::Ceil => SplitRounding::Ceil,
        Rounding::Floor => SplitRounding::Floor,
    };
    Config {
        rounding,
        ..Config::default()
    }
}

/// Writes the text rendering or the versioned JSON document to stdout.
fn emit(cli: &Cli, text: impl FnOnce() -> String, value: Value) -> Result<()> {
    let rendered = match cli.output {
        Output::Text => text(),
        Output::Json => {
            let mut value = value;
            value["schema_version"] = json!(SCHEMA_VERSION);
            serde_json::to_string_pretty(&value)? + "\n"
        }
    };
    std::io::stdout()
        .lock()
        .write_all(rendered.as_bytes())
        .context("writing to stdout")
}

fn graph(n: u32, sub: Option<(Terminal, Terminal)>) -> Result<LabeledDigraph> {
    let g = build_sr(n)?;
    match sub {
        None => Ok(g),
        Some((src, dst)) => {
            for t in [src, dst] {
                if !t.in_sr(n) {
                    bail!("{t} is outside SR({n})");
                }
            }
            Ok(induced_subgraph(&g, src, dst)?)
        }
    }
}

fn run(cli: &Cli) -> Result<Status> {
    match &cli.command {
        Command::Gen {
            n,
            count_only,
            sub,
            juxtapose,
        } => cmd_gen(cli, *n, *count_only, *sub, *juxtapose),
        Command::Verify { n, mode } => cmd_verify(cli, *n, *mode),
        Command::Table { from, to } => cmd_table(cli, *from, *to),
        Command::ClosedForm { k } => cmd_closed_form(cli, *k),
        Command::Dot { n, sub } => cmd_dot(cli, *n, *sub),
        Command::Report => cmd_report(cli),
    }
}

fn cmd_gen(cli: &Cli, n: u32, count_only: bool, sub: Option<(Terminal, Terminal)>, juxtapose: bool) -> Result<Status> {
    let mut generator = Generator::new(n, config(cli))?;
    let (src, dst) = sub.unwrap_or((Terminal::basic(1), Terminal::basic(n)));
    let e = generator.expression(SubExprKey::new(src, dst))?;
    let count = e.literal_count();
    let style = if juxtapose {
        ProductStyle::Juxtapose
    } else {
        ProductStyle::Star
    };
    let text = e.to_text(style);
    let mut value = json!({ "n": n, "src": src.to_string(), "dst": dst.to_string(), "literals": count });
    if !count_only {
        value["expression"] = json!(text);
        value["ast"] = serde_json::to_value(&e)?;
    }
    emit(
        cli,
        || {
            if count_only {
                format!("{count}\n")
            } else {
                format!("{text}\nliterals {count}\n")
            }
        },
        value,
    )?;
    Ok(Status::Ok)
}

fn cmd_verify(cli: &Cli, n: u32, mode: Mode) -> Result<Status> {
    let field = PrimeField::new(cli.prime)?;
    let g = build_sr(n)?;
    let e = Generator::new(n, config(cli))?.whole();
    let report = match mode {
        Mode::Exact => check_exact(&e, &g, cli.limit)?,
        Mode::Fingerprint => check_fingerprint(&e, &g, cli.trials, cli.seed, field)?,
    };
    let value = serde_json::to_value(&report)?;
    emit(
        cli,
        || {
            let verdict = if report.passed() { "pass" } else { "fail" };
            let mut out = format!("{verdict} n={n} mode={}\n", value["mode"].as_str().unwrap_or("?"));
            if let Some(w) = &report.witness {
                out.push_str(&format!("witness {}\n", serde_json::to_string(w).unwrap_or_default()));
            }
            out
        },
        value.clone(),
    )?;
    Ok(if report.passed() { Status::Ok } else { Status::Mismatch })
}

fn cmd_table(cli: &Cli, from: u32, to: u32) -> Result<Status> {
    if from < 4 || to > 10 || from > to {
        bail!("table range must satisfy 4 <= from <= to <= 10, got {from}..{to}");
    }
    let recurrence = recurrence_table(to)?;
    let mut rows = Vec::new();
    let mut consistent = true;
    for n in from..=to {
        let reference = reference_row(n).context("no reference row")?;
        let rec = recurrence[n as usize - 1].t;
        let generated = generated_row(n, config(cli))?.t;
        let ok = rec == generated && generated == reference.one_vda;
        consistent &= ok;
        rows.push(json!({
            "n": n,
            "fda": reference.fda,
            "cda": reference.cda,
            "ifda": reference.ifda,
            "one_vda_recurrence": rec,
            "one_vda_generated": generated,
            "matches_reference": ok,
        }));
    }
    emit(
        cli,
        || {
            let mut out = format!(
                "{:>3} {:>5} {:>5} {:>5} {:>10} {:>10}\n",
                "n", "FDA", "CDA", "IFDA", "1-VDA rec", "1-VDA gen"
            );
            for r in &rows {
                out.push_str(&format!(
                    "{:>3} {:>5} {:>5} {:>5} {:>10} {:>10}\n",
                    r["n"].as_u64().unwrap_or_default(),
                    r["fda"].as_u64().unwrap_or_default(),
                    r["cda"].as_u64().unwrap_or_default(),
                    r["ifda"].as_u64().unwrap_or_default(),
                    r["one_vda_recurrence"].as_u64().unwrap_or_default(),
                    r["one_vda_generated"].as_u64().unwrap_or_default()
                ));
            }
            out
        },
        json!({ "rows": rows, "consistent": consistent }),
    )?;
    Ok(if consistent { Status::Ok } else { Status::Mismatch })
}

fn cmd_closed_form(cli: &Cli, k: u32) -> Result<Status> {
    if k < 2 {
        bail!("K must be at least 2, got {k}");
    }
    let n = 1u32 << k;
    let formula = closed_form(u64::from(n))?;
    let rec = recurrence_table(n)?[n as usize - 1];
    let generated = generated_row(n, config(cli))?;
    let sources = [
        (
            "closed_form",
            Some(formula.t),
            Some(formula.t_hat),
            Some(formula.t_hathat),
        ),
        ("recurrence", Some(rec.t), Some(rec.t_hat), rec.t_hathat()),
        (
            "generation",
            Some(generated.t),
            Some(generated.t_hat),
            generated.t_hathat(),
        ),
    ];
    let agree = sources
        .iter()
        .all(|s| s.1 == sources[0].1 && s.2 == sources[0].2 && s.3 == sources[0].3);
    let value = json!({
        "k": k,
        "n": n,
        "sources": sources.iter().map(|(name, t, th, thh)| json!({
            "source": name, "t": t, "t_hat": th, "t_hathat": thh,
        })).collect::<Vec<_>>(),
        "verdict": if agree { "match" } else { "mismatch" },
    });
    emit(
        cli,
        || {
            let show = |v: Option<u64>| v.map_or("-".to_string(), |v| v.to_string());
            let mut out = format!(
                "n = {n}\n{:<12} {:>14} {:>14} {:>14}\n",
                "source", "T", "T_hat", "T_hathat"
            );
            for (name, t, th, thh) in &sources {
                out.push_str(&format!(
                    "{name:<12} {:>14} {:>14} {:>14}\n",
                    show(*t),
                    show(*th),
                    show(*thh)
                ));
            }
            out.push_str(if agree { "match\n" } else { "mismatch\n" });
            out
        },
        value,
    )?;
    Ok(if agree { Status::Ok } else { Status::Mismatch })
}

fn cmd_dot(cli: &Cli, n: u32, sub: Option<(Terminal, Terminal)>) -> Result<Status> {
    let g = graph(n, sub)?;
    let dot = to_dot(&g);
    let value = json!({
        "n": n,
        "vertices": g.vertices().len(),
        "edges": g.edges().len(),
        "dot": dot,
    });
    emit(cli, || dot.clone(), value)?;
    Ok(Status::Ok)
}

fn cmd_report(cli: &Cli) -> Result<Status> {
    let items = discrepancy_report()?;
    emit(
        cli,
        || {
            let mut out = String::new();
            for d in &items {
                let flag = if d.consistent { "ok  " } else { "FLAG" };
                out.push_str(&format!(
                    "{flag} {}: printed {}, derived {}\n",
                    d.item, d.printed, d.derived
                ));
            }
            out
        },
        json!({ "items": serde_json::to_value(&items)? }),
    )?;
    Ok(Status::Ok)
}
