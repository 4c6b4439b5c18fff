//! Command-line front end.

pub mod run;
pub mod scenarios;
pub mod spec;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::Value;

use crate::error::Error;
use crate::resolutions::Engine;
use run::{required_window, run_scenario, Report};
use spec::{parse_scenario, validate, Options, ScenarioSpec, Settings};

#[derive(Parser, Debug)]
#[command(name = "hypertate", version, about = "Exact Tate hypercohomology and class-formation checks")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Run a scenario file.
    Run {
        file: PathBuf,
        #[command(flatten)]
        flags: Flags,
    },
    /// Run a bundled scenario (or `all`).
    Demo {
        name: String,
        #[command(flatten)]
        flags: Flags,
    },
    /// List bundled scenarios.
    List,
    /// Parse and build a scenario without computing cohomology.
    Validate {
        file: PathBuf,
        #[command(flatten)]
        flags: Flags,
    },
}

#[derive(clap::Args, Debug, Clone, Default)]
pub struct Flags {
    /// Degree range `qmin..qmax`.
    #[arg(long, value_parser = parse_range, allow_hyphen_values = true)]
    pub range: Option<(i64, i64)>,
    #[arg(long, value_enum)]
    pub engine: Option<EngineArg>,
    /// Largest resolution window to build.
    #[arg(long)]
    pub window: Option<usize>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Largest group order accepted.
    #[arg(long)]
    pub max_order: Option<usize>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum EngineArg {
    Bar,
    Periodic,
    Computed,
    Auto,
}

impl From<EngineArg> for Engine {
    fn from(e: EngineArg) -> Engine {
        match e {
            EngineArg::Bar => Engine::Bar,
            EngineArg::Periodic => Engine::Periodic,
            EngineArg::Computed => Engine::Computed,
            EngineArg::Auto => Engine::Auto,
        }
    }
}

#[derive(ValueEnum, Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Format {
    #[default]
    Text,
    Json,
}

pub fn parse_range(s: &str) -> Result<(i64, i64), String> {
    let (a, b) = s.split_once("..").ok_or_else(|| format!("expected qmin..qmax, got `{s}`"))?;
    let lo: i64 = a.trim().parse().map_err(|e| format!("bad qmin `{a}`: {e}"))?;
    let hi: i64 = b.trim().parse().map_err(|e| format!("bad qmax `{b}`: {e}"))?;
    if lo > hi {
        return Err(format!("empty range {lo}..{hi}"));
    }
    Ok((lo, hi))
}

impl Flags {
    fn overrides(&self) -> Options {
        Options {
            engine: self.engine.map(Engine::from),
            window: self.window,
            range: self.range,
            max_order: self.max_order,
            bar_cap: None,
        }
    }
}

/// Process exit status for an error: 1 for bad input, 2 for failures while computing.
pub fn exit_status(e: &Error) -> u8 {
    match e {
        Error::MalformedTable(_)
        | Error::NonAssociative(..)
        | Error::NoIdentity
        | Error::MissingInverse(_)
        | Error::InvalidModule(_)
        | Error::InvalidComplex(_)
        | Error::NotPrime(_)
        | Error::NotCyclic(_)
        | Error::GroupMismatch(_)
        | Error::InvalidArgument(_) => 1,
        _ => 2,
    }
}

fn fail(e: &Error) -> ExitCode {
    eprintln!("error: {e}");
    ExitCode::from(exit_status(e))
}

fn load(file: &PathBuf) -> Result<ScenarioSpec, Error> {
    let text = std::fs::read_to_string(file)
        .map_err(|e| Error::InvalidArgument(format!("cannot read {}: {e}", file.display())))?;
    parse_scenario(&text)
}

fn emit(report: &Report, format: Format) {
    match format {
        Format::Json => println!("{}", serde_json::to_string_pretty(&report.body).expect("reports serialize")),
        Format::Text => print!("{}", render_text(report)),
    }
}

pub fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match cli.command {
        Command::List => {
            for d in scenarios::DEMOS {
                println!("{:<20} {}\n{:<20} expected: {}", d.name, d.summary, "", d.verdict);
            }
            ExitCode::SUCCESS
        }
        Command::Run { file, flags } => {
            let spec = match load(&file) {
                Ok(s) => s,
                Err(e) => return fail(&e),
            };
            let settings = Settings::resolve(&spec.options, &flags.overrides());
            match run_scenario(&spec, &settings) {
                Ok(r) => {
                    emit(&r, flags.format);
                    ExitCode::SUCCESS
                }
                Err(e) => fail(&e),
            }
        }
        Command::Demo { name, flags } => {
            let demos: Vec<_> = if name == "all" {
                scenarios::DEMOS.iter().collect()
            } else {
                match scenarios::find(&name) {
                    Some(d) => vec![d],
                    None => return fail(&Error::InvalidArgument(format!("no bundled scenario named `{name}`"))),
                }
            };
            let mut mismatched = false;
            for d in demos {
                let spec = d.spec();
                let settings = Settings::resolve(&spec.options, &flags.overrides());
                let r = match run_scenario(&spec, &settings) {
                    Ok(r) => r,
                    Err(e) => return fail(&e),
                };
                emit(&r, flags.format);
                for m in d.check(&r.body) {
                    eprintln!("unexpected verdict in {}: {m}", d.name);
                    mismatched = true;
                }
            }
            if mismatched {
                ExitCode::from(2)
            } else {
                ExitCode::SUCCESS
            }
        }
        Command::Validate { file, flags } => {
            let spec = match load(&file) {
                Ok(s) => s,
                Err(e) => return fail(&e),
            };
            let settings = Settings::resolve(&spec.options, &flags.overrides());
            match validate(&spec, &settings) {
                Ok((g, c)) => {
                    let need = required_window(&spec, c.effective_support(), settings.range);
                    let ok = need <= settings.window;
                    println!(
                        "ok: |G| = {}, coefficients in degrees {:?}, window {need} needed ({} allowed)",
                        g.order(),
                        c.effective_support(),
                        settings.window
                    );
                    if ok {
                        ExitCode::SUCCESS
                    } else {
                        let w = settings.window as i64;
                        fail(&Error::WindowTooSmall { need_lo: -(need as i64), need_hi: need as i64, have_lo: -w, have_hi: w })
                    }
                }
                Err(e) => fail(&e),
            }
        }
    }
}

fn s(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => "-".into(),
        v => v.to_string(),
    }
}

/// Human-readable rendering of a report, followed by timings.
pub fn render_text(report: &Report) -> String {
    use std::fmt::Write;
    let b = &report.body;
    let mut o = String::new();
    let _ = writeln!(o, "== {} ==", s(&b["scenario"]));
    let g = &b["group"];
    let _ = writeln!(
        o,
        "group: order {}, abelian {}, cyclic {}, G^ab = {}",
        g["order"], g["abelian"], g["cyclic"], s(&g["abelianization"])
    );
    let st = &b["settings"];
    let _ = writeln!(o, "engine {}, window {}, range {}", s(&st["engine"]), st["window"], st["range"]);
    let terms: Vec<String> = b["coefficients"]["terms"]
        .as_array()
        .into_iter()
        .flatten()
        .map(|t| format!("C^{} = {}", t["degree"], s(&t["module"])))
        .collect();
    let _ = writeln!(o, "coefficients: {}", terms.join(", "));
    for a in b["analyses"].as_array().into_iter().flatten() {
        let _ = writeln!(o, "-- {}", s(&a["kind"]));
        match a["kind"].as_str() {
            Some("tate") => {
                for d in a["degrees"].as_array().into_iter().flatten() {
                    let _ = writeln!(o, "  H^{:<3} = {}", d["q"], s(&d["group"]));
                }
                if let Some(h) = a.get("herbrand") {
                    let _ = writeln!(o, "  herbrand: |H^0| = {}, |H^1| = {}", s(&h["h0"]), s(&h["h1"]));
                }
            }
            Some("formation") => {
                let _ = writeln!(
                    o,
                    "  verdict {} (C1 {}, C2 {}, C3 {})",
                    s(&a["verdict"]),
                    s(&a["c1"]),
                    s(&a["c2"]),
                    s(&a["c3"]["verdict"])
                );
                if !a["first-obstruction"].is_null() {
                    let ob = &a["first-obstruction"];
                    let _ = writeln!(o, "  first obstruction: {} at subgroup {}", s(&ob["axiom"]), ob["subgroup"]);
                }
                for sg in a["subgroups"].as_array().into_iter().flatten() {
                    let _ = writeln!(
                        o,
                        "  H = {:<20} H^1 {:<10} H^2 {:<10} C1 {} C2 {}",
                        sg["elements"].to_string(),
                        sg["h1"].to_string(),
                        sg["h2"].to_string(),
                        sg["c1"],
                        sg["c2"]
                    );
                }
                if let Some(r) = a.get("reciprocity") {
                    let _ = writeln!(
                        o,
                        "  reciprocity {} -> {}: isomorphism {}",
                        s(&r["source"]),
                        s(&r["target"]),
                        r["isomorphism"]
                    );
                }
            }
            Some("tate-nakayama") => {
                let _ = writeln!(
                    o,
                    "  class {} ({}), hypotheses (i) {} (ii) {}, conclusion {}",
                    a["class"]["coords"],
                    s(&a["class-source"]),
                    a["hypothesis-i"],
                    a["hypothesis-ii"],
                    a["conclusion"]
                );
                for d in a["degrees"].as_array().into_iter().flatten() {
                    let _ = writeln!(o, "  cup in degree {:<3} isomorphism {}", d["q"], d["isomorphism"]);
                }
            }
            Some("cone-les") => {
                for r in a["runs"].as_array().into_iter().flatten() {
                    let _ = writeln!(o, "  m = {}: all degrees consistent {}", r["m"], r["all-pass"]);
                }
            }
            Some("norm-table") => {
                if let Some(why) = a.get("skipped") {
                    let _ = writeln!(o, "  skipped: {}", s(why));
                }
                for r in a["rows"].as_array().into_iter().flatten() {
                    let _ = writeln!(
                        o,
                        "  V = {:<20} quotient {:<10} (G/V)^ab {:<10} iso {}",
                        r["subgroup"].to_string(),
                        r["quotient"].to_string(),
                        r["target"].to_string(),
                        r["isomorphism"]
                    );
                }
            }
            Some("resolution") => {
                let _ = writeln!(
                    o,
                    "  engine {}, window {}, ranks {}, all checks {}",
                    s(&a["engine"]),
                    a["window"],
                    a["ranks"],
                    a["all-pass"]
                );
            }
            _ => {}
        }
    }
    let _ = writeln!(o, "timing:");
    for (name, d) in &report.timings {
        let _ = writeln!(o, "  {name:<14} {:.3} ms", d.as_secs_f64() * 1e3);
    }
    o
}
