use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use vqss::circuit_text::parse_circuit;
use vqss::config::{ExperimentConfig, Settings};
use vqss::experiments::{q2c_experiment, run_trial, soundness_sweep, Q2cReport, Report, TrialSpec};
use vqss::report::{render, transcript_jsonl, write_atomic};
use vqss::xval::{cross_validate, XvalReport};
use vqss_core::engine::Transcript;
use vqss_core::rng::trial_rng;
use vqss_core::rs::{rs_decode, rs_share, rs_syndrome, DecodeStatus, RsCode};
use vqss_core::{Fe, FieldParams, SupportSet};

#[derive(Parser)]
#[command(name = "vqss", version, about = "Verifiable quantum secret sharing experiments")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Reed-Solomon sharing, decoding and syndromes.
    Codec {
        #[command(subcommand)]
        op: CodecOp,
    },
    /// One protocol run; prints the verdict and writes the transcript.
    Run(ExpArgs),
    /// Monte Carlo grid over k and adversaries (or `--experiment q2c`).
    Sweep(ExpArgs),
    /// Stabilizer versus statevector cross-validation.
    Xval {
        #[arg(long, default_value_t = 100)]
        count: u64,
        #[arg(long, default_value_t = 100_000)]
        shots: u64,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Renders a JSON report as a text table.
    Report {
        input: PathBuf,
    },
}

#[derive(Args, Clone)]
struct CodeArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    delta: usize,
    #[arg(long)]
    p: u64,
}

impl CodeArgs {
    fn code(&self) -> Result<RsCode> {
        Ok(RsCode::new(FieldParams::new(self.p, self.n)?, self.delta, false)?)
    }
}

#[derive(Args, Clone)]
struct WordArgs {
    /// Comma-separated symbols.
    #[arg(long, conflicts_with = "file")]
    word: Option<String>,
    /// File holding the comma-separated word.
    #[arg(long)]
    file: Option<PathBuf>,
}

impl WordArgs {
    fn read(&self, code: &RsCode) -> Result<Vec<Fe>> {
        let text = match (&self.word, &self.file) {
            (Some(w), _) => w.clone(),
            (None, Some(f)) => std::fs::read_to_string(f).with_context(|| format!("reading {}", f.display()))?,
            (None, None) => bail!("give --word or --file"),
        };
        let word = parse_list::<i64>(&text)?
            .into_iter()
            .map(|x| code.params.elem(x))
            .collect::<Vec<_>>();
        if word.len() != code.n() {
            bail!("word has {} symbols, code length is {}", word.len(), code.n());
        }
        Ok(word)
    }
}

#[derive(Subcommand)]
enum CodecOp {
    /// Random codeword whose polynomial has constant term `secret`.
    Share {
        #[command(flatten)]
        code: CodeArgs,
        #[arg(long)]
        secret: i64,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Nearest codeword within the correction radius.
    Decode {
        #[command(flatten)]
        code: CodeArgs,
        #[command(flatten)]
        word: WordArgs,
        /// Comma-separated erased positions (1-based).
        #[arg(long)]
        erasures: Option<String>,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Parity-check syndrome of a word.
    Syndrome {
        #[command(flatten)]
        code: CodeArgs,
        #[command(flatten)]
        word: WordArgs,
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

/// Experiment flags; each overrides the key of the same name in `--config`.
#[derive(Args, Clone, Default)]
struct ExpArgs {
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    experiment: Option<String>,
    #[arg(long)]
    protocol: Option<String>,
    #[arg(long)]
    n: Option<String>,
    #[arg(long)]
    t: Option<String>,
    #[arg(long)]
    p: Option<String>,
    #[arg(long)]
    k: Option<String>,
    #[arg(long)]
    delta: Option<String>,
    #[arg(long)]
    adversary: Option<String>,
    #[arg(long)]
    seed: Option<String>,
    #[arg(long)]
    trials: Option<String>,
    #[arg(long)]
    backend: Option<String>,
    #[arg(long)]
    input: Option<String>,
    #[arg(long)]
    coins: Option<String>,
    #[arg(long)]
    circuit: Option<String>,
    #[arg(long)]
    output: Option<String>,
    #[arg(long)]
    transcript: Option<String>,
}

impl ExpArgs {
    fn config(&self) -> Result<ExperimentConfig> {
        let mut s = match &self.config {
            Some(p) => Settings::load(p)?,
            None => Settings::default(),
        };
        let flags = [
            ("experiment", &self.experiment),
            ("protocol", &self.protocol),
            ("n", &self.n),
            ("t", &self.t),
            ("p", &self.p),
            ("k", &self.k),
            ("delta", &self.delta),
            ("adversary", &self.adversary),
            ("seed", &self.seed),
            ("trials", &self.trials),
            ("backend", &self.backend),
            ("input", &self.input),
            ("coins", &self.coins),
            ("circuit", &self.circuit),
            ("output", &self.output),
            ("transcript", &self.transcript),
        ];
        for (k, v) in flags {
            if let Some(v) = v {
                s.set(k, v.clone());
            }
        }
        ExperimentConfig::from_settings(&s)
    }
}

fn parse_list<T: std::str::FromStr>(s: &str) -> Result<Vec<T>>
where
    T::Err: std::error::Error + Send + Sync + 'static,
{
    s.split(',')
        .map(|x| x.trim().parse::<T>().with_context(|| format!("bad entry `{x}`")))
        .collect()
}

fn write_json<T: Serialize>(value: &T, output: Option<&PathBuf>) -> Result<()> {
    match output {
        Some(p) => write_atomic(p, serde_json::to_string_pretty(value)?.as_bytes()),
        None => Ok(()),
    }
}

fn join<T: std::fmt::Display>(xs: &[T]) -> String {
    xs.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

fn values(w: &[Fe]) -> Vec<u32> {
    w.iter().map(|x| x.value()).collect()
}

fn codec(op: CodecOp) -> Result<()> {
    match op {
        CodecOp::Share { code, secret, seed, output } => {
            let c = code.code()?;
            let (w, q) = rs_share(&c, c.params.elem(secret), &mut trial_rng(seed, 0))?;
            #[derive(Serialize)]
            struct Out {
                codeword: Vec<u32>,
                polynomial: Vec<u32>,
            }
            let out = Out {
                codeword: values(&w),
                polynomial: values(q.coeffs()),
            };
            println!("codeword {}", join(&out.codeword));
            println!("polynomial {}", join(&out.polynomial));
            write_json(&out, output.as_ref())
        }
        CodecOp::Decode { code, word, erasures, output } => {
            let c = code.code()?;
            let w = word.read(&c)?;
            let er: SupportSet = match erasures {
                Some(e) => parse_list::<usize>(&e)?
                    .into_iter()
                    .map(|i| match i {
                        1.. if i <= c.n() => Ok(i - 1),
                        _ => Err(anyhow::anyhow!("erasure position {i} outside 1..={}", c.n())),
                    })
                    .collect::<Result<_>>()?,
                None => SupportSet::EMPTY,
            };
            let r = rs_decode(&c, &w, er)?;
            #[derive(Serialize)]
            struct Out {
                status: &'static str,
                secret: Option<u32>,
                codeword: Option<Vec<u32>>,
                /// 1-based, matching the evaluation points.
                error_positions: Vec<usize>,
            }
            let out = Out {
                status: match r.status {
                    DecodeStatus::Decoded => "decoded",
                    DecodeStatus::Detected => "detected",
                },
                secret: r.secret.map(|s| s.value()),
                codeword: r.codeword.as_deref().map(values),
                error_positions: r.error_support.to_vec().iter().map(|i| i + 1).collect(),
            };
            match out.secret {
                Some(s) if out.error_positions.is_empty() => println!("secret {s}, no errors"),
                Some(s) => println!("secret {s}, error at position {}", join(&out.error_positions)),
                None => println!("detected: no codeword within the correction radius"),
            }
            write_json(&out, output.as_ref())
        }
        CodecOp::Syndrome { code, word, output } => {
            let c = code.code()?;
            let w = word.read(&c)?;
            let syn = values(&rs_syndrome(&c, &w));
            println!("syndrome {}", join(&syn));
            write_json(&syn, output.as_ref())
        }
    }
}

fn run(args: ExpArgs) -> Result<()> {
    let cfg = args.config()?;
    let circuit = load_circuit(&cfg)?;
    let spec = TrialSpec {
        cfg: &cfg,
        k: cfg.k[0],
        adversary: &cfg.adversary[0],
        circuit: circuit.as_ref(),
    };
    let mut log = Transcript::new();
    let out = run_trial(spec, 0, &mut log)?;
    let path = cfg
        .transcript
        .clone()
        .unwrap_or_else(|| std::env::temp_dir().join(format!("vqss-{}-seed{}.jsonl", cfg.protocol, cfg.seed)));
    write_atomic(&path, transcript_jsonl(&log)?.as_bytes())?;
    println!("{}", if out.accepted { "Accepted" } else { "Rejected" });
    println!("B = {:?}", out.accused);
    println!("cheaters = {:?}", out.cheaters);
    if let Some(e) = out.exact {
        println!("matches ideal: {e}");
    }
    if out.bad {
        println!("accepted data outside the verified space");
    }
    println!("transcript: {} ({} events)", path.display(), out.events);
    if let Some(o) = &cfg.output {
        write_json(&out, Some(o))?;
    }
    Ok(())
}

fn load_circuit(cfg: &ExperimentConfig) -> Result<Option<vqss_core::circuit::Circuit>> {
    cfg.circuit
        .as_ref()
        .map(|p| parse_circuit(&std::fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?))
        .transpose()
}

fn sweep(args: ExpArgs) -> Result<()> {
    let cfg = args.config()?;
    if cfg.experiment == "q2c" {
        let mut reports: Vec<Q2cReport> = Vec::new();
        for &k in &cfg.k {
            for a in &cfg.adversary {
                let r = q2c_experiment(&cfg, k, a, true)?;
                println!(
                    "k={k} adversary={a}: chi2={:.2} dof={} p={:.4} {} | control p={:.2e} {}",
                    r.test.statistic,
                    r.test.dof,
                    r.test.p_value,
                    if r.passes { "equivalent" } else { "DIFFERENT" },
                    r.control.map_or(f64::NAN, |c| c.p_value),
                    if r.control_passes == Some(false) { "detected" } else { "NOT detected" },
                );
                reports.push(r);
            }
        }
        if let Some(o) = &cfg.output {
            write_json(&reports, Some(o))?;
        }
        return Ok(());
    }
    let circuit = load_circuit(&cfg)?;
    let report = soundness_sweep(&cfg, circuit.as_ref())?;
    print!("{}", render(&report));
    if let Some(o) = &cfg.output {
        write_json(&report, Some(o))?;
    }
    Ok(())
}

fn report(input: PathBuf) -> Result<()> {
    let text = std::fs::read_to_string(&input).with_context(|| format!("reading {}", input.display()))?;
    if let Ok(r) = serde_json::from_str::<Report>(&text) {
        print!("{}", render(&r));
    } else if let Ok(rs) = serde_json::from_str::<Vec<Q2cReport>>(&text) {
        for r in rs {
            println!(
                "k={} adversary={} trials={}: chi2={:.2} dof={} p={:.4} pass={} control_pass={:?}",
                r.k, r.adversary, r.trials, r.test.statistic, r.test.dof, r.test.p_value, r.passes, r.control_passes
            );
        }
    } else if let Ok(x) = serde_json::from_str::<XvalReport>(&text) {
        println!(
            "{} circuits, {} shots: min fidelity {:.12}, max TV {:.4}, passed={}",
            x.cases.len(),
            x.shots,
            x.min_fidelity,
            x.max_tv,
            x.passed
        );
    } else {
        bail!("{} is not a sweep, q2c or xval report", input.display());
    }
    Ok(())
}

fn main() -> std::process::ExitCode {
    match dispatch(Cli::parse().cmd) {
        Ok(()) => std::process::ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            std::process::ExitCode::FAILURE
        }
    }
}

fn dispatch(cmd: Cmd) -> Result<()> {
    match cmd {
        Cmd::Codec { op } => codec(op),
        Cmd::Run(a) => run(a),
        Cmd::Sweep(a) => sweep(a),
        Cmd::Xval { count, shots, seed, output } => {
            let r = cross_validate(count, shots, seed)?;
            println!(
                "{count} circuits: min fidelity {:.12}, max TV {:.4} -> {}",
                r.min_fidelity,
                r.max_tv,
                if r.passed { "agree" } else { "DISAGREE" }
            );
            write_json(&r, output.as_ref())?;
            if !r.passed {
                bail!("backends disagree");
            }
            Ok(())
        }
        Cmd::Report { input } => report(input),
    }
}
