use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use stemp::batch::{load_dir, render_table, run_batch, BatchOptions, Validity};
use stemp::clique::{CliqueBudget, FoldPrediction};
use stemp::eval::{score_prediction, summarize_report, MetricKind, ReferenceStructure, SourceFormat};
use stemp::exec::Execution;
use stemp::io::{ct, dotbracket, fasta, graphdump, report, Format};
use stemp::pipeline::{predict, PredictOptions, PredictionReport};
use stemp::profiles::{builtin_names, resolve, ProfileConfig};
use stemp::score::Interval;
use stemp::seq::Sequence;

#[derive(Parser)]
#[command(name = "stemp", version, about = "Stem-graph secondary structure prediction")]
struct Cli {
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Predict structures for every record of a FASTA file.
    Predict(PredictArgs),
    /// Score predictions against a reference structure.
    Evaluate(EvaluateArgs),
    /// Predict and score every FASTA/CT pair in a directory.
    Batch(BatchArgs),
    /// List the built-in profiles.
    Profiles,
}

#[derive(Args)]
struct ProfileArgs {
    /// Built-in name, a name under the profile directory, or a .json path.
    #[arg(long)]
    profile: Option<String>,
    #[arg(long, env = "STEMP_PROFILE_DIR", hide_env_values = true)]
    profile_dir: Option<PathBuf>,
    /// Minimum stem length.
    #[arg(long = "min-len")]
    min_len: Option<u32>,
    /// Stem-loop score bounds, e.g. "[2, 20]" or "(3, 4.7]".
    #[arg(long)]
    sl: Option<Interval>,
    /// Stem span bounds, e.g. "[12, 18]".
    #[arg(long)]
    span: Option<Interval>,
    /// Allow G-U pairs.
    #[arg(long)]
    wobble: bool,
    /// Allow U-U pairs.
    #[arg(long)]
    uu: bool,
    /// Use every helix candidate as a vertex instead of assembling domains.
    #[arg(long)]
    no_gsl: bool,
}

impl ProfileArgs {
    fn load(&self) -> Result<ProfileConfig> {
        self.load_optional()?.context("--profile is required")
    }

    fn load_optional(&self) -> Result<Option<ProfileConfig>> {
        let Some(name) = &self.profile else { return Ok(None) };
        let mut cfg = resolve(name, self.profile_dir.as_deref())?;
        if let Some(l) = self.min_len {
            cfg.min_stem_len = l;
        }
        if let Some(sl) = &self.sl {
            cfg.sl_bounds = Some(*sl);
        }
        if let Some(d) = &self.span {
            cfg.d_bounds = Some(*d);
        }
        cfg.pairing.wobble |= self.wobble;
        cfg.pairing.uu |= self.uu;
        if self.no_gsl {
            cfg.use_gsl = false;
        }
        cfg.validate()?;
        Ok(Some(cfg))
    }
}

#[derive(Args)]
struct RunArgs {
    /// Give up after this many maximal cliques.
    #[arg(long)]
    max_cliques: Option<usize>,
    /// Give up after this many seconds of clique search.
    #[arg(long)]
    time_limit: Option<f64>,
    /// Run on one thread.
    #[arg(long)]
    sequential: bool,
    /// Leave wall times out of the output.
    #[arg(long)]
    no_timing: bool,
}

impl RunArgs {
    fn exec(&self) -> Execution {
        if self.sequential {
            Execution::Sequential
        } else {
            Execution::Parallel
        }
    }

    fn options(&self) -> PredictOptions {
        PredictOptions {
            budget: CliqueBudget {
                max_cliques: self.max_cliques,
                time_limit: self.time_limit.map(Duration::from_secs_f64),
            },
            exec: self.exec(),
            timing: !self.no_timing,
        }
    }
}

#[derive(Args)]
struct PredictArgs {
    input: PathBuf,
    #[command(flatten)]
    profile: ProfileArgs,
    #[command(flatten)]
    run: RunArgs,
    /// Keep only the first K predictions in the report.
    #[arg(long)]
    top_k: Option<usize>,
    /// Print every rank-1 structure, not just the first.
    #[arg(long)]
    all_ties: bool,
    /// Write the stem graph here (.json for JSON, anything else for text).
    #[arg(long)]
    dump_graph: Option<PathBuf>,
    /// Write the JSON report here.
    #[arg(short, long)]
    output: Option<PathBuf>,
    /// Print the JSON report on stdout instead of the structure summary.
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct EvaluateArgs {
    /// Reference structure (.ct or dot-bracket).
    #[arg(long)]
    reference: PathBuf,
    /// JSON report from `predict`.
    #[arg(long, conflicts_with_all = ["predicted", "sequence"])]
    report: Option<PathBuf>,
    /// A single predicted structure (.ct or dot-bracket) to score.
    #[arg(long, conflicts_with = "sequence")]
    predicted: Option<PathBuf>,
    /// FASTA to predict from; defaults to the sequence in the CT reference.
    #[arg(long)]
    sequence: Option<PathBuf>,
    #[command(flatten)]
    profile: ProfileArgs,
    #[command(flatten)]
    run: RunArgs,
    #[arg(long, default_value = "mcc")]
    metric: MetricKind,
    /// Drop reference pairs the pairing rule cannot form.
    #[arg(long)]
    ignore_noncanonical: bool,
    /// Per-prediction lines for the first K predictions.
    #[arg(long, default_value_t = 10)]
    top_k: usize,
    #[arg(short, long)]
    output: Option<PathBuf>,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct BatchArgs {
    dir: PathBuf,
    #[command(flatten)]
    profile: ProfileArgs,
    #[command(flatten)]
    run: RunArgs,
    #[arg(long, default_value = "mcc")]
    metric: MetricKind,
    #[arg(long)]
    ignore_noncanonical: bool,
    /// Skip sequences shorter than this.
    #[arg(long, default_value_t = 50)]
    min_length: u32,
    /// Skip sequences whose reference has fewer pairs than this.
    #[arg(long, default_value_t = 1)]
    min_ref_pairs: usize,
    /// Write the JSON result here.
    #[arg(short, long)]
    output: Option<PathBuf>,
    #[arg(long)]
    json: bool,
}

fn write_out(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

fn emit(text: &str) -> Result<()> {
    let mut out = std::io::stdout().lock();
    out.write_all(text.as_bytes())?;
    out.flush()?;
    Ok(())
}

fn structure_lines(seq: &Sequence, r: &PredictionReport, all_ties: bool) -> String {
    let mut out = format!(
        ">{} length={} vertices={} edges={} cliques={}\n{}\n",
        r.id, r.length, r.vertex_count, r.edge_count, r.clique_count, seq
    );
    let shown = if all_ties {
        r.top_ties()
    } else {
        &r.predictions[..r.predictions.len().min(1)]
    };
    for p in shown {
        let db = p
            .dot_bracket
            .as_deref()
            .unwrap_or("(needs more than four bracket tiers)");
        out.push_str(&format!(
            "{db} energy={} scr={} dr={} m={}\n",
            p.energy, p.scr, p.dr, p.multiplicity
        ));
    }
    if r.predictions.is_empty() {
        out.push_str(&format!("{} no stems\n", ".".repeat(seq.len() as usize)));
    }
    out
}

fn cmd_predict(a: &PredictArgs) -> Result<()> {
    let cfg = a.profile.load()?;
    let seqs = fasta::read_fasta(&a.input).with_context(|| format!("reading {}", a.input.display()))?;
    if seqs.is_empty() {
        bail!(stemp::Error::EmptySequence);
    }
    let opts = a.run.options();
    let mut reports = Vec::new();
    let mut text = String::new();
    let mut dumps = String::new();
    for seq in &seqs {
        let out = predict(seq, &cfg, &opts)?;
        let mut r = out.report;
        if let Some(k) = a.top_k {
            r.predictions.truncate(k);
        }
        text.push_str(&structure_lines(seq, &r, a.all_ties));
        if let Some(p) = &a.dump_graph {
            if Format::from_path(p) == Some(Format::Json) {
                dumps.push_str(&graphdump::dump_json(&out.graph)?);
            } else {
                if seqs.len() > 1 {
                    dumps.push_str(&format!("# {}\n", seq.id()));
                }
                dumps.push_str(&graphdump::dump_text(&out.graph));
            }
        }
        reports.push(r);
    }
    if let Some(p) = &a.dump_graph {
        write_out(p, &dumps)?;
    }
    let json = report::reports_to_json(&reports)?;
    if let Some(p) = &a.output {
        write_out(p, &json)?;
    }
    emit(if a.json { &json } else { &text })
}

fn read_structure(path: &Path, len_hint: Option<u32>) -> Result<(ReferenceStructure, Option<Sequence>)> {
    let id = path
        .file_stem()
        .and_then(|s| s.to_str())
        .unwrap_or("reference")
        .to_string();
    if Format::from_path(path) == Some(Format::Ct) {
        let rec = ct::read_ct(path).with_context(|| format!("reading {}", path.display()))?;
        let seq = rec.sequence().ok();
        return Ok((rec.reference, seq));
    }
    // Dot-bracket: optional ">id" line, optional sequence line, then the
    // structure line.
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let mut lines: Vec<&str> = text.lines().map(str::trim).filter(|l| !l.is_empty()).collect();
    let id = match lines.first().and_then(|l| l.strip_prefix('>')) {
        Some(h) => {
            let h = h.split_whitespace().next().unwrap_or(&id).to_string();
            lines.remove(0);
            h
        }
        None => id,
    };
    let (seq, structure) = match lines.as_slice() {
        [s] => (None, *s),
        [q, s] => (Some(Sequence::parse(q, id.clone())?), *s),
        _ => bail!(stemp::Error::Parse {
            line: 1,
            msg: format!("{}: expected [>id] [sequence] structure", path.display())
        }),
    };
    let structure = structure.split_whitespace().next().unwrap_or("");
    let len = structure.chars().count() as u32;
    if let Some(n) = len_hint.filter(|&n| n != len) {
        bail!(stemp::Error::LengthMismatch {
            sequence: n,
            reference: len
        });
    }
    let pairs = dotbracket::parse_dot_bracket(structure)?;
    Ok((ReferenceStructure::new(id, len, &pairs, SourceFormat::Dotbracket)?, seq))
}

fn cmd_evaluate(a: &EvaluateArgs) -> Result<()> {
    let (mut reference, ref_seq) = read_structure(&a.reference, None)?;
    let cfg = a.profile.load_optional()?;
    let sequence = match &a.sequence {
        Some(p) => Some(
            fasta::read_fasta(p)?
                .into_iter()
                .next()
                .ok_or(stemp::Error::EmptySequence)?,
        ),
        None => ref_seq,
    };
    if let Some(seq) = &sequence {
        if seq.len() != reference.length {
            bail!(stemp::Error::LengthMismatch {
                sequence: seq.len(),
                reference: reference.length
            });
        }
    }
    if a.ignore_noncanonical {
        let seq = sequence.as_ref().context("--ignore-noncanonical needs the sequence")?;
        let rule = cfg.as_ref().map(|c| c.pairing).unwrap_or_default();
        reference = reference.canonical_only(seq, rule)?;
    }

    let predictions: Vec<FoldPrediction> = if let Some(p) = &a.predicted {
        let (pred, _) = read_structure(p, Some(reference.length))?;
        vec![FoldPrediction {
            vertices: vec![],
            energy: pred.pairs.len(),
            pairs: pred.pairs,
            scr: 1,
            dr: 1,
            multiplicity: 1,
            dot_bracket: None,
        }]
    } else if let Some(p) = &a.report {
        let reports = report::read_reports(p)?;
        let r = match reports.iter().find(|r| r.id == reference.id) {
            Some(r) => r,
            None if reports.len() == 1 => &reports[0],
            None => bail!(stemp::Error::Parse {
                line: 0,
                msg: format!("no report for {}", reference.id)
            }),
        };
        if r.length != reference.length {
            bail!(stemp::Error::LengthMismatch {
                sequence: r.length,
                reference: reference.length
            });
        }
        r.predictions.clone()
    } else {
        let cfg = cfg.as_ref().context("--profile is required to predict")?;
        let seq = sequence
            .as_ref()
            .context("no sequence: pass --sequence or a CT reference")?;
        predict(seq, cfg, &a.run.options())?.report.predictions
    };

    let per: Vec<_> = predictions
        .iter()
        .take(a.top_k)
        .map(|p| score_prediction(&p.pairs, &reference).map(|m| (p, m)))
        .collect::<stemp::Result<_>>()?;
    let summary = summarize_report(&predictions, &reference, a.metric)?;

    let doc = serde_json::json!({
        "id": reference.id,
        "reference_pairs": reference.pairs.len(),
        "predictions": per.iter().map(|(p, m)| serde_json::json!({
            "rank_scr": p.scr, "rank_dr": p.dr, "energy": p.energy, "metrics": m,
        })).collect::<Vec<_>>(),
        "summary": summary,
    });
    let json = serde_json::to_string_pretty(&doc)? + "\n";
    if let Some(p) = &a.output {
        write_out(p, &json)?;
    }
    if a.json {
        return emit(&json);
    }
    let mut text = format!("{} reference pairs={}\n", reference.id, reference.pairs.len());
    for (p, m) in &per {
        text.push_str(&format!(
            "scr={} dr={} energy={} {}\n",
            p.scr,
            p.dr,
            p.energy,
            m.describe()
        ));
    }
    match &summary {
        Some(s) => text.push_str(&format!(
            "top {:.4} best {:.4} at scr/dr {}/{} m={}\n",
            s.top.value(a.metric),
            s.best.value(a.metric),
            s.scr_of_best,
            s.dr_of_best,
            s.multiplicity
        )),
        None => text.push_str("no predictions\n"),
    }
    emit(&text)
}

fn cmd_batch(a: &BatchArgs) -> Result<()> {
    let cfg = a.profile.load()?;
    let items = load_dir(&a.dir).with_context(|| format!("reading {}", a.dir.display()))?;
    let opts = BatchOptions {
        predict: a.run.options(),
        metric: a.metric,
        validity: Validity {
            min_len: a.min_length,
            min_ref_pairs: a.min_ref_pairs,
        },
        ignore_noncanonical: a.ignore_noncanonical,
        exec: a.run.exec(),
    };
    let res = run_batch(&items, &cfg, &opts)?;
    for r in &res.rows {
        if let stemp::batch::RowStatus::Failed { error } = &r.status {
            eprintln!("stemp: {}: {error}", r.id);
        }
    }
    let json = serde_json::to_string_pretty(&res)? + "\n";
    if let Some(p) = &a.output {
        write_out(p, &json)?;
    }
    if a.json {
        emit(&json)
    } else {
        emit(&render_table(&res))
    }
}

fn exit_code(err: &anyhow::Error) -> u8 {
    match err.downcast_ref::<stemp::Error>() {
        Some(stemp::Error::BudgetExceeded { .. }) => 3,
        Some(_) => 2,
        None => 1,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let res = match &cli.cmd {
        Command::Predict(a) => cmd_predict(a),
        Command::Evaluate(a) => cmd_evaluate(a),
        Command::Batch(a) => cmd_batch(a),
        Command::Profiles => emit(&builtin_names().map(|n| format!("{n}\n")).collect::<String>()),
    };
    match res {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("stemp: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
