//! Command-line front end.
//!
//! Exit codes: 0 success (or spectrum Yes), 1 verification failure or
//! spectrum No, 2 spectrum Unknown or aborted search, 64 usage error,
//! 65 unreadable or malformed input, 70 internal inconsistency.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use crate::catalog::{self, Format};
use crate::construct::{self, PadMode, PaddingSpec, Recipe};
use crate::error::Error;
use crate::model::TradeFamily;
use crate::search::{self, SearchMode, SearchProblem, SearchStatus, SymmetryBreaking};
use crate::spectrum::{self, SpectrumAnswer};
use crate::verify::verify;

pub const EXIT_OK: i32 = 0;
pub const EXIT_NO: i32 = 1;
pub const EXIT_UNKNOWN: i32 = 2;
pub const EXIT_USAGE: i32 = 64;
pub const EXIT_DATA: i32 = 65;
pub const EXIT_INTERNAL: i32 = 70;

#[derive(Parser, Debug)]
#[command(name = "tradekit", version, about = "Multi-way combinatorial trades")]
struct Cli {
    /// Machine-readable JSON output.
    #[arg(long, global = true)]
    json: bool,
    /// Worker threads for search (1 = sequential).
    #[arg(long, global = true, env = "TRADEKIT_THREADS")]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check every defining property of a trade document.
    Verify {
        file: PathBuf,
        /// Also require the Steiner property.
        #[arg(long)]
        steiner_expected: bool,
        /// Also require t-solely balance.
        #[arg(long)]
        solely_balanced: bool,
    },
    /// Build a trade and write it with its recipe.
    Construct {
        #[command(subcommand)]
        kind: ConstructKind,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Bounded exhaustive search.
    Search(SearchArgs),
    /// Mine a 3-way (v,k,2) Steiner witness at the smallest foundation.
    Mine {
        #[arg(long)]
        m: usize,
        #[arg(long, default_value_t = 3)]
        k: usize,
        /// Write the certificate document here.
        #[arg(long)]
        certificate: Option<PathBuf>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Is a volume in the spectrum?
    Spectrum {
        #[arg(long, default_value_t = 3)]
        mu: usize,
        #[arg(long)]
        t: usize,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        m: usize,
        #[arg(long)]
        steiner: bool,
        /// Build and verify the witness of a Yes answer.
        #[arg(long)]
        replay: bool,
    },
    /// Embedded catalog.
    Catalog {
        #[command(subcommand)]
        action: CatalogAction,
    },
}

#[derive(Args, Debug)]
struct OutputArgs {
    /// Write the document here instead of stdout.
    #[arg(long, short, global = true)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = DocFormat::Compact, global = true)]
    format: DocFormat,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum DocFormat {
    Compact,
    Json,
}

impl From<DocFormat> for Format {
    fn from(f: DocFormat) -> Self {
        match f {
            DocFormat::Compact => Format::Compact,
            DocFormat::Json => Format::Json,
        }
    }
}

#[derive(Subcommand, Debug)]
enum ConstructKind {
    /// Cyclic blow-up of a trade document.
    Blowup {
        file: PathBuf,
        /// Labels for the μ fresh elements, comma separated.
        #[arg(long, value_delimiter = ',')]
        fresh: Vec<String>,
    },
    /// Disjoint sum of two trade documents.
    Sum { a: PathBuf, b: PathBuf },
    /// Pad every block with fresh elements.
    Pad {
        file: PathBuf,
        #[arg(long, value_enum)]
        mode: PadArg,
        #[arg(long)]
        width: usize,
    },
    /// First μ one-factors of K_2m.
    OneFactor {
        #[arg(long)]
        m: usize,
        #[arg(long, default_value_t = 3)]
        mu: usize,
    },
    /// Parallel classes of a transversal design over Z_n.
    Transversal {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        width: usize,
        #[arg(long, default_value_t = 3)]
        mu: usize,
    },
    /// 1-solely balanced 3-way (v,3,1) trade of volume m.
    Triples {
        #[arg(long)]
        m: usize,
    },
    /// 3-way (v,3,2) Steiner trade of volume m.
    Steiner23 {
        #[arg(long)]
        m: usize,
    },
    /// 3-way (v,4,2) Steiner trade of volume m.
    Steiner24 {
        #[arg(long)]
        m: usize,
    },
    /// 3-way (v,k,2) trade of volume m.
    General2k {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        k: usize,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum PadArg {
    PerBlock,
    Universal,
}

#[derive(Args, Debug)]
struct SearchArgs {
    #[arg(long, default_value_t = 3)]
    mu: usize,
    #[arg(long)]
    k: usize,
    #[arg(long)]
    t: usize,
    #[arg(long)]
    m: usize,
    #[arg(long)]
    steiner: bool,
    #[arg(long)]
    max_found: Option<usize>,
    #[arg(long)]
    min_found: Option<usize>,
    #[arg(long, value_enum, default_value_t = ModeArg::FirstWitness)]
    mode: ModeArg,
    #[arg(long)]
    limit_nodes: Option<u64>,
    #[arg(long)]
    limit_ms: Option<u64>,
    /// Disable element-order symmetry breaking.
    #[arg(long)]
    no_symmetry: bool,
    /// Write the certificate document here.
    #[arg(long)]
    certificate: Option<PathBuf>,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum ModeArg {
    FirstWitness,
    CountClasses,
    ExhaustiveNone,
}

#[derive(Subcommand, Debug)]
enum CatalogAction {
    List,
    Show {
        name: String,
        #[arg(long, value_enum, default_value_t = DocFormat::Compact)]
        format: DocFormat,
    },
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{text}");
                    EXIT_OK
                }
                _ => {
                    let _ = write!(err, "{text}");
                    EXIT_USAGE
                }
            };
        }
    };
    let mut ctx = Ctx { json: cli.json, threads: cli.threads, out, err };
    match ctx.dispatch(cli.command) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(ctx.err, "error: {e}");
            exit_code(&e)
        }
    }
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Parameter(_) | Error::FreshCollision(_) | Error::NotInFoundation(_) | Error::NonInjective(..) => EXIT_USAGE,
        Error::NotInSpectrum { .. } => EXIT_NO,
        Error::UnknownSpectrum { .. } => EXIT_UNKNOWN,
        Error::Parse { .. } | Error::Format(_) | Error::Io(_) | Error::Json(_) | Error::Catalog { .. } => EXIT_DATA,
        Error::Inconsistency(_) => EXIT_INTERNAL,
    }
}

struct Ctx<'a> {
    json: bool,
    threads: Option<usize>,
    out: &'a mut dyn Write,
    err: &'a mut dyn Write,
}

type CmdResult = crate::error::Result<i32>;

fn read_doc(path: &Path) -> crate::error::Result<TradeFamily> {
    catalog::parse_any(&std::fs::read_to_string(path)?)
}

impl Ctx<'_> {
    fn dispatch(&mut self, cmd: Command) -> CmdResult {
        match cmd {
            Command::Verify { file, steiner_expected, solely_balanced } => self.verify(&file, steiner_expected, solely_balanced),
            Command::Construct { kind, output } => self.construct(kind, &output),
            Command::Search(a) => self.search(a),
            Command::Mine { m, k, certificate, output } => self.mine(m, k, certificate.as_deref(), &output),
            Command::Spectrum { mu, t, k, m, steiner, replay } => self.spectrum(mu, t, k, m, steiner, replay),
            Command::Catalog { action } => self.catalog(action),
        }
    }

    fn emit_json(&mut self, value: &impl Serialize) -> crate::error::Result<()> {
        writeln!(self.out, "{}", serde_json::to_string_pretty(value)?)?;
        Ok(())
    }

    fn verify(&mut self, file: &Path, steiner: bool, solely: bool) -> CmdResult {
        let family = read_doc(file)?;
        let report = verify(&family);
        let ok = report.valid && (!steiner || report.steiner) && (!solely || report.solely_balanced);
        if self.json {
            self.emit_json(&json!({ "report": report, "expectations_met": ok }))?;
        } else {
            writeln!(
                self.out,
                "{}-way (k={}, t={}) volume {} on {} points",
                family.mu(),
                family.k(),
                family.t(),
                family.volume(),
                family.foundation().len()
            )?;
            writeln!(self.out, "valid: {}", report.valid)?;
            writeln!(self.out, "steiner: {}", report.steiner)?;
            writeln!(self.out, "solely balanced: {}", report.solely_balanced)?;
            for b in &report.repeated_blocks {
                let w: Vec<String> = b.elements().iter().map(|&x| family.label(x)).collect();
                writeln!(self.out, "note: block {{{}}} is repeated within a collection", w.join(","))?;
            }
            for f in &report.failures {
                let w: Vec<String> = f.witness.iter().map(|&x| family.label(x)).collect();
                writeln!(self.out, "failure: {:?} on {{{}}} counts {:?}", f.kind, w.join(","), f.counts)?;
            }
            if steiner && !report.steiner {
                writeln!(self.out, "expectation failed: not Steiner")?;
            }
            if solely && !report.solely_balanced {
                writeln!(self.out, "expectation failed: not solely balanced")?;
            }
        }
        Ok(if ok { EXIT_OK } else { EXIT_NO })
    }

    fn construct(&mut self, kind: ConstructKind, output: &OutputArgs) -> CmdResult {
        let (family, recipe) = match kind {
            ConstructKind::Blowup { file, fresh } => {
                let input = read_doc(&file)?;
                let ids = construct::fresh_ids(&input, input.mu());
                let mut f = construct::blow_up(&input, &ids)?;
                if !fresh.is_empty() {
                    if fresh.len() != input.mu() {
                        return Err(Error::param(format!("--fresh needs {} labels", input.mu())));
                    }
                    let mut labels: BTreeMap<_, _> = f.labels().clone();
                    labels.extend(ids.iter().copied().zip(fresh));
                    f = f.with_labels(labels);
                }
                (f, Recipe::BlowUp { input: Box::new(Recipe::Literal { family: input }), fresh: Some(ids) })
            }
            ConstructKind::Sum { a, b } => {
                let (a, b) = (read_doc(&a)?, read_doc(&b)?);
                let f = construct::sum_disjointified(&a, &b)?;
                (f, Recipe::sum(Recipe::Literal { family: a }, Recipe::Literal { family: b }))
            }
            ConstructKind::Pad { file, mode, width } => {
                let input = read_doc(&file)?;
                let (spec, mode) = match mode {
                    PadArg::PerBlock => (PaddingSpec::per_block_fresh(&input, width), PadMode::PerBlock),
                    PadArg::Universal => (PaddingSpec::universal_fresh(&input, width), PadMode::Universal),
                };
                let f = construct::pad(&input, &spec)?;
                (f, Recipe::pad(Recipe::Literal { family: input }, mode, width))
            }
            ConstructKind::OneFactor { m, mu } => {
                let r = Recipe::OneFactor { m, mu };
                (r.build()?, r)
            }
            ConstructKind::Transversal { n, width, mu } => {
                let r = Recipe::Transversal { n, width, mu };
                (r.build()?, r)
            }
            ConstructKind::Triples { m } => {
                let r = Recipe::SolelyBalancedTriples { m };
                (r.build()?, r)
            }
            ConstructKind::Steiner23 { m } => {
                let r = construct::steiner_2_3_recipe(m)?;
                (r.build()?, r)
            }
            ConstructKind::Steiner24 { m } => {
                let r = construct::steiner_2_4_recipe(m)?;
                (r.build()?, r)
            }
            ConstructKind::General2k { m, k } => {
                let r = construct::general_2_k_recipe(m, k)?;
                (r.build()?, r)
            }
        };
        let report = verify(&family);
        if !report.valid {
            return Err(Error::Inconsistency(format!("construction `{recipe}` failed verification")));
        }
        let (format, text) = match catalog::serialize(&family, output.format.into()) {
            Ok(t) => (output.format, t),
            Err(Error::Format(msg)) if output.format == DocFormat::Compact => {
                writeln!(self.err, "note: {msg}; writing JSON instead")?;
                (DocFormat::Json, catalog::serialize(&family, Format::Json)?)
            }
            Err(e) => return Err(e),
        };
        let doc = match format {
            DocFormat::Compact => format!("# recipe: {recipe}\n{text}"),
            DocFormat::Json => text,
        };
        if let Some(path) = &output.out {
            std::fs::write(path, &doc)?;
        }
        if self.json {
            self.emit_json(&json!({
                "recipe": recipe,
                "recipe_text": recipe.to_string(),
                "family": family,
                "steiner": report.steiner,
                "solely_balanced": report.solely_balanced,
            }))?;
        } else if output.out.is_none() {
            write!(self.out, "{doc}")?;
            if format == DocFormat::Json {
                writeln!(self.out)?;
            }
        } else {
            writeln!(self.out, "recipe: {recipe}")?;
            writeln!(self.out, "volume {} on {} points, steiner: {}", family.volume(), family.foundation().len(), report.steiner)?;
        }
        Ok(EXIT_OK)
    }

    fn search(&mut self, a: SearchArgs) -> CmdResult {
        let mode = match a.mode {
            ModeArg::FirstWitness => SearchMode::FirstWitness,
            ModeArg::CountClasses => SearchMode::CountClasses,
            ModeArg::ExhaustiveNone => SearchMode::ExhaustiveNone,
        };
        let mut p = SearchProblem::new(a.mu, a.k, a.t, a.m, a.steiner, mode);
        p.max_foundation = a.max_found;
        p.min_foundation = a.min_found;
        p.node_limit = a.limit_nodes;
        p.time_limit_ms = a.limit_ms;
        p.threads = self.threads;
        if a.no_symmetry {
            p.symmetry = SymmetryBreaking::None;
        }
        let outcome = search::search(&p)?;
        writeln!(self.err, "elapsed: {:.3} s", outcome.stats.elapsed.as_secs_f64())?;
        if let Some(path) = &a.certificate {
            std::fs::write(path, serde_json::to_string_pretty(&outcome.certificate)? + "\n")?;
        }
        if self.json {
            self.emit_json(&outcome)?;
        } else {
            let s = &outcome.stats;
            writeln!(self.out, "status: {}", outcome.status.name())?;
            writeln!(self.out, "claim: {}", outcome.certificate.claim)?;
            writeln!(self.out, "foundation: {}..={} (bound {})", outcome.certificate.min_foundation, outcome.certificate.max_foundation, outcome.certificate.foundation_bound)?;
            writeln!(
                self.out,
                "nodes: {} (first collection {}, covers {}); complete first collections {}; covers {}; families {}",
                s.nodes(),
                s.t1_nodes,
                s.cover_nodes,
                s.t1_complete,
                s.covers,
                s.families
            )?;
            match &outcome.status {
                SearchStatus::WitnessFound { witness } => write!(self.out, "{witness}")?,
                SearchStatus::ExhaustedClasses { classes } => {
                    writeln!(self.out, "classes: {}", classes.len())?;
                    for (i, c) in classes.iter().enumerate() {
                        writeln!(self.out, "class {}:", i + 1)?;
                        write!(self.out, "{c}")?;
                    }
                }
                _ => {}
            }
        }
        Ok(match outcome.status {
            SearchStatus::Aborted { .. } => EXIT_UNKNOWN,
            _ => EXIT_OK,
        })
    }

    fn mine(&mut self, m: usize, k: usize, certificate: Option<&Path>, output: &OutputArgs) -> CmdResult {
        let outcome = search::mine_base_traced(m, k, self.threads)?;
        let SearchStatus::WitnessFound { witness } = &outcome.status else {
            return Err(Error::Inconsistency("mine_base returned without a witness".into()));
        };
        if let Some(path) = certificate {
            std::fs::write(path, serde_json::to_string_pretty(&outcome.certificate)? + "\n")?;
        }
        let doc = catalog::serialize(witness, output.format.into())?;
        if let Some(path) = &output.out {
            std::fs::write(path, &doc)?;
        }
        if self.json {
            self.emit_json(&outcome)?;
        } else {
            writeln!(self.out, "claim: {}", outcome.certificate.claim)?;
            if output.out.is_none() {
                write!(self.out, "{doc}")?;
            }
        }
        Ok(EXIT_OK)
    }

    fn spectrum(&mut self, mu: usize, t: usize, k: usize, m: usize, steiner: bool, replay: bool) -> CmdResult {
        let answer = spectrum::query(mu, t, k, m, steiner)?;
        let witness = match (&answer, replay) {
            (SpectrumAnswer::Yes { .. }, true) => {
                let f = spectrum::replay(&answer)?;
                let r = verify(&f);
                if !r.valid || (steiner && !r.steiner) || f.volume() != m {
                    return Err(Error::Inconsistency(format!("spectrum witness for m = {m} failed verification")));
                }
                Some(f)
            }
            _ => None,
        };
        if self.json {
            self.emit_json(&json!({ "answer": answer, "witness": witness }))?;
        } else {
            match &answer {
                SpectrumAnswer::Yes { recipe } => writeln!(self.out, "yes: {recipe}")?,
                SpectrumAnswer::No { citation } => writeln!(self.out, "no: {citation}")?,
                SpectrumAnswer::Unknown { citation } => writeln!(self.out, "unknown: {citation}")?,
            }
            if let Some(f) = &witness {
                writeln!(self.out, "witness verified: volume {} on {} points", f.volume(), f.foundation().len())?;
            }
        }
        Ok(match answer {
            SpectrumAnswer::Yes { .. } => EXIT_OK,
            SpectrumAnswer::No { .. } => EXIT_NO,
            SpectrumAnswer::Unknown { .. } => EXIT_UNKNOWN,
        })
    }

    fn catalog(&mut self, action: CatalogAction) -> CmdResult {
        let entries = catalog::entries()?;
        match action {
            CatalogAction::List => {
                if self.json {
                    let rows: Vec<_> = entries
                        .iter()
                        .map(|e| json!({ "name": e.name, "expected": e.expected, "provenance": e.provenance, "repaired": e.repair.is_some() }))
                        .collect();
                    self.emit_json(&rows)?;
                } else {
                    for e in entries {
                        let x = &e.expected;
                        writeln!(
                            self.out,
                            "{:<22} mu={} k={} t={} m={:<3} v={:<3} steiner={} solely={}{}",
                            e.name,
                            x.mu,
                            x.k,
                            x.t,
                            x.volume,
                            x.foundation,
                            x.steiner,
                            x.solely_balanced,
                            if e.repair.is_some() { " (repaired)" } else { "" }
                        )?;
                    }
                }
            }
            CatalogAction::Show { name, format } => {
                let e = catalog::get(&name)?;
                if self.json {
                    self.emit_json(e)?;
                } else {
                    match format {
                        DocFormat::Compact => write!(self.out, "{}", catalog::serialize(&e.family, Format::Compact)?)?,
                        DocFormat::Json => writeln!(self.out, "{}", catalog::serialize(&e.family, Format::Json)?)?,
                    }
                    if let Some(r) = &e.repair {
                        writeln!(self.out, "# repaired: collection {} block {} -> {}; {}", r.collection, r.replaced, r.replacement, r.note)?;
                    }
                }
            }
        }
        Ok(EXIT_OK)
    }
}
