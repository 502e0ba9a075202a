//! `obk`: open book, cover and movie checks from the command line.

mod commands;
mod render;
mod workspace;

use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};

use obk_core::mcg::DEFAULT_SEARCH_DEPTH;

use commands::Outcome;
use workspace::Workspace;

#[derive(Parser)]
#[command(
    name = "obk",
    version,
    about = "Open books, cyclic covers and overtwisted disk movies"
)]
struct Cli {
    /// Print JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Depth of the positive-word search.
    #[arg(long, global = true, default_value_t = DEFAULT_SEARCH_DEPTH)]
    depth: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Surface files.
    Surface {
        #[command(subcommand)]
        action: SurfaceCmd,
    },
    /// Cyclic covers.
    Cover {
        #[command(subcommand)]
        action: CoverCmd,
    },
    /// Lift a monodromy word to a cover.
    Lift {
        surface: PathBuf,
        cover: PathBuf,
        word: PathBuf,
    },
    /// Movie presentations.
    Movie {
        #[command(subcommand)]
        action: MovieCmd,
    },
    /// Search for a positive factorization of a monodromy word.
    Positivity {
        surface: PathBuf,
        word: PathBuf,
        /// Extra relation files.
        #[arg(long = "relations")]
        relations: Vec<PathBuf>,
    },
    /// Run the inference rules on a scenario.
    Classify { scenario: PathBuf },
    /// Generate built-in input files.
    Preset {
        /// Directory to write the files to; prints them otherwise.
        #[arg(long, global = true)]
        out: Option<PathBuf>,
        #[command(subcommand)]
        which: PresetCmd,
    },
}

#[derive(Subcommand)]
enum SurfaceCmd {
    /// Summarize and validate a surface file.
    Info { surface: PathBuf },
}

#[derive(Subcommand)]
enum CoverCmd {
    /// Build a cover and print its topology and lift table.
    Build { surface: PathBuf, cover: PathBuf },
}

#[derive(Subcommand)]
enum MovieCmd {
    /// Validate a movie and test it as an overtwisted disk.
    Check { movie: PathBuf },
}

#[derive(Args)]
struct PQ {
    #[arg(long)]
    p: usize,
    #[arg(long)]
    q: usize,
}

#[derive(Subcommand)]
enum PresetCmd {
    /// Planar lantern family with monodromy exponent `n` on `alpha`.
    Prop12 {
        #[command(flatten)]
        pq: PQ,
        #[arg(long, allow_negative_numbers = true)]
        n: i64,
    },
    /// Four-holed sphere with a cyclic cover of degree `k`.
    Example41 {
        #[arg(long, allow_negative_numbers = true)]
        alpha: i64,
        #[arg(long, allow_negative_numbers = true)]
        beta: i64,
        #[arg(long)]
        k: u32,
    },
    /// Genus four surface with two boundary components and a double cover.
    Example43,
    /// Overtwisted disk movie for even `p`, `q`.
    Case1 {
        #[command(flatten)]
        pq: PQ,
    },
    /// Overtwisted disk movie for odd `p`, `q`.
    Case2 {
        #[command(flatten)]
        pq: PQ,
    },
    /// A disk with one elliptic point; not an overtwisted disk.
    TrivialDisk,
    /// Overtwisted disk with a single negative elliptic point.
    OneNegativeDisk,
}

fn run(cli: Cli) -> Result<u8> {
    let ws = Workspace::from_env();
    let outcome: Outcome = match cli.command {
        Command::Surface {
            action: SurfaceCmd::Info { surface },
        } => commands::surface_info(&ws, &surface)?,
        Command::Cover {
            action: CoverCmd::Build { surface, cover },
        } => commands::cover_build(&ws, &surface, &cover)?,
        Command::Lift { surface, cover, word } => commands::lift(&ws, &surface, &cover, &word)?,
        Command::Movie {
            action: MovieCmd::Check { movie },
        } => commands::movie_check(&ws, &movie)?,
        Command::Positivity {
            surface,
            word,
            relations,
        } => commands::positivity(&ws, &surface, &word, &relations, cli.depth)?,
        Command::Classify { scenario } => commands::classify(&ws, &scenario, cli.depth)?,
        Command::Preset { out, which } => {
            let files = match which {
                PresetCmd::Prop12 { pq, n } => commands::preset_prop12(pq.p, pq.q, n)?,
                PresetCmd::Example41 { alpha, beta, k } => commands::preset_example41(alpha, beta, k)?,
                PresetCmd::Example43 => commands::preset_example43(),
                PresetCmd::Case1 { pq } => commands::preset_case(1, pq.p, pq.q)?,
                PresetCmd::Case2 { pq } => commands::preset_case(2, pq.p, pq.q)?,
                PresetCmd::TrivialDisk => commands::preset_movie(obk_core::presets::trivial_disk_movie()),
                PresetCmd::OneNegativeDisk => commands::preset_movie(obk_core::presets::one_negative_disk_movie()),
            };
            match out {
                Some(dir) => {
                    fs::create_dir_all(&dir).with_context(|| format!("cannot create {}", dir.display()))?;
                    let mut written = Vec::new();
                    for (name, text) in &files {
                        let p = dir.join(name);
                        fs::write(&p, text).with_context(|| format!("cannot write {}", p.display()))?;
                        written.push(p.display().to_string());
                    }
                    Outcome {
                        doc: serde_json::json!({ "written": written }),
                        rejected: false,
                    }
                }
                None => Outcome {
                    doc: commands::preset_doc(&files)?,
                    rejected: false,
                },
            }
        }
    };
    let text = if cli.json {
        let mut s = serde_json::to_string_pretty(&outcome.doc)?;
        s.push('\n');
        s
    } else {
        render::text(&outcome.doc)
    };
    std::io::stdout().lock().write_all(text.as_bytes())?;
    Ok(u8::from(outcome.rejected))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
