use clap::{Args, Parser, Subcommand};
use regwind::homotopy::synthesize_regular_homotopy;
use regwind::render::render_scene;
use regwind::report::{classify_report, winding_report, FrameFile, SynthesisReport, EXIT_RESOLUTION};
use regwind::scene::SceneDocument;
use regwind::{SynthesisError, Tolerances};
use serde::Serialize;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "regwind", version, about = "Regular-homotopy invariants of curves on surfaces")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Scene JSON file.
    scene: PathBuf,
    /// Print the report as JSON.
    #[arg(long)]
    json: bool,
    /// Distance to an integer under which raw values are snapped.
    #[arg(long, value_name = "X")]
    tol_int: Option<f64>,
}

impl Common {
    fn tolerances(&self) -> Tolerances {
        let mut t = Tolerances::default();
        if let Some(x) = self.tol_int {
            t.int = x;
        }
        t
    }
}

#[derive(Subcommand)]
enum Command {
    /// Indices and winding numbers of one curve.
    Winding {
        #[command(flatten)]
        common: Common,
        curve: String,
    },
    /// Decide whether two curves are regularly homotopic.
    Classify {
        #[command(flatten)]
        common: Common,
        curve1: String,
        curve2: String,
        /// Homotopies fixing the base point instead of free ones.
        #[arg(long)]
        based: bool,
    },
    /// Build a regular homotopy between two plane curves.
    Synthesize {
        #[command(flatten)]
        common: Common,
        curve1: String,
        curve2: String,
        #[arg(long, default_value_t = 24)]
        frames: usize,
        /// Directory for frame files and the certificate.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Render curves in the cover as SVG.
    Render {
        #[command(flatten)]
        common: Common,
        curves: Vec<String>,
        #[arg(long)]
        out: PathBuf,
    },
}

/// A failed command: exit code and message.
struct Failure(i32, String);

fn fail(msg: impl std::fmt::Display) -> Failure {
    Failure(EXIT_RESOLUTION, msg.to_string())
}

fn load(path: &Path) -> Result<SceneDocument, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| fail(format!("{}: {e}", path.display())))?;
    SceneDocument::from_json(&text).map_err(fail)
}

fn emit<T: Serialize>(json: bool, value: &T, text: impl FnOnce() -> String) {
    if json {
        println!("{}", serde_json::to_string_pretty(value).expect("report serializes"));
    } else {
        print!("{}", text());
    }
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), Failure> {
    let text = serde_json::to_string_pretty(value).expect("serializes");
    std::fs::write(path, text + "\n").map_err(|e| fail(format!("{}: {e}", path.display())))
}

fn run(cli: Cli) -> Result<i32, Failure> {
    match cli.command {
        Command::Winding { common, curve } => {
            let doc = load(&common.scene)?;
            let r = winding_report(&doc, &curve, &common.tolerances()).map_err(fail)?;
            emit(common.json, &r, || r.to_text());
            Ok(r.exit_code())
        }
        Command::Classify { common, curve1, curve2, based } => {
            let doc = load(&common.scene)?;
            let r = classify_report(&doc, &curve1, &curve2, based, &common.tolerances()).map_err(fail)?;
            emit(common.json, &r, || r.to_text());
            Ok(r.exit_code())
        }
        Command::Synthesize {
            common,
            curve1,
            curve2,
            frames,
            out,
        } => {
            let doc = load(&common.scene)?;
            let tol = common.tolerances();
            let a = doc.plane_curve(&curve1, &tol).map_err(fail)?;
            let b = doc.plane_curve(&curve2, &tol).map_err(fail)?;
            let h = match synthesize_regular_homotopy(&a, &b, frames, &tol) {
                Ok(h) => h,
                Err(e @ SynthesisError::IndexMismatch { .. }) => return Err(Failure(1, e.to_string())),
                Err(e) => return Err(fail(e)),
            };
            let r = SynthesisReport::new(&curve1, &curve2, &h);
            if let Some(dir) = out {
                std::fs::create_dir_all(&dir).map_err(|e| fail(format!("{}: {e}", dir.display())))?;
                for (k, f) in h.frames.iter().enumerate() {
                    write_json(&dir.join(format!("frame_{k:03}.json")), &FrameFile::new(k, f))?;
                }
                write_json(&dir.join("certificate.json"), &r)?;
            }
            emit(common.json, &r, || r.to_text());
            Ok(if r.all_regular { 0 } else { 1 })
        }
        Command::Render { common, curves, out } => {
            let doc = load(&common.scene)?;
            let svg = render_scene(&doc, &curves, &common.tolerances()).map_err(fail)?;
            std::fs::write(&out, svg).map_err(|e| fail(format!("{}: {e}", out.display())))?;
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_RESOLUTION as u8 } else { 0 });
        }
    };
    let json = match &cli.command {
        Command::Winding { common, .. } | Command::Classify { common, .. } | Command::Synthesize { common, .. } | Command::Render { common, .. } => common.json,
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(Failure(code, message)) => {
            eprintln!("error: {message}");
            if json {
                println!("{}", serde_json::json!({ "error": message, "exit_code": code }));
            }
            ExitCode::from(code as u8)
        }
    }
}
