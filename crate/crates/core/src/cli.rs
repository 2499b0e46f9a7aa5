//! Command-line driver. Exit codes: 0 success, 1 verification failure,
//! 2 input error, 3 numerical failure.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};

use crate::diagram::parse_pd;
use crate::io::{export_document, Format, IoError, NecklaceDocument, ObjOptions};
use crate::necklace::{assemble, verify, AssembleOptions, NecklaceError, VerifyOptions};
use crate::patchwork::build_patchwork;

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY_FAILED: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "necklace", version, about = "Build and check necklace representations of links")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Assemble the necklace of a PD-code diagram and write it as JSON.
    Pack {
        pd_file: PathBuf,
        /// Circle packing solver precision (an upper bound on the angle-sum residual).
        #[arg(long, default_value_t = 1e-4)]
        precision: f64,
        /// Radius of the outer-face disks.
        #[arg(long, default_value_t = 1.0)]
        outer_radius: f64,
        /// Tolerance of the tangency and containment checks during assembly.
        #[arg(long, default_value_t = 1e-3)]
        tol: f64,
        /// Output file (standard output if omitted).
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Verify a necklace JSON document; exits 0 iff every check passes.
    Verify {
        necklace: PathBuf,
        #[arg(long, default_value_t = 1e-3)]
        tol: f64,
        /// Skip the projection round-trip check.
        #[arg(long)]
        no_projection: bool,
    },
    /// Convert a necklace JSON document to another format.
    Export {
        necklace: PathBuf,
        /// One of json, obj, svg, csv.
        #[arg(long)]
        format: String,
        /// Output file (standard output if omitted).
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Sphere segments around the axis (obj).
        #[arg(long, default_value_t = 24)]
        segments: usize,
        /// Sphere rings from pole to pole (obj).
        #[arg(long, default_value_t = 12)]
        rings: usize,
    },
    /// Print crossing, component, and patchwork counts of a PD-code diagram.
    Info { pd_file: PathBuf },
}

/// A failure with its exit code and message.
struct Failure(i32, String);

impl From<IoError> for Failure {
    fn from(e: IoError) -> Self {
        match e {
            IoError::Necklace(e) => e.into(),
            e => Failure(EXIT_INPUT, e.to_string()),
        }
    }
}

impl From<NecklaceError> for Failure {
    fn from(e: NecklaceError) -> Self {
        let code = if e.is_numerical() { EXIT_NUMERICAL } else { EXIT_INPUT };
        Failure(code, e.to_string())
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure(EXIT_INPUT, format!("cannot read {}: {e}", path.display())))
}

fn write_output(path: Option<&Path>, bytes: &[u8], out: &mut dyn Write) -> Result<(), Failure> {
    match path {
        Some(p) => std::fs::write(p, bytes).map_err(|e| Failure(EXIT_INPUT, format!("cannot write {}: {e}", p.display()))),
        None => out.write_all(bytes).map_err(|e| Failure(EXIT_INPUT, e.to_string())),
    }
}

fn load_diagram(path: &Path) -> Result<crate::diagram::LinkDiagram, Failure> {
    parse_pd(&read(path)?).map_err(|e| Failure(EXIT_INPUT, format!("{}: {e}", path.display())))
}

fn run(command: Command, out: &mut dyn Write) -> Result<i32, Failure> {
    match command {
        Command::Pack { pd_file, precision, outer_radius, tol, output } => {
            let diagram = load_diagram(&pd_file)?;
            let options = AssembleOptions { precision, outer_radius, tolerance: tol };
            let necklace = assemble(&diagram, &options)?;
            let json = NecklaceDocument::from_necklace(&necklace).to_json();
            write_output(output.as_deref(), json.as_bytes(), out)?;
            Ok(EXIT_OK)
        }
        Command::Verify { necklace, tol, no_projection } => {
            let doc = NecklaceDocument::from_json(&read(&necklace)?)?;
            let necklace = doc.to_necklace()?;
            let report = verify(&necklace, &VerifyOptions { tolerance: tol, projection: !no_projection });
            let _ = write!(out, "{report}");
            Ok(if report.passed() { EXIT_OK } else { EXIT_VERIFY_FAILED })
        }
        Command::Export { necklace, format, output, segments, rings } => {
            let format: Format = format.parse()?;
            let doc = NecklaceDocument::from_json(&read(&necklace)?)?;
            let bytes = export_document(&doc, format, &ObjOptions { segments, rings })?;
            write_output(output.as_deref(), &bytes, out)?;
            Ok(EXIT_OK)
        }
        Command::Info { pd_file } => {
            let diagram = load_diagram(&pd_file)?;
            let patchwork = build_patchwork(&diagram).map_err(|e| Failure::from(NecklaceError::from(e)))?;
            let _ = writeln!(
                out,
                "crossings: {}, components: {}, patchwork: {} vertices, {} edges",
                diagram.crossing_count(),
                diagram.components().len(),
                patchwork.vertex_count(),
                patchwork.edge_count()
            );
            Ok(EXIT_OK)
        }
    }
}

/// Runs the CLI on `argv` (including the program name), writing results to
/// `out` and diagnostics to `err`. Returns the exit code.
pub fn run_cli<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(err, "{text}");
                EXIT_INPUT
            } else {
                let _ = write!(out, "{text}");
                EXIT_OK
            };
        }
    };
    match run(cli.command, out) {
        Ok(code) => code,
        Err(Failure(code, message)) => {
            let _ = writeln!(err, "error: {message}");
            code
        }
    }
}
