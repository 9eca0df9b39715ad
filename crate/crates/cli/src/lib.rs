//! Batch front end for the toolkit: loads a workspace file, dispatches one
//! command, prints an aligned human table or the versioned JSON report, and
//! exits 0 (pass/constructed), 1 (counterexample or absence, with a
//! certificate), or 2 (usage or validation error).

pub mod commands;
pub mod report;
pub mod workspace;

use std::path::PathBuf;
use std::time::Instant;

use clap::{Parser, Subcommand};
use thiserror::Error;

use crate::commands::CommandResult;
use crate::report::{CapsOut, Report, SCHEMA};
use crate::workspace::{parse_workspace, CapsSpec};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("usage error: {0}")]
    Usage(String),
    #[error("validation error: {0}")]
    Validation(String),
}

#[derive(Debug, Parser)]
#[command(
    name = "tvcat",
    about = "Exact audits and constructions for quantale-enriched categories",
    version
)]
pub struct Cli {
    /// Workspace file to load.
    #[arg(short = 'w', long, global = true, default_value = "workspace.json")]
    pub workspace: PathBuf,
    /// Emit the machine-readable report instead of tables.
    #[arg(long, global = true)]
    pub json: bool,
    /// Load theories whose axiom audit failed.
    #[arg(long, global = true)]
    pub allow_unaudited: bool,
    /// Record wall-clock timing in the report (off by default so JSON output
    /// is byte-identical across runs).
    #[arg(long, global = true)]
    pub timing: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Validate the workspace and report its contents.
    Check,
    /// Audit the workspace quantale laws.
    AuditQuantale,
    /// Audit the theory axioms up to a carrier cap.
    AuditTheory {
        #[arg(long, default_value_t = 3)]
        cap: usize,
    },
    /// Audit (Ax 1)-(Ax 4) for a distributor class.
    AuditPhi {
        #[arg(long)]
        class: String,
        #[arg(long, default_value_t = 2)]
        cap: usize,
    },
    /// Enumerate the Φ-presheaf category of X.
    Presheaf {
        x: String,
        #[arg(long)]
        class: String,
    },
    /// The restricted Yoneda functor of X.
    Yoneda {
        x: String,
        #[arg(long)]
        class: String,
    },
    /// The Φ-cocompletion ΦX with its supremum map.
    Complete {
        x: String,
        #[arg(long)]
        class: String,
    },
    /// The colimit of a diagram weighted by a named distributor.
    Colim {
        #[arg(long)]
        weight: String,
        #[arg(long)]
        along: String,
    },
    /// The four-flag injectivity/cocompleteness audit.
    Cocomplete {
        x: String,
        #[arg(long)]
        class: String,
    },
    /// The bounded Φ-injectivity search alone.
    Injective {
        x: String,
        #[arg(long)]
        class: String,
        #[arg(long)]
        cap: Option<usize>,
    },
    /// Audit the Kock-Zöberlein adjunction chain on X.
    KzAudit {
        x: String,
        #[arg(long)]
        class: String,
    },
    /// Audit the split-fork identities for a relation R ⊆ X×X.
    SplitFork {
        r: String,
        x: String,
        #[arg(long)]
        class: String,
    },
    /// Audit the Kan-style equivalence for functors out of ΦX.
    KanCheck {
        x: String,
        y: String,
        #[arg(long)]
        class: String,
    },
    /// Dualise a category (the result lives on T(carrier)).
    Dual { x: String },
    /// Tensor two categories.
    Tensor { x: String, y: String },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Check => "check",
            Command::AuditQuantale => "audit-quantale",
            Command::AuditTheory { .. } => "audit-theory",
            Command::AuditPhi { .. } => "audit-phi",
            Command::Presheaf { .. } => "presheaf",
            Command::Yoneda { .. } => "yoneda",
            Command::Complete { .. } => "complete",
            Command::Colim { .. } => "colim",
            Command::Cocomplete { .. } => "cocomplete",
            Command::Injective { .. } => "injective",
            Command::KzAudit { .. } => "kz-audit",
            Command::SplitFork { .. } => "split-fork",
            Command::KanCheck { .. } => "kan-check",
            Command::Dual { .. } => "dual",
            Command::Tensor { .. } => "tensor",
        }
    }

    fn instance(&self) -> String {
        match self {
            Command::Check | Command::AuditQuantale | Command::AuditTheory { .. } => {
                "workspace".into()
            }
            Command::AuditPhi { class, .. } => format!("class {class}"),
            Command::Presheaf { x, class }
            | Command::Yoneda { x, class }
            | Command::Complete { x, class }
            | Command::Cocomplete { x, class }
            | Command::Injective { x, class, .. }
            | Command::KzAudit { x, class } => format!("{x} / {class}"),
            Command::Colim { weight, along } => format!("{weight} along {along}"),
            Command::SplitFork { r, x, class } => format!("{r} ⇉ {x} / {class}"),
            Command::KanCheck { x, y, class } => format!("{x}, {y} / {class}"),
            Command::Dual { x } => x.clone(),
            Command::Tensor { x, y } => format!("{x} ⊗ {y}"),
        }
    }
}

/// Runs a parsed invocation; returns the process exit code.
pub fn run(cli: &Cli, out: &mut impl std::io::Write) -> i32 {
    let started = Instant::now();
    let env_caps = match std::env::var("TVCAT_DEFAULT_CAPS") {
        Ok(s) => match CapsSpec::parse_env(&s) {
            Ok(spec) => Some(spec),
            Err(e) => {
                let _ = writeln!(out, "{e}");
                return 2;
            }
        },
        Err(_) => None,
    };
    let ws = match parse_workspace(&cli.workspace, cli.allow_unaudited, env_caps.as_ref()) {
        Ok(ws) => ws,
        Err(e) => {
            let _ = writeln!(out, "{e}");
            return 2;
        }
    };
    let result: Result<CommandResult, CliError> = match &cli.command {
        Command::Check => commands::check(&ws),
        Command::AuditQuantale => commands::audit_quantale(&ws),
        Command::AuditTheory { cap } => commands::audit_theory(&ws, *cap),
        Command::AuditPhi { class, cap } => commands::audit_phi(&ws, class, *cap),
        Command::Presheaf { x, class } => commands::presheaf(&ws, x, class),
        Command::Yoneda { x, class } => commands::yoneda_cmd(&ws, x, class),
        Command::Complete { x, class } => commands::complete(&ws, x, class),
        Command::Colim { weight, along } => commands::colim(&ws, weight, along),
        Command::Cocomplete { x, class } => commands::cocomplete(&ws, x, class),
        Command::Injective { x, class, cap } => commands::injective(&ws, x, class, *cap),
        Command::KzAudit { x, class } => commands::kz(&ws, x, class),
        Command::SplitFork { r, x, class } => commands::split_fork(&ws, r, x, class),
        Command::KanCheck { x, y, class } => commands::kan(&ws, x, y, class),
        Command::Dual { x } => commands::dual(&ws, x),
        Command::Tensor { x, y } => commands::tensor(&ws, x, y),
    };
    match result {
        Ok(res) => {
            if cli.json {
                let report = Report {
                    schema: SCHEMA,
                    instance: cli.command.instance(),
                    operation: cli.command.name().to_string(),
                    verdict: res.verdict.clone(),
                    witnesses: res.witnesses,
                    caps: CapsOut::from(&ws.caps),
                    timing_ms: cli.timing.then(|| started.elapsed().as_millis()),
                    data: res.data,
                };
                let _ = writeln!(
                    out,
                    "{}",
                    serde_json::to_string_pretty(&report).expect("report serialises")
                );
            } else {
                let _ = write!(out, "{}", res.human);
                let _ = writeln!(out, "verdict: {}", res.verdict);
            }
            if res.ok {
                0
            } else {
                1
            }
        }
        Err(e) => {
            let _ = writeln!(out, "{e}");
            2
        }
    }
}
