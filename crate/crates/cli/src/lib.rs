//! The `homeo` command line: value files in, JSON reports out.
//!
//! Every subcommand reads value files (see [`value`]), runs one library
//! operation and prints a JSON report to stdout, or to the file named by
//! `--out`. Diagnostics go to stderr. Exit codes: `0` success, `1` failed
//! operation or failed check, `2` usage error or malformed certificate.

pub mod args;
mod commands;
pub mod value;

use std::ffi::OsString;
use std::io::Write;

use clap::Parser;

pub use args::{Cli, Command};
pub use value::{parse_value, parse_value_file, Value};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error("{0}")]
    Io(String),
    #[error("{path}: {source}")]
    Value {
        path: String,
        source: homeo_core::Error,
    },
    #[error(transparent)]
    Op(#[from] homeo_core::Error),
    /// The operation ran and its check came out negative.
    #[error("check failed")]
    CheckFailed,
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        use homeo_core::Error as E;
        match self {
            CliError::Usage(_) => 2,
            CliError::Value {
                source: E::MalformedCertificate(_),
                ..
            }
            | CliError::Op(E::MalformedCertificate(_)) => 2,
            _ => 1,
        }
    }
}

/// Which library operations each subcommand reaches.
pub const DISPATCH: &[(&str, &[&str])] = &[
    ("compose", &["pl_homeo::compose", "pl_homeo::evaluate"]),
    ("invert", &["pl_homeo::invert"]),
    ("distance", &["pl_homeo::sup_distance", "pl_homeo::complete_distance"]),
    ("support", &["pl_homeo::support"]),
    ("fragment", &["fragmentation::fragmentation_threshold", "fragmentation::fragment"]),
    (
        "anderson",
        &[
            "commutator::build_translator",
            "commutator::anderson_factor",
            "commutator::multi_anderson",
            "commutator::commutator_locality_check",
            "pl_homeo::evaluate",
        ],
    ),
    ("net", &["cover::build_epsilon_net"]),
    ("cover", &["cover::dual_graph", "cover::greedy_color", "cover::efficient_cover"]),
    ("scan", &["cover::degree_stability_scan"]),
    (
        "germ-straighten",
        &[
            "germs::is_local_contraction",
            "germs::straighten_contraction",
            "germs::conjugate_contractions",
            "germs::basis_to_contraction",
        ],
    ),
    ("germ-decompose", &["germs::make_compatible_contraction", "germs::decompose_via_contraction"]),
    ("certify", &["certify::shrink_conjugator", "certify::certify_small_word"]),
    ("verify", &["certify::verify_certificate", "cli::parse_value_file"]),
];

/// Runs one invocation; `args[0]` is the program name.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{text}");
                    0
                }
                _ => {
                    let _ = write!(err, "{text}");
                    2
                }
            };
        }
    };
    let result = commands::execute(&cli.command);
    let (report, outcome) = match result {
        Ok(r) => (Some(r.text), r.passed),
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return e.exit_code();
        }
    };
    if let Some(text) = report {
        match &cli.out {
            Some(path) => {
                if let Err(e) = std::fs::write(path, &text) {
                    let _ = writeln!(err, "error: {}: {e}", path.display());
                    return 1;
                }
            }
            None => {
                let _ = write!(out, "{text}");
            }
        }
    }
    if outcome {
        0
    } else {
        let _ = writeln!(err, "error: {}", CliError::CheckFailed);
        CliError::CheckFailed.exit_code()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::CommandFactory;

    const OPERATIONS: &[&str] = &[
        "pl_homeo::evaluate",
        "pl_homeo::compose",
        "pl_homeo::invert",
        "pl_homeo::sup_distance",
        "pl_homeo::complete_distance",
        "pl_homeo::support",
        "fragmentation::fragmentation_threshold",
        "fragmentation::fragment",
        "commutator::build_translator",
        "commutator::anderson_factor",
        "commutator::multi_anderson",
        "commutator::commutator_locality_check",
        "cover::build_epsilon_net",
        "cover::dual_graph",
        "cover::greedy_color",
        "cover::efficient_cover",
        "cover::degree_stability_scan",
        "germs::is_local_contraction",
        "germs::straighten_contraction",
        "germs::conjugate_contractions",
        "germs::basis_to_contraction",
        "germs::make_compatible_contraction",
        "germs::decompose_via_contraction",
        "certify::shrink_conjugator",
        "certify::certify_small_word",
        "certify::verify_certificate",
        "cli::parse_value_file",
    ];

    #[test]
    fn every_operation_is_reachable() {
        for op in OPERATIONS {
            assert!(
                DISPATCH.iter().any(|(_, ops)| ops.contains(op)),
                "{op} has no subcommand"
            );
        }
    }

    #[test]
    fn dispatch_table_matches_the_parser() {
        let cmd = Cli::command();
        let mut parsed: Vec<&str> = cmd.get_subcommands().map(|c| c.get_name()).collect();
        let mut listed: Vec<&str> = DISPATCH.iter().map(|(n, _)| *n).collect();
        parsed.sort();
        listed.sort();
        assert_eq!(parsed, listed);
    }

    #[test]
    fn unknown_subcommand_is_a_usage_error() {
        let (mut out, mut err) = (Vec::new(), Vec::new());
        assert_eq!(run(["homeo", "frobnicate"], &mut out, &mut err), 2);
        assert!(!err.is_empty());
    }

    #[test]
    fn help_goes_to_stdout() {
        let (mut out, mut err) = (Vec::new(), Vec::new());
        assert_eq!(run(["homeo", "--help"], &mut out, &mut err), 0);
        assert!(String::from_utf8(out).unwrap().contains("scan"));
    }

    #[test]
    fn scan_reports_a_constant_degree() {
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let code = run(
            ["homeo", "scan", "--space", "circle:1", "--eps", "3/10,1/10,3/100"],
            &mut out,
            &mut err,
        );
        assert_eq!(code, 0, "{}", String::from_utf8_lossy(&err));
        let report: serde_json::Value = serde_json::from_slice(&out).unwrap();
        assert_eq!(report["max_degree_constant"], serde_json::Value::Bool(true));
        assert_eq!(report["rows"].as_array().unwrap().len(), 3);
    }
}
