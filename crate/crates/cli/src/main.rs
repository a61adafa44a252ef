use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, Context};
use clap::{Args, Parser, Subcommand};

use chtest_core::distiller::{distill_delta, distill_initial};
use chtest_core::frontend::{load_snapshot_dir, FrontendError, Program};
use chtest_core::model::{ChangeId, ChangeModel, Resolution, ResolutionMode, SubjectId};
use chtest_core::mutator::{evaluate, generate_production_mutants, EvaluationConfig, MutationError};
use chtest_core::runtime::{discover_tests, run_suite, RunConfig, TestStatus};
use chtest_core::selector::{select_for_class, select_relevant_tests, TestConfig};

/// Change-based test selection for MiniOO code bases.
#[derive(Parser)]
#[command(name = "chtest", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Turn one or two source snapshots into a change-model document.
    Distill {
        /// Snapshot directories: `NEW`, or `OLD NEW` to append the difference.
        #[arg(required = true, num_args = 1..=2, value_name = "DIR")]
        dirs: Vec<PathBuf>,
        #[arg(long, default_value = "static")]
        mode: ResolutionMode,
        /// Model `new C(..)` expressions as constructor invocations.
        #[arg(long)]
        constructors: bool,
        /// Existing model describing OLD, extended instead of re-distilling OLD.
        #[arg(long, value_name = "MODEL", requires = "dirs")]
        base: Option<PathBuf>,
        /// Output file; standard output when omitted.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Print the tests relevant to some changes, sorted, one per line.
    Select {
        #[arg(long)]
        model: PathBuf,
        /// Change ids from the model.
        #[arg(long = "change", value_name = "ID", conflicts_with = "class")]
        changes: Vec<u64>,
        /// Print the test classes relevant to a modification of this class.
        #[arg(long)]
        class: Option<String>,
        #[command(flatten)]
        patterns: Patterns,
        /// Group the answer by change.
        #[arg(long)]
        per_change: bool,
    },
    /// Run the test suite of a snapshot.
    Test {
        dir: PathBuf,
        #[command(flatten)]
        patterns: Patterns,
    },
    /// List the mutants of a snapshot's production classes.
    Mutants {
        dir: PathBuf,
        #[command(flatten)]
        patterns: Patterns,
    },
    /// Compare per-class reduced suites of two modes by mutation testing.
    Evaluate {
        dir: PathBuf,
        #[arg(long, default_value = "static")]
        mode_a: ResolutionMode,
        #[arg(long, default_value = "poly")]
        mode_b: ResolutionMode,
        #[arg(long)]
        constructors: bool,
        #[command(flatten)]
        patterns: Patterns,
        /// CSV report; standard output when omitted.
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Plain-text summary; standard output when the CSV goes to a file, standard error otherwise.
        #[arg(long)]
        summary: Option<PathBuf>,
    },
}

#[derive(Args)]
struct Patterns {
    /// Regex a test method name must match.
    #[arg(long, value_name = "REGEX")]
    tests_pattern: Option<String>,
    /// Regex a test class name must match.
    #[arg(long, value_name = "REGEX")]
    test_class_pattern: Option<String>,
}

impl Patterns {
    fn config(&self) -> Result<TestConfig, Failure> {
        TestConfig::with_patterns(self.test_class_pattern.as_deref(), self.tests_pattern.as_deref())
            .map_err(|e| Failure::input(anyhow!(e)))
    }
}

struct Failure {
    code: u8,
    error: anyhow::Error,
}

impl Failure {
    fn input(error: anyhow::Error) -> Self {
        Failure { code: 2, error }
    }
}

impl From<anyhow::Error> for Failure {
    fn from(error: anyhow::Error) -> Self {
        Failure { code: 1, error }
    }
}

fn load(dir: &Path) -> Result<Program, Failure> {
    let snapshot = load_snapshot_dir(dir).map_err(|e| match e {
        FrontendError::Io(io) => Failure::input(anyhow!(io).context(format!("cannot read {}", dir.display()))),
        other => Failure::input(anyhow!(other).context(format!("in snapshot {}", dir.display()))),
    })?;
    for w in &snapshot.warnings {
        eprintln!("warning: {w}");
    }
    Ok(snapshot.program)
}

fn load_model(path: &Path) -> Result<ChangeModel, Failure> {
    let text = fs::read_to_string(path)
        .with_context(|| format!("cannot read {}", path.display()))
        .map_err(Failure::input)?;
    ChangeModel::from_json(&text)
        .with_context(|| format!("in {}", path.display()))
        .map_err(Failure::input)
}

fn emit(output: Option<&Path>, text: &str) -> anyhow::Result<()> {
    match output {
        Some(path) => fs::write(path, text).with_context(|| format!("cannot write {}", path.display())),
        None => std::io::stdout().write_all(text.as_bytes()).context("cannot write to standard output"),
    }
}

/// `method:C.m/0` → `C.m`; `class:C` → `C`.
fn display(id: &SubjectId) -> String {
    if let Some(c) = id.class_name() {
        return c.to_string();
    }
    let s = id.as_str();
    let s = s.strip_prefix("method:").unwrap_or(s);
    s.rsplit_once('/').map_or(s, |(name, _)| name).to_string()
}

fn lines<'a>(ids: impl IntoIterator<Item = &'a SubjectId>) -> String {
    ids.into_iter().map(|t| format!("{}\n", display(t))).collect()
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Distill {
            dirs,
            mode,
            constructors,
            base,
            output,
        } => {
            let resolution = Resolution::new(mode).with_constructors(constructors);
            let model = match dirs.as_slice() {
                [new] => {
                    if base.is_some() {
                        return Err(Failure::input(anyhow!("--base needs both OLD and NEW directories")));
                    }
                    distill_initial(&load(new)?, resolution).map_err(|e| Failure::input(e.into()))?
                }
                [old, new] => {
                    let old_program = load(old)?;
                    let mut model = match &base {
                        Some(path) => load_model(path)?,
                        None => distill_initial(&old_program, resolution).map_err(|e| Failure::input(e.into()))?,
                    };
                    distill_delta(&mut model, &old_program, &load(new)?).map_err(|e| Failure::input(e.into()))?;
                    model
                }
                _ => unreachable!("clap enforces one or two directories"),
            };
            emit(output.as_deref(), &model.to_json())?;
        }
        Command::Select {
            model,
            changes,
            class,
            patterns,
            per_change,
        } => {
            let cfg = patterns.config()?;
            let model = load_model(&model)?;
            if let Some(class) = class {
                let tests = select_for_class(&model, &SubjectId::class(&class), &cfg).map_err(|e| Failure::input(e.into()))?;
                emit(None, &lines(&tests))?;
                return Ok(());
            }
            let mut selected = Vec::new();
            for id in changes {
                let change = model
                    .change(ChangeId(id))
                    .ok_or_else(|| Failure::input(anyhow!("unknown change {id}")))?;
                selected.push(change.clone());
            }
            let result = select_relevant_tests(&model, &selected, &cfg);
            for id in &result.diagnostics.unlocated {
                eprintln!("warning: change {id} could not be located in any method");
            }
            let text = if per_change {
                result
                    .per_change
                    .iter()
                    .map(|(id, tests)| {
                        let names: Vec<String> = tests.iter().map(display).collect();
                        format!("{id}: {}", names.join(" ")).trim_end().to_string() + "\n"
                    })
                    .collect()
            } else {
                lines(&result.all_tests())
            };
            emit(None, &text)?;
        }
        Command::Test { dir, patterns } => {
            let cfg = RunConfig {
                tests: patterns.config()?,
                ..RunConfig::from_env()
            };
            let program = load(&dir)?;
            let tests = discover_tests(&program, &cfg.tests);
            let outcomes = run_suite(&program, &tests, &cfg);
            let mut text = String::new();
            for o in &outcomes {
                text.push_str(&format!("{} {}", o.status, display(&o.test)));
                if let Some(m) = &o.message {
                    text.push_str(&format!(": {m}"));
                }
                text.push('\n');
            }
            emit(None, &text)?;
            let failing = outcomes.iter().filter(|o| o.status != TestStatus::Pass).count();
            if failing > 0 {
                return Err(Failure {
                    code: 3,
                    error: anyhow!("{failing} of {} tests did not pass", outcomes.len()),
                });
            }
        }
        Command::Mutants { dir, patterns } => {
            let cfg = patterns.config()?;
            let program = load(&dir)?;
            let text: String = generate_production_mutants(&program, &cfg)
                .iter()
                .map(|m| format!("{}\t{}\t{}\t{}\t{}\n", m.id, display(&m.method), m.span, m.operator, m.description))
                .collect();
            emit(None, &text)?;
        }
        Command::Evaluate {
            dir,
            mode_a,
            mode_b,
            constructors,
            patterns,
            output,
            summary,
        } => {
            let cfg = EvaluationConfig {
                mode_a,
                mode_b,
                include_constructors: constructors,
                run: RunConfig {
                    tests: patterns.config()?,
                    ..RunConfig::from_env()
                },
            };
            let program = load(&dir)?;
            let report = evaluate(&program, &cfg).map_err(|e| match e {
                MutationError::BaselineFailure(_) => Failure {
                    code: 3,
                    error: e.into(),
                },
                other => Failure::from(anyhow::Error::from(other)),
            })?;
            emit(output.as_deref(), &report.to_csv())?;
            match (summary, &output) {
                (Some(path), _) => emit(Some(&path), &report.summary())?,
                (None, Some(_)) => emit(None, &report.summary())?,
                (None, None) => eprint!("{}", report.summary()),
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {:#}", f.error);
            ExitCode::from(f.code)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;

    #[test]
    fn display_names() {
        assert_eq!(display(&SubjectId::from("method:FooBarTest.fooTest/0")), "FooBarTest.fooTest");
        assert_eq!(display(&SubjectId::class("FooBarTest")), "FooBarTest");
    }

    #[test]
    fn lines_are_sorted() {
        let s: BTreeSet<SubjectId> = [SubjectId::from("method:B.b/0"), SubjectId::from("method:A.a/0")].into();
        assert_eq!(lines(&s), "A.a\nB.b\n");
    }
}
