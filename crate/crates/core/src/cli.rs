//! The `epicheck` command line.
//!
//! Exit codes: 0 pass, 1 fail (or an invalid game for `validate`), 2 input
//! error, 3 tremble search budget exhausted, 4 internal inconsistency
//! (routes disagree or a proved bound fails).

use std::io::{Read, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::epistemic::{canonical_model, ck_rationality_strategic, ExtensiveModel, Mode, ModelChecker};
use crate::error::Error;
use crate::field::NonstdNum;
use crate::format::{CorrelatedDoc, GameFile, MixedDoc, ModelDoc, ProfileDoc};
use crate::game::{validate, Game, StrategicGame, ValidationReport};
use crate::strategy::BehavioralProfile;
use crate::verify::{self, Budget, Concept, Counterexample, DeviationDoc, Route};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;
pub const EXIT_INTERNAL: i32 = 4;

#[derive(Debug, Parser)]
#[command(name = "epicheck", version, about = "Verify game-theoretic equilibria with exact infinitesimal arithmetic")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check that a game file is well formed (and has perfect recall).
    Validate {
        /// Game file, or `-` for stdin.
        game: PathBuf,
    },
    /// Verify a candidate against an equilibrium concept.
    Check {
        #[arg(value_enum)]
        concept: ConceptArg,
        game: PathBuf,
        /// Profile file; optional only for `rationalizable`.
        profile: Option<PathBuf>,
        #[command(flatten)]
        tremble: TrembleArgs,
        /// Also run the epistemic route and cross-check it.
        #[arg(long)]
        epistemic: bool,
        /// Search for a tremble instead of using a given one.
        #[arg(long, conflicts_with_all = ["tremble", "uniform_tremble"])]
        search: bool,
        /// Largest exponent tried by `--search`.
        #[arg(long, default_value_t = 2, requires = "search")]
        max_exp: u32,
    },
    /// Epistemic models.
    #[command(subcommand)]
    Model(ModelCommand),
}

#[derive(Debug, Subcommand)]
pub enum ModelCommand {
    /// Emit the canonical model of a tremble.
    Build {
        game: PathBuf,
        profile: Option<PathBuf>,
        #[command(flatten)]
        tremble: TrembleArgs,
    },
    /// Check that (local) ε-rationality holds at every state of a model.
    CheckCkr {
        game: PathBuf,
        model: PathBuf,
        /// Standard profile; defaults to the standard part of the tremble.
        profile: Option<PathBuf>,
        #[command(flatten)]
        tremble: TrembleArgs,
        #[arg(long, value_enum, default_value_t = ModeArg::Global)]
        mode: ModeArg,
        /// Tolerance: a rational `p/q`, `eps` (or `ε`), or a JSON number form.
        #[arg(long, default_value = "0")]
        eps: String,
    },
}

#[derive(Debug, Args)]
pub struct TrembleArgs {
    /// Completely mixed profile file to use as the tremble.
    #[arg(long, conflicts_with = "uniform_tremble")]
    pub tremble: Option<PathBuf>,
    /// Use the uniform ε-tremble of the profile (the default).
    #[arg(long)]
    pub uniform_tremble: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ConceptArg {
    Nash,
    Correlated,
    Rationalizable,
    Perfect,
    QuasiPerfect,
    Sequential,
}

impl From<ConceptArg> for Concept {
    fn from(c: ConceptArg) -> Concept {
        match c {
            ConceptArg::Nash => Concept::Nash,
            ConceptArg::Correlated => Concept::Correlated,
            ConceptArg::Rationalizable => Concept::Rationalizable,
            ConceptArg::Perfect => Concept::Perfect,
            ConceptArg::QuasiPerfect => Concept::QuasiPerfect,
            ConceptArg::Sequential => Concept::Sequential,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Local,
    Global,
}

/// Why a command could not produce a verdict.
#[derive(Debug)]
enum Failure {
    /// Already carries its `path:line:col:` location.
    Parse(String),
    Input(String),
    Exhausted(String),
    Internal(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::BudgetExhausted => Failure::Exhausted(e.to_string()),
            Error::RouteDisagreement(_) | Error::BoundViolation(_) => Failure::Internal(e.to_string()),
            other => Failure::Input(other.to_string()),
        }
    }
}

/// Reads files, with `-` meaning stdin (at most once per invocation).
struct Inputs<'a> {
    stdin: &'a mut dyn Read,
    stdin_used: bool,
}

impl Inputs<'_> {
    fn text(&mut self, path: &PathBuf) -> Result<(String, String), Failure> {
        if path.as_os_str() == "-" {
            if self.stdin_used {
                return Err(Failure::Input("stdin ('-') can be used for only one input".into()));
            }
            self.stdin_used = true;
            let mut s = String::new();
            self.stdin.read_to_string(&mut s).map_err(|e| Failure::Input(format!("<stdin>: {e}")))?;
            return Ok(("<stdin>".into(), s));
        }
        let name = path.display().to_string();
        let s = std::fs::read_to_string(path).map_err(|e| Failure::Input(format!("{name}: {e}")))?;
        Ok((name, s))
    }

    fn json<T: serde::de::DeserializeOwned>(&mut self, path: &PathBuf) -> Result<T, Failure> {
        let (name, text) = self.text(path)?;
        serde_json::from_str(&text).map_err(|e| {
            let msg = e.to_string();
            let msg = msg.rsplit_once(" at line ").map_or(msg.as_str(), |(m, _)| m);
            Failure::Parse(format!("{name}:{}:{}: {msg}", e.line(), e.column()))
        })
    }
}

#[allow(clippy::large_enum_variant)]
enum LoadedGame {
    Extensive(Game),
    Strategic(StrategicGame),
}

fn load_game(inputs: &mut Inputs, path: &PathBuf) -> Result<LoadedGame, Failure> {
    Ok(match inputs.json::<GameFile>(path)? {
        GameFile::Extensive(tree) => LoadedGame::Extensive(Game::new(tree)?),
        GameFile::Strategic(spec) => LoadedGame::Strategic(StrategicGame::new(&spec)?),
    })
}

fn emit<T: Serialize>(out: &mut dyn Write, value: &T) -> Result<(), Failure> {
    let text = serde_json::to_string_pretty(value).map_err(|e| Failure::Internal(e.to_string()))?;
    writeln!(out, "{text}").map_err(|e| Failure::Internal(e.to_string()))
}

fn required<'p>(profile: &'p Option<PathBuf>, what: &str) -> Result<&'p PathBuf, Failure> {
    profile.as_ref().ok_or_else(|| Failure::Input(format!("{what} needs a profile file")))
}

/// `(sigma, trem)` from the profile and tremble flags.
fn profiles(
    inputs: &mut Inputs,
    game: &Game,
    profile: &Option<PathBuf>,
    tremble: &TrembleArgs,
) -> Result<(BehavioralProfile, BehavioralProfile), Failure> {
    let sigma = match profile {
        Some(p) => Some(inputs.json::<ProfileDoc>(p)?.to_profile(game)?),
        None => None,
    };
    let trem = match &tremble.tremble {
        Some(t) => Some(inputs.json::<ProfileDoc>(t)?.to_profile(game)?),
        None => None,
    };
    Ok(match (sigma, trem) {
        (Some(s), Some(t)) => (s, t),
        (Some(s), None) => {
            let t = s.uniform_tremble()?;
            (s, t)
        }
        (None, Some(t)) => (t.standard_part()?, t),
        (None, None) => return Err(Failure::Input("give a profile or a --tremble file".into())),
    })
}

#[derive(Serialize)]
struct StrategicReport {
    ok: bool,
    players: usize,
    profiles: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    error: Option<String>,
}

fn cmd_validate(inputs: &mut Inputs, out: &mut dyn Write, game: &PathBuf) -> Result<i32, Failure> {
    match inputs.json::<GameFile>(game)? {
        GameFile::Extensive(tree) => {
            let report: ValidationReport = validate(&tree);
            emit(out, &report)?;
            Ok(if report.is_ok() { EXIT_PASS } else { EXIT_FAIL })
        }
        GameFile::Strategic(spec) => {
            let (ok, profiles, error) = match StrategicGame::new(&spec) {
                Ok(g) => (true, g.profiles().len(), None),
                Err(e) => (false, 0, Some(e.to_string())),
            };
            emit(out, &StrategicReport { ok, players: spec.players, profiles, error })?;
            Ok(if ok { EXIT_PASS } else { EXIT_FAIL })
        }
    }
}

#[derive(Serialize)]
struct Exhausted {
    concept: Concept,
    budget_exhausted: bool,
    max_exponent: u32,
}

#[allow(clippy::too_many_arguments)]
fn cmd_check(
    inputs: &mut Inputs,
    out: &mut dyn Write,
    concept: Concept,
    game: &PathBuf,
    profile: &Option<PathBuf>,
    tremble: &TrembleArgs,
    epistemic: bool,
    search: Option<u32>,
) -> Result<i32, Failure> {
    let route = if epistemic { Route::Epistemic } else { Route::Direct };
    let game = load_game(inputs, game)?;
    let verdict = match (&game, concept) {
        (LoadedGame::Strategic(g), Concept::Nash) => {
            let sigma = inputs.json::<MixedDoc>(required(profile, "nash")?)?.to_mixed(g)?;
            verify::check_nash(g, &sigma, route)?
        }
        (LoadedGame::Strategic(g), Concept::Correlated) => {
            let eta = inputs.json::<CorrelatedDoc>(required(profile, "correlated")?)?.to_dist(g)?;
            verify::check_correlated(g, &eta, route)?
        }
        (LoadedGame::Strategic(g), Concept::Rationalizable) => {
            let sigma = match profile {
                Some(p) => Some(inputs.json::<MixedDoc>(p)?.to_mixed(g)?),
                None => None,
            };
            verify::check_rationalizable(g, sigma.as_ref(), route)?
        }
        (LoadedGame::Extensive(g), c) if !c.is_strategic() => {
            if let Some(max_exponent) = search {
                let sigma = inputs.json::<ProfileDoc>(required(profile, "--search")?)?.to_profile(g)?;
                let budget = Budget { max_exponent, ..Budget::default() };
                match verify::search_tremble(g, &sigma, c, &budget) {
                    Ok(found) => {
                        let verdict = match route {
                            Route::Direct => found.verdict,
                            Route::Epistemic => run_extensive(g, c, &sigma, &found.tremble, route)?,
                        };
                        emit(out, &verdict)?;
                        return Ok(if verdict.pass { EXIT_PASS } else { EXIT_FAIL });
                    }
                    Err(Error::BudgetExhausted) => {
                        emit(out, &Exhausted { concept: c, budget_exhausted: true, max_exponent })?;
                        return Ok(EXIT_BUDGET);
                    }
                    Err(e) => return Err(e.into()),
                }
            }
            let (sigma, trem) = profiles(inputs, g, profile, tremble)?;
            run_extensive(g, c, &sigma, &trem, route)?
        }
        (LoadedGame::Extensive(_), c) => return Err(Error::FormMismatch { concept: c.to_string(), form: "extensive" }.into()),
        (LoadedGame::Strategic(_), c) => return Err(Error::FormMismatch { concept: c.to_string(), form: "strategic" }.into()),
    };
    emit(out, &verdict)?;
    Ok(if verdict.pass { EXIT_PASS } else { EXIT_FAIL })
}

fn run_extensive(
    g: &Game,
    concept: Concept,
    sigma: &BehavioralProfile,
    trem: &BehavioralProfile,
    route: Route,
) -> Result<verify::Verdict, Error> {
    match concept {
        Concept::Perfect => verify::check_perfect(g, sigma, trem, route),
        Concept::QuasiPerfect => verify::check_quasi_perfect(g, sigma, trem, route),
        _ => verify::check_sequential(g, sigma, trem, route),
    }
}

/// Output of `model check-ckr`.
#[derive(Serialize)]
struct CkOutput {
    pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    mode: Option<Mode>,
    #[serde(skip_serializing_if = "Option::is_none")]
    eps: Option<NonstdNum>,
    states: usize,
    #[serde(skip_serializing_if = "std::ops::Not::not")]
    degenerate: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    failure: Option<Counterexample>,
}

fn parse_eps(text: &str) -> Result<NonstdNum, Failure> {
    let t = text.trim();
    if t.starts_with('[') || t.starts_with('{') {
        return serde_json::from_str(t).map_err(|e| Failure::Input(format!("--eps: {e}")));
    }
    t.parse().map_err(|e: Error| Failure::Input(format!("--eps: {e}")))
}

fn cmd_model(inputs: &mut Inputs, out: &mut dyn Write, cmd: &ModelCommand) -> Result<i32, Failure> {
    match cmd {
        ModelCommand::Build { game, profile, tremble } => {
            let LoadedGame::Extensive(g) = load_game(inputs, game)? else {
                return Err(Failure::Input("model build needs an extensive-form game".into()));
            };
            let (_, trem) = profiles(inputs, &g, profile, tremble)?;
            if !trem.is_completely_mixed() {
                return Err(Error::NotCompletelyMixed("the tremble must give every action positive probability".into()).into());
            }
            emit(out, &ModelDoc::from_extensive(&g, &canonical_model(&g, &trem)))?;
            Ok(EXIT_PASS)
        }
        ModelCommand::CheckCkr { game, model, profile, tremble, mode, eps } => {
            let eps = parse_eps(eps)?;
            match load_game(inputs, game)? {
                LoadedGame::Strategic(g) => {
                    let m = inputs.json::<ModelDoc>(model)?.to_strategic(&g)?;
                    let report = ck_rationality_strategic(&g, &m)?;
                    let failure = report.failure.as_ref().map(|f| Counterexample {
                        player: f.player,
                        infoset: None,
                        state: Some(m.states()[f.state].name.clone()),
                        played: Some(g.strategies(f.player)[f.check.played].clone()),
                        deviation: Some(DeviationDoc::Strategy(g.strategies(f.player)[f.check.best].clone())),
                        shortfall: Some(f.check.gain.clone()),
                        round: None,
                    });
                    let output =
                        CkOutput { pass: report.pass, mode: None, eps: None, states: m.states().len(), degenerate: report.degenerate, failure };
                    emit(out, &output)?;
                    Ok(if report.pass { EXIT_PASS } else { EXIT_FAIL })
                }
                LoadedGame::Extensive(g) => {
                    let m: ExtensiveModel = inputs.json::<ModelDoc>(model)?.to_extensive(&g)?;
                    let (sigma, trem) = profiles(inputs, &g, profile, tremble)?;
                    let mode = match mode {
                        ModeArg::Local => Mode::Local,
                        ModeArg::Global => Mode::Global,
                    };
                    let report = ModelChecker::new(&g, &m, &trem, &sigma)?.ck(mode, &eps);
                    let failure = report.failure.as_ref().map(|f| {
                        let moves = f.shortfall.deviation.labels(&g).into_iter().map(|(i, a)| (i.to_string(), a.to_string())).collect();
                        Counterexample {
                            player: f.player,
                            infoset: Some(g.infoset(f.shortfall.infoset).name.clone()),
                            state: Some(m.states()[f.state].name.clone()),
                            played: None,
                            deviation: Some(DeviationDoc::Moves(moves)),
                            shortfall: Some(f.shortfall.amount.clone()),
                            round: None,
                        }
                    });
                    let output = CkOutput {
                        pass: report.pass,
                        mode: Some(mode),
                        eps: Some(eps),
                        states: m.states().len(),
                        degenerate: report.degenerate,
                        failure,
                    };
                    emit(out, &output)?;
                    Ok(if report.pass { EXIT_PASS } else { EXIT_FAIL })
                }
            }
        }
    }
}

/// Runs one invocation; `args` includes the program name.
pub fn run<I, T>(args: I, stdin: &mut dyn Read, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            if e.use_stderr() {
                let _ = write!(err, "{}", e.render());
                return EXIT_INPUT;
            }
            let _ = write!(out, "{}", e.render());
            return EXIT_PASS;
        }
    };
    let mut inputs = Inputs { stdin, stdin_used: false };
    let result = match &cli.command {
        Command::Validate { game } => cmd_validate(&mut inputs, out, game),
        Command::Check { concept, game, profile, tremble, epistemic, search, max_exp } => cmd_check(
            &mut inputs,
            out,
            (*concept).into(),
            game,
            profile,
            tremble,
            *epistemic,
            search.then_some(*max_exp),
        ),
        Command::Model(cmd) => cmd_model(&mut inputs, out, cmd),
    };
    match result {
        Ok(code) => code,
        Err(Failure::Parse(m)) => {
            let _ = writeln!(err, "{m}");
            EXIT_INPUT
        }
        Err(Failure::Input(m)) => {
            let _ = writeln!(err, "error: {m}");
            EXIT_INPUT
        }
        Err(Failure::Exhausted(m)) => {
            let _ = writeln!(err, "error: {m}");
            EXIT_BUDGET
        }
        Err(Failure::Internal(m)) => {
            let _ = writeln!(err, "internal error: {m}");
            EXIT_INTERNAL
        }
    }
}
