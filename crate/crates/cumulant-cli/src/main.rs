//! Command-line surface for the cumulant engine: outcome tables, equilibrium
//! solving, scripted replays, conversions, sums, comparisons, and lab scans.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use cumulant::algebra::{
    compare_refute, disjunctive_sum, np_compare, np_outcome_classes, np_sum_left_wins, negate,
    NpPosition,
};
use cumulant::doc::{
    self, csv_critical_sets, csv_np_table, csv_si_partizan, csv_si_symmetric, csv_values,
    csv_zs_partizan, csv_zs_symmetric, parse_document, parse_script, Document, EfgDoc,
};
use cumulant::efg::{
    backward_induction, cg_to_efg, efg_to_cg_cyclic, efg_to_cg_preorder, solve_grounded, TieMode,
    TiePolicy,
};
use cumulant::game::{ActionVector, GroundedPosition, Player};
use cumulant::lab::{
    brute_force_pspe, critical_set_scan, greedy_report, pareto_scan, CriticalSetScanParams,
};
use cumulant::outcome::{
    outcome_si_partizan, outcome_si_symmetric, outcome_zs_partizan, outcome_zs_symmetric,
    RecursiveOutcome,
};
use cumulant::{Error, RulesetSpec};

const DEFAULT_NODE_BUDGET: usize = 5_000_000;

#[derive(Parser)]
#[command(name = "cumulant", version, about = "Cumulative game engine")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
    Text,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Variant {
    Zs,
    Si,
    ZsPartizan,
    SiPartizan,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Tie {
    Antagonistic,
    Friendly,
}

impl From<Tie> for TieMode {
    fn from(t: Tie) -> TieMode {
        match t {
            Tie::Antagonistic => TieMode::Antagonistic,
            Tie::Friendly => TieMode::Friendly,
        }
    }
}

#[derive(Args)]
struct OutputOpts {
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
    /// Write to this file instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Compute a subtraction-game outcome table.
    Outcome {
        /// Ruleset preset; only `fixed` is table-computable.
        #[arg(long, default_value = "fixed")]
        preset: String,
        /// Comma-separated subtraction set (player 1, or both if shared).
        #[arg(long, value_delimiter = ',')]
        sets: Vec<u32>,
        /// Player 2's set for partizan variants.
        #[arg(long, value_delimiter = ',')]
        sets2: Option<Vec<u32>>,
        #[arg(long, value_enum)]
        variant: Variant,
        #[arg(long)]
        max_heap: u32,
        #[arg(long, value_enum, default_value = "antagonistic")]
        tie: Tie,
        #[command(flatten)]
        output: OutputOpts,
    },
    /// Solve a game document for its equilibrium value and realized line.
    Pspe {
        #[arg(long)]
        file: PathBuf,
        #[arg(long, value_enum, default_value = "antagonistic")]
        tie: Tie,
        /// Use the naive whole-tree oracle instead of the memoized solver.
        #[arg(long)]
        brute_force: bool,
        #[command(flatten)]
        output: OutputOpts,
    },
    /// Replay a scripted line of play and print the transcript.
    Play {
        #[arg(long)]
        file: PathBuf,
        #[arg(long)]
        script: PathBuf,
        #[command(flatten)]
        output: OutputOpts,
    },
    /// Convert between cumulative games and extensive form.
    Convert {
        #[arg(long)]
        file: PathBuf,
        /// Target representation: `efg`, `cg-preorder`, or `cg-cyclic`.
        #[arg(long)]
        to: String,
        #[command(flatten)]
        output: OutputOpts,
    },
    /// Disjunctive sum of game documents; prints the summed outcome rows.
    Sum {
        /// Game documents, one per component.
        #[arg(long, required = true)]
        file: Vec<PathBuf>,
        #[arg(long, value_enum, default_value = "antagonistic")]
        tie: Tie,
        #[command(flatten)]
        output: OutputOpts,
    },
    /// Bounded refutation of `G >= H` for subtraction positions.
    Compare {
        #[arg(long, value_delimiter = ',')]
        sets: Vec<u32>,
        #[arg(long, value_delimiter = ',')]
        sets2: Option<Vec<u32>>,
        #[arg(long)]
        heap_g: u32,
        #[arg(long)]
        heap_h: u32,
        #[arg(long, default_value = "1")]
        player: u8,
        #[arg(long, value_enum, default_value = "antagonistic")]
        tie: Tie,
        /// Largest side-game heap tried.
        #[arg(long, default_value = "8")]
        bound: u32,
        #[command(flatten)]
        output: OutputOpts,
    },
    /// Normal-play outcome classes and exact comparison.
    Np {
        /// Left's subtraction set.
        #[arg(long, value_delimiter = ',')]
        sets: Vec<u32>,
        /// Right's subtraction set (defaults to Left's).
        #[arg(long, value_delimiter = ',')]
        sets2: Option<Vec<u32>>,
        #[arg(long)]
        max_heap: Option<u32>,
        /// Compare two heaps exactly: `--ge HEAP_G,HEAP_H`.
        #[arg(long, value_delimiter = ',', num_args = 2)]
        ge: Option<Vec<u32>>,
        #[command(flatten)]
        output: OutputOpts,
    },
    /// Empirical scans.
    Lab {
        #[command(subcommand)]
        task: LabTask,
    },
}

#[derive(Subcommand)]
enum LabTask {
    /// Census of critical subtraction sets.
    Census {
        #[arg(long)]
        max_value: u32,
        #[arg(long, value_delimiter = ',', default_value = "2,3")]
        sizes: Vec<usize>,
        #[arg(long)]
        heap_bound: u32,
        #[arg(long, value_enum, default_value = "antagonistic")]
        tie: Tie,
        #[command(flatten)]
        output: OutputOpts,
    },
    /// Search for a Pareto-dominating play line.
    Pareto {
        #[arg(long)]
        file: PathBuf,
        #[arg(long, value_enum, default_value = "antagonistic")]
        tie: Tie,
        #[command(flatten)]
        output: OutputOpts,
    },
    /// Where greedy play last disagrees with the self-interest optimum.
    Greedy {
        #[arg(long)]
        max_value: u32,
        #[arg(long, value_delimiter = ',', default_value = "2")]
        sizes: Vec<usize>,
        #[arg(long)]
        heap_bound: u32,
        #[arg(long, value_enum, default_value = "antagonistic")]
        tie: Tie,
        #[command(flatten)]
        output: OutputOpts,
    },
}

fn node_budget() -> usize {
    std::env::var("CUMULANT_BUDGET")
        .ok()
        .and_then(|v| v.parse().ok())
        .unwrap_or(DEFAULT_NODE_BUDGET)
}

fn emit(output: &OutputOpts, text: String) -> Result<(), Error> {
    match &output.out {
        Some(path) => std::fs::write(path, text).map_err(|e| Error::Validation {
            field: "--out".into(),
            message: e.to_string(),
        }),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn emit_json<T: Serialize>(output: &OutputOpts, value: &T) -> Result<(), Error> {
    emit(output, doc::to_json(value)?)
}

fn load_game_doc(path: &PathBuf) -> Result<doc::GameDoc, Error> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Validation {
        field: "--file".into(),
        message: format!("{}: {e}", path.display()),
    })?;
    match parse_document(&text)? {
        Document::CumulativeGame(g) => Ok(g),
        Document::Efg(_) => Err(Error::Validation {
            field: "kind".into(),
            message: "expected a cumulative_game document".into(),
        }),
    }
}

fn load_any_doc(path: &PathBuf) -> Result<Document, Error> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Validation {
        field: "--file".into(),
        message: format!("{}: {e}", path.display()),
    })?;
    parse_document(&text)
}

fn fmt_vec(v: &[f64]) -> String {
    v.iter()
        .map(|x| {
            if *x == x.trunc() {
                format!("{}", *x as i64)
            } else {
                format!("{x}")
            }
        })
        .collect::<Vec<_>>()
        .join(" ")
}

fn fmt_line(line: &[ActionVector]) -> String {
    line.iter()
        .map(|a| format!("{a}"))
        .collect::<Vec<_>>()
        .join(", ")
}

fn run(cli: Cli) -> Result<(), Error> {
    match cli.command {
        Command::Outcome { preset, sets, sets2, variant, max_heap, tie, output } => {
            if preset != "fixed" {
                return Err(Error::UnknownPreset(preset));
            }
            if sets.is_empty() {
                return Err(Error::Validation {
                    field: "--sets".into(),
                    message: "at least one element required".into(),
                });
            }
            let s2 = sets2.clone().unwrap_or_else(|| sets.clone());
            match variant {
                Variant::Zs => {
                    let t = outcome_zs_symmetric(&sets, max_heap);
                    match output.format {
                        Format::Json => emit_json(&output, &t),
                        _ => emit(&output, csv_zs_symmetric(&t)),
                    }
                }
                Variant::Si => {
                    let t = outcome_si_symmetric(&sets, tie.into(), max_heap);
                    match output.format {
                        Format::Json => emit_json(&output, &t),
                        _ => emit(&output, csv_si_symmetric(&t)),
                    }
                }
                Variant::ZsPartizan => {
                    let t = outcome_zs_partizan(&sets, &s2, max_heap);
                    match output.format {
                        Format::Json => emit_json(&output, &t),
                        _ => emit(&output, csv_zs_partizan(&t)),
                    }
                }
                Variant::SiPartizan => {
                    let t = outcome_si_partizan(&sets, &s2, tie.into(), max_heap);
                    match output.format {
                        Format::Json => emit_json(&output, &t),
                        _ => emit(&output, csv_si_partizan(&t)),
                    }
                }
            }
        }
        Command::Pspe { file, tie, brute_force, output } => {
            let (game, g0) = load_game_doc(&file)?.build()?;
            let tie = TiePolicy { mode: tie.into(), preferences: None };
            let (value, line) = if brute_force {
                brute_force_pspe(&game, &g0, &tie, node_budget())?
            } else {
                let solved = solve_grounded(&game, &g0, &tie, node_budget())?;
                (solved.value, solved.line)
            };
            #[derive(Serialize)]
            struct Out {
                value: Vec<f64>,
                line: Vec<Vec<i64>>,
            }
            match output.format {
                Format::Json => emit_json(
                    &output,
                    &Out { value, line: line.into_iter().map(|a| a.delta).collect() },
                ),
                Format::Csv => emit(&output, csv_values(&value)),
                Format::Text => emit(
                    &output,
                    format!("value: {}\nline: {}\n", fmt_vec(&value), fmt_line(&line)),
                ),
            }
        }
        Command::Play { file, script, output } => {
            let (game, mut g) = load_game_doc(&file)?.build()?;
            let text = std::fs::read_to_string(&script).map_err(|e| Error::Validation {
                field: "--script".into(),
                message: format!("{}: {e}", script.display()),
            })?;
            let script = parse_script(&text)?;
            let mut transcript = String::new();
            for (k, delta) in script.actions.iter().enumerate() {
                let mover = game.current_player(&g);
                let action = ActionVector::new(delta.clone());
                g = game.step(&g, &action)?;
                transcript.push_str(&format!(
                    "move {}: player {} plays {} -> heaps {:?}\n",
                    k + 1,
                    mover,
                    action,
                    g.position.heaps
                ));
            }
            if !game.is_terminal(&g) {
                transcript.push_str("position is not terminal\n");
            }
            let u = game.utilities(&g);
            transcript.push_str(&format!("utilities: {}\n", fmt_vec(&u)));
            match output.format {
                Format::Json => {
                    #[derive(Serialize)]
                    struct Out {
                        heaps: Vec<u32>,
                        terminal: bool,
                        utilities: Vec<f64>,
                    }
                    emit(
                        &output,
                        doc::to_json(&Out {
                            heaps: g.position.heaps.clone(),
                            terminal: game.is_terminal(&g),
                            utilities: u,
                        })?,
                    )
                }
                _ => emit(&output, transcript),
            }
        }
        Command::Convert { file, to, output } => match (load_any_doc(&file)?, to.as_str()) {
            (Document::CumulativeGame(gdoc), "efg") => {
                let (game, g0) = gdoc.build()?;
                let conv = cg_to_efg(&game, &g0, node_budget())?;
                emit_json(&output, &Document::Efg(EfgDoc::from_game(&conv.efg)))
            }
            (Document::Efg(edoc), target @ ("cg-preorder" | "cg-cyclic")) => {
                let efg = edoc.build()?;
                let tie = TiePolicy::antagonistic();
                let before = backward_induction(&efg, &tie)?.root_value(&efg).to_vec();
                #[derive(Serialize)]
                struct Out {
                    method: String,
                    root_heap: u32,
                    embedded_states: usize,
                    inserted_dummies: usize,
                    value_before: Vec<f64>,
                    value_after: Vec<f64>,
                }
                let (root_heap, states, dummies, after) = if target == "cg-preorder" {
                    let emb = efg_to_cg_preorder(&efg)?;
                    let solved = solve_grounded(&emb.game, &emb.start, &tie, node_budget())?;
                    (
                        emb.start.position.heaps[0],
                        emb.tree.states.len(),
                        emb.dummies.len(),
                        solved.value,
                    )
                } else {
                    let emb = efg_to_cg_cyclic(&efg)?;
                    let solved = solve_grounded(&emb.game, &emb.start, &tie, node_budget())?;
                    (
                        emb.start.position.heaps[0],
                        emb.tree.states.len(),
                        emb.dummies.len(),
                        solved.value,
                    )
                };
                emit_json(
                    &output,
                    &Out {
                        method: target.into(),
                        root_heap,
                        embedded_states: states,
                        inserted_dummies: dummies,
                        value_before: before,
                        value_after: after,
                    },
                )
            }
            (_, other) => Err(Error::Validation {
                field: "--to".into(),
                message: format!("unsupported conversion target `{other}` for this document"),
            }),
        },
        Command::Sum { file, tie, output } => {
            let mut components = Vec::new();
            for path in &file {
                let (game, g0) = load_game_doc(path)?.build()?;
                components.push((game, g0.position));
            }
            let sum = disjunctive_sum(components)?;
            let tie = TiePolicy { mode: tie.into(), preferences: None };
            #[derive(Serialize)]
            struct Out {
                heaps: Vec<u32>,
                /// Row per previous player.
                outcome_rows: Vec<Vec<f64>>,
            }
            let n = sum.game.n;
            let rows: Vec<Vec<f64>> = if sum.game.ruleset.cumulation_independent
                && matches!(sum.game.utility, cumulant::UtilityMap::Identity)
            {
                let mut dp = RecursiveOutcome::new(&sum.game, tie.clone())?;
                (1..=n as u8)
                    .map(|p| dp.outcome(&sum.position.heaps, Player(p)))
                    .collect::<Result<_, _>>()?
            } else {
                (1..=n as u8)
                    .map(|p| {
                        solve_grounded(
                            &sum.game,
                            &GroundedPosition::new(sum.position.clone(), Player(p)),
                            &tie,
                            node_budget(),
                        )
                        .map(|s| s.value)
                    })
                    .collect::<Result<_, _>>()?
            };
            match output.format {
                Format::Csv => {
                    let mut text = String::from("previous_player,values\n");
                    for (p, row) in rows.iter().enumerate() {
                        text.push_str(&format!("{},{}\n", p + 1, fmt_vec(row).replace(' ', ";")));
                    }
                    emit(&output, text)
                }
                _ => emit_json(&output, &Out { heaps: sum.position.heaps.clone(), outcome_rows: rows }),
            }
        }
        Command::Compare { sets, sets2, heap_g, heap_h, player, tie, bound, output } => {
            let spec = match sets2 {
                Some(s2) => RulesetSpec::fixed_partizan(sets, s2),
                None => RulesetSpec::fixed_symmetric(sets),
            };
            let cert =
                compare_refute(&spec, heap_g, heap_h, Player(player), tie.into(), bound)?;
            emit_json(&output, &cert)
        }
        Command::Np { sets, sets2, max_heap, ge, output } => {
            let right = sets2.clone().unwrap_or_else(|| sets.clone());
            if let Some(pair) = ge {
                let g = NpPosition { heap: pair[0], left_set: sets.clone(), right_set: right.clone() };
                let h = NpPosition { heap: pair[1], left_set: sets, right_set: right };
                let cert = np_compare(&g, &h);
                #[derive(Serialize)]
                struct Out {
                    certificate: cumulant::algebra::ComparisonCertificate,
                    left_wins_first: bool,
                    left_wins_second: bool,
                }
                let sum = [g, negate(&h)];
                emit_json(
                    &output,
                    &Out {
                        certificate: cert,
                        left_wins_first: np_sum_left_wins(&sum, true),
                        left_wins_second: np_sum_left_wins(&sum, false),
                    },
                )
            } else {
                let x_max = max_heap.ok_or(Error::Validation {
                    field: "--max-heap".into(),
                    message: "required unless --ge is given".into(),
                })?;
                let t = np_outcome_classes(&sets, &right, x_max);
                match output.format {
                    Format::Json => emit_json(&output, &t),
                    _ => emit(&output, csv_np_table(&t)),
                }
            }
        }
        Command::Lab { task } => match task {
            LabTask::Census { max_value, sizes, heap_bound, tie, output } => {
                let report = critical_set_scan(
                    CriticalSetScanParams {
                        max_value,
                        sizes,
                        heap_bound,
                        mode: tie.into(),
                    },
                    None,
                );
                match output.format {
                    Format::Csv => emit(&output, csv_critical_sets(&report)),
                    _ => emit_json(&output, &report),
                }
            }
            LabTask::Pareto { file, tie, output } => {
                let (game, g0) = load_game_doc(&file)?.build()?;
                let tie = TiePolicy { mode: tie.into(), preferences: None };
                let report = pareto_scan(&game, &g0, &tie, node_budget())?;
                emit_json(&output, &report)
            }
            LabTask::Greedy { max_value, sizes, heap_bound, tie, output } => {
                let report = greedy_report(max_value, &sizes, tie.into(), heap_bound);
                emit_json(&output, &report)
            }
        },
    }
}

fn exit_code_for(err: &Error) -> u8 {
    match err {
        Error::BudgetExceeded { .. }
        | Error::NodeBudgetExceeded { .. }
        | Error::InfeasibleSum => 3,
        _ => 2,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code_for(&e))
        }
    }
}
