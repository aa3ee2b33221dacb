//! Command-line surface for the cubology library.
//!
//! Every subcommand prints JSON to stdout (pretty with `--pretty`) and is
//! byte-deterministic for a fixed argv and seed. Exit codes: 0 success or
//! valid verdict, 1 invalid verdict or failed suite, 2 usage or input error.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use serde_json::json;

use cubology::bsgs;
use cubology::codec::{self, AssemblyModel};
use cubology::counting;
use cubology::engine::{self, ColorState, LabelledState, Permutation};
use cubology::geometry::{build_layout, Layout};
use cubology::harness;
use cubology::law;
use cubology::notation;

#[derive(Parser)]
#[command(name = "cubology", version, about = "n×n×n cube solvability toolkit")]
struct Cli {
    /// Pretty-print the JSON output.
    #[arg(long, global = true)]
    pretty: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModelArg {
    #[value(alias = "mechanical")]
    Mech,
    Sticker,
}

impl From<ModelArg> for AssemblyModel {
    fn from(m: ModelArg) -> AssemblyModel {
        match m {
            ModelArg::Mech => AssemblyModel::Mechanical,
            ModelArg::Sticker => AssemblyModel::Sticker,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum CountWhat {
    Cardinality,
    Orbits,
    Order,
    Probability,
}

#[derive(Clone, Copy, ValueEnum)]
enum SuiteArg {
    #[value(name = "named-moves")]
    NamedMoves,
    Signs,
    Law,
    Typing,
    Membership,
    Subgroups,
    All,
}

#[derive(Args)]
struct SizeArg {
    /// Cube size n (3 ≤ n ≤ 64).
    #[arg(long)]
    n: u32,
}

#[derive(Subcommand)]
enum Command {
    /// Facet classification summary for a cube size.
    Layout { n: u32 },
    /// Resolve a named move from the catalogue (z, e, w, z1, z2, p, e1, e2, m, n2).
    Named {
        #[command(flatten)]
        size: SizeArg,
        name: String,
    },
    /// Parse a move word and print its canonical form.
    Parse { word: String },
    /// Apply a move word to a state file.
    Apply {
        #[command(flatten)]
        size: SizeArg,
        #[arg(long)]
        state: PathBuf,
        #[arg(long)]
        moves: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// A seeded random scramble of the solved cube.
    Scramble {
        #[command(flatten)]
        size: SizeArg,
        #[arg(long)]
        length: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// A random assembly under the sticker or mechanical model.
    AssembleRandom {
        #[command(flatten)]
        size: SizeArg,
        #[arg(long, value_enum)]
        model: ModelArg,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Check a state file against the solvability criterion.
    Check {
        #[arg(long)]
        state: PathBuf,
        /// Forget labels and judge the colour pattern only.
        #[arg(long)]
        observable: bool,
        #[arg(long, value_enum, default_value = "sticker")]
        model: ModelArg,
        /// Accept the state if any whole-cube rotation of it validates.
        #[arg(long)]
        up_to_rotation: bool,
        /// Append the refined center-edge orbit conditions (exact at every
        /// size; identical to the published law for n ≤ 5).
        #[arg(long)]
        complete: bool,
    },
    /// Read the configuration tuple off a labelled state file.
    Extract {
        #[arg(long)]
        state: PathBuf,
    },
    /// Exact counts: configuration space, orbits, group order, probability.
    Count {
        #[command(flatten)]
        size: SizeArg,
        #[arg(long, value_enum)]
        what: CountWhat,
        #[arg(long, value_enum)]
        model: Option<ModelArg>,
        /// Also print the factored form (factorials and prime powers).
        #[arg(long)]
        factored: bool,
    },
    /// Certified group order from a verified stabilizer chain.
    Order {
        #[command(flatten)]
        size: SizeArg,
        /// Build the Schreier-Sims chain (the only implemented method).
        #[arg(long)]
        bsgs: bool,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Chain cache directory (falls back to NCUBE_CACHE).
        #[arg(long)]
        cache: Option<PathBuf>,
    },
    /// Run a verification suite.
    Verify {
        #[command(flatten)]
        size: SizeArg,
        #[arg(long, value_enum)]
        suite: SuiteArg,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 200)]
        trials: u64,
    },
    /// Monte Carlo estimate of the solvability probability.
    Estimate {
        #[command(flatten)]
        size: SizeArg,
        #[arg(long, value_enum)]
        model: ModelArg,
        #[arg(long)]
        samples: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

/// On-disk state format; `facets[i]` is the solved position of the sticker
/// at position i (labelled) or a colour id 0..5 (color).
#[derive(Serialize, Deserialize)]
struct StateFile {
    n: u32,
    kind: String,
    faces: String,
    facets: Vec<u32>,
}

impl StateFile {
    fn labelled(layout: &Layout, state: &LabelledState) -> StateFile {
        StateFile {
            n: layout.n,
            kind: "labelled".to_string(),
            faces: "ULFRBD".to_string(),
            facets: (0..state.degree()).map(|i| state.came_from(i) as u32).collect(),
        }
    }

    fn load(path: &Path) -> Result<StateFile> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("cannot read state file {}", path.display()))?;
        let file: StateFile = serde_json::from_str(&text).context("malformed state file")?;
        if file.faces != "ULFRBD" {
            bail!("state file must declare faces \"ULFRBD\"");
        }
        let expected = (6 * file.n * file.n) as usize;
        if file.facets.len() != expected {
            bail!(
                "state file has {} facets, expected {expected} for n={}",
                file.facets.len(),
                file.n
            );
        }
        Ok(file)
    }

    fn to_labelled(&self) -> Result<LabelledState> {
        if self.kind != "labelled" {
            bail!("expected a labelled state file, found kind {:?}", self.kind);
        }
        let images: Vec<u16> = self.facets.iter().map(|&v| v as u16).collect();
        let perm = Permutation::from_images(images)
            .ok_or_else(|| anyhow!("facets are not a permutation of 0..{}", self.facets.len()))?;
        Ok(LabelledState::from_came_from(perm))
    }

    fn to_colors(&self) -> Result<ColorState> {
        if self.kind != "color" {
            bail!("expected a color state file, found kind {:?}", self.kind);
        }
        let colors: Vec<u8> = self.facets.iter().map(|&v| v as u8).collect();
        if colors.iter().any(|&c| c > 5) {
            bail!("colour ids must lie in 0..=5");
        }
        Ok(ColorState {
            n: self.n,
            colors,
        })
    }
}

const SCHEME: [u8; 6] = [0, 1, 2, 3, 4, 5];

fn print_json(value: &serde_json::Value, pretty: bool) -> Result<()> {
    print_serialized(value, pretty)
}

/// Serialize directly so struct-backed formats keep their declared field
/// order on the wire.
fn print_serialized<T: Serialize>(value: &T, pretty: bool) -> Result<()> {
    let text = if pretty {
        serde_json::to_string_pretty(value)?
    } else {
        serde_json::to_string(value)?
    };
    println!("{text}");
    Ok(())
}

fn scramble_state(layout: &Layout, length: u64, seed: u64) -> LabelledState {
    use rand::Rng;
    let gens: Vec<Permutation> = layout
        .generators()
        .into_iter()
        .map(|g| engine::generator_permutation(layout, g).expect("valid generator"))
        .collect();
    let mut rng = cubology::exec::trial_rng(seed, 0);
    let mut product = Permutation::identity(layout.facet_count());
    for _ in 0..length {
        product = product.then(&gens[rng.gen_range(0..gens.len())]);
    }
    engine::apply(&LabelledState::solved(layout), &product).expect("matching degree")
}

fn chain_for(layout: &Layout, seed: u64, cache: Option<&Path>) -> Result<bsgs::StabilizerChain> {
    let gens: Vec<Permutation> = layout
        .generators()
        .into_iter()
        .map(|g| engine::generator_permutation(layout, g).expect("valid generator"))
        .collect();
    let base = bsgs::class_major_base(layout);
    let cache_path = cache.map(|dir| {
        dir.join(format!(
            "chain-n{}-{}.json",
            layout.n,
            bsgs::cache_key(&gens)
        ))
    });
    if let Some(path) = &cache_path {
        if let Some(chain) = bsgs::load_chain(path, &gens) {
            return Ok(chain);
        }
    }
    let chain = bsgs::build_chain(&gens, Some(&base), seed)?;
    if let Some(path) = &cache_path {
        if let Some(dir) = path.parent() {
            std::fs::create_dir_all(dir).ok();
        }
        bsgs::save_chain(path, &chain)
            .with_context(|| format!("cannot write chain cache {}", path.display()))?;
    }
    Ok(chain)
}



fn run(cli: Cli) -> Result<i32> {
    let pretty = cli.pretty;
    match cli.command {
        Command::Layout { n } => {
            let layout = build_layout(n)?;
            let counts = counting::piece_counts(n)?;
            let slice_table: Vec<serde_json::Value> = layout
                .slice_table
                .iter()
                .map(|(g, d)| json!({"gen": g.to_string(), "depth": d}))
                .collect();
            print_json(
                &json!({
                    "n": n,
                    "parity": if n % 2 == 1 { "odd" } else { "even" },
                    "circles": layout.circles,
                    "counts": {
                        "facets": counts.facets,
                        "corners": 8,
                        "single_edges": layout.single_edge_slots.len(),
                        "wings_per_circle": if layout.circles > 0 { 24 } else { 0 },
                        "center_corners_per_circle": if layout.circles > 0 { 24 } else { 0 },
                        "center_edges_per_circle": counts.center_edges_per_circle,
                        "fixed_centers": layout.fixed_centers.len(),
                        "centers_total": counts.centers,
                        "edges_total": counts.edges,
                    },
                    "slice_table": slice_table,
                }),
                pretty,
            )?;
            Ok(0)
        }
        Command::Named { size, name } => {
            let word = notation::named_move(&name, size.n)?;
            print_json(
                &json!({"name": name, "n": size.n, "word": notation::render(&word)}),
                pretty,
            )?;
            Ok(0)
        }
        Command::Parse { word } => {
            let parsed = notation::parse(&word)?;
            print_json(
                &json!({
                    "canonical": notation::render(&parsed),
                    "generators": parsed.expanded_len(),
                    "max_slice": parsed.max_slice(),
                }),
                pretty,
            )?;
            Ok(0)
        }
        Command::Apply {
            size,
            state,
            moves,
            out,
        } => {
            let layout = build_layout(size.n)?;
            let file = StateFile::load(&state)?;
            if file.n != size.n {
                bail!("state file is for n={}, requested n={}", file.n, size.n);
            }
            let word = notation::parse(&moves)?;
            let perm = engine::compile(&layout, &word)?;
            let next = engine::apply(&file.to_labelled()?, &perm)?;
            let out_file = StateFile::labelled(&layout, &next);
            if let Some(path) = out {
                std::fs::write(&path, serde_json::to_string(&out_file)?)
                    .with_context(|| format!("cannot write {}", path.display()))?;
            }
            print_serialized(&out_file, pretty)?;
            Ok(0)
        }
        Command::Scramble { size, length, seed } => {
            let layout = build_layout(size.n)?;
            let state = scramble_state(&layout, length, seed);
            print_serialized(&StateFile::labelled(&layout, &state), pretty)?;
            Ok(0)
        }
        Command::AssembleRandom { size, model, seed } => {
            let layout = build_layout(size.n)?;
            let config = codec::sample_configuration(&layout, model.into(), seed);
            let state = codec::assemble(&config, &layout)?;
            print_serialized(&StateFile::labelled(&layout, &state), pretty)?;
            Ok(0)
        }
        Command::Check {
            state,
            observable,
            model,
            up_to_rotation,
            complete,
        } => {
            let file = StateFile::load(&state)?;
            let layout = build_layout(file.n)?;
            let verdict = if file.kind == "color" || observable {
                let colors = if file.kind == "color" {
                    file.to_colors()?
                } else {
                    codec::observable(&file.to_labelled()?, &layout, &SCHEME)
                };
                law::validate_observable(&colors, &layout, model.into(), up_to_rotation)?
            } else {
                let config = codec::extract(&file.to_labelled()?, &layout)?;
                if complete {
                    law::validate_complete(&config, &layout)?
                } else {
                    law::validate(&config, &layout)?
                }
            };
            print_serialized(&verdict, pretty)?;
            Ok(if verdict.valid { 0 } else { 1 })
        }
        Command::Extract { state } => {
            let file = StateFile::load(&state)?;
            let layout = build_layout(file.n)?;
            let config = codec::extract(&file.to_labelled()?, &layout)?;
            print_serialized(&config, pretty)?;
            Ok(0)
        }
        Command::Count {
            size,
            what,
            model,
            factored,
        } => {
            let n = size.n;
            let mut payload = json!({"n": n});
            match what {
                CountWhat::Cardinality => {
                    payload["what"] = json!("cardinality");
                    payload["value"] = json!(counting::conf_cardinality(n)?.to_string());
                    if factored {
                        payload["factored"] = json!(counting::conf_cardinality_factored(n)?.render());
                    }
                }
                CountWhat::Orbits => {
                    payload["what"] = json!("orbits");
                    payload["value"] = json!(counting::orbit_count(n)?.to_string());
                    if factored {
                        payload["factored"] = json!(counting::orbit_count_factored(n)?.render());
                    }
                }
                CountWhat::Order => {
                    payload["what"] = json!("order");
                    payload["value"] = json!(counting::group_order(n)?.to_string());
                    if factored {
                        payload["factored"] = json!(counting::group_order_factored(n)?.render());
                    }
                }
                CountWhat::Probability => {
                    let model = model
                        .ok_or_else(|| anyhow!("--what probability requires --model"))?;
                    let p = counting::solvability_probability(n, model.into())?;
                    payload["what"] = json!("probability");
                    payload["model"] = json!(match model {
                        ModelArg::Mech => "mechanical",
                        ModelArg::Sticker => "sticker",
                    });
                    payload["value"] = json!(format!("{}/{}", p.numer(), p.denom()));
                }
            }
            print_json(&payload, pretty)?;
            Ok(0)
        }
        Command::Order {
            size,
            bsgs: use_bsgs,
            seed,
            cache,
        } => {
            if !use_bsgs {
                bail!("the certified order requires --bsgs");
            }
            let layout = build_layout(size.n)?;
            let cache_dir = cache.or_else(|| std::env::var_os("NCUBE_CACHE").map(PathBuf::from));
            let chain = chain_for(&layout, seed, cache_dir.as_deref())?;
            print_json(
                &json!({
                    "n": size.n,
                    "order": chain.order().to_string(),
                    "strong_generators": chain.strong_generator_count(),
                }),
                pretty,
            )?;
            Ok(0)
        }
        Command::Verify {
            size,
            suite,
            seed,
            trials,
        } => {
            let n = size.n;
            build_layout(n)?; // validate size up front
            let names: Vec<&str> = match suite {
                SuiteArg::NamedMoves => vec!["named-moves"],
                SuiteArg::Signs => vec!["signs"],
                SuiteArg::Law => vec!["law"],
                SuiteArg::Typing => vec!["typing"],
                SuiteArg::Membership => vec!["membership"],
                SuiteArg::Subgroups => vec!["subgroups"],
                SuiteArg::All => vec![
                    "named-moves",
                    "signs",
                    "law",
                    "typing",
                    "membership",
                    "subgroups",
                ],
            };
            let reports: Vec<harness::Report> = names
                .iter()
                .map(|name| harness::run_suite(name, n, trials, seed))
                .collect::<Result<_, _>>()?;
            let passed = reports.iter().all(|r| r.passed);
            if reports.len() == 1 {
                print_serialized(&reports[0], pretty)?;
            } else {
                print_json(&json!({"n": n, "passed": passed, "reports": reports}), pretty)?;
            }
            Ok(if passed { 0 } else { 1 })
        }
        Command::Estimate {
            size,
            model,
            samples,
            seed,
        } => {
            let report = harness::estimate_probability(size.n, model.into(), samples, seed)?;
            print_serialized(&report, pretty)?;
            Ok(if report.passed { 0 } else { 1 })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(err) => {
            eprintln!("{}", json!({"error": format!("{err:#}")}));
            ExitCode::from(2)
        }
    }
}
