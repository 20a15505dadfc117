//! Command-line pipeline: analyze, groups, communities, recommend, generate.

use std::collections::BTreeMap;
use std::fs::File;
use std::io::{BufRead, BufReader, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use clanforge::centrality::{self, pagerank};
use clanforge::cohorts::{
    classify_by_score, classify_groups, correlate_cohort, correlate_scores, Cohort,
    CohortAssignment, CorrelationReport, LoopRule, Metric,
};
use clanforge::community::{
    clans_to_partition, detect_communities, map_equation, nmi_with, ClanlessPolicy,
    NmiNormalization, DEFAULT_TELEPORT,
};
use clanforge::error::{Error, Result};
use clanforge::graph::{
    build_graph_with_summary, load_edge_list, load_metadata, Graph, NodeSet, PlayerTable,
};
use clanforge::metrics::{
    average_clustering, average_shortest_path, connected_components, degree_distribution,
    evaluate_small_world, DegreeDistribution, PathMode, SmallWorldThresholds,
};
use clanforge::powerlaw::fit_gamma_mle;
use clanforge::recommender::{batch_recommend, recommend_clan, Outcome, RecommendConfig};
use clanforge::synth::{generate_powerlaw, generate_uniform};

/// Component size above which the average-path default switches from
/// exact to sampled mode.
const EXACT_PATH_LIMIT: usize = 5000;
const DEFAULT_SAMPLE_SOURCES: usize = 200;

#[derive(Parser)]
#[command(name = "clanforge", version, about = "Friendship-network analytics")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Structural summary, power-law fit, small-world verdict and
    /// degree-distribution plot data with a seeded random baseline.
    Analyze {
        /// Edge-list file, or '-' for standard input
        edges: String,
        #[arg(long)]
        metadata: Option<PathBuf>,
        /// Seed for the random baseline and sampled path mode
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value = ".")]
        out_dir: PathBuf,
        /// Lower degree cutoff for the power-law fit
        #[arg(long, default_value_t = 1)]
        xmin: usize,
        /// Force sampled path mode with this many sources
        #[arg(long)]
        sample_sources: Option<usize>,
        /// Largest-component size up to which exact path mode is the default
        #[arg(long, default_value_t = EXACT_PATH_LIMIT)]
        exact_path_limit: usize,
    },
    /// Hardcore/Casual/Peripheral cohorts with activity correlations.
    Groups {
        edges: String,
        #[arg(long)]
        metadata: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = GroupMethod::Alg1)]
        method: GroupMethod,
        #[arg(long, default_value_t = 0.07)]
        hardcore_fraction: f64,
        #[arg(long, default_value_t = 0.14)]
        peripheral_fraction: f64,
        /// Use a strict (>) hub-removal loop condition instead of >=
        #[arg(long)]
        strict: bool,
        /// Count characters absent from the graph as Peripheral in the
        /// population breakdown (requires metadata)
        #[arg(long)]
        count_nonplayers: bool,
        #[arg(long, default_value_t = centrality::DEFAULT_DAMPING)]
        damping: f64,
        #[arg(long, default_value = ".")]
        out_dir: PathBuf,
    },
    /// Map-equation communities and NMI against clan membership.
    Communities {
        edges: String,
        #[arg(long)]
        metadata: Option<PathBuf>,
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_TELEPORT)]
        teleport: f64,
        /// Put all clanless players into one shared block instead of
        /// per-player singleton blocks
        #[arg(long)]
        clanless_one_block: bool,
        #[arg(long, value_enum, default_value_t = NmiNormArg::Average)]
        nmi_norm: NmiNormArg,
        #[arg(long, default_value = ".")]
        out_dir: PathBuf,
    },
    /// Clan recommendations for clanless players.
    Recommend {
        edges: String,
        #[arg(long)]
        metadata: PathBuf,
        #[arg(long)]
        max_clan_size: usize,
        #[arg(long)]
        points_balance: Option<u64>,
        /// Recommend for a single player instead of every clanless one
        #[arg(long)]
        player: Option<u64>,
        #[arg(long, default_value_t = 10)]
        max_rounds: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_TELEPORT)]
        teleport: f64,
        /// Restrict the original partition after clan removal instead of
        /// re-detecting communities
        #[arg(long)]
        reuse_partition: bool,
        #[arg(long, default_value = ".")]
        out_dir: PathBuf,
    },
    /// Write a synthetic edge list.
    Generate {
        #[arg(long, value_enum)]
        kind: GeneratorKind,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: Option<usize>,
        #[arg(long)]
        gamma: Option<f64>,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum GroupMethod {
    Alg1,
    Pagerank,
}

#[derive(Clone, Copy, ValueEnum)]
enum NmiNormArg {
    Average,
    Max,
}

#[derive(Clone, Copy, ValueEnum)]
enum GeneratorKind {
    Uniform,
    Powerlaw,
}

fn main() -> ExitCode {
    clanforge::par::init_thread_cap_from_env();
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::FAILURE
        }
    }
}

fn run(command: Command) -> Result<()> {
    match command {
        Command::Analyze {
            edges,
            metadata: _,
            seed,
            out_dir,
            xmin,
            sample_sources,
            exact_path_limit,
        } => analyze(&edges, seed, &out_dir, xmin, sample_sources, exact_path_limit),
        Command::Groups {
            edges,
            metadata,
            method,
            hardcore_fraction,
            peripheral_fraction,
            strict,
            count_nonplayers,
            damping,
            out_dir,
        } => groups(
            &edges,
            metadata.as_deref(),
            method,
            hardcore_fraction,
            peripheral_fraction,
            strict,
            count_nonplayers,
            damping,
            &out_dir,
        ),
        Command::Communities {
            edges,
            metadata,
            seed,
            teleport,
            clanless_one_block,
            nmi_norm,
            out_dir,
        } => communities(
            &edges,
            metadata.as_deref(),
            seed,
            teleport,
            clanless_one_block,
            nmi_norm,
            &out_dir,
        ),
        Command::Recommend {
            edges,
            metadata,
            max_clan_size,
            points_balance,
            player,
            max_rounds,
            seed,
            teleport,
            reuse_partition,
            out_dir,
        } => {
            let cfg = RecommendConfig {
                max_clan_size,
                points_balance,
                max_rounds,
                seed,
                teleport,
                reuse_partition,
            };
            recommend(&edges, &metadata, player, &cfg, &out_dir)
        }
        Command::Generate {
            kind,
            n,
            m,
            gamma,
            seed,
            out,
        } => generate(kind, n, m, gamma, seed, &out),
    }
}

fn open_edges(path: &str) -> Result<Box<dyn BufRead>> {
    if path == "-" {
        Ok(Box::new(BufReader::new(std::io::stdin())))
    } else {
        Ok(Box::new(BufReader::new(File::open(path)?)))
    }
}

fn load_graph(path: &str) -> Result<(Graph, clanforge::graph::IngestSummary)> {
    let pairs = load_edge_list(open_edges(path)?)?;
    Ok(build_graph_with_summary(&pairs))
}

fn load_table(path: &Path) -> Result<PlayerTable> {
    let mut text = String::new();
    BufReader::new(File::open(path)?).read_to_string(&mut text)?;
    load_metadata(text.as_bytes())
}

/// Write through a temp file in the target directory, then rename.
fn write_atomic(path: &Path, content: &str) -> Result<()> {
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            std::fs::create_dir_all(parent)?;
        }
    }
    let tmp = path.with_extension("tmp");
    {
        let mut file = File::create(&tmp)?;
        file.write_all(content.as_bytes())?;
        file.sync_all()?;
    }
    std::fs::rename(&tmp, path)?;
    Ok(())
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value).expect("serializable");
    text.push('\n');
    write_atomic(path, &text)
}

fn distribution_csv(points: &BTreeMap<usize, f64>) -> String {
    let mut out = String::from("degree,fraction\n");
    for (&degree, &fraction) in points {
        out.push_str(&format!("{degree},{fraction}\n"));
    }
    out
}

#[derive(Serialize)]
struct ComponentsJson {
    count: usize,
    largest_size: usize,
    largest_fraction: f64,
    largest_edge_count: usize,
    largest_edge_fraction: f64,
}

#[derive(Serialize)]
struct PathJson {
    mode: &'static str,
    sources: Option<usize>,
    value: Option<f64>,
    error: Option<String>,
}

#[derive(Serialize)]
struct PowerLawJson {
    gamma: Option<f64>,
    xmin: usize,
    n: Option<usize>,
    error: Option<String>,
}

#[derive(Serialize)]
struct SmallWorldJson {
    expected_avg_path: Option<f64>,
    measured_avg_path: Option<f64>,
    measured_clustering: f64,
    random_clustering: f64,
    verdict: Option<bool>,
    error: Option<String>,
}

#[derive(Serialize)]
struct IngestJson {
    self_loops: usize,
    duplicate_edges: usize,
}

#[derive(Serialize)]
struct AnalyzeSummary {
    n: usize,
    m: usize,
    mean_degree: f64,
    components: ComponentsJson,
    clustering: f64,
    average_path: PathJson,
    power_law: PowerLawJson,
    random_baseline_seed: u64,
    small_world: SmallWorldJson,
    ingest: IngestJson,
}

fn analyze(
    edges: &str,
    seed: u64,
    out_dir: &Path,
    xmin: usize,
    sample_sources: Option<usize>,
    exact_path_limit: usize,
) -> Result<()> {
    let (graph, ingest) = load_graph(edges)?;
    if graph.node_count() == 0 {
        return Err(Error::EmptyGraph);
    }
    let dist = degree_distribution(&graph)?;
    let components = connected_components(&graph);
    let clustering = average_clustering(&graph);

    let (mode_name, sources, path_mode) = match sample_sources {
        Some(sources) => ("sampled", Some(sources), PathMode::Sampled { sources, seed }),
        None if components.largest_size <= exact_path_limit => ("exact", None, PathMode::Exact),
        None => (
            "sampled",
            Some(DEFAULT_SAMPLE_SOURCES),
            PathMode::Sampled {
                sources: DEFAULT_SAMPLE_SOURCES,
                seed,
            },
        ),
    };
    let path_result = average_shortest_path(&graph, &components.largest_nodes, path_mode);
    let (path_value, path_error) = split_result(&path_result);

    let degrees = graph.degrees();
    let fit_result = fit_gamma_mle(&degrees, xmin);
    let power_law = match &fit_result {
        Ok(fit) => PowerLawJson {
            gamma: Some(fit.gamma),
            xmin: fit.xmin,
            n: Some(fit.sample_count),
            error: None,
        },
        Err(err) => PowerLawJson {
            gamma: None,
            xmin,
            n: None,
            error: Some(err.to_string()),
        },
    };

    // Random baseline with the same n and m, used for the plot bundle and
    // the small-world clustering comparison.
    let baseline = generate_uniform(graph.node_count(), graph.edge_count(), seed)?;
    let baseline_dist = degree_distribution(&baseline)?;
    let random_clustering = average_clustering(&baseline);

    let small_world = match path_value {
        Some(measured) => match evaluate_small_world(
            graph.node_count(),
            graph.mean_degree(),
            measured,
            clustering,
            random_clustering,
            SmallWorldThresholds::default(),
        ) {
            Ok(report) => SmallWorldJson {
                expected_avg_path: Some(report.expected_avg_path),
                measured_avg_path: Some(measured),
                measured_clustering: clustering,
                random_clustering,
                verdict: Some(report.verdict),
                error: None,
            },
            Err(err) => SmallWorldJson {
                expected_avg_path: None,
                measured_avg_path: Some(measured),
                measured_clustering: clustering,
                random_clustering,
                verdict: None,
                error: Some(err.to_string()),
            },
        },
        None => SmallWorldJson {
            expected_avg_path: None,
            measured_avg_path: None,
            measured_clustering: clustering,
            random_clustering,
            verdict: None,
            error: Some("average path unavailable".into()),
        },
    };

    let summary = AnalyzeSummary {
        n: graph.node_count(),
        m: graph.edge_count(),
        mean_degree: graph.mean_degree(),
        components: ComponentsJson {
            count: components.component_count,
            largest_size: components.largest_size,
            largest_fraction: components.largest_size as f64 / graph.node_count() as f64,
            largest_edge_count: components.largest_edge_count,
            largest_edge_fraction: if graph.edge_count() > 0 {
                components.largest_edge_count as f64 / graph.edge_count() as f64
            } else {
                0.0
            },
        },
        clustering,
        average_path: PathJson {
            mode: mode_name,
            sources,
            value: path_value,
            error: path_error,
        },
        power_law,
        random_baseline_seed: seed,
        small_world,
        ingest: IngestJson {
            self_loops: ingest.self_loops,
            duplicate_edges: ingest.duplicate_edges,
        },
    };

    write_json(&out_dir.join("summary.json"), &summary)?;
    write_distribution_bundle(out_dir, "degree", &dist)?;
    write_distribution_bundle(out_dir, "random_degree", &baseline_dist)?;
    Ok(())
}

fn write_distribution_bundle(out_dir: &Path, stem: &str, dist: &DegreeDistribution) -> Result<()> {
    write_atomic(
        &out_dir.join(format!("{stem}_pmf.csv")),
        &distribution_csv(&dist.pmf),
    )?;
    write_atomic(
        &out_dir.join(format!("{stem}_ccdf.csv")),
        &distribution_csv(&dist.ccdf),
    )
}

fn split_result(result: &Result<f64>) -> (Option<f64>, Option<String>) {
    match result {
        Ok(value) => (Some(*value), None),
        Err(err) => (None, Some(err.to_string())),
    }
}

#[derive(Serialize)]
struct CorrelationJson {
    r: Option<f64>,
    method: Option<String>,
    error: Option<String>,
}

fn correlation_json(result: std::result::Result<CorrelationReport, Error>) -> CorrelationJson {
    match result {
        Ok(report) => CorrelationJson {
            r: Some(report.r),
            method: Some(report.method),
            error: None,
        },
        Err(err) => CorrelationJson {
            r: None,
            method: None,
            error: Some(err.to_string()),
        },
    }
}

#[derive(Serialize)]
struct CohortSizesJson {
    hardcore: usize,
    casual: usize,
    peripheral: usize,
}

#[derive(Serialize)]
struct PopulationJson {
    total_characters: usize,
    hardcore: usize,
    casual: usize,
    peripheral: usize,
    hardcore_fraction: f64,
    casual_fraction: f64,
    peripheral_fraction: f64,
}

#[derive(Serialize)]
struct GroupsSummary {
    method: &'static str,
    sizes: CohortSizesJson,
    fractions: CohortSizesFractions,
    population: Option<PopulationJson>,
}

#[derive(Serialize)]
struct CohortSizesFractions {
    hardcore: f64,
    casual: f64,
    peripheral: f64,
}

#[derive(Serialize)]
struct CorrelationsSummary {
    method: &'static str,
    cohort_indicator: BTreeMap<&'static str, CorrelationJson>,
    score_pearson: Option<BTreeMap<&'static str, CorrelationJson>>,
}

#[allow(clippy::too_many_arguments)]
fn groups(
    edges: &str,
    metadata: Option<&Path>,
    method: GroupMethod,
    hardcore_fraction: f64,
    peripheral_fraction: f64,
    strict: bool,
    count_nonplayers: bool,
    damping: f64,
    out_dir: &Path,
) -> Result<()> {
    let (graph, _) = load_graph(edges)?;
    let table = metadata.map(load_table).transpose()?;
    if count_nonplayers && table.is_none() {
        return Err(Error::InvalidArgument(
            "--count-nonplayers requires --metadata".into(),
        ));
    }

    let (method_name, assignment, scores) = match method {
        GroupMethod::Alg1 => {
            let rule = if strict {
                LoopRule::Strict
            } else {
                LoopRule::NonStrict
            };
            ("alg1", classify_groups(&graph, rule), None)
        }
        GroupMethod::Pagerank => {
            let scores = pagerank(
                &graph,
                damping,
                centrality::DEFAULT_TOL,
                centrality::DEFAULT_MAX_ITER,
            )?;
            let assignment =
                classify_by_score(&graph, &scores, hardcore_fraction, peripheral_fraction)?;
            ("pagerank", assignment, Some(scores))
        }
    };

    write_atomic(&out_dir.join("cohorts.csv"), &cohorts_csv(&graph, &assignment))?;
    if method == GroupMethod::Alg1 {
        write_atomic(
            &out_dir.join("removal_trace.csv"),
            &trace_csv(&graph, &assignment),
        )?;
    }

    let n = graph.node_count().max(1);
    let population = if count_nonplayers {
        let table = table.as_ref().expect("checked above");
        let in_graph: std::collections::BTreeSet<u64> =
            (0..graph.node_count()).map(|v| graph.ext_id(v)).collect();
        let extra = table.iter().filter(|(id, _)| !in_graph.contains(id)).count();
        let total = graph.node_count() + extra;
        let peripheral = assignment.peripheral.len() + extra;
        Some(PopulationJson {
            total_characters: total,
            hardcore: assignment.hardcore.len(),
            casual: assignment.casual.len(),
            peripheral,
            hardcore_fraction: assignment.hardcore.len() as f64 / total as f64,
            casual_fraction: assignment.casual.len() as f64 / total as f64,
            peripheral_fraction: peripheral as f64 / total as f64,
        })
    } else {
        None
    };
    let summary = GroupsSummary {
        method: method_name,
        sizes: CohortSizesJson {
            hardcore: assignment.hardcore.len(),
            casual: assignment.casual.len(),
            peripheral: assignment.peripheral.len(),
        },
        fractions: CohortSizesFractions {
            hardcore: assignment.hardcore.len() as f64 / n as f64,
            casual: assignment.casual.len() as f64 / n as f64,
            peripheral: assignment.peripheral.len() as f64 / n as f64,
        },
        population,
    };
    write_json(&out_dir.join("groups_summary.json"), &summary)?;

    if let Some(table) = &table {
        let mut cohort_indicator = BTreeMap::new();
        for metric in [Metric::OnlineTime, Metric::Kills] {
            cohort_indicator.insert(
                metric.name(),
                correlation_json(correlate_cohort(
                    &assignment,
                    Cohort::Hardcore,
                    &graph,
                    table,
                    metric,
                )),
            );
        }
        let score_pearson = scores.map(|scores| {
            let mut out = BTreeMap::new();
            for metric in [Metric::OnlineTime, Metric::Kills] {
                out.insert(
                    metric.name(),
                    correlation_json(correlate_scores(&scores, &graph, table, metric)),
                );
            }
            out
        });
        let correlations = CorrelationsSummary {
            method: method_name,
            cohort_indicator,
            score_pearson,
        };
        write_json(&out_dir.join("correlations.json"), &correlations)?;
    }
    Ok(())
}

fn cohorts_csv(graph: &Graph, assignment: &CohortAssignment) -> String {
    let mut out = String::from("char_id,cohort\n");
    for v in 0..graph.node_count() {
        let cohort = if assignment.hardcore.contains(&v) {
            "hardcore"
        } else if assignment.peripheral.contains(&v) {
            "peripheral"
        } else {
            "casual"
        };
        out.push_str(&format!("{},{}\n", graph.ext_id(v), cohort));
    }
    out
}

fn trace_csv(graph: &Graph, assignment: &CohortAssignment) -> String {
    let mut out = String::from("step,removed_id,scc_size,diss_count\n");
    for (step, entry) in assignment.removal_trace.iter().enumerate() {
        out.push_str(&format!(
            "{},{},{},{}\n",
            step + 1,
            graph.ext_id(entry.removed),
            entry.scc_size,
            entry.disconnected
        ));
    }
    out
}

#[derive(Serialize)]
struct CommunitiesSummary {
    seed: u64,
    teleport: f64,
    block_count: usize,
    codelength: f64,
    index_codelength: f64,
    module_codelength: f64,
}

#[derive(Serialize)]
struct NmiEntry {
    partition_a: &'static str,
    partition_b: &'static str,
    nmi: Option<f64>,
    error: Option<String>,
}

fn communities(
    edges: &str,
    metadata: Option<&Path>,
    seed: u64,
    teleport: f64,
    clanless_one_block: bool,
    nmi_norm: NmiNormArg,
    out_dir: &Path,
) -> Result<()> {
    let (graph, _) = load_graph(edges)?;
    if graph.node_count() == 0 {
        return Err(Error::EmptyGraph);
    }
    let partition = detect_communities(&graph, seed, teleport)?;
    let score = map_equation(&graph, &partition, teleport)?;

    let mut csv = String::from("char_id,block_id\n");
    for (v, block) in partition.iter() {
        csv.push_str(&format!("{},{}\n", graph.ext_id(v), block));
    }
    write_atomic(&out_dir.join("communities.csv"), &csv)?;
    write_json(
        &out_dir.join("communities_summary.json"),
        &CommunitiesSummary {
            seed,
            teleport,
            block_count: partition.block_count(),
            codelength: score.codelength,
            index_codelength: score.index_codelength,
            module_codelength: score.module_codelength,
        },
    )?;

    if let Some(metadata) = metadata {
        let table = load_table(metadata)?;
        let norm = match nmi_norm {
            NmiNormArg::Average => NmiNormalization::Average,
            NmiNormArg::Max => NmiNormalization::Max,
        };
        let all: NodeSet = (0..graph.node_count()).collect();
        let clanless_policy = if clanless_one_block {
            ClanlessPolicy::OneBlock
        } else {
            ClanlessPolicy::Singleton
        };

        let all_players = clans_to_partition(&graph, &table, &all, clanless_policy)
            .and_then(|clans| nmi_with(&partition, &clans, norm));
        let members_only = clans_to_partition(&graph, &table, &all, ClanlessPolicy::Drop)
            .and_then(|clans| {
                let members: NodeSet = clans.nodes().iter().copied().collect();
                nmi_with(&partition.restrict(&members), &clans, norm)
            });
        let entries = vec![
            nmi_entry(
                "communities",
                if clanless_one_block {
                    "clans (clanless as one block)"
                } else {
                    "clans (clanless as singletons)"
                },
                all_players,
            ),
            nmi_entry(
                "communities (clan members only)",
                "clans (members only)",
                members_only,
            ),
        ];
        write_json(&out_dir.join("nmi.json"), &entries)?;
    }
    Ok(())
}

fn nmi_entry(
    partition_a: &'static str,
    partition_b: &'static str,
    result: Result<f64>,
) -> NmiEntry {
    match result {
        Ok(value) => NmiEntry {
            partition_a,
            partition_b,
            nmi: Some(value),
            error: None,
        },
        Err(err) => NmiEntry {
            partition_a,
            partition_b,
            nmi: None,
            error: Some(err.to_string()),
        },
    }
}

fn recommend(
    edges: &str,
    metadata: &Path,
    player: Option<u64>,
    cfg: &RecommendConfig,
    out_dir: &Path,
) -> Result<()> {
    let (graph, _) = load_graph(edges)?;
    if graph.node_count() == 0 {
        return Err(Error::EmptyGraph);
    }
    let table = load_table(metadata)?;
    let recommendations = match player {
        Some(id) => {
            let communities = detect_communities(&graph, cfg.seed, cfg.teleport)?;
            vec![recommend_clan(
                &graph,
                &table,
                &communities,
                &table.clan_sizes(),
                &table.clan_points(),
                id,
                cfg,
            )?]
        }
        None => batch_recommend(&graph, &table, cfg)?,
    };

    let mut csv = String::from("char_id,outcome,clan_id,rounds_used\n");
    for rec in &recommendations {
        let (outcome, clan) = match rec.outcome {
            Outcome::Clan(clan) => ("recommended", clan.to_string()),
            Outcome::AlreadyInClan(clan) => ("already-in-clan", clan.to_string()),
            Outcome::NoRecommendation(reason) => (reason.as_str(), String::new()),
        };
        csv.push_str(&format!(
            "{},{},{},{}\n",
            rec.player, outcome, clan, rec.rounds_used
        ));
    }
    write_atomic(&out_dir.join("recommendations.csv"), &csv)?;
    Ok(())
}

fn generate(
    kind: GeneratorKind,
    n: usize,
    m: Option<usize>,
    gamma: Option<f64>,
    seed: u64,
    out: &Path,
) -> Result<()> {
    let graph = match kind {
        GeneratorKind::Uniform => {
            let m = m.ok_or_else(|| {
                Error::InvalidArgument("--kind uniform requires --m".into())
            })?;
            generate_uniform(n, m, seed)?
        }
        GeneratorKind::Powerlaw => {
            let gamma = gamma.ok_or_else(|| {
                Error::InvalidArgument("--kind powerlaw requires --gamma".into())
            })?;
            generate_powerlaw(n, gamma, seed)?
        }
    };
    let mut text = String::new();
    for (u, v) in graph.edges() {
        text.push_str(&format!("{} {}\n", graph.ext_id(u), graph.ext_id(v)));
    }
    // Isolated nodes have no edge line; a self-loop line registers the
    // node on reload and is dropped as an edge by the builder.
    for v in 0..graph.node_count() {
        if graph.degree(v) == 0 {
            let id = graph.ext_id(v);
            text.push_str(&format!("{id} {id}\n"));
        }
    }
    write_atomic(out, &text)?;
    Ok(())
}
