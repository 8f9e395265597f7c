//! Batch front end: solve expression files, compile reductions to disk,
//! re-verify emitted instances, and poke the exact oracles. stdout carries
//! data, stderr carries diagnostics. Exit codes: 0 = yes/solved, 1 = no,
//! 2 = error. Everything is deterministic given the same inputs and flags.

use std::fmt::Write as _;
use std::fs::{self, File};
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};

use cwdel::critical::build_critical;
use cwdel::cwexpr::parse_expr;
use cwdel::dp::solve_expression;
use cwdel::graph::{
    classify_twinclass, read_edge_list, twinclass_partition, verify_decomposition,
    write_edge_list, write_tags, Graph, TreeDecomposition, TwinClassKind,
};
use cwdel::oracle::{
    min_deletions_r_colorable, solve_exact, DeletionOutcome, ProblemInput, ProblemKind,
};
use cwdel::reductions::ds::{build_ds_doubling, build_tds_reduction, tds_vertex_count};
use cwdel::reductions::dtc::{
    build_dense_reduction, build_sparse_reduction, DEFAULT_MAX_VERTICES,
};
use cwdel::reductions::vc::{
    build_krfree_reduction, build_maxcut_reduction, build_vc_reduction,
};
use cwdel::reductions::{
    CnfFormula, HittingSetInstance, PackingEntry, ReductionInstance, ReductionKind,
    ReductionParams,
};
use cwdel::verify::{verify_reduction_instance_threaded, CheckItem, VerifyReport};

#[derive(Parser)]
#[command(name = "cwdel", version, about = "deletion-to-r-colorable toolbox")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Minimum deletions for r-colorability on a clique-width expression.
    Solve {
        #[arg(long)]
        expr_file: PathBuf,
        #[arg(long)]
        r: u8,
        /// also decide "minimum <= budget"; a no answer exits 1
        #[arg(long)]
        budget: Option<u32>,
        /// write the optimal coloring here, one "vertex color" line per
        /// vertex, color 0 meaning deleted
        #[arg(long)]
        witness: Option<PathBuf>,
    },
    /// Compile an input into a hard instance plus sidecar files.
    Reduce {
        #[arg(long)]
        kind: ReduceKind,
        /// DIMACS CNF for dense/sparse/tds, hitting-set text for vc,
        /// edge list for the rest
        input: PathBuf,
        #[arg(long)]
        r: Option<u8>,
        #[arg(long)]
        p0: Option<u32>,
        /// carried-over budget for kinds that only translate one
        #[arg(long)]
        budget: Option<u32>,
        #[arg(long, default_value = ".")]
        out_dir: PathBuf,
        /// refuse constructions above this many vertices; overrides the
        /// CWDEL_MAX_VERTICES environment variable
        #[arg(long)]
        max_vertices: Option<usize>,
        /// maxcut only: vertex ids (1-based) forming the known modulator
        #[arg(long)]
        modulator_file: Option<PathBuf>,
    },
    /// Re-check an emitted instance from its manifest.
    Verify {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long, default_value_t = 1)]
        threads: usize,
    },
    /// Exact reference answers on small inputs.
    Oracle {
        #[arg(long)]
        problem: OracleProblem,
        /// edge list, except hitting-set text for hs and DIMACS CNF for sat
        input: PathBuf,
        #[arg(long)]
        r: Option<u8>,
        /// dtc only: largest deletion count to try (default: all vertices)
        #[arg(long)]
        cap: Option<u32>,
    },
    /// Emit a vertex-critical graph with its path decomposition.
    GenCritical {
        #[arg(long)]
        t: u32,
        #[arg(long)]
        gamma: u32,
        #[arg(long, default_value = ".")]
        out_dir: PathBuf,
    },
    /// Print the maximal twin classes of a graph, one block per line.
    Twinclass { input: PathBuf },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ReduceKind {
    Dense,
    Sparse,
    Vc,
    Maxcut,
    Krfree,
    Ds,
    Tds,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OracleProblem {
    Vc,
    Ds,
    Tds,
    Maxcut,
    Krfree,
    Hs,
    Sat,
    Dtc,
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {:#}", e);
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<u8> {
    match cli.cmd {
        Cmd::Solve { expr_file, r, budget, witness } => cmd_solve(&expr_file, r, budget, witness),
        Cmd::Reduce { kind, input, r, p0, budget, out_dir, max_vertices, modulator_file } => {
            let cap = resolve_max_vertices(max_vertices)?;
            cmd_reduce(kind, &input, r, p0, budget, &out_dir, cap, modulator_file)
        }
        Cmd::Verify { instance, threads } => cmd_verify(&instance, threads),
        Cmd::Oracle { problem, input, r, cap } => cmd_oracle(problem, &input, r, cap),
        Cmd::GenCritical { t, gamma, out_dir } => cmd_gen_critical(t, gamma, &out_dir),
        Cmd::Twinclass { input } => cmd_twinclass(&input),
    }
}

/// All data output funnels through here so a reader that closes the pipe
/// early (`cwdel ... | head`) ends the run quietly instead of panicking.
fn emit(text: &str) -> Result<()> {
    match std::io::stdout().write_all(text.as_bytes()) {
        Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => Ok(()),
        other => Ok(other?),
    }
}

fn resolve_max_vertices(flag: Option<usize>) -> Result<usize> {
    if let Some(v) = flag {
        return Ok(v);
    }
    match std::env::var("CWDEL_MAX_VERTICES") {
        Ok(s) => s
            .trim()
            .parse()
            .map_err(|_| anyhow!("CWDEL_MAX_VERTICES is not a vertex count: {:?}", s)),
        Err(std::env::VarError::NotPresent) => Ok(DEFAULT_MAX_VERTICES),
        Err(e) => Err(anyhow!("CWDEL_MAX_VERTICES: {}", e)),
    }
}

// ---------------------------------------------------------------- solve

fn cmd_solve(
    expr_file: &Path,
    r: u8,
    budget: Option<u32>,
    witness: Option<PathBuf>,
) -> Result<u8> {
    let text = fs::read_to_string(expr_file)
        .with_context(|| format!("reading {}", expr_file.display()))?;
    let expr = parse_expr(&text).map_err(|e| anyhow!("{}: {}", expr_file.display(), e))?;
    let solved = solve_expression(&expr, r, budget).map_err(|e| anyhow!(e))?;

    let mut out = format!("min-deletions {}\n", solved.min_cost);
    if let Some(path) = witness {
        let mut w = BufWriter::new(
            File::create(&path).with_context(|| format!("creating {}", path.display()))?,
        );
        writeln!(w, "c vertex color, color 0 means deleted")?;
        for v in 0..solved.witness.n() as u32 {
            writeln!(w, "{} {}", v + 1, solved.witness.color(v))?;
        }
        w.flush()?;
    }
    match solved.decision {
        Some(true) => out.push_str("decision yes\n"),
        Some(false) => out.push_str("decision no\n"),
        None => {}
    }
    emit(&out)?;
    match solved.decision {
        Some(false) => Ok(1),
        _ => Ok(0),
    }
}

// --------------------------------------------------------------- reduce

#[allow(clippy::too_many_arguments)]
fn cmd_reduce(
    kind: ReduceKind,
    input: &Path,
    r: Option<u8>,
    p0: Option<u32>,
    budget: Option<u32>,
    out_dir: &Path,
    max_vertices: usize,
    modulator_file: Option<PathBuf>,
) -> Result<u8> {
    fs::create_dir_all(out_dir)
        .with_context(|| format!("creating {}", out_dir.display()))?;
    let manifest = match kind {
        ReduceKind::Dense | ReduceKind::Sparse => {
            let f = read_cnf(input)?;
            let r = r.ok_or_else(|| anyhow!("--kind dense/sparse needs --r"))?;
            let p0 = p0.ok_or_else(|| anyhow!("--kind dense/sparse needs --p0"))?;
            let inst = match kind {
                ReduceKind::Dense => build_dense_reduction(&f, r, p0, max_vertices),
                _ => build_sparse_reduction(&f, r, p0, max_vertices),
            }
            .map_err(|e| anyhow!(e))?;
            emit_instance(&inst, out_dir)?
        }
        ReduceKind::Vc => {
            let h = read_hitting_set(input)?;
            let inst = build_vc_reduction(&h).map_err(|e| anyhow!(e))?;
            guard(inst.graph.n(), max_vertices)?;
            emit_instance(&inst, out_dir)?
        }
        ReduceKind::Tds => {
            let f = read_cnf(input)?;
            guard_u64(tds_vertex_count(&f), max_vertices)?;
            let inst = build_tds_reduction(&f).map_err(|e| anyhow!(e))?;
            emit_graph(&inst.graph, out_dir)?;
            write_td(&inst.decomposition, inst.graph.n(), &out_dir.join("decomposition.td"))?;
            let mut m = Manifest::new("tds");
            m.push("vars", inst.formula.num_vars);
            m.push("clauses", inst.formula.num_clauses());
            m.push("pairs", inst.pairs);
            m.push("regions", inst.regions);
            m.push("segments", inst.segments);
            m.push("n", inst.graph.n());
            m.push("m", inst.graph.m());
            m.push("budget", inst.budget);
            m.push("width", inst.decomposition.width());
            m.push_files(&[("graph", "graph.gr"), ("tags", "graph.tags")]);
            m.push("decomposition", "decomposition.td");
            m
        }
        ReduceKind::Ds => {
            let g = read_graph(input)?;
            guard_u64(2 * g.n() as u64, max_vertices)?;
            let doubled = build_ds_doubling(&g).map_err(|e| anyhow!(e))?;
            emit_graph(&doubled, out_dir)?;
            let mut m = Manifest::new("ds");
            m.push("n_orig", g.n());
            m.push("n", doubled.n());
            m.push("m", doubled.m());
            if let Some(b) = budget {
                // domination budgets carry over between the two graphs
                m.push("budget", b);
            }
            m.push_files(&[("graph", "graph.gr"), ("tags", "graph.tags")]);
            m
        }
        ReduceKind::Maxcut => {
            let g = read_graph(input)?;
            guard_u64(g.n() as u64 + 1 + 2 * g.m() as u64, max_vertices)?;
            let x = match modulator_file {
                Some(path) => read_id_list(&path, g.n())?,
                None => Vec::new(),
            };
            let red = build_maxcut_reduction(&g, &x);
            emit_graph(&red.graph, out_dir)?;
            write_id_lines(&red.modulator.iter().map(|&v| vec![v]).collect::<Vec<_>>(),
                &out_dir.join("modulator.txt"))?;
            let mut m = Manifest::new("maxcut");
            m.push("n_orig", red.n_orig);
            m.push("n", red.graph.n());
            m.push("m", red.graph.m());
            m.push("base", red.base);
            m.push("modulator_size", red.modulator.len());
            if let Some(b) = budget {
                m.push("cut_target", red.cut_target(b));
            }
            m.push_files(&[
                ("graph", "graph.gr"),
                ("tags", "graph.tags"),
                ("modulator", "modulator.txt"),
            ]);
            m
        }
        ReduceKind::Krfree => {
            let g = read_graph(input)?;
            let r = r.ok_or_else(|| anyhow!("--kind krfree needs --r"))?;
            if r < 3 {
                bail!("--kind krfree needs --r at least 3");
            }
            guard_u64(g.n() as u64 + (r as u64 - 2) * g.m() as u64, max_vertices)?;
            let (out, cliques) = build_krfree_reduction(&g, r);
            emit_graph(&out, out_dir)?;
            write_id_lines(&cliques, &out_dir.join("cliques.txt"))?;
            let mut m = Manifest::new("krfree");
            m.push("r", r);
            m.push("n_orig", g.n());
            m.push("n", out.n());
            m.push("m", out.m());
            m.push("cliques_count", cliques.len());
            if let Some(b) = budget {
                // a deletion budget translates unchanged from vertex cover
                m.push("budget", b);
            }
            m.push_files(&[
                ("graph", "graph.gr"),
                ("tags", "graph.tags"),
                ("cliques", "cliques.txt"),
            ]);
            m
        }
    };
    let text = manifest.render();
    fs::write(out_dir.join("manifest.txt"), &text)?;
    emit(&text)?;
    Ok(0)
}

fn guard(n: usize, max_vertices: usize) -> Result<()> {
    guard_u64(n as u64, max_vertices)
}

fn guard_u64(predicted: u64, max_vertices: usize) -> Result<()> {
    if predicted > max_vertices as u64 {
        bail!(
            "construction needs {} vertices, over the limit of {}; raise the cap to proceed",
            predicted,
            max_vertices
        );
    }
    Ok(())
}

/// graph.gr plus graph.tags next to it.
fn emit_graph(g: &Graph, out_dir: &Path) -> Result<()> {
    let mut out = BufWriter::new(File::create(out_dir.join("graph.gr"))?);
    write_edge_list(g, &mut out)?;
    out.flush()?;
    let mut out = BufWriter::new(File::create(out_dir.join("graph.tags"))?);
    write_tags(g, &mut out)?;
    out.flush()?;
    Ok(())
}

/// Full dump of a compiled instance: graph, modulator, packing, central
/// clique, witness decompositions, and the manifest tying them together.
fn emit_instance(inst: &ReductionInstance, out_dir: &Path) -> Result<Manifest> {
    emit_graph(&inst.graph, out_dir)?;
    write_id_lines(&inst.modulator, &out_dir.join("modulator.txt"))?;

    let mut out = BufWriter::new(File::create(out_dir.join("packing.txt"))?);
    for piece in &inst.packing {
        write!(out, "{}", piece.claim)?;
        for &v in &piece.verts {
            write!(out, " {}", v + 1)?;
        }
        writeln!(out)?;
    }
    out.flush()?;

    write_id_lines(&[inst.central.clone()], &out_dir.join("central.txt"))?;

    let mut out = BufWriter::new(File::create(out_dir.join("witnesses.txt"))?);
    for w in &inst.witnesses {
        writeln!(out, "w {}", w.bags.len())?;
        for bag in &w.bags {
            write!(out, "b")?;
            for &v in bag {
                write!(out, " {}", v + 1)?;
            }
            writeln!(out)?;
        }
        for &(a, b) in &w.edges {
            writeln!(out, "e {} {}", a + 1, b + 1)?;
        }
    }
    out.flush()?;

    let mut m = Manifest::new(match inst.kind {
        ReductionKind::Dense => "dense",
        ReductionKind::Sparse => "sparse",
        ReductionKind::VertexCover => "vc",
    });
    if let Some(p) = &inst.params {
        m.push("r", p.r);
        m.push("p0", p.p0);
        m.push("t", p.t);
        m.push("p", p.p);
        if !p.level_counts.is_empty() {
            let csv: Vec<String> = p.level_counts.iter().map(|c| c.to_string()).collect();
            m.push("level_counts", csv.join(","));
        }
    }
    m.push("n", inst.graph.n());
    m.push("m", inst.graph.m());
    m.push("budget", inst.budget);
    m.push("cost_packing", inst.cost_packing);
    m.push("witness_width", inst.witness_width);
    m.push("modulator_blocks", inst.modulator.len());
    m.push("modulator_size", inst.modulator.iter().map(|b| b.len()).sum::<usize>());
    m.push("packing_pieces", inst.packing.len());
    m.push("central_size", inst.central.len());
    m.push("witness_count", inst.witnesses.len());
    m.push_files(&[
        ("graph", "graph.gr"),
        ("tags", "graph.tags"),
        ("modulator", "modulator.txt"),
        ("packing", "packing.txt"),
        ("central", "central.txt"),
        ("witnesses", "witnesses.txt"),
    ]);
    Ok(m)
}

// --------------------------------------------------------------- verify

fn cmd_verify(manifest_path: &Path, threads: usize) -> Result<u8> {
    if threads == 0 {
        bail!("--threads must be at least 1");
    }
    let manifest = Manifest::read(manifest_path)?;
    let dir = manifest_path.parent().unwrap_or(Path::new("."));
    let kind = manifest.get("kind")?;

    let report = match kind {
        "dense" | "sparse" | "vc" => {
            let inst = load_instance(&manifest, dir)?;
            verify_reduction_instance_threaded(&inst, threads)
        }
        "tds" => verify_tds_manifest(&manifest, dir)?,
        "ds" => verify_ds_manifest(&manifest, dir)?,
        "maxcut" => verify_maxcut_manifest(&manifest, dir)?,
        "krfree" => verify_krfree_manifest(&manifest, dir)?,
        other => bail!("manifest kind {:?} is not recognized", other),
    };
    emit(&report.render_text())?;
    Ok(if report.pass() { 0 } else { 1 })
}

fn item(name: &'static str, result: Result<(), String>) -> CheckItem {
    match result {
        Ok(()) => CheckItem { name, pass: true, detail: String::new() },
        Err(detail) => CheckItem { name, pass: false, detail },
    }
}

/// n and m of the graph on disk against the manifest.
fn graph_shape_item(manifest: &Manifest, g: &Graph) -> Result<CheckItem> {
    let n: usize = manifest.parse("n")?;
    let m: usize = manifest.parse("m")?;
    Ok(item(
        "graph_shape",
        if g.n() == n && g.m() == m {
            Ok(())
        } else {
            Err(format!(
                "graph has {} vertices and {} edges, manifest says {} and {}",
                g.n(),
                g.m(),
                n,
                m
            ))
        },
    ))
}

fn verify_tds_manifest(manifest: &Manifest, dir: &Path) -> Result<VerifyReport> {
    let g = read_graph(&dir.join(manifest.get("graph")?))?;
    let d = read_td(&dir.join(manifest.get("decomposition")?), g.n())?;
    let declared: u32 = manifest.parse("width")?;
    let mut items = vec![graph_shape_item(manifest, &g)?];
    let width = verify_decomposition(&g, &d);
    items.push(item(
        "decomposition",
        width.as_ref().map(|_| ()).map_err(|e| e.to_string()),
    ));
    items.push(item(
        "width",
        match width {
            Ok(w) if w <= declared => Ok(()),
            Ok(w) => Err(format!("decomposition has width {}, manifest says {}", w, declared)),
            Err(_) => Err("width unavailable, decomposition is invalid".into()),
        },
    ));
    Ok(VerifyReport { items })
}

fn verify_ds_manifest(manifest: &Manifest, dir: &Path) -> Result<VerifyReport> {
    let g = read_graph(&dir.join(manifest.get("graph")?))?;
    let mut items = vec![graph_shape_item(manifest, &g)?];
    // the doubling leaves every twin class a false-twin class of even size
    items.push(item("doubling_twins", {
        let mut res = Ok(());
        for block in &twinclass_partition(&g).blocks {
            if block.len() % 2 != 0 {
                res = Err(format!("twin class of vertex {} has odd size {}", block[0], block.len()));
                break;
            }
            match classify_twinclass(&g, block) {
                Ok(TwinClassKind::FalseTwins) => {}
                Ok(k) => {
                    res = Err(format!("twin class of vertex {} is {:?}", block[0], k));
                    break;
                }
                Err(e) => {
                    res = Err(e);
                    break;
                }
            }
        }
        res
    }));
    Ok(VerifyReport { items })
}

fn verify_maxcut_manifest(manifest: &Manifest, dir: &Path) -> Result<VerifyReport> {
    let g = read_graph(&dir.join(manifest.get("graph")?))?;
    let n_orig: u32 = manifest.parse("n_orig")?;
    let mut items = vec![graph_shape_item(manifest, &g)?];
    items.push(item("apex", {
        let apex = n_orig;
        if (apex as usize) < g.n() && g.degree(apex) == g.n() - 1 {
            Ok(())
        } else {
            Err(format!("vertex {} is not adjacent to everything else", apex))
        }
    }));
    Ok(VerifyReport { items })
}

fn verify_krfree_manifest(manifest: &Manifest, dir: &Path) -> Result<VerifyReport> {
    let g = read_graph(&dir.join(manifest.get("graph")?))?;
    let r: usize = manifest.parse("r")?;
    let cliques = read_id_lines(&dir.join(manifest.get("cliques")?), g.n())?;
    let mut items = vec![graph_shape_item(manifest, &g)?];
    items.push(item("cliques", {
        let mut res = Ok(());
        'outer: for (i, c) in cliques.iter().enumerate() {
            if c.len() != r {
                res = Err(format!("line {} lists {} vertices, expected {}", i + 1, c.len(), r));
                break;
            }
            for a in 0..c.len() {
                for b in a + 1..c.len() {
                    if !g.has_edge(c[a], c[b]) {
                        res = Err(format!("line {}: {} and {} are not adjacent", i + 1, c[a], c[b]));
                        break 'outer;
                    }
                }
            }
        }
        res
    }));
    Ok(VerifyReport { items })
}

/// Rebuilds a compiled instance from its manifest and sidecar files. Kappa
/// tables and layout extras are not persisted; the checks do not use them.
fn load_instance(manifest: &Manifest, dir: &Path) -> Result<ReductionInstance> {
    let kind = match manifest.get("kind")? {
        "dense" => ReductionKind::Dense,
        "sparse" => ReductionKind::Sparse,
        "vc" => ReductionKind::VertexCover,
        other => bail!("manifest kind {:?} is not a compiled instance", other),
    };
    let graph = read_graph(&dir.join(manifest.get("graph")?))?;
    let n = graph.n();

    let modulator = read_id_lines(&dir.join(manifest.get("modulator")?), n)?;
    let central = read_id_lines(&dir.join(manifest.get("central")?), n)?
        .into_iter()
        .flatten()
        .collect();

    let mut packing = Vec::new();
    let path = dir.join(manifest.get("packing")?);
    let file = File::open(&path).with_context(|| format!("reading {}", path.display()))?;
    for (lineno, line) in BufReader::new(file).lines().enumerate() {
        let line = line?;
        let mut it = line.split_whitespace();
        let claim = match it.next() {
            None => continue,
            Some(tok) => tok
                .parse()
                .map_err(|_| anyhow!("{}:{}: bad claim", path.display(), lineno + 1))?,
        };
        let verts = parse_ids(it, n)
            .map_err(|e| anyhow!("{}:{}: {}", path.display(), lineno + 1, e))?;
        packing.push(PackingEntry { claim, verts });
    }

    let witnesses = read_witnesses(&dir.join(manifest.get("witnesses")?), n)?;

    let params = match manifest.find("r") {
        None => None,
        Some(_) => Some(ReductionParams {
            r: manifest.parse("r")?,
            p0: manifest.parse("p0")?,
            t: manifest.parse("t")?,
            p: manifest.parse("p")?,
            level_counts: match manifest.find("level_counts") {
                None => Vec::new(),
                Some(csv) => csv
                    .split(',')
                    .map(|tok| tok.parse().map_err(|_| anyhow!("bad level_counts entry {:?}", tok)))
                    .collect::<Result<_>>()?,
            },
        }),
    };

    Ok(ReductionInstance {
        kind,
        graph,
        budget: manifest.parse("budget")?,
        modulator,
        packing,
        cost_packing: manifest.parse("cost_packing")?,
        central,
        kappas: Vec::new(),
        witnesses,
        witness_width: manifest.parse("witness_width")?,
        params,
        dtc: None,
        vc: None,
    })
}

// --------------------------------------------------------------- oracle

fn cmd_oracle(problem: OracleProblem, input: &Path, r: Option<u8>, cap: Option<u32>) -> Result<u8> {
    if problem == OracleProblem::Dtc {
        let g = read_graph(input)?;
        let r = r.ok_or_else(|| anyhow!("--problem dtc needs --r"))?;
        let cap = cap.unwrap_or(g.n() as u32);
        return match min_deletions_r_colorable(&g, r, cap, None) {
            DeletionOutcome::Solved { cost, .. } => {
                emit(&format!("cost {}\n", cost))?;
                Ok(0)
            }
            DeletionOutcome::ExceedsCap => {
                emit(&format!("exceeds-cap {}\n", cap))?;
                Ok(1)
            }
        };
    }

    let cnf;
    let sets;
    let graph;
    let (kind, payload) = match problem {
        OracleProblem::Vc => {
            graph = read_graph(input)?;
            (ProblemKind::VertexCover, ProblemInput::Graph(&graph))
        }
        OracleProblem::Ds => {
            graph = read_graph(input)?;
            (ProblemKind::DominatingSet, ProblemInput::Graph(&graph))
        }
        OracleProblem::Tds => {
            graph = read_graph(input)?;
            (ProblemKind::TotalDominatingSet, ProblemInput::Graph(&graph))
        }
        OracleProblem::Maxcut => {
            graph = read_graph(input)?;
            (ProblemKind::MaxCut, ProblemInput::Graph(&graph))
        }
        OracleProblem::Krfree => {
            graph = read_graph(input)?;
            let r = r.ok_or_else(|| anyhow!("--problem krfree needs --r"))?;
            (ProblemKind::KrFreeDeletion(r), ProblemInput::Graph(&graph))
        }
        OracleProblem::Hs => {
            sets = read_hitting_set(input)?;
            (ProblemKind::HittingSet, ProblemInput::Sets(&sets))
        }
        OracleProblem::Sat => {
            cnf = read_cnf(input)?;
            (ProblemKind::Sat, ProblemInput::Cnf(&cnf))
        }
        OracleProblem::Dtc => unreachable!("handled above"),
    };
    let res = solve_exact(kind, &payload).map_err(|e| anyhow!(e))?;
    emit(&format!("value {}\n", res.value))?;
    // satisfiability is a yes/no question, the rest are optima
    Ok(if problem == OracleProblem::Sat && res.value == 0 { 1 } else { 0 })
}

// --------------------------------------------------- gen-critical, twins

fn cmd_gen_critical(t: u32, gamma: u32, out_dir: &Path) -> Result<u8> {
    if t < 3 || gamma < 1 {
        bail!("gen-critical needs --t at least 3 and --gamma at least 1");
    }
    fs::create_dir_all(out_dir)
        .with_context(|| format!("creating {}", out_dir.display()))?;
    let cg = build_critical(t, gamma);
    let mut out = BufWriter::new(File::create(out_dir.join("critical.gr"))?);
    write_edge_list(&cg.graph, &mut out)?;
    out.flush()?;
    let mut out = BufWriter::new(File::create(out_dir.join("critical.tags"))?);
    write_tags(&cg.graph, &mut out)?;
    out.flush()?;
    write_td(&cg.decomposition, cg.graph.n(), &out_dir.join("critical.td"))?;

    let mut m = Manifest::new("critical");
    m.push("t", t);
    m.push("gamma", gamma);
    m.push("n", cg.graph.n());
    m.push("m", cg.graph.m());
    m.push("width", cg.decomposition.width());
    emit(&m.render())?;
    Ok(0)
}

fn cmd_twinclass(input: &Path) -> Result<u8> {
    let g = read_graph(input)?;
    let mut out = String::new();
    for block in &twinclass_partition(&g).blocks {
        let kind = match classify_twinclass(&g, block).map_err(|e| anyhow!(e))? {
            TwinClassKind::Singleton => "singleton",
            TwinClassKind::TrueTwins => "true-twins",
            TwinClassKind::FalseTwins => "false-twins",
        };
        let ids: Vec<String> = block.iter().map(|&v| (v + 1).to_string()).collect();
        let _ = writeln!(out, "{} {}", kind, ids.join(" "));
    }
    emit(&out)?;
    Ok(0)
}

// ---------------------------------------------------------- file formats

fn read_graph(path: &Path) -> Result<Graph> {
    let file = File::open(path).with_context(|| format!("reading {}", path.display()))?;
    read_edge_list(BufReader::new(file)).map_err(|e| anyhow!("{}: {}", path.display(), e))
}

fn read_cnf(path: &Path) -> Result<CnfFormula> {
    let file = File::open(path).with_context(|| format!("reading {}", path.display()))?;
    CnfFormula::parse_dimacs(BufReader::new(file))
        .map_err(|e| anyhow!("{}: {}", path.display(), e))
}

fn read_hitting_set(path: &Path) -> Result<HittingSetInstance> {
    let file = File::open(path).with_context(|| format!("reading {}", path.display()))?;
    HittingSetInstance::parse(BufReader::new(file))
        .map_err(|e| anyhow!("{}: {}", path.display(), e))
}

fn parse_ids<'a, I: Iterator<Item = &'a str>>(it: I, n: usize) -> Result<Vec<u32>, String> {
    let mut out = Vec::new();
    for tok in it {
        let id: u32 = tok.parse().map_err(|_| format!("bad vertex id {:?}", tok))?;
        if id == 0 || id as usize > n {
            return Err(format!("vertex id {} out of range", id));
        }
        out.push(id - 1);
    }
    Ok(out)
}

/// One line of 1-based ids per row; blank lines and `c` comments skipped.
fn read_id_lines(path: &Path, n: usize) -> Result<Vec<Vec<u32>>> {
    let file = File::open(path).with_context(|| format!("reading {}", path.display()))?;
    let mut out = Vec::new();
    for (lineno, line) in BufReader::new(file).lines().enumerate() {
        let line = line?;
        let line = line.trim();
        if line.is_empty() || line.starts_with('c') {
            continue;
        }
        out.push(
            parse_ids(line.split_whitespace(), n)
                .map_err(|e| anyhow!("{}:{}: {}", path.display(), lineno + 1, e))?,
        );
    }
    Ok(out)
}

fn read_id_list(path: &Path, n: usize) -> Result<Vec<u32>> {
    Ok(read_id_lines(path, n)?.into_iter().flatten().collect())
}

fn write_id_lines(rows: &[Vec<u32>], path: &Path) -> Result<()> {
    let mut out = BufWriter::new(File::create(path)?);
    for row in rows {
        let ids: Vec<String> = row.iter().map(|&v| (v + 1).to_string()).collect();
        writeln!(out, "{}", ids.join(" "))?;
    }
    out.flush()?;
    Ok(())
}

/// Decomposition file: `s td <bags> <width+1> <n>` header, `b <id> <v...>`
/// bag lines, then one `<a> <b>` skeleton edge per line, everything 1-based.
fn write_td(d: &TreeDecomposition, n: usize, path: &Path) -> Result<()> {
    let mut out = BufWriter::new(File::create(path)?);
    writeln!(out, "s td {} {} {}", d.bags.len(), d.width() + 1, n)?;
    for (i, bag) in d.bags.iter().enumerate() {
        write!(out, "b {}", i + 1)?;
        for &v in bag {
            write!(out, " {}", v + 1)?;
        }
        writeln!(out)?;
    }
    for &(a, b) in &d.edges {
        writeln!(out, "{} {}", a + 1, b + 1)?;
    }
    out.flush()?;
    Ok(())
}

fn read_td(path: &Path, n: usize) -> Result<TreeDecomposition> {
    let file = File::open(path).with_context(|| format!("reading {}", path.display()))?;
    let mut bags: Option<Vec<Vec<u32>>> = None;
    let mut edges = Vec::new();
    for (lineno, line) in BufReader::new(file).lines().enumerate() {
        let line = line?;
        let line = line.trim();
        let fail = |msg: &str| anyhow!("{}:{}: {}", path.display(), lineno + 1, msg);
        if line.is_empty() || line.starts_with('c') {
            continue;
        }
        let mut it = line.split_whitespace();
        match it.next() {
            Some("s") => {
                if it.next() != Some("td") {
                    return Err(fail("expected 's td'"));
                }
                let count: usize =
                    it.next().and_then(|t| t.parse().ok()).ok_or_else(|| fail("bad bag count"))?;
                bags = Some(vec![Vec::new(); count]);
            }
            Some("b") => {
                let bags = bags.as_mut().ok_or_else(|| fail("bag before header"))?;
                let id: usize =
                    it.next().and_then(|t| t.parse().ok()).ok_or_else(|| fail("bad bag id"))?;
                if id == 0 || id > bags.len() {
                    return Err(fail("bag id out of range"));
                }
                bags[id - 1] = parse_ids(it, n).map_err(|e| fail(&e))?;
            }
            Some(tok) => {
                let bags = bags.as_ref().ok_or_else(|| fail("edge before header"))?;
                let a: usize = tok.parse().map_err(|_| fail("bad bag id"))?;
                let b: usize =
                    it.next().and_then(|t| t.parse().ok()).ok_or_else(|| fail("bad bag id"))?;
                if a == 0 || a > bags.len() || b == 0 || b > bags.len() {
                    return Err(fail("bag id out of range"));
                }
                edges.push((a - 1, b - 1));
            }
            None => unreachable!("blank lines were skipped"),
        }
    }
    let bags = bags.ok_or_else(|| anyhow!("{}: missing 's td' header", path.display()))?;
    Ok(TreeDecomposition { bags, edges })
}

/// Witness decompositions, back to back: `w <bags>` starts one, `b <v...>`
/// lists its next bag, `e <a> <b>` adds a skeleton edge.
fn read_witnesses(path: &Path, n: usize) -> Result<Vec<TreeDecomposition>> {
    let file = File::open(path).with_context(|| format!("reading {}", path.display()))?;
    let mut out: Vec<TreeDecomposition> = Vec::new();
    let mut expected = 0usize;
    for (lineno, line) in BufReader::new(file).lines().enumerate() {
        let line = line?;
        let fail = |msg: &str| anyhow!("{}:{}: {}", path.display(), lineno + 1, msg);
        let mut it = line.split_whitespace();
        match it.next() {
            None => continue,
            Some("w") => {
                if let Some(last) = out.last() {
                    if last.bags.len() != expected {
                        return Err(fail("previous witness is short of bags"));
                    }
                }
                expected =
                    it.next().and_then(|t| t.parse().ok()).ok_or_else(|| fail("bad bag count"))?;
                out.push(TreeDecomposition { bags: Vec::new(), edges: Vec::new() });
            }
            Some("b") => {
                let w = out.last_mut().ok_or_else(|| fail("bag before 'w' line"))?;
                if w.bags.len() == expected {
                    return Err(fail("more bags than announced"));
                }
                w.bags.push(parse_ids(it, n).map_err(|e| fail(&e))?);
            }
            Some("e") => {
                let w = out.last_mut().ok_or_else(|| fail("edge before 'w' line"))?;
                let a: usize =
                    it.next().and_then(|t| t.parse().ok()).ok_or_else(|| fail("bad bag id"))?;
                let b: usize =
                    it.next().and_then(|t| t.parse().ok()).ok_or_else(|| fail("bad bag id"))?;
                if a == 0 || a > expected || b == 0 || b > expected {
                    return Err(fail("bag id out of range"));
                }
                w.edges.push((a - 1, b - 1));
            }
            Some(_) => return Err(fail("expected 'w', 'b' or 'e'")),
        }
    }
    if let Some(last) = out.last() {
        if last.bags.len() != expected {
            bail!("{}: last witness is short of bags", path.display());
        }
    }
    Ok(out)
}

/// Ordered key=value lines; keys stay unique and insertion-ordered so
/// reruns emit byte-identical manifests.
struct Manifest {
    entries: Vec<(String, String)>,
}

impl Manifest {
    fn new(kind: &str) -> Self {
        Manifest { entries: vec![("kind".into(), kind.into())] }
    }

    fn push(&mut self, key: &str, value: impl ToString) {
        debug_assert!(self.find(key).is_none(), "duplicate manifest key {}", key);
        self.entries.push((key.into(), value.to_string()));
    }

    fn push_files(&mut self, pairs: &[(&str, &str)]) {
        for &(k, v) in pairs {
            self.push(k, v);
        }
    }

    fn find(&self, key: &str) -> Option<&str> {
        self.entries.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }

    fn get(&self, key: &str) -> Result<&str> {
        self.find(key).ok_or_else(|| anyhow!("manifest is missing key {:?}", key))
    }

    fn parse<T: std::str::FromStr>(&self, key: &str) -> Result<T> {
        self.get(key)?
            .parse()
            .map_err(|_| anyhow!("manifest key {:?} has a malformed value", key))
    }

    fn render(&self) -> String {
        let mut out = String::new();
        for (k, v) in &self.entries {
            let _ = writeln!(out, "{}={}", k, v);
        }
        out
    }

    fn read(path: &Path) -> Result<Self> {
        let text =
            fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        let mut entries = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| anyhow!("{}:{}: expected key=value", path.display(), lineno + 1))?;
            entries.push((k.trim().to_string(), v.trim().to_string()));
        }
        Ok(Manifest { entries })
    }
}
