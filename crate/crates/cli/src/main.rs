//! `hset`: file-driven front end to the hyperset library.
//!
//! Exit status is 0 on success, 1 when the input is rejected and 2 on usage
//! errors.

use std::collections::BTreeSet;
use std::fs;
use std::io::{self, Read};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand};
use hyperset::constructions::{check_embedding, check_graft, fresh_tags, populate_cumulative};
use hyperset::logic::{eval, interpret_digraph, phi_n_at, translate};
use hyperset::{
    bouquet, components, d_graph, ef_equiv, embed_graph, flower, graft_ball, rieger, sd_graph, solve, BallSpec, Dump,
    FiniteStructure, FlatSystem, Formula, Graph, Hyperset, PhiClass, Slice, Store, Symbol,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[derive(Parser)]
#[command(name = "hset", version, about = "Hypersets, double-membership graphs and finite model checking")]
struct Cli {
    /// Emit structures as DOT instead of the text format.
    #[arg(long, global = true)]
    dot: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve a flat system and print the canonical dump of its solution.
    Solve { system: PathBuf },
    /// Compare the first points of two dumps.
    CanonEq { left: PathBuf, right: PathBuf },
    /// D-graph of every set in a dump (file or `-` for stdin).
    Dgraph { dump: Option<PathBuf> },
    /// SD-structure of every set in a dump (file or `-` for stdin).
    Sdgraph { dump: Option<PathBuf> },
    /// Connected components of the D relation of a structure.
    Components { structure: PathBuf },
    /// Embed a graph as a double-membership graph.
    Embed { graph: PathBuf },
    /// The n-flower.
    Flower { n: usize },
    /// The bouquet for a comma-separated set of positive naturals.
    Bouquet {
        #[arg(value_delimiter = ',', num_args = 0..)]
        sizes: Vec<usize>,
    },
    /// Build the permutation model for a graph and check it.
    Rieger {
        graph: PathBuf,
        /// Also test every well-founded set up to this rank (default: top rank + 1).
        #[arg(long)]
        rank_bound: Option<u32>,
    },
    /// Graft a ball of a solved system next to a target ball.
    Graft {
        system: PathBuf,
        #[arg(long)]
        center: String,
        #[arg(long, default_value_t = 1)]
        radius: usize,
        #[arg(long)]
        target: String,
        #[arg(long, default_value_t = 0)]
        target_radius: usize,
        /// Prescribed S-edge `i=name`: ball vertex `i` meets the target set `name`.
        #[arg(long = "s-edge")]
        s_edges: Vec<String>,
    },
    /// Evaluate a formula in a structure.
    Eval {
        structure: PathBuf,
        formula: String,
        /// Assignment `var=vertex`; repeatable.
        #[arg(long = "assign")]
        assign: Vec<String>,
    },
    /// The neighbourhood transform of a symmetric sentence.
    Mu {
        formula: String,
        /// Accept the sentence by checking all models up to this size
        /// instead of requiring a symmetry conjunct.
        #[arg(long)]
        checked: Option<usize>,
    },
    /// The n-flower formula.
    PhiN {
        n: usize,
        #[arg(long, default_value = "x")]
        var: String,
    },
    /// Gadget graph of a digraph, or the translation of a formula with `--formula`.
    Interpret {
        digraph: Option<PathBuf>,
        #[arg(long)]
        formula: Option<String>,
    },
    /// Decide k-round Ehrenfeucht-Fraisse equivalence.
    Ef {
        left: PathBuf,
        right: PathBuf,
        #[arg(long)]
        k: usize,
        #[arg(long = "left-tuple", value_delimiter = ',')]
        left_tuple: Vec<usize>,
        #[arg(long = "right-tuple", value_delimiter = ',')]
        right_tuple: Vec<usize>,
    },
    /// A random L1 graph.
    RandomGraph {
        #[arg(long)]
        vertices: usize,
        #[arg(long, default_value_t = 0.5)]
        density: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

fn read_input(path: Option<&Path>) -> Result<String> {
    match path {
        Some(p) if p != Path::new("-") => fs::read_to_string(p).with_context(|| format!("cannot read {}", p.display())),
        _ => {
            let mut s = String::new();
            io::stdin().read_to_string(&mut s).context("cannot read stdin")?;
            Ok(s)
        }
    }
}

fn read_structure(path: &Path) -> Result<FiniteStructure> {
    let text = read_input(Some(path))?;
    FiniteStructure::parse(&text).with_context(|| format!("in {}", path.display()))
}

fn read_graph(path: &Path) -> Result<Graph> {
    Graph::from_structure(read_structure(path)?).with_context(|| format!("in {}", path.display()))
}

fn read_dump(path: Option<&Path>, store: &mut Store) -> Result<(Dump, Vec<Hyperset>)> {
    let dump = Dump::parse(&read_input(path)?)?;
    let sets = store.realize(&dump.children)?;
    Ok((dump, sets))
}

fn parse_formula(text: &str) -> Result<Formula> {
    text.parse().with_context(|| format!("cannot parse formula `{text}`"))
}

fn show(s: &FiniteStructure, dot: bool) -> String {
    if dot {
        s.to_dot()
    } else {
        s.to_string()
    }
}

fn named<'a>(prefix: &str, sets: impl IntoIterator<Item = &'a Hyperset>) -> Vec<(String, Hyperset)> {
    sets.into_iter().enumerate().map(|(i, &h)| (format!("{prefix}{i}"), h)).collect()
}

fn run(cli: Cli) -> Result<String> {
    let mut store = Store::new();
    let out = match cli.command {
        Command::Solve { system } => {
            let sys = FlatSystem::parse(&read_input(Some(&system))?, &mut store)?;
            let sol = solve(&mut store, &sys)?;
            let points: Vec<(&str, Hyperset)> = sol.iter().map(|(k, &h)| (k.as_str(), h)).collect();
            store.dump(&points)
        }
        Command::CanonEq { left, right } => {
            let mut first = |p: &Path| -> Result<Hyperset> {
                let (dump, sets) = read_dump(Some(p), &mut store)?;
                let &(_, i) = dump.points.first().ok_or_else(|| anyhow!("{} names no point", p.display()))?;
                Ok(sets[i])
            };
            let (a, b) = (first(&left)?, first(&right)?);
            format!("equal: {}\n", a == b)
        }
        Command::Dgraph { dump } => {
            let (_, sets) = read_dump(dump.as_deref(), &mut store)?;
            let slice = Slice::new(&store, sets.iter().copied())?;
            show(&relabel(&d_graph(&store, &slice), &slice, &sets), cli.dot)
        }
        Command::Sdgraph { dump } => {
            let (_, sets) = read_dump(dump.as_deref(), &mut store)?;
            let slice = Slice::new(&store, sets.iter().copied())?;
            show(&relabel(&sd_graph(&store, &slice), &slice, &sets), cli.dot)
        }
        Command::Components { structure } => {
            let s = read_structure(&structure)?;
            if !s.language().has(Symbol::D) {
                bail!("components need a structure with D, got {}", s.language());
            }
            components(&s)
                .into_iter()
                .map(|c| c.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(" ") + "\n")
                .collect()
        }
        Command::Embed { graph } => {
            let g = read_graph(&graph)?;
            let img = embed_graph(&mut store, &g);
            let check = check_embedding(&store, &g, &img);
            if !check.passed() {
                bail!("embedding check failed: {check:?}");
            }
            store.dump(&named("v", &img))
        }
        Command::Flower { n } => {
            let a = flower(&mut store, n)?;
            store.dump(&[("a", a)])
        }
        Command::Bouquet { sizes } => {
            let set: BTreeSet<usize> = sizes.into_iter().collect();
            let b = bouquet(&mut store, &set)?;
            store.dump(&[("b", b)])
        }
        Command::Rieger { graph, rank_bound } => {
            let g = read_graph(&graph)?;
            populate_cumulative(&mut store, 4);
            let m = rieger(&mut store, &g)?;
            let bound = rank_bound.unwrap_or(m.top_rank(&store) + 1);
            let report = m.check_slice(&store, &g, bound);
            let on_a = Slice::new(&store, m.a.iter().copied())?;
            let mut out = String::new();
            out.push_str(&format!("rank bound: {bound}\n"));
            out.push_str(&format!("slice size: {}\n", report.slice_len));
            out.push_str(&format!(
                "cases: fixed {} a {} b {}\n",
                report.fixed_cases, report.a_cases, report.b_cases
            ));
            out.push_str(&format!("extraneous D edges: {}\n", report.violations.len()));
            out.push_str(&format!("realises graph: {}\n", report.realises_graph));
            out.push_str(&show(&relabel(&m.membership.d_graph(&store, &on_a), &on_a, &m.a), cli.dot));
            if !report.passed() {
                bail!("{out}permutation model check failed");
            }
            out
        }
        Command::Graft { system, center, radius, target, target_radius, s_edges } => {
            let sys = FlatSystem::parse(&read_input(Some(&system))?, &mut store)?;
            let sol = solve(&mut store, &sys)?;
            let lookup = |name: &str| sol.get(name).copied().ok_or_else(|| anyhow!("no indeterminate `{name}`"));
            let ball = BallSpec::around(&store, lookup(&center)?, radius)?;
            let target = BallSpec::around(&store, lookup(&target)?, target_radius)?.slice;
            let mut s_targets = vec![Vec::new(); ball.len()];
            for spec in &s_edges {
                let (i, name) = spec.split_once('=').ok_or_else(|| anyhow!("bad --s-edge `{spec}`, want i=name"))?;
                let i: usize = i.parse().with_context(|| format!("bad ball vertex in `{spec}`"))?;
                let slot = s_targets.get_mut(i).ok_or_else(|| anyhow!("ball has no vertex {i}"))?;
                slot.push(lookup(name)?);
            }
            let tags = fresh_tags(&mut store, ball.len());
            let img = graft_ball(&mut store, &ball, &target, &tags, &s_targets)?;
            let check = check_graft(&store, &ball, &target, &tags, &s_targets, &img);
            if !check.passed() {
                bail!("graft check failed: {check:?}");
            }
            let mut points = named("d", ball.slice.members());
            points.extend(named("g", &img));
            store.dump(&points)
        }
        Command::Eval { structure, formula, assign } => {
            let s = read_structure(&structure)?;
            let f = parse_formula(&formula)?;
            let asg = assign
                .iter()
                .map(|a| {
                    let (v, x) = a.split_once('=').ok_or_else(|| anyhow!("bad --assign `{a}`, want var=vertex"))?;
                    Ok((v.to_string(), x.parse::<usize>().with_context(|| format!("bad vertex in `{a}`"))?))
                })
                .collect::<Result<Vec<_>>>()?;
            format!("{}\n", eval(&s, &f, &asg)?)
        }
        Command::Mu { formula, checked } => {
            let f = parse_formula(&formula)?;
            let phi = match checked {
                Some(n) => PhiClass::checked(f, n)?,
                None => PhiClass::syntactic(f)?,
            };
            format!("{}\n", phi.mu())
        }
        Command::PhiN { n, var } => format!("{}\n", phi_n_at(n, &var)?),
        Command::Interpret { digraph, formula } => match (digraph, formula) {
            (None, Some(f)) => format!("{}\n", translate(&parse_formula(&f)?)?),
            (Some(d), None) => show(&interpret_digraph(&read_structure(&d)?)?, cli.dot),
            _ => bail!("give either a digraph file or --formula"),
        },
        Command::Ef { left, right, k, left_tuple, right_tuple } => {
            let (a, b) = (read_structure(&left)?, read_structure(&right)?);
            format!("equivalent: {}\n", ef_equiv(&a, &left_tuple, &b, &right_tuple, k)?)
        }
        Command::RandomGraph { vertices, density, seed } => {
            if !(0.0..=1.0).contains(&density) {
                bail!("density must lie in [0, 1]");
            }
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut g = Graph::new(vertices);
            for u in 0..vertices {
                for v in u..vertices {
                    if rng.gen_bool(density) {
                        g.add_edge(u, v)?;
                    }
                }
            }
            show(g.as_structure(), cli.dot)
        }
    };
    Ok(out)
}

/// Renumbers a slice structure so that its vertices follow the first
/// occurrences in `sets`. Dumps from elsewhere may list one set twice.
fn relabel(s: &FiniteStructure, slice: &Slice, sets: &[Hyperset]) -> FiniteStructure {
    let mut order: Vec<Hyperset> = Vec::with_capacity(slice.len());
    for &h in sets {
        if !order.contains(&h) {
            order.push(h);
        }
    }
    let perm: Vec<usize> = slice.members().iter().map(|&h| order.iter().position(|&x| x == h).expect("listed")).collect();
    s.permuted(&perm)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
