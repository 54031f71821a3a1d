//! Argument handling and command dispatch for the `ltype` binary.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context};
use clap::{Parser, Subcommand, ValueEnum};
use serde::Deserialize;

use ltype::census::{self, CensusOptions, CensusState};
use ltype::delone::{dv_polytope, STAR_SCHEMA};
use ltype::isometry::isometry;
use ltype::linalg::IntMatrix;
use ltype::polyhedral::{adjacency_decomposition, dual_description, AdjacencyOptions, ConeFile, OrbitRegistry};
use ltype::secondary::{rigidity_degree, triangulation_isomorphic};
use ltype::{DeloneStar, QuadForm, SymmetryAction};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "ltype", version, about = "L-type domains, Delone subdivisions and rigid quadratic forms")]
pub struct Cli {
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Stop adjacency decomposition only when fewer than D-2 rays are untreated.
    #[arg(long, global = true)]
    pub strict_balinski: bool,
    /// Continue from the state or registry found at the output path.
    #[arg(long, global = true)]
    pub resume: bool,
    /// Orbits with at least this many incident facets are split recursively.
    #[arg(long, global = true, default_value_t = 40)]
    pub recursion_threshold: usize,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Enumerate the primitive L-type domains of dimension d.
    Enumerate {
        #[arg(long)]
        dim: usize,
        #[arg(long)]
        max_domains: Option<usize>,
        /// State file; `.gz` is compressed. Rewritten after every domain.
        #[arg(long)]
        out: PathBuf,
    },
    /// Extreme rays of the domains of a census, by adjacency decomposition.
    Rays {
        #[arg(long)]
        state: PathBuf,
        #[arg(long)]
        domain: Option<usize>,
    },
    /// Rigid positive definite forms among the extreme rays.
    Rigid {
        #[arg(long)]
        dim: usize,
        /// Complete census; enumerated in memory when absent.
        #[arg(long)]
        state: Option<PathBuf>,
    },
    /// Facet, ray and rank distributions.
    Tables {
        #[arg(long)]
        dim: usize,
        #[arg(long)]
        state: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = TableFormat::Csv)]
        format: TableFormat,
    },
    /// Checks that every ridge of every domain contains a degenerate form.
    TreeCheck {
        #[arg(long)]
        dim: usize,
        #[arg(long)]
        state: Option<PathBuf>,
    },
    /// Prints the rigidity degree of a form.
    CheckRigid {
        #[arg(long)]
        form: PathBuf,
    },
    /// Arithmetic equivalence of two forms, or of two Delone stars.
    Equiv {
        #[arg(long)]
        a: PathBuf,
        #[arg(long)]
        b: PathBuf,
    },
    /// Dirichlet-Voronoi polytope of a form.
    Dv {
        #[arg(long)]
        form: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Extreme rays of a cone.
    Dd {
        #[arg(long)]
        cone: PathBuf,
        /// Symmetry generators; overrides those in the cone file.
        #[arg(long)]
        group: Option<PathBuf>,
        #[arg(long)]
        adjacency_decomposition: bool,
        /// Orbit registry, rewritten after every treated orbit.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Checks on the six-dimensional forms E6*, R1 and R2.
    VerifyDim6 {
        /// Also check the Minkowski decomposition of DV(E6* + R2).
        #[arg(long)]
        minkowski: bool,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum TableFormat {
    Csv,
    Text,
}

/// Writes through a temporary file in the target directory.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> anyhow::Result<()> {
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
    let mut tmp = tempfile::NamedTempFile::new_in(dir).with_context(|| format!("creating file in {}", dir.display()))?;
    tmp.write_all(bytes)?;
    tmp.persist(path).with_context(|| format!("writing {}", path.display()))?;
    Ok(())
}

fn read(path: &Path) -> anyhow::Result<String> {
    std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn parse<T: for<'de> Deserialize<'de>>(path: &Path) -> anyhow::Result<T> {
    serde_json::from_str(&read(path)?).with_context(|| format!("parsing {}", path.display()))
}

fn load_form(path: &Path) -> anyhow::Result<QuadForm> {
    parse(path)
}

#[derive(Deserialize)]
#[serde(untagged)]
enum GroupFile {
    Tagged { generators: Vec<IntMatrix> },
    Bare(Vec<IntMatrix>),
}

fn load_state(path: &Path, dim: usize) -> anyhow::Result<CensusState> {
    let s = CensusState::load(path).with_context(|| format!("loading {}", path.display()))?;
    if s.dim != dim {
        bail!("{} holds a census for d = {}, not {dim}", path.display(), s.dim);
    }
    Ok(s)
}

fn complete_state(dim: usize, state: Option<&Path>) -> anyhow::Result<CensusState> {
    let s = match state {
        Some(p) => load_state(p, dim)?,
        None => census::enumerate_domains(dim, &CensusOptions::default(), None, |_| {})?,
    };
    if !s.complete {
        bail!("census for d = {dim} is incomplete; rerun `enumerate --resume`");
    }
    Ok(s)
}

fn save_state(s: &CensusState, path: &Path) -> anyhow::Result<()> {
    // CensusState::save already renames from a temporary file
    s.save(path).with_context(|| format!("writing {}", path.display()))
}

/// Parses `argv` (program name first), runs the command, and returns the
/// exit code.
pub fn run<I, T>(argv: I, out: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    if let Some(n) = cli.threads {
        // a second call in the same process keeps the first pool
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global();
    }
    match execute(&cli, out) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            EXIT_USAGE
        }
    }
}

fn adjacency_options(cli: &Cli) -> AdjacencyOptions {
    AdjacencyOptions { recursion_threshold: cli.recursion_threshold, strict_balinski: cli.strict_balinski }
}

fn execute(cli: &Cli, out: &mut dyn Write) -> anyhow::Result<i32> {
    match &cli.command {
        Command::Enumerate { dim, max_domains, out: path } => {
            let resume = if cli.resume && path.exists() { Some(load_state(path, *dim)?) } else { None };
            let opts = CensusOptions { max_domains: *max_domains };
            let mut save_err = None;
            let s = census::enumerate_domains(*dim, &opts, resume, |s| {
                if save_err.is_none() {
                    save_err = save_state(s, path).err();
                }
            })?;
            if let Some(e) = save_err {
                return Err(e);
            }
            save_state(&s, path)?;
            writeln!(out, "domains {}", s.domains.len())?;
            writeln!(out, "complete {}", s.complete)?;
            Ok(EXIT_OK)
        }
        Command::Rays { state, domain } => {
            let mut s = CensusState::load(state).with_context(|| format!("loading {}", state.display()))?;
            let opts = adjacency_options(cli);
            let ids: Vec<usize> = match domain {
                Some(id) if *id >= s.domains.len() => bail!("no domain {id}"),
                Some(id) => {
                    census::domain_rays(&mut s, *id, &opts)?;
                    vec![*id]
                }
                None => {
                    census::all_domain_rays(&mut s, &opts)?;
                    (0..s.domains.len()).collect()
                }
            };
            save_state(&s, state)?;
            writeln!(out, "domain\tfacets\trays\torbits\tranks")?;
            for id in ids {
                let r = &s.domains[id];
                let orbits = r.rays.as_ref().map_or(0, |g| g.orbits.len());
                let ranks: Vec<String> = r.rank_profile.iter().map(|(k, n)| format!("{k}:{n}")).collect();
                writeln!(out, "{id}\t{}\t{}\t{orbits}\t{}", r.num_facets(), r.num_rays, ranks.join(","))?;
            }
            Ok(EXIT_OK)
        }
        Command::Rigid { dim, state } => {
            let mut s = complete_state(*dim, state.as_deref())?;
            let forms = census::rigid_census(&mut s)?;
            writeln!(out, "{} rigid positive definite form(s) for d = {dim}", forms.len())?;
            for q in forms {
                writeln!(out, "\n{q}")?;
            }
            Ok(EXIT_OK)
        }
        Command::Tables { dim, state, format } => {
            let s = complete_state(*dim, state.as_deref())?;
            let t = census::distribution_tables(&s)?;
            match format {
                TableFormat::Csv => write!(out, "{}", t.to_csv())?,
                TableFormat::Text => write!(out, "{}", t.to_text())?,
            }
            Ok(EXIT_OK)
        }
        Command::TreeCheck { dim, state } => {
            let s = complete_state(*dim, state.as_deref())?;
            let r = census::tree_check(&s)?;
            writeln!(out, "ridges {}", r.ridges_checked)?;
            for (d, i, j) in &r.failures {
                writeln!(out, "FAIL domain {d} facets {i} {j}")?;
            }
            writeln!(out, "tree {}", if r.pass() { "pass" } else { "fail" })?;
            Ok(if r.pass() { EXIT_OK } else { EXIT_FAILED })
        }
        Command::CheckRigid { form } => {
            let q = load_form(form)?;
            writeln!(out, "{}", rigidity_degree(&q)?)?;
            Ok(EXIT_OK)
        }
        Command::Equiv { a, b } => {
            let (ta, tb) = (read(a)?, read(b)?);
            let is_star = |t: &str| t.contains(STAR_SCHEMA);
            let map = if is_star(&ta) && is_star(&tb) {
                let sa = DeloneStar::from_json(&ta).with_context(|| format!("parsing {}", a.display()))?;
                let sb = DeloneStar::from_json(&tb).with_context(|| format!("parsing {}", b.display()))?;
                triangulation_isomorphic(&sa, &sb)?
            } else {
                isometry(&load_form(a)?, &load_form(b)?)?
            };
            match map {
                Some(m) => {
                    writeln!(out, "equivalent")?;
                    writeln!(out, "{}", serde_json::to_string(&m)?)?;
                    Ok(EXIT_OK)
                }
                None => {
                    writeln!(out, "not equivalent")?;
                    Ok(EXIT_FAILED)
                }
            }
        }
        Command::Dv { form, out: path } => {
            let p = dv_polytope(&load_form(form)?)?;
            let text = serde_json::to_string_pretty(&p)?;
            match path {
                Some(path) => write_atomic(path, text.as_bytes())?,
                None => writeln!(out, "{text}")?,
            }
            writeln!(std::io::stderr(), "{} vertices, {} facets", p.vertices.len(), p.facet_count()?)?;
            Ok(EXIT_OK)
        }
        Command::Dd { cone, group, adjacency_decomposition: ad, out: path } => {
            let file: ConeFile = parse(cone)?;
            let c = file.cone()?;
            let gens = match group {
                Some(g) => match parse::<GroupFile>(g)? {
                    GroupFile::Tagged { generators } | GroupFile::Bare(generators) => generators,
                },
                None => file.group.clone(),
            };
            let rays = if *ad {
                let action = if gens.is_empty() { SymmetryAction::trivial(&c) } else { SymmetryAction::from_int(&c, gens)? };
                let resume = match path {
                    Some(p) if cli.resume && p.exists() => Some(OrbitRegistry::from_json(&read(p)?)?),
                    _ => None,
                };
                let mut save_err = None;
                let reg = adjacency_decomposition(&c, &action, &adjacency_options(cli), resume, |r| {
                    if let (Some(p), None) = (path, &save_err) {
                        save_err = write_atomic(p, r.to_json().as_bytes()).err();
                    }
                })?;
                if let Some(e) = save_err {
                    return Err(e);
                }
                if let Some(p) = path {
                    write_atomic(p, reg.to_json().as_bytes())?;
                }
                writeln!(out, "orbits {}", reg.orbits.len())?;
                reg.expand(&action, &c)
            } else {
                dual_description(&c)?
            };
            writeln!(out, "rays {}", rays.len())?;
            for r in &rays {
                let v: Vec<String> = r.direction.iter().map(ToString::to_string).collect();
                writeln!(out, "{}", v.join(" "))?;
            }
            Ok(EXIT_OK)
        }
        Command::VerifyDim6 { minkowski } => {
            let checks = census::verify_dim6_forms(*minkowski)?;
            let mut ok = true;
            for c in &checks {
                ok &= c.pass;
                writeln!(out, "{} {} ({})", if c.pass { "PASS" } else { "FAIL" }, c.name, c.detail)?;
            }
            Ok(if ok { EXIT_OK } else { EXIT_FAILED })
        }
    }
}
