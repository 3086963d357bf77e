use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::anyhow;
use clap::{Args, Parser, Subcommand, ValueEnum};

use nielsen::braid::RamificationType;
use nielsen::catalog::cache::{inventories, Cache};
use nielsen::catalog::certificate::{classic_certificate, matching_certificate, Certificate};
use nielsen::catalog::{self, CatalogEntry};
use nielsen::classic::{orbit_partition, ClassicParams};
use nielsen::error::Error;
use nielsen::genus::{classify, ClassifyParams, Engine};
use nielsen::graph::{components, sample_edges, verify_components, SamplingParams};
use nielsen::group::PermGroup;
use nielsen::matching::{MatchingOptions, NodeIndex};

#[derive(Parser)]
#[command(name = "nielsen", version, about = "Braid orbits on Nielsen classes")]
struct Cli {
    /// Catalog file to use instead of the built-in one.
    #[arg(long, global = true)]
    catalog: Option<PathBuf>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum EngineArg {
    Classic,
    Matching,
}

impl From<EngineArg> for Engine {
    fn from(e: EngineArg) -> Engine {
        match e {
            EngineArg::Classic => Engine::Classic,
            EngineArg::Matching => Engine::Matching,
        }
    }
}

#[derive(Args, Clone)]
struct Sampling {
    /// Successful edge draws per node before it stops.
    #[arg(long, default_value_t = 5)]
    s: u32,
    /// Tries per node before giving up when no edge was found.
    #[arg(long, default_value_t = 50)]
    t: u32,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Disable the commuting-prenode skip rule.
    #[arg(long)]
    no_skip: bool,
    /// Build halves from the pure braid generators only.
    #[arg(long)]
    pure_halves: bool,
}

impl Sampling {
    fn params(&self) -> SamplingParams {
        SamplingParams {
            s: self.s,
            t: self.t,
            seed: self.seed,
        }
    }
}

#[derive(Subcommand)]
enum Cmd {
    /// Braid orbits of one ramification type.
    Orbits {
        group: String,
        /// Comma-separated class labels, e.g. 2B,3A,3A,3A.
        rtype: String,
        #[arg(long, value_enum, default_value = "matching")]
        engine: EngineArg,
        /// Split level for the matching engine.
        #[arg(long)]
        k: Option<usize>,
        #[command(flatten)]
        sampling: Sampling,
        /// Write a JSON certificate here.
        #[arg(long)]
        certificate: Option<PathBuf>,
        /// Store head and tail inventories in this directory.
        #[arg(long)]
        cache: Option<PathBuf>,
        /// Compare existing cache records against the fresh computation.
        #[arg(long, requires = "cache")]
        verify_cache: bool,
    },
    /// Genus-zero systems of one group, or of every catalog group of a
    /// degree with nontrivial second derived subgroup.
    Classify {
        target: String,
        #[arg(long, value_enum, default_value = "matching")]
        engine: EngineArg,
        #[arg(long)]
        max_arity: Option<usize>,
        /// Skip the fixed-point (Scott) prefilter.
        #[arg(long)]
        no_scott: bool,
        #[command(flatten)]
        sampling: Sampling,
        /// Print the classification as JSON.
        #[arg(long)]
        json: bool,
    },
    /// Run both engines on one type and compare.
    Verify {
        group: String,
        rtype: String,
        #[arg(long)]
        k: Option<usize>,
        #[command(flatten)]
        sampling: Sampling,
    },
    /// Tab-separated table rows for every catalog group of a degree.
    Tables {
        degree: usize,
        #[arg(long, value_enum, default_value = "matching")]
        engine: EngineArg,
        #[arg(long)]
        max_arity: Option<usize>,
        #[command(flatten)]
        sampling: Sampling,
    },
    /// Catalog groups, optionally of one degree.
    Groups { degree: Option<usize> },
    /// Conjugacy classes of a group.
    Classes { group: String },
    /// Inspect or verify a cache directory.
    Cache {
        #[command(subcommand)]
        cmd: CacheCmd,
    },
}

#[derive(Subcommand)]
enum CacheCmd {
    List { dir: PathBuf },
    /// Recompute every record and compare byte for byte.
    Verify { dir: PathBuf },
}

enum Failure {
    Usage(String),
    Compute(anyhow::Error),
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Failure {
        Failure::Compute(e)
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        match e {
            Error::UnknownClass { .. } | Error::NotBlockOrdered(_) | Error::BadLevel { .. } => {
                Failure::Usage(e.to_string())
            }
            e => Failure::Compute(e.into()),
        }
    }
}

type Res<T> = std::result::Result<T, Failure>;

fn suggestions<'a>(word: &str, pool: impl IntoIterator<Item = &'a str>) -> Vec<String> {
    let lw = word.to_lowercase();
    let mut scored: Vec<(f64, &str)> = pool
        .into_iter()
        .map(|c| (strsim::jaro_winkler(&lw, &c.to_lowercase()), c))
        .filter(|(s, _)| *s > 0.7)
        .collect();
    scored.sort_by(|a, b| b.0.total_cmp(&a.0).then(a.1.cmp(b.1)));
    scored.into_iter().take(3).map(|(_, c)| c.to_string()).collect()
}

struct Catalog {
    entries: Vec<CatalogEntry>,
    validated: bool,
}

impl Catalog {
    fn load(path: &Option<PathBuf>) -> Res<Catalog> {
        match path {
            Some(p) => Ok(Catalog {
                entries: catalog::load_catalog(p).map_err(|e| anyhow!("{}: {e}", p.display()))?,
                validated: true,
            }),
            None => Ok(Catalog {
                entries: catalog::builtin_unchecked(),
                validated: false,
            }),
        }
    }

    fn entry(&self, name: &str) -> Res<CatalogEntry> {
        match catalog::find(&self.entries, name) {
            Some(e) => Ok(e.clone()),
            None => {
                let pool = self
                    .entries
                    .iter()
                    .flat_map(|e| std::iter::once(e.name.as_str()).chain(e.aliases.iter().map(|a| a.as_str())));
                let s = suggestions(name, pool);
                let hint = if s.is_empty() {
                    "; try `nielsen groups`".to_string()
                } else {
                    format!("; did you mean {}?", s.join(", "))
                };
                Err(Failure::Usage(format!("unknown group {name:?}{hint}")))
            }
        }
    }

    fn group(&self, e: &CatalogEntry) -> Res<PermGroup> {
        if !self.validated {
            catalog::load_catalog_str(&e.to_text())?;
        }
        Ok(e.group()?)
    }

    fn by_degree(&self, degree: usize) -> Vec<CatalogEntry> {
        self.entries.iter().filter(|e| e.degree == degree).cloned().collect()
    }
}

fn parse_type(group: &PermGroup, text: &str) -> Res<RamificationType> {
    let table = group.conjugacy_classes()?;
    match RamificationType::parse(table, text) {
        Err(Error::UnknownClass { label, .. }) => {
            let s = suggestions(&label, table.labels());
            let hint = if s.is_empty() {
                format!("known labels: {}", table.labels().join(","))
            } else {
                format!("did you mean {}?", s.join(", "))
            };
            Err(Failure::Usage(format!("unknown class label {label:?}; {hint}")))
        }
        other => Ok(other?),
    }
}

fn plural(n: usize, word: &str) -> String {
    if n == 1 {
        format!("{n} {word}")
    } else {
        format!("{n} {word}s")
    }
}

fn describe_lengths(lengths: &[u128]) -> String {
    let parts: Vec<String> = lengths.iter().map(|l| l.to_string()).collect();
    match lengths.len() {
        0 => "0 orbits".to_string(),
        1 => format!("1 orbit, length {}", parts[0]),
        n => format!("{n} orbits, lengths {}", parts.join(", ")),
    }
}

fn write_certificate(path: &Option<PathBuf>, cert: &Certificate) -> Res<()> {
    if let Some(p) = path {
        std::fs::write(p, cert.to_json()?).map_err(|e| anyhow!("{}: {e}", p.display()))?;
        eprintln!("certificate written to {}", p.display());
    }
    Ok(())
}

fn classify_params(engine: EngineArg, max_arity: Option<usize>, scott: bool, s: &Sampling) -> ClassifyParams {
    ClassifyParams {
        engine: engine.into(),
        scott,
        sampling: s.params(),
        skip_rule: !s.no_skip,
        max_arity: max_arity.unwrap_or(usize::MAX),
        ..ClassifyParams::default()
    }
}

fn run(cli: Cli) -> Res<()> {
    let cat = Catalog::load(&cli.catalog)?;
    match cli.cmd {
        Cmd::Orbits {
            group,
            rtype,
            engine,
            k,
            sampling,
            certificate,
            cache,
            verify_cache,
        } => {
            let entry = cat.entry(&group)?;
            let g = cat.group(&entry)?;
            let rt = parse_type(&g, &rtype)?;
            let mut engine = engine;
            if matches!(engine, EngineArg::Matching) && rt.arity() < 4 {
                eprintln!("note: the matching engine needs at least 4 entries; using the classic engine");
                engine = EngineArg::Classic;
            }
            let cert = match engine {
                EngineArg::Classic => classic_certificate(&entry.name, &g, &rt, &ClassicParams::default())?,
                EngineArg::Matching => {
                    let opts = MatchingOptions {
                        k,
                        skip_rule: !sampling.no_skip,
                        pure_halves: sampling.pure_halves,
                    };
                    let (index, cert) = matching_certificate(&entry.name, &g, &rt, &opts, sampling.params())?;
                    if let Some(dir) = &cache {
                        let stats = Cache::open(dir)?.sync(&index, verify_cache)?;
                        eprintln!(
                            "cache: {} hits, {} stored, {} mismatches",
                            stats.hits, stats.misses, stats.mismatches
                        );
                        if stats.mismatches > 0 {
                            return Err(anyhow!("cache records differ from recomputation").into());
                        }
                    }
                    cert
                }
            };
            println!("{}", describe_lengths(&cert.lengths));
            if let (Some(inv), Some(m)) = (&cert.inventory, &cert.matching) {
                println!(
                    "k = {}, head orbits {}, tail orbits {}, pairs {}, nodes {}, verdict {}",
                    inv.k, inv.head_total, inv.tail_total, inv.pair_total, inv.nodes, m.verdict
                );
                println!("seed {}", m.sampling.seed);
            }
            write_certificate(&certificate, &cert)?;
            Ok(())
        }
        Cmd::Classify {
            target,
            engine,
            max_arity,
            no_scott,
            sampling,
            json,
        } => {
            let params = classify_params(engine, max_arity, !no_scott, &sampling);
            let (entries, only_nonmetabelian) = match target.parse::<usize>() {
                Ok(d) => {
                    let v = cat.by_degree(d);
                    if v.is_empty() {
                        return Err(Failure::Usage(format!("no catalog groups of degree {d}")));
                    }
                    (v, true)
                }
                Err(_) => (vec![cat.entry(&target)?], false),
            };
            let mut total = 0;
            let mut counted = 0;
            let mut results = Vec::new();
            for e in entries {
                let g = cat.group(&e)?;
                if only_nonmetabelian && g.is_metabelian() {
                    eprintln!("{}: metabelian, skipped", e.name);
                    continue;
                }
                let (p, ex) = e.pe.ok_or_else(|| anyhow!("{}: catalog entry has no pe line", e.name))?;
                let c = classify(&e.name, &g, p, ex, &params)?;
                if !json {
                    let by: Vec<String> = c
                        .components_by_arity()
                        .iter()
                        .map(|(r, n)| format!("r={r}: {n}"))
                        .collect();
                    println!(
                        "{}: {} ({}), {} types after filters ({} by Riemann-Hurwitz)",
                        e.name,
                        plural(c.components(), "component"),
                        by.join(", "),
                        c.after_structure,
                        c.rh_types
                    );
                    for s in &c.systems {
                        let verdict = s.verdict.map(|v| format!("\t{v}")).unwrap_or_default();
                        println!("  {}\t{}\t{}{verdict}", s.type_label(), s.components, s.largest);
                    }
                    if !c.not_computed.is_empty() {
                        println!("  {} types above the arity limit not computed", c.not_computed.len());
                    }
                }
                total += c.components();
                counted += 1;
                results.push(c);
            }
            if json {
                println!("{}", serde_json::to_string_pretty(&results).map_err(anyhow::Error::from)?);
            } else {
                println!(
                    "{} across {}",
                    plural(total, "component"),
                    plural(counted, "group")
                );
                println!("seed {}", sampling.seed);
            }
            Ok(())
        }
        Cmd::Verify { group, rtype, k, sampling } => {
            let entry = cat.entry(&group)?;
            let g = cat.group(&entry)?;
            let rt = parse_type(&g, &rtype)?;
            if rt.arity() < 4 {
                return Err(Failure::Usage("verify needs a type with at least 4 entries".into()));
            }
            let oracle = orbit_partition(&g, &rt, &ClassicParams::default())?;
            let opts = MatchingOptions {
                k,
                skip_rule: !sampling.no_skip,
                pure_halves: sampling.pure_halves,
            };
            let index = NodeIndex::build(&g, &rt, &opts)?;
            let graph = sample_edges(&index, sampling.params())?;
            let comps = components(&index, &graph)?;
            let classic: Vec<u128> = oracle.orbits.iter().map(|o| o.length as u128).collect();
            let matching: Vec<u128> = comps.iter().map(|c| c.length).collect();
            println!("classic:  {}", describe_lengths(&classic));
            println!("matching: {}", describe_lengths(&matching));
            println!("seed {}", sampling.seed);
            if verify_components(&index, &comps, &oracle)? {
                println!("ENGINES AGREE");
                Ok(())
            } else {
                println!("ENGINES DISAGREE");
                Err(anyhow!("engines disagree on {}", rt).into())
            }
        }
        Cmd::Tables {
            degree,
            engine,
            max_arity,
            sampling,
        } => {
            let params = classify_params(engine, max_arity, true, &sampling);
            let entries = cat.by_degree(degree);
            if entries.is_empty() {
                return Err(Failure::Usage(format!("no catalog groups of degree {degree}")));
            }
            println!("# degree\tgroup\ttype\torbits\tlargest");
            for e in entries {
                let g = cat.group(&e)?;
                let (p, ex) = e.pe.ok_or_else(|| anyhow!("{}: catalog entry has no pe line", e.name))?;
                let c = classify(&e.name, &g, p, ex, &params)?;
                for s in &c.systems {
                    println!(
                        "{degree}\t{}\t{}\t{}\t{}",
                        e.name,
                        s.ramification_type.join(","),
                        s.orbits,
                        s.largest
                    );
                }
            }
            Ok(())
        }
        Cmd::Groups { degree } => {
            for e in &cat.entries {
                if degree.is_some_and(|d| d != e.degree) {
                    continue;
                }
                let aliases = if e.aliases.is_empty() {
                    String::new()
                } else {
                    format!("\t(also {})", e.aliases.join(", "))
                };
                println!("{}\t{}\t{}{aliases}", e.degree, e.order, e.name);
            }
            Ok(())
        }
        Cmd::Classes { group } => {
            let entry = cat.entry(&group)?;
            let g = cat.group(&entry)?;
            let table = g.conjugacy_classes()?;
            println!("label\torder\tsize\tindex\tfixed\trepresentative");
            for c in table.classes() {
                println!(
                    "{}\t{}\t{}\t{}\t{}\t{}",
                    c.label,
                    c.element_order,
                    c.size(),
                    c.perm_index,
                    c.fixed_points(),
                    c.representative
                );
            }
            Ok(())
        }
        Cmd::Cache { cmd } => match cmd {
            CacheCmd::List { dir } => {
                let cache = Cache::open(&dir)?;
                for (name, rec) in cache.records()? {
                    let k = &rec.key;
                    println!(
                        "{}\t{}\t({})\tk={}\t{}\t{:?}\t{} orbits",
                        &name[..12],
                        group_label(&cat, &k.group),
                        k.ramification_type.join(","),
                        k.k,
                        k.class,
                        k.side,
                        rec.payload.orbits.len()
                    );
                }
                Ok(())
            }
            CacheCmd::Verify { dir } => {
                let cache = Cache::open(&dir)?;
                let records = cache.records()?;
                let mut done = std::collections::BTreeSet::new();
                let mut bad = 0;
                for (_, rec) in &records {
                    let key = (
                        rec.key.group.clone(),
                        rec.key.ramification_type.clone(),
                        rec.key.k,
                        rec.key.pure_halves,
                    );
                    if !done.insert(key) {
                        continue;
                    }
                    let g = group_from_fingerprint(&cat, &rec.key.group)?;
                    let rt = parse_type(&g, &rec.key.ramification_type.join(","))?;
                    let opts = MatchingOptions {
                        k: Some(rec.key.k),
                        skip_rule: true,
                        pure_halves: rec.key.pure_halves,
                    };
                    let index = NodeIndex::build(&g, &rt, &opts)?;
                    let fresh = inventories(&index)?;
                    for (_, r) in records.iter().filter(|(_, r)| {
                        r.key.group == rec.key.group
                            && r.key.ramification_type == rec.key.ramification_type
                            && r.key.k == rec.key.k
                            && r.key.pure_halves == rec.key.pure_halves
                    }) {
                        match fresh.iter().find(|(k, _)| *k == r.key) {
                            Some((_, inv)) if *inv == r.payload => {}
                            _ => {
                                bad += 1;
                                println!("MISMATCH {} ({}) {}", r.key.class, r.key.ramification_type.join(","), r.key.engine);
                            }
                        }
                    }
                }
                println!("{} records, {} mismatches", records.len(), bad);
                if bad > 0 {
                    Err(anyhow!("cache verification failed").into())
                } else {
                    Ok(())
                }
            }
        },
    }
}

fn group_label(cat: &Catalog, fingerprint: &str) -> String {
    cat.entries
        .iter()
        .find(|e| e.group().map(|g| g.fingerprint() == fingerprint).unwrap_or(false))
        .map(|e| e.name.clone())
        .unwrap_or_else(|| "?".into())
}

/// Catalog groups keep their pinned labels; anything else is rebuilt bare.
fn group_from_fingerprint(cat: &Catalog, fingerprint: &str) -> Res<PermGroup> {
    for e in &cat.entries {
        let g = e.group()?;
        if g.fingerprint() == fingerprint {
            return Ok(g);
        }
    }
    let (deg, gens) = fingerprint
        .split_once(':')
        .ok_or_else(|| anyhow!("malformed group fingerprint {fingerprint:?}"))?;
    let deg: usize = deg.parse().map_err(|_| anyhow!("malformed group fingerprint {fingerprint:?}"))?;
    Ok(catalog::parse_group(deg, gens)?)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Compute(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
