//! Command-line front end: parse Wilson loop diagrams, classify them,
//! enumerate small families, and run the exact realization
//! cross-validation suite.
//!
//! Exit codes: 0 all checks pass, 1 verification or computation
//! failure, 2 usage or parse error. Output is deterministic for a fixed
//! command line and seed: stable key order, sorted lists, seeded
//! configuration generation.

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use std::path::PathBuf;
use std::process::ExitCode;
use wlp_core::diagram::{Propagator, WilsonDiagram};
use wlp_core::realization::{
    build_realization, integrand_value, matroid_of_matrix, rank_of, rowspace_equal,
    seeded_config, RealizationError, TwistorConfig,
};
use wlp_core::report::{
    ClassificationReport, ConfigJson, FlacetJson, MatroidJson, ReportEnvelope, SCHEMA_VERSION,
};
use wlp_core::wilson::{
    build_matroid_with_budget, is_admissible_with_budget, WilsonError, DEFAULT_BUDGET,
};
use wlp_core::Rat;

#[derive(Parser)]
#[command(name = "wlp", version, about = "Wilson loop diagram matroid toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Classify diagrams: definedness, components, flacets, positroid,
    /// admissibility route.
    Classify(ClassifyArgs),
    /// Enumerate all diagrams in an (n, k) range and classify each.
    Enumerate(EnumerateArgs),
    /// Cross-validate combinatorics against exact realizations.
    Verify(VerifyArgs),
    /// Print the matroid of a diagram.
    Matroid(DiagramArgs),
    /// Print the propagator flacet certificates of a diagram.
    Flacets(DiagramArgs),
    /// Build exact realization matrices at seeded configurations.
    Realize(RealizeArgs),
    /// Evaluate the closed-form integrand at a configuration.
    Integrand(IntegrandArgs),
}

#[derive(Args)]
struct OutputArgs {
    /// Emit JSON (default is text).
    #[arg(long, conflicts_with = "text")]
    json: bool,
    /// Emit human-readable text (the default).
    #[arg(long)]
    text: bool,
    /// Work budget override; also settable via WLP_BUDGET.
    #[arg(long)]
    budget: Option<u128>,
}

#[derive(Args)]
struct ClassifyArgs {
    /// Inline diagram text, repeatable.
    #[arg(long = "diagram")]
    diagrams: Vec<String>,
    /// File with one diagram per line; blank lines and # comments skipped.
    #[arg(long)]
    input: Option<PathBuf>,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Args)]
struct EnumerateArgs {
    /// Vertex count or inclusive range, e.g. 6 or 4..8.
    #[arg(long)]
    n: String,
    /// Propagator count or inclusive range, e.g. 2 or 0..3.
    #[arg(long)]
    k: String,
    /// Keep only this definedness class
    /// (well_defined, well_defined_generic, exact, overdefined).
    #[arg(long)]
    definedness: Option<String>,
    /// Keep only connected (true) or disconnected (false) diagrams.
    #[arg(long)]
    connected: Option<bool>,
    /// Keep only crossing (true) or non-crossing (false) diagrams.
    #[arg(long)]
    crossing: Option<bool>,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Args)]
struct VerifyArgs {
    /// Vertex count or inclusive range.
    #[arg(long)]
    n: String,
    /// Propagator count or inclusive range.
    #[arg(long)]
    k: String,
    /// Seeded configurations per diagram.
    #[arg(long, default_value_t = 3)]
    configs: usize,
    /// Base seed for configuration generation.
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Perturb one computed basis set to demonstrate failure reporting.
    #[arg(long, hide = true)]
    inject_fault: bool,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Args)]
struct DiagramArgs {
    /// Inline diagram text.
    #[arg(long)]
    diagram: String,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Args)]
struct RealizeArgs {
    /// Inline diagram text.
    #[arg(long)]
    diagram: String,
    /// Base seed for configuration generation.
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Number of seeded configurations.
    #[arg(long, default_value_t = 1)]
    configs: usize,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Args)]
struct IntegrandArgs {
    /// Inline diagram text.
    #[arg(long)]
    diagram: String,
    /// Seed for the configuration (ignored with --config).
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Configuration JSON file instead of a seeded one.
    #[arg(long)]
    config: Option<PathBuf>,
    #[command(flatten)]
    out: OutputArgs,
}

/// Usage failures exit 2, computation failures exit 1.
enum Failure {
    Usage(String),
    Check(String),
}

impl Failure {
    fn code(&self) -> ExitCode {
        match self {
            Failure::Usage(_) => ExitCode::from(2),
            Failure::Check(_) => ExitCode::from(1),
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Usage(m) | Failure::Check(m) => m,
        }
    }
}

fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage(msg.into())
}

fn check(msg: impl Into<String>) -> Failure {
    Failure::Check(msg.into())
}

fn main() -> ExitCode {
    // Dying on SIGPIPE (the pre-Rust default) beats panicking mid-print
    // when downstream consumers like `head` close the pipe early.
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Classify(args) => cmd_classify(args),
        Command::Enumerate(args) => cmd_enumerate(args),
        Command::Verify(args) => cmd_verify(args),
        Command::Matroid(args) => cmd_matroid(args),
        Command::Flacets(args) => cmd_flacets(args),
        Command::Realize(args) => cmd_realize(args),
        Command::Integrand(args) => cmd_integrand(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message());
            f.code()
        }
    }
}

/// Budget precedence: --budget flag, then WLP_BUDGET, then the default.
fn effective_budget(out: &OutputArgs) -> Result<u128, Failure> {
    if let Some(b) = out.budget {
        return Ok(b);
    }
    match std::env::var("WLP_BUDGET") {
        Ok(text) => text
            .trim()
            .parse::<u128>()
            .map_err(|_| usage(format!("WLP_BUDGET must be an integer, got {text:?}"))),
        Err(_) => Ok(DEFAULT_BUDGET),
    }
}

/// Inclusive range syntax: "5" or "3..7".
fn parse_range(text: &str, what: &str, max: usize) -> Result<(usize, usize), Failure> {
    let parse_one = |s: &str| {
        s.trim()
            .parse::<usize>()
            .map_err(|_| usage(format!("--{what}: expected an integer, got {s:?}")))
    };
    let (lo, hi) = match text.split_once("..") {
        Some((a, b)) => (parse_one(a)?, parse_one(b)?),
        None => {
            let v = parse_one(text)?;
            (v, v)
        }
    };
    if lo > hi {
        return Err(usage(format!("--{what}: empty range {text:?}")));
    }
    if hi > max {
        return Err(usage(format!("--{what}: maximum supported value is {max}")));
    }
    Ok((lo, hi))
}

fn parse_diagram(text: &str) -> Result<WilsonDiagram, Failure> {
    WilsonDiagram::parse(text).map_err(|e| usage(format!("{text:?}: {e}")))
}

fn collect_diagrams(args: &ClassifyArgs) -> Result<Vec<WilsonDiagram>, Failure> {
    let mut out = Vec::new();
    for text in &args.diagrams {
        out.push(parse_diagram(text)?);
    }
    if let Some(path) = &args.input {
        let body = std::fs::read_to_string(path)
            .map_err(|e| usage(format!("{}: {e}", path.display())))?;
        for (idx, line) in body.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            out.push(WilsonDiagram::parse(line).map_err(|e| {
                usage(format!("{}: line {}: {e}", path.display(), idx + 1))
            })?);
        }
    }
    if out.is_empty() {
        return Err(usage("no diagrams given; use --diagram or --input"));
    }
    Ok(out)
}

fn map_wilson_error(e: WilsonError) -> Failure {
    check(e.to_string())
}

/// Classification plus the crossing tag used by the summary table.
fn classify_one(
    w: &WilsonDiagram,
    budget: u128,
) -> Result<(ClassificationReport, bool), Failure> {
    let verdict = is_admissible_with_budget(w, budget).map_err(map_wilson_error)?;
    let matroid = if verdict.well_defined {
        Some(build_matroid_with_budget(w, budget).map_err(map_wilson_error)?)
    } else {
        None
    };
    let crossing = !verdict.crossings.is_empty();
    let report =
        ClassificationReport::from_verdict(w, &verdict, matroid.as_ref().map(|m| m.matroid()));
    Ok((report, crossing))
}

fn print_envelope(envelope: &ReportEnvelope, out: &OutputArgs) {
    if out.json {
        println!("{}", serde_json::to_string_pretty(envelope).unwrap());
        return;
    }
    for r in &envelope.reports {
        let rank = r.rank.map_or(String::from("-"), |v| v.to_string());
        println!(
            "{} | definedness={} connected={} rank={} positroid={} admissible={} route={}",
            r.diagram, r.definedness, r.connected, rank, r.positroid, r.admissible, r.route
        );
    }
    let s = &envelope.summary;
    println!(
        "summary: diagrams={} well_defined={} exact={} overdefined={} connected={} crossing={} positroid={} admissible={}",
        s.diagrams, s.well_defined, s.exact, s.overdefined, s.connected, s.crossing,
        s.positroid, s.admissible
    );
    for cell in &s.cells {
        println!(
            "  definedness={} crossing={} positroid={}: {}",
            cell.definedness, cell.crossing, cell.positroid, cell.count
        );
    }
}

fn cmd_classify(args: ClassifyArgs) -> Result<(), Failure> {
    let budget = effective_budget(&args.out)?;
    let diagrams = collect_diagrams(&args)?;
    let mut tagged = Vec::with_capacity(diagrams.len());
    for w in &diagrams {
        tagged.push(classify_one(w, budget)?);
    }
    let envelope = ReportEnvelope::new(None, tagged);
    print_envelope(&envelope, &args.out);
    Ok(())
}

/// All canonical propagators on [n] in lexicographic order.
fn all_propagators(n: usize) -> Vec<Propagator> {
    let mut out = Vec::new();
    for i in 1..=n {
        for j in i + 1..=n {
            out.push(Propagator::new(i, j, n).expect("distinct in-range edges"));
        }
    }
    out
}

/// Index combinations in lexicographic order; count may exceed 32 so
/// this cannot use bitmask iteration.
fn for_each_combination(
    m: usize,
    k: usize,
    mut f: impl FnMut(&[usize]) -> Result<(), Failure>,
) -> Result<(), Failure> {
    if k > m {
        return Ok(());
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        f(&idx)?;
        // advance the rightmost index that can still move
        let mut pos = k;
        while pos > 0 {
            pos -= 1;
            if idx[pos] != pos + m - k {
                idx[pos] += 1;
                for later in pos + 1..k {
                    idx[later] = idx[later - 1] + 1;
                }
                break;
            }
            if pos == 0 {
                return Ok(());
            }
        }
        if k == 0 {
            return Ok(());
        }
    }
}

fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.saturating_mul((n - i) as u128) / (i + 1) as u128;
    }
    acc
}

struct Sweep {
    n_lo: usize,
    n_hi: usize,
    k_lo: usize,
    k_hi: usize,
}

impl Sweep {
    fn parse(n: &str, k: &str) -> Result<Self, Failure> {
        let (n_lo, n_hi) = parse_range(n, "n", 24)?;
        let (k_lo, k_hi) = parse_range(k, "k", 16)?;
        if n_lo == 0 {
            return Err(usage("--n: vertex count must be at least 1"));
        }
        Ok(Sweep { n_lo, n_hi, k_lo, k_hi })
    }

    /// Upper bound on classification work across the whole sweep.
    fn estimate(&self) -> u128 {
        let mut total: u128 = 0;
        for n in self.n_lo..=self.n_hi {
            let pairs = n * n.saturating_sub(1) / 2;
            for k in self.k_lo..=self.k_hi {
                let diagrams = binomial(pairs, k);
                let per = binomial(n, k).saturating_mul((k * k).max(1) as u128);
                total = total.saturating_add(diagrams.saturating_mul(per));
            }
        }
        total
    }

    fn for_each_diagram(
        &self,
        mut f: impl FnMut(WilsonDiagram) -> Result<(), Failure>,
    ) -> Result<(), Failure> {
        for n in self.n_lo..=self.n_hi {
            let props = all_propagators(n);
            for k in self.k_lo..=self.k_hi {
                for_each_combination(props.len(), k, |idx| {
                    let chosen: Vec<Propagator> = idx.iter().map(|&i| props[i]).collect();
                    let w = WilsonDiagram::new(n, chosen)
                        .expect("canonical distinct propagators");
                    f(w)
                })?;
            }
        }
        Ok(())
    }
}

fn cmd_enumerate(args: EnumerateArgs) -> Result<(), Failure> {
    let budget = effective_budget(&args.out)?;
    let sweep = Sweep::parse(&args.n, &args.k)?;
    let estimate = sweep.estimate();
    if estimate > budget {
        return Err(check(format!(
            "estimated work {estimate} exceeds budget {budget}; raise --budget or WLP_BUDGET"
        )));
    }
    if let Some(d) = &args.definedness {
        let known = ["well_defined", "well_defined_generic", "exact", "overdefined"];
        if !known.contains(&d.as_str()) {
            return Err(usage(format!(
                "--definedness: unknown class {d:?}; expected one of {known:?}"
            )));
        }
    }
    let mut tagged = Vec::new();
    sweep.for_each_diagram(|w| {
        let (report, crossing) = classify_one(&w, budget)?;
        if let Some(d) = &args.definedness {
            let keep = match d.as_str() {
                "well_defined" => report.definedness != "overdefined",
                other => report.definedness == other,
            };
            if !keep {
                return Ok(());
            }
        }
        if let Some(c) = args.connected {
            if report.connected != c {
                return Ok(());
            }
        }
        if let Some(c) = args.crossing {
            if crossing != c {
                return Ok(());
            }
        }
        tagged.push((report, crossing));
        Ok(())
    })?;
    let envelope = ReportEnvelope::new(None, tagged);
    print_envelope(&envelope, &args.out);
    Ok(())
}

/// One cross-validation failure with enough context to reproduce.
fn verify_failure(diagram: &WilsonDiagram, seed: u64, what: &str) -> Failure {
    check(format!("verification failed: {diagram} seed={seed}: {what}"))
}

fn cmd_verify(args: VerifyArgs) -> Result<(), Failure> {
    let budget = effective_budget(&args.out)?;
    if args.configs == 0 {
        return Err(usage("--configs must be at least 1"));
    }
    let sweep = Sweep::parse(&args.n, &args.k)?;
    let estimate = sweep
        .estimate()
        .saturating_mul(args.configs as u128);
    if estimate > budget {
        return Err(check(format!(
            "estimated work {estimate} exceeds budget {budget}; raise --budget or WLP_BUDGET"
        )));
    }
    let mut checked = 0usize;
    let mut realized = 0usize;
    let mut fault_armed = args.inject_fault;
    // exact diagrams grouped by (n, k, support) for the equivalence pass
    let mut exact_pool: Vec<WilsonDiagram> = Vec::new();
    sweep.for_each_diagram(|w| {
        checked += 1;
        let class = w.classify_definedness();
        if !class.is_well_defined() {
            // Overdefined: the realization must drop rank at every config.
            for c in 0..args.configs {
                let seed = args.seed + c as u64;
                let z = seeded_config(w.n(), w.k(), seed)
                    .map_err(|e| verify_failure(&w, seed, &e.to_string()))?;
                let real = build_realization(&w, &z)
                    .map_err(|e| verify_failure(&w, seed, &e.to_string()))?;
                if rank_of(&real.m) >= w.k() {
                    return Err(verify_failure(&w, seed, "overdefined diagram at full rank"));
                }
            }
            return Ok(());
        }
        let wm = build_matroid_with_budget(&w, budget).map_err(map_wilson_error)?;
        let mut expected_bases: Vec<u32> = wm.matroid().bases().to_vec();
        if fault_armed && w.k() >= 1 {
            fault_armed = false;
            expected_bases.remove(0);
        }
        // Necklace oracle agreement on the exact matroid.
        let flacet_route = wm.matroid().is_positroid();
        let oracle = wm.matroid().necklace_positroid_oracle();
        if flacet_route != oracle {
            return Err(verify_failure(&w, args.seed, "positroid oracle disagreement"));
        }
        for c in 0..args.configs {
            let seed = args.seed + c as u64;
            let z = seeded_config(w.n(), w.k(), seed)
                .map_err(|e| verify_failure(&w, seed, &e.to_string()))?;
            let real = build_realization(&w, &z)
                .map_err(|e| verify_failure(&w, seed, &e.to_string()))?;
            if rank_of(&real.m) != w.k() {
                return Err(verify_failure(&w, seed, "well-defined diagram below full rank"));
            }
            realized += 1;
            let from_matrix = matroid_of_matrix(&real.m)
                .map_err(|e| verify_failure(&w, seed, &e.to_string()))?;
            if from_matrix.bases() != &expected_bases[..] {
                return Err(verify_failure(
                    &w,
                    seed,
                    "combinatorial and realized matroids differ",
                ));
            }
        }
        if w.is_well_defined() && matches!(class, wlp_core::diagram::DefinednessClass::Exact { .. })
        {
            exact_pool.push(w);
        }
        Ok(())
    })?;
    // Equivalent exact pairs must share row spaces and matroids.
    let mut pairs = 0usize;
    for a in 0..exact_pool.len() {
        for b in a + 1..exact_pool.len() {
            let (wa, wb) = (&exact_pool[a], &exact_pool[b]);
            if wa.n() != wb.n() || wa.k() != wb.k() {
                continue;
            }
            let equivalent = wlp_core::diagram::are_exact_equivalent(wa, wb)
                .map_err(|e| verify_failure(wa, args.seed, &e.to_string()))?;
            if !equivalent {
                continue;
            }
            pairs += 1;
            let ma = build_matroid_with_budget(wa, budget).map_err(map_wilson_error)?;
            let mb = build_matroid_with_budget(wb, budget).map_err(map_wilson_error)?;
            if !wlp_core::matroid::matroids_equal(ma.matroid(), mb.matroid()) {
                return Err(verify_failure(wa, args.seed, "equivalent pair matroid mismatch"));
            }
            for c in 0..args.configs {
                let seed = args.seed + c as u64;
                let z = seeded_config(wa.n(), wa.k(), seed)
                    .map_err(|e| verify_failure(wa, seed, &e.to_string()))?;
                let ra = build_realization(wa, &z)
                    .map_err(|e| verify_failure(wa, seed, &e.to_string()))?;
                let rb = build_realization(wb, &z)
                    .map_err(|e| verify_failure(wb, seed, &e.to_string()))?;
                if !rowspace_equal(&ra.m, &rb.m) {
                    return Err(verify_failure(wa, seed, "equivalent pair row spaces differ"));
                }
            }
        }
    }
    if args.out.json {
        #[derive(Serialize)]
        struct VerifySummary {
            schema: u32,
            seed: u64,
            configs: usize,
            diagrams_checked: usize,
            realizations_checked: usize,
            equivalent_pairs_checked: usize,
        }
        let summary = VerifySummary {
            schema: SCHEMA_VERSION,
            seed: args.seed,
            configs: args.configs,
            diagrams_checked: checked,
            realizations_checked: realized,
            equivalent_pairs_checked: pairs,
        };
        println!("{}", serde_json::to_string_pretty(&summary).unwrap());
    } else {
        println!(
            "verify: ok diagrams={checked} realizations={realized} equivalent_pairs={pairs} seed={}",
            args.seed
        );
    }
    Ok(())
}

fn cmd_matroid(args: DiagramArgs) -> Result<(), Failure> {
    let budget = effective_budget(&args.out)?;
    let w = parse_diagram(&args.diagram)?;
    let wm = build_matroid_with_budget(&w, budget).map_err(map_wilson_error)?;
    let json = MatroidJson::from_matroid(wm.matroid());
    if args.out.json {
        println!("{}", serde_json::to_string_pretty(&json).unwrap());
    } else {
        println!("n={} rank={} bases={}", json.n, json.rank, json.bases.len());
        for b in &json.bases {
            let parts: Vec<String> = b.iter().map(|v| v.to_string()).collect();
            println!("  {{{}}}", parts.join(","));
        }
    }
    Ok(())
}

fn cmd_flacets(args: DiagramArgs) -> Result<(), Failure> {
    let budget = effective_budget(&args.out)?;
    let w = parse_diagram(&args.diagram)?;
    let wm = build_matroid_with_budget(&w, budget).map_err(map_wilson_error)?;
    let prop_sets = wm.propagator_flacets().map_err(map_wilson_error)?;
    let list: Vec<FlacetJson> = prop_sets
        .iter()
        .map(|&ps| {
            let flat = wlp_core::wilson::propagator_flat(&w, ps).flat;
            FlacetJson {
                props: w
                    .props()
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| ps & (1 << i) != 0)
                    .map(|(_, p)| [p.i(), p.j()])
                    .collect(),
                flat: wlp_core::bits::elems(flat),
                cyclic_interval: wlp_core::matroid::is_cyclic_interval(flat, w.n()),
            }
        })
        .collect();
    if args.out.json {
        println!("{}", serde_json::to_string_pretty(&list).unwrap());
    } else {
        for f in &list {
            let props: Vec<String> =
                f.props.iter().map(|p| format!("({},{})", p[0], p[1])).collect();
            let flat: Vec<String> = f.flat.iter().map(|v| v.to_string()).collect();
            println!(
                "props=[{}] flat={{{}}} cyclic_interval={}",
                props.join(","),
                flat.join(","),
                f.cyclic_interval
            );
        }
    }
    Ok(())
}

#[derive(Serialize)]
struct RealizationOut {
    config: ConfigJson,
    rank: usize,
    full_rank: bool,
    entries: Vec<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    matroid: Option<MatroidJson>,
}

fn rat_str(r: &Rat) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

fn cmd_realize(args: RealizeArgs) -> Result<(), Failure> {
    if args.configs == 0 {
        return Err(usage("--configs must be at least 1"));
    }
    let w = parse_diagram(&args.diagram)?;
    let mut outputs = Vec::with_capacity(args.configs);
    for c in 0..args.configs {
        let seed = args.seed + c as u64;
        let z = seeded_config(w.n(), w.k(), seed).map_err(|e| check(e.to_string()))?;
        let real = build_realization(&w, &z).map_err(|e| check(e.to_string()))?;
        let rank = rank_of(&real.m);
        let matroid = match matroid_of_matrix(&real.m) {
            Ok(m) => Some(MatroidJson::from_matroid(&m)),
            Err(RealizationError::RankDeficient) => None,
            Err(e) => return Err(check(e.to_string())),
        };
        let entries = (0..real.m.rows())
            .map(|r| (0..real.m.cols()).map(|cc| rat_str(real.m.at(r, cc))).collect())
            .collect();
        outputs.push(RealizationOut {
            config: ConfigJson::from_config(&z),
            rank,
            full_rank: rank == w.k(),
            entries,
            matroid,
        });
    }
    if args.out.json {
        #[derive(Serialize)]
        struct RealizeReport {
            schema: u32,
            diagram: String,
            seed: u64,
            realizations: Vec<RealizationOut>,
        }
        let report = RealizeReport {
            schema: SCHEMA_VERSION,
            diagram: w.to_string(),
            seed: args.seed,
            realizations: outputs,
        };
        println!("{}", serde_json::to_string_pretty(&report).unwrap());
    } else {
        for (c, out) in outputs.iter().enumerate() {
            println!(
                "config {} (seed {}): rank={} full_rank={}",
                c,
                args.seed + c as u64,
                out.rank,
                out.full_rank
            );
            for row in &out.entries {
                println!("  [{}]", row.join(", "));
            }
        }
    }
    Ok(())
}

fn cmd_integrand(args: IntegrandArgs) -> Result<(), Failure> {
    let w = parse_diagram(&args.diagram)?;
    let z: TwistorConfig = match &args.config {
        Some(path) => {
            let body = std::fs::read_to_string(path)
                .map_err(|e| usage(format!("{}: {e}", path.display())))?;
            let json: ConfigJson = serde_json::from_str(&body)
                .map_err(|e| usage(format!("{}: {e}", path.display())))?;
            json.to_config().map_err(|e| usage(e.to_string()))?
        }
        None => seeded_config(w.n(), w.k(), args.seed).map_err(|e| check(e.to_string()))?,
    };
    let report = match integrand_value(&w, &z) {
        Ok(r) => r,
        // Precondition violations are usage errors; arithmetic
        // degeneracy is a computation failure.
        Err(e @ (RealizationError::SharedEdge(..) | RealizationError::AdjacentEdges(..))) => {
            return Err(usage(e.to_string()))
        }
        Err(e) => return Err(check(e.to_string())),
    };
    if args.out.json {
        #[derive(Serialize)]
        struct PropOut {
            propagator: [usize; 2],
            det_base: String,
            det_star: Vec<String>,
            numerator: String,
            denominator: String,
        }
        #[derive(Serialize)]
        struct IntegrandOut {
            schema: u32,
            diagram: String,
            config: ConfigJson,
            propagators: Vec<PropOut>,
            value: String,
        }
        let out = IntegrandOut {
            schema: SCHEMA_VERSION,
            diagram: w.to_string(),
            config: ConfigJson::from_config(&z),
            propagators: report
                .per_propagator
                .iter()
                .map(|p| PropOut {
                    propagator: [p.propagator.i(), p.propagator.j()],
                    det_base: rat_str(&p.det_base),
                    det_star: p.det_star.iter().map(rat_str).collect(),
                    numerator: rat_str(&p.numerator),
                    denominator: rat_str(&p.denominator),
                })
                .collect(),
            value: rat_str(&report.value),
        };
        println!("{}", serde_json::to_string_pretty(&out).unwrap());
    } else {
        for p in &report.per_propagator {
            println!(
                "propagator ({},{}): det_base={} det_star=[{}] numerator={} denominator={}",
                p.propagator.i(),
                p.propagator.j(),
                rat_str(&p.det_base),
                p.det_star.iter().map(rat_str).collect::<Vec<_>>().join(", "),
                rat_str(&p.numerator),
                rat_str(&p.denominator)
            );
        }
        println!("value={}", rat_str(&report.value));
    }
    Ok(())
}
