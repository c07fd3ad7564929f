//! Command-line front end. Every verb builds a [`Report`]; `--json` prints it
//! as JSON, otherwise it is rendered as aligned tables.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand};
use flagchow_core::catalog::{
    spin_rank, validate_catalog, validate_degrees, Catalog, CatalogEntry, ChowKind, LabelConvention, Term,
};
use flagchow_core::decomposition::{
    dominance_check, kernel_ideal_check, verify_chain_edge, verify_motive_restriction, DominanceSource,
};
use flagchow_core::omega_module::{GroupPiece, QuotientClass, DEFAULT_V_BOUND};
use flagchow_core::spectral::{predicted_real_character, Certificate, DEFAULT_S_MAX};
use flagchow_core::{Error as CoreError, GradedAbelianGroup};
use serde_json::{json, Value};

use crate::catalog_file::{load_catalog, CatalogFile, CATALOG_ENV};
use crate::report::{Report, Table, Verdict};
use crate::suite::{spectral_run, suite_report};

#[derive(Debug, Parser)]
#[command(name = "flagchow", version, about = "Chow rings of generalized Rost motives")]
pub struct Cli {
    /// Prime; required when a group is cataloged at several primes.
    #[arg(short = 'p', long = "prime", global = true)]
    pub prime: Option<u32>,
    /// Largest topological degree shown or computed.
    #[arg(short = 'N', long = "degree-cap", global = true)]
    pub cap: Option<u32>,
    /// Number of cobordism generators v_1..v_m.
    #[arg(short = 'm', long = "v-bound", global = true)]
    pub v_bound: Option<u32>,
    /// Emit the report as JSON.
    #[arg(long, global = true)]
    pub json: bool,
    /// Catalog file; defaults to the bundled catalog.
    #[arg(long, global = true, env = CATALOG_ENV)]
    pub catalog: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// List catalog entries.
    List,
    /// Show one entry.
    Show { group: String },
    /// Poincaré series of P(y).
    Poincare { group: String },
    /// Chow groups from the augmentation quotient, compared with the catalog.
    Chow { group: String },
    /// Check a chain edge `group <- subgroup`.
    VerifyEdge {
        group: String,
        subgroup: String,
        /// Comma-separated label monomials; defaults to the catalog edge.
        #[arg(long)]
        labels: Option<String>,
        #[arg(long, value_parser = parse_convention)]
        convention: Option<LabelConvention>,
    },
    /// Check the named classes of `group` against `subgroup` tensor the labels.
    VerifyRestriction {
        group: String,
        subgroup: String,
        #[arg(long)]
        labels: Option<String>,
    },
    /// Check the degrees of catalog lines.
    Validate {
        group: Option<String>,
        #[arg(long, conflicts_with = "group")]
        all: bool,
    },
    /// Run the spectral sequence over the reals on the catalog differentials.
    SsRun {
        group: String,
        /// Largest filtration kept.
        #[arg(long, default_value_t = DEFAULT_S_MAX)]
        s_max: u32,
    },
    /// Run the acceptance suite.
    Report,
}

fn parse_convention(s: &str) -> Result<LabelConvention, String> {
    s.parse().map_err(|e: CoreError| e.to_string())
}

/// Usage or data error; exit code 2.
#[derive(Debug)]
struct UsageError(String);

impl From<CoreError> for UsageError {
    fn from(e: CoreError) -> Self {
        UsageError(e.to_string())
    }
}

type CliResult<T> = Result<T, UsageError>;

pub fn exit_code(v: Verdict) -> i32 {
    match v {
        Verdict::Pass | Verdict::Info => 0,
        Verdict::Fail | Verdict::Inconclusive => 1,
    }
}

pub fn main_with<I: IntoIterator<Item = OsString>>(args: I) -> i32 {
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run(args, &mut stdout.lock(), &mut stderr.lock())
}

pub fn run<I: IntoIterator<Item = OsString>>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() {
                let _ = write!(err, "{}", e.render());
                2
            } else {
                let _ = write!(out, "{}", e.render());
                0
            };
            return code;
        }
    };
    let catalog = match load_catalog(cli.catalog.as_deref()) {
        Ok(c) => c,
        Err(e) => {
            let _ = writeln!(err, "error: catalog: {e}");
            return 2;
        }
    };
    match execute(&cli, &catalog) {
        Ok(report) => {
            let text = if cli.json { report.to_json() + "\n" } else { report.render() };
            let _ = out.write_all(text.as_bytes());
            exit_code(report.verdict)
        }
        Err(UsageError(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            2
        }
    }
}

fn execute(cli: &Cli, catalog: &Catalog) -> CliResult<Report> {
    match &cli.command {
        Command::List => Ok(list(catalog)),
        Command::Show { group } => show(&resolve(catalog, group, cli.prime)?),
        Command::Poincare { group } => poincare(&resolve(catalog, group, cli.prime)?, cli.cap),
        Command::Chow { group } => chow(&resolve(catalog, group, cli.prime)?, cli),
        Command::VerifyEdge {
            group,
            subgroup,
            labels,
            convention,
        } => {
            let g = resolve(catalog, group, cli.prime)?;
            let sub = resolve(catalog, subgroup, Some(g.prime.get()))?;
            verify_edge(&g, &sub, labels.as_deref(), *convention)
        }
        Command::VerifyRestriction { group, subgroup, labels } => {
            let g = resolve(catalog, group, cli.prime)?;
            let sub = resolve(catalog, subgroup, Some(g.prime.get()))?;
            verify_restriction(&g, &sub, labels.as_deref(), cli)
        }
        Command::Validate { group, all } => match (group, all) {
            (Some(group), _) => Ok(validate(catalog, Some(&resolve(catalog, group, cli.prime)?))),
            (None, true) => Ok(validate(catalog, None)),
            (None, false) => Err(UsageError("validate needs a group or --all".to_string())),
        },
        Command::SsRun { group, s_max } => ss_run(&resolve(catalog, group, cli.prime)?, *s_max, cli.cap),
        Command::Report => Ok(suite_report(catalog)),
    }
}

/// Names within edit distance 2 of `name`, else the closest few.
pub fn suggestions(name: &str, candidates: &[String]) -> Vec<String> {
    let mut scored: Vec<(usize, &String)> = candidates
        .iter()
        .map(|c| (strsim::levenshtein(&name.to_lowercase(), &c.to_lowercase()), c))
        .collect();
    scored.sort();
    let close: Vec<String> = scored.iter().filter(|(d, _)| *d <= 2).map(|(_, c)| (*c).clone()).collect();
    if close.is_empty() {
        scored.iter().take(3).map(|(_, c)| (*c).clone()).collect()
    } else {
        close
    }
}

fn resolve(catalog: &Catalog, group: &str, prime: Option<u32>) -> CliResult<CatalogEntry> {
    catalog.resolve(group, prime).map_err(|e| match e {
        CoreError::UnknownEntry { .. } => {
            let mut msg = match prime {
                Some(p) => format!("no entry `{group}` at p={p}"),
                None => format!("no entry `{group}`"),
            };
            let known: Vec<String> = catalog
                .entries()
                .iter()
                .filter(|e| e.group == group)
                .map(|e| e.prime.to_string())
                .collect();
            if !known.is_empty() {
                msg.push_str(&format!("; cataloged at p = {}", known.join(", ")));
            } else {
                msg.push_str(&format!("; did you mean: {}", suggestions(group, &catalog.group_names()).join(", ")));
            }
            UsageError(msg)
        }
        other => UsageError(other.to_string()),
    })
}

fn parse_labels(s: &str) -> CliResult<Vec<Term>> {
    s.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| Term::parse(t).map_err(UsageError::from))
        .collect()
}

fn v_bound(cli: &Cli, e: &CatalogEntry) -> u32 {
    cli.v_bound.unwrap_or_else(|| e.max_v_index().max(DEFAULT_V_BOUND))
}

fn within(cap: Option<u32>, d: i64) -> bool {
    cap.is_none_or(|c| d <= c as i64)
}

pub fn group_text(piece: &GroupPiece) -> String {
    let mut parts = Vec::new();
    match piece.free_rank {
        0 => {}
        1 => parts.push("Z".to_string()),
        r => parts.push(format!("Z^{r}")),
    }
    parts.extend(piece.torsion.iter().map(|t| format!("Z/{t}")));
    if parts.is_empty() {
        "0".to_string()
    } else {
        parts.join("+")
    }
}

fn chow_degree(d: i64) -> Value {
    if d % 2 == 0 {
        json!(d / 2)
    } else {
        Value::Null
    }
}

fn list(catalog: &Catalog) -> Report {
    let mut r = Report::new("list", None, Verdict::Info);
    r.witness(format!("{} entries", catalog.len()));
    let mut t = Table::new("entries", &["group", "p", "generators", "dimension", "res", "flags"]);
    for e in catalog.entries() {
        let dim = e.presentation().map(|p| json!(p.dimension())).unwrap_or(Value::Null);
        let res = if e.res.is_empty() {
            "none"
        } else if e.res_complete() {
            "complete"
        } else {
            "partial"
        };
        let mut flags = Vec::new();
        if e.incomplete {
            flags.push("incomplete");
        }
        if e.inclusion_only {
            flags.push("inclusion");
        }
        t.push(vec![
            json!(e.group),
            json!(e.prime.get()),
            json!(e.generators.iter().map(|g| g.name()).collect::<Vec<_>>()),
            dim,
            json!(res),
            json!(flags),
        ]);
    }
    r.tables.push(t);
    r
}

fn show(e: &CatalogEntry) -> CliResult<Report> {
    let mut r = Report::new("show", Some(e.label()), Verdict::Info);
    for a in &e.assertions {
        r.witness(format!("asserted: {a}"));
    }
    let mut gens = Table::new("generators", &["name", "deg", "chow_deg", "height", "aliases"]);
    for g in &e.generators {
        gens.push(vec![
            json!(g.name()),
            json!(g.degree()),
            json!(g.chow_degree()),
            json!(g.height()),
            json!(g.aliases()),
        ]);
    }
    r.tables.push(gens);
    let mut classes = Table::new("classes", &["class", "deg", "chow_deg", "image", "corrected"]);
    for c in &e.classes {
        let corrected = match (&c.corrected, c.known_inconsistent) {
            (Some(x), _) => json!(x.to_string()),
            (None, true) => json!("known inconsistent"),
            (None, false) => Value::Null,
        };
        classes.push(vec![
            json!(c.name),
            json!(c.degree),
            chow_degree(c.degree as i64),
            json!(c.image.to_string()),
            corrected,
        ]);
    }
    r.tables.push(classes);
    let mut lines = Table::new("catalog lines", &["line"]);
    for line in CatalogFile::from_entries(std::slice::from_ref(e)).to_string().lines() {
        lines.push(vec![json!(line)]);
    }
    r.tables.push(lines);
    Ok(r)
}

fn poincare(e: &CatalogEntry, cap: Option<u32>) -> CliResult<Report> {
    let p = e.presentation()?;
    let series = p.poincare_series();
    let mut r = Report::new("poincare", Some(e.label()), Verdict::Info);
    r.witness(format!("dimension {}, top degree {}", p.dimension(), p.top_degree()));
    let mut t = Table::new("poincare series", &["deg", "chow_deg", "dim"]);
    for (d, &n) in series.iter().enumerate() {
        if n > 0 && within(cap, d as i64) {
            t.push(vec![json!(d), chow_degree(d as i64), json!(n)]);
        }
    }
    r.tables.push(t);
    Ok(r)
}

fn truncate(g: &GradedAbelianGroup, cap: Option<u32>) -> CliResult<GradedAbelianGroup> {
    let mut out = GradedAbelianGroup::new(g.prime());
    for (d, piece) in g.pieces() {
        if within(cap, d) {
            out.add(d, piece.free_rank, &piece.torsion)?;
        }
    }
    Ok(out)
}

fn chow_names(e: &CatalogEntry, d: i64) -> Vec<String> {
    e.chow
        .iter()
        .filter(|l| l.degree as i64 == d)
        .flat_map(|l| l.names.iter().cloned())
        .collect()
}

fn chow(e: &CatalogEntry, cli: &Cli) -> CliResult<Report> {
    let cap = cli.cap;
    let mut r = Report::new("chow", Some(e.label()), Verdict::Info);
    let mut t = Table::new("chow groups", &["deg", "chow_deg", "group", "p_rank", "names"]);
    let mut verdict = Verdict::Info;
    if e.res_complete() {
        let m = e.res_module(v_bound(cli, e))?;
        let computed = m.augmentation_quotient(cap.map_or(m.default_cap(), i64::from))?;
        let computed = truncate(&computed, cap)?;
        r.witness("computed as the augmentation quotient of the restriction data");
        for (d, piece) in computed.pieces() {
            t.push(vec![
                json!(d),
                chow_degree(d),
                json!(group_text(piece)),
                json!(piece.p_rank()),
                json!(chow_names(e, d)),
            ]);
        }
        match e.expected_chow() {
            Some(expected) => {
                let expected = truncate(&expected?, cap)?;
                let ok = expected == computed;
                r.witness(if ok {
                    "agrees with the catalog Chow groups".to_string()
                } else {
                    format!("catalog lists {}", describe(&expected))
                });
                verdict = Verdict::from_pass(ok);
            }
            None if !e.chow.is_empty() => {
                let ranks = e.expected_p_ranks();
                let ok = ranks.iter().filter(|(d, _)| within(cap, **d)).all(|(&d, &want)| {
                    let have = computed.p_rank(d);
                    if e.inclusion_only {
                        have >= want
                    } else {
                        have == want
                    }
                });
                r.witness(format!("catalog p-ranks {}", if ok { "agree" } else { "disagree" }));
                verdict = Verdict::from_pass(ok);
            }
            None => {}
        }
    } else {
        r.witness("restriction data incomplete; showing catalog data");
        if e.inclusion_only {
            r.witness("the listed classes are only known to lie in the Chow ring");
        }
        for line in e.chow.iter().filter(|l| within(cap, l.degree as i64)) {
            let group = match &line.kind {
                ChowKind::Integral { free, torsion } => json!(group_text(&GroupPiece {
                    free_rank: *free,
                    torsion: torsion.clone(),
                })),
                ChowKind::ModP { .. } => Value::Null,
            };
            t.push(vec![
                json!(line.degree),
                chow_degree(line.degree as i64),
                group,
                json!(line.p_rank()),
                json!(line.names),
            ]);
        }
    }
    r.tables.push(t);
    if let Some(l) = spin_rank(&e.group).filter(|_| e.prime.get() == 2 && !e.chow.is_empty()) {
        let d = dominance_check(e, &DominanceSource::spin(l));
        match d.violation {
            None => r.witness("dominated by the exterior-times-polynomial source in every degree"),
            Some((deg, src, want)) => {
                r.witness(format!("degree {deg}: source has dimension {src} < p-rank {want}"));
                verdict = Verdict::Fail;
            }
        }
    }
    r.verdict = verdict;
    Ok(r)
}

fn describe(g: &GradedAbelianGroup) -> String {
    g.pieces()
        .map(|(d, p)| format!("{d}: {}", group_text(p)))
        .collect::<Vec<_>>()
        .join(", ")
}

fn edge_labels(g: &CatalogEntry, sub: &CatalogEntry, given: Option<&str>) -> CliResult<(Vec<Term>, Option<LabelConvention>)> {
    match (given, g.edge_to(&sub.group)) {
        (Some(s), _) => Ok((parse_labels(s)?, None)),
        (None, Some(edge)) => Ok((edge.labels.clone(), Some(edge.convention))),
        (None, None) => Err(UsageError(format!(
            "{} has no catalog edge to {}; pass --labels",
            g.label(),
            sub.group
        ))),
    }
}

fn verify_edge(
    g: &CatalogEntry,
    sub: &CatalogEntry,
    labels: Option<&str>,
    convention: Option<LabelConvention>,
) -> CliResult<Report> {
    let (labels, edge_conv) = edge_labels(g, sub, labels)?;
    let conv = convention.or(edge_conv).unwrap_or(LabelConvention::Tensor);
    let res = verify_chain_edge(g, sub, &labels, conv)?;
    let mut r = Report::new("verify-edge", Some(g.label()), Verdict::from_pass(res.pass()));
    r.witness(format!(
        "{} <- {} with labels {{{}}}, convention {}",
        g.group,
        sub.group,
        res.labels.join(", "),
        conv.as_str()
    ));
    if let Some((d, want, found)) = res.mismatch {
        r.witness(format!("first mismatch in degree {d}: expected {want}, found {found}"));
    }
    let (exp_col, found_col) = match conv {
        LabelConvention::Tensor => ("lambda_x_sub", "group"),
        LabelConvention::Kernel => ("labels", "kernel"),
    };
    let mut t = Table::new("characters", &["deg", "chow_deg", exp_col, found_col]);
    let n = res.expected.len().max(res.found.len());
    for d in 0..n {
        let a = res.expected.get(d).copied().unwrap_or(0);
        let b = res.found.get(d).copied().unwrap_or(0);
        if a + b > 0 {
            t.push(vec![json!(d), chow_degree(d as i64), json!(a), json!(b)]);
        }
    }
    r.tables.push(t);
    Ok(r)
}

fn class_text(c: &QuotientClass) -> String {
    let mut parts: Vec<String> = c.torsion.iter().map(|(v, o)| format!("{v} mod {o}")).collect();
    parts.extend(c.free.iter().map(|f| {
        if c.denominator == 1 {
            f.to_string()
        } else {
            format!("{f}/{}", c.denominator)
        }
    }));
    format!("({})", parts.join(", "))
}

fn opt_bool(b: Option<bool>) -> Value {
    b.map_or(Value::Null, Value::Bool)
}

fn verify_restriction(g: &CatalogEntry, sub: &CatalogEntry, labels: Option<&str>, cli: &Cli) -> CliResult<Report> {
    let (labels, _) = edge_labels(g, sub, labels)?;
    let vb = v_bound(cli, g).max(sub.max_v_index());
    let res = verify_motive_restriction(g, sub, &labels, vb)?;
    let mut pass = res.pass();
    let mut r = Report::new("verify-restriction", Some(g.label()), Verdict::Info);
    r.witness(format!("target {} tensor exterior on {{{}}}", sub.label(), res.labels.join(", ")));
    let mut t = Table::new(
        "classes",
        &["class", "deg", "chow_deg", "image", "contained", "coordinates", "zero_mod_p", "stated", "agrees_mod_p"],
    );
    for c in &res.classes {
        t.push(vec![
            json!(c.name),
            json!(c.degree),
            chow_degree(c.degree as i64),
            json!(if c.corrected { format!("{} (corrected)", c.image) } else { c.image.clone() }),
            json!(c.contained),
            c.class.as_ref().map_or(Value::Null, |k| json!(class_text(k))),
            opt_bool(c.zero_mod_p),
            c.stated.as_ref().map_or(Value::Null, |s| json!(s)),
            opt_bool(c.agrees_mod_p),
        ]);
    }
    r.tables.push(t);
    if let Some(ch) = &res.character {
        r.witness(format!(
            "{} characters {}",
            if ch.integral { "integral" } else { "mod p" },
            if ch.pass { "agree" } else { "disagree" }
        ));
        let mut t = Table::new("character", &["deg", "chow_deg", "expected", "found"]);
        let degrees: std::collections::BTreeSet<i64> = ch.expected.keys().chain(ch.found.keys()).copied().collect();
        let text = |m: &std::collections::BTreeMap<i64, (u32, Vec<u64>)>, d: i64| match m.get(&d) {
            None => "0".to_string(),
            Some((f, tors)) if ch.integral => group_text(&GroupPiece {
                free_rank: *f,
                torsion: tors.clone(),
            }),
            Some((f, _)) => format!("rank {f}"),
        };
        for d in degrees {
            t.push(vec![json!(d), chow_degree(d), json!(text(&ch.expected, d)), json!(text(&ch.found, d))]);
        }
        r.tables.push(t);
    }
    if spin_rank(&g.group).is_some() && spin_rank(&sub.group).is_some() && g.prime.get() == 2 {
        let k = kernel_ideal_check(g, sub, &labels, vb)?;
        pass &= k.pass();
        let mut t = Table::new("kernel ideal", &["class", "indices", "vanishes_mod_p"]);
        for i in &k.items {
            t.push(vec![json!(i.class), json!(i.indices), json!(i.vanishes_mod_p)]);
        }
        r.witness(format!("classes involving c_j with j > {} must vanish mod 2", k.lbar));
        r.tables.push(t);
    }
    r.verdict = Verdict::from_pass(pass);
    Ok(r)
}

fn validate(catalog: &Catalog, entry: Option<&CatalogEntry>) -> Report {
    let report = match entry {
        Some(e) => validate_degrees(catalog, e),
        None => validate_catalog(catalog),
    };
    let ok = report.matches_expectations();
    let mut r = Report::new("validate", entry.map(CatalogEntry::label), Verdict::from_pass(ok));
    r.witness(format!("{} lines checked, {} flagged", report.items.len(), report.flagged().count()));
    for i in report.flagged() {
        let tag = if i.known_inconsistent { "known" } else { "unexpected" };
        r.witness(format!("{tag}: {} {}", i.entry, i.item));
    }
    for i in report.unconfirmed() {
        r.witness(format!("marked inconsistent but checks out: {} {}", i.entry, i.item));
    }
    let mut t = Table::new("lines", &["entry", "item", "expected", "found", "verdict", "known", "note"]);
    for i in &report.items {
        t.push(vec![
            json!(i.entry),
            json!(i.item),
            i.expected.map_or(Value::Null, |d| json!(d)),
            i.found.map_or(Value::Null, |d| json!(d)),
            json!(i.verdict.as_str()),
            json!(i.known_inconsistent),
            i.note.as_ref().map_or(Value::Null, |n| json!(n)),
        ]);
    }
    r.tables.push(t);
    r
}

fn ss_run(e: &CatalogEntry, s_max: u32, cap: Option<u32>) -> CliResult<Report> {
    let res = spectral_run(e, s_max).map_err(UsageError)?;
    let fin = res.final_page();
    let through = res.certificate.through();
    let n_max = cap.or(through).unwrap_or(s_max);
    let e2 = res.pages[0].total_dims(n_max);
    let einf = fin.total_dims(n_max);
    let pres = e.presentation()?;
    let exterior = pres.generators().iter().all(|g| g.height() == 2);
    let predicted = if exterior { predicted_real_character(&pres).ok() } else { None };
    let mut r = Report::new("ss-run", Some(e.label()), Verdict::Info);
    r.witness(format!("{} differentials, stable from E_{}", e.differentials.len(), fin.page()));
    let mut verdict = match res.certificate {
        Certificate::Certified { through_total_degree } => {
            r.witness(format!("certified through total degree {through_total_degree}"));
            Verdict::Pass
        }
        Certificate::Inconclusive { through_total_degree } => {
            r.witness(match through_total_degree {
                Some(n) => format!("stable only through total degree {n}; window too small"),
                None => "no degree is certified stable".to_string(),
            });
            Verdict::Inconclusive
        }
    };
    let mut t = Table::new("total dimensions", &["n", "e2", "e_inf", "predicted"]);
    for n in 0..=n_max as usize {
        let want = predicted.as_ref().map(|p| p.get(n).copied().unwrap_or(0));
        let trusted = through.is_some_and(|k| n as u32 <= k);
        if trusted && want.is_some_and(|w| w != einf[n]) {
            verdict = Verdict::Fail;
        }
        t.push(vec![json!(n), json!(e2[n]), json!(einf[n]), want.map_or(Value::Null, |w| json!(w))]);
    }
    r.tables.push(t);
    let mut pages = Table::new("pages", &["page", "euler_characteristic"]);
    for p in &res.pages {
        pages.push(vec![json!(p.page()), json!(p.euler_characteristic())]);
    }
    r.tables.push(pages);
    r.verdict = verdict;
    Ok(r)
}
