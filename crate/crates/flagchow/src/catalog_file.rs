//! The line-oriented catalog text format. See `docs/catalog-format.md`.
//!
//! A file is kept as a list of [`Line`]s so that comments and blank lines
//! survive a load/save cycle; every line prints back in canonical form, and a
//! file written in canonical form round-trips byte for byte.

use std::fmt;
use std::path::Path;

use flagchow_core::catalog::{
    Catalog, CatalogEntry, ChainEdge, ChowKind, ChowLine, DifferentialSpec, Expr, LabelConvention, MotivicClass,
    NamedClass, ResPair, Restriction, Term,
};
use flagchow_core::omega_module::IdealGenerator;
use flagchow_core::{GeneratorSpec, Prime};

/// The catalog shipped with the crate.
pub const BUNDLED: &str = include_str!("../data/catalog.txt");

/// Environment variable naming the default catalog file.
pub const CATALOG_ENV: &str = "FLAGCHOW_CATALOG";

#[derive(Debug, thiserror::Error)]
pub enum LoadError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

fn parse_err<T>(line: usize, message: impl Into<String>) -> Result<T, LoadError> {
    Err(LoadError::Parse {
        line,
        message: message.into(),
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Header {
    pub group: String,
    pub prime: Prime,
    pub incomplete: bool,
    pub inclusion_only: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Line {
    Blank,
    Comment(String),
    Entry(Header),
    Gen(GeneratorSpec),
    Res(ResPair),
    Class(NamedClass),
    Restrict(Restriction),
    Chow(ChowLine),
    Edge(ChainEdge),
    Motivic(MotivicClass),
    Diff(DifferentialSpec),
    Assert(String),
}

fn join<T: fmt::Display>(items: &[T]) -> String {
    items.iter().map(ToString::to_string).collect::<Vec<_>>().join(",")
}

impl fmt::Display for Line {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Line::Blank => Ok(()),
            Line::Comment(c) => write!(f, "#{c}"),
            Line::Entry(h) => {
                write!(f, "[entry {} p={}", h.group, h.prime)?;
                if h.incomplete {
                    write!(f, " incomplete")?;
                }
                if h.inclusion_only {
                    write!(f, " inclusion")?;
                }
                write!(f, "]")
            }
            Line::Gen(g) => {
                write!(f, "gen {} deg={} h={}", g.name(), g.degree(), g.height())?;
                if !g.aliases().is_empty() {
                    write!(f, " alias={}", g.aliases().join(","))?;
                }
                Ok(())
            }
            Line::Res(r) => {
                write!(f, "res {r}")?;
                if r.incomplete {
                    write!(f, " incomplete")?;
                }
                Ok(())
            }
            Line::Class(c) => {
                write!(f, "class {} deg={} -> {}", c.name, c.degree, c.image)?;
                if c.known_inconsistent {
                    write!(f, " known-inconsistent")?;
                }
                if let Some(corr) = &c.corrected {
                    write!(f, " corrected={corr}")?;
                }
                Ok(())
            }
            Line::Restrict(r) => write!(f, "restrict {} {} -> {}", r.subgroup, r.class, r.image),
            Line::Chow(c) => {
                write!(f, "chow {}:", c.degree)?;
                match &c.kind {
                    ChowKind::Integral { free, torsion } => {
                        write!(f, " free={free}")?;
                        if !torsion.is_empty() {
                            write!(f, " tors={}", join(torsion))?;
                        }
                    }
                    ChowKind::ModP { rank } => write!(f, " modp={rank}")?,
                }
                if !c.names.is_empty() {
                    write!(f, " names={}", c.names.join(","))?;
                }
                Ok(())
            }
            Line::Edge(e) => write!(
                f,
                "edge {} labels={} convention={}",
                e.subgroup,
                join(&e.labels),
                e.convention.as_str()
            ),
            Line::Motivic(m) => write!(f, "motivic {} tau={} rho={} deg={}", m.class, m.tau, m.rho, m.degree),
            Line::Diff(d) => write!(f, "diff {} {} -> {}", d.page, d.generator, d.image),
            Line::Assert(t) => write!(f, "assert {t}"),
        }
    }
}

/// `key=value` options after the positional words of a line.
struct Options<'a> {
    line: usize,
    pairs: Vec<(&'a str, &'a str)>,
    flags: Vec<&'a str>,
}

impl<'a> Options<'a> {
    fn new(line: usize, words: &[&'a str]) -> Self {
        let mut pairs = Vec::new();
        let mut flags = Vec::new();
        for w in words {
            match w.split_once('=') {
                Some((k, v)) => pairs.push((k, v)),
                None => flags.push(*w),
            }
        }
        Options { line, pairs, flags }
    }

    /// Reject anything outside the allowed keys and flags, and repeated keys.
    fn allow(&self, keys: &[&str], flags: &[&str]) -> Result<(), LoadError> {
        for (i, (k, _)) in self.pairs.iter().enumerate() {
            if !keys.contains(k) {
                return parse_err(self.line, format!("unknown field `{k}`"));
            }
            if self.pairs[..i].iter().any(|(o, _)| o == k) {
                return parse_err(self.line, format!("field `{k}` given twice"));
            }
        }
        for fl in &self.flags {
            if !flags.contains(fl) {
                return parse_err(self.line, format!("unknown field `{fl}`"));
            }
        }
        Ok(())
    }

    fn get(&self, key: &str) -> Option<&'a str> {
        self.pairs.iter().find(|(k, _)| *k == key).map(|(_, v)| *v)
    }

    fn flag(&self, name: &str) -> bool {
        self.flags.contains(&name)
    }

    fn require(&self, key: &str) -> Result<&'a str, LoadError> {
        self.get(key)
            .ok_or_else(|| LoadError::Parse {
                line: self.line,
                message: format!("missing field `{key}`"),
            })
    }

    fn number<T: std::str::FromStr>(&self, key: &str) -> Result<T, LoadError> {
        let v = self.require(key)?;
        v.parse().map_err(|_| LoadError::Parse {
            line: self.line,
            message: format!("`{key}` expects a number, got `{v}`"),
        })
    }
}

fn expr(line: usize, s: &str) -> Result<Expr, LoadError> {
    s.parse().map_err(|e| LoadError::Parse {
        line,
        message: format!("bad expression `{s}`: {e}"),
    })
}

fn term(line: usize, s: &str) -> Result<Term, LoadError> {
    Term::parse(s).map_err(|e| LoadError::Parse {
        line,
        message: format!("bad monomial `{s}`: {e}"),
    })
}

fn list(s: &str) -> Vec<&str> {
    if s.is_empty() {
        Vec::new()
    } else {
        s.split(',').collect()
    }
}

fn ideal_generator(line: usize, s: &str) -> Result<IdealGenerator, LoadError> {
    let (neg, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s),
    };
    let t = term(line, body)?;
    let mut v = Vec::new();
    for f in &t.factors {
        match f.v_index() {
            Some(k) if k >= 1 => v.push((k, f.power)),
            _ => return parse_err(line, format!("ideal generator `{s}` may only involve v1, v2, ...")),
        }
    }
    Ok(IdealGenerator {
        coefficient: if neg { -t.coefficient } else { t.coefficient },
        v,
    })
}

fn res_pair(line: usize, s: &str, incomplete: bool) -> Result<ResPair, LoadError> {
    let Some(body) = s.strip_prefix('(') else {
        return parse_err(line, "res expects `(<ideal>)<monomial>`");
    };
    let Some((ideal, mono)) = body.split_once(')') else {
        return parse_err(line, "unclosed `(` in res");
    };
    let ideal = list(ideal)
        .into_iter()
        .map(|g| ideal_generator(line, g))
        .collect::<Result<Vec<_>, _>>()?;
    if ideal.is_empty() {
        return parse_err(line, "empty ideal");
    }
    let monomial = if mono.is_empty() || mono == "1" {
        Vec::new()
    } else {
        let t = term(line, mono)?;
        if t.coefficient != 1 {
            return parse_err(line, format!("res monomial `{mono}` carries a coefficient"));
        }
        t.factors
    };
    Ok(ResPair {
        ideal,
        monomial,
        incomplete,
    })
}

/// `lhs -> rhs [options]` split into words.
fn arrow(line: usize, rest: &str) -> Result<(Vec<&str>, &str, Vec<&str>), LoadError> {
    let Some((lhs, rhs)) = rest.split_once(" -> ") else {
        return parse_err(line, "expected ` -> `");
    };
    let mut right = rhs.split_whitespace();
    let Some(image) = right.next() else {
        return parse_err(line, "missing image after `->`");
    };
    Ok((lhs.split_whitespace().collect(), image, right.collect()))
}

fn parse_line(n: usize, raw: &str) -> Result<Line, LoadError> {
    let text = raw.trim_end();
    if text.trim().is_empty() {
        return Ok(Line::Blank);
    }
    if let Some(c) = text.strip_prefix('#') {
        return Ok(Line::Comment(c.to_string()));
    }
    let text = text.trim_start();
    if let Some(inner) = text.strip_prefix('[') {
        let Some(inner) = inner.strip_suffix(']') else {
            return parse_err(n, "unclosed `[`");
        };
        let words: Vec<&str> = inner.split_whitespace().collect();
        let ["entry", group, rest @ ..] = words.as_slice() else {
            return parse_err(n, "expected `[entry <group> p=<p>]`");
        };
        let opts = Options::new(n, rest);
        opts.allow(&["p"], &["incomplete", "inclusion"])?;
        let p: u32 = opts.number("p")?;
        let prime = Prime::new(p).map_err(|e| LoadError::Parse {
            line: n,
            message: e.to_string(),
        })?;
        return Ok(Line::Entry(Header {
            group: group.to_string(),
            prime,
            incomplete: opts.flag("incomplete"),
            inclusion_only: opts.flag("inclusion"),
        }));
    }
    let (keyword, rest) = text.split_once(' ').unwrap_or((text, ""));
    let words: Vec<&str> = rest.split_whitespace().collect();
    match keyword {
        "gen" => {
            let [name, opts @ ..] = words.as_slice() else {
                return parse_err(n, "gen expects a name");
            };
            let opts = Options::new(n, opts);
            opts.allow(&["deg", "h", "alias"], &[])?;
            let g = GeneratorSpec::new(*name, opts.number("deg")?, opts.number("h")?).map_err(|e| {
                LoadError::Parse {
                    line: n,
                    message: e.to_string(),
                }
            })?;
            Ok(Line::Gen(g.with_aliases(opts.get("alias").map(list).unwrap_or_default())))
        }
        "res" => {
            let [pair, opts @ ..] = words.as_slice() else {
                return parse_err(n, "res expects `(<ideal>)<monomial>`");
            };
            let opts = Options::new(n, opts);
            opts.allow(&[], &["incomplete"])?;
            Ok(Line::Res(res_pair(n, pair, opts.flag("incomplete"))?))
        }
        "class" => {
            let (lhs, image, right) = arrow(n, rest)?;
            let [name, opts @ ..] = lhs.as_slice() else {
                return parse_err(n, "class expects a name");
            };
            let left = Options::new(n, opts);
            left.allow(&["deg"], &[])?;
            let right = Options::new(n, &right);
            right.allow(&["corrected"], &["known-inconsistent"])?;
            Ok(Line::Class(NamedClass {
                name: name.to_string(),
                degree: left.number("deg")?,
                image: expr(n, image)?,
                known_inconsistent: right.flag("known-inconsistent"),
                corrected: right.get("corrected").map(|c| expr(n, c)).transpose()?,
            }))
        }
        "restrict" => {
            let (lhs, image, right) = arrow(n, rest)?;
            let [subgroup, class] = lhs.as_slice() else {
                return parse_err(n, "restrict expects `<subgroup> <class> -> <image>`");
            };
            Options::new(n, &right).allow(&[], &[])?;
            Ok(Line::Restrict(Restriction {
                subgroup: subgroup.to_string(),
                class: class.to_string(),
                image: expr(n, image)?,
            }))
        }
        "chow" => {
            let [deg, opts @ ..] = words.as_slice() else {
                return parse_err(n, "chow expects `<deg>:`");
            };
            let Some(degree) = deg.strip_suffix(':').and_then(|d| d.parse().ok()) else {
                return parse_err(n, format!("chow expects `<deg>:`, got `{deg}`"));
            };
            let opts = Options::new(n, opts);
            opts.allow(&["free", "tors", "modp", "names"], &[])?;
            let kind = if opts.get("modp").is_some() {
                if opts.get("free").is_some() || opts.get("tors").is_some() {
                    return parse_err(n, "`modp` excludes `free` and `tors`");
                }
                ChowKind::ModP {
                    rank: opts.number("modp")?,
                }
            } else {
                let free = if opts.get("free").is_some() { opts.number("free")? } else { 0 };
                let torsion = list(opts.get("tors").unwrap_or(""))
                    .into_iter()
                    .map(|t| {
                        t.parse::<u64>().map_err(|_| LoadError::Parse {
                            line: n,
                            message: format!("bad torsion order `{t}`"),
                        })
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                ChowKind::Integral { free, torsion }
            };
            Ok(Line::Chow(ChowLine {
                degree,
                kind,
                names: list(opts.get("names").unwrap_or("")).into_iter().map(String::from).collect(),
            }))
        }
        "edge" => {
            let [subgroup, opts @ ..] = words.as_slice() else {
                return parse_err(n, "edge expects a subgroup");
            };
            let opts = Options::new(n, opts);
            opts.allow(&["labels", "convention"], &[])?;
            let labels = list(opts.require("labels")?)
                .into_iter()
                .map(|l| term(n, l))
                .collect::<Result<Vec<_>, _>>()?;
            let convention: LabelConvention = opts.require("convention")?.parse().map_err(|e| LoadError::Parse {
                line: n,
                message: format!("{e}"),
            })?;
            Ok(Line::Edge(ChainEdge {
                subgroup: subgroup.to_string(),
                labels,
                convention,
            }))
        }
        "motivic" => {
            let [class, opts @ ..] = words.as_slice() else {
                return parse_err(n, "motivic expects a class name");
            };
            let opts = Options::new(n, opts);
            opts.allow(&["tau", "rho", "deg"], &[])?;
            Ok(Line::Motivic(MotivicClass {
                class: class.to_string(),
                tau: opts.number("tau")?,
                rho: opts.number("rho")?,
                degree: opts.number("deg")?,
            }))
        }
        "diff" => {
            let (lhs, image, right) = arrow(n, rest)?;
            let [page, generator] = lhs.as_slice() else {
                return parse_err(n, "diff expects `<page> <generator> -> <image>`");
            };
            Options::new(n, &right).allow(&[], &[])?;
            let Ok(page) = page.parse() else {
                return parse_err(n, format!("bad page `{page}`"));
            };
            Ok(Line::Diff(DifferentialSpec {
                page,
                generator: generator.to_string(),
                image: expr(n, image)?,
            }))
        }
        "assert" => {
            if rest.trim().is_empty() {
                return parse_err(n, "empty assertion");
            }
            Ok(Line::Assert(rest.trim().to_string()))
        }
        other => parse_err(n, format!("unknown line kind `{other}`")),
    }
}

/// A parsed catalog file.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CatalogFile {
    pub lines: Vec<Line>,
}

impl CatalogFile {
    pub fn parse(text: &str) -> Result<Self, LoadError> {
        let lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| parse_line(i + 1, l))
            .collect::<Result<Vec<_>, _>>()?;
        let file = CatalogFile { lines };
        file.entries()?;
        Ok(file)
    }

    pub fn read(path: &Path) -> Result<Self, LoadError> {
        let text = std::fs::read_to_string(path).map_err(|source| LoadError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::parse(&text)
    }

    pub fn bundled() -> Self {
        Self::parse(BUNDLED).expect("bundled catalog parses")
    }

    /// Canonical text of the given entries, one blank line between entries.
    pub fn from_entries(entries: &[CatalogEntry]) -> Self {
        let mut lines = Vec::new();
        for (i, e) in entries.iter().enumerate() {
            if i > 0 {
                lines.push(Line::Blank);
            }
            lines.push(Line::Entry(Header {
                group: e.group.clone(),
                prime: e.prime,
                incomplete: e.incomplete,
                inclusion_only: e.inclusion_only,
            }));
            lines.extend(e.generators.iter().cloned().map(Line::Gen));
            lines.extend(e.res.iter().cloned().map(Line::Res));
            lines.extend(e.classes.iter().cloned().map(Line::Class));
            lines.extend(e.restrictions.iter().cloned().map(Line::Restrict));
            lines.extend(e.chow.iter().cloned().map(Line::Chow));
            lines.extend(e.edges.iter().cloned().map(Line::Edge));
            lines.extend(e.motivic.iter().cloned().map(Line::Motivic));
            lines.extend(e.differentials.iter().cloned().map(Line::Diff));
            lines.extend(e.assertions.iter().cloned().map(Line::Assert));
        }
        CatalogFile { lines }
    }

    /// Group the lines into entries, checking each entry as it closes.
    pub fn entries(&self) -> Result<Vec<CatalogEntry>, LoadError> {
        let mut out: Vec<(usize, CatalogEntry)> = Vec::new();
        for (i, line) in self.lines.iter().enumerate() {
            let n = i + 1;
            if let Line::Entry(h) = line {
                if let Some((prev, _)) = out.iter().find(|(_, e)| e.group == h.group && e.prime == h.prime) {
                    return parse_err(n, format!("duplicate entry {} p={} (first at line {prev})", h.group, h.prime));
                }
                let mut e = CatalogEntry::new(h.group.clone(), h.prime);
                e.incomplete = h.incomplete;
                e.inclusion_only = h.inclusion_only;
                out.push((n, e));
                continue;
            }
            if matches!(line, Line::Blank | Line::Comment(_)) {
                continue;
            }
            let Some((_, e)) = out.last_mut() else {
                return parse_err(n, "data line before the first `[entry ...]` header");
            };
            match line {
                Line::Gen(g) => {
                    if e.generators.iter().any(|o| o.answers_to(g.name())) {
                        return parse_err(n, format!("duplicate generator `{}`", g.name()));
                    }
                    e.generators.push(g.clone());
                }
                Line::Res(r) => e.res.push(r.clone()),
                Line::Class(c) => {
                    if e.class(&c.name).is_some() {
                        return parse_err(n, format!("duplicate class `{}`", c.name));
                    }
                    e.classes.push(c.clone());
                }
                Line::Restrict(r) => e.restrictions.push(r.clone()),
                Line::Chow(c) => e.chow.push(c.clone()),
                Line::Edge(ed) => e.edges.push(ed.clone()),
                Line::Motivic(m) => e.motivic.push(m.clone()),
                Line::Diff(d) => e.differentials.push(d.clone()),
                Line::Assert(a) => e.assertions.push(a.clone()),
                Line::Blank | Line::Comment(_) | Line::Entry(_) => unreachable!(),
            }
        }
        for (n, e) in &out {
            e.check().map_err(|err| LoadError::Parse {
                line: *n,
                message: err.to_string(),
            })?;
        }
        Ok(out.into_iter().map(|(_, e)| e).collect())
    }

    pub fn catalog(&self) -> Result<Catalog, LoadError> {
        Catalog::new(self.entries()?).map_err(|e| LoadError::Parse {
            line: 0,
            message: e.to_string(),
        })
    }
}

impl fmt::Display for CatalogFile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for line in &self.lines {
            writeln!(f, "{line}")?;
        }
        Ok(())
    }
}

/// Load from an explicit path, else from `$FLAGCHOW_CATALOG`, else the bundled catalog.
pub fn load_catalog(path: Option<&Path>) -> Result<Catalog, LoadError> {
    let file = match path {
        Some(p) => CatalogFile::read(p)?,
        None => match std::env::var_os(CATALOG_ENV) {
            Some(p) if !p.is_empty() => CatalogFile::read(Path::new(&p))?,
            _ => CatalogFile::bundled(),
        },
    };
    file.catalog()
}
