//! Degree bookkeeping over a catalog entry: every stated image must live in the
//! degree of the class it is attached to.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use super::{Catalog, CatalogEntry, Expr, Factor};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Verdict {
    Ok,
    Inconsistent,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Ok => "ok",
            Verdict::Inconsistent => "inconsistent",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValidationItem {
    pub entry: String,
    pub item: String,
    pub expected: Option<i64>,
    pub found: Option<i64>,
    pub verdict: Verdict,
    /// The catalog marks this line as a known misprint.
    pub known_inconsistent: bool,
    pub note: Option<String>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub items: Vec<ValidationItem>,
}

impl ValidationReport {
    pub fn flagged(&self) -> impl Iterator<Item = &ValidationItem> {
        self.items.iter().filter(|i| i.verdict == Verdict::Inconsistent)
    }

    /// Flagged lines the catalog does not expect to be wrong.
    pub fn unexpected(&self) -> impl Iterator<Item = &ValidationItem> {
        self.flagged().filter(|i| !i.known_inconsistent)
    }

    /// Lines marked known-inconsistent that nevertheless check out.
    pub fn unconfirmed(&self) -> impl Iterator<Item = &ValidationItem> {
        self.items
            .iter()
            .filter(|i| i.known_inconsistent && i.verdict == Verdict::Ok)
    }

    /// The flagged set is exactly the known-inconsistent set.
    pub fn matches_expectations(&self) -> bool {
        self.unexpected().next().is_none() && self.unconfirmed().next().is_none()
    }

    pub fn extend(&mut self, other: ValidationReport) {
        self.items.extend(other.items);
    }
}

enum ExprDegree {
    Zero,
    Degree(i64),
    Inhomogeneous,
    Unresolved(String),
}

fn expr_degree(expr: &Expr, factor_degree: &dyn Fn(&Factor) -> Option<i64>) -> ExprDegree {
    let mut degree = None;
    for t in &expr.terms {
        let mut d = 0i64;
        for f in &t.factors {
            match factor_degree(f) {
                Some(x) => d += x,
                None => return ExprDegree::Unresolved(f.name.clone()),
            }
        }
        match degree {
            None => degree = Some(d),
            Some(prev) if prev != d => return ExprDegree::Inhomogeneous,
            _ => {}
        }
    }
    degree.map_or(ExprDegree::Zero, ExprDegree::Degree)
}

fn generator_factor_degree(entry: &CatalogEntry, f: &Factor) -> Option<i64> {
    if let Some(k) = f.v_index() {
        return Some(-(entry.prime.v_weight(k) as i64) * f.power as i64);
    }
    entry.name_degree(&f.name).map(|d| d as i64 * f.power as i64)
}

struct Builder<'a> {
    entry: &'a CatalogEntry,
    report: ValidationReport,
}

impl Builder<'_> {
    fn push(&mut self, item: String, expected: Option<i64>, found: Option<i64>, ok: bool, known: bool, note: Option<String>) {
        self.report.items.push(ValidationItem {
            entry: self.entry.label(),
            item,
            expected,
            found,
            verdict: if ok { Verdict::Ok } else { Verdict::Inconsistent },
            known_inconsistent: known,
            note,
        });
    }

    fn check_expr(&mut self, item: String, expected: i64, expr: &Expr, known: bool, factor_degree: &dyn Fn(&Factor) -> Option<i64>) {
        match expr_degree(expr, factor_degree) {
            ExprDegree::Zero => self.push(item, Some(expected), None, true, known, Some("zero image".to_string())),
            ExprDegree::Degree(d) => self.push(item, Some(expected), Some(d), d == expected, known, None),
            ExprDegree::Inhomogeneous => {
                self.push(item, Some(expected), None, false, known, Some("image is not homogeneous".to_string()))
            }
            ExprDegree::Unresolved(n) => {
                self.push(item, Some(expected), None, false, known, Some(format!("cannot resolve `{n}`")))
            }
        }
    }
}

/// Check every degree-carrying line of `entry`. Restriction lines are checked
/// against the subgroup entry looked up in `catalog`.
pub fn validate_degrees(catalog: &Catalog, entry: &CatalogEntry) -> ValidationReport {
    let mut b = Builder {
        entry,
        report: ValidationReport::default(),
    };
    let gen_degree = |f: &Factor| generator_factor_degree(entry, f);

    for r in &entry.res {
        let mono = super::Term::monomial(r.monomial.clone());
        let admissible = matches!(entry.monomial(&r.monomial), Ok(Some(_)));
        let mdeg = entry.monomial_degree(&r.monomial).ok();
        for g in &r.ideal {
            let item = format!("res ({g}){mono}");
            let vdeg: i64 = g.v.iter().map(|&(k, e)| (entry.prime.v_weight(k) * e) as i64).sum();
            match mdeg {
                Some(m) if admissible => {
                    let d = m as i64 - vdeg;
                    let note = (d < 0).then(|| "negative degree".to_string());
                    b.push(item, None, Some(d), d >= 0, false, note);
                }
                _ => b.push(item, None, None, false, false, Some("monomial is not admissible".to_string())),
            }
        }
    }

    for c in &entry.classes {
        let expected = c.degree as i64;
        b.check_expr(format!("class {}", c.name), expected, &c.image, c.known_inconsistent, &gen_degree);
        if let Some(corr) = &c.corrected {
            b.check_expr(format!("class {} (corrected)", c.name), expected, corr, false, &gen_degree);
        }
    }

    for r in &entry.restrictions {
        let item = format!("restrict {} {}", r.subgroup, r.class);
        let Some(class) = entry.class(&r.class) else {
            b.push(item, None, None, false, false, Some(format!("unknown class `{}`", r.class)));
            continue;
        };
        let sub = match catalog.resolve(&r.subgroup, Some(entry.prime.get())) {
            Ok(s) => s,
            Err(e) => {
                b.push(item, Some(class.degree as i64), None, false, false, Some(e.to_string()));
                continue;
            }
        };
        let fd = |f: &Factor| {
            if let Some(c) = sub.class(&f.name) {
                return Some(c.degree as i64 * f.power as i64);
            }
            generator_factor_degree(entry, f)
        };
        b.check_expr(item, class.degree as i64, &r.image, false, &fd);
    }

    for m in &entry.motivic {
        let d = m.degree as i64;
        b.push(format!("motivic {} rho", m.class), Some(d), Some(m.rho as i64), m.rho as i64 == d, false, None);
        let weight = m.tau as i64 + m.rho as i64;
        let ok = d % 2 == 0 && weight == d / 2;
        b.push(format!("motivic {} weight", m.class), Some(d / 2), Some(weight), ok, false, None);
        if let Some(c) = entry.class(&m.class) {
            b.push(format!("motivic {} class degree", m.class), Some(c.degree as i64), Some(d), c.degree as i64 == d, false, None);
        }
    }

    for dspec in &entry.differentials {
        let item = format!("diff {} {}", dspec.page, dspec.generator);
        let Some(t) = entry.name_degree(&dspec.generator) else {
            b.push(item, None, None, false, false, Some(format!("cannot resolve `{}`", dspec.generator)));
            continue;
        };
        let r = dspec.page as i64;
        // target bidegree (r, t - r + 1): rho carries (1, 0), fiber classes (0, |y|)
        let mut ok = true;
        let mut found = None;
        for term in &dspec.image.terms {
            let mut s = 0i64;
            let mut fiber = 0i64;
            for f in &term.factors {
                if f.name == "rho" {
                    s += f.power as i64;
                } else if let Some(d) = entry.name_degree(&f.name) {
                    fiber += d as i64 * f.power as i64;
                } else {
                    ok = false;
                }
            }
            ok &= s == r && fiber == t as i64 - r + 1;
            found = Some(s + fiber);
        }
        b.push(item, Some(t as i64 + 1), found, ok, false, None);
    }

    b.report
}

/// [`validate_degrees`] over every entry of the catalog, in catalog order.
pub fn validate_catalog(catalog: &Catalog) -> ValidationReport {
    let mut report = ValidationReport::default();
    for e in catalog.entries() {
        report.extend(validate_degrees(catalog, e));
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{spin_entry, NamedClass};

    fn class(name: &str, degree: u32, image: &str, known: bool) -> NamedClass {
        NamedClass {
            name: name.into(),
            degree,
            image: image.parse().unwrap(),
            known_inconsistent: known,
            corrected: None,
        }
    }

    #[test]
    fn spin11_misprints_are_flagged() {
        let mut e = spin_entry(5).unwrap();
        e.classes = alloc::vec![
            class("c_2", 4, "v1*y1", false),
            class("c_3", 6, "2*y2", true),
            class("c_4", 8, "v1*y3", true),
            class("c_5", 10, "2*y2", false),
        ];
        let cat = Catalog::new(alloc::vec![e.clone()]).unwrap();
        let r = validate_degrees(&cat, &e);
        let flagged: Vec<(&str, Option<i64>)> = r.flagged().map(|i| (i.item.as_str(), i.found)).collect();
        assert_eq!(flagged, [("class c_3", Some(10)), ("class c_4", Some(16))]);
        assert!(r.matches_expectations());
        assert!(r.items.iter().all(|i| i.entry == "Spin_11 p=2"));
    }

    #[test]
    fn res_pairs_are_checked() {
        let e = spin_entry(5).unwrap();
        let r = validate_degrees(&Catalog::default(), &e);
        assert_eq!(r.items.len(), 6);
        assert!(r.flagged().next().is_none());
        let degrees: Vec<Option<i64>> = r.items.iter().map(|i| i.found).collect();
        assert_eq!(degrees, [Some(10), Some(8), Some(16), Some(12), Some(6), Some(4)]);
    }
}
