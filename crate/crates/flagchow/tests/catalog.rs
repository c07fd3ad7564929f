use flagchow::catalog_file::{CatalogFile, BUNDLED};
use flagchow_core::catalog::{spin_entry, spin_rank, validate_catalog, Catalog, LabelConvention};
use flagchow_core::decomposition::{dominance_check, verify_chain_edge, verify_motive_restriction, DominanceSource};
use flagchow_core::omega_module::DEFAULT_V_BOUND;
use proptest::prelude::*;

fn bundled() -> Catalog {
    CatalogFile::bundled().catalog().unwrap()
}

#[test]
fn bundled_text_is_canonical() {
    assert_eq!(CatalogFile::bundled().to_string(), BUNDLED);
}

#[test]
fn entries_survive_a_rewrite() {
    let entries = CatalogFile::bundled().entries().unwrap();
    assert!(entries.len() >= 12);
    let again = CatalogFile::parse(&CatalogFile::from_entries(&entries).to_string()).unwrap();
    assert_eq!(again.entries().unwrap(), entries);
}

#[test]
fn validation_matches_expectations() {
    let r = validate_catalog(&bundled());
    assert!(r.matches_expectations());
    assert_eq!(r.flagged().count(), 2);
}

#[test]
fn synthesized_spin_entries_agree_with_the_file() {
    let catalog = bundled();
    for e in catalog.entries().iter().filter(|e| e.prime.get() == 2) {
        let Some(l) = spin_rank(&e.group) else { continue };
        let s = spin_entry(l).unwrap();
        let (a, b) = (e.presentation().unwrap(), s.presentation().unwrap());
        assert_eq!(a.poincare_series(), b.poincare_series(), "{}", e.group);
        let names = |p: &flagchow_core::AlgebraPresentation| -> Vec<String> {
            p.generators().iter().map(|g| g.name().to_string()).collect()
        };
        assert_eq!(names(&a), names(&b), "{}", e.group);
        for edge in &e.edges {
            if let Some(se) = s.edge_to(&edge.subgroup) {
                assert_eq!(edge.labels, se.labels, "{} <- {}", e.group, edge.subgroup);
            }
        }
        if e.res_complete() {
            let q = |x: &flagchow_core::catalog::CatalogEntry| {
                let m = x.res_module(DEFAULT_V_BOUND).unwrap();
                m.augmentation_quotient(m.default_cap()).unwrap()
            };
            assert_eq!(q(e), q(&s), "{}", e.group);
        }
    }
}

#[test]
fn complete_entries_reproduce_their_chow_ranks() {
    for e in bundled().entries().iter().filter(|e| e.res_complete() && !e.chow.is_empty()) {
        let m = e.res_module(e.max_v_index().max(DEFAULT_V_BOUND)).unwrap();
        let q = m.augmentation_quotient(m.default_cap()).unwrap();
        let found: std::collections::BTreeMap<i64, u32> =
            q.pieces().map(|(d, p)| (d, p.p_rank())).filter(|(_, r)| *r > 0).collect();
        assert_eq!(found, e.expected_p_ranks(), "{}", e.label());
        if let Some(expected) = e.expected_chow() {
            assert_eq!(q, expected.unwrap(), "{}", e.label());
        }
    }
}

#[test]
fn restriction_to_itself_passes() {
    for e in bundled().entries().iter().filter(|e| e.res_complete()) {
        let r = verify_motive_restriction(e, e, &[], e.max_v_index().max(DEFAULT_V_BOUND)).unwrap();
        assert!(r.pass(), "{}: {r:?}", e.label());
    }
}

#[test]
fn spin_entries_are_dominated() {
    for e in bundled().entries().iter().filter(|e| e.prime.get() == 2) {
        if let Some(l) = spin_rank(&e.group) {
            assert!(dominance_check(e, &DominanceSource::spin(l)).pass(), "{}", e.label());
        }
    }
}

#[test]
fn every_edge_verifies() {
    let catalog = bundled();
    for e in catalog.entries() {
        for edge in &e.edges {
            let sub = catalog.resolve(&edge.subgroup, Some(e.prime.get())).unwrap();
            let r = verify_chain_edge(e, &sub, &edge.labels, edge.convention).unwrap();
            assert!(r.pass(), "{} <- {}: {r:?}", e.label(), edge.subgroup);
        }
    }
}

#[test]
fn kernel_labels_of_e7_p3() {
    let catalog = bundled();
    let e7 = catalog.resolve("E7", Some(3)).unwrap();
    let pt = catalog.resolve("pt", Some(3)).unwrap();
    let r = verify_chain_edge(&e7, &pt, &e7.edges[0].labels, LabelConvention::Kernel).unwrap();
    assert!(r.pass());
    assert_eq!(r.found.iter().sum::<u64>(), 2);
}

fn arb_line() -> impl Strategy<Value = String> {
    let name = "[a-z][a-z0-9_]{0,5}";
    prop_oneof![
        Just(String::new()),
        "[ a-z]{0,20}".prop_map(|c| format!("#{c}")),
        (name, 1u32..20, prop::sample::select(vec![2u32, 3, 4, 8])).prop_map(|(n, d, h)| format!("gen y{n} deg={} h={h}", 2 * d)),
        (1u32..9, 0u32..3).prop_map(|(c, e)| format!("res ({c},v1^{})y1", e + 1)),
        (0u32..40, 0u32..3, prop::sample::select(vec![2u64, 4, 8])).prop_map(|(d, f, t)| format!("chow {}: free={f} tors={t}", 2 * d)),
        "[a-z ]{1,30}".prop_map(|a| format!("assert {}", a.trim()).trim_end().to_string()),
    ]
}

proptest! {
    #[test]
    fn parse_print_is_idempotent(lines in prop::collection::vec(arb_line(), 0..12)) {
        let text = format!("[entry X p=2]\ngen y1 deg=2 h=2\n{}\n", lines.join("\n"));
        if let Ok(f) = CatalogFile::parse(&text) {
            let printed = f.to_string();
            let again = CatalogFile::parse(&printed).unwrap();
            prop_assert_eq!(&again, &f);
            prop_assert_eq!(again.to_string(), printed);
        }
    }
}
