use std::time::Instant;

use flagchow::catalog_file::CatalogFile;
use flagchow::suite::run_criterion;

#[test]
fn acceptance() {
    let catalog = CatalogFile::bundled().catalog().expect("bundled catalog loads");
    let mut failed = Vec::new();
    for id in 1..=10 {
        let start = Instant::now();
        let c = run_criterion(&catalog, id);
        let tag = if c.pass { "PASS" } else { "FAIL" };
        println!("{tag} {id}: {} ({}) [{:.2?}]", c.title, c.detail, start.elapsed());
        if !c.pass {
            failed.push(id);
        }
    }
    assert!(failed.is_empty(), "failing criteria: {failed:?}");
}
