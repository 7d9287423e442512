//! The reference SVD cache: the first lookup computes and stores, the
//! second reads the file back.

use std::time::Instant;

use rsvd_diag::TestMatrixSpec;
use rsvd_diag_harness::cache::SvdCache;

fn main() -> anyhow::Result<()> {
    let cache = SvdCache::new(std::env::temp_dir().join("rsvd-diag-cache-example"));
    let spec = TestMatrixSpec::preset("GapMedium", 0).unwrap();
    let a = spec.generate()?;
    println!("cache file {}", cache.path_for(&spec).display());
    for pass in ["first", "second"] {
        let start = Instant::now();
        let f = cache.get_or_compute(&spec, &a)?;
        println!("{pass} lookup: {:.0?}, sigma_1 = {:.6}", start.elapsed(), f.singular_values[0]);
    }
    Ok(())
}
