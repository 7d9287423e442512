//! Writes a test matrix in Matrix Market format and reads it back.

use rsvd_diag::mtx::{read_path, write_path, MmFormat};
use rsvd_diag::TestMatrixSpec;

fn main() -> rsvd_diag::Result<()> {
    let spec = TestMatrixSpec::preset("NoiseMedium", 0).unwrap().with_size(50, 5);
    let a = spec.generate()?;
    let dir = std::env::temp_dir().join("rsvd-diag-example");
    std::fs::create_dir_all(&dir)?;
    for (format, name) in [(MmFormat::Array, "array.mtx"), (MmFormat::Coordinate, "coordinate.mtx")] {
        let path = dir.join(name);
        write_path(&path, &a, format)?;
        let b = read_path(&path)?;
        let bytes = std::fs::metadata(&path)?.len();
        println!("{}: {bytes} bytes, max difference {:e}", path.display(), a.max_abs_diff(&b));
    }
    Ok(())
}
