//! Writing and reading sampled and slice functions as CSV and JSON.

use std::sync::Arc;

use slicenorm::io::{read_sampled, read_slice, write_sampled, write_slice, Provenance};
use slicenorm::projection::project_boundary;
use slicenorm::testfns::RandomPolynomial;
use slicenorm::BoundaryGrid;

fn main() -> slicenorm::Result<()> {
    let dir = std::env::temp_dir().join("slicenorm-file-io");
    std::fs::create_dir_all(&dir)?;
    let grid = Arc::new(BoundaryGrid::standard(4, 8, 8)?);
    let phi = RandomPolynomial::new(2, 3).sample(grid);
    let prov = Provenance::with_seed(3).note("source", "random polynomial of degree 2");

    for name in ["phi.csv", "phi.json"] {
        let path = dir.join(name);
        write_sampled(&path, &phi, &prov)?;
        let back = read_sampled(&path)?;
        println!("{}: {} bytes, exact round trip {}", path.display(), std::fs::metadata(&path)?.len(), back.values() == phi.values());
    }

    let slice = project_boundary(&phi);
    let path = dir.join("slice.csv");
    write_slice(&path, &slice, &prov)?;
    println!("{}: round trip {}", path.display(), read_slice(&path)? == slice);
    let text = std::fs::read_to_string(&path)?;
    for line in text.lines().take(6) {
        println!("  {line}");
    }
    Ok(())
}
