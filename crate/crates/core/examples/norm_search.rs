//! Lower bounds for the p-norm of the projection by a duality-map power
//! iteration, at a pair of conjugate exponents.

use std::sync::Arc;

use slicenorm::norm::{duality_gap, norm_lower_bound_search, ratio, SearchConfig};
use slicenorm::GridSpec;

fn main() -> slicenorm::Result<()> {
    let grid = Arc::new(GridSpec::new(24, 48, 64).build()?);
    let config = SearchConfig { restarts: 2, iters: 15, ..Default::default() };
    let p4 = norm_lower_bound_search(4.0, grid.clone(), &config)?;
    let q4 = norm_lower_bound_search(4.0 / 3.0, grid, &config)?;
    for r in [&p4, &q4] {
        let trace: Vec<String> = r.iterations.iter().step_by(5).map(|v| format!("{v:.6}")).collect();
        println!("p = {:.4}: lower {:.9}, upper {:.9}, trace {}", r.p, r.lower_bound, r.upper_bound, trace.join(" "));
    }
    println!("duality gap {:.2e}", duality_gap(4.0, &p4, &q4)?);
    println!("witness re-evaluated: {:.12}", ratio(&p4.witness, 4.0)?);
    Ok(())
}
