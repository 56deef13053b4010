//! Offset nerves of growing radius and the filtration trace.

use geojoin::filtration::{critical_radius, filtration_trace, offset_nerve, FiltrationOptions};
use geojoin::harness::partition_instance;
use geojoin::topology::homology;

fn main() -> geojoin::Result<()> {
    let inst = partition_instance(2, &[&[&[-1, -1], &[-1, 1]], &[&[1, 1], &[1, -1]]])?;
    let opts = FiltrationOptions::default();
    for t in [0.0, 0.5, 1.0, 2.0] {
        let c = offset_nerve(&inst, t, 3, &opts)?;
        println!("t = {t}: counts {:?}, betti {:?}", c.counts(), homology(&c, false)?.betti);
    }
    let r = critical_radius(&inst, &[0, 3], &opts)?;
    println!("bases 0 and 3 meet at radius {:.6} (exact zero {})", r.radius, r.exact_zero);
    let trace = filtration_trace(&inst, 3, &opts, 1000)?;
    for e in trace.entries.iter().filter(|e| e.face.len() > 1) {
        println!("{:?} appears at {:.6}", e.face, e.appearance);
    }
    Ok(())
}
