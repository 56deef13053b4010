//! Nerve of two crossing segments: a circle, seen by homology, collapse and pi_1.

use geojoin::harness::partition_instance;
use geojoin::topology::{build_nerve_with, greedy_collapse, homology, pi1_presentation, Budget};

fn main() -> geojoin::Result<()> {
    let inst = partition_instance(2, &[&[&[-1, -1], &[-1, 1]], &[&[1, 1], &[1, -1]]])?;
    let nerve = build_nerve_with(&inst, 3, Budget::default())?;
    let c = &nerve.complex;
    println!("face counts {:?}", c.counts());
    print!("{}", c.dump());
    for (k, level) in nerve.witnesses.iter().enumerate().take(2) {
        for (face, w) in c.faces(k).iter().zip(level) {
            println!("  {face:?} meets at {w:?}");
        }
    }
    let h = homology(c, false)?;
    println!("betti {:?}, torsion {:?}", h.betti, h.torsion);
    let cert = greedy_collapse(c);
    println!("{} collapse pairs, residual counts {:?}", cert.pairs.len(), cert.residual.counts());
    for p in pi1_presentation(c)? {
        println!("pi_1 at vertex {}: {} generators, {} relators", p.base_vertex, p.generators.len(), p.relators.len());
    }
    println!("{:?}", nerve.stats);
    Ok(())
}
