//! Bases, join membership and the colorful Carathéodory check.

use geojoin::join::{colorful_caratheodory_check, enumerate_bases, join_contains, Instance};
use geojoin::QPoint;

fn main() -> geojoin::Result<()> {
    let tri = |s: i64| vec![QPoint::from_ints(&[s, 0]), QPoint::from_ints(&[-1, s]), QPoint::from_ints(&[-1, -s])];
    let inst = Instance::from_classes(2, vec![tri(1), tri(2), tri(3)])?;
    println!("{} bases, first {:?}", inst.basis_count(), enumerate_bases(&inst).next());

    for q in [[0, 0], [2, 1], [9, 9]] {
        let p = QPoint::from_ints(&q);
        match join_contains(&inst, &p)? {
            Some(w) => println!("{p:?} in join via {:?} weights {:?} (verified {})", w.labels, w.weights, w.verify(&inst, &p)?),
            None => println!("{p:?} not in join"),
        }
    }
    let rep = colorful_caratheodory_check(&inst, &QPoint::origin(2))?;
    println!("origin in every class hull: {}, witness {:?}", rep.hypothesis_met, rep.witness.map(|w| w.labels));
    Ok(())
}
