//! Strong separation of a point from the join, and in dimension 3 a ray
//! from the origin that misses the join.

use geojoin::certificates::{ray_spot_check, ray_witness, strong_separation, RayBudget};
use geojoin::harness::{generate_instance, partition_instance, SearchConfig};
use geojoin::join::join_contains;
use geojoin::QPoint;

fn main() -> geojoin::Result<()> {
    let flat = partition_instance(2, &[&[&[1, 0], &[2, 1]], &[&[1, 2], &[3, 0]], &[&[2, -1], &[4, 2]]])?;
    let o = QPoint::origin(2);
    let sep = strong_separation(&flat, &o)?;
    println!("classes {} and {} separated by {:?} (verified {})", sep.i, sep.j, sep.hyperplane, sep.verify(&flat, &o));

    let cfg = SearchConfig::new(3, vec![2; 4]).with_seed(8);
    let origin = QPoint::origin(3);
    for index in 0..50 {
        let inst = generate_instance(&cfg, index)?;
        if join_contains(&inst, &origin)?.is_some() {
            continue;
        }
        println!("instance {index} misses the origin");
        match ray_witness(&inst, RayBudget::default())? {
            Some(w) => {
                println!("ray direction {:?} from pair {:?}, attempt {}", w.direction, w.pair, w.attempt);
                println!("verified {}, spot check {}", w.verify(&inst)?, ray_spot_check(&inst, &w, 50)?);
            }
            None => println!("no ray witness within budget"),
        }
        break;
    }
    Ok(())
}
