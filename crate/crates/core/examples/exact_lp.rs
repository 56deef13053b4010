//! Exact feasibility with certificates, hull membership and separation.

use geojoin::geometry::{in_convex_hull, separating_hyperplane, LinearSystem, LpOutcome, Relation, Domain};
use geojoin::{QPoint, Rational};

fn main() -> geojoin::Result<()> {
    // x + y <= 1, x - y >= 2, x, y >= 0 has no solution.
    let mut sys = LinearSystem::new();
    let v = sys.add_vars(2, Domain::NonNegative);
    let one = Rational::one();
    sys.push(vec![(v.start, one.clone()), (v.start + 1, one.clone())], Relation::Le, Rational::from_integer(1));
    sys.push(vec![(v.start, one.clone()), (v.start + 1, -one)], Relation::Ge, Rational::from_integer(2));
    match sys.feasible()? {
        LpOutcome::Feasible { witness } => println!("feasible: {witness:?}"),
        LpOutcome::Infeasible { farkas } => {
            println!("infeasible, Farkas multipliers {farkas:?}, checked: {}", sys.refuted_by(&farkas))
        }
    }

    let tri = [QPoint::from_ints(&[0, 0]), QPoint::from_ints(&[6, 0]), QPoint::from_ints(&[0, 3])];
    let p = QPoint::new(vec![Rational::new(1, 2), Rational::new(1, 3)]);
    if let Some(w) = in_convex_hull(&p, &tri)? {
        let shown: Vec<String> = w.iter().map(Rational::to_string).collect();
        println!("{p:?} = {} of the triangle", shown.join(", "));
    }
    let far = QPoint::from_ints(&[5, 5]);
    if let Some(h) = separating_hyperplane(&tri, &far)? {
        println!("{far:?} is cut off by normal {:?}, offset {}", h.normal, h.offset);
    }
    Ok(())
}
