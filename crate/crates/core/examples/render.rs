//! SVG drawing of a planar instance with its star center; writes to the
//! path given as the first argument, or stdout.

use geojoin::certificates::{d_core_point, star_certificate};
use geojoin::harness::{generate_instance, render_svg, Overlays, SearchConfig};

fn main() -> geojoin::Result<()> {
    let inst = generate_instance(&SearchConfig::new(2, vec![2; 7]).with_seed(5), 0)?;
    let star = star_certificate(&inst, 0, 0)?;
    let overlays = Overlays { star_center: Some(star.center), tverberg: Some(star.tverberg), core: d_core_point(&inst)? };
    let svg = render_svg(&inst, &overlays)?;
    match std::env::args().nth(1) {
        Some(path) => std::fs::write(path, svg)?,
        None => print!("{svg}"),
    }
    Ok(())
}
