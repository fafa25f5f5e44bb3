//! The chamber system of a prime-variant approximation: Weyl distances,
//! the no-reduced-closed-gallery check, and the building axioms.

use pseudospace::amalgam::{generate, Variant};
use pseudospace::building::{
    chambers, find_reduced_closed_gallery, is_building_model, verify_building,
    vertex_weyl_distance, ChamberComplex,
};

fn main() {
    let (g, _) = generate(2, 16, 11, Variant::Prime).unwrap();
    let cs = chambers(&g);
    println!("{} vertices, {} chambers", g.vertex_count(), cs.len());

    let cx = ChamberComplex::new(&g);
    for j in [1, cs.len() / 2, cs.len() - 1] {
        let w = cx.weyl_distance(0, j).unwrap();
        println!("delta(chamber 0, chamber {j}) = {:?}", w.letters());
    }

    let (x, y) = (0, g.vertex_count() - 1);
    println!(
        "vertex Weyl distance ({x}, {y}) = {:?}",
        vertex_weyl_distance(&g, x, y).unwrap().map(|w| w.letters().to_vec())
    );

    println!(
        "reduced closed gallery up to length 8: {:?}",
        find_reduced_closed_gallery(&g, 8).map(|gal| gal.type_word.letters().to_vec())
    );

    let report = verify_building(&g, 4);
    println!(
        "building axioms: verdict {}, {} warnings",
        report.verdict,
        report.warnings.len()
    );
    println!("building model: {}", is_building_model(&g));
}
