//! Algebraic closure, projections, independence, and type classification,
//! with the subset-enumeration oracle alongside.

use pseudospace::amalgam::{generate, Variant};
use pseudospace::closure::{acl, acl_oracle, classify_type, independent, project};

fn main() {
    let (g, _) = generate(2, 13, 3, Variant::Saturated).unwrap();
    println!("graph: {} vertices", g.vertex_count());

    let set = [0, 2];
    println!("acl({set:?})    = {:?}", acl(&g, &set).unwrap());
    println!("oracle({set:?}) = {:?}", acl_oracle(&g, &set).unwrap());

    let far = g.vertex_count() - 1;
    println!("acl([0, {far}]) = {:?}", acl(&g, &[0, far]).unwrap());

    let p = project(&g, far, &[0, 1]);
    println!("proj({far}/[0,1]) = {:?}", p.unwrap().flag);

    println!(
        "indep({far}; B=[0,1] | C=[])  = {}",
        independent(&g, far, &[0, 1], &[]).unwrap()
    );
    println!(
        "indep({far}; B=[0,1] | C=[1]) = {}",
        independent(&g, far, &[0, 1], &[1]).unwrap()
    );

    for v in [0, 2, far] {
        println!("type({v}/[1]) = {:?}", classify_type(&g, v, &[1]).unwrap());
    }
}
