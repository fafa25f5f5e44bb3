//! Graph and recipe serialization, plus DOT export with one rank per level.

use pseudospace::amalgam::{generate, replay, Variant};
use pseudospace::io::{graph_to_dot, graph_to_json, recipe_to_json};

fn main() {
    let (g, recipe) = generate(2, 10, 2, Variant::Prime).unwrap();
    println!("{}", graph_to_json(&g));
    println!("{}", recipe_to_json(&recipe));
    println!("{}", graph_to_dot(&g));
    assert_eq!(replay(&recipe).unwrap(), g);
}
