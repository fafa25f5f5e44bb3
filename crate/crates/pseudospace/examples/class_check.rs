//! Violations of the class conditions, with witnesses.

use pseudospace::amalgam::{check_class, check_sigma, ClassVariant};
use pseudospace::graph::LevelGraph;

fn main() {
    // An E_1-cycle: four vertices alternating between levels 0 and 1.
    let mut g = LevelGraph::new(2).unwrap();
    let vs: Vec<_> = (0..4).map(|i| g.add_vertex(i % 2).unwrap()).collect();
    for &(u, v) in &[(0, 1), (1, 2), (2, 3), (3, 0)] {
        g.add_edge(vs[u], vs[v]).unwrap();
    }
    let report = check_class(&g, ClassVariant::Kn);
    println!("E_1-cycle report: {report:#?}");

    // A meet failure: two lines sharing two points, each with a private
    // third point.
    let mut g = LevelGraph::new(2).unwrap();
    let pts: Vec<_> = (0..4).map(|_| g.add_vertex(0).unwrap()).collect();
    let x = g.add_vertex(1).unwrap();
    let y = g.add_vertex(1).unwrap();
    for &(p, l) in &[(0, x), (1, x), (2, x), (0, y), (1, y), (3, y)] {
        g.add_edge(pts[p], l).unwrap();
    }
    let report = check_class(&g, ClassVariant::Kn);
    println!("meet failure verdict: {}", report.verdict);
    for v in &report.violations {
        println!("  condition {} witness {:?}", v.condition, v.witness);
    }

    // The axioms on a well-formed graph report pseudoplane degree stats.
    let (good, _) = pseudospace::amalgam::generate(2, 16, 5, pseudospace::amalgam::Variant::Saturated).unwrap();
    let sigma = check_sigma(&good, 10);
    println!("sigma verdict: {}, {} pseudoplane leaves checked", sigma.verdict, sigma.stats.len());
}
