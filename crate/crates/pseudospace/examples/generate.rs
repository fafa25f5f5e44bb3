//! Grow finite approximations of both limits and check them against their
//! classes.

use pseudospace::amalgam::{check_class, generate, pending_demands, ClassVariant, Variant};

fn main() {
    for (variant, class) in [
        (Variant::Saturated, ClassVariant::Kn),
        (Variant::Prime, ClassVariant::KnPrime),
    ] {
        for n in 1..=3 {
            let (g, recipe) = generate(n, 18 + 2 * n, 7, variant).unwrap();
            let report = check_class(&g, class);
            let (mids, degrees) = pending_demands(&g);
            println!(
                "{variant:?} n={n}: {} vertices, {} edges, {} steps, class verdict {}, pending demands {mids}+{degrees}",
                g.vertex_count(),
                g.edges().len(),
                recipe.steps.len(),
                report.verdict,
            );
        }
    }
}
