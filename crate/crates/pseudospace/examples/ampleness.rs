//! Maximal flags witness n-ampleness; the corollary extracts a flag from
//! any passing witness.

use pseudospace::amalgam::{generate, Variant};
use pseudospace::ample::{extract_flag, flag_witness, verify_witness, AmpleVariant, ExtractOutcome};

fn main() {
    for n in 1..=3 {
        let (g, _) = generate(n, 14 + 2 * n, 19, Variant::Saturated).unwrap();
        for variant in [AmpleVariant::Pillay, AmpleVariant::Evans] {
            let inst = flag_witness(&g, variant).unwrap();
            let report = verify_witness(&g, &inst).unwrap();
            print!("n={n} {variant:?}: witness verdict {}", report.verdict);
            match extract_flag(&g, &inst).unwrap() {
                ExtractOutcome::Flag(flag) => println!(", extracted flag {flag:?}"),
                other => println!(", extraction: {other:?}"),
            }
        }
    }
}
