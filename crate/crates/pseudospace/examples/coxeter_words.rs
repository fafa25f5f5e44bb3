//! The right-angled word calculus: normal forms, equality, double cosets.

use pseudospace::coxeter::{commutes, CoxWord};

fn main() {
    let w = |letters: &[usize]| CoxWord::new(4, letters.to_vec()).unwrap();

    println!("t0 t2 commute: {}", commutes(0, 2));
    println!("t3 t4 commute: {}", commutes(3, 4));

    for letters in [vec![0, 0], vec![2, 0], vec![0, 1, 0], vec![0, 2, 0], vec![3, 1, 3, 1]] {
        let word = w(&letters);
        println!(
            "nf{letters:?} = {:?} (reduced: {})",
            word.normal_form().letters(),
            word.is_reduced()
        );
    }

    println!(
        "[0,2] == [2,0]: {}",
        w(&[0, 2]).equal(&w(&[2, 0])).unwrap()
    );
    println!(
        "[0,1] == [1,0]: {}",
        w(&[0, 1]).equal(&w(&[1, 0])).unwrap()
    );

    let word = w(&[1, 3, 0, 2]);
    let rep = word.min_double_coset_rep(1, 2).unwrap();
    println!(
        "min rep of <t_k:k!=1> {:?} <t_k:k!=2> = {:?}",
        word.letters(),
        rep.letters()
    );
}
