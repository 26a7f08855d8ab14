//! Exact counting: multiplicative energy of a set and the
//! dilate-intersection scores used to pick the pivot element b0.

use fp_sumprod::counting::{b0_scores_all, mult_energy_j};
use fp_sumprod::proof_trace::select_b0;
use fp_sumprod::{FpSet, PrimeField};

fn main() -> fp_sumprod::Result<()> {
    let f = PrimeField::new(1009)?;
    let a = FpSet::from_elems(f, &[1, 2, 4, 8, 16, 32, 64, 128, 256, 512])?;

    let j = mult_energy_j(&a)?;
    println!("A = {:?}", a.to_vec());
    println!("multiplicative energy J(A) = {} (method: {:?})", j.value, j.method);
    if let Some((count, lower)) = j.bound_sides {
        println!("lower bound |A|^4/|AA| = {lower} <= J = {count}");
    }

    // score every a in A by sum_b |aA ∩ bA|; the maximizer is the pivot b0
    let scores = b0_scores_all(&a)?;
    for (elem, score) in a.elements().zip(&scores) {
        println!("  score({elem:4}) = {score}");
    }
    let (b0, best) = select_b0(&a)?;
    println!("pivot b0 = {b0} with score {best}");
    Ok(())
}
