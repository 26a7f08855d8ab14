//! Counting solutions of x1 - x2 = g (y1 - y2) and finding the slope g
//! that minimizes the per-slope count I0(g). Three independent counting
//! methods are compared: exact histogram, brute-force enumeration, and a
//! floating-point spectral (FFT) evaluation.

use fp_sumprod::counting::{
    min_i0_slope, solution_count_i, solution_count_i_enumeration, solution_count_i_spectral,
};
use fp_sumprod::lemma_engine::{find_xi_witness, xi_lower_bound, XiMode};
use fp_sumprod::{FpSet, PrimeField};

fn main() -> fp_sumprod::Result<()> {
    let f = PrimeField::new(101)?;
    let x = FpSet::from_elems(f, &[3, 14, 15, 92, 65, 35])?;
    let y = FpSet::from_elems(f, &[2, 71, 82, 81, 8])?;
    let g = FpSet::from_elems(f, &[1, 2, 3, 4, 5, 6, 7])?;

    let exact = solution_count_i(&x, &y, &g)?;
    let brute = solution_count_i_enumeration(&x, &y, &g)?;
    let spectral = solution_count_i_spectral(&x, &y, &g)?;
    println!("I(X,Y,G) exact     = {}", exact.value);
    println!("I(X,Y,G) brute     = {}", brute.value);
    println!("I(X,Y,G) spectral  = {}", spectral.value);
    assert_eq!(exact.value, brute.value);
    assert_eq!(exact.value, spectral.value);

    let (slope, count) = min_i0_slope(&x, &y, &g)?;
    println!("best slope xi = {slope} with I0(xi) = {count}");

    let bound = xi_lower_bound(&x, &y, &g)?;
    println!("guaranteed: |X + xi*Y| >= {bound}");

    let direct = find_xi_witness(&x, &y, &g, XiMode::Direct)?;
    let proof = find_xi_witness(&x, &y, &g, XiMode::ProofFollowing)?;
    println!(
        "direct pick:         {:?}, |X + xi*Y| = {}",
        direct.witness, direct.lhs
    );
    println!(
        "proof-following pick: {:?}, |X + xi*Y| = {}",
        proof.witness, proof.lhs
    );
    Ok(())
}
