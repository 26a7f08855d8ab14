//! Witness search for the additive-combinatorial lemmas: Ruzsa triangle,
//! Plünnecke-Ruzsa, and the two quadruple-witness existence results used
//! in the small- and large-set branches of the main argument.

use fp_sumprod::lemma_engine::{
    check_plunnecke, check_ruzsa_triangle, find_big_witness, find_gk_witness,
};
use fp_sumprod::{FpSet, PrimeField};

fn main() -> fp_sumprod::Result<()> {
    let f = PrimeField::new(11)?;
    let x = FpSet::from_elems(f, &[1, 2, 3])?;
    let y = FpSet::from_elems(f, &[0, 5])?;
    let z = FpSet::from_elems(f, &[4, 7])?;

    let tri = check_ruzsa_triangle(&x, &y, &z)?;
    println!(
        "Ruzsa triangle: |X-Z| = {} <= |X-Y||Y-Z|/|Y| = {} -> {}",
        tri.lhs, tri.rhs, tri.holds
    );

    let plun = check_plunnecke(&x, &[y.clone(), z.clone()])?;
    println!(
        "Plünnecke-Ruzsa: {} <= {} -> {}",
        plun.lhs, plun.rhs, plun.holds
    );

    // small branch: |A1|^2 < p, witness quadruple with a rich mixed sumset
    let a1 = FpSet::from_elems(f, &[1, 3])?;
    let ambient = FpSet::from_elems(f, &[1, 2, 3, 5])?;
    let w = find_gk_witness(&a1, &ambient)?;
    println!(
        "small-branch witness: {:?}  lhs = {}  rhs = {}  ({:?}, {} candidates examined)",
        w.witness, w.lhs, w.rhs, w.search_mode, w.samples_used
    );

    // large branch: |A1|^2 > p, witness whose difference quotients cover
    // at least half the field
    let f5 = PrimeField::new(5)?;
    let big = FpSet::from_elems(f5, &[0, 1, 2])?;
    let w2 = find_big_witness(&big, &big)?;
    println!(
        "large-branch witness: {:?}  lhs = {}  rhs = {}",
        w2.witness, w2.lhs, w2.rhs
    );
    Ok(())
}
