//! Basic set arithmetic over a prime field: sumsets, product sets,
//! difference sets, dilations, and the text round-trip format.

use fp_sumprod::field_sets::parse_set_text;
use fp_sumprod::{FpSet, PrimeField};

fn main() -> fp_sumprod::Result<()> {
    let f = PrimeField::new(101)?;
    let a = FpSet::from_elems(f, &[1, 2, 4, 8, 16])?;
    let b = FpSet::from_elems(f, &[3, 5, 7])?;

    println!("A       = {:?}", a.to_vec());
    println!("B       = {:?}", b.to_vec());
    println!("A + B   = {:?}", a.sumset(&b)?.to_vec());
    println!("A - B   = {:?}", a.difference(&b)?.to_vec());
    println!("A * B   = {:?}", a.productset(&b)?.to_vec());
    println!("3 * A   = {:?}", a.dilate(3).to_vec());
    println!("-A      = {:?}", a.negate().to_vec());
    println!("|A + A| = {}", a.sumset(&a)?.len());
    println!("|A * A| = {}", a.productset(&a)?.len());
    println!("|A ∩ B| = {}", a.intersection_size(&b)?);

    // text format round-trip
    let text = a.to_string();
    let back = parse_set_text(&text)?;
    assert_eq!(back.to_vec(), a.to_vec());
    println!("round-trip through text format ok:\n{text}");
    Ok(())
}
