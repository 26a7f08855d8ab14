//! Generate the structured set families used by the sweep harness:
//! intervals, progressions, multiplicative subgroups, unions, and
//! seeded random sets.

use fp_sumprod::harness::{gen_family, smallest_primitive_root, FamilySpec};
use fp_sumprod::PrimeField;

fn main() -> fp_sumprod::Result<()> {
    let f = PrimeField::new(1009)?;
    println!("smallest primitive root of 1009: {}", smallest_primitive_root(f));

    let specs = vec![
        FamilySpec::Interval { start: 100, size: 10 },
        FamilySpec::ArithmeticProgression { start: 5, step: 17, size: 10 },
        // generator 0 means "use the smallest primitive root"
        FamilySpec::GeometricProgression { start: 1, generator: 0, size: 10 },
        FamilySpec::MultiplicativeSubgroup { order: 12 },
        FamilySpec::Random { size: 10, seed: 7 },
        FamilySpec::Union {
            parts: vec![
                FamilySpec::Interval { start: 1, size: 5 },
                FamilySpec::MultiplicativeSubgroup { order: 6 },
            ],
        },
    ];

    for spec in &specs {
        let a = gen_family(f, spec)?;
        println!("{:>24}: {:?}", spec.label(), a.to_vec());
    }
    Ok(())
}
