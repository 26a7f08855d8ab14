//! Run the full checked derivation of the sum-product bound on one set
//! and print the trace as JSON. Every intermediate inequality is verified
//! in exact rational arithmetic; `all_pass` reports whether the whole
//! chain went through.

use fp_sumprod::harness::multiplicative_subgroup;
use fp_sumprod::proof_trace::run_trace;
use fp_sumprod::PrimeField;

fn main() -> fp_sumprod::Result<()> {
    // a multiplicative subgroup is about as sum-product-extremal as it
    // gets; at order 112 we have |A|^2 >= 100|AA|, so the non-trivial
    // branch of the argument runs
    let f = PrimeField::new(1009)?;
    let a = multiplicative_subgroup(f, 112)?;
    println!("A = subgroup of order 112 in F_1009 ({} elements)", a.len());

    let trace = run_trace(&a)?;
    println!(
        "branch = {:?}, {} checks, all pass = {}",
        trace.branch,
        trace.checks.len(),
        trace.all_pass()
    );
    for c in &trace.checks {
        println!("  [{}] {}  ({} vs {})", if c.pass { "ok" } else { "FAIL" }, c.name, c.lhs, c.rhs);
    }
    println!(
        "bounds: thm1 = {:.3}, thm2 = {:.3}, max(|A+A|,|AA|) = {}",
        trace.bound_values.thm1,
        trace.bound_values.thm2,
        trace.sumset_size.max(trace.prodset_size)
    );

    println!("\nfull trace as JSON:");
    println!("{}", serde_json::to_string_pretty(&trace).expect("serializable"));
    Ok(())
}
