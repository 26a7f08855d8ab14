//! Set-family generators, experiment sweeps, and CSV/JSON emission.

use crate::error::{Error, Result};
use crate::field_sets::{FpSet, PrimeField};
use crate::proof_trace::{self, Branch};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::io::Write;

/// A generated set family. In a sweep config the `size`/`seed`/`order`
/// fields act as templates: the sweep overrides size per sweep point, seed
/// per trial, and subgroup order with the largest divisor of p-1 not
/// exceeding the requested size.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum FamilySpec {
    Random {
        #[serde(default)]
        size: u64,
        #[serde(default)]
        seed: u64,
    },
    Interval {
        #[serde(default = "one")]
        start: u64,
        #[serde(default)]
        size: u64,
    },
    ArithmeticProgression {
        #[serde(default = "one")]
        start: u64,
        #[serde(default = "one")]
        step: u64,
        #[serde(default)]
        size: u64,
    },
    GeometricProgression {
        #[serde(default = "one")]
        start: u64,
        /// Ratio; 0 means "use the smallest primitive root of p".
        #[serde(default)]
        generator: u64,
        #[serde(default)]
        size: u64,
    },
    MultiplicativeSubgroup {
        #[serde(default)]
        order: u64,
    },
    Union {
        parts: Vec<FamilySpec>,
    },
}

fn one() -> u64 {
    1
}

impl FamilySpec {
    pub fn label(&self) -> &'static str {
        match self {
            FamilySpec::Random { .. } => "random",
            FamilySpec::Interval { .. } => "interval",
            FamilySpec::ArithmeticProgression { .. } => "arithmetic-progression",
            FamilySpec::GeometricProgression { .. } => "geometric-progression",
            FamilySpec::MultiplicativeSubgroup { .. } => "multiplicative-subgroup",
            FamilySpec::Union { .. } => "union",
        }
    }

    /// Copy with sweep-point size and per-trial seed applied.
    fn instantiate(&self, p: u64, size: u64, seed: u64) -> FamilySpec {
        match self.clone() {
            FamilySpec::Random { .. } => FamilySpec::Random { size, seed },
            FamilySpec::Interval { start, .. } => FamilySpec::Interval { start, size },
            FamilySpec::ArithmeticProgression { start, step, .. } => {
                FamilySpec::ArithmeticProgression { start, step, size }
            }
            FamilySpec::GeometricProgression { start, generator, .. } => {
                FamilySpec::GeometricProgression { start, generator, size }
            }
            FamilySpec::MultiplicativeSubgroup { .. } => FamilySpec::MultiplicativeSubgroup {
                order: largest_divisor_at_most(p - 1, size),
            },
            FamilySpec::Union { parts } => FamilySpec::Union {
                parts: parts
                    .iter()
                    .enumerate()
                    .map(|(i, part)| part.instantiate(p, size, splitmix64(seed ^ i as u64)))
                    .collect(),
            },
        }
    }
}

/// Smallest primitive root of p, by trial.
pub fn smallest_primitive_root(f: PrimeField) -> u64 {
    let p = f.modulus();
    if p == 2 {
        return 1;
    }
    let factors = prime_factors(p - 1);
    'g: for g in 2..p {
        for &q in &factors {
            if f.pow(g, (p - 1) / q) == 1 {
                continue 'g;
            }
        }
        return g;
    }
    unreachable!("every prime has a primitive root")
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

fn largest_divisor_at_most(n: u64, cap: u64) -> u64 {
    let mut best = 1;
    let mut d = 1;
    while d * d <= n {
        if n % d == 0 {
            if d <= cap && d > best {
                best = d;
            }
            let e = n / d;
            if e <= cap && e > best {
                best = e;
            }
        }
        d += 1;
    }
    best
}

/// The subgroup of order d (d | p-1): {g^(k(p-1)/d) : 0 <= k < d} for the
/// smallest primitive root g.
pub fn multiplicative_subgroup(f: PrimeField, order: u64) -> Result<FpSet> {
    let p = f.modulus();
    if order == 0 || (p - 1) % order != 0 {
        return Err(Error::InvalidFamily(format!(
            "subgroup order {order} does not divide p-1 = {}",
            p - 1
        )));
    }
    let g = smallest_primitive_root(f);
    let h = f.pow(g, (p - 1) / order);
    let mut elems = Vec::with_capacity(order as usize);
    let mut x = 1;
    for _ in 0..order {
        elems.push(x);
        x = f.mul(x, h);
    }
    FpSet::from_elems(f, &elems)
}

pub fn gen_family(f: PrimeField, spec: &FamilySpec) -> Result<FpSet> {
    let p = f.modulus();
    let want_size = |size: u64| -> Result<u64> {
        if size == 0 || size > p {
            Err(Error::InvalidFamily(format!("size {size} not in 1..=p for p={p}")))
        } else {
            Ok(size)
        }
    };
    match spec {
        FamilySpec::Random { size, seed } => {
            let size = want_size(*size)?;
            let mut rng = ChaCha8Rng::seed_from_u64(*seed);
            let mut seen = vec![false; p as usize];
            let mut elems = Vec::with_capacity(size as usize);
            while (elems.len() as u64) < size {
                let e = rng.gen_range(0..p);
                if !seen[e as usize] {
                    seen[e as usize] = true;
                    elems.push(e);
                }
            }
            FpSet::from_elems(f, &elems)
        }
        FamilySpec::Interval { start, size } => {
            let size = want_size(*size)?;
            let elems: Vec<u64> = (0..size).map(|k| (start + k) % p).collect();
            FpSet::from_elems(f, &elems)
        }
        FamilySpec::ArithmeticProgression { start, step, size } => {
            let size = want_size(*size)?;
            if step % p == 0 && size > 1 {
                return Err(Error::InvalidFamily("zero step with size > 1".into()));
            }
            let elems: Vec<u64> = (0..size).map(|k| (start % p + k * (step % p) % p) % p).collect();
            FpSet::from_elems(f, &elems)
        }
        FamilySpec::GeometricProgression { start, generator, size } => {
            let size = want_size(*size)?;
            let g = if *generator == 0 {
                smallest_primitive_root(f)
            } else {
                *generator % p
            };
            if g == 0 || *start % p == 0 {
                return Err(Error::InvalidFamily("zero start or ratio".into()));
            }
            let mut elems = Vec::with_capacity(size as usize);
            let mut x = *start % p;
            for _ in 0..size {
                elems.push(x);
                x = f.mul(x, g);
            }
            let set = FpSet::from_elems(f, &elems)?;
            if set.len() != size {
                return Err(Error::InvalidFamily(format!(
                    "geometric progression collides: ratio order < requested size {size}"
                )));
            }
            Ok(set)
        }
        FamilySpec::MultiplicativeSubgroup { order } => multiplicative_subgroup(f, *order),
        FamilySpec::Union { parts } => {
            if parts.is_empty() {
                return Err(Error::InvalidFamily("empty union".into()));
            }
            let mut acc = FpSet::empty(f);
            for part in parts {
                acc = acc.union(&gen_family(f, part)?)?;
            }
            Ok(acc)
        }
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Csv,
    Json,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub primes: Vec<u64>,
    pub families: Vec<FamilySpec>,
    pub sizes: Vec<u64>,
    pub trials: u64,
    pub master_seed: u64,
    #[serde(default)]
    pub emit_trace: bool,
    pub output_format: OutputFormat,
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        if self.trials < 1 {
            return Err(Error::InvalidFamily("trials must be >= 1".into()));
        }
        for &p in &self.primes {
            PrimeField::new(p)?;
        }
        Ok(())
    }
}

/// One measured observation.
#[derive(Clone, Debug, Serialize)]
pub struct ResultRow {
    pub p: u64,
    pub family: String,
    pub size: u64,
    pub trial: u64,
    pub sumset_size: u64,
    pub prodset_size: u64,
    pub max_side: u64,
    pub thm1_bound: f64,
    pub thm2_bound: f64,
    pub his_bound: f64,
    pub ratio_thm1: f64,
    pub ratio_thm2: f64,
    pub branch: String,
    pub trace_pass: Option<bool>,
}

pub const CSV_HEADER: &str = "p,family,size,trial,sumset_size,prodset_size,max_side,thm1_bound,thm2_bound,his_bound,ratio_thm1,ratio_thm2,branch,trace_pass";

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e3779b97f4a7c15);
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d049bb133111eb);
    x ^ (x >> 31)
}

/// Per-trial seed derived from (master_seed, family index, trial index).
pub fn trial_seed(master_seed: u64, family_index: usize, trial: u64) -> u64 {
    splitmix64(master_seed ^ splitmix64((family_index as u64) << 32 | trial))
}

/// Branch the trace would take, without running the full check chain.
fn quick_branch(a: &FpSet) -> Result<Branch> {
    let work = if a.contains(0) { a.remove(0) } else { a.clone() };
    if work.len() < 2 {
        return Ok(Branch::Trivial);
    }
    let ps = work.productset(&work)?.len();
    if work.len() * work.len() < 100 * ps {
        return Ok(Branch::Trivial);
    }
    let (b0, _) = proof_trace::select_b0(&work)?;
    let part = proof_trace::dyadic_partition(&work, b0)?;
    let (_, _, a1) = proof_trace::select_dyadic_class(&part)?;
    Ok(if a1.len() * a1.len() < a.field().modulus() {
        Branch::Case1
    } else {
        Branch::Case2
    })
}

fn branch_name(b: Branch) -> &'static str {
    match b {
        Branch::Trivial => "trivial",
        Branch::Case1 => "case1",
        Branch::Case2 => "case2",
    }
}

/// One row per (prime, family, size, trial), sorted by (family, p, size,
/// trial). A failing row is marked `error` and the sweep continues.
pub fn run_sweep(cfg: &ExperimentConfig) -> Result<Vec<ResultRow>> {
    cfg.validate()?;
    let mut rows = Vec::new();
    for (fi, family) in cfg.families.iter().enumerate() {
        for &p in &cfg.primes {
            let field = PrimeField::new(p)?;
            for &size in &cfg.sizes {
                for trial in 0..cfg.trials {
                    let seed = trial_seed(cfg.master_seed, fi, trial);
                    let spec = family.instantiate(p, size, seed);
                    let row = run_point(field, &spec, size, trial, cfg.emit_trace);
                    rows.push(row);
                }
            }
        }
    }
    rows.sort_by(|a, b| {
        (&a.family, a.p, a.size, a.trial).cmp(&(&b.family, b.p, b.size, b.trial))
    });
    Ok(rows)
}

fn run_point(
    field: PrimeField,
    spec: &FamilySpec,
    size: u64,
    trial: u64,
    emit_trace: bool,
) -> ResultRow {
    let p = field.modulus();
    let mut row = ResultRow {
        p,
        family: spec.label().to_string(),
        size,
        trial,
        sumset_size: 0,
        prodset_size: 0,
        max_side: 0,
        thm1_bound: 0.0,
        thm2_bound: 0.0,
        his_bound: 0.0,
        ratio_thm1: 0.0,
        ratio_thm2: 0.0,
        branch: "error".into(),
        trace_pass: if emit_trace { Some(false) } else { None },
    };
    let outcome = (|| -> Result<()> {
        let a = gen_family(field, spec)?;
        let sumset = a.sumset(&a)?.len();
        let prodset = a.productset(&a)?.len();
        let bounds = proof_trace::evaluate_theorem_bounds(p, a.len(), sumset, prodset)?;
        row.size = a.len();
        row.sumset_size = sumset;
        row.prodset_size = prodset;
        row.max_side = sumset.max(prodset);
        row.thm1_bound = bounds.thm1;
        row.thm2_bound = bounds.thm2;
        row.his_bound = bounds.his;
        row.ratio_thm1 = bounds.ratio_thm1;
        row.ratio_thm2 = bounds.ratio_thm2;
        if emit_trace {
            let trace = proof_trace::run_trace(&a)?;
            row.branch = branch_name(trace.branch).into();
            row.trace_pass = Some(trace.all_pass());
        } else {
            row.branch = branch_name(quick_branch(&a)?).into();
        }
        Ok(())
    })();
    if outcome.is_err() {
        row.branch = "error".into();
    }
    row
}

/// CSV with the fixed header; integers exact, bound/ratio fields to six
/// decimal places, trace_pass blank unless traces were requested.
pub fn write_csv<W: Write>(rows: &[ResultRow], out: &mut W) -> Result<()> {
    writeln!(out, "{CSV_HEADER}")?;
    for r in rows {
        writeln!(
            out,
            "{},{},{},{},{},{},{},{:.6},{:.6},{:.6},{:.6},{:.6},{},{}",
            r.p,
            r.family,
            r.size,
            r.trial,
            r.sumset_size,
            r.prodset_size,
            r.max_side,
            r.thm1_bound,
            r.thm2_bound,
            r.his_bound,
            r.ratio_thm1,
            r.ratio_thm2,
            r.branch,
            r.trace_pass.map(|b| b.to_string()).unwrap_or_default(),
        )?;
    }
    Ok(())
}

pub fn rows_to_json(rows: &[ResultRow]) -> String {
    serde_json::to_string_pretty(rows).expect("rows serialize")
}
