//! Executable reconstruction of the two-theorem argument on a concrete set:
//! select b0, split A into dyadic classes by |a*A \u{2229} b0*A|, pick the heaviest
//! class, then verify every link of the inequality chain with explicit
//! constants in exact rational arithmetic. Headline bounds are evaluated in
//! doubles and reported as ratios, never asserted.

use crate::counting::{b0_scores_all, dilate_intersections, mult_energy_j};
use crate::error::{Error, Result};
use crate::field_sets::FpSet;
use crate::lemma_engine::{
    find_big_witness, find_gk_witness, find_xi_witness, xi_lower_bound, Witness, WitnessReport,
    XiMode,
};
use crate::rats::{int, pow, rat, ratio, Rat};
use rayon::prelude::*;
use serde::Serialize;

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Branch {
    Trivial,
    Case1,
    Case2,
}

/// One verified inequality link: `name` states the relation between the two
/// exact sides, `pass` is the comparison outcome.
#[derive(Clone, Debug, Serialize)]
pub struct CheckRecord {
    pub name: String,
    #[serde(serialize_with = "crate::rats::serialize_rat")]
    pub lhs: Rat,
    #[serde(serialize_with = "crate::rats::serialize_rat")]
    pub rhs: Rat,
    pub pass: bool,
}

impl CheckRecord {
    fn ge(name: &str, lhs: Rat, rhs: Rat) -> Self {
        CheckRecord {
            name: name.into(),
            pass: lhs >= rhs,
            lhs,
            rhs,
        }
    }

    fn gt(name: &str, lhs: Rat, rhs: Rat) -> Self {
        CheckRecord {
            name: name.into(),
            pass: lhs > rhs,
            lhs,
            rhs,
        }
    }

    fn le(name: &str, lhs: Rat, rhs: Rat) -> Self {
        CheckRecord {
            name: name.into(),
            pass: lhs <= rhs,
            lhs,
            rhs,
        }
    }

    fn lt(name: &str, lhs: Rat, rhs: Rat) -> Self {
        CheckRecord {
            name: name.into(),
            pass: lhs < rhs,
            lhs,
            rhs,
        }
    }
}

/// Closed-form theorem right-hand sides at (|A|, p) with implied constant 1,
/// natural logarithm, plus the observed-over-bound ratios. Report-only.
#[derive(Copy, Clone, Debug, Serialize)]
pub struct BoundValues {
    pub thm1: f64,
    pub thm2: f64,
    pub his: f64,
    pub ratio_thm1: f64,
    pub ratio_thm2: f64,
}

/// Full executable-proof transcript.
#[derive(Clone, Debug, Serialize)]
pub struct TraceRecord {
    pub p: u64,
    pub a_size: u64,
    pub sumset_size: u64,
    pub prodset_size: u64,
    pub removed_zero: bool,
    pub branch: Branch,
    pub b0: Option<u64>,
    pub j0: Option<u32>,
    pub n: Option<u64>,
    pub a1: Option<Vec<u64>>,
    pub witness: Option<WitnessReport>,
    pub xi_witness: Option<WitnessReport>,
    pub checks: Vec<CheckRecord>,
    pub bound_values: BoundValues,
}

impl TraceRecord {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}

/// b0 = argmax over b in A of sum_a |a*A ∩ b*A|, smallest residue on ties.
/// The averaging guarantee score >= J/|A| >= |A|^3/|AA| holds by pigeonhole.
pub fn select_b0(a: &FpSet) -> Result<(u64, u64)> {
    if a.contains(0) {
        return Err(Error::ZeroInSet);
    }
    let scores = b0_scores_all(a)?;
    let mut best = None;
    for (e, &s) in a.elements().zip(&scores) {
        match best {
            Some((_, bs)) if s <= bs => {}
            _ => best = Some((e, s)),
        }
    }
    best.ok_or(Error::EmptySet)
}

/// Split A into classes D_j = {a : 2^(j-1) <= |a*A ∩ b0*A| < 2^j}. Every
/// intersection is at least 1 (a*b0 lies in both dilates); an empty one is
/// surfaced as an anomaly rather than assumed away.
pub fn dyadic_partition(a: &FpSet, b0: u64) -> Result<Vec<(u32, FpSet)>> {
    let inters = dilate_intersections(a, b0)?;
    let max_j = 64 - a.len().leading_zeros() + 1; // floor(log2|A|) + 1
    let mut classes: Vec<Vec<u64>> = vec![Vec::new(); max_j as usize + 1];
    for (e, &m) in a.elements().zip(&inters) {
        if m == 0 {
            return Err(Error::EmptyIntersection(e));
        }
        let j = 64 - m.leading_zeros(); // 2^(j-1) <= m < 2^j
        debug_assert!(j <= max_j);
        classes[j as usize].push(e);
    }
    let field = a.field();
    classes
        .into_iter()
        .enumerate()
        .filter(|(_, v)| !v.is_empty())
        .map(|(j, v)| Ok((j as u32, FpSet::from_elems(field, &v)?)))
        .collect()
}

/// Pick j0 maximizing |D_j| * 2^j (smallest j on ties); N = 2^(j0-1).
pub fn select_dyadic_class(partition: &[(u32, FpSet)]) -> Result<(u32, u64, FpSet)> {
    let mut best: Option<(u32, u128)> = None;
    for (j, d) in partition {
        let weight = (d.len() as u128) << j;
        match best {
            Some((_, w)) if weight <= w => {}
            _ => best = Some((*j, weight)),
        }
    }
    let (j0, _) = best.ok_or(Error::EmptySet)?;
    let a1 = partition
        .iter()
        .find(|(j, _)| *j == j0)
        .map(|(_, d)| d.clone())
        .unwrap();
    Ok((j0, 1u64 << (j0 - 1), a1))
}

/// Theorem right-hand sides with implied constant 1; natural log.
pub fn evaluate_theorem_bounds(
    p: u64,
    a_size: u64,
    sumset_size: u64,
    prodset_size: u64,
) -> Result<BoundValues> {
    if a_size < 2 {
        return Err(Error::HypothesisViolation("need |A| >= 2 for log|A| > 0".into()));
    }
    let n = a_size as f64;
    let pf = p as f64;
    let ln = n.ln();
    let thm1 = f64::min(
        n.powf(15.0 / 14.0) * f64::max(1.0, n.powf(1.0 / 7.0) * pf.powf(-1.0 / 14.0))
            / ln.powf(2.0 / 7.0),
        n.powf(11.0 / 12.0) * pf.powf(1.0 / 12.0) / ln.powf(1.0 / 3.0),
    );
    let thm2 = f64::min(
        n.powf(5.0 / 3.0) * pf.powf(-1.0 / 3.0),
        n.powf(2.0 / 3.0) * pf.powf(1.0 / 3.0),
    ) * ln.powf(-1.0 / 3.0);
    let his = if n <= pf.powf(0.7) {
        n.powf(1.5) * pf.powf(-0.25)
    } else {
        n.powf(2.0 / 3.0) * pf.powf(1.0 / 3.0)
    };
    let max_side = sumset_size.max(prodset_size) as f64;
    Ok(BoundValues {
        thm1,
        thm2,
        his,
        ratio_thm1: max_side / thm1,
        ratio_thm2: max_side / thm2,
    })
}

/// Run the whole argument on A, verifying every link.
pub fn run_trace(a: &FpSet) -> Result<TraceRecord> {
    if a.len() < 2 {
        return Err(Error::HypothesisViolation("need |A| >= 2".into()));
    }
    let p = a.field().modulus();
    let f = a.field();
    let original_size = a.len();
    let removed_zero = a.contains(0);
    let work = if removed_zero { a.remove(0) } else { a.clone() };

    let sumset = work.sumset(&work)?;
    let prodset = work.productset(&work)?;
    let (ss, ps) = (sumset.len(), prodset.len());
    let na = work.len();

    let bound_values = evaluate_theorem_bounds(p, original_size, ss, ps)?;
    let mut checks = Vec::new();

    // Opening reduction: the argument only engages when |A|^2 >= 100 |AA|.
    if na * na < 100 * ps {
        checks.push(CheckRecord::gt(
            "trivial: |AA| > |A|^2/100",
            rat(ps),
            ratio(int(na) * int(na), int(100)),
        ));
        return Ok(TraceRecord {
            p,
            a_size: na,
            sumset_size: ss,
            prodset_size: ps,
            removed_zero,
            branch: Branch::Trivial,
            b0: None,
            j0: None,
            n: None,
            a1: None,
            witness: None,
            xi_witness: None,
            checks,
            bound_values,
        });
    }

    // (i) J >= |A|^4 / |AA|.
    let j_count = mult_energy_j(&work)?;
    checks.push(CheckRecord::ge(
        "i: J >= |A|^4/|AA|",
        Rat::from_integer(j_count.value.into()),
        ratio(pow(na, 4), int(ps)),
    ));

    // (ii) score(b0) >= |A|^3 / |AA|.
    let (b0, score) = select_b0(&work)?;
    checks.push(CheckRecord::ge(
        "ii: score(b0) >= |A|^3/|AA|",
        rat(score),
        ratio(pow(na, 3), int(ps)),
    ));

    let partition = dyadic_partition(&work, b0)?;
    let (j0, n_val, a1) = select_dyadic_class(&partition)?;

    // (iii) N <= |a*A ∩ b0*A| < 2N for every a in A1.
    let inters = dilate_intersections(&work, b0)?;
    let by_elem: std::collections::HashMap<u64, u64> =
        work.elements().zip(inters.iter().copied()).collect();
    let m_min = a1.elements().map(|e| by_elem[&e]).min().unwrap();
    let m_max = a1.elements().map(|e| by_elem[&e]).max().unwrap();
    checks.push(CheckRecord::ge(
        "iii: min |a*A ∩ b0*A| >= N",
        rat(m_min),
        rat(n_val),
    ));
    checks.push(CheckRecord::lt(
        "iii: max |a*A ∩ b0*A| < 2N",
        rat(m_max),
        rat(2 * n_val),
    ));

    // (iv) N |A1| >= |A|^3 / (2 (floor(log2|A|)+1) |AA|).
    let log_classes = (64 - na.leading_zeros()) as u64; // floor(log2|A|) + 1
    checks.push(CheckRecord::ge(
        "iv: N|A1| >= |A|^3/(2(log2|A|+1)|AA|)",
        rat(n_val) * rat(a1.len()),
        ratio(pow(na, 3), int(2) * int(log_classes) * int(ps)),
    ));

    // (v) |a*A ± b0*A| <= |A+A|^2 / N for every a in A1, both signs.
    // Dilating by a^{-1} turns each side into |A ± (b0/a)*A|.
    let mixed_cap = ratio(int(ss) * int(ss), int(n_val));
    let a1_elems = a1.to_vec();
    let sign_max: u64 = a1_elems
        .par_iter()
        .map(|&e| {
            let c = f.mul(b0, f.inv(e));
            let ca = work.dilate(c);
            let plus = work.sumset(&ca).expect("same field").len();
            let minus = work.difference(&ca).expect("same field").len();
            plus.max(minus)
        })
        .max()
        .unwrap();
    checks.push(CheckRecord::le(
        "v: max |a*A ± b0*A| <= |A+A|^2/N",
        rat(sign_max),
        mixed_cap.clone(),
    ));

    // Mixed-sum product for the Plünnecke step, from a quadruple witness.
    let mixed_product = |w: &Witness| -> Result<Rat> {
        let Witness::Quadruple { a1, a2, b1, b2 } = *w else {
            unreachable!("quadruple witness expected");
        };
        let inv_b0 = f.inv(b0);
        let mut prod = int(1);
        for (e, diff) in [(a1, false), (a2, true), (b1, false), (b2, true)] {
            let c = f.mul(e, inv_b0);
            let ca = work.dilate(c);
            let card = if diff {
                work.difference(&ca)?.len()
            } else {
                work.sumset(&ca)?.len()
            };
            prod *= int(card);
        }
        Ok(Rat::from_integer(prod))
    };

    let branch;
    let witness;
    if a1.len() * a1.len() < p {
        branch = Branch::Case1;
        let w = find_gk_witness(&a1, &work)?;
        // (vi) 0.5|A1|^2 <= |A+A|^2 |(a1-a2)*A + (b1-b2)*A| / |A|^2.
        let Witness::Quadruple { a1: wa1, a2: wa2, b1: wb1, b2: wb2 } = w.witness else {
            unreachable!()
        };
        let d = f.sub(wa1, wa2);
        let e = f.sub(wb1, wb2);
        // |(d)*A + (e)*A| = |A + (e/d)*A| since d != 0.
        let s2 = work
            .sumset(&work.dilate(f.mul(e, f.inv(d))))?
            .len();
        checks.push(CheckRecord::le(
            "vi: |A1|^2/2 <= |A+A|^2 |(a1-a2)*A+(b1-b2)*A| / |A|^2",
            ratio(int(a1.len()) * int(a1.len()), int(2)),
            ratio(int(ss) * int(ss) * int(s2), int(na) * int(na)),
        ));
        // (vii) |(a1-a2)*A + (b1-b2)*A| <= product of four mixed sums / |A|^3.
        checks.push(CheckRecord::le(
            "vii: |(a1-a2)*A+(b1-b2)*A| <= Π|b0*A ± ·*A| / |A|^3",
            rat(s2),
            mixed_product(&w.witness)? / Rat::from_integer(pow(na, 3)),
        ));
        // (viii) |A+A|^10 >= 0.5 |A1|^2 |A|^5 N^4.
        checks.push(CheckRecord::ge(
            "viii: |A+A|^10 >= |A1|^2 |A|^5 N^4 / 2",
            Rat::from_integer(pow(ss, 10)),
            ratio(
                int(a1.len()) * int(a1.len()) * pow(na, 5) * pow(n_val, 4),
                int(2),
            ),
        ));
        witness = Some(w);
    } else {
        branch = Branch::Case2;
        let w = find_big_witness(&a1, &work)?;
        // (vi') 0.5 p <= product of four mixed sums / |A|^3.
        checks.push(CheckRecord::le(
            "vi': p/2 <= Π|b0*A ± ·*A| / |A|^3",
            ratio(int(p), int(2)),
            mixed_product(&w.witness)? / Rat::from_integer(pow(na, 3)),
        ));
        // (vii') |A+A|^8 >= 0.5 p |A|^3 N^4.
        checks.push(CheckRecord::ge(
            "vii': |A+A|^8 >= p |A|^3 N^4 / 2",
            Rat::from_integer(pow(ss, 8)),
            ratio(int(p) * pow(na, 3) * pow(n_val, 4), int(2)),
        ));
        witness = Some(w);
    }

    // Second-theorem chain: slope witness on X = -(b0*A), Y = A, G = A1.
    let x_set = work.dilate(b0).negate();
    let xw = find_xi_witness(&x_set, &work, &a1, XiMode::ProofFollowing)?;
    let slope_bound = xi_lower_bound(&x_set, &work, &a1)?;
    // (ix) max over a in A1 of |a*A - b0*A| >= p|A|^2|A1| / (|A|^2|A1| + p^2).
    checks.push(CheckRecord::ge(
        "ix: |ξ*A - b0*A| >= p|A|^2|A1|/(|A|^2|A1|+p^2)",
        rat(xw.lhs),
        slope_bound.clone(),
    ));
    // (x) |A+A|^2/N >= the same bound.
    checks.push(CheckRecord::ge(
        "x: |A+A|^2/N >= p|A|^2|A1|/(|A|^2|A1|+p^2)",
        ratio(int(ss) * int(ss), int(n_val)),
        slope_bound,
    ));

    Ok(TraceRecord {
        p,
        a_size: na,
        sumset_size: ss,
        prodset_size: ps,
        removed_zero,
        branch,
        b0: Some(b0),
        j0: Some(j0),
        n: Some(n_val),
        a1: Some(a1.to_vec()),
        witness,
        xi_witness: Some(xw),
        checks,
        bound_values,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field_sets::PrimeField;

    fn set(p: u64, elems: &[u64]) -> FpSet {
        FpSet::from_elems(PrimeField::new(p).unwrap(), elems).unwrap()
    }

    #[test]
    fn b0_selection_examples() {
        assert_eq!(select_b0(&set(7, &[1, 2, 4])).unwrap(), (1, 9));
        assert_eq!(select_b0(&set(7, &[1])).unwrap(), (1, 1));
        assert!(matches!(select_b0(&set(7, &[0, 1])), Err(Error::ZeroInSet)));
    }

    #[test]
    fn b0_guarantee_random() {
        let a = set(101, &[2, 5, 13, 29, 33, 47, 61, 72, 88, 95]);
        let (_, score) = select_b0(&a).unwrap();
        let prod = a.productset(&a).unwrap().len();
        let cube = a.len().pow(3);
        assert!(score as u128 * prod as u128 >= cube as u128);
        // exhaustive scan agrees
        let best = a
            .elements()
            .map(|b| crate::counting::b0_score(b, &a).unwrap())
            .max()
            .unwrap();
        assert_eq!(score, best);
    }

    #[test]
    fn partition_examples() {
        let a = set(7, &[1, 2, 4]);
        let part = dyadic_partition(&a, 1).unwrap();
        assert_eq!(part.len(), 1);
        assert_eq!(part[0].0, 2);
        assert_eq!(part[0].1, a);
        let single = set(7, &[1]);
        let part = dyadic_partition(&single, 1).unwrap();
        assert_eq!(part[0].0, 1);
        assert_eq!(part[0].1, single);
    }

    #[test]
    fn partition_covers_and_is_disjoint() {
        let a = set(101, &[3, 7, 12, 19, 25, 33, 41, 56, 64, 78, 90, 99]);
        let (b0, _) = select_b0(&a).unwrap();
        let part = dyadic_partition(&a, b0).unwrap();
        let total: u64 = part.iter().map(|(_, d)| d.len()).sum();
        assert_eq!(total, 12);
        let mut seen = FpSet::empty(a.field());
        for (_, d) in &part {
            assert_eq!(seen.intersection_size(d).unwrap(), 0);
            seen = seen.union(d).unwrap();
        }
        assert_eq!(seen, a);
    }

    #[test]
    fn class_selection_examples() {
        let a = set(7, &[1, 2, 4]);
        let part = dyadic_partition(&a, 1).unwrap();
        let (j0, n, a1) = select_dyadic_class(&part).unwrap();
        assert_eq!((j0, n), (2, 2));
        assert_eq!(a1, a);
        // N|A1| = 6 >= 27/(2*2*3) = 2.25
        assert!(rat(n) * rat(a1.len()) >= ratio(int(27), int(12)));
    }

    #[test]
    fn subgroup_257_class() {
        let f = PrimeField::new(257).unwrap();
        let a = crate::harness::multiplicative_subgroup(f, 128).unwrap();
        let part = dyadic_partition(&a, 1).unwrap();
        let (j0, n, a1) = select_dyadic_class(&part).unwrap();
        assert_eq!((j0, n), (8, 128));
        assert_eq!(a1.len(), 128);
    }

    #[test]
    fn trivial_trace() {
        let t = run_trace(&set(7, &[1, 2, 4])).unwrap();
        assert_eq!(t.branch, Branch::Trivial);
        assert!(t.all_pass());
        assert!(t.b0.is_none());
        assert_eq!(t.checks.len(), 1);
    }

    #[test]
    fn zero_removed_and_recorded() {
        let t = run_trace(&set(7, &[0, 1, 2, 4])).unwrap();
        assert!(t.removed_zero);
        assert_eq!(t.a_size, 3);
        assert_eq!(t.branch, Branch::Trivial);
    }

    #[test]
    fn case2_subgroup_257() {
        let f = PrimeField::new(257).unwrap();
        let a = crate::harness::multiplicative_subgroup(f, 128).unwrap();
        let t = run_trace(&a).unwrap();
        assert_eq!(t.branch, Branch::Case2);
        assert_eq!(t.n, Some(128));
        assert_eq!(t.a1.as_ref().unwrap().len(), 128);
        assert!(t.all_pass(), "failed checks: {:?}", t.checks.iter().filter(|c| !c.pass).collect::<Vec<_>>());
    }

    #[test]
    fn bound_values_edge() {
        let b = evaluate_theorem_bounds(7, 2, 3, 3).unwrap();
        assert!(b.thm1.is_finite() && b.thm1 > 0.0);
        assert!(b.thm2.is_finite() && b.thm2 > 0.0);
        assert!(b.ratio_thm1 > 0.0 && b.ratio_thm2 > 0.0);
        assert!(evaluate_theorem_bounds(7, 1, 1, 1).is_err());
    }

    #[test]
    fn bound_values_reference() {
        // independent evaluation: p=1009, |A|=144
        let b = evaluate_theorem_bounds(1009, 144, 144, 144).unwrap();
        let n: f64 = 144.0;
        let p: f64 = 1009.0;
        let ln = n.ln();
        let arm1 = n.powf(15.0 / 14.0) * (n.powf(1.0 / 7.0) * p.powf(-1.0 / 14.0)).max(1.0)
            / ln.powf(2.0 / 7.0);
        let arm2 = n.powf(11.0 / 12.0) * p.powf(1.0 / 12.0) / ln.powf(1.0 / 3.0);
        assert!((b.thm1 - arm1.min(arm2)).abs() < 1e-12);
    }

    #[test]
    fn trace_is_deterministic() {
        let f = PrimeField::new(257).unwrap();
        let a = crate::harness::multiplicative_subgroup(f, 128).unwrap();
        let t1 = serde_json::to_string(&run_trace(&a).unwrap()).unwrap();
        let t2 = serde_json::to_string(&run_trace(&a).unwrap()).unwrap();
        assert_eq!(t1, t2);
    }
}
