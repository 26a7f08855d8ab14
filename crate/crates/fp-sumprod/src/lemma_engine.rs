//! Witness search and predicate verification for the five lemmas: Ruzsa's
//! triangle inequality, the Pl\u{00fc}nnecke--Ruzsa corollary, the two sum-expansion
//! existence claims, and the slope lower bound. All comparisons are exact
//! rational arithmetic.

use crate::counting::min_i0_slope;
use crate::error::{Error, Result};
use crate::field_sets::FpSet;
use crate::rats::{int, rat, ratio, Rat};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use std::collections::HashMap;

/// Sample budget for quadruple search above the exhaustive size threshold.
pub const SAMPLE_BUDGET: u64 = 100_000;
/// Largest |A1| for which quadruple search is exhaustive lexicographic.
pub const EXHAUSTIVE_LIMIT: u64 = 48;

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Witness {
    Quadruple { a1: u64, a2: u64, b1: u64, b2: u64 },
    Slope { xi: u64 },
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SearchMode {
    Exhaustive,
    Sampled,
}

/// A found witness with the verified inequality's two sides.
#[derive(Clone, Debug, Serialize)]
pub struct WitnessReport {
    pub witness: Witness,
    /// Achieved cardinality.
    pub lhs: u64,
    /// The lemma's lower bound, exact.
    #[serde(serialize_with = "crate::rats::serialize_rat")]
    pub rhs: Rat,
    pub search_mode: SearchMode,
    pub samples_used: u64,
}

/// Two sides of a verified inequality lhs <= rhs.
#[derive(Clone, Debug, Serialize)]
pub struct InequalityReport {
    #[serde(serialize_with = "crate::rats::serialize_rat")]
    pub lhs: Rat,
    #[serde(serialize_with = "crate::rats::serialize_rat")]
    pub rhs: Rat,
    pub holds: bool,
}

/// |X - Z| <= |X - Y| |Y - Z| / |Y|.
pub fn check_ruzsa_triangle(x: &FpSet, y: &FpSet, z: &FpSet) -> Result<InequalityReport> {
    if y.is_empty() {
        return Err(Error::EmptySet);
    }
    let lhs = rat(x.difference(z)?.len());
    let rhs = ratio(
        int(x.difference(y)?.len()) * int(y.difference(z)?.len()),
        int(y.len()),
    );
    Ok(InequalityReport {
        holds: lhs <= rhs,
        lhs,
        rhs,
    })
}

/// |B_1 + ... + B_k| <= prod |X + B_i| / |X|^(k-1).
pub fn check_plunnecke(x: &FpSet, bs: &[FpSet]) -> Result<InequalityReport> {
    if x.is_empty() {
        return Err(Error::EmptySet);
    }
    if bs.is_empty() {
        return Err(Error::HypothesisViolation("need k >= 1 summands".into()));
    }
    let mut folded = bs[0].clone();
    for b in &bs[1..] {
        folded = folded.sumset(b)?;
    }
    let lhs = rat(folded.len());
    let mut num = int(1);
    for b in bs {
        num *= int(x.sumset(b)?.len());
    }
    let rhs = ratio(num, int(x.len()).pow(bs.len() as u32 - 1));
    Ok(InequalityReport {
        holds: lhs <= rhs,
        lhs,
        rhs,
    })
}

/// Cardinality of (a1-a2)*S + (a1-a2)*S + (b1-b2)*S with d = a1-a2 nonzero.
/// Dilating by d^{-1} reduces it to |(S+S) + c*S| with c = (b1-b2)/(a1-a2),
/// so candidates sharing c are memoized.
struct GkEvaluator<'a> {
    ambient: &'a FpSet,
    double: FpSet,
    memo: HashMap<u64, u64>,
}

impl<'a> GkEvaluator<'a> {
    fn new(ambient: &'a FpSet) -> Result<Self> {
        Ok(GkEvaluator {
            ambient,
            double: ambient.sumset(ambient)?,
            memo: HashMap::new(),
        })
    }

    fn eval(&mut self, d: u64, e: u64) -> u64 {
        debug_assert!(d != 0);
        let f = self.ambient.field();
        let c = f.mul(e, f.inv(d));
        if let Some(&v) = self.memo.get(&c) {
            return v;
        }
        let v = self
            .double
            .sumset(&self.ambient.dilate(c))
            .expect("same field")
            .len();
        self.memo.insert(c, v);
        v
    }
}

/// Cardinality of d*S + e*S, memoized on the quotient e/d when d is nonzero.
struct PairEvaluator<'a> {
    ambient: &'a FpSet,
    memo: HashMap<(u64, u64), u64>,
}

impl<'a> PairEvaluator<'a> {
    fn new(ambient: &'a FpSet) -> Self {
        PairEvaluator {
            ambient,
            memo: HashMap::new(),
        }
    }

    fn eval(&mut self, d: u64, e: u64) -> u64 {
        let f = self.ambient.field();
        let key = if d != 0 {
            (1, f.mul(e, f.inv(d)))
        } else {
            (0, if e == 0 { 0 } else { 1 })
        };
        if let Some(&v) = self.memo.get(&key) {
            return v;
        }
        let v = match key {
            (0, 0) => 1, // {0} + {0}
            (0, _) => self.ambient.len(),
            (_, c) => self
                .ambient
                .sumset(&self.ambient.dilate(c))
                .expect("same field")
                .len(),
        };
        self.memo.insert(key, v);
        v
    }
}

fn check_subset(a1: &FpSet, ambient: &FpSet) -> Result<()> {
    if a1.field() != ambient.field() {
        return Err(Error::FieldMismatch(
            a1.field().modulus(),
            ambient.field().modulus(),
        ));
    }
    if a1.intersect(ambient)?.len() != a1.len() {
        return Err(Error::HypothesisViolation("A1 must be a subset of the ambient set".into()));
    }
    Ok(())
}

/// Quadruple search for the small-set expansion claim: find a1,a2,b1,b2 in A1
/// with a1 != a2 and |(a1-a2)*S + (a1-a2)*S + (b1-b2)*S| >= |A1|^2 / 2, where
/// S is the ambient superset. Requires 1 < |A1| and |A1|^2 < p.
pub fn find_gk_witness(a1_set: &FpSet, ambient: &FpSet) -> Result<WitnessReport> {
    check_subset(a1_set, ambient)?;
    let p = a1_set.field().modulus();
    let k = a1_set.len();
    if k <= 1 || k * k >= p {
        return Err(Error::HypothesisViolation(format!(
            "need 1 < |A1| and |A1|^2 < p, got |A1|={k}, p={p}"
        )));
    }
    let threshold = k * k; // accept when 2*lhs >= |A1|^2
    let rhs = ratio(int(k) * int(k), int(2));
    let mut eval = GkEvaluator::new(ambient)?;
    let f = a1_set.field();
    let mut accept = |a1: u64, a2: u64, b1: u64, b2: u64, samples, mode| {
        let lhs = eval.eval(f.sub(a1, a2), f.sub(b1, b2));
        if 2 * lhs >= threshold {
            Some(WitnessReport {
                witness: Witness::Quadruple { a1, a2, b1, b2 },
                lhs,
                rhs: rhs.clone(),
                search_mode: mode,
                samples_used: samples,
            })
        } else {
            None
        }
    };
    let elems = a1_set.to_vec();
    if k <= EXHAUSTIVE_LIMIT {
        let mut samples = 0;
        for &a1 in &elems {
            for &a2 in &elems {
                if a1 == a2 {
                    continue;
                }
                for &b1 in &elems {
                    for &b2 in &elems {
                        samples += 1;
                        if let Some(w) = accept(a1, a2, b1, b2, samples, SearchMode::Exhaustive) {
                            return Ok(w);
                        }
                    }
                }
            }
        }
        Err(Error::WitnessNotFound { samples })
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(0x6b_5769746e657373);
        let n = elems.len();
        for samples in 1..=SAMPLE_BUDGET {
            let a1 = elems[rng.gen_range(0..n)];
            let a2 = elems[rng.gen_range(0..n)];
            if a1 == a2 {
                continue;
            }
            let b1 = elems[rng.gen_range(0..n)];
            let b2 = elems[rng.gen_range(0..n)];
            if let Some(w) = accept(a1, a2, b1, b2, samples, SearchMode::Sampled) {
                return Ok(w);
            }
        }
        Err(Error::WitnessNotFound {
            samples: SAMPLE_BUDGET,
        })
    }
}

/// Quadruple search for the large-set claim: find a1,a2,b1,b2 in A1 with
/// |(a1-a2)*S + (b1-b2)*S| >= p/2. Requires |A1|^2 > p.
pub fn find_big_witness(a1_set: &FpSet, ambient: &FpSet) -> Result<WitnessReport> {
    check_subset(a1_set, ambient)?;
    let p = a1_set.field().modulus();
    let k = a1_set.len();
    if k * k <= p {
        return Err(Error::HypothesisViolation(format!(
            "need |A1|^2 > p, got |A1|={k}, p={p}"
        )));
    }
    let rhs = ratio(int(p), int(2));
    let mut eval = PairEvaluator::new(ambient);
    let mut accept = |a1: u64, a2: u64, b1: u64, b2: u64, samples, mode| {
        let f = ambient.field();
        let lhs = eval.eval(f.sub(a1, a2), f.sub(b1, b2));
        if 2 * lhs >= p {
            Some(WitnessReport {
                witness: Witness::Quadruple { a1, a2, b1, b2 },
                lhs,
                rhs: rhs.clone(),
                search_mode: mode,
                samples_used: samples,
            })
        } else {
            None
        }
    };
    let elems = a1_set.to_vec();
    if k <= EXHAUSTIVE_LIMIT {
        let mut samples = 0;
        for &a1 in &elems {
            for &a2 in &elems {
                for &b1 in &elems {
                    for &b2 in &elems {
                        samples += 1;
                        if let Some(w) = accept(a1, a2, b1, b2, samples, SearchMode::Exhaustive) {
                            return Ok(w);
                        }
                    }
                }
            }
        }
        Err(Error::WitnessNotFound { samples })
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(0x62_6967776974);
        let n = elems.len();
        for samples in 1..=SAMPLE_BUDGET {
            let a1 = elems[rng.gen_range(0..n)];
            let a2 = elems[rng.gen_range(0..n)];
            let b1 = elems[rng.gen_range(0..n)];
            let b2 = elems[rng.gen_range(0..n)];
            if let Some(w) = accept(a1, a2, b1, b2, samples, SearchMode::Sampled) {
                return Ok(w);
            }
        }
        Err(Error::WitnessNotFound {
            samples: SAMPLE_BUDGET,
        })
    }
}

/// p |X| |Y| |G| / (|X| |Y| |G| + p^2), exact.
pub fn xi_lower_bound(x: &FpSet, y: &FpSet, g: &FpSet) -> Result<Rat> {
    if x.is_empty() || y.is_empty() || g.is_empty() {
        return Err(Error::EmptySet);
    }
    let p = x.field().modulus();
    let prod = int(x.len()) * int(y.len()) * int(g.len());
    Ok(ratio(int(p) * &prod, prod + int(p) * int(p)))
}

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum XiMode {
    /// argmax over xi in G of |X + xi*Y|.
    Direct,
    /// xi minimizing the per-slope solution count I0, with the chain
    /// |X + xi*Y| >= |X|^2 |Y|^2 / I0 >= bound verified exactly.
    ProofFollowing,
}

pub fn find_xi_witness(x: &FpSet, y: &FpSet, g: &FpSet, mode: XiMode) -> Result<WitnessReport> {
    let rhs = xi_lower_bound(x, y, g)?;
    match mode {
        XiMode::Direct => {
            let mut best: Option<(u64, u64)> = None;
            for xi in g.elements() {
                let card = x.sumset(&y.dilate(xi))?.len();
                match best {
                    Some((_, c)) if card <= c => {}
                    _ => best = Some((xi, card)),
                }
            }
            let (xi, lhs) = best.expect("nonempty G");
            assert!(rat(lhs) >= rhs, "slope lower bound violated: implementation bug");
            Ok(WitnessReport {
                witness: Witness::Slope { xi },
                lhs,
                rhs,
                search_mode: SearchMode::Exhaustive,
                samples_used: g.len(),
            })
        }
        XiMode::ProofFollowing => {
            let (xi, i0) = min_i0_slope(x, y, g)?;
            let lhs = x.sumset(&y.dilate(xi))?.len();
            // Cauchy-Schwarz step: |X + xi*Y| * I0 >= (|X| |Y|)^2.
            let xy = x.len() as u128 * y.len() as u128;
            assert!(lhs as u128 * i0 >= xy * xy, "counting chain violated: implementation bug");
            // Averaging step: I0 <= |X|^2|Y|^2/p + p|X||Y|/|G|.
            let p = x.field().modulus();
            let i0_bound = ratio(int(x.len()) * int(x.len()) * int(y.len()) * int(y.len()), int(p))
                + ratio(int(p) * int(x.len()) * int(y.len()), int(g.len()));
            assert!(
                Rat::from_integer(num_bigint::BigInt::from(i0)) <= i0_bound,
                "I0 averaging bound violated: implementation bug"
            );
            assert!(rat(lhs) >= rhs, "slope lower bound violated: implementation bug");
            Ok(WitnessReport {
                witness: Witness::Slope { xi },
                lhs,
                rhs,
                search_mode: SearchMode::Exhaustive,
                samples_used: g.len(),
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field_sets::PrimeField;

    fn set(p: u64, elems: &[u64]) -> FpSet {
        FpSet::from_elems(PrimeField::new(p).unwrap(), elems).unwrap()
    }

    #[test]
    fn ruzsa_examples() {
        let r = check_ruzsa_triangle(&set(5, &[1, 2]), &set(5, &[1, 3]), &set(5, &[0, 1])).unwrap();
        assert!(r.holds);
        assert_eq!(r.lhs, rat(3));
        assert_eq!(r.rhs, rat(8));
        let s = set(7, &[3]);
        let r = check_ruzsa_triangle(&s, &s, &s).unwrap();
        assert!(r.holds);
        assert_eq!(r.lhs, rat(1));
        assert_eq!(r.rhs, rat(1));
        let x = set(11, &[1, 4, 9]);
        let y = set(11, &[2, 5]);
        let r = check_ruzsa_triangle(&x, &y, &x).unwrap();
        assert!(r.holds);
    }

    #[test]
    fn plunnecke_examples() {
        let x = set(7, &[0]);
        let bs = [set(7, &[0, 1]), set(7, &[0, 2])];
        let r = check_plunnecke(&x, &bs).unwrap();
        assert!(r.holds);
        assert_eq!(r.lhs, rat(4));
        assert_eq!(r.rhs, rat(4));
        let b1 = set(7, &[2, 3, 5]);
        let r = check_plunnecke(&set(7, &[1, 4]), &[b1.clone()]).unwrap();
        assert!(r.holds); // k=1: |B1| <= |X+B1|
        let sub = set(7, &[1, 2, 4]);
        let r = check_plunnecke(&sub, &[sub.clone(), sub.clone()]).unwrap();
        assert_eq!(r.lhs, rat(6));
        assert_eq!(r.rhs, rat(12));
        assert!(r.holds);
    }

    #[test]
    fn gk_witness_small() {
        let a1 = set(11, &[1, 3]);
        let w = find_gk_witness(&a1, &a1).unwrap();
        assert_eq!(
            w.witness,
            Witness::Quadruple { a1: 1, a2: 3, b1: 1, b2: 1 }
        );
        assert_eq!(w.lhs, 3);
        assert!(rat(w.lhs) >= w.rhs);
        assert_eq!(w.search_mode, SearchMode::Exhaustive);
    }

    #[test]
    fn gk_witness_evaluator_matches_direct_formula() {
        let f = PrimeField::new(101).unwrap();
        let amb = FpSet::from_elems(f, &[2, 11, 29, 37, 50, 63, 88]).unwrap();
        let mut eval = GkEvaluator::new(&amb).unwrap();
        for (d, e) in [(5u64, 17u64), (99, 0), (1, 100), (42, 42)] {
            let t = amb.dilate(d);
            let direct = t
                .sumset(&t)
                .unwrap()
                .sumset(&amb.dilate(e))
                .unwrap()
                .len();
            assert_eq!(eval.eval(d, e), direct);
        }
    }

    #[test]
    fn gk_witness_random_nine() {
        let f = PrimeField::new(101).unwrap();
        let a1 = FpSet::from_elems(f, &[3, 12, 25, 31, 47, 58, 76, 82, 97]).unwrap();
        let w = find_gk_witness(&a1, &a1).unwrap();
        assert!(2 * w.lhs >= a1.len() * a1.len());
    }

    #[test]
    fn gk_hypothesis_violations() {
        let a1 = set(7, &[1, 2, 4]); // 9 >= 7
        assert!(matches!(
            find_gk_witness(&a1, &a1),
            Err(Error::HypothesisViolation(_))
        ));
        let single = set(11, &[5]);
        assert!(matches!(
            find_gk_witness(&single, &single),
            Err(Error::HypothesisViolation(_))
        ));
        let a1 = set(101, &[4, 9]);
        let not_superset = set(101, &[4, 10]);
        assert!(matches!(
            find_gk_witness(&a1, &not_superset),
            Err(Error::HypothesisViolation(_))
        ));
    }

    #[test]
    fn big_witness_examples() {
        let a1 = set(5, &[0, 1, 2]);
        let w = find_big_witness(&a1, &a1).unwrap();
        assert_eq!(
            w.witness,
            Witness::Quadruple { a1: 0, a2: 0, b1: 0, b2: 1 }
        );
        assert!(2 * w.lhs >= 5);
        let full = FpSet::full(PrimeField::new(7).unwrap());
        let w = find_big_witness(&full, &full).unwrap();
        assert_eq!(w.lhs, 7);
        assert!(matches!(
            find_big_witness(&set(11, &[1, 2]), &set(11, &[1, 2])),
            Err(Error::HypothesisViolation(_))
        ));
    }

    #[test]
    fn xi_bound_examples() {
        let s = set(7, &[1, 2, 4]);
        assert_eq!(xi_lower_bound(&s, &s, &s).unwrap(), ratio(int(189), int(76)));
        let one = set(7, &[3]);
        let b = xi_lower_bound(&one, &one, &one).unwrap();
        assert_eq!(b, ratio(int(7), int(50)));
        assert!(b < rat(1));
    }

    #[test]
    fn xi_witness_examples() {
        let s = set(7, &[1, 2, 4]);
        let w = find_xi_witness(&s, &s, &s, XiMode::Direct).unwrap();
        assert_eq!(w.witness, Witness::Slope { xi: 1 });
        assert_eq!(w.lhs, 6);
        let x0 = set(7, &[0]);
        let g1 = set(7, &[1]);
        let w = find_xi_witness(&x0, &x0, &g1, XiMode::Direct).unwrap();
        assert_eq!(w.witness, Witness::Slope { xi: 1 });
        assert_eq!(w.lhs, 1);
    }

    #[test]
    fn xi_witness_modes_consistent() {
        let f = PrimeField::new(101).unwrap();
        let x = FpSet::from_elems(f, &[1, 7, 12, 30, 44, 56, 61, 78, 80, 95]).unwrap();
        let y = FpSet::from_elems(f, &[0, 3, 9, 21, 33, 42, 57, 66, 83, 99]).unwrap();
        let g = FpSet::from_elems(f, &[2, 15, 38, 70, 91]).unwrap();
        let direct = find_xi_witness(&x, &y, &g, XiMode::Direct).unwrap();
        let proof = find_xi_witness(&x, &y, &g, XiMode::ProofFollowing).unwrap();
        assert!(direct.lhs >= proof.lhs);
        assert!(rat(proof.lhs) >= proof.rhs);
    }
}
