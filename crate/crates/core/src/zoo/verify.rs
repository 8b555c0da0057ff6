//! Number-theoretic and staircase verifiers that back the catalog.

use serde::{Deserialize, Serialize};

use crate::domains::primes::odd_primes_up_to;
use crate::domains::{build_staircase, staircase_breakpoints, Domain, DomainSpec, StaircaseParams, StaircaseVariant};
use crate::error::Error;
use crate::exactnum::{midpoint, QuadExt, Rational};
use crate::functions::Function;

use super::catalog::step_function;

/// Symmetric pairs of a reciprocal set whose midpoint lands back in the set.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct MidpointReport {
    pub bound: u64,
    /// `[p]` for a pair `(0, 1/p)`, `[p, q, r]` for `(1/p + 1/q)/2 = 1/r`.
    pub violations: Vec<Vec<u64>>,
    pub pairs_checked: u64,
}

impl MidpointReport {
    pub fn holds(&self) -> bool {
        self.violations.is_empty()
    }
}

fn reciprocal_of(x: &QuadExt) -> Option<u64> {
    let r = x.as_rational()?;
    let (n, d) = r.as_small()?;
    (n == 1 && d > 0).then_some(d as u64)
}

/// Every pair `(0, 1/p)` and `(1/p, 1/q)` over odd primes up to `n`, with
/// the exact midpoint tested against `{0} U {1/p}`.
pub fn midpoint_exclusion_primes(n: u64) -> Result<MidpointReport, Error> {
    if n < 3 {
        return Err(Error::Config("the prime bound must be at least 3".into()));
    }
    let (primes, _) = odd_primes_up_to(n, usize::MAX);
    let set = Domain::compile(&DomainSpec::OddPrimeReciprocals { max_prime: n, with_zero: true })?;
    let recips: Vec<QuadExt> = primes.iter().map(|&p| QuadExt::frac(1, p as i64)).collect();
    let zero = QuadExt::zero();
    let mut out = MidpointReport { bound: n, violations: Vec::new(), pairs_checked: 0 };
    for (i, x) in recips.iter().enumerate() {
        out.pairs_checked += 1;
        if set.contains(&midpoint(&zero, x)) {
            out.violations.push(vec![primes[i]]);
        }
        for (j, y) in recips.iter().enumerate().skip(i + 1) {
            out.pairs_checked += 1;
            let m = midpoint(x, y);
            if set.contains(&m) {
                out.violations.push(vec![primes[i], primes[j], reciprocal_of(&m).unwrap_or(0)]);
            }
        }
    }
    Ok(out)
}

/// The same test on `{0} U {1/n : n <= max_n}`, restricted to pairs through
/// 0: the midpoint `1/(2n)` is a member whenever `2n <= max_n`.
pub fn midpoint_exclusion_naturals(max_n: u64) -> Result<MidpointReport, Error> {
    let set = Domain::compile(&DomainSpec::NaturalReciprocals { max_n, with_zero: true })?;
    let zero = QuadExt::zero();
    let mut out = MidpointReport { bound: max_n, violations: Vec::new(), pairs_checked: 0 };
    for k in 1..=max_n {
        out.pairs_checked += 1;
        if set.contains(&midpoint(&zero, &QuadExt::frac(1, k as i64))) {
            out.violations.push(vec![k]);
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct StaircaseProofReport {
    pub blocks_checked: usize,
    /// `a_{4k+1} - a_{4k} = 1`.
    pub unit_gaps: bool,
    /// `(a_{4k-3} + a_{4k-1})/2 > a_{4k-2}`.
    pub lower_chain: bool,
    /// `(a_{4k-2} + a_{4k})/2 < a_{4k-1}`.
    pub upper_chain: bool,
    /// `(a_{4k-2}, a_{4k-1})` is `1/k` apart with oscillation 2.
    pub uc_pairs: bool,
    pub failures: Vec<String>,
}

impl StaircaseProofReport {
    pub fn passed(&self) -> bool {
        self.unit_gaps && self.lower_chain && self.upper_chain && self.uc_pairs
    }
}

/// Exact check of the inequalities behind the first staircase, for
/// `k = 1..=blocks_to_check`.
pub fn verify_staircase_proof(params: &StaircaseParams, blocks_to_check: usize) -> Result<StaircaseProofReport, Error> {
    if params.variant != StaircaseVariant::A {
        return Err(Error::Inapplicable("the proof checks apply to staircase variant A only".into()));
    }
    if blocks_to_check == 0 || blocks_to_check > params.blocks {
        return Err(Error::Config(format!("blocks to check must lie in 1..={}", params.blocks)));
    }
    let k_max = blocks_to_check;
    let a = staircase_breakpoints(StaircaseVariant::A, 4 * k_max + 1);
    let at = |n: usize| &a[n - 1];
    // a step function long enough to cover a_{4k_max}
    let stair = build_staircase(&StaircaseParams { variant: StaircaseVariant::A, blocks: 2 * k_max })?;
    let f = Function::compile(&step_function(&stair))?;
    let mut r = StaircaseProofReport {
        blocks_checked: k_max,
        unit_gaps: true,
        lower_chain: true,
        upper_chain: true,
        uc_pairs: true,
        failures: Vec::new(),
    };
    for k in 1..=k_max {
        if at(4 * k + 1) - at(4 * k) != Rational::one() {
            r.unit_gaps = false;
            r.failures.push(format!("k = {k}: a_(4k+1) - a_(4k) is not 1"));
        }
        let low = (at(4 * k - 3) + at(4 * k - 1)).half();
        if low <= *at(4 * k - 2) {
            r.lower_chain = false;
            r.failures.push(format!("k = {k}: lower midpoint {low} does not exceed a_(4k-2)"));
        }
        let high = (at(4 * k - 2) + at(4 * k)).half();
        if high >= *at(4 * k - 1) {
            r.upper_chain = false;
            r.failures.push(format!("k = {k}: upper midpoint {high} is not below a_(4k-1)"));
        }
        let (x, y) = (QuadExt::from_rational(at(4 * k - 2).clone()), QuadExt::from_rational(at(4 * k - 1).clone()));
        let gap = &y - &x;
        let osc = (&f.eval(&y)? - &f.eval(&x)?).abs();
        if gap != QuadExt::frac(1, k as i64) || osc != QuadExt::int(2) {
            r.uc_pairs = false;
            r.failures.push(format!("k = {k}: pair distance {gap}, oscillation {osc}"));
        }
    }
    Ok(r)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct StaircaseWitnessReport {
    pub terms: usize,
    /// `(a_{2n-1} + a_{2n+1})/2` lies in `[a_{2n-1}, a_{2n}]`.
    pub midpoints_inside: bool,
    pub oscillation_two: bool,
    pub failures: Vec<String>,
}

impl StaircaseWitnessReport {
    pub fn passed(&self) -> bool {
        self.midpoints_inside && self.oscillation_two
    }
}

/// The pairs `(a_{2n-1}, a_{2n+1})` on the second staircase for `n = 1..=n_max`.
pub fn verify_staircase_b_witness(n_max: usize) -> Result<StaircaseWitnessReport, Error> {
    let stair = build_staircase(&StaircaseParams { variant: StaircaseVariant::B, blocks: n_max + 1 })?;
    let dom = Domain::compile(&stair.domain)?;
    let f = Function::compile(&step_function(&stair))?;
    let mut r =
        StaircaseWitnessReport { terms: n_max, midpoints_inside: true, oscillation_two: true, failures: Vec::new() };
    for n in 1..=n_max {
        let x = QuadExt::from_rational(stair.a(2 * n - 1).clone());
        let y = QuadExt::from_rational(stair.a(2 * n + 1).clone());
        let m = midpoint(&x, &y);
        let right = QuadExt::from_rational(stair.a(2 * n).clone());
        if !(x <= m && m <= right && dom.contains(&m)) {
            r.midpoints_inside = false;
            r.failures.push(format!("n = {n}: midpoint {m} leaves [{x}, {right}]"));
        }
        let osc = (&f.eval(&x)? - &f.eval(&y)?).abs();
        if osc != QuadExt::int(2) {
            r.oscillation_two = false;
            r.failures.push(format!("n = {n}: oscillation {osc}"));
        }
    }
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn three_and_five() {
        let r = midpoint_exclusion_primes(5).unwrap();
        assert!(r.holds());
        // (0,1/3), (0,1/5), (1/3,1/5)
        assert_eq!(r.pairs_checked, 3);
    }

    #[test]
    fn first_block_by_hand() {
        let r = verify_staircase_proof(&StaircaseParams { variant: StaircaseVariant::A, blocks: 1 }, 1).unwrap();
        assert!(r.passed(), "{:?}", r.failures);
    }
}
