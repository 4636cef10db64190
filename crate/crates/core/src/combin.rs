//! Partitions, compositions, multinomials and exponential Bell polynomials.
//!
//! Coefficients are arbitrary-precision integers throughout: the diagram
//! counts grow combinatorially and must stay exact.

use std::collections::BTreeMap;

use num::bigint::BigInt;
use num::{One, Zero};

use crate::{Error, Result};

/// Sparse multivariate polynomial with exact integer coefficients.
///
/// A term maps the exponent vector `(e_1, ..., e_m)` of `x_1^{e_1} ... x_m^{e_m}`
/// to its coefficient. For a partial Bell polynomial `B_{n,k}` every term
/// satisfies `sum e_i = k` and `sum i*e_i = n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BellPoly {
    pub arity: usize,
    pub terms: BTreeMap<Vec<u32>, BigInt>,
}

impl BellPoly {
    pub fn zero(arity: usize) -> Self {
        BellPoly {
            arity,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(arity: usize, c: i64) -> Self {
        let mut terms = BTreeMap::new();
        if c != 0 {
            terms.insert(vec![0; arity], BigInt::from(c));
        }
        BellPoly { arity, terms }
    }

    /// Single monomial `c * x_i` (1-based `i`).
    pub fn monomial(arity: usize, i: usize, c: BigInt) -> Self {
        let mut e = vec![0u32; arity];
        e[i - 1] = 1;
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(e, c);
        }
        BellPoly { arity, terms }
    }

    pub fn add_term(&mut self, exps: Vec<u32>, c: BigInt) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(exps) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn add(&self, other: &BellPoly) -> BellPoly {
        let arity = self.arity.max(other.arity);
        let mut out = BellPoly::zero(arity);
        for (e, c) in self.terms.iter().chain(other.terms.iter()) {
            let mut e = e.clone();
            e.resize(arity, 0);
            out.add_term(e, c.clone());
        }
        out
    }

    pub fn mul(&self, other: &BellPoly) -> BellPoly {
        let arity = self.arity.max(other.arity);
        let mut out = BellPoly::zero(arity);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let mut e = vec![0u32; arity];
                for (i, v) in e1.iter().enumerate() {
                    e[i] += v;
                }
                for (i, v) in e2.iter().enumerate() {
                    e[i] += v;
                }
                out.add_term(e, c1 * c2);
            }
        }
        out
    }

    pub fn scale(&self, c: &BigInt) -> BellPoly {
        let mut out = BellPoly::zero(self.arity);
        for (e, v) in &self.terms {
            out.add_term(e.clone(), v * c);
        }
        out
    }

    pub fn pow(&self, k: u32) -> BellPoly {
        let mut out = BellPoly::constant(self.arity, 1);
        for _ in 0..k {
            out = out.mul(self);
        }
        out
    }

    /// Evaluate at `x_1 = x_2 = ... = 1`: the sum of coefficients.
    pub fn eval_all_ones(&self) -> BigInt {
        self.terms.values().sum()
    }

    /// Render as a human-readable polynomial, terms in the map order.
    pub fn display(&self) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut out = String::new();
        for (e, c) in &self.terms {
            let mono: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &p)| p > 0)
                .map(|(i, &p)| {
                    if p == 1 {
                        format!("x{}", i + 1)
                    } else {
                        format!("x{}^{}", i + 1, p)
                    }
                })
                .collect();
            let mono = mono.join("*");
            if !out.is_empty() {
                out.push_str(" + ");
            }
            if mono.is_empty() {
                out.push_str(&c.to_string());
            } else if c.is_one() {
                out.push_str(&mono);
            } else {
                out.push_str(&format!("{c}*{mono}"));
            }
        }
        out
    }
}

/// Multiplicity vectors of the unordered partitions of `k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartitionSet {
    pub k: u32,
    pub items: Vec<Vec<u32>>,
}

/// All `(theta_1, ..., theta_k)` with `sum i*theta_i = k`, in lexicographic
/// order. `k = 0` yields the single empty partition.
pub fn partitions(k: u32) -> PartitionSet {
    let mut items = Vec::new();
    let mut cur = vec![0u32; k as usize];
    fn rec(i: u32, remaining: u32, k: u32, cur: &mut Vec<u32>, items: &mut Vec<Vec<u32>>) {
        if i > k {
            if remaining == 0 {
                items.push(cur.clone());
            }
            return;
        }
        let max_t = remaining / i;
        for t in 0..=max_t {
            cur[(i - 1) as usize] = t;
            rec(i + 1, remaining - t * i, k, cur, items);
        }
        cur[(i - 1) as usize] = 0;
    }
    if k == 0 {
        items.push(Vec::new());
    } else {
        rec(1, k, k, &mut cur, &mut items);
        items.sort();
    }
    PartitionSet { k, items }
}

/// Ordered partitions of `k` into `n` nonnegative parts, lexicographic.
pub fn compositions(k: u32, n: u32) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let mut cur = vec![0u32; n as usize];
    fn rec(pos: usize, remaining: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if pos + 1 == cur.len() {
            cur[pos] = remaining;
            out.push(cur.clone());
            return;
        }
        for v in 0..=remaining {
            cur[pos] = v;
            rec(pos + 1, remaining - v, cur, out);
        }
    }
    if n == 0 {
        if k == 0 {
            out.push(Vec::new());
        }
        return out;
    }
    rec(0, k, &mut cur, &mut out);
    out
}

/// Ordered partitions of `n` into `m` strictly positive parts.
pub fn strict_compositions(n: u32, m: u32) -> Vec<Vec<u32>> {
    if m == 0 {
        return if n == 0 { vec![Vec::new()] } else { Vec::new() };
    }
    if n < m {
        return Vec::new();
    }
    compositions(n - m, m)
        .into_iter()
        .map(|c| c.into_iter().map(|v| v + 1).collect())
        .collect()
}

/// Exact factorial.
pub fn factorial(n: u32) -> BigInt {
    let mut acc = BigInt::one();
    for i in 2..=n {
        acc *= i;
    }
    acc
}

/// Multinomial coefficient `n! / (parts_1! ... parts_m!)`.
pub fn multinomial(n: u32, parts: &[u32]) -> Result<BigInt> {
    if parts.iter().sum::<u32>() != n {
        return Err(Error::Domain(format!(
            "multinomial parts {:?} do not sum to {n}",
            parts
        )));
    }
    let mut acc = factorial(n);
    for &p in parts {
        acc /= factorial(p);
    }
    Ok(acc)
}

fn binomial(n: u32, k: u32) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    factorial(n) / (factorial(k) * factorial(n - k))
}

/// Partial exponential Bell polynomial `B_{n,k}` in `x_1..x_{n-k+1}`,
/// by the recursion `B_{n,k} = sum_i C(n-1, i-1) x_i B_{n-i, k-1}`
/// anchored at `B_{0,0} = 1`, `B_{n,0} = 0` (n >= 1), `B_{0,k} = 0` (k >= 1).
pub fn partial_bell(n: u32, k: u32) -> Result<BellPoly> {
    if k > n {
        return Err(Error::Domain(format!("partial Bell needs k <= n, got ({n},{k})")));
    }
    let arity = if n == 0 { 0 } else { (n - k + 1) as usize };
    let full = partial_bell_rec(n, k);
    // trim exponent vectors to the canonical arity
    let mut out = BellPoly::zero(arity);
    for (e, c) in full.terms {
        let mut e2 = e;
        e2.resize(arity, 0);
        out.add_term(e2, c);
    }
    Ok(out)
}

fn partial_bell_rec(n: u32, k: u32) -> BellPoly {
    let arity = n as usize;
    if n == 0 && k == 0 {
        return BellPoly::constant(arity, 1);
    }
    if n == 0 || k == 0 {
        return BellPoly::zero(arity);
    }
    let mut acc = BellPoly::zero(arity);
    for i in 1..=(n - k + 1) {
        let prev = partial_bell_rec(n - i, k - 1);
        let coef = binomial(n - 1, i - 1);
        let xi = BellPoly::monomial(arity, i as usize, coef);
        acc = acc.add(&xi.mul(&prev));
    }
    acc
}

/// Complete exponential Bell polynomial `B_n = sum_{k=1}^n B_{n,k}`
/// (`B_0 = 1`), in `x_1..x_n`.
pub fn complete_bell(n: u32) -> BellPoly {
    if n == 0 {
        return BellPoly::constant(0, 1);
    }
    let arity = n as usize;
    let mut acc = BellPoly::zero(arity);
    for k in 1..=n {
        let b = partial_bell(n, k).expect("k <= n");
        let mut lifted = BellPoly::zero(arity);
        for (e, c) in b.terms {
            let mut e2 = e;
            e2.resize(arity, 0);
            lifted.add_term(e2, c);
        }
        acc = acc.add(&lifted);
    }
    acc
}

/// Cross-check route: the complete-Bell recursion
/// `B_{n+1} = sum_i C(n,i) B_{n-i} x_{i+1}`.
pub fn complete_bell_by_recursion(n: u32) -> BellPoly {
    let mut known: Vec<BellPoly> = vec![BellPoly::constant(0, 1)];
    for m in 0..n {
        let arity = (m + 1) as usize;
        let mut acc = BellPoly::zero(arity);
        for i in 0..=m {
            let prev = &known[(m - i) as usize];
            let mut lifted = BellPoly::zero(arity);
            for (e, c) in &prev.terms {
                let mut e2 = e.clone();
                e2.resize(arity, 0);
                lifted.add_term(e2, c.clone());
            }
            let xi = BellPoly::monomial(arity, (i + 1) as usize, binomial(m, i));
            acc = acc.add(&lifted.mul(&xi));
        }
        known.push(acc);
    }
    known.pop().unwrap()
}

/// Number of diagrams of the degree-`d` mollifier truncated at `K`:
/// `sum over (k_1..k_d), sum k_m = K, of prod_m B_m(1,..,1)^{k_m}`.
pub fn bell_diagram_count(d: u32, cap: u32) -> Result<BigInt> {
    if d == 0 {
        return Err(Error::Domain("diagram count needs d >= 1".into()));
    }
    let bell_numbers: Vec<BigInt> = (1..=d).map(|m| complete_bell(m).eval_all_ones()).collect();
    let mut total = BigInt::zero();
    for combo in compositions(cap, d) {
        let mut prod = BigInt::one();
        for (m, &km) in combo.iter().enumerate() {
            prod *= num::pow::pow(bell_numbers[m].clone(), km as usize);
        }
        total += prod;
    }
    Ok(total)
}

/// The polynomial `sum_{k_1+..+k_d = K} prod_m B_m(x_1..x_m)^{k_m}`, whose
/// all-ones evaluation is [`bell_diagram_count`].
pub fn bell_product_expansion(d: u32, cap: u32) -> Result<BellPoly> {
    if d == 0 {
        return Err(Error::Domain("expansion needs d >= 1".into()));
    }
    let polys: Vec<BellPoly> = (1..=d).map(complete_bell).collect();
    let arity = d as usize;
    let mut total = BellPoly::zero(arity);
    for combo in compositions(cap, d) {
        let mut prod = BellPoly::constant(arity, 1);
        for (m, &km) in combo.iter().enumerate() {
            let mut lifted = BellPoly::zero(arity);
            for (e, c) in &polys[m].terms {
                let mut e2 = e.clone();
                e2.resize(arity, 0);
                lifted.add_term(e2, c.clone());
            }
            prod = prod.mul(&lifted.pow(km));
        }
        total = total.add(&prod);
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(terms: &[(&[u32], i64)]) -> BTreeMap<Vec<u32>, BigInt> {
        terms
            .iter()
            .map(|(e, c)| (e.to_vec(), BigInt::from(*c)))
            .collect()
    }

    #[test]
    fn partition_counts() {
        assert_eq!(partitions(0).items.len(), 1);
        assert_eq!(partitions(4).items.len(), 5);
        assert_eq!(partitions(10).items.len(), 42);
        // enumeration oracle: every item satisfies sum i*theta_i = k
        for k in 0..=10u32 {
            let ps = partitions(k);
            for item in &ps.items {
                let w: u32 = item.iter().enumerate().map(|(i, &t)| (i as u32 + 1) * t).sum();
                assert_eq!(w, k);
            }
            let mut sorted = ps.items.clone();
            sorted.sort();
            sorted.dedup();
            assert_eq!(sorted, ps.items, "lexicographic and duplicate-free");
        }
    }

    #[test]
    fn composition_basics() {
        assert_eq!(
            compositions(2, 2),
            vec![vec![0, 2], vec![1, 1], vec![2, 0]]
        );
        assert_eq!(multinomial(4, &[2, 1, 1]).unwrap(), BigInt::from(12));
        assert!(multinomial(4, &[2, 1]).is_err());
        // |C(k,n)| = C(k+n-1, n-1)
        for k in 0..=8u32 {
            for n in 1..=8u32 {
                let count = compositions(k, n).len();
                assert_eq!(BigInt::from(count), binomial(k + n - 1, n - 1));
            }
        }
        assert_eq!(strict_compositions(4, 2).len(), 3);
        assert_eq!(strict_compositions(3, 4).len(), 0);
    }

    #[test]
    fn printed_bell_tables() {
        // B_{3,k}
        assert_eq!(partial_bell(3, 1).unwrap().terms, poly(&[(&[0, 0, 1], 1)]));
        assert_eq!(partial_bell(3, 2).unwrap().terms, poly(&[(&[1, 1], 3)]));
        assert_eq!(partial_bell(3, 3).unwrap().terms, poly(&[(&[3], 1)]));
        // B_{4,k}
        assert_eq!(
            partial_bell(4, 1).unwrap().terms,
            poly(&[(&[0, 0, 0, 1], 1)])
        );
        assert_eq!(
            partial_bell(4, 2).unwrap().terms,
            poly(&[(&[0, 2, 0], 3), (&[1, 0, 1], 4)])
        );
        assert_eq!(partial_bell(4, 3).unwrap().terms, poly(&[(&[2, 1], 6)]));
        assert_eq!(partial_bell(4, 4).unwrap().terms, poly(&[(&[4], 1)]));
        // B_{n,n} = x_1^n
        for n in 1..=7u32 {
            let b = partial_bell(n, n).unwrap();
            assert_eq!(b.terms.len(), 1);
            let (e, c) = b.terms.iter().next().unwrap();
            assert_eq!(e[0], n);
            assert!(c.is_one());
        }
        assert!(partial_bell(2, 3).is_err());
    }

    #[test]
    fn bell_numbers_and_recursion_cross_check() {
        let expect = [1u64, 1, 2, 5, 15, 52, 203];
        for (n, &b) in expect.iter().enumerate() {
            let direct = complete_bell(n as u32);
            assert_eq!(direct.eval_all_ones(), BigInt::from(b), "n={n}");
            assert_eq!(direct, complete_bell_by_recursion(n as u32), "n={n}");
        }
        assert_eq!(complete_bell(0).eval_all_ones(), BigInt::one());
    }

    /// Definitional oracle: direct summation over multiplicity vectors with
    /// `sum j_i = k` and `sum i*j_i = n`.
    fn partial_bell_by_definition(n: u32, k: u32) -> BellPoly {
        if n == 0 {
            return if k == 0 {
                BellPoly::constant(0, 1)
            } else {
                BellPoly::zero(0)
            };
        }
        let arity = (n - k + 1) as usize;
        let mut out = BellPoly::zero(arity);
        for js in compositions(k, arity as u32) {
            let w: u32 = js.iter().enumerate().map(|(i, &j)| (i as u32 + 1) * j).sum();
            if w != n {
                continue;
            }
            let mut c = factorial(n);
            for (i, &j) in js.iter().enumerate() {
                c /= factorial(j);
                c /= num::pow::pow(factorial(i as u32 + 1), j as usize);
            }
            out.add_term(js, c);
        }
        out
    }

    #[test]
    fn recursion_matches_definition() {
        for n in 0..=8u32 {
            for k in 0..=n {
                assert_eq!(
                    partial_bell(n, k).unwrap(),
                    partial_bell_by_definition(n, k),
                    "B_{{{n},{k}}}"
                );
            }
        }
    }

    #[test]
    fn exponent_law() {
        for n in 1..=10u32 {
            for k in 1..=n {
                let b = partial_bell(n, k).unwrap();
                for e in b.terms.keys() {
                    let deg: u32 = e.iter().sum();
                    let wdeg: u32 = e.iter().enumerate().map(|(i, &x)| (i as u32 + 1) * x).sum();
                    assert_eq!(deg, k);
                    assert_eq!(wdeg, n);
                }
            }
        }
    }

    #[test]
    fn diagram_counts() {
        assert_eq!(bell_diagram_count(2, 3).unwrap(), BigInt::from(15));
        assert_eq!(bell_diagram_count(2, 4).unwrap(), BigInt::from(31));
        // The printed d=3, K=3 count is 282, but the defining sum evaluates
        // to 250; the printed polynomial double-counts three compositions.
        // See the acceptance suite for the discrepancy report.
        assert_eq!(bell_diagram_count(3, 3).unwrap(), BigInt::from(250));
    }

    #[test]
    fn d2_k3_expansion_term_for_term() {
        // sum_{k1+k2=3} B_1(x1)^{k1} B_2(x1,x2)^{k2}
        let got = bell_product_expansion(2, 3).unwrap();
        let want = poly(&[
            (&[3, 0], 1),
            (&[4, 0], 1),
            (&[5, 0], 1),
            (&[6, 0], 1),
            (&[2, 1], 1),
            (&[3, 1], 2),
            (&[4, 1], 3),
            (&[1, 2], 1),
            (&[2, 2], 3),
            (&[0, 3], 1),
        ]);
        assert_eq!(got.terms, want);
        assert_eq!(got.eval_all_ones(), BigInt::from(15));
    }
}
