//! Exact multivariate residue engine for the autocorrelation-ratio
//! integrand.
//!
//! The moment integrand is a product of shifted zeta ratios
//! `zeta(1+base+v)/zeta(1+base)` over the contour variables attached to the
//! mollifier truncations, times the arithmetical factor. Each normalized
//! ratio expands as `sum_m (zeta^{(m)}/zeta)(1+base) v^m / m!`, so the joint
//! residue is a polynomial in formal derivative symbols at three base
//! points. This module extracts it with exact rational coefficients.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num::bigint::BigInt;
use num::complex::Complex64;
use num::rational::BigRational;
use num::{One, Signed, ToPrimitive, Zero};

use crate::combin::factorial;
use crate::{Error, Result};

/// Base point of a zeta-ratio symbol.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum RatioBase {
    /// Argument `1 + s + u`.
    Su,
    /// Argument `1 + alpha + s`.
    As,
    /// Argument `1 + beta + u`.
    Bu,
}

/// The symbol `(zeta^{(order)}/zeta)(1 + base)`, `order >= 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RatioSymbol {
    pub base: RatioBase,
    pub order: u32,
}

/// Monomial in ratio symbols: exponent vectors indexed by derivative order
/// (entry `j-1` is the exponent of `zeta^{(j)}/zeta`), plus the formal
/// derivative multi-index of the arithmetical factor over the contour
/// variables (empty = no derivative).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Default)]
pub struct SymMonomial {
    pub su: Vec<u32>,
    pub asym: Vec<u32>,
    pub bu: Vec<u32>,
    pub atag: Vec<u32>,
}

impl SymMonomial {
    pub fn one() -> Self {
        SymMonomial::default()
    }

    pub fn is_one(&self) -> bool {
        self.su.iter().all(|&e| e == 0)
            && self.asym.iter().all(|&e| e == 0)
            && self.bu.iter().all(|&e| e == 0)
            && self.atag.iter().all(|&e| e == 0)
    }

    pub fn has_atag(&self) -> bool {
        self.atag.iter().any(|&e| e > 0)
    }

    fn mul(&self, other: &SymMonomial) -> SymMonomial {
        fn addv(a: &[u32], b: &[u32]) -> Vec<u32> {
            let n = a.len().max(b.len());
            (0..n)
                .map(|i| a.get(i).copied().unwrap_or(0) + b.get(i).copied().unwrap_or(0))
                .collect()
        }
        SymMonomial {
            su: trim(addv(&self.su, &other.su)),
            asym: trim(addv(&self.asym, &other.asym)),
            bu: trim(addv(&self.bu, &other.bu)),
            atag: addv(&self.atag, &other.atag),
        }
    }

    /// Total derivative weight carried by the zeta symbols and the A tag.
    pub fn weight(&self) -> u32 {
        let w = |v: &[u32]| -> u32 {
            v.iter()
                .enumerate()
                .map(|(i, &e)| (i as u32 + 1) * e)
                .sum()
        };
        w(&self.su) + w(&self.asym) + w(&self.bu) + self.atag.iter().sum::<u32>()
    }

    pub fn describe(&self) -> String {
        let mut s = String::new();
        let mut put = |name: &str, v: &[u32]| {
            for (j, &e) in v.iter().enumerate() {
                if e > 0 {
                    let _ = write!(s, "(z{}/z)^{}[{}] ", "'".repeat(j + 1), e, name);
                }
            }
        };
        put("1+s+u", &self.su);
        put("1+a+s", &self.asym);
        put("1+b+u", &self.bu);
        if self.has_atag() {
            let _ = write!(s, "A^({:?})", self.atag);
        }
        if s.is_empty() {
            s.push('1');
        }
        s.trim_end().to_string()
    }
}

fn trim(mut v: Vec<u32>) -> Vec<u32> {
    while v.last() == Some(&0) {
        v.pop();
    }
    v
}

/// Polynomial in ratio symbols with exact rational coefficients.
pub type SymPoly = BTreeMap<SymMonomial, BigRational>;

fn sym_add_into(dst: &mut SymPoly, m: SymMonomial, c: BigRational) {
    if c.is_zero() {
        return;
    }
    use std::collections::btree_map::Entry;
    match dst.entry(m) {
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

fn sym_mul(a: &SymPoly, b: &SymPoly) -> SymPoly {
    let mut out = SymPoly::new();
    for (m1, c1) in a {
        for (m2, c2) in b {
            sym_add_into(&mut out, m1.mul(m2), c1 * c2);
        }
    }
    out
}

fn sym_one() -> SymPoly {
    let mut p = SymPoly::new();
    p.insert(SymMonomial::one(), BigRational::one());
    p
}

/// Multivariate Taylor series truncated per variable, with [`SymPoly`]
/// coefficients. Arithmetic never consults coefficients beyond the caps.
#[derive(Debug, Clone)]
pub struct TruncatedSeries {
    /// Per-variable truncation order; variable `i` never exceeds `caps[i]`.
    pub caps: Vec<u8>,
    pub terms: BTreeMap<Vec<u8>, SymPoly>,
}

impl TruncatedSeries {
    pub fn one(caps: Vec<u8>) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(vec![0; caps.len()], sym_one());
        TruncatedSeries { caps, terms }
    }

    pub fn mul(&self, other: &TruncatedSeries) -> TruncatedSeries {
        debug_assert_eq!(self.caps, other.caps);
        let mut terms: BTreeMap<Vec<u8>, SymPoly> = BTreeMap::new();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let mut ok = true;
                let mut e = vec![0u8; self.caps.len()];
                for i in 0..e.len() {
                    let s = e1[i] + e2[i];
                    if s > self.caps[i] {
                        ok = false;
                        break;
                    }
                    e[i] = s;
                }
                if !ok {
                    continue;
                }
                let prod = sym_mul(c1, c2);
                let entry = terms.entry(e).or_default();
                for (m, c) in prod {
                    sym_add_into(entry, m, c);
                }
            }
        }
        terms.retain(|_, p| !p.is_empty());
        TruncatedSeries {
            caps: self.caps.clone(),
            terms,
        }
    }

    pub fn add(&self, other: &TruncatedSeries) -> TruncatedSeries {
        debug_assert_eq!(self.caps, other.caps);
        let mut terms = self.terms.clone();
        for (e, p) in &other.terms {
            let entry = terms.entry(e.clone()).or_default();
            for (m, c) in p {
                sym_add_into(entry, m.clone(), c.clone());
            }
        }
        terms.retain(|_, p| !p.is_empty());
        TruncatedSeries {
            caps: self.caps.clone(),
            terms,
        }
    }

    /// Multiplicative inverse; the constant term must be the unit.
    pub fn invert(&self) -> Result<TruncatedSeries> {
        let zero = vec![0u8; self.caps.len()];
        let c0 = self.terms.get(&zero).ok_or(Error::Inversion)?;
        if c0 != &sym_one() {
            return Err(Error::Inversion);
        }
        // X = 1 - S has no constant term and is nilpotent under the caps:
        // S^{-1} = sum_k X^k
        let max_total: usize = self.caps.iter().map(|&c| c as usize).sum();
        let mut x = TruncatedSeries {
            caps: self.caps.clone(),
            terms: self.terms.clone(),
        };
        x.terms.remove(&zero);
        for p in x.terms.values_mut() {
            for c in p.values_mut() {
                *c = -c.clone();
            }
        }
        let mut acc = TruncatedSeries::one(self.caps.clone());
        let mut pow = TruncatedSeries::one(self.caps.clone());
        for _ in 0..max_total {
            pow = pow.mul(&x);
            if pow.terms.is_empty() {
                break;
            }
            acc = acc.add(&pow);
        }
        Ok(acc)
    }

    pub fn coefficient(&self, exps: &[u8]) -> SymPoly {
        self.terms.get(exps).cloned().unwrap_or_default()
    }
}

/// Series of `(zeta(1+base+v)/zeta(1+base))^{sign*power}` where `v` is the
/// sum of the shift variables in `vars`; `sign = -1` means a denominator
/// factor, realized by series inversion.
pub fn shifted_zeta_factor(
    base: RatioBase,
    vars: &[usize],
    sign: i32,
    power: u32,
    caps: &[u8],
) -> Result<TruncatedSeries> {
    if power == 0 {
        return Err(Error::Domain("shifted factor needs power >= 1".into()));
    }
    let maxdeg: usize = vars.iter().map(|&i| caps[i] as usize).sum();
    // univariate normalized ratio: u[m] = (zeta^{(m)}/zeta)(1+base) / m!
    let mut univ: Vec<SymPoly> = Vec::with_capacity(maxdeg + 1);
    univ.push(sym_one());
    for m in 1..=maxdeg {
        let mut mono = SymMonomial::one();
        let v = match base {
            RatioBase::Su => &mut mono.su,
            RatioBase::As => &mut mono.asym,
            RatioBase::Bu => &mut mono.bu,
        };
        v.resize(m, 0);
        v[m - 1] = 1;
        let mut p = SymPoly::new();
        p.insert(mono, BigRational::new(BigInt::one(), factorial(m as u32)));
        univ.push(p);
    }
    if sign < 0 {
        univ = univ_invert(&univ);
    }
    let univ = univ_pow(&univ, power as usize, maxdeg);
    // substitute v = sum of the variables in `vars`
    let mut terms: BTreeMap<Vec<u8>, SymPoly> = BTreeMap::new();
    let mut exps = vec![0u8; caps.len()];
    distribute(&univ, vars, 0, 0, maxdeg, caps, &mut exps, &mut terms);
    Ok(TruncatedSeries {
        caps: caps.to_vec(),
        terms,
    })
}

/// Walk all exponent assignments of the variables in `vars` and deposit
/// `univ[m] * m!/prod(e_i!)` at each one.
#[allow(clippy::too_many_arguments)]
fn distribute(
    univ: &[SymPoly],
    vars: &[usize],
    pos: usize,
    used: usize,
    maxdeg: usize,
    caps: &[u8],
    exps: &mut Vec<u8>,
    out: &mut BTreeMap<Vec<u8>, SymPoly>,
) {
    if pos == vars.len() {
        let m = used;
        if univ[m].is_empty() {
            return;
        }
        let mut mult = BigRational::from(factorial(m as u32));
        for &i in vars {
            mult /= BigRational::from(factorial(exps[i] as u32));
        }
        let entry = out.entry(exps.clone()).or_default();
        for (mono, c) in &univ[m] {
            sym_add_into(entry, mono.clone(), c * &mult);
        }
        return;
    }
    let var = vars[pos];
    for e in 0..=caps[var] as usize {
        if used + e > maxdeg {
            break;
        }
        exps[var] = e as u8;
        distribute(univ, vars, pos + 1, used + e, maxdeg, caps, exps, out);
    }
    exps[var] = 0;
}

fn univ_mul(a: &[SymPoly], b: &[SymPoly], maxdeg: usize) -> Vec<SymPoly> {
    let mut out = vec![SymPoly::new(); maxdeg + 1];
    for (i, ca) in a.iter().enumerate().take(maxdeg + 1) {
        if ca.is_empty() {
            continue;
        }
        for (j, cb) in b.iter().enumerate() {
            if i + j > maxdeg {
                break;
            }
            if cb.is_empty() {
                continue;
            }
            let prod = sym_mul(ca, cb);
            for (m, c) in prod {
                sym_add_into(&mut out[i + j], m, c);
            }
        }
    }
    out
}

fn univ_pow(a: &[SymPoly], p: usize, maxdeg: usize) -> Vec<SymPoly> {
    let mut out = vec![SymPoly::new(); maxdeg + 1];
    out[0] = sym_one();
    for _ in 0..p {
        out = univ_mul(&out, a, maxdeg);
    }
    out
}

/// Invert a univariate series with unit constant term:
/// `b_0 = 1`, `b_n = -sum_{k>=1} a_k b_{n-k}`.
fn univ_invert(a: &[SymPoly]) -> Vec<SymPoly> {
    let n = a.len() - 1;
    let mut b: Vec<SymPoly> = vec![sym_one()];
    for m in 1..=n {
        let mut acc = SymPoly::new();
        for k in 1..=m {
            let prod = sym_mul(&a[k], &b[m - k]);
            for (mono, c) in prod {
                sym_add_into(&mut acc, mono, -c);
            }
        }
        b.push(acc);
    }
    b
}

/// One mollifier-pair residue expansion: the `Psi(k,l,m)`-weighted monomial
/// list, together with the structural metadata the assembly stage needs.
#[derive(Debug, Clone)]
pub struct RatioExpansion {
    pub d: u32,
    /// z-side truncation exponents `(l_1..l_d)`.
    pub l: Vec<u32>,
    /// w-side truncation exponents.
    pub lbar: Vec<u32>,
    /// `(-1)^{sum q l_q + sum q lbar_q}`, carried separately so the term
    /// coefficients match the printed sign-stripped displays.
    pub sign_prefactor: i32,
    pub terms: BTreeMap<SymMonomial, BigRational>,
}

impl RatioExpansion {
    /// Weighted truncation order `sum q l_q + sum q lbar_q`; every monomial
    /// in the expansion has exactly this symbol weight.
    pub fn weighted_order(&self) -> u32 {
        let w = |v: &[u32]| -> u32 {
            v.iter()
                .enumerate()
                .map(|(i, &e)| (i as u32 + 1) * e)
                .sum()
        };
        w(&self.l) + w(&self.lbar)
    }

    pub fn coefficient(&self, mono: &SymMonomial) -> BigRational {
        self.terms.get(mono).cloned().unwrap_or_else(BigRational::zero)
    }

    /// Exchange the two mollifier sides: swaps l/lbar and the AS/BU symbol
    /// slots of every monomial.
    pub fn swapped(&self) -> RatioExpansion {
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| {
                (
                    SymMonomial {
                        su: m.su.clone(),
                        asym: m.bu.clone(),
                        bu: m.asym.clone(),
                        atag: swap_atag(&m.atag, &self.l, &self.lbar),
                    },
                    c.clone(),
                )
            })
            .collect();
        RatioExpansion {
            d: self.d,
            l: self.lbar.clone(),
            lbar: self.l.clone(),
            sign_prefactor: self.sign_prefactor,
            terms,
        }
    }
}

fn swap_atag(atag: &[u32], l: &[u32], lbar: &[u32]) -> Vec<u32> {
    if atag.iter().all(|&e| e == 0) {
        return Vec::new();
    }
    let nz: usize = l.iter().sum::<u32>() as usize;
    let nw: usize = lbar.iter().sum::<u32>() as usize;
    let mut out = vec![0u32; atag.len()];
    for (i, &e) in atag.iter().enumerate() {
        let j = if i < nz { nw + i } else { i - nz };
        out[j] = e;
    }
    out
}

/// Contour variables of an expansion: Lambda-order `q` (pole order `q+1`)
/// for each variable, z-side first.
pub fn variable_orders(l: &[u32], lbar: &[u32]) -> (Vec<u8>, usize) {
    let mut caps = Vec::new();
    for (q, &cnt) in l.iter().enumerate() {
        for _ in 0..cnt {
            caps.push(q as u8 + 1);
        }
    }
    let nz = caps.len();
    for (q, &cnt) in lbar.iter().enumerate() {
        for _ in 0..cnt {
            caps.push(q as u8 + 1);
        }
    }
    (caps, nz)
}

/// Expand the moment integrand for truncations `l` (z side) and `lbar`
/// (w side) of the degree-`d` mollifier.
///
/// The output collects the coefficient of the top multi-residue of the
/// normalized ratio product; each contour variable of Lambda-order `q`
/// contributes its Cauchy factor `q!`, so the coefficients match the
/// printed integer displays. When `include_a` is false the arithmetical
/// factor is replaced by 1; when true, its formal Taylor coefficients
/// appear as derivative-tagged monomials.
pub fn expand_integrand(
    d: u32,
    l: &[u32],
    lbar: &[u32],
    include_a: bool,
) -> Result<RatioExpansion> {
    if l.len() != d as usize || lbar.len() != d as usize {
        return Err(Error::Config(format!(
            "expected {} exponents per side, got {} and {}",
            d,
            l.len(),
            lbar.len()
        )));
    }
    let (caps, nz) = variable_orders(l, lbar);
    let nvars = caps.len();
    let weighted: u32 = caps.iter().map(|&c| c as u32).sum();
    if weighted > 12 {
        let est: f64 = caps.iter().map(|&c| c as f64 + 1.0).product();
        return Err(Error::Resource(format!(
            "weighted truncation {weighted} too large (~{est:.0} multi-indices)"
        )));
    }
    let nw = nvars - nz;
    let big_l = nz as u32;
    let big_lbar = nw as u32;

    let mut series = TruncatedSeries::one(caps.clone());
    // pair factors zeta(1+s+u+z_i+w_j)
    for i in 0..nz {
        for j in 0..nw {
            let f = shifted_zeta_factor(RatioBase::Su, &[i, nz + j], 1, 1, &caps)?;
            series = series.mul(&f);
        }
    }
    // z-side factors zeta(1+a+s+z_i) / zeta(1+s+u+z_i)^{Lbar+1}
    for i in 0..nz {
        series = series.mul(&shifted_zeta_factor(RatioBase::As, &[i], 1, 1, &caps)?);
        series = series.mul(&shifted_zeta_factor(
            RatioBase::Su,
            &[i],
            -1,
            big_lbar + 1,
            &caps,
        )?);
    }
    // w-side factors zeta(1+b+u+w_j) / zeta(1+s+u+w_j)^{L+1}
    for j in 0..nw {
        series = series.mul(&shifted_zeta_factor(RatioBase::Bu, &[nz + j], 1, 1, &caps)?);
        series = series.mul(&shifted_zeta_factor(
            RatioBase::Su,
            &[nz + j],
            -1,
            big_l + 1,
            &caps,
        )?);
    }
    if include_a {
        series = series.mul(&arithmetical_factor_series(&caps));
    }

    // the top coefficient, times the Cauchy factorials q! per variable
    let mut qfact = BigRational::one();
    for &c in &caps {
        qfact *= BigRational::from(factorial(c as u32));
    }
    let top = series.coefficient(&caps);
    let mut terms = BTreeMap::new();
    for (m, c) in top {
        let v = c * &qfact;
        if !v.is_zero() {
            terms.insert(m, v);
        }
    }
    let sign = if weighted % 2 == 0 { 1 } else { -1 };
    Ok(RatioExpansion {
        d,
        l: l.to_vec(),
        lbar: lbar.to_vec(),
        sign_prefactor: sign,
        terms,
    })
}

/// Formal Taylor series of the arithmetical factor:
/// `sum_mu A^(mu) prod v^mu / mu!` with `A^(0)` the unit.
fn arithmetical_factor_series(caps: &[u8]) -> TruncatedSeries {
    let mut terms: BTreeMap<Vec<u8>, SymPoly> = BTreeMap::new();
    let nvars = caps.len();
    let mut exps = vec![0u8; nvars];
    fn rec(
        i: usize,
        caps: &[u8],
        exps: &mut Vec<u8>,
        terms: &mut BTreeMap<Vec<u8>, SymPoly>,
    ) {
        if i == caps.len() {
            let mut mono = SymMonomial::one();
            let mut coef = BigRational::one();
            if exps.iter().any(|&e| e > 0) {
                mono.atag = exps.iter().map(|&e| e as u32).collect();
                for &e in exps.iter() {
                    coef /= BigRational::from(factorial(e as u32));
                }
            }
            let mut p = SymPoly::new();
            p.insert(mono, coef);
            terms.insert(exps.clone(), p);
            return;
        }
        for e in 0..=caps[i] {
            exps[i] = e;
            rec(i + 1, caps, exps, terms);
        }
        exps[i] = 0;
    }
    rec(0, caps, &mut exps, &mut terms);
    TruncatedSeries {
        caps: caps.to_vec(),
        terms,
    }
}

/// Evaluate an expansion numerically. Every ratio symbol that occurs must
/// have a value; derivative-tagged terms are rejected.
pub fn numeric_eval(
    expansion: &RatioExpansion,
    values: &BTreeMap<RatioSymbol, Complex64>,
) -> Result<Complex64> {
    let mut acc = Complex64::new(0.0, 0.0);
    for (mono, coef) in &expansion.terms {
        if mono.has_atag() {
            return Err(Error::MissingSymbol(format!(
                "term carries arithmetical-factor tag {:?}",
                mono.atag
            )));
        }
        let mut prod = Complex64::new(rational_to_f64(coef), 0.0);
        for (base, exps) in [
            (RatioBase::Su, &mono.su),
            (RatioBase::As, &mono.asym),
            (RatioBase::Bu, &mono.bu),
        ] {
            for (j, &e) in exps.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let sym = RatioSymbol {
                    base,
                    order: j as u32 + 1,
                };
                let v = values
                    .get(&sym)
                    .ok_or_else(|| Error::MissingSymbol(format!("{sym:?}")))?;
                prod *= v.powu(e);
            }
        }
        acc += prod;
    }
    Ok(acc)
}

pub fn rational_to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// Serialize terms for the CLI JSON output.
pub fn expansion_to_json(e: &RatioExpansion) -> serde_json::Value {
    let terms: Vec<serde_json::Value> = e
        .terms
        .iter()
        .map(|(m, c)| {
            serde_json::json!({
                "coeff": c.to_string(),
                "su": m.su,
                "as": m.asym,
                "bu": m.bu,
                "aTag": m.atag,
            })
        })
        .collect();
    serde_json::json!({
        "d": e.d,
        "l": e.l,
        "lbar": e.lbar,
        "signPrefactor": e.sign_prefactor,
        "terms": terms,
    })
}

pub fn is_negative(r: &BigRational) -> bool {
    r.is_negative()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: i64) -> BigRational {
        BigRational::from(BigInt::from(n))
    }

    fn mono(su: &[u32], asym: &[u32], bu: &[u32]) -> SymMonomial {
        SymMonomial {
            su: su.to_vec(),
            asym: asym.to_vec(),
            bu: bu.to_vec(),
            atag: vec![],
        }
    }

    #[test]
    fn first_order_factor() {
        // one variable, cap 1, numerator power 1: 1 + (z'/z) v
        let f = shifted_zeta_factor(RatioBase::As, &[0], 1, 1, &[1]).unwrap();
        assert_eq!(f.coefficient(&[0]), sym_one());
        let c1 = f.coefficient(&[1]);
        assert_eq!(c1.len(), 1);
        let (m, c) = c1.iter().next().unwrap();
        assert_eq!(m, &mono(&[], &[1], &[]));
        assert_eq!(c, &rat(1));
    }

    #[test]
    fn inverted_factor_second_order() {
        // denominator factor, cap 2: coefficient of v^2 is (z'/z)^2 - z''/(2 z)
        let f = shifted_zeta_factor(RatioBase::Su, &[0], -1, 1, &[2]).unwrap();
        let c2 = f.coefficient(&[2]);
        assert_eq!(c2.get(&mono(&[2], &[], &[])), Some(&rat(1)));
        assert_eq!(
            c2.get(&mono(&[0, 1], &[], &[])),
            Some(&BigRational::new(BigInt::from(-1), BigInt::from(2)))
        );
        assert_eq!(c2.len(), 2);
    }

    #[test]
    fn square_of_factor_is_power_two() {
        let caps = vec![3u8];
        let f1 = shifted_zeta_factor(RatioBase::Bu, &[0], 1, 1, &caps).unwrap();
        let f2 = shifted_zeta_factor(RatioBase::Bu, &[0], 1, 2, &caps).unwrap();
        let sq = f1.mul(&f1);
        for e in 0..=3u8 {
            assert_eq!(sq.coefficient(&[e]), f2.coefficient(&[e]), "order {e}");
        }
    }

    #[test]
    fn inverse_times_series_is_one() {
        let caps = vec![2u8, 1u8];
        let f = shifted_zeta_factor(RatioBase::Su, &[0, 1], 1, 2, &caps).unwrap();
        let inv = f.invert().unwrap();
        let prod = f.mul(&inv);
        assert_eq!(prod.coefficient(&[0, 0]), sym_one());
        for (e, p) in &prod.terms {
            if e.iter().any(|&x| x > 0) {
                assert!(p.is_empty(), "nonzero coefficient at {e:?}");
            }
        }
    }

    #[test]
    fn four_term_bracket() {
        let e = expand_integrand(1, &[1], &[1], false).unwrap();
        assert_eq!(e.terms.len(), 4);
        assert_eq!(e.coefficient(&mono(&[0, 1], &[], &[])), rat(1));
        assert_eq!(e.coefficient(&mono(&[], &[1], &[1])), rat(1));
        assert_eq!(e.coefficient(&mono(&[1], &[], &[1])), rat(-1));
        assert_eq!(e.coefficient(&mono(&[1], &[1], &[])), rat(-1));
        assert_eq!(e.sign_prefactor, 1);
    }

    #[test]
    fn bracket_with_arithmetical_tags() {
        let e = expand_integrand(1, &[1], &[1], true).unwrap();
        // untagged part identical to the A = 1 expansion
        let plain = expand_integrand(1, &[1], &[1], false).unwrap();
        for (m, c) in &plain.terms {
            assert_eq!(&e.coefficient(m), c);
        }
        // tagged parts: A^{(1,0)} {(z'/z)(BU) - (z'/z)(SU)},
        //               A^{(0,1)} {(z'/z)(AS) - (z'/z)(SU)}, A^{(1,1)}
        let tag = |t: &[u32], su: &[u32], asym: &[u32], bu: &[u32]| SymMonomial {
            su: su.to_vec(),
            asym: asym.to_vec(),
            bu: bu.to_vec(),
            atag: t.to_vec(),
        };
        assert_eq!(e.coefficient(&tag(&[1, 0], &[], &[], &[1])), rat(1));
        assert_eq!(e.coefficient(&tag(&[1, 0], &[1], &[], &[])), rat(-1));
        assert_eq!(e.coefficient(&tag(&[0, 1], &[], &[1], &[])), rat(1));
        assert_eq!(e.coefficient(&tag(&[0, 1], &[1], &[], &[])), rat(-1));
        assert_eq!(e.coefficient(&tag(&[1, 1], &[], &[], &[])), rat(1));
        assert_eq!(e.terms.len(), 4 + 5);
    }

    #[test]
    fn swap_symmetry() {
        for (l, lbar) in [(vec![2u32], vec![1u32]), (vec![1, 1], vec![1, 0])] {
            let e = expand_integrand(l.len() as u32, &l, &lbar, false).unwrap();
            let back = expand_integrand(l.len() as u32, &lbar, &l, false).unwrap();
            let swapped = e.swapped();
            assert_eq!(swapped.terms, back.terms);
        }
    }

    #[test]
    fn constant_term_is_unit() {
        // prefactor bookkeeping: the empty monomial coefficient is 1, so the
        // normalized integrand at zero shifts with A(0;a,b) = 1 equals 1
        for (l, lbar) in [
            (vec![1u32], vec![1u32]),
            (vec![2], vec![2]),
            (vec![0], vec![2]),
        ] {
            let (caps, nz) = variable_orders(&l, &lbar);
            let mut series = TruncatedSeries::one(caps.clone());
            let nw = caps.len() - nz;
            for i in 0..nz {
                for j in 0..nw {
                    series = series
                        .mul(&shifted_zeta_factor(RatioBase::Su, &[i, nz + j], 1, 1, &caps).unwrap());
                }
            }
            for i in 0..nz {
                series =
                    series.mul(&shifted_zeta_factor(RatioBase::As, &[i], 1, 1, &caps).unwrap());
                series = series
                    .mul(&shifted_zeta_factor(RatioBase::Su, &[i], -1, nw as u32 + 1, &caps).unwrap());
            }
            for j in 0..nw {
                series = series
                    .mul(&shifted_zeta_factor(RatioBase::Bu, &[nz + j], 1, 1, &caps).unwrap());
                series = series
                    .mul(&shifted_zeta_factor(RatioBase::Su, &[nz + j], -1, nz as u32 + 1, &caps).unwrap());
            }
            let c0 = series.coefficient(&vec![0u8; caps.len()]);
            assert_eq!(c0, sym_one());
        }
    }

    #[test]
    fn weighted_grading_holds() {
        for (l, lbar) in [(vec![2u32], vec![2u32]), (vec![1, 1], vec![1, 1])] {
            let e = expand_integrand(l.len() as u32, &l, &lbar, true).unwrap();
            let w = e.weighted_order();
            for m in e.terms.keys() {
                assert_eq!(m.weight(), w, "monomial {m:?}");
            }
        }
    }

    #[test]
    fn infeasible_size_is_rejected() {
        let err = expand_integrand(2, &[3, 2], &[3, 2], false).unwrap_err();
        assert!(matches!(err, Error::Resource(_)));
    }

    #[test]
    fn numeric_eval_trivial() {
        let empty = RatioExpansion {
            d: 1,
            l: vec![1],
            lbar: vec![1],
            sign_prefactor: 1,
            terms: BTreeMap::new(),
        };
        let vals = BTreeMap::new();
        assert_eq!(
            numeric_eval(&empty, &vals).unwrap(),
            Complex64::new(0.0, 0.0)
        );
        // all symbols zero: only the constant monomial survives
        let mut one_term = BTreeMap::new();
        one_term.insert(SymMonomial::one(), rat(7));
        let e = RatioExpansion {
            d: 1,
            l: vec![1],
            lbar: vec![1],
            sign_prefactor: 1,
            terms: one_term,
        };
        assert_eq!(numeric_eval(&e, &vals).unwrap(), Complex64::new(7.0, 0.0));
    }
}
