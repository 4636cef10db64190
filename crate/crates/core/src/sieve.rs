//! Dense tables of arithmetic functions on `1..=n_max` and Dirichlet
//! convolutions between them.
//!
//! Tables are the currency every later stage trades in: the mollifier
//! coefficients are convolutions of the Möbius function with powers of the
//! generalized von Mangoldt functions, and the Euler–Maclaurin checks sum
//! convolutions of `d_k` with the same powers.

use std::io::{Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Values of one arithmetic function on `1..=n_max`.
///
/// `values[0]` holds `f(1)`. Integer-valued functions (`mu`, `mu^2`, `d_k`)
/// store exact small integers in the `f64` slots.
#[derive(Debug, Clone, PartialEq)]
pub struct FnTable {
    pub n_max: usize,
    pub values: Vec<f64>,
    pub label: String,
}

impl FnTable {
    pub fn new(n_max: usize, label: impl Into<String>) -> Self {
        FnTable {
            n_max,
            values: vec![0.0; n_max],
            label: label.into(),
        }
    }

    /// `f(n)`; `n` is 1-based.
    #[inline]
    pub fn get(&self, n: usize) -> f64 {
        self.values[n - 1]
    }

    #[inline]
    pub fn set(&mut self, n: usize, v: f64) {
        self.values[n - 1] = v;
    }

    /// Pointwise product, used for squarefree restriction.
    pub fn pointwise_mul(&self, other: &FnTable, label: impl Into<String>) -> Result<FnTable> {
        if self.n_max != other.n_max {
            return Err(Error::DimensionMismatch(format!(
                "{} vs {}",
                self.n_max, other.n_max
            )));
        }
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| a * b)
            .collect();
        Ok(FnTable {
            n_max: self.n_max,
            values,
            label: label.into(),
        })
    }
}

/// Identity element of Dirichlet convolution: 1 at n=1, else 0.
pub fn delta_table(n_max: usize) -> FnTable {
    let mut t = FnTable::new(n_max, "delta");
    t.set(1, 1.0);
    t
}

/// Constant one function (`d_1`).
pub fn one_table(n_max: usize) -> FnTable {
    FnTable {
        n_max,
        values: vec![1.0; n_max],
        label: "one".into(),
    }
}

/// Smallest-prime-factor table, shared backbone of the sieves below.
fn spf(n_max: usize) -> Vec<u32> {
    let mut spf = vec![0u32; n_max + 1];
    for i in 2..=n_max {
        if spf[i] == 0 {
            let mut j = i;
            while j <= n_max {
                if spf[j] == 0 {
                    spf[j] = i as u32;
                }
                j += i;
            }
        }
    }
    spf
}

/// Möbius function.
pub fn mobius_sieve(n_max: usize) -> FnTable {
    let spf = spf(n_max);
    let mut t = FnTable::new(n_max, "mu");
    if n_max >= 1 {
        t.set(1, 1.0);
    }
    for n in 2..=n_max {
        let mut m = n;
        let mut sign = 1.0f64;
        let mut squarefree = true;
        while m > 1 {
            let p = spf[m] as usize;
            m /= p;
            if m % p == 0 {
                squarefree = false;
                break;
            }
            sign = -sign;
        }
        t.set(n, if squarefree { sign } else { 0.0 });
    }
    t
}

/// Indicator of squarefree integers.
pub fn mobius_sq_sieve(n_max: usize) -> FnTable {
    let mut t = mobius_sieve(n_max);
    for v in &mut t.values {
        *v = *v * *v;
    }
    t.label = "mu^2".into();
    t
}

/// Von Mangoldt function: `log p` at prime powers `p^l`, else 0.
pub fn vonmangoldt_sieve(n_max: usize) -> FnTable {
    let spf = spf(n_max);
    let mut t = FnTable::new(n_max, "Lambda");
    for n in 2..=n_max {
        let p = spf[n] as usize;
        let mut m = n;
        while m % p == 0 {
            m /= p;
        }
        if m == 1 {
            t.set(n, (p as f64).ln());
        }
    }
    t
}

/// `Lambda_{L,k}(n) = Lambda(n) * log^k n`, supported on prime powers.
pub fn lambda_log_sieve(k: u32, n_max: usize) -> FnTable {
    let mut t = vonmangoldt_sieve(n_max);
    if k > 0 {
        for n in 2..=n_max {
            let v = t.get(n);
            if v != 0.0 {
                t.set(n, v * (n as f64).ln().powi(k as i32));
            }
        }
    }
    t.label = format!("Lambda_L_{k}");
    t
}

/// `log^k n` (with `log^0 = 1`).
pub fn log_power_sieve(k: u32, n_max: usize) -> FnTable {
    let mut t = FnTable::new(n_max, format!("log^{k}"));
    for n in 1..=n_max {
        t.set(
            n,
            if k == 0 {
                1.0
            } else {
                (n as f64).ln().powi(k as i32)
            },
        );
    }
    t
}

/// k-fold divisor function `d_k`, exact integers; `d_1 = 1`.
pub fn dk_sieve(k: u32, n_max: usize) -> Result<FnTable> {
    if k == 0 {
        return Err(Error::Domain("d_0 is the delta function; use delta_table".into()));
    }
    let mut t = one_table(n_max);
    for _ in 1..k {
        t = dirichlet_convolve(&t, &one_table(n_max))?;
    }
    t.label = format!("d_{k}");
    Ok(t)
}

/// Generalized von Mangoldt function `Lambda_k = mu * log^k`, computed by
/// the recursion `Lambda_{k+1} = Lambda_k log + Lambda * Lambda_k` seeded
/// with `Lambda_1 = Lambda`. Cost O(k N log N); the definitional route
/// through `mu * log^k` is kept as a test oracle.
pub fn lambda_k_sieve(k: u32, n_max: usize) -> Result<FnTable> {
    if k == 0 {
        return Err(Error::Domain(
            "Lambda_0 is undefined; the convolution identity is delta_table".into(),
        ));
    }
    let lambda = vonmangoldt_sieve(n_max);
    let mut cur = lambda.clone();
    for j in 1..k {
        let conv = dirichlet_convolve(&lambda, &cur)?;
        let mut next = FnTable::new(n_max, format!("Lambda_{}", j + 1));
        for n in 1..=n_max {
            let logn = if n == 1 { 0.0 } else { (n as f64).ln() };
            next.set(n, cur.get(n) * logn + conv.get(n));
        }
        cur = next;
    }
    cur.label = format!("Lambda_{k}");
    Ok(cur)
}

/// Dirichlet convolution `h(n) = sum_{ab=n} f(a) g(b)`.
pub fn dirichlet_convolve(f: &FnTable, g: &FnTable) -> Result<FnTable> {
    if f.n_max != g.n_max {
        return Err(Error::DimensionMismatch(format!(
            "convolution of tables with n_max {} and {}",
            f.n_max, g.n_max
        )));
    }
    let n_max = f.n_max;
    let mut h = FnTable::new(n_max, format!("({} * {})", f.label, g.label));
    for a in 1..=n_max {
        let fa = f.get(a);
        if fa == 0.0 {
            continue;
        }
        let mut ab = a;
        let mut b = 1;
        while ab <= n_max {
            let gb = g.get(b);
            if gb != 0.0 {
                h.values[ab - 1] += fa * gb;
            }
            b += 1;
            ab += a;
        }
    }
    Ok(h)
}

/// Index of one mollifier convolution:
/// `mu * Lambda_1^{*l1} * Lambda_2^{*l2} * ... * Lambda_d^{*ld}`,
/// optionally restricted to squarefree support.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConvolutionSpec {
    pub d: u32,
    pub exponents: Vec<u32>,
    pub squarefree_restricted: bool,
}

impl ConvolutionSpec {
    pub fn new(exponents: Vec<u32>, squarefree_restricted: bool) -> Self {
        ConvolutionSpec {
            d: exponents.len() as u32,
            exponents,
            squarefree_restricted,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.d as usize != self.exponents.len() {
            return Err(Error::Config(format!(
                "spec degree {} does not match {} exponents",
                self.d,
                self.exponents.len()
            )));
        }
        Ok(())
    }

    /// Weighted truncation order `sum_r r*l_r`, the log-power normalization.
    pub fn weighted_order(&self) -> u32 {
        self.exponents
            .iter()
            .enumerate()
            .map(|(i, &l)| (i as u32 + 1) * l)
            .sum()
    }

    pub fn describe(&self) -> String {
        format!(
            "d={},l=[{}]{}",
            self.d,
            self.exponents
                .iter()
                .map(|l| l.to_string())
                .collect::<Vec<_>>()
                .join(","),
            if self.squarefree_restricted { ",sqfree" } else { "" }
        )
    }
}

/// Table of `(mu * Lambda_1^{*l1} * ... * Lambda_d^{*ld})(n)`.
///
/// Built by repeated convolution in a fixed order (mu first, then ascending
/// q, repeated `l_q` times within q) so results are bit-reproducible.
pub fn convolution_table(spec: &ConvolutionSpec, n_max: usize) -> Result<FnTable> {
    spec.validate()?;
    let mut t = mobius_sieve(n_max);
    for (i, &lq) in spec.exponents.iter().enumerate() {
        if lq == 0 {
            continue;
        }
        let lam_q = lambda_k_sieve(i as u32 + 1, n_max)?;
        for _ in 0..lq {
            t = dirichlet_convolve(&t, &lam_q)?;
        }
    }
    if spec.squarefree_restricted {
        t = t.pointwise_mul(&mobius_sq_sieve(n_max), "restricted")?;
    }
    t.label = spec.describe();
    Ok(t)
}

/// Single value of the convolution in [`convolution_table`], computed by
/// recursive enumeration of ordered factorizations. Exponential cost;
/// intended as an independent oracle for small `n`.
pub fn point_convolve(spec: &ConvolutionSpec, n: usize) -> Result<f64> {
    spec.validate()?;
    if n == 0 {
        return Err(Error::Domain("point_convolve needs n >= 1".into()));
    }
    if spec.squarefree_restricted && !is_squarefree(n) {
        return Ok(0.0);
    }
    // factor list: one entry per convolution factor beyond mu
    let mut orders = Vec::new();
    for (i, &lq) in spec.exponents.iter().enumerate() {
        for _ in 0..lq {
            orders.push(i as u32 + 1);
        }
    }
    Ok(point_rec(n, &orders))
}

fn point_rec(n: usize, orders: &[u32]) -> f64 {
    match orders.split_first() {
        None => mobius_point(n),
        Some((&q, rest)) => {
            let mut acc = 0.0;
            for b in divisors(n) {
                let lam = lambda_q_point(q, b);
                if lam != 0.0 {
                    acc += point_rec(n / b, rest) * lam;
                }
            }
            acc
        }
    }
}

fn divisors(n: usize) -> Vec<usize> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1;
    while d * d <= n {
        if n % d == 0 {
            small.push(d);
            if d * d != n {
                large.push(n / d);
            }
        }
        d += 1;
    }
    large.reverse();
    small.extend(large);
    small
}

fn factorize(n: usize) -> Vec<(usize, u32)> {
    let mut out = Vec::new();
    let mut m = n;
    let mut p = 2;
    while p * p <= m {
        if m % p == 0 {
            let mut e = 0;
            while m % p == 0 {
                m /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += 1;
    }
    if m > 1 {
        out.push((m, 1));
    }
    out
}

fn is_squarefree(n: usize) -> bool {
    factorize(n).iter().all(|&(_, e)| e == 1)
}

fn mobius_point(n: usize) -> f64 {
    let f = factorize(n);
    if f.iter().any(|&(_, e)| e > 1) {
        0.0
    } else if f.len() % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// `Lambda_q(n)` by the divisor sum `sum_{e|n} mu(e) log^q(n/e)`.
fn lambda_q_point(q: u32, n: usize) -> f64 {
    if n == 1 {
        return 0.0;
    }
    let mut acc = 0.0;
    for e in divisors(n) {
        let mu = mobius_point(e);
        if mu != 0.0 {
            acc += mu * ((n / e) as f64).ln().powi(q as i32);
        }
    }
    acc
}

// ---------------------------------------------------------------------------
// Binary sieve cache.
// Layout: 8-byte magic, u32 version, u32 reserved, u64 n_max, u32 d,
// d x u32 exponents, u8 squarefree flag, then n_max little-endian f64.
// ---------------------------------------------------------------------------

const CACHE_MAGIC: &[u8; 8] = b"ZMOLLSV\0";
const CACHE_VERSION: u32 = 1;

pub fn write_cache(path: &Path, spec: &ConvolutionSpec, table: &FnTable) -> Result<()> {
    let mut w = std::io::BufWriter::new(std::fs::File::create(path)?);
    w.write_all(CACHE_MAGIC)?;
    w.write_all(&CACHE_VERSION.to_le_bytes())?;
    w.write_all(&0u32.to_le_bytes())?;
    w.write_all(&(table.n_max as u64).to_le_bytes())?;
    w.write_all(&spec.d.to_le_bytes())?;
    for &e in &spec.exponents {
        w.write_all(&e.to_le_bytes())?;
    }
    w.write_all(&[spec.squarefree_restricted as u8])?;
    for v in &table.values {
        w.write_all(&v.to_le_bytes())?;
    }
    Ok(())
}

pub fn read_cache(path: &Path) -> Result<(ConvolutionSpec, FnTable)> {
    let mut r = std::io::BufReader::new(std::fs::File::open(path)?);
    let mut magic = [0u8; 8];
    r.read_exact(&mut magic)?;
    if &magic != CACHE_MAGIC {
        return Err(Error::Cache("bad magic".into()));
    }
    let mut b4 = [0u8; 4];
    r.read_exact(&mut b4)?;
    if u32::from_le_bytes(b4) != CACHE_VERSION {
        return Err(Error::Cache("unsupported version".into()));
    }
    r.read_exact(&mut b4)?;
    let mut b8 = [0u8; 8];
    r.read_exact(&mut b8)?;
    let n_max = u64::from_le_bytes(b8) as usize;
    r.read_exact(&mut b4)?;
    let d = u32::from_le_bytes(b4);
    let mut exponents = Vec::with_capacity(d as usize);
    for _ in 0..d {
        r.read_exact(&mut b4)?;
        exponents.push(u32::from_le_bytes(b4));
    }
    let mut flag = [0u8; 1];
    r.read_exact(&mut flag)?;
    let spec = ConvolutionSpec::new(exponents, flag[0] != 0);
    let mut values = Vec::with_capacity(n_max);
    for _ in 0..n_max {
        r.read_exact(&mut b8)?;
        values.push(f64::from_le_bytes(b8));
    }
    let table = FnTable {
        n_max,
        values,
        label: spec.describe(),
    };
    Ok((spec, table))
}

/// Load the table from `dir` if a cache file exists, otherwise build it and
/// persist. Results are identical with caching disabled.
pub fn convolution_table_cached(
    spec: &ConvolutionSpec,
    n_max: usize,
    dir: Option<&Path>,
) -> Result<FnTable> {
    if let Some(dir) = dir {
        let name = format!(
            "sieve_{}_n{}.bin",
            spec.describe().replace(['[', ']', ','], "_"),
            n_max
        );
        let path = dir.join(name);
        if path.exists() {
            let (cached_spec, table) = read_cache(&path)?;
            if &cached_spec == spec && table.n_max == n_max {
                return Ok(table);
            }
        }
        let table = convolution_table(spec, n_max)?;
        std::fs::create_dir_all(dir)?;
        write_cache(&path, spec, &table)?;
        return Ok(table);
    }
    convolution_table(spec, n_max)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn assert_close(a: f64, b: f64, tol: f64) {
        assert!((a - b).abs() <= tol, "{a} vs {b}");
    }

    #[test]
    fn mobius_definition_cases() {
        let mu = mobius_sieve(20);
        assert_eq!(mu.get(1), 1.0);
        assert_eq!(mu.get(6), 1.0);
        assert_eq!(mu.get(12), 0.0);
    }

    #[test]
    fn vonmangoldt_prime_power_cases() {
        let l = vonmangoldt_sieve(10);
        assert_close(l.get(8), 2.0f64.ln(), 1e-15);
        assert_eq!(l.get(6), 0.0);
    }

    #[test]
    fn dk_divisor_oracle() {
        // d_2(12) by divisor enumeration: 12 = 1*12, 2*6, 3*4, 4*3, 6*2, 12*1
        let d2 = dk_sieve(2, 20).unwrap();
        assert_eq!(d2.get(12), divisors(12).len() as f64);
        assert_eq!(d2.get(12), 6.0);
        let d1 = dk_sieve(1, 20).unwrap();
        assert!(d1.values.iter().all(|&v| v == 1.0));
    }

    #[test]
    fn lambda2_divisor_sum_oracle() {
        let l2 = lambda_k_sieve(2, 10).unwrap();
        // sum_{e|4} mu(e) log^2(4/e) = log^2 4 - log^2 2 = 3 log^2 2
        assert_close(l2.get(4), 3.0 * 2.0f64.ln().powi(2), 1e-12);
        // squarefree identity at n = 6
        assert_close(l2.get(6), 2.0 * 2.0f64.ln() * 3.0f64.ln(), 1e-12);
        assert_eq!(l2.get(1), 0.0);
        let l5 = lambda_k_sieve(5, 2).unwrap();
        assert_eq!(l5.get(1), 0.0);
    }

    #[test]
    fn lambda_k_matches_definition() {
        let n = 2000;
        let mu = mobius_sieve(n);
        for k in 1..=4 {
            let rec = lambda_k_sieve(k, n).unwrap();
            let def = dirichlet_convolve(&mu, &log_power_sieve(k, n)).unwrap();
            for i in 1..=n {
                let (a, b) = (rec.get(i), def.get(i));
                let scale = a.abs().max(b.abs()).max(1.0);
                assert!((a - b).abs() / scale <= 1e-9, "k={k} n={i}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn mobius_inversion_identity() {
        let n = 3000;
        let h = dirichlet_convolve(&mobius_sieve(n), &one_table(n)).unwrap();
        assert_eq!(h.get(1), 1.0);
        for i in 2..=n {
            assert_eq!(h.get(i), 0.0, "n={i}");
        }
    }

    #[test]
    fn one_star_lambda_is_log() {
        let n = 10_000;
        let h = dirichlet_convolve(&one_table(n), &vonmangoldt_sieve(n)).unwrap();
        for i in 1..=n {
            assert_close(h.get(i), (i as f64).ln(), 1e-12);
        }
    }

    #[test]
    fn squarefree_convolution_identity_at_30() {
        // (mu * Lambda^{*2})(30) = mu(30) * 2 (l2 l3 + l2 l5 + l3 l5)
        let spec = ConvolutionSpec::new(vec![2], false);
        let (l2, l3, l5) = (2.0f64.ln(), 3.0f64.ln(), 5.0f64.ln());
        // mu(30) = -1 and (-1)^2 = 1, so the value is -2 (l2 l3 + l2 l5 + l3 l5)
        let expected = -2.0 * (l2 * l3 + l2 * l5 + l3 * l5);
        let got = point_convolve(&spec, 30).unwrap();
        assert_close(got, expected, 1e-12);
        let table = convolution_table(&spec, 30).unwrap();
        assert_close(table.get(30), expected, 1e-12);
    }

    #[test]
    fn point_convolve_trivial_cases() {
        let d0 = ConvolutionSpec::new(vec![], false);
        assert_eq!(point_convolve(&d0, 1).unwrap(), 1.0);
        // (mu * Lambda)(p) = log p
        let d1 = ConvolutionSpec::new(vec![1], false);
        for p in [2usize, 3, 5] {
            assert_close(point_convolve(&d1, p).unwrap(), (p as f64).ln(), 1e-12);
        }
        // n = 4: Lambda(4) - Lambda(2) = 0
        assert_close(point_convolve(&d1, 4).unwrap(), 0.0, 1e-12);
    }

    #[test]
    fn d0_table_is_mobius() {
        let spec = ConvolutionSpec::new(vec![], false);
        let t = convolution_table(&spec, 500).unwrap();
        let mu = mobius_sieve(500);
        assert_eq!(t.values, mu.values);
    }

    #[test]
    fn restricted_differs_first_at_4() {
        let free = convolution_table(&ConvolutionSpec::new(vec![2], false), 100).unwrap();
        let restr = convolution_table(&ConvolutionSpec::new(vec![2], true), 100).unwrap();
        for n in 1..4 {
            assert_eq!(free.get(n), restr.get(n), "n={n}");
        }
        assert!((free.get(4) - restr.get(4)).abs() > 1e-9);
        assert_close(free.get(4), 2.0f64.ln().powi(2), 1e-12);
        assert_eq!(restr.get(4), 0.0);
    }

    #[test]
    fn table_matches_point_convolve_mixed_spec() {
        let spec = ConvolutionSpec::new(vec![1, 1], false);
        let t = convolution_table(&spec, 64).unwrap();
        for n in [1usize, 2, 6, 12, 30, 36, 60, 64] {
            let p = point_convolve(&spec, n).unwrap();
            let scale = p.abs().max(1.0);
            assert!((t.get(n) - p).abs() / scale <= 1e-12, "n={n}");
        }
    }

    #[test]
    fn cache_round_trip_identical() {
        let dir = std::env::temp_dir().join("zetamoll-cache-test");
        let _ = std::fs::remove_dir_all(&dir);
        let spec = ConvolutionSpec::new(vec![2], false);
        let plain = convolution_table(&spec, 1000).unwrap();
        let written = convolution_table_cached(&spec, 1000, Some(&dir)).unwrap();
        let reread = convolution_table_cached(&spec, 1000, Some(&dir)).unwrap();
        assert_eq!(plain.values, written.values);
        assert_eq!(plain.values, reread.values);
        let _ = std::fs::remove_dir_all(&dir);
    }
}
