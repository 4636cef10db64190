//! Assembly of the numeric main term: contour-case classification,
//! Euler–Maclaurin conversion of coefficient sums into `[0,1]` integrals,
//! application of the smoothing differential operators, and the final
//! Levinson bound.
//!
//! Everything is expressed in scaled variables where `log N / log T = theta`
//! and `alpha = beta = -R/log T`; `T` never appears numerically and the
//! result `c` is the coefficient of `T Phi_hat(0)` in the mollified moment.

use std::collections::BTreeMap;

use num::bigint::BigInt;
use num::rational::BigRational;
use num::One;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bidual::BiDual;
use crate::combin::factorial;
use crate::poly::{Poly, QBasis};
use crate::quad::GaussLegendre;
use crate::series::{expand_integrand, rational_to_f64, RatioExpansion, SymMonomial};
use crate::sieve::{delta_table, dirichlet_convolve, dk_sieve, lambda_k_sieve, FnTable};
use crate::{Error, Result};

/// Which of the three contour-lemma regimes a derivative vector falls in.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ContourCase {
    /// `omega = -1`: the zeta zero dominates; produces an x-derivative.
    A,
    /// `omega = 0`: plain polynomial factor.
    B,
    /// `omega > 0`: residual pole; produces an auxiliary `[0,1]` integral.
    C,
}

#[derive(Debug, Clone, Copy)]
pub struct CaseClassification {
    pub omega: i64,
    pub case: ContourCase,
    /// `prod_r (r! (-1)^r)^{l_r}`.
    pub coefficient: f64,
}

/// Classify a derivative vector `l` (entry `r-1` is the multiplicity of
/// `zeta^{(r)}/zeta`).
pub fn classify(l: &[u32]) -> CaseClassification {
    let omega: i64 = l
        .iter()
        .enumerate()
        .map(|(i, &lr)| (i as i64 + 1) * lr as i64)
        .sum::<i64>()
        - 1;
    let mut coefficient = 1.0;
    for (i, &lr) in l.iter().enumerate() {
        let r = i as u32 + 1;
        let base = rational_to_f64(&BigRational::from(factorial(r)))
            * if r % 2 == 1 { -1.0 } else { 1.0 };
        coefficient *= base.powi(lr as i32);
    }
    let case = match omega {
        -1 => ContourCase::A,
        0 => ContourCase::B,
        _ => ContourCase::C,
    };
    CaseClassification {
        omega,
        case,
        coefficient,
    }
}

/// Value of one contour factor `F_d`, with the power of `log N` it carries
/// tracked separately (`alpha_scaled` is `alpha * log N`).
#[derive(Debug, Clone, Copy)]
pub struct ContourValue {
    pub value: f64,
    pub logn_power: i32,
}

/// Evaluate `F_d` for one side at a concrete `log_ratio = log(N/n)/log N`.
///
/// * case A: `U * d/dx [e^{alpha_scaled x} P(x + rho)]` at `x = 0`, carrying
///   `1/log N`;
/// * case B: `V * P(rho)`;
/// * case C: `W / (omega-1)! * rho^omega
///   int_0^1 P((1-a) rho) a^{omega-1} e^{-alpha_scaled a rho} da`,
///   carrying `(log N)^omega`.
pub fn contour_f(
    cls: &CaseClassification,
    p: &Poly,
    alpha_scaled: f64,
    log_ratio: f64,
    gl: &GaussLegendre,
) -> Result<ContourValue> {
    match cls.case {
        ContourCase::A => Ok(ContourValue {
            value: cls.coefficient * (alpha_scaled * p.eval(log_ratio) + p.derivative().eval(log_ratio)),
            logn_power: -1,
        }),
        ContourCase::B => Ok(ContourValue {
            value: cls.coefficient * p.eval(log_ratio),
            logn_power: 0,
        }),
        ContourCase::C => {
            let om = cls.omega;
            if om <= 0 {
                return Err(Error::Domain(
                    "case C classification with omega <= 0".into(),
                ));
            }
            let omf = rational_to_f64(&BigRational::from(factorial(om as u32 - 1)));
            let integral = gl.integrate(|a| {
                p.eval((1.0 - a) * log_ratio)
                    * a.powi(om as i32 - 1)
                    * (-alpha_scaled * a * log_ratio).exp()
            });
            Ok(ContourValue {
                value: cls.coefficient / omf * log_ratio.powi(om as i32) * integral,
                logn_power: om as i32,
            })
        }
    }
}

// ---------------------------------------------------------------------------
// Euler–Maclaurin sums
// ---------------------------------------------------------------------------

fn em_table(k: u32, kvec: &[u32], z: usize) -> Result<FnTable> {
    if z > 200_000_000 {
        return Err(Error::Resource(format!("sieve size {z} exceeds capacity")));
    }
    let mut t = if k == 0 {
        delta_table(z)
    } else {
        dk_sieve(k, z)?
    };
    for (i, &kq) in kvec.iter().enumerate() {
        if kq == 0 {
            continue;
        }
        let lam = lambda_k_sieve(i as u32 + 1, z)?;
        for _ in 0..kq {
            t = dirichlet_convolve(&t, &lam)?;
        }
    }
    Ok(t)
}

fn em_kappa(k: u32, kvec: &[u32]) -> u32 {
    k + kvec
        .iter()
        .enumerate()
        .map(|(i, &kq)| (i as u32 + 1) * kq)
        .sum::<u32>()
}

fn em_constant(kvec: &[u32]) -> f64 {
    let mut c = BigRational::one();
    for (i, &kq) in kvec.iter().enumerate() {
        let f = BigRational::from(factorial(i as u32 + 1));
        for _ in 0..kq {
            c *= &f;
        }
    }
    rational_to_f64(&c)
}

/// Unweighted count sum: exact `sum_{n<=z} (d_k * Lambda_1^{*k_1} * ...)(n)`
/// against its leading asymptotic
/// `[prod (q!)^{k_q} / (kappa-1)!] z log^{kappa-1} z`.
pub fn euler_maclaurin_count(k: u32, kvec: &[u32], z: usize) -> Result<(f64, f64)> {
    let t = em_table(k, kvec, z)?;
    let exact: f64 = t.values.iter().sum();
    let kap = em_kappa(k, kvec);
    if kap == 0 {
        return Err(Error::Domain("empty convolution in count sum".into()));
    }
    let kfac = rational_to_f64(&BigRational::from(factorial(kap - 1)));
    let leading = em_constant(kvec) / kfac * (z as f64) * (z as f64).ln().powi(kap as i32 - 1);
    Ok((exact, leading))
}

/// Weighted sum of the Euler–Maclaurin lemma: exact
/// `sum_{n<=z} w(n)/n^{1+s} F(log(x/n)/log x) H(log(z/n)/log z)` against the
/// leading integral
/// `C (log z)^kappa / (z^s (kappa-1)!) int_0^1 (1-u)^{kappa-1}
///  F(1-(1-u) log z/log x) H(u) z^{us} du`.
#[allow(clippy::too_many_arguments)]
pub fn euler_maclaurin_sum(
    k: u32,
    kvec: &[u32],
    z: usize,
    f: &dyn Fn(f64) -> f64,
    h: &dyn Fn(f64) -> f64,
    s: f64,
    x: Option<f64>,
) -> Result<(f64, f64)> {
    let x = x.unwrap_or(z as f64);
    let t = em_table(k, kvec, z)?;
    let logz = (z as f64).ln();
    let logx = x.ln();
    let mut exact = 0.0;
    for n in 1..=z {
        let w = t.get(n);
        if w == 0.0 {
            continue;
        }
        let nf = n as f64;
        exact += w / nf.powf(1.0 + s)
            * f((logx - nf.ln()) / logx)
            * h((logz - nf.ln()) / logz);
    }
    let kap = em_kappa(k, kvec);
    if kap == 0 {
        return Err(Error::Domain("empty convolution in lemma sum".into()));
    }
    let kfac = rational_to_f64(&BigRational::from(factorial(kap - 1)));
    let gl = GaussLegendre::new(64);
    let integral = gl.integrate(|u| {
        (1.0 - u).powi(kap as i32 - 1)
            * f(1.0 - (1.0 - u) * logz / logx)
            * h(u)
            * (u * s * logz).exp()
    });
    let leading = em_constant(kvec) * logz.powi(kap as i32) / ((z as f64).powf(s) * kfac) * integral;
    Ok((exact, leading))
}

/// Exact-rational beta identity from the lemma's proof:
/// `sum_j C(kf-1,j) (-1)^j / (kg+j) = (kf-1)!(kg-1)!/(kf+kg-1)!`.
pub fn beta_identity_holds(kf: u32, kg: u32) -> bool {
    let mut lhs = BigRational::new(BigInt::from(0), BigInt::from(1));
    for j in 0..kf {
        let binom = factorial(kf - 1) / (factorial(j) * factorial(kf - 1 - j));
        let sign = if j % 2 == 0 { 1 } else { -1 };
        lhs += BigRational::new(binom * BigInt::from(sign), BigInt::from(kg + j));
    }
    let rhs = BigRational::new(
        factorial(kf - 1) * factorial(kg - 1),
        factorial(kf + kg - 1),
    );
    lhs == rhs
}

// ---------------------------------------------------------------------------
// Kappa configuration
// ---------------------------------------------------------------------------

/// Complete parameter set for one kappa evaluation.
///
/// The polynomial map `p` is keyed by the truncation piece (the convolution
/// power `sum l_r`); its entries are monomial coefficients in the printed
/// convention, i.e. the sign alternator of the truncation expansion is
/// already absorbed. Piece 0 must satisfy `P(0)=0, P(1)=1`; higher pieces
/// `P(0)=0`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct KappaConfig {
    #[serde(rename = "schemaVersion", default = "default_schema")]
    pub schema_version: u32,
    pub d: u32,
    #[serde(rename = "K")]
    pub k_max: u32,
    pub theta: f64,
    #[serde(rename = "R")]
    pub r: f64,
    #[serde(rename = "P")]
    pub p: BTreeMap<u32, Vec<f64>>,
    #[serde(rename = "Q")]
    pub q: QBasis,
    #[serde(rename = "quadOrder", default = "default_quad_order")]
    pub quad_order: usize,
    /// Optional sieve size for exact-sum diagnostics (the `em-check` mode).
    #[serde(rename = "nMax", default, skip_serializing_if = "Option::is_none")]
    pub n_max: Option<u64>,
}

fn default_schema() -> u32 {
    1
}
fn default_quad_order() -> usize {
    64
}

impl KappaConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.theta > 0.0 && self.theta <= 4.0 / 7.0 + 1e-12) {
            return Err(Error::Config(format!(
                "theta must lie in (0, 4/7], got {}",
                self.theta
            )));
        }
        if self.r <= 0.0 {
            return Err(Error::Config("R must be positive".into()));
        }
        if self.quad_order == 0 {
            return Err(Error::Config("quadrature order must be positive".into()));
        }
        for (&piece, coeffs) in &self.p {
            let poly = Poly(coeffs.clone());
            if piece > self.k_max {
                return Err(Error::Config(format!(
                    "piece {piece} exceeds truncation K={}",
                    self.k_max
                )));
            }
            if poly.eval(0.0).abs() > 1e-9 {
                return Err(Error::Config(format!("P[{piece}] must vanish at 0")));
            }
            if piece == 0 && (poly.eval(1.0) - 1.0).abs() > 1e-5 {
                return Err(Error::Config("P[0] must equal 1 at 1".into()));
            }
        }
        if !self.p.contains_key(&0) {
            return Err(Error::Config("a piece-0 polynomial is required".into()));
        }
        let qp = self.q.to_poly();
        if (qp.eval(0.0) - 1.0).abs() > 1e-5 {
            return Err(Error::Config("Q must equal 1 at 0".into()));
        }
        Ok(())
    }

    pub fn poly(&self, piece: u32) -> Result<Poly> {
        self.p
            .get(&piece)
            .map(|c| Poly(c.clone()))
            .ok_or_else(|| Error::Config(format!("no polynomial for piece {piece}")))
    }

    /// Truncation pieces as exponent vectors, from the polynomial map keys:
    /// every composition of each key into `d` parts (the single empty vector
    /// for piece 0 or d = 0).
    pub fn pieces(&self) -> Vec<(Vec<u32>, u32)> {
        let mut out = Vec::new();
        for &total in self.p.keys() {
            if total == 0 || self.d == 0 {
                out.push((vec![0; self.d as usize], 0));
                continue;
            }
            for combo in crate::combin::compositions(total, self.d) {
                out.push((combo, total));
            }
        }
        out
    }
}

// ---------------------------------------------------------------------------
// Per-term assembly
// ---------------------------------------------------------------------------

/// Contribution record for one expansion term.
#[derive(Debug, Clone, Serialize)]
pub struct TermContribution {
    pub pair: String,
    pub term: String,
    pub contribution: f64,
    /// Dropped at leading order (carries an arithmetical-factor derivative
    /// tag); the contribution field is then its leading-order value, 0.
    pub dropped: bool,
}

/// Value of the normalized mollified moment for one configuration.
#[derive(Debug, Clone, Serialize)]
pub struct MainTermValue {
    pub c: f64,
    pub kappa: f64,
    pub breakdown: Vec<TermContribution>,
}

/// The Levinson bound `kappa >= 1 - log(c)/R`.
pub fn kappa_bound(c: f64, r: f64) -> Result<f64> {
    if c <= 0.0 {
        return Err(Error::Domain(format!(
            "moment value must be positive, got {c}"
        )));
    }
    if r <= 0.0 {
        return Err(Error::Domain("R must be positive".into()));
    }
    Ok(1.0 - c.ln() / r)
}

enum SideKind {
    A,
    B,
    C { omega: u32 },
}

struct Side {
    kind: SideKind,
    coefficient: f64,
    poly: Poly,
}

fn side_for(l: &[u32], poly: &Poly) -> Side {
    let cls = classify(l);
    let kind = match cls.case {
        ContourCase::A => SideKind::A,
        ContourCase::B => SideKind::B,
        ContourCase::C => SideKind::C {
            omega: cls.omega as u32,
        },
    };
    // corrected case-C factor: +1/(omega-1)!; the residual sign of the
    // printed recipe cancels in the tau-substitution
    let chi = match kind {
        SideKind::C { omega } => 1.0 / rational_to_f64(&BigRational::from(factorial(omega - 1))),
        _ => 1.0,
    };
    Side {
        kind,
        coefficient: cls.coefficient * chi,
        poly: poly.clone(),
    }
}

/// Evaluate one expansion term of the pair integrand.
///
/// The per-term integral is, with `X`/`Y` the side-dependent exponents
/// (`x` for case A, `-a u` under the auxiliary integral for case C, 0 for
/// case B):
///
/// ```text
/// D_x D_y  int dt du (1-u)^{kappa-1} [u^omega a-integrals]
///   P_a(arg1) P_b(arg2) (theta (X+Y) + 1)/theta
///   Q(theta t (X+Y) + t - theta X) Q(theta t (X+Y) + t - theta Y)
///   e^{R[...]} e^{R[...]}
/// ```
#[allow(clippy::too_many_arguments)]
fn term_value(
    psi: f64,
    su: &[u32],
    la: &Side,
    mb: &Side,
    q: &Poly,
    theta: f64,
    r: f64,
    gl: &GaussLegendre,
) -> f64 {
    let kap: u32 = 1 + su
        .iter()
        .enumerate()
        .map(|(j, &k)| (j as u32 + 1) * k)
        .sum::<u32>();
    let ck = em_constant(su);
    let sigma = if (kap - 1) % 2 == 0 { 1.0 } else { -1.0 };
    let kfac = rational_to_f64(&BigRational::from(factorial(kap - 1)));
    let base = psi * sigma * ck / kfac * la.coefficient * mb.coefficient;
    let integral = match (&la.kind, &mb.kind) {
        (SideKind::C { omega: o1 }, SideKind::C { omega: o2 }) => {
            cc_integral(*o1, *o2, &la.poly, &mb.poly, q, theta, r, kap, gl)
        }
        _ => generic_integral(la, mb, q, theta, r, kap, gl),
    };
    base * integral
}

/// Scalar fast path for the four-dimensional case-C x case-C integrals.
#[allow(clippy::too_many_arguments)]
fn cc_integral(
    om1: u32,
    om2: u32,
    pa: &Poly,
    pb: &Poly,
    q: &Poly,
    theta: f64,
    r: f64,
    kap: u32,
    gl: &GaussLegendre,
) -> f64 {
    let n = gl.nodes.len();
    let mut fa = vec![0.0; n];
    let mut fb = vec![0.0; n];
    let mut total = 0.0;
    for (ti, tw) in gl.nodes.iter().zip(&gl.weights) {
        let t = *ti;
        for (ui, uw) in gl.nodes.iter().zip(&gl.weights) {
            let u = *ui;
            let em = (1.0 - u).powi(kap as i32 - 1) * u.powi((om1 + om2) as i32);
            let p = theta * u * (1.0 - t);
            let qq = theta * u * t;
            let e2rt = (2.0 * r * t).exp();
            let epq = r * (p - qq);
            for i in 0..n {
                let a = gl.nodes[i];
                fa[i] = gl.weights[i]
                    * a.powi(om1 as i32 - 1)
                    * pa.eval((1.0 - a) * u)
                    * (epq * a).exp();
                let b = a;
                fb[i] = gl.weights[i]
                    * b.powi(om2 as i32 - 1)
                    * pb.eval((1.0 - b) * u)
                    * (epq * b).exp();
            }
            let mut inner = 0.0;
            for (i, &fai) in fa.iter().enumerate() {
                if fai == 0.0 {
                    continue;
                }
                let a = gl.nodes[i];
                for (j, &fbj) in fb.iter().enumerate() {
                    let b = gl.nodes[j];
                    let arg1 = t + p * a - qq * b;
                    let arg2 = t + p * b - qq * a;
                    let pref = (1.0 - theta * u * (a + b)) / theta;
                    inner += fai * fbj * q.eval(arg1) * q.eval(arg2) * pref;
                }
            }
            total += tw * uw * em * e2rt * inner;
        }
    }
    total
}

/// Generic path (at most one case-C side): bi-dual arithmetic carries the
/// x/y derivatives of the case-A sides exactly.
fn generic_integral(
    la: &Side,
    mb: &Side,
    q: &Poly,
    theta: f64,
    r: f64,
    kap: u32,
    gl: &GaussLegendre,
) -> f64 {
    let a_nodes: Vec<(f64, f64)> = match la.kind {
        SideKind::C { .. } => gl.nodes.iter().copied().zip(gl.weights.iter().copied()).collect(),
        _ => vec![(f64::NAN, 1.0)],
    };
    let b_nodes: Vec<(f64, f64)> = match mb.kind {
        SideKind::C { .. } => gl.nodes.iter().copied().zip(gl.weights.iter().copied()).collect(),
        _ => vec![(f64::NAN, 1.0)],
    };
    let mut total = 0.0;
    for (ti, tw) in gl.nodes.iter().zip(&gl.weights) {
        let t = *ti;
        for (ui, uw) in gl.nodes.iter().zip(&gl.weights) {
            let u = *ui;
            let em = (1.0 - u).powi(kap as i32 - 1);
            for &(av, aw) in &a_nodes {
                for &(bv, bw) in &b_nodes {
                    let (x, parg1, xw) = side_values(&la.kind, true, u, av);
                    let (y, parg2, yw) = side_values(&mb.kind, false, u, bv);
                    let xy = x + y;
                    let arg1 = xy * (theta * t) + BiDual::constant(t) - x * theta;
                    let arg2 = xy * (theta * t) + BiDual::constant(t) - y * theta;
                    let pref = (xy * theta + 1.0).scale(1.0 / theta);
                    let f = pref
                        * q.eval_bidual(arg1)
                        * q.eval_bidual(arg2)
                        * ((arg1 + arg2) * r).exp()
                        * la.poly.eval_bidual(parg1)
                        * mb.poly.eval_bidual(parg2);
                    let extracted = match (&la.kind, &mb.kind) {
                        (SideKind::A, SideKind::A) => f.dxy,
                        (SideKind::A, _) => f.dx,
                        (_, SideKind::A) => f.dy,
                        _ => f.v,
                    };
                    total += tw * uw * em * aw * bw * xw * yw * extracted;
                }
            }
        }
    }
    total
}

/// Exponent `X`, polynomial argument, and extra integrand weight of one side.
fn side_values(kind: &SideKind, is_x: bool, u: f64, a: f64) -> (BiDual, BiDual, f64) {
    match kind {
        SideKind::A => {
            let var = if is_x { BiDual::var_x() } else { BiDual::var_y() };
            (var, var + u, 1.0)
        }
        SideKind::B => (BiDual::constant(0.0), BiDual::constant(u), 1.0),
        SideKind::C { omega } => (
            BiDual::constant(-a * u),
            BiDual::constant((1.0 - a) * u),
            a.powi(*omega as i32 - 1) * u.powi(*omega as i32),
        ),
    }
}

/// Pair-level assembly with explicit polynomials: classifies every term,
/// drops the arithmetical-factor-tagged ones at leading order, and
/// integrates. `pa` belongs to the z side (the `alpha`/`x` factors), `pb`
/// to the w side.
#[allow(clippy::too_many_arguments)]
pub fn assemble_pair(
    expansion: &RatioExpansion,
    pa: &Poly,
    pb: &Poly,
    q: &Poly,
    theta: f64,
    r: f64,
    quad_order: usize,
) -> MainTermValue {
    let gl = GaussLegendre::new(quad_order);
    let pair_name = format!("({:?},{:?})", expansion.l, expansion.lbar);
    let jobs: Vec<(&SymMonomial, f64)> = expansion
        .terms
        .iter()
        .map(|(m, c)| (m, rational_to_f64(c)))
        .collect();
    let results: Vec<TermContribution> = jobs
        .par_iter()
        .map(|(mono, psi)| {
            if mono.has_atag() {
                return TermContribution {
                    pair: pair_name.clone(),
                    term: mono.describe(),
                    contribution: 0.0,
                    dropped: true,
                };
            }
            let la = side_for(&mono.asym, pa);
            let mb = side_for(&mono.bu, pb);
            let v = term_value(*psi, &mono.su, &la, &mb, q, theta, r, &gl);
            TermContribution {
                pair: pair_name.clone(),
                term: mono.describe(),
                contribution: v,
                dropped: false,
            }
        })
        .collect();
    let c: f64 = results.iter().map(|t| t.contribution).sum();
    MainTermValue {
        c,
        kappa: f64::NAN,
        breakdown: results,
    }
}

/// Pair-level value of one expansion with polynomials looked up from the
/// configuration by the total truncation of each side. The
/// printed-convention polynomial signs cancel exactly against the
/// expansion's sign prefactor, so the returned value uses the expansion
/// terms directly.
pub fn assemble_main_term(config: &KappaConfig, expansion: &RatioExpansion) -> Result<MainTermValue> {
    config.validate()?;
    let total_l: u32 = expansion.l.iter().sum();
    let total_lbar: u32 = expansion.lbar.iter().sum();
    let pa = config.poly(total_l)?;
    let pb = config.poly(total_lbar)?;
    let q = config.q.to_poly();
    Ok(assemble_pair(
        expansion,
        &pa,
        &pb,
        &q,
        config.theta,
        config.r,
        config.quad_order,
    ))
}

/// Full kappa evaluation: expand every truncation pair of the
/// configuration, assemble, and apply the Levinson bound.
///
/// Piece weights are the multinomial coefficients of the truncation
/// expansion; all sign alternators cancel between the printed polynomial
/// convention and the contour sign prefactor.
pub fn evaluate_kappa(config: &KappaConfig) -> Result<MainTermValue> {
    config.validate()?;
    let pieces = config.pieces();
    let mut c = 0.0;
    let mut breakdown = Vec::new();
    for (lvec, total_l) in &pieces {
        for (lbarvec, total_lbar) in &pieces {
            let expansion = expand_integrand(config.d.max(1), &pad(lvec, config.d), &pad(lbarvec, config.d), true)?;
            let weight = rational_to_f64(&BigRational::from(
                crate::combin::multinomial(*total_l, lvec)?
                    * crate::combin::multinomial(*total_lbar, lbarvec)?,
            ));
            let pair = assemble_main_term(config, &expansion)?;
            c += weight * pair.c;
            for mut t in pair.breakdown {
                t.contribution *= weight;
                breakdown.push(t);
            }
        }
    }
    let kappa = kappa_bound(c, config.r)?;
    Ok(MainTermValue { c, kappa, breakdown })
}

fn pad(v: &[u32], d: u32) -> Vec<u32> {
    let mut out = v.to_vec();
    out.resize(d.max(1) as usize, 0);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn classify_examples() {
        let c = classify(&[]);
        assert_eq!(c.omega, -1);
        assert!(matches!(c.case, ContourCase::A));
        assert_eq!(c.coefficient, 1.0);

        let c = classify(&[1]);
        assert_eq!(c.omega, 0);
        assert!(matches!(c.case, ContourCase::B));
        assert_eq!(c.coefficient, -1.0);

        let c = classify(&[1, 1]);
        assert_eq!(c.omega, 2);
        assert!(matches!(c.case, ContourCase::C));
        assert_eq!(c.coefficient, -2.0);
    }

    #[test]
    fn classify_coefficient_multiplicative() {
        // prod_r (r!(-1)^r)^{l_r} is multiplicative across coordinates
        for l in [[2u32, 1, 0, 1], [0, 3, 1, 0], [1, 0, 0, 2]] {
            let whole = classify(&l).coefficient;
            let mut prod = 1.0;
            for (i, &lr) in l.iter().enumerate() {
                let mut single = vec![0u32; 4];
                single[i] = lr;
                prod *= classify(&single).coefficient;
            }
            assert!((whole - prod).abs() < 1e-12);
        }
    }

    #[test]
    fn contour_f_examples() {
        let gl = GaussLegendre::new(32);
        let xp = Poly(vec![0.0, 1.0]);
        // case B with P(x) = x at rho = 1: V * 1
        let cls = classify(&[1]);
        let v = contour_f(&cls, &xp, 0.0, 1.0, &gl).unwrap();
        assert!((v.value - (-1.0)).abs() < 1e-14);
        assert_eq!(v.logn_power, 0);
        // case A with alpha = 0, P = x: derivative of (x + rho) is 1
        let cls = classify(&[]);
        let v = contour_f(&cls, &xp, 0.0, 0.3, &gl).unwrap();
        assert!((v.value - 1.0).abs() < 1e-14);
        assert_eq!(v.logn_power, -1);
        // case C with omega = 1, P = x, alpha = 0:
        // rho * int (1-a) rho da = rho^2/2
        let cls = classify(&[2]);
        assert_eq!(cls.omega, 1);
        let rho = 0.8;
        let v = contour_f(&cls, &xp, 0.0, rho, &gl).unwrap();
        assert!((v.value - cls.coefficient * rho * rho / 2.0).abs() < 1e-13);
        assert_eq!(v.logn_power, 1);
    }

    #[test]
    fn beta_identity_exact() {
        for kf in 1..=8 {
            for kg in 1..=8 {
                assert!(beta_identity_holds(kf, kg), "kf={kf} kg={kg}");
            }
        }
    }

    #[test]
    fn em_count_floor() {
        // k=1, kvec=0: exact sum_{n<=z} 1 = floor(z) vs leading z
        let (exact, leading) = euler_maclaurin_count(1, &[], 1000).unwrap();
        assert_eq!(exact, 1000.0);
        assert_eq!(leading, 1000.0);
    }

    #[test]
    fn em_weighted_trivial() {
        let one = |_: f64| 1.0;
        let (exact, leading) =
            euler_maclaurin_sum(1, &[], 2000, &one, &one, 0.0, None).unwrap();
        // sum 1/n ~ log z + gamma vs leading log z
        assert!((exact - leading).abs() < 0.8);
        assert!(exact / leading > 1.0);
    }

    #[test]
    fn em_psi_matches_pnt() {
        // sum_{n<=z} Lambda(n) ~ z within 2% at moderate z already
        let (exact, leading) = euler_maclaurin_count(0, &[1], 1_000_000).unwrap();
        assert!(((exact / leading) - 1.0).abs() < 0.02);
    }

    #[test]
    fn kappa_bound_examples() {
        assert_eq!(kappa_bound(1.0, 1.3).unwrap(), 1.0);
        let r = 0.77f64;
        assert!((kappa_bound(r.exp(), r).unwrap()).abs() < 1e-14);
        assert!(kappa_bound(-1.0, 1.0).is_err());
    }
}
