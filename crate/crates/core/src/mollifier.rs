//! Mollifier coefficient construction and the restricted-vs-unrestricted
//! partial-sum diagnostics.

use std::collections::BTreeMap;

use num::rational::BigRational;

use crate::combin::multinomial;
use crate::poly::{Poly, PolySpec};
use crate::series::rational_to_f64;
use crate::sieve::{convolution_table, mobius_sq_sieve, ConvolutionSpec, FnTable};
use crate::{Error, Result};

/// Specification of one degree-`d` mollifier.
#[derive(Debug, Clone)]
pub struct MollifierSpec {
    pub d: u32,
    pub truncation: u32,
    pub theta: f64,
    /// Polynomial per truncation total.
    pub polynomials: BTreeMap<u32, PolySpec>,
    pub squarefree_restricted: bool,
}

impl MollifierSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.theta > 0.0 && self.theta < 1.0) {
            return Err(Error::Config(format!(
                "theta must lie in (0,1), got {}",
                self.theta
            )));
        }
        for spec in self.polynomials.values() {
            spec.validate(1e-7)?;
        }
        Ok(())
    }
}

/// One truncation piece of the mollifier: the convolution table together
/// with everything needed to evaluate the mollifier except the
/// `n^{sigma_0 - 1/2} / n^s` kernel.
#[derive(Debug, Clone)]
pub struct MollifierPiece {
    pub exponents: Vec<u32>,
    /// `(-1)^l (-1)^{sum r l_r}`.
    pub sign: f64,
    /// Multinomial weight of the exponent vector.
    pub weight: f64,
    /// Log-power normalization exponent `sum r l_r`.
    pub log_power: u32,
    pub table: FnTable,
}

/// Coefficient tables for every exponent vector with total at most the
/// truncation. Tables are stored unnormalized; `log N` enters only through
/// polynomial arguments at assembly time, so one sieve serves many
/// parameter choices.
pub fn mollifier_coeff_tables(
    spec: &MollifierSpec,
    n_max: usize,
) -> Result<BTreeMap<Vec<u32>, MollifierPiece>> {
    spec.validate()?;
    if spec.d == 0 {
        let cspec = ConvolutionSpec::new(vec![], spec.squarefree_restricted);
        let table = convolution_table(&cspec, n_max)?;
        let mut out = BTreeMap::new();
        out.insert(
            Vec::new(),
            MollifierPiece {
                exponents: Vec::new(),
                sign: 1.0,
                weight: 1.0,
                log_power: 0,
                table,
            },
        );
        return Ok(out);
    }
    let mut out = BTreeMap::new();
    for total in 0..=spec.truncation {
        for exps in crate::combin::compositions(total, spec.d) {
            let cspec = ConvolutionSpec::new(exps.clone(), spec.squarefree_restricted);
            let table = convolution_table(&cspec, n_max)?;
            let wpow = cspec.weighted_order();
            let sign = if (total + wpow) % 2 == 0 { 1.0 } else { -1.0 };
            let weight = rational_to_f64(&BigRational::from(multinomial(total, &exps)?));
            out.insert(
                exps.clone(),
                MollifierPiece {
                    exponents: exps,
                    sign,
                    weight,
                    log_power: wpow,
                    table,
                },
            );
        }
    }
    Ok(out)
}

/// Feng's coefficient table
/// `b_F(n) = mu(n) sum_{k=2}^K (restricted log-product sums)/log^k N * P_k(...)`,
/// realized through the squarefree-restricted convolutions.
pub fn feng_coeffs(
    truncation: u32,
    n_max: usize,
    polys: &BTreeMap<u32, Poly>,
) -> Result<FnTable> {
    if truncation < 2 {
        return Err(Error::Config("Feng truncation starts at K = 2".into()));
    }
    let log_n = (n_max as f64).ln();
    let musq = mobius_sq_sieve(n_max);
    let mut out = FnTable::new(n_max, format!("feng_K{truncation}"));
    for k in 2..=truncation {
        let poly = polys
            .get(&k)
            .ok_or_else(|| Error::Config(format!("missing P_{k}")))?;
        let table = convolution_table(&ConvolutionSpec::new(vec![k], false), n_max)?;
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        for n in 1..=n_max {
            if musq.get(n) == 0.0 {
                continue;
            }
            let rho = (log_n - (n as f64).ln()) / log_n;
            out.values[n - 1] +=
                sign * table.get(n) / log_n.powi(k as i32) * poly.eval(rho);
        }
    }
    Ok(out)
}

/// One row of the partial-sum comparison.
#[derive(Debug, Clone, Copy, serde::Serialize)]
pub struct CompareRow {
    pub x: u64,
    pub unrestricted: f64,
    pub restricted: f64,
    pub difference: f64,
}

/// Cumulative sums of the unrestricted and squarefree-restricted
/// convolutions at every integer up to `x_max`.
pub fn partial_sum_compare(spec: &ConvolutionSpec, x_max: usize) -> Result<Vec<CompareRow>> {
    let mut unres_spec = spec.clone();
    unres_spec.squarefree_restricted = false;
    let table = convolution_table(&unres_spec, x_max)?;
    let musq = mobius_sq_sieve(x_max);
    let mut rows = Vec::with_capacity(x_max);
    let mut su = 0.0;
    let mut sr = 0.0;
    for n in 1..=x_max {
        let v = table.get(n);
        su += v;
        sr += v * musq.get(n);
        rows.push(CompareRow {
            x: n as u64,
            unrestricted: su,
            restricted: sr,
            difference: su - sr,
        });
    }
    Ok(rows)
}
