//! Derivative-free maximization of `kappa` over the free polynomial
//! coefficients and `R`.
//!
//! Constraints are enforced by parameterization rather than penalties:
//! the leading mollifier polynomial lives in the `x + sum_j c_j x(1-x)^j`
//! basis (so `P(0)=0`, `P(1)=1` hold structurally), higher pieces have a
//! free monomial tail above a zero constant term, and the smoothing
//! polynomial keeps `Q(0)=1` through its odd-power basis.

use rayon::prelude::*;
use serde::Serialize;

use crate::main_terms::{evaluate_kappa, KappaConfig};
use crate::poly::{Poly, QBasis};
use crate::{Error, Result};

/// One free coordinate of the search space.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum FreeParam {
    /// Piece-0 polynomial: coefficient of `x (1-x)^j`, `j >= 1`.
    P0Basis { j: u32 },
    /// Piece `k >= 2` (or 1): monomial coefficient of `x^power`, `power >= 1`.
    PCoeff { piece: u32, power: u32 },
    /// Smoothing polynomial: coefficient of `(1-2x)^{2j+1}`.
    QOdd { j: u32 },
    R,
}

#[derive(Debug, Clone)]
pub struct OptimizationProblem {
    pub base: KappaConfig,
    pub free: Vec<FreeParam>,
    pub bounds: Vec<(f64, f64)>,
    pub seed: u64,
    pub budget: usize,
    pub restarts: usize,
}

/// Decompose the stored piece-0 monomial coefficients into the
/// `x + sum c_j x(1-x)^j` basis (exact triangular solve).
fn p0_to_basis(p: &Poly) -> Vec<f64> {
    let deg = p.degree();
    let mut rem = p.clone();
    let mut coeffs = vec![0.0; deg.max(1)];
    // subtract x
    rem = rem.add(&Poly(vec![0.0, -1.0]));
    for j in (1..=deg.saturating_sub(1)).rev() {
        let basis = Poly::x_one_minus_x_pow(j as u32);
        let lead = rem.0.get(j + 1).copied().unwrap_or(0.0);
        let blead = basis.0[j + 1];
        let c = lead / blead;
        coeffs[j - 1] = c;
        rem = rem.add(&basis.scale(-c));
    }
    coeffs
}

fn basis_to_p0(coeffs: &[f64]) -> Poly {
    let mut p = Poly(vec![0.0, 1.0]);
    for (idx, &c) in coeffs.iter().enumerate() {
        p = p.add(&Poly::x_one_minus_x_pow(idx as u32 + 1).scale(c));
    }
    p
}

impl OptimizationProblem {
    /// Current values of the free parameters extracted from the base config.
    pub fn initial_point(&self) -> Result<Vec<f64>> {
        let mut out = Vec::with_capacity(self.free.len());
        for f in &self.free {
            let v = match f {
                FreeParam::P0Basis { j } => {
                    let p = self.base.poly(0)?;
                    let basis = p0_to_basis(&p);
                    basis.get(*j as usize - 1).copied().unwrap_or(0.0)
                }
                FreeParam::PCoeff { piece, power } => self
                    .base
                    .poly(*piece)?
                    .0
                    .get(*power as usize)
                    .copied()
                    .unwrap_or(0.0),
                FreeParam::QOdd { j } => self.base.q.odd.get(*j as usize).copied().unwrap_or(0.0),
                FreeParam::R => self.base.r,
            };
            out.push(v);
        }
        Ok(out)
    }

    /// Rebuild a full configuration from a parameter vector; every
    /// constraint holds by construction.
    pub fn config_at(&self, params: &[f64]) -> Result<KappaConfig> {
        let mut cfg = self.base.clone();
        let mut p0_basis = p0_to_basis(&self.base.poly(0)?);
        let mut q_odd = self.base.q.odd.clone();
        for (f, &v) in self.free.iter().zip(params) {
            match f {
                FreeParam::P0Basis { j } => {
                    let idx = *j as usize - 1;
                    if p0_basis.len() <= idx {
                        p0_basis.resize(idx + 1, 0.0);
                    }
                    p0_basis[idx] = v;
                }
                FreeParam::PCoeff { piece, power } => {
                    let coeffs = cfg
                        .p
                        .get_mut(piece)
                        .ok_or_else(|| Error::Config(format!("no piece {piece}")))?;
                    if coeffs.len() <= *power as usize {
                        coeffs.resize(*power as usize + 1, 0.0);
                    }
                    coeffs[*power as usize] = v;
                    coeffs[0] = 0.0;
                }
                FreeParam::QOdd { j } => {
                    if q_odd.len() <= *j as usize {
                        q_odd.resize(*j as usize + 1, 0.0);
                    }
                    q_odd[*j as usize] = v;
                }
                FreeParam::R => cfg.r = v,
            }
        }
        cfg.p.insert(0, basis_to_p0(&p0_basis).0);
        cfg.q = QBasis::from_free_odd(q_odd);
        Ok(cfg)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct TraceRow {
    pub iteration: usize,
    pub kappa: f64,
    pub params: Vec<f64>,
}

#[derive(Debug, Clone)]
pub struct OptimizeResult {
    pub best_config: KappaConfig,
    pub best_kappa: f64,
    pub best_params: Vec<f64>,
    pub trace: Vec<TraceRow>,
    pub evaluations: usize,
    pub budget_exhausted: bool,
}

fn clamp(params: &mut [f64], bounds: &[(f64, f64)]) {
    for (p, &(lo, hi)) in params.iter_mut().zip(bounds) {
        *p = p.clamp(lo, hi);
    }
}

/// Nelder–Mead maximization of `kappa` with deterministic seeded restarts.
///
/// Restarts run in parallel; the reduction picks the best by
/// `(kappa, then restart order)`, and the returned value never falls below
/// the evaluated start point.
pub fn optimize_kappa(problem: &OptimizationProblem) -> Result<OptimizeResult> {
    if problem.free.is_empty() {
        return Err(Error::Config("no free parameters".into()));
    }
    if problem.bounds.len() != problem.free.len() {
        return Err(Error::Config("bounds must match free parameters".into()));
    }
    let x0 = problem.initial_point()?;
    let start_kappa = objective(problem, &x0)?;

    let restarts = problem.restarts.max(1);
    let budget_each = (problem.budget / restarts).max(3 * problem.free.len() + 3);
    let runs: Vec<Result<SimplexRun>> = (0..restarts)
        .into_par_iter()
        .map(|ri| nelder_mead(problem, &x0, ri as u64, budget_each))
        .collect();

    let mut best_kappa = start_kappa;
    let mut best_params = x0.clone();
    let mut trace = vec![TraceRow {
        iteration: 0,
        kappa: start_kappa,
        params: x0.clone(),
    }];
    let mut evaluations = 1;
    let mut exhausted = false;
    for run in runs {
        let run = run?;
        evaluations += run.evaluations;
        exhausted |= run.budget_exhausted;
        let base_iter = trace.len();
        for (i, row) in run.trace.into_iter().enumerate() {
            trace.push(TraceRow {
                iteration: base_iter + i,
                kappa: row.kappa,
                params: row.params,
            });
        }
        if run.best_kappa > best_kappa {
            best_kappa = run.best_kappa;
            best_params = run.best_params;
        }
    }
    let best_config = problem.config_at(&best_params)?;
    Ok(OptimizeResult {
        best_config,
        best_kappa,
        best_params,
        trace,
        evaluations,
        budget_exhausted: exhausted,
    })
}

fn objective(problem: &OptimizationProblem, params: &[f64]) -> Result<f64> {
    let cfg = problem.config_at(params)?;
    Ok(evaluate_kappa(&cfg)?.kappa)
}

struct SimplexRun {
    best_kappa: f64,
    best_params: Vec<f64>,
    trace: Vec<TraceRow>,
    evaluations: usize,
    budget_exhausted: bool,
}

/// One seeded simplex descent. A simple xorshift stream derived from
/// `(seed, restart)` perturbs the initial simplex deterministically.
fn nelder_mead(
    problem: &OptimizationProblem,
    x0: &[f64],
    restart: u64,
    budget: usize,
) -> Result<SimplexRun> {
    let n = x0.len();
    let mut rng_state = problem
        .seed
        .wrapping_mul(0x9E3779B97F4A7C15)
        .wrapping_add(restart.wrapping_mul(0xD1B54A32D192ED03))
        | 1;
    let mut next_unit = move || {
        // xorshift64*
        rng_state ^= rng_state >> 12;
        rng_state ^= rng_state << 25;
        rng_state ^= rng_state >> 27;
        let v = rng_state.wrapping_mul(0x2545F4914F6CDD1D);
        (v >> 11) as f64 / (1u64 << 53) as f64
    };

    // every objective call records one trace row, so the row count is the
    // evaluation count
    let mut trace: Vec<TraceRow> = Vec::new();
    fn eval(
        problem: &OptimizationProblem,
        params: &[f64],
        trace: &mut Vec<TraceRow>,
    ) -> Result<f64> {
        let k = objective(problem, params)?;
        trace.push(TraceRow {
            iteration: trace.len(),
            kappa: k,
            params: params.to_vec(),
        });
        Ok(k)
    }

    // initial simplex: x0 plus per-coordinate steps, jittered after the
    // first restart
    let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(n + 1);
    let mut p0 = x0.to_vec();
    clamp(&mut p0, &problem.bounds);
    let f0 = eval(problem, &p0, &mut trace)?;
    simplex.push((p0.clone(), f0));
    for i in 0..n {
        let mut p = p0.clone();
        let span = problem.bounds[i].1 - problem.bounds[i].0;
        let step = 0.08 * span * if restart == 0 { 1.0 } else { 0.4 + next_unit() };
        p[i] += if restart % 2 == 0 { step } else { -step };
        clamp(&mut p, &problem.bounds);
        let f = eval(problem, &p, &mut trace)?;
        simplex.push((p, f));
    }

    let (alpha, gamma, rho, sigma) = (1.0, 2.0, 0.5, 0.5);
    let mut exhausted = false;
    loop {
        if trace.len() >= budget {
            exhausted = true;
            break;
        }
        // maximize kappa: sort descending
        simplex.sort_by(|a, b| b.1.partial_cmp(&a.1).unwrap());
        let spread = simplex[0].1 - simplex[n].1;
        if spread.abs() < 1e-12 {
            break;
        }
        let centroid: Vec<f64> = (0..n)
            .map(|i| simplex[..n].iter().map(|(p, _)| p[i]).sum::<f64>() / n as f64)
            .collect();
        let worst = simplex[n].clone();
        let mut reflected: Vec<f64> = centroid
            .iter()
            .zip(&worst.0)
            .map(|(c, w)| c + alpha * (c - w))
            .collect();
        clamp(&mut reflected, &problem.bounds);
        let fr = eval(problem, &reflected, &mut trace)?;
        if fr > simplex[0].1 {
            let mut expanded: Vec<f64> = centroid
                .iter()
                .zip(&worst.0)
                .map(|(c, w)| c + gamma * (c - w))
                .collect();
            clamp(&mut expanded, &problem.bounds);
            if trace.len() >= budget {
                simplex[n] = (reflected, fr);
                exhausted = true;
                break;
            }
            let fe = eval(problem, &expanded, &mut trace)?;
            simplex[n] = if fe > fr {
                (expanded, fe)
            } else {
                (reflected, fr)
            };
        } else if fr > simplex[n - 1].1 {
            simplex[n] = (reflected, fr);
        } else {
            let mut contracted: Vec<f64> = centroid
                .iter()
                .zip(&worst.0)
                .map(|(c, w)| c + rho * (w - c))
                .collect();
            clamp(&mut contracted, &problem.bounds);
            if trace.len() >= budget {
                exhausted = true;
                break;
            }
            let fc = eval(problem, &contracted, &mut trace)?;
            if fc > worst.1 {
                simplex[n] = (contracted, fc);
            } else {
                // shrink toward the best vertex
                let best = simplex[0].0.clone();
                for item in simplex.iter_mut().skip(1) {
                    let mut p: Vec<f64> = best
                        .iter()
                        .zip(&item.0)
                        .map(|(b, q)| b + sigma * (q - b))
                        .collect();
                    clamp(&mut p, &problem.bounds);
                    if trace.len() >= budget {
                        exhausted = true;
                        break;
                    }
                    let f = eval(problem, &p, &mut trace)?;
                    *item = (p, f);
                }
                if exhausted {
                    break;
                }
            }
        }
    }
    simplex.sort_by(|a, b| b.1.partial_cmp(&a.1).unwrap());
    // never report below the best point seen anywhere in the trace
    let (bi, bk) = trace
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.kappa.partial_cmp(&b.1.kappa).unwrap())
        .map(|(i, r)| (i, r.kappa))
        .unwrap();
    let evaluations = trace.len();
    Ok(SimplexRun {
        best_kappa: bk,
        best_params: trace[bi].params.clone(),
        trace,
        evaluations,
        budget_exhausted: exhausted,
    })
}

/// `kappa` along a one-dimensional slice of the configuration.
pub fn evaluate_profile(
    base: &KappaConfig,
    parameter: &FreeParam,
    grid: &[f64],
) -> Result<Vec<(f64, f64)>> {
    let problem = OptimizationProblem {
        base: base.clone(),
        free: vec![parameter.clone()],
        bounds: vec![(f64::NEG_INFINITY, f64::INFINITY)],
        seed: 0,
        budget: 0,
        restarts: 1,
    };
    let mut out = Vec::with_capacity(grid.len());
    for &g in grid {
        let cfg = problem.config_at(&[g])?;
        let v = evaluate_kappa(&cfg)?;
        out.push((g, v.kappa));
    }
    Ok(out)
}
