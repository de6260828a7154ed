//! Hyperparameter training by minimizing the negative log marginal likelihood.
//!
//! Trainable parameters are packed into an unconstrained vector: positive
//! parameters through a shifted softplus `θ = bound + ln(1 + eᵘ)`, mean
//! coefficients unchanged. The minimizer is limited-memory BFGS with a
//! Moré–Thuente line search; on an unbounded problem this follows the same
//! iterates as the classic L-BFGS-B driver.

use std::collections::VecDeque;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;

use crate::error::{GpError, Result};
use crate::gpr::GpModel;
use crate::numlin::dot;
use crate::scalar::{sigmoid, softplus, softplus_inv, Scalar};

pub const LIKELIHOOD_PATH: &str = "likelihood.variance";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Transform {
    /// `θ = lower_bound + softplus(u)`.
    Softplus,
    Identity,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ParamDescriptor<T> {
    pub path: String,
    pub transform: Transform,
    pub lower_bound: T,
}

impl<T: Scalar> ParamDescriptor<T> {
    pub fn to_constrained(&self, u: T) -> T {
        match self.transform {
            Transform::Softplus => self.lower_bound + softplus(u),
            Transform::Identity => u,
        }
    }

    /// Inverse of [`to_constrained`](Self::to_constrained). Values at or below
    /// the bound map to a very negative `u`.
    pub fn to_unconstrained(&self, value: T) -> T {
        match self.transform {
            Transform::Softplus => {
                let excess = value - self.lower_bound;
                if excess > T::zero() {
                    softplus_inv(excess)
                } else {
                    T::lit(-745.0)
                }
            }
            Transform::Identity => value,
        }
    }

    /// `dθ/du`.
    pub fn jacobian(&self, u: T) -> T {
        match self.transform {
            Transform::Softplus => sigmoid(u),
            Transform::Identity => T::one(),
        }
    }
}

/// Trainable parameters in unconstrained coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct ParamVector<T> {
    pub values: Vec<T>,
    pub descriptors: Vec<ParamDescriptor<T>>,
}

impl<T: Scalar> ParamVector<T> {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn constrained(&self) -> Vec<T> {
        self.values.iter().zip(&self.descriptors).map(|(&u, d)| d.to_constrained(u)).collect()
    }

    pub fn paths(&self) -> impl Iterator<Item = &str> {
        self.descriptors.iter().map(|d| d.path.as_str())
    }
}

/// Canonical listing of trainable parameters: kernel (flatten order), likelihood, mean.
pub fn trainable_params<T: Scalar>(model: &GpModel<T>) -> Vec<(ParamDescriptor<T>, T)> {
    let mut out = Vec::new();
    model.kernel().visit_params(&mut |path, p| {
        if p.trainable {
            out.push((
                ParamDescriptor { path: path.to_owned(), transform: Transform::Softplus, lower_bound: p.lower_bound },
                p.value,
            ));
        }
    });
    let lik = model.likelihood_variance();
    if lik.trainable {
        out.push((
            ParamDescriptor {
                path: LIKELIHOOD_PATH.to_owned(),
                transform: Transform::Softplus,
                lower_bound: lik.lower_bound,
            },
            lik.value,
        ));
    }
    for (path, c) in model.mean().flatten_params() {
        if c.trainable {
            out.push((
                ParamDescriptor {
                    path: format!("mean.{path}"),
                    transform: Transform::Identity,
                    lower_bound: T::neg_infinity(),
                },
                c.value,
            ));
        }
    }
    out
}

pub fn pack<T: Scalar>(model: &GpModel<T>) -> ParamVector<T> {
    let (descriptors, values): (Vec<_>, Vec<_>) = trainable_params(model)
        .into_iter()
        .map(|(d, v)| {
            let u = d.to_unconstrained(v);
            (d, u)
        })
        .unzip();
    ParamVector { values, descriptors }
}

/// Installs constrained values for the trainable parameters, in canonical order.
pub fn with_constrained<T: Scalar>(model: &GpModel<T>, values: &[T]) -> Result<GpModel<T>> {
    let expected = model.num_trainable();
    if values.len() != expected {
        return Err(GpError::DimensionMismatch { expected, got: values.len() });
    }
    let mut out = model.clone();
    let mut it = values.iter().copied();
    out.kernel_mut().visit_params_mut(&mut |_, p| {
        if p.trainable {
            p.value = it.next().expect("count checked");
        }
    });
    let lik = out.likelihood_variance_mut();
    if lik.trainable {
        lik.value = it.next().expect("count checked");
    }
    out.mean_mut().visit_params_mut(&mut |_, c| {
        if c.trainable {
            c.value = it.next().expect("count checked");
        }
    });
    out.validate()?;
    Ok(out)
}

pub fn unpack<T: Scalar>(model: &GpModel<T>, pv: &ParamVector<T>) -> Result<GpModel<T>> {
    with_constrained(model, &pv.constrained())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OptConfig {
    pub grad_tol: f64,
    pub f_rel_tol: f64,
    pub max_iter: usize,
    /// Extra seeded starts from log-uniform perturbations of the initial values.
    pub restarts: usize,
    pub restart_seed: u64,
}

impl Default for OptConfig {
    fn default() -> Self {
        Self { grad_tol: 1e-8, f_rel_tol: 1e-10, max_iter: 1000, restarts: 0, restart_seed: 0 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Termination {
    GradientTol,
    FTol,
    MaxIter,
    /// Line search could not decrease the objective even from steepest descent.
    LineSearchStalled,
}

#[derive(Debug, Clone)]
pub struct OptResult<T> {
    pub model: GpModel<T>,
    pub final_params: ParamVector<T>,
    pub initial_nlml: T,
    pub final_nlml: T,
    pub iterations: usize,
    pub converged: bool,
    pub termination: Termination,
    /// Objective after every accepted step, starting with the initial value.
    pub trace: Vec<T>,
}

/// Objective in unconstrained coordinates.
struct Objective<'a, T> {
    model: &'a GpModel<T>,
    descriptors: &'a [ParamDescriptor<T>],
}

impl<T: Scalar> Objective<'_, T> {
    fn eval(&self, u: &[T]) -> Result<(T, Vec<T>)> {
        let theta: Vec<T> = u.iter().zip(self.descriptors).map(|(&x, d)| d.to_constrained(x)).collect();
        let m = with_constrained(self.model, &theta)?;
        let (f, g) = m.nlml_and_grad()?;
        if !f.is_finite() || g.iter().any(|v| !v.is_finite()) {
            return Err(GpError::NumericalBreakdown("non-finite objective".into()));
        }
        let gu = g.iter().zip(u).zip(self.descriptors).map(|((&gi, &ui), d)| gi * d.jacobian(ui)).collect();
        Ok((f, gu))
    }
}

pub fn minimize<T: Scalar>(model: &GpModel<T>, cfg: &OptConfig) -> Result<OptResult<T>> {
    if model.num_trainable() == 0 {
        return Err(GpError::NoTrainableParams);
    }
    let mut best = minimize_from(model, pack(model), cfg)?;
    if cfg.restarts > 0 {
        let mut rng = ChaCha20Rng::seed_from_u64(cfg.restart_seed);
        let base = trainable_params(model);
        for _ in 0..cfg.restarts {
            let theta: Vec<T> = base
                .iter()
                .map(|(d, v)| match d.transform {
                    Transform::Softplus => (*v * T::lit(10f64.powf(rng.gen_range(-1.0..1.0)))).max(d.lower_bound),
                    Transform::Identity => *v + T::lit(rng.gen_range(-1.0..1.0)) * (T::one() + v.abs()),
                })
                .collect();
            let start = with_constrained(model, &theta)?;
            if let Ok(r) = minimize_from(&start, pack(&start), cfg) {
                if r.final_nlml < best.final_nlml {
                    best = OptResult { initial_nlml: best.initial_nlml, ..r };
                }
            }
        }
    }
    Ok(best)
}

fn minimize_from<T: Scalar>(model: &GpModel<T>, start: ParamVector<T>, cfg: &OptConfig) -> Result<OptResult<T>> {
    const MEMORY: usize = 10;
    let obj = Objective { model, descriptors: &start.descriptors };
    let mut x = start.values.clone();
    let (mut f, mut g) = obj.eval(&x)?;
    let initial = f;
    let mut trace = vec![f];
    let mut memory: VecDeque<(Vec<T>, Vec<T>, T)> = VecDeque::with_capacity(MEMORY);
    let grad_tol = T::lit(cfg.grad_tol);
    let f_rel_tol = T::lit(cfg.f_rel_tol);
    let mut termination = Termination::MaxIter;
    let mut iterations = 0;

    while iterations < cfg.max_iter {
        if inf_norm(&g) < grad_tol {
            termination = Termination::GradientTol;
            break;
        }
        let mut d = two_loop(&g, &memory);
        if dot(&d, &g) >= T::zero() {
            memory.clear();
            d = g.iter().map(|&v| -v).collect();
        }
        let first = iterations == 0;
        let step0 = if first { T::one() / dot(&d, &d).sqrt() } else { T::one() };
        let found = match line_search(&obj, &x, f, &g, &d, step0)? {
            Some(s) => Some(s),
            None if !memory.is_empty() => {
                memory.clear();
                let sd: Vec<T> = g.iter().map(|&v| -v).collect();
                let s0 = T::one() / dot(&sd, &sd).sqrt();
                line_search(&obj, &x, f, &g, &sd, s0)?
            }
            None => None,
        };
        let Some(step) = found else {
            termination = Termination::LineSearchStalled;
            break;
        };
        iterations += 1;
        let s: Vec<T> = step.x.iter().zip(&x).map(|(&a, &b)| a - b).collect();
        let y: Vec<T> = step.g.iter().zip(&g).map(|(&a, &b)| a - b).collect();
        let sy = dot(&s, &y);
        if sy > T::epsilon() * dot(&y, &y) {
            if memory.len() == MEMORY {
                memory.pop_front();
            }
            memory.push_back((s, y, sy));
        }
        let f_old = f;
        x = step.x;
        f = step.f;
        g = step.g;
        trace.push(f);
        let scale = f_old.abs().max(f.abs()).max(T::one());
        if (f_old - f) / scale <= f_rel_tol {
            termination = Termination::FTol;
            break;
        }
    }
    if termination == Termination::MaxIter && inf_norm(&g) < grad_tol {
        termination = Termination::GradientTol;
    }
    let final_params = ParamVector { values: x, descriptors: start.descriptors };
    let trained = unpack(model, &final_params)?;
    Ok(OptResult {
        model: trained,
        final_params,
        initial_nlml: initial,
        final_nlml: f,
        iterations,
        converged: matches!(termination, Termination::GradientTol | Termination::FTol),
        termination,
        trace,
    })
}

fn inf_norm<T: Scalar>(v: &[T]) -> T {
    v.iter().fold(T::zero(), |m, x| m.max(x.abs()))
}

/// `-H·g` with `H₀ = (sᵀy / yᵀy)·I` from the newest pair.
fn two_loop<T: Scalar>(g: &[T], memory: &VecDeque<(Vec<T>, Vec<T>, T)>) -> Vec<T> {
    let mut q = g.to_vec();
    let mut alphas = Vec::with_capacity(memory.len());
    for (s, y, sy) in memory.iter().rev() {
        let a = dot(s, &q) / *sy;
        q.iter_mut().zip(y).for_each(|(qi, &yi)| *qi -= a * yi);
        alphas.push(a);
    }
    if let Some((_, y, sy)) = memory.back() {
        let gamma = *sy / dot(y, y);
        q.iter_mut().for_each(|v| *v *= gamma);
    }
    for ((s, y, sy), a) in memory.iter().zip(alphas.into_iter().rev()) {
        let b = dot(y, &q) / *sy;
        q.iter_mut().zip(s).for_each(|(qi, &si)| *qi += (a - b) * si);
    }
    q.iter().map(|&v| -v).collect()
}

struct Accepted<T> {
    x: Vec<T>,
    f: T,
    g: Vec<T>,
}

const LS_FTOL: f64 = 1e-3;
const LS_GTOL: f64 = 0.9;
const LS_XTOL: f64 = 0.1;
const LS_MAX_EVALS: usize = 20;
const LS_MAX_HALVINGS: usize = 20;
const STEP_MAX: f64 = 1e10;

/// Moré–Thuente search along `d`. `Ok(None)` when no acceptable decrease was
/// found; `Err` only if the covariance stays singular after repeated halving.
fn line_search<T: Scalar>(
    obj: &Objective<'_, T>,
    x: &[T],
    f0: T,
    g0: &[T],
    d: &[T],
    step0: T,
) -> Result<Option<Accepted<T>>> {
    let dg0 = dot(g0, d);
    if !(dg0 < T::zero()) {
        return Ok(None);
    }
    let mut search = MoreThuente::new(step0.min(T::lit(STEP_MAX)), f0, dg0, T::zero(), T::lit(STEP_MAX));
    let mut halvings = 0;
    let mut best: Option<Accepted<T>> = None;
    let mut evals = 0;
    loop {
        let stp = search.stp;
        let trial: Vec<T> = x.iter().zip(d).map(|(&xi, &di)| xi + stp * di).collect();
        let (f, g) = match obj.eval(&trial) {
            Ok(v) => v,
            Err(GpError::NotPositiveDefinite { .. } | GpError::NumericalBreakdown(_)) => {
                halvings += 1;
                if halvings > LS_MAX_HALVINGS {
                    return Err(GpError::NumericalBreakdown(
                        "covariance not positive definite along the search direction".into(),
                    ));
                }
                search.shrink_after_failure();
                continue;
            }
            Err(e) => return Err(e),
        };
        evals += 1;
        let dg = dot(&g, d);
        if f < f0 && best.as_ref().is_none_or(|b| f < b.f) {
            best = Some(Accepted { x: trial.clone(), f, g: g.clone() });
        }
        match search.step(f, dg) {
            SearchState::Converged => return Ok(Some(Accepted { x: trial, f, g })),
            SearchState::Stalled => return Ok(best),
            SearchState::Continue if evals >= LS_MAX_EVALS => return Ok(best),
            SearchState::Continue => {}
        }
    }
}

enum SearchState {
    Continue,
    Converged,
    Stalled,
}

/// State of the MINPACK-2 `dcsrch` safeguarded cubic/quadratic search.
struct MoreThuente<T> {
    stp: T,
    finit: T,
    ginit: T,
    gtest: T,
    stpmin: T,
    stpmax: T,
    brackt: bool,
    stage_one: bool,
    width: T,
    width1: T,
    stx: T,
    fx: T,
    gx: T,
    sty: T,
    fy: T,
    gy: T,
    stmin: T,
    stmax: T,
}

impl<T: Scalar> MoreThuente<T> {
    fn new(stp: T, finit: T, ginit: T, stpmin: T, stpmax: T) -> Self {
        let width = stpmax - stpmin;
        Self {
            stp,
            finit,
            ginit,
            gtest: T::lit(LS_FTOL) * ginit,
            stpmin,
            stpmax,
            brackt: false,
            stage_one: true,
            width,
            width1: width / T::lit(0.5),
            stx: T::zero(),
            fx: finit,
            gx: ginit,
            sty: T::zero(),
            fy: finit,
            gy: ginit,
            stmin: T::zero(),
            stmax: stp + T::lit(4.0) * stp,
        }
    }

    /// The trial step could not be evaluated: pull it halfway back toward the
    /// best step so far and never go beyond the failed point again.
    fn shrink_after_failure(&mut self) {
        self.stpmax = self.stp;
        self.stmax = self.stmax.min(self.stp);
        self.stp = self.stx + T::lit(0.5) * (self.stp - self.stx);
    }

    fn step(&mut self, f: T, g: T) -> SearchState {
        let ftest = self.finit + self.stp * self.gtest;
        if self.stage_one && f <= ftest && g >= T::zero() {
            self.stage_one = false;
        }
        if f <= ftest && g.abs() <= T::lit(LS_GTOL) * (-self.ginit) {
            return SearchState::Converged;
        }
        let xtol = T::lit(LS_XTOL);
        if self.brackt && (self.stp <= self.stmin || self.stp >= self.stmax) {
            return SearchState::Stalled;
        }
        if self.brackt && self.stmax - self.stmin <= xtol * self.stmax {
            return SearchState::Stalled;
        }
        if self.stp == self.stpmax && f <= ftest && g <= self.gtest {
            return SearchState::Stalled;
        }
        if self.stp == self.stpmin && (f > ftest || g >= self.gtest) {
            return SearchState::Stalled;
        }

        if self.stage_one && f <= self.fx && f > ftest {
            // modified function ψ(α) = φ(α) − φ(0) − gtest·α
            let gt = self.gtest;
            let mut fxm = self.fx - self.stx * gt;
            let mut fym = self.fy - self.sty * gt;
            let mut gxm = self.gx - gt;
            let mut gym = self.gy - gt;
            let fm = f - self.stp * gt;
            let gm = g - gt;
            self.stp = cstep(
                &mut self.stx,
                &mut fxm,
                &mut gxm,
                &mut self.sty,
                &mut fym,
                &mut gym,
                self.stp,
                fm,
                gm,
                &mut self.brackt,
                self.stmin,
                self.stmax,
            );
            self.fx = fxm + self.stx * gt;
            self.fy = fym + self.sty * gt;
            self.gx = gxm + gt;
            self.gy = gym + gt;
        } else {
            self.stp = cstep(
                &mut self.stx,
                &mut self.fx,
                &mut self.gx,
                &mut self.sty,
                &mut self.fy,
                &mut self.gy,
                self.stp,
                f,
                g,
                &mut self.brackt,
                self.stmin,
                self.stmax,
            );
        }

        if self.brackt {
            if (self.sty - self.stx).abs() >= T::lit(0.66) * self.width1 {
                self.stp = self.stx + T::lit(0.5) * (self.sty - self.stx);
            }
            self.width1 = self.width;
            self.width = (self.sty - self.stx).abs();
            self.stmin = self.stx.min(self.sty);
            self.stmax = self.stx.max(self.sty);
        } else {
            self.stmin = self.stp + T::lit(1.1) * (self.stp - self.stx);
            self.stmax = self.stp + T::lit(4.0) * (self.stp - self.stx);
        }
        self.stp = self.stp.max(self.stpmin).min(self.stpmax);
        if self.brackt
            && (self.stp <= self.stmin || self.stp >= self.stmax || self.stmax - self.stmin <= xtol * self.stmax)
        {
            self.stp = self.stx;
        }
        SearchState::Continue
    }
}

/// One safeguarded step of `dcstep`: updates the interval of uncertainty
/// `[stx, sty]` and returns the next trial step.
#[allow(clippy::too_many_arguments)]
fn cstep<T: Scalar>(
    stx: &mut T,
    fx: &mut T,
    dx: &mut T,
    sty: &mut T,
    fy: &mut T,
    dy: &mut T,
    stp: T,
    fp: T,
    dp: T,
    brackt: &mut bool,
    stpmin: T,
    stpmax: T,
) -> T {
    let three = T::lit(3.0);
    let half = T::lit(0.5);
    let sgnd = dp * (*dx / dx.abs());
    let stpf;
    if fp > *fx {
        let theta = three * (*fx - fp) / (stp - *stx) + *dx + dp;
        let s = theta.abs().max(dx.abs()).max(dp.abs());
        let mut gamma = s * ((theta / s).powi(2) - (*dx / s) * (dp / s)).sqrt();
        if stp < *stx {
            gamma = -gamma;
        }
        let p = (gamma - *dx) + theta;
        let q = ((gamma - *dx) + gamma) + dp;
        let r = p / q;
        let stpc = *stx + r * (stp - *stx);
        let stpq = *stx + ((*dx / ((*fx - fp) / (stp - *stx) + *dx)) / T::lit(2.0)) * (stp - *stx);
        stpf = if (stpc - *stx).abs() < (stpq - *stx).abs() { stpc } else { stpc + half * (stpq - stpc) };
        *brackt = true;
    } else if sgnd < T::zero() {
        let theta = three * (*fx - fp) / (stp - *stx) + *dx + dp;
        let s = theta.abs().max(dx.abs()).max(dp.abs());
        let mut gamma = s * ((theta / s).powi(2) - (*dx / s) * (dp / s)).sqrt();
        if stp > *stx {
            gamma = -gamma;
        }
        let p = (gamma - dp) + theta;
        let q = ((gamma - dp) + gamma) + *dx;
        let r = p / q;
        let stpc = stp + r * (*stx - stp);
        let stpq = stp + (dp / (dp - *dx)) * (*stx - stp);
        stpf = if (stpc - stp).abs() > (stpq - stp).abs() { stpc } else { stpq };
        *brackt = true;
    } else if dp.abs() < dx.abs() {
        let theta = three * (*fx - fp) / (stp - *stx) + *dx + dp;
        let s = theta.abs().max(dx.abs()).max(dp.abs());
        let mut gamma = s * T::zero().max((theta / s).powi(2) - (*dx / s) * (dp / s)).sqrt();
        if stp > *stx {
            gamma = -gamma;
        }
        let p = (gamma - dp) + theta;
        let q = (gamma + (*dx - dp)) + gamma;
        let r = p / q;
        let stpc = if r < T::zero() && gamma != T::zero() {
            stp + r * (*stx - stp)
        } else if stp > *stx {
            stpmax
        } else {
            stpmin
        };
        let stpq = stp + (dp / (dp - *dx)) * (*stx - stp);
        if *brackt {
            let mut v = if (stpc - stp).abs() < (stpq - stp).abs() { stpc } else { stpq };
            let bound = stp + T::lit(0.66) * (*sty - stp);
            v = if stp > *stx { v.min(bound) } else { v.max(bound) };
            stpf = v;
        } else {
            let v = if (stpc - stp).abs() > (stpq - stp).abs() { stpc } else { stpq };
            stpf = v.min(stpmax).max(stpmin);
        }
    } else if *brackt {
        let theta = three * (fp - *fy) / (*sty - stp) + *dy + dp;
        let s = theta.abs().max(dy.abs()).max(dp.abs());
        let mut gamma = s * ((theta / s).powi(2) - (*dy / s) * (dp / s)).sqrt();
        if stp > *sty {
            gamma = -gamma;
        }
        let p = (gamma - dp) + theta;
        let q = ((gamma - dp) + gamma) + *dy;
        let r = p / q;
        stpf = stp + r * (*sty - stp);
    } else if stp > *stx {
        stpf = stpmax;
    } else {
        stpf = stpmin;
    }

    if fp > *fx {
        *sty = stp;
        *fy = fp;
        *dy = dp;
    } else {
        if sgnd < T::zero() {
            *sty = *stx;
            *fy = *fx;
            *dy = *dx;
        }
        *stx = stp;
        *fx = fp;
        *dx = dp;
    }
    stpf
}

#[derive(Debug, Clone, PartialEq)]
pub struct GradientCheckEntry {
    pub path: String,
    pub analytic: f64,
    pub numeric: f64,
    pub rel_error: f64,
    pub flagged: bool,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct GradientReport {
    pub entries: Vec<GradientCheckEntry>,
}

impl GradientReport {
    pub fn all_pass(&self) -> bool {
        self.entries.iter().all(|e| !e.flagged)
    }
}

pub const GRADIENT_FLAG_THRESHOLD: f64 = 1e-4;

/// Compares [`GpModel::nlml_grad`] with central differences in constrained
/// coordinates, step `step·max(1, |θ|)`.
pub fn check_gradients<T: Scalar>(model: &GpModel<T>, step: T) -> Result<GradientReport> {
    check_gradients_with(model, step, |m| m.nlml_grad())
}

/// [`check_gradients`] against an arbitrary analytic-gradient routine.
pub fn check_gradients_with<T: Scalar>(
    model: &GpModel<T>,
    step: T,
    analytic: impl Fn(&GpModel<T>) -> Result<Vec<T>>,
) -> Result<GradientReport> {
    let params = trainable_params(model);
    if params.is_empty() {
        return Ok(GradientReport::default());
    }
    let grad = analytic(model)?;
    let theta: Vec<T> = params.iter().map(|(_, v)| *v).collect();
    let mut entries = Vec::with_capacity(params.len());
    for (i, (desc, v)) in params.iter().enumerate() {
        let mut h = step * v.abs().max(T::one());
        if desc.transform == Transform::Softplus {
            h = h.min((*v - desc.lower_bound) * T::lit(0.5));
        }
        let mut up = theta.clone();
        up[i] = *v + h;
        let mut dn = theta.clone();
        dn[i] = *v - h;
        let fu = with_constrained(model, &up)?.nlml()?;
        let fd = with_constrained(model, &dn)?.nlml()?;
        let numeric = ((fu - fd) / (h + h)).as_f64();
        let a = grad[i].as_f64();
        let diff = (a - numeric).abs();
        let rel_error = diff / a.abs().max(numeric.abs()).max(f64::MIN_POSITIVE);
        entries.push(GradientCheckEntry {
            path: desc.path.clone(),
            analytic: a,
            numeric,
            rel_error,
            flagged: rel_error > GRADIENT_FLAG_THRESHOLD && diff > 1e-8,
        });
    }
    Ok(GradientReport { entries })
}
