//! Exact Gaussian-process regression with a Gaussian likelihood.
//!
//! With residual `r = y − m(X)` and `C = K(X,X) + σ²·I + diag(extra)`:
//!
//! ```text
//! nlml      = ½ rᵀC⁻¹r + ½ ln|C| + (n/2) ln 2π
//! ∂nlml/∂θ  = ½ tr((C⁻¹ − ααᵀ) ∂C/∂θ) − αᵀ ∂m/∂θ,   α = C⁻¹r
//! mean(t*)  = m(t*) + k*ᵀ α
//! var(t*)   = k(t*,t*) − k*ᵀ C⁻¹ k*
//! ```

use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{GpError, Result};
use crate::kernels::{Kernel, Param};
use crate::means::MeanFn;
use crate::numlin::{cholesky_semidefinite, cholesky_with_jitter, dot, tri_solve_lower, CholFactor, Matrix};
use crate::scalar::Scalar;

/// Jitter ladder start for every factorization of a training covariance.
pub const BASE_JITTER: f64 = 1e-6;

/// Relative size of a negative predictive variance still treated as rounding.
const VARIANCE_CLAMP_REL: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq)]
pub struct GpModel<T> {
    kernel: Kernel<T>,
    mean: MeanFn<T>,
    likelihood_variance: Param<T>,
    x: Vec<T>,
    y: Vec<T>,
    extra_noise: Option<Vec<T>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PredictionKind {
    /// Latent function `f`.
    LatentF,
    /// Observations `y = f + ε`.
    ObservedY,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PredictionSet<T> {
    pub times: Vec<T>,
    pub means: Vec<T>,
    pub variances: Vec<T>,
    pub kind: PredictionKind,
}

/// Factorized training covariance and the weights it implies.
#[derive(Debug, Clone)]
pub struct Posterior<T> {
    pub chol: CholFactor<T>,
    pub residual: Vec<T>,
    pub alpha: Vec<T>,
}

impl<T: Scalar> GpModel<T> {
    pub fn new(
        kernel: Kernel<T>,
        mean: MeanFn<T>,
        likelihood_variance: Param<T>,
        x: Vec<T>,
        y: Vec<T>,
    ) -> Result<Self> {
        let model = Self { kernel, mean, likelihood_variance, x, y, extra_noise: None };
        model.validate()?;
        Ok(model)
    }

    /// Per-point observation variances added to the diagonal of `C`.
    pub fn with_extra_noise(mut self, extra: Vec<T>) -> Result<Self> {
        self.extra_noise = Some(extra);
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        if self.x.is_empty() {
            return Err(GpError::EmptyInput);
        }
        if self.x.len() != self.y.len() {
            return Err(GpError::DimensionMismatch { expected: self.x.len(), got: self.y.len() });
        }
        if self.x.iter().chain(&self.y).any(|v| !v.is_finite()) {
            return Err(GpError::InvalidModel("non-finite training data".into()));
        }
        if let Some(i) = self.x.windows(2).position(|w| w[1] <= w[0]) {
            return Err(GpError::UnorderedTimestamps(i + 1));
        }
        if let Some(extra) = &self.extra_noise {
            if extra.len() != self.x.len() {
                return Err(GpError::DimensionMismatch { expected: self.x.len(), got: extra.len() });
            }
            if extra.iter().any(|v| !(*v >= T::zero())) {
                return Err(GpError::InvalidModel("extra noise must be nonnegative".into()));
            }
        }
        self.likelihood_variance.check("likelihood.variance")?;
        self.kernel.validate()
    }

    pub fn kernel(&self) -> &Kernel<T> {
        &self.kernel
    }

    pub fn mean(&self) -> &MeanFn<T> {
        &self.mean
    }

    pub fn likelihood_variance(&self) -> &Param<T> {
        &self.likelihood_variance
    }

    pub fn x(&self) -> &[T] {
        &self.x
    }

    pub fn y(&self) -> &[T] {
        &self.y
    }

    pub fn extra_noise(&self) -> Option<&[T]> {
        self.extra_noise.as_deref()
    }

    pub fn len(&self) -> usize {
        self.x.len()
    }

    pub fn is_empty(&self) -> bool {
        self.x.is_empty()
    }

    pub(crate) fn kernel_mut(&mut self) -> &mut Kernel<T> {
        &mut self.kernel
    }

    pub(crate) fn mean_mut(&mut self) -> &mut MeanFn<T> {
        &mut self.mean
    }

    pub(crate) fn likelihood_variance_mut(&mut self) -> &mut Param<T> {
        &mut self.likelihood_variance
    }

    pub fn with_kernel(&self, kernel: Kernel<T>) -> Result<Self> {
        let m = Self { kernel, ..self.clone() };
        m.validate()?;
        Ok(m)
    }

    pub fn with_mean(&self, mean: MeanFn<T>) -> Self {
        Self { mean, ..self.clone() }
    }

    pub fn with_likelihood_variance(&self, p: Param<T>) -> Result<Self> {
        let m = Self { likelihood_variance: p, ..self.clone() };
        m.validate()?;
        Ok(m)
    }

    /// Training data replaced; hyperparameters kept.
    pub fn with_data(&self, x: Vec<T>, y: Vec<T>) -> Result<Self> {
        let m = Self { x, y, extra_noise: None, ..self.clone() };
        m.validate()?;
        Ok(m)
    }

    /// Number of trainable parameters across kernel, likelihood and mean.
    pub fn num_trainable(&self) -> usize {
        self.kernel.num_trainable() + usize::from(self.likelihood_variance.trainable) + self.mean.num_trainable()
    }

    /// `C = K(X,X) + σ²·I + diag(extra)`, factored.
    pub fn posterior(&self) -> Result<Posterior<T>> {
        let mut c = self.kernel.cov_sym(&self.x)?;
        c.add_scaled_identity(self.likelihood_variance.value);
        if let Some(extra) = &self.extra_noise {
            c.add_diagonal(extra);
        }
        let chol = cholesky_with_jitter(&c, T::lit(BASE_JITTER))?;
        let residual: Vec<T> = self.y.iter().zip(self.mean.mean_vector(&self.x)).map(|(&y, m)| y - m).collect();
        let alpha = chol.solve(&residual)?;
        Ok(Posterior { chol, residual, alpha })
    }

    pub fn nlml(&self) -> Result<T> {
        let post = self.posterior()?;
        Ok(nlml_from(&post))
    }

    /// Gradient in canonical order: kernel (flatten order), likelihood variance, mean.
    pub fn nlml_grad(&self) -> Result<Vec<T>> {
        self.nlml_and_grad().map(|(_, g)| g)
    }

    pub fn nlml_and_grad(&self) -> Result<(T, Vec<T>)> {
        let post = self.posterior()?;
        let value = nlml_from(&post);
        let n = self.x.len();
        let mut grad = Vec::with_capacity(self.num_trainable());
        if grad.capacity() == 0 {
            return Ok((value, grad));
        }
        let cinv = post.chol.inverse();
        let half = T::lit(0.5);
        let a = &post.alpha;
        let w = Matrix::from_fn(n, n, |i, j| cinv[(i, j)] - a[i] * a[j]);
        for dk in self.kernel.grad_matrices(&self.x)? {
            let tr = w.as_slice().iter().zip(dk.as_slice()).fold(T::zero(), |s, (&p, &q)| s + p * q);
            grad.push(half * tr);
        }
        if self.likelihood_variance.trainable {
            grad.push(half * (0..n).fold(T::zero(), |s, i| s + w[(i, i)]));
        }
        for dm in self.mean.mean_grads(&self.x) {
            grad.push(-dot(a, &dm));
        }
        Ok((value, grad))
    }

    pub fn predict_f(&self, xs: &[T]) -> Result<PredictionSet<T>> {
        if xs.is_empty() {
            return Err(GpError::EmptyInput);
        }
        let post = self.posterior()?;
        let cross = self.kernel.cov_matrix(&self.x, xs)?;
        let prior = self.kernel.cov_diag(xs);
        let prior_mean = self.mean.mean_vector(xs);
        let floor = T::lit(VARIANCE_CLAMP_REL).max(T::epsilon() * T::lit(100.0));
        let mut means = Vec::with_capacity(xs.len());
        let mut variances = Vec::with_capacity(xs.len());
        for (j, &t) in xs.iter().enumerate() {
            let ks = cross.column(j);
            means.push(prior_mean[j] + dot(&ks, &post.alpha));
            let v = tri_solve_lower(post.chol.lower(), &ks)?;
            let var = prior[j] - dot(&v, &v);
            if var < T::zero() {
                if -var > floor * prior[j].abs().max(T::min_positive_value()) {
                    return Err(GpError::NumericalBreakdown(format!("negative predictive variance {var} at t={t}")));
                }
                variances.push(T::zero());
            } else {
                variances.push(var);
            }
        }
        Ok(PredictionSet { times: xs.to_vec(), means, variances, kind: PredictionKind::LatentF })
    }

    pub fn predict_y(&self, xs: &[T]) -> Result<PredictionSet<T>> {
        let mut p = self.predict_f(xs)?;
        let s2 = self.likelihood_variance.value;
        p.variances.iter_mut().for_each(|v| *v += s2);
        p.kind = PredictionKind::ObservedY;
        Ok(p)
    }

    pub fn cast<U: Scalar>(&self) -> GpModel<U> {
        let v = |xs: &[T]| xs.iter().map(|x| U::lit(x.as_f64())).collect::<Vec<U>>();
        GpModel {
            kernel: self.kernel.cast(),
            mean: self.mean.cast(),
            likelihood_variance: self.likelihood_variance.cast(),
            x: v(&self.x),
            y: v(&self.y),
            extra_noise: self.extra_noise.as_deref().map(v),
        }
    }
}

fn nlml_from<T: Scalar>(post: &Posterior<T>) -> T {
    let half = T::lit(0.5);
    let n = T::from_usize_lossy(post.residual.len());
    half * dot(&post.residual, &post.alpha) + half * post.chol.log_det() + half * n * T::TAU().ln()
}

/// Draws `n_samples` functions from the prior `GP(m, k)` at `x`.
///
/// Uses a ChaCha20 stream seeded from `seed`, so draws are identical across
/// platforms. Sample `s` consumes normals `s·n .. (s+1)·n` of the stream.
pub fn sample_prior<T: Scalar>(
    kernel: &Kernel<T>,
    mean: &MeanFn<T>,
    x: &[T],
    n_samples: usize,
    seed: u64,
) -> Result<Vec<Vec<T>>> {
    if x.is_empty() || n_samples == 0 {
        return Err(GpError::EmptyInput);
    }
    let k = kernel.cov_sym(x)?;
    let lower = match cholesky_semidefinite(&k) {
        Some(l) => l,
        None => cholesky_with_jitter(&k, T::lit(BASE_JITTER))?.lower().clone(),
    };
    let m = mean.mean_vector(x);
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let n = x.len();
    Ok((0..n_samples)
        .map(|_| {
            let z: Vec<T> = (0..n).map(|_| T::lit(StandardNormal.sample(&mut rng))).collect();
            let lz = lower.matvec(&z);
            m.iter().zip(lz).map(|(&a, b)| a + b).collect()
        })
        .collect())
}
