//! Covariance functions over scalar time and their sum/product compositions.
//!
//! A [`Kernel`] is a finite expression tree. Leaves own their hyperparameters
//! as [`Param`]s; every routine that lists parameters walks the tree
//! depth-first, left before right, so positions in a flattened list are stable.

use crate::error::{GpError, Result};
use crate::numlin::{Matrix, SymMatrix};
use crate::scalar::Scalar;

pub const DEFAULT_LOWER_BOUND: f64 = 1e-6;

/// A positive hyperparameter with a trainable flag and a strict lower bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Param<T> {
    pub value: T,
    pub trainable: bool,
    pub lower_bound: T,
}

impl<T: Scalar> Param<T> {
    /// Trainable parameter with the default lower bound. No validation.
    pub fn new(value: T) -> Self {
        Self { value, trainable: true, lower_bound: T::lit(DEFAULT_LOWER_BOUND) }
    }

    pub fn fixed(value: T) -> Self {
        Self { trainable: false, ..Self::new(value) }
    }

    pub fn with_trainable(mut self, trainable: bool) -> Self {
        self.trainable = trainable;
        self
    }

    pub fn check(&self, path: &str) -> Result<()> {
        if self.value >= self.lower_bound && self.value.is_finite() {
            Ok(())
        } else {
            Err(GpError::BoundViolation {
                path: path.to_owned(),
                value: self.value.as_f64(),
                bound: self.lower_bound.as_f64(),
            })
        }
    }

    pub fn cast<U: Scalar>(&self) -> Param<U> {
        Param {
            value: U::lit(self.value.as_f64()),
            trainable: self.trainable,
            lower_bound: U::lit(self.lower_bound.as_f64()),
        }
    }
}

/// Matérn smoothness: ν = 1/2, 3/2 or 5/2.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MaternOrder {
    Half,
    ThreeHalves,
    FiveHalves,
}

impl MaternOrder {
    pub fn name(self) -> &'static str {
        match self {
            MaternOrder::Half => "matern12",
            MaternOrder::ThreeHalves => "matern32",
            MaternOrder::FiveHalves => "matern52",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Kernel<T> {
    Constant { variance: Param<T> },
    White { variance: Param<T> },
    Linear { variance: Param<T> },
    SquaredExponential { variance: Param<T>, lengthscale: Param<T> },
    RationalQuadratic { variance: Param<T>, lengthscale: Param<T>, alpha: Param<T> },
    Matern { order: MaternOrder, variance: Param<T>, lengthscale: Param<T> },
    Sum(Box<Kernel<T>>, Box<Kernel<T>>),
    Product(Box<Kernel<T>>, Box<Kernel<T>>),
}

impl<T: Scalar> Kernel<T> {
    pub fn constant(variance: T) -> Self {
        Kernel::Constant { variance: Param::new(variance) }
    }

    pub fn white(variance: T) -> Self {
        Kernel::White { variance: Param::new(variance) }
    }

    pub fn linear(variance: T) -> Self {
        Kernel::Linear { variance: Param::new(variance) }
    }

    pub fn se(variance: T, lengthscale: T) -> Self {
        Kernel::SquaredExponential { variance: Param::new(variance), lengthscale: Param::new(lengthscale) }
    }

    pub fn rq(variance: T, lengthscale: T, alpha: T) -> Self {
        Kernel::RationalQuadratic {
            variance: Param::new(variance),
            lengthscale: Param::new(lengthscale),
            alpha: Param::new(alpha),
        }
    }

    pub fn matern(order: MaternOrder, variance: T, lengthscale: T) -> Self {
        Kernel::Matern { order, variance: Param::new(variance), lengthscale: Param::new(lengthscale) }
    }

    pub fn matern12(variance: T, lengthscale: T) -> Self {
        Self::matern(MaternOrder::Half, variance, lengthscale)
    }

    pub fn matern32(variance: T, lengthscale: T) -> Self {
        Self::matern(MaternOrder::ThreeHalves, variance, lengthscale)
    }

    pub fn matern52(variance: T, lengthscale: T) -> Self {
        Self::matern(MaternOrder::FiveHalves, variance, lengthscale)
    }

    pub fn sum(left: Self, right: Self) -> Self {
        Kernel::Sum(Box::new(left), Box::new(right))
    }

    pub fn product(left: Self, right: Self) -> Self {
        Kernel::Product(Box::new(left), Box::new(right))
    }

    /// Path segment naming this node.
    pub fn node_name(&self) -> &'static str {
        match self {
            Kernel::Constant { .. } => "constant",
            Kernel::White { .. } => "white",
            Kernel::Linear { .. } => "linear",
            Kernel::SquaredExponential { .. } => "se",
            Kernel::RationalQuadratic { .. } => "rq",
            Kernel::Matern { order, .. } => order.name(),
            Kernel::Sum(..) => "sum",
            Kernel::Product(..) => "product",
        }
    }

    /// True when the value depends only on `t - t'`.
    pub fn is_stationary(&self) -> bool {
        match self {
            Kernel::Linear { .. } => false,
            Kernel::Sum(a, b) | Kernel::Product(a, b) => a.is_stationary() && b.is_stationary(),
            _ => true,
        }
    }

    /// `k(t, t2)`.
    pub fn eval(&self, t: T, t2: T) -> T {
        let r = (t - t2).abs();
        match self {
            Kernel::Constant { variance } => variance.value,
            Kernel::White { variance } => {
                if t == t2 {
                    variance.value
                } else {
                    T::zero()
                }
            }
            Kernel::Linear { variance } => variance.value * (t * t2),
            Kernel::SquaredExponential { variance, lengthscale } => {
                let z = r / lengthscale.value;
                variance.value * (-T::lit(0.5) * z * z).exp()
            }
            Kernel::RationalQuadratic { variance, lengthscale, alpha } => {
                let z = r / lengthscale.value;
                let x = z * z / (T::lit(2.0) * alpha.value);
                variance.value * (-alpha.value * x.ln_1p()).exp()
            }
            Kernel::Matern { order, variance, lengthscale } => {
                variance.value * matern_shape(*order, r / lengthscale.value)
            }
            Kernel::Sum(a, b) => a.eval(t, t2) + b.eval(t, t2),
            Kernel::Product(a, b) => a.eval(t, t2) * b.eval(t, t2),
        }
    }

    /// `k(t, t2)` together with `∂k/∂θ` for each trainable θ, in flatten order.
    pub fn eval_with_grad(&self, t: T, t2: T, grads: &mut Vec<T>) -> T {
        let r = (t - t2).abs();
        let push = |grads: &mut Vec<T>, p: &Param<T>, g: T| {
            if p.trainable {
                grads.push(g);
            }
        };
        match self {
            Kernel::Constant { variance } => {
                push(grads, variance, T::one());
                variance.value
            }
            Kernel::White { variance } => {
                let delta = if t == t2 { T::one() } else { T::zero() };
                push(grads, variance, delta);
                variance.value * delta
            }
            Kernel::Linear { variance } => {
                push(grads, variance, t * t2);
                variance.value * (t * t2)
            }
            Kernel::SquaredExponential { variance, lengthscale } => {
                let l = lengthscale.value;
                let z = r / l;
                let shape = (-T::lit(0.5) * z * z).exp();
                let k = variance.value * shape;
                push(grads, variance, shape);
                push(grads, lengthscale, k * z * z / l);
                k
            }
            Kernel::RationalQuadratic { variance, lengthscale, alpha } => {
                let (l, a) = (lengthscale.value, alpha.value);
                let z = r / l;
                let x = z * z / (T::lit(2.0) * a);
                let log_u = x.ln_1p();
                let shape = (-a * log_u).exp();
                let k = variance.value * shape;
                let u = T::one() + x;
                push(grads, variance, shape);
                push(grads, lengthscale, k * z * z / (l * u));
                push(grads, alpha, k * (x / u - log_u));
                k
            }
            Kernel::Matern { order, variance, lengthscale } => {
                let l = lengthscale.value;
                let z = r / l;
                let shape = matern_shape(*order, z);
                push(grads, variance, shape);
                // ∂shape/∂l = -z/l · dshape/dz
                push(grads, lengthscale, -variance.value * matern_shape_dz(*order, z) * z / l);
                variance.value * shape
            }
            Kernel::Sum(a, b) => {
                let ka = a.eval_with_grad(t, t2, grads);
                let kb = b.eval_with_grad(t, t2, grads);
                ka + kb
            }
            Kernel::Product(a, b) => {
                let start = grads.len();
                let ka = a.eval_with_grad(t, t2, grads);
                let mid = grads.len();
                let kb = b.eval_with_grad(t, t2, grads);
                for g in &mut grads[start..mid] {
                    *g *= kb;
                }
                for g in &mut grads[mid..] {
                    *g *= ka;
                }
                ka * kb
            }
        }
    }

    /// Cross-covariance matrix with entry `(i, j) = k(x[i], x2[j])`.
    pub fn cov_matrix(&self, x: &[T], x2: &[T]) -> Result<Matrix<T>> {
        if x.is_empty() || x2.is_empty() {
            return Err(GpError::EmptyInput);
        }
        Ok(Matrix::from_fn(x.len(), x2.len(), |i, j| self.eval(x[i], x2[j])))
    }

    /// Exactly symmetric `K(x, x)`.
    pub fn cov_sym(&self, x: &[T]) -> Result<SymMatrix<T>> {
        SymMatrix::from_upper(x.len(), |i, j| self.eval(x[i], x[j]))
    }

    pub fn cov_diag(&self, x: &[T]) -> Vec<T> {
        x.iter().map(|&t| self.eval(t, t)).collect()
    }

    /// `∂K(x, x)/∂θ` for every trainable θ, in flatten order.
    pub fn grad_matrices(&self, x: &[T]) -> Result<Vec<Matrix<T>>> {
        if x.is_empty() {
            return Err(GpError::EmptyInput);
        }
        let n = x.len();
        let p = self.num_trainable();
        let mut out = vec![Matrix::zeros(n, n); p];
        let mut buf = Vec::with_capacity(p);
        for i in 0..n {
            for j in i..n {
                buf.clear();
                self.eval_with_grad(x[i], x[j], &mut buf);
                for (m, &g) in out.iter_mut().zip(&buf) {
                    m[(i, j)] = g;
                    m[(j, i)] = g;
                }
            }
        }
        Ok(out)
    }

    /// Visits every parameter with its path, depth-first and left to right.
    pub fn visit_params(&self, f: &mut impl FnMut(&str, &Param<T>)) {
        self.visit_inner(&mut String::new(), f);
    }

    fn visit_inner(&self, prefix: &mut String, f: &mut impl FnMut(&str, &Param<T>)) {
        let base = prefix.len();
        prefix.push_str(self.node_name());
        match self {
            Kernel::Sum(a, b) | Kernel::Product(a, b) => {
                let here = prefix.len();
                prefix.push_str(".left.");
                a.visit_inner(prefix, f);
                prefix.truncate(here);
                prefix.push_str(".right.");
                b.visit_inner(prefix, f);
            }
            _ => {
                for (name, p) in self.leaf_params() {
                    let here = prefix.len();
                    prefix.push('.');
                    prefix.push_str(name);
                    f(prefix, p);
                    prefix.truncate(here);
                }
            }
        }
        prefix.truncate(base);
    }

    /// Mutable counterpart of [`visit_params`](Self::visit_params), same order.
    pub fn visit_params_mut(&mut self, f: &mut impl FnMut(&str, &mut Param<T>)) {
        self.visit_inner_mut(&mut String::new(), f);
    }

    fn visit_inner_mut(&mut self, prefix: &mut String, f: &mut impl FnMut(&str, &mut Param<T>)) {
        let base = prefix.len();
        prefix.push_str(self.node_name());
        match self {
            Kernel::Sum(a, b) | Kernel::Product(a, b) => {
                let here = prefix.len();
                prefix.push_str(".left.");
                a.visit_inner_mut(prefix, f);
                prefix.truncate(here);
                prefix.push_str(".right.");
                b.visit_inner_mut(prefix, f);
            }
            _ => {
                for (name, p) in self.leaf_params_mut() {
                    let here = prefix.len();
                    prefix.push('.');
                    prefix.push_str(name);
                    f(prefix, p);
                    prefix.truncate(here);
                }
            }
        }
        prefix.truncate(base);
    }

    fn leaf_params(&self) -> Vec<(&'static str, &Param<T>)> {
        match self {
            Kernel::Constant { variance } | Kernel::White { variance } | Kernel::Linear { variance } => {
                vec![("variance", variance)]
            }
            Kernel::SquaredExponential { variance, lengthscale } | Kernel::Matern { variance, lengthscale, .. } => {
                vec![("variance", variance), ("lengthscale", lengthscale)]
            }
            Kernel::RationalQuadratic { variance, lengthscale, alpha } => {
                vec![("variance", variance), ("lengthscale", lengthscale), ("alpha", alpha)]
            }
            Kernel::Sum(..) | Kernel::Product(..) => Vec::new(),
        }
    }

    fn leaf_params_mut(&mut self) -> Vec<(&'static str, &mut Param<T>)> {
        match self {
            Kernel::Constant { variance } | Kernel::White { variance } | Kernel::Linear { variance } => {
                vec![("variance", variance)]
            }
            Kernel::SquaredExponential { variance, lengthscale } | Kernel::Matern { variance, lengthscale, .. } => {
                vec![("variance", variance), ("lengthscale", lengthscale)]
            }
            Kernel::RationalQuadratic { variance, lengthscale, alpha } => {
                vec![("variance", variance), ("lengthscale", lengthscale), ("alpha", alpha)]
            }
            Kernel::Sum(..) | Kernel::Product(..) => Vec::new(),
        }
    }

    /// All parameters with their paths, e.g. `sum.left.matern32.lengthscale`.
    pub fn flatten_params(&self) -> Vec<(String, Param<T>)> {
        let mut out = Vec::new();
        self.visit_params(&mut |path, p| out.push((path.to_owned(), *p)));
        out
    }

    pub fn num_trainable(&self) -> usize {
        let mut n = 0;
        self.visit_params(&mut |_, p| n += usize::from(p.trainable));
        n
    }

    /// Returns a copy with the parameter at `path` replaced.
    pub fn set_param(&self, path: &str, value: T, trainable: bool) -> Result<Self> {
        let mut out = self.clone();
        let mut found = None;
        out.visit_params_mut(&mut |p, param| {
            if p == path {
                let candidate = Param { value, trainable, lower_bound: param.lower_bound };
                found = Some(candidate.check(path).map(|()| *param = candidate));
            }
        });
        match found {
            Some(r) => r.map(|()| out),
            None => Err(GpError::UnknownPath(path.to_owned())),
        }
    }

    /// Checks every parameter against its bound.
    pub fn validate(&self) -> Result<()> {
        let mut res = Ok(());
        self.visit_params(&mut |path, p| {
            if res.is_ok() {
                res = p.check(path);
            }
        });
        res
    }

    pub fn cast<U: Scalar>(&self) -> Kernel<U> {
        match self {
            Kernel::Constant { variance } => Kernel::Constant { variance: variance.cast() },
            Kernel::White { variance } => Kernel::White { variance: variance.cast() },
            Kernel::Linear { variance } => Kernel::Linear { variance: variance.cast() },
            Kernel::SquaredExponential { variance, lengthscale } => {
                Kernel::SquaredExponential { variance: variance.cast(), lengthscale: lengthscale.cast() }
            }
            Kernel::RationalQuadratic { variance, lengthscale, alpha } => Kernel::RationalQuadratic {
                variance: variance.cast(),
                lengthscale: lengthscale.cast(),
                alpha: alpha.cast(),
            },
            Kernel::Matern { order, variance, lengthscale } => {
                Kernel::Matern { order: *order, variance: variance.cast(), lengthscale: lengthscale.cast() }
            }
            Kernel::Sum(a, b) => Kernel::Sum(Box::new(a.cast()), Box::new(b.cast())),
            Kernel::Product(a, b) => Kernel::Product(Box::new(a.cast()), Box::new(b.cast())),
        }
    }
}

/// Unit-variance Matérn correlation at scaled distance `z = |t - t'| / l`.
/// The 5/2 case uses the standard `5z²/3` quadratic term.
fn matern_shape<T: Scalar>(order: MaternOrder, z: T) -> T {
    match order {
        MaternOrder::Half => (-z).exp(),
        MaternOrder::ThreeHalves => {
            let s = T::lit(3.0).sqrt() * z;
            (T::one() + s) * (-s).exp()
        }
        MaternOrder::FiveHalves => {
            let s = T::lit(5.0).sqrt() * z;
            (T::one() + s + s * s / T::lit(3.0)) * (-s).exp()
        }
    }
}

fn matern_shape_dz<T: Scalar>(order: MaternOrder, z: T) -> T {
    match order {
        MaternOrder::Half => -(-z).exp(),
        MaternOrder::ThreeHalves => {
            let c = T::lit(3.0).sqrt();
            let s = c * z;
            -c * s * (-s).exp()
        }
        MaternOrder::FiveHalves => {
            let c = T::lit(5.0).sqrt();
            let s = c * z;
            -c * s * (T::one() + s) / T::lit(3.0) * (-s).exp()
        }
    }
}
