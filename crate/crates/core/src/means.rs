//! Deterministic trend functions `m(t)`.
//!
//! Mean parameters are unconstrained reals; they carry a trainable flag but no
//! bound.

use crate::error::{GpError, Result};
use crate::scalar::Scalar;

/// Unconstrained real coefficient.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Coef<T> {
    pub value: T,
    pub trainable: bool,
}

impl<T: Scalar> Coef<T> {
    pub fn new(value: T) -> Self {
        Self { value, trainable: true }
    }

    pub fn fixed(value: T) -> Self {
        Self { value, trainable: false }
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub enum MeanFn<T> {
    #[default]
    Zero,
    Constant {
        c: Coef<T>,
    },
    /// `m(t) = slope·t + intercept`.
    Linear {
        slope: Coef<T>,
        intercept: Coef<T>,
    },
}

impl<T: Scalar> MeanFn<T> {
    pub fn constant(c: T) -> Self {
        MeanFn::Constant { c: Coef::new(c) }
    }

    pub fn linear(slope: T, intercept: T) -> Self {
        MeanFn::Linear { slope: Coef::new(slope), intercept: Coef::new(intercept) }
    }

    pub fn eval(&self, t: T) -> T {
        match self {
            MeanFn::Zero => T::zero(),
            MeanFn::Constant { c } => c.value,
            MeanFn::Linear { slope, intercept } => slope.value * t + intercept.value,
        }
    }

    pub fn mean_vector(&self, x: &[T]) -> Vec<T> {
        x.iter().map(|&t| self.eval(t)).collect()
    }

    /// `∂m(x)/∂θ` for each trainable θ, in flatten order.
    pub fn mean_grads(&self, x: &[T]) -> Vec<Vec<T>> {
        let ones = || vec![T::one(); x.len()];
        match self {
            MeanFn::Zero => Vec::new(),
            MeanFn::Constant { c } => {
                if c.trainable {
                    vec![ones()]
                } else {
                    Vec::new()
                }
            }
            MeanFn::Linear { slope, intercept } => {
                let mut out = Vec::new();
                if slope.trainable {
                    out.push(x.to_vec());
                }
                if intercept.trainable {
                    out.push(ones());
                }
                out
            }
        }
    }

    fn coefs_mut(&mut self) -> Vec<(&'static str, &mut Coef<T>)> {
        match self {
            MeanFn::Zero => Vec::new(),
            MeanFn::Constant { c } => vec![("constant.c", c)],
            MeanFn::Linear { slope, intercept } => vec![("linear.A", slope), ("linear.b", intercept)],
        }
    }

    /// `(path, coefficient)` pairs, e.g. `linear.A`, `linear.b`.
    pub fn flatten_params(&self) -> Vec<(String, Coef<T>)> {
        match self {
            MeanFn::Zero => Vec::new(),
            MeanFn::Constant { c } => vec![("constant.c".into(), *c)],
            MeanFn::Linear { slope, intercept } => {
                vec![("linear.A".into(), *slope), ("linear.b".into(), *intercept)]
            }
        }
    }

    pub fn num_trainable(&self) -> usize {
        self.flatten_params().iter().filter(|(_, c)| c.trainable).count()
    }

    pub fn set_param(&self, path: &str, value: T, trainable: bool) -> Result<Self> {
        let mut out = self.clone();
        let slot = out
            .coefs_mut()
            .into_iter()
            .find(|(p, _)| *p == path)
            .map(|(_, c)| c)
            .ok_or_else(|| GpError::UnknownPath(path.to_owned()))?;
        *slot = Coef { value, trainable };
        Ok(out)
    }

    /// Visits trainable and fixed coefficients alike, in flatten order.
    pub fn visit_params_mut(&mut self, f: &mut impl FnMut(&str, &mut Coef<T>)) {
        for (p, c) in self.coefs_mut() {
            f(p, c);
        }
    }

    pub fn cast<U: Scalar>(&self) -> MeanFn<U> {
        let cc = |c: &Coef<T>| Coef { value: U::lit(c.value.as_f64()), trainable: c.trainable };
        match self {
            MeanFn::Zero => MeanFn::Zero,
            MeanFn::Constant { c } => MeanFn::Constant { c: cc(c) },
            MeanFn::Linear { slope, intercept } => MeanFn::Linear { slope: cc(slope), intercept: cc(intercept) },
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn mean_vectors() {
        assert_eq!(MeanFn::<f64>::Zero.mean_vector(&[1.0, 2.0, 3.0]), vec![0.0; 3]);
        assert_eq!(MeanFn::linear(1.0, 1.0).mean_vector(&[11.0]), vec![12.0]);
        assert_eq!(MeanFn::constant(-3.0).mean_vector(&[0.0, 100.0]), vec![-3.0, -3.0]);
    }

    #[test]
    fn gradients() {
        assert_eq!(MeanFn::constant(0.0).mean_grads(&[4.0, 5.0]), vec![vec![1.0, 1.0]]);
        assert_eq!(MeanFn::linear(0.0, 0.0).mean_grads(&[2.0]), vec![vec![2.0], vec![1.0]]);
        assert!(MeanFn::<f64>::Zero.mean_grads(&[2.0]).is_empty());
        let half_fixed = MeanFn::Linear { slope: Coef::fixed(1.0), intercept: Coef::new(0.0) };
        assert_eq!(half_fixed.mean_grads(&[2.0]), vec![vec![1.0]]);
    }

    #[test]
    fn flatten_and_set() {
        let m = MeanFn::linear(1.0, 1.0);
        let flat = m.flatten_params();
        assert_eq!(flat[0].0, "linear.A");
        assert_eq!(flat[1].0, "linear.b");
        assert_eq!((flat[0].1.value, flat[1].1.value), (1.0, 1.0));

        let m2 = m.set_param("linear.A", 4.84, true).unwrap();
        assert_eq!(m2.mean_vector(&[10.0]), vec![4.84 * 10.0 + 1.0]);
        assert_eq!(m.set_param("linear.c", 1.0, true), Err(GpError::UnknownPath("linear.c".into())));
        // negative values are legal
        assert!(m.set_param("linear.b", -42.14, true).is_ok());
    }

    proptest! {
        #[test]
        fn linear_is_exact(a in -10.0f64..10.0, b in -50.0f64..50.0, x in proptest::collection::vec(-100.0f64..100.0, 1..10)) {
            let v = MeanFn::linear(a, b).mean_vector(&x);
            for (vi, xi) in v.iter().zip(&x) {
                prop_assert_eq!(*vi, a * xi + b);
            }
        }

        #[test]
        fn grads_match_differences(a in -10.0f64..10.0, b in -50.0f64..50.0, x in proptest::collection::vec(-100.0f64..100.0, 1..10)) {
            let m = MeanFn::linear(a, b);
            let g = m.mean_grads(&x);
            for (k, (path, c)) in m.flatten_params().into_iter().enumerate() {
                let h = 1e-3;
                let up = m.set_param(&path, c.value + h, true).unwrap().mean_vector(&x);
                let dn = m.set_param(&path, c.value - h, true).unwrap().mean_vector(&x);
                for i in 0..x.len() {
                    let fd = (up[i] - dn[i]) / (2.0 * h);
                    prop_assert!((fd - g[k][i]).abs() < 1e-8 * (1.0 + fd.abs()));
                }
            }
        }
    }
}
