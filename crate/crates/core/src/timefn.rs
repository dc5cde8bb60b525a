//! Shared handles to time-dependent coefficients.

use std::fmt;
use std::ops::Add;
use std::sync::Arc;

use num_complex::Complex64;

/// A cheaply clonable function of time.
///
/// `TimeFn<Complex64>` carries the (possibly complex) NLS coefficients and
/// noise stand-ins; `TimeFn<f64>` carries the real RLW coefficients.
pub struct TimeFn<T = Complex64> {
    f: Arc<dyn Fn(f64) -> T + Send + Sync>,
    constant: Option<T>,
}

impl<T: Copy> Clone for TimeFn<T> {
    fn clone(&self) -> Self {
        Self {
            f: Arc::clone(&self.f),
            constant: self.constant,
        }
    }
}

impl<T: Copy + fmt::Debug> fmt::Debug for TimeFn<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.constant {
            Some(c) => write!(f, "TimeFn::constant({c:?})"),
            None => write!(f, "TimeFn(<fn>)"),
        }
    }
}

impl<T: Copy + Send + Sync + 'static> TimeFn<T> {
    pub fn new(f: impl Fn(f64) -> T + Send + Sync + 'static) -> Self {
        Self {
            f: Arc::new(f),
            constant: None,
        }
    }

    pub fn constant(value: T) -> Self {
        Self {
            f: Arc::new(move |_| value),
            constant: Some(value),
        }
    }

    #[inline]
    pub fn eval(&self, t: f64) -> T {
        (self.f)(t)
    }

    /// The value if this handle was built with [`TimeFn::constant`].
    pub fn as_constant(&self) -> Option<T> {
        self.constant
    }

    pub fn map<U: Copy + Send + Sync + 'static>(
        &self,
        g: impl Fn(T) -> U + Send + Sync + 'static,
    ) -> TimeFn<U> {
        match self.constant {
            Some(c) => TimeFn::constant(g(c)),
            None => {
                let f = Arc::clone(&self.f);
                TimeFn::new(move |t| g(f(t)))
            }
        }
    }
}

impl<T> TimeFn<T>
where
    T: Copy + Send + Sync + Add<Output = T> + 'static,
{
    pub fn plus(&self, other: &TimeFn<T>) -> TimeFn<T> {
        if let (Some(a), Some(b)) = (self.constant, other.constant) {
            return TimeFn::constant(a + b);
        }
        let f = Arc::clone(&self.f);
        let g = Arc::clone(&other.f);
        TimeFn::new(move |t| f(t) + g(t))
    }
}

impl TimeFn<f64> {
    pub fn to_complex(&self) -> TimeFn<Complex64> {
        self.map(|v| Complex64::new(v, 0.0))
    }
}

impl From<f64> for TimeFn<f64> {
    fn from(v: f64) -> Self {
        TimeFn::constant(v)
    }
}

impl From<f64> for TimeFn<Complex64> {
    fn from(v: f64) -> Self {
        TimeFn::constant(Complex64::new(v, 0.0))
    }
}

impl From<Complex64> for TimeFn<Complex64> {
    fn from(v: Complex64) -> Self {
        TimeFn::constant(v)
    }
}
