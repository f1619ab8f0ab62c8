//! Second-order jet arithmetic in three variables.
//!
//! A [`Jet2`] carries a value together with its exact gradient and Hessian;
//! arithmetic propagates both through the chain rule, so derivatives of a
//! whole expression tree come out exact to roundoff. A [`Jet1`] carries only
//! the gradient and is used to differentiate quantities (Reeb field, unit
//! normal, frame fields) that are algebraic in already-evaluated 2-jets.

use crate::error::EvalError;

/// Symmetric Hessian storage order: xx, xy, xz, yy, yz, zz.
pub const HESS_INDEX: [[usize; 3]; 3] = [[0, 1, 2], [1, 3, 4], [2, 4, 5]];

/// Value, gradient and Hessian of a scalar field at a point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jet2 {
    pub value: f64,
    pub grad: [f64; 3],
    /// Upper triangle in the order xx, xy, xz, yy, yz, zz.
    pub hess: [f64; 6],
}

impl Jet2 {
    pub fn constant(value: f64) -> Self {
        Jet2 { value, grad: [0.0; 3], hess: [0.0; 6] }
    }

    /// Jet of the coordinate function with index `axis` (0 = x, 1 = y, 2 = z).
    pub fn coordinate(axis: usize, value: f64) -> Self {
        let mut grad = [0.0; 3];
        grad[axis] = 1.0;
        Jet2 { value, grad, hess: [0.0; 6] }
    }

    pub fn hess_at(&self, i: usize, j: usize) -> f64 {
        self.hess[HESS_INDEX[i][j]]
    }

    pub fn hess_matrix(&self) -> [[f64; 3]; 3] {
        let mut m = [[0.0; 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                m[i][j] = self.hess_at(i, j);
            }
        }
        m
    }

    pub fn recip(self) -> Result<Self, EvalError> {
        if self.value == 0.0 {
            return Err(EvalError::DivisionByZero);
        }
        let inv = 1.0 / self.value;
        // (1/f)' = -f'/f², (1/f)'' = -f''/f² + 2 f'⊗f'/f³
        Ok(self.chain(inv, -inv * inv, 2.0 * inv * inv * inv))
    }

    /// Quotient with a division-by-zero guard (hence not `std::ops::Div`).
    #[allow(clippy::should_implement_trait)]
    pub fn div(self, rhs: Self) -> Result<Self, EvalError> {
        Ok(self * rhs.recip()?)
    }

    pub fn exp(self) -> Self {
        let e = self.value.exp();
        self.chain(e, e, e)
    }

    pub fn sin(self) -> Self {
        let (s, c) = self.value.sin_cos();
        self.chain(s, c, -s)
    }

    pub fn cos(self) -> Self {
        let (s, c) = self.value.sin_cos();
        self.chain(c, -s, -c)
    }

    pub fn sqrt(self) -> Result<Self, EvalError> {
        if self.value <= 0.0 {
            return Err(EvalError::SqrtNonPositive { arg: self.value });
        }
        let r = self.value.sqrt();
        Ok(self.chain(r, 0.5 / r, -0.25 / (r * self.value)))
    }

    pub fn log(self) -> Result<Self, EvalError> {
        if self.value <= 0.0 {
            return Err(EvalError::LogNonPositive { arg: self.value });
        }
        let inv = 1.0 / self.value;
        Ok(self.chain(self.value.ln(), inv, -inv * inv))
    }

    /// Integer power by repeated multiplication; negative exponents via recip.
    pub fn powi(self, n: i32) -> Result<Self, EvalError> {
        if n < 0 {
            return self.powi(-n)?.recip();
        }
        let mut acc = Jet2::constant(1.0);
        for _ in 0..n {
            acc = acc * self;
        }
        Ok(acc)
    }

    /// Real power, defined only for positive base.
    pub fn powf(self, r: f64) -> Result<Self, EvalError> {
        if self.value <= 0.0 {
            return Err(EvalError::PowNonPositiveBase { base: self.value });
        }
        let v = self.value.powf(r);
        let d1 = r * self.value.powf(r - 1.0);
        let d2 = r * (r - 1.0) * self.value.powf(r - 2.0);
        Ok(self.chain(v, d1, d2))
    }

    /// Chain rule for a scalar function u applied to this jet:
    /// value u(f), gradient u'(f) f', Hessian u''(f) f'⊗f' + u'(f) f''.
    fn chain(self, u: f64, du: f64, d2u: f64) -> Self {
        let mut hess = [0.0; 6];
        for i in 0..3 {
            for j in i..3 {
                let k = HESS_INDEX[i][j];
                hess[k] = d2u * self.grad[i] * self.grad[j] + du * self.hess[k];
            }
        }
        Jet2 { value: u, grad: self.grad.map(|g| du * g), hess }
    }
}

impl std::ops::Neg for Jet2 {
    type Output = Jet2;
    fn neg(self) -> Jet2 {
        Jet2 {
            value: -self.value,
            grad: self.grad.map(|g| -g),
            hess: self.hess.map(|h| -h),
        }
    }
}

impl std::ops::Add for Jet2 {
    type Output = Jet2;
    fn add(self, rhs: Jet2) -> Jet2 {
        Jet2 {
            value: self.value + rhs.value,
            grad: std::array::from_fn(|i| self.grad[i] + rhs.grad[i]),
            hess: std::array::from_fn(|k| self.hess[k] + rhs.hess[k]),
        }
    }
}

impl std::ops::Sub for Jet2 {
    type Output = Jet2;
    fn sub(self, rhs: Jet2) -> Jet2 {
        self + (-rhs)
    }
}

#[allow(clippy::suspicious_arithmetic_impl)] // product rule mixes + and *
impl std::ops::Mul for Jet2 {
    /// Product rule: (fg)'' = f''g + f'⊗g' + g'⊗f' + fg''.
    type Output = Jet2;
    fn mul(self, rhs: Jet2) -> Jet2 {
        let mut hess = [0.0; 6];
        for i in 0..3 {
            for j in i..3 {
                let k = HESS_INDEX[i][j];
                hess[k] = self.hess[k] * rhs.value
                    + self.grad[i] * rhs.grad[j]
                    + self.grad[j] * rhs.grad[i]
                    + self.value * rhs.hess[k];
            }
        }
        Jet2 {
            value: self.value * rhs.value,
            grad: std::array::from_fn(|i| {
                self.grad[i] * rhs.value + self.value * rhs.grad[i]
            }),
            hess,
        }
    }
}

/// First-order jet: value plus gradient.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jet1 {
    pub value: f64,
    pub grad: [f64; 3],
}

impl Jet1 {
    pub fn constant(value: f64) -> Self {
        Jet1 { value, grad: [0.0; 3] }
    }

    /// Forgets the Hessian of a 2-jet.
    pub fn from_jet2(j: Jet2) -> Self {
        Jet1 { value: j.value, grad: j.grad }
    }

    pub fn sqrt(self) -> Self {
        let r = self.value.sqrt();
        Jet1 { value: r, grad: self.grad.map(|g| 0.5 * g / r) }
    }

    pub fn scale(self, s: f64) -> Self {
        Jet1 { value: s * self.value, grad: self.grad.map(|g| s * g) }
    }
}

impl std::ops::Neg for Jet1 {
    type Output = Jet1;
    fn neg(self) -> Jet1 {
        Jet1 { value: -self.value, grad: self.grad.map(|g| -g) }
    }
}

impl std::ops::Add for Jet1 {
    type Output = Jet1;
    fn add(self, rhs: Jet1) -> Jet1 {
        Jet1 {
            value: self.value + rhs.value,
            grad: std::array::from_fn(|i| self.grad[i] + rhs.grad[i]),
        }
    }
}

impl std::ops::Sub for Jet1 {
    type Output = Jet1;
    fn sub(self, rhs: Jet1) -> Jet1 {
        self + (-rhs)
    }
}

#[allow(clippy::suspicious_arithmetic_impl)] // product rule mixes + and *
impl std::ops::Mul for Jet1 {
    type Output = Jet1;
    fn mul(self, rhs: Jet1) -> Jet1 {
        Jet1 {
            value: self.value * rhs.value,
            grad: std::array::from_fn(|i| self.grad[i] * rhs.value + self.value * rhs.grad[i]),
        }
    }
}

#[allow(clippy::suspicious_arithmetic_impl)] // quotient rule mixes ops
impl std::ops::Div for Jet1 {
    type Output = Jet1;
    fn div(self, rhs: Jet1) -> Jet1 {
        let inv = 1.0 / rhs.value;
        let q = self.value * inv;
        Jet1 {
            value: q,
            grad: std::array::from_fn(|i| (self.grad[i] - q * rhs.grad[i]) * inv),
        }
    }
}
