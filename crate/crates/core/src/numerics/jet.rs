//! Truncated Taylor series ("jets") with complex coefficients.
//!
//! A jet of order K at x0 stores c_k = f^{(k)}(x0) / k! for k <= K.

use num_complex::Complex64 as C64;
use std::ops::{Add, Mul, Neg, Sub};

#[derive(Debug, Clone, PartialEq)]
pub struct Jet(pub Vec<C64>);

impl Jet {
    pub fn constant(c: C64, order: usize) -> Jet {
        let mut v = vec![C64::new(0.0, 0.0); order + 1];
        v[0] = c;
        Jet(v)
    }

    pub fn zero(order: usize) -> Jet {
        Jet(vec![C64::new(0.0, 0.0); order + 1])
    }

    /// The identity function x at x0.
    pub fn variable(x0: f64, order: usize) -> Jet {
        let mut j = Jet::constant(C64::new(x0, 0.0), order);
        if order >= 1 {
            j.0[1] = C64::new(1.0, 0.0);
        }
        j
    }

    pub fn order(&self) -> usize {
        self.0.len() - 1
    }

    pub fn value(&self) -> C64 {
        self.0[0]
    }

    /// k-th derivative at the expansion point.
    pub fn derivative(&self, k: usize) -> C64 {
        self.0[k] * crate::numerics::factorial(k)
    }

    pub fn scale(&self, a: C64) -> Jet {
        Jet(self.0.iter().map(|c| c * a).collect())
    }

    pub fn add_const(&self, a: C64) -> Jet {
        let mut j = self.clone();
        j.0[0] += a;
        j
    }

    pub fn recip(&self) -> Jet {
        let n = self.0.len();
        let g = &self.0;
        let mut r = vec![C64::new(0.0, 0.0); n];
        r[0] = 1.0 / g[0];
        for k in 1..n {
            let mut s = C64::new(0.0, 0.0);
            for j in 1..=k {
                s += g[j] * r[k - j];
            }
            r[k] = -s * r[0];
        }
        Jet(r)
    }

    pub fn exp(&self) -> Jet {
        let n = self.0.len();
        let g = &self.0;
        let mut e = vec![C64::new(0.0, 0.0); n];
        e[0] = g[0].exp();
        for k in 1..n {
            let mut s = C64::new(0.0, 0.0);
            for j in 1..=k {
                s += g[j] * e[k - j] * j as f64;
            }
            e[k] = s / k as f64;
        }
        Jet(e)
    }

    /// g^a with the principal branch at g(x0); requires g(x0) != 0.
    pub fn powc(&self, a: C64) -> Jet {
        let n = self.0.len();
        let g = &self.0;
        let mut p = vec![C64::new(0.0, 0.0); n];
        p[0] = (a * g[0].ln()).exp();
        for k in 1..n {
            let mut s = C64::new(0.0, 0.0);
            for j in 1..=k {
                s += g[j] * p[k - j] * (a * j as f64 - (k - j) as f64);
            }
            p[k] = s / (g[0] * k as f64);
        }
        Jet(p)
    }

    /// Integer power by repeated multiplication.
    pub fn powi(&self, m: u32) -> Jet {
        let mut r = Jet::constant(C64::new(1.0, 0.0), self.order());
        for _ in 0..m {
            r = &r * self;
        }
        r
    }

    /// f o g where `self` is the jet of f at g(x0) and `inner` is the jet of g at x0.
    pub fn compose(&self, inner: &Jet) -> Jet {
        let n = inner.0.len().min(self.0.len());
        let mut h = inner.clone();
        h.0.truncate(n);
        h.0[0] = C64::new(0.0, 0.0);
        let mut out = Jet::constant(self.0[0], n - 1);
        let mut hp = Jet::constant(C64::new(1.0, 0.0), n - 1);
        for k in 1..n {
            hp = &hp * &h;
            for (o, c) in out.0.iter_mut().zip(&hp.0) {
                *o += self.0[k] * c;
            }
        }
        out
    }

    /// Jet of x -> f(x / c) at x0, given the jet of f at x0 / c.
    pub fn dilate(&self, c: f64) -> Jet {
        let mut f = 1.0;
        Jet(self
            .0
            .iter()
            .map(|v| {
                let r = v * f;
                f /= c;
                r
            })
            .collect())
    }

    /// Formal derivative: jet of f' of order K - 1.
    pub fn differentiate(&self) -> Jet {
        if self.0.len() == 1 {
            return Jet::zero(0);
        }
        Jet(self
            .0
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, c)| c * k as f64)
            .collect())
    }

    pub fn truncate(&self, order: usize) -> Jet {
        Jet(self.0[..=order.min(self.order())].to_vec())
    }
}

impl Add for &Jet {
    type Output = Jet;
    fn add(self, o: &Jet) -> Jet {
        Jet(self.0.iter().zip(&o.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &Jet {
    type Output = Jet;
    fn sub(self, o: &Jet) -> Jet {
        Jet(self.0.iter().zip(&o.0).map(|(a, b)| a - b).collect())
    }
}

impl Neg for &Jet {
    type Output = Jet;
    fn neg(self) -> Jet {
        Jet(self.0.iter().map(|a| -a).collect())
    }
}

impl Mul for &Jet {
    type Output = Jet;
    fn mul(self, o: &Jet) -> Jet {
        let n = self.0.len().min(o.0.len());
        let mut r = vec![C64::new(0.0, 0.0); n];
        for i in 0..n {
            if self.0[i] == C64::new(0.0, 0.0) {
                continue;
            }
            for j in 0..n - i {
                r[i + j] += self.0[i] * o.0[j];
            }
        }
        Jet(r)
    }
}
