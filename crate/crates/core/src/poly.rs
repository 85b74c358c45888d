//! Univariate polynomials over the exact fields, and characteristic polynomials.

use std::fmt;

use crate::field::{FieldSpec, Scalar};
use crate::linalg::Matrix;

/// Coefficients stored lowest degree first, with no trailing zeros.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Poly {
    field: FieldSpec,
    coeffs: Vec<Scalar>,
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cs: Vec<String> = self.coeffs.iter().map(|c| c.to_string()).collect();
        write!(f, "Poly[{}]({})", self.field, cs.join(", "))
    }
}

impl Poly {
    pub fn new(field: FieldSpec, mut coeffs: Vec<Scalar>) -> Self {
        while coeffs.last().is_some_and(Scalar::is_zero) {
            coeffs.pop();
        }
        Poly { field, coeffs }
    }

    pub fn from_i64(field: FieldSpec, coeffs: &[i64]) -> Self {
        Poly::new(field, coeffs.iter().map(|&c| field.from_i64(c)).collect())
    }

    pub fn zero(field: FieldSpec) -> Self {
        Poly { field, coeffs: Vec::new() }
    }

    pub fn one(field: FieldSpec) -> Self {
        Poly { field, coeffs: vec![field.one()] }
    }

    /// x
    pub fn x(field: FieldSpec) -> Self {
        Poly { field, coeffs: vec![field.zero(), field.one()] }
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, with the zero polynomial reported as `None`.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&Scalar> {
        self.coeffs.last()
    }

    pub fn monic(&self) -> Poly {
        match self.leading() {
            None => self.clone(),
            Some(lc) => {
                let inv = lc.inv().expect("nonzero leading coefficient");
                Poly::new(self.field, self.coeffs.iter().map(|c| c * &inv).collect())
            }
        }
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let z = self.field.zero();
        let c = (0..n)
            .map(|i| self.coeffs.get(i).unwrap_or(&z) + other.coeffs.get(i).unwrap_or(&z))
            .collect();
        Poly::new(self.field, c)
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.scale(&-self.field.one()))
    }

    pub fn scale(&self, s: &Scalar) -> Poly {
        Poly::new(self.field, self.coeffs.iter().map(|c| c * s).collect())
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero(self.field);
        }
        let mut c = vec![self.field.zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                c[i + j] = &c[i + j] + &(a * b);
            }
        }
        Poly::new(self.field, c)
    }

    /// Quotient and remainder; panics on division by zero.
    pub fn div_rem(&self, divisor: &Poly) -> (Poly, Poly) {
        let dd = divisor.degree().expect("division by the zero polynomial");
        let inv = divisor.leading().unwrap().inv().expect("nonzero leading coefficient");
        let mut rem = self.coeffs.clone();
        let Some(sd) = self.degree() else {
            return (Poly::zero(self.field), Poly::zero(self.field));
        };
        if sd < dd {
            return (Poly::zero(self.field), self.clone());
        }
        let mut quot = vec![self.field.zero(); sd - dd + 1];
        for k in (0..=sd - dd).rev() {
            let c = &rem[k + dd] * &inv;
            if c.is_zero() {
                continue;
            }
            for (j, d) in divisor.coeffs.iter().enumerate() {
                rem[k + j] = &rem[k + j] - &(&c * d);
            }
            quot[k] = c;
        }
        (Poly::new(self.field, quot), Poly::new(self.field, rem))
    }

    pub fn rem(&self, divisor: &Poly) -> Poly {
        self.div_rem(divisor).1
    }

    /// Monic greatest common divisor (zero when both are zero).
    pub fn gcd(&self, other: &Poly) -> Poly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn derivative(&self) -> Poly {
        let c = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c * &self.field.from_i64(i as i64))
            .collect();
        Poly::new(self.field, c)
    }

    pub fn eval(&self, x: &Scalar) -> Scalar {
        self.coeffs.iter().rev().fold(self.field.zero(), |acc, c| acc * x + c)
    }

    /// Horner evaluation at a square matrix.
    pub fn eval_matrix(&self, m: &Matrix) -> Matrix {
        let n = m.rows();
        let mut acc = Matrix::zeros(self.field, n, n);
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(m).add(&Matrix::scalar(self.field, n, c.clone()));
        }
        acc
    }
}

/// Characteristic polynomial det(xI - m) via Hessenberg reduction.
pub fn charpoly(m: &Matrix) -> Poly {
    assert!(m.is_square(), "characteristic polynomial of a non-square matrix");
    let field = m.field();
    let n = m.rows();
    let mut h = m.to_rows();
    for col in 1..n.saturating_sub(1) {
        let Some(i) = (col..n).find(|&i| !h[i][col - 1].is_zero()) else {
            continue;
        };
        if i != col {
            h.swap(i, col);
            for row in h.iter_mut() {
                row.swap(i, col);
            }
        }
        let t = h[col][col - 1].inv().expect("nonzero pivot");
        for i in col + 1..n {
            let u = &h[i][col - 1] * &t;
            if u.is_zero() {
                continue;
            }
            for j in 0..n {
                let v = &h[i][j] - &(&u * &h[col][j]);
                h[i][j] = v;
            }
            for row in h.iter_mut() {
                let v = &row[col] + &(&u * &row[i]);
                row[col] = v;
            }
        }
    }
    let mut ps: Vec<Poly> = vec![Poly::one(field)];
    for k in 1..=n {
        let lin = Poly::new(field, vec![-&h[k - 1][k - 1], field.one()]);
        let mut p = lin.mul(&ps[k - 1]);
        let mut t = field.one();
        for i in 1..k {
            t = t * &h[k - i][k - i - 1];
            if t.is_zero() {
                break;
            }
            let c = &t * &h[k - i - 1][k - 1];
            p = p.sub(&ps[k - i - 1].scale(&c));
        }
        ps.push(p);
    }
    ps.pop().unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    const Q: FieldSpec = FieldSpec::Rational;

    #[test]
    fn division_and_gcd() {
        // (x-1)(x+2) and (x-1)(x-3)
        let a = Poly::from_i64(Q, &[-2, 1, 1]);
        let b = Poly::from_i64(Q, &[3, -4, 1]);
        assert_eq!(a.gcd(&b), Poly::from_i64(Q, &[-1, 1]));
        let (q, r) = a.div_rem(&Poly::from_i64(Q, &[-1, 1]));
        assert_eq!(q, Poly::from_i64(Q, &[2, 1]));
        assert!(r.is_zero());
    }

    #[test]
    fn charpoly_small() {
        let m = Matrix::from_i64(Q, &[&[0, -1], &[1, 0]]);
        assert_eq!(charpoly(&m), Poly::from_i64(Q, &[1, 0, 1]));
        let z = Matrix::zeros(Q, 3, 3);
        assert_eq!(charpoly(&z), Poly::from_i64(Q, &[0, 0, 0, 1]));
        assert_eq!(charpoly(&Matrix::zeros(Q, 0, 0)), Poly::one(Q));
    }

    #[test]
    fn cayley_hamilton_on_random_matrices() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for trial in 0..60 {
            let f = if trial % 3 == 0 { FieldSpec::prime(7).unwrap() } else { Q };
            let n = rng.gen_range(1..=6);
            let data = (0..n * n)
                .map(|_| if rng.gen_bool(0.4) { f.zero() } else { f.from_i64(rng.gen_range(-3..=3)) })
                .collect();
            let m = Matrix::new(f, n, n, data).unwrap();
            let p = charpoly(&m);
            assert_eq!(p.degree(), Some(n));
            assert!(p.leading().unwrap().is_one());
            assert!(p.eval_matrix(&m).is_zero());
            // trace appears as minus the subleading coefficient
            assert_eq!(-&p.coeffs()[n - 1], m.trace());
        }
    }
}
