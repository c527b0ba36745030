//! Exact scalars: rationals and rational multiples of half-integer powers of π.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, Zero};
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

/// Exact rational scalar used throughout the crate.
pub type Q = BigRational;

/// Rational from an integer.
pub fn qi(v: i64) -> Q {
    Q::from_integer(BigInt::from(v))
}

/// Rational a/b.
pub fn qr(a: i64, b: i64) -> Q {
    Q::new(BigInt::from(a), BigInt::from(b))
}

/// n! as a rational.
pub fn factorial(n: usize) -> Q {
    let mut acc = BigInt::one();
    for i in 2..=n {
        acc *= BigInt::from(i);
    }
    Q::from_integer(acc)
}

/// Binomial coefficient C(n, k) as a rational (0 when out of range).
pub fn binomial(n: i64, k: i64) -> Q {
    if k < 0 || k > n {
        return Q::zero();
    }
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for i in 0..k {
        num *= BigInt::from(n - i);
        den *= BigInt::from(i + 1);
    }
    Q::new(num, den)
}

/// Element of ℚ[√π, 1/√π]: a finite sum Σ cⱼ · π^(j/2) keyed by the
/// half-power j. Sphere volumes and spherical moments of monomials all live
/// here, which keeps polytope evaluations exact.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct PiScalar {
    terms: BTreeMap<i32, Q>,
}

impl PiScalar {
    pub fn zero() -> Self {
        PiScalar::default()
    }

    pub fn from_q(c: Q) -> Self {
        let mut t = BTreeMap::new();
        if !c.is_zero() {
            t.insert(0, c);
        }
        PiScalar { terms: t }
    }

    pub fn one() -> Self {
        Self::from_q(Q::one())
    }

    /// c · π^(half_pow/2).
    pub fn monomial(c: Q, half_pow: i32) -> Self {
        let mut t = BTreeMap::new();
        if !c.is_zero() {
            t.insert(half_pow, c);
        }
        PiScalar { terms: t }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// The single (coefficient, half-power) pair, if the scalar is a monomial.
    pub fn as_monomial(&self) -> Option<(&Q, i32)> {
        if self.terms.len() == 1 {
            let (&p, c) = self.terms.iter().next().unwrap();
            Some((c, p))
        } else {
            None
        }
    }

    /// Purely rational value, if no π factor is present.
    pub fn as_rational(&self) -> Option<Q> {
        if self.is_zero() {
            return Some(Q::zero());
        }
        match self.as_monomial() {
            Some((c, 0)) => Some(c.clone()),
            _ => None,
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (i32, &Q)> {
        self.terms.iter().map(|(&p, c)| (p, c))
    }

    /// Division by a monomial scalar (gamma-function ratios stay monomial).
    pub fn div_monomial(&self, other: &PiScalar) -> PiScalar {
        let (c, p) = other
            .as_monomial()
            .expect("division only by monomial PiScalar");
        let mut out = BTreeMap::new();
        for (&q, a) in &self.terms {
            out.insert(q - p, a / c);
        }
        PiScalar { terms: out }
    }

    pub fn scale(&self, c: &Q) -> PiScalar {
        if c.is_zero() {
            return PiScalar::zero();
        }
        PiScalar {
            terms: self.terms.iter().map(|(&p, a)| (p, a * c)).collect(),
        }
    }

    pub fn to_f64(&self) -> f64 {
        let pi = std::f64::consts::PI;
        self.terms
            .iter()
            .map(|(&p, c)| q_to_f64(c) * pi.powf(p as f64 / 2.0))
            .sum()
    }

    /// Γ(two_a / 2) for positive integer `two_a`, as a rational times √π^(0|1).
    pub fn gamma_half(two_a: i64) -> PiScalar {
        assert!(two_a > 0, "gamma_half needs a positive half-integer");
        if two_a % 2 == 0 {
            PiScalar::from_q(factorial((two_a / 2 - 1) as usize))
        } else {
            // Γ(m + 1/2) = (2m)! / (4^m m!) √π
            let m = (two_a - 1) / 2;
            let c = factorial(2 * m as usize)
                / (factorial(m as usize) * Q::from_integer(BigInt::from(4).pow(m as u32)));
            PiScalar::monomial(c, 1)
        }
    }

    /// vol Sᵈ = 2 π^((d+1)/2) / Γ((d+1)/2).
    pub fn sphere_volume(d: usize) -> PiScalar {
        let num = PiScalar::monomial(qi(2), d as i32 + 1);
        num.div_monomial(&PiScalar::gamma_half(d as i64 + 1))
    }
}

pub fn q_to_f64(q: &Q) -> f64 {
    let digits = 18u32;
    let scale = BigInt::from(10u32).pow(digits);
    let scaled = (q.numer() * &scale) / q.denom();
    let (sign, mag) = (scaled.is_negative(), scaled.magnitude().clone());
    let mut v = 0.0f64;
    for d in mag.to_u64_digits().iter().rev() {
        v = v * 1.8446744073709552e19 + *d as f64;
    }
    let v = v / 10f64.powi(digits as i32);
    if sign {
        -v
    } else {
        v
    }
}

impl Add for PiScalar {
    type Output = PiScalar;
    fn add(self, rhs: PiScalar) -> PiScalar {
        let mut out = self;
        out += rhs;
        out
    }
}

impl AddAssign for PiScalar {
    fn add_assign(&mut self, rhs: PiScalar) {
        for (p, c) in rhs.terms {
            let e = self.terms.entry(p).or_insert_with(Q::zero);
            *e += c;
            if e.is_zero() {
                self.terms.remove(&p);
            }
        }
    }
}

impl Sub for PiScalar {
    type Output = PiScalar;
    fn sub(self, rhs: PiScalar) -> PiScalar {
        self + (-rhs)
    }
}

impl Neg for PiScalar {
    type Output = PiScalar;
    fn neg(self) -> PiScalar {
        PiScalar {
            terms: self.terms.into_iter().map(|(p, c)| (p, -c)).collect(),
        }
    }
}

impl Mul for PiScalar {
    type Output = PiScalar;
    fn mul(self, rhs: PiScalar) -> PiScalar {
        let mut out = PiScalar::zero();
        for (&p, a) in &self.terms {
            for (&q, b) in &rhs.terms {
                out += PiScalar::monomial(a * b, p + q);
            }
        }
        out
    }
}

impl fmt::Display for PiScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (&p, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            if p == 0 {
                write!(f, "{c}")?;
            } else {
                let pi_part = match p {
                    2 => "pi".to_string(),
                    _ if p % 2 == 0 => format!("pi^{}", p / 2),
                    _ => format!("pi^({p}/2)"),
                };
                if c.is_one() {
                    write!(f, "{pi_part}")?;
                } else {
                    write!(f, "{c}*{pi_part}")?;
                }
            }
        }
        Ok(())
    }
}

impl fmt::Debug for PiScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sphere_volumes() {
        // s_0 = 2, s_1 = 2π, s_2 = 4π, s_3 = 2π²
        assert_eq!(PiScalar::sphere_volume(0), PiScalar::from_q(qi(2)));
        assert_eq!(PiScalar::sphere_volume(1), PiScalar::monomial(qi(2), 2));
        assert_eq!(PiScalar::sphere_volume(2), PiScalar::monomial(qi(4), 2));
        assert_eq!(PiScalar::sphere_volume(3), PiScalar::monomial(qi(2), 4));
        assert_eq!(
            PiScalar::sphere_volume(4),
            PiScalar::monomial(qr(8, 3), 4)
        );
    }

    #[test]
    fn gamma_values() {
        assert_eq!(PiScalar::gamma_half(2), PiScalar::one()); // Γ(1)
        assert_eq!(PiScalar::gamma_half(1), PiScalar::monomial(qi(1), 1)); // Γ(1/2)=√π
        assert_eq!(PiScalar::gamma_half(3), PiScalar::monomial(qr(1, 2), 1));
        assert_eq!(PiScalar::gamma_half(8), PiScalar::from_q(qi(6))); // Γ(4)=6
    }

    #[test]
    fn display_forms() {
        assert_eq!(PiScalar::monomial(qi(6), 2).to_string(), "6*pi");
        assert_eq!(PiScalar::from_q(qi(-4)).to_string(), "-4");
        assert_eq!(PiScalar::monomial(qi(2), 4).to_string(), "2*pi^2");
    }

    #[test]
    fn f64_roundtrip() {
        let v = PiScalar::monomial(qr(1, 2), 2);
        assert!((v.to_f64() - std::f64::consts::PI / 2.0).abs() < 1e-12);
    }
}
