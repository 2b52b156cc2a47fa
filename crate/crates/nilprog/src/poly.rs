//! Exact arithmetic for integer-coefficient univariate polynomials.
//!
//! `Polynomial` is the substrate all group elements act on. Coefficients are
//! unbounded integers: iterated shifts and commutators produce factorial and
//! binomial-product growth, and a silent overflow would corrupt every
//! injectivity count downstream. Values are immutable; every operation
//! returns a new canonical polynomial (no trailing zero coefficients).

use std::fmt;
use std::ops::{Add, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use serde::de::Error as _;
use serde::ser::{Error as _, SerializeSeq};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// Integer polynomial with `coeffs[i]` holding the coefficient of `x^i`.
/// The zero polynomial is the empty coefficient vector.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Polynomial {
    coeffs: Vec<BigInt>,
}

impl Polynomial {
    /// Builds a polynomial from ascending coefficients, dropping trailing zeros.
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Polynomial { coeffs }
    }

    pub fn zero() -> Self {
        Polynomial { coeffs: Vec::new() }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// The monomial `x^k`.
    pub fn monomial(k: usize) -> Self {
        let mut coeffs = vec![BigInt::zero(); k + 1];
        coeffs[k] = BigInt::from(1);
        Polynomial { coeffs }
    }

    pub fn constant(c: impl Into<BigInt>) -> Self {
        Polynomial::new(vec![c.into()])
    }

    /// Convenience constructor from machine integers (tests, CLI fixtures).
    pub fn from_coeffs(coeffs: &[i64]) -> Self {
        Polynomial::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    /// Ascending coefficients in canonical form.
    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// The substituted polynomial `p(x + a)`, expanded exactly.
    pub fn shift(&self, a: &BigInt) -> Polynomial {
        if a.is_zero() || self.is_zero() {
            return self.clone();
        }
        let mut acc = vec![BigInt::zero(); self.coeffs.len()];
        // pow holds (x + a)^i, extended one factor per iteration
        let mut pow = vec![BigInt::from(1)];
        for (i, c) in self.coeffs.iter().enumerate() {
            if i > 0 {
                let mut next = vec![BigInt::zero(); pow.len() + 1];
                for (j, pj) in pow.iter().enumerate() {
                    next[j + 1] += pj;
                    next[j] += pj * a;
                }
                pow = next;
            }
            if !c.is_zero() {
                for (j, pj) in pow.iter().enumerate() {
                    acc[j] += c * pj;
                }
            }
        }
        Polynomial::new(acc)
    }

    /// Evaluates at an integer point by Horner's scheme.
    pub fn eval(&self, t: &BigInt) -> BigInt {
        let mut acc = BigInt::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * t + c;
        }
        acc
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;

    fn add(self, rhs: &Polynomial) -> Polynomial {
        let (long, short) = if self.coeffs.len() >= rhs.coeffs.len() {
            (self, rhs)
        } else {
            (rhs, self)
        };
        let mut coeffs = long.coeffs.clone();
        for (i, c) in short.coeffs.iter().enumerate() {
            coeffs[i] += c;
        }
        Polynomial::new(coeffs)
    }
}

impl Add for Polynomial {
    type Output = Polynomial;

    fn add(self, rhs: Polynomial) -> Polynomial {
        &self + &rhs
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;

    fn neg(self) -> Polynomial {
        Polynomial {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl Neg for Polynomial {
    type Output = Polynomial;

    fn neg(self) -> Polynomial {
        -&self
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;

    fn sub(self, rhs: &Polynomial) -> Polynomial {
        self + &(-rhs)
    }
}

impl Sub for Polynomial {
    type Output = Polynomial;

    fn sub(self, rhs: Polynomial) -> Polynomial {
        &self - &rhs
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let sign_neg = c < &BigInt::zero();
            let abs = if sign_neg { -c } else { c.clone() };
            if first {
                if sign_neg {
                    write!(f, "-")?;
                }
                first = false;
            } else if sign_neg {
                write!(f, "-")?;
            } else {
                write!(f, "+")?;
            }
            let show_coeff = i == 0 || abs != BigInt::from(1);
            if show_coeff {
                write!(f, "{abs}")?;
            }
            match i {
                0 => {}
                1 => write!(f, "x")?,
                _ => write!(f, "x^{i}")?,
            }
        }
        Ok(())
    }
}

/// Serializes one unbounded integer as a JSON number, exact at any size.
pub(crate) fn serialize_bigint<S: Serializer>(
    value: &BigInt,
    serializer: S,
) -> std::result::Result<S::Ok, S::Error> {
    if let Some(v) = value.to_i64() {
        serializer.serialize_i64(v)
    } else {
        let n = serde_json::Number::from_str(&value.to_string())
            .map_err(|e| S::Error::custom(format!("integer out of range for encoder: {e}")))?;
        n.serialize(serializer)
    }
}

pub(crate) fn deserialize_bigint<'de, D: Deserializer<'de>>(
    deserializer: D,
) -> std::result::Result<BigInt, D::Error> {
    let n = serde_json::Number::deserialize(deserializer)?;
    BigInt::from_str(&n.to_string())
        .map_err(|_| D::Error::custom(format!("expected an integer, got {n}")))
}

impl Serialize for Polynomial {
    /// Wire form: the exact ascending coefficient sequence, `x^2+2x+1 <-> [1,2,1]`,
    /// zero polynomial `<-> []`.
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        struct Coeff<'a>(&'a BigInt);
        impl Serialize for Coeff<'_> {
            fn serialize<S: Serializer>(
                &self,
                serializer: S,
            ) -> std::result::Result<S::Ok, S::Error> {
                serialize_bigint(self.0, serializer)
            }
        }
        let mut seq = serializer.serialize_seq(Some(self.coeffs.len()))?;
        for c in &self.coeffs {
            seq.serialize_element(&Coeff(c))?;
        }
        seq.end()
    }
}

impl<'de> Deserialize<'de> for Polynomial {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let nums = Vec::<serde_json::Number>::deserialize(deserializer)?;
        let coeffs = nums
            .iter()
            .map(|n| {
                BigInt::from_str(&n.to_string())
                    .map_err(|_| D::Error::custom(format!("expected an integer, got {n}")))
            })
            .collect::<std::result::Result<Vec<_>, _>>()?;
        Ok(Polynomial::new(coeffs))
    }
}
