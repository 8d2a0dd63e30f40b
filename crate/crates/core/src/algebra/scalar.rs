//! Scalars tagged with their exactness.

use std::cmp::Ordering;
use std::fmt;

use num_complex::Complex64;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::rational::{parse_rational, to_f64, Rational};

#[derive(Clone, Debug, PartialEq)]
pub enum Scalar {
    Exact(Rational),
    Approx(Complex64),
}

impl Scalar {
    pub fn to_complex(&self) -> Complex64 {
        match self {
            Scalar::Exact(q) => Complex64::new(to_f64(q), 0.0),
            Scalar::Approx(z) => *z,
        }
    }

    pub fn as_exact(&self) -> Option<&Rational> {
        match self {
            Scalar::Exact(q) => Some(q),
            Scalar::Approx(_) => None,
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Scalar::Exact(_))
    }

    pub fn is_zero(&self, tol: f64) -> bool {
        match self {
            Scalar::Exact(q) => q.is_zero(),
            Scalar::Approx(z) => z.norm() <= tol,
        }
    }

    /// The integer this scalar equals (exactly, or within `tol` for
    /// approximate values).
    pub fn as_integer(&self, tol: f64) -> Option<i64> {
        match self {
            Scalar::Exact(q) => q.is_integer().then(|| q.to_integer().to_i64()).flatten(),
            Scalar::Approx(z) => {
                let r = z.re.round();
                ((z.re - r).abs() <= tol && z.im.abs() <= tol).then_some(r as i64)
            }
        }
    }

    /// Equality: exact when both are exact, otherwise within `tol`.
    pub fn close_to(&self, other: &Scalar, tol: f64) -> bool {
        match (self, other) {
            (Scalar::Exact(a), Scalar::Exact(b)) => a == b,
            _ => (self.to_complex() - other.to_complex()).norm() <= tol,
        }
    }

    /// Order by real part, then imaginary part.
    pub fn cmp_re_im(&self, other: &Scalar) -> Ordering {
        match (self, other) {
            (Scalar::Exact(a), Scalar::Exact(b)) => a.cmp(b),
            _ => {
                let (a, b) = (self.to_complex(), other.to_complex());
                a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im))
            }
        }
    }
}

impl From<Rational> for Scalar {
    fn from(q: Rational) -> Self {
        Scalar::Exact(q)
    }
}

impl From<Complex64> for Scalar {
    fn from(z: Complex64) -> Self {
        Scalar::Approx(z)
    }
}

pub fn format_complex(z: Complex64) -> String {
    let scale = z.norm().max(1.0);
    if z.im.abs() <= 1e-12 * scale {
        format!("{:.9}", z.re)
    } else if z.re.abs() <= 1e-12 * scale {
        format!("{:.9}i", z.im)
    } else {
        format!("{:.9}{:+.9}i", z.re, z.im)
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Exact(q) => write!(f, "{q}"),
            Scalar::Approx(z) => write!(f, "~{}", format_complex(*z)),
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
enum Tagged {
    Exact(String),
    Approx([f64; 2]),
}

impl Serialize for Scalar {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Scalar::Exact(q) => Tagged::Exact(format!("{}/{}", q.numer(), q.denom())),
            Scalar::Approx(z) => Tagged::Approx([z.re, z.im]),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Scalar {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        match Tagged::deserialize(d)? {
            Tagged::Exact(s) => parse_rational(&s)
                .map(Scalar::Exact)
                .ok_or_else(|| serde::de::Error::custom(format!("bad rational `{s}`"))),
            Tagged::Approx([re, im]) => Ok(Scalar::Approx(Complex64::new(re, im))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rat;

    #[test]
    fn json_tags() {
        let e = Scalar::Exact(rat(-3, 2));
        assert_eq!(serde_json::to_string(&e).unwrap(), r#"{"exact":"-3/2"}"#);
        let a = Scalar::Approx(Complex64::new(0.5, -1.0));
        assert_eq!(serde_json::to_string(&a).unwrap(), r#"{"approx":[0.5,-1.0]}"#);
        for s in [e, a] {
            let back: Scalar = serde_json::from_str(&serde_json::to_string(&s).unwrap()).unwrap();
            assert_eq!(back, s);
        }
    }

    #[test]
    fn integer_snapping() {
        assert_eq!(
            Scalar::Approx(Complex64::new(5.0000001, 1e-9)).as_integer(1e-6),
            Some(5)
        );
        assert_eq!(Scalar::Approx(Complex64::new(5.01, 0.0)).as_integer(1e-6), None);
        assert_eq!(Scalar::Exact(rat(6, 1)).as_integer(0.0), Some(6));
        assert_eq!(Scalar::Exact(rat(1, 2)).as_integer(0.0), None);
    }
}
