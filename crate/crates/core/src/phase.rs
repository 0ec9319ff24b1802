//! Exact phases in Q/Z. `Phase::new(p, q)` stands for exp(2πi p/q).

use std::fmt;
use std::ops::{Add, AddAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_integer::Integer;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::linalg::C64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Phase {
    num: i64,
    den: i64,
}

impl Default for Phase {
    fn default() -> Self {
        Phase::ZERO
    }
}

impl Phase {
    pub const ZERO: Phase = Phase { num: 0, den: 1 };

    /// Reduces `num/den` into `[0, 1)` in lowest terms. Panics on `den == 0`.
    pub fn new(num: i64, den: i64) -> Phase {
        assert!(den != 0, "phase denominator must be nonzero");
        let (mut n, mut d) = (num as i128, den as i128);
        if d < 0 {
            n = -n;
            d = -d;
        }
        n = n.rem_euclid(d);
        let g = n.gcd(&d).max(1);
        Phase { num: (n / g) as i64, den: (d / g) as i64 }
    }

    pub fn num(&self) -> i64 {
        self.num
    }

    pub fn den(&self) -> i64 {
        self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num == 0
    }

    /// Value in turns, in `[0, 1)`.
    pub fn turns(&self) -> f64 {
        self.num as f64 / self.den as f64
    }

    pub fn to_complex(&self) -> C64 {
        let t = 2.0 * std::f64::consts::PI * self.turns();
        C64::new(t.cos(), t.sin())
    }

    pub fn scale(&self, k: i64) -> Phase {
        Phase::new(((self.num as i128 * k as i128).rem_euclid(self.den as i128)) as i64, self.den)
    }

    /// Closest phase `p/q` with `q` dividing `bound`, if within `tol` turns.
    pub fn snap(turns: f64, bound: u64, tol: f64) -> Result<Phase> {
        if bound == 0 || !turns.is_finite() {
            return Err(Error::PhaseSnap { value: turns, bound, tol });
        }
        let t = turns.rem_euclid(1.0);
        let b = bound as f64;
        let k = (t * b).round();
        let err = (t - k / b).abs();
        if err > tol {
            return Err(Error::PhaseSnap { value: turns, bound, tol });
        }
        Ok(Phase::new(k as i64, bound as i64))
    }

    /// Snap the argument of a unit-modulus complex number.
    pub fn snap_complex(z: C64, bound: u64, tol: f64) -> Result<Phase> {
        let turns = z.arg() / (2.0 * std::f64::consts::PI);
        Phase::snap(turns, bound, tol)
    }
}

impl Add for Phase {
    type Output = Phase;
    fn add(self, o: Phase) -> Phase {
        let l = self.den.lcm(&o.den);
        let a = self.num as i128 * (l / self.den) as i128 + o.num as i128 * (l / o.den) as i128;
        Phase::new((a.rem_euclid(l as i128)) as i64, l)
    }
}

impl AddAssign for Phase {
    fn add_assign(&mut self, o: Phase) {
        *self = *self + o;
    }
}

impl Neg for Phase {
    type Output = Phase;
    fn neg(self) -> Phase {
        Phase::new(-self.num, self.den)
    }
}

impl Sub for Phase {
    type Output = Phase;
    fn sub(self, o: Phase) -> Phase {
        self + (-o)
    }
}

impl SubAssign for Phase {
    fn sub_assign(&mut self, o: Phase) {
        *self = *self - o;
    }
}

impl std::iter::Sum for Phase {
    fn sum<I: Iterator<Item = Phase>>(iter: I) -> Phase {
        iter.fold(Phase::ZERO, |a, b| a + b)
    }
}

impl fmt::Display for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.num == 0 {
            write!(f, "0")
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

impl FromStr for Phase {
    type Err = Error;
    fn from_str(s: &str) -> Result<Phase> {
        let s = s.trim();
        let bad = || Error::Parse(format!("phase {s:?} is not of the form p/q"));
        match s.split_once('/') {
            Some((p, q)) => {
                let p: i64 = p.trim().parse().map_err(|_| bad())?;
                let q: i64 = q.trim().parse().map_err(|_| bad())?;
                if q == 0 {
                    return Err(bad());
                }
                Ok(Phase::new(p, q))
            }
            None => {
                let p: i64 = s.parse().map_err(|_| bad())?;
                Ok(Phase::new(p, 1))
            }
        }
    }
}

impl Serialize for Phase {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Phase {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Phase, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reduces_mod_one() {
        assert_eq!(Phase::new(5, 4), Phase::new(1, 4));
        assert_eq!(Phase::new(-1, 4), Phase::new(3, 4));
        assert_eq!(Phase::new(2, 4).to_string(), "1/2");
        assert_eq!(Phase::new(4, 4), Phase::ZERO);
    }

    #[test]
    fn arithmetic() {
        assert_eq!(Phase::new(1, 4) + Phase::new(1, 3), Phase::new(7, 12));
        assert_eq!(Phase::new(1, 4) - Phase::new(1, 2), Phase::new(3, 4));
        assert_eq!(-Phase::new(1, 3), Phase::new(2, 3));
    }

    #[test]
    fn snapping() {
        assert_eq!(Phase::snap(0.2500000001, 16, 1e-6).unwrap(), Phase::new(1, 4));
        assert_eq!(Phase::snap(-0.25, 16, 1e-6).unwrap(), Phase::new(3, 4));
        assert!(Phase::snap(0.1, 4, 1e-6).is_err());
        let z = C64::new(0.0, 1.0);
        assert_eq!(Phase::snap_complex(z, 4, 1e-9).unwrap(), Phase::new(1, 4));
    }

    #[test]
    fn parse_round_trip() {
        for s in ["0", "1/2", "3/8"] {
            let p: Phase = s.parse().unwrap();
            assert_eq!(p.to_string(), s);
        }
        assert!("1/0".parse::<Phase>().is_err());
    }
}
