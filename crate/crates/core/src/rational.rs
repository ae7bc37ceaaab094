//! Exact rationals for expectation identities, printed as `p/q`.

use std::fmt;
use std::ops::{Add, AddAssign, Mul};

use num_rational::Ratio;
use num_traits::Zero;
use serde::{Serialize, Serializer};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Rational(Ratio<i128>);

impl Rational {
    pub fn new(numer: i128, denom: i128) -> Self {
        Rational(Ratio::new(numer, denom))
    }

    pub fn integer(value: i128) -> Self {
        Rational(Ratio::from_integer(value))
    }

    pub fn zero() -> Self {
        Rational(Ratio::zero())
    }

    pub fn numer(&self) -> i128 {
        *self.0.numer()
    }

    pub fn denom(&self) -> i128 {
        *self.0.denom()
    }

    pub fn floor(&self) -> i128 {
        self.0.floor().to_integer()
    }

    pub fn to_f64(&self) -> f64 {
        *self.0.numer() as f64 / *self.0.denom() as f64
    }
}

impl Add for Rational {
    type Output = Rational;
    fn add(self, rhs: Rational) -> Rational {
        Rational(self.0 + rhs.0)
    }
}

impl AddAssign for Rational {
    fn add_assign(&mut self, rhs: Rational) {
        self.0 += rhs.0;
    }
}

impl Mul for Rational {
    type Output = Rational;
    fn mul(self, rhs: Rational) -> Rational {
        Rational(self.0 * rhs.0)
    }
}

impl std::iter::Sum for Rational {
    fn sum<I: Iterator<Item = Rational>>(iter: I) -> Rational {
        iter.fold(Rational::zero(), |a, b| a + b)
    }
}

/// Always `p/q`, with `q = 1` for integers.
impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.numer(), self.denom())
    }
}

impl Serialize for Rational {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn display_is_always_a_fraction() {
        assert_eq!(Rational::integer(2).to_string(), "2/1");
        assert_eq!(Rational::new(15, 2).to_string(), "15/2");
        assert_eq!(Rational::new(4, 8).to_string(), "1/2");
        assert_eq!(serde_json::to_string(&Rational::new(1, 3)).unwrap(), "\"1/3\"");
    }

    #[test]
    fn floor_and_sum() {
        let s: Rational = [Rational::new(1, 2), Rational::new(1, 3), Rational::new(1, 6)].into_iter().sum();
        assert_eq!(s, Rational::integer(1));
        assert_eq!(Rational::new(15, 2).floor(), 7);
    }
}
