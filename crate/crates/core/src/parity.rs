use std::fmt;
use std::ops::{Add, AddAssign};

use serde::{Deserialize, Serialize};

/// Z/2 grading of a variable, monomial or operator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
pub enum Parity {
    #[default]
    Even,
    Odd,
}

impl Parity {
    pub fn from_bool(odd: bool) -> Self {
        if odd {
            Parity::Odd
        } else {
            Parity::Even
        }
    }

    pub fn is_odd(self) -> bool {
        self == Parity::Odd
    }

    pub fn is_even(self) -> bool {
        self == Parity::Even
    }

    pub fn flip(self) -> Self {
        self + Parity::Odd
    }

    /// Product of two parities in Z/2, i.e. the exponent of the Koszul sign
    /// picked up when swapping objects of these parities.
    pub fn times(self, other: Parity) -> Parity {
        Parity::from_bool(self.is_odd() && other.is_odd())
    }

    /// `(-1)^self` as an integer.
    pub fn sign(self) -> i64 {
        if self.is_odd() {
            -1
        } else {
            1
        }
    }
}

impl Add for Parity {
    type Output = Parity;

    fn add(self, rhs: Parity) -> Parity {
        Parity::from_bool(self.is_odd() != rhs.is_odd())
    }
}

impl AddAssign for Parity {
    fn add_assign(&mut self, rhs: Parity) {
        *self = *self + rhs;
    }
}

impl std::iter::Sum for Parity {
    fn sum<I: Iterator<Item = Parity>>(iter: I) -> Parity {
        iter.fold(Parity::Even, Add::add)
    }
}

impl fmt::Display for Parity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Parity::Even => f.write_str("even"),
            Parity::Odd => f.write_str("odd"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::Parity::{Even, Odd};

    #[test]
    fn addition_is_mod_two() {
        assert_eq!(Even + Even, Even);
        assert_eq!(Even + Odd, Odd);
        assert_eq!(Odd + Even, Odd);
        assert_eq!(Odd + Odd, Even);
    }

    #[test]
    fn koszul_exponent() {
        assert_eq!(Odd.times(Odd), Odd);
        assert_eq!(Odd.times(Even), Even);
        assert_eq!(Odd.sign(), -1);
        assert_eq!([Odd, Odd, Odd].into_iter().sum::<super::Parity>(), Odd);
    }
}
