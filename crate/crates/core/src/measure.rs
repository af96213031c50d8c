//! Exact rationals with denominator dividing 4.
//!
//! Euler measures and point measures of integer domains always live in
//! `¼ℤ`, so they are stored as an integer count of quarters.

use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use serde::{Serialize, Serializer};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Quarter(i64);

impl Quarter {
    pub const ZERO: Quarter = Quarter(0);
    pub const ONE: Quarter = Quarter(4);

    pub const fn from_quarters(q: i64) -> Self {
        Quarter(q)
    }

    pub const fn from_int(n: i64) -> Self {
        Quarter(4 * n)
    }

    pub const fn quarters(self) -> i64 {
        self.0
    }

    pub const fn is_integer(self) -> bool {
        self.0 % 4 == 0
    }

    pub fn to_integer(self) -> Option<i64> {
        self.is_integer().then_some(self.0 / 4)
    }
}

impl Add for Quarter {
    type Output = Quarter;
    fn add(self, rhs: Quarter) -> Quarter {
        Quarter(self.0 + rhs.0)
    }
}

impl AddAssign for Quarter {
    fn add_assign(&mut self, rhs: Quarter) {
        self.0 += rhs.0;
    }
}

impl Sub for Quarter {
    type Output = Quarter;
    fn sub(self, rhs: Quarter) -> Quarter {
        Quarter(self.0 - rhs.0)
    }
}

impl Neg for Quarter {
    type Output = Quarter;
    fn neg(self) -> Quarter {
        Quarter(-self.0)
    }
}

impl Mul<i64> for Quarter {
    type Output = Quarter;
    fn mul(self, rhs: i64) -> Quarter {
        Quarter(self.0 * rhs)
    }
}

impl Sum for Quarter {
    fn sum<I: Iterator<Item = Quarter>>(iter: I) -> Quarter {
        iter.fold(Quarter::ZERO, Add::add)
    }
}

impl fmt::Display for Quarter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (n, d) = match self.0 % 4 {
            0 => return write!(f, "{}", self.0 / 4),
            2 | -2 => (self.0 / 2, 2),
            _ => (self.0, 4),
        };
        write!(f, "{n}/{d}")
    }
}

impl Serialize for Quarter {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}
