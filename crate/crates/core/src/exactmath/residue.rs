//! Rational residues modulo 1 and modulo 2.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_integer::Integer;

/// A class in Q/Z stored as a reduced fraction num/den with 0 <= num < den.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ResidueQZ {
    num: i64,
    den: i64,
}

impl ResidueQZ {
    pub const ZERO: ResidueQZ = ResidueQZ { num: 0, den: 1 };

    /// The class of num/den. Panics if den is zero.
    pub fn new(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        let (num, den) = if den < 0 { (-num, -den) } else { (num, den) };
        let g = num.gcd(&den);
        let (num, den) = (num / g, den / g);
        ResidueQZ { num: num.rem_euclid(den), den }
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

    /// Multiplies by an integer.
    pub fn scale(self, k: i64) -> Self {
        let k = k.rem_euclid(self.den) as i128;
        ResidueQZ::new(((self.num as i128 * k) % self.den as i128) as i64, self.den)
    }

    /// Numerator over a denominator that is a multiple of ours.
    pub fn numerator_over(&self, level: i64) -> i64 {
        debug_assert_eq!(level % self.den, 0, "{level} is not a multiple of {}", self.den);
        self.num * (level / self.den)
    }

    /// The representative in [0, 1) as an exact fraction.
    pub fn lift(&self) -> num_rational::Ratio<i64> {
        num_rational::Ratio::new(self.num, self.den)
    }

    pub fn to_f64(&self) -> f64 {
        self.num as f64 / self.den as f64
    }

    /// Doubles the [0, 1) lift and reads the result mod 2.
    pub fn double_lift(&self) -> ResidueQ2Z {
        ResidueQ2Z::new(2 * self.num, self.den)
    }
}

impl Add for ResidueQZ {
    type Output = ResidueQZ;
    fn add(self, o: ResidueQZ) -> ResidueQZ {
        let l = self.den.lcm(&o.den);
        ResidueQZ::new(self.num * (l / self.den) + o.num * (l / o.den), l)
    }
}

impl Neg for ResidueQZ {
    type Output = ResidueQZ;
    fn neg(self) -> ResidueQZ {
        ResidueQZ::new(-self.num, self.den)
    }
}

impl Sub for ResidueQZ {
    type Output = ResidueQZ;
    fn sub(self, o: ResidueQZ) -> ResidueQZ {
        self + (-o)
    }
}

impl Mul<i64> for ResidueQZ {
    type Output = ResidueQZ;
    fn mul(self, k: i64) -> ResidueQZ {
        self.scale(k)
    }
}

impl fmt::Display for ResidueQZ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == 1 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

/// A class in Q/2Z stored as a reduced fraction num/den with 0 <= num < 2 den.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ResidueQ2Z {
    num: i64,
    den: i64,
}

impl ResidueQ2Z {
    pub fn new(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        let (num, den) = if den < 0 { (-num, -den) } else { (num, den) };
        let g = num.gcd(&den);
        let (num, den) = (num / g, den / g);
        ResidueQ2Z { num: num.rem_euclid(2 * den), den }
    }

    pub fn num(&self) -> i64 {
        self.num
    }

    pub fn den(&self) -> i64 {
        self.den
    }

    /// The image in Q/Z.
    pub fn mod_one(&self) -> ResidueQZ {
        ResidueQZ::new(self.num, self.den)
    }
}

impl fmt::Display for ResidueQ2Z {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == 1 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}
