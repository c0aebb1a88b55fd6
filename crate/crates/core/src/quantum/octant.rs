use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_4};
use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign, Neg, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// An angle `kπ/4` with `k ∈ 0..8`; arithmetic is mod 8 and therefore exact.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "u8", into = "u8")]
pub struct Octant(u8);

const S: f64 = FRAC_1_SQRT_2;

// e^{ikπ/4}; entries k and k+4 are exact negations of each other.
const PHASES: [(f64, f64); 8] = [
    (1.0, 0.0),
    (S, S),
    (0.0, 1.0),
    (-S, S),
    (-1.0, 0.0),
    (-S, -S),
    (0.0, -1.0),
    (S, -S),
];

impl Octant {
    pub const ZERO: Octant = Octant(0);
    pub const PI_4: Octant = Octant(1);
    pub const PI_2: Octant = Octant(2);
    pub const PI: Octant = Octant(4);
    pub const ALL: [Octant; 8] = [
        Octant(0),
        Octant(1),
        Octant(2),
        Octant(3),
        Octant(4),
        Octant(5),
        Octant(6),
        Octant(7),
    ];

    /// Reduces any integer multiple of `π/4` into `0..8`.
    pub const fn new(k: i64) -> Self {
        Octant(k.rem_euclid(8) as u8)
    }

    pub const fn k(self) -> u8 {
        self.0
    }

    pub fn radians(self) -> f64 {
        f64::from(self.0) * FRAC_PI_4
    }

    /// `e^{i kπ/4}` from an exact table.
    pub fn phase(self) -> Complex64 {
        let (re, im) = PHASES[self.0 as usize];
        Complex64::new(re, im)
    }

    /// Adds `π` when `flag` is set.
    pub fn plus_pi_if(self, flag: bool) -> Self {
        if flag {
            self + Octant::PI
        } else {
            self
        }
    }

    /// Negates when `flag` is set, i.e. `(-1)^flag · self`.
    pub fn negate_if(self, flag: bool) -> Self {
        if flag {
            -self
        } else {
            self
        }
    }

    /// Three-bit big-endian encoding `b2 b1 b0`.
    pub fn bits(self) -> [bool; 3] {
        [self.0 & 4 != 0, self.0 & 2 != 0, self.0 & 1 != 0]
    }

    pub fn from_bits(bits: [bool; 3]) -> Self {
        Octant((u8::from(bits[0]) << 2) | (u8::from(bits[1]) << 1) | u8::from(bits[2]))
    }
}

impl TryFrom<u8> for Octant {
    type Error = String;

    fn try_from(k: u8) -> Result<Self, Self::Error> {
        if k < 8 {
            Ok(Octant(k))
        } else {
            Err(format!("octant index {k} is not in 0..8"))
        }
    }
}

impl From<Octant> for u8 {
    fn from(o: Octant) -> u8 {
        o.0
    }
}

impl Add for Octant {
    type Output = Octant;
    fn add(self, rhs: Octant) -> Octant {
        Octant((self.0 + rhs.0) & 7)
    }
}

impl AddAssign for Octant {
    fn add_assign(&mut self, rhs: Octant) {
        *self = *self + rhs;
    }
}

impl Sub for Octant {
    type Output = Octant;
    fn sub(self, rhs: Octant) -> Octant {
        Octant((self.0 + 8 - rhs.0) & 7)
    }
}

impl Neg for Octant {
    type Output = Octant;
    fn neg(self) -> Octant {
        Octant((8 - self.0) & 7)
    }
}

impl Sum for Octant {
    fn sum<I: Iterator<Item = Octant>>(iter: I) -> Octant {
        iter.fold(Octant::ZERO, Add::add)
    }
}

impl<'a> Sum<&'a Octant> for Octant {
    fn sum<I: Iterator<Item = &'a Octant>>(iter: I) -> Octant {
        iter.copied().sum()
    }
}

impl fmt::Display for Octant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.0 {
            0 => write!(f, "0"),
            4 => write!(f, "π"),
            k => write!(f, "{k}π/4"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn phase_table_matches_radians() {
        for o in Octant::ALL {
            let z = Complex64::from_polar(1.0, o.radians());
            assert!((z - o.phase()).norm() < 1e-15, "{o}");
        }
    }

    #[test]
    fn half_turn_negates_phase_exactly() {
        for o in Octant::ALL {
            assert_eq!((o + Octant::PI).phase(), -o.phase());
        }
    }

    #[test]
    fn bit_encoding_round_trips() {
        for o in Octant::ALL {
            assert_eq!(Octant::from_bits(o.bits()), o);
        }
        assert_eq!(Octant::new(3).bits(), [false, true, true]);
    }

    #[test]
    fn serde_rejects_out_of_range() {
        assert!(serde_json::from_str::<Octant>("8").is_err());
        assert_eq!(serde_json::from_str::<Octant>("7").unwrap(), Octant::new(7));
    }

    proptest! {
        #[test]
        fn group_laws(a in 0i64..8, b in 0i64..8, c in 0i64..8) {
            let (a, b, c) = (Octant::new(a), Octant::new(b), Octant::new(c));
            prop_assert_eq!((a + b) + c, a + (b + c));
            prop_assert_eq!(a + b, b + a);
            prop_assert_eq!(a - b, a + (-b));
            prop_assert_eq!(-(-a), a);
            prop_assert_eq!(a + (-a), Octant::ZERO);
        }

        #[test]
        fn matches_integer_arithmetic(a in -100i64..100, b in -100i64..100) {
            prop_assert_eq!(Octant::new(a) + Octant::new(b), Octant::new(a + b));
            prop_assert_eq!(Octant::new(a) - Octant::new(b), Octant::new(a - b));
        }
    }
}
