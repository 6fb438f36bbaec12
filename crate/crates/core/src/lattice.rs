//! Rank-one lattice `L = Zα` with `<α,α> = 2pp'` and its dual `Z α/(2pp')`.

use num_integer::Integer;

use crate::error::{Error, Result};
use crate::Rational;

/// Coprime pair `(p, p')`, both at least 2.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Params {
    p: u32,
    p_prime: u32,
}

impl Params {
    pub fn new(p: u32, p_prime: u32) -> Result<Self> {
        if p < 2 || p_prime < 2 {
            return Err(Error::InvalidParams { p, p_prime, reason: "both must be at least 2" });
        }
        if p.gcd(&p_prime) != 1 {
            return Err(Error::InvalidParams { p, p_prime, reason: "must be coprime" });
        }
        Ok(Self { p, p_prime })
    }

    pub fn p(&self) -> i64 {
        i64::from(self.p)
    }

    pub fn p_prime(&self) -> i64 {
        i64::from(self.p_prime)
    }

    /// `<α,α> = 2pp'`; also the number of dual-lattice cosets.
    pub fn norm(&self) -> i64 {
        2 * self.p() * self.p_prime()
    }

    /// Exact central charge `1 - 6(p-p')^2/(pp')`.
    pub fn central_charge(&self) -> Rational {
        let d = self.p() - self.p_prime();
        Rational::from_integer(1) - Rational::new(6 * d * d, self.p() * self.p_prime())
    }

    /// `p/(p-p')`.
    pub fn nu(&self) -> Rational {
        Rational::new(self.p(), self.p() - self.p_prime())
    }

    /// Smallest conformal weight of any charged vacuum, `-(p-p')^2/(4pp')`.
    /// No state of any coset module has lower weight.
    pub fn weight_floor(&self) -> Rational {
        let d = self.p() - self.p_prime();
        Rational::new(-d * d, 2 * self.norm())
    }

    pub fn alpha(&self) -> DualVector {
        DualVector(self.norm())
    }

    /// `α/p'`, the charge of the screening current behind `Q`.
    pub fn alpha_over_p_prime(&self) -> DualVector {
        DualVector(2 * self.p())
    }

    /// `-α/p`, the charge of the screening current behind `Q̃`.
    pub fn minus_alpha_over_p(&self) -> DualVector {
        DualVector(-2 * self.p_prime())
    }

    /// `α/p' - α/p`.
    pub fn screening_difference(&self) -> DualVector {
        DualVector(2 * self.p() - 2 * self.p_prime())
    }

    /// `α/2`.
    pub fn half_alpha(&self) -> DualVector {
        DualVector(self.p() * self.p_prime())
    }
}

/// The dual-lattice point `k α/(2pp')`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DualVector(pub i64);

impl DualVector {
    pub fn k(self) -> i64 {
        self.0
    }

    /// Residue of `k` modulo `2pp'`; zero exactly for points of `L`.
    pub fn coset(self, params: &Params) -> i64 {
        self.0.rem_euclid(params.norm())
    }

    pub fn in_lattice(self, params: &Params) -> bool {
        self.coset(params) == 0
    }

    pub fn pairing(self, other: DualVector, params: &Params) -> Rational {
        pairing(self, other, params)
    }

    /// Conformal weight of the charged vacuum `e^{kα/(2pp')}`.
    pub fn weight(self, params: &Params) -> Rational {
        charge_weight(self.0, params)
    }
}

impl core::ops::Add for DualVector {
    type Output = DualVector;

    fn add(self, rhs: DualVector) -> DualVector {
        DualVector(self.0 + rhs.0)
    }
}

impl core::ops::Neg for DualVector {
    type Output = DualVector;

    fn neg(self) -> DualVector {
        DualVector(-self.0)
    }
}

pub fn pairing(a: DualVector, b: DualVector, params: &Params) -> Rational {
    Rational::new(a.0 * b.0, params.norm())
}

/// `k^2/(4pp') - (p-p')k/(2pp')`.
pub fn charge_weight(k: i64, params: &Params) -> Rational {
    let d = params.p() - params.p_prime();
    Rational::new(k * k - 2 * d * k, 2 * params.norm())
}
