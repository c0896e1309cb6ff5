//! The ring interface shared by every ambient ring a relation can live on.

use std::fmt;

use crate::error::Result;
use crate::padic::{PAdic, Rational};

/// A commutative ring element carrying enough context (prime, precision,
/// underlying space) to build constants next to itself.
pub trait RingElement: Clone + fmt::Debug + fmt::Display + Send + Sync {
    fn add(&self, other: &Self) -> Result<Self>;
    fn sub(&self, other: &Self) -> Result<Self>;
    fn mul(&self, other: &Self) -> Result<Self>;

    fn pow(&self, e: u32) -> Result<Self> {
        let mut acc = self.scalar(&Rational::from_integer(1.into()));
        for _ in 0..e {
            acc = acc.mul(self)?;
        }
        Ok(acc)
    }

    /// The image of `r` under `Q -> A`, shaped like `self`.
    fn scalar(&self, r: &Rational) -> Self;

    /// Raises working precision to `digits`, taking stored digits as exact.
    fn widen(&self, _digits: u32) -> Self {
        self.clone()
    }
}

impl RingElement for PAdic {
    fn add(&self, other: &Self) -> Result<Self> {
        PAdic::add(self, other)
    }
    fn sub(&self, other: &Self) -> Result<Self> {
        PAdic::sub(self, other)
    }
    fn mul(&self, other: &Self) -> Result<Self> {
        PAdic::mul(self, other)
    }
    fn pow(&self, e: u32) -> Result<Self> {
        Ok(PAdic::pow(self, e))
    }
    fn scalar(&self, r: &Rational) -> Self {
        PAdic::scalar(self, r)
    }
    fn widen(&self, digits: u32) -> Self {
        PAdic::widen(self, digits)
    }
}

impl RingElement for Rational {
    fn add(&self, other: &Self) -> Result<Self> {
        Ok(self + other)
    }
    fn sub(&self, other: &Self) -> Result<Self> {
        Ok(self - other)
    }
    fn mul(&self, other: &Self) -> Result<Self> {
        Ok(self * other)
    }
    fn pow(&self, e: u32) -> Result<Self> {
        Ok(num_traits::pow(self.clone(), e as usize))
    }
    fn scalar(&self, r: &Rational) -> Self {
        r.clone()
    }
}

