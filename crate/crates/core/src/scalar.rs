//! Exact Laurent polynomials in `q^{1/2}` with rational coefficients.
//!
//! Exponents are stored doubled, so `q^{1/2}` has key `1` and `q` has key `2`.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub};

use num_rational::Ratio;
use num_traits::{One, Signed, Zero};

pub type Rational = Ratio<i64>;

/// An element of `Q[q^{1/2}, q^{-1/2}]` in canonical form (no zero coefficients).
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct LaurentScalar {
    terms: BTreeMap<i64, Rational>,
}

impl LaurentScalar {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(1, 0)
    }

    /// `sign * q^{doubled_exponent / 2}`.
    pub fn monomial(sign: i64, doubled_exponent: i64) -> Self {
        Self::term(Rational::from_integer(sign), doubled_exponent)
    }

    pub fn term(coefficient: Rational, doubled_exponent: i64) -> Self {
        let mut terms = BTreeMap::new();
        if !coefficient.is_zero() {
            terms.insert(doubled_exponent, coefficient);
        }
        Self { terms }
    }

    /// `q^e` for an integer exponent `e`.
    pub fn q_pow(e: i64) -> Self {
        Self::monomial(1, 2 * e)
    }

    pub fn q() -> Self {
        Self::q_pow(1)
    }

    /// The quantum integer `[k] = q^{1-k} + q^{3-k} + ... + q^{k-1}`; `[0] = 0`.
    pub fn quantum_integer(k: u32) -> Self {
        let k = i64::from(k);
        (0..k).map(|r| Self::q_pow(2 * r + 1 - k)).sum()
    }

    /// Builds a scalar from `(doubled_exponent, numerator, denominator)` triples.
    /// Repeated exponents are summed.
    pub fn from_triples<I>(triples: I) -> Option<Self>
    where
        I: IntoIterator<Item = (i64, i64, i64)>,
    {
        let mut out = Self::zero();
        for (e, num, den) in triples {
            if den == 0 {
                return None;
            }
            out += Self::term(Rational::new(num, den), e);
        }
        Some(out)
    }

    /// `(doubled_exponent, numerator, denominator)` triples sorted by exponent.
    pub fn to_triples(&self) -> Vec<(i64, i64, i64)> {
        self.terms
            .iter()
            .map(|(&e, c)| (e, *c.numer(), *c.denom()))
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, doubled_exponent: i64) -> Rational {
        self.terms
            .get(&doubled_exponent)
            .copied()
            .unwrap_or_else(Rational::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, Rational)> + '_ {
        self.terms.iter().map(|(&e, &c)| (e, c))
    }

    /// Substitutes `q -> q^{-1}`.
    pub fn bar(&self) -> Self {
        Self {
            terms: self.terms.iter().map(|(&e, &c)| (-e, c)).collect(),
        }
    }

    /// Multiplies by `q^{doubled / 2}`.
    pub fn shift(&self, doubled: i64) -> Self {
        Self {
            terms: self.terms.iter().map(|(&e, &c)| (e + doubled, c)).collect(),
        }
    }

    /// Returns `(sign, doubled_exponent)` if `self` is `±q^{e/2}`.
    pub fn as_signed_monomial(&self) -> Option<(i64, i64)> {
        if self.terms.len() != 1 {
            return None;
        }
        let (&e, c) = self.terms.iter().next()?;
        if c.abs().is_one() {
            Some((c.signum().to_integer(), e))
        } else {
            None
        }
    }

    fn add_term(&mut self, e: i64, c: Rational) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(e).or_insert_with(Rational::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&e);
        }
    }
}

impl From<i64> for LaurentScalar {
    fn from(c: i64) -> Self {
        Self::monomial(c, 0)
    }
}

impl Add for &LaurentScalar {
    type Output = LaurentScalar;
    fn add(self, rhs: &LaurentScalar) -> LaurentScalar {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Add for LaurentScalar {
    type Output = LaurentScalar;
    fn add(mut self, rhs: LaurentScalar) -> LaurentScalar {
        self += &rhs;
        self
    }
}

impl AddAssign<&LaurentScalar> for LaurentScalar {
    fn add_assign(&mut self, rhs: &LaurentScalar) {
        for (&e, &c) in &rhs.terms {
            self.add_term(e, c);
        }
    }
}

impl AddAssign for LaurentScalar {
    fn add_assign(&mut self, rhs: LaurentScalar) {
        *self += &rhs;
    }
}

impl Neg for &LaurentScalar {
    type Output = LaurentScalar;
    fn neg(self) -> LaurentScalar {
        LaurentScalar {
            terms: self.terms.iter().map(|(&e, &c)| (e, -c)).collect(),
        }
    }
}

impl Neg for LaurentScalar {
    type Output = LaurentScalar;
    fn neg(self) -> LaurentScalar {
        -&self
    }
}

impl Sub for &LaurentScalar {
    type Output = LaurentScalar;
    fn sub(self, rhs: &LaurentScalar) -> LaurentScalar {
        self + &(-rhs)
    }
}

impl Sub for LaurentScalar {
    type Output = LaurentScalar;
    fn sub(self, rhs: LaurentScalar) -> LaurentScalar {
        &self - &rhs
    }
}

impl Mul for &LaurentScalar {
    type Output = LaurentScalar;
    fn mul(self, rhs: &LaurentScalar) -> LaurentScalar {
        let mut out = LaurentScalar::zero();
        for (&e1, &c1) in &self.terms {
            for (&e2, &c2) in &rhs.terms {
                out.add_term(e1 + e2, c1 * c2);
            }
        }
        out
    }
}

impl Mul for LaurentScalar {
    type Output = LaurentScalar;
    fn mul(self, rhs: LaurentScalar) -> LaurentScalar {
        &self * &rhs
    }
}

impl MulAssign<&LaurentScalar> for LaurentScalar {
    fn mul_assign(&mut self, rhs: &LaurentScalar) {
        *self = &*self * rhs;
    }
}

impl MulAssign for LaurentScalar {
    fn mul_assign(&mut self, rhs: LaurentScalar) {
        *self = &*self * &rhs;
    }
}

impl core::iter::Sum for LaurentScalar {
    fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(Self::zero(), |acc, x| acc + x)
    }
}

impl core::iter::Product for LaurentScalar {
    fn product<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(Self::one(), |acc, x| acc * x)
    }
}

fn fmt_power(f: &mut fmt::Formatter<'_>, doubled: i64) -> fmt::Result {
    match doubled {
        2 => write!(f, "q"),
        d if d % 2 == 0 => write!(f, "q^{{{}}}", d / 2),
        d => write!(f, "q^{{{}/2}}", d),
    }
}

/// Sorted by increasing exponent, e.g. `q^{-1} + q`, `-2q^{1/2}`, `3/2`.
impl fmt::Display for LaurentScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (idx, (&e, c)) in self.terms.iter().enumerate() {
            let negative = c.is_negative();
            let mag = c.abs();
            match (idx, negative) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            if e == 0 {
                write!(f, "{}", mag)?;
            } else {
                if !mag.is_one() {
                    write!(f, "{}", mag)?;
                }
                fmt_power(f, e)?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for LaurentScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LaurentScalar({})", self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::format;
    use proptest::prelude::*;

    fn q(e: i64) -> LaurentScalar {
        LaurentScalar::q_pow(e)
    }

    #[test]
    fn quantum_integers() {
        assert_eq!(LaurentScalar::quantum_integer(0), LaurentScalar::zero());
        assert_eq!(LaurentScalar::quantum_integer(1), LaurentScalar::one());
        assert_eq!(LaurentScalar::quantum_integer(2), q(-1) + q(1));
        assert_eq!(
            LaurentScalar::quantum_integer(4),
            q(-3) + q(-1) + q(1) + q(3)
        );
        for k in 1..12u32 {
            let qk = LaurentScalar::quantum_integer(k);
            assert_eq!(qk.len(), k as usize);
            assert!(qk.terms().all(|(_, c)| c.is_one()));
            assert_eq!(qk.bar(), qk);
        }
    }

    #[test]
    fn ring_basics() {
        assert_eq!(q(1) * q(-1), LaurentScalar::one());
        let two = LaurentScalar::quantum_integer(2);
        assert_eq!(&two * &two, q(-2) + LaurentScalar::from(2) + q(2));
        assert!((&two + &(-&two)).is_zero());
        assert_eq!(q(1).bar(), q(-1));
        assert_eq!(
            LaurentScalar::monomial(1, 1).bar(),
            LaurentScalar::monomial(1, -1)
        );
    }

    #[test]
    fn display() {
        assert_eq!(format!("{}", LaurentScalar::zero()), "0");
        assert_eq!(format!("{}", q(1)), "q");
        assert_eq!(format!("{}", q(-1) + q(1)), "q^{-1} + q");
        assert_eq!(format!("{}", LaurentScalar::monomial(-2, 3)), "-2q^{3/2}");
        assert_eq!(
            format!("{}", LaurentScalar::term(Rational::new(3, 2), 0) - q(2)),
            "3/2 - q^{2}"
        );
    }

    #[test]
    fn triples_roundtrip() {
        let s = LaurentScalar::term(Rational::new(-3, 4), -5) + q(2);
        let t = s.to_triples();
        assert_eq!(t, alloc::vec![(-5, -3, 4), (4, 1, 1)]);
        assert_eq!(LaurentScalar::from_triples(t), Some(s));
        assert_eq!(LaurentScalar::from_triples([(0, 1, 0)]), None);
    }

    /// Dense reference: coefficient array indexed by doubled exponent + OFFSET.
    const OFFSET: i64 = 80;
    type Dense = Vec<Rational>;

    fn to_dense(s: &LaurentScalar) -> Dense {
        let mut v = alloc::vec![Rational::zero(); (2 * OFFSET + 1) as usize];
        for (e, c) in s.terms() {
            v[(e + OFFSET) as usize] += c;
        }
        v
    }

    fn dense_mul(a: &Dense, b: &Dense) -> Dense {
        let mut v = alloc::vec![Rational::zero(); a.len()];
        for (i, x) in a.iter().enumerate() {
            for (j, y) in b.iter().enumerate() {
                let e = i as i64 + j as i64 - OFFSET;
                if (0..v.len() as i64).contains(&e) {
                    v[e as usize] += x * y;
                }
            }
        }
        v
    }

    fn arb_scalar() -> impl Strategy<Value = LaurentScalar> {
        prop::collection::vec((-20i64..=20, -5i64..=5, 1i64..=4), 0..6).prop_map(|ts| {
            LaurentScalar::from_triples(ts).unwrap()
        })
    }

    proptest! {
        #[test]
        fn ring_axioms(a in arb_scalar(), b in arb_scalar(), c in arb_scalar()) {
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
            prop_assert!(a.terms().all(|(_, c)| !c.is_zero()));
        }

        #[test]
        fn bar_is_involutive_homomorphism(a in arb_scalar(), b in arb_scalar()) {
            prop_assert_eq!(a.bar().bar(), a.clone());
            prop_assert_eq!((&a * &b).bar(), &a.bar() * &b.bar());
            prop_assert_eq!((&a + &b).bar(), &a.bar() + &b.bar());
        }

        #[test]
        fn agrees_with_dense_oracle(a in arb_scalar(), b in arb_scalar()) {
            let da = to_dense(&a);
            let db = to_dense(&b);
            let sum: Dense = da.iter().zip(&db).map(|(x, y)| x + y).collect();
            prop_assert_eq!(to_dense(&(&a + &b)), sum);
            prop_assert_eq!(to_dense(&(&a * &b)), dense_mul(&da, &db));
        }
    }
}
