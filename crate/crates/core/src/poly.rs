//! Dense univariate polynomials over 𝔽_p and the height function.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use rand::Rng;

use crate::error::{Error, Result};
use crate::field::{FieldElement, PrimeModulus};

/// Polynomial degree, with `NegInf` as the degree of the zero polynomial.
///
/// `NegInf` sorts below every finite degree and absorbs under addition, so
/// `max` and `+` behave as on ℤ ∪ {−∞}.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Degree {
    NegInf,
    Finite(usize),
}

impl Degree {
    pub fn finite(self) -> Option<usize> {
        match self {
            Degree::NegInf => None,
            Degree::Finite(d) => Some(d),
        }
    }

    /// Multiplies by a non-negative integer (`0·(−∞)` stays `−∞`).
    pub fn times(self, k: usize) -> Degree {
        match self {
            Degree::NegInf => Degree::NegInf,
            Degree::Finite(d) => Degree::Finite(d * k),
        }
    }
}

impl Add for Degree {
    type Output = Degree;
    fn add(self, rhs: Degree) -> Degree {
        match (self, rhs) {
            (Degree::Finite(a), Degree::Finite(b)) => Degree::Finite(a + b),
            _ => Degree::NegInf,
        }
    }
}

impl From<usize> for Degree {
    fn from(d: usize) -> Self {
        Degree::Finite(d)
    }
}

impl fmt::Display for Degree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Degree::NegInf => f.write_str("-inf"),
            Degree::Finite(d) => write!(f, "{d}"),
        }
    }
}

/// Ring operations accepted by [`Poly::apply`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PolyOp {
    Add,
    Sub,
    Mul,
}

/// A polynomial over 𝔽_p; `coeffs[i]` is the coefficient of xⁱ. Never carries
/// trailing zeros, so the zero polynomial has an empty coefficient vector.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Poly {
    modulus: PrimeModulus,
    coeffs: Vec<u64>,
}

impl Poly {
    /// Builds a polynomial from already-reduced residues (ascending powers).
    pub fn from_residues(modulus: PrimeModulus, coeffs: Vec<u64>) -> Self {
        let p = modulus.value();
        let mut poly = Poly {
            modulus,
            coeffs: coeffs.into_iter().map(|c| c % p).collect(),
        };
        poly.normalize();
        poly
    }

    /// Builds a polynomial from signed integer coefficients (ascending powers).
    pub fn from_coeffs(modulus: PrimeModulus, coeffs: &[i64]) -> Self {
        Self::from_residues(modulus, coeffs.iter().map(|&c| modulus.reduce(c)).collect())
    }

    pub fn zero(modulus: PrimeModulus) -> Self {
        Poly {
            modulus,
            coeffs: Vec::new(),
        }
    }

    pub fn one(modulus: PrimeModulus) -> Self {
        Self::constant(modulus, 1)
    }

    pub fn constant(modulus: PrimeModulus, c: u64) -> Self {
        Self::from_residues(modulus, vec![c])
    }

    /// The polynomial `x`.
    pub fn x(modulus: PrimeModulus) -> Self {
        Self::monomial(modulus, 1, 1)
    }

    /// `c·xᵏ`.
    pub fn monomial(modulus: PrimeModulus, c: u64, k: usize) -> Self {
        let mut coeffs = vec![0; k + 1];
        coeffs[k] = c;
        Self::from_residues(modulus, coeffs)
    }

    fn normalize(&mut self) {
        while self.coeffs.last() == Some(&0) {
            self.coeffs.pop();
        }
    }

    pub fn modulus(&self) -> PrimeModulus {
        self.modulus
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    /// Coefficient of xⁱ (zero past the degree).
    pub fn coeff(&self, i: usize) -> u64 {
        self.coeffs.get(i).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Nonzero constant or zero.
    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs.last() == Some(&1)
    }

    pub fn degree(&self) -> Degree {
        match self.coeffs.len() {
            0 => Degree::NegInf,
            n => Degree::Finite(n - 1),
        }
    }

    pub fn leading_coeff(&self) -> Result<FieldElement> {
        self.coeffs
            .last()
            .map(|&c| FieldElement::base(self.modulus, c))
            .ok_or_else(|| Error::InvalidArgument("leading coefficient of the zero polynomial".into()))
    }

    fn lc_raw(&self) -> u64 {
        self.coeffs.last().copied().unwrap_or(0)
    }

    fn same_modulus(&self, other: &Poly) -> Result<()> {
        if self.modulus == other.modulus {
            Ok(())
        } else {
            Err(Error::ModulusMismatch)
        }
    }

    pub fn apply(&self, other: &Poly, op: PolyOp) -> Result<Poly> {
        self.same_modulus(other)?;
        Ok(match op {
            PolyOp::Add => self.add_unchecked(other),
            PolyOp::Sub => self.sub_unchecked(other),
            PolyOp::Mul => self.mul_unchecked(other),
        })
    }

    pub fn checked_add(&self, other: &Poly) -> Result<Poly> {
        self.apply(other, PolyOp::Add)
    }

    pub fn checked_sub(&self, other: &Poly) -> Result<Poly> {
        self.apply(other, PolyOp::Sub)
    }

    pub fn checked_mul(&self, other: &Poly) -> Result<Poly> {
        self.apply(other, PolyOp::Mul)
    }

    fn add_unchecked(&self, other: &Poly) -> Poly {
        let m = self.modulus;
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n).map(|i| m.add(self.coeff(i), other.coeff(i))).collect();
        Self::from_residues(m, coeffs)
    }

    fn sub_unchecked(&self, other: &Poly) -> Poly {
        let m = self.modulus;
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n).map(|i| m.sub(self.coeff(i), other.coeff(i))).collect();
        Self::from_residues(m, coeffs)
    }

    fn mul_unchecked(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero(self.modulus);
        }
        let p = self.modulus.value();
        let n = self.coeffs.len() + other.coeffs.len() - 1;
        let mut out = vec![0u64; n];
        if p < (1 << 32) {
            // Accumulate in u128 and reduce once per output coefficient.
            let mut acc = vec![0u128; n];
            for (i, &a) in self.coeffs.iter().enumerate() {
                if a == 0 {
                    continue;
                }
                for (j, &b) in other.coeffs.iter().enumerate() {
                    acc[i + j] += (a * b) as u128;
                }
            }
            for (o, a) in out.iter_mut().zip(acc) {
                *o = (a % p as u128) as u64;
            }
        } else {
            let m = self.modulus;
            for (i, &a) in self.coeffs.iter().enumerate() {
                for (j, &b) in other.coeffs.iter().enumerate() {
                    out[i + j] = m.add(out[i + j], m.mul(a, b));
                }
            }
        }
        Self::from_residues(self.modulus, out)
    }

    /// Multiplies every coefficient by the residue `c`.
    pub fn scale(&self, c: u64) -> Poly {
        let m = self.modulus;
        Self::from_residues(m, self.coeffs.iter().map(|&a| m.mul(a, c)).collect())
    }

    /// Multiplies by a signed integer.
    pub fn scale_int(&self, c: i64) -> Poly {
        self.scale(self.modulus.reduce(c))
    }

    pub fn pow(&self, mut k: u32) -> Poly {
        let mut acc = Poly::one(self.modulus);
        let mut base = self.clone();
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul_unchecked(&base);
            }
            k >>= 1;
            if k > 0 {
                base = base.mul_unchecked(&base);
            }
        }
        acc
    }

    /// Scales to leading coefficient 1; the zero polynomial is returned as is.
    pub fn monic(&self) -> Poly {
        match self.coeffs.last() {
            None | Some(1) => self.clone(),
            Some(&lc) => self.scale(self.modulus.inv(lc).expect("nonzero leading coefficient")),
        }
    }

    /// Euclidean division: `self = q·divisor + r` with `deg r < deg divisor`.
    pub fn div_rem(&self, divisor: &Poly) -> Result<(Poly, Poly)> {
        self.same_modulus(divisor)?;
        if divisor.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let m = self.modulus;
        let dn = divisor.coeffs.len() - 1;
        if self.coeffs.len() <= dn {
            return Ok((Poly::zero(m), self.clone()));
        }
        let lc_inv = m.inv(divisor.lc_raw())?;
        let mut rem = self.coeffs.clone();
        let mut quot = vec![0u64; rem.len() - dn];
        for k in (0..quot.len()).rev() {
            let c = m.mul(rem[k + dn], lc_inv);
            quot[k] = c;
            if c == 0 {
                continue;
            }
            for (j, &d) in divisor.coeffs.iter().enumerate() {
                rem[k + j] = m.sub(rem[k + j], m.mul(c, d));
            }
        }
        rem.truncate(dn);
        Ok((Self::from_residues(m, quot), Self::from_residues(m, rem)))
    }

    /// Exact quotient; fails if `divisor` does not divide `self`.
    pub fn div_exact(&self, divisor: &Poly) -> Result<Poly> {
        let (q, r) = self.div_rem(divisor)?;
        if r.is_zero() {
            Ok(q)
        } else {
            Err(Error::InvalidArgument("inexact polynomial division".into()))
        }
    }

    /// Monic greatest common divisor. Fails when both inputs are zero.
    pub fn gcd(&self, other: &Poly) -> Result<Poly> {
        self.same_modulus(other)?;
        if self.is_zero() && other.is_zero() {
            return Err(Error::InvalidArgument("gcd(0, 0) is undefined".into()));
        }
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b)?;
            a = b;
            b = r;
        }
        Ok(a.monic())
    }

    /// `true` iff the gcd is 1.
    pub fn is_coprime(&self, other: &Poly) -> Result<bool> {
        Ok(self.gcd(other)?.degree() == Degree::Finite(0))
    }

    /// Horner evaluation at a base residue.
    pub fn eval(&self, x: u64) -> u64 {
        let m = self.modulus;
        self.coeffs
            .iter()
            .rev()
            .fold(0, |acc, &c| m.add(m.mul(acc, x), c))
    }

    /// Horner evaluation at a field element of either degree.
    pub fn eval_element(&self, x: FieldElement) -> FieldElement {
        let zero = FieldElement::zero(x.modulus(), x.extension());
        self.coeffs.iter().rev().fold(zero, |acc, &c| {
            acc * x + FieldElement::base(self.modulus, c).lift_to(x)
        })
    }

    /// Homogenized substitution: returns Σ cᵢ·numⁱ·den^(n−i) with n = `total`,
    /// that is den^n · self(num/den). `total` must be at least the degree.
    pub fn homogenize(&self, num: &Poly, den: &Poly, total: usize) -> Poly {
        let m = self.modulus;
        let mut num_pows = vec![Poly::one(m)];
        let mut den_pows = vec![Poly::one(m)];
        for _ in 0..total {
            let next_n = num_pows.last().unwrap().mul_unchecked(num);
            num_pows.push(next_n);
            let next_d = den_pows.last().unwrap().mul_unchecked(den);
            den_pows.push(next_d);
        }
        let mut acc = Poly::zero(m);
        for (i, &c) in self.coeffs.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let term = num_pows[i].mul_unchecked(&den_pows[total - i]).scale(c);
            acc = acc.add_unchecked(&term);
        }
        acc
    }

    /// Substitution `self(inner(x))`.
    pub fn compose(&self, inner: &Poly) -> Poly {
        let n = self.degree().finite().unwrap_or(0);
        self.homogenize(inner, &Poly::one(self.modulus), n)
    }
}

impl FieldElement {
    /// Coerces a base element into the field of `like`.
    pub(crate) fn lift_to(self, like: FieldElement) -> FieldElement {
        self.in_extension(like.extension()).expect("base element embeds everywhere")
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self} (mod {})", self.modulus.value())
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (i, &c) in self.coeffs.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            match (i, c) {
                (0, c) => write!(f, "{c}")?,
                (1, 1) => f.write_str("x")?,
                (1, c) => write!(f, "{c}x")?,
                (i, 1) => write!(f, "x^{i}")?,
                (i, c) => write!(f, "{c}x^{i}")?,
            }
        }
        Ok(())
    }
}

impl<'a> Add<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        self.checked_add(rhs).expect("modulus mismatch in +")
    }
}

impl<'a> Sub<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        self.checked_sub(rhs).expect("modulus mismatch in -")
    }
}

impl<'a> Mul<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        self.checked_mul(rhs).expect("modulus mismatch in *")
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        let m = self.modulus;
        Poly::from_residues(m, self.coeffs.iter().map(|&c| m.neg(c)).collect())
    }
}

/// The height H(Q₁, …, Q_k) = max deg Qᵢ. `NegInf` iff every input is zero.
pub fn height<'a, I>(polys: I) -> Result<Degree>
where
    I: IntoIterator<Item = &'a Poly>,
{
    polys
        .into_iter()
        .map(Poly::degree)
        .max()
        .ok_or_else(|| Error::InvalidArgument("height of an empty sequence".into()))
}

/// Uniform polynomial of degree at most `max_deg` (possibly zero).
pub fn random_poly<R: Rng + ?Sized>(rng: &mut R, max_deg: usize, modulus: PrimeModulus) -> Poly {
    let p = modulus.value();
    Poly::from_residues(modulus, (0..=max_deg).map(|_| rng.gen_range(0..p)).collect())
}

/// Uniform polynomial of exactly the given degree.
pub fn random_poly_exact<R: Rng + ?Sized>(rng: &mut R, deg: Degree, modulus: PrimeModulus) -> Poly {
    match deg {
        Degree::NegInf => Poly::zero(modulus),
        Degree::Finite(d) => {
            let p = modulus.value();
            let mut coeffs: Vec<u64> = (0..d).map(|_| rng.gen_range(0..p)).collect();
            coeffs.push(rng.gen_range(1..p));
            Poly::from_residues(modulus, coeffs)
        }
    }
}

/// Rejection-samples a coprime pair (F, G), not both zero, with degrees at
/// most `max_deg`.
pub fn random_coprime_pair<R: Rng + ?Sized>(
    rng: &mut R,
    max_deg: usize,
    modulus: PrimeModulus,
) -> (Poly, Poly) {
    loop {
        let f = random_poly(rng, max_deg, modulus);
        let g = random_poly(rng, max_deg, modulus);
        if let Ok(true) = f.is_coprime(&g) {
            return (f, g);
        }
    }
}

/// Rejection-samples a coprime pair with prescribed exact degrees.
///
/// A zero polynomial is coprime only to a nonzero constant, so `NegInf` on
/// one side requires degree 0 on the other.
pub fn random_coprime_pair_with_degrees<R: Rng + ?Sized>(
    rng: &mut R,
    deg_f: Degree,
    deg_g: Degree,
    modulus: PrimeModulus,
) -> Result<(Poly, Poly)> {
    match (deg_f, deg_g) {
        (Degree::NegInf, Degree::Finite(0)) | (Degree::Finite(0), Degree::NegInf) => {}
        (Degree::NegInf, _) | (_, Degree::NegInf) => {
            return Err(Error::InvalidArgument(format!(
                "no coprime pair with degrees ({deg_f}, {deg_g})"
            )))
        }
        _ => {}
    }
    loop {
        let f = random_poly_exact(rng, deg_f, modulus);
        let g = random_poly_exact(rng, deg_g, modulus);
        if f.is_coprime(&g)? {
            return Ok((f, g));
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn fp(p: u64) -> PrimeModulus {
        PrimeModulus::new(p).unwrap()
    }

    fn poly(p: u64, c: &[i64]) -> Poly {
        Poly::from_coeffs(fp(p), c)
    }

    #[test]
    fn normal_form() {
        let f = poly(5, &[1, 0, 5, 10]);
        assert_eq!(f.coeffs(), &[1]);
        assert_eq!(poly(5, &[0, 0]).degree(), Degree::NegInf);
        assert!(poly(5, &[]).is_zero());
        assert_eq!(Degree::NegInf + Degree::Finite(3), Degree::NegInf);
        assert!(Degree::NegInf < Degree::Finite(0));
    }

    #[test]
    fn arithmetic_examples() {
        // (x + 1)(x − 1) = x² + 4 over 𝔽₅
        assert_eq!(&poly(5, &[1, 1]) * &poly(5, &[-1, 1]), poly(5, &[4, 0, 1]));
        // (x² + 1)·x³ = x⁵ + x³
        assert_eq!(
            &poly(5, &[1, 0, 1]) * &poly(5, &[0, 0, 0, 1]),
            poly(5, &[0, 0, 0, 1, 0, 1])
        );
        assert_eq!(&poly(5, &[1, 2]) - &poly(5, &[1, 2]), Poly::zero(fp(5)));
        assert_eq!(poly(5, &[1, 2]).checked_add(&poly(7, &[1])), Err(Error::ModulusMismatch));
        assert_eq!(format!("{}", poly(5, &[4, 0, 1])), "x^2 + 4");
    }

    #[test]
    fn additive_identity_random() {
        let mut rng = ChaCha8Rng::seed_from_u64(10);
        let m = fp(97);
        for _ in 0..100 {
            let f = random_poly(&mut rng, 10, m);
            assert_eq!(&f + &Poly::zero(m), f);
        }
    }

    #[test]
    fn large_modulus_multiplication() {
        let m = fp((1 << 61) - 1);
        let f = Poly::from_residues(m, vec![m.value() - 1, m.value() - 1]);
        // (−1 − x)² = 1 + 2x + x²
        assert_eq!(f.pow(2), Poly::from_coeffs(m, &[1, 2, 1]));
    }

    #[test]
    fn gcd_examples() {
        assert_eq!(
            poly(5, &[-1, 0, 1]).gcd(&poly(5, &[-1, 1])).unwrap(),
            poly(5, &[4, 1])
        );
        assert!(Poly::zero(fp(5)).gcd(&Poly::zero(fp(5))).is_err());
        assert_eq!(poly(5, &[0, 3]).gcd(&Poly::zero(fp(5))).unwrap(), poly(5, &[0, 1]));
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..50 {
            let f = random_poly(&mut rng, 8, fp(97));
            assert_eq!(f.gcd(&Poly::one(fp(97))).unwrap(), Poly::one(fp(97)));
        }
    }

    #[test]
    fn gcd_of_common_multiples() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let m = fp(97);
        for _ in 0..200 {
            let f = random_poly(&mut rng, 6, m);
            let g = random_poly(&mut rng, 6, m);
            let d = rng.gen_range(0..4);
            let h = random_poly_exact(&mut rng, Degree::Finite(d), m);
            if f.is_zero() && g.is_zero() {
                continue;
            }
            let lhs = (&f * &h).gcd(&(&g * &h)).unwrap();
            let rhs = (&h * &f.gcd(&g).unwrap()).monic();
            assert_eq!(lhs, rhs);
            let d = f.gcd(&g).unwrap();
            assert!(f.div_rem(&d).unwrap().1.is_zero());
            assert!(g.div_rem(&d).unwrap().1.is_zero());
        }
    }

    #[test]
    fn euclidean_invariant() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for p in [5u64, 97, 1009] {
            let m = fp(p);
            for _ in 0..500 {
                let f = random_poly(&mut rng, 12, m);
                let d = rng.gen_range(0..8);
            let g = random_poly_exact(&mut rng, Degree::Finite(d), m);
                let (q, r) = f.div_rem(&g).unwrap();
                assert_eq!(&(&q * &g) + &r, f);
                assert!(r.degree() < g.degree());
            }
        }
        assert_eq!(poly(5, &[1]).div_rem(&Poly::zero(fp(5))), Err(Error::DivisionByZero));
    }

    #[test]
    fn height_examples() {
        let m = fp(5);
        assert_eq!(height([&poly(5, &[1, 0, 0, 1]), &poly(5, &[0, 1])]).unwrap(), Degree::Finite(3));
        assert_eq!(height([&Poly::zero(m), &Poly::zero(m)]).unwrap(), Degree::NegInf);
        assert!(height(std::iter::empty()).is_err());
    }

    #[test]
    fn leading_coefficient() {
        assert_eq!(poly(5, &[1, 0, 3]).leading_coeff().unwrap(), fp(5).element(3));
        assert_eq!(poly(5, &[2, 1]).leading_coeff().unwrap(), fp(5).element(1));
        assert!(Poly::zero(fp(5)).leading_coeff().is_err());
        let mut rng = ChaCha8Rng::seed_from_u64(14);
        let m = fp(1009);
        for _ in 0..200 {
            let d = rng.gen_range(0..9);
            let f = random_poly_exact(&mut rng, Degree::Finite(d), m);
            let d = rng.gen_range(0..9);
            let g = random_poly_exact(&mut rng, Degree::Finite(d), m);
            assert_eq!(
                (&f * &g).leading_coeff().unwrap(),
                f.leading_coeff().unwrap() * g.leading_coeff().unwrap()
            );
            assert_eq!((&f * &g).degree(), f.degree() + g.degree());
        }
    }

    #[test]
    fn coprime_sampler() {
        let mut rng = ChaCha8Rng::seed_from_u64(15);
        let m = fp(97);
        let mut hit_max = false;
        for i in 0..1000 {
            let (f, g) = random_coprime_pair(&mut rng, 5, m);
            assert!(!(f.is_zero() && g.is_zero()));
            assert!(f.is_coprime(&g).unwrap());
            assert!(f.degree() <= Degree::Finite(5) && g.degree() <= Degree::Finite(5));
            if i < 100 && f.degree() == Degree::Finite(5) {
                hit_max = true;
            }
        }
        assert!(hit_max);
        for _ in 0..100 {
            let (f, g) = random_coprime_pair(&mut rng, 0, m);
            assert!(f.is_constant() && g.is_constant());
            assert!(!f.is_zero() || !g.is_zero());
        }
        assert!(random_coprime_pair_with_degrees(&mut rng, Degree::NegInf, Degree::Finite(2), m).is_err());
        let (f, g) =
            random_coprime_pair_with_degrees(&mut rng, Degree::Finite(4), Degree::Finite(4), m).unwrap();
        assert_eq!((f.degree(), g.degree()), (Degree::Finite(4), Degree::Finite(4)));
    }

    #[test]
    fn composition_and_eval() {
        let m = fp(97);
        let f = poly(97, &[3, 0, 1]);
        let g = poly(97, &[1, 2]);
        let fg = f.compose(&g);
        for x in 0..97 {
            assert_eq!(fg.eval(x), f.eval(g.eval(x)));
        }
        let z = m.quadratic(2, 5);
        assert_eq!(f.eval_element(z), z * z + m.quadratic(3, 0));
    }

    /// Lemma-1 product triple for (A/B) and (C/D).
    fn triple_height(a: &Poly, b: &Poly, c: &Poly, d: &Poly) -> Degree {
        height([&(a * c), &(&(a * d) + &(b * c)), &(b * d)]).unwrap()
    }

    #[test]
    fn product_height_is_additive_by_case() {
        use Degree::Finite as F;
        let mut rng = ChaCha8Rng::seed_from_u64(16);
        for p in [5u64, 97, 1009] {
            let m = fp(p);
            for _ in 0..300 {
                let hi = rng.gen_range(1..7);
                let (lo, lo2) = (rng.gen_range(0..hi), rng.gen_range(0..hi));
                // Case 1: deg A ≥ deg B, deg C ≥ deg D
                // Case 2: deg A > deg B, deg C < deg D
                // Case 3: deg A < deg B, deg C > deg D
                let cases = [
                    (F(hi), F(lo2), F(hi), F(lo)),
                    (F(hi), F(lo2), F(lo), F(hi)),
                    (F(lo2), F(hi), F(hi), F(lo)),
                ];
                for (da, db, dc, dd) in cases {
                    let (a, b) = random_coprime_pair_with_degrees(&mut rng, da, db, m).unwrap();
                    let (c, d) = random_coprime_pair_with_degrees(&mut rng, dc, dd, m).unwrap();
                    let expected = height([&a, &b]).unwrap() + height([&c, &d]).unwrap();
                    assert_eq!(triple_height(&a, &b, &c, &d), expected);
                }
            }
        }
    }

    proptest! {
        #[test]
        fn product_height_is_additive(seed in any::<u64>(), max_deg in 0usize..9) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let m = fp(97);
            let (a, b) = random_coprime_pair(&mut rng, max_deg, m);
            let (c, d) = random_coprime_pair(&mut rng, max_deg, m);
            let expected = height([&a, &b]).unwrap() + height([&c, &d]).unwrap();
            prop_assert_eq!(triple_height(&a, &b, &c, &d), expected);
        }

        #[test]
        fn height_is_permutation_invariant_and_monotone(seed in any::<u64>(), k in 1usize..6) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let m = fp(5);
            let mut qs: Vec<Poly> = (0..k).map(|_| random_poly(&mut rng, 6, m)).collect();
            let h = height(&qs).unwrap();
            qs.reverse();
            prop_assert_eq!(height(&qs).unwrap(), h);
            qs.push(random_poly(&mut rng, 6, m));
            prop_assert!(height(&qs).unwrap() >= h);
        }
    }
}
