//! Prime fields 𝔽_p and their quadratic extensions 𝔽_{p²}.
//!
//! Residues are plain `u64` values kept in `[0, p)`. The modulus is bounded
//! by 2⁶¹ so every product fits one `u128` multiply; for p < 2³² the
//! product fits in a `u64` and the cheaper path is taken.
//!
//! The quadratic extension is 𝔽_p(√s) where `s` is the smallest positive
//! quadratic non-residue mod p.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};

/// Exclusive upper bound on supported moduli.
pub const MAX_MODULUS: u64 = 1 << 61;

/// An odd prime `3 < p < 2⁶¹`, together with the non-residue used to build
/// 𝔽_{p²}.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct PrimeModulus {
    p: u64,
    nonresidue: u64,
}

impl fmt::Debug for PrimeModulus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PrimeModulus({})", self.p)
    }
}

impl PrimeModulus {
    pub fn new(p: u64) -> Result<Self> {
        if p <= 3 || p >= MAX_MODULUS || !is_prime(p) {
            return Err(Error::InvalidModulus(p));
        }
        let mut m = PrimeModulus { p, nonresidue: 0 };
        m.nonresidue = (2..p)
            .find(|&s| m.pow(s, (p - 1) / 2) == p - 1)
            .expect("every odd prime has a non-residue");
        Ok(m)
    }

    #[inline]
    pub fn value(self) -> u64 {
        self.p
    }

    /// The fixed non-residue `s` with 𝔽_{p²} = 𝔽_p(√s).
    #[inline]
    pub fn nonresidue(self) -> u64 {
        self.nonresidue
    }

    /// Reduces a signed integer into `[0, p)`.
    #[inline]
    pub fn reduce(self, a: i64) -> u64 {
        a.rem_euclid(self.p as i64) as u64
    }

    /// Maps a residue back to the symmetric range `(-p/2, p/2]`.
    pub fn centered(self, a: u64) -> i64 {
        if a > self.p / 2 {
            a as i64 - self.p as i64
        } else {
            a as i64
        }
    }

    #[inline]
    pub fn add(self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    #[inline]
    pub fn neg(self, a: u64) -> u64 {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    #[inline]
    pub fn mul(self, a: u64, b: u64) -> u64 {
        if self.p < (1 << 32) {
            a * b % self.p
        } else {
            (a as u128 * b as u128 % self.p as u128) as u64
        }
    }

    pub fn pow(self, mut base: u64, mut exp: u64) -> u64 {
        let mut acc = 1 % self.p;
        base %= self.p;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }

    /// Inverse by the extended Euclidean algorithm.
    pub fn inv(self, a: u64) -> Result<u64> {
        if a.is_multiple_of(self.p) {
            return Err(Error::DivisionByZero);
        }
        let (mut r0, mut r1) = (self.p as i128, (a % self.p) as i128);
        let (mut t0, mut t1) = (0i128, 1i128);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (t0, t1) = (t1, t0 - q * t1);
        }
        debug_assert_eq!(r0, 1);
        Ok(t0.rem_euclid(self.p as i128) as u64)
    }

    /// The base-field element with value `a mod p`.
    pub fn element(self, a: i64) -> FieldElement {
        FieldElement::base(self, self.reduce(a))
    }

    /// The extension element `re + im·√s`.
    pub fn quadratic(self, re: i64, im: i64) -> FieldElement {
        FieldElement::quadratic(self, self.reduce(re), self.reduce(im))
    }
}

/// Which field an element lives in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Extension {
    Base,
    Quadratic,
}

/// An element of 𝔽_p or 𝔽_{p²}, stored as `re + im·√s` (with `im = 0` for the
/// base field).
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct FieldElement {
    modulus: PrimeModulus,
    ext: Extension,
    re: u64,
    im: u64,
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.ext {
            Extension::Base => write!(f, "{} (mod {})", self.re, self.modulus.p),
            Extension::Quadratic => write!(
                f,
                "{} + {}·√{} (mod {})",
                self.re, self.im, self.modulus.nonresidue, self.modulus.p
            ),
        }
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.ext {
            Extension::Base => write!(f, "{}", self.re),
            Extension::Quadratic => write!(f, "{}+{}√{}", self.re, self.im, self.modulus.nonresidue),
        }
    }
}

/// Ring operations accepted by [`FieldElement::apply`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FieldOp {
    Add,
    Sub,
    Mul,
}

impl FieldElement {
    pub fn base(modulus: PrimeModulus, value: u64) -> Self {
        FieldElement {
            modulus,
            ext: Extension::Base,
            re: value % modulus.p,
            im: 0,
        }
    }

    pub fn quadratic(modulus: PrimeModulus, re: u64, im: u64) -> Self {
        FieldElement {
            modulus,
            ext: Extension::Quadratic,
            re: re % modulus.p,
            im: im % modulus.p,
        }
    }

    pub fn zero(modulus: PrimeModulus, ext: Extension) -> Self {
        FieldElement {
            modulus,
            ext,
            re: 0,
            im: 0,
        }
    }

    pub fn one(modulus: PrimeModulus, ext: Extension) -> Self {
        FieldElement {
            modulus,
            ext,
            re: 1,
            im: 0,
        }
    }

    #[inline]
    pub fn modulus(&self) -> PrimeModulus {
        self.modulus
    }

    #[inline]
    pub fn extension(&self) -> Extension {
        self.ext
    }

    /// The rational part (the whole value for base-field elements).
    #[inline]
    pub fn re(&self) -> u64 {
        self.re
    }

    /// The coefficient of √s.
    #[inline]
    pub fn im(&self) -> u64 {
        self.im
    }

    #[inline]
    pub fn is_zero(&self) -> bool {
        self.re == 0 && self.im == 0
    }

    /// Embeds into 𝔽_{p²}; the identity on extension elements.
    pub fn lift(self) -> Self {
        FieldElement {
            ext: Extension::Quadratic,
            ..self
        }
    }

    /// Returns the same value viewed in `ext`. Fails if the value has an
    /// irrational part and `ext` is the base field.
    pub fn in_extension(self, ext: Extension) -> Result<Self> {
        match ext {
            Extension::Quadratic => Ok(self.lift()),
            Extension::Base if self.im == 0 => Ok(FieldElement {
                ext: Extension::Base,
                ..self
            }),
            Extension::Base => Err(Error::ModulusMismatch),
        }
    }

    fn same_field(&self, other: &Self) -> Result<()> {
        if self.modulus == other.modulus && self.ext == other.ext {
            Ok(())
        } else {
            Err(Error::ModulusMismatch)
        }
    }

    pub fn apply(self, other: Self, op: FieldOp) -> Result<Self> {
        self.same_field(&other)?;
        Ok(match op {
            FieldOp::Add => self.add_unchecked(other),
            FieldOp::Sub => self.sub_unchecked(other),
            FieldOp::Mul => self.mul_unchecked(other),
        })
    }

    pub fn checked_add(self, other: Self) -> Result<Self> {
        self.apply(other, FieldOp::Add)
    }

    pub fn checked_sub(self, other: Self) -> Result<Self> {
        self.apply(other, FieldOp::Sub)
    }

    pub fn checked_mul(self, other: Self) -> Result<Self> {
        self.apply(other, FieldOp::Mul)
    }

    #[inline]
    fn add_unchecked(self, other: Self) -> Self {
        let m = self.modulus;
        FieldElement {
            re: m.add(self.re, other.re),
            im: m.add(self.im, other.im),
            ..self
        }
    }

    #[inline]
    fn sub_unchecked(self, other: Self) -> Self {
        let m = self.modulus;
        FieldElement {
            re: m.sub(self.re, other.re),
            im: m.sub(self.im, other.im),
            ..self
        }
    }

    #[inline]
    fn mul_unchecked(self, other: Self) -> Self {
        let m = self.modulus;
        match self.ext {
            Extension::Base => FieldElement {
                re: m.mul(self.re, other.re),
                ..self
            },
            Extension::Quadratic => {
                // (u1 + v1√s)(u2 + v2√s) = u1u2 + s·v1v2 + (u1v2 + v1u2)√s
                let vv = m.mul(self.im, other.im);
                FieldElement {
                    re: m.add(m.mul(self.re, other.re), m.mul(m.nonresidue, vv)),
                    im: m.add(m.mul(self.re, other.im), m.mul(self.im, other.re)),
                    ..self
                }
            }
        }
    }

    pub fn square(self) -> Self {
        self.mul_unchecked(self)
    }

    /// Multiplies by a small integer scalar.
    pub fn scale(self, k: i64) -> Self {
        let m = self.modulus;
        let k = m.reduce(k);
        FieldElement {
            re: m.mul(self.re, k),
            im: m.mul(self.im, k),
            ..self
        }
    }

    /// The field norm to 𝔽_p, `u² − s·v²`. For base elements this is `u²`.
    pub fn norm(self) -> u64 {
        let m = self.modulus;
        m.sub(
            m.mul(self.re, self.re),
            m.mul(m.nonresidue, m.mul(self.im, self.im)),
        )
    }

    /// The conjugate `u − v√s`.
    pub fn conjugate(self) -> Self {
        FieldElement {
            im: self.modulus.neg(self.im),
            ..self
        }
    }

    /// The p-power Frobenius. On 𝔽_{p²} it is conjugation since
    /// (√s)^p = s^((p−1)/2)·√s = −√s; on 𝔽_p it is trivial.
    pub fn frobenius(self) -> Self {
        match self.ext {
            Extension::Base => self,
            Extension::Quadratic => self.conjugate(),
        }
    }

    pub fn inv(self) -> Result<Self> {
        let m = self.modulus;
        match self.ext {
            Extension::Base => Ok(FieldElement {
                re: m.inv(self.re)?,
                ..self
            }),
            Extension::Quadratic => {
                let n_inv = m.inv(self.norm())?;
                let c = self.conjugate();
                Ok(FieldElement {
                    re: m.mul(c.re, n_inv),
                    im: m.mul(c.im, n_inv),
                    ..self
                })
            }
        }
    }

    pub fn checked_div(self, other: Self) -> Result<Self> {
        self.same_field(&other)?;
        Ok(self.mul_unchecked(other.inv()?))
    }

    pub fn pow(self, mut exp: u128) -> Self {
        let mut acc = FieldElement::one(self.modulus, self.ext);
        let mut base = self;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc.mul_unchecked(base);
            }
            base = base.mul_unchecked(base);
            exp >>= 1;
        }
        acc
    }

    /// Quadratic-residue test in the element's own field. In 𝔽_{p²} an
    /// element is a square iff its norm is a square in 𝔽_p.
    pub fn is_square(self) -> bool {
        let n = match self.ext {
            Extension::Base => self.re,
            Extension::Quadratic => self.norm(),
        };
        legendre_residue(n, self.modulus) >= 0
    }
}

impl Add for FieldElement {
    type Output = FieldElement;
    fn add(self, rhs: Self) -> Self {
        self.checked_add(rhs).expect("field mismatch in +")
    }
}

impl Sub for FieldElement {
    type Output = FieldElement;
    fn sub(self, rhs: Self) -> Self {
        self.checked_sub(rhs).expect("field mismatch in -")
    }
}

impl Mul for FieldElement {
    type Output = FieldElement;
    fn mul(self, rhs: Self) -> Self {
        self.checked_mul(rhs).expect("field mismatch in *")
    }
}

impl Neg for FieldElement {
    type Output = FieldElement;
    fn neg(self) -> Self {
        let m = self.modulus;
        FieldElement {
            re: m.neg(self.re),
            im: m.neg(self.im),
            ..self
        }
    }
}

/// Legendre symbol (a / p) via Euler's criterion.
pub fn legendre(a: i64, p: PrimeModulus) -> i32 {
    legendre_residue(p.reduce(a), p)
}

/// Legendre symbol of an already-reduced residue.
#[inline]
pub fn legendre_residue(a: u64, p: PrimeModulus) -> i32 {
    if a.is_multiple_of(p.p) {
        return 0;
    }
    if p.pow(a, (p.p - 1) / 2) == 1 {
        1
    } else {
        -1
    }
}

fn mul_mod_u64(a: u64, b: u64, n: u64) -> u64 {
    (a as u128 * b as u128 % n as u128) as u64
}

fn pow_mod_u64(mut base: u64, mut exp: u64, n: u64) -> u64 {
    let mut acc = 1 % n;
    base %= n;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod_u64(acc, base, n);
        }
        base = mul_mod_u64(base, base, n);
        exp >>= 1;
    }
    acc
}

/// Witnesses making Miller–Rabin deterministic for every n < 2⁶⁴
/// (Jim Sinclair's seven-base set).
const MR_WITNESSES: [u64; 7] = [2, 325, 9375, 28178, 450775, 9780504, 1795265022];

/// Deterministic primality test for all 64-bit inputs.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for small in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n.is_multiple_of(small) {
            return n == small;
        }
    }
    let d = (n - 1) >> (n - 1).trailing_zeros();
    let s = (n - 1).trailing_zeros();
    'witness: for &w in &MR_WITNESSES {
        let w = w % n;
        if w == 0 {
            continue;
        }
        let mut x = pow_mod_u64(w, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod_u64(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Integer square root, `⌊√n⌋`.
pub fn isqrt(n: u64) -> u64 {
    if n < 2 {
        return n;
    }
    let mut r = (n as f64).sqrt() as u64;
    while r.checked_mul(r).is_none_or(|sq| sq > n) {
        r -= 1;
    }
    while (r + 1).checked_mul(r + 1).is_some_and(|sq| sq <= n) {
        r += 1;
    }
    r
}
