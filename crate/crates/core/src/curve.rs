//! Short Weierstrass curves y² = x³ + ax + b over 𝔽_p, with points over
//! 𝔽_p or 𝔽_{p²} in affine coordinates.

use std::fmt;

use crate::error::{Error, Result};
use crate::field::{Extension, FieldElement, PrimeModulus};

/// Largest p accepted by base-field enumeration.
pub const MAX_BASE_ENUMERATION: u64 = 1 << 20;
/// Largest p accepted by 𝔽_{p²} enumeration.
pub const MAX_QUADRATIC_ENUMERATION: u64 = 1 << 10;

/// A nonsingular curve y² = x³ + ax + b over 𝔽_p.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Curve {
    modulus: PrimeModulus,
    a: u64,
    b: u64,
}

impl fmt::Debug for Curve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "E(p={}, a={}, b={})", self.modulus.value(), self.a, self.b)
    }
}

/// 4a³ + 27b² as a residue.
pub fn discriminant_quantity(m: PrimeModulus, a: u64, b: u64) -> u64 {
    let a3 = m.mul(m.mul(a, a), a);
    m.add(m.mul(4, a3), m.mul(27, m.mul(b, b)))
}

impl Curve {
    /// Builds the curve with coefficients reduced mod p.
    pub fn new(p: u64, a: i64, b: i64) -> Result<Curve> {
        let modulus = PrimeModulus::new(p)?;
        Curve::from_residues(modulus, modulus.reduce(a), modulus.reduce(b))
    }

    pub fn from_residues(modulus: PrimeModulus, a: u64, b: u64) -> Result<Curve> {
        let (a, b) = (a % modulus.value(), b % modulus.value());
        if discriminant_quantity(modulus, a, b) == 0 {
            return Err(Error::SingularCurve { p: modulus.value() });
        }
        Ok(Curve { modulus, a, b })
    }

    pub fn modulus(&self) -> PrimeModulus {
        self.modulus
    }

    pub fn p(&self) -> u64 {
        self.modulus.value()
    }

    pub fn a(&self) -> u64 {
        self.a
    }

    pub fn b(&self) -> u64 {
        self.b
    }

    /// 4a³ + 27b², nonzero by construction.
    pub fn discriminant(&self) -> u64 {
        discriminant_quantity(self.modulus, self.a, self.b)
    }

    fn a_in(&self, ext: Extension) -> FieldElement {
        FieldElement::base(self.modulus, self.a).in_extension(ext).unwrap()
    }

    fn b_in(&self, ext: Extension) -> FieldElement {
        FieldElement::base(self.modulus, self.b).in_extension(ext).unwrap()
    }

    /// x³ + ax + b.
    pub fn rhs(&self, x: FieldElement) -> FieldElement {
        let ext = x.extension();
        (x.square() + self.a_in(ext)) * x + self.b_in(ext)
    }

    /// Builds an affine point, checking the curve equation.
    pub fn point(&self, x: FieldElement, y: FieldElement) -> Result<Point> {
        let pt = Point::Affine { x, y };
        self.check(&pt)?;
        Ok(pt)
    }

    /// Point with base-field integer coordinates.
    pub fn point_i64(&self, x: i64, y: i64) -> Result<Point> {
        self.point(self.modulus.element(x), self.modulus.element(y))
    }

    pub fn contains(&self, pt: &Point) -> bool {
        match pt {
            Point::Infinity => true,
            Point::Affine { x, y } => {
                x.modulus() == self.modulus
                    && y.modulus() == self.modulus
                    && x.extension() == y.extension()
                    && y.square() == self.rhs(*x)
            }
        }
    }

    fn check(&self, pt: &Point) -> Result<()> {
        if self.contains(pt) {
            Ok(())
        } else {
            Err(Error::OffCurve)
        }
    }

    /// Group law with input validation.
    pub fn add(&self, p1: &Point, p2: &Point) -> Result<Point> {
        self.check(p1)?;
        self.check(p2)?;
        if let (Point::Affine { x: x1, .. }, Point::Affine { x: x2, .. }) = (p1, p2) {
            if x1.extension() != x2.extension() {
                return Err(Error::ModulusMismatch);
            }
        }
        Ok(self.add_unchecked(p1, p2))
    }

    /// Chord–tangent addition on points already known to lie on the curve
    /// over a common field.
    pub(crate) fn add_unchecked(&self, p1: &Point, p2: &Point) -> Point {
        let (x1, y1, x2, y2) = match (p1, p2) {
            (Point::Infinity, q) | (q, Point::Infinity) => return *q,
            (Point::Affine { x: x1, y: y1 }, Point::Affine { x: x2, y: y2 }) => (*x1, *y1, *x2, *y2),
        };
        let lambda = if x1 == x2 {
            if y1 != y2 || y1.is_zero() {
                return Point::Infinity;
            }
            // tangent slope (3x² + a) / 2y
            let num = x1.square().scale(3) + self.a_in(x1.extension());
            num * y1.scale(2).inv().expect("y ≠ 0")
        } else {
            (y2 - y1) * (x2 - x1).inv().expect("x1 ≠ x2")
        };
        let x3 = lambda.square() - x1 - x2;
        let y3 = lambda * (x1 - x3) - y1;
        Point::Affine { x: x3, y: y3 }
    }

    pub fn neg(&self, pt: &Point) -> Point {
        pt.negate()
    }

    /// `[m]P` by double-and-add; negative `m` negates first.
    pub fn scalar_mul(&self, m: i64, pt: &Point) -> Result<Point> {
        self.check(pt)?;
        Ok(self.scalar_mul_unchecked(m, pt))
    }

    pub(crate) fn scalar_mul_unchecked(&self, m: i64, pt: &Point) -> Point {
        let base = if m < 0 { pt.negate() } else { *pt };
        let mut k = m.unsigned_abs();
        let mut acc = Point::Infinity;
        let mut addend = base;
        while k > 0 {
            if k & 1 == 1 {
                acc = self.add_unchecked(&acc, &addend);
            }
            k >>= 1;
            if k > 0 {
                addend = self.add_unchecked(&addend, &addend);
            }
        }
        acc
    }

    /// The p-power Frobenius (x, y) ↦ (x^p, y^p).
    pub fn frobenius(&self, pt: &Point) -> Result<Point> {
        self.check(pt)?;
        Ok(pt.frobenius())
    }

    /// Every point over the chosen field, `Infinity` first, then affine
    /// points ordered by x.
    ///
    /// Square roots come from a table of all squares in the field, so no
    /// root-extraction algorithm is needed.
    pub fn enumerate_points(&self, ext: Extension) -> Result<Vec<Point>> {
        let p = self.p();
        match ext {
            Extension::Base => {
                if p > MAX_BASE_ENUMERATION {
                    return Err(Error::ResourceLimit(format!(
                        "base enumeration needs p <= {MAX_BASE_ENUMERATION}, got {p}"
                    )));
                }
                self.enumerate_base()
            }
            Extension::Quadratic => {
                if p > MAX_QUADRATIC_ENUMERATION {
                    return Err(Error::ResourceLimit(format!(
                        "quadratic enumeration needs p <= {MAX_QUADRATIC_ENUMERATION}, got {p}"
                    )));
                }
                self.enumerate_quadratic()
            }
        }
    }

    fn enumerate_base(&self) -> Result<Vec<Point>> {
        let m = self.modulus;
        let p = m.value();
        let mut root = vec![u64::MAX; p as usize];
        for y in 0..=p / 2 {
            root[m.mul(y, y) as usize] = y;
        }
        let mut out = vec![Point::Infinity];
        for x in 0..p {
            let xe = FieldElement::base(m, x);
            let f = self.rhs(xe);
            let r = root[f.re() as usize];
            if r == u64::MAX {
                continue;
            }
            out.push(Point::Affine {
                x: xe,
                y: FieldElement::base(m, r),
            });
            if r != 0 {
                out.push(Point::Affine {
                    x: xe,
                    y: FieldElement::base(m, p - r),
                });
            }
        }
        Ok(out)
    }

    fn enumerate_quadratic(&self) -> Result<Vec<Point>> {
        let m = self.modulus;
        let p = m.value();
        let idx = |z: FieldElement| (z.re() * p + z.im()) as usize;
        let mut root: Vec<Option<FieldElement>> = vec![None; (p * p) as usize];
        for u in 0..p {
            for v in 0..p {
                let y = FieldElement::quadratic(m, u, v);
                root[idx(y.square())].get_or_insert(y);
            }
        }
        let mut out = vec![Point::Infinity];
        for u in 0..p {
            for v in 0..p {
                let x = FieldElement::quadratic(m, u, v);
                let f = self.rhs(x);
                if !f.is_square() {
                    continue;
                }
                let y = root[idx(f)].ok_or_else(|| {
                    Error::IdentityViolation(format!("norm test says {f:?} is a square but no root exists"))
                })?;
                out.push(Point::Affine { x, y });
                if !y.is_zero() {
                    out.push(Point::Affine { x, y: -y });
                }
            }
        }
        Ok(out)
    }
}

/// A point at infinity or an affine point over 𝔽_p or 𝔽_{p²}.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Point {
    Infinity,
    Affine { x: FieldElement, y: FieldElement },
}

impl Point {
    pub fn is_infinity(&self) -> bool {
        matches!(self, Point::Infinity)
    }

    pub fn negate(&self) -> Point {
        match *self {
            Point::Infinity => Point::Infinity,
            Point::Affine { x, y } => Point::Affine { x, y: -y },
        }
    }

    pub(crate) fn frobenius(&self) -> Point {
        match *self {
            Point::Infinity => Point::Infinity,
            Point::Affine { x, y } => Point::Affine {
                x: x.frobenius(),
                y: y.frobenius(),
            },
        }
    }

    /// `true` for affine points whose coordinates lie in 𝔽_p (the point at
    /// infinity counts as rational).
    pub fn is_base_rational(&self) -> bool {
        match self {
            Point::Infinity => true,
            Point::Affine { x, y } => x.im() == 0 && y.im() == 0,
        }
    }

    pub fn lift(&self) -> Point {
        match *self {
            Point::Infinity => Point::Infinity,
            Point::Affine { x, y } => Point::Affine {
                x: x.lift(),
                y: y.lift(),
            },
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::collections::HashSet;

    fn pick<'a>(rng: &mut ChaCha8Rng, pts: &'a [Point]) -> &'a Point {
        &pts[rng.gen_range(0..pts.len())]
    }

    #[test]
    fn construction() {
        let c = Curve::new(5, 1, 1).unwrap();
        assert_eq!(c.discriminant(), 1);
        assert_eq!(Curve::new(5, 0, 0), Err(Error::SingularCurve { p: 5 }));
        assert!(Curve::new(11, -35, 98).is_ok());
        assert_eq!(Curve::new(7, -35, 98), Err(Error::SingularCurve { p: 7 }));
        assert_eq!(Curve::new(9, 1, 1), Err(Error::InvalidModulus(9)));
        assert_eq!(Curve::new(3, 1, 1), Err(Error::InvalidModulus(3)));
    }

    #[test]
    fn discriminant_constant_of_zagier_curve_factors() {
        // 4·(−35)³ + 27·98² = 87808 = 2⁸·7³
        let d: i64 = 4 * (-35i64).pow(3) + 27 * 98 * 98;
        assert_eq!(d, 87808);
        let mut n = d;
        let mut factors = vec![];
        let mut f = 2;
        while n > 1 {
            while n % f == 0 {
                factors.push(f);
                n /= f;
            }
            f += 1;
        }
        assert_eq!(factors, vec![2, 2, 2, 2, 2, 2, 2, 2, 7, 7, 7]);
    }

    #[test]
    fn doubling_matches_tangent_line_oracle() {
        let c = Curve::new(5, 1, 1).unwrap();
        let m = c.modulus();
        let p0 = c.point_i64(0, 1).unwrap();
        // Oracle: the tangent at (0, 1) is y = λx + 1 with 2yλ = 3x² + a;
        // search the third intersection by brute force and reflect it.
        let lambda: i64 = (1..5).find(|l| (2 * l) % 5 == 1).unwrap();
        let third: Vec<i64> = (0..5)
            .filter(|&x| x != 0)
            .filter(|&x| {
                let y = (lambda * x + 1).rem_euclid(5);
                (y * y - (x * x * x + x + 1)).rem_euclid(5) == 0
            })
            .collect();
        assert_eq!(third.len(), 1);
        let x3 = third[0];
        let y3 = -(lambda * x3 + 1);
        let expected = c.point(m.element(x3), m.element(y3)).unwrap();
        assert_eq!(c.add(&p0, &p0).unwrap(), expected);
        assert_eq!(expected, c.point_i64(4, 2).unwrap());
    }

    #[test]
    fn identity_and_inverse() {
        let c = Curve::new(5, 1, 1).unwrap();
        for pt in c.enumerate_points(Extension::Base).unwrap() {
            assert_eq!(c.add(&pt, &Point::Infinity).unwrap(), pt);
            assert_eq!(c.add(&pt, &pt.negate()).unwrap(), Point::Infinity);
        }
        let bad = Point::Affine {
            x: c.modulus().element(1),
            y: c.modulus().element(1),
        };
        assert_eq!(c.add(&bad, &Point::Infinity), Err(Error::OffCurve));
        assert!(c.point_i64(1, 1).is_err());
    }

    #[test]
    fn scalar_multiplication() {
        let c = Curve::new(5, 1, 1).unwrap();
        let pts = c.enumerate_points(Extension::Base).unwrap();
        assert_eq!(pts.len(), 9);
        for pt in &pts {
            assert_eq!(c.scalar_mul(1, pt).unwrap(), *pt);
            assert_eq!(c.scalar_mul(0, pt).unwrap(), Point::Infinity);
            assert_eq!(c.scalar_mul(9, pt).unwrap(), Point::Infinity);
            assert_eq!(c.scalar_mul(-1, pt).unwrap(), pt.negate());
        }
        let mut rng = ChaCha8Rng::seed_from_u64(20);
        let c = Curve::new(97, 2, 3).unwrap();
        let pts = c.enumerate_points(Extension::Base).unwrap();
        for _ in 0..200 {
            let (m, n) = (rng.gen_range(-300..300), rng.gen_range(-300..300));
            let pt = pick(&mut rng, &pts);
            let lhs = c.scalar_mul(m + n, pt).unwrap();
            let rhs = c
                .add(&c.scalar_mul(m, pt).unwrap(), &c.scalar_mul(n, pt).unwrap())
                .unwrap();
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn enumeration_counts() {
        let c = Curve::new(5, 1, 1).unwrap();
        let base = c.enumerate_points(Extension::Base).unwrap();
        assert_eq!(base.len(), 9);
        assert_eq!(base[0], Point::Infinity);
        let quad = c.enumerate_points(Extension::Quadratic).unwrap();
        // p² + 1 − (t² − 2p) with t = −3
        assert_eq!(quad.len(), 27);
        for pts in [&base, &quad] {
            let set: HashSet<_> = pts.iter().collect();
            assert_eq!(set.len(), pts.len());
            assert!(pts.iter().all(|pt| c.contains(pt)));
        }
        let big = Curve::new(1_048_583, 1, 1).unwrap();
        assert!(matches!(big.enumerate_points(Extension::Base), Err(Error::ResourceLimit(_))));
        let mid = Curve::new(1031, 1, 1).unwrap();
        assert!(matches!(mid.enumerate_points(Extension::Quadratic), Err(Error::ResourceLimit(_))));
    }

    #[test]
    fn group_axioms_sampled() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for (p, a, b) in [(5, 1, 1), (97, 2, 3), (1009, 1, 0)] {
            let c = Curve::new(p, a, b).unwrap();
            let pts = c.enumerate_points(Extension::Base).unwrap();
            for _ in 0..1000 {
                let (x, y, z) = (pick(&mut rng, &pts), pick(&mut rng, &pts), pick(&mut rng, &pts));
                let xy = c.add(x, y).unwrap();
                let yz = c.add(y, z).unwrap();
                assert!(c.contains(&xy));
                assert_eq!(c.add(&xy, z).unwrap(), c.add(x, &yz).unwrap());
                assert_eq!(xy, c.add(y, x).unwrap());
            }
        }
    }

    #[test]
    fn frobenius_action() {
        let c = Curve::new(5, 1, 1).unwrap();
        for pt in c.enumerate_points(Extension::Base).unwrap() {
            assert_eq!(c.frobenius(&pt).unwrap(), pt);
            assert_eq!(c.frobenius(&pt.lift()).unwrap(), pt.lift());
        }
        assert_eq!(c.frobenius(&Point::Infinity).unwrap(), Point::Infinity);
        let quad = c.enumerate_points(Extension::Quadratic).unwrap();
        let mut fixed = 0;
        for pt in &quad {
            let f = c.frobenius(pt).unwrap();
            assert!(c.contains(&f));
            if let (Point::Affine { x, y }, Point::Affine { x: fx, y: fy }) = (pt, f) {
                assert_eq!(fx, x.pow(5));
                assert_eq!(fy, y.pow(5));
            }
            assert_eq!(c.frobenius(&f).unwrap(), *pt);
            if f == *pt {
                fixed += 1;
                assert!(pt.is_base_rational());
            }
        }
        assert_eq!(fixed, 9);
    }

    #[test]
    fn frobenius_is_a_homomorphism() {
        let mut rng = ChaCha8Rng::seed_from_u64(22);
        for (p, a, b) in [(5, 1, 1), (13, 2, 5), (101, 3, 7)] {
            let c = Curve::new(p, a, b).unwrap();
            let pts = c.enumerate_points(Extension::Quadratic).unwrap();
            for _ in 0..500 {
                let (x, y) = (pick(&mut rng, &pts), pick(&mut rng, &pts));
                let lhs = c.frobenius(&c.add(x, y).unwrap()).unwrap();
                let rhs = c
                    .add(&c.frobenius(x).unwrap(), &c.frobenius(y).unwrap())
                    .unwrap();
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn mixed_fields_rejected() {
        let c = Curve::new(5, 1, 1).unwrap();
        let base = c.point_i64(0, 1).unwrap();
        assert_eq!(c.add(&base, &base.lift()), Err(Error::ModulusMismatch));
    }
}
