//! x-coordinate rational maps of endomorphisms and their degree calculus.
//!
//! An endomorphism is represented only through the action on x, as a reduced
//! fraction P(x)/Q(x); its degree is the height H(P, Q). Sums and differences
//! of two maps are never split apart: the addition law gives the symmetric
//! functions of x(φ+ψ) and x(φ−ψ) directly,
//!
//! ```text
//! (x₁ − x₂)²(x₃ + x₄) = 2(x₁x₂ + a)(x₁ + x₂) + 4b
//! (x₁ − x₂)²(x₃·x₄)   = x₁²x₂² − 2ax₁x₂ − 4b(x₁ + x₂) + a²
//! ```
//!
//! and clearing denominators with x₁ = P/Q, x₂ = R/S yields the triple
//! (Q₁, Q₂, Q₃) whose height is d(φ+ψ) + d(φ−ψ).

use rand::Rng;

use crate::curve::Curve;
use crate::error::{Error, Result};
use crate::field::{FieldElement, PrimeModulus};
use crate::poly::{height, random_poly_exact, Degree, Poly};

/// Largest multiplier accepted by the [m] constructors.
pub const MAX_MULTIPLIER: i64 = 12;

/// A reduced x-map P/Q on a curve: gcd(P, Q) = 1 and Q monic.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct XMap {
    curve: Curve,
    num: Poly,
    den: Poly,
}

impl XMap {
    /// Reduces `num/den` to lowest terms with a monic denominator.
    pub fn new(curve: Curve, num: Poly, den: Poly) -> Result<XMap> {
        if num.modulus() != curve.modulus() || den.modulus() != curve.modulus() {
            return Err(Error::ModulusMismatch);
        }
        if den.is_zero() {
            return Err(Error::InvalidArgument("x-map with zero denominator".into()));
        }
        let g = num.gcd(&den)?;
        let (num, den) = (num.div_exact(&g)?, den.div_exact(&g)?);
        let lc_inv = curve.modulus().inv(den.leading_coeff()?.re())?;
        Ok(XMap {
            curve,
            num: num.scale(lc_inv),
            den: den.scale(lc_inv),
        })
    }

    /// x ↦ x.
    pub fn identity(curve: Curve) -> XMap {
        let m = curve.modulus();
        XMap {
            curve,
            num: Poly::x(m),
            den: Poly::one(m),
        }
    }

    /// The p-power Frobenius, x ↦ x^p.
    pub fn frobenius(curve: Curve) -> XMap {
        let m = curve.modulus();
        XMap {
            curve,
            num: Poly::monomial(m, 1, curve.p() as usize),
            den: Poly::one(m),
        }
    }

    pub fn curve(&self) -> &Curve {
        &self.curve
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    /// d(φ) = H(P, Q).
    pub fn degree(&self) -> usize {
        height([&self.num, &self.den])
            .ok()
            .and_then(Degree::finite)
            .expect("denominator is nonzero")
    }

    /// `self ∘ inner`, i.e. substitute `inner` for x.
    pub fn compose(&self, inner: &XMap) -> Result<XMap> {
        if self.curve != inner.curve {
            return Err(Error::InvalidArgument("x-maps on different curves".into()));
        }
        let n = self.degree();
        let num = self.num.homogenize(&inner.num, &inner.den, n);
        let den = self.den.homogenize(&inner.num, &inner.den, n);
        XMap::new(self.curve, num, den)
    }

    /// Evaluates at a field element; `None` where the denominator vanishes.
    pub fn eval(&self, x: FieldElement) -> Option<FieldElement> {
        let d = self.den.eval_element(x);
        if d.is_zero() {
            None
        } else {
            Some(self.num.eval_element(x) * d.inv().ok()?)
        }
    }

    /// `true` when the two maps agree, which happens exactly for φ = ±ψ.
    pub fn same_x_action(&self, other: &XMap) -> bool {
        self.curve == other.curve && &self.num * &other.den == &other.num * &self.den
    }
}

/// The unreduced product polynomials (Q₁, Q₂, Q₃) encoding AC, AD + BC, BD
/// for x(φ+ψ) = A/B and x(φ−ψ) = C/D.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TripleQ {
    pub q1: Poly,
    pub q2: Poly,
    pub q3: Poly,
}

impl TripleQ {
    pub fn height(&self) -> Degree {
        height([&self.q1, &self.q2, &self.q3]).expect("three entries")
    }

    /// Multiplies every entry by the residue `c`.
    pub fn scale(&self, c: u64) -> TripleQ {
        TripleQ {
            q1: self.q1.scale(c),
            q2: self.q2.scale(c),
            q3: self.q3.scale(c),
        }
    }
}

/// Builds
///
/// ```text
/// Q₁ = (PR − aQS)² − 4b(PS + QR)QS
/// Q₂ = 2(PR + aQS)(PS + QR) + 4b(QS)²
/// Q₃ = (PS − QR)²
/// ```
///
/// for arbitrary polynomials over the curve's field.
pub fn sum_product_triple(curve: &Curve, p: &Poly, q: &Poly, r: &Poly, s: &Poly) -> TripleQ {
    let (a, b) = (curve.a(), curve.b());
    let pr = p * r;
    let qs = q * s;
    let ps = p * s;
    let qr = q * r;
    let ps_qr = &ps + &qr;
    let a_qs = qs.scale(a);
    let four_b = curve.modulus().mul(4, b);

    let q1 = &(&pr - &a_qs).pow(2) - &(&ps_qr * &qs).scale(four_b);
    let q2 = &(&(&pr + &a_qs) * &ps_qr).scale(2) + &qs.pow(2).scale(four_b);
    let q3 = (&ps - &qr).pow(2);
    TripleQ { q1, q2, q3 }
}

/// The triple for the pair (φ + ψ, φ − ψ). Rejects φ = ±ψ, where the
/// addition denominators vanish identically.
pub fn compose_sum_product(phi: &XMap, psi: &XMap) -> Result<TripleQ> {
    if phi.curve != psi.curve {
        return Err(Error::InvalidArgument("x-maps on different curves".into()));
    }
    if phi.same_x_action(psi) {
        return Err(Error::DegenerateSum);
    }
    Ok(sum_product_triple(&phi.curve, &phi.num, &phi.den, &psi.num, &psi.den))
}

/// Returns gcd(Q₁, Q₂, Q₃) as a field constant, failing if it has positive
/// degree. A constant gcd means the triple already is (AC, AD + BC, BD) of the
/// reduced sum and difference maps, up to a unit.
pub fn verify_u_constant(t: &TripleQ) -> Result<FieldElement> {
    let g = [&t.q1, &t.q2, &t.q3]
        .into_iter()
        .filter(|q| !q.is_zero())
        .try_fold(Poly::zero(t.q1.modulus()), |acc, q| acc.gcd(q))?;
    match g.degree() {
        Degree::NegInf => Err(Error::InvalidArgument("all three products vanish".into())),
        Degree::Finite(0) => g.leading_coeff(),
        d => Err(Error::IdentityViolation(format!(
            "gcd(Q1, Q2, Q3) has degree {d}, expected a constant"
        ))),
    }
}

/// Outcome of comparing d(φ+ψ) + d(φ−ψ) with 2d(φ) + 2d(ψ).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ParallelogramReport {
    pub lhs: usize,
    pub rhs: usize,
    pub ok: bool,
}

pub fn parallelogram_check(phi: &XMap, psi: &XMap) -> Result<ParallelogramReport> {
    let triple = compose_sum_product(phi, psi)?;
    let lhs = triple
        .height()
        .finite()
        .ok_or_else(|| Error::IdentityViolation("sum/product triple vanished".into()))?;
    let rhs = 2 * phi.degree() + 2 * psi.degree();
    Ok(ParallelogramReport {
        lhs,
        rhs,
        ok: lhs == rhs,
    })
}

fn check_multiplier(curve: &Curve, m: i64) -> Result<()> {
    if !(1..=MAX_MULTIPLIER).contains(&m) {
        return Err(Error::InvalidArgument(format!(
            "multiplier {m} outside 1..={MAX_MULTIPLIER}"
        )));
    }
    if (m as u64).is_multiple_of(curve.p()) {
        return Err(Error::UnsupportedInseparable { m, p: curve.p() });
    }
    Ok(())
}

/// x([2]) = (x⁴ − 2ax² − 8bx + a²) / 4(x³ + ax + b).
pub fn duplication_xmap(curve: &Curve) -> Result<XMap> {
    let md = curve.modulus();
    let (a, b) = (curve.a(), curve.b());
    let num = Poly::from_residues(
        md,
        vec![md.mul(a, a), md.neg(md.mul(8, b)), md.neg(md.mul(2, a)), 0, 1],
    );
    let den = Poly::from_residues(md, vec![b, a, 0, 1]).scale(4);
    XMap::new(*curve, num, den)
}

/// x-maps of [1], …, [m] by the recursion
/// x_{[k+1]} = (x_{[1]} + x_{[k]} symmetric sum) − x_{[k−1]}, checking the
/// product relation at each step.
fn multiplication_chain(curve: &Curve, m: usize) -> Result<Vec<XMap>> {
    let mut chain = vec![XMap::identity(*curve)];
    if m >= 2 {
        chain.push(duplication_xmap(curve)?);
    }
    let x = XMap::identity(*curve);
    while chain.len() < m {
        let k = chain.len();
        let (prev, cur) = (&chain[k - 2], &chain[k - 1]);
        let t = sum_product_triple(curve, &x.num, &x.den, &cur.num, &cur.den);
        // x_{k+1} = Q₂/Q₃ − A/B  with  x_{k−1} = A/B
        let num = &(&t.q2 * &prev.den) - &(&prev.num * &t.q3);
        let den = &t.q3 * &prev.den;
        let next = XMap::new(*curve, num, den)?;
        // x_{k+1}·x_{k−1} must equal Q₁/Q₃.
        if &(&next.num * &prev.num) * &t.q3 != &(&next.den * &prev.den) * &t.q1 {
            return Err(Error::IdentityViolation(format!(
                "product relation fails at [{}]",
                k + 1
            )));
        }
        chain.push(next);
    }
    Ok(chain)
}

/// Reduced x-map of multiplication by `m`, built from the addition relations.
pub fn mult_by_m_xmap(curve: &Curve, m: i64) -> Result<XMap> {
    check_multiplier(curve, m)?;
    Ok(multiplication_chain(curve, m as usize)?.pop().expect("nonempty chain"))
}

/// Division polynomials with the factor y stripped from even indices:
/// ψₙ = fₙ for odd n and ψₙ = y·gₙ for even n, with y² = x³ + ax + b.
struct DivisionPolys {
    vals: Vec<Poly>,
    cubic: Poly,
}

impl DivisionPolys {
    fn new(curve: &Curve, up_to: usize) -> DivisionPolys {
        let md = curve.modulus();
        let (a, b) = (curve.a() as i64, curve.b() as i64);
        let red = |v: i64| md.reduce(v);
        let cubic = Poly::from_residues(md, vec![red(b), red(a), 0, 1]);
        let mut vals = vec![
            Poly::zero(md),
            Poly::one(md),
            Poly::constant(md, 2),
            // 3x⁴ + 6ax² + 12bx − a²
            Poly::from_residues(
                md,
                vec![md.neg(md.mul(red(a), red(a))), md.mul(12, red(b)), md.mul(6, red(a)), 0, 3],
            ),
        ];
        // 4(x⁶ + 5ax⁴ + 20bx³ − 5a²x² − 4abx − 8b² − a³)
        let (ar, br) = (red(a), red(b));
        let a2 = md.mul(ar, ar);
        let g4 = Poly::from_residues(
            md,
            vec![
                md.neg(md.add(md.mul(8, md.mul(br, br)), md.mul(a2, ar))),
                md.neg(md.mul(4, md.mul(ar, br))),
                md.neg(md.mul(5, a2)),
                md.mul(20, br),
                md.mul(5, ar),
                0,
                1,
            ],
        )
        .scale(4);
        vals.push(g4);
        let mut dp = DivisionPolys { vals, cubic };
        let half = md.inv(2).expect("p > 2");
        for n in 5..=up_to.max(4) {
            let k = n / 2;
            let next = if n % 2 == 1 {
                // ψ_{2k+1} = ψ_{k+2}ψ_k³ − ψ_{k−1}ψ_{k+1}³
                let f2 = dp.cubic.pow(2);
                if k % 2 == 0 {
                    &(&f2 * &(&dp.vals[k + 2] * &dp.vals[k].pow(3)))
                        - &(&dp.vals[k - 1] * &dp.vals[k + 1].pow(3))
                } else {
                    &(&dp.vals[k + 2] * &dp.vals[k].pow(3))
                        - &(&f2 * &(&dp.vals[k - 1] * &dp.vals[k + 1].pow(3)))
                }
            } else {
                // ψ_{2k} = ψ_k(ψ_{k+2}ψ_{k−1}² − ψ_{k−2}ψ_{k+1}²) / 2y
                let inner = &(&dp.vals[k + 2] * &dp.vals[k - 1].pow(2))
                    - &(&dp.vals[k - 2] * &dp.vals[k + 1].pow(2));
                (&dp.vals[k] * &inner).scale(half)
            };
            dp.vals.push(next);
        }
        dp
    }

    /// (x·ψₘ² − ψₘ₋₁ψₘ₊₁, ψₘ²) with y² replaced by the cubic.
    fn xmap_parts(&self, m: usize) -> (Poly, Poly) {
        let md = self.cubic.modulus();
        let x = Poly::x(md);
        let v = &self.vals;
        if m % 2 == 1 {
            let den = v[m].pow(2);
            let num = &(&x * &den) - &(&self.cubic * &(&v[m - 1] * &v[m + 1]));
            (num, den)
        } else {
            let den = &self.cubic * &v[m].pow(2);
            let num = &(&x * &den) - &(&v[m - 1] * &v[m + 1]);
            (num, den)
        }
    }
}

/// Reduced x-map of multiplication by `m` from the classical division
/// polynomials; an oracle for [`mult_by_m_xmap`].
pub fn division_poly_xmap(curve: &Curve, m: i64) -> Result<XMap> {
    check_multiplier(curve, m)?;
    let dp = DivisionPolys::new(curve, m as usize + 1);
    let (num, den) = dp.xmap_parts(m as usize);
    XMap::new(*curve, num, den)
}

/// The ψₘ values themselves, y-stripped for even m, for inspection.
pub fn division_polynomial(curve: &Curve, m: usize) -> Poly {
    DivisionPolys::new(curve, m).vals[m].clone()
}

/// Expands (3x² + 4a)(x⁴ − 2ax² − 8bx + a²) − (3x³ − 5ax − 27b)(x³ + ax + b)
/// and returns it as a constant. Works for any (a, b), singular or not.
pub fn resultant_identity(modulus: PrimeModulus, a: u64, b: u64) -> Result<FieldElement> {
    let md = modulus;
    let (a, b) = (a % md.value(), b % md.value());
    let left = Poly::from_residues(md, vec![md.mul(4, a), 0, 3]);
    let quartic = Poly::from_residues(
        md,
        vec![md.mul(a, a), md.neg(md.mul(8, b)), md.neg(md.mul(2, a)), 0, 1],
    );
    let right = Poly::from_residues(md, vec![md.neg(md.mul(27, b)), md.neg(md.mul(5, a)), 0, 3]);
    let cubic = Poly::from_residues(md, vec![b, a, 0, 1]);
    let expansion = &(&left * &quartic) - &(&right * &cubic);
    if !expansion.is_constant() {
        return Err(Error::IdentityViolation(format!(
            "resultant expansion is not constant: {expansion}"
        )));
    }
    Ok(FieldElement::base(md, expansion.coeff(0)))
}

/// [`resultant_identity`] for a curve, additionally checked against 4a³ + 27b².
pub fn resultant_identity_check(curve: &Curve) -> Result<FieldElement> {
    let value = resultant_identity(curve.modulus(), curve.a(), curve.b())?;
    if value.re() != curve.discriminant() {
        return Err(Error::IdentityViolation(format!(
            "resultant {} differs from 4a^3 + 27b^2 = {}",
            value.re(),
            curve.discriminant()
        )));
    }
    Ok(value)
}

/// Degree strata for the four-polynomial height identity. The first three
/// have deg R > deg S or its mirror image; the rest have deg P ≤ deg Q and
/// deg R ≤ deg S.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Lemma2Case {
    /// deg R > deg S, deg P ≥ deg Q
    RAboveSPAtLeastQ,
    /// deg R > deg S, deg P < deg Q
    RAboveSPBelowQ,
    /// deg P > deg Q, deg R ≤ deg S
    PAboveQ,
    /// deg P = deg Q, deg R < deg S
    PEqualQRBelowS,
    /// deg R = deg S, deg P < deg Q
    REqualSPBelowQ,
    /// deg P < deg Q, deg R < deg S
    BothBelow,
    /// deg P = deg Q, deg R = deg S, generic leading coefficients
    BothEqual,
    /// deg P = deg Q, deg R = deg S with l(P)l(S) = l(Q)l(R), so Q₃ loses
    /// its top coefficient
    BothEqualQ3Cancels,
    /// deg P = deg Q, deg R = deg S with both Q₁ and Q₃ losing their top
    /// coefficient; Q₂ alone must carry the height
    BothEqualQ1Q3Cancel,
}

impl Lemma2Case {
    pub const ALL: [Lemma2Case; 9] = [
        Lemma2Case::RAboveSPAtLeastQ,
        Lemma2Case::RAboveSPBelowQ,
        Lemma2Case::PAboveQ,
        Lemma2Case::PEqualQRBelowS,
        Lemma2Case::REqualSPBelowQ,
        Lemma2Case::BothBelow,
        Lemma2Case::BothEqual,
        Lemma2Case::BothEqualQ3Cancels,
        Lemma2Case::BothEqualQ1Q3Cancel,
    ];
}

/// A coprime-pairs input (P, Q), (R, S) for the height identity.
#[derive(Clone, Debug)]
pub struct Quadruple {
    pub p: Poly,
    pub q: Poly,
    pub r: Poly,
    pub s: Poly,
}

impl Quadruple {
    /// 2H(P, Q) + 2H(R, S).
    pub fn expected_height(&self) -> Degree {
        let h1 = height([&self.p, &self.q]).expect("two entries");
        let h2 = height([&self.r, &self.s]).expect("two entries");
        h1.times(2) + h2.times(2)
    }
}

fn poly_with_lead<R: Rng + ?Sized>(rng: &mut R, deg: usize, lead: u64, md: PrimeModulus) -> Poly {
    let mut coeffs: Vec<u64> = (0..deg).map(|_| rng.gen_range(0..md.value())).collect();
    coeffs.push(lead);
    Poly::from_residues(md, coeffs)
}

fn coprime_with_leads<R: Rng + ?Sized>(
    rng: &mut R,
    (df, lf): (usize, u64),
    (dg, lg): (usize, u64),
    md: PrimeModulus,
) -> (Poly, Poly) {
    loop {
        let f = poly_with_lead(rng, df, lf, md);
        let g = poly_with_lead(rng, dg, lg, md);
        if f.is_coprime(&g).unwrap_or(false) {
            return (f, g);
        }
    }
}

fn coprime_exact<R: Rng + ?Sized>(rng: &mut R, df: usize, dg: usize, md: PrimeModulus) -> (Poly, Poly) {
    loop {
        let f = random_poly_exact(rng, Degree::Finite(df), md);
        let g = random_poly_exact(rng, Degree::Finite(dg), md);
        if f.is_coprime(&g).unwrap_or(false) {
            return (f, g);
        }
    }
}

/// Nonzero roots in 𝔽_p of x⁴ − 2ax² − 8bx + a², found by exhaustive search
/// and capped at the first few thousand residues for large p.
fn duplication_numerator_roots(curve: &Curve) -> Vec<u64> {
    let num = duplication_xmap(curve).map(|d| d.num).unwrap_or_else(|_| Poly::zero(curve.modulus()));
    (1..curve.p().min(1 << 16)).filter(|&x| num.eval(x) == 0).collect()
}

/// Draws a coprime quadruple in the requested stratum with degrees at most
/// `max_deg` (which must be at least 1). Returns `None` for
/// [`Lemma2Case::BothEqualQ1Q3Cancel`] on curves where the duplication
/// numerator has no nonzero root in 𝔽_p.
pub fn sample_quadruple<R: Rng + ?Sized>(
    rng: &mut R,
    curve: &Curve,
    case: Lemma2Case,
    max_deg: usize,
) -> Result<Option<Quadruple>> {
    if max_deg == 0 {
        return Err(Error::InvalidArgument("stratified sampling needs max_deg >= 1".into()));
    }
    let md = curve.modulus();
    let p = md.value();
    let hi = |rng: &mut R| rng.gen_range(1..=max_deg);
    let below = |rng: &mut R, d: usize| rng.gen_range(0..d);
    let any = |rng: &mut R| rng.gen_range(0..=max_deg);
    let ((pp, qq), (rr, ss)) = match case {
        Lemma2Case::RAboveSPAtLeastQ => {
            let dr = hi(rng);
            let ds = below(rng, dr);
            let dp = any(rng);
            let dq = rng.gen_range(0..=dp);
            (coprime_exact(rng, dp, dq, md), coprime_exact(rng, dr, ds, md))
        }
        Lemma2Case::RAboveSPBelowQ => {
            let dr = hi(rng);
            let ds = below(rng, dr);
            let dq = hi(rng);
            let dp = below(rng, dq);
            (coprime_exact(rng, dp, dq, md), coprime_exact(rng, dr, ds, md))
        }
        Lemma2Case::PAboveQ => {
            let dp = hi(rng);
            let dq = below(rng, dp);
            let ds = any(rng);
            let dr = rng.gen_range(0..=ds);
            (coprime_exact(rng, dp, dq, md), coprime_exact(rng, dr, ds, md))
        }
        Lemma2Case::PEqualQRBelowS => {
            let d = any(rng);
            let ds = hi(rng);
            let dr = below(rng, ds);
            (coprime_exact(rng, d, d, md), coprime_exact(rng, dr, ds, md))
        }
        Lemma2Case::REqualSPBelowQ => {
            let d = any(rng);
            let dq = hi(rng);
            let dp = below(rng, dq);
            (coprime_exact(rng, dp, dq, md), coprime_exact(rng, d, d, md))
        }
        Lemma2Case::BothBelow => {
            let dq = hi(rng);
            let dp = below(rng, dq);
            let ds = hi(rng);
            let dr = below(rng, ds);
            (coprime_exact(rng, dp, dq, md), coprime_exact(rng, dr, ds, md))
        }
        Lemma2Case::BothEqual => {
            let (d1, d2) = (any(rng), any(rng));
            (coprime_exact(rng, d1, d1, md), coprime_exact(rng, d2, d2, md))
        }
        Lemma2Case::BothEqualQ3Cancels | Lemma2Case::BothEqualQ1Q3Cancel => {
            // Leading ratios l(P)/l(Q) = l(R)/l(S) = ρ make
            // l(Q₃) = (l(P)l(S) − l(Q)l(R))² vanish. Choosing ρ as a root of
            // the duplication numerator also kills l(Q₁).
            let ratio = if case == Lemma2Case::BothEqualQ3Cancels {
                rng.gen_range(1..p)
            } else {
                let roots = duplication_numerator_roots(curve);
                if roots.is_empty() {
                    return Ok(None);
                }
                roots[rng.gen_range(0..roots.len())]
            };
            let (lq, ls) = (rng.gen_range(1..p), rng.gen_range(1..p));
            let (lp, lr) = (md.mul(ratio, lq), md.mul(ratio, ls));
            let (d1, d2) = (any(rng), any(rng));
            (
                coprime_with_leads(rng, (d1, lp), (d1, lq), md),
                coprime_with_leads(rng, (d2, lr), (d2, ls), md),
            )
        }
    };
    Ok(Some(Quadruple {
        p: pp,
        q: qq,
        r: rr,
        s: ss,
    }))
}

/// Aggregate result of a stratified height-identity fuzz run.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Lemma2Summary {
    pub iters: usize,
    /// Draws per stratum, in [`Lemma2Case::ALL`] order.
    pub per_case: [usize; 9],
    pub failures: usize,
    /// Draws whose triple gcd was not constant (only checked when the two
    /// fractions differ, since Q₃ vanishes otherwise).
    pub gcd_failures: usize,
}

/// Runs `iters` draws cycling through every stratum and counts violations of
/// H(Q₁, Q₂, Q₃) = 2H(P, Q) + 2H(R, S).
pub fn lemma2_fuzz<R: Rng + ?Sized>(
    rng: &mut R,
    curve: &Curve,
    iters: usize,
    max_deg: usize,
) -> Result<Lemma2Summary> {
    let mut summary = Lemma2Summary {
        iters,
        ..Default::default()
    };
    let mut i = 0;
    let mut case_idx = 0;
    while i < iters {
        let case = Lemma2Case::ALL[case_idx % Lemma2Case::ALL.len()];
        case_idx += 1;
        let Some(quad) = sample_quadruple(rng, curve, case, max_deg)? else {
            continue;
        };
        summary.per_case[case_idx_of(case)] += 1;
        let t = sum_product_triple(curve, &quad.p, &quad.q, &quad.r, &quad.s);
        if t.height() != quad.expected_height() {
            summary.failures += 1;
        }
        if !t.q3.is_zero() && verify_u_constant(&t).is_err() {
            summary.gcd_failures += 1;
        }
        i += 1;
    }
    Ok(summary)
}

fn case_idx_of(case: Lemma2Case) -> usize {
    Lemma2Case::ALL.iter().position(|&c| c == case).unwrap()
}
