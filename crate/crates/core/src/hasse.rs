//! Point counts, Frobenius traces and the Hasse bound.
//!
//! Sign convention: t = p + 1 − N, so d(1 − π) = N and the Frobenius
//! satisfies π² − tπ + p = 0. The degree form on the lattice ℤ + ℤπ is
//! d(m + nπ) = m² + mnt + n²p.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::curve::{discriminant_quantity, Curve, Point};
use crate::error::{Error, Result};
use crate::field::{is_prime, legendre_residue, Extension, PrimeModulus};

/// Largest p for the O(p) Legendre-sum count.
pub const MAX_COUNT_MODULUS: u64 = 1 << 32;
/// Largest p for the full (a, b) sweep.
pub const MAX_SWEEP_MODULUS: u64 = 1 << 7;

/// Legendre-sum count N = p + 1 + Σₓ (x³ + ax + b / p).
pub fn count_points(curve: &Curve) -> Result<u64> {
    let p = curve.p();
    if p > MAX_COUNT_MODULUS {
        return Err(Error::ResourceLimit(format!(
            "point counting needs p <= 2^32, got {p}"
        )));
    }
    let s = cubic_character_sum(curve.modulus(), curve.a(), curve.b());
    Ok((p as i64 + 1 + s) as u64)
}

/// Σ over x ∈ 𝔽_p of the Legendre symbol of x³ + c1·x + c0.
pub(crate) fn cubic_character_sum(m: PrimeModulus, c1: u64, c0: u64) -> i64 {
    (0..m.value())
        .map(|x| {
            let f = m.add(m.mul(m.add(m.mul(x, x), c1), x), c0);
            legendre_residue(f, m) as i64
        })
        .sum()
}

/// t = p + 1 − N.
pub fn trace(curve: &Curve) -> Result<i64> {
    Ok(curve.p() as i64 + 1 - count_points(curve)? as i64)
}

/// t² ≤ 4p in exact integers.
pub fn within_hasse_bound(t: i64, p: u64) -> bool {
    (t as i128) * (t as i128) <= 4 * p as i128
}

/// Point count and Hasse-bound verdict for one curve.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CountReport {
    pub p: u64,
    pub a: u64,
    pub b: u64,
    pub n: u64,
    pub t: i64,
    pub bound_ok: bool,
    /// Degree of 1 − π, which equals N.
    pub d_one_minus_pi: u64,
}

pub fn hasse_check(curve: &Curve) -> Result<CountReport> {
    let n = count_points(curve)?;
    let t = curve.p() as i64 + 1 - n as i64;
    Ok(CountReport {
        p: curve.p(),
        a: curve.a(),
        b: curve.b(),
        n,
        t,
        bound_ok: within_hasse_bound(t, curve.p()),
        d_one_minus_pi: DegreeForm { p: curve.p(), t }.eval(1, -1) as u64,
    })
}

/// The quadratic form d(m + nπ) = m² + mnt + n²p.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DegreeForm {
    pub p: u64,
    pub t: i64,
}

impl DegreeForm {
    pub fn of(curve: &Curve) -> Result<DegreeForm> {
        Ok(DegreeForm {
            p: curve.p(),
            t: trace(curve)?,
        })
    }

    pub fn eval(&self, m: i64, n: i64) -> i128 {
        let (m, n) = (m as i128, n as i128);
        m * m + m * n * self.t as i128 + n * n * self.p as i128
    }

    /// L(φ, ψ) = d(φ + ψ) − d(φ) − d(ψ) for φ = m₁ + n₁π, ψ = m₂ + n₂π.
    pub fn pairing(&self, (m1, n1): (i64, i64), (m2, n2): (i64, i64)) -> i128 {
        self.eval(m1 + m2, n1 + n2) - self.eval(m1, n1) - self.eval(m2, n2)
    }

    /// Trace of m + nπ, L(m + nπ, 1) = 2m + nt.
    pub fn endo_trace(&self, m: i64, n: i64) -> i128 {
        2 * m as i128 + n as i128 * self.t as i128
    }

    /// `true` iff d(m + nπ) ≥ 0 on |m|, |n| ≤ radius and vanishes only at the
    /// origin.
    pub fn positive_on_grid(&self, radius: i64) -> bool {
        (-radius..=radius).all(|m| {
            (-radius..=radius).all(|n| {
                let d = self.eval(m, n);
                if (m, n) == (0, 0) {
                    d == 0
                } else {
                    d > 0
                }
            })
        })
    }
}

/// d(m + nπ) for the curve's trace.
pub fn degree_form(curve: &Curve, m: i64, n: i64) -> Result<i128> {
    Ok(DegreeForm::of(curve)?.eval(m, n))
}

/// Which points of E(𝔽_{p²}) a characteristic-equation check visits.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PointSample {
    All,
    /// A seeded random subset of the given size (all points if larger).
    Random { count: usize, seed: u64 },
}

/// E(𝔽_{p²}) enumerated once, reused for several endomorphism checks.
#[derive(Clone, Debug)]
pub struct CharEquationChecker {
    curve: Curve,
    form: DegreeForm,
    points: Vec<Point>,
}

impl CharEquationChecker {
    pub fn new(curve: &Curve) -> Result<CharEquationChecker> {
        Ok(CharEquationChecker {
            curve: *curve,
            form: DegreeForm::of(curve)?,
            points: curve.enumerate_points(Extension::Quadratic)?,
        })
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn form(&self) -> DegreeForm {
        self.form
    }

    fn sample(&self, sample: PointSample) -> Vec<&Point> {
        match sample {
            PointSample::All => self.points.iter().collect(),
            PointSample::Random { count, seed } => {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let mut pts: Vec<&Point> = self.points.iter().collect();
                pts.shuffle(&mut rng);
                pts.truncate(count);
                pts
            }
        }
    }

    /// φ(P) = [m]P + [n]π(P).
    pub fn apply_endo(&self, m: i64, n: i64, pt: &Point) -> Point {
        let c = &self.curve;
        let mp = c.scalar_mul_unchecked(m, pt);
        let npi = c.scalar_mul_unchecked(n, &pt.frobenius());
        c.add_unchecked(&mp, &npi)
    }

    /// `true` iff φ(φ(P)) − [tr]φ(P) + [nrm]P = O for every sampled P, where
    /// φ = m + nπ, tr = 2m + nt and nrm = d(φ).
    pub fn check(&self, m: i64, n: i64, sample: PointSample) -> Result<bool> {
        if (m, n) == (0, 0) {
            return Err(Error::InvalidArgument("the zero endomorphism has no characteristic equation".into()));
        }
        let tr = i64::try_from(self.form.endo_trace(m, n))
            .map_err(|_| Error::InvalidArgument("trace overflows".into()))?;
        let nrm = i64::try_from(self.form.eval(m, n))
            .map_err(|_| Error::InvalidArgument("degree overflows".into()))?;
        let c = &self.curve;
        Ok(self.sample(sample).into_iter().all(|pt| {
            let phi = self.apply_endo(m, n, pt);
            let phi2 = self.apply_endo(m, n, &phi);
            let lhs = c.add_unchecked(&phi2, &c.scalar_mul_unchecked(-tr, &phi));
            c.add_unchecked(&lhs, &c.scalar_mul_unchecked(nrm, pt)).is_infinity()
        }))
    }

    /// #{P ∈ E(𝔽_{p²}) : π(P) = −P}, the kernel of 1 + π.
    pub fn kernel_one_plus_pi(&self) -> u64 {
        self.points
            .iter()
            .filter(|pt| pt.frobenius() == pt.negate())
            .count() as u64
    }
}

/// π² − [t]π + [p] annihilates the sampled points of E(𝔽_{p²}).
pub fn frobenius_char_equation_check(curve: &Curve, sample: PointSample) -> Result<bool> {
    CharEquationChecker::new(curve)?.check(0, 1, sample)
}

/// φ² − [tr]φ + [d(φ)] annihilates the sampled points for φ = m + nπ.
pub fn general_endo_char_check(curve: &Curve, m: i64, n: i64, sample: PointSample) -> Result<bool> {
    CharEquationChecker::new(curve)?.check(m, n, sample)
}

pub fn kernel_count_one_plus_pi(curve: &Curve) -> Result<u64> {
    Ok(CharEquationChecker::new(curve)?.kernel_one_plus_pi())
}

/// Number of singular (a, b) ∈ 𝔽_p² by direct enumeration.
pub fn count_singular(modulus: PrimeModulus) -> u64 {
    let p = modulus.value();
    (0..p)
        .flat_map(|a| (0..p).map(move |b| (a, b)))
        .filter(|&(a, b)| discriminant_quantity(modulus, a, b) == 0)
        .count() as u64
}

fn primes_in(p_min: u64, p_max: u64) -> Vec<u64> {
    (p_min.max(5)..=p_max).filter(|&p| is_prime(p)).collect()
}

/// A [`CountReport`] for every nonsingular curve over every prime in
/// `[p_min, p_max]` (primes below 5 are skipped), ordered by (p, a, b).
pub fn exhaustive_sweep(p_min: u64, p_max: u64) -> Result<Vec<CountReport>> {
    if p_max > MAX_SWEEP_MODULUS {
        return Err(Error::ResourceLimit(format!(
            "full sweep needs p_max <= {MAX_SWEEP_MODULUS}, got {p_max}"
        )));
    }
    if p_min > p_max {
        return Err(Error::InvalidArgument(format!("empty range [{p_min}, {p_max}]")));
    }
    let jobs: Vec<(PrimeModulus, u64)> = primes_in(p_min, p_max)
        .into_iter()
        .flat_map(|p| {
            let m = PrimeModulus::new(p).expect("prime");
            (0..p).map(move |a| (m, a))
        })
        .collect();
    let per_row: Vec<Vec<CountReport>> = jobs
        .par_iter()
        .map(|&(m, a)| {
            (0..m.value())
                .filter_map(|b| Curve::from_residues(m, a, b).ok())
                .map(|c| hasse_check(&c))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<_>>()?;
    Ok(per_row.into_iter().flatten().collect())
}

/// Per-prime aggregate of a sweep.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PrimeSummary {
    pub p: u64,
    pub curves: u64,
    pub singular: u64,
    pub failures: u64,
    pub max_abs_t: u64,
    /// max |t| / 2√p over the prime's curves.
    pub ratio: f64,
}

/// Groups sweep reports by prime. `singular` is p² minus the number of
/// reports seen for that prime.
pub fn summarize(reports: &[CountReport]) -> Vec<PrimeSummary> {
    let mut out: Vec<PrimeSummary> = Vec::new();
    for r in reports {
        if out.last().map(|s| s.p) != Some(r.p) {
            out.push(PrimeSummary {
                p: r.p,
                curves: 0,
                singular: 0,
                failures: 0,
                max_abs_t: 0,
                ratio: 0.0,
            });
        }
        let s = out.last_mut().unwrap();
        s.curves += 1;
        s.failures += u64::from(!r.bound_ok);
        s.max_abs_t = s.max_abs_t.max(r.t.unsigned_abs());
    }
    for s in &mut out {
        s.singular = s.p * s.p - s.curves;
        s.ratio = s.max_abs_t as f64 / (2.0 * (s.p as f64).sqrt());
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::isqrt;

    fn curve(p: u64, a: i64, b: i64) -> Curve {
        Curve::new(p, a, b).unwrap()
    }

    /// Point count by brute force over all (x, y) pairs.
    fn brute_count(c: &Curve) -> u64 {
        let m = c.modulus();
        let p = c.p();
        let mut n = 1;
        for x in 0..p {
            let f = m.add(m.mul(m.add(m.mul(x, x), c.a()), x), c.b());
            n += (0..p).filter(|&y| m.mul(y, y) == f).count() as u64;
        }
        n
    }

    #[test]
    fn counting_examples() {
        assert_eq!(count_points(&curve(5, 1, 1)).unwrap(), 9);
        assert_eq!(count_points(&curve(5, 0, 3)).unwrap(), 6);
        assert_eq!(trace(&curve(5, 1, 1)).unwrap(), -3);
        assert_eq!(trace(&curve(5, 0, 3)).unwrap(), 0);
        for (p, a, b) in [(7, 1, 1), (7, 1, 3), (7, 2, 1), (97, 2, 3), (1009, 1, 0)] {
            let c = curve(p, a, b);
            assert_eq!(count_points(&c).unwrap(), brute_count(&c), "{c:?}");
        }
        let big = Curve::new(4294967311, 1, 1).unwrap();
        assert!(matches!(count_points(&big), Err(Error::ResourceLimit(_))));
    }

    #[test]
    fn count_agrees_with_enumeration() {
        for p in primes_in(5, 31) {
            for a in 0..p as i64 {
                for b in 0..p as i64 {
                    let Ok(c) = Curve::new(p, a, b) else { continue };
                    let n = c.enumerate_points(Extension::Base).unwrap().len() as u64;
                    assert_eq!(count_points(&c).unwrap(), n);
                }
            }
        }
    }

    #[test]
    fn hasse_reports() {
        let r = hasse_check(&curve(5, 1, 1)).unwrap();
        assert_eq!((r.n, r.t, r.bound_ok, r.d_one_minus_pi), (9, -3, true, 9));
        let r = hasse_check(&curve(7, 1, 1)).unwrap();
        assert_eq!((r.n, r.t), (5, 3));
        assert!(r.t * r.t <= 28 && r.bound_ok);
        assert!(within_hasse_bound(4, 4));
        assert!(!within_hasse_bound(5, 6));
    }

    #[test]
    fn every_curve_over_13_is_within_bound() {
        let reports = exhaustive_sweep(13, 13).unwrap();
        assert_eq!(reports.len(), 13 * 13 - 13);
        assert!(reports.iter().all(|r| r.bound_ok));
    }

    #[test]
    fn trace_divisible_by_p_means_zero() {
        for r in exhaustive_sweep(5, 31).unwrap() {
            if r.t.rem_euclid(r.p as i64) == 0 {
                assert_eq!(r.t, 0);
            }
        }
    }

    #[test]
    fn singular_pairs_number_p() {
        for p in primes_in(5, 47) {
            assert_eq!(count_singular(PrimeModulus::new(p).unwrap()), p);
        }
        let reports = exhaustive_sweep(5, 47).unwrap();
        for s in summarize(&reports) {
            assert_eq!(s.singular, s.p);
            assert_eq!(s.failures, 0);
            assert!(s.ratio <= 1.0);
        }
    }

    #[test]
    fn extremal_traces_occur() {
        let reports = exhaustive_sweep(5, 47).unwrap();
        let extremal: Vec<_> = summarize(&reports)
            .into_iter()
            .filter(|s| s.max_abs_t == isqrt(4 * s.p))
            .map(|s| s.p)
            .collect();
        assert!(!extremal.is_empty());
    }

    #[test]
    fn sweep_rejects_big_ranges() {
        assert!(matches!(exhaustive_sweep(5, 131), Err(Error::ResourceLimit(_))));
        assert!(matches!(exhaustive_sweep(11, 7), Err(Error::InvalidArgument(_))));
        assert!(exhaustive_sweep(2, 3).unwrap().is_empty());
    }

    #[test]
    fn degree_form_examples() {
        let c = curve(5, 1, 1);
        assert_eq!(degree_form(&c, 1, 0).unwrap(), 1);
        assert_eq!(degree_form(&c, 0, 1).unwrap(), 5);
        assert_eq!(degree_form(&c, 1, -1).unwrap(), 9);
        let f = DegreeForm::of(&c).unwrap();
        assert_eq!(f.pairing((1, 0), (0, 1)), -3);
        assert!(f.positive_on_grid(50));
    }

    #[test]
    fn pairing_is_bilinear() {
        for (p, a, b) in [(5, 1, 1), (13, 2, 5), (47, 3, 9)] {
            let f = DegreeForm::of(&curve(p, a, b)).unwrap();
            let grid: Vec<(i64, i64)> = (-10..=10)
                .flat_map(|m| (-10..=10).map(move |n| (m, n)))
                .collect();
            let e1 = f.pairing((1, 0), (1, 0));
            let e12 = f.pairing((1, 0), (0, 1));
            let e2 = f.pairing((0, 1), (0, 1));
            for &(m1, n1) in &grid {
                for &(m2, n2) in grid.iter().step_by(7) {
                    let expected = (m1 * m2) as i128 * e1
                        + (m1 * n2 + n1 * m2) as i128 * e12
                        + (n1 * n2) as i128 * e2;
                    assert_eq!(f.pairing((m1, n1), (m2, n2)), expected);
                }
            }
        }
    }

    #[test]
    fn frobenius_char_equation_small_curves() {
        assert!(frobenius_char_equation_check(&curve(5, 1, 1), PointSample::All).unwrap());
        assert!(frobenius_char_equation_check(&curve(7, 2, 1), PointSample::All).unwrap());
        let sample = PointSample::Random { count: 50, seed: 7 };
        assert!(frobenius_char_equation_check(&curve(101, 3, 7), sample).unwrap());
        let big = curve(1031, 1, 1);
        assert!(matches!(
            frobenius_char_equation_check(&big, PointSample::All),
            Err(Error::ResourceLimit(_))
        ));
    }

    #[test]
    fn wrong_trace_is_detected() {
        let c = curve(7, 2, 1);
        let mut checker = CharEquationChecker::new(&c).unwrap();
        checker.form.t += 1;
        assert!(!checker.check(0, 1, PointSample::All).unwrap());
    }

    #[test]
    fn base_points_reduce_to_lagrange() {
        let c = curve(11, 1, 6);
        let n = count_points(&c).unwrap() as i64;
        let checker = CharEquationChecker::new(&c).unwrap();
        for pt in c.enumerate_points(Extension::Base).unwrap() {
            assert!(c.scalar_mul(n, &pt).unwrap().is_infinity());
            let lifted = pt.lift();
            assert_eq!(checker.apply_endo(0, 1, &lifted), lifted);
        }
    }

    #[test]
    fn general_endo_examples() {
        let c = curve(5, 1, 1);
        let checker = CharEquationChecker::new(&c).unwrap();
        assert_eq!(checker.points().len(), 27);
        assert_eq!(checker.form().endo_trace(1, 1), -1);
        assert_eq!(checker.form().eval(1, 1), 3);
        assert!(checker.check(1, 0, PointSample::All).unwrap());
        assert!(checker.check(0, 1, PointSample::All).unwrap());
        assert!(checker.check(1, 1, PointSample::All).unwrap());
        assert!(checker.check(0, 0, PointSample::All).is_err());
        assert!(general_endo_char_check(&c, -2, 3, PointSample::All).unwrap());
    }

    #[test]
    fn kernel_counts() {
        assert_eq!(kernel_count_one_plus_pi(&curve(5, 1, 1)).unwrap(), 3);
        let c = curve(5, 0, 3);
        assert_eq!(trace(&c).unwrap(), 0);
        assert_eq!(kernel_count_one_plus_pi(&c).unwrap(), 6);
        let c = curve(7, 1, 3);
        let n = count_points(&c).unwrap();
        assert_eq!(kernel_count_one_plus_pi(&c).unwrap(), 2 * 7 + 2 - n);
    }

    #[test]
    fn quadratic_count_matches_trace_formula() {
        for (p, a, b) in [(5, 1, 1), (7, 1, 3), (13, 2, 5), (17, 0, 1)] {
            let c = curve(p, a, b);
            let t = trace(&c).unwrap();
            let expected = (p * p + 1) as i64 - (t * t - 2 * p as i64);
            assert_eq!(c.enumerate_points(Extension::Quadratic).unwrap().len() as i64, expected);
        }
    }
}
