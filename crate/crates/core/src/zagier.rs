//! The character sum S(p) = Σₓ ((x³ − 35x + 98)/p) for the curve with
//! complex multiplication by √−7.
//!
//! S(p) = 0 when (p/7) = −1, and S(p) = ±2A when (p/7) = +1 with
//! p = A² + 7B².

use std::fmt;

use rayon::prelude::*;

use crate::curve::Curve;
use crate::error::{Error, Result};
use crate::field::{is_prime, isqrt, legendre, PrimeModulus};
use crate::hasse::{cubic_character_sum, trace};

pub const ZAGIER_C1: i64 = -35;
pub const ZAGIER_C0: i64 = 98;
/// 4·(−35)³ + 27·98² = 2⁸·7³.
pub const ZAGIER_DISCRIMINANT: i64 = 87808;
/// Primes of bad reduction (2, 7) plus characteristic 3.
pub const EXCLUDED_PRIMES: [u64; 3] = [2, 3, 7];
pub const MAX_SWEEP: u64 = 1_000_000;
/// The sweep re-derives S(p) from the curve's trace up to this bound.
pub const TRACE_CROSS_CHECK_LIMIT: u64 = 10_000;

/// Σ over x mod p of the Legendre symbol of x³ + c1·x + c0.
pub fn char_sum(p: PrimeModulus, c1: i64, c0: i64) -> i64 {
    cubic_character_sum(p, p.reduce(c1), p.reduce(c0))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Class7 {
    Qr,
    Nqr,
    Excluded,
}

impl Class7 {
    pub fn token(self) -> &'static str {
        match self {
            Class7::Qr => "QR",
            Class7::Nqr => "NQR",
            Class7::Excluded => "EXCLUDED",
        }
    }
}

impl fmt::Display for Class7 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.token())
    }
}

/// Residuosity of p modulo 7, with 2, 3 and 7 excluded.
pub fn classify_prime_mod7(p: u64) -> Class7 {
    if EXCLUDED_PRIMES.contains(&p) {
        return Class7::Excluded;
    }
    let seven = PrimeModulus::new(7).expect("7 is prime");
    if legendre((p % 7) as i64, seven) == 1 {
        Class7::Qr
    } else {
        Class7::Nqr
    }
}

/// All (A, B) with A ≥ 0, B ≥ 1 and A² + 7B² = p, in increasing B.
pub fn representations_a2_7b2(p: u64) -> Vec<(u64, u64)> {
    (1..=isqrt(p / 7))
        .filter_map(|b| {
            let rest = p - 7 * b * b;
            let a = isqrt(rest);
            (a * a == rest).then_some((a, b))
        })
        .collect()
}

/// The representation p = A² + 7B² with the smallest positive B.
pub fn represent_a2_7b2(p: u64) -> Option<(u64, u64)> {
    representations_a2_7b2(p).into_iter().next()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Verdict {
    ZeroOk,
    TwoAOk,
    Fail,
    Skipped,
}

impl Verdict {
    pub fn token(self) -> &'static str {
        match self {
            Verdict::ZeroOk => "ZERO_OK",
            Verdict::TwoAOk => "TWO_A_OK",
            Verdict::Fail => "FAIL",
            Verdict::Skipped => "SKIPPED",
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.token())
    }
}

/// One prime's outcome. `s` is `None` only for excluded primes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ZagierRecord {
    pub p: u64,
    pub class7: Class7,
    pub s: Option<i64>,
    pub a: Option<u64>,
    pub b: Option<u64>,
    pub verdict: Verdict,
}

pub fn zagier_verify(p: u64) -> Result<ZagierRecord> {
    if !is_prime(p) {
        return Err(Error::InvalidArgument(format!("{p} is not prime")));
    }
    let class7 = classify_prime_mod7(p);
    if class7 == Class7::Excluded {
        return Ok(ZagierRecord {
            p,
            class7,
            s: None,
            a: None,
            b: None,
            verdict: Verdict::Skipped,
        });
    }
    let modulus = PrimeModulus::new(p)?;
    let s = char_sum(modulus, ZAGIER_C1, ZAGIER_C0);
    let rep = represent_a2_7b2(p);
    let verdict = match (class7, rep) {
        (Class7::Nqr, None) if s == 0 => Verdict::ZeroOk,
        (Class7::Qr, Some((a, _))) if s.unsigned_abs() == 2 * a => Verdict::TwoAOk,
        _ => Verdict::Fail,
    };
    Ok(ZagierRecord {
        p,
        class7,
        s: Some(s),
        a: rep.map(|r| r.0),
        b: rep.map(|r| r.1),
        verdict,
    })
}

/// Records for every prime `p ≤ p_max`, ordered by p. Up to
/// [`TRACE_CROSS_CHECK_LIMIT`] a record whose S(p) disagrees with −t of the
/// reduced curve is marked `Fail`.
pub fn zagier_sweep(p_max: u64) -> Result<Vec<ZagierRecord>> {
    if p_max > MAX_SWEEP {
        return Err(Error::ResourceLimit(format!(
            "zagier sweep needs p_max <= {MAX_SWEEP}, got {p_max}"
        )));
    }
    let primes: Vec<u64> = (2..=p_max).filter(|&p| is_prime(p)).collect();
    primes
        .par_iter()
        .map(|&p| {
            let mut rec = zagier_verify(p)?;
            if let (Some(s), true) = (rec.s, p <= TRACE_CROSS_CHECK_LIMIT) {
                let curve = Curve::new(p, ZAGIER_C1, ZAGIER_C0)?;
                if s != -trace(&curve)? {
                    rec.verdict = Verdict::Fail;
                }
            }
            Ok(rec)
        })
        .collect()
}
