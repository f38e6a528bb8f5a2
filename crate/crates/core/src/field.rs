//! Arithmetic in the prime field F_p, prime location, quadratic residues and
//! invertible affine maps of the plane F_p².
//!
//! Moduli stay below 2³², so every product of two residues fits in a `u64`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use rand::Rng;

use crate::error::{Error, Result};

/// Residue modulo an odd prime. The modulus travels with the value so that
/// mixing elements of different fields is caught in debug builds.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Fp {
    value: u32,
    modulus: u32,
}

impl Fp {
    /// Reduces `value` into `[0, p)`.
    #[inline]
    pub fn new(value: i64, p: u32) -> Self {
        debug_assert!(p >= 2);
        let value = value.rem_euclid(i64::from(p)) as u32;
        Fp { value, modulus: p }
    }

    #[inline]
    pub fn zero(p: u32) -> Self {
        Fp { value: 0, modulus: p }
    }

    #[inline]
    pub fn one(p: u32) -> Self {
        Fp::new(1, p)
    }

    #[inline]
    pub fn value(self) -> u32 {
        self.value
    }

    #[inline]
    pub fn modulus(self) -> u32 {
        self.modulus
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.value == 0
    }

    pub fn pow(self, mut exp: u64) -> Self {
        let p = u64::from(self.modulus);
        let mut base = u64::from(self.value);
        let mut acc = 1 % p;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc * base % p;
            }
            base = base * base % p;
            exp >>= 1;
        }
        Fp { value: acc as u32, modulus: self.modulus }
    }

    /// Multiplicative inverse by Fermat's little theorem; `None` for zero.
    pub fn inverse(self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Some(self.pow(u64::from(self.modulus) - 2))
        }
    }
}

impl fmt::Debug for Fp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (mod {})", self.value, self.modulus)
    }
}

impl fmt::Display for Fp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

impl Add for Fp {
    type Output = Fp;
    #[inline]
    fn add(self, rhs: Fp) -> Fp {
        debug_assert_eq!(self.modulus, rhs.modulus);
        let s = u64::from(self.value) + u64::from(rhs.value);
        let p = u64::from(self.modulus);
        Fp { value: (if s >= p { s - p } else { s }) as u32, modulus: self.modulus }
    }
}

impl Sub for Fp {
    type Output = Fp;
    #[inline]
    fn sub(self, rhs: Fp) -> Fp {
        debug_assert_eq!(self.modulus, rhs.modulus);
        let value = if self.value >= rhs.value {
            self.value - rhs.value
        } else {
            (u64::from(self.value) + u64::from(self.modulus) - u64::from(rhs.value)) as u32
        };
        Fp { value, modulus: self.modulus }
    }
}

impl Mul for Fp {
    type Output = Fp;
    #[inline]
    fn mul(self, rhs: Fp) -> Fp {
        debug_assert_eq!(self.modulus, rhs.modulus);
        let v = u64::from(self.value) * u64::from(rhs.value) % u64::from(self.modulus);
        Fp { value: v as u32, modulus: self.modulus }
    }
}

impl Neg for Fp {
    type Output = Fp;
    #[inline]
    fn neg(self) -> Fp {
        Fp::zero(self.modulus) - self
    }
}

/// Deterministic primality for all `u64` (Miller–Rabin with the first twelve
/// prime bases).
pub fn is_prime(n: u64) -> bool {
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for &q in &BASES {
        if n.is_multiple_of(q) {
            return n == q;
        }
    }
    let mulmod = |a: u64, b: u64| ((u128::from(a) * u128::from(b)) % u128::from(n)) as u64;
    let powmod = |mut b: u64, mut e: u64| {
        let mut acc = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = mulmod(acc, b);
            }
            b = mulmod(b, b);
            e >>= 1;
        }
        acc
    };
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for &a in &BASES {
        let mut x = powmod(a, d);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulmod(x, x);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Smallest prime `q` with `lo < q < hi`.
pub fn prime_in_range(lo: u64, hi: u64) -> Result<u64> {
    if lo <= 1 || lo >= hi {
        return Err(Error::InvalidArgument(format!("prime search needs 1 < lo < hi, got ({lo}, {hi})")));
    }
    (lo + 1..hi).find(|&q| is_prime(q)).ok_or(Error::NoPrimeInRange { lo, hi })
}

/// The construction modulus for grid size `n`: the smallest prime in `(4n, 8n)`.
pub fn construction_prime(n: u32) -> Result<u32> {
    let n = u64::from(n);
    let p = prime_in_range(4 * n, 8 * n)?;
    u32::try_from(p).map_err(|_| Error::InvalidArgument(format!("modulus {p} exceeds 32 bits")))
}

fn check_odd_prime(p: u32) -> Result<()> {
    if p % 2 == 1 && is_prime(u64::from(p)) {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("{p} is not an odd prime")))
    }
}

/// Legendre symbol (a | p) by Euler's criterion.
pub fn legendre_symbol(a: Fp) -> Result<i8> {
    check_odd_prime(a.modulus())?;
    Ok(legendre_unchecked(a))
}

#[inline]
fn legendre_unchecked(a: Fp) -> i8 {
    if a.is_zero() {
        return 0;
    }
    let r = a.pow(u64::from(a.modulus() - 1) / 2);
    if r.value() == 1 {
        1
    } else {
        -1
    }
}

/// Number of pairs `(a, b)` in F_p² with `q20·a² + q11·ab + q02·b² = 0`.
///
/// A form that is not identically zero has `1 + (p−1)(1 + χ(D))` zeros,
/// where `D = q11² − 4·q20·q02` and `χ` is the quadratic character. When
/// `q20 = q02 = 0` the form is `q11·ab`, and `D = q11²` is a nonzero square,
/// so the same rule covers it.
pub fn quadratic_form_root_count(q20: Fp, q11: Fp, q02: Fp) -> Result<u64> {
    let p = q20.modulus();
    check_odd_prime(p)?;
    if q11.modulus() != p || q02.modulus() != p {
        return Err(Error::InvalidArgument("coefficients from different fields".into()));
    }
    let p = u64::from(p);
    if q20.is_zero() && q11.is_zero() && q02.is_zero() {
        return Ok(p * p);
    }
    let disc = q11 * q11 - Fp::new(4, q20.modulus()) * q20 * q02;
    Ok(match legendre_unchecked(disc) {
        1 => 2 * p - 1,
        0 => p,
        _ => 1,
    })
}

/// A point of F_p².
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FpPoint {
    pub x: Fp,
    pub y: Fp,
}

impl FpPoint {
    pub fn new(x: i64, y: i64, p: u32) -> Self {
        FpPoint { x: Fp::new(x, p), y: Fp::new(y, p) }
    }

    /// Every point of F_p², x-major.
    pub fn all(p: u32) -> impl Iterator<Item = FpPoint> {
        (0..p).flat_map(move |x| (0..p).map(move |y| FpPoint::new(i64::from(x), i64::from(y), p)))
    }
}

/// Invertible affine map `v ↦ M·v + u` of F_p².
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct AffineMap {
    // Row-major linear part.
    m11: Fp,
    m12: Fp,
    m21: Fp,
    m22: Fp,
    u: Fp,
    v: Fp,
}

impl AffineMap {
    /// Fails when the linear part is singular.
    pub fn new(linear: [[Fp; 2]; 2], translation: [Fp; 2]) -> Result<Self> {
        let map = AffineMap {
            m11: linear[0][0],
            m12: linear[0][1],
            m21: linear[1][0],
            m22: linear[1][1],
            u: translation[0],
            v: translation[1],
        };
        if map.determinant().is_zero() {
            return Err(Error::InvalidArgument("affine map has a singular linear part".into()));
        }
        Ok(map)
    }

    pub fn identity(p: u32) -> Self {
        let (o, z) = (Fp::one(p), Fp::zero(p));
        AffineMap { m11: o, m12: z, m21: z, m22: o, u: z, v: z }
    }

    pub fn translation(dx: i64, dy: i64, p: u32) -> Self {
        AffineMap { u: Fp::new(dx, p), v: Fp::new(dy, p), ..AffineMap::identity(p) }
    }

    /// The unique affine map sending `(0,0)`, `(1,0)`, `(0,1)` to `o`, `ex`, `ey`.
    /// Fails when the three targets are collinear.
    pub fn from_frame(o: FpPoint, ex: FpPoint, ey: FpPoint) -> Result<Self> {
        AffineMap::new([[ex.x - o.x, ey.x - o.x], [ex.y - o.y, ey.y - o.y]], [o.x, o.y])
    }

    /// Uniform over invertible affine maps, by rejection.
    pub fn random(p: u32, rng: &mut impl Rng) -> Self {
        loop {
            let mut r = || Fp::new(rng.gen_range(0..p).into(), p);
            if let Ok(t) = AffineMap::new([[r(), r()], [r(), r()]], [r(), r()]) {
                return t;
            }
        }
    }

    pub fn modulus(&self) -> u32 {
        self.m11.modulus()
    }

    pub fn linear(&self) -> [[Fp; 2]; 2] {
        [[self.m11, self.m12], [self.m21, self.m22]]
    }

    pub fn translation_part(&self) -> [Fp; 2] {
        [self.u, self.v]
    }

    pub fn determinant(&self) -> Fp {
        self.m11 * self.m22 - self.m12 * self.m21
    }

    #[inline]
    pub fn apply(&self, pt: FpPoint) -> FpPoint {
        FpPoint { x: self.m11 * pt.x + self.m12 * pt.y + self.u, y: self.m21 * pt.x + self.m22 * pt.y + self.v }
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &AffineMap) -> AffineMap {
        let o = other;
        AffineMap {
            m11: self.m11 * o.m11 + self.m12 * o.m21,
            m12: self.m11 * o.m12 + self.m12 * o.m22,
            m21: self.m21 * o.m11 + self.m22 * o.m21,
            m22: self.m21 * o.m12 + self.m22 * o.m22,
            u: self.m11 * o.u + self.m12 * o.v + self.u,
            v: self.m21 * o.u + self.m22 * o.v + self.v,
        }
    }

    pub fn invert(&self) -> AffineMap {
        let inv_det = self.determinant().inverse().expect("AffineMap invariant: determinant is nonzero");
        let m11 = self.m22 * inv_det;
        let m12 = -self.m12 * inv_det;
        let m21 = -self.m21 * inv_det;
        let m22 = self.m11 * inv_det;
        AffineMap { m11, m12, m21, m22, u: -(m11 * self.u + m12 * self.v), v: -(m21 * self.u + m22 * self.v) }
    }
}
