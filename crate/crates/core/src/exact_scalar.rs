//! Exact scalars: rationals and elements of real cyclotomic fields.
//!
//! A [`RealCyclotomic`] is stored as a polynomial in a fixed primitive
//! `N`-th root of unity `ζ`, reduced modulo the cyclotomic polynomial `Φ_N`,
//! with integer numerators over one common positive denominator.  Elements
//! of different conductors are lifted to the lcm before mixing, so the
//! representation, and therefore equality, stays canonical.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::sync::{Arc, Mutex, OnceLock, RwLock};

pub type Rational = BigRational;

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Operations shared by the exact scalar types, used by the generic linear
/// algebra in [`crate::linalg`].
pub trait Field: Clone + PartialEq + fmt::Debug + Send + Sync {
    fn zero_elem() -> Self;
    fn one_elem() -> Self;
    fn from_i64(n: i64) -> Self;
    fn is_zero(&self) -> bool;
    fn plus(&self, o: &Self) -> Self;
    fn minus(&self, o: &Self) -> Self;
    fn times(&self, o: &Self) -> Self;
    fn negated(&self) -> Self;
    /// Multiplicative inverse; panics on zero.
    fn recip(&self) -> Self;
    /// Exact sign in {-1, 0, 1}.
    fn sign(&self) -> i32;
    fn over(&self, o: &Self) -> Self {
        self.times(&o.recip())
    }
}

impl Field for Rational {
    fn zero_elem() -> Self {
        Zero::zero()
    }
    fn one_elem() -> Self {
        One::one()
    }
    fn from_i64(n: i64) -> Self {
        int(n)
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn plus(&self, o: &Self) -> Self {
        self + o
    }
    fn minus(&self, o: &Self) -> Self {
        self - o
    }
    fn times(&self, o: &Self) -> Self {
        self * o
    }
    fn negated(&self) -> Self {
        -self
    }
    fn recip(&self) -> Self {
        assert!(!Zero::is_zero(self), "inverse of zero");
        Rational::recip(self)
    }
    fn sign(&self) -> i32 {
        if Zero::is_zero(self) {
            0
        } else if self.is_positive() {
            1
        } else {
            -1
        }
    }
}

struct Ctx {
    n: u64,
    phi: usize,
    /// Coefficients of `Φ_n`, lowest degree first; monic of degree `phi`.
    cyclo: Vec<BigInt>,
    /// `cos(2πk/n)` for `k < phi`, scaled by `2^prec`, keyed by `prec`.
    cos_tables: Mutex<HashMap<u32, Arc<Vec<BigInt>>>>,
}

fn registry() -> &'static RwLock<HashMap<u64, Arc<Ctx>>> {
    static REG: OnceLock<RwLock<HashMap<u64, Arc<Ctx>>>> = OnceLock::new();
    REG.get_or_init(|| RwLock::new(HashMap::new()))
}

fn ctx(n: u64) -> Arc<Ctx> {
    assert!(n >= 1);
    if let Some(c) = registry().read().unwrap().get(&n) {
        return c.clone();
    }
    let cyclo = cyclotomic_poly(n);
    let c = Arc::new(Ctx {
        n,
        phi: cyclo.len() - 1,
        cyclo,
        cos_tables: Mutex::new(HashMap::new()),
    });
    registry().write().unwrap().entry(n).or_insert(c).clone()
}

/// Integer coefficients of `Φ_n`, lowest degree first.
pub fn cyclotomic_polynomial(n: u64) -> Vec<BigInt> {
    ctx(n).cyclo.clone()
}

/// `Φ_n = (x^n - 1) / Π_{d | n, d < n} Φ_d`.
fn cyclotomic_poly(n: u64) -> Vec<BigInt> {
    let mut p = vec![BigInt::zero(); n as usize + 1];
    p[0] = BigInt::from(-1);
    p[n as usize] = BigInt::one();
    for d in 1..n {
        if n % d == 0 {
            p = exact_div_monic(&p, &ctx(d).cyclo);
        }
    }
    p
}

fn exact_div_monic(p: &[BigInt], m: &[BigInt]) -> Vec<BigInt> {
    let dm = m.len() - 1;
    let mut r = p.to_vec();
    let mut q = vec![BigInt::zero(); p.len() - dm];
    for i in (0..q.len()).rev() {
        let c = r[i + dm].clone();
        if !c.is_zero() {
            for (j, mj) in m.iter().enumerate() {
                r[i + j] -= &c * mj;
            }
        }
        q[i] = c;
    }
    debug_assert!(r.iter().all(|x| x.is_zero()));
    q
}

fn reduce_mod(ctx: &Ctx, mut p: Vec<BigInt>) -> Vec<BigInt> {
    let phi = ctx.phi;
    for i in (phi..p.len()).rev() {
        let c = std::mem::take(&mut p[i]);
        if c.is_zero() {
            continue;
        }
        for j in 0..phi {
            let m = &ctx.cyclo[j];
            if !m.is_zero() {
                p[i - phi + j] -= &c * m;
            }
        }
    }
    p.resize(phi, BigInt::zero());
    p
}

/// An exact real number in a cyclotomic field `Q(ζ_N)`.
#[derive(Clone)]
pub struct RealCyclotomic {
    ctx: Arc<Ctx>,
    num: Vec<BigInt>,
    den: BigInt,
}

impl RealCyclotomic {
    fn make(ctx: Arc<Ctx>, num: Vec<BigInt>, den: BigInt) -> Self {
        let mut g = den.clone();
        for c in &num {
            if g.is_one() {
                break;
            }
            g = g.gcd(c);
        }
        if den.is_negative() {
            g = -g;
        }
        let (num, den) = if g.is_one() {
            (num, den)
        } else {
            (num.into_iter().map(|c| c / &g).collect(), den / &g)
        };
        RealCyclotomic { ctx, num, den }
    }

    pub fn from_rational(q: &Rational) -> Self {
        RealCyclotomic {
            ctx: ctx(1),
            num: vec![q.numer().clone()],
            den: q.denom().clone(),
        }
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rational(&int(n))
    }

    pub fn conductor(&self) -> u64 {
        self.ctx.n
    }

    pub fn is_zero(&self) -> bool {
        self.num.iter().all(|c| c.is_zero())
    }

    /// The rational value, if the element lies in `Q`.
    pub fn to_rational(&self) -> Option<Rational> {
        if self.num.iter().skip(1).all(|c| c.is_zero()) {
            return Some(Rational::new(self.num[0].clone(), self.den.clone()));
        }
        None
    }

    fn lift(&self, m: u64) -> RealCyclotomic {
        if m == self.ctx.n {
            return self.clone();
        }
        assert!(m % self.ctx.n == 0);
        let step = (m / self.ctx.n) as usize;
        let target = ctx(m);
        let mut p = vec![BigInt::zero(); (self.num.len() - 1) * step + 1];
        for (k, c) in self.num.iter().enumerate() {
            p[k * step] = c.clone();
        }
        let p = reduce_mod(&target, p);
        RealCyclotomic {
            ctx: target,
            num: p,
            den: self.den.clone(),
        }
    }

    fn common(a: &Self, b: &Self) -> (RealCyclotomic, RealCyclotomic) {
        let m = a.ctx.n.lcm(&b.ctx.n);
        (a.lift(m), b.lift(m))
    }

    fn add_impl(&self, o: &Self, sub: bool) -> Self {
        let (a, b) = Self::common(self, o);
        let num = a
            .num
            .iter()
            .zip(&b.num)
            .map(|(x, y)| {
                if sub {
                    x * &b.den - y * &a.den
                } else {
                    x * &b.den + y * &a.den
                }
            })
            .collect();
        Self::make(a.ctx.clone(), num, &a.den * &b.den)
    }

    fn mul_impl(&self, o: &Self) -> Self {
        let (a, b) = Self::common(self, o);
        let phi = a.ctx.phi;
        let mut p = vec![BigInt::zero(); 2 * phi - 1];
        for (i, x) in a.num.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.num.iter().enumerate() {
                if !y.is_zero() {
                    p[i + j] += x * y;
                }
            }
        }
        let p = reduce_mod(&a.ctx, p);
        Self::make(a.ctx.clone(), p, &a.den * &b.den)
    }

    /// Multiplicative inverse by the extended Euclidean algorithm in `Q[x]`.
    pub fn inverse(&self) -> Self {
        assert!(!self.is_zero(), "inverse of zero");
        let to_q = |v: &[BigInt]| -> Vec<Rational> {
            v.iter()
                .map(|c| Rational::from_integer(c.clone()))
                .collect()
        };
        let mut r0 = trim(to_q(&self.ctx.cyclo));
        let mut r1 = trim(to_q(&self.num));
        let mut s0: Vec<Rational> = vec![];
        let mut s1: Vec<Rational> = vec![Rational::one()];
        while !r1.is_empty() {
            let (q, r) = poly_divmod(&r0, &r1);
            let s2 = poly_sub(&s0, &poly_mul(&q, &s1));
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s2);
        }
        debug_assert_eq!(r0.len(), 1);
        let c = r0[0].clone();
        let inv: Vec<Rational> = s0.iter().map(|x| x / &c).collect();
        let mut den = BigInt::one();
        for x in &inv {
            den = den.lcm(x.denom());
        }
        let mut num: Vec<BigInt> = inv
            .iter()
            .map(|x| x.numer() * (&den / x.denom()) * &self.den)
            .collect();
        num.resize(self.ctx.phi, BigInt::zero());
        Self::make(self.ctx.clone(), num, den)
    }

    /// `cos(2πr)` exactly, in conductor `denominator(r)`.
    pub fn cos_turn(r: &Rational) -> Self {
        let b = r.denom().to_u64().expect("turn denominator too large");
        let a = r.numer().mod_floor(r.denom()).to_u64().unwrap();
        match b {
            1 => return Self::from_int(1),
            2 => return Self::from_int(-1),
            _ => {}
        }
        let c = ctx(b);
        let mut p = vec![BigInt::zero(); b as usize];
        p[a as usize] += 1;
        p[(b - a) as usize] += 1;
        let p = reduce_mod(&c, p);
        Self::make(c, p, BigInt::from(2))
    }

    pub fn sqrt2() -> Self {
        Self::cos_turn(&rat(1, 8)) * Self::from_int(2)
    }

    pub fn sqrt3() -> Self {
        Self::cos_turn(&rat(1, 12)) * Self::from_int(2)
    }

    /// `√m` for positive integers whose squarefree part is 1, 2, 3 or 6.
    pub fn sqrt_small(m: u64) -> Option<Self> {
        if m == 0 {
            return Some(Self::from_int(0));
        }
        let mut square = 1u64;
        let mut rest = m;
        let mut p = 2u64;
        while p * p <= rest {
            while rest % (p * p) == 0 {
                rest /= p * p;
                square *= p;
            }
            p += 1;
        }
        let s = Self::from_int(square as i64);
        match rest {
            1 => Some(s),
            2 => Some(s * Self::sqrt2()),
            3 => Some(s * Self::sqrt3()),
            6 => Some(s * Self::sqrt2() * Self::sqrt3()),
            _ => None,
        }
    }

    /// Fixed-point enclosure of the value at `prec` fractional bits: the
    /// value equals `(center ± radius) / (den · 2^prec)`; returns
    /// `(center, radius, den)`.
    pub fn enclosure(&self, prec: u32) -> (BigInt, BigInt, BigInt) {
        let table = cos_table(&self.ctx, prec);
        let mut center = BigInt::zero();
        let mut radius = BigInt::zero();
        for (k, c) in self.num.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            center += c * &table[k];
            if k > 0 {
                radius += c.abs() * COS_ERROR_ULPS;
            }
        }
        (center, radius, self.den.clone())
    }

    /// Exact sign.  Zero is decided on the canonical form; otherwise the
    /// enclosure is refined, doubling precision from 64 bits, until it
    /// excludes zero.
    pub fn sign_of(&self) -> i32 {
        if self.is_zero() {
            return 0;
        }
        let mut prec = 64u32;
        loop {
            let (c, r, _) = self.enclosure(prec);
            if c.abs() > r {
                return if c.is_positive() { 1 } else { -1 };
            }
            prec *= 2;
        }
    }

    pub fn to_f64(&self) -> f64 {
        let (c, _, d) = self.enclosure(64);
        let scale = 2f64.powi(64);
        c.to_f64().unwrap_or(f64::NAN) / scale / d.to_f64().unwrap_or(f64::NAN)
    }
}

/// Each table entry is within this many units in the last place.
const COS_ERROR_ULPS: i64 = 4;
const GUARD_BITS: u32 = 64;

fn cos_table(ctx: &Ctx, prec: u32) -> Arc<Vec<BigInt>> {
    if let Some(t) = ctx.cos_tables.lock().unwrap().get(&prec) {
        return t.clone();
    }
    let w = prec + GUARD_BITS;
    let pi = pi_fixed(w);
    let n = ctx.n;
    let table: Vec<BigInt> = (0..ctx.phi as u64)
        .map(|k| {
            let mut j = k % n;
            if 2 * j > n {
                j = n - j;
            }
            // angle 2πj/n in [0, π]
            let (num, negate) = if 4 * j > n {
                (n - 2 * j, true)
            } else {
                (2 * j, false)
            };
            // angle π·num/n in [0, π/2]
            let t = (&pi * BigInt::from(num)) / BigInt::from(n);
            let c = cos_fixed(&t, w) >> GUARD_BITS;
            if negate {
                -c
            } else {
                c
            }
        })
        .collect();
    let table = Arc::new(table);
    ctx.cos_tables
        .lock()
        .unwrap()
        .insert(prec, table.clone());
    table
}

/// `π · 2^w` by Machin's formula.
fn pi_fixed(w: u32) -> BigInt {
    fn atan_inv(x: u64, w: u32) -> BigInt {
        let one = BigInt::one() << w;
        let x = BigInt::from(x);
        let x2 = &x * &x;
        let mut term = one / &x;
        let mut sum = BigInt::zero();
        let mut k = 0u64;
        while !term.is_zero() {
            let t = &term / BigInt::from(2 * k + 1);
            if k % 2 == 0 {
                sum += t;
            } else {
                sum -= t;
            }
            term /= &x2;
            k += 1;
        }
        sum
    }
    atan_inv(5, w) * 16 - atan_inv(239, w) * 4
}

/// `cos(t)` for `0 <= t <= π/2` given as `t · 2^w`, result scaled by `2^w`.
fn cos_fixed(t: &BigInt, w: u32) -> BigInt {
    let one = BigInt::one() << w;
    let t2 = (t * t) >> w;
    let mut term = one.clone();
    let mut sum = one;
    let mut i = 1u64;
    loop {
        term = ((&term * &t2) >> w) / BigInt::from((2 * i - 1) * (2 * i));
        if term.is_zero() {
            break;
        }
        if i % 2 == 1 {
            sum -= &term;
        } else {
            sum += &term;
        }
        i += 1;
    }
    sum
}

fn trim(mut p: Vec<Rational>) -> Vec<Rational> {
    while p.last().is_some_and(|c| Zero::is_zero(c)) {
        p.pop();
    }
    p
}

fn poly_sub(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let n = a.len().max(b.len());
    let z = Rational::zero();
    trim(
        (0..n)
            .map(|i| a.get(i).unwrap_or(&z) - b.get(i).unwrap_or(&z))
            .collect(),
    )
}

fn poly_mul(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut p = vec![Rational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            p[i + j] += x * y;
        }
    }
    trim(p)
}

fn poly_divmod(a: &[Rational], b: &[Rational]) -> (Vec<Rational>, Vec<Rational>) {
    let mut r = a.to_vec();
    let db = b.len() - 1;
    if r.len() < b.len() {
        return (vec![], r);
    }
    let lead = b[db].clone();
    let mut q = vec![Rational::zero(); r.len() - db];
    for i in (0..q.len()).rev() {
        let c = &r[i + db] / &lead;
        for (j, bj) in b.iter().enumerate() {
            r[i + j] -= &c * bj;
        }
        q[i] = c;
    }
    r.truncate(db);
    (trim(q), trim(r))
}

impl PartialEq for RealCyclotomic {
    fn eq(&self, o: &Self) -> bool {
        let (a, b) = Self::common(self, o);
        a.den == b.den && a.num == b.num
    }
}
impl Eq for RealCyclotomic {}

impl fmt::Debug for RealCyclotomic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[N={}; ", self.ctx.n)?;
        for (k, c) in self.num.iter().enumerate() {
            if !c.is_zero() {
                write!(f, "{:+}z^{} ", c, k)?;
            }
        }
        write!(f, "/ {} ≈ {:.6}]", self.den, self.to_f64())
    }
}

macro_rules! binop {
    ($tr:ident, $m:ident, $body:expr) => {
        impl<'a> $tr<&'a RealCyclotomic> for &'a RealCyclotomic {
            type Output = RealCyclotomic;
            fn $m(self, o: &'a RealCyclotomic) -> RealCyclotomic {
                let f: fn(&RealCyclotomic, &RealCyclotomic) -> RealCyclotomic = $body;
                f(self, o)
            }
        }
        impl $tr for RealCyclotomic {
            type Output = RealCyclotomic;
            fn $m(self, o: RealCyclotomic) -> RealCyclotomic {
                (&self).$m(&o)
            }
        }
        impl<'a> $tr<&'a RealCyclotomic> for RealCyclotomic {
            type Output = RealCyclotomic;
            fn $m(self, o: &'a RealCyclotomic) -> RealCyclotomic {
                (&self).$m(o)
            }
        }
        impl<'a> $tr<RealCyclotomic> for &'a RealCyclotomic {
            type Output = RealCyclotomic;
            fn $m(self, o: RealCyclotomic) -> RealCyclotomic {
                self.$m(&o)
            }
        }
    };
}

binop!(Add, add, |a, b| a.add_impl(b, false));
binop!(Sub, sub, |a, b| a.add_impl(b, true));
binop!(Mul, mul, |a, b| a.mul_impl(b));
binop!(Div, div, |a, b| a.mul_impl(&b.inverse()));

impl Neg for &RealCyclotomic {
    type Output = RealCyclotomic;
    fn neg(self) -> RealCyclotomic {
        RealCyclotomic {
            ctx: self.ctx.clone(),
            num: self.num.iter().map(|c| -c).collect(),
            den: self.den.clone(),
        }
    }
}
impl Neg for RealCyclotomic {
    type Output = RealCyclotomic;
    fn neg(self) -> RealCyclotomic {
        -&self
    }
}

impl Field for RealCyclotomic {
    fn zero_elem() -> Self {
        Self::from_int(0)
    }
    fn one_elem() -> Self {
        Self::from_int(1)
    }
    fn from_i64(n: i64) -> Self {
        Self::from_int(n)
    }
    fn is_zero(&self) -> bool {
        RealCyclotomic::is_zero(self)
    }
    fn plus(&self, o: &Self) -> Self {
        self + o
    }
    fn minus(&self, o: &Self) -> Self {
        self - o
    }
    fn times(&self, o: &Self) -> Self {
        self * o
    }
    fn negated(&self) -> Self {
        -self
    }
    fn recip(&self) -> Self {
        self.inverse()
    }
    fn sign(&self) -> i32 {
        self.sign_of()
    }
}

/// Free-function form of [`RealCyclotomic::cos_turn`].
pub fn cos_turn(r: &Rational) -> RealCyclotomic {
    RealCyclotomic::cos_turn(r)
}

/// Free-function form of [`RealCyclotomic::sign_of`].
pub fn sign_of(x: &RealCyclotomic) -> i32 {
    x.sign_of()
}
