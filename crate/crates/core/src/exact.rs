//! Exact reals used as rotation angles, cut points and frequencies.
//!
//! An [`ExactReal`] is a rational linear combination of the basis
//! `1, √2, √3, √5, τ, τ²` where `τ` is the real root of `x³ = x² + x + 1`
//! (the Tribonacci constant). These six numbers are linearly independent
//! over ℚ, so two values are equal exactly when their coefficient vectors
//! are equal, and a value with any nonzero irrational coefficient is never
//! zero. Signs, comparisons and floors are then decided by refining
//! fixed-point enclosures of the basis until the enclosure excludes zero,
//! which always terminates.
//!
//! The set is closed under addition and multiplication by rationals, which
//! is all that rotations (`x + nα mod 1`) and frequency identities need.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};
use std::str::FromStr;
use std::sync::{Mutex, OnceLock};

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

/// Irrational basis elements, in coefficient order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Atom {
    Sqrt2,
    Sqrt3,
    Sqrt5,
    Tau,
    TauSquared,
}

impl Atom {
    pub const ALL: [Atom; 5] = [
        Atom::Sqrt2,
        Atom::Sqrt3,
        Atom::Sqrt5,
        Atom::Tau,
        Atom::TauSquared,
    ];

    fn name(self) -> &'static str {
        match self {
            Atom::Sqrt2 => "sqrt2",
            Atom::Sqrt3 => "sqrt3",
            Atom::Sqrt5 => "sqrt5",
            Atom::Tau => "tau",
            Atom::TauSquared => "tau^2",
        }
    }

    /// Upper bound on `|atom·2^p − approx(p)|`.
    fn approx_error(self) -> u32 {
        match self {
            Atom::TauSquared => 2,
            _ => 1,
        }
    }

    /// `floor(atom · 2^p)` (off by at most [`Atom::approx_error`]).
    fn approx(self, p: u32) -> BigInt {
        static CACHE: OnceLock<Mutex<HashMap<(Atom, u32), BigInt>>> = OnceLock::new();
        let cache = CACHE.get_or_init(Default::default);
        if let Some(v) = cache.lock().unwrap().get(&(self, p)) {
            return v.clone();
        }
        let v = match self {
            Atom::Sqrt2 => sqrt_fixed(2, p),
            Atom::Sqrt3 => sqrt_fixed(3, p),
            Atom::Sqrt5 => sqrt_fixed(5, p),
            Atom::Tau => tau_fixed(p),
            Atom::TauSquared => {
                let t = tau_fixed(p + 8);
                (&t * &t) >> (p + 16)
            }
        };
        cache.lock().unwrap().insert((self, p), v.clone());
        v
    }
}

fn sqrt_fixed(m: u32, p: u32) -> BigInt {
    (BigInt::from(m) << (2 * p)).sqrt()
}

/// Largest `t` with `(t/2^p)³ ≤ (t/2^p)² + t/2^p + 1`, by bisection on `[2^p, 2^(p+1)]`.
fn tau_fixed(p: u32) -> BigInt {
    let s = BigInt::one() << p;
    let f = |t: &BigInt| -> BigInt { t * t * t - t * t * &s - t * &s * &s - &s * &s * &s };
    let mut lo = s.clone();
    let mut hi = &s << 1;
    while &hi - &lo > BigInt::one() {
        let mid: BigInt = (&lo + &hi) >> 1;
        if f(&mid).sign() == Sign::Plus {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    lo
}

/// An exact real number `r + Σ c_k·atom_k` with rational `r, c_k`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ExactReal {
    rational: BigRational,
    coeffs: [BigRational; 5],
}

/// Rotation angles, start points and cut points.
pub type AngleValue = ExactReal;

fn zero_coeffs() -> [BigRational; 5] {
    std::array::from_fn(|_| BigRational::zero())
}

impl ExactReal {
    pub fn zero() -> Self {
        Self::from_rational(BigRational::zero())
    }

    pub fn one() -> Self {
        Self::from_integer(1)
    }

    pub fn from_integer(n: i64) -> Self {
        Self::from_rational(BigRational::from_integer(n.into()))
    }

    pub fn from_rational(r: BigRational) -> Self {
        ExactReal {
            rational: r,
            coeffs: zero_coeffs(),
        }
    }

    /// `num/den`; panics on a zero denominator.
    pub fn ratio(num: i64, den: i64) -> Self {
        Self::from_rational(BigRational::new(num.into(), den.into()))
    }

    pub fn atom(a: Atom) -> Self {
        let mut v = Self::zero();
        v.coeffs[a as usize] = BigRational::one();
        v
    }

    pub fn sqrt2() -> Self {
        Self::atom(Atom::Sqrt2)
    }

    pub fn sqrt3() -> Self {
        Self::atom(Atom::Sqrt3)
    }

    pub fn sqrt5() -> Self {
        Self::atom(Atom::Sqrt5)
    }

    /// The golden ratio `(1 + √5)/2`.
    pub fn phi() -> Self {
        (Self::one() + Self::sqrt5()).scale(&BigRational::new(1.into(), 2.into()))
    }

    /// The Tribonacci constant, real root of `x³ − x² − x − 1`.
    pub fn tau() -> Self {
        Self::atom(Atom::Tau)
    }

    pub fn tau_squared() -> Self {
        Self::atom(Atom::TauSquared)
    }

    pub fn rational_part(&self) -> &BigRational {
        &self.rational
    }

    pub fn coefficient(&self, a: Atom) -> &BigRational {
        &self.coeffs[a as usize]
    }

    pub fn is_rational(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        self.is_rational().then_some(&self.rational)
    }

    pub fn is_zero(&self) -> bool {
        self.rational.is_zero() && self.is_rational()
    }

    pub fn scale(&self, k: &BigRational) -> Self {
        ExactReal {
            rational: &self.rational * k,
            coeffs: std::array::from_fn(|i| &self.coeffs[i] * k),
        }
    }

    pub fn scale_int(&self, k: i64) -> Self {
        self.scale(&BigRational::from_integer(k.into()))
    }

    /// Coefficients over the full basis `[1, √2, √3, √5, τ, τ²]`.
    pub fn basis_coefficients(&self) -> [BigRational; 6] {
        std::array::from_fn(|i| {
            if i == 0 {
                self.rational.clone()
            } else {
                self.coeffs[i - 1].clone()
            }
        })
    }

    /// `(V, E)` with `|self·2^p − V| ≤ E`.
    pub fn fixed_point(&self, p: u32) -> (BigInt, BigInt) {
        if let Some(r) = self.as_rational() {
            let scaled = r * BigRational::from_integer(BigInt::one() << p);
            return (scaled.floor().to_integer(), BigInt::one());
        }
        let all = self.basis_coefficients();
        let den = all
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let ints: Vec<BigInt> = all
            .iter()
            .map(|c| c.numer() * (&den / c.denom()))
            .collect();
        let mut sum = &ints[0] << p;
        let mut err = BigInt::zero();
        for (k, atom) in Atom::ALL.iter().enumerate() {
            let n = &ints[k + 1];
            if n.is_zero() {
                continue;
            }
            sum += n * atom.approx(p);
            err += n.abs() * atom.approx_error();
        }
        let v = sum.div_floor(&den);
        let e = err.div_ceil(&den) + BigInt::one();
        (v, e)
    }

    /// Exact sign.
    pub fn signum(&self) -> Ordering {
        if self.is_rational() {
            return self.rational.cmp(&BigRational::zero());
        }
        let mut p = 64;
        loop {
            let (v, e) = self.fixed_point(p);
            if v > e {
                return Ordering::Greater;
            }
            if v < -&e {
                return Ordering::Less;
            }
            p *= 2;
        }
    }

    pub fn floor(&self) -> BigInt {
        if let Some(r) = self.as_rational() {
            return r.floor().to_integer();
        }
        let mut p = 64;
        loop {
            let (v, e) = self.fixed_point(p);
            let lo = (&v - &e) >> p;
            let hi = (&v + &e) >> p;
            if lo == hi {
                return lo;
            }
            p *= 2;
        }
    }

    /// `self − floor(self)`, in `[0, 1)`.
    pub fn fract(&self) -> Self {
        let f = self.floor();
        self - &Self::from_rational(BigRational::from_integer(f))
    }

    pub fn to_f64(&self) -> f64 {
        if let Some(r) = self.as_rational() {
            return r.numer().to_f64().unwrap_or(f64::NAN) / r.denom().to_f64().unwrap_or(f64::NAN);
        }
        let (v, _) = self.fixed_point(80);
        v.to_f64().unwrap_or(f64::NAN) * 2f64.powi(-80)
    }

    /// Decimal expansion truncated to `digits` places; exact for rationals up to truncation.
    pub fn to_decimal(&self, digits: usize) -> String {
        if self.signum() == Ordering::Less {
            return format!("-{}", (-self.clone()).to_decimal(digits));
        }
        let p = (digits as f64 * std::f64::consts::LOG2_10).ceil() as u32 + 16;
        let (v, _) = self.fixed_point(p);
        let ten = BigInt::from(10).pow(digits as u32);
        let scaled = (v * &ten) >> p;
        let (int, frac) = scaled.div_rem(&ten);
        if digits == 0 {
            return int.to_string();
        }
        format!("{int}.{:0>width$}", frac.to_string(), width = digits)
    }
}

impl fmt::Debug for ExactReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ExactReal({self})")
    }
}

impl fmt::Display for ExactReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<(bool, String)> = Vec::new();
        if !self.rational.is_zero() || self.is_rational() {
            parts.push((self.rational.is_negative(), self.rational.abs().to_string()));
        }
        for a in Atom::ALL {
            let c = &self.coeffs[a as usize];
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            let term = if mag.is_one() {
                a.name().to_string()
            } else if mag.is_integer() {
                format!("{}*{}", mag, a.name())
            } else {
                format!("{}*{}/{}", mag.numer(), a.name(), mag.denom())
            };
            parts.push((c.is_negative(), term));
        }
        for (i, (neg, term)) in parts.iter().enumerate() {
            match (i, neg) {
                (0, true) => write!(f, "-{term}")?,
                (0, false) => write!(f, "{term}")?,
                (_, true) => write!(f, " - {term}")?,
                (_, false) => write!(f, " + {term}")?,
            }
        }
        Ok(())
    }
}

impl PartialOrd for ExactReal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ExactReal {
    fn cmp(&self, other: &Self) -> Ordering {
        (self - other).signum()
    }
}

impl From<i64> for ExactReal {
    fn from(n: i64) -> Self {
        Self::from_integer(n)
    }
}

impl From<BigRational> for ExactReal {
    fn from(r: BigRational) -> Self {
        Self::from_rational(r)
    }
}

impl<'a> Add<&'a ExactReal> for &'a ExactReal {
    type Output = ExactReal;
    fn add(self, rhs: &ExactReal) -> ExactReal {
        ExactReal {
            rational: &self.rational + &rhs.rational,
            coeffs: std::array::from_fn(|i| &self.coeffs[i] + &rhs.coeffs[i]),
        }
    }
}

impl<'a> Sub<&'a ExactReal> for &'a ExactReal {
    type Output = ExactReal;
    fn sub(self, rhs: &ExactReal) -> ExactReal {
        ExactReal {
            rational: &self.rational - &rhs.rational,
            coeffs: std::array::from_fn(|i| &self.coeffs[i] - &rhs.coeffs[i]),
        }
    }
}

impl Add for ExactReal {
    type Output = ExactReal;
    fn add(self, rhs: ExactReal) -> ExactReal {
        &self + &rhs
    }
}

impl Sub for ExactReal {
    type Output = ExactReal;
    fn sub(self, rhs: ExactReal) -> ExactReal {
        &self - &rhs
    }
}

impl AddAssign<&ExactReal> for ExactReal {
    fn add_assign(&mut self, rhs: &ExactReal) {
        self.rational += &rhs.rational;
        for (c, r) in self.coeffs.iter_mut().zip(&rhs.coeffs) {
            *c += r;
        }
    }
}

impl SubAssign<&ExactReal> for ExactReal {
    fn sub_assign(&mut self, rhs: &ExactReal) {
        self.rational -= &rhs.rational;
        for (c, r) in self.coeffs.iter_mut().zip(&rhs.coeffs) {
            *c -= r;
        }
    }
}

impl Neg for ExactReal {
    type Output = ExactReal;
    fn neg(self) -> ExactReal {
        self.scale_int(-1)
    }
}

impl Mul<&BigRational> for &ExactReal {
    type Output = ExactReal;
    fn mul(self, k: &BigRational) -> ExactReal {
        self.scale(k)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseRealError {
    #[error("empty expression")]
    Empty,
    #[error("unexpected character {0:?} at offset {1}")]
    Unexpected(char, usize),
    #[error("unexpected end of expression")]
    UnexpectedEnd,
    #[error("unknown constant {0:?}")]
    UnknownConstant(String),
    #[error("product of two irrational values is not representable")]
    NonlinearProduct,
    #[error("division by an irrational or zero value")]
    BadDivision,
    #[error("malformed number {0:?}")]
    BadNumber(String),
}

/// Recursive-descent parser for linear expressions such as `sqrt(2)-1`,
/// `(3 - sqrt5)/2`, `2-phi`, `0.25` or `1/4`. Decimals parse exactly.
struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn skip_ws(&mut self) {
        while let Some(c) = self.peek() {
            if c.is_whitespace() {
                self.pos += c.len_utf8();
            } else {
                break;
            }
        }
    }

    fn expr(&mut self) -> Result<ExactReal, ParseRealError> {
        let mut acc = self.term()?;
        loop {
            self.skip_ws();
            match self.peek() {
                Some('+') => {
                    self.pos += 1;
                    acc = acc + self.term()?;
                }
                Some('-') => {
                    self.pos += 1;
                    acc = acc - self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<ExactReal, ParseRealError> {
        let mut acc = self.factor()?;
        loop {
            self.skip_ws();
            match self.peek() {
                Some('*') => {
                    self.pos += 1;
                    let rhs = self.factor()?;
                    acc = match (acc.as_rational(), rhs.as_rational()) {
                        (Some(k), _) => rhs.scale(k),
                        (_, Some(k)) => acc.scale(k),
                        _ => return Err(ParseRealError::NonlinearProduct),
                    };
                }
                Some('/') => {
                    self.pos += 1;
                    let rhs = self.factor()?;
                    match rhs.as_rational() {
                        Some(k) if !k.is_zero() => acc = acc.scale(&k.recip()),
                        _ => return Err(ParseRealError::BadDivision),
                    }
                }
                _ => return Ok(acc),
            }
        }
    }

    fn factor(&mut self) -> Result<ExactReal, ParseRealError> {
        self.skip_ws();
        match self.peek() {
            None => Err(ParseRealError::UnexpectedEnd),
            Some('-') => {
                self.pos += 1;
                Ok(-self.factor()?)
            }
            Some('+') => {
                self.pos += 1;
                self.factor()
            }
            Some('(') => {
                self.pos += 1;
                let v = self.expr()?;
                self.skip_ws();
                match self.peek() {
                    Some(')') => {
                        self.pos += 1;
                        Ok(v)
                    }
                    Some(c) => Err(ParseRealError::Unexpected(c, self.pos)),
                    None => Err(ParseRealError::UnexpectedEnd),
                }
            }
            Some(c) if c.is_ascii_digit() || c == '.' => self.number(),
            Some(c) if c.is_alphabetic() || c == '√' => self.constant(),
            Some(c) => Err(ParseRealError::Unexpected(c, self.pos)),
        }
    }

    fn number(&mut self) -> Result<ExactReal, ParseRealError> {
        let start = self.pos;
        while let Some(c) = self.peek() {
            if c.is_ascii_digit() || c == '.' {
                self.pos += 1;
            } else {
                break;
            }
        }
        let text = &self.src[start..self.pos];
        parse_decimal(text)
            .map(ExactReal::from_rational)
            .ok_or_else(|| ParseRealError::BadNumber(text.to_string()))
    }

    fn constant(&mut self) -> Result<ExactReal, ParseRealError> {
        let start = self.pos;
        if self.peek() == Some('√') {
            self.pos += '√'.len_utf8();
            let arg = self.factor()?;
            return sqrt_of(&arg).ok_or(ParseRealError::UnknownConstant("√".into()));
        }
        while let Some(c) = self.peek() {
            if c.is_alphanumeric() || c == '_' {
                self.pos += c.len_utf8();
            } else {
                break;
            }
        }
        let name = self.src[start..self.pos].to_ascii_lowercase();
        match name.as_str() {
            "sqrt2" => Ok(ExactReal::sqrt2()),
            "sqrt3" => Ok(ExactReal::sqrt3()),
            "sqrt5" => Ok(ExactReal::sqrt5()),
            "phi" | "golden" => Ok(ExactReal::phi()),
            "tau" | "trib" | "tribonacci" => {
                if self.src[self.pos..].starts_with("^2") {
                    self.pos += 2;
                    Ok(ExactReal::tau_squared())
                } else {
                    Ok(ExactReal::tau())
                }
            }
            "sqrt" => {
                let arg = self.factor()?;
                sqrt_of(&arg).ok_or(ParseRealError::UnknownConstant(format!("sqrt({arg})")))
            }
            _ => Err(ParseRealError::UnknownConstant(name)),
        }
    }
}

fn sqrt_of(arg: &ExactReal) -> Option<ExactReal> {
    let r = arg.as_rational()?;
    if !r.is_integer() {
        return None;
    }
    let n = r.to_integer().to_i64()?;
    match n {
        0 | 1 | 4 | 9 | 16 | 25 => Some(ExactReal::from_integer((n as f64).sqrt() as i64)),
        2 => Some(ExactReal::sqrt2()),
        3 => Some(ExactReal::sqrt3()),
        5 => Some(ExactReal::sqrt5()),
        8 => Some(ExactReal::sqrt2().scale_int(2)),
        12 => Some(ExactReal::sqrt3().scale_int(2)),
        20 => Some(ExactReal::sqrt5().scale_int(2)),
        _ => None,
    }
}

/// Parses `123`, `0.25`, `.5` as an exact rational.
pub fn parse_decimal(text: &str) -> Option<BigRational> {
    let (int, frac) = match text.split_once('.') {
        Some((i, f)) => (i, f),
        None => (text, ""),
    };
    if int.is_empty() && frac.is_empty() {
        return None;
    }
    if !int.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let digits = format!("{int}{frac}");
    let num: BigInt = digits.parse().ok()?;
    let den = BigInt::from(10).pow(frac.len() as u32);
    Some(BigRational::new(num, den))
}

impl FromStr for ExactReal {
    type Err = ParseRealError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s.trim().is_empty() {
            return Err(ParseRealError::Empty);
        }
        let mut p = Parser { src: s, pos: 0 };
        let v = p.expr()?;
        p.skip_ws();
        match p.peek() {
            None => Ok(v),
            Some(c) => Err(ParseRealError::Unexpected(c, p.pos)),
        }
    }
}

impl serde::Serialize for ExactReal {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}
