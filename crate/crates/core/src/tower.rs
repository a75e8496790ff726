//! Extended-magnitude reals stored as `± exp^k(m)` or its reciprocal.
//!
//! A [`TowerReal`] carries a sign, a reciprocal flag, a level `k` and a
//! double `m`. Its magnitude is `exp^k(m)` (with `exp^0(m) = m`) when
//! `recip` is false and `1 / exp^k(m)` when it is true.
//!
//! Canonical form, with threshold `T = 700`:
//!
//! - zero is `sign = 0, recip = false, level = 0, mag = 0`;
//! - level 0 holds magnitudes in `[1, e^T)`;
//! - level `k >= 1` holds `mag` in `[T, e^T)`;
//! - magnitudes below one set `recip` and store the reciprocal's tower.
//!
//! Only multiplication, `exp` and `ln` are provided. General addition has
//! unbounded relative error at high levels; the one sum the library needs is
//! an internal dominated sum that backs `mul`.

use std::cmp::Ordering;
use std::fmt;
use std::ops::Neg;
use std::str::FromStr;

use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::error::Error;
use crate::Result;

/// Normalization threshold `T`: a level is raised once the magnitude reaches `e^T`.
pub const THRESHOLD: f64 = 700.0;

/// `e^700` as a double.
pub const EXP_THRESHOLD: f64 = 1.014_232_054_735_004_5e304;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TowerReal {
    sign: i8,
    recip: bool,
    level: u32,
    mag: f64,
}

// Canonical values never hold NaN.
impl Eq for TowerReal {}

#[inline]
fn should_raise(mag: f64) -> bool {
    mag >= EXP_THRESHOLD && mag.ln() >= THRESHOLD
}

#[inline]
fn should_lower(mag: f64) -> bool {
    mag < THRESHOLD && mag.exp() < EXP_THRESHOLD
}

impl TowerReal {
    pub const ZERO: TowerReal = TowerReal {
        sign: 0,
        recip: false,
        level: 0,
        mag: 0.0,
    };

    pub const ONE: TowerReal = TowerReal {
        sign: 1,
        recip: false,
        level: 0,
        mag: 1.0,
    };

    /// Builds a value from raw parts and brings it to canonical form.
    ///
    /// `sign` must be -1, 0 or 1. At level 0 `mag` must be non-negative (the
    /// sign lives in `sign`); at level 1 a negative `mag` is read as
    /// `exp(mag) = 1/exp(-mag)`.
    pub fn from_parts(sign: i8, recip: bool, level: u32, mag: f64) -> Result<Self> {
        if !(-1..=1).contains(&sign) {
            return Err(Error::Parse(format!("sign {sign}")));
        }
        normalize(sign, recip, level, mag)
    }

    /// `exp^level(mag)`, canonicalized.
    pub fn tower(level: u32, mag: f64) -> Result<Self> {
        normalize(1, false, level, mag)
    }

    pub fn from_real(x: f64) -> Result<Self> {
        if !x.is_finite() {
            return Err(Error::NonFinite(x));
        }
        if x == 0.0 {
            return Ok(Self::ZERO);
        }
        let sign = if x < 0.0 { -1 } else { 1 };
        normalize(sign, false, 0, x.abs())
    }

    pub fn sign(&self) -> i8 {
        self.sign
    }

    pub fn is_recip(&self) -> bool {
        self.recip
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn mag(&self) -> f64 {
        self.mag
    }

    pub fn is_zero(&self) -> bool {
        self.sign == 0
    }

    pub fn abs(self) -> Self {
        TowerReal {
            sign: self.sign.abs(),
            ..self
        }
    }

    pub fn recip(self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::NotRepresentable("1/0".into()));
        }
        if self.level == 0 && self.mag == 1.0 {
            return Ok(self);
        }
        Ok(TowerReal {
            recip: !self.recip,
            ..self
        })
    }

    /// Nearest double; saturates to `±inf` or `±0` above level 0.
    pub fn to_f64(&self) -> f64 {
        let s = f64::from(self.sign);
        match (self.level, self.recip) {
            (_, _) if self.sign == 0 => 0.0,
            (0, false) => s * self.mag,
            (0, true) => s / self.mag,
            (_, false) => s * f64::INFINITY,
            (_, true) => s * 0.0,
        }
    }

    /// Natural logarithm. Requires a positive value.
    pub fn ln_of(&self) -> Result<Self> {
        if self.sign <= 0 {
            return Err(Error::InvalidArgument {
                name: "ln argument",
                value: self.to_f64(),
                reason: "logarithm needs a positive value",
            });
        }
        let up = match self.level {
            0 => Self::from_real(self.mag.ln())?,
            k => normalize(1, false, k - 1, self.mag)?,
        };
        Ok(if self.recip { -up } else { up })
    }

    /// `ln x` as a double, when it fits.
    pub fn ln_f64(&self) -> Result<f64> {
        let l = self.ln_of()?;
        if l.level == 0 {
            Ok(l.to_f64())
        } else {
            Err(Error::NotRepresentable(l.render()))
        }
    }

    pub fn exp_of(&self) -> Self {
        match self.sign {
            0 => Self::ONE,
            1 if self.recip => Self::from_real(self.to_f64().exp()).expect("exp of (0,1) is finite"),
            1 => normalize(1, false, self.level + 1, self.mag).expect("canonical mag stays finite"),
            _ => self.abs().exp_of().recip().expect("exp is never zero"),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::ZERO;
        }
        let sign = self.sign * other.sign;
        if self.level == 0 && other.level == 0 {
            let (m1, m2) = (self.mag, other.mag);
            let (m, recip) = match (self.recip, other.recip) {
                (false, false) => (m1 * m2, false),
                (true, true) => (m1 * m2, true),
                (false, true) => (m1 / m2, false),
                (true, false) => (m2 / m1, false),
            };
            if m.is_finite() {
                return normalize(sign, recip, 0, m).expect("finite nonzero product");
            }
            // Both factors on the same side of one and the product overflowed.
            return normalize(sign, recip, 1, m1.ln() + m2.ln()).expect("log of product is finite");
        }
        let l1 = self.abs().ln_of().expect("positive");
        let l2 = other.abs().ln_of().expect("positive");
        let mut out = dominated_sum(&l1, &l2).exp_of();
        out.sign = sign;
        out
    }

    /// Compares absolute values.
    pub fn cmp_abs(&self, other: &Self) -> Ordering {
        match (self.is_zero(), other.is_zero()) {
            (true, true) => return Ordering::Equal,
            (true, false) => return Ordering::Less,
            (false, true) => return Ordering::Greater,
            _ => {}
        }
        match (self.recip, other.recip) {
            (true, false) => Ordering::Less,
            (false, true) => Ordering::Greater,
            (false, false) => self.level.cmp(&other.level).then(self.mag.total_cmp(&other.mag)),
            (true, true) => other.level.cmp(&self.level).then(other.mag.total_cmp(&self.mag)),
        }
    }

    /// The exact part of the textual form, without the `≈` annotation.
    pub fn exact_string(&self) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let s = if self.sign < 0 { "-" } else { "" };
        let m = fmt_f64(self.mag);
        match (self.level, self.recip) {
            (0, false) => format!("{s}{m}"),
            (0, true) => format!("{s}1/{m}"),
            (1, false) => format!("{s}exp({m})"),
            (1, true) => format!("{s}exp(-{m})"),
            (k, false) => format!("{s}exp^{k}({m})"),
            (k, true) => format!("{s}1/exp^{k}({m})"),
        }
    }

    /// Human and machine readable form.
    ///
    /// Level 0 integers and decimals print as themselves, level 0 reciprocals
    /// as `1/m ≈ d`, level 1 as `exp(±m) ≈ 10^(±p)` with `p = m / ln 10`,
    /// higher levels as `exp^k(m)` or `1/exp^k(m)`.
    pub fn render(&self) -> String {
        let exact = self.exact_string();
        if self.is_zero() {
            return exact;
        }
        let s = if self.sign < 0 { "-" } else { "" };
        match (self.level, self.recip) {
            (0, true) => format!("{exact} ≈ {s}{:.6e}", 1.0 / self.mag),
            (1, r) => {
                let p = self.mag / std::f64::consts::LN_10;
                let e = if r { "-" } else { "" };
                format!("{exact} ≈ {s}10^({e}{p:.1})")
            }
            _ => exact,
        }
    }
}

fn normalize(sign: i8, mut recip: bool, mut level: u32, mut mag: f64) -> Result<TowerReal> {
    if !mag.is_finite() {
        return Err(Error::NonFinite(mag));
    }
    if sign == 0 {
        return Ok(TowerReal::ZERO);
    }
    loop {
        if level == 0 {
            if mag < 0.0 {
                return Err(Error::InvalidArgument {
                    name: "mag",
                    value: mag,
                    reason: "level-0 magnitude must be non-negative",
                });
            }
            if mag == 0.0 {
                return if recip {
                    Err(Error::NotRepresentable("1/0".into()))
                } else {
                    Ok(TowerReal::ZERO)
                };
            }
            if mag < 1.0 {
                let inv = 1.0 / mag;
                recip = !recip;
                if inv.is_finite() && !should_raise(inv) {
                    mag = inv;
                } else {
                    level = 1;
                    mag = -mag.ln();
                }
                continue;
            }
            if should_raise(mag) {
                mag = mag.ln();
                level = 1;
                continue;
            }
            if mag == 1.0 {
                recip = false;
            }
            break;
        }
        if level == 1 && mag < 0.0 {
            mag = -mag;
            recip = !recip;
            continue;
        }
        if should_raise(mag) {
            mag = mag.ln();
            level += 1;
            continue;
        }
        if should_lower(mag) {
            mag = mag.exp();
            level -= 1;
            continue;
        }
        break;
    }
    Ok(TowerReal {
        sign,
        recip,
        level,
        mag,
    })
}

/// `a + b` for the sums `mul` needs: the smaller term only enters through
/// `ln1p(small/big)`, so the result is exact to rounding whenever one term
/// dominates, and a plain double sum when both fit at level 0.
pub(crate) fn dominated_sum(a: &TowerReal, b: &TowerReal) -> TowerReal {
    if a.is_zero() {
        return *b;
    }
    if b.is_zero() {
        return *a;
    }
    let (big, small) = if a.cmp_abs(b) == Ordering::Less { (b, a) } else { (a, b) };
    if big.level == 0 {
        return TowerReal::from_real(big.to_f64() + small.to_f64()).expect("sum of two level-0 values is finite");
    }
    let ratio = small.mul(&big.recip().expect("nonzero")).to_f64();
    if ratio <= -1.0 {
        return TowerReal::ZERO;
    }
    let ln_big = big.abs().ln_of().expect("positive");
    let corr = TowerReal::from_real(ratio.ln_1p()).expect("finite correction");
    let mut out = dominated_sum(&ln_big, &corr).exp_of();
    out.sign = big.sign;
    out
}

impl Neg for TowerReal {
    type Output = TowerReal;

    fn neg(self) -> Self {
        TowerReal {
            sign: -self.sign,
            ..self
        }
    }
}

impl PartialOrd for TowerReal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for TowerReal {
    fn cmp(&self, other: &Self) -> Ordering {
        match self.sign.cmp(&other.sign) {
            Ordering::Equal => {}
            o => return o,
        }
        match self.sign {
            0 => Ordering::Equal,
            1 => self.cmp_abs(other),
            _ => other.cmp_abs(self),
        }
    }
}

impl fmt::Display for TowerReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

/// Shortest round-trip decimal; exponent form outside `[1e-5, 1e16)`.
pub(crate) fn fmt_f64(x: f64) -> String {
    let a = x.abs();
    if a == 0.0 || (1e-5..1e16).contains(&a) {
        format!("{x}")
    } else {
        format!("{x:?}")
    }
}

fn parse_f64(s: &str) -> Result<f64> {
    let v: f64 = s.trim().parse().map_err(|_| Error::Parse(s.into()))?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::Parse(s.into()))
    }
}

fn parse_call<'a>(s: &'a str, full: &str) -> Result<&'a str> {
    s.strip_prefix('(')
        .and_then(|r| r.strip_suffix(')'))
        .ok_or_else(|| Error::Parse(full.into()))
}

fn parse_level(s: &str, full: &str) -> Result<(u32, f64)> {
    let open = s.find('(').ok_or_else(|| Error::Parse(full.into()))?;
    let k: u32 = s[..open].parse().map_err(|_| Error::Parse(full.into()))?;
    let m = parse_f64(parse_call(&s[open..], full)?)?;
    Ok((k, m))
}

impl FromStr for TowerReal {
    type Err = Error;

    /// Parses the [`TowerReal::render`] grammar; anything after `≈` is ignored.
    fn from_str(input: &str) -> Result<Self> {
        let exact = input.split('≈').next().unwrap_or("").trim();
        if exact.is_empty() {
            return Err(Error::Parse(input.into()));
        }
        let (sign, body) = match exact.strip_prefix('-') {
            Some(rest) if !rest.starts_with(|c: char| c.is_ascii_digit() || c == '.') => (-1, rest),
            Some(rest) if rest.starts_with("1/") => (-1, rest),
            _ => (1, exact),
        };
        if let Some(rest) = body.strip_prefix("1/exp^") {
            let (k, m) = parse_level(rest, input)?;
            return Self::from_parts(sign, true, k, m);
        }
        if let Some(rest) = body.strip_prefix("exp^") {
            let (k, m) = parse_level(rest, input)?;
            return Self::from_parts(sign, false, k, m);
        }
        if let Some(rest) = body.strip_prefix("exp") {
            let inner = parse_call(rest, input)?;
            let (recip, digits) = match inner.strip_prefix('-') {
                Some(d) => (true, d),
                None => (false, inner),
            };
            return Self::from_parts(sign, recip, 1, parse_f64(digits)?);
        }
        if let Some(rest) = body.strip_prefix("1/") {
            let m = parse_f64(rest)?;
            if m < 1.0 {
                return Err(Error::Parse(input.into()));
            }
            return Self::from_parts(sign, true, 0, m);
        }
        Self::from_real(parse_f64(exact)?)
    }
}

impl Serialize for TowerReal {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = serializer.serialize_struct("TowerReal", 5)?;
        st.serialize_field("text", &self.render())?;
        st.serialize_field("sign", &self.sign)?;
        st.serialize_field("level", &self.level)?;
        st.serialize_field("mag", &self.mag)?;
        st.serialize_field("recip", &self.recip)?;
        st.end()
    }
}
