//! Exact real numbers.
//!
//! An [`Exact`] is a rational number or an expression DAG over rationals built
//! from `+ - * /` and square roots. Small rational results are folded eagerly;
//! larger ones stay symbolic so that recurrences whose denominators grow
//! doubly exponentially (for example `t -> (1 - t) t`) remain cheap to build.
//!
//! Ordering is decided in three stages:
//!
//! 1. structural identity (shared nodes, or the same expression built twice),
//! 2. certified interval enclosures at increasing binary precision,
//! 3. exact materialisation as a rational when the expression is small enough.
//!
//! Distinct values are always separated by stage 2. Stage 3 only runs for
//! values that agree to [`MAX_PRECISION`] bits. Two irrational expressions
//! that agree that far and cannot be materialised are reported equal; the
//! only way to reach that case is to mix square roots non-trivially (for
//! example `sqrt(2) + sqrt(2)` against `sqrt(8)`).

use std::cmp::Ordering;
use std::collections::{HashMap, HashSet};
use std::fmt;
use std::hash::{DefaultHasher, Hash, Hasher};
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::sync::{Arc, Mutex};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Rational results up to this many bits (numerator plus denominator) are folded.
const FOLD_BITS: u64 = 1024;
/// Symbolic values up to this size render as `p/q`.
const RENDER_BITS: u64 = 4096;
const START_PRECISION: u32 = 64;
/// Largest binary precision used by interval comparison.
pub const MAX_PRECISION: u32 = 1 << 14;
/// Largest estimated size (bits) materialised as a last resort during comparison.
const MATERIALISE_BITS: u64 = 1 << 22;

#[derive(Clone)]
pub struct Exact(Arc<Node>);

struct Node {
    op: Op,
    hash: u64,
    /// Upper bound on the size of the materialised rational; `u64::MAX` if irrational.
    size_bits: u64,
    enclosure: Mutex<Option<Enclosure>>,
}

enum Op {
    Rational(BigRational),
    Add(Exact, Exact),
    Sub(Exact, Exact),
    Mul(Exact, Exact),
    Div(Exact, Exact),
    Sqrt(Exact),
}

/// `[lo, hi] * 2^-prec`
#[derive(Clone)]
struct Enclosure {
    prec: u32,
    lo: BigInt,
    hi: BigInt,
}

fn bits_of(r: &BigRational) -> u64 {
    r.numer().bits() + r.denom().bits()
}

fn pow2(p: u32) -> BigInt {
    BigInt::one() << p
}

fn ceil_div(a: &BigInt, b: &BigInt) -> BigInt {
    -((-a).div_floor(b))
}

fn ceil_sqrt(x: &BigInt) -> BigInt {
    let s = x.sqrt();
    if &(&s * &s) < x {
        s + 1
    } else {
        s
    }
}

impl Exact {
    fn from_op(op: Op) -> Exact {
        let mut h = DefaultHasher::new();
        let size_bits = match &op {
            Op::Rational(r) => {
                0u8.hash(&mut h);
                r.numer().hash(&mut h);
                r.denom().hash(&mut h);
                bits_of(r)
            }
            Op::Add(a, b) | Op::Sub(a, b) | Op::Mul(a, b) | Op::Div(a, b) => {
                let tag = match &op {
                    Op::Add(..) => 1u8,
                    Op::Sub(..) => 2,
                    Op::Mul(..) => 3,
                    _ => 4,
                };
                tag.hash(&mut h);
                a.0.hash.hash(&mut h);
                b.0.hash.hash(&mut h);
                a.0.size_bits.saturating_add(b.0.size_bits).saturating_add(1)
            }
            Op::Sqrt(a) => {
                5u8.hash(&mut h);
                a.0.hash.hash(&mut h);
                u64::MAX
            }
        };
        Exact(Arc::new(Node {
            op,
            hash: h.finish(),
            size_bits,
            enclosure: Mutex::new(None),
        }))
    }

    pub fn from_rational(r: BigRational) -> Exact {
        Exact::from_op(Op::Rational(r))
    }

    pub fn from_integer(n: i64) -> Exact {
        Exact::from_rational(BigRational::from_integer(n.into()))
    }

    /// `num / den`. Panics when `den == 0`.
    pub fn ratio(num: i64, den: i64) -> Exact {
        assert!(den != 0, "zero denominator");
        Exact::from_rational(BigRational::new(num.into(), den.into()))
    }

    pub fn zero() -> Exact {
        Exact::from_integer(0)
    }

    pub fn one() -> Exact {
        Exact::from_integer(1)
    }

    /// The rational value, if this node is a folded rational.
    pub fn as_rational(&self) -> Option<&BigRational> {
        match &self.0.op {
            Op::Rational(r) => Some(r),
            _ => None,
        }
    }

    pub fn is_symbolic(&self) -> bool {
        self.as_rational().is_none()
    }

    /// Whether `self` and `other` are the same expression (a sufficient
    /// condition for equality, not a necessary one).
    pub fn same_expression(&self, other: &Exact) -> bool {
        let mut memo = HashSet::new();
        same(self, other, &mut memo)
    }

    fn rational_op(op: fn(&BigRational, &BigRational) -> BigRational, a: &Exact, b: &Exact) -> Option<Exact> {
        let (x, y) = (a.as_rational()?, b.as_rational()?);
        if a.0.size_bits + b.0.size_bits > 4 * FOLD_BITS {
            return None;
        }
        let r = op(x, y);
        (bits_of(&r) <= FOLD_BITS).then(|| Exact::from_rational(r))
    }

    fn is_literal_zero(&self) -> bool {
        self.as_rational().is_some_and(Zero::is_zero)
    }

    fn is_literal_one(&self) -> bool {
        self.as_rational().is_some_and(One::is_one)
    }

    fn ordered(a: Exact, b: Exact) -> (Exact, Exact) {
        if a.0.hash <= b.0.hash {
            (a, b)
        } else {
            (b, a)
        }
    }

    fn add_impl(a: &Exact, b: &Exact) -> Exact {
        if a.is_literal_zero() {
            return b.clone();
        }
        if b.is_literal_zero() {
            return a.clone();
        }
        if let Some(r) = Exact::rational_op(|x, y| x + y, a, b) {
            return r;
        }
        let (a, b) = Exact::ordered(a.clone(), b.clone());
        Exact::from_op(Op::Add(a, b))
    }

    fn sub_impl(a: &Exact, b: &Exact) -> Exact {
        if b.is_literal_zero() {
            return a.clone();
        }
        if a.same_expression(b) {
            return Exact::zero();
        }
        // 0 - (0 - y) = y
        if let Op::Sub(z, y) = &b.0.op {
            if a.is_literal_zero() && z.is_literal_zero() {
                return y.clone();
            }
        }
        if let Some(r) = Exact::rational_op(|x, y| x - y, a, b) {
            return r;
        }
        Exact::from_op(Op::Sub(a.clone(), b.clone()))
    }

    fn mul_impl(a: &Exact, b: &Exact) -> Exact {
        if a.is_literal_zero() || b.is_literal_zero() {
            return Exact::zero();
        }
        if a.is_literal_one() {
            return b.clone();
        }
        if b.is_literal_one() {
            return a.clone();
        }
        if let Some(r) = Exact::rational_op(|x, y| x * y, a, b) {
            return r;
        }
        let (a, b) = Exact::ordered(a.clone(), b.clone());
        Exact::from_op(Op::Mul(a, b))
    }

    fn div_impl(a: &Exact, b: &Exact) -> Exact {
        assert!(!b.is_zero(), "division by zero");
        if a.is_literal_zero() {
            return Exact::zero();
        }
        if b.is_literal_one() {
            return a.clone();
        }
        if a.same_expression(b) {
            return Exact::one();
        }
        // (x * y) / y = x
        if let Op::Mul(x, y) = &a.0.op {
            if y.same_expression(b) {
                return x.clone();
            }
            if x.same_expression(b) {
                return y.clone();
            }
        }
        if let Some(r) = Exact::rational_op(|x, y| x / y, a, b) {
            return r;
        }
        Exact::from_op(Op::Div(a.clone(), b.clone()))
    }

    /// Square root. Panics on negative input.
    pub fn sqrt(&self) -> Exact {
        match self.sign() {
            Ordering::Less => panic!("square root of a negative value {self}"),
            Ordering::Equal => return Exact::zero(),
            Ordering::Greater => {}
        }
        if let Some(r) = self.as_rational() {
            let (n, d) = (r.numer(), r.denom());
            let (sn, sd) = (n.sqrt(), d.sqrt());
            if &(&sn * &sn) == n && &(&sd * &sd) == d {
                return Exact::from_rational(BigRational::new(sn, sd));
            }
        }
        Exact::from_op(Op::Sqrt(self.clone()))
    }

    pub fn abs(&self) -> Exact {
        if self.sign() == Ordering::Less {
            -self
        } else {
            self.clone()
        }
    }

    pub fn sign(&self) -> Ordering {
        if let Some(r) = self.as_rational() {
            return r.numer().sign().cmp_zero();
        }
        self.cmp(&Exact::zero())
    }

    pub fn is_zero(&self) -> bool {
        self.sign() == Ordering::Equal
    }

    fn enclose(&self, prec: u32) -> Option<(BigInt, BigInt)> {
        {
            let cached = self.0.enclosure.lock().expect("enclosure cache poisoned");
            if let Some(e) = cached.as_ref() {
                if e.prec == prec {
                    return Some((e.lo.clone(), e.hi.clone()));
                }
                if e.prec > prec {
                    let scale = pow2(e.prec - prec);
                    return Some((e.lo.div_floor(&scale), ceil_div(&e.hi, &scale)));
                }
            }
        }
        let scale = pow2(prec);
        let (lo, hi) = match &self.0.op {
            Op::Rational(r) => {
                let n = r.numer() * &scale;
                (n.div_floor(r.denom()), ceil_div(&n, r.denom()))
            }
            Op::Add(a, b) => {
                let (al, ah) = a.enclose(prec)?;
                let (bl, bh) = b.enclose(prec)?;
                (al + bl, ah + bh)
            }
            Op::Sub(a, b) => {
                let (al, ah) = a.enclose(prec)?;
                let (bl, bh) = b.enclose(prec)?;
                (al - bh, ah - bl)
            }
            Op::Mul(a, b) => {
                let (al, ah) = a.enclose(prec)?;
                let (bl, bh) = b.enclose(prec)?;
                let products = [&al * &bl, &al * &bh, &ah * &bl, &ah * &bh];
                let min = products.iter().min().expect("four products");
                let max = products.iter().max().expect("four products");
                (min.div_floor(&scale), ceil_div(max, &scale))
            }
            Op::Div(a, b) => {
                let (al, ah) = a.enclose(prec)?;
                let (bl, bh) = b.enclose(prec)?;
                if bl.sign().cmp_zero() != Ordering::Greater && bh.sign().cmp_zero() != Ordering::Less {
                    return None;
                }
                let mut lo: Option<BigInt> = None;
                let mut hi: Option<BigInt> = None;
                for x in [&al, &ah] {
                    let x = x * &scale;
                    for y in [&bl, &bh] {
                        let f = x.div_floor(y);
                        let c = ceil_div(&x, y);
                        lo = Some(lo.map_or(f.clone(), |l| l.min(f)));
                        hi = Some(hi.map_or(c.clone(), |h| h.max(c)));
                    }
                }
                (lo?, hi?)
            }
            Op::Sqrt(a) => {
                let (al, ah) = a.enclose(prec)?;
                let zero = BigInt::zero();
                let al = al.max(zero.clone()) * &scale;
                let ah = ah.max(zero) * &scale;
                (al.sqrt(), ceil_sqrt(&ah))
            }
        };
        let mut cached = self.0.enclosure.lock().expect("enclosure cache poisoned");
        *cached = Some(Enclosure {
            prec,
            lo: lo.clone(),
            hi: hi.clone(),
        });
        Some((lo, hi))
    }

    /// Exact rational value, if the expression is free of irrational roots.
    /// Cost is proportional to the materialised size, which can be enormous
    /// for deep symbolic nodes.
    pub fn to_rational(&self) -> Option<BigRational> {
        let mut memo = HashMap::new();
        materialise(self, &mut memo).map(|(n, d)| BigRational::new(n, d))
    }

    /// Rational value if it takes at most `max_bits` bits (numerator plus
    /// denominator). Expressions whose size estimate is far beyond that are
    /// not materialised at all.
    pub fn to_rational_bounded(&self, max_bits: u64) -> Option<BigRational> {
        if let Some(r) = self.as_rational() {
            return (bits_of(r) <= max_bits).then(|| r.clone());
        }
        if self.0.size_bits > max_bits.saturating_mul(4) {
            return None;
        }
        self.to_rational().filter(|r| bits_of(r) <= max_bits)
    }

    pub fn to_f64(&self) -> f64 {
        if let Some(r) = self.as_rational() {
            return r.to_f64().unwrap_or(f64::NAN);
        }
        let prec = 96;
        match self.enclose(prec) {
            Some((lo, hi)) => {
                let mid: BigInt = (lo + hi) / 2;
                BigRational::new(mid, pow2(prec)).to_f64().unwrap_or(f64::NAN)
            }
            None => f64::NAN,
        }
    }

    /// `p/q` (or `p` for integers) when the value is a materialisable
    /// rational of moderate size.
    pub fn to_fraction_string(&self) -> Option<String> {
        self.to_rational_bounded(RENDER_BITS).map(|r| format_rational(&r))
    }

    /// Parse `p/q`, an integer, or a decimal literal such as `0.25` or `1e-3`.
    pub fn parse(s: &str) -> Option<Exact> {
        parse_rational(s).map(Exact::from_rational)
    }
}

fn same(a: &Exact, b: &Exact, memo: &mut HashSet<(usize, usize)>) -> bool {
    if Arc::ptr_eq(&a.0, &b.0) {
        return true;
    }
    if a.0.hash != b.0.hash {
        return false;
    }
    let key = (Arc::as_ptr(&a.0) as usize, Arc::as_ptr(&b.0) as usize);
    if memo.contains(&key) {
        return true;
    }
    let result = match (&a.0.op, &b.0.op) {
        (Op::Rational(x), Op::Rational(y)) => x == y,
        (Op::Add(a1, a2), Op::Add(b1, b2))
        | (Op::Sub(a1, a2), Op::Sub(b1, b2))
        | (Op::Mul(a1, a2), Op::Mul(b1, b2))
        | (Op::Div(a1, a2), Op::Div(b1, b2)) => same(a1, b1, memo) && same(a2, b2, memo),
        (Op::Sqrt(x), Op::Sqrt(y)) => same(x, y, memo),
        _ => false,
    };
    if result {
        memo.insert(key);
    }
    result
}

/// Unreduced fraction `(numerator, denominator)` with a positive
/// denominator. Skipping the gcd keeps deep expressions affordable.
type RawFraction = (BigInt, BigInt);

fn materialise(x: &Exact, memo: &mut HashMap<usize, Option<RawFraction>>) -> Option<RawFraction> {
    let key = Arc::as_ptr(&x.0) as usize;
    if let Some(v) = memo.get(&key) {
        return v.clone();
    }
    let v = match &x.0.op {
        Op::Rational(r) => Some((r.numer().clone(), r.denom().clone())),
        Op::Add(a, b) | Op::Sub(a, b) => {
            let ((an, ad), (bn, bd)) = (materialise(a, memo)?, materialise(b, memo)?);
            let (l, r) = (&an * &bd, &bn * &ad);
            let num = if matches!(x.0.op, Op::Add(..)) { l + r } else { l - r };
            Some((num, ad * bd))
        }
        Op::Mul(a, b) => {
            let ((an, ad), (bn, bd)) = (materialise(a, memo)?, materialise(b, memo)?);
            Some((an * bn, ad * bd))
        }
        Op::Div(a, b) => {
            let ((an, ad), (bn, bd)) = (materialise(a, memo)?, materialise(b, memo)?);
            if bn.is_zero() {
                None
            } else if bn.is_negative() {
                Some((-(an * bd), ad * -bn))
            } else {
                Some((an * bd, ad * bn))
            }
        }
        Op::Sqrt(a) => {
            let (n, d) = materialise(a, memo)?;
            let r = BigRational::new(n, d);
            let (n, d) = (r.numer(), r.denom());
            let (sn, sd) = (n.sqrt(), d.sqrt());
            (&(&sn * &sn) == n && &(&sd * &sd) == d).then_some((sn, sd))
        }
    };
    memo.insert(key, v.clone());
    v
}

fn cmp_exact(a: &Exact, b: &Exact) -> Ordering {
    if let (Some(x), Some(y)) = (a.as_rational(), b.as_rational()) {
        return x.cmp(y);
    }
    if a.same_expression(b) {
        return Ordering::Equal;
    }
    match (&a.0.op, &b.0.op) {
        (Op::Sqrt(x), Op::Sqrt(y)) => return cmp_exact(x, y),
        (Op::Sqrt(x), Op::Rational(r)) if !r.is_negative() => {
            return cmp_exact(x, &Exact::from_rational(r * r));
        }
        (Op::Rational(r), Op::Sqrt(y)) if !r.is_negative() => {
            return cmp_exact(&Exact::from_rational(r * r), y);
        }
        _ => {}
    }
    let mut prec = START_PRECISION;
    loop {
        if let (Some((al, ah)), Some((bl, bh))) = (a.enclose(prec), b.enclose(prec)) {
            if ah < bl {
                return Ordering::Less;
            }
            if al > bh {
                return Ordering::Greater;
            }
        }
        if prec >= MAX_PRECISION {
            break;
        }
        prec *= 2;
    }
    if a.0.size_bits <= MATERIALISE_BITS && b.0.size_bits <= MATERIALISE_BITS {
        let mut memo = HashMap::new();
        if let (Some((an, ad)), Some((bn, bd))) = (materialise(a, &mut memo), materialise(b, &mut memo)) {
            return (an * bd).cmp(&(bn * ad));
        }
    }
    Ordering::Equal
}

impl PartialEq for Exact {
    fn eq(&self, other: &Self) -> bool {
        cmp_exact(self, other) == Ordering::Equal
    }
}

impl Eq for Exact {}

impl PartialOrd for Exact {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Exact {
    fn cmp(&self, other: &Self) -> Ordering {
        cmp_exact(self, other)
    }
}

macro_rules! binary_ops {
    ($trait:ident, $method:ident, $imp:ident) => {
        impl $trait<&Exact> for &Exact {
            type Output = Exact;
            fn $method(self, rhs: &Exact) -> Exact {
                Exact::$imp(self, rhs)
            }
        }
        impl $trait<Exact> for Exact {
            type Output = Exact;
            fn $method(self, rhs: Exact) -> Exact {
                Exact::$imp(&self, &rhs)
            }
        }
        impl $trait<&Exact> for Exact {
            type Output = Exact;
            fn $method(self, rhs: &Exact) -> Exact {
                Exact::$imp(&self, rhs)
            }
        }
        impl $trait<Exact> for &Exact {
            type Output = Exact;
            fn $method(self, rhs: Exact) -> Exact {
                Exact::$imp(self, &rhs)
            }
        }
    };
}

binary_ops!(Add, add, add_impl);
binary_ops!(Sub, sub, sub_impl);
binary_ops!(Mul, mul, mul_impl);
binary_ops!(Div, div, div_impl);

impl Neg for &Exact {
    type Output = Exact;
    fn neg(self) -> Exact {
        match self.as_rational() {
            Some(r) => Exact::from_rational(-r),
            None => Exact::sub_impl(&Exact::zero(), self),
        }
    }
}

impl Neg for Exact {
    type Output = Exact;
    fn neg(self) -> Exact {
        -&self
    }
}

impl From<i64> for Exact {
    fn from(n: i64) -> Self {
        Exact::from_integer(n)
    }
}

impl From<BigRational> for Exact {
    fn from(r: BigRational) -> Self {
        Exact::from_rational(r)
    }
}

/// Renders `p/q` when the value is a rational of moderate size and
/// `~<decimal>` otherwise.
impl fmt::Display for Exact {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.to_fraction_string() {
            Some(s) => f.write_str(&s),
            None => write!(f, "~{}", self.to_f64()),
        }
    }
}

impl fmt::Debug for Exact {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl serde::Serialize for Exact {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

pub(crate) fn format_rational(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parse `p/q`, integers and decimal literals (with optional exponent) exactly.
pub(crate) fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().ok()?;
        let d: BigInt = d.trim().parse().ok()?;
        if d.is_zero() {
            return None;
        }
        return Some(BigRational::new(n, d));
    }
    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i32>().ok()?),
        None => (s, 0),
    };
    let (negative, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let all: BigInt = format!("0{int_part}{frac_part}").parse().ok()?;
    let scale = exponent - frac_part.len() as i32;
    let ten = BigInt::from(10);
    let mut r = if scale >= 0 {
        BigRational::from_integer(all * num_traits::pow(ten, scale as usize))
    } else {
        BigRational::new(all, num_traits::pow(ten, (-scale) as usize))
    };
    if negative {
        r = -r;
    }
    Some(r)
}

trait SignExt {
    fn cmp_zero(self) -> Ordering;
}

impl SignExt for num_bigint::Sign {
    fn cmp_zero(self) -> Ordering {
        match self {
            num_bigint::Sign::Minus => Ordering::Less,
            num_bigint::Sign::NoSign => Ordering::Equal,
            num_bigint::Sign::Plus => Ordering::Greater,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Exact {
        Exact::ratio(n, d)
    }

    fn tau_chain(n: usize) -> Vec<Exact> {
        let mut v = vec![q(1, 2)];
        for _ in 1..n {
            let t = v.last().unwrap().clone();
            v.push((Exact::one() - &t) * &t);
        }
        v
    }

    #[test]
    fn small_values_fold_to_rationals() {
        let t = tau_chain(4);
        assert_eq!(t[3].as_rational(), Some(&BigRational::new(39.into(), 256.into())));
        assert_eq!(t[3].to_string(), "39/256");
    }

    #[test]
    fn deep_recurrence_stays_symbolic_and_ordered() {
        let t = tau_chain(200);
        assert!(t[199].is_symbolic());
        for w in t.windows(2) {
            assert!(w[1] < w[0]);
            assert!(w[1] > Exact::zero());
        }
        // tau_200 is roughly 1/206
        let f = t[199].to_f64();
        assert!((f - 0.004852157392474247).abs() < 1e-15, "{f}");
    }

    #[test]
    fn recurrence_identity_is_structural() {
        let t = tau_chain(40);
        let alpha = Exact::one() - &t[30];
        assert!((&alpha * &t[30]).same_expression(&t[31]));
        assert_eq!(&alpha * &t[30], t[31]);
        // (1 - t) t / t = 1 - t
        assert!((&t[31] / &t[30]).same_expression(&alpha));
    }

    #[test]
    fn symbolic_and_rational_equal_values_compare_equal() {
        let t = tau_chain(12);
        let materialised = Exact::from_rational(t[11].to_rational().unwrap());
        assert!(t[11].is_symbolic());
        assert_eq!(t[11].cmp(&materialised), Ordering::Equal);
        assert_eq!(t[11].to_fraction_string(), materialised.to_fraction_string());
    }

    #[test]
    fn square_roots() {
        assert_eq!(q(25, 1).sqrt().as_rational(), Some(&BigRational::from_integer(5.into())));
        assert_eq!(q(9, 4).sqrt(), q(3, 2));
        let r2 = q(2, 1).sqrt();
        assert!(r2.is_symbolic());
        assert!(r2 > q(141, 100) && r2 < q(142, 100));
        assert_eq!(r2, q(2, 1).sqrt());
        assert!(q(3, 1).sqrt() > r2);
        assert_eq!(&r2 * &r2, q(2, 1));
        assert!((r2.to_f64() - std::f64::consts::SQRT_2).abs() < 1e-15);
    }

    #[test]
    fn parsing() {
        assert_eq!(Exact::parse("3/4"), Some(q(3, 4)));
        assert_eq!(Exact::parse("-6/8"), Some(q(-3, 4)));
        assert_eq!(Exact::parse("0.9"), Some(q(9, 10)));
        assert_eq!(Exact::parse("1e-3"), Some(q(1, 1000)));
        assert_eq!(Exact::parse("-2.5E1"), Some(q(-25, 1)));
        assert_eq!(Exact::parse("7"), Some(q(7, 1)));
        assert_eq!(Exact::parse(".5"), Some(q(1, 2)));
        assert_eq!(Exact::parse("1/0"), None);
        assert_eq!(Exact::parse("abc"), None);
        assert_eq!(Exact::parse("~0.3"), None);
    }

    #[test]
    fn negation_and_abs() {
        let t = tau_chain(20);
        let neg = -&t[19];
        assert!(neg < Exact::zero());
        assert!(neg.abs().same_expression(&t[19]) || neg.abs() == t[19]);
        assert_eq!(q(-1, 3).abs(), q(1, 3));
    }

    #[test]
    #[should_panic(expected = "division by zero")]
    fn division_by_zero_panics() {
        let _ = q(1, 2) / Exact::zero();
    }
}
