//! Scalar abstraction shared by the t-norm arithmetic and the simplex solver.
//!
//! Everything that only needs field operations and a total order on the
//! values it actually meets is written against [`Scalar`]. The workbench
//! itself instantiates it with [`crate::Rational`]; the floating point
//! instances exist for quick numeric experiments and are never used where an
//! exact answer is required.

use std::fmt;

use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use num_traits::{CheckedAdd, CheckedDiv, CheckedMul, CheckedSub, Num, One, Signed, ToPrimitive, Zero};

/// A number type usable by the t-norm kernels and the linear programming code.
pub trait Scalar: Num + Clone + PartialOrd + fmt::Debug + fmt::Display {
    /// Magnitude below which a quantity is treated as zero. `0` for exact types.
    fn epsilon() -> Self;

    /// `true` when the type computes without rounding.
    fn is_exact() -> bool {
        false
    }

    fn from_ratio(num: i64, den: i64) -> Self;

    fn is_negligible(&self) -> bool {
        let eps = Self::epsilon();
        let neg = Self::zero() - eps.clone();
        *self <= eps && *self >= neg
    }

    fn is_positive_strict(&self) -> bool {
        *self > Self::epsilon()
    }

    fn is_negative_strict(&self) -> bool {
        *self < Self::zero() - Self::epsilon()
    }
}

impl Scalar for f64 {
    fn epsilon() -> Self {
        1e-9
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        num as f64 / den as f64
    }
}

impl Scalar for f32 {
    fn epsilon() -> Self {
        1e-5
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        num as f32 / den as f32
    }
}

impl Scalar for BigRational {
    fn epsilon() -> Self {
        Self::zero()
    }

    fn is_exact() -> bool {
        true
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        Ratio::new(BigInt::from(num), BigInt::from(den))
    }
}

impl Scalar for Ratio<i64> {
    fn epsilon() -> Self {
        Self::zero()
    }

    fn is_exact() -> bool {
        true
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        Ratio::new(num, den)
    }
}

/// Exact rational that stays on `i64` parts until an operation overflows,
/// then continues on big integers. Values are kept normalised, so the
/// derived equality is numeric equality.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum HybridRational {
    Small(Ratio<i64>),
    Big(BigRational),
}

impl HybridRational {
    pub fn to_big(&self) -> BigRational {
        match self {
            HybridRational::Small(r) => Ratio::new_raw(BigInt::from(*r.numer()), BigInt::from(*r.denom())),
            HybridRational::Big(r) => r.clone(),
        }
    }

    pub fn from_big(r: BigRational) -> Self {
        match (r.numer().to_i64(), r.denom().to_i64()) {
            (Some(n), Some(d)) => HybridRational::Small(Ratio::new_raw(n, d)),
            _ => HybridRational::Big(r),
        }
    }

    fn combine(
        self,
        other: Self,
        small: impl FnOnce(&Ratio<i64>, &Ratio<i64>) -> Option<Ratio<i64>>,
        big: impl FnOnce(BigRational, BigRational) -> BigRational,
    ) -> Self {
        if let (HybridRational::Small(a), HybridRational::Small(b)) = (&self, &other) {
            if let Some(r) = small(a, b) {
                return HybridRational::Small(r);
            }
        }
        HybridRational::from_big(big(self.to_big(), other.to_big()))
    }
}

impl From<BigRational> for HybridRational {
    fn from(r: BigRational) -> Self {
        HybridRational::from_big(r)
    }
}

impl fmt::Display for HybridRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HybridRational::Small(r) => write!(f, "{r}"),
            HybridRational::Big(r) => write!(f, "{r}"),
        }
    }
}

impl PartialOrd for HybridRational {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for HybridRational {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        match (self, other) {
            (HybridRational::Small(a), HybridRational::Small(b)) => a.cmp(b),
            _ => self.to_big().cmp(&other.to_big()),
        }
    }
}

impl std::ops::Add for HybridRational {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        self.combine(o, |a, b| a.checked_add(b), |a, b| a + b)
    }
}

impl std::ops::Sub for HybridRational {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        self.combine(o, |a, b| a.checked_sub(b), |a, b| a - b)
    }
}

impl std::ops::Mul for HybridRational {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        self.combine(o, |a, b| a.checked_mul(b), |a, b| a * b)
    }
}

impl std::ops::Div for HybridRational {
    type Output = Self;
    fn div(self, o: Self) -> Self {
        self.combine(o, |a, b| a.checked_div(b), |a, b| a / b)
    }
}

impl std::ops::Neg for HybridRational {
    type Output = Self;
    fn neg(self) -> Self {
        match self {
            HybridRational::Small(r) if *r.numer() != i64::MIN => HybridRational::Small(-r),
            other => HybridRational::from_big(-other.to_big()),
        }
    }
}

impl std::ops::Rem for HybridRational {
    type Output = Self;
    fn rem(self, o: Self) -> Self {
        HybridRational::from_big(self.to_big() % o.to_big())
    }
}

impl Zero for HybridRational {
    fn zero() -> Self {
        HybridRational::Small(Ratio::zero())
    }

    fn is_zero(&self) -> bool {
        match self {
            HybridRational::Small(r) => r.is_zero(),
            HybridRational::Big(r) => r.is_zero(),
        }
    }
}

impl One for HybridRational {
    fn one() -> Self {
        HybridRational::Small(Ratio::one())
    }
}

impl Num for HybridRational {
    type FromStrRadixErr = <BigRational as Num>::FromStrRadixErr;

    fn from_str_radix(s: &str, radix: u32) -> Result<Self, Self::FromStrRadixErr> {
        BigRational::from_str_radix(s, radix).map(HybridRational::from_big)
    }
}

impl Scalar for HybridRational {
    fn epsilon() -> Self {
        Self::zero()
    }

    fn is_exact() -> bool {
        true
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        HybridRational::Small(Ratio::new(num, den))
    }

    fn is_negligible(&self) -> bool {
        self.is_zero()
    }

    fn is_positive_strict(&self) -> bool {
        match self {
            HybridRational::Small(r) => r.is_positive(),
            HybridRational::Big(r) => r.is_positive(),
        }
    }

    fn is_negative_strict(&self) -> bool {
        match self {
            HybridRational::Small(r) => r.is_negative(),
            HybridRational::Big(r) => r.is_negative(),
        }
    }
}

fn min<S: Scalar>(a: &S, b: &S) -> S {
    if a <= b {
        a.clone()
    } else {
        b.clone()
    }
}

fn max<S: Scalar>(a: &S, b: &S) -> S {
    if a >= b {
        a.clone()
    } else {
        b.clone()
    }
}

/// Lattice meet on `[0,1]`.
pub fn meet<S: Scalar>(a: &S, b: &S) -> S {
    min(a, b)
}

/// Lattice join on `[0,1]`.
pub fn join<S: Scalar>(a: &S, b: &S) -> S {
    max(a, b)
}

/// Łukasiewicz t-norm `max{0, a + b - 1}`.
pub fn luk_times<S: Scalar>(a: &S, b: &S) -> S {
    let s = a.clone() + b.clone() - S::one();
    max(&S::zero(), &s)
}

/// Łukasiewicz residuum `min{1, 1 - a + b}`.
pub fn luk_implies<S: Scalar>(a: &S, b: &S) -> S {
    let s = S::one() - a.clone() + b.clone();
    min(&S::one(), &s)
}

/// Gödel t-norm (minimum).
pub fn godel_times<S: Scalar>(a: &S, b: &S) -> S {
    min(a, b)
}

/// Gödel residuum: `1` if `a <= b`, else `b`.
pub fn godel_implies<S: Scalar>(a: &S, b: &S) -> S {
    if a <= b {
        S::one()
    } else {
        b.clone()
    }
}

/// Product t-norm.
pub fn product_times<S: Scalar>(a: &S, b: &S) -> S {
    a.clone() * b.clone()
}

/// Goguen residuum: `1` if `a <= b`, else `b / a`.
pub fn product_implies<S: Scalar>(a: &S, b: &S) -> S {
    if a <= b {
        S::one()
    } else {
        b.clone() / a.clone()
    }
}

/// Closed form of the `n`-th Łukasiewicz power: `max{0, 1 - n(1 - a)}`.
pub fn luk_power<S: Scalar>(a: &S, n: S) -> S {
    if n.is_zero() {
        return S::one();
    }
    let s = S::one() - n * (S::one() - a.clone());
    max(&S::zero(), &s)
}

/// `true` when `x` lies in the closed unit interval.
pub fn in_unit_interval<S: Scalar>(x: &S) -> bool {
    *x >= S::zero() && *x <= S::one()
}
