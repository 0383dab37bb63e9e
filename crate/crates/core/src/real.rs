//! Scalar abstraction so the trigonometric formulas run in `f64` or in
//! extended precision.
//!
//! The angle chart of Teichmüller space is badly conditioned near the regular
//! polygons: each triangle of the fan multiplies rounding errors by roughly
//! the reciprocal of its apex angle. The reconstruction chain therefore runs
//! in [`Wide`] (128-bit mantissa) and rounds to `f64` only at the end.

use std::cell::RefCell;
use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use astro_float::{BigFloat, Consts, RoundingMode, Sign};

/// The operations the closed-form trigonometry needs.
pub trait Real:
    Clone
    + PartialOrd
    + fmt::Debug
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    fn from_f64(x: f64) -> Self;
    fn to_f64(&self) -> f64;
    fn pi() -> Self;
    fn sin(&self) -> Self;
    fn cos(&self) -> Self;
    fn sinh(&self) -> Self;
    fn asinh(&self) -> Self;
    fn sqrt(&self) -> Self;
    /// Four-quadrant arctangent of `self / x`.
    fn atan2(&self, x: &Self) -> Self;

    fn abs(&self) -> Self {
        if self.to_f64() < 0.0 {
            -self.clone()
        } else {
            self.clone()
        }
    }

    fn max0(&self) -> Self {
        if self.to_f64() > 0.0 {
            self.clone()
        } else {
            Self::from_f64(0.0)
        }
    }

    fn half(&self) -> Self {
        self.clone() * Self::from_f64(0.5)
    }

    fn sq(&self) -> Self {
        self.clone() * self.clone()
    }
}

impl Real for f64 {
    fn from_f64(x: f64) -> Self {
        x
    }
    fn to_f64(&self) -> f64 {
        *self
    }
    fn pi() -> Self {
        std::f64::consts::PI
    }
    fn sin(&self) -> Self {
        f64::sin(*self)
    }
    fn cos(&self) -> Self {
        f64::cos(*self)
    }
    fn sinh(&self) -> Self {
        f64::sinh(*self)
    }
    fn asinh(&self) -> Self {
        f64::asinh(*self)
    }
    fn sqrt(&self) -> Self {
        f64::sqrt(*self)
    }
    fn atan2(&self, x: &Self) -> Self {
        f64::atan2(*self, *x)
    }
    fn abs(&self) -> Self {
        f64::abs(*self)
    }
}

/// Mantissa bits of [`Wide`].
pub const WIDE_BITS: usize = 128;
const RM: RoundingMode = RoundingMode::ToEven;

thread_local! {
    static CONSTS: RefCell<Consts> = RefCell::new(Consts::new().expect("constant cache"));
}

fn with_cc<T>(f: impl FnOnce(&mut Consts) -> T) -> T {
    CONSTS.with(|c| f(&mut c.borrow_mut()))
}

/// Extended-precision real.
#[derive(Clone)]
pub struct Wide(BigFloat);

impl Wide {
    fn wrap(x: BigFloat) -> Self {
        Wide(x)
    }
}

impl fmt::Debug for Wide {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl PartialEq for Wide {
    fn eq(&self, other: &Self) -> bool {
        self.partial_cmp(other) == Some(Ordering::Equal)
    }
}

impl PartialOrd for Wide {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        self.0.cmp(&other.0).map(|s| s.cmp(&0))
    }
}

macro_rules! wide_binop {
    ($tr:ident, $method:ident) => {
        impl $tr for Wide {
            type Output = Wide;
            fn $method(self, rhs: Wide) -> Wide {
                Wide::wrap(self.0.$method(&rhs.0, WIDE_BITS, RM))
            }
        }
    };
}

wide_binop!(Add, add);
wide_binop!(Sub, sub);
wide_binop!(Mul, mul);
wide_binop!(Div, div);

impl Neg for Wide {
    type Output = Wide;
    fn neg(self) -> Wide {
        Wide(self.0.neg())
    }
}

impl Real for Wide {
    fn from_f64(x: f64) -> Self {
        Wide(BigFloat::from_f64(x, WIDE_BITS))
    }

    fn to_f64(&self) -> f64 {
        if self.0.is_nan() {
            return f64::NAN;
        }
        if self.0.is_inf_pos() {
            return f64::INFINITY;
        }
        if self.0.is_inf_neg() {
            return f64::NEG_INFINITY;
        }
        match self.0.as_raw_parts() {
            None => f64::NAN,
            Some((words, _, sign, exp, _)) => {
                // value = 0.m × 2^exp with the leading bit at the top of the last word
                let mut top = words.last().copied().unwrap_or(0);
                if top == 0 {
                    return 0.0;
                }
                // a tie in the top word is broken by any lower nonzero word
                let lower = words[..words.len() - 1].iter().any(|w| *w != 0);
                if top & 0x7ff == 0x400 && lower {
                    top |= 1;
                }
                let m = top as f64;
                let e = exp - 64;
                let v = m * 2f64.powi(e / 2) * 2f64.powi(e - e / 2);
                if sign == Sign::Neg {
                    -v
                } else {
                    v
                }
            }
        }
    }

    fn pi() -> Self {
        Wide(with_cc(|cc| cc.pi(WIDE_BITS, RM)))
    }

    fn sin(&self) -> Self {
        Wide(with_cc(|cc| self.0.sin(WIDE_BITS, RM, cc)))
    }

    fn cos(&self) -> Self {
        Wide(with_cc(|cc| self.0.cos(WIDE_BITS, RM, cc)))
    }

    fn sinh(&self) -> Self {
        Wide(with_cc(|cc| self.0.sinh(WIDE_BITS, RM, cc)))
    }

    fn asinh(&self) -> Self {
        Wide(with_cc(|cc| self.0.asinh(WIDE_BITS, RM, cc)))
    }

    fn sqrt(&self) -> Self {
        Wide(self.0.sqrt(WIDE_BITS, RM))
    }

    fn atan2(&self, x: &Self) -> Self {
        let zero = Wide::from_f64(0.0);
        let (ys, xs) = (self.clone() >= zero, x.clone() >= zero);
        let (ya, xa) = (self.abs(), x.abs());
        if ya == zero && xa == zero {
            return zero;
        }
        let atan = |t: Wide| Wide(with_cc(|cc| t.0.atan(WIDE_BITS, RM, cc)));
        // first-quadrant angle, keeping the ratio below one
        let q = if ya <= xa {
            atan(ya / xa)
        } else {
            Wide::pi().half() - atan(xa / ya)
        };
        let q = if xs { q } else { Wide::pi() - q };
        if ys {
            q
        } else {
            -q
        }
    }
}
