//! Scalar coefficients for chain complexes.
//!
//! All linear algebra in this crate is generic over [`Scalar`]. Three
//! instances matter in practice: exact rationals for integral/untwisted
//! computations, the exact cyclotomic field Q(zeta_12) for covers whose
//! character values are 12th roots of unity, and complex floats for
//! everything else.

use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use std::fmt::Debug;
use std::ops::{Add, Mul, Neg, Sub};

/// Coefficient ring with involution, as needed by adjoints and duality.
///
/// `EXACT` instances promise that `is_zero` is a genuine zero test; float
/// instances get thresholded comparisons instead.
pub trait Scalar:
    Clone
    + PartialEq
    + Debug
    + Send
    + Sync
    + 'static
    + Zero
    + One
    + Neg<Output = Self>
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
{
    const EXACT: bool;
    /// True when the involution is the identity (real coefficients).
    const REAL: bool;

    fn from_i64(n: i64) -> Self;
    fn from_ratio(num: i64, den: i64) -> Self;
    /// Complex conjugate (the involution).
    fn conj(&self) -> Self;
    /// Multiplicative inverse, `None` for zero.
    fn inv(&self) -> Option<Self>;
    /// Embedding into complex doubles, used for norms and eigenvalue work.
    fn to_c64(&self) -> Complex<f64>;
    /// A square root of -1 in this ring, if one exists.
    fn imaginary_unit() -> Option<Self>;
    /// Exact rational value, when the element is one.
    fn as_rational(&self) -> Option<BigRational>;
    /// `exp(2 pi i k / n)` when representable in this ring.
    fn root_of_unity(k: i64, n: i64) -> Option<Self>;
    /// Inject a complex double, for rings that can absorb one exactly.
    fn from_c64(z: Complex<f64>) -> Option<Self>;

    fn abs_f64(&self) -> f64 {
        self.to_c64().norm()
    }
    /// Zero test at the given tolerance; exact types ignore `tol`.
    fn is_zero_tol(&self, tol: f64) -> bool {
        if Self::EXACT {
            self.is_zero()
        } else {
            self.abs_f64() <= tol
        }
    }
}

impl Scalar for BigRational {
    const EXACT: bool = true;
    const REAL: bool = true;

    fn from_i64(n: i64) -> Self {
        BigRational::from_integer((n as i64).into())
    }
    fn from_ratio(num: i64, den: i64) -> Self {
        BigRational::new(num.into(), den.into())
    }
    fn conj(&self) -> Self {
        self.clone()
    }
    fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Some(self.recip())
        }
    }
    fn to_c64(&self) -> Complex<f64> {
        Complex::new(self.to_f64().unwrap_or(f64::NAN), 0.0)
    }
    fn imaginary_unit() -> Option<Self> {
        None
    }
    fn as_rational(&self) -> Option<BigRational> {
        Some(self.clone())
    }
    fn root_of_unity(k: i64, n: i64) -> Option<Self> {
        if n <= 0 {
            return None;
        }
        match (2 * k).rem_euclid(2 * n) {
            0 => Some(<Self as Scalar>::from_i64(1)),
            m if m == n => Some(<Self as Scalar>::from_i64(-1)),
            _ => None,
        }
    }
    fn from_c64(_z: Complex<f64>) -> Option<Self> {
        None
    }
}

macro_rules! impl_scalar_complex {
    ($f:ty) => {
        impl Scalar for Complex<$f> {
            const EXACT: bool = false;
            const REAL: bool = false;

            fn from_i64(n: i64) -> Self {
                Complex::new(n as $f, 0.0)
            }
            fn from_ratio(num: i64, den: i64) -> Self {
                Complex::new(num as $f / den as $f, 0.0)
            }
            fn conj(&self) -> Self {
                Complex::conj(self)
            }
            fn inv(&self) -> Option<Self> {
                if self.norm_sqr() == 0.0 {
                    None
                } else {
                    Some(Self::new(1.0, 0.0) / self)
                }
            }
            fn to_c64(&self) -> Complex<f64> {
                Complex::new(self.re as f64, self.im as f64)
            }
            fn imaginary_unit() -> Option<Self> {
                Some(Complex::new(0.0, 1.0))
            }
            fn as_rational(&self) -> Option<BigRational> {
                None
            }
            fn root_of_unity(k: i64, n: i64) -> Option<Self> {
                if n <= 0 {
                    return None;
                }
                let angle = 2.0 * std::f64::consts::PI * k as f64 / n as f64;
                Some(Complex::new(angle.cos() as $f, angle.sin() as $f))
            }
            fn from_c64(z: Complex<f64>) -> Option<Self> {
                Some(Complex::new(z.re as $f, z.im as $f))
            }
        }
    };
}

impl_scalar_complex!(f64);
impl_scalar_complex!(f32);

/// Element of the cyclotomic field Q(zeta_12), written over the power basis
/// `1, z, z^2, z^3` with `z = e^{i pi/6}`, so `z^4 = z^2 - 1`.
///
/// This field contains all roots of unity of order dividing 12, which covers
/// the character values of the finite deck groups handled exactly
/// (|pi| in {1, 2, 3, 4, 6}).
#[derive(Clone, PartialEq, Eq)]
pub struct Cyclotomic {
    c: [BigRational; 4],
}

impl Debug for Cyclotomic {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "({} + {}z + {}z^2 + {}z^3)",
            self.c[0], self.c[1], self.c[2], self.c[3]
        )
    }
}

impl Cyclotomic {
    pub fn new(c: [BigRational; 4]) -> Self {
        Cyclotomic { c }
    }

    pub fn from_rational(r: BigRational) -> Self {
        let mut c = [
            BigRational::zero(),
            BigRational::zero(),
            BigRational::zero(),
            BigRational::zero(),
        ];
        c[0] = r;
        Cyclotomic { c }
    }

    /// `z^m` for any integer exponent, reduced into the power basis.
    pub fn z_power(m: i64) -> Self {
        let m = m.rem_euclid(12) as usize;
        let (half, sign) = if m >= 6 { (m - 6, -1) } else { (m, 1) };
        let mut c = [
            BigRational::zero(),
            BigRational::zero(),
            BigRational::zero(),
            BigRational::zero(),
        ];
        let s = BigRational::from_integer((sign as i64).into());
        match half {
            0..=3 => c[half] = s,
            // z^4 = z^2 - 1, z^5 = z^3 - z
            4 => {
                c[2] = s.clone();
                c[0] = -s;
            }
            5 => {
                c[3] = s.clone();
                c[1] = -s;
            }
            _ => unreachable!(),
        }
        Cyclotomic { c }
    }

    /// The root `e^{2 pi i k / n}`; representable when, after reducing the
    /// fraction k/n, the order divides 12.
    pub fn root_of_unity(k: i64, n: i64) -> Option<Self> {
        if n <= 0 {
            return None;
        }
        let k = k.rem_euclid(n);
        let g = gcd(k, n);
        let (k, n) = (k / g, n / g);
        if 12 % n != 0 {
            return None;
        }
        Some(Self::z_power(k * (12 / n)))
    }

    /// True when the element is fixed by conjugation (lies in Q(sqrt 3)).
    pub fn is_real(&self) -> bool {
        *self == Scalar::conj(self)
    }

    /// Exact sign of a real element `a + b z + ... ` in Q(sqrt 3).
    ///
    /// Real elements have the form `x + y sqrt3` with `sqrt3 = z + z^{-1} = 2z - z^3`...
    /// rather than solving for that basis we compare against zero through the
    /// embedding and certify with exact arithmetic on `x^2 - 3 y^2`.
    pub fn real_sign(&self) -> Option<i32> {
        if !self.is_real() {
            return None;
        }
        // conj fixes it, so c = a + b z + c z^2 + d z^3 with the constraint
        // imposed by conj; real subfield is spanned by 1 and (z - z^3) = sqrt3...
        // write self = x + y*(z - z^3)/1? Solve: basis of fixed subspace.
        // conj(a,b,c,d) = (a + c, b, -c, -b - d); fixed: c = -c -> wait, use:
        // fixed means a + c = a (c = 0 is not forced; recompute): equality of
        // coordinates gives c = 0 and d = -b - d, i.e. 2d = -b.
        // So self = a + b z - (b/2) z^3 = a + (b/2)(2z - z^3) = a + (b/2) sqrt3.
        let x = self.c[0].clone();
        let y = self.c[1].clone() / BigRational::from_integer((2 as i64).into());
        // sign of x + y sqrt3
        let zero = BigRational::zero();
        if x.is_zero() && y.is_zero() {
            return Some(0);
        }
        if y.is_zero() {
            return Some(if x > zero { 1 } else { -1 });
        }
        if x.is_zero() {
            return Some(if y > zero { 1 } else { -1 });
        }
        let x_pos = x > zero;
        let y_pos = y > zero;
        if x_pos == y_pos {
            return Some(if x_pos { 1 } else { -1 });
        }
        // opposite signs: compare x^2 with 3 y^2
        let x2 = x.clone() * x;
        let y2 = y.clone() * y * BigRational::from_integer((3 as i64).into());
        Some(match x2.cmp(&y2) {
            std::cmp::Ordering::Greater => {
                if x_pos {
                    1
                } else {
                    -1
                }
            }
            std::cmp::Ordering::Less => {
                if y_pos {
                    1
                } else {
                    -1
                }
            }
            std::cmp::Ordering::Equal => 0,
        })
    }
}

fn gcd(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a.max(1)
}

impl Zero for Cyclotomic {
    fn zero() -> Self {
        Cyclotomic::from_rational(BigRational::zero())
    }
    fn is_zero(&self) -> bool {
        self.c.iter().all(|x| x.is_zero())
    }
}

impl One for Cyclotomic {
    fn one() -> Self {
        Cyclotomic::from_rational(BigRational::one())
    }
}

impl Add for Cyclotomic {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        let mut c = self.c;
        for i in 0..4 {
            c[i] += rhs.c[i].clone();
        }
        Cyclotomic { c }
    }
}

impl Sub for Cyclotomic {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        let mut c = self.c;
        for i in 0..4 {
            c[i] -= rhs.c[i].clone();
        }
        Cyclotomic { c }
    }
}

impl Neg for Cyclotomic {
    type Output = Self;
    fn neg(self) -> Self {
        let mut c = self.c;
        for x in c.iter_mut() {
            *x = -x.clone();
        }
        Cyclotomic { c }
    }
}

impl Mul for Cyclotomic {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        // polynomial product, then reduce z^4 = z^2 - 1, z^5 = z^3 - z, z^6 = -1
        let mut raw = [
            BigRational::zero(),
            BigRational::zero(),
            BigRational::zero(),
            BigRational::zero(),
            BigRational::zero(),
            BigRational::zero(),
            BigRational::zero(),
        ];
        for i in 0..4 {
            if self.c[i].is_zero() {
                continue;
            }
            for j in 0..4 {
                if rhs.c[j].is_zero() {
                    continue;
                }
                raw[i + j] += self.c[i].clone() * rhs.c[j].clone();
            }
        }
        let mut c = [
            raw[0].clone(),
            raw[1].clone(),
            raw[2].clone(),
            raw[3].clone(),
        ];
        // z^4 = z^2 - 1
        c[2] += raw[4].clone();
        c[0] -= raw[4].clone();
        // z^5 = z^3 - z
        c[3] += raw[5].clone();
        c[1] -= raw[5].clone();
        // z^6 = -1
        c[0] -= raw[6].clone();
        Cyclotomic { c }
    }
}

impl Scalar for Cyclotomic {
    const EXACT: bool = true;
    const REAL: bool = false;

    fn from_i64(n: i64) -> Self {
        Cyclotomic::from_rational(BigRational::from_integer((n as i64).into()))
    }
    fn from_ratio(num: i64, den: i64) -> Self {
        Cyclotomic::from_rational(BigRational::new(num.into(), den.into()))
    }
    fn conj(&self) -> Self {
        // z -> z^{-1} = z - z^3; on coordinates:
        // conj(a + b z + c z^2 + d z^3) = (a + c) + b z - c z^2 + (-b - d) z^3
        let [a, b, c, d] = self.c.clone();
        Cyclotomic {
            c: [a + c.clone(), b.clone(), -c, -b - d],
        }
    }
    fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        // Solve M x = e_0 where M is multiplication by self in the power basis.
        let cols: Vec<Cyclotomic> = (0..4)
            .map(|j| self.clone() * Cyclotomic::z_power(j as i64))
            .collect();
        // 4x5 augmented system
        let mut a: Vec<Vec<BigRational>> = (0..4)
            .map(|i| {
                let mut row: Vec<BigRational> = (0..4).map(|j| cols[j].c[i].clone()).collect();
                row.push(if i == 0 {
                    BigRational::one()
                } else {
                    BigRational::zero()
                });
                row
            })
            .collect();
        for col in 0..4 {
            let piv = (col..4).find(|&r| !a[r][col].is_zero())?;
            a.swap(col, piv);
            let p = a[col][col].clone();
            for x in a[col].iter_mut() {
                *x /= p.clone();
            }
            for r in 0..4 {
                if r != col && !a[r][col].is_zero() {
                    let f = a[r][col].clone();
                    for c2 in 0..5 {
                        let sub = f.clone() * a[col][c2].clone();
                        a[r][c2] -= sub;
                    }
                }
            }
        }
        Some(Cyclotomic {
            c: [
                a[0][4].clone(),
                a[1][4].clone(),
                a[2][4].clone(),
                a[3][4].clone(),
            ],
        })
    }
    fn to_c64(&self) -> Complex<f64> {
        let z = Complex::from_polar(1.0, std::f64::consts::PI / 6.0);
        let mut acc = Complex::new(0.0, 0.0);
        let mut zp = Complex::new(1.0, 0.0);
        for i in 0..4 {
            acc += zp * self.c[i].to_f64().unwrap_or(f64::NAN);
            zp *= z;
        }
        acc
    }
    fn imaginary_unit() -> Option<Self> {
        Some(Cyclotomic::z_power(3))
    }
    fn as_rational(&self) -> Option<BigRational> {
        if self.c[1].is_zero() && self.c[2].is_zero() && self.c[3].is_zero() {
            Some(self.c[0].clone())
        } else {
            None
        }
    }
    fn root_of_unity(k: i64, n: i64) -> Option<Self> {
        Cyclotomic::root_of_unity(k, n)
    }
    fn from_c64(_z: Complex<f64>) -> Option<Self> {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: Complex<f64>, b: Complex<f64>) -> bool {
        (a - b).norm() < 1e-12
    }

    #[test]
    fn cyclotomic_roots_of_unity() {
        for n in [1i64, 2, 3, 4, 6, 12] {
            for k in 0..n {
                let w = Cyclotomic::root_of_unity(k, n).unwrap();
                let expected =
                    Complex::from_polar(1.0, 2.0 * std::f64::consts::PI * k as f64 / n as f64);
                assert!(close(w.to_c64(), expected), "zeta_{n}^{k}");
                // n-th power is 1
                let mut p = Cyclotomic::one();
                for _ in 0..n {
                    p = p * w.clone();
                }
                assert_eq!(p, Cyclotomic::one());
            }
        }
        assert!(Cyclotomic::root_of_unity(1, 5).is_none());
    }

    #[test]
    fn cyclotomic_field_ops() {
        let w = Cyclotomic::root_of_unity(1, 12).unwrap();
        let x = w.clone() * w.clone() + Cyclotomic::from_i64(3);
        let xi = x.inv().unwrap();
        assert_eq!(x * xi, Cyclotomic::one());
        // conj is the complex conjugate under the embedding
        let y = Cyclotomic::root_of_unity(5, 12).unwrap();
        assert!(close(Scalar::conj(&y).to_c64(), y.to_c64().conj()));
        // conj is an involution and a ring hom
        let a = Cyclotomic::root_of_unity(1, 3).unwrap() + Cyclotomic::from_ratio(7, 2);
        let b = Cyclotomic::root_of_unity(3, 4).unwrap();
        assert_eq!(Scalar::conj(&Scalar::conj(&a)), a);
        assert_eq!(
            Scalar::conj(&(a.clone() * b.clone())),
            Scalar::conj(&a) * Scalar::conj(&b)
        );
    }

    #[test]
    fn cyclotomic_real_sign() {
        // sqrt3 = z + conj(z) = 2z - z^3 is real and positive
        let z = Cyclotomic::z_power(1);
        let sqrt3 = z.clone() + Scalar::conj(&z);
        assert_eq!(sqrt3.real_sign(), Some(1));
        assert_eq!((-sqrt3.clone()).real_sign(), Some(-1));
        // 2 - sqrt3 > 0, 1 - sqrt3 < 0
        assert_eq!((Cyclotomic::from_i64(2) - sqrt3.clone()).real_sign(), Some(1));
        assert_eq!((Cyclotomic::from_i64(1) - sqrt3.clone()).real_sign(), Some(-1));
        assert_eq!(Cyclotomic::zero().real_sign(), Some(0));
        assert_eq!(Cyclotomic::z_power(3).real_sign(), None);
    }

    #[test]
    fn imaginary_unit_squares_to_minus_one() {
        let i = Cyclotomic::imaginary_unit().unwrap();
        assert_eq!(i.clone() * i, Cyclotomic::from_i64(-1));
    }
}
