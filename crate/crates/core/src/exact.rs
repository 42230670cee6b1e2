//! Exact scalars and the small amount of linear algebra the rest of the crate
//! needs: arbitrary-precision rationals, Gaussian rationals, complex vectors and
//! Hermitian matrices.
//!
//! Everything here is exact. Orthogonality, trace conditions and LP optima are
//! decided, never approximated.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision rational, always in lowest terms with a positive
/// denominator.
pub type Rational = BigRational;

pub fn rat(numer: i64, denom: i64) -> Rational {
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Parses `"p/q"` or `"p"`, surrounding whitespace allowed.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let t = text.trim();
    if t.is_empty() {
        return Err(Error::BadRational(text.to_string()));
    }
    Rational::from_str(t).map_err(|_| Error::BadRational(text.to_string()))
}

/// Canonical text form: `"p/q"`, or `"p"` for integers.
pub fn format_rational(r: &Rational) -> String {
    r.to_string()
}

pub fn checked_div(a: &Rational, b: &Rational) -> Result<Rational> {
    if b.is_zero() {
        return Err(Error::DivisionByZero);
    }
    Ok(a / b)
}

pub fn floor_ceil(a: &Rational) -> (BigInt, BigInt) {
    (a.floor().to_integer(), a.ceil().to_integer())
}

/// Display-only base-2 logarithm of a positive rational.
pub fn log2_approx(a: &Rational) -> f64 {
    use num_traits::ToPrimitive;
    // log2(p) - log2(q) via bit lengths keeps huge values finite.
    fn log2_int(n: &BigInt) -> f64 {
        let bits = n.bits();
        if bits <= 1000 {
            n.to_f64().unwrap_or(f64::INFINITY).log2()
        } else {
            let shift = bits - 53;
            let top: BigInt = n >> shift;
            top.to_f64().unwrap_or(f64::INFINITY).log2() + shift as f64
        }
    }
    log2_int(a.numer()) - log2_int(a.denom())
}

/// A Gaussian rational `re + i·im`.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct CRational {
    pub re: Rational,
    pub im: Rational,
}

impl CRational {
    pub fn new(re: Rational, im: Rational) -> Self {
        Self { re, im }
    }

    pub fn real(re: Rational) -> Self {
        Self {
            re,
            im: Rational::zero(),
        }
    }

    pub fn from_int(n: i64) -> Self {
        Self::real(int(n))
    }

    pub fn i() -> Self {
        Self::new(Rational::zero(), Rational::one())
    }

    pub fn zero() -> Self {
        Self::real(Rational::zero())
    }

    pub fn one() -> Self {
        Self::real(Rational::one())
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        Self::new(self.re.clone(), -&self.im)
    }

    pub fn norm_sqr(&self) -> Rational {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn scale(&self, k: &Rational) -> Self {
        Self::new(&self.re * k, &self.im * k)
    }

    pub fn inv(&self) -> Result<Self> {
        let n = self.norm_sqr();
        if n.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::new(&self.re / &n, -&self.im / &n))
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        Ok(self * &other.inv()?)
    }
}

impl fmt::Debug for CRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for CRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.re.is_zero(), self.im.is_zero()) {
            (_, true) => write!(f, "{}", self.re),
            (true, false) => write!(f, "{}i", self.im),
            (false, false) if self.im.is_negative() => write!(f, "{}-{}i", self.re, -&self.im),
            (false, false) => write!(f, "{}+{}i", self.re, self.im),
        }
    }
}

impl<'a> Add<&'a CRational> for &'a CRational {
    type Output = CRational;
    fn add(self, o: &CRational) -> CRational {
        CRational::new(&self.re + &o.re, &self.im + &o.im)
    }
}

impl<'a> Sub<&'a CRational> for &'a CRational {
    type Output = CRational;
    fn sub(self, o: &CRational) -> CRational {
        CRational::new(&self.re - &o.re, &self.im - &o.im)
    }
}

impl<'a> Mul<&'a CRational> for &'a CRational {
    type Output = CRational;
    fn mul(self, o: &CRational) -> CRational {
        CRational::new(
            &self.re * &o.re - &self.im * &o.im,
            &self.re * &o.im + &self.im * &o.re,
        )
    }
}

impl Add for CRational {
    type Output = CRational;
    fn add(self, o: CRational) -> CRational {
        &self + &o
    }
}

impl Sub for CRational {
    type Output = CRational;
    fn sub(self, o: CRational) -> CRational {
        &self - &o
    }
}

impl Mul for CRational {
    type Output = CRational;
    fn mul(self, o: CRational) -> CRational {
        &self * &o
    }
}

impl Neg for &CRational {
    type Output = CRational;
    fn neg(self) -> CRational {
        CRational::new(-&self.re, -&self.im)
    }
}

impl Neg for CRational {
    type Output = CRational;
    fn neg(self) -> CRational {
        -&self
    }
}

/// A vector in `C^d` with Gaussian-rational entries. Not normalized.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CVector(Vec<CRational>);

impl CVector {
    pub fn new(entries: Vec<CRational>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::DimensionMismatch {
                expected: 1,
                actual: 0,
            });
        }
        Ok(Self(entries))
    }

    pub fn from_ints(entries: &[i64]) -> Self {
        assert!(!entries.is_empty(), "vector must have at least one entry");
        Self(entries.iter().map(|&e| CRational::from_int(e)).collect())
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn entries(&self) -> &[CRational] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(CRational::is_zero)
    }

    pub fn conj(&self) -> Self {
        Self(self.0.iter().map(CRational::conj).collect())
    }

    pub fn scale(&self, c: &CRational) -> Self {
        Self(self.0.iter().map(|e| c * e).collect())
    }

    /// `<v, w>`, conjugate-linear in `self`.
    pub fn inner(&self, w: &CVector) -> Result<CRational> {
        inner_product(self, w)
    }

    pub fn norm_sqr(&self) -> Rational {
        self.0.iter().map(CRational::norm_sqr).sum()
    }

    pub fn is_orthogonal(&self, w: &CVector) -> Result<bool> {
        Ok(inner_product(self, w)?.is_zero())
    }

    /// True when both vectors span the same ray (Cauchy-Schwarz equality).
    pub fn is_parallel(&self, w: &CVector) -> Result<bool> {
        let ip = inner_product(self, w)?;
        Ok(ip.norm_sqr() == self.norm_sqr() * w.norm_sqr())
    }
}

impl fmt::Debug for CVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, e) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, ")")
    }
}

impl PartialOrd for CVector {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Lexicographic by (re, im) of each entry.
impl Ord for CVector {
    fn cmp(&self, other: &Self) -> Ordering {
        for (a, b) in self.0.iter().zip(&other.0) {
            let c = a.re.cmp(&b.re).then_with(|| a.im.cmp(&b.im));
            if c != Ordering::Equal {
                return c;
            }
        }
        self.0.len().cmp(&other.0.len())
    }
}

pub fn inner_product(v: &CVector, w: &CVector) -> Result<CRational> {
    if v.dim() != w.dim() {
        return Err(Error::DimensionMismatch {
            expected: v.dim(),
            actual: w.dim(),
        });
    }
    let mut acc = CRational::zero();
    for (a, b) in v.0.iter().zip(&w.0) {
        acc = &acc + &(&a.conj() * b);
    }
    Ok(acc)
}

/// Square Hermitian matrix over the Gaussian rationals, row-major.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct HermitianMatrix {
    dim: usize,
    entries: Vec<CRational>,
}

impl HermitianMatrix {
    /// Builds from rows, rejecting non-square or non-Hermitian input.
    pub fn from_rows(rows: Vec<Vec<CRational>>) -> Result<Self> {
        let dim = rows.len();
        if dim == 0 {
            return Err(Error::DimensionMismatch {
                expected: 1,
                actual: 0,
            });
        }
        let mut entries = Vec::with_capacity(dim * dim);
        for row in rows {
            if row.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    actual: row.len(),
                });
            }
            entries.extend(row);
        }
        let m = Self { dim, entries };
        for i in 0..dim {
            for j in i..dim {
                if *m.get(i, j) != m.get(j, i).conj() {
                    return Err(Error::NotHermitian { row: i, col: j });
                }
            }
        }
        Ok(m)
    }

    pub fn zero(dim: usize) -> Self {
        Self {
            dim,
            entries: vec![CRational::zero(); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zero(dim);
        for i in 0..dim {
            m.entries[i * dim + i] = CRational::one();
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> &CRational {
        &self.entries[i * self.dim + j]
    }

    pub fn rows(&self) -> Vec<Vec<CRational>> {
        self.entries.chunks(self.dim).map(<[_]>::to_vec).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(CRational::is_zero)
    }

    pub fn trace(&self) -> Rational {
        (0..self.dim).map(|i| self.get(i, i).re.clone()).sum()
    }

    pub fn scale(&self, k: &Rational) -> Self {
        Self {
            dim: self.dim,
            entries: self.entries.iter().map(|e| e.scale(k)).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_dim(other)?;
        Ok(Self {
            dim: self.dim,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    fn check_dim(&self, other: &Self) -> Result<()> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                actual: other.dim,
            });
        }
        Ok(())
    }

    /// Determinant of the principal submatrix on `indices`, by exact Gaussian
    /// elimination over the Gaussian rationals.
    pub fn principal_minor(&self, indices: &[usize]) -> Rational {
        let k = indices.len();
        let mut a: Vec<Vec<CRational>> = indices
            .iter()
            .map(|&i| indices.iter().map(|&j| self.get(i, j).clone()).collect())
            .collect();
        let mut det = CRational::one();
        for col in 0..k {
            let Some(pivot) = (col..k).find(|&r| !a[r][col].is_zero()) else {
                return Rational::zero();
            };
            if pivot != col {
                a.swap(pivot, col);
                det = -det;
            }
            let inv = a[col][col].inv().expect("pivot is nonzero");
            det = &det * &a[col][col];
            for r in col + 1..k {
                if a[r][col].is_zero() {
                    continue;
                }
                let f = &a[r][col] * &inv;
                for c in col..k {
                    let delta = &f * &a[col][c];
                    a[r][c] = &a[r][c] - &delta;
                }
            }
        }
        // Principal minors of a Hermitian matrix are real.
        debug_assert!(det.is_real());
        det.re
    }

    /// Exact positive-semidefiniteness: every principal minor is nonnegative.
    pub fn is_psd(&self) -> bool {
        let d = self.dim;
        assert!(d < 24, "PSD test enumerates 2^d principal minors");
        (1u32..(1u32 << d)).all(|mask| {
            let idx: Vec<usize> = (0..d).filter(|&i| mask & (1 << i) != 0).collect();
            !self.principal_minor(&idx).is_negative()
        })
    }
}

impl fmt::Debug for HermitianMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.rows()).finish()
    }
}

/// `tr(MN)`; real because both arguments are Hermitian.
pub fn trace_product(m: &HermitianMatrix, n: &HermitianMatrix) -> Result<Rational> {
    m.check_dim(n)?;
    let d = m.dim;
    let mut acc = Rational::zero();
    for i in 0..d {
        for j in 0..d {
            let (a, b) = (m.get(i, j), n.get(j, i));
            acc += &a.re * &b.re - &a.im * &b.im;
        }
    }
    Ok(acc)
}

/// Rank-1 projector onto the entrywise conjugate of `v`, i.e.
/// `conj(v)·conj(v)^† / <v,v>`.
pub fn outer_project(v: &CVector) -> Result<HermitianMatrix> {
    let n = v.norm_sqr();
    if n.is_zero() {
        return Err(Error::ZeroVector);
    }
    let d = v.dim();
    let u = v.conj();
    let mut entries = Vec::with_capacity(d * d);
    for i in 0..d {
        for j in 0..d {
            entries.push((&u.0[i] * &u.0[j].conj()).scale(&n.recip()));
        }
    }
    Ok(HermitianMatrix { dim: d, entries })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn cv(re: &[i64]) -> CVector {
        CVector::from_ints(re)
    }

    #[test]
    fn rational_arithmetic() {
        assert_eq!(rat(1, 3) + rat(1, 6), rat(1, 2));
        assert_eq!(parse_rational("2/4").unwrap(), rat(1, 2));
        assert_eq!(format_rational(&parse_rational("2/4").unwrap()), "1/2");
        assert_eq!(rat(5, 2).cmp(&int(3)), Ordering::Less);
        assert_eq!(format_rational(&int(0)), "0");
        assert_eq!(*int(0).denom(), BigInt::from(1));
    }

    #[test]
    fn division_by_zero_is_an_error() {
        assert_eq!(checked_div(&int(1), &int(0)), Err(Error::DivisionByZero));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("abc").is_err());
        assert!(parse_rational("").is_err());
    }

    #[test]
    fn floor_and_ceil() {
        assert_eq!(floor_ceil(&rat(5, 2)), (BigInt::from(2), BigInt::from(3)));
        assert_eq!(floor_ceil(&rat(-1, 2)), (BigInt::from(-1), BigInt::from(0)));
        assert_eq!(floor_ceil(&int(6)), (BigInt::from(6), BigInt::from(6)));
    }

    #[test]
    fn inner_products() {
        assert!(cv(&[1, 0, 0, 0])
            .inner(&cv(&[0, 1, 0, 0]))
            .unwrap()
            .is_zero());
        assert!(cv(&[1, 1, 0, 0])
            .inner(&cv(&[1, -1, 0, 0]))
            .unwrap()
            .is_zero());
        assert_eq!(
            cv(&[1, 1, 1, 1]).inner(&cv(&[1, 1, 1, 1])).unwrap(),
            CRational::from_int(4)
        );
        assert!(matches!(
            cv(&[1, 0]).inner(&cv(&[1, 0, 0])),
            Err(Error::DimensionMismatch { .. })
        ));
        // conjugate-linear in the first argument
        let v = CVector::new(vec![CRational::i(), CRational::zero()]).unwrap();
        assert_eq!(v.inner(&cv(&[1, 0])).unwrap(), -CRational::i());
    }

    #[test]
    fn trace_products() {
        let i2 = HermitianMatrix::identity(2);
        assert_eq!(trace_product(&i2, &i2).unwrap(), int(2));
        let p = outer_project(&cv(&[1, 1])).unwrap();
        let q = outer_project(&cv(&[1, -1])).unwrap();
        assert_eq!(trace_product(&p, &q).unwrap(), int(0));
        assert_eq!(trace_product(&p, &p).unwrap(), int(1));
        assert!(trace_product(&i2, &HermitianMatrix::identity(3)).is_err());
    }

    #[test]
    fn projectors() {
        let p = outer_project(&cv(&[1, 0])).unwrap();
        assert_eq!(
            p.rows(),
            vec![
                vec![CRational::one(), CRational::zero()],
                vec![CRational::zero(), CRational::zero()]
            ]
        );
        let half = CRational::real(rat(1, 2));
        let p = outer_project(&cv(&[1, 1])).unwrap();
        assert!(p.rows().iter().flatten().all(|e| *e == half));

        let v = CVector::new(vec![CRational::one(), CRational::i()]).unwrap();
        let p = outer_project(&v).unwrap();
        let ihalf = CRational::new(int(0), rat(1, 2));
        assert_eq!(
            p.rows(),
            vec![vec![half.clone(), ihalf.clone()], vec![-ihalf, half]]
        );
        assert_eq!(p.trace(), int(1));
        assert_eq!(outer_project(&cv(&[0, 0])), Err(Error::ZeroVector));
    }

    #[test]
    fn hermitian_validation() {
        let bad = vec![
            vec![CRational::one(), CRational::i()],
            vec![CRational::i(), CRational::one()],
        ];
        assert!(matches!(
            HermitianMatrix::from_rows(bad),
            Err(Error::NotHermitian { .. })
        ));
        let bad_diag = vec![vec![CRational::i()]];
        assert!(HermitianMatrix::from_rows(bad_diag).is_err());
    }

    #[test]
    fn psd_needs_all_principal_minors() {
        // Leading minors are 0 and 0 here, but the matrix is not PSD.
        let m = HermitianMatrix::from_rows(vec![
            vec![CRational::zero(), CRational::zero()],
            vec![CRational::zero(), CRational::from_int(-1)],
        ])
        .unwrap();
        assert!(!m.is_psd());
        assert!(HermitianMatrix::identity(3).is_psd());
        let v = CVector::new(vec![
            CRational::one(),
            CRational::i(),
            CRational::from_int(2),
        ])
        .unwrap();
        assert!(outer_project(&v).unwrap().is_psd());
    }

    fn small_c() -> impl Strategy<Value = CRational> {
        (-4i64..5, 1i64..4, -4i64..5, 1i64..4)
            .prop_map(|(a, b, c, d)| CRational::new(rat(a, b), rat(c, d)))
    }

    fn vec3() -> impl Strategy<Value = CVector> {
        proptest::collection::vec(small_c(), 3).prop_map(|e| CVector::new(e).unwrap())
    }

    proptest! {
        #[test]
        fn inner_product_is_conjugate_symmetric(v in vec3(), w in vec3()) {
            prop_assert_eq!(v.inner(&w).unwrap(), w.inner(&v).unwrap().conj());
        }

        #[test]
        fn projector_is_scale_invariant(v in vec3(), c in small_c()) {
            prop_assume!(!v.is_zero() && !c.is_zero());
            prop_assert_eq!(outer_project(&v).unwrap(), outer_project(&v.scale(&c)).unwrap());
        }

        #[test]
        fn trace_product_symmetric_and_bilinear(v in vec3(), w in vec3(), u in vec3(), k in (-5i64..6, 1i64..5)) {
            prop_assume!(!v.is_zero() && !w.is_zero() && !u.is_zero());
            let (p, q, r) = (outer_project(&v).unwrap(), outer_project(&w).unwrap(), outer_project(&u).unwrap());
            prop_assert_eq!(trace_product(&p, &q).unwrap(), trace_product(&q, &p).unwrap());
            let k = rat(k.0, k.1);
            let lhs = trace_product(&p.scale(&k).add(&r).unwrap(), &q).unwrap();
            let rhs = k * trace_product(&p, &q).unwrap() + trace_product(&r, &q).unwrap();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn floor_plus_one_is_ceil_off_integers(n in -50i64..50, d in 1i64..12) {
            let a = rat(n, d);
            let (f, c) = floor_ceil(&a);
            prop_assert!(Rational::from_integer(f.clone()) <= a && a <= Rational::from_integer(c.clone()));
            prop_assert_eq!(f + 1 == c, !a.is_integer());
        }
    }
}
