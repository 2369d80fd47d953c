//! Exact linear programming over the rationals.
//!
//! The solver handles `maximize c·x subject to A x <= b, x >= 0` with
//! `b >= 0`, so the origin is always feasible and no phase one is needed.
//! Pivoting is fraction-free: every tableau entry is an integer minor of the
//! input matrix and the running denominator is the previous pivot. Bland's
//! rule guarantees termination.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::{lcm_of_denominators, Rational};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LpOutcome {
    Optimal { value: Rational, x: Vec<Rational> },
    Unbounded,
}

/// A problem in standard inequality form with rational data.
#[derive(Clone, Debug, Default)]
pub struct Lp {
    pub objective: Vec<Rational>,
    pub rows: Vec<(Vec<Rational>, Rational)>,
}

impl Lp {
    pub fn new(objective: Vec<Rational>) -> Self {
        Lp { objective, rows: Vec::new() }
    }

    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }

    /// Adds `row · x <= rhs`; `rhs` must be nonnegative.
    pub fn push(&mut self, row: Vec<Rational>, rhs: Rational) {
        self.rows.push((row, rhs));
    }

    pub fn solve(&self) -> Result<LpOutcome> {
        let n = self.num_vars();
        for (row, rhs) in &self.rows {
            if row.len() != n {
                return Err(Error::Malformed(format!("LP row has {} entries, expected {n}", row.len())));
            }
            if rhs.is_negative() {
                return Err(Error::Precondition("LP right-hand sides must be nonnegative".into()));
            }
        }
        let (c, a, b) = self.integer_data();
        if let Some(out) = simplex::<i128>(&c, &a, &b) {
            return Ok(out);
        }
        Ok(simplex::<BigInt>(&c, &a, &b).expect("arbitrary precision never overflows"))
    }

    /// Scales the objective and every row by the lcm of its denominators.
    fn integer_data(&self) -> (Vec<BigInt>, Vec<Vec<BigInt>>, Vec<BigInt>) {
        fn scale(vals: &[&Rational]) -> Vec<BigInt> {
            let l = lcm_of_denominators(vals.iter().copied());
            vals.iter().map(|q| q.numer() * (&l / q.denom())).collect()
        }
        let c = scale(&self.objective.iter().collect::<Vec<_>>());
        let mut a = Vec::with_capacity(self.rows.len());
        let mut b = Vec::with_capacity(self.rows.len());
        for (row, rhs) in &self.rows {
            let mut all: Vec<&Rational> = row.iter().collect();
            all.push(rhs);
            let mut scaled = scale(&all);
            b.push(scaled.pop().unwrap());
            a.push(scaled);
        }
        (c, a, b)
    }
}

/// Integer arithmetic with overflow detection.
trait Exact: Clone + Sized {
    fn from_big(v: &BigInt) -> Option<Self>;
    fn to_big(&self) -> BigInt;
    fn zero() -> Self;
    fn one() -> Self;
    fn mul(&self, o: &Self) -> Option<Self>;
    fn sub(&self, o: &Self) -> Option<Self>;
    fn div_exact(&self, o: &Self) -> Self;
    fn signum(&self) -> i32;
    fn gt(&self, o: &Self) -> bool;
}

impl Exact for i128 {
    fn from_big(v: &BigInt) -> Option<Self> {
        i128::try_from(v).ok()
    }
    fn to_big(&self) -> BigInt {
        BigInt::from(*self)
    }
    fn zero() -> Self {
        0
    }
    fn one() -> Self {
        1
    }
    fn mul(&self, o: &Self) -> Option<Self> {
        self.checked_mul(*o)
    }
    fn sub(&self, o: &Self) -> Option<Self> {
        self.checked_sub(*o)
    }
    fn div_exact(&self, o: &Self) -> Self {
        debug_assert_eq!(self % o, 0);
        self / o
    }
    fn signum(&self) -> i32 {
        i128::signum(*self) as i32
    }
    fn gt(&self, o: &Self) -> bool {
        self > o
    }
}

impl Exact for BigInt {
    fn from_big(v: &BigInt) -> Option<Self> {
        Some(v.clone())
    }
    fn to_big(&self) -> BigInt {
        self.clone()
    }
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn mul(&self, o: &Self) -> Option<Self> {
        Some(self * o)
    }
    fn sub(&self, o: &Self) -> Option<Self> {
        Some(self - o)
    }
    fn div_exact(&self, o: &Self) -> Self {
        debug_assert!((self % o).is_zero());
        self / o
    }
    fn signum(&self) -> i32 {
        if self.is_positive() {
            1
        } else if self.is_negative() {
            -1
        } else {
            0
        }
    }
    fn gt(&self, o: &Self) -> bool {
        self > o
    }
}

/// Returns `None` if `T` overflowed.
fn simplex<T: Exact>(c: &[BigInt], a: &[Vec<BigInt>], b: &[BigInt]) -> Option<LpOutcome> {
    let m = a.len();
    let n = c.len();
    let width = n + m + 1;
    let rhs = n + m;
    // rows 0..m constraints, row m objective (z - c·x = 0)
    let mut t: Vec<Vec<T>> = Vec::with_capacity(m + 1);
    for i in 0..m {
        let mut row = vec![T::zero(); width];
        for j in 0..n {
            row[j] = T::from_big(&a[i][j])?;
        }
        row[n + i] = T::one();
        row[rhs] = T::from_big(&b[i])?;
        t.push(row);
    }
    let mut obj = vec![T::zero(); width];
    for j in 0..n {
        obj[j] = T::from_big(&(-&c[j]))?;
    }
    t.push(obj);
    let mut basis: Vec<usize> = (n..n + m).collect();
    let mut denom = T::one();

    loop {
        let Some(s) = (0..n + m).find(|&j| t[m][j].signum() < 0) else { break };
        let mut r: Option<usize> = None;
        for i in 0..m {
            if t[i][s].signum() <= 0 {
                continue;
            }
            r = match r {
                None => Some(i),
                Some(k) => {
                    // compare t[i][rhs]/t[i][s] with t[k][rhs]/t[k][s]
                    let lhs = t[i][rhs].mul(&t[k][s])?;
                    let rhs_v = t[k][rhs].mul(&t[i][s])?;
                    if rhs_v.gt(&lhs) || (!lhs.gt(&rhs_v) && basis[i] < basis[k]) {
                        Some(i)
                    } else {
                        Some(k)
                    }
                }
            };
        }
        let Some(r) = r else { return Some(LpOutcome::Unbounded) };
        let p = t[r][s].clone();
        for i in 0..=m {
            if i == r {
                continue;
            }
            let f = t[i][s].clone();
            for j in 0..width {
                let v = t[i][j].mul(&p)?.sub(&f.mul(&t[r][j])?)?;
                t[i][j] = v.div_exact(&denom);
            }
        }
        denom = p;
        basis[r] = s;
    }

    let d = denom.to_big();
    let mut x = vec![Rational::zero(); n];
    for (i, &v) in basis.iter().enumerate() {
        if v < n {
            x[v] = Rational::new(t[i][rhs].to_big(), d.clone());
        }
    }
    Some(LpOutcome::Optimal { value: Rational::new(t[m][rhs].to_big(), d), x })
}

/// Decides whether the open cone `{h : f·h > 0 for every row f}` meets the
/// linear space `{h : e·h = 0 for every e}`, assuming every row vanishes on
/// the all-ones vector. Returns a point of the intersection with all
/// coordinates in `[-1, 1]` when it exists.
pub fn open_cone_point(strict: &[Vec<Rational>], equal: &[Vec<Rational>], dim: usize) -> Result<Option<Vec<Rational>>> {
    if strict.is_empty() {
        return Ok(Some(vec![Rational::zero(); dim]));
    }
    // variables x = h + 1 in [0, 2] and a slack s; maximize s
    let mut obj = vec![Rational::zero(); dim + 1];
    obj[dim] = Rational::one();
    let mut lp = Lp::new(obj);
    for f in strict {
        let mut row: Vec<Rational> = f.iter().map(|v| -v).collect();
        row.push(Rational::one());
        lp.push(row, Rational::zero());
    }
    for e in equal {
        let mut row = e.clone();
        row.push(Rational::zero());
        lp.push(row.clone(), Rational::zero());
        lp.push(row.iter().map(|v| -v).collect(), Rational::zero());
    }
    for p in 0..dim {
        let mut row = vec![Rational::zero(); dim + 1];
        row[p] = Rational::one();
        lp.push(row, Rational::from_integer(2.into()));
    }
    match lp.solve()? {
        LpOutcome::Unbounded => Err(Error::Precondition("strict rows must not be constant on the box".into())),
        LpOutcome::Optimal { value, x } => {
            if value.is_positive() {
                Ok(Some(x[..dim].iter().map(|v| v - Rational::one()).collect()))
            } else {
                Ok(None)
            }
        }
    }
}
