//! Exact finite sums of roots of unity with rational coefficients.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::angle::Angle;

/// `sum_k c_k exp(2 pi i a_k)` with `c_k` rational.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Cyclo {
    terms: BTreeMap<Angle, BigRational>,
}

pub fn rational(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// `p^k` as an exact rational, `k` of either sign.
pub fn rational_pow(p: u64, k: i64) -> BigRational {
    let b = BigRational::from_integer(BigInt::from(p));
    if k >= 0 {
        num_traits::pow(b, k as usize)
    } else {
        num_traits::pow(b.recip(), (-k) as usize)
    }
}

impl Cyclo {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn term(a: Angle, c: BigRational) -> Self {
        let mut out = Self::zero();
        out.add_term(a, c);
        out
    }

    pub fn add_term(&mut self, a: Angle, c: BigRational) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(a).or_insert_with(BigRational::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&a);
        }
    }

    pub fn add(&mut self, o: &Cyclo) {
        for (a, c) in &o.terms {
            self.add_term(*a, c.clone());
        }
    }

    pub fn scaled(&self, c: &BigRational) -> Cyclo {
        let mut out = Cyclo::zero();
        for (a, x) in &self.terms {
            out.add_term(*a, x * c);
        }
        out
    }

    pub fn rotated(&self, b: Angle) -> Cyclo {
        let mut out = Cyclo::zero();
        for (a, x) in &self.terms {
            out.add_term(*a + b, x.clone());
        }
        out
    }

    pub fn sub(&self, o: &Cyclo) -> Cyclo {
        let mut out = self.clone();
        out.add(&o.scaled(&-BigRational::one()));
        out
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn to_complex(&self) -> Complex64 {
        self.terms
            .iter()
            .map(|(a, c)| a.to_complex() * c.to_f64().unwrap_or(f64::NAN))
            .sum()
    }

    /// Exact test for zero in `Q(zeta_N)`.
    pub fn is_zero(&self) -> bool {
        if self.terms.is_empty() {
            return true;
        }
        let n = self.terms.keys().fold(1i64, |acc, a| acc.lcm(&a.denom())) as usize;
        let mut v = vec![BigRational::zero(); n];
        for (a, c) in &self.terms {
            let idx = (a.numer() as usize) * (n / a.denom() as usize);
            v[idx] += c;
        }
        let phi = cyclotomic(n);
        let deg = phi.len() - 1;
        for i in (deg..n).rev() {
            if v[i].is_zero() {
                continue;
            }
            let c = v[i].clone();
            for (j, &pj) in phi.iter().enumerate() {
                if pj != 0 {
                    v[i - deg + j] -= &c * BigRational::from_integer(BigInt::from(pj));
                }
            }
        }
        v[..deg].iter().all(|x| x.is_zero())
    }

    pub fn exact_eq(&self, o: &Cyclo) -> bool {
        self.sub(o).is_zero()
    }

    /// Largest absolute coefficient, as a crude size measure.
    pub fn max_coefficient(&self) -> f64 {
        self.terms.values().map(|c| c.abs().to_f64().unwrap_or(f64::INFINITY)).fold(0.0, f64::max)
    }
}

static PHI: OnceLock<Mutex<HashMap<usize, Vec<i64>>>> = OnceLock::new();

/// Coefficients of the `n`-th cyclotomic polynomial, lowest degree first.
pub fn cyclotomic(n: usize) -> Vec<i64> {
    let cache = PHI.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(v) = cache.lock().expect("cyclotomic cache").get(&n) {
        return v.clone();
    }
    // x^n - 1 divided by Phi_d for the proper divisors d
    let mut num = vec![0i64; n + 1];
    num[0] = -1;
    num[n] = 1;
    for d in 1..n {
        if n.is_multiple_of(d) {
            num = poly_div_exact(&num, &cyclotomic(d));
        }
    }
    cache.lock().expect("cyclotomic cache").insert(n, num.clone());
    num
}

fn poly_div_exact(a: &[i64], b: &[i64]) -> Vec<i64> {
    let mut r = a.to_vec();
    let db = b.len() - 1;
    let da = a.len() - 1;
    let mut q = vec![0i64; da - db + 1];
    for i in (0..=da - db).rev() {
        let c = r[i + db] / b[db];
        q[i] = c;
        for (j, &bj) in b.iter().enumerate() {
            r[i + j] -= c * bj;
        }
    }
    debug_assert!(r.iter().all(|&x| x == 0));
    q
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cyclotomic_polynomials() {
        assert_eq!(cyclotomic(1), vec![-1, 1]);
        assert_eq!(cyclotomic(4), vec![1, 0, 1]);
        assert_eq!(cyclotomic(6), vec![1, -1, 1]);
        assert_eq!(cyclotomic(12), vec![1, 0, -1, 0, 1]);
    }

    #[test]
    fn sum_of_all_nth_roots_vanishes() {
        let mut z = Cyclo::zero();
        for k in 0..15 {
            z.add_term(Angle::new(k, 15), rational(1, 1));
        }
        assert!(z.is_zero());
        let mut w = Cyclo::zero();
        for k in 0..5 {
            w.add_term(Angle::new(k, 5), rational(1, 1));
        }
        w.add_term(Angle::zero(), rational(-1, 1));
        assert!(!w.is_zero());
        assert!((w.to_complex() + 1.0).norm() < 1e-12);
    }

    #[test]
    fn gauss_sum_squared_identity() {
        // (sum of Legendre(k) zeta_5^k)^2 = 5
        let mut g = Cyclo::zero();
        for k in 1..5i64 {
            let s = crate::padic::legendre(k as u64, 5) as i64;
            g.add_term(Angle::new(k, 5), rational(s, 1));
        }
        let mut sq = Cyclo::zero();
        for (a, x) in &g.terms {
            sq.add(&g.rotated(*a).scaled(x));
        }
        assert!(sq.exact_eq(&Cyclo::term(Angle::zero(), rational(5, 1))));
    }
}
