//! Polynomial-coefficient linear differential operators in variables
//! `t1..td` (elements of a Weyl algebra over [`ScalarExpr`]).
//!
//! Operators are stored in normal order: every term is a monomial in the
//! variables times a monomial in the partial derivatives, multiplications to
//! the left of all derivatives. Normal order makes the representation unique,
//! so `==` decides operator equality.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

use crate::poly::MultiPoly;
use crate::scalar::{GaussRat, ScalarExpr};

/// Key of one normal-ordered term: `(t-exponents, derivative multi-index)`.
type TermKey = (Vec<u32>, Vec<u32>);

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct DiffOperator {
    pub vars: Vec<String>,
    pub terms: BTreeMap<TermKey, ScalarExpr>,
}

impl DiffOperator {
    pub fn zero(vars: Vec<String>) -> Self {
        DiffOperator {
            vars,
            terms: BTreeMap::new(),
        }
    }

    pub fn scalar(vars: Vec<String>, c: ScalarExpr) -> Self {
        let mut out = Self::zero(vars);
        let arity = out.arity();
        out.insert_term((vec![0; arity], vec![0; arity]), c);
        out
    }

    pub fn identity(vars: Vec<String>) -> Self {
        Self::scalar(vars, ScalarExpr::one())
    }

    /// Multiplication by the variable with the given index.
    pub fn coordinate(vars: Vec<String>, index: usize) -> Self {
        let arity = vars.len();
        let mut mono = vec![0; arity];
        mono[index] = 1;
        let mut out = Self::zero(vars);
        out.insert_term((mono, vec![0; arity]), ScalarExpr::one());
        out
    }

    /// The partial derivative with the given index.
    pub fn derivative(vars: Vec<String>, index: usize) -> Self {
        let arity = vars.len();
        let mut d = vec![0; arity];
        d[index] = 1;
        let mut out = Self::zero(vars);
        out.insert_term((vec![0; arity], d), ScalarExpr::one());
        out
    }

    /// Multiplication operator by a polynomial.
    pub fn from_poly(p: &MultiPoly) -> Self {
        let arity = p.arity();
        let mut out = Self::zero(p.vars.clone());
        for (e, c) in &p.terms {
            out.insert_term((e.clone(), vec![0; arity]), c.clone());
        }
        out
    }

    pub fn arity(&self) -> usize {
        self.vars.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Highest total derivative order among the terms.
    pub fn order(&self) -> u32 {
        self.terms
            .keys()
            .map(|(_, d)| d.iter().sum::<u32>())
            .max()
            .unwrap_or(0)
    }

    /// Highest total degree of the polynomial coefficients.
    pub fn coeff_degree(&self) -> u32 {
        self.terms
            .keys()
            .map(|(m, _)| m.iter().sum::<u32>())
            .max()
            .unwrap_or(0)
    }

    pub fn scalar_part(&self) -> Option<ScalarExpr> {
        if self.is_zero() {
            return Some(ScalarExpr::zero());
        }
        if self.terms.len() == 1 {
            let ((m, d), c) = self.terms.iter().next().unwrap();
            if m.iter().all(|&x| x == 0) && d.iter().all(|&x| x == 0) {
                return Some(c.clone());
            }
        }
        None
    }

    fn insert_term(&mut self, key: TermKey, c: ScalarExpr) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&key) {
            Some(existing) => {
                let sum = &*existing + &c;
                if sum.is_zero() {
                    self.terms.remove(&key);
                } else {
                    *existing = sum;
                }
            }
            None => {
                self.terms.insert(key, c);
            }
        }
    }

    pub fn scale(&self, c: &ScalarExpr) -> DiffOperator {
        if c.is_zero() {
            return DiffOperator::zero(self.vars.clone());
        }
        DiffOperator {
            vars: self.vars.clone(),
            terms: self
                .terms
                .iter()
                .map(|(k, v)| (k.clone(), v * c))
                .collect(),
        }
    }

    pub fn commutator(&self, rhs: &DiffOperator) -> DiffOperator {
        &(self * rhs) - &(rhs * self)
    }

    /// Formal adjoint with respect to the standard inner product:
    /// `(c · t^α ∂^β)* = conj(c) · (−1)^{|β|} ∂^β t^α`, renormal-ordered.
    pub fn adjoint(&self) -> DiffOperator {
        let mut out = DiffOperator::zero(self.vars.clone());
        for ((m, d), c) in &self.terms {
            let sign = if d.iter().sum::<u32>() % 2 == 0 { 1 } else { -1 };
            let coeff = &c.conj() * &ScalarExpr::from_int(sign);
            // ∂^β ∘ t^α in normal order
            let reordered = normal_order_product(
                &self.vars,
                &vec![0; self.arity()],
                d,
                m,
                &vec![0; self.arity()],
            );
            for (k, v) in reordered.terms {
                out.insert_term(k, &v * &coeff);
            }
        }
        out
    }

    /// Apply to a polynomial in the same variables.
    pub fn apply_poly(&self, p: &MultiPoly) -> MultiPoly {
        assert_eq!(self.vars, p.vars);
        let mut out = MultiPoly::zero(p.vars.clone());
        for ((m, d), c) in &self.terms {
            // differentiate
            let mut q = p.clone();
            for (i, &k) in d.iter().enumerate() {
                for _ in 0..k {
                    q = q.derivative(i);
                }
            }
            // multiply by the monomial and coefficient
            let mut shifted = MultiPoly::zero(p.vars.clone());
            for (e, v) in &q.terms {
                let e2: Vec<u32> = e.iter().zip(m).map(|(a, b)| a + b).collect();
                shifted.add_term(e2, v * c);
            }
            out = &out + &shifted;
        }
        out
    }

    /// Rewrite under an invertible linear change of variables `t' = M t`
    /// (entries `M[k][l]` are constants of the coefficient field). The result
    /// is expressed in the variables `new_vars`.
    pub fn change_variables(
        &self,
        m: &crate::matrix::Mat,
        m_inv: &crate::matrix::Mat,
        new_vars: Vec<String>,
    ) -> DiffOperator {
        let n = self.arity();
        assert_eq!(m.rows, n);
        assert_eq!(new_vars.len(), n);
        // t_l = sum_k (M^{-1})_{lk} t'_k as multiplication operators;
        // ∂_l = sum_k M_{kl} ∂'_k.
        let mut out = DiffOperator::zero(new_vars.clone());
        for ((mono, d), c) in &self.terms {
            let mut term = DiffOperator::scalar(new_vars.clone(), c.clone());
            for (l, &e) in mono.iter().enumerate() {
                for _ in 0..e {
                    let mut lin = DiffOperator::zero(new_vars.clone());
                    for k in 0..n {
                        let coef = m_inv.at(l, k);
                        if !coef.is_zero() {
                            lin = &lin
                                + &DiffOperator::coordinate(new_vars.clone(), k).scale(coef);
                        }
                    }
                    term = &term * &lin;
                }
            }
            for (l, &e) in d.iter().enumerate() {
                for _ in 0..e {
                    let mut lin = DiffOperator::zero(new_vars.clone());
                    for k in 0..n {
                        let coef = m.at(k, l);
                        if !coef.is_zero() {
                            lin = &lin
                                + &DiffOperator::derivative(new_vars.clone(), k).scale(coef);
                        }
                    }
                    term = &term * &lin;
                }
            }
            out = &out + &term;
        }
        out
    }
}

/// Normal-order the product `t^m1 ∂^d1 · t^m2 ∂^d2` via the Leibniz rule:
/// componentwise `∂^b t^g = Σ_ν C(b,ν) g!/(g−ν)! t^{g−ν} ∂^{b−ν}`.
fn normal_order_product(
    vars: &[String],
    m1: &[u32],
    d1: &[u32],
    m2: &[u32],
    d2: &[u32],
) -> DiffOperator {
    let n = vars.len();
    // Enumerate ν componentwise, 0 ≤ ν_i ≤ min(d1_i, m2_i).
    let caps: Vec<u32> = d1.iter().zip(m2).map(|(a, b)| *a.min(b)).collect();
    let mut out = DiffOperator::zero(vars.to_vec());
    let mut nu = vec![0u32; n];
    loop {
        // weight = Π C(d1_i, ν_i) · m2_i! / (m2_i − ν_i)!
        let mut w = BigRational::one();
        for i in 0..n {
            w *= BigRational::from(binomial(d1[i], nu[i]));
            w *= BigRational::from(falling(m2[i], nu[i]));
        }
        let mut mono = vec![0u32; n];
        let mut der = vec![0u32; n];
        for i in 0..n {
            mono[i] = m1[i] + m2[i] - nu[i];
            der[i] = d1[i] - nu[i] + d2[i];
        }
        out.insert_term(
            (mono, der),
            ScalarExpr::from_gauss(GaussRat::from_rat(w)),
        );
        // increment ν
        let mut i = 0;
        loop {
            if i == n {
                return out;
            }
            if nu[i] < caps[i] {
                nu[i] += 1;
                break;
            }
            nu[i] = 0;
            i += 1;
        }
    }
}

fn binomial(n: u32, k: u32) -> BigInt {
    if k > n {
        return BigInt::from(0);
    }
    let mut out = BigInt::one();
    for j in 0..k {
        out = out * BigInt::from(n - j) / BigInt::from(j + 1);
    }
    out
}

fn falling(n: u32, k: u32) -> BigInt {
    let mut out = BigInt::one();
    for j in 0..k {
        out *= BigInt::from(n - j);
    }
    out
}

impl Add for &DiffOperator {
    type Output = DiffOperator;
    fn add(self, rhs: &DiffOperator) -> DiffOperator {
        assert_eq!(self.vars, rhs.vars, "operator variable sets differ");
        let mut out = self.clone();
        for (k, c) in &rhs.terms {
            out.insert_term(k.clone(), c.clone());
        }
        out
    }
}

impl Sub for &DiffOperator {
    type Output = DiffOperator;
    fn sub(self, rhs: &DiffOperator) -> DiffOperator {
        assert_eq!(self.vars, rhs.vars, "operator variable sets differ");
        let mut out = self.clone();
        for (k, c) in &rhs.terms {
            out.insert_term(k.clone(), -c);
        }
        out
    }
}

impl Mul for &DiffOperator {
    type Output = DiffOperator;
    fn mul(self, rhs: &DiffOperator) -> DiffOperator {
        assert_eq!(self.vars, rhs.vars, "operator variable sets differ");
        let mut out = DiffOperator::zero(self.vars.clone());
        for ((m1, d1), c1) in &self.terms {
            for ((m2, d2), c2) in &rhs.terms {
                let reordered = normal_order_product(&self.vars, m1, d1, m2, d2);
                let c = c1 * c2;
                for (k, v) in reordered.terms {
                    out.insert_term(k, &v * &c);
                }
            }
        }
        out
    }
}

impl Neg for &DiffOperator {
    type Output = DiffOperator;
    fn neg(self) -> DiffOperator {
        self.scale(&ScalarExpr::from_int(-1))
    }
}

impl fmt::Display for DiffOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        // Sort by derivative order, then degree, for readable output.
        let mut keys: Vec<&TermKey> = self.terms.keys().collect();
        keys.sort_by(|a, b| {
            let oa: u32 = a.1.iter().sum();
            let ob: u32 = b.1.iter().sum();
            oa.cmp(&ob)
                .then_with(|| {
                    let da: u32 = a.0.iter().sum();
                    let db: u32 = b.0.iter().sum();
                    da.cmp(&db)
                })
                .then_with(|| b.cmp(a))
        });
        let mut pieces = Vec::new();
        for key in keys {
            let (m, d) = key;
            let c = &self.terms[key];
            let mut factors = Vec::new();
            for (i, &e) in m.iter().enumerate() {
                if e == 1 {
                    factors.push(self.vars[i].clone());
                } else if e > 1 {
                    factors.push(format!("{}^{}", self.vars[i], e));
                }
            }
            for (i, &e) in d.iter().enumerate() {
                if e == 1 {
                    factors.push(format!("d/d{}", self.vars[i]));
                } else if e > 1 {
                    factors.push(format!("(d/d{})^{}", self.vars[i], e));
                }
            }
            let mono = factors.join("*");
            let (neg, body) = crate::poly::render_coeff_term(c, &mono);
            pieces.push((neg, body));
        }
        let mut out = String::new();
        for (i, (neg, body)) in pieces.iter().enumerate() {
            if i == 0 {
                if *neg {
                    out.push('-');
                }
                out.push_str(body);
            } else {
                out.push_str(if *neg { " - " } else { " + " });
                out.push_str(body);
            }
        }
        write!(f, "{}", out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse_scalar as p;

    fn vars1() -> Vec<String> {
        vec!["t".to_string()]
    }

    fn vars2() -> Vec<String> {
        vec!["t1".to_string(), "t2".to_string()]
    }

    #[test]
    fn canonical_commutation() {
        // [d/dt, t] = 1
        let d = DiffOperator::derivative(vars1(), 0);
        let t = DiffOperator::coordinate(vars1(), 0);
        assert_eq!(d.commutator(&t), DiffOperator::identity(vars1()));
    }

    #[test]
    fn pedersen_generator_commutator() {
        // [-a d/dt1 - (i/a) t1 t2, a d/dt2] = i t1
        let a = p("a").unwrap();
        let d1 = DiffOperator::derivative(vars2(), 0);
        let d2 = DiffOperator::derivative(vars2(), 1);
        let t1 = DiffOperator::coordinate(vars2(), 0);
        let t2 = DiffOperator::coordinate(vars2(), 1);
        let x5 = &d1.scale(&-&a) - &(&t1 * &t2).scale(&(&p("i").unwrap() / &a));
        let x4 = d2.scale(&a);
        let expected = t1.scale(&p("i").unwrap());
        assert_eq!(x5.commutator(&x4), expected);
    }

    #[test]
    fn shear_commutator() {
        // [t1 d/dt2, i t2] = i t1
        let d2 = DiffOperator::derivative(vars2(), 1);
        let t1 = DiffOperator::coordinate(vars2(), 0);
        let t2 = DiffOperator::coordinate(vars2(), 1);
        let lhs = (&t1 * &d2).commutator(&t2.scale(&p("i").unwrap()));
        assert_eq!(lhs, t1.scale(&p("i").unwrap()));
    }

    #[test]
    fn adjoint_reverses_products() {
        let d = DiffOperator::derivative(vars1(), 0);
        let t = DiffOperator::coordinate(vars1(), 0);
        // (t d/dt)* = -(d/dt) t = -(t d/dt + 1)
        let td = &t * &d;
        let expected = &(&td + &DiffOperator::identity(vars1())).scale(&p("-1").unwrap());
        assert_eq!(&td.adjoint(), expected);
    }

    #[test]
    fn apply_to_polynomial() {
        let vars = vars1();
        let op = &DiffOperator::derivative(vars.clone(), 0)
            * &DiffOperator::coordinate(vars.clone(), 0);
        let poly = crate::poly::poly_from_str("t^2", &["t"]);
        // d/dt (t · t^2) = 3 t^2
        assert_eq!(op.apply_poly(&poly), crate::poly::poly_from_str("3*t^2", &["t"]));
    }

    #[test]
    fn change_variables_roundtrip() {
        // t' = 2t: multiplication t becomes t'/2, d/dt becomes 2 d/dt'.
        let m = crate::matrix::Mat::from_rows(vec![vec![p("2").unwrap()]]);
        let (m_inv, _) = m.inverse();
        let op = &DiffOperator::coordinate(vars1(), 0)
            * &DiffOperator::derivative(vars1(), 0);
        let out = op.change_variables(&m, &m_inv.unwrap(), vec!["u".to_string()]);
        let u = DiffOperator::coordinate(vec!["u".to_string()], 0);
        let du = DiffOperator::derivative(vec!["u".to_string()], 0);
        assert_eq!(out, &u * &du);
    }
}
