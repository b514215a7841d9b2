//! Polynomials in a fixed, ordered set of named variables (orbit coordinates
//! `y2, y3, ...` or chart coordinates `t1, t2, ...`), with [`ScalarExpr`]
//! coefficients. The variable arity is fixed at creation.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::scalar::ScalarExpr;

/// Dense exponent vector, one entry per declared variable.
pub type Expo = Vec<u32>;

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct MultiPoly {
    pub vars: Vec<String>,
    pub terms: BTreeMap<Expo, ScalarExpr>,
}

impl MultiPoly {
    pub fn zero(vars: Vec<String>) -> Self {
        MultiPoly {
            vars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(vars: Vec<String>, c: ScalarExpr) -> Self {
        let mut out = Self::zero(vars);
        if !c.is_zero() {
            let arity = out.vars.len();
            out.terms.insert(vec![0; arity], c);
        }
        out
    }

    pub fn var(vars: Vec<String>, index: usize) -> Self {
        assert!(index < vars.len());
        let mut e = vec![0u32; vars.len()];
        e[index] = 1;
        let mut out = Self::zero(vars);
        out.terms.insert(e, ScalarExpr::one());
        out
    }

    pub fn arity(&self) -> usize {
        self.vars.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn constant_value(&self) -> Option<ScalarExpr> {
        if self.is_zero() {
            return Some(ScalarExpr::zero());
        }
        if self.terms.len() == 1 {
            let (e, c) = self.terms.iter().next().unwrap();
            if e.iter().all(|&k| k == 0) {
                return Some(c.clone());
            }
        }
        None
    }

    pub fn total_degree(&self) -> u32 {
        self.terms
            .keys()
            .map(|e| e.iter().sum::<u32>())
            .max()
            .unwrap_or(0)
    }

    pub fn degree_in(&self, index: usize) -> u32 {
        self.terms.keys().map(|e| e[index]).max().unwrap_or(0)
    }

    fn insert_term(&mut self, e: Expo, c: ScalarExpr) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&e) {
            Some(existing) => {
                let sum = &*existing + &c;
                if sum.is_zero() {
                    self.terms.remove(&e);
                } else {
                    *existing = sum;
                }
            }
            None => {
                self.terms.insert(e, c);
            }
        }
    }

    pub fn add_term(&mut self, e: Expo, c: ScalarExpr) {
        assert_eq!(e.len(), self.arity());
        self.insert_term(e, c);
    }

    pub fn scale(&self, c: &ScalarExpr) -> MultiPoly {
        if c.is_zero() {
            return MultiPoly::zero(self.vars.clone());
        }
        MultiPoly {
            vars: self.vars.clone(),
            terms: self
                .terms
                .iter()
                .map(|(e, v)| (e.clone(), v * c))
                .collect(),
        }
    }

    pub fn coefficient(&self, e: &[u32]) -> ScalarExpr {
        self.terms.get(e).cloned().unwrap_or_else(ScalarExpr::zero)
    }

    pub fn derivative(&self, index: usize) -> MultiPoly {
        let mut out = MultiPoly::zero(self.vars.clone());
        for (e, c) in &self.terms {
            if e[index] == 0 {
                continue;
            }
            let mut e2 = e.clone();
            e2[index] -= 1;
            out.insert_term(e2, c * &ScalarExpr::from_int(e[index] as i64));
        }
        out
    }

    /// Substitute polynomials for the variables (`values[i]` replaces variable
    /// `i`). All `values` must share one variable set, which becomes the
    /// variable set of the result.
    pub fn compose(&self, values: &[MultiPoly]) -> MultiPoly {
        assert_eq!(values.len(), self.arity());
        let out_vars = values
            .first()
            .map(|p| p.vars.clone())
            .unwrap_or_default();
        let mut out = MultiPoly::zero(out_vars.clone());
        for (e, c) in &self.terms {
            let mut term = MultiPoly::constant(out_vars.clone(), c.clone());
            for (i, &k) in e.iter().enumerate() {
                for _ in 0..k {
                    term = &term * &values[i];
                }
            }
            out = &out + &term;
        }
        out
    }

    /// Evaluate at scalar values for all variables.
    pub fn eval(&self, values: &[ScalarExpr]) -> ScalarExpr {
        assert_eq!(values.len(), self.arity());
        let mut out = ScalarExpr::zero();
        for (e, c) in &self.terms {
            let mut term = c.clone();
            for (i, &k) in e.iter().enumerate() {
                term = &term * &values[i].pow(k);
            }
            out = &out + &term;
        }
        out
    }

    /// Apply a map to every coefficient (dropping zeros).
    pub fn map_coeffs(&self, f: impl Fn(&ScalarExpr) -> ScalarExpr) -> MultiPoly {
        let mut out = MultiPoly::zero(self.vars.clone());
        for (e, c) in &self.terms {
            out.insert_term(e.clone(), f(c));
        }
        out
    }

    /// Convert into a scalar expression over parameters named after the
    /// variables (used to hand polynomial data to the linear algebra layer).
    pub fn to_scalar(&self) -> ScalarExpr {
        let mut out = ScalarExpr::zero();
        for (e, c) in &self.terms {
            let mut term = c.clone();
            for (i, &k) in e.iter().enumerate() {
                if k > 0 {
                    term = &term * &ScalarExpr::param(&self.vars[i]).pow(k);
                }
            }
            out = &out + &term;
        }
        out
    }

    /// Inverse of [`to_scalar`](Self::to_scalar): reinterpret a polynomial
    /// scalar expression as a `MultiPoly` in the given variables. The scalar's
    /// denominator must not involve the variables.
    pub fn from_scalar(s: &ScalarExpr, vars: &[String]) -> MultiPoly {
        for v in vars {
            assert!(
                !s.denominator().vars().contains(v),
                "denominator depends on polynomial variable {v}"
            );
        }
        let mut out = MultiPoly::zero(vars.to_vec());
        let den = ScalarExpr::new(crate::scalar::Poly::one(), s.denominator().clone());
        for (m, c) in &s.numerator().terms {
            let mut e = vec![0u32; vars.len()];
            let mut coeff_mono = crate::scalar::Mono::one();
            for (name, k) in &m.0 {
                match vars.iter().position(|v| v == name) {
                    Some(i) => e[i] = *k,
                    None => coeff_mono = coeff_mono.mul(&crate::scalar::Mono(vec![(
                        name.clone(),
                        *k,
                    )])),
                }
            }
            let mut coeff_poly = crate::scalar::Poly::zero();
            coeff_poly.terms.insert(coeff_mono, c.clone());
            let coeff = &ScalarExpr::from_poly(coeff_poly) * &den;
            out.insert_term(e, coeff);
        }
        out
    }
}

impl Add for &MultiPoly {
    type Output = MultiPoly;
    fn add(self, rhs: &MultiPoly) -> MultiPoly {
        assert_eq!(self.vars, rhs.vars, "polynomial variable sets differ");
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.insert_term(e.clone(), c.clone());
        }
        out
    }
}

impl Sub for &MultiPoly {
    type Output = MultiPoly;
    fn sub(self, rhs: &MultiPoly) -> MultiPoly {
        assert_eq!(self.vars, rhs.vars, "polynomial variable sets differ");
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.insert_term(e.clone(), -c);
        }
        out
    }
}

impl Mul for &MultiPoly {
    type Output = MultiPoly;
    fn mul(self, rhs: &MultiPoly) -> MultiPoly {
        assert_eq!(self.vars, rhs.vars, "polynomial variable sets differ");
        let mut out = MultiPoly::zero(self.vars.clone());
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                let e: Expo = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                out.insert_term(e, ca * cb);
            }
        }
        out
    }
}

impl Neg for &MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        MultiPoly {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }
}

fn expo_mono_string(vars: &[String], e: &[u32]) -> String {
    let parts: Vec<String> = vars
        .iter()
        .zip(e)
        .filter(|(_, &k)| k > 0)
        .map(|(v, &k)| if k == 1 { v.clone() } else { format!("{v}^{k}") })
        .collect();
    parts.join("*")
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        // Ascending total degree, ties broken by descending lexicographic
        // exponent vector: constants first, then low-degree terms.
        let mut keys: Vec<&Expo> = self.terms.keys().collect();
        keys.sort_by(|a, b| {
            let da: u32 = a.iter().sum();
            let db: u32 = b.iter().sum();
            da.cmp(&db).then_with(|| b.cmp(a))
        });
        let mut out = String::new();
        for (i, e) in keys.iter().enumerate() {
            let c = &self.terms[*e];
            let mono = expo_mono_string(&self.vars, e);
            let (sign, body) = render_coeff_term(c, &mono);
            if i == 0 {
                if sign {
                    out.push('-');
                }
                out.push_str(&body);
            } else {
                out.push_str(if sign { " - " } else { " + " });
                out.push_str(&body);
            }
        }
        write!(f, "{}", out)
    }
}

/// Render `c * mono`, splitting off a leading minus sign when the coefficient
/// is a single negated term. Returns `(is_negative, body)`.
pub(crate) fn render_coeff_term(c: &ScalarExpr, mono: &str) -> (bool, String) {
    let (neg, c_abs) = if c.numerator().terms.len() == 1 {
        use num_traits::Zero;
        let (_, lc) = c.numerator().leading().unwrap();
        let negative_real = lc.im.is_zero() && lc.re < num_rational::BigRational::default();
        let negative_imag = lc.re.is_zero() && lc.im < num_rational::BigRational::default();
        if negative_real || negative_imag {
            (true, -c)
        } else {
            (false, c.clone())
        }
    } else {
        (false, c.clone())
    };
    if mono.is_empty() {
        return (neg, c_abs.to_string());
    }
    if c_abs.is_one() {
        return (neg, mono.to_string());
    }
    let cs = c_abs.to_string();
    let needs_parens = c_abs.numerator().terms.len() > 1;
    let body = if needs_parens {
        format!("({cs})*{mono}")
    } else {
        format!("{cs}*{mono}")
    };
    (neg, body)
}

/// Convenience constructor used in tests.
pub fn poly_from_str(src: &str, vars: &[&str]) -> MultiPoly {
    let vars: Vec<String> = vars.iter().map(|s| s.to_string()).collect();
    crate::expr::parse_poly(src, &vars).unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::poly_from_str as mp;

    #[test]
    fn display_order_matches_reference_layout() {
        let p = mp("a^2*b + a*y2*y4 - 1/2*a*y3^2 + 1/3*y2^3", &["y2", "y3", "y4"]);
        assert_eq!(
            p.to_string(),
            "a^2*b + a*y2*y4 - 1/2*a*y3^2 + 1/3*y2^3"
        );
    }

    #[test]
    fn compose_substitutes() {
        let p = mp("y1^2 + y2", &["y1", "y2"]);
        let u = mp("t", &["t"]);
        let v = mp("t^3 - 1", &["t"]);
        assert_eq!(p.compose(&[u, v]), mp("t^2 + t^3 - 1", &["t"]));
    }

    #[test]
    fn to_scalar_round_trip() {
        let vars = ["y2", "y3"];
        let p = mp("1/2*y2^2*y3 - a*y3 + b", &vars);
        let s = p.to_scalar();
        let vars_owned: Vec<String> = vars.iter().map(|v| v.to_string()).collect();
        assert_eq!(MultiPoly::from_scalar(&s, &vars_owned), p);
    }

    #[test]
    fn zero_coefficients_never_stored() {
        let p = mp("y1 - y1", &["y1"]);
        assert!(p.is_zero());
        assert_eq!(p.terms.len(), 0);
    }
}
