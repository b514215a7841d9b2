//! Exact scalar arithmetic: Gaussian rationals and the fraction field of
//! multivariate polynomials over them in named formal parameters.
//!
//! [`ScalarExpr`] is the coefficient field used everywhere else in the crate.
//! Values are kept in a canonical form (reduced fraction, monic denominator
//! under the lexicographic monomial order), so `==` decides mathematical
//! equality.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Arbitrary-precision rational number.
pub type Rat = BigRational;

pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

/// Element of ℚ(i): `re + im·i` with rational parts.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default)]
pub struct GaussRat {
    pub re: Rat,
    pub im: Rat,
}

impl GaussRat {
    pub fn new(re: Rat, im: Rat) -> Self {
        GaussRat { re, im }
    }

    pub fn from_rat(re: Rat) -> Self {
        GaussRat {
            re,
            im: Rat::zero(),
        }
    }

    pub fn from_i64(n: i64) -> Self {
        Self::from_rat(Rat::from(BigInt::from(n)))
    }

    pub fn i() -> Self {
        GaussRat {
            re: Rat::zero(),
            im: Rat::one(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.re.is_one() && self.im.is_zero()
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        GaussRat {
            re: self.re.clone(),
            im: -self.im.clone(),
        }
    }

    /// Squared modulus `re² + im²` (a nonnegative rational).
    pub fn norm_sq(&self) -> Rat {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn inv(&self) -> Self {
        assert!(!self.is_zero(), "division by zero Gaussian rational");
        let n = self.norm_sq();
        GaussRat {
            re: &self.re / &n,
            im: -&self.im / &n,
        }
    }
}

impl Add for &GaussRat {
    type Output = GaussRat;
    fn add(self, rhs: &GaussRat) -> GaussRat {
        GaussRat {
            re: &self.re + &rhs.re,
            im: &self.im + &rhs.im,
        }
    }
}

impl Sub for &GaussRat {
    type Output = GaussRat;
    fn sub(self, rhs: &GaussRat) -> GaussRat {
        GaussRat {
            re: &self.re - &rhs.re,
            im: &self.im - &rhs.im,
        }
    }
}

impl Mul for &GaussRat {
    type Output = GaussRat;
    fn mul(self, rhs: &GaussRat) -> GaussRat {
        GaussRat {
            re: &self.re * &rhs.re - &self.im * &rhs.im,
            im: &self.re * &rhs.im + &self.im * &rhs.re,
        }
    }
}

impl Neg for &GaussRat {
    type Output = GaussRat;
    fn neg(self) -> GaussRat {
        GaussRat {
            re: -self.re.clone(),
            im: -self.im.clone(),
        }
    }
}

fn rat_to_string(r: &Rat) -> String {
    if r.denom().is_one() {
        format!("{}", r.numer())
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl fmt::Display for GaussRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let im_part = |im: &Rat| -> String {
            if im.is_one() {
                "i".to_string()
            } else if (-im).is_one() {
                "-i".to_string()
            } else {
                format!("{}*i", rat_to_string(im))
            }
        };
        if self.im.is_zero() {
            write!(f, "{}", rat_to_string(&self.re))
        } else if self.re.is_zero() {
            write!(f, "{}", im_part(&self.im))
        } else if self.im.is_negative() {
            write!(
                f,
                "{}-{}",
                rat_to_string(&self.re),
                im_part(&-self.im.clone()).trim_start_matches('-')
            )
        } else {
            write!(f, "{}+{}", rat_to_string(&self.re), im_part(&self.im))
        }
    }
}

/// Monomial in named parameters: sorted `(name, exponent)` pairs, exponents > 0.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Mono(pub Vec<(String, u32)>);

impl Mono {
    pub fn one() -> Self {
        Mono(Vec::new())
    }

    pub fn var(name: &str) -> Self {
        Mono(vec![(name.to_string(), 1)])
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|(_, e)| e).sum()
    }

    pub fn exponent_of(&self, name: &str) -> u32 {
        self.0
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, e)| *e)
            .unwrap_or(0)
    }

    pub fn mul(&self, rhs: &Mono) -> Mono {
        let mut out: BTreeMap<String, u32> = self.0.iter().cloned().collect();
        for (n, e) in &rhs.0 {
            *out.entry(n.clone()).or_insert(0) += e;
        }
        Mono(out.into_iter().collect())
    }

    /// Exact monomial division; `None` when some exponent would go negative.
    pub fn div(&self, rhs: &Mono) -> Option<Mono> {
        let mut out: BTreeMap<String, u32> = self.0.iter().cloned().collect();
        for (n, e) in &rhs.0 {
            let cur = out.get_mut(n)?;
            if *cur < *e {
                return None;
            }
            *cur -= e;
            if *cur == 0 {
                out.remove(n);
            }
        }
        Some(Mono(out.into_iter().collect()))
    }
}

// Lexicographic order: variables ranked alphabetically, the earliest variable
// with differing exponent decides; higher exponent means larger monomial.
impl Ord for Mono {
    fn cmp(&self, other: &Self) -> Ordering {
        let mut a = self.0.iter().peekable();
        let mut b = other.0.iter().peekable();
        loop {
            match (a.peek(), b.peek()) {
                (None, None) => return Ordering::Equal,
                (Some(_), None) => return Ordering::Greater,
                (None, Some(_)) => return Ordering::Less,
                (Some((na, ea)), Some((nb, eb))) => match na.cmp(nb) {
                    Ordering::Less => return Ordering::Greater,
                    Ordering::Greater => return Ordering::Less,
                    Ordering::Equal => {
                        if ea != eb {
                            return ea.cmp(eb);
                        }
                        a.next();
                        b.next();
                    }
                },
            }
        }
    }
}

impl PartialOrd for Mono {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Mono {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self
            .0
            .iter()
            .map(|(n, e)| {
                if *e == 1 {
                    n.clone()
                } else {
                    format!("{}^{}", n, e)
                }
            })
            .collect();
        write!(f, "{}", parts.join("*"))
    }
}

/// Multivariate polynomial over ℚ(i) in named parameters.
///
/// Invariant: no explicitly stored zero coefficients.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default)]
pub struct Poly {
    pub terms: BTreeMap<Mono, GaussRat>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly {
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(c: GaussRat) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Mono::one(), c);
        }
        Poly { terms }
    }

    pub fn one() -> Self {
        Self::constant(GaussRat::from_i64(1))
    }

    pub fn var(name: &str) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(Mono::var(name), GaussRat::from_i64(1));
        Poly { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.len() <= 1 && self.terms.keys().all(|m| m.is_one())
    }

    pub fn constant_value(&self) -> Option<GaussRat> {
        if self.is_zero() {
            Some(GaussRat::default())
        } else if self.is_constant() {
            self.terms.values().next().cloned()
        } else {
            None
        }
    }

    pub fn vars(&self) -> BTreeSet<String> {
        self.terms
            .iter()
            .flat_map(|(m, _)| m.0.iter().map(|(n, _)| n.clone()))
            .collect()
    }

    pub fn degree_in(&self, name: &str) -> u32 {
        self.terms
            .keys()
            .map(|m| m.exponent_of(name))
            .max()
            .unwrap_or(0)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(|m| m.degree()).max().unwrap_or(0)
    }

    fn insert_term(&mut self, m: Mono, c: GaussRat) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(existing) => {
                let sum = &*existing + &c;
                if sum.is_zero() {
                    self.terms.remove(&m);
                } else {
                    *existing = sum;
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    /// Leading term under the lexicographic order.
    pub fn leading(&self) -> Option<(&Mono, &GaussRat)> {
        self.terms.iter().next_back()
    }

    pub fn scale(&self, c: &GaussRat) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly {
            terms: self
                .terms
                .iter()
                .map(|(m, v)| (m.clone(), v * c))
                .collect(),
        }
    }

    pub fn conj(&self) -> Poly {
        Poly {
            terms: self
                .terms
                .iter()
                .map(|(m, v)| (m.clone(), v.conj()))
                .collect(),
        }
    }

    /// Exact division; `None` when `rhs` does not divide `self`.
    pub fn div_exact(&self, rhs: &Poly) -> Option<Poly> {
        assert!(!rhs.is_zero(), "division of polynomial by zero");
        let mut rem = self.clone();
        let mut quot = Poly::zero();
        let (lm, lc) = {
            let (m, c) = rhs.leading().unwrap();
            (m.clone(), c.clone())
        };
        while !rem.is_zero() {
            let (rm, rc) = {
                let (m, c) = rem.leading().unwrap();
                (m.clone(), c.clone())
            };
            let qm = rm.div(&lm)?;
            let qc = &rc * &lc.inv();
            let mut t = Poly::zero();
            t.insert_term(qm.clone(), qc.clone());
            quot = &quot + &t;
            rem = &rem - &(&t * rhs);
        }
        Some(quot)
    }

    /// View as a univariate polynomial in `name`: coefficients indexed by degree.
    fn to_univariate(&self, name: &str) -> Vec<Poly> {
        let d = self.degree_in(name) as usize;
        let mut out = vec![Poly::zero(); d + 1];
        for (m, c) in &self.terms {
            let e = m.exponent_of(name) as usize;
            let rest = Mono(
                m.0.iter()
                    .filter(|(n, _)| n != name)
                    .cloned()
                    .collect::<Vec<_>>(),
            );
            out[e].insert_term(rest, c.clone());
        }
        out
    }

    fn from_univariate(coeffs: &[Poly], name: &str) -> Poly {
        let mut out = Poly::zero();
        for (e, c) in coeffs.iter().enumerate() {
            for (m, v) in &c.terms {
                let mut m2 = m.clone();
                if e > 0 {
                    m2 = m2.mul(&Mono(vec![(name.to_string(), e as u32)]));
                }
                out.insert_term(m2, v.clone());
            }
        }
        out
    }

    /// Monic normalization: divide by the leading coefficient.
    pub fn monic(&self) -> Poly {
        match self.leading() {
            None => Poly::zero(),
            Some((_, lc)) => self.scale(&lc.inv()),
        }
    }

    pub fn derivative(&self, name: &str) -> Poly {
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            let e = m.exponent_of(name);
            if e == 0 {
                continue;
            }
            let mut rest: Vec<(String, u32)> = Vec::new();
            for (n, k) in &m.0 {
                if n == name {
                    if *k > 1 {
                        rest.push((n.clone(), k - 1));
                    }
                } else {
                    rest.push((n.clone(), *k));
                }
            }
            out.insert_term(Mono(rest), c * &GaussRat::from_i64(e as i64));
        }
        out
    }

    /// Coefficient of `name^k`, as a polynomial in the other parameters.
    pub fn coeff_of(&self, name: &str, k: u32) -> Poly {
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            if m.exponent_of(name) == k {
                let rest = Mono(
                    m.0.iter()
                        .filter(|(n, _)| n != name)
                        .cloned()
                        .collect::<Vec<_>>(),
                );
                out.insert_term(rest, c.clone());
            }
        }
        out
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.insert_term(m.clone(), c.clone());
        }
        out
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.insert_term(m.clone(), -c);
        }
        out
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        let mut out = Poly::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.insert_term(ma.mul(mb), ca * cb);
            }
        }
        out
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

/// Pseudo-remainder of univariate polynomials with `Poly` coefficients.
fn pseudo_rem(a: &[Poly], b: &[Poly]) -> Vec<Poly> {
    let mut r: Vec<Poly> = a.to_vec();
    let db = b.len() - 1;
    let lc_b = b.last().unwrap().clone();
    loop {
        while r.last().map(|p| p.is_zero()).unwrap_or(false) {
            r.pop();
        }
        if r.is_empty() || r.len() - 1 < db {
            return r;
        }
        let dr = r.len() - 1;
        let lc_r = r.last().unwrap().clone();
        // r := lc_b * r − lc_r * x^(dr−db) * b
        let mut new_r = vec![Poly::zero(); dr];
        for (i, item) in new_r.iter_mut().enumerate().take(dr) {
            let mut v = if i < r.len() {
                &r[i] * &lc_b
            } else {
                Poly::zero()
            };
            if i >= dr - db {
                let j = i - (dr - db);
                v = &v - &(&lc_r * &b[j]);
            }
            *item = v;
        }
        r = new_r;
    }
}

fn content(coeffs: &[Poly]) -> Poly {
    let mut g = Poly::zero();
    for c in coeffs {
        if !c.is_zero() {
            g = poly_gcd(&g, c);
        }
    }
    g
}

/// GCD of multivariate polynomials over ℚ(i), normalized monic.
///
/// Primitive PRS: recurse on the alphabetically first variable, splitting off
/// contents in the remaining variables.
pub fn poly_gcd(a: &Poly, b: &Poly) -> Poly {
    if a.is_zero() {
        return b.monic();
    }
    if b.is_zero() {
        return a.monic();
    }
    let mut vars = a.vars();
    vars.extend(b.vars());
    let Some(x) = vars.into_iter().next() else {
        return Poly::one(); // both nonzero constants
    };

    let ua = a.to_univariate(&x);
    let ub = b.to_univariate(&x);
    let cont_a = content(&ua);
    let cont_b = content(&ub);
    let prim_a: Vec<Poly> = ua.iter().map(|c| c.div_exact(&cont_a).unwrap()).collect();
    let prim_b: Vec<Poly> = ub.iter().map(|c| c.div_exact(&cont_b).unwrap()).collect();
    let cont_gcd = poly_gcd(&cont_a, &cont_b);

    let (mut p, mut q) = if prim_a.len() >= prim_b.len() {
        (prim_a, prim_b)
    } else {
        (prim_b, prim_a)
    };
    loop {
        let r = pseudo_rem(&p, &q);
        if r.is_empty() {
            // q divides p: gcd is primitive(q)
            let cq = content(&q);
            let prim_q: Vec<Poly> = q.iter().map(|c| c.div_exact(&cq).unwrap()).collect();
            let g = Poly::from_univariate(&prim_q, &x);
            return (&g * &cont_gcd).monic();
        }
        if r.len() == 1 {
            // nonzero constant (in x) remainder: coprime in x
            return cont_gcd.monic();
        }
        let cr = content(&r);
        let prim_r: Vec<Poly> = r.iter().map(|c| c.div_exact(&cr).unwrap()).collect();
        p = q;
        q = prim_r;
    }
}

/// Element of the fraction field ℚ(i)(parameters), canonically reduced:
/// gcd(num, den) = 1 and den monic under the lexicographic monomial order.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct ScalarExpr {
    num: Poly,
    den: Poly,
}

impl Default for ScalarExpr {
    fn default() -> Self {
        ScalarExpr::zero()
    }
}

impl ScalarExpr {
    pub fn new(num: Poly, den: Poly) -> Self {
        assert!(!den.is_zero(), "zero denominator in ScalarExpr");
        if num.is_zero() {
            return ScalarExpr {
                num: Poly::zero(),
                den: Poly::one(),
            };
        }
        // Constant denominators (the common, purely polynomial case) need no
        // gcd reduction, only monic normalization.
        if den.is_constant() {
            let c = den.constant_value().unwrap();
            return ScalarExpr {
                num: num.scale(&c.inv()),
                den: Poly::one(),
            };
        }
        if num.is_constant() {
            let lc = den.leading().unwrap().1.clone();
            return ScalarExpr {
                num: num.scale(&lc.inv()),
                den: den.scale(&lc.inv()),
            };
        }
        let g = poly_gcd(&num, &den);
        let mut num = num.div_exact(&g).unwrap();
        let mut den = den.div_exact(&g).unwrap();
        let lc = den.leading().unwrap().1.clone();
        if !lc.is_one() {
            let inv = lc.inv();
            num = num.scale(&inv);
            den = den.scale(&inv);
        }
        ScalarExpr { num, den }
    }

    pub fn from_poly(num: Poly) -> Self {
        ScalarExpr::new(num, Poly::one())
    }

    pub fn zero() -> Self {
        Self::from_poly(Poly::zero())
    }

    pub fn one() -> Self {
        Self::from_poly(Poly::one())
    }

    pub fn i() -> Self {
        Self::from_poly(Poly::constant(GaussRat::i()))
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_poly(Poly::constant(GaussRat::from_i64(n)))
    }

    pub fn from_rat(n: i64, d: i64) -> Self {
        assert!(d != 0);
        Self::from_poly(Poly::constant(GaussRat::from_rat(rat(n, d))))
    }

    pub fn from_gauss(g: GaussRat) -> Self {
        Self::from_poly(Poly::constant(g))
    }

    pub fn param(name: &str) -> Self {
        Self::from_poly(Poly::var(name))
    }

    pub fn numerator(&self) -> &Poly {
        &self.num
    }

    pub fn denominator(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.den.terms.len() == 1
            && self.num == Poly::one()
            && self.den == Poly::one()
    }

    pub fn is_constant(&self) -> bool {
        self.num.is_constant() && self.den.is_constant()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_constant()
    }

    pub fn constant_value(&self) -> Option<GaussRat> {
        let n = self.num.constant_value()?;
        let d = self.den.constant_value()?;
        Some(&n * &d.inv())
    }

    pub fn vars(&self) -> BTreeSet<String> {
        let mut v = self.num.vars();
        v.extend(self.den.vars());
        v
    }

    pub fn depends_on(&self, name: &str) -> bool {
        self.vars().contains(name)
    }

    pub fn inv(&self) -> Self {
        assert!(!self.is_zero(), "inverse of zero ScalarExpr");
        ScalarExpr::new(self.den.clone(), self.num.clone())
    }

    pub fn conj(&self) -> Self {
        // Formal parameters are treated as real; only the Gaussian unit flips.
        ScalarExpr::new(self.num.conj(), self.den.conj())
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut out = ScalarExpr::one();
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                out = &out * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        out
    }

    /// Partial derivative; requires the denominator to be free of `name`.
    pub fn derivative(&self, name: &str) -> Self {
        assert!(
            !self.den.vars().contains(name),
            "derivative through a denominator containing {name}"
        );
        ScalarExpr::new(self.num.derivative(name), self.den.clone())
    }

    /// Coefficient of `name^k`; requires the denominator to be free of `name`.
    pub fn coeff_of(&self, name: &str, k: u32) -> Self {
        assert!(
            !self.den.vars().contains(name),
            "coefficient extraction through a denominator containing {name}"
        );
        ScalarExpr::new(self.num.coeff_of(name, k), self.den.clone())
    }

    /// Discard numerator terms of degree > `k` in `name` (denominator must be
    /// free of `name`). Used for truncated first-order expansions.
    pub fn truncate_deg(&self, name: &str, k: u32) -> Self {
        assert!(!self.den.vars().contains(name));
        let mut kept = Poly::zero();
        for (m, c) in &self.num.terms {
            if m.exponent_of(name) <= k {
                kept.insert_term(m.clone(), c.clone());
            }
        }
        ScalarExpr::new(kept, self.den.clone())
    }

    /// Substitute a value for a parameter.
    pub fn subst(&self, name: &str, value: &ScalarExpr) -> Self {
        let subst_poly = |p: &Poly| -> ScalarExpr {
            let mut out = ScalarExpr::zero();
            for (m, c) in &p.terms {
                let mut term = ScalarExpr::from_gauss(c.clone());
                for (n, e) in &m.0 {
                    let factor = if n == name {
                        value.pow(*e)
                    } else {
                        ScalarExpr::param(n).pow(*e)
                    };
                    term = &term * &factor;
                }
                out = &out + &term;
            }
            out
        };
        let n = subst_poly(&self.num);
        let d = subst_poly(&self.den);
        assert!(!d.is_zero(), "substitution made a denominator vanish");
        &n / &d
    }

    /// Substitute several parameters at once.
    pub fn subst_many(&self, map: &BTreeMap<String, ScalarExpr>) -> Self {
        let mut out = self.clone();
        for (k, v) in map {
            out = out.subst(k, v);
        }
        out
    }
}

impl Add for &ScalarExpr {
    type Output = ScalarExpr;
    fn add(self, rhs: &ScalarExpr) -> ScalarExpr {
        ScalarExpr::new(
            &(&self.num * &rhs.den) + &(&rhs.num * &self.den),
            &self.den * &rhs.den,
        )
    }
}

impl Sub for &ScalarExpr {
    type Output = ScalarExpr;
    fn sub(self, rhs: &ScalarExpr) -> ScalarExpr {
        ScalarExpr::new(
            &(&self.num * &rhs.den) - &(&rhs.num * &self.den),
            &self.den * &rhs.den,
        )
    }
}

impl Mul for &ScalarExpr {
    type Output = ScalarExpr;
    fn mul(self, rhs: &ScalarExpr) -> ScalarExpr {
        ScalarExpr::new(&self.num * &rhs.num, &self.den * &rhs.den)
    }
}

impl Div for &ScalarExpr {
    type Output = ScalarExpr;
    fn div(self, rhs: &ScalarExpr) -> ScalarExpr {
        assert!(!rhs.is_zero(), "division by zero ScalarExpr");
        ScalarExpr::new(&self.num * &rhs.den, &self.den * &rhs.num)
    }
}

impl Neg for &ScalarExpr {
    type Output = ScalarExpr;
    fn neg(self) -> ScalarExpr {
        ScalarExpr {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

impl AddAssign<&ScalarExpr> for ScalarExpr {
    fn add_assign(&mut self, rhs: &ScalarExpr) {
        *self = &*self + rhs;
    }
}

impl SubAssign<&ScalarExpr> for ScalarExpr {
    fn sub_assign(&mut self, rhs: &ScalarExpr) {
        *self = &*self - rhs;
    }
}

impl MulAssign<&ScalarExpr> for ScalarExpr {
    fn mul_assign(&mut self, rhs: &ScalarExpr) {
        *self = &*self * rhs;
    }
}

/// Render one polynomial term, omitting unit coefficients and wrapping
/// complex sums in parentheses so products stay unambiguous.
fn term_to_string(m: &Mono, c: &GaussRat) -> String {
    if m.is_one() {
        return c.to_string();
    }
    let coeff_str = {
        let needs_parens = !c.re.is_zero() && !c.im.is_zero();
        let s = c.to_string();
        if needs_parens {
            format!("({})", s)
        } else {
            s
        }
    };
    if c.is_one() {
        m.to_string()
    } else if (-c).is_one() {
        format!("-{}", m)
    } else if coeff_str == "i" {
        format!("i*{}", m)
    } else if coeff_str == "-i" {
        format!("-i*{}", m)
    } else {
        format!("{}*{}", coeff_str, m)
    }
}

pub(crate) fn poly_to_string(p: &Poly) -> String {
    if p.is_zero() {
        return "0".to_string();
    }
    // Leading (lex-largest) term first.
    let mut out = String::new();
    for (i, (m, c)) in p.terms.iter().rev().enumerate() {
        let t = term_to_string(m, c);
        if i == 0 {
            out.push_str(&t);
        } else if let Some(stripped) = t.strip_prefix('-') {
            out.push_str(" - ");
            out.push_str(stripped);
        } else {
            out.push_str(" + ");
            out.push_str(&t);
        }
    }
    out
}

impl fmt::Display for ScalarExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == Poly::one() {
            return write!(f, "{}", poly_to_string(&self.num));
        }
        // Clear rational denominators out of the coefficients so fractions
        // print as 1/(6*a^2) rather than with nested rationals.
        let mut lcm = BigInt::one();
        for poly in [&self.num, &self.den] {
            for c in poly.terms.values() {
                lcm = num_integer::lcm(lcm.clone(), c.re.denom().clone());
                lcm = num_integer::lcm(lcm.clone(), c.im.denom().clone());
            }
        }
        let scale = GaussRat::from_rat(Rat::from(lcm));
        let num = self.num.scale(&scale);
        let den = self.den.scale(&scale);
        let n = poly_to_string(&num);
        let d = poly_to_string(&den);
        let n_wrapped = if num.terms.len() > 1 {
            format!("({})", n)
        } else {
            n
        };
        let single_plain_var = den.terms.len() == 1
            && den.leading().map(|(m, c)| c.is_one() && m.0.len() == 1 && m.degree() == 1).unwrap_or(false);
        let d_wrapped = if single_plain_var {
            d
        } else {
            format!("({})", d)
        };
        write!(f, "{}/{}", n_wrapped, d_wrapped)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> ScalarExpr {
        crate::expr::parse_scalar(s).unwrap()
    }

    #[test]
    fn gauss_rat_field_ops() {
        let i = GaussRat::i();
        assert_eq!(&i * &i, GaussRat::from_i64(-1));
        let z = GaussRat::new(rat(1, 2), rat(-3, 4));
        assert!((&z * &z.inv()).is_one());
        assert_eq!(z.conj().conj(), z);
    }

    #[test]
    fn mono_lex_order() {
        let x2 = Mono(vec![("x".into(), 2)]);
        let xy = Mono(vec![("x".into(), 1), ("y".into(), 1)]);
        let y3 = Mono(vec![("y".into(), 3)]);
        assert!(x2 > xy);
        assert!(xy > y3);
    }

    #[test]
    fn scalar_expr_canonical_equality() {
        // (a^2 - 1)/(a - 1) reduces to a + 1
        let a = ScalarExpr::param("a");
        let num = &(&a * &a) - &ScalarExpr::one();
        let den = &a - &ScalarExpr::one();
        let q = &num / &den;
        assert_eq!(q, &a + &ScalarExpr::one());
    }

    #[test]
    fn denominator_monic_normalization() {
        // 1/(2a) has denominator normalized to a, numerator 1/2
        let two_a = &ScalarExpr::from_int(2) * &ScalarExpr::param("a");
        let q = &ScalarExpr::one() / &two_a;
        assert_eq!(q.denominator(), &Poly::var("a"));
        assert_eq!(q.to_string(), "1/(2*a)");
    }

    #[test]
    fn gcd_of_common_factor() {
        let x = Poly::var("x");
        let y = Poly::var("y");
        let f = &(&x + &y) * &(&x - &y); // x^2 - y^2
        let g = &(&x + &y) * &x; // x^2 + xy
        let d = poly_gcd(&f, &g);
        assert_eq!(d, (&x + &y).monic());
    }

    #[test]
    fn subst_evaluates() {
        let e = p("(s+t)^2/(s*t)");
        let v = e
            .subst("s", &ScalarExpr::from_int(1))
            .subst("t", &ScalarExpr::from_int(2));
        assert_eq!(v, ScalarExpr::from_rat(9, 2));
    }

    #[test]
    fn display_forms() {
        assert_eq!(p("1/2").to_string(), "1/2");
        assert_eq!(p("i").to_string(), "i");
        assert_eq!(p("-i*a").to_string(), "-i*a");
        assert_eq!(p("1+i").to_string(), "1+i");
        assert_eq!(p("a^2*b").to_string(), "a^2*b");
        assert_eq!(p("1/(6*a^2)").to_string(), "1/(6*a^2)");
    }
}
