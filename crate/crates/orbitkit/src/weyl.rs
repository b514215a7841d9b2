//! Quantization of polynomial symbols on a coadjoint orbit, coadjoint vector
//! fields, invariant differential operators, and the restriction pullback of
//! symbols between orbits.
//!
//! A monomial `y_{j1}···y_{jk}` in the jump coordinates quantizes to
//! `(−i)^k` times the fully symmetrized product of the corresponding
//! `dπ(X_j)`. The sign is pinned by the Fourier convention
//! `â(x) = ∫ e^{−i⟨ξ,x⟩} a(ξ) dξ`, under which `Op(e^{i⟨·,X⟩}) = π(exp X)`
//! and hence `Op(y_j) = −i·dπ(X_j)`; the grid-level cross-check against the
//! classical Weyl calculus exercises the same convention numerically.

use thiserror::Error;

use crate::diffop::DiffOperator;
use crate::lie::Vector;
use crate::ncword::NcWord;
use crate::orbit::{CoadjointOrbit, OrbitError};
use crate::poly::MultiPoly;
use crate::rep::DRep;
use crate::scalar::ScalarExpr;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WeylError {
    #[error("symbol arity {got} does not match the orbit jump count {expected}")]
    ArityMismatch { got: usize, expected: usize },
    #[error("restriction is not bijective onto the smaller orbit")]
    RestrictionNotBijective,
    #[error(transparent)]
    Orbit(#[from] OrbitError),
}

/// Quantize a polynomial symbol in the jump coordinates:
/// each monomial maps to `(−i)^degree` times the symmetrized product of the
/// generators `dπ(X_j)`, extended linearly. `Op(1)` is the identity.
pub fn quantize_poly(
    symbol: &MultiPoly,
    rep: &DRep,
    orbit: &CoadjointOrbit,
) -> Result<DiffOperator, WeylError> {
    if symbol.arity() != orbit.jump_set.len() {
        return Err(WeylError::ArityMismatch {
            got: symbol.arity(),
            expected: orbit.jump_set.len(),
        });
    }
    // jump coordinate position k ↦ generator dπ(X_{jump_set[k]})
    let generators: Vec<&DiffOperator> = orbit
        .jump_set
        .iter()
        .map(|&j| rep.operator(j))
        .collect();
    let mut out = DiffOperator::zero(rep.vars.clone());
    for (expo, coeff) in &symbol.terms {
        let mut word = Vec::new();
        for (k, &e) in expo.iter().enumerate() {
            for _ in 0..e {
                word.push(k);
            }
        }
        let degree = word.len() as u32;
        let weight = &*coeff * &(-&ScalarExpr::i()).pow(degree);
        let symmetrized = NcWord::monomial(word, weight).symmetrize();
        for (w, c) in &symmetrized.terms {
            let mut product = DiffOperator::identity(rep.vars.clone());
            for &letter in w {
                product = &product * generators[letter];
            }
            out = &out + &product.scale(c);
        }
    }
    Ok(out)
}

/// Coadjoint vector fields on the orbit, one per basis element of the
/// algebra: `L_X = Σ_{j ∈ e} (−⟨·, [X, X_j]⟩ ∘ cross-section) ∂_{y_j}`,
/// first-order operators in the jump coordinates. They satisfy
/// `[L_X, L_Y] = L_{−[X,Y]}`.
pub fn coadjoint_vector_fields(orbit: &CoadjointOrbit) -> Vec<DiffOperator> {
    let g = &orbit.algebra;
    let m = g.dim();
    let vars = orbit.jump_vars.clone();
    let mut fields = Vec::with_capacity(m);
    for x in 0..m {
        let mut field = DiffOperator::zero(vars.clone());
        for (k, &j) in orbit.jump_set.iter().enumerate() {
            // coefficient: −⟨·, [X_x, X_j]⟩ as a function on the orbit
            let br = g.bracket_basis(x, j);
            let mut coeff = MultiPoly::zero(vars.clone());
            for (l, c) in br.iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                coeff = &coeff + &orbit.coordinate_function(l).scale(c);
            }
            if coeff.is_zero() {
                continue;
            }
            let neg = -&coeff;
            field = &field
                + &(&DiffOperator::from_poly(&neg)
                    * &DiffOperator::derivative(vars.clone(), k));
        }
        fields.push(field);
    }
    fields
}

/// Is the operator invariant under the coadjoint action, i.e. does it
/// commute with every coadjoint vector field?
pub fn is_invariant_op(op: &DiffOperator, orbit: &CoadjointOrbit) -> bool {
    coadjoint_vector_fields(orbit)
        .iter()
        .all(|field| op.commutator(field).is_zero())
}

/// Exact basis of the invariant differential operators on the orbit with
/// derivative order ≤ `max_order` and coefficient degree ≤ `max_coeff_degree`:
/// the linear system `[D, L_X] = 0` is solved over the unknown coefficients.
pub fn find_invariant_ops(
    orbit: &CoadjointOrbit,
    max_order: u32,
    max_coeff_degree: u32,
) -> Vec<DiffOperator> {
    let vars = orbit.jump_vars.clone();
    let d = vars.len();
    let fields = coadjoint_vector_fields(orbit);

    // enumerate the candidate terms (t-monomial, derivative multi-index)
    let monos = multi_indices(d, max_coeff_degree);
    let ders = multi_indices(d, max_order);
    let mut keys = Vec::new();
    for mo in &monos {
        for de in &ders {
            keys.push((mo.clone(), de.clone()));
        }
    }
    // basis operators
    let base_ops: Vec<DiffOperator> = keys
        .iter()
        .map(|(mo, de)| {
            let mut op = DiffOperator::zero(vars.clone());
            let mut poly = MultiPoly::zero(vars.clone());
            poly.add_term(mo.clone(), ScalarExpr::one());
            op = &op + &DiffOperator::from_poly(&poly);
            let mut der = DiffOperator::identity(vars.clone());
            for (idx, &k) in de.iter().enumerate() {
                for _ in 0..k {
                    der = &der * &DiffOperator::derivative(vars.clone(), idx);
                }
            }
            &op * &der
        })
        .collect();

    // rows: for each field and each resulting term key, a linear condition
    let mut rows: Vec<Vec<ScalarExpr>> = Vec::new();
    let mut row_index: std::collections::BTreeMap<
        (usize, (Vec<u32>, Vec<u32>)),
        usize,
    > = std::collections::BTreeMap::new();
    for (col, op) in base_ops.iter().enumerate() {
        for (fi, field) in fields.iter().enumerate() {
            let comm = op.commutator(field);
            for (key, c) in &comm.terms {
                let row = *row_index
                    .entry((fi, key.clone()))
                    .or_insert_with(|| {
                        rows.push(vec![ScalarExpr::zero(); base_ops.len()]);
                        rows.len() - 1
                    });
                rows[row][col] = c.clone();
            }
        }
    }
    if rows.is_empty() {
        return base_ops;
    }
    let (kernel, _) = crate::matrix::Mat::from_rows(rows).kernel();
    kernel
        .into_iter()
        .map(|coeffs| {
            let mut op = DiffOperator::zero(vars.clone());
            for (c, base) in coeffs.iter().zip(&base_ops) {
                if !c.is_zero() {
                    op = &op + &base.scale(c);
                }
            }
            op
        })
        .collect()
}

fn multi_indices(arity: usize, max_total: u32) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let mut current = vec![0u32; arity];
    fn rec(
        pos: usize,
        remaining: u32,
        current: &mut Vec<u32>,
        out: &mut Vec<Vec<u32>>,
    ) {
        if pos == current.len() {
            out.push(current.clone());
            return;
        }
        for k in 0..=remaining {
            current[pos] = k;
            rec(pos + 1, remaining - k, current, out);
        }
        current[pos] = 0;
    }
    rec(0, max_total, &mut current, &mut out);
    out.sort();
    out
}

/// Data of the restriction map between a big orbit and the orbit of the
/// restricted functional on an ideal: in jump coordinates the pullback of a
/// symbol substitutes, for every jump coordinate of the small orbit, the
/// corresponding coordinate function of the big orbit.
#[derive(Clone, Debug)]
pub struct RestrictionMap {
    /// For each jump coordinate (position k) of the small orbit, the index
    /// it carries in the big algebra and its expression as a polynomial in
    /// the big orbit's jump coordinates.
    pub component_exprs: Vec<MultiPoly>,
}

/// Build the restriction map `ρ: big orbit → small orbit`, `ξ ↦ ξ|_h`,
/// expressed in jump coordinates. Requires the irreducible-restriction
/// conditions to hold (the restriction is then a polynomial diffeomorphism).
/// The ideal is assumed to be spanned by the first `dim h` basis vectors.
pub fn restriction_map(
    big: &CoadjointOrbit,
    small: &CoadjointOrbit,
    h_dim: usize,
) -> Result<RestrictionMap, WeylError> {
    // jump indices of the big orbit must lie inside the ideal
    if big.jump_set.iter().any(|&j| j >= h_dim) {
        return Err(WeylError::RestrictionNotBijective);
    }
    if big.jump_set.len() != small.jump_set.len() {
        return Err(WeylError::RestrictionNotBijective);
    }
    let component_exprs = small
        .jump_set
        .iter()
        .map(|&j| big.coordinate_function(j))
        .collect();
    Ok(RestrictionMap { component_exprs })
}

/// Pull a symbol on the small orbit back to the big orbit: `a ∘ ρ`.
pub fn pullback_symbol(a: &MultiPoly, rho: &RestrictionMap) -> MultiPoly {
    a.compose(&rho.component_exprs)
}

/// Verify the quantized restriction identity for one symbol: quantizing the
/// pullback in the big representation agrees with quantizing the symbol in
/// the restricted representation, as an exact operator identity.
pub fn verify_pullback(
    a: &MultiPoly,
    big_rep: &DRep,
    big_orbit: &CoadjointOrbit,
    small_rep: &DRep,
    small_orbit: &CoadjointOrbit,
    rho: &RestrictionMap,
) -> Result<bool, WeylError> {
    let lifted = pullback_symbol(a, rho);
    let lhs = quantize_poly(&lifted, big_rep, big_orbit)?;
    let rhs = quantize_poly(a, small_rep, small_orbit)?;
    Ok(lhs == rhs)
}

/// Formal-adjoint convention helper: a symbol with conjugation-invariant
/// coefficients quantizes to a formally self-adjoint operator.
pub fn is_real_symbol(a: &MultiPoly) -> bool {
    a.terms.values().all(|c| &c.conj() == c)
}

/// All coordinate symbols `y_j ↦ −i·dπ(X_j)` hold by construction; exposed
/// for reporting.
pub fn coordinate_quantization(
    rep: &DRep,
    orbit: &CoadjointOrbit,
    k: usize,
) -> Result<(MultiPoly, DiffOperator), WeylError> {
    let y = MultiPoly::var(orbit.jump_vars.clone(), k);
    let op = quantize_poly(&y, rep, orbit)?;
    Ok((y, op))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builtins;
    use crate::expr::parse_scalar as p;
    use crate::orbit::orbit_cross_section;
    use crate::rep::{induced_drep, vergne_polarization, CoordScaling};

    fn h3_setup() -> (DRep, CoadjointOrbit) {
        let g = builtins::heisenberg3();
        let xi = builtins::functional(&g, &[("X1", p("l").unwrap())]);
        let pol = vergne_polarization(&g, &xi).unwrap();
        let rep = induced_drep(&g, &pol, &xi, CoordScaling::Plain).unwrap();
        let orbit = orbit_cross_section(&g, &xi).unwrap();
        (rep, orbit)
    }

    #[test]
    fn constant_symbol_quantizes_to_identity() {
        let (rep, orbit) = h3_setup();
        let one = MultiPoly::constant(orbit.jump_vars.clone(), ScalarExpr::one());
        let op = quantize_poly(&one, &rep, &orbit).unwrap();
        assert_eq!(op, DiffOperator::identity(rep.vars.clone()));
    }

    #[test]
    fn linear_symbol_is_multiplication() {
        // Op(y2) = −i·dπ(X2) = l·t : multiplication by l t
        let (rep, orbit) = h3_setup();
        let y2 = MultiPoly::var(orbit.jump_vars.clone(), 0);
        let op = quantize_poly(&y2, &rep, &orbit).unwrap();
        let t = DiffOperator::coordinate(rep.vars.clone(), 0);
        assert_eq!(op, t.scale(&p("l").unwrap()));
    }

    #[test]
    fn quadratic_symbol_symmetrizes() {
        // Op(y2 y3) = −½(dπX2 dπX3 + dπX3 dπX2) = −i l (t ∂ + ½)
        let (rep, orbit) = h3_setup();
        let sym = crate::poly::poly_from_str("y2*y3", &["y2", "y3"]);
        let op = quantize_poly(&sym, &rep, &orbit).unwrap();
        let t = DiffOperator::coordinate(rep.vars.clone(), 0);
        let d = DiffOperator::derivative(rep.vars.clone(), 0);
        let half = DiffOperator::scalar(rep.vars.clone(), p("1/2").unwrap());
        let expected = (&(&t * &d) + &half).scale(&p("-i*l").unwrap());
        assert_eq!(op, expected);
    }

    #[test]
    fn arity_mismatch_rejected() {
        let (rep, orbit) = h3_setup();
        let bad = crate::poly::poly_from_str("y2", &["y2"]);
        assert!(matches!(
            quantize_poly(&bad, &rep, &orbit),
            Err(WeylError::ArityMismatch { .. })
        ));
    }

    #[test]
    fn real_symbols_quantize_self_adjoint() {
        let (rep, orbit) = h3_setup();
        for src in ["y2", "y3", "y2*y3", "y2^2 + 2*y3^2", "y2^2*y3"] {
            let sym = crate::poly::poly_from_str(src, &["y2", "y3"]);
            assert!(is_real_symbol(&sym));
            let op = quantize_poly(&sym, &rep, &orbit).unwrap();
            assert_eq!(op.adjoint(), op, "symbol {src} not self-adjoint");
        }
    }

    #[test]
    fn heisenberg_fields_are_constant_translations() {
        let (_, orbit) = h3_setup();
        let fields = coadjoint_vector_fields(&orbit);
        let vars = orbit.jump_vars.clone();
        // L_{X1} = 0, L_{X2} = l ∂_{y3}, L_{X3} = −l ∂_{y2}
        assert!(fields[0].is_zero());
        let d2 = DiffOperator::derivative(vars.clone(), 0);
        let d3 = DiffOperator::derivative(vars.clone(), 1);
        assert_eq!(fields[1], d3.scale(&p("l").unwrap()));
        assert_eq!(fields[2], d2.scale(&p("-l").unwrap()));
    }

    #[test]
    fn abelian_fields_vanish() {
        let g = builtins::abelian(3);
        let xi = builtins::functional(&g, &[("X1", p("c").unwrap())]);
        let orbit = orbit_cross_section(&g, &xi).unwrap();
        assert!(coadjoint_vector_fields(&orbit)
            .iter()
            .all(|f| f.is_zero()));
    }

    #[test]
    fn fields_anti_represent_the_bracket_on_pedersen_orbit() {
        let g = builtins::pedersen6();
        let xi =
            builtins::functional(&g, &[("X1", p("a").unwrap()), ("X6", p("b").unwrap())]);
        let orbit = orbit_cross_section(&g, &xi).unwrap();
        let fields = coadjoint_vector_fields(&orbit);
        for j in 0..6 {
            for k in 0..6 {
                let lhs = fields[j].commutator(&fields[k]);
                let br = g.bracket_basis(j, k);
                let mut rhs = DiffOperator::zero(orbit.jump_vars.clone());
                for (l, c) in br.iter().enumerate() {
                    if !c.is_zero() {
                        rhs = &rhs + &fields[l].scale(&-c);
                    }
                }
                assert_eq!(lhs, rhs, "pair ({j},{k})");
            }
        }
    }

    #[test]
    fn invariance_checks_on_translation_fields() {
        let (_, orbit) = h3_setup();
        let vars = orbit.jump_vars.clone();
        let d2 = DiffOperator::derivative(vars.clone(), 0);
        assert!(is_invariant_op(&d2, &orbit));
        let y2d2 = &DiffOperator::coordinate(vars.clone(), 0) * &d2;
        assert!(!is_invariant_op(&y2d2, &orbit));
        let c = DiffOperator::scalar(vars.clone(), p("3-i").unwrap());
        assert!(is_invariant_op(&c, &orbit));
    }

    #[test]
    fn invariant_operator_dimensions_on_flat_orbit() {
        let (_, orbit) = h3_setup();
        let order1 = find_invariant_ops(&orbit, 1, 0);
        assert_eq!(order1.len(), 3);
        let order2 = find_invariant_ops(&orbit, 2, 2);
        assert_eq!(order2.len(), 6);
        for op in order1.iter().chain(order2.iter()) {
            assert!(is_invariant_op(op, &orbit));
        }
    }

    #[test]
    fn point_orbit_admits_scalars_only() {
        let g = builtins::abelian(2);
        let xi = builtins::functional(&g, &[("X1", p("c").unwrap())]);
        let orbit = orbit_cross_section(&g, &xi).unwrap();
        let ops = find_invariant_ops(&orbit, 2, 2);
        assert_eq!(ops.len(), 1);
        assert!(ops[0].order() == 0 && ops[0].coeff_degree() == 0);
    }
}
