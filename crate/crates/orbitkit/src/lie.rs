//! Lie algebras from structure constants: validation (antisymmetry, Jacobi,
//! nilpotency), Jordan-Hölder bases, centers and central series, central
//! extensions by symplectic cocycles, (reduced) semidirect products,
//! symplectic derivations, and the unipotent stabilizer of a polarization.

use std::fmt;

use thiserror::Error;

use crate::matrix::{
    in_span, span_basis, standard_basis_vector, Assumptions, Mat,
};
use crate::poly::MultiPoly;
use crate::scalar::ScalarExpr;

pub type Vector = Vec<ScalarExpr>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LieError {
    #[error("antisymmetry violated at bracket [{j}, {k}]")]
    Antisymmetry { j: usize, k: usize },
    #[error("Jacobi identity violated on basis triple ({j}, {k}, {l})")]
    JacobiViolation { j: usize, k: usize, l: usize },
    #[error("algebra is not nilpotent: lower central series stabilizes at dimension {stable_dim}")]
    NotNilpotent { stable_dim: usize },
    #[error("2-cocycle identity violated on basis triple ({x}, {y}, {z})")]
    CocycleViolation { x: usize, y: usize, z: usize },
    #[error("bilinear form is degenerate (generic rank {rank} < {dim})")]
    Degenerate { rank: usize, dim: usize },
    #[error("form is not skew-symmetric at ({j}, {k})")]
    NotSkew { j: usize, k: usize },
    #[error("action generator {index} is not a derivation (fails at bracket [{j}, {k}])")]
    NotDerivation { index: usize, j: usize, k: usize },
    #[error("action is not a Lie algebra homomorphism on generators ({i}, {j})")]
    NotHomomorphism { i: usize, j: usize },
    #[error("reduced product requires 1-dimensional centers (got {left} and {right})")]
    CentersNotShared { left: usize, right: usize },
    #[error("not a polarization: {0}")]
    NotPolarization(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("vectors do not span a subalgebra (bracket ({j}, {k}) escapes the span)")]
    NotSubalgebra { j: usize, k: usize },
}

/// Nilpotent Lie algebra presented by structure constants on a named basis.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct LieAlgebra {
    pub names: Vec<String>,
    /// Full bracket table: `table[j][k]` = coordinates of `[X_j, X_k]`.
    table: Vec<Vec<Vector>>,
    /// Nilpotency step (length of the lower central series).
    pub step: usize,
    /// Genericity assumptions recorded during validation.
    pub assumptions: Assumptions,
}

impl LieAlgebra {
    /// Validate a structure-constant table and build the algebra.
    ///
    /// Checks, in order: antisymmetry, the Jacobi identity (exactly, in the
    /// parameters), and nilpotency of the lower central series.
    pub fn validate(names: Vec<String>, table: Vec<Vec<Vector>>) -> Result<Self, LieError> {
        let m = names.len();
        assert_eq!(table.len(), m, "table must be square");
        for row in &table {
            assert_eq!(row.len(), m, "table must be square");
            for v in row {
                assert_eq!(v.len(), m, "bracket coordinates must have arity {m}");
            }
        }
        for j in 0..m {
            for k in j..m {
                for l in 0..m {
                    let sum = &table[j][k][l] + &table[k][j][l];
                    if !sum.is_zero() {
                        return Err(LieError::Antisymmetry { j, k });
                    }
                }
            }
        }
        let mut alg = LieAlgebra {
            names,
            table,
            step: 0,
            assumptions: Assumptions::new(),
        };
        for j in 0..m {
            for k in (j + 1)..m {
                for l in (k + 1)..m {
                    let mut sum = alg.bracket(&alg.table[j][k].clone(), &alg.basis_vector(l));
                    let t2 = alg.bracket(&alg.table[k][l].clone(), &alg.basis_vector(j));
                    let t3 = alg.bracket(&alg.table[l][j].clone(), &alg.basis_vector(k));
                    for i in 0..m {
                        sum[i] = &(&sum[i] + &t2[i]) + &t3[i];
                    }
                    if sum.iter().any(|x| !x.is_zero()) {
                        return Err(LieError::JacobiViolation { j, k, l });
                    }
                }
            }
        }
        let (series, assumptions) = alg.lower_central_series();
        alg.assumptions = assumptions;
        if !series.last().map(|b| b.is_empty()).unwrap_or(false) {
            return Err(LieError::NotNilpotent {
                stable_dim: series.last().map(|b| b.len()).unwrap_or(0),
            });
        }
        alg.step = series.len() - 1;
        Ok(alg)
    }

    /// Build from a sparse bracket list `[(j, k, coords)]` with `j > k`
    /// entries implied by antisymmetry.
    pub fn from_sparse(
        names: Vec<String>,
        brackets: &[(usize, usize, Vector)],
    ) -> Result<Self, LieError> {
        let m = names.len();
        let mut table = vec![vec![vec![ScalarExpr::zero(); m]; m]; m];
        for (j, k, v) in brackets {
            table[*j][*k] = v.clone();
            table[*k][*j] = v.iter().map(|x| -x).collect();
        }
        Self::validate(names, table)
    }

    pub fn dim(&self) -> usize {
        self.names.len()
    }

    pub fn basis_vector(&self, i: usize) -> Vector {
        standard_basis_vector(self.dim(), i)
    }

    pub fn basis_vectors(&self) -> Vec<Vector> {
        (0..self.dim()).map(|i| self.basis_vector(i)).collect()
    }

    pub fn bracket_basis(&self, j: usize, k: usize) -> &Vector {
        &self.table[j][k]
    }

    /// Bracket of two coordinate vectors.
    pub fn bracket(&self, v: &[ScalarExpr], w: &[ScalarExpr]) -> Vector {
        let m = self.dim();
        let mut out = vec![ScalarExpr::zero(); m];
        for j in 0..m {
            if v[j].is_zero() {
                continue;
            }
            for k in 0..m {
                if w[k].is_zero() {
                    continue;
                }
                let scale = &v[j] * &w[k];
                for l in 0..m {
                    let c = &self.table[j][k][l];
                    if !c.is_zero() {
                        out[l] = &out[l] + &(c * &scale);
                    }
                }
            }
        }
        out
    }

    /// Bracket of vectors with polynomial entries (shared variable set).
    pub fn bracket_poly(&self, v: &[MultiPoly], w: &[MultiPoly]) -> Vec<MultiPoly> {
        let m = self.dim();
        let vars = v[0].vars.clone();
        let mut out = vec![MultiPoly::zero(vars.clone()); m];
        for j in 0..m {
            if v[j].is_zero() {
                continue;
            }
            for k in 0..m {
                if w[k].is_zero() {
                    continue;
                }
                let scale = &v[j] * &w[k];
                for l in 0..m {
                    let c = &self.table[j][k][l];
                    if !c.is_zero() {
                        out[l] = &out[l] + &scale.scale(c);
                    }
                }
            }
        }
        out
    }

    /// Matrix of `ad(v)`: column `k` holds the coordinates of `[v, X_k]`.
    pub fn ad_matrix(&self, v: &[ScalarExpr]) -> Mat {
        let m = self.dim();
        let mut out = Mat::zeros(m, m);
        for k in 0..m {
            let col = self.bracket(v, &self.basis_vector(k));
            for (l, value) in col.into_iter().enumerate() {
                *out.at_mut(l, k) = value;
            }
        }
        out
    }

    /// Lower central series bases `γ1 ⊇ γ2 ⊇ ...` until stabilization.
    pub fn lower_central_series(&self) -> (Vec<Vec<Vector>>, Assumptions) {
        let mut assumptions = Assumptions::new();
        let mut series = vec![self.basis_vectors()];
        loop {
            let current = series.last().unwrap();
            if current.is_empty() {
                break;
            }
            let mut generated = Vec::new();
            for j in 0..self.dim() {
                for b in current {
                    generated.push(self.bracket(&self.basis_vector(j), b));
                }
            }
            let (basis, asm) = span_basis(&generated);
            assumptions.merge(&asm);
            if basis.len() == current.len() {
                // stabilized without reaching zero
                series.push(basis);
                break;
            }
            let empty = basis.is_empty();
            series.push(basis);
            if empty {
                break;
            }
        }
        (series, assumptions)
    }

    /// Exact basis of the center.
    pub fn center(&self) -> (Vec<Vector>, Assumptions) {
        let m = self.dim();
        let mut rows = Vec::with_capacity(m * m);
        for k in 0..m {
            for l in 0..m {
                let row: Vector = (0..m).map(|j| self.table[j][k][l].clone()).collect();
                rows.push(row);
            }
        }
        Mat::from_rows(rows).kernel()
    }

    /// Does the identity basis order satisfy `[g, g_j] ⊆ g_{j-1}`?
    pub fn order_is_jordan_holder(&self, order: &[usize]) -> (bool, Assumptions) {
        let m = self.dim();
        assert_eq!(order.len(), m);
        let mut assumptions = Assumptions::new();
        for j in 1..=m {
            let gj_prev: Vec<Vector> = order[..j - 1]
                .iter()
                .map(|&i| self.basis_vector(i))
                .collect();
            for i in 0..m {
                let b = self.bracket(&self.basis_vector(i), &self.basis_vector(order[j - 1]));
                if b.iter().all(|x| x.is_zero()) {
                    continue;
                }
                let (ok, asm) = in_span(&gj_prev, &b);
                assumptions.merge(&asm);
                if !ok {
                    return (false, assumptions);
                }
            }
        }
        (true, assumptions)
    }

    /// Express the algebra in a new basis (rows of `basis`, in old coordinates).
    pub fn change_basis(
        &self,
        basis: &[Vector],
        names: Vec<String>,
    ) -> Result<LieAlgebra, LieError> {
        let m = self.dim();
        assert_eq!(basis.len(), m);
        let b_t = Mat::from_rows(basis.to_vec()).transpose();
        let (inv, _) = b_t.inverse();
        let inv = inv.ok_or_else(|| {
            LieError::DimensionMismatch("proposed basis is singular".to_string())
        })?;
        let mut table = vec![vec![vec![ScalarExpr::zero(); m]; m]; m];
        for j in 0..m {
            for k in 0..m {
                let br = self.bracket(&basis[j], &basis[k]);
                table[j][k] = inv.apply(&br);
            }
        }
        LieAlgebra::validate(names, table)
    }

    /// Restrict to a subalgebra spanned by the given vectors; structure
    /// constants are expressed in that basis.
    pub fn subalgebra(
        &self,
        basis: &[Vector],
        names: Vec<String>,
    ) -> Result<LieAlgebra, LieError> {
        let k = basis.len();
        let v_t = Mat::from_rows(basis.to_vec()).transpose();
        let mut table = vec![vec![vec![ScalarExpr::zero(); k]; k]; k];
        for i in 0..k {
            for j in 0..k {
                let br = self.bracket(&basis[i], &basis[j]);
                let (coords, _) = v_t.solve(&br);
                match coords {
                    Some(c) => table[i][j] = c,
                    None => return Err(LieError::NotSubalgebra { j: i, k: j }),
                }
            }
        }
        LieAlgebra::validate(names, table)
    }

    /// Is the given span an ideal?
    pub fn is_ideal(&self, basis: &[Vector]) -> (bool, Assumptions) {
        let mut assumptions = Assumptions::new();
        for j in 0..self.dim() {
            for v in basis {
                let b = self.bracket(&self.basis_vector(j), v);
                let (ok, asm) = in_span(basis, &b);
                assumptions.merge(&asm);
                if !ok {
                    return (false, assumptions);
                }
            }
        }
        (true, assumptions)
    }
}

/// Result of a Jordan-Hölder basis computation.
#[derive(Clone, Debug)]
pub struct JordanHolder {
    /// New basis vectors in the original coordinates.
    pub basis: Vec<Vector>,
    /// The algebra expressed in the new basis.
    pub algebra: LieAlgebra,
    /// True when the preferred order was already Jordan-Hölder and was kept.
    pub unchanged: bool,
    pub assumptions: Assumptions,
}

/// Compute a Jordan-Hölder basis. When `preferred` (a basis order) already
/// satisfies the flag condition it is returned unchanged; otherwise the lower
/// central series is refined, keeping the preferred vector order inside each
/// layer (ties broken by lowest original index).
pub fn jordan_holder_basis(
    g: &LieAlgebra,
    preferred: Option<&[usize]>,
) -> Result<JordanHolder, LieError> {
    let m = g.dim();
    let identity: Vec<usize> = (0..m).collect();
    let pref: Vec<usize> = preferred.map(|p| p.to_vec()).unwrap_or(identity);
    assert_eq!(pref.len(), m, "preferred order must list every basis index");

    let (ok, mut assumptions) = g.order_is_jordan_holder(&pref);
    if ok {
        let basis: Vec<Vector> = pref.iter().map(|&i| g.basis_vector(i)).collect();
        let names: Vec<String> = pref.iter().map(|&i| g.names[i].clone()).collect();
        let algebra = g.change_basis(&basis, names)?;
        return Ok(JordanHolder {
            basis,
            algebra,
            unchanged: preferred.is_none() || pref == (0..m).collect::<Vec<_>>(),
            assumptions,
        });
    }

    let (series, asm) = g.lower_central_series();
    assumptions.merge(&asm);
    // Ascending chain 0 = A_0 ⊆ A_1 ⊆ ... ⊆ A_step = g with [g, A_i] ⊆ A_{i-1}.
    let chain: Vec<Vec<Vector>> = series.into_iter().rev().collect();
    let basis = extend_through_chain(g, &pref, &chain, &mut assumptions);
    let names: Vec<String> = (1..=m).map(|i| format!("Y{}", i)).collect();
    let algebra = g.change_basis(&basis, names)?;
    let (check, asm2) = algebra.order_is_jordan_holder(&(0..m).collect::<Vec<_>>());
    assumptions.merge(&asm2);
    debug_assert!(check, "constructed basis must satisfy the flag condition");
    Ok(JordanHolder {
        basis,
        algebra,
        unchanged: false,
        assumptions,
    })
}

/// Jordan-Hölder basis whose flag passes exactly through the ideal `h` at
/// position `dim h`.
pub fn jordan_holder_through(
    g: &LieAlgebra,
    h_basis: &[Vector],
) -> Result<JordanHolder, LieError> {
    let m = g.dim();
    let mut assumptions = Assumptions::new();
    let (is_ideal, asm) = g.is_ideal(h_basis);
    assumptions.merge(&asm);
    if !is_ideal {
        return Err(LieError::DimensionMismatch(
            "flag construction requires an ideal".to_string(),
        ));
    }
    let (series, asm) = g.lower_central_series();
    assumptions.merge(&asm);
    let ascending: Vec<Vec<Vector>> = series.into_iter().rev().collect();
    // Chain: (A_i ∩ h) up to h, then (h + A_i) up to g.
    let mut chain: Vec<Vec<Vector>> = Vec::new();
    for a in &ascending {
        let (inter, asm) = crate::matrix::span_intersection(a, h_basis);
        assumptions.merge(&asm);
        chain.push(inter);
    }
    for a in &ascending {
        let mut joined = h_basis.to_vec();
        joined.extend(a.iter().cloned());
        let (basis, asm) = span_basis(&joined);
        assumptions.merge(&asm);
        chain.push(basis);
    }
    let pref: Vec<usize> = (0..m).collect();
    let basis = extend_through_chain(g, &pref, &chain, &mut assumptions);
    let names: Vec<String> = (1..=m).map(|i| format!("Y{}", i)).collect();
    let algebra = g.change_basis(&basis, names)?;
    Ok(JordanHolder {
        basis,
        algebra,
        unchanged: false,
        assumptions,
    })
}

fn extend_through_chain(
    g: &LieAlgebra,
    pref: &[usize],
    chain: &[Vec<Vector>],
    assumptions: &mut Assumptions,
) -> Vec<Vector> {
    let mut basis: Vec<Vector> = Vec::new();
    for layer in chain {
        // Prefer original basis vectors lying in this chain member.
        for &i in pref {
            if basis.len() >= g.dim() {
                break;
            }
            let v = g.basis_vector(i);
            let (inside, asm) = in_span(layer, &v);
            assumptions.merge(&asm);
            if !inside {
                continue;
            }
            let (dependent, asm) = in_span(&basis, &v);
            assumptions.merge(&asm);
            if !dependent {
                basis.push(v);
            }
        }
        // Fill any remaining directions of the layer from its own basis.
        for v in layer {
            let (dependent, asm) = in_span(&basis, v);
            assumptions.merge(&asm);
            if !dependent {
                basis.push(v.clone());
            }
        }
    }
    debug_assert_eq!(basis.len(), g.dim());
    basis
}

/// Validation report for a candidate symplectic form.
pub fn check_symplectic_form(omega: &Mat, g0: &LieAlgebra) -> Result<Assumptions, LieError> {
    let m = g0.dim();
    assert_eq!((omega.rows, omega.cols), (m, m));
    for j in 0..m {
        for k in j..m {
            let sum = &*omega.at(j, k) + omega.at(k, j);
            if !sum.is_zero() {
                return Err(LieError::NotSkew { j, k });
            }
        }
    }
    // 2-cocycle identity on basis triples:
    // ω(x,[y,z]) + ω(y,[z,x]) + ω(z,[x,y]) = 0.
    let pairing = |x: &Vector, y: &Vector| -> ScalarExpr {
        let mut acc = ScalarExpr::zero();
        for j in 0..m {
            if x[j].is_zero() {
                continue;
            }
            for k in 0..m {
                if !y[k].is_zero() && !omega.at(j, k).is_zero() {
                    acc = &acc + &(&(&x[j] * &y[k]) * omega.at(j, k));
                }
            }
        }
        acc
    };
    for x in 0..m {
        for y in (x + 1)..m {
            for z in (y + 1)..m {
                let ex = g0.basis_vector(x);
                let ey = g0.basis_vector(y);
                let ez = g0.basis_vector(z);
                let s = &(&pairing(&ex, &g0.bracket(&ey, &ez))
                    + &pairing(&ey, &g0.bracket(&ez, &ex)))
                    + &pairing(&ez, &g0.bracket(&ex, &ey));
                if !s.is_zero() {
                    return Err(LieError::CocycleViolation { x, y, z });
                }
            }
        }
    }
    let (rank, assumptions) = omega.rank();
    if rank < m {
        return Err(LieError::Degenerate { rank, dim: m });
    }
    Ok(assumptions)
}

/// 1-dimensional central extension of `g0` by the symplectic cocycle `omega`.
/// The new central generator is placed first.
pub fn central_extension(
    g0: &LieAlgebra,
    omega: &Mat,
    z_name: &str,
) -> Result<LieAlgebra, LieError> {
    check_symplectic_form(omega, g0)?;
    let m = g0.dim();
    let n = m + 1;
    let mut names = vec![z_name.to_string()];
    names.extend(g0.names.iter().cloned());
    let mut table = vec![vec![vec![ScalarExpr::zero(); n]; n]; n];
    for j in 0..m {
        for k in 0..m {
            // [(0,x_j),(0,x_k)] = (ω(x_j,x_k), [x_j,x_k])
            table[j + 1][k + 1][0] = omega.at(j, k).clone();
            for l in 0..m {
                table[j + 1][k + 1][l + 1] = g0.bracket_basis(j, k)[l].clone();
            }
        }
    }
    LieAlgebra::validate(names, table)
}

/// Witness that a matrix is a derivation: `None` when it is, otherwise the
/// first failing bracket pair.
pub fn derivation_witness(d: &Mat, g: &LieAlgebra) -> Option<(usize, usize)> {
    let m = g.dim();
    for j in 0..m {
        for k in (j + 1)..m {
            let lhs = d.apply(g.bracket_basis(j, k));
            let dj = d.apply(&g.basis_vector(j));
            let dk = d.apply(&g.basis_vector(k));
            let rhs1 = g.bracket(&dj, &g.basis_vector(k));
            let rhs2 = g.bracket(&g.basis_vector(j), &dk);
            for l in 0..m {
                let diff = &(&lhs[l] - &rhs1[l]) - &rhs2[l];
                if !diff.is_zero() {
                    return Some((j, k));
                }
            }
        }
    }
    None
}

/// Semidirect product `s ⋉ g` for an action of `s` by derivations of `g`.
///
/// `action[i]` is the matrix on `g` of the `i`-th basis element of `s`. The
/// action must be a Lie algebra homomorphism into derivations; both halves
/// are checked. The result carries the `g` basis first, then the `s` basis.
pub fn semidirect_product(
    s: &LieAlgebra,
    g: &LieAlgebra,
    action: &[Mat],
) -> Result<LieAlgebra, LieError> {
    let ds = s.dim();
    let dg = g.dim();
    assert_eq!(action.len(), ds, "one action matrix per s generator");
    for (i, d) in action.iter().enumerate() {
        if let Some((j, k)) = derivation_witness(d, g) {
            return Err(LieError::NotDerivation { index: i, j, k });
        }
    }
    // action([d_i, d_j]_s) = action(d_i) action(d_j) − action(d_j) action(d_i)
    for i in 0..ds {
        for j in (i + 1)..ds {
            let lhs_coords = s.bracket_basis(i, j);
            let mut lhs = Mat::zeros(dg, dg);
            for (k, c) in lhs_coords.iter().enumerate() {
                if !c.is_zero() {
                    lhs = lhs.add(&action[k].scale(c));
                }
            }
            let rhs = action[i].mul(&action[j]).add(&action[j].mul(&action[i]).neg());
            if lhs != rhs {
                return Err(LieError::NotHomomorphism { i, j });
            }
        }
    }
    let n = dg + ds;
    let mut names = g.names.clone();
    names.extend(s.names.iter().cloned());
    let mut table = vec![vec![vec![ScalarExpr::zero(); n]; n]; n];
    for j in 0..dg {
        for k in 0..dg {
            for l in 0..dg {
                table[j][k][l] = g.bracket_basis(j, k)[l].clone();
            }
        }
    }
    for i in 0..ds {
        for k in 0..dg {
            // [D_i, x_k] = D_i(x_k)
            let col = action[i].apply(&g.basis_vector(k));
            for l in 0..dg {
                table[dg + i][k][l] = col[l].clone();
                table[k][dg + i][l] = -&col[l];
            }
        }
        for j in 0..ds {
            for l in 0..ds {
                table[dg + i][dg + j][dg + l] = s.bracket_basis(i, j)[l].clone();
            }
        }
    }
    LieAlgebra::validate(names, table)
}

/// Data shared by the reduced product constructors: a normalized central
/// generator and a complement of basis vectors.
fn center_and_complement(
    k: &LieAlgebra,
) -> Result<(Vector, Vec<usize>, Assumptions), LieError> {
    let (center, assumptions) = k.center();
    if center.len() != 1 {
        return Err(LieError::CentersNotShared {
            left: center.len(),
            right: center.len(),
        });
    }
    let z = {
        let v = &center[0];
        let lead = v.iter().find(|x| !x.is_zero()).unwrap().clone();
        v.iter().map(|x| x / &lead).collect::<Vector>()
    };
    let mut complement = Vec::new();
    let mut current = vec![z.clone()];
    let mut asm = assumptions.clone();
    for i in 0..k.dim() {
        let v = k.basis_vector(i);
        let (dependent, a) = in_span(&current, &v);
        asm.merge(&a);
        if !dependent {
            complement.push(i);
            current.push(v);
        }
    }
    Ok((z, complement, asm))
}

/// Reduced direct product of two algebras with 1-dimensional centers: the
/// centers are identified and the complements commute.
pub fn reduced_direct_product(
    k1: &LieAlgebra,
    k2: &LieAlgebra,
) -> Result<LieAlgebra, LieError> {
    let (c1, _) = k1.center();
    let (c2, _) = k2.center();
    if c1.len() != 1 || c2.len() != 1 {
        return Err(LieError::CentersNotShared {
            left: c1.len(),
            right: c2.len(),
        });
    }
    reduced_semidirect_product(k1, k2, None)
}

/// Reduced semidirect product `k1 ⋊̃ k2` of algebras sharing a 1-dimensional
/// center. `action[i]`, when given, is the derivation of `k1` by which the
/// `i`-th basis element of `k2` acts; it must kill both centers' identified
/// line. `None` means the trivial action (reduced direct product).
pub fn reduced_semidirect_product(
    k1: &LieAlgebra,
    k2: &LieAlgebra,
    action: Option<&[Mat]>,
) -> Result<LieAlgebra, LieError> {
    let (z1, comp1, asm1) = center_and_complement(k1)?;
    let (z2, comp2, asm2) = center_and_complement(k2)?;
    let _ = (asm1, asm2);
    if let Some(mats) = action {
        assert_eq!(mats.len(), k2.dim());
        for (i, d) in mats.iter().enumerate() {
            if let Some((j, k)) = derivation_witness(d, k1) {
                return Err(LieError::NotDerivation { index: i, j, k });
            }
            if d.apply(&z1).iter().any(|x| !x.is_zero()) {
                return Err(LieError::NotDerivation {
                    index: i,
                    j: 0,
                    k: 0,
                });
            }
        }
        // the shared center must act trivially
        let mut z2_action = Mat::zeros(k1.dim(), k1.dim());
        for (i, c) in z2.iter().enumerate() {
            if !c.is_zero() {
                z2_action = z2_action.add(&mats[i].scale(c));
            }
        }
        if !z2_action.is_zero() {
            return Err(LieError::NotHomomorphism { i: 0, j: 0 });
        }
    }

    let n = 1 + comp1.len() + comp2.len();
    let names: Vec<String> = (1..=n).map(|i| format!("X{}", i)).collect();

    // Express an element of k_i in the adapted basis (z, complement...).
    let adapt = |k: &LieAlgebra, z: &Vector, comp: &[usize]| -> Mat {
        let mut rows = vec![z.clone()];
        for &i in comp {
            rows.push(k.basis_vector(i));
        }
        let (inv, _) = Mat::from_rows(rows).transpose().inverse();
        inv.expect("adapted basis is invertible")
    };
    let a1 = adapt(k1, &z1, &comp1);
    let a2 = adapt(k2, &z2, &comp2);

    let mut table = vec![vec![vec![ScalarExpr::zero(); n]; n]; n];
    let set = |table: &mut Vec<Vec<Vector>>, j: usize, k: usize, coords: Vector| {
        for (l, c) in coords.into_iter().enumerate() {
            table[j][k][l] = c.clone();
            table[k][j][l] = -&c;
        }
    };
    // brackets within k1's complement
    for (a, &ia) in comp1.iter().enumerate() {
        for (b, &ib) in comp1.iter().enumerate() {
            if ia >= ib {
                continue;
            }
            let br = k1.bracket_basis(ia, ib);
            let adapted = a1.apply(br);
            let mut coords = vec![ScalarExpr::zero(); n];
            coords[0] = adapted[0].clone();
            for (c, value) in adapted.iter().skip(1).enumerate() {
                coords[1 + c] = value.clone();
            }
            set(&mut table, 1 + a, 1 + b, coords);
        }
    }
    // brackets within k2's complement
    let off = 1 + comp1.len();
    for (a, &ia) in comp2.iter().enumerate() {
        for (b, &ib) in comp2.iter().enumerate() {
            if ia >= ib {
                continue;
            }
            let br = k2.bracket_basis(ia, ib);
            let adapted = a2.apply(br);
            let mut coords = vec![ScalarExpr::zero(); n];
            coords[0] = adapted[0].clone();
            for (c, value) in adapted.iter().skip(1).enumerate() {
                coords[off + c] = value.clone();
            }
            set(&mut table, off + a, off + b, coords);
        }
    }
    // cross brackets: action of k2 complement on k1 complement
    if let Some(mats) = action {
        for (b, &ib) in comp2.iter().enumerate() {
            for (a, &ia) in comp1.iter().enumerate() {
                let image = mats[ib].apply(&k1.basis_vector(ia));
                let adapted = a1.apply(&image);
                let mut coords = vec![ScalarExpr::zero(); n];
                coords[0] = adapted[0].clone();
                for (c, value) in adapted.iter().skip(1).enumerate() {
                    coords[1 + c] = value.clone();
                }
                set(&mut table, off + b, 1 + a, coords);
            }
        }
    }
    LieAlgebra::validate(names, table)
}

/// Itemized report for a symplectic-derivation candidate.
#[derive(Clone, Debug)]
pub struct SymplecticDerivationReport {
    /// `None` = passes; otherwise the first failing bracket pair.
    pub derivation_failure: Option<(usize, usize)>,
    /// `None` = passes; otherwise a failing matrix position of `JD + DᵀJ`.
    pub symplectic_failure: Option<(usize, usize)>,
    /// `Some(q)` when `D^q = 0` exactly (smallest such q); `None` otherwise.
    pub nilpotency_index: Option<usize>,
}

impl SymplecticDerivationReport {
    pub fn all_pass(&self) -> bool {
        self.derivation_failure.is_none()
            && self.symplectic_failure.is_none()
            && self.nilpotency_index.is_some()
    }
}

pub fn check_symplectic_derivation(
    d: &Mat,
    omega: &Mat,
    g0: &LieAlgebra,
) -> SymplecticDerivationReport {
    let m = g0.dim();
    assert_eq!((d.rows, d.cols), (m, m));
    let derivation_failure = derivation_witness(d, g0);
    let jd = omega.mul(d);
    let dtj = d.transpose().mul(omega);
    let sum = jd.add(&dtj);
    let mut symplectic_failure = None;
    'outer: for i in 0..m {
        for j in 0..m {
            if !sum.at(i, j).is_zero() {
                symplectic_failure = Some((i, j));
                break 'outer;
            }
        }
    }
    let mut nilpotency_index = None;
    let mut power = Mat::identity(m);
    for q in 1..=(m + 1) {
        power = power.mul(d);
        if power.is_zero() {
            nilpotency_index = Some(q);
            break;
        }
    }
    SymplecticDerivationReport {
        derivation_failure,
        symplectic_failure,
        nilpotency_index,
    }
}

/// Exponential of a nilpotent matrix, exact.
pub fn exp_nilpotent(d: &Mat) -> Mat {
    let n = d.rows;
    let mut out = Mat::identity(n);
    let mut term = Mat::identity(n);
    let mut k = 1i64;
    loop {
        term = term.mul(d).scale(&ScalarExpr::from_rat(1, k));
        if term.is_zero() {
            return out;
        }
        out = out.add(&term);
        k += 1;
        assert!(k <= n as i64 + 2, "matrix is not nilpotent");
    }
}

/// The Lie algebra of the unipotent stabilizer of a polarization: symplectic
/// derivations of `(g0, ω)` vanishing on `p`.
#[derive(Clone, Debug)]
pub struct StabilizerSp {
    /// Basis of the solution space, as matrices on `g0`.
    pub generators: Vec<Mat>,
    pub assumptions: Assumptions,
}

pub fn build_sp(
    g0: &LieAlgebra,
    omega: &Mat,
    p_basis: &[Vector],
) -> Result<StabilizerSp, LieError> {
    let m = g0.dim();
    // polarization checks: subalgebra, isotropic, half-dimensional
    if 2 * p_basis.len() != m {
        return Err(LieError::NotPolarization(format!(
            "dim p = {} but dim g0 = {}",
            p_basis.len(),
            m
        )));
    }
    for (i, u) in p_basis.iter().enumerate() {
        for (j, v) in p_basis.iter().enumerate() {
            let br = g0.bracket(u, v);
            let (inside, _) = in_span(p_basis, &br);
            if !inside {
                return Err(LieError::NotPolarization(format!(
                    "not a subalgebra: bracket of p-vectors {i}, {j} leaves p"
                )));
            }
            let mut val = ScalarExpr::zero();
            for a in 0..m {
                for b in 0..m {
                    if !u[a].is_zero() && !v[b].is_zero() && !omega.at(a, b).is_zero() {
                        val = &val + &(&(&u[a] * &v[b]) * omega.at(a, b));
                    }
                }
            }
            if !val.is_zero() {
                return Err(LieError::NotPolarization(format!(
                    "omega does not vanish on p at pair ({i}, {j})"
                )));
            }
        }
    }
    // Unknown matrix D (m² entries); linear conditions:
    //   derivation identity, symplectic identity, D p = 0.
    let unknowns = m * m; // D[r][c] at index r*m + c
    let mut rows: Vec<Vector> = Vec::new();
    // derivation: D [e_j,e_k] − [D e_j, e_k] − [e_j, D e_k] = 0 (coordinate l)
    for j in 0..m {
        for k in (j + 1)..m {
            let br = g0.bracket_basis(j, k).clone();
            for l in 0..m {
                let mut row = vec![ScalarExpr::zero(); unknowns];
                // (D br)_l = Σ_c D[l][c] br_c
                for (c, v) in br.iter().enumerate() {
                    if !v.is_zero() {
                        row[l * m + c] = &row[l * m + c] + v;
                    }
                }
                // ([D e_j, e_k])_l = Σ_r D[r][j] c_{r,k}^l
                for r in 0..m {
                    let c1 = &g0.bracket_basis(r, k)[l];
                    if !c1.is_zero() {
                        row[r * m + j] = &row[r * m + j] - c1;
                    }
                    let c2 = &g0.bracket_basis(j, r)[l];
                    if !c2.is_zero() {
                        row[r * m + k] = &row[r * m + k] - c2;
                    }
                }
                rows.push(row);
            }
        }
    }
    // symplectic: (J D + Dᵀ J)[a][b] = Σ_r J[a][r] D[r][b] + Σ_r D[r][a] J[r][b]
    for a in 0..m {
        for b in 0..m {
            let mut row = vec![ScalarExpr::zero(); unknowns];
            for r in 0..m {
                let jar = omega.at(a, r);
                if !jar.is_zero() {
                    row[r * m + b] = &row[r * m + b] + jar;
                }
                let jrb = omega.at(r, b);
                if !jrb.is_zero() {
                    row[r * m + a] = &row[r * m + a] + jrb;
                }
            }
            rows.push(row);
        }
    }
    // D p = 0
    for v in p_basis {
        for r in 0..m {
            let mut row = vec![ScalarExpr::zero(); unknowns];
            for (c, x) in v.iter().enumerate() {
                if !x.is_zero() {
                    row[r * m + c] = x.clone();
                }
            }
            rows.push(row);
        }
    }
    let (kernel, assumptions) = Mat::from_rows(rows).kernel();
    let generators: Vec<Mat> = kernel
        .into_iter()
        .map(|flat| {
            let mut d = Mat::zeros(m, m);
            for r in 0..m {
                for c in 0..m {
                    *d.at_mut(r, c) = flat[r * m + c].clone();
                }
            }
            d
        })
        .collect();
    Ok(StabilizerSp {
        generators,
        assumptions,
    })
}

impl fmt::Display for LieAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "dim {}", self.dim())?;
        writeln!(f, "basis {}", self.names.join(" "))?;
        for j in (0..self.dim()).rev() {
            for k in (0..j).rev() {
                let v = self.bracket_basis(j, k);
                if v.iter().all(|x| x.is_zero()) {
                    continue;
                }
                let terms: Vec<String> = v
                    .iter()
                    .enumerate()
                    .filter(|(_, c)| !c.is_zero())
                    .map(|(l, c)| {
                        if c.is_one() {
                            self.names[l].clone()
                        } else {
                            format!("({})*{}", c, self.names[l])
                        }
                    })
                    .collect();
                writeln!(
                    f,
                    "[{},{}] = {}",
                    self.names[j],
                    self.names[k],
                    terms.join(" + ")
                )?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builtins;
    use crate::expr::parse_scalar as p;
    use crate::matrix::span_eq;

    #[test]
    fn heisenberg_is_two_step() {
        let h3 = builtins::heisenberg3();
        assert_eq!(h3.step, 2);
        let (center, _) = h3.center();
        assert_eq!(center.len(), 1);
    }

    #[test]
    fn pedersen6_is_valid_with_one_dimensional_center() {
        let g = builtins::pedersen6();
        assert_eq!(g.dim(), 6);
        let (center, _) = g.center();
        assert_eq!(center.len(), 1);
        let (ok, _) = span_eq(&center, &[g.basis_vector(0)]);
        assert!(ok);
    }

    #[test]
    fn non_nilpotent_table_rejected() {
        // [X3, X2] = X3 forces a nonzero eigenvalue of ad X2.
        let names: Vec<String> = ["X1", "X2", "X3"].iter().map(|s| s.to_string()).collect();
        let mut v = vec![ScalarExpr::zero(); 3];
        v[2] = ScalarExpr::one();
        let err = LieAlgebra::from_sparse(names, &[(2, 1, v)]).unwrap_err();
        assert!(matches!(err, LieError::NotNilpotent { .. }));
    }

    #[test]
    fn jacobi_violation_detected() {
        // [X3,X2] = X1, [X4,X3] = X2, [X4,X2] = X3 fails Jacobi on (2,3,4).
        let names: Vec<String> = ["X1", "X2", "X3", "X4"].iter().map(|s| s.to_string()).collect();
        let e = |i: usize| standard_basis_vector(4, i);
        let err = LieAlgebra::from_sparse(
            names,
            &[(2, 1, e(0)), (3, 2, e(1)), (3, 1, e(2))],
        )
        .unwrap_err();
        assert!(matches!(
            err,
            LieError::JacobiViolation { .. } | LieError::NotNilpotent { .. }
        ));
    }

    #[test]
    fn jordan_holder_keeps_adapted_order() {
        let g = builtins::pedersen6();
        let jh = jordan_holder_basis(&g, None).unwrap();
        assert!(jh.unchanged);
        assert_eq!(jh.algebra.names, g.names);
    }

    #[test]
    fn jordan_holder_reorders_center_first() {
        // h3 presented with the center last.
        let names: Vec<String> = ["X3", "X2", "X1"].iter().map(|s| s.to_string()).collect();
        let mut v = vec![ScalarExpr::zero(); 3];
        v[2] = ScalarExpr::one(); // [X3, X2] = X1 (index 2 here)
        let g = LieAlgebra::from_sparse(names, &[(0, 1, v)]).unwrap();
        let jh = jordan_holder_basis(&g, None).unwrap();
        assert!(!jh.unchanged);
        // first vector of the new basis spans the center
        let (center, _) = g.center();
        let (ok, _) = span_eq(&center, &[jh.basis[0].clone()]);
        assert!(ok);
    }

    #[test]
    fn abelian_any_order_is_jordan_holder() {
        let g = builtins::abelian(3);
        let jh = jordan_holder_basis(&g, Some(&[2, 0, 1])).unwrap();
        assert!(!jh.unchanged); // an explicit non-identity preference was honored
        let (ok, _) = g.order_is_jordan_holder(&[2, 0, 1]);
        assert!(ok);
    }

    #[test]
    fn central_extension_of_plane_is_heisenberg() {
        let g0 = builtins::abelian(2);
        let mut omega = Mat::zeros(2, 2);
        *omega.at_mut(0, 1) = ScalarExpr::one();
        *omega.at_mut(1, 0) = ScalarExpr::from_int(-1);
        let g = central_extension(&g0, &omega, "Z").unwrap();
        assert_eq!(g.step, 2);
        assert_eq!(g.dim(), 3);
        // [X2, X1] in the extension = ω(e2, e1) Z = −Z
        let br = g.bracket_basis(2, 1);
        assert_eq!(br[0], p("-1").unwrap());
    }

    #[test]
    fn degenerate_form_rejected() {
        let g0 = builtins::abelian(2);
        let omega = Mat::zeros(2, 2);
        let err = central_extension(&g0, &omega, "Z").unwrap_err();
        assert!(matches!(err, LieError::Degenerate { .. }));
    }

    #[test]
    fn semidirect_reconstructs_pedersen_table() {
        let g5 = builtins::pedersen5();
        // single Jordan block: X5 -> X4 -> X3 -> X2 -> 0, X1 -> 0
        let mut d = Mat::zeros(5, 5);
        for i in 1..4 {
            *d.at_mut(i, i + 1) = ScalarExpr::one();
        }
        let s = builtins::abelian_named(&["X6"]);
        let product = semidirect_product(&s, &g5, &[d]).unwrap();
        let expected = builtins::pedersen6();
        assert_eq!(product.names, expected.names);
        for j in 0..6 {
            for k in 0..6 {
                assert_eq!(
                    product.bracket_basis(j, k),
                    expected.bracket_basis(j, k),
                    "bracket ({j},{k})"
                );
            }
        }
    }

    #[test]
    fn trivial_action_gives_direct_sum() {
        let g = builtins::heisenberg3();
        let s = builtins::abelian_named(&["D"]);
        let product = semidirect_product(&s, &g, &[Mat::zeros(3, 3)]).unwrap();
        assert_eq!(product.dim(), 4);
        for k in 0..3 {
            assert!(product
                .bracket_basis(3, k)
                .iter()
                .all(|x| x.is_zero()));
        }
    }

    #[test]
    fn reduced_product_of_heisenbergs_is_h5() {
        let h3 = builtins::heisenberg3();
        let product = reduced_direct_product(&h3, &h3).unwrap();
        let h5 = builtins::heisenberg5();
        assert_eq!(product.dim(), 5);
        for j in 0..5 {
            for k in 0..5 {
                assert_eq!(
                    product.bracket_basis(j, k),
                    h5.bracket_basis(j, k),
                    "bracket ({j},{k})"
                );
            }
        }
    }

    #[test]
    fn symplectic_derivation_identity_fails_for_shear_on_h3_quotient() {
        // identity on the 2-dimensional quotient: J + J = 2J ≠ 0.
        let g0 = builtins::abelian(2);
        let mut omega = Mat::zeros(2, 2);
        *omega.at_mut(0, 1) = ScalarExpr::one();
        *omega.at_mut(1, 0) = ScalarExpr::from_int(-1);
        let report = check_symplectic_derivation(&Mat::identity(2), &omega, &g0);
        assert!(report.symplectic_failure.is_some());
        assert!(report.derivation_failure.is_none());
        assert!(report.nilpotency_index.is_none());
    }

    #[test]
    fn stabilizer_of_lagrangian_plane_in_r4() {
        // abelian R^4, standard ω, p = first Lagrangian pair
        let g0 = builtins::abelian(4);
        let mut omega = Mat::zeros(4, 4);
        for i in 0..2 {
            *omega.at_mut(i, i + 2) = ScalarExpr::one();
            *omega.at_mut(i + 2, i) = ScalarExpr::from_int(-1);
        }
        let p: Vec<Vector> = vec![standard_basis_vector(4, 0), standard_basis_vector(4, 1)];
        let sp = build_sp(&g0, &omega, &p).unwrap();
        // upper-triangular block maps with symmetric 2x2 block: dimension 3
        assert_eq!(sp.generators.len(), 3);
        for d in &sp.generators {
            // (exp(D) − id)^2 = 0
            let u = exp_nilpotent(d);
            let diff = u.add(&Mat::identity(4).neg());
            assert!(diff.mul(&diff).is_zero());
        }
    }

    #[test]
    fn non_isotropic_plane_rejected() {
        let g0 = builtins::abelian(4);
        let mut omega = Mat::zeros(4, 4);
        for i in 0..2 {
            *omega.at_mut(i, i + 2) = ScalarExpr::one();
            *omega.at_mut(i + 2, i) = ScalarExpr::from_int(-1);
        }
        let p: Vec<Vector> = vec![standard_basis_vector(4, 0), standard_basis_vector(4, 2)];
        assert!(matches!(
            build_sp(&g0, &omega, &p),
            Err(LieError::NotPolarization(_))
        ));
    }
}
