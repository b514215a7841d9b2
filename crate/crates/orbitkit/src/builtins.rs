//! Built-in example library: the algebras exercised throughout the test
//! suite and exposed by the command-line `examples` listing.

use crate::lie::{LieAlgebra, Vector};
use crate::matrix::Mat;
use crate::scalar::ScalarExpr;

fn names(prefix: &str, n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("{prefix}{i}")).collect()
}

fn e(dim: usize, i: usize) -> Vector {
    crate::matrix::standard_basis_vector(dim, i)
}

fn scaled(dim: usize, i: usize, c: ScalarExpr) -> Vector {
    let mut v = vec![ScalarExpr::zero(); dim];
    v[i] = c;
    v
}

/// Abelian algebra of the given dimension.
pub fn abelian(n: usize) -> LieAlgebra {
    LieAlgebra::from_sparse(names("X", n), &[]).unwrap()
}

pub fn abelian_named(basis: &[&str]) -> LieAlgebra {
    LieAlgebra::from_sparse(basis.iter().map(|s| s.to_string()).collect(), &[]).unwrap()
}

/// 3-dimensional Heisenberg algebra: `[X3, X2] = X1`.
pub fn heisenberg3() -> LieAlgebra {
    LieAlgebra::from_sparse(names("X", 3), &[(2, 1, e(3, 0))]).unwrap()
}

/// 5-dimensional Heisenberg algebra: `[X3, X2] = X1`, `[X5, X4] = X1`.
pub fn heisenberg5() -> LieAlgebra {
    LieAlgebra::from_sparse(names("X", 5), &[(2, 1, e(5, 0)), (4, 3, e(5, 0))]).unwrap()
}

/// 4-dimensional filiform algebra: `[X4, X3] = X2`, `[X4, X2] = X1`.
pub fn filiform4() -> LieAlgebra {
    LieAlgebra::from_sparse(names("X", 4), &[(3, 2, e(4, 1)), (3, 1, e(4, 0))]).unwrap()
}

/// The 6-dimensional algebra behind the `pedersen6` example:
/// `[X6,X5]=X4, [X6,X4]=X3, [X6,X3]=X2, [X5,X4]=X2, [X5,X2]=-X1, [X4,X3]=X1`.
pub fn pedersen6() -> LieAlgebra {
    let neg_e1: Vector = e(6, 0).iter().map(|x| -x).collect();
    LieAlgebra::from_sparse(
        names("X", 6),
        &[
            (5, 4, e(6, 3)),
            (5, 3, e(6, 2)),
            (5, 2, e(6, 1)),
            (4, 3, e(6, 1)),
            (4, 1, neg_e1),
            (3, 2, e(6, 0)),
        ],
    )
    .unwrap()
}

/// The codimension-one ideal `span{X1..X5}` of [`pedersen6`] as an algebra
/// in its own right.
pub fn pedersen5() -> LieAlgebra {
    let neg_e1: Vector = e(5, 0).iter().map(|x| -x).collect();
    LieAlgebra::from_sparse(
        names("X", 5),
        &[(4, 3, e(5, 1)), (4, 1, neg_e1), (3, 2, e(5, 0))],
    )
    .unwrap()
}

/// 2-step quotient of [`pedersen5`] by its center, on basis `(X2,..,X5)`:
/// the only bracket is `[X5, X4] = X2`.
pub fn pedersen_quotient_g0() -> LieAlgebra {
    LieAlgebra::from_sparse(
        vec!["X2".into(), "X3".into(), "X4".into(), "X5".into()],
        &[(3, 2, e(4, 0))],
    )
    .unwrap()
}

/// Symplectic form on [`pedersen_quotient_g0`] in the basis `(X2,..,X5)`:
/// `ω(X2,X5) = −1`, `ω(X3,X4) = 1`.
pub fn pedersen_omega() -> Mat {
    let one = ScalarExpr::one;
    let neg = || ScalarExpr::from_int(-1);
    let mut j = Mat::zeros(4, 4);
    *j.at_mut(0, 3) = neg();
    *j.at_mut(3, 0) = one();
    *j.at_mut(1, 2) = one();
    *j.at_mut(2, 1) = neg();
    j
}

/// The single-Jordan-block derivation induced on [`pedersen_quotient_g0`]:
/// `X3 ↦ X2, X4 ↦ X3, X5 ↦ X4`.
pub fn pedersen_quotient_derivation() -> Mat {
    let mut d = Mat::zeros(4, 4);
    for i in 0..3 {
        *d.at_mut(i, i + 1) = ScalarExpr::one();
    }
    d
}

/// Single-Jordan-block derivation of [`pedersen5`]:
/// `X3 ↦ X2, X4 ↦ X3, X5 ↦ X4` (and `X1, X2 ↦ 0`).
pub fn pedersen5_derivation() -> Mat {
    let mut d = Mat::zeros(5, 5);
    for i in 1..4 {
        *d.at_mut(i, i + 1) = ScalarExpr::one();
    }
    d
}

/// The 2-step family `g0(s,t)` on six generators:
/// `[X6,X5] = s·X3`, `[X6,X4] = (s+t)·X2`, `[X5,X4] = t·X1`.
pub fn lauret6(s: &ScalarExpr, t: &ScalarExpr) -> LieAlgebra {
    let st = s + t;
    LieAlgebra::from_sparse(
        names("X", 6),
        &[
            (5, 4, scaled(6, 2, s.clone())),
            (5, 3, scaled(6, 1, st)),
            (4, 3, scaled(6, 0, t.clone())),
        ],
    )
    .unwrap()
}

/// Antidiagonal symplectic form pairing `X_i` with `X_{7-i}` on [`lauret6`].
pub fn lauret_omega() -> Mat {
    let mut j = Mat::zeros(6, 6);
    for i in 0..3 {
        *j.at_mut(i, 5 - i) = ScalarExpr::one();
        *j.at_mut(5 - i, i) = ScalarExpr::from_int(-1);
    }
    j
}

/// Block map `D_A = [[0, A], [0, 0]]` on [`lauret6`]: the non-central half
/// `(X4,X5,X6)` is sent into the central half `(X1,X2,X3)` by `A`.
pub fn lauret_da(a: &Mat) -> Mat {
    assert_eq!((a.rows, a.cols), (3, 3));
    let mut d = Mat::zeros(6, 6);
    for r in 0..3 {
        for c in 0..3 {
            *d.at_mut(r, c + 3) = a.at(r, c).clone();
        }
    }
    d
}

/// Functional with the given values on the named basis vectors, zero
/// elsewhere.
pub fn functional(g: &LieAlgebra, values: &[(&str, ScalarExpr)]) -> Vector {
    let mut xi = vec![ScalarExpr::zero(); g.dim()];
    for (name, v) in values {
        let idx = g
            .names
            .iter()
            .position(|n| n == name)
            .unwrap_or_else(|| panic!("no basis vector named {name}"));
        xi[idx] = v.clone();
    }
    xi
}

/// Names of the built-in examples, for the CLI listing.
pub fn builtin_names() -> Vec<&'static str> {
    vec![
        "heisenberg3",
        "heisenberg5",
        "pedersen6",
        "pedersen5",
        "lauret6",
        "filiform4",
    ]
}

/// Look up a built-in algebra. `lauret6` takes two scalar arguments
/// (defaulting to the formal parameters `s`, `t`).
pub fn builtin(name: &str, args: &[ScalarExpr]) -> Option<LieAlgebra> {
    match name {
        "heisenberg3" => Some(heisenberg3()),
        "heisenberg5" => Some(heisenberg5()),
        "pedersen6" => Some(pedersen6()),
        "pedersen5" => Some(pedersen5()),
        "filiform4" => Some(filiform4()),
        "lauret6" => {
            let s = args.first().cloned().unwrap_or_else(|| ScalarExpr::param("s"));
            let t = args.get(1).cloned().unwrap_or_else(|| ScalarExpr::param("t"));
            Some(lauret6(&s, &t))
        }
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_builtins_validate() {
        for name in builtin_names() {
            let g = builtin(name, &[]).unwrap();
            assert!(g.dim() >= 3, "{name}");
        }
    }

    #[test]
    fn lauret_omega_is_a_cocycle_for_the_family() {
        let s = ScalarExpr::param("s");
        let t = ScalarExpr::param("t");
        let g0 = lauret6(&s, &t);
        crate::lie::check_symplectic_form(&lauret_omega(), &g0).unwrap();
    }

    #[test]
    fn pedersen6_step() {
        // the full 6-dimensional algebra has a length-5 lower central series
        assert_eq!(pedersen6().step, 5);
        assert_eq!(pedersen5().step, 3);
        assert_eq!(pedersen_quotient_g0().step, 2);
    }
}
