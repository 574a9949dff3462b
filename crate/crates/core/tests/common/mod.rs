#![allow(dead_code)]

use qmvw_core::algebra::FactorKind;
use qmvw_core::linalg::inverse;
use qmvw_core::module::HermitianModule;
use qmvw_core::samples::group_models;
use qmvw_core::standard::{small_params, standard_module, standard_product, Params};
use qmvw_core::{Matrix, Rational, Scalar};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Identity plus `n` random off-diagonal entries in `{−2..2}`, retried
/// until invertible. Dense rational changes of basis can push exact
/// normalization into square roots of very large integers.
pub fn sparse_basis_change(n: usize, rng: &mut ChaCha8Rng) -> Matrix<Rational> {
    loop {
        let mut g = Matrix::<Rational>::identity(n);
        for _ in 0..n {
            let (i, j) = (rng.gen_range(0..n), rng.gen_range(0..n));
            if i != j {
                g[(i, j)] = Rational::from_ratio(rng.gen_range(-2..=2), 1);
            }
        }
        if inverse(&g).is_some() {
            return g;
        }
    }
}

/// Every `(kind, ε)` row.
pub fn rows() -> Vec<(FactorKind, i8)> {
    FactorKind::ALL.iter().flat_map(|&k| [(k, 1), (k, -1)]).collect()
}

/// Standard modules with small invariants, the group models, products of
/// simple modules, and copies of some of these in other bases.
pub fn corpus() -> Vec<(String, HermitianModule<Rational>)> {
    let mut out: Vec<(String, HermitianModule<Rational>)> = Vec::new();
    for (kind, eps) in rows() {
        for p in small_params(kind, eps, 1) {
            if p.quaternionic_dim(kind, eps) > 0 {
                out.push((format!("{kind} eps {eps} {p}"), standard_module(kind, eps, p).unwrap()));
            }
        }
    }
    for g in group_models() {
        let module = g.module::<Rational>().unwrap();
        let name = format!("{} ({} eps {} {})", g.name, g.kind, g.epsilon, g.params);
        match out.iter_mut().find(|(_, e)| *e == module) {
            Some(entry) => entry.0 = name,
            None => out.push((name, module)),
        }
    }
    let products: [(i8, Vec<(FactorKind, Params)>); 3] = [
        (1, vec![(FactorKind::RId, Params::Signature(1, 0)), (FactorKind::CConj, Params::Signature(0, 1))]),
        (1, vec![(FactorKind::CId, Params::Rank(1)), (FactorKind::RxRSwap, Params::Rank(1))]),
        (
            -1,
            vec![
                (FactorKind::RId, Params::Rank(1)),
                (FactorKind::CConj, Params::Signature(1, 0)),
                (FactorKind::CxCSwap, Params::Rank(1)),
            ],
        ),
    ];
    for (eps, factors) in products {
        let name = factors.iter().map(|(k, p)| format!("{k} {p}")).collect::<Vec<_>>().join(" + ");
        out.push((format!("{name} eps {eps}"), standard_product(eps, &factors).unwrap()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let moved: Vec<(String, HermitianModule<Rational>)> = out
        .iter()
        .filter(|(name, _)| {
            ["Sp(1,1)", "O*(4)", "U(1,1)", "Sp2(C)", "O2(C)", "GL1(H)"].iter().any(|g| name.starts_with(g))
                || name.contains(" + ")
        })
        .map(|(name, e)| {
            let g = sparse_basis_change(e.dim(), &mut rng);
            (format!("{name}, other basis"), e.transport(&g).unwrap())
        })
        .collect();
    out.extend(moved);
    out
}
