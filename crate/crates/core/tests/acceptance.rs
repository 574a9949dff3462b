//! One line per acceptance criterion, written straight to stderr so that it
//! shows up without `--nocapture`.

mod common;

use std::io::Write;
use std::time::{Duration, Instant};

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::{corpus, rows, sparse_basis_change};
use qmvw_core::algebra::FactorKind;
use qmvw_core::classify::{classify, classify_with_isometry};
use qmvw_core::group::{
    is_in_breve_u, is_in_breve_u_within, is_in_u, lie_algebra_basis, random_group_element, ExtendedElement,
};
use qmvw_core::linalg::inverse;
use qmvw_core::module::{is_isometry, HermitianModule};
use qmvw_core::oracle::brute_force_conjugator;
use qmvw_core::pipeline::{jordan_decompose, lie_negator, mvw_conjugator, FLOAT_RESIDUAL_TOLERANCE};
use qmvw_core::poly::charpoly_exact;
use qmvw_core::samples::{
    exact_group_samples, exact_lie_samples, float_group_samples, float_lie_samples, group_models, nilpotent_frame,
    SampleKind,
};
use qmvw_core::sl2::{irreducible, isotypic_decompose, reconstruct};
use qmvw_core::standard::{small_params, standard_module, takes_signature, Params};
use qmvw_core::twist::build_twist_isomorphism;
use qmvw_core::{Field, Matrix, Rational, Scalar};

const STANDARD_BUDGET: Duration = Duration::from_secs(5);
const CLASSIFY_BUDGET: Duration = Duration::from_secs(60);
const EXACT_BUDGET: Duration = Duration::from_secs(600);
const BASIS_CHANGES: usize = 100;
const PAIRS: usize = 50;
const SAMPLES: usize = 25;
const ORACLE_STARTS: usize = 50;
const MIXED_MODULES: usize = 20;
const SEED: u64 = 20_240_601;

struct Outcome {
    passed: bool,
    detail: String,
}

impl Outcome {
    fn new(failures: &[String], summary: String) -> Self {
        let detail = match failures.first() {
            None => summary,
            Some(first) => format!("{summary}; {} failure(s), first: {first}", failures.len()),
        };
        Outcome { passed: failures.is_empty(), detail }
    }
}

fn timed(budget: Duration, started: Instant, failures: &mut Vec<String>) -> String {
    let t = started.elapsed();
    if t > budget {
        failures.push(format!("took {:.1} s, budget {} s", t.as_secs_f64(), budget.as_secs()));
    }
    format!("{:.1} s", t.as_secs_f64())
}

fn standard_axioms() -> Outcome {
    let started = Instant::now();
    let mut failures = Vec::new();
    let mut count = 0;
    for (kind, eps) in rows() {
        for p in small_params(kind, eps, 2) {
            count += 1;
            let report = standard_module::<Rational>(kind, eps, p).unwrap().validate();
            if !report.is_valid() {
                failures.push(format!("{kind} eps {eps} {p}:\n{report}"));
            }
        }
    }
    let t = timed(STANDARD_BUDGET, started, &mut failures);
    Outcome::new(&failures, format!("{count} modules validate exactly in {t}"))
}

fn classification() -> Outcome {
    let started = Instant::now();
    let mut failures = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut roundtrips = 0;
    let mut changes = 0;
    for (kind, eps) in rows() {
        let params = small_params(kind, eps, 2);
        for &p in &params {
            roundtrips += 1;
            let e = standard_module::<Rational>(kind, eps, p).unwrap();
            match classify_with_isometry(&e) {
                Ok(r) if r.invariants == vec![p] && is_isometry(&r.isometry, &e, &r.standard) => {}
                Ok(r) => failures.push(format!("{kind} eps {eps} {p}: got {:?}", r.invariants)),
                Err(err) => failures.push(format!("{kind} eps {eps} {p}: {err}")),
            }
        }
        let nonempty: Vec<Params> = params.into_iter().filter(|p| p.quaternionic_dim(kind, eps) > 0).collect();
        for i in 0..BASIS_CHANGES {
            changes += 1;
            let p = nonempty[i % nonempty.len()];
            let e = standard_module::<Rational>(kind, eps, p).unwrap();
            let moved = e.transport(&sparse_basis_change(e.dim(), &mut rng)).unwrap();
            match classify_with_isometry(&moved) {
                Ok(r) if r.invariants == vec![p] && is_isometry(&r.isometry, &moved, &r.standard) => {}
                Ok(r) => failures.push(format!("{kind} eps {eps} {p} moved: got {:?}", r.invariants)),
                Err(err) => failures.push(format!("{kind} eps {eps} {p} moved: {err}")),
            }
        }
    }
    let t = timed(CLASSIFY_BUDGET, started, &mut failures);
    Outcome::new(&failures, format!("{roundtrips} roundtrips and {changes} basis changes with exact isometries in {t}"))
}

/// Dimension of the Lie algebra as the kernel of every defining linear
/// condition stacked into one real matrix, ranked by singular values.
fn stacked_kernel_dim(e: &HermitianModule<Rational>) -> usize {
    let n = e.dim();
    let f = |m: &Matrix<Rational>| DMatrix::from_fn(n, n, |r, c| m[(r, c)].to_f64());
    let commute: Vec<DMatrix<f64>> = [&e.ri, &e.rj].into_iter().chain(e.rho.iter()).map(f).collect();
    let forms: Vec<DMatrix<f64>> = e.gram.iter().map(f).collect();
    let blocks = commute.len() + forms.len();
    let mut stacked = DMatrix::<f64>::zeros(blocks * n * n, n * n);
    for k in 0..n * n {
        let mut x = DMatrix::<f64>::zeros(n, n);
        x[(k / n, k % n)] = 1.0;
        let images = commute
            .iter()
            .map(|r| &x * r - r * &x)
            .chain(forms.iter().map(|b| x.transpose() * b + b * &x));
        for (block, image) in images.enumerate() {
            for (i, v) in image.iter().enumerate() {
                stacked[(block * n * n + i, k)] = *v;
            }
        }
    }
    let sv = stacked.singular_values();
    let top = sv.max();
    n * n - sv.iter().filter(|&&s| s > 1e-9 * top.max(1.0)).count()
}

fn lie_dimensions() -> Outcome {
    let mut failures = Vec::new();
    let mut seen = Vec::new();
    for (kind, eps) in rows() {
        let sizes: Vec<Params> = if takes_signature(kind, eps) {
            vec![Params::Signature(1, 1)]
        } else {
            vec![Params::Rank(1), Params::Rank(2)]
        };
        for p in sizes {
            let e = standard_module::<Rational>(kind, eps, p).unwrap();
            let ours = lie_algebra_basis(&e).len();
            let oracle = stacked_kernel_dim(&e);
            seen.push(format!("{kind}{eps:+} {p}: {ours}"));
            if ours != oracle {
                failures.push(format!("{kind} eps {eps} {p}: {ours} vs oracle {oracle}"));
            }
        }
    }
    Outcome::new(&failures, format!("{} sizes agree with the stacked-kernel oracle ({})", seen.len(), seen.join(", ")))
}

fn twist_lemma() -> Outcome {
    let mut failures = Vec::new();
    let corpus = corpus();
    for (name, e) in &corpus {
        match build_twist_isomorphism(e) {
            Ok(w) if w.delta == -1 && is_in_breve_u(e, &w).unwrap() => {}
            Ok(_) => failures.push(format!("{name}: witness is not a form-reversing element")),
            Err(err) => failures.push(format!("{name}: {err}")),
        }
    }
    let mut identities = 0;
    for kind in [FactorKind::RId, FactorKind::CId] {
        for p in small_params(kind, 1, 2) {
            identities += 1;
            let e = standard_module::<Rational>(kind, 1, p).unwrap();
            if !is_in_breve_u(&e, &ExtendedElement::new(Matrix::identity(e.dim()), -1)).unwrap() {
                failures.push(format!("(1, -1) not in the extended group of {kind} {p}"));
            }
        }
    }
    Outcome::new(&failures, format!("{} corpus witnesses, {identities} identity witnesses", corpus.len()))
}

fn index_two() -> Outcome {
    let mut failures = Vec::new();
    let corpus = corpus();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    for (m, (name, e)) in corpus.iter().enumerate() {
        let w = build_twist_isomorphism(e).unwrap();
        let pool: Vec<Matrix<Rational>> = (0..10)
            .map(|k| &w.g * &random_group_element(e, SEED + (100 * m + k) as u64).unwrap())
            .collect();
        for x in &pool {
            if !is_in_breve_u(e, &ExtendedElement::new(x.clone(), -1)).unwrap() {
                failures.push(format!("{name}: a sampled coset element is not in the extended group"));
            }
        }
        for _ in 0..PAIRS {
            let (a, b) = (rng.gen_range(0..pool.len()), rng.gen_range(0..pool.len()));
            if !is_in_u(e, &(&pool[a] * &pool[b])).unwrap() {
                failures.push(format!("{name}: product of pair ({a}, {b}) is not in the unitary group"));
            }
        }
    }
    Outcome::new(&failures, format!("{} pairs over {} corpus modules", PAIRS * corpus.len(), corpus.len()))
}

fn sl2_suite() -> Outcome {
    let mut failures = Vec::new();
    for d in 1..=6 {
        let (t, form) = irreducible::<Rational>(d).unwrap();
        if !t.brackets_hold() {
            failures.push(format!("F_{d}: brackets"));
        }
        for x in [&t.h, &t.e, &t.f] {
            if !(&x.transpose() * &form + &form * x).is_zero() {
                failures.push(format!("F_{d}: form is not invariant"));
            }
        }
        let sign = if d % 2 == 1 { Rational::from_i64(1) } else { Rational::from_i64(-1) };
        if form.transpose() != form.scale(&sign) {
            failures.push(format!("F_{d}: form parity"));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    for trial in 0..MIXED_MODULES {
        let kind = FactorKind::ALL[trial % FactorKind::ALL.len()];
        let eps: i8 = if rng.gen_bool(0.5) { 1 } else { -1 };
        let mut ds: Vec<usize> = (1..=3).filter(|_| rng.gen_bool(0.6)).collect();
        if ds.len() < 2 {
            ds = vec![1, 2];
        }
        let parts: Vec<(usize, Params, HermitianModule<Rational>)> = ds
            .iter()
            .map(|&d| {
                let circle_eps = if d % 2 == 0 { -eps } else { eps };
                let choices: Vec<Params> = small_params(kind, circle_eps, 1)
                    .into_iter()
                    .filter(|p| p.quaternionic_dim(kind, circle_eps) > 0)
                    .collect();
                let p = choices[rng.gen_range(0..choices.len())];
                (d, p, standard_module(kind, circle_eps, p).unwrap())
            })
            .collect();
        let label = format!("{kind} eps {eps} {:?}", parts.iter().map(|(d, p, _)| (*d, *p)).collect::<Vec<_>>());
        let input: Vec<(usize, HermitianModule<Rational>)> = parts.iter().map(|(d, _, m)| (*d, m.clone())).collect();
        let (module, triple) = match reconstruct(&input) {
            Ok(r) => r,
            Err(err) => {
                failures.push(format!("{label}: reconstruct: {err}"));
                continue;
            }
        };
        if !module.validate().is_valid() || !triple.acts_on(&module) {
            failures.push(format!("{label}: reconstructed module or action is invalid"));
            continue;
        }
        let got: Vec<(usize, Vec<Params>)> = match isotypic_decompose(&module, &triple) {
            Ok(cs) => cs.iter().map(|c| (c.d, classify(&c.circle_module).unwrap())).collect(),
            Err(err) => {
                failures.push(format!("{label}: decompose: {err}"));
                continue;
            }
        };
        let want: Vec<(usize, Vec<Params>)> = parts.iter().map(|(d, p, _)| (*d, vec![*p])).collect();
        if got != want {
            failures.push(format!("{label}: decomposed into {got:?}"));
        }
    }
    Outcome::new(&failures, format!("F_1..F_6 identities and {MIXED_MODULES} mixed roundtrips"))
}

fn conjugates_exactly(g: &Matrix<Rational>, x: &Matrix<Rational>) -> bool {
    match inverse(x) {
        Some(x_inv) => g * x == &x_inv * g,
        None => false,
    }
}

fn exact_theorem() -> Outcome {
    let started = Instant::now();
    let mut failures = Vec::new();
    let mut kinds = [0usize; 4];
    for model in group_models() {
        let e = model.module::<Rational>().unwrap();
        let frame = nilpotent_frame(model.kind, model.epsilon, model.params).unwrap();
        let samples = exact_group_samples(&e, frame.as_ref(), SAMPLES, SEED).unwrap();
        for (i, (kind, x)) in samples.iter().enumerate() {
            kinds[*kind as usize] += 1;
            let label = format!("{} sample {i} ({kind})", model.name);
            let c = match mvw_conjugator(&e, x) {
                Ok(c) => c,
                Err(err) => {
                    failures.push(format!("{label}: {err}"));
                    continue;
                }
            };
            let g = &c.element.g;
            let jordan = jordan_decompose(&e, x).unwrap();
            if !is_in_breve_u(&e, &c.element).unwrap() || c.element.delta != -1 {
                failures.push(format!("{label}: not a form-reversing element"));
            }
            if !conjugates_exactly(g, x) || !conjugates_exactly(g, &jordan.s) || !conjugates_exactly(g, &jordan.u) {
                failures.push(format!("{label}: g x g^-1 differs from x^-1"));
            }
        }
    }
    let t = timed(EXACT_BUDGET, started, &mut failures);
    Outcome::new(
        &failures,
        format!(
            "{} samples (unipotent {}, split {}, mixed {}, semisimple {}) in {t}",
            SAMPLES * group_models().len(),
            kinds[SampleKind::Unipotent as usize],
            kinds[SampleKind::SplitSemisimple as usize],
            kinds[SampleKind::Mixed as usize],
            kinds[SampleKind::Semisimple as usize],
        ),
    )
}

/// The oracle's acceptance predicate: membership within the float
/// tolerance, and `g x g⁻¹ = x⁻¹` within the same bound.
fn oracle_accepts(e: &HermitianModule<f64>, g: &ExtendedElement<f64>, x: &Matrix<f64>) -> bool {
    let (Some(gi), Some(xi)) = (inverse(&g.g), inverse(x)) else { return false };
    is_in_breve_u_within(e, g, FLOAT_RESIDUAL_TOLERANCE).unwrap()
        && (&(&g.g * x) * &gi).inf_norm_diff(&xi) <= FLOAT_RESIDUAL_TOLERANCE
}

fn float_theorem() -> Outcome {
    let mut failures = Vec::new();
    let mut worst: f64 = 0.0;
    let (mut oracle_found, mut oracle_inconclusive) = (0, 0);
    for model in group_models() {
        let e = model.module::<f64>().unwrap();
        for (i, x) in float_group_samples(&e, SAMPLES, SEED).unwrap().iter().enumerate() {
            let label = format!("{} sample {i}", model.name);
            match mvw_conjugator(&e, x) {
                Ok(c) => {
                    worst = worst.max(c.residual);
                    if c.residual > FLOAT_RESIDUAL_TOLERANCE {
                        failures.push(format!("{label}: residual {:.2e}", c.residual));
                    }
                    match brute_force_conjugator(&e, x, ORACLE_STARTS, i as u64) {
                        Ok(found) => {
                            oracle_found += 1;
                            if !oracle_accepts(&e, &found, x) || !oracle_accepts(&e, &c.element, x) {
                                failures.push(format!("{label}: disagrees with the search oracle"));
                            }
                        }
                        Err(_) => oracle_inconclusive += 1,
                    }
                }
                Err(err) => failures.push(format!("{label}: {err}")),
            }
        }
    }
    Outcome::new(
        &failures,
        format!(
            "{} samples, worst residual {worst:.1e}, oracle agreed on {oracle_found} ({oracle_inconclusive} inconclusive)",
            SAMPLES * group_models().len()
        ),
    )
}

fn lie_analog() -> Outcome {
    let mut failures = Vec::new();
    let mut worst: f64 = 0.0;
    for model in group_models() {
        let e = model.module::<Rational>().unwrap();
        let frame = nilpotent_frame(model.kind, model.epsilon, model.params).unwrap();
        for (i, (kind, x)) in exact_lie_samples(&e, frame.as_ref(), SAMPLES, SEED).unwrap().iter().enumerate() {
            let label = format!("{} Lie sample {i} ({kind})", model.name);
            match lie_negator(&e, x) {
                Ok(c) if c.element.delta == -1 && &c.element.g * x == -&(x * &c.element.g) => {}
                Ok(_) => failures.push(format!("{label}: g X g^-1 differs from -X")),
                Err(err) => failures.push(format!("{label}: {err}")),
            }
        }
        let ef = e.to_f64();
        for (i, x) in float_lie_samples(&ef, SAMPLES, SEED).iter().enumerate() {
            match lie_negator(&ef, x) {
                Ok(c) => {
                    worst = worst.max(c.residual);
                    if c.residual > FLOAT_RESIDUAL_TOLERANCE {
                        failures.push(format!("{} float Lie sample {i}: residual {:.2e}", model.name, c.residual));
                    }
                }
                Err(err) => failures.push(format!("{} float Lie sample {i}: {err}", model.name)),
            }
        }
    }
    let n = SAMPLES * group_models().len();
    Outcome::new(&failures, format!("{n} exact and {n} float samples, worst float residual {worst:.1e}"))
}

fn squarefree_minimal_polynomial(s: &Matrix<Rational>) -> bool {
    let c = charpoly_exact(s);
    let (squarefree, _) = c.div_rem(&c.gcd(&c.derivative()));
    squarefree.eval_matrix(s).is_zero()
}

fn jordan_suite() -> Outcome {
    let mut failures = Vec::new();
    let mut count = 0;
    for model in group_models() {
        let e = model.module::<Rational>().unwrap();
        let n = e.dim();
        let frame = nilpotent_frame(model.kind, model.epsilon, model.params).unwrap();
        let mut xs: Vec<Matrix<Rational>> = exact_group_samples(&e, frame.as_ref(), SAMPLES, SEED)
            .unwrap()
            .into_iter()
            .map(|(_, x)| x)
            .collect();
        xs.extend(float_group_samples(&e, SAMPLES, SEED).unwrap());
        for (i, x) in xs.iter().enumerate() {
            count += 1;
            let label = format!("{} element {i}", model.name);
            let j = match jordan_decompose(&e, x) {
                Ok(j) => j,
                Err(err) => {
                    failures.push(format!("{label}: {err}"));
                    continue;
                }
            };
            let unipotent = (&j.u - &Matrix::identity(n)).pow(n).is_zero();
            let in_group = is_in_u(&e, &j.s).unwrap() && is_in_u(&e, &j.u).unwrap();
            if &j.s * &j.u != *x || &j.u * &j.s != *x || !unipotent || !in_group || !squarefree_minimal_polynomial(&j.s) {
                failures.push(format!("{label}: Jordan identities fail"));
            }
        }
    }
    Outcome::new(&failures, format!("{count} exact elements (constructed and Cayley-random)"))
}

#[test]
fn acceptance_criteria() {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("standard-model axioms", standard_axioms),
        ("classification roundtrip and invariance", classification),
        ("Lie algebra dimensions", lie_dimensions),
        ("twist witnesses", twist_lemma),
        ("index two", index_two),
        ("sl2 models and isotypic roundtrip", sl2_suite),
        ("conjugator, exact path", exact_theorem),
        ("conjugator, float path", float_theorem),
        ("Lie analog", lie_analog),
        ("Jordan decomposition", jordan_suite),
    ];
    // the criteria with wall-clock budgets run alone, the rest in parallel
    let timed_alone = 2;
    let mut outcomes: Vec<Outcome> = criteria[..timed_alone].iter().map(|(_, run)| run()).collect();
    outcomes.extend(std::thread::scope(|scope| {
        let handles: Vec<_> = criteria[timed_alone..].iter().map(|(_, run)| scope.spawn(run)).collect();
        handles
            .into_iter()
            .map(|h| h.join().unwrap_or_else(|_| Outcome { passed: false, detail: "panicked".into() }))
            .collect::<Vec<_>>()
    }));
    let mut err = std::io::stderr().lock();
    for (k, ((name, _), outcome)) in criteria.iter().zip(&outcomes).enumerate() {
        let verdict = if outcome.passed { "PASS" } else { "FAIL" };
        writeln!(err, "criterion {:>2} {verdict}  {name}: {}", k + 1, outcome.detail).unwrap();
    }
    let failed: Vec<usize> = (0..outcomes.len()).filter(|&k| !outcomes[k].passed).map(|k| k + 1).collect();
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
