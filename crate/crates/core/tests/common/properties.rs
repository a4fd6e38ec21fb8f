//! Randomized invariants with fixed seeds, shared by the property tests and
//! the acceptance run.

use germlab_core::catalog;
use germlab_core::linalg::Matrix;
use germlab_core::polyring::{Monomial, PolyMatrix, Polynomial, SymMatrix, VectorFieldJet};
use germlab_core::quasihom::lda_jets;
use germlab_core::scalar::q;
use germlab_core::tangent::{ge_codimension, tangent_space, GroupVariant};
use germlab_core::unimodular::CongruenceWitness;
use germlab_core::{Poly, Sym, Q};
use num_traits::Zero;
use proptest::prelude::*;
use proptest::test_runner::{Config, RngSeed, TestRunner};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const SEED: u64 = 0x6e21;

fn runner(cases: u32) -> TestRunner {
    TestRunner::new(Config { cases, rng_seed: RngSeed::Fixed(SEED), failure_persistence: None, ..Config::default() })
}

fn poly_strategy(nvars: usize, max_deg: u32) -> impl Strategy<Value = Poly> {
    let monos = Monomial::up_to_degree(nvars, 0, max_deg);
    let n = monos.len();
    proptest::collection::vec(-4i64..=4, n)
        .prop_map(move |cs| Polynomial::from_terms(nvars, monos.iter().cloned().zip(cs.into_iter().map(q))))
}

fn sym_strategy(n: usize, nvars: usize, max_deg: u32) -> impl Strategy<Value = Sym> {
    proptest::collection::vec(poly_strategy(nvars, max_deg), n * (n + 1) / 2)
        .prop_map(move |upper| SymMatrix::from_upper(n, nvars, upper).unwrap())
}

fn mat_strategy(n: usize, nvars: usize, max_deg: u32) -> impl Strategy<Value = PolyMatrix<Q>> {
    proptest::collection::vec(proptest::collection::vec(poly_strategy(nvars, max_deg), n), n)
        .prop_map(move |rows| PolyMatrix::from_rows(nvars, rows))
}

fn to_f64(c: &Q) -> f64 {
    i64::try_from(c.to_integer()).expect("small integer coefficient") as f64
}

pub fn ring_axioms() -> Result<(), String> {
    let s = (poly_strategy(3, 3), poly_strategy(3, 3), poly_strategy(3, 2));
    runner(64)
        .run(&s, |(a, b, c)| {
            let zero = Polynomial::zero(3);
            let one = Polynomial::one(3);
            prop_assert_eq!(&a + &b, &b + &a);
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert_eq!(&a + &zero, a.clone());
            prop_assert_eq!(&a * &one, a.clone());
            prop_assert!((&a - &a).is_zero());
            prop_assert!((&a + &(-&a)).is_zero());
            Ok(())
        })
        .map_err(|e| e.to_string())
}

/// Integer-coefficient products agree between `f64` and exact arithmetic.
pub fn float_matches_exact() -> Result<(), String> {
    runner(64)
        .run(&(poly_strategy(2, 3), poly_strategy(2, 3)), |(a, b)| {
            let exact = (&a * &b).map_coeffs(to_f64);
            prop_assert_eq!(&a.map_coeffs(to_f64) * &b.map_coeffs(to_f64), exact);
            Ok(())
        })
        .map_err(|e| e.to_string())
}

pub fn det_congruence_identity() -> Result<(), String> {
    runner(64)
        .run(&(sym_strategy(2, 2, 2), mat_strategy(2, 2, 1)), |(a, x)| {
            let dx = x.det();
            prop_assert_eq!(a.congruence(&x).det(), &(&dx * &dx) * &a.det());
            Ok(())
        })
        .map_err(|e| e.to_string())?;
    runner(32)
        .run(&(sym_strategy(3, 2, 1), mat_strategy(3, 2, 1)), |(a, x)| {
            let dx = x.det();
            prop_assert_eq!(a.congruence(&x).det(), &(&dx * &dx) * &a.det());
            Ok(())
        })
        .map_err(|e| e.to_string())
}

pub fn g_inside_ge() -> Result<(), String> {
    runner(48)
        .run(&sym_strategy(2, 2, 2), |a| {
            let a = a.map(|p| p - &Polynomial::constant(2, p.constant_term()));
            for d in [2, 3] {
                let g = tangent_space(&a, GroupVariant::G, d);
                let ge = tangent_space(&a, GroupVariant::Ge, d);
                prop_assert!(ge.space.contains_subspace(&g.space), "{}", a);
            }
            Ok(())
        })
        .map_err(|e| e.to_string())
}

/// Invertible linear part plus quadratic terms for `Φ`, and a matrix family
/// that is invertible at the origin for `X`.
fn random_group_element(rng: &mut ChaCha8Rng, n: usize, r: usize) -> CongruenceWitness<Q> {
    let mut random_poly = |lo: u32, hi: u32| {
        let mut p = Polynomial::zero(r);
        for m in Monomial::up_to_degree(r, lo, hi) {
            p.add_term(m, q(rng.gen_range(-2..=2)));
        }
        p
    };
    loop {
        let phi: Vec<Poly> = (0..r).map(|_| random_poly(1, 2)).collect();
        let rows = (0..n).map(|_| (0..n).map(|_| random_poly(0, 1)).collect()).collect();
        let w = CongruenceWitness { phi, x: PolyMatrix::from_rows(r, rows) };
        if !w.jacobian_at_origin().det().is_zero() && !Matrix::from_rows(w.x.at_origin()).det().is_zero() {
            return w;
        }
    }
}

pub const INVARIANCE_GERMS: [(&str, &str, &[(&str, i64)], &[(&str, i8)]); 5] = [
    ("table2", "1", &[], &[]),
    ("table2", "3", &[("l", 2)], &[("s", -1)]),
    ("table2", "4", &[("l", 2)], &[]),
    ("table2", "6", &[], &[("s", 1)]),
    ("n2m3", "1", &[], &[]),
];

/// 20 random group elements per germ.
pub fn codim_invariance() -> Result<(), String> {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    for (table, id, params, signs) in INVARIANCE_GERMS {
        let inst = catalog::instance(table, id, params, signs).map_err(|e| e.to_string())?;
        let a = &inst.matrix;
        let expected = ge_codimension(a, 8).exact().ok_or(format!("{inst}: no stabilization"))?;
        for k in 0..20 {
            let w = random_group_element(&mut rng, a.n(), a.nvars());
            // these germs are 6-determined, so the 6-jet carries the codimension
            let b = w.apply(a, Some(6));
            let got = ge_codimension(&b, 8).exact();
            if got != Some(expected) {
                return Err(format!("{inst} element {k}: codim {got:?} != {expected} for {b}"));
            }
        }
    }
    Ok(())
}

pub fn lda_module() -> Result<(), String> {
    let d = 4;
    let x = |i| Polynomial::var(2, i);
    let multipliers = [Polynomial::one(2), x(0), x(1), &x(0) * &x(1)];
    for (table, id, params, signs) in
        [("table2", "6", vec![], vec![("s", 1)]), ("table2", "7", vec![("l", 2)], vec![]), ("n2m3", "5", vec![("l", 2)], vec![])]
    {
        let a = catalog::instance(table, id, &params, &signs).map_err(|e| e.to_string())?.matrix;
        let jets = lda_jets(&a, d);
        for v in jets.basis() {
            for f in &multipliers {
                let fv = VectorFieldJet::new(v.components().iter().map(|c| (c * f).truncate(d)).collect());
                if !jets.contains(&fv) {
                    return Err(format!("{table}#{id}: {f} * ({v}) left the algebra"));
                }
            }
        }
    }
    Ok(())
}

/// `B(x) = Xᵀ A(Px) X` with constant `X` carries `V` to `P⁻¹ V(Px)`.
pub fn lda_conjugation() -> Result<(), String> {
    let d = 4;
    let p = [[q(1), q(1)], [q(0), q(1)]];
    let p_inv = [[q(1), q(-1)], [q(0), q(1)]];
    let phi: Vec<Poly> =
        (0..2).map(|i| Polynomial::from_terms(2, (0..2).map(|j| (Monomial::var(2, j), p[i][j].clone())))).collect();
    let x = PolyMatrix::from_scalars(2, &[vec![q(2), q(1)], vec![q(0), q(1)]]);
    for (table, id, params, signs) in [("table2", "6", vec![], vec![("s", 1)]), ("examples", "A_21", vec![], vec![("s", 1), ("t", -1)])] {
        let a = catalog::instance(table, id, &params, &signs).map_err(|e| e.to_string())?.matrix;
        let b = a.compose(&phi).congruence(&x);
        let (ja, jb) = (lda_jets(&a, d), lda_jets(&b, d));
        if ja.dim() != jb.dim() || ja.has_nonzero_trace() != jb.has_nonzero_trace() {
            return Err(format!("{table}#{id}: dims {} vs {}", ja.dim(), jb.dim()));
        }
        for v in ja.basis() {
            let moved: Vec<Poly> = v.components().iter().map(|c| c.compose(&phi)).collect();
            let w = VectorFieldJet::new(
                (0..2)
                    .map(|i| {
                        &(&moved[0] * &Polynomial::constant(2, p_inv[i][0].clone()))
                            + &(&moved[1] * &Polynomial::constant(2, p_inv[i][1].clone()))
                    })
                    .collect(),
            );
            if !jb.contains(&w) || v.linear_trace() != w.linear_trace() {
                return Err(format!("{table}#{id}: {v} -> {w}"));
            }
        }
    }
    Ok(())
}

pub const ALL: [(&str, fn() -> Result<(), String>); 7] = [
    ("ring axioms", ring_axioms),
    ("f64 vs exact", float_matches_exact),
    ("det congruence identity", det_congruence_identity),
    ("G inside Ge", g_inside_ge),
    ("codim invariance", codim_invariance),
    ("L𝒟 module", lda_module),
    ("L𝒟 conjugation", lda_conjugation),
];
