//! One PASS/FAIL line per acceptance criterion. Every check is exact; the
//! only tolerances are the pinned search budgets and grid steps below.
//!
//! Run with `cargo test --release -p germlab-core --test acceptance -- --nocapture`.

mod common;

use std::time::Instant;

use germlab_core::catalog::{self, Instance};
use germlab_core::detinv::theorem27_check;
use germlab_core::linalg::Matrix;
use germlab_core::pencil::{classify_one_jet, linear_coefficients};
use germlab_core::polyring::{parse_polynomial, Monomial, PolyMatrix, Polynomial, VectorFieldJet};
use germlab_core::quasihom::{lda_jets, qh_check, qh_find_diagonal, quasi_degrees, sqh_obstruction, SqhVerdict, WeightSystem};
use germlab_core::realsig::{component_count, GridSpec, Signature};
use germlab_core::scalar::{q, qr};
use germlab_core::tangent::{ge_codimension, mather_stratum_check, table4_family, table4_strata};
use germlab_core::unimodular::{
    moduli_quotient_dim, orientation_argument, orientation_reversing_search, unimodular_splitting, CongruenceWitness,
    SearchBudget, SearchOutcome,
};
use germlab_core::{Field, Poly, Q};
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const SEED: u64 = 0xacce97;
const CODIM_DMAX: u32 = 12;
const GENERATOR_ORDER: u32 = 6;
const SEARCH_JET_DEGREE: u32 = 3;
const SPLIT_L: i64 = 3;

struct Outcome {
    passed: bool,
    detail: String,
}

impl Outcome {
    fn new(passed: bool, detail: impl Into<String>) -> Self {
        Outcome { passed, detail: detail.into() }
    }
}

/// Collects failures while still counting every checked item.
#[derive(Default)]
struct Tally {
    checked: usize,
    failures: Vec<String>,
}

impl Tally {
    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.failures.push(what());
        }
    }

    fn outcome(self, noun: &str) -> Outcome {
        let n = self.failures.len();
        let mut detail = format!("{}/{} {noun} ok", self.checked - n, self.checked);
        if n > 0 {
            detail.push_str("; failing: ");
            detail.push_str(&self.failures.join("; "));
        }
        Outcome::new(n == 0 && self.checked > 0, detail)
    }
}

fn instances(table: &str, keep: impl Fn(&Instance) -> bool) -> Vec<Instance> {
    catalog::table(table).expect("built-in table").into_iter().filter(keep).collect()
}

fn params_at_most(inst: &Instance, max: i64) -> bool {
    inst.params.values().all(|&v| v <= max)
}

fn field(parts: &[&str]) -> Field {
    VectorFieldJet::new(parts.iter().map(|p| parse_polynomial(p, 2).expect("static field")).collect())
}

fn random_invertible(rng: &mut ChaCha8Rng) -> Vec<Vec<Q>> {
    loop {
        let m: Vec<Vec<Q>> = (0..2).map(|_| (0..2).map(|_| q(rng.gen_range(-3..=3))).collect()).collect();
        if !Matrix::from_rows(m.clone()).det().is_zero() {
            return m;
        }
    }
}

fn criterion_1() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut t = Tally::default();
    for inst in instances("table1", |_| true) {
        let expect = (inst.id.clone(), inst.sign("s"), inst.rank);
        let classify = |a: &germlab_core::Sym| {
            let (c, d) = linear_coefficients(a);
            classify_one_jet(&c, &d).map(|k| (k.class_id.to_string(), k.sign, Some(k.rank)))
        };
        let got = classify(&inst.matrix);
        t.check(got.as_ref().ok() == Some(&expect), || format!("{} gave {got:?}", inst.label()));
        for k in 0..50 {
            let p = random_invertible(&mut rng);
            let phi: Vec<Poly> =
                (0..2).map(|i| Polynomial::from_terms(2, (0..2).map(|j| (Monomial::var(2, j), p[i][j].clone())))).collect();
            let x = PolyMatrix::from_scalars(2, &random_invertible(&mut rng));
            let b = CongruenceWitness { phi, x }.apply(&inst.matrix, None);
            let got = classify(&b);
            t.check(got.as_ref().ok() == Some(&expect), || format!("{} transform {k} ({b}) gave {got:?}", inst.label()));
        }
    }
    t.outcome("representatives and transforms")
}

fn criterion_2() -> Outcome {
    let reports = match mather_stratum_check(&table4_family(), &table4_strata()) {
        Ok(r) => r,
        Err(e) => return Outcome::new(false, e.to_string()),
    };
    let mut t = Tally::default();
    for r in &reports {
        t.check(r.passed() && r.dims.len() >= 3, || format!("{} expected {} got {:?}", r.name, r.expected_dim, r.dims));
    }
    t.outcome("strata")
}

fn criterion_3() -> Outcome {
    let mut t = Tally::default();
    let rows = instances("table2", |i| params_at_most(i, 4)).into_iter().chain(instances("n2m3", |i| params_at_most(i, 3)));
    for inst in rows {
        let got = ge_codimension(&inst.matrix, CODIM_DMAX).exact();
        t.check(got.is_some() && got == inst.codim, || format!("{} expected {:?} got {got:?}", inst.label(), inst.codim));
    }
    t.outcome("codimensions")
}

fn criterion_4() -> Outcome {
    let mut t = Tally::default();
    for table in ["bruce22", "bruce23", "bruce43"] {
        for inst in instances(table, |_| true) {
            let w = WeightSystem::new(inst.lambda.clone().unwrap_or_default(), inst.delta.clone().unwrap_or_default());
            t.check(qh_check(&inst.matrix, &w), || format!("{} weights {w:?}", inst.label()));
        }
    }
    for table in ["table3", "uni_n2m3"] {
        for inst in instances(table, |_| true) {
            let lambda = inst.lambda.clone().unwrap_or_default();
            let system = match &inst.delta {
                Some(delta) => Some(WeightSystem::new(lambda, delta.clone())),
                None => quasi_degrees(&inst.matrix, &lambda).map(|delta| WeightSystem::new(lambda, delta)),
            };
            t.check(system.as_ref().is_some_and(|w| qh_check(&inst.matrix, w)), || format!("{} column {system:?}", inst.label()));
        }
    }
    for table in ["table2", "table3", "n2m3", "uni_n2m3"] {
        for inst in instances(table, |_| true) {
            let found = qh_find_diagonal(&inst.matrix);
            t.check(found.as_ref().is_some_and(|w| qh_check(&inst.matrix, w)), || format!("{} no diagonal system", inst.label()));
        }
    }
    t.outcome("weight checks")
}

fn criterion_5() -> Outcome {
    let mut t = Tally::default();
    for inst in catalog::entry("examples", "A_21").expect("built-in row") {
        let v = sqh_obstruction(&inst.matrix, 10).verdict;
        t.check(v == SqhVerdict::NotSqh, || format!("{} verdict {v:?}", inst.label()));
        let (d1, d2) = (inst.sign("s").unwrap_or(1), inst.sign("t").unwrap_or(1));
        let jets = lda_jets(&inst.matrix, GENERATOR_ORDER);
        let g1 = [format!("{}*x1*x2 + 25*x1*x2^2", 16 * d1), format!("{}*x1 + {}*x2^2 + 10*x2^3", 2 * d1 * d2, 10 * d1)];
        let g2 = [format!("5*x1^2 + {d2}*x1*x2^2"), "2*x1*x2".to_string()];
        for g in [g1, g2] {
            t.check(jets.contains(&field(&[&g[0], &g[1]])), || format!("{} generator {g:?} not in L𝒟", inst.label()));
        }
    }
    let ah = catalog::instance("examples", "A_h", &[], &[]).expect("built-in row");
    let v = sqh_obstruction(&ah.matrix, 12).verdict;
    t.check(v == SqhVerdict::NotSqh, || format!("A_h verdict {v:?}"));
    let jets = lda_jets(&ah.matrix, GENERATOR_ORDER.max(9));
    let printed: [[&str; 2]; 4] = [
        ["x1^2 + 3*x1*x2^3", "3*x1*x2 + x2^4"],
        ["x1*x2^2 + 9*x1^2*x2^3", "8*x1^2*x2 + 3*x2^3 + 3*x1*x2^4"],
        [
            "117*x1^3*x2 - 7*x1^4*x2^2 + 192*x1^2*x2^4 + 60*x2^6 + 56*x1*x2^7",
            "36*x1^4 + 171*x1^2*x2^2 - 21*x1^3*x2^3 + 156*x1*x2^5",
        ],
        ["45*x1*x2^4 - 95*x1^4*x2^3 + 114*x1^2*x2^5 + 120*x2^7", "135*x2^5 - 69*x1^3*x2^4 + 222*x1*x2^6 + 112*x1*x2^8"],
    ];
    for (k, g) in printed.iter().enumerate() {
        t.check(jets.contains(&field(g)), || format!("A_h generator {} not in L𝒟", k + 1));
    }
    for id in ["A_alpha_beta", "A_beta"] {
        for inst in catalog::entry("examples", id).expect("built-in row") {
            let v = sqh_obstruction(&inst.matrix, 8).verdict;
            let ok = matches!(&v, SqhVerdict::Sqh(w) if w.lambda == vec![2, 1] && qh_check(&inst.matrix, w));
            t.check(ok, || format!("{} verdict {v:?}", inst.label()));
        }
    }
    t.outcome("certificates and memberships")
}

fn criterion_6() -> Outcome {
    let a = catalog::instance("examples", "A_21", &[], &[("s", 1), ("t", 1)]).expect("built-in row").matrix;
    let mut t = Tally::default();
    for d in 2..=6 {
        let r = moduli_quotient_dim(&a, d);
        t.check(r.quotient_dim == 1 && r.quotient_monomials == ["1"], || {
            format!("d={d}: dim {} spanned by {:?}", r.quotient_dim, r.quotient_monomials)
        });
    }
    t.outcome("truncations")
}

fn criterion_7() -> Outcome {
    let mut t = Tally::default();
    for table in ["table5", "table7"] {
        for inst in instances(table, |i| params_at_most(i, 4)) {
            let (Some(phi), Some(x)) = (inst.phi.clone(), inst.x.clone()) else {
                t.check(false, || format!("{} has no witness", inst.label()));
                continue;
            };
            let w = CongruenceWitness { phi, x };
            let degree = exact_degree(&w, &inst);
            let v = w.verify(&inst.matrix, &inst.matrix, degree);
            let ok = matches!(&v, Ok(v) if v.holds && v.orientation_sign == -1);
            t.check(ok, || format!("{} gave {v:?}", inst.label()));
        }
    }
    t.outcome("witnesses")
}

/// A degree past every term of `Xᵀ(A∘Φ)X`, so the check is an identity.
fn exact_degree(w: &CongruenceWitness<Q>, inst: &Instance) -> u32 {
    let phi = w.phi.iter().filter_map(|p| p.degree()).max().unwrap_or(1).max(1);
    let x = (0..w.x.rows()).flat_map(|i| (0..w.x.cols()).map(move |j| (i, j))).filter_map(|(i, j)| w.x.get(i, j).degree()).max();
    inst.matrix.degree().unwrap_or(0) * phi + 2 * x.unwrap_or(0)
}

fn split_instances(table: &str, id: &str) -> Vec<Instance> {
    let all = catalog::entry(table, id).expect("built-in row");
    let at_l: Vec<Instance> = all.iter().filter(|i| i.params.values().all(|&v| v == SPLIT_L)).cloned().collect();
    if at_l.is_empty() {
        all.into_iter().filter(|i| params_at_most(i, SPLIT_L)).take(1).collect()
    } else {
        at_l
    }
}

fn search(a: &germlab_core::Sym) -> SearchOutcome {
    orientation_reversing_search(a, SEARCH_JET_DEGREE, &SearchBudget::default())
}

fn criterion_8() -> Outcome {
    let mut t = Tally::default();
    for (table, ids) in [("table2", 1..=10), ("n2m3", 1..=10)] {
        for id in ids.map(|i| i.to_string()) {
            let rec = match unimodular_splitting(table, &id) {
                Ok(r) => r,
                Err(e) => {
                    t.check(false, || e.to_string());
                    continue;
                }
            };
            for inst in split_instances(table, &id) {
                if rec.splits {
                    let degree = rec.orientation.as_ref().map_or(2, |p| p.degree);
                    let proof = orientation_argument(&inst.matrix, degree);
                    t.check(proof.preserves_orientation(), || format!("{}: orientation argument does not close", inst.label()));
                    let s = search(&inst.matrix);
                    t.check(s.found().is_none(), || format!("{}: split class has a reversing witness", inst.label()));
                } else {
                    let s = search(&inst.matrix);
                    let ok = s.found().is_some_and(|w| {
                        w.verify(&inst.matrix, &inst.matrix, SEARCH_JET_DEGREE).is_ok_and(|v| v.holds && v.orientation_sign == -1)
                    });
                    t.check(ok, || format!("{}: no reversing witness within budget", inst.label()));
                }
            }
        }
    }
    t.outcome("splitting checks")
}

fn criterion_9() -> Outcome {
    let spec = GridSpec::new(q(1), qr(1, 100));
    let target = Signature(2, 0, 0);
    let mut t = Tally::default();
    for (s, expected) in [(1, 1), (-1, 2)] {
        let a = catalog::instance("examples", "A_pm", &[("k", 2)], &[("s", s)]).expect("built-in row").matrix;
        let coarse = component_count(&a, target, &spec).map(|r| r.components);
        let fine = component_count(&a, target, &spec.halved()).map(|r| r.components);
        let label = if s > 0 { "A+" } else { "A-" };
        t.check(matches!((&coarse, &fine), (Ok(c), Ok(f)) if *c == expected && *f == expected), || {
            format!("{label}: expected {expected}, got {coarse:?} at h=1/100 and {fine:?} at h=1/200")
        });
    }
    t.outcome("component counts")
}

fn criterion_10() -> Outcome {
    let mut t = Tally::default();
    let rows: [(&str, &[(&str, i64)]); 6] =
        [("1", &[]), ("3", &[("l", 2)]), ("3", &[("l", 3)]), ("5", &[("l1", 2), ("l2", 2)]), ("6", &[]), ("7", &[("l", 2)])];
    for (id, params) in rows {
        for inst in catalog::entry("table2", id).expect("built-in row") {
            if params.iter().any(|(k, v)| inst.param(k) != Some(*v)) {
                continue;
            }
            match theorem27_check(&inst.matrix, 14) {
                Ok(r) => {
                    let independent = r.mu.stabilized && r.codim.stabilized && r.koszul.stabilized;
                    let identity = r.mu.dimension + r.koszul.beta1 == r.codim.value + r.koszul.beta0;
                    t.check(r.holds && independent && identity && Some(r.codim.value) == inst.codim, || {
                        format!(
                            "{}: mu {} codim {} beta0 {} beta1 {}",
                            inst.label(),
                            r.mu.dimension,
                            r.codim.value,
                            r.koszul.beta0,
                            r.koszul.beta1
                        )
                    });
                }
                Err(e) => t.check(false, || format!("{}: {e}", inst.label())),
            }
        }
    }
    t.outcome("identities")
}

fn criterion_11() -> Outcome {
    let mut t = Tally::default();
    for (name, run) in common::properties::ALL {
        let r = run();
        t.check(r.is_ok(), || format!("{name}: {}", r.unwrap_err()));
    }
    t.outcome("property suites")
}

#[test]
fn acceptance() {
    let criteria: [(&str, fn() -> Outcome); 11] = [
        ("1-jet classes of table1", criterion_1),
        ("jet orbit strata of table4", criterion_2),
        ("Ge-codimension goldens", criterion_3),
        ("quasi-homogeneity goldens", criterion_4),
        ("non-SQH certificates", criterion_5),
        ("moduli quotient of A_21", criterion_6),
        ("orientation-reversing witnesses", criterion_7),
        ("splitting consistency", criterion_8),
        ("signature component counts", criterion_9),
        ("Milnor number identity", criterion_10),
        ("property suites", criterion_11),
    ];
    let mut failed = Vec::new();
    println!();
    for (k, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let o = run();
        let verdict = if o.passed { "PASS" } else { "FAIL" };
        println!("[{verdict}] {:>2}. {name} ({:.1}s): {}", k + 1, start.elapsed().as_secs_f64(), o.detail);
        if !o.passed {
            failed.push(k + 1);
        }
    }
    assert!(failed.is_empty(), "failing criteria: {failed:?}");
}
