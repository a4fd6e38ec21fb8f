use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::witness::CongruenceWitness;
use crate::linalg::{JetCoords, Matrix};
use crate::polyring::{sym_positions, Monomial, PolyMatrix, Polynomial, SymMatrix};
use crate::scalar::{Scalar, q, qr};
use crate::{Sym, Q};

/// Limits of the randomized search.
#[derive(Clone, Debug, Serialize)]
pub struct SearchBudget {
    pub restarts: usize,
    pub iterations: usize,
    pub seed: u64,
    /// Degree of the coordinate change `Φ`; `X` gets degree one less.
    pub field_degree: u32,
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget { restarts: 24, iterations: 120, seed: 0x5eed, field_degree: 1 }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum SearchOutcome {
    /// Exactly verified with orientation sign −1.
    Found(CongruenceWitness<Q>),
    /// Not a proof that none exists.
    NotFoundWithinBudget { restarts: usize },
}

impl SearchOutcome {
    pub fn found(&self) -> Option<&CongruenceWitness<Q>> {
        match self {
            SearchOutcome::Found(w) => Some(w),
            SearchOutcome::NotFoundWithinBudget { .. } => None,
        }
    }
}

/// Unknown coefficients of `(Φ, X)`.
struct Layout {
    r: usize,
    n: usize,
    phi: Vec<(usize, Monomial)>,
    x: Vec<(usize, usize, Monomial)>,
}

impl Layout {
    fn new(r: usize, n: usize, degree: u32) -> Self {
        let mut phi = Vec::new();
        for i in 0..r {
            for m in Monomial::up_to_degree(r, 1, degree) {
                phi.push((i, m));
            }
        }
        let mut x = Vec::new();
        for p in 0..n {
            for c in 0..n {
                for m in Monomial::up_to_degree(r, 0, degree - 1) {
                    x.push((p, c, m));
                }
            }
        }
        Layout { r, n, phi, x }
    }

    fn len(&self) -> usize {
        self.phi.len() + self.x.len()
    }

    fn witness<S: Scalar>(&self, theta: &[S]) -> CongruenceWitness<S> {
        let mut phi = vec![Polynomial::zero(self.r); self.r];
        for (k, (i, m)) in self.phi.iter().enumerate() {
            phi[*i].add_term(m.clone(), theta[k].clone());
        }
        let mut x = PolyMatrix::zero(self.n, self.n, self.r);
        let off = self.phi.len();
        for (k, (p, c, m)) in self.x.iter().enumerate() {
            let mut e = x.get(*p, *c).clone();
            e.add_term(m.clone(), theta[off + k].clone());
            x.set(*p, *c, e);
        }
        CongruenceWitness { phi, x }
    }

    fn linear_det(&self, theta: &[f64]) -> f64 {
        self.witness(theta).jacobian_at_origin().det()
    }

    fn x0_det(&self, theta: &[f64]) -> f64 {
        Matrix::from_rows(self.witness(theta).x.at_origin()).det()
    }
}

struct Problem<'a> {
    layout: &'a Layout,
    a: SymMatrix<f64>,
    b: SymMatrix<f64>,
    coords: JetCoords,
    degree: u32,
    /// Required sign of `det dΦ(0)`, if any.
    orientation: Option<i8>,
}

impl Problem<'_> {
    fn residual(&self, theta: &[f64]) -> Vec<f64> {
        // rounding breaks exact symmetry, so read the upper triangle directly
        let w = self.layout.witness(theta);
        let d = Some(self.degree);
        let composed = self.a.map(|p| p.compose_truncated(&w.phi, self.degree)).to_full();
        let full = w.x.transpose().mul_truncated(&composed, d).mul_truncated(&w.x, d);
        let diff: Vec<Polynomial<f64>> =
            sym_positions(self.layout.n).into_iter().map(|(i, j)| full.get(i, j) - self.b.get(i, j)).collect();
        self.coords.encode(&diff).to_dense(self.coords.len())
    }

    /// Levenberg–Marquardt over the unknowns not in `fixed`.
    fn minimize(&self, theta: &mut [f64], fixed: &[bool], iterations: usize) -> f64 {
        let free: Vec<usize> = (0..theta.len()).filter(|&k| !fixed[k]).collect();
        let mut res = self.residual(theta);
        let mut norm = res.iter().map(|x| x * x).sum::<f64>().sqrt();
        let mut mu = 1e-3;
        for _ in 0..iterations {
            if norm < 1e-13 || free.is_empty() {
                break;
            }
            let h = 1e-6;
            let cols: Vec<Vec<f64>> = free
                .iter()
                .map(|&k| {
                    let (mut up, mut down) = (theta.to_vec(), theta.to_vec());
                    up[k] += h;
                    down[k] -= h;
                    let (ru, rd) = (self.residual(&up), self.residual(&down));
                    ru.iter().zip(&rd).map(|(a, b)| (a - b) / (2.0 * h)).collect()
                })
                .collect();
            let f = free.len();
            let mut jtj = Matrix::<f64>::zeros(f, f);
            let mut jtr = vec![0.0; f];
            for a in 0..f {
                for b in 0..f {
                    jtj[(a, b)] = cols[a].iter().zip(&cols[b]).map(|(x, y)| x * y).sum();
                }
                jtr[a] = -cols[a].iter().zip(&res).map(|(x, y)| x * y).sum::<f64>();
            }
            let mut improved = false;
            for _ in 0..8 {
                let mut m = jtj.clone();
                for a in 0..f {
                    m[(a, a)] += mu * (1.0 + jtj[(a, a)]);
                }
                let Some(step) = m.solve(&jtr) else {
                    mu *= 10.0;
                    continue;
                };
                let mut trial = theta.to_vec();
                for (a, &k) in free.iter().enumerate() {
                    trial[k] += step[a];
                }
                let tr = self.residual(&trial);
                let tn = tr.iter().map(|x| x * x).sum::<f64>().sqrt();
                if tn < norm {
                    theta.copy_from_slice(&trial);
                    res = tr;
                    norm = tn;
                    mu = (mu / 3.0).max(1e-12);
                    improved = true;
                    break;
                }
                mu *= 4.0;
            }
            if !improved {
                break;
            }
        }
        norm
    }

    fn acceptable(&self, theta: &[f64], norm: f64) -> bool {
        let jac = self.layout.linear_det(theta);
        let oriented = match self.orientation {
            Some(s) => jac * f64::from(s) > 1e-6,
            None => jac.abs() > 1e-6,
        };
        norm < 1e-8 && oriented && self.layout.x0_det(theta).abs() > 1e-6
    }
}

/// Fixes unknowns one at a time to nearby small rationals, re-solving for
/// the rest after each step.
fn round_to_rationals(p: &Problem, theta: &mut Vec<f64>, iterations: usize) -> Option<Vec<Q>> {
    let k = theta.len();
    let mut fixed = vec![false; k];
    let mut values: Vec<Option<Q>> = vec![None; k];
    while fixed.iter().any(|f| !f) {
        let mut done = false;
        'dens: for den in 1..=4i64 {
            let mut order: Vec<usize> = (0..k).filter(|&j| !fixed[j]).collect();
            let dist = |j: usize| {
                let s = theta[j] * den as f64;
                (s - s.round()).abs()
            };
            order.sort_by(|&a, &b| dist(a).total_cmp(&dist(b)));
            for j in order {
                let num = (theta[j] * den as f64).round();
                let mut trial = theta.clone();
                trial[j] = num / den as f64;
                let mut tf = fixed.clone();
                tf[j] = true;
                let norm = p.minimize(&mut trial, &tf, iterations);
                if p.acceptable(&trial, norm) {
                    *theta = trial;
                    fixed = tf;
                    values[j] = Some(qr(num as i64, den));
                    done = true;
                    break 'dens;
                }
            }
        }
        if !done {
            return None;
        }
    }
    Some(values.into_iter().map(|v| v.unwrap_or_else(|| q(0))).collect())
}

/// Randomized search for `(Φ, X)` with `A = Xᵀ(A∘Φ)X` modulo degree above
/// `jet_degree` and `det dΦ(0) < 0`. Only exactly verified witnesses are
/// reported.
pub fn orientation_reversing_search(a: &Sym, jet_degree: u32, budget: &SearchBudget) -> SearchOutcome {
    search(a, a, jet_degree, budget, Some(-1))
}

/// Randomized search for `(Φ, X)` with `B = Xᵀ(A∘Φ)X` modulo degree above
/// `jet_degree`. Only exactly verified witnesses are reported.
pub fn congruence_search(a: &Sym, b: &Sym, jet_degree: u32, budget: &SearchBudget) -> SearchOutcome {
    search(a, b, jet_degree, budget, None)
}

fn search(a: &Sym, b: &Sym, jet_degree: u32, budget: &SearchBudget, orientation: Option<i8>) -> SearchOutcome {
    let (r, n) = (a.nvars(), a.n());
    let layout = Layout::new(r, n, budget.field_degree.max(1));
    let problem = Problem {
        layout: &layout,
        a: a.truncate(jet_degree).map_coeffs(Scalar::to_f64),
        b: b.truncate(jet_degree).map_coeffs(Scalar::to_f64),
        coords: JetCoords::sym(n, r, 0, jet_degree),
        degree: jet_degree,
        orientation,
    };
    let target = b.truncate(jet_degree);
    for restart in 0..budget.restarts {
        let mut rng = ChaCha8Rng::seed_from_u64(budget.seed.wrapping_add(restart as u64));
        let mut theta: Vec<f64> = (0..layout.len()).map(|_| rng.gen_range(-1.5..1.5)).collect();
        if let Some(s) = orientation {
            if layout.linear_det(&theta) * f64::from(s) < 0.0 {
                // flip the first coordinate's linear part
                for (k, (i, m)) in layout.phi.iter().enumerate() {
                    if *i == 0 && m.degree() == 1 {
                        theta[k] = -theta[k];
                    }
                }
            }
        }
        let norm = problem.minimize(&mut theta, &vec![false; layout.len()], budget.iterations);
        if !problem.acceptable(&theta, norm) {
            continue;
        }
        let Some(exact) = round_to_rationals(&problem, &mut theta, budget.iterations) else { continue };
        let w = layout.witness(&exact);
        if let Ok(v) = w.verify(a, &target, jet_degree) {
            if v.holds && orientation.map_or(true, |s| s == v.orientation_sign) {
                return SearchOutcome::Found(w);
            }
        }
    }
    SearchOutcome::NotFoundWithinBudget { restarts: budget.restarts }
}
