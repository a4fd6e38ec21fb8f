use serde::Serialize;

use super::local::{local_algebra_dim, LocalAlgebraReport};
use crate::linalg::{kernel, JetCoords, JetSubspace, SparseVec};
use crate::polyring::{Monomial, Polynomial};
use crate::scalar::Scalar;

/// Homology of the Koszul complex on a list of generators, localized at the
/// origin.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct KoszulReport {
    pub generators: Vec<String>,
    pub beta0: usize,
    pub beta1: usize,
    pub stabilized: bool,
    /// Colength computation behind `beta0`.
    pub colength: LocalAlgebraReport,
    /// Per truncation level `s`: the image of `H₁` (and of `H₂`) in chains
    /// of degree `< s`.
    pub levels: Vec<KoszulLevel>,
    /// Finite colength in two variables: `Hⱼ = 0` for `j ≥ 2` since the
    /// ideal has depth two.
    pub higher_vanish_by_depth: bool,
    /// Rank bookkeeping of the complex truncated at the final level.
    pub truncated: Option<TruncatedComplex>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct KoszulLevel {
    pub level: u32,
    pub h1: usize,
    pub h2: usize,
}

/// The complex `K/m^s K` with `Kⱼ` in chain degrees `0..=k`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TruncatedComplex {
    pub level: u32,
    pub chain_dims: Vec<usize>,
    /// `boundary_ranks[j]` is the rank of `dⱼ : Kⱼ → Kⱼ₋₁` (`j ≥ 1`).
    pub boundary_ranks: Vec<usize>,
    pub homology_dims: Vec<usize>,
}

impl TruncatedComplex {
    /// `Σ (−1)ʲ dim Kⱼ = Σ (−1)ʲ dim Hⱼ`.
    pub fn euler_consistent(&self) -> bool {
        let alt = |v: &[usize]| v.iter().enumerate().map(|(j, &x)| if j % 2 == 0 { x as i64 } else { -(x as i64) }).sum::<i64>();
        alt(&self.chain_dims) == alt(&self.homology_dims)
    }
}

fn subsets(k: usize, j: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, k: usize, j: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == j {
            out.push(cur.clone());
            return;
        }
        for i in start..k {
            cur.push(i);
            go(i + 1, k, j, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, k, j, &mut Vec::new(), &mut out);
    out
}

struct Complex<'a, S: Scalar> {
    gens: &'a [Polynomial<S>],
    nvars: usize,
    /// Basis subsets of each `Kⱼ`.
    bases: Vec<Vec<Vec<usize>>>,
}

impl<S: Scalar> Complex<'_, S> {
    fn coords(&self, j: usize, lo: u32, hi: u32) -> JetCoords {
        JetCoords::new(self.bases[j].len(), self.nvars, lo, hi)
    }

    /// `d(x^m e_T)` as components over the basis of `K_{j−1}`.
    fn boundary(&self, j: usize, t: usize, m: &Monomial) -> Vec<Polynomial<S>> {
        let mut parts = vec![Polynomial::zero(self.nvars); self.bases[j - 1].len()];
        let set = &self.bases[j][t];
        for (p, &g) in set.iter().enumerate() {
            let rest: Vec<usize> = set.iter().copied().filter(|&x| x != g).collect();
            let idx = self.bases[j - 1].iter().position(|b| *b == rest).expect("face of a basis subset");
            let term = self.gens[g].mul_monomial(m);
            parts[idx] = if p % 2 == 0 { &parts[idx] + &term } else { &parts[idx] - &term };
        }
        parts
    }

    fn images(&self, j: usize, source: &JetCoords, target: &JetCoords) -> Vec<SparseVec<S>> {
        (0..source.len())
            .map(|i| {
                let (t, m) = source.coordinate(i);
                target.encode(&self.boundary(j, *t, m))
            })
            .collect()
    }

    /// Boundaries `dⱼ₊₁(K_{j+1})` truncated to degree `< s`.
    fn boundaries(&self, j: usize, s: u32) -> JetSubspace<S> {
        let target = self.coords(j, 0, s - 1);
        if j + 1 >= self.bases.len() {
            return JetSubspace::new(target.len());
        }
        let source = self.coords(j + 1, 0, s - 1);
        JetSubspace::span(target.len(), self.images(j + 1, &source, &target)).expect("same coordinates")
    }

    /// Degree-`< s` jets `a` of chains in `Kⱼ` with `d(a) ∈ d(m^s Kⱼ)`
    /// modulo degree `s + tail`.
    fn cycle_jets(&self, j: usize, s: u32, tail: u32) -> JetSubspace<S> {
        let low = self.coords(j, 0, s - 1);
        let high = self.coords(j, s, s + tail - 1);
        let target = self.coords(j - 1, 0, s + tail - 1);
        let mut images = self.images(j, &low, &target);
        images.extend(self.images(j, &high, &target).into_iter().map(|mut v| {
            v.scale(&-S::one());
            v
        }));
        let n = low.len();
        JetSubspace::span(n, kernel(&images).into_iter().map(|v| v.restrict(0, n))).expect("restricted to low part")
    }

    fn homology_image(&self, j: usize, s: u32, tail: u32) -> usize {
        let z = self.cycle_jets(j, s, tail);
        let b = self.boundaries(j, s);
        debug_assert!(z.contains_subspace(&b));
        z.sum(&b).dim() - b.dim()
    }

    fn truncated(&self, s: u32) -> TruncatedComplex {
        let k = self.bases.len() - 1;
        let chain_dims: Vec<usize> = (0..=k).map(|j| self.coords(j, 0, s - 1).len()).collect();
        let mut boundary_ranks = vec![0; k + 2];
        for j in 1..=k {
            let (src, tgt) = (self.coords(j, 0, s - 1), self.coords(j - 1, 0, s - 1));
            boundary_ranks[j] = JetSubspace::span(tgt.len(), self.images(j, &src, &tgt)).expect("same coordinates").dim();
        }
        let homology_dims = (0..=k).map(|j| chain_dims[j] - boundary_ranks[j] - boundary_ranks[j + 1]).collect();
        boundary_ranks.truncate(k + 1);
        TruncatedComplex { level: s, chain_dims, boundary_ranks, homology_dims }
    }
}

/// `β₀ = dim R/I` and `β₁ = dim H₁` of the Koszul complex on `generators`
/// in the local ring at the origin.
///
/// `H₁` is read off level by level: at level `s` the image of `H₁` in the
/// chains of degree `< s` is computed exactly, using that a jet extends to a
/// cycle iff its boundary lies in `m^s I`, and `m^s I` contains everything
/// of degree `≥ s + N` once `m^N ⊂ I`. The images grow with `s` and reach
/// `H₁` because `H₁` is killed by `m^N`. The value is accepted once it has
/// not changed for `slack + 1` levels past `N`, where `slack` is the largest
/// generator degree.
pub fn koszul_betti<S: Scalar>(generators: &[Polynomial<S>], nvars: usize, dmax: u32) -> KoszulReport {
    let colength = local_algebra_dim(generators, nvars, dmax);
    let k = generators.len();
    let complex =
        Complex { gens: generators, nvars, bases: (0..=k).map(|j| subsets(k, j)).collect() };
    let mut report = KoszulReport {
        generators: generators.iter().map(ToString::to_string).collect(),
        beta0: colength.dimension,
        beta1: 0,
        stabilized: false,
        colength: colength.clone(),
        levels: Vec::new(),
        higher_vanish_by_depth: false,
        truncated: None,
    };
    let Some(n) = colength.certificate_degree else { return report };
    report.higher_vanish_by_depth = nvars == 2;
    if k == 0 {
        report.stabilized = true;
        return report;
    }
    let tail = n.max(1);
    let slack = generators.iter().filter_map(|g| g.degree()).max().unwrap_or(1).max(1);
    let mut run = 0;
    for s in 1..=dmax.max(n + slack + 2) {
        let h1 = complex.homology_image(1, s, tail);
        let h2 = if k >= 2 { complex.homology_image(2, s, tail) } else { 0 };
        run = match report.levels.last() {
            Some(prev) if prev.h1 == h1 => run + 1,
            _ => 0,
        };
        report.levels.push(KoszulLevel { level: s, h1, h2 });
        report.beta1 = h1;
        if s > n && run >= slack {
            report.stabilized = true;
            report.truncated = Some(complex.truncated(s));
            break;
        }
    }
    report
}
