use alloc::vec::Vec;
use rand_core::RngCore;

use super::{reference_measure, StateIndex, DEFAULT_STATE_CAP};
use crate::error::{Error, Result};
use crate::math;
use crate::model::{apply_event, event_rate, Event, ModelParams, Profile};
use crate::rng;

/// A nonnegative function on the state space with `Σ_η f(η)ν(η) = 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityFunction {
    values: Vec<f64>,
}

impl DensityFunction {
    /// Rescales `weights` to unit `ν`-integral.
    pub fn normalized(weights: Vec<f64>, nu: &[f64]) -> Result<Self> {
        if weights.len() != nu.len() {
            return Err(Error::invalid("density and reference measure differ in length"));
        }
        if weights.iter().any(|&w| !(w >= 0.0) || !w.is_finite()) {
            return Err(Error::invalid("density values must be finite and nonnegative"));
        }
        let mass: f64 = weights.iter().zip(nu).map(|(w, n)| w * n).sum();
        if !(mass > 0.0) {
            return Err(Error::invalid("density has zero mass"));
        }
        Ok(Self { values: weights.into_iter().map(|w| w / mass).collect() })
    }

    /// `f ≡ 1`.
    pub fn constant(len: usize) -> Self {
        Self { values: alloc::vec![1.0; len] }
    }

    /// Independent uniform weights on `(0.05, 1.05)`, normalized.
    pub fn random<R: RngCore + ?Sized>(nu: &[f64], rng: &mut R) -> Result<Self> {
        let w = (0..nu.len()).map(|_| 0.05 + rng::uniform(rng)).collect();
        Self::normalized(w, nu)
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// `D^ℓ`, the per-bond `D^{x,x+1}`, `D^{x+1,x}` (index `x − 1`) and `D^r`.
#[derive(Debug, Clone, PartialEq)]
pub struct DirichletForms {
    pub left: f64,
    pub bulk_right: Vec<f64>,
    pub bulk_left: Vec<f64>,
    pub right: f64,
}

impl DirichletForms {
    pub fn bulk(&self) -> f64 {
        self.bulk_right.iter().sum::<f64>() + self.bulk_left.iter().sum::<f64>()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GeneratorPart {
    Left,
    Bulk,
    Right,
}

impl GeneratorPart {
    fn contains(self, e: Event) -> bool {
        match self {
            GeneratorPart::Left => matches!(e, Event::InjectLeft | Event::RemoveLeft),
            GeneratorPart::Bulk => e.is_bulk(),
            GeneratorPart::Right => matches!(e, Event::InjectRight | Event::RemoveRight),
        }
    }
}

struct Space {
    index: StateIndex,
    nu: Vec<f64>,
    root: Vec<f64>,
}

fn space(params: &ModelParams, varrho: &Profile, f: &DensityFunction) -> Result<Space> {
    let index = StateIndex::new(params.alpha(), params.sites(), DEFAULT_STATE_CAP)?;
    if f.len() != index.len() {
        return Err(Error::invalid("density does not match the state space"));
    }
    let nu = reference_measure(params, varrho, &index)?;
    let mass: f64 = f.values.iter().zip(&nu).map(|(a, b)| a * b).sum();
    if (mass - 1.0).abs() > 1e-10 {
        return Err(Error::InvalidArgument(alloc::format!(
            "density integrates to {mass} against this reference measure"
        )));
    }
    let root = f.values.iter().map(|&v| math::sqrt(v)).collect();
    Ok(Space { index, nu, root })
}

/// Visits every `(state, event, rate, target)` with positive rate.
fn for_each_jump(params: &ModelParams, index: &StateIndex, mut visit: impl FnMut(usize, Event, f64, usize)) {
    let events: Vec<Event> = Event::all(params.n()).collect();
    for i in 0..index.len() {
        let c = index.decode(i);
        for &e in &events {
            let r = event_rate(params, &c, e);
            if r > 0.0 {
                let j = index.encode(&apply_event(&c, e)).expect("same state space");
                visit(i, e, r, j);
            }
        }
    }
}

pub fn dirichlet_forms(params: &ModelParams, varrho: &Profile, f: &DensityFunction) -> Result<DirichletForms> {
    let s = space(params, varrho, f)?;
    let bonds = params.sites().saturating_sub(1);
    let mut out = DirichletForms {
        left: 0.0,
        bulk_right: alloc::vec![0.0; bonds],
        bulk_left: alloc::vec![0.0; bonds],
        right: 0.0,
    };
    for_each_jump(params, &s.index, |i, e, r, j| {
        let d = s.root[j] - s.root[i];
        let term = s.nu[i] * r * d * d;
        match e {
            Event::BulkRight(x) => out.bulk_right[x - 1] += term,
            Event::BulkLeft(x) => out.bulk_left[x - 1] += term,
            Event::InjectLeft | Event::RemoveLeft => out.left += term,
            Event::InjectRight | Event::RemoveRight => out.right += term,
        }
    });
    Ok(out)
}

/// `⟨𝓛_a√f, √f⟩_ν` for one part of the generator.
pub fn generator_pairing(
    params: &ModelParams,
    varrho: &Profile,
    f: &DensityFunction,
    part: GeneratorPart,
) -> Result<f64> {
    let s = space(params, varrho, f)?;
    let mut total = 0.0;
    for_each_jump(params, &s.index, |i, e, r, j| {
        if part.contains(e) {
            total += s.nu[i] * r * (s.root[j] - s.root[i]) * s.root[i];
        }
    });
    Ok(total)
}

/// Residuals `|⟨𝓛_a√f,√f⟩_ν + ½D^a|` at both reservoirs. The identity is exact
/// when `ϱ(1/N) = ε/(ε+γ)` (left) and `ϱ(1−1/N) = δ/(δ+β)` (right); the flags
/// report whether `ϱ` satisfies those conditions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundaryIdentity {
    pub left_residual: f64,
    pub right_residual: f64,
    pub left_matched: bool,
    pub right_matched: bool,
}

impl BoundaryIdentity {
    pub fn matched(&self) -> bool {
        self.left_matched && self.right_matched
    }

    pub fn max_residual(&self) -> f64 {
        self.left_residual.max(self.right_residual)
    }
}

pub fn boundary_carre_du_champ_identity(
    params: &ModelParams,
    varrho: &Profile,
    f: &DensityFunction,
) -> Result<BoundaryIdentity> {
    let forms = dirichlet_forms(params, varrho, f)?;
    let left = generator_pairing(params, varrho, f, GeneratorPart::Left)?;
    let right = generator_pairing(params, varrho, f, GeneratorPart::Right)?;
    let n = params.n() as f64;
    Ok(BoundaryIdentity {
        left_residual: (left + 0.5 * forms.left).abs(),
        right_residual: (right + 0.5 * forms.right).abs(),
        left_matched: (varrho.eval(1.0 / n) - params.left_fraction()).abs() <= 1e-12,
        right_matched: (varrho.eval(1.0 - 1.0 / n) - params.right_fraction()).abs() <= 1e-12,
    })
}

/// Both sides of `⟨𝓛_bulk√f,√f⟩_ν ≤ −K·D^bulk + C/N²`.
///
/// `remainder` is the exact Young-inequality remainder
/// `¼α² Σ_x (a_x − 1/a_x)²` with `a_x` the ratio of neighbouring odds of `ϱ`;
/// `c_over_n2` bounds it using only the Lipschitz constant `L` of `ϱ` and its
/// range `[a, b]`, through `|log a_x| ≤ (L/N)(1/a + 1/(1−b))`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BulkBound {
    pub lhs: f64,
    pub k: f64,
    pub dirichlet: f64,
    pub remainder: f64,
    pub c: f64,
    pub c_over_n2: f64,
}

impl BulkBound {
    pub fn rhs(&self) -> f64 {
        -self.k * self.dirichlet + self.c_over_n2
    }

    pub fn holds(&self) -> bool {
        self.lhs <= self.rhs() + 1e-12
    }
}

pub fn bulk_generator_bound_check(
    params: &ModelParams,
    varrho: &Profile,
    f: &DensityFunction,
) -> Result<BulkBound> {
    let lip = varrho
        .lipschitz()
        .ok_or_else(|| Error::invalid("reference profile has no finite Lipschitz constant"))?;
    let (a, b) = varrho.sampled_range();
    if !(a > 0.0 && b < 1.0) {
        return Err(Error::invalid("reference profile must stay inside (0, 1)"));
    }
    let forms = dirichlet_forms(params, varrho, f)?;
    let lhs = generator_pairing(params, varrho, f, GeneratorPart::Bulk)?;
    let n = params.n();
    let nf = n as f64;
    let alpha = params.alpha() as f64;
    let odds = |x: usize| {
        let r = varrho.eval(x as f64 / nf);
        r / (1.0 - r)
    };
    let remainder: f64 = (1..n.saturating_sub(1))
        .map(|x| {
            let ax = odds(x) / odds(x + 1);
            0.25 * alpha * alpha * (ax - 1.0 / ax) * (ax - 1.0 / ax)
        })
        .sum();
    let spread = lip / nf * (1.0 / a + 1.0 / (1.0 - b));
    let sinh = 0.5 * (math::exp(spread) - math::exp(-spread));
    let c_over_n2 = n.saturating_sub(2) as f64 * alpha * alpha * sinh * sinh;
    Ok(BulkBound {
        lhs,
        k: 0.125,
        dirichlet: forms.bulk(),
        remainder,
        c: c_over_n2 * nf * nf,
        c_over_n2,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn setup(alpha: u32, n: usize, theta: f64, varrho: &Profile, seed: u64) -> (ModelParams, Vec<f64>, DensityFunction) {
        let p = ModelParams::new(alpha, n, theta, 0.6, 0.4, 0.7, 0.3).unwrap();
        let idx = StateIndex::new(alpha, n - 1, DEFAULT_STATE_CAP).unwrap();
        let nu = reference_measure(&p, varrho, &idx).unwrap();
        let f = DensityFunction::random(&nu, &mut rng::stream(seed, 9, 0)).unwrap();
        (p, nu, f)
    }

    #[test]
    fn constant_density_has_zero_forms() {
        let varrho = Profile::linear(0.3, 0.6);
        let (p, _, _) = setup(2, 4, 0.0, &varrho, 1);
        let one = DensityFunction::constant(27);
        let d = dirichlet_forms(&p, &varrho, &one).unwrap();
        assert_eq!(d.left + d.right + d.bulk(), 0.0);
        let b = bulk_generator_bound_check(&p, &varrho, &one).unwrap();
        assert_eq!(b.lhs, 0.0);
        assert!(b.holds() && b.c_over_n2 >= 0.0);
        let id = boundary_carre_du_champ_identity(&p, &varrho, &one).unwrap();
        assert_eq!(id.max_residual(), 0.0);
    }

    #[test]
    fn forms_are_nonnegative() {
        let varrho = Profile::linear(0.3, 0.6);
        for seed in 0..10 {
            let (p, _, f) = setup(2, 4, 0.5, &varrho, seed);
            let d = dirichlet_forms(&p, &varrho, &f).unwrap();
            assert!(d.left > 0.0 && d.right > 0.0);
            assert!(d.bulk_right.iter().chain(&d.bulk_left).all(|&v| v > 0.0));
        }
    }

    #[test]
    fn bulk_form_matches_double_loop() {
        // Loop over pairs of states and recognise bulk moves by comparing digits.
        let varrho = Profile::linear(0.25, 0.65);
        let (p, nu, f) = setup(2, 4, 0.0, &varrho, 42);
        let idx = StateIndex::new(2, 3, 100).unwrap();
        let mut oracle = 0.0;
        for i in 0..idx.len() {
            let eta = idx.decode(i);
            for j in 0..idx.len() {
                let xi = idx.decode(j);
                let diff: Vec<i64> =
                    (1..=3).map(|x| xi.get(x) as i64 - eta.get(x) as i64).collect();
                for x in 1..3usize {
                    let others_fixed = (1..=3).all(|y| y == x || y == x + 1 || diff[y - 1] == 0);
                    if !others_fixed {
                        continue;
                    }
                    let rate = if diff[x - 1] == -1 && diff[x] == 1 {
                        (eta.get(x) * (2 - eta.get(x + 1))) as f64
                    } else if diff[x - 1] == 1 && diff[x] == -1 {
                        (eta.get(x + 1) * (2 - eta.get(x))) as f64
                    } else {
                        continue;
                    };
                    let d = math::sqrt(f.values()[j]) - math::sqrt(f.values()[i]);
                    oracle += nu[i] * rate * d * d;
                }
            }
        }
        let d = dirichlet_forms(&p, &varrho, &f).unwrap();
        assert!((d.bulk() - oracle).abs() < 1e-12, "{} vs {oracle}", d.bulk());
    }

    fn matched_profile(p: &ModelParams) -> Profile {
        // Locally constant near both ends, matching the reservoir fractions.
        let (l, r) = (p.left_fraction(), p.right_fraction());
        Profile::table(alloc::vec![[0.0, l], [0.3, l], [0.7, r], [1.0, r]]).unwrap()
    }

    #[test]
    fn boundary_identity_holds_when_matched() {
        for seed in 0..5 {
            for theta in [0.0, 1.0, -0.5] {
                let p = ModelParams::new(2, 4, theta, 0.6, 0.4, 0.7, 0.3).unwrap();
                let varrho = matched_profile(&p);
                let idx = StateIndex::new(2, 3, 100).unwrap();
                let nu = reference_measure(&p, &varrho, &idx).unwrap();
                let f = DensityFunction::random(&nu, &mut rng::stream(seed, 1, 0)).unwrap();
                let id = boundary_carre_du_champ_identity(&p, &varrho, &f).unwrap();
                assert!(id.matched());
                assert!(id.max_residual() <= 1e-12, "{id:?}");
            }
        }
    }

    #[test]
    fn boundary_mismatch_leaves_the_predicted_term() {
        let varrho = Profile::constant(0.45);
        let (p, nu, f) = setup(2, 4, 0.5, &varrho, 3);
        let id = boundary_carre_du_champ_identity(&p, &varrho, &f).unwrap();
        assert!(!id.left_matched && !id.right_matched);
        // (ε+γ)/(2N^θ) ∫ [η(1)/ϱ − (α−η(1))/(1−ϱ)] f dν · [ε/(ε+γ) − ϱ]
        let idx = StateIndex::new(2, 3, 100).unwrap();
        let q = 0.45;
        let integral: f64 = (0..idx.len())
            .map(|i| {
                let e1 = idx.decode(i).get(1) as f64;
                (e1 / q - (2.0 - e1) / (1.0 - q)) * f.values()[i] * nu[i]
            })
            .sum();
        let predicted = (0.6 + 0.4) / (2.0 * p.boundary_factor().recip()) * integral * (0.6 - q);
        assert!(predicted.abs() > 1e-4);
        assert!((id.left_residual - predicted.abs()).abs() < 1e-12, "{} vs {predicted}", id.left_residual);
        assert!(id.right_residual > 1e-6);
    }

    #[test]
    fn constant_profile_gives_exact_bulk_identity() {
        let varrho = Profile::constant(0.4);
        for seed in 0..5 {
            let (p, _, f) = setup(2, 4, 0.0, &varrho, seed);
            let lhs = generator_pairing(&p, &varrho, &f, GeneratorPart::Bulk).unwrap();
            let d = dirichlet_forms(&p, &varrho, &f).unwrap();
            assert!((lhs + 0.5 * d.bulk()).abs() < 1e-12);
            let b = bulk_generator_bound_check(&p, &varrho, &f).unwrap();
            assert_eq!(b.remainder, 0.0);
            assert_eq!(b.c_over_n2, 0.0);
            assert!(b.holds());
        }
    }

    #[test]
    fn bulk_identity_before_young() {
        // ⟨𝓛_bulk√f,√f⟩ = −¼Σ[(1+1/a_x)D^{x,x+1} + (1+a_x)D^{x+1,x}]
        //   + ¼Σ∫c_{x+1,x}[f(η^{x+1,x})−f](1−a_x) + ¼Σ∫c_{x,x+1}[f(η^{x,x+1})−f](1−1/a_x)
        let varrho = Profile::linear(0.2, 0.75);
        let (p, nu, f) = setup(2, 5, 0.0, &varrho, 8);
        let idx = StateIndex::new(2, 4, 1000).unwrap();
        let d = dirichlet_forms(&p, &varrho, &f).unwrap();
        let odds = |x: usize| {
            let r = varrho.eval(x as f64 / 5.0);
            r / (1.0 - r)
        };
        let a: Vec<f64> = (1..4).map(|x| odds(x) / odds(x + 1)).collect();
        let mut rhs = 0.0;
        for x in 1..4 {
            let ax = a[x - 1];
            rhs -= 0.25 * ((1.0 + 1.0 / ax) * d.bulk_right[x - 1] + (1.0 + ax) * d.bulk_left[x - 1]);
        }
        for i in 0..idx.len() {
            let c = idx.decode(i);
            for x in 1..4 {
                let ax = a[x - 1];
                for (e, w) in [(Event::BulkLeft(x), 1.0 - ax), (Event::BulkRight(x), 1.0 - 1.0 / ax)] {
                    let r = event_rate(&p, &c, e);
                    if r > 0.0 {
                        let j = idx.encode(&apply_event(&c, e)).unwrap();
                        rhs += 0.25 * nu[i] * r * (f.values()[j] - f.values()[i]) * w;
                    }
                }
            }
        }
        let lhs = generator_pairing(&p, &varrho, &f, GeneratorPart::Bulk).unwrap();
        assert!((lhs - rhs).abs() < 1e-12, "{lhs} vs {rhs}");
    }

    #[test]
    fn bulk_bound_holds_for_random_densities() {
        let varrho = Profile::linear(0.2, 0.75);
        for seed in 0..20 {
            let (p, _, f) = setup(2, 4, 0.0, &varrho, seed);
            let b = bulk_generator_bound_check(&p, &varrho, &f).unwrap();
            assert!(b.holds(), "{b:?}");
            assert!(b.lhs <= -b.k * b.dirichlet + b.remainder + 1e-12);
            assert!(b.remainder <= b.c_over_n2 + 1e-15);
        }
    }

    #[test]
    fn rejects_unnormalized_density() {
        let varrho = Profile::constant(0.5);
        let (p, _, _) = setup(1, 3, 0.0, &varrho, 0);
        let bad = DensityFunction { values: alloc::vec![2.0; 4] };
        assert!(dirichlet_forms(&p, &varrho, &bad).is_err());
        assert!(DensityFunction::normalized(alloc::vec![0.0; 4], &[0.25; 4]).is_err());
    }
}
