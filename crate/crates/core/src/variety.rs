//! Exact sampling on the light cone and a seeded search for configurations
//! whose five `T`-vectors are linearly independent.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::appendix;
use crate::linalg;
use crate::scalar::{ratio, GaussRational};
use crate::symbol::{
    check_gauge, independence_determinant, t_projection, total_symbol, FiveVector,
    InteractionConfig,
};
use crate::tensor::{is_lightlike_future, Covector4};

#[derive(Debug, Error)]
pub enum VarietyError {
    #[error("zero covector has no gauge basis")]
    ZeroCovector,
    #[error("the four directions are linearly dependent")]
    Singular,
    #[error("target covector must be real, light-like and future-pointing")]
    BadTarget,
    #[error("no nondegenerate configuration after {iterations} candidates (best |D| = {best_abs_determinant})")]
    Exhausted {
        iterations: usize,
        best_abs_determinant: String,
        best: Option<Box<VarietyPoint>>,
    },
}

/// A nondegenerate point: `Σ αᵢ ξ⁽ⁱ⁾ = ζ_target` and `D ≠ 0`.
#[derive(Debug, Clone, Serialize)]
pub struct VarietyPoint {
    pub xis: [Covector4; 4],
    pub alphas: [GaussRational; 4],
    pub pol_sets: [[Covector4; 4]; 5],
    pub t_vectors: Vec<FiveVector>,
    pub determinant: GaussRational,
    /// Zero-based index of the accepted candidate.
    pub iteration: usize,
}

impl VarietyPoint {
    pub fn zetas(&self) -> [Covector4; 4] {
        std::array::from_fn(|k| self.xis[k].scale(&self.alphas[k]))
    }

    pub fn config(&self, set: usize) -> InteractionConfig {
        InteractionConfig::unchecked(self.zetas(), self.pol_sets[set].clone())
    }

    /// Rechecks every invariant exactly.
    pub fn check(&self, target: &Covector4) -> bool {
        let zetas = self.zetas();
        let sum = zetas.iter().fold(Covector4::zero(), |acc, z| &acc + z);
        sum == *target
            && self
                .xis
                .iter()
                .all(|x| is_lightlike_future(x).unwrap_or(false))
            && self
                .pol_sets
                .iter()
                .all(|set| (0..4).all(|k| check_gauge(&self.xis[k], &set[k])))
            && !self.determinant.is_zero()
    }
}

/// Future light-like covector from stereographic coordinates, scaled to a
/// primitive integer vector: `(1+a²+b², 2a, 2b, 1−a²−b²)`.
pub fn lightlike_from_stereo(a: &BigRational, b: &BigRational) -> Covector4 {
    let s = a * a + b * b;
    let one = BigRational::one();
    let two = BigRational::from_integer(BigInt::from(2));
    let raw = [&one + &s, &two * a, &two * b, &one - &s];
    let lcm = raw.iter().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
    let ints: Vec<BigInt> = raw
        .iter()
        .map(|q| (q * BigRational::from_integer(lcm.clone())).to_integer())
        .collect();
    let gcd = ints.iter().fold(BigInt::zero(), |acc, n| acc.gcd(n));
    Covector4::from_rationals(std::array::from_fn(|k| {
        BigRational::new(ints[k].clone(), gcd.clone())
    }))
}

fn random_rational(rng: &mut impl Rng, bound: i64, den: i64) -> BigRational {
    ratio(rng.gen_range(-bound * den..=bound * den), den)
}

/// Deterministic light-like sample; seed 0 gives `(1, 1, 0, 0)`.
pub fn sample_lightlike(seed: u64) -> Covector4 {
    if seed == 0 {
        return lightlike_from_stereo(&ratio(1, 1), &ratio(0, 1));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let a = random_rational(&mut rng, 4, 12);
    let b = random_rational(&mut rng, 4, 12);
    lightlike_from_stereo(&a, &b)
}

/// Three independent solutions of `h^{ab} ζ_a A_b = 0`, with `ζ` first.
pub fn gauge_basis(zeta: &Covector4) -> Result<[Covector4; 3], VarietyError> {
    if zeta.is_zero() {
        return Err(VarietyError::ZeroCovector);
    }
    let coeff: Vec<GaussRational> = (0..4)
        .map(|k| zeta[k].scale(&ratio(crate::tensor::h_sign(k), 1)))
        .collect();
    let p = (0..4)
        .find(|&k| !coeff[k].is_zero())
        .expect("nonzero covector");
    let inv = coeff[p].recip().expect("nonzero pivot");
    let mut chosen = vec![zeta.clone()];
    for k in (0..4).filter(|&k| k != p) {
        let mut v = Covector4::basis(k);
        v.0[p] = -(&coeff[k] * &inv);
        let mut trial: Vec<Vec<GaussRational>> = chosen.iter().map(|c| c.0.to_vec()).collect();
        trial.push(v.0.to_vec());
        if linalg::rank(&trial) == trial.len() {
            chosen.push(v);
        }
        if chosen.len() == 3 {
            break;
        }
    }
    Ok([chosen[0].clone(), chosen[1].clone(), chosen[2].clone()])
}

/// Exact `α` with `Σ αᵢ ξ⁽ⁱ⁾ = ζ`.
pub fn solve_alphas(
    target: &Covector4,
    xis: &[Covector4; 4],
) -> Result<[GaussRational; 4], VarietyError> {
    let a: Vec<Vec<GaussRational>> = (0..4)
        .map(|row| (0..4).map(|col| xis[col][row].clone()).collect())
        .collect();
    let x = linalg::solve(&a, &target.0).ok_or(VarietyError::Singular)?;
    Ok(std::array::from_fn(|k| x[k].clone()))
}

/// Where candidates are drawn from.
#[derive(Debug, Clone)]
pub struct SamplingBox {
    /// Stereographic centre `(a, b)` of each direction.
    pub centers: [(BigRational, BigRational); 4],
    pub half_width: BigRational,
    /// Denominator of perturbations and polarization coefficients.
    pub grain: i64,
    /// Polarization coefficients are integers in `[-coeff_bound, coeff_bound]`.
    pub coeff_bound: i64,
    /// Candidate 0 is the exact centre with these polarizations.
    pub center_pols: Option<[[Covector4; 4]; 5]>,
    /// All five polarization sets equal, which forces `D = 0`.
    pub shared_polarizations: bool,
}

impl SamplingBox {
    /// Box around the reference directions; candidate 0 is the reference
    /// configuration itself when `include_center` is set.
    pub fn around_reference(half_width: BigRational, include_center: bool) -> Self {
        SamplingBox {
            centers: [
                (ratio(0, 1), ratio(1, 1)),
                (ratio(0, 1), ratio(0, 1)),
                (ratio(1, 1), ratio(0, 1)),
                (ratio(-1, 1), ratio(0, 1)),
            ],
            half_width,
            grain: 4,
            coeff_bound: 3,
            center_pols: include_center.then(appendix::reference_polarizations),
            shared_polarizations: false,
        }
    }
}

fn candidate_rng(seed: u64, iteration: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(iteration as u64);
    rng
}

fn draw_candidate(
    bx: &SamplingBox,
    seed: u64,
    iteration: usize,
) -> ([Covector4; 4], [[Covector4; 4]; 5]) {
    if iteration == 0 {
        if let Some(pols) = &bx.center_pols {
            let xis =
                std::array::from_fn(|k| lightlike_from_stereo(&bx.centers[k].0, &bx.centers[k].1));
            return (xis, pols.clone());
        }
    }
    let mut rng = candidate_rng(seed, iteration);
    let xis: [Covector4; 4] = std::array::from_fn(|k| {
        let (a0, b0) = &bx.centers[k];
        let da = random_rational(&mut rng, 1, bx.grain) * &bx.half_width;
        let db = random_rational(&mut rng, 1, bx.grain) * &bx.half_width;
        lightlike_from_stereo(&(a0 + da), &(b0 + db))
    });
    let minus_i = -GaussRational::i();
    let draw_set = |rng: &mut ChaCha8Rng| -> [Covector4; 4] {
        std::array::from_fn(|k| {
            let basis = gauge_basis(&xis[k]).expect("light-like directions are nonzero");
            let mut v = Covector4::zero();
            for b in &basis {
                let c = GaussRational::from_int(rng.gen_range(-bx.coeff_bound..=bx.coeff_bound));
                v = &v + &b.scale(&c);
            }
            v.scale(&minus_i)
        })
    };
    let pols = if bx.shared_polarizations {
        let set = draw_set(&mut rng);
        std::array::from_fn(|_| set.clone())
    } else {
        std::array::from_fn(|_| draw_set(&mut rng))
    };
    (xis, pols)
}

/// Evaluates one candidate; `None` if it is singular or resonant.
fn evaluate(
    target: &Covector4,
    xis: [Covector4; 4],
    pol_sets: [[Covector4; 4]; 5],
    iteration: usize,
) -> Option<VarietyPoint> {
    let alphas = solve_alphas(target, &xis).ok()?;
    if alphas.iter().any(GaussRational::is_zero) {
        return None;
    }
    let zetas: [Covector4; 4] = std::array::from_fn(|k| xis[k].scale(&alphas[k]));
    let mut t_vectors = Vec::with_capacity(5);
    for set in &pol_sets {
        let cfg = InteractionConfig::new(zetas.clone(), set.clone()).ok()?;
        t_vectors.push(t_projection(&total_symbol(&cfg).ok()?));
    }
    let rows: [FiveVector; 5] = std::array::from_fn(|k| t_vectors[k].clone());
    let determinant = independence_determinant(&rows);
    Some(VarietyPoint {
        xis,
        alphas,
        pol_sets,
        t_vectors,
        determinant,
        iteration,
    })
}

fn abs_key(d: &GaussRational) -> BigRational {
    d.norm_sqr()
}

/// Seeded rejection sampling for a configuration with `D ≠ 0`.
///
/// Candidates are evaluated in parallel batches; the accepted one is always the
/// lowest-index success, so the result does not depend on scheduling.
pub fn search_nondegenerate(
    target: &Covector4,
    bx: &SamplingBox,
    seed: u64,
    max_iter: usize,
) -> Result<VarietyPoint, VarietyError> {
    if !target.is_real() || !is_lightlike_future(target).unwrap_or(false) {
        return Err(VarietyError::BadTarget);
    }
    let batch = rayon::current_num_threads().max(1);
    let mut best: Option<VarietyPoint> = None;
    let mut start = 0;
    while start < max_iter {
        let end = (start + batch).min(max_iter);
        let results: Vec<Option<VarietyPoint>> = (start..end)
            .into_par_iter()
            .map(|it| {
                let (xis, pols) = draw_candidate(bx, seed, it);
                evaluate(target, xis, pols, it)
            })
            .collect();
        for point in results.into_iter().flatten() {
            if !point.determinant.is_zero() {
                return Ok(point);
            }
            if best.as_ref().map_or(true, |b| {
                abs_key(&point.determinant) > abs_key(&b.determinant)
            }) {
                best = Some(point);
            }
        }
        start = end;
    }
    let best_abs_determinant = best
        .as_ref()
        .map(|b| b.determinant.norm_sqr().abs().to_string())
        .unwrap_or_else(|| "none".into());
    Err(VarietyError::Exhausted {
        iterations: max_iter,
        best_abs_determinant,
        best: best.map(Box::new),
    })
}
