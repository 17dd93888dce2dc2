//! Principal symbols of the fourth-order interaction source `ℋ = ℋ₁ + ℋ₂ + ℋ₃`
//! at the interaction point, for four plane waves with light-like covectors
//! `ζ⁽ⁱ⁾` and polarizations `A⁽ⁱ⁾`.
//!
//! Everything works in the Minkowski normal form at the interaction point. The
//! causal inverse contributes the scalar factor `1/|ζ|²_h` for the covector
//! carried by its argument. All [`InteractionSymbol`]s are coefficients of
//! `c_π = (2π)⁻³`, which is never evaluated numerically.
//!
//! Conventions that the matrix formulas leave open are fixed as follows:
//!
//! * `ℐ₂` and `ℐ₃` enter `ℋ₁ = 4(ℐ₁ + ℐ₂ + ℐ₃)` with a positive sign once the
//!   antisymmetry of `F` has been used.
//! * `ℋ₂` sums the six ordered splits `(ij | kl)`, one per unordered pair
//!   `{i, j}`, so both `(12|34)` and `(34|12)` appear.
//! * In `ℋ₃` the term for outer index `i` and middle index `l` uses
//!   `𝒪^{il} = 2F⁽ⁱ⁾Hℱ⁽ˡ⁾ + 2ℱ⁽ˡ⁾HF⁽ⁱ⁾ + H Tr(F⁽ⁱ⁾ℱ⁽ˡ⁾)`, where `ℱ⁽ˡ⁾` is the
//!   field strength of `A⁽ˡ⁾` at the shifted covector `ζ⁽ʲ⁾ + ζ⁽ᵏ⁾ + ζ⁽ˡ⁾`.
//!   This is the combination `Ĥ₂(v⁽ⁱ⁾, 𝒱⁽ˡ⁾) + Ĥ₂(𝒱⁽ˡ⁾, v⁽ⁱ⁾)` of the two
//!   nested pieces, and it reproduces every published `ℋ₃` matrix.
//!
//! `ℋ₁` is only meaningful off the diagonal and is tagged
//! [`MatrixKind::SymmetricOffDiagonal`]; `ℋ₂` and `ℋ₃` are full symmetric
//! matrices.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg;
use crate::scalar::GaussRational;
use crate::tensor::{
    is_lightlike, minkowski_pairing, sandwich, weighted_trace, Covector4, Matrix4, MatrixKind,
    TensorError,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SymbolError {
    #[error("covector ζ({index}) is not light-like: {value}")]
    NotLightlike { index: usize, value: String },
    #[error("polarization A({index}) violates the gauge condition h(ζ({index}), A({index})) = 0")]
    GaugeViolation { index: usize },
    #[error("resonant index set {indices:?}: |Σζ|²_h = 0 makes the causal inverse singular")]
    Resonant { indices: Vec<usize> },
    #[error("characteristic covector {0}: |ζ|²_h = 0")]
    Characteristic(String),
    #[error(transparent)]
    Tensor(#[from] TensorError),
}

/// Four covectors and their polarizations (labels 1..=4 in messages).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct InteractionConfig {
    pub zetas: [Covector4; 4],
    pub pols: [Covector4; 4],
}

impl InteractionConfig {
    /// Validated constructor: each `ζ⁽ⁱ⁾` real, nonzero and null, each pair gauge-compatible.
    ///
    /// Time orientation is not enforced: a covector `α ξ` with `α < 0` is a
    /// legitimate wave covector.
    pub fn new(zetas: [Covector4; 4], pols: [Covector4; 4]) -> Result<Self, SymbolError> {
        let cfg = Self { zetas, pols };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn unchecked(zetas: [Covector4; 4], pols: [Covector4; 4]) -> Self {
        Self { zetas, pols }
    }

    pub fn validate(&self) -> Result<(), SymbolError> {
        for (k, (z, a)) in self.zetas.iter().zip(&self.pols).enumerate() {
            z.real_parts()?;
            if !is_lightlike(z) {
                return Err(SymbolError::NotLightlike {
                    index: k + 1,
                    value: z.to_string(),
                });
            }
            if !check_gauge(z, a) {
                return Err(SymbolError::GaugeViolation { index: k + 1 });
            }
        }
        Ok(())
    }

    pub fn zeta_sum(&self) -> Covector4 {
        self.zetas.iter().fold(Covector4::zero(), |acc, z| &acc + z)
    }

    pub fn field_strengths(&self) -> [Matrix4; 4] {
        std::array::from_fn(|k| field_strength_symbol(&self.zetas[k], &self.pols[k]))
    }

    /// Relabels the four waves: slot `k` of the result is wave `perm[k]` of `self`.
    pub fn permuted(&self, perm: [usize; 4]) -> Self {
        Self {
            zetas: perm.map(|p| self.zetas[p].clone()),
            pols: perm.map(|p| self.pols[p].clone()),
        }
    }

    /// Scales every polarization by `s`.
    pub fn with_scaled_pols(&self, s: &GaussRational) -> Self {
        Self {
            zetas: self.zetas.clone(),
            pols: std::array::from_fn(|k| self.pols[k].scale(s)),
        }
    }
}

/// A symmetric interaction symbol in units of `c_π`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct InteractionSymbol {
    pub matrix: Matrix4,
    /// Entries are coefficients of `c_π = (2π)⁻³`.
    pub cpi_factored: bool,
}

impl InteractionSymbol {
    fn in_cpi_units(matrix: Matrix4) -> Self {
        Self {
            matrix,
            cpi_factored: true,
        }
    }

    pub fn zero(kind: MatrixKind) -> Self {
        Self::in_cpi_units(Matrix4::zero().with_kind(kind))
    }

    pub fn kind(&self) -> MatrixKind {
        self.matrix.kind()
    }

    pub fn entry(&self, a: usize, b: usize) -> Result<&GaussRational, TensorError> {
        self.matrix.entry(a, b)
    }

    pub fn is_zero(&self) -> bool {
        self.matrix.is_zero()
    }
}

impl std::ops::Add for &InteractionSymbol {
    type Output = InteractionSymbol;
    fn add(self, rhs: &InteractionSymbol) -> InteractionSymbol {
        debug_assert_eq!(self.cpi_factored, rhs.cpi_factored);
        InteractionSymbol {
            matrix: &self.matrix + &rhs.matrix,
            cpi_factored: self.cpi_factored,
        }
    }
}

/// The slot order of [`t_projection`].
pub const T_SLOTS: [(usize, usize); 5] = [(0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];

/// Off-diagonal slots `(02, 03, 12, 13, 23)`.
#[derive(Clone, PartialEq, Eq, Debug, Default, Serialize, Deserialize)]
pub struct FiveVector(pub [GaussRational; 5]);

impl FiveVector {
    pub fn to_f64(&self) -> [f64; 5] {
        std::array::from_fn(|k| self.0[k].to_f64_pair().0)
    }
}

impl fmt::Display for FiveVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|x| x.to_string()).collect();
        write!(f, "({})", parts.join(", "))
    }
}

/// `σ(F)_{αβ} = ı ζ_α A_β − ı ζ_β A_α`.
pub fn field_strength_symbol(zeta: &Covector4, pol: &Covector4) -> Matrix4 {
    let i = GaussRational::i();
    Matrix4::from_fn(|a, b| {
        if a == b {
            return GaussRational::zero();
        }
        let w = &(&zeta[a] * &pol[b]) - &(&zeta[b] * &pol[a]);
        &i * &w
    })
    .with_kind(MatrixKind::Antisymmetric)
}

/// Microlocal gauge condition `h^{αλ} ζ_λ A_α = 0`.
pub fn check_gauge(zeta: &Covector4, pol: &Covector4) -> bool {
    minkowski_pairing(zeta, pol).is_zero()
}

/// Microlocal conservation `ζ_α σ(𝒥)^α = 0` for a current symbol with raised index.
pub fn check_conservation(zeta: &Covector4, current: &Covector4) -> bool {
    (0..4)
        .map(|k| &zeta[k] * &current[k])
        .sum::<GaussRational>()
        .is_zero()
}

/// Square norm `|ζ|²_h`.
pub fn square_norm(zeta: &Covector4) -> GaussRational {
    minkowski_pairing(zeta, zeta)
}

/// Off-diagonal symbol factor of the causal inverse, `1/|ζ|²_h`.
pub fn causal_inverse_factor(zeta: &Covector4) -> Result<GaussRational, SymbolError> {
    square_norm(zeta)
        .recip()
        .ok_or_else(|| SymbolError::Characteristic(zeta.to_string()))
}

fn resonance_factor(cfg: &InteractionConfig, idx: &[usize]) -> Result<GaussRational, SymbolError> {
    let sum = idx
        .iter()
        .fold(Covector4::zero(), |acc, &k| &acc + &cfg.zetas[k]);
    square_norm(&sum).recip().ok_or_else(|| {
        let mut indices: Vec<usize> = idx.iter().map(|k| k + 1).collect();
        indices.sort_unstable();
        SymbolError::Resonant { indices }
    })
}

/// `𝒢(i, j) = |ζ⁽ⁱ⁾ + ζ⁽ʲ⁾|²_h` for all ordered pairs (0-based).
pub fn pair_norms(cfg: &InteractionConfig) -> [[GaussRational; 4]; 4] {
    std::array::from_fn(|i| std::array::from_fn(|j| square_norm(&(&cfg.zetas[i] + &cfg.zetas[j]))))
}

/// `𝒲(i, j) = Tr(σ(F⁽ⁱ⁾) σ(F⁽ʲ⁾))` for all ordered pairs (0-based).
pub fn trace_table(cfg: &InteractionConfig) -> [[GaussRational; 4]; 4] {
    let f = cfg.field_strengths();
    std::array::from_fn(|i| std::array::from_fn(|j| weighted_trace(&f[i], &f[j])))
}

/// `Ĥ₂(F, G) = 2 F H G + ½ H Tr(F G)`.
pub fn h2hat_symbol(fi: &Matrix4, fj: &Matrix4) -> Matrix4 {
    let two = GaussRational::from_int(2);
    let half_trace = weighted_trace(fi, fj).scale(&crate::scalar::ratio(1, 2));
    let mut out = sandwich(fi, fj).scale(&two);
    for a in 0..4 {
        let h = GaussRational::from_int(crate::tensor::h_sign(a));
        let v = out.raw(a, a) + &(&h * &half_trace);
        out.set(a, a, v);
    }
    out
}

/// `Ĥ₂(Fi, Fj) + Ĥ₂(Fj, Fi)`, without the causal inverse.
fn symmetrized_h2hat(fi: &Matrix4, fj: &Matrix4) -> Matrix4 {
    (&h2hat_symbol(fi, fj) + &h2hat_symbol(fj, fi)).with_kind(MatrixKind::Symmetric)
}

/// `σ(𝒲⁽ⁱʲ⁾) = [Ĥ₂(F⁽ⁱ⁾, F⁽ʲ⁾) + Ĥ₂(F⁽ʲ⁾, F⁽ⁱ⁾)] / |ζ⁽ⁱ⁾ + ζ⁽ʲ⁾|²_h` (0-based indices).
pub fn w_symbol(cfg: &InteractionConfig, i: usize, j: usize) -> Result<Matrix4, SymbolError> {
    let q = resonance_factor(cfg, &[i, j])?;
    let f = cfg.field_strengths();
    Ok(symmetrized_h2hat(&f[i], &f[j])
        .scale(&q)
        .with_kind(MatrixKind::Symmetric))
}

fn w_symbol_with(
    f: &[Matrix4; 4],
    cfg: &InteractionConfig,
    i: usize,
    j: usize,
) -> Result<Matrix4, SymbolError> {
    let q = resonance_factor(cfg, &[i, j])?;
    Ok(symmetrized_h2hat(&f[i], &f[j])
        .scale(&q)
        .with_kind(MatrixKind::Symmetric))
}

/// The three bare pieces of `ℋ₁` (no factor 4, no `c_π`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct H1Parts {
    pub i1: Matrix4,
    pub i2: Matrix4,
    pub i3: Matrix4,
}

/// All 24 orderings of `(0, 1, 2, 3)` in lexicographic order.
pub fn permutations4() -> Vec<[usize; 4]> {
    let mut out = Vec::with_capacity(24);
    for a in 0..4 {
        for b in 0..4 {
            for c in 0..4 {
                for d in 0..4 {
                    if a != b && a != c && a != d && b != c && b != d && c != d {
                        out.push([a, b, c, d]);
                    }
                }
            }
        }
    }
    out
}

fn check_pairs(cfg: &InteractionConfig) -> Result<[[GaussRational; 4]; 4], SymbolError> {
    let mut q: [[GaussRational; 4]; 4] = Default::default();
    for i in 0..4 {
        for j in (i + 1)..4 {
            let v = resonance_factor(cfg, &[i, j])?;
            q[i][j] = v.clone();
            q[j][i] = v;
        }
    }
    Ok(q)
}

/// `ℐ₁ = Σ F⁽ᵏ⁾H Q(F⁽ⁱ⁾HF⁽ʲ⁾) HF⁽ˡ⁾`, `ℐ₂ = ¼ Σ Q(Tr F⁽ⁱ⁾F⁽ʲ⁾) F⁽ᵏ⁾HF⁽ˡ⁾`,
/// `ℐ₃ = ¼ Σ Q(F⁽ⁱ⁾HF⁽ʲ⁾) Tr(F⁽ᵏ⁾F⁽ˡ⁾)`, each summed over all 24 orderings.
pub fn h1_parts(cfg: &InteractionConfig) -> Result<H1Parts, SymbolError> {
    let q = check_pairs(cfg)?;
    let f = cfg.field_strengths();
    let quarter = crate::scalar::ratio(1, 4);
    let mut prod: [[Matrix4; 4]; 4] = Default::default();
    let mut scaled: [[Matrix4; 4]; 4] = Default::default();
    let mut tr: [[GaussRational; 4]; 4] = Default::default();
    for i in 0..4 {
        for j in 0..4 {
            if i != j {
                prod[i][j] = sandwich(&f[i], &f[j]);
                scaled[i][j] = prod[i][j].scale(&q[i][j]);
                tr[i][j] = weighted_trace(&f[i], &f[j]);
            }
        }
    }
    let mut parts = H1Parts {
        i1: Matrix4::zero(),
        i2: Matrix4::zero(),
        i3: Matrix4::zero(),
    };
    for [i, j, k, l] in permutations4() {
        let inner = &scaled[i][j];
        parts.i1 = &parts.i1 + &sandwich(&sandwich(&f[k], inner), &f[l]);
        let c2 = &tr[i][j] * &q[i][j];
        if !c2.is_zero() {
            parts.i2 = &parts.i2 + &prod[k][l].scale(&c2);
        }
        if !tr[k][l].is_zero() {
            parts.i3 = &parts.i3 + &inner.scale(&tr[k][l]);
        }
    }
    parts.i2 = parts.i2.scale(&GaussRational::real(quarter.clone()));
    parts.i3 = parts.i3.scale(&GaussRational::real(quarter));
    Ok(parts)
}

/// `σ(ℋ₁) = 4 c_π (ℐ₁ + ℐ₂ + ℐ₃)`, off-diagonal entries only.
pub fn h1_symbol(cfg: &InteractionConfig) -> Result<InteractionSymbol, SymbolError> {
    let p = h1_parts(cfg)?;
    let sum = &(&p.i1 + &p.i2) + &p.i3;
    Ok(InteractionSymbol::in_cpi_units(
        sum.scale(&GaussRational::from_int(4))
            .with_kind(MatrixKind::SymmetricOffDiagonal),
    ))
}

/// The six unordered pairs `{i, j}` with their complements.
pub const PAIR_SPLITS: [((usize, usize), (usize, usize)); 6] = [
    ((0, 1), (2, 3)),
    ((0, 2), (1, 3)),
    ((0, 3), (1, 2)),
    ((1, 2), (0, 3)),
    ((1, 3), (0, 2)),
    ((2, 3), (0, 1)),
];

/// `−σ(P̂₂(𝒲⁽ⁱʲ⁾, 𝒲⁽ᵏˡ⁾)) = (H σ𝒲⁽ⁱʲ⁾ H)^{pq} (ζ⁽ᵏ⁾+ζ⁽ˡ⁾)_p (ζ⁽ᵏ⁾+ζ⁽ˡ⁾)_q σ𝒲⁽ᵏˡ⁾`.
pub fn p2_term(
    cfg: &InteractionConfig,
    ij: (usize, usize),
    kl: (usize, usize),
) -> Result<Matrix4, SymbolError> {
    let f = cfg.field_strengths();
    p2_term_with(&f, cfg, ij, kl)
}

fn p2_term_with(
    f: &[Matrix4; 4],
    cfg: &InteractionConfig,
    ij: (usize, usize),
    kl: (usize, usize),
) -> Result<Matrix4, SymbolError> {
    let w_ij = w_symbol_with(f, cfg, ij.0, ij.1)?;
    let w_kl = w_symbol_with(f, cfg, kl.0, kl.1)?;
    let s = &cfg.zetas[kl.0] + &cfg.zetas[kl.1];
    let c = w_ij.raise_both().bilinear(&s, &s);
    Ok(w_kl.scale(&c).with_kind(MatrixKind::Symmetric))
}

/// The six ordered terms of `σ(ℋ₂)`, keyed by the pair `(i, j)` (0-based).
pub fn h2_terms(cfg: &InteractionConfig) -> Result<Vec<((usize, usize), Matrix4)>, SymbolError> {
    check_pairs(cfg)?;
    let f = cfg.field_strengths();
    PAIR_SPLITS
        .iter()
        .map(|&(ij, kl)| Ok((ij, p2_term_with(&f, cfg, ij, kl)?)))
        .collect()
}

/// `σ(ℋ₂) = −Σ σ(P̂₂(𝒲⁽ⁱʲ⁾, 𝒲⁽ᵏˡ⁾))` over the six ordered splits.
pub fn h2_interaction_symbol(cfg: &InteractionConfig) -> Result<InteractionSymbol, SymbolError> {
    let mut total = Matrix4::zero().with_kind(MatrixKind::Symmetric);
    for (_, term) in h2_terms(cfg)? {
        total = &total + &term;
    }
    Ok(InteractionSymbol::in_cpi_units(total))
}

/// `σ(ℋ₃) = Σ_{l≠i} [(H σ𝒲^{jk} H)^{pq} ζ⁽ˡ⁾_p ζ⁽ˡ⁾_q / |ζ⁽ʲ⁾+ζ⁽ᵏ⁾+ζ⁽ˡ⁾|²_h] σ(𝒪^{il})`.
pub fn h3_interaction_symbol(cfg: &InteractionConfig) -> Result<InteractionSymbol, SymbolError> {
    check_pairs(cfg)?;
    let f = cfg.field_strengths();
    let two = GaussRational::from_int(2);
    let h = Matrix4::minkowski();
    let mut total = Matrix4::zero().with_kind(MatrixKind::Symmetric);
    for l in 0..4 {
        for i in 0..4 {
            if i == l {
                continue;
            }
            let mut rest = (0..4).filter(|&x| x != i && x != l);
            let (j, k) = (
                rest.next().expect("two left"),
                rest.next().expect("two left"),
            );
            let q_triple = resonance_factor(cfg, &[j, k, l])?;
            let w_jk = w_symbol_with(&f, cfg, j, k)?;
            let coeff = &w_jk.raise_both().bilinear(&cfg.zetas[l], &cfg.zetas[l]) * &q_triple;
            if coeff.is_zero() {
                continue;
            }
            let shifted = &(&cfg.zetas[j] + &cfg.zetas[k]) + &cfg.zetas[l];
            let ff = field_strength_symbol(&shifted, &cfg.pols[l]);
            let o = &(&sandwich(&f[i], &ff).scale(&two) + &sandwich(&ff, &f[i]).scale(&two))
                + &h.scale(&weighted_trace(&f[i], &ff));
            total = &total + &o.scale(&coeff);
        }
    }
    Ok(InteractionSymbol::in_cpi_units(
        total.with_kind(MatrixKind::Symmetric),
    ))
}

/// The three pieces and their sum.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymbolBreakdown {
    pub h1: InteractionSymbol,
    pub h2: InteractionSymbol,
    pub h3: InteractionSymbol,
    pub total: InteractionSymbol,
}

pub fn symbol_breakdown(cfg: &InteractionConfig) -> Result<SymbolBreakdown, SymbolError> {
    let h1 = h1_symbol(cfg)?;
    let h2 = h2_interaction_symbol(cfg)?;
    let h3 = h3_interaction_symbol(cfg)?;
    let total = &(&h1 + &h2) + &h3;
    Ok(SymbolBreakdown { h1, h2, h3, total })
}

/// `σ(ℋ) = σ(ℋ₁) + σ(ℋ₂) + σ(ℋ₃)`, off-diagonal.
pub fn total_symbol(cfg: &InteractionConfig) -> Result<InteractionSymbol, SymbolError> {
    Ok(symbol_breakdown(cfg)?.total)
}

/// `T(B) = (B₀₂, B₀₃, B₁₂, B₁₃, B₂₃)`.
pub fn t_projection(s: &InteractionSymbol) -> FiveVector {
    FiveVector(T_SLOTS.map(|(a, b)| s.matrix.raw(a, b).clone()))
}

/// Determinant of the 5×5 matrix whose rows are `vs`.
pub fn independence_determinant(vs: &[FiveVector; 5]) -> GaussRational {
    let rows: Vec<Vec<GaussRational>> = vs.iter().map(|v| v.0.to_vec()).collect();
    linalg::determinant(&rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn reference_zetas() -> [Covector4; 4] {
        [
            Covector4::from_ints([1, 0, 1, 0]),
            Covector4::from_ints([1, 0, 0, 1]),
            Covector4::from_ratios([(-3, 4), (-3, 4), (0, 1), (0, 1)]),
            Covector4::from_ints([1, -1, 0, 0]),
        ]
    }

    fn minus_i_e(k: usize) -> Covector4 {
        Covector4::basis(k).scale(&-GaussRational::i())
    }

    fn first_config() -> InteractionConfig {
        InteractionConfig::new(
            reference_zetas(),
            [minus_i_e(3), minus_i_e(2), minus_i_e(3), minus_i_e(3)],
        )
        .unwrap()
    }

    fn q(n: i64, d: i64) -> GaussRational {
        GaussRational::from_ratio(n, d)
    }

    #[test]
    fn field_strength_of_first_wave() {
        let f = field_strength_symbol(&reference_zetas()[0], &minus_i_e(3));
        assert!(f.is_antisymmetric());
        for a in 0..4 {
            for b in 0..4 {
                let expected = match (a, b) {
                    (0, 3) | (2, 3) => 1,
                    (3, 0) | (3, 2) => -1,
                    _ => 0,
                };
                assert_eq!(f.raw(a, b), &GaussRational::from_int(expected), "({a},{b})");
            }
        }
    }

    #[test]
    fn field_strength_degenerate_cases() {
        let z = Covector4::from_ints([1, 0, 1, 0]);
        assert!(field_strength_symbol(&z, &Covector4::zero()).is_zero());
        assert!(field_strength_symbol(&z, &z.scale(&q(5, 3))).is_zero());
    }

    #[test]
    fn gauge_and_conservation() {
        assert!(check_gauge(&reference_zetas()[0], &minus_i_e(3)));
        assert!(!check_gauge(
            &Covector4::from_ints([1, 0, 0, 1]),
            &minus_i_e(3).scale(&-GaussRational::one())
        ));
        assert!(check_gauge(&reference_zetas()[1], &Covector4::zero()));
        assert!(check_conservation(&reference_zetas()[0], &Covector4::zero()));
        assert!(!check_conservation(
            &Covector4::from_ints([1, 0, 1, 0]),
            &Covector4::from_ints([1, 0, 0, 0])
        ));
        // J^α = (1, 0, -1, 0) annihilates ζ = (1, 0, 1, 0)
        assert!(check_conservation(
            &reference_zetas()[0],
            &Covector4::from_ints([1, 0, -1, 0])
        ));
    }

    #[test]
    fn pair_table_and_scaling() {
        let cfg = first_config();
        let g = pair_norms(&cfg);
        let expect = [
            ((0, 1), q(-2, 1)),
            ((0, 2), q(3, 2)),
            ((0, 3), q(-2, 1)),
            ((1, 2), q(3, 2)),
            ((1, 3), q(-2, 1)),
            ((2, 3), q(3, 1)),
        ];
        for ((i, j), v) in expect {
            assert_eq!(g[i][j], v);
            assert_eq!(g[j][i], v);
        }
        for (i, row) in g.iter().enumerate() {
            assert!(row[i].is_zero());
        }
        let two = q(2, 1);
        let scaled = InteractionConfig::unchecked(
            cfg.zetas.clone().map(|z| z.scale(&two)),
            cfg.pols.clone(),
        );
        let g2 = pair_norms(&scaled);
        assert_eq!(g2[2][3], &g[2][3] * &q(4, 1));
    }

    #[test]
    fn causal_inverse_examples() {
        let z = reference_zetas();
        assert_eq!(causal_inverse_factor(&(&z[0] + &z[1])).unwrap(), q(-1, 2));
        assert_eq!(causal_inverse_factor(&(&z[2] + &z[3])).unwrap(), q(1, 3));
        assert!(matches!(
            causal_inverse_factor(&z[0]),
            Err(SymbolError::Characteristic(_))
        ));
    }

    #[test]
    fn w_symbol_scales_and_rejects_resonance() {
        let cfg = first_config();
        let f = cfg.field_strengths();
        let w = w_symbol(&cfg, 0, 1).unwrap();
        let expected = (&h2hat_symbol(&f[0], &f[1]) + &h2hat_symbol(&f[1], &f[0])).scale(&q(-1, 2));
        assert!(w.eq_defined(&expected));
        assert!(w.is_symmetric());
        let three = q(3, 1);
        let w3 = w_symbol(&cfg.with_scaled_pols(&three), 0, 1).unwrap();
        assert_eq!(w3, w.scale(&q(9, 1)));
        let zero = cfg.with_scaled_pols(&GaussRational::zero());
        assert!(w_symbol(&zero, 2, 3).unwrap().is_zero());
        let mut same = cfg.clone();
        same.zetas[1] = same.zetas[0].clone();
        same.pols[1] = same.pols[0].clone();
        assert_eq!(
            w_symbol(&same, 0, 1),
            Err(SymbolError::Resonant {
                indices: vec![1, 2]
            })
        );
    }

    #[test]
    fn first_config_h1_intermediates() {
        let p = h1_parts(&first_config()).unwrap();
        assert_eq!(p.i1.raw(0, 2), &q(-5, 4));
        assert_eq!(p.i2.raw(0, 2), &q(5, 8));
        assert_eq!(p.i3.raw(0, 2), &q(-5, 8));
        // the slot printed as 1/8 is forced to -7/8 by its own sub-results
        assert_eq!(p.i1.raw(2, 3), &q(-7, 8));
        let h1 = h1_symbol(&first_config()).unwrap();
        assert_eq!(h1.entry(0, 2).unwrap(), &q(-5, 1));
        assert!(h1.entry(1, 1).is_err());
    }

    #[test]
    fn zero_polarizations_give_zero() {
        let zero = first_config().with_scaled_pols(&GaussRational::zero());
        let b = symbol_breakdown(&zero).unwrap();
        assert!(b.h1.is_zero() && b.h2.is_zero() && b.h3.is_zero() && b.total.is_zero());
    }

    #[test]
    fn t_projection_of_basis_element() {
        let mut m = Matrix4::zero();
        m.set(0, 2, GaussRational::one());
        m.set(2, 0, GaussRational::one());
        let s = InteractionSymbol::in_cpi_units(m.with_kind(MatrixKind::SymmetricOffDiagonal));
        assert_eq!(
            t_projection(&s),
            FiveVector([1, 0, 0, 0, 0].map(GaussRational::from_int))
        );
    }

    #[test]
    fn determinant_of_repeated_rows_vanishes() {
        let v = FiveVector([1, 2, 3, 4, 5].map(GaussRational::from_int));
        let w = FiveVector([0, 1, 0, 2, 7].map(GaussRational::from_int));
        let rows = [v.clone(), w.clone(), v, w.clone(), w];
        assert!(independence_determinant(&rows).is_zero());
    }

    #[test]
    fn config_validation_names_the_pair() {
        let mut pols = [minus_i_e(3), minus_i_e(2), minus_i_e(3), minus_i_e(3)];
        pols[1] = Covector4::basis(0);
        assert_eq!(
            InteractionConfig::new(reference_zetas(), pols).unwrap_err(),
            SymbolError::GaugeViolation { index: 2 }
        );
        let mut zetas = reference_zetas();
        zetas[3] = Covector4::from_ints([1, 0, 0, 0]);
        assert!(matches!(
            InteractionConfig::new(
                zetas,
                [minus_i_e(3), minus_i_e(2), minus_i_e(3), minus_i_e(2)]
            ),
            Err(SymbolError::NotLightlike { index: 4, .. })
        ));
    }
}
