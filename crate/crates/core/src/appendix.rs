//! Reference configuration and published values for the four-wave interaction
//! symbol, with an exact verifier.
//!
//! Values are stored as the decimal or fractional strings that were printed;
//! parsing is exact, so `-5.3` means `-53/10`. Every printed `σ(ℋ)` value is a
//! coefficient of `c_π`.
//!
//! Three printed items are inconsistent with their own neighbours and are
//! carried as explicit [`Correction`]s rather than silently edited:
//! the intermediate `σ(ℐ₁)₂₃`, one transposed entry of `σ(ℋ₂(⁴A))`, and one of
//! the two printed covector sums.

use serde::Serialize;

use crate::linalg;
use crate::scalar::{parse_rational, GaussRational};
use crate::symbol::{
    field_strength_symbol, h1_parts, independence_determinant, pair_norms, symbol_breakdown,
    t_projection, trace_table, FiveVector, InteractionConfig, SymbolBreakdown, SymbolError,
};
use crate::tensor::{Covector4, Matrix4};

/// The four reference covectors `ζ⁽¹⁾..ζ⁽⁴⁾`.
pub fn reference_zetas() -> [Covector4; 4] {
    [
        Covector4::from_ints([1, 0, 1, 0]),
        Covector4::from_ints([1, 0, 0, 1]),
        Covector4::from_ratios([(-3, 4), (-3, 4), (0, 1), (0, 1)]),
        Covector4::from_ints([1, -1, 0, 0]),
    ]
}

/// Their sum `(9/4, −7/4, 1, 1)`, which is light-like.
pub fn reference_target() -> Covector4 {
    Covector4::from_ratios([(9, 4), (-7, 4), (1, 1), (1, 1)])
}

/// `(α₁, α₂, α₃, α₄) = (1, 1, −3/4, 1)` with `ζ⁽ⁱ⁾ = αᵢ ξ⁽ⁱ⁾`.
pub fn reference_alphas() -> [GaussRational; 4] {
    [
        GaussRational::from_int(1),
        GaussRational::from_int(1),
        GaussRational::from_ratio(-3, 4),
        GaussRational::from_int(1),
    ]
}

/// Future-pointing directions `ξ⁽ⁱ⁾ = ζ⁽ⁱ⁾ / αᵢ`.
pub fn reference_xis() -> [Covector4; 4] {
    let z = reference_zetas();
    let a = reference_alphas();
    std::array::from_fn(|k| z[k].scale(&a[k].recip().expect("nonzero alpha")))
}

/// Polarization `−ı e_k`.
fn minus_i(k: usize) -> Covector4 {
    Covector4::basis(k).scale(&-GaussRational::i())
}

/// The five polarization sets `ᵃA`, `a = 1..=5` (index 0 holds `¹A`).
pub fn reference_polarizations() -> [[Covector4; 4]; 5] {
    [
        [minus_i(3), minus_i(2), minus_i(3), minus_i(3)],
        [minus_i(1), minus_i(2), minus_i(3), minus_i(3)],
        [minus_i(3), minus_i(1), minus_i(3), minus_i(3)],
        [minus_i(3), minus_i(2), minus_i(2), minus_i(3)],
        [minus_i(3), minus_i(2), minus_i(3), minus_i(2)],
    ]
}

pub fn reference_config(set: usize) -> InteractionConfig {
    InteractionConfig::new(reference_zetas(), reference_polarizations()[set].clone())
        .expect("reference configuration is light-like and gauge-compatible")
}

/// A printed value that is replaced before comparison.
#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct Correction {
    pub item: &'static str,
    pub entry: &'static str,
    pub printed: &'static str,
    pub used: &'static str,
    pub reason: &'static str,
}

pub const CORRECTIONS: [Correction; 3] = [
    Correction {
        item: "zeta-sum",
        entry: "(0..3)",
        printed: "(9/4, -3/4, 1, 1)",
        used: "(9/4, -7/4, 1, 1)",
        reason: "direct addition of the four covectors; only this vector is light-like and it is also printed elsewhere",
    },
    Correction {
        item: "I1 (set 1)",
        entry: "(2,3)",
        printed: "1/8",
        used: "-7/8",
        reason: "printed sub-results A1 = -7/8 and A2 = 0 and the printed total 4(-7/8) all force -7/8",
    },
    Correction {
        item: "H2 (set 4)",
        entry: "(3,0)",
        printed: "-2.25",
        used: "2.25",
        reason: "the matrix is symmetric and its (0,3) partner is printed as 2.25",
    },
];

/// `𝒢(i, j)` in the order (12, 13, 14, 23, 24, 34).
pub const PAIR_NORM_TABLE: [&str; 6] = ["-2", "3/2", "-2", "3/2", "-2", "3"];
/// `𝒲(i, j) = Tr(F⁽ⁱ⁾F⁽ʲ⁾)` for `¹A` in the same order.
pub const TRACE_TABLE: [&str; 6] = ["-2", "3/2", "-2", "0", "0", "3"];
const TABLE_PAIRS: [(usize, usize); 6] = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];

/// Nonzero upper entries of `σ(F⁽ⁱ⁾)` for `¹A`; partners are antisymmetric.
pub const FIELD_STRENGTHS: [&[(usize, usize, &str)]; 4] = [
    &[(0, 3, "1"), (2, 3, "1")],
    &[(0, 2, "1"), (2, 3, "-1")],
    &[(0, 3, "-3/4"), (1, 3, "-3/4")],
    &[(0, 3, "1"), (1, 3, "-1")],
];

/// Bare `σ(ℐ₁)₀₂, σ(ℐ₂)₀₂, σ(ℐ₃)₀₂` for `¹A`.
pub const I_PARTS_02: [&str; 3] = ["-5/4", "5/8", "-5/8"];

/// Bare per-slot `ℐ` sums `σ(ℋ)/(4c_π)` for `¹A`, slots (02, 12, 03, 13, 23).
pub const H1_QUARTER_SLOTS: [((usize, usize), &str); 5] = [
    ((0, 2), "-5/4"),
    ((1, 2), "7/4"),
    ((0, 3), "-11/8"),
    ((1, 3), "7/8"),
    ((2, 3), "-7/8"),
];

/// Off-diagonal `σ(ℋ₁(ᵃA))/c_π` in slot order (02, 03, 12, 13, 23).
pub const H1_MATRICES: [[&str; 5]; 5] = [
    ["-5", "-5.5", "7", "3.5", "-3.5"],
    ["3.5", "3.5", "-3.5", "-5.5", "-7"],
    ["7", "7", "-5", "-7", "7"],
    ["5", "-5.5", "0", "-3.5", "1"],
    ["-5.5", "5", "-3.5", "0", "1"],
];

/// Full `σ(ℋ₂(ᵃA))/c_π`, row-major, as printed (corrections applied separately).
pub const H2_MATRICES: [[[&str; 4]; 4]; 5] = [
    [
        ["5", "-7", "-2.25", "0"],
        ["-7", "5", "1.75", "0"],
        ["-2.25", "1.75", "8", "-7.25"],
        ["0", "0", "-7.25", "-8"],
    ],
    [
        ["0", "0", "-7", "7"],
        ["0", "0", "5", "-5"],
        ["-7", "5", "-0.875", "0"],
        ["7", "-5", "0", "0.875"],
    ],
    [
        ["0", "0", "-8.75", "8.75"],
        ["0", "0", "7.25", "-7.25"],
        ["-8.75", "7.25", "-18.375", "0"],
        ["8.75", "-7.25", "0", "18.375"],
    ],
    [
        ["9.25", "-8.75", "4", "2.25"],
        ["-8.75", "5.25", "-2", "0.25"],
        ["4", "-2", "10.75", "-6"],
        ["-2.25", "0.25", "-6", "-6.75"],
    ],
    [
        ["9.25", "-8.75", "2.25", "4"],
        ["-8.75", "5.25", "0.25", "-2"],
        ["2.25", "0.25", "-6.75", "-6"],
        ["4", "-2", "-6", "10.75"],
    ],
];

/// The six printed terms of `σ(ℋ₂(¹A))/c_π`, keyed by the leading pair (0-based).
pub const H2_TERMS_SET1: [((usize, usize), [[&str; 4]; 4]); 6] = [
    (
        (0, 1),
        [
            ["0", "0", "0", "0"],
            ["0", "0", "0", "0"],
            ["0", "0", "3", "0"],
            ["0", "0", "0", "-3"],
        ],
    ),
    (
        (2, 3),
        [
            ["0", "0", "0", "0"],
            ["0", "0", "0", "0"],
            ["0", "0", "0", "0"],
            ["0", "0", "0", "0"],
        ],
    ),
    (
        (0, 2),
        [
            ["0", "0", "-8", "0"],
            ["0", "0", "8", "0"],
            ["-8", "8", "0", "-8"],
            ["0", "0", "-8", "0"],
        ],
    ),
    (
        (1, 3),
        [
            ["-1", "-1", "-1", "0"],
            ["-1", "-1", "-1", "0"],
            ["-1", "-1", "-1", "0"],
            ["0", "0", "0", "1"],
        ],
    ),
    (
        (0, 3),
        [
            ["0", "0", "0.75", "0"],
            ["0", "0", "0.75", "0"],
            ["0.75", "0.75", "0", "0.75"],
            ["0", "0", "0.75", "0"],
        ],
    ),
    (
        (1, 2),
        [
            ["6", "-6", "6", "0"],
            ["-6", "6", "-6", "0"],
            ["6", "-6", "6", "0"],
            ["0", "0", "0", "-6"],
        ],
    ),
];

/// Full `σ(ℋ₃(ᵃA))/c_π`, row-major.
pub const H3_MATRICES: [[[&str; 4]; 4]; 5] = [
    [
        ["-4", "7", "1.95", "4.8"],
        ["7", "-14", "-6.65", "1.4"],
        ["1.95", "-6.65", "1", "6.25"],
        ["4.8", "1.4", "6.25", "9"],
    ],
    [
        ["-5.6", "9.8", "3.15", "-3.5"],
        ["9.8", "-5.6", "-1.75", "6.5"],
        ["3.15", "-1.75", "5.775", "-3.5"],
        ["-3.5", "6.5", "-3.5", "-5.775"],
    ],
    [
        ["-11.9", "9.5", "0", "-10.15"],
        ["9.5", "-11.9", "5.3", "6.25"],
        ["0", "5.3", "12.775", "0"],
        ["-10.15", "6.25", "0", "-12.775"],
    ],
    [
        ["-6.25", "8.75", "0", "-1.75"],
        ["8.75", "-6.25", "1.6", "3.65"],
        ["0", "1.6", "-1.75", "4"],
        ["-1.75", "3.65", "4", "1.75"],
    ],
    [
        ["-6.25", "8.75", "-1.75", "0"],
        ["8.75", "-6.25", "3.65", "1.6"],
        ["-1.75", "3.65", "1.75", "4"],
        ["0", "1.6", "4", "-1.75"],
    ],
];

/// `T(σ(ℋ(ᵃA)))/c_π`.
pub const T_VECTORS: [[&str; 5]; 5] = [
    ["-5.3", "-0.7", "2.1", "4.9", "-4.5"],
    ["-0.35", "7", "-0.25", "-4", "-10.5"],
    ["-1.75", "5.6", "7.55", "-8", "7"],
    ["9", "-5", "-0.4", "0.4", "-1"],
    ["-5", "9", "0.4", "-0.4", "-1"],
];

fn g(s: &str) -> GaussRational {
    GaussRational::real(parse_rational(s).expect("embedded literal parses"))
}

/// Expected `σ(ℋ₂(ᵃA))` with corrections applied.
pub fn expected_h2(set: usize) -> Matrix4 {
    let mut m = Matrix4::from_fn(|a, b| g(H2_MATRICES[set][a][b]));
    if set == 3 {
        m.set(3, 0, g(CORRECTIONS[2].used));
    }
    m
}

pub fn expected_h3(set: usize) -> Matrix4 {
    Matrix4::from_fn(|a, b| g(H3_MATRICES[set][a][b]))
}

pub fn expected_t_vector(set: usize) -> FiveVector {
    FiveVector(T_VECTORS[set].map(g))
}

/// Deliberate faults for exercising the verifier's failure path.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Fault {
    /// Negates the computed `σ(ℋ₁)` of set 1 before comparison.
    FlipH1Sign,
    /// Negates the first polarization of every set before computing.
    FlipPolarization,
    /// Omits `ℋ₃` from the totals.
    DropH3,
    /// Nudges `ζ⁽⁴⁾` to `(1, −1, 0, 0) → (5/4, −5/4, 0, 0)`.
    PerturbZeta,
}

impl Fault {
    pub const ALL: [Fault; 4] = [
        Fault::FlipH1Sign,
        Fault::FlipPolarization,
        Fault::DropH3,
        Fault::PerturbZeta,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Fault::FlipH1Sign => "flip-h1-sign",
            Fault::FlipPolarization => "flip-polarization",
            Fault::DropH3 => "drop-h3",
            Fault::PerturbZeta => "perturb-zeta",
        }
    }

    pub fn from_name(name: &str) -> Option<Fault> {
        Fault::ALL.into_iter().find(|f| f.name() == name)
    }
}

#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Match,
    Mismatch,
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckItem {
    pub category: &'static str,
    pub name: String,
    pub status: Status,
    /// First differing entry, `"(a,b): expected X, got Y"`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub first_mismatch: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct VerificationReport {
    pub items: Vec<CheckItem>,
    pub corrections: Vec<Correction>,
    pub t_vectors: Vec<Vec<String>>,
    pub determinant: String,
    pub rank: usize,
}

impl VerificationReport {
    pub fn all_match(&self) -> bool {
        self.items.iter().all(|i| i.status == Status::Match)
    }

    pub fn first_mismatch(&self) -> Option<&CheckItem> {
        self.items.iter().find(|i| i.status == Status::Mismatch)
    }

    pub fn count(&self, category: &str) -> usize {
        self.items.iter().filter(|i| i.category == category).count()
    }
}

fn compare_entries<'a>(
    category: &'static str,
    name: String,
    cells: impl IntoIterator<Item = (String, &'a GaussRational, GaussRational)>,
) -> CheckItem {
    let first = cells
        .into_iter()
        .find(|(_, exp, got)| *exp != got)
        .map(|(at, exp, got)| format!("{at}: expected {exp}, got {got}"));
    CheckItem {
        category,
        name,
        status: if first.is_none() {
            Status::Match
        } else {
            Status::Mismatch
        },
        first_mismatch: first,
    }
}

fn compare_full(
    category: &'static str,
    name: String,
    expected: &Matrix4,
    got: &Matrix4,
) -> CheckItem {
    let cells: Vec<(String, &GaussRational, GaussRational)> = (0..4)
        .flat_map(|a| (0..4).map(move |b| (a, b)))
        .map(|(a, b)| {
            (
                format!("({a},{b})"),
                expected.raw(a, b),
                got.raw(a, b).clone(),
            )
        })
        .collect();
    compare_entries(category, name, cells)
}

fn compare_off_diagonal(
    category: &'static str,
    name: String,
    expected: &[GaussRational; 5],
    got: &Matrix4,
) -> CheckItem {
    // both triangles of the computed matrix must agree with the printed slot
    let cells: Vec<(String, &GaussRational, GaussRational)> = crate::symbol::T_SLOTS
        .iter()
        .enumerate()
        .flat_map(|(k, &(a, b))| {
            [
                (format!("({a},{b})"), &expected[k], got.raw(a, b).clone()),
                (format!("({b},{a})"), &expected[k], got.raw(b, a).clone()),
            ]
        })
        .collect();
    compare_entries(category, name, cells)
}

fn breakdown_for(set: usize, fault: Option<Fault>) -> Result<SymbolBreakdown, SymbolError> {
    let mut zetas = reference_zetas();
    let mut pols = reference_polarizations()[set].clone();
    if fault == Some(Fault::PerturbZeta) {
        zetas[3] = Covector4::from_ratios([(5, 4), (-5, 4), (0, 1), (0, 1)]);
    }
    if fault == Some(Fault::FlipPolarization) {
        pols[0] = -&pols[0];
    }
    let cfg = InteractionConfig::new(zetas, pols)?;
    let mut b = symbol_breakdown(&cfg)?;
    if fault == Some(Fault::FlipH1Sign) && set == 0 {
        b.h1.matrix = -&b.h1.matrix;
    }
    if fault == Some(Fault::DropH3) {
        b.h3.matrix = Matrix4::zero().with_kind(b.h3.matrix.kind());
    }
    b.total = &(&b.h1 + &b.h2) + &b.h3;
    Ok(b)
}

/// Recomputes every published quantity exactly and compares it with the table.
pub fn verify(fault: Option<Fault>) -> Result<VerificationReport, SymbolError> {
    let mut items = Vec::new();
    let cfg1 = {
        let mut zetas = reference_zetas();
        if fault == Some(Fault::PerturbZeta) {
            zetas[3] = Covector4::from_ratios([(5, 4), (-5, 4), (0, 1), (0, 1)]);
        }
        InteractionConfig::new(zetas, reference_polarizations()[0].clone())?
    };

    let sum = cfg1.zeta_sum();
    let target = reference_target();
    items.push(compare_entries(
        "consistency",
        "zeta sum (light-like)".into(),
        (0..4).map(|k| (format!("[{k}]"), &target[k], sum[k].clone())),
    ));

    let gt = pair_norms(&cfg1);
    let expected_g: Vec<GaussRational> = PAIR_NORM_TABLE.iter().map(|s| g(s)).collect();
    items.push(compare_entries(
        "tables",
        "G(i,j) pair norms".into(),
        TABLE_PAIRS
            .iter()
            .zip(&expected_g)
            .map(|(&(i, j), e)| (format!("G({},{})", i + 1, j + 1), e, gt[i][j].clone())),
    ));
    let wt = trace_table(&cfg1);
    let expected_w: Vec<GaussRational> = TRACE_TABLE.iter().map(|s| g(s)).collect();
    items.push(compare_entries(
        "tables",
        "W(i,j) traces".into(),
        TABLE_PAIRS
            .iter()
            .zip(&expected_w)
            .map(|(&(i, j), e)| (format!("W({},{})", i + 1, j + 1), e, wt[i][j].clone())),
    ));

    for (k, nonzero) in FIELD_STRENGTHS.iter().enumerate() {
        let mut expected = Matrix4::zero();
        for &(a, b, v) in nonzero.iter() {
            expected.set(a, b, g(v));
            expected.set(b, a, -g(v));
        }
        let got = field_strength_symbol(&cfg1.zetas[k], &cfg1.pols[k]);
        items.push(compare_full(
            "field-strengths",
            format!("sigma(F({}))", k + 1),
            &expected,
            &got,
        ));
    }

    let parts = h1_parts(&cfg1)?;
    let i_parts = [&parts.i1, &parts.i2, &parts.i3];
    let expected_i: Vec<GaussRational> = I_PARTS_02.iter().map(|s| g(s)).collect();
    items.push(compare_entries(
        "intermediates",
        "sigma(I1,I2,I3) at (0,2)".into(),
        i_parts
            .iter()
            .zip(&expected_i)
            .enumerate()
            .map(|(k, (m, e))| (format!("I{}", k + 1), e, m.raw(0, 2).clone())),
    ));
    let quarter_sum = &(&parts.i1 + &parts.i2) + &parts.i3;
    let expected_q: Vec<(usize, usize, GaussRational)> = H1_QUARTER_SLOTS
        .iter()
        .map(|&((a, b), s)| (a, b, g(s)))
        .collect();
    items.push(compare_entries(
        "intermediates",
        "sigma(I1+I2+I3) slots".into(),
        expected_q
            .iter()
            .map(|(a, b, e)| (format!("({a},{b})"), e, quarter_sum.raw(*a, *b).clone())),
    ));
    items.push(compare_entries(
        "intermediates",
        "sigma(I1) at (2,3), corrected".into(),
        std::iter::once((
            "(2,3)".to_string(),
            &g(CORRECTIONS[1].used),
            parts.i1.raw(2, 3).clone(),
        ))
        .collect::<Vec<_>>(),
    ));

    let h2_terms = crate::symbol::h2_terms(&cfg1)?;
    for (ij, printed) in H2_TERMS_SET1.iter() {
        let expected = Matrix4::from_fn(|a, b| g(printed[a][b]));
        let got = &h2_terms
            .iter()
            .find(|(k, _)| k == ij)
            .expect("all six splits present")
            .1;
        let (kl0, kl1) = crate::symbol::PAIR_SPLITS
            .iter()
            .find(|(p, _)| p == ij)
            .expect("split")
            .1;
        items.push(compare_full(
            "intermediates",
            format!(
                "-sigma(P2(W{}{}, W{}{}))",
                ij.0 + 1,
                ij.1 + 1,
                kl0 + 1,
                kl1 + 1
            ),
            &expected,
            got,
        ));
    }

    let mut t_vectors = Vec::new();
    for set in 0..5 {
        let b = breakdown_for(set, fault)?;
        let h1_expected: [GaussRational; 5] = H1_MATRICES[set].map(g);
        items.push(compare_off_diagonal(
            "matrices",
            format!("sigma(H1({}A))", set + 1),
            &h1_expected,
            &b.h1.matrix,
        ));
        items.push(compare_full(
            "matrices",
            format!("sigma(H2({}A))", set + 1),
            &expected_h2(set),
            &b.h2.matrix,
        ));
        items.push(compare_full(
            "matrices",
            format!("sigma(H3({}A))", set + 1),
            &expected_h3(set),
            &b.h3.matrix,
        ));
        t_vectors.push(t_projection(&b.total));
    }
    for (set, t) in t_vectors.iter().enumerate() {
        let expected = expected_t_vector(set);
        items.push(compare_entries(
            "t-vectors",
            format!("T(sigma(H({}A)))", set + 1),
            expected
                .0
                .iter()
                .zip(&t.0)
                .enumerate()
                .map(|(k, (e, got))| (format!("[{k}]"), e, got.clone())),
        ));
    }
    let rows: [FiveVector; 5] = std::array::from_fn(|k| t_vectors[k].clone());
    let det = independence_determinant(&rows);
    let rank = linalg::rank(&rows.iter().map(|r| r.0.to_vec()).collect::<Vec<_>>());
    items.push(CheckItem {
        category: "rank",
        name: "rank of the five T-vectors is 5".into(),
        status: if rank == 5 && !det.is_zero() {
            Status::Match
        } else {
            Status::Mismatch
        },
        first_mismatch: (rank != 5).then(|| format!("rank: expected 5, got {rank}")),
    });

    Ok(VerificationReport {
        items,
        corrections: CORRECTIONS.to_vec(),
        t_vectors: t_vectors
            .iter()
            .map(|t| t.0.iter().map(|x| x.to_string()).collect())
            .collect(),
        determinant: det.to_string(),
        rank,
    })
}
