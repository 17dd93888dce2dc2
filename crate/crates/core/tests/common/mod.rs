//! Index-loop oracles and random configuration builders shared by test targets.
#![allow(dead_code)]

use emwave_core::scalar::{ratio, GaussRational};
use emwave_core::tensor::{h_sign, Covector4, Matrix4};
use emwave_core::variety::{gauge_basis, sample_lightlike};
use emwave_core::InteractionConfig;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub type M = [[GaussRational; 4]; 4];

fn zero_m() -> M {
    Default::default()
}

fn h(a: usize) -> GaussRational {
    GaussRational::from_int(h_sign(a))
}

pub fn to_m(m: &Matrix4) -> M {
    m.rows().clone()
}

pub fn field(z: &Covector4, a: &Covector4) -> M {
    let mut out = zero_m();
    for al in 0..4 {
        for be in 0..4 {
            let d = &(&z[al] * &a[be]) - &(&z[be] * &a[al]);
            out[al][be] = &GaussRational::i() * &d;
        }
    }
    out
}

pub fn dot(a: &Covector4, b: &Covector4) -> GaussRational {
    let mut s = GaussRational::zero();
    for k in 0..4 {
        s += &(&h(k) * &(&a[k] * &b[k]));
    }
    s
}

/// `Σ_a F_{αa} h^{aa} G_{aβ}`.
pub fn fhg(f: &M, g: &M) -> M {
    let mut out = zero_m();
    for al in 0..4 {
        for be in 0..4 {
            for a in 0..4 {
                out[al][be] += &(&h(a) * &(&f[al][a] * &g[a][be]));
            }
        }
    }
    out
}

pub fn tr(f: &M, g: &M) -> GaussRational {
    let mut s = GaussRational::zero();
    for a in 0..4 {
        for b in 0..4 {
            s += &(&(&h(a) * &h(b)) * &(&f[a][b] * &g[a][b]));
        }
    }
    s
}

fn add(x: &M, y: &M) -> M {
    std::array::from_fn(|a| std::array::from_fn(|b| &x[a][b] + &y[a][b]))
}

fn scale(x: &M, s: &GaussRational) -> M {
    std::array::from_fn(|a| std::array::from_fn(|b| &x[a][b] * s))
}

/// Component form `−2(h^{aa} F_{αa} G_{βa} − ¼ h_{αβ} Tr(FG))`.
pub fn h2hat(f: &M, g: &M) -> M {
    let t = tr(f, g);
    let mut out = zero_m();
    for al in 0..4 {
        for be in 0..4 {
            let mut s = GaussRational::zero();
            for a in 0..4 {
                s += &(&h(a) * &(&f[al][a] * &g[be][a]));
            }
            if al == be {
                s -= &(&h(al) * &t.scale(&ratio(1, 4)));
            }
            out[al][be] = s.scale(&ratio(-2, 1));
        }
    }
    out
}

/// `Σ h^{pp} h^{qq} W_{pq} u_p v_q`.
pub fn quad(w: &M, u: &Covector4, v: &Covector4) -> GaussRational {
    let mut s = GaussRational::zero();
    for p in 0..4 {
        for q in 0..4 {
            s += &(&(&h(p) * &h(q)) * &(&w[p][q] * &(&u[p] * &v[q])));
        }
    }
    s
}

fn inv(x: &GaussRational) -> Option<GaussRational> {
    x.recip()
}

fn perms() -> Vec<[usize; 4]> {
    let mut out = Vec::new();
    for a in 0..4 {
        for b in 0..4 {
            for c in 0..4 {
                for d in 0..4 {
                    let s = [a, b, c, d];
                    if (0..4).all(|x| s.contains(&x)) {
                        out.push(s);
                    }
                }
            }
        }
    }
    out
}

pub struct Oracle {
    pub h1: M,
    pub h2: M,
    pub h3: M,
}

/// Straight transcription of the component sums; `None` on a resonance.
pub fn oracle(cfg: &InteractionConfig) -> Option<Oracle> {
    let z = &cfg.zetas;
    let f: Vec<M> = (0..4).map(|k| field(&z[k], &cfg.pols[k])).collect();
    let pair = |i: usize, j: usize| inv(&dot(&(&z[i] + &z[j]), &(&z[i] + &z[j])));
    let w = |i: usize, j: usize| -> Option<M> {
        Some(scale(
            &add(&h2hat(&f[i], &f[j]), &h2hat(&f[j], &f[i])),
            &pair(i, j)?,
        ))
    };

    let mut i1 = zero_m();
    let mut i2 = zero_m();
    let mut i3 = zero_m();
    for [i, j, k, l] in perms() {
        let q = pair(i, j)?;
        let inner = scale(&fhg(&f[i], &f[j]), &q);
        i1 = add(&i1, &fhg(&fhg(&f[k], &inner), &f[l]));
        i2 = add(&i2, &scale(&fhg(&f[k], &f[l]), &(&q * &tr(&f[i], &f[j]))));
        i3 = add(&i3, &scale(&inner, &tr(&f[k], &f[l])));
    }
    let quarter = GaussRational::from_ratio(1, 4);
    let h1 = scale(
        &add(&add(&i1, &scale(&i2, &quarter)), &scale(&i3, &quarter)),
        &GaussRational::from_int(4),
    );

    let mut h2 = zero_m();
    for i in 0..4 {
        for j in (i + 1)..4 {
            let rest: Vec<usize> = (0..4).filter(|x| *x != i && *x != j).collect();
            let (k, l) = (rest[0], rest[1]);
            let s = &z[k] + &z[l];
            h2 = add(&h2, &scale(&w(k, l)?, &quad(&w(i, j)?, &s, &s)));
        }
    }

    let mut h3 = zero_m();
    for l in 0..4 {
        for i in 0..4 {
            if i == l {
                continue;
            }
            let rest: Vec<usize> = (0..4).filter(|x| *x != i && *x != l).collect();
            let (j, k) = (rest[0], rest[1]);
            let tilde = &(&z[j] + &z[k]) + &z[l];
            let q3 = inv(&dot(&tilde, &tilde))?;
            let coeff = &quad(&w(j, k)?, &z[l], &z[l]) * &q3;
            let ff = field(&tilde, &cfg.pols[l]);
            let t = tr(&f[i], &ff);
            let mut o = add(
                &scale(&fhg(&f[i], &ff), &GaussRational::from_int(2)),
                &scale(&fhg(&ff, &f[i]), &GaussRational::from_int(2)),
            );
            for a in 0..4 {
                o[a][a] += &(&h(a) * &t);
            }
            h3 = add(&h3, &scale(&o, &coeff));
        }
    }
    Some(Oracle { h1, h2, h3 })
}

/// Random real light-like `ζ` (either time orientation) with gauge-valid
/// polarizations; not checked for resonances.
pub fn random_config(seed: u64) -> InteractionConfig {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let zetas: [Covector4; 4] = std::array::from_fn(|_| {
        let base = sample_lightlike(rng.gen_range(1..10_000));
        let mut s = rng.gen_range(1..=3);
        if rng.gen_bool(0.3) {
            s = -s;
        }
        base.scale(&GaussRational::from_ratio(s, rng.gen_range(1..=2)))
    });
    let pols: [Covector4; 4] = std::array::from_fn(|k| {
        let basis = gauge_basis(&zetas[k]).unwrap();
        let mut v = Covector4::zero();
        for b in &basis {
            v = &v + &b.scale(&GaussRational::from_int(rng.gen_range(-3..=3)));
        }
        v.scale(&-GaussRational::i())
    });
    InteractionConfig::new(zetas, pols).expect("constructed on the light cone and gauge-valid")
}

/// Random configs that are free of resonances, in seed order.
pub fn nonresonant_configs(first_seed: u64, count: usize) -> Vec<(u64, InteractionConfig)> {
    (first_seed..)
        .map(|s| (s, random_config(s)))
        .filter(|(_, c)| emwave_core::symbol::symbol_breakdown(c).is_ok())
        .take(count)
        .collect()
}

pub fn cofactor_det(m: &[Vec<GaussRational>]) -> GaussRational {
    let n = m.len();
    if n == 1 {
        return m[0][0].clone();
    }
    let mut s = GaussRational::zero();
    for c in 0..n {
        let minor: Vec<Vec<GaussRational>> = m[1..]
            .iter()
            .map(|row| {
                row.iter()
                    .enumerate()
                    .filter(|(k, _)| *k != c)
                    .map(|(_, x)| x.clone())
                    .collect()
            })
            .collect();
        let term = &m[0][c] * &cofactor_det(&minor);
        if c % 2 == 0 {
            s += &term;
        } else {
            s -= &term;
        }
    }
    s
}
