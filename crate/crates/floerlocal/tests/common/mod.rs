//! Shared helpers for the integration-test suites: a seeded RNG honoring
//! `FLOERLOCAL_SEED`, and generators for random valid complexes built from
//! known skeletons, acyclic summands, and random changes of basis.

use floerlocal::ring::{Bigrading, Monomial, RingElem, RingTag};
use floerlocal::standard::{build_standard, StandardParams};
use floerlocal::BigradedComplex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Deterministic RNG; `FLOERLOCAL_SEED` overrides the default seed, and each
/// call site salts it so suites stay independent.
pub fn seeded_rng(salt: u64) -> ChaCha8Rng {
    let base = std::env::var("FLOERLOCAL_SEED")
        .ok()
        .and_then(|s| s.parse::<u64>().ok())
        .unwrap_or(0x5eed_0f10e);
    ChaCha8Rng::seed_from_u64(base ^ salt)
}

/// Random parameter list: even length in `2..=2*max_half`, entries nonzero
/// with absolute value at most `max_abs`.
pub fn random_params(rng: &mut ChaCha8Rng, max_half: usize, max_abs: i64) -> StandardParams {
    let n = 2 * rng.random_range(1..=max_half);
    let entries: Vec<i64> = (0..n)
        .map(|_| {
            let mag = rng.random_range(1..=max_abs);
            if rng.random_bool(0.5) {
                mag
            } else {
                -mag
            }
        })
        .collect();
    StandardParams::new(entries).expect("nonzero entries of even length")
}

/// A random base bigrading with an even grading gap (so the Alexander
/// grading is integral).
fn random_base(rng: &mut ChaCha8Rng) -> Bigrading {
    let gu = rng.random_range(-4..=4);
    let t = rng.random_range(-3..=3);
    Bigrading::new(gu, gu - 2 * t)
}

/// Two-generator acyclic summand `p -> q` with the given entry monomial.
fn pair(name: &str, base: Bigrading, m: Monomial) -> BigradedComplex {
    let shift = m.grading_shift();
    let mut c = BigradedComplex::new(RingTag::R);
    c.add_generator(&format!("{name}p"), base).unwrap();
    c.add_generator(
        &format!("{name}q"),
        Bigrading::new(base.gr_u - shift.gr_u - 1, base.gr_v - shift.gr_v - 1),
    )
    .unwrap();
    c.set_entry(
        &format!("{name}p"),
        &format!("{name}q"),
        RingElem::from_monomial(RingTag::R, m),
    )
    .unwrap();
    c
}

/// Four-generator acyclic box `a -> b, c; b, c -> d` with a unit pair of
/// parallel edges and a `V^k` pair of parallel edges.
fn unit_box(name: &str, base: Bigrading, k: u32) -> BigradedComplex {
    let mut c = BigradedComplex::new(RingTag::R);
    let g = |du: i64, dv: i64| Bigrading::new(base.gr_u + du, base.gr_v + dv);
    let n = |suffix: &str| format!("{name}{suffix}");
    c.add_generator(&n("a"), base).unwrap();
    c.add_generator(&n("b"), g(-1, -1)).unwrap();
    c.add_generator(&n("c"), g(-1, 2 * k as i64 - 1)).unwrap();
    c.add_generator(&n("d"), g(-2, 2 * k as i64 - 2)).unwrap();
    let one = RingElem::one(RingTag::R);
    let vk = RingElem::from_monomial(RingTag::R, Monomial::v_pow(k));
    c.set_entry(&n("a"), &n("b"), one.clone()).unwrap();
    c.set_entry(&n("a"), &n("c"), vk.clone()).unwrap();
    c.set_entry(&n("b"), &n("d"), vk).unwrap();
    c.set_entry(&n("c"), &n("d"), one).unwrap();
    c
}

/// Four-generator box `a -> b, c; b, c -> d` with a `U^j` pair and a `V^k`
/// pair of parallel edges.  Acyclic after inverting either variable, so it
/// never changes a local-equivalence class.
fn uv_box(name: &str, base: Bigrading, j: u32, k: u32) -> BigradedComplex {
    let mut c = BigradedComplex::new(RingTag::R);
    let g = |du: i64, dv: i64| Bigrading::new(base.gr_u + du, base.gr_v + dv);
    let n = |s: &str| format!("{name}{s}");
    c.add_generator(&n("a"), base).unwrap();
    c.add_generator(&n("b"), g(2 * j as i64 - 1, -1)).unwrap();
    c.add_generator(&n("c"), g(-1, 2 * k as i64 - 1)).unwrap();
    c.add_generator(&n("d"), g(2 * j as i64 - 2, 2 * k as i64 - 2)).unwrap();
    let uj = RingElem::from_monomial(RingTag::R, Monomial::u_pow(j));
    let vk = RingElem::from_monomial(RingTag::R, Monomial::v_pow(k));
    c.set_entry(&n("a"), &n("b"), uj.clone()).unwrap();
    c.set_entry(&n("a"), &n("c"), vk.clone()).unwrap();
    c.set_entry(&n("b"), &n("d"), vk).unwrap();
    c.set_entry(&n("c"), &n("d"), uj).unwrap();
    c
}

/// Direct-sum `extra` onto `c`, renaming its generators away from clashes.
fn absorb(c: &mut BigradedComplex, extra: &BigradedComplex) {
    *c = c.direct_sum(extra).expect("same ring and fresh names");
}

/// Apply `steps` random grading-preserving changes of basis
/// (`x_i <- x_i + m x_j` for an admissible monomial `m`).  Validity, the
/// chain-homotopy type, and all gradings are preserved; unit differentials
/// are neither required nor created beyond what the summands contribute.
pub fn conjugate(c: &mut BigradedComplex, rng: &mut ChaCha8Rng, steps: usize) {
    let n = c.num_gens();
    if n < 2 {
        return;
    }
    let mut moves: Vec<(usize, usize, Monomial)> = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            let gi = c.gens()[i].grading;
            let gj = c.gens()[j].grading;
            let (du, dv) = (gi.gr_u - gj.gr_u, gi.gr_v - gj.gr_v);
            let m = if (du, dv) == (0, 0) {
                Some(Monomial::ONE)
            } else if dv == 0 && du < 0 && du % 2 == 0 {
                Some(Monomial::u_pow((-du / 2) as u32))
            } else if du == 0 && dv < 0 && dv % 2 == 0 {
                Some(Monomial::v_pow((-dv / 2) as u32))
            } else {
                None
            };
            if let Some(m) = m {
                moves.push((i, j, m));
            }
        }
    }
    if moves.is_empty() {
        return;
    }
    for _ in 0..steps {
        let (i, j, m) = moves[rng.random_range(0..moves.len())];
        transvect(c, i, j, &m);
    }
}

/// The change of basis `x_i <- x_i + m x_j` pushed through the differential:
/// row `i` gains `m` times row `j`, and every entry landing on `x_i` lands
/// `m` times on `x_j` as well.
fn transvect(c: &mut BigradedComplex, i: usize, j: usize, m: &Monomial) {
    let me = RingElem::from_monomial(c.ring_tag(), *m);
    let row_j: Vec<(usize, RingElem)> = c.row(j).map(|(l, e)| (l, e.clone())).collect();
    for (l, e) in row_j {
        let prod = me.mul(&e).expect("same ring");
        c.add_entry(i, l, &prod).expect("admissible by construction");
    }
    let col_i: Vec<(usize, RingElem)> =
        c.entries().filter(|&(_, t, _)| t == i).map(|(k, _, e)| (k, e.clone())).collect();
    for (k, e) in col_i {
        let prod = e.mul(&me).expect("same ring");
        c.add_entry(k, j, &prod).expect("admissible by construction");
    }
}

/// A random reduced complex with one-dimensional hat homology: a standard
/// skeleton plus `V`-power pairs and boxes (both hat-acyclic), randomly
/// conjugated.  At most 12 generators.
pub fn random_reduced_rank_one(rng: &mut ChaCha8Rng) -> BigradedComplex {
    let skeleton = random_params(rng, 2, 3);
    let mut c = build_standard(&skeleton).complex.with_prefix("s.");
    let mut budget = 12usize.saturating_sub(c.num_gens());
    let mut idx = 0;
    while budget >= 2 && rng.random_bool(0.7) {
        idx += 1;
        if budget >= 4 && rng.random_bool(0.3) {
            // A reduced box: all four edges carry positive powers.
            let jk = rng.random_range(2..=3u32);
            let kk = rng.random_range(1..=3u32);
            absorb(&mut c, &uv_box(&format!("b{idx}"), random_base(rng), jk, kk));
            budget -= 4;
        } else {
            let b = rng.random_range(1..=3u32);
            absorb(&mut c, &pair(&format!("v{idx}"), random_base(rng), Monomial::v_pow(b)));
            budget -= 2;
        }
    }
    let steps = 2 * c.num_gens();
    conjugate(&mut c, rng, steps);
    debug_assert!(c.validate().is_valid());
    debug_assert!(c.is_reduced());
    c
}

/// A random valid, generally unreduced complex together with its skeleton:
/// the skeleton plus unit pairs and unit boxes, randomly conjugated.
/// Reduction must recover the skeleton's chain-homotopy type.
pub fn random_unreduced_with_skeleton(
    rng: &mut ChaCha8Rng,
) -> (BigradedComplex, BigradedComplex) {
    let skeleton = build_standard(&random_params(rng, 2, 3)).complex;
    let mut c = skeleton.with_prefix("s.");
    let summands = rng.random_range(1..=3);
    for idx in 0..summands {
        if rng.random_bool(0.4) {
            absorb(&mut c, &unit_box(&format!("u{idx}"), random_base(rng), rng.random_range(1..=3)));
        } else {
            absorb(&mut c, &pair(&format!("u{idx}"), random_base(rng), Monomial::ONE));
        }
    }
    let steps = 3 * c.num_gens();
    conjugate(&mut c, rng, steps);
    debug_assert!(c.validate().is_valid());
    (c, skeleton)
}

/// A random complex that is acyclic after inverting either variable, so a
/// direct sum with it stays in the same local-equivalence class: unit pairs,
/// unit boxes, and `U`/`V` boxes only, randomly conjugated.  The `tag` keeps
/// generator names disjoint across calls.
pub fn random_acyclic(rng: &mut ChaCha8Rng, tag: usize) -> BigradedComplex {
    let mut c: Option<BigradedComplex> = None;
    for idx in 0..rng.random_range(1..=3) {
        let name = format!("x{tag}.{idx}");
        let base = random_base(rng);
        let piece = match rng.random_range(0..3) {
            0 => pair(&name, base, Monomial::ONE),
            1 => unit_box(&name, base, rng.random_range(1..=3)),
            _ => uv_box(&name, base, rng.random_range(1..=3), rng.random_range(1..=3)),
        };
        c = Some(match c {
            Some(acc) => acc.direct_sum(&piece).expect("fresh names"),
            None => piece,
        });
    }
    let mut c = c.expect("at least one summand");
    let steps = c.num_gens();
    conjugate(&mut c, rng, steps);
    debug_assert!(c.validate().is_valid());
    c
}
