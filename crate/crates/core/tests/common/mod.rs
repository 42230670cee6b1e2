//! Independent brute-force oracles and fixtures shared by the integration tests.
#![allow(dead_code)]

use std::sync::atomic::{AtomicUsize, Ordering};

use num_traits::{One, Signed, Zero};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use zedge::graph::Hypergraph;
use zedge::{solve_packing, Channel, Graph, PackingSolution, Rational};

pub fn r(n: i64, d: i64) -> Rational {
    zedge::exact::rat(n, d)
}

/// Random channel with `1..=max_in` inputs and `1..=max_out` outputs. Each row
/// gets a random non-empty support with small integer weights.
pub fn random_channel(rng: &mut ChaCha8Rng, max_in: usize, max_out: usize) -> Channel {
    let ni = rng.gen_range(1..=max_in);
    let no = rng.gen_range(1..=max_out);
    random_channel_sized(rng, ni, no)
}

pub fn random_channel_sized(rng: &mut ChaCha8Rng, ni: usize, no: usize) -> Channel {
    let matrix = (0..ni)
        .map(|_| {
            let mut w: Vec<i64> = (0..no)
                .map(|_| {
                    if rng.gen_bool(0.5) {
                        rng.gen_range(1..=5)
                    } else {
                        0
                    }
                })
                .collect();
            if w.iter().all(|&v| v == 0) {
                w[rng.gen_range(0..no)] = 1;
            }
            let total: i64 = w.iter().sum();
            w.into_iter().map(|v| r(v, total)).collect()
        })
        .collect();
    Channel::new(
        (0..ni).map(|i| format!("x{}", i + 1)).collect(),
        (0..no).map(|j| format!("y{}", j + 1)).collect(),
        matrix,
    )
    .expect("rows are normalized")
}

/// Channel whose confusability graph is complete: every row puts weight on
/// the shared output `c`.
pub fn random_complete_channel(rng: &mut ChaCha8Rng, ni: usize, extra_out: usize) -> Channel {
    let no = extra_out + 1;
    let matrix = (0..ni)
        .map(|_| {
            let mut w: Vec<i64> = (0..no)
                .map(|_| {
                    if rng.gen_bool(0.5) {
                        rng.gen_range(1..=4)
                    } else {
                        0
                    }
                })
                .collect();
            w[0] = rng.gen_range(1..=4);
            let total: i64 = w.iter().sum();
            w.into_iter().map(|v| r(v, total)).collect()
        })
        .collect();
    let mut outputs = vec!["c".to_string()];
    outputs.extend((1..no).map(|j| format!("y{j}")));
    Channel::new(
        (0..ni).map(|i| format!("x{}", i + 1)).collect(),
        outputs,
        matrix,
    )
    .expect("normalized")
}

/// Size of a maximum independent set by enumerating all 2^n subsets.
pub fn brute_mis(g: &Graph) -> usize {
    let n = g.order();
    assert!(n <= 20, "brute force is exponential");
    let mut best = 0;
    for mask in 0u32..(1 << n) {
        let size = mask.count_ones() as usize;
        if size <= best {
            continue;
        }
        let ok = (0..n).all(|a| {
            mask >> a & 1 == 0 || (a + 1..n).all(|b| mask >> b & 1 == 0 || !g.adjacent(a, b))
        });
        if ok {
            best = size;
        }
    }
    best
}

/// Solves a square system over the rationals; `None` when singular.
fn solve_square(mut a: Vec<Vec<Rational>>, mut b: Vec<Rational>) -> Option<Vec<Rational>> {
    let n = b.len();
    for col in 0..n {
        let piv = (col..n).find(|&row| !a[row][col].is_zero())?;
        a.swap(col, piv);
        b.swap(col, piv);
        let inv = a[col][col].clone().recip();
        for row in 0..n {
            if row != col && !a[row][col].is_zero() {
                let f = &a[row][col] * &inv;
                for k in col..n {
                    let t = &f * &a[col][k];
                    a[row][k] -= t;
                }
                let t = &f * &b[col];
                b[row] -= t;
            }
        }
    }
    Some((0..n).map(|i| &b[i] / &a[i][i]).collect())
}

fn combinations(n: usize, k: usize, f: &mut impl FnMut(&[usize])) {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, f: &mut impl FnMut(&[usize])) {
        if cur.len() == k {
            f(cur);
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            go(i + 1, n, k, cur, f);
            cur.pop();
        }
    }
    go(0, n, k, &mut Vec::new(), f);
}

/// Optimal value of the packing LP found by enumerating every basic point:
/// each choice of n tight constraints among the hyperedge rows, the boxes
/// v ≤ 1 and the bounds v ≥ 0.
pub fn bfp_alpha_star(h: &Hypergraph) -> Rational {
    let n = h.order();
    if n == 0 {
        return Rational::zero();
    }
    let mut rows: Vec<(Vec<Rational>, Rational)> = Vec::new();
    for e in h.edges() {
        let mut a = vec![Rational::zero(); n];
        for &v in &e.vertices {
            a[v] = Rational::one();
        }
        rows.push((a, Rational::one()));
    }
    for v in 0..n {
        let mut a = vec![Rational::zero(); n];
        a[v] = Rational::one();
        rows.push((a.clone(), Rational::one()));
        a[v] = -Rational::one();
        rows.push((a, Rational::zero()));
    }
    let feasible = |x: &[Rational]| {
        rows.iter().all(|(a, b)| {
            let lhs: Rational = a.iter().zip(x).map(|(p, q)| p * q).sum();
            lhs <= *b
        })
    };
    let mut best: Option<Rational> = None;
    combinations(rows.len(), n, &mut |pick| {
        let a = pick.iter().map(|&i| rows[i].0.clone()).collect();
        let b = pick.iter().map(|&i| rows[i].1.clone()).collect();
        if let Some(x) = solve_square(a, b) {
            if feasible(&x) {
                let obj: Rational = x.iter().sum();
                if best.as_ref().is_none_or(|b| obj > *b) {
                    best = Some(obj);
                }
            }
        }
    });
    best.expect("the origin is a vertex")
}

/// Random hypergraph on `1..=max_v` vertices with `0..=max_e` hyperedges.
pub fn random_hypergraph(rng: &mut ChaCha8Rng, max_v: usize, max_e: usize) -> Hypergraph {
    let n = rng.gen_range(1..=max_v);
    let m = rng.gen_range(0..=max_e);
    let sets: Vec<Vec<usize>> = (0..m)
        .map(|_| (0..n).filter(|_| rng.gen_bool(0.45)).collect())
        .collect();
    Hypergraph::from_sets(n, &sets)
}

static SOLVES: AtomicUsize = AtomicUsize::new(0);
static MISMATCHES: AtomicUsize = AtomicUsize::new(0);

/// Every solve goes through here so strong duality is checked on each one.
pub fn solve_checked(h: &Hypergraph) -> PackingSolution {
    let s = solve_packing(h).expect("packing LP is always feasible and bounded");
    assert_duality(h, &s);
    s
}

pub fn assert_duality(h: &Hypergraph, s: &PackingSolution) {
    SOLVES.fetch_add(1, Ordering::Relaxed);
    let primal: Rational = s.weights.iter().sum();
    let problem = if s.alpha_star != s.dual_objective() {
        Some(format!(
            "primal {} ≠ dual {}",
            s.alpha_star,
            s.dual_objective()
        ))
    } else if primal != s.alpha_star {
        Some("weights do not sum to the optimum".to_string())
    } else if s.weights.iter().any(|w| w.is_negative()) {
        Some("negative weight".to_string())
    } else {
        s.verify(h).err().map(|e| e.to_string())
    };
    if let Some(p) = problem {
        MISMATCHES.fetch_add(1, Ordering::Relaxed);
        panic!("strong duality check failed: {p}");
    }
}

/// (solves checked, solves that failed the check)
pub fn duality_tally() -> (usize, usize) {
    (
        SOLVES.load(Ordering::Relaxed),
        MISMATCHES.load(Ordering::Relaxed),
    )
}

/// Σ_y max_x N(y|x), computed directly from the matrix.
pub fn cost_arg_direct(n: &Channel) -> Rational {
    (0..n.outputs().len())
        .map(|y| {
            (0..n.inputs().len())
                .map(|x| n.prob(x, y).clone())
                .max()
                .expect("inputs nonempty")
        })
        .sum()
}

/// Perfect deterministic strategy for the channel game, by enumeration of
/// encoders f: [msgs] → X and decoders g: Y → [msgs]. A decoder is forced by
/// the encoder wherever an output is reachable, so only encoders are
/// enumerated and the decoder check is direct.
pub fn brute_deterministic_perfect(n: &Channel, msgs: usize) -> bool {
    let nx = n.inputs().len();
    let ny = n.outputs().len();
    let mut f = vec![0usize; msgs];
    loop {
        let mut owner: Vec<Option<usize>> = vec![None; ny];
        let mut ok = true;
        'm: for (m, &x) in f.iter().enumerate() {
            for (y, slot) in owner.iter_mut().enumerate() {
                if n.prob(x, y).is_zero() {
                    continue;
                }
                match slot {
                    Some(prev) if *prev != m => {
                        ok = false;
                        break 'm;
                    }
                    _ => *slot = Some(m),
                }
            }
        }
        if ok {
            return true;
        }
        let mut i = 0;
        loop {
            if i == msgs {
                return false;
            }
            f[i] += 1;
            if f[i] < nx {
                break;
            }
            f[i] = 0;
            i += 1;
        }
    }
}

/// Corpus of channels used by the oracle-equivalence checks.
pub fn corpus(rng: &mut ChaCha8Rng) -> Vec<(String, Channel)> {
    let mut out: Vec<(String, Channel)> = Vec::new();
    for n in 1..=6 {
        out.push((format!("identity{n}"), Channel::identity(n)));
    }
    for n in 3..=12 {
        out.push((format!("cycle{n}"), Channel::cycle(n)));
    }
    out.push(("noise3x2".into(), Channel::uniform_noise(3, 2)));
    out.push(("bsc1/4".into(), Channel::binary_symmetric(r(1, 4)).unwrap()));
    out.push(("example".into(), zedge::example_channel()));
    out.push((
        "c5xc2".into(),
        Channel::cycle(5).tensor(&Channel::identity(2)),
    ));
    out.push((
        "ks-c2".into(),
        zedge::build_ks_channel(&zedge::ks::two_bases_c2()).unwrap(),
    ));
    for i in 0..40 {
        out.push((format!("rand-small{i}"), random_channel(rng, 4, 4)));
    }
    for i in 0..20 {
        let ni = rng.gen_range(5..=12);
        let no = rng.gen_range(3..=10);
        out.push((format!("rand-large{i}"), random_channel_sized(rng, ni, no)));
    }
    for i in 0..10 {
        let a = random_channel(rng, 4, 3);
        let b = random_channel(rng, 3, 3);
        out.push((format!("rand-tensor{i}"), a.tensor(&b)));
    }
    out
}
