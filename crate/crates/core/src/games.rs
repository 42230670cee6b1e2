//! Two-prover games, strategy evaluation, and the game associated with
//! sending `n` messages perfectly over a channel.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::channel::Channel;
use crate::error::{Error, Result};
use crate::exact::{format_rational, parse_rational, Rational};
use crate::graph::max_independent_set;
use crate::ns::NsBox;

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Alphabets {
    pub alice_questions: Vec<String>,
    pub bob_questions: Vec<String>,
    pub alice_answers: Vec<String>,
    pub bob_answers: Vec<String>,
}

impl Alphabets {
    fn shape(&self) -> (usize, usize, usize, usize) {
        (
            self.alice_questions.len(),
            self.bob_questions.len(),
            self.alice_answers.len(),
            self.bob_answers.len(),
        )
    }

    fn index(&self, a: usize, b: usize, x: usize, y: usize) -> usize {
        let (_, nb, nx, ny) = self.shape();
        ((a * nb + b) * nx + x) * ny + y
    }

    fn len(&self) -> usize {
        let (na, nb, nx, ny) = self.shape();
        na * nb * nx * ny
    }
}

/// Questions `(a, b)` drawn from `prob`; answers `(α, β)` accepted with
/// probability `accept(a, b, α, β)`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Game {
    pub alphabets: Alphabets,
    prob: Vec<Rational>,
    accept: Vec<Rational>,
}

impl Game {
    pub fn new(alphabets: Alphabets, prob: Vec<Rational>, accept: Vec<Rational>) -> Result<Self> {
        let (na, nb, _, _) = alphabets.shape();
        if prob.len() != na * nb || accept.len() != alphabets.len() {
            return Err(Error::BadGame("table sizes do not match alphabets".into()));
        }
        if prob.iter().any(Signed::is_negative) || !prob.iter().sum::<Rational>().is_one() {
            return Err(Error::BadGame(
                "question distribution is not a probability distribution".into(),
            ));
        }
        if accept
            .iter()
            .any(|v| v.is_negative() || *v > Rational::one())
        {
            return Err(Error::BadGame("acceptance values must lie in [0,1]".into()));
        }
        Ok(Self {
            alphabets,
            prob,
            accept,
        })
    }

    pub fn prob(&self, a: usize, b: usize) -> &Rational {
        &self.prob[a * self.alphabets.bob_questions.len() + b]
    }

    pub fn accept(&self, a: usize, b: usize, x: usize, y: usize) -> &Rational {
        &self.accept[self.alphabets.index(a, b, x, y)]
    }

    pub fn to_file(&self) -> GameFile {
        let (na, nb, _, _) = self.alphabets.shape();
        GameFile {
            alphabets: AlphabetsFile::from(&self.alphabets),
            prob: (0..na)
                .map(|a| (0..nb).map(|b| format_rational(self.prob(a, b))).collect())
                .collect(),
            accept: table_to_file(&self.alphabets, &self.accept),
        }
    }

    pub fn from_file(f: GameFile) -> Result<Self> {
        let alphabets = Alphabets::from(f.alphabets);
        let (na, nb, _, _) = alphabets.shape();
        if f.prob.len() != na || f.prob.iter().any(|r| r.len() != nb) {
            return Err(Error::Format("prob must be indexed [a][b]".into()));
        }
        let prob = f
            .prob
            .iter()
            .flatten()
            .map(|s| parse_rational(s))
            .collect::<Result<Vec<_>>>()?;
        let accept = table_from_file(&alphabets, &f.accept)?;
        Self::new(alphabets, prob, accept)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_file()).expect("game serializes")
    }
}

/// A correlation `s(α, β | a, b)`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Strategy {
    pub alphabets: Alphabets,
    s: Vec<Rational>,
}

impl Strategy {
    pub fn new(alphabets: Alphabets, s: Vec<Rational>) -> Result<Self> {
        if s.len() != alphabets.len() {
            return Err(Error::BadStrategy(
                "table size does not match alphabets".into(),
            ));
        }
        if s.iter().any(Signed::is_negative) {
            return Err(Error::BadStrategy("negative probability".into()));
        }
        let (na, nb, nx, ny) = alphabets.shape();
        for a in 0..na {
            for b in 0..nb {
                let total: Rational = (0..nx)
                    .flat_map(|x| (0..ny).map(move |y| (x, y)))
                    .map(|(x, y)| &s[alphabets.index(a, b, x, y)])
                    .sum();
                if !total.is_one() {
                    return Err(Error::BadStrategy(format!(
                        "answers to ({}, {}) sum to {total}",
                        alphabets.alice_questions[a], alphabets.bob_questions[b]
                    )));
                }
            }
        }
        Ok(Self { alphabets, s })
    }

    pub fn from_fn(
        alphabets: Alphabets,
        mut f: impl FnMut(usize, usize, usize, usize) -> Rational,
    ) -> Result<Self> {
        let (na, nb, nx, ny) = alphabets.shape();
        let mut s = Vec::with_capacity(alphabets.len());
        for a in 0..na {
            for b in 0..nb {
                for x in 0..nx {
                    for y in 0..ny {
                        s.push(f(a, b, x, y));
                    }
                }
            }
        }
        Self::new(alphabets, s)
    }

    /// Every answer pair equally likely.
    pub fn uniform(alphabets: Alphabets) -> Self {
        let (_, _, nx, ny) = alphabets.shape();
        let w = Rational::new(BigInt::one(), BigInt::from(nx * ny));
        Self::from_fn(alphabets, |_, _, _, _| w.clone()).expect("uniform strategy is normalized")
    }

    /// Alice answers `alice[a]`, Bob answers `bob[b]`.
    pub fn deterministic(alphabets: Alphabets, alice: &[usize], bob: &[usize]) -> Result<Self> {
        Self::from_fn(alphabets, |a, b, x, y| {
            if alice[a] == x && bob[b] == y {
                Rational::one()
            } else {
                Rational::zero()
            }
        })
    }

    /// Uses an NS box directly as the strategy: questions are box inputs and
    /// answers box outputs. Bob's questions and Alice's answers are matched by
    /// label, message alphabets by position.
    pub fn from_box(g: &Game, p: &NsBox) -> Result<Self> {
        let al = &g.alphabets;
        if p.alice_inputs.len() != al.alice_questions.len()
            || p.bob_outputs.len() != al.bob_answers.len()
        {
            return Err(Error::AlphabetMismatch(
                "message alphabets differ in size".into(),
            ));
        }
        let find = |names: &[String], l: &str, what: &str| {
            names
                .iter()
                .position(|n| n == l)
                .ok_or_else(|| Error::AlphabetMismatch(format!("{what} {l:?} missing from box")))
        };
        let b_of = al
            .bob_questions
            .iter()
            .map(|l| find(&p.bob_inputs, l, "Bob question"))
            .collect::<Result<Vec<_>>>()?;
        let x_of = al
            .alice_answers
            .iter()
            .map(|l| find(&p.alice_outputs, l, "Alice answer"))
            .collect::<Result<Vec<_>>>()?;
        if x_of.len() != p.alice_outputs.len() {
            return Err(Error::AlphabetMismatch(
                "box has extra Alice outputs".into(),
            ));
        }
        Self::from_fn(al.clone(), |a, b, x, y| p.p(a, b_of[b], x_of[x], y).clone())
    }

    pub fn s(&self, a: usize, b: usize, x: usize, y: usize) -> &Rational {
        &self.s[self.alphabets.index(a, b, x, y)]
    }

    /// `λ·self + (1-λ)·other`.
    pub fn mix(&self, other: &Strategy, lambda: &Rational) -> Result<Strategy> {
        if self.alphabets != other.alphabets {
            return Err(Error::AlphabetMismatch(
                "strategies have different alphabets".into(),
            ));
        }
        let mu = Rational::one() - lambda;
        Ok(Strategy {
            alphabets: self.alphabets.clone(),
            s: self
                .s
                .iter()
                .zip(&other.s)
                .map(|(u, v)| lambda * u + &mu * v)
                .collect(),
        })
    }

    pub fn to_file(&self) -> StrategyFile {
        StrategyFile {
            alphabets: AlphabetsFile::from(&self.alphabets),
            s: table_to_file(&self.alphabets, &self.s),
        }
    }

    pub fn from_file(f: StrategyFile) -> Result<Self> {
        let alphabets = Alphabets::from(f.alphabets);
        let s = table_from_file(&alphabets, &f.s)?;
        Self::new(alphabets, s)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_file()).expect("strategy serializes")
    }
}

/// `g(s) = Σ A(a,b,α,β) p(a,b) s(α,β|a,b)`.
pub fn win_probability(g: &Game, s: &Strategy) -> Result<Rational> {
    if g.alphabets != s.alphabets {
        return Err(Error::AlphabetMismatch(
            "strategy alphabets differ from the game's".into(),
        ));
    }
    let (na, nb, nx, ny) = g.alphabets.shape();
    let mut total = Rational::zero();
    for a in 0..na {
        for b in 0..nb {
            let pq = g.prob(a, b);
            if pq.is_zero() {
                continue;
            }
            let mut inner = Rational::zero();
            for x in 0..nx {
                for y in 0..ny {
                    let acc = g.accept(a, b, x, y);
                    if !acc.is_zero() {
                        inner += acc * s.s(a, b, x, y);
                    }
                }
            }
            total += pq * inner;
        }
    }
    Ok(total)
}

pub fn is_perfect(g: &Game, s: &Strategy) -> Result<bool> {
    Ok(win_probability(g, s)?.is_one())
}

fn message_labels(msgs: usize) -> Vec<String> {
    (1..=msgs).map(|i| i.to_string()).collect()
}

/// Alice gets a message `m ∈ [msgs]`, Bob a channel output `y`, both
/// uniform and independent. Alice answers an input `x`, Bob a guess `m̂`.
/// They lose only when `N(y|x) > 0` and `m̂ ≠ m`.
pub fn build_channel_game(n: &Channel, msgs: usize) -> Result<Game> {
    if msgs == 0 {
        return Err(Error::BadGame("need at least one message".into()));
    }
    let alphabets = Alphabets {
        alice_questions: message_labels(msgs),
        bob_questions: n.outputs().to_vec(),
        alice_answers: n.inputs().to_vec(),
        bob_answers: message_labels(msgs),
    };
    let (na, nb, nx, ny) = alphabets.shape();
    let p = Rational::new(BigInt::one(), BigInt::from(na * nb));
    let mut accept = Vec::with_capacity(alphabets.len());
    for m in 0..na {
        for y in 0..nb {
            for x in 0..nx {
                for guess in 0..ny {
                    let win = n.prob(x, y).is_zero() || guess == m;
                    accept.push(if win {
                        Rational::one()
                    } else {
                        Rational::zero()
                    });
                }
            }
        }
    }
    Game::new(alphabets, vec![p; na * nb], accept)
}

/// For a channel-game strategy: whether `Σ_{x,y} N(y|x) s(x,m̂|m,y) = δ_{m m̂}`
/// for all message pairs.
pub fn delta_condition(n: &Channel, s: &Strategy) -> Result<bool> {
    let al = &s.alphabets;
    if al.bob_questions != n.outputs() || al.alice_answers != n.inputs() {
        return Err(Error::AlphabetMismatch(
            "strategy is not for this channel".into(),
        ));
    }
    let msgs = al.alice_questions.len();
    if al.bob_answers.len() != msgs {
        return Err(Error::AlphabetMismatch("message alphabets differ".into()));
    }
    for m in 0..msgs {
        for guess in 0..msgs {
            let mut sum = Rational::zero();
            for x in 0..n.inputs().len() {
                for y in 0..n.outputs().len() {
                    let p = n.prob(x, y);
                    if !p.is_zero() {
                        sum += p * s.s(m, y, x, guess);
                    }
                }
            }
            let want = if m == guess {
                Rational::one()
            } else {
                Rational::zero()
            };
            if sum != want {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// A perfect shared-randomness strategy exists iff the channel has a
/// `msgs`-message zero-error code.
pub fn classical_perfect_exists(n: &Channel, msgs: usize) -> bool {
    max_independent_set(&n.confusability_graph()).size >= msgs
}

/// Enumerates every deterministic strategy pair (`|X|^msgs · msgs^|Y|`) and
/// reports whether one wins with certainty.
pub fn deterministic_perfect_exists(n: &Channel, msgs: usize) -> bool {
    let nx = n.inputs().len();
    let ny = n.outputs().len();
    let mut alice = vec![0usize; msgs];
    loop {
        let mut bob = vec![0usize; ny];
        loop {
            let perfect =
                (0..msgs).all(|m| (0..ny).all(|y| n.prob(alice[m], y).is_zero() || bob[y] == m));
            if perfect {
                return true;
            }
            if !odometer(&mut bob, msgs) {
                break;
            }
        }
        if !odometer(&mut alice, nx) {
            return false;
        }
    }
}

fn odometer(digits: &mut [usize], base: usize) -> bool {
    for d in digits.iter_mut() {
        *d += 1;
        if *d < base {
            return true;
        }
        *d = 0;
    }
    false
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct AlphabetsFile {
    pub alice_questions: Vec<String>,
    pub bob_questions: Vec<String>,
    pub alice_answers: Vec<String>,
    pub bob_answers: Vec<String>,
}

impl From<&Alphabets> for AlphabetsFile {
    fn from(a: &Alphabets) -> Self {
        Self {
            alice_questions: a.alice_questions.clone(),
            bob_questions: a.bob_questions.clone(),
            alice_answers: a.alice_answers.clone(),
            bob_answers: a.bob_answers.clone(),
        }
    }
}

impl From<AlphabetsFile> for Alphabets {
    fn from(a: AlphabetsFile) -> Self {
        Self {
            alice_questions: a.alice_questions,
            bob_questions: a.bob_questions,
            alice_answers: a.alice_answers,
            bob_answers: a.bob_answers,
        }
    }
}

/// On-disk game: alphabets, `prob[a][b]`, `accept[a][b][α][β]`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GameFile {
    #[serde(flatten)]
    pub alphabets: AlphabetsFile,
    pub prob: Vec<Vec<String>>,
    pub accept: Vec<Vec<Vec<Vec<String>>>>,
}

/// On-disk strategy: alphabets and `s[a][b][α][β]`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct StrategyFile {
    #[serde(flatten)]
    pub alphabets: AlphabetsFile,
    pub s: Vec<Vec<Vec<Vec<String>>>>,
}

type Table4 = Vec<Vec<Vec<Vec<String>>>>;

fn table_to_file(al: &Alphabets, t: &[Rational]) -> Table4 {
    let (na, nb, nx, ny) = al.shape();
    (0..na)
        .map(|a| {
            (0..nb)
                .map(|b| {
                    (0..nx)
                        .map(|x| {
                            (0..ny)
                                .map(|y| format_rational(&t[al.index(a, b, x, y)]))
                                .collect()
                        })
                        .collect()
                })
                .collect()
        })
        .collect()
}

fn table_from_file(al: &Alphabets, t: &Table4) -> Result<Vec<Rational>> {
    let (na, nb, nx, ny) = al.shape();
    let ok = t.len() == na
        && t.iter().all(|ta| {
            ta.len() == nb
                && ta
                    .iter()
                    .all(|tb| tb.len() == nx && tb.iter().all(|tx| tx.len() == ny))
        });
    if !ok {
        return Err(Error::Format(format!(
            "table must have shape {na}x{nb}x{nx}x{ny}"
        )));
    }
    t.iter()
        .flatten()
        .flatten()
        .flatten()
        .map(|s| parse_rational(s))
        .collect()
}
