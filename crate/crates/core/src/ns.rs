//! Non-signalling boxes `p(x,y|a,b)` and their use as a coding resource.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::channel::Channel;
use crate::error::{Error, Result};
use crate::exact::{format_rational, parse_rational, Rational};

/// Dense table `p(x,y|a,b)`: Alice inputs `a`, outputs `x`; Bob inputs `b`,
/// outputs `y`. Not necessarily non-signalling; see [`verify_ns`].
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct NsBox {
    pub alice_inputs: Vec<String>,
    pub bob_inputs: Vec<String>,
    pub alice_outputs: Vec<String>,
    pub bob_outputs: Vec<String>,
    p: Vec<Rational>,
}

impl NsBox {
    /// `f(a, b, x, y)` evaluated over the full index space.
    pub fn from_fn(
        alice_inputs: Vec<String>,
        bob_inputs: Vec<String>,
        alice_outputs: Vec<String>,
        bob_outputs: Vec<String>,
        mut f: impl FnMut(usize, usize, usize, usize) -> Rational,
    ) -> Self {
        let (na, nb, nx, ny) = (
            alice_inputs.len(),
            bob_inputs.len(),
            alice_outputs.len(),
            bob_outputs.len(),
        );
        let mut p = Vec::with_capacity(na * nb * nx * ny);
        for a in 0..na {
            for b in 0..nb {
                for x in 0..nx {
                    for y in 0..ny {
                        p.push(f(a, b, x, y));
                    }
                }
            }
        }
        Self {
            alice_inputs,
            bob_inputs,
            alice_outputs,
            bob_outputs,
            p,
        }
    }

    pub fn p(&self, a: usize, b: usize, x: usize, y: usize) -> &Rational {
        let (nb, nx, ny) = (
            self.bob_inputs.len(),
            self.alice_outputs.len(),
            self.bob_outputs.len(),
        );
        &self.p[((a * nb + b) * nx + x) * ny + y]
    }

    /// `p(x|a)` read at Bob input `b`.
    pub fn alice_marginal(&self, a: usize, b: usize, x: usize) -> Rational {
        (0..self.bob_outputs.len())
            .map(|y| self.p(a, b, x, y))
            .sum()
    }

    pub fn bob_marginal(&self, a: usize, b: usize, y: usize) -> Rational {
        (0..self.alice_outputs.len())
            .map(|x| self.p(a, b, x, y))
            .sum()
    }

    /// `λ·self + (1-λ)·other`; alphabets must agree.
    pub fn mix(&self, other: &NsBox, lambda: &Rational) -> Result<NsBox> {
        self.same_alphabets(other)?;
        let mu = Rational::one() - lambda;
        Ok(NsBox {
            p: self
                .p
                .iter()
                .zip(&other.p)
                .map(|(u, v)| lambda * u + &mu * v)
                .collect(),
            ..self.clone()
        })
    }

    fn same_alphabets(&self, other: &NsBox) -> Result<()> {
        if self.alice_inputs != other.alice_inputs
            || self.bob_inputs != other.bob_inputs
            || self.alice_outputs != other.alice_outputs
            || self.bob_outputs != other.bob_outputs
        {
            return Err(Error::AlphabetMismatch(
                "boxes have different alphabets".into(),
            ));
        }
        Ok(())
    }

    pub fn to_file(&self) -> BoxFile {
        let (na, nb, nx, ny) = self.shape();
        BoxFile {
            alice_inputs: self.alice_inputs.clone(),
            bob_inputs: self.bob_inputs.clone(),
            alice_outputs: self.alice_outputs.clone(),
            bob_outputs: self.bob_outputs.clone(),
            p: (0..na)
                .map(|a| {
                    (0..nb)
                        .map(|b| {
                            (0..nx)
                                .map(|x| {
                                    (0..ny)
                                        .map(|y| format_rational(self.p(a, b, x, y)))
                                        .collect()
                                })
                                .collect()
                        })
                        .collect()
                })
                .collect(),
        }
    }

    pub fn from_file(f: BoxFile) -> Result<Self> {
        let (na, nb, nx, ny) = (
            f.alice_inputs.len(),
            f.bob_inputs.len(),
            f.alice_outputs.len(),
            f.bob_outputs.len(),
        );
        let shape_err = || {
            Error::Format(format!(
                "p must be indexed [a][b][x][y] with shape {na}x{nb}x{nx}x{ny}"
            ))
        };
        if f.p.len() != na {
            return Err(shape_err());
        }
        let mut p = Vec::with_capacity(na * nb * nx * ny);
        for pa in &f.p {
            if pa.len() != nb {
                return Err(shape_err());
            }
            for pb in pa {
                if pb.len() != nx {
                    return Err(shape_err());
                }
                for px in pb {
                    if px.len() != ny {
                        return Err(shape_err());
                    }
                    for s in px {
                        p.push(parse_rational(s)?);
                    }
                }
            }
        }
        Ok(Self {
            alice_inputs: f.alice_inputs,
            bob_inputs: f.bob_inputs,
            alice_outputs: f.alice_outputs,
            bob_outputs: f.bob_outputs,
            p,
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_file()).expect("box serializes")
    }

    fn shape(&self) -> (usize, usize, usize, usize) {
        (
            self.alice_inputs.len(),
            self.bob_inputs.len(),
            self.alice_outputs.len(),
            self.bob_outputs.len(),
        )
    }
}

/// On-disk box: four alphabets and `p[a][b][x][y]` as rational strings.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoxFile {
    pub alice_inputs: Vec<String>,
    pub bob_inputs: Vec<String>,
    pub alice_outputs: Vec<String>,
    pub bob_outputs: Vec<String>,
    pub p: Vec<Vec<Vec<Vec<String>>>>,
}

pub fn parse_box(text: &str) -> Result<NsBox> {
    NsBox::from_file(serde_json::from_str(text)?)
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum NsVerdict {
    Ok,
    Violation(String),
}

impl NsVerdict {
    pub fn is_ok(&self) -> bool {
        matches!(self, NsVerdict::Ok)
    }
}

/// Exact check of positivity, normalization and both no-signalling
/// conditions.
pub fn verify_ns(p: &NsBox) -> NsVerdict {
    let (na, nb, nx, ny) = p.shape();
    if na == 0 || nb == 0 || nx == 0 || ny == 0 {
        return NsVerdict::Violation("empty alphabet".into());
    }
    for a in 0..na {
        for b in 0..nb {
            let mut total = Rational::zero();
            for x in 0..nx {
                for y in 0..ny {
                    let v = p.p(a, b, x, y);
                    if v.is_negative() {
                        return NsVerdict::Violation(format!(
                            "p({},{}|{},{}) = {v} is negative",
                            p.alice_outputs[x],
                            p.bob_outputs[y],
                            p.alice_inputs[a],
                            p.bob_inputs[b]
                        ));
                    }
                    total += v;
                }
            }
            if !total.is_one() {
                return NsVerdict::Violation(format!(
                    "p(·,·|{},{}) sums to {total}",
                    p.alice_inputs[a], p.bob_inputs[b]
                ));
            }
        }
    }
    for a in 0..na {
        for x in 0..nx {
            let first = p.alice_marginal(a, 0, x);
            for b in 1..nb {
                let m = p.alice_marginal(a, b, x);
                if m != first {
                    return NsVerdict::Violation(format!(
                        "Alice's marginal p(x={}|a={}) is {first} at b={} but {m} at b={}",
                        p.alice_outputs[x], p.alice_inputs[a], p.bob_inputs[0], p.bob_inputs[b]
                    ));
                }
            }
        }
    }
    for b in 0..nb {
        for y in 0..ny {
            let first = p.bob_marginal(0, b, y);
            for a in 1..na {
                let m = p.bob_marginal(a, b, y);
                if m != first {
                    return NsVerdict::Violation(format!(
                        "Bob's marginal p(y={}|b={}) is {first} at a={} but {m} at a={}",
                        p.bob_outputs[y], p.bob_inputs[b], p.alice_inputs[0], p.alice_inputs[a]
                    ));
                }
            }
        }
    }
    NsVerdict::Ok
}

fn labels(range: std::ops::RangeInclusive<u32>) -> Vec<String> {
    range.map(|i| i.to_string()).collect()
}

/// The six 2-element subsets of {1,2,3,4}, in lexicographic order, with labels
/// like `"{1,2}"`.
pub fn two_subsets() -> Vec<([usize; 2], String)> {
    let mut out = Vec::with_capacity(6);
    for i in 1..=4 {
        for j in i + 1..=4 {
            out.push(([i, j], format!("{{{i},{j}}}")));
        }
    }
    out
}

/// The one-bit box: Alice's output `x` is uniform on {1,2,3,4}; Bob outputs
/// `a` when `x ∈ b` and `NOT a` otherwise.
pub fn example_box() -> NsBox {
    let subsets = two_subsets();
    let quarter = Rational::new(BigInt::one(), BigInt::from(4));
    NsBox::from_fn(
        labels(0..=1),
        subsets.iter().map(|(_, l)| l.clone()).collect(),
        labels(1..=4),
        labels(0..=1),
        |a, b, x, y| {
            let inside = subsets[b].0.contains(&(x + 1));
            let bob = if inside { a } else { 1 - a };
            if y == bob {
                quarter.clone()
            } else {
                Rational::zero()
            }
        },
    )
}

/// Input `j ∈ {1,2,3,4}`, output a uniformly chosen 2-subset containing `j`.
pub fn example_channel() -> Channel {
    let subsets = two_subsets();
    let third = Rational::new(BigInt::one(), BigInt::from(3));
    let matrix = (1..=4)
        .map(|j| {
            subsets
                .iter()
                .map(|(s, _)| {
                    if s.contains(&j) {
                        third.clone()
                    } else {
                        Rational::zero()
                    }
                })
                .collect()
        })
        .collect();
    Channel::new(
        labels(1..=4),
        subsets.into_iter().map(|(_, l)| l).collect(),
        matrix,
    )
    .expect("example channel is valid")
}

/// Effective channel from Alice's box input to Bob's box output when Alice
/// feeds `x` into `n` and Bob feeds the channel output in as `b`:
/// `M(y|a) = Σ_x Σ_b N(b|x) p(x,y|a,b)`.
pub fn compose_box_channel(p: &NsBox, n: &Channel) -> Result<Channel> {
    if let NsVerdict::Violation(v) = verify_ns(p) {
        return Err(Error::Signalling(v));
    }
    let x_of: Vec<usize> = p
        .alice_outputs
        .iter()
        .map(|l| {
            n.input_index(l).ok_or_else(|| {
                Error::AlphabetMismatch(format!("box output {l:?} is not a channel input"))
            })
        })
        .collect::<Result<_>>()?;
    if n.inputs().len() != p.alice_outputs.len() {
        return Err(Error::AlphabetMismatch(format!(
            "channel has {} inputs, box Alice output alphabet has {}",
            n.inputs().len(),
            p.alice_outputs.len()
        )));
    }
    let b_of: Vec<usize> = n
        .outputs()
        .iter()
        .map(|l| {
            p.bob_inputs.iter().position(|b| b == l).ok_or_else(|| {
                Error::AlphabetMismatch(format!("channel output {l:?} is not a box input"))
            })
        })
        .collect::<Result<_>>()?;
    if n.outputs().len() != p.bob_inputs.len() {
        return Err(Error::AlphabetMismatch(format!(
            "channel has {} outputs, box Bob input alphabet has {}",
            n.outputs().len(),
            p.bob_inputs.len()
        )));
    }
    let (na, _, nx, ny) = p.shape();
    let matrix = (0..na)
        .map(|a| {
            (0..ny)
                .map(|y| {
                    let mut acc = Rational::zero();
                    for xb in 0..nx {
                        let x = x_of[xb];
                        for (out, &b) in b_of.iter().enumerate() {
                            let nbx = n.prob(x, out);
                            if !nbx.is_zero() {
                                acc += nbx * p.p(a, b, xb, y);
                            }
                        }
                    }
                    acc
                })
                .collect()
        })
        .collect();
    Channel::new(p.alice_inputs.clone(), p.bob_outputs.clone(), matrix)
}

/// True iff messages `0..q` (Alice input `i` paired with Bob output `i`) are
/// decoded perfectly through the composed channel.
pub fn ns_zero_error_check(p: &NsBox, n: &Channel, q: usize) -> Result<bool> {
    if q == 0 || q > p.alice_inputs.len() || q > p.bob_outputs.len() {
        return Err(Error::MessageCount {
            requested: q,
            available: p.alice_inputs.len().min(p.bob_outputs.len()),
        });
    }
    let m = compose_box_channel(p, n)?;
    // compose drops never-produced outputs, so look columns up by label
    Ok((0..q).all(|a| match m.output_index(&p.bob_outputs[a]) {
        Some(y) => m.prob(a, y).is_one(),
        None => false,
    }))
}

/// Local deterministic box `x = f(a)`, `y = g(b)`.
pub fn deterministic_local_box(template: &NsBox, f: &[usize], g: &[usize]) -> NsBox {
    NsBox::from_fn(
        template.alice_inputs.clone(),
        template.bob_inputs.clone(),
        template.alice_outputs.clone(),
        template.bob_outputs.clone(),
        |a, b, x, y| {
            if f[a] == x && g[b] == y {
                Rational::one()
            } else {
                Rational::zero()
            }
        },
    )
}
