//! Discrete memoryless channels with exact transition probabilities.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{format_rational, int, parse_rational, Rational};
use crate::graph::{Graph, Hyperedge, Hypergraph};

/// A channel `N(y|x)`: one row per input, one column per output.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Channel {
    inputs: Vec<String>,
    outputs: Vec<String>,
    matrix: Vec<Vec<Rational>>,
}

impl Channel {
    /// Validates the matrix and drops all-zero output columns.
    pub fn new(
        inputs: Vec<String>,
        outputs: Vec<String>,
        matrix: Vec<Vec<Rational>>,
    ) -> Result<Self> {
        if inputs.is_empty() || outputs.is_empty() {
            return Err(Error::BadChannel(
                "channel needs at least one input and one output".into(),
            ));
        }
        if matrix.len() != inputs.len() {
            return Err(Error::BadChannel(format!(
                "{} inputs but {} matrix rows",
                inputs.len(),
                matrix.len()
            )));
        }
        for (i, row) in matrix.iter().enumerate() {
            let bad = |reason: String| Error::BadRow {
                row: i,
                label: inputs[i].clone(),
                reason,
            };
            if row.len() != outputs.len() {
                return Err(bad(format!(
                    "{} entries, expected {}",
                    row.len(),
                    outputs.len()
                )));
            }
            if let Some(e) = row.iter().find(|e| *e < &Rational::zero()) {
                return Err(bad(format!("negative entry {e}")));
            }
            let sum: Rational = row.iter().sum();
            if !sum.is_one() {
                return Err(bad(format!("row sums to {sum}, not 1")));
            }
        }
        let keep: Vec<usize> = (0..outputs.len())
            .filter(|&y| matrix.iter().any(|row| !row[y].is_zero()))
            .collect();
        if keep.len() < outputs.len() {
            for y in (0..outputs.len()).filter(|y| !keep.contains(y)) {
                log::warn!("dropping output {:?}: no input produces it", outputs[y]);
            }
        }
        let outputs = keep.iter().map(|&y| outputs[y].clone()).collect();
        let matrix = matrix
            .into_iter()
            .map(|row| keep.iter().map(|&y| row[y].clone()).collect())
            .collect();
        Ok(Self {
            inputs,
            outputs,
            matrix,
        })
    }

    pub fn identity(n: usize) -> Self {
        let labels: Vec<String> = (1..=n).map(|i| i.to_string()).collect();
        let matrix = (0..n)
            .map(|i| (0..n).map(|j| int((i == j) as i64)).collect())
            .collect();
        Self::new(labels.clone(), labels, matrix).expect("identity is a valid channel")
    }

    /// Every input produces the same uniform distribution over `outputs` symbols.
    pub fn uniform_noise(inputs: usize, outputs: usize) -> Self {
        let p = Rational::new(BigInt::one(), BigInt::from(outputs));
        Self::new(
            (1..=inputs).map(|i| i.to_string()).collect(),
            (1..=outputs).map(|i| format!("y{i}")).collect(),
            vec![vec![p; outputs]; inputs],
        )
        .expect("uniform noise is a valid channel")
    }

    /// Binary symmetric channel with crossover probability `p`.
    pub fn binary_symmetric(p: Rational) -> Result<Self> {
        let q = Rational::one() - &p;
        Self::new(
            vec!["0".into(), "1".into()],
            vec!["0".into(), "1".into()],
            vec![vec![q.clone(), p.clone()], vec![p, q]],
        )
    }

    /// Channel whose hypergraph has exactly the given hyperedges, each input
    /// spreading uniformly over the hyperedges that contain it.
    pub fn from_hyperedges(inputs: Vec<String>, edges: &[Hyperedge]) -> Result<Self> {
        let n = inputs.len();
        let mut counts = vec![0i64; n];
        for e in edges {
            for &v in &e.vertices {
                counts[v] += 1;
            }
        }
        if let Some(v) = counts.iter().position(|&c| c == 0) {
            return Err(Error::BadRow {
                row: v,
                label: inputs[v].clone(),
                reason: "input lies in no hyperedge".into(),
            });
        }
        let matrix = (0..n)
            .map(|x| {
                edges
                    .iter()
                    .map(|e| {
                        if e.vertices.contains(&x) {
                            Rational::new(BigInt::one(), BigInt::from(counts[x]))
                        } else {
                            Rational::zero()
                        }
                    })
                    .collect()
            })
            .collect();
        Self::new(
            inputs,
            edges.iter().map(|e| e.label.clone()).collect(),
            matrix,
        )
    }

    /// Confusability structure of a cycle `C_n`: input `i` produces outputs
    /// `{i, i+1}` and `{i-1, i}` with probability 1/2 each.
    pub fn cycle(n: usize) -> Self {
        let edges: Vec<Hyperedge> = (0..n)
            .map(|i| Hyperedge {
                label: format!("{}{}", i + 1, (i + 1) % n + 1),
                vertices: vec![i, (i + 1) % n],
            })
            .collect();
        Self::from_hyperedges((1..=n).map(|i| i.to_string()).collect(), &edges)
            .expect("cycle channel is valid")
    }

    pub fn inputs(&self) -> &[String] {
        &self.inputs
    }

    pub fn outputs(&self) -> &[String] {
        &self.outputs
    }

    pub fn matrix(&self) -> &[Vec<Rational>] {
        &self.matrix
    }

    pub fn prob(&self, x: usize, y: usize) -> &Rational {
        &self.matrix[x][y]
    }

    pub fn input_index(&self, label: &str) -> Option<usize> {
        self.inputs.iter().position(|l| l == label)
    }

    pub fn output_index(&self, label: &str) -> Option<usize> {
        self.outputs.iter().position(|l| l == label)
    }

    /// Product channel; labels are `"a⊗b"`, inputs and outputs in row-major order.
    pub fn tensor(&self, other: &Channel) -> Channel {
        let pair = |a: &[String], b: &[String]| -> Vec<String> {
            a.iter()
                .flat_map(|x| b.iter().map(move |y| format!("{x}⊗{y}")))
                .collect()
        };
        let mut matrix = Vec::with_capacity(self.inputs.len() * other.inputs.len());
        for r1 in &self.matrix {
            for r2 in &other.matrix {
                matrix.push(
                    r1.iter()
                        .flat_map(|p| r2.iter().map(move |q| p * q))
                        .collect(),
                );
            }
        }
        Channel {
            inputs: pair(&self.inputs, &other.inputs),
            outputs: pair(&self.outputs, &other.outputs),
            matrix,
        }
    }

    pub fn confusability_graph(&self) -> Graph {
        let mut g = Graph::new(self.inputs.clone());
        let n = self.inputs.len();
        for a in 0..n {
            for b in a + 1..n {
                let shared = (0..self.outputs.len())
                    .any(|y| !self.matrix[a][y].is_zero() && !self.matrix[b][y].is_zero());
                if shared {
                    g.add_edge(a, b);
                }
            }
        }
        g
    }

    /// One hyperedge per output, holding the inputs that can cause it.
    pub fn hypergraph(&self) -> Hypergraph {
        let edges = self
            .outputs
            .iter()
            .enumerate()
            .map(|(y, label)| Hyperedge {
                label: label.clone(),
                vertices: (0..self.inputs.len())
                    .filter(|&x| !self.matrix[x][y].is_zero())
                    .collect(),
            })
            .collect();
        Hypergraph::new(self.inputs.clone(), edges)
    }

    pub fn to_file(&self) -> ChannelFile {
        ChannelFile {
            inputs: self.inputs.clone(),
            outputs: self.outputs.clone(),
            matrix: self
                .matrix
                .iter()
                .map(|r| r.iter().map(format_rational).collect())
                .collect(),
        }
    }

    pub fn from_file(f: ChannelFile) -> Result<Self> {
        let mut matrix = Vec::with_capacity(f.matrix.len());
        for (i, row) in f.matrix.iter().enumerate() {
            let parsed = row
                .iter()
                .map(|s| parse_rational(s))
                .collect::<Result<Vec<_>>>()
                .map_err(|e| Error::BadRow {
                    row: i,
                    label: f.inputs.get(i).cloned().unwrap_or_default(),
                    reason: e.to_string(),
                })?;
            matrix.push(parsed);
        }
        Self::new(f.inputs, f.outputs, matrix)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_file()).expect("channel serializes")
    }
}

/// On-disk channel: `{"inputs": [...], "outputs": [...], "matrix": [["p/q", ...], ...]}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChannelFile {
    pub inputs: Vec<String>,
    pub outputs: Vec<String>,
    pub matrix: Vec<Vec<String>>,
}

pub fn parse_channel(text: &str) -> Result<Channel> {
    let f: ChannelFile = serde_json::from_str(text)?;
    Channel::from_file(f)
}

/// Best `q`-message code under maximum-likelihood decoding with equiprobable
/// messages.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct MinErrorCode {
    /// Input indices, ascending.
    pub code: Vec<usize>,
    pub error: Rational,
}

/// Exhaustive search over `q`-subsets of inputs in lexicographic order with a
/// suffix-maximum bound. Ties go to the lexicographically first code,
/// regardless of how the work is split across threads.
pub fn min_error_code(n: &Channel, q: usize) -> Result<MinErrorCode> {
    let nx = n.inputs.len();
    if q == 0 || q > nx {
        return Err(Error::MessageCount {
            requested: q,
            available: nx,
        });
    }
    // Scale to integers over a common denominator.
    let denom = n
        .matrix
        .iter()
        .flatten()
        .fold(BigInt::one(), |acc, p| acc.lcm(p.denom()));
    let scaled: Vec<Vec<BigInt>> = n
        .matrix
        .iter()
        .map(|r| r.iter().map(|p| p.numer() * (&denom / p.denom())).collect())
        .collect();
    let fits = scaled.iter().flatten().all(|v| {
        v.to_u64()
            .is_some_and(|v| v <= u64::MAX / (n.outputs.len() as u64 + 1))
    });
    let (code, score) = if fits {
        let small: Vec<Vec<u64>> = scaled
            .iter()
            .map(|r| r.iter().map(|v| v.to_u64().expect("checked")).collect())
            .collect();
        let (c, s) = search_codes(&small, q);
        (c, BigInt::from(s))
    } else {
        search_codes(&scaled, q)
    };
    let total = Rational::new(score, denom * BigInt::from(q));
    Ok(MinErrorCode {
        code,
        error: Rational::one() - total,
    })
}

trait Score: Clone + Ord + Zero + Send + Sync + for<'a> std::ops::AddAssign<&'a Self> {}
impl<T> Score for T where T: Clone + Ord + Zero + Send + Sync + for<'a> std::ops::AddAssign<&'a T> {}

fn search_codes<T: Score>(rows: &[Vec<T>], q: usize) -> (Vec<usize>, T) {
    let nx = rows.len();
    let ny = rows[0].len();
    // suffix[i][y] = max over inputs i.. of rows[.][y]
    let mut suffix = vec![vec![T::zero(); ny]; nx + 1];
    for i in (0..nx).rev() {
        for y in 0..ny {
            suffix[i][y] = std::cmp::max(rows[i][y].clone(), suffix[i + 1][y].clone());
        }
    }

    struct Ctx<'a, T> {
        rows: &'a [Vec<T>],
        suffix: &'a [Vec<T>],
        q: usize,
        best: Option<(Vec<usize>, T)>,
    }

    fn rec<T: Score>(ctx: &mut Ctx<'_, T>, code: &mut Vec<usize>, cur: &[T], start: usize) {
        let nx = ctx.rows.len();
        if code.len() == ctx.q {
            let score = sum(cur);
            if ctx.best.as_ref().is_none_or(|(_, b)| score > *b) {
                ctx.best = Some((code.clone(), score));
            }
            return;
        }
        let remaining = ctx.q - code.len();
        for i in start..=nx - remaining {
            if let Some((_, b)) = &ctx.best {
                let mut bound = T::zero();
                for (c, s) in cur.iter().zip(&ctx.suffix[i]) {
                    bound += std::cmp::max(c, s);
                }
                if bound <= *b {
                    return;
                }
            }
            let next: Vec<T> = cur
                .iter()
                .zip(&ctx.rows[i])
                .map(|(c, r)| std::cmp::max(c, r).clone())
                .collect();
            code.push(i);
            rec(ctx, code, &next, i + 1);
            code.pop();
        }
    }

    fn sum<T: Score>(v: &[T]) -> T {
        let mut s = T::zero();
        for x in v {
            s += x;
        }
        s
    }

    let firsts: Vec<usize> = (0..=nx - q).collect();
    let results: Vec<(Vec<usize>, T)> = firsts
        .par_iter()
        .filter_map(|&first| {
            let mut ctx = Ctx {
                rows,
                suffix: &suffix,
                q,
                best: None,
            };
            let mut code = vec![first];
            rec(&mut ctx, &mut code, &rows[first], first + 1);
            ctx.best
        })
        .collect();
    // Results arrive in order of first element, so the first maximum is the
    // lexicographically first optimal code.
    let mut best: Option<(Vec<usize>, T)> = None;
    for r in results {
        if best.as_ref().is_none_or(|(_, b)| r.1 > *b) {
            best = Some(r);
        }
    }
    best.expect("at least one code exists")
}
