//! Entanglement-assisted zero-error coding: certificates of the form
//! `{β^(m)_x}, ρ_B` and a seeded simulation of the KS protocol.
//!
//! A certificate with `q` messages is valid for a channel when every
//! operator is positive semidefinite, `Σ_x β^(m)_x = ρ_B` for every message,
//! `ρ_B` is a density matrix, and `tr β^(m)_x β^(m')_x' = 0` whenever
//! `m ≠ m'` and `x, x'` are confusable (an input is confusable with itself).

use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint, RandBigInt};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::channel::Channel;
use crate::error::{Error, Result};
use crate::exact::{outer_project, trace_product, CRational, HermitianMatrix, Rational};
use crate::ks::{crational_from_pair, crational_to_pair, KsBasisSet};

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SeCertificate {
    pub q: usize,
    pub dim: usize,
    pub rho_b: HermitianMatrix,
    /// `(message, input index) → β`; absent entries are zero.
    pub beta: BTreeMap<(usize, usize), HermitianMatrix>,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Verdict {
    Accept,
    Reject(String),
}

impl Verdict {
    pub fn is_accept(&self) -> bool {
        matches!(self, Verdict::Accept)
    }
}

impl SeCertificate {
    pub fn beta(&self, m: usize, x: usize) -> Option<&HermitianMatrix> {
        self.beta.get(&(m, x))
    }

    /// The same certificate without message `m`; later messages shift down.
    pub fn drop_message(&self, m: usize) -> SeCertificate {
        let beta = self
            .beta
            .iter()
            .filter(|((k, _), _)| *k != m)
            .map(|(&(k, x), b)| ((if k > m { k - 1 } else { k }, x), b.clone()))
            .collect();
        SeCertificate {
            q: self.q - 1,
            dim: self.dim,
            rho_b: self.rho_b.clone(),
            beta,
        }
    }

    pub fn to_file(&self, n: &Channel) -> CertificateFile {
        CertificateFile {
            q: self.q,
            dim: self.dim,
            rho_b: matrix_to_file(&self.rho_b),
            beta: self
                .beta
                .iter()
                .map(|(&(m, x), b)| BetaEntry {
                    message: m + 1,
                    input: n.inputs()[x].clone(),
                    matrix: matrix_to_file(b),
                })
                .collect(),
        }
    }

    /// Input labels are resolved against `n`.
    pub fn from_file(f: &CertificateFile, n: &Channel) -> Result<Self> {
        let rho_b = matrix_from_file(&f.rho_b)?;
        let mut beta = BTreeMap::new();
        for e in &f.beta {
            if e.message == 0 || e.message > f.q {
                return Err(Error::Format(format!(
                    "message {} outside 1..={}",
                    e.message, f.q
                )));
            }
            let x = n
                .input_index(&e.input)
                .ok_or_else(|| Error::Format(format!("unknown input {:?}", e.input)))?;
            let b = matrix_from_file(&e.matrix)?;
            if beta.insert((e.message - 1, x), b).is_some() {
                return Err(Error::Format(format!(
                    "duplicate entry for message {} input {:?}",
                    e.message, e.input
                )));
            }
        }
        Ok(Self {
            q: f.q,
            dim: f.dim,
            rho_b,
            beta,
        })
    }
}

/// Dense complex-rational matrix as rows of `["re","im"]` pairs.
pub type MatrixFile = Vec<Vec<[String; 2]>>;

pub fn matrix_to_file(m: &HermitianMatrix) -> MatrixFile {
    m.rows()
        .iter()
        .map(|r| r.iter().map(crational_to_pair).collect())
        .collect()
}

pub fn matrix_from_file(f: &MatrixFile) -> Result<HermitianMatrix> {
    let rows = f
        .iter()
        .map(|r| {
            r.iter()
                .map(crational_from_pair)
                .collect::<Result<Vec<CRational>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    HermitianMatrix::from_rows(rows)
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BetaEntry {
    /// 1-based message index.
    pub message: usize,
    pub input: String,
    pub matrix: MatrixFile,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CertificateFile {
    pub q: usize,
    pub dim: usize,
    #[serde(rename = "rho_B")]
    pub rho_b: MatrixFile,
    pub beta: Vec<BetaEntry>,
}

/// Decides whether `cert` witnesses `c_SE(n) ≥ cert.q`.
pub fn check_certificate(n: &Channel, cert: &SeCertificate) -> Verdict {
    let reject = |s: String| Verdict::Reject(s);
    let nx = n.inputs().len();
    if cert.q == 0 {
        return reject("certificate has no messages".into());
    }
    if cert.rho_b.dim() != cert.dim {
        return reject(format!(
            "rho_B has dimension {}, expected {}",
            cert.rho_b.dim(),
            cert.dim
        ));
    }
    for (&(m, x), b) in &cert.beta {
        if m >= cert.q || x >= nx {
            return reject(format!("entry (message {}, input {x}) out of range", m + 1));
        }
        if b.dim() != cert.dim {
            return reject(format!(
                "beta(message {}, input {}) has dimension {}, expected {}",
                m + 1,
                n.inputs()[x],
                b.dim(),
                cert.dim
            ));
        }
    }
    if !cert.rho_b.trace().is_one() {
        return reject(format!("rho_B has trace {}", cert.rho_b.trace()));
    }
    if !cert.rho_b.is_psd() {
        return reject("rho_B is not positive semidefinite".into());
    }
    for (&(m, x), b) in &cert.beta {
        if !b.is_psd() {
            return reject(format!(
                "beta(message {}, input {}) is not positive semidefinite",
                m + 1,
                n.inputs()[x]
            ));
        }
    }
    for m in 0..cert.q {
        let mut sum = HermitianMatrix::zero(cert.dim);
        for x in 0..nx {
            if let Some(b) = cert.beta(m, x) {
                sum = sum.add(b).expect("dimensions checked");
            }
        }
        if sum != cert.rho_b {
            return reject(format!(
                "operators of message {} do not sum to rho_B",
                m + 1
            ));
        }
    }
    let g = n.confusability_graph();
    for m in 0..cert.q {
        for m2 in m + 1..cert.q {
            for x in 0..nx {
                let Some(b1) = cert.beta(m, x) else { continue };
                for x2 in (0..nx).filter(|&x2| x2 == x || g.adjacent(x, x2)) {
                    let Some(b2) = cert.beta(m2, x2) else {
                        continue;
                    };
                    let t = trace_product(b1, b2).expect("dimensions checked");
                    if !t.is_zero() {
                        return reject(format!(
                            "tr beta({},{}) beta({},{}) = {t}, not 0",
                            m + 1,
                            n.inputs()[x],
                            m2 + 1,
                            n.inputs()[x2]
                        ));
                    }
                }
            }
        }
    }
    Verdict::Accept
}

/// Certificate from a maximally entangled state of rank `d`:
/// `ρ_B = I/d` and `β^(m)_(m,j) = (1/d)·|conj ψ_mj⟩⟨conj ψ_mj|` (normalized).
///
/// Input indices follow [`crate::ks::build_ks_channel`]: `(m,j) ↦ m·d + j`.
pub fn build_ks_certificate(z: &KsBasisSet) -> SeCertificate {
    let d = z.dimension();
    let inv_d = Rational::new(BigInt::one(), BigInt::from(d));
    let mut beta = BTreeMap::new();
    for m in 0..z.num_bases() {
        for j in 0..d {
            let p = outer_project(&z.bases()[m][j]).expect("basis vectors are nonzero");
            beta.insert((m, m * d + j), p.scale(&inv_d));
        }
    }
    SeCertificate {
        q: z.num_bases(),
        dim: d,
        rho_b: HermitianMatrix::identity(d).scale(&inv_d),
        beta,
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ProtocolStats {
    pub trials: u64,
    pub decode_errors: u64,
    pub seed: u64,
    /// How often each message was sent.
    pub per_message: Vec<u64>,
}

const CHUNK: u64 = 4096;

enum RowSampler {
    Small {
        total: u64,
        cumulative: Vec<u64>,
    },
    Big {
        total: BigUint,
        cumulative: Vec<BigUint>,
    },
}

impl RowSampler {
    fn new(row: &[Rational]) -> Self {
        let denom = row.iter().fold(BigInt::one(), |acc, p| acc.lcm(p.denom()));
        let mut acc = BigInt::zero();
        let cumulative: Vec<BigInt> = row
            .iter()
            .map(|p| {
                acc += p.numer() * (&denom / p.denom());
                acc.clone()
            })
            .collect();
        match denom.to_u64() {
            Some(total) => RowSampler::Small {
                total,
                cumulative: cumulative
                    .iter()
                    .map(|c| c.to_u64().expect("≤ total"))
                    .collect(),
            },
            None => RowSampler::Big {
                total: denom.to_biguint().expect("positive"),
                cumulative: cumulative
                    .iter()
                    .map(|c| c.to_biguint().expect("nonneg"))
                    .collect(),
            },
        }
    }

    fn sample<R: Rng>(&self, rng: &mut R) -> usize {
        match self {
            RowSampler::Small { total, cumulative } => {
                let u = rng.gen_range(0..*total);
                cumulative.partition_point(|&c| c <= u)
            }
            RowSampler::Big { total, cumulative } => {
                let u = rng.gen_biguint_below(total);
                cumulative.partition_point(|c| *c <= u)
            }
        }
    }
}

/// Runs the KS protocol `trials` times. Alice draws a message `m` and a
/// measurement outcome `j` uniformly, feeds `(m,j)` to `n`; Bob measures the
/// residual rays `conj ψ_x'` of the inputs compatible with the output and
/// decodes the basis of the unique surviving ray.
///
/// Results depend only on `(seed, trials)`; trials are split into fixed
/// chunks, each with its own ChaCha stream.
pub fn simulate_protocol(
    z: &KsBasisSet,
    n: &Channel,
    seed: u64,
    trials: u64,
) -> Result<ProtocolStats> {
    let d = z.dimension();
    let q = z.num_bases();
    let nx = z.num_rays();
    if n.inputs().len() != nx {
        return Err(Error::ProtocolMismatch(format!(
            "channel has {} inputs, basis set has {nx} rays",
            n.inputs().len()
        )));
    }
    let ny = n.outputs().len();
    let residual: Vec<_> = (0..nx).map(|x| z.ray(x).conj()).collect();

    // decode[x][y] for reachable (x, y): the input Bob identifies
    let mut decode = vec![vec![usize::MAX; ny]; nx];
    for y in 0..ny {
        let edge: Vec<usize> = (0..nx).filter(|&x| !n.prob(x, y).is_zero()).collect();
        for &x in &edge {
            let survivors: Vec<usize> = edge
                .iter()
                .copied()
                .filter(|&c| !residual[c].inner(&residual[x]).expect("same dim").is_zero())
                .collect();
            if survivors.len() > 1 {
                return Err(Error::AmbiguousDecode {
                    output: n.outputs()[y].clone(),
                    first: n.inputs()[survivors[0]].clone(),
                    second: n.inputs()[survivors[1]].clone(),
                });
            }
            decode[x][y] = survivors[0];
        }
    }
    let samplers: Vec<RowSampler> = n.matrix().iter().map(|r| RowSampler::new(r)).collect();

    let chunks = trials.div_ceil(CHUNK);
    let (errors, per_message) = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(c);
            let count = CHUNK.min(trials - c * CHUNK);
            let mut errors = 0u64;
            let mut per = vec![0u64; q];
            for _ in 0..count {
                let m = rng.gen_range(0..q);
                let j = rng.gen_range(0..d);
                let x = m * d + j;
                let y = samplers[x].sample(&mut rng);
                per[m] += 1;
                if decode[x][y] / d != m {
                    errors += 1;
                }
            }
            (errors, per)
        })
        .reduce(
            || (0, vec![0; q]),
            |(e1, p1), (e2, p2)| (e1 + e2, p1.iter().zip(&p2).map(|(a, b)| a + b).collect()),
        );
    Ok(ProtocolStats {
        trials,
        decode_errors: errors,
        seed,
        per_message,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{int, rat, CVector};
    use crate::ks::{build_ks_channel, peres_basis_set, standard_basis, two_bases_c2};

    fn one_by_one(v: i64) -> HermitianMatrix {
        HermitianMatrix::from_rows(vec![vec![CRational::from_int(v)]]).unwrap()
    }

    #[test]
    fn identity_channel_certificate() {
        let n = Channel::identity(3);
        let beta = (0..3).map(|m| ((m, m), one_by_one(1))).collect();
        let cert = SeCertificate {
            q: 3,
            dim: 1,
            rho_b: one_by_one(1),
            beta,
        };
        assert_eq!(check_certificate(&n, &cert), Verdict::Accept);
    }

    #[test]
    fn complete_graph_rejects() {
        let n = Channel::uniform_noise(2, 2);
        let beta = (0..2).map(|m| ((m, m), one_by_one(1))).collect();
        let cert = SeCertificate {
            q: 2,
            dim: 1,
            rho_b: one_by_one(1),
            beta,
        };
        assert!(!check_certificate(&n, &cert).is_accept());
    }

    #[test]
    fn structural_rejections() {
        let n = Channel::identity(2);
        let ok = SeCertificate {
            q: 2,
            dim: 1,
            rho_b: one_by_one(1),
            beta: [((0, 0), one_by_one(1)), ((1, 1), one_by_one(1))].into(),
        };
        assert!(check_certificate(&n, &ok).is_accept());

        let mut bad = ok.clone();
        bad.rho_b = one_by_one(2);
        assert!(!check_certificate(&n, &bad).is_accept());

        let mut bad = ok.clone();
        bad.beta.insert((0, 1), HermitianMatrix::identity(2));
        assert!(
            matches!(check_certificate(&n, &bad), Verdict::Reject(r) if r.contains("dimension"))
        );

        let mut bad = ok.clone();
        bad.beta.insert((0, 0), one_by_one(2));
        bad.beta.insert((0, 1), one_by_one(-1));
        assert!(
            matches!(check_certificate(&n, &bad), Verdict::Reject(r) if r.contains("semidefinite"))
        );

        let mut bad = ok;
        bad.beta.remove(&(1, 1));
        assert!(matches!(check_certificate(&n, &bad), Verdict::Reject(r) if r.contains("sum")));
    }

    #[test]
    fn ks_certificates() {
        for z in [
            two_bases_c2(),
            standard_basis(3),
            peres_basis_set().unwrap(),
        ] {
            let n = build_ks_channel(&z).unwrap();
            let cert = build_ks_certificate(&z);
            assert_eq!(cert.q, z.num_bases());
            assert_eq!(cert.rho_b.trace(), int(1));
            assert_eq!(check_certificate(&n, &cert), Verdict::Accept);
        }
    }

    #[test]
    fn dropping_messages_keeps_acceptance() {
        let z = peres_basis_set().unwrap();
        let n = build_ks_channel(&z).unwrap();
        let mut cert = build_ks_certificate(&z);
        while cert.q > 1 {
            cert = cert.drop_message(cert.q / 2);
            assert!(check_certificate(&n, &cert).is_accept());
        }
    }

    #[test]
    fn complex_rays_certify() {
        // C^2 bases {e0, e1} and {(1, i), (1, -i)}
        let i = CRational::i();
        let z = KsBasisSet::new(
            2,
            vec![
                vec![CVector::from_ints(&[1, 0]), CVector::from_ints(&[0, 1])],
                vec![
                    CVector::new(vec![CRational::one(), i.clone()]).unwrap(),
                    CVector::new(vec![CRational::one(), -i]).unwrap(),
                ],
            ],
        )
        .unwrap();
        let n = build_ks_channel(&z).unwrap();
        assert!(check_certificate(&n, &build_ks_certificate(&z)).is_accept());
        let s = simulate_protocol(&z, &n, 7, 500).unwrap();
        assert_eq!(s.decode_errors, 0);
    }

    #[test]
    fn certificate_file_round_trip() {
        let z = two_bases_c2();
        let n = build_ks_channel(&z).unwrap();
        let cert = build_ks_certificate(&z);
        let f = cert.to_file(&n);
        let json = serde_json::to_string(&f).unwrap();
        assert!(json.contains("\"rho_B\""));
        let back: CertificateFile = serde_json::from_str(&json).unwrap();
        assert_eq!(SeCertificate::from_file(&back, &n).unwrap(), cert);
        assert_eq!(cert.beta(0, 0).unwrap().get(0, 0).re, rat(1, 2));
    }

    #[test]
    fn protocol_runs_are_deterministic() {
        let z = two_bases_c2();
        let n = build_ks_channel(&z).unwrap();
        let a = simulate_protocol(&z, &n, 42, 1000).unwrap();
        let b = simulate_protocol(&z, &n, 42, 1000).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.decode_errors, 0);
        assert_eq!(a.per_message.iter().sum::<u64>(), 1000);
        let c = simulate_protocol(&z, &n, 43, 1000).unwrap();
        assert_ne!(a.per_message, c.per_message);
    }

    #[test]
    fn mismatched_channels_are_caught() {
        let z = two_bases_c2();
        let err = simulate_protocol(&z, &Channel::uniform_noise(4, 1), 1, 10).unwrap_err();
        assert!(matches!(err, Error::AmbiguousDecode { .. }));
        let err = simulate_protocol(&z, &Channel::identity(3), 1, 10).unwrap_err();
        assert!(matches!(err, Error::ProtocolMismatch(_)));
    }
}
