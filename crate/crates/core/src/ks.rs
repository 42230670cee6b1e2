//! Kochen-Specker basis sets and the channels built from them.

use serde::{Deserialize, Serialize};

use crate::channel::Channel;
use crate::error::{Error, Result};
use crate::exact::{format_rational, parse_rational, CRational, CVector};
use crate::graph::{Graph, Hyperedge, VertexSet};

/// A family of complete orthogonal bases of `C^d`.
///
/// Rays are addressed by a flat index `m·d + j` (basis `m`, vector `j`), and
/// labeled `"(m,j)"` with both parts counted from 1.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct KsBasisSet {
    dimension: usize,
    bases: Vec<Vec<CVector>>,
}

impl KsBasisSet {
    /// Checks that each basis has `dimension` nonzero, pairwise orthogonal
    /// vectors of the right length.
    pub fn new(dimension: usize, bases: Vec<Vec<CVector>>) -> Result<Self> {
        if dimension == 0 {
            return Err(Error::BadBasisSet("dimension must be at least 1".into()));
        }
        if bases.is_empty() {
            return Err(Error::BadBasisSet("no bases".into()));
        }
        for (m, basis) in bases.iter().enumerate() {
            if basis.len() != dimension {
                return Err(Error::BadBasisSet(format!(
                    "basis {} has {} vectors, expected {dimension}",
                    m + 1,
                    basis.len()
                )));
            }
            for (j, v) in basis.iter().enumerate() {
                if v.dim() != dimension {
                    return Err(Error::BadBasisSet(format!(
                        "vector ({},{}) has length {}",
                        m + 1,
                        j + 1,
                        v.dim()
                    )));
                }
                if v.is_zero() {
                    return Err(Error::BadBasisSet(format!(
                        "vector ({},{}) is zero",
                        m + 1,
                        j + 1
                    )));
                }
            }
            for j in 0..dimension {
                for k in j + 1..dimension {
                    if !basis[j].is_orthogonal(&basis[k])? {
                        return Err(Error::BadBasisSet(format!(
                            "vectors ({m1},{j1}) and ({m1},{k1}) are not orthogonal",
                            m1 = m + 1,
                            j1 = j + 1,
                            k1 = k + 1
                        )));
                    }
                }
            }
        }
        Ok(Self { dimension, bases })
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn num_bases(&self) -> usize {
        self.bases.len()
    }

    pub fn bases(&self) -> &[Vec<CVector>] {
        &self.bases
    }

    pub fn ray(&self, index: usize) -> &CVector {
        &self.bases[index / self.dimension][index % self.dimension]
    }

    pub fn num_rays(&self) -> usize {
        self.bases.len() * self.dimension
    }

    pub fn ray_label(&self, index: usize) -> String {
        format!(
            "({},{})",
            index / self.dimension + 1,
            index % self.dimension + 1
        )
    }

    /// True when no two vectors of the whole family span the same ray.
    pub fn has_distinct_rays(&self) -> bool {
        let n = self.num_rays();
        (0..n).all(|a| {
            (a + 1..n).all(|b| !self.ray(a).is_parallel(self.ray(b)).expect("equal lengths"))
        })
    }

    /// Edge iff the two rays are exactly orthogonal.
    pub fn orthogonality_graph(&self) -> Graph {
        let n = self.num_rays();
        let mut g = Graph::new((0..n).map(|i| self.ray_label(i)).collect());
        for a in 0..n {
            for b in a + 1..n {
                if self
                    .ray(a)
                    .is_orthogonal(self.ray(b))
                    .expect("equal lengths")
                {
                    g.add_edge(a, b);
                }
            }
        }
        g
    }

    pub fn to_file(&self) -> KsFile {
        KsFile {
            dimension: self.dimension,
            bases: self
                .bases
                .iter()
                .map(|b| {
                    b.iter()
                        .map(|v| v.entries().iter().map(crational_to_pair).collect())
                        .collect()
                })
                .collect(),
        }
    }

    pub fn from_file(f: KsFile) -> Result<Self> {
        let bases = f
            .bases
            .iter()
            .map(|b| {
                b.iter()
                    .map(|v| {
                        let entries = v
                            .iter()
                            .map(crational_from_pair)
                            .collect::<Result<Vec<_>>>()?;
                        CVector::new(entries)
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(f.dimension, bases)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_file()).expect("basis set serializes")
    }
}

pub fn crational_to_pair(c: &CRational) -> [String; 2] {
    [format_rational(&c.re), format_rational(&c.im)]
}

pub fn crational_from_pair(p: &[String; 2]) -> Result<CRational> {
    Ok(CRational::new(
        parse_rational(&p[0])?,
        parse_rational(&p[1])?,
    ))
}

/// On-disk basis set: `{"dimension": d, "bases": [[[["re","im"], ...], ...], ...]}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KsFile {
    pub dimension: usize,
    pub bases: Vec<Vec<Vec<[String; 2]>>>,
}

pub fn parse_ks(text: &str) -> Result<KsBasisSet> {
    KsBasisSet::from_file(serde_json::from_str(text)?)
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TransversalReport {
    pub exists: bool,
    /// One vector index `j` per basis, pairwise non-orthogonal.
    pub witness: Option<Vec<usize>>,
    /// Partial selections visited.
    pub nodes: u64,
}

/// Searches for one vector per basis with no orthogonal pair among the
/// chosen ones. The set is a KS basis set iff none exists.
pub fn ks_verify(z: &KsBasisSet) -> TransversalReport {
    let g = z.orthogonality_graph();
    let d = z.dimension();
    let q = z.num_bases();
    let mut chosen: Vec<usize> = Vec::with_capacity(q);
    let mut nodes = 0u64;

    fn rec(g: &Graph, d: usize, q: usize, chosen: &mut Vec<usize>, nodes: &mut u64) -> bool {
        *nodes += 1;
        let m = chosen.len();
        if m == q {
            return true;
        }
        for j in 0..d {
            let r = m * d + j;
            if chosen.iter().any(|&c| c == r || g.adjacent(c, r)) {
                continue;
            }
            chosen.push(r);
            if rec(g, d, q, chosen, nodes) {
                return true;
            }
            chosen.pop();
        }
        false
    }

    let found = rec(&g, d, q, &mut chosen, &mut nodes);
    TransversalReport {
        exists: found,
        witness: found.then(|| chosen.iter().map(|r| r % d).collect()),
        nodes,
    }
}

/// Channel with one input per ray and one output per unordered orthogonal
/// pair; each input is uniform over the pairs that contain it.
pub fn build_ks_channel(z: &KsBasisSet) -> Result<Channel> {
    let g = z.orthogonality_graph();
    if let Some(v) = (0..g.order()).find(|&v| g.degree(v) == 0) {
        return Err(Error::BadBasisSet(format!(
            "ray {} is orthogonal to no other ray",
            z.ray_label(v)
        )));
    }
    let edges: Vec<Hyperedge> = g
        .edges()
        .into_iter()
        .map(|(a, b)| Hyperedge {
            label: format!("{}|{}", z.ray_label(a), z.ray_label(b)),
            vertices: vec![a, b],
        })
        .collect();
    Channel::from_hyperedges(g.labels().to_vec(), &edges)
}

/// Decomposes the edges of `g` into edge-disjoint cliques ("loops") so that
/// every vertex lies in exactly `per_vertex` of them. Loops are tried largest
/// first; the first decomposition found in canonical order is returned.
pub fn loop_decomposition(g: &Graph, per_vertex: usize) -> Option<Vec<Vec<usize>>> {
    let n = g.order();
    let mut uncovered: Vec<VertexSet> = (0..n).map(|v| g.neighbors(v).clone()).collect();
    let mut count = vec![0usize; n];
    let mut loops = Vec::new();

    // Cliques containing edge (a,b) whose edges are all uncovered.
    fn candidates(uncovered: &[VertexSet], a: usize, b: usize) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        fn grow(
            uncovered: &[VertexSet],
            cur: &mut Vec<usize>,
            pool: VertexSet,
            out: &mut Vec<Vec<usize>>,
        ) {
            out.push(cur.clone());
            for w in pool.iter().collect::<Vec<_>>() {
                let mut next = pool.and(&uncovered[w]);
                for u in 0..=w {
                    next.remove(u);
                }
                cur.push(w);
                grow(uncovered, cur, next, out);
                cur.pop();
            }
        }
        let pool = uncovered[a].and(&uncovered[b]);
        grow(uncovered, &mut vec![a, b], pool, &mut out);
        out.sort_by(|x, y| y.len().cmp(&x.len()).then_with(|| x.cmp(y)));
        out
    }

    fn rec(
        uncovered: &mut Vec<VertexSet>,
        count: &mut Vec<usize>,
        loops: &mut Vec<Vec<usize>>,
        per_vertex: usize,
    ) -> bool {
        let n = uncovered.len();
        // feasibility: a vertex at its loop budget must already be fully covered
        if (0..n).any(|v| count[v] >= per_vertex && !uncovered[v].is_empty()) {
            return false;
        }
        let Some(a) = (0..n).find(|&v| !uncovered[v].is_empty()) else {
            return count.iter().all(|&c| c == per_vertex);
        };
        let b = uncovered[a].first().expect("nonempty");
        for clique in candidates(uncovered, a, b) {
            if clique.iter().any(|&v| count[v] >= per_vertex) {
                continue;
            }
            for (i, &x) in clique.iter().enumerate() {
                count[x] += 1;
                for &y in &clique[i + 1..] {
                    uncovered[x].remove(y);
                    uncovered[y].remove(x);
                }
            }
            let mut sorted = clique.clone();
            sorted.sort_unstable();
            loops.push(sorted);
            if rec(uncovered, count, loops, per_vertex) {
                return true;
            }
            loops.pop();
            for (i, &x) in clique.iter().enumerate() {
                count[x] -= 1;
                for &y in &clique[i + 1..] {
                    uncovered[x].insert(y);
                    uncovered[y].insert(x);
                }
            }
        }
        false
    }

    if rec(&mut uncovered, &mut count, &mut loops, per_vertex) {
        loops.sort();
        Some(loops)
    } else {
        None
    }
}

/// The loop-based channel variant: one output per loop, each input uniform
/// over the `per_vertex` loops containing it. `None` if the orthogonality
/// graph admits no such decomposition.
pub fn build_loop_channel(z: &KsBasisSet, per_vertex: usize) -> Option<Channel> {
    let g = z.orthogonality_graph();
    let loops = loop_decomposition(&g, per_vertex)?;
    let edges: Vec<Hyperedge> = loops
        .into_iter()
        .enumerate()
        .map(|(i, vertices)| Hyperedge {
            label: format!("L{}", i + 1),
            vertices,
        })
        .collect();
    Some(Channel::from_hyperedges(g.labels().to_vec(), &edges).expect("every ray lies in a loop"))
}

/// The 24 Peres rays of `C^4`, in lexicographic order: the 4 axis rays, the
/// 12 rays of type (1,±1,0,0) and the 8 of type (1,±1,±1,±1).
pub fn peres_rays() -> Vec<[i64; 4]> {
    let mut rays = Vec::with_capacity(24);
    for i in 0..4 {
        let mut v = [0; 4];
        v[i] = 1;
        rays.push(v);
    }
    for i in 0..4 {
        for j in i + 1..4 {
            for s in [1, -1] {
                let mut v = [0; 4];
                v[i] = 1;
                v[j] = s;
                rays.push(v);
            }
        }
    }
    for s1 in [1, -1] {
        for s2 in [1, -1] {
            for s3 in [1, -1] {
                rays.push([1, s1, s2, s3]);
            }
        }
    }
    rays.sort();
    rays
}

/// Partitions integer rays into disjoint orthogonal bases of size `d` and
/// returns the first partition (in canonical order) with no transversal.
pub fn ks_partition(rays: &[Vec<i64>], d: usize) -> Result<KsBasisSet> {
    let n = rays.len();
    if !n.is_multiple_of(d) {
        return Err(Error::BadBasisSet(format!(
            "{n} rays cannot be split into bases of {d}"
        )));
    }
    let vecs: Vec<CVector> = rays.iter().map(|r| CVector::from_ints(r)).collect();
    let mut used = vec![false; n];
    let mut bases: Vec<Vec<usize>> = Vec::new();

    fn rec(
        vecs: &[CVector],
        d: usize,
        used: &mut Vec<bool>,
        bases: &mut Vec<Vec<usize>>,
    ) -> Option<KsBasisSet> {
        let Some(first) = used.iter().position(|u| !u) else {
            let z = KsBasisSet::new(
                d,
                bases
                    .iter()
                    .map(|b| b.iter().map(|&i| vecs[i].clone()).collect())
                    .collect(),
            )
            .expect("bases are orthogonal by construction");
            return (!ks_verify(&z).exists).then_some(z);
        };
        // extend {first} to an orthogonal d-set of unused rays, indices ascending
        fn extend(
            vecs: &[CVector],
            d: usize,
            used: &mut Vec<bool>,
            bases: &mut Vec<Vec<usize>>,
            cur: &mut Vec<usize>,
        ) -> Option<KsBasisSet> {
            if cur.len() == d {
                for &i in cur.iter() {
                    used[i] = true;
                }
                bases.push(cur.clone());
                let r = rec(vecs, d, used, bases);
                bases.pop();
                for &i in cur.iter() {
                    used[i] = false;
                }
                return r;
            }
            let start = cur.last().map_or(0, |&l| l + 1);
            for i in start..vecs.len() {
                if used[i]
                    || !cur
                        .iter()
                        .all(|&c| vecs[c].is_orthogonal(&vecs[i]).expect("same dim"))
                {
                    continue;
                }
                cur.push(i);
                if let Some(z) = extend(vecs, d, used, bases, cur) {
                    return Some(z);
                }
                cur.pop();
            }
            None
        }
        extend(vecs, d, used, bases, &mut vec![first])
    }

    rec(&vecs, d, &mut used, &mut bases).ok_or(Error::NoKsPartition)
}

/// Six disjoint bases partitioning the Peres rays, forming a KS basis set.
pub fn peres_basis_set() -> Result<KsBasisSet> {
    let rays: Vec<Vec<i64>> = peres_rays().iter().map(|r| r.to_vec()).collect();
    ks_partition(&rays, 4)
}

/// The two-basis set `{e0, e1}, {e0+e1, e0-e1}` of `C^2`.
pub fn two_bases_c2() -> KsBasisSet {
    KsBasisSet::new(
        2,
        vec![
            vec![CVector::from_ints(&[1, 0]), CVector::from_ints(&[0, 1])],
            vec![CVector::from_ints(&[1, 1]), CVector::from_ints(&[1, -1])],
        ],
    )
    .expect("valid")
}

/// The standard basis of `C^d` as a one-basis family.
pub fn standard_basis(d: usize) -> KsBasisSet {
    let basis = (0..d)
        .map(|i| {
            let mut e = vec![0; d];
            e[i] = 1;
            CVector::from_ints(&e)
        })
        .collect();
    KsBasisSet::new(d, vec![basis]).expect("valid")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::Rational;
    use crate::graph::max_independent_set;
    use num_traits::{One, Zero};

    #[test]
    fn validation() {
        let not_orth = vec![vec![
            CVector::from_ints(&[1, 0]),
            CVector::from_ints(&[1, 1]),
        ]];
        assert!(KsBasisSet::new(2, not_orth).is_err());
        let zero = vec![vec![
            CVector::from_ints(&[0, 0]),
            CVector::from_ints(&[0, 1]),
        ]];
        assert!(KsBasisSet::new(2, zero).is_err());
        let short = vec![vec![CVector::from_ints(&[1, 0])]];
        assert!(KsBasisSet::new(2, short).is_err());
        let ragged = vec![vec![
            CVector::from_ints(&[1, 0, 0]),
            CVector::from_ints(&[0, 1]),
        ]];
        assert!(KsBasisSet::new(2, ragged).is_err());
    }

    #[test]
    fn transversals_of_small_sets() {
        let r = ks_verify(&standard_basis(2));
        assert!(r.exists);
        assert_eq!(r.witness, Some(vec![0]));

        let b = standard_basis(3).bases()[0].clone();
        let twice = KsBasisSet::new(3, vec![b.clone(), b]).unwrap();
        assert!(!twice.has_distinct_rays());
        let r = ks_verify(&twice);
        assert!(r.exists);
        assert_eq!(r.witness, Some(vec![0, 0]));

        assert!(ks_verify(&two_bases_c2()).exists);
    }

    #[test]
    fn peres_set_shape() {
        let z = peres_basis_set().unwrap();
        assert_eq!((z.dimension(), z.num_bases(), z.num_rays()), (4, 6, 24));
        assert!(z.has_distinct_rays());
        let r = ks_verify(&z);
        assert!(!r.exists);
        assert!(r.nodes <= 1 + 4 + 16 + 64 + 256 + 1024 + 4096);
        let g = z.orthogonality_graph();
        assert!((0..24).all(|v| g.degree(v) == 9));
        assert_eq!(max_independent_set(&g).size, 5);
        // the first basis in canonical order is the axis basis
        assert_eq!(z.bases()[0][0], CVector::from_ints(&[0, 0, 0, 1]));
    }

    #[test]
    fn ks_channels() {
        let c = build_ks_channel(&two_bases_c2()).unwrap();
        assert_eq!((c.inputs().len(), c.outputs().len()), (4, 2));
        let g = c.confusability_graph();
        assert_eq!(g.edges(), vec![(0, 1), (2, 3)]);
        assert_eq!(max_independent_set(&g).size, 2);

        let c = build_ks_channel(&standard_basis(3)).unwrap();
        assert_eq!((c.inputs().len(), c.outputs().len()), (3, 3));
        assert!(crate::graph::is_complete(&c.confusability_graph()));

        assert!(build_ks_channel(&standard_basis(1)).is_err());
    }

    #[test]
    fn ks_channel_confusability_is_orthogonality() {
        let z = peres_basis_set().unwrap();
        let c = build_ks_channel(&z).unwrap();
        let g = c.confusability_graph();
        for a in 0..24 {
            for b in 0..24 {
                if a != b {
                    assert_eq!(
                        g.adjacent(a, b),
                        z.ray(a).inner(z.ray(b)).unwrap().is_zero()
                    );
                }
            }
            assert_eq!(c.matrix()[a].iter().sum::<Rational>(), Rational::one());
        }
        assert_eq!(c.outputs().len(), 108);
    }

    #[test]
    fn peres_loop_decomposition() {
        let z = peres_basis_set().unwrap();
        let c = build_loop_channel(&z, 3).expect("Peres rays admit a degree-3 loop decomposition");
        assert_eq!(c.outputs().len(), 18);
        let third = crate::exact::rat(1, 3);
        for row in c.matrix() {
            assert_eq!(row.iter().filter(|p| **p == third).count(), 3);
            assert_eq!(row.iter().filter(|p| !p.is_zero()).count(), 3);
        }
        assert_eq!(c.confusability_graph(), z.orthogonality_graph());
    }

    #[test]
    fn file_round_trip() {
        let z = peres_basis_set().unwrap();
        assert_eq!(parse_ks(&z.to_json()).unwrap(), z);
        let bad = r#"{"dimension":2,"bases":[[[["1","0"],["0","0"]],[["1","0"],["1","0"]]]]}"#;
        assert!(parse_ks(bad).is_err());
    }
}
