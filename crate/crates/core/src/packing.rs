//! Fractional packing over exact rationals and the capacities it determines.
//!
//! The packing LP is
//!
//! ```text
//!   maximise   Σ_x v(x)
//!   subject to Σ_{x∈S} v(x) ≤ 1   for every hyperedge S
//!              0 ≤ v(x) ≤ 1
//! ```
//!
//! solved by a dense-tableau simplex with Bland's rule. The origin is always
//! feasible, so no phase one is needed. The dual (a fractional cover) is read
//! off the final tableau and re-verified before anything is returned.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::channel::Channel;
use crate::error::{Error, Result};
use crate::exact::{floor_ceil, Rational};
use crate::graph::{max_independent_set, maximal_cliques, Graph, Hyperedge, Hypergraph};

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PackingSolution {
    pub alpha_star: Rational,
    /// `v(x)` per vertex.
    pub weights: Vec<Rational>,
    /// Dual weight per hyperedge.
    pub dual_cover: Vec<Rational>,
    /// Dual weight on each `v(x) ≤ 1` row. Zero for every vertex that lies in
    /// some hyperedge; such weight is folded onto a containing hyperedge.
    pub box_dual: Vec<Rational>,
}

impl PackingSolution {
    pub fn dual_objective(&self) -> Rational {
        self.dual_cover.iter().chain(&self.box_dual).sum()
    }

    /// Independent check of primal feasibility, dual feasibility and equal
    /// objectives.
    pub fn verify(&self, h: &Hypergraph) -> Result<()> {
        let n = h.order();
        let fail = |m: String| Err(Error::Certificate(m));
        if self.weights.len() != n
            || self.box_dual.len() != n
            || self.dual_cover.len() != h.edges().len()
        {
            return fail("certificate has the wrong shape".into());
        }
        for (x, w) in self.weights.iter().enumerate() {
            if w.is_negative() || *w > Rational::one() {
                return fail(format!("weight of vertex {x} is {w}"));
            }
        }
        for (e, d) in h.edges().iter().zip(&self.dual_cover) {
            let load: Rational = e.vertices.iter().map(|&x| &self.weights[x]).sum();
            if load > Rational::one() {
                return fail(format!("hyperedge {} carries {load}", e.label));
            }
            if d.is_negative() {
                return fail(format!("negative dual on hyperedge {}", e.label));
            }
        }
        let mut cover = self.box_dual.clone();
        if cover.iter().any(Signed::is_negative) {
            return fail("negative box dual".into());
        }
        for (e, d) in h.edges().iter().zip(&self.dual_cover) {
            for &x in &e.vertices {
                cover[x] += d;
            }
        }
        if let Some(x) = cover.iter().position(|c| *c < Rational::one()) {
            return fail(format!("vertex {x} covered only {}", cover[x]));
        }
        let primal: Rational = self.weights.iter().sum();
        if primal != self.alpha_star {
            return fail(format!(
                "weights sum to {primal}, reported {}",
                self.alpha_star
            ));
        }
        let dual = self.dual_objective();
        if dual != primal {
            return fail(format!("primal {primal} but dual {dual}"));
        }
        Ok(())
    }
}

/// Dense simplex tableau for `max cᵀx, Ax ≤ b, x ≥ 0` with `b ≥ 0`.
struct Tableau {
    rows: Vec<Vec<Rational>>,
    /// Reduced costs `z_j - c_j` followed by the objective value.
    obj: Vec<Rational>,
    basis: Vec<usize>,
    cols: usize,
}

impl Tableau {
    fn new(a: &[Vec<Rational>], b: &[Rational], c: &[Rational]) -> Self {
        let m = a.len();
        let n = c.len();
        let cols = n + m;
        let rows = (0..m)
            .map(|i| {
                let mut r = Vec::with_capacity(cols + 1);
                r.extend(a[i].iter().cloned());
                r.extend((0..m).map(|k| {
                    if k == i {
                        Rational::one()
                    } else {
                        Rational::zero()
                    }
                }));
                r.push(b[i].clone());
                r
            })
            .collect();
        let mut obj: Vec<Rational> = c.iter().map(|v| -v).collect();
        obj.extend(std::iter::repeat_n(Rational::zero(), m + 1));
        Self {
            rows,
            obj,
            basis: (n..n + m).collect(),
            cols,
        }
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let p = self.rows[r][c].clone();
        for v in &mut self.rows[r] {
            *v /= &p;
        }
        let pivot_row = self.rows[r].clone();
        let eliminate = |row: &mut Vec<Rational>| {
            let f = row[c].clone();
            if f.is_zero() {
                return;
            }
            for (v, pv) in row.iter_mut().zip(&pivot_row) {
                if !pv.is_zero() {
                    *v -= &f * pv;
                }
            }
        };
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i != r {
                eliminate(row);
            }
        }
        eliminate(&mut self.obj);
        self.basis[r] = c;
    }

    /// Bland's rule: lowest-index improving column, ratio ties broken by the
    /// lowest-index basic variable. Returns `false` if unbounded.
    fn solve(&mut self) -> bool {
        loop {
            let Some(enter) = (0..self.cols).find(|&j| self.obj[j].is_negative()) else {
                return true;
            };
            let mut leave: Option<(usize, Rational)> = None;
            for (i, row) in self.rows.iter().enumerate() {
                if !row[enter].is_positive() {
                    continue;
                }
                let ratio = &row[self.cols] / &row[enter];
                let better = match &leave {
                    None => true,
                    Some((li, lr)) => {
                        ratio < *lr || (ratio == *lr && self.basis[i] < self.basis[*li])
                    }
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
            match leave {
                Some((r, _)) => self.pivot(r, enter),
                None => return false,
            }
        }
    }

    fn primal(&self, n: usize) -> Vec<Rational> {
        let mut x = vec![Rational::zero(); n];
        for (i, &b) in self.basis.iter().enumerate() {
            if b < n {
                x[b] = self.rows[i][self.cols].clone();
            }
        }
        x
    }

    /// Dual values are the reduced costs of the slack columns.
    fn dual(&self, n: usize) -> Vec<Rational> {
        self.obj[n..self.cols].to_vec()
    }
}

/// Exact fractional packing number `α*(H)` with primal and dual certificates.
pub fn solve_packing(h: &Hypergraph) -> Result<PackingSolution> {
    let n = h.order();
    let m = h.edges().len();
    let mut a = Vec::with_capacity(m + n);
    for e in h.edges() {
        let mut row = vec![Rational::zero(); n];
        for &x in &e.vertices {
            row[x] = Rational::one();
        }
        a.push(row);
    }
    // explicit v(x) ≤ 1 rows
    for x in 0..n {
        let mut row = vec![Rational::zero(); n];
        row[x] = Rational::one();
        a.push(row);
    }
    let b = vec![Rational::one(); m + n];
    let c = vec![Rational::one(); n];
    let mut t = Tableau::new(&a, &b, &c);
    if !t.solve() {
        return Err(Error::Certificate("packing LP reported unbounded".into()));
    }
    let weights = t.primal(n);
    let y = t.dual(n);
    let mut dual_cover = y[..m].to_vec();
    let mut box_dual = y[m..].to_vec();
    for (x, z) in box_dual.iter_mut().enumerate() {
        if z.is_zero() {
            continue;
        }
        if let Some(k) = h.edges().iter().position(|e| e.vertices.contains(&x)) {
            dual_cover[k] += &*z;
            *z = Rational::zero();
        }
    }
    let sol = PackingSolution {
        alpha_star: t.obj[t.cols].clone(),
        weights,
        dual_cover,
        box_dual,
    };
    sol.verify(h)?;
    Ok(sol)
}

/// `C_0F` under the feedback proviso.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum FeedbackCapacity {
    /// The channel has no unassisted zero-error capacity, so `C_0F = 0`.
    Zero,
    /// `C_0F = log` of this value.
    LogOf(Rational),
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct NsCapacityReport {
    pub alpha_star: Rational,
    /// One-shot NS-assisted message count `⌊α*⌋`.
    pub c_ns: BigInt,
    /// `C_NS = log capacity_arg`.
    pub capacity_arg: Rational,
    pub feedback: FeedbackCapacity,
    pub packing: PackingSolution,
}

pub fn ns_capacity(n: &Channel) -> Result<NsCapacityReport> {
    let h = n.hypergraph();
    let packing = solve_packing(&h)?;
    let c0 = max_independent_set(&n.confusability_graph()).size;
    let feedback = if c0 >= 2 {
        FeedbackCapacity::LogOf(packing.alpha_star.clone())
    } else {
        FeedbackCapacity::Zero
    };
    Ok(NsCapacityReport {
        c_ns: floor_ceil(&packing.alpha_star).0,
        capacity_arg: packing.alpha_star.clone(),
        alpha_star: packing.alpha_star.clone(),
        feedback,
        packing,
    })
}

/// Hypergraph whose hyperedges are the maximal cliques of `g`.
pub fn clique_hypergraph(g: &Graph) -> Hypergraph {
    let edges = maximal_cliques(g)
        .into_iter()
        .enumerate()
        .map(|(i, vertices)| Hyperedge {
            label: format!("K{}", i + 1),
            vertices,
        })
        .collect();
    Hypergraph::new(g.labels().to_vec(), edges)
}

/// Smallest `α*` over channel hypergraphs with confusability graph `g`,
/// attained by the maximal-clique hypergraph.
pub fn best_graph_ns_bound(g: &Graph) -> Result<Rational> {
    Ok(solve_packing(&clique_hypergraph(g))?.alpha_star)
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SimCost {
    /// Minimum message count for exact NS-assisted simulation.
    pub k_ns: BigInt,
    /// `Σ_y max_x N(y|x)`; `K_NS = log cost_arg`.
    pub cost_arg: Rational,
}

pub fn sim_cost(n: &Channel) -> SimCost {
    let cost_arg: Rational = (0..n.outputs().len())
        .map(|y| {
            (0..n.inputs().len())
                .map(|x| n.prob(x, y))
                .max()
                .cloned()
                .unwrap_or_else(Rational::zero)
        })
        .sum();
    SimCost {
        k_ns: floor_ceil(&cost_arg).1,
        cost_arg,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{int, rat};

    #[test]
    fn packing_small_cases() {
        let h = Hypergraph::from_sets(4, &[vec![0, 1, 2, 3]]);
        assert_eq!(solve_packing(&h).unwrap().alpha_star, int(1));

        let pairs: Vec<Vec<usize>> = (0..4)
            .flat_map(|a| (a + 1..4).map(move |b| vec![a, b]))
            .collect();
        let s = solve_packing(&Hypergraph::from_sets(4, &pairs)).unwrap();
        assert_eq!(s.alpha_star, int(2));
        assert!(s.weights.iter().all(|w| *w == rat(1, 2)));

        let c5: Vec<Vec<usize>> = (0..5).map(|i| vec![i, (i + 1) % 5]).collect();
        assert_eq!(
            solve_packing(&Hypergraph::from_sets(5, &c5))
                .unwrap()
                .alpha_star,
            rat(5, 2)
        );

        let singles: Vec<Vec<usize>> = (0..6).map(|i| vec![i]).collect();
        let s = solve_packing(&Hypergraph::from_sets(6, &singles)).unwrap();
        assert_eq!(s.alpha_star, int(6));
        assert_eq!(s.dual_cover.iter().sum::<Rational>(), int(6));
    }

    #[test]
    fn uncovered_vertex_is_capped() {
        let h = Hypergraph::from_sets(3, &[vec![0, 1]]);
        let s = solve_packing(&h).unwrap();
        assert_eq!(s.alpha_star, int(2));
        assert_eq!(s.box_dual[2], int(1));
        assert_eq!(s.dual_objective(), int(2));
    }

    #[test]
    fn verify_catches_bad_certificates() {
        let h = Hypergraph::from_sets(2, &[vec![0, 1]]);
        let mut s = solve_packing(&h).unwrap();
        s.dual_cover[0] = rat(1, 2);
        assert!(matches!(s.verify(&h), Err(Error::Certificate(_))));
    }

    #[test]
    fn capacities_of_basic_channels() {
        let r = ns_capacity(&Channel::identity(5)).unwrap();
        assert_eq!(r.c_ns, BigInt::from(5));
        assert_eq!(r.feedback, FeedbackCapacity::LogOf(int(5)));

        let r = ns_capacity(&Channel::cycle(5)).unwrap();
        assert_eq!(r.c_ns, BigInt::from(2));
        assert_eq!(r.capacity_arg, rat(5, 2));

        let r = ns_capacity(&Channel::uniform_noise(3, 2)).unwrap();
        assert_eq!(r.c_ns, BigInt::from(1));
        assert_eq!(r.feedback, FeedbackCapacity::Zero);
    }

    #[test]
    fn graph_bounds() {
        assert_eq!(best_graph_ns_bound(&Graph::complete(4)).unwrap(), int(1));
        assert_eq!(best_graph_ns_bound(&Graph::cycle(5)).unwrap(), rat(5, 2));
        assert_eq!(best_graph_ns_bound(&Graph::unlabeled(3)).unwrap(), int(3));
    }

    #[test]
    fn simulation_costs() {
        let s = sim_cost(&Channel::identity(4));
        assert_eq!((s.k_ns, s.cost_arg), (BigInt::from(4), int(4)));
        let s = sim_cost(&Channel::binary_symmetric(rat(1, 4)).unwrap());
        assert_eq!((s.k_ns, s.cost_arg), (BigInt::from(2), rat(3, 2)));
        let s = sim_cost(&Channel::uniform_noise(5, 7));
        assert_eq!((s.k_ns, s.cost_arg), (BigInt::from(1), int(1)));
    }
}
