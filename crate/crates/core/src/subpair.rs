//! Equal-rank reductive subalgebras h of g: their induced positive system,
//! rho_h, the complement roots, and the coset set C of Weyl elements mapping
//! the dominant g-chamber into the dominant h-chamber.
//!
//! u(1) summands of h are implicit: only the roots of h, rho_h, and the
//! reflections they generate enter any formula, so the orthogonal torus
//! directions carry no data.

use crate::error::{Error, Result};
use crate::ratio::ratio;
use crate::rootsystem::{RootDatum, Weight};
use crate::weylgroup::{enumerate, enumerate_subgroup, reflection_matrix, WeylElement, WeylGroup};
use num_traits::Signed;
use std::collections::BTreeSet;
use std::fmt;

/// How to pick the subalgebra. `Bds(k)` removes simple node `k` (0-based)
/// following the extended-diagram recipe: nodes with mark 1 yield the Levi
/// subalgebra (semisimple part plus u(1)), nodes with mark >= 2 swap the
/// removed node for the lowest root of its factor. `Roots` lists positive
/// root indices forming the positive system of h.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum HSpec {
    Cartan,
    Bds(usize),
    Roots(Vec<usize>),
}

impl HSpec {
    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "cartan" {
            return Ok(HSpec::Cartan);
        }
        if let Some(rest) = s.strip_prefix("bds:") {
            let k = rest
                .parse()
                .map_err(|_| Error::InvalidHSpec(s.to_string()))?;
            return Ok(HSpec::Bds(k));
        }
        if let Some(rest) = s.strip_prefix("roots:") {
            let rest = rest
                .trim()
                .strip_prefix('[')
                .and_then(|r| r.strip_suffix(']'))
                .ok_or_else(|| Error::InvalidHSpec(s.to_string()))?;
            let mut idx = Vec::new();
            if !rest.trim().is_empty() {
                for part in rest.split(',') {
                    idx.push(
                        part.trim()
                            .parse()
                            .map_err(|_| Error::InvalidHSpec(s.to_string()))?,
                    );
                }
            }
            return Ok(HSpec::Roots(idx));
        }
        Err(Error::InvalidHSpec(s.to_string()))
    }
}

impl fmt::Display for HSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HSpec::Cartan => write!(f, "cartan"),
            HSpec::Bds(k) => write!(f, "bds:{k}"),
            HSpec::Roots(idx) => {
                let parts: Vec<String> = idx.iter().map(|i| i.to_string()).collect();
                write!(f, "roots:[{}]", parts.join(","))
            }
        }
    }
}

/// An equal-rank pair (g, h) with everything derived from the choice of h.
#[derive(Clone)]
pub struct EqualRankPair {
    pub g: RootDatum,
    /// Simple roots of h for the induced positive system (indecomposables).
    pub h_simple: Vec<Weight>,
    /// Positive roots of h: the roots of h lying in the positive system of g.
    pub h_positive: Vec<Weight>,
    pub rho_h: Weight,
    /// All roots of the complement p (both signs).
    pub p_roots: Vec<Weight>,
    /// The coset set C in enumeration order of the full Weyl group.
    pub cosets: Vec<WeylElement>,
    /// Full Weyl group of g (cached; read-only after construction).
    pub weyl: WeylGroup,
    pub h_weyl_order: usize,
}

impl EqualRankPair {
    /// rho_g - rho_h; also half the sum of the positive p-roots.
    pub fn rho_p(&self) -> Weight {
        self.g.rho().sub(&self.rho_h)
    }

    /// Positive roots of the complement: Delta+(g) minus Delta+(h).
    pub fn p_positive(&self) -> Vec<Weight> {
        let h: BTreeSet<&Weight> = self.h_positive.iter().collect();
        self.g
            .positive_roots
            .iter()
            .filter(|r| !h.contains(r))
            .cloned()
            .collect()
    }

    /// h-dominance: nonnegative pairing with every positive root of h.
    pub fn is_h_dominant(&self, x: &Weight) -> bool {
        self.h_positive
            .iter()
            .all(|alpha| !self.g.inner(x, alpha).is_negative())
    }

    /// h-integrality: integral pairing with every h-coroot.
    pub fn is_h_integral(&self, x: &Weight) -> bool {
        self.h_simple
            .iter()
            .all(|beta| self.g.coroot_pairing(x, beta).is_integer())
    }

    pub fn is_full(&self) -> bool {
        self.h_positive.len() == self.g.positive_roots.len()
    }
}

/// Builds the pair. The positive system of h is induced from that of g, the
/// simple roots of h are recomputed as the indecomposable positive h-roots,
/// and C is found by filtering the full Weyl group on h-dominance of
/// `c(rho_g)`.
pub fn build_subpair(g: &RootDatum, spec: &HSpec) -> Result<EqualRankPair> {
    let generators: Vec<Weight> = match spec {
        HSpec::Cartan => Vec::new(),
        HSpec::Bds(k) => bds_generators(g, *k)?,
        HSpec::Roots(indices) => {
            let mut v = Vec::new();
            for &i in indices {
                let r = g
                    .positive_roots
                    .get(i)
                    .ok_or_else(|| Error::InvalidHSpec(format!("root index {i} out of range")))?;
                v.push(r.clone());
            }
            v
        }
    };

    // Closed subsystem generated by the chosen roots (symmetric closure
    // under addition within Delta(g)).
    let mut roots: BTreeSet<Weight> = BTreeSet::new();
    for r in &generators {
        roots.insert(r.clone());
        roots.insert(r.neg());
    }
    loop {
        let mut added = Vec::new();
        for a in &roots {
            for b in &roots {
                let s = a.add(b);
                if !s.is_zero() && g.is_root(&s) && !roots.contains(&s) {
                    added.push(s);
                }
            }
        }
        if added.is_empty() {
            break;
        }
        roots.extend(added);
    }

    if let HSpec::Roots(indices) = spec {
        // Explicit lists must already be closed: the closure may not add
        // roots beyond +/- the listed ones.
        let listed: BTreeSet<Weight> = indices
            .iter()
            .flat_map(|&i| {
                let r = g.positive_roots[i].clone();
                [r.neg(), r]
            })
            .collect();
        for r in &roots {
            if !listed.contains(r) {
                return Err(Error::NotClosed(format!("missing {r}")));
            }
        }
    }

    let h_positive: Vec<Weight> = g
        .positive_roots
        .iter()
        .filter(|r| roots.contains(*r))
        .cloned()
        .collect();

    // Indecomposables of the induced positive system.
    let pos_set: BTreeSet<&Weight> = h_positive.iter().collect();
    let h_simple: Vec<Weight> = h_positive
        .iter()
        .filter(|r| {
            !h_positive.iter().any(|a| {
                let diff = r.sub(a);
                !diff.is_zero() && pos_set.contains(&diff)
            })
        })
        .cloned()
        .collect();

    let mut rho_h = Weight::zero(g.rank);
    for r in &h_positive {
        rho_h = rho_h.add(r);
    }
    let rho_h = rho_h.scale(&ratio(1, 2));

    let p_roots: Vec<Weight> = g
        .positive_roots
        .iter()
        .filter(|r| !roots.contains(*r))
        .flat_map(|r| [r.clone(), r.neg()])
        .collect();
    if p_roots.len() % 2 != 0 {
        return Err(Error::Internal("complement has odd root count".into()));
    }

    let weyl = enumerate(g);
    let rho = g.rho();
    let cosets: Vec<WeylElement> = weyl
        .elements
        .iter()
        .filter(|c| {
            let image = c.act(&rho);
            h_positive
                .iter()
                .all(|alpha| !g.inner(&image, alpha).is_negative())
        })
        .cloned()
        .collect();

    let h_gens: Vec<Vec<Vec<i64>>> = h_simple
        .iter()
        .map(|b| reflection_matrix(g, b))
        .collect::<Result<_>>()?;
    let h_weyl_order = enumerate_subgroup(g.rank, &h_gens).len();
    if cosets.len() * h_weyl_order != weyl.order() {
        return Err(Error::Internal(format!(
            "|C| * |W_h| = {} * {} != |W_g| = {}",
            cosets.len(),
            h_weyl_order,
            weyl.order()
        )));
    }

    Ok(EqualRankPair {
        g: g.clone(),
        h_simple,
        h_positive,
        rho_h,
        p_roots,
        cosets,
        weyl,
        h_weyl_order,
    })
}

/// Simple-root generators produced by removing node `k` of the extended
/// diagram of its factor: mark 1 keeps the remaining simple roots (Levi),
/// a larger mark adds the lowest root of the factor.
fn bds_generators(g: &RootDatum, k: usize) -> Result<Vec<Weight>> {
    if k >= g.rank {
        return Err(Error::InvalidHSpec(format!("bds:{k} out of range")));
    }
    let factor = g.factor_of_node[k];
    let (theta_idx, marks) = g.highest_root_of_factor(factor);
    let mark = marks[k];
    let mut gens: Vec<Weight> = (0..g.rank)
        .filter(|&i| i != k)
        .map(|i| g.simple_root(i).clone())
        .collect();
    if mark >= 2 {
        gens.push(g.positive_roots[theta_idx].neg());
    }
    Ok(gens)
}

/// One h_spec per node of the extended diagram whose removal yields a proper
/// subalgebra, deduplicated up to diagram symmetry.
pub fn borel_de_siebenthal(g: &RootDatum) -> Result<Vec<HSpec>> {
    if !g.lie_type.is_simple() {
        return Err(Error::InvalidHSpec(
            "Borel-de Siebenthal enumeration needs a simple type".into(),
        ));
    }
    let autos = cartan_automorphisms(&g.cartan);
    let mut specs = Vec::new();
    let mut covered = vec![false; g.rank];
    for k in 0..g.rank {
        if covered[k] {
            continue;
        }
        for auto in &autos {
            covered[auto[k]] = true;
        }
        if g.rank == 1 {
            // Removing the single node leaves only the torus.
            specs.push(HSpec::Cartan);
        } else {
            specs.push(HSpec::Bds(k));
        }
    }
    Ok(specs)
}

/// All permutations of the nodes preserving the Cartan matrix.
fn cartan_automorphisms(cartan: &[Vec<i64>]) -> Vec<Vec<usize>> {
    let n = cartan.len();
    let mut result = Vec::new();
    let mut perm: Vec<usize> = (0..n).collect();
    permute(&mut perm, 0, &mut |p| {
        let ok = (0..n).all(|i| (0..n).all(|j| cartan[p[i]][p[j]] == cartan[i][j]));
        if ok {
            result.push(p.to_vec());
        }
    });
    result
}

fn permute(items: &mut [usize], k: usize, visit: &mut impl FnMut(&[usize])) {
    if k == items.len() {
        visit(items);
        return;
    }
    for i in k..items.len() {
        items.swap(k, i);
        permute(items, k + 1, visit);
        items.swap(k, i);
    }
}
