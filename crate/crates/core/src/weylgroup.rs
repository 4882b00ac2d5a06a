//! Enumeration of the Weyl group, its action on weights, signs, and
//! dominance machinery including the singular/regular distinction.

use crate::error::{Error, Result};
use crate::ratio::{rat, Rat};
use crate::rootsystem::{RootDatum, Weight};
use num_traits::{Signed, Zero};
use std::collections::HashMap;

/// A Weyl group element: a reduced word in the simple reflections and the
/// integer matrix of its action on fundamental-weight coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeylElement {
    pub word: Vec<usize>,
    pub matrix: Vec<Vec<i64>>,
}

impl WeylElement {
    pub fn identity(rank: usize) -> Self {
        let mut m = vec![vec![0i64; rank]; rank];
        for (i, row) in m.iter_mut().enumerate() {
            row[i] = 1;
        }
        WeylElement {
            word: Vec::new(),
            matrix: m,
        }
    }

    pub fn length(&self) -> usize {
        self.word.len()
    }

    /// `(-1)^length`.
    pub fn sign(&self) -> i64 {
        if self.word.len() % 2 == 0 {
            1
        } else {
            -1
        }
    }

    /// Applies the element to a weight (matrix times column vector).
    pub fn act(&self, x: &Weight) -> Weight {
        let n = self.matrix.len();
        assert_eq!(x.rank(), n, "act: rank mismatch");
        Weight(
            (0..n)
                .map(|k| {
                    let mut s = Rat::zero();
                    for j in 0..n {
                        if self.matrix[k][j] != 0 && !x.0[j].is_zero() {
                            s += rat(self.matrix[k][j]) * &x.0[j];
                        }
                    }
                    s
                })
                .collect(),
        )
    }

    pub fn act_checked(&self, x: &Weight) -> Result<Weight> {
        if x.rank() != self.matrix.len() {
            return Err(Error::DimensionMismatch {
                expected: self.matrix.len(),
                got: x.rank(),
            });
        }
        Ok(self.act(x))
    }

    /// Group composition: `(self * other)(x) = self(other(x))`.
    pub fn compose(&self, other: &WeylElement) -> WeylElement {
        let mut word = self.word.clone();
        word.extend(&other.word);
        WeylElement {
            word,
            matrix: mat_mul(&self.matrix, &other.matrix),
        }
    }
}

/// Complete enumeration of the Weyl group, deduplicated by matrix.
#[derive(Clone)]
pub struct WeylGroup {
    pub elements: Vec<WeylElement>,
}

impl WeylGroup {
    pub fn order(&self) -> usize {
        self.elements.len()
    }
}

/// Matrix of the simple reflection `s_i` acting on fundamental-weight
/// coordinates: `s_i(x) = x - x_i * alpha_i`.
pub fn simple_reflection_matrix(d: &RootDatum, i: usize) -> Vec<Vec<i64>> {
    let n = d.rank;
    let mut m = vec![vec![0i64; n]; n];
    for (k, row) in m.iter_mut().enumerate() {
        row[k] = 1;
        row[i] -= d.cartan[i][k];
    }
    m
}

/// Matrix of the reflection in an arbitrary root of `d` (integer on the
/// weight lattice because coroots are integral).
pub fn reflection_matrix(d: &RootDatum, beta: &Weight) -> Result<Vec<Vec<i64>>> {
    let (idx, sign) = if let Some(i) = d.positive_root_index(beta) {
        (i, 1i64)
    } else if let Some(i) = d.positive_root_index(&beta.neg()) {
        (i, -1i64)
    } else {
        return Err(Error::Internal(format!("{beta} is not a root")));
    };
    let _ = sign; // s_beta = s_{-beta}
    let coords = &d.root_coords[idx];
    let norm = d.norm_sq(&d.positive_roots[idx]);
    // Coroot coefficients: <omega_j, beta-coroot> = a_j * d_j / <beta,beta>.
    let mut cr = Vec::with_capacity(d.rank);
    for j in 0..d.rank {
        let c = rat(coords[j]) * &d.simple_norms[j] / &norm;
        if !c.is_integer() {
            return Err(Error::Internal("non-integral coroot coefficient".into()));
        }
        cr.push(crate::ratio::rat_to_i64(&c).unwrap());
    }
    let beta_fw: Vec<i64> = d.positive_roots[idx]
        .0
        .iter()
        .map(|x| crate::ratio::rat_to_i64(x).unwrap())
        .collect();
    let n = d.rank;
    let mut m = vec![vec![0i64; n]; n];
    for k in 0..n {
        for j in 0..n {
            m[k][j] = i64::from(k == j) - cr[j] * beta_fw[k];
        }
    }
    Ok(m)
}

fn mat_mul(a: &[Vec<i64>], b: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let n = a.len();
    let mut out = vec![vec![0i64; n]; n];
    for i in 0..n {
        for k in 0..n {
            if a[i][k] == 0 {
                continue;
            }
            for j in 0..n {
                out[i][j] += a[i][k] * b[k][j];
            }
        }
    }
    out
}

/// Breadth-first enumeration with reduced words; ties broken by generator
/// order, so the result is deterministic.
pub fn enumerate(d: &RootDatum) -> WeylGroup {
    let gens: Vec<Vec<Vec<i64>>> = (0..d.rank)
        .map(|i| simple_reflection_matrix(d, i))
        .collect();
    let id = WeylElement::identity(d.rank);
    let mut seen: HashMap<Vec<Vec<i64>>, ()> = HashMap::new();
    seen.insert(id.matrix.clone(), ());
    let mut elements = vec![id];
    let mut head = 0;
    while head < elements.len() {
        let current = elements[head].clone();
        for (i, g) in gens.iter().enumerate() {
            let m = mat_mul(&current.matrix, g);
            if !seen.contains_key(&m) {
                seen.insert(m.clone(), ());
                let mut word = current.word.clone();
                word.push(i);
                elements.push(WeylElement { word, matrix: m });
            }
        }
        head += 1;
    }
    WeylGroup { elements }
}

/// Enumerates the subgroup generated by the given reflection matrices.
/// Words are indices into `gens` and need not be reduced in the ambient group.
pub fn enumerate_subgroup(rank: usize, gens: &[Vec<Vec<i64>>]) -> Vec<Vec<Vec<i64>>> {
    let id = WeylElement::identity(rank).matrix;
    let mut seen: HashMap<Vec<Vec<i64>>, ()> = HashMap::new();
    seen.insert(id.clone(), ());
    let mut elements = vec![id];
    let mut head = 0;
    while head < elements.len() {
        for g in gens {
            let m = mat_mul(&elements[head], g);
            if !seen.contains_key(&m) {
                seen.insert(m.clone(), ());
                elements.push(m);
            }
        }
        head += 1;
    }
    elements
}

/// Moves `x` to the dominant chamber. Returns `(w, dom, regular)` with
/// `dom = w(x)` dominant; `regular` is true iff `<dom, alpha> != 0` for every
/// positive root `alpha` (all walls, not just the simple ones). For regular
/// `x` the element `w` is unique.
pub fn make_dominant(d: &RootDatum, x: &Weight) -> (WeylElement, Weight, bool) {
    let mut cur = x.clone();
    let mut applied: Vec<usize> = Vec::new();
    loop {
        let neg = (0..d.rank).find(|&i| cur.0[i].is_negative());
        match neg {
            None => break,
            Some(i) => {
                let coeff = cur.0[i].clone();
                cur = cur.sub(&d.simple_root(i).scale(&coeff));
                applied.push(i);
            }
        }
    }
    // dom = s_{i_k} ... s_{i_1}(x): the word reads left to right as
    // composition, so it is the reverse of the application order.
    let mut w = WeylElement::identity(d.rank);
    for &i in applied.iter().rev() {
        let s = WeylElement {
            word: vec![i],
            matrix: simple_reflection_matrix(d, i),
        };
        w = w.compose(&s);
    }
    debug_assert_eq!(w.act(x), cur);
    let regular = d
        .positive_roots
        .iter()
        .all(|alpha| !d.inner(&cur, alpha).is_zero());
    (w, cur, regular)
}
