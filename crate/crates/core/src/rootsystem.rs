//! Root data for the simple and semi-simple product Lie types: positive
//! roots, the invariant form, and rho.
//!
//! Weights are stored in fundamental-weight coordinates throughout, so a
//! weight is dominant exactly when its coordinates are nonnegative. Roots are
//! weights too; the i-th row of the Cartan matrix is the i-th simple root.
//! The form is normalized so long roots of each simple factor have squared
//! length 2, which pins down every Casimir-type scalar in the crate.

use crate::error::{Error, Result};
use crate::matrix::QMatrix;
use crate::ratio::{rat, ratio, Rat};
use num_traits::{Signed, Zero};
use std::collections::HashMap;
use std::fmt;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Series {
    A,
    B,
    C,
    D,
    E,
    F,
    G,
}

impl Series {
    fn rank_valid(self, n: usize) -> bool {
        match self {
            Series::A => n >= 1,
            Series::B | Series::C => n >= 2,
            Series::D => n >= 3,
            Series::E => (6..=8).contains(&n),
            Series::F => n == 4,
            Series::G => n == 2,
        }
    }

    fn positive_root_count(self, n: usize) -> usize {
        match self {
            Series::A => n * (n + 1) / 2,
            Series::B | Series::C => n * n,
            Series::D => n * (n - 1),
            Series::E => match n {
                6 => 36,
                7 => 63,
                _ => 120,
            },
            Series::F => 24,
            Series::G => 6,
        }
    }
}

impl fmt::Display for Series {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = match self {
            Series::A => 'A',
            Series::B => 'B',
            Series::C => 'C',
            Series::D => 'D',
            Series::E => 'E',
            Series::F => 'F',
            Series::G => 'G',
        };
        write!(f, "{c}")
    }
}

/// A semi-simple type as a product of simple factors, e.g. `G2` or `A1xA1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LieType {
    pub factors: Vec<(Series, usize)>,
}

impl LieType {
    pub fn new(factors: Vec<(Series, usize)>) -> Result<Self> {
        if factors.is_empty() {
            return Err(Error::InvalidLieType("empty factor list".into()));
        }
        for &(s, n) in &factors {
            if !s.rank_valid(n) {
                return Err(Error::InvalidLieType(format!("{s}{n}")));
            }
        }
        Ok(LieType { factors })
    }

    /// Parses strings like `A2`, `G2`, `A1xA1`, `B2xG2`.
    pub fn parse(s: &str) -> Result<Self> {
        let mut factors = Vec::new();
        for part in s.split(['x', 'X']) {
            let part = part.trim();
            let mut chars = part.chars();
            let series = match chars.next() {
                Some('A' | 'a') => Series::A,
                Some('B' | 'b') => Series::B,
                Some('C' | 'c') => Series::C,
                Some('D' | 'd') => Series::D,
                Some('E' | 'e') => Series::E,
                Some('F' | 'f') => Series::F,
                Some('G' | 'g') => Series::G,
                _ => return Err(Error::InvalidLieType(s.into())),
            };
            let rank: usize = chars
                .as_str()
                .parse()
                .map_err(|_| Error::InvalidLieType(s.into()))?;
            factors.push((series, rank));
        }
        LieType::new(factors)
    }

    pub fn rank(&self) -> usize {
        self.factors.iter().map(|&(_, n)| n).sum()
    }

    pub fn is_simple(&self) -> bool {
        self.factors.len() == 1
    }
}

impl fmt::Display for LieType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .factors
            .iter()
            .map(|&(s, n)| format!("{s}{n}"))
            .collect();
        write!(f, "{}", parts.join("x"))
    }
}

/// Weight in fundamental-weight coordinates; exact rationals.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Weight(pub Vec<Rat>);

impl Weight {
    pub fn zero(rank: usize) -> Self {
        Weight(vec![Rat::zero(); rank])
    }

    pub fn from_i64(coords: &[i64]) -> Self {
        Weight(coords.iter().map(|&c| rat(c)).collect())
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn add(&self, other: &Weight) -> Weight {
        Weight(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &Weight) -> Weight {
        Weight(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn neg(&self) -> Weight {
        Weight(self.0.iter().map(|a| -a).collect())
    }

    pub fn scale(&self, s: &Rat) -> Weight {
        Weight(self.0.iter().map(|a| a * s).collect())
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|a| a.is_zero())
    }

    pub fn is_integral(&self) -> bool {
        self.0.iter().all(|a| a.is_integer())
    }

    /// Dominant for the ambient type: all coordinates nonnegative.
    pub fn is_dominant(&self) -> bool {
        self.0.iter().all(|a| !a.is_negative())
    }

    pub fn is_dominant_integral(&self) -> bool {
        self.is_dominant() && self.is_integral()
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(crate::ratio::format_rat).collect();
        write!(f, "({})", parts.join(", "))
    }
}

impl fmt::Debug for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Root datum: Cartan matrix, positive roots, invariant form, rho.
#[derive(Clone)]
pub struct RootDatum {
    pub lie_type: LieType,
    pub rank: usize,
    /// Row i is the i-th simple root in fundamental-weight coordinates:
    /// `cartan[i][j] = <alpha_i, alpha_j-coroot>`.
    pub cartan: Vec<Vec<i64>>,
    /// Squared length of each simple root (long roots have 2).
    pub simple_norms: Vec<Rat>,
    /// Positive roots ordered by height, ties broken deterministically;
    /// the first `rank` entries are the simple roots in order.
    pub positive_roots: Vec<Weight>,
    /// Simple-root coordinates of each positive root.
    pub root_coords: Vec<Vec<i64>>,
    /// Gram matrix of the fundamental weights (the invariant form).
    pub form: Vec<Vec<Rat>>,
    /// Which simple factor each simple-root index belongs to.
    pub factor_of_node: Vec<usize>,
    /// Inverse of the Cartan matrix; converts fundamental-weight coordinates
    /// to simple-root coordinates.
    pub cartan_inverse: Vec<Vec<Rat>>,
    root_index: HashMap<Weight, usize>,
}

/// Builds the root datum for a valid type: reflection-string closure for the
/// positive roots, form normalized so long roots have squared length 2.
pub fn build_root_system(t: &LieType) -> Result<RootDatum> {
    LieType::new(t.factors.clone())?;
    let rank = t.rank();
    let mut cartan = vec![vec![0i64; rank]; rank];
    let mut simple_norms = vec![Rat::zero(); rank];
    let mut factor_of_node = vec![0usize; rank];
    let mut offset = 0;
    for (fi, &(series, n)) in t.factors.iter().enumerate() {
        let (c, d) = simple_cartan(series, n);
        for i in 0..n {
            for j in 0..n {
                cartan[offset + i][offset + j] = c[i][j];
            }
            simple_norms[offset + i] = d[i].clone();
            factor_of_node[offset + i] = fi;
        }
        offset += n;
    }

    // Closure over root strings: for a known root b and simple root i,
    // the string b - p*alpha_i ... b + q*alpha_i satisfies q = p - <b, a_i-coroot>.
    let mut coords: Vec<Vec<i64>> = (0..rank)
        .map(|i| {
            let mut v = vec![0i64; rank];
            v[i] = 1;
            v
        })
        .collect();
    let mut seen: HashMap<Vec<i64>, ()> = coords.iter().cloned().map(|c| (c, ())).collect();
    let contains = |seen: &HashMap<Vec<i64>, ()>, v: &[i64]| {
        seen.contains_key(v) || seen.contains_key(&v.iter().map(|x| -x).collect::<Vec<_>>())
    };
    let mut head = 0;
    while head < coords.len() {
        let b = coords[head].clone();
        for i in 0..rank {
            let mut p = 0i64;
            loop {
                let mut lower = b.clone();
                lower[i] -= p + 1;
                if contains(&seen, &lower) {
                    p += 1;
                } else {
                    break;
                }
            }
            // Pairing <b, alpha_i-coroot> is the i-th fundamental coordinate.
            let pairing: i64 = (0..rank).map(|j| b[j] * cartan[j][i]).sum();
            let q = p - pairing;
            for k in 1..=q {
                let mut up = b.clone();
                up[i] += k;
                if !seen.contains_key(&up) {
                    seen.insert(up.clone(), ());
                    coords.push(up);
                }
            }
        }
        head += 1;
    }
    coords.sort_by(|a, b| {
        let ha: i64 = a.iter().sum();
        let hb: i64 = b.iter().sum();
        ha.cmp(&hb).then_with(|| b.cmp(a))
    });

    let expected: usize = t
        .factors
        .iter()
        .map(|&(s, n)| s.positive_root_count(n))
        .sum();
    if coords.len() != expected {
        return Err(Error::Internal(format!(
            "positive root closure produced {} roots for {t}, expected {expected}",
            coords.len()
        )));
    }

    // Invariant form: F[j][k] = (d_j / 2) * Cinv[k][j], blockwise exact.
    let cmat = QMatrix::from_rows(
        cartan
            .iter()
            .map(|row| row.iter().map(|&x| rat(x)).collect())
            .collect(),
    );
    let mut cinv = QMatrix::zeros(rank, rank);
    for j in 0..rank {
        let mut e = vec![Rat::zero(); rank];
        e[j] = rat(1);
        let col = cmat
            .solve(&e)
            .ok_or_else(|| Error::Internal("singular Cartan matrix".into()))?;
        for i in 0..rank {
            cinv.set(i, j, col[i].clone());
        }
    }
    let mut form = vec![vec![Rat::zero(); rank]; rank];
    for j in 0..rank {
        for k in 0..rank {
            form[j][k] = &simple_norms[j] / rat(2) * cinv.get(k, j);
        }
    }
    for j in 0..rank {
        for k in 0..rank {
            if form[j][k] != form[k][j] {
                return Err(Error::Internal("invariant form is not symmetric".into()));
            }
        }
    }

    let positive_roots: Vec<Weight> = coords
        .iter()
        .map(|b| {
            Weight(
                (0..rank)
                    .map(|j| rat((0..rank).map(|i| b[i] * cartan[i][j]).sum::<i64>()))
                    .collect(),
            )
        })
        .collect();
    let root_index = positive_roots
        .iter()
        .enumerate()
        .map(|(i, w)| (w.clone(), i))
        .collect();

    let cartan_inverse: Vec<Vec<Rat>> = (0..rank)
        .map(|i| (0..rank).map(|j| cinv.get(i, j).clone()).collect())
        .collect();

    let d = RootDatum {
        lie_type: t.clone(),
        rank,
        cartan,
        simple_norms,
        positive_roots,
        root_coords: coords,
        form,
        factor_of_node,
        cartan_inverse,
        root_index,
    };
    for alpha in &d.positive_roots {
        if !d.inner(alpha, alpha).is_positive() {
            return Err(Error::Internal("root with nonpositive norm".into()));
        }
    }
    Ok(d)
}

impl RootDatum {
    /// The invariant bilinear form, exact.
    pub fn inner(&self, x: &Weight, y: &Weight) -> Rat {
        assert_eq!(x.rank(), self.rank, "inner: rank mismatch");
        assert_eq!(y.rank(), self.rank, "inner: rank mismatch");
        let mut s = Rat::zero();
        for j in 0..self.rank {
            if x.0[j].is_zero() {
                continue;
            }
            for k in 0..self.rank {
                if !y.0[k].is_zero() {
                    s += &x.0[j] * &self.form[j][k] * &y.0[k];
                }
            }
        }
        s
    }

    /// Checked variant of [`inner`] for callers holding unvalidated input.
    pub fn inner_product(&self, x: &Weight, y: &Weight) -> Result<Rat> {
        if x.rank() != self.rank {
            return Err(Error::DimensionMismatch {
                expected: self.rank,
                got: x.rank(),
            });
        }
        if y.rank() != self.rank {
            return Err(Error::DimensionMismatch {
                expected: self.rank,
                got: y.rank(),
            });
        }
        Ok(self.inner(x, y))
    }

    pub fn norm_sq(&self, x: &Weight) -> Rat {
        self.inner(x, x)
    }

    /// `<x, beta-coroot> = 2<x, beta> / <beta, beta>`.
    pub fn coroot_pairing(&self, x: &Weight, beta: &Weight) -> Rat {
        rat(2) * self.inner(x, beta) / self.norm_sq(beta)
    }

    /// Sum of the fundamental weights; equals half the sum of positive roots.
    pub fn rho(&self) -> Weight {
        Weight(vec![rat(1); self.rank])
    }

    pub fn simple_root(&self, i: usize) -> &Weight {
        &self.positive_roots[i]
    }

    pub fn is_positive_root(&self, w: &Weight) -> bool {
        self.root_index.contains_key(w)
    }

    pub fn is_root(&self, w: &Weight) -> bool {
        self.root_index.contains_key(w) || self.root_index.contains_key(&w.neg())
    }

    pub fn positive_root_index(&self, w: &Weight) -> Option<usize> {
        self.root_index.get(w).copied()
    }

    /// Height of a positive root (sum of simple-root coordinates).
    pub fn height(&self, idx: usize) -> i64 {
        self.root_coords[idx].iter().sum()
    }

    /// Simple-root coordinates of an arbitrary weight (exact rationals).
    pub fn to_root_coords(&self, w: &Weight) -> Vec<Rat> {
        (0..self.rank)
            .map(|j| {
                let mut s = Rat::zero();
                for i in 0..self.rank {
                    if !w.0[i].is_zero() {
                        s += &w.0[i] * &self.cartan_inverse[i][j];
                    }
                }
                s
            })
            .collect()
    }

    /// True when `w` lies in the nonnegative integer span of the simple roots.
    pub fn in_positive_root_lattice(&self, w: &Weight) -> bool {
        self.to_root_coords(w)
            .iter()
            .all(|c| c.is_integer() && !c.is_negative())
    }

    /// Highest root of one simple factor, as (positive-root index, marks),
    /// where marks are its simple-root coordinates within the whole datum.
    pub fn highest_root_of_factor(&self, factor: usize) -> (usize, Vec<i64>) {
        let mut best: Option<(usize, i64)> = None;
        for (idx, coords) in self.root_coords.iter().enumerate() {
            let in_factor = coords
                .iter()
                .enumerate()
                .all(|(i, &c)| c == 0 || self.factor_of_node[i] == factor);
            let nonzero = coords
                .iter()
                .enumerate()
                .any(|(i, &c)| c != 0 && self.factor_of_node[i] == factor);
            if in_factor && nonzero {
                let h = self.height(idx);
                if best.map_or(true, |(_, bh)| h > bh) {
                    best = Some((idx, h));
                }
            }
        }
        let (idx, _) = best.expect("factor has at least one root");
        (idx, self.root_coords[idx].clone())
    }
}

/// Cartan matrix and simple-root squared lengths of one simple factor,
/// Bourbaki node numbering, long roots normalized to squared length 2.
fn simple_cartan(series: Series, n: usize) -> (Vec<Vec<i64>>, Vec<Rat>) {
    let mut c = vec![vec![0i64; n]; n];
    for (i, row) in c.iter_mut().enumerate() {
        row[i] = 2;
    }
    let sym_edge = |c: &mut Vec<Vec<i64>>, i: usize, j: usize| {
        c[i][j] = -1;
        c[j][i] = -1;
    };
    let d;
    match series {
        Series::A => {
            for i in 0..n.saturating_sub(1) {
                sym_edge(&mut c, i, i + 1);
            }
            d = vec![rat(2); n];
        }
        Series::B => {
            for i in 0..n - 2 {
                sym_edge(&mut c, i, i + 1);
            }
            c[n - 2][n - 1] = -2;
            c[n - 1][n - 2] = -1;
            let mut v = vec![rat(2); n];
            v[n - 1] = rat(1);
            d = v;
        }
        Series::C => {
            for i in 0..n - 2 {
                sym_edge(&mut c, i, i + 1);
            }
            c[n - 2][n - 1] = -1;
            c[n - 1][n - 2] = -2;
            let mut v = vec![rat(1); n];
            v[n - 1] = rat(2);
            d = v;
        }
        Series::D => {
            for i in 0..n - 2 {
                sym_edge(&mut c, i, i + 1);
            }
            sym_edge(&mut c, n - 3, n - 1);
            d = vec![rat(2); n];
        }
        Series::E => {
            // Chain 0-2-3-4-5(-6(-7)) with node 1 attached to node 3.
            sym_edge(&mut c, 0, 2);
            sym_edge(&mut c, 2, 3);
            sym_edge(&mut c, 3, 4);
            sym_edge(&mut c, 4, 5);
            if n >= 7 {
                sym_edge(&mut c, 5, 6);
            }
            if n == 8 {
                sym_edge(&mut c, 6, 7);
            }
            sym_edge(&mut c, 1, 3);
            d = vec![rat(2); n];
        }
        Series::F => {
            sym_edge(&mut c, 0, 1);
            c[1][2] = -2;
            c[2][1] = -1;
            sym_edge(&mut c, 2, 3);
            d = vec![rat(2), rat(2), rat(1), rat(1)];
        }
        Series::G => {
            c[0][1] = -1;
            c[1][0] = -3;
            d = vec![ratio(2, 3), rat(2)];
        }
    }
    (c, d)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn a1_single_root_norm_two() {
        let d = build_root_system(&LieType::parse("A1").unwrap()).unwrap();
        assert_eq!(d.positive_roots.len(), 1);
        let alpha = &d.positive_roots[0];
        assert_eq!(d.inner(alpha, alpha), rat(2));
    }

    #[test]
    fn a2_three_positive_roots_including_sum() {
        let d = build_root_system(&LieType::parse("A2").unwrap()).unwrap();
        assert_eq!(d.positive_roots.len(), 3);
        let sum = d.simple_root(0).add(d.simple_root(1));
        assert!(d.is_positive_root(&sum));
    }

    #[test]
    fn g2_has_six_positive_roots() {
        let d = build_root_system(&LieType::parse("G2").unwrap()).unwrap();
        assert_eq!(d.positive_roots.len(), 6);
    }

    #[test]
    fn a1_rho_norm_is_one_half() {
        let d = build_root_system(&LieType::parse("A1").unwrap()).unwrap();
        let rho = d.rho();
        assert_eq!(d.inner(&rho, &rho), ratio(1, 2));
    }

    #[test]
    fn inner_product_bilinearity_zero() {
        let d = build_root_system(&LieType::parse("B2").unwrap()).unwrap();
        let z = Weight::zero(2);
        let y = Weight::from_i64(&[3, -1]);
        assert_eq!(d.inner(&z, &y), Rat::zero());
    }

    #[test]
    fn a2_simple_roots_pair_to_minus_one() {
        let d = build_root_system(&LieType::parse("A2").unwrap()).unwrap();
        let v = d.inner(d.simple_root(0), d.simple_root(1));
        assert_eq!(v, rat(-1));
    }

    #[test]
    fn rho_is_half_sum_of_positive_roots() {
        for t in ["A1", "A2", "B2", "C3", "G2", "A1xA1", "A2xB2"] {
            let d = build_root_system(&LieType::parse(t).unwrap()).expect(t);
            let mut half_sum = Weight::zero(d.rank);
            for r in &d.positive_roots {
                half_sum = half_sum.add(r);
            }
            half_sum = half_sum.scale(&ratio(1, 2));
            assert_eq!(half_sum, d.rho(), "rho mismatch for {t}");
        }
    }

    #[test]
    fn dimension_mismatch_is_reported() {
        let d = build_root_system(&LieType::parse("A2").unwrap()).unwrap();
        let bad = Weight::from_i64(&[1]);
        assert!(d.inner_product(&bad, &d.rho()).is_err());
    }

    #[test]
    fn invalid_types_rejected() {
        for t in ["E5", "F3", "G4", "D2", "B1", "", "Q3"] {
            assert!(LieType::parse(t).is_err(), "{t} should be invalid");
        }
    }

    #[test]
    fn product_types_are_block_diagonal() {
        let d = build_root_system(&LieType::parse("A1xA1").unwrap()).unwrap();
        assert_eq!(d.positive_roots.len(), 2);
        assert_eq!(d.inner(d.simple_root(0), d.simple_root(1)), Rat::zero());
    }

    #[test]
    fn g2_highest_root_marks() {
        let d = build_root_system(&LieType::parse("G2").unwrap()).unwrap();
        let (_, marks) = d.highest_root_of_factor(0);
        assert_eq!(marks, vec![3, 2]);
    }
}
