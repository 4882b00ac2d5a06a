//! The Clifford algebra of the complement p, the spin module S as the
//! exterior algebra on the lowering p-root vectors, the h-action on S, and
//! the cubic element.
//!
//! Conventions: the Clifford relation is `c(x)c(y) + c(y)c(x) = 2<x,y>`;
//! the vacuum (empty wedge) carries weight `rho_p = rho_g - rho_h` and lies
//! in the even half S+. The basis of p is the mixed system
//! `{e_beta, f_beta}` over the positive p-roots with the pairing inherited
//! from the Chevalley normalization, so every matrix entry stays rational.

use crate::chevalley::{ChevalleyBasis, Gen};
use crate::error::{Error, Result};
use crate::matrix::QMatrix;
use crate::ratio::{rat, ratio, Rat};
use crate::rootsystem::Weight;
use crate::subpair::EqualRankPair;
use num_traits::Zero;
use std::collections::BTreeMap;

/// Overall scale applied to the image of the 3-form in the Clifford
/// algebra. Fixed (once) so that the square of the Dirac operator acts by
/// the difference of shifted norms; the square test in `diracop` pins both
/// the magnitude and the sign.
pub fn cubic_normalization() -> Rat {
    ratio(-1, 2)
}

/// The spin module: basis indexed by subsets of the positive p-roots.
pub struct SpinModule {
    pub dim: usize,
    /// Positive-root indices (into `g.positive_roots`) spanning p.
    pub p_indices: Vec<usize>,
    /// Weight of each basis element: `rho_p - sum over the subset`.
    pub weights: Vec<Weight>,
    /// Parity of each basis element (odd subsets swap the half-spinors).
    pub parity_odd: Vec<bool>,
    /// Clifford action of each p-root generator.
    pub gamma: BTreeMap<Gen, QMatrix>,
    pub rho_p: Weight,
}

impl SpinModule {
    /// Clifford action of a linear combination of p-root generators.
    pub fn clifford_combo(&self, combo: &BTreeMap<Gen, Rat>) -> Result<QMatrix> {
        let mut out = QMatrix::zeros(self.dim, self.dim);
        for (g, c) in combo {
            let m = self
                .gamma
                .get(g)
                .ok_or_else(|| Error::Internal(format!("{g:?} is not a p-generator")))?;
            out = out.add(&m.scale(c));
        }
        Ok(out)
    }

    /// Matrix of a Clifford element (sum of ordered monomials).
    pub fn act_element(&self, elt: &CliffordElement) -> QMatrix {
        let mut out = QMatrix::zeros(self.dim, self.dim);
        for (mono, coeff) in elt.terms() {
            let mut m = QMatrix::identity(self.dim);
            for &gi in mono {
                m = m.mul(&self.gamma[&self.generator(gi)]);
            }
            out = out.add(&m.scale(coeff));
        }
        out
    }

    /// Generator for a flat p-basis index: even indices are raising vectors,
    /// odd are lowering, paired per positive p-root.
    pub fn generator(&self, flat: usize) -> Gen {
        let root = self.p_indices[flat / 2];
        if flat % 2 == 0 {
            Gen::E(root)
        } else {
            Gen::F(root)
        }
    }

    pub fn p_basis_len(&self) -> usize {
        2 * self.p_indices.len()
    }
}

/// Builds S with wedge/contraction Clifford generators.
pub fn build_spin_module(pair: &EqualRankPair, cb: &ChevalleyBasis) -> Result<SpinModule> {
    let d = &pair.g;
    let p_pos = pair.p_positive();
    let p_indices: Vec<usize> = p_pos
        .iter()
        .map(|r| d.positive_root_index(r).expect("p-root is a positive root"))
        .collect();
    let k = p_indices.len();
    if k > 20 {
        return Err(Error::DimensionCap {
            needed: 1 << k,
            cap: 1 << 20,
        });
    }
    let dim = 1usize << k;
    let rho_p = pair.rho_p();

    let mut weights = Vec::with_capacity(dim);
    let mut parity_odd = Vec::with_capacity(dim);
    for mask in 0..dim {
        let mut w = rho_p.clone();
        for (i, root) in p_pos.iter().enumerate() {
            if mask & (1 << i) != 0 {
                w = w.sub(root);
            }
        }
        weights.push(w);
        parity_odd.push((mask.count_ones() % 2) == 1);
    }

    // Sign of inserting/removing generator i in the sorted subset `mask`:
    // (-1)^(number of occupied slots below i).
    let sign_below = |mask: usize, i: usize| -> i64 {
        let below = (mask & ((1 << i) - 1)).count_ones();
        if below % 2 == 0 {
            1
        } else {
            -1
        }
    };

    let mut gamma: BTreeMap<Gen, QMatrix> = BTreeMap::new();
    for (i, &root_idx) in p_indices.iter().enumerate() {
        // f wedges in.
        let mut mf = QMatrix::zeros(dim, dim);
        for mask in 0..dim {
            if mask & (1 << i) == 0 {
                let target = mask | (1 << i);
                mf.set(target, mask, rat(sign_below(mask, i)));
            }
        }
        gamma.insert(Gen::F(root_idx), mf);
        // e contracts, scaled so the Clifford relation closes on 2<e,f>.
        let t = cb.pairing(Gen::E(root_idx), Gen::F(root_idx));
        let mut me = QMatrix::zeros(dim, dim);
        for mask in 0..dim {
            if mask & (1 << i) != 0 {
                let target = mask & !(1 << i);
                me.set(target, mask, rat(2) * &t * rat(sign_below(target, i)));
            }
        }
        gamma.insert(Gen::E(root_idx), me);
    }

    Ok(SpinModule {
        dim,
        p_indices,
        weights,
        parity_odd,
        gamma,
        rho_p,
    })
}

/// Spin lift of the h-action on p: the quadratic Clifford quantization
/// `(1/8) sum_i [c(ad(X) v_i), c(v_i-dual)]` over the mixed p-basis. The
/// commutator form makes the vacuum carry weight rho_p automatically.
pub fn h_action_on_spin(
    pair: &EqualRankPair,
    cb: &ChevalleyBasis,
    spin: &SpinModule,
    x: Gen,
) -> Result<QMatrix> {
    match x {
        Gen::H(_) => {}
        Gen::E(a) | Gen::F(a) => {
            let root = &cb.d.positive_roots[a];
            if !pair.h_positive.contains(root) {
                return Err(Error::Internal(format!("{x:?} is not in h")));
            }
        }
    }
    let mut out = QMatrix::zeros(spin.dim, spin.dim);
    let eighth = ratio(1, 8);
    for flat in 0..spin.p_basis_len() {
        let v = spin.generator(flat);
        let dual_partner = spin.generator(flat ^ 1);
        let t = cb.pairing(v, dual_partner);
        // dual(v) = partner / <v, partner>.
        let bracket = cb.bracket_gens(x, v);
        if bracket.is_empty() {
            continue;
        }
        let mut adv: BTreeMap<Gen, Rat> = BTreeMap::new();
        for (g, c) in bracket {
            adv.insert(*g, c.clone());
        }
        let c_adv = spin.clifford_combo(&adv)?;
        let c_dual = spin.gamma[&dual_partner].scale(&(rat(1) / &t));
        let comm = c_adv.mul(&c_dual).sub(&c_dual.mul(&c_adv));
        out = out.add(&comm.scale(&eighth));
    }
    Ok(out)
}

/// A sum of ordered monomials in the flat p-basis generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CliffordElement {
    terms: BTreeMap<Vec<usize>, Rat>,
}

impl CliffordElement {
    pub fn zero() -> Self {
        CliffordElement {
            terms: BTreeMap::new(),
        }
    }

    pub fn add_term(&mut self, mono: Vec<usize>, coeff: Rat) {
        if coeff.is_zero() {
            return;
        }
        let e = self.terms.entry(mono).or_insert_with(Rat::zero);
        *e += coeff;
        if e.is_zero() {
            let key = self
                .terms
                .iter()
                .find(|(_, c)| c.is_zero())
                .map(|(k, _)| k.clone());
            if let Some(k) = key {
                self.terms.remove(&k);
            }
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<usize>, &Rat)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }
}

/// The image of the invariant 3-form `w(X,Y,Z) = <X, [Y,Z]>` in the
/// Clifford algebra, over the mixed p-basis and its dual. Only the
/// p-component of the bracket contributes; triples meeting a dual pair
/// vanish, so the ordered monomials are already normal-ordered.
pub fn cubic_element(cb: &ChevalleyBasis, spin: &SpinModule) -> CliffordElement {
    let n = spin.p_basis_len();
    let scale = cubic_normalization();
    let mut v = CliffordElement::zero();
    // Dual scale per flat index: dual(i) = partner(i) / t_i.
    let dual_coeff: Vec<Rat> = (0..n)
        .map(|i| rat(1) / cb.pairing(spin.generator(i), spin.generator(i ^ 1)))
        .collect();
    for i in 0..n {
        for j in (i + 1)..n {
            for k in (j + 1)..n {
                // w(X_i, X_j, X_k) = <X_i, [X_j, X_k]>.
                let xi = spin.generator(i);
                let xj = spin.generator(j);
                let xk = spin.generator(k);
                let mut val = Rat::zero();
                for (g, c) in cb.bracket_gens(xj, xk) {
                    val += c * cb.pairing(xi, *g);
                }
                if val.is_zero() {
                    continue;
                }
                // Monomial in the duals: partner generators, still ordered.
                let mono = vec![i ^ 1, j ^ 1, k ^ 1];
                debug_assert!(mono[0] < mono[1] && mono[1] < mono[2]);
                let coeff = val * &dual_coeff[i] * &dual_coeff[j] * &dual_coeff[k] * &scale;
                v.add_term(mono, coeff);
            }
        }
    }
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chevalley::chevalley_basis;
    use crate::rootsystem::{build_root_system, LieType};
    use crate::subpair::{build_subpair, HSpec};

    fn setup(t: &str, h: &str) -> (EqualRankPair, ChevalleyBasis, SpinModule) {
        let d = build_root_system(&LieType::parse(t).unwrap()).unwrap();
        let pair = build_subpair(&d, &HSpec::parse(h).unwrap()).unwrap();
        let cb = chevalley_basis(&d).unwrap();
        let spin = build_spin_module(&pair, &cb).unwrap();
        (pair, cb, spin)
    }

    fn full_setup(t: &str) -> (EqualRankPair, ChevalleyBasis, SpinModule) {
        let d = build_root_system(&LieType::parse(t).unwrap()).unwrap();
        let all: Vec<usize> = (0..d.positive_roots.len()).collect();
        let pair = build_subpair(&d, &HSpec::Roots(all)).unwrap();
        let cb = chevalley_basis(&d).unwrap();
        let spin = build_spin_module(&pair, &cb).unwrap();
        (pair, cb, spin)
    }

    fn check_clifford_relations(pair: &EqualRankPair, cb: &ChevalleyBasis, spin: &SpinModule) {
        let n = spin.p_basis_len();
        for i in 0..n {
            for j in 0..n {
                let gi = spin.generator(i);
                let gj = spin.generator(j);
                let a = &spin.gamma[&gi];
                let b = &spin.gamma[&gj];
                let anti = a.mul(b).add(&b.mul(a));
                let expected = QMatrix::identity(spin.dim)
                    .scale(&(rat(2) * cb.pairing(gi, gj)));
                assert_eq!(anti, expected, "{:?} {:?} for {}", gi, gj, pair.g.lie_type);
            }
        }
    }

    #[test]
    fn a1_cartan_two_dimensional_clifford() {
        let (pair, cb, spin) = setup("A1", "cartan");
        assert_eq!(spin.dim, 2);
        check_clifford_relations(&pair, &cb, &spin);
    }

    #[test]
    fn clifford_relations_hold_across_pairs() {
        for (t, h) in [("A2", "bds:0"), ("B2", "bds:1"), ("G2", "bds:1"), ("A2", "cartan")] {
            let (pair, cb, spin) = setup(t, h);
            check_clifford_relations(&pair, &cb, &spin);
        }
    }

    #[test]
    fn full_pair_spin_is_trivial() {
        let (_, _, spin) = full_setup("A2");
        assert_eq!(spin.dim, 1);
        assert!(spin.gamma.is_empty());
    }

    #[test]
    fn g2_a1a1_spin_module_shape() {
        let (pair, _, spin) = setup("G2", "bds:1");
        assert_eq!(spin.dim, 16);
        // Vacuum carries rho_p, sits in the even half, and is unique there.
        assert_eq!(spin.weights[0], pair.rho_p());
        assert!(!spin.parity_odd[0]);
        let count = spin
            .weights
            .iter()
            .zip(&spin.parity_odd)
            .filter(|(w, odd)| **w == pair.rho_p() && !**odd)
            .count();
        assert_eq!(count, 1);
    }

    #[test]
    fn weights_match_spinor_character() {
        use crate::characters::{spinor_character, SpinPart};
        for (t, h) in [("A2", "bds:0"), ("B2", "bds:1"), ("G2", "bds:0")] {
            let (pair, _, spin) = setup(t, h);
            let full = spinor_character(&pair, SpinPart::Full);
            for (w, m) in full.iter() {
                let count = spin.weights.iter().filter(|x| *x == w).count() as i64;
                assert_eq!(count, *m, "{t}/{h} weight {w}");
            }
        }
    }

    #[test]
    fn cartan_action_is_diagonal_with_stored_weights() {
        for (t, h) in [("A1", "cartan"), ("A2", "bds:0"), ("B2", "bds:1")] {
            let (pair, cb, spin) = setup(t, h);
            for i in 0..pair.g.rank {
                let m = h_action_on_spin(&pair, &cb, &spin, Gen::H(i)).unwrap();
                for a in 0..spin.dim {
                    for b in 0..spin.dim {
                        let expected = if a == b {
                            spin.weights[a].0[i].clone()
                        } else {
                            Rat::zero()
                        };
                        assert_eq!(*m.get(a, b), expected, "{t}/{h} H{i} at ({a},{b})");
                    }
                }
            }
        }
    }

    #[test]
    fn h_action_intertwines_clifford_multiplication() {
        // [ad_S(X), c(Y)] = c([X, Y]) for X in h, Y in p.
        for (t, h) in [("A2", "bds:0"), ("B2", "bds:1")] {
            let (pair, cb, spin) = setup(t, h);
            let mut h_gens: Vec<Gen> = (0..pair.g.rank).map(Gen::H).collect();
            for r in &pair.h_positive {
                let idx = pair.g.positive_root_index(r).unwrap();
                h_gens.push(Gen::E(idx));
                h_gens.push(Gen::F(idx));
            }
            for &x in &h_gens {
                let ad_s = h_action_on_spin(&pair, &cb, &spin, x).unwrap();
                for flat in 0..spin.p_basis_len() {
                    let y = spin.generator(flat);
                    let cy = &spin.gamma[&y];
                    let lhs = ad_s.mul(cy).sub(&cy.mul(&ad_s));
                    let mut combo: BTreeMap<Gen, Rat> = BTreeMap::new();
                    for (g, c) in cb.bracket_gens(x, y) {
                        combo.insert(*g, c.clone());
                    }
                    let rhs = spin.clifford_combo(&combo).unwrap();
                    assert_eq!(lhs, rhs, "{t}/{h}: [{x:?}, c({y:?})]");
                }
            }
        }
    }

    #[test]
    fn h_action_rejects_p_generators() {
        let (pair, cb, spin) = setup("A2", "bds:0");
        let p_root = spin.p_indices[0];
        assert!(h_action_on_spin(&pair, &cb, &spin, Gen::E(p_root)).is_err());
    }

    #[test]
    fn cubic_element_vanishes_when_brackets_leave_p() {
        let (_, cb, spin) = full_setup("B2");
        assert!(cubic_element(&cb, &spin).is_zero());
        let (_, cb, spin) = setup("A1", "cartan");
        assert!(cubic_element(&cb, &spin).is_zero(), "bracket lands in t");
        // Symmetric pairs have [p, p] inside h, so the restricted 3-form
        // vanishes as well.
        for (t, h) in [("A2", "bds:0"), ("B2", "bds:1")] {
            let (_, cb, spin) = setup(t, h);
            assert!(cubic_element(&cb, &spin).is_zero(), "{t}/{h}");
        }
    }

    #[test]
    fn cubic_squares_to_shifted_norm_on_full_flag_spinors() {
        // For the full flag pair, D = c(v) on V_0 (x) S, and its square on
        // a weight-mu line must be |rho|^2 - |mu|^2. The weight-zero space
        // pins the overall normalization of the cubic term.
        let (pair, cb, spin) = setup("A2", "cartan");
        let v = cubic_element(&cb, &spin);
        assert!(!v.is_zero());
        let cv = spin.act_element(&v);
        let sq = cv.mul(&cv);
        let rho_norm = pair.g.norm_sq(&pair.g.rho());
        for a in 0..spin.dim {
            for b in 0..spin.dim {
                let expected = if a == b {
                    &rho_norm - pair.g.norm_sq(&spin.weights[a])
                } else {
                    Rat::zero()
                };
                assert_eq!(*sq.get(a, b), expected, "c(v)^2 at ({a},{b})");
            }
        }
    }

    #[test]
    fn cubic_action_is_parity_odd() {
        // Non-symmetric pairs where the cubic element is genuinely nonzero.
        for (t, h) in [("G2", "bds:0"), ("A2", "cartan"), ("B2", "cartan")] {
            let (_, cb, spin) = setup(t, h);
            let v = cubic_element(&cb, &spin);
            assert!(!v.is_zero(), "{t}/{h} has a nonzero cubic element");
            let cv = spin.act_element(&v);
            for a in 0..spin.dim {
                for b in 0..spin.dim {
                    if spin.parity_odd[a] == spin.parity_odd[b] {
                        assert!(cv.get(a, b).is_zero(), "{t}/{h} parity-preserving entry");
                    }
                }
            }
        }
    }

    #[test]
    fn cubic_element_commutes_with_h_action() {
        let (pair, cb, spin) = setup("G2", "bds:0");
        let cv = spin.act_element(&cubic_element(&cb, &spin));
        for i in 0..pair.g.rank {
            let m = h_action_on_spin(&pair, &cb, &spin, Gen::H(i)).unwrap();
            assert_eq!(m.mul(&cv), cv.mul(&m));
        }
        for r in &pair.h_positive {
            let idx = pair.g.positive_root_index(r).unwrap();
            for g in [Gen::E(idx), Gen::F(idx)] {
                let m = h_action_on_spin(&pair, &cb, &spin, g).unwrap();
                assert_eq!(m.mul(&cv), cv.mul(&m));
            }
        }
    }
}
