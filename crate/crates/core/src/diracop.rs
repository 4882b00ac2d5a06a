//! The cubic Dirac operator on `V (x) S` as an exact rational matrix:
//! assembly from the dual p-bases, isotypic decomposition under the diagonal
//! h-action, the square's scalar law, and the exact kernel.
//!
//! The operator commutes with the diagonal Cartan action, so everything is
//! computed blockwise per diagonal weight; "kernel" is an exact null space.

use crate::chevalley::{build_irrep, ChevalleyBasis, Gen, RepModule};
use crate::characters::weyl_dim_h;
use crate::cliffordspin::{build_spin_module, cubic_element, h_action_on_spin, SpinModule};
use crate::error::{Error, Result};
use crate::matrix::{QMatrix, RowSpan};
use crate::multiplet::{multiplet, MultipletEntry};
use crate::ratio::{rat, Rat};
use crate::rootsystem::Weight;
use crate::subpair::EqualRankPair;
use num_traits::Zero;
use std::collections::BTreeMap;

/// The assembled operator together with the module data it acts on.
/// Tensor index `a * dim(S) + b` pairs module vector `a` with spinor `b`.
pub struct DiracOperator {
    pub pair: EqualRankPair,
    pub lambda: Weight,
    pub rep: RepModule,
    pub spin: SpinModule,
    pub matrix: QMatrix,
    /// Parity of each tensor basis element (from the spinor side).
    pub parity_odd: Vec<bool>,
    /// Diagonal h-weight of each tensor basis element.
    pub diag_weights: Vec<Weight>,
    /// Diagonal action of the raising/lowering generators of h.
    diag_h: BTreeMap<Gen, QMatrix>,
}

/// Builds the operator `sum_i r(X_i) (x) c(X_i*) + 1 (x) c(v)` over the
/// mixed basis of p with its dual.
pub fn build_dirac(
    pair: &EqualRankPair,
    cb: &ChevalleyBasis,
    lambda: &Weight,
    cap: usize,
) -> Result<DiracOperator> {
    let spin = build_spin_module(pair, cb)?;
    let vdim = crate::characters::weyl_dim(&pair.g, lambda)? as usize;
    let total = vdim * spin.dim;
    if total > cap {
        return Err(Error::DimensionCap { needed: total, cap });
    }
    let rep = build_irrep(cb, lambda, cap)?;

    let mut matrix = QMatrix::zeros(total, total);
    for &root_idx in &spin.p_indices {
        // X = e_beta has dual f_beta / <e,f>, and symmetrically.
        let t = cb.pairing(Gen::E(root_idx), Gen::F(root_idx));
        let inv = rat(1) / &t;
        let term_e = rep
            .act(Gen::E(root_idx))
            .kron(&spin.gamma[&Gen::F(root_idx)]);
        let term_f = rep
            .act(Gen::F(root_idx))
            .kron(&spin.gamma[&Gen::E(root_idx)]);
        matrix = matrix.add(&term_e.add(&term_f).scale(&inv));
    }
    let v = cubic_element(cb, &spin);
    if !v.is_zero() {
        let cv = spin.act_element(&v);
        matrix = matrix.add(&QMatrix::identity(rep.dim).kron(&cv));
    }

    let mut parity_odd = Vec::with_capacity(total);
    let mut diag_weights = Vec::with_capacity(total);
    for a in 0..rep.dim {
        for b in 0..spin.dim {
            parity_odd.push(spin.parity_odd[b]);
            diag_weights.push(rep.basis_weights[a].add(&spin.weights[b]));
        }
    }

    let mut diag_h = BTreeMap::new();
    for beta in &pair.h_simple {
        let idx = pair
            .g
            .positive_root_index(beta)
            .ok_or_else(|| Error::Internal("h-simple root missing".into()))?;
        for g in [Gen::E(idx), Gen::F(idx)] {
            let on_spin = h_action_on_spin(pair, cb, &spin, g)?;
            let m = rep
                .act(g)
                .kron(&QMatrix::identity(spin.dim))
                .add(&QMatrix::identity(rep.dim).kron(&on_spin));
            diag_h.insert(g, m);
        }
    }

    Ok(DiracOperator {
        pair: pair.clone(),
        lambda: lambda.clone(),
        rep,
        spin,
        matrix,
        parity_odd,
        diag_weights,
        diag_h,
    })
}

/// One isotypic component of the diagonal h-action.
pub struct IsotypicBlock {
    pub mu: Weight,
    pub mult: usize,
    /// Columns span the component inside `V (x) S`.
    pub basis: QMatrix,
}

pub struct SquareBlock {
    pub mu: Weight,
    pub mult: usize,
    pub expected: Rat,
    pub scalar_ok: bool,
}

pub struct SquareReport {
    pub blocks: Vec<SquareBlock>,
    pub all_ok: bool,
}

pub struct KernelLabel {
    pub mu: Weight,
    pub sign: i64,
    pub parity_odd: bool,
    pub dim: usize,
}

pub struct KernelReport {
    pub dim_v: usize,
    pub dim_s: usize,
    pub dim_kernel: usize,
    /// Columns form an exact basis of the kernel.
    pub basis: QMatrix,
    /// One label per multiplet entry, in coset order.
    pub labels: Vec<KernelLabel>,
}

pub struct SelfAdjointReport {
    pub rank_d: usize,
    pub rank_d_squared: usize,
    pub kernel_equals_square_kernel: bool,
}

impl DiracOperator {
    pub fn total_dim(&self) -> usize {
        self.matrix.rows
    }

    /// Tensor indices grouped by diagonal weight, in weight order.
    pub fn weight_blocks(&self) -> Vec<(Weight, Vec<usize>)> {
        let mut map: BTreeMap<Weight, Vec<usize>> = BTreeMap::new();
        for (i, w) in self.diag_weights.iter().enumerate() {
            map.entry(w.clone()).or_default().push(i);
        }
        map.into_iter().collect()
    }

    /// The diagonal scalar the squared operator must take on a
    /// `U_mu`-isotypic block.
    pub fn square_scalar(&self, mu: &Weight) -> Rat {
        let g = &self.pair.g;
        g.norm_sq(&self.lambda.add(&g.rho())) - g.norm_sq(&mu.add(&self.pair.rho_h))
    }

    /// Simultaneous highest-weight decomposition for the diagonal h-action.
    /// Blocks are ordered by decreasing `<mu + rho_h, rho_h>`, ties broken
    /// lexicographically (the branching order).
    pub fn isotypic_decompose(&self) -> Result<Vec<IsotypicBlock>> {
        let blocks = self.weight_blocks();
        let index_of: BTreeMap<Weight, usize> = blocks
            .iter()
            .enumerate()
            .map(|(i, (w, _))| (w.clone(), i))
            .collect();
        let n = self.total_dim();
        let mut out = Vec::new();
        for (mu, indices) in &blocks {
            if !self.pair.is_h_dominant(mu) {
                continue;
            }
            // Highest-weight vectors: annihilated by every raising h-root.
            let mut stacked: Vec<QMatrix> = Vec::new();
            for beta in &self.pair.h_simple {
                let idx = self.pair.g.positive_root_index(beta).unwrap();
                let raise = &self.diag_h[&Gen::E(idx)];
                let target = mu.add(beta);
                let rows: Vec<usize> = match index_of.get(&target) {
                    Some(&bi) => blocks[bi].1.clone(),
                    None => Vec::new(),
                };
                if rows.is_empty() {
                    continue;
                }
                stacked.push(raise.select(&rows, indices));
            }
            let hw = if stacked.is_empty() {
                QMatrix::identity(indices.len())
            } else {
                let refs: Vec<&QMatrix> = stacked.iter().collect();
                QMatrix::vstack(&refs).null_space()
            };
            if hw.cols == 0 {
                continue;
            }
            // Close the highest-weight span under the lowering operators.
            let mut span = RowSpan::new();
            let mut frontier: Vec<Vec<Rat>> = Vec::new();
            for c in 0..hw.cols {
                let mut full = vec![Rat::zero(); n];
                for (r, &gi) in indices.iter().enumerate() {
                    full[gi] = hw.get(r, c).clone();
                }
                if span.insert(full.clone()) {
                    frontier.push(full);
                }
            }
            while let Some(vcur) = frontier.pop() {
                for beta in &self.pair.h_simple {
                    let idx = self.pair.g.positive_root_index(beta).unwrap();
                    let lower = &self.diag_h[&Gen::F(idx)];
                    let img = lower.mul_vec(&vcur);
                    if img.iter().all(|x| x.is_zero()) {
                        continue;
                    }
                    if span.insert(img.clone()) {
                        frontier.push(img);
                    }
                }
            }
            let rows = span.basis_rows();
            let mut basis = QMatrix::zeros(n, rows.len());
            for (c, row) in rows.iter().enumerate() {
                for (r, x) in row.iter().enumerate() {
                    if !x.is_zero() {
                        basis.set(r, c, x.clone());
                    }
                }
            }
            out.push(IsotypicBlock {
                mu: mu.clone(),
                mult: hw.cols,
                basis,
            });
        }
        // Account for every tensor dimension exactly once.
        let mut covered = 0usize;
        for b in &out {
            let udim = weyl_dim_h(&self.pair, &b.mu)? as usize;
            if b.basis.cols != b.mult * udim {
                return Err(Error::Internal(format!(
                    "isotypic block {} spans {} columns, expected {}",
                    b.mu,
                    b.basis.cols,
                    b.mult * udim
                )));
            }
            covered += b.basis.cols;
        }
        if covered != n {
            return Err(Error::Internal(format!(
                "isotypic blocks cover {covered} of {n} dimensions"
            )));
        }
        let key = |mu: &Weight| {
            self.pair
                .g
                .inner(&mu.add(&self.pair.rho_h), &self.pair.rho_h)
        };
        out.sort_by(|a, b| key(&b.mu).cmp(&key(&a.mu)).then_with(|| a.mu.cmp(&b.mu)));
        Ok(out)
    }

    /// Verifies that the squared operator is the exact scalar
    /// `|lambda+rho_g|^2 - |mu+rho_h|^2` on every isotypic block.
    pub fn square_check(&self) -> Result<SquareReport> {
        let d2 = self.matrix.mul(&self.matrix);
        let mut blocks = Vec::new();
        let mut all_ok = true;
        for b in self.isotypic_decompose()? {
            let expected = self.square_scalar(&b.mu);
            let image = d2.mul(&b.basis);
            let scalar_ok = image == b.basis.scale(&expected);
            all_ok &= scalar_ok;
            blocks.push(SquareBlock {
                mu: b.mu,
                mult: b.mult,
                expected,
                scalar_ok,
            });
        }
        Ok(SquareReport { blocks, all_ok })
    }

    /// Exact null space with its multiplet labeling. Errors if the kernel
    /// content deviates from the signed multiplet (that would falsify the
    /// kernel law, not the input).
    pub fn kernel(&self) -> Result<KernelReport> {
        let n = self.total_dim();
        let blocks = self.weight_blocks();
        let mut basis_cols: Vec<Vec<Rat>> = Vec::new();
        for (_, indices) in &blocks {
            let sub = self.matrix.select(indices, indices);
            let ns = sub.null_space();
            for c in 0..ns.cols {
                let mut full = vec![Rat::zero(); n];
                for (r, &gi) in indices.iter().enumerate() {
                    full[gi] = ns.get(r, c).clone();
                }
                basis_cols.push(full);
            }
        }
        let dim_kernel = basis_cols.len();
        let mut basis = QMatrix::zeros(n, dim_kernel);
        for (c, col) in basis_cols.iter().enumerate() {
            for (r, x) in col.iter().enumerate() {
                if !x.is_zero() {
                    basis.set(r, c, x.clone());
                }
            }
        }

        let entries: Vec<MultipletEntry> = multiplet(&self.pair, &self.lambda)?;
        let isotypic = self.isotypic_decompose()?;
        let mut labels = Vec::new();
        let mut expected_total = 0usize;
        for e in &entries {
            let block = isotypic
                .iter()
                .find(|b| b.mu == e.mu)
                .ok_or_else(|| Error::Internal(format!("multiplet label {} absent", e.mu)))?;
            if block.mult != 1 {
                return Err(Error::Internal(format!(
                    "label {} has multiplicity {}, expected one",
                    e.mu, block.mult
                )));
            }
            if !self.matrix.mul(&block.basis).is_zero() {
                return Err(Error::Internal(format!(
                    "isotypic block {} is not annihilated",
                    e.mu
                )));
            }
            // The component must live in a single parity, matching sign(c).
            let want_odd = e.sign < 0;
            for c in 0..block.basis.cols {
                for r in 0..n {
                    if !block.basis.get(r, c).is_zero() && self.parity_odd[r] != want_odd {
                        return Err(Error::Internal(format!(
                            "label {} mixes parity against its sign",
                            e.mu
                        )));
                    }
                }
            }
            let dim = block.basis.cols;
            expected_total += dim;
            labels.push(KernelLabel {
                mu: e.mu.clone(),
                sign: e.sign,
                parity_odd: want_odd,
                dim,
            });
        }
        if expected_total != dim_kernel {
            return Err(Error::Internal(format!(
                "kernel dimension {dim_kernel} does not match multiplet total {expected_total}"
            )));
        }
        Ok(KernelReport {
            dim_v: self.rep.dim,
            dim_s: self.spin.dim,
            dim_kernel,
            basis,
            labels,
        })
    }

    /// Finite-dimensional consequence of formal self-adjointness:
    /// `rank D = rank D^2`, i.e. `Ker D = Ker D^2`.
    pub fn self_adjointness_proxy(&self) -> SelfAdjointReport {
        let blocks = self.weight_blocks();
        let mut rank_d = 0;
        let mut rank_d2 = 0;
        for (_, indices) in &blocks {
            let sub = self.matrix.select(indices, indices);
            rank_d += sub.rank();
            rank_d2 += sub.mul(&sub).rank();
        }
        SelfAdjointReport {
            rank_d,
            rank_d_squared: rank_d2,
            kernel_equals_square_kernel: rank_d == rank_d2,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chevalley::chevalley_basis;
    use crate::rootsystem::{build_root_system, LieType};
    use crate::subpair::{build_subpair, HSpec};

    fn dirac(t: &str, h: &str, lam: &[i64]) -> DiracOperator {
        let d = build_root_system(&LieType::parse(t).unwrap()).unwrap();
        let pair = build_subpair(&d, &HSpec::parse(h).unwrap()).unwrap();
        let cb = chevalley_basis(&d).unwrap();
        build_dirac(&pair, &cb, &Weight::from_i64(lam), 500).unwrap()
    }

    fn dirac_full(t: &str, lam: &[i64]) -> DiracOperator {
        let d = build_root_system(&LieType::parse(t).unwrap()).unwrap();
        let all: Vec<usize> = (0..d.positive_roots.len()).collect();
        let pair = build_subpair(&d, &HSpec::Roots(all)).unwrap();
        let cb = chevalley_basis(&d).unwrap();
        build_dirac(&pair, &cb, &Weight::from_i64(lam), 500).unwrap()
    }

    #[test]
    fn full_pair_operator_is_zero() {
        let op = dirac_full("A2", &[1, 0]);
        assert!(op.matrix.is_zero());
        let k = op.kernel().unwrap();
        assert_eq!(k.dim_kernel, 3);
        assert_eq!(k.labels.len(), 1);
        assert_eq!(k.labels[0].sign, 1);
        // The square is the scalar zero on the single isotypic block.
        let sq = op.square_check().unwrap();
        assert!(sq.all_ok);
        assert!(sq.blocks.iter().all(|b| b.expected.is_zero()));
    }

    #[test]
    fn a1_cartan_trivial_weight_is_zero_operator() {
        let op = dirac("A1", "cartan", &[0]);
        assert!(op.matrix.is_zero());
        assert_eq!(op.total_dim(), 2);
    }

    #[test]
    fn a1_cartan_fundamental_matches_hand_computation() {
        // Hand oracle: the 4x4 operator has a two-dimensional kernel
        // spanned by (top vector, vacuum) and (bottom vector, full wedge).
        let op = dirac("A1", "cartan", &[1]);
        assert_eq!(op.total_dim(), 4);
        assert!(!op.matrix.is_zero());
        let k = op.kernel().unwrap();
        assert_eq!(k.dim_kernel, 2);
        assert_eq!(k.labels.len(), 2);
        assert_eq!(k.labels[0].mu, Weight::from_i64(&[2]));
        assert_eq!(k.labels[0].sign, 1);
        assert!(!k.labels[0].parity_odd);
        assert_eq!(k.labels[1].mu, Weight::from_i64(&[-2]));
        assert_eq!(k.labels[1].sign, -1);
        assert!(k.labels[1].parity_odd);
    }

    #[test]
    fn operator_is_parity_odd_and_weight_preserving() {
        for (t, h, lam) in [("A2", "bds:0", vec![1, 0]), ("B2", "bds:1", vec![0, 1])] {
            let op = dirac(t, h, &lam);
            for i in 0..op.total_dim() {
                for j in 0..op.total_dim() {
                    if op.matrix.get(i, j).is_zero() {
                        continue;
                    }
                    assert_ne!(op.parity_odd[i], op.parity_odd[j], "parity preserved");
                    assert_eq!(op.diag_weights[i], op.diag_weights[j], "weight changed");
                }
            }
        }
    }

    #[test]
    fn operator_commutes_with_diagonal_h_action() {
        for (t, h, lam) in [("A2", "bds:0", vec![1, 0]), ("B2", "bds:1", vec![1, 0])] {
            let op = dirac(t, h, &lam);
            for m in op.diag_h.values() {
                assert_eq!(op.matrix.mul(m), m.mul(&op.matrix), "{t}/{h}");
            }
        }
    }

    #[test]
    fn square_scalars_match_shifted_norms() {
        for (t, h, lam) in [
            ("A1", "cartan", vec![0]),
            ("A1", "cartan", vec![3]),
            ("A2", "bds:0", vec![1, 0]),
            ("A2", "cartan", vec![1, 0]),
            ("B2", "bds:1", vec![0, 1]),
            ("G2", "bds:0", vec![0, 0]),
            ("G2", "bds:1", vec![0, 0]),
        ] {
            let op = dirac(t, h, &lam);
            let report = op.square_check().unwrap();
            assert!(report.all_ok, "{t}/{h} lambda {lam:?}");
        }
    }

    #[test]
    fn square_zero_blocks_are_exactly_the_multiplet() {
        let op = dirac("A2", "bds:0", &[1, 0]);
        let report = op.square_check().unwrap();
        let entries = multiplet(&op.pair, &op.lambda).unwrap();
        for b in &report.blocks {
            let in_multiplet = entries.iter().any(|e| e.mu == b.mu);
            assert_eq!(b.expected.is_zero(), in_multiplet, "mu = {}", b.mu);
        }
        assert_eq!(
            report.blocks.iter().filter(|b| b.expected.is_zero()).count(),
            entries.len()
        );
    }

    #[test]
    fn isotypic_multiplicity_one_for_multiplet_labels() {
        let op = dirac("A2", "bds:0", &[1, 0]);
        let iso = op.isotypic_decompose().unwrap();
        for e in multiplet(&op.pair, &op.lambda).unwrap() {
            let b = iso.iter().find(|b| b.mu == e.mu).unwrap();
            assert_eq!(b.mult, 1);
        }
        // Cartan pair: every block is a torus character.
        let op = dirac("A1", "cartan", &[2]);
        let iso = op.isotypic_decompose().unwrap();
        let total: usize = iso.iter().map(|b| b.basis.cols).sum();
        assert_eq!(total, op.total_dim());
    }

    #[test]
    fn kernel_dimension_matches_multiplet_dimensions() {
        for (t, h, lam) in [
            ("A2", "bds:0", vec![1, 0]),
            ("B2", "bds:1", vec![0, 1]),
            ("G2", "bds:0", vec![0, 0]),
        ] {
            let op = dirac(t, h, &lam);
            let k = op.kernel().unwrap();
            let expected: i64 = multiplet(&op.pair, &op.lambda)
                .unwrap()
                .iter()
                .map(|e| weyl_dim_h(&op.pair, &e.mu).unwrap())
                .sum();
            assert_eq!(k.dim_kernel as i64, expected, "{t}/{h}");
            // Every basis column is genuinely annihilated.
            assert!(op.matrix.mul(&k.basis).is_zero());
        }
    }

    #[test]
    fn spin_isotypic_structure_matches_character_branching() {
        // With trivial V, the diagonal h-action on V (x) S is the spin
        // h-action, so the isotypic decomposition must agree with the
        // branching of the spinor character.
        use crate::characters::{decompose_h, spinor_character, SpinPart};
        for (t, h) in [("A2", "bds:0"), ("B2", "bds:1"), ("G2", "bds:0")] {
            let op = dirac(t, h, &[0, 0]);
            let iso = op.isotypic_decompose().unwrap();
            let full = spinor_character(&op.pair, SpinPart::Full);
            let dec = decompose_h(&op.pair, &full).unwrap();
            assert_eq!(iso.len(), dec.len(), "{t}/{h}");
            for (block, (mu, mult)) in iso.iter().zip(&dec) {
                assert_eq!(&block.mu, mu, "{t}/{h}");
                assert_eq!(block.mult as i64, *mult, "{t}/{h}");
            }
        }
    }

    #[test]
    fn self_adjointness_proxy_holds() {
        for (t, h, lam) in [
            ("A1", "cartan", vec![1]),
            ("A2", "bds:0", vec![1, 0]),
            ("B2", "bds:1", vec![1, 0]),
        ] {
            let op = dirac(t, h, &lam);
            let r = op.self_adjointness_proxy();
            assert!(r.kernel_equals_square_kernel, "{t}/{h}");
        }
    }

    #[test]
    fn dimension_cap_respected() {
        let d = build_root_system(&LieType::parse("G2").unwrap()).unwrap();
        let pair = build_subpair(&d, &HSpec::Bds(1)).unwrap();
        let cb = chevalley_basis(&d).unwrap();
        let err = build_dirac(&pair, &cb, &Weight::from_i64(&[2, 0]), 400);
        assert!(matches!(err, Err(Error::DimensionCap { .. })));
    }
}
