//! Integer structure constants for g and explicit matrices for irreducible
//! modules.
//!
//! Structure constants use the extraspecial-pair sign convention: for each
//! positive root that is a sum, the constant of its minimal decomposition is
//! fixed positive, and every other constant follows from the standard
//! relations. The Jacobi identity is verifiable on every basis triple.
//!
//! Modules are built from a highest-weight vector by simple lowering
//! operators; independence inside each weight space is decided exactly with
//! the contravariant form, which doubles as the coordinate system.

use crate::characters::{irrep_character, weyl_dim};
use crate::error::{Error, Result};
use crate::matrix::QMatrix;
use crate::ratio::{rat, rat_to_i64, Rat};
use crate::rootsystem::{RootDatum, Weight};
use num_traits::Zero;
use std::collections::{BTreeMap, HashMap};

/// Basis generator of g: root vectors for positive roots (E up, F down)
/// and the coroot Cartan elements H.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Gen {
    E(usize),
    F(usize),
    H(usize),
}

/// Signed root id: `idx + 1` for a positive root, negated for its opposite.
type Sid = i64;

fn sid_pos(idx: usize) -> Sid {
    idx as i64 + 1
}

fn sid_idx(s: Sid) -> usize {
    (s.abs() - 1) as usize
}

/// Linear combination of basis generators with rational coefficients.
pub type Combo = BTreeMap<Gen, Rat>;

fn combo_add(acc: &mut Combo, g: Gen, c: Rat) {
    if c.is_zero() {
        return;
    }
    let e = acc.entry(g).or_insert_with(Rat::zero);
    *e += c;
    if e.is_zero() {
        acc.remove(&g);
    }
}

#[derive(Clone)]
pub struct ChevalleyBasis {
    pub d: RootDatum,
    /// Number of positive roots.
    pub num_positive: usize,
    /// Structure constants `N(sigma, tau)` for all root pairs whose sum is
    /// a root, keyed by signed root ids.
    n_table: HashMap<(Sid, Sid), i64>,
    /// Full bracket table over the generator basis.
    brackets: HashMap<(Gen, Gen), Vec<(Gen, Rat)>>,
}

impl ChevalleyBasis {
    pub fn generators(&self) -> Vec<Gen> {
        let mut v = Vec::new();
        for i in 0..self.num_positive {
            v.push(Gen::E(i));
            v.push(Gen::F(i));
        }
        for i in 0..self.d.rank {
            v.push(Gen::H(i));
        }
        v
    }

    /// Structure constant `N(sigma, tau)` with `[x_sigma, x_tau] =
    /// N(sigma,tau) x_{sigma+tau}`; zero when the sum is not a root.
    pub fn n_value(&self, s1: Sid, s2: Sid) -> i64 {
        self.n_table.get(&(s1, s2)).copied().unwrap_or(0)
    }

    pub fn bracket_gens(&self, x: Gen, y: Gen) -> &[(Gen, Rat)] {
        self.brackets
            .get(&(x, y))
            .map(|v| v.as_slice())
            .unwrap_or(&[])
    }

    /// Bracket of linear combinations.
    pub fn bracket(&self, x: &Combo, y: &Combo) -> Combo {
        let mut out = Combo::new();
        for (gx, cx) in x {
            for (gy, cy) in y {
                for (g, c) in self.bracket_gens(*gx, *gy) {
                    combo_add(&mut out, *g, cx * cy * c);
                }
            }
        }
        out
    }

    /// Invariant form on the generator basis, normalized by
    /// `<e_a, f_a> = 2 / <alpha_a, alpha_a>`.
    pub fn pairing(&self, x: Gen, y: Gen) -> Rat {
        match (x, y) {
            (Gen::E(a), Gen::F(b)) | (Gen::F(b), Gen::E(a)) if a == b => {
                rat(2) / self.d.norm_sq(&self.d.positive_roots[a])
            }
            (Gen::H(i), Gen::H(j)) => {
                let si = self.d.simple_root(i);
                let sj = self.d.simple_root(j);
                rat(4) * self.d.inner(si, sj)
                    / (&self.d.simple_norms[i] * &self.d.simple_norms[j])
            }
            _ => Rat::zero(),
        }
    }

    /// Weight of a root generator; Cartan elements have weight zero.
    pub fn weight_of(&self, g: Gen) -> Weight {
        match g {
            Gen::E(a) => self.d.positive_roots[a].clone(),
            Gen::F(a) => self.d.positive_roots[a].neg(),
            Gen::H(_) => Weight::zero(self.d.rank),
        }
    }

    /// Verifies the Jacobi identity on every unordered triple of basis
    /// generators.
    pub fn verify_jacobi(&self) -> Result<()> {
        let gens = self.generators();
        let singles: Vec<Combo> = gens
            .iter()
            .map(|&g| {
                let mut c = Combo::new();
                c.insert(g, rat(1));
                c
            })
            .collect();
        for i in 0..gens.len() {
            for j in (i + 1)..gens.len() {
                for k in (j + 1)..gens.len() {
                    let mut acc = Combo::new();
                    for (g, c) in self.bracket(&singles[i], &self.bracket(&singles[j], &singles[k]))
                    {
                        combo_add(&mut acc, g, c);
                    }
                    for (g, c) in self.bracket(&singles[j], &self.bracket(&singles[k], &singles[i]))
                    {
                        combo_add(&mut acc, g, c);
                    }
                    for (g, c) in self.bracket(&singles[k], &self.bracket(&singles[i], &singles[j]))
                    {
                        combo_add(&mut acc, g, c);
                    }
                    if !acc.is_empty() {
                        return Err(Error::Internal(format!(
                            "Jacobi failure on triple {:?} {:?} {:?}",
                            gens[i], gens[j], gens[k]
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// Coefficients of the coroot of positive root `idx` in the H basis.
    pub fn coroot_coeffs(&self, idx: usize) -> Vec<i64> {
        let norm = self.d.norm_sq(&self.d.positive_roots[idx]);
        self.d.root_coords[idx]
            .iter()
            .enumerate()
            .map(|(j, &a)| {
                let c = rat(a) * &self.d.simple_norms[j] / &norm;
                rat_to_i64(&c).expect("integral coroot coefficient")
            })
            .collect()
    }
}

/// Builds the Chevalley basis: structure constants via extraspecial pairs,
/// then the complete bracket table.
pub fn chevalley_basis(d: &RootDatum) -> Result<ChevalleyBasis> {
    let m = d.positive_roots.len();
    let weight_of = |s: Sid| -> Weight {
        let w = d.positive_roots[sid_idx(s)].clone();
        if s < 0 {
            w.neg()
        } else {
            w
        }
    };
    let sid_of_weight = |w: &Weight| -> Option<Sid> {
        if let Some(i) = d.positive_root_index(w) {
            Some(sid_pos(i))
        } else {
            d.positive_root_index(&w.neg()).map(|i| -sid_pos(i))
        }
    };
    let root_sum = |a: Sid, b: Sid| -> Option<Sid> {
        let w = weight_of(a).add(&weight_of(b));
        if w.is_zero() {
            None
        } else {
            sid_of_weight(&w)
        }
    };
    // p(a, b): largest p with b - p*a a root.
    let p_value = |a: Sid, b: Sid| -> i64 {
        let wa = weight_of(a);
        let mut w = weight_of(b);
        let mut p = 0;
        loop {
            w = w.sub(&wa);
            if !w.is_zero() && sid_of_weight(&w).is_some() {
                p += 1;
            } else {
                return p;
            }
        }
    };
    let norm_of = |s: Sid| -> Rat { d.norm_sq(&d.positive_roots[sid_idx(s)]) };

    // Special pairs per sum root, in the fixed positive-root order.
    let mut special: Vec<Vec<(usize, usize)>> = vec![Vec::new(); m];
    for a in 0..m {
        for b in (a + 1)..m {
            if let Some(s) = root_sum(sid_pos(a), sid_pos(b)) {
                if s > 0 {
                    special[sid_idx(s)].push((a, b));
                }
            }
        }
    }
    for pairs in &mut special {
        pairs.sort();
    }

    // Constants for positive special pairs, filled in root order (heights
    // increase along the order, so every reference looks backward).
    let mut pos_table: HashMap<(usize, usize), i64> = HashMap::new();
    // n for arbitrary signed pairs in terms of the positive table.
    fn n_signed(
        pos_table: &HashMap<(usize, usize), i64>,
        root_sum: &dyn Fn(Sid, Sid) -> Option<Sid>,
        norm_of: &dyn Fn(Sid) -> Rat,
        s1: Sid,
        s2: Sid,
    ) -> Rat {
        let Some(s) = root_sum(s1, s2) else {
            return Rat::zero();
        };
        let n_pos = |a: usize, b: usize| -> Rat {
            use std::cmp::Ordering::*;
            match a.cmp(&b) {
                Less => rat(*pos_table.get(&(a, b)).expect("positive pair filled")),
                Greater => -rat(*pos_table.get(&(b, a)).expect("positive pair filled")),
                Equal => unreachable!("2*root is never a root"),
            }
        };
        match (s1 > 0, s2 > 0) {
            (true, true) => n_pos(sid_idx(s1), sid_idx(s2)),
            (false, false) => -n_signed(pos_table, root_sum, norm_of, -s1, -s2),
            (true, false) => {
                // s1 + s2 + (-s) = 0: relate to a pair of equal signs.
                if s > 0 {
                    // N(s1,s2) = |s|^2/|s1|^2 * N(s2, -s) with both negative.
                    let f = norm_of(s) / norm_of(s1);
                    f * -n_pos(sid_idx(s2), sid_idx(s))
                } else {
                    // N(s1,s2) = |s|^2/|s2|^2 * N(-s, s1) with both positive.
                    let f = norm_of(s) / norm_of(s2);
                    f * n_pos(sid_idx(s), sid_idx(s1))
                }
            }
            (false, true) => -n_signed(pos_table, root_sum, norm_of, s2, s1),
        }
    }

    for g_idx in 0..m {
        let pairs = special[g_idx].clone();
        if pairs.is_empty() {
            continue;
        }
        let (eps, eta) = pairs[0];
        let p = p_value(sid_pos(eps), sid_pos(eta));
        pos_table.insert((eps, eta), p + 1);
        for &(a, b) in pairs.iter().skip(1) {
            // Four roots eps + eta - a - b = 0; expand the standard
            // four-term relation and solve for N(a, b).
            let gamma_norm = norm_of(sid_pos(g_idx));
            let mut t = Rat::zero();
            if let Some(diff) = root_sum(sid_pos(eta), -sid_pos(a)) {
                let n1 = n_signed(&pos_table, &root_sum, &norm_of, sid_pos(eta), -sid_pos(a));
                let n2 = n_signed(&pos_table, &root_sum, &norm_of, sid_pos(eps), -sid_pos(b));
                t += n1 * n2 / norm_of(diff);
            }
            if let Some(diff) = root_sum(-sid_pos(a), sid_pos(eps)) {
                let n1 = n_signed(&pos_table, &root_sum, &norm_of, -sid_pos(a), sid_pos(eps));
                let n2 = n_signed(&pos_table, &root_sum, &norm_of, sid_pos(eta), -sid_pos(b));
                t += n1 * n2 / norm_of(diff);
            }
            let n_eps_eta = rat(*pos_table.get(&(eps, eta)).unwrap());
            let val = gamma_norm * t / n_eps_eta;
            let val = rat_to_i64(&val)
                .ok_or_else(|| Error::Internal("non-integral structure constant".into()))?;
            pos_table.insert((a, b), val);
        }
    }

    // Complete signed table.
    let mut n_table: HashMap<(Sid, Sid), i64> = HashMap::new();
    let mut sids: Vec<Sid> = Vec::new();
    for i in 0..m {
        sids.push(sid_pos(i));
        sids.push(-sid_pos(i));
    }
    for &a in &sids {
        for &b in &sids {
            if root_sum(a, b).is_some() {
                let v = n_signed(&pos_table, &root_sum, &norm_of, a, b);
                let v = rat_to_i64(&v)
                    .ok_or_else(|| Error::Internal("non-integral structure constant".into()))?;
                n_table.insert((a, b), v);
            }
        }
    }

    // Bracket table over the generator basis.
    let cb_partial = ChevalleyBasis {
        d: d.clone(),
        num_positive: m,
        n_table,
        brackets: HashMap::new(),
    };
    let mut brackets: HashMap<(Gen, Gen), Vec<(Gen, Rat)>> = HashMap::new();
    let gens = cb_partial.generators();
    let gen_sid = |g: Gen| -> Option<Sid> {
        match g {
            Gen::E(a) => Some(sid_pos(a)),
            Gen::F(a) => Some(-sid_pos(a)),
            Gen::H(_) => None,
        }
    };
    let gen_of_sid = |s: Sid| -> Gen {
        if s > 0 {
            Gen::E(sid_idx(s))
        } else {
            Gen::F(sid_idx(s))
        }
    };
    for &x in &gens {
        for &y in &gens {
            let mut out: Vec<(Gen, Rat)> = Vec::new();
            match (gen_sid(x), gen_sid(y)) {
                (None, None) => {}
                (None, Some(sy)) => {
                    // [H_i, x_b] = <root_b, alpha_i-coroot> x_b.
                    let Gen::H(i) = x else { unreachable!() };
                    let w = cb_partial.weight_of(y);
                    let c = w.0[i].clone();
                    let _ = sy;
                    if !c.is_zero() {
                        out.push((y, c));
                    }
                }
                (Some(sx), None) => {
                    let Gen::H(i) = y else { unreachable!() };
                    let w = cb_partial.weight_of(x);
                    let c = -w.0[i].clone();
                    let _ = sx;
                    if !c.is_zero() {
                        out.push((x, c));
                    }
                }
                (Some(sx), Some(sy)) => {
                    if sx == -sy {
                        // [e_a, f_a] = coroot of a.
                        let idx = sid_idx(sx);
                        let coeffs = cb_partial.coroot_coeffs(idx);
                        let flip = if sx > 0 { 1 } else { -1 };
                        for (j, &c) in coeffs.iter().enumerate() {
                            if c != 0 {
                                out.push((Gen::H(j), rat(flip * c)));
                            }
                        }
                    } else {
                        let sum = cb_partial
                            .d
                            .positive_root_index(
                                &cb_partial.weight_of(x).add(&cb_partial.weight_of(y)),
                            )
                            .map(sid_pos)
                            .or_else(|| {
                                cb_partial
                                    .d
                                    .positive_root_index(
                                        &cb_partial
                                            .weight_of(x)
                                            .add(&cb_partial.weight_of(y))
                                            .neg(),
                                    )
                                    .map(|i| -sid_pos(i))
                            });
                        if let Some(s) = sum {
                            let n = cb_partial.n_value(sx, sy);
                            if n != 0 {
                                out.push((gen_of_sid(s), rat(n)));
                            }
                        }
                    }
                }
            }
            if !out.is_empty() {
                brackets.insert((x, y), out);
            }
        }
    }

    Ok(ChevalleyBasis {
        brackets,
        ..cb_partial
    })
}

/// An irreducible module with explicit exact action matrices for every
/// generator.
pub struct RepModule {
    pub lambda: Weight,
    pub dim: usize,
    pub basis_weights: Vec<Weight>,
    pub action: BTreeMap<Gen, QMatrix>,
}

impl RepModule {
    pub fn act(&self, g: Gen) -> &QMatrix {
        &self.action[&g]
    }

    /// Action matrix of a linear combination of generators.
    pub fn act_combo(&self, combo: &Combo) -> QMatrix {
        let mut out = QMatrix::zeros(self.dim, self.dim);
        for (g, c) in combo {
            out = out.add(&self.action[g].scale(c));
        }
        out
    }
}

struct Space {
    dim: usize,
    gram: QMatrix,
    /// For each basis vector: Some((simple index, parent index)) or None for
    /// the highest-weight vector.
    desc: Vec<Option<(usize, usize)>>,
    /// f-blocks into this space, per positive root index.
    f_in: HashMap<usize, QMatrix>,
    /// Simple e-blocks out of this space.
    e_out: HashMap<usize, QMatrix>,
}

struct Builder<'a> {
    cb: &'a ChevalleyBasis,
    spaces: HashMap<Weight, Space>,
}

impl<'a> Builder<'a> {
    fn dim_of(&self, w: &Weight) -> usize {
        self.spaces.get(w).map_or(0, |s| s.dim)
    }

    /// Block of the f-action for positive root `beta_idx` into `target`.
    fn f_block(&self, beta_idx: usize, target: &Weight) -> QMatrix {
        let source = target.add(&self.cb.d.positive_roots[beta_idx]);
        let rows = self.dim_of(target);
        let cols = self.dim_of(&source);
        match self.spaces.get(target).and_then(|s| s.f_in.get(&beta_idx)) {
            Some(b) => b.clone(),
            None => QMatrix::zeros(rows, cols),
        }
    }

    /// Block of the simple e-action out of `source`.
    fn e_block_simple(&self, i: usize, source: &Weight) -> QMatrix {
        let target = source.add(self.cb.d.simple_root(i));
        let rows = self.dim_of(&target);
        let cols = self.dim_of(source);
        match self.spaces.get(source).and_then(|s| s.e_out.get(&i)) {
            Some(b) => b.clone(),
            None => QMatrix::zeros(rows, cols),
        }
    }

    /// Block of the e-action for an arbitrary positive root out of `source`,
    /// derived from simple blocks through the bracket recursion.
    fn e_block(&self, beta_idx: usize, source: &Weight) -> QMatrix {
        let d = &self.cb.d;
        if beta_idx < d.rank {
            return self.e_block_simple(beta_idx, source);
        }
        let beta = &d.positive_roots[beta_idx];
        let (i, rest_idx) = split_root(d, beta_idx);
        let rest = &d.positive_roots[rest_idx];
        let n = self.cb.n_value(sid_pos(i), sid_pos(rest_idx));
        debug_assert!(n != 0);
        // [e_i, e_rest] applied from `source`.
        let t1 = self
            .e_block_simple(i, &source.add(rest))
            .mul(&self.e_block(rest_idx, source));
        let t2 = self
            .e_block(rest_idx, &source.add(d.simple_root(i)))
            .mul(&self.e_block_simple(i, source));
        let _ = beta;
        t1.sub(&t2).scale(&(rat(1) / rat(n)))
    }
}

/// First simple root whose removal from a non-simple positive root leaves a
/// positive root, with the remainder's index.
fn split_root(d: &RootDatum, beta_idx: usize) -> (usize, usize) {
    let beta = &d.positive_roots[beta_idx];
    for i in 0..d.rank {
        let rest = beta.sub(d.simple_root(i));
        if let Some(r) = d.positive_root_index(&rest) {
            return (i, r);
        }
    }
    unreachable!("non-simple positive root always splits")
}

/// Builds the irreducible module with highest weight `lambda`. Fails when
/// the dimension exceeds `cap`.
pub fn build_irrep(cb: &ChevalleyBasis, lambda: &Weight, cap: usize) -> Result<RepModule> {
    let d = &cb.d;
    let dim = weyl_dim(d, lambda)? as usize;
    if dim > cap {
        return Err(Error::DimensionCap { needed: dim, cap });
    }
    let ch = irrep_character(d, lambda)?;

    let mut weights: Vec<(Weight, usize)> = ch
        .iter()
        .map(|(w, m)| (w.clone(), *m as usize))
        .collect();
    weights.sort_by_key(|(w, _)| {
        let depth: Rat = d.to_root_coords(&lambda.sub(w)).iter().sum();
        (rat_to_i64(&depth).expect("integral depth"), w.clone())
    });

    let mut builder = Builder {
        cb,
        spaces: HashMap::new(),
    };

    for (nu, mult) in weights.iter() {
        if nu == lambda {
            let mut space = Space {
                dim: 1,
                gram: QMatrix::identity(1),
                desc: vec![None],
                f_in: HashMap::new(),
                e_out: HashMap::new(),
            };
            // No weights above lambda: e-blocks and f-ins are all zero.
            space.f_in.clear();
            builder.spaces.insert(nu.clone(), space);
            continue;
        }

        // Candidates: simple lowerings from the spaces one level up.
        // Pairings use only the defining contravariance on simple
        // generators: F(f_i u, f_j v) = F(u, f_j e_i v) + [i=j]<wt v, ai~> F(u,v).
        let mut cands: Vec<(usize, usize)> = Vec::new();
        for i in 0..d.rank {
            let up = nu.add(d.simple_root(i));
            for u in 0..builder.dim_of(&up) {
                cands.push((i, u));
            }
        }
        let pair_value = |b: &Builder, c1: &(usize, usize), c2: &(usize, usize)| -> Rat {
            let (i, u) = *c1;
            let (j, v) = *c2;
            let up_j = nu.add(d.simple_root(j));
            let up_i = nu.add(d.simple_root(i));
            // e_i(v) in space(up_j + alpha_i), then f_j back down to up_i.
            let e_iv = b.e_block_simple(i, &up_j);
            let f_j = b.f_block(j, &up_i);
            let y = f_j.mul(&e_iv);
            let gram_i = &b.spaces[&up_i].gram;
            let mut val = Rat::zero();
            for k in 0..y.rows {
                if !y.get(k, v).is_zero() {
                    val += gram_i.get(u, k) * y.get(k, v);
                }
            }
            if i == j {
                let scalar = up_j.0[i].clone();
                val += scalar * gram_i.get(u, v);
            }
            val
        };

        let mut kept: Vec<(usize, usize)> = Vec::new();
        let mut gram = QMatrix::zeros(0, 0);
        for c in &cands {
            if kept.len() == *mult {
                break;
            }
            let self_pair = pair_value(&builder, c, c);
            let cross: Vec<Rat> = kept.iter().map(|k| pair_value(&builder, k, c)).collect();
            let independent = if kept.is_empty() {
                !self_pair.is_zero()
            } else {
                let x = gram.solve(&cross).expect("kept Gram is nonsingular");
                let mut residual = self_pair.clone();
                for (xi, ci) in x.iter().zip(&cross) {
                    residual -= xi * ci;
                }
                !residual.is_zero()
            };
            if independent {
                let mut g2 = QMatrix::zeros(kept.len() + 1, kept.len() + 1);
                for a in 0..kept.len() {
                    for b2 in 0..kept.len() {
                        g2.set(a, b2, gram.get(a, b2).clone());
                    }
                }
                for (a, cr) in cross.iter().enumerate() {
                    g2.set(a, kept.len(), cr.clone());
                    g2.set(kept.len(), a, cr.clone());
                }
                g2.set(kept.len(), kept.len(), self_pair);
                gram = g2;
                kept.push(*c);
            }
        }
        if kept.len() != *mult {
            return Err(Error::Internal(format!(
                "weight space {nu} reached rank {} instead of {mult}",
                kept.len()
            )));
        }

        let mut space = Space {
            dim: *mult,
            gram: gram.clone(),
            desc: kept.iter().map(|&(i, u)| Some((i, u))).collect(),
            f_in: HashMap::new(),
            e_out: HashMap::new(),
        };

        // Simple f-blocks into nu: coordinates of f_i(u) via the Gram system.
        for i in 0..d.rank {
            let up = nu.add(d.simple_root(i));
            let cols = builder.dim_of(&up);
            if cols == 0 {
                continue;
            }
            let mut block = QMatrix::zeros(*mult, cols);
            for u in 0..cols {
                let rhs: Vec<Rat> = kept
                    .iter()
                    .map(|k| pair_value(&builder, k, &(i, u)))
                    .collect();
                let x = gram.solve(&rhs).expect("Gram is positive definite");
                for (r, xr) in x.iter().enumerate() {
                    block.set(r, u, xr.clone());
                }
            }
            space.f_in.insert(i, block);
        }
        builder.spaces.insert(nu.clone(), space);

        // Non-simple f-blocks into nu, by increasing root height so each
        // split refers to blocks already present.
        for beta_idx in d.rank..d.positive_roots.len() {
            let beta = &d.positive_roots[beta_idx];
            let up = nu.add(beta);
            if builder.dim_of(&up) == 0 {
                continue;
            }
            let (i, rest_idx) = split_root(d, beta_idx);
            let rest = &d.positive_roots[rest_idx];
            let n = cb.n_value(-sid_pos(i), -sid_pos(rest_idx));
            debug_assert!(n != 0);
            let t1 = builder
                .f_block(i, nu)
                .mul(&builder.f_block(rest_idx, &nu.add(d.simple_root(i))));
            let t2 = builder
                .f_block(rest_idx, nu)
                .mul(&builder.f_block(i, &nu.add(rest)));
            let block = t1.sub(&t2).scale(&(rat(1) / rat(n)));
            builder
                .spaces
                .get_mut(nu)
                .unwrap()
                .f_in
                .insert(beta_idx, block);
        }

        // Simple e-blocks out of nu.
        for i in 0..d.rank {
            let target = nu.add(d.simple_root(i));
            let rows = builder.dim_of(&target);
            if rows == 0 {
                continue;
            }
            let mut block = QMatrix::zeros(rows, *mult);
            for (col, desc) in builder.spaces[nu].desc.clone().iter().enumerate() {
                let (j, u) = desc.expect("only the top space holds the highest vector");
                let up_j = nu.add(d.simple_root(j));
                // e_i f_j u = f_j e_i u + [i=j] <wt u, alpha_i-coroot> u.
                let e_iu = builder.e_block_simple(i, &up_j).column(u);
                let f_j = builder.f_block(j, &target);
                let mut y = f_j.mul_vec(&e_iu);
                if i == j {
                    let scalar = up_j.0[i].clone();
                    y[u] += scalar;
                }
                for (r, yr) in y.iter().enumerate() {
                    block.set(r, col, yr.clone());
                }
            }
            builder
                .spaces
                .get_mut(nu)
                .unwrap()
                .e_out
                .insert(i, block);
        }
    }

    // Global assembly in processing order.
    let mut offsets: HashMap<Weight, usize> = HashMap::new();
    let mut basis_weights = Vec::with_capacity(dim);
    let mut running = 0usize;
    for (nu, _) in &weights {
        offsets.insert(nu.clone(), running);
        let k = builder.spaces[nu].dim;
        for _ in 0..k {
            basis_weights.push(nu.clone());
        }
        running += k;
    }
    debug_assert_eq!(running, dim);

    let mut action: BTreeMap<Gen, QMatrix> = BTreeMap::new();
    for i in 0..d.rank {
        let mut h = QMatrix::zeros(dim, dim);
        for (idx, w) in basis_weights.iter().enumerate() {
            h.set(idx, idx, w.0[i].clone());
        }
        action.insert(Gen::H(i), h);
    }
    for beta_idx in 0..d.positive_roots.len() {
        let beta = &d.positive_roots[beta_idx];
        let mut fm = QMatrix::zeros(dim, dim);
        let mut em = QMatrix::zeros(dim, dim);
        for (nu, _) in &weights {
            let up = nu.add(beta);
            if builder.dim_of(&up) == 0 {
                continue;
            }
            let fb = builder.f_block(beta_idx, nu);
            let (r0, c0) = (offsets[nu], offsets[&up]);
            for r in 0..fb.rows {
                for c in 0..fb.cols {
                    if !fb.get(r, c).is_zero() {
                        fm.set(r0 + r, c0 + c, fb.get(r, c).clone());
                    }
                }
            }
            let eb = builder.e_block(beta_idx, nu);
            for r in 0..eb.rows {
                for c in 0..eb.cols {
                    if !eb.get(r, c).is_zero() {
                        em.set(c0 + r, r0 + c, eb.get(r, c).clone());
                    }
                }
            }
        }
        action.insert(Gen::F(beta_idx), fm);
        action.insert(Gen::E(beta_idx), em);
    }

    Ok(RepModule {
        lambda: lambda.clone(),
        dim,
        basis_weights,
        action,
    })
}

/// Verifies `[r(X), r(Y)] = r([X, Y])` for every pair of basis generators.
pub fn verify_module_relations(cb: &ChevalleyBasis, rep: &RepModule) -> Result<()> {
    let gens = cb.generators();
    for &x in &gens {
        for &y in &gens {
            let rx = rep.act(x);
            let ry = rep.act(y);
            let lhs = rx.mul(ry).sub(&ry.mul(rx));
            let mut rhs = QMatrix::zeros(rep.dim, rep.dim);
            for (g, c) in cb.bracket_gens(x, y) {
                rhs = rhs.add(&rep.act(*g).scale(c));
            }
            if lhs != rhs {
                return Err(Error::Internal(format!(
                    "module relation failure on [{x:?}, {y:?}] for lambda = {}",
                    rep.lambda
                )));
            }
        }
    }
    Ok(())
}

/// The quadratic Casimir `sum_i r(X_i) r(X_i*)` over the generator basis of
/// g with its dual basis. Returns the scalar it acts by; errors if it is
/// not scalar.
pub fn casimir_scalar(cb: &ChevalleyBasis, rep: &RepModule) -> Result<Rat> {
    let d = &cb.d;
    let n = rep.dim;
    let mut total = QMatrix::zeros(n, n);
    for a in 0..cb.num_positive {
        let t = cb.pairing(Gen::E(a), Gen::F(a));
        let inv = rat(1) / t;
        let e = rep.act(Gen::E(a));
        let f = rep.act(Gen::F(a));
        total = total.add(&e.mul(f).scale(&inv));
        total = total.add(&f.mul(e).scale(&inv));
    }
    // Cartan block: dual basis via the Gram matrix of the coroots.
    let k = QMatrix::from_rows(
        (0..d.rank)
            .map(|i| {
                (0..d.rank)
                    .map(|j| cb.pairing(Gen::H(i), Gen::H(j)))
                    .collect()
            })
            .collect(),
    );
    for j in 0..d.rank {
        let mut e = vec![Rat::zero(); d.rank];
        e[j] = rat(1);
        let dual = k
            .solve(&e)
            .ok_or_else(|| Error::Internal("degenerate Cartan form".into()))?;
        let hj = rep.act(Gen::H(j));
        for (kidx, c) in dual.iter().enumerate() {
            if !c.is_zero() {
                total = total.add(&hj.mul(rep.act(Gen::H(kidx))).scale(c));
            }
        }
    }
    let scalar = total.get(0, 0).clone();
    for i in 0..n {
        for j in 0..n {
            let expected = if i == j { scalar.clone() } else { Rat::zero() };
            if *total.get(i, j) != expected {
                return Err(Error::Internal("Casimir is not scalar".into()));
            }
        }
    }
    Ok(scalar)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rootsystem::{build_root_system, LieType};

    fn basis(t: &str) -> ChevalleyBasis {
        let d = build_root_system(&LieType::parse(t).unwrap()).unwrap();
        chevalley_basis(&d).unwrap()
    }

    #[test]
    fn a1_is_the_standard_triple() {
        let cb = basis("A1");
        // [e, f] = h.
        assert_eq!(cb.bracket_gens(Gen::E(0), Gen::F(0)), &[(Gen::H(0), rat(1))]);
        // [h, e] = 2e.
        assert_eq!(cb.bracket_gens(Gen::H(0), Gen::E(0)), &[(Gen::E(0), rat(2))]);
        cb.verify_jacobi().unwrap();
    }

    #[test]
    fn a2_structure_constants_are_unit() {
        let cb = basis("A2");
        let n = cb.n_value(1, 2);
        assert_eq!(n.abs(), 1);
        // Extraspecial pair gets the positive sign.
        assert_eq!(n, 1);
        cb.verify_jacobi().unwrap();
    }

    #[test]
    fn g2_constants_bounded_by_three() {
        let cb = basis("G2");
        let m = cb.num_positive;
        let mut seen_two = false;
        let mut seen_three = false;
        for a in 0..m {
            for b in 0..m {
                for (s1, s2) in [
                    (sid_pos(a), sid_pos(b)),
                    (sid_pos(a), -sid_pos(b)),
                    (-sid_pos(a), sid_pos(b)),
                    (-sid_pos(a), -sid_pos(b)),
                ] {
                    let v = cb.n_value(s1, s2);
                    assert!(v.abs() <= 3, "constant {v} out of range");
                    seen_two |= v.abs() == 2;
                    seen_three |= v.abs() == 3;
                }
            }
        }
        assert!(seen_two && seen_three);
        cb.verify_jacobi().unwrap();
    }

    #[test]
    fn jacobi_across_types() {
        for t in ["B2", "C3", "A1xA1", "A3"] {
            basis(t).verify_jacobi().expect(t);
        }
    }

    #[test]
    fn trivial_module_is_one_dimensional_zero_action() {
        let cb = basis("A2");
        let rep = build_irrep(&cb, &Weight::zero(2), 10).unwrap();
        assert_eq!(rep.dim, 1);
        for g in cb.generators() {
            match g {
                Gen::H(_) | Gen::E(_) | Gen::F(_) => assert!(rep.act(g).is_zero()),
            }
        }
    }

    #[test]
    fn sl2_two_dimensional_module_relations() {
        let cb = basis("A1");
        let rep = build_irrep(&cb, &Weight::from_i64(&[1]), 10).unwrap();
        assert_eq!(rep.dim, 2);
        verify_module_relations(&cb, &rep).unwrap();
        // e acts nilpotently with one step, f likewise.
        assert!(rep.act(Gen::E(0)).mul(rep.act(Gen::E(0))).is_zero());
        assert!(!rep.act(Gen::E(0)).is_zero());
    }

    #[test]
    fn a2_fundamental_module_weights_match_character() {
        let cb = basis("A2");
        let lam = Weight::from_i64(&[1, 0]);
        let rep = build_irrep(&cb, &lam, 10).unwrap();
        assert_eq!(rep.dim, 3);
        let ch = irrep_character(&cb.d, &lam).unwrap();
        for w in &rep.basis_weights {
            assert_eq!(
                rep.basis_weights.iter().filter(|x| *x == w).count() as i64,
                ch.get(w)
            );
        }
        verify_module_relations(&cb, &rep).unwrap();
    }

    #[test]
    fn module_relations_hold_for_larger_samples() {
        for (t, lam) in [
            ("A2", vec![1, 1]),
            ("B2", vec![0, 1]),
            ("B2", vec![1, 0]),
            ("G2", vec![1, 0]),
            ("A1xA1", vec![2, 1]),
        ] {
            let cb = basis(t);
            let rep = build_irrep(&cb, &Weight::from_i64(&lam), 50).unwrap();
            verify_module_relations(&cb, &rep).expect(t);
        }
    }

    #[test]
    fn casimir_matches_closed_form() {
        for (t, lam) in [
            ("A1", vec![3]),
            ("A2", vec![1, 0]),
            ("A2", vec![1, 1]),
            ("B2", vec![0, 1]),
            ("G2", vec![1, 0]),
        ] {
            let cb = basis(t);
            let w = Weight::from_i64(&lam);
            let rep = build_irrep(&cb, &w, 50).unwrap();
            let c = casimir_scalar(&cb, &rep).expect(t);
            let rho = cb.d.rho();
            let expected =
                cb.d.inner(&w, &w.add(&rho.scale(&rat(2))));
            assert_eq!(c, expected, "Casimir for {t} {w}");
        }
    }

    #[test]
    fn dimension_cap_is_enforced() {
        let cb = basis("A1");
        let err = build_irrep(&cb, &Weight::from_i64(&[100]), 50);
        assert!(matches!(err, Err(Error::DimensionCap { .. })));
    }
}
