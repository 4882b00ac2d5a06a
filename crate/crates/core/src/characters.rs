//! Formal characters: weight multiplicities (Freudenthal recursion), the
//! dimension formula, tensor products, branching to an equal-rank
//! subalgebra, and the half-spin characters of the complement.
//!
//! The Freudenthal recursion and the dimension formula are two independent
//! routes to the same numbers; every character built here is cross-checked
//! against the dimension formula before it is returned.

use crate::error::{Error, Result};
use crate::ratio::{isqrt_ceil, rat, rat_to_i64, Rat};
use crate::rootsystem::{RootDatum, Weight};
use crate::subpair::EqualRankPair;
use crate::weylgroup::{reflection_matrix, simple_reflection_matrix, WeylElement};
use num_traits::{Signed, Zero};
use std::collections::{BTreeMap, BTreeSet, HashMap};

/// Finitely supported map weight -> integer multiplicity. Negative
/// multiplicities represent virtual characters.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FormalCharacter {
    pub rank: usize,
    terms: BTreeMap<Weight, i64>,
}

impl FormalCharacter {
    pub fn zero(rank: usize) -> Self {
        FormalCharacter {
            rank,
            terms: BTreeMap::new(),
        }
    }

    pub fn single(w: Weight, mult: i64) -> Self {
        let mut c = FormalCharacter::zero(w.rank());
        c.add_term(w, mult);
        c
    }

    pub fn add_term(&mut self, w: Weight, mult: i64) {
        debug_assert_eq!(w.rank(), self.rank);
        if mult == 0 {
            return;
        }
        match self.terms.entry(w) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(mult);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += mult;
                if *e.get() == 0 {
                    // No zero-valued entries are ever stored.
                    e.remove();
                }
            }
        }
    }

    pub fn get(&self, w: &Weight) -> i64 {
        self.terms.get(w).copied().unwrap_or(0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Weight, &i64)> {
        self.terms.iter()
    }

    pub fn support_len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Signed total multiplicity (the virtual dimension).
    pub fn total(&self) -> i64 {
        self.terms.values().sum()
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.rank, other.rank);
        let mut out = self.clone();
        for (w, m) in &other.terms {
            out.add_term(w.clone(), *m);
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(self.rank, other.rank);
        let mut out = self.clone();
        for (w, m) in &other.terms {
            out.add_term(w.clone(), -m);
        }
        out
    }

    /// Character of the dual: every weight negated.
    pub fn dual(&self) -> Self {
        let mut out = FormalCharacter::zero(self.rank);
        for (w, m) in &self.terms {
            out.add_term(w.neg(), *m);
        }
        out
    }

    /// Pushes every weight through a Weyl element.
    pub fn apply(&self, w: &WeylElement) -> Self {
        let mut out = FormalCharacter::zero(self.rank);
        for (x, m) in &self.terms {
            out.add_term(w.act(x), *m);
        }
        out
    }
}

/// Character of a tensor product: convolution of the supports.
pub fn tensor(a: &FormalCharacter, b: &FormalCharacter) -> Result<FormalCharacter> {
    if a.rank != b.rank {
        return Err(Error::DimensionMismatch {
            expected: a.rank,
            got: b.rank,
        });
    }
    let mut out = FormalCharacter::zero(a.rank);
    for (wa, ma) in a.iter() {
        for (wb, mb) in b.iter() {
            out.add_term(wa.add(wb), ma * mb);
        }
    }
    Ok(out)
}

/// Weyl dimension formula: product of `<lam+rho, alpha> / <rho, alpha>`
/// over the positive roots.
pub fn weyl_dim(d: &RootDatum, lambda: &Weight) -> Result<i64> {
    require_dominant_integral(d, lambda)?;
    let rho = d.rho();
    let shifted = lambda.add(&rho);
    let mut prod = rat(1);
    for alpha in &d.positive_roots {
        prod *= d.inner(&shifted, alpha) / d.inner(&rho, alpha);
    }
    rat_to_i64(&prod).ok_or_else(|| Error::Internal(format!("non-integral dimension {prod}")))
}

/// Dimension of the h-irreducible with highest weight `mu`, computed with
/// ambient inner products over the positive roots of h.
pub fn weyl_dim_h(pair: &EqualRankPair, mu: &Weight) -> Result<i64> {
    require_h_dominant_integral(pair, mu)?;
    let shifted = mu.add(&pair.rho_h);
    let mut prod = rat(1);
    for alpha in &pair.h_positive {
        prod *= pair.g.inner(&shifted, alpha) / pair.g.inner(&pair.rho_h, alpha);
    }
    rat_to_i64(&prod).ok_or_else(|| Error::Internal(format!("non-integral dimension {prod}")))
}

fn require_dominant_integral(d: &RootDatum, lambda: &Weight) -> Result<()> {
    if lambda.rank() != d.rank {
        return Err(Error::DimensionMismatch {
            expected: d.rank,
            got: lambda.rank(),
        });
    }
    if !lambda.is_dominant_integral() {
        return Err(Error::NotDominantIntegral(lambda.to_string()));
    }
    Ok(())
}

fn require_h_dominant_integral(pair: &EqualRankPair, mu: &Weight) -> Result<()> {
    if mu.rank() != pair.g.rank {
        return Err(Error::DimensionMismatch {
            expected: pair.g.rank,
            got: mu.rank(),
        });
    }
    if !pair.is_h_dominant(mu) || !pair.is_h_integral(mu) {
        return Err(Error::NotHDominant(mu.to_string()));
    }
    Ok(())
}

/// All dominant integral weights `mu` with `|mu + rho|^2 <= bound`.
/// Finite because the Gram matrix of the fundamental weights is positive
/// definite with nonnegative entries; the scan is an exact coordinate box.
pub fn enumerate_dominant(d: &RootDatum, bound: &Rat) -> Vec<Weight> {
    let mut limits = Vec::with_capacity(d.rank);
    for i in 0..d.rank {
        let omega_norm = &d.form[i][i];
        // Largest m with (m+1)^2 * |omega_i|^2 <= bound.
        let mut m = 0i64;
        while rat(m + 2) * rat(m + 2) * omega_norm <= *bound {
            m += 1;
        }
        limits.push(m);
    }
    let rho = d.rho();
    let mut out = Vec::new();
    let mut coords = vec![0i64; d.rank];
    enumerate_box(&mut coords, 0, &limits, &mut |c| {
        let w = Weight::from_i64(c);
        if d.norm_sq(&w.add(&rho)) <= *bound {
            out.push(w);
        }
    });
    out.sort();
    out
}

fn enumerate_box(coords: &mut Vec<i64>, i: usize, limits: &[i64], visit: &mut impl FnMut(&[i64])) {
    if i == coords.len() {
        visit(coords);
        return;
    }
    for v in 0..=limits[i] {
        coords[i] = v;
        enumerate_box(coords, i + 1, limits, visit);
    }
}

/// All integral weights (dominant or not) that are h-dominant with
/// `|mu + rho_h|^2 <= bound`.
pub fn enumerate_h_dominant(pair: &EqualRankPair, bound: &Rat) -> Vec<Weight> {
    let d = &pair.g;
    let mut out = Vec::new();
    let mut coords = vec![0i64; d.rank];
    let mut ranges = Vec::with_capacity(d.rank);
    for i in 0..d.rank {
        // |<mu + rho_h, alpha_i-coroot>| <= |mu+rho_h| * |alpha_i-coroot|.
        let coroot_norm_sq = rat(4) / &d.simple_norms[i];
        let l = isqrt_ceil(&(bound * coroot_norm_sq));
        let shift = d.coroot_pairing(&pair.rho_h, d.simple_root(i));
        let lo = (-rat(l) - &shift).floor().to_integer();
        let hi = (rat(l) - &shift).ceil().to_integer();
        let lo = i64::try_from(lo).unwrap_or(0);
        let hi = i64::try_from(hi).unwrap_or(0);
        ranges.push((lo, hi));
    }
    fn rec(
        pair: &EqualRankPair,
        ranges: &[(i64, i64)],
        coords: &mut Vec<i64>,
        i: usize,
        bound: &Rat,
        out: &mut Vec<Weight>,
    ) {
        if i == coords.len() {
            let w = Weight::from_i64(coords);
            let shifted = w.add(&pair.rho_h);
            if pair.g.norm_sq(&shifted) <= *bound && pair.is_h_dominant(&w) {
                out.push(w);
            }
            return;
        }
        for v in ranges[i].0..=ranges[i].1 {
            coords[i] = v;
            rec(pair, ranges, coords, i + 1, bound, out);
        }
    }
    rec(pair, &ranges, &mut coords, 0, bound, &mut out);
    out.sort();
    out
}

/// Weyl orbit of a weight under the given reflection matrices.
fn orbit(start: &Weight, gens: &[Vec<Vec<i64>>]) -> Vec<Weight> {
    let mut seen: BTreeSet<Weight> = BTreeSet::new();
    seen.insert(start.clone());
    let mut queue = vec![start.clone()];
    while let Some(w) = queue.pop() {
        for g in gens {
            let el = WeylElement {
                word: vec![],
                matrix: g.clone(),
            };
            let img = el.act(&w);
            if seen.insert(img.clone()) {
                queue.push(img);
            }
        }
    }
    seen.into_iter().collect()
}

/// Character of the irreducible g-module with highest weight `lambda`,
/// by Freudenthal recursion over the dominant weights below `lambda`.
pub fn irrep_character(d: &RootDatum, lambda: &Weight) -> Result<FormalCharacter> {
    require_dominant_integral(d, lambda)?;
    let rho = d.rho();
    let top = lambda.add(&rho);
    let bound = d.norm_sq(&top);

    // Dominant candidates below lambda in the root-lattice order.
    let mut dominant: Vec<Weight> = enumerate_dominant(d, &bound)
        .into_iter()
        .filter(|mu| d.in_positive_root_lattice(&lambda.sub(mu)))
        .collect();
    // Process by increasing depth below lambda.
    dominant.sort_by_key(|mu| {
        let h: Rat = d.to_root_coords(&lambda.sub(mu)).iter().sum();
        rat_to_i64(&h).expect("integral height")
    });

    let mut mult: BTreeMap<Weight, i64> = BTreeMap::new();
    for mu in &dominant {
        if mu == lambda {
            mult.insert(mu.clone(), 1);
            continue;
        }
        let mu_rho = mu.add(&rho);
        let denom = &bound - d.norm_sq(&mu_rho);
        debug_assert!(denom.is_positive());
        let mut numer = Rat::zero();
        for alpha in &d.positive_roots {
            let mut k = 1i64;
            loop {
                let nu = mu.add(&alpha.scale(&rat(k)));
                if !d.in_positive_root_lattice(&lambda.sub(&nu)) {
                    break;
                }
                let (_, dom, _) = crate::weylgroup::make_dominant(d, &nu);
                if let Some(m) = mult.get(&dom) {
                    numer += rat(2 * m) * d.inner(&nu, alpha);
                }
                k += 1;
            }
        }
        let m = numer / denom;
        if !m.is_zero() {
            let m = rat_to_i64(&m)
                .ok_or_else(|| Error::Internal("non-integral multiplicity".into()))?;
            mult.insert(mu.clone(), m);
        }
    }

    let gens: Vec<Vec<Vec<i64>>> = (0..d.rank)
        .map(|i| simple_reflection_matrix(d, i))
        .collect();
    let mut ch = FormalCharacter::zero(d.rank);
    for (mu, m) in &mult {
        for w in orbit(mu, &gens) {
            ch.add_term(w, *m);
        }
    }

    let dim = weyl_dim(d, lambda)?;
    if ch.total() != dim {
        return Err(Error::Internal(format!(
            "character total {} does not match dimension {dim} for {lambda}",
            ch.total()
        )));
    }
    Ok(ch)
}

/// Moves a weight to the h-dominant chamber by reflections in the simple
/// roots of h.
pub fn make_h_dominant(pair: &EqualRankPair, x: &Weight) -> Weight {
    let d = &pair.g;
    let mut cur = x.clone();
    'outer: loop {
        for beta in &pair.h_simple {
            let p = d.coroot_pairing(&cur, beta);
            if p.is_negative() {
                cur = cur.sub(&beta.scale(&p));
                continue 'outer;
            }
        }
        return cur;
    }
}

/// Character of the irreducible h-module with highest weight `mu`, in the
/// ambient coordinates of g (u(1) components ride along unchanged).
pub fn h_irrep_character(pair: &EqualRankPair, mu: &Weight) -> Result<FormalCharacter> {
    require_h_dominant_integral(pair, mu)?;
    let d = &pair.g;
    let betas = &pair.h_simple;
    if betas.is_empty() {
        return Ok(FormalCharacter::single(mu.clone(), 1));
    }
    let x = mu.add(&pair.rho_h);
    let bound = d.norm_sq(&x);

    // Height bound: any weight nu of the module has mu - nu = q in the
    // nonnegative root lattice of h with |q| <= 2|x|; the height of q is
    // <q, xi> for the functional xi pairing to 1 with each simple h-root.
    let s = betas.len();
    let gram = crate::matrix::QMatrix::from_rows(
        betas
            .iter()
            .map(|a| betas.iter().map(|b| d.inner(a, b)).collect())
            .collect(),
    );
    let xi_coeffs = gram
        .solve(&vec![rat(1); s])
        .ok_or_else(|| Error::Internal("degenerate h-simple Gram matrix".into()))?;
    let mut xi = Weight::zero(d.rank);
    for (t, beta) in xi_coeffs.iter().zip(betas) {
        xi = xi.add(&beta.scale(t));
    }
    let height_cap = isqrt_ceil(&(rat(4) * &bound * d.norm_sq(&xi)));

    // Candidate h-dominant weights mu - sum c_i beta_i with sum c_i <= cap.
    let mut candidates: Vec<(i64, Weight)> = Vec::new();
    fn collect(
        pair: &EqualRankPair,
        betas: &[Weight],
        mu: &Weight,
        x_bound: &Rat,
        c: &mut Vec<i64>,
        i: usize,
        left: i64,
        out: &mut Vec<(i64, Weight)>,
    ) {
        if i == c.len() {
            let mut nu = mu.clone();
            for (ci, beta) in c.iter().zip(betas) {
                if *ci != 0 {
                    nu = nu.sub(&beta.scale(&rat(*ci)));
                }
            }
            let shifted = nu.add(&pair.rho_h);
            if pair.g.norm_sq(&shifted) <= *x_bound && pair.is_h_dominant(&nu) {
                out.push((c.iter().sum(), nu));
            }
            return;
        }
        for v in 0..=left {
            c[i] = v;
            collect(pair, betas, mu, x_bound, c, i + 1, left - v, out);
        }
        c[i] = 0;
    }
    let mut c = vec![0i64; s];
    collect(pair, betas, mu, &bound, &mut c, 0, height_cap, &mut candidates);
    candidates.sort_by(|a, b| a.0.cmp(&b.0).then_with(|| a.1.cmp(&b.1)));

    // Membership of a difference in the nonnegative integer h-root lattice.
    let in_h_lattice = |w: &Weight| -> bool {
        let rhs: Vec<Rat> = betas.iter().map(|b| d.inner(w, b)).collect();
        let Some(coords) = gram.solve(&rhs) else {
            return false;
        };
        let mut recon = Weight::zero(d.rank);
        for (ci, beta) in coords.iter().zip(betas) {
            recon = recon.add(&beta.scale(ci));
        }
        recon == *w && coords.iter().all(|x| x.is_integer() && !x.is_negative())
    };

    let mut mult: BTreeMap<Weight, i64> = BTreeMap::new();
    for (_, nu) in &candidates {
        if nu == mu {
            mult.insert(nu.clone(), 1);
            continue;
        }
        let denom = &bound - d.norm_sq(&nu.add(&pair.rho_h));
        if denom.is_zero() {
            // An h-dominant weight on the shell distinct from mu is not a
            // weight of the module.
            continue;
        }
        let mut numer = Rat::zero();
        for alpha in &pair.h_positive {
            let mut k = 1i64;
            loop {
                let up = nu.add(&alpha.scale(&rat(k)));
                if !in_h_lattice(&mu.sub(&up)) {
                    break;
                }
                let dom = make_h_dominant(pair, &up);
                if let Some(m) = mult.get(&dom) {
                    numer += rat(2 * m) * d.inner(&up, alpha);
                }
                k += 1;
            }
        }
        let m = numer / denom;
        if !m.is_zero() {
            let m = rat_to_i64(&m)
                .ok_or_else(|| Error::Internal("non-integral h-multiplicity".into()))?;
            mult.insert(nu.clone(), m);
        }
    }

    let gens: Vec<Vec<Vec<i64>>> = betas
        .iter()
        .map(|b| reflection_matrix(d, b))
        .collect::<Result<_>>()?;
    let mut ch = FormalCharacter::zero(d.rank);
    for (nu, m) in &mult {
        for w in orbit(nu, &gens) {
            ch.add_term(w, *m);
        }
    }

    let dim = weyl_dim_h(pair, mu)?;
    if ch.total() != dim {
        return Err(Error::Internal(format!(
            "h-character total {} does not match dimension {dim} for {mu}",
            ch.total()
        )));
    }
    Ok(ch)
}

/// Decomposes a W_h-invariant (virtual) character into h-irreducibles by
/// iterated extraction of the maximal term. Candidates are ordered by
/// decreasing `<mu + rho_h, rho_h>`, ties broken lexicographically, which
/// always lands on an h-dominant weight for invariant input.
pub fn decompose_h(pair: &EqualRankPair, ch: &FormalCharacter) -> Result<Vec<(Weight, i64)>> {
    let d = &pair.g;
    for beta in &pair.h_simple {
        let m = reflection_matrix(d, beta)?;
        let w = WeylElement {
            word: vec![],
            matrix: m,
        };
        if ch.apply(&w) != *ch {
            return Err(Error::NotWhInvariant);
        }
    }

    let key = |mu: &Weight| d.inner(&mu.add(&pair.rho_h), &pair.rho_h);
    let mut rest = ch.clone();
    let mut out: Vec<(Weight, i64)> = Vec::new();
    let mut cache: HashMap<Weight, FormalCharacter> = HashMap::new();
    let mut guard = 0usize;
    while !rest.is_zero() {
        guard += 1;
        if guard > 200_000 {
            return Err(Error::Internal(
                "branching extraction did not converge".into(),
            ));
        }
        let (mu, m) = {
            let mut best: Option<(&Weight, &i64, Rat)> = None;
            for (w, mult) in rest.iter() {
                let k = key(w);
                match &best {
                    None => best = Some((w, mult, k)),
                    Some((bw, _, bk)) => {
                        if k > *bk || (k == *bk && w < *bw) {
                            best = Some((w, mult, k));
                        }
                    }
                }
            }
            let (w, mult, _) = best.expect("nonzero character has a term");
            (w.clone(), *mult)
        };
        if !pair.is_h_dominant(&mu) {
            return Err(Error::NotWhInvariant);
        }
        let hch = match cache.get(&mu) {
            Some(c) => c.clone(),
            None => {
                let c = h_irrep_character(pair, &mu)?;
                cache.insert(mu.clone(), c.clone());
                c
            }
        };
        let mut scaled = FormalCharacter::zero(d.rank);
        for (w, hm) in hch.iter() {
            scaled.add_term(w.clone(), hm * m);
        }
        rest = rest.sub(&scaled);
        out.push((mu, m));
    }
    Ok(out)
}

/// Which piece of the spin character to produce. `Plus` is the even-degree
/// half (it contains the vacuum weight `rho_g - rho_h`); duals negate every
/// weight.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SpinPart {
    Plus,
    Minus,
    Full,
    PlusDual,
    MinusDual,
}

impl SpinPart {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "plus" => Ok(SpinPart::Plus),
            "minus" => Ok(SpinPart::Minus),
            "full" => Ok(SpinPart::Full),
            "plus-dual" => Ok(SpinPart::PlusDual),
            "minus-dual" => Ok(SpinPart::MinusDual),
            _ => Err(Error::Internal(format!("unknown spin part {s}"))),
        }
    }
}

/// Character of the spin module of the complement (or one of its halves):
/// terms `rho_p - sum(A)` over subsets `A` of the positive p-roots.
pub fn spinor_character(pair: &EqualRankPair, part: SpinPart) -> FormalCharacter {
    let rho_p = pair.rho_p();
    let p_pos = pair.p_positive();
    let mut ch = FormalCharacter::zero(pair.g.rank);
    let n = p_pos.len();
    for mask in 0u64..(1u64 << n) {
        let parity_odd = (mask.count_ones() % 2) == 1;
        let keep = match part {
            SpinPart::Plus | SpinPart::PlusDual => !parity_odd,
            SpinPart::Minus | SpinPart::MinusDual => parity_odd,
            SpinPart::Full => true,
        };
        if !keep {
            continue;
        }
        let mut w = rho_p.clone();
        for (i, alpha) in p_pos.iter().enumerate() {
            if mask & (1 << i) != 0 {
                w = w.sub(alpha);
            }
        }
        let dualize = matches!(part, SpinPart::PlusDual | SpinPart::MinusDual);
        ch.add_term(if dualize { w.neg() } else { w }, 1);
    }
    ch
}
