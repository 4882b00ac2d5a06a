//! The rho-shifted dot action, multiplet generation, and its inverse.
//!
//! For a dominant weight lambda of g, the multiplet is the signed family
//! `{(sign(c), c.lambda)}` over the coset set C, where
//! `c.lambda = c(lambda + rho_g) - rho_h`. The inverse direction recovers
//! lambda (or reports an orphan) from a single h-dominant weight.

use crate::characters::{
    decompose_h, h_irrep_character, irrep_character, spinor_character, tensor, FormalCharacter,
    SpinPart,
};
use crate::error::{Error, Result};
use crate::rootsystem::Weight;
use crate::subpair::EqualRankPair;
use crate::weylgroup::{make_dominant, WeylElement};

#[derive(Clone, Debug)]
pub struct MultipletEntry {
    pub element: WeylElement,
    pub mu: Weight,
    pub sign: i64,
}

/// `c.lambda = c(lambda + rho_g) - rho_h`; errors if the result fails to be
/// h-dominant (which happens exactly when `c` is not in C).
pub fn dot_action(pair: &EqualRankPair, c: &WeylElement, lambda: &Weight) -> Result<Weight> {
    if !lambda.is_dominant_integral() {
        return Err(Error::NotDominantIntegral(lambda.to_string()));
    }
    let shifted = lambda.add(&pair.g.rho());
    let mu = c.act_checked(&shifted)?.sub(&pair.rho_h);
    if !pair.is_h_dominant(&mu) {
        return Err(Error::NotHDominant(format!(
            "{mu} (element outside the coset set)"
        )));
    }
    Ok(mu)
}

/// One entry per coset element, in the enumeration order of C.
pub fn multiplet(pair: &EqualRankPair, lambda: &Weight) -> Result<Vec<MultipletEntry>> {
    pair.cosets
        .iter()
        .map(|c| {
            let mu = dot_action(pair, c, lambda)?;
            Ok(MultipletEntry {
                element: c.clone(),
                mu,
                sign: c.sign(),
            })
        })
        .collect()
}

/// Inverts the dot action on a single h-dominant integral weight.
///
/// Returns `Some((sign(w), lambda))` when `mu + rho_h` is g-regular and the
/// dominant representative minus rho_g is dominant integral for g; `None`
/// marks the orphan case (no multiplet contains `mu`).
pub fn harmonic_inverse(pair: &EqualRankPair, mu: &Weight) -> Result<Option<(i64, Weight)>> {
    if !pair.is_h_dominant(mu) || !pair.is_h_integral(mu) {
        return Err(Error::NotHDominant(mu.to_string()));
    }
    let shifted = mu.add(&pair.rho_h);
    let (w, dom, regular) = make_dominant(&pair.g, &shifted);
    if !regular {
        return Ok(None);
    }
    let lambda = dom.sub(&pair.g.rho());
    if !lambda.is_dominant_integral() {
        return Ok(None);
    }
    Ok(Some((w.sign(), lambda)))
}

/// Report of the representation-ring identity for one lambda: both sides as
/// formal characters, compared exactly.
pub struct GkrsReport {
    pub lambda: Weight,
    pub entries: Vec<MultipletEntry>,
    pub lhs: FormalCharacter,
    pub rhs: FormalCharacter,
    pub equal: bool,
    /// The branching of the left side, for the report stream.
    pub decomposition: Vec<(Weight, i64)>,
}

/// Checks `chi(V_lambda) * (S+ - S-) = sum_c sign(c) * chi(U_{c.lambda})`
/// literally in the character ring.
pub fn verify_gkrs(pair: &EqualRankPair, lambda: &Weight) -> Result<GkrsReport> {
    let entries = multiplet(pair, lambda)?;
    let ch = irrep_character(&pair.g, lambda)?;
    let plus = spinor_character(pair, SpinPart::Plus);
    let minus = spinor_character(pair, SpinPart::Minus);
    let lhs = tensor(&ch, &plus.sub(&minus))?;
    let mut rhs = FormalCharacter::zero(pair.g.rank);
    for e in &entries {
        let hch = h_irrep_character(pair, &e.mu)?;
        for (w, m) in hch.iter() {
            rhs.add_term(w.clone(), m * e.sign);
        }
    }
    let equal = lhs == rhs;
    let decomposition = decompose_h(pair, &lhs)?;
    Ok(GkrsReport {
        lambda: lambda.clone(),
        entries,
        lhs,
        rhs,
        equal,
        decomposition,
    })
}
