//! Homotopy transfer of the dgla structures on the Fedosov resolutions to
//! L∞ structures on `Λ A^∨ ⊗ Λ^{•+1}B` and `Λ A^∨ ⊗ (U(L)/U(L)A)^{⊗•+1}`.

mod matched;
mod transfer;
mod uniqueness;

pub use matched::{compare_binary, matched_detect, MatchedComparison, MatchedData};
pub use uniqueness::{form_transport, intertwining_check, uniqueness_check, BigTransport, Pushforward};
pub use transfer::{multisets, LambdaEntry, LambdaEntryJson, Transfer};

use crate::contraction_engine::{instantiate_dpoly, instantiate_tpoly, BigD, BigT, IdentityReport, Perturbed, Status};
use crate::error::CoreError;
use crate::graded_core::scalar::to_string;
use crate::graded_core::sparse::Sparse;
use crate::lie_pair::ce::{d_a_bott, d_basis, d_small_d, t_basis, DKey, TKey};
use crate::lie_pair::{Connection, LiePair};
use crate::pbw::PbwMap;
use crate::poly_structures::{BigCtx, DFiber, TFiber};

pub type TTransfer<'a> = Transfer<'a, TKey, BigT, Perturbed<'a, TKey, BigT>>;
pub type DTransfer<'a> = Transfer<'a, DKey, BigD, Perturbed<'a, DKey, BigD>>;

/// Input order is `|b|`; exact for inputs of total order at most the homogeneity cap.
pub fn transfer_tpoly<'a>(ctx: &'a BigCtx<'a, TFiber>, pert: &'a Perturbed<'a, TKey, BigT>) -> TTransfer<'a> {
    Transfer::new(pert, move |x, y| ctx.bracket(x, y), |k: &TKey| k.degree(), |k: &TKey| k.b.count_ones(), ctx.homog_cap as u32)
}

/// Input order is the total PBW weight; the PBW table must reach the homogeneity cap.
pub fn transfer_dpoly<'a>(ctx: &'a BigCtx<'a, DFiber>, pert: &'a Perturbed<'a, DKey, BigD>) -> DTransfer<'a> {
    Transfer::new(pert, move |x, y| ctx.bracket(x, y), |k: &DKey| k.degree(), |k: &DKey| k.weight(), ctx.homog_cap as u32)
}

/// Transferred brackets against the direct matched-pair structures, with the same `(j, ∇)`:
/// unary parts, `λ_2` against the direct brackets and `λ_3 = 0`. The polydifferential
/// side uses inputs of at most two tensor factors and total weight at most `d_cap`.
pub fn compare_matched(pair: &LiePair, conn: &Connection, t_cap: u32, d_cap: u32) -> Result<MatchedComparison, CoreError> {
    let md = MatchedData::new(pair)?;
    let mut reports = Vec::new();

    let ctx = BigCtx::new(pair, conn, TFiber { rank: pair.r }, t_cap)?;
    let (pert, _) = instantiate_tpoly(&ctx);
    let tr = transfer_tpoly(&ctx, &pert);
    let basis = t_basis(pair);
    reports.push(unary("polyvector lambda_1 = d_A^Bott", &basis, |x| tr.lambda(&[*x]), |x| d_a_bott(pair, &Sparse::basis(*x)), t_cap)?);
    reports.push(compare_binary("polyvector lambda_2 = direct Schouten", &basis, |_, _| true, |x, y| tr.lambda(&[*x, *y]), |x, y| md.schouten(x, y), t_cap as i64)?);
    reports.push(vanishing("polyvector lambda_3 = 0", &tr.table(&basis, 3)?, t_cap));

    let pbw = PbwMap::build(pair, conn, 2 * d_cap + 2);
    let mut dctx = BigCtx::new(pair, conn, DFiber { rank: pair.r }, d_cap)?;
    dctx.extra = Some(dctx.embed(0, &Sparse::basis(dctx.fiber.m())));
    let (dpert, _) = instantiate_dpoly(&dctx, &pbw);
    let dtr = transfer_dpoly(&dctx, &dpert);
    let dbasis = d_basis(pair, 2, d_cap);
    reports.push(unary("polydifferential lambda_1 = d_A^U + d_H", &dbasis, |x| dtr.lambda(std::slice::from_ref(x)), |x| d_small_d(pair, &Sparse::basis(x.clone())), d_cap)?);
    reports.push(compare_binary(
        "polydifferential lambda_2 = direct Gerstenhaber",
        &dbasis,
        |x, y| x.weight() + y.weight() <= d_cap,
        |x, y| dtr.lambda(&[x.clone(), y.clone()]),
        |x, y| md.gerstenhaber(x, y),
        d_cap as i64,
    )?);
    reports.push(vanishing("polydifferential lambda_3 = 0", &dtr.table(&d_basis(pair, 2, 1), 3)?, d_cap));
    Ok(MatchedComparison { reports })
}

fn unary<S: Ord + Clone + std::fmt::Debug>(
    identity: &str,
    basis: &[S],
    lhs: impl Fn(&S) -> Result<Sparse<S>, CoreError>,
    rhs: impl Fn(&S) -> Sparse<S>,
    depth: u32,
) -> Result<IdentityReport, CoreError> {
    let mut witness = None;
    for x in basis {
        let diff = lhs(x)?.minus(&rhs(x));
        if witness.is_none() && !diff.is_zero() {
            let (k, c) = diff.iter().next().unwrap();
            witness = Some(format!("input {x:?}: difference {} at {k:?}", to_string(c)));
        }
    }
    Ok(IdentityReport { identity: identity.into(), status: Status::from_witness(&witness), checked: basis.len(), depth: depth as i64, witness })
}

fn vanishing<S: Ord + Clone + std::fmt::Debug>(identity: &str, table: &[LambdaEntry<S>], depth: u32) -> IdentityReport {
    let witness = table.first().map(|e| format!("inputs {:?}: nonzero value {:?}", e.inputs, e.value));
    IdentityReport { identity: identity.into(), status: Status::from_witness(&witness), checked: 1, depth: depth as i64, witness }
}
