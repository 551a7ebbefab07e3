use serde::{Deserialize, Serialize};

use super::maps::{
    dual_verdict, flop_flop, iota_maps, kp_from, parity_check, pk_from, primary_verdict,
    signed_unit, spherical_from, structure_maps, IcVerdict, IotaMaps, ParityCheck, SphericalData,
    StructureMaps,
};
use super::model::{WallModel, WindowBases};
use crate::algebra::{serde_rational, LinearMap, Rational};
use crate::error::{Error, Result};
use crate::perverse::{DefectReport, GgmDiagram, KsDiagram};

/// Every K-theoretic quantity attached to one wall, plus verdicts.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WallReport {
    pub weights: Vec<i64>,
    pub window_base: i64,
    pub eta: i64,
    pub codim_z: usize,
    pub bases: WindowBases,
    pub matrices: ReportMatrices,
    pub m_plus: LinearMap,
    #[serde(with = "serde_rational")]
    pub m_prime: Rational,
    pub ic_primary: IcVerdict,
    pub ic_dual: IcVerdict,
    pub parity: ParityCheck,
    pub defect: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportMatrices {
    pub res_minus: LinearMap,
    pub res_plus: LinearMap,
    pub res_minus_star: LinearMap,
    pub res_plus_star: LinearMap,
    pub star_res_minus: LinearMap,
    pub star_res_plus: LinearMap,
    pub iota_minus: LinearMap,
    pub iota_plus: LinearMap,
    pub star_iota_minus: LinearMap,
    pub iota_minus_star: LinearMap,
    pub star_iota_plus: LinearMap,
    pub iota_plus_star: LinearMap,
    pub k_s: LinearMap,
    pub k_s_star: LinearMap,
}

/// Named groups of identities that every valid wall must satisfy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum InvariantFamily {
    DimensionLedger,
    RestrictionSections,
    SodOrthogonality,
    Adjunctions,
    TwistTwoRoutes,
    CotwistScalar,
    PkTransfers,
    AssembledDiagrams,
    MonodromyConjugacy,
    ParityImpliesSaturated,
    DefectConsistency,
    QuiverRoundTrip,
}

impl InvariantFamily {
    pub const ALL: [InvariantFamily; 12] = [
        Self::DimensionLedger,
        Self::RestrictionSections,
        Self::SodOrthogonality,
        Self::Adjunctions,
        Self::TwistTwoRoutes,
        Self::CotwistScalar,
        Self::PkTransfers,
        Self::AssembledDiagrams,
        Self::MonodromyConjugacy,
        Self::ParityImpliesSaturated,
        Self::DefectConsistency,
        Self::QuiverRoundTrip,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Self::DimensionLedger => "kgit.dimension_ledger",
            Self::RestrictionSections => "kgit.restriction_sections",
            Self::SodOrthogonality => "kgit.sod_orthogonality",
            Self::Adjunctions => "kgit.adjunctions",
            Self::TwistTwoRoutes => "kgit.twist_two_routes",
            Self::CotwistScalar => "kgit.cotwist_scalar",
            Self::PkTransfers => "kgit.pk_transfers",
            Self::AssembledDiagrams => "kgit.assembled_diagrams",
            Self::MonodromyConjugacy => "kgit.monodromy_conjugacy",
            Self::ParityImpliesSaturated => "kgit.parity_implies_saturated",
            Self::DefectConsistency => "kgit.defect_consistency",
            Self::QuiverRoundTrip => "kgit.quiver_round_trip",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub family: InvariantFamily,
    pub detail: String,
}

/// Everything computed for one model, before verdicts are packaged.
pub struct WallComputation {
    pub res: StructureMaps,
    pub iota: IotaMaps,
    pub spherical: SphericalData,
    pub kp: KsDiagram,
    pub pk: KsDiagram,
}

impl WallComputation {
    pub fn new(model: &WallModel) -> Result<Self> {
        let res = structure_maps(model)?;
        let iota = iota_maps(model)?;
        let spherical = spherical_from(&res, &iota)?;
        let kp = kp_from(&res, model.eta())?;
        let pk = pk_from(&iota, model.eta())?;
        Ok(Self {
            res,
            iota,
            spherical,
            kp,
            pk,
        })
    }
}

struct Checker {
    violations: Vec<Violation>,
}

impl Checker {
    fn check(&mut self, family: InvariantFamily, ok: bool, detail: impl FnOnce() -> String) {
        if !ok {
            self.violations.push(Violation {
                family,
                detail: detail(),
            });
        }
    }

    fn check_result(&mut self, family: InvariantFamily, r: Result<bool>, detail: &str) {
        match r {
            Ok(ok) => self.check(family, ok, || detail.to_string()),
            Err(e) => self.check(family, false, || format!("{detail}: {e}")),
        }
    }
}

fn is_identity(r: Result<LinearMap>) -> Result<bool> {
    Ok(r?.is_identity())
}

fn is_zero(r: Result<LinearMap>) -> Result<bool> {
    Ok(r?.is_zero())
}

fn scalar_is(r: Result<LinearMap>, expected: &Rational) -> Result<bool> {
    Ok(r?.scalar() == Some(expected))
}

/// `(g- f+) m+ = m- (g- f+)` for a valid skeleton diagram.
fn conjugacy_holds(k: &KsDiagram) -> Result<bool> {
    let (mm, mp) = k.monodromies()?;
    let psi = k.transfer_plus_to_minus();
    Ok(psi.compose(&mp)?.same_matrix(&mm.compose(&psi)?))
}

/// Converting a quiver obtained from `to_ggm` back and forth reproduces it
/// exactly.
fn round_trip_holds(g: &GgmDiagram) -> Result<bool> {
    let (again, _) = g.to_ks()?.to_ggm()?;
    Ok(&again == g)
}

/// Re-verifies every per-model identity. An empty result means the model is
/// internally consistent.
pub fn check_invariants(model: &WallModel, comp: &WallComputation) -> Vec<Violation> {
    use InvariantFamily::*;
    let mut c = Checker {
        violations: Vec::new(),
    };
    let WallComputation {
        res,
        iota,
        spherical,
        kp,
        pk,
    } = comp;
    let eta = model.eta() as usize;

    let c_dim = res.res_minus.cols();
    c.check(
        DimensionLedger,
        c_dim == eta + 1
            && res.res_minus.rows() == eta
            && res.res_plus.rows() == eta
            && res.res_plus.cols() == c_dim
            && iota.iota_minus.rows() == c_dim,
        || format!("dim K(C) = {c_dim}, η = {eta}"),
    );

    c.check_result(
        RestrictionSections,
        is_identity(res.res_minus.compose(&res.res_minus_star)),
        "res- res-* != 1",
    );
    c.check_result(
        RestrictionSections,
        is_identity(res.res_plus.compose(&res.res_plus_star)),
        "res+ res+* != 1",
    );
    c.check_result(
        RestrictionSections,
        is_identity(res.res_minus.compose(&res.star_res_minus)),
        "res- *res- != 1",
    );
    c.check_result(
        RestrictionSections,
        is_identity(res.res_plus.compose(&res.star_res_plus)),
        "res+ *res+ != 1",
    );

    c.check_result(
        SodOrthogonality,
        is_zero(res.res_minus.compose(&iota.iota_minus)),
        "res- ι- != 0",
    );
    c.check_result(
        SodOrthogonality,
        is_zero(res.res_plus.compose(&iota.iota_plus)),
        "res+ ι+ != 0",
    );

    let one = Rational::from_integer(1.into());
    for (adj, emb, name) in [
        (&iota.star_iota_minus, &iota.iota_minus, "*ι- ι-"),
        (&iota.iota_minus_star, &iota.iota_minus, "ι-* ι-"),
        (&iota.star_iota_plus, &iota.iota_plus, "*ι+ ι+"),
        (&iota.iota_plus_star, &iota.iota_plus, "ι+* ι+"),
    ] {
        c.check_result(
            Adjunctions,
            scalar_is(adj.compose(emb), &one),
            &format!("{name} != 1"),
        );
    }

    match flop_flop(res) {
        Ok(ff) => c.check(TwistTwoRoutes, ff.same_matrix(&spherical.m_plus), || {
            format!(
                "res+ res-* res- res+* = {ff:?} but 1 - K(S)K(S*) = {:?}",
                spherical.m_plus
            )
        }),
        Err(e) => c.check(TwistTwoRoutes, false, || e.to_string()),
    }

    let cotwist = signed_unit(model.codim_z());
    c.check(CotwistScalar, spherical.m_prime == cotwist, || {
        format!("m' = {} but (-1)^codim = {cotwist}", spherical.m_prime)
    });

    let p_sign = signed_unit(model.positive_count());
    let n_sign = signed_unit(model.negative_count());
    let g_minus_f_plus = pk.transfer_plus_to_minus();
    let g_plus_f_minus = pk.transfer_minus_to_plus();
    c.check(
        PkTransfers,
        g_minus_f_plus.scalar() == Some(&p_sign) && g_plus_f_minus.scalar() == Some(&n_sign),
        || "g-f+ != (-1)^p or g+f- != (-1)^n".to_string(),
    );
    c.check(
        PkTransfers,
        g_minus_f_plus
            .scalar()
            .zip(g_plus_f_minus.scalar())
            .map(|(a, b)| a * b)
            == Some(cotwist.clone()),
        || "product of transfers != (-1)^codim".to_string(),
    );

    c.check(AssembledDiagrams, kp.validate(), || {
        "K(X//±) diagram fails validation".into()
    });
    c.check(AssembledDiagrams, pk.validate(), || {
        "K(D) diagram fails validation".into()
    });
    match kp.monodromies() {
        Ok((_, mp)) => c.check(AssembledDiagrams, mp.same_matrix(&spherical.m_plus), || {
            "K(X//±) diagram monodromy != m+".into()
        }),
        Err(e) => c.check(AssembledDiagrams, false, || e.to_string()),
    }
    match pk.monodromies() {
        Ok((mm, _)) => c.check(
            AssembledDiagrams,
            mm.scalar() == Some(&spherical.m_prime),
            || "K(D) diagram monodromy != m'".into(),
        ),
        Err(e) => c.check(AssembledDiagrams, false, || e.to_string()),
    }

    c.check_result(MonodromyConjugacy, conjugacy_holds(kp), "K(X//±) diagram");
    c.check_result(MonodromyConjugacy, conjugacy_holds(pk), "K(D) diagram");

    let primary = primary_verdict(spherical);
    let parity = parity_check(model);
    c.check(
        ParityImpliesSaturated,
        !parity.prediction || primary.saturated,
        || "parity predicts saturation but the criterion is not saturated".into(),
    );

    // to_ggm verifies its own certificate
    let kp_quiver = kp.to_ggm().map(|(g, _)| g);
    let pk_quiver = pk.to_ggm().map(|(g, _)| g);

    match kp_quiver
        .as_ref()
        .map_err(Clone::clone)
        .and_then(|g| g.defect_report())
    {
        Ok(d) => c.check(
            DefectConsistency,
            d.skyscraper_count == 1 - primary.rank && d.is_ic == primary.saturated,
            || {
                format!(
                    "quiver defect {} vs 1 - rank {}",
                    d.skyscraper_count, primary.rank
                )
            },
        ),
        Err(e) => c.check(DefectConsistency, false, || e.to_string()),
    }

    for (quiver, name) in [
        (&kp_quiver, "K(X//±) diagram"),
        (&pk_quiver, "K(D) diagram"),
    ] {
        let r = quiver
            .as_ref()
            .map_err(Clone::clone)
            .and_then(round_trip_holds);
        c.check_result(QuiverRoundTrip, r, name);
    }

    c.violations
}

/// Computes the full report, failing with `InternalInvariantViolation` if
/// any cross-check does not hold.
pub fn full_report(model: &WallModel) -> Result<WallReport> {
    let comp = WallComputation::new(model)?;
    if let Some(v) = check_invariants(model, &comp).into_iter().next() {
        return Err(Error::InternalInvariantViolation(format!(
            "{} for weights {:?}: {}",
            v.family.name(),
            model.weights(),
            v.detail
        )));
    }
    Ok(comp.into_report(model))
}

impl WallComputation {
    /// Packages the computed maps and verdicts without re-running the
    /// cross-checks; [`full_report`] is the checked entry point.
    pub fn into_report(self, model: &WallModel) -> WallReport {
        assemble_report(model, self)
    }
}

fn assemble_report(model: &WallModel, comp: WallComputation) -> WallReport {
    let ic_primary = primary_verdict(&comp.spherical);
    let ic_dual = dual_verdict(&comp.spherical, model.eta());
    let WallComputation {
        res,
        iota,
        spherical,
        ..
    } = comp;
    WallReport {
        weights: model.weights().to_vec(),
        window_base: model.window_base(),
        eta: model.eta(),
        codim_z: model.codim_z(),
        bases: model.bases(),
        matrices: ReportMatrices {
            res_minus: res.res_minus,
            res_plus: res.res_plus,
            res_minus_star: res.res_minus_star,
            res_plus_star: res.res_plus_star,
            star_res_minus: res.star_res_minus,
            star_res_plus: res.star_res_plus,
            iota_minus: iota.iota_minus,
            iota_plus: iota.iota_plus,
            star_iota_minus: iota.star_iota_minus,
            iota_minus_star: iota.iota_minus_star,
            star_iota_plus: iota.star_iota_plus,
            iota_plus_star: iota.iota_plus_star,
            k_s: spherical.k_s,
            k_s_star: spherical.k_s_star,
        },
        m_plus: spherical.m_plus,
        m_prime: spherical.m_prime,
        ic_primary,
        ic_dual,
        parity: parity_check(model),
        defect: 1 - ic_primary.rank,
    }
}

/// Defect of the assembled `K(X//±)` diagram, read off its quiver form.
pub fn kp_defect_report(model: &WallModel) -> Result<DefectReport> {
    let (g, _) = super::maps::assemble_kp(model)?.to_ggm()?;
    g.defect_report()
}
