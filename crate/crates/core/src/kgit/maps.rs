use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::model::{exponent_labels, Side, WallModel};
use crate::algebra::{serde_rational, window_reduce, Laurent, LinearMap, Rational};
use crate::error::Result;
use crate::perverse::KsDiagram;

/// Label of the single basis vector of `K(D)`, the K-theory of the fixed
/// locus window.
pub const FIXED_LOCUS_LABEL: &str = "O_Z";

/// `(-1)^k`.
pub(crate) fn signed_unit(k: usize) -> Rational {
    if k.is_multiple_of(2) {
        Rational::one()
    } else {
        -Rational::one()
    }
}

/// Matrix sending `t^e` (for `e` in `domain`) to its representative modulo
/// `q` in `[lo, lo + width - 1]`, read in the basis `codomain`.
fn reduction_matrix(
    domain: &[i64],
    codomain: &[i64],
    q: &Laurent,
    width: i64,
) -> Result<LinearMap> {
    let lo = codomain[0];
    let mut columns = Vec::with_capacity(domain.len());
    for &e in domain {
        let r = window_reduce(&Laurent::t_pow(e), q, lo, width)?;
        columns.push(
            r.to_coords(lo, codomain.len())
                .expect("window_reduce lands in the window"),
        );
    }
    LinearMap::from_columns(&columns, codomain.len())?
        .with_bases(exponent_labels(codomain), exponent_labels(domain))
}

/// Coordinate inclusion of a sub-window into a larger exponent range.
fn inclusion(sub: &[i64], ambient: &[i64]) -> LinearMap {
    let columns: Vec<Vec<Rational>> = sub
        .iter()
        .map(|e| {
            ambient
                .iter()
                .map(|a| {
                    if a == e {
                        Rational::one()
                    } else {
                        Rational::zero()
                    }
                })
                .collect()
        })
        .collect();
    LinearMap::from_columns(&columns, ambient.len())
        .and_then(|m| m.with_bases(exponent_labels(ambient), exponent_labels(sub)))
        .expect("distinct exponents")
}

/// Restriction functors to the two GIT quotients and their adjoints, on
/// Grothendieck groups.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StructureMaps {
    /// `K(C) -> K(X//-)`: reduce modulo `q-` into the lower window.
    pub res_minus: LinearMap,
    /// `K(C) -> K(X//+)`: reduce modulo `q+` into the upper window.
    pub res_plus: LinearMap,
    /// Right adjoint of `res-`: inclusion of the lower window.
    pub res_minus_star: LinearMap,
    /// Right adjoint of `res+`: inclusion of the upper window.
    pub res_plus_star: LinearMap,
    /// Left adjoint of `res-`: representative modulo `q-` in `[k0+1, k0+η]`.
    pub star_res_minus: LinearMap,
    /// Left adjoint of `res+`: representative modulo `q+` in `[k0, k0+η-1]`.
    pub star_res_plus: LinearMap,
}

pub fn structure_maps(model: &WallModel) -> Result<StructureMaps> {
    let b = model.bases();
    let eta = model.eta();
    let (qm, qp) = (model.q_minus(), model.q_plus());
    let res_minus = reduction_matrix(&b.c_basis, &b.g_minus_basis, qm, eta)?;
    let res_plus = reduction_matrix(&b.c_basis, &b.g_plus_basis, qp, eta)?;
    // the left adjoints land in the opposite window
    let star_res_minus = inclusion(&b.g_plus_basis, &b.c_basis).compose(&reduction_matrix(
        &b.g_minus_basis,
        &b.g_plus_basis,
        qm,
        eta,
    )?)?;
    let star_res_plus = inclusion(&b.g_minus_basis, &b.c_basis).compose(&reduction_matrix(
        &b.g_plus_basis,
        &b.g_minus_basis,
        qp,
        eta,
    )?)?;
    Ok(StructureMaps {
        res_minus,
        res_plus,
        res_minus_star: inclusion(&b.g_minus_basis, &b.c_basis),
        res_plus_star: inclusion(&b.g_plus_basis, &b.c_basis),
        star_res_minus,
        star_res_plus,
    })
}

/// Embeddings of `K(D)` into `K(C)` by the blade classes, with both adjoints.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IotaMaps {
    /// `1 -> t^k0 · q-`
    pub iota_minus: LinearMap,
    /// `1 -> t^(k0+η) · q+`
    pub iota_plus: LinearMap,
    /// Left adjoint of `ι-`: coefficient of `t^k0`.
    pub star_iota_minus: LinearMap,
    /// Right adjoint of `ι-`: `(-1)^p` times the coefficient of `t^(k0+η)`.
    pub iota_minus_star: LinearMap,
    /// Left adjoint of `ι+`: coefficient of `t^(k0+η)`.
    pub star_iota_plus: LinearMap,
    /// Right adjoint of `ι+`: `(-1)^n` times the coefficient of `t^k0`.
    pub iota_plus_star: LinearMap,
}

pub fn iota_maps(model: &WallModel) -> Result<IotaMaps> {
    let b = model.bases();
    let (k0, eta) = (model.window_base(), model.eta());
    let len = b.c_basis.len();
    let c_labels = exponent_labels(&b.c_basis);
    let d_label = vec![FIXED_LOCUS_LABEL.to_string()];

    let embed = |class: Laurent| -> Result<LinearMap> {
        let coords = class
            .to_coords(k0, len)
            .expect("blade class fits the window");
        LinearMap::from_columns(&[coords], len)?.with_bases(c_labels.clone(), d_label.clone())
    };
    let pick = |exp: i64, s: Rational| -> Result<LinearMap> {
        let row: Vec<Rational> = b
            .c_basis
            .iter()
            .map(|&e| {
                if e == exp {
                    s.clone()
                } else {
                    Rational::zero()
                }
            })
            .collect();
        LinearMap::from_rows(&[row], len)?.with_bases(d_label.clone(), c_labels.clone())
    };

    Ok(IotaMaps {
        iota_minus: embed(model.koszul_class(Side::Minus, k0))?,
        iota_plus: embed(model.koszul_class(Side::Plus, k0 + eta))?,
        star_iota_minus: pick(k0, Rational::one())?,
        iota_minus_star: pick(k0 + eta, signed_unit(model.positive_count()))?,
        star_iota_plus: pick(k0 + eta, Rational::one())?,
        iota_plus_star: pick(k0, signed_unit(model.negative_count()))?,
    })
}

/// The spherical functor `S = res+ ∘ ι-` and its right adjoint on K-theory,
/// with the induced twist and cotwist.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SphericalData {
    /// `K(S): K(D) -> K(X//+)`
    pub k_s: LinearMap,
    /// `K(S*): K(X//+) -> K(D)`
    pub k_s_star: LinearMap,
    /// Twist `1 - K(S)K(S*)` on `K(X//+)`.
    pub m_plus: LinearMap,
    /// Cotwist `1 - K(S*)K(S)` on `K(D)`.
    #[serde(with = "serde_rational")]
    pub m_prime: Rational,
}

pub fn spherical_data(model: &WallModel) -> Result<SphericalData> {
    spherical_from(&structure_maps(model)?, &iota_maps(model)?)
}

pub(crate) fn spherical_from(res: &StructureMaps, iota: &IotaMaps) -> Result<SphericalData> {
    let k_s = res.res_plus.compose(&iota.iota_minus)?;
    let k_s_star = iota.iota_minus_star.compose(&res.res_plus_star)?;
    let m_plus = LinearMap::identity(k_s.rows())
        .with_bases(k_s.codomain_basis().to_vec(), k_s.codomain_basis().to_vec())?
        .sub(&k_s.compose(&k_s_star)?)?;
    let inner = k_s_star.compose(&k_s)?;
    let m_prime = Rational::one() - inner.scalar().expect("K(D) has rank one");
    Ok(SphericalData {
        k_s,
        k_s_star,
        m_plus,
        m_prime,
    })
}

/// Twist computed the other way round, as the wall-crossing round trip
/// `res+ res-* res- res+*` on `K(X//+)`.
pub fn flop_flop(res: &StructureMaps) -> Result<LinearMap> {
    res.res_plus
        .compose(&res.res_minus_star)?
        .compose(&res.res_minus)?
        .compose(&res.res_plus_star)
}

/// Skeleton diagram on `K(C)` with `E± = K(X//±)`, `f± = res±*`, `g± = res±`.
pub fn assemble_kp(model: &WallModel) -> Result<KsDiagram> {
    kp_from(&structure_maps(model)?, model.eta())
}

pub(crate) fn kp_from(res: &StructureMaps, eta: i64) -> Result<KsDiagram> {
    let eta = eta as usize;
    KsDiagram::new(
        eta,
        eta + 1,
        eta,
        res.res_minus_star.clone(),
        res.res_plus_star.clone(),
        res.res_minus.clone(),
        res.res_plus.clone(),
    )
}

/// Skeleton diagram on `K(C)` with `E± = K(D)`, `f± = ι±`, `g± = ι±*`.
pub fn assemble_pk(model: &WallModel) -> Result<KsDiagram> {
    pk_from(&iota_maps(model)?, model.eta())
}

pub(crate) fn pk_from(iota: &IotaMaps, eta: i64) -> Result<KsDiagram> {
    KsDiagram::new(
        1,
        eta as usize + 1,
        1,
        iota.iota_minus.clone(),
        iota.iota_plus.clone(),
        iota.iota_minus_star.clone(),
        iota.iota_plus_star.clone(),
    )
}

/// Outcome of a rank inequality `rank <= bound`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct IcVerdict {
    pub rank: usize,
    pub bound: usize,
    pub saturated: bool,
}

impl IcVerdict {
    fn new(rank: usize, bound: usize) -> Self {
        Self {
            rank,
            bound,
            saturated: rank == bound,
        }
    }
}

/// `rk(m+ - 1) <= dim K(D) = 1`, saturated exactly when the perverse sheaf
/// built from `K(X//±)` is the intermediate extension of its local system.
pub fn ic_criterion(model: &WallModel) -> Result<IcVerdict> {
    Ok(primary_verdict(&spherical_data(model)?))
}

pub(crate) fn primary_verdict(sph: &SphericalData) -> IcVerdict {
    let rank = sph.m_plus.minus_identity().expect("twist is square").rank();
    IcVerdict::new(rank, 1)
}

/// `rk(m' - 1) <= dim K(X//+) = η`, the dual criterion for the diagram
/// built from `K(D)`.
pub fn dual_ic_criterion(model: &WallModel) -> Result<IcVerdict> {
    Ok(dual_verdict(&spherical_data(model)?, model.eta()))
}

pub(crate) fn dual_verdict(sph: &SphericalData, eta: i64) -> IcVerdict {
    let rank = usize::from(!sph.m_prime.is_one());
    IcVerdict::new(rank, eta as usize)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParityCheck {
    /// The determinant of the normal bundle of `Z` is equivariantly trivial.
    pub lemma_conditions: bool,
    pub codim_odd: bool,
    /// Sufficient condition for saturation of the primary criterion.
    pub prediction: bool,
}

pub fn parity_check(model: &WallModel) -> ParityCheck {
    let normal_weight: i128 = model
        .weights()
        .iter()
        .filter(|&&a| a != 0)
        .map(|&a| a as i128)
        .sum();
    let lemma_conditions = normal_weight == 0;
    let codim_odd = model.codim_z() % 2 == 1;
    ParityCheck {
        lemma_conditions,
        codim_odd,
        prediction: lemma_conditions && codim_odd,
    }
}
