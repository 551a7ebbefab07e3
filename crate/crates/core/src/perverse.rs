//! Perverse sheaves on a disk singular at the origin, as finite linear data.
//!
//! Two presentations are supported: the vanishing/nearby-cycles quiver
//! ([`GgmDiagram`], spaces `D0`, `D1` with `u: D1 -> D0`, `v: D0 -> D1` and
//! `vu + 1` invertible) and the skeleton presentation ([`KsDiagram`], spaces
//! `E-`, `E0`, `E+` with embeddings `f±` and projections `g±`). Conversions
//! in both directions are exact; the skeleton-to-quiver direction returns an
//! explicit isomorphism certificate instead of relying on an isomorphism
//! search.

use serde::{Deserialize, Serialize};

use crate::algebra::{default_labels, LinearMap};
use crate::error::{Error, Result};

fn expect_shape(m: &LinearMap, rows: usize, cols: usize, name: &str) -> Result<()> {
    if m.rows() != rows || m.cols() != cols {
        return Err(Error::shape(format!(
            "{name} is {}x{}, expected {rows}x{cols}",
            m.rows(),
            m.cols()
        )));
    }
    Ok(())
}

fn labelled(m: LinearMap, codomain: &[String], domain: &[String]) -> LinearMap {
    m.with_bases(codomain.to_vec(), domain.to_vec())
        .expect("label lists sized from the same dimensions")
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "GgmJson")]
pub struct GgmDiagram {
    d0: usize,
    d1: usize,
    u: LinearMap,
    v: LinearMap,
}

#[derive(Deserialize)]
struct GgmJson {
    d0: usize,
    d1: usize,
    u: LinearMap,
    v: LinearMap,
}

impl TryFrom<GgmJson> for GgmDiagram {
    type Error = Error;
    fn try_from(raw: GgmJson) -> Result<Self> {
        GgmDiagram::new(raw.d0, raw.d1, raw.u, raw.v)
    }
}

impl GgmDiagram {
    /// `u: D1 -> D0` is `d0 x d1`, `v: D0 -> D1` is `d1 x d0`.
    pub fn new(d0: usize, d1: usize, u: LinearMap, v: LinearMap) -> Result<Self> {
        expect_shape(&u, d0, d1, "u")?;
        expect_shape(&v, d1, d0, "v")?;
        let (b0, b1) = (default_labels("D0.", d0), default_labels("D1.", d1));
        Ok(Self {
            d0,
            d1,
            u: labelled(u, &b0, &b1),
            v: labelled(v, &b1, &b0),
        })
    }

    /// The skyscraper at the origin: `C <-> 0`.
    pub fn skyscraper() -> Self {
        Self::new(1, 0, LinearMap::zeros(1, 0), LinearMap::zeros(0, 1)).expect("fixed shapes")
    }

    /// The zero perverse sheaf.
    pub fn zero() -> Self {
        Self::new(0, 0, LinearMap::zeros(0, 0), LinearMap::zeros(0, 0)).expect("fixed shapes")
    }

    /// Intermediate extension of the local system with monodromy `m`.
    ///
    /// `D1` is the fibre, `D0 = im(m - 1)` in the pivot-column basis,
    /// `u = m - 1` corestricted to its image and `v` the inclusion, so
    /// `vu = m - 1`.
    pub fn from_monodromy(m: &LinearMap) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::shape(format!(
                "monodromy is {}x{}",
                m.rows(),
                m.cols()
            )));
        }
        if !m.is_invertible() {
            return Err(Error::Singular {
                rank: m.rank(),
                size: m.rows(),
            });
        }
        let a = m.minus_identity()?;
        let (reduced, pivots) = a.rref();
        let r = pivots.len();
        let inclusion = a.select_columns(&pivots);
        let coords = reduced.select_rows(&(0..r).collect::<Vec<_>>());
        Self::new(r, m.rows(), coords, inclusion)
    }

    pub fn d0(&self) -> usize {
        self.d0
    }

    pub fn d1(&self) -> usize {
        self.d1
    }

    pub fn u(&self) -> &LinearMap {
        &self.u
    }

    pub fn v(&self) -> &LinearMap {
        &self.v
    }

    /// `m = vu + 1` on `D1`.
    pub fn monodromy(&self) -> LinearMap {
        self.v
            .compose(&self.u)
            .and_then(|vu| vu.plus_identity())
            .expect("shapes checked at construction")
    }

    /// `uv + 1` on `D0`; invertible exactly when [`Self::monodromy`] is.
    pub fn variation_monodromy(&self) -> LinearMap {
        self.u
            .compose(&self.v)
            .and_then(|uv| uv.plus_identity())
            .expect("shapes checked at construction")
    }

    pub fn validate(&self) -> bool {
        self.monodromy().is_invertible()
    }

    fn require_valid(&self) -> Result<()> {
        if self.validate() {
            Ok(())
        } else {
            Err(Error::InvalidInput("vu + 1 is not invertible".into()))
        }
    }

    /// Block-diagonal sum.
    pub fn direct_sum(&self, other: &GgmDiagram) -> Result<GgmDiagram> {
        self.require_valid()?;
        other.require_valid()?;
        Self::new(
            self.d0 + other.d0,
            self.d1 + other.d1,
            self.u.block_diag(&other.u),
            self.v.block_diag(&other.v),
        )
    }

    /// Skeleton presentation on `E0 = D0 ⊕ D1`:
    /// `f- = (u; 1)`, `g- = (0 1)`, `f+ = (0; 1)`, `g+ = (v 1)`.
    pub fn to_ks(&self) -> Result<KsDiagram> {
        self.require_valid()?;
        let (d0, d1) = (self.d0, self.d1);
        let id = LinearMap::identity(d1);
        let zero_col = LinearMap::zeros(d0, d1);
        let zero_row = LinearMap::zeros(d1, d0);
        KsDiagram::new(
            d1,
            d0 + d1,
            d1,
            self.u.vstack(&id)?,
            zero_col.vstack(&id)?,
            zero_row.hstack(&id)?,
            self.v.hstack(&id)?,
        )
    }

    pub fn defect_report(&self) -> Result<DefectReport> {
        self.require_valid()?;
        let drop = self.v.compose(&self.u)?.rank();
        Ok(DefectReport::new(self.d0, drop))
    }
}

/// Composition-factor accounting for a perverse sheaf: how many copies of
/// the skyscraper it carries beyond its intermediate extension.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DefectReport {
    pub vanishing_dim: usize,
    pub nearby_rank_drop: usize,
    pub skyscraper_count: usize,
    pub is_ic: bool,
}

impl DefectReport {
    fn new(vanishing_dim: usize, nearby_rank_drop: usize) -> Self {
        // rk(vu) <= rk(u) <= d0
        let skyscraper_count = vanishing_dim - nearby_rank_drop;
        Self {
            vanishing_dim,
            nearby_rank_drop,
            skyscraper_count,
            is_ic: skyscraper_count == 0,
        }
    }
}

impl std::ops::Add for DefectReport {
    type Output = DefectReport;
    fn add(self, rhs: DefectReport) -> DefectReport {
        DefectReport::new(
            self.vanishing_dim + rhs.vanishing_dim,
            self.nearby_rank_drop + rhs.nearby_rank_drop,
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "KsJson")]
pub struct KsDiagram {
    e_minus: usize,
    e0: usize,
    e_plus: usize,
    f_minus: LinearMap,
    f_plus: LinearMap,
    g_minus: LinearMap,
    g_plus: LinearMap,
}

#[derive(Deserialize)]
struct KsJson {
    e_minus: usize,
    e0: usize,
    e_plus: usize,
    f_minus: LinearMap,
    f_plus: LinearMap,
    g_minus: LinearMap,
    g_plus: LinearMap,
}

impl TryFrom<KsJson> for KsDiagram {
    type Error = Error;
    fn try_from(raw: KsJson) -> Result<Self> {
        KsDiagram::new(
            raw.e_minus,
            raw.e0,
            raw.e_plus,
            raw.f_minus,
            raw.f_plus,
            raw.g_minus,
            raw.g_plus,
        )
    }
}

impl KsDiagram {
    /// Builds a diagram, checking only that the four maps have the right
    /// shapes. Basis labels on the maps are kept as given.
    pub fn new(
        e_minus: usize,
        e0: usize,
        e_plus: usize,
        f_minus: LinearMap,
        f_plus: LinearMap,
        g_minus: LinearMap,
        g_plus: LinearMap,
    ) -> Result<Self> {
        expect_shape(&f_minus, e0, e_minus, "f-")?;
        expect_shape(&f_plus, e0, e_plus, "f+")?;
        expect_shape(&g_minus, e_minus, e0, "g-")?;
        expect_shape(&g_plus, e_plus, e0, "g+")?;
        Ok(Self {
            e_minus,
            e0,
            e_plus,
            f_minus,
            f_plus,
            g_minus,
            g_plus,
        })
    }

    pub fn dims(&self) -> (usize, usize, usize) {
        (self.e_minus, self.e0, self.e_plus)
    }

    pub fn f_minus(&self) -> &LinearMap {
        &self.f_minus
    }

    pub fn f_plus(&self) -> &LinearMap {
        &self.f_plus
    }

    pub fn g_minus(&self) -> &LinearMap {
        &self.g_minus
    }

    pub fn g_plus(&self) -> &LinearMap {
        &self.g_plus
    }

    fn product(a: &LinearMap, b: &LinearMap) -> LinearMap {
        a.compose(b).expect("shapes checked at construction")
    }

    /// `g- f+ : E+ -> E-`.
    pub fn transfer_plus_to_minus(&self) -> LinearMap {
        Self::product(&self.g_minus, &self.f_plus)
    }

    /// `g+ f- : E- -> E+`.
    pub fn transfer_minus_to_plus(&self) -> LinearMap {
        Self::product(&self.g_plus, &self.f_minus)
    }

    /// `g± f± = 1` and `g± f∓` invertible.
    pub fn validate(&self) -> bool {
        Self::product(&self.g_minus, &self.f_minus).is_identity()
            && Self::product(&self.g_plus, &self.f_plus).is_identity()
            && self.transfer_plus_to_minus().is_invertible()
            && self.transfer_minus_to_plus().is_invertible()
    }

    fn require_valid(&self) -> Result<()> {
        if self.validate() {
            Ok(())
        } else {
            Err(Error::InvalidInput(
                "skeleton diagram fails g±f± = 1 or g±f∓ invertible".into(),
            ))
        }
    }

    /// `(m-, m+) = (g- f+ g+ f-, g+ f- g- f+)`.
    pub fn monodromies(&self) -> Result<(LinearMap, LinearMap)> {
        self.require_valid()?;
        let a = self.transfer_plus_to_minus();
        let b = self.transfer_minus_to_plus();
        Ok((a.compose(&b)?, b.compose(&a)?))
    }

    /// Inverse of [`GgmDiagram::to_ks`].
    ///
    /// `D1 = E-` and `D0 = ker g-`; `E0` splits as `ker g- ⊕ im f+`, `u` is
    /// `f-` projected to `ker g-` along `im f+`, and `v = ψ g+` on `ker g-`
    /// with `ψ = g- f+`. The returned certificate is checked against
    /// `to_ks()` of the result before returning.
    pub fn to_ggm(&self) -> Result<(GgmDiagram, KsCertificate)> {
        self.require_valid()?;
        let (em, e0, ep) = self.dims();
        let kernel = LinearMap::from_columns(&self.g_minus.kernel_basis(), e0)?;
        let d0 = kernel.cols();
        if d0 + ep != e0 {
            return Err(Error::CertificateFailure(format!(
                "ker g- has dimension {d0}, expected {}",
                e0 as isize - ep as isize
            )));
        }
        let splitting = kernel.hstack(&self.f_plus)?.invert().map_err(|e| {
            Error::CertificateFailure(format!("ker g- and im f+ do not span E0: {e}"))
        })?;
        let to_kernel = splitting.select_rows(&(0..d0).collect::<Vec<_>>());
        let to_plus = splitting.select_rows(&(d0..e0).collect::<Vec<_>>());
        let psi = self.transfer_plus_to_minus();

        let u = to_kernel.compose(&self.f_minus)?;
        let v = psi.compose(&self.g_plus)?.compose(&kernel)?;
        let ggm = GgmDiagram::new(d0, em, u, v)?;

        let alpha = to_kernel.vstack(&psi.compose(&to_plus)?)?;
        let cert = KsCertificate {
            minus: LinearMap::identity(em),
            middle: alpha,
            plus: psi,
        };
        let target = ggm
            .to_ks()
            .map_err(|e| Error::CertificateFailure(format!("recovered quiver is invalid: {e}")))?;
        cert.verify(self, &target)?;
        Ok((ggm, cert))
    }
}

/// Isomorphism of skeleton diagrams given by one map per vertex.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct KsCertificate {
    /// `E- -> E'-`
    pub minus: LinearMap,
    /// `E0 -> E'0`
    pub middle: LinearMap,
    /// `E+ -> E'+`
    pub plus: LinearMap,
}

impl KsCertificate {
    /// Checks that all three maps are invertible and intertwine every arrow
    /// of `source` with the matching arrow of `target`.
    pub fn verify(&self, source: &KsDiagram, target: &KsDiagram) -> Result<()> {
        let fail = |what: &str| Err(Error::CertificateFailure(what.to_string()));
        for (m, name) in [
            (&self.minus, "E-"),
            (&self.middle, "E0"),
            (&self.plus, "E+"),
        ] {
            if !m.is_invertible() {
                return fail(&format!("map on {name} is not invertible"));
            }
        }
        let same = |a: Result<LinearMap>, b: Result<LinearMap>| match (a, b) {
            (Ok(a), Ok(b)) => a.same_matrix(&b),
            _ => false,
        };
        if !same(
            self.middle.compose(&source.f_minus),
            target.f_minus.compose(&self.minus),
        ) {
            return fail("f- not intertwined");
        }
        if !same(
            self.middle.compose(&source.f_plus),
            target.f_plus.compose(&self.plus),
        ) {
            return fail("f+ not intertwined");
        }
        if !same(
            self.minus.compose(&source.g_minus),
            target.g_minus.compose(&self.middle),
        ) {
            return fail("g- not intertwined");
        }
        if !same(
            self.plus.compose(&source.g_plus),
            target.g_plus.compose(&self.middle),
        ) {
            return fail("g+ not intertwined");
        }
        Ok(())
    }
}
