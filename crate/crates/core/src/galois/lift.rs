//! Lifting an extension along a surjection `R' → R''` by lifting its parameter.

use serde::Serialize;

use super::{build_extension, GaloisCertificate, GaloisExt};
use crate::error::{ensure, Error, Result};
use crate::ring::{RingElem, RingHom};

/// A preimage of `y` under `h`.
///
/// When `h` is the canonical map between presentations with the same
/// variables, the normal form of `y` read in the source is used; otherwise
/// the first preimage in coordinate order of a finite source.
pub fn preimage(h: &RingHom, y: &RingElem) -> Result<RingElem> {
    let src = h.source();
    ensure!(y.ctx().same(h.target()), Structural, "element is not in the target of the map");
    if src.var_names() == h.target().var_names() && y.den_power() == 0 {
        if let Ok(x) = src.from_poly(y.terms().clone()) {
            if h.apply(&x)? == *y {
                return Ok(x);
            }
        }
    }
    if src.is_finite() {
        for x in src.elements()? {
            if h.apply(&x)? == *y {
                return Ok(x);
            }
        }
        return Err(Error::Argument(format!("{y} has no preimage: the map is not surjective")));
    }
    Err(Error::Unsupported(format!("cannot search for preimages in {}", src.describe())))
}

#[derive(Clone, Debug, Serialize)]
pub struct LiftReport {
    pub source_ring: String,
    pub target_ring: String,
    pub target_a: String,
    pub lifted_a: String,
    pub lifted: GaloisCertificate,
    pub target: GaloisCertificate,
    /// `θ ↦ θ''` (and `h` on the base) is a ring map `S' → S''`.
    pub reduction_map: bool,
    /// That map intertwines the two σ's.
    pub sigma_equivariant: bool,
    /// Rebuilding over `R''` from `h(a')` reproduces the target extension and its certificate.
    pub reduction_matches: bool,
}

impl LiftReport {
    pub fn passed(&self) -> bool {
        self.lifted.passed()
            && self.target.passed()
            && self.reduction_map
            && self.sigma_equivariant
            && self.reduction_matches
    }
}

pub fn lift_extension(h: &RingHom, target: &GaloisExt) -> Result<(GaloisExt, LiftReport)> {
    ensure!(h.target().same(&target.base), Structural, "the map does not land in the base of the extension");
    let a1 = preimage(h, &target.a)?;
    let lifted = build_extension(h.source(), &a1).map_err(|e| match e {
        Error::UnitRequired(m) => Error::Argument(format!("unit-lifting hypothesis violated: {m}")),
        other => other,
    })?;
    let mut images = Vec::new();
    for v in 0..h.source().nvars() {
        images.push(target.ext.embed(&h.images()[v])?);
    }
    images.push(target.theta.clone());
    let big = RingHom::new(&lifted.ext, &target.ext, images, h.coeff_map());
    let reduction_map = big.is_ok();
    let sigma_equivariant = match &big {
        Ok(big) => {
            let mut ok = true;
            for v in 0..lifted.ext.nvars() {
                let g = lifted.ext.var_at(v);
                ok &= big.apply(&lifted.sigma.apply(&g)?)? == target.sigma.apply(&big.apply(&g)?)?;
            }
            ok
        }
        Err(_) => false,
    };
    let reduced_a = h.apply(&a1)?;
    let rebuilt = build_extension(&target.base, &reduced_a)?;
    let reduction_matches = reduced_a == target.a
        && rebuilt.certificate == target.certificate
        && rebuilt.ext.same_presentation(&target.ext);
    let report = LiftReport {
        source_ring: h.source().describe(),
        target_ring: target.base.describe(),
        target_a: target.a.to_string(),
        lifted_a: a1.to_string(),
        lifted: lifted.certificate.clone(),
        target: target.certificate.clone(),
        reduction_map,
        sigma_equivariant,
        reduction_matches,
    };
    Ok((lifted, report))
}
