//! Entropy lower-bound certificates with a content hash over everything
//! they claim, and revalidation from the recorded provenance.

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::analytic::Disk;
use crate::function::EntireMap;
use crate::polylike::{certify_polylike, PolyLikeRestriction};
use crate::ComplexVal;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Route {
    Polylike,
    Horseshoe,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ZeroSearch {
    pub radius: f64,
    pub zeros: i64,
    /// Sampled maximum of `|f|` on the circle, before inflation.
    pub max_modulus: f64,
    pub inflated: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolylikeProvenance {
    /// Map before rescaling.
    pub function: String,
    /// `n` in `f(n z)/n`; `1` when the map was certified directly.
    pub rescale_index: u64,
    pub zero_search: Option<ZeroSearch>,
    pub d: Disk,
    pub v: Disk,
    pub seed: ComplexVal,
    pub degree: u32,
    pub traversals: u32,
    pub winding: i64,
    pub preimages: usize,
    pub critical_points: i64,
    pub containment_margin: f64,
    pub boundary_points: usize,
    /// `m` in the bound `log m`, at most `degree`.
    pub claimed: u32,
}

impl PolylikeProvenance {
    pub fn from_restriction(f: &EntireMap, p: &PolyLikeRestriction, claimed: u32) -> Self {
        PolylikeProvenance {
            function: f.source().to_string(),
            rescale_index: 1,
            zero_search: None,
            d: p.d,
            v: p.v,
            seed: p.seed,
            degree: p.degree,
            traversals: p.u_boundary.traversals,
            winding: p.winding,
            preimages: p.preimages,
            critical_points: p.critical_points,
            containment_margin: p.containment_margin,
            boundary_points: p.u_boundary.vertices.len(),
            claimed,
        }
    }

    pub fn certified_map(&self) -> Result<EntireMap, String> {
        let f = EntireMap::parse(&self.function).map_err(|e| e.to_string())?;
        Ok(if self.rescale_index == 1 { f } else { f.rescaled(self.rescale_index) })
    }
}

/// One symbol of the second-iterate horseshoe: the island of `f` in the
/// hub disk over the partner disk, and the island in the partner disk over
/// the hub disk.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SymbolLegs {
    pub partner: usize,
    pub out_core: ComplexVal,
    pub back_core: ComplexVal,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HorseshoeProvenance {
    pub function: String,
    pub rescale_index: u64,
    pub centers: Vec<ComplexVal>,
    pub gamma: f64,
    pub delta: f64,
    pub required_out_degree: usize,
    pub min_out_degree: usize,
    pub edge_count: usize,
    pub hub: usize,
    pub symbols: Vec<SymbolLegs>,
    pub contraction_bounds: Vec<f64>,
    pub depth: usize,
    pub tolerance: f64,
    pub max_defect: f64,
    pub threshold: f64,
    pub injectivity_gap: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    Polylike(PolylikeProvenance),
    Horseshoe(HorseshoeProvenance),
}

/// Not part of the hashed content.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CertificateMetadata {
    pub issued_at: String,
    pub tool_version: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EntropyCertificate {
    pub bound: f64,
    pub route: Route,
    pub provenance: Provenance,
    pub notes: Vec<String>,
    pub content_hash: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub metadata: Option<CertificateMetadata>,
}

#[derive(Serialize)]
struct Hashed<'a> {
    bound: f64,
    route: Route,
    provenance: &'a Provenance,
    notes: &'a [String],
}

fn content_hash(bound: f64, route: Route, provenance: &Provenance, notes: &[String]) -> String {
    let body = serde_json::to_vec(&Hashed { bound, route, provenance, notes }).expect("certificate serializes");
    hex::encode(Sha256::digest(&body))
}

pub const POLYLIKE_NOTE: &str = "bound is the entropy of the degree-d polynomial-like restriction; the invariant set carrying it is not constructed";
pub const HORSESHOE_NOTE: &str = "bound is half the entropy of a full shift conjugate to the second iterate, verified to finite depth";

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RevalidationError {
    #[error("content hash mismatch")]
    HashMismatch,
    #[error("bound {bound} does not follow from the provenance (expected {expected})")]
    BoundMismatch { bound: f64, expected: f64 },
    #[error("recorded map is invalid: {0}")]
    BadFunction(String),
    #[error("recorded check no longer passes: {0}")]
    CheckFailed(String),
    #[error("recorded value {field} differs on re-run")]
    Drift { field: &'static str },
}

impl EntropyCertificate {
    pub fn new(provenance: Provenance) -> Self {
        Self::with_notes(provenance, Vec::new())
    }

    pub fn with_notes(provenance: Provenance, mut extra: Vec<String>) -> Self {
        let (route, bound, note) = match &provenance {
            Provenance::Polylike(p) => (Route::Polylike, f64::from(p.claimed).ln(), POLYLIKE_NOTE),
            Provenance::Horseshoe(h) => (Route::Horseshoe, 0.5 * (h.symbols.len() as f64).ln(), HORSESHOE_NOTE),
        };
        let mut notes = vec![note.to_string()];
        notes.append(&mut extra);
        let content_hash = content_hash(bound, route, &provenance, &notes);
        EntropyCertificate { bound, route, provenance, notes, content_hash, metadata: None }
    }

    pub fn hash_matches(&self) -> bool {
        content_hash(self.bound, self.route, &self.provenance, &self.notes) == self.content_hash
    }

    /// Canonical JSON (metadata included only when present).
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("certificate serializes")
    }

    /// Re-runs every recorded check from the provenance alone.
    pub fn revalidate(&self) -> Result<(), RevalidationError> {
        if !self.hash_matches() {
            return Err(RevalidationError::HashMismatch);
        }
        match &self.provenance {
            Provenance::Polylike(p) => revalidate_polylike(self.bound, p),
            Provenance::Horseshoe(h) => {
                let expected = 0.5 * (h.symbols.len() as f64).ln();
                if self.bound != expected || self.route != Route::Horseshoe {
                    return Err(RevalidationError::BoundMismatch { bound: self.bound, expected });
                }
                crate::rescale::revalidate_horseshoe(h)
            }
        }
    }
}

fn revalidate_polylike(bound: f64, p: &PolylikeProvenance) -> Result<(), RevalidationError> {
    let expected = f64::from(p.claimed).ln();
    if bound != expected || p.claimed > p.degree || p.claimed == 0 {
        return Err(RevalidationError::BoundMismatch { bound, expected });
    }
    if let Some(zs) = &p.zero_search {
        let base = EntireMap::parse(&p.function).map_err(|e| RevalidationError::BadFunction(e.to_string()))?;
        let zeros = crate::rescale::count_zeros(&base, zs.radius).map_err(|e| RevalidationError::CheckFailed(e.to_string()))?;
        if zeros != zs.zeros {
            return Err(RevalidationError::Drift { field: "zeros" });
        }
    }
    let f = p.certified_map().map_err(RevalidationError::BadFunction)?;
    let r = certify_polylike(&f, &p.d, &p.v, p.seed).map_err(|e| RevalidationError::CheckFailed(e.to_string()))?;
    if r.degree != p.degree || r.winding != p.winding || r.preimages != p.preimages || r.critical_points != p.critical_points {
        return Err(RevalidationError::Drift { field: "degree" });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::function::parse_map;
    use crate::polylike::{certify_polylike, entropy_from_polylike};

    fn quadratic() -> (EntireMap, EntropyCertificate) {
        let f = parse_map("z^2 - 0.1").unwrap();
        let v = Disk::new(ComplexVal::new(0.0, 0.0), 2.0);
        let p = certify_polylike(&f, &v, &v, ComplexVal::new(0.0, 0.0)).unwrap();
        let cert = entropy_from_polylike(&f, &p);
        (f, cert)
    }

    #[test]
    fn bounds_follow_the_degree() {
        let mk = |degree: u32| {
            EntropyCertificate::new(Provenance::Polylike(PolylikeProvenance {
                function: "z".into(),
                rescale_index: 1,
                zero_search: None,
                d: Disk::new(ComplexVal::new(0.0, 0.0), 1.0),
                v: Disk::new(ComplexVal::new(0.0, 0.0), 1.0),
                seed: ComplexVal::new(0.0, 0.0),
                degree,
                traversals: degree,
                winding: degree as i64,
                preimages: degree as usize,
                critical_points: degree as i64 - 1,
                containment_margin: 0.1,
                boundary_points: 10,
                claimed: degree,
            }))
        };
        assert_eq!(mk(1).bound, 0.0);
        assert_eq!(mk(2).bound, 2f64.ln());
        assert!((mk(9).bound - 2.19722).abs() < 1e-5);
    }

    #[test]
    fn hash_is_stable_and_covers_the_content() {
        let (_, a) = quadratic();
        let (_, b) = quadratic();
        assert_eq!(a.to_json(), b.to_json());
        assert!(a.hash_matches());
        assert_eq!(a.content_hash.len(), 64);
        let mut tampered = a.clone();
        tampered.bound = 3f64.ln();
        assert!(!tampered.hash_matches());
        assert_eq!(tampered.revalidate(), Err(RevalidationError::HashMismatch));
    }

    #[test]
    fn metadata_is_outside_the_hash() {
        let (_, mut a) = quadratic();
        let hash = a.content_hash.clone();
        a.metadata = Some(CertificateMetadata { issued_at: "2026-01-01T00:00:00Z".into(), tool_version: "0".into() });
        assert!(a.hash_matches());
        assert_eq!(a.content_hash, hash);
    }

    #[test]
    fn revalidates_from_json() {
        let (_, a) = quadratic();
        let back: EntropyCertificate = serde_json::from_str(&a.to_json()).unwrap();
        assert_eq!(back, a);
        back.revalidate().unwrap();
    }

    #[test]
    fn overclaim_is_caught() {
        let (_, a) = quadratic();
        let Provenance::Polylike(mut p) = a.provenance.clone() else { unreachable!() };
        p.claimed = 3;
        let forged = EntropyCertificate::new(Provenance::Polylike(p));
        assert!(matches!(forged.revalidate(), Err(RevalidationError::BoundMismatch { .. })));
        let Provenance::Polylike(mut p) = a.provenance.clone() else { unreachable!() };
        p.degree = 3;
        p.claimed = 3;
        let forged = EntropyCertificate::new(Provenance::Polylike(p));
        assert_eq!(forged.revalidate(), Err(RevalidationError::Drift { field: "degree" }));
    }
}
