//! JSON encodings for colorings, faces, simplices, cochains, certificates
//! and filling results. Cube faces list their free axes 1-based on disk.
//!
//! The `parse_*` functions accept untrusted input and never panic.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::algebra::Cochain;
use crate::certificate::Certificate;
use crate::coloring::{Color, Coloring};
use crate::complex::{Coord, CubeFace, GridSpec, Point, Region, Simplex, MAX_DIM};
use crate::error::{Error, Result};
use crate::filling::{FillResult, SweepRecord};

fn json_error(e: serde_json::Error) -> Error {
    Error::Parse(e.to_string())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ColoringFile {
    pub d: usize,
    pub n: u32,
    pub m: usize,
    pub colors: Vec<Color>,
}

impl From<&Coloring> for ColoringFile {
    fn from(c: &Coloring) -> Self {
        let s = c.spec();
        ColoringFile {
            d: s.d,
            n: s.n,
            m: s.m,
            colors: c.colors().to_vec(),
        }
    }
}

pub fn parse_coloring(text: &str) -> Result<Coloring> {
    let f: ColoringFile = serde_json::from_str(text).map_err(json_error)?;
    let spec = GridSpec { d: f.d, n: f.n, m: f.m };
    spec.check().map_err(|e| Error::Parse(e.to_string()))?;
    Coloring::new(spec, f.colors).map_err(|e| Error::Parse(e.to_string()))
}

pub fn coloring_json(c: &Coloring) -> String {
    serde_json::to_string(&ColoringFile::from(c)).expect("plain data serializes")
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FaceRepr {
    pub anchor: Vec<Coord>,
    pub free: Vec<usize>,
}

impl From<&CubeFace> for FaceRepr {
    fn from(f: &CubeFace) -> Self {
        FaceRepr {
            anchor: f.anchor().to_vec(),
            free: f.free().iter().map(|a| a + 1).collect(),
        }
    }
}

impl TryFrom<FaceRepr> for CubeFace {
    type Error = Error;

    fn try_from(r: FaceRepr) -> Result<CubeFace> {
        if r.free.contains(&0) {
            return Err(Error::Parse("free axes are numbered from 1".into()));
        }
        let free: Vec<usize> = r.free.iter().map(|a| a - 1).collect();
        if free.iter().any(|&a| r.anchor.get(a).is_some_and(|&x| x == Coord::MAX)) {
            return Err(Error::Parse("face leaves the coordinate range".into()));
        }
        CubeFace::new(r.anchor, free).map_err(|e| Error::Parse(e.to_string()))
    }
}

pub fn parse_face(text: &str) -> Result<CubeFace> {
    let r: FaceRepr = serde_json::from_str(text).map_err(json_error)?;
    r.try_into()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimplexRepr {
    pub vertices: Vec<Point>,
}

impl From<&Simplex> for SimplexRepr {
    fn from(s: &Simplex) -> Self {
        SimplexRepr {
            vertices: s.vertices().to_vec(),
        }
    }
}

impl TryFrom<SimplexRepr> for Simplex {
    type Error = Error;

    fn try_from(r: SimplexRepr) -> Result<Simplex> {
        Simplex::new(r.vertices).map_err(|e| Error::Parse(e.to_string()))
    }
}

pub fn parse_simplex(text: &str) -> Result<Simplex> {
    let r: SimplexRepr = serde_json::from_str(text).map_err(json_error)?;
    r.try_into()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CellRepr {
    Face(FaceRepr),
    Simplex(SimplexRepr),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermRepr {
    pub cell: CellRepr,
    pub coeff: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RegionRepr {
    pub lo: Vec<Coord>,
    pub hi: Vec<Coord>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
enum CochainFile {
    Terms(Vec<TermRepr>),
    Full {
        #[serde(default)]
        region: Option<RegionRepr>,
        #[serde(default)]
        dim: Option<usize>,
        terms: Vec<TermRepr>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AnyCochain {
    Cubical(Cochain<CubeFace>),
    Simplicial(Cochain<Simplex>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParsedCochain {
    pub region: Option<Region>,
    pub cochain: AnyCochain,
}

/// Reads either a bare list of `{cell, coeff}` terms or an object
/// `{region?, dim?, terms}`. Repeated cells add up.
pub fn parse_cochain(text: &str) -> Result<ParsedCochain> {
    let file: CochainFile = serde_json::from_str(text).map_err(json_error)?;
    let (region, dim, terms) = match file {
        CochainFile::Terms(t) => (None, None, t),
        CochainFile::Full { region, dim, terms } => (region, dim, terms),
    };
    let region = region
        .map(|r| Region::new(r.lo, r.hi))
        .transpose()
        .map_err(|e| Error::Parse(e.to_string()))?;
    let at = |i: usize| move |e: Error| Error::Parse(format!("term {i}: {e}"));
    let cochain = match terms.first() {
        None => {
            let dim = dim.ok_or_else(|| Error::Parse("empty cochain needs an explicit dim".into()))?;
            if dim > MAX_DIM {
                return Err(Error::Parse(format!("dim {dim} exceeds {MAX_DIM}")));
            }
            AnyCochain::Cubical(Cochain::zero(dim))
        }
        Some(TermRepr { cell: CellRepr::Face(_), .. }) => {
            let mut c: Option<Cochain<CubeFace>> = None;
            for (i, t) in terms.into_iter().enumerate() {
                let CellRepr::Face(f) = t.cell else {
                    return Err(Error::Parse(format!("term {i}: mixes simplices with cube faces")));
                };
                let f = CubeFace::try_from(f).map_err(at(i))?;
                let c = c.get_or_insert_with(|| Cochain::zero(dim.unwrap_or(f.dim())));
                c.add_term(f, t.coeff).map_err(at(i))?;
            }
            AnyCochain::Cubical(c.expect("nonempty"))
        }
        Some(TermRepr { cell: CellRepr::Simplex(_), .. }) => {
            let mut c: Option<Cochain<Simplex>> = None;
            for (i, t) in terms.into_iter().enumerate() {
                let CellRepr::Simplex(s) = t.cell else {
                    return Err(Error::Parse(format!("term {i}: mixes cube faces with simplices")));
                };
                let s = Simplex::try_from(s).map_err(at(i))?;
                let c = c.get_or_insert_with(|| Cochain::zero(dim.unwrap_or(s.dim())));
                c.add_term(s, t.coeff).map_err(at(i))?;
            }
            AnyCochain::Simplicial(c.expect("nonempty"))
        }
    };
    if let Some(r) = &region {
        let fits = match &cochain {
            AnyCochain::Cubical(c) => c.cells().all(|f| f.anchor().len() == r.ambient_dim()),
            AnyCochain::Simplicial(c) => c.cells().all(|s| s.vertices()[0].len() == r.ambient_dim()),
        };
        if !fits {
            return Err(Error::Parse("cell dimension differs from the region".into()));
        }
    }
    Ok(ParsedCochain { region, cochain })
}

pub fn face_terms(c: &Cochain<CubeFace>) -> Vec<TermRepr> {
    c.iter()
        .map(|(f, v)| TermRepr {
            cell: CellRepr::Face(f.into()),
            coeff: v,
        })
        .collect()
}

pub fn simplex_terms(c: &Cochain<Simplex>) -> Vec<TermRepr> {
    c.iter()
        .map(|(s, v)| TermRepr {
            cell: CellRepr::Simplex(s.into()),
            coeff: v,
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FillRepr {
    pub beta: Vec<TermRepr>,
    pub sweeps: Vec<SweepRecord>,
    pub bound: u64,
    pub beta_norm: u64,
    pub residual_norms: Vec<u64>,
    pub residuals_monotone: bool,
}

impl From<&FillResult> for FillRepr {
    fn from(r: &FillResult) -> Self {
        FillRepr {
            beta: face_terms(&r.beta),
            sweeps: r.sweeps.clone(),
            bound: r.bound,
            beta_norm: r.beta.norm(),
            residual_norms: r.residual_norms.clone(),
            residuals_monotone: r.residuals_monotone(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SupportRepr {
    pub vertex: Point,
    pub support: Vec<Point>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CertificateRepr {
    pub color: Color,
    pub x: BTreeMap<Color, i64>,
    pub witness_count: usize,
    pub witnesses: Vec<Point>,
    pub incidence_bound: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub per_vertex_support: Option<Vec<SupportRepr>>,
}

impl CertificateRepr {
    pub fn new(cert: &Certificate, with_supports: bool) -> Self {
        let per_vertex_support = if with_supports {
            cert.per_vertex_support.as_ref().map(|m| {
                m.iter()
                    .map(|(v, s)| SupportRepr {
                        vertex: v.clone(),
                        support: s.clone(),
                    })
                    .collect()
            })
        } else {
            None
        };
        CertificateRepr {
            color: cert.color,
            x: cert.x.clone(),
            witness_count: cert.witnesses.len(),
            witnesses: cert.witnesses.clone(),
            incidence_bound: cert.incidence_bound,
            per_vertex_support,
        }
    }
}

impl TryFrom<CertificateRepr> for Certificate {
    type Error = Error;

    fn try_from(r: CertificateRepr) -> Result<Certificate> {
        if r.witness_count != r.witnesses.len() {
            return Err(Error::Parse(format!(
                "witness_count {} but {} witnesses listed",
                r.witness_count,
                r.witnesses.len()
            )));
        }
        let per_vertex_support = r
            .per_vertex_support
            .map(|list| list.into_iter().map(|s| (s.vertex, s.support)).collect());
        Ok(Certificate {
            color: r.color,
            x: r.x,
            witnesses: r.witnesses,
            per_vertex_support,
            incidence_bound: r.incidence_bound,
        })
    }
}

/// Reads a certificate object; extra keys such as a report header are not
/// allowed here, pass the inner object.
pub fn parse_certificate(text: &str) -> Result<Certificate> {
    let r: CertificateRepr = serde_json::from_str(text).map_err(json_error)?;
    r.try_into()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn coloring_roundtrip() {
        let c = parse_coloring(r#"{"d":2,"n":1,"m":1,"colors":[0,1,1,0]}"#).unwrap();
        assert_eq!(c.colors(), &[0, 1, 1, 0]);
        assert_eq!(parse_coloring(&coloring_json(&c)).unwrap(), c);
    }

    #[test]
    fn coloring_errors() {
        for bad in [
            r#"{"d":2,"n":1,"m":1,"colors":[0,1,1]}"#,
            r#"{"d":2,"n":1,"m":2,"colors":[0,1,1,0]}"#,
            r#"{"d":0,"n":1,"m":0,"colors":[]}"#,
            r#"{"d":64,"n":4294967295,"m":0,"colors":[]}"#,
            r#"{"d":2,"n":1,"m":1,"colors":[0,1,1,0],"x":1}"#,
            "[",
        ] {
            assert!(matches!(parse_coloring(bad), Err(Error::Parse(_))), "{bad}");
        }
    }

    #[test]
    fn faces_are_one_based() {
        let f = parse_face(r#"{"anchor":[0,1,0],"free":[1,3]}"#).unwrap();
        assert_eq!(f.free(), &[0, 2]);
        assert_eq!(FaceRepr::from(&f).free, vec![1, 3]);
        assert!(parse_face(r#"{"anchor":[0],"free":[0]}"#).is_err());
        assert!(parse_face(r#"{"anchor":[0],"free":[2]}"#).is_err());
        assert!(parse_face(r#"{"anchor":[4294967295],"free":[1]}"#).is_err());
        assert!(parse_face(r#"{"anchor":[0,0],"free":[2,1]}"#).is_err());
    }

    #[test]
    fn simplices() {
        let s = parse_simplex(r#"{"vertices":[[0,0],[1,0],[1,1]]}"#).unwrap();
        assert_eq!(s.dim(), 2);
        assert!(parse_simplex(r#"{"vertices":[[0,0],[2,0]]}"#).is_err());
        assert!(parse_simplex(r#"{"vertices":[]}"#).is_err());
    }

    #[test]
    fn cochains() {
        let p = parse_cochain(
            r#"[{"cell":{"anchor":[0,0],"free":[1]},"coeff":2},
                {"cell":{"anchor":[0,0],"free":[1]},"coeff":-2},
                {"cell":{"anchor":[1,0],"free":[2]},"coeff":5}]"#,
        )
        .unwrap();
        let AnyCochain::Cubical(c) = p.cochain else { panic!() };
        assert_eq!(c.dim(), 1);
        assert_eq!(c.len(), 1);
        assert_eq!(face_terms(&c).len(), 1);

        let p = parse_cochain(r#"{"region":{"lo":[0,0],"hi":[2,2]},"dim":1,"terms":[]}"#).unwrap();
        assert!(p.region.is_some());

        assert!(parse_cochain("[]").is_err());
        assert!(parse_cochain(
            r#"[{"cell":{"anchor":[0,0],"free":[1]},"coeff":1},
                {"cell":{"anchor":[0,0],"free":[]},"coeff":1}]"#
        )
        .is_err());
        assert!(parse_cochain(
            r#"[{"cell":{"anchor":[0,0],"free":[1]},"coeff":1},
                {"cell":{"vertices":[[0,0]]},"coeff":1}]"#
        )
        .is_err());
        assert!(parse_cochain(
            r#"[{"cell":{"anchor":[0],"free":[]},"coeff":9223372036854775807},
                {"cell":{"anchor":[0],"free":[]},"coeff":1}]"#
        )
        .is_err());
    }

    #[test]
    fn certificate_roundtrip() {
        let cert = Certificate {
            color: 1,
            x: BTreeMap::from([(0, 0), (1, 1)]),
            witnesses: vec![vec![0, 0], vec![1, 0]],
            per_vertex_support: Some(BTreeMap::from([(vec![0, 0], vec![vec![0, 0]])])),
            incidence_bound: 1,
        };
        let text = serde_json::to_string(&CertificateRepr::new(&cert, true)).unwrap();
        assert_eq!(parse_certificate(&text).unwrap(), cert);
        let text = serde_json::to_string(&CertificateRepr::new(&cert, false)).unwrap();
        assert!(!text.contains("per_vertex_support"));
        assert!(parse_certificate(&text.replace("\"witness_count\":2", "\"witness_count\":3")).is_err());
    }
}
