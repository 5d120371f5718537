//! JSON schemas for curves, point configurations and pointed loops,
//! plus the verification report record. Every file embeds its schema
//! version.

use crate::error::{Error, Result};
use crate::geometry::{ClosedCurve, ScalarOnCurve};
use crate::objects::{PointVortexConfig, PointedVortexLoop, VortexLoop};
use crate::vec2::Vec2;
use serde::{Deserialize, Serialize};

pub const CURVE_SCHEMA: &str = "curve/1";
pub const PVL_SCHEMA: &str = "pvl/1";
pub const PVC_SCHEMA: &str = "pvc/1";

#[derive(Debug, Serialize, Deserialize)]
pub struct CurveFile {
    pub schema: String,
    pub points: Vec<[f64; 2]>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct PvcFile {
    pub schema: String,
    pub points: Vec<[f64; 2]>,
    pub circulations: Vec<f64>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct PvlFile {
    pub schema: String,
    pub points: Vec<[f64; 2]>,
    pub density: Vec<f64>,
    pub marks: Vec<f64>,
    pub circulations: Vec<f64>,
}

/// One verification check result, as serialized by `verify`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CheckReport {
    pub check: String,
    pub max_error: f64,
    pub tolerance: f64,
    pub pass: bool,
    pub seed: u64,
}

/// Any of the three object files, discriminated by the schema field.
#[derive(Debug)]
pub enum ObjectFile {
    Curve(ClosedCurve),
    Pvc(PointVortexConfig),
    Pvl(PointedVortexLoop),
}

fn to_points(raw: &[[f64; 2]]) -> Vec<Vec2> {
    raw.iter().map(|p| Vec2::new(p[0], p[1])).collect()
}

fn from_points(points: &[Vec2]) -> Vec<[f64; 2]> {
    points.iter().map(|p| [p.x, p.y]).collect()
}

pub fn curve_to_file(curve: &ClosedCurve) -> CurveFile {
    CurveFile {
        schema: CURVE_SCHEMA.to_string(),
        points: from_points(curve.points()),
    }
}

pub fn curve_from_file(file: &CurveFile) -> Result<ClosedCurve> {
    if file.schema != CURVE_SCHEMA {
        return Err(Error::InvalidArgument(format!(
            "expected schema {CURVE_SCHEMA}, found {}",
            file.schema
        )));
    }
    ClosedCurve::new(to_points(&file.points))
}

pub fn pvc_to_file(cfg: &PointVortexConfig) -> PvcFile {
    PvcFile {
        schema: PVC_SCHEMA.to_string(),
        points: from_points(cfg.points()),
        circulations: cfg.circulations().to_vec(),
    }
}

pub fn pvc_from_file(file: &PvcFile) -> Result<PointVortexConfig> {
    if file.schema != PVC_SCHEMA {
        return Err(Error::InvalidArgument(format!(
            "expected schema {PVC_SCHEMA}, found {}",
            file.schema
        )));
    }
    PointVortexConfig::new(to_points(&file.points), file.circulations.clone())
}

pub fn pvl_to_file(pvl: &PointedVortexLoop) -> PvlFile {
    PvlFile {
        schema: PVL_SCHEMA.to_string(),
        points: from_points(pvl.curve().points()),
        density: pvl.density().values().to_vec(),
        marks: pvl.marks().to_vec(),
        circulations: pvl.circulations().to_vec(),
    }
}

pub fn pvl_from_file(file: &PvlFile) -> Result<PointedVortexLoop> {
    if file.schema != PVL_SCHEMA {
        return Err(Error::InvalidArgument(format!(
            "expected schema {PVL_SCHEMA}, found {}",
            file.schema
        )));
    }
    let curve = ClosedCurve::new(to_points(&file.points))?;
    let vl = VortexLoop::new(curve, ScalarOnCurve::new(file.density.clone()))?;
    PointedVortexLoop::new(vl, file.marks.clone(), file.circulations.clone())
}

/// Parse any object file by its schema discriminator.
pub fn parse_object(text: &str) -> Result<ObjectFile> {
    #[derive(Deserialize)]
    struct Probe {
        schema: String,
    }
    let probe: Probe = serde_json::from_str(text)
        .map_err(|e| Error::InvalidArgument(format!("JSON parse error: {e}")))?;
    match probe.schema.as_str() {
        CURVE_SCHEMA => {
            let f: CurveFile = serde_json::from_str(text)
                .map_err(|e| Error::InvalidArgument(format!("JSON parse error: {e}")))?;
            Ok(ObjectFile::Curve(curve_from_file(&f)?))
        }
        PVC_SCHEMA => {
            let f: PvcFile = serde_json::from_str(text)
                .map_err(|e| Error::InvalidArgument(format!("JSON parse error: {e}")))?;
            Ok(ObjectFile::Pvc(pvc_from_file(&f)?))
        }
        PVL_SCHEMA => {
            let f: PvlFile = serde_json::from_str(text)
                .map_err(|e| Error::InvalidArgument(format!("JSON parse error: {e}")))?;
            Ok(ObjectFile::Pvl(pvl_from_file(&f)?))
        }
        other => Err(Error::InvalidArgument(format!("unknown schema {other}"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::objects::realize;
    use std::f64::consts::PI;

    #[test]
    fn pvl_round_trip() {
        let c = ClosedCurve::circle(1.0, 64).unwrap();
        let pvl = realize(&c, &[PI, PI], &[1.0, -2.0]).unwrap();
        let text = serde_json::to_string(&pvl_to_file(&pvl)).unwrap();
        match parse_object(&text).unwrap() {
            ObjectFile::Pvl(back) => {
                assert_eq!(back.curve().points(), pvl.curve().points());
                assert_eq!(back.marks(), pvl.marks());
                assert_eq!(back.circulations(), pvl.circulations());
                assert_eq!(back.density().values(), pvl.density().values());
            }
            _ => panic!("wrong variant"),
        }
    }

    #[test]
    fn curve_round_trip_and_schema_check() {
        let c = ClosedCurve::ellipse(2.0, 1.0, 32).unwrap();
        let text = serde_json::to_string(&curve_to_file(&c)).unwrap();
        assert!(matches!(parse_object(&text).unwrap(), ObjectFile::Curve(_)));
        let mut f = curve_to_file(&c);
        f.schema = "curve/999".to_string();
        assert!(curve_from_file(&f).is_err());
    }

    #[test]
    fn malformed_json_rejected() {
        assert!(parse_object("{not json").is_err());
        assert!(parse_object("{\"schema\": \"bogus/1\"}").is_err());
        // schema ok but invalid structure: empty marks
        let c = ClosedCurve::circle(1.0, 64).unwrap();
        let bad = PvlFile {
            schema: PVL_SCHEMA.to_string(),
            points: c.points().iter().map(|p| [p.x, p.y]).collect(),
            density: vec![1.0; 64],
            marks: vec![],
            circulations: vec![],
        };
        assert!(parse_object(&serde_json::to_string(&bad).unwrap()).is_err());
    }
}
