//! JSON payloads for configurations, coalgebras and pages. Rationals are
//! written as `"p/q"` strings; on input, decimal strings and JSON numbers are
//! also accepted and converted exactly from their decimal text.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::coalgebra::{coalgebra_from_table, Coalgebra, CoproductTable};
use crate::cobar::{Bidegree, CotorTable};
use crate::geometry::{
    format_rational, gravity_degree, is_decomposable, parse_rational, sigma, skewer_degree, u_value, validate_config,
    Axis, CubeConfig, GeometryError, LittleCube, Rational,
};
use crate::graded::{AlgebraError, BasisElement, GradedSpace};
use crate::gravity::{BigradedPage, Cell, E1Word, GravityBox, GravityError, SphereWedge};
use crate::linalg::{FieldError, Fp, FpMatrix};

#[derive(Debug, Error)]
pub enum IoError {
    #[error("invalid JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("cube {cube}, axis {axis}: {message}")]
    Rational { cube: usize, axis: usize, message: String },
    #[error("config declares n = {declared} but cube {cube} has {found} axes")]
    DeclaredDimension { declared: usize, cube: usize, found: usize },
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Gravity(#[from] GravityError),
}

/// A rational as it appears in input JSON.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum RationalText {
    Text(String),
    Integer(i64),
    Float(f64),
}

impl RationalText {
    pub fn to_rational(&self) -> Result<Rational, String> {
        let text = match self {
            RationalText::Text(s) => s.clone(),
            RationalText::Integer(i) => i.to_string(),
            // shortest round-trip decimal, so 0.1 reads as 1/10
            RationalText::Float(f) => format!("{f}"),
        };
        parse_rational(&text).map_err(|e| e.to_string())
    }
}

impl From<&Rational> for RationalText {
    fn from(r: &Rational) -> Self {
        RationalText::Text(format_rational(r))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AxisJson {
    pub center: RationalText,
    pub radius: RationalText,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CubeJson {
    pub axes: Vec<AxisJson>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConfigJson {
    pub n: usize,
    pub cubes: Vec<CubeJson>,
}

impl ConfigJson {
    pub fn from_config(cfg: &CubeConfig) -> Self {
        let cubes = cfg
            .cubes()
            .iter()
            .map(|c| CubeJson {
                axes: c
                    .axes
                    .iter()
                    .map(|a| AxisJson {
                        center: (&a.center).into(),
                        radius: (&a.radius).into(),
                    })
                    .collect(),
            })
            .collect();
        Self { n: cfg.dim(), cubes }
    }

    pub fn to_config(&self) -> Result<CubeConfig, IoError> {
        let mut cubes = Vec::with_capacity(self.cubes.len());
        for (i, c) in self.cubes.iter().enumerate() {
            if c.axes.len() != self.n {
                return Err(IoError::DeclaredDimension {
                    declared: self.n,
                    cube: i + 1,
                    found: c.axes.len(),
                });
            }
            let mut axes = Vec::with_capacity(c.axes.len());
            for (k, a) in c.axes.iter().enumerate() {
                let err = |message| IoError::Rational {
                    cube: i + 1,
                    axis: k + 1,
                    message,
                };
                axes.push(Axis::new(
                    a.center.to_rational().map_err(err)?,
                    a.radius.to_rational().map_err(err)?,
                ));
            }
            cubes.push(LittleCube::new(axes));
        }
        Ok(validate_config(cubes)?)
    }
}

pub fn parse_config(json: &str) -> Result<CubeConfig, IoError> {
    serde_json::from_str::<ConfigJson>(json)?.to_config()
}

pub fn config_to_json(cfg: &CubeConfig) -> String {
    serde_json::to_string_pretty(&ConfigJson::from_config(cfg)).expect("config serializes")
}

/// Filtration data of one configuration. Maps are keyed by `s`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeometryReport {
    pub j: usize,
    pub n: usize,
    pub gravity_degree: usize,
    pub skewer_degree: usize,
    pub u: BTreeMap<usize, String>,
    /// Only the `s` for which `σ_s` exists.
    pub sigma: BTreeMap<usize, String>,
    pub decomposable: BTreeMap<usize, bool>,
}

pub fn geometry_report(cfg: &CubeConfig) -> Result<GeometryReport, GeometryError> {
    let j = cfg.len();
    let mut u = BTreeMap::new();
    let mut sig = BTreeMap::new();
    let mut decomposable = BTreeMap::new();
    for s in 1..=j {
        u.insert(s, format_rational(&u_value(cfg, s)?));
        match sigma(cfg, s) {
            Ok(v) => {
                sig.insert(s, format_rational(&v));
            }
            Err(GeometryError::Unreachable(_)) => {}
            Err(e) => return Err(e),
        }
        decomposable.insert(s, is_decomposable(cfg, s)?);
    }
    Ok(GeometryReport {
        j,
        n: cfg.dim(),
        gravity_degree: gravity_degree(cfg),
        skewer_degree: skewer_degree(cfg),
        u,
        sigma: sig,
        decomposable,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BasisJson {
    pub name: String,
    pub deg: i32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weight: Option<u32>,
}

/// A coefficient given as a JSON integer or a decimal string.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CoefText {
    Integer(i64),
    Text(String),
}

impl CoefText {
    fn value(&self) -> Result<i64, AlgebraError> {
        match self {
            CoefText::Integer(i) => Ok(*i),
            CoefText::Text(s) => s
                .trim()
                .parse()
                .map_err(|_| AlgebraError::UnknownElement(format!("coefficient {s:?}"))),
        }
    }
}

/// Coalgebra file. The unit `"1"` in degree 0 is added when the basis does
/// not list it; `coproduct` holds the reduced coproduct only.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoalgebraJson {
    pub p: u32,
    pub basis: Vec<BasisJson>,
    #[serde(default)]
    pub coproduct: BTreeMap<String, Vec<(String, String, CoefText)>>,
}

pub const UNIT_NAME: &str = "1";

impl CoalgebraJson {
    pub fn from_coalgebra(c: &Coalgebra) -> Self {
        let space = c.space();
        let basis = (0..space.len())
            .map(|i| {
                let b = &space.basis()[i];
                BasisJson {
                    name: b.name.clone(),
                    deg: b.degree,
                    weight: b.weight,
                }
            })
            .collect();
        let coproduct = c
            .to_table()
            .into_iter()
            .map(|(x, terms)| {
                (
                    x,
                    terms
                        .into_iter()
                        .map(|(a, b, k)| (a, b, CoefText::Integer(k)))
                        .collect(),
                )
            })
            .collect();
        Self {
            p: c.field().p(),
            basis,
            coproduct,
        }
    }

    pub fn to_coalgebra(&self) -> Result<Coalgebra, IoError> {
        let field = Fp::new(self.p)?;
        let mut basis: Vec<BasisElement> = self
            .basis
            .iter()
            .map(|b| BasisElement {
                name: b.name.clone(),
                degree: b.deg,
                weight: b.weight,
            })
            .collect();
        let unit = match self.basis.iter().find(|b| b.deg == 0) {
            Some(b) => b.name.clone(),
            None => {
                basis.insert(0, BasisElement::new(UNIT_NAME, 0));
                UNIT_NAME.to_owned()
            }
        };
        let space = GradedSpace::new(field, basis)?;
        let mut table = CoproductTable::new();
        for (x, terms) in &self.coproduct {
            let parsed = terms
                .iter()
                .map(|(a, b, k)| Ok((a.clone(), b.clone(), k.value()?)))
                .collect::<Result<Vec<_>, AlgebraError>>()?;
            table.insert(x.clone(), parsed);
        }
        Ok(coalgebra_from_table(space, &unit, &table)?)
    }
}

pub fn parse_coalgebra(json: &str) -> Result<Coalgebra, IoError> {
    serde_json::from_str::<CoalgebraJson>(json)?.to_coalgebra()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PageMode {
    Shuffle,
    Cobar,
    Compare,
    E2,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct PageRequest {
    #[serde(rename = "X")]
    pub x: Vec<u32>,
    pub p: u32,
    pub max_s: usize,
    pub max_degree: i32,
    pub max_weight: usize,
    #[serde(default = "default_mode")]
    pub mode: PageMode,
}

fn default_mode() -> PageMode {
    PageMode::E2
}

impl PageRequest {
    pub fn wedge(&self) -> Result<SphereWedge, GravityError> {
        SphereWedge::new(self.x.clone())
    }

    pub fn bounds(&self) -> GravityBox {
        GravityBox {
            max_s: self.max_s,
            max_degree: self.max_degree,
            max_weight: self.max_weight,
        }
    }
}

pub fn parse_page_request(json: &str) -> Result<PageRequest, IoError> {
    Ok(serde_json::from_str(json)?)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct BoxJson {
    pub max_s: usize,
    pub max_degree: i32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_weight: Option<usize>,
}

/// `"-s,t"`.
pub fn bidegree_key(bd: Bidegree) -> String {
    format!("{},{}", -(bd.s as i64), bd.t)
}

pub fn parse_bidegree_key(key: &str) -> Option<Bidegree> {
    let (s, t) = key.split_once(',')?;
    let s: i64 = s.trim().parse().ok()?;
    let t: i32 = t.trim().parse().ok()?;
    (s <= 0).then(|| Bidegree::new((-s) as usize, t))
}

pub type DimsJson = BTreeMap<String, usize>;

fn dims_json(dims: &BTreeMap<Bidegree, usize>) -> DimsJson {
    dims.iter().map(|(&bd, &d)| (bidegree_key(bd), d)).collect()
}

/// `E¹` and, when computed, `E²` dimensions keyed by `"-s,t"`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PagesJson {
    #[serde(rename = "E1")]
    pub e1: DimsJson,
    #[serde(rename = "E2", default, skip_serializing_if = "Option::is_none")]
    pub e2: Option<DimsJson>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerdictJson {
    pub holds: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PageJson {
    #[serde(rename = "X")]
    pub x: Vec<u32>,
    pub p: u32,
    pub mode: PageMode,
    #[serde(rename = "box")]
    pub bounds: BoxJson,
    pub pages: PagesJson,
    pub weights: BTreeMap<usize, PagesJson>,
    pub truncated: bool,
    /// `d¹ ∘ d¹ = 0` for the route of the mode.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub d_squared: Option<VerdictJson>,
    /// Shuffle and cobar `d¹` agree (compare mode).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub comparison: Option<VerdictJson>,
}

impl PageJson {
    /// Dimensions from a computed page; `with_e2` controls whether `E²` is
    /// included.
    pub fn from_page(request: &PageRequest, page: &BigradedPage, with_e2: bool) -> Self {
        let weights = page
            .e1
            .keys()
            .map(|c| c.weight)
            .collect::<std::collections::BTreeSet<_>>()
            .into_iter()
            .map(|w| {
                let pick = |cells: &BTreeMap<Cell, usize>| -> DimsJson {
                    cells
                        .iter()
                        .filter(|(c, _)| c.weight == w)
                        .map(|(c, &d)| (bidegree_key(c.bidegree()), d))
                        .collect()
                };
                let e2 = with_e2.then(|| pick(&page.e2));
                (w, PagesJson { e1: pick(&page.e1), e2 })
            })
            .collect();
        Self {
            x: request.x.clone(),
            p: page.p,
            mode: request.mode,
            bounds: BoxJson {
                max_s: page.bounds.max_s,
                max_degree: page.bounds.max_degree,
                max_weight: Some(page.bounds.max_weight),
            },
            pages: PagesJson {
                e1: dims_json(&page.e1_by_bidegree()),
                e2: with_e2.then(|| dims_json(&page.e2_by_bidegree())),
            },
            weights,
            truncated: with_e2 && page.truncated,
            d_squared: None,
            comparison: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CotorJson {
    pub p: u32,
    #[serde(rename = "box")]
    pub bounds: BoxJson,
    /// `E1` is the cobar complex itself, `E2` its homology.
    pub pages: PagesJson,
    pub truncated: bool,
}

impl CotorJson {
    pub fn from_table(p: u32, table: &CotorTable) -> Self {
        Self {
            p,
            bounds: BoxJson {
                max_s: table.bounds.max_s,
                max_degree: table.bounds.max_degree,
                max_weight: None,
            },
            pages: PagesJson {
                e1: dims_json(&table.chain_dims),
                e2: Some(dims_json(&table.dims)),
            },
            truncated: table.truncated,
        }
    }
}

/// One CSV row of a page; `e2` is empty where it is not determined.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PageRow {
    pub weight: usize,
    pub s: usize,
    pub t: i32,
    pub total: i32,
    pub e1: usize,
    pub e2: Option<usize>,
}

pub fn page_rows(page: &BigradedPage, with_e2: bool) -> Vec<PageRow> {
    page.e1
        .iter()
        .map(|(c, &d)| PageRow {
            weight: c.weight,
            s: c.s,
            t: c.t,
            total: c.bidegree().total(),
            e1: d,
            e2: if with_e2 { page.e2.get(c).copied() } else { None },
        })
        .collect()
}

/// A `d¹` block as a sparse triplet list.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatrixJson {
    pub weight: usize,
    pub s: usize,
    pub t: i32,
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<(usize, usize, u32)>,
}

pub fn matrices_json(matrices: &BTreeMap<Cell, FpMatrix>) -> Vec<MatrixJson> {
    matrices
        .iter()
        .map(|(c, m)| MatrixJson {
            weight: c.weight,
            s: c.s,
            t: c.t,
            rows: m.rows(),
            cols: m.cols(),
            entries: m.triplets(),
        })
        .collect()
}

/// `[x1*x2|x1]` with generators named as in the wedge's generator space.
pub fn format_e1_word(w: &E1Word) -> String {
    let blocks: Vec<String> = w
        .blocks
        .iter()
        .map(|b| b.iter().map(|l| format!("x{}", l + 1)).collect::<Vec<_>>().join("*"))
        .collect();
    format!("[{}]", blocks.join("|"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::rat;

    const THREE_CUBES: &str = r#"{"n": 2, "cubes": [
        {"axes": [{"center": "0", "radius": "4/5"}, {"center": "3/4", "radius": "3/20"}]},
        {"axes": [{"center": -0.2, "radius": "2/5"}, {"center": "0.2", "radius": "1/5"}]},
        {"axes": [{"center": "3/10", "radius": 0.4}, {"center": "-2/5", "radius": "1/5"}]}
    ]}"#;

    #[test]
    fn parses_mixed_rationals() {
        let cfg = parse_config(THREE_CUBES).unwrap();
        assert_eq!(cfg.len(), 3);
        assert_eq!(cfg.cubes()[1].first().center, rat(-1, 5));
        assert_eq!(cfg.cubes()[2].first().radius, rat(2, 5));
        let report = geometry_report(&cfg).unwrap();
        assert_eq!(report.gravity_degree, 2);
        assert_eq!(report.u[&2], "1/2");
        assert_eq!(report.u[&1], "0");
    }

    #[test]
    fn config_round_trip() {
        let cfg = parse_config(THREE_CUBES).unwrap();
        let text = config_to_json(&cfg);
        assert!(text.contains("\"-1/5\""));
        assert_eq!(parse_config(&text).unwrap(), cfg);
    }

    #[test]
    fn malformed_inputs() {
        let bad = THREE_CUBES.replace("\"4/5\"", "\"4/x\"");
        assert!(matches!(
            parse_config(&bad),
            Err(IoError::Rational { cube: 1, axis: 1, .. })
        ));
        let short = r#"{"n": 2, "cubes": [{"axes": [{"center": "0", "radius": "1/2"}]}]}"#;
        assert!(matches!(parse_config(short), Err(IoError::DeclaredDimension { .. })));
        let err = parse_config("{\"n\": 1,\n \"cubes\": [}").unwrap_err();
        assert!(err.to_string().contains("line 2"));
        let overlap = r#"{"n": 1, "cubes": [{"axes": [{"center": "0", "radius": "0.3"}]},
            {"axes": [{"center": "0.3", "radius": "0.3"}]}]}"#;
        assert!(matches!(
            parse_config(overlap),
            Err(IoError::Geometry(GeometryError::NonDisjoint(1, 2)))
        ));
    }

    #[test]
    fn coalgebra_with_implicit_unit() {
        let json = r#"{"p": 2, "basis": [{"name": "x", "deg": 2}, {"name": "x^2", "deg": 4}],
            "coproduct": {"x^2": [["x", "x", "1"]]}}"#;
        let c = parse_coalgebra(json).unwrap();
        assert_eq!(c.space().name(c.unit()), "1");
        assert_eq!(c.space().len(), 3);
        let again = CoalgebraJson::from_coalgebra(&c);
        assert_eq!(again.to_coalgebra().unwrap(), c);
        let bad = json.replace("\"x\", \"x\"", "\"x\", \"x^2\"");
        assert!(matches!(
            parse_coalgebra(&bad),
            Err(IoError::Algebra(AlgebraError::DegreeMismatch(_)))
        ));
    }

    #[test]
    fn page_request_fields() {
        let r = parse_page_request(
            r#"{"X": [1, 1], "p": 2, "maxS": 5, "maxDegree": 20, "maxWeight": 6, "mode": "compare"}"#,
        )
        .unwrap();
        assert_eq!(r.mode, PageMode::Compare);
        assert_eq!(
            r.bounds(),
            GravityBox {
                max_s: 5,
                max_degree: 20,
                max_weight: 6
            }
        );
        assert!(
            parse_page_request(r#"{"X": [1], "p": 2, "maxS": 5, "maxDegree": 20, "maxWeight": 6, "mode": "e3"}"#)
                .is_err()
        );
        let empty = parse_page_request(r#"{"X": [], "p": 2, "maxS": 2, "maxDegree": 4, "maxWeight": 2}"#).unwrap();
        assert_eq!(empty.wedge(), Err(GravityError::EmptyWedge));
    }

    #[test]
    fn bidegree_keys() {
        assert_eq!(bidegree_key(Bidegree::new(3, 8)), "-3,8");
        assert_eq!(bidegree_key(Bidegree::new(0, 0)), "0,0");
        assert_eq!(parse_bidegree_key("-3,8"), Some(Bidegree::new(3, 8)));
        assert_eq!(parse_bidegree_key("2,8"), None);
        assert_eq!(format_e1_word(&E1Word::new(vec![vec![0, 1], vec![0]])), "[x1*x2|x1]");
    }
}
