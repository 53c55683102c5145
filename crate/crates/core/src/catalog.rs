//! Named families of Weierstrass data, their vertex configurations and
//! Chern-Ricci constants, and closed forms on the Scherk graph.

use core::f64::consts::{FRAC_PI_2, FRAC_PI_3, FRAC_PI_4, PI};
use core::fmt;

use crate::chern_ricci::{ChernRicciSpec, Normalization, Side};
use crate::prelude::*;
use crate::sphere::{stereographic, ExtendedComplex, UnitVector};
use crate::verify::ExpectedValue;
use crate::wdsl::{Params, WeierstrassData};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Periodicity {
    None,
    Singly,
    Doubly,
    Triply,
}

impl Periodicity {
    pub fn as_str(&self) -> &'static str {
        match self {
            Periodicity::None => "none",
            Periodicity::Singly => "singly",
            Periodicity::Doubly => "doubly",
            Periodicity::Triply => "triply",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    Enneper,
    Catenoid,
    Helicoid,
    JorgeMeeks,
    ScherkDoubly,
    ScherkSingly,
    ScherkSheared,
    Tclp,
    Td,
    Tp,
    Rpd,
    Hclp,
    H,
}

/// Open endpoint of a parameter interval with its display label.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bound {
    pub value: f64,
    pub label: &'static str,
}

const fn bound(value: f64, label: &'static str) -> Option<Bound> {
    Some(Bound { value, label })
}

/// An accepted parameter with its open interval and default.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ParamDomain {
    pub name: &'static str,
    pub lower: Option<Bound>,
    pub upper: Option<Bound>,
    pub default: Option<f64>,
}

impl ParamDomain {
    pub fn contains(&self, x: f64) -> bool {
        x.is_finite() && self.lower.map_or(true, |b| x > b.value) && self.upper.map_or(true, |b| x < b.value)
    }

    fn check(&self, x: f64) -> Result<f64> {
        if self.contains(x) {
            Ok(x)
        } else {
            Err(Error::ParamOutOfRange { name: self.name.into(), value: x, domain: self.to_string() })
        }
    }
}

impl fmt::Display for ParamDomain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.lower, self.upper) {
            (Some(l), Some(u)) => write!(f, "{} < {} < {}", l.label, self.name, u.label),
            (Some(l), None) => write!(f, "{} > {}", self.name, l.label),
            (None, Some(u)) => write!(f, "{} < {}", self.name, u.label),
            (None, None) => write!(f, "{} real", self.name),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FamilyDescriptor {
    pub family: Family,
    pub name: &'static str,
    /// Accepted parameters; families with several listed parameters without
    /// defaults take exactly one of them (the others are derived).
    pub params: Vec<ParamDomain>,
    pub template: &'static str,
    pub periodicity: Periodicity,
    /// Associate angle at which the data gives the named surface.
    pub assoc_angle: f64,
    /// Closed form of the expected Chern-Ricci constant, if the family has one.
    pub cr_constant: Option<&'static str>,
    /// Parameter value and family reached in a degenerate limit.
    pub limits: Vec<(f64, Family)>,
    pub notes: &'static str,
}

const fn dom(name: &'static str, lower: Option<Bound>, upper: Option<Bound>, default: Option<f64>) -> ParamDomain {
    ParamDomain { name, lower, upper, default }
}

const TCLP_TEMPLATE: &str = "G/sqrt(G^8+lambda*G^4+1)";
const TRIPOD_TEMPLATE: &str = "G/sqrt(G*(G^6+lambda*G^3+1))";

impl Family {
    pub const ALL: [Family; 13] = [
        Family::Enneper,
        Family::Catenoid,
        Family::Helicoid,
        Family::JorgeMeeks,
        Family::ScherkDoubly,
        Family::ScherkSingly,
        Family::ScherkSheared,
        Family::Tclp,
        Family::Td,
        Family::Tp,
        Family::Rpd,
        Family::Hclp,
        Family::H,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Family::Enneper => "enneper",
            Family::Catenoid => "catenoid",
            Family::Helicoid => "helicoid",
            Family::JorgeMeeks => "jorge-meeks",
            Family::ScherkDoubly => "scherk-doubly",
            Family::ScherkSingly => "scherk-singly",
            Family::ScherkSheared => "scherk-sheared",
            Family::Tclp => "tCLP",
            Family::Td => "tD",
            Family::Tp => "tP",
            Family::Rpd => "rPD",
            Family::Hclp => "hCLP",
            Family::H => "H",
        }
    }

    /// Looks a family up by name or alias.
    pub fn from_name(name: &str) -> Result<Family> {
        if let Some(f) = Family::ALL.iter().find(|f| f.name() == name) {
            return Ok(*f);
        }
        let alias = match name {
            "scherk" => Family::ScherkDoubly,
            "scherk-tower" => Family::ScherkSingly,
            "CLP" => Family::Tclp,
            "jorge-meeks-2noid" => Family::JorgeMeeks,
            _ => return Err(Error::UnknownFamily(name.into())),
        };
        Ok(alias)
    }

    pub fn descriptor(&self) -> FamilyDescriptor {
        let none: Vec<ParamDomain> = Vec::new();
        let (params, template, periodicity, assoc_angle, cr_constant, limits, notes) = match self {
            Family::Enneper => (none, "G", Periodicity::None, 0.0, Some("0"), vec![], "single vertex at the north pole"),
            Family::Catenoid => (none, "1/G", Periodicity::None, 0.0, None, vec![], "rotation axis along x3"),
            Family::Helicoid => (
                none,
                "1/G",
                Periodicity::Singly,
                FRAC_PI_2,
                None,
                vec![],
                "catenoid data at associate angle pi/2",
            ),
            Family::JorgeMeeks => (none, "G/(G^2-1)^2", Periodicity::None, 0.0, None, vec![], "two catenoidal ends at G = 1 and G = -1"),
            Family::ScherkDoubly => (
                vec![
                    dom("rho", bound(0.0, "0"), None, Some(1.0)),
                    dom("Theta", None, None, Some(0.0)),
                ],
                "rho*exp(i*Theta)*G/(G^4-1)",
                Periodicity::Doubly,
                0.0,
                Some("-4 ln 4 + 4 ln rho"),
                vec![],
                "graph z = ln(cos y / cos x) up to homothety; Theta moves along the associate family",
            ),
            Family::ScherkSingly => (
                none,
                "G/(G^4+1)",
                Periodicity::Singly,
                0.0,
                Some("-4 ln 4"),
                vec![],
                "Scherk tower; vertices rotated by pi/4 from the doubly periodic case",
            ),
            Family::ScherkSheared => (
                vec![dom("theta", bound(0.0, "0"), bound(FRAC_PI_2, "pi/2"), None)],
                "G/((G^2-exp(2*i*theta))*(G^2-exp(-2*i*theta)))",
                Periodicity::Singly,
                0.0,
                Some("-4 ln 4"),
                vec![],
                "vertices at angles +-theta on the equator",
            ),
            Family::Tclp => (
                vec![
                    dom("lambda", bound(-2.0, "-2"), bound(2.0, "2"), None),
                    dom("theta", bound(0.0, "0"), bound(FRAC_PI_4, "pi/4"), None),
                ],
                TCLP_TEMPLATE,
                Periodicity::Triply,
                0.0,
                Some("-8 ln 4"),
                vec![(-2.0, Family::ScherkDoubly), (2.0, Family::ScherkSingly)],
                "lambda = -2 cos(4 theta); the limits lambda = -2 and 2 are the scherk-doubly and scherk-singly entries",
            ),
            Family::Td => (
                vec![
                    dom("lambda", None, bound(-2.0, "-2"), None),
                    dom("theta", bound(0.0, "0"), bound(FRAC_PI_2, "pi/2"), None),
                ],
                TCLP_TEMPLATE,
                Periodicity::Triply,
                0.0,
                Some("16 ln(a/(1+a^2)), a = tan(pi/4 - theta/2)"),
                vec![(-2.0, Family::ScherkDoubly)],
                "lambda = -(a^4 + 1/a^4); lambda = -14 is the Schwarz D surface",
            ),
            Family::Tp => (
                vec![dom("lambda", bound(2.0, "2"), None, None)],
                TCLP_TEMPLATE,
                Periodicity::Triply,
                0.0,
                None,
                vec![(2.0, Family::ScherkSingly)],
                "lambda = 14 is the Schwarz P surface, conjugate to tD at -lambda",
            ),
            Family::Rpd => (
                vec![
                    dom("a", bound(0.0, "0"), None, None),
                    dom("theta", bound(-FRAC_PI_2, "-pi/2"), bound(FRAC_PI_2, "pi/2"), None),
                ],
                "G/sqrt(G*(G^3-a^3)*(G^3+1/a^3))",
                Periodicity::Triply,
                0.0,
                Some("12 ln(a/(1+a^2))"),
                vec![],
                "a = tan(pi/4 - theta/2); conjugate to rPD at 1/a",
            ),
            Family::Hclp => (
                vec![
                    dom("theta", bound(0.0, "0"), bound(FRAC_PI_3, "pi/3"), None),
                    dom("lambda", bound(-2.0, "-2"), bound(2.0, "2"), None),
                ],
                TRIPOD_TEMPLATE,
                Periodicity::Triply,
                0.0,
                Some("-6 ln 4"),
                vec![],
                "lambda = -2 cos(3 theta); theta -> pi/3 tends to the saddle tower with 6 ends",
            ),
            Family::H => (
                vec![
                    dom("a", bound(0.0, "0"), bound(1.0, "1"), None),
                    dom("theta", bound(0.0, "0"), bound(FRAC_PI_2, "pi/2"), None),
                    dom("lambda", bound(2.0, "2"), None, None),
                ],
                TRIPOD_TEMPLATE,
                Periodicity::Triply,
                0.0,
                Some("12 ln(a/(1+a^2))"),
                vec![],
                "lambda = a^3 + 1/a^3, a = tan(pi/4 - theta/2); a -> 1 tends to the saddle tower with 6 ends",
            ),
        };
        FamilyDescriptor { family: *self, name: self.name(), params, template, periodicity, assoc_angle, cr_constant, limits, notes }
    }
}

pub fn descriptors() -> Vec<FamilyDescriptor> {
    Family::ALL.iter().map(Family::descriptor).collect()
}

fn tan_half(theta: f64) -> f64 {
    (FRAC_PI_4 - theta / 2.0).tan()
}

fn theta_from_a(a: f64) -> f64 {
    FRAC_PI_2 - 2.0 * a.atan()
}

/// The family parameter obtained from a geometric one: `theta ↦ lambda` for
/// tCLP, tD and hCLP, `a ↦ lambda` for H, `theta ↦ a` for rPD.
pub fn derived_parameter(name: &str, geom_param: f64) -> Result<f64> {
    let family = Family::from_name(name)?;
    let d = family.descriptor();
    let domain = |n: &str| -> Result<ParamDomain> {
        d.params.iter().find(|p| p.name == n).copied().ok_or_else(|| Error::UnknownParameter(n.into()))
    };
    match family {
        Family::Tclp => Ok(-2.0 * (4.0 * domain("theta")?.check(geom_param)?).cos()),
        Family::Td => {
            let t = domain("theta")?.check(geom_param)?;
            let (s, c) = t.sin_cos();
            Ok(-2.0 - 16.0 * s * s / c.powi(4))
        }
        Family::Hclp => Ok(-2.0 * (3.0 * domain("theta")?.check(geom_param)?).cos()),
        Family::H => {
            let a = domain("a")?.check(geom_param)?;
            Ok(a.powi(3) + a.powi(-3))
        }
        Family::Rpd => Ok(tan_half(domain("theta")?.check(geom_param)?)),
        _ => Err(Error::InvalidArgument(format!("family {} has no derived parameter", name))),
    }
}

/// A family member with its resolved parameters.
#[derive(Debug, Clone)]
pub struct FamilyInstance {
    pub family: Family,
    /// Every parameter of the member, given or derived.
    pub params: Params,
    pub data: WeierstrassData,
    pub assoc_angle: f64,
}

fn get(params: &Params, name: &str) -> Option<f64> {
    params.get(name).copied()
}

fn agree(a: f64, b: f64, name: &str) -> Result<()> {
    if (a - b).abs() <= 1e-9 * (1.0 + a.abs()) {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("inconsistent values for {}: {} and {}", name, a, b)))
    }
}

fn resolve(family: Family, given: &Params) -> Result<Params> {
    let d = family.descriptor();
    for name in given.keys() {
        if !d.params.iter().any(|p| p.name == name) {
            return Err(Error::UnknownParameter(name.clone()));
        }
    }
    let checked = |n: &str| -> Result<Option<f64>> {
        match get(given, n) {
            None => Ok(None),
            Some(x) => {
                let p = d.params.iter().find(|p| p.name == n).unwrap();
                p.check(x).map(Some)
            }
        }
    };
    let mut out = Params::new();
    let mut put = |k: &str, v: f64| {
        out.insert(k.into(), v);
    };
    match family {
        Family::Enneper | Family::Catenoid | Family::Helicoid | Family::JorgeMeeks | Family::ScherkSingly => {}
        Family::ScherkDoubly => {
            put("rho", checked("rho")?.unwrap_or(1.0));
            put("Theta", checked("Theta")?.unwrap_or(0.0));
        }
        Family::ScherkSheared => {
            put("theta", checked("theta")?.ok_or_else(|| Error::MissingParameter("theta".into()))?);
        }
        Family::Tclp => {
            let (lambda, theta) = match (checked("lambda")?, checked("theta")?) {
                (Some(l), Some(t)) => {
                    agree(l, -2.0 * (4.0 * t).cos(), "lambda")?;
                    (l, t)
                }
                (Some(l), None) => (l, (-l / 2.0).acos() / 4.0),
                (None, Some(t)) => (-2.0 * (4.0 * t).cos(), t),
                (None, None) => return Err(Error::MissingParameter("lambda or theta".into())),
            };
            put("lambda", lambda);
            put("theta", theta);
        }
        Family::Td => {
            let from_theta = |t: f64| (tan_half(t), derived_parameter("tD", t));
            let (lambda, theta, a) = match (checked("lambda")?, checked("theta")?) {
                (Some(l), Some(t)) => {
                    let (a, lt) = from_theta(t);
                    agree(l, lt?, "lambda")?;
                    (l, t, a)
                }
                (Some(l), None) => {
                    let a = ((-l - (l * l - 4.0).sqrt()) / 2.0).powf(0.25);
                    (l, theta_from_a(a), a)
                }
                (None, Some(t)) => {
                    let (a, l) = from_theta(t);
                    (l?, t, a)
                }
                (None, None) => return Err(Error::MissingParameter("lambda or theta".into())),
            };
            put("lambda", lambda);
            put("theta", theta);
            put("a", a);
        }
        Family::Tp => {
            put("lambda", checked("lambda")?.ok_or_else(|| Error::MissingParameter("lambda".into()))?);
        }
        Family::Rpd => {
            let (a, theta) = match (checked("a")?, checked("theta")?) {
                (Some(a), Some(t)) => {
                    agree(a, tan_half(t), "a")?;
                    (a, t)
                }
                (Some(a), None) => (a, theta_from_a(a)),
                (None, Some(t)) => (tan_half(t), t),
                (None, None) => return Err(Error::MissingParameter("a or theta".into())),
            };
            put("a", a);
            put("theta", theta);
        }
        Family::Hclp => {
            let (lambda, theta) = match (checked("lambda")?, checked("theta")?) {
                (Some(l), Some(t)) => {
                    agree(l, -2.0 * (3.0 * t).cos(), "lambda")?;
                    (l, t)
                }
                (Some(l), None) => (l, (-l / 2.0).acos() / 3.0),
                (None, Some(t)) => (-2.0 * (3.0 * t).cos(), t),
                (None, None) => return Err(Error::MissingParameter("theta or lambda".into())),
            };
            put("lambda", lambda);
            put("theta", theta);
        }
        Family::H => {
            let a_from_lambda = |l: f64| ((l - (l * l - 4.0).sqrt()) / 2.0).cbrt();
            let a = match (checked("a")?, checked("theta")?, checked("lambda")?) {
                (None, None, None) => return Err(Error::MissingParameter("a, theta or lambda".into())),
                (a, t, l) => {
                    let mut cands = Vec::new();
                    cands.extend(a);
                    cands.extend(t.map(tan_half));
                    cands.extend(l.map(a_from_lambda));
                    for c in &cands[1..] {
                        agree(cands[0], *c, "a")?;
                    }
                    cands[0]
                }
            };
            put("a", a);
            put("theta", theta_from_a(a));
            put("lambda", a.powi(3) + a.powi(-3));
        }
    }
    Ok(out)
}

/// Instantiates a named family.
pub fn instance(name: &str, params: &Params) -> Result<FamilyInstance> {
    let family = Family::from_name(name)?;
    let params = resolve(family, params)?;
    let d = family.descriptor();
    let data = WeierstrassData::from_source(d.template, &params, Default::default())?.with_label(d.name);
    Ok(FamilyInstance { family, params, data, assoc_angle: d.assoc_angle })
}

/// Weierstrass data of a named family member.
pub fn family(name: &str, params: &Params) -> Result<WeierstrassData> {
    instance(name, params).map(|i| i.data)
}

/// Unit vectors as listed for a family; the Chern-Ricci sum runs over the
/// listed vectors, or over `±` each of them when `expand_antipodes` is set.
#[derive(Debug, Clone, PartialEq)]
pub struct VertexConfiguration {
    pub listed: Vec<UnitVector>,
    pub expand_antipodes: bool,
}

impl VertexConfiguration {
    /// The vectors summed over: listed order, each followed by its antipode when expanded.
    pub fn summation_set(&self) -> Vec<UnitVector> {
        if !self.expand_antipodes {
            return self.listed.clone();
        }
        self.listed.iter().flat_map(|v| [*v, v.neg()]).collect()
    }

    /// Stereographic parameters of the summation set.
    pub fn parameters(&self) -> Result<Vec<ExtendedComplex>> {
        self.summation_set().iter().map(|v| stereographic(v.as_array())).collect()
    }
}

fn unit(v: [f64; 3]) -> UnitVector {
    UnitVector::normalize(v).expect("configuration vectors are nonzero")
}

fn equator(phi: f64) -> UnitVector {
    unit([phi.cos(), phi.sin(), 0.0])
}

impl FamilyInstance {
    fn param(&self, name: &str) -> f64 {
        self.params[name]
    }

    pub fn vertex_configuration(&self) -> Result<VertexConfiguration> {
        let (listed, expand) = match self.family {
            Family::Enneper => (vec![UnitVector::E3], false),
            Family::ScherkDoubly => (vec![UnitVector::E1, UnitVector::E2], true),
            Family::ScherkSingly => (vec![equator(FRAC_PI_4), equator(3.0 * FRAC_PI_4)], true),
            Family::ScherkSheared => {
                let t = self.param("theta");
                (vec![equator(t), equator(-t)], true)
            }
            Family::Tclp => {
                let (s, c) = self.param("theta").sin_cos();
                (vec![unit([c, s, 0.0]), unit([s, c, 0.0]), unit([-s, c, 0.0]), unit([-c, s, 0.0])], true)
            }
            Family::Td => {
                let (s, c) = self.param("theta").sin_cos();
                (vec![unit([c, 0.0, s]), unit([c, 0.0, -s]), unit([0.0, c, s]), unit([0.0, c, -s])], true)
            }
            Family::Rpd => {
                let (s, c) = self.param("theta").sin_cos();
                let w = 2.0 * PI / 3.0;
                (
                    vec![
                        UnitVector::E3,
                        unit([c, 0.0, -s]),
                        unit([c * w.cos(), c * w.sin(), -s]),
                        unit([c * (-w).cos(), c * (-w).sin(), -s]),
                    ],
                    true,
                )
            }
            Family::Hclp => {
                let t = self.param("theta");
                let w = 2.0 * PI / 3.0;
                let mut v: Vec<UnitVector> = (0..3).map(|k| equator(t + w * k as f64)).collect();
                v.push(UnitVector::E3);
                v.extend((0..3).map(|k| equator(-t + w * k as f64)));
                v.push(UnitVector::E3.neg());
                (v, false)
            }
            Family::H => {
                let (s, c) = self.param("theta").sin_cos();
                let w = 2.0 * PI / 3.0;
                let ring = |z: f64| -> Vec<UnitVector> {
                    (0..3).map(|k| unit([-c * (w * k as f64).cos(), -c * (w * k as f64).sin(), z])).collect()
                };
                let mut v = ring(s);
                v.push(UnitVector::E3);
                v.extend(ring(-s));
                v.push(UnitVector::E3.neg());
                (v, false)
            }
            Family::Catenoid | Family::Helicoid | Family::JorgeMeeks | Family::Tp => {
                return Err(Error::NoVertexConfiguration(self.family.name().into()))
            }
        };
        Ok(VertexConfiguration { listed, expand_antipodes: expand })
    }

    /// The Chern-Ricci spec whose function is constant on this family: all
    /// terms on the `1 − n_V` side over the summation set, added without weights.
    pub fn cr_spec(&self) -> Result<ChernRicciSpec> {
        let alphas = self.vertex_configuration()?.parameters()?;
        let normalization = if alphas.len() == 1 { Normalization::Weighted } else { Normalization::Sum };
        ChernRicciSpec::uniform(&alphas, Side::Minus, normalization)
    }

    /// The constant value of [`cr_function_direct`](crate::chern_ricci::cr_function_direct) under [`cr_spec`](Self::cr_spec).
    pub fn cr_constant(&self) -> Option<ExpectedValue> {
        let ln4 = 4f64.ln();
        let a_term = |a: f64| (a / (1.0 + a * a)).ln();
        let v = match self.family {
            Family::Enneper => 0.0,
            Family::ScherkDoubly => -4.0 * ln4 + 4.0 * self.param("rho").ln(),
            Family::ScherkSingly | Family::ScherkSheared => -4.0 * ln4,
            Family::Tclp => -8.0 * ln4,
            Family::Td => 16.0 * a_term(self.param("a")),
            Family::Rpd | Family::H => 12.0 * a_term(self.param("a")),
            Family::Hclp => -6.0 * ln4,
            Family::Catenoid | Family::Helicoid | Family::JorgeMeeks | Family::Tp => return None,
        };
        Some(ExpectedValue::derived(v))
    }
}

/// Vertex configuration of a named family member.
pub fn vertex_configuration(name: &str, params: &Params) -> Result<Vec<UnitVector>> {
    instance(name, params)?.vertex_configuration().map(|v| v.summation_set())
}

/// A point of the Scherk graph `z = ln(cos y / cos x)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScherkGraphPoint {
    pub x: f64,
    pub y: f64,
    pub height: f64,
    /// Upward unit normal.
    pub normal: UnitVector,
    pub curvature: f64,
}

/// Largest `|x|`, `|y|` accepted by [`scherk_graph`].
pub const SCHERK_DOMAIN: f64 = FRAC_PI_2 - 1e-9;

pub fn scherk_graph(x: f64, y: f64) -> Result<ScherkGraphPoint> {
    if !(x.abs() < SCHERK_DOMAIN && y.abs() < SCHERK_DOMAIN) {
        return Err(Error::DomainError { x, y });
    }
    let (tx, ty) = (x.tan(), y.tan());
    let s = 1.0 + tx * tx + ty * ty;
    let r = s.sqrt();
    let normal = UnitVector::normalize([-tx / r, ty / r, 1.0 / r])?;
    Ok(ScherkGraphPoint {
        x,
        y,
        height: y.cos().ln() - x.cos().ln(),
        normal,
        curvature: -(1.0 + tx * tx) * (1.0 + ty * ty) / (s * s),
    })
}
