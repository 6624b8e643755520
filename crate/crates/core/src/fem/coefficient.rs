//! Coefficient fields and their descriptor strings.
//!
//! Grammar: `name:csv-floats` with
//!
//! * `const:c` -> `c`
//! * `affine:a,b1,b2[,b3]` -> `a + b . x`
//! * `sinbump:a,b` -> `a + b prod_i sin(pi x_i)`

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use crate::{Error, Result};

#[derive(Clone)]
pub enum Coefficient {
    Const(f64),
    Affine {
        offset: f64,
        slope: Vec<f64>,
    },
    SinBump {
        base: f64,
        amplitude: f64,
    },
    /// User-supplied evaluator with a free-form descriptor.
    Custom {
        descriptor: String,
        eval: Arc<dyn Fn(&[f64]) -> f64 + Send + Sync>,
    },
}

impl Coefficient {
    pub fn eval(&self, x: &[f64]) -> f64 {
        match self {
            Coefficient::Const(c) => *c,
            Coefficient::Affine { offset, slope } => {
                offset + slope.iter().zip(x).map(|(b, x)| b * x).sum::<f64>()
            }
            Coefficient::SinBump { base, amplitude } => {
                base + amplitude
                    * x.iter()
                        .map(|&xi| (std::f64::consts::PI * xi).sin())
                        .product::<f64>()
            }
            Coefficient::Custom { eval, .. } => eval(x),
        }
    }

    pub fn is_constant(&self) -> bool {
        match self {
            Coefficient::Const(_) => true,
            Coefficient::Affine { slope, .. } => slope.iter().all(|&b| b == 0.0),
            Coefficient::SinBump { amplitude, .. } => *amplitude == 0.0,
            Coefficient::Custom { .. } => false,
        }
    }

    /// Conservative lower bound over a bounding box, when one is known.
    ///
    /// Affine fields are bounded by their minimum over the box corners;
    /// custom fields have no automatic bound.
    pub fn auto_lower_bound(&self, bbox: &[(f64, f64)]) -> Option<f64> {
        match self {
            Coefficient::Const(c) => Some(*c),
            Coefficient::Affine { offset, slope } => Some(
                offset
                    + slope
                        .iter()
                        .zip(bbox.iter().chain(std::iter::repeat(&(0.0, 0.0))))
                        .map(|(b, &(lo, hi))| (b * lo).min(b * hi))
                        .sum::<f64>(),
            ),
            Coefficient::SinBump { base, amplitude } => Some(base - amplitude.abs()),
            Coefficient::Custom { .. } => None,
        }
    }

    pub fn descriptor(&self) -> String {
        self.to_string()
    }
}

impl fmt::Debug for Coefficient {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Coefficient({self})")
    }
}

impl fmt::Display for Coefficient {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Coefficient::Const(c) => write!(f, "const:{c}"),
            Coefficient::Affine { offset, slope } => {
                write!(f, "affine:{offset}")?;
                for b in slope {
                    write!(f, ",{b}")?;
                }
                Ok(())
            }
            Coefficient::SinBump { base, amplitude } => write!(f, "sinbump:{base},{amplitude}"),
            Coefficient::Custom { descriptor, .. } => f.write_str(descriptor),
        }
    }
}

impl FromStr for Coefficient {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidCoefficient(s.to_string());
        let (name, args) = s.split_once(':').ok_or_else(bad)?;
        let values: Vec<f64> = args
            .split(',')
            .map(|t| t.trim().parse::<f64>().map_err(|_| bad()))
            .collect::<Result<_>>()?;
        if values.iter().any(|v| !v.is_finite()) {
            return Err(bad());
        }
        match (name, values.len()) {
            ("const", 1) => Ok(Coefficient::Const(values[0])),
            ("affine", 3 | 4) => Ok(Coefficient::Affine {
                offset: values[0],
                slope: values[1..].to_vec(),
            }),
            ("sinbump", 2) => Ok(Coefficient::SinBump {
                base: values[0],
                amplitude: values[1],
            }),
            _ => Err(bad()),
        }
    }
}

/// A coefficient together with the lower bound it is checked against.
#[derive(Debug, Clone)]
pub struct CoefficientField {
    pub coefficient: Coefficient,
    pub lower_bound: f64,
}

impl CoefficientField {
    pub fn new(coefficient: Coefficient, lower_bound: f64) -> Result<Self> {
        if !(lower_bound > 0.0) || !lower_bound.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "lower bound must be positive, got {lower_bound}"
            )));
        }
        Ok(Self {
            coefficient,
            lower_bound,
        })
    }

    pub fn constant(c: f64) -> Result<Self> {
        Self::new(Coefficient::Const(c), c)
    }

    /// Uses [`Coefficient::auto_lower_bound`] over `bbox`.
    pub fn with_auto_bound(coefficient: Coefficient, bbox: &[(f64, f64)]) -> Result<Self> {
        let bound = coefficient.auto_lower_bound(bbox).ok_or_else(|| {
            Error::InvalidArgument(format!("no automatic lower bound for `{coefficient}`"))
        })?;
        Self::new(coefficient, bound)
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        self.coefficient.eval(x)
    }

    pub fn descriptor(&self) -> String {
        self.coefficient.descriptor()
    }
}
