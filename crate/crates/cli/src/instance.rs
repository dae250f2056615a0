//! JSON instance and certificate files.

use acit_core::scalar::{format_rational, parse_rational};
use acit_core::{Certificate, ClosestPair, Inequality, Point, Rational, Scalar, SolveStats};
use anyhow::{anyhow, bail, Context, Result};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sense {
    Leq,
    Geq,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HalfspaceSpec {
    pub normal: Vec<String>,
    pub offset: String,
    pub sense: Sense,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Metadata {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kind: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expected: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InstanceFile {
    pub d: usize,
    pub points: Vec<Vec<String>>,
    pub halfspaces: Vec<HalfspaceSpec>,
    #[serde(default)]
    pub metadata: Metadata,
}

/// Parses a decimal or `p/q` string into the scalar type.
pub fn parse_scalar<S: Scalar>(s: &str) -> Result<S> {
    if !S::EXACT && !s.contains('/') {
        let v: f64 = s.trim().parse().with_context(|| format!("bad number {s:?}"))?;
        return Ok(S::from_f64(v));
    }
    let r = parse_rational(s).ok_or_else(|| anyhow!("bad number {s:?}"))?;
    Ok(S::from_ratio(&r))
}

pub fn format_scalar<S: Scalar>(v: &S) -> String {
    if S::EXACT {
        format_rational(&v.to_ratio())
    } else {
        format!("{}", v.to_f64())
    }
}

fn parse_vec<S: Scalar>(v: &[String]) -> Result<Vec<S>> {
    v.iter().map(|s| parse_scalar(s)).collect()
}

fn format_vec<S: Scalar>(v: &[S]) -> Vec<String> {
    v.iter().map(format_scalar).collect()
}

impl InstanceFile {
    pub fn from_json(text: &str) -> Result<Self> {
        let inst: InstanceFile = serde_json::from_str(text).context("malformed instance JSON")?;
        inst.validate()?;
        Ok(inst)
    }

    pub fn read(path: &std::path::Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        Self::from_json(&text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("instance serializes") + "\n"
    }

    pub fn validate(&self) -> Result<()> {
        if self.d < 2 {
            bail!("dimension must be at least 2, got {}", self.d);
        }
        if self.points.is_empty() {
            bail!("instance has no points");
        }
        for (i, p) in self.points.iter().enumerate() {
            if p.len() != self.d {
                bail!("point {i} has {} coordinates, expected {}", p.len(), self.d);
            }
            for s in p {
                parse_rational(s).ok_or_else(|| anyhow!("point {i}: bad number {s:?}"))?;
            }
        }
        for (i, h) in self.halfspaces.iter().enumerate() {
            if h.normal.len() != self.d {
                bail!("halfspace {i} has {} normal entries, expected {}", h.normal.len(), self.d);
            }
            for s in h.normal.iter().chain(std::iter::once(&h.offset)) {
                parse_rational(s).ok_or_else(|| anyhow!("halfspace {i}: bad number {s:?}"))?;
            }
        }
        Ok(())
    }

    pub fn points<S: Scalar>(&self) -> Result<Vec<Point<S>>> {
        self.points.iter().map(|p| Ok(Point::new(parse_vec(p)?))).collect()
    }

    pub fn inequalities<S: Scalar>(&self) -> Result<Vec<Inequality<S>>> {
        self.halfspaces
            .iter()
            .map(|h| {
                let a = parse_vec(&h.normal)?;
                let b = parse_scalar(&h.offset)?;
                Ok(match h.sense {
                    Sense::Leq => Inequality::new(a, b),
                    Sense::Geq => Inequality::geq(a, b),
                })
            })
            .collect()
    }

    /// SHA-256 over the exact values, independent of number spelling and metadata.
    pub fn hash(&self) -> String {
        let canon = |s: &String| format_rational(&parse_rational(s).unwrap_or_default());
        let mut h = Sha256::new();
        h.update(format!("d={};", self.d));
        for p in &self.points {
            h.update("p");
            for c in p {
                h.update(format!(",{}", canon(c)));
            }
            h.update(";");
        }
        for hs in &self.halfspaces {
            h.update(if hs.sense == Sense::Leq { "h<=" } else { "h>=" });
            for c in &hs.normal {
                h.update(format!("{},", canon(c)));
            }
            h.update(format!("{};", canon(&hs.offset)));
        }
        h.finalize().iter().map(|b| format!("{b:02x}")).collect()
    }
}

pub fn rational_strings(v: &[Rational]) -> Vec<String> {
    v.iter().map(format_rational).collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CertificateJson {
    Witness {
        point: Vec<String>,
        coefficients: Vec<(usize, String)>,
        slacks: Vec<String>,
    },
    Separator {
        normal: Vec<String>,
        offset: String,
        x: Vec<String>,
        y: Vec<String>,
        dist2: String,
        y_coefficients: Vec<(usize, String)>,
        distance: f64,
    },
    EmptyH {
        multipliers: Vec<(usize, String)>,
    },
}

fn pairs_out<S: Scalar>(v: &[(usize, S)]) -> Vec<(usize, String)> {
    v.iter().map(|(i, s)| (*i, format_scalar(s))).collect()
}

fn pairs_in<S: Scalar>(v: &[(usize, String)]) -> Result<Vec<(usize, S)>> {
    v.iter().map(|(i, s)| Ok((*i, parse_scalar(s)?))).collect()
}

impl CertificateJson {
    pub fn from_certificate<S: Scalar>(c: &Certificate<S>) -> Self {
        match c {
            Certificate::Witness { point, coefficients, slacks } => CertificateJson::Witness {
                point: format_vec(point),
                coefficients: pairs_out(coefficients),
                slacks: format_vec(slacks),
            },
            Certificate::Separator { normal, offset, pair, y_coefficients, distance } => CertificateJson::Separator {
                normal: format_vec(normal),
                offset: format_scalar(offset),
                x: format_vec(&pair.x),
                y: format_vec(&pair.y),
                dist2: format_scalar(&pair.dist2),
                y_coefficients: pairs_out(y_coefficients),
                distance: *distance,
            },
            Certificate::EmptyH { multipliers } => CertificateJson::EmptyH { multipliers: pairs_out(multipliers) },
        }
    }

    pub fn to_certificate<S: Scalar>(&self) -> Result<Certificate<S>> {
        Ok(match self {
            CertificateJson::Witness { point, coefficients, slacks } => Certificate::Witness {
                point: Point::new(parse_vec(point)?),
                coefficients: pairs_in(coefficients)?,
                slacks: parse_vec(slacks)?,
            },
            CertificateJson::Separator { normal, offset, x, y, dist2, y_coefficients, distance } => {
                let pair = ClosestPair { x: Point::new(parse_vec(x)?), y: Point::new(parse_vec(y)?), dist2: parse_scalar(dist2)? };
                Certificate::Separator {
                    normal: parse_vec(normal)?,
                    offset: parse_scalar(offset)?,
                    pair,
                    y_coefficients: pairs_in(y_coefficients)?,
                    distance: *distance,
                }
            }
            CertificateJson::EmptyH { multipliers } => Certificate::EmptyH { multipliers: pairs_in(multipliers)? },
        })
    }

    pub fn intersects(&self) -> bool {
        matches!(self, CertificateJson::Witness { .. })
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct StatsJson {
    pub depth_reached: usize,
    pub recursive_calls: usize,
    pub base_cases: usize,
    pub fallback: bool,
    pub fallback_count: usize,
    pub direct_solves: usize,
    pub degenerate: bool,
    #[serde(default)]
    pub exact_retry: bool,
    pub max_loop_length: usize,
    pub loops: Vec<LoopJson>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct LoopJson {
    pub depth: usize,
    pub points: usize,
    pub halfspaces: usize,
    pub net_size: usize,
    pub tags: String,
    pub conflict_sizes: Vec<usize>,
}

impl From<&SolveStats> for StatsJson {
    fn from(s: &SolveStats) -> Self {
        StatsJson {
            depth_reached: s.depth_reached,
            recursive_calls: s.recursive_calls,
            base_cases: s.base_cases,
            fallback: s.fallback,
            fallback_count: s.fallback_count,
            direct_solves: s.direct_solves,
            degenerate: s.degenerate,
            exact_retry: s.exact_retry,
            max_loop_length: s.max_loop_length(),
            loops: s
                .loops
                .iter()
                .map(|l| LoopJson {
                    depth: l.depth,
                    points: l.points,
                    halfspaces: l.halfspaces,
                    net_size: l.net_size,
                    tags: l.tag_string(),
                    conflict_sizes: l.conflict_sizes.clone(),
                })
                .collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CertificateFile {
    pub instance_hash: String,
    pub mode: String,
    pub decision: String,
    pub certificate: CertificateJson,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stats: Option<StatsJson>,
}

impl CertificateFile {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("certificate serializes") + "\n"
    }

    pub fn read(path: &std::path::Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        serde_json::from_str(&text).context("malformed certificate JSON")
    }
}
