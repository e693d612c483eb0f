use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::algebra::{AlgebraId, LieFamily, Representation, RootSubset, RootSystem};
use crate::elliptic::Lattice;
use crate::rmatrix::{FamilyKind, RMatrixSpec};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Rmatrix,
    Fpb,
    Energy,
    Gradients,
    Conservation,
}

impl Suite {
    pub const ALL: [Suite; 5] = [
        Suite::Rmatrix,
        Suite::Fpb,
        Suite::Energy,
        Suite::Gradients,
        Suite::Conservation,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Rmatrix => "rmatrix",
            Suite::Fpb => "fpb",
            Suite::Energy => "energy",
            Suite::Gradients => "gradients",
            Suite::Conservation => "conservation",
        }
    }

    /// Checks reported by the suite, in report order.
    pub fn checks(self) -> &'static [&'static str] {
        match self {
            Suite::Rmatrix => &["zero_weight", "unitarity", "residue", "cdybe"],
            Suite::Fpb => &["fpb", "fpb_forms", "fpb_ablation"],
            Suite::Energy => &["energy_contour", "contour_convergence"],
            Suite::Gradients => &["hamiltonian_gradient", "lax_gradient", "dq_derivative", "flow_bracket"],
            Suite::Conservation => &[
                "energy_drift",
                "momentum_drift",
                "sigma_persistence",
                "spectral_drift",
                "anomaly_witness",
            ],
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim().to_ascii_lowercase();
        Suite::ALL.into_iter().find(|suite| suite.name() == s).ok_or_else(|| {
            Error::Invalid(format!(
                "unknown suite '{s}' (expected rmatrix, fpb, energy, gradients or conservation)"
            ))
        })
    }
}

/// Checks whose residual must stay *above* the tolerance.
pub fn is_lower_bound(check: &str) -> bool {
    matches!(check, "fpb_ablation" | "anomaly_witness")
}

/// Tolerance table keyed by check name. `cdybe_elliptic` overrides `cdybe`
/// for the elliptic family.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Tolerances(pub BTreeMap<String, f64>);

impl Default for Tolerances {
    fn default() -> Self {
        let table = [
            ("zero_weight", 1e-11),
            ("unitarity", 1e-9),
            ("residue", 1e-8),
            ("cdybe", 1e-9),
            ("cdybe_elliptic", 1e-7),
            ("fpb", 1e-9),
            ("fpb_forms", 1e-11),
            ("fpb_ablation", 1e-3),
            ("energy_contour", 1e-8),
            ("contour_convergence", 1e-12),
            ("hamiltonian_gradient", 1e-6),
            ("lax_gradient", 1e-6),
            ("dq_derivative", 1e-6),
            ("flow_bracket", 1e-8),
            ("energy_drift", 1e-6),
            ("momentum_drift", 1e-6),
            ("sigma_persistence", 1e-6),
            ("spectral_drift", 1e-5),
            ("anomaly_witness", 1e-2),
        ];
        Self(table.into_iter().map(|(k, v)| (k.to_string(), v)).collect())
    }
}

impl Tolerances {
    pub fn get(&self, check: &str, family: FamilyKind) -> Result<f64> {
        if check == "cdybe" && family == FamilyKind::Elliptic {
            if let Some(t) = self.0.get("cdybe_elliptic") {
                return Ok(*t);
            }
        }
        self.0
            .get(check)
            .copied()
            .ok_or_else(|| Error::Invalid(format!("no tolerance configured for check '{check}'")))
    }

    /// Overrides entries of the default table; unknown names are rejected.
    pub fn with_overrides(overrides: &BTreeMap<String, f64>) -> Result<Self> {
        let mut t = Self::default();
        for (k, v) in overrides {
            if !t.0.contains_key(k) {
                return Err(Error::Invalid(format!("unknown tolerance '{k}'")));
            }
            t.0.insert(k.clone(), *v);
        }
        Ok(t)
    }
}

/// One r-matrix configuration. `roots` lists `Δ′` (rational) or `Π′`
/// (trigonometric) by label and is ignored for the elliptic family.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CaseSpec {
    pub algebra: AlgebraId,
    pub family: FamilyKind,
    #[serde(default)]
    pub roots: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub half_periods: Option<[Complex64; 2]>,
    /// Skip the closure check on `Δ′` (negative controls only).
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub unchecked: bool,
}

impl CaseSpec {
    pub fn label(&self) -> String {
        let mut s = format!("{} {}", self.family, self.algebra);
        match self.family {
            FamilyKind::Rational => s.push_str(&format!(" delta'={{{}}}", self.roots.join(","))),
            FamilyKind::Trigonometric => s.push_str(&format!(" pi'={{{}}}", self.roots.join(","))),
            FamilyKind::Elliptic => {
                if let Some([w1, w2]) = self.half_periods {
                    s.push_str(&format!(" omega=({w1},{w2})"));
                }
            }
        }
        if self.unchecked {
            s.push_str(" (unchecked)");
        }
        s
    }

    pub fn lattice(&self) -> Result<Lattice> {
        match self.half_periods {
            Some([w1, w2]) => Lattice::new(w1, w2),
            None => Ok(Lattice::square()),
        }
    }

    pub fn build(&self, rep: Arc<Representation>) -> Result<RMatrixSpec> {
        let rs = rep.root_system();
        let indices = self
            .roots
            .iter()
            .map(|l| rs.parse_label(l))
            .collect::<Result<Vec<_>>>()?;
        match self.family {
            FamilyKind::Rational if self.unchecked => RMatrixSpec::rational_unchecked(rep, &indices),
            FamilyKind::Rational => {
                let subset = RootSubset::closed(rep.root_system(), &indices)?;
                RMatrixSpec::rational(rep, subset)
            }
            FamilyKind::Trigonometric => RMatrixSpec::trigonometric_standard(rep, &indices),
            FamilyKind::Elliptic => Ok(RMatrixSpec::elliptic(rep, self.lattice()?)),
        }
    }
}

/// Resolves a root selection: `all`, `none`, or comma-separated labels.
/// For the trigonometric family `all` means every simple root.
pub fn resolve_roots(rs: &RootSystem, family: FamilyKind, selection: &str) -> Result<Vec<String>> {
    let s = selection.trim();
    match s.to_ascii_lowercase().as_str() {
        "all" => Ok(match family {
            FamilyKind::Trigonometric => rs.simple_roots().iter().map(|&k| rs.label(k)).collect(),
            _ => (0..rs.len()).map(|k| rs.label(k)).collect(),
        }),
        "none" | "" => Ok(Vec::new()),
        _ => s.split(',').map(|l| rs.parse_label(l).map(|k| rs.label(k))).collect(),
    }
}

/// Settings for the fixed-seed trajectories of the conservation suite.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ConservationSettings {
    pub t_end: f64,
    pub dt: f64,
    pub record_every: usize,
    pub spectral_z: Vec<Complex64>,
    pub spectral_kmax: usize,
}

impl Default for ConservationSettings {
    fn default() -> Self {
        Self {
            t_end: 10.0,
            dt: 1e-3,
            record_every: 100,
            spectral_z: vec![
                Complex64::new(0.35, 0.0),
                Complex64::new(0.2, 0.3),
                Complex64::new(-0.3, 0.25),
                Complex64::new(0.1, -0.4),
                Complex64::new(-0.45, 0.0),
            ],
            spectral_kmax: 3,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuiteConfig {
    pub families: Vec<FamilyKind>,
    pub algebras: Vec<AlgebraId>,
    pub samples: usize,
    pub seed: u64,
    pub tolerances: Tolerances,
    /// `Δ′` selections for the rational family; `None` uses `none`, `a1,-a1`, `all`.
    #[serde(default)]
    pub delta_prime: Option<Vec<String>>,
    /// `Π′` selections for the trigonometric family; `None` uses `none`, `a1`, `all`.
    #[serde(default)]
    pub pi_prime: Option<Vec<String>>,
    #[serde(default)]
    pub half_periods: Option<[Complex64; 2]>,
    /// Adds a rational case with a non-closed `Δ′`, expected to fail the CDYBE.
    #[serde(default)]
    pub negative_control: bool,
    #[serde(default)]
    pub conservation: ConservationSettings,
}

pub const DEFAULT_SEED: u64 = 20_240_517;

const A1: AlgebraId = AlgebraId::new(LieFamily::A, 1);
const A2: AlgebraId = AlgebraId::new(LieFamily::A, 2);
const B2: AlgebraId = AlgebraId::new(LieFamily::B, 2);

impl SuiteConfig {
    /// Defaults for a suite: sl(2), sl(3), so(5) except sl(2), sl(3) for the
    /// bracket suite; 20 samples for the energy suite and 100 otherwise.
    pub fn defaults(suite: Suite) -> Self {
        let algebras = match suite {
            Suite::Fpb => vec![A1, A2],
            Suite::Conservation => vec![],
            _ => vec![A1, A2, B2],
        };
        Self {
            families: FamilyKind::ALL.to_vec(),
            algebras,
            samples: match suite {
                Suite::Energy => 20,
                Suite::Conservation => 1,
                _ => 100,
            },
            seed: DEFAULT_SEED,
            tolerances: Tolerances::default(),
            delta_prime: None,
            pi_prime: None,
            half_periods: None,
            negative_control: false,
            conservation: ConservationSettings::default(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.samples == 0 {
            return Err(Error::Invalid("samples must be at least 1".into()));
        }
        if self.families.is_empty() {
            return Err(Error::Invalid("no families selected".into()));
        }
        for (k, v) in &self.tolerances.0 {
            if !(*v > 0.0 && v.is_finite()) {
                return Err(Error::Invalid(format!("tolerance '{k}' must be positive, got {v}")));
            }
        }
        for id in &self.algebras {
            id.validate()?;
        }
        let c = &self.conservation;
        if !(c.dt > 0.0 && c.t_end > 0.0) || c.record_every == 0 || c.spectral_z.is_empty() || c.spectral_kmax < 2 {
            return Err(Error::Invalid(
                "conservation settings need dt, t_end > 0, record_every >= 1, sample z and kmax >= 2".into(),
            ));
        }
        if let Some([w1, w2]) = self.half_periods {
            Lattice::new(w1, w2)?;
        }
        Ok(())
    }

    /// The r-matrix configurations swept by a suite, in report order.
    pub fn cases(&self, suite: Suite) -> Result<Vec<CaseSpec>> {
        if suite == Suite::Conservation {
            return Ok(self.conservation_cases());
        }
        let delta = self
            .delta_prime
            .clone()
            .unwrap_or_else(|| vec!["none".into(), "a1,-a1".into(), "all".into()]);
        let pi = self
            .pi_prime
            .clone()
            .unwrap_or_else(|| vec!["none".into(), "a1".into(), "all".into()]);
        let mut out = Vec::new();
        for &algebra in &self.algebras {
            let rs = crate::algebra::build_root_system(algebra)?;
            for &family in &self.families {
                let selections: &[String] = match family {
                    FamilyKind::Rational => &delta,
                    FamilyKind::Trigonometric => &pi,
                    FamilyKind::Elliptic => &[],
                };
                if family == FamilyKind::Elliptic {
                    out.push(CaseSpec {
                        algebra,
                        family,
                        roots: vec![],
                        half_periods: self.half_periods,
                        unchecked: false,
                    });
                    continue;
                }
                for sel in selections {
                    let roots =
                        resolve_roots(&rs, family, sel).map_err(|e| e.context(format!("{family} {algebra}")))?;
                    if out
                        .iter()
                        .any(|c: &CaseSpec| c.algebra == algebra && c.family == family && c.roots == roots)
                    {
                        continue;
                    }
                    out.push(CaseSpec {
                        algebra,
                        family,
                        roots,
                        half_periods: None,
                        unchecked: false,
                    });
                }
            }
        }
        if suite == Suite::Rmatrix && self.negative_control {
            out.push(CaseSpec {
                algebra: A2,
                family: FamilyKind::Rational,
                roots: ["a1", "a2", "-a1", "-a2"].map(String::from).to_vec(),
                half_periods: None,
                unchecked: true,
            });
        }
        Ok(out)
    }

    fn conservation_cases(&self) -> Vec<CaseSpec> {
        self.families
            .iter()
            .map(|&family| match family {
                FamilyKind::Rational => CaseSpec {
                    algebra: A2,
                    family,
                    roots: ["a1", "a2", "a1+a2", "-a1", "-a2", "-(a1+a2)"]
                        .map(String::from)
                        .to_vec(),
                    half_periods: None,
                    unchecked: false,
                },
                FamilyKind::Trigonometric => CaseSpec {
                    algebra: A1,
                    family,
                    roots: vec!["a1".into()],
                    half_periods: None,
                    unchecked: false,
                },
                FamilyKind::Elliptic => CaseSpec {
                    algebra: A1,
                    family,
                    roots: vec![],
                    half_periods: self.half_periods,
                    unchecked: false,
                },
            })
            .collect()
    }
}
