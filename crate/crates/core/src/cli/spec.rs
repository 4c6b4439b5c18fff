//! Scenario documents: parsing, validation and construction of the objects
//! they describe.

use std::sync::Arc;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gcomplexes::{concentrate, shift, tensor_power_shifted, GComplex, DEFAULT_TENSOR_CAP};
use crate::gmodules::{finite_field_units, regular_module, trivial_cyclic, GModule, DEFAULT_FIELD_CAP};
use crate::groups::{
    dihedral_group, direct_product, make_cyclic, quaternion_group, symmetric_group, FiniteGroup, DEFAULT_MAX_ORDER,
};
use crate::linalg::IntMatrix;
use crate::resolutions::{Engine, DEFAULT_BAR_CAP};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct ScenarioSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub description: Option<String>,
    pub group: GroupSpec,
    pub coefficients: CoefficientSpec,
    pub analyses: Vec<Analysis>,
    #[serde(default)]
    pub options: Options,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GroupSpec {
    Cyclic(usize),
    Symmetric(usize),
    Dihedral(usize),
    Quaternion,
    Product(Vec<GroupSpec>),
    Table(Vec<Vec<usize>>),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ModuleSpec {
    /// `Z/n` with trivial action; `0` is `Z`.
    Trivial(u64),
    Regular,
    FiniteFieldUnits { p: u64, f: u32, n: u32 },
    /// `Z^gens / relators` with one matrix per group element, row-major.
    Explicit {
        gens: usize,
        #[serde(default)]
        relators: Vec<Vec<i64>>,
        action: Vec<Vec<Vec<i64>>>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CoefficientSpec {
    /// A module in degree `degree`.
    Module {
        module: ModuleSpec,
        #[serde(default)]
        degree: i64,
    },
    /// `M^{⊗n}` placed in degree `n`.
    TensorPowerShift { base: ModuleSpec, n: u32 },
    /// `C[by]`.
    Shift { of: Box<CoefficientSpec>, by: i64 },
    /// Terms from degree `lo`; `differentials[i]: terms[i] → terms[i+1]`, row-major.
    Complex {
        lo: i64,
        terms: Vec<ModuleSpec>,
        #[serde(default)]
        differentials: Vec<Vec<Vec<i64>>>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Analysis {
    Tate,
    Formation,
    TateNakayama,
    ConeLes { m: Vec<u64> },
    NormTable,
    Resolution,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct Options {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub engine: Option<Engine>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub window: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub range: Option<(i64, i64)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_order: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bar_cap: Option<usize>,
}

pub const DEFAULT_RANGE: (i64, i64) = (-2, 3);
pub const DEFAULT_WINDOW: usize = 6;

/// Settings after merging document options with command-line overrides.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Settings {
    pub engine: Engine,
    pub window: usize,
    pub range: (i64, i64),
    pub max_order: usize,
    pub bar_cap: usize,
}

impl Settings {
    pub fn resolve(opts: &Options, overrides: &Options) -> Settings {
        Settings {
            engine: overrides.engine.or(opts.engine).unwrap_or(Engine::Auto),
            window: overrides.window.or(opts.window).unwrap_or(DEFAULT_WINDOW),
            range: overrides.range.or(opts.range).unwrap_or(DEFAULT_RANGE),
            max_order: overrides.max_order.or(opts.max_order).unwrap_or(DEFAULT_MAX_ORDER),
            bar_cap: overrides.bar_cap.or(opts.bar_cap).unwrap_or(DEFAULT_BAR_CAP),
        }
    }
}

/// Parses a JSON scenario; errors carry the failing field path and position.
pub fn parse_scenario(text: &str) -> Result<ScenarioSpec> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        let inner = e.into_inner();
        Error::InvalidArgument(format!(
            "at `{path}` (line {}, column {}): {inner}",
            inner.line(),
            inner.column()
        ))
    })
}

pub fn to_json(spec: &ScenarioSpec) -> String {
    serde_json::to_string_pretty(spec).expect("specs serialize")
}

impl GroupSpec {
    fn order_bound(&self) -> u128 {
        match self {
            GroupSpec::Cyclic(n) => *n as u128,
            GroupSpec::Symmetric(n) => (1..=*n as u128).product(),
            GroupSpec::Dihedral(n) => 2 * *n as u128,
            GroupSpec::Quaternion => 8,
            GroupSpec::Product(gs) => gs.iter().map(GroupSpec::order_bound).fold(1u128, |a, b| a.saturating_mul(b)),
            GroupSpec::Table(t) => t.len() as u128,
        }
    }

    pub fn build(&self, max_order: usize) -> Result<FiniteGroup> {
        let bound = self.order_bound();
        if bound > max_order as u128 {
            return Err(Error::CapExceeded { what: "group order".into(), value: bound, cap: max_order as u128 });
        }
        Ok(match self {
            GroupSpec::Cyclic(0) => return Err(Error::InvalidArgument("cyclic group of order 0".into())),
            GroupSpec::Cyclic(n) => make_cyclic(*n),
            GroupSpec::Symmetric(n) if *n >= 1 => symmetric_group(*n),
            GroupSpec::Dihedral(n) if *n >= 1 => dihedral_group(*n),
            GroupSpec::Symmetric(_) | GroupSpec::Dihedral(_) => {
                return Err(Error::InvalidArgument("degree must be positive".into()))
            }
            GroupSpec::Quaternion => quaternion_group(),
            GroupSpec::Product(gs) => {
                let mut acc = make_cyclic(1);
                for g in gs {
                    acc = direct_product(&acc, &g.build(max_order)?);
                }
                acc
            }
            GroupSpec::Table(t) => FiniteGroup::from_table(t.clone())?,
        })
    }
}

fn matrix(rows: &[Vec<i64>], nrows: usize, ncols: usize, what: &str) -> Result<IntMatrix> {
    if rows.len() != nrows || rows.iter().any(|r| r.len() != ncols) {
        return Err(Error::Dimension(format!("{what} must be {nrows}×{ncols}")));
    }
    if nrows == 0 {
        return Ok(IntMatrix::zeros(0, ncols));
    }
    Ok(IntMatrix::from_rows(rows))
}

impl ModuleSpec {
    pub fn build(&self, g: &Arc<FiniteGroup>) -> Result<GModule> {
        match self {
            ModuleSpec::Trivial(n) => Ok(trivial_cyclic(g, *n)),
            ModuleSpec::Regular => Ok(regular_module(g)),
            ModuleSpec::FiniteFieldUnits { p, f, n } => {
                let m = finite_field_units(*p, *f, *n, DEFAULT_FIELD_CAP)?;
                if m.group().table() != g.table() {
                    return Err(Error::GroupMismatch(format!(
                        "finite-field units with n = {n} need the cyclic group of order {n}"
                    )));
                }
                Ok(GModule::new(g.clone(), m.gens(), m.relators().clone(), m.actions().to_vec())?)
            }
            ModuleSpec::Explicit { gens, relators, action } => {
                let rel = if relators.is_empty() {
                    IntMatrix::zeros(*gens, 0)
                } else {
                    let ncols = relators[0].len();
                    matrix(relators, *gens, ncols, "relators")?
                };
                if action.len() != g.order() {
                    return Err(Error::InvalidModule(format!(
                        "expected {} action matrices, found {}",
                        g.order(),
                        action.len()
                    )));
                }
                let acts = action.iter().map(|a| matrix(a, *gens, *gens, "action")).collect::<Result<Vec<_>>>()?;
                GModule::new(g.clone(), *gens, rel, acts)
            }
        }
    }
}

impl CoefficientSpec {
    pub fn build(&self, g: &Arc<FiniteGroup>) -> Result<GComplex> {
        match self {
            CoefficientSpec::Module { module, degree } => Ok(concentrate(&module.build(g)?, *degree)),
            CoefficientSpec::TensorPowerShift { base, n } => tensor_power_shifted(&base.build(g)?, *n, DEFAULT_TENSOR_CAP),
            CoefficientSpec::Shift { of, by } => Ok(shift(&of.build(g)?, *by)),
            CoefficientSpec::Complex { lo, terms, differentials } => {
                if terms.is_empty() {
                    return Err(Error::InvalidComplex("a complex needs at least one term".into()));
                }
                let terms = terms.iter().map(|t| t.build(g)).collect::<Result<Vec<_>>>()?;
                if differentials.len() + 1 != terms.len() {
                    return Err(Error::InvalidComplex(format!(
                        "{} terms need {} differentials",
                        terms.len(),
                        terms.len() - 1
                    )));
                }
                let diffs = differentials
                    .iter()
                    .enumerate()
                    .map(|(i, d)| matrix(d, terms[i + 1].gens(), terms[i].gens(), "differential"))
                    .collect::<Result<Vec<_>>>()?;
                GComplex::new(g.clone(), *lo, terms, diffs)
            }
        }
    }
}

/// Builds and checks everything a spec describes without computing.
pub fn validate(spec: &ScenarioSpec, settings: &Settings) -> Result<(Arc<FiniteGroup>, GComplex)> {
    if spec.analyses.is_empty() {
        return Err(Error::InvalidArgument("no analyses requested".into()));
    }
    if settings.range.0 > settings.range.1 {
        return Err(Error::InvalidArgument(format!("empty range {}..{}", settings.range.0, settings.range.1)));
    }
    for a in &spec.analyses {
        if let Analysis::ConeLes { m } = a {
            if m.is_empty() || m.contains(&0) {
                return Err(Error::InvalidArgument("cone-les needs positive multipliers".into()));
            }
        }
    }
    let g = Arc::new(spec.group.build(settings.max_order)?);
    let c = spec.coefficients.build(&g)?;
    Ok((g, c))
}

/// Invariant factors as JSON numbers where they fit.
pub(crate) fn big_json(x: &BigInt) -> serde_json::Value {
    match i64::try_from(x) {
        Ok(v) => serde_json::Value::from(v),
        Err(_) => serde_json::Value::from(x.to_string()),
    }
}
