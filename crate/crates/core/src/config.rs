//! Scenario configuration: a TOML document, optionally layered on a named
//! preset, resolved into validated SI values. The grammar is documented in
//! `docs/config.md`.

use serde::Deserialize;
use sha2::{Digest, Sha256};
use toml::{Table, Value};

use crate::error::{Error, Result};
use crate::fit::{linear_grid, log_grid};
use crate::fp_analytic::{BathModel, RegimeWindows};
use crate::gas_bath::{BathCoefficients, GammaBackend};
use crate::random_field::{RandomFieldParams, DEFAULT_SEED};
use crate::units::{thermal_energy, GasConfig, PhysicalConstants, PointerConfig};

pub const SCENARIO_PRESETS: [&str; 5] = ["silver_pointer", "air_bath", "desk", "desk_saturation", "silver_random_field"];
pub const POINTER_PRESETS: [&str; 1] = ["silver_pointer"];
pub const GAS_PRESETS: [&str; 1] = ["air_bath"];

const SILVER_GRIDS: &str = r#"
[grid]
times = { min = 0.0, max = 1e-2, points = 5 }
positions = { min = 0.9995e-2, max = 1.0005e-2, points = 201 }
gamma_t = { min = 1e-4, max = 1e3, points = 141, spacing = "log" }
"#;

const DESK_GRIDS: &str = r#"
[constants]
hbar = 1.0
k_b = 1.0

[grid]
times = { min = 0.0, max = 2.0, points = 5 }
positions = { min = -16.0, max = 16.0, points = 161 }
gamma_t = { min = 1e-4, max = 1e3, points = 141, spacing = "log" }
"#;

fn scenario_preset(name: &str) -> Option<String> {
    let body = match name {
        "silver_pointer" => format!("[pointer]\npreset = \"silver_pointer\"\n{SILVER_GRIDS}"),
        "air_bath" => format!("[pointer]\npreset = \"silver_pointer\"\n[gas]\npreset = \"air_bath\"\n{SILVER_GRIDS}"),
        "desk" => format!(
            "{DESK_GRIDS}\n[pointer]\nmass = 50.0\ndelta = 1.0\nxbar = 10.0\n[coefficients]\ngamma = 1.0\ndiffusion = 0.25\n"
        ),
        "desk_saturation" => format!(
            "{DESK_GRIDS}\n[pointer]\nmass = 5.0\ndelta = 1.0\nxbar = 10.0\n[coefficients]\ngamma = 1.0\ndiffusion = 2.5\n"
        ),
        "silver_random_field" => r#"
[pointer]
preset = "silver_pointer"

[random_field]
nu = 2.5e9
sigma_bar = 1e-7

[grid]
times = { min = 1e-13, max = 1e-5, points = 81, spacing = "log" }
positions = { min = 0.9995e-2, max = 1.0005e-2, points = 201 }
"#
        .to_string(),
        _ => return None,
    };
    Some(body)
}

fn pointer_preset(name: &str) -> Option<Table> {
    match name {
        "silver_pointer" => Some(
            toml::from_str("mass = 1.8e-25\ndelta = 1e-6\nxbar = 1e-2\npopulation_plus = 0.5\nphi_plus = 0.0\nphi_minus = 0.0")
                .expect("pointer preset parses"),
        ),
        _ => None,
    }
}

fn gas_preset(name: &str) -> Option<Table> {
    match name {
        "air_bath" => Some(
            toml::from_str(
                "mass = 4.8e-26\ndensity = 2.5e25\ntemperature = 300.0\nrange = 1.75e-10\nstrength_over_thermal = 50.0",
            )
            .expect("gas preset parses"),
        ),
        _ => None,
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawScenario {
    constants: Option<RawConstants>,
    pointer: Option<RawPointer>,
    gas: Option<RawGas>,
    coefficients: Option<RawCoefficients>,
    random_field: Option<RawRandomField>,
    grid: Option<RawGrid>,
    validate: Option<RawValidate>,
    sweep: Option<RawSweep>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConstants {
    hbar: Option<f64>,
    k_b: Option<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawPointer {
    mass: Option<f64>,
    delta: Option<f64>,
    xbar: Option<f64>,
    population_plus: Option<f64>,
    phi_plus: Option<f64>,
    phi_minus: Option<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawGas {
    mass: Option<f64>,
    density: Option<f64>,
    temperature: Option<f64>,
    range: Option<f64>,
    strength: Option<f64>,
    strength_over_thermal: Option<f64>,
    gamma_backend: Option<String>,
    gamma: Option<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawCoefficients {
    gamma: Option<f64>,
    diffusion: Option<f64>,
    temperature: Option<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawRandomField {
    nu: Option<f64>,
    sigma_bar: Option<f64>,
    temperature: Option<f64>,
    omega0: Option<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum RawGridSpec {
    List(Vec<f64>),
    Range {
        min: f64,
        max: f64,
        points: usize,
        spacing: Option<String>,
    },
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawGrid {
    times: Option<RawGridSpec>,
    positions: Option<RawGridSpec>,
    gamma_t: Option<RawGridSpec>,
    early_window: Option<[f64; 2]>,
    linear_window: Option<[f64; 2]>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawValidate {
    mc_samples: Option<usize>,
    seed: Option<u64>,
    diffusion_perturbation: Option<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSweep {
    parameter: String,
    values: RawGridSpec,
}

/// The bath a scenario selects; at most one per run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BathSelection {
    None,
    Gas {
        gas: GasConfig,
        backend: GammaBackend,
        /// friction rate replacing the gas-derived value, at the gas temperature
        gamma_override: Option<f64>,
    },
    Coefficients {
        gamma: f64,
        diffusion: f64,
    },
    RandomField(RandomFieldParams),
}

impl BathSelection {
    pub fn kind(&self) -> &'static str {
        match self {
            BathSelection::None => "none",
            BathSelection::Gas { .. } => "gas",
            BathSelection::Coefficients { .. } => "coefficients",
            BathSelection::RandomField(_) => "random_field",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Grids {
    /// s, ascending
    pub times: Vec<f64>,
    /// m, ascending
    pub positions: Vec<f64>,
    /// γt values for the decoherence curve, ascending
    pub gamma_t: Vec<f64>,
    pub windows: RegimeWindows,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ValidateSettings {
    pub mc_samples: usize,
    pub seed: u64,
    /// relative change of D in the closed-form reference; 0 for a plain run
    pub diffusion_perturbation: f64,
}

/// Parameters that `sweep` may vary.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepParameter {
    Density,
    Strength,
    Temperature,
    Gamma,
    Delta,
    Xbar,
    Mass,
}

impl SweepParameter {
    pub const ALL: [SweepParameter; 7] = [
        SweepParameter::Density,
        SweepParameter::Strength,
        SweepParameter::Temperature,
        SweepParameter::Gamma,
        SweepParameter::Delta,
        SweepParameter::Xbar,
        SweepParameter::Mass,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SweepParameter::Density => "n0",
            SweepParameter::Strength => "phi0",
            SweepParameter::Temperature => "temperature",
            SweepParameter::Gamma => "gamma",
            SweepParameter::Delta => "delta",
            SweepParameter::Xbar => "xbar",
            SweepParameter::Mass => "mass",
        }
    }

    pub fn parse(name: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|p| p.name() == name)
            .ok_or_else(|| Error::UnknownParameter {
                name: name.to_string(),
                allowed: Self::ALL.map(|p| p.name()).join(", "),
            })
    }

    /// Whether the parameter belongs to the gas description.
    pub fn needs_gas(self) -> bool {
        matches!(self, SweepParameter::Density | SweepParameter::Strength)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSettings {
    pub parameter: SweepParameter,
    pub values: Vec<f64>,
}

/// A resolved, validated scenario.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub preset: Option<String>,
    pub constants: PhysicalConstants,
    pub pointer: PointerConfig,
    pub bath: BathSelection,
    pub grids: Grids,
    pub validate: ValidateSettings,
    pub sweep: Option<SweepSettings>,
    /// resolved document, sorted keys
    pub resolved: String,
}

impl Scenario {
    /// Parses a TOML document. `preset` (when given) is applied underneath
    /// the document and overrides a `preset` key inside it.
    pub fn from_toml(text: &str, preset: Option<&str>) -> Result<Self> {
        let mut doc: Table = toml::from_str(text).map_err(|e| Error::ConfigParse(e.to_string()))?;
        let name = match preset {
            Some(p) => Some(p.to_string()),
            None => match doc.remove("preset") {
                Some(Value::String(s)) => Some(s),
                Some(other) => return Err(Error::invalid("preset", format!("expected a string, got {other}"))),
                None => None,
            },
        };
        doc.remove("preset");
        let mut base = match &name {
            Some(n) => {
                let body = scenario_preset(n).ok_or_else(|| Error::UnknownPreset {
                    name: n.clone(),
                    known: SCENARIO_PRESETS.join(", "),
                })?;
                toml::from_str::<Table>(&body).expect("scenario preset parses")
            }
            None => Table::new(),
        };
        merge(&mut base, doc);
        expand_section_preset(&mut base, "pointer", pointer_preset, &POINTER_PRESETS)?;
        expand_section_preset(&mut base, "gas", gas_preset, &GAS_PRESETS)?;
        // bath sections set in the document replace a preset's bath
        let resolved = toml::to_string(&base).map_err(|e| Error::ConfigParse(e.to_string()))?;
        let raw: RawScenario = toml::from_str(&resolved).map_err(|e| Error::ConfigParse(e.to_string()))?;
        Self::resolve(raw, name, resolved)
    }

    /// Scenario from a named preset alone.
    pub fn preset(name: &str) -> Result<Self> {
        Self::from_toml("", Some(name))
    }

    pub fn from_path(path: &std::path::Path, preset: Option<&str>) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::ConfigParse(format!("cannot read {}: {e}", path.display())))?;
        Self::from_toml(&text, preset)
    }

    /// SHA-256 of the resolved document, hex encoded.
    pub fn config_hash(&self) -> String {
        Sha256::digest(self.resolved.as_bytes())
            .iter()
            .map(|b| format!("{b:02x}"))
            .collect()
    }

    fn resolve(raw: RawScenario, preset: Option<String>, resolved: String) -> Result<Self> {
        let constants = match raw.constants {
            Some(c) => PhysicalConstants::new(
                c.hbar.unwrap_or(PhysicalConstants::SI.hbar),
                c.k_b.unwrap_or(PhysicalConstants::SI.k_b),
            )?,
            None => PhysicalConstants::SI,
        };
        let rp = raw.pointer.ok_or_else(|| Error::MissingSection {
            section: "pointer".into(),
            reason: "every scenario needs a pointer".into(),
        })?;
        let pointer = PointerConfig::from_population(
            required("pointer.mass", rp.mass)?,
            required("pointer.delta", rp.delta)?,
            required("pointer.xbar", rp.xbar)?,
            rp.population_plus.unwrap_or(0.5),
            rp.phi_plus.unwrap_or(0.0),
            rp.phi_minus.unwrap_or(0.0),
        )?;

        let mut selected = Vec::new();
        if let Some(g) = raw.gas {
            selected.push(resolve_gas(g, &constants)?);
        }
        if let Some(c) = raw.coefficients {
            let gamma = required("coefficients.gamma", c.gamma)?;
            let diffusion = match (c.diffusion, c.temperature) {
                (Some(d), None) => d,
                (None, Some(t)) => BathCoefficients::from_friction(&pointer, &constants, gamma, t)?.diffusion,
                _ => {
                    return Err(Error::invalid(
                        "coefficients",
                        "give exactly one of `diffusion` or `temperature`",
                    ))
                }
            };
            BathCoefficients::from_diffusion(&pointer, &constants, gamma, diffusion)?;
            selected.push(BathSelection::Coefficients { gamma, diffusion });
        }
        if let Some(r) = raw.random_field {
            let nu = required("random_field.nu", r.nu)?;
            let rf = match (r.sigma_bar, r.temperature) {
                (Some(s), None) => {
                    let rf = RandomFieldParams::new(nu, s)?;
                    match r.omega0 {
                        Some(w) => rf.with_omega0(w)?,
                        None => rf,
                    }
                }
                (None, Some(t)) => RandomFieldParams::thermal(&pointer, &constants, nu, t, r.omega0)?,
                _ => {
                    return Err(Error::invalid(
                        "random_field",
                        "give exactly one of `sigma_bar` or `temperature`",
                    ))
                }
            };
            selected.push(BathSelection::RandomField(rf));
        }
        if selected.len() > 1 {
            let kinds: Vec<&str> = selected.iter().map(|b| b.kind()).collect();
            return Err(Error::invalid(
                "bath",
                format!("exactly one bath model per run, found sections {}", kinds.join(", ")),
            ));
        }
        let bath = selected.pop().unwrap_or(BathSelection::None);

        let g = raw.grid;
        let (times, positions, gamma_t, early, linear) = match g {
            Some(g) => (g.times, g.positions, g.gamma_t, g.early_window, g.linear_window),
            None => (None, None, None, None, None),
        };
        let defaults = RegimeWindows::default();
        let windows = RegimeWindows {
            early: window("grid.early_window", early, defaults.early)?,
            linear: window("grid.linear_window", linear, defaults.linear)?,
        };
        let grids = Grids {
            times: grid("grid.times", times, true)?,
            positions: grid("grid.positions", positions, false)?,
            gamma_t: grid("grid.gamma_t", gamma_t, true)?,
            windows,
        };

        let v = raw.validate;
        let validate = ValidateSettings {
            mc_samples: v.as_ref().and_then(|v| v.mc_samples).unwrap_or(10_000),
            seed: v.as_ref().and_then(|v| v.seed).unwrap_or(DEFAULT_SEED),
            diffusion_perturbation: v.as_ref().and_then(|v| v.diffusion_perturbation).unwrap_or(0.0),
        };
        if validate.mc_samples < 10_000 {
            return Err(Error::invalid("validate.mc_samples", "must be at least 10000"));
        }
        if !(validate.diffusion_perturbation.is_finite() && validate.diffusion_perturbation > -1.0) {
            return Err(Error::invalid("validate.diffusion_perturbation", "must be finite and > -1"));
        }

        let sweep = match raw.sweep {
            Some(s) => {
                let parameter = SweepParameter::parse(&s.parameter)?;
                let values = grid_values("sweep.values", s.values)?;
                if values.iter().any(|&x| !(x > 0.0)) {
                    return Err(Error::invalid("sweep.values", "must all be > 0"));
                }
                Some(SweepSettings { parameter, values })
            }
            None => None,
        };

        Ok(Self {
            preset,
            constants,
            pointer,
            bath,
            grids,
            validate,
            sweep,
            resolved,
        })
    }

    /// Fokker–Planck coefficients of the selected gas or coefficient bath.
    pub fn bath_coefficients(&self) -> Result<BathCoefficients> {
        match self.bath {
            BathSelection::Gas {
                gas,
                backend,
                gamma_override,
            } => {
                let b = BathCoefficients::from_gas(&self.pointer, &gas, &self.constants, backend)?;
                match gamma_override {
                    Some(g) => b.with_gamma(g),
                    None => Ok(b),
                }
            }
            BathSelection::Coefficients { gamma, diffusion } => {
                BathCoefficients::from_diffusion(&self.pointer, &self.constants, gamma, diffusion)
            }
            _ => Err(Error::MissingSection {
                section: "gas".into(),
                reason: "this command needs a `[gas]` or `[coefficients]` bath".into(),
            }),
        }
    }

    pub fn bath_model(&self) -> Result<BathModel> {
        Ok(BathModel::new(self.pointer, self.bath_coefficients()?))
    }

    pub fn gas(&self) -> Option<GasConfig> {
        match self.bath {
            BathSelection::Gas { gas, .. } => Some(gas),
            _ => None,
        }
    }

    pub fn random_field(&self) -> Result<RandomFieldParams> {
        match self.bath {
            BathSelection::RandomField(rf) => Ok(rf),
            _ => Err(Error::MissingSection {
                section: "random_field".into(),
                reason: "this command needs a random-field bath".into(),
            }),
        }
    }
}

fn resolve_gas(g: RawGas, c: &PhysicalConstants) -> Result<BathSelection> {
    let temperature = required("gas.temperature", g.temperature)?;
    let strength = match (g.strength, g.strength_over_thermal) {
        (Some(s), None) => s,
        (None, Some(r)) => r * thermal_energy(c, temperature),
        _ => {
            return Err(Error::invalid(
                "gas",
                "give exactly one of `strength` or `strength_over_thermal`",
            ))
        }
    };
    let gas = GasConfig::new(
        required("gas.mass", g.mass)?,
        required("gas.density", g.density)?,
        temperature,
        required("gas.range", g.range)?,
        strength,
    )?;
    let backend = match g.gamma_backend.as_deref() {
        None | Some("closed") => GammaBackend::Closed,
        Some("quadrature") => GammaBackend::Quadrature,
        Some(other) => {
            return Err(Error::invalid(
                "gas.gamma_backend",
                format!("expected `closed` or `quadrature`, got `{other}`"),
            ))
        }
    };
    if let Some(gm) = g.gamma {
        crate::error::require_positive("gas.gamma", gm)?;
    }
    Ok(BathSelection::Gas {
        gas,
        backend,
        gamma_override: g.gamma,
    })
}

fn required(field: &str, v: Option<f64>) -> Result<f64> {
    v.ok_or_else(|| Error::invalid(field, "required key is missing"))
}

fn window(field: &str, w: Option<[f64; 2]>, default: (f64, f64)) -> Result<(f64, f64)> {
    match w {
        None => Ok(default),
        Some([lo, hi]) if lo.is_finite() && hi.is_finite() && 0.0 < lo && lo < hi => Ok((lo, hi)),
        Some([lo, hi]) => Err(Error::invalid(field, format!("need 0 < lo < hi, got [{lo}, {hi}]"))),
    }
}

/// Grid from a `min:max:points[:log]` range, checked like a config grid.
pub fn range_values(field: &str, min: f64, max: f64, points: usize, spacing: Option<&str>) -> Result<Vec<f64>> {
    grid_values(
        field,
        RawGridSpec::Range {
            min,
            max,
            points,
            spacing: spacing.map(str::to_string),
        },
    )
}

fn grid_values(field: &str, spec: RawGridSpec) -> Result<Vec<f64>> {
    let values = match spec {
        RawGridSpec::List(v) => v,
        RawGridSpec::Range {
            min,
            max,
            points,
            spacing,
        } => {
            if points == 0 || !(min.is_finite() && max.is_finite()) || max < min {
                return Err(Error::invalid(field, format!("need finite min <= max and points >= 1, got {min}..{max} ({points})")));
            }
            match spacing.as_deref() {
                None | Some("linear") => linear_grid(min, max, points),
                Some("log") => {
                    if !(min > 0.0) {
                        return Err(Error::invalid(field, "log spacing needs min > 0"));
                    }
                    log_grid(min, max, points)
                }
                Some(other) => return Err(Error::invalid(field, format!("spacing must be `linear` or `log`, got `{other}`"))),
            }
        }
    };
    if values.is_empty() {
        return Err(Error::invalid(field, "grid is empty"));
    }
    if values.iter().any(|v| !v.is_finite()) {
        return Err(Error::invalid(field, "grid values must be finite"));
    }
    if values.windows(2).any(|w| w[1] < w[0]) {
        return Err(Error::invalid(field, "grid must be sorted ascending"));
    }
    Ok(values)
}

fn grid(field: &str, spec: Option<RawGridSpec>, non_negative: bool) -> Result<Vec<f64>> {
    let values = match spec {
        Some(s) => grid_values(field, s)?,
        None => return Ok(Vec::new()),
    };
    if non_negative && values[0] < 0.0 {
        return Err(Error::invalid(field, "values must be >= 0"));
    }
    Ok(values)
}

/// Overlays `top` on `base`; tables merge key by key. A bath section in
/// `top` drops any other bath section of `base`.
fn merge(base: &mut Table, top: Table) {
    const BATHS: [&str; 3] = ["gas", "coefficients", "random_field"];
    if BATHS.iter().any(|b| top.contains_key(*b)) {
        for b in BATHS {
            if !top.contains_key(b) {
                base.remove(b);
            }
        }
    }
    for (k, v) in top {
        match (base.get_mut(&k), v) {
            (Some(Value::Table(b)), Value::Table(t)) => merge_plain(b, t),
            (_, v) => {
                base.insert(k, v);
            }
        }
    }
}

fn merge_plain(base: &mut Table, top: Table) {
    for (k, v) in top {
        match (base.get_mut(&k), v) {
            (Some(Value::Table(b)), Value::Table(t)) => merge_plain(b, t),
            (_, v) => {
                base.insert(k, v);
            }
        }
    }
}

fn expand_section_preset(
    doc: &mut Table,
    section: &str,
    lookup: fn(&str) -> Option<Table>,
    known: &[&str],
) -> Result<()> {
    let Some(Value::Table(sec)) = doc.get_mut(section) else {
        return Ok(());
    };
    let Some(name) = sec.remove("preset") else {
        return Ok(());
    };
    let name = name
        .as_str()
        .ok_or_else(|| Error::invalid(format!("{section}.preset"), "expected a string"))?
        .to_string();
    let mut base = lookup(&name).ok_or_else(|| Error::UnknownPreset {
        name: name.clone(),
        known: known.join(", "),
    })?;
    // a preset supplies one way of giving the strength; an explicit key wins
    if section == "gas" && sec.contains_key("strength") {
        base.remove("strength_over_thermal");
    }
    merge_plain(&mut base, std::mem::take(sec));
    *sec = base;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn presets_resolve() {
        for name in SCENARIO_PRESETS {
            let s = Scenario::preset(name).unwrap_or_else(|e| panic!("{name}: {e}"));
            assert_eq!(s.preset.as_deref(), Some(name));
        }
        let s = Scenario::preset("air_bath").unwrap();
        assert_eq!(s.pointer, PointerConfig::silver_pointer());
        assert_eq!(s.gas(), Some(GasConfig::air_bath()));
    }

    #[test]
    fn document_overrides_preset() {
        let s = Scenario::from_toml("[gas]\ngamma = 2.5e9\n[pointer]\nxbar = 2e-2", Some("air_bath")).unwrap();
        assert_eq!(s.pointer.xbar(), 2e-2);
        assert!((s.bath_coefficients().unwrap().gamma - 2.5e9).abs() < 1.0);
    }

    #[test]
    fn bath_section_replaces_preset_bath() {
        let s = Scenario::from_toml("[random_field]\nnu = 1.0\nsigma_bar = 1e-7", Some("air_bath")).unwrap();
        assert_eq!(s.bath.kind(), "random_field");
    }

    #[test]
    fn two_baths_rejected() {
        let text = "[pointer]\npreset = \"silver_pointer\"\n[gas]\npreset = \"air_bath\"\n[coefficients]\ngamma = 1.0\ndiffusion = 1.0";
        let e = Scenario::from_toml(text, None).unwrap_err();
        assert!(e.is_config_error() && e.to_string().contains("exactly one bath"));
    }

    #[test]
    fn unknown_key_rejected() {
        let e = Scenario::from_toml("[pointer]\nmas = 1.0", None).unwrap_err();
        assert!(matches!(e, Error::ConfigParse(_)), "{e}");
    }

    #[test]
    fn unknown_preset_lists_known() {
        let e = Scenario::preset("gold").unwrap_err();
        assert!(e.to_string().contains("silver_pointer"));
    }

    #[test]
    fn unsorted_grid_rejected() {
        let e = Scenario::from_toml("[grid]\ntimes = [1.0, 0.5]", Some("silver_pointer")).unwrap_err();
        assert!(e.to_string().contains("sorted"));
    }

    #[test]
    fn hash_is_stable() {
        let a = Scenario::preset("desk").unwrap();
        let b = Scenario::from_toml("preset = \"desk\"", None).unwrap();
        assert_eq!(a.config_hash(), b.config_hash());
        assert_eq!(a.config_hash().len(), 64);
    }
}
