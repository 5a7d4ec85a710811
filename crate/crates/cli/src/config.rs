//! Run configuration in a strict INI-like format.
//!
//! ```text
//! [cavity]
//! kappa_out = 40.53
//!
//! [emitter]
//! x = 0.0
//! kappa_vib = 25
//!
//! [initial]
//! state = emitter:1
//! ```
//!
//! Blocks: `[cavity]`, `[emitter]` (one per emitter, in order), `[profile]`,
//! `[drive]`, `[initial]`, `[model]`, `[evolution]`, `[sweep]`. Unknown
//! blocks, unknown keys and repeated keys are errors. `#` starts a comment.
//! Energies are in meV, lengths in nm, times in fs.

use std::collections::HashMap;
use std::fmt::{self, Write as _};
use std::path::{Path, PathBuf};

use nanoqed_core::cavity::{default_profile, drive_for_photon_number, in_coupling};
use nanoqed_core::operators::BasisState;
use nanoqed_core::sweep::{MapObservable, DEFAULT_CELL_BUDGET};
use nanoqed_core::{
    AxisKind, DephasingConvention, DriveSpec, EmitterSpec, EvolutionConfig, InitialState, IntegrationMethod,
    ModeProfile, NanocavityParams, Placement, SweepAxis, SystemParams, C64,
};

/// Parse failure with a 1-based source position when one applies.
#[derive(Clone, Debug, PartialEq)]
pub struct ConfigError {
    pub source: Option<String>,
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(s) = &self.source {
            write!(f, "{s}:")?;
        }
        if self.line > 0 {
            write!(f, "{}:{}: ", self.line, self.column)?;
        } else if self.source.is_some() {
            f.write_str(" ")?;
        }
        f.write_str(&self.message)
    }
}

impl std::error::Error for ConfigError {}

fn err_at(line: usize, column: usize, message: impl Into<String>) -> ConfigError {
    ConfigError {
        source: None,
        line,
        column,
        message: message.into(),
    }
}

/// Hilbert-space and dissipator settings.
#[derive(Clone, Debug, PartialEq)]
pub struct ModelConfig {
    pub n_max: usize,
    pub sector_cap: Option<usize>,
    pub convention: DephasingConvention,
}

impl Default for ModelConfig {
    fn default() -> Self {
        Self {
            n_max: 2,
            sector_cap: None,
            convention: DephasingConvention::Literal,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum SweepConfig {
    Map {
        axis1: SweepAxis,
        axis2: SweepAxis,
        observables: Vec<MapObservable>,
        /// Empty-cavity photon number used to calibrate α when there is no `[drive]`.
        photon_number: f64,
        cell_budget: usize,
    },
    Position {
        placement: Placement,
        axis: SweepAxis,
        cell_budget: usize,
    },
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub system: SystemParams,
    /// Source of a tabulated `[profile]`, stored as an absolute path.
    pub profile_file: Option<PathBuf>,
    pub initial: InitialState,
    pub model: ModelConfig,
    pub evolution: EvolutionConfig,
    pub sweep: Option<SweepConfig>,
}

const CAVITY_KEYS: &[&str] = &[
    "omega_cav",
    "kappa_out",
    "mode_volume_re",
    "mode_volume_im",
    "epsilon",
    "sigma_ext",
    "g0",
];
const EMITTER_KEYS: &[&str] = &["omega_qe", "kappa_vib", "dipole", "x", "y"];
const PROFILE_KEYS: &[&str] = &["kind", "width", "file"];
const DRIVE_KEYS: &[&str] = &["omega_p", "alpha", "photon_number", "kappa_in"];
const INITIAL_KEYS: &[&str] = &["state", "amplitudes"];
const MODEL_KEYS: &[&str] = &["n_max", "sector_cap", "dephasing"];
const EVOLUTION_KEYS: &[&str] = &["t_max", "dt", "method", "rel_tol", "abs_tol", "record_stride"];
const SWEEP_KEYS: &[&str] = &[
    "kind",
    "axis1",
    "axis2",
    "observables",
    "photon_number",
    "placement",
    "axis",
    "cell_budget",
];

const BLOCKS: &[(&str, &[&str])] = &[
    ("cavity", CAVITY_KEYS),
    ("emitter", EMITTER_KEYS),
    ("profile", PROFILE_KEYS),
    ("drive", DRIVE_KEYS),
    ("initial", INITIAL_KEYS),
    ("model", MODEL_KEYS),
    ("evolution", EVOLUTION_KEYS),
    ("sweep", SWEEP_KEYS),
];

fn suggestion(word: &str, candidates: &[&str]) -> String {
    candidates
        .iter()
        .map(|c| (strsim::levenshtein(word, c), *c))
        .filter(|(d, c)| *d <= 3.max(c.len() / 3))
        .min()
        .map(|(_, c)| format!("; did you mean `{c}`?"))
        .unwrap_or_default()
}

#[derive(Debug)]
struct Entry {
    value: String,
    line: usize,
    /// Column of the value.
    value_column: usize,
}

#[derive(Debug)]
struct Block {
    name: String,
    line: usize,
    entries: HashMap<String, Entry>,
}

impl Block {
    fn header_err(&self, message: impl Into<String>) -> ConfigError {
        err_at(self.line, 1, format!("[{}]: {}", self.name, message.into()))
    }

    fn value_err(&self, key: &str, message: impl fmt::Display) -> ConfigError {
        match self.entries.get(key) {
            Some(e) => err_at(e.line, e.value_column, format!("{key}: {message}")),
            None => self.header_err(format!("{key}: {message}")),
        }
    }

    fn raw(&self, key: &str) -> Option<&str> {
        self.entries.get(key).map(|e| e.value.as_str())
    }

    fn f64_or(&self, key: &str, default: f64) -> Result<f64, ConfigError> {
        match self.raw(key) {
            None => Ok(default),
            Some(v) => parse_f64(v).ok_or_else(|| self.value_err(key, format!("`{v}` is not a number"))),
        }
    }

    fn opt_f64(&self, key: &str) -> Result<Option<f64>, ConfigError> {
        match self.raw(key) {
            None | Some("none") => Ok(None),
            Some(_) => self.f64_or(key, 0.0).map(Some),
        }
    }

    fn usize_or(&self, key: &str, default: usize) -> Result<usize, ConfigError> {
        match self.raw(key) {
            None => Ok(default),
            Some(v) => v
                .parse()
                .map_err(|_| self.value_err(key, format!("`{v}` is not a non-negative integer"))),
        }
    }

    fn require(&self, key: &str) -> Result<&str, ConfigError> {
        self.raw(key)
            .ok_or_else(|| self.header_err(format!("missing required key `{key}`")))
    }

    /// Checks `ok` and reports `reason` at the key's value otherwise.
    fn check(&self, key: &str, value: f64, ok: bool, reason: &str) -> Result<(), ConfigError> {
        if ok && !value.is_nan() {
            Ok(())
        } else {
            Err(self.value_err(key, format!("{value} {reason}")))
        }
    }
}

fn parse_f64(s: &str) -> Option<f64> {
    s.parse::<f64>().ok()
}

/// Splits the text into blocks, rejecting malformed lines and unknown or
/// duplicated names.
fn tokenize(text: &str) -> Result<Vec<Block>, ConfigError> {
    let mut blocks: Vec<Block> = Vec::new();
    for (n, raw) in text.lines().enumerate() {
        let line = n + 1;
        let content = raw.split('#').next().unwrap_or("");
        let trimmed = content.trim();
        if trimmed.is_empty() {
            continue;
        }
        let indent = content.len() - content.trim_start().len();
        if let Some(rest) = trimmed.strip_prefix('[') {
            let name = rest
                .strip_suffix(']')
                .ok_or_else(|| err_at(line, indent + 1, "unterminated block header"))?
                .trim();
            let names: Vec<&str> = BLOCKS.iter().map(|b| b.0).collect();
            if !names.contains(&name) {
                return Err(err_at(
                    line,
                    indent + 2,
                    format!("unknown block [{name}]{}", suggestion(name, &names)),
                ));
            }
            if name != "emitter" {
                if let Some(prev) = blocks.iter().find(|b| b.name == name) {
                    return Err(err_at(
                        line,
                        indent + 1,
                        format!("block [{name}] repeated (first at line {})", prev.line),
                    ));
                }
            }
            blocks.push(Block {
                name: name.to_string(),
                line,
                entries: HashMap::new(),
            });
            continue;
        }
        let Some(eq) = content.find('=') else {
            return Err(err_at(line, indent + 1, "expected `key = value` or a [block] header"));
        };
        let key = content[..eq].trim();
        let value = content[eq + 1..].trim();
        let after_eq = &content[eq + 1..];
        let value_column = eq + 2 + (after_eq.len() - after_eq.trim_start().len());
        let Some(block) = blocks.last_mut() else {
            return Err(err_at(line, indent + 1, format!("key `{key}` appears before any [block]")));
        };
        let allowed = BLOCKS.iter().find(|b| b.0 == block.name).map(|b| b.1).unwrap_or(&[]);
        if !allowed.contains(&key) {
            return Err(err_at(
                line,
                indent + 1,
                format!("unknown key `{key}` in [{}]{}", block.name, suggestion(key, allowed)),
            ));
        }
        if value.is_empty() {
            return Err(err_at(line, value_column, format!("empty value for `{key}`")));
        }
        if let Some(prev) = block.entries.get(key) {
            return Err(err_at(
                line,
                indent + 1,
                format!("key `{key}` repeated in [{}] (first at line {})", block.name, prev.line),
            ));
        }
        block.entries.insert(
            key.to_string(),
            Entry {
                value: value.to_string(),
                line,
                value_column,
            },
        );
    }
    Ok(blocks)
}

fn parse_cavity(b: &Block) -> Result<NanocavityParams, ConfigError> {
    let d = NanocavityParams::default();
    let cav = NanocavityParams {
        omega_cav: b.f64_or("omega_cav", d.omega_cav)?,
        kappa_out: b.f64_or("kappa_out", d.kappa_out)?,
        mode_volume_re: b.f64_or("mode_volume_re", d.mode_volume_re)?,
        mode_volume_im: b.f64_or("mode_volume_im", d.mode_volume_im)?,
        epsilon: b.f64_or("epsilon", d.epsilon)?,
        sigma_ext_classical: b.f64_or("sigma_ext", d.sigma_ext_classical)?,
        g0_override: b.opt_f64("g0")?,
    };
    b.check("omega_cav", cav.omega_cav, cav.omega_cav.is_finite(), "must be finite")?;
    b.check("kappa_out", cav.kappa_out, cav.kappa_out > 0.0 && cav.kappa_out.is_finite(), "must be > 0")?;
    b.check("mode_volume_re", cav.mode_volume_re, cav.mode_volume_re > 0.0 && cav.mode_volume_re.is_finite(), "must be > 0")?;
    b.check("mode_volume_im", cav.mode_volume_im, cav.mode_volume_im.is_finite(), "must be finite")?;
    b.check("epsilon", cav.epsilon, cav.epsilon >= 1.0 && cav.epsilon.is_finite(), "must be >= 1")?;
    b.check(
        "sigma_ext",
        cav.sigma_ext_classical,
        cav.sigma_ext_classical > 0.0 && cav.sigma_ext_classical.is_finite(),
        "must be > 0",
    )?;
    if let Some(g0) = cav.g0_override {
        b.check("g0", g0, g0 >= 0.0 && g0.is_finite(), "must be >= 0")?;
    }
    Ok(cav)
}

fn parse_emitter(b: &Block, omega_default: f64) -> Result<EmitterSpec, ConfigError> {
    let d = EmitterSpec::default();
    let em = EmitterSpec {
        omega_qe: b.f64_or("omega_qe", omega_default)?,
        kappa_vib: b.f64_or("kappa_vib", d.kappa_vib)?,
        dipole: b.f64_or("dipole", d.dipole)?,
        position: (b.f64_or("x", 0.0)?, b.f64_or("y", 0.0)?),
    };
    b.check("omega_qe", em.omega_qe, em.omega_qe.is_finite(), "must be finite")?;
    b.check("kappa_vib", em.kappa_vib, em.kappa_vib >= 0.0 && em.kappa_vib.is_finite(), "must be >= 0")?;
    b.check("dipole", em.dipole, em.dipole > 0.0 && em.dipole.is_finite(), "must be > 0")?;
    b.check("x", em.position.0, em.position.0.is_finite(), "must be finite")?;
    b.check("y", em.position.1, em.position.1.is_finite(), "must be finite")?;
    Ok(em)
}

fn parse_profile(
    b: Option<&Block>,
    cav: &NanocavityParams,
    base_dir: &Path,
) -> Result<(ModeProfile, Option<PathBuf>), ConfigError> {
    let Some(b) = b else {
        return Ok((default_profile(cav), None));
    };
    match b.raw("kind").unwrap_or("gaussian") {
        "gaussian" => {
            if b.raw("file").is_some() {
                return Err(b.value_err("file", "only valid with kind = table"));
            }
            let width = match b.raw("width") {
                None => match default_profile(cav) {
                    ModeProfile::Gaussian { width } => width,
                    ModeProfile::Tabulated { .. } => unreachable!("default profile is Gaussian"),
                },
                Some(_) => b.f64_or("width", 0.0)?,
            };
            b.check("width", width, width > 0.0 && width.is_finite(), "must be > 0")?;
            Ok((ModeProfile::Gaussian { width }, None))
        }
        "table" => {
            if b.raw("width").is_some() {
                return Err(b.value_err("width", "only valid with kind = gaussian"));
            }
            let file = b.require("file")?;
            let path = base_dir.join(file);
            let path = path.canonicalize().map_err(|e| b.value_err("file", format!("{}: {e}", path.display())))?;
            let profile = ModeProfile::load(&path).map_err(|e| b.value_err("file", e))?;
            Ok((profile, Some(path)))
        }
        other => Err(b.value_err(
            "kind",
            format!("unknown profile kind `{other}`{}", suggestion(other, &["gaussian", "table"])),
        )),
    }
}

fn parse_drive(b: &Block, cav: &NanocavityParams) -> Result<DriveSpec, ConfigError> {
    let mut drive = DriveSpec {
        omega_p: b.f64_or("omega_p", cav.omega_cav)?,
        alpha: 0.0,
        kappa_in: b.f64_or("kappa_in", in_coupling(cav))?,
    };
    b.check("omega_p", drive.omega_p, drive.omega_p.is_finite(), "must be finite")?;
    b.check("kappa_in", drive.kappa_in, drive.kappa_in >= 0.0 && drive.kappa_in.is_finite(), "must be >= 0")?;
    drive.alpha = match (b.raw("alpha"), b.raw("photon_number")) {
        (Some(_), Some(_)) => return Err(b.value_err("photon_number", "give either alpha or photon_number, not both")),
        (None, None) => return Err(b.header_err("one of `alpha` or `photon_number` is required")),
        (Some(_), None) => {
            let a = b.f64_or("alpha", 0.0)?;
            b.check("alpha", a, a >= 0.0 && a.is_finite(), "must be >= 0")?;
            a
        }
        (None, Some(_)) => {
            let n = b.f64_or("photon_number", 0.0)?;
            b.check("photon_number", n, n >= 0.0 && n.is_finite(), "must be >= 0")?;
            drive_for_photon_number(cav, &drive, n).map_err(|e| b.value_err("photon_number", e))?
        }
    };
    Ok(drive)
}

fn parse_basis_label(label: &str, n_emitters: usize) -> Option<BasisState> {
    match label {
        "g" => Some(BasisState::new(0, &[])),
        "p" => Some(BasisState::new(1, &[])),
        _ => {
            let j: usize = label.strip_prefix('e')?.parse().ok()?;
            (1..=n_emitters).contains(&j).then(|| BasisState::new(0, &[j]))
        }
    }
}

fn basis_label(s: &BasisState) -> String {
    if s.photons == 1 {
        "p".into()
    } else if s.excited_mask == 0 {
        "g".into()
    } else {
        format!("e{}", s.excited_mask.trailing_zeros() + 1)
    }
}

fn parse_initial(b: Option<&Block>, n_emitters: usize) -> Result<InitialState, ConfigError> {
    let Some(b) = b else {
        return Ok(InitialState::Ground);
    };
    let state = b.require("state")?;
    if state != "custom" && b.raw("amplitudes").is_some() {
        return Err(b.value_err("amplitudes", "only valid with state = custom"));
    }
    let parsed = match state {
        "ground" => InitialState::Ground,
        "photon" => InitialState::Photon,
        "custom" => {
            let text = b.require("amplitudes")?;
            let mut amps = Vec::new();
            for item in text.split(';').map(str::trim).filter(|s| !s.is_empty()) {
                let bad = || {
                    b.value_err(
                        "amplitudes",
                        format!("`{item}`: expected `<g|p|eJ>: re[, im]` with J in 1..={n_emitters}"),
                    )
                };
                let (label, value) = item.split_once(':').ok_or_else(bad)?;
                let basis = parse_basis_label(label.trim(), n_emitters).ok_or_else(bad)?;
                let parts: Vec<&str> = value.split(',').map(str::trim).collect();
                let (re, im) = match parts.as_slice() {
                    [re] => (parse_f64(re), Some(0.0)),
                    [re, im] => (parse_f64(re), parse_f64(im)),
                    _ => (None, None),
                };
                let (Some(re), Some(im)) = (re, im) else {
                    return Err(bad());
                };
                if amps.iter().any(|(s, _)| *s == basis) {
                    return Err(b.value_err("amplitudes", format!("basis state `{}` listed twice", label.trim())));
                }
                amps.push((basis, C64::new(re, im)));
            }
            let norm: f64 = amps.iter().map(|(_, c)| c.norm_sqr()).sum();
            if !(norm > 0.0) || !norm.is_finite() {
                return Err(b.value_err("amplitudes", "amplitudes must have a finite, non-zero norm"));
            }
            InitialState::Custom(amps)
        }
        s => match s.strip_prefix("emitter:").and_then(|j| j.trim().parse::<usize>().ok()) {
            Some(j) if (1..=n_emitters).contains(&j) => InitialState::Emitter(j),
            Some(j) => return Err(b.value_err("state", format!("emitter {j} out of range 1..={n_emitters}"))),
            None => {
                return Err(b.value_err(
                    "state",
                    format!(
                        "unknown initial state `{s}`; expected ground, photon, emitter:J or custom{}",
                        suggestion(s, &["ground", "photon", "custom"])
                    ),
                ))
            }
        },
    };
    Ok(parsed)
}

fn convention_name(c: DephasingConvention) -> &'static str {
    match c {
        DephasingConvention::Literal => "literal",
        DephasingConvention::HalfRate => "half_rate",
    }
}

fn method_name(m: IntegrationMethod) -> &'static str {
    match m {
        IntegrationMethod::Rk4Fixed => "rk4",
        IntegrationMethod::Rk45Adaptive => "rk45",
        IntegrationMethod::ExpmPropagator => "expm",
    }
}

fn parse_model(b: Option<&Block>) -> Result<ModelConfig, ConfigError> {
    let d = ModelConfig::default();
    let Some(b) = b else {
        return Ok(d);
    };
    let n_max = b.usize_or("n_max", d.n_max)?;
    if n_max == 0 {
        return Err(b.value_err("n_max", "must be >= 1"));
    }
    let sector_cap = match b.raw("sector_cap") {
        None | Some("none") => None,
        Some(_) => Some(b.usize_or("sector_cap", 0)?),
    };
    let convention = match b.raw("dephasing").unwrap_or("literal") {
        "literal" => DephasingConvention::Literal,
        "half_rate" => DephasingConvention::HalfRate,
        other => {
            return Err(b.value_err(
                "dephasing",
                format!("unknown convention `{other}`{}", suggestion(other, &["literal", "half_rate"])),
            ))
        }
    };
    Ok(ModelConfig {
        n_max,
        sector_cap,
        convention,
    })
}

fn parse_evolution(b: Option<&Block>) -> Result<EvolutionConfig, ConfigError> {
    let d = EvolutionConfig::default();
    let Some(b) = b else {
        return Ok(d);
    };
    let method = match b.raw("method").unwrap_or(method_name(d.method)) {
        "rk4" => IntegrationMethod::Rk4Fixed,
        "rk45" => IntegrationMethod::Rk45Adaptive,
        "expm" => IntegrationMethod::ExpmPropagator,
        other => {
            return Err(b.value_err(
                "method",
                format!("unknown method `{other}`{}", suggestion(other, &["rk4", "rk45", "expm"])),
            ))
        }
    };
    let cfg = EvolutionConfig {
        t_max: b.f64_or("t_max", d.t_max)?,
        dt_initial: b.f64_or("dt", d.dt_initial)?,
        method,
        rel_tol: b.f64_or("rel_tol", d.rel_tol)?,
        abs_tol: b.f64_or("abs_tol", d.abs_tol)?,
        record_stride: b.usize_or("record_stride", d.record_stride)?,
    };
    b.check("t_max", cfg.t_max, cfg.t_max > 0.0 && cfg.t_max.is_finite(), "must be > 0")?;
    b.check("dt", cfg.dt_initial, cfg.dt_initial > 0.0 && cfg.dt_initial <= cfg.t_max, "must be in (0, t_max]")?;
    b.check("rel_tol", cfg.rel_tol, cfg.rel_tol > 0.0 && cfg.rel_tol < 1.0, "must be in (0, 1)")?;
    b.check("abs_tol", cfg.abs_tol, cfg.abs_tol > 0.0 && cfg.abs_tol < 1.0, "must be in (0, 1)")?;
    if cfg.record_stride == 0 {
        return Err(b.value_err("record_stride", "must be >= 1"));
    }
    Ok(cfg)
}

fn parse_axis(b: &Block, key: &str) -> Result<SweepAxis, ConfigError> {
    let text = b.require(key)?;
    let parts: Vec<&str> = text.split(',').map(str::trim).collect();
    let [kind, start, stop, count] = parts.as_slice() else {
        return Err(b.value_err(key, format!("`{text}`: expected `<axis>, <start>, <stop>, <count>`")));
    };
    let names: Vec<&str> = AxisKind::ALL.iter().map(|k| k.name()).collect();
    let kind: AxisKind = kind
        .parse()
        .map_err(|_| b.value_err(key, format!("unknown axis `{kind}`{}", suggestion(kind, &names))))?;
    let (Some(start), Some(stop), Ok(count)) = (parse_f64(start), parse_f64(stop), count.parse::<usize>()) else {
        return Err(b.value_err(key, format!("`{text}`: start and stop must be numbers, count an integer")));
    };
    SweepAxis::new(kind, start, stop, count).map_err(|e| b.value_err(key, e))
}

fn parse_sweep(b: Option<&Block>, n_emitters: usize) -> Result<Option<SweepConfig>, ConfigError> {
    let Some(b) = b else {
        return Ok(None);
    };
    let cell_budget = b.usize_or("cell_budget", DEFAULT_CELL_BUDGET)?;
    let only = |keys: &[&str]| -> Result<(), ConfigError> {
        for k in b.entries.keys() {
            if !keys.contains(&k.as_str()) {
                return Err(b.value_err(k, format!("not valid for sweep kind `{}`", b.raw("kind").unwrap_or(""))));
            }
        }
        Ok(())
    };
    match b.require("kind")? {
        "map" => {
            only(&["kind", "axis1", "axis2", "observables", "photon_number", "cell_budget"])?;
            let axis1 = parse_axis(b, "axis1")?;
            let axis2 = parse_axis(b, "axis2")?;
            if axis1.kind == axis2.kind {
                return Err(b.value_err("axis2", "must differ from axis1"));
            }
            let mut observables = Vec::new();
            for o in b.raw("observables").unwrap_or("re_a").split(',').map(str::trim) {
                let obs: MapObservable = o
                    .parse()
                    .map_err(|_| b.value_err("observables", format!("unknown observable `{o}`")))?;
                if let MapObservable::Population(j) = obs {
                    if j > n_emitters {
                        return Err(b.value_err("observables", format!("`{o}`: only {n_emitters} emitter(s)")));
                    }
                }
                observables.push(obs);
            }
            let photon_number = b.f64_or("photon_number", 1e-6)?;
            b.check("photon_number", photon_number, photon_number >= 0.0 && photon_number.is_finite(), "must be >= 0")?;
            Ok(Some(SweepConfig::Map {
                axis1,
                axis2,
                observables,
                photon_number,
                cell_budget,
            }))
        }
        "position" => {
            only(&["kind", "placement", "axis", "cell_budget"])?;
            let p = b.require("placement")?;
            let names = ["symmetric_pair", "asymmetric_pair", "ring", "encircled"];
            let placement: Placement = p
                .parse()
                .map_err(|_| b.value_err("placement", format!("unknown placement `{p}`{}", suggestion(p, &names))))?;
            Ok(Some(SweepConfig::Position {
                placement,
                axis: parse_axis(b, "axis")?,
                cell_budget,
            }))
        }
        other => Err(b.value_err(
            "kind",
            format!("unknown sweep kind `{other}`{}", suggestion(other, &["map", "position"])),
        )),
    }
}

impl RunConfig {
    /// Parses configuration text. Relative file references resolve against `base_dir`.
    pub fn parse(text: &str, base_dir: &Path) -> Result<Self, ConfigError> {
        let blocks = tokenize(text)?;
        let find = |name: &str| blocks.iter().find(|b| b.name == name);
        let cavity_block = find("cavity").ok_or_else(|| err_at(0, 0, "missing required block [cavity]"))?;
        let cavity = parse_cavity(cavity_block)?;
        let emitter_blocks: Vec<&Block> = blocks.iter().filter(|b| b.name == "emitter").collect();
        if emitter_blocks.is_empty() {
            return Err(err_at(0, 0, "missing required block [emitter]"));
        }
        let emitters = emitter_blocks
            .iter()
            .map(|b| parse_emitter(b, cavity.omega_cav))
            .collect::<Result<Vec<_>, _>>()?;
        let n_em = emitters.len();
        let (profile, profile_file) = parse_profile(find("profile"), &cavity, base_dir)?;
        let drive = find("drive").map(|b| parse_drive(b, &cavity)).transpose()?;
        let initial = parse_initial(find("initial"), n_em)?;
        let model = parse_model(find("model"))?;
        if let (Some(cap), Some(b)) = (model.sector_cap, find("model")) {
            if cap < initial.max_excitations() {
                return Err(b.value_err("sector_cap", "is below the excitation number of the initial state"));
            }
            if drive.is_some() {
                return Err(b.value_err("sector_cap", "a driven system does not conserve excitations"));
            }
        }
        let evolution = parse_evolution(find("evolution"))?;
        let sweep = parse_sweep(find("sweep"), n_em)?;

        if drive.is_none() && initial == InitialState::Ground {
            return Err(err_at(
                0,
                0,
                "nothing to simulate: add a [drive] block or an [initial] state other than ground",
            ));
        }
        let mut system = SystemParams::new(emitters);
        system.cavity = cavity;
        system.profile = profile;
        system.drive = drive;
        if let Err(e) = system.couplings() {
            return Err(err_at(0, 0, format!("invalid emitter placement: {e}")));
        }
        Ok(Self {
            system,
            profile_file,
            initial,
            model,
            evolution,
            sweep,
        })
    }

    /// Reads and parses a file; diagnostics carry the file name.
    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let name = path.display().to_string();
        let text = std::fs::read_to_string(path).map_err(|e| ConfigError {
            source: Some(name.clone()),
            line: 0,
            column: 0,
            message: format!("cannot read: {e}"),
        })?;
        let base = path.parent().unwrap_or(Path::new("."));
        Self::parse(&text, base).map_err(|e| ConfigError {
            source: Some(name),
            ..e
        })
    }

    /// Full configuration, defaults included, in the input format.
    pub fn to_ini(&self) -> String {
        let mut s = String::new();
        let c = &self.system.cavity;
        let _ = writeln!(s, "[cavity]");
        let _ = writeln!(s, "omega_cav = {:?}", c.omega_cav);
        let _ = writeln!(s, "kappa_out = {:?}", c.kappa_out);
        let _ = writeln!(s, "mode_volume_re = {:?}", c.mode_volume_re);
        let _ = writeln!(s, "mode_volume_im = {:?}", c.mode_volume_im);
        let _ = writeln!(s, "epsilon = {:?}", c.epsilon);
        let _ = writeln!(s, "sigma_ext = {:?}", c.sigma_ext_classical);
        match c.g0_override {
            Some(g0) => writeln!(s, "g0 = {g0:?}"),
            None => writeln!(s, "g0 = none"),
        }
        .ok();
        for em in &self.system.emitters {
            let _ = writeln!(s, "\n[emitter]");
            let _ = writeln!(s, "omega_qe = {:?}", em.omega_qe);
            let _ = writeln!(s, "kappa_vib = {:?}", em.kappa_vib);
            let _ = writeln!(s, "dipole = {:?}", em.dipole);
            let _ = writeln!(s, "x = {:?}", em.position.0);
            let _ = writeln!(s, "y = {:?}", em.position.1);
        }
        let _ = writeln!(s, "\n[profile]");
        match (&self.system.profile, &self.profile_file) {
            (_, Some(path)) => {
                let _ = writeln!(s, "kind = table\nfile = {}", path.display());
            }
            (ModeProfile::Gaussian { width }, None) => {
                let _ = writeln!(s, "kind = gaussian\nwidth = {width:?}");
            }
            (ModeProfile::Tabulated { .. }, None) => {
                let _ = writeln!(s, "kind = table\nfile = none");
            }
        }
        if let Some(d) = &self.system.drive {
            let _ = writeln!(s, "\n[drive]");
            let _ = writeln!(s, "omega_p = {:?}", d.omega_p);
            let _ = writeln!(s, "alpha = {:?}", d.alpha);
            let _ = writeln!(s, "kappa_in = {:?}", d.kappa_in);
        }
        let _ = writeln!(s, "\n[initial]");
        match &self.initial {
            InitialState::Ground => writeln!(s, "state = ground"),
            InitialState::Photon => writeln!(s, "state = photon"),
            InitialState::Emitter(j) => writeln!(s, "state = emitter:{j}"),
            InitialState::Custom(amps) => {
                let list: Vec<String> = amps
                    .iter()
                    .map(|(b, c)| format!("{}: {:?}, {:?}", basis_label(b), c.re, c.im))
                    .collect();
                writeln!(s, "state = custom\namplitudes = {}", list.join("; "))
            }
        }
        .ok();
        let m = &self.model;
        let _ = writeln!(s, "\n[model]");
        let _ = writeln!(s, "n_max = {}", m.n_max);
        match m.sector_cap {
            Some(c) => writeln!(s, "sector_cap = {c}"),
            None => writeln!(s, "sector_cap = none"),
        }
        .ok();
        let _ = writeln!(s, "dephasing = {}", convention_name(m.convention));
        let e = &self.evolution;
        let _ = writeln!(s, "\n[evolution]");
        let _ = writeln!(s, "t_max = {:?}", e.t_max);
        let _ = writeln!(s, "dt = {:?}", e.dt_initial);
        let _ = writeln!(s, "method = {}", method_name(e.method));
        let _ = writeln!(s, "rel_tol = {:?}", e.rel_tol);
        let _ = writeln!(s, "abs_tol = {:?}", e.abs_tol);
        let _ = writeln!(s, "record_stride = {}", e.record_stride);
        let axis = |a: &SweepAxis| format!("{}, {:?}, {:?}, {}", a.kind, a.start, a.stop, a.count);
        match &self.sweep {
            None => {}
            Some(SweepConfig::Map {
                axis1,
                axis2,
                observables,
                photon_number,
                cell_budget,
            }) => {
                let obs: Vec<String> = observables.iter().map(|o| o.to_string()).collect();
                let _ = writeln!(s, "\n[sweep]\nkind = map");
                let _ = writeln!(s, "axis1 = {}\naxis2 = {}", axis(axis1), axis(axis2));
                let _ = writeln!(s, "observables = {}", obs.join(", "));
                let _ = writeln!(s, "photon_number = {photon_number:?}\ncell_budget = {cell_budget}");
            }
            Some(SweepConfig::Position {
                placement,
                axis: a,
                cell_budget,
            }) => {
                let _ = writeln!(s, "\n[sweep]\nkind = position\nplacement = {placement}");
                let _ = writeln!(s, "axis = {}\ncell_budget = {cell_budget}", axis(a));
            }
        }
        s
    }
}
