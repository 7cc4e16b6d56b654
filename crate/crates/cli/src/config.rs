//! Argument and config-file parsing.
//!
//! Grammar:
//!
//! ```text
//! optbench <synthetic|train|regret|compare>
//!          [--config PATH] [--function f1|f2|f3] [--optimizer NAME|all]
//!          [--variant dfc0..dfc5|unit] [--lr R] [--beta1 R] [--beta2 R]
//!          [--eps R] [--eps-placement inside|outside] [--iters N]
//!          [--theta0 R] [--epochs N] [--batch N] [--seed N]
//!          [--out PATH] [--svg PATH] [--summary PATH]
//! ```
//!
//! A config file holds `key = value` lines (keys are the flag names without
//! the dashes) and `#` comments; flags override file values. Parsing is
//! all-or-nothing: it yields either a fully defaulted [`RunConfig`] or a
//! usage error naming the offending token. `OPTBENCH_SEED` supplies the seed
//! when `--seed` is absent.

use std::collections::HashMap;
use std::fmt;

use optbench_core::objective::SyntheticFunction;
use optbench_core::optim::{Algorithm, DfcVariant, EpsPlacement};

#[derive(Debug, Clone, PartialEq)]
pub struct UsageError(pub String);

impl fmt::Display for UsageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl std::error::Error for UsageError {}

fn usage<T>(message: String) -> Result<T, UsageError> {
    Err(UsageError(message))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Subcommand {
    Synthetic,
    Train,
    Regret,
    Compare,
}

impl Subcommand {
    pub fn name(self) -> &'static str {
        match self {
            Subcommand::Synthetic => "synthetic",
            Subcommand::Train => "train",
            Subcommand::Regret => "regret",
            Subcommand::Compare => "compare",
        }
    }

    fn from_name(name: &str) -> Option<Subcommand> {
        match name {
            "synthetic" => Some(Subcommand::Synthetic),
            "train" => Some(Subcommand::Train),
            "regret" => Some(Subcommand::Regret),
            "compare" => Some(Subcommand::Compare),
            _ => None,
        }
    }

    /// Option keys this subcommand accepts (sans `config`, which is always
    /// accepted on the command line but never inside a file).
    fn allowed_keys(self) -> &'static [&'static str] {
        match self {
            Subcommand::Synthetic => &[
                "function", "optimizer", "variant", "lr", "beta1", "beta2", "eps",
                "eps-placement", "iters", "theta0", "seed", "out", "svg",
            ],
            Subcommand::Compare => &[
                "function", "optimizer", "variant", "lr", "beta1", "beta2", "eps",
                "eps-placement", "iters", "theta0", "seed", "out", "svg", "summary",
            ],
            Subcommand::Train => &[
                "optimizer", "variant", "lr", "beta1", "beta2", "eps", "eps-placement",
                "epochs", "batch", "seed", "out", "svg",
            ],
            Subcommand::Regret => &[
                "optimizer", "variant", "lr", "beta1", "beta2", "eps", "eps-placement",
                "iters", "theta0", "seed", "out", "svg",
            ],
        }
    }
}

/// A fully resolved run: every field is concrete or deliberately optional.
///
/// `lr`, `beta1`, `beta2`, `eps` and `eps_placement` stay `None` when the
/// per-algorithm defaults of the subcommand's protocol should apply (the
/// train subcommand relies on this so each optimizer gets its calibrated
/// rate).
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub subcommand: Subcommand,
    pub function: SyntheticFunction,
    pub optimizers: Vec<Algorithm>,
    pub variant: DfcVariant,
    pub lr: Option<f64>,
    pub beta1: Option<f64>,
    pub beta2: Option<f64>,
    pub eps: Option<f64>,
    pub eps_placement: Option<EpsPlacement>,
    pub iters: usize,
    pub theta0: f64,
    pub epochs: usize,
    pub batch: usize,
    pub seed: u64,
    pub out: Option<String>,
    pub svg: Option<String>,
    pub summary: Option<String>,
}

const ALL_KEYS: [&str; 17] = [
    "config", "function", "optimizer", "variant", "lr", "beta1", "beta2", "eps",
    "eps-placement", "iters", "theta0", "epochs", "batch", "seed", "out", "svg", "summary",
];

fn parse_optimizer_list(value: &str, subcommand: Subcommand) -> Result<Vec<Algorithm>, UsageError> {
    if value == "all" {
        if subcommand != Subcommand::Compare {
            return usage(format!(
                "--optimizer all is only valid with compare, not {}",
                subcommand.name()
            ));
        }
        return Ok(Algorithm::ALL.to_vec());
    }
    let mut optimizers = Vec::new();
    for name in value.split(',') {
        let algorithm = Algorithm::from_name(name)
            .ok_or_else(|| UsageError(format!("unknown optimizer '{name}'")))?;
        if optimizers.contains(&algorithm) {
            return usage(format!("optimizer '{name}' listed twice"));
        }
        optimizers.push(algorithm);
    }
    if optimizers.len() > 1 && subcommand != Subcommand::Compare {
        return usage(format!(
            "{} takes a single optimizer, got '{value}'",
            subcommand.name()
        ));
    }
    Ok(optimizers)
}

fn parse_f64(key: &str, value: &str) -> Result<f64, UsageError> {
    match value.parse::<f64>() {
        Ok(x) if x.is_finite() => Ok(x),
        _ => usage(format!("cannot parse number '{value}' for --{key}")),
    }
}

fn parse_usize(key: &str, value: &str) -> Result<usize, UsageError> {
    value
        .parse::<usize>()
        .map_err(|_| UsageError(format!("cannot parse count '{value}' for --{key}")))
}

fn parse_config_file(path: &str, subcommand: Subcommand) -> Result<Vec<(String, String)>, UsageError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| UsageError(format!("cannot read config file '{path}': {e}")))?;
    let mut pairs = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return usage(format!(
                "config file '{path}' line {}: expected 'key = value', got '{raw}'",
                idx + 1
            ));
        };
        let key = key.trim().to_string();
        let value = value.trim().to_string();
        if key == "config" {
            return usage(format!("config file '{path}' cannot nest a config key"));
        }
        if !ALL_KEYS.contains(&key.as_str()) {
            return usage(format!("config file '{path}': unknown key '{key}'"));
        }
        if !subcommand.allowed_keys().contains(&key.as_str()) {
            return usage(format!(
                "config file '{path}': key '{key}' is not valid for {}",
                subcommand.name()
            ));
        }
        if pairs.iter().any(|(k, _)| *k == key) {
            return usage(format!("config file '{path}': duplicate key '{key}'"));
        }
        pairs.push((key, value));
    }
    Ok(pairs)
}

/// Parses `argv` (without the program name) plus the optional
/// `OPTBENCH_SEED` value into a complete [`RunConfig`].
pub fn parse_args(args: &[String], env_seed: Option<&str>) -> Result<RunConfig, UsageError> {
    let Some(first) = args.first() else {
        return usage("missing subcommand (synthetic|train|regret|compare)".to_string());
    };
    let Some(subcommand) = Subcommand::from_name(first) else {
        return usage(format!("unknown subcommand '{first}'"));
    };

    // Flags, each taking exactly one value; duplicates rejected.
    let mut flags: Vec<(String, String)> = Vec::new();
    let mut i = 1;
    while i < args.len() {
        let token = &args[i];
        let Some(key) = token.strip_prefix("--") else {
            return usage(format!("expected a flag, got '{token}'"));
        };
        if !ALL_KEYS.contains(&key) {
            return usage(format!("unknown flag '--{key}'"));
        }
        if key != "config" && !subcommand.allowed_keys().contains(&key) {
            return usage(format!("flag '--{key}' is not valid for {}", subcommand.name()));
        }
        let Some(value) = args.get(i + 1) else {
            return usage(format!("flag '--{key}' is missing its value"));
        };
        if flags.iter().any(|(k, _)| k == key) {
            return usage(format!("duplicate flag '--{key}'"));
        }
        flags.push((key.to_string(), value.clone()));
        i += 2;
    }

    // Merge: config file first, flags override.
    let mut merged: HashMap<String, String> = HashMap::new();
    if let Some((_, path)) = flags.iter().find(|(k, _)| k == "config") {
        for (key, value) in parse_config_file(path, subcommand)? {
            merged.insert(key, value);
        }
    }
    for (key, value) in &flags {
        if key != "config" {
            merged.insert(key.clone(), value.clone());
        }
    }

    let take = |key: &str| merged.get(key).cloned();

    let function = match take("function") {
        None => SyntheticFunction::F1,
        Some(v) => SyntheticFunction::from_name(&v)
            .ok_or_else(|| UsageError(format!("unknown function '{v}'")))?,
    };
    let optimizers = match take("optimizer") {
        None => match subcommand {
            Subcommand::Compare => Algorithm::ALL.to_vec(),
            _ => vec![Algorithm::Diffgrad],
        },
        Some(v) => parse_optimizer_list(&v, subcommand)?,
    };
    let variant = match take("variant") {
        None => DfcVariant::Dfc0,
        Some(v) => DfcVariant::from_name(&v)
            .ok_or_else(|| UsageError(format!("unknown variant '{v}'")))?,
    };
    let eps_placement = match take("eps-placement") {
        None => None,
        Some(v) => Some(
            EpsPlacement::from_name(&v)
                .ok_or_else(|| UsageError(format!("unknown eps placement '{v}'")))?,
        ),
    };

    // Benchmark-protocol defaults for the 1-D subcommands; train leaves the
    // rates to each optimizer's calibrated defaults.
    let one_dim = matches!(
        subcommand,
        Subcommand::Synthetic | Subcommand::Compare | Subcommand::Regret
    );
    let lr = match take("lr") {
        Some(v) => Some(parse_f64("lr", &v)?),
        None if one_dim => Some(0.1),
        None => None,
    };
    let beta1 = match take("beta1") {
        Some(v) => Some(parse_f64("beta1", &v)?),
        None if one_dim => Some(0.95),
        None => None,
    };
    let beta2 = match take("beta2") {
        Some(v) => Some(parse_f64("beta2", &v)?),
        None if one_dim => Some(0.999),
        None => None,
    };
    let eps = match take("eps") {
        Some(v) => Some(parse_f64("eps", &v)?),
        None => None,
    };

    let iters = match take("iters") {
        Some(v) => parse_usize("iters", &v)?,
        None if subcommand == Subcommand::Regret => 2000,
        None => 300,
    };
    let theta0 = match take("theta0") {
        Some(v) => parse_f64("theta0", &v)?,
        None => -1.0,
    };
    let epochs = match take("epochs") {
        Some(v) => parse_usize("epochs", &v)?,
        None => 500,
    };
    let batch = match take("batch") {
        Some(v) => parse_usize("batch", &v)?,
        None => 32,
    };
    let seed = match take("seed") {
        Some(v) => v
            .parse::<u64>()
            .map_err(|_| UsageError(format!("cannot parse seed '{v}'")))?,
        None => match env_seed {
            Some(v) => v
                .parse::<u64>()
                .map_err(|_| UsageError(format!("cannot parse OPTBENCH_SEED '{v}'")))?,
            None => 42,
        },
    };

    Ok(RunConfig {
        subcommand,
        function,
        optimizers,
        variant,
        lr,
        beta1,
        beta2,
        eps,
        eps_placement,
        iters,
        theta0,
        epochs,
        batch,
        seed,
        out: take("out"),
        svg: take("svg"),
        summary: take("summary"),
    })
}

#[cfg_attr(not(test), allow(dead_code))]
impl RunConfig {
    fn optimizer_value(&self) -> String {
        self.optimizers
            .iter()
            .map(|a| a.name())
            .collect::<Vec<_>>()
            .join(",")
    }

    /// Config-file form of this run; reparsing it under the same subcommand
    /// reproduces the config exactly.
    pub fn to_config_string(&self) -> String {
        let allowed = self.subcommand.allowed_keys();
        let mut out = String::new();
        let mut push = |key: &str, value: String| {
            if allowed.contains(&key) {
                out.push_str(key);
                out.push_str(" = ");
                out.push_str(&value);
                out.push('\n');
            }
        };
        push("function", self.function.name().to_string());
        push("optimizer", self.optimizer_value());
        push("variant", self.variant.name().to_string());
        if let Some(lr) = self.lr {
            push("lr", format!("{lr}"));
        }
        if let Some(beta1) = self.beta1 {
            push("beta1", format!("{beta1}"));
        }
        if let Some(beta2) = self.beta2 {
            push("beta2", format!("{beta2}"));
        }
        if let Some(eps) = self.eps {
            push("eps", format!("{eps}"));
        }
        if let Some(placement) = self.eps_placement {
            push("eps-placement", placement.name().to_string());
        }
        push("iters", format!("{}", self.iters));
        push("theta0", format!("{}", self.theta0));
        push("epochs", format!("{}", self.epochs));
        push("batch", format!("{}", self.batch));
        push("seed", format!("{}", self.seed));
        if let Some(path) = &self.out {
            push("out", path.clone());
        }
        if let Some(path) = &self.svg {
            push("svg", path.clone());
        }
        if let Some(path) = &self.summary {
            push("summary", path.clone());
        }
        out
    }
}

pub const USAGE: &str = "usage: optbench <synthetic|train|regret|compare> \
[--config PATH] [--function f1|f2|f3] [--optimizer NAME|all] \
[--variant dfc0|dfc1|dfc2|dfc3|dfc4|dfc5|unit] [--lr R] [--beta1 R] [--beta2 R] \
[--eps R] [--eps-placement inside|outside] [--iters N] [--theta0 R] \
[--epochs N] [--batch N] [--seed N] [--out PATH] [--svg PATH] [--summary PATH]";
