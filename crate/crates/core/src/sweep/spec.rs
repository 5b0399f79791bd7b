use std::collections::BTreeMap;
use std::fmt;

use serde_json::{Map, Value};

use crate::config::MarketConfig;
use crate::error::ConfigError;

/// Keys accepted at the top level of a config document.
pub const CONFIG_KEYS: [&str; 15] = [
    "n_agents",
    "ratio_ref",
    "memory",
    "n_strategies",
    "delta_t",
    "g_max",
    "alpha",
    "k_max",
    "k_min",
    "p0",
    "relax_steps",
    "measure_steps",
    "seed",
    "replications",
    "grid",
];

/// Parameters that may be swept. Declaration order is alphabetical and is the
/// canonical column and nesting order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum GridParam {
    GMax,
    Memory,
    RatioRef,
}

impl GridParam {
    pub const ALL: [GridParam; 3] = [GridParam::GMax, GridParam::Memory, GridParam::RatioRef];

    pub fn name(self) -> &'static str {
        match self {
            GridParam::GMax => "g_max",
            GridParam::Memory => "memory",
            GridParam::RatioRef => "ratio_ref",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|p| p.name() == name)
    }

    fn check(self, v: f64) -> Result<(), ConfigError> {
        let field = format!("grid.{}", self.name());
        match self {
            GridParam::GMax | GridParam::Memory => {
                if v.fract() != 0.0 || v < 0.0 || v > f64::from(u32::MAX) {
                    return Err(ConfigError::new(field, format!("{v} is not a non-negative integer")));
                }
            }
            GridParam::RatioRef => {
                if !(0.0..=1.0).contains(&v) {
                    return Err(ConfigError::new(field, format!("{v} is outside [0, 1]")));
                }
            }
        }
        Ok(())
    }

    fn apply(self, config: &mut MarketConfig, v: f64) {
        match self {
            GridParam::GMax => config.g_max = v as u32,
            GridParam::Memory => config.memory = v as u32,
            GridParam::RatioRef => config.ratio_ref = v,
        }
    }
}

impl fmt::Display for GridParam {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// One combination of swept values, in canonical parameter order.
#[derive(Debug, Clone, PartialEq)]
pub struct GridPoint(pub Vec<(GridParam, f64)>);

impl GridPoint {
    pub fn get(&self, p: GridParam) -> Option<f64> {
        self.0.iter().find(|(q, _)| *q == p).map(|(_, v)| *v)
    }

    pub fn apply(&self, base: &MarketConfig) -> MarketConfig {
        let mut c = base.clone();
        for &(p, v) in &self.0 {
            p.apply(&mut c, v);
        }
        c
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub base: MarketConfig,
    pub grid: BTreeMap<GridParam, Vec<f64>>,
    pub replications: usize,
    pub master_seed: u64,
}

impl SweepSpec {
    pub fn single(base: MarketConfig, replications: usize) -> Self {
        Self {
            master_seed: base.seed,
            base,
            grid: BTreeMap::new(),
            replications,
        }
    }

    pub fn with_grid(mut self, param: GridParam, values: Vec<f64>) -> Self {
        self.grid.insert(param, values);
        self
    }

    /// Parses a config document. `replications` defaults to 1, `grid` to
    /// empty; the remaining keys form the base [`MarketConfig`] and `seed`
    /// doubles as the master seed.
    pub fn from_json(value: Value) -> Result<Self, ConfigError> {
        let Value::Object(mut map) = value else {
            return Err(ConfigError::new("<root>", "config must be a JSON object"));
        };
        let replications = match map.remove("replications") {
            None => 1,
            Some(v) => v
                .as_u64()
                .filter(|&r| r >= 1)
                .ok_or_else(|| ConfigError::new("replications", format!("must be a positive integer, got {v}")))?
                as usize,
        };
        let grid = match map.remove("grid") {
            None | Some(Value::Null) => BTreeMap::new(),
            Some(Value::Object(g)) => parse_grid(g)?,
            Some(v) => return Err(ConfigError::new("grid", format!("must be an object, got {v}"))),
        };
        // Merge key by key into the defaults so a type error names its key.
        let mut merged = serde_json::to_value(MarketConfig::default()).expect("serializable");
        for (k, v) in map {
            if !CONFIG_KEYS.contains(&k.as_str()) {
                return Err(ConfigError::new(k, "unknown key"));
            }
            merged[k.as_str()] = v;
            serde_json::from_value::<MarketConfig>(merged.clone())
                .map_err(|e| ConfigError::new(k, e.to_string()))?;
        }
        let base: MarketConfig = serde_json::from_value(merged).expect("checked above");
        let spec = Self {
            master_seed: base.seed,
            base,
            grid,
            replications,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn from_json_str(text: &str) -> Result<Self, ConfigError> {
        let value: Value = serde_json::from_str(text)
            .map_err(|e| ConfigError::new("<config>", format!("not valid JSON: {e}")))?;
        Self::from_json(value)
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.replications == 0 {
            return Err(ConfigError::new("replications", "must be at least 1"));
        }
        for (&p, values) in &self.grid {
            if values.is_empty() {
                return Err(ConfigError::new(format!("grid.{p}"), "empty value list"));
            }
            for &v in values {
                p.check(v)?;
            }
        }
        self.base.validate()
    }

    /// Grid points in canonical order: parameters alphabetical, the last
    /// parameter varying fastest, values in listed order. An empty grid has
    /// exactly one point, the base config.
    pub fn points(&self) -> Vec<GridPoint> {
        let mut points = vec![GridPoint(Vec::new())];
        for (&p, values) in &self.grid {
            points = points
                .into_iter()
                .flat_map(|pt| {
                    values.iter().map(move |&v| {
                        let mut next = pt.0.clone();
                        next.push((p, v));
                        GridPoint(next)
                    })
                })
                .collect();
        }
        points
    }

    pub fn params(&self) -> Vec<GridParam> {
        self.grid.keys().copied().collect()
    }
}

fn parse_grid(g: Map<String, Value>) -> Result<BTreeMap<GridParam, Vec<f64>>, ConfigError> {
    let mut grid = BTreeMap::new();
    for (name, values) in g {
        let field = format!("grid.{name}");
        let p = GridParam::from_name(&name)
            .ok_or_else(|| ConfigError::new(field.clone(), "not a sweepable parameter (memory, g_max, ratio_ref)"))?;
        let list = match values {
            Value::Array(a) => a,
            v @ Value::Number(_) => vec![v],
            v => return Err(ConfigError::new(field, format!("expected a list of numbers, got {v}"))),
        };
        let values = list
            .iter()
            .map(|v| v.as_f64().ok_or_else(|| ConfigError::new(field.clone(), format!("{v} is not a number"))))
            .collect::<Result<Vec<_>, _>>()?;
        grid.insert(p, values);
    }
    Ok(grid)
}

/// Splits `key=value`.
pub fn parse_override(s: &str) -> Result<(String, String), ConfigError> {
    let (k, v) = s
        .split_once('=')
        .ok_or_else(|| ConfigError::new(s, "override must look like key=value"))?;
    Ok((k.trim().to_string(), v.trim().to_string()))
}

/// Applies `key=value` overrides to a config document in order, so the last
/// occurrence of a key wins. Dotted keys reach into nested objects
/// (`grid.memory=[2,3]`). Values are read as JSON when they parse, otherwise
/// as plain strings.
pub fn apply_overrides(doc: &mut Value, overrides: &[(String, String)]) -> Result<(), ConfigError> {
    for (key, raw) in overrides {
        let parts: Vec<&str> = key.split('.').collect();
        let known = match parts.as_slice() {
            [k] => CONFIG_KEYS.contains(k),
            ["grid", p] => GridParam::from_name(p).is_some(),
            _ => false,
        };
        if !known {
            return Err(ConfigError::new(key.clone(), "unknown config key"));
        }
        let value = serde_json::from_str(raw).unwrap_or_else(|_| Value::String(raw.clone()));
        let mut node = &mut *doc;
        for part in &parts[..parts.len() - 1] {
            if !node.is_object() {
                *node = Value::Object(Map::new());
            }
            node = node
                .as_object_mut()
                .expect("object")
                .entry(part.to_string())
                .or_insert_with(|| Value::Object(Map::new()));
        }
        if !node.is_object() {
            *node = Value::Object(Map::new());
        }
        node.as_object_mut()
            .expect("object")
            .insert(parts[parts.len() - 1].to_string(), value);
    }
    Ok(())
}
