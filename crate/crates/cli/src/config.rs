//! Run configuration: INI file sections merged with command-line flags.

use std::path::PathBuf;

use besov_morrey::embedding::{DEFAULT_J_MAX, DEFAULT_NU_MIN};
use besov_morrey::io::{parse_key_values, space_from_pairs};
use besov_morrey::sweep::Axis;
use besov_morrey::{DecideOptions, SpaceParams};
use clap::ValueEnum;
use ini::Ini;

use crate::{Cli, Failure};

pub const TOLERANCE: f64 = 1e-9;
pub const DEFAULT_SCAN_DEPTH: u32 = 12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Command {
    Check,
    Norm,
    Witness,
    Analyze,
    Sweep,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    #[default]
    Csv,
    Jsonl,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum WitnessKind {
    #[default]
    Simple,
    Capacity,
    Beta,
    Shift,
}

#[derive(Clone, Debug)]
pub struct RunConfig {
    pub command: Command,
    /// Parameter blocks as `key=value` pairs, kept textual so sweeps can substitute.
    pub source: Option<Vec<(String, String)>>,
    pub target: Option<Vec<(String, String)>>,
    pub seq: Option<PathBuf>,
    pub samples: Option<PathBuf>,
    pub out: Option<PathBuf>,
    pub format: Format,
    pub j_max: u32,
    pub nu_min: i64,
    pub force_numeric: bool,
    pub seed: u64,
    pub scan_depth: u32,
    pub battery: usize,
    pub grid: Vec<Axis>,
    pub kind: WitnessKind,
    pub j0: u32,
    pub nu0: i64,
    pub level: u32,
    pub mu: i64,
    pub order: Option<u32>,
    pub depth: u32,
    pub levels: bool,
    pub cross_check: bool,
}

pub fn block_text(pairs: &[(String, String)]) -> String {
    pairs.iter().map(|(k, v)| format!("{k}={v}")).collect::<Vec<_>>().join(", ")
}

fn usage(msg: impl Into<String>) -> Failure {
    Failure::usage(msg)
}

fn parse_num<T: std::str::FromStr>(key: &str, v: &str) -> Result<T, Failure> {
    v.trim().parse().map_err(|_| usage(format!("{key}: cannot parse '{v}'")))
}

fn parse_bool(key: &str, v: &str) -> Result<bool, Failure> {
    match v.trim().to_ascii_lowercase().as_str() {
        "1" | "true" | "yes" | "on" => Ok(true),
        "0" | "false" | "no" | "off" => Ok(false),
        _ => Err(usage(format!("{key}: expected a boolean, got '{v}'"))),
    }
}

fn parse_enum<T: ValueEnum>(key: &str, v: &str) -> Result<T, Failure> {
    T::from_str(v.trim(), true).map_err(|_| usage(format!("{key}: unknown value '{v}'")))
}

impl RunConfig {
    fn defaults() -> Self {
        RunConfig {
            command: Command::Check,
            source: None,
            target: None,
            seq: None,
            samples: None,
            out: None,
            format: Format::Csv,
            j_max: DEFAULT_J_MAX,
            nu_min: DEFAULT_NU_MIN,
            force_numeric: false,
            seed: 0,
            scan_depth: DEFAULT_SCAN_DEPTH,
            battery: 0,
            grid: Vec::new(),
            kind: WitnessKind::Simple,
            j0: 0,
            nu0: 0,
            level: 0,
            mu: 0,
            order: None,
            depth: 3,
            levels: false,
            cross_check: false,
        }
    }

    /// Config file first, flags on top. A missing command is a usage error.
    pub fn resolve(cli: &Cli) -> Result<RunConfig, Failure> {
        let mut cfg = RunConfig::defaults();
        let mut command = None;
        if let Some(path) = &cli.config {
            let text = std::fs::read_to_string(path)
                .map_err(|e| usage(format!("cannot read config {}: {e}", path.display())))?;
            command = cfg.apply_ini(&text)?;
        }
        command = cli.command.or(command);
        cfg.command = command.ok_or_else(|| usage("no command given (check, norm, witness, analyze, sweep)"))?;
        cfg.apply_flags(cli)?;
        cfg.validate()?;
        Ok(cfg)
    }

    fn apply_ini(&mut self, text: &str) -> Result<Option<Command>, Failure> {
        let ini = Ini::load_from_str(text).map_err(|e| usage(format!("config: {e}")))?;
        let mut command = None;
        for (section, props) in ini.iter() {
            let pairs: Vec<(String, String)> =
                props.iter().map(|(k, v)| (k.trim().to_string(), v.trim().to_string())).collect();
            match section.map(str::trim) {
                None if pairs.is_empty() => {}
                None => return Err(usage("config: keys before the first section")),
                Some("source") => self.source = Some(pairs),
                Some("target") => self.target = Some(pairs),
                Some("grid") => {
                    self.grid = pairs
                        .iter()
                        .map(|(k, v)| Axis::parse(k, v))
                        .collect::<besov_morrey::Result<_>>()
                        .map_err(|e| usage(format!("config [grid]: {e}")))?;
                }
                Some("run") => {
                    for (k, v) in &pairs {
                        if k == "command" {
                            command = Some(parse_enum(k, v)?);
                        } else {
                            self.set(k, v)?;
                        }
                    }
                }
                Some(other) => return Err(usage(format!("config: unknown section [{other}]"))),
            }
        }
        Ok(command)
    }

    fn set(&mut self, key: &str, v: &str) -> Result<(), Failure> {
        match key {
            "seq" => self.seq = Some(PathBuf::from(v)),
            "samples" => self.samples = Some(PathBuf::from(v)),
            "out" => self.out = Some(PathBuf::from(v)),
            "format" => self.format = parse_enum(key, v)?,
            "j_max" | "jmax" => self.j_max = parse_num(key, v)?,
            "nu_min" | "numin" => self.nu_min = parse_num(key, v)?,
            "force_numeric" => self.force_numeric = parse_bool(key, v)?,
            "seed" => self.seed = parse_num(key, v)?,
            "scan_depth" => self.scan_depth = parse_num(key, v)?,
            "battery" => self.battery = parse_num(key, v)?,
            "kind" => self.kind = parse_enum(key, v)?,
            "j0" => self.j0 = parse_num(key, v)?,
            "nu0" => self.nu0 = parse_num(key, v)?,
            "level" => self.level = parse_num(key, v)?,
            "mu" => self.mu = parse_num(key, v)?,
            "order" => self.order = Some(parse_num(key, v)?),
            "depth" => self.depth = parse_num(key, v)?,
            "levels" => self.levels = parse_bool(key, v)?,
            "cross_check" => self.cross_check = parse_bool(key, v)?,
            _ => return Err(usage(format!("config [run]: unknown key '{key}'"))),
        }
        Ok(())
    }

    fn apply_flags(&mut self, cli: &Cli) -> Result<(), Failure> {
        let block = |name: &str, text: &str| {
            parse_key_values(text).map_err(|e| usage(format!("--{name}: {e}")))
        };
        if let Some(s) = &cli.source {
            self.source = Some(block("source", s)?);
        }
        if let Some(t) = &cli.target {
            self.target = Some(block("target", t)?);
        }
        macro_rules! take {
            ($($field:ident <- $flag:ident),*) => {$(
                if let Some(v) = &cli.$flag {
                    self.$field = v.clone().into();
                }
            )*};
        }
        take!(seq <- seq, samples <- samples, out <- out, order <- order);
        macro_rules! copy {
            ($($field:ident <- $flag:ident),*) => {$(
                if let Some(v) = cli.$flag {
                    self.$field = v;
                }
            )*};
        }
        copy!(format <- format, j_max <- jmax, nu_min <- numin, seed <- seed, scan_depth <- scan_depth,
              battery <- battery, kind <- kind, j0 <- j0, nu0 <- nu0, level <- level, mu <- mu, depth <- depth);
        self.force_numeric |= cli.force_numeric;
        self.levels |= cli.levels;
        self.cross_check |= cli.cross_check;
        if !cli.grid.is_empty() {
            self.grid = cli
                .grid
                .iter()
                .map(|g| {
                    let (name, spec) = g.split_once('=').ok_or_else(|| usage(format!("--grid '{g}' is not name=values")))?;
                    Axis::parse(name, spec).map_err(|e| usage(format!("--grid: {e}")))
                })
                .collect::<Result<_, _>>()?;
        }
        Ok(())
    }

    fn validate(&self) -> Result<(), Failure> {
        if self.j_max == 0 {
            return Err(usage("j_max must be positive"));
        }
        if self.nu_min > 0 {
            return Err(usage("nu_min must not be positive"));
        }
        if self.scan_depth == 0 {
            return Err(usage("scan_depth must be positive"));
        }
        if self.order == Some(0) {
            return Err(usage("order must be positive"));
        }
        Ok(())
    }

    pub fn options(&self) -> DecideOptions {
        DecideOptions {
            j_max: self.j_max,
            nu_min: self.nu_min,
            force_numeric: self.force_numeric,
        }
    }

    fn space(&self, which: &str, pairs: &Option<Vec<(String, String)>>) -> Result<SpaceParams, Failure> {
        let pairs = pairs.as_ref().ok_or_else(|| usage(format!("missing {which} block")))?;
        space_from_pairs(pairs).map_err(|e| Failure::from_lib(&e, &format!("{which} block")))
    }

    pub fn source_space(&self) -> Result<SpaceParams, Failure> {
        self.space("source", &self.source)
    }

    pub fn target_space(&self) -> Result<SpaceParams, Failure> {
        self.space("target", &self.target)
    }

    /// Provenance lines shared by every report.
    pub fn provenance(&self) -> Vec<(String, String)> {
        let mut h = vec![
            ("tool".to_string(), format!("bmorrey {}", env!("CARGO_PKG_VERSION"))),
            ("command".into(), format!("{:?}", self.command).to_lowercase()),
            ("tolerance".into(), format!("{TOLERANCE:e}")),
            ("j_max".into(), self.j_max.to_string()),
            ("nu_min".into(), self.nu_min.to_string()),
        ];
        if let Some(s) = &self.source {
            h.push(("source".into(), block_text(s)));
        }
        if let Some(t) = &self.target {
            h.push(("target".into(), block_text(t)));
        }
        h
    }
}
