use std::path::Path;

use besov_morrey::dyadic::{level_quantity, n_norm};
use besov_morrey::embedding::{empirical_ratio_scan, VERDICT_FIELDS};
use besov_morrey::io::{read_sampled_csv, read_sequence_csv, write_coefficients_csv, write_sequence_csv};
use besov_morrey::morrey::{morrey_norm, DyadicStepFunction};
use besov_morrey::sweep::SweepSpec;
use besov_morrey::wavelet::{analyze, function_norm_estimate, min_vanishing_moments, WaveletSystem};
use besov_morrey::witness::{
    beta_witness, capacity_witness, select_nu, shift_family, simple_witness, MAX_BLOCK_LOG2,
};
use besov_morrey::{decide, DyadicSequence, EmbeddingQuery, Error, Outcome};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::config::{block_text, Command, Format, RunConfig, WitnessKind};
use crate::report::Report;
use crate::Failure;

/// Rendered output plus the process exit code.
pub struct Output {
    pub text: String,
    pub code: u8,
}

pub fn run(cfg: &RunConfig) -> Result<Output, Failure> {
    match cfg.command {
        Command::Check => check(cfg),
        Command::Norm => norm(cfg),
        Command::Witness => witness(cfg),
        Command::Analyze => analyze_samples(cfg),
        Command::Sweep => sweep(cfg),
    }
}

fn read_data(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::data(format!("{}: {e}", path.display())))
}

fn load_sequence(cfg: &RunConfig) -> Result<DyadicSequence, Failure> {
    let path = cfg.seq.as_ref().ok_or_else(|| Failure::usage("missing --seq"))?;
    read_sequence_csv(&read_data(path)?).map_err(|e| Failure::data(format!("{}: {e}", path.display())))
}

fn query(cfg: &RunConfig) -> Result<EmbeddingQuery, Failure> {
    EmbeddingQuery::new(cfg.source_space()?, cfg.target_space()?).map_err(|e| Failure::from_lib(&e, "query"))
}

fn exit_code(outcome: Outcome) -> u8 {
    match outcome {
        Outcome::Holds => 0,
        Outcome::Fails => 1,
        Outcome::Undetermined => 2,
    }
}

/// Random sequences plus the single-block witnesses along ν0 = 0, −1, ..., −scan_depth.
fn battery(cfg: &RunConfig, q: &EmbeddingQuery) -> Vec<DyadicSequence> {
    let d = q.dim();
    let mut rng: ChaCha8Rng = rand::SeedableRng::seed_from_u64(cfg.seed);
    let mut out = Vec::with_capacity(cfg.battery + cfg.scan_depth as usize + 1);
    for _ in 0..cfg.battery {
        let mut s = DyadicSequence::new(d);
        for _ in 0..rng.gen_range(1..=32) {
            let j = rng.gen_range(0..=6u32);
            let m: Vec<i64> = (0..d).map(|_| rng.gen_range(-8..=8)).collect();
            s.insert(j, m, rng.gen_range(-1.0..1.0)).expect("dimension matches");
        }
        out.push(s);
    }
    let deepest = (MAX_BLOCK_LOG2 / d as i64).min(cfg.scan_depth as i64);
    out.extend((0..=deepest).filter_map(|k| simple_witness(0, -k, q.source().phi()).ok()));
    out
}

fn check(cfg: &RunConfig) -> Result<Output, Failure> {
    let q = query(cfg)?;
    let v = decide(&q, &cfg.options()).map_err(|e| Failure::from_lib(&e, "decide"))?;
    let mut header = cfg.provenance();
    let mut columns: Vec<String> = VERDICT_FIELDS.iter().map(|s| s.to_string()).collect();
    let mut row: Vec<String> = v.fields().into_iter().map(|(_, x)| x).collect();
    if cfg.battery > 0 {
        let seqs = battery(cfg, &q);
        let scan = empirical_ratio_scan(&q, &seqs).map_err(|e| Failure::from_lib(&e, "ratio scan"))?;
        header.push(("seed".into(), cfg.seed.to_string()));
        header.push(("scan_depth".into(), cfg.scan_depth.to_string()));
        columns.extend(["battery_size".into(), "battery_max_ratio".into()]);
        row.extend([seqs.len().to_string(), scan.max_ratio.to_string()]);
    }
    let mut report = Report::new(header, columns);
    report.push(row);
    Ok(Output {
        text: report.render(cfg.format),
        code: exit_code(v.outcome),
    })
}

fn norm(cfg: &RunConfig) -> Result<Output, Failure> {
    let params = cfg.source_space()?;
    let seq = load_sequence(cfg)?;
    if seq.dim() != params.dim() {
        return Err(Failure::usage(format!(
            "sequence has d={} but the source block has d={}",
            seq.dim(),
            params.dim()
        )));
    }
    let lib = |e: Error| Failure::from_lib(&e, "norm");
    let mut report = Report::new(cfg.provenance(), vec!["quantity".into(), "j".into(), "value".into()]);
    if cfg.levels {
        for (j, _) in seq.levels() {
            let v = (j as f64 * params.s()).exp2() * level_quantity(&seq, j, &params).map_err(lib)?;
            report.push(vec!["level".into(), j.to_string(), v.to_string()]);
        }
    }
    let value = n_norm(&seq, &params).map_err(lib)?;
    report.push(vec!["n_norm".into(), String::new(), value.to_string()]);
    if cfg.cross_check {
        let terms = seq
            .levels()
            .map(|(j, _)| {
                let f = DyadicStepFunction::from_level(&seq, j);
                Ok((j as f64 * params.s()).exp2() * morrey_norm(&f, params.phi(), params.p())?)
            })
            .collect::<besov_morrey::Result<Vec<f64>>>()
            .map_err(lib)?;
        let brute = params.q().norm(terms);
        let delta = if brute == 0.0 { value.abs() } else { (value - brute).abs() / brute };
        report.push(vec!["brute_force".into(), String::new(), brute.to_string()]);
        report.push(vec!["cross_check_delta".into(), String::new(), delta.to_string()]);
    }
    Ok(Output {
        text: report.render(cfg.format),
        code: 0,
    })
}

fn sequence_report(header: Vec<(String, String)>, seq: &DyadicSequence) -> Report {
    let mut columns = vec!["j".to_string()];
    columns.extend((1..=seq.dim()).map(|i| format!("m{i}")));
    columns.push("value".into());
    let mut report = Report::new(header, columns);
    for (j, m, v) in seq.iter() {
        let mut row = vec![j.to_string()];
        row.extend(m.iter().map(i64::to_string));
        row.push(v.to_string());
        report.push(row);
    }
    report
}

fn witness(cfg: &RunConfig) -> Result<Output, Failure> {
    let lib = |e: Error| Failure::from_lib(&e, "witness");
    let mut header = cfg.provenance();
    header.push(("kind".into(), format!("{:?}", cfg.kind).to_lowercase()));
    let seq = match cfg.kind {
        WitnessKind::Simple | WitnessKind::Capacity => {
            let src = cfg.source_space()?;
            header.push(("j0".into(), cfg.j0.to_string()));
            header.push(("nu0".into(), cfg.nu0.to_string()));
            if cfg.kind == WitnessKind::Simple {
                simple_witness(cfg.j0, cfg.nu0, src.phi())
            } else {
                capacity_witness(cfg.j0, cfg.nu0, src.phi(), src.p())
            }
            .map_err(lib)?
        }
        WitnessKind::Beta => {
            let q = query(cfg)?;
            let (nu, alpha) = select_nu(cfg.level, &q, cfg.nu_min).map_err(lib)?;
            header.push(("level".into(), cfg.level.to_string()));
            header.push(("nu_i".into(), nu.to_string()));
            header.push(("alpha_i".into(), alpha.to_string()));
            beta_witness(cfg.level, nu, &q, cfg.nu_min).map_err(lib)?
        }
        WitnessKind::Shift => {
            let d = match &cfg.source {
                Some(_) => cfg.source_space()?.dim(),
                None => 1,
            };
            header.push(("mu".into(), cfg.mu.to_string()));
            shift_family(cfg.mu, d)
        }
    };
    if cfg.source.is_some() {
        let src = cfg.source_space()?;
        if src.dim() == seq.dim() {
            header.push(("source_norm".into(), n_norm(&seq, &src).map_err(lib)?.to_string()));
        }
    }
    if cfg.target.is_some() {
        let tgt = cfg.target_space()?;
        if tgt.dim() == seq.dim() {
            header.push(("target_norm".into(), n_norm(&seq, &tgt).map_err(lib)?.to_string()));
        }
    }
    let text = match cfg.format {
        Format::Csv => {
            let comments: Vec<String> = header.iter().map(|(k, v)| format!("{k}={v}")).collect();
            write_sequence_csv(&seq, &comments)
        }
        Format::Jsonl => sequence_report(header, &seq).render(Format::Jsonl),
    };
    Ok(Output { text, code: 0 })
}

fn analyze_samples(cfg: &RunConfig) -> Result<Output, Failure> {
    let path = cfg.samples.as_ref().ok_or_else(|| Failure::usage("missing --samples"))?;
    let f = read_sampled_csv(&read_data(path)?).map_err(|e| Failure::data(format!("{}: {e}", path.display())))?;
    let lib = |e: Error| Failure::from_lib(&e, "analyze");
    let params = match &cfg.source {
        Some(_) => Some(cfg.source_space()?),
        None => None,
    };
    let order = match (cfg.order, &params) {
        (Some(o), _) => o,
        (None, Some(p)) => min_vanishing_moments(p.s(), p.p(), p.dim()).map_err(lib)?,
        (None, None) => return Err(Failure::usage("give --order or a source block")),
    };
    let system = WaveletSystem::at_least(order).map_err(lib)?;
    let coeffs = analyze(&f, &system, cfg.depth).map_err(lib)?;
    let mut header = cfg.provenance();
    header.push(("order".into(), system.order().to_string()));
    header.push(("depth".into(), cfg.depth.to_string()));
    header.push(("resolution_limited".into(), coeffs.resolution_limited.to_string()));
    if let Some(p) = &params {
        let est = function_norm_estimate(&f, p, &system, cfg.depth).map_err(lib)?;
        header.push(("norm_estimate".into(), est.value.to_string()));
    }
    let text = match cfg.format {
        Format::Csv => {
            let comments: Vec<String> = header.iter().map(|(k, v)| format!("{k}={v}")).collect();
            write_coefficients_csv(&coeffs, &comments)
        }
        Format::Jsonl => {
            let d = coeffs.dim();
            let mut columns = vec!["gender".to_string(), "j".to_string()];
            columns.extend((1..=d).map(|i| format!("m{i}")));
            columns.push("value".into());
            let mut report = Report::new(header, columns);
            let row = |g: String, j: u32, m: &[i64], v: f64| {
                let mut r = vec![g, j.to_string()];
                r.extend(m.iter().map(i64::to_string));
                r.push(v.to_string());
                r
            };
            let scaling = besov_morrey::wavelet::Gender::scaling(d).to_string();
            for (m, v) in coeffs.scaling() {
                report.push(row(scaling.clone(), 0, m, *v));
            }
            for (g, seq) in coeffs.details() {
                for (j, m, v) in seq.iter() {
                    report.push(row(g.to_string(), j, m, v));
                }
            }
            report.render(Format::Jsonl)
        }
    };
    Ok(Output { text, code: 0 })
}

fn sweep(cfg: &RunConfig) -> Result<Output, Failure> {
    let template = |pairs: &Option<Vec<(String, String)>>, which: &str| {
        pairs.as_ref().map(|p| block_text(p)).ok_or_else(|| Failure::usage(format!("missing {which} block")))
    };
    let spec = SweepSpec {
        source: template(&cfg.source, "source")?,
        target: template(&cfg.target, "target")?,
        axes: cfg.grid.clone(),
        options: cfg.options(),
    };
    let rows = spec.run().map_err(|e| Failure::from_lib(&e, "sweep"))?;
    let mut header = cfg.provenance();
    header.push(("tuples".into(), rows.len().to_string()));
    let mut columns: Vec<String> = spec.axes.iter().map(|a| a.name.clone()).collect();
    columns.extend(["source".into(), "target".into()]);
    columns.extend(VERDICT_FIELDS.iter().map(|s| s.to_string()));
    columns.push("error".into());
    let mut report = Report::new(header, columns);
    for r in rows {
        let mut row: Vec<String> = r.assignment.into_iter().map(|(_, v)| v).collect();
        row.extend([r.source, r.target]);
        match r.verdict {
            Ok(v) => {
                row.extend(v.fields().into_iter().map(|(_, x)| x));
                row.push(String::new());
            }
            Err(e) => {
                row.extend(std::iter::repeat(String::new()).take(VERDICT_FIELDS.len()));
                row.push(e);
            }
        }
        report.push(row);
    }
    Ok(Output {
        text: report.render(cfg.format),
        code: 0,
    })
}
