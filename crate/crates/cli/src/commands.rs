use std::fmt;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use setjoin::costmodel::{calibrate as fit_costs, CalibrationGrid};
use setjoin::domain::RawObject;
use setjoin::estimate::{estimate_limit, FrequencyTable};
use setjoin::io::{
    emit_report, generate_synthetic, read_transactions, write_synthetic, GenSpec, ReportFormat,
    RunReport,
};
use setjoin::join::{join as run_join, resolve_limit};
use setjoin::oracle::brute_force_sets;
use setjoin::pipeline::{prepare, Prepared};
use setjoin::{
    Algorithm, CostConstants, Error, FreqSource, ItemOrder, JoinConfig, JoinOutput, LimitSpec,
    LimitStrategy,
};

use crate::args::{
    Axis, BenchCmd, CalibrateCmd, ConfigArgs, EstimateCmd, FormatArg, GenerateCmd, Inputs,
    JoinCmd, OracleCmd, Preset, StatsCmd,
};

#[derive(Debug)]
pub enum Failure {
    Config(String),
    Io(String),
    Mismatch(String),
    Internal(String),
}

impl Failure {
    pub fn exit_code(&self) -> u8 {
        match self {
            Failure::Config(_) | Failure::Internal(_) => 1,
            Failure::Io(_) => 2,
            Failure::Mismatch(_) => 3,
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Config(m) | Failure::Io(m) | Failure::Mismatch(m) | Failure::Internal(m) => {
                f.write_str(m)
            }
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let msg = e.to_string();
        match e {
            Error::Io { .. } | Error::Parse { .. } | Error::LineTooLong { .. } | Error::Report(_) => {
                Failure::Io(msg)
            }
            _ => Failure::Config(msg),
        }
    }
}

fn io_err(path: &Path, e: std::io::Error) -> Failure {
    Failure::Io(format!("{}: {e}", path.display()))
}

fn read_costs(path: &Path) -> Result<CostConstants<f64>, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| io_err(path, e))?;
    CostConstants::parse_kv(&text).map_err(|m| Failure::Io(format!("{}: {m}", path.display())))
}

/// Applies the preset, then explicit flags, then validates.
pub fn build_config(a: &ConfigArgs, count_only: bool) -> Result<JoinConfig, Failure> {
    let mut cfg = match a.preset {
        Some(Preset::OrgPretti) => JoinConfig::org_pretti(),
        None => JoinConfig::default(),
    };
    if let Some(x) = a.algorithm {
        cfg.algorithm = x.into();
    }
    if let Some(x) = a.paradigm {
        cfg.paradigm = x.into();
    }
    if let Some(x) = a.ordering {
        cfg.ordering = x.into();
    }
    if let Some(x) = a.freq_source {
        cfg.freq_source = x.into();
    }
    if let Some(x) = a.intersect {
        cfg.intersect = x.into();
    }

    let given = a.limit.is_some() as u8 + a.limit_strategy.is_some() as u8 + a.unlimited as u8;
    if given > 1 {
        return Err(Failure::Config(
            "--limit, --limit-strategy and --unlimited are mutually exclusive".into(),
        ));
    }
    cfg.limit = if let Some(l) = a.limit {
        LimitSpec::Explicit(l)
    } else if let Some(s) = a.limit_strategy {
        LimitSpec::Strategy(s.into())
    } else if a.unlimited || cfg.algorithm == Algorithm::Pretti {
        LimitSpec::Unlimited
    } else {
        LimitSpec::Strategy(LimitStrategy::Frq)
    };

    cfg.faithful = a.faithful;
    cfg.keep_empty = a.keep_empty;
    cfg.trace_decisions = a.trace_decisions;
    cfg.count_only = count_only;
    if let Some(p) = &a.costs {
        cfg.costs = read_costs(p)?;
    }
    if let Some(s) = a.frq_threshold_scale {
        cfg.frq_threshold_scale = s;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn load(inputs: &Inputs) -> Result<(Vec<RawObject>, Option<Vec<RawObject>>), Failure> {
    let right = match (&inputs.right, inputs.self_join) {
        (Some(_), true) => {
            return Err(Failure::Config("--self-join takes a single input file".into()))
        }
        (None, false) => {
            return Err(Failure::Config("a right input file or --self-join is required".into()))
        }
        (Some(p), false) => Some(read_transactions(p)?),
        (None, true) => None,
    };
    Ok((read_transactions(&inputs.left)?, right))
}

fn describe_limit(p: &Prepared, cfg: &JoinConfig) -> Result<String, Failure> {
    let (limit, est) = resolve_limit(&p.left, &p.right, cfg)?;
    Ok(match (limit, est) {
        (None, _) => "none".to_owned(),
        (Some(l), Some(e)) => format!("{l} ({})", e.strategy.name()),
        (Some(l), None) => l.to_string(),
    })
}

fn print_summary(out: &JoinOutput) {
    println!("results: {}", out.n_results);
    println!("intersections: {}", out.n_intersections);
    println!("candidates direct: {}", out.n_candidates_direct);
    println!("candidates verified: {}", out.n_candidates_verified);
    println!("right indexed: {}", out.right_indexed);
    println!("build ms: {:.3}", out.build_time.as_secs_f64() * 1e3);
    println!("join ms: {:.3}", out.join_time.as_secs_f64() * 1e3);
    println!("peak logical bytes: {}", out.peak_logical_bytes);
}

fn write_pairs(path: Option<&Path>, pairs: &[(u32, u32)]) -> Result<(), Failure> {
    let name = path.unwrap_or(Path::new("<stdout>"));
    let sink: Box<dyn Write> = match path {
        Some(p) => Box::new(File::create(p).map_err(|e| io_err(p, e))?),
        None => Box::new(std::io::stdout().lock()),
    };
    let mut w = BufWriter::new(sink);
    for (l, r) in pairs {
        writeln!(w, "{l}\t{r}").map_err(|e| io_err(name, e))?;
    }
    w.flush().map_err(|e| io_err(name, e))
}

fn format_of(f: FormatArg) -> ReportFormat {
    match f {
        FormatArg::Json => ReportFormat::Json,
        FormatArg::Csv => ReportFormat::Csv,
    }
}

pub fn join(c: JoinCmd) -> Result<(), Failure> {
    if c.count_only && c.emit_pairs.is_some() {
        return Err(Failure::Config("--emit-pairs needs pairs; drop --count-only".into()));
    }
    let cfg = build_config(&c.config, c.count_only)?;
    let (left, right) = load(&c.inputs)?;
    let p = prepare(&left, right.as_deref(), cfg.ordering, cfg.freq_source)?;
    println!("limit: {}", describe_limit(&p, &cfg)?);

    let out = run_join(&p.left, &p.right, &cfg)?;
    print_summary(&out);

    if let Some(path) = &c.emit_pairs {
        write_pairs(Some(path), out.pairs.as_deref().unwrap_or(&[]))?;
    }
    if let Some(path) = &c.out {
        let report = RunReport::new(&cfg, &out, p.left.stats, p.right.stats);
        emit_report(&report, format_of(c.format), Some(path))?;
    }
    if c.check_oracle {
        let truth = brute_force_sets(&left, right.as_deref().unwrap_or(&left));
        let ok = match &out.pairs {
            Some(pairs) => *pairs == truth,
            None => out.n_results == truth.len() as u64,
        };
        if !ok {
            return Err(Failure::Mismatch(format!(
                "oracle mismatch: {} pairs expected, {} reported",
                truth.len(),
                out.n_results
            )));
        }
        println!("oracle: match");
    }
    Ok(())
}

fn check_values(axis: Axis, values: &[f64]) -> Result<(), Failure> {
    if values.is_empty() {
        return Err(Failure::Config("--values is empty".into()));
    }
    if values.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Failure::Config("--values must be strictly increasing".into()));
    }
    let integral = matches!(axis, Axis::Limit | Axis::Cardinality | Axis::Domain);
    if integral && values.iter().any(|v| v.fract() != 0.0 || *v < 1.0) {
        return Err(Failure::Config(format!("{axis:?} values must be integers >= 1")));
    }
    Ok(())
}

pub fn bench(c: BenchCmd) -> Result<(), Failure> {
    check_values(c.axis, &c.values)?;
    if c.input.is_some() && c.axis != Axis::Limit {
        return Err(Failure::Config("--input only applies to the limit axis".into()));
    }
    let base_cfg = build_config(&c.config, true)?;
    if c.axis == Axis::Limit && base_cfg.algorithm == Algorithm::Pretti {
        return Err(Failure::Config("pretti has no limit to sweep".into()));
    }
    let base_spec = GenSpec::new(c.cardinality, c.domain, c.wavg_len, c.zipf, c.seed);
    let fixed_input = match &c.input {
        Some(path) => Some(read_transactions(path)?),
        None => None,
    };
    let mut cached: Option<Prepared> = None;

    for &v in &c.values {
        let mut cfg = base_cfg.clone();
        let mut spec = base_spec;
        match c.axis {
            Axis::Limit => cfg.limit = LimitSpec::Explicit(v as u32),
            Axis::Cardinality => spec.cardinality = v as usize,
            Axis::Domain => spec.domain_size = v as usize,
            Axis::WavgLen => spec.weighted_avg_len = v,
            Axis::Zipf => spec.zipf = v,
        }
        let reuse = c.axis == Axis::Limit && cached.is_some();
        if !reuse {
            let raw = match &fixed_input {
                Some(raw) => raw.clone(),
                None => generate_synthetic(&spec)?,
            };
            cached = Some(prepare(&raw, None, cfg.ordering, cfg.freq_source)?);
        }
        let p = cached.as_ref().expect("prepared above");
        let out = run_join(&p.left, &p.right, &cfg)?;
        let report = RunReport::new(&cfg, &out, p.left.stats, p.right.stats);
        emit_report(&report, ReportFormat::Csv, Some(&c.csv))?;
        println!(
            "{:?}={v}: limit={} results={} intersections={} join_ms={:.3} peak_bytes={}",
            c.axis,
            out.limit.map_or("none".to_owned(), |l| l.to_string()),
            out.n_results,
            out.n_intersections,
            report.join_ms,
            out.peak_logical_bytes
        );
    }
    Ok(())
}

pub fn generate(c: GenerateCmd) -> Result<(), Failure> {
    let spec = GenSpec::new(c.cardinality, c.domain, c.wavg_len, c.zipf, c.seed);
    let objs = write_synthetic(&spec, &c.out)?;
    println!("wrote {} objects to {}", objs.len(), c.out.display());
    Ok(())
}

pub fn stats(c: StatsCmd) -> Result<(), Failure> {
    let raw = read_transactions(&c.path)?;
    let p = prepare(&raw, None, ItemOrder::Increasing, FreqSource::Union)?;
    let s = p.left.stats;
    println!("cardinality: {}", s.cardinality);
    println!("domain size: {}", s.domain_size);
    println!("avg length: {:.3}", s.avg_len);
    println!("weighted avg length: {:.3}", s.weighted_avg_len);
    println!("median length: {}", s.median_len);
    println!("max length: {}", s.max_len);
    Ok(())
}

pub fn estimate(c: EstimateCmd) -> Result<(), Failure> {
    let (left, right) = load(&c.inputs)?;
    let order = c.ordering.map_or(ItemOrder::default(), Into::into);
    let source = c.freq_source.map_or(FreqSource::default(), Into::into);
    let costs = match &c.costs {
        Some(p) => read_costs(p)?,
        None => CostConstants::default(),
    };
    let p = prepare(&left, right.as_deref(), order, source)?;
    let freq = FrequencyTable::from_collections(&p.left, &p.right);
    let mut frq_trace = Vec::new();
    for s in LimitStrategy::ALL {
        let e = estimate_limit(s, &p.left.stats, &freq, &p.right.stats, &costs, c.frq_threshold_scale)?;
        println!("{}: {}", s.name(), e.value);
        if s == LimitStrategy::Frq {
            frq_trace = e.trace;
        }
    }
    println!("frq trace:");
    println!("  k\titem\tprobability\tcandidates\tcost_intersection\tcost_verification");
    for step in frq_trace {
        println!(
            "  {}\t{}\t{:.6}\t{:.3}\t{:.3}\t{:.3}",
            step.k,
            p.token(step.item),
            step.probability,
            step.candidates,
            step.cost_intersection,
            step.cost_verification
        );
    }
    Ok(())
}

pub fn calibrate(c: CalibrateCmd) -> Result<(), Failure> {
    let grid = if c.quick {
        CalibrationGrid::quick()
    } else {
        CalibrationGrid::default()
    };
    let cal = fit_costs::<f64>(&grid);
    let r2 = |v: Option<f64>| v.map_or("fallback".to_owned(), |x| format!("{x:.4}"));
    let header = format!(
        "# fitted on this host; r2 merge={} binary={} direct={} verify={}\n",
        r2(cal.merge_r2),
        r2(cal.binary_r2),
        r2(cal.direct_r2),
        r2(cal.verify_r2)
    );
    let text = header + &cal.constants.to_kv_string();
    std::fs::write(&c.out, &text).map_err(|e| io_err(&c.out, e))?;
    print!("{text}");
    if cal.fell_back() {
        log::warn!("some fits were unusable; unit constants kept for those terms");
    }
    Ok(())
}

pub fn oracle(c: OracleCmd) -> Result<(), Failure> {
    let (left, right) = load(&c.inputs)?;
    let pairs = brute_force_sets(&left, right.as_deref().unwrap_or(&left));
    eprintln!("pairs: {}", pairs.len());
    write_pairs(c.emit_pairs.as_deref(), &pairs)
}
