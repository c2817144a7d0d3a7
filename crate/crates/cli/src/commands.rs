//! One function per subcommand, each producing an [`OutputRecord`].

use rosen_core::domain::{unnormalized_odd_constant, DomainSpec, Parity};
use rosen_core::montecarlo::{
    block_event_frequency, ergodic_distribution, verify_borel, verify_tong_bound, DistributionConfig, SimConfig,
    SimReport, Threshold,
};
use rosen_core::rosen::theta_direct;
use rosen_core::spectrum::{d_boundaries, nu_ak_closed_form, spectrum_table, RegionA};
use rosen_core::{Error, Precision, RosenMap, TiePolicy};
use rug::Float;
use serde_json::{json, Map, Value};

use crate::expr;
use crate::output::{double, real, real_opt, reals, OutputRecord, Provenance, SCHEMA_VERSION};

/// Relative tolerance of every `ν(A_k)` quadrature.
const QUADRATURE_RTOL: f64 = 1e-12;

#[derive(Debug)]
pub enum CliError {
    /// Malformed input; exit code 2.
    Usage(String),
    /// A library error, mapped to its exit code by [`CliError::exit_code`].
    Core(Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Core(Error::InvalidParameter(_) | Error::OutsideInterval(_)) => 2,
            CliError::Core(Error::BoundaryAmbiguity { .. }) => 3,
            CliError::Core(_) => 1,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "{m}"),
            CliError::Core(e) => write!(f, "{e}"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

pub type CmdResult = Result<Outcome, CliError>;

/// A record plus the names of the failed assertions, if any.
pub struct Outcome {
    pub record: OutputRecord,
    pub failures: Vec<String>,
}

impl Outcome {
    fn ok(record: OutputRecord) -> Self {
        Self {
            record,
            failures: Vec::new(),
        }
    }
}

/// Settings shared by every subcommand.
#[derive(Debug, Clone, Copy)]
pub struct Context {
    pub precision: Precision,
    pub ties: TiePolicy,
}

impl Context {
    fn record(&self, command: &str, params: Value, results: Map<String, Value>, table: &'static str) -> OutputRecord {
        self.record_with(command, params, results, table, None, Map::new())
    }

    fn record_with(
        &self,
        command: &str,
        params: Value,
        results: Map<String, Value>,
        table: &'static str,
        seed: Option<u64>,
        extra_tolerances: Map<String, Value>,
    ) -> OutputRecord {
        let bits = self.precision.bits();
        let mut tolerances = Map::new();
        tolerances.insert("zero_threshold".into(), real(&self.precision.zero_threshold()));
        tolerances.extend(extra_tolerances);
        OutputRecord {
            schema_version: SCHEMA_VERSION,
            command: command.into(),
            params: params.as_object().cloned().unwrap_or_default(),
            results,
            provenance: Provenance {
                seed,
                precision_bits: bits,
                tie_policy: match self.ties {
                    TiePolicy::HalfOpen => "half_open",
                    TiePolicy::Strict => "strict",
                },
                tolerances,
            },
            precision_bits: bits,
            table,
        }
    }

    fn map(&self, q: u32) -> Result<RosenMap, CliError> {
        Ok(RosenMap::new(q, self.precision)?.with_tie_policy(self.ties))
    }

    fn domain(&self, q: u32) -> Result<DomainSpec, CliError> {
        Ok(DomainSpec::build(q, self.precision)?)
    }
}

fn results(v: Value) -> Map<String, Value> {
    match v {
        Value::Object(m) => m,
        _ => unreachable!("results are built as objects"),
    }
}

pub fn expand(ctx: &Context, q: u32, x_src: &str, n: usize) -> CmdResult {
    let map = ctx.map(q)?;
    let x = expr::evaluate(x_src, map.lambda(), ctx.precision.bits())
        .map_err(|e| CliError::Usage(format!("cannot parse --x '{x_src}': {e}")))?;
    let expansion = map.expand(&x, n)?;
    let convergents = map.convergents(&expansion.digits);
    let steps: Vec<Value> = expansion
        .digits
        .iter()
        .zip(&convergents)
        .map(|(d, c)| {
            json!({
                "n": c.index,
                "epsilon": d.epsilon.value(),
                "r": d.r,
                "numerator": real(&c.numerator),
                "denominator": real(&c.denominator),
                "convergent": real(&c.value()),
                "theta": real(&theta_direct(&x, c)),
            })
        })
        .collect();
    let res = json!({
        "q": q,
        "x": real(&x),
        "lambda": real(map.lambda()),
        "n_digits": expansion.digits.len(),
        "terminated": expansion.terminated,
        "steps": steps,
    });
    let params = json!({"q": q, "x": x_src, "n": n});
    Ok(Outcome::ok(ctx.record("expand", params, results(res), "steps")))
}

pub fn domain(ctx: &Context, q: u32) -> CmdResult {
    let d = ctx.domain(q)?;
    let bounds = d_boundaries(q, ctx.precision)?;
    let parity = match d.parity() {
        Parity::Even { p } => json!({"kind": "even", "p": p}),
        Parity::Odd { h } => json!({"kind": "odd", "h": h}),
    };
    let strips: Vec<Value> = d
        .strips()
        .iter()
        .map(|s| {
            json!({
                "label": s.label,
                "t_lo": real(&s.t_lo),
                "t_hi": real(&s.t_hi),
                "height": real(&s.height),
            })
        })
        .collect();
    let staircase: Vec<Value> = d
        .staircase()
        .iter()
        .enumerate()
        .map(|(i, p)| json!({"index": i, "t": real(&p.t), "v": real(&p.v)}))
        .collect();
    let mut res = json!({
        "q": q,
        "parity": parity,
        "lambda": real(d.lambda()),
        "phi": reals(d.phi()),
        "heights": reals(d.heights()),
        "r": real(d.r()),
        "c_q": real(d.c_q()),
        "hurwitz": real(bounds.hurwitz()),
        "solver_sweeps": d.solver_sweeps(),
        "strips": strips,
        "staircase": staircase,
    });
    if !d.parity().is_even() {
        res["c_q_unnormalized"] = real(&unnormalized_odd_constant(d.r()));
    }
    Ok(Outcome::ok(ctx.record(
        "domain",
        json!({"q": q}),
        results(res),
        "staircase",
    )))
}

/// Region names accepted by [`boundary`].
pub const REGIONS: [&str; 5] = ["omega", "D", "A", "B", "C"];

fn linspace(lo: &Float, hi: &Float, n: usize) -> Vec<Float> {
    let bits = lo.prec();
    let width = Float::with_val(bits, hi - lo);
    let steps = n.saturating_sub(1).max(1) as u64;
    (0..n as u64)
        .map(|i| Float::with_val(bits, &width * i) / steps + lo)
        .collect()
}

pub fn boundary(ctx: &Context, q: u32, region: &str, n_points: usize) -> CmdResult {
    if !REGIONS.contains(&region) {
        return Err(CliError::Usage(format!(
            "unknown region '{region}'; expected one of {}",
            REGIONS.join(", ")
        )));
    }
    if n_points < 2 {
        return Err(CliError::Usage("--points must be at least 2".into()));
    }
    let d = ctx.domain(q)?;
    let b = d_boundaries(q, ctx.precision)?;
    let a = RegionA::of(&d);
    let bits = ctx.precision.bits();
    let left = Float::with_val(bits, -d.map().half_lambda());
    let mut rows: Vec<Value> = Vec::new();
    let mut curve = |id: &str, ts: &[Float], f: &dyn Fn(&Float) -> Float| {
        for t in ts {
            let v = f(t);
            if v.is_finite() {
                rows.push(json!({"t": real(t), "v": real(&v), "curve_id": id}));
            }
        }
    };
    match region {
        "omega" => {
            for p in d.staircase() {
                rows.push(json!({"t": real(&p.t), "v": real(&p.v), "curve_id": "staircase"}));
            }
        }
        "D" => {
            let ts = linspace(&left, &a.t_hi, n_points);
            curve("f", &ts, &|t| b.f(t));
            curve("g", &ts, &|t| b.g(t));
        }
        "A" => {
            let ts = linspace(&a.t_lo, &a.t_hi, n_points);
            curve("lower", &ts, &|t| b.lower(t));
            curve("top", &ts, &|_| a.top.clone());
            let vs = linspace(&b.lower(&a.t_lo), &a.top, n_points);
            for v in &vs {
                rows.push(json!({"t": real(&a.t_lo), "v": real(v), "curve_id": "left"}));
            }
        }
        "B" => {
            let ts = linspace(&left, &a.t_hi, n_points);
            curve("ell", &ts, &|t| b.ell(t));
        }
        "C" => {
            let ts = linspace(&left, &a.t_hi, n_points);
            curve("h", &ts, &|t| b.h(t));
        }
        _ => unreachable!(),
    }
    let res = json!({
        "q": q,
        "region": region,
        "t_range": [real(&left), real(&a.t_hi)],
        "fg_crossing": real(&b.fg_crossing()),
        "points": rows,
    });
    let params = json!({"q": q, "region": region, "points": n_points});
    Ok(Outcome::ok(ctx.record("boundary", params, results(res), "points")))
}

pub fn spectrum(ctx: &Context, q: u32, k_max: usize) -> CmdResult {
    let table = spectrum_table(q, k_max, ctx.precision)?;
    let dom = if q >= 4 { Some(ctx.domain(q)?) } else { None };
    let hurwitz = rosen_core::spectrum::hurwitz_constant(q, ctx.precision)?;
    let tau_lim = dom.as_ref().map(rosen_core::spectrum::tau_limit);
    let mut rows = Vec::with_capacity(table.rows.len());
    for row in &table.rows {
        let exact = row.exact.as_ref().expect("table rows carry exact values");
        // The closed forms only hold where g bounds A from below.
        let closed = match &dom {
            Some(d) if q >= 6 => Some(nu_ak_closed_form(d, row.k)?),
            _ => None,
        };
        rows.push(json!({
            "k": row.k,
            "block_len": row.block_len,
            "tau": real_opt(exact.tau.as_ref()),
            "c": real(&exact.c),
            "nu_ak": real_opt(exact.nu_ak.as_ref()),
            "nu_ak_closed_form": real_opt(closed.as_ref()),
            "hurwitz": real(&hurwitz),
            "tau_limit": real_opt(tau_lim.as_ref()),
        }));
    }
    let res = json!({
        "q": q,
        "classical": q == 3,
        "hurwitz": real(&hurwitz),
        "tau_limit": real_opt(tau_lim.as_ref()),
        "rows": rows,
    });
    let mut tol = Map::new();
    tol.insert("quadrature_relative".into(), double(QUADRATURE_RTOL));
    let record = ctx.record_with(
        "spectrum",
        json!({"q": q, "kmax": k_max}),
        results(res),
        "rows",
        None,
        tol,
    );
    Ok(Outcome::ok(record))
}

/// Which simulation to run.
#[derive(Debug, Clone, Copy)]
pub enum Simulation {
    Blocks { k: usize, threshold: Threshold },
    Tong { k_max: usize },
    Borel,
    Distribution(DistributionConfig),
}

pub fn simulate(ctx: &Context, sim: Simulation, cfg: SimConfig) -> CmdResult {
    let cfg = cfg.with_precision(ctx.precision);
    let mut params = serde_json::to_value(cfg).expect("config serializes");
    let (name, report): (&str, SimReport) = match sim {
        Simulation::Blocks { k, threshold } => {
            params["k"] = json!(k);
            params["threshold"] = json!(threshold);
            ("simulate blocks", block_event_frequency(&cfg, k, threshold)?)
        }
        Simulation::Tong { k_max } => {
            params["kmax"] = json!(k_max);
            ("simulate tong", verify_tong_bound(&cfg, k_max)?)
        }
        Simulation::Borel => ("simulate borel", verify_borel(&cfg)?),
        Simulation::Distribution(dc) => {
            params["t_bins"] = json!(dc.t_bins);
            params["grid_t"] = json!(dc.grid_t);
            params["grid_v"] = json!(dc.grid_v);
            params["stride"] = json!(dc.stride);
            ("simulate distribution", ergodic_distribution(&cfg, dc)?)
        }
    };
    let failures: Vec<String> = report.failures().map(|s| s.name.clone()).collect();
    let res = json!({
        "report": report.name,
        "q": report.q,
        "passed": failures.is_empty(),
        "failures": failures,
        "statistics": serde_json::to_value(&report.statistics).expect("statistics serialize"),
    });
    let record = ctx.record_with(name, params, results(res), "statistics", Some(cfg.seed), Map::new());
    Ok(Outcome { record, failures })
}
