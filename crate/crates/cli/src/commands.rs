use crate::args::*;
use crate::config::*;
use crate::error::{CliError, Result};
use crate::manifest::RunManifest;
use erasure_qec::code_model::layout_json;
use erasure_qec::experiments::output::{fmt6, json_document, write_rates_csv};
use erasure_qec::experiments::sweeps::non_decreasing_within;
use erasure_qec::experiments::*;
use erasure_qec::noise::NoiseConfig;
use rydberg_gate::branching::yb_3s1_decay;
use rydberg_gate::detection::spread_figure_of_merit;
use rydberg_gate::lindblad::*;
use rydberg_gate::*;
use serde_json::{json, Value};
use std::io::Write;
use std::path::{Path, PathBuf};

/// Resolved global settings plus the parsed config file.
pub struct Context {
    pub seed: u64,
    pub threads: usize,
    pub out: PathBuf,
    pub file: ConfigFile,
}

impl Context {
    pub fn new(flags: &GlobalArgs, config: Option<&Path>) -> Result<Self> {
        let file = match config {
            Some(p) => ConfigFile::load(p)?,
            None => ConfigFile::default(),
        };
        let from_file = GlobalArgs { seed: file.seed, threads: file.threads, out: file.out.clone() };
        let g = layered(&[Some(&global_defaults()), Some(&from_file), Some(flags)])?;
        Ok(Self { seed: req(&g.seed, "seed")?, threads: req(&g.threads, "threads")?, out: req(&g.out, "out")?, file })
    }

    fn path(&self, name: &str) -> PathBuf {
        self.out.join(name)
    }

    /// Create the output directory and write the manifest.
    fn begin(&self, command: &str, mut resolved: ConfigFile, outputs: &[PathBuf]) -> Result<()> {
        std::fs::create_dir_all(&self.out).map_err(CliError::io(format!("creating {}", self.out.display())))?;
        resolved.seed = Some(self.seed);
        resolved.threads = Some(self.threads);
        resolved.out = Some(self.out.clone());
        let path = RunManifest::new(command, self.seed, self.threads, outputs.to_vec(), resolved).write(&self.out)?;
        log::info!("manifest written to {}", path.display());
        Ok(())
    }
}

pub fn run(cli: Cli) -> Result<()> {
    let ctx = Context::new(&cli.global, cli.config.as_deref())?;
    let threads = ctx.threads;
    erasure_qec::parallel::with_threads(threads, move || match &cli.command {
        Command::Memory(a) => memory(&ctx, a),
        Command::Threshold(a) => threshold(&ctx, a),
        Command::Exponent(a) => exponent(&ctx, a),
        Command::Biased(a) => biased(&ctx, a),
        Command::Spam(a) => spam(&ctx, a),
        Command::Gate(a) => gate(&ctx, a),
        Command::Lindblad(a) => lindblad(&ctx, a),
    })
}

fn create(path: &Path) -> Result<std::io::BufWriter<std::fs::File>> {
    let f = std::fs::File::create(path).map_err(CliError::io(format!("creating {}", path.display())))?;
    Ok(std::io::BufWriter::new(f))
}

fn write_json(path: &Path, kind: &str, results: &Value) -> Result<()> {
    let doc = json_document(kind, results).map_err(|e| CliError::Numerical(format!("cannot serialise {kind}: {e}")))?;
    let mut text = serde_json::to_string_pretty(&doc).expect("JSON values always serialise");
    text.push('\n');
    std::fs::write(path, text).map_err(CliError::io(format!("writing {}", path.display())))
}

fn write_rates(path: &Path, rows: &[LogicalRateEstimate]) -> Result<()> {
    write_rates_csv(create(path)?, rows)?;
    Ok(())
}

/// JSON has no infinity; the bias is written as `"inf"` instead.
fn num(x: f64) -> Value {
    if x.is_infinite() {
        Value::String(if x > 0.0 { "inf".into() } else { "-inf".into() })
    } else {
        json!(x)
    }
}

fn check_probability(name: &str, x: f64) -> Result<()> {
    if (0.0..=1.0).contains(&x) {
        Ok(())
    } else {
        Err(CliError::Usage(format!("{name} = {x} is not a probability")))
    }
}

fn memory(ctx: &Context, flags: &MemoryArgs) -> Result<()> {
    let m = layered(&[Some(&memory_defaults()), ctx.file.memory.as_ref(), Some(flags)])?;
    let (d, p, re, pm, trials) = (req(&m.distance, "distance")?, req(&m.p, "p")?, req(&m.re, "re")?, req(&m.pm, "pm")?, req(&m.trials, "trials")?);
    let noise = match m.eta {
        Some(eta) => NoiseConfig::biased(p, eta),
        None => NoiseConfig::erasure(p, re),
    }
    .with_spam(pm)
    .with_seed(ctx.seed);
    noise.validate()?;
    let policy = match m.target_failures {
        Some(t) => TrialPolicy::adaptive(t, trials),
        None => TrialPolicy::fixed(trials),
    };
    let exp = MemoryExperiment::new(d, noise)?;

    let (csv_path, json_path) = (ctx.path("memory.csv"), ctx.path("memory.json"));
    let mut outputs = vec![csv_path.clone(), json_path.clone()];
    if m.dump.is_some() {
        outputs.extend(["layout.json", "graph.json", "trials.jsonl"].map(|f| ctx.path(f)));
    }
    ctx.begin("memory", ConfigFile { memory: Some(m.clone()), ..Default::default() }, &outputs)?;

    let est = exp.run(&policy)?;
    write_rates(&csv_path, std::slice::from_ref(&est))?;
    write_json(&json_path, "memory", &serde_json::to_value(&est).expect("estimate serialises"))?;
    if let Some(n) = m.dump {
        dump(ctx, &exp, n)?;
    }
    println!(
        "d={d} p={} R_e={} p_m={} p_L={} [{}, {}] ({} / {})",
        fmt6(noise.p),
        fmt6(noise.erasure_fraction),
        fmt6(pm),
        fmt6(est.p_l),
        fmt6(est.ci_low),
        fmt6(est.ci_high),
        est.failures,
        est.trials
    );
    Ok(())
}

fn dump(ctx: &Context, exp: &MemoryExperiment, trials: u64) -> Result<()> {
    let layout = layout_json(exp.lattice(), exp.schedule());
    std::fs::write(ctx.path("layout.json"), layout.to_string()).map_err(CliError::io("writing layout.json"))?;
    let graph = exp.graph().map(|g| g.to_json()).unwrap_or(Value::Null);
    std::fs::write(ctx.path("graph.json"), graph.to_string()).map_err(CliError::io("writing graph.json"))?;
    let mut w = create(&ctx.path("trials.jsonl"))?;
    for t in 0..trials {
        let (record, _) = exp.inspect_trial(t)?;
        writeln!(w, "{}", record.debug_line(t)).map_err(CliError::io("writing trials.jsonl"))?;
    }
    w.flush().map_err(CliError::io("writing trials.jsonl"))
}

fn sweep_settings(s: &SweepArgs, seed: u64) -> Result<SweepSettings> {
    let d = req(&s.distances, "distances")?;
    if d.len() != 2 || d[0] == d[1] {
        return Err(CliError::Usage(format!("distances must be two different values, got {d:?}")));
    }
    let points = req(&s.points, "points")?;
    if points < 3 {
        return Err(CliError::Usage("a threshold fit needs at least 3 grid points".into()));
    }
    match (s.p_min, s.p_max) {
        (None, None) => {}
        (Some(lo), Some(hi)) if 0.0 < lo && lo < hi && hi < 1.0 => {}
        (Some(_), Some(_)) => return Err(CliError::Usage("need 0 < p_min < p_max < 1".into())),
        _ => return Err(CliError::Usage("p_min and p_max must be given together".into())),
    }
    Ok(SweepSettings {
        distances: [d[0], d[1]],
        policy: TrialPolicy::fixed(req(&s.trials, "trials")?),
        bootstrap: req(&s.bootstrap, "bootstrap")?,
        grid_points: points,
        rel_width: req(&s.rel_width, "rel_width")?,
        coarse_trials: req(&s.coarse_trials, "coarse_trials")?,
        seed,
        ..SweepSettings::default()
    })
}

fn resolve_sweep(ctx: &Context, flags: &SweepArgs) -> Result<(SweepArgs, SweepSettings)> {
    let s = layered(&[Some(&sweep_defaults()), ctx.file.sweep.as_ref(), Some(flags)])?;
    let settings = sweep_settings(&s, ctx.seed)?;
    Ok((s, settings))
}

/// On a fixed grid when `p_min`/`p_max` are set, otherwise bracketed.
fn threshold_for(template: NoiseConfig, spam: SpamPolicy, s: &SweepArgs, settings: &SweepSettings) -> erasure_qec::Result<ThresholdEstimate> {
    match (s.p_min, s.p_max) {
        (Some(lo), Some(hi)) => {
            let n = settings.grid_points;
            let grid = (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect();
            let req = ThresholdRequest::new(template.with_seed(settings.seed), grid, settings.policy)
                .with_distances(settings.distances[0], settings.distances[1])
                .with_spam(spam)
                .with_bootstrap(settings.bootstrap);
            estimate_threshold(&req)
        }
        _ => threshold_auto(template, spam, settings),
    }
}

fn threshold_summary(label: Value, est: &ThresholdEstimate) -> Value {
    let mut v = label;
    let fields = json!({
        "p_th": est.p_th,
        "uncertainty": est.uncertainty,
        "p_th_reported": est.p_th_reported,
        "uncertainty_reported": est.uncertainty_reported,
        "distances": est.distances,
        "window": est.window,
        "fit_nu": est.fit.nu,
        "fit_coefficients": est.fit.coefficients,
        "chi2": est.fit.chi2,
    });
    if let (Value::Object(a), Value::Object(b)) = (&mut v, fields) {
        a.extend(b);
    }
    v
}

fn label_text(label: &Value) -> String {
    match label {
        Value::Object(m) => m.iter().map(|(k, v)| format!("{k}={}", v.as_f64().map(fmt6).unwrap_or_else(|| v.as_str().unwrap_or_default().to_string()))).collect::<Vec<_>>().join(" "),
        other => other.to_string(),
    }
}

/// Run labelled threshold jobs, write the point CSV and the summary JSON,
/// and fail after writing if any crossing was not found.
fn threshold_jobs(
    ctx: &Context,
    kind: &str,
    jobs: Vec<(Value, NoiseConfig, SpamPolicy)>,
    s: &SweepArgs,
    settings: &SweepSettings,
    resolved: ConfigFile,
) -> Result<Vec<ThresholdEstimate>> {
    for (_, template, spam) in &jobs {
        template.with_p(0.0).with_spam(spam.at(0.0)).validate()?;
        if let SpamPolicy::Fixed(pm) = spam {
            check_probability("p_m", *pm)?;
        }
    }
    let (csv_path, json_path) = (ctx.path(&format!("{kind}_points.csv")), ctx.path(&format!("{kind}.json")));
    ctx.begin(kind, resolved, &[csv_path.clone(), json_path.clone()])?;

    let mut points = Vec::new();
    let mut rows = Vec::new();
    let mut found = Vec::new();
    let mut first_error = None;
    for (label, template, spam) in jobs {
        match threshold_for(template, spam, s, settings) {
            Ok(est) => {
                println!("{}: p_th = {} ± {} (reported {} ± {})", label_text(&label), fmt6(est.p_th), fmt6(est.uncertainty), fmt6(est.p_th_reported), fmt6(est.uncertainty_reported));
                points.extend(est.points.iter().cloned());
                rows.push(threshold_summary(label, &est));
                found.push(est);
            }
            Err(e) => {
                eprintln!("{}: {e}", label_text(&label));
                rows.push(json!({ "label": label, "error": e.to_string() }));
                first_error.get_or_insert(e);
            }
        }
    }
    write_rates(&csv_path, &points)?;
    let refs: Vec<&ThresholdEstimate> = found.iter().collect();
    write_json(&json_path, kind, &json!({ "thresholds": rows, "non_decreasing": non_decreasing_within(&refs, 2.0) }))?;
    match first_error {
        Some(e) => Err(e.into()),
        None => Ok(found),
    }
}

fn threshold(ctx: &Context, flags: &ThresholdArgs) -> Result<()> {
    let t = layered(&[Some(&threshold_defaults()), ctx.file.threshold.as_ref(), Some(flags)])?;
    let (s, settings) = resolve_sweep(ctx, &flags.sweep)?;
    let pm = req(&t.pm, "pm")?;
    let jobs = req(&t.re, "re")?
        .into_iter()
        .map(|re| (json!({ "r_e": re, "p_m": pm }), NoiseConfig::erasure(0.0, re), SpamPolicy::Fixed(pm)))
        .collect();
    let resolved = ConfigFile { threshold: Some(t), sweep: Some(s.clone()), ..Default::default() };
    threshold_jobs(ctx, "threshold", jobs, &s, &settings, resolved).map(|_| ())
}

fn biased(ctx: &Context, flags: &BiasedArgs) -> Result<()> {
    let b = layered(&[Some(&biased_defaults()), ctx.file.biased.as_ref(), Some(flags)])?;
    let (s, settings) = resolve_sweep(ctx, &flags.sweep)?;
    let jobs = req(&b.eta, "eta")?
        .into_iter()
        .map(|eta| (json!({ "eta": num(eta) }), NoiseConfig::biased(0.0, eta), SpamPolicy::Fixed(0.0)))
        .collect();
    let resolved = ConfigFile { biased: Some(b), sweep: Some(s.clone()), ..Default::default() };
    threshold_jobs(ctx, "biased", jobs, &s, &settings, resolved).map(|_| ())
}

fn spam(ctx: &Context, flags: &SpamArgs) -> Result<()> {
    let sp = layered(&[Some(&spam_defaults()), ctx.file.spam.as_ref(), Some(flags)])?;
    let (s, settings) = resolve_sweep(ctx, &flags.sweep)?;
    let re = req(&sp.re, "re")?;
    let jobs = req(&sp.pm, "pm")?
        .into_iter()
        .map(|pm| {
            let (label, policy) = match pm {
                SpamArg::Fixed(x) => (json!(x), SpamPolicy::Fixed(x)),
                SpamArg::Tied => (json!("p"), SpamPolicy::TiedToP),
            };
            (json!({ "r_e": re, "p_m": label }), NoiseConfig::erasure(0.0, re), policy)
        })
        .collect();
    let resolved = ConfigFile { spam: Some(sp), sweep: Some(s.clone()), ..Default::default() };
    threshold_jobs(ctx, "spam", jobs, &s, &settings, resolved).map(|_| ())
}

fn exponent(ctx: &Context, flags: &ExponentArgs) -> Result<()> {
    let e = layered(&[Some(&exponent_defaults()), ctx.file.exponent.as_ref(), Some(flags)])?;
    let (s, settings) = resolve_sweep(ctx, &flags.sweep)?;
    let fractions = req(&e.re, "re")?;
    let d = req(&e.distance, "distance")?;
    let window = req(&e.window, "window")?;
    if window.len() != 2 || !(0.0 < window[0] && window[0] < window[1] && window[1] < 1.0) {
        return Err(CliError::Usage(format!("window must be lo,hi with 0 < lo < hi < 1, got {window:?}")));
    }
    if let Some(p) = &e.p_th {
        if p.len() != fractions.len() {
            return Err(CliError::Usage(format!("{} thresholds given for {} erasure fractions", p.len(), fractions.len())));
        }
    }
    for &re in &fractions {
        NoiseConfig::erasure(0.0, re).validate()?;
    }
    let policy = TrialPolicy::adaptive(req(&e.target_failures, "target_failures")?, req(&e.max_trials, "max_trials")?);
    let fit_points = req(&e.fit_points, "fit_points")?;

    let (csv_path, json_path) = (ctx.path("exponent_points.csv"), ctx.path("exponent.json"));
    let resolved = ConfigFile { exponent: Some(e.clone()), sweep: Some(s.clone()), ..Default::default() };
    ctx.begin("exponent", resolved, &[csv_path.clone(), json_path.clone()])?;

    let mut points = Vec::new();
    let mut rows = Vec::new();
    for (i, &re) in fractions.iter().enumerate() {
        let template = NoiseConfig::erasure(0.0, re).with_seed(ctx.seed);
        let p_th = match &e.p_th {
            Some(p) => p[i],
            None => threshold_for(template, SpamPolicy::Fixed(0.0), &s, &settings)?.p_th,
        };
        let fit = fit_exponent(&ExponentRequest::new(template, d, p_th, [window[0], window[1]], fit_points, policy))?;
        println!("R_e={}: nu = {} ± {} (p_th {})", fmt6(re), fmt6(fit.nu), fmt6(fit.stderr), fmt6(p_th));
        points.extend(fit.points.iter().cloned());
        rows.push(json!({
            "r_e": re, "d": d, "nu": fit.nu, "stderr": fit.stderr, "prefactor": fit.prefactor,
            "window": fit.window, "p_th": p_th,
        }));
    }
    write_rates(&csv_path, &points)?;
    write_json(&json_path, "exponent", &json!({ "fits": rows }))
}

fn resolve_physics(ctx: &Context, flags: &PhysicsArgs) -> Result<(PhysicsArgs, f64, f64, BranchingFractions, StepControl)> {
    let ph = layered(&[Some(&physics_defaults()), ctx.file.physics.as_ref(), Some(flags)])?;
    let branching = BranchingFractions { b: req(&ph.gamma_b, "gamma_b")?, r: req(&ph.gamma_r, "gamma_r")?, q: req(&ph.gamma_q, "gamma_q")? };
    for (name, x) in [("gamma_b", branching.b), ("gamma_r", branching.r), ("gamma_q", branching.q)] {
        check_probability(name, x)?;
    }
    branching.validate()?;
    let control = StepControl { courant: req(&ph.courant, "courant")?, resolution: req(&ph.resolution, "resolution")? };
    if !(control.courant > 0.0 && control.resolution > 0.0) {
        return Err(CliError::Usage("courant and resolution must be positive".into()));
    }
    let (g, v) = (req(&ph.gamma_tg, "gamma_tg")?, req(&ph.v_over_gamma, "v_over_gamma")?);
    GatePhysicsConfig::from_gamma_tg(g, v).with_branching(branching).validate()?;
    Ok((ph, g, v, branching, control))
}

fn gate(ctx: &Context, flags: &GateArgs) -> Result<()> {
    let ga = layered(&[Some(&gate_defaults()), ctx.file.gate.as_ref(), Some(flags)])?;
    let (ph, g, v, branching, control) = resolve_physics(ctx, &flags.physics)?;
    let w = req(&ga.initial, "initial")?;
    if w.len() != 3 {
        return Err(CliError::Usage(format!("initial needs three weights, got {}", w.len())));
    }
    let init = InitialDistribution { p00: w[0], p01: w[1], p11: w[2] };
    init.validate()?;

    let json_path = ctx.path("gate.json");
    ctx.begin("gate", ConfigFile { gate: Some(ga), physics: Some(ph), ..Default::default() }, std::slice::from_ref(&json_path))?;

    let (cfg, cal) = calibrated_config(g, v, branching, control)?;
    let traj = noiseless_trajectory(&cal.pulse, &cfg, control)?;
    let c = trajectory_coefficients(&traj, cfg.omega, cfg.v_rr, cfg.v_rp)?;
    let ch = channel_probabilities(&cfg, &c, &init)?;

    println!("gate: gamma_tg = {}, V/gamma = {}, t_g*Omega = {}", fmt6(g), fmt6(v), fmt6(cal.gate_time_omega()));
    let table = [
        ("alpha", c.alpha),
        ("R_01", c.r_01),
        ("beta", c.beta),
        ("R_11", c.r_11),
        ("R'_11", c.r_11_prime),
        ("beta'", c.beta_prime),
        ("P_QR", ch.p_qr),
        ("P_QB", ch.p_qb),
        ("P_RB", ch.p_rb),
        ("P_RR", ch.p_rr),
        ("P_BB", ch.p_bb),
        ("p_e", ch.p_e),
        ("p_p", ch.p_p),
        ("p_f", ch.p_f),
    ];
    for (name, x) in table {
        println!("  {name:<6} {}", fmt6(x));
    }
    println!("R_e = {}", fmt6(ch.r_e));

    let decay = yb_3s1_decay();
    let ratios = branching_ratios(&decay.input)?;
    let ion = ion_spread(&DetectionBudgetConfig::yb_ion(), 1.0);
    let budgets = json!({
        "branching": { "transition": decay.name, "levels": decay.labels, "ratios": ratios },
        "yb_over_li_spread_factor": spread_figure_of_merit(&DetectionBudgetConfig::li_neutral()) / spread_figure_of_merit(&DetectionBudgetConfig::yb_neutral()),
        "ion_blur_per_photon_m": ion.recoil,
    });
    let doc = json!({
        "gamma_tg": g,
        "v_over_gamma": v,
        "branching": branching,
        "initial": init,
        "pulse": cal.params,
        "omega_t_g": cal.gate_time_omega(),
        "coefficients": c,
        "channels": ch,
        "budgets": budgets,
    });
    write_json(&json_path, "gate", &doc)
}

fn lindblad(ctx: &Context, flags: &LindbladArgs) -> Result<()> {
    let l = layered(&[Some(&lindblad_defaults()), ctx.file.lindblad.as_ref(), Some(flags)])?;
    let (ph, g, v, branching, control) = resolve_physics(ctx, &flags.physics)?;
    let resolved = ConfigFile { lindblad: Some(l.clone()), physics: Some(ph), ..Default::default() };
    if req(&l.scan, "scan")? {
        let (lo, hi, n) = (req(&l.scan_min, "scan_min")?, req(&l.scan_max, "scan_max")?, req(&l.scan_points, "scan_points")?);
        if !(0.0 < lo && lo <= hi && n >= 1) {
            return Err(CliError::Usage(format!("bad scan range [{lo}, {hi}] with {n} points")));
        }
        let grid: Vec<f64> = (0..n).map(|i| if n == 1 { lo } else { lo * (hi / lo).powf(i as f64 / (n - 1) as f64) }).collect();
        let (csv_path, json_path) = (ctx.path("lindblad_scan.csv"), ctx.path("lindblad_scan.json"));
        ctx.begin("lindblad", resolved, &[csv_path.clone(), json_path.clone()])?;
        let results = sweep_gate_error(&grid, v, branching, control);
        let mut w = csv::Writer::from_writer(create(&csv_path)?);
        w.write_record(SCAN_COLUMNS)?;
        let mut rows = Vec::new();
        let mut first_error = None;
        for (g, r) in grid.iter().zip(results) {
            match r {
                Ok(pt) => {
                    w.write_record(scan_record(&pt).map(fmt6))?;
                    println!("gamma_tg={} 1-F={} p_e={} 1-F_e={} p_f={}", fmt6(*g), fmt6(pt.infidelity()), fmt6(pt.outcome.p_e), fmt6(pt.conditional_infidelity()), fmt6(pt.outcome.p_f));
                    rows.push(scan_json(&pt));
                }
                Err(e) => {
                    eprintln!("gamma_tg={g}: {e}");
                    rows.push(json!({ "gamma_tg": g, "error": e.to_string() }));
                    first_error.get_or_insert(e);
                }
            }
        }
        w.flush().map_err(CliError::io("writing lindblad_scan.csv"))?;
        write_json(&json_path, "lindblad_scan", &json!({ "columns": SCAN_COLUMNS, "points": rows }))?;
        return first_error.map_or(Ok(()), |e| Err(e.into()));
    }

    let (csv_path, json_path) = (ctx.path("lindblad_timeseries.csv"), ctx.path("lindblad.json"));
    ctx.begin("lindblad", resolved, &[csv_path.clone(), json_path.clone()])?;
    let (cfg, cal) = calibrated_config(g, v, branching, control)?;
    let outcome = simulate_gate(&cal.pulse, &cfg, control)?;
    let traj = noiseless_trajectory(&cal.pulse, &cfg, control)?;
    let c = trajectory_coefficients(&traj, cfg.omega, cfg.v_rr, cfg.v_rp)?;
    let analytic = channel_probabilities(&cfg, &c, &InitialDistribution::BASIS_AVERAGE)?;

    let mut w = csv::Writer::from_writer(create(&csv_path)?);
    w.write_record(TIMESERIES_COLUMNS)?;
    let stride = traj.len().div_ceil(2000).max(1);
    for (k, t) in traj.times().enumerate().step_by(stride) {
        w.write_record([t, traj.psi_r[k].norm_sqr(), traj.psi_w[k].norm_sqr(), traj.psi_rr[k].norm_sqr()].map(fmt6))?;
    }
    w.flush().map_err(CliError::io("writing lindblad_timeseries.csv"))?;

    let p = outcome.populations;
    println!("lindblad: gamma_tg = {}, V/gamma = {}", fmt6(g), fmt6(v));
    println!("  {:<4} {:>12} {:>12}", "", "master eq.", "analytic");
    for (name, a, b) in [("QR", p.qr, analytic.p_qr), ("QB", p.qb, analytic.p_qb), ("RB", p.rb, analytic.p_rb), ("RR", p.rr, analytic.p_rr), ("BB", p.bb, analytic.p_bb)] {
        println!("  {name:<4} {:>12} {:>12}", fmt6(a), fmt6(b));
    }
    println!("1-F = {}  1-F_e = {}  p_e = {}  p_f = {}  R_e = {}", fmt6(outcome.infidelity()), fmt6(outcome.conditional_infidelity()), fmt6(outcome.p_e), fmt6(outcome.p_f), fmt6(outcome.erasure_fraction()));
    write_json(&json_path, "lindblad", &json!({ "outcome": outcome, "analytic": analytic, "coefficients": c, "pulse": cal.params }))
}

/// Columns of the single-point time series: Rydberg populations of the
/// |01> input and of the |11> input's symmetric and doubly excited parts.
pub const TIMESERIES_COLUMNS: [&str; 4] = ["t", "p_r_01", "p_w_11", "p_rr_11"];

fn scan_record(pt: &ScanPoint) -> [f64; 12] {
    let (o, a, p) = (&pt.outcome, &pt.analytic, &pt.outcome.populations);
    [pt.gamma_tg, o.infidelity(), o.p_e, o.conditional_infidelity(), o.p_f, o.erasure_fraction(), p.qr, p.qb, p.rb, p.rr, a.p_e, a.r_e]
}

fn scan_json(pt: &ScanPoint) -> Value {
    let map: serde_json::Map<String, Value> = SCAN_COLUMNS.iter().zip(scan_record(pt)).map(|(k, v)| (k.to_string(), json!(v))).collect();
    Value::Object(map)
}
