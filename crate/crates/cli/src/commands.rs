use ruin_core::asymptotics::{coefficients, convergence_ratio};
use ruin_core::lundberg::{upper_bound, upper_bound_allowing_negative_rates};
use ruin_core::retention::{refine_retention, select_retention, RetentionQuery};
use ruin_core::simulate::{self, SimulationSpec};
use ruin_core::{compute_ruin_table, solve_adjustment, ClaimModel, Error, InterestChain, LossDistribution, RetentionOutcome, RuinTable};

use crate::format::{number, Precision};
use crate::scenario::{check_retentions, Scenario};
use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    RuinTable,
    Lundberg,
    Asymptotic,
    Retention,
    Simulate,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::RuinTable => "ruin-table",
            Command::Lundberg => "lundberg",
            Command::Asymptotic => "asymptotic",
            Command::Retention => "retention",
            Command::Simulate => "simulate",
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct Options {
    pub precision: Precision,
    /// Overrides `[simulate] seed`.
    pub seed: Option<u64>,
    /// Size of the worker pool; the global pool when `None`.
    pub threads: Option<usize>,
}

/// CSV text plus diagnostics meant for stderr.
#[derive(Debug, Clone, PartialEq)]
pub struct CommandOutput {
    pub csv: String,
    pub warnings: Vec<String>,
}

pub fn run_command(command: Command, scenario: &Scenario, options: &Options) -> Result<CommandOutput, CliError> {
    match options.threads {
        Some(0) => Err(CliError::Config(vec!["--threads: must be at least 1".into()])),
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| CliError::Config(vec![format!("--threads: {e}")]))?;
            pool.install(|| dispatch(command, scenario, options))
        }
        None => dispatch(command, scenario, options),
    }
}

fn dispatch(command: Command, scenario: &Scenario, options: &Options) -> Result<CommandOutput, CliError> {
    match command {
        Command::RuinTable => ruin_table(scenario, options.precision),
        Command::Lundberg => lundberg(scenario, options.precision),
        Command::Asymptotic => asymptotic(scenario, options.precision),
        Command::Retention => retention(scenario, options.precision),
        Command::Simulate => simulate(scenario, options),
    }
}

struct Csv {
    writer: csv::Writer<Vec<u8>>,
    precision: Precision,
}

impl Csv {
    fn new(header: &[&str], precision: Precision) -> Result<Self, CliError> {
        let mut writer = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
        writer.write_record(header).map_err(csv_error)?;
        Ok(Self { writer, precision })
    }

    fn num(&self, v: f64) -> String {
        number(v, self.precision)
    }

    fn row<I, S>(&mut self, cells: I) -> Result<(), CliError>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<[u8]>,
    {
        self.writer.write_record(cells).map_err(csv_error)
    }

    fn finish(self, warnings: Vec<String>) -> Result<CommandOutput, CliError> {
        let bytes = self.writer.into_inner().map_err(|e| CliError::Output(e.into_error()))?;
        let csv = String::from_utf8(bytes).expect("CSV cells are ASCII");
        Ok(CommandOutput { csv, warnings })
    }
}

fn csv_error(e: csv::Error) -> CliError {
    CliError::Output(std::io::Error::other(e))
}

struct Inputs {
    model: ClaimModel,
    chain: InterestChain,
    states: Vec<usize>,
}

fn inputs(scenario: &Scenario) -> Result<Inputs, CliError> {
    let model = scenario.model()?;
    let chain = scenario.chain()?;
    let states = scenario.states(&chain)?;
    scenario.terms_template()?;
    Ok(Inputs { model, chain, states })
}

fn table_for(scenario: &Scenario, inputs: &Inputs, b: f64, horizon: usize, capitals: &[f64]) -> Result<RuinTable, CliError> {
    let terms = scenario.terms_at(b)?;
    let config = scenario.engine_config(horizon, capitals.to_vec())?;
    Ok(compute_ruin_table(&inputs.model, &terms, &inputs.chain, &config)?)
}

fn net_profit_warning(table: &RuinTable, b: f64) -> Option<String> {
    (!table.net_profit_ok()).then(|| {
        format!(
            "warning: b={b}: net-profit condition fails (needs b > {}); finite-horizon values are still reported",
            crate::format::significant(table.terms().net_profit_threshold(), 6)
        )
    })
}

fn ruin_table(scenario: &Scenario, precision: Precision) -> Result<CommandOutput, CliError> {
    let inputs = inputs(scenario)?;
    let horizons = scenario.horizons()?;
    let retentions = scenario.retentions()?;
    let capitals = &scenario.grid.capitals;
    let max_n = *horizons.iter().max().expect("nonempty");

    let mut out = Csv::new(&["u", "b", "n", "state", "psi"], precision)?;
    let mut warnings = Vec::new();
    for &b in &retentions {
        let table = table_for(scenario, &inputs, b, max_n, capitals)?;
        warnings.extend(net_profit_warning(&table, b));
        for &n in &horizons {
            for &s in &inputs.states {
                for &u in capitals {
                    let psi = table.psi(n, s, u)?;
                    out.row([out.num(u), out.num(b), n.to_string(), (s + 1).to_string(), out.num(psi)])?;
                }
            }
        }
    }
    out.finish(warnings)
}

fn lundberg(scenario: &Scenario, precision: Precision) -> Result<CommandOutput, CliError> {
    let inputs = inputs(scenario)?;
    let retentions = scenario.retentions()?;
    let capitals = scenario.lundberg.capitals.as_ref().unwrap_or(&scenario.grid.capitals);
    if let Some(k) = capitals.iter().position(|u| !(u.is_finite() && *u >= 0.0)) {
        return Err(CliError::field(&format!("lundberg.capitals[{k}]"), "capitals must be finite and nonnegative"));
    }

    let mut out = Csv::new(&["b", "R", "xi", "u", "state", "bound", "exceeds_one"], precision)?;
    let mut warnings = Vec::new();
    for &b in &retentions {
        let terms = scenario.terms_at(b)?;
        let result = match solve_adjustment(&inputs.model, &terms) {
            Ok(r) => r,
            Err(Error::NoPositiveRoot { .. }) => {
                warnings.push(format!("warning: b={b}: net-profit condition fails, no adjustment coefficient; skipped"));
                continue;
            }
            Err(e) => return Err(e.into()),
        };
        for &s in &inputs.states {
            for &u in capitals {
                let bound = if scenario.lundberg.allow_negative_rates {
                    upper_bound_allowing_negative_rates(u, s, &result, &inputs.chain)?
                } else {
                    upper_bound(u, s, &result, &inputs.chain)?
                };
                out.row([
                    out.num(b),
                    out.num(result.adjustment),
                    out.num(result.xi),
                    out.num(u),
                    (s + 1).to_string(),
                    out.num(bound.value),
                    bound.exceeds_one.to_string(),
                ])?;
            }
        }
    }
    out.finish(warnings)
}

fn asymptotic(scenario: &Scenario, precision: Precision) -> Result<CommandOutput, CliError> {
    let inputs = inputs(scenario)?;
    let Some(alpha) = inputs.model.tail_index() else {
        return Err(Error::Unsupported(format!(
            "the asymptotic approximation needs regularly varying claims, {} claims are light-tailed",
            inputs.model.name()
        ))
        .into());
    };
    let section = &scenario.asymptotic;
    if section.horizon == 0 {
        return Err(CliError::field("asymptotic.horizon", "horizon must be at least 1"));
    }
    let retentions = match &section.retentions {
        Some(r) => {
            check_retentions("asymptotic.retentions", r)?;
            r.clone()
        }
        None => scenario.retentions()?,
    };
    let n = section.horizon;
    let coeffs = coefficients(&inputs.chain, alpha, n)?;

    let mut out = Csv::new(&["u", "b", "n", "state", "psi", "approx", "ratio"], precision)?;
    let mut warnings = Vec::new();
    for &b in &retentions {
        let table = table_for(scenario, &inputs, b, n, &section.capitals)?;
        warnings.extend(net_profit_warning(&table, b));
        let retained = inputs.model.retained(b)?;
        for &s in &inputs.states {
            for p in convergence_ratio(&table, &coeffs, &retained, &section.capitals, s)? {
                out.row([
                    out.num(p.capital),
                    out.num(b),
                    n.to_string(),
                    (s + 1).to_string(),
                    out.num(p.psi),
                    out.num(p.approx),
                    p.ratio.map(|r| out.num(r)).unwrap_or_default(),
                ])?;
            }
        }
    }
    out.finish(warnings)
}

fn retention(scenario: &Scenario, precision: Precision) -> Result<CommandOutput, CliError> {
    let inputs = inputs(scenario)?;
    let horizons = scenario.horizons()?;
    let retentions = scenario.retentions()?;
    let capitals = &scenario.grid.capitals;
    let tolerance = scenario.retention.tolerance;
    if !(tolerance > 0.0 && tolerance <= 1.0) {
        return Err(CliError::field("retention.tolerance", "must lie in (0, 1]"));
    }
    let max_n = *horizons.iter().max().expect("nonempty");

    let tables = retentions
        .iter()
        .map(|&b| table_for(scenario, &inputs, b, max_n, capitals))
        .collect::<Result<Vec<_>, _>>()?;

    let mut header = vec!["u".to_string()];
    for &n in &horizons {
        for &s in &inputs.states {
            header.push(format!("n{n}_state{}", s + 1));
        }
    }
    let header: Vec<&str> = header.iter().map(String::as_str).collect();
    let mut out = Csv::new(&header, precision)?;
    let mut warnings = Vec::new();

    for &u in capitals {
        let mut row = vec![out.num(u)];
        for &n in &horizons {
            for &s in &inputs.states {
                let profile = retentions
                    .iter()
                    .zip(&tables)
                    .map(|(&b, t)| t.psi(n, s, u).map(|psi| (b, psi)))
                    .collect::<Result<Vec<_>, _>>()?;
                let certificate = select_retention(profile, tolerance);
                if !certificate.verify() {
                    return Err(Error::Domain(format!("retention certificate failed at u={u}, n={n}, state={}", s + 1)).into());
                }
                let cell = match certificate.outcome {
                    RetentionOutcome::Full => "full".to_string(),
                    RetentionOutcome::Lack => "lack".to_string(),
                    RetentionOutcome::Retained(b) if scenario.retention.refine => {
                        if u < 1.0 {
                            warnings.push(format!(
                                "warning: u={u}: refinement needs u >= 1, reporting the grid retention {b}"
                            ));
                            out.num(b)
                        } else {
                            let query = RetentionQuery { tolerance, horizon: n, capital: u, state: s, retentions: retentions.clone() };
                            let config = scenario.engine_config(n, vec![u])?;
                            let terms = scenario.terms_template()?;
                            let refined = refine_retention(&query, &certificate, &inputs.model, &terms, &inputs.chain, &config)?;
                            out.num(refined.unwrap_or(b))
                        }
                    }
                    RetentionOutcome::Retained(b) => out.num(b),
                };
                row.push(cell);
            }
        }
        out.row(&row)?;
    }
    out.finish(warnings)
}

fn simulate(scenario: &Scenario, options: &Options) -> Result<CommandOutput, CliError> {
    let inputs = inputs(scenario)?;
    let section = &scenario.simulate;
    let horizon = match section.horizon {
        Some(n) => n,
        None => *scenario.horizons()?.iter().max().expect("nonempty"),
    };
    if horizon == 0 {
        return Err(CliError::field("simulate.horizon", "horizon must be at least 1"));
    }
    if section.paths == 0 {
        return Err(CliError::field("simulate.paths", "at least one path is required"));
    }
    if !(section.capital.is_finite() && section.capital >= 0.0) {
        return Err(CliError::field("simulate.capital", "must be finite and nonnegative"));
    }
    if section.state == 0 || section.state > inputs.chain.len() {
        return Err(CliError::field("simulate.state", &format!("state {} outside 1..={}", section.state, inputs.chain.len())));
    }
    let terms = scenario.terms_at(section.retention).map_err(|_| {
        CliError::field("simulate.retention", &format!("{} outside (0, 1]", section.retention))
    })?;
    let spec = SimulationSpec {
        paths: section.paths,
        horizon,
        capital: section.capital,
        state: section.state - 1,
        seed: options.seed.unwrap_or(section.seed),
    };
    let result = simulate::run(&spec, &inputs.model, &terms, &inputs.chain)?;

    let mut out = Csv::new(&["n", "estimate", "stderr", "paths", "seed"], options.precision)?;
    for k in 1..=horizon {
        out.row([
            k.to_string(),
            out.num(result.estimate(k)),
            out.num(result.std_error(k)),
            result.paths.to_string(),
            result.seed.to_string(),
        ])?;
    }
    out.finish(Vec::new())
}
