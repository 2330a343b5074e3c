//! Job configuration and the commands behind the `cvdecomp` binary.
//!
//! Every command returns the text to print; files go to `out` when it is set.
//! Exit codes: 0 ok, 1 other failure, 2 parse error, 3 budget unreachable,
//! 4 verification failure.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::{parse_polynomial, ParseError, QuadPolynomial};
use crate::compiler::{compile_with, CompileError, CompileOptions};
use crate::fock::{sequence_distance, DistanceReport, FockError, FockSpace, DEFAULT_SUBSPACE};
use crate::rational::q_from_f64;
use crate::rewrite::{conjugation_identity_check, exact_pdc_sequence, exact_x2_sequence};
use crate::sequence::{Gate, GateSequence, SequenceError};
use crate::solver::{
    build_system, homotopy_solve, newton_solve, reduce_dependent, refine_first_step, refine_second_step, table,
    verify_scheme, Ansatz, ApproximationScheme, ConstraintSystem, Family, HomotopyOptions, SolverError, TABLE_NAMES,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    Solve,
    Compile,
    Verify,
    Tables,
    Count,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Identity {
    X2,
    Pdc,
    Fourier,
    Conjugation,
}

/// Everything a command needs; loadable from TOML.
///
/// Defaults: `t = 0.1`, `budget = 1e-3`, second-order splitting, subspace 6,
/// Fock dimension 64 for one mode and 24 per mode for two, seed 0, 256 homotopy paths,
/// verification threshold `1e-5`, JSON output.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JobConfig {
    pub command: Command,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hamiltonian: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hamiltonian_file: Option<PathBuf>,
    #[serde(default = "default_t")]
    pub t: f64,
    #[serde(default = "default_budget")]
    pub budget: f64,
    /// Restrict approximation schemes to this order.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub order: Option<u32>,
    #[serde(default = "default_split_order")]
    pub split_order: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fock_dim: Option<usize>,
    #[serde(default = "default_subspace")]
    pub subspace: usize,
    #[serde(default)]
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
    #[serde(default)]
    pub format: Format,
    #[serde(default = "default_threshold")]
    pub threshold: f64,
    /// `solve`: refine this printed table instead of solving from scratch.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub table: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub family: Option<Family>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pairs: Option<usize>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub pins: BTreeMap<String, f64>,
    #[serde(default = "default_paths")]
    pub paths: usize,
    /// `verify`: identity to check.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub identity: Option<Identity>,
    /// `verify`: JSON-lines sequence checked against `exp(i t H)`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sequence: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    /// `tables`: a single table name.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub which: Option<String>,
}

fn default_t() -> f64 {
    0.1
}
fn default_budget() -> f64 {
    1e-3
}
fn default_split_order() -> u32 {
    2
}
fn default_subspace() -> usize {
    DEFAULT_SUBSPACE
}
fn default_threshold() -> f64 {
    1e-5
}
fn default_paths() -> usize {
    256
}

impl JobConfig {
    pub fn new(command: Command) -> Self {
        Self {
            command,
            hamiltonian: None,
            hamiltonian_file: None,
            t: default_t(),
            budget: default_budget(),
            order: None,
            split_order: default_split_order(),
            fock_dim: None,
            subspace: default_subspace(),
            seed: 0,
            out: None,
            format: Format::Json,
            threshold: default_threshold(),
            table: None,
            family: None,
            pairs: None,
            pins: BTreeMap::new(),
            paths: default_paths(),
            identity: None,
            sequence: None,
            k: None,
            alpha: None,
            which: None,
        }
    }

    pub fn from_toml(src: &str) -> Result<Self, CliError> {
        toml::from_str(src).map_err(|e| CliError::Parse(format!("config: {e}")))
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        Self::from_toml(&read(path)?)
    }

    /// The Hamiltonian from `hamiltonian` or `hamiltonian_file`.
    pub fn read_hamiltonian(&self) -> Result<QuadPolynomial, CliError> {
        let src = match (&self.hamiltonian, &self.hamiltonian_file) {
            (Some(h), _) => h.clone(),
            (None, Some(p)) => read(p)?,
            (None, None) => return Err(CliError::Usage("a Hamiltonian is required (--hamiltonian or a file)".into())),
        };
        Ok(parse_polynomial(&src)?)
    }

    fn space(&self, modes: usize) -> Result<FockSpace, CliError> {
        Ok(match self.fock_dim {
            Some(n) => FockSpace::new(n, modes)?,
            None => FockSpace::default_for(modes)?,
        })
    }
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Syntax(#[from] ParseError),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Compile(CompileError),
    #[error("budget unreachable: {0}")]
    BudgetUnreachable(String),
    #[error("verification failed: {0}")]
    VerificationFailed(String),
    #[error(transparent)]
    Solver(#[from] SolverError),
    #[error(transparent)]
    Fock(#[from] FockError),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Syntax(_) | CliError::Parse(_) => 2,
            CliError::BudgetUnreachable(_) => 3,
            CliError::VerificationFailed(_) => 4,
            _ => 1,
        }
    }
}

impl From<CompileError> for CliError {
    fn from(e: CompileError) -> Self {
        match e {
            CompileError::BudgetUnreachable { .. } => CliError::BudgetUnreachable(e.to_string()),
            other => CliError::Compile(other),
        }
    }
}

impl From<SequenceError> for CliError {
    fn from(e: SequenceError) -> Self {
        CliError::Parse(e.to_string())
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|source| CliError::Io { path: path.to_owned(), source })
}

fn write_out(config: &JobConfig, name: &str, contents: &str) -> Result<(), CliError> {
    if let Some(dir) = &config.out {
        fs::create_dir_all(dir).map_err(|source| CliError::Io { path: dir.clone(), source })?;
        let path = dir.join(name);
        fs::write(&path, contents).map_err(|source| CliError::Io { path, source })?;
    }
    Ok(())
}

fn json<T: Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("serializable") + "\n"
}

pub fn run(config: &JobConfig) -> Result<String, CliError> {
    match config.command {
        Command::Solve => cmd_solve(config),
        Command::Compile => cmd_compile(config),
        Command::Verify => cmd_verify(config),
        Command::Tables => cmd_tables(config),
        Command::Count => cmd_count(config),
    }
}

#[derive(Serialize)]
struct SolvedScheme {
    values: Vec<f64>,
    error_coefficient: f64,
    max_residual: f64,
}

#[derive(Serialize)]
struct SolveSummary {
    family: Family,
    order: u32,
    equations: usize,
    unknowns: Vec<String>,
    /// Pins chosen by the solver when the job gave none.
    pins: BTreeMap<String, f64>,
    paths: usize,
    solutions: Vec<SolvedScheme>,
}

/// Preferred pins first, then a fixed grid of small values.
fn default_pin_values(family: Family, count: usize) -> Vec<Vec<f64>> {
    let preferred = match family {
        Family::Commutator => [1.2, -1.0],
        Family::Nested => [0.5, -1.0],
    };
    let grid = [1.0, -1.0, 0.5, -0.5, 1.5, -1.5];
    let mut out = vec![preferred[..count].to_vec()];
    match count {
        1 => out.extend(grid.iter().map(|&a| vec![a])),
        2 => out.extend(grid.iter().flat_map(|&a| grid.iter().map(move |&b| vec![a, b]))),
        _ => {}
    }
    out
}

/// Refines a printed table, or solves `family` at `order` with `pairs` alternating
/// pairs by homotopy continuation.
///
/// Without pins, an underdetermined system gets the preferred pins or, failing that,
/// grid pins. The scheme with the smallest largest coefficient goes to `scheme.toml`.
pub fn cmd_solve(config: &JobConfig) -> Result<String, CliError> {
    if let Some(name) = &config.table {
        let fixture = table(name)?;
        let scheme = if fixture.is_second_step() {
            let base_name =
                fixture.base.clone().ok_or_else(|| CliError::Parse("second-step table without base".into()))?;
            let base = refine_first_step(&table(&base_name)?)?.scheme;
            refine_second_step(&fixture, &base, 1e-8)?.scheme
        } else {
            refine_first_step(&fixture)?.scheme
        };
        let text = scheme.to_toml();
        write_out(config, "scheme.toml", &text)?;
        return Ok(text);
    }
    let family = config.family.ok_or_else(|| CliError::Usage("solve needs --table or --family".into()))?;
    let pairs = config.pairs.ok_or_else(|| CliError::Usage("solve needs --pairs".into()))?;
    let order = config.order.ok_or_else(|| CliError::Usage("solve needs --order".into()))?;
    let mut base = Ansatz::alternating(pairs);
    for (name, v) in &config.pins {
        if !base.unknowns.contains(name) {
            return Err(CliError::Usage(format!("pin {name} names no unknown")));
        }
        let q = q_from_f64(*v).ok_or_else(|| CliError::Usage(format!("pin {name} is not finite")))?;
        base = base.pin(name, q);
    }
    let system = |ansatz: &Ansatz| -> Result<ConstraintSystem, CliError> {
        let cs = build_system(ansatz, &family.target(), order)?;
        Ok(if cs.is_square() { cs } else { reduce_dependent(&cs) })
    };
    let free = system(&base)?;
    let deficit = free.variables.len().saturating_sub(free.len());
    let candidates = if deficit == 0 {
        vec![Vec::new()]
    } else if config.pins.is_empty() && deficit <= 2 {
        let names: Vec<String> = base.active().iter().take(deficit).map(|&i| base.unknowns[i].clone()).collect();
        default_pin_values(family, deficit).into_iter().map(|v| names.iter().cloned().zip(v).collect()).collect()
    } else {
        return Err(SolverError::NotSquare { equations: free.len(), unknowns: free.variables.len() }.into());
    };
    let opts = HomotopyOptions { paths: config.paths, ..Default::default() };
    let mut pins_used = BTreeMap::new();
    let mut cs = free;
    let mut solutions = Vec::new();
    let mut schemes = Vec::new();
    for pins in candidates {
        let mut ansatz = base.clone();
        for (name, v) in &pins {
            ansatz = ansatz.pin(name, q_from_f64(*v).expect("grid values are finite"));
        }
        cs = system(&ansatz)?;
        if !cs.is_square() {
            continue;
        }
        for x in &homotopy_solve(&cs, config.seed, &opts).solutions {
            let Ok(sol) = newton_solve(&cs, x) else { continue };
            let values = ansatz.expand_values(&sol.x);
            let c: Vec<f64> = values.iter().step_by(2).copied().collect();
            let cp: Vec<f64> = values.iter().skip(1).step_by(2).copied().collect();
            let scheme =
                ApproximationScheme::from_pairs(&format!("{family}-{order}-{pairs}"), family, order, &c, &cp, "solved");
            let report = verify_scheme(&scheme);
            solutions.push(SolvedScheme {
                values,
                error_coefficient: scheme.error_coefficient,
                max_residual: report.max_residual,
            });
            schemes.push(scheme);
        }
        if !solutions.is_empty() {
            pins_used = pins.into_iter().collect();
            break;
        }
    }
    let largest = |s: &ApproximationScheme| s.gates.iter().map(|g| g.coefficient.abs()).fold(0.0, f64::max);
    let best = schemes
        .iter()
        .min_by(|a, b| largest(a).total_cmp(&largest(b)).then(a.error_coefficient.total_cmp(&b.error_coefficient)));
    if let Some(best) = best {
        write_out(config, "scheme.toml", &best.to_toml())?;
    }
    let summary = SolveSummary {
        family,
        order,
        equations: cs.len(),
        unknowns: cs.variables.clone(),
        pins: pins_used,
        paths: config.paths,
        solutions,
    };
    let text = json(&summary);
    write_out(config, "solve.json", &text)?;
    Ok(text)
}

pub fn cmd_compile(config: &JobConfig) -> Result<String, CliError> {
    let h = config.read_hamiltonian()?;
    let options = CompileOptions { split_order: config.split_order, scheme_order: config.order };
    let (seq, report) = compile_with(&h, config.t, config.budget, &options)?;
    match config.format {
        Format::Json => write_out(config, "sequence.jsonl", &seq.to_json_lines())?,
        Format::Csv => write_out(config, "sequence.csv", &seq.to_csv())?,
    }
    let text = report.to_json() + "\n";
    write_out(config, "report.json", &text)?;
    Ok(text)
}

#[derive(Serialize)]
struct CountRow {
    hamiltonian: String,
    t: f64,
    budget: f64,
    total: usize,
    fourier: usize,
    non_fourier: usize,
    naive: f64,
}

pub fn cmd_count(config: &JobConfig) -> Result<String, CliError> {
    let h = config.read_hamiltonian()?;
    let options = CompileOptions { split_order: config.split_order, scheme_order: config.order };
    let (_, r) = compile_with(&h, config.t, config.budget, &options)?;
    let row = CountRow {
        hamiltonian: h.to_string(),
        t: config.t,
        budget: config.budget,
        total: r.total,
        fourier: r.fourier_count,
        non_fourier: r.non_fourier_count,
        naive: r.naive_count,
    };
    let text = match config.format {
        Format::Json => json(&row),
        Format::Csv => format!(
            "hamiltonian,t,budget,total,fourier,non_fourier,naive\n\"{}\",{},{},{},{},{},{:e}\n",
            row.hamiltonian, row.t, row.budget, row.total, row.fourier, row.non_fourier, row.naive
        ),
    };
    write_out(config, if config.format == Format::Csv { "count.csv" } else { "count.json" }, &text)?;
    Ok(text)
}

/// One verification row: an identity or a sequence against `exp(i t H)`.
pub fn cmd_verify(config: &JobConfig) -> Result<String, CliError> {
    let d = config.subspace;
    let report = match (config.identity, &config.sequence) {
        (Some(id), _) => verify_identity(config, id, d)?,
        (None, Some(path)) => {
            let seq = GateSequence::from_json_lines(&read(path)?)?;
            let h = config.read_hamiltonian()?;
            let modes = seq.n_modes.max(h.active_modes()).max(1);
            let space = config.space(modes)?;
            let mut seq = seq;
            seq.n_modes = modes;
            let distance = sequence_distance(&space, &seq, &h, config.t, d)?;
            DistanceReport::new(&path.display().to_string(), &space, d, distance, config.threshold)
        }
        (None, None) => return Err(CliError::Usage("verify needs --identity or --sequence".into())),
    };
    let text = json(&report);
    write_out(config, "verify.json", &text)?;
    if report.pass {
        Ok(text)
    } else {
        Err(CliError::VerificationFailed(format!(
            "{}: distance {:e} >= {:e}",
            report.name, report.distance, report.threshold
        )))
    }
}

fn verify_identity(config: &JobConfig, id: Identity, d: usize) -> Result<DistanceReport, CliError> {
    let t = config.t;
    let single = |text: &str| parse_polynomial(text).expect("fixed expression");
    match id {
        Identity::X2 => {
            let space = config.space(1)?;
            let distance = sequence_distance(&space, &exact_x2_sequence(t), &single("X0^2"), t * t, d)?;
            Ok(DistanceReport::new("x2", &space, d, distance, config.threshold))
        }
        Identity::Pdc => {
            let space = config.space(2)?;
            let k = config.k.unwrap_or(t);
            let alpha = config.alpha.unwrap_or(0.5);
            let seq = exact_pdc_sequence(k, alpha);
            let distance = sequence_distance(&space, &seq, &single("X0^2 P1"), 1.5 * k * alpha * alpha, d)?;
            Ok(DistanceReport::new("pdc", &space, d, distance, config.threshold))
        }
        Identity::Fourier => {
            let space = config.space(1)?;
            let distance = sequence_distance(&space, &fourier_conjugation(t), &single("P0^3"), t, d)?;
            Ok(DistanceReport::new("fourier", &space, d, distance, config.threshold))
        }
        Identity::Conjugation => {
            let space = config.space(1)?;
            let r = conjugation_identity_check(t, &space, d)?;
            let mut report = DistanceReport::new("conjugation", &space, d, r.distance, config.threshold);
            report.pass &= r.symbolic;
            Ok(report)
        }
    }
}

/// `F exp(itX^3) F^-1`, which equals `exp(itP^3)`.
pub fn fourier_conjugation(t: f64) -> GateSequence {
    let mut seq = GateSequence::new(1);
    seq.push(Gate::Fourier(0));
    seq.push(Gate::X { mode: 0, power: 3, s: t });
    for _ in 0..3 {
        seq.push(Gate::Fourier(0));
    }
    seq
}

#[derive(Serialize)]
struct TableRow {
    name: String,
    family: Family,
    order: u32,
    gates: usize,
    printed_residual: Option<f64>,
    refined_residual: f64,
    drift: f64,
    error_coefficient: f64,
    coefficients: Vec<[f64; 2]>,
}

/// Table fixtures with printed-value residuals and refined solutions.
pub fn cmd_tables(config: &JobConfig) -> Result<String, CliError> {
    let names: Vec<&str> = match &config.which {
        Some(w) => vec![TABLE_NAMES
            .iter()
            .find(|n| n.eq_ignore_ascii_case(w))
            .ok_or_else(|| CliError::Usage(format!("no table named {w}")))?],
        None => TABLE_NAMES.to_vec(),
    };
    let mut rows = Vec::new();
    for name in names {
        let fixture = table(name)?;
        let row = if fixture.is_second_step() {
            let base_name =
                fixture.base.clone().ok_or_else(|| CliError::Parse("second-step table without base".into()))?;
            let base = refine_first_step(&table(&base_name)?)?.scheme;
            let comp = refine_second_step(&fixture, &base, 1e-8)?;
            let report = verify_scheme(&comp.scheme);
            TableRow {
                name: fixture.name.clone(),
                family: fixture.family,
                order: fixture.order,
                gates: comp.scheme.gate_count(),
                printed_residual: None,
                refined_residual: report.max_residual,
                drift: comp.drift,
                error_coefficient: comp.scheme.error_coefficient,
                coefficients: fixture.p.iter().zip(&fixture.p_prime).map(|(a, b)| [*a, *b]).collect(),
            }
        } else {
            let printed = verify_scheme(&fixture.printed_scheme());
            let refined = refine_first_step(&fixture)?;
            TableRow {
                name: fixture.name.clone(),
                family: fixture.family,
                order: fixture.order,
                gates: refined.scheme.gate_count(),
                printed_residual: Some(printed.max_residual),
                refined_residual: verify_scheme(&refined.scheme).max_residual,
                drift: refined.drift,
                error_coefficient: refined.scheme.error_coefficient,
                coefficients: fixture.c.iter().zip(&fixture.c_prime).map(|(a, b)| [*a, *b]).collect(),
            }
        };
        rows.push(row);
    }
    let text = match config.format {
        Format::Json => json(&rows),
        Format::Csv => {
            let mut s = String::from("table,index,c,c_prime\n");
            for r in &rows {
                for (i, [a, b]) in r.coefficients.iter().enumerate() {
                    s.push_str(&format!("{},{},{},{}\n", r.name, i + 1, a, b));
                }
            }
            s
        }
    };
    write_out(config, if config.format == Format::Csv { "tables.csv" } else { "tables.json" }, &text)?;
    Ok(text)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_round_trips() {
        let mut c = JobConfig::new(Command::Compile);
        c.hamiltonian = Some("(X0^2+P0^2)^2".into());
        c.pins.insert("c1".into(), 1.2);
        c.order = Some(4);
        assert_eq!(JobConfig::from_toml(&c.to_toml()).unwrap(), c);
        let minimal = JobConfig::from_toml("command = \"tables\"").unwrap();
        assert_eq!(minimal, JobConfig::new(Command::Tables));
        assert_eq!(JobConfig::from_toml("command = \"tables\"\nbogus = 1").unwrap_err().exit_code(), 2);
    }

    #[test]
    fn exit_codes() {
        let mut c = JobConfig::new(Command::Compile);
        c.hamiltonian = Some("X0^".into());
        assert_eq!(run(&c).unwrap_err().exit_code(), 2);
        c.hamiltonian = Some("X0^4".into());
        c.t = 1e6;
        c.budget = 1e-12;
        assert_eq!(run(&c).unwrap_err().exit_code(), 3);
        let mut v = JobConfig::new(Command::Verify);
        v.identity = Some(Identity::X2);
        v.t = 0.0;
        assert!(run(&v).is_ok());
        v.t = 0.3;
        v.fock_dim = Some(24);
        assert_eq!(run(&v).unwrap_err().exit_code(), 4);
    }
}
