//! `ubound`: reproduce the spin and oscillator scenarios and evaluate
//! uncertainty bounds on user-supplied problems.
//!
//! Exit codes: 0 success, 1 I/O or parse error, 2 precondition violation,
//! 3 table mismatch (`table1` only).

mod output;

use std::f64::consts::PI;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use ubound::bounds::BoundReport;
use ubound::oscillator::{
    deviation_function, half_line_product_bound, scan_bound17, split_aux_bound, DeviationKind,
};
use ubound::problem::Problem;
use ubound::quadrature::Grid;
use ubound::spin::{self, SystemKind};

use output::{Cell, Format, Table};

#[derive(Parser)]
#[command(name = "ubound", version, about = "Variance-based uncertainty bounds")]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Output format.
    #[arg(long, value_enum, default_value = "csv", global = true)]
    format: Format,
    /// Write to this file instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Spin-1 comparison of all bounds on the (1,1,1)/sqrt3 state.
    Table1 {
        /// Append the product, variance-sum, sum and combined headline values.
        #[arg(long)]
        with_headline: bool,
        /// Largest accepted |computed - closed form|.
        #[arg(long, default_value_t = 1e-12)]
        tolerance: f64,
    },
    /// Angle sweep of the spin-1 or spin-1/2 experiment state.
    Sweep {
        #[arg(long, value_parser = parse_system)]
        system: SystemKind,
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        phi_start: f64,
        #[arg(long, default_value_t = PI, allow_negative_numbers = true)]
        phi_end: f64,
        /// Number of angles, both ends included; 1 evaluates `phi_start` only.
        #[arg(long, default_value_t = 181)]
        steps: usize,
    },
    /// Trial-state scan for x^2 and p on the oscillator ground state.
    Oscillator {
        #[arg(long, default_value_t = 0.1)]
        eta_min: f64,
        #[arg(long, default_value_t = 10.0)]
        eta_max: f64,
        #[arg(long, default_value_t = 100)]
        steps: usize,
        /// Quadrature panels per half unit length.
        #[arg(long, default_value_t = 1)]
        density: usize,
    },
    /// Evaluate the relations requested in a JSON problem file.
    Bounds { file: PathBuf },
}

fn parse_system(s: &str) -> Result<SystemKind, String> {
    s.parse().map_err(|e: ubound::Error| e.to_string())
}

/// Failure with its exit code.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn io(message: impl Into<String>) -> Self {
        Self {
            code: 1,
            message: message.into(),
        }
    }

    fn precondition(message: impl Into<String>) -> Self {
        Self {
            code: 2,
            message: message.into(),
        }
    }
}

/// A table plus the exit code the run should end with after writing it.
struct Run {
    table: Table,
    code: u8,
    notes: Vec<String>,
}

impl Run {
    fn ok(table: Table) -> Self {
        Self {
            table,
            code: 0,
            notes: Vec::new(),
        }
    }
}

fn report_cells(r: &BoundReport) -> Vec<Cell> {
    vec![
        r.lhs.into(),
        r.rhs.into(),
        r.gap().into(),
        r.valid.into(),
        r.saturated.into(),
        r.sign_choice.map(|s| s.to_string()).into(),
        r.lambda.into(),
        r.canonical.into(),
        r.aux_ids.join(" ").into(),
    ]
}

const REPORT_COLUMNS: [&str; 9] = ["lhs", "rhs", "gap", "valid", "saturated", "sign_choice", "lambda", "canonical", "aux"];

fn table1(with_headline: bool, tolerance: f64) -> Result<Run, Failure> {
    let t = spin::table1_scenario().map_err(|e| Failure::precondition(e.to_string()))?;
    let mut columns = vec!["row", "exact_form", "expected", "abs_error", "match"];
    columns.extend(REPORT_COLUMNS);
    let mut table = Table::new(&columns);
    let mut mismatches = Vec::new();
    for row in &t.rows {
        let err = row.abs_error();
        let ok = err <= tolerance;
        if !ok {
            mismatches.push(format!("row {}: |{} - {}| = {err:e}", row.label, row.report.rhs, row.expected));
        }
        let mut cells: Vec<Cell> = vec![row.label.into(), row.exact_form.into(), row.expected.into(), err.into(), ok.into()];
        cells.extend(report_cells(&row.report));
        table.push(cells);
    }
    if with_headline {
        let h = &t.headline;
        let (s2, s3) = (2f64.sqrt(), 3f64.sqrt());
        let lines = [
            ("headline product", "1/6", 1.0 / 6.0, h.product, h.actual_product),
            ("headline variance sum", "32/81", 32.0 / 81.0, h.variance_sum, h.actual_variance_sum),
            ("headline sum", "(sqrt3+2sqrt2)/6", (s3 + 2.0 * s2) / 6.0, h.sum, h.actual_sum),
            ("headline combined", "sqrt(59/81)", (59.0f64 / 81.0).sqrt(), h.combined, h.actual_sum),
        ];
        for (label, form, expected, value, actual) in lines {
            let err = (value - expected).abs();
            if err > tolerance {
                mismatches.push(format!("{label}: |{value} - {expected}| = {err:e}"));
            }
            let mut cells: Vec<Cell> = vec![label.into(), form.into(), expected.into(), err.into(), (err <= tolerance).into()];
            cells.extend([
                actual.into(),
                value.into(),
                (actual - value).into(),
                (value <= actual + 1e-10).into(),
                ((actual - value).abs() <= 1e-8).into(),
                Cell::Empty,
                Cell::Empty,
                true.into(),
                Cell::Empty,
            ]);
            table.push(cells);
        }
    }
    let code = if mismatches.is_empty() { 0 } else { 3 };
    Ok(Run {
        table,
        code,
        notes: mismatches,
    })
}

fn sweep(system: SystemKind, start: f64, end: f64, steps: usize) -> Result<Run, Failure> {
    if !(start.is_finite() && end.is_finite()) || steps == 0 || (steps > 1 && end <= start) {
        return Err(Failure::precondition(format!(
            "invalid angle range: start {start}, end {end}, steps {steps} (need end > start and steps >= 1)"
        )));
    }
    let phis = spin::phi_grid(start, end, steps);
    let rows = spin::sweep(system, &phis).map_err(|e| Failure::precondition(e.to_string()))?;
    let mut table = Table::new(&[
        "phi",
        "mean_a",
        "mean_b",
        "var_a",
        "var_b",
        "var_sum",
        "product",
        "robertson_rhs",
        "robertson_saturated",
        "sum_4a_rhs",
        "sum_4b_rhs",
        "case",
        "case2",
        "bypass_delta",
        "bypass_ok",
    ]);
    for r in rows {
        table.push(vec![
            r.phi.into(),
            r.mean_a.into(),
            r.mean_b.into(),
            r.var_a.into(),
            r.var_b.into(),
            (r.var_a + r.var_b).into(),
            r.product.into(),
            r.robertson_rhs.into(),
            r.robertson_saturated.into(),
            r.sum_4a_rhs.into(),
            r.sum_4b_rhs.into(),
            r.case.as_str().into(),
            r.case.is_case2().into(),
            r.bypass_delta.into(),
            r.bypass_ok.into(),
        ]);
    }
    Ok(Run::ok(table))
}

fn oscillator(eta_min: f64, eta_max: f64, steps: usize, density: usize) -> Result<Run, Failure> {
    if !(eta_min > 0.0 && eta_max > eta_min && eta_max.is_finite()) || steps < 2 || density == 0 {
        return Err(Failure::precondition(format!(
            "invalid scan: need 0 < eta_min < eta_max, steps >= 2, density >= 1 (got {eta_min}, {eta_max}, {steps}, {density})"
        )));
    }
    let grid = Grid::standard_with_density(density);
    let etas: Vec<f64> = (0..steps)
        .map(|k| eta_min + (eta_max - eta_min) * k as f64 / (steps - 1) as f64)
        .collect();
    let fail = |e: ubound::Error| Failure::precondition(e.to_string());
    let scan = scan_bound17(&etas, &grid).map_err(fail)?;
    let split = split_aux_bound(&grid).map_err(fail)?;
    let dev_a = deviation_function(DeviationKind::XSquared, &grid).map_err(fail)?;
    let dev_b = deviation_function(DeviationKind::P, &grid).map_err(fail)?;
    let half = half_line_product_bound(&dev_a, &dev_b).map_err(fail)?;

    let mut table = Table::new(&["quantity", "eta", "value"]);
    for &(eta, v) in &scan {
        table.push(vec!["trial_bound".into(), eta.into(), v.into()]);
    }
    let (best_eta, best) = scan
        .iter()
        .copied()
        .fold((f64::NAN, f64::MIN), |acc, cur| if cur.1 > acc.1 { cur } else { acc });
    table.push(vec!["trial_bound_max".into(), best_eta.into(), best.into()]);
    table.push(vec!["split_aux".into(), Cell::Empty, split.into()]);
    table.push(vec!["half_line".into(), Cell::Empty, half.into()]);
    // dx^2 dp = (1/sqrt2)(1/sqrt2) on the ground state
    table.push(vec!["lhs".into(), Cell::Empty, 0.5.into()]);
    Ok(Run::ok(table))
}

fn bounds(file: &PathBuf) -> Result<Run, Failure> {
    let text = std::fs::read_to_string(file).map_err(|e| Failure::io(format!("{}: {e}", file.display())))?;
    let problem = Problem::from_json(&text).map_err(|e| Failure::io(format!("{}: {e}", file.display())))?;
    let result = problem.evaluate();
    let mut columns = vec!["relation", "observables", "case"];
    columns.extend(REPORT_COLUMNS);
    columns.push("error");
    let mut table = Table::new(&columns);
    let case = result.case.map(|c| c.as_str());
    let mut notes = Vec::new();
    let mut other_error = false;
    for o in &result.outcomes {
        let mut cells: Vec<Cell> = vec![o.relation.as_str().into(), o.observables.join(" ").into(), case.into()];
        match &o.report {
            Some(r) => cells.extend(report_cells(r)),
            None => cells.extend(std::iter::repeat_n(Cell::Empty, REPORT_COLUMNS.len())),
        }
        cells.push(o.error.clone().into());
        table.push(cells);
        if let Some(e) = &o.error {
            notes.push(format!("{}: {e}", o.relation));
            other_error |= !o.precondition_violated;
        }
    }
    let code = if other_error {
        1
    } else if result.any_precondition_violated() {
        2
    } else {
        0
    };
    Ok(Run { table, code, notes })
}

fn run(cli: &Cli) -> Result<Run, Failure> {
    match &cli.command {
        Command::Table1 {
            with_headline,
            tolerance,
        } => table1(*with_headline, *tolerance),
        Command::Sweep {
            system,
            phi_start,
            phi_end,
            steps,
        } => sweep(*system, *phi_start, *phi_end, *steps),
        Command::Oscillator {
            eta_min,
            eta_max,
            steps,
            density,
        } => oscillator(*eta_min, *eta_max, *steps, *density),
        Command::Bounds { file } => bounds(file),
    }
}

fn emit(table: &Table, common: &Common) -> io::Result<()> {
    match &common.out {
        Some(path) => {
            let mut w = BufWriter::new(File::create(path)?);
            table.write(common.format, &mut w)?;
            w.flush()
        }
        None => {
            let stdout = io::stdout();
            let mut lock = stdout.lock();
            table.write(common.format, &mut lock)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(result) => {
            if let Err(e) = emit(&result.table, &cli.common) {
                eprintln!("error: cannot write output: {e}");
                return ExitCode::from(1);
            }
            for note in &result.notes {
                eprintln!("{note}");
            }
            ExitCode::from(result.code)
        }
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
