//! Table, event and report rendering in pretty, CSV and JSON form.
//!
//! CSV and JSON always carry full-precision days. Pretty output follows the
//! printed tables: whole days as integers, long spans as `~x.y yrs`.

use std::fmt::Write as _;

use serde::Serialize;

use crate::domain::{KinematicConfig, Mode, ScheduleTable, DEFAULT_YEAR_LENGTH_DAYS};
use crate::simulator::{Simulation, VerificationReport};

/// Pretty output switches to years above this many days.
pub const DEFAULT_YEAR_THRESHOLD_DAYS: f64 = 400.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Pretty,
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OutputSpec {
    pub format: Format,
    pub year_threshold_days: f64,
    pub year_length_days: f64,
}

impl Default for OutputSpec {
    fn default() -> Self {
        OutputSpec {
            format: Format::Pretty,
            year_threshold_days: DEFAULT_YEAR_THRESHOLD_DAYS,
            year_length_days: DEFAULT_YEAR_LENGTH_DAYS,
        }
    }
}

impl OutputSpec {
    /// A span of days as printed in the tables.
    pub fn display_days(&self, days: f64) -> String {
        if days > self.year_threshold_days {
            return format!("~{:.1} yrs", days / self.year_length_days);
        }
        let whole = days.round();
        if (days - whole).abs() <= 1e-9 * days.abs().max(1.0) {
            format!("{whole:.0} days")
        } else {
            format!("{days:.1} days")
        }
    }
}

/// Shortest decimal with 17 significant digits, like C's `%.17g`.
/// Parsing the result gives back the same `f64`.
pub fn g17(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let sci = format!("{x:.16e}");
    let (mantissa, exponent) = sci.split_once('e').expect("exponent present");
    let exponent: i32 = exponent.parse().expect("integer exponent");
    let negative = mantissa.starts_with('-');
    let digits: String = mantissa.chars().filter(char::is_ascii_digit).collect();

    let mut out = String::new();
    if negative {
        out.push('-');
    }
    if !(-4..17).contains(&exponent) {
        let (lead, rest) = digits.split_at(1);
        let rest = rest.trim_end_matches('0');
        out.push_str(lead);
        if !rest.is_empty() {
            out.push('.');
            out.push_str(rest);
        }
        let _ = write!(out, "e{exponent}");
        return out;
    }
    if exponent < 0 {
        out.push_str("0.");
        out.extend(std::iter::repeat_n('0', (-exponent - 1) as usize));
        out.push_str(digits.trim_end_matches('0'));
    } else {
        let point = exponent as usize + 1;
        let (int_part, frac_part) = digits.split_at(point);
        out.push_str(int_part);
        let frac_part = frac_part.trim_end_matches('0');
        if !frac_part.is_empty() {
            out.push('.');
            out.push_str(frac_part);
        }
    }
    out
}

#[derive(Serialize)]
struct ConfigJson {
    mode: Mode,
    convoy_speed: f64,
    courier_speed: f64,
    q: f64,
}

impl From<&KinematicConfig> for ConfigJson {
    fn from(config: &KinematicConfig) -> Self {
        ConfigJson {
            mode: config.mode(),
            convoy_speed: config.convoy_speed(),
            courier_speed: config.courier_speed(),
            q: config.q(),
        }
    }
}

#[derive(Serialize)]
#[serde(untagged)]
enum RecordJson {
    Classical {
        messenger: u32,
        tour: u32,
        city_frame_days: f64,
        city_arrival_days: f64,
    },
    Relativistic {
        messenger: u32,
        tour: u32,
        city_frame_days: f64,
        caravan_proper_days: f64,
        messenger_proper_days: f64,
        messenger_at_city_proper_days: f64,
    },
}

pub const CLASSICAL_CSV_HEADER: &str = "messenger,tour,city_frame_days,city_arrival_days";
pub const RELATIVISTIC_CSV_HEADER: &str = "messenger,tour,city_frame_days,caravan_proper_days,messenger_proper_days,messenger_at_city_proper_days";
pub const SIMULATION_CSV_HEADER: &str = "messenger,kind,time_city_days,position,proper_days";
pub const EM_LIMIT_CSV_HEADER: &str = "tour,first_order_days,exact_days,abs_error_days,rel_error";

fn record_rows(table: &ScheduleTable) -> Vec<RecordJson> {
    let mode = table.config().mode();
    table
        .records()
        .iter()
        .map(|r| match mode {
            Mode::Classical => RecordJson::Classical {
                messenger: r.courier_index,
                tour: r.tour,
                city_frame_days: r.city_frame,
                city_arrival_days: r.courier_proper_at_city,
            },
            Mode::Relativistic => RecordJson::Relativistic {
                messenger: r.courier_index,
                tour: r.tour,
                city_frame_days: r.city_frame,
                caravan_proper_days: r.caravan_proper,
                messenger_proper_days: r.courier_proper,
                messenger_at_city_proper_days: r.courier_proper_at_city,
            },
        })
        .collect()
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("plain data serializes");
    text.push('\n');
    text
}

pub fn schedule_csv(table: &ScheduleTable) -> String {
    let mut out = String::new();
    match table.config().mode() {
        Mode::Classical => {
            out.push_str(CLASSICAL_CSV_HEADER);
            out.push('\n');
            for r in table.records() {
                let _ = writeln!(
                    out,
                    "{},{},{},{}",
                    r.courier_index,
                    r.tour,
                    g17(r.city_frame),
                    g17(r.courier_proper_at_city)
                );
            }
        }
        Mode::Relativistic => {
            out.push_str(RELATIVISTIC_CSV_HEADER);
            out.push('\n');
            for r in table.records() {
                let _ = writeln!(
                    out,
                    "{},{},{},{},{},{}",
                    r.courier_index,
                    r.tour,
                    g17(r.city_frame),
                    g17(r.caravan_proper),
                    g17(r.courier_proper),
                    g17(r.courier_proper_at_city)
                );
            }
        }
    }
    out
}

pub fn schedule_json(table: &ScheduleTable) -> String {
    #[derive(Serialize)]
    struct Doc {
        config: ConfigJson,
        records: Vec<RecordJson>,
        year_length_days: f64,
    }
    to_json(&Doc {
        config: table.config().into(),
        records: record_rows(table),
        year_length_days: table.year_length_days(),
    })
}

fn render_grid(header: &[String], rows: &[Vec<String>]) -> String {
    let mut widths: Vec<usize> = header.iter().map(String::len).collect();
    for row in rows {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.len());
        }
    }
    let line = |cells: &[String]| {
        cells
            .iter()
            .zip(&widths)
            .map(|(c, w)| format!("{c:<w$}"))
            .collect::<Vec<_>>()
            .join(" | ")
            .trim_end()
            .to_string()
    };
    let mut out = line(header);
    out.push('\n');
    out.push_str(
        &widths
            .iter()
            .map(|w| "-".repeat(*w))
            .collect::<Vec<_>>()
            .join("-+-"),
    );
    out.push('\n');
    for row in rows {
        out.push_str(&line(row));
        out.push('\n');
    }
    out
}

pub fn schedule_pretty(table: &ScheduleTable, spec: &OutputSpec) -> String {
    let config = table.config();
    match config.mode() {
        Mode::Classical => {
            let mut out = format!(
                "Departures from the caravan, q = {} (V_c = {}, V_m = {})\n\n",
                g17(config.q()),
                g17(config.convoy_speed()),
                g17(config.courier_speed())
            );
            let mut header = vec!["q = ".to_string() + &g17(config.q())];
            header.extend(
                table
                    .couriers()
                    .iter()
                    .map(|c| format!("Mess. {}", c.index())),
            );
            let rows: Vec<Vec<String>> = table
                .records()
                .chunks(table.couriers().len())
                .enumerate()
                .map(|(row, records)| {
                    let mut cells = vec![format!("T{}", row + 1)];
                    cells.extend(records.iter().map(|r| spec.display_days(r.city_frame)));
                    cells
                })
                .collect();
            out.push_str(&render_grid(&header, &rows));
            out
        }
        Mode::Relativistic => {
            let mut out = String::new();
            for (k, courier) in table.couriers().iter().enumerate() {
                if k > 0 {
                    out.push('\n');
                }
                let _ = writeln!(
                    out,
                    "Messenger {}, T1 = {} days, beta_c = {}, beta_m = {}, q = {}\n",
                    courier.index(),
                    g17(courier.first_departure()),
                    g17(config.convoy_speed()),
                    g17(config.courier_speed()),
                    g17(config.q())
                );
                let header: Vec<String> = [
                    "n",
                    "city frame",
                    "messenger proper",
                    "caravan proper",
                    "messenger at City",
                ]
                .iter()
                .map(|s| s.to_string())
                .collect();
                let rows: Vec<Vec<String>> = table
                    .courier_records(courier.index())
                    .into_iter()
                    .map(|r| {
                        vec![
                            r.tour.to_string(),
                            spec.display_days(r.city_frame),
                            spec.display_days(r.courier_proper),
                            spec.display_days(r.caravan_proper),
                            spec.display_days(r.courier_proper_at_city),
                        ]
                    })
                    .collect();
                out.push_str(&render_grid(&header, &rows));
            }
            out
        }
    }
}

pub fn render_schedule(table: &ScheduleTable, spec: &OutputSpec) -> String {
    match spec.format {
        Format::Pretty => schedule_pretty(table, spec),
        Format::Csv => schedule_csv(table),
        Format::Json => schedule_json(table),
    }
}

#[derive(Serialize)]
struct EventJson {
    messenger: u32,
    kind: &'static str,
    time_city_days: f64,
    position: f64,
    proper_days: f64,
}

pub fn render_simulation(config: &KinematicConfig, sim: &Simulation, spec: &OutputSpec) -> String {
    let rows = sim.iter().map(|(e, c)| EventJson {
        messenger: e.courier_index,
        kind: e.kind.as_str(),
        time_city_days: e.time_city,
        position: e.position,
        proper_days: c.elapsed_proper,
    });
    match spec.format {
        Format::Csv => {
            let mut out = String::from(SIMULATION_CSV_HEADER);
            out.push('\n');
            for r in rows {
                let _ = writeln!(
                    out,
                    "{},{},{},{},{}",
                    r.messenger,
                    r.kind,
                    g17(r.time_city_days),
                    g17(r.position),
                    g17(r.proper_days)
                );
            }
            out
        }
        Format::Json => {
            #[derive(Serialize)]
            struct Doc {
                config: ConfigJson,
                events: Vec<EventJson>,
            }
            to_json(&Doc {
                config: config.into(),
                events: rows.collect(),
            })
        }
        Format::Pretty => {
            let header: Vec<String> = [
                "messenger",
                "event",
                "city time",
                "position",
                "courier clock",
            ]
            .iter()
            .map(|s| s.to_string())
            .collect();
            let rows: Vec<Vec<String>> = rows
                .map(|r| {
                    vec![
                        r.messenger.to_string(),
                        r.kind.to_string(),
                        spec.display_days(r.time_city_days),
                        format!("{:.4}", r.position),
                        spec.display_days(r.proper_days),
                    ]
                })
                .collect();
            format!(
                "{} simulation, q = {}\n\n{}",
                config.mode(),
                g17(config.q()),
                render_grid(&header, &rows)
            )
        }
    }
}

/// First-order light-courier City time beside the exact value.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EmLimitRow {
    pub tour: u32,
    pub first_order_days: f64,
    pub exact_days: f64,
    pub abs_error_days: f64,
    pub rel_error: f64,
}

pub fn render_em_limit(beta_c: f64, t1: f64, rows: &[EmLimitRow], spec: &OutputSpec) -> String {
    match spec.format {
        Format::Csv => {
            let mut out = String::from(EM_LIMIT_CSV_HEADER);
            out.push('\n');
            for r in rows {
                let _ = writeln!(
                    out,
                    "{},{},{},{},{}",
                    r.tour,
                    g17(r.first_order_days),
                    g17(r.exact_days),
                    g17(r.abs_error_days),
                    g17(r.rel_error)
                );
            }
            out
        }
        Format::Json => {
            #[derive(Serialize)]
            struct Doc<'a> {
                beta_c: f64,
                t1_days: f64,
                rows: &'a [EmLimitRow],
            }
            to_json(&Doc {
                beta_c,
                t1_days: t1,
                rows,
            })
        }
        Format::Pretty => {
            let header: Vec<String> = ["n", "first order", "exact", "abs error", "rel error"]
                .iter()
                .map(|s| s.to_string())
                .collect();
            let body: Vec<Vec<String>> = rows
                .iter()
                .map(|r| {
                    vec![
                        r.tour.to_string(),
                        format!("{:.6}", r.first_order_days),
                        format!("{:.6}", r.exact_days),
                        format!("{:.3e}", r.abs_error_days),
                        format!("{:.3e}", r.rel_error),
                    ]
                })
                .collect();
            format!(
                "Light couriers, beta_c = {}, T1 = {} days (City-frame days)\n\n{}",
                g17(beta_c),
                g17(t1),
                render_grid(&header, &body)
            )
        }
    }
}

pub fn render_report(runs: &[String], report: &VerificationReport, spec: &OutputSpec) -> String {
    match spec.format {
        Format::Pretty => {
            let mut out = String::new();
            for run in runs {
                let _ = writeln!(out, "{run}");
            }
            let _ = writeln!(out, "{report}");
            out
        }
        Format::Csv => {
            let mut out = String::from("check,compared,max_relative_error,exceedances,passed\n");
            for c in &report.checks {
                let _ = writeln!(
                    out,
                    "{},{},{},{},{}",
                    c.kind.as_str(),
                    c.compared,
                    g17(c.max_relative_error),
                    c.exceedances,
                    c.passed()
                );
            }
            out
        }
        Format::Json => {
            #[derive(Serialize)]
            struct Doc<'a> {
                runs: &'a [String],
                passed: bool,
                report: &'a VerificationReport,
            }
            to_json(&Doc {
                runs,
                passed: report.passed(),
                report,
            })
        }
    }
}
