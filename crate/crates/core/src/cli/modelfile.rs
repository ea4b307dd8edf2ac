//! Plain-text model files.
//!
//! A model file is a `key = value` block followed by `[section] <rows>`
//! tables of whitespace-separated numbers. Floats are written with 17
//! significant digits so a write/read cycle reproduces every value bit for
//! bit. Lines starting with `#` are comments.
//!
//! ```text
//! nufreg-model
//! format_version = 1
//! alpha_levels = 21
//! ...
//! [b0_curve] 21
//! # alpha lo hi
//! 0.0000000000000000e0 -1.3000000000000000e0 2.2999999999999998e0
//! ...
//! [observations] 5
//! # x_l x_m1 x_m2 x_r y_l y_m1 y_m2 y_r left right discrepancy baseline_discrepancy
//! ...
//! ```

use std::collections::BTreeMap;
use std::fmt::Write as _;

use super::CliError;
use crate::boxopt::OptimizerConfig;
use crate::coeffs::{FuzzyObservation, MembershipCurve};
use crate::fuznum::{Interval, TrapezoidalFuzzyNumber};
use crate::spreads::{ErrorTerm, FittedModel, SpreadConfig, UniformBaseline};

pub const MAGIC: &str = "nufreg-model";
pub const FORMAT_VERSION: u32 = 1;

/// Everything `fit` produces: the model, its inputs and the comparison baseline.
#[derive(Debug, Clone, PartialEq)]
pub struct ModelFile {
    pub alpha_levels: usize,
    pub optimizer: OptimizerConfig,
    pub model: FittedModel,
    pub observations: Vec<FuzzyObservation>,
    pub baseline: UniformBaseline,
}

fn num(v: f64) -> String {
    format!("{v:.16e}")
}

impl ModelFile {
    pub fn to_text(&self) -> String {
        let m = &self.model;
        let o = &self.optimizer;
        let mut s = String::new();
        let mut kv = |k: &str, v: String| {
            let _ = writeln!(s, "{k} = {v}");
        };
        kv("format_version", FORMAT_VERSION.to_string());
        kv("alpha_levels", self.alpha_levels.to_string());
        kv("seed", o.rng_seed.to_string());
        kv("multistart_count", o.multistart_count.to_string());
        kv("max_iterations", o.max_iterations.to_string());
        kv("convergence_tol", num(o.convergence_tol));
        kv("l_min", num(m.spread_config.l_min));
        kv("r_min", num(m.spread_config.r_min));
        kv("search_tol", num(m.spread_config.search_tol));
        kv("b0_c", num(m.b0_c));
        kv("b1_c", num(m.b1_c));
        kv("total_discrepancy", num(m.total_discrepancy));
        kv("baseline_left", num(self.baseline.term.left));
        kv("baseline_right", num(self.baseline.term.right));
        kv("baseline_total", num(self.baseline.total_discrepancy));

        let mut out = format!("{MAGIC}\n{s}");
        for (name, curve) in [("b0_curve", &m.b0_curve), ("b1_curve", &m.b1_curve)] {
            let _ = writeln!(out, "[{name}] {}", curve.levels().len());
            out.push_str("# alpha lo hi\n");
            for (a, c) in curve.levels() {
                let _ = writeln!(out, "{} {} {}", num(*a), num(c.lo), num(c.hi));
            }
        }
        let _ = writeln!(out, "[observations] {}", self.observations.len());
        out.push_str(
            "# x_l x_m1 x_m2 x_r y_l y_m1 y_m2 y_r left right discrepancy baseline_discrepancy\n",
        );
        for (i, obs) in self.observations.iter().enumerate() {
            let row = [
                obs.x.l,
                obs.x.m1,
                obs.x.m2,
                obs.x.r,
                obs.y.l,
                obs.y.m1,
                obs.y.m2,
                obs.y.r,
                m.error_terms[i].left,
                m.error_terms[i].right,
                m.per_obs_discrepancy[i],
                self.baseline.per_obs_discrepancy[i],
            ];
            let line: Vec<String> = row.iter().map(|v| num(*v)).collect();
            let _ = writeln!(out, "{}", line.join(" "));
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self, CliError> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

        match lines.next() {
            Some((_, MAGIC)) => {}
            _ => return Err(corrupt(format!("missing '{MAGIC}' header line"))),
        }

        let mut keys: BTreeMap<String, String> = BTreeMap::new();
        let mut sections: BTreeMap<String, Vec<Vec<f64>>> = BTreeMap::new();
        let mut current: Option<(String, usize)> = None;

        for (lineno, line) in lines {
            if let Some(rest) = line.strip_prefix('[') {
                close_section(&current, &sections)?;
                let (name, count) = rest
                    .split_once(']')
                    .ok_or_else(|| corrupt(format!("line {lineno}: malformed section header")))?;
                let count: usize = count
                    .trim()
                    .parse()
                    .map_err(|_| corrupt(format!("line {lineno}: bad section row count")))?;
                sections.insert(name.to_string(), Vec::with_capacity(count));
                current = Some((name.to_string(), count));
            } else if let Some((name, _)) = &current {
                let row = line
                    .split_whitespace()
                    .map(|t| t.parse::<f64>())
                    .collect::<Result<Vec<_>, _>>()
                    .map_err(|_| corrupt(format!("line {lineno}: bad number in [{name}]")))?;
                sections.get_mut(name).expect("section inserted").push(row);
            } else {
                let (k, v) = line
                    .split_once('=')
                    .ok_or_else(|| corrupt(format!("line {lineno}: expected key = value")))?;
                keys.insert(k.trim().to_string(), v.trim().to_string());
            }
        }
        close_section(&current, &sections)?;

        let version: u32 = get(&keys, "format_version")?;
        if version != FORMAT_VERSION {
            return Err(corrupt(format!(
                "unsupported format_version {version}, expected {FORMAT_VERSION}"
            )));
        }

        let optimizer = OptimizerConfig {
            multistart_count: get(&keys, "multistart_count")?,
            max_iterations: get(&keys, "max_iterations")?,
            convergence_tol: get(&keys, "convergence_tol")?,
            rng_seed: get(&keys, "seed")?,
        };
        let spread_config = SpreadConfig {
            l_min: get(&keys, "l_min")?,
            r_min: get(&keys, "r_min")?,
            search_tol: get(&keys, "search_tol")?,
        };

        let b0_curve = read_curve(&sections, "b0_curve")?;
        let b1_curve = read_curve(&sections, "b1_curve")?;
        let rows = section(&sections, "observations", 12)?;
        let mut observations = Vec::with_capacity(rows.len());
        let mut error_terms = Vec::with_capacity(rows.len());
        let mut per_obs = Vec::with_capacity(rows.len());
        let mut baseline_per_obs = Vec::with_capacity(rows.len());
        for (i, r) in rows.iter().enumerate() {
            let bad = |e| corrupt(format!("observation {}: {e}", i + 1));
            let x = TrapezoidalFuzzyNumber::new(r[0], r[1], r[2], r[3]).map_err(bad)?;
            let y = TrapezoidalFuzzyNumber::new(r[4], r[5], r[6], r[7]).map_err(bad)?;
            observations.push(FuzzyObservation::new(x, y));
            error_terms.push(ErrorTerm::new(r[8], r[9]).map_err(bad)?);
            per_obs.push(r[10]);
            baseline_per_obs.push(r[11]);
        }

        let model = FittedModel {
            b0_c: get(&keys, "b0_c")?,
            b1_c: get(&keys, "b1_c")?,
            b0_curve,
            b1_curve,
            error_terms,
            per_obs_discrepancy: per_obs,
            total_discrepancy: get(&keys, "total_discrepancy")?,
            spread_config,
        };
        let baseline = UniformBaseline {
            term: ErrorTerm::new(get(&keys, "baseline_left")?, get(&keys, "baseline_right")?)
                .map_err(|e| corrupt(format!("baseline term: {e}")))?,
            per_obs_discrepancy: baseline_per_obs,
            total_discrepancy: get(&keys, "baseline_total")?,
        };
        Ok(ModelFile {
            alpha_levels: get(&keys, "alpha_levels")?,
            optimizer,
            model,
            observations,
            baseline,
        })
    }
}

fn corrupt(msg: String) -> CliError {
    CliError::Parse(format!("corrupt model file: {msg}"))
}

fn close_section(
    current: &Option<(String, usize)>,
    sections: &BTreeMap<String, Vec<Vec<f64>>>,
) -> Result<(), CliError> {
    if let Some((name, count)) = current {
        let got = sections[name].len();
        if got != *count {
            return Err(corrupt(format!(
                "[{name}] declares {count} rows but has {got}"
            )));
        }
    }
    Ok(())
}

fn get<T: std::str::FromStr>(keys: &BTreeMap<String, String>, key: &str) -> Result<T, CliError> {
    let raw = keys
        .get(key)
        .ok_or_else(|| corrupt(format!("missing key '{key}'")))?;
    raw.parse()
        .map_err(|_| corrupt(format!("bad value '{raw}' for key '{key}'")))
}

fn section<'a>(
    sections: &'a BTreeMap<String, Vec<Vec<f64>>>,
    name: &str,
    width: usize,
) -> Result<&'a [Vec<f64>], CliError> {
    let rows = sections
        .get(name)
        .ok_or_else(|| corrupt(format!("missing section [{name}]")))?;
    if let Some(r) = rows.iter().find(|r| r.len() != width) {
        return Err(corrupt(format!(
            "[{name}] rows need {width} numbers, found {}",
            r.len()
        )));
    }
    Ok(rows)
}

fn read_curve(
    sections: &BTreeMap<String, Vec<Vec<f64>>>,
    name: &str,
) -> Result<MembershipCurve, CliError> {
    let levels = section(sections, name, 3)?
        .iter()
        .map(|r| (r[0], Interval { lo: r[1], hi: r[2] }))
        .collect();
    MembershipCurve::new(levels).map_err(|e| corrupt(format!("[{name}]: {e}")))
}
