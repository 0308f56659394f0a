//! Scenario data model, validation, and file I/O.
//!
//! Scenarios are stored as human-editable JSON:
//!
//! ```json
//! {
//!   "name": "two-node",
//!   "legit_nodes": [[0.0, 0.0, 0.0], [0.0, 50.0, 0.0]],
//!   "jammer": [17.0, 15.0, 4.0],
//!   "sigma2_over_p": 0.001,
//!   "pm_over_p": 1.0,
//!   "z_bounds": [8.0, 30.0],
//!   "box": [-8.5, 25.5, -25.0, 75.0]
//! }
//! ```
//!
//! `box` ([x_lo, x_hi, y_lo, y_hi]) is optional; when absent, the horizontal
//! search area defaults to the bounding box of all node positions expanded by
//! 50% of its span on each side, with a 10 m minimum span. Units are meters
//! and radians throughout; powers are dimensionless ratios.

use std::fs;
use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::channel::PowerParams;
use crate::error::{Error, Result};
use crate::geometry::{Vec3, COLOCATION_EPSILON};
use crate::solvers::{SearchBox, Solution, Strategy};

/// Node layout, power ratios, and the feasible region for the station.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub name: String,
    pub legit_nodes: Vec<Vec3>,
    pub jammer: Vec3,
    pub powers: PowerParams,
    pub bounds: SearchBox,
}

impl Scenario {
    /// The built-in two-node reference scenario: nodes at [0,0,0] and
    /// [0,50,0], jammer at [17,15,4], σ²/P = 0.001, altitude 8–30 m,
    /// default horizontal box, P_M/P = 1 until overridden.
    pub fn builtin_two_node() -> Scenario {
        let legit_nodes = vec![Vec3::new(0.0, 0.0, 0.0), Vec3::new(0.0, 50.0, 0.0)];
        let jammer = Vec3::new(17.0, 15.0, 4.0);
        let bounds = default_search_box(&legit_nodes, &jammer, 8.0, 30.0);
        Scenario {
            name: "two-node".to_string(),
            legit_nodes,
            jammer,
            powers: PowerParams { pm_over_p: 1.0, sigma2_over_p: 0.001 },
            bounds,
        }
    }

    /// Load and validate a scenario from a JSON file.
    pub fn load(path: &Path) -> Result<Scenario> {
        let text = fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
        let file: ScenarioFile = serde_json::from_str(&text).map_err(|e| Error::Parse {
            path: path.to_path_buf(),
            detail: e.to_string(),
        })?;
        let scenario = file.into_scenario()?;
        scenario.validate()?;
        Ok(scenario)
    }

    /// Write the scenario as JSON. The horizontal box is always written
    /// explicitly so a reload reproduces the scenario exactly even when the
    /// box was computed by the default rule.
    pub fn save(&self, path: &Path) -> Result<()> {
        let file = ScenarioFile::from_scenario(self);
        let mut text = serde_json::to_string_pretty(&file).expect("scenario serializes");
        text.push('\n');
        atomic_write(path, text.as_bytes())
    }

    pub fn validate(&self) -> Result<()> {
        if self.legit_nodes.is_empty() {
            return Err(Error::Validation("scenario has no legitimate nodes".into()));
        }
        self.powers.validate()?;
        self.bounds.validate()?;
        for (i, a) in self.legit_nodes.iter().enumerate() {
            for (j, b) in self.legit_nodes.iter().enumerate().skip(i + 1) {
                if a.distance_to(b) <= COLOCATION_EPSILON {
                    return Err(Error::Validation(format!(
                        "duplicate node position: nodes {i} and {j} coincide at [{}, {}, {}]",
                        a.x, a.y, a.z
                    )));
                }
            }
            if a.distance_to(&self.jammer) <= COLOCATION_EPSILON {
                return Err(Error::Validation(format!(
                    "jammer colocated with node {i} at [{}, {}, {}]",
                    a.x, a.y, a.z
                )));
            }
        }
        Ok(())
    }
}

/// Horizontal bounding box of all node positions expanded by half its span
/// on each side (span floored at 10 m), with the given altitude range.
pub fn default_search_box(
    legit_nodes: &[Vec3],
    jammer: &Vec3,
    z_min: f64,
    z_max: f64,
) -> SearchBox {
    let all = legit_nodes.iter().chain(std::iter::once(jammer));
    let mut x_lo = f64::INFINITY;
    let mut x_hi = f64::NEG_INFINITY;
    let mut y_lo = f64::INFINITY;
    let mut y_hi = f64::NEG_INFINITY;
    for p in all {
        x_lo = x_lo.min(p.x);
        x_hi = x_hi.max(p.x);
        y_lo = y_lo.min(p.y);
        y_hi = y_hi.max(p.y);
    }
    let x_margin = 0.5 * (x_hi - x_lo).max(10.0);
    let y_margin = 0.5 * (y_hi - y_lo).max(10.0);
    SearchBox {
        x_min: x_lo - x_margin,
        x_max: x_hi + x_margin,
        y_min: y_lo - y_margin,
        y_max: y_hi + y_margin,
        z_min,
        z_max,
    }
}

/// A jamming-power sweep: which P_M/P values to solve at, with which
/// strategies.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub pm_over_p_values: Vec<f64>,
    pub strategies: Vec<Strategy>,
}

impl SweepSpec {
    pub fn new(pm_over_p_values: Vec<f64>, strategies: Vec<Strategy>) -> Result<SweepSpec> {
        if pm_over_p_values.is_empty() {
            return Err(Error::Validation("sweep needs at least one pm_over_p value".into()));
        }
        for w in pm_over_p_values.windows(2) {
            if !(w[1] > w[0]) {
                return Err(Error::Validation(format!(
                    "pm_over_p values must be strictly increasing, got {} then {}",
                    w[0], w[1]
                )));
            }
        }
        if !(pm_over_p_values[0] >= 0.0) {
            return Err(Error::Validation(format!(
                "pm_over_p values must be non-negative, got {}",
                pm_over_p_values[0]
            )));
        }
        if strategies.is_empty() {
            return Err(Error::Validation("sweep needs at least one strategy".into()));
        }
        let mut seen = strategies.clone();
        seen.sort();
        seen.dedup();
        if seen.len() != strategies.len() {
            return Err(Error::Validation("sweep strategies contain duplicates".into()));
        }
        Ok(SweepSpec { pm_over_p_values, strategies })
    }

    /// Log-spaced P_M/P values from `start` to `stop` inclusive.
    pub fn log_spaced(start: f64, stop: f64, count: usize) -> Result<Vec<f64>> {
        if !(start > 0.0) || !(stop > start) || count < 2 {
            return Err(Error::Validation(format!(
                "log-spaced range needs 0 < start < stop and count >= 2, \
                 got start={start}, stop={stop}, count={count}"
            )));
        }
        let log_lo = start.log10();
        let log_hi = stop.log10();
        Ok((0..count)
            .map(|i| {
                let t = i as f64 / (count - 1) as f64;
                10f64.powf(log_lo + t * (log_hi - log_lo))
            })
            .collect())
    }
}

/// Column order of the results CSV.
pub const RESULTS_CSV_HEADER: &str =
    "pm_over_p,strategy,x,y,z,roll,pitch,min_sinr,min_sinr_db,evals";

/// Write solve results as CSV, one row per (pm_over_p, strategy), sorted by
/// pm_over_p ascending then strategy name ascending. Floats carry 17
/// significant digits so a reload reproduces them bit for bit. The write is
/// atomic: the file appears complete or not at all.
pub fn save_results(path: &Path, rows: &[(f64, Solution)]) -> Result<()> {
    let mut sorted: Vec<&(f64, Solution)> = rows.iter().collect();
    sorted.sort_by(|a, b| {
        a.0.total_cmp(&b.0)
            .then_with(|| a.1.strategy.name().cmp(b.1.strategy.name()))
    });
    let mut text = String::from(RESULTS_CSV_HEADER);
    text.push('\n');
    for (pm, solution) in sorted {
        let pose = &solution.pose;
        let db = 10.0 * solution.objective.log10();
        text.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{}\n",
            fmt_full(*pm),
            solution.strategy.name(),
            fmt_full(pose.position.x),
            fmt_full(pose.position.y),
            fmt_full(pose.position.z),
            fmt_full(pose.angles.roll),
            fmt_full(pose.angles.pitch),
            fmt_full(solution.objective),
            fmt_full(db),
            solution.evals,
        ));
    }
    atomic_write(path, text.as_bytes())
}

/// 17-significant-digit scientific notation: enough to round-trip any f64.
fn fmt_full(x: f64) -> String {
    format!("{x:.16e}")
}

fn atomic_write(path: &Path, bytes: &[u8]) -> Result<()> {
    let io_err = |source| Error::Io { path: path.to_path_buf(), source };
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(io_err)?;
    tmp.write_all(bytes).map_err(io_err)?;
    tmp.persist(path).map_err(|e| io_err(e.error))?;
    Ok(())
}

#[derive(Serialize, Deserialize)]
struct ScenarioFile {
    name: String,
    legit_nodes: Vec<[f64; 3]>,
    jammer: [f64; 3],
    sigma2_over_p: f64,
    pm_over_p: f64,
    z_bounds: [f64; 2],
    #[serde(rename = "box", skip_serializing_if = "Option::is_none")]
    horizontal_box: Option<[f64; 4]>,
}

impl ScenarioFile {
    fn into_scenario(self) -> Result<Scenario> {
        let legit_nodes: Vec<Vec3> = self.legit_nodes.into_iter().map(Vec3::from).collect();
        let jammer = Vec3::from(self.jammer);
        let bounds = match self.horizontal_box {
            Some([x_lo, x_hi, y_lo, y_hi]) => SearchBox {
                x_min: x_lo,
                x_max: x_hi,
                y_min: y_lo,
                y_max: y_hi,
                z_min: self.z_bounds[0],
                z_max: self.z_bounds[1],
            },
            None => {
                if legit_nodes.is_empty() {
                    return Err(Error::Validation("scenario has no legitimate nodes".into()));
                }
                default_search_box(&legit_nodes, &jammer, self.z_bounds[0], self.z_bounds[1])
            }
        };
        Ok(Scenario {
            name: self.name,
            legit_nodes,
            jammer,
            powers: PowerParams {
                pm_over_p: self.pm_over_p,
                sigma2_over_p: self.sigma2_over_p,
            },
            bounds,
        })
    }

    fn from_scenario(s: &Scenario) -> ScenarioFile {
        ScenarioFile {
            name: s.name.clone(),
            legit_nodes: s.legit_nodes.iter().map(|v| (*v).into()).collect(),
            jammer: s.jammer.into(),
            sigma2_over_p: s.powers.sigma2_over_p,
            pm_over_p: s.powers.pm_over_p,
            z_bounds: [s.bounds.z_min, s.bounds.z_max],
            horizontal_box: Some([s.bounds.x_min, s.bounds.x_max, s.bounds.y_min, s.bounds.y_max]),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::Pose;
    use crate::geometry::EulerAngles;

    fn tmp_dir() -> tempfile::TempDir {
        tempfile::tempdir().expect("tempdir")
    }

    #[test]
    fn builtin_matches_reference_constants() {
        let s = Scenario::builtin_two_node();
        assert_eq!(s.legit_nodes, vec![Vec3::new(0.0, 0.0, 0.0), Vec3::new(0.0, 50.0, 0.0)]);
        assert_eq!(s.jammer, Vec3::new(17.0, 15.0, 4.0));
        assert_eq!(s.powers.sigma2_over_p, 0.001);
        assert_eq!((s.bounds.z_min, s.bounds.z_max), (8.0, 30.0));
        s.validate().unwrap();
    }

    #[test]
    fn default_box_expands_node_bounding_box() {
        let s = Scenario::builtin_two_node();
        // x spread 0..17 (span 17), y spread 0..50 (span 50), each side
        // padded by half the span.
        assert_eq!(s.bounds.x_min, -8.5);
        assert_eq!(s.bounds.x_max, 25.5);
        assert_eq!(s.bounds.y_min, -25.0);
        assert_eq!(s.bounds.y_max, 75.0);
    }

    #[test]
    fn default_box_enforces_minimum_span() {
        // All nodes in a 2 m cluster: both spans floor at 10 m.
        let nodes = vec![Vec3::new(0.0, 0.0, 0.0), Vec3::new(2.0, 1.0, 0.0)];
        let b = default_search_box(&nodes, &Vec3::new(1.0, 0.5, 3.0), 8.0, 30.0);
        assert_eq!(b.x_min, -5.0);
        assert_eq!(b.x_max, 7.0);
        assert_eq!(b.y_min, -5.0);
        assert_eq!(b.y_max, 6.0);
    }

    #[test]
    fn bundled_scenario_file_matches_builtin() {
        let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../scenarios/two_node.json");
        let loaded = Scenario::load(&path).unwrap();
        assert_eq!(loaded, Scenario::builtin_two_node());
    }

    #[test]
    fn load_rejects_duplicate_nodes() {
        let dir = tmp_dir();
        let path = dir.path().join("dup.json");
        std::fs::write(
            &path,
            r#"{"name":"dup","legit_nodes":[[0,0,0],[0,0,0]],"jammer":[5,5,5],
               "sigma2_over_p":0.001,"pm_over_p":1.0,"z_bounds":[8,30]}"#,
        )
        .unwrap();
        let err = Scenario::load(&path).unwrap_err();
        assert!(matches!(&err, Error::Validation(m) if m.contains("duplicate node position")),
            "got {err:?}");
    }

    #[test]
    fn load_rejects_malformed_json_with_context() {
        let dir = tmp_dir();
        let path = dir.path().join("bad.json");
        std::fs::write(&path, "{\"name\": \"x\",\n  \"legit_nodes\": oops\n}").unwrap();
        let err = Scenario::load(&path).unwrap_err();
        match err {
            Error::Parse { detail, .. } => {
                assert!(detail.contains("line"), "detail should locate the error: {detail}")
            }
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn load_applies_default_box_when_absent() {
        let dir = tmp_dir();
        let path = dir.path().join("nobox.json");
        std::fs::write(
            &path,
            r#"{"name":"nobox","legit_nodes":[[0,0,0],[0,50,0]],"jammer":[17,15,4],
               "sigma2_over_p":0.001,"pm_over_p":1.0,"z_bounds":[8,30]}"#,
        )
        .unwrap();
        let s = Scenario::load(&path).unwrap();
        let expected = default_search_box(&s.legit_nodes, &s.jammer, 8.0, 30.0);
        assert_eq!(s.bounds, expected);
        assert_eq!((s.bounds.z_min, s.bounds.z_max), (8.0, 30.0));
    }

    #[test]
    fn save_then_load_round_trips_exactly() {
        let dir = tmp_dir();
        let path = dir.path().join("rt.json");
        let mut s = Scenario::builtin_two_node();
        s.powers.pm_over_p = 0.123456789012345678;
        s.legit_nodes.push(Vec3::new(1.0 / 3.0, -2.0 / 7.0, 0.25));
        s.save(&path).unwrap();
        let loaded = Scenario::load(&path).unwrap();
        assert_eq!(loaded, s);
    }

    #[test]
    fn validation_rejects_bad_scenarios() {
        let base = Scenario::builtin_two_node();

        let mut s = base.clone();
        s.legit_nodes.clear();
        assert!(s.validate().is_err(), "empty node list");

        let mut s = base.clone();
        s.powers.sigma2_over_p = 0.0;
        assert!(s.validate().is_err(), "non-positive sigma2_over_p");

        let mut s = base.clone();
        s.powers.pm_over_p = -1.0;
        assert!(s.validate().is_err(), "negative pm_over_p");

        let mut s = base.clone();
        s.bounds.z_min = 31.0;
        assert!(s.validate().is_err(), "inverted z bounds");

        let mut s = base.clone();
        s.jammer = s.legit_nodes[0];
        assert!(s.validate().is_err(), "jammer on a node");

        let mut s = base;
        s.legit_nodes[1] = s.legit_nodes[0] + Vec3::new(0.0, COLOCATION_EPSILON / 2.0, 0.0);
        assert!(s.validate().is_err(), "near-duplicate nodes");
    }

    #[test]
    fn sweep_spec_validation() {
        let all = vec![Strategy::Optimal, Strategy::Vertical];
        assert!(SweepSpec::new(vec![], all.clone()).is_err(), "empty values");
        assert!(SweepSpec::new(vec![1.0, 1.0], all.clone()).is_err(), "not increasing");
        assert!(SweepSpec::new(vec![-1.0, 1.0], all.clone()).is_err(), "negative");
        assert!(SweepSpec::new(vec![0.0, 1.0], vec![]).is_err(), "no strategies");
        assert!(
            SweepSpec::new(vec![0.0, 1.0], vec![Strategy::Optimal, Strategy::Optimal]).is_err(),
            "duplicate strategies"
        );
        assert!(SweepSpec::new(vec![0.0, 1.0, 10.0], all).is_ok());
    }

    #[test]
    fn log_spaced_hits_endpoints() {
        let v = SweepSpec::log_spaced(0.01, 1000.0, 11).unwrap();
        assert_eq!(v.len(), 11);
        assert!((v[0] - 0.01).abs() < 1e-15);
        assert!((v[10] - 1000.0).abs() < 1e-9);
        // The middle point of a symmetric decade range is 10^((−2+3)/2).
        assert!((v[5] - 10f64.powf(0.5)).abs() < 1e-12);
    }

    fn dummy_solution(strategy: Strategy, objective: f64) -> Solution {
        Solution {
            pose: Pose::new(Vec3::new(1.5, -2.25, 9.0), EulerAngles::yaw_free(0.1, -0.2)),
            per_node_sinr: vec![objective, objective + 1.0],
            objective,
            strategy,
            evals: 42,
            feasible: true,
        }
    }

    #[test]
    fn empty_results_write_header_only() {
        let dir = tmp_dir();
        let path = dir.path().join("empty.csv");
        save_results(&path, &[]).unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        assert_eq!(text, format!("{RESULTS_CSV_HEADER}\n"));
    }

    #[test]
    fn results_rows_sorted_by_pm_then_strategy() {
        let dir = tmp_dir();
        let path = dir.path().join("sorted.csv");
        let rows = vec![
            (10.0, dummy_solution(Strategy::Optimal, 0.5)),
            (0.1, dummy_solution(Strategy::Vertical, 0.25)),
            (0.1, dummy_solution(Strategy::Optimal, 0.75)),
        ];
        save_results(&path, &rows).unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 4);
        assert!(lines[1].contains(",optimal,"));
        assert!(lines[2].contains(",vertical,"));
        assert!(lines[3].contains(",optimal,"));
        assert!(lines[1].starts_with("1.0000000000000001e-1,"));
        assert!(lines[3].starts_with("1.0000000000000000e1,"));
    }

    #[test]
    fn results_floats_reparse_bit_for_bit() {
        let dir = tmp_dir();
        let path = dir.path().join("roundtrip.csv");
        let objective = 0.390_487_247_715_123_83;
        let rows = vec![(std::f64::consts::PI, dummy_solution(Strategy::MaxGain, objective))];
        save_results(&path, &rows).unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        let data_line = text.lines().nth(1).unwrap();
        let fields: Vec<&str> = data_line.split(',').collect();
        assert_eq!(fields.len(), 10);
        assert_eq!(fields[0].parse::<f64>().unwrap(), std::f64::consts::PI);
        assert_eq!(fields[1], "max_gain");
        assert_eq!(fields[7].parse::<f64>().unwrap(), objective);
        assert_eq!(fields[8].parse::<f64>().unwrap(), 10.0 * objective.log10());
        assert_eq!(fields[9].parse::<u64>().unwrap(), 42);
    }
}
