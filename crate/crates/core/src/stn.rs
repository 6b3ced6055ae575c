//! Simple temporal network over turnaround activities.
//!
//! Each transit flight runs a fixed set of ground-service activities with
//! duration bands and precedence between them. Encoding those as difference
//! constraints and minimizing the network with all-pairs shortest paths
//! yields the tightest admissible start window for the towing service,
//! which becomes the flight's tractor-arrival window.

use std::collections::HashMap;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum StnError {
    #[error("turnaround template has a precedence cycle involving {0}")]
    TemplateCycle(String),
    #[error("transit time must be positive, got {0}")]
    NonPositiveTransit(i64),
    #[error("template has no duration band for activity {activity} at transit {transit}")]
    NoBand { activity: String, transit: i64 },
    #[error("duration band for {0} has min above max")]
    BadBand(String),
    #[error("unknown activity {0} in precedence list")]
    UnknownActivity(String),
    #[error("network is inconsistent; witness cycle through variables {0:?}")]
    Inconsistent(Vec<usize>),
    #[error("template defines no {0} activity")]
    MissingActivity(String),
}

/// Duration band: applies to flights with transit time strictly below
/// `max_transit_min` (i64::MAX marks the catch-all band).
#[derive(Debug, Clone, PartialEq)]
pub struct DurationBand {
    pub max_transit_min: i64,
    pub min_duration: i64,
    pub max_duration: i64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ActivityTemplate {
    pub name: String,
    pub bands: Vec<DurationBand>,
}

/// Turnaround activity set with precedence and transit-banded durations.
#[derive(Debug, Clone, PartialEq)]
pub struct TurnaroundTemplate {
    pub activities: Vec<ActivityTemplate>,
    /// (before, after) pairs of activity indices.
    pub precedence: Vec<(usize, usize)>,
}

impl TurnaroundTemplate {
    pub fn activity_index(&self, name: &str) -> Option<usize> {
        self.activities.iter().position(|a| a.name == name)
    }

    fn band_for(&self, activity: usize, transit: i64) -> Result<&DurationBand, StnError> {
        self.activities[activity]
            .bands
            .iter()
            .find(|b| transit < b.max_transit_min)
            .ok_or_else(|| StnError::NoBand {
                activity: self.activities[activity].name.clone(),
                transit,
            })
    }

    fn check_acyclic(&self) -> Result<(), StnError> {
        let n = self.activities.len();
        let mut indegree = vec![0usize; n];
        for &(_, b) in &self.precedence {
            indegree[b] += 1;
        }
        let mut queue: Vec<usize> = (0..n).filter(|&i| indegree[i] == 0).collect();
        let mut seen = 0;
        while let Some(i) = queue.pop() {
            seen += 1;
            for &(a, b) in &self.precedence {
                if a == i {
                    indegree[b] -= 1;
                    if indegree[b] == 0 {
                        queue.push(b);
                    }
                }
            }
        }
        if seen != n {
            let stuck = (0..n).find(|&i| indegree[i] > 0).unwrap_or(0);
            return Err(StnError::TemplateCycle(self.activities[stuck].name.clone()));
        }
        Ok(())
    }

    /// Activities with no predecessor / no successor.
    fn sources(&self) -> Vec<usize> {
        (0..self.activities.len())
            .filter(|&i| !self.precedence.iter().any(|&(_, b)| b == i))
            .collect()
    }

    fn sinks(&self) -> Vec<usize> {
        (0..self.activities.len())
            .filter(|&i| !self.precedence.iter().any(|&(a, _)| a == i))
            .collect()
    }
}

/// The shipped template file, also available at `data/default_turnaround.template`.
pub const DEFAULT_TEMPLATE_TEXT: &str = include_str!("../data/default_turnaround.template");

/// Representative turnaround used when no template file is supplied.
///
/// Duration bands are generic placeholders for a two-band (short/long
/// transit) operation; swap in airport-measured data for production use.
pub fn default_template() -> TurnaroundTemplate {
    let band = |short: (i64, i64), long: (i64, i64)| {
        vec![
            DurationBand {
                max_transit_min: 80,
                min_duration: short.0,
                max_duration: short.1,
            },
            DurationBand {
                max_transit_min: i64::MAX,
                min_duration: long.0,
                max_duration: long.1,
            },
        ]
    };
    let activities = vec![
        ActivityTemplate {
            name: "guidance".into(),
            bands: band((5, 10), (5, 15)),
        },
        ActivityTemplate {
            name: "towing".into(),
            bands: band((3, 8), (3, 10)),
        },
        ActivityTemplate {
            name: "baggage".into(),
            bands: band((15, 25), (20, 40)),
        },
        ActivityTemplate {
            name: "refueling".into(),
            bands: band((15, 20), (20, 35)),
        },
        ActivityTemplate {
            name: "cleaning".into(),
            bands: band((10, 15), (15, 25)),
        },
        ActivityTemplate {
            name: "catering".into(),
            bands: band((10, 20), (15, 30)),
        },
    ];
    TurnaroundTemplate {
        activities,
        // guidance first, towing next, then the stand services; catering
        // needs the cabin cleaned first.
        precedence: vec![(0, 1), (1, 2), (1, 3), (1, 4), (4, 5)],
    }
}

/// Difference constraint: `x[to] - x[from] <= bound`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StnConstraint {
    pub from: usize,
    pub to: usize,
    pub bound: i64,
}

/// Simple temporal network. Variable 0 is the reference event, pinned to the
/// flight's scheduled arrival; every activity contributes a start and an end
/// variable.
#[derive(Debug, Clone, PartialEq)]
pub struct Stn {
    pub labels: Vec<String>,
    pub constraints: Vec<StnConstraint>,
    /// start-variable index per template activity.
    pub activity_start: Vec<usize>,
}

const INF: i64 = i64::MAX / 4;

/// Minimized all-pairs bound matrix: `bound(i, j)` is the tightest upper
/// bound on `x[j] - x[i]`, or None when unconstrained.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundMatrix {
    n: usize,
    d: Vec<i64>,
}

impl BoundMatrix {
    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn bound(&self, from: usize, to: usize) -> Option<i64> {
        let v = self.d[from * self.n + to];
        (v < INF).then_some(v)
    }

    /// Re-encode the matrix as a constraint list, one edge per finite bound.
    pub fn to_constraints(&self) -> Vec<StnConstraint> {
        let mut out = Vec::new();
        for from in 0..self.n {
            for to in 0..self.n {
                if from != to {
                    if let Some(bound) = self.bound(from, to) {
                        out.push(StnConstraint { from, to, bound });
                    }
                }
            }
        }
        out
    }
}

/// Build the per-flight network: duration bands become paired inequalities,
/// precedence becomes end-before-start edges, source activities are anchored
/// at the arrival reference, and sink activities must end by departure.
pub fn build_stn(transit_min: i64, template: &TurnaroundTemplate) -> Result<Stn, StnError> {
    if transit_min <= 0 {
        return Err(StnError::NonPositiveTransit(transit_min));
    }
    template.check_acyclic()?;
    for &(a, b) in &template.precedence {
        if a >= template.activities.len() || b >= template.activities.len() {
            return Err(StnError::UnknownActivity(format!("index {}", a.max(b))));
        }
    }

    let mut labels = vec!["arrival".to_string()];
    let mut activity_start = Vec::with_capacity(template.activities.len());
    let mut activity_end = Vec::with_capacity(template.activities.len());
    for activity in &template.activities {
        activity_start.push(labels.len());
        labels.push(format!("{}.start", activity.name));
        activity_end.push(labels.len());
        labels.push(format!("{}.end", activity.name));
    }

    let mut constraints = Vec::new();
    for (i, _) in template.activities.iter().enumerate() {
        let band = template.band_for(i, transit_min)?;
        if band.min_duration > band.max_duration {
            return Err(StnError::BadBand(template.activities[i].name.clone()));
        }
        // end - start <= max, start - end <= -min
        constraints.push(StnConstraint {
            from: activity_start[i],
            to: activity_end[i],
            bound: band.max_duration,
        });
        constraints.push(StnConstraint {
            from: activity_end[i],
            to: activity_start[i],
            bound: -band.min_duration,
        });
    }
    for &(a, b) in &template.precedence {
        // end_a <= start_b
        constraints.push(StnConstraint {
            from: activity_start[b],
            to: activity_end[a],
            bound: 0,
        });
    }
    for i in template.sources() {
        // arrival <= start_i
        constraints.push(StnConstraint {
            from: activity_start[i],
            to: 0,
            bound: 0,
        });
    }
    for i in template.sinks() {
        // end_i <= arrival + transit
        constraints.push(StnConstraint {
            from: 0,
            to: activity_end[i],
            bound: transit_min,
        });
    }

    Ok(Stn {
        labels,
        constraints,
        activity_start,
    })
}

/// All-pairs minimization of the distance graph. A negative cycle means the
/// constraint set is unsatisfiable; the error carries a witness cycle.
pub fn minimize_stn(stn: &Stn) -> Result<BoundMatrix, StnError> {
    let n = stn.labels.len();
    let mut d = vec![INF; n * n];
    let mut next = vec![usize::MAX; n * n];
    for i in 0..n {
        d[i * n + i] = 0;
        next[i * n + i] = i;
    }
    for c in &stn.constraints {
        let cell = &mut d[c.from * n + c.to];
        if c.bound < *cell {
            *cell = c.bound;
            next[c.from * n + c.to] = c.to;
        }
    }
    for k in 0..n {
        for i in 0..n {
            let dik = d[i * n + k];
            if dik >= INF {
                continue;
            }
            for j in 0..n {
                let candidate = dik + d[k * n + j];
                if candidate < d[i * n + j] {
                    d[i * n + j] = candidate;
                    next[i * n + j] = next[i * n + k];
                }
            }
        }
    }
    for i in 0..n {
        if d[i * n + i] < 0 {
            return Err(StnError::Inconsistent(witness_cycle(&next, n, i)));
        }
    }
    Ok(BoundMatrix { n, d })
}

/// Walk the first-hop matrix from a vertex on a negative cycle until a
/// vertex repeats; the repeated stretch is the cycle.
fn witness_cycle(next: &[usize], n: usize, start: usize) -> Vec<usize> {
    let mut seen_at = vec![usize::MAX; n];
    let mut walk = Vec::new();
    let mut u = start;
    loop {
        if seen_at[u] != usize::MAX {
            return walk[seen_at[u]..].to_vec();
        }
        seen_at[u] = walk.len();
        walk.push(u);
        let hop = next[u * n + start];
        if hop == usize::MAX || walk.len() > n + 1 {
            return walk;
        }
        u = hop;
    }
}

/// Tractor-arrival window for the towing activity, in absolute minutes.
///
/// `open` is the earliest admissible towing start and `close` the latest,
/// both measured as arrival-clock plus the minimized bounds against the
/// reference event.
pub fn towing_window(
    bounds: &BoundMatrix,
    stn: &Stn,
    template: &TurnaroundTemplate,
    scheduled_arrival_min: f64,
) -> Result<(f64, f64), StnError> {
    let towing = template
        .activity_index("towing")
        .ok_or_else(|| StnError::MissingActivity("towing".into()))?;
    let start = stn.activity_start[towing];
    let latest = bounds
        .bound(0, start)
        .ok_or_else(|| StnError::MissingActivity("towing latest bound".into()))?;
    let earliest = bounds
        .bound(start, 0)
        .map(|b| -b)
        .ok_or_else(|| StnError::MissingActivity("towing earliest bound".into()))?;
    Ok((
        scheduled_arrival_min + earliest as f64,
        scheduled_arrival_min + latest as f64,
    ))
}

/// Convenience: derive the towing window for one flight transit.
pub fn derive_window(
    transit_min: i64,
    template: &TurnaroundTemplate,
    scheduled_arrival_min: f64,
) -> Result<(f64, f64), StnError> {
    let stn = build_stn(transit_min, template)?;
    let bounds = minimize_stn(&stn)?;
    towing_window(&bounds, &stn, template, scheduled_arrival_min)
}

/// Parse a turnaround template from its text form.
///
/// ```text
/// [activity guidance]
/// band transit<80 min=5 max=10
/// band transit<inf min=5 max=15
/// [precedence]
/// guidance -> towing
/// ```
pub fn parse_template(text: &str) -> Result<TurnaroundTemplate, String> {
    let mut activities: Vec<ActivityTemplate> = Vec::new();
    let mut precedence_lines: Vec<(String, String)> = Vec::new();
    let mut current: Option<usize> = None;
    let mut in_precedence = false;
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if let Some(rest) = line.strip_prefix('[') {
            let head = rest.trim_end_matches(']').trim();
            if head == "precedence" {
                in_precedence = true;
                current = None;
            } else if let Some(name) = head.strip_prefix("activity ") {
                in_precedence = false;
                activities.push(ActivityTemplate {
                    name: name.trim().to_string(),
                    bands: Vec::new(),
                });
                current = Some(activities.len() - 1);
            } else {
                return Err(format!("line {}: unknown section {head}", lineno + 1));
            }
            continue;
        }
        if in_precedence {
            let mut parts = line.split("->");
            let a = parts.next().map(str::trim).unwrap_or_default();
            let b = parts.next().map(str::trim).unwrap_or_default();
            if a.is_empty() || b.is_empty() {
                return Err(format!("line {}: expected 'a -> b'", lineno + 1));
            }
            precedence_lines.push((a.to_string(), b.to_string()));
        } else if let Some(idx) = current {
            let rest = line
                .strip_prefix("band ")
                .ok_or_else(|| format!("line {}: expected a band entry", lineno + 1))?;
            let mut max_transit = None;
            let mut min_d = None;
            let mut max_d = None;
            for token in rest.split_whitespace() {
                if let Some(v) = token.strip_prefix("transit<") {
                    max_transit = Some(if v == "inf" {
                        i64::MAX
                    } else {
                        v.parse()
                            .map_err(|_| format!("line {}: bad transit bound", lineno + 1))?
                    });
                } else if let Some(v) = token.strip_prefix("min=") {
                    min_d = Some(
                        v.parse()
                            .map_err(|_| format!("line {}: bad min", lineno + 1))?,
                    );
                } else if let Some(v) = token.strip_prefix("max=") {
                    max_d = Some(
                        v.parse()
                            .map_err(|_| format!("line {}: bad max", lineno + 1))?,
                    );
                } else {
                    return Err(format!("line {}: unknown token {token}", lineno + 1));
                }
            }
            match (max_transit, min_d, max_d) {
                (Some(t), Some(lo), Some(hi)) => activities[idx].bands.push(DurationBand {
                    max_transit_min: t,
                    min_duration: lo,
                    max_duration: hi,
                }),
                _ => {
                    return Err(format!(
                        "line {}: band needs transit<, min=, max=",
                        lineno + 1
                    ))
                }
            }
        } else {
            return Err(format!("line {}: entry outside any section", lineno + 1));
        }
    }
    let index: HashMap<&str, usize> = activities
        .iter()
        .enumerate()
        .map(|(i, a)| (a.name.as_str(), i))
        .collect();
    let mut precedence = Vec::new();
    for (a, b) in &precedence_lines {
        let ia = *index
            .get(a.as_str())
            .ok_or(format!("unknown activity {a}"))?;
        let ib = *index
            .get(b.as_str())
            .ok_or(format!("unknown activity {b}"))?;
        precedence.push((ia, ib));
    }
    Ok(TurnaroundTemplate {
        activities,
        precedence,
    })
}

/// Render a template in the text form read by [`parse_template`].
pub fn format_template(template: &TurnaroundTemplate) -> String {
    let mut out = String::new();
    for a in &template.activities {
        out.push_str(&format!("[activity {}]\n", a.name));
        for b in &a.bands {
            let transit = if b.max_transit_min == i64::MAX {
                "inf".to_string()
            } else {
                b.max_transit_min.to_string()
            };
            out.push_str(&format!(
                "band transit<{} min={} max={}\n",
                transit, b.min_duration, b.max_duration
            ));
        }
    }
    out.push_str("[precedence]\n");
    for &(a, b) in &template.precedence {
        out.push_str(&format!(
            "{} -> {}\n",
            template.activities[a].name, template.activities[b].name
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chain_template(durations: &[(i64, i64)]) -> TurnaroundTemplate {
        let activities = durations
            .iter()
            .enumerate()
            .map(|(i, &(lo, hi))| ActivityTemplate {
                name: format!("a{i}"),
                bands: vec![DurationBand {
                    max_transit_min: i64::MAX,
                    min_duration: lo,
                    max_duration: hi,
                }],
            })
            .collect();
        let precedence = (1..durations.len()).map(|i| (i - 1, i)).collect();
        TurnaroundTemplate {
            activities,
            precedence,
        }
    }

    #[test]
    fn single_activity_network_shape() {
        let template = chain_template(&[(5, 10)]);
        let stn = build_stn(60, &template).unwrap();
        // start + end variables besides the arrival reference
        assert_eq!(stn.labels.len(), 3);
        // duration pair + arrival anchor + departure deadline
        assert_eq!(stn.constraints.len(), 4);
    }

    #[test]
    fn three_activity_chain_shape() {
        let template = chain_template(&[(5, 10), (10, 20), (5, 10)]);
        let stn = build_stn(60, &template).unwrap();
        assert_eq!(stn.labels.len(), 7);
        // 6 duration edges + 2 precedence + 1 anchor + 1 deadline
        assert_eq!(stn.constraints.len(), 10);
    }

    #[test]
    fn minimize_reads_off_simple_chain() {
        let stn = Stn {
            labels: vec!["x0".into(), "x1".into()],
            constraints: vec![
                StnConstraint {
                    from: 0,
                    to: 1,
                    bound: 10,
                },
                StnConstraint {
                    from: 1,
                    to: 0,
                    bound: -5,
                },
            ],
            activity_start: vec![],
        };
        let bounds = minimize_stn(&stn).unwrap();
        assert_eq!(bounds.bound(0, 1), Some(10));
        assert_eq!(bounds.bound(1, 0), Some(-5));
    }

    #[test]
    fn redundant_constraint_changes_nothing() {
        let mut stn = Stn {
            labels: vec!["x0".into(), "x1".into()],
            constraints: vec![
                StnConstraint {
                    from: 0,
                    to: 1,
                    bound: 10,
                },
                StnConstraint {
                    from: 1,
                    to: 0,
                    bound: -5,
                },
            ],
            activity_start: vec![],
        };
        let tight = minimize_stn(&stn).unwrap();
        stn.constraints.push(StnConstraint {
            from: 0,
            to: 1,
            bound: 20,
        });
        let with_redundant = minimize_stn(&stn).unwrap();
        assert_eq!(tight, with_redundant);
    }

    #[test]
    fn contradiction_yields_witness_cycle() {
        let stn = Stn {
            labels: vec!["x0".into(), "x1".into()],
            constraints: vec![
                StnConstraint {
                    from: 0,
                    to: 1,
                    bound: 3,
                },
                StnConstraint {
                    from: 1,
                    to: 0,
                    bound: -5,
                },
            ],
            activity_start: vec![],
        };
        match minimize_stn(&stn) {
            Err(StnError::Inconsistent(cycle)) => assert!(!cycle.is_empty()),
            other => panic!("expected inconsistency, got {other:?}"),
        }
    }

    #[test]
    fn towing_window_on_slack_chain() {
        // towing first, duration [5,10]; successors leave 40 minutes of slack
        // for its start: 60 - (10 + 5) - 5.
        let mut template = chain_template(&[(5, 10), (10, 20), (5, 10)]);
        template.activities[0].name = "towing".into();
        let (open, close) = derive_window(60, &template, 100.0).unwrap();
        assert_eq!(open, 100.0);
        assert_eq!(close, 140.0);
    }

    #[test]
    fn zero_slack_chain_pins_the_window() {
        let mut template = chain_template(&[(5, 10), (10, 20)]);
        template.activities[0].name = "towing".into();
        // transit equals the sum of minimum durations
        let (open, close) = derive_window(15, &template, 0.0).unwrap();
        assert_eq!(open, 0.0);
        assert_eq!(close, 0.0);
    }

    #[test]
    fn widening_successor_band_never_shrinks_window() {
        let mut template = chain_template(&[(5, 10), (10, 20), (5, 10)]);
        template.activities[0].name = "towing".into();
        let (open0, close0) = derive_window(60, &template, 0.0).unwrap();
        template.activities[2].bands[0].max_duration = 30;
        let (open1, close1) = derive_window(60, &template, 0.0).unwrap();
        assert!(open1 <= open0);
        assert!(close1 >= close0);
    }

    #[test]
    fn infeasible_transit_reports_inconsistency() {
        let mut template = chain_template(&[(5, 10), (10, 20)]);
        template.activities[0].name = "towing".into();
        assert!(matches!(
            derive_window(10, &template, 0.0),
            Err(StnError::Inconsistent(_))
        ));
    }

    #[test]
    fn template_cycle_is_rejected() {
        let mut template = chain_template(&[(5, 10), (10, 20)]);
        template.precedence.push((1, 0));
        assert!(matches!(
            build_stn(60, &template),
            Err(StnError::TemplateCycle(_))
        ));
    }

    #[test]
    fn negative_transit_is_rejected() {
        let template = chain_template(&[(5, 10)]);
        assert!(matches!(
            build_stn(0, &template),
            Err(StnError::NonPositiveTransit(0))
        ));
    }

    #[test]
    fn minimization_is_idempotent() {
        let template = default_template();
        let stn = build_stn(60, &template).unwrap();
        let bounds = minimize_stn(&stn).unwrap();
        let again = minimize_stn(&Stn {
            labels: stn.labels.clone(),
            constraints: bounds.to_constraints(),
            activity_start: stn.activity_start.clone(),
        })
        .unwrap();
        assert_eq!(bounds, again);
    }

    #[test]
    fn triangle_inequality_holds() {
        let template = default_template();
        let stn = build_stn(95, &template).unwrap();
        let bounds = minimize_stn(&stn).unwrap();
        let n = bounds.len();
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    if let (Some(ij), Some(jk)) = (bounds.bound(i, j), bounds.bound(j, k)) {
                        let ik = bounds.bound(i, k).expect("path exists");
                        assert!(ik <= ij + jk);
                    }
                }
            }
        }
    }

    #[test]
    fn default_template_short_transit_guidance_band() {
        let template = default_template();
        let guidance = template.activity_index("guidance").unwrap();
        let band = template.band_for(guidance, 60).unwrap();
        assert_eq!((band.min_duration, band.max_duration), (5, 10));
    }

    #[test]
    fn default_template_windows_are_sane() {
        let template = default_template();
        for transit in [45, 60, 79, 80, 120, 180] {
            let (open, close) = derive_window(transit, &template, 0.0).unwrap();
            assert!(open >= 0.0);
            assert!(close >= open, "transit {transit}");
            assert!(close <= transit as f64);
        }
    }

    #[test]
    fn template_text_round_trips() {
        let template = default_template();
        let text = format_template(&template);
        let parsed = parse_template(&text).unwrap();
        assert_eq!(template, parsed);
    }

    #[test]
    fn shipped_template_file_matches_the_builtin() {
        let parsed = parse_template(DEFAULT_TEMPLATE_TEXT).unwrap();
        assert_eq!(parsed, default_template());
    }

    #[test]
    fn parse_rejects_unknown_precedence_activity() {
        let text =
            "[activity towing]\nband transit<inf min=3 max=8\n[precedence]\ntowing -> nowhere\n";
        assert!(parse_template(text).is_err());
    }
}
