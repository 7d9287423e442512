//! SVG figures: measured values solid, bounds dashed, one colour per `q`.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use anyhow::{anyhow, Context, Result};
use plotters::prelude::*;
use rsvd_diag::bounds::Quantity;

use crate::cache::file_stem;
use crate::config::{Experiment, ExperimentConfig};
use crate::runner::RunOutcome;

#[derive(Debug, Clone)]
pub struct Series {
    pub label: String,
    pub points: Vec<(f64, f64)>,
    pub dashed: bool,
    pub color: usize,
}

#[derive(Debug, Clone)]
pub struct Figure {
    pub title: String,
    pub x_desc: String,
    pub y_desc: String,
    pub series: Vec<Series>,
}

const COLORS: [RGBColor; 6] = [
    RGBColor(31, 119, 180),
    RGBColor(214, 39, 40),
    RGBColor(44, 160, 44),
    RGBColor(148, 103, 189),
    RGBColor(255, 127, 14),
    RGBColor(23, 190, 207),
];

pub fn median(values: &mut [f64]) -> f64 {
    values.sort_by(f64::total_cmp);
    let n = values.len();
    if n == 0 {
        return f64::NAN;
    }
    if n % 2 == 1 {
        values[n / 2]
    } else {
        0.5 * (values[n / 2 - 1] + values[n / 2])
    }
}

/// Renders `figure` as a self-contained SVG with a logarithmic y axis.
/// Non-positive values cannot be shown on it and are dropped.
pub fn render_svg(figure: &Figure) -> Result<String> {
    let positive = || figure.series.iter().flat_map(|s| &s.points).filter(|p| p.1 > 0.0 && p.1.is_finite());
    let (mut y_lo, mut y_hi) = positive().fold((f64::INFINITY, 0.0f64), |(lo, hi), p| (lo.min(p.1), hi.max(p.1)));
    if !(y_lo <= y_hi) {
        (y_lo, y_hi) = (1e-16, 1.0);
    }
    let (y_lo, y_hi) = (y_lo / 2.0, y_hi * 2.0);
    let xs = || figure.series.iter().flat_map(|s| &s.points).map(|p| p.0);
    let x_lo = xs().fold(f64::INFINITY, f64::min);
    let x_hi = xs().fold(f64::NEG_INFINITY, f64::max);
    let (x_lo, x_hi) = if x_lo < x_hi { (x_lo, x_hi) } else if x_lo.is_finite() { (x_lo - 1.0, x_lo + 1.0) } else { (0.0, 1.0) };

    let mut svg = String::new();
    {
        let root = SVGBackend::with_string(&mut svg, (720, 480)).into_drawing_area();
        let err = |e: &dyn std::fmt::Display| anyhow!("plotting {}: {e}", figure.title);
        root.fill(&WHITE).map_err(|e| err(&e))?;
        let mut chart = ChartBuilder::on(&root)
            .caption(&figure.title, ("sans-serif", 18))
            .margin(12)
            .x_label_area_size(36)
            .y_label_area_size(64)
            .build_cartesian_2d(x_lo..x_hi, (y_lo..y_hi).log_scale())
            .map_err(|e| err(&e))?;
        chart
            .configure_mesh()
            .x_desc(figure.x_desc.as_str())
            .y_desc(figure.y_desc.as_str())
            .y_label_formatter(&|y| format!("{y:.0e}"))
            .draw()
            .map_err(|e| err(&e))?;
        for s in &figure.series {
            let color = COLORS[s.color % COLORS.len()];
            let points: Vec<(f64, f64)> = s.points.iter().copied().filter(|p| p.1 > 0.0 && p.1.is_finite()).collect();
            let legend = |c: RGBColor, dashed: bool| {
                move |(x, y): (i32, i32)| {
                    let end = if dashed { x + 8 } else { x + 20 };
                    PathElement::new(vec![(x, y), (end, y)], c.stroke_width(2))
                }
            };
            if s.dashed {
                chart
                    .draw_series(DashedLineSeries::new(points, 6, 4, color.stroke_width(2)))
                    .map_err(|e| err(&e))?
                    .label(&s.label)
                    .legend(legend(color, true));
            } else {
                chart
                    .draw_series(LineSeries::new(points, color.stroke_width(2)))
                    .map_err(|e| err(&e))?
                    .label(&s.label)
                    .legend(legend(color, false));
            }
        }
        chart
            .configure_series_labels()
            .position(SeriesLabelPosition::LowerRight)
            .background_style(WHITE.mix(0.8))
            .border_style(BLACK)
            .draw()
            .map_err(|e| err(&e))?;
        root.present().map_err(|e| err(&e))?;
    }
    Ok(svg)
}

/// Outcomes of one matrix at one `(k, rho)`.
struct Group<'a> {
    matrix: &'a str,
    k: usize,
    rho: usize,
    outcomes: Vec<&'a RunOutcome>,
}

/// Median over seeds of measured and bound for `quantity`, keyed by
/// `(q, x)` where `x` comes from `x_of`.
fn medians(
    group: &Group,
    quantity: Quantity,
    x_of: impl Fn(&rsvd_diag::bounds::BoundEntry) -> Option<f64>,
    filter: impl Fn(&rsvd_diag::bounds::BoundEntry) -> bool,
) -> BTreeMap<usize, Vec<(f64, f64, f64)>> {
    let mut acc: BTreeMap<(usize, u64), (f64, Vec<f64>, Vec<f64>)> = BTreeMap::new();
    for o in &group.outcomes {
        let Some(r) = o.report() else { continue };
        for e in r.entries_for(quantity).filter(|e| filter(e)) {
            let Some(x) = x_of(e) else { continue };
            let slot = acc.entry((o.key.q, x.to_bits())).or_insert((x, Vec::new(), Vec::new()));
            slot.1.push(e.measured);
            slot.2.push(e.bound);
        }
    }
    let mut out: BTreeMap<usize, Vec<(f64, f64, f64)>> = BTreeMap::new();
    for ((q, _), (x, mut m, mut b)) in acc {
        out.entry(q).or_default().push((x, median(&mut m), median(&mut b)));
    }
    for v in out.values_mut() {
        v.sort_by(|a, b| a.0.total_cmp(&b.0));
    }
    out
}

fn per_q_series(per_q: &BTreeMap<usize, Vec<(f64, f64, f64)>>, measured: &str, bound: &str) -> Vec<Series> {
    let mut series = Vec::new();
    for (i, (q, pts)) in per_q.iter().enumerate() {
        series.push(Series {
            label: format!("{measured}, q={q}"),
            points: pts.iter().map(|p| (p.0, p.1)).collect(),
            dashed: false,
            color: i,
        });
        series.push(Series {
            label: format!("{bound}, q={q}"),
            points: pts.iter().map(|p| (p.0, p.2)).collect(),
            dashed: true,
            color: i,
        });
    }
    series
}

fn figure_for(group: &Group, experiment: Experiment, config: &ExperimentConfig) -> Figure {
    let j_of = |e: &rsvd_diag::bounds::BoundEntry| e.j.map(|j| j as f64);
    let title = |what: &str| format!("{}: {what} (k={}, rho={})", group.matrix, group.k, group.rho);
    let any = |_: &rsvd_diag::bounds::BoundEntry| true;
    match experiment {
        Experiment::AnglesNoExtraction => Figure {
            title: title("sin theta_j"),
            x_desc: "j".into(),
            y_desc: "sin theta_j".into(),
            series: per_q_series(&medians(group, Quantity::SinTheta, j_of, any), "measured", "bound"),
        },
        Experiment::AnglesExtraction => Figure {
            title: title("max{sin theta'_j, sin nu'_j}"),
            x_desc: "j".into(),
            y_desc: "max{sin theta'_j, sin nu'_j}".into(),
            series: per_q_series(&medians(group, Quantity::ExtractionAngle, j_of, any), "measured", "bound"),
        },
        Experiment::SingularValues => Figure {
            title: title("approximate singular values and lower bounds"),
            x_desc: "j".into(),
            y_desc: "sigma".into(),
            series: per_q_series(&medians(group, Quantity::SigmaLower, j_of, any), "sigma_hat", "lower bound"),
        },
        Experiment::ProbabilisticCalibration => Figure {
            title: title(&format!("sin theta_j and Gaussian bounds, delta={}", config.delta)),
            x_desc: "j".into(),
            y_desc: "sin theta_j".into(),
            series: {
                let mut s = per_q_series(
                    &medians(group, Quantity::ProbExpectationTheta, j_of, any),
                    "median measured",
                    "expectation bound",
                );
                let tail = medians(group, Quantity::ProbTailTheta, j_of, any);
                for (i, (q, pts)) in tail.iter().enumerate() {
                    s.push(Series {
                        label: format!("tail bound, q={q}"),
                        points: pts.iter().map(|p| (p.0, p.2)).collect(),
                        dashed: true,
                        color: i + 3,
                    });
                }
                s
            },
        },
        Experiment::LowrankErrors => {
            let mut series = Vec::new();
            for (i, spec) in config.norm_specs.iter().enumerate() {
                let per_q = medians(group, Quantity::LowrankResidual, |_| Some(0.0), |e| e.norm == Some(*spec));
                let pts: Vec<(f64, f64, f64)> =
                    per_q.iter().flat_map(|(q, v)| v.iter().map(move |p| (*q as f64, p.1, p.2))).collect();
                series.push(Series {
                    label: format!("measured, {spec}"),
                    points: pts.iter().map(|p| (p.0, p.1)).collect(),
                    dashed: false,
                    color: i,
                });
                series.push(Series {
                    label: format!("bound, {spec}"),
                    points: pts.iter().map(|p| (p.0, p.2)).collect(),
                    dashed: true,
                    color: i,
                });
            }
            Figure {
                title: title("||(I - QQ^T)A||"),
                x_desc: "q".into(),
                y_desc: "error".into(),
                series,
            }
        }
    }
}

/// Writes one SVG per matrix and experiment (per `(k, rho)` as well when
/// the grid has several); returns the file names.
pub fn write_plots(dir: &Path, config: &ExperimentConfig, outcomes: &[RunOutcome]) -> Result<Vec<String>> {
    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    let multi = config.k.len() * config.rho.len() > 1;
    let mut groups: Vec<Group> = Vec::new();
    for o in outcomes {
        match groups.last_mut() {
            Some(g) if g.matrix == o.key.matrix && g.k == o.key.k && g.rho == o.key.rho => g.outcomes.push(o),
            _ => groups.push(Group { matrix: &o.key.matrix, k: o.key.k, rho: o.key.rho, outcomes: vec![o] }),
        }
    }
    let mut names = Vec::new();
    for g in &groups {
        for &experiment in &config.experiments {
            let figure = figure_for(g, experiment, config);
            let mut name = format!("{}_{}", file_stem(g.matrix), experiment);
            if multi {
                name.push_str(&format!("_k{}_rho{}", g.k, g.rho));
            }
            name.push_str(".svg");
            fs::write(dir.join(&name), render_svg(&figure)?)?;
            names.push(name);
        }
    }
    Ok(names)
}
