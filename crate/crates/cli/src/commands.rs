use std::f64::consts::PI;
use std::path::Path;

use anyhow::Context;
use elastnet::competitors::{self, AngleTriple, CompetitorGeometry};
use elastnet::curve::{self, SampledCurve};
use elastnet::elastica::{self, ElasticaParams};
use elastnet::elliptic::{self, EllipticParameter};
use elastnet::network::{self, EnergyMode, Network, NetworkDocument, NetworkOptions};
use elastnet::rescale::{self, FunctionalValues, HomogeneityPair};
use elastnet::{Tolerance, Vec2};
use serde_json::{json, Value};

use crate::output::{fmt_num, Table};
use crate::svg::Figure;

/// Everything a subcommand produces; `main` decides what to print or write.
pub struct Output {
    pub report: Value,
    pub table: Table,
    pub figure: Figure,
    pub network: Option<NetworkDocument>,
    pub warnings: Vec<String>,
}

impl Output {
    fn new(report: Value, table: Table, figure: Figure) -> Self {
        Output {
            report,
            table,
            figure,
            network: None,
            warnings: Vec::new(),
        }
    }
}

fn params_json(p: &ElasticaParams) -> Value {
    json!({
        "m": p.m.value(),
        "mu": p.mu,
        "lambda": p.lambda,
        "a": p.a,
        "sbar": p.sbar,
        "delta": p.delta,
        "b": p.b,
    })
}

fn curve_figure(curves: &[&SampledCurve]) -> Figure {
    Figure {
        polylines: curves.iter().map(|c| c.points().to_vec()).collect(),
        ..Figure::default()
    }
}

fn network_figure(net: &Network) -> Figure {
    let mut fig = Figure {
        polylines: net
            .curves()
            .iter()
            .filter_map(|c| c.as_regular())
            .map(|c| c.points().to_vec())
            .collect(),
        ..Figure::default()
    };
    for (j, junction) in net.junctions().iter().enumerate() {
        fig.markers.push(junction.position);
        if let Ok(angles) = network::measured_angles(net, j) {
            let text: Vec<String> = angles.iter().map(|a| format!("{a:.1}")).collect();
            fig.labels.push((junction.position, text.join("/")));
        }
    }
    fig
}

pub fn eight(delta: f64, nodes: Option<usize>) -> anyhow::Result<Output> {
    let n = nodes.unwrap_or(4096);
    let m = elastica::solve_closure(Tolerance::default())?;
    let p = elastica::figure_eight_params(delta)?;
    let report = elastica::eight_report(&p)?;
    let sample = elastica::sample_eight(&p, n)?;
    let angles = elastica::junction_angles(&p);
    let json = json!({
        "closure": {
            "m": m.value(),
            "g": elastica::closure_function(m)?,
        },
        "params": params_json(&p),
        "energy": report,
        "bending_closed_form": elastica::eight_bending_closed_form(&p)?,
        "junction_angles_deg": angles,
        "residuals": {
            "nodes": n,
            "euler_lagrange": elastica::el_residual(&sample, delta)?,
            "system": elastica::system_residual(&sample, p.lambda)?,
        },
        "sampled_energy": curve::energy_report(&sample, delta)?,
    });
    let mut fig = curve_figure(&[&sample]);
    let crossing = elastica::eight_point(&p, p.sbar)?.position;
    fig.markers.push(crossing);
    fig.labels.push((
        crossing,
        format!("{:.1}/{:.1}", angles.small, angles.large),
    ));
    let mut out = Output::new(json, Table::curve(&sample), fig);
    out.network = Some(NetworkDocument::from_network(&competitors::figure_eight_network(
        &p,
        n.min(2048),
    )?));
    Ok(out)
}

pub fn drop(delta: f64, nodes: Option<usize>) -> anyhow::Result<Output> {
    let n = nodes.unwrap_or(2048);
    let p = elastica::figure_eight_params(delta)?;
    let report = elastica::drop_report(&p)?;
    let boundary = elastica::drop_boundary(&p)?;
    let [lobe, _] = elastica::sample_drops(&p, n)?;
    let json = json!({
        "params": params_json(&p),
        "energy": report,
        "boundary": {
            "k_start": boundary.start.curvature,
            "k_end": boundary.end.curvature,
            "dk_start": boundary.start.curvature_derivative,
            "dk_end": boundary.end.curvature_derivative,
            "gap": boundary.gap,
        },
        "residuals": {
            "nodes": n,
            "euler_lagrange": elastica::el_residual(&lobe, delta)?,
        },
    });
    let mut fig = curve_figure(&[&lobe]);
    fig.markers.push(lobe.start());
    Ok(Output::new(json, Table::curve(&lobe), fig))
}

fn read(path: &Path) -> anyhow::Result<String> {
    std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

pub fn curve_file(path: &Path, delta: f64, nodes: Option<usize>) -> anyhow::Result<Output> {
    let n = nodes.unwrap_or(1024);
    let c = curve::load_curve(&read(path)?, n, curve::FILE_CLOSURE_TOL)?;
    let gauss_bonnet = if c.is_closed() {
        serde_json::to_value(curve::gauss_bonnet_check(&c)?)?
    } else {
        Value::Null
    };
    let json = json!({
        "closed": c.is_closed(),
        "nodes": c.len(),
        "energy": curve::energy_report(&c, delta)?,
        "euler_lagrange_residual": elastica::el_residual(&c, delta)?,
        "gauss_bonnet": gauss_bonnet,
    });
    Ok(Output::new(json, Table::curve(&c), curve_figure(&[&c])))
}

fn network_report(net: &Network, delta: f64) -> anyhow::Result<Value> {
    let energy = network::network_energy(net, delta, EnergyMode::Raw)?;
    let relaxed = match network::network_energy(net, delta, EnergyMode::Relaxed) {
        Ok(e) => serde_json::to_value(e.total)?,
        Err(_) => Value::String("infinite".into()),
    };
    let junctions: Vec<Value> = net
        .junctions()
        .iter()
        .enumerate()
        .map(|(j, junction)| {
            Ok(json!({
                "position": junction.position,
                "valence": junction.incident.len(),
                "angles_deg": network::measured_angles(net, j)?,
                "target_angles_deg": junction.target_angles,
            }))
        })
        .collect::<anyhow::Result<_>>()?;
    let residuals = match network::junction_residuals(net) {
        Ok(r) => serde_json::to_value(r)?,
        Err(e) => json!({ "unavailable": e.to_string() }),
    };
    let (loops, bound) = match network::theta_loops(net) {
        Ok(l) => (
            serde_json::to_value(l)?,
            network::theta_lower_bound_check(net, delta).ok().map(Value::Bool).unwrap_or(Value::Null),
        ),
        Err(_) => (Value::Null, Value::Null),
    };
    Ok(json!({
        "classification": net.classification(),
        "curves": net.curves().len(),
        "junctions": junctions,
        "energy": energy.total,
        "per_curve": energy.per_curve,
        "relaxed_energy": relaxed,
        "junction_residuals": residuals,
        "theta_loops": loops,
        "theta_lower_bound_holds": bound,
    }))
}

fn network_table(net: &Network) -> Table {
    Table::curves(
        net.curves()
            .iter()
            .enumerate()
            .filter_map(|(i, c)| c.as_regular().map(|c| (i, c))),
    )
}

pub fn network_file(path: &Path, delta: f64, options: NetworkOptions) -> anyhow::Result<Output> {
    let net = network::load_network(&read(path)?, options)?;
    let mut out = Output::new(network_report(&net, delta)?, network_table(&net), network_figure(&net));
    out.network = Some(NetworkDocument::from_network(&net));
    Ok(out)
}

fn competitor_output(kind: &str, g: &CompetitorGeometry, extra: Value) -> anyhow::Result<Output> {
    let delta = g.closed_form.delta;
    let mut json = json!({
        "kind": kind,
        "radius": g.radius,
        "delta": delta,
        "closed_form": g.closed_form,
        "parts": g.parts,
        "network": network_report(&g.network, delta)?,
    });
    if let (Value::Object(map), Value::Object(more)) = (&mut json, extra) {
        map.extend(more);
    }
    let mut out = Output::new(json, network_table(&g.network), network_figure(&g.network));
    out.network = Some(NetworkDocument::from_network(&g.network));
    Ok(out)
}

pub fn circle(delta: f64, nodes: Option<usize>) -> anyhow::Result<Output> {
    let g = competitors::circle_minimizer(delta, nodes.unwrap_or(competitors::DEFAULT_NODES))?;
    competitor_output("circle", &g, json!({ "expected_total": 4.0 * PI * delta.sqrt() }))
}

pub fn double_bubble(delta: f64, radius: Option<f64>, nodes: Option<usize>) -> anyhow::Result<Output> {
    let n = nodes.unwrap_or(competitors::DEFAULT_NODES);
    let optimal_radius = competitors::optimal_generalized_radius(&AngleTriple::regular(), delta)?;
    let g = competitors::double_bubble(radius.unwrap_or(optimal_radius), delta, n)?;
    competitor_output(
        "double-bubble",
        &g,
        json!({
            "optimal_radius": optimal_radius,
            "optimal_total": competitors::optimal_generalized_energy(&AngleTriple::regular(), delta)?,
        }),
    )
}

pub fn angles(
    degrees: [f64; 3],
    delta: f64,
    radius: Option<f64>,
    nodes: Option<usize>,
) -> anyhow::Result<Output> {
    let n = nodes.unwrap_or(competitors::DEFAULT_NODES);
    let t = AngleTriple::from_degrees(degrees[0], degrees[1], degrees[2])?;
    let optimal_radius = competitors::optimal_generalized_radius(&t, delta)?;
    let r = radius.unwrap_or(optimal_radius);
    let (g, recommended) = competitors::generalized_network(&t, r, delta, n)?;
    let table = competitors::GeneralizedTable::tabulated(t.alpha1(), t.alpha2(), r);
    let mut out = competitor_output(
        "angles",
        &g,
        json!({
            "angles_deg": [t.alpha1().to_degrees(), t.alpha2().to_degrees(), t.alpha3().to_degrees()],
            "table": table,
            "optimal_radius": optimal_radius,
            "optimal_total": competitors::optimal_generalized_energy(&t, delta)?,
            "recommended_range": recommended,
        }),
    )?;
    if !recommended {
        out.warnings.push(format!(
            "second angle {:.4} deg exceeds 135 deg; the comparison with the Figure Eight is not guaranteed here",
            t.alpha2().to_degrees()
        ));
    }
    Ok(out)
}

pub struct RescaleArgs {
    pub a: f64,
    pub b: f64,
    pub alpha: f64,
    pub beta: f64,
    pub delta: f64,
    pub b0: Option<f64>,
}

pub fn rescale(args: &RescaleArgs) -> anyhow::Result<Output> {
    let v = FunctionalValues::new(args.a, args.b, args.delta)?;
    let d = HomogeneityPair::new(args.alpha, args.beta)?;
    let lam = rescale::optimal_scale(v, d)?;
    let at_opt = v.rescaled(d, lam);
    let constrained = match args.b0 {
        Some(b0) => serde_json::to_value(rescale::constrained_scale_factor(args.b, b0, d)?)?,
        None => Value::Null,
    };
    let json = json!({
        "input": { "A": args.a, "B": args.b, "alpha": args.alpha, "beta": args.beta, "delta": args.delta },
        "penalized": v.penalized(),
        "lambda_opt": lam,
        "energy_at_optimal": rescale::energy_at_optimal(v, d)?,
        "terms_at_optimal": { "A": at_opt.a(), "delta_B": at_opt.delta() * at_opt.b() },
        "unit_reduction": rescale::reduce_to_unit(v, d),
        "constrained_scale_factor": constrained,
    });
    let mut table = Table::new(&["lambda", "F"]);
    for i in 0..=100 {
        let l = lam * 10f64.powf(-2.0 + 4.0 * i as f64 / 100.0);
        table.rows.push(vec![fmt_num(l), fmt_num(v.penalized_at(d, l))]);
    }
    let curve: Vec<Vec2> = table
        .rows
        .iter()
        .map(|r| Vec2::new(r[0].parse::<f64>().unwrap_or(0.0).log10(), r[1].parse().unwrap_or(0.0)))
        .collect();
    let fig = Figure {
        polylines: vec![curve],
        markers: vec![Vec2::new(lam.log10(), rescale::energy_at_optimal(v, d)?)],
        labels: Vec::new(),
    };
    Ok(Output::new(json, table, fig))
}

pub enum EllipticQuery {
    K(f64),
    E(f64, Option<f64>),
    Am(f64, f64),
    Cn(f64, f64),
}

pub fn elliptic(q: &EllipticQuery) -> anyhow::Result<Output> {
    let param = |m: f64| EllipticParameter::new(m);
    let (name, u, m, value) = match *q {
        EllipticQuery::K(m) => ("K", None, m, elliptic::complete_k(param(m)?)?),
        EllipticQuery::E(m, None) => ("E", None, m, elliptic::complete_e(param(m)?)),
        EllipticQuery::E(m, Some(phi)) => ("E", Some(phi), m, elliptic::incomplete_e(phi, param(m)?)?),
        EllipticQuery::Am(u, m) => ("am", Some(u), m, elliptic::jacobi_am(u, param(m)?)?),
        EllipticQuery::Cn(u, m) => ("cn", Some(u), m, elliptic::jacobi_cn(u, param(m)?)?),
    };
    let json = json!({ "function": name, "argument": u, "m": m, "value": value });
    let mut table = Table::new(&["function", "argument", "m", "value"]);
    table.rows.push(vec![
        name.to_string(),
        u.map(fmt_num).unwrap_or_default(),
        fmt_num(m),
        fmt_num(value),
    ]);

    // plot over one period in the argument where there is one
    let mut fig = Figure::default();
    let pm = param(m)?;
    let curve: Option<Vec<Vec2>> = match q {
        EllipticQuery::Am(..) | EllipticQuery::Cn(..) => {
            let period = 4.0 * elliptic::complete_k(pm)?;
            Some(
                (0..=400)
                    .map(|i| {
                        let x = period * i as f64 / 400.0;
                        let y = match q {
                            EllipticQuery::Am(..) => elliptic::jacobi_am(x, pm),
                            _ => elliptic::jacobi_cn(x, pm),
                        };
                        y.map(|y| Vec2::new(x, y))
                    })
                    .collect::<Result<_, _>>()?,
            )
        }
        EllipticQuery::E(_, Some(_)) => Some(
            (0..=400)
                .map(|i| {
                    let x = PI * i as f64 / 400.0;
                    elliptic::incomplete_e(x, pm).map(|y| Vec2::new(x, y))
                })
                .collect::<Result<_, _>>()?,
        ),
        _ => None,
    };
    if let Some(c) = curve {
        fig.polylines.push(c);
        if let Some(u) = u {
            fig.markers.push(Vec2::new(u, value));
        }
    }
    Ok(Output::new(json, table, fig))
}
