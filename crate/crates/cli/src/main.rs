use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use elastnet::network::NetworkOptions;

mod commands;
mod output;
mod svg;

use commands::{EllipticQuery, Output, RescaleArgs};

/// Energies of elastic curves and curve networks.
#[derive(Parser)]
#[command(name = "elastnet", version, about)]
struct Cli {
    #[command(flatten)]
    format: Format,

    /// Write a static SVG figure to this path.
    #[arg(long, global = true, value_name = "PATH")]
    svg: Option<PathBuf>,

    /// Write the computed network as JSON to this path.
    #[arg(long, global = true, value_name = "PATH")]
    emit_network: Option<PathBuf>,

    /// Nodes per sampled curve.
    #[arg(long, global = true, value_name = "N")]
    nodes: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
#[group(multiple = false)]
struct Format {
    /// Print the JSON report (default).
    #[arg(long, global = true)]
    json: bool,

    /// Print curve samples (or the command's table) as CSV instead.
    #[arg(long, global = true)]
    csv: bool,
}

#[derive(Subcommand)]
enum Command {
    /// The closed Figure-Eight elastica: closure, parameters, energies, residuals.
    #[command(allow_negative_numbers = true)]
    Eight {
        #[arg(long, default_value_t = 1.0)]
        delta: f64,
    },
    /// One lobe of the Figure Eight.
    #[command(allow_negative_numbers = true)]
    Drop {
        #[arg(long, default_value_t = 1.0)]
        delta: f64,
    },
    /// Energy and Euler-Lagrange residual of a curve file.
    #[command(allow_negative_numbers = true)]
    Curve {
        file: PathBuf,
        #[arg(long, default_value_t = 1.0)]
        delta: f64,
    },
    /// Classification, energy and junction conditions of a network file.
    #[command(allow_negative_numbers = true)]
    Network {
        file: PathBuf,
        #[arg(long, default_value_t = 1.0)]
        delta: f64,
        /// Degrees.
        #[arg(long, default_value_t = 0.5)]
        angle_tol: f64,
        #[arg(long, default_value_t = 1e-6)]
        junction_tol: f64,
    },
    /// Closed-form competitor networks.
    Competitor {
        #[command(subcommand)]
        kind: Competitor,
    },
    /// Optimal rescaling of `A + delta B` with homogeneity degrees alpha, beta.
    #[command(allow_negative_numbers = true)]
    Rescale {
        #[arg(long = "A")]
        a: f64,
        #[arg(long = "B")]
        b: f64,
        #[arg(long)]
        alpha: f64,
        #[arg(long)]
        beta: f64,
        #[arg(long, default_value_t = 1.0)]
        delta: f64,
        /// Constraint value for the constrained problem.
        #[arg(long = "B0")]
        b0: Option<f64>,
    },
    /// Elliptic integrals and Jacobi functions (parameter convention m = k^2).
    Elliptic {
        #[command(subcommand)]
        function: Elliptic,
    },
}

#[derive(Subcommand)]
enum Competitor {
    /// The optimal circle.
    #[command(allow_negative_numbers = true)]
    Circle {
        #[arg(long, default_value_t = 1.0)]
        delta: f64,
    },
    /// The standard double bubble, at the optimal radius unless given.
    #[command(allow_negative_numbers = true)]
    DoubleBubble {
        #[arg(long, default_value_t = 1.0)]
        delta: f64,
        #[arg(long)]
        radius: Option<f64>,
    },
    /// Two arcs and a segment meeting at the given angles (degrees).
    #[command(allow_negative_numbers = true)]
    Angles {
        a1: f64,
        a2: f64,
        a3: f64,
        #[arg(long, default_value_t = 1.0)]
        delta: f64,
        #[arg(long)]
        radius: Option<f64>,
    },
}

#[derive(Subcommand)]
enum Elliptic {
    /// Complete integral of the first kind K(m).
    #[command(name = "K", allow_negative_numbers = true)]
    K { m: f64 },
    /// Complete integral E(m), or incomplete E(phi, m) with --phi.
    #[command(name = "E", allow_negative_numbers = true)]
    E {
        m: f64,
        #[arg(long)]
        phi: Option<f64>,
    },
    /// Jacobi amplitude am(u, m).
    #[command(allow_negative_numbers = true)]
    Am {
        u: f64,
        m: f64,
    },
    /// Jacobi cn(u, m).
    #[command(allow_negative_numbers = true)]
    Cn {
        u: f64,
        m: f64,
    },
}

fn dispatch(cli: &Cli) -> anyhow::Result<Output> {
    let n = cli.nodes;
    match &cli.command {
        Command::Eight { delta } => commands::eight(*delta, n),
        Command::Drop { delta } => commands::drop(*delta, n),
        Command::Curve { file, delta } => commands::curve_file(file, *delta, n),
        Command::Network {
            file,
            delta,
            angle_tol,
            junction_tol,
        } => {
            let options = NetworkOptions {
                nodes: n.unwrap_or(NetworkOptions::default().nodes),
                junction_tol: *junction_tol,
                angle_tol: *angle_tol,
            };
            commands::network_file(file, *delta, options)
        }
        Command::Competitor { kind } => match kind {
            Competitor::Circle { delta } => commands::circle(*delta, n),
            Competitor::DoubleBubble { delta, radius } => commands::double_bubble(*delta, *radius, n),
            Competitor::Angles {
                a1,
                a2,
                a3,
                delta,
                radius,
            } => commands::angles([*a1, *a2, *a3], *delta, *radius, n),
        },
        Command::Rescale {
            a,
            b,
            alpha,
            beta,
            delta,
            b0,
        } => commands::rescale(&RescaleArgs {
            a: *a,
            b: *b,
            alpha: *alpha,
            beta: *beta,
            delta: *delta,
            b0: *b0,
        }),
        Command::Elliptic { function } => commands::elliptic(&match *function {
            Elliptic::K { m } => EllipticQuery::K(m),
            Elliptic::E { m, phi } => EllipticQuery::E(m, phi),
            Elliptic::Am { u, m } => EllipticQuery::Am(u, m),
            Elliptic::Cn { u, m } => EllipticQuery::Cn(u, m),
        }),
    }
}

fn run(cli: &Cli) -> anyhow::Result<()> {
    let out = dispatch(cli)?;
    for w in &out.warnings {
        eprintln!("warning: {w}");
    }
    if let Some(path) = &cli.svg {
        std::fs::write(path, out.figure.render())?;
    }
    if let Some(path) = &cli.emit_network {
        let doc = out
            .network
            .as_ref()
            .ok_or_else(|| anyhow::anyhow!("this command does not produce a network"))?;
        std::fs::write(path, serde_json::to_string_pretty(doc)? + "\n")?;
    }
    let text = if cli.format.csv {
        out.table.to_csv()?
    } else {
        serde_json::to_string_pretty(&output::round_json(out.report))? + "\n"
    };
    match std::io::stdout().lock().write_all(text.as_bytes()) {
        Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(e.into()),
        _ => Ok(()),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(2) } else { ExitCode::SUCCESS };
        }
    };
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
