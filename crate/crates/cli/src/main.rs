use std::f64::consts::PI;
use std::fs::File;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use mahler::ellipse::{behrend_contacts, john, loewner};
use mahler::experiments::{fit_exponent, remark_constants_check, theorem_d_scan, Family};
use mahler::io::{read_polygon, write_csv, write_json, Figure};
use mahler::optimize::maximize_product;
use mahler::santalo::{santalo_point, theorem_e_experiment};
use mahler::sector::{competitor_polar_areas, resolve_sector, sector_polar_area, theorem_b_check};
use mahler::symmetrize::steiner;
use mahler::{regular_product, EllipseKind, OptConfig, OptMode, Point2, Polygon};

/// Polar bodies, volume products, Santaló points and extremal ellipses of
/// convex polygons.
///
/// Polygon input is JSON `{"vertices": [[x, y], ...]}` read from FILE or,
/// when FILE is absent or `-`, from stdin. Exit status is 0 on success, 1 on
/// bad input and 2 when a verification check fails.
#[derive(Parser)]
#[command(name = "mahler", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct Common {
    /// Write the result here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Also draw the relevant bodies as SVG.
    #[arg(long, global = true)]
    svg: Option<PathBuf>,
    /// Seed for every random choice.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Vertices used to discretize smooth bodies.
    #[arg(long, global = true, default_value_t = 4096)]
    n_discretization: usize,
    /// Slack allowed by verification checks.
    #[arg(long, global = true)]
    tolerance: Option<f64>,
}

#[derive(Subcommand)]
enum Command {
    /// Polar body `K*` with respect to the origin.
    Polar { input: Option<PathBuf> },
    /// Volume product `V(K) V(K*)` with respect to the origin.
    Volprod { input: Option<PathBuf> },
    /// Santaló point and the polar area there.
    Santalo { input: Option<PathBuf> },
    /// Largest inscribed origin-centred ellipse and its contact pattern.
    John { input: Option<PathBuf> },
    /// Smallest circumscribed origin-centred ellipse and its contact pattern.
    Loewner { input: Option<PathBuf> },
    /// Steiner symmetrization about a line through the origin.
    Steiner {
        input: Option<PathBuf>,
        /// Angle of the axis in radians.
        #[arg(long, default_value_t = 0.0)]
        axis: f64,
    },
    /// Extremal sector boundary for a half-angle and an area.
    Sector {
        #[arg(long)]
        alpha: f64,
        #[arg(long)]
        area: f64,
        /// Random competitors compared against the extremal boundary.
        #[arg(long, default_value_t = 100)]
        competitors: usize,
    },
    /// Local search for the largest volume product among n-gons.
    Optimize {
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value_t = Mode::Symmetric)]
        mode: Mode,
        /// Cap on sweeps over all moves.
        #[arg(long)]
        max_iters: Option<usize>,
    },
    /// `V(K) + V(K*)` in John or Löwner position against `2π`.
    TheoremB {
        input: Option<PathBuf>,
        /// Use a built-in body instead of reading one.
        #[arg(long, value_enum)]
        body: Option<Body>,
        /// Vertex count of the built-in body.
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, value_enum, default_value_t = Position::Loewner)]
        position: Position,
    },
    /// Volume-product deficits of a family of cut disks (CSV).
    TheoremD {
        #[arg(long, default_value = "truncated_disk")]
        family: String,
        /// Cut depths; defaults to 1e-2 down to 1e-4 in half decades.
        #[arg(long, value_delimiter = ',')]
        eps: Vec<f64>,
    },
    /// Sandwich trials for the polar area at a perturbed Santaló point (CSV).
    TheoremE {
        /// Reference body; defaults to a regular pentagon.
        input: Option<PathBuf>,
        #[arg(long, value_delimiter = ',', default_values_t = [1e-3, 1e-4])]
        eps: Vec<f64>,
        #[arg(long, default_value_t = 100)]
        trials: usize,
    },
    /// Closed-form constants comparing sums with twice the ball volume.
    Constants,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Symmetric,
    SantaloCentered,
}

#[derive(Clone, Copy, ValueEnum)]
enum Body {
    Disk,
    Square,
    Hexagon,
}

#[derive(Clone, Copy, ValueEnum)]
enum Position {
    John,
    Loewner,
}

enum Failure {
    Input(anyhow::Error),
    Check(String),
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Input(e)
    }
}

impl From<mahler::Error> for Failure {
    fn from(e: mahler::Error) -> Self {
        Failure::Input(e.into())
    }
}

type Outcome = Result<(), Failure>;

fn load(input: Option<&Path>) -> anyhow::Result<Polygon> {
    match input {
        None => read_polygon(io::stdin().lock()).context("reading polygon from stdin"),
        Some(p) if p == Path::new("-") => read_polygon(io::stdin().lock()).context("reading polygon from stdin"),
        Some(p) => {
            let f = File::open(p).with_context(|| format!("opening {}", p.display()))?;
            read_polygon(f).with_context(|| format!("reading polygon from {}", p.display()))
        }
    }
}

fn sink(out: Option<&Path>) -> anyhow::Result<Box<dyn Write>> {
    Ok(match out {
        Some(p) => Box::new(File::create(p).with_context(|| format!("creating {}", p.display()))?),
        None => Box::new(io::stdout().lock()),
    })
}

/// A reader that closed the pipe early is not an error.
fn written(r: mahler::Result<()>) -> Outcome {
    match r {
        Err(e) if e.to_string().contains("Broken pipe") => Ok(()),
        r => r.map_err(|e| Failure::Input(e.into())),
    }
}

fn emit<T: Serialize>(c: &Common, value: &T) -> Outcome {
    written(write_json(sink(c.out.as_deref())?, value))
}

fn emit_csv<T: Serialize>(c: &Common, rows: &[T]) -> Outcome {
    written(write_csv(sink(c.out.as_deref())?, rows))
}

fn draw(c: &Common, fig: &Figure) -> Outcome {
    if let Some(p) = &c.svg {
        std::fs::write(p, fig.render()).with_context(|| format!("writing {}", p.display()))?;
    }
    Ok(())
}

fn check(ok: bool, msg: impl FnOnce() -> String) -> Outcome {
    if ok {
        Ok(())
    } else {
        Err(Failure::Check(msg()))
    }
}

fn extremal(c: &Common, input: Option<&Path>, which: EllipseKind) -> Outcome {
    let k = load(input)?;
    let e = match which {
        EllipseKind::Inscribed => john(&k)?,
        EllipseKind::Circumscribed => loewner(&k)?,
    };
    let contacts = behrend_contacts(&k, &e, which)?;
    draw(c, Figure::new().polygon(&k, "black").ellipse(&e, "red"))?;
    emit(c, &json!({ "ellipse": e, "area": e.area(), "contacts": contacts }))
}

fn run(cli: Cli) -> Outcome {
    let c = &cli.common;
    match cli.command {
        Command::Polar { input } => {
            let k = load(input.as_deref())?;
            let p = k.polar()?;
            draw(c, Figure::new().unit_circle().polygon(&k, "black").polygon(&p, "blue"))?;
            emit(c, &p)
        }
        Command::Volprod { input } => {
            let k = load(input.as_deref())?;
            emit(c, &json!({ "product": k.volume_product()? }))
        }
        Command::Santalo { input } => {
            let k = load(input.as_deref())?;
            let rep = santalo_point(&k)?;
            let s = rep.point;
            let mark = [s + Point2::new(0.02, 0.0), s - Point2::new(0.02, 0.0)];
            draw(c, Figure::new().polygon(&k, "black").polyline(&mark, false, "red"))?;
            emit(c, &rep)
        }
        Command::John { input } => extremal(c, input.as_deref(), EllipseKind::Inscribed),
        Command::Loewner { input } => extremal(c, input.as_deref(), EllipseKind::Circumscribed),
        Command::Steiner { input, axis } => {
            let k = load(input.as_deref())?;
            let rep = steiner(&k, axis)?;
            draw(c, Figure::new().polygon(&k, "black").polygon(&rep.symmetral, "blue"))?;
            emit(c, &rep)?;
            let tol = c.tolerance.unwrap_or(1e-9);
            check(rep.polar_area_after >= rep.polar_area_before - tol, || {
                format!(
                    "polar area fell from {} to {}",
                    rep.polar_area_before, rep.polar_area_after
                )
            })
        }
        Command::Sector { alpha, area, competitors } => {
            let spec = resolve_sector(alpha, area)?;
            let dual = spec.dual()?;
            let discretized = sector_polar_area(&spec, c.n_discretization)?;
            let best = competitor_polar_areas(&spec, competitors, c.seed)?
                .into_iter()
                .fold(f64::NEG_INFINITY, f64::max);
            let region = spec.region(c.n_discretization)?;
            draw(c, Figure::new().unit_circle().polygon(&region, "black").polygon(&dual.region(c.n_discretization)?, "blue"))?;
            emit(
                c,
                &json!({
                    "spec": spec,
                    "polar_area": spec.polar_area(),
                    "polar_area_discretized": discretized,
                    "dual": dual,
                    "dual_conic": spec.dual_conic(),
                    "best_competitor": (competitors > 0).then_some(best),
                }),
            )?;
            let tol = c.tolerance.unwrap_or(0.0);
            check(competitors == 0 || best <= spec.polar_area() + tol, || {
                format!("a competitor reached {best} above {}", spec.polar_area())
            })
        }
        Command::Optimize { n, mode, max_iters } => {
            let mode = match mode {
                Mode::Symmetric => OptMode::Symmetric,
                Mode::SantaloCentered => OptMode::SantaloCentered,
            };
            let mut cfg = OptConfig::new(n, mode, c.seed);
            if let Some(m) = max_iters {
                cfg.max_iters = m;
            }
            let rep = maximize_product(&cfg)?;
            draw(c, Figure::new().polygon(&rep.final_polygon, "black"))?;
            emit(c, &rep)?;
            let best = rep.product_trace.last().copied().unwrap_or(0.0);
            let target = regular_product(n);
            let tol = c.tolerance.unwrap_or(1e-5);
            check((best - target).abs() <= tol * target, || {
                format!("final product {best} is not within {tol} of {target}")
            })
        }
        Command::TheoremB { input, body, n, position } => {
            let k = match body {
                Some(b) => {
                    let n = n.unwrap_or(c.n_discretization);
                    match b {
                        Body::Disk => Polygon::regular(n, 1.0, 0.0)?,
                        Body::Square => Polygon::regular(4, 1.0, 0.0)?,
                        Body::Hexagon => Polygon::regular(6, 1.0, 0.0)?,
                    }
                }
                None => load(input.as_deref())?,
            };
            let which = match position {
                Position::John => EllipseKind::Inscribed,
                Position::Loewner => EllipseKind::Circumscribed,
            };
            let rep = theorem_b_check(&k, which, n.unwrap_or(c.n_discretization))?;
            draw(c, Figure::new().unit_circle().polygon(&k, "black"))?;
            emit(c, &rep)?;
            let tol = c.tolerance.unwrap_or(1e-6);
            check(rep.sum <= 2.0 * PI + tol, || format!("sum {} exceeds 2π", rep.sum))
        }
        Command::TheoremD { family, eps } => {
            let family: Family = family.parse()?;
            let grid = if eps.is_empty() {
                [-2.0, -2.5, -3.0, -3.5, -4.0].map(|e: f64| 10f64.powf(e)).to_vec()
            } else {
                eps
            };
            let rep = theorem_d_scan(family, &grid, c.n_discretization, c.seed)?;
            emit_csv(c, &rep.records)?;
            let fit = fit_exponent(&rep.records, regular_product(c.n_discretization)).ok();
            eprintln!("{}", json!({ "verdict": rep.verdict, "fit": fit }));
            check(rep.verdict.passed, || "deficit ordering not observed".into())
        }
        Command::TheoremE { input, eps, trials } => {
            let k0 = match input {
                Some(p) => load(Some(&p))?,
                None => Polygon::regular(5, 1.0, 0.3)?,
            };
            let mut rows = Vec::new();
            for (j, &e) in eps.iter().enumerate() {
                rows.extend(theorem_e_experiment(&k0, e, trials, c.seed + 1_000_000 * j as u64)?);
            }
            emit_csv(c, &rows)?;
            let bad = rows.iter().filter(|r| r.violation).count();
            check(bad == 0, || format!("{bad} trials exceed the bound"))
        }
        Command::Constants => {
            let rep = remark_constants_check()?;
            emit(c, &rep)?;
            check(rep.passed, || "a stated inequality failed".into())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            // help and version requests are not failures
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Input(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
        Err(Failure::Check(msg)) => {
            eprintln!("verification failed: {msg}");
            ExitCode::from(2)
        }
    }
}
