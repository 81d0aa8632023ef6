//! `llab`: liaison verification pipelines and the computations behind them.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use llab::hilbert::{curve_invariants, hilbert_function, hilbert_polynomial, CurveInvariants};
use llab::io::{export_ideal, ingest_ideal};
use llab::liaison::{link_imposing_points, predicted_link, verify_linkage, LinkageSpec};
use llab::numerology::{expected_hypersurfaces, liaison_plan_table, rho, serre_dual_counts};
use llab::pipelines::{fixture_build, run_pipeline, FixtureKind, PipelineName, PipelineSpec};
use llab::report::{emit_report, Format};
use llab::geometry::PointSet;
use llab::{Ambient, MultiDegree, DEFAULT_PRIME};
use rand::SeedableRng;

#[derive(Parser)]
#[command(name = "llab", version, about = "Liaison of curves over finite fields")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a verification pipeline; exit status 0 iff every step passes.
    Pipeline {
        /// m124, m123, m123-sernesi, m133, m125u, mgnu-row(g,m) or geiss-roundtrip
        name: String,
        #[arg(long, default_value_t = DEFAULT_PRIME)]
        prime: u32,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Starting curve in the ideal-file format.
        #[arg(long)]
        fixture: Option<PathBuf>,
        /// Also write the report (JSON) to this file.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value = "text")]
        format: Format,
    },
    /// Link a curve by general forms of the given degrees.
    Link {
        /// Ideal file of the curve.
        fixture: PathBuf,
        /// Degrees of the forms, `5,5` in P^r or `2:4,2:4` in P^1 x P^2.
        #[arg(long)]
        degrees: String,
        /// Number of general points the forms must pass through.
        #[arg(long, default_value_t = 0)]
        points: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Write the residual here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Hilbert polynomial, invariants and Hilbert function of an ideal file.
    Hilbert {
        fixture: PathBuf,
        /// Print the Hilbert function up to this total degree.
        #[arg(long, default_value_t = 6)]
        upto: i64,
    },
    /// Riemann–Roch and Brill–Noether counts.
    Count {
        #[command(subcommand)]
        what: Count,
    },
    /// Build a fixture and write it in the ideal-file format.
    Fixture {
        /// rational(d,r), rational-bi(d1,d2), ci(a,b), genus10-deg12-P3,
        /// genus10-deg13-P4, genus10-deg12-P3-octic or genus12-geiss
        kind: String,
        #[arg(long, default_value_t = DEFAULT_PRIME)]
        prime: u32,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// The liaison plan for the pointed curves, each row re-derived.
    Table3 {
        #[arg(long, default_value = "text")]
        format: Format,
    },
}

#[derive(Subcommand)]
enum Count {
    /// Minimum number of independent hypersurfaces of a degree through a curve.
    Hypersurfaces {
        /// `P3`, `P4`, ... or `P1xP2`
        #[arg(long)]
        ambient: String,
        /// Curve degree, `12` or `7,10`.
        #[arg(long)]
        degree: String,
        #[arg(long)]
        genus: i64,
        /// Hypersurface degree, `5` or `2,4`.
        #[arg(long)]
        form: String,
    },
    /// Brill–Noether number rho(g, r, d).
    Rho { g: i64, r: i64, d: i64 },
    /// `(h^0(K - H), deg(K - H))` for genus g, degree d in P^r.
    SerreDual { g: i64, d: i64, r: i64 },
}

fn parse_ints(s: &str) -> Result<Vec<i64>, String> {
    s.split(',').map(|x| x.trim().parse::<i64>().map_err(|_| format!("bad integer `{x}`"))).collect()
}

fn parse_ambient(s: &str) -> Result<Ambient, String> {
    let t = s.trim().to_ascii_uppercase().replace(['^', ' '], "");
    if t == "P1XP2" {
        return Ok(Ambient::P1xP2);
    }
    t.strip_prefix('P').and_then(|r| r.parse().ok()).map(Ambient::Projective).ok_or_else(|| format!("unknown ambient `{s}`"))
}

fn run(cli: Cli) -> Result<bool, String> {
    let err = |e: llab::Error| e.to_string();
    match cli.command {
        Command::Pipeline { name, prime, seed, fixture, out, format } => {
            let name: PipelineName = name.parse().map_err(err)?;
            let mut spec = PipelineSpec::new(name, prime, seed);
            if let Some(f) = fixture {
                spec = spec.with_fixture(f);
            }
            let report = run_pipeline(&spec).map_err(err)?;
            print!("{}", emit_report(&report, format, None).map_err(err)?);
            if let Some(path) = out {
                emit_report(&report, Format::Json, Some(&path)).map_err(err)?;
            }
            Ok(report.passed())
        }
        Command::Link { fixture, degrees, points, seed, out } => {
            let ideal = ingest_ideal(&fixture, None).map_err(err)?.ideal;
            let ring = ideal.ring().clone();
            let amb = ring.ambient().ok_or("the fixture ring is neither P^r nor P^1 x P^2")?;
            let degs: Vec<MultiDegree> = match amb {
                Ambient::Projective(_) => parse_ints(&degrees)?.into_iter().map(MultiDegree::single).collect(),
                Ambient::P1xP2 => degrees
                    .split(',')
                    .map(|p| {
                        let v = parse_ints(&p.replace(':', ","))?;
                        match v[..] {
                            [a, b] => Ok(MultiDegree::bi(a, b)),
                            _ => Err(format!("bidegree `{p}` needs the form a:b")),
                        }
                    })
                    .collect::<Result<_, String>>()?,
            };
            let mut spec = LinkageSpec::new(amb, degs, None, seed).map_err(err)?;
            if points > 0 {
                let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed ^ 0x9017);
                spec = spec.with_points(PointSet::random(&ring, points, &mut rng).map_err(err)?).map_err(err)?;
            }
            let inv = curve_invariants(&ideal).map_err(err)?;
            let predicted: CurveInvariants = predicted_link(&inv, &spec).map_err(err)?;
            let pl = link_imposing_points(&ideal, &spec).map_err(err)?;
            let v = verify_linkage(&pl.result);
            println!("curve      {inv}");
            println!("predicted  {predicted}");
            println!("computed   {}", pl.result.computed);
            for (clause, ok) in v.clauses() {
                println!("{:<22} {}", clause, if ok { "yes" } else { "no" });
            }
            if points > 0 {
                println!("{:<22} {}", "points on residual", if pl.on_residual { "yes" } else { "no" });
            }
            if let Some(path) = out {
                export_ideal(&pl.result.residual, &path).map_err(err)?;
            }
            Ok(v.pass() && (points == 0 || pl.on_residual))
        }
        Command::Hilbert { fixture, upto } => {
            let got = ingest_ideal(&fixture, None).map_err(err)?;
            if got.saturated_on_ingest {
                eprintln!("warning: the file's ideal was not saturated; using its saturation");
            }
            let ideal = got.ideal;
            let hp = hilbert_polynomial(&ideal).map_err(err)?;
            println!("Hilbert polynomial  {}", hp.polynomial);
            println!("regularity bound    {}", hp.regularity);
            if let Ok(inv) = curve_invariants(&ideal) {
                println!("curve               {inv}");
            }
            let k = ideal.ring().grading_rank();
            for t in 0..=upto {
                let row: Vec<String> = if k == 1 {
                    vec![hilbert_function(&ideal, &MultiDegree::single(t)).to_string()]
                } else {
                    (0..=t).map(|a| format!("{}:{}", MultiDegree::bi(a, t - a), hilbert_function(&ideal, &MultiDegree::bi(a, t - a)))).collect()
                };
                println!("  {t:>3}  {}", row.join("  "));
            }
            Ok(true)
        }
        Command::Count { what } => {
            match what {
                Count::Hypersurfaces { ambient, degree, genus, form } => {
                    let ambient = parse_ambient(&ambient)?;
                    let inv = CurveInvariants { ambient, dim: 1, degree: parse_ints(&degree)?, genus };
                    let n = expected_hypersurfaces(&inv, &MultiDegree(parse_ints(&form)?)).map_err(err)?;
                    println!("{n}");
                }
                Count::Rho { g, r, d } => println!("{}", rho(g, r, d)),
                Count::SerreDual { g, d, r } => {
                    let (h0, deg) = serre_dual_counts(g, d, r).map_err(err)?;
                    println!("h0 {h0} degree {deg}");
                }
            }
            Ok(true)
        }
        Command::Fixture { kind, prime, seed, out } => {
            let kind: FixtureKind = kind.parse().map_err(err)?;
            let fx = fixture_build(kind, prime, seed).map_err(err)?;
            for line in &fx.provenance {
                eprintln!("# {line}");
            }
            match out {
                Some(path) => export_ideal(&fx.ideal, &path).map_err(err)?,
                None => print!("{}", llab::io::format_ideal(&fx.ideal)),
            }
            Ok(true)
        }
        Command::Table3 { format } => {
            let rows = liaison_plan_table().map_err(err)?;
            match format {
                Format::Json => println!("{}", serde_json::to_string_pretty(&rows).map_err(|e| e.to_string())?),
                Format::Text => {
                    println!("{:>3} {:>3} {:>3} {:>3} {:>5} {:>3} {:>3} {:>3}", "g", "m", "d", "r", "L", "g'", "d'", "n");
                    for r in rows {
                        println!("{:>3} {:>3} {:>3} {:>3} {:>5} {:>3} {:>3} {:>3}", r.g, r.m, r.d, r.r, r.linkage_type(), r.g_prime, r.d_prime, r.n);
                    }
                }
            }
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
