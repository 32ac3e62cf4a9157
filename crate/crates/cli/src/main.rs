use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

/// Writes to stdout, ignoring a closed pipe (e.g. `nilsurf ... | head`).
macro_rules! outln {
    ($($arg:tt)*) => {{
        use std::io::Write;
        let _ = writeln!(std::io::stdout(), $($arg)*);
    }};
}

macro_rules! out {
    ($($arg:tt)*) => {{
        use std::io::Write;
        let _ = write!(std::io::stdout(), $($arg)*);
    }};
}

use nilsurf_core::alexander::{
    alexander_from_torsion, torus_alexander, v_sequence, AlexanderPolynomial, VSequence,
};
use nilsurf_core::bounds;
use nilsurf_core::lens::{DVector, LensCache};
use nilsurf_core::matching::{match_candidate, MatchConfig, MatchProblem, Prefilter};
use nilsurf_core::nil;
use nilsurf_core::surgery::{oriented_d, SurgeryDescription};
use nilsurf_core::{Error, Sign};

#[derive(Parser)]
#[command(
    name = "nilsurf",
    about = "Exact d-invariants of lens spaces and knot surgeries, and the Nil Seifert fibred slope search",
    version
)]
struct Cli {
    /// Worker threads for the search drivers (default: all cores)
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Table,
    Json,
}

#[derive(Args)]
struct KnotArg {
    /// Torus knot "m,n", e.g. --knot 3,2
    #[arg(long, value_name = "M,N", conflicts_with = "v")]
    knot: Option<String>,
    /// Explicit V-sequence, e.g. --v 1,1,0
    #[arg(long, value_name = "V0,V1,..")]
    v: Option<String>,
}

impl KnotArg {
    fn v_sequence(&self) -> Result<VSequence, Error> {
        match (&self.knot, &self.v) {
            (Some(pair), None) => {
                let (m, n) = parse_pair(pair)?;
                let poly = torus_alexander(m, n)?;
                v_sequence(&poly).map_err(Error::from)
            }
            (None, Some(list)) => {
                let values = parse_list(list)?;
                VSequence::new(values).map_err(Error::from)
            }
            _ => Err(Error::BadParams(
                "exactly one of --knot or --v is required".into(),
            )),
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// d-invariants of the lens space L(p, q)
    Dlens {
        p: u64,
        q: i64,
        /// Print a single spin^c label instead of the whole vector
        #[arg(long)]
        label: Option<u64>,
        #[arg(long, value_enum, default_value = "table")]
        format: Format,
    },
    /// d-invariants of p/q surgery on a knot given by its V-sequence
    Dsurgery {
        #[command(flatten)]
        knot: KnotArg,
        p: u64,
        q: u64,
        /// Orientation sign applied to the result
        #[arg(long, default_value = "1", allow_hyphen_values = true)]
        epsilon: i64,
        #[arg(long, value_enum, default_value = "table")]
        format: Format,
    },
    /// Alexander polynomials and torsion coefficients
    Alex {
        #[command(subcommand)]
        which: AlexCommand,
    },
    /// Run the spin^c matching obstruction for one target
    Match {
        #[command(flatten)]
        knot: KnotArg,
        #[arg(long)]
        p: u64,
        #[arg(long)]
        q: u64,
        /// Candidate surgery denominator
        #[arg(long = "Q", default_value = "1")]
        cand_q: u64,
        #[arg(long, default_value = "1", allow_hyphen_values = true)]
        epsilon: i64,
        /// Disable the necessary-condition prefilter
        #[arg(long)]
        no_prefilter: bool,
        /// Prefilter probe stride
        #[arg(long, default_value = "1")]
        stride: u64,
        /// Enumerate the full range 0 < a < p instead of 0 < a < p/2
        #[arg(long)]
        full_a_range: bool,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Search all Nil Seifert fibred targets on the trefoil up to a bound
    NilSearch {
        #[arg(long, default_value = "2016")]
        pmax: u64,
        /// Also list survivors recovering the trefoil polynomial itself
        #[arg(long)]
        include_trefoil: bool,
        #[arg(long, value_enum, default_value = "table")]
        format: Format,
    },
    /// Finiteness certificate (N, C_k value count, slope bound)
    Bound {
        #[command(flatten)]
        knot: KnotArg,
        #[arg(long)]
        l: u64,
        #[arg(long)]
        r: u64,
        #[arg(long = "Q", default_value = "1")]
        cand_q: u64,
        /// Emit the 64-row degenerate-case table as CSV instead
        #[arg(long)]
        case_table: bool,
    },
    /// Cable slopes admitting Nil Seifert fibred surgeries
    Cables {
        #[arg(long, value_enum, default_value = "table")]
        format: Format,
    },
}

#[derive(Subcommand)]
enum AlexCommand {
    /// Polynomial of the torus knot T(m, n), optionally in t^w
    Torus {
        m: u64,
        n: u64,
        #[arg(long, default_value = "1")]
        power: u32,
        #[arg(long, value_enum, default_value = "table")]
        format: Format,
    },
    /// Polynomial of the (s, t)-cable over the trefoil
    Cable {
        s: u64,
        t: u64,
        #[arg(long, value_enum, default_value = "table")]
        format: Format,
    },
    /// Polynomial recovered from a V-sequence
    FromV {
        values: String,
        #[arg(long, value_enum, default_value = "table")]
        format: Format,
    },
}

fn parse_pair(arg: &str) -> Result<(u64, u64), Error> {
    let parts: Vec<&str> = arg.split(',').collect();
    if parts.len() != 2 {
        return Err(Error::BadParams(format!("expected \"m,n\", got {arg:?}")));
    }
    let m = parts[0]
        .trim()
        .parse()
        .map_err(|_| Error::Parse(format!("bad integer {:?}", parts[0])))?;
    let n = parts[1]
        .trim()
        .parse()
        .map_err(|_| Error::Parse(format!("bad integer {:?}", parts[1])))?;
    Ok((m, n))
}

fn parse_list(list: &str) -> Result<Vec<i64>, Error> {
    list.split(',')
        .map(|s| {
            s.trim()
                .parse()
                .map_err(|_| Error::Parse(format!("bad integer {s:?}")))
        })
        .collect()
}

fn print_dvector(d: &DVector, format: Format, label: Option<u64>) -> Result<(), Error> {
    if let Some(i) = label {
        if i >= d.p() {
            return Err(Error::LabelOutOfRange {
                label: i,
                order: d.p(),
            });
        }
        match format {
            Format::Table => outln!("{}", d.get(i)),
            Format::Json => {
                let (num, den) = nilsurf_core::numeric::rational_to_pair(d.get(i));
                outln!("{}", serde_json::json!([num, den]));
            }
        }
        return Ok(());
    }
    match format {
        Format::Table => {
            for (i, e) in d.entries().iter().enumerate() {
                outln!("{i} {e}");
            }
        }
        Format::Json => outln!("{}", pretty(&d.to_json())),
    }
    Ok(())
}

fn print_poly(poly: &AlexanderPolynomial, v: Option<&VSequence>, format: Format) {
    match format {
        Format::Table => {
            outln!("{}", poly.render());
            if let Some(v) = v {
                let vals: Vec<String> = v.values().iter().map(|x| x.to_string()).collect();
                outln!("V: [{}]", vals.join(", "));
            }
        }
        Format::Json => {
            let mut json = poly.to_json();
            if let Some(v) = v {
                json["V"] = serde_json::json!(v.values());
            }
            outln!("{}", pretty(&json));
        }
    }
}

fn pretty(v: &serde_json::Value) -> String {
    serde_json::to_string_pretty(v).expect("serializable")
}

fn sign_of(v: i64) -> Result<Sign, Error> {
    Sign::from_i64(v)
}

fn run(cli: Cli) -> Result<(), Error> {
    if let Some(jobs) = cli.jobs {
        // best effort; a later duplicate initialization is harmless
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global();
    }
    match cli.command {
        Command::Dlens {
            p,
            q,
            label,
            format,
        } => {
            let cache = LensCache::from_env();
            let d = cache.vector(p, q)?;
            print_dvector(&d, format, label)
        }
        Command::Dsurgery {
            knot,
            p,
            q,
            epsilon,
            format,
        } => {
            let desc = SurgeryDescription::new(knot.v_sequence()?, p, q, sign_of(epsilon)?)?;
            print_dvector(&oriented_d(&desc)?, format, None)
        }
        Command::Alex { which } => {
            match which {
                AlexCommand::Torus { m, n, power, format } => {
                    if power == 0 {
                        return Err(Error::BadParams("power must be positive".into()));
                    }
                    let poly = torus_alexander(m, n)?.substitute_power(power);
                    let v = v_sequence(&poly).ok();
                    print_poly(&poly, v.as_ref(), format);
                }
                AlexCommand::Cable { s, t, format } => {
                    let poly = nil::cable_polynomial(s, t)?;
                    let v = v_sequence(&poly).ok();
                    print_poly(&poly, v.as_ref(), format);
                }
                AlexCommand::FromV { values, format } => {
                    let v = VSequence::new(parse_list(&values)?)?;
                    let poly = alexander_from_torsion(&v);
                    print_poly(&poly, Some(&v), format);
                }
            }
            Ok(())
        }
        Command::Match {
            knot,
            p,
            q,
            cand_q,
            epsilon,
            no_prefilter,
            stride,
            full_a_range,
            format,
        } => {
            let desc = SurgeryDescription::new(knot.v_sequence()?, p, q, sign_of(epsilon)?)?;
            let problem = MatchProblem::new(desc, cand_q)?;
            let config = MatchConfig {
                prefilter: (!no_prefilter).then_some(Prefilter { stride, probes: 4 }),
                full_a_range,
            };
            let outcome = match_candidate(&problem, &config)?;
            match format {
                Format::Json => outln!("{}", pretty(&outcome.to_json())),
                Format::Table => {
                    outln!("p={} q={} Q={} epsilon={}", outcome.p, outcome.q, outcome.cand_q, outcome.epsilon);
                    if outcome.survivors.is_empty() {
                        outln!("no survivors");
                    }
                    for s in &outcome.survivors {
                        let vals: Vec<String> =
                            s.v.values().iter().map(|x| x.to_string()).collect();
                        outln!(
                            "a={} b={} alpha={} V=[{}] alexander: {}",
                            s.ident.a,
                            s.ident.b,
                            s.ident.alpha,
                            vals.join(", "),
                            s.alexander.render()
                        );
                    }
                }
            }
            Ok(())
        }
        Command::NilSearch {
            pmax,
            include_trefoil,
            format,
        } => {
            if pmax < 12 {
                return Err(Error::BadParams("pmax must be at least 12".into()));
            }
            let report = nil::nil_search(pmax, &nil::nil_config())?;
            match format {
                Format::Json => {
                    let mut json = report.to_json();
                    let count = json["trefoil_survivors"].as_array().map_or(0, |a| a.len());
                    json["trefoil_survivor_count"] = serde_json::json!(count);
                    if !include_trefoil {
                        json.as_object_mut().unwrap().remove("trefoil_survivors");
                    }
                    outln!("{}", pretty(&json));
                }
                Format::Table => {
                    outln!("surviving integer slopes up to {} (Q = 1):", report.p_max);
                    outln!("{:>5} {:>8} {:>5}  V / polynomial", "p", "epsilon", "q");
                    let rows: Box<dyn Iterator<Item = &nil::NilRow>> = if include_trefoil {
                        Box::new(report.survivors.iter().chain(&report.trefoil_survivors))
                    } else {
                        Box::new(report.survivors.iter())
                    };
                    for row in rows {
                        let vals: Vec<String> = row
                            .survivor
                            .v
                            .values()
                            .iter()
                            .map(|x| x.to_string())
                            .collect();
                        outln!(
                            "{:>5} {:>8} {:>5}  V=[{}]",
                            row.target.p,
                            row.epsilon.to_string(),
                            row.target.q,
                            vals.join(", ")
                        );
                        outln!("{:22}{}", "", row.survivor.alexander.render());
                    }
                    if !include_trefoil && !report.trefoil_survivors.is_empty() {
                        outln!(
                            "({} survivor(s) recovering the trefoil polynomial suppressed; rerun with --include-trefoil)",
                            report.trefoil_survivors.len()
                        );
                    }
                }
            }
            Ok(())
        }
        Command::Bound {
            knot,
            l,
            r,
            cand_q,
            case_table,
        } => {
            if case_table {
                out!("{}", bounds::nil_case_table_csv(&bounds::nil_case_table()));
                return Ok(());
            }
            let v = knot.v_sequence()?;
            let cert = bounds::certificate(&v, r, l, cand_q)?;
            outln!("{}", pretty(&cert.to_json()));
            Ok(())
        }
        Command::Cables { format } => {
            let cables = nil::cable_solutions();
            match format {
                Format::Json => {
                    let rows: Vec<serde_json::Value> = cables
                        .iter()
                        .map(|c| {
                            serde_json::json!({"s": c.s, "t": c.t, "p": c.p, "q": c.q})
                        })
                        .collect();
                    outln!("{}", pretty(&serde_json::json!(rows)));
                }
                Format::Table => {
                    outln!("cable  slope");
                    for c in cables {
                        outln!("({},{})  {}/{}", c.s, c.t, c.p, c.q);
                    }
                }
            }
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::FAILURE
        }
    }
}
