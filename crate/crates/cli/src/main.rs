mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use num_rational::BigRational;
use serde_json::{json, Value};

use ellext::census::{EnumLimits, PrimeCensus};
use ellext::counting::{exact_counts_dp, exact_counts_enumerative, exact_counts_series, CountTable};
use ellext::lfunc::{build_f_series, g_at_one, verify_identity, Identity, ProductConfig};
use ellext::numeric::to_scientific;
use ellext::series::Enclosure;
use ellext::tauberian::{
    binomial_pole_series, c1_c2_real, gamma_ratio_check, keyhole_integral_check, AsymptoticModel,
};
use ellext::verify::{self, VerifyConfig};
use ellext::{Error, FieldParams};

use output::{Format, Table};

/// Counts and asymptotics of abelian prime-degree extensions of F_q(t).
#[derive(Parser)]
#[command(name = "ellext", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Csv, global = true)]
    format: Format,
    /// Write to this file instead of standard output.
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,
}

#[derive(Args, Clone, Copy)]
struct FieldArgs {
    /// Size of the constant field (a prime power).
    #[arg(long)]
    q: u64,
    /// Degree of the extensions (a prime not dividing q).
    #[arg(long)]
    ell: u64,
}

impl FieldArgs {
    fn params(&self) -> Result<FieldParams, Error> {
        FieldParams::new(self.q, self.ell)
    }
}

#[derive(Args, Clone, Copy)]
struct ProductArgs {
    /// Largest prime degree in partial Euler products.
    #[arg(long, default_value_t = 20)]
    cutoff: u32,
    /// Significant digits carried and printed.
    #[arg(long, default_value_t = 30)]
    precision: usize,
}

impl ProductArgs {
    fn config(&self) -> ProductConfig {
        ProductConfig {
            cutoff: self.cutoff,
            digits: self.precision,
            required_digits: None,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Number of monic irreducible polynomials of each degree.
    Census {
        #[arg(long)]
        q: u64,
        #[arg(long, default_value_t = 10)]
        max_deg: u32,
        /// Also list the polynomials (prime q only, within the enumeration budget).
        #[arg(long)]
        lists: bool,
    },
    /// Coefficients b_{alpha n} of the Euler product f.
    Coeffs {
        #[command(flatten)]
        field: FieldArgs,
        /// Series order N.
        #[arg(long, default_value_t = 60)]
        order: usize,
    },
    /// Exact counts a_ell(n).
    Count {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long, default_value_t = 60)]
        max_n: usize,
        #[arg(long, value_enum, default_value_t = Oracle::Series)]
        oracle: Oracle,
    },
    /// Asymptotic model: Q, c1, c2 and r by both routes.
    Asympt {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long, default_value_t = 60)]
        order: usize,
        #[command(flatten)]
        product: ProductArgs,
    },
    /// Exact a_ell(n) against the model's prediction.
    Compare {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long, default_value_t = 60)]
        order: usize,
        /// First n to tabulate.
        #[arg(long, default_value_t = 1)]
        from: usize,
        /// Last n to tabulate (defaults to the order).
        #[arg(long)]
        to: Option<usize>,
        #[arg(long, default_value_t = 30)]
        precision: usize,
    },
    /// Numerical checks of the expansion for a pole of non-integer order.
    Tauberian {
        #[arg(long, value_enum, default_value_t = Demo::Binomial)]
        demo: Demo,
        /// Pole order w.
        #[arg(long, default_value_t = 0.5)]
        w: f64,
        /// Base q (binomial demo uses q^a = q with a = 1).
        #[arg(long, default_value_t = 4.0)]
        q: f64,
        /// Exponent a of the pole location q^{-a}.
        #[arg(long, default_value_t = 1.0)]
        a: f64,
        /// δ of the keyhole integral.
        #[arg(long, default_value_t = 0.5)]
        delta: f64,
        /// Indices n to evaluate.
        #[arg(long, value_delimiter = ',', default_values_t = [10u64, 100, 1000, 10000])]
        n: Vec<u64>,
    },
    /// Coefficientwise check of the factorization identities.
    LemmaCheck {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long, default_value_t = 24)]
        order: usize,
        #[arg(long, value_enum, default_value_t = Which::All)]
        which: Which,
    },
    /// Run every identity and oracle-equivalence check.
    Verify {
        /// Largest prime degree for the product route to r.
        #[arg(long, default_value_t = 40)]
        cutoff: u32,
        #[arg(long, default_value_t = 60)]
        order: usize,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Oracle {
    Series,
    Dp,
    Enumerative,
    All,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Demo {
    Binomial,
    GammaRatio,
    Keyhole,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Which {
    ZetaFactorization,
    LemmaF,
    CubicEven,
    All,
}

enum Failure {
    Library(Error),
    Verification(String),
    Io(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Library(e)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verification(msg)) => {
            eprintln!("verification failed: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Library(e)) => {
            eprintln!("error: {e}");
            match e {
                Error::BudgetExceeded(_) => ExitCode::from(3),
                Error::Quadrature(_) | Error::NonIntegral { .. } | Error::NonPositive(_) => ExitCode::from(1),
                _ => ExitCode::from(2),
            }
        }
        Err(Failure::Io(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}

fn emit(cli: &Cli, doc: Document) -> Result<(), Failure> {
    let text = match (cli.format, doc) {
        (Format::Csv, Document::Table(t)) => t.to_csv().map_err(Failure::Io)?,
        (Format::Json, Document::Table(t)) => t.to_json(),
        (Format::Json, Document::Object(v)) => serde_json::to_string_pretty(&v).expect("serializable") + "\n",
        (Format::Csv, Document::Object(v)) => Table::from_object(&v).to_csv().map_err(Failure::Io)?,
    };
    match &cli.output {
        Some(path) => std::fs::write(path, text).map_err(|e| Failure::Io(format!("{}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

enum Document {
    Table(Table),
    Object(Value),
}

fn enclosure_json(e: &Enclosure, digits: usize) -> Value {
    json!({
        "value": to_scientific(&e.value, digits),
        "radius": output::radius_string(&e.radius),
    })
}

fn run(cli: &Cli) -> Result<(), Failure> {
    let doc = match &cli.command {
        Command::Census { q, max_deg, lists } => {
            let census = if *lists {
                PrimeCensus::with_lists(*q, *max_deg, &EnumLimits::from_env())?
            } else {
                PrimeCensus::new(*q, *max_deg)?
            };
            let mut header = vec!["degree", "count"];
            if *lists {
                header.push("polynomials");
            }
            let mut table = Table::new(&header);
            for d in 1..=*max_deg {
                let mut row = vec![d.to_string(), census.count(d).to_string()];
                if let Some(l) = census.lists() {
                    row.push(l[&d].iter().map(|p| p.to_string()).collect::<Vec<_>>().join("; "));
                }
                table.push(row);
            }
            Document::Table(table)
        }
        Command::Coeffs { field, order } => {
            let params = field.params()?;
            let census = PrimeCensus::new(params.q, params.alpha * *order as u32)?;
            let f = build_f_series(&params, &census, *order)?;
            let mut table = Table::new(&["n", "degree", "b"]);
            for (n, b) in f.integer_coeffs().expect("integral").iter().enumerate() {
                table.push(vec![n.to_string(), (params.alpha as usize * n).to_string(), b.to_string()]);
            }
            Document::Table(table)
        }
        Command::Count { field, max_n, oracle } => {
            let table = count_table(field, *max_n, *oracle)?;
            let failure = table.failure.clone();
            emit(cli, Document::Table(table))?;
            return match failure {
                Some(msg) => Err(Failure::Verification(msg)),
                None => Ok(()),
            };
        }
        Command::Asympt { field, order, product } => Document::Object(asympt(field, *order, product)?),
        Command::Compare {
            field,
            order,
            from,
            to,
            precision,
        } => {
            let params = field.params()?;
            let to = to.unwrap_or(*order).min(*order);
            let census = PrimeCensus::new(params.q, params.alpha * *order as u32)?;
            let model = AsymptoticModel::for_field(&params, &census, *order)?;
            let counts = exact_counts_series(&params, &census, *order)?;
            let mut exact = vec![BigInt::from(0)];
            exact.extend(counts.values().iter().cloned());
            let factor = BigRational::new(BigInt::from(2), BigInt::from(params.ell - 1));
            let mut table = Table::new(&["n", "exact", "predicted", "residual", "residual_exponent"]);
            for row in model.compare_scaled(&exact, (*from).max(1)..=to, &factor) {
                table.push(vec![
                    row.n.to_string(),
                    row.exact.to_string(),
                    to_scientific(&row.predicted, *precision),
                    to_scientific(&row.residual, *precision),
                    row.residual_exponent.map(|e| format!("{e:.6}")).unwrap_or_default(),
                ]);
            }
            Document::Table(table)
        }
        Command::Tauberian { demo, w, q, a, delta, n } => Document::Table(tauberian(*demo, *w, *q, *a, *delta, n)?),
        Command::LemmaCheck { field, order, which } => {
            let params = field.params()?;
            let census = PrimeCensus::new(params.q, params.alpha.max(2) * *order as u32)?;
            let list: Vec<Identity> = match which {
                Which::ZetaFactorization => vec![Identity::ZetaFactorization],
                Which::LemmaF => vec![Identity::LemmaF],
                Which::CubicEven => vec![Identity::CubicEven],
                Which::All => {
                    let mut v = vec![Identity::ZetaFactorization, Identity::LemmaF];
                    if params.ell == 3 && params.q % 3 == 2 {
                        v.push(Identity::CubicEven);
                    }
                    v
                }
            };
            let mut table = Table::new(&["identity", "order", "holds", "first_mismatch"]);
            let mut failed = None;
            for id in list {
                let check = verify_identity(id, &params, &census, *order)?;
                let name = match id {
                    Identity::ZetaFactorization => "zeta-factorization",
                    Identity::LemmaF => "lemma-f",
                    Identity::CubicEven => "cubic-even",
                };
                if let Some(i) = check.first_mismatch {
                    failed.get_or_insert(format!("{name} at index {i}"));
                }
                table.push(vec![
                    name.to_string(),
                    order.to_string(),
                    check.holds.to_string(),
                    check.first_mismatch.map(|i| i.to_string()).unwrap_or_default(),
                ]);
            }
            emit(cli, Document::Table(table))?;
            return match failed {
                Some(msg) => Err(Failure::Verification(msg)),
                None => Ok(()),
            };
        }
        Command::Verify { cutoff, order } => {
            let config = VerifyConfig {
                model_order: *order,
                product: ProductConfig::with_cutoff(*cutoff),
                ..VerifyConfig::default()
            };
            let mut started = std::time::Instant::now();
            let outcomes = verify::run(&config, |o| {
                let secs = started.elapsed().as_secs_f64();
                eprintln!("{} {} ({secs:.1}s): {}", if o.passed { "PASS" } else { "FAIL" }, o.name, o.detail);
                started = std::time::Instant::now();
            })?;
            let mut table = Table::new(&["check", "passed", "detail"]);
            for o in &outcomes {
                table.push(vec![o.name.to_string(), o.passed.to_string(), o.detail.clone()]);
            }
            emit(cli, Document::Table(table))?;
            return match outcomes.iter().find(|o| !o.passed) {
                Some(o) => Err(Failure::Verification(format!("{}: {}", o.name, o.detail))),
                None => Ok(()),
            };
        }
    };
    emit(cli, doc)
}

fn count_table(field: &FieldArgs, max_n: usize, oracle: Oracle) -> Result<Table, Failure> {
    let params = field.params()?;
    let limits = EnumLimits::from_env();
    let census = || PrimeCensus::new(params.q, params.alpha * max_n as u32);
    let tables: Vec<CountTable> = match oracle {
        Oracle::Series => vec![exact_counts_series(&params, &census()?, max_n)?],
        Oracle::Dp => vec![exact_counts_dp(&params, &census()?, max_n)?],
        Oracle::Enumerative => vec![exact_counts_enumerative(params.q, params.ell, max_n, &limits)?],
        Oracle::All => {
            let c = census()?;
            vec![
                exact_counts_series(&params, &c, max_n)?,
                exact_counts_dp(&params, &c, max_n)?,
                exact_counts_enumerative(params.q, params.ell, max_n, &limits)?,
            ]
        }
    };
    if tables.len() == 1 {
        let mut table = Table::new(&["n", "a"]);
        for n in 1..=max_n {
            table.push(vec![n.to_string(), tables[0].get(n).to_string()]);
        }
        return Ok(table);
    }
    let mut table = Table::new(&["n", "series", "dp", "enumerative", "agree"]);
    let mut mismatch = None;
    for n in 1..=max_n {
        let vals: Vec<&BigInt> = tables.iter().map(|t| t.get(n)).collect();
        let agree = vals.iter().all(|v| *v == vals[0]);
        if !agree {
            mismatch.get_or_insert(n);
        }
        let mut row: Vec<String> = vals.iter().map(|v| v.to_string()).collect();
        row.insert(0, n.to_string());
        row.push(agree.to_string());
        table.push(row);
    }
    if let Some(n) = mismatch {
        table.failure = Some(format!("routes disagree at n = {n}"));
    }
    Ok(table)
}

fn asympt(field: &FieldArgs, order: usize, product: &ProductArgs) -> Result<Value, Failure> {
    let params = field.params()?;
    let config = product.config();
    let digits = product.precision;
    let depth = (params.alpha * order as u32).max(config.cutoff);
    let census = PrimeCensus::new(params.q, depth)?;
    let model = AsymptoticModel::for_field(&params, &census, order)?;
    let g = g_at_one(&params, &census, &config)?;
    let log_factor = (params.alpha as f64 * (params.q as f64).ln()).powi(params.w as i32);
    let r_series = model.r.expect("field model");
    let r_product = g.value.value_f64() / log_factor;
    let r_product_radius = g.value.radius_f64() / log_factor;
    let q_desc: Vec<Value> = model.q_coeffs.iter().rev().map(|c| enclosure_json(c, digits)).collect();
    Ok(json!({
        "q": params.q.to_string(),
        "ell": params.ell.to_string(),
        "alpha": params.alpha,
        "w": params.w,
        "order": order,
        "cutoff": config.cutoff,
        "r": {
            "series": {"value": format!("{:.17e}", r_series.value), "radius": format!("{:.3e}", r_series.radius)},
            "product": {"value": format!("{r_product:.17e}"), "radius": format!("{r_product_radius:.3e}")},
        },
        "Q": q_desc,
        "c1": enclosure_json(&model.c1, digits),
        "c2": model.c2.as_ref().map(|c| enclosure_json(c, digits)),
        "g_at_one": {
            "value": g.value.to_scientific(digits),
            "radius": output::radius_string(&g.value.radius()),
        },
        "g_prime_over_log_q": {
            "value": g.derivative_over_log_q.to_scientific(digits),
            "radius": output::radius_string(&g.derivative_over_log_q.radius()),
        },
        "secondary_radius_exponent": model.secondary_radius_exponent,
    }))
}

fn tauberian(demo: Demo, w: f64, q: f64, a: f64, delta: f64, ns: &[u64]) -> Result<Table, Failure> {
    Ok(match demo {
        Demo::Binomial => {
            if w.is_nan() || w <= 0.0 {
                return Err(Error::InvalidParameter(format!("w = {w} must be positive")).into());
            }
            let q_a = q.powf(a);
            let top = *ns.iter().max().unwrap_or(&0) as usize;
            let coefs = binomial_pole_series(w, top);
            let (c1, c2) = c1_c2_real(q_a.powf(-w), 0.0, q_a, w);
            let mut table = Table::new(&["n", "normalized", "c1_estimate", "c1_estimate_corrected", "c1", "c2"]);
            for &n in ns {
                let nf = n as f64;
                let raw = coefs[n as usize] * nf.powf(1.0 - w);
                let corrected = raw / (1.0 + c2 / (c1 * nf));
                table.push(vec![
                    n.to_string(),
                    format!("{:.15e}", coefs[n as usize]),
                    format!("{raw:.15e}"),
                    format!("{corrected:.15e}"),
                    format!("{c1:.15e}"),
                    format!("{c2:.15e}"),
                ]);
            }
            table
        }
        Demo::GammaRatio => {
            let mut table = Table::new(&["t", "n", "ratio", "prediction", "residual"]);
            for &n in ns {
                let c = gamma_ratio_check(w, n)?;
                table.push(vec![
                    w.to_string(),
                    n.to_string(),
                    format!("{:.15e}", c.ratio),
                    format!("{:.15e}", c.prediction),
                    format!("{:.6e}", c.residual),
                ]);
            }
            table
        }
        Demo::Keyhole => {
            let mut table = Table::new(&["n", "integral", "prediction", "relative_error"]);
            for &n in ns {
                let c = keyhole_integral_check(a, w, delta, q, n)?;
                table.push(vec![
                    n.to_string(),
                    format!("{:.12e}", c.integral),
                    format!("{:.12e}", c.prediction),
                    format!("{:.6e}", c.relative_error),
                ]);
            }
            table
        }
    })
}
