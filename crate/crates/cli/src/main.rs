//! genus-forge: genus evaluation, exact q-expansions, regularized
//! determinants and the verification suites.
//!
//! Exit codes: 0 all checks pass, 1 a verification check failed,
//! 2 usage or parse error.

mod output;
mod suites;

use clap::{Parser, Subcommand, ValueEnum};
use genus_forge_core::charclass::{
    ahat_series, genus_evaluate, multiplicative_class, witten_series_q, witten_series_tokens,
    ManifoldData, WittenVariant,
};
use genus_forge_core::modular::{
    dedekind_eta_qseries, eisenstein_q_normalized, eisenstein_q_classical, Lattice,
};
use genus_forge_core::ring::format_rat;
use genus_forge_core::zetadet::{
    fredholm_oracle_11, lattice_oracle_21, sdet_zeta_11, sdet_zeta_21, CurvatureModel, DetValue,
    KineticOperator,
};
use num_complex::Complex64;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "genus-forge", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a genus against a manifold description file.
    Genus {
        #[arg(long, value_enum)]
        class: GenusClass,
        /// JSON file: {"name":..., "dim":..., "pontryagin_numbers":{"p1":...},
        /// "rational_string":...}
        #[arg(long)]
        manifold: String,
        #[arg(long, default_value_t = 60)]
        q_order: i64,
    },
    /// Print exact q-expansions.
    Qexpand {
        #[arg(long, value_enum)]
        series: SeriesKind,
        #[arg(long, default_value_t = 1)]
        k: u32,
        #[arg(long, default_value_t = 60)]
        order: i64,
        #[arg(long, value_enum, default_value_t = Convention::Classical)]
        convention: Convention,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
    /// Evaluate regularized determinants and their mode-sum oracles.
    Det {
        #[arg(long, value_enum)]
        model: DetModel,
        /// numeric: CSV rows of a skew matrix; formal: "blocks K"
        #[arg(long)]
        curvature: String,
        #[arg(long, default_value_t = 100_000)]
        modes: u64,
        #[arg(long)]
        radius: Option<f64>,
        /// tau as "a+bi"
        #[arg(long)]
        tau: Option<String>,
        #[arg(long, default_value_t = false)]
        relative: bool,
        /// run the truncated mode/shell oracle instead of the closed form
        #[arg(long, default_value_t = false)]
        oracle: bool,
        #[arg(long, default_value_t = 2000)]
        cutoff: u32,
        #[arg(long, default_value_t = 60)]
        q_order: i64,
    },
    /// Run the verification suites.
    Verify {
        #[arg(long, default_value = "all")]
        suite: String,
        #[arg(long, default_value_t = 8)]
        cap: u32,
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
        #[arg(long, default_value_t = 7)]
        seed: u64,
        #[arg(long, default_value_t = 60)]
        q_order: i64,
        #[arg(long, default_value_t = 2000)]
        cutoff: u32,
        #[arg(long, default_value_t = 20_000)]
        modes: u64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum GenusClass {
    Ahat,
    Witten,
    WittenStar,
    WittenString,
}

#[derive(Clone, Copy, ValueEnum)]
enum SeriesKind {
    E2k,
    Eta,
    E2starCoeffs,
}

#[derive(Clone, Copy, ValueEnum, PartialEq)]
enum Convention {
    Classical,
    Normalized,
}

#[derive(Clone, Copy, ValueEnum, PartialEq)]
enum Format {
    Csv,
    Text,
}

#[derive(Clone, Copy, ValueEnum)]
enum DetModel {
    #[value(name = "1-1")]
    OneOne,
    #[value(name = "2-1")]
    TwoOne,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(all_passed) => {
            if all_passed {
                ExitCode::from(0)
            } else {
                ExitCode::from(1)
            }
        }
        Err(msg) => {
            eprintln!("error: {}", msg);
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<bool, String> {
    match cli.command {
        Command::Genus {
            class,
            manifold,
            q_order,
        } => {
            let text = std::fs::read_to_string(&manifold)
                .map_err(|e| format!("cannot read {}: {}", manifold, e))?;
            let m = ManifoldData::from_json(&text).map_err(|e| e.to_string())?;
            run_genus(class, &m, q_order)?;
            Ok(true)
        }
        Command::Qexpand {
            series,
            k,
            order,
            convention,
            format,
        } => {
            run_qexpand(series, k, order, convention, format)?;
            Ok(true)
        }
        Command::Det {
            model,
            curvature,
            modes,
            radius,
            tau,
            relative,
            oracle,
            cutoff,
            q_order,
        } => {
            run_det(
                model, &curvature, modes, radius, tau, relative, oracle, cutoff, q_order,
            )?;
            Ok(true)
        }
        Command::Verify {
            suite,
            cap,
            tol,
            seed,
            q_order,
            cutoff,
            modes,
        } => {
            let config = suites::SuiteConfig {
                cap,
                tol,
                seed,
                q_order,
                cutoff,
                modes,
            };
            let threads = read_thread_cap()?;
            suites::run_suites(&suite, &config, threads)
        }
    }
}

fn read_thread_cap() -> Result<usize, String> {
    match std::env::var("GENUSFORGE_THREADS") {
        Ok(v) => {
            let n: usize = v
                .parse()
                .map_err(|_| format!("GENUSFORGE_THREADS must be a positive integer, got '{}'", v))?;
            if n == 0 {
                return Err("GENUSFORGE_THREADS must be positive".into());
            }
            Ok(n)
        }
        Err(_) => Ok(1),
    }
}

fn run_genus(class: GenusClass, m: &ManifoldData, q_order: i64) -> Result<(), String> {
    let z_order = m.dim as i64 + 2;
    match class {
        GenusClass::Ahat => {
            let series = ahat_series(z_order.max(4)).map_err(|e| e.to_string())?;
            let cls = multiplicative_class(&series.series, m.dim);
            let g = genus_evaluate(&cls, m).map_err(|e| e.to_string())?;
            println!("{}", format_rat(&g.value));
        }
        GenusClass::Witten => {
            let series = witten_series_q(WittenVariant::Holo, z_order.max(4), q_order)
                .map_err(|e| e.to_string())?;
            let cls = multiplicative_class(&series, m.dim);
            let g = genus_evaluate(&cls, m).map_err(|e| e.to_string())?;
            print!("{}", g.value.to_csv_exact());
        }
        GenusClass::WittenStar => {
            let series = witten_series_tokens(WittenVariant::NonHolo, z_order.max(4));
            let cls = multiplicative_class(&series, m.dim);
            let g = genus_evaluate(&cls, m).map_err(|e| e.to_string())?;
            println!("{}", g.value);
        }
        GenusClass::WittenString => {
            if !m.rational_string {
                return Err(format!(
                    "'{}' has no rational string structure: the string-twisted volume \
                     form fails to exist without one",
                    m.name
                ));
            }
            let series = witten_series_q(WittenVariant::String, z_order.max(4), q_order)
                .map_err(|e| e.to_string())?;
            let cls = multiplicative_class(&series, m.dim);
            let g = genus_evaluate(&cls, m).map_err(|e| e.to_string())?;
            let top = g.value;
            println!(
                "# degree-{} pairing (q-series), then the class constant term",
                m.dim
            );
            if top.is_zero() {
                println!("0");
            } else {
                print!("{}", top.to_csv_exact());
            }
            let constant = cls.coeff(&Vec::new());
            println!("# constant term:");
            print!("{}", constant.to_csv_exact());
        }
    }
    Ok(())
}

fn run_qexpand(
    series: SeriesKind,
    k: u32,
    order: i64,
    convention: Convention,
    format: Format,
) -> Result<(), String> {
    match series {
        SeriesKind::E2k => {
            if k < 1 {
                return Err("k must be >= 1".into());
            }
            match convention {
                Convention::Normalized => {
                    let s = eisenstein_q_normalized(k, order).map_err(|e| e.to_string())?;
                    match format {
                        Format::Csv => print!("{}", s.to_csv_exact()),
                        Format::Text => {
                            println!("{}", genus_forge_core::series::format_series_text(&s))
                        }
                    }
                }
                Convention::Classical => {
                    let s = eisenstein_q_classical(k, order).map_err(|e| e.to_string())?;
                    print!("{}", output::pi_graded_series_output(&s, format == Format::Csv));
                }
            }
        }
        SeriesKind::Eta => {
            let s = dedekind_eta_qseries(order).map_err(|e| e.to_string())?;
            match format {
                Format::Csv => print!("{}", s.to_csv_exact()),
                Format::Text => println!("{}", genus_forge_core::series::format_series_text(&s)),
            }
        }
        SeriesKind::E2starCoeffs => {
            let s = eisenstein_q_classical(1, order).map_err(|e| e.to_string())?;
            println!("# holomorphic part; the full value subtracts pi/Im(tau), extended by weight -2 dilation");
            print!("{}", output::pi_graded_series_output(&s, format == Format::Csv));
        }
    }
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn run_det(
    model: DetModel,
    curvature_path: &str,
    modes: u64,
    radius: Option<f64>,
    tau: Option<String>,
    relative: bool,
    oracle: bool,
    cutoff: u32,
    q_order: i64,
) -> Result<(), String> {
    let text = std::fs::read_to_string(curvature_path)
        .map_err(|e| format!("cannot read {}: {}", curvature_path, e))?;
    let curvature = parse_curvature(&text)?;
    match model {
        DetModel::OneOne => {
            let r = radius.ok_or("--radius required for the 1-1 model")?;
            let op = KineticOperator::circle(r, curvature).map_err(|e| e.to_string())?;
            if oracle {
                let v = fredholm_oracle_11(&op, modes).map_err(|e| e.to_string())?;
                println!("{:.16e}", v);
            } else {
                match sdet_zeta_11(&op, relative).map_err(|e| e.to_string())?.value {
                    DetValue::Numeric(v) => println!("{:.16e}", v.re),
                    DetValue::Formal11(c) => println!("{}", c.render("p")),
                    DetValue::Formal21(_) => unreachable!(),
                }
            }
        }
        DetModel::TwoOne => {
            let tau_str = tau.ok_or("--tau required for the 2-1 model")?;
            let tau = parse_complex(&tau_str)?;
            let lat = Lattice::from_tau(tau).map_err(|e| e.to_string())?;
            let op = KineticOperator::torus(lat, curvature);
            if oracle {
                let o = lattice_oracle_21(&op, cutoff).map_err(|e| e.to_string())?;
                for (k, v) in &o.truncated_eisenstein {
                    println!("E{}_truncated,{:.16e},{:.16e}", 2 * k, v.re, v.im);
                }
                if let Some(v) = o.value {
                    println!("assembled,{:.16e},{:.16e}", v.re, v.im);
                }
            } else {
                match sdet_zeta_21(&op, relative, q_order)
                    .map_err(|e| e.to_string())?
                    .value
                {
                    DetValue::Numeric(v) => println!("{:.16e},{:.16e}", v.re, v.im),
                    DetValue::Formal21(c) => println!("{}", c.render("p")),
                    DetValue::Formal11(_) => unreachable!(),
                }
            }
        }
    }
    Ok(())
}

fn parse_curvature(text: &str) -> Result<CurvatureModel, String> {
    let trimmed = text.trim();
    if let Some(rest) = trimmed.strip_prefix("blocks") {
        let blocks: usize = rest
            .trim()
            .parse()
            .map_err(|_| "blocks count must be an integer".to_string())?;
        return Ok(CurvatureModel::FormalBlocks { blocks });
    }
    let mut rows = Vec::new();
    for line in trimmed.lines() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let row: Result<Vec<f64>, _> = line.split(',').map(|x| x.trim().parse::<f64>()).collect();
        rows.push(row.map_err(|e| format!("bad matrix entry: {}", e))?);
    }
    if rows.is_empty() {
        return Err("empty curvature file".into());
    }
    Ok(CurvatureModel::Numeric(rows))
}

fn parse_complex(text: &str) -> Result<Complex64, String> {
    // forms like "a+bi", "a-bi", "bi", "a"
    let t = text.trim().replace(' ', "");
    if let Some(stripped) = t.strip_suffix('i') {
        // find the split between real and imaginary parts
        let bytes = stripped.as_bytes();
        for pos in (1..bytes.len()).rev() {
            if bytes[pos] == b'+' || bytes[pos] == b'-' {
                let re: f64 = stripped[..pos]
                    .parse()
                    .map_err(|_| format!("bad complex number '{}'", text))?;
                let im_str = &stripped[pos..];
                let im: f64 = if im_str == "+" {
                    1.0
                } else if im_str == "-" {
                    -1.0
                } else {
                    im_str
                        .parse()
                        .map_err(|_| format!("bad complex number '{}'", text))?
                };
                return Ok(Complex64::new(re, im));
            }
        }
        let im: f64 = stripped
            .parse()
            .map_err(|_| format!("bad complex number '{}'", text))?;
        return Ok(Complex64::new(0.0, im));
    }
    let re: f64 = t
        .parse()
        .map_err(|_| format!("bad complex number '{}'", text))?;
    Ok(Complex64::new(re, 0.0))
}
