//! Command-line entry point: data ingestion, verification suites, and
//! report emission.
//!
//! Exit status: 0 = success/agreement, 1 = verification failure (reports
//! still written), 2 = input error.

use clap::{Parser, Subcommand, ValueEnum};
use moonhecke::error::Error;
use moonhecke::exact_arith::{format_rat, rat_int};
use moonhecke::finite_groups::{pair_classes, transitive_pair_classes, Group};
use moonhecke::formats;
use moonhecke::norton::NortonSeries;
use moonhecke::qseries::{faber, j_expansion, PuiseuxSeries};
use serde_json::{json, Value};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "moonhecke",
    about = "Exact Hecke operators, power operations and replicability checks on q-series over commuting pairs in finite groups",
    version
)]
struct Cli {
    /// Write a structured (JSON) report to this path in addition to the
    /// table on stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Expand j - 744; prints the q^-1 term plus terms through q^(K-1).
    JExpand {
        /// Number of series terms to print.
        #[arg(long)]
        terms: u64,
    },
    /// Compute the n-th Faber polynomial of a normalized series.
    Faber {
        #[arg(long)]
        n: u64,
        /// Series file (text or JSON format).
        #[arg(long, conflicts_with = "j")]
        series: Option<PathBuf>,
        /// Use the internal j - 744 expansion as input.
        #[arg(long)]
        j: bool,
        /// Expansion order for --j (defaults to n + 1).
        #[arg(long)]
        order: Option<u64>,
    },
    /// Extract replicates f^(1) .. f^(nmax) by the Faber induction.
    Replicates {
        #[arg(long)]
        nmax: u64,
        /// Input expansion order for --j.
        #[arg(long)]
        order: u64,
        #[arg(long, conflicts_with = "j")]
        series: Option<PathBuf>,
        #[arg(long)]
        j: bool,
    },
    /// Apply a Hecke operator to a Norton series file.
    Hecke {
        #[arg(long = "impl", value_enum)]
        implementation: HeckeImpl,
        #[arg(long)]
        n: u64,
        /// Group spec (cross-checked against the file).
        #[arg(long)]
        group: String,
        #[arg(long)]
        norton: PathBuf,
        /// Replicate source for the classical route (trivial group only).
        #[arg(long, value_enum)]
        replicates: Option<ReplicateSource>,
    },
    /// Verification suites.
    #[command(subcommand)]
    Verify(VerifyCmd),
    /// List the commuting-pair classes of a group.
    Pairs {
        #[arg(long)]
        group: String,
    },
    /// List the transitive commuting-pair classes of S_n with their triples.
    Transitive {
        #[arg(long)]
        n: usize,
    },
    /// Evaluate cyclic 3-cocycle data.
    Cocycle {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        s: Option<i64>,
        /// Run the full suite over every class s mod n.
        #[arg(long)]
        check_all: bool,
    },
    /// Describe the Fricke involution on untwisted cyclic points.
    Fricke {
        #[arg(long)]
        n: u64,
    },
}

#[derive(Subcommand)]
enum VerifyCmd {
    /// Geometric vs combinatorial Hecke operators on seeded random Norton
    /// series (or a given file).
    HeckeEquivalence {
        #[arg(long)]
        group: String,
        /// Comma-separated list of n values, e.g. 2,3,4.
        #[arg(long = "n-list")]
        n_list: String,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Number of seeded fixtures per n.
        #[arg(long, default_value_t = 5)]
        count: u64,
        /// Truncation order of the random fixtures.
        #[arg(long, default_value_t = 12)]
        trunc: i64,
        /// Verify a specific Norton file instead of random fixtures.
        #[arg(long)]
        norton: Option<PathBuf>,
    },
    /// Replicability of a normalized series via the exterior-power identity.
    Replicability {
        #[arg(long)]
        order: u64,
        #[arg(long, conflicts_with = "j")]
        series: Option<PathBuf>,
        #[arg(long)]
        j: bool,
        /// Input expansion order for --j.
        #[arg(long, default_value_t = 40)]
        j_order: u64,
    },
    /// total_sym(f, D) against exp(sum T_k t^k).
    SymExpIdentity {
        #[arg(long)]
        group: String,
        #[arg(long = "t-order")]
        t_order: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 12)]
        trunc: i64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum HeckeImpl {
    Geometric,
    Combinatorial,
    Classical,
}

#[derive(Clone, Copy, ValueEnum)]
enum ReplicateSource {
    /// All replicates equal to the input (completely replicable inputs).
    SelfSame,
    /// Run the extraction first.
    Extract,
}

struct Report {
    human: String,
    json: Value,
    ok: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let out = cli.out.clone();
    match run(cli.command) {
        Ok(report) => {
            print!("{}", report.human);
            if let Some(path) = out {
                if let Err(e) = std::fs::write(&path, serde_json::to_string_pretty(&report.json).unwrap()) {
                    eprintln!("error: cannot write {}: {e}", path.display());
                    return ExitCode::from(2);
                }
            }
            if report.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn load_series(path: &PathBuf) -> Result<PuiseuxSeries, Error> {
    let content = std::fs::read_to_string(path)
        .map_err(|e| Error::BadInput(format!("{}: {e}", path.display())))?;
    formats::series_from_str(&content)
}

fn series_head(s: &PuiseuxSeries, max_terms: usize) -> String {
    let shown: Vec<String> = s
        .terms()
        .take(max_terms)
        .map(|(e, c)| format!("q^{}: {}", format_rat(e), c))
        .collect();
    let ellipsis = if s.term_count() > max_terms { ", ..." } else { "" };
    format!("[{}{}] + O(q^{})", shown.join(", "), ellipsis, format_rat(s.trunc()))
}

fn run(command: Command) -> Result<Report, Error> {
    match command {
        Command::JExpand { terms } => {
            if terms == 0 {
                return Err(Error::BadInput("--terms must be positive".into()));
            }
            let j = j_expansion(terms - 1);
            let mut human = String::from("exp  coefficient\n");
            let mut rows = Vec::new();
            for (e, c) in j.terms() {
                human.push_str(&format!("{:>4} {}\n", e.to_string(), c));
                rows.push(json!({"exp": format_rat(e), "coeff": c.to_string()}));
            }
            Ok(Report {
                human,
                json: json!({"command": "j-expand", "terms": rows}),
                ok: true,
            })
        }
        Command::Faber { n, series, j, order } => {
            let f = match (series, j) {
                (Some(path), false) => load_series(&path)?,
                (None, true) => j_expansion(order.unwrap_or(n + 1)),
                _ => return Err(Error::BadInput("pass exactly one of --series or --j".into())),
            };
            let r = faber(&f, n)?;
            let poly: Vec<String> = r.coefficients.iter().map(format_rat).collect();
            let human = format!(
                "Phi_{} coefficients (ascending powers of f): [{}]\nPhi_{}(f) = {}\n",
                n,
                poly.join(", "),
                n,
                series_head(&r.series, 8)
            );
            Ok(Report {
                human,
                json: json!({
                    "command": "faber",
                    "n": n,
                    "coefficients": poly,
                    "series": formats::SeriesDoc::from_series(&r.series),
                }),
                ok: true,
            })
        }
        Command::Replicates { nmax, order, series, j } => {
            let f = match (series, j) {
                (Some(path), false) => load_series(&path)?,
                (None, true) => j_expansion(order),
                _ => return Err(Error::BadInput("pass exactly one of --series or --j".into())),
            };
            match moonhecke::power_ops::extract_replicates(&f, nmax) {
                Ok(reps) => {
                    let mut human = String::new();
                    let mut docs = Vec::new();
                    for (a, rep) in &reps {
                        human.push_str(&format!(
                            "f^({a}): guaranteed through q^{}, {}\n",
                            format_rat(rep.trunc()),
                            series_head(rep, 6)
                        ));
                        docs.push(json!({"a": a, "series": formats::SeriesDoc::from_series(rep)}));
                    }
                    Ok(Report {
                        human,
                        json: json!({"command": "replicates", "replicates": docs}),
                        ok: true,
                    })
                }
                Err(Error::NotReplicable { n, exponent }) => Ok(Report {
                    human: format!(
                        "not replicable: residual at n={n} has a bad term at exponent {}\n",
                        format_rat(&exponent)
                    ),
                    json: json!({
                        "command": "replicates",
                        "failure": {"n": n, "exponent": format_rat(&exponent)},
                    }),
                    ok: false,
                }),
                Err(e) => Err(e),
            }
        }
        Command::Hecke { implementation, n, group, norton, replicates } => {
            let f = {
                let content = std::fs::read_to_string(&norton)
                    .map_err(|e| Error::BadInput(format!("{}: {e}", norton.display())))?;
                formats::norton_from_str(&content)?
            };
            let spec_group = Group::parse_spec(&group)?;
            if &spec_group != f.group() {
                return Err(Error::BadInput(format!(
                    "--group {} does not match the file's group {}",
                    group,
                    f.group().label()
                )));
            }
            let result = match implementation {
                HeckeImpl::Geometric => moonhecke::hecke::hecke_geometric(&f, n)?,
                HeckeImpl::Combinatorial => moonhecke::hecke::hecke_combinatorial(&f, n)?,
                HeckeImpl::Classical => {
                    if f.group().order() != 1 {
                        return Err(Error::BadInput(
                            "the classical route needs the trivial group".into(),
                        ));
                    }
                    let base = f.value_at_class(0).clone();
                    let reps = match replicates {
                        Some(ReplicateSource::SelfSame) => {
                            moonhecke::exact_arith::divisors(n)
                                .into_iter()
                                .map(|a| (a, base.clone()))
                                .collect()
                        }
                        Some(ReplicateSource::Extract) => {
                            moonhecke::power_ops::extract_replicates(&base, n)?
                        }
                        None => {
                            return Err(Error::BadInput(
                                "--replicates self-same|extract is required for --impl classical"
                                    .into(),
                            ))
                        }
                    };
                    let t = moonhecke::hecke::hecke_classical(&base, n, &reps)?;
                    NortonSeries::constant(Group::trivial(), t)
                }
            };
            let mut human = String::new();
            for (c, v) in result.classes().iter().zip(result.values()) {
                human.push_str(&format!(
                    "class [{}, {}]: {}\n",
                    c.representative.g,
                    c.representative.h,
                    series_head(v, 6)
                ));
            }
            Ok(Report {
                human,
                json: serde_json::to_value(formats::NortonDoc::from_norton(&result))
                    .expect("serializable"),
                ok: true,
            })
        }
        Command::Verify(v) => run_verify(v),
        Command::Pairs { group } => {
            let g = Group::parse_spec(&group)?;
            let classes = pair_classes(&g);
            let mut human = format!(
                "{}: {} commuting-pair classes\nrep_g rep_h class_size centralizer\n",
                g.label(),
                classes.len()
            );
            let mut rows = Vec::new();
            for c in &classes {
                human.push_str(&format!(
                    "{:>5} {:>5} {:>10} {:>11}\n",
                    g.element_label(c.representative.g),
                    g.element_label(c.representative.h),
                    c.class_size,
                    c.centralizer_order
                ));
                rows.push(json!({
                    "rep": [c.representative.g, c.representative.h],
                    "class_size": c.class_size,
                    "centralizer_order": c.centralizer_order,
                }));
            }
            Ok(Report {
                human,
                json: json!({"command": "pairs", "group": g.label(), "classes": rows}),
                ok: true,
            })
        }
        Command::Transitive { n } => {
            let classes = transitive_pair_classes(n)?;
            let mut human = format!(
                "S_{n}: {} transitive commuting-pair classes\nsigma rho (a,b,d)\n",
                classes.len()
            );
            let mut rows = Vec::new();
            let g = Group::symmetric(n)?;
            for (c, lat) in &classes {
                human.push_str(&format!(
                    "{} {} ({},{},{})\n",
                    g.element_label(c.representative.g),
                    g.element_label(c.representative.h),
                    lat.a,
                    lat.b,
                    lat.d
                ));
                rows.push(json!({
                    "rep": [c.representative.g, c.representative.h],
                    "triple": [lat.a, lat.b, lat.d],
                }));
            }
            Ok(Report {
                human,
                json: json!({"command": "transitive", "n": n, "classes": rows}),
                ok: true,
            })
        }
        Command::Cocycle { n, s, check_all } => run_cocycle(n, s, check_all),
        Command::Fricke { n } => {
            let point = moonhecke::hecke::CyclicPoint::new(n, if n == 1 { 0 } else { 1 })?;
            let w = moonhecke::hecke::fricke(&point);
            let ww = moonhecke::hecke::fricke(&w);
            let human = format!(
                "W_{n}: (1, g; tau) -> (1, g; {})\nW_{n} twice: tau -> {} (projective identity: {})\n",
                w.tau.describe(),
                ww.tau.describe(),
                ww.tau.is_identity()
            );
            Ok(Report {
                human,
                json: json!({
                    "command": "fricke",
                    "n": n,
                    "matrix": w.tau.m,
                    "involution_squares_to_identity": ww.tau.is_identity(),
                }),
                ok: ww.tau.is_identity(),
            })
        }
    }
}

fn run_verify(cmd: VerifyCmd) -> Result<Report, Error> {
    match cmd {
        VerifyCmd::HeckeEquivalence { group, n_list, seed, count, trunc, norton } => {
            let g = Group::parse_spec(&group)?;
            let ns: Vec<u64> = n_list
                .split(',')
                .map(|p| {
                    p.trim()
                        .parse::<u64>()
                        .map_err(|_| Error::BadInput(format!("bad n `{p}`")))
                })
                .collect::<Result<Vec<_>, _>>()?;
            if ns.is_empty() {
                return Err(Error::BadInput("empty --n-list".into()));
            }
            let fixtures: Vec<(String, NortonSeries)> = match norton {
                Some(path) => {
                    let content = std::fs::read_to_string(&path)
                        .map_err(|e| Error::BadInput(format!("{}: {e}", path.display())))?;
                    let f = formats::norton_from_str(&content)?;
                    if f.group() != &g {
                        return Err(Error::BadInput("group mismatch with file".into()));
                    }
                    vec![(format!("file:{}", path.display()), f)]
                }
                None => (0..count)
                    .map(|i| {
                        let s = seed + i;
                        (format!("seed:{s}"), NortonSeries::random(g.clone(), s, -1, trunc))
                    })
                    .collect(),
            };
            let mut human = format!("hecke-equivalence on {} ({} fixtures)\n", g.label(), fixtures.len());
            human.push_str("n fixture agrees common_trunc\n");
            let mut rows = Vec::new();
            let mut all = true;
            for &n in &ns {
                for (name, f) in &fixtures {
                    let report = moonhecke::hecke::verify_equivalence(f, n, None)?;
                    all &= report.agrees;
                    human.push_str(&format!(
                        "{n} {name} {} {}\n",
                        report.agrees,
                        format_rat(&report.common_trunc)
                    ));
                    rows.push(json!({
                        "n": n,
                        "fixture": name,
                        "agrees": report.agrees,
                        "common_trunc": format_rat(&report.common_trunc),
                    }));
                }
            }
            human.push_str(&format!("overall: {}\n", if all { "agree" } else { "DISAGREE" }));
            Ok(Report {
                human,
                json: json!({"command": "verify hecke-equivalence", "group": g.label(), "results": rows, "agrees": all}),
                ok: all,
            })
        }
        VerifyCmd::Replicability { order, series, j, j_order } => {
            let f = match (series, j) {
                (Some(path), false) => load_series(&path)?,
                (None, true) => j_expansion(j_order),
                _ => return Err(Error::BadInput("pass exactly one of --series or --j".into())),
            };
            let r = moonhecke::power_ops::verify_replicability(&f, order)?;
            let mut human = format!("replicability to t^{order}\n n constant value\n");
            let mut rows = Vec::new();
            for e in &r.entries {
                let val = e
                    .constant
                    .as_ref()
                    .map(format_rat)
                    .unwrap_or_else(|| "-".into());
                human.push_str(&format!("{:>2} {:>8} {}\n", e.n, e.is_constant, val));
                rows.push(json!({
                    "n": e.n,
                    "is_constant": e.is_constant,
                    "constant": e.constant.as_ref().map(format_rat),
                }));
            }
            let ok = r.identity_holds && r.all_constant;
            human.push_str(&format!(
                "identity holds: {}, all lambda constant: {}\n",
                r.identity_holds, r.all_constant
            ));
            Ok(Report {
                human,
                json: json!({
                    "command": "verify replicability",
                    "order": order,
                    "entries": rows,
                    "identity_holds": r.identity_holds,
                    "all_constant": r.all_constant,
                }),
                ok,
            })
        }
        VerifyCmd::SymExpIdentity { group, t_order, seed, trunc } => {
            let g = Group::parse_spec(&group)?;
            let f = NortonSeries::random(g.clone(), seed, -1, trunc);
            let direct = moonhecke::power_ops::total_sym(&f, t_order)?;
            let viaexp = moonhecke::power_ops::total_sym_exponential(&f, t_order)?;
            let mut human = format!("sym-exp identity on {} to t^{t_order} (seed {seed})\n", g.label());
            let mut rows = Vec::new();
            let mut all = true;
            for k in 0..=t_order {
                let a = direct.coefficient(k);
                let b = viaexp.coefficient(k);
                let bound = a.min_trunc().min(b.min_trunc());
                let same = a.eq_up_to(b, &bound);
                all &= same;
                human.push_str(&format!("t^{k}: {}\n", if same { "equal" } else { "DIFFER" }));
                rows.push(json!({"k": k, "equal": same, "common_trunc": format_rat(&bound)}));
            }
            Ok(Report {
                human,
                json: json!({
                    "command": "verify sym-exp-identity",
                    "group": g.label(),
                    "t_order": t_order,
                    "results": rows,
                    "agrees": all,
                }),
                ok: all,
            })
        }
    }
}

fn run_cocycle(n: u64, s: Option<i64>, check_all: bool) -> Result<Report, Error> {
    use moonhecke::cocycles::{twist_data, CyclicCocycle};
    if n == 0 {
        return Err(Error::BadInput("--n must be positive".into()));
    }
    let class_list: Vec<i64> = if check_all {
        (0..n as i64).collect()
    } else {
        vec![s.ok_or_else(|| Error::BadInput("pass --s or --check-all".into()))?]
    };
    let mut human = format!("cyclic cocycle data on Z/{n}\n s coboundary tn_action order h N restriction_at_h_trivial\n");
    let mut rows = Vec::new();
    let mut all = true;
    for s in class_list {
        let alpha = CyclicCocycle::new(n, s);
        let td = twist_data(n, s);
        let cob = alpha.coboundary_check();
        let act = alpha.tn_action();
        let ord = alpha.action_order();
        let restricted = alpha.restrict_to_power(td.h)?;
        let ok = cob && ord == td.h && restricted.is_trivial_class();
        all &= ok;
        human.push_str(&format!(
            "{:>2} {:>10} {:>9} {:>5} {:>1} {:>1} {}\n",
            alpha.class(),
            cob,
            format_rat(&act),
            ord,
            td.h,
            td.big_n,
            restricted.is_trivial_class()
        ));
        rows.push(json!({
            "s": alpha.class(),
            "coboundary": cob,
            "tn_action": format_rat(&act),
            "action_order": ord,
            "h": td.h,
            "N": td.big_n,
            "restriction_at_h_trivial": restricted.is_trivial_class(),
        }));
    }
    Ok(Report {
        human,
        json: json!({"command": "cocycle", "n": n, "classes": rows, "ok": all}),
        ok: all,
    })
}
