use std::io::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use avgorder::arith::{factorize, ExactRational};
use avgorder::corpus::{corpus_up_to, named, NamedParams};
use avgorder::describe::{load_group_document, load_representation, BUILTIN_Q8};
use avgorder::group::{
    conjugacy_class_count, Caps, FiniteGroup, CLASS_COUNT_CAP_ENV, DEFAULT_CLASS_COUNT_CAP,
    DEFAULT_ENUMERATION_CAP, ENUMERATION_CAP_ENV,
};
use avgorder::lattice::{construct, verify_power_identity, Representation};
use avgorder::scan::{
    anti_hughes_bound, family_ratio_report, kd_report, scan_conjecture_a5, scan_k_exp,
    scan_psi_max, verify_chain_symbolic, verify_shell_orders, verify_theorem, CountingMode,
    VerificationReport,
};
use avgorder::secretive::is_wall_secretive;
use avgorder::stats::{order_spectrum, spectrum_is_consistent};
use avgorder::Error;

#[derive(Parser, Debug)]
#[command(
    name = "avgorder",
    version,
    about = "Exact element-order statistics of finite groups"
)]
struct Cli {
    /// Report format.
    #[arg(long, value_enum, default_value_t = Format::Table, global = true)]
    output: Format,

    /// Largest number of elements any group may be enumerated to.
    #[arg(long, env = ENUMERATION_CAP_ENV, default_value_t = DEFAULT_ENUMERATION_CAP,
          value_parser = clap::value_parser!(u64).range(1..), global = true)]
    enum_cap: u64,

    /// Largest group order for conjugacy-class counting.
    #[arg(long, env = CLASS_COUNT_CAP_ENV, default_value_t = DEFAULT_CLASS_COUNT_CAP,
          value_parser = clap::value_parser!(u64).range(1..), global = true)]
    class_cap: u64,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Table,
    Json,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Mode {
    Auto,
    Exhaustive,
    Shell,
}

impl From<Mode> for CountingMode {
    fn from(m: Mode) -> Self {
        match m {
            Mode::Auto => CountingMode::Auto,
            Mode::Exhaustive => CountingMode::Exhaustive,
            Mode::Shell => CountingMode::Shell,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Suite {
    A5,
    PsiMax,
    KExp,
}

#[derive(Args, Debug)]
struct GroupSelector {
    /// Group-description document (JSON).
    #[arg(long, conflicts_with = "named")]
    group: Option<PathBuf>,
    /// Built-in group name.
    #[arg(long)]
    named: Option<String>,
    #[arg(long)]
    n: Option<u64>,
    #[arg(long)]
    p: Option<u64>,
    #[arg(long)]
    s: Option<u64>,
    #[arg(long)]
    rank: Option<u64>,
}

#[derive(Args, Debug)]
struct RepresentationArg {
    /// Representation document, or `builtin:q8`.
    #[arg(long, default_value = BUILTIN_Q8)]
    representation: String,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Spectrum, psi, average order, exponent, maximum order and class count.
    Stats(GroupSelector),
    /// Run the orbit-lattice pipeline and describe the resulting group.
    Construct {
        #[command(flatten)]
        rep: RepresentationArg,
        #[arg(long)]
        s: u32,
    },
    /// Element orders inside and outside U_s Phi(P).
    VerifyShellOrders {
        #[command(flatten)]
        rep: RepresentationArg,
        #[arg(long)]
        s: u32,
        #[arg(long, value_enum, default_value_t = Mode::Auto)]
        mode: Mode,
    },
    /// o(G) < o(N)^c with every link of the supporting chain.
    VerifyTheorem {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        s: u32,
        /// Rational exponent, e.g. 3/2.
        #[arg(long)]
        c: ExactRational,
        /// Representation document; without one, p = 2 uses the built-in Q8.
        #[arg(long)]
        representation: Option<String>,
        /// Evaluate the chain from closed forms without building G.
        #[arg(long)]
        symbolic: bool,
        #[arg(long, value_enum, default_value_t = Mode::Auto)]
        mode: Mode,
    },
    /// Average-order bound for anti-Hughes groups of exponent p^3.
    AntiHughesBound {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        n: u32,
    },
    /// Wall-secretive clauses; p defaults to the prime dividing |P|.
    SecretiveCheck(GroupSelector),
    /// Scan the built-in corpus.
    Scan {
        #[arg(long, value_enum)]
        suite: Suite,
        #[arg(long, default_value_t = 200)]
        max_order: u64,
    },
    /// o^2/mo along G_s = U_s x| P.
    Family {
        #[arg(long, default_value_t = 2)]
        p: u64,
        #[arg(long, default_value_t = 1)]
        s_from: u32,
        #[arg(long, default_value_t = 3)]
        s_to: u32,
        /// Threshold t in o^2 < t mo; repeatable.
        #[arg(long = "threshold", default_values = ["1/4", "1", "4"])]
        thresholds: Vec<ExactRational>,
        #[arg(long)]
        representation: Option<String>,
        #[arg(long, value_enum, default_value_t = Mode::Auto)]
        mode: Mode,
    },
    /// k(G) / d(|G|).
    Kd(GroupSelector),
}

fn select_group(sel: &GroupSelector, caps: Caps) -> avgorder::Result<FiniteGroup> {
    match (&sel.group, &sel.named) {
        (Some(path), _) => Ok(load_group_document(path, caps)?.group().clone()),
        (None, Some(name)) => {
            let params = NamedParams {
                n: sel.n,
                p: sel.p,
                s: sel.s,
                rank: sel.rank,
            };
            Ok(named(name, &params)?.with_caps(caps))
        }
        (None, None) => Err(Error::Parameter("give --group FILE or --named NAME".into())),
    }
}

fn representation(reference: &str) -> avgorder::Result<Representation> {
    load_representation(reference, None)
}

fn stats(g: &FiniteGroup) -> avgorder::Result<VerificationReport> {
    let sp = order_spectrum(g)?;
    let mut r = VerificationReport::new("element-order statistics");
    r.param("group", g.name());
    r.quantity("|G|", sp.total(), "enumeration");
    r.quantity("psi", sp.psi(), "sum of element orders");
    r.quantity("o", sp.avg_order(), "psi / |G|");
    r.quantity("exp", sp.exponent(), "lcm of element orders");
    r.quantity("mo", sp.max_order(), "largest element order");
    match conjugacy_class_count(g) {
        Ok(k) => {
            r.quantity("k", k, "conjugacy classes");
        }
        Err(e @ Error::Resource { .. }) => r.note(format!("k not computed: {e}")),
        Err(e) => return Err(e),
    }
    for (o, c) in sp.counts() {
        r.row(
            [
                ("order".to_string(), o.to_string()),
                ("count".to_string(), c.to_string()),
            ]
            .into_iter()
            .collect(),
        );
    }
    r.check(
        "spectrum",
        spectrum_is_consistent(&sp, sp.total()),
        "counts sum to |G|, one identity, every order divides |G|",
    );
    Ok(r)
}

fn construct_report(
    rep: &Representation,
    s: u32,
    caps: Caps,
) -> avgorder::Result<VerificationReport> {
    let c = construct(rep, s, caps)?;
    let g = &c.group;
    let mut r = VerificationReport::new("orbit-lattice construction of U_s x| P");
    r.param("p", rep.p).param("s", s).param("dim", rep.dim);
    r.quantity("rank", g.rank(), "rows of the HNF basis");
    r.quantity("|P|", g.acting_order(), "closure of the representation");
    r.quantity("|U_s|", g.module_order(), "p^(s*rank)");
    r.quantity("|G|", g.projected_order(), "p^(s*rank) * |P|");
    if let Some(f) = g.frattini_order() {
        r.quantity("|Phi(P)|", f, "P' P^p");
        r.quantity(
            "|U_s Phi(P)|",
            g.module_order() * avgorder::arith::UInt::from(f),
            "p^(s*rank) * |Phi(P)|",
        );
    }
    r.quantity(
        "det(z - I)",
        &c.lattice.central_action.det_z_minus_identity,
        "exact determinant",
    );
    for (i, row) in c.lattice.basis.row_iter().enumerate() {
        let entries: Vec<String> = row.iter().map(ToString::to_string).collect();
        r.row(
            [
                ("basis row".to_string(), i.to_string()),
                ("entries".to_string(), entries.join(" ")),
            ]
            .into_iter()
            .collect(),
        );
    }
    let ca = &c.lattice.central_action;
    r.check("z^p = I", ca.order_divides_p, "exact matrix power");
    r.check(
        "det(z - I) != 0",
        ca.fixed_point_free,
        "z fixes no nonzero vector",
    );
    r.check(
        "I + z + ... + z^(p-1) = 0",
        ca.orbit_sum_zero,
        "exact matrix sum",
    );
    let pi = verify_power_identity(g)?;
    r.check(
        "power identity",
        pi.holds,
        format!(
            "(u, z^k)^p = 1 for all u; {} vectors checked directly",
            pi.vectors_checked
        ),
    );
    Ok(r)
}

fn run(cli: &Cli) -> avgorder::Result<VerificationReport> {
    let caps = Caps {
        enumeration: cli.enum_cap,
        class_count: cli.class_cap,
    };
    match &cli.command {
        Command::Stats(sel) => stats(&select_group(sel, caps)?),
        Command::Construct { rep, s } => {
            construct_report(&representation(&rep.representation)?, *s, caps)
        }
        Command::VerifyShellOrders { rep, s, mode } => {
            let rep = representation(&rep.representation)?;
            let c = construct(&rep, *s, caps)?;
            let mut out = verify_shell_orders(&c.group, (*mode).into())?.report;
            out.check(
                "central action",
                c.lattice.central_action.passed(),
                format!(
                    "z^p = I, det(z - I) = {}, I + z + ... + z^(p-1) = 0",
                    c.lattice.central_action.det_z_minus_identity
                ),
            );
            Ok(out)
        }
        Command::VerifyTheorem {
            p,
            s,
            c,
            representation: rep_ref,
            symbolic,
            mode,
        } => {
            if *symbolic || (rep_ref.is_none() && *p != 2) {
                let mut r = verify_chain_symbolic(*p, c, *s)?;
                if !*symbolic {
                    r.note(format!(
                        "no built-in representation for p = {p}; evaluated symbolically"
                    ));
                }
                return Ok(r);
            }
            let rep = representation(rep_ref.as_deref().unwrap_or(BUILTIN_Q8))?;
            if rep.p != *p {
                return Err(Error::Parameter(format!(
                    "representation is for p = {}, not p = {p}",
                    rep.p
                )));
            }
            let built = construct(&rep, *s, caps)?;
            let n = built.group.module_subgroup()?;
            verify_theorem(*p, c, &built.group, &n, (*mode).into())
        }
        Command::AntiHughesBound { p, n } => anti_hughes_bound(*p, *n),
        Command::SecretiveCheck(sel) => {
            let g = select_group(sel, caps)?;
            let p = match sel.p {
                Some(p) => p,
                None => match factorize(g.order()?)?[..] {
                    [(p, _)] => p,
                    _ => {
                        return Err(Error::Domain(format!(
                            "{} has order {}, which is not a prime power",
                            g.name(),
                            g.order()?
                        )))
                    }
                },
            };
            let s = is_wall_secretive(&g, p)?;
            let mut r = VerificationReport::new("Wall-secretive clauses");
            r.param("group", g.name()).param("p", p);
            r.quantity("|P|", s.group_order, "enumeration");
            r.quantity("|Phi(P)|", s.frattini_order, "P' P^p");
            r.quantity("rank", s.rank, "log_p |P/Phi(P)|");
            if let Some(z) = &s.z {
                r.quantity("z", z, "generator of P^p");
            }
            r.check(
                "(a) Phi(P) has exponent p",
                s.frattini_exponent_ok,
                "orders in Phi(P) divide p",
            );
            r.check(
                "(b) |P/Phi(P)| = p^p",
                s.rank_equals_p,
                format!("rank {} vs p = {p}", s.rank),
            );
            r.check(
                "(c) outside orders are p^2",
                s.outside_orders_ok,
                "every element outside Phi(P) has order p^2",
            );
            r.check(
                "(c) P^p central cyclic of order p",
                s.powers_central_cyclic_ok,
                "p-th powers lie in one central subgroup of order p",
            );
            Ok(r)
        }
        Command::Scan { suite, max_order } => {
            let groups: Vec<FiniteGroup> = corpus_up_to(*max_order)?
                .into_iter()
                .map(|g| g.with_caps(caps))
                .collect();
            let mut r = match suite {
                Suite::A5 => scan_conjecture_a5(&groups)?,
                Suite::PsiMax => scan_psi_max(&groups)?,
                Suite::KExp => scan_k_exp(&groups)?,
            };
            r.param("max order", max_order);
            Ok(r)
        }
        Command::Family {
            p,
            s_from,
            s_to,
            thresholds,
            representation: rep_ref,
            mode,
        } => {
            let rep = match rep_ref {
                Some(r) => representation(r)?,
                None if *p == 2 => Representation::builtin_q8(),
                None => {
                    return Err(Error::Parameter(format!(
                        "no built-in representation for p = {p}; pass --representation"
                    )))
                }
            };
            if rep.p != *p {
                return Err(Error::Parameter(format!(
                    "representation is for p = {}, not p = {p}",
                    rep.p
                )));
            }
            family_ratio_report(&rep, *s_from..=*s_to, thresholds, caps, (*mode).into())
        }
        Command::Kd(sel) => kd_report(&select_group(sel, caps)?),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(report) => {
            let text = match cli.output {
                Format::Table => report.to_table(),
                Format::Json => report.to_json(),
            };
            // a closed pipe is not an error
            let _ = writeln!(std::io::stdout().lock(), "{text}");
            if report.passed() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e @ Error::Validation(_)) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
