use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use thiserror::Error;

use invhecke::biregular::{crosscheck_generic, Biregular};
use invhecke::cells::{
    g2_basis_check, kl_compute, kottwitz_mult_check, JRing, SpecialFixture,
};
use invhecke::equivariantk::{fourier_matrix, verify_chi, verify_kappa_v, KappaReading, MPairSet};
use invhecke::groups::FiniteGroup;
use invhecke::{CoxeterSystem, GroupTable, InvModule};

mod report;

use report::{Check, Table};

#[derive(Parser)]
#[command(name = "invhecke", version, about = "Exact checks on the involution module of a Hecke algebra")]
struct Cli {
    /// Worker threads for the parallel parts (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Output format.
    #[arg(long, global = true, value_enum, default_value = "json")]
    format: Format,
    /// Write to this file instead of stdout.
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Tsv,
}

#[derive(Args, Clone)]
struct SystemArgs {
    /// Coxeter type, e.g. `A2`, `B3`, `D4`, `G2`, `A1~`, `A1xA1`.
    #[arg(long = "type")]
    ty: String,
    /// Diagram involution as a comma-separated permutation of 0..rank.
    #[arg(long)]
    star: Option<String>,
    /// Restrict to `l(x) <= N`; required for infinite groups.
    #[arg(long)]
    length_bound: Option<usize>,
    /// Refuse finite groups larger than this.
    #[arg(long, default_value_t = 5000)]
    max_order: usize,
}

#[derive(Subcommand)]
enum Command {
    /// Integrality, pi, recursions, lambda, sign and injectivity checks.
    Verify(SystemArgs),
    /// Export a coefficient table.
    Table {
        #[arg(value_enum)]
        kind: TableKind,
        #[command(flatten)]
        sys: SystemArgs,
    },
    /// The W x W specialization.
    Biregular {
        #[command(flatten)]
        sys: SystemArgs,
        /// Also run the module pipeline on W x W with the swap involution.
        #[arg(long)]
        crosscheck: bool,
    },
    /// Kazhdan-Lusztig basis, cells and the asymptotic ring.
    Cells {
        #[command(flatten)]
        sys: SystemArgs,
        #[arg(long, value_enum, default_value = "cells")]
        emit: Emit,
        /// Special-representation labels (JSON); the B2 labels are built in.
        #[arg(long)]
        fixture: Option<PathBuf>,
    },
    /// Equivariant K-theory of a finite group acting on itself.
    GroupKtheory {
        /// `S3`, `S4`, `C2`, `C2^2`, `D4`, `Q8`, ...
        #[arg(long, conflicts_with = "group_file")]
        group: Option<String>,
        /// JSON file with `table` or `generators`.
        #[arg(long)]
        group_file: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum TableKind {
    Mu,
    L,
    TildeL,
    Lambda,
    Pi,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Emit {
    Kl,
    Cells,
    Jring,
    Jcm,
    Kottwitz,
}

#[derive(Debug, Error)]
enum CliError {
    #[error("{0}")]
    Config(String),
    #[error("{0}")]
    Io(#[from] io::Error),
    #[error("{0}")]
    Violation(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Violation(_) => 1,
            CliError::Config(_) => 2,
            CliError::Io(_) => 3,
        }
    }
}

fn config<E: ToString>(e: E) -> CliError {
    CliError::Config(e.to_string())
}

fn violation<E: ToString>(e: E) -> CliError {
    CliError::Violation(e.to_string())
}

/// An output document and whether every check in it passed.
struct Outcome {
    json: Value,
    tsv: Table,
    ok: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    let result = run(&cli.command).and_then(|out| {
        let text = match cli.format {
            Format::Json => {
                let mut s = serde_json::to_string_pretty(&out.json).expect("serializable");
                s.push('\n');
                s
            }
            Format::Tsv => out.tsv.render(),
        };
        emit(cli.output.as_deref(), &text)?;
        Ok(out.ok)
    });
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code())
        }
    }
}

fn emit(path: Option<&Path>, text: &str) -> Result<(), CliError> {
    match path {
        Some(p) => fs::write(p, text)?,
        None => io::stdout().lock().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn run(cmd: &Command) -> Result<Outcome, CliError> {
    match cmd {
        Command::Verify(sys) => cmd_verify(sys),
        Command::Table { kind, sys } => cmd_table(*kind, sys),
        Command::Biregular { sys, crosscheck } => cmd_biregular(sys, *crosscheck),
        Command::Cells { sys, emit, fixture } => cmd_cells(sys, *emit, fixture.as_deref()),
        Command::GroupKtheory { group, group_file } => {
            cmd_group_ktheory(group.as_deref(), group_file.as_deref())
        }
    }
}

struct Setup {
    sys: CoxeterSystem,
    table: GroupTable,
    bound: Option<usize>,
}

fn setup(args: &SystemArgs) -> Result<Setup, CliError> {
    let mut sys = CoxeterSystem::from_type(&args.ty).map_err(config)?;
    if let Some(s) = &args.star {
        let perm = s
            .split(',')
            .map(|t| t.trim().parse::<usize>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(|_| CliError::Config(format!("cannot parse star {s:?}")))?;
        sys = sys.with_star(perm).map_err(config)?;
    }
    let bound = args.length_bound;
    let table = match (sys.is_finite(), bound) {
        (true, _) => sys.enumerate(None),
        // the module recursions look up to 2 N + 2
        (false, Some(n)) => sys.enumerate(Some(2 * n + 2)),
        (false, None) => {
            return Err(CliError::Config(format!(
                "{} is infinite; pass --length-bound",
                args.ty
            )))
        }
    }
    .map_err(config)?;
    if table.is_complete() && table.len() > args.max_order {
        return Err(CliError::Config(format!(
            "|W| = {} exceeds --max-order {}",
            table.len(),
            args.max_order
        )));
    }
    Ok(Setup { sys, table, bound })
}

fn header(kind: &str, s: &Setup) -> serde_json::Map<String, Value> {
    let mut m = serde_json::Map::new();
    m.insert("schema".into(), json!(format!("invhecke.{kind}.v1")));
    m.insert("type".into(), json!(s.sys.name()));
    m.insert("star".into(), json!(s.sys.star().as_slice()));
    m.insert("order".into(), json!(s.table.len()));
    m.insert("length_bound".into(), json!(s.bound));
    m
}

fn require_finite(s: &Setup) -> Result<(), CliError> {
    if s.table.is_complete() {
        Ok(())
    } else {
        Err(CliError::Config(format!("{} must be finite here", s.sys.name())))
    }
}

fn cmd_verify(args: &SystemArgs) -> Result<Outcome, CliError> {
    let s = setup(args)?;
    let t = &s.table;
    let m = InvModule::new(t).map_err(config)?;
    let mut checks = Vec::new();

    let rel = m.check_module_relations(s.sys.matrix());
    checks.push(Check::new("module relations", rel.is_empty(), rel.join("; ")));

    let lt = m.l_table(s.bound).map_err(config)?;
    let tl = match m.tilde_l(&lt) {
        Ok(tl) => {
            checks.push(Check::new("tilde-L in Z[u^-1]", true, ""));
            tl
        }
        Err(e) => return Err(violation(e)),
    };

    let pi = match m.pi_map(&tl) {
        Ok(pi) => {
            checks.push(Check::new("exactly one z with n^x_z = 1", true, ""));
            pi
        }
        Err(e) => {
            checks.push(Check::new("exactly one z with n^x_z = 1", false, e.to_string()));
            Vec::new()
        }
    };
    if !pi.is_empty() {
        let missing = m.pi_missing(&pi, s.bound);
        let words: Vec<String> = missing.iter().map(|&w| t.format(w)).collect();
        checks.push(Check::new("pi surjective", missing.is_empty(), words.join(",")));
    }

    let rec = m.validate_recursions(&lt, &tl);
    checks.push(Check::new(
        "recursions",
        rec.is_ok(),
        format!("{} checked, {} violations", rec.checked, rec.violations.len()),
    ));

    match m.lambda_table(&tl) {
        Ok(lam) => {
            let r = m.check_lambda(&lam);
            checks.push(Check::new(
                "lambda bar symmetry",
                r.is_ok(),
                format!("{} checked", r.checked),
            ));
        }
        Err(e) => checks.push(Check::new("lambda bar symmetry", false, e.to_string())),
    }

    let sign = m.sign_rep_check();
    checks.push(Check::new(
        "sign representation",
        sign.is_ok(),
        format!("{} checked", sign.checked),
    ));

    if t.is_complete() {
        let n = m.twisted().len();
        let r = m.injectivity_rank(&tl);
        checks.push(Check::new("mu injective", r == n, format!("rank {r} of {n}")));
    }

    let ok = checks.iter().all(|c| c.passed);
    let twisted: Vec<String> = m.twisted().iter().map(|&w| t.format(w)).collect();
    let pi_rows: Vec<Value> = lt
        .xs()
        .filter(|x| x.index() < pi.len())
        .map(|x| json!({ "x": t.format(x), "pi": t.format(pi[x.index()]) }))
        .collect();
    let mut j = header("verify", &s);
    j.insert("twisted_involutions".into(), json!(twisted));
    j.insert("pi".into(), json!(pi_rows));
    j.insert("checks".into(), json!(checks));
    j.insert("ok".into(), json!(ok));

    let mut tsv = Table::new(&["check", "passed", "detail"]);
    for c in &checks {
        tsv.row(vec![c.name.clone(), c.passed.to_string(), c.detail.clone()]);
    }
    Ok(Outcome {
        json: Value::Object(j),
        tsv,
        ok,
    })
}

fn cmd_table(kind: TableKind, args: &SystemArgs) -> Result<Outcome, CliError> {
    let s = setup(args)?;
    let t = &s.table;
    let m = InvModule::new(t).map_err(config)?;
    let lt = m.l_table(s.bound).map_err(config)?;
    let mut j = header("table", &s);
    let (name, entries, tsv) = match kind {
        TableKind::Pi => {
            let tl = m.tilde_l(&lt).map_err(violation)?;
            let pi = m.pi_map(&tl).map_err(violation)?;
            let mut tsv = Table::new(&["x", "pi"]);
            let rows: Vec<Value> = lt
                .xs()
                .map(|x| {
                    let (a, b) = (t.format(x), t.format(pi[x.index()]));
                    tsv.row(vec![a.clone(), b.clone()]);
                    json!({ "x": a, "pi": b })
                })
                .collect();
            ("pi", rows, tsv)
        }
        TableKind::Mu => {
            let tl = m.tilde_l(&lt).map_err(violation)?;
            let mut tsv = Table::new(&["z", "w", "coeff"]);
            let mut rows = Vec::new();
            for &z in m.twisted() {
                let mu = m.mu(&tl, z);
                for (&w, c) in &mu {
                    tsv.row(vec![t.format(z), t.format(w), c.to_string()]);
                }
                rows.push(json!({
                    "z": t.format(z),
                    "terms": mu.to_json(t),
                    "rendered": mu.render(t, "T"),
                }));
            }
            ("mu", rows, tsv)
        }
        TableKind::L | TableKind::TildeL | TableKind::Lambda => {
            let (name, ct) = match kind {
                TableKind::L => ("L", lt),
                TableKind::TildeL => ("tilde-L", m.tilde_l(&lt).map_err(violation)?),
                _ => {
                    let tl = m.tilde_l(&lt).map_err(violation)?;
                    ("lambda", m.lambda_table(&tl).map_err(violation)?)
                }
            };
            let mut tsv = Table::new(&["x", "z", "coeff"]);
            let mut rows = Vec::new();
            for x in ct.xs() {
                for (&z, c) in ct.row(x) {
                    tsv.row(vec![t.format(x), t.format(z), c.to_string()]);
                    rows.push(json!({ "x": t.format(x), "z": t.format(z), "coeff": c.to_string() }));
                }
            }
            (name, rows, tsv)
        }
    };
    j.insert("kind".into(), json!(name));
    j.insert("entries".into(), json!(entries));
    Ok(Outcome {
        json: Value::Object(j),
        tsv,
        ok: true,
    })
}

fn cmd_biregular(args: &SystemArgs, crosscheck: bool) -> Result<Outcome, CliError> {
    let s = setup(args)?;
    require_finite(&s)?;
    let t = &s.table;
    let b = Biregular::new(t).map_err(config)?;
    let pt = b.pair_table().map_err(violation)?;
    let stars = b.check_star_products(&pt).map_err(violation)?;
    let sym = b.check_x_symmetry();
    let pi = b.pi_map().map_err(violation)?;
    let reading = b.pi_reading(&pi);

    let mut tsv = Table::new(&["z", "left", "right", "coeff"]);
    let mut mu = Vec::new();
    for z in t.ids() {
        let v = b.mu_of_tz(z).map_err(violation)?;
        for (x, y, c) in v.iter() {
            tsv.row(vec![t.format(z), t.format(x), t.format(y), c.to_string()]);
        }
        mu.push(json!({ "z": t.format(z), "terms": v.to_json(t) }));
    }
    let pi_rows: Vec<Value> = t
        .ids()
        .flat_map(|x| {
            let pi = &pi;
            t.ids().map(move |y| {
                json!({ "x": t.format(x), "y": t.format(y), "pi": t.format(pi[x.index()][y.index()]) })
            })
        })
        .collect();

    let mut checks = vec![
        Check::new(
            "star product shape and uniqueness",
            stars.is_ok(),
            format!("{} triples", stars.checked),
        ),
        Check::new(
            "T_a X = T'_a^-1 X",
            sym.is_empty(),
            sym.iter().map(|&w| t.format(w)).collect::<Vec<_>>().join(","),
        ),
    ];
    if crosscheck {
        let r = crosscheck_generic(&s.sys).map_err(violation)?;
        checks.push(Check::new(
            "generic pipeline on W x W",
            r.mismatches.is_empty(),
            format!("{} compared", r.compared),
        ));
    }
    let ok = checks.iter().all(|c| c.passed);
    let mut j = header("biregular", &s);
    j.insert("mu".into(), json!(mu));
    j.insert("pi".into(), json!(pi_rows));
    j.insert("pi_reading".into(), json!(reading));
    j.insert("checks".into(), json!(checks));
    j.insert("ok".into(), json!(ok));
    Ok(Outcome {
        json: Value::Object(j),
        tsv,
        ok,
    })
}

fn cmd_cells(args: &SystemArgs, emit: Emit, fixture: Option<&Path>) -> Result<Outcome, CliError> {
    let s = setup(args)?;
    require_finite(&s)?;
    let t = &s.table;
    let mut j = header("cells", &s);
    let mut checks = Vec::new();
    let mut tsv;
    if emit == Emit::Kottwitz {
        let fx = match fixture {
            Some(p) => Some(SpecialFixture::parse(&fs::read_to_string(p)?).map_err(config)?),
            None if s.sys.name() == "B2" => Some(SpecialFixture::b2()),
            None => None,
        };
        let r = kottwitz_mult_check(t, fx.as_ref()).map_err(config)?;
        checks.push(Check::new(
            "sum of mult * dim = rank of X = |I_*|",
            r.dims_agree(),
            format!("{} / {} / {}", r.total_dim, r.x_rank, r.involutions),
        ));
        if let Some(ok) = r.special_check {
            checks.push(Check::new("special multiplicities", ok, ""));
        }
        tsv = Table::new(&["irreducible", "dim", "mult", "special"]);
        for irr in &r.irreducibles {
            tsv.row(vec![
                irr.label.clone().unwrap_or_else(|| irr.index.to_string()),
                irr.dim.to_string(),
                irr.mult.to_string(),
                irr.special.map_or("-".into(), |b| b.to_string()),
            ]);
        }
        j.insert("kottwitz".into(), json!(r));
    } else {
        let kl = kl_compute(t).map_err(config)?;
        match emit {
            Emit::Kl => {
                tsv = Table::new(&["w", "y", "p"]);
                for w in t.ids() {
                    for (&y, c) in kl.c(w) {
                        tsv.row(vec![t.format(w), t.format(y), c.to_string()]);
                    }
                }
                j.insert("kl".into(), kl.to_json());
                if kl.has_structure() {
                    let r = kl.check_structure().map_err(config)?;
                    checks.push(Check::new("h degree bound, gamma >= 0", r.is_ok(), format!("{} triples", r.triples)));
                }
            }
            Emit::Cells => {
                tsv = Table::new(&["w", "left", "two_sided", "a"]);
                for w in t.ids() {
                    let a = kl.a(w).map_or("-".into(), |a| a.to_string());
                    tsv.row(vec![
                        t.format(w),
                        kl.left_cell_of(w).to_string(),
                        kl.two_sided_of(w).to_string(),
                        a,
                    ]);
                }
                let v = kl.to_json();
                for key in ["left_cells", "right_cells", "two_sided_cells", "a", "distinguished"] {
                    if let Some(x) = v.get(key) {
                        j.insert(key.into(), x.clone());
                    }
                }
            }
            Emit::Jring | Emit::Jcm => {
                let ring = JRing::new(&kl).map_err(config)?;
                if emit == Emit::Jring {
                    tsv = Table::new(&["x", "y", "z", "gamma"]);
                    let mut rows = Vec::new();
                    for x in t.ids() {
                        for y in t.ids() {
                            for &(z, g) in ring.mul_basis(x, y) {
                                tsv.row(vec![t.format(x), t.format(y), t.format(z), g.to_string()]);
                                rows.push(json!({ "x": t.format(x), "y": t.format(y), "z": t.format(z), "gamma": g }));
                            }
                        }
                    }
                    j.insert("products".into(), json!(rows));
                    let unit = ring.check_unit().map_err(config)?;
                    checks.push(Check::new("sum of t_d is the unit", unit, ""));
                    let xexp = ring.x_expansion_check().map_err(config)?;
                    checks.push(Check::new(
                        "psi(X) t_xi expansion, r_z monic of degree a",
                        xexp.is_ok(),
                        format!("{} checked", xexp.checked),
                    ));
                } else {
                    let jcm = ring.jcm_ideal().map_err(config)?;
                    let sums = ring.cell_sums(&jcm);
                    checks.push(Check::new("block routes agree", jcm.routes_agree(), ""));
                    checks.push(Check::new(
                        "Z cap Z'^-1 sums lie in J^cm",
                        sums.all_inside(),
                        format!("{} elements, rank {}", sums.elements, sums.rank),
                    ));
                    tsv = Table::new(&["item", "value"]);
                    tsv.row(vec!["dim J".into(), jcm.dim_j.to_string()]);
                    tsv.row(vec!["dim J^cm".into(), jcm.dim.to_string()]);
                    tsv.row(vec!["cell sums".into(), sums.elements.to_string()]);
                    if s.sys.name() == "G2" {
                        let g2 = g2_basis_check(&ring, &jcm).map_err(config)?;
                        checks.push(Check::new(
                            "listed G2 elements form a basis of J^cm",
                            g2.is_ok(),
                            format!("rank {}, {} inside, dim {}", g2.rank, g2.inside, g2.dim_jcm),
                        ));
                        j.insert("g2_basis".into(), json!(g2));
                    }
                    j.insert("jcm".into(), json!(jcm));
                    j.insert("cell_sums".into(), json!(sums));
                }
            }
            Emit::Kottwitz => unreachable!(),
        }
    }
    let ok = checks.iter().all(|c| c.passed);
    j.insert("checks".into(), json!(checks));
    j.insert("ok".into(), json!(ok));
    Ok(Outcome {
        json: Value::Object(j),
        tsv,
        ok,
    })
}

fn cmd_group_ktheory(name: Option<&str>, file: Option<&Path>) -> Result<Outcome, CliError> {
    let g = match (name, file) {
        (Some(n), None) => FiniteGroup::named(n).map_err(config)?,
        (None, Some(p)) => FiniteGroup::from_json(&fs::read_to_string(p)?).map_err(config)?,
        _ => return Err(CliError::Config("pass one of --group, --group-file".into())),
    };
    let pairs = MPairSet::new(&g).map_err(config)?;
    let kappa = pairs
        .kottwitz_kappa(KappaReading::CentralizerOfRoot)
        .map_err(violation)?;
    let v = pairs.direct_image_v();
    let kv = verify_kappa_v(&g).map_err(violation)?;
    let chi = verify_chi(&g).map_err(violation)?;
    let four = fourier_matrix(&g).map_err(violation)?;

    let mut tsv = Table::new(&["pair", "kappa", "V"]);
    for (k, &p) in pairs.pairs().iter().enumerate() {
        tsv.row(vec![
            pairs.label(p),
            kappa.coeffs[k].to_string(),
            v.coeffs[k].to_string(),
        ]);
    }
    let checks = vec![
        Check::new("kappa = V", kv.is_ok(), kv.alternative_reading.clone()),
        Check::new(
            "chi_{y,sigma}(V) = |G_y| / dim sigma",
            chi.failures == 0,
            format!("{} pairs", chi.entries.len()),
        ),
        Check::new(
            "Fourier matrix closed form",
            four.closed_form_mismatches == 0,
            format!("symmetric: {}", four.symmetric),
        ),
    ];
    let ok = checks.iter().all(|c| c.passed);
    let j = json!({
        "schema": "invhecke.group-ktheory.v1",
        "group": g.name(),
        "order": g.order(),
        "kappa_v": kv,
        "chi": chi,
        "fourier": four,
        "checks": checks,
        "ok": ok,
    });
    Ok(Outcome { json: j, tsv, ok })
}
