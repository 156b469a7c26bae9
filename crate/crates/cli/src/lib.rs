//! Command-line front end: argument definitions, the five commands and
//! their output formats. `main.rs` only parses arguments and exits.

pub mod report;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;

use fqgauss::closedform::{eval_closed, Verdict};
use fqgauss::exactmath::CycNum;
use fqgauss::fqm::{parse_form, BlockExpr};
use fqgauss::oracle::{classical_gauss, gauss_sums, localization_check, signature, signature_of, Kind};
use fqgauss::orthogroup::{orbits, orthogonal_group};
use fqgauss::sweep::{self, FormReport};
use fqgauss::weil::{HalfWeight, WeilRep};
use fqgauss::{Error, Limits};

pub use report::{Entry, Report, Status, TableRow};

pub const EXIT_OK: u8 = 0;
pub const EXIT_MISMATCH: u8 = 1;
pub const EXIT_INVALID: u8 = 2;
pub const EXIT_CAP: u8 = 3;

#[derive(Debug, Parser)]
#[command(name = "fqgauss", version, about = "Exact equivariant Gauss sums of finite quadratic modules")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalOpts,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GlobalOpts {
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Largest |A| that may be enumerated [env: FQGAUSS_MAX_ORDER, default 20000].
    #[arg(long, global = true)]
    pub max_order: Option<u64>,
    /// Node budget for the isometry search [env: FQGAUSS_SEARCH_BUDGET, default 10^7].
    #[arg(long, global = true)]
    pub budget: Option<u64>,
}

impl GlobalOpts {
    pub fn limits(&self) -> Limits {
        let mut l = Limits::from_env();
        if let Some(m) = self.max_order {
            l = l.with_max_order(m);
        }
        if let Some(b) = self.budget {
            l = l.with_budget(b);
        }
        l
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Oracle quantities of one form.
    Eval {
        form: String,
        #[arg(long, value_enum, value_delimiter = ',')]
        what: Vec<Quantity>,
    },
    /// Closed-form value and the rule that produced it.
    Closed {
        form: String,
        #[arg(long, value_enum, default_value_t = KindArg::Both)]
        kind: KindArg,
    },
    /// Compare closed forms with the oracle over a family.
    Verify(VerifyArgs),
    /// Weil representation data and dimensions of invariant forms.
    Weil {
        form: String,
        /// Weight l, as `7`, `15/2` or `7.5`.
        #[arg(long)]
        weight: Option<String>,
        #[arg(long, value_enum, default_value_t = WeilWhat::Dim)]
        what: WeilWhat,
        /// Word in S, T, Z for `--what matrix`.
        #[arg(long, default_value = "S")]
        word: String,
    },
    /// One row per form: |A|, sigma, G, G' and the closed-form rule.
    Table {
        forms: Vec<String>,
        #[arg(long, value_enum)]
        family: Option<Family>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Quantity {
    G,
    Gprime,
    Classical,
    Classical2,
    Signature,
    Orbits,
    Autorder,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum KindArg {
    First,
    Second,
    Both,
}

impl KindArg {
    fn kinds(self) -> Vec<Kind> {
        match self {
            KindArg::First => vec![Kind::First],
            KindArg::Second => vec![Kind::Second],
            KindArg::Both => Kind::BOTH.to_vec(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum WeilWhat {
    Dim,
    Traces,
    Matrix,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Family {
    CyclicOdd,
    CyclicTwo,
    ElemOdd,
    ElemTwo,
    ProductOdd,
    ProductTwo,
    SecondKind,
    Localization,
    Weil,
    All,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(value_enum)]
    pub family: Family,
    /// Largest |A| (cyclic-odd, default 343; weil library, default 30).
    #[arg(long)]
    pub max: Option<u64>,
    /// 2-adic exponents (cyclic-two: largest k, default 6; product-two: list, default 2,3,4,5).
    #[arg(long, value_delimiter = ',')]
    pub k: Vec<u32>,
    /// Odd primes for elem-odd.
    #[arg(long, value_delimiter = ',', default_values_t = vec![3u64, 5, 7, 11])]
    pub primes: Vec<u64>,
    /// Largest dimension for elem-odd.
    #[arg(long, default_value_t = 4)]
    pub max_m: u32,
    /// Largest dimension for elem-two.
    #[arg(long, default_value_t = 4)]
    pub max_dim: u32,
}

/// What a command produced, and the exit code it implies.
#[derive(Debug, Clone, PartialEq)]
pub enum Output {
    Report(Report),
    Table(Vec<TableRow>),
}

impl Output {
    pub fn exit_code(&self) -> u8 {
        match self {
            Output::Report(r) if r.has_mismatch() => EXIT_MISMATCH,
            _ => EXIT_OK,
        }
    }

    pub fn render(&self, format: Format) -> String {
        match (self, format) {
            (Output::Report(r), Format::Text) => report::report_text(r),
            (Output::Report(r), Format::Json) => report::to_json(r) + "\n",
            (Output::Report(r), Format::Csv) => report::report_csv(r),
            (Output::Table(t), Format::Text) => report::table_text(t),
            (Output::Table(t), Format::Json) => report::to_json(t) + "\n",
            (Output::Table(t), Format::Csv) => report::table_csv(t),
        }
    }
}

/// Exit code for a library error: caps map to 3, everything else to 2.
pub fn error_code(e: &Error) -> u8 {
    if e.is_cap() {
        EXIT_CAP
    } else {
        EXIT_INVALID
    }
}

pub fn run(cli: &Cli) -> fqgauss::Result<Output> {
    let limits = cli.global.limits();
    match &cli.command {
        Command::Eval { form, what } => cmd_eval(form, what, &limits).map(Output::Report),
        Command::Closed { form, kind } => cmd_closed(form, *kind, &limits).map(Output::Report),
        Command::Verify(args) => cmd_verify(args, cli.global.max_order, &limits).map(Output::Report),
        Command::Weil { form, weight, what, word } => {
            cmd_weil(form, weight.as_deref(), *what, word, &limits).map(Output::Report)
        }
        Command::Table { forms, family } => cmd_table(forms, *family, &limits).map(Output::Table),
    }
}

fn entry(form: &str, quantity: &str, exact: String, approx: String, rule: &str, status: Status) -> Entry {
    Entry { form: form.into(), quantity: quantity.into(), exact, approx, rule: rule.into(), status }
}

fn value_entry(form: &str, quantity: &str, v: &CycNum, rule: &str) -> Entry {
    entry(form, quantity, v.to_string(), report::approx(v), rule, Status::Ok)
}

fn quantity_name(kind: Kind) -> &'static str {
    match kind {
        Kind::First => "G",
        Kind::Second => "G'",
    }
}

fn magnitude_note(form: &str, kind: Kind, v: &CycNum, order: u64) -> Option<String> {
    let r = v.abs() / (order as f64).sqrt();
    let ok = [0.0, 1.0, 2.0].iter().any(|t| (r - t).abs() < 1e-6);
    (!ok).then(|| format!("magnitude-outlier: {form}: |{}| / sqrt|A| = {r:.6}", quantity_name(kind)))
}

pub fn cmd_eval(form: &str, what: &[Quantity], limits: &Limits) -> fqgauss::Result<Report> {
    let expr = parse_form(form)?;
    let label = expr.to_string();
    let f = expr.realize();
    let what: Vec<Quantity> = if what.is_empty() { Quantity::value_variants().to_vec() } else { what.to_vec() };
    let mut report = Report::default();
    let needs_group = what.iter().any(|q| matches!(q, Quantity::G | Quantity::Gprime | Quantity::Orbits | Quantity::Autorder));
    let sums = if needs_group { Some(gauss_sums(&f, limits)?) } else { None };
    for q in what {
        match q {
            Quantity::G | Quantity::Gprime => {
                let kind = if q == Quantity::G { Kind::First } else { Kind::Second };
                let v = &sums.as_ref().expect("computed above").get(kind).value;
                report.push(value_entry(&label, quantity_name(kind), v, "oracle"));
                report.notes.extend(magnitude_note(&label, kind, v, f.group_order()));
            }
            Quantity::Classical => {
                let v = classical_gauss(&f, Kind::First, limits)?.value;
                report.push(value_entry(&label, "G(A)", &v, "oracle"));
            }
            Quantity::Classical2 => {
                let v = classical_gauss(&f, Kind::Second, limits)?.value;
                report.push(value_entry(&label, "G'(A)", &v, "oracle"));
            }
            Quantity::Signature => {
                let s = signature(&f, limits)?;
                report.push(entry(&label, "sigma", s.to_string(), s.to_string(), "oracle", Status::Ok));
            }
            Quantity::Orbits => {
                let part = orbits(&orthogonal_group(&f, limits)?);
                let sizes: Vec<String> = part.sizes().iter().map(|s| s.to_string()).collect();
                let exact = format!("{} orbits, sizes {}", part.len(), sizes.join(","));
                report.push(entry(&label, "orbits", exact, part.len().to_string(), "oracle", Status::Ok));
            }
            Quantity::Autorder => {
                let n = sums.as_ref().expect("computed above").group_order;
                report.push(entry(&label, "|O(A)|", n.to_string(), n.to_string(), "oracle", Status::Ok));
            }
        }
    }
    Ok(report)
}

pub fn cmd_closed(form: &str, kind: KindArg, limits: &Limits) -> fqgauss::Result<Report> {
    let expr = parse_form(form)?;
    let label = expr.to_string();
    let mut report = Report::default();
    for kind in kind.kinds() {
        match eval_closed(&expr, kind, limits)? {
            v @ Verdict::Supported { .. } => {
                let value = v.value().expect("supported");
                report.push(value_entry(&label, quantity_name(kind), value, &v.rule_label()));
            }
            Verdict::Unsupported(u) => {
                report.push(entry(&label, quantity_name(kind), String::new(), String::new(), "", Status::Unsupported));
                report.notes.push(format!("{label} ({}): {u}", quantity_name(kind)));
            }
        }
    }
    Ok(report)
}

fn compare_entries(r: &FormReport, kinds: &[Kind]) -> Vec<Entry> {
    let label = r.expr.to_string();
    kinds
        .iter()
        .map(|&kind| {
            let oracle = r.oracle(kind);
            let q = quantity_name(kind);
            match r.closed(kind) {
                v @ Verdict::Supported { value, .. } if value == oracle => value_entry(&label, q, value, &v.rule_label()),
                v @ Verdict::Supported { value, .. } => entry(
                    &label,
                    q,
                    format!("closed {value} != oracle {oracle}"),
                    format!("closed {} != oracle {}", report::approx(value), report::approx(oracle)),
                    &v.rule_label(),
                    Status::Mismatch,
                ),
                Verdict::Unsupported(_) => {
                    entry(&label, q, oracle.to_string(), report::approx(oracle), "oracle", Status::Unsupported)
                }
            }
        })
        .collect()
}

fn compare_family(exprs: Vec<BlockExpr>, kinds: &[Kind], limits: &Limits, report: &mut Report) -> fqgauss::Result<()> {
    for r in sweep::evaluate_all(&exprs, limits) {
        report.entries.extend(compare_entries(&r?, kinds));
    }
    Ok(())
}

fn first_kind_families(args: &VerifyArgs, family: Family) -> Vec<BlockExpr> {
    match family {
        Family::CyclicOdd => sweep::cyclic_odd_forms(args.max.unwrap_or(343)),
        Family::CyclicTwo => sweep::cyclic_two_forms(args.k.iter().copied().max().unwrap_or(6)),
        Family::ElemOdd => sweep::elem_odd_forms(&args.primes, 2..=args.max_m),
        Family::ElemTwo => sweep::elem_two_forms(args.max_dim),
        Family::ProductOdd => sweep::product_odd_forms(&[(3, 2), (3, 3), (5, 2)]),
        Family::ProductTwo => {
            let ks = if args.k.is_empty() { vec![2, 3, 4, 5] } else { args.k.clone() };
            sweep::product_two_forms(&ks)
        }
        _ => Vec::new(),
    }
}

const FIRST_KIND: [Family; 6] =
    [Family::CyclicOdd, Family::CyclicTwo, Family::ElemOdd, Family::ElemTwo, Family::ProductOdd, Family::ProductTwo];

pub fn cmd_verify(args: &VerifyArgs, max_order_flag: Option<u64>, limits: &Limits) -> fqgauss::Result<Report> {
    let mut report = Report::default();
    let families: Vec<Family> = match args.family {
        Family::All => [&FIRST_KIND[..], &[Family::SecondKind, Family::Localization, Family::Weil]].concat(),
        f => vec![f],
    };
    for family in families {
        match family {
            Family::SecondKind => {
                let mut exprs: Vec<BlockExpr> = FIRST_KIND.iter().flat_map(|&f| first_kind_families(args, f)).collect();
                exprs.extend(sweep::a4_pair_forms(&[2, 3, 4]));
                compare_family(exprs, &[Kind::Second], limits, &mut report)?;
            }
            Family::Localization => {
                let exprs = sweep::localization_forms();
                let results: Vec<fqgauss::Result<bool>> =
                    exprs.par_iter().map(|e| localization_check(&e.realize(), limits)).collect();
                for (e, ok) in exprs.iter().zip(results) {
                    let ok = ok?;
                    let exact = if ok { "factors over p-parts" } else { "does not factor over p-parts" };
                    let status = if ok { Status::Ok } else { Status::Mismatch };
                    report.push(entry(&e.to_string(), "localization", exact.into(), String::new(), "oracle", status));
                }
            }
            Family::Weil => {
                let bound = args.max.unwrap_or_else(|| max_order_flag.unwrap_or(30).min(30));
                let exprs = sweep::block_library(bound);
                let results: Vec<fqgauss::Result<Vec<String>>> =
                    exprs.par_iter().map(|e| weil_failures(e, limits)).collect();
                for (e, failed) in exprs.iter().zip(results) {
                    let failed = failed?;
                    let (exact, status) = if failed.is_empty() {
                        ("all checks hold".to_string(), Status::Ok)
                    } else {
                        (format!("failed: {}", failed.join(", ")), Status::Mismatch)
                    };
                    report.push(entry(&e.to_string(), "weil", exact, String::new(), "oracle", status));
                }
            }
            f => compare_family(first_kind_families(args, f), &[Kind::First], limits, &mut report)?,
        }
    }
    report.notes.push(format!(
        "{} ok, {} mismatch, {} unsupported",
        report.count(Status::Ok),
        report.count(Status::Mismatch),
        report.count(Status::Unsupported)
    ));
    Ok(report)
}

/// Names of the Weil checks that fail, including non-integral dimension values for 2 <= l <= 20.
fn weil_failures(e: &BlockExpr, limits: &Limits) -> fqgauss::Result<Vec<String>> {
    let rep = WeilRep::new(&e.realize(), limits)?;
    let c = rep.checks()?;
    let mut failed: Vec<String> = [
        ("unitary", c.unitary),
        ("S^8", c.s_order_8),
        ("S^2=(ST)^3", c.braid),
        ("Z", c.z_action),
        ("equivariance", c.equivariant),
        ("trace S", c.trace_s),
        ("trace ST", c.trace_st),
    ]
    .iter()
    .filter(|(_, ok)| !ok)
    .map(|(n, _)| n.to_string())
    .collect();
    for twice_l in 4..=40 {
        if let Err(err) = rep.dim_invariant_forms(HalfWeight::from_twice(twice_l)) {
            failed.push(format!("l={}: {err}", HalfWeight::from_twice(twice_l)));
        }
    }
    Ok(failed)
}

pub fn cmd_weil(form: &str, weight: Option<&str>, what: WeilWhat, word: &str, limits: &Limits) -> fqgauss::Result<Report> {
    let expr = parse_form(form)?;
    let label = expr.to_string();
    let rep = WeilRep::new(&expr.realize(), limits)?;
    let mut report = Report::default();
    match what {
        WeilWhat::Dim => {
            let text = weight.ok_or_else(|| Error::InvalidParameter("--weight is required for --what dim".into()))?;
            let l: HalfWeight = text.parse()?;
            let v = rep.dim_invariant_forms(l)?;
            let approx = v.raw.map(|x| format!("{x:.10}")).unwrap_or_else(|| "0".into());
            report.push(entry(&label, &format!("dim M_{l}"), v.dim.to_string(), approx, "oracle", Status::Ok));
            if v.raw.is_none() {
                report.notes.push(format!("2l - sigma = {} is not divisible by 4, so the dimension is 0", l.twice_l - rep.signature() as i64));
            }
            if l.twice_l == 4 {
                report.notes.push("l = 2: value per printed formula".into());
            }
        }
        WeilWhat::Traces => {
            let t = rep.trace_identities()?;
            for (q, got, want) in [("tr rho_inv(S)", &t.tr_s, &t.formula_s), ("tr rho_inv(ST)", &t.tr_st, &t.formula_st)] {
                let status = if got == want { Status::Ok } else { Status::Mismatch };
                report.push(entry(&label, q, got.to_string(), report::approx(got), "oracle", status));
            }
            report.notes.push(format!("sigma = {}", signature_of(&classical_gauss(rep.form(), Kind::Second, limits)?)?));
        }
        WeilWhat::Matrix => {
            let m = rep.rho_word(word)?;
            let labels = m.basis_labels();
            for i in 0..m.dim() {
                for j in 0..m.dim() {
                    let v = m.entry(i, j);
                    if !v.is_zero() {
                        let q = format!("rho({word})[{},{}]", labels[i], labels[j]);
                        report.push(value_entry(&label, &q, &v, "oracle"));
                    }
                }
            }
            report.notes.push(format!("{} x {} matrix; zero entries omitted", m.dim(), m.dim()));
        }
    }
    Ok(report)
}

fn table_row(expr: &BlockExpr, limits: &Limits) -> fqgauss::Result<TableRow> {
    let f = expr.realize();
    let sums = gauss_sums(&f, limits)?;
    let sigma = signature(&f, limits)?;
    let rules: Vec<String> = Kind::BOTH
        .iter()
        .map(|&k| eval_closed(expr, k, limits).map(|v| v.rule_label()))
        .collect::<fqgauss::Result<_>>()?;
    let rule = if rules[0] == rules[1] { rules[0].clone() } else { rules.join("/") };
    Ok(TableRow {
        form: expr.to_string(),
        order: f.group_order(),
        sigma,
        g_exact: sums.first.value.to_string(),
        g_approx: report::approx(&sums.first.value),
        gprime_exact: sums.second.value.to_string(),
        gprime_approx: report::approx(&sums.second.value),
        rule,
    })
}

pub fn cmd_table(forms: &[String], family: Option<Family>, limits: &Limits) -> fqgauss::Result<Vec<TableRow>> {
    let mut exprs: Vec<BlockExpr> = forms.iter().map(|s| parse_form(s)).collect::<fqgauss::Result<_>>()?;
    if let Some(f) = family {
        let defaults = VerifyArgs { family: f, max: None, k: Vec::new(), primes: vec![3, 5, 7, 11], max_m: 4, max_dim: 4 };
        exprs.extend(match f {
            Family::SecondKind => sweep::a4_pair_forms(&[2, 3, 4]),
            Family::Localization => sweep::localization_forms(),
            Family::Weil => sweep::block_library(30),
            Family::All => FIRST_KIND.iter().flat_map(|&g| first_kind_families(&defaults, g)).collect(),
            g => first_kind_families(&defaults, g),
        });
    }
    exprs.par_iter().map(|e| table_row(e, limits)).collect()
}
