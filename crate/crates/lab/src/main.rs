use std::fs;
use std::io::BufWriter;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;
use std::time::Instant;

use anyhow::{anyhow, bail, Context};
use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::json;

use semifield_core::bh::{check_planarity, check_presemifield, check_table, DEFAULT_TABLE_GUARD};
use semifield_core::isotopy::{self, BINOMIAL_SEARCH_GUARD};
use semifield_core::{arith, census, make_field, nuclei, BhParams, FieldSpec, IsotopismCert, MulTable, PresemifieldReport};
use semifield_lab::formats::{
    self, BhParamsJson, CensusJson, CertJson, FieldSpecJson, NucleusReportJson,
};

const GUARD_VAR: &str = "SEMIFIELD_LAB_GUARD";

#[derive(Parser)]
#[command(name = "semifield-lab", version, about = "Budaghyan-Helleseth presemifields: construction, nuclei, isotopism certificates")]
struct Cli {
    /// Human-readable output instead of JSON.
    #[arg(long, global = true)]
    pretty: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Finite field descriptions.
    #[command(subcommand)]
    Field(FieldCmd),
    /// The presemifield BH(q, l, d).
    #[command(subcommand)]
    Bh(BhCmd),
    /// Center and middle nucleus of the semifield isotope.
    Nuclei(NucleiArgs),
    /// Build and verify isotopism certificates.
    #[command(subcommand)]
    Cert(CertCmd),
    /// Strong autotopisms.
    #[command(subcommand)]
    Autotopisms(AutoCmd),
    /// Exhaustive searches for strong isotopisms.
    #[command(subcommand)]
    Search(SearchCmd),
    /// Isotopism classes of BH(q, l, ·).
    Census(CensusArgs),
}

#[derive(Subcommand)]
enum FieldCmd {
    Make {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum BhCmd {
    /// Emit the parameter file.
    Construct {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Exhaustive presemifield check (no zero divisors, commutativity).
    Check {
        #[command(flatten)]
        params: ParamArgs,
        /// Also check planarity of x ∗ x.
        #[arg(long)]
        planarity: bool,
        /// Check a stored binary table instead of building one.
        #[arg(long)]
        table: Option<PathBuf>,
        /// Distributivity samples.
        #[arg(long, default_value_t = 2000)]
        samples: u64,
    },
    /// Write the binary multiplication table.
    Table {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(short, long)]
        out: PathBuf,
    },
}

#[derive(Args)]
struct NucleiArgs {
    #[command(flatten)]
    params: ParamArgs,
    /// Scan every element as well (table-size fields only).
    #[arg(long)]
    exhaustive: bool,
    #[arg(short, long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum CertCmd {
    /// BH(β) → BH(β'), same d and ω.
    BuildBeta {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long)]
        d: u64,
        /// log_γ β (odd).
        #[arg(long, default_value_t = 1)]
        beta_log: u64,
        /// log_γ β' (odd).
        #[arg(long)]
        beta_prime_log: u64,
        /// log_γ ω; defaults to (q^l + 1)/2.
        #[arg(long)]
        omega_log: Option<u64>,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// BH(q, l, d) → BH(q, l, 2l - d).
    BuildReflect {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Semifields of BH(q, l, l - d) → BH(q, l, d) for q ≡ 1 (mod 4), l even.
    BuildLminusd {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long)]
        d: u64,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Verify a certificate file; exit code 1 if it does not hold.
    Verify {
        file: PathBuf,
        /// Also evaluate both sides on all basis pairs.
        #[arg(long)]
        basis_pairs: bool,
    },
}

#[derive(Subcommand)]
enum AutoCmd {
    Enumerate {
        #[command(flatten)]
        params: ParamArgs,
        /// Write all certificates as a JSON array.
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum SearchCmd {
    /// N(x) = b x^{p^i} over all i and b ≠ 0.
    Monomial {
        #[command(flatten)]
        params: ParamArgs,
        /// d of the target (same β, ω); defaults to the source d.
        #[arg(long)]
        dst_d: Option<u64>,
        /// Target parameter file instead of --dst-d.
        #[arg(long, conflicts_with = "dst_d")]
        dst: Option<PathBuf>,
        /// Also search the two-term N(x) = b_i x^{p^i} + b_j x^{p^j} space.
        #[arg(long)]
        binomial: bool,
        /// Cap on two-term candidates.
        #[arg(long, default_value_t = BINOMIAL_SEARCH_GUARD)]
        max_candidates: u128,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct CensusArgs {
    #[arg(long)]
    q: u64,
    #[arg(long)]
    l: u64,
    /// Build and verify an isotopism certificate for every merged class.
    #[arg(long)]
    witness: bool,
}

#[derive(Args, Clone)]
struct FieldArgs {
    /// Odd prime power q = p^h.
    #[arg(long, conflicts_with_all = ["p", "h"])]
    q: Option<u64>,
    #[arg(long)]
    p: Option<u64>,
    #[arg(long, requires = "p")]
    h: Option<u32>,
    #[arg(long)]
    l: Option<u32>,
}

impl FieldArgs {
    fn resolve(&self) -> anyhow::Result<Arc<FieldSpec>> {
        let (p, h) = match (self.q, self.p) {
            (Some(q), _) => {
                let (p, h) = arith::prime_power(q).ok_or_else(|| anyhow!("q = {q} is not a prime power"))?;
                (p, h)
            }
            (None, Some(p)) => (p, self.h.unwrap_or(1)),
            (None, None) => bail!("give --q or --p"),
        };
        let l = self.l.ok_or_else(|| anyhow!("--l is required"))?;
        Ok(make_field(p, h, l)?)
    }
}

#[derive(Args, Clone)]
struct ParamArgs {
    /// Parameter file from `bh construct`; replaces the other options.
    #[arg(long, conflicts_with_all = ["q", "p", "h", "l", "d", "beta_log", "omega_log"])]
    params: Option<PathBuf>,
    #[command(flatten)]
    field: FieldArgs,
    #[arg(long)]
    d: Option<u64>,
    /// log_γ β (odd); defaults to 1.
    #[arg(long)]
    beta_log: Option<u64>,
    /// log_γ ω; defaults to (q^l + 1)/2.
    #[arg(long)]
    omega_log: Option<u64>,
}

impl ParamArgs {
    fn resolve(&self) -> anyhow::Result<BhParams> {
        if let Some(path) = &self.params {
            let j: BhParamsJson = read_json(path)?;
            return Ok(j.to_params()?);
        }
        let f = self.field.resolve()?;
        let d = self.d.ok_or_else(|| anyhow!("--d is required"))?;
        params_with_logs(&f, d, self.beta_log, self.omega_log)
    }
}

fn params_with_logs(f: &Arc<FieldSpec>, d: u64, beta_log: Option<u64>, omega_log: Option<u64>) -> anyhow::Result<BhParams> {
    let k = f.canonical_constants();
    let beta = beta_log.map_or(k.beta, |e| f.gamma_pow(e));
    let omega = omega_log.map_or(k.omega, |e| f.gamma_pow(e));
    Ok(BhParams::new(f.clone(), d, beta, omega)?)
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> anyhow::Result<T> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
}

fn table_guard() -> anyhow::Result<u64> {
    match std::env::var(GUARD_VAR) {
        Ok(v) => v
            .trim()
            .parse()
            .with_context(|| format!("{GUARD_VAR} must be an integer, got {v:?}")),
        Err(_) => Ok(DEFAULT_TABLE_GUARD),
    }
}

/// Writes `value` as JSON to `out`, or to stdout; with `--pretty` and no
/// file, prints `human` instead.
fn emit<T: Serialize>(value: &T, out: Option<&Path>, pretty: bool, human: impl FnOnce() -> String) -> anyhow::Result<()> {
    match out {
        Some(path) => {
            fs::write(path, formats::to_json(value, pretty)? + "\n")
                .with_context(|| format!("writing {}", path.display()))?;
            if pretty {
                println!("{}", human());
            }
        }
        None if pretty => println!("{}", human()),
        None => println!("{}", formats::to_json(value, false)?),
    }
    Ok(())
}

fn name(p: &BhParams) -> String {
    let f = p.spec();
    format!("BH({}, {}, {})", f.q(), f.l(), p.d())
}

fn report_json(p: &BhParams, r: &PresemifieldReport, planar: Option<bool>, secs: f64) -> serde_json::Value {
    json!({
        "params": BhParamsJson::from_params(p),
        "order": r.order,
        "pairs_scanned": r.pairs_scanned.to_string(),
        "zero_divisors": r.zero_divisors,
        "asymmetric_pairs": r.asymmetric_pairs,
        "distributive_samples": r.distributive_samples,
        "distributive_failures": r.distributive_failures,
        "planar": planar,
        "passes": r.passes() && planar != Some(false),
        "seconds": secs,
    })
}

fn run(cli: Cli) -> anyhow::Result<ExitCode> {
    let pretty = cli.pretty;
    match cli.cmd {
        Cmd::Field(FieldCmd::Make { field, out }) => {
            let f = field.resolve()?;
            let j = FieldSpecJson::from_spec(&f);
            emit(&j, out.as_deref(), pretty, || serde_json::to_string_pretty(&j).unwrap_or_default())?;
        }
        Cmd::Bh(BhCmd::Construct { params, out }) => {
            let p = params.resolve()?;
            let j = BhParamsJson::from_params(&p);
            emit(&j, out.as_deref(), pretty, || serde_json::to_string_pretty(&j).unwrap_or_default())?;
        }
        Cmd::Bh(BhCmd::Check {
            params,
            planarity,
            table,
            samples,
        }) => {
            let p = params.resolve()?;
            let guard = table_guard()?;
            let start = Instant::now();
            let report = match &table {
                Some(path) => {
                    let t = formats::read_table(&mut fs::File::open(path)?)?;
                    if t.p() != p.spec().p() || t.degree() != p.spec().degree() {
                        bail!("table does not match the field of {}", name(&p));
                    }
                    check_table(p.spec(), &t, samples)
                }
                None => check_presemifield(&p, guard)?,
            };
            let planar = if planarity { Some(check_planarity(&p, guard)?) } else { None };
            let secs = start.elapsed().as_secs_f64();
            let ok = report.passes() && planar != Some(false);
            emit(&report_json(&p, &report, planar, secs), None, pretty, || {
                let mut s = format!(
                    "{}: {} pairs, {} zero divisors, {} asymmetric pairs, {}/{} distributive samples failed",
                    name(&p),
                    report.pairs_scanned,
                    report.zero_divisors,
                    report.asymmetric_pairs,
                    report.distributive_failures,
                    report.distributive_samples
                );
                if let Some(pl) = planar {
                    s += &format!("\nplanar: {pl}");
                }
                s + &format!("\n{} ({secs:.2} s)", if ok { "PASS" } else { "FAIL" })
            })?;
            if !ok {
                return Ok(ExitCode::from(1));
            }
        }
        Cmd::Bh(BhCmd::Table { params, out }) => {
            let p = params.resolve()?;
            let t = MulTable::build(&p, table_guard()?)?;
            let mut w = BufWriter::new(fs::File::create(&out).with_context(|| format!("creating {}", out.display()))?);
            formats::write_table(&mut w, &t)?;
            let j = json!({"file": out.display().to_string(), "order": t.order(), "narrow": t.is_narrow()});
            emit(&j, None, pretty, || format!("wrote {}×{} table of {} to {}", t.order(), t.order(), name(&p), out.display()))?;
        }
        Cmd::Nuclei(NucleiArgs { params, exhaustive, out }) => {
            let p = params.resolve()?;
            let guard = if exhaustive { Some(table_guard()?) } else { None };
            let r = nuclei::nucleus_report(&p, guard)?;
            let j = NucleusReportJson::from_report(&p, &r);
            emit(&j, out.as_deref(), pretty, || {
                format!(
                    "{}: |center| = {}, |middle nucleus| = {} ({})",
                    name(&p),
                    r.center.len(),
                    r.middle.len(),
                    if r.exhaustive { "exhaustive scan agrees with κ(a, b)" } else { "from κ(a, b)" }
                )
            })?;
        }
        Cmd::Cert(cmd) => return cert(cmd, pretty),
        Cmd::Autotopisms(AutoCmd::Enumerate { params, out }) => {
            let p = params.resolve()?;
            let start = Instant::now();
            let all = isotopy::enumerate_strong_autotopisms(&p)?;
            let f = p.spec();
            let expected = census::strong_autotopism_order(f.q(), f.h() as u64, f.l() as u64);
            if let Some(path) = &out {
                let certs: Vec<CertJson> = all.iter().map(CertJson::from_cert).collect();
                fs::write(path, formats::to_json(&certs, false)?)?;
            }
            let j = json!({
                "params": BhParamsJson::from_params(&p),
                "count": all.len(),
                "expected": expected.map(|e| e.to_string()),
                "seconds": start.elapsed().as_secs_f64(),
            });
            emit(&j, None, pretty, || {
                format!(
                    "{}: {} strong autotopisms, all verified (4lh(q^l - 1) = {})",
                    name(&p),
                    all.len(),
                    expected.map_or("?".into(), |e| e.to_string())
                )
            })?;
        }
        Cmd::Search(SearchCmd::Monomial {
            params,
            dst_d,
            dst,
            binomial,
            max_candidates,
            out,
        }) => {
            let src = params.resolve()?;
            let dst = match (dst, dst_d) {
                (Some(path), _) => {
                    let j: BhParamsJson = read_json(&path)?;
                    j.to_params_in(src.spec())?
                }
                (None, Some(d)) => src.with_d(d)?,
                (None, None) => src.clone(),
            };
            let start = Instant::now();
            let mut hits = isotopy::search_strong_isotopism_monomial(&src, &dst)?;
            let mono = hits.len();
            let mut two_term = None;
            if binomial {
                let cost = isotopy::binomial_search_cost(src.spec());
                eprintln!("two-term search: {cost} candidates");
                let b = isotopy::search_strong_isotopism_binomial(&src, &dst, max_candidates)?;
                two_term = Some(b.len());
                hits.extend(b);
            }
            if let Some(path) = &out {
                let certs: Vec<CertJson> = hits.iter().map(CertJson::from_cert).collect();
                fs::write(path, formats::to_json(&certs, false)?)?;
            }
            let j = json!({
                "src_d": src.d(),
                "dst_d": dst.d(),
                "monomial_hits": mono,
                "binomial_hits": two_term,
                "seconds": start.elapsed().as_secs_f64(),
            });
            emit(&j, None, pretty, || {
                let mut s = format!("{} → {}: {} monomial-N strong isotopisms", name(&src), name(&dst), mono);
                if let Some(b) = two_term {
                    s += &format!(", {b} two-term");
                }
                s
            })?;
        }
        Cmd::Census(CensusArgs { q, l, witness }) => {
            if l == 2 {
                let text = census::dickson_report(q);
                emit(&json!({"q": q, "l": 2, "report": text}), None, pretty, || text.clone())?;
                return Ok(ExitCode::SUCCESS);
            }
            let c = census::census(q, l)?;
            let mut witnesses = Vec::new();
            if witness {
                let (p, h) = arith::prime_power(q).ok_or_else(|| anyhow!("q = {q} is not a prime power"))?;
                for class in c.merged() {
                    let outcome = make_field(p, h, l as u32)
                        .and_then(|f| isotopy::build_l_minus_d(&f, class[0]))
                        .and_then(|cert| cert.verify());
                    witnesses.push(match outcome {
                        Ok(v) => json!({"class": class, "verified": v}),
                        Err(e) => json!({"class": class, "verified": false, "error": e.to_string()}),
                    });
                }
            }
            let all_witnessed = witnesses.iter().all(|w| w["verified"] == true);
            let j = json!({"census": CensusJson::from(&c), "witnesses": witnesses});
            emit(&j, None, pretty, || {
                let classes: Vec<String> = c
                    .classes
                    .iter()
                    .map(|cl| format!("{{{}}}", cl.iter().map(u64::to_string).collect::<Vec<_>>().join(", ")))
                    .collect();
                let mut s = format!(
                    "q = {q}, l = {l}: count {} (formula {}), classes {}",
                    c.count,
                    c.formula_value,
                    classes.join(" ")
                );
                for w in &witnesses {
                    s += &format!("\nwitness {}: verified {}", w["class"], w["verified"]);
                }
                s
            })?;
            if !all_witnessed {
                return Ok(ExitCode::from(1));
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn cert(cmd: CertCmd, pretty: bool) -> anyhow::Result<ExitCode> {
    let (c, out): (IsotopismCert, Option<PathBuf>) = match cmd {
        CertCmd::BuildBeta {
            field,
            d,
            beta_log,
            beta_prime_log,
            omega_log,
            out,
        } => {
            let f = field.resolve()?;
            let omega = omega_log.map_or(f.canonical_constants().omega, |e| f.gamma_pow(e));
            let c = isotopy::build_beta_change(&f, d, f.gamma_pow(beta_log), f.gamma_pow(beta_prime_log), omega)?;
            (c, out)
        }
        CertCmd::BuildReflect { params, out } => (isotopy::build_d_reflection(&params.resolve()?)?, out),
        CertCmd::BuildLminusd { field, d, out } => (isotopy::build_l_minus_d(&field.resolve()?, d)?, out),
        CertCmd::Verify { file, basis_pairs } => {
            let j: CertJson = read_json(&file)?;
            let c = match j.to_cert() {
                Ok(c) => c,
                Err(formats::FormatError::Core(semifield_core::Error::SpecMismatch)) => {
                    let j = json!({"verified": false, "reason": "source and target live over different fields"});
                    emit(&j, None, pretty, || "REJECTED: source and target live over different fields".into())?;
                    return Ok(ExitCode::from(1));
                }
                Err(e) => return Err(e.into()),
            };
            let forms = c.verify()?;
            let pairs = if basis_pairs { Some(c.verify_basis_pairs()?) } else { None };
            let ok = forms && pairs != Some(false);
            let j = json!({
                "verified": ok,
                "form_identity": forms,
                "basis_pairs": pairs,
                "strong": c.strong(),
                "level": formats::LevelJson::from(c.level()),
                "src": name(c.src()),
                "dst": name(c.dst()),
            });
            emit(&j, None, pretty, || {
                format!(
                    "{} → {} ({}{:?} level): {}",
                    name(c.src()),
                    name(c.dst()),
                    if c.strong() { "strong, " } else { "" },
                    c.level(),
                    if ok { "VERIFIED" } else { "REJECTED" }
                )
            })?;
            return Ok(if ok { ExitCode::SUCCESS } else { ExitCode::from(1) });
        }
    };
    let j = CertJson::from_cert(&c);
    emit(&j, out.as_deref(), pretty, || {
        format!(
            "{} → {}: {}verified certificate",
            name(c.src()),
            name(c.dst()),
            if c.strong() { "strong " } else { "" }
        )
    })?;
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
