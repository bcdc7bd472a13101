use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use ncpart::annulus::{d_domain, find_dparen, tau_d, tau_d_prime, tau_d_prime_inv};
use ncpart::arith::binomial;
use ncpart::enumeration::{element_info, enumerate_family, Family, FamilySpec, Filters, Limits, Poset};
use ncpart::formula::{brute_query, eval_formula, FormulaId, FormulaParams};
use ncpart::generate::nc_b;
use ncpart::paren::{states_with_sizes, tau, tau_inv, tau_prime, tau_prime_inv, ParenState};
use ncpart::typeb::{psi, psi_inv};
use ncpart::verify::{verify, FamilyTuple, ParamRange};
use ncpart::{Error, TypeVector};

#[derive(Parser)]
#[command(name = "ncpart", version, about = "Noncrossing partitions of types A, B and D")]
struct Cli {
    /// Largest ground set to enumerate (also NCPART_MAX_GROUND).
    #[arg(long, global = true)]
    max_ground: Option<usize>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// List every element of a family.
    Enumerate {
        #[command(flatten)]
        fam: FamArgs,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Count multichains of length ℓ, optionally filtered.
    Chains {
        #[command(flatten)]
        fam: FamArgs,
        #[arg(long, short = 'l', default_value_t = 1)]
        l: usize,
        /// Rank jumps s_1,…,s_{ℓ+1}.
        #[arg(long)]
        jumps: Option<String>,
        /// k-type of the bottom element, "b;b_1,…,b_n" or "b_1,…,b_n".
        #[arg(long)]
        ktype: Option<String>,
        /// First level carrying a zero block (ℓ+1 for none).
        #[arg(long)]
        index: Option<usize>,
        /// Require (true) or forbid (false) a level with a wrapping block.
        #[arg(long)]
        annular: Option<bool>,
        /// Also evaluate this closed form and compare.
        #[arg(long)]
        id: Option<String>,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Z(ℓ): the number of multichains of length ℓ.
    Zeta {
        #[command(flatten)]
        fam: FamArgs,
        #[arg(long, short = 'l', default_value_t = 1)]
        l: usize,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Compare a closed form with brute force over a parameter range.
    Verify {
        #[arg(long)]
        id: String,
        #[arg(long, default_value_t = 6)]
        max_kn: usize,
        #[arg(long, default_value_t = 6)]
        max_n: usize,
        #[arg(long, default_value_t = 3)]
        max_k: usize,
        #[arg(long, default_value_t = 3)]
        max_l: usize,
        /// JSON list of {"n","k","r","l"} tuples replacing the range.
        #[arg(long)]
        params_file: Option<PathBuf>,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Apply one of the bijections to a whole domain.
    Bijection {
        #[arg(long, value_enum)]
        map: MapKind,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 1)]
        k: usize,
        #[arg(long, short = 'l', default_value_t = 1)]
        l: usize,
        /// Check inverse ∘ map = id instead of printing images.
        #[arg(long)]
        roundtrip: bool,
        #[command(flatten)]
        out: OutArgs,
    },
}

#[derive(Args)]
struct FamArgs {
    #[arg(long, value_enum, ignore_case = true)]
    family: FamilyArg,
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 1)]
    k: usize,
    #[arg(long, default_value_t = 0)]
    r: usize,
}

#[derive(Args)]
struct OutArgs {
    #[arg(long, value_enum, default_value_t = Output::Json)]
    output: Output,
    /// Write to a file instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum FamilyArg {
    A,
    B,
    D,
    AugA,
    TildeA,
}

impl From<FamilyArg> for Family {
    fn from(f: FamilyArg) -> Family {
        match f {
            FamilyArg::A => Family::A,
            FamilyArg::B => Family::B,
            FamilyArg::D => Family::D,
            FamilyArg::AugA => Family::AugA,
            FamilyArg::TildeA => Family::TildeA,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Output {
    Json,
    Csv,
    Table,
}

#[derive(Clone, Copy, ValueEnum)]
enum MapKind {
    Psi,
    Tau,
    TauPrime,
    TauD,
    TauDPrime,
}

/// Errors carry their exit code.
struct Fail(u8, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Param(_) | Error::Hypothesis(_) | Error::ScaleGuard(_) => 2,
            _ => 1,
        };
        Fail(code, e.to_string())
    }
}

impl From<io::Error> for Fail {
    fn from(e: io::Error) -> Self {
        Fail(1, e.to_string())
    }
}

fn usage(msg: impl Into<String>) -> Fail {
    Fail(2, msg.into())
}

fn sink(o: &OutArgs) -> Result<Box<dyn Write>, Fail> {
    Ok(match &o.out {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn spec_of(f: &FamArgs) -> Result<FamilySpec, Fail> {
    Ok(FamilySpec::new(f.family.into(), f.n, f.k, f.r)?)
}

fn parse_list(s: &str) -> Result<Vec<usize>, Fail> {
    s.split(',')
        .map(|x| x.trim().parse::<usize>().map_err(|_| usage(format!("bad number {x:?} in {s:?}"))))
        .collect()
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut limits = Limits::default();
    if let Some(g) = cli.max_ground {
        limits.max_ground = g;
    }
    match run(cli.cmd, &limits) {
        Ok(code) => ExitCode::from(code),
        Err(Fail(code, msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(code)
        }
    }
}

fn run(cmd: Cmd, limits: &Limits) -> Result<u8, Fail> {
    match cmd {
        Cmd::Enumerate { fam, out } => enumerate(&fam, &out, limits),
        Cmd::Chains { fam, l, jumps, ktype, index, annular, id, out } => {
            let spec = spec_of(&fam)?;
            let filters = Filters {
                jumps: jumps.as_deref().map(parse_list).transpose()?,
                ktype: ktype.as_deref().map(|s| s.parse::<TypeVector>()).transpose()?,
                index,
                annular,
            };
            chains(spec, l, filters, id.as_deref(), &out, limits)
        }
        Cmd::Zeta { fam, l, out } => {
            let spec = spec_of(&fam)?;
            let z = Poset::build(&spec, limits)?.census(l)?.total();
            let mut w = sink(&out)?;
            match out.output {
                Output::Json => writeln!(w, "{}", json!({"family": spec.family.name(), "n": spec.n, "k": spec.k, "r": spec.r, "l": l, "zeta": z.to_string()}))?,
                Output::Csv => writeln!(w, "family,n,k,r,l,zeta\n{},{},{},{},{},{}", spec.family, spec.n, spec.k, spec.r, l, z)?,
                Output::Table => writeln!(w, "Z({spec}, ℓ={l}) = {z}")?,
            }
            Ok(0)
        }
        Cmd::Verify { id, max_kn, max_n, max_k, max_l, params_file, out } => {
            let id: FormulaId = id.parse()?;
            let tuples: Vec<FamilyTuple> = match params_file {
                Some(p) => {
                    let text = std::fs::read_to_string(&p)?;
                    serde_json::from_str(&text).map_err(|e| usage(format!("{}: {e}", p.display())))?
                }
                None => ParamRange { max_n, max_k, max_kn, max_l }.tuples(id),
            };
            let o = verify(id, &tuples, limits)?;
            let mut w = sink(&out)?;
            match out.output {
                Output::Table => {
                    writeln!(w, "{id}: {}", o.summary())?;
                    for m in o.mismatches() {
                        writeln!(w, "  mismatch at {:?}: brute {} formula {}", m.query, m.brute, m.formula)?;
                    }
                    for s in &o.skipped {
                        writeln!(w, "  skipped {s}")?;
                    }
                }
                Output::Csv => {
                    writeln!(w, "id,query,brute,formula,match")?;
                    for r in &o.reports {
                        let q = serde_json::to_string(&r.query).unwrap().replace('"', "'");
                        writeln!(w, "{},\"{q}\",{},{},{}", r.id, r.brute, r.formula, r.matches)?;
                    }
                }
                Output::Json => writeln!(
                    w,
                    "{}",
                    json!({
                        "id": id.as_str(),
                        "tuples": o.reports.len(),
                        "mismatches": o.mismatches(),
                        "skipped": o.skipped,
                        "summary": o.summary(),
                    })
                )?,
            }
            Ok(if o.all_match() { 0 } else { 1 })
        }
        Cmd::Bijection { map, n, k, l, roundtrip, out } => bijection(map, n, k, l, roundtrip, &out),
    }
}

fn enumerate(fam: &FamArgs, out: &OutArgs, limits: &Limits) -> Result<u8, Fail> {
    let spec = spec_of(fam)?;
    let elems = enumerate_family(&spec, limits)?;
    let mut w = sink(out)?;
    if out.output == Output::Csv {
        writeln!(w, "index,rank,type,blocks")?;
    }
    for (i, p) in elems.iter().enumerate() {
        let info = element_info(&spec, p)?;
        let blocks = match p {
            ncpart::AnyPartition::Set(s) => serde_json::to_value(s.blocks()).unwrap(),
            ncpart::AnyPartition::Signed(s) => serde_json::to_value(s.blocks()).unwrap(),
        };
        match out.output {
            Output::Json => writeln!(
                w,
                "{}",
                json!({"family": spec.family.name(), "n": spec.n, "k": spec.k, "blocks": blocks, "rank": info.rank, "type": info.ktype.to_string()})
            )?,
            Output::Csv => writeln!(w, "{i},{},\"{}\",\"{p}\"", info.rank, info.ktype)?,
            Output::Table => writeln!(w, "{i:>6}  rank {:>2}  {:<20} {p}", info.rank, info.ktype.to_string())?,
        }
    }
    Ok(0)
}

fn chains(spec: FamilySpec, l: usize, filters: Filters, id: Option<&str>, out: &OutArgs, limits: &Limits) -> Result<u8, Fail> {
    let count = Poset::build(&spec, limits)?.census(l)?.count(&filters)?;
    let query = json!({"family": spec.family.name(), "n": spec.n, "k": spec.k, "r": spec.r, "l": l, "filters": filters});
    let mut w = sink(out)?;
    let Some(id) = id else {
        match out.output {
            Output::Json => writeln!(w, "{}", json!({"query": query, "brute": count.to_string()}))?,
            Output::Csv => writeln!(w, "query,brute\n\"{}\",{count}", query.to_string().replace('"', "'"))?,
            Output::Table => writeln!(w, "{count}")?,
        }
        return Ok(0);
    };
    let id: FormulaId = id.parse()?;
    let (n, k, r) = match spec.family {
        // formulas for tilde-A are indexed by the aug-A parameters
        Family::TildeA => ((spec.n - 1) / 2, spec.k / 2, 0),
        _ => (spec.n, spec.k, spec.r),
    };
    let p = FormulaParams { n, k, r, l, jumps: filters.jumps.clone(), ktype: filters.ktype.clone(), index: filters.index };
    let (fspec, ffilt) = brute_query(id, &p)?;
    if fspec != spec || ffilt.annular != filters.annular {
        return Err(usage(format!("{id} speaks about {fspec} with annular = {:?}", ffilt.annular)));
    }
    let formula = eval_formula(id, &p)?;
    let ok = formula == count;
    match out.output {
        Output::Json => writeln!(
            w,
            "{}",
            json!({"query": query, "brute": count.to_string(), "formula": formula.to_string(), "id": id.as_str(), "match": ok})
        )?,
        Output::Csv => writeln!(w, "id,brute,formula,match\n{id},{count},{formula},{ok}")?,
        Output::Table => writeln!(w, "{id}: brute {count}, formula {formula}, {}", if ok { "match" } else { "MISMATCH" })?,
    }
    Ok(if ok { 0 } else { 1 })
}

fn bijection(map: MapKind, n: usize, k: usize, l: usize, roundtrip: bool, out: &OutArgs) -> Result<u8, Fail> {
    if n == 0 {
        return Err(usage("n must be positive"));
    }
    let mut w = sink(out)?;
    let mut lines: Vec<serde_json::Value> = Vec::new();
    let (label, total, ok) = match map {
        MapKind::Psi => {
            let all = nc_b(n, 1);
            let mut ok = 0;
            for p in &all {
                let q = psi(p)?;
                if psi_inv(&q)? == *p {
                    ok += 1;
                }
                if !roundtrip {
                    lines.push(json!({"pi": p.to_json("B", 1), "image": q.to_json()}));
                }
            }
            (format!("C({},{})={}", 2 * n, n, binomial(2 * n as i64, n as i64)), all.len(), ok)
        }
        MapKind::Tau | MapKind::TauPrime => {
            if matches!(map, MapKind::Tau) && l != 1 {
                return Err(usage("tau works with ℓ = 1; use tau-prime"));
            }
            let mut total = 0;
            let mut ok = 0;
            for c in (0..n).flat_map(|t| ncpart::arith::compositions(t, l)) {
                let size: usize = c.iter().sum();
                for p in states_with_sizes(n, size, &c) {
                    let Ok((b, chain)) = tau_prime(&p) else { continue };
                    total += 1;
                    let back: Result<ParenState, Error> =
                        if l == 1 { tau_inv(&b, &chain[0]) } else { tau_prime_inv(&b, &chain) };
                    if back.as_ref() == Ok(&p) {
                        ok += 1;
                    }
                    if l == 1 {
                        debug_assert_eq!(tau(&p).ok().map(|x| x.1), Some(chain[0].clone()));
                    }
                    if !roundtrip {
                        let chain: Vec<String> = chain.iter().map(|x| x.to_string()).collect();
                        lines.push(json!({"P": p, "B": b, "chain": chain}));
                    }
                }
            }
            (format!("P̄({n},{l})={total}"), total, ok)
        }
        MapKind::TauD | MapKind::TauDPrime => {
            let ell = if matches!(map, MapKind::TauD) { 1 } else { l };
            let dom = d_domain(n, k, ell)?;
            let mut total = 0;
            let mut ok = 0;
            for p in &dom {
                if matches!(map, MapKind::TauD) {
                    let imgs = tau_d(p, n, k)?;
                    for pi in &imgs {
                        total += 1;
                        if find_dparen(pi, n, k).as_ref() == Ok(p) {
                            ok += 1;
                        }
                    }
                    if !roundtrip {
                        let imgs: Vec<String> = imgs.iter().map(|x| x.to_string()).collect();
                        lines.push(json!({"P": p, "images": imgs}));
                    }
                } else {
                    for eps in [1i8, -1] {
                        let chain = tau_d_prime(p, eps, n, k)?;
                        total += 1;
                        if tau_d_prime_inv(&chain, n, k).as_ref() == Ok(&(p.clone(), eps)) {
                            ok += 1;
                        }
                        if !roundtrip {
                            let chain: Vec<String> = chain.iter().map(|x| x.to_string()).collect();
                            lines.push(json!({"P": p, "eps": eps, "chain": chain}));
                        }
                    }
                }
            }
            (format!("P̄_D^({k})({n},{ell})×{{±1}}={total}"), total, ok)
        }
    };
    if roundtrip {
        match out.output {
            Output::Json => writeln!(
                w,
                "{}",
                json!({
                    "domain": label,
                    "elements": total,
                    "roundtrips_ok": ok,
                    "match": ok == total,
                    "summary": format!("{label} elements, {ok}/{total} round-trips ok"),
                })
            )?,
            Output::Csv => writeln!(w, "domain,elements,roundtrips_ok\n\"{label}\",{total},{ok}")?,
            Output::Table => writeln!(w, "{label} elements, {ok}/{total} round-trips ok")?,
        }
        return Ok(if ok == total { 0 } else { 1 });
    }
    for line in lines {
        writeln!(w, "{line}")?;
    }
    Ok(if ok == total { 0 } else { 1 })
}
