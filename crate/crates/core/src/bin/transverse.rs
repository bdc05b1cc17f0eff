//! Command-line front end: vanishing verdicts, HOMFLY-PT bounds, FDTC
//! bounds, stability thresholds, combined reports, family sweeps, and the
//! shipped fixture suite. JSON is the primary output format; the plain
//! renderings are thin views over it.
//!
//! Exit codes: 0 success, 2 undecided due to resource caps, 1 error.

use clap::{Args, Parser, Subcommand, ValueEnum};
use std::path::PathBuf;
use std::process::ExitCode;
use transverse::braid::{self, BraidWord, FamilyTemplate};
use transverse::exactalg::CoefficientRing;
use transverse::fdtc;
use transverse::homfly;
use transverse::khovanov::{self, ComplexOpts};
use transverse::report::{
    self, ReportOptions, ResultCache, SweepEngine, SweepOptions, VerdictSummary,
};
use transverse::skeinstab;
use transverse::tangle::TangleDiagram;

#[derive(Parser)]
#[command(name = "transverse", version, about = "Exact transverse-invariant engine for braid closures")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum RingArg {
    Gf2,
    Q,
    Z,
}

impl From<RingArg> for CoefficientRing {
    fn from(r: RingArg) -> Self {
        match r {
            RingArg::Gf2 => CoefficientRing::Gf2,
            RingArg::Q => CoefficientRing::Rational,
            RingArg::Z => CoefficientRing::Integer,
        }
    }
}

#[derive(Args)]
struct WordArgs {
    /// number of braid strands
    #[arg(long)]
    strands: usize,
    /// braid word: signed generator indices, `FT`, and `( ... )^m` groups
    #[arg(long, allow_hyphen_values = true)]
    word: String,
}

impl WordArgs {
    fn parse(&self) -> Result<BraidWord, String> {
        braid::parse_braid(&self.word, self.strands).map_err(|e| e.to_string())
    }
}

#[derive(Args)]
struct EngineArgs {
    /// cap on the dimension of any graded chain piece
    #[arg(long)]
    max_dim: Option<u64>,
    /// verdict cache directory (falls back to TRANSVERSE_CACHE_DIR)
    #[arg(long)]
    cache_dir: Option<PathBuf>,
    /// emit machine-readable JSON instead of plain text
    #[arg(long)]
    json: bool,
}

impl EngineArgs {
    fn complex_opts(&self, marked: usize) -> ComplexOpts {
        let mut o = ComplexOpts { marked, ..ComplexOpts::default() };
        if let Some(m) = self.max_dim {
            o.max_dim = m;
        }
        o
    }

    fn cache(&self) -> Option<ResultCache> {
        let dir = self
            .cache_dir
            .clone()
            .or_else(|| std::env::var_os("TRANSVERSE_CACHE_DIR").map(PathBuf::from))?;
        ResultCache::open(&dir).ok()
    }
}

#[derive(Subcommand)]
enum Command {
    /// Vanishing verdict for the transverse class psi
    Psi {
        #[command(flatten)]
        word: WordArgs,
        #[arg(long, value_enum, default_value = "z")]
        ring: RingArg,
        #[command(flatten)]
        engine: EngineArgs,
    },
    /// Vanishing verdict for the reduced class psi' (GF2)
    Psiprime {
        #[command(flatten)]
        word: WordArgs,
        /// marked strand position
        #[arg(long, default_value_t = 0)]
        marked: usize,
        #[command(flatten)]
        engine: EngineArgs,
    },
    /// HOMFLY-PT polynomial, a-degree, and self-linking bound
    Homfly {
        #[command(flatten)]
        word: WordArgs,
        /// also run the whole-link vanishing obstruction
        #[arg(long)]
        whole_link: bool,
        #[arg(long)]
        json: bool,
    },
    /// Dehornoy floor and fractional Dehn twist coefficient bounds
    Fdtc {
        #[command(flatten)]
        word: WordArgs,
        #[arg(long)]
        json: bool,
    },
    /// Sub-full-twist stability threshold for a braid family
    Stability {
        #[command(flatten)]
        word: WordArgs,
        /// twisted strand count
        #[arg(long)]
        twist_strands: usize,
        /// leftmost twisted strand (1-based)
        #[arg(long)]
        index: usize,
        /// twist direction: 1 or -1
        #[arg(long, default_value_t = -1, allow_hyphen_values = true)]
        sign: i8,
        #[arg(long)]
        json: bool,
    },
    /// Combined obstruction report with the derivation ledger
    Report {
        #[command(flatten)]
        word: WordArgs,
        /// psi coefficient rings (repeatable)
        #[arg(long, value_enum, default_values_t = [RingArg::Gf2, RingArg::Z])]
        ring: Vec<RingArg>,
        /// include the HOMFLY-PT bound and whole-link obstruction
        #[arg(long)]
        homfly: bool,
        /// skip the FDTC engines
        #[arg(long)]
        no_fdtc: bool,
        /// skip the reduced class
        #[arg(long)]
        no_psi_prime: bool,
        #[command(flatten)]
        engine: EngineArgs,
    },
    /// Per-parameter verdicts for the family base . insert^k
    Family {
        /// number of braid strands
        #[arg(long)]
        strands: usize,
        /// base word
        #[arg(long, allow_hyphen_values = true)]
        base: String,
        /// inserted word, repeated k times
        #[arg(long, allow_hyphen_values = true)]
        insert: String,
        #[arg(long)]
        k_min: i64,
        #[arg(long)]
        k_max: i64,
        /// engine: psi or psiprime
        #[arg(long, default_value = "psiprime")]
        sweep: String,
        #[arg(long, value_enum, default_value = "gf2")]
        ring: RingArg,
        /// reuse verdicts past the stability threshold instead of recomputing
        #[arg(long)]
        use_stability: bool,
        /// extra twist copies computed past the threshold
        #[arg(long, default_value_t = 1)]
        margin: i64,
        #[arg(long, default_value_t = 1)]
        workers: usize,
        #[command(flatten)]
        engine: EngineArgs,
    },
    /// Run the shipped fixture assertions
    Fixtures {
        #[arg(long)]
        json: bool,
    },
    /// Khovanov homology table of the braid closure
    Homology {
        #[command(flatten)]
        word: WordArgs,
        #[arg(long, value_enum, default_value = "z")]
        ring: RingArg,
        #[arg(long)]
        reduced: bool,
        #[arg(long, default_value_t = 0)]
        marked: usize,
        /// component orientation flags, comma-separated 1/-1
        #[arg(long, allow_hyphen_values = true)]
        orient: Option<String>,
        #[arg(long)]
        json: bool,
    },
}

fn print_verdict(label: &str, s: &VerdictSummary, json: bool) -> ExitCode {
    if json {
        println!("{}", serde_json::to_string_pretty(s).unwrap());
    } else {
        match s.verdict.as_str() {
            "zero" => println!("{label} = 0 (certificate attached in JSON output)"),
            "nonzero" => println!("{label} is a nonzero class"),
            _ => println!("{label}: undecided ({})", s.detail.as_deref().unwrap_or("")),
        }
    }
    if s.verdict == "undecided" {
        ExitCode::from(2)
    } else {
        ExitCode::SUCCESS
    }
}

fn run() -> Result<ExitCode, String> {
    let cli = Cli::parse();
    match cli.command {
        Command::Psi { word, ring, engine } => {
            let w = word.parse()?;
            let opts = engine.complex_opts(0);
            let cache = engine.cache();
            let s = report::psi_summary(&w, ring.into(), &opts, cache.as_ref());
            let ring: CoefficientRing = ring.into();
            Ok(print_verdict(&format!("psi[{ring}]"), &s, engine.json))
        }
        Command::Psiprime { word, marked, engine } => {
            let w = word.parse()?;
            let opts = engine.complex_opts(marked);
            let cache = engine.cache();
            let s = report::psi_prime_summary(&w, &opts, cache.as_ref());
            Ok(print_verdict("psi'", &s, engine.json))
        }
        Command::Homfly { word, whole_link, json } => {
            let w = word.parse()?;
            let p = homfly::homfly(&w).map_err(|e| e.to_string())?;
            let deg = p.a_degree().map_err(|e| e.to_string())?;
            let bound = homfly::msl_upper_bound(&p).map_err(|e| e.to_string())?;
            let verdict = if whole_link {
                Some(homfly::whole_link_psi_obstruction(&w).map_err(|e| e.to_string())?)
            } else {
                None
            };
            if json {
                let out = serde_json::json!({
                    "terms": p.to_terms(),
                    "a_degree": deg,
                    "msl_upper_bound": bound,
                    "whole_link": verdict,
                });
                println!("{}", serde_json::to_string_pretty(&out).unwrap());
            } else {
                println!("P = {p}");
                println!("deg_a = {deg}, msl <= {bound}");
                if let Some(v) = verdict {
                    println!("whole-link obstruction: {v:?}");
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Fdtc { word, json } => {
            let w = word.parse()?;
            let bounds = fdtc::fdtc_letter_bounds(&w);
            let pattern = fdtc::fdtc_pattern(&w);
            let floor = fdtc::dehornoy_floor(&w).ok();
            if json {
                let out = serde_json::json!({
                    "lower": bounds.lower.to_string(),
                    "upper": bounds.upper.to_string(),
                    "provenance": bounds.provenance,
                    "pattern": pattern,
                    "dehornoy_floor": floor,
                });
                println!("{}", serde_json::to_string_pretty(&out).unwrap());
            } else {
                println!("letter bounds: {} <= fdtc <= {}", bounds.lower, bounds.upper);
                match pattern {
                    Some(n) => println!("full-twist pattern: fdtc = {n}"),
                    None => println!("full-twist pattern: not applicable"),
                }
                match floor {
                    Some(f) => println!("Dehornoy floor: {f}"),
                    None => println!("Dehornoy floor: not computed"),
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Stability { word, twist_strands, index, sign, json } => {
            let w = word.parse()?;
            let r = skeinstab::stability_threshold(&w, twist_strands, index, sign)
                .map_err(|e| e.to_string())?;
            if json {
                println!("{}", serde_json::to_string_pretty(&r).unwrap());
            } else {
                println!(
                    "threshold N = {}: verdicts are independent of the twist power beyond N",
                    r.threshold
                );
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Report { word, ring, homfly, no_fdtc, no_psi_prime, engine } => {
            let w = word.parse()?;
            let options = ReportOptions {
                rings: ring.iter().map(|&r| r.into()).collect(),
                psi_prime: !no_psi_prime,
                homfly,
                fdtc: !no_fdtc,
                complex: engine.complex_opts(0),
                cache_dir: engine
                    .cache_dir
                    .clone()
                    .or_else(|| std::env::var_os("TRANSVERSE_CACHE_DIR").map(PathBuf::from)),
            };
            let r = report::transverse_report(&w, &options);
            if engine.json {
                println!("{}", serde_json::to_string_pretty(&r).unwrap());
            } else {
                println!("word: {} (b = {})", w, w.strands);
                println!("writhe = {}, sl = {}", r.writhe, r.self_linking);
                for (ring, s) in &r.psi {
                    println!("psi[{ring}]: {}", s.verdict);
                }
                if let Some(s) = &r.psi_prime {
                    println!("psi': {}", s.verdict);
                }
                println!("quasipositive: {}", r.quasipositive);
                println!("right-veering: {}", r.right_veering);
                for f in &r.ledger {
                    println!("  [{}] {} <= {}", f.rule, f.conclusion, f.premises.join("; "));
                }
            }
            let undecided = r
                .psi
                .values()
                .chain(r.psi_prime.as_ref())
                .any(|s| s.verdict == "undecided");
            Ok(if undecided { ExitCode::from(2) } else { ExitCode::SUCCESS })
        }
        Command::Family {
            strands,
            base,
            insert,
            k_min,
            k_max,
            sweep,
            ring,
            use_stability,
            margin,
            workers,
            engine,
        } => {
            let base = braid::parse_braid(&base, strands).map_err(|e| e.to_string())?;
            let insert = braid::parse_braid(&insert, strands).map_err(|e| e.to_string())?;
            let t = FamilyTemplate::new(base, insert, k_min, k_max).map_err(|e| e.to_string())?;
            let eng = match sweep.as_str() {
                "psi" => SweepEngine::Psi(ring.into()),
                "psiprime" => SweepEngine::PsiPrime,
                other => return Err(format!("unknown sweep engine `{other}`")),
            };
            let opts = SweepOptions {
                use_stability,
                margin,
                workers,
                complex: engine.complex_opts(0),
                cache_dir: engine
                    .cache_dir
                    .clone()
                    .or_else(|| std::env::var_os("TRANSVERSE_CACHE_DIR").map(PathBuf::from)),
            };
            let result = report::family_sweep(&t, eng, &opts);
            if engine.json {
                println!("{}", serde_json::to_string_pretty(&result).unwrap());
            } else {
                println!("engine: {}", result.engine);
                if let Some(n) = result.stable_beyond {
                    println!("stable beyond k = {n}");
                }
                for c in &result.cells {
                    println!("k = {:>3}: {:<9} ({})", c.k, c.verdict, c.source);
                }
            }
            let undecided = result.cells.iter().any(|c| c.verdict == "undecided");
            Ok(if undecided { ExitCode::from(2) } else { ExitCode::SUCCESS })
        }
        Command::Fixtures { json } => {
            let results = report::verify_paper_fixtures();
            if json {
                println!("{}", serde_json::to_string_pretty(&results).unwrap());
            } else {
                for r in &results {
                    println!("{} {}: {}", if r.pass { "pass" } else { "FAIL" }, r.name, r.detail);
                }
            }
            Ok(if results.iter().all(|r| r.pass) {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            })
        }
        Command::Homology { word, ring, reduced, marked, orient, json } => {
            let w = word.parse()?;
            let mut d = TangleDiagram::from_braid(&w);
            if let Some(text) = orient {
                let flags: Result<Vec<i8>, _> =
                    text.split(',').map(|t| t.trim().parse::<i8>()).collect();
                let flags = flags.map_err(|e| format!("bad orientation flags: {e}"))?;
                d.assign_orientations(flags).map_err(|e| e.to_string())?;
            }
            let table = khovanov::homology_table(&d, ring.into(), reduced, marked, None);
            if json {
                let rows: Vec<serde_json::Value> = table
                    .iter()
                    .map(|((i, j), e)| {
                        serde_json::json!({"i": i, "j": j, "rank": e.rank, "torsion": e.torsion})
                    })
                    .collect();
                println!("{}", serde_json::to_string_pretty(&rows).unwrap());
            } else {
                for ((i, j), e) in &table {
                    let tor = if e.torsion.is_empty() {
                        String::new()
                    } else {
                        format!("  torsion {}", e.torsion.join(","))
                    };
                    println!("({i:>3},{j:>4})  rank {}{tor}", e.rank);
                }
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::FAILURE
        }
    }
}
