//! Per-word obstruction reports with an explicit derivation ledger, family
//! sweeps with twist-stability shortcuts, fixture verification, and a
//! persistent JSON result cache.

use crate::braid::{self, BraidWord, FamilyTemplate};
use crate::exactalg::CoefficientRing;
use crate::fdtc;
use crate::homfly::{self, WholeLinkVerdict, PRETZEL_2_55, PRETZEL_4_55};
use crate::khovanov::{
    self, certificate_from_file, certificate_to_file, verify_certificate,
    verify_certificate_reduced, CertificateFile, ChainElement, ComplexOpts, PsiOutcome,
};
use crate::skeinstab::{self, StabilityReport};
use crate::tangle::TangleDiagram;
use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

/// Cache namespace. Certificates depend on the differential sign rule, so
/// stored results are invalidated whenever the convention string changes.
pub const ENGINE_VERSION: &str = "transverse-0.1.0/ones-before-crossing";

// ---------------------------------------------------------------------------
// result cache

#[derive(Serialize, Deserialize, Debug, Clone)]
pub struct CacheEntry {
    pub key: String,
    pub value: serde_json::Value,
    pub created_unix: u64,
}

/// One JSON file per key under a directory; keys are hashed for filenames and
/// stored verbatim inside the entry to guard against collisions.
pub struct ResultCache {
    dir: PathBuf,
    write_lock: Mutex<()>,
}

impl ResultCache {
    pub fn open(dir: &Path) -> std::io::Result<Self> {
        std::fs::create_dir_all(dir)?;
        Ok(ResultCache { dir: dir.to_path_buf(), write_lock: Mutex::new(()) })
    }

    fn path_for(&self, key: &str) -> PathBuf {
        let mut h = Sha256::new();
        h.update(key.as_bytes());
        let digest = h.finalize();
        let mut name = String::with_capacity(64);
        for b in digest {
            name.push_str(&format!("{b:02x}"));
        }
        self.dir.join(format!("{name}.json"))
    }

    pub fn get(&self, key: &str) -> Option<CacheEntry> {
        let text = std::fs::read_to_string(self.path_for(key)).ok()?;
        let entry: CacheEntry = serde_json::from_str(&text).ok()?;
        (entry.key == key).then_some(entry)
    }

    pub fn put(&self, key: &str, value: serde_json::Value) {
        let created_unix = std::time::SystemTime::now()
            .duration_since(std::time::UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0);
        let entry = CacheEntry { key: key.into(), value, created_unix };
        let _guard = self.write_lock.lock().unwrap();
        if let Ok(text) = serde_json::to_string_pretty(&entry) {
            let _ = std::fs::write(self.path_for(key), text);
        }
    }
}

// ---------------------------------------------------------------------------
// cached vanishing verdicts

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
pub struct VerdictSummary {
    /// "zero" | "nonzero" | "undecided"
    pub verdict: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub certificate: Option<CertificateFile>,
}

fn summarize(w: &BraidWord, out: &PsiOutcome) -> VerdictSummary {
    match out {
        PsiOutcome::ZeroWithCertificate(phi) => VerdictSummary {
            verdict: "zero".into(),
            detail: None,
            certificate: Some(certificate_to_file(w, phi)),
        },
        PsiOutcome::NonzeroClass => {
            VerdictSummary { verdict: "nonzero".into(), detail: None, certificate: None }
        }
        PsiOutcome::Undecided(msg) => VerdictSummary {
            verdict: "undecided".into(),
            detail: Some(msg.clone()),
            certificate: None,
        },
    }
}

fn word_key(op: &str, w: &BraidWord, extra: &str) -> String {
    let letters: Vec<String> = w.letters.iter().map(|l| l.to_string()).collect();
    format!("{op}|{ENGINE_VERSION}|b{}|{}|{extra}", w.strands, letters.join(","))
}

fn cached_verdict(
    cache: Option<&ResultCache>,
    key: &str,
    w: &BraidWord,
    reduced_marked: Option<usize>,
) -> Option<VerdictSummary> {
    let entry = cache?.get(key)?;
    let summary: VerdictSummary = serde_json::from_value(entry.value).ok()?;
    match summary.verdict.as_str() {
        "nonzero" => Some(summary),
        "zero" => {
            let file = summary.certificate.as_ref()?;
            let (cert_word, mut phi) = certificate_from_file(file).ok()?;
            if cert_word.strands != w.strands || cert_word.letters != w.letters {
                return None;
            }
            // files store only state data; reduced classes sit one quantum
            // grading above the unreduced ones
            let ok = match reduced_marked {
                Some(marked) => {
                    phi.j += 1;
                    verify_certificate_reduced(w, marked, &phi)
                }
                None => verify_certificate(w, &phi),
            };
            ok.then_some(summary)
        }
        _ => None,
    }
}

fn store_verdict(cache: Option<&ResultCache>, key: &str, summary: &VerdictSummary) {
    if summary.verdict == "undecided" {
        return; // resource verdicts depend on caps, not on the word alone
    }
    if let (Some(c), Ok(v)) = (cache, serde_json::to_value(summary)) {
        c.put(key, v);
    }
}

/// psi verdict with cache lookup; certificates from the cache are re-verified
/// against the differential before reuse.
pub fn psi_summary(
    w: &BraidWord,
    ring: CoefficientRing,
    opts: &ComplexOpts,
    cache: Option<&ResultCache>,
) -> VerdictSummary {
    let key = word_key("psi", w, &ring.to_string());
    if let Some(hit) = cached_verdict(cache, &key, w, None) {
        return hit;
    }
    let summary = summarize(w, &khovanov::psi_vanishes(w, ring, opts));
    store_verdict(cache, &key, &summary);
    summary
}

/// Reduced psi' verdict (GF2) with the same cache discipline.
pub fn psi_prime_summary(
    w: &BraidWord,
    opts: &ComplexOpts,
    cache: Option<&ResultCache>,
) -> VerdictSummary {
    let key = word_key("psiprime", w, &format!("marked{}", opts.marked));
    if let Some(hit) = cached_verdict(cache, &key, w, Some(opts.marked)) {
        return hit;
    }
    let summary = summarize(w, &khovanov::psi_prime_vanishes(w, opts));
    store_verdict(cache, &key, &summary);
    summary
}

// ---------------------------------------------------------------------------
// obstruction ledger

#[derive(Serialize, Debug, Clone, Copy)]
pub struct LedgerRule {
    pub id: &'static str,
    pub premises: &'static str,
    pub conclusion: &'static str,
    pub citation: &'static str,
}

pub const LEDGER_RULES: [LedgerRule; 5] = [
    LedgerRule {
        id: "R1",
        premises: "psi or psi' is a nonzero class",
        conclusion: "right-veering",
        citation: "a braid that is not right-veering has vanishing transverse class",
    },
    LedgerRule {
        id: "R2",
        premises: "psi or psi' vanishes",
        conclusion: "not quasipositive",
        citation: "quasipositive braids have nonvanishing transverse class",
    },
    LedgerRule {
        id: "R3",
        premises: "writhe < 0",
        conclusion: "not quasipositive",
        citation: "products of conjugated positive letters have nonnegative writhe",
    },
    LedgerRule {
        id: "R4",
        premises: "fractional Dehn twist coefficient >= 1",
        conclusion: "right-veering",
        citation: "twist coefficient at least one forces right-veering",
    },
    LedgerRule {
        id: "R5",
        premises: "whole-link self-linking obstruction",
        conclusion: "no quasipositive braid representative",
        citation: "the class dies for every representative once the Kh^0 support \
                   sits above the self-linking bound",
    },
];

#[derive(Serialize, Debug, Clone)]
pub struct LedgerFact {
    pub rule: &'static str,
    pub conclusion: &'static str,
    /// each premise is a literal entry of the report's `facts` list
    pub premises: Vec<String>,
    pub citation: &'static str,
}

#[derive(Serialize, Debug, Clone)]
pub struct TransverseReport {
    pub strands: usize,
    pub word: Vec<i32>,
    pub writhe: i64,
    pub self_linking: i64,
    /// keyed by ring tag: "gf2" | "q" | "z"
    pub psi: BTreeMap<String, VerdictSummary>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub psi_prime: Option<VerdictSummary>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub homfly_a_degree: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub msl_upper_bound: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub whole_link: Option<WholeLinkVerdict>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fdtc_lower: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fdtc_upper: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fdtc_pattern: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dehornoy_floor: Option<i64>,
    /// established base facts; ledger premises point into this list
    pub facts: Vec<String>,
    pub ledger: Vec<LedgerFact>,
    /// "no" or "?": the engines only ever obstruct quasipositivity
    pub quasipositive: String,
    /// "yes" or "?": the engines only ever certify right-veering
    pub right_veering: String,
}

#[derive(Clone, Debug)]
pub struct ReportOptions {
    pub rings: Vec<CoefficientRing>,
    pub psi_prime: bool,
    pub homfly: bool,
    pub fdtc: bool,
    pub complex: ComplexOpts,
    pub cache_dir: Option<PathBuf>,
}

impl Default for ReportOptions {
    fn default() -> Self {
        ReportOptions {
            rings: vec![CoefficientRing::Gf2, CoefficientRing::Integer],
            psi_prime: true,
            homfly: false,
            fdtc: true,
            complex: ComplexOpts::default(),
            cache_dir: None,
        }
    }
}

fn rule(id: &str) -> LedgerRule {
    *LEDGER_RULES.iter().find(|r| r.id == id).unwrap()
}

/// Runs the requested engines and fires every ledger rule whose premises are
/// established. Unknown never implies a conclusion: the quasipositive and
/// right-veering columns stay "?" unless some rule concluded otherwise.
pub fn transverse_report(w: &BraidWord, options: &ReportOptions) -> TransverseReport {
    let cache = options.cache_dir.as_deref().and_then(|d| ResultCache::open(d).ok());
    let cache = cache.as_ref();

    let writhe = braid::writhe(w);
    let mut facts: Vec<String> = Vec::new();
    let mut ledger: Vec<LedgerFact> = Vec::new();

    let mut psi = BTreeMap::new();
    for &ring in &options.rings {
        let s = psi_summary(w, ring, &options.complex, cache);
        match s.verdict.as_str() {
            "zero" => facts.push(format!("psi[{ring}] = 0")),
            "nonzero" => facts.push(format!("psi[{ring}] is a nonzero class")),
            _ => {}
        }
        psi.insert(ring.to_string(), s);
    }
    let psi_prime = options.psi_prime.then(|| {
        let s = psi_prime_summary(w, &options.complex, cache);
        match s.verdict.as_str() {
            "zero" => facts.push("psi' = 0".into()),
            "nonzero" => facts.push("psi' is a nonzero class".into()),
            _ => {}
        }
        s
    });

    if writhe < 0 {
        facts.push(format!("writhe = {writhe} < 0"));
    }

    let (mut fdtc_lower, mut fdtc_upper, mut fdtc_pattern, mut floor) = (None, None, None, None);
    if options.fdtc {
        let bounds = fdtc::fdtc_letter_bounds(w);
        let (mut lo, mut hi) = (bounds.lower, bounds.upper);
        if let Some(n) = fdtc::fdtc_pattern(w) {
            let exact = BigRational::from(BigInt::from(n));
            lo = exact.clone();
            hi = exact;
            fdtc_pattern = Some(n);
            if n >= 1 {
                facts.push(format!("fdtc = {n} >= 1 (full-twist pattern)"));
            }
        }
        fdtc_lower = Some(lo.to_string());
        fdtc_upper = Some(hi.to_string());
        floor = fdtc::dehornoy_floor(w).ok();
    }

    let (mut deg_a, mut msl, mut whole_link) = (None, None, None);
    if options.homfly {
        if let Ok(p) = homfly::homfly(w) {
            deg_a = p.a_degree().ok();
            msl = homfly::msl_upper_bound(&p).ok();
        }
        if let Ok(v) = homfly::whole_link_psi_obstruction(w) {
            if let WholeLinkVerdict::AllRepresentativesVanish { support, bound } = &v {
                facts.push(format!(
                    "Kh^0 support {support:?} sits above the self-linking bound {bound}"
                ));
            }
            whole_link = Some(v);
        }
    }

    let find = |needle: &str| -> Vec<String> {
        facts.iter().filter(|f| f.contains(needle)).cloned().collect()
    };
    let fire = |ledger: &mut Vec<LedgerFact>, id: &str, premises: Vec<String>| {
        if !premises.is_empty() {
            let r = rule(id);
            ledger.push(LedgerFact {
                rule: r.id,
                conclusion: r.conclusion,
                premises,
                citation: r.citation,
            });
        }
    };
    fire(&mut ledger, "R1", find("is a nonzero class"));
    fire(&mut ledger, "R2", find("= 0"));
    fire(&mut ledger, "R3", find("writhe ="));
    fire(&mut ledger, "R4", find("(full-twist pattern)"));
    fire(&mut ledger, "R5", find("sits above the self-linking bound"));

    let concluded = |c: &str| ledger.iter().any(|f| f.conclusion.contains(c));
    let quasipositive = if concluded("not quasipositive") || concluded("no quasipositive") {
        "no".into()
    } else {
        "?".into()
    };
    let right_veering = if concluded("right-veering") { "yes".into() } else { "?".into() };

    TransverseReport {
        strands: w.strands,
        word: w.letters.clone(),
        writhe,
        self_linking: braid::self_linking(w),
        psi,
        psi_prime,
        homfly_a_degree: deg_a,
        msl_upper_bound: msl,
        whole_link,
        fdtc_lower,
        fdtc_upper,
        fdtc_pattern,
        dehornoy_floor: floor,
        facts,
        ledger,
        quasipositive,
        right_veering,
    }
}

// ---------------------------------------------------------------------------
// family sweeps

#[derive(Clone, Copy, Debug)]
pub enum SweepEngine {
    Psi(CoefficientRing),
    PsiPrime,
}

impl SweepEngine {
    fn label(&self) -> String {
        match self {
            SweepEngine::Psi(r) => format!("psi[{r}]"),
            SweepEngine::PsiPrime => "psi'".into(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct SweepOptions {
    /// skip direct computation beyond the stability threshold plus margin
    pub use_stability: bool,
    /// extra full-twist copies computed past the threshold as a spot check
    pub margin: i64,
    pub workers: usize,
    pub complex: ComplexOpts,
    pub cache_dir: Option<PathBuf>,
}

impl Default for SweepOptions {
    fn default() -> Self {
        SweepOptions {
            use_stability: false,
            margin: 1,
            workers: 1,
            complex: ComplexOpts::default(),
            cache_dir: None,
        }
    }
}

#[derive(Serialize, Debug, Clone)]
pub struct FamilyCell {
    pub k: i64,
    pub verdict: String,
    /// "computed" | "stable"
    pub source: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

#[derive(Serialize, Debug, Clone)]
pub struct FamilySweep {
    pub engine: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub stability: Option<StabilityReport>,
    /// verdicts for k beyond this repeat earlier ones in the same class
    #[serde(skip_serializing_if = "Option::is_none")]
    pub stable_beyond: Option<i64>,
    pub cells: Vec<FamilyCell>,
}

/// Insert words that tile a sub-full twist: returns (a, index, sign, inserts
/// per twist copy).
fn detect_twist(strands: usize, insert: &[i32]) -> Option<(usize, usize, i8, usize)> {
    let first = *insert.first()?;
    let sign = first.signum();
    if insert.iter().any(|&l| l.signum() != sign) {
        return None;
    }
    let lo = insert.iter().map(|l| l.unsigned_abs()).min()? as usize;
    let hi = insert.iter().map(|l| l.unsigned_abs()).max()? as usize;
    let a = hi - lo + 2;
    let copy = braid::sub_full_twist(strands, a, lo, sign).ok()?.letters;
    if copy.len() % insert.len() != 0 {
        return None;
    }
    let p = copy.len() / insert.len();
    let tiled: Vec<i32> = insert.iter().cycle().take(copy.len()).copied().collect();
    (tiled == copy).then_some((a, lo, sign as i8, p))
}

/// Per-parameter verdicts for w(k) = base . insert^k. When the insert tiles a
/// sub-full twist and `use_stability` is set, cells past the threshold (plus
/// margin, in whole twist copies) reuse the verdict of the last computed cell
/// in the same residue class instead of recomputing.
pub fn family_sweep(t: &FamilyTemplate, engine: SweepEngine, opts: &SweepOptions) -> FamilySweep {
    let cache = opts.cache_dir.as_deref().and_then(|d| ResultCache::open(d).ok());
    let cache = cache.as_ref();
    let ks: Vec<i64> = (t.k_min..=t.k_max).collect();

    let twist = detect_twist(t.base.strands, &t.insert.letters);
    let stability = twist.and_then(|(a, i, sign, _)| {
        skeinstab::stability_threshold(&t.base, a, i, sign).ok()
    });

    // a cell is computed directly unless stability lets it coast
    let mut computed: Vec<bool> = vec![true; ks.len()];
    let mut stable_beyond = None;
    if let (true, Some((_, _, _, p)), Some(st)) = (opts.use_stability, twist, &stability) {
        let p = p as i64;
        let cutoff = |k: i64| k % p + p * (st.threshold + opts.margin);
        for (idx, &k) in ks.iter().enumerate() {
            computed[idx] = k <= cutoff(k);
        }
        // every residue class needs at least one computed reference cell
        for r in 0..p {
            let class: Vec<usize> =
                (0..ks.len()).filter(|&idx| ks[idx] % p == r).collect();
            if !class.is_empty() && class.iter().all(|&idx| !computed[idx]) {
                computed[class[0]] = true;
            }
        }
        stable_beyond = Some(p * (st.threshold + opts.margin) + p - 1);
    }

    let run = |k: i64| -> VerdictSummary {
        let w = t.instantiate(k);
        match engine {
            SweepEngine::Psi(ring) => psi_summary(&w, ring, &opts.complex, cache),
            SweepEngine::PsiPrime => psi_prime_summary(&w, &opts.complex, cache),
        }
    };

    let jobs: Vec<usize> = (0..ks.len()).filter(|&idx| computed[idx]).collect();
    let results: Vec<Option<VerdictSummary>> = if opts.workers <= 1 {
        let mut out = vec![None; ks.len()];
        for &idx in &jobs {
            out[idx] = Some(run(ks[idx]));
        }
        out
    } else {
        let out = Mutex::new(vec![None; ks.len()]);
        let next = AtomicUsize::new(0);
        std::thread::scope(|scope| {
            for _ in 0..opts.workers.min(jobs.len()) {
                scope.spawn(|| loop {
                    let j = next.fetch_add(1, Ordering::Relaxed);
                    if j >= jobs.len() {
                        break;
                    }
                    let idx = jobs[j];
                    let v = run(ks[idx]);
                    out.lock().unwrap()[idx] = Some(v);
                });
            }
        });
        out.into_inner().unwrap()
    };

    let p = twist.map(|(_, _, _, p)| p as i64).unwrap_or(1);
    let mut last_in_class: BTreeMap<i64, (i64, String)> = BTreeMap::new();
    let mut cells = Vec::with_capacity(ks.len());
    for (idx, &k) in ks.iter().enumerate() {
        match &results[idx] {
            Some(v) => {
                last_in_class.insert(k % p, (k, v.verdict.clone()));
                cells.push(FamilyCell {
                    k,
                    verdict: v.verdict.clone(),
                    source: "computed".into(),
                    detail: v.detail.clone(),
                });
            }
            None => {
                let (ref_k, verdict) = last_in_class[&(k % p)].clone();
                cells.push(FamilyCell {
                    k,
                    verdict,
                    source: "stable".into(),
                    detail: Some(format!(
                        "stable by the twist-stability theorem; matches k = {ref_k}"
                    )),
                });
            }
        }
    }

    FamilySweep { engine: engine.label(), stability, stable_beyond, cells }
}

// ---------------------------------------------------------------------------
// fixtures

#[derive(Serialize, Debug, Clone)]
pub struct FixtureResult {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

/// Chain at (-1, sl) with one all-minus term per dotted-position set: the
/// state has its 1-resolution exactly at the dotted letters.
fn dotted_chain(w: &BraidWord, terms: &[(i64, &[usize])]) -> ChainElement {
    let sl = braid::self_linking(w);
    let mut x = ChainElement::zero(CoefficientRing::Integer, -1, sl);
    for (c, dots) in terms {
        let mut s = 0u64;
        for &pos in *dots {
            s |= 1u64 << pos;
        }
        x.terms.insert((s, 0), BigRational::from(BigInt::from(*c)));
    }
    x
}

/// Runs every shipped fixture assertion: hand-written vanishing certificates,
/// the pretzel polynomial/support predictions, and the negative-twist family
/// long-exact-sequence windows.
pub fn verify_paper_fixtures() -> Vec<FixtureResult> {
    let mut out = Vec::new();
    let mut check = |name: &str, pass: bool, detail: String| {
        out.push(FixtureResult { name: name.into(), pass, detail });
    };

    let certs: [(&str, usize, Vec<i32>, Vec<(i64, &[usize])>); 3] = [
        (
            "certificate-4braid",
            4,
            vec![1, 1, -2, 3, -2, -1, 2, 3, 3, 2, 3],
            vec![(1, &[2, 4]), (-1, &[1, 2]), (-1, &[0, 2])],
        ),
        (
            "certificate-5braid",
            5,
            vec![1, -2, 3, -4, -2, -1, 2, 2, 3, 4, 4, 2, 3],
            vec![(1, &[1, 3, 4]), (1, &[0, 1, 3])],
        ),
        (
            "certificate-6braid",
            6,
            vec![4, 1, 2, 4, -5, -4, 3, 5, -1, 2, 2, 3],
            vec![(1, &[5, 8]), (1, &[7, 8])],
        ),
    ];
    for (name, strands, letters, terms) in certs {
        let w = BraidWord::new(strands, letters).unwrap();
        let phi = dotted_chain(&w, &terms);
        let pass = verify_certificate(&w, &phi);
        check(name, pass, format!("d(phi) = +-psi for the {}-term chain", terms.len()));
    }

    {
        let w = braid::parse_braid(PRETZEL_2_55, 3).unwrap();
        check(
            "pretzel-2-5-5-knot",
            w.closure_components() == 1,
            format!("{} closure component(s)", w.closure_components()),
        );
        let ((s1, s2), deg) = homfly::pretzel_support_formula(2, 5).unwrap();
        match homfly::homfly(&w).and_then(|p| p.a_degree()) {
            Ok(d) => check("pretzel-2-5-5-degree", d == deg, format!("deg_a = {d}, want {deg}")),
            Err(e) => check("pretzel-2-5-5-degree", false, e.to_string()),
        }
        match homfly::whole_link_psi_obstruction(&w) {
            Ok(WholeLinkVerdict::AllRepresentativesVanish { support, bound }) => {
                let mut want = vec![s1, s2];
                want.sort();
                check(
                    "pretzel-2-5-5-obstruction",
                    support == want && bound == -deg - 1,
                    format!("Kh^0 support {support:?} above bound {bound}"),
                );
            }
            other => check("pretzel-2-5-5-obstruction", false, format!("{other:?}")),
        }
    }

    {
        let w = braid::parse_braid(PRETZEL_4_55, 5).unwrap();
        let (_, deg) = homfly::pretzel_support_formula(4, 5).unwrap();
        let knot = w.closure_components() == 1;
        match homfly::homfly(&w).and_then(|p| p.a_degree()) {
            Ok(d) => check(
                "pretzel-4-5-5-degree",
                knot && d == deg,
                format!("knot: {knot}, deg_a = {d}, want {deg}"),
            ),
            Err(e) => check("pretzel-4-5-5-degree", false, e.to_string()),
        }
    }

    for (k, want_iso) in [(9i64, false), (12, true)] {
        let w = braid::parse_braid(&format!("FT ( -3 )^{k}"), 4).unwrap();
        let d = TangleDiagram::from_braid(&w);
        let name = format!("twist-window-k{k}");
        match skeinstab::les_window_is_iso(&d, d.crossings() - 1, 0, 9 - k, &ComplexOpts::default())
        {
            Ok(chk) => check(&name, chk.iso == want_iso, chk.reason),
            Err(e) => check(&name, false, e.to_string()),
        }
    }

    out
}
