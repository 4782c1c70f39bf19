//! Coefficient files and the LMFDB client.
//!
//! A coefficient file is a header of `key: value` lines followed by a
//! `coefficients:` marker and one `n value` pair per line, n = 1, 2, 3, ...
//! Lines starting with `#` are comments.
//!
//! ```text
//! label: 11.2.a.a
//! kind: holomorphic
//! level: 11
//! weight: 2
//! newform: true
//! normalization: arithmetic
//! atkin_lehner: 11:-1
//! coefficients:
//! 1 1
//! 2 -2
//! ```
//!
//! `normalization: arithmetic` stores a(n) = lambda(n) n^((k-1)/2);
//! `normalization: analytic` stores lambda(n) directly. Maass forms use
//! `kind: maass` and `spectral: <t>` and are always analytic; an optional
//! `reflection: +-1` records their parity.

use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Mutex;
use std::time::{Duration, Instant};

use serde_json::Value;

use super::{CuspForm, FormError, FormKind};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Normalization {
    Arithmetic,
    Analytic,
}

/// Where coefficients come from.
#[derive(Debug, Clone, PartialEq)]
pub enum CoefficientSource {
    /// A single coefficient file.
    File(PathBuf),
    /// A directory holding `<label>.txt` coefficient files.
    Directory(PathBuf),
    /// The LMFDB API, with responses cached under `cache_dir`.
    Lmfdb {
        base_url: String,
        cache_dir: PathBuf,
    },
}

impl CoefficientSource {
    /// LMFDB source configured from RANKINLAB_LMFDB_URL and RANKINLAB_CACHE.
    pub fn lmfdb_default() -> Self {
        CoefficientSource::Lmfdb {
            base_url: lmfdb_base_url(),
            cache_dir: default_cache_dir(),
        }
    }
}

pub fn lmfdb_base_url() -> String {
    std::env::var("RANKINLAB_LMFDB_URL").unwrap_or_else(|_| "https://www.lmfdb.org".to_string())
}

pub fn default_cache_dir() -> PathBuf {
    if let Ok(dir) = std::env::var("RANKINLAB_CACHE") {
        return PathBuf::from(dir);
    }
    if let Ok(home) = std::env::var("HOME") {
        return Path::new(&home).join(".cache").join("rankinlab");
    }
    PathBuf::from(".rankinlab-cache")
}

fn malformed(context: &str, detail: impl Into<String>) -> FormError {
    FormError::MalformedData {
        context: context.to_string(),
        detail: detail.into(),
    }
}

fn normalize(kind: FormKind, norm: Normalization, raw: Vec<f64>) -> Vec<f64> {
    match (kind, norm) {
        (FormKind::Holomorphic { weight }, Normalization::Arithmetic) => {
            let e = (weight as f64 - 1.0) / 2.0;
            raw.into_iter()
                .enumerate()
                .map(|(i, a)| a / ((i + 1) as f64).powf(e))
                .collect()
        }
        _ => raw,
    }
}

fn parse_atkin_lehner(s: &str, context: &str) -> Result<BTreeMap<u64, i8>, FormError> {
    let mut out = BTreeMap::new();
    for item in s.split([',', ' ']).filter(|t| !t.is_empty()) {
        let (p, w) = item
            .split_once(':')
            .ok_or_else(|| malformed(context, format!("atkin_lehner entry '{item}' is not p:w")))?;
        let p: u64 = p
            .trim()
            .parse()
            .map_err(|_| malformed(context, format!("bad prime '{p}'")))?;
        let w: i8 = w
            .trim()
            .parse()
            .map_err(|_| malformed(context, format!("bad sign '{w}'")))?;
        if w != 1 && w != -1 {
            return Err(malformed(
                context,
                format!("Atkin-Lehner sign must be +-1, got {w}"),
            ));
        }
        out.insert(p, w);
    }
    Ok(out)
}

/// Parses a coefficient file body (see the module docs).
pub fn parse_coefficient_file(text: &str, context: &str) -> Result<CuspForm, FormError> {
    let mut header: BTreeMap<String, String> = BTreeMap::new();
    let mut raw = Vec::new();
    let mut in_data = false;
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let ctx = format!("{context}:{}", lineno + 1);
        if !in_data {
            if line == "coefficients:" {
                in_data = true;
                continue;
            }
            let (k, v) = line
                .split_once(':')
                .ok_or_else(|| malformed(&ctx, format!("expected 'key: value', got '{line}'")))?;
            header.insert(k.trim().to_lowercase(), v.trim().to_string());
        } else {
            let mut it = line.split_whitespace();
            let (n, v) = match (it.next(), it.next(), it.next()) {
                (Some(n), Some(v), None) => (n, v),
                _ => return Err(malformed(&ctx, format!("expected 'n value', got '{line}'"))),
            };
            let n: u64 = n
                .parse()
                .map_err(|_| malformed(&ctx, format!("bad index '{n}'")))?;
            let v: f64 = v
                .parse()
                .map_err(|_| malformed(&ctx, format!("bad value '{v}'")))?;
            if n != raw.len() as u64 + 1 {
                return Err(malformed(&ctx, format!("index {n} out of sequence")));
            }
            raw.push(v);
        }
    }
    let get = |k: &str| {
        header
            .get(k)
            .cloned()
            .ok_or_else(|| malformed(context, format!("missing header field '{k}'")))
    };
    let label = get("label")?;
    let level: u64 = get("level")?
        .parse()
        .map_err(|_| malformed(context, "level is not an integer"))?;
    let kind = match get("kind")?.to_lowercase().as_str() {
        "holomorphic" => FormKind::Holomorphic {
            weight: get("weight")?
                .parse()
                .map_err(|_| malformed(context, "weight is not an integer"))?,
        },
        "maass" => FormKind::Maass {
            t: get("spectral")?
                .parse()
                .map_err(|_| malformed(context, "spectral is not a number"))?,
        },
        other => return Err(malformed(context, format!("unknown kind '{other}'"))),
    };
    let is_newform = match header.get("newform").map(|s| s.as_str()) {
        None | Some("true") => true,
        Some("false") => false,
        Some(o) => {
            return Err(malformed(
                context,
                format!("newform must be true/false, got '{o}'"),
            ))
        }
    };
    let norm = match header.get("normalization").map(|s| s.as_str()) {
        None | Some("analytic") => Normalization::Analytic,
        Some("arithmetic") => Normalization::Arithmetic,
        Some(o) => return Err(malformed(context, format!("unknown normalization '{o}'"))),
    };
    let atkin_lehner = match header.get("atkin_lehner") {
        Some(s) => parse_atkin_lehner(s, context)?,
        None => BTreeMap::new(),
    };
    if raw.is_empty() {
        return Err(FormError::InsufficientCoefficients {
            needed: 1,
            available: 0,
        });
    }
    let f = CuspForm::new(
        &label,
        kind,
        level,
        is_newform,
        normalize(kind, norm, raw),
        atkin_lehner,
    )?;
    match header.get("reflection") {
        None => Ok(f),
        Some(s) => {
            let eps: i8 = s
                .parse()
                .map_err(|_| malformed(context, format!("bad reflection sign '{s}'")))?;
            f.with_reflection_sign(eps)
        }
    }
}

/// Writes a form in the analytic normalisation.
pub fn write_coefficient_file(f: &CuspForm, path: &Path) -> Result<(), FormError> {
    let mut out = String::new();
    out.push_str(&format!("label: {}\n", f.label));
    match f.kind {
        FormKind::Holomorphic { weight } => {
            out.push_str(&format!("kind: holomorphic\nweight: {weight}\n"))
        }
        FormKind::Maass { t } => out.push_str(&format!("kind: maass\nspectral: {t}\n")),
    }
    out.push_str(&format!(
        "level: {}\nnewform: {}\nnormalization: analytic\n",
        f.level, f.is_newform
    ));
    if !f.atkin_lehner.is_empty() {
        let al: Vec<String> = f
            .atkin_lehner
            .iter()
            .map(|(p, w)| format!("{p}:{w}"))
            .collect();
        out.push_str(&format!("atkin_lehner: {}\n", al.join(",")));
    }
    if let Some(eps) = f.reflection_sign {
        out.push_str(&format!("reflection: {eps}\n"));
    }
    out.push_str("coefficients:\n");
    for (i, l) in f.coefficients().iter().enumerate() {
        out.push_str(&format!("{} {:.17e}\n", i + 1, l));
    }
    atomic_write(path, out.as_bytes())
}

static CACHE_LOCK: Mutex<()> = Mutex::new(());
static LAST_REQUEST: Mutex<Option<Instant>> = Mutex::new(None);
const MIN_REQUEST_GAP: Duration = Duration::from_secs(1);
const MAX_ATTEMPTS: u32 = 3;

fn atomic_write(path: &Path, bytes: &[u8]) -> Result<(), FormError> {
    let _guard = CACHE_LOCK.lock().unwrap_or_else(|e| e.into_inner());
    if let Some(dir) = path.parent() {
        fs::create_dir_all(dir)?;
    }
    let tmp = path.with_extension(format!("tmp{}", std::process::id()));
    {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(bytes)?;
        f.sync_all()?;
    }
    fs::rename(&tmp, path)?;
    Ok(())
}

fn sanitize_label(label: &str) -> Result<String, FormError> {
    if label.is_empty()
        || !label
            .chars()
            .all(|c| c.is_ascii_alphanumeric() || c == '.' || c == '-' || c == '_')
    {
        return Err(FormError::UnknownLabel(label.to_string()));
    }
    Ok(label.to_string())
}

fn throttle() {
    let mut last = LAST_REQUEST.lock().unwrap_or_else(|e| e.into_inner());
    if let Some(t) = *last {
        let elapsed = t.elapsed();
        if elapsed < MIN_REQUEST_GAP {
            std::thread::sleep(MIN_REQUEST_GAP - elapsed);
        }
    }
    *last = Some(Instant::now());
}

fn http_get(url: &str) -> Result<String, FormError> {
    let agent = ureq::AgentBuilder::new()
        .timeout(Duration::from_secs(30))
        .build();
    let mut last_err = String::new();
    for attempt in 0..MAX_ATTEMPTS {
        if attempt > 0 {
            std::thread::sleep(Duration::from_secs(1 << attempt));
        }
        throttle();
        match agent.get(url).call() {
            Ok(resp) => {
                return resp
                    .into_string()
                    .map_err(|e| FormError::Network(format!("reading body of {url}: {e}")))
            }
            Err(ureq::Error::Status(code, _)) if code < 500 => {
                return Err(FormError::Network(format!("{url} returned HTTP {code}")))
            }
            Err(e) => last_err = e.to_string(),
        }
    }
    Err(FormError::Network(format!("{url}: {last_err}")))
}

/// Cached raw LMFDB response for a newform label, fetching on a miss.
pub fn fetch_lmfdb_raw(base_url: &str, cache_dir: &Path, label: &str) -> Result<String, FormError> {
    let label = sanitize_label(label)?;
    let path = cache_dir.join("lmfdb").join(format!("{label}.json"));
    if path.exists() {
        return Ok(fs::read_to_string(&path)?);
    }
    let url = format!(
        "{}/api/mf_newforms/?label={label}&_format=json&_fields=label,level,weight,dim,char_order,traces,atkin_lehner_eigenvals",
        base_url.trim_end_matches('/')
    );
    let body = http_get(&url)?;
    // validate before caching so a bad response is never persisted
    parse_lmfdb(&body, &label)?;
    atomic_write(&path, body.as_bytes())?;
    Ok(body)
}

fn parse_lmfdb(body: &str, label: &str) -> Result<CuspForm, FormError> {
    let json: Value =
        serde_json::from_str(body).map_err(|e| malformed(label, format!("invalid JSON: {e}")))?;
    let rec = json
        .get("data")
        .and_then(|d| d.as_array())
        .ok_or_else(|| malformed(label, "response has no 'data' array"))?
        .iter()
        .find(|r| r.get("label").and_then(|l| l.as_str()) == Some(label))
        .ok_or_else(|| FormError::UnknownLabel(label.to_string()))?;
    let int = |k: &str| {
        rec.get(k)
            .and_then(|v| v.as_u64())
            .ok_or_else(|| malformed(label, format!("field '{k}' missing or not an integer")))
    };
    let level = int("level")?;
    let weight = int("weight")? as u32;
    let dim = int("dim")?;
    if dim != 1 {
        return Err(FormError::Unsupported(format!(
            "{label} has dimension {dim}; only rational newforms are supported"
        )));
    }
    if let Some(order) = rec.get("char_order").and_then(|v| v.as_u64()) {
        if order != 1 {
            return Err(FormError::Unsupported(format!(
                "{label} has a nontrivial character"
            )));
        }
    }
    let traces: Vec<f64> = rec
        .get("traces")
        .and_then(|v| v.as_array())
        .ok_or_else(|| malformed(label, "field 'traces' missing"))?
        .iter()
        .map(|v| {
            v.as_f64()
                .ok_or_else(|| malformed(label, "non-numeric trace"))
        })
        .collect::<Result<_, _>>()?;
    // traces may start at a(0) = 0 or at a(1) = 1
    let raw = match traces.as_slice() {
        [z, one, ..] if *z == 0.0 && *one == 1.0 => traces[1..].to_vec(),
        [one, ..] if *one == 1.0 => traces,
        _ => return Err(malformed(label, "traces do not start with a(1) = 1")),
    };
    let mut atkin_lehner = BTreeMap::new();
    if let Some(list) = rec.get("atkin_lehner_eigenvals").and_then(|v| v.as_array()) {
        for pair in list {
            let p = pair.get(0).and_then(|v| v.as_u64());
            let w = pair.get(1).and_then(|v| v.as_i64());
            match (p, w) {
                (Some(p), Some(w)) if w == 1 || w == -1 => {
                    atkin_lehner.insert(p, w as i8);
                }
                _ => return Err(malformed(label, "bad atkin_lehner_eigenvals entry")),
            }
        }
    }
    let kind = FormKind::Holomorphic { weight };
    CuspForm::new(
        label,
        kind,
        level,
        true,
        normalize(kind, Normalization::Arithmetic, raw),
        atkin_lehner,
    )
}

/// Loads and validates a form from a coefficient source.
pub fn load_form(src: &CoefficientSource, label: &str) -> Result<CuspForm, FormError> {
    match src {
        CoefficientSource::File(path) => {
            let text = fs::read_to_string(path)?;
            let f = parse_coefficient_file(&text, &path.display().to_string())?;
            if f.label != label {
                return Err(FormError::UnknownLabel(format!(
                    "{label} (file holds {})",
                    f.label
                )));
            }
            Ok(f)
        }
        CoefficientSource::Directory(dir) => {
            let label = sanitize_label(label)?;
            let path = dir.join(format!("{label}.txt"));
            if !path.exists() {
                return Err(FormError::UnknownLabel(label));
            }
            load_form(&CoefficientSource::File(path), &label)
        }
        CoefficientSource::Lmfdb {
            base_url,
            cache_dir,
        } => {
            let body = fetch_lmfdb_raw(base_url, cache_dir, label)?;
            parse_lmfdb(&body, label)
        }
    }
}
