//! Build configuration, the end-to-end pipeline, and the artifact manifest.
//!
//! A manifest records the resolved configuration (including the modulus and
//! primitive element the search settled on) as `#` comment lines, followed by
//! `sha256sum`-compatible digest lines:
//!
//! ```text
//! # skewhad manifest v1
//! # p=5
//! # e=4
//! # N=16
//! # modulus=2,0,0,0,1
//! # generator=6
//! # i0=4,5,6,7,8,9,10,11
//! # i1=0,1,2,3,4,5,6,7
//! 5f0c...e1  matrix_1252.txt
//! ```
//!
//! Rebuilding from the recorded configuration reproduces every file byte for
//! byte.

use std::fmt::Write as _;

use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::field::FieldConfig;
use crate::hadamard::{construct_from_blocks, gate0_verify, Gate0Report};
use crate::matrix::PmMatrix;
use crate::shdf::{find_valid_generator, GeneratorSearch};

const HEADER: &str = "# skewhad manifest v1";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BuildConfig {
    pub p: u32,
    pub e: u32,
    pub n_classes: usize,
    pub i0: Vec<usize>,
    pub i1: Vec<usize>,
    pub modulus: Option<Vec<u32>>,
    pub generator: Option<u32>,
}

impl BuildConfig {
    pub fn field_config(&self) -> FieldConfig {
        FieldConfig {
            p: self.p,
            e: self.e,
            modulus: self.modulus.clone(),
            generator: self.generator,
        }
    }
}

/// Parses class index sets such as `4-11` or `0,2,5-7`. An empty string is
/// the empty set.
pub fn parse_index_set(s: &str) -> Result<Vec<usize>> {
    let mut out = Vec::new();
    let s = s.trim();
    if s.is_empty() {
        return Ok(out);
    }
    let bad = |part: &str| Error::parse(1, 1, format!("invalid index set item {part:?}"));
    for part in s.split(',') {
        let part = part.trim();
        match part.split_once('-') {
            Some((lo, hi)) => {
                let lo: usize = lo.trim().parse().map_err(|_| bad(part))?;
                let hi: usize = hi.trim().parse().map_err(|_| bad(part))?;
                if lo > hi {
                    return Err(bad(part));
                }
                out.extend(lo..=hi);
            }
            None => out.push(part.parse().map_err(|_| bad(part))?),
        }
    }
    out.sort_unstable();
    out.dedup();
    Ok(out)
}

fn join<T: ToString>(xs: &[T]) -> String {
    xs.iter().map(T::to_string).collect::<Vec<_>>().join(",")
}

#[derive(Debug, Clone)]
pub struct BuildArtifacts {
    pub search: GeneratorSearch,
    pub matrix: PmMatrix,
    pub gate0: Gate0Report,
}

impl BuildArtifacts {
    pub fn pass(&self) -> bool {
        self.search.certificate.pass() && self.gate0.pass()
    }

    /// The configuration with the modulus and generator fixed to what was used.
    pub fn resolved_config(&self, requested: &BuildConfig) -> BuildConfig {
        BuildConfig {
            modulus: Some(self.search.tables.modulus().to_vec()),
            generator: Some(self.search.tables.generator()),
            ..requested.clone()
        }
    }

    pub fn matrix_file_name(&self) -> String {
        format!("matrix_{}.txt", self.matrix.n())
    }

    /// Generator search trace: one `candidate PASS|FAIL` line per element tried.
    pub fn search_log(&self) -> String {
        let mut out = String::new();
        for (g, pass) in &self.search.trace {
            writeln!(out, "{g} {}", if *pass { "PASS" } else { "FAIL" }).unwrap();
        }
        out
    }

    /// Block data: class indices and member encodings in canonical order.
    pub fn blocks_text(&self) -> String {
        let group = &self.search.group;
        let pair = &self.search.pair;
        let members = |d: &crate::group::Subset| {
            let enc: Vec<u32> = d.iter().map(|i| group.encoding_of(i).unwrap_or(i as u32)).collect();
            join(&enc)
        };
        let mut out = String::new();
        if let Some(c) = &pair.classes {
            writeln!(out, "I0 {}", join(&c.i0)).unwrap();
            writeln!(out, "I1 {}", join(&c.i1)).unwrap();
        }
        writeln!(out, "D0 {}", members(&pair.d0)).unwrap();
        writeln!(out, "D1 {}", members(&pair.d1)).unwrap();
        out
    }

    /// Files of the artifact bundle, sorted by name.
    pub fn bundle_files(&self) -> Vec<(String, Vec<u8>)> {
        let mut files = vec![
            ("blocks.txt".to_string(), self.blocks_text().into_bytes()),
            ("gate0_log.txt".to_string(), gate0_log(&self.gate0).into_bytes()),
            (self.matrix_file_name(), self.matrix.to_text().into_bytes()),
            ("generator_search.txt".to_string(), self.search_log().into_bytes()),
            ("shdf_log.txt".to_string(), self.search.certificate.to_log().into_bytes()),
        ];
        files.sort();
        files
    }
}

pub fn gate0_log(report: &Gate0Report) -> String {
    format!(
        "gram_ok={} skew_ok={} max_offdiag_gram={}\nGATE0 {} n={}\n",
        report.gram_ok,
        report.skew_ok,
        report.max_offdiag_gram,
        if report.pass() { "PASS" } else { "FAIL" },
        report.n
    )
}

/// Generator search, bordered assembly and Gate0.
pub fn build(config: &BuildConfig) -> Result<BuildArtifacts> {
    let search = find_valid_generator(&config.field_config(), config.n_classes, &config.i0, &config.i1)?;
    let matrix = construct_from_blocks(&search.group, &search.pair.d0, &search.pair.d1)?;
    let gate0 = gate0_verify(&matrix);
    Ok(BuildArtifacts {
        search,
        matrix,
        gate0,
    })
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Manifest {
    pub config: BuildConfig,
    /// `(hex digest, relative path)`.
    pub digests: Vec<(String, String)>,
}

impl Manifest {
    pub fn new(config: BuildConfig, files: &[(String, Vec<u8>)]) -> Self {
        Manifest {
            config,
            digests: files
                .iter()
                .map(|(name, bytes)| (sha256_hex(bytes), name.clone()))
                .collect(),
        }
    }

    pub fn to_text(&self) -> String {
        let c = &self.config;
        let mut out = String::new();
        writeln!(out, "{HEADER}").unwrap();
        writeln!(out, "# p={}", c.p).unwrap();
        writeln!(out, "# e={}", c.e).unwrap();
        writeln!(out, "# N={}", c.n_classes).unwrap();
        match &c.modulus {
            Some(m) => writeln!(out, "# modulus={}", join(m)).unwrap(),
            None => writeln!(out, "# modulus=auto").unwrap(),
        }
        match c.generator {
            Some(g) => writeln!(out, "# generator={g}").unwrap(),
            None => writeln!(out, "# generator=auto").unwrap(),
        }
        writeln!(out, "# i0={}", join(&c.i0)).unwrap();
        writeln!(out, "# i1={}", join(&c.i1)).unwrap();
        for (digest, path) in &self.digests {
            writeln!(out, "{digest}  {path}").unwrap();
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text.lines().enumerate();
        match lines.next() {
            Some((_, l)) if l == HEADER => {}
            _ => return Err(Error::parse(1, 1, format!("expected {HEADER:?}"))),
        }
        let mut fields = std::collections::BTreeMap::new();
        let mut digests = Vec::new();
        for (no, line) in lines {
            let line_no = no + 1;
            if let Some(kv) = line.strip_prefix("# ") {
                let (k, v) = kv
                    .split_once('=')
                    .ok_or_else(|| Error::parse(line_no, 3, "expected key=value"))?;
                fields.insert(k.to_string(), (line_no, v.to_string()));
            } else {
                let (digest, path) = line
                    .split_once("  ")
                    .ok_or_else(|| Error::parse(line_no, 1, "expected '<sha256>  <path>'"))?;
                if digest.len() != 64 || !digest.bytes().all(|b| b.is_ascii_hexdigit() && !b.is_ascii_uppercase()) {
                    return Err(Error::parse(line_no, 1, "digest must be 64 lowercase hex digits"));
                }
                digests.push((digest.to_string(), path.to_string()));
            }
        }
        let get = |k: &str| {
            fields
                .get(k)
                .ok_or_else(|| Error::Manifest(format!("missing config key {k}")))
        };
        let num = |k: &str| -> Result<u64> {
            let (line, v) = get(k)?;
            v.parse().map_err(|_| Error::parse(*line, 3 + k.len() + 1, format!("invalid {k}")))
        };
        let list = |k: &str| -> Result<Option<Vec<u32>>> {
            let (line, v) = get(k)?;
            if v == "auto" {
                return Ok(None);
            }
            v.split(',')
                .map(|x| x.parse().map_err(|_| Error::parse(*line, 3 + k.len() + 1, format!("invalid {k}"))))
                .collect::<Result<Vec<u32>>>()
                .map(Some)
        };
        let generator = list("generator")?
            .map(|g| match g.as_slice() {
                [g] => Ok(*g),
                _ => Err(Error::Manifest("generator must be a single encoding".into())),
            })
            .transpose()?;
        let config = BuildConfig {
            p: num("p")? as u32,
            e: num("e")? as u32,
            n_classes: num("N")? as usize,
            i0: parse_index_set(&get("i0")?.1)?,
            i1: parse_index_set(&get("i1")?.1)?,
            modulus: list("modulus")?,
            generator,
        };
        Ok(Manifest { config, digests })
    }

    /// Compares recorded digests against `(path, contents)` pairs; returns the
    /// paths whose digest differs or which are missing from `files`.
    pub fn mismatches(&self, files: &[(String, Vec<u8>)]) -> Vec<String> {
        self.digests
            .iter()
            .filter(|(digest, path)| {
                files
                    .iter()
                    .find(|(name, _)| name == path)
                    .is_none_or(|(_, bytes)| &sha256_hex(bytes) != digest)
            })
            .map(|(_, path)| path.clone())
            .collect()
    }
}
