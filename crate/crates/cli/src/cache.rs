//! On-disk cache of catalogs and systems, keyed by the content hash of the
//! input, the tool version and the field prime.

use std::fs;
use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use repzeta_core::dirichlet::Q;
use repzeta_core::funceq::{FuncEqSystem, RowTerm, Term};
use repzeta_core::group::Group;
use repzeta_core::triples::TripleCatalog;
use repzeta_core::{Error, Result};

pub const CACHE_ENV: &str = "REPZETA_CACHE_DIR";
pub const VERSION: &str = concat!(env!("CARGO_PKG_VERSION"), "+fmt1");

pub fn content_hash(text: &str) -> String {
    Sha256::digest(text.as_bytes()).iter().map(|b| format!("{b:02x}")).collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CatalogEntryRecord {
    pub class: usize,
    pub subgroup: Vec<u32>,
    pub coords: Vec<u64>,
    pub cocycle: Vec<u64>,
    pub degrees: Vec<(u64, u64)>,
    pub index: usize,
    pub conjugates: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CatalogRecord {
    pub b_order: usize,
    pub q: u64,
    pub e: u64,
    pub classes: usize,
    pub multipliers: Vec<Vec<u64>>,
    pub identity_entry: usize,
    pub entries: Vec<CatalogEntryRecord>,
}

impl CatalogRecord {
    pub fn from_catalog(cat: &TripleCatalog) -> Self {
        CatalogRecord {
            b_order: cat.b.order(),
            q: cat.field.q,
            e: cat.field.e,
            classes: cat.classes.len(),
            multipliers: cat.mults.iter().map(|m| m.invariants()).collect(),
            identity_entry: cat.identity_entry(),
            entries: (0..cat.len())
                .map(|e| {
                    let en = &cat.entries[e];
                    CatalogEntryRecord {
                        class: en.class,
                        subgroup: cat.subgroup(e).elems().to_vec(),
                        coords: en.coords.clone(),
                        cocycle: en.cocycle.vals.clone(),
                        degrees: en.degrees.clone(),
                        index: cat.index(e),
                        conjugates: cat.conjugates(e),
                    }
                })
                .collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermRecord {
    pub target: usize,
    pub coeff: String,
    pub modulus: u64,
    pub mono: Vec<(usize, u32)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SystemRecord {
    pub num_triples: usize,
    pub m: usize,
    pub p: usize,
    pub seed: usize,
    pub terms: Vec<TermRecord>,
    pub row: Vec<(usize, u64, Vec<(u64, u64)>)>,
}

fn parse_q(s: &str) -> Result<Q> {
    let bad = || Error::Consistency(format!("bad rational {s:?} in cached system"));
    match s.split_once('/') {
        Some((a, b)) => {
            let d: i128 = b.parse().map_err(|_| bad())?;
            if d == 0 {
                return Err(bad());
            }
            Ok(Q::new(a.parse().map_err(|_| bad())?, d))
        }
        None => Ok(Q::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

impl SystemRecord {
    pub fn from_system(s: &FuncEqSystem) -> Self {
        SystemRecord {
            num_triples: s.num_triples,
            m: s.m,
            p: s.p,
            seed: s.seed,
            terms: s
                .terms
                .iter()
                .map(|t| TermRecord { target: t.target, coeff: t.coeff.to_string(), modulus: t.modulus, mono: t.mono.clone() })
                .collect(),
            row: s.row.iter().map(|r| (r.entry, r.index, r.zeta_dual.clone())).collect(),
        }
    }

    pub fn to_system(&self) -> Result<FuncEqSystem> {
        let terms = self
            .terms
            .iter()
            .map(|t| Ok(Term { target: t.target, coeff: parse_q(&t.coeff)?, modulus: t.modulus, mono: t.mono.clone() }))
            .collect::<Result<_>>()?;
        let row = self.row.iter().map(|(e, i, z)| RowTerm { entry: *e, index: *i, zeta_dual: z.clone() }).collect();
        let sys = FuncEqSystem { m: self.m, p: self.p, num_triples: self.num_triples, seed: self.seed, terms, row };
        let n = sys.num_triples;
        let in_range = sys.seed < n
            && sys.terms.iter().all(|t| t.target < n && t.mono.iter().all(|&(v, _)| v < n))
            && sys.row.iter().all(|r| r.entry < n);
        if !in_range {
            return Err(Error::Consistency("cached system refers to unknown variables".into()));
        }
        Ok(sys)
    }
}

#[derive(Serialize, Deserialize)]
struct Envelope<T> {
    version: String,
    input_hash: String,
    q: u64,
    data: T,
}

#[derive(Clone, Debug)]
pub struct Cache {
    pub dir: PathBuf,
    pub version: String,
}

impl Cache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        Cache { dir: dir.into(), version: VERSION.to_string() }
    }

    /// The cache named by the environment, if any.
    pub fn from_env() -> Option<Self> {
        std::env::var_os(CACHE_ENV).filter(|v| !v.is_empty()).map(Cache::new)
    }

    fn path(&self, kind: &str, hash: &str, q: u64) -> PathBuf {
        self.dir.join(format!("{kind}-{hash}-{q}.json"))
    }

    /// `None` on a miss, a stale version or a corrupt entry (with a warning).
    pub fn load<T: DeserializeOwned>(&self, kind: &str, hash: &str, q: u64) -> Option<T> {
        let p = self.path(kind, hash, q);
        let text = fs::read_to_string(&p).ok()?;
        match serde_json::from_str::<Envelope<T>>(&text) {
            Ok(env) if env.version == self.version && env.input_hash == hash && env.q == q => Some(env.data),
            Ok(_) => None,
            Err(e) => {
                warn_corrupt(&p, &e);
                None
            }
        }
    }

    pub fn store<T: Serialize>(&self, kind: &str, hash: &str, q: u64, data: &T) -> std::io::Result<()> {
        fs::create_dir_all(&self.dir)?;
        let env = Envelope { version: self.version.clone(), input_hash: hash.to_string(), q, data };
        let p = self.path(kind, hash, q);
        let tmp = p.with_extension("tmp");
        fs::write(&tmp, serde_json::to_vec(&env).map_err(std::io::Error::other)?)?;
        fs::rename(tmp, p)
    }
}

fn warn_corrupt(p: &Path, e: &serde_json::Error) {
    eprintln!("warning: ignoring corrupt cache entry {}: {e}", p.display());
}

#[cfg(test)]
mod tests {
    use super::*;
    use repzeta_core::field::FieldSpec;
    use repzeta_core::group::PermGroup;
    use repzeta_core::perm::Perm;

    fn v4_catalog() -> TripleCatalog {
        let gens = vec![Perm::parse("(1,2)", 4).unwrap(), Perm::parse("(3,4)", 4).unwrap()];
        let g = PermGroup::new(4, gens, 100).unwrap().table().unwrap();
        TripleCatalog::build(&g, FieldSpec::new(4, 1 << 20).unwrap()).unwrap()
    }

    #[test]
    fn catalog_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let c = Cache::new(dir.path());
        let rec = CatalogRecord::from_catalog(&v4_catalog());
        let h = content_hash("c2xc2");
        assert!(c.load::<CatalogRecord>("catalog", &h, rec.q).is_none());
        c.store("catalog", &h, rec.q, &rec).unwrap();
        assert_eq!(c.load::<CatalogRecord>("catalog", &h, rec.q), Some(rec.clone()));
        let bumped = Cache { version: "0.0.0-other".into(), ..c.clone() };
        assert!(bumped.load::<CatalogRecord>("catalog", &h, rec.q).is_none());
        assert!(c.load::<CatalogRecord>("catalog", &h, rec.q + 2).is_none());
    }

    #[test]
    fn corrupt_entries_are_misses() {
        let dir = tempfile::tempdir().unwrap();
        let c = Cache::new(dir.path());
        let h = content_hash("x");
        std::fs::write(c.path("system", &h, 7), "{not json").unwrap();
        assert!(c.load::<SystemRecord>("system", &h, 7).is_none());
    }

    #[test]
    fn hashes_separate_inputs() {
        assert_ne!(content_hash("name a\n"), content_hash("name b\n"));
        assert_eq!(content_hash("abc").len(), 64);
    }

    #[test]
    fn rationals_round_trip() {
        for q in [Q::new(-3, 7), Q::from_integer(5), Q::new(1, 2)] {
            assert_eq!(parse_q(&q.to_string()).unwrap(), q);
        }
        assert!(parse_q("1/0").is_err());
    }
}
