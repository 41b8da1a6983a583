//! Text zero files and the on-disk zero cache.
//!
//! ```text
//! # kind=riemann_zeta
//! # conductor=1
//! # height=30
//! # certified=1
//! 14.1347251417
//! 21.0220396388
//! 25.0108575801
//! # sha256=<hex>
//! ```
//!
//! The digest covers every line before the `sha256` line, header included.

use std::collections::{BTreeMap, HashMap};
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Mutex;

use sha2::{Digest, Sha256};

use super::search::{certify, find_zeros};
use super::{LFunctionId, LKind, ZeroList};
use crate::error::{Error, Result};
use crate::numeric::fmt_sig;

/// Environment variable naming the cache directory.
pub const CACHE_ENV: &str = "EXPLICIT_FORMULA_CACHE";

const DIGITS: usize = 12;

fn digest(text: &str) -> String {
    hex::encode(Sha256::digest(text.as_bytes()))
}

/// Render a list in the file format.
pub fn format_zeros(list: &ZeroList) -> String {
    let mut body = format!(
        "# kind={}\n# conductor={}\n# height={}\n# certified={}\n",
        list.id.kind.as_str(),
        list.id.conductor,
        fmt_sig(list.height, DIGITS).trim_end_matches('0').trim_end_matches('.'),
        u8::from(list.certified)
    );
    for &g in &list.ordinates {
        body.push_str(&fmt_sig(g, DIGITS));
        body.push('\n');
    }
    let sum = digest(&body);
    body.push_str(&format!("# sha256={sum}\n"));
    body
}

fn malformed<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Malformed(msg.into()))
}

/// Parse the file format, trusting the declared certification flag.
pub fn parse_zeros(text: &str) -> Result<ZeroList> {
    let Some(pos) = text.rfind("# sha256=") else {
        return malformed("missing sha256 trailer");
    };
    let (body, trailer) = text.split_at(pos);
    let declared = trailer["# sha256=".len()..].trim().to_ascii_lowercase();
    let computed = digest(body);
    if declared != computed {
        return Err(Error::Checksum { declared, computed });
    }

    let mut header: HashMap<&str, &str> = HashMap::new();
    let mut ordinates = Vec::new();
    for (n, line) in body.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix('#') {
            let Some((key, value)) = rest.trim().split_once('=') else {
                return malformed(format!("line {}: expected '# key=value'", n + 1));
            };
            header.insert(key.trim(), value.trim());
        } else {
            match line.parse::<f64>() {
                Ok(g) => ordinates.push(g),
                Err(_) => return malformed(format!("line {}: '{line}' is not a number", n + 1)),
            }
        }
    }
    let field = |key: &str| -> Result<&str> {
        match header.get(key) {
            Some(v) => Ok(v),
            None => malformed(format!("missing header '{key}'")),
        }
    };
    let kind: LKind = field("kind")?
        .parse()
        .map_err(|_| Error::Malformed(format!("unknown kind '{}'", header["kind"])))?;
    let conductor: u64 = field("conductor")?
        .parse()
        .map_err(|_| Error::Malformed("conductor is not an integer".into()))?;
    let height: f64 = field("height")?
        .parse()
        .map_err(|_| Error::Malformed("height is not a number".into()))?;
    let certified = match field("certified")? {
        "0" => false,
        "1" => true,
        other => return malformed(format!("certified must be 0 or 1, found '{other}'")),
    };
    let id = LFunctionId::from_parts(kind, conductor).map_err(|e| Error::Malformed(e.to_string()))?;
    let list = ZeroList {
        id,
        precision: rounding_error(height),
        ordinates,
        height,
        certified,
    };
    list.validate().map_err(|e| Error::Malformed(e.to_string()))?;
    Ok(list)
}

/// Half a unit in the last printed digit at the top of the range.
fn rounding_error(height: f64) -> f64 {
    let magnitude = height.max(1.0).log10().floor();
    (0.5 * 10f64.powf(magnitude + 1.0 - DIGITS as f64)).max(super::search::BISECTION_TOL)
}

/// Write `text` to `path` through a temporary file in the same directory,
/// so readers see the old file or the new one and nothing in between.
fn write_atomic(path: &Path, text: &str) -> Result<()> {
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(text.as_bytes())?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| Error::Io(e.error))?;
    Ok(())
}

pub fn export_zeros(list: &ZeroList, path: &Path) -> Result<()> {
    list.validate()?;
    write_atomic(path, &format_zeros(list))
}

/// Read a zero file from elsewhere. The list comes back uncertified
/// whatever the file declares; pass it through
/// [`certify`](super::certify) to trust it.
pub fn import_zeros(path: &Path) -> Result<ZeroList> {
    let text = fs::read_to_string(path)?;
    Ok(ZeroList {
        certified: false,
        ..parse_zeros(&text)?
    })
}

/// Certified zero lists keyed by L-function, held in memory and
/// optionally mirrored to a directory of zero files.
pub struct ZeroStore {
    dir: Option<PathBuf>,
    lists: Mutex<HashMap<LFunctionId, (ZeroList, String)>>,
}

impl ZeroStore {
    pub fn in_memory() -> Self {
        ZeroStore {
            dir: None,
            lists: Mutex::new(HashMap::new()),
        }
    }

    pub fn directory(path: impl Into<PathBuf>) -> Result<Self> {
        let dir = path.into();
        fs::create_dir_all(&dir)?;
        Ok(ZeroStore {
            dir: Some(dir),
            lists: Mutex::new(HashMap::new()),
        })
    }

    /// The directory named by [`CACHE_ENV`], or an in-memory store if unset.
    pub fn from_env() -> Result<Self> {
        match std::env::var_os(CACHE_ENV) {
            Some(dir) if !dir.is_empty() => Self::directory(PathBuf::from(dir)),
            _ => Ok(Self::in_memory()),
        }
    }

    pub fn dir(&self) -> Option<&Path> {
        self.dir.as_deref()
    }

    /// File name used for `id` inside the cache directory.
    pub fn file_name(id: &LFunctionId) -> String {
        format!("{}_{}.zeros", id.kind.as_str(), id.conductor)
    }

    pub fn path_for(&self, id: &LFunctionId) -> Option<PathBuf> {
        self.dir.as_ref().map(|d| d.join(Self::file_name(id)))
    }

    /// The stored list for `id`, read from disk on first use.
    pub fn load(&self, id: &LFunctionId) -> Result<Option<ZeroList>> {
        if let Some((list, _)) = self.lists.lock().unwrap().get(id) {
            return Ok(Some(list.clone()));
        }
        let Some(path) = self.path_for(id) else {
            return Ok(None);
        };
        if !path.exists() {
            return Ok(None);
        }
        let text = fs::read_to_string(&path)?;
        let list = parse_zeros(&text)?;
        if list.id != *id {
            return Err(Error::Malformed(format!(
                "{} holds zeros of {}, not {id}",
                path.display(),
                list.id
            )));
        }
        self.lists.lock().unwrap().insert(*id, (list.clone(), digest(&text)));
        Ok(Some(list))
    }

    /// Store a certified list, replacing what was there.
    pub fn store(&self, list: &ZeroList) -> Result<ZeroList> {
        if !list.certified {
            return Err(Error::Uncertified(format!(
                "refusing to cache an uncertified list for {}",
                list.id
            )));
        }
        let text = format_zeros(list);
        // Keep exactly what a later read of the file would return.
        let stored = parse_zeros(&text)?;
        if let Some(path) = self.path_for(&list.id) {
            write_atomic(&path, &text)?;
        }
        self.lists.lock().unwrap().insert(list.id, (stored.clone(), digest(&text)));
        Ok(stored)
    }

    /// Certified zeros of `id` up to `height`, computing and caching them
    /// if the store does not reach that high.
    pub fn get_or_compute(&self, id: &LFunctionId, height: f64) -> Result<ZeroList> {
        if let Some(list) = self.load(id)? {
            if list.certified && list.height >= height {
                return Ok(list.truncated(height));
            }
        }
        let computed = find_zeros(id, height)?;
        if !computed.certified {
            return Err(Error::Uncertified(format!(
                "{id}: found {} zeros up to {height} but the argument principle disagrees",
                computed.ordinates.len()
            )));
        }
        self.store(&computed)
    }

    /// Import a foreign zero file: it is checked, re-certified locally and
    /// only then written to the store.
    pub fn import(&self, path: &Path) -> Result<ZeroList> {
        let list = certify(&import_zeros(path)?)?;
        if !list.certified {
            return Err(Error::Uncertified(format!(
                "{} does not match the local zero count or sign changes of {}",
                path.display(),
                list.id
            )));
        }
        self.store(&list)
    }

    /// SHA-256 digests of the stored zero files, by L-function name.
    pub fn checksums(&self) -> BTreeMap<String, String> {
        self.lists
            .lock()
            .unwrap()
            .iter()
            .map(|(id, (_, sum))| (Self::file_name(id), sum.clone()))
            .collect()
    }

    /// Digest of the stored file for `id`.
    pub fn checksum(&self, id: &LFunctionId) -> Option<String> {
        self.lists.lock().unwrap().get(id).map(|(_, sum)| sum.clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> ZeroList {
        ZeroList {
            id: LFunctionId::zeta(),
            ordinates: vec![14.134725141734693, 21.022039638771555],
            height: 22.0,
            certified: true,
            precision: 1e-12,
        }
    }

    #[test]
    fn format_is_stable() {
        let text = format_zeros(&sample());
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(
            &lines[..6],
            &["# kind=riemann_zeta", "# conductor=1", "# height=22", "# certified=1", "14.1347251417", "21.0220396388"]
        );
        assert!(lines[6].starts_with("# sha256=") && lines[6].len() == 9 + 64);
    }

    #[test]
    fn round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("z.txt");
        export_zeros(&sample(), &path).unwrap();
        let back = import_zeros(&path).unwrap();
        assert!(!back.certified);
        assert_eq!(back.id, sample().id);
        assert_eq!(back.height, 22.0);
        for (a, b) in back.ordinates.iter().zip(&sample().ordinates) {
            assert!((a - b).abs() < 1e-10);
        }
        let again = dir.path().join("z2.txt");
        export_zeros(&ZeroList { certified: true, ..back }, &again).unwrap();
        assert_eq!(fs::read(&path).unwrap(), fs::read(&again).unwrap());
    }

    #[test]
    fn hand_made_file() {
        let body = "# kind=dirichlet\n# conductor=4\n# height=10\n# certified=1\n6.02094890470\n9.0\n";
        let text = format!("{body}# sha256={}\n", digest(body));
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("h.txt");
        fs::write(&path, text).unwrap();
        let list = import_zeros(&path).unwrap();
        assert_eq!(list.ordinates.len(), 2);
        assert!(!list.certified);
        assert_eq!(list.id, LFunctionId::dirichlet(-4).unwrap());
    }

    #[test]
    fn corruption_is_detected() {
        let text = format_zeros(&sample());
        let tampered = text.replacen("14.1347251417", "14.1347251418", 1);
        assert!(matches!(parse_zeros(&tampered), Err(Error::Checksum { .. })));
        let tampered = text.replacen("certified=1", "certified=0", 1);
        assert!(matches!(parse_zeros(&tampered), Err(Error::Checksum { .. })));
        assert!(matches!(parse_zeros("# kind=dirichlet\n"), Err(Error::Malformed(_))));
        let body = "# kind=dirichlet\n# conductor=5\n# height=10\n# certified=0\n";
        let text = format!("{body}# sha256={}\n", digest(body));
        assert!(matches!(parse_zeros(&text), Err(Error::Malformed(_))));
        let body = "# kind=riemann_zeta\n# conductor=1\n# height=10\n# certified=0\n3.0\n2.0\n";
        let text = format!("{body}# sha256={}\n", digest(body));
        assert!(matches!(parse_zeros(&text), Err(Error::Malformed(_))));
    }

    #[test]
    fn import_then_certify_matches_search() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("z.txt");
        let found = find_zeros(&LFunctionId::zeta(), 20.0).unwrap();
        export_zeros(&found, &path).unwrap();
        let imported = import_zeros(&path).unwrap();
        assert!(!imported.certified);
        let checked = certify(&imported).unwrap();
        assert!(checked.certified);
        assert!((checked.ordinates[0] - found.ordinates[0]).abs() < 1e-10);
    }

    #[test]
    fn store_persists_and_truncates() {
        let dir = tempfile::tempdir().unwrap();
        let id = LFunctionId::dirichlet(-4).unwrap();
        let first = ZeroStore::directory(dir.path()).unwrap();
        let list = first.get_or_compute(&id, 12.0).unwrap();
        assert!(list.certified);
        let path = first.path_for(&id).unwrap();
        assert!(path.exists());
        let bytes = fs::read(&path).unwrap();

        let second = ZeroStore::directory(dir.path()).unwrap();
        let lower = second.get_or_compute(&id, 7.0).unwrap();
        assert_eq!(lower.ordinates.len(), 1);
        assert_eq!(fs::read(&path).unwrap(), bytes);
        assert_eq!(first.checksum(&id), second.checksum(&id));
    }

    #[test]
    fn bad_import_leaves_the_cache_alone() {
        let dir = tempfile::tempdir().unwrap();
        let store = ZeroStore::directory(dir.path().join("cache")).unwrap();
        let bad = dir.path().join("bad.txt");
        fs::write(&bad, format_zeros(&sample()).replace("14.13", "14.14")).unwrap();
        assert!(store.import(&bad).is_err());
        assert_eq!(fs::read_dir(store.dir().unwrap()).unwrap().count(), 0);
    }
}
