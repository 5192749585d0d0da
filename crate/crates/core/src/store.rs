//! On-disk representative sets and the run manifest.
//!
//! One file per (level, template). Layout, all integers little-endian:
//!
//! ```text
//! magic        8 bytes  "BRAIDREP"
//! version      u16      1
//! strands      u8
//! kind         u8       0 = Artin, 1 = dual
//! level        u32
//! template_len u16
//! template     template_len bytes (Template::encode)
//! count        u64
//! records      count × (packed word, ceil(level / k) bytes; omega u64)
//! ```
//!
//! Records are sorted by Dynnikov coordinates, so identical sets produce
//! identical bytes. Files are written to a temporary name and renamed into
//! place; a file that exists is complete.

use std::fs::{self, File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::dynnikov::{DynnikovCoords, LetterAction};
use crate::error::{Error, Result};
use crate::template::Template;
use crate::words::{pack_letters, unpack_letters, Alphabet, Kind, Word};

pub const MAGIC: &[u8; 8] = b"BRAIDREP";
pub const VERSION: u16 = 1;
pub const MANIFEST_NAME: &str = "manifest.json";

/// A set of unique geodesic representatives for the braids of one length and one template.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RepSet {
    alphabet: Alphabet,
    level: usize,
    template: Template,
    entries: Vec<Word>,
}

impl RepSet {
    pub fn empty(alphabet: Alphabet, level: usize, template: Template) -> Self {
        RepSet { alphabet, level, template, entries: Vec::new() }
    }

    /// Builds a set from words already sorted by Dynnikov coordinates.
    pub(crate) fn from_sorted(
        alphabet: Alphabet,
        level: usize,
        template: Template,
        entries: Vec<Word>,
    ) -> Self {
        RepSet { alphabet, level, template, entries }
    }

    /// Builds a set from arbitrary words, sorting them into storage order.
    pub fn from_words(
        alphabet: Alphabet,
        level: usize,
        template: Template,
        words: Vec<Word>,
    ) -> Result<Self> {
        let action = LetterAction::new(alphabet);
        let mut keyed = words
            .into_iter()
            .map(|w| {
                if w.len() != level {
                    return Err(Error::AlphabetMismatch(format!(
                        "word of length {} in a level-{level} set",
                        w.len()
                    )));
                }
                Ok((action.coords_of(w.letters())?, w))
            })
            .collect::<Result<Vec<(DynnikovCoords, Word)>>>()?;
        keyed.sort_by(|a, b| a.0.cmp(&b.0));
        Ok(RepSet { alphabet, level, template, entries: keyed.into_iter().map(|(_, w)| w).collect() })
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    pub fn level(&self) -> usize {
        self.level
    }

    pub fn template(&self) -> &Template {
        &self.template
    }

    pub fn entries(&self) -> &[Word] {
        &self.entries
    }

    pub fn into_entries(self) -> Vec<Word> {
        self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn omega_sum(&self) -> Result<u64> {
        self.entries
            .iter()
            .try_fold(0u64, |acc, w| acc.checked_add(w.omega))
            .ok_or(Error::OmegaOverflow)
    }

    pub fn record_size(&self) -> usize {
        record_size(self.alphabet, self.level)
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let key = self.template.encode();
        let mut out = Vec::with_capacity(header_size(key.len()) + self.len() * self.record_size());
        out.extend_from_slice(MAGIC);
        out.extend_from_slice(&VERSION.to_le_bytes());
        out.push(self.alphabet.strands() as u8);
        out.push(self.alphabet.kind().code());
        out.extend_from_slice(&(self.level as u32).to_le_bytes());
        out.extend_from_slice(&(key.len() as u16).to_le_bytes());
        out.extend_from_slice(&key);
        out.extend_from_slice(&(self.entries.len() as u64).to_le_bytes());
        for w in &self.entries {
            out.extend_from_slice(&pack_letters(self.alphabet, w.letters()));
            out.extend_from_slice(&w.omega.to_le_bytes());
        }
        out
    }

    /// Parses a file image. `path` only labels errors.
    pub fn from_bytes(bytes: &[u8], path: &Path) -> Result<RepSet> {
        let corrupt = |reason: String| Error::CorruptFile { path: path.to_path_buf(), reason };
        let mut cur = Cursor { bytes, at: 0 };
        let magic = cur.take(8).ok_or_else(|| corrupt("truncated header".into()))?;
        if magic != MAGIC {
            return Err(corrupt("bad magic".into()));
        }
        let header = |c: &mut Cursor| -> Option<(u16, u8, u8, u32, u16)> {
            Some((c.u16()?, c.u8()?, c.u8()?, c.u32()?, c.u16()?))
        };
        let (version, n, kind, level, key_len) =
            header(&mut cur).ok_or_else(|| corrupt("truncated header".into()))?;
        if version != VERSION {
            return Err(corrupt(format!("unsupported version {version}")));
        }
        let kind = Kind::from_code(kind).ok_or_else(|| corrupt(format!("bad kind {kind}")))?;
        let alphabet = Alphabet::new(n as usize, kind).map_err(|e| corrupt(e.to_string()))?;
        let key = cur.take(key_len as usize).ok_or_else(|| corrupt("truncated template".into()))?;
        let template = Template::decode(n as usize, key)
            .ok_or_else(|| corrupt("header template does not decode".into()))?;
        let count = cur.u64().ok_or_else(|| corrupt("truncated header".into()))?;
        let level = level as usize;
        let rec = record_size(alphabet, level);
        let body = bytes.len() - cur.at;
        if (body as u64) != count.saturating_mul(rec as u64) {
            return Err(corrupt(format!(
                "{count} records of {rec} bytes declared, {body} body bytes present"
            )));
        }
        let packed = alphabet.packed_len(level);
        let mut entries = Vec::with_capacity(count as usize);
        for chunk in bytes[cur.at..].chunks_exact(rec) {
            let letters = unpack_letters(alphabet, &chunk[..packed], level)
                .map_err(|e| corrupt(e.to_string()))?;
            let omega = u64::from_le_bytes(chunk[packed..].try_into().unwrap());
            entries.push(Word::from_raw(alphabet, letters, omega));
        }
        Ok(RepSet { alphabet, level, template, entries })
    }
}

struct Cursor<'a> {
    bytes: &'a [u8],
    at: usize,
}

impl<'a> Cursor<'a> {
    fn take(&mut self, k: usize) -> Option<&'a [u8]> {
        let out = self.bytes.get(self.at..self.at + k)?;
        self.at += k;
        Some(out)
    }
    fn u8(&mut self) -> Option<u8> {
        Some(self.take(1)?[0])
    }
    fn u16(&mut self) -> Option<u16> {
        Some(u16::from_le_bytes(self.take(2)?.try_into().ok()?))
    }
    fn u32(&mut self) -> Option<u32> {
        Some(u32::from_le_bytes(self.take(4)?.try_into().ok()?))
    }
    fn u64(&mut self) -> Option<u64> {
        Some(u64::from_le_bytes(self.take(8)?.try_into().ok()?))
    }
}

pub fn header_size(template_len: usize) -> usize {
    8 + 2 + 1 + 1 + 4 + 2 + template_len + 8
}

pub fn record_size(alphabet: Alphabet, level: usize) -> usize {
    alphabet.packed_len(level) + 8
}

/// First eight bytes of SHA-256, little-endian.
pub fn checksum(bytes: &[u8]) -> u64 {
    let digest = Sha256::digest(bytes);
    u64::from_le_bytes(digest[..8].try_into().unwrap())
}

/// What a save produced; enough to rebuild a manifest line.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SavedFile {
    pub count: u64,
    pub omega: u64,
    pub checksum: u64,
    pub bytes: u64,
}

/// Directory of representative-set files for one alphabet.
#[derive(Debug, Clone)]
pub struct DiskStore {
    root: PathBuf,
    alphabet: Alphabet,
    shard_depth: usize,
}

impl DiskStore {
    pub fn open(root: impl Into<PathBuf>, alphabet: Alphabet, shard_depth: usize) -> Result<Self> {
        let root = root.into();
        fs::create_dir_all(&root).map_err(|e| Error::io(&root, e))?;
        Ok(DiskStore { root, alphabet, shard_depth: shard_depth.min(8) })
    }

    pub fn root(&self) -> &Path {
        &self.root
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    pub fn shard_depth(&self) -> usize {
        self.shard_depth
    }

    pub fn level_dir(&self, level: usize) -> PathBuf {
        self.root.join(format!("level-{level:04}"))
    }

    /// `level-LLLL/<d0d1>/…/<digest>.rep`, one directory per digest byte up to the shard depth.
    pub fn path_for(&self, level: usize, t: &Template) -> PathBuf {
        let digest = hex::encode(&Sha256::digest(t.encode())[..16]);
        let mut path = self.level_dir(level);
        for k in 0..self.shard_depth {
            path.push(&digest[2 * k..2 * k + 2]);
        }
        path.push(format!("{digest}.rep"));
        path
    }

    pub fn save(&self, set: &RepSet) -> Result<SavedFile> {
        if set.alphabet != self.alphabet {
            return Err(Error::AlphabetMismatch(format!(
                "saving a {} set into a {} store",
                set.alphabet, self.alphabet
            )));
        }
        let path = self.path_for(set.level, &set.template);
        let dir = path.parent().expect("file path has a parent");
        fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
        let bytes = set.to_bytes();
        let tmp = path.with_extension(format!("tmp{}", std::process::id()));
        {
            let mut f = File::create(&tmp).map_err(|e| Error::io(&tmp, e))?;
            f.write_all(&bytes).map_err(|e| Error::io(&tmp, e))?;
            f.sync_data().map_err(|e| Error::io(&tmp, e))?;
        }
        fs::rename(&tmp, &path).map_err(|e| Error::io(&path, e))?;
        Ok(SavedFile {
            count: set.len() as u64,
            omega: set.omega_sum()?,
            checksum: checksum(&bytes),
            bytes: bytes.len() as u64,
        })
    }

    /// Loads the set for (level, t); `None` when no file exists.
    pub fn load(&self, level: usize, t: &Template) -> Result<Option<RepSet>> {
        let path = self.path_for(level, t);
        let bytes = match fs::read(&path) {
            Ok(b) => b,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(None),
            Err(e) => return Err(Error::io(&path, e)),
        };
        let set = RepSet::from_bytes(&bytes, &path)?;
        let corrupt = |reason: String| Error::CorruptFile { path: path.clone(), reason };
        if set.alphabet != self.alphabet {
            return Err(corrupt(format!("file holds {} words", set.alphabet)));
        }
        if set.level != level {
            return Err(corrupt(format!("declares length {}, expected {level}", set.level)));
        }
        if &set.template != t {
            return Err(corrupt(format!("holds template {}, expected {t}", set.template)));
        }
        Ok(Some(set))
    }

    /// Checksum of the file for (level, t), or `None` if absent.
    pub fn file_checksum(&self, level: usize, t: &Template) -> Result<Option<u64>> {
        let path = self.path_for(level, t);
        match fs::read(&path) {
            Ok(b) => Ok(Some(checksum(&b))),
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => Ok(None),
            Err(e) => Err(Error::io(&path, e)),
        }
    }

    pub fn verify(&self, level: usize, t: &Template, expected: u64) -> Result<()> {
        let path = self.path_for(level, t);
        match self.file_checksum(level, t)? {
            Some(actual) if actual == expected => Ok(()),
            Some(actual) => Err(Error::ChecksumMismatch { path, expected, actual }),
            None => Err(Error::CorruptFile { path, reason: "listed in the manifest but missing".into() }),
        }
    }

    pub fn manifest_path(&self) -> PathBuf {
        self.root.join(MANIFEST_NAME)
    }

    pub fn journal_path(&self, level: usize) -> PathBuf {
        self.root.join(format!("level-{level:04}.journal"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    /// Every template stored separately.
    Combi,
    /// Only symmetry-reduced templates stored.
    RedCombi,
}

impl Mode {
    pub fn name(self) -> &'static str {
        match self {
            Mode::Combi => "combi",
            Mode::RedCombi => "red-combi",
        }
    }
}

/// One finished task: the template (hex of its canonical encoding) and what its file holds.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TemplateRecord {
    pub template: String,
    pub count: u64,
    pub omega: u64,
    pub checksum: String,
}

impl TemplateRecord {
    pub fn new(t: &Template, count: u64, omega: u64, checksum: u64) -> Self {
        TemplateRecord {
            template: hex::encode(t.encode()),
            count,
            omega,
            checksum: format!("{checksum:016x}"),
        }
    }

    pub fn decode_template(&self, n: usize) -> Option<Template> {
        Template::decode(n, &hex::decode(&self.template).ok()?)
    }

    pub fn checksum_value(&self) -> Option<u64> {
        u64::from_str_radix(&self.checksum, 16).ok()
    }

    fn to_journal_line(&self) -> String {
        format!("{} {} {} {}\n", self.template, self.count, self.omega, self.checksum)
    }

    fn from_journal_line(line: &str) -> Option<Self> {
        let mut it = line.split_whitespace();
        let rec = TemplateRecord {
            template: it.next()?.to_string(),
            count: it.next()?.parse().ok()?,
            omega: it.next()?.parse().ok()?,
            checksum: it.next()?.to_string(),
        };
        it.next().is_none().then_some(rec)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LevelRecord {
    pub level: usize,
    /// Nonempty templates of this level, sorted by template order.
    pub templates: Vec<TemplateRecord>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunManifest {
    pub run_id: String,
    pub strands: usize,
    pub kind: Kind,
    pub mode: Mode,
    pub shard_depth: usize,
    /// Levels 0..completed_levels are finished.
    pub completed_levels: usize,
    pub levels: Vec<LevelRecord>,
    pub s: Vec<u64>,
    pub g: Vec<u64>,
}

impl RunManifest {
    pub fn new(alphabet: Alphabet, mode: Mode, shard_depth: usize) -> Self {
        let nanos = std::time::SystemTime::now()
            .duration_since(std::time::UNIX_EPOCH)
            .map(|d| d.as_nanos())
            .unwrap_or(0);
        RunManifest {
            run_id: format!("{}-{}-{:x}", alphabet, mode.name(), nanos),
            strands: alphabet.strands(),
            kind: alphabet.kind(),
            mode,
            shard_depth,
            completed_levels: 0,
            levels: Vec::new(),
            s: Vec::new(),
            g: Vec::new(),
        }
    }

    pub fn read(path: &Path) -> Result<Option<RunManifest>> {
        let text = match fs::read_to_string(path) {
            Ok(t) => t,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(None),
            Err(e) => return Err(Error::io(path, e)),
        };
        let m: RunManifest = serde_json::from_str(&text)
            .map_err(|e| Error::Manifest { path: path.to_path_buf(), reason: e.to_string() })?;
        m.check(path)?;
        Ok(Some(m))
    }

    fn check(&self, path: &Path) -> Result<()> {
        let bad = |reason: String| Error::Manifest { path: path.to_path_buf(), reason };
        if self.levels.len() != self.completed_levels
            || self.s.len() != self.completed_levels
            || self.g.len() != self.completed_levels
        {
            return Err(bad("level records disagree with completed_levels".into()));
        }
        for (k, level) in self.levels.iter().enumerate() {
            if level.level != k {
                return Err(bad(format!("level record {k} labelled {}", level.level)));
            }
            let mut keys: Vec<&str> = level.templates.iter().map(|r| r.template.as_str()).collect();
            keys.sort_unstable();
            if keys.windows(2).any(|w| w[0] == w[1]) {
                return Err(bad(format!("level {k} lists a template twice")));
            }
        }
        Ok(())
    }

    /// Writes atomically (temporary file, then rename).
    pub fn write(&self, path: &Path) -> Result<()> {
        let text = serde_json::to_string_pretty(self).expect("manifest serializes");
        let tmp = path.with_extension("json.tmp");
        fs::write(&tmp, text + "\n").map_err(|e| Error::io(&tmp, e))?;
        fs::rename(&tmp, path).map_err(|e| Error::io(path, e))
    }
}

/// Append-only record of tasks finished in the level under construction.
pub struct Journal {
    path: PathBuf,
    file: File,
}

impl Journal {
    pub fn open(path: PathBuf) -> Result<Self> {
        let file =
            OpenOptions::new().create(true).append(true).open(&path).map_err(|e| Error::io(&path, e))?;
        Ok(Journal { path, file })
    }

    pub fn append(&mut self, rec: &TemplateRecord) -> Result<()> {
        self.file.write_all(rec.to_journal_line().as_bytes()).map_err(|e| Error::io(&self.path, e))
    }

    /// Reads back every complete line; a torn final line is ignored.
    pub fn read(path: &Path) -> Result<Vec<TemplateRecord>> {
        let file = match File::open(path) {
            Ok(f) => f,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(Vec::new()),
            Err(e) => return Err(Error::io(path, e)),
        };
        let mut out = Vec::new();
        for line in BufReader::new(file).lines() {
            let line = line.map_err(|e| Error::io(path, e))?;
            if let Some(rec) = TemplateRecord::from_journal_line(&line) {
                out.push(rec);
            }
        }
        Ok(out)
    }
}
