//! Level-by-level construction of sphere representatives.
//!
//! Level ℓ is built one template at a time. The braids of length ℓ with
//! template t are exactly the products u·x with u of length ℓ−1 and template
//! t∗x⁻¹, minus those equal to a braid of length ℓ−2 (which has template t as
//! well). Only the symmetry-reduced templates are stored; any other class is
//! recovered by mapping its reduced class back through the group.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::path::PathBuf;
use std::sync::atomic::{AtomicBool, Ordering as AtomicOrdering};
use std::sync::mpsc;

use rayon::prelude::*;

use crate::dynnikov::{hash64, DynnikovCoords, LetterAction};
use crate::error::{Error, Result};
use crate::store::{DiskStore, Journal, LevelRecord, Mode, RepSet, RunManifest, TemplateRecord};
use crate::symmetry::{map_letters_into, SymmetryGroup};
use crate::template::Template;
use crate::words::{Alphabet, Word};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LevelCounts {
    pub level: usize,
    /// Number of braids of length exactly `level`.
    pub s: u64,
    /// Number of geodesic words of length `level`.
    pub g: u64,
}

/// s and g for levels 0..=ℓ_max.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct GrowthTable {
    pub levels: Vec<LevelCounts>,
}

impl GrowthTable {
    pub fn from_columns(s: &[u64], g: &[u64]) -> Self {
        let levels =
            s.iter().zip(g).enumerate().map(|(level, (&s, &g))| LevelCounts { level, s, g }).collect();
        GrowthTable { levels }
    }

    pub fn s(&self) -> Vec<u64> {
        self.levels.iter().map(|c| c.s).collect()
    }

    pub fn g(&self) -> Vec<u64> {
        self.levels.iter().map(|c| c.g).collect()
    }

    pub fn truncated(&self, max_len: usize) -> Self {
        GrowthTable { levels: self.levels.iter().take(max_len + 1).copied().collect() }
    }
}

/// One row per level, `ℓ<TAB>s<TAB>g`.
impl fmt::Display for GrowthTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.levels {
            writeln!(f, "{}\t{}\t{}", c.level, c.s, c.g)?;
        }
        Ok(())
    }
}

/// Size of B(ℓ,t) and its geodesic-word count.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct TemplateCount {
    pub template: Template,
    pub count: u64,
    pub omega: u64,
}

#[derive(Debug, Clone)]
pub struct EngineConfig {
    pub workers: usize,
    /// Estimated bytes one task may hold in memory.
    pub mem_cap: Option<u64>,
    pub shard_depth: usize,
    /// Stop, as if killed, once this many tasks of a run have been journaled.
    pub interrupt_after: Option<usize>,
}

impl Default for EngineConfig {
    fn default() -> Self {
        EngineConfig {
            workers: std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1),
            mem_cap: None,
            shard_depth: 2,
            interrupt_after: None,
        }
    }
}

/// Entries keyed by Dynnikov coordinates, bucketed by [`hash64`].
#[derive(Debug, Default)]
pub struct CoordTable {
    index: HashMap<u64, Bucket>,
    entries: Vec<(DynnikovCoords, Word)>,
}

#[derive(Debug)]
enum Bucket {
    One(u32),
    Many(Vec<u32>),
}

impl CoordTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    fn find_hashed(&self, h: u64, c: &DynnikovCoords) -> Option<usize> {
        let hit = |&k: &u32| self.entries[k as usize].0 == *c;
        match self.index.get(&h)? {
            Bucket::One(k) => hit(k).then_some(*k as usize),
            Bucket::Many(ks) => ks.iter().find(|k| hit(k)).map(|&k| k as usize),
        }
    }

    pub fn contains(&self, c: &DynnikovCoords) -> bool {
        self.find_hashed(hash64(c), c).is_some()
    }

    /// Adds ω to the entry for `c`, or inserts `make()` with that ω. True if inserted.
    pub fn add_with(
        &mut self,
        c: DynnikovCoords,
        omega: u64,
        make: impl FnOnce() -> Word,
    ) -> Result<bool> {
        let h = hash64(&c);
        if let Some(k) = self.find_hashed(h, &c) {
            let w = &mut self.entries[k].1;
            w.omega = w.omega.checked_add(omega).ok_or(Error::OmegaOverflow)?;
            return Ok(false);
        }
        let k = self.entries.len() as u32;
        match self.index.get_mut(&h) {
            None => {
                self.index.insert(h, Bucket::One(k));
            }
            Some(b) => match b {
                Bucket::One(first) => *b = Bucket::Many(vec![*first, k]),
                Bucket::Many(ks) => ks.push(k),
            },
        }
        self.entries.push((c, make().with_omega(omega)));
        Ok(true)
    }

    /// Words sorted by coordinates.
    pub fn into_sorted_words(self) -> Vec<Word> {
        let mut entries = self.entries;
        entries.sort_unstable_by(|a, b| a.0.cmp(&b.0));
        entries.into_iter().map(|(_, w)| w).collect()
    }
}

/// Unpartitioned sphere step: representatives of length ℓ from those of lengths ℓ−1 and ℓ−2.
///
/// Words of `prev2` only need correct coordinates; their ω is ignored.
pub fn rep_set(alphabet: Alphabet, prev1: &[Word], prev2: &[Word]) -> Result<Vec<Word>> {
    let action = LetterAction::new(alphabet);
    let mut filter = CoordTable::new();
    for w in prev2 {
        filter.add_with(action.coords_of(w.letters())?, 0, || Word::empty(alphabet))?;
    }
    let mut table = CoordTable::new();
    for u in prev1 {
        let base = action.coords_of(u.letters())?;
        let start = artin_length(&action, u.letters());
        for x in alphabet.letters() {
            let mut c = base.clone();
            let mut position = start;
            action.apply(&mut c, x, &mut position)?;
            if !filter.contains(&c) {
                table.add_with(c, u.omega, || u.extended(x))?;
            }
        }
    }
    Ok(table.into_sorted_words())
}

fn artin_length(action: &LetterAction, letters: &[u8]) -> usize {
    let a = action.alphabet();
    letters.iter().map(|&x| a.artin_expansion(x).len()).sum()
}

/// Rough bytes held per stored entry of a task at length ℓ.
fn entry_footprint(alphabet: Alphabet, level: usize) -> u64 {
    let word = std::mem::size_of::<Word>() + level;
    let coords = std::mem::size_of::<DynnikovCoords>() + 16 * alphabet.strands();
    (word + coords + 48) as u64
}

/// Builds, stores and resumes the representative sets of one alphabet.
pub struct Enumerator {
    alphabet: Alphabet,
    group: SymmetryGroup,
    store: DiskStore,
    action: LetterAction,
    config: EngineConfig,
    manifest: RunManifest,
    pool: rayon::ThreadPool,
}

impl Enumerator {
    /// Starts a run in `root`, which must not already hold one.
    pub fn create(
        root: impl Into<PathBuf>,
        alphabet: Alphabet,
        mode: Mode,
        config: EngineConfig,
    ) -> Result<Self> {
        let store = DiskStore::open(root, alphabet, config.shard_depth)?;
        let path = store.manifest_path();
        if path.exists() {
            return Err(Error::Manifest {
                path,
                reason: "store already holds a run; resume it or pick an empty directory".into(),
            });
        }
        let manifest = RunManifest::new(alphabet, mode, store.shard_depth());
        Self::assemble(store, mode, config, manifest)
    }

    /// Reopens the run in `root` after verifying every completed file, or starts one if none exists.
    pub fn resume(
        root: impl Into<PathBuf>,
        alphabet: Alphabet,
        mode: Mode,
        config: EngineConfig,
    ) -> Result<Self> {
        let root = root.into();
        let probe = DiskStore::open(&root, alphabet, config.shard_depth)?;
        let path = probe.manifest_path();
        let Some(manifest) = RunManifest::read(&path)? else {
            return Self::create(root, alphabet, mode, config);
        };
        if manifest.strands != alphabet.strands() || manifest.kind != alphabet.kind() {
            return Err(Error::Manifest {
                path,
                reason: format!(
                    "run is for {} strands ({}), not {alphabet}",
                    manifest.strands, manifest.kind
                ),
            });
        }
        if manifest.mode != mode {
            return Err(Error::Manifest {
                path,
                reason: format!("run uses mode {}, not {}", manifest.mode.name(), mode.name()),
            });
        }
        let store = DiskStore::open(root, alphabet, manifest.shard_depth)?;
        let engine = Self::assemble(store, mode, config, manifest)?;
        for level in &engine.manifest.levels {
            for rec in &level.templates {
                engine.verify_record(level.level, rec)?;
            }
        }
        Ok(engine)
    }

    fn assemble(
        store: DiskStore,
        mode: Mode,
        config: EngineConfig,
        manifest: RunManifest,
    ) -> Result<Self> {
        let alphabet = store.alphabet();
        let group = match mode {
            Mode::Combi => SymmetryGroup::trivial(alphabet),
            Mode::RedCombi => SymmetryGroup::new(alphabet),
        };
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(config.workers.max(1))
            .build()
            .expect("thread pool starts");
        Ok(Enumerator {
            alphabet,
            group,
            action: LetterAction::new(alphabet),
            store,
            config,
            manifest,
            pool,
        })
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    pub fn store(&self) -> &DiskStore {
        &self.store
    }

    pub fn manifest(&self) -> &RunManifest {
        &self.manifest
    }

    pub fn group(&self) -> &SymmetryGroup {
        &self.group
    }

    /// Levels finished so far.
    pub fn counts(&self) -> GrowthTable {
        GrowthTable::from_columns(&self.manifest.s, &self.manifest.g)
    }

    fn decode(&self, rec: &TemplateRecord) -> Result<Template> {
        rec.decode_template(self.alphabet.strands()).ok_or_else(|| Error::Manifest {
            path: self.store.manifest_path(),
            reason: format!("undecodable template key {}", rec.template),
        })
    }

    fn verify_record(&self, level: usize, rec: &TemplateRecord) -> Result<()> {
        if rec.count == 0 {
            return Ok(());
        }
        let t = self.decode(rec)?;
        let expected = rec.checksum_value().ok_or_else(|| Error::Manifest {
            path: self.store.manifest_path(),
            reason: format!("bad checksum field {}", rec.checksum),
        })?;
        self.store.verify(level, &t, expected)
    }

    /// Stored (reduced) templates of a finished level.
    pub fn stored_templates(&self, level: usize) -> Result<Vec<TemplateCount>> {
        let Some(rec) = self.manifest.levels.get(level) else { return Ok(Vec::new()) };
        rec.templates
            .iter()
            .map(|r| Ok(TemplateCount { template: self.decode(r)?, count: r.count, omega: r.omega }))
            .collect()
    }

    /// Every template of a finished level with its counts, orbits expanded, sorted.
    pub fn template_counts(&self, level: usize) -> Result<Vec<TemplateCount>> {
        let mut out = Vec::new();
        for tc in self.stored_templates(level)? {
            for t in self.group.orbit(&tc.template) {
                out.push(TemplateCount { template: t, count: tc.count, omega: tc.omega });
            }
        }
        out.sort();
        Ok(out)
    }

    /// Representatives of B(ℓ,t), recovered from the stored reduced class.
    pub fn load_from_red(&self, level: usize, t: &Template) -> Result<Vec<Word>> {
        let (reduced, g) = self.group.reduce(t);
        let Some(set) = self.store.load(level, &reduced)? else { return Ok(Vec::new()) };
        if g.is_identity() {
            return Ok(set.into_entries());
        }
        let back = g.inverse(self.alphabet.strands());
        let mut buf = Vec::with_capacity(level);
        Ok(set
            .into_entries()
            .into_iter()
            .map(|w| {
                map_letters_into(back, self.alphabet, w.letters(), &mut buf);
                Word::from_raw(self.alphabet, buf.clone(), w.omega)
            })
            .collect())
    }

    /// Builds, saves and counts B(ℓ,t). Lower levels must already be stored.
    pub fn temp_rep_set(&self, level: usize, t: &Template) -> Result<(u64, u64)> {
        let saved = self.build_and_save(level, t)?;
        Ok((saved.count, saved.omega))
    }

    fn check_memory(&self, t: &Template, level: usize, held: usize) -> Result<()> {
        let Some(cap) = self.config.mem_cap else { return Ok(()) };
        let needed = held as u64 * entry_footprint(self.alphabet, level);
        if needed > cap {
            return Err(Error::MemoryCap { template: t.to_string(), needed, cap });
        }
        Ok(())
    }

    fn build(&self, level: usize, t: &Template) -> Result<RepSet> {
        assert!(level >= 1, "level 0 is seeded, not built");
        let a = self.alphabet;
        let mut filter = CoordTable::new();
        if level >= 2 {
            let older = self.load_from_red(level - 2, t)?;
            self.check_memory(t, level, older.len())?;
            for w in older {
                filter.add_with(self.action.coords_of(w.letters())?, 0, || Word::empty(a))?;
            }
        }
        let mut table = CoordTable::new();
        for x in a.letters() {
            let prev = self.load_from_red(level - 1, &t.extend(a, a.inverse(x)))?;
            self.check_memory(t, level, filter.len() + table.len() + prev.len())?;
            for u in &prev {
                let mut c = self.action.coords_of(u.letters())?;
                let mut position = artin_length(&self.action, u.letters());
                self.action.apply(&mut c, x, &mut position)?;
                if !filter.contains(&c) {
                    table.add_with(c, u.omega, || u.extended(x))?;
                }
            }
        }
        Ok(RepSet::from_sorted(a, level, t.clone(), table.into_sorted_words()))
    }

    fn build_and_save(&self, level: usize, t: &Template) -> Result<crate::store::SavedFile> {
        let set = self.build(level, t)?;
        if set.is_empty() {
            return Ok(crate::store::SavedFile { count: 0, omega: 0, checksum: 0, bytes: 0 });
        }
        self.store.save(&set)
    }

    fn seed(&mut self) -> Result<()> {
        let id = Template::identity(self.alphabet.strands());
        let set = RepSet::from_sorted(self.alphabet, 0, id.clone(), vec![Word::empty(self.alphabet)]);
        let saved = self.store.save(&set)?;
        self.manifest.levels.push(LevelRecord {
            level: 0,
            templates: vec![TemplateRecord::new(&id, 1, 1, saved.checksum)],
        });
        self.manifest.s.push(1);
        self.manifest.g.push(1);
        self.manifest.completed_levels = 1;
        self.manifest.write(&self.store.manifest_path())
    }

    /// Candidate reduced templates of `level`: reduced members of G⋆t∗x over the previous frontier.
    fn candidates(&self, level: usize) -> Result<Vec<Template>> {
        let a = self.alphabet;
        let mut out = BTreeSet::new();
        for tc in self.stored_templates(level - 1)? {
            for t in self.group.orbit(&tc.template) {
                for x in a.letters() {
                    let next = t.extend(a, x);
                    if self.group.is_reduced(&next) {
                        out.insert(next);
                    }
                }
            }
        }
        Ok(out.into_iter().collect())
    }

    /// Completes levels up to `max_len`, picking up wherever the stored run stopped.
    pub fn run(&mut self, max_len: usize) -> Result<GrowthTable> {
        if self.manifest.completed_levels == 0 {
            self.seed()?;
        }
        let mut budget = self.config.interrupt_after;
        while self.manifest.completed_levels <= max_len {
            let level = self.manifest.completed_levels;
            self.run_level(level, &mut budget)?;
            let c = self.counts().levels[level];
            log::info!("{}: length {level} done, s = {}, g = {}", self.alphabet, c.s, c.g);
        }
        Ok(self.counts().truncated(max_len))
    }

    fn run_level(&mut self, level: usize, budget: &mut Option<usize>) -> Result<()> {
        let journal_path = self.store.journal_path(level);
        let mut done: BTreeMap<Template, TemplateRecord> = BTreeMap::new();
        for rec in Journal::read(&journal_path)? {
            self.verify_record(level, &rec)?;
            done.insert(self.decode(&rec)?, rec);
        }
        let candidates = self.candidates(level)?;
        let todo: Vec<&Template> = candidates.iter().filter(|t| !done.contains_key(*t)).collect();
        log::info!(
            "{}: length {level}, {} candidate templates, {} already done",
            self.alphabet,
            candidates.len(),
            candidates.len() - todo.len()
        );

        let mut journal = Journal::open(journal_path.clone())?;
        let cancel = AtomicBool::new(false);
        let mut failure: Option<Error> = None;
        let (tx, rx) = mpsc::channel::<(Template, Result<crate::store::SavedFile>)>();
        std::thread::scope(|scope| {
            let this = &*self;
            let cancel = &cancel;
            let todo = &todo;
            scope.spawn(move || {
                this.pool.install(|| {
                    todo.par_iter().for_each_with(tx, |tx, &t| {
                        if cancel.load(AtomicOrdering::Relaxed) {
                            return;
                        }
                        let _ = tx.send((t.clone(), this.build_and_save(level, t)));
                    })
                })
            });
            for (t, outcome) in rx {
                if failure.is_some() {
                    continue;
                }
                let saved = match outcome {
                    Ok(saved) => saved,
                    Err(e) => {
                        cancel.store(true, AtomicOrdering::Relaxed);
                        failure = Some(e);
                        continue;
                    }
                };
                let rec = TemplateRecord::new(&t, saved.count, saved.omega, saved.checksum);
                if let Err(e) = journal.append(&rec) {
                    cancel.store(true, AtomicOrdering::Relaxed);
                    failure = Some(e);
                    continue;
                }
                done.insert(t, rec);
                if let Some(left) = budget.as_mut() {
                    *left = left.saturating_sub(1);
                    if *left == 0 {
                        cancel.store(true, AtomicOrdering::Relaxed);
                        failure = Some(Error::Interrupted(self.config.interrupt_after.unwrap()));
                    }
                }
            }
        });
        if let Some(e) = failure {
            return Err(e);
        }

        let mut s = 0u64;
        let mut g = 0u64;
        let mut templates = Vec::new();
        for (t, rec) in done {
            if rec.count == 0 {
                continue;
            }
            let size = self.group.orbit(&t).len() as u64;
            let overflow = || Error::CountOverflow { level };
            s = rec.count.checked_mul(size).and_then(|v| v.checked_add(s)).ok_or_else(overflow)?;
            g = rec.omega.checked_mul(size).and_then(|v| v.checked_add(g)).ok_or_else(overflow)?;
            templates.push(rec);
        }
        self.manifest.levels.push(LevelRecord { level, templates });
        self.manifest.s.push(s);
        self.manifest.g.push(g);
        self.manifest.completed_levels = level + 1;
        self.manifest.write(&self.store.manifest_path())?;
        std::fs::remove_file(&journal_path).map_err(|e| Error::io(&journal_path, e))
    }
}

/// Runs `mode` on a fresh store and returns the table.
pub fn enumerate(
    root: impl Into<PathBuf>,
    alphabet: Alphabet,
    mode: Mode,
    max_len: usize,
    config: EngineConfig,
) -> Result<GrowthTable> {
    Enumerator::create(root, alphabet, mode, config)?.run(max_len)
}

/// Symmetry-reduced enumeration.
pub fn red_combi(
    root: impl Into<PathBuf>,
    alphabet: Alphabet,
    max_len: usize,
    config: EngineConfig,
) -> Result<GrowthTable> {
    enumerate(root, alphabet, Mode::RedCombi, max_len, config)
}

/// Enumeration with every template stored separately.
pub fn combi(
    root: impl Into<PathBuf>,
    alphabet: Alphabet,
    max_len: usize,
    config: EngineConfig,
) -> Result<GrowthTable> {
    enumerate(root, alphabet, Mode::Combi, max_len, config)
}
