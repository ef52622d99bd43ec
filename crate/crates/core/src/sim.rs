//! Placement and XOR delivery driven by an array.
//!
//! User `k` caches packet `j` of every file when cell `(j, k)` is a star.
//! Each label becomes one multicast signal: the XOR of `W[d_k][j]` over the
//! cells `(j, k)` carrying it. A user missing packet `j` recovers it from the
//! signal of cell `(j, k)`, since every other packet in that signal sits
//! behind a star in its own column.

use num_rational::BigRational;
use rand::seq::SliceRandom;
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

use crate::combinatorics::ratio;
use crate::error::{Error, Result};
use crate::pda::{Entry, Label, PdaArray};

pub const DEFAULT_PACKET_SIZE: usize = 64;

/// `N` files of `F` packets each, stored contiguously.
#[derive(Clone, Debug)]
pub struct Library {
    files: usize,
    packets: usize,
    packet_size: usize,
    bytes: Vec<u8>,
}

impl Library {
    /// Packets filled from a ChaCha stream seeded with `seed`.
    pub fn random(files: usize, packets: usize, packet_size: usize, seed: u64) -> Result<Self> {
        if files == 0 || packets == 0 || packet_size == 0 {
            return Err(Error::Parameter(format!(
                "library needs files, packets and packet size >= 1, got {files}, {packets}, {packet_size}"
            )));
        }
        let mut bytes = vec![0u8; files * packets * packet_size];
        ChaCha8Rng::seed_from_u64(seed).fill_bytes(&mut bytes);
        Ok(Self {
            files,
            packets,
            packet_size,
            bytes,
        })
    }

    pub fn files(&self) -> usize {
        self.files
    }

    pub fn packets_per_file(&self) -> usize {
        self.packets
    }

    pub fn packet_size(&self) -> usize {
        self.packet_size
    }

    pub fn file_bytes(&self) -> usize {
        self.packets * self.packet_size
    }

    pub fn file(&self, n: usize) -> &[u8] {
        let len = self.file_bytes();
        &self.bytes[n * len..(n + 1) * len]
    }

    pub fn packet(&self, n: usize, j: usize) -> &[u8] {
        let start = (n * self.packets + j) * self.packet_size;
        &self.bytes[start..start + self.packet_size]
    }
}

/// The file requested by each user.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DemandVector(Vec<usize>);

impl DemandVector {
    pub fn new(demands: Vec<usize>, files: usize) -> Result<Self> {
        if demands.is_empty() {
            return Err(Error::Parameter("demand vector needs at least one user".into()));
        }
        if let Some(&d) = demands.iter().find(|&&d| d >= files) {
            return Err(Error::Parameter(format!("demand {d} is not a file id below {files}")));
        }
        Ok(Self(demands))
    }

    /// Independent uniform demands.
    pub fn random<R: Rng>(users: usize, files: usize, rng: &mut R) -> Result<Self> {
        if files == 0 {
            return Err(Error::Parameter("no files to demand".into()));
        }
        Self::new((0..users).map(|_| rng.gen_range(0..files)).collect(), files)
    }

    /// User `k` asks for file `(k + offset) mod N`.
    pub fn round_robin(users: usize, files: usize, offset: usize) -> Result<Self> {
        if files == 0 {
            return Err(Error::Parameter("no files to demand".into()));
        }
        Self::new((0..users).map(|k| (k + offset) % files).collect(), files)
    }

    /// A random permutation prefix when `N ≥ K`, so demands are distinct.
    pub fn distinct<R: Rng>(users: usize, files: usize, rng: &mut R) -> Result<Self> {
        if files < users {
            return Err(Error::Parameter(format!("{users} distinct demands need at least {users} files")));
        }
        let mut ids: Vec<usize> = (0..files).collect();
        ids.shuffle(rng);
        ids.truncate(users);
        Self::new(ids, files)
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn users(&self) -> usize {
        self.0.len()
    }
}

/// Packet indices held by one user; the bytes stay in the library.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UserCache {
    user: usize,
    files: usize,
    rows: Vec<usize>,
    cached: Vec<bool>,
}

impl UserCache {
    pub fn user(&self) -> usize {
        self.user
    }

    /// Packet indices cached from every file.
    pub fn rows(&self) -> &[usize] {
        &self.rows
    }

    pub fn contains(&self, file: usize, j: usize) -> bool {
        file < self.files && self.cached.get(j).copied().unwrap_or(false)
    }

    pub fn get<'a>(&self, lib: &'a Library, file: usize, j: usize) -> Option<&'a [u8]> {
        self.contains(file, j).then(|| lib.packet(file, j))
    }

    /// Cached packets over the whole library: `Z·N`.
    pub fn packet_count(&self) -> usize {
        self.rows.len() * self.files
    }
}

#[derive(Clone, Debug)]
pub struct Placement {
    caches: Vec<UserCache>,
}

impl Placement {
    pub fn cache(&self, user: usize) -> &UserCache {
        &self.caches[user]
    }

    pub fn caches(&self) -> &[UserCache] {
        &self.caches
    }
}

fn check_library(p: &PdaArray, lib: &Library) -> Result<()> {
    if lib.packets_per_file() != p.f() {
        return Err(Error::InvalidInput(format!(
            "library splits files into {} packets but the array has F={}",
            lib.packets_per_file(),
            p.f()
        )));
    }
    Ok(())
}

pub fn place(p: &PdaArray, lib: &Library) -> Result<Placement> {
    check_library(p, lib)?;
    let caches = (0..p.k())
        .map(|k| {
            let cached: Vec<bool> = (0..p.f()).map(|j| p.entry(j, k).is_star()).collect();
            UserCache {
                user: k,
                files: lib.files(),
                rows: (0..p.f()).filter(|&j| cached[j]).collect(),
                cached,
            }
        })
        .collect();
    Ok(Placement { caches })
}

/// One multicast transmission.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Signal {
    pub label: Label,
    /// Cells `(row, column)` whose packets are XORed, in row-major order.
    pub cells: Vec<(usize, usize)>,
    pub payload: Vec<u8>,
}

impl Signal {
    pub fn digest(&self) -> String {
        hex::encode(Sha256::digest(&self.payload))
    }
}

/// All signals of one delivery, in canonical label order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Transcript {
    pub signals: Vec<Signal>,
}

#[derive(Serialize)]
struct SignalRecord<'a> {
    label: String,
    cells: &'a [(usize, usize)],
    byte_len: usize,
    digest: String,
}

impl Transcript {
    pub fn bytes_sent(&self) -> usize {
        self.signals.iter().map(|s| s.payload.len()).sum()
    }

    /// One record per signal: `{label, cells, byte_len, digest}` with a
    /// SHA-256 hex digest of the payload.
    pub fn to_json(&self) -> Value {
        let records: Vec<SignalRecord<'_>> = self
            .signals
            .iter()
            .map(|s| SignalRecord {
                label: s.label.to_string(),
                cells: &s.cells,
                byte_len: s.payload.len(),
                digest: s.digest(),
            })
            .collect();
        serde_json::to_value(records).expect("transcript records serialize")
    }

    fn position(&self, label: &Label) -> Option<usize> {
        self.signals.binary_search_by(|s| s.label.cmp(label)).ok()
    }
}

fn xor_into(acc: &mut [u8], other: &[u8]) {
    for (a, b) in acc.iter_mut().zip(other) {
        *a ^= b;
    }
}

/// Labels in canonical order with their cells, after checking that every
/// pair of cells in one signal has star crosses.
struct Plan {
    labels: Vec<(Label, Vec<(usize, usize)>)>,
}

impl Plan {
    fn new(p: &PdaArray) -> Result<Self> {
        let labels: Vec<(Label, Vec<(usize, usize)>)> = p
            .occurrences()
            .into_iter()
            .map(|(l, cells)| (l.clone(), cells))
            .collect();
        for (label, cells) in &labels {
            for (i, &(r1, c1)) in cells.iter().enumerate() {
                for &(r2, c2) in &cells[i + 1..] {
                    if r1 == r2 || c1 == c2 || !p.entry(r1, c2).is_star() || !p.entry(r2, c1).is_star() {
                        return Err(Error::InvalidInput(format!(
                            "signal {label} is not decodable: cells ({r1},{c1}) and ({r2},{c2}) conflict"
                        )));
                    }
                }
            }
        }
        Ok(Self { labels })
    }

    fn deliver(&self, lib: &Library, d: &DemandVector) -> Transcript {
        let signals = self
            .labels
            .par_iter()
            .map(|(label, cells)| {
                let mut payload = vec![0u8; lib.packet_size()];
                for &(j, k) in cells {
                    xor_into(&mut payload, lib.packet(d.as_slice()[k], j));
                }
                Signal {
                    label: label.clone(),
                    cells: cells.clone(),
                    payload,
                }
            })
            .collect();
        Transcript { signals }
    }
}

fn check_demands(p: &PdaArray, lib: &Library, d: &DemandVector) -> Result<()> {
    if d.users() != p.k() {
        return Err(Error::InvalidInput(format!(
            "{} demands for K={} users",
            d.users(),
            p.k()
        )));
    }
    if let Some(&bad) = d.as_slice().iter().find(|&&f| f >= lib.files()) {
        return Err(Error::InvalidInput(format!("demand {bad} exceeds the library")));
    }
    Ok(())
}

pub fn deliver(p: &PdaArray, lib: &Library, d: &DemandVector) -> Result<Transcript> {
    check_library(p, lib)?;
    check_demands(p, lib, d)?;
    Ok(Plan::new(p)?.deliver(lib, d))
}

/// Rebuilds the file requested by `user` from its cache and the transcript.
pub fn decode(
    p: &PdaArray,
    user: usize,
    cache: &UserCache,
    lib: &Library,
    transcript: &Transcript,
    d: &DemandVector,
) -> Result<Vec<u8>> {
    let want = d.as_slice()[user];
    let size = lib.packet_size();
    let mut out = Vec::with_capacity(lib.file_bytes());
    for j in 0..p.f() {
        match p.entry(j, user) {
            Entry::Star => {
                let packet = cache.get(lib, want, j).ok_or_else(|| {
                    Error::Integrity(format!("user {user} should cache packet {j} but does not"))
                })?;
                out.extend_from_slice(packet);
            }
            Entry::Symbol(label) => {
                let signal = transcript
                    .position(label)
                    .map(|i| &transcript.signals[i])
                    .ok_or_else(|| Error::Integrity(format!("no signal for label {label}")))?;
                if signal.payload.len() != size {
                    return Err(Error::Integrity(format!("signal {label} has the wrong length")));
                }
                let mut packet = signal.payload.clone();
                for &(j2, k2) in &signal.cells {
                    if k2 == user {
                        continue;
                    }
                    let other = cache.get(lib, d.as_slice()[k2], j2).ok_or_else(|| {
                        Error::Integrity(format!(
                            "user {user} lacks packet {j2} of file {} needed for signal {label}",
                            d.as_slice()[k2]
                        ))
                    })?;
                    xor_into(&mut packet, other);
                }
                out.extend_from_slice(&packet);
            }
        }
    }
    Ok(out)
}

/// Users that fail to recover some missing packet. Each signal's packets are
/// read once; a receiving user must cache every other packet of the signal,
/// and the XOR of those comes from shared prefix and suffix sums. The result
/// is compared with the library. Cached packets come from the library
/// itself, so only signal-decoded packets can go wrong.
fn check_signals(placement: &Placement, lib: &Library, transcript: &Transcript, d: &DemandVector) -> Vec<usize> {
    let demands = d.as_slice();
    let size = lib.packet_size();
    let mut failed = Vec::new();
    let mut prefix: Vec<u8> = Vec::new();
    let mut suffix: Vec<u8> = Vec::new();
    let mut packet = vec![0u8; size];
    for signal in &transcript.signals {
        let g = signal.cells.len();
        let packets: Vec<&[u8]> = signal.cells.iter().map(|&(j, k)| lib.packet(demands[k], j)).collect();
        // prefix[i] = XOR of packets[..i], suffix[i] = XOR of packets[i..].
        prefix.clear();
        prefix.resize((g + 1) * size, 0);
        suffix.clear();
        suffix.resize((g + 1) * size, 0);
        for i in 0..g {
            let (done, next) = prefix.split_at_mut((i + 1) * size);
            next[..size].copy_from_slice(&done[i * size..]);
            xor_into(&mut next[..size], packets[i]);
            let r = g - 1 - i;
            let (head, tail) = suffix.split_at_mut((r + 1) * size);
            head[r * size..].copy_from_slice(&tail[..size]);
            xor_into(&mut head[r * size..], packets[r]);
        }
        for (i, &(j, k)) in signal.cells.iter().enumerate() {
            let cache = placement.cache(k);
            let has_others = signal
                .cells
                .iter()
                .enumerate()
                .all(|(i2, &(j2, k2))| i2 == i || cache.contains(demands[k2], j2));
            packet.copy_from_slice(&signal.payload);
            xor_into(&mut packet, &prefix[i * size..(i + 1) * size]);
            xor_into(&mut packet, &suffix[(i + 1) * size..(i + 2) * size]);
            if !has_others || packet != lib.packet(demands[k], j) {
                failed.push(k);
            }
        }
    }
    failed
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum DemandPolicy {
    #[default]
    Random,
    RoundRobin,
}

#[derive(Clone, Debug)]
pub struct RoundtripConfig {
    pub files: usize,
    pub demands: usize,
    pub policy: DemandPolicy,
    pub packet_size: usize,
    pub seed: u64,
}

impl RoundtripConfig {
    /// `K + 1` files, 64-byte packets, random demands.
    pub fn for_array(p: &PdaArray, demands: usize, seed: u64) -> Self {
        Self {
            files: p.k() + 1,
            demands,
            policy: DemandPolicy::Random,
            packet_size: DEFAULT_PACKET_SIZE,
            seed,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RoundtripReport {
    pub decoded_ok: bool,
    pub demands_run: usize,
    pub users: usize,
    /// Bytes sent per delivery; identical for every demand vector.
    pub bytes_sent: usize,
    pub file_bytes: usize,
    pub measured_rate: BigRational,
    pub measured_memory_fraction: BigRational,
    /// First failures as `(demand index, user)` pairs.
    pub failures: Vec<(usize, usize)>,
}

impl RoundtripReport {
    pub fn to_json(&self) -> Value {
        serde_json::json!({
            "decoded_ok": self.decoded_ok,
            "demands_run": self.demands_run,
            "users": self.users,
            "bytes_sent": self.bytes_sent,
            "file_bytes": self.file_bytes,
            "measured_R": self.measured_rate.to_string(),
            "measured_M_over_N": self.measured_memory_fraction.to_string(),
        })
    }
}

/// Demand vectors drawn for a run, in order.
pub fn demand_sequence(users: usize, cfg: &RoundtripConfig) -> Result<Vec<DemandVector>> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    rng.set_stream(1);
    (0..cfg.demands)
        .map(|i| match cfg.policy {
            DemandPolicy::Random => DemandVector::random(users, cfg.files, &mut rng),
            DemandPolicy::RoundRobin => DemandVector::round_robin(users, cfg.files, i),
        })
        .collect()
}

/// Places, delivers and decodes for each demand vector and byte-compares
/// every user's result with the library.
pub fn run_roundtrip(p: &PdaArray, cfg: &RoundtripConfig) -> Result<RoundtripReport> {
    if p.k() == 0 || cfg.demands == 0 {
        return Err(Error::Parameter("round trip needs at least one user and one demand".into()));
    }
    let lib = Library::random(cfg.files, p.f(), cfg.packet_size, cfg.seed)?;
    let placement = place(p, &lib)?;
    let plan = Plan::new(p)?;
    let demands = demand_sequence(p.k(), cfg)?;

    let outcomes: Vec<(usize, Vec<usize>)> = demands
        .par_iter()
        .map(|d| {
            let transcript = plan.deliver(&lib, d);
            let mut failed = check_signals(&placement, &lib, &transcript, d);
            failed.sort_unstable();
            failed.dedup();
            (transcript.bytes_sent(), failed)
        })
        .collect();

    let bytes_sent = outcomes[0].0;
    if outcomes.iter().any(|(b, _)| *b != bytes_sent) {
        return Err(Error::Integrity("transmitted volume varies between demands".into()));
    }
    let failures: Vec<(usize, usize)> = outcomes
        .iter()
        .enumerate()
        .flat_map(|(i, (_, f))| f.iter().map(move |&k| (i, k)))
        .take(16)
        .collect();
    let cached = placement.cache(0).rows().len();
    Ok(RoundtripReport {
        decoded_ok: failures.is_empty(),
        demands_run: demands.len(),
        users: p.k(),
        bytes_sent,
        file_bytes: lib.file_bytes(),
        measured_rate: ratio(bytes_sent as u64, lib.file_bytes() as u64),
        measured_memory_fraction: ratio(cached as u64, p.f() as u64),
        failures,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construct::generate_theorem2;
    use crate::qvec::{CellCap, QVec};

    fn example2() -> PdaArray {
        generate_theorem2(3, 2, CellCap::DEFAULT).unwrap().pda
    }

    #[test]
    fn placement_follows_stars() {
        let p = example2();
        let lib = Library::random(9, 8, 16, 1).unwrap();
        let placement = place(&p, &lib).unwrap();
        for cache in placement.caches() {
            assert_eq!(cache.rows().len(), 5);
            assert_eq!(cache.packet_count(), 5 * 9);
        }
        let wrong = Library::random(9, 7, 16, 1).unwrap();
        assert!(matches!(place(&p, &wrong), Err(Error::InvalidInput(_))));
    }

    #[test]
    fn distinct_demands_decode() {
        let p = example2();
        let lib = Library::random(8, 8, 64, 7).unwrap();
        let placement = place(&p, &lib).unwrap();
        let d = DemandVector::new((0..8).collect(), 8).unwrap();
        let t = deliver(&p, &lib, &d).unwrap();
        assert_eq!(t.signals.len(), 6);
        assert_eq!(t.bytes_sent(), 6 * 64);
        for k in 0..8 {
            let got = decode(&p, k, placement.cache(k), &lib, &t, &d).unwrap();
            assert_eq!(got, lib.file(k));
        }
    }

    #[test]
    fn equal_demands_decode() {
        let p = example2();
        let lib = Library::random(3, 8, 8, 2).unwrap();
        let placement = place(&p, &lib).unwrap();
        let d = DemandVector::new(vec![2; 8], 3).unwrap();
        let t = deliver(&p, &lib, &d).unwrap();
        for k in 0..8 {
            assert_eq!(decode(&p, k, placement.cache(k), &lib, &t, &d).unwrap(), lib.file(2));
        }
    }

    #[test]
    fn corrupted_signal_is_detected() {
        let p = example2();
        let lib = Library::random(8, 8, 32, 3).unwrap();
        let placement = place(&p, &lib).unwrap();
        let d = DemandVector::new((0..8).collect(), 8).unwrap();
        let mut t = deliver(&p, &lib, &d).unwrap();
        t.signals[0].payload[0] ^= 1;
        let bad = (0..8)
            .filter(|&k| decode(&p, k, placement.cache(k), &lib, &t, &d).unwrap() != lib.file(k))
            .count();
        assert!(bad >= 1);
    }

    #[test]
    fn single_cell_signal_is_the_packet() {
        let v = |s: &str| QVec::parse(2, s).unwrap();
        let p = PdaArray::new(
            2,
            1,
            1,
            vec![v("0")],
            vec![v("0")],
            vec![Entry::Symbol(Label::new(v("1"), 0))],
        )
        .unwrap();
        let lib = Library::random(2, 1, 8, 5).unwrap();
        let d = DemandVector::new(vec![1], 2).unwrap();
        let t = deliver(&p, &lib, &d).unwrap();
        assert_eq!(t.signals[0].payload, lib.packet(1, 0));
    }

    #[test]
    fn roundtrip_accounting() {
        let p = example2();
        let report = run_roundtrip(&p, &RoundtripConfig::for_array(&p, 20, 11)).unwrap();
        assert!(report.decoded_ok);
        assert_eq!(report.measured_rate, ratio(6, 8));
        assert_eq!(report.measured_memory_fraction, ratio(5, 8));
        assert_eq!(report.bytes_sent, 6 * 64);
    }

    #[test]
    fn transcript_json_is_stable() {
        let p = example2();
        let lib = Library::random(8, 8, 64, 9).unwrap();
        let d = DemandVector::round_robin(8, 8, 0).unwrap();
        let a = deliver(&p, &lib, &d).unwrap().to_json();
        let b = deliver(&p, &lib, &d).unwrap().to_json();
        assert_eq!(a, b);
        let first = &a[0];
        assert_eq!(first["label"], "110:0");
        assert_eq!(first["byte_len"], 64);
        assert_eq!(first["digest"].as_str().unwrap().len(), 64);
    }

    #[test]
    fn batch_check_agrees_with_decode() {
        let p = generate_theorem2(4, 1, CellCap::DEFAULT).unwrap().pda;
        let lib = Library::random(17, 16, 16, 4).unwrap();
        let placement = place(&p, &lib).unwrap();
        let d = DemandVector::round_robin(16, 17, 3).unwrap();
        let mut t = deliver(&p, &lib, &d).unwrap();
        assert!(check_signals(&placement, &lib, &t, &d).is_empty());
        t.signals[5].payload[3] ^= 0x40;
        let mut batch = check_signals(&placement, &lib, &t, &d);
        batch.sort_unstable();
        batch.dedup();
        let single: Vec<usize> = (0..16)
            .filter(|&k| decode(&p, k, placement.cache(k), &lib, &t, &d).unwrap() != lib.file(d.as_slice()[k]))
            .collect();
        assert!(!single.is_empty());
        assert_eq!(batch, single);
    }

    #[test]
    fn empty_demands_rejected() {
        assert!(DemandVector::new(vec![], 3).is_err());
        assert!(DemandVector::new(vec![3], 3).is_err());
    }
}
