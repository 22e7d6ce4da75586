use std::collections::BTreeSet;
use std::fmt;

use super::{TrackError, Violation};

/// Closed oriented surface of genus `genus` with `punctures` punctures.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct SurfaceKind {
    pub genus: u32,
    pub punctures: u32,
}

impl SurfaceKind {
    pub fn new(genus: u32, punctures: u32) -> Result<Self, TrackError> {
        let s = SurfaceKind { genus, punctures };
        if s.complexity() < 1 {
            return Err(TrackError::Surface { genus, punctures });
        }
        Ok(s)
    }

    /// 3g - 3 + m, the number of curves in a pants decomposition.
    pub fn complexity(&self) -> i64 {
        3 * self.genus as i64 - 3 + self.punctures as i64
    }

    pub fn euler_characteristic(&self) -> i64 {
        2 - 2 * self.genus as i64 - self.punctures as i64
    }

    /// Dimension of measured lamination space, 6g - 6 + 2m.
    pub fn ml_dimension(&self) -> usize {
        (6 * self.genus as i64 - 6 + 2 * self.punctures as i64) as usize
    }

    /// Number of trigons in a maximal track, 4g - 4 + m.
    pub fn trigon_count(&self) -> usize {
        (4 * self.genus as i64 - 4 + self.punctures as i64) as usize
    }
}

/// The three half-branch positions at a switch. Going counterclockwise
/// around a switch one meets SmallRight, SmallLeft, Large, in that order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Slot {
    Large,
    SmallLeft,
    SmallRight,
}

impl Slot {
    pub const ALL: [Slot; 3] = [Slot::Large, Slot::SmallLeft, Slot::SmallRight];

    pub fn index(self) -> usize {
        match self {
            Slot::Large => 0,
            Slot::SmallLeft => 1,
            Slot::SmallRight => 2,
        }
    }

    pub fn from_index(i: usize) -> Slot {
        Slot::ALL[i]
    }

    pub fn ccw(self) -> Slot {
        match self {
            Slot::SmallRight => Slot::SmallLeft,
            Slot::SmallLeft => Slot::Large,
            Slot::Large => Slot::SmallRight,
        }
    }

    pub fn token(self) -> &'static str {
        match self {
            Slot::Large => "L",
            Slot::SmallLeft => "SL",
            Slot::SmallRight => "SR",
        }
    }

    pub fn from_token(s: &str) -> Option<Slot> {
        match s {
            "L" => Some(Slot::Large),
            "SL" => Some(Slot::SmallLeft),
            "SR" => Some(Slot::SmallRight),
            _ => None,
        }
    }
}

/// A (switch, slot) position.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Port {
    pub switch: usize,
    pub slot: Slot,
}

impl Port {
    pub fn new(switch: usize, slot: Slot) -> Self {
        Port { switch, slot }
    }
}

impl fmt::Display for Port {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.switch, self.slot.token())
    }
}

/// A branch traversed away from one of its ends.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Dart {
    pub branch: usize,
    pub end: u8,
}

impl Dart {
    pub fn new(branch: usize, end: u8) -> Self {
        Dart { branch, end }
    }

    pub fn reverse(self) -> Dart {
        Dart::new(self.branch, self.end ^ 1)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Branch {
    pub ends: [Port; 2],
}

impl Branch {
    pub fn new(a: Port, b: Port) -> Self {
        Branch { ends: [a, b] }
    }

    pub fn is_large(&self) -> bool {
        self.ends[0].slot == Slot::Large && self.ends[1].slot == Slot::Large
    }

    pub fn is_small(&self) -> bool {
        self.ends[0].slot != Slot::Large && self.ends[1].slot != Slot::Large
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TrainTrack {
    surface: SurfaceKind,
    switch_count: usize,
    branches: Vec<Branch>,
    puncture_flags: Vec<Dart>,
}

/// Stable fingerprint of a track's serialized form.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TrackId(pub u64);

impl fmt::Display for TrackId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:016x}", self.0)
    }
}

impl TrainTrack {
    /// Structural constructor: indices must be in range. Invariants are left
    /// to [`TrainTrack::validate`].
    pub fn new(surface: SurfaceKind, switch_count: usize, branches: Vec<Branch>, puncture_flags: Vec<Dart>) -> Result<Self, TrackError> {
        for (i, b) in branches.iter().enumerate() {
            for p in b.ends {
                if p.switch >= switch_count {
                    return Err(TrackError::Structural(format!(
                        "branch {} refers to switch {} but there are {} switches",
                        i, p.switch, switch_count
                    )));
                }
            }
        }
        for d in &puncture_flags {
            if d.branch >= branches.len() || d.end > 1 {
                return Err(TrackError::Structural(format!(
                    "puncture flag {} {} is out of range",
                    d.branch, d.end
                )));
            }
        }
        Ok(TrainTrack {
            surface,
            switch_count,
            branches,
            puncture_flags,
        })
    }

    pub fn surface(&self) -> SurfaceKind {
        self.surface
    }

    pub fn switch_count(&self) -> usize {
        self.switch_count
    }

    pub fn branch_count(&self) -> usize {
        self.branches.len()
    }

    pub fn branches(&self) -> &[Branch] {
        &self.branches
    }

    pub fn branch(&self, i: usize) -> &Branch {
        &self.branches[i]
    }

    pub fn puncture_flags(&self) -> &[Dart] {
        &self.puncture_flags
    }

    pub fn port_of(&self, d: Dart) -> Port {
        self.branches[d.branch].ends[d.end as usize]
    }

    pub fn large_branches(&self) -> Vec<usize> {
        (0..self.branches.len()).filter(|&i| self.branches[i].is_large()).collect()
    }

    pub fn id(&self) -> TrackId {
        // FNV-1a over the canonical text
        let mut h: u64 = 0xcbf29ce484222325;
        for b in super::format::write_track(self).bytes() {
            h ^= b as u64;
            h = h.wrapping_mul(0x100000001b3);
        }
        TrackId(h)
    }

    /// Same track with branch `i` renamed `perm[i]`.
    pub fn relabel_branches(&self, perm: &[usize]) -> TrainTrack {
        let mut branches = self.branches.clone();
        for (i, b) in self.branches.iter().enumerate() {
            branches[perm[i]] = *b;
        }
        let flags = self.puncture_flags.iter().map(|d| Dart::new(perm[d.branch], d.end)).collect();
        TrainTrack {
            surface: self.surface,
            switch_count: self.switch_count,
            branches,
            puncture_flags: flags,
        }
    }

    /// Same track with switch `s` renamed `perm[s]`.
    pub fn relabel_switches(&self, perm: &[usize]) -> TrainTrack {
        let branches = self
            .branches
            .iter()
            .map(|b| {
                Branch::new(
                    Port::new(perm[b.ends[0].switch], b.ends[0].slot),
                    Port::new(perm[b.ends[1].switch], b.ends[1].slot),
                )
            })
            .collect();
        TrainTrack {
            surface: self.surface,
            switch_count: self.switch_count,
            branches,
            puncture_flags: self.puncture_flags.clone(),
        }
    }

    /// Same track with the ends of branch `i` swapped where `flip[i]`.
    pub fn flip_branches(&self, flip: &[bool]) -> TrainTrack {
        let branches = self
            .branches
            .iter()
            .zip(flip)
            .map(|(b, &f)| if f { Branch::new(b.ends[1], b.ends[0]) } else { *b })
            .collect();
        let flags = self
            .puncture_flags
            .iter()
            .map(|d| if flip[d.branch] { d.reverse() } else { *d })
            .collect();
        TrainTrack {
            surface: self.surface,
            switch_count: self.switch_count,
            branches,
            puncture_flags: flags,
        }
    }

    /// Which dart sits at each port, or the list of slot violations.
    pub fn ports(&self) -> Result<PortTable, Vec<Violation>> {
        let mut table: Vec<[Vec<Dart>; 3]> = vec![Default::default(); self.switch_count];
        for (i, b) in self.branches.iter().enumerate() {
            for (k, p) in b.ends.iter().enumerate() {
                table[p.switch][p.slot.index()].push(Dart::new(i, k as u8));
            }
        }
        let mut violations = Vec::new();
        for (s, slots) in table.iter().enumerate() {
            if slots[Slot::Large.index()].len() != 1 {
                violations.push(Violation::LargeSlot {
                    switch: s,
                    count: slots[Slot::Large.index()].len(),
                });
            }
            for slot in [Slot::SmallLeft, Slot::SmallRight] {
                if slots[slot.index()].len() != 1 {
                    violations.push(Violation::SlotOccupancy {
                        switch: s,
                        slot,
                        count: slots[slot.index()].len(),
                    });
                }
            }
        }
        if !violations.is_empty() {
            return Err(violations);
        }
        Ok(PortTable {
            darts: table.into_iter().map(|s| [s[0][0], s[1][0], s[2][0]]).collect(),
        })
    }

    pub fn is_connected(&self) -> bool {
        if self.switch_count == 0 {
            return true;
        }
        let mut adj = vec![Vec::new(); self.switch_count];
        for b in &self.branches {
            adj[b.ends[0].switch].push(b.ends[1].switch);
            adj[b.ends[1].switch].push(b.ends[0].switch);
        }
        let mut seen = vec![false; self.switch_count];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(u) = stack.pop() {
            for &w in &adj[u] {
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        seen.into_iter().all(|x| x)
    }

    /// Recompute the complementary regions by walking corners.
    pub fn census(&self) -> Result<Vec<Region>, TrackError> {
        let ports = self.ports().map_err(|v| TrackError::Invalid(ValidationReport { violations: v }))?;
        Ok(self.regions_with(&ports))
    }

    fn regions_with(&self, ports: &PortTable) -> Vec<Region> {
        let flags: BTreeSet<Dart> = self.puncture_flags.iter().copied().collect();
        let n = self.branches.len();
        let mut seen = vec![[false; 2]; n];
        let mut regions = Vec::new();
        for b in 0..n {
            for e in 0..2u8 {
                if seen[b][e as usize] {
                    continue;
                }
                let mut darts = Vec::new();
                let mut cusp_after = Vec::new();
                let mut d = Dart::new(b, e);
                while !seen[d.branch][d.end as usize] {
                    seen[d.branch][d.end as usize] = true;
                    darts.push(d);
                    let arrive = self.port_of(d.reverse());
                    cusp_after.push(arrive.slot == Slot::SmallRight);
                    d = ports.dart_at(Port::new(arrive.switch, arrive.slot.ccw()));
                }
                let cusps = cusp_after.iter().filter(|&&c| c).count();
                let punctured = darts.iter().filter(|d| flags.contains(d)).count();
                regions.push(Region {
                    darts,
                    cusp_after,
                    cusps,
                    puncture_flags: punctured,
                });
            }
        }
        regions
    }

    pub fn validate(&self) -> ValidationReport {
        let mut violations = Vec::new();
        if self.surface.complexity() < 1 {
            violations.push(Violation::Surface);
        }
        let ports = match self.ports() {
            Ok(p) => Some(p),
            Err(v) => {
                violations.extend(v);
                None
            }
        };
        if !self.is_connected() {
            violations.push(Violation::Disconnected);
        }
        if let Some(ports) = ports {
            let regions = self.regions_with(&ports);
            let mut monogons = 0;
            let mut trigons = 0;
            let mut total_cusps = 0;
            for (i, r) in regions.iter().enumerate() {
                total_cusps += r.cusps;
                match r.kind() {
                    Some(RegionKind::Trigon) => trigons += 1,
                    Some(RegionKind::PuncturedMonogon) => monogons += 1,
                    None => violations.push(Violation::RegionKind {
                        region: i,
                        cusps: r.cusps,
                        punctures: r.puncture_flags,
                    }),
                }
            }
            if monogons != self.surface.punctures as usize {
                violations.push(Violation::PunctureCount {
                    expected: self.surface.punctures as usize,
                    found: monogons,
                });
            }
            if total_cusps != self.switch_count {
                violations.push(Violation::CuspCount {
                    cusps: total_cusps,
                    switches: self.switch_count,
                });
            }
            let chi = self.switch_count as i64 - self.branches.len() as i64 + trigons as i64;
            if chi != self.surface.euler_characteristic() {
                violations.push(Violation::EulerCharacteristic {
                    expected: self.surface.euler_characteristic(),
                    found: chi,
                });
            }
        }
        ValidationReport { violations }
    }

    /// Census of a track that must be valid.
    pub fn checked_census(&self) -> Result<Vec<Region>, TrackError> {
        let report = self.validate();
        if !report.is_valid() {
            return Err(TrackError::Invalid(report));
        }
        self.census()
    }
}

/// Dart occupying each (switch, slot) of a well-formed track.
#[derive(Clone, Debug)]
pub struct PortTable {
    darts: Vec<[Dart; 3]>,
}

impl PortTable {
    pub fn dart_at(&self, p: Port) -> Dart {
        self.darts[p.switch][p.slot.index()]
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RegionKind {
    Trigon,
    PuncturedMonogon,
}

/// A complementary region, recorded as the cyclic list of darts along its
/// boundary. `cusp_after[i]` marks a cusp between `darts[i]` and `darts[i+1]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Region {
    pub darts: Vec<Dart>,
    pub cusp_after: Vec<bool>,
    pub cusps: usize,
    pub puncture_flags: usize,
}

impl Region {
    pub fn kind(&self) -> Option<RegionKind> {
        match (self.cusps, self.puncture_flags) {
            (3, 0) => Some(RegionKind::Trigon),
            (1, 1) => Some(RegionKind::PuncturedMonogon),
            _ => None,
        }
    }

    /// Branch lists of the sides between consecutive cusps, with multiplicity.
    pub fn sides(&self) -> Vec<Vec<usize>> {
        let n = self.darts.len();
        let Some(first) = self.cusp_after.iter().position(|&c| c) else {
            return vec![self.darts.iter().map(|d| d.branch).collect()];
        };
        let mut sides = Vec::new();
        let mut cur = Vec::new();
        for k in 1..=n {
            let i = (first + k) % n;
            cur.push(self.darts[i].branch);
            if self.cusp_after[i] {
                sides.push(std::mem::take(&mut cur));
            }
        }
        sides
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.violations.is_empty() {
            return write!(f, "valid");
        }
        for (i, v) in self.violations.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "{}", v)?;
        }
        Ok(())
    }
}
