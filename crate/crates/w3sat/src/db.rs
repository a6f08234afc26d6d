//! Deduplicating store for clauses of width 1..=3 with insertion-order ids,
//! a per-literal occurrence index, and a per-variable unit index.

use std::collections::HashMap;
use std::fmt;

use serde::Serialize;

use crate::clause::{Clause, Literal};
use crate::trace::Rule;

/// Insertion-order identifier of a stored clause.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct ClauseId(pub u32);

impl ClauseId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for ClauseId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Debug for ClauseId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

/// Hard cap on the number of distinct stored clauses over `n_vars`
/// variables: `8*C(n,3) + 4*C(n,2) + 2*n`, i.e. every canonical clause of
/// width 1, 2, or 3.
pub fn db_bound(n_vars: u64) -> u64 {
    let n = n_vars;
    let c3 = n * n.saturating_sub(1) * n.saturating_sub(2) / 6;
    let c2 = n * n.saturating_sub(1) / 2;
    8 * c3 + 4 * c2 + 2 * n
}

/// Result of an insertion attempt.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Inserted {
    Fresh(ClauseId),
    Duplicate(ClauseId),
}

impl Inserted {
    pub fn id(self) -> ClauseId {
        match self {
            Inserted::Fresh(id) | Inserted::Duplicate(id) => id,
        }
    }

    pub fn is_fresh(self) -> bool {
        matches!(self, Inserted::Fresh(_))
    }
}

/// Variable cap for the database; the occurrence indexes are quadratic in
/// the variable count, so saturation beyond this is out of reach anyway.
pub const MAX_DB_VARS: u32 = 512;

/// Width 1..=3 clauses keyed by canonical form.
pub struct ClauseDb {
    n_vars: u32,
    clauses: Vec<Clause>,
    rules: Vec<Rule>,
    dedup: DedupIndex,
    /// Occurrence lists per literal, in ascending id order.
    lit_index: Vec<Vec<ClauseId>>,
    /// Occurrence lists per ordered literal pair, width-3 clauses only.
    /// A pair bucket holds the clauses containing both literals, which is
    /// what resolution against a width-3 clause needs: a storable resolvent
    /// requires the pivot plus one shared literal.
    pair_index: Vec<Vec<ClauseId>>,
    /// Occurrence lists per literal restricted to widths 1..=2.
    small_lit_index: Vec<Vec<ClauseId>>,
    by_width: [Vec<ClauseId>; 3],
    /// Per variable: ids of the positive and negated unit clause, if stored.
    unit_slots: Vec<[Option<ClauseId>; 2]>,
}

fn lit_slot(l: Literal) -> usize {
    ((l.var() - 1) as usize) * 2 + usize::from(!l.is_positive())
}

const DENSE_DEDUP_MAX_VARS: u32 = 128;
const EMPTY_SLOT: u32 = u32::MAX;

/// Canonical-form lookup: direct-addressed by combinadic rank while the
/// clause universe is small, hashed above that.
enum DedupIndex {
    Dense {
        table: Vec<u32>,
        width2_offset: u64,
        width3_offset: u64,
    },
    Hashed(HashMap<u64, ClauseId, BuildClauseKeyHasher>),
}

impl DedupIndex {
    fn new(n_vars: u32) -> Self {
        if n_vars <= DENSE_DEDUP_MAX_VARS {
            let n = n_vars as u64;
            DedupIndex::Dense {
                table: vec![EMPTY_SLOT; db_bound(n) as usize],
                width2_offset: 2 * n,
                width3_offset: 2 * n + 4 * (n * n.saturating_sub(1) / 2),
            }
        } else {
            DedupIndex::Hashed(HashMap::default())
        }
    }

    fn get(&self, lits: &[Literal]) -> Option<ClauseId> {
        match self {
            DedupIndex::Dense {
                table,
                width2_offset,
                width3_offset,
            } => {
                let slot = table[dense_rank(lits, *width2_offset, *width3_offset)];
                (slot != EMPTY_SLOT).then_some(ClauseId(slot))
            }
            DedupIndex::Hashed(map) => map.get(&packed_key(lits)).copied(),
        }
    }

    fn set(&mut self, lits: &[Literal], id: ClauseId) {
        match self {
            DedupIndex::Dense {
                table,
                width2_offset,
                width3_offset,
            } => {
                table[dense_rank(lits, *width2_offset, *width3_offset)] = id.0;
            }
            DedupIndex::Hashed(map) => {
                map.insert(packed_key(lits), id);
            }
        }
    }
}

/// Rank of a canonical clause in the fixed enumeration of all width-<=3
/// clauses: width-1 first, then width-2, then width-3; within a width the
/// variable set is ranked combinadically and the polarity bits follow.
fn dense_rank(lits: &[Literal], width2_offset: u64, width3_offset: u64) -> usize {
    #[inline]
    fn choose2(k: u64) -> u64 {
        k * k.saturating_sub(1) / 2
    }
    #[inline]
    fn choose3(k: u64) -> u64 {
        k * k.saturating_sub(1) * k.saturating_sub(2) / 6
    }
    let neg = |l: Literal| u64::from(!l.is_positive());
    let rank = match lits {
        [a] => 2 * (a.var() as u64 - 1) + neg(*a),
        [a, b] => {
            let vars = choose2(b.var() as u64 - 1) + (a.var() as u64 - 1);
            width2_offset + vars * 4 + neg(*a) * 2 + neg(*b)
        }
        [a, b, c] => {
            let vars =
                choose3(c.var() as u64 - 1) + choose2(b.var() as u64 - 1) + (a.var() as u64 - 1);
            width3_offset + vars * 8 + neg(*a) * 4 + neg(*b) * 2 + neg(*c)
        }
        _ => unreachable!("database clauses have width 1..=3"),
    };
    rank as usize
}

/// Packs a canonical width-<=3 clause into a u64: literal slots are at most
/// 2n and get 21 bits each.
fn packed_key(lits: &[Literal]) -> u64 {
    let mut key = 0u64;
    for l in lits {
        key = (key << 21) | (lit_slot(*l) as u64 + 1);
    }
    key
}

/// Multiply-xor finalizer; the packed keys are already well distributed.
#[derive(Default, Clone)]
struct ClauseKeyHasher(u64);

impl std::hash::Hasher for ClauseKeyHasher {
    fn finish(&self) -> u64 {
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    fn write(&mut self, _bytes: &[u8]) {
        unreachable!("clause keys hash as u64");
    }

    fn write_u64(&mut self, i: u64) {
        self.0 = i;
    }
}

type BuildClauseKeyHasher = std::hash::BuildHasherDefault<ClauseKeyHasher>;

impl ClauseDb {
    pub fn new(n_vars: u32) -> Self {
        assert!(
            n_vars <= MAX_DB_VARS,
            "clause database supports at most {MAX_DB_VARS} variables"
        );
        let slots = n_vars as usize * 2;
        ClauseDb {
            n_vars,
            clauses: Vec::new(),
            rules: Vec::new(),
            dedup: DedupIndex::new(n_vars),
            lit_index: vec![Vec::new(); slots],
            pair_index: vec![Vec::new(); slots * slots],
            small_lit_index: vec![Vec::new(); slots],
            by_width: [Vec::new(), Vec::new(), Vec::new()],
            unit_slots: vec![[None, None]; n_vars as usize],
        }
    }

    pub fn n_vars(&self) -> u32 {
        self.n_vars
    }

    pub fn len(&self) -> usize {
        self.clauses.len()
    }

    pub fn is_empty(&self) -> bool {
        self.clauses.is_empty()
    }

    pub fn clause(&self, id: ClauseId) -> &Clause {
        &self.clauses[id.index()]
    }

    pub fn rule(&self, id: ClauseId) -> &Rule {
        &self.rules[id.index()]
    }

    pub fn clauses(&self) -> &[Clause] {
        &self.clauses
    }

    pub fn contains(&self, c: &Clause) -> Option<ClauseId> {
        self.dedup.get(c.literals())
    }

    /// Ids of stored clauses containing `lit`, ascending.
    pub fn ids_with_literal(&self, lit: Literal) -> &[ClauseId] {
        &self.lit_index[lit_slot(lit)]
    }

    /// Ids of stored width-3 clauses containing both literals, ascending.
    pub fn ids_with_pair(&self, a: Literal, b: Literal) -> &[ClauseId] {
        let slots = self.n_vars as usize * 2;
        &self.pair_index[lit_slot(a) * slots + lit_slot(b)]
    }

    /// Ids of stored clauses of width 1..=2 containing `lit`, ascending.
    pub fn small_ids_with_literal(&self, lit: Literal) -> &[ClauseId] {
        &self.small_lit_index[lit_slot(lit)]
    }

    pub fn ids_with_width(&self, width: u32) -> &[ClauseId] {
        &self.by_width[(width - 1) as usize]
    }

    /// Id of the stored unit over `var` with the given polarity.
    pub fn unit_id(&self, var: u32, positive: bool) -> Option<ClauseId> {
        self.unit_slots[(var - 1) as usize][usize::from(!positive)]
    }

    /// Inserts a canonical clause of width 1..=3 whose variables fit the
    /// database. Returns the existing id on duplicates.
    pub fn insert(&mut self, clause: Clause, rule: Rule) -> Inserted {
        assert!(
            (1..=3).contains(&clause.width()),
            "clause width {} out of range for the database",
            clause.width()
        );
        assert!(clause.max_var() <= self.n_vars);
        if let Some(id) = self.dedup.get(clause.literals()) {
            return Inserted::Duplicate(id);
        }
        self.insert_fresh(clause, rule)
    }

    /// Duplicate-probes by literal slice first and only materializes the
    /// clause when it is new; the saturation loop discards most resolvents
    /// as duplicates.
    pub(crate) fn insert_lits(&mut self, lits: &[Literal], rule: Rule) -> Inserted {
        if let Some(id) = self.dedup.get(lits) {
            return Inserted::Duplicate(id);
        }
        self.insert_fresh(Clause::from_sorted(lits.to_vec()), rule)
    }

    fn insert_fresh(&mut self, clause: Clause, rule: Rule) -> Inserted {
        let id = ClauseId(self.clauses.len() as u32);
        self.dedup.set(clause.literals(), id);
        let slots = self.n_vars as usize * 2;
        for &l in clause.literals() {
            self.lit_index[lit_slot(l)].push(id);
        }
        if clause.width() == 3 {
            for &a in clause.literals() {
                for &b in clause.literals() {
                    if a != b {
                        self.pair_index[lit_slot(a) * slots + lit_slot(b)].push(id);
                    }
                }
            }
        } else {
            for &l in clause.literals() {
                self.small_lit_index[lit_slot(l)].push(id);
            }
        }
        self.by_width[(clause.width() - 1) as usize].push(id);
        if let Some(l) = clause.unit_literal() {
            self.unit_slots[(l.var() - 1) as usize][usize::from(!l.is_positive())] = Some(id);
        }
        self.clauses.push(clause);
        self.rules.push(rule);
        // Size bound: checked on every insert in debug builds, sampled in
        // release builds.
        debug_assert!(self.clauses.len() as u64 <= db_bound(self.n_vars as u64));
        if cfg!(not(debug_assertions)) && self.clauses.len() % 1024 == 0 {
            assert!(self.clauses.len() as u64 <= db_bound(self.n_vars as u64));
        }
        Inserted::Fresh(id)
    }

    /// If `id` is a unit whose opposite unit is stored, returns
    /// (variable, positive unit id, negated unit id).
    pub fn contradiction_with(&self, id: ClauseId) -> Option<(u32, ClauseId, ClauseId)> {
        let l = self.clause(id).unit_literal()?;
        let other = self.unit_id(l.var(), !l.is_positive())?;
        let (pos, neg) = if l.is_positive() {
            (id, other)
        } else {
            (other, id)
        };
        Some((l.var(), pos, neg))
    }

    /// Scans stored units in id order for a contradicting pair; the
    /// reported pair is the smallest under that order.
    pub fn find_unit_contradiction(&self) -> Option<(u32, ClauseId, ClauseId)> {
        let units = self.ids_with_width(1);
        for (i, &a) in units.iter().enumerate() {
            for &b in &units[i + 1..] {
                let la = self.clause(a).unit_literal().unwrap();
                let lb = self.clause(b).unit_literal().unwrap();
                if la.var() == lb.var() && la.is_positive() != lb.is_positive() {
                    let (pos, neg) = if la.is_positive() { (a, b) } else { (b, a) };
                    return Some((la.var(), pos, neg));
                }
            }
        }
        None
    }
}
