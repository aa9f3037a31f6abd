//! Refinable partition with constant-time dirty marking and k-way splits
//! whose cost is proportional to the number of dirty states only.
//!
//! States live in a permutation array `loc2state`; every block is a
//! contiguous range `[start, end)` of it, with clean states in
//! `[start, mid)` and dirty states in `[mid, end)`.

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Block {
    start: u32,
    mid: u32,
    end: u32,
}

#[derive(Debug, Clone)]
pub struct RefinablePartition {
    loc2state: Vec<u32>,
    state2loc: Vec<u32>,
    blocks: Vec<Block>,
    block_of: Vec<u32>,
    worklist: Vec<u32>,
    // instrumentation
    moves: Vec<u32>,
    max_moves: u32,
    mark_dirty_calls: u64,
}

impl RefinablePartition {
    /// One block containing all of `0..n`, every state dirty.
    pub fn new(n: usize) -> RefinablePartition {
        assert!(n >= 1, "partition requires at least one state");
        let n32 = u32::try_from(n).expect("state count exceeds u32");
        RefinablePartition {
            loc2state: (0..n32).collect(),
            state2loc: (0..n32).collect(),
            blocks: vec![Block {
                start: 0,
                mid: 0,
                end: n32,
            }],
            block_of: vec![0; n],
            worklist: vec![0],
            moves: vec![0; n],
            max_moves: 0,
            mark_dirty_calls: n as u64,
        }
    }

    pub fn num_states(&self) -> usize {
        self.loc2state.len()
    }

    pub fn num_blocks(&self) -> usize {
        self.blocks.len()
    }

    pub fn block_of(&self, state: u32) -> u32 {
        self.block_of[state as usize]
    }

    /// Current state -> block-id map, usable directly as the partition `p`
    /// handed to signature computations.
    pub fn assignment(&self) -> &[u32] {
        &self.block_of
    }

    /// All states of block `b`, clean states first.
    pub fn states_of(&self, b: u32) -> &[u32] {
        let blk = self.blocks[b as usize];
        &self.loc2state[blk.start as usize..blk.end as usize]
    }

    /// The dirty states of block `b`, in location order.
    pub fn dirty_states(&self, b: u32) -> &[u32] {
        let blk = self.blocks[b as usize];
        &self.loc2state[blk.mid as usize..blk.end as usize]
    }

    /// One arbitrary clean state of block `b` (the one at `start`).
    pub fn one_clean(&self, b: u32) -> Option<u32> {
        let blk = self.blocks[b as usize];
        if blk.start == blk.mid {
            None
        } else {
            Some(self.loc2state[blk.start as usize])
        }
    }

    /// Remove and return some block with at least one dirty state.
    pub fn pop_worklist(&mut self) -> Option<u32> {
        self.worklist.pop()
    }

    /// Mark `s` dirty; no-op if it already is. O(1).
    pub fn mark_dirty(&mut self, s: u32) {
        self.mark_dirty_calls += 1;
        let b = self.block_of[s as usize];
        let j = self.state2loc[s as usize];
        let blk = self.blocks[b as usize];
        // Do nothing if already dirty
        if blk.mid <= j {
            return;
        }
        // Add to worklist if first dirty state
        if blk.mid == blk.end {
            self.worklist.push(b);
        }
        // Swap s with the last clean state
        let last_clean = self.loc2state[(blk.mid - 1) as usize];
        self.state2loc[last_clean as usize] = j;
        self.state2loc[s as usize] = blk.mid - 1;
        self.loc2state[j as usize] = last_clean;
        self.loc2state[(blk.mid - 1) as usize] = s;
        self.blocks[b as usize].mid -= 1;
    }

    /// Split block `b`: the i-th dirty state joins sub-block `a[i]`, clean
    /// states join sub-block 0. The largest sub-block keeps the id `b`
    /// (ties: sub-block 0, else lowest number); every other non-empty
    /// sub-block gets a fresh id, returned in ascending sub-block order.
    /// All states of `b` end up clean. Runs in O(|dirty|).
    pub fn split(&mut self, b: u32, a: &[u32]) -> Vec<u32> {
        let blk = self.blocks[b as usize];
        let (start, mid, end) = (blk.start, blk.mid, blk.end);
        let dirty_count = (end - mid) as usize;
        assert_eq!(
            a.len(),
            dirty_count,
            "split: sub-block array length {} does not match dirty count {}",
            a.len(),
            dirty_count
        );

        let max_val = a.iter().copied().max().unwrap_or(0) as usize;
        // cumulative counts of sub-block sizes
        let mut d: Vec<u32> = vec![0; max_val + 2];
        d[0] = mid - start;
        for &v in a {
            d[v as usize] += 1;
        }
        let mut i_max = 0usize;
        for i in 1..=max_val {
            if d[i] > d[i_max] {
                i_max = i;
            }
        }
        for i in 1..=max_val {
            d[i] += d[i - 1];
        }

        // re-order the dirty slice by sub-block
        let dirty: Vec<u32> = self.loc2state[mid as usize..end as usize].to_vec();
        for i in (0..a.len()).rev() {
            let v = a[i] as usize;
            d[v] -= 1;
            let j = start + d[v];
            self.loc2state[j as usize] = dirty[i];
            self.state2loc[dirty[i] as usize] = j;
        }
        d[0] -= mid - start;
        // d[i] is now the relative start of sub-block i
        d[max_val + 1] = end - start;

        let mut new_ids = Vec::new();
        for i in 0..=max_val {
            let j0 = start + d[i];
            let j1 = start + d[i + 1];
            if j0 == j1 {
                continue; // empty sub-block, no block allocated
            }
            if i == i_max {
                // mid = end: no dirty states left
                self.blocks[b as usize] = Block {
                    start: j0,
                    mid: j1,
                    end: j1,
                };
            } else {
                self.blocks.push(Block {
                    start: j0,
                    mid: j1,
                    end: j1,
                });
                let id = (self.blocks.len() - 1) as u32;
                new_ids.push(id);
                for loc in j0..j1 {
                    let s = self.loc2state[loc as usize] as usize;
                    self.block_of[s] = id;
                    self.moves[s] += 1;
                    if self.moves[s] > self.max_moves {
                        self.max_moves = self.moves[s];
                    }
                }
            }
        }
        new_ids
    }

    /// Number of `mark_dirty` invocations so far, counting the initial
    /// all-dirty setup as one per state.
    pub fn mark_dirty_calls(&self) -> u64 {
        self.mark_dirty_calls
    }

    /// Maximum over all states of the number of block-id changes.
    pub fn max_block_moves(&self) -> u32 {
        self.max_moves
    }

    /// One line per block: `id start mid end  states...`.
    pub fn dump(&self) -> String {
        use std::fmt::Write;
        let mut out = String::new();
        for (id, blk) in self.blocks.iter().enumerate() {
            write!(out, "{} {} {} {} ", id, blk.start, blk.mid, blk.end).unwrap();
            let members = &self.loc2state[blk.start as usize..blk.end as usize];
            let list: Vec<String> = members.iter().map(|s| s.to_string()).collect();
            writeln!(out, " {}", list.join(" ")).unwrap();
        }
        out
    }

    /// Full structural invariant check; panics with a description on
    /// violation. O(n + blocks), intended for tests and debugging.
    pub fn audit(&self) {
        let n = self.num_states();
        // mutually inverse permutations
        for s in 0..n {
            let loc = self.state2loc[s] as usize;
            assert!(loc < n, "state2loc[{s}] out of range");
            assert_eq!(
                self.loc2state[loc] as usize, s,
                "loc2state/state2loc not inverse at state {s}"
            );
        }
        // blocks: disjoint, cover 0..n, ordered fields
        let mut covered = vec![false; n];
        for (id, blk) in self.blocks.iter().enumerate() {
            assert!(
                blk.start <= blk.mid && blk.mid <= blk.end,
                "block {id} has unordered boundaries"
            );
            for loc in blk.start..blk.end {
                assert!(
                    !covered[loc as usize],
                    "location {loc} covered by two blocks"
                );
                covered[loc as usize] = true;
                let s = self.loc2state[loc as usize];
                assert_eq!(
                    self.block_of[s as usize] as usize, id,
                    "block_of[{s}] disagrees with containing range"
                );
            }
        }
        assert!(covered.iter().all(|&c| c), "blocks do not cover all states");
        // worklist: exactly the blocks with a dirty state, no duplicates
        let mut seen = vec![false; self.blocks.len()];
        for &b in &self.worklist {
            assert!(!seen[b as usize], "duplicate worklist entry {b}");
            seen[b as usize] = true;
            let blk = self.blocks[b as usize];
            assert!(blk.mid < blk.end, "worklist block {b} has no dirty states");
        }
        for (id, blk) in self.blocks.iter().enumerate() {
            if blk.mid < blk.end {
                assert!(seen[id], "block {id} has dirty states but is not on worklist");
            }
        }
    }
}
