//! Sparse parity-check matrices, their text format and a progressive
//! edge-growth construction.
//!
//! Text format: a header line `rows cols nnz` followed by `nnz` lines
//! `row col` (zero based). Blank lines and lines starting with `#` are
//! ignored.

use std::collections::VecDeque;
use std::fmt::Write as _;
use std::io::{BufRead, BufReader, Read, Write};
use std::path::Path;

use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use crate::rng::{stream, Domain};
use crate::{Error, Result};

/// Binary parity-check matrix stored as adjacency lists.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParityCheck {
    rows: usize,
    cols: usize,
    row_adj: Vec<Vec<u32>>,
    col_adj: Vec<Vec<u32>>,
}

impl ParityCheck {
    /// Builds a matrix from `(row, col)` pairs. Duplicates are rejected.
    pub fn from_edges(rows: usize, cols: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut row_adj = vec![Vec::new(); rows];
        let mut col_adj = vec![Vec::new(); cols];
        for &(r, c) in edges {
            if r >= rows || c >= cols {
                return Err(Error::Parse(format!("entry ({r}, {c}) outside {rows}×{cols}")));
            }
            row_adj[r].push(c as u32);
            col_adj[c].push(r as u32);
        }
        for (r, adj) in row_adj.iter_mut().enumerate() {
            adj.sort_unstable();
            if adj.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::Parse(format!("duplicate entry in row {r}")));
            }
        }
        col_adj.iter_mut().for_each(|a| a.sort_unstable());
        Ok(ParityCheck { rows, cols, row_adj, col_adj })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn nnz(&self) -> usize {
        self.row_adj.iter().map(Vec::len).sum()
    }

    pub fn row(&self, r: usize) -> &[u32] {
        &self.row_adj[r]
    }

    pub fn col(&self, c: usize) -> &[u32] {
        &self.col_adj[c]
    }

    /// Design rate `1 − rows/cols`.
    pub fn design_rate(&self) -> f64 {
        1.0 - self.rows as f64 / self.cols as f64
    }

    /// `H·x` over GF(2).
    pub fn syndrome(&self, word: &[bool]) -> Vec<bool> {
        assert_eq!(word.len(), self.cols, "word length must match code length");
        self.row_adj
            .iter()
            .map(|adj| adj.iter().fold(false, |acc, &c| acc ^ word[c as usize]))
            .collect()
    }

    pub fn write_text<W: Write>(&self, mut out: W) -> Result<()> {
        let mut buf = String::new();
        writeln!(buf, "{} {} {}", self.rows, self.cols, self.nnz()).unwrap();
        for (r, adj) in self.row_adj.iter().enumerate() {
            for c in adj {
                writeln!(buf, "{r} {c}").unwrap();
            }
        }
        out.write_all(buf.as_bytes())?;
        Ok(())
    }

    pub fn read_text<R: Read>(input: R) -> Result<Self> {
        let reader = BufReader::new(input);
        let mut lines = reader
            .lines()
            .map(|l| l.map_err(Error::from))
            .filter(|l| l.as_ref().map_or(true, |s| !s.trim().is_empty() && !s.trim_start().starts_with('#')));
        let header = lines.next().ok_or_else(|| Error::Parse("empty code file".into()))??;
        let nums = parse_numbers(&header, 3)?;
        let (rows, cols, nnz) = (nums[0], nums[1], nums[2]);
        let mut edges = Vec::with_capacity(nnz);
        for line in lines {
            let line = line?;
            let pair = parse_numbers(&line, 2)?;
            edges.push((pair[0], pair[1]));
        }
        if edges.len() != nnz {
            return Err(Error::Parse(format!("header announces {nnz} entries, found {}", edges.len())));
        }
        ParityCheck::from_edges(rows, cols, &edges)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        self.write_text(std::fs::File::create(path)?)
    }

    pub fn load(path: &Path) -> Result<Self> {
        ParityCheck::read_text(std::fs::File::open(path)?)
    }

    pub fn to_text(&self) -> String {
        let mut out = Vec::new();
        self.write_text(&mut out).expect("writing to a Vec cannot fail");
        String::from_utf8(out).expect("ascii")
    }
}

fn parse_numbers(line: &str, expected: usize) -> Result<Vec<usize>> {
    let nums: Vec<usize> = line
        .split_whitespace()
        .map(|t| t.parse::<usize>().map_err(|e| Error::Parse(format!("bad integer {t:?}: {e}"))))
        .collect::<Result<_>>()?;
    if nums.len() != expected {
        return Err(Error::Parse(format!("expected {expected} integers in line {line:?}")));
    }
    Ok(nums)
}

/// Progressive edge growth with a bounded search depth.
///
/// Variable nodes are connected one edge at a time. Each new edge goes to a
/// check node outside the breadth-first neighbourhood of the variable (or, if
/// the neighbourhood covers every check, to one first reached at the deepest
/// level), picking the lowest current degree and breaking ties with the
/// seeded RNG. The search stops after `max_depth` check levels.
pub fn peg_construct(cols: usize, rows: usize, column_weight: usize, seed: u64, max_depth: usize) -> Result<ParityCheck> {
    if rows == 0 || cols == 0 || column_weight == 0 || column_weight > rows {
        return Err(Error::usage(format!(
            "cannot build a {rows}×{cols} code with column weight {column_weight}"
        )));
    }
    let mut rng = stream(seed, Domain::Test, 0x1d9c);
    let mut row_adj: Vec<Vec<u32>> = vec![Vec::new(); rows];
    let mut col_adj: Vec<Vec<u32>> = vec![Vec::new(); cols];
    let mut check_seen = vec![u32::MAX; rows];
    let mut var_seen = vec![u32::MAX; cols];
    let mut stamp = 0u32;
    let mut order: Vec<usize> = (0..rows).collect();

    for v in 0..cols {
        for _ in 0..column_weight {
            stamp += 1;
            // Breadth-first search from v over the current graph.
            let mut frontier: VecDeque<usize> = VecDeque::new();
            let mut reached = 0usize;
            let mut last_level: Vec<usize> = Vec::new();
            var_seen[v] = stamp;
            for &c in &col_adj[v] {
                if check_seen[c as usize] != stamp {
                    check_seen[c as usize] = stamp;
                    reached += 1;
                    frontier.push_back(c as usize);
                    last_level.push(c as usize);
                }
            }
            let mut depth = 1;
            while !frontier.is_empty() && depth < max_depth && reached < rows {
                let mut next = VecDeque::new();
                let mut level = Vec::new();
                while let Some(c) = frontier.pop_front() {
                    for &u in &row_adj[c] {
                        let u = u as usize;
                        if var_seen[u] == stamp {
                            continue;
                        }
                        var_seen[u] = stamp;
                        for &c2 in &col_adj[u] {
                            let c2 = c2 as usize;
                            if check_seen[c2] != stamp {
                                check_seen[c2] = stamp;
                                reached += 1;
                                next.push_back(c2);
                                level.push(c2);
                            }
                        }
                    }
                }
                if level.is_empty() {
                    break;
                }
                frontier = next;
                last_level = level;
                depth += 1;
            }
            let candidates: Vec<usize> = if reached < rows {
                (0..rows).filter(|&c| check_seen[c] != stamp).collect()
            } else {
                last_level
                    .into_iter()
                    .filter(|c| !col_adj[v].contains(&(*c as u32)))
                    .collect()
            };
            let candidates = if candidates.is_empty() {
                (0..rows).filter(|c| !col_adj[v].contains(&(*c as u32))).collect()
            } else {
                candidates
            };
            let min_deg = candidates.iter().map(|&c| row_adj[c].len()).min().unwrap_or(0);
            order.clear();
            order.extend(candidates.into_iter().filter(|&c| row_adj[c].len() == min_deg));
            order.shuffle(&mut rng);
            let c = order[0];
            row_adj[c].push(v as u32);
            col_adj[v].push(c as u32);
        }
    }
    let edges: Vec<(usize, usize)> = row_adj
        .iter()
        .enumerate()
        .flat_map(|(r, adj)| adj.iter().map(move |&c| (r, c as usize)))
        .collect();
    ParityCheck::from_edges(rows, cols, &edges)
}

/// Design rates of the built-in codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum BuiltinRate {
    Half,
    Quarter,
    Tenth,
}

impl BuiltinRate {
    fn rows(self, cols: usize) -> usize {
        match self {
            BuiltinRate::Half => cols / 2,
            BuiltinRate::Quarter => cols * 3 / 4,
            BuiltinRate::Tenth => cols * 9 / 10,
        }
    }

    fn tag(self) -> &'static str {
        match self {
            BuiltinRate::Half => "r1_2",
            BuiltinRate::Quarter => "r1_4",
            BuiltinRate::Tenth => "r1_10",
        }
    }

    fn from_tag(tag: &str) -> Option<Self> {
        match tag {
            "r1_2" => Some(BuiltinRate::Half),
            "r1_4" => Some(BuiltinRate::Quarter),
            "r1_10" => Some(BuiltinRate::Tenth),
            _ => None,
        }
    }
}

/// Column weight of the built-in codes.
pub const BUILTIN_COLUMN_WEIGHT: usize = 3;
/// Seed of the built-in constructions.
pub const BUILTIN_SEED: u64 = 0x0c70_2010;
const BUILTIN_DEPTH: usize = 4;

/// Identifier of a built-in code, e.g. `peg-r1_2-n4096`.
pub fn builtin_id(rate: BuiltinRate, cols: usize) -> String {
    format!("peg-{}-n{cols}", rate.tag())
}

/// Parses a built-in identifier into its rate and length.
pub fn parse_builtin_id(id: &str) -> Option<(BuiltinRate, usize)> {
    let rest = id.strip_prefix("peg-")?;
    let (tag, len) = rest.split_once("-n")?;
    let cols: usize = len.parse().ok()?;
    Some((BuiltinRate::from_tag(tag)?, cols))
}

/// Deterministically constructs a built-in code.
pub fn builtin(rate: BuiltinRate, cols: usize) -> Result<ParityCheck> {
    if cols < 16 || !cols.is_multiple_of(8) {
        return Err(Error::usage(format!("code length {cols} must be a multiple of 8 and >= 16")));
    }
    peg_construct(cols, rate.rows(cols), BUILTIN_COLUMN_WEIGHT, BUILTIN_SEED ^ cols as u64, BUILTIN_DEPTH)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn text_round_trip() {
        let h = builtin(BuiltinRate::Half, 256).unwrap();
        let text = h.to_text();
        assert!(text.starts_with(&format!("128 256 {}\n", h.nnz())));
        let back = ParityCheck::read_text(text.as_bytes()).unwrap();
        assert_eq!(back, h);
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(ParityCheck::read_text("".as_bytes()), Err(Error::Parse(_))));
        assert!(matches!(ParityCheck::read_text("2 2 1\n0 5\n".as_bytes()), Err(Error::Parse(_))));
        assert!(matches!(ParityCheck::read_text("2 2 2\n0 1\n".as_bytes()), Err(Error::Parse(_))));
        assert!(matches!(ParityCheck::read_text("2 2 2\n0 1\n0 1\n".as_bytes()), Err(Error::Parse(_))));
        let ok = ParityCheck::read_text("# comment\n2 3 2\n\n0 1\n1 2\n".as_bytes()).unwrap();
        assert_eq!(ok.syndrome(&[true, true, false]), vec![true, false]);
    }

    #[test]
    fn peg_code_shape() {
        let h = builtin(BuiltinRate::Half, 4096).unwrap();
        assert_eq!(h.rows(), 2048);
        assert_eq!(h.cols(), 4096);
        for c in 0..h.cols() {
            assert_eq!(h.col(c).len(), 3);
        }
        let (min, max) = (0..h.rows()).fold((usize::MAX, 0), |(lo, hi), r| {
            let d = h.row(r).len();
            (lo.min(d), hi.max(d))
        });
        assert!(min >= 5 && max <= 7, "row degrees {min}..{max}");
        assert_eq!(h.design_rate(), 0.5);
    }

    #[test]
    fn peg_avoids_four_cycles() {
        let h = builtin(BuiltinRate::Half, 1024).unwrap();
        let mut seen = std::collections::HashSet::new();
        for r in 0..h.rows() {
            let adj = h.row(r);
            for i in 0..adj.len() {
                for j in i + 1..adj.len() {
                    assert!(seen.insert((adj[i], adj[j])), "4-cycle through columns {} {}", adj[i], adj[j]);
                }
            }
        }
    }

    #[test]
    fn builtin_is_deterministic() {
        assert_eq!(builtin(BuiltinRate::Quarter, 512).unwrap(), builtin(BuiltinRate::Quarter, 512).unwrap());
        let (rate, n) = parse_builtin_id(&builtin_id(BuiltinRate::Tenth, 16384)).unwrap();
        assert_eq!((rate, n), (BuiltinRate::Tenth, 16384));
        assert!(parse_builtin_id("peg-r1_3-n4096").is_none());
    }
}
