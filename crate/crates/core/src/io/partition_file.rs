//! Partition files: `blocks <b>` followed by one `<state> <block>` line
//! per state.

use std::fmt::Write as _;

use crate::error::FormatError;
use crate::minimize::PartitionResult;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartitionFile {
    pub block_count: usize,
    pub assignment: Vec<u32>,
}

pub fn write_partition(result: &PartitionResult) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "blocks {}", result.block_count);
    for (state, block) in result.assignment.iter().enumerate() {
        let _ = writeln!(out, "{state} {block}");
    }
    out
}

pub fn parse_partition(text: &str) -> Result<PartitionFile, FormatError> {
    let mut block_count: Option<usize> = None;
    let mut pairs: Vec<(usize, u32, u32)> = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let lineno = lineno + 1;
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if block_count.is_none() {
            let b = line
                .strip_prefix("blocks")
                .and_then(|rest| rest.trim().parse().ok())
                .ok_or_else(|| FormatError::malformed(lineno, "expected 'blocks <count>'"))?;
            block_count = Some(b);
            continue;
        }
        let mut parts = line.split_whitespace();
        let parsed = (|| {
            let state: u32 = parts.next()?.parse().ok()?;
            let block: u32 = parts.next()?.parse().ok()?;
            if parts.next().is_some() {
                return None;
            }
            Some((state, block))
        })();
        let (state, block) = parsed
            .ok_or_else(|| FormatError::malformed(lineno, "expected '<state> <block>'"))?;
        pairs.push((lineno, state, block));
    }
    let block_count =
        block_count.ok_or_else(|| FormatError::malformed(1, "missing 'blocks' header"))?;
    let n = pairs.len();
    let mut assignment: Vec<Option<u32>> = vec![None; n];
    for (lineno, state, block) in pairs {
        if block as usize >= block_count {
            return Err(FormatError::malformed(
                lineno,
                format!("block {block} out of range: header announces {block_count}"),
            ));
        }
        let slot = assignment.get_mut(state as usize).ok_or_else(|| {
            FormatError::malformed(
                lineno,
                format!("state {state} out of range: {n} states are listed"),
            )
        })?;
        if slot.is_some() {
            return Err(FormatError::malformed(
                lineno,
                format!("state {state} listed twice"),
            ));
        }
        *slot = Some(block);
    }
    Ok(PartitionFile {
        block_count,
        assignment: assignment.into_iter().map(|b| b.unwrap()).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::minimize::InstrumentationStats;

    fn result(assignment: Vec<u32>, block_count: usize) -> PartitionResult {
        PartitionResult {
            assignment,
            block_count,
            stats: InstrumentationStats::default(),
        }
    }

    #[test]
    fn dfa_result_layout() {
        let text = write_partition(&result(vec![0, 1, 1, 2, 2], 3));
        assert_eq!(text, "blocks 3\n0 0\n1 1\n2 1\n3 2\n4 2\n");
    }

    #[test]
    fn single_state() {
        assert_eq!(write_partition(&result(vec![0], 1)), "blocks 1\n0 0\n");
    }

    #[test]
    fn roundtrip() {
        let r = result(vec![0, 0, 1, 1, 2], 3);
        let parsed = parse_partition(&write_partition(&r)).unwrap();
        assert_eq!(parsed.assignment, r.assignment);
        assert_eq!(parsed.block_count, 3);
    }

    #[test]
    fn out_of_order_lines_accepted() {
        let parsed = parse_partition("blocks 2\n1 1\n0 0\n").unwrap();
        assert_eq!(parsed.assignment, vec![0, 1]);
    }

    #[test]
    fn errors() {
        assert!(parse_partition("").is_err());
        assert!(parse_partition("blocks 1\n0 5\n").is_err());
        assert!(parse_partition("blocks 1\n0 0\n0 0\n").is_err());
        assert!(parse_partition("blocks 1\n7 0\n").is_err());
    }
}
