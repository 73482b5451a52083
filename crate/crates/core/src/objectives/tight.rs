//! Worst-case instance for the single-pass repair heuristic.
//!
//! Over a universe of `n = 2^k` points, the family contains:
//!
//! * a chain `S_1, S_2, …, S_k` of disjoint blocks, where `S_i` holds
//!   the next `n / 2^i` points (`S_1` the first half, `S_2` the next
//!   quarter, …), leaving only the last point outside the chain;
//! * for every chain block, refinements `S_{j,1}, S_{j,2}, …` that
//!   subdivide `S_j` the same way;
//! * two copies each of the odd points (`S_a`, `S_a'`) and the even
//!   points (`S_b`, `S_b'`).
//!
//! The duplicated odd/even sets form a `(1, 0)`-robust cover of size 4,
//! independent of `k`. The chain is listed first, so a smallest-id
//! tie-break steers a greedy base cover onto the chain and the repair
//! pass must then patch every fragile block — the gap to the optimum
//! grows with `k` while the optimum stays fixed.

use std::collections::BTreeSet;

use crate::error::Error;
use crate::objectives::set_cover::SetCoverInstance;

/// Build the nested instance for universe size `2^k` (`k ≥ 2`).
pub fn tight_instance(k: u32) -> Result<SetCoverInstance, Error> {
    if !(2..=20).contains(&k) {
        return Err(Error::invalid("k", format!("{k} not in 2..=20")));
    }
    let n: usize = 1 << k;
    let mut family: Vec<BTreeSet<usize>> = Vec::new();
    let mut labels: Vec<String> = Vec::new();

    // Chain blocks S_1..S_k: consecutive runs of n/2, n/4, …, 1 points.
    let mut chain: Vec<(usize, usize)> = Vec::new(); // (start, size)
    let mut start = 0usize;
    for i in 1..=k {
        let size = n >> i;
        family.push((start..start + size).collect());
        labels.push(format!("S{i}"));
        chain.push((start, size));
        start += size;
    }

    // Refinements of each block: the same halving pattern inside S_j.
    for (j, &(block_start, block_size)) in chain.iter().enumerate() {
        let mut offset = block_start;
        let mut i = 1;
        loop {
            let size = block_size >> i;
            if size == 0 {
                break;
            }
            family.push((offset..offset + size).collect());
            labels.push(format!("S{},{i}", j + 1));
            offset += size;
            i += 1;
        }
    }

    // Duplicated parity covers; listed last so ties prefer the chain.
    let odds: BTreeSet<usize> = (0..n).step_by(2).collect();
    let evens: BTreeSet<usize> = (1..n).step_by(2).collect();
    for (set, label) in [
        (odds.clone(), "Sa"),
        (odds, "Sa'"),
        (evens.clone(), "Sb"),
        (evens, "Sb'"),
    ] {
        family.push(set);
        labels.push(label.to_string());
    }

    SetCoverInstance::new(n, family)?.with_labels(labels)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn k4_layout_matches_the_halving_pattern() {
        let inst = tight_instance(4).unwrap();
        assert_eq!(inst.universe, 16);
        let labels = inst.labels.as_ref().unwrap();
        let by_label = |l: &str| {
            let idx = labels.iter().position(|x| x == l).unwrap();
            inst.family[idx].clone()
        };
        assert_eq!(by_label("S1"), (0..8).collect());
        assert_eq!(by_label("S2"), (8..12).collect());
        assert_eq!(by_label("S3"), (12..14).collect());
        assert_eq!(by_label("S4"), (14..15).collect());
        assert_eq!(by_label("S1,1"), (0..4).collect());
        assert_eq!(by_label("S1,2"), (4..6).collect());
        assert_eq!(by_label("S1,3"), (6..7).collect());
        assert_eq!(by_label("Sa"), (0..16).step_by(2).collect());
        assert_eq!(by_label("Sb"), (1..16).step_by(2).collect());
        assert_eq!(by_label("Sa"), by_label("Sa'"));
        assert_eq!(by_label("Sb"), by_label("Sb'"));
        // 4 chain + (3 + 2 + 1 + 0) refinements + 4 parity sets.
        assert_eq!(inst.family.len(), 14);
        assert!(inst.fully_coverable());
    }

    #[test]
    fn chain_blocks_are_disjoint_and_leave_one_point() {
        for k in [2u32, 5] {
            let inst = tight_instance(k).unwrap();
            let n = inst.universe;
            let chain: Vec<_> = inst.family.iter().take(k as usize).collect();
            let mut seen = BTreeSet::new();
            for block in &chain {
                assert!(seen.is_disjoint(block));
                seen.extend(block.iter().copied());
            }
            assert_eq!(seen.len(), n - 1);
            assert!(!seen.contains(&(n - 1)));
        }
    }

    #[test]
    fn k_domain_is_validated() {
        assert!(tight_instance(1).is_err());
        assert!(tight_instance(21).is_err());
    }
}
