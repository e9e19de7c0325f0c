use crate::block_filter::{BlockFilter, FilterError};

/// Which side of an adjacency the smaller occurrence set belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    /// The smaller set holds the earlier subpattern; mark forward.
    Forward,
    /// The smaller set holds the later subpattern; mark backward.
    Backward,
}

impl Direction {
    fn opposite(self) -> Self {
        match self {
            Direction::Forward => Direction::Backward,
            Direction::Backward => Direction::Forward,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FilterOutcome {
    pub small: Vec<u64>,
    pub large: Vec<u64>,
    pub second_round: bool,
}

fn mark(filter: &mut BlockFilter, dir: Direction, positions: &[u64], min: u64, max: u64) {
    match dir {
        Direction::Forward => filter.mark_forward(positions, min, max),
        Direction::Backward => filter.mark_backward(positions, min, max),
    }
}

/// Prunes `large` through a filter marked from `small`; when fewer than
/// half of `small`'s size survive, marks back from the survivors and
/// prunes `small` as well. Returns whether the second round ran.
///
/// `filter` must start cleared; it is left dirty.
pub(crate) fn filter_pair_with(
    filter: &mut BlockFilter,
    small: &mut Vec<u64>,
    large: &mut Vec<u64>,
    dir: Direction,
    min: u64,
    max: u64,
) -> bool {
    mark(filter, dir, small, min, max);
    filter.retain(large);
    if large.len() * 2 < small.len() {
        filter.clear();
        mark(filter, dir.opposite(), large, min, max);
        filter.retain(small);
        true
    } else {
        false
    }
}

/// Block-filters a pair of occurrence sets over a text of `n` positions.
pub fn filter_pair(
    pos_small: &[u64],
    pos_large: &[u64],
    direction: Direction,
    min: u64,
    max: u64,
    n: u64,
    block_size: u64,
) -> Result<FilterOutcome, FilterError> {
    let mut filter = BlockFilter::new(n, block_size)?;
    let mut small = pos_small.to_vec();
    let mut large = pos_large.to_vec();
    let second_round = filter_pair_with(&mut filter, &mut small, &mut large, direction, min, max);
    Ok(FilterOutcome {
        small,
        large,
        second_round,
    })
}
