use crate::error::{Error, Result};

/// A sequence of `n` observed states over the alphabet `0..k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SampleSequence {
    states: Vec<usize>,
    k: usize,
}

impl SampleSequence {
    pub fn new(states: Vec<usize>, k: usize) -> Result<Self> {
        if k < 2 {
            return Err(Error::TooFewStates(k));
        }
        if states.is_empty() {
            return Err(Error::SequenceTooShort { len: 0, min: 1 });
        }
        if let Some(&bad) = states.iter().find(|&&s| s >= k) {
            return Err(Error::StateOutOfRange { state: bad, k });
        }
        Ok(SampleSequence { states, k })
    }

    pub(crate) fn new_unchecked(states: Vec<usize>, k: usize) -> Self {
        SampleSequence { states, k }
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn states(&self) -> &[usize] {
        &self.states
    }

    pub fn last(&self) -> usize {
        *self.states.last().expect("sequence is nonempty")
    }
}

/// Transition tallies from a sample sequence: `state_count(i)` is the number
/// of times `i` appears among the first `n-1` positions, and `pair_count(i, j)`
/// the number of times `j` immediately follows `i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransitionCounts {
    occupancy: Vec<u64>,
    pairs: Vec<Vec<u64>>,
}

impl TransitionCounts {
    pub fn k(&self) -> usize {
        self.occupancy.len()
    }

    /// `N_i`: occurrences of `i` in positions `1..n-1` (the positions that
    /// have a successor).
    pub fn state_count(&self, i: usize) -> u64 {
        self.occupancy[i]
    }

    /// `N_ij`: occurrences of the adjacent pair `(i, j)`.
    pub fn pair_count(&self, i: usize, j: usize) -> u64 {
        self.pairs[i][j]
    }

    /// Total transitions, `n - 1`.
    pub fn total(&self) -> u64 {
        self.occupancy.iter().sum()
    }
}

/// Tally adjacent-pair counts. Requires `n >= 2`.
pub fn count_transitions(x: &SampleSequence) -> Result<TransitionCounts> {
    if x.len() < 2 {
        return Err(Error::SequenceTooShort { len: x.len(), min: 2 });
    }
    let k = x.k();
    let mut occupancy = vec![0u64; k];
    let mut pairs = vec![vec![0u64; k]; k];
    for w in x.states().windows(2) {
        occupancy[w[0]] += 1;
        pairs[w[0]][w[1]] += 1;
    }
    Ok(TransitionCounts { occupancy, pairs })
}

/// Drop the first `floor(sqrt(n))` entries so the remainder starts near
/// stationarity. Requires `n >= 4`.
pub fn burn_in(x: &SampleSequence) -> Result<SampleSequence> {
    let n = x.len();
    if n < 4 {
        return Err(Error::SequenceTooShort { len: n, min: 4 });
    }
    let drop = n.isqrt();
    Ok(SampleSequence::new_unchecked(
        x.states()[drop..].to_vec(),
        x.k(),
    ))
}
