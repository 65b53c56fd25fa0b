use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::Rational;
use crate::slopes::SlopeSet;

/// Default bound on the number of words `enumerate_arcs` may produce.
pub const DEFAULT_ARC_CAP: usize = 1 << 16;

/// One arc of the fan: the slope word and the largest value each coordinate
/// takes along the arc.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Arc {
    pub word: Vec<usize>,
    pub maxima: Vec<Rational>,
}

/// Per-coordinate maxima over the arc `{(x_1, …, x_N) : x_{j+1} = ω_{w_j} x_j}` in `[0,1]^N`.
///
/// The first coordinate is capped by `1` and by `1 / P_j` for every prefix
/// product `P_j`; the others follow by multiplying out.
pub fn arc_range(omega: &SlopeSet, word: &[usize]) -> Result<Vec<Rational>> {
    omega.check_word(word)?;
    let mut prefix = vec![Rational::one()];
    for &j in word {
        let next = prefix.last().unwrap() * omega.slope(j);
        prefix.push(next);
    }
    let top = prefix.iter().max().expect("non-empty");
    let x1 = Rational::one().min(top.recip());
    Ok(prefix.iter().map(|p| p * &x1).collect())
}

/// All words of length `depth`, in lexicographic order of slope indices,
/// with their arc maxima.
pub fn enumerate_arcs(omega: &SlopeSet, depth: usize, cap: usize) -> Result<Vec<Arc>> {
    if depth == 0 {
        return Err(Error::Parameter("arc depth must be at least 1".into()));
    }
    let m = omega.len();
    let needed = (m as u128).checked_pow(depth as u32).unwrap_or(u128::MAX);
    if needed > cap as u128 {
        return Err(Error::EnumerationCap {
            cap,
            needed: needed.min(usize::MAX as u128) as usize,
        });
    }
    let mut out = Vec::with_capacity(needed as usize);
    let mut word = vec![0usize; depth];
    loop {
        out.push(Arc {
            maxima: arc_range(omega, &word)?,
            word: word.clone(),
        });
        let mut k = depth;
        loop {
            if k == 0 {
                return Ok(out);
            }
            k -= 1;
            word[k] += 1;
            if word[k] < m {
                break;
            }
            word[k] = 0;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    fn two_line() -> SlopeSet {
        SlopeSet::from_fracs(&[(1, 2), (3, 1)])
    }

    #[test]
    fn maxima_examples() {
        assert_eq!(
            arc_range(&two_line(), &[1, 1]).unwrap(),
            vec![q(1, 9), q(1, 3), q(1, 1)]
        );
        assert_eq!(
            arc_range(&two_line(), &[0]).unwrap(),
            vec![q(1, 1), q(1, 2)]
        );
        assert_eq!(
            arc_range(&two_line(), &[1, 0]).unwrap(),
            vec![q(1, 3), q(1, 1), q(1, 2)]
        );
        assert!(arc_range(&two_line(), &[2]).is_err());
    }

    #[test]
    fn enumeration_counts_and_order() {
        assert_eq!(
            enumerate_arcs(&two_line(), 1, DEFAULT_ARC_CAP)
                .unwrap()
                .len(),
            2
        );
        let arcs = enumerate_arcs(&two_line(), 3, DEFAULT_ARC_CAP).unwrap();
        assert_eq!(arcs.len(), 8);
        assert_eq!(arcs[0].word, vec![0, 0, 0]);
        assert_eq!(arcs[1].word, vec![0, 0, 1]);
        assert_eq!(arcs[7].word, vec![1, 1, 1]);
        assert!(arcs
            .iter()
            .all(|a| a.maxima.iter().all(Rational::is_positive)));
        assert!(matches!(
            enumerate_arcs(&two_line(), 20, 1000),
            Err(Error::EnumerationCap { cap: 1000, .. })
        ));
    }
}
