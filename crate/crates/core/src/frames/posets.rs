//! Finite posets, the sources of down-set frames.

use std::collections::BTreeSet;

use super::FrameError;

/// A finite poset on the points `0..n`, stored as its full order relation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poset {
    names: Vec<String>,
    leq: Vec<Vec<bool>>,
}

impl Poset {
    /// Build from covering pairs `(lower, upper)`, taking the reflexive–transitive closure.
    pub fn from_relation(names: Vec<String>, pairs: &[(usize, usize)]) -> Result<Poset, FrameError> {
        let n = names.len();
        let mut leq = vec![vec![false; n]; n];
        for (i, row) in leq.iter_mut().enumerate() {
            row[i] = true;
        }
        for &(a, b) in pairs {
            if a >= n || b >= n {
                return Err(FrameError::BadPoint(a.max(b), n));
            }
            leq[a][b] = true;
        }
        for m in 0..n {
            for a in 0..n {
                for b in 0..n {
                    if leq[a][m] && leq[m][b] {
                        leq[a][b] = true;
                    }
                }
            }
        }
        if (0..n).any(|a| (0..n).any(|b| a != b && leq[a][b] && leq[b][a])) {
            return Err(FrameError::Cyclic);
        }
        Ok(Poset { names, leq })
    }

    /// Points named by `names`, with `(lower, upper)` covering pairs.
    pub fn named(names: &[&str], pairs: &[(usize, usize)]) -> Result<Poset, FrameError> {
        Poset::from_relation(names.iter().map(|s| s.to_string()).collect(), pairs)
    }

    /// Build from a covers list: `covers[i]` are the points directly below `i`.
    pub fn from_covers(covers: &[Vec<usize>]) -> Result<Poset, FrameError> {
        let pairs: Vec<(usize, usize)> =
            covers.iter().enumerate().flat_map(|(i, below)| below.iter().map(move |&b| (b, i))).collect();
        Poset::from_relation(default_names(covers.len()), &pairs)
    }

    /// `n` pairwise incomparable points.
    pub fn antichain(n: usize) -> Poset {
        Poset::from_relation(default_names(n), &[]).expect("antichains are posets")
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn le(&self, a: usize, b: usize) -> bool {
        self.leq[a][b]
    }

    /// The covers list (points directly below each point).
    pub fn covers(&self) -> Vec<Vec<usize>> {
        let n = self.len();
        (0..n)
            .map(|i| {
                (0..n)
                    .filter(|&b| {
                        b != i
                            && self.leq[b][i]
                            && !(0..n).any(|m| m != b && m != i && self.leq[b][m] && self.leq[m][i])
                    })
                    .collect()
            })
            .collect()
    }

    /// Whether the bitmask `s` is closed downwards.
    pub fn is_downset(&self, s: u32) -> bool {
        let n = self.len();
        (0..n).all(|x| s >> x & 1 == 0 || (0..n).all(|y| !self.leq[y][x] || s >> y & 1 == 1))
    }

    /// `{a,b}`-style name of a subset, `∅` when empty.
    pub fn set_name(&self, s: u32) -> String {
        if s == 0 {
            return "∅".into();
        }
        let parts: Vec<&str> = (0..self.len()).filter(|&x| s >> x & 1 == 1).map(|x| self.names[x].as_str()).collect();
        format!("{{{}}}", parts.join(","))
    }
}

fn default_names(n: usize) -> Vec<String> {
    (0..n).map(|i| i.to_string()).collect()
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out
}

/// One representative of every isomorphism class of posets with `0..=max`
/// points, ordered by size and then by a canonical relation code.
pub fn posets_up_to(max: usize) -> Vec<Poset> {
    let mut out = Vec::new();
    for n in 0..=max {
        let pairs: Vec<(usize, usize)> =
            (0..n).flat_map(|a| (0..n).filter(move |&b| b != a).map(move |b| (a, b))).collect();
        let perms = permutations(n);
        let mut seen = BTreeSet::new();
        for mask in 0u32..1 << pairs.len() {
            let rel = |a: usize, b: usize| {
                a == b || pairs.iter().position(|&p| p == (a, b)).is_some_and(|i| mask >> i & 1 == 1)
            };
            let antisymmetric = pairs.iter().all(|&(a, b)| !(rel(a, b) && rel(b, a)));
            let transitive = (0..n).all(|a| (0..n).all(|b| (0..n).all(|c| !(rel(a, b) && rel(b, c)) || rel(a, c))));
            if !(antisymmetric && transitive) {
                continue;
            }
            let canonical = perms
                .iter()
                .map(|p| {
                    pairs.iter().enumerate().fold(0u32, |acc, (i, &(a, b))| acc | (u32::from(rel(p[a], p[b])) << i))
                })
                .min()
                .expect("at least one permutation");
            seen.insert(canonical);
        }
        for code in seen {
            let chosen: Vec<(usize, usize)> =
                pairs.iter().enumerate().filter(|&(i, _)| code >> i & 1 == 1).map(|(_, &p)| p).collect();
            out.push(Poset::from_relation(default_names(n), &chosen).expect("transitive antisymmetric relation"));
        }
    }
    out
}
