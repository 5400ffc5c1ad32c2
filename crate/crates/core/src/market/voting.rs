use std::collections::HashSet;

use serde::Deserialize;

use crate::error::{validation, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum VotingRule {
    Plurality,
    Borda,
    Copeland,
    PairwiseMajority,
}

impl VotingRule {
    pub const ALL: [VotingRule; 4] =
        [VotingRule::Plurality, VotingRule::Borda, VotingRule::Copeland, VotingRule::PairwiseMajority];

    pub fn as_str(self) -> &'static str {
        match self {
            VotingRule::Plurality => "plurality",
            VotingRule::Borda => "borda",
            VotingRule::Copeland => "copeland",
            VotingRule::PairwiseMajority => "pairwise-majority",
        }
    }
}

/// Alternatives plus strict rankings over them, stored as indices
/// (most preferred first).
#[derive(Debug, Clone, PartialEq)]
pub struct VotingProfile {
    alternatives: Vec<String>,
    ballots: Vec<Vec<usize>>,
    /// Alternative indices in label order, for tie-breaking.
    label_order: Vec<usize>,
}

impl VotingProfile {
    pub fn new(alternatives: Vec<String>, ballots: &[Vec<String>]) -> Result<Self> {
        let idx = |s: &String| alternatives.iter().position(|a| a == s);
        let mut parsed = Vec::with_capacity(ballots.len());
        for b in ballots {
            let mut v = Vec::with_capacity(b.len());
            for s in b {
                match idx(s) {
                    Some(i) => v.push(i),
                    None => return validation(format!("ballot names unknown alternative {s:?}")),
                }
            }
            parsed.push(v);
        }
        Self::from_indices(alternatives, parsed)
    }

    pub fn from_indices(alternatives: Vec<String>, ballots: Vec<Vec<usize>>) -> Result<Self> {
        if alternatives.is_empty() {
            return validation("need at least one alternative");
        }
        let distinct: HashSet<&String> = alternatives.iter().collect();
        if distinct.len() != alternatives.len() {
            return validation("alternative labels must be distinct");
        }
        let m = alternatives.len();
        for (k, b) in ballots.iter().enumerate() {
            let mut seen = vec![false; m];
            if b.len() != m || !b.iter().all(|&i| i < m && !std::mem::replace(&mut seen[i], true)) {
                return validation(format!("ballot {k} is not a permutation of the alternatives"));
            }
        }
        let mut label_order: Vec<usize> = (0..m).collect();
        label_order.sort_by(|&a, &b| alternatives[a].cmp(&alternatives[b]));
        Ok(VotingProfile { alternatives, ballots, label_order })
    }

    pub fn alternatives(&self) -> &[String] {
        &self.alternatives
    }

    pub fn ballots(&self) -> &[Vec<usize>] {
        &self.ballots
    }

    pub fn label(&self, i: usize) -> &str {
        &self.alternatives[i]
    }

    /// Highest-scoring alternative, ties to the smallest label.
    fn argmax(&self, scores: &[i64]) -> usize {
        let mut best = self.label_order[0];
        for &i in &self.label_order[1..] {
            if scores[i] > scores[best] {
                best = i;
            }
        }
        best
    }

    fn tally(&self, rule: VotingRule, extra: Option<(&[usize], usize)>) -> usize {
        let m = self.alternatives.len();
        let weighted = self.ballots.iter().map(|b| (b.as_slice(), 1i64)).chain(extra.map(|(b, k)| (b, k as i64)));
        match rule {
            VotingRule::Plurality | VotingRule::Borda => {
                let mut s = vec![0i64; m];
                for (b, w) in weighted {
                    if rule == VotingRule::Plurality {
                        s[b[0]] += w;
                    } else {
                        for (pos, &a) in b.iter().enumerate() {
                            s[a] += w * (m - 1 - pos) as i64;
                        }
                    }
                }
                self.argmax(&s)
            }
            VotingRule::Copeland | VotingRule::PairwiseMajority => {
                // d[a][b] = voters preferring a to b
                let mut d = vec![vec![0i64; m]; m];
                for (b, w) in weighted {
                    for (p, &a) in b.iter().enumerate() {
                        for &c in &b[p + 1..] {
                            d[a][c] += w;
                        }
                    }
                }
                let beats = |a: usize, c: usize| d[a][c] > d[c][a];
                if rule == VotingRule::Copeland {
                    let s: Vec<i64> = (0..m)
                        .map(|a| (0..m).filter(|&c| c != a).map(|c| beats(a, c) as i64 - beats(c, a) as i64).sum())
                        .collect();
                    return self.argmax(&s);
                }
                // Condorcet winner, else the first undefeated alternative,
                // else the first label.
                let undefeated = |a: usize| (0..m).all(|c| !beats(c, a));
                let condorcet = (0..m).find(|&a| (0..m).all(|c| c == a || beats(a, c)));
                condorcet
                    .or_else(|| self.label_order.iter().copied().find(|&a| undefeated(a)))
                    .unwrap_or(self.label_order[0])
            }
        }
    }
}

/// Winner under `rule` with global lexicographic tie-breaking on labels.
pub fn winner(rule: VotingRule, profile: &VotingProfile) -> usize {
    profile.tally(rule, None)
}

#[derive(Debug, Clone, PartialEq)]
pub struct Manipulation {
    pub found: bool,
    /// The spawned ballot; its ranking is the spawner's preference.
    pub ballot: Option<Vec<usize>>,
    pub k: usize,
    pub old_winner: usize,
    pub new_winner: usize,
}

/// Whether adding `k` copies of `ballot` elects someone the ballot ranks
/// strictly above the current winner. Returns the new winner if so.
pub fn is_manipulation(rule: VotingRule, profile: &VotingProfile, ballot: &[usize], k: usize) -> Option<usize> {
    let old = winner(rule, profile);
    let new = profile.tally(rule, Some((ballot, k)));
    let pos = |a: usize| ballot.iter().position(|&x| x == a).unwrap();
    (new != old && pos(new) < pos(old)).then_some(new)
}

/// `(|A| − 1) · n` spawned voters.
pub fn manipulation_bound(profile: &VotingProfile) -> usize {
    (profile.alternatives.len() - 1) * profile.ballots.len()
}

fn next_permutation(p: &mut [usize]) -> bool {
    let n = p.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && p[i - 1] >= p[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = n - 1;
    while p[j] <= p[i - 1] {
        j -= 1;
    }
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

/// Brute force over every ballot (lexicographic order of indices) and
/// every `k ≤ max_k` (default [`manipulation_bound`]). Returns the smallest
/// `k` for which some ballot manipulates, first such ballot.
pub fn spawn_manipulation_search(rule: VotingRule, profile: &VotingProfile, max_k: Option<usize>) -> Manipulation {
    let old = winner(rule, profile);
    let max_k = max_k.unwrap_or_else(|| manipulation_bound(profile));
    let m = profile.alternatives.len();
    let none = Manipulation { found: false, ballot: None, k: 0, old_winner: old, new_winner: old };
    if m < 2 {
        return none;
    }
    for k in 1..=max_k {
        let mut ballot: Vec<usize> = (0..m).collect();
        loop {
            if let Some(new) = is_manipulation(rule, profile, &ballot, k) {
                return Manipulation { found: true, ballot: Some(ballot), k, old_winner: old, new_winner: new };
            }
            if !next_permutation(&mut ballot) {
                break;
            }
        }
    }
    none
}
