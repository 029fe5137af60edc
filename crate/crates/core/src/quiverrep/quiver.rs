use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// An arrow between two vertices, stored with zero-based vertex indices.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Arrow {
    pub source: usize,
    pub target: usize,
}

/// A finite acyclic quiver.
///
/// The public constructor takes arrows with one-based vertex labels
/// `1..=vertex_count`; everything internal is zero-based.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Quiver {
    vertex_count: usize,
    arrows: Vec<Arrow>,
}

impl Quiver {
    /// Builds a quiver from one-based `(source, target)` pairs. Rejects
    /// out-of-range labels and oriented cycles (including loops).
    pub fn new(vertex_count: usize, arrows: &[(usize, usize)]) -> Result<Self> {
        let mut zero_based = Vec::with_capacity(arrows.len());
        for &(s, t) in arrows {
            if s == 0 || t == 0 || s > vertex_count || t > vertex_count {
                return Err(Error::Construction(format!(
                    "arrow {s}->{t} has a vertex outside 1..={vertex_count}"
                )));
            }
            zero_based.push(Arrow {
                source: s - 1,
                target: t - 1,
            });
        }
        let quiver = Quiver {
            vertex_count,
            arrows: zero_based,
        };
        if !quiver.is_acyclic() {
            return Err(Error::Construction(
                "quiver has an oriented cycle; only acyclic quivers are supported".into(),
            ));
        }
        Ok(quiver)
    }

    /// One vertex, no arrows.
    pub fn point() -> Self {
        Quiver {
            vertex_count: 1,
            arrows: Vec::new(),
        }
    }

    /// Linearly oriented `A_n`: `1 -> 2 -> ... -> n`.
    pub fn linear(n: usize) -> Self {
        let arrows: Vec<_> = (1..n).map(|i| (i, i + 1)).collect();
        Quiver::new(n, &arrows).expect("linear quiver is acyclic")
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn arrows(&self) -> &[Arrow] {
        &self.arrows
    }

    /// Arrows as one-based pairs, the inverse of [`Quiver::new`].
    pub fn one_based_arrows(&self) -> Vec<(usize, usize)> {
        self.arrows
            .iter()
            .map(|a| (a.source + 1, a.target + 1))
            .collect()
    }

    fn is_acyclic(&self) -> bool {
        let n = self.vertex_count;
        let mut indegree = vec![0usize; n];
        for a in &self.arrows {
            indegree[a.target] += 1;
        }
        let mut stack: Vec<usize> = (0..n).filter(|&v| indegree[v] == 0).collect();
        let mut visited = 0;
        while let Some(v) = stack.pop() {
            visited += 1;
            for a in self.arrows.iter().filter(|a| a.source == v) {
                indegree[a.target] -= 1;
                if indegree[a.target] == 0 {
                    stack.push(a.target);
                }
            }
        }
        visited == n
    }

    /// Additive Euler form `sum_v a_v b_v - sum_arrows a_s b_t` on integer vectors.
    pub fn euler_form(&self, a: &[i64], b: &[i64]) -> i64 {
        assert_eq!(a.len(), self.vertex_count);
        assert_eq!(b.len(), self.vertex_count);
        let diagonal: i64 = a.iter().zip(b).map(|(x, y)| x * y).sum();
        let arrows: i64 = self
            .arrows
            .iter()
            .map(|ar| a[ar.source] * b[ar.target])
            .sum();
        diagonal - arrows
    }
}
