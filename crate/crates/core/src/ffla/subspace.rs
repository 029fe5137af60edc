use super::{FqMatrix, Field};

/// Number of `d`-dimensional subspaces of `F_q^n`.
pub fn gaussian_binomial(n: usize, d: usize, q: u32) -> u128 {
    if d > n {
        return 0;
    }
    let q = q as u128;
    let mut num = 1u128;
    let mut den = 1u128;
    for i in 0..d {
        num *= q.pow((n - i) as u32) - 1;
        den *= q.pow((i + 1) as u32) - 1;
    }
    num / den
}

/// Stream of all `d`-dimensional subspaces of `F_q^n`, each given by its
/// reduced row-echelon basis (a `d x n` matrix whose rows span the subspace).
///
/// Order: pivot patterns in lexicographic order; within a pattern, the free
/// entries (row-major) count up lexicographically. The stream is fully
/// determined by `(n, d, q)`.
pub struct Subspaces {
    n: usize,
    field: Field,
    pivots: Option<Vec<usize>>,
    free: Vec<(usize, usize)>,
    counter: Vec<u32>,
    fresh: bool,
}

impl Subspaces {
    pub fn new(n: usize, d: usize, field: Field) -> Self {
        let pivots = (d <= n).then(|| (0..d).collect::<Vec<_>>());
        let mut s = Subspaces {
            n,
            field,
            pivots,
            free: Vec::new(),
            counter: Vec::new(),
            fresh: true,
        };
        s.reset_pattern();
        s
    }

    fn reset_pattern(&mut self) {
        self.free.clear();
        if let Some(p) = &self.pivots {
            for (row, &pc) in p.iter().enumerate() {
                for col in pc + 1..self.n {
                    if !p.contains(&col) {
                        self.free.push((row, col));
                    }
                }
            }
        }
        self.counter = vec![0; self.free.len()];
        self.fresh = true;
    }

    fn next_pattern(&mut self) -> bool {
        let Some(p) = self.pivots.as_mut() else {
            return false;
        };
        let d = p.len();
        let n = self.n;
        // next d-combination of 0..n in lexicographic order
        let mut i = d;
        while i > 0 {
            i -= 1;
            if p[i] < n - d + i {
                p[i] += 1;
                for j in i + 1..d {
                    p[j] = p[j - 1] + 1;
                }
                self.reset_pattern();
                return true;
            }
        }
        self.pivots = None;
        false
    }

    fn advance_counter(&mut self) -> bool {
        let q = self.field.q();
        for i in (0..self.counter.len()).rev() {
            self.counter[i] += 1;
            if self.counter[i] < q {
                return true;
            }
            self.counter[i] = 0;
        }
        false
    }

    fn current(&self) -> FqMatrix {
        let p = self.pivots.as_ref().expect("active pattern");
        let mut m = FqMatrix::zeros(p.len(), self.n);
        for (row, &pc) in p.iter().enumerate() {
            m.set(row, pc, 1);
        }
        for (&(row, col), &v) in self.free.iter().zip(&self.counter) {
            m.set(row, col, v);
        }
        m
    }
}

impl Iterator for Subspaces {
    type Item = FqMatrix;

    fn next(&mut self) -> Option<FqMatrix> {
        self.pivots.as_ref()?;
        if self.fresh {
            self.fresh = false;
            return Some(self.current());
        }
        if self.advance_counter() {
            return Some(self.current());
        }
        if self.next_pattern() {
            self.fresh = false;
            return Some(self.current());
        }
        None
    }
}
