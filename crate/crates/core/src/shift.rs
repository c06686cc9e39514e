//! Subshifts of finite type: transition matrices, exact entropy and
//! executable entropy laws.

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MatrixError {
    #[error("transition matrix needs at least one symbol")]
    Empty,
    #[error("row {row} has length {len}, expected {n}")]
    Ragged { row: usize, len: usize, n: usize },
    #[error("row {row} contains {found:?}; only '0' and '1' are allowed")]
    BadEntry { row: usize, found: char },
    #[error("symbol {0} has no admissible successor")]
    DeadSymbol(usize),
}

/// Square 0/1 matrix; `rows[i][j]` allows the transition `i → j`.
/// Symbols are `0..n`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "MatrixJson", into = "MatrixJson")]
pub struct TransitionMatrix {
    n: usize,
    rows: Vec<Vec<bool>>,
}

#[derive(Serialize, Deserialize)]
struct MatrixJson {
    n: usize,
    rows: Vec<String>,
}

impl TryFrom<MatrixJson> for TransitionMatrix {
    type Error = MatrixError;

    fn try_from(m: MatrixJson) -> Result<Self, MatrixError> {
        let t = TransitionMatrix::from_strings(&m.rows)?;
        if t.n != m.n {
            return Err(MatrixError::Ragged { row: 0, len: t.n, n: m.n });
        }
        Ok(t)
    }
}

impl From<TransitionMatrix> for MatrixJson {
    fn from(t: TransitionMatrix) -> Self {
        MatrixJson { n: t.n, rows: t.to_strings() }
    }
}

impl TransitionMatrix {
    pub fn new(rows: Vec<Vec<bool>>) -> Result<Self, MatrixError> {
        let n = rows.len();
        if n == 0 {
            return Err(MatrixError::Empty);
        }
        for (i, r) in rows.iter().enumerate() {
            if r.len() != n {
                return Err(MatrixError::Ragged { row: i, len: r.len(), n });
            }
            if !r.iter().any(|&b| b) {
                return Err(MatrixError::DeadSymbol(i));
            }
        }
        Ok(TransitionMatrix { n, rows })
    }

    /// Parses rows such as `["110", "101", "011"]`.
    pub fn from_strings<S: AsRef<str>>(rows: &[S]) -> Result<Self, MatrixError> {
        let parsed = rows
            .iter()
            .enumerate()
            .map(|(i, r)| {
                r.as_ref()
                    .chars()
                    .map(|c| match c {
                        '0' => Ok(false),
                        '1' => Ok(true),
                        other => Err(MatrixError::BadEntry { row: i, found: other }),
                    })
                    .collect::<Result<Vec<_>, _>>()
            })
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(parsed)
    }

    pub fn full_shift(n: usize) -> Self {
        Self::new(vec![vec![true; n]; n]).expect("full shift is valid for n >= 1")
    }

    pub fn identity(n: usize) -> Self {
        Self::new((0..n).map(|i| (0..n).map(|j| i == j).collect()).collect()).expect("identity is valid for n >= 1")
    }

    pub fn golden_mean() -> Self {
        Self::from_strings(&["11", "10"]).expect("valid literal")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn allows(&self, i: usize, j: usize) -> bool {
        self.rows[i][j]
    }

    pub fn to_strings(&self) -> Vec<String> {
        self.rows.iter().map(|r| r.iter().map(|&b| if b { '1' } else { '0' }).collect()).collect()
    }

    /// `P A Pᵀ` for the relabelling `i ↦ perm[i]`.
    pub fn permuted(&self, perm: &[usize]) -> Self {
        assert_eq!(perm.len(), self.n, "permutation length");
        let mut rows = vec![vec![false; self.n]; self.n];
        for i in 0..self.n {
            for j in 0..self.n {
                rows[perm[i]][perm[j]] = self.rows[i][j];
            }
        }
        TransitionMatrix { n: self.n, rows }
    }

    /// Block-diagonal sum; the symbols of `other` are shifted by `self.n()`.
    pub fn direct_sum(&self, other: &Self) -> Self {
        let n = self.n + other.n;
        let mut rows = vec![vec![false; n]; n];
        for (dst, src) in rows.iter_mut().zip(&self.rows) {
            dst[..self.n].copy_from_slice(src);
        }
        for (dst, src) in rows[self.n..].iter_mut().zip(&other.rows) {
            dst[self.n..].copy_from_slice(src);
        }
        TransitionMatrix { n, rows }
    }

    pub fn to_weights(&self) -> Vec<Vec<f64>> {
        self.rows.iter().map(|r| r.iter().map(|&b| if b { 1.0 } else { 0.0 }).collect()).collect()
    }
}

/// Finite word over `0..n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SymbolWord(pub Vec<usize>);

impl SymbolWord {
    pub fn is_admissible(&self, a: &TransitionMatrix) -> bool {
        self.0.iter().all(|&s| s < a.n()) && self.0.windows(2).all(|w| a.allows(w[0], w[1]))
    }

    /// The shifted word `σω`.
    pub fn shifted(&self) -> SymbolWord {
        SymbolWord(self.0.iter().skip(1).copied().collect())
    }
}

/// Topological entropy `log ρ(A)` of the subshift of finite type.
pub fn sft_entropy(a: &TransitionMatrix) -> f64 {
    spectral_radius(&a.to_weights()).ln()
}

const SPECTRAL_TOL: f64 = 1e-12;
const MAX_POWER_STEPS: usize = 2_000_000;

/// Spectral radius of a square matrix with nonnegative finite entries.
///
/// The radius is the maximum over strongly connected components. On each
/// nontrivial component `B + I` is primitive, so power iteration from the
/// all-ones vector converges; it stops once the Collatz–Wielandt bracket
/// `min (Bx)_i/x_i ≤ ρ ≤ max (Bx)_i/x_i` is relatively tighter than 1e-12.
/// Row sums add their terms in sorted order, which makes the result
/// invariant under simultaneous row/column permutations bit for bit.
pub fn spectral_radius(m: &[Vec<f64>]) -> f64 {
    let n = m.len();
    assert!(m.iter().all(|r| r.len() == n), "matrix must be square");
    assert!(m.iter().flatten().all(|&x| x >= 0.0 && x.is_finite()), "entries must be nonnegative and finite");
    strongly_connected_components(m)
        .iter()
        .map(|comp| component_radius(m, comp))
        .fold(0.0, f64::max)
}

fn component_radius(m: &[Vec<f64>], comp: &[usize]) -> f64 {
    if comp.len() == 1 {
        return m[comp[0]][comp[0]];
    }
    // Local weights of B = A + I restricted to the component.
    let k = comp.len();
    let b: Vec<Vec<f64>> = comp
        .iter()
        .enumerate()
        .map(|(li, &i)| comp.iter().enumerate().map(|(lj, &j)| m[i][j] + if li == lj { 1.0 } else { 0.0 }).collect())
        .collect();
    let mut x = vec![1.0; k];
    let mut terms = Vec::with_capacity(k);
    let mut est = 0.0;
    for _ in 0..MAX_POWER_STEPS {
        let y: Vec<f64> = b
            .iter()
            .map(|row| {
                terms.clear();
                terms.extend(row.iter().zip(&x).map(|(w, xi)| w * xi).filter(|t| *t != 0.0));
                terms.sort_by(f64::total_cmp);
                terms.iter().sum::<f64>()
            })
            .collect();
        let (lo, hi) = y
            .iter()
            .zip(&x)
            .map(|(yi, xi)| yi / xi)
            .fold((f64::INFINITY, 0.0f64), |(lo, hi), r| (lo.min(r), hi.max(r)));
        est = 0.5 * (lo + hi);
        let top = y.iter().copied().fold(0.0, f64::max);
        x = y.into_iter().map(|v| v / top).collect();
        if hi - lo <= SPECTRAL_TOL * lo {
            break;
        }
    }
    est - 1.0
}

/// Tarjan's algorithm, iterative. Components are returned with their
/// vertices in ascending order.
fn strongly_connected_components(m: &[Vec<f64>]) -> Vec<Vec<usize>> {
    let n = m.len();
    let succ: Vec<Vec<usize>> = m.iter().map(|r| (0..n).filter(|&j| r[j] > 0.0).collect()).collect();
    let mut index = vec![usize::MAX; n];
    let mut low = vec![0; n];
    let mut on_stack = vec![false; n];
    let mut stack = Vec::new();
    let mut comps = Vec::new();
    let mut counter = 0;
    for root in 0..n {
        if index[root] != usize::MAX {
            continue;
        }
        let mut call: Vec<(usize, usize)> = vec![(root, 0)];
        index[root] = counter;
        low[root] = counter;
        counter += 1;
        stack.push(root);
        on_stack[root] = true;
        while let Some(&mut (v, ref mut next)) = call.last_mut() {
            if let Some(&w) = succ[v].get(*next) {
                *next += 1;
                if index[w] == usize::MAX {
                    index[w] = counter;
                    low[w] = counter;
                    counter += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    call.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
            } else {
                call.pop();
                if let Some(&(parent, _)) = call.last() {
                    low[parent] = low[parent].min(low[v]);
                }
                if low[v] == index[v] {
                    let mut comp = Vec::new();
                    while let Some(w) = stack.pop() {
                        on_stack[w] = false;
                        comp.push(w);
                        if w == v {
                            break;
                        }
                    }
                    comp.sort_unstable();
                    comps.push(comp);
                }
            }
        }
    }
    comps
}

fn matrix_power(a: &[Vec<f64>], n: u32) -> Vec<Vec<f64>> {
    let k = a.len();
    let mut out: Vec<Vec<f64>> = (0..k).map(|i| (0..k).map(|j| if i == j { 1.0 } else { 0.0 }).collect()).collect();
    for _ in 0..n {
        out = (0..k)
            .map(|i| (0..k).map(|j| (0..k).map(|l| out[i][l] * a[l][j]).sum()).collect())
            .collect();
    }
    out
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LawCheck {
    pub name: String,
    pub expected: f64,
    pub actual: f64,
    pub defect: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LawsReport {
    pub checks: Vec<LawCheck>,
}

impl LawsReport {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn get(&self, name: &str) -> Option<&LawCheck> {
        self.checks.iter().find(|c| c.name == name)
    }
}

pub const LAW_TOLERANCE: f64 = 1e-9;

fn check(name: &str, expected: f64, actual: f64) -> LawCheck {
    let defect = (expected - actual).abs();
    LawCheck { name: name.into(), expected, actual, defect, pass: defect <= LAW_TOLERANCE }
}

/// Checks three entropy laws on `A`:
/// - `power`: the `n`-step word matrix `Aⁿ` has entropy `n · h(A)`;
/// - `conjugacy`: reversing the symbol order leaves `h(A)` unchanged (exact);
/// - `direct_sum`: `A ⊕ golden mean` has entropy `max(h(A), log φ)`.
pub fn entropy_laws_check(a: &TransitionMatrix, n: u32) -> LawsReport {
    let h = sft_entropy(a);
    let power = spectral_radius(&matrix_power(&a.to_weights(), n)).ln();
    let reversal: Vec<usize> = (0..a.n()).rev().collect();
    let conj = sft_entropy(&a.permuted(&reversal));
    let golden = TransitionMatrix::golden_mean();
    let sum = sft_entropy(&a.direct_sum(&golden));
    let mut conj_check = check("conjugacy", h, conj);
    conj_check.pass = conj.to_bits() == h.to_bits();
    LawsReport {
        checks: vec![
            check("power", n as f64 * h, power),
            conj_check,
            check("direct_sum", h.max(sft_entropy(&golden)), sum),
        ],
    }
}
