//! Basis monomials of the exterior algebra over `2n` differentials.
//!
//! Differentials are numbered `dz_l ↦ l` and `dz̄_l ↦ n + l` (0-based), so a
//! sorted key lists holomorphic differentials first.

pub type Key = Vec<usize>;

/// Merged key of `e_a ∧ e_b` and whether the reordering is odd; `None` when
/// the two share a differential.
pub fn merge(a: &[usize], b: &[usize]) -> Option<(Key, bool)> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    let mut swaps = 0usize;
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Equal => return None,
            std::cmp::Ordering::Less => {
                out.push(a[i]);
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                // b[j] jumps over the remaining a[i..]
                swaps += a.len() - i;
                out.push(b[j]);
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    Some((out, swaps % 2 == 1))
}

/// Removes `idx` from `key`; the flag is the parity of its position.
pub fn remove(key: &[usize], idx: usize) -> Option<(Key, bool)> {
    let pos = key.iter().position(|&k| k == idx)?;
    let mut out = key.to_vec();
    out.remove(pos);
    Some((out, pos % 2 == 1))
}

/// Sorts an arbitrary list of distinct differentials; `None` on repeats.
pub fn sort_key(indices: &[usize]) -> Option<(Key, bool)> {
    let mut v = indices.to_vec();
    let mut odd = false;
    // insertion sort keeps track of transpositions
    for i in 1..v.len() {
        let mut k = i;
        while k > 0 && v[k - 1] > v[k] {
            v.swap(k - 1, k);
            odd = !odd;
            k -= 1;
        }
    }
    if v.windows(2).any(|w| w[0] == w[1]) {
        return None;
    }
    Some((v, odd))
}

/// `(holomorphic, antiholomorphic)` degree of a key.
pub fn bidegree(key: &[usize], nvars: usize) -> (usize, usize) {
    let p = key.iter().filter(|&&k| k < nvars).count();
    (p, key.len() - p)
}
