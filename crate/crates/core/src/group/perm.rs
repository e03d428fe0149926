//! Permutations of `{0..n-1}` stored as image vectors.
//!
//! Composition acts on the left: `compose(s, t)[i] == s[t[i]]`.

pub fn identity(n: usize) -> Vec<u32> {
    (0..n as u32).collect()
}

pub fn compose(s: &[u32], t: &[u32]) -> Vec<u32> {
    t.iter().map(|&i| s[i as usize]).collect()
}

pub fn inverse(s: &[u32]) -> Vec<u32> {
    let mut out = vec![0; s.len()];
    for (i, &j) in s.iter().enumerate() {
        out[j as usize] = i as u32;
    }
    out
}

pub fn is_permutation(s: &[u32]) -> bool {
    let mut seen = vec![false; s.len()];
    for &j in s {
        let j = j as usize;
        if j >= s.len() || seen[j] {
            return false;
        }
        seen[j] = true;
    }
    true
}

pub fn is_identity(s: &[u32]) -> bool {
    s.iter().enumerate().all(|(i, &j)| i as u32 == j)
}

/// Lehmer-code rank in `0..n!`; the identity has rank 0.
pub fn rank(s: &[u32]) -> usize {
    let n = s.len();
    let mut r = 0usize;
    for i in 0..n {
        let smaller = s[i + 1..].iter().filter(|&&x| x < s[i]).count();
        r = r * (n - i) + smaller;
    }
    r
}

pub fn unrank(mut r: usize, n: usize) -> Vec<u32> {
    let mut digits = vec![0usize; n];
    for i in (0..n).rev() {
        let base = n - i;
        digits[i] = r % base;
        r /= base;
    }
    let mut pool: Vec<u32> = (0..n as u32).collect();
    digits.into_iter().map(|d| pool.remove(d)).collect()
}

pub fn factorial(n: usize) -> u128 {
    (1..=n as u128).product()
}

/// Cycle lengths in non-increasing order.
pub fn cycle_type(s: &[u32]) -> Vec<usize> {
    let mut seen = vec![false; s.len()];
    let mut out = Vec::new();
    for start in 0..s.len() {
        if seen[start] {
            continue;
        }
        let mut len = 0;
        let mut i = start;
        while !seen[i] {
            seen[i] = true;
            i = s[i] as usize;
            len += 1;
        }
        out.push(len);
    }
    out.sort_unstable_by(|a, b| b.cmp(a));
    out
}

/// Cycle notation with 1-based points, `()` for the identity.
pub fn cycle_notation(s: &[u32]) -> String {
    let mut seen = vec![false; s.len()];
    let mut out = String::new();
    for start in 0..s.len() {
        if seen[start] || s[start] as usize == start {
            continue;
        }
        out.push('(');
        let mut i = start;
        let mut first = true;
        while !seen[i] {
            seen[i] = true;
            if !first {
                out.push(' ');
            }
            out.push_str(&(i + 1).to_string());
            first = false;
            i = s[i] as usize;
        }
        out.push(')');
    }
    if out.is_empty() {
        out.push_str("()");
    }
    out
}
