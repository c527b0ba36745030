//! Permutations of {0, …, d−1} with sign, composition and enumeration.

use std::fmt;

/// A permutation in one-line notation: `map[i]` is the image of `i`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Perm {
    map: Vec<u8>,
}

impl Perm {
    pub fn identity(d: usize) -> Perm {
        Perm {
            map: (0..d as u8).collect(),
        }
    }

    pub fn from_images(map: Vec<u8>) -> Perm {
        debug_assert!({
            let mut seen = vec![false; map.len()];
            map.iter().all(|&i| {
                let ok = (i as usize) < map.len() && !seen[i as usize];
                if ok {
                    seen[i as usize] = true;
                }
                ok
            })
        });
        Perm { map }
    }

    /// Transposition (a b) in S_d.
    pub fn transposition(d: usize, a: usize, b: usize) -> Perm {
        let mut p = Perm::identity(d);
        p.map.swap(a, b);
        p
    }

    /// Cycle (c₀ c₁ … c_m): c₀ ↦ c₁ ↦ … ↦ c_m ↦ c₀.
    pub fn cycle(d: usize, cycle: &[usize]) -> Perm {
        let mut map: Vec<u8> = (0..d as u8).collect();
        for i in 0..cycle.len() {
            map[cycle[i]] = cycle[(i + 1) % cycle.len()] as u8;
        }
        Perm { map }
    }

    pub fn degree(&self) -> usize {
        self.map.len()
    }

    pub fn apply(&self, i: usize) -> usize {
        self.map[i] as usize
    }

    /// Composition (self ∘ other)(i) = self(other(i)).
    pub fn compose(&self, other: &Perm) -> Perm {
        assert_eq!(self.degree(), other.degree());
        Perm {
            map: (0..self.degree())
                .map(|i| self.map[other.map[i] as usize])
                .collect(),
        }
    }

    pub fn inverse(&self) -> Perm {
        let mut map = vec![0u8; self.degree()];
        for (i, &j) in self.map.iter().enumerate() {
            map[j as usize] = i as u8;
        }
        Perm { map }
    }

    /// Sign as +1 / −1, via cycle decomposition.
    pub fn sign(&self) -> i32 {
        let mut seen = vec![false; self.degree()];
        let mut sign = 1;
        for start in 0..self.degree() {
            if seen[start] {
                continue;
            }
            let mut len = 0;
            let mut i = start;
            while !seen[i] {
                seen[i] = true;
                i = self.map[i] as usize;
                len += 1;
            }
            if len % 2 == 0 {
                sign = -sign;
            }
        }
        sign
    }

    pub fn images(&self) -> &[u8] {
        &self.map
    }
}

impl fmt::Debug for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Perm{:?}", self.map)
    }
}

/// All permutations of S_d in lexicographic order of one-line notation.
pub fn all_perms(d: usize) -> Vec<Perm> {
    let mut out = Vec::new();
    let mut cur: Vec<u8> = (0..d as u8).collect();
    loop {
        out.push(Perm { map: cur.clone() });
        if !next_perm(&mut cur) {
            break;
        }
    }
    out
}

fn next_perm(a: &mut [u8]) -> bool {
    let n = a.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && a[i - 1] >= a[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = n - 1;
    while a[j] <= a[i - 1] {
        j -= 1;
    }
    a.swap(i - 1, j);
    a[i..].reverse();
    true
}

/// Permutations of the multiset positions `positions`, as full S_d elements
/// fixing everything else. Used to build row/column groups of tableaux.
pub fn perms_of_positions(d: usize, positions: &[usize]) -> Vec<Perm> {
    let k = positions.len();
    all_perms(k)
        .into_iter()
        .map(|p| {
            let mut map: Vec<u8> = (0..d as u8).collect();
            for (a, &pos) in positions.iter().enumerate() {
                map[pos] = positions[p.apply(a)] as u8;
            }
            Perm { map }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sign_and_compose() {
        let t = Perm::transposition(3, 0, 1);
        assert_eq!(t.sign(), -1);
        assert_eq!(t.compose(&t), Perm::identity(3));
        let c = Perm::cycle(3, &[0, 1, 2]);
        assert_eq!(c.sign(), 1);
        assert_eq!(c.apply(0), 1);
        assert_eq!(c.apply(2), 0);
        // compose(a,b)(i) = a(b(i))
        let ab = t.compose(&c);
        assert_eq!(ab.apply(0), t.apply(c.apply(0)));
    }

    #[test]
    fn enumeration_count() {
        assert_eq!(all_perms(4).len(), 24);
        assert_eq!(all_perms(1).len(), 1);
        assert_eq!(all_perms(0).len(), 1);
    }

    #[test]
    fn subgroup_on_positions() {
        let ps = perms_of_positions(4, &[1, 3]);
        assert_eq!(ps.len(), 2);
        assert!(ps.contains(&Perm::identity(4)));
        assert!(ps.contains(&Perm::transposition(4, 1, 3)));
    }
}
