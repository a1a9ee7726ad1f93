//! Permutations of `{0, .., n-1}` with cycle-notation IO (1-based points).

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{invalid, Result};

/// A permutation stored as its image list. Products compose right to left:
/// `a.compose(&b)` sends `x` to `a(b(x))`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Perm {
    img: Vec<u32>,
}

impl Perm {
    pub fn identity(n: usize) -> Self {
        Perm { img: (0..n as u32).collect() }
    }

    pub fn from_images(img: Vec<u32>) -> Result<Self> {
        let n = img.len();
        let mut seen = alloc::vec![false; n];
        for &i in &img {
            if i as usize >= n || seen[i as usize] {
                return Err(invalid!("image list is not a permutation"));
            }
            seen[i as usize] = true;
        }
        Ok(Perm { img })
    }

    pub(crate) fn from_images_unchecked(img: Vec<u32>) -> Self {
        Perm { img }
    }

    pub fn degree(&self) -> usize {
        self.img.len()
    }

    pub fn images(&self) -> &[u32] {
        &self.img
    }

    #[inline]
    pub fn apply(&self, x: usize) -> usize {
        self.img[x] as usize
    }

    pub fn is_identity(&self) -> bool {
        self.img.iter().enumerate().all(|(i, &j)| i as u32 == j)
    }

    pub fn compose(&self, other: &Perm) -> Perm {
        debug_assert_eq!(self.degree(), other.degree());
        Perm { img: other.img.iter().map(|&x| self.img[x as usize]).collect() }
    }

    pub fn inverse(&self) -> Perm {
        let mut inv = alloc::vec![0u32; self.img.len()];
        for (i, &j) in self.img.iter().enumerate() {
            inv[j as usize] = i as u32;
        }
        Perm { img: inv }
    }

    /// Extend to a larger degree by fixing the new points.
    pub fn extend(&self, n: usize) -> Perm {
        let mut img = self.img.clone();
        img.extend(self.img.len() as u32..n as u32);
        Perm { img }
    }

    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let n = self.img.len();
        let mut seen = alloc::vec![false; n];
        let mut out = Vec::new();
        for s in 0..n {
            if seen[s] || self.img[s] as usize == s {
                continue;
            }
            let mut c = Vec::new();
            let mut x = s;
            while !seen[x] {
                seen[x] = true;
                c.push(x);
                x = self.img[x] as usize;
            }
            out.push(c);
        }
        out
    }

    /// Parse disjoint-cycle notation such as `(1,2)(3,4)` or `()`.
    pub fn parse(s: &str, degree: usize) -> Result<Perm> {
        let mut img: Vec<u32> = (0..degree as u32).collect();
        let mut seen = alloc::vec![false; degree];
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if t.is_empty() {
            return Err(invalid!("empty permutation string"));
        }
        let mut rest = t.as_str();
        while !rest.is_empty() {
            let body_end = rest
                .strip_prefix('(')
                .and_then(|r| r.find(')'))
                .ok_or_else(|| invalid!("malformed cycle in {s:?}"))?;
            let body = &rest[1..=body_end];
            rest = &rest[body_end + 2..];
            if body.is_empty() {
                continue;
            }
            let mut pts = Vec::new();
            for tok in body.split(',') {
                let p: usize = tok.parse().map_err(|_| invalid!("bad point {tok:?} in {s:?}"))?;
                if p == 0 || p > degree {
                    return Err(invalid!("point {p} outside 1..={degree} in {s:?}"));
                }
                if seen[p - 1] {
                    return Err(invalid!("cycles in {s:?} are not disjoint"));
                }
                seen[p - 1] = true;
                pts.push(p - 1);
            }
            for w in 0..pts.len() {
                img[pts[w]] = pts[(w + 1) % pts.len()] as u32;
            }
        }
        Ok(Perm { img })
    }
}

impl fmt::Display for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cs = self.cycles();
        if cs.is_empty() {
            return f.write_str("()");
        }
        for c in cs {
            f.write_str("(")?;
            for (i, x) in c.iter().enumerate() {
                if i > 0 {
                    f.write_str(",")?;
                }
                write!(f, "{}", x + 1)?;
            }
            f.write_str(")")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;

    #[test]
    fn parse_and_print() {
        let p = Perm::parse("(1,2)(3,4)", 5).unwrap();
        assert_eq!(p.images(), &[1, 0, 3, 2, 4]);
        assert_eq!(p.to_string(), "(1,2)(3,4)");
        assert!(Perm::parse("()", 3).unwrap().is_identity());
        assert!(Perm::parse("(1,2)(2,3)", 3).is_err());
        assert!(Perm::parse("(1,7)", 3).is_err());
    }

    #[test]
    fn compose_is_right_to_left() {
        let a = Perm::parse("(1,2)", 3).unwrap();
        let b = Perm::parse("(2,3)", 3).unwrap();
        // a(b(2)) = a(3) = 3
        assert_eq!(a.compose(&b).apply(1), 2);
        assert!(a.compose(&a.inverse()).is_identity());
    }
}
