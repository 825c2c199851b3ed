//! Vertex groups: trivial, finite (by multiplication table) and finitely
//! generated free groups with reduced words.

use std::fmt;
use std::sync::Arc;

use crate::error::{precondition, structural, Result};

/// A letter of a free-group word: `i > 0` is generator `i - 1`, `-i` its inverse.
pub type Letter = i32;

/// Group element in canonical form. Equality is syntactic.
///
/// Finite-group elements are table ids (identity is always id 0, the
/// trivial group has only `Fin(0)`); free-group elements are freely
/// reduced words.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Elem {
    Fin(u32),
    Word(Vec<Letter>),
}

impl Elem {
    pub fn word(letters: &[Letter]) -> Elem {
        Elem::Word(free_reduce(letters.iter().copied()))
    }
}

pub fn free_reduce(letters: impl IntoIterator<Item = Letter>) -> Vec<Letter> {
    let mut out: Vec<Letter> = Vec::new();
    for l in letters {
        if out.last() == Some(&-l) {
            out.pop();
        } else {
            out.push(l);
        }
    }
    out
}

fn invert_word(w: &[Letter]) -> Vec<Letter> {
    w.iter().rev().map(|l| -l).collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteGroup {
    pub table: Vec<Vec<u32>>,
    pub inverse: Vec<u32>,
    pub names: Vec<String>,
}

impl FiniteGroup {
    /// Builds a finite group from a multiplication table, relabelling so the
    /// identity becomes id 0. Checks closure, identity, inverses and
    /// associativity.
    pub fn from_table(table: Vec<Vec<u32>>, names: Option<Vec<String>>) -> Result<FiniteGroup> {
        let n = table.len();
        if n == 0 {
            return structural("finite group with empty table");
        }
        if table.iter().any(|r| r.len() != n || r.iter().any(|&x| x as usize >= n)) {
            return structural("multiplication table is not square or not closed");
        }
        let identity = (0..n)
            .find(|&e| (0..n).all(|x| table[e][x] as usize == x && table[x][e] as usize == x))
            .ok_or_else(|| crate::Error::Structural("table has no identity".into()))?;
        // relabel: swap identity with 0
        let relabel = |x: usize| -> usize {
            if x == identity {
                0
            } else if x == 0 {
                identity
            } else {
                x
            }
        };
        let mut t = vec![vec![0u32; n]; n];
        for x in 0..n {
            for y in 0..n {
                t[relabel(x)][relabel(y)] = relabel(table[x][y] as usize) as u32;
            }
        }
        let mut names = names.unwrap_or_else(|| (0..n).map(|i| i.to_string()).collect());
        if names.len() != n {
            return structural("element name count does not match group order");
        }
        names.swap(0, identity);
        let mut inverse = vec![0u32; n];
        for x in 0..n {
            let inv = (0..n)
                .find(|&y| t[x][y] == 0 && t[y][x] == 0)
                .ok_or_else(|| crate::Error::Structural(format!("element {x} has no inverse")))?;
            inverse[x] = inv as u32;
        }
        for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    let l = t[t[x][y] as usize][z];
                    let r = t[x][t[y][z] as usize];
                    if l != r {
                        return structural("multiplication table is not associative");
                    }
                }
            }
        }
        Ok(FiniteGroup { table: t, inverse, names })
    }

    pub fn cyclic(n: usize) -> FiniteGroup {
        let table = (0..n)
            .map(|x| (0..n).map(|y| ((x + y) % n) as u32).collect())
            .collect();
        FiniteGroup::from_table(table, None).expect("cyclic table is a group")
    }

    pub fn order(&self) -> usize {
        self.table.len()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum VertexGroup {
    Trivial,
    Finite(Arc<FiniteGroup>),
    Free { rank: u32, names: Vec<String> },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GroupKind {
    Trivial,
    Finite,
    Free,
}

impl fmt::Display for GroupKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupKind::Trivial => write!(f, "trivial"),
            GroupKind::Finite => write!(f, "finite"),
            GroupKind::Free => write!(f, "free"),
        }
    }
}

impl VertexGroup {
    pub fn free(rank: u32) -> VertexGroup {
        let names = (0..rank)
            .map(|i| if rank == 1 { "c".to_string() } else { format!("c{i}") })
            .collect();
        VertexGroup::Free { rank, names }
    }

    pub fn finite(g: FiniteGroup) -> VertexGroup {
        if g.order() == 1 {
            VertexGroup::Trivial
        } else {
            VertexGroup::Finite(Arc::new(g))
        }
    }

    pub fn kind(&self) -> GroupKind {
        match self {
            VertexGroup::Trivial => GroupKind::Trivial,
            VertexGroup::Finite(_) => GroupKind::Finite,
            VertexGroup::Free { .. } => GroupKind::Free,
        }
    }

    pub fn is_trivial(&self) -> bool {
        matches!(self, VertexGroup::Trivial)
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, VertexGroup::Free { .. })
    }

    /// Cardinality for finite groups (1 for the trivial group).
    pub fn order(&self) -> Option<usize> {
        match self {
            VertexGroup::Trivial => Some(1),
            VertexGroup::Finite(g) => Some(g.order()),
            VertexGroup::Free { .. } => None,
        }
    }

    pub fn identity(&self) -> Elem {
        match self {
            VertexGroup::Free { .. } => Elem::Word(Vec::new()),
            _ => Elem::Fin(0),
        }
    }

    pub fn is_identity(&self, g: &Elem) -> bool {
        match g {
            Elem::Fin(x) => *x == 0,
            Elem::Word(w) => w.is_empty(),
        }
    }

    pub fn contains(&self, g: &Elem) -> bool {
        match (self, g) {
            (VertexGroup::Trivial, Elem::Fin(0)) => true,
            (VertexGroup::Finite(t), Elem::Fin(x)) => (*x as usize) < t.order(),
            (VertexGroup::Free { rank, .. }, Elem::Word(w)) => {
                w.iter().all(|&l| l != 0 && l.unsigned_abs() <= *rank)
                    && w.windows(2).all(|p| p[0] != -p[1])
            }
            _ => false,
        }
    }

    pub fn multiply(&self, g: &Elem, h: &Elem) -> Result<Elem> {
        match (self, g, h) {
            (VertexGroup::Trivial, Elem::Fin(0), Elem::Fin(0)) => Ok(Elem::Fin(0)),
            (VertexGroup::Finite(t), Elem::Fin(x), Elem::Fin(y))
                if (*x as usize) < t.order() && (*y as usize) < t.order() =>
            {
                Ok(Elem::Fin(t.table[*x as usize][*y as usize]))
            }
            (VertexGroup::Free { .. }, Elem::Word(a), Elem::Word(b)) => {
                Ok(Elem::Word(free_reduce(a.iter().chain(b.iter()).copied())))
            }
            _ => structural(format!("cannot multiply {g:?} and {h:?} in a {} group", self.kind())),
        }
    }

    /// Multiplication for elements already known to belong to the group.
    pub fn mul(&self, g: &Elem, h: &Elem) -> Elem {
        self.multiply(g, h).expect("elements belong to the vertex group")
    }

    pub fn invert(&self, g: &Elem) -> Elem {
        match (self, g) {
            (VertexGroup::Finite(t), Elem::Fin(x)) => Elem::Fin(t.inverse[*x as usize]),
            (_, Elem::Word(w)) => Elem::Word(invert_word(w)),
            (_, e) => e.clone(),
        }
    }

    /// All elements of a finite group in id order.
    pub fn elements(&self) -> Option<Vec<Elem>> {
        self.order().map(|n| (0..n as u32).map(Elem::Fin).collect())
    }

    /// Canonical representative of the conjugacy class of `g`.
    pub fn conjugacy_canonical(&self, g: &Elem) -> Elem {
        match (self, g) {
            (VertexGroup::Finite(t), Elem::Fin(x)) => {
                let n = t.order();
                (0..n)
                    .map(|y| {
                        let yi = t.inverse[y] as usize;
                        t.table[t.table[y][*x as usize] as usize][yi]
                    })
                    .min()
                    .map(Elem::Fin)
                    .unwrap()
            }
            (_, Elem::Word(w)) => {
                let mut w = w.clone();
                while w.len() >= 2 && w[0] == -w[w.len() - 1] {
                    w.remove(0);
                    w.pop();
                }
                let k = w.len();
                (0..k.max(1))
                    .map(|r| {
                        let mut v = w[r.min(k)..].to_vec();
                        v.extend_from_slice(&w[..r.min(k)]);
                        v
                    })
                    .min()
                    .map(Elem::Word)
                    .unwrap_or(Elem::Word(Vec::new()))
            }
            (_, e) => e.clone(),
        }
    }

    /// Small elements used by search ladders: `c, c⁻¹, c², c⁻², …` over the
    /// generators, up to exponent `bound`.
    pub fn ladder(&self, bound: u32) -> Vec<Elem> {
        match self {
            VertexGroup::Free { rank, .. } => {
                let mut out = Vec::new();
                for m in 1..=bound as i32 {
                    for gen in 1..=*rank as i32 {
                        out.push(Elem::Word(vec![gen; m as usize]));
                        out.push(Elem::Word(vec![-gen; m as usize]));
                    }
                }
                out
            }
            _ => self.elements().unwrap_or_default(),
        }
    }

    pub fn format(&self, g: &Elem) -> String {
        match (self, g) {
            (VertexGroup::Finite(t), Elem::Fin(x)) => t.names[*x as usize].clone(),
            (VertexGroup::Free { names, .. }, Elem::Word(w)) => {
                if w.is_empty() {
                    return "1".to_string();
                }
                let mut parts = Vec::new();
                let mut i = 0;
                while i < w.len() {
                    let mut j = i;
                    while j < w.len() && w[j] == w[i] {
                        j += 1;
                    }
                    let name = &names[(w[i].unsigned_abs() - 1) as usize];
                    let exp = (j - i) as i64 * w[i].signum() as i64;
                    parts.push(if exp == 1 { name.clone() } else { format!("{name}^{exp}") });
                    i = j;
                }
                parts.join(" ")
            }
            _ => "1".to_string(),
        }
    }
}

/// Isomorphism between vertex groups, given by generator images.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GroupHom {
    Trivial,
    /// Image of every element id.
    Finite(Vec<u32>),
    /// Images of the generators, plus (for rank > 1) images of the generators
    /// under the inverse isomorphism.
    Free { images: Vec<Vec<Letter>>, inverse: Vec<Vec<Letter>> },
}

impl GroupHom {
    pub fn identity(g: &VertexGroup) -> GroupHom {
        match g {
            VertexGroup::Trivial => GroupHom::Trivial,
            VertexGroup::Finite(t) => GroupHom::Finite((0..t.order() as u32).collect()),
            VertexGroup::Free { rank, .. } => {
                let gens: Vec<Vec<Letter>> = (1..=*rank as i32).map(|i| vec![i]).collect();
                GroupHom::Free { images: gens.clone(), inverse: gens }
            }
        }
    }

    /// Free-group isomorphism from generator images. For rank 1 the inverse
    /// is computed; for higher rank it must be supplied.
    pub fn free(images: Vec<Vec<Letter>>, inverse: Option<Vec<Vec<Letter>>>) -> Result<GroupHom> {
        let images: Vec<Vec<Letter>> = images.into_iter().map(free_reduce).collect();
        let inverse = match inverse {
            Some(inv) => inv.into_iter().map(free_reduce).collect(),
            None if images.len() == 1 => match images[0].as_slice() {
                [l] if l.abs() == 1 => vec![vec![*l]],
                _ => return structural("rank-1 vertex isomorphism must send c to c or c^-1"),
            },
            None => return structural("free vertex isomorphism of rank > 1 needs declared inverse images"),
        };
        Ok(GroupHom::Free { images, inverse })
    }

    /// Checks that this is an isomorphism `src -> dst`.
    pub fn check(&self, src: &VertexGroup, dst: &VertexGroup) -> Result<()> {
        match (self, src, dst) {
            (GroupHom::Trivial, VertexGroup::Trivial, _) => Ok(()),
            (GroupHom::Finite(m), VertexGroup::Finite(s), VertexGroup::Finite(d)) => {
                let n = s.order();
                if m.len() != n || d.order() != n {
                    return structural("finite vertex map has wrong size");
                }
                let mut seen = vec![false; n];
                for &x in m {
                    if x as usize >= n || seen[x as usize] {
                        return structural("finite vertex map is not a bijection");
                    }
                    seen[x as usize] = true;
                }
                for x in 0..n {
                    for y in 0..n {
                        let l = m[s.table[x][y] as usize];
                        let r = d.table[m[x] as usize][m[y] as usize];
                        if l != r {
                            return structural("finite vertex map is not a homomorphism");
                        }
                    }
                }
                Ok(())
            }
            (GroupHom::Free { images, inverse }, VertexGroup::Free { rank: rs, .. }, VertexGroup::Free { rank: rd, .. }) => {
                if rs != rd || images.len() != *rs as usize || inverse.len() != *rs as usize {
                    return structural("free vertex map has wrong rank");
                }
                let ok_letters = |w: &Vec<Letter>| w.iter().all(|&l| l != 0 && l.unsigned_abs() <= *rs);
                if !images.iter().all(ok_letters) || !inverse.iter().all(ok_letters) {
                    return structural("free vertex map uses unknown generators");
                }
                for i in 1..=*rs as i32 {
                    let there = self.apply(&Elem::Word(vec![i]))?;
                    let back = self.preimage(&there)?;
                    if back != Elem::Word(vec![i]) {
                        return structural("declared inverse does not invert the vertex map");
                    }
                    let back = self.preimage(&Elem::Word(vec![i]))?;
                    if self.apply(&back)? != Elem::Word(vec![i]) {
                        return structural("declared inverse does not invert the vertex map");
                    }
                }
                Ok(())
            }
            _ => structural("vertex map kind does not match the vertex groups"),
        }
    }

    pub fn apply(&self, g: &Elem) -> Result<Elem> {
        match (self, g) {
            (GroupHom::Trivial, Elem::Fin(0)) => Ok(Elem::Fin(0)),
            (GroupHom::Finite(m), Elem::Fin(x)) if (*x as usize) < m.len() => Ok(Elem::Fin(m[*x as usize])),
            (GroupHom::Free { images, .. }, Elem::Word(w)) => Ok(Elem::Word(substitute(images, w)?)),
            _ => structural(format!("vertex map cannot be applied to {g:?}")),
        }
    }

    pub fn preimage(&self, g: &Elem) -> Result<Elem> {
        match (self, g) {
            (GroupHom::Trivial, Elem::Fin(0)) => Ok(Elem::Fin(0)),
            (GroupHom::Finite(m), Elem::Fin(x)) => m
                .iter()
                .position(|y| y == x)
                .map(|p| Elem::Fin(p as u32))
                .ok_or_else(|| crate::Error::Structural("element not in image".into())),
            (GroupHom::Free { inverse, .. }, Elem::Word(w)) => Ok(Elem::Word(substitute(inverse, w)?)),
            _ => precondition(format!("vertex map cannot pull back {g:?}")),
        }
    }

    pub fn compose(&self, after: &GroupHom) -> GroupHom {
        // returns after ∘ self
        match (self, after) {
            (GroupHom::Finite(a), GroupHom::Finite(b)) => {
                GroupHom::Finite(a.iter().map(|&x| b[x as usize]).collect())
            }
            (GroupHom::Free { images: ia, inverse: va }, GroupHom::Free { images: ib, inverse: vb }) => {
                let images = ia.iter().map(|w| substitute(ib, w).unwrap()).collect();
                let inverse = vb.iter().map(|w| substitute(va, w).unwrap()).collect();
                GroupHom::Free { images, inverse }
            }
            _ => GroupHom::Trivial,
        }
    }
}

fn substitute(images: &[Vec<Letter>], w: &[Letter]) -> Result<Vec<Letter>> {
    let mut out = Vec::new();
    for &l in w {
        let idx = (l.unsigned_abs() as usize).wrapping_sub(1);
        let img = images
            .get(idx)
            .ok_or_else(|| crate::Error::Structural(format!("generator {l} out of range")))?;
        if l > 0 {
            out.extend_from_slice(img);
        } else {
            out.extend(invert_word(img));
        }
    }
    Ok(free_reduce(out))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c2() -> VertexGroup {
        VertexGroup::finite(FiniteGroup::cyclic(2))
    }

    #[test]
    fn identity_law_and_order_two() {
        let g = c2();
        let s = Elem::Fin(1);
        assert_eq!(g.mul(&g.identity(), &s), s);
        assert_eq!(g.mul(&s, &s), Elem::Fin(0));
        assert_eq!(g.invert(&s), s);
        assert_eq!(g.invert(&g.identity()), g.identity());
    }

    #[test]
    fn free_words_concatenate_and_reduce() {
        let z = VertexGroup::free(1);
        let c = Elem::word(&[1]);
        assert_eq!(z.mul(&c, &c), Elem::word(&[1, 1]));
        assert_eq!(z.invert(&Elem::word(&[1, 1])), Elem::word(&[-1, -1]));
        assert_eq!(z.mul(&Elem::word(&[1, 1]), &Elem::word(&[-1])), c);
    }

    #[test]
    fn vertex_automorphisms() {
        let z = VertexGroup::free(1);
        let id = GroupHom::identity(&z);
        let flip = GroupHom::free(vec![vec![-1]], None).unwrap();
        flip.check(&z, &z).unwrap();
        assert_eq!(id.apply(&Elem::word(&[1, 1])).unwrap(), Elem::word(&[1, 1]));
        assert_eq!(flip.apply(&Elem::word(&[1, 1])).unwrap(), Elem::word(&[-1, -1]));
        let g = c2();
        let idc = GroupHom::identity(&g);
        assert_eq!(idc.apply(&Elem::Fin(1)).unwrap(), Elem::Fin(1));
    }

    #[test]
    fn mismatched_groups_are_rejected() {
        let z = VertexGroup::free(1);
        assert!(z.multiply(&Elem::Fin(1), &Elem::word(&[1])).is_err());
        assert!(c2().multiply(&Elem::Fin(3), &Elem::Fin(0)).is_err());
    }

    #[test]
    fn table_is_relabelled_to_identity_zero() {
        // identity is element 1 in this table
        let t = vec![vec![1, 0], vec![0, 1]];
        let g = FiniteGroup::from_table(t, Some(vec!["s".into(), "1".into()])).unwrap();
        assert_eq!(g.table[0][1], 1);
        assert_eq!(g.names[0], "1");
        assert!(FiniteGroup::from_table(vec![vec![0, 0], vec![0, 0]], None).is_err());
    }

    #[test]
    fn rank_two_inverse_is_checked() {
        let z2 = VertexGroup::free(2);
        // x -> xy, y -> y; inverse x -> x y^-1
        let good = GroupHom::free(vec![vec![1, 2], vec![2]], Some(vec![vec![1, -2], vec![2]])).unwrap();
        good.check(&z2, &z2).unwrap();
        let bad = GroupHom::free(vec![vec![1, 2], vec![2]], Some(vec![vec![1], vec![2]])).unwrap();
        assert!(bad.check(&z2, &z2).is_err());
    }

    fn groups_up_to(n: usize) -> Vec<FiniteGroup> {
        let mut out: Vec<FiniteGroup> = (2..=n).map(FiniteGroup::cyclic).collect();
        // S3 as permutations of {0,1,2}
        let perms: Vec<[usize; 3]> =
            vec![[0, 1, 2], [1, 0, 2], [0, 2, 1], [2, 1, 0], [1, 2, 0], [2, 0, 1]];
        let idx = |p: [usize; 3]| perms.iter().position(|q| *q == p).unwrap() as u32;
        let table = perms
            .iter()
            .map(|p| perms.iter().map(|q| idx([p[q[0]], p[q[1]], p[q[2]]])).collect())
            .collect();
        out.push(FiniteGroup::from_table(table, None).unwrap());
        out
    }

    #[test]
    fn finite_fixtures_are_associative_with_inverses() {
        for fg in groups_up_to(8) {
            let g = VertexGroup::finite(fg);
            let els = g.elements().unwrap();
            for x in &els {
                let xi = g.invert(x);
                assert!(g.is_identity(&g.mul(x, &xi)));
                assert!(g.is_identity(&g.mul(&xi, x)));
                for y in &els {
                    for z in &els {
                        assert_eq!(g.mul(&g.mul(x, y), z), g.mul(x, &g.mul(y, z)));
                    }
                }
            }
        }
    }

    proptest::proptest! {
        #[test]
        fn free_hom_respects_products(a in proptest::collection::vec(proptest::prop_oneof![-2i32..=-1, 1i32..=2], 0..8),
                                      b in proptest::collection::vec(proptest::prop_oneof![-2i32..=-1, 1i32..=2], 0..8)) {
            let z2 = VertexGroup::free(2);
            let hom = GroupHom::free(vec![vec![1, 2], vec![2]], Some(vec![vec![1, -2], vec![2]])).unwrap();
            let x = Elem::word(&a);
            let y = Elem::word(&b);
            let lhs = hom.apply(&z2.mul(&x, &y)).unwrap();
            let rhs = z2.mul(&hom.apply(&x).unwrap(), &hom.apply(&y).unwrap());
            proptest::prop_assert_eq!(lhs, rhs);
            proptest::prop_assert_eq!(hom.preimage(&hom.apply(&x).unwrap()).unwrap(), x);
        }
    }
}
