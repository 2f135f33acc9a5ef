//! Names of connected spherical and Euclidean Coxeter diagrams, recognized
//! combinatorially (no Gram computation).

use crate::classify::ComponentKind;
use crate::coxeter::{CoxeterMatrix, Exponent};

/// Catalog type of a connected diagram: a name like `B4` or `~A2`, or `None`
/// with kind `NonAffine`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CatalogEntry {
    pub kind: ComponentKind,
    pub name: Option<String>,
}

impl CatalogEntry {
    fn sph(name: String) -> Self {
        Self { kind: ComponentKind::Spherical, name: Some(name) }
    }
    fn euc(name: String) -> Self {
        Self { kind: ComponentKind::AffineEuclidean, name: Some(name) }
    }
    fn non() -> Self {
        Self { kind: ComponentKind::NonAffine, name: None }
    }
}

/// Looks up the diagram spanned by `subset`, which must be connected.
pub fn lookup(cm: &CoxeterMatrix, subset: &[usize]) -> CatalogEntry {
    let n = subset.len();
    let label = |a: usize, b: usize| cm.get(subset[a], subset[b]);
    if n == 1 {
        return CatalogEntry::sph("A1".into());
    }
    if n == 2 {
        return match label(0, 1) {
            Exponent::Infinite => CatalogEntry::euc("~A1".into()),
            Exponent::Finite(3) => CatalogEntry::sph("A2".into()),
            Exponent::Finite(4) => CatalogEntry::sph("B2".into()),
            Exponent::Finite(6) => CatalogEntry::sph("G2".into()),
            Exponent::Finite(m) => CatalogEntry::sph(format!("I2({m})")),
        };
    }
    let mut adj = vec![Vec::new(); n];
    let mut heavy = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            match label(a, b) {
                Exponent::Finite(2) => {}
                Exponent::Infinite => return CatalogEntry::non(),
                Exponent::Finite(m) => {
                    adj[a].push(b);
                    adj[b].push(a);
                    if m != 3 {
                        heavy.push((a, b, m));
                    }
                }
            }
        }
    }
    let edges: usize = adj.iter().map(Vec::len).sum::<usize>() / 2;
    let deg = |v: usize| adj[v].len();
    if edges == n {
        let cycle = (0..n).all(|v| deg(v) == 2);
        return if cycle && heavy.is_empty() {
            CatalogEntry::euc(format!("~A{}", n - 1))
        } else {
            CatalogEntry::non()
        };
    }
    if edges != n - 1 {
        return CatalogEntry::non();
    }
    let branches: Vec<usize> = (0..n).filter(|&v| deg(v) >= 3).collect();
    if branches.is_empty() {
        path_entry(n, &adj, &heavy)
    } else {
        branched_entry(n, &adj, &heavy, &branches)
    }
}

/// Vertices of a path from one end, and the labels along it.
fn path_order(n: usize, adj: &[Vec<usize>], heavy: &[(usize, usize, u32)]) -> Vec<u32> {
    let start = (0..n).find(|&v| adj[v].len() == 1).expect("path has an end");
    let mut order = vec![start];
    let mut prev = usize::MAX;
    let mut cur = start;
    while let Some(&next) = adj[cur].iter().find(|&&x| x != prev) {
        order.push(next);
        prev = cur;
        cur = next;
    }
    order
        .windows(2)
        .map(|w| {
            heavy
                .iter()
                .find(|&&(a, b, _)| (a, b) == (w[0].min(w[1]), w[0].max(w[1])))
                .map_or(3, |&(_, _, m)| m)
        })
        .collect()
}

fn path_entry(n: usize, adj: &[Vec<usize>], heavy: &[(usize, usize, u32)]) -> CatalogEntry {
    let mut labels = path_order(n, adj, heavy);
    if labels[0] == 3 && labels[n - 2] != 3 {
        labels.reverse();
    }
    let inner_plain = |l: &[u32]| l.iter().all(|&m| m == 3);
    match heavy.len() {
        0 => CatalogEntry::sph(format!("A{n}")),
        1 => {
            let (m, at_end) = (heavy[0].2, labels[0] != 3);
            match (m, at_end) {
                (4, true) => CatalogEntry::sph(format!("B{n}")),
                (4, false) if n == 4 => CatalogEntry::sph("F4".into()),
                (4, false) if n == 5 && (labels == [3, 3, 4, 3] || labels == [3, 4, 3, 3]) => {
                    CatalogEntry::euc("~F4".into())
                }
                (5, true) if n == 3 || n == 4 => CatalogEntry::sph(format!("H{n}")),
                (6, true) if n == 3 => CatalogEntry::euc("~G2".into()),
                _ => CatalogEntry::non(),
            }
        }
        2 if labels[0] == 4 && labels[n - 2] == 4 && inner_plain(&labels[1..n - 2]) => {
            CatalogEntry::euc(format!("~C{}", n - 1))
        }
        _ => CatalogEntry::non(),
    }
}

/// Lengths and far-end labels of the arms at a branch vertex.
fn arms(adj: &[Vec<usize>], heavy: &[(usize, usize, u32)], center: usize) -> Vec<(usize, Vec<u32>)> {
    let label = |a: usize, b: usize| {
        heavy
            .iter()
            .find(|&&(x, y, _)| (x, y) == (a.min(b), a.max(b)))
            .map_or(3, |&(_, _, m)| m)
    };
    adj[center]
        .iter()
        .map(|&first| {
            let mut labels = vec![label(center, first)];
            let (mut prev, mut cur, mut len) = (center, first, 1);
            while adj[cur].len() == 2 {
                let next = *adj[cur].iter().find(|&&x| x != prev).expect("degree two");
                labels.push(label(cur, next));
                prev = cur;
                cur = next;
                len += 1;
            }
            (if adj[cur].len() == 1 { len } else { usize::MAX }, labels)
        })
        .collect()
}

fn branched_entry(
    n: usize,
    adj: &[Vec<usize>],
    heavy: &[(usize, usize, u32)],
    branches: &[usize],
) -> CatalogEntry {
    if branches.len() == 2 {
        let both_forks = heavy.is_empty()
            && branches.iter().all(|&b| {
                adj[b].len() == 3 && arms(adj, heavy, b).iter().filter(|(l, _)| *l == 1).count() == 2
            });
        return if both_forks {
            CatalogEntry::euc(format!("~D{}", n - 1))
        } else {
            CatalogEntry::non()
        };
    }
    if branches.len() != 1 {
        return CatalogEntry::non();
    }
    let c = branches[0];
    let a = arms(adj, heavy, c);
    if adj[c].len() == 4 {
        let plain = heavy.is_empty() && a.iter().all(|(l, _)| *l == 1);
        return if plain { CatalogEntry::euc("~D4".into()) } else { CatalogEntry::non() };
    }
    if adj[c].len() != 3 {
        return CatalogEntry::non();
    }
    let mut lens: Vec<usize> = a.iter().map(|(l, _)| *l).collect();
    lens.sort_unstable();
    match heavy.len() {
        0 => match lens.as_slice() {
            [1, 1, k] => CatalogEntry::sph(format!("D{}", k + 3)),
            [1, 2, 2] => CatalogEntry::sph("E6".into()),
            [1, 2, 3] => CatalogEntry::sph("E7".into()),
            [1, 2, 4] => CatalogEntry::sph("E8".into()),
            [2, 2, 2] => CatalogEntry::euc("~E6".into()),
            [1, 3, 3] => CatalogEntry::euc("~E7".into()),
            [1, 2, 5] => CatalogEntry::euc("~E8".into()),
            _ => CatalogEntry::non(),
        },
        1 if heavy[0].2 == 4 && lens[0] == 1 && lens[1] == 1 => {
            // The 4 must be the last edge of the longest arm.
            let ok = a.iter().any(|(l, labels)| {
                *l == lens[2] && labels.last() == Some(&4) && labels[..labels.len() - 1].iter().all(|&m| m == 3)
            });
            if ok {
                CatalogEntry::euc(format!("~B{}", n - 1))
            } else {
                CatalogEntry::non()
            }
        }
        _ => CatalogEntry::non(),
    }
}

/// Catalog name of every component, joined with `x`.
pub fn diagram_name(cm: &CoxeterMatrix) -> Option<String> {
    let parts: Option<Vec<String>> = crate::classify::irreducible_components(cm)
        .iter()
        .map(|c| lookup(cm, c).name)
        .collect();
    parts.map(|p| p.join(" x "))
}
