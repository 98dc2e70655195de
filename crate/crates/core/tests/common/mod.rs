//! Brute-force reference implementations used to cross-check the library.
//!
//! Everything here works on explicit S-relations (every pair `(u, V)`, not
//! generators) and quantifies over all subsets literally. Only for tiny frames.
#![allow(dead_code)]

pub mod corpus;

use std::collections::BTreeSet;

use veltman::model::{GenFrame, GenModel, OrdModel};
use veltman::{Antichain, Formula, WorldSet};

/// `fam[w][u]` has bit `V` set iff `u S_w V`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Explicit {
    pub n: usize,
    pub succ: Vec<u64>,
    pub fam: Vec<Vec<u64>>,
}

pub fn subsets_of(n: usize) -> impl Iterator<Item = u64> + Clone {
    0..(1u64 << n)
}

pub fn is_sub(a: u64, b: u64) -> bool {
    a & !b == 0
}

impl Explicit {
    pub fn holds(&self, w: usize, u: usize, v: u64) -> bool {
        self.fam[w][u] >> v & 1 == 1
    }

    pub fn r(&self, w: usize, u: usize) -> bool {
        self.succ[w] >> u & 1 == 1
    }

    pub fn r_of(&self, v: u64) -> u64 {
        (0..self.n)
            .filter(|&x| v >> x & 1 == 1)
            .fold(0, |acc, x| acc | self.succ[x])
    }

    /// From generators: `u S_w V` iff `u ∈ R[w]`, `V ⊆ R[w]` and some
    /// generator lies inside `V`.
    pub fn of_frame(f: &GenFrame) -> Explicit {
        let n = f.len();
        let succ: Vec<u64> = (0..n).map(|w| f.succ(w).bits()).collect();
        let fam = (0..n)
            .map(|w| {
                (0..n)
                    .map(|u| {
                        let mut bits = 0u64;
                        if succ[w] >> u & 1 == 1 {
                            for v in subsets_of(n) {
                                let inside = is_sub(v, succ[w]);
                                let gen = f.generators(w, u).iter().any(|g| is_sub(g.bits(), v));
                                if inside && gen {
                                    bits |= 1 << v;
                                }
                            }
                        }
                        bits
                    })
                    .collect()
            })
            .collect();
        Explicit { n, succ, fam }
    }

    /// Minimal elements of each `S_w(u)`, as the library stores them.
    pub fn to_frame(&self) -> GenFrame {
        let n = self.n;
        let succ = self.succ.iter().map(|&b| WorldSet::from_bits(b)).collect();
        let s = (0..n)
            .map(|w| {
                (0..n)
                    .map(|u| {
                        subsets_of(n)
                            .filter(|&v| self.holds(w, u, v))
                            .map(WorldSet::from_bits)
                            .collect::<Antichain>()
                    })
                    .collect()
            })
            .collect();
        let names = (0..n).map(|i| format!("w{i}")).collect();
        GenFrame::from_parts(names, succ, s)
    }

    /// Relabel worlds by `perm` (world `i` becomes `perm[i]`).
    pub fn permute(&self, perm: &[usize]) -> Explicit {
        let n = self.n;
        let map_set = |v: u64| {
            (0..n)
                .filter(|&x| v >> x & 1 == 1)
                .fold(0u64, |acc, x| acc | 1 << perm[x])
        };
        let mut succ = vec![0; n];
        let mut fam = vec![vec![0u64; n]; n];
        for w in 0..n {
            succ[perm[w]] = map_set(self.succ[w]);
            for u in 0..n {
                for v in subsets_of(n) {
                    if self.holds(w, u, v) {
                        fam[perm[w]][perm[u]] |= 1 << map_set(v);
                    }
                }
            }
        }
        Explicit { n, succ, fam }
    }

    /// Least relabelling, as an isomorphism invariant.
    pub fn canonical(&self) -> Explicit {
        permutations(self.n)
            .iter()
            .map(|p| self.permute(p))
            .min()
            .expect("at least one permutation")
    }
}

pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out
}

/// Transitive and irreflexive (finite, hence conversely well-founded).
pub fn is_strict_order(n: usize, succ: &[u64]) -> bool {
    (0..n).all(|w| {
        succ[w] >> w & 1 == 0
            && (0..n)
                .filter(|&u| succ[w] >> u & 1 == 1)
                .all(|u| is_sub(succ[u], succ[w]))
    })
}

/// The generalized frame clauses (a)-(e), checked literally on `S_w`.
pub fn legal_s(n: usize, succ: &[u64], w: usize, fam: &[u64]) -> bool {
    let rw = succ[w];
    let holds = |u: usize, v: u64| fam[u] >> v & 1 == 1;
    for u in 0..n {
        for v in subsets_of(n) {
            if holds(u, v) && (rw >> u & 1 == 0 || v == 0 || !is_sub(v, rw)) {
                return false;
            }
        }
    }
    for u in (0..n).filter(|&u| rw >> u & 1 == 1) {
        if !holds(u, 1 << u) {
            return false;
        }
        for v in (0..n).filter(|&v| succ[u] >> v & 1 == 1) {
            if !holds(u, 1 << v) {
                return false;
            }
        }
        for v in subsets_of(n).filter(|&v| holds(u, v)) {
            for z in subsets_of(n).filter(|&z| is_sub(v, z) && is_sub(z, rw)) {
                if !holds(u, z) {
                    return false;
                }
            }
            // Every choice of Z_x with x S_w Z_x for x ∈ V.
            let members: Vec<usize> = (0..n).filter(|&x| v >> x & 1 == 1).collect();
            let options: Vec<Vec<u64>> = members
                .iter()
                .map(|&x| subsets_of(n).filter(|&z| holds(x, z)).collect())
                .collect();
            let mut stack = vec![(0usize, 0u64)];
            while let Some((i, acc)) = stack.pop() {
                if i == members.len() {
                    if !holds(u, acc) {
                        return false;
                    }
                    continue;
                }
                for &z in &options[i] {
                    stack.push((i + 1, acc | z));
                }
            }
        }
    }
    true
}

/// Every legal generalized frame on `n ≤ 3` worlds, under every labelling.
pub fn naive_frames(n: usize) -> Vec<Explicit> {
    assert!(n <= 3);
    let mut out = Vec::new();
    for rbits in 0u64..1 << (n * n) {
        let succ: Vec<u64> = (0..n).map(|w| rbits >> (w * n) & ((1 << n) - 1)).collect();
        if !is_strict_order(n, &succ) {
            continue;
        }
        // Candidate pairs (u, V) with u ∈ R[w], ∅ ≠ V ⊆ R[w].
        let per_w: Vec<Vec<Vec<u64>>> = (0..n)
            .map(|w| {
                let rw = succ[w];
                let pairs: Vec<(usize, u64)> = (0..n)
                    .filter(|&u| rw >> u & 1 == 1)
                    .flat_map(|u| {
                        subsets_of(n)
                            .filter(move |&v| v != 0 && is_sub(v, rw))
                            .map(move |v| (u, v))
                    })
                    .collect();
                assert!(pairs.len() < 20);
                (0u64..1 << pairs.len())
                    .map(|mask| {
                        let mut fam = vec![0u64; n];
                        for (k, &(u, v)) in pairs.iter().enumerate() {
                            if mask >> k & 1 == 1 {
                                fam[u] |= 1 << v;
                            }
                        }
                        fam
                    })
                    .filter(|fam| legal_s(n, &succ, w, fam))
                    .collect()
            })
            .collect();
        let mut combos: Vec<Vec<Vec<u64>>> = vec![vec![]];
        for opts in &per_w {
            combos = combos
                .into_iter()
                .flat_map(|c| {
                    opts.iter().map(move |o| {
                        let mut c = c.clone();
                        c.push(o.clone());
                        c
                    })
                })
                .collect();
        }
        for fam in combos {
            out.push(Explicit {
                n,
                succ: succ.clone(),
                fam,
            });
        }
    }
    out
}

// ---- frame conditions, quantifying over every subset ----

pub fn m_gen(e: &Explicit) -> bool {
    let n = e.n;
    (0..n).all(|w| {
        (0..n).all(|u| {
            subsets_of(n).filter(|&v| e.holds(w, u, v)).all(|v| {
                subsets_of(n)
                    .filter(|&v1| is_sub(v1, v))
                    .any(|v1| e.holds(w, u, v1) && is_sub(e.r_of(v1), e.succ[u]))
            })
        })
    })
}

pub fn m0_gen(e: &Explicit) -> bool {
    let n = e.n;
    for w in 0..n {
        for u in (0..n).filter(|&u| e.r(w, u)) {
            for x in (0..n).filter(|&x| e.r(u, x)) {
                for v in subsets_of(n).filter(|&v| e.holds(w, x, v)) {
                    let ok = subsets_of(n)
                        .filter(|&v1| is_sub(v1, v))
                        .any(|v1| e.holds(w, u, v1) && is_sub(e.r_of(v1), e.succ[u]));
                    if !ok {
                        return false;
                    }
                }
            }
        }
    }
    true
}

pub fn p_gen(e: &Explicit) -> bool {
    let n = e.n;
    for w in 0..n {
        for w1 in (0..n).filter(|&x| e.r(w, x)) {
            for u in (0..n).filter(|&u| e.r(w1, u)) {
                for v in subsets_of(n).filter(|&v| e.holds(w, u, v)) {
                    if !subsets_of(n).any(|v1| is_sub(v1, v) && e.holds(w1, u, v1)) {
                        return false;
                    }
                }
            }
        }
    }
    true
}

pub fn p0_gen(e: &Explicit) -> bool {
    let n = e.n;
    for w in 0..n {
        for x in (0..n).filter(|&x| e.r(w, x)) {
            for u in (0..n).filter(|&u| e.r(x, u)) {
                for v in subsets_of(n).filter(|&v| e.holds(w, u, v)) {
                    for z in subsets_of(n) {
                        let hits = (0..n)
                            .filter(|&y| v >> y & 1 == 1)
                            .all(|y| e.succ[y] & z != 0);
                        if hits && !subsets_of(n).any(|z1| is_sub(z1, z) && e.holds(x, u, z1)) {
                            return false;
                        }
                    }
                }
            }
        }
    }
    true
}

pub fn r_gen(e: &Explicit) -> bool {
    let n = e.n;
    for w in 0..n {
        for x in (0..n).filter(|&x| e.r(w, x)) {
            for u in (0..n).filter(|&u| e.r(x, u)) {
                let choice: Vec<u64> = subsets_of(n)
                    .filter(|&c| is_sub(c, e.succ[x]))
                    .filter(|&c| subsets_of(n).all(|z| !e.holds(x, u, z) || z & c != 0))
                    .collect();
                for v in subsets_of(n).filter(|&v| e.holds(w, u, v)) {
                    for &c in &choice {
                        let ok = subsets_of(n)
                            .any(|u1| is_sub(u1, v) && e.holds(w, x, u1) && is_sub(e.r_of(u1), c));
                        if !ok {
                            return false;
                        }
                    }
                }
            }
        }
    }
    true
}

pub fn w_gen(e: &Explicit) -> bool {
    let n = e.n;
    for w in 0..n {
        for u in 0..n {
            for v in subsets_of(n).filter(|&v| e.holds(w, u, v)) {
                let pre = (0..n)
                    .filter(|&x| e.holds(w, x, v))
                    .fold(0u64, |acc, x| acc | 1 << x);
                let ok = subsets_of(n)
                    .any(|v1| is_sub(v1, v) && e.holds(w, u, v1) && e.r_of(v1) & pre == 0);
                if !ok {
                    return false;
                }
            }
        }
    }
    true
}

// ---- forcing, clause by clause ----

pub trait Valued {
    fn atom(&self, p: &str) -> u64;
}

impl Valued for GenModel {
    fn atom(&self, p: &str) -> u64 {
        self.valuation.get(p).map(|s| s.bits()).unwrap_or(0)
    }
}

impl Valued for OrdModel {
    fn atom(&self, p: &str) -> u64 {
        self.valuation.get(p).map(|s| s.bits()).unwrap_or(0)
    }
}

/// Literal forcing in a generalized model: `w ⊩ A ▷ B` iff every `u` with
/// `w R u`, `u ⊩ A` has some `V` with `u S_w V` and `V ⊩ B`.
pub fn gen_forces(m: &GenModel, e: &Explicit, w: usize, f: &Formula) -> bool {
    let n = e.n;
    let all = |w: usize, pred: &dyn Fn(usize) -> bool| (0..n).filter(|&u| e.r(w, u)).all(pred);
    match f {
        Formula::Var(p) => m.atom(p) >> w & 1 == 1,
        Formula::Bot => false,
        Formula::Top => true,
        Formula::Neg(a) => !gen_forces(m, e, w, a),
        Formula::And(a, b) => gen_forces(m, e, w, a) && gen_forces(m, e, w, b),
        Formula::Or(a, b) => gen_forces(m, e, w, a) || gen_forces(m, e, w, b),
        Formula::Impl(a, b) => !gen_forces(m, e, w, a) || gen_forces(m, e, w, b),
        Formula::Box(a) => all(w, &|u| gen_forces(m, e, u, a)),
        Formula::Dia(a) => !all(w, &|u| !gen_forces(m, e, u, a)),
        Formula::Rhd(a, b) => all(w, &|u| {
            !gen_forces(m, e, u, a)
                || subsets_of(n).any(|v| {
                    e.holds(w, u, v)
                        && (0..n)
                            .filter(|&x| v >> x & 1 == 1)
                            .all(|x| gen_forces(m, e, x, b))
                })
        }),
    }
}

/// Literal forcing in an ordinary model.
pub fn ord_forces(m: &OrdModel, w: usize, f: &Formula) -> bool {
    let fr = &m.frame;
    let n = fr.len();
    let succ: Vec<usize> = fr.succ(w).iter().collect();
    match f {
        Formula::Var(p) => m.atom(p) >> w & 1 == 1,
        Formula::Bot => false,
        Formula::Top => true,
        Formula::Neg(a) => !ord_forces(m, w, a),
        Formula::And(a, b) => ord_forces(m, w, a) && ord_forces(m, w, b),
        Formula::Or(a, b) => ord_forces(m, w, a) || ord_forces(m, w, b),
        Formula::Impl(a, b) => !ord_forces(m, w, a) || ord_forces(m, w, b),
        Formula::Box(a) => succ.iter().all(|&u| ord_forces(m, u, a)),
        Formula::Dia(a) => succ.iter().any(|&u| ord_forces(m, u, a)),
        Formula::Rhd(a, b) => succ.iter().all(|&u| {
            !ord_forces(m, u, a)
                || (0..n).any(|v| fr.s_image(w, u).contains(v) && ord_forces(m, v, b))
        }),
    }
}

// ---- bisimulation, clause by clause ----

/// `z[w]` = bitset of `w'` related to `w`. Quantifies over every `V' ⊆ W'`.
pub fn literal_bisimulation(
    m: &GenModel,
    e: &Explicit,
    m2: &GenModel,
    e2: &Explicit,
    z: &[u64],
    vars: &BTreeSet<String>,
) -> bool {
    let (n, n2) = (e.n, e2.n);
    if z.iter().all(|&r| r == 0) {
        return false;
    }
    let related = |a: usize, b: usize| z[a] >> b & 1 == 1;
    for w in 0..n {
        for w2 in (0..n2).filter(|&b| related(w, b)) {
            if vars.iter().any(|p| (m.atom(p) >> w & 1) != (m2.atom(p) >> w2 & 1)) {
                return false;
            }
            for u in (0..n).filter(|&u| e.r(w, u)) {
                let ok = (0..n2).filter(|&u2| e2.r(w2, u2) && related(u, u2)).any(|u2| {
                    subsets_of(n2).filter(|&v2| e2.holds(w2, u2, v2)).all(|v2| {
                        subsets_of(n).any(|v| {
                            e.holds(w, u, v)
                                && (0..n)
                                    .filter(|&x| v >> x & 1 == 1)
                                    .all(|x| z[x] & v2 != 0)
                        })
                    })
                });
                if !ok {
                    return false;
                }
            }
            for u2 in (0..n2).filter(|&u2| e2.r(w2, u2)) {
                let ok = (0..n).filter(|&u| e.r(w, u) && related(u, u2)).any(|u| {
                    subsets_of(n).filter(|&v| e.holds(w, u, v)).all(|v| {
                        subsets_of(n2).any(|v2| {
                            e2.holds(w2, u2, v2)
                                && (0..n2).filter(|&y| v2 >> y & 1 == 1).all(|y| {
                                    (0..n).any(|x| v >> x & 1 == 1 && related(x, y))
                                })
                        })
                    })
                });
                if !ok {
                    return false;
                }
            }
        }
    }
    true
}

/// All set partitions of `0..n`, as class labels.
pub fn set_partitions(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn go(n: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        let next = cur.iter().copied().max().map_or(0, |m| m + 1);
        for c in 0..=next {
            cur.push(c);
            go(n, cur, out);
            cur.pop();
        }
    }
    go(n, &mut cur, &mut out);
    out
}

pub fn labels_to_relation(labels: &[usize]) -> Vec<u64> {
    labels
        .iter()
        .map(|&c| {
            labels
                .iter()
                .enumerate()
                .filter(|(_, &d)| d == c)
                .fold(0u64, |acc, (i, _)| acc | 1 << i)
        })
        .collect()
}
