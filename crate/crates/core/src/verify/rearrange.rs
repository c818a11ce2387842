use rand::seq::SliceRandom;
use rand::Rng;

use crate::syntax::{MembraneProcess, SystemTerm};

fn sys_components(t: SystemTerm, out: &mut Vec<SystemTerm>) {
    match t {
        SystemTerm::Compose(a, b) => {
            sys_components(*a, out);
            sys_components(*b, out);
        }
        SystemTerm::Diamond => {}
        other => out.push(other),
    }
}

fn proc_components(p: MembraneProcess, out: &mut Vec<MembraneProcess>) {
    match p {
        MembraneProcess::Par(a, b) => {
            proc_components(*a, out);
            proc_components(*b, out);
        }
        MembraneProcess::Zero => {}
        other => out.push(other),
    }
}

/// Folds `parts` into a randomly shaped tree, sprinkling units.
fn rebuild<T, R: Rng>(mut parts: Vec<T>, unit: fn() -> T, join: fn(T, T) -> T, rng: &mut R) -> T {
    if rng.gen_bool(0.2) {
        parts.push(unit());
    }
    parts.shuffle(rng);
    while parts.len() > 1 {
        let i = rng.gen_range(0..parts.len() - 1);
        let b = parts.remove(i + 1);
        let a = parts.remove(i);
        parts.insert(i, join(a, b));
    }
    parts.pop().unwrap_or_else(unit)
}

/// A random term congruent to `t` without unfolding replication. Uses
/// commutativity, associativity and units of composition, `!!P ≡ !P`,
/// `!(P∘Q) ≡ !P∘!Q` and the erasure of inert empty membranes, plus the
/// process-level counterparts.
pub fn rearrange<R: Rng>(t: &SystemTerm, rng: &mut R) -> SystemTerm {
    let mut parts = Vec::new();
    sys_components(t.clone(), &mut parts);
    let mut out = Vec::new();
    for p in parts {
        match p {
            SystemTerm::Bang(inner) => {
                let mut under = Vec::new();
                sys_components(*inner, &mut under);
                let under: Vec<SystemTerm> = under.iter().map(|u| rearrange(u, rng)).collect();
                if under.is_empty() {
                    continue;
                }
                let wrap = |x: SystemTerm, rng: &mut R| {
                    if rng.gen_bool(0.3) {
                        SystemTerm::bang(SystemTerm::bang(x))
                    } else {
                        SystemTerm::bang(x)
                    }
                };
                if rng.gen_bool(0.5) {
                    for u in under {
                        out.push(wrap(u, rng));
                    }
                } else {
                    let joined = rebuild(under, || SystemTerm::Diamond, SystemTerm::compose, rng);
                    out.push(wrap(joined, rng));
                }
            }
            SystemTerm::Membrane {
                process,
                content,
                label,
            } => {
                let inert = matches!(process, MembraneProcess::Zero) && matches!(*content, SystemTerm::Diamond);
                if inert && rng.gen_bool(0.5) {
                    continue;
                }
                let content = rearrange(&content, rng);
                out.push(SystemTerm::membrane(rearrange_process(&process, rng), content, label));
            }
            SystemTerm::Diamond | SystemTerm::Compose(..) => unreachable!("flattened above"),
        }
    }
    rebuild(out, || SystemTerm::Diamond, SystemTerm::compose, rng)
}

pub fn rearrange_process<R: Rng>(p: &MembraneProcess, rng: &mut R) -> MembraneProcess {
    let mut parts = Vec::new();
    proc_components(p.clone(), &mut parts);
    let mut out = Vec::new();
    for part in parts {
        match part {
            MembraneProcess::Bang(inner) => {
                let mut under = Vec::new();
                proc_components(*inner, &mut under);
                let under: Vec<MembraneProcess> = under.iter().map(|u| rearrange_process(u, rng)).collect();
                if under.is_empty() {
                    continue;
                }
                if rng.gen_bool(0.5) {
                    out.extend(under.into_iter().map(MembraneProcess::bang));
                } else {
                    let joined = rebuild(under, || MembraneProcess::Zero, MembraneProcess::par, rng);
                    let b = MembraneProcess::bang(joined);
                    out.push(if rng.gen_bool(0.3) { MembraneProcess::bang(b) } else { b });
                }
            }
            MembraneProcess::Seq(a, k) => out.push(MembraneProcess::seq(a, rearrange_process(&k, rng))),
            MembraneProcess::Zero | MembraneProcess::Par(..) => unreachable!("flattened above"),
        }
    }
    rebuild(out, || MembraneProcess::Zero, MembraneProcess::par, rng)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{canonicalize, parse};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn rearrangements_share_the_canonical_form() {
        let t = parse("!((mate(n) | !(drip(0) | bud(m)))<0<>@E || comate(n)<>@F>@P) || (exo(x) | 0)<>@Q").unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let c = canonicalize(&t);
        let mut distinct = std::collections::BTreeSet::new();
        for _ in 0..50 {
            let r = rearrange(&t, &mut rng);
            assert_eq!(canonicalize(&r), c, "{r:?}");
            distinct.insert(r);
        }
        assert!(distinct.len() > 5);
    }
}
