//! Brute-force enumeration of O(A), orbit decompositions, and 2-elementary
//! structure (characteristic element, hyperbolic pairs).
//!
//! An isometry is determined by the images of the generators. The search
//! assigns images one generator at a time: each image must have the right
//! q-value and order, and must pair with the images already chosen exactly
//! as the generators do. For a nondegenerate form such a map is injective,
//! hence an automorphism, so no invertibility filter is needed.

use std::collections::{HashSet, VecDeque};
use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};
use std::sync::Arc;

use num_integer::Integer;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::fqm::{Element, Enumeration, FqForm};
use crate::limits::Limits;

/// An element of O(A), given by the images of the generators.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Isometry {
    images: Vec<Element>,
}

impl Isometry {
    pub fn new(images: Vec<Element>) -> Isometry {
        Isometry { images }
    }

    pub fn images(&self) -> &[Element] {
        &self.images
    }

    /// Integer matrix whose column j is the image of e_j.
    pub fn matrix(&self) -> Vec<Vec<u64>> {
        let r = self.images.len();
        (0..r).map(|i| (0..r).map(|j| self.images[j].coeffs()[i]).collect()).collect()
    }
}

/// A subgroup of O(A), stored as the full list of its elements.
#[derive(Debug, Clone)]
pub struct IsomGroup {
    en: Arc<Enumeration>,
    /// Generator images of every element, `rank` entries per element.
    images: Vec<u32>,
}

impl IsomGroup {
    pub fn order(&self) -> usize {
        if self.en.rank() == 0 {
            self.images.len().max(1)
        } else {
            self.images.len() / self.en.rank()
        }
    }

    pub fn enumeration(&self) -> &Arc<Enumeration> {
        &self.en
    }

    pub(crate) fn raw(&self, g: usize) -> &[u32] {
        let r = self.en.rank();
        &self.images[g * r..(g + 1) * r]
    }

    pub fn get(&self, g: usize) -> Isometry {
        Isometry { images: self.raw(g).iter().map(|&i| self.en.element(i as usize)).collect() }
    }

    pub fn iter(&self) -> impl Iterator<Item = Isometry> + '_ {
        (0..self.order()).map(|g| self.get(g))
    }

    /// Index of an element of A under the g-th isometry.
    pub fn apply_index(&self, g: usize, idx: usize) -> usize {
        if self.en.rank() == 0 {
            return 0;
        }
        self.en.apply_map(self.raw(g), idx)
    }

    pub fn apply(&self, g: &Isometry, x: &Element) -> Element {
        let raw = self.to_raw(g);
        self.en.element(self.en.apply_map(&raw, self.en.index_of(x)))
    }

    fn to_raw(&self, g: &Isometry) -> Vec<u32> {
        g.images.iter().map(|e| self.en.index_of(e) as u32).collect()
    }

    pub fn contains(&self, g: &Isometry) -> bool {
        let raw = self.to_raw(g);
        (0..self.order()).any(|k| self.raw(k) == raw.as_slice())
    }

    /// The trivial subgroup on the same form.
    pub fn trivial(&self) -> IsomGroup {
        let r = self.en.rank();
        IsomGroup { en: self.en.clone(), images: (0..r).map(|i| self.en.generator_index(i) as u32).collect() }
    }
}

struct Search<'a> {
    src: &'a Enumeration,
    dst: &'a Enumeration,
    /// Required pairings (e_i, e_j) as numerators over the destination level.
    target: Vec<Vec<u64>>,
    /// Pairing functionals of every destination element, `rank` entries each.
    functionals: Vec<u64>,
    nodes: AtomicU64,
    budget: u64,
    stop: AtomicBool,
}

/// Flush interval for the shared node counter.
const TICK_BATCH: u64 = 4096;

impl<'a> Search<'a> {
    fn new(src: &'a Enumeration, dst: &'a Enumeration, budget: u64) -> Option<Search<'a>> {
        // Every value of A must be expressible over the level of B, otherwise no map exists.
        let (da, db) = (src.level(), dst.level());
        if da.lcm(&db) != db {
            return None;
        }
        let scale = db / da;
        let r = src.rank();
        let target = (0..r)
            .map(|i| {
                let fi = src.functional(src.generator_index(i));
                (0..r).map(|j| fi[j] * scale % db).collect()
            })
            .collect();
        let functionals = (0..dst.size()).flat_map(|y| dst.functional(y)).collect();
        Some(Search { src, dst, target, functionals, nodes: AtomicU64::new(0), budget, stop: AtomicBool::new(false) })
    }

    fn base_candidates(&self) -> Vec<Vec<u32>> {
        let scale = self.dst.level() / self.src.level();
        (0..self.src.rank())
            .map(|j| {
                let q = self.src.q(self.src.generator_index(j)) * scale;
                let n = self.src.orders()[j];
                (0..self.dst.size())
                    .filter(|&y| self.dst.q(y) == q && self.dst.killed_by(y, n))
                    .map(|y| y as u32)
                    .collect()
            })
            .collect()
    }

    fn tick(&self, local: &mut u64, n: u64) -> Result<()> {
        *local += n;
        if *local >= TICK_BATCH {
            let total = self.nodes.fetch_add(*local, Ordering::Relaxed) + *local;
            *local = 0;
            if total > self.budget {
                self.stop.store(true, Ordering::Relaxed);
                return Err(Error::SearchBudget { budget: self.budget });
            }
        }
        Ok(())
    }

    fn flush(&self, local: u64) -> Result<()> {
        let total = self.nodes.fetch_add(local, Ordering::Relaxed) + local;
        if total > self.budget {
            self.stop.store(true, Ordering::Relaxed);
            return Err(Error::SearchBudget { budget: self.budget });
        }
        Ok(())
    }

    /// Explores all completions of `chosen`. `lists[0][k]` holds the
    /// admissible images of generator `depth + k` given the choices so far;
    /// the remaining entries are scratch space for deeper levels.
    fn dfs(
        &self,
        depth: usize,
        chosen: &mut Vec<u32>,
        lists: &mut [Vec<Vec<u32>>],
        out: &mut Vec<u32>,
        local: &mut u64,
        first_only: bool,
    ) -> Result<()> {
        let r = self.src.rank();
        let (cur, rest) = lists.split_at_mut(1);
        let cur = &cur[0];
        if depth + 1 == r {
            self.tick(local, cur[0].len() as u64)?;
            for &y in &cur[0] {
                out.extend_from_slice(chosen);
                out.push(y);
                if first_only {
                    self.stop.store(true, Ordering::Relaxed);
                    return Ok(());
                }
            }
            return Ok(());
        }
        let d = self.dst.level();
        for &y in &cur[0] {
            if self.stop.load(Ordering::Relaxed) {
                return Ok(());
            }
            self.tick(local, 1)?;
            let f = &self.functionals[y as usize * r..(y as usize + 1) * r];
            let next = &mut rest[0];
            let mut alive = true;
            for (k, list) in cur[1..].iter().enumerate() {
                let want = self.target[depth][depth + 1 + k];
                let slot = &mut next[k];
                slot.clear();
                slot.extend(list.iter().copied().filter(|&z| {
                    let zd = self.dst.digits(z as usize);
                    zd.iter().zip(f).map(|(&a, &b)| a as u64 * b).sum::<u64>() % d == want
                }));
                if slot.is_empty() {
                    alive = false;
                    break;
                }
            }
            if alive {
                chosen.push(y);
                self.dfs(depth + 1, chosen, rest, out, local, first_only)?;
                chosen.pop();
            }
        }
        Ok(())
    }

    fn run(&self, first_only: bool) -> Result<Vec<u32>> {
        let r = self.src.rank();
        if r == 0 {
            return Ok(Vec::new());
        }
        let base = self.base_candidates();
        if base.iter().any(|l| l.is_empty()) {
            return Ok(Vec::new());
        }
        let chunks: Vec<Result<Vec<u32>>> = base[0]
            .par_iter()
            .map(|&y| {
                let mut out = Vec::new();
                if self.stop.load(Ordering::Relaxed) {
                    return Ok(out);
                }
                let mut lists: Vec<Vec<Vec<u32>>> = (0..r).map(|d| vec![Vec::new(); r - d]).collect();
                lists[0] = base.clone();
                lists[0][0] = vec![y];
                let mut local = 0;
                self.dfs(0, &mut Vec::with_capacity(r), &mut lists, &mut out, &mut local, first_only)?;
                self.flush(local)?;
                Ok(out)
            })
            .collect();
        let chunks: Vec<Vec<u32>> = chunks.into_iter().collect::<Result<_>>()?;
        Ok(chunks.concat())
    }
}

fn nondegenerate_enumeration(form: &FqForm, limits: &Limits) -> Result<Enumeration> {
    let en = form.enumeration(limits)?;
    if !en.radical_is_trivial() {
        return Err(Error::Degenerate);
    }
    Ok(en)
}

/// The full orthogonal group O(A).
pub fn orthogonal_group(form: &FqForm, limits: &Limits) -> Result<IsomGroup> {
    let en = Arc::new(nondegenerate_enumeration(form, limits)?);
    if form.rank() == 0 {
        return Ok(IsomGroup { en, images: Vec::new() });
    }
    let search = Search::new(&en, &en, limits.search_budget).expect("same level");
    let images = search.run(false)?;
    debug_assert_eq!(images.len() % form.rank(), 0);
    Ok(IsomGroup { en: en.clone(), images })
}

/// Whether two forms are isometric. The first must be nondegenerate.
pub fn is_isometric(a: &FqForm, b: &FqForm, limits: &Limits) -> Result<bool> {
    if a.group_order() != b.group_order() {
        return Ok(false);
    }
    let ea = nondegenerate_enumeration(a, limits)?;
    let eb = b.enumeration(limits)?;
    if a.rank() == 0 {
        return Ok(true);
    }
    match Search::new(&ea, &eb, limits.search_budget) {
        Some(s) => Ok(!s.run(true)?.is_empty()),
        None => Ok(false),
    }
}

/// Closure of `gens` under composition inside `group`.
pub fn subgroup_from_generators(group: &IsomGroup, gens: &[Isometry]) -> Result<IsomGroup> {
    let en = group.en.clone();
    let r = en.rank();
    let mut raws = Vec::new();
    for g in gens {
        if g.images.len() != r || !group.contains(g) {
            return Err(Error::NotAnIsometry(format!("{:?}", g.matrix())));
        }
        raws.push(group.to_raw(g));
    }
    let identity: Vec<u32> = (0..r).map(|i| en.generator_index(i) as u32).collect();
    let mut seen: HashSet<Vec<u32>> = HashSet::from([identity.clone()]);
    let mut order = vec![identity.clone()];
    let mut queue = VecDeque::from([identity]);
    while let Some(h) = queue.pop_front() {
        for g in &raws {
            // g o h: image of e_j is g(h(e_j)).
            let gh: Vec<u32> = h.iter().map(|&x| en.apply_map(g, x as usize) as u32).collect();
            if seen.insert(gh.clone()) {
                order.push(gh.clone());
                queue.push_back(gh);
            }
        }
    }
    order.sort();
    Ok(IsomGroup { en, images: order.concat() })
}

/// Decomposition of A into orbits of a subgroup of O(A).
#[derive(Debug, Clone)]
pub struct OrbitPartition {
    en: Arc<Enumeration>,
    reps: Vec<usize>,
    orbit_of: Vec<u32>,
    members: Vec<Vec<u32>>,
}

impl OrbitPartition {
    pub fn len(&self) -> usize {
        self.reps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.reps.is_empty()
    }

    /// Lexicographically least element of each orbit, in increasing order.
    pub fn representatives(&self) -> Vec<Element> {
        self.reps.iter().map(|&i| self.en.element(i)).collect()
    }

    pub fn rep_indices(&self) -> &[usize] {
        &self.reps
    }

    pub fn orbit_index_of(&self, x: &Element) -> usize {
        self.orbit_of[self.en.index_of(x)] as usize
    }

    pub fn orbit_elements(&self, k: usize) -> Vec<Element> {
        self.members[k].iter().map(|&i| self.en.element(i as usize)).collect()
    }

    pub fn member_indices(&self, k: usize) -> &[u32] {
        &self.members[k]
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.members.iter().map(|m| m.len()).collect()
    }

    pub fn enumeration(&self) -> &Arc<Enumeration> {
        &self.en
    }
}

/// Orbits of `group` on its form.
///
/// Isometries preserve q and element order, so an orbit that has filled its
/// whole (q, order) class is complete and the scan over the group stops.
pub fn orbits(group: &IsomGroup) -> OrbitPartition {
    let en = group.en.clone();
    let n = en.size();
    let key = |x: usize| (en.q(x), en.element_order(x));
    let mut class_size: std::collections::HashMap<(u64, u64), usize> = std::collections::HashMap::new();
    for x in 0..n {
        *class_size.entry(key(x)).or_default() += 1;
    }
    let mut orbit_of = vec![u32::MAX; n];
    let mut reps = Vec::new();
    let mut members: Vec<Vec<u32>> = Vec::new();
    let mut assigned = 0usize;
    for x in 0..n {
        if orbit_of[x] != u32::MAX {
            continue;
        }
        let id = reps.len() as u32;
        reps.push(x);
        let mut orbit = vec![x as u32];
        orbit_of[x] = id;
        if x != 0 {
            let full = class_size[&key(x)];
            let support: Vec<(usize, u64)> =
                en.digits(x).iter().enumerate().filter(|(_, &c)| c != 0).map(|(j, &c)| (j, c as u64)).collect();
            for g in 0..group.order() {
                let y = match support.as_slice() {
                    [(j, 1)] => group.raw(g)[*j] as usize,
                    _ => en.apply_sparse(group.raw(g), &support),
                };
                if orbit_of[y] == u32::MAX {
                    orbit_of[y] = id;
                    orbit.push(y as u32);
                    if orbit.len() == full {
                        break;
                    }
                }
            }
        }
        orbit.sort_unstable();
        assigned += orbit.len();
        members.push(orbit);
        if assigned == n {
            break;
        }
    }
    OrbitPartition { en, reps, orbit_of, members }
}

fn two_elementary(form: &FqForm, limits: &Limits) -> Result<Enumeration> {
    if form.orders().iter().any(|&n| n != 2) {
        return Err(Error::NotTwoElementary);
    }
    form.enumeration(limits)
}

/// The unique x_A with (x, x_A) = (x, x) mod Z for every x.
pub fn characteristic_element(form: &FqForm, limits: &Limits) -> Result<Element> {
    let en = two_elementary(form, limits)?;
    let d = en.level();
    let sols: Vec<usize> = (0..en.size())
        .filter(|&c| {
            let f = en.functional(c);
            (0..en.size()).all(|x| en.apply_functional(&f, x) == 2 * en.q(x) % d)
        })
        .collect();
    match sols.as_slice() {
        [c] => Ok(en.element(*c)),
        _ => Err(Error::Degenerate),
    }
}

/// A pair x, y with q(x) = q(y) = 0 and (x, y) = 1/2, if one exists.
pub fn contains_u_summand(form: &FqForm, limits: &Limits) -> Result<Option<(Element, Element)>> {
    let en = two_elementary(form, limits)?;
    let half = en.level() / 2;
    let iso: Vec<usize> = (1..en.size()).filter(|&x| en.q(x) == 0).collect();
    for (k, &x) in iso.iter().enumerate() {
        let f = en.functional(x);
        if let Some(&y) = iso[k + 1..].iter().find(|&&y| en.apply_functional(&f, y) == half) {
            return Ok(Some((en.element(x), en.element(y))));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fqm::form_from_str;

    fn group(s: &str) -> IsomGroup {
        orthogonal_group(&form_from_str(s).unwrap(), &Limits::default()).unwrap()
    }

    #[test]
    fn small_groups() {
        assert_eq!(group("q(9,1)").order(), 2);
        assert_eq!(group("U2").order(), 2);
        assert_eq!(group("q(9,1)+q(3,1)").order(), 12);
        assert_eq!(group("gram[;;]").order(), 1);
    }

    #[test]
    fn orbit_examples() {
        let o = orbits(&group("q(5,1)"));
        assert_eq!(o.sizes(), vec![1, 2, 2]);
        let a = form_from_str("q(5,1)").unwrap();
        assert_eq!(o.orbit_elements(1), vec![a.element(&[1]).unwrap(), a.element(&[4]).unwrap()]);
        let mut sizes = orbits(&group("U(3)")).sizes();
        sizes.sort();
        assert_eq!(sizes, vec![1, 2, 2, 4]);
    }

    #[test]
    fn degenerate_is_refused() {
        let a = form_from_str("gram[3;0;]").unwrap();
        assert_eq!(orthogonal_group(&a, &Limits::default()).unwrap_err(), Error::Degenerate);
    }

    #[test]
    fn budget_is_enforced() {
        let a = form_from_str("U(5)+U(5)").unwrap();
        let err = orthogonal_group(&a, &Limits::default().with_budget(100)).unwrap_err();
        assert_eq!(err, Error::SearchBudget { budget: 100 });
    }

    #[test]
    fn characteristic_elements() {
        let l = Limits::default();
        assert!(characteristic_element(&form_from_str("U2").unwrap(), &l).unwrap().is_zero());
        assert_eq!(characteristic_element(&form_from_str("q(2,1)").unwrap(), &l).unwrap().coeffs(), &[1]);
        assert_eq!(characteristic_element(&form_from_str("U2+q(2,1)").unwrap(), &l).unwrap().coeffs(), &[0, 0, 1]);
        assert_eq!(characteristic_element(&form_from_str("q(4,1)").unwrap(), &l), Err(Error::NotTwoElementary));
    }

    #[test]
    fn hyperbolic_pairs() {
        let l = Limits::default();
        let (x, y) = contains_u_summand(&form_from_str("U2").unwrap(), &l).unwrap().unwrap();
        assert_eq!((x.coeffs(), y.coeffs()), (&[0, 1][..], &[1, 0][..]));
        assert!(contains_u_summand(&form_from_str("V2").unwrap(), &l).unwrap().is_none());
        assert!(contains_u_summand(&form_from_str("4*q(2,1)").unwrap(), &l).unwrap().is_none());
        assert!(contains_u_summand(&form_from_str("2*q(2,1)+q(2,-1)").unwrap(), &l).unwrap().is_some());
    }

    #[test]
    fn isometry_classes() {
        let l = Limits::default();
        let f = |s: &str| form_from_str(s).unwrap();
        assert!(is_isometric(&f("V2+q(2,1)"), &f("3*q(2,-1)"), &l).unwrap());
        assert!(is_isometric(&f("V2+V2"), &f("U2+U2"), &l).unwrap());
        assert!(!is_isometric(&f("V2"), &f("U2"), &l).unwrap());
        assert!(is_isometric(&f("q(3,1)+q(3,1)"), &f("N(3)"), &l).unwrap());
        assert!(is_isometric(&f("gram[12;1/24;]"), &f("q(4,3)+q(3,1)"), &l).unwrap());
        assert!(!is_isometric(&f("gram[12;1/24;]"), &f("q(4,1)+q(3,1)"), &l).unwrap());
    }

    #[test]
    fn subgroups() {
        let g = group("U2");
        assert_eq!(subgroup_from_generators(&g, &[]).unwrap().order(), 1);
        let swap = g.iter().find(|h| h.images()[0].coeffs() == [0, 1]).unwrap();
        assert_eq!(subgroup_from_generators(&g, &[swap]).unwrap().order(), 2);
        let bogus = Isometry::new(vec![form_from_str("U2").unwrap().element(&[1, 1]).unwrap(); 2]);
        assert!(subgroup_from_generators(&g, &[bogus]).is_err());
    }
}
