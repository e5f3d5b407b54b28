//! Exhaustive reference for small instances: the largest set of links that
//! can all be given frequencies, found by trying every link subset.

use crate::model::{Frequency, Instance, PathId};

use super::SearchError;

pub const BRUTE_FORCE_MAX_LINKS: usize = 6;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BruteForceOutcome {
    /// Size of the largest satisfiable link subset.
    pub links: usize,
    /// An assignment of that subset; `None` for the other paths.
    pub witness: Vec<Option<Frequency>>,
}

fn fill(instance: &Instance, paths: &[PathId], k: usize, a: &mut Vec<Option<Frequency>>) -> bool {
    if k == paths.len() {
        return true;
    }
    let p = paths[k];
    let spectrum = instance.spectrum();
    for f in spectrum.to_vec(instance.domain(p)) {
        let fits = instance
            .constraints()
            .iter()
            .filter_map(|c| match (c.i == p, c.j == p) {
                (true, _) => Some((c.j, c.gap)),
                (_, true) => Some((c.i, c.gap)),
                _ => None,
            })
            .all(|(q, gap)| a[q].is_none_or(|g| g.distance(f) >= gap));
        if fits {
            a[p] = Some(f);
            if fill(instance, paths, k + 1, a) {
                return true;
            }
            a[p] = None;
        }
    }
    false
}

pub fn brute_force_solve(instance: &Instance) -> Result<BruteForceOutcome, SearchError> {
    let n = instance.link_count();
    if n > BRUTE_FORCE_MAX_LINKS {
        return Err(SearchError::TooLarge { links: n });
    }
    let mut subsets: Vec<u32> = (0..1u32 << n).collect();
    subsets.sort_by_key(|m| std::cmp::Reverse(m.count_ones()));
    for mask in subsets {
        let paths: Vec<PathId> = (0..n)
            .filter(|l| mask & (1 << l) != 0)
            .flat_map(|l| [2 * l, 2 * l + 1])
            .collect();
        let mut a = vec![None; instance.path_count()];
        if fill(instance, &paths, 0, &mut a) {
            return Ok(BruteForceOutcome {
                links: mask.count_ones() as usize,
                witness: a,
            });
        }
    }
    unreachable!("the empty subset is always satisfiable")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::InstanceBuilder;

    #[test]
    fn finds_full_assignment_when_possible() {
        let inst = InstanceBuilder::new(3).link(0, 1).link(1, 2).build().unwrap();
        let out = brute_force_solve(&inst).unwrap();
        assert_eq!(out.links, 2);
        assert!(out.witness.iter().all(Option::is_some));
    }

    #[test]
    fn drops_the_impossible_link() {
        let inst = InstanceBuilder::new(3)
            .link(0, 1)
            .link(1, 2)
            .domain(2, vec![Frequency(40000)])
            .domain(3, vec![Frequency(40070)])
            .build()
            .unwrap();
        let out = brute_force_solve(&inst).unwrap();
        assert_eq!(out.links, 1);
        assert_eq!(out.witness[2], None);
        assert!(out.witness[0].is_some());
    }

    #[test]
    fn refuses_big_instances() {
        let inst = InstanceBuilder::new(8).links((1..8).map(|k| (0, k))).build().unwrap();
        assert_eq!(brute_force_solve(&inst), Err(SearchError::TooLarge { links: 7 }));
    }
}
