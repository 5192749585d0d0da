//! Brute-force breadth-first enumeration of the Cayley graph.
//!
//! Deliberately independent of the engine: no templates-by-homomorphism, no
//! symmetry, no store. Braids are identified by Dynnikov coordinates alone and
//! templates come from following strands through the Artin spelling of each
//! word.

use std::collections::{BTreeMap, HashMap, HashSet};

use crate::dynnikov::DynnikovCoords;
use crate::engine::{GrowthTable, TemplateCount};
use crate::error::{Error, Result};
use crate::template::{Permutation, Template};
use crate::words::{Alphabet, Generator};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleResult {
    pub table: GrowthTable,
    /// For each level, every template with its braid count and geodesic count, sorted.
    pub per_template: Vec<Vec<TemplateCount>>,
    /// For each level, the geodesic-word count of every braid of that length.
    pub omega: Vec<HashMap<DynnikovCoords, u64>>,
}

/// Where each strand started, by current position, plus crossing tallies by start labels.
#[derive(Debug, Clone)]
struct Strands {
    at: Vec<usize>,
    links: Vec<Vec<i32>>,
}

impl Strands {
    fn new(n: usize) -> Self {
        Strands { at: (0..n).collect(), links: vec![vec![0; n]; n] }
    }

    /// Crossing of the strands at positions k, k+1 (0-based) with the given sign.
    fn cross(&mut self, k: usize, sign: i8) {
        let (a, b) = (self.at[k], self.at[k + 1]);
        self.links[a][b] += sign as i32;
        self.links[b][a] += sign as i32;
        self.at.swap(k, k + 1);
    }

    fn template(&self) -> Template {
        let n = self.at.len();
        let images = self.at.iter().map(|&s| (s + 1) as u8).collect();
        let mut links = Vec::new();
        for j in 1..n {
            for i in 0..j {
                links.push(self.links[i][j]);
            }
        }
        Template::new(Permutation::from_images(images), links)
    }
}

/// Artin crossings (1-based index, sign) spelling one letter.
fn crossings(alphabet: Alphabet, x: u8) -> Vec<(usize, i8)> {
    match alphabet.generator(x) {
        Generator::Sigma { i, sign } => vec![(i, sign)],
        Generator::Band { p, q, sign } => {
            let mut out: Vec<(usize, i8)> = (p..q - 1).map(|k| (k, 1)).collect();
            out.push((q - 1, sign));
            out.extend((p..q - 1).rev().map(|k| (k, -1)));
            out
        }
    }
}

struct Node {
    coords: DynnikovCoords,
    omega: u64,
    strands: Strands,
}

/// Exhaustive enumeration to `max_len`. `node_cap` bounds the number of distinct braids held.
pub fn bfs_enumerate(alphabet: Alphabet, max_len: usize, node_cap: Option<usize>) -> Result<OracleResult> {
    let n = alphabet.strands();
    let spell: Vec<Vec<(usize, i8)>> = alphabet.letters().map(|x| crossings(alphabet, x)).collect();
    let mut older: HashSet<DynnikovCoords> = HashSet::new();
    let mut frontier =
        vec![Node { coords: DynnikovCoords::base(n), omega: 1, strands: Strands::new(n) }];
    let mut s = vec![1u64];
    let mut g = vec![1u64];
    let mut per_template = vec![vec![TemplateCount { template: Template::identity(n), count: 1, omega: 1 }]];
    let mut omega = vec![HashMap::from([(DynnikovCoords::base(n), 1u64)])];
    let mut held = 1usize;

    for level in 1..=max_len {
        let mut next: HashMap<DynnikovCoords, usize> = HashMap::new();
        let mut nodes: Vec<Node> = Vec::new();
        for node in &frontier {
            for word in &spell {
                let mut c = node.coords.clone();
                for (step, &(i, sign)) in word.iter().enumerate() {
                    c.apply(i, sign, step)?;
                }
                if older.contains(&c) {
                    continue;
                }
                match next.get(&c) {
                    Some(&k) => {
                        let w = &mut nodes[k].omega;
                        *w = w.checked_add(node.omega).ok_or(Error::OmegaOverflow)?;
                    }
                    None => {
                        let mut strands = node.strands.clone();
                        for &(i, sign) in word {
                            strands.cross(i - 1, sign);
                        }
                        next.insert(c.clone(), nodes.len());
                        nodes.push(Node { coords: c, omega: node.omega, strands });
                        held += 1;
                        if node_cap.is_some_and(|cap| held > cap) {
                            return Err(Error::NodeCap(node_cap.unwrap()));
                        }
                    }
                }
            }
        }
        let mut by_template: BTreeMap<Template, (u64, u64)> = BTreeMap::new();
        let mut geodesics = 0u64;
        for node in &nodes {
            let e = by_template.entry(node.strands.template()).or_default();
            e.0 += 1;
            e.1 = e.1.checked_add(node.omega).ok_or(Error::OmegaOverflow)?;
            geodesics = geodesics.checked_add(node.omega).ok_or(Error::CountOverflow { level })?;
        }
        s.push(nodes.len() as u64);
        g.push(geodesics);
        per_template.push(
            by_template
                .into_iter()
                .map(|(template, (count, omega))| TemplateCount { template, count, omega })
                .collect(),
        );
        omega.push(nodes.iter().map(|nd| (nd.coords.clone(), nd.omega)).collect());
        // Only the two most recent levels can meet a new product again.
        older = frontier.into_iter().map(|nd| nd.coords).collect();
        frontier = nodes;
    }
    Ok(OracleResult { table: GrowthTable::from_columns(&s, &g), per_template, omega })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::template::template_of_word;
    use crate::words::Word;

    #[test]
    fn known_rows() {
        let r = bfs_enumerate(Alphabet::dual(3).unwrap(), 3, None).unwrap();
        assert_eq!(r.table.s(), vec![1, 6, 20, 54]);
        assert_eq!(r.table.g(), vec![1, 6, 30, 126]);
        let r = bfs_enumerate(Alphabet::dual(4).unwrap(), 2, None).unwrap();
        assert_eq!((r.table.levels[2].s, r.table.levels[2].g), (84, 132));
        let r = bfs_enumerate(Alphabet::artin(5).unwrap(), 1, None).unwrap();
        assert_eq!((r.table.levels[1].s, r.table.levels[1].g), (8, 8));
    }

    #[test]
    fn per_template_counts_add_up() {
        let r = bfs_enumerate(Alphabet::artin(4).unwrap(), 4, None).unwrap();
        for (level, pt) in r.per_template.iter().enumerate() {
            assert_eq!(pt.iter().map(|c| c.count).sum::<u64>(), r.table.levels[level].s);
            assert_eq!(pt.iter().map(|c| c.omega).sum::<u64>(), r.table.levels[level].g);
            assert_eq!(r.omega[level].values().sum::<u64>(), r.table.levels[level].g);
        }
    }

    #[test]
    fn strand_templates_match_letter_templates() {
        for a in [Alphabet::artin(4).unwrap(), Alphabet::dual(4).unwrap()] {
            for x in a.letters() {
                for y in a.letters() {
                    let mut st = Strands::new(4);
                    for z in [x, y] {
                        for (i, sign) in crossings(a, z) {
                            st.cross(i - 1, sign);
                        }
                    }
                    let w = Word::new(a, vec![x, y]).unwrap();
                    assert_eq!(st.template(), template_of_word(&w), "{w}");
                }
            }
        }
    }

    #[test]
    fn node_cap_is_enforced() {
        let err = bfs_enumerate(Alphabet::artin(4).unwrap(), 5, Some(100)).unwrap_err();
        assert!(matches!(err, Error::NodeCap(100)));
    }
}
