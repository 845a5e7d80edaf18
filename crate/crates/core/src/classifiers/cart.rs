use rand::seq::index;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::classifiers::impurity::{gini_mass, scan_sorted};
use crate::dataset::Matrix;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CartParams {
    /// Root sits at depth 0; zero yields a majority stump.
    pub max_depth: usize,
    pub min_samples_split: usize,
}

impl Default for CartParams {
    fn default() -> Self {
        CartParams {
            max_depth: 20,
            min_samples_split: 2,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Node {
    Leaf {
        class: u8,
        counts: [usize; 2],
    },
    Split {
        feature: usize,
        threshold: f64,
        left: usize,
        right: usize,
    },
}

/// Binary CART tree stored as an arena; node 0 is the root. Rows with
/// `x[feature] <= threshold` go left.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecisionTree {
    nodes: Vec<Node>,
    n_features: usize,
}

impl DecisionTree {
    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn n_features(&self) -> usize {
        self.n_features
    }

    pub fn depth(&self) -> usize {
        fn walk(nodes: &[Node], i: usize) -> usize {
            match nodes[i] {
                Node::Leaf { .. } => 0,
                Node::Split { left, right, .. } => 1 + walk(nodes, left).max(walk(nodes, right)),
            }
        }
        walk(&self.nodes, 0)
    }

    pub fn predict_row(&self, row: &[f64]) -> u8 {
        let mut i = 0;
        loop {
            match &self.nodes[i] {
                Node::Leaf { class, .. } => return *class,
                Node::Split {
                    feature,
                    threshold,
                    left,
                    right,
                } => i = if row[*feature] <= *threshold { *left } else { *right },
            }
        }
    }

    pub fn predict(&self, x: &Matrix) -> Result<Vec<u8>> {
        if x.cols() != self.n_features {
            return Err(Error::arg(format!(
                "tree trained on {} features, got {}",
                self.n_features,
                x.cols()
            )));
        }
        Ok((0..x.rows()).map(|r| self.predict_row(x.row(r))).collect())
    }
}

fn majority(counts: [usize; 2]) -> u8 {
    // ties favour attack
    u8::from(counts[1] >= counts[0])
}

pub fn train_cart(x: &Matrix, labels: &[u8], params: &CartParams) -> Result<DecisionTree> {
    let sample: Vec<usize> = (0..x.rows()).collect();
    grow(x, labels, &sample, params, None::<(usize, &mut rand_chacha::ChaCha8Rng)>)
}

/// Grows a tree on the rows listed in `sample` (duplicates allowed). With
/// `feature_sampling = Some((k, rng))` each node considers `k` random
/// features.
pub(crate) fn grow<R: Rng>(
    x: &Matrix,
    labels: &[u8],
    sample: &[usize],
    params: &CartParams,
    mut feature_sampling: Option<(usize, &mut R)>,
) -> Result<DecisionTree> {
    if labels.len() != x.rows() {
        return Err(Error::arg("label count differs from row count"));
    }
    if sample.is_empty() || x.cols() == 0 {
        return Err(Error::arg("cannot train a tree on an empty table"));
    }
    let m = x.cols();
    let value = |pos: u32, f: usize| x.get(sample[pos as usize], f);
    let label = |pos: u32| labels[sample[pos as usize]];

    // One sorted position list per feature; children inherit the order by
    // stable partition so each level costs O(m·n).
    let root_lists: Vec<Vec<u32>> = (0..m)
        .map(|f| {
            let mut order: Vec<u32> = (0..sample.len() as u32).collect();
            order.sort_by(|&a, &b| value(a, f).total_cmp(&value(b, f)));
            order
        })
        .collect();

    let mut nodes: Vec<Node> = vec![Node::Leaf {
        class: 0,
        counts: [0, 0],
    }];
    let mut go_left = vec![false; sample.len()];
    let mut stack = vec![(0usize, root_lists, 0usize)];

    while let Some((slot, lists, depth)) = stack.pop() {
        let mut counts = [0usize; 2];
        for &p in &lists[0] {
            counts[label(p) as usize] += 1;
        }
        let n = lists[0].len();
        let leaf = Node::Leaf {
            class: majority(counts),
            counts,
        };
        let pure = counts[0] == 0 || counts[1] == 0;
        if pure || depth >= params.max_depth || n < params.min_samples_split.max(2) {
            nodes[slot] = leaf;
            continue;
        }

        let candidates: Vec<usize> = match feature_sampling.as_mut() {
            Some((k, rng)) if *k < m => {
                let mut c = index::sample(*rng, m, *k).into_vec();
                c.sort_unstable();
                c
            }
            _ => (0..m).collect(),
        };

        // Zero-gain splits are accepted on impure nodes so that any
        // consistent training set can be fit exactly.
        let mut best: Option<(f64, usize, f64)> = None;
        for &f in &candidates {
            let found = scan_sorted(
                &lists[f],
                |p| value(p, f),
                label,
                counts,
                |l, r| gini_mass(l[0], l[1]) + gini_mass(r[0], r[1]),
            );
            if let Some((mass, thr)) = found {
                if best.map_or(true, |(bm, _, _)| mass < bm) {
                    best = Some((mass, f, thr));
                }
            }
        }
        let Some((_, feature, threshold)) = best else {
            nodes[slot] = leaf;
            continue;
        };

        for &p in &lists[0] {
            go_left[p as usize] = value(p, feature) <= threshold;
        }
        let mut left_lists = Vec::with_capacity(m);
        let mut right_lists = Vec::with_capacity(m);
        for list in lists {
            let (l, r): (Vec<u32>, Vec<u32>) = list.into_iter().partition(|&p| go_left[p as usize]);
            left_lists.push(l);
            right_lists.push(r);
        }
        let left = nodes.len();
        let right = left + 1;
        nodes.push(Node::Leaf { class: 0, counts: [0, 0] });
        nodes.push(Node::Leaf { class: 0, counts: [0, 0] });
        nodes[slot] = Node::Split {
            feature,
            threshold,
            left,
            right,
        };
        stack.push((right, right_lists, depth + 1));
        stack.push((left, left_lists, depth + 1));
    }

    Ok(DecisionTree {
        nodes,
        n_features: m,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classifiers::impurity::sorted_order;
    use rand::SeedableRng;

    fn accuracy(pred: &[u8], y: &[u8]) -> f64 {
        pred.iter().zip(y).filter(|(a, b)| a == b).count() as f64 / y.len() as f64
    }

    #[test]
    fn separable_fits_perfectly() {
        let xs: Vec<f64> = (0..100).map(|i| i as f64 / 100.0).collect();
        let y: Vec<u8> = xs.iter().map(|&v| u8::from(v >= 0.5)).collect();
        let x = Matrix::new(100, 1, xs).unwrap();
        let t = train_cart(&x, &y, &CartParams::default()).unwrap();
        assert_eq!(accuracy(&t.predict(&x).unwrap(), &y), 1.0);
        assert_eq!(t.depth(), 1);
    }

    #[test]
    fn pure_root_is_single_leaf() {
        let x = Matrix::new(3, 1, vec![1.0, 2.0, 3.0]).unwrap();
        let t = train_cart(&x, &[1, 1, 1], &CartParams::default()).unwrap();
        assert_eq!(t.nodes().len(), 1);
    }

    #[test]
    fn depth_zero_is_majority_stump() {
        let x = Matrix::new(5, 1, vec![1.0, 2.0, 3.0, 4.0, 5.0]).unwrap();
        let p = CartParams { max_depth: 0, min_samples_split: 2 };
        let t = train_cart(&x, &[0, 0, 0, 1, 1], &p).unwrap();
        assert_eq!(t.predict(&x).unwrap(), vec![0; 5]);
        // tie → attack
        let t = train_cart(&x.select_rows(&[0, 1, 3, 4]), &[0, 0, 1, 1], &p).unwrap();
        assert_eq!(t.predict_row(&[0.0]), 1);
    }

    #[test]
    fn xor_is_fit_through_zero_gain_split() {
        let x = Matrix::from_rows(&[vec![0.0, 0.0], vec![0.0, 1.0], vec![1.0, 0.0], vec![1.0, 1.0]]).unwrap();
        let y = [0, 1, 1, 0];
        let t = train_cart(&x, &y, &CartParams::default()).unwrap();
        assert_eq!(t.predict(&x).unwrap(), y.to_vec());
    }

    #[test]
    fn empty_and_mismatched_inputs() {
        let x = Matrix::new(0, 2, vec![]).unwrap();
        assert!(train_cart(&x, &[], &CartParams::default()).is_err());
        let x = Matrix::new(2, 1, vec![0.0, 1.0]).unwrap();
        let t = train_cart(&x, &[0, 1], &CartParams::default()).unwrap();
        assert!(t.predict(&Matrix::new(1, 2, vec![0.0, 0.0]).unwrap()).is_err());
    }

    #[test]
    fn root_matches_public_best_split() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        let rows: Vec<Vec<f64>> = (0..60).map(|_| (0..4).map(|_| rng.gen::<f64>()).collect()).collect();
        let y: Vec<u8> = rows.iter().map(|r| u8::from(r[2] + 0.3 * r[1] > 0.6)).collect();
        let x = Matrix::from_rows(&rows).unwrap();
        let t = train_cart(&x, &y, &CartParams::default()).unwrap();
        let s = crate::classifiers::best_split(&x, &y, &[0, 1, 2, 3]).unwrap();
        match t.nodes()[0] {
            Node::Split { feature, threshold, .. } => {
                assert_eq!((feature, threshold), (s.feature, s.threshold));
            }
            _ => panic!("expected a split at the root"),
        }
        assert_eq!(sorted_order(&x, 0).len(), 60);
    }
}
