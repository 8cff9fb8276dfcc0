//! Static kd-tree over float coordinates used by the accelerated Hausdorff path.
//!
//! Distances are supplied by the caller so the tree reproduces the caller's
//! exact floating-point values; the tree itself only prunes subtrees whose
//! axis gap already exceeds the best distance found.

const LEAF_SIZE: usize = 8;

enum Node {
    Leaf(Vec<usize>),
    Split { axis: usize, value: f64, left: Box<Node>, right: Box<Node> },
}

pub(crate) struct KdTree {
    root: Node,
}

pub(crate) enum Nearest {
    /// Some point is no farther than the cutoff; search stopped early.
    BelowCutoff,
    Found { index: usize },
}

impl KdTree {
    pub(crate) fn build(coords: Vec<Vec<f64>>) -> KdTree {
        let indices: Vec<usize> = (0..coords.len()).collect();
        KdTree { root: build_node(&coords, indices) }
    }

    /// Nearest point to `query`.
    ///
    /// `gap_bound(g)` must be a lower bound on the distance to any point whose
    /// coordinate along some axis differs from the query by at least `g`.
    /// `dist(i)` is the distance to point `i`.
    pub(crate) fn nearest(
        &self,
        query: &[f64],
        cutoff: Option<f64>,
        gap_bound: &dyn Fn(f64) -> f64,
        dist: &mut dyn FnMut(usize) -> f64,
    ) -> Nearest {
        let mut best: Option<(usize, f64)> = None;
        if self.search(&self.root, query, cutoff, gap_bound, dist, &mut best) {
            return Nearest::BelowCutoff;
        }
        let (index, _) = best.expect("kd-tree is nonempty");
        Nearest::Found { index }
    }

    fn search(
        &self,
        node: &Node,
        query: &[f64],
        cutoff: Option<f64>,
        gap_bound: &dyn Fn(f64) -> f64,
        dist: &mut dyn FnMut(usize) -> f64,
        best: &mut Option<(usize, f64)>,
    ) -> bool {
        match node {
            Node::Leaf(items) => {
                for &i in items {
                    let d = dist(i);
                    if cutoff.is_some_and(|c| d <= c) {
                        return true;
                    }
                    if best.is_none_or(|(_, b)| d < b) {
                        *best = Some((i, d));
                    }
                }
                false
            }
            Node::Split { axis, value, left, right } => {
                let q = query[*axis];
                let (near, far) = if q < *value { (left, right) } else { (right, left) };
                if self.search(near, query, cutoff, gap_bound, dist, best) {
                    return true;
                }
                let bound = gap_bound((q - value).abs());
                if best.is_none_or(|(_, b)| bound <= b) {
                    return self.search(far, query, cutoff, gap_bound, dist, best);
                }
                false
            }
        }
    }

}

fn build_node(coords: &[Vec<f64>], mut indices: Vec<usize>) -> Node {
    if indices.len() <= LEAF_SIZE {
        return Node::Leaf(indices);
    }
    let dim = coords[indices[0]].len();
    let spread = |axis: usize| {
        let (lo, hi) = indices.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &i| {
            (lo.min(coords[i][axis]), hi.max(coords[i][axis]))
        });
        hi - lo
    };
    let axis = (0..dim).max_by(|&a, &b| spread(a).total_cmp(&spread(b))).unwrap_or(0);
    indices.sort_by(|&a, &b| coords[a][axis].total_cmp(&coords[b][axis]));
    let mid = indices.len() / 2;
    let value = coords[indices[mid]][axis];
    let right = indices.split_off(mid);
    Node::Split {
        axis,
        value,
        left: Box::new(build_node(coords, indices)),
        right: Box::new(build_node(coords, right)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matches_linear_scan() {
        let mut state = 0x2545F4914F6CDD1Du64;
        let mut next = || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            (state % 10_000) as f64 / 100.0
        };
        let pts: Vec<Vec<f64>> = (0..200).map(|_| vec![next(), next(), next()]).collect();
        let tree = KdTree::build(pts.clone());
        let euclid = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt();
        for _ in 0..50 {
            let q = vec![next(), next(), next()];
            let brute = pts.iter().map(|p| euclid(p, &q)).fold(f64::INFINITY, f64::min);
            let gap = |g: f64| (g * g).sqrt();
            match tree.nearest(&q, None, &gap, &mut |i| euclid(&pts[i], &q)) {
                Nearest::Found { index } => assert_eq!(euclid(&pts[index], &q), brute),
                Nearest::BelowCutoff => panic!("no cutoff given"),
            }
            match tree.nearest(&q, Some(brute + 1.0), &gap, &mut |i| euclid(&pts[i], &q)) {
                Nearest::BelowCutoff => {}
                Nearest::Found { .. } => panic!("a point below the cutoff exists"),
            }
        }
    }
}
