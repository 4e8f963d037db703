/// Disjoint-set forest with union by rank and path halving.
///
/// Component sizes are tracked at the roots so cluster censuses need no
/// second pass.
#[derive(Debug, Clone)]
pub struct DisjointSet {
    parent: Vec<usize>,
    rank: Vec<u8>,
    size: Vec<usize>,
    components: usize,
}

impl DisjointSet {
    pub fn new(n: usize) -> Self {
        Self {
            parent: (0..n).collect(),
            rank: vec![0; n],
            size: vec![1; n],
            components: n,
        }
    }

    pub fn len(&self) -> usize {
        self.parent.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parent.is_empty()
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            let grandparent = self.parent[self.parent[x]];
            self.parent[x] = grandparent;
            x = grandparent;
        }
        x
    }

    /// Merges the sets containing `a` and `b`. Returns `false` if they were
    /// already joined.
    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (mut ra, mut rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        if self.rank[ra] < self.rank[rb] {
            std::mem::swap(&mut ra, &mut rb);
        }
        self.parent[rb] = ra;
        self.size[ra] += self.size[rb];
        if self.rank[ra] == self.rank[rb] {
            self.rank[ra] += 1;
        }
        self.components -= 1;
        true
    }

    pub fn same(&mut self, a: usize, b: usize) -> bool {
        self.find(a) == self.find(b)
    }

    /// Size of the set containing `x`.
    pub fn set_size(&mut self, x: usize) -> usize {
        let r = self.find(x);
        self.size[r]
    }

    pub fn components(&self) -> usize {
        self.components
    }

    /// Canonical partition labels: each element is tagged with the smallest
    /// member of its set.
    pub fn canonical_labels(&mut self) -> Vec<usize> {
        let n = self.len();
        let mut smallest = vec![usize::MAX; n];
        for x in 0..n {
            let r = self.find(x);
            smallest[r] = smallest[r].min(x);
        }
        (0..n).map(|x| smallest[self.find(x)]).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn union_and_find() {
        let mut d = DisjointSet::new(5);
        assert!(d.union(0, 1));
        assert!(d.union(3, 4));
        assert!(!d.union(1, 0));
        assert!(d.same(0, 1));
        assert!(!d.same(1, 3));
        assert_eq!(d.components(), 3);
        assert_eq!(d.set_size(4), 2);
        d.union(1, 4);
        assert_eq!(d.set_size(0), 4);
        assert_eq!(d.canonical_labels(), vec![0, 0, 2, 0, 0]);
    }

    #[test]
    fn find_is_idempotent() {
        let mut d = DisjointSet::new(8);
        for i in 0..7 {
            d.union(i, i + 1);
        }
        let r = d.find(7);
        assert_eq!(d.find(r), r);
    }
}
