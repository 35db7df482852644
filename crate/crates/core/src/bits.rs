//! Square bit table used for reachability rows.

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitTable {
    n: usize,
    stride: usize,
    data: Vec<u64>,
}

impl BitTable {
    pub fn new(n: usize) -> Self {
        let stride = n.div_ceil(64);
        BitTable { n, stride, data: vec![0; n * stride] }
    }

    pub fn identity(n: usize) -> Self {
        let mut t = Self::new(n);
        for a in 0..n {
            t.set(a, a);
        }
        t
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    #[inline]
    pub fn get(&self, a: usize, b: usize) -> bool {
        self.data[a * self.stride + b / 64] >> (b % 64) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, a: usize, b: usize) {
        self.data[a * self.stride + b / 64] |= 1 << (b % 64);
    }

    #[inline]
    pub fn clear(&mut self, a: usize, b: usize) {
        self.data[a * self.stride + b / 64] &= !(1 << (b % 64));
    }

    pub fn row(&self, a: usize) -> &[u64] {
        &self.data[a * self.stride..(a + 1) * self.stride]
    }

    /// `row(dst) |= row(src)`.
    pub fn or_row(&mut self, dst: usize, src: usize) {
        if dst == src {
            return;
        }
        let (s, d) = (src * self.stride, dst * self.stride);
        for w in 0..self.stride {
            let v = self.data[s + w];
            self.data[d + w] |= v;
        }
    }

    pub fn set_row(&mut self, a: usize, words: &[u64]) {
        self.data[a * self.stride..(a + 1) * self.stride].copy_from_slice(words);
    }

    pub fn row_ones(&self, a: usize) -> impl Iterator<Item = usize> + '_ {
        ones(self.row(a))
    }

    pub fn count_ones(&self) -> usize {
        self.data.iter().map(|w| w.count_ones() as usize).sum()
    }
}

impl std::fmt::Debug for BitTable {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("BitTable").field("n", &self.n).field("ones", &self.count_ones()).finish()
    }
}

/// Indices of set bits in a word slice, ascending.
pub fn ones(words: &[u64]) -> impl Iterator<Item = usize> + '_ {
    words.iter().enumerate().flat_map(|(w, &word)| {
        let mut rest = word;
        std::iter::from_fn(move || {
            if rest == 0 {
                None
            } else {
                let t = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                Some(w * 64 + t)
            }
        })
    })
}
