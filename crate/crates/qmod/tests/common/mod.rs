//! Shared helpers for the integration suites: a tiny deterministic
//! generator so the randomized checks are reproducible.

pub struct Mix(pub u64);

impl Mix {
    pub fn next(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9e3779b97f4a7c15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        z ^ (z >> 31)
    }

    pub fn int(&mut self, lo: i64, hi: i64) -> i64 {
        lo + (self.next() % (hi - lo + 1) as u64) as i64
    }

    /// nonzero integer in [lo, hi]
    pub fn nonzero(&mut self, lo: i64, hi: i64) -> i64 {
        loop {
            let v = self.int(lo, hi);
            if v != 0 {
                return v;
            }
        }
    }
}
