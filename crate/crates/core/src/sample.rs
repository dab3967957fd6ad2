//! Seeded random elements and dyadic points for tests and experiments.

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::element::Element;
use crate::words::{Interval, Rational};

#[derive(Debug, Clone)]
pub struct Sampler {
    rng: ChaCha8Rng,
    letters: [Element; 4],
}

impl Sampler {
    pub fn new(seed: u64) -> Self {
        let (x0, x1) = (Element::x0(), Element::x1());
        Sampler {
            rng: ChaCha8Rng::seed_from_u64(seed),
            letters: [x0.invert(), x1.invert(), x0, x1],
        }
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }

    /// Uniform in `0..n`.
    pub fn index(&mut self, n: usize) -> usize {
        self.rng.gen_range(0..n)
    }

    /// A product of `1..=max_len` letters `x0^{±1}, x1^{±1}`.
    pub fn element(&mut self, max_len: usize) -> Element {
        let len = self.rng.gen_range(1..=max_len.max(1));
        let mut e = Element::identity();
        for _ in 0..len {
            let k = self.rng.gen_range(0..4);
            e = e.compose(&self.letters[k]);
        }
        e
    }

    pub fn nontrivial_element(&mut self, max_len: usize) -> Element {
        loop {
            let e = self.element(max_len);
            if !e.is_identity() {
                return e;
            }
        }
    }

    /// A dyadic in the open interval `(a,b)` whose denominator exponent is at
    /// most `extra` above the smallest one available there.
    pub fn dyadic_in(&mut self, a: &Rational, b: &Rational, extra: i64) -> Rational {
        assert!(a < b, "empty interval");
        let mut k = 0i64;
        loop {
            let scale = Rational::pow2(k);
            if (a * &scale).floor() + 1 < -(-(b * &scale)).floor() {
                break;
            }
            k += 1;
        }
        k += self.rng.gen_range(0..=extra.max(0));
        let scale = Rational::pow2(k);
        let first = (a * &scale).floor() + 1;
        let last = -(-(b * &scale)).floor() - 1;
        let span: BigInt = &last - &first;
        let offset = u64::try_from(&span).map_or(0, |s| self.rng.gen_range(0..=s.min(1 << 20)));
        Rational::new(first + offset, 1) / scale
    }

    /// A closed interval `[x,y]` of dyadics inside the open interval `(a,b)`.
    pub fn dyadic_interval_in(&mut self, a: &Rational, b: &Rational, extra: i64) -> Interval {
        let x = self.dyadic_in(a, b, extra);
        let y = self.dyadic_in(a, b, extra);
        if x <= y {
            Interval::closed(x, y)
        } else {
            Interval::closed(y, x)
        }
    }
}
