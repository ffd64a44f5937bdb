use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Seeded pseudo-random stream.
///
/// Backed by ChaCha8 (`rand_chacha`), whose output is value-stable across
/// platforms and releases. A stream is identified by `(seed, substream)`;
/// [`RandomStream::next_substream`] moves to an independent ChaCha stream of
/// the same seed, which is how restarts obtain fresh randomness
/// reproducibly.
#[derive(Clone, Debug)]
pub struct RandomStream {
    seed: u64,
    substream: u64,
    rng: ChaCha8Rng,
}

impl RandomStream {
    pub fn new(seed: u64) -> Self {
        Self {
            seed,
            substream: 0,
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn substream(&self) -> u64 {
        self.substream
    }

    pub fn next_substream(&mut self) {
        self.substream += 1;
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(self.substream);
        self.rng = rng;
    }
}

impl RngCore for RandomStream {
    fn next_u32(&mut self) -> u32 {
        self.rng.next_u32()
    }

    fn next_u64(&mut self) -> u64 {
        self.rng.next_u64()
    }

    fn fill_bytes(&mut self, dest: &mut [u8]) {
        self.rng.fill_bytes(dest)
    }

    fn try_fill_bytes(&mut self, dest: &mut [u8]) -> Result<(), rand::Error> {
        self.rng.try_fill_bytes(dest)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn equal_seeds_give_equal_streams() {
        let mut a = RandomStream::new(42);
        let mut b = RandomStream::new(42);
        for _ in 0..1_000_000 {
            assert_eq!(a.next_u64(), b.next_u64());
        }
    }

    #[test]
    fn known_first_draw_is_stable() {
        // Pinned so an accidental generator swap is caught.
        let mut a = RandomStream::new(0);
        let first = a.next_u64();
        let mut b = ChaCha8Rng::seed_from_u64(0);
        assert_eq!(first, b.next_u64());
    }

    #[test]
    fn substreams_differ_and_reproduce() {
        let mut a = RandomStream::new(7);
        let mut b = RandomStream::new(7);
        let base = a.next_u64();
        a.next_substream();
        b.next_substream();
        let x = a.next_u64();
        assert_ne!(base, x);
        assert_eq!(x, b.next_u64());
        assert_eq!(a.substream(), 1);
    }
}
