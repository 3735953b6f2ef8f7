//! Fixtures shared by the benchmarks.

use ratcycles_core::Composition;

pub fn four_step() -> Composition {
    "q=3\nsteps=(-5,-2) (2,1) (7,6) (-1,-3)".parse().expect("valid spec")
}

pub fn seven_step() -> Composition {
    "q=2\np=11\nword=T0 T0 T0 T0 S5 T0 S3".parse().expect("valid spec")
}

/// `(3x+1)/2` word of the -17 cycle, repeated `k` times.
pub fn long_word(k: usize) -> Composition {
    Composition::from_word(2, 3, 1, 0, &"TTTSSSTSSSS".repeat(k)).expect("valid word")
}
