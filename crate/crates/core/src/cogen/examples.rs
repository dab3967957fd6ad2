//! Fixed sets without a common co-generator.

use crate::dynamics::realize_abelian;
use crate::element::{AbelianImage, Element};
use crate::words::BinaryWord;

/// `x0` squeezed into `[0, 1/2]`: image `(1,0)`, identity on `[1/2, 1]`.
fn left_half_x0() -> Element {
    Element::x0().supported_in(&BinaryWord::zeros(1))
}

/// Two elements with images `(1,0)` and `(0,1)` fixing `[1/2,1]` and
/// `[0,1/2]` pointwise, so every point of `(0,1)` is fixed by one of them.
pub fn obstructed_pair() -> Vec<Element> {
    let f1 = left_half_x0();
    let f2 = f1.mirror();
    debug_assert_eq!(f1.abelianization(), AbelianImage::new(1, 0));
    debug_assert_eq!(f2.abelianization(), AbelianImage::new(0, 1));
    vec![f1, f2]
}

/// [`obstructed_pair`] together with an element of image `(2,1)`; the only
/// common abelian co-generators are `±(1,1)`.
pub fn obstructed_triple() -> Vec<Element> {
    let mut s = obstructed_pair();
    let f3 = realize_abelian(2, 1).expect("(2,1) is realisable");
    debug_assert_eq!(f3.abelianization(), AbelianImage::new(2, 1));
    s.push(f3);
    s
}
