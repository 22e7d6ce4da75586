//! Hand-checked fixtures shipped with the library.

use crate::flat::format::parse_surface;
use crate::flat::{FlatSurface, Vec2};
use crate::scalar::{int, Golden, Rational, Scalar};
use crate::traintrack::format::parse_track;
use crate::traintrack::{BranchWeights, TrainTrack};

macro_rules! fixture {
    ($file:literal) => {
        include_str!(concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures/", $file))
    };
}

pub const PT1_TTK: &str = fixture!("pt1.ttk");
pub const S04_TTK: &str = fixture!("s04.ttk");
pub const T12_TTK: &str = fixture!("t12.ttk");
pub const G2_TTK: &str = fixture!("g2.ttk");
pub const G2_QUAD_TTK: &str = fixture!("g2_quad.ttk");
pub const TR_ONLY_TTK: &str = fixture!("tr_only.ttk");
pub const PT1_POSITIVE_TTW: &str = fixture!("pt1_positive.ttw");
pub const S04_POSITIVE_TTW: &str = fixture!("s04_positive.ttw");
pub const S04_DRIVE_TTW: &str = fixture!("s04_drive.ttw");
pub const S04_GOLDEN_TTW: &str = fixture!("s04_golden.ttw");
pub const ST2_FSF: &str = fixture!("st2.fsf");
pub const GOLDEN_L_FSF: &str = fixture!("golden_l.fsf");
pub const PILLOWCASE_FSF: &str = fixture!("pillowcase.fsf");

fn load(text: &str) -> TrainTrack {
    parse_track(text).expect("catalog fixture parses")
}

/// Maximal recurrent track on the once-punctured torus. Its only large
/// branch is branch 0 and branch 1 is the loop around the puncture.
pub fn pt1() -> TrainTrack {
    load(PT1_TTK)
}

/// Complete maximal track on the four-punctured sphere: four punctured
/// monogons, large branches 0 and 5.
pub fn s04() -> TrainTrack {
    load(S04_TTK)
}

/// Complete maximal track on the twice-punctured torus.
pub fn t12() -> TrainTrack {
    load(T12_TTK)
}

/// Complete maximal track on the closed genus-2 surface.
pub fn g2() -> TrainTrack {
    load(G2_TTK)
}

/// G2 with two branch ends exchanged: still connected, but one complementary
/// region has four cusps.
pub fn g2_four_cusped() -> TrainTrack {
    load(G2_QUAD_TTK)
}

/// Maximal track on the once-punctured torus that is transversely recurrent
/// but carries no positive transverse measure.
pub fn transversely_recurrent_only() -> TrainTrack {
    load(TR_ONLY_TTK)
}

/// Catalog tracks that are both recurrent and transversely recurrent.
pub fn complete_tracks() -> Vec<(&'static str, TrainTrack)> {
    vec![("S04", s04()), ("T12", t12()), ("G2", g2())]
}

/// Every train-track fixture that passes validation.
pub fn valid_tracks() -> Vec<(&'static str, TrainTrack)> {
    let mut v = vec![("PT1", pt1())];
    v.extend(complete_tracks());
    v
}

fn ints<W: Scalar>(xs: &[i64]) -> Vec<W> {
    xs.iter().map(|&x| W::from_rational(&int(x))).collect()
}

/// Smallest strictly positive integral transverse measure on PT1.
pub fn pt1_positive_measure() -> BranchWeights {
    BranchWeights::transverse(&pt1(), ints::<Rational>(&[4, 2, 2, 2, 1, 1])).expect("switch conditions")
}

/// Smallest strictly positive integral transverse measure on S04.
pub fn s04_positive_measure() -> BranchWeights {
    BranchWeights::transverse(&s04(), ints::<Rational>(&[2, 1, 1, 1, 1, 2])).expect("switch conditions")
}

/// The two vertex cycles of S04, in sorted order.
pub fn s04_vertex_cycles() -> [Vec<i64>; 2] {
    [vec![1, 0, 1, 0, 1, 1], vec![1, 1, 0, 1, 0, 1]]
}

/// v1 + phi v2 on S04, with v1, v2 its vertex cycles. Full splitting acts on
/// the projectivized cone of S04 as a golden-ratio hyperbolic map and this is
/// its expanding eigen-direction.
pub fn s04_golden_measure() -> BranchWeights<Golden> {
    let [v1, v2] = s04_vertex_cycles();
    let phi = Golden::phi();
    let values = v1
        .iter()
        .zip(&v2)
        .map(|(&a, &b)| Golden::from_i64(a) + phi.clone() * Golden::from_i64(b))
        .collect();
    BranchWeights::transverse(&s04(), values).expect("switch conditions")
}

/// A strictly positive S04 measure whose full splitting sequence stays
/// generic for at least 100 steps. Small integral measures on S04 tie early.
pub fn s04_drive_measure() -> BranchWeights {
    BranchWeights::transverse(&s04(), ints::<Rational>(&[102, 1, 101, 1, 101, 102])).expect("switch conditions")
}

/// Genus-two surface tiled by three unit squares in an L. Its single cone
/// point has angle 6 pi.
pub fn st2() -> FlatSurface<Rational> {
    parse_surface(ST2_FSF, 0.0).expect("catalog fixture parses")
}

/// The golden L, a Veech surface in genus two, with exact coordinates.
pub fn golden_l() -> FlatSurface<Golden> {
    parse_surface(GOLDEN_L_FSF, 0.0).expect("catalog fixture parses")
}

/// Sphere with four poles, glued from a 2 x 1 rectangle.
pub fn pillowcase() -> FlatSurface<Rational> {
    parse_surface(PILLOWCASE_FSF, 0.0).expect("catalog fixture parses")
}

/// The golden L scaled to area one and rotated so that the direction
/// (1, sqrt 2) becomes horizontal. Neither the horizontal nor the vertical
/// direction of the result is periodic.
pub fn golden_l_rotated() -> FlatSurface<f64> {
    golden_l()
        .with_horizontal(Vec2::new(1.0, 2f64.sqrt()), true, 1e-9)
        .expect("rotated copy is a valid surface")
}
