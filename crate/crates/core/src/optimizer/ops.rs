use rand::Rng;

use crate::space::{Point, SearchBox};

/// `v = x_r1 + F (x_r2 − x_r3)`, reflected back into the box.
pub fn de_mutate(r1: Point, r2: Point, r3: Point, scale: f64, bbox: &SearchBox) -> Point {
    bbox.reflect(Point::new(
        r1.theta + scale * (r2.theta - r3.theta),
        r1.phi + scale * (r2.phi - r3.phi),
    ))
}

/// Binomial crossover with one forced coordinate taken from `v`.
pub fn de_crossover<R: Rng + ?Sized>(x: Point, v: Point, rate: f64, rng: &mut R) -> Point {
    let forced = rng.gen_range(0..2);
    let mut u = x;
    for axis in 0..2 {
        let take = rng.gen::<f64>() < rate;
        if take || axis == forced {
            u.set_coord(axis, v.coord(axis));
        }
    }
    u
}

/// Mutation followed by crossover against `parent`.
pub(crate) fn trial<R: Rng + ?Sized>(
    parent: Point,
    donors: [Point; 3],
    scale: f64,
    rate: f64,
    bbox: &SearchBox,
    rng: &mut R,
) -> Point {
    let v = de_mutate(donors[0], donors[1], donors[2], scale, bbox);
    de_crossover(parent, v, rate, rng)
}
