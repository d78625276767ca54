use rand::Rng;

use super::Formula;

/// Parameters for seeded random formulas.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FormulaShape {
    pub max_depth: usize,
    /// Atoms are drawn from `a0 … a{atoms-1}`.
    pub atoms: usize,
    /// Largest `and`/`or` arity.
    pub max_arity: usize,
}

impl FormulaShape {
    pub fn new(max_depth: usize, atoms: usize, max_arity: usize) -> Self {
        assert!(atoms > 0, "formula shape needs at least one atom");
        FormulaShape {
            max_depth,
            atoms,
            max_arity,
        }
    }
}

pub fn random_formula<R: Rng>(rng: &mut R, shape: &FormulaShape) -> Formula {
    gen(rng, shape, shape.max_depth)
}

fn gen<R: Rng>(rng: &mut R, shape: &FormulaShape, depth: usize) -> Formula {
    // Leaves get likelier as depth runs out.
    if depth == 0 || rng.gen_ratio(1, depth as u32 + 2) {
        return Formula::Atom(rng.gen_range(0..shape.atoms));
    }
    match rng.gen_range(0..3) {
        0 => Formula::not(gen(rng, shape, depth - 1)),
        k => {
            let arity = if shape.max_arity == 0 || rng.gen_ratio(1, 12) {
                0
            } else {
                rng.gen_range(1..=shape.max_arity)
            };
            let kids = (0..arity).map(|_| gen(rng, shape, depth - 1)).collect();
            if k == 1 {
                Formula::And(kids)
            } else {
                Formula::Or(kids)
            }
        }
    }
}

/// Between one and `max_formulas` random formulas.
pub fn random_theory<R: Rng>(
    rng: &mut R,
    shape: &FormulaShape,
    max_formulas: usize,
) -> Vec<Formula> {
    let n = rng.gen_range(1..=max_formulas.max(1));
    (0..n).map(|_| random_formula(rng, shape)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::proplogic::support;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn respects_shape_and_is_deterministic() {
        let shape = FormulaShape::new(5, 6, 3);
        let mut r1 = ChaCha8Rng::seed_from_u64(7);
        let mut r2 = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..200 {
            let f = random_formula(&mut r1, &shape);
            assert_eq!(f, random_formula(&mut r2, &shape));
            assert!(f.depth() <= 5);
            assert!(f.max_arity() <= 3);
            assert!(support(&f).iter().all(|&g| g < 6));
        }
    }
}
