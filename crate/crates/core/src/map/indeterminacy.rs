//! Indeterminacy loci of the extension of a polynomial map to `P^n`.
//!
//! Homogenising `f` with the extra coordinate `T` and setting `T = 0` leaves
//! the top-degree homogeneous parts of the components. Their common zero set
//! in the hyperplane at infinity is the indeterminacy locus. For the built-in
//! families this set is always a coordinate subspace, found by repeatedly
//! eliminating a variable that occurs alone as a pure power.

use std::fmt;

use crate::poly::MultiPoly;

/// The locus `{T = 0, z_i = 0 for i in vanishing}` inside `P^n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Indeterminacy {
    Coordinate { n: usize, vanishing: Vec<usize> },
    /// The elimination got stuck on a form that is not a pure power.
    Unknown,
}

impl Indeterminacy {
    /// Projective dimension; `-1` for the empty set.
    pub fn dim(&self) -> Option<i32> {
        match self {
            Indeterminacy::Coordinate { n, vanishing } => Some(*n as i32 - 1 - vanishing.len() as i32),
            Indeterminacy::Unknown => None,
        }
    }

    pub fn vanishing(&self) -> Option<&[usize]> {
        match self {
            Indeterminacy::Coordinate { vanishing, .. } => Some(vanishing),
            Indeterminacy::Unknown => None,
        }
    }

    /// Coordinates not forced to vanish on the locus.
    pub fn free(&self) -> Option<Vec<usize>> {
        match self {
            Indeterminacy::Coordinate { n, vanishing } => {
                Some((0..*n).filter(|i| !vanishing.contains(i)).collect())
            }
            Indeterminacy::Unknown => None,
        }
    }

    /// Whether the two loci are disjoint; `None` if either is unknown.
    pub fn disjoint(&self, other: &Indeterminacy) -> Option<bool> {
        match (self, other) {
            (
                Indeterminacy::Coordinate { n, vanishing: a },
                Indeterminacy::Coordinate { vanishing: b, .. },
            ) => Some((0..*n).all(|i| a.contains(&i) || b.contains(&i))),
            _ => None,
        }
    }
}

pub(crate) fn coord_name(n: usize, i: usize) -> String {
    if n <= 3 {
        ["x", "y", "z"][i].to_string()
    } else {
        format!("z{}", i + 1)
    }
}

impl fmt::Display for Indeterminacy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Indeterminacy::Unknown => write!(f, "unknown"),
            Indeterminacy::Coordinate { n, vanishing } => {
                write!(f, "T=0")?;
                for &i in vanishing {
                    write!(f, " {}=0", coord_name(*n, i))?;
                }
                Ok(())
            }
        }
    }
}

/// Common zero locus at `T = 0` of the degree-`deg` parts of `components`.
pub fn locus_at_infinity(components: &[MultiPoly], deg: u32) -> Indeterminacy {
    let n = components.len();
    let mut forms: Vec<MultiPoly> = components
        .iter()
        .map(|c| c.homogeneous_part(deg))
        .filter(|h| !h.is_zero())
        .collect();
    let mut vanishing: Vec<usize> = Vec::new();
    loop {
        if forms.is_empty() {
            vanishing.sort_unstable();
            return Indeterminacy::Coordinate { n, vanishing };
        }
        // a nonzero constant form would mean an empty locus, which cannot
        // happen for top-degree parts of positive degree
        let pure = forms.iter().find_map(|h| match h.support_vars().as_slice() {
            [v] => Some(*v),
            _ => None,
        });
        let Some(v) = pure else {
            return Indeterminacy::Unknown;
        };
        vanishing.push(v);
        forms = forms
            .iter()
            .map(|h| h.restrict_zero(v))
            .filter(|h| !h.is_zero())
            .collect();
        if vanishing.len() == n {
            vanishing.sort_unstable();
            return Indeterminacy::Coordinate { n, vanishing };
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn henon_leading_part_gives_a_point() {
        // leading parts (0, y^2)
        let comps = vec![MultiPoly::var(2, 1), MultiPoly::var(2, 1).pow(2)];
        let loc = locus_at_infinity(&comps, 2);
        assert_eq!(loc, Indeterminacy::Coordinate { n: 2, vanishing: vec![1] });
        assert_eq!(loc.dim(), Some(0));
        assert_eq!(loc.to_string(), "T=0 y=0");
    }

    #[test]
    fn mixed_monomial_is_unknown() {
        let xy = MultiPoly::var(2, 0).mul(&MultiPoly::var(2, 1));
        assert_eq!(locus_at_infinity(&[xy.clone(), xy], 2), Indeterminacy::Unknown);
    }

    #[test]
    fn disjointness_of_coordinate_loci() {
        let a = Indeterminacy::Coordinate { n: 3, vanishing: vec![0, 1] };
        let b = Indeterminacy::Coordinate { n: 3, vanishing: vec![2] };
        let c = Indeterminacy::Coordinate { n: 3, vanishing: vec![1] };
        assert_eq!(a.disjoint(&b), Some(true));
        assert_eq!(b.disjoint(&c), Some(false));
    }
}
