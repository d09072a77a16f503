//! Assignment-configuration spaces: maps from the closure's terms into
//! abstract valuation coordinates whose equality pattern matches exactly the
//! equalities of a type.

use super::{TypeCandidate, TypespaceError};
use crate::syntax::{Closure, Formula};

/// A term-to-coordinate map, indexed like `Closure::terms()`. Coordinates are
/// zero-based and rendered as domain values `d1`, `d2`, ... downstream.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Assignment {
    pub coords: Vec<usize>,
}

impl Assignment {
    pub fn coord_of(&self, term_ix: usize) -> usize {
        self.coords[term_ix]
    }
}

/// Partition of the closure's terms induced by the equalities in the type.
/// Returns one representative-class index per term; classes are numbered by
/// first occurrence.
pub fn equality_classes(closure: &Closure, ty: TypeCandidate) -> Vec<usize> {
    let terms = closure.terms();
    let mut class_of: Vec<usize> = Vec::with_capacity(terms.len());
    let mut next_class = 0;
    for (i, term) in terms.iter().enumerate() {
        let mut assigned = None;
        for j in 0..i {
            let eq = Formula::eq(terms[j].clone(), term.clone());
            if ty.contains(closure, &eq) {
                assigned = Some(class_of[j]);
                break;
            }
        }
        class_of.push(assigned.unwrap_or_else(|| {
            let c = next_class;
            next_class += 1;
            c
        }));
    }
    class_of
}

/// All assignments whose equality pattern matches the type: injections of the
/// type's equality classes into `k_size` coordinates, expanded to full maps,
/// in lexicographic order of the per-term coordinate vector. A closure with
/// no terms yields the single empty assignment.
pub fn config_space(
    closure: &Closure,
    ty: TypeCandidate,
    k_size: usize,
) -> Result<Vec<Assignment>, TypespaceError> {
    let class_of = equality_classes(closure, ty);
    let num_classes = class_of.iter().copied().max().map_or(0, |m| m + 1);
    if num_classes > k_size {
        return Err(TypespaceError::TooFewCoordinates {
            classes: num_classes,
            k_size,
        });
    }
    let mut out = Vec::new();
    let mut choice = vec![usize::MAX; num_classes];
    inject(&class_of, num_classes, k_size, 0, &mut choice, &mut out);
    Ok(out)
}

fn inject(
    class_of: &[usize],
    num_classes: usize,
    k_size: usize,
    class: usize,
    choice: &mut Vec<usize>,
    out: &mut Vec<Assignment>,
) {
    if class == num_classes {
        out.push(Assignment {
            coords: class_of.iter().map(|&c| choice[c]).collect(),
        });
        return;
    }
    for coord in 0..k_size {
        if choice[..class].contains(&coord) {
            continue;
        }
        choice[class] = coord;
        inject(class_of, num_classes, k_size, class + 1, choice, out);
    }
    choice[class] = usize::MAX;
}
