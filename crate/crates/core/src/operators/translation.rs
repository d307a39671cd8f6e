//! Magnetic translations (T_γ f)(x) = t_γ(γ⁻¹x) f(γ⁻¹x).

use num_complex::Complex64;

use crate::group_graph::{act, GroupElement, Vertex};
use crate::operators::local::{apply_local, difference, l2_norm, FiniteFunction, LocalOperator};
use crate::operators::weights::Cocycle;

#[derive(Clone, Debug)]
enum Twist {
    Cocycle(Cocycle),
    Trivial,
}

#[derive(Clone, Debug)]
pub struct MagneticTranslation {
    gamma: GroupElement,
    twist: Twist,
}

impl MagneticTranslation {
    pub fn from_cocycle(cocycle: Cocycle) -> Self {
        MagneticTranslation { gamma: cocycle.gamma, twist: Twist::Cocycle(cocycle) }
    }

    /// Plain translation, t_γ ≡ 1.
    pub fn untwisted(gamma: GroupElement) -> Self {
        MagneticTranslation { gamma, twist: Twist::Trivial }
    }

    pub fn gamma(&self) -> GroupElement {
        self.gamma
    }

    fn twist_at(&self, v: &Vertex) -> Option<Complex64> {
        match &self.twist {
            Twist::Cocycle(c) => c.value(v),
            Twist::Trivial => Some(Complex64::new(1.0, 0.0)),
        }
    }

    /// T_γ f, or `None` when f leaves the window the cocycle is known on.
    pub fn apply(&self, f: &FiniteFunction) -> Option<FiniteFunction> {
        f.iter()
            .map(|(y, a)| Some((act(self.gamma, *y), self.twist_at(y)? * a)))
            .collect()
    }
}

/// max_f ‖A T_γ f − T_γ A f‖₂ over the test family.
///
/// Returns `None` if a test function (or its image) leaves the window on
/// which the twist was solved.
pub fn translation_commutator(
    op: &dyn LocalOperator,
    translation: &MagneticTranslation,
    tests: &[FiniteFunction],
) -> Option<f64> {
    let mut worst = 0.0f64;
    for f in tests {
        let atf = apply_local(op, &translation.apply(f)?);
        let taf = translation.apply(&apply_local(op, f))?;
        worst = worst.max(l2_norm(&difference(&atf, &taf)));
    }
    Some(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::sync::Arc;

    use crate::group_graph::{build_graph, GraphSpec};
    use crate::operators::local::{delta, harper_dml};
    use crate::operators::weights::{hofstadter_weights, validate_weights, Flux, UniformWeight};

    fn origin2() -> Vertex {
        Vertex::new(0, GroupElement::from_slice(&[0, 0]))
    }

    #[test]
    fn hofstadter_commutes_with_magnetic_translation() {
        let g = Arc::new(build_graph(&GraphSpec::square()).unwrap());
        let w = Arc::new(hofstadter_weights(Flux::rational(1, 3).unwrap()));
        let (_, dml) = harper_dml(g.clone(), w.clone());
        let cocycles = validate_weights(&g, w.as_ref(), 4).unwrap();
        let east = cocycles.into_iter().find(|c| c.gamma == GroupElement::basis(0)).unwrap();
        let t = MagneticTranslation::from_cocycle(east);
        let r = translation_commutator(&dml, &t, &[delta(origin2())]).unwrap();
        assert!(r <= 1e-12, "{r}");

        let wrong = MagneticTranslation::untwisted(GroupElement::basis(0));
        let r = translation_commutator(&dml, &wrong, &[delta(origin2())]).unwrap();
        // two vertical hops differ by |1 − e^{2πi/3}| = √3 each
        assert!(r > 0.1);
        assert!((r - 6f64.sqrt()).abs() < 1e-12, "{r}");
    }

    #[test]
    fn ordinary_translation_is_exact_without_flux() {
        let g = Arc::new(build_graph(&GraphSpec::square()).unwrap());
        let (h, dml) = harper_dml(g, Arc::new(UniformWeight));
        let t = MagneticTranslation::untwisted(GroupElement::from_slice(&[2, -1]));
        let tests = vec![delta(origin2()), delta(Vertex::new(0, GroupElement::from_slice(&[1, 1])))];
        assert_eq!(translation_commutator(&h, &t, &tests), Some(0.0));
        assert_eq!(translation_commutator(&dml, &t, &tests), Some(0.0));
    }

    #[test]
    fn outside_window_is_reported() {
        let g = Arc::new(build_graph(&GraphSpec::square()).unwrap());
        let w = hofstadter_weights(Flux::rational(1, 3).unwrap());
        let c = validate_weights(&g, &w, 1).unwrap().remove(0);
        let t = MagneticTranslation::from_cocycle(c);
        let far = delta(Vertex::new(0, GroupElement::from_slice(&[5, 5])));
        assert!(t.apply(&far).is_none());
    }
}
