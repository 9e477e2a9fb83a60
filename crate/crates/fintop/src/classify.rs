//! Property flags for a space. Soberness is decided by the unit-iso test on
//! the filter space, not by a separation-axiom shortcut; the stone flag is
//! definitional (finite stone spaces are exactly the discrete ones).

use serde::Serialize;

use crate::sober;
use crate::space::FiniteSpace;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Classification {
    pub is_t0: bool,
    pub is_discrete: bool,
    pub is_sober: bool,
    pub is_stone: bool,
}

pub fn classify(x: &FiniteSpace) -> Classification {
    let is_discrete = x.is_discrete();
    Classification {
        is_t0: x.is_t0(),
        is_discrete,
        is_sober: sober::is_sober(x),
        is_stone: is_discrete,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flags_on_standard_spaces() {
        let c = classify(&FiniteSpace::discrete(2));
        assert!(c.is_t0 && c.is_discrete && c.is_sober && c.is_stone);
        let c = classify(&FiniteSpace::sierpinski());
        assert!(c.is_t0 && !c.is_discrete && c.is_sober && !c.is_stone);
        let c = classify(&FiniteSpace::indiscrete(2));
        assert!(!c.is_t0 && !c.is_discrete && !c.is_sober && !c.is_stone);
        let c = classify(&FiniteSpace::empty());
        assert!(c.is_t0 && c.is_discrete && c.is_sober && c.is_stone);
    }
}
