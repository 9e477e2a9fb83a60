//! Shared monad-law harness. Both monads implement `TopMonad`; the verifier
//! runs the unit laws, associativity, the inverse relation between unit and
//! multiplication, and naturality of both against a probe panel, reporting
//! each law with a witness on failure.

use serde::Serialize;

use crate::space::{enumerate_continuous_maps, ContinuousMap, FiniteSpace};
use crate::{sober, stone};

pub trait TopMonad {
    fn name(&self) -> &'static str;
    fn apply(&self, x: &FiniteSpace) -> FiniteSpace;
    fn map(&self, f: &ContinuousMap) -> ContinuousMap;
    fn unit(&self, x: &FiniteSpace) -> ContinuousMap;
    fn mult(&self, x: &FiniteSpace) -> Result<ContinuousMap, String>;
}

/// Ultrafilter-spectrum monad.
pub struct StoneMonad;

impl TopMonad for StoneMonad {
    fn name(&self) -> &'static str {
        "stone"
    }

    fn apply(&self, x: &FiniteSpace) -> FiniteSpace {
        stone::sc_object(x).carrier
    }

    fn map(&self, f: &ContinuousMap) -> ContinuousMap {
        stone::sc_morphism(f)
    }

    fn unit(&self, x: &FiniteSpace) -> ContinuousMap {
        stone::sc_object(x).unit
    }

    fn mult(&self, x: &FiniteSpace) -> Result<ContinuousMap, String> {
        stone::mu(x).map_err(|e| e.to_string())
    }
}

/// Completely-prime-filter monad.
pub struct SoberMonad;

impl TopMonad for SoberMonad {
    fn name(&self) -> &'static str {
        "sober"
    }

    fn apply(&self, x: &FiniteSpace) -> FiniteSpace {
        sober::fpo_object(x).carrier
    }

    fn map(&self, f: &ContinuousMap) -> ContinuousMap {
        sober::fpo_morphism(f)
    }

    fn unit(&self, x: &FiniteSpace) -> ContinuousMap {
        sober::fpo_object(x).unit
    }

    fn mult(&self, x: &FiniteSpace) -> Result<ContinuousMap, String> {
        sober::mu_sober(x).map_err(|e| e.to_string())
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct LawCheck {
    pub law: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct LawReport {
    pub monad: String,
    pub space: String,
    pub checks: Vec<LawCheck>,
}

impl LawReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    fn push(&mut self, law: &str, result: Result<(), String>) {
        match result {
            Ok(()) => self.checks.push(LawCheck {
                law: law.to_string(),
                passed: true,
                detail: String::new(),
            }),
            Err(detail) => {
                self.checks.push(LawCheck { law: law.to_string(), passed: false, detail })
            }
        }
    }
}

fn maps_equal(a: &ContinuousMap, b: &ContinuousMap) -> Result<(), String> {
    if a.domain() != b.domain() {
        return Err("domains differ".to_string());
    }
    if a.codomain() != b.codomain() {
        return Err("codomains differ".to_string());
    }
    for p in 0..a.mapping().len() {
        if a.apply(p) != b.apply(p) {
            return Err(format!("maps disagree at point {p}: {} vs {}", a.apply(p), b.apply(p)));
        }
    }
    Ok(())
}

/// Runs every law at `x`, with naturality checked against every continuous
/// map from `x` into each probe space.
pub fn verify_monad_laws(
    monad: &dyn TopMonad,
    x: &FiniteSpace,
    probes: &[FiniteSpace],
) -> LawReport {
    let mut report =
        LawReport { monad: monad.name().to_string(), space: x.to_string(), checks: Vec::new() };
    let tx = monad.apply(x);
    let unit_x = monad.unit(x);
    report.push(
        "unit-wiring",
        if unit_x.domain() == x && unit_x.codomain() == &tx {
            Ok(())
        } else {
            Err("unit endpoints are not x -> T(x)".to_string())
        },
    );
    let mu_x = match monad.mult(x) {
        Ok(m) => m,
        Err(e) => {
            report.push("mult-exists", Err(e));
            return report;
        }
    };
    report.push("mult-exists", Ok(()));
    let t2x = monad.apply(&tx);
    report.push(
        "mult-wiring",
        if mu_x.domain() == &t2x && mu_x.codomain() == &tx {
            Ok(())
        } else {
            Err("mult endpoints are not T2(x) -> T(x)".to_string())
        },
    );
    let id_tx = ContinuousMap::identity(&tx);
    let unit_tx = monad.unit(&tx);
    report.push("unit-mult-right", maps_equal(&unit_tx.then(&mu_x), &id_tx));
    let t_unit_x = monad.map(&unit_x);
    report.push("unit-mult-left", maps_equal(&t_unit_x.then(&mu_x), &id_tx));
    // Associativity needs the tower one level up.
    match monad.mult(&tx) {
        Ok(mu_tx) => {
            let t_mu_x = monad.map(&mu_x);
            report.push(
                "mult-assoc",
                maps_equal(&t_mu_x.then(&mu_x), &mu_tx.then(&mu_x)),
            );
        }
        Err(e) => report.push("mult-assoc", Err(format!("mult at T(x) failed: {e}"))),
    }
    // Idempotence: mult is exactly the inverse of the unit at T(x).
    report.push(
        "mult-inverts-unit",
        match unit_tx.inverse() {
            Some(inv) => maps_equal(&mu_x, &inv),
            None => Err("unit at T(x) is not a homeomorphism".to_string()),
        },
    );
    for (pi, y) in probes.iter().enumerate() {
        let ty = monad.apply(y);
        let unit_y = monad.unit(y);
        let mu_y = match monad.mult(y) {
            Ok(m) => m,
            Err(e) => {
                report.push(&format!("mult-exists-probe-{pi}"), Err(e));
                continue;
            }
        };
        let _ = &ty;
        let mut unit_nat = Ok(());
        let mut mult_nat = Ok(());
        for f in enumerate_continuous_maps(x, y) {
            let tf = monad.map(&f);
            if unit_nat.is_ok() {
                unit_nat = maps_equal(&f.then(&unit_y), &unit_x.then(&tf)).map_err(|e| {
                    format!("unit naturality fails for map {:?}: {e}", f.mapping())
                });
            }
            if mult_nat.is_ok() {
                let ttf = monad.map(&tf);
                mult_nat = maps_equal(&mu_x.then(&tf), &ttf.then(&mu_y)).map_err(|e| {
                    format!("mult naturality fails for map {:?}: {e}", f.mapping())
                });
            }
        }
        report.push(&format!("unit-natural-probe-{pi}"), unit_nat);
        report.push(&format!("mult-natural-probe-{pi}"), mult_nat);
    }
    report
}

/// Small panel of structurally distinct probe spaces used by default.
pub fn default_probe_panel() -> Vec<FiniteSpace> {
    vec![
        FiniteSpace::empty(),
        FiniteSpace::point(),
        FiniteSpace::sierpinski(),
        FiniteSpace::discrete(2),
        FiniteSpace::indiscrete(2),
        FiniteSpace::validate(3, &[0b000, 0b001, 0b011, 0b111]).unwrap(),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space::disjoint_union;

    #[test]
    fn laws_hold_on_sample_spaces() {
        let probes = default_probe_panel();
        for x in [
            FiniteSpace::empty(),
            FiniteSpace::point(),
            FiniteSpace::sierpinski(),
            FiniteSpace::indiscrete(3),
            FiniteSpace::discrete(2),
            disjoint_union(&FiniteSpace::sierpinski(), &FiniteSpace::point()),
        ] {
            for monad in [&StoneMonad as &dyn TopMonad, &SoberMonad as &dyn TopMonad] {
                let report = verify_monad_laws(monad, &x, &probes);
                assert!(
                    report.all_passed(),
                    "{} laws fail on {x}: {:?}",
                    monad.name(),
                    report.checks.iter().filter(|c| !c.passed).collect::<Vec<_>>()
                );
            }
        }
    }

    #[test]
    fn report_serializes() {
        let report =
            verify_monad_laws(&StoneMonad, &FiniteSpace::sierpinski(), &[FiniteSpace::point()]);
        let json = serde_json::to_string(&report).unwrap();
        assert!(json.contains("unit-mult-right"));
    }
}
