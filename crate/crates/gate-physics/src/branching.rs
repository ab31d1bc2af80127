//! Radiative branching between fine-structure levels of an LS-coupled
//! multiplet, `Γ_J ∝ ω_J³ (2J+1)(2L'+1) {L L' 1; J' J S}²`.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// Angular momentum stored as twice its value, so half-integers are exact.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Twice(i64);

impl Twice {
    fn of(j: f64) -> Result<Self> {
        let t = 2.0 * j;
        if j < 0.0 || (t - t.round()).abs() > 1e-9 {
            return Err(Error::Triangle(format!("{j} is not a non-negative multiple of 1/2")));
        }
        Ok(Twice(t.round() as i64))
    }
}

fn factorial(n: i64) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

fn triangle(a: Twice, b: Twice, c: Twice) -> bool {
    let (a, b, c) = (a.0, b.0, c.0);
    c >= (a - b).abs() && c <= a + b && (a + b + c) % 2 == 0
}

fn delta(a: i64, b: i64, c: i64) -> f64 {
    // Arguments are doubled; the sums below are even by the triangle rule.
    (factorial((a + b - c) / 2) * factorial((a - b + c) / 2) * factorial((-a + b + c) / 2) / factorial((a + b + c) / 2 + 1)).sqrt()
}

/// Wigner 6-j symbol `{j1 j2 j3; j4 j5 j6}` by the Racah sum.
pub fn six_j(j1: f64, j2: f64, j3: f64, j4: f64, j5: f64, j6: f64) -> Result<f64> {
    let [a, b, c, d, e, f] = [j1, j2, j3, j4, j5, j6].map(Twice::of);
    let (a, b, c, d, e, f) = (a?, b?, c?, d?, e?, f?);
    for (x, y, z) in [(a, b, c), (a, e, f), (d, b, f), (d, e, c)] {
        if !triangle(x, y, z) {
            return Err(Error::Triangle(format!("({}, {}, {})", x.0 as f64 / 2.0, y.0 as f64 / 2.0, z.0 as f64 / 2.0)));
        }
    }
    let (a, b, c, d, e, f) = (a.0, b.0, c.0, d.0, e.0, f.0);
    let pre = delta(a, b, c) * delta(a, e, f) * delta(d, b, f) * delta(d, e, c);
    let lower = [a + b + c, a + e + f, d + b + f, d + e + c].into_iter().max().unwrap() / 2;
    let upper = [a + b + d + e, b + c + e + f, c + a + f + d].into_iter().min().unwrap() / 2;
    let mut sum = 0.0;
    for t in lower..=upper {
        let den = factorial(t - (a + b + c) / 2)
            * factorial(t - (a + e + f) / 2)
            * factorial(t - (d + b + f) / 2)
            * factorial(t - (d + e + c) / 2)
            * factorial((a + b + d + e) / 2 - t)
            * factorial((b + c + e + f) / 2 - t)
            * factorial((c + a + f + d) / 2 - t);
        let sign = if t % 2 == 0 { 1.0 } else { -1.0 };
        sum += sign * factorial(t + 1) / den;
    }
    Ok(pre * sum)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InitialLevel {
    pub l: f64,
    pub s: f64,
    pub j: f64,
}

/// A final level of the same spin; `omega` is the transition angular
/// frequency in any unit.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FinalLevel {
    pub l: f64,
    pub j: f64,
    pub omega: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BranchingInput {
    pub initial: InitialLevel,
    pub finals: Vec<FinalLevel>,
}

/// Fraction of decays into each final level, in input order.
pub fn branching_ratios(input: &BranchingInput) -> Result<Vec<f64>> {
    let init = input.initial;
    if input.finals.is_empty() {
        return Err(Error::InvalidConfig("no final levels".into()));
    }
    let mut rates = Vec::with_capacity(input.finals.len());
    for f in &input.finals {
        if !(f.omega > 0.0) {
            return Err(Error::InvalidConfig(format!("transition frequency {} must be positive", f.omega)));
        }
        let w = six_j(f.l, init.l, 1.0, init.j, f.j, init.s)?;
        rates.push(f.omega.powi(3) * (2.0 * f.j + 1.0) * (2.0 * init.l + 1.0) * w * w);
    }
    let total: f64 = rates.iter().sum();
    if !(total > 0.0) {
        return Err(Error::InvalidConfig("every listed decay is forbidden".into()));
    }
    Ok(rates.into_iter().map(|r| r / total).collect())
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
struct DataLevel {
    label: String,
    l: f64,
    #[serde(default)]
    s: f64,
    j: f64,
    energy_cm: f64,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
struct DataTransition {
    name: String,
    description: String,
    initial: DataLevel,
    finals: Vec<DataLevel>,
}

#[derive(Debug, Deserialize)]
struct DataFile {
    transition: Vec<DataTransition>,
}

/// A named decay from the bundled level data.
#[derive(Debug, Clone, PartialEq)]
pub struct TabulatedDecay {
    pub name: String,
    pub description: String,
    pub labels: Vec<String>,
    pub input: BranchingInput,
}

pub const BUNDLED_LEVELS: &str = include_str!("../data/branching.toml");

/// Parse a level-energy file in the bundled format. Transition
/// frequencies are energy differences in cm^-1.
pub fn parse_level_data(text: &str) -> Result<Vec<TabulatedDecay>> {
    let file: DataFile = toml::from_str(text).map_err(|e| Error::Data(e.to_string()))?;
    Ok(file
        .transition
        .into_iter()
        .map(|t| TabulatedDecay {
            labels: t.finals.iter().map(|f| f.label.clone()).collect(),
            input: BranchingInput {
                initial: InitialLevel { l: t.initial.l, s: t.initial.s, j: t.initial.j },
                finals: t.finals.iter().map(|f| FinalLevel { l: f.l, j: f.j, omega: t.initial.energy_cm - f.energy_cm }).collect(),
            },
            name: t.name,
            description: t.description,
        })
        .collect())
}

pub fn bundled_decay(name: &str) -> Result<TabulatedDecay> {
    parse_level_data(BUNDLED_LEVELS)?
        .into_iter()
        .find(|t| t.name == name)
        .ok_or_else(|| Error::Data(format!("no transition named {name}")))
}

/// The Yb 6s7s 3S1 -> 6s6p 3P_J example.
pub fn yb_3s1_decay() -> TabulatedDecay {
    bundled_decay("yb_6s7s_3S1_to_6s6p_3P").expect("bundled data parses")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tabulated_six_j() {
        // Closed forms: {a b c; 0 c b} = (-1)^(a+b+c) / sqrt((2b+1)(2c+1)),
        // {1 1 1; 1 1 1} = 1/6, {2 2 2; 2 2 2} = -3/70.
        assert!((six_j(1.0, 1.0, 1.0, 0.0, 1.0, 1.0).unwrap() + 1.0 / 3.0).abs() < 1e-14);
        assert!((six_j(1.0, 1.0, 1.0, 1.0, 1.0, 1.0).unwrap() - 1.0 / 6.0).abs() < 1e-14);
        assert!((six_j(2.0, 2.0, 2.0, 2.0, 2.0, 2.0).unwrap() + 3.0 / 70.0).abs() < 1e-14);
        assert!((six_j(0.5, 0.5, 1.0, 0.5, 0.5, 0.0).unwrap() - 0.5).abs() < 1e-14);
    }

    #[test]
    fn triangle_violation() {
        assert!(matches!(six_j(1.0, 1.0, 3.0, 1.0, 1.0, 1.0), Err(Error::Triangle(_))));
        assert!(six_j(0.5, 0.5, 0.5, 0.5, 0.5, 0.5).is_err());
    }

    #[test]
    fn single_final_level() {
        let input = BranchingInput {
            initial: InitialLevel { l: 0.0, s: 1.0, j: 1.0 },
            finals: vec![FinalLevel { l: 1.0, j: 2.0, omega: 3.0 }],
        };
        assert_eq!(branching_ratios(&input).unwrap(), vec![1.0]);
    }

    #[test]
    fn bundled_data_parses() {
        let d = yb_3s1_decay();
        assert_eq!(d.labels, ["6s6p 3P0", "6s6p 3P1", "6s6p 3P2"]);
        assert!((d.input.finals[0].omega - 15406.253).abs() < 1e-6);
        assert!(bundled_decay("missing").is_err());
    }
}
