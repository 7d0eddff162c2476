use agto_core::SearchSpace;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DecodeError {
    #[error("position has {got} genes, expected 5")]
    Dimension { got: usize },
    #[error("gene {index} = {value} lies outside [{lower}, {upper}]")]
    OutOfBounds { index: usize, value: f64, lower: f64, upper: f64 },
    #[error("unknown activation {0:?}")]
    UnknownActivation(String),
    #[error("invalid {name} range [{lower}, {upper}]")]
    InvalidRange { name: &'static str, lower: f64, upper: f64 },
}

/// Activation functions in gene order: gene value `k..k+1` selects index `k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Activation {
    Relu,
    Sigmoid,
    Softplus,
    Softsign,
    Tanh,
    Selu,
    Elu,
    Exponential,
    Leakyrelu,
    Prelu,
}

impl Activation {
    pub const ALL: [Activation; 10] = [
        Activation::Relu,
        Activation::Sigmoid,
        Activation::Softplus,
        Activation::Softsign,
        Activation::Tanh,
        Activation::Selu,
        Activation::Elu,
        Activation::Exponential,
        Activation::Leakyrelu,
        Activation::Prelu,
    ];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn name(self) -> &'static str {
        match self {
            Activation::Relu => "relu",
            Activation::Sigmoid => "sigmoid",
            Activation::Softplus => "softplus",
            Activation::Softsign => "softsign",
            Activation::Tanh => "tanh",
            Activation::Selu => "selu",
            Activation::Elu => "elu",
            Activation::Exponential => "exponential",
            Activation::Leakyrelu => "leakyrelu",
            Activation::Prelu => "prelu",
        }
    }
}

impl fmt::Display for Activation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Activation {
    type Err = DecodeError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Activation::ALL
            .into_iter()
            .find(|a| a.name() == s)
            .ok_or_else(|| DecodeError::UnknownActivation(s.to_string()))
    }
}

/// One decoded hyperparameter configuration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialParams {
    pub neurons: u32,
    pub learning_rate: f64,
    pub batch_size: u32,
    pub epochs: u32,
    pub activation: Activation,
}

impl TrialParams {
    /// Hashable identity; two params with the same key are the same trial.
    pub(crate) fn key(&self) -> (u32, u64, u32, u32, Activation) {
        (self.neurons, self.learning_rate.to_bits(), self.batch_size, self.epochs, self.activation)
    }
}

/// Ranges of the five tuned hyperparameters.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HyperparameterSpace {
    neurons: (u32, u32),
    learning_rate: (f64, f64),
    batch_size: (u32, u32),
    epochs: (u32, u32),
}

impl Default for HyperparameterSpace {
    fn default() -> Self {
        Self { neurons: (10, 100), learning_rate: (0.01, 1.0), batch_size: (200, 1000), epochs: (2, 100) }
    }
}

/// Upper bound of the activation gene; each category owns a unit interval.
const ACTIVATION_GENE_MAX: f64 = Activation::ALL.len() as f64;

impl HyperparameterSpace {
    pub fn new(
        neurons: (u32, u32),
        learning_rate: (f64, f64),
        batch_size: (u32, u32),
        epochs: (u32, u32),
    ) -> Result<Self, DecodeError> {
        let ints = [("neurons", neurons), ("batch_size", batch_size), ("epochs", epochs)];
        for (name, (lo, hi)) in ints {
            if lo >= hi {
                return Err(DecodeError::InvalidRange { name, lower: f64::from(lo), upper: f64::from(hi) });
            }
        }
        let (lo, hi) = learning_rate;
        if !(lo.is_finite() && hi.is_finite() && lo < hi) {
            return Err(DecodeError::InvalidRange { name: "learning_rate", lower: lo, upper: hi });
        }
        Ok(Self { neurons, learning_rate, batch_size, epochs })
    }

    pub fn neurons(&self) -> (u32, u32) {
        self.neurons
    }

    pub fn learning_rate(&self) -> (f64, f64) {
        self.learning_rate
    }

    pub fn batch_size(&self) -> (u32, u32) {
        self.batch_size
    }

    pub fn epochs(&self) -> (u32, u32) {
        self.epochs
    }

    /// Continuous box the optimizer searches: one gene per hyperparameter,
    /// ordered neurons, learning rate, batch size, epochs, activation.
    pub fn as_search_space(&self) -> SearchSpace {
        let (lower, upper) = self.bounds();
        SearchSpace::new(lower.to_vec(), upper.to_vec()).expect("hyperparameter ranges are valid boxes")
    }

    fn bounds(&self) -> ([f64; 5], [f64; 5]) {
        (
            [
                f64::from(self.neurons.0),
                self.learning_rate.0,
                f64::from(self.batch_size.0),
                f64::from(self.epochs.0),
                0.0,
            ],
            [
                f64::from(self.neurons.1),
                self.learning_rate.1,
                f64::from(self.batch_size.1),
                f64::from(self.epochs.1),
                ACTIVATION_GENE_MAX,
            ],
        )
    }

    /// Maps a gene vector to a trial: integer genes are rounded half away
    /// from zero and clamped, the learning rate passes through, and the
    /// activation gene is floored and clamped to the last category.
    pub fn decode(&self, position: &[f64]) -> Result<TrialParams, DecodeError> {
        if position.len() != 5 {
            return Err(DecodeError::Dimension { got: position.len() });
        }
        let (lower, upper) = self.bounds();
        for (index, &value) in position.iter().enumerate() {
            if !(value >= lower[index] && value <= upper[index]) {
                return Err(DecodeError::OutOfBounds { index, value, lower: lower[index], upper: upper[index] });
            }
        }
        let int = |v: f64, (lo, hi): (u32, u32)| (v.round() as u32).clamp(lo, hi);
        let act = (position[4].floor() as usize).min(Activation::ALL.len() - 1);
        Ok(TrialParams {
            neurons: int(position[0], self.neurons),
            learning_rate: position[1],
            batch_size: int(position[2], self.batch_size),
            epochs: int(position[3], self.epochs),
            activation: Activation::ALL[act],
        })
    }

    /// Gene vector that decodes back to `params`.
    pub fn encode(&self, params: &TrialParams) -> Vec<f64> {
        vec![
            f64::from(params.neurons),
            params.learning_rate,
            f64::from(params.batch_size),
            f64::from(params.epochs),
            params.activation.index() as f64,
        ]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lower_corner() {
        let hs = HyperparameterSpace::default();
        let p = hs.decode(&[10.0, 0.01, 200.0, 2.0, 0.0]).unwrap();
        assert_eq!(
            p,
            TrialParams { neurons: 10, learning_rate: 0.01, batch_size: 200, epochs: 2, activation: Activation::Relu }
        );
    }

    #[test]
    fn activation_gene_floors_and_clamps() {
        let hs = HyperparameterSpace::default();
        let act = |g: f64| hs.decode(&[50.0, 0.5, 500.0, 10.0, g]).unwrap().activation;
        assert_eq!(act(3.7), Activation::Softsign);
        assert_eq!(act(9.999), Activation::Prelu);
        assert_eq!(act(10.0), Activation::Prelu);
        assert_eq!(act(4.0), Activation::Tanh);
    }

    #[test]
    fn integers_round_half_away_from_zero() {
        let hs = HyperparameterSpace::default();
        let p = hs.decode(&[54.5, 0.1, 599.49, 49.5, 4.2]).unwrap();
        assert_eq!((p.neurons, p.batch_size, p.epochs), (55, 599, 50));
    }

    #[test]
    fn search_box_matches_ranges() {
        let s = HyperparameterSpace::default().as_search_space();
        assert_eq!(s.dims(), 5);
        assert_eq!(s.lower(), &[10.0, 0.01, 200.0, 2.0, 0.0]);
        assert_eq!(s.upper(), &[100.0, 1.0, 1000.0, 100.0, 10.0]);
    }

    #[test]
    fn rejects_bad_positions() {
        let hs = HyperparameterSpace::default();
        assert_eq!(hs.decode(&[1.0; 4]), Err(DecodeError::Dimension { got: 4 }));
        assert!(matches!(hs.decode(&[5.0, 0.1, 500.0, 10.0, 1.0]), Err(DecodeError::OutOfBounds { index: 0, .. })));
        assert!(matches!(hs.decode(&[50.0, f64::NAN, 500.0, 10.0, 1.0]), Err(DecodeError::OutOfBounds { index: 1, .. })));
    }

    #[test]
    fn ranges_are_validated() {
        assert!(HyperparameterSpace::new((10, 10), (0.1, 1.0), (1, 2), (1, 2)).is_err());
        assert!(HyperparameterSpace::new((10, 20), (0.1, 0.1), (1, 2), (1, 2)).is_err());
        assert!(HyperparameterSpace::new((10, 20), (0.1, f64::INFINITY), (1, 2), (1, 2)).is_err());
        assert!(HyperparameterSpace::new((10, 20), (0.1, 0.2), (1, 2), (1, 2)).is_ok());
    }

    #[test]
    fn names_round_trip() {
        for a in Activation::ALL {
            assert_eq!(a.name().parse::<Activation>().unwrap(), a);
            assert_eq!(serde_json::to_string(&a).unwrap(), format!("\"{}\"", a.name()));
        }
        assert!("swish".parse::<Activation>().is_err());
    }
}
