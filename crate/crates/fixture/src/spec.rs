use serde::{Deserialize, Serialize};

use crate::FixtureError;

/// Relative weights of the scripted transaction scenarios.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioMix {
    pub plain_transfer: f64,
    pub contract_deploy: f64,
    pub contract_call_tree: f64,
    pub erc20_lifecycle: f64,
    pub erc721_lifecycle: f64,
    pub suicide_storm: f64,
    pub error_burst: f64,
}

impl Default for ScenarioMix {
    fn default() -> Self {
        ScenarioMix {
            plain_transfer: 0.40,
            contract_deploy: 0.10,
            contract_call_tree: 0.15,
            erc20_lifecycle: 0.15,
            erc721_lifecycle: 0.10,
            suicide_storm: 0.05,
            error_burst: 0.05,
        }
    }
}

impl ScenarioMix {
    /// One scenario only; handy for targeted fixtures.
    pub fn only(scenario: Scenario) -> ScenarioMix {
        let mut mix = ScenarioMix {
            plain_transfer: 0.0,
            contract_deploy: 0.0,
            contract_call_tree: 0.0,
            erc20_lifecycle: 0.0,
            erc721_lifecycle: 0.0,
            suicide_storm: 0.0,
            error_burst: 0.0,
        };
        *mix.weight_mut(scenario) = 1.0;
        mix
    }

    fn weight_mut(&mut self, scenario: Scenario) -> &mut f64 {
        match scenario {
            Scenario::PlainTransfer => &mut self.plain_transfer,
            Scenario::ContractDeploy => &mut self.contract_deploy,
            Scenario::ContractCallTree => &mut self.contract_call_tree,
            Scenario::Erc20Lifecycle => &mut self.erc20_lifecycle,
            Scenario::Erc721Lifecycle => &mut self.erc721_lifecycle,
            Scenario::SuicideStorm => &mut self.suicide_storm,
            Scenario::ErrorBurst => &mut self.error_burst,
        }
    }

    pub fn weights(&self) -> [f64; 7] {
        [
            self.plain_transfer,
            self.contract_deploy,
            self.contract_call_tree,
            self.erc20_lifecycle,
            self.erc721_lifecycle,
            self.suicide_storm,
            self.error_burst,
        ]
    }

    pub fn validate(&self) -> Result<(), FixtureError> {
        let weights = self.weights();
        if weights.iter().any(|w| *w < 0.0 || !w.is_finite()) {
            return Err(FixtureError::BadSpec("scenario weights must be non-negative and finite".to_string()));
        }
        let sum: f64 = weights.iter().sum();
        if (sum - 1.0).abs() > 1e-9 {
            return Err(FixtureError::BadSpec(format!("scenario weights sum to {sum}, expected 1")));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scenario {
    PlainTransfer,
    ContractDeploy,
    ContractCallTree,
    Erc20Lifecycle,
    Erc721Lifecycle,
    SuicideStorm,
    ErrorBurst,
}

pub const SCENARIOS: [Scenario; 7] = [
    Scenario::PlainTransfer,
    Scenario::ContractDeploy,
    Scenario::ContractCallTree,
    Scenario::Erc20Lifecycle,
    Scenario::Erc721Lifecycle,
    Scenario::SuicideStorm,
    Scenario::ErrorBurst,
];

/// Everything that determines a generated chain.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FixtureSpec {
    pub seed: u64,
    pub n_blocks: u64,
    pub mean_txs_per_block: f64,
    pub scenario_mix: ScenarioMix,
}

impl FixtureSpec {
    pub fn new(seed: u64, n_blocks: u64) -> FixtureSpec {
        FixtureSpec { seed, n_blocks, mean_txs_per_block: 6.0, scenario_mix: ScenarioMix::default() }
    }

    pub fn validate(&self) -> Result<(), FixtureError> {
        if self.n_blocks == 0 {
            return Err(FixtureError::BadSpec("n_blocks must be at least 1".to_string()));
        }
        if !(self.mean_txs_per_block.is_finite()) || self.mean_txs_per_block < 0.0 {
            return Err(FixtureError::BadSpec("mean_txs_per_block must be non-negative".to_string()));
        }
        self.scenario_mix.validate()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_mix_sums_to_one() {
        assert!(ScenarioMix::default().validate().is_ok());
        assert!(ScenarioMix::only(Scenario::PlainTransfer).validate().is_ok());
    }

    #[test]
    fn bad_weights_rejected() {
        let mut mix = ScenarioMix::default();
        mix.plain_transfer = -0.1;
        assert!(mix.validate().is_err());
        let mut mix = ScenarioMix::default();
        mix.error_burst += 0.5;
        assert!(mix.validate().is_err());
    }
}
