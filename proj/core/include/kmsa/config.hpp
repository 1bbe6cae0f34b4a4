#ifndef KMSA_CONFIG_HPP
#define KMSA_CONFIG_HPP

#include "kmsa/errors.hpp"
#include "kmsa/types.hpp"

#include <vector>

namespace kmsa {

/// Every dataset invariant that is violated, in a fixed order.
std::vector<ConfigViolation> dataset_violations(const MultiviewDataset& data);

/// Every violated constraint of `cfg` jointly with `data`.
std::vector<ConfigViolation> config_violations(const KmsaConfig& cfg,
                                               const MultiviewDataset& data);

/// Throws ConfigError listing all violations; returns normally otherwise.
void validate_dataset(const MultiviewDataset& data);
void validate_config(const KmsaConfig& cfg, const MultiviewDataset& data);

}  // namespace kmsa

#endif  // KMSA_CONFIG_HPP
