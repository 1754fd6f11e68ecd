#pragma once

#include "intermarket/learners/baselines.hpp"
#include "intermarket/learners/classifier.hpp"
#include "intermarket/learners/knn.hpp"
#include "intermarket/learners/linear.hpp"
#include "intermarket/learners/tree.hpp"

#include <memory>

namespace intermarket {

/// One hyperparameter and the values it may take.
struct ParamAxis {
  std::string name;
  std::vector<ParamValue> values;
};

/// The grid domain of a learner family, axes in grid order. Baselines have no
/// grid (the consensus window is validated separately).
const std::vector<ParamAxis>& param_domain(Family family);

/// Throws InvalidParameter unless every hyperparameter of `spec` is named by
/// its family's domain, takes a value from it, and none is missing.
void validate_spec(const ModelSpec& spec);

struct FitOptions {
  /// Linear SVM solver path (see SvmParams::dual).
  bool svm_dual = true;
  /// Exposed for the ensemble-of-one check; always true in experiments.
  bool forest_bootstrap = true;
};

/// Fits any family from its spec. The consensus baseline reads its window from
/// the parameter "n" (default 5); the previous baseline is consensus with n = 1.
std::unique_ptr<Classifier> fit_model(const ModelSpec& spec, const Samples& train, std::uint64_t seed,
                                      const FitOptions& options = {});

/// Parameter structs decoded from a validated spec.
TreeParams tree_params_from(const ModelSpec& spec);
ForestParams forest_params_from(const ModelSpec& spec, std::size_t num_features);
LogisticParams logistic_params_from(const ModelSpec& spec);
SvmParams svm_params_from(const ModelSpec& spec, bool dual);
KnnParams knn_params_from(const ModelSpec& spec);

}  // namespace intermarket
