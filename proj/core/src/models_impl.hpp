#pragma once

// Internal training entry points shared between models.cpp and the
// per-algorithm translation units.

#include <cstdint>
#include <vector>

#include "newstense/models.hpp"
#include "newstense/rng.hpp"

namespace newstense::impl {

// CART-style binary tree over count features. `rows` selects the training
// subset (duplicates allowed, as produced by bootstrap sampling). When
// `feature_rng` is non-null each split considers only `mtry` randomly drawn
// columns instead of every informative one.
DecisionTreeModel fit_tree(const FeatureMatrix& x, const std::vector<Label>& y,
                           const std::vector<uint32_t>& rows, int max_depth, int min_samples_leaf,
                           Rng* feature_rng, uint32_t mtry);

ForestModel fit_forest(const FeatureMatrix& x, const std::vector<Label>& y, uint32_t n_trees,
                       int max_depth, int min_samples_leaf, uint64_t seed);

SvcModel fit_svc(const FeatureMatrix& x, const std::vector<Label>& y, double lambda, double tol,
                 uint32_t max_epochs);

}  // namespace newstense::impl
