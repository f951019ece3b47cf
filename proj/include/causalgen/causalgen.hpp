#pragma once

// Umbrella header: causality-aware synthetic tabular data toolkit.
//
// Discovery: additive-noise-model direction tests (kernel ridge + HSIC)
// restricted to variable sets suggested by frequent-pattern mining.
// Generation: topological walk over the discovered graph, parametric fits
// for sources and a four-regressor ensemble for dependent features.
// Ground truth + evaluation: random structural-equation benchmarks, edge
// confusion metrics, KDE distribution error, LOF outlier counts.

#include "causalgen/anm.hpp"
#include "causalgen/apriori.hpp"
#include "causalgen/benchmark.hpp"
#include "causalgen/config.hpp"
#include "causalgen/correlation.hpp"
#include "causalgen/dag.hpp"
#include "causalgen/dataset.hpp"
#include "causalgen/discovery.hpp"
#include "causalgen/discretize.hpp"
#include "causalgen/distribution_fit.hpp"
#include "causalgen/errors.hpp"
#include "causalgen/generation.hpp"
#include "causalgen/ground_truth.hpp"
#include "causalgen/hsic.hpp"
#include "causalgen/kde.hpp"
#include "causalgen/kernel_ridge.hpp"
#include "causalgen/kernels.hpp"
#include "causalgen/lof.hpp"
#include "causalgen/metrics.hpp"
#include "causalgen/parallel.hpp"
#include "causalgen/rng.hpp"
#include "causalgen/special_functions.hpp"
#include "causalgen/variable_set.hpp"
