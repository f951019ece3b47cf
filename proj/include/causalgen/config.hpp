#pragma once

#include <cmath>
#include <cstdint>

#include "causalgen/errors.hpp"

namespace causalgen {

// Pipeline parameters with their defaults. Ranges are validated where the
// pipeline entry points receive a config.
struct RunConfig {
    int n_bins = 10;
    double min_sup = 0.05;
    int max_len = 3;
    double alpha = 0.001;
    std::size_t rows = 1000;            // synthetic rows to generate
    std::uint64_t seed = 0;
    std::size_t discovery_max_rows = 500;  // row cap inside NCD (0 = no cap)

    void validate() const {
        if (n_bins < 3 || n_bins > 10) throw ConfigError("n_bins must be in [3, 10]");
        if (!(min_sup > 0.0) || min_sup > 0.4) throw ConfigError("min_sup must be in (0, 0.4]");
        if (max_len < 3 || max_len > 5) throw ConfigError("max_len must be one of {3, 4, 5}");
        const bool alpha_ok = alpha == 0.001 || alpha == 0.01 || alpha == 0.02 ||
                              alpha == 0.05 || alpha == 0.1;
        if (!alpha_ok) throw ConfigError("alpha must be one of {0.001, 0.01, 0.02, 0.05, 0.1}");
        if (rows < 1) throw ConfigError("rows must be positive");
    }
};

}  // namespace causalgen
