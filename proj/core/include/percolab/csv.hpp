#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>

#include "percolab/estimators.hpp"
#include "percolab/graph.hpp"

namespace percolab {

// Shortest round-trip decimal form ("0.1", "1e-300", "inf").
std::string format_double(double x);

// Quotes a field that contains a comma, quote or newline.
std::string csv_field(std::string_view s);

inline constexpr std::string_view kEstimateCsvHeader =
    "family,params,p,observable,k_or_gamma,mean,stderr,n_samples,seed";

// One row in the estimator CSV schema. `k_or_gamma` is empty for scalar observables.
void write_estimate_row(std::ostream& os, const Graph& g, double p, std::string_view observable,
                        std::string_view k_or_gamma, const Estimate& e);

}  // namespace percolab
