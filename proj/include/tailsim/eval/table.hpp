#pragma once

#include <string>
#include <vector>

#include "tailsim/eval/metrics.hpp"

namespace tailsim::eval {

// One method evaluated in-distribution and out-of-distribution (stronger
// perturbations than training).
struct ComparisonRow {
    std::string name;
    Metrics in_dist;
    Metrics ood;
    long env_steps = 0;
};

struct ComparisonTable {
    std::vector<ComparisonRow> rows;

    const ComparisonRow& find(const std::string& name) const;

    void write_csv(const std::string& path) const;
    static ComparisonTable read_csv(const std::string& path);

    // Fixed-width text rendering for terminals and logs.
    std::string render() const;
};

}  // namespace tailsim::eval
