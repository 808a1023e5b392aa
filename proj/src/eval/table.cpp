#include "tailsim/eval/table.hpp"

#include <iomanip>
#include <sstream>

#include "tailsim/common/csv.hpp"

namespace tailsim::eval {

namespace {

const std::vector<std::string> kColumns = {
    "name",
    "trials",
    "success",         "ood_success",
    "survival",        "ood_survival",
    "lin_te",          "ood_lin_te",
    "yaw_te",          "ood_yaw_te",
    "peak_angle",      "ood_peak_angle",
    "env_steps",
};

}  // namespace

const ComparisonRow& ComparisonTable::find(const std::string& name) const {
    for (const auto& r : rows)
        if (r.name == name) return r;
    throw EvalError("comparison table: no row named '" + name + "'");
}

void ComparisonTable::write_csv(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw EvalError("comparison table: cannot write " + path);
    for (std::size_t i = 0; i < kColumns.size(); ++i)
        out << kColumns[i] << (i + 1 < kColumns.size() ? "," : "\n");
    out.precision(17);
    for (const auto& r : rows) {
        out << r.name << ',' << r.in_dist.trials << ',' << r.in_dist.success_rate << ','
            << r.ood.success_rate << ',' << r.in_dist.mean_survival << ','
            << r.ood.mean_survival << ',' << r.in_dist.lin_tracking_error << ','
            << r.ood.lin_tracking_error << ',' << r.in_dist.yaw_tracking_error << ','
            << r.ood.yaw_tracking_error << ',' << r.in_dist.peak_base_angle << ','
            << r.ood.peak_base_angle << ',' << r.env_steps << '\n';
    }
}

ComparisonTable ComparisonTable::read_csv(const std::string& path) {
    CsvTable t = tailsim::read_csv(path);
    if (t.header != kColumns) throw EvalError("comparison table: unexpected header");
    ComparisonTable table;
    for (std::size_t i = 0; i < t.rows.size(); ++i) {
        ComparisonRow r;
        r.name = t.rows[i][0];
        r.in_dist.trials = static_cast<int>(t.value(i, "trials"));
        r.ood.trials = r.in_dist.trials;
        r.in_dist.success_rate = t.value(i, "success");
        r.ood.success_rate = t.value(i, "ood_success");
        r.in_dist.mean_survival = t.value(i, "survival");
        r.ood.mean_survival = t.value(i, "ood_survival");
        r.in_dist.lin_tracking_error = t.value(i, "lin_te");
        r.ood.lin_tracking_error = t.value(i, "ood_lin_te");
        r.in_dist.yaw_tracking_error = t.value(i, "yaw_te");
        r.ood.yaw_tracking_error = t.value(i, "ood_yaw_te");
        r.in_dist.peak_base_angle = t.value(i, "peak_angle");
        r.ood.peak_base_angle = t.value(i, "ood_peak_angle");
        r.env_steps = static_cast<long>(t.value(i, "env_steps"));
        table.rows.push_back(std::move(r));
    }
    return table;
}

std::string ComparisonTable::render() const {
    std::ostringstream out;
    out << std::left << std::setw(12) << "method" << std::right << std::setw(9)
        << "success" << std::setw(9) << "ood" << std::setw(10) << "lin_te"
        << std::setw(10) << "yaw_te" << std::setw(12) << "env_steps" << '\n';
    out << std::string(62, '-') << '\n';
    out << std::fixed << std::setprecision(3);
    for (const auto& r : rows) {
        out << std::left << std::setw(12) << r.name << std::right << std::setw(9)
            << r.in_dist.success_rate << std::setw(9) << r.ood.success_rate
            << std::setw(10) << r.in_dist.lin_tracking_error << std::setw(10)
            << r.in_dist.yaw_tracking_error << std::setw(12) << r.env_steps << '\n';
    }
    return out.str();
}

}  // namespace tailsim::eval
