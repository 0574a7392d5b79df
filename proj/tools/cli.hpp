#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "ifr/ifr.hpp"

namespace ifr::cli {

enum ExitCode : int { ok = 0, usage_error = 2, numerical_failure = 3 };

/// Elliptic problem assembled from closed-form pieces (no expression parser).
struct CustomProblem {
    double x_left = -1;
    double x_right = 1;
    double alpha = 0;
    double beta_minus = 1;
    double beta_plus = 1;
    JumpLaw<double> law = JumpLaw<double>::constant(0);
    double xi = 0;
    double eta = 0;
    std::string forcing = "zero";  // zero | constant | sine
    double value = 0;              // constant forcing
    double amplitude = 0;          // sine forcing: amplitude * sin(frequency * pi * x)
    double frequency = 1;

    EllipticProblem to_problem() const;
};

struct RunConfig {
    std::string command;
    std::string problem = "elliptic-prescribed";
    std::optional<CustomProblem> custom;
    Eigen::Index mr = 64;
    std::vector<Eigen::Index> mr_list;
    std::string dt = "h2";
    std::optional<double> final_time;
    double tol = 1e-12;
    int max_iter = 50;
    std::string out;
};

JumpLaw<double> parse_law(const nlohmann::json& j);
CustomProblem parse_custom(const nlohmann::json& j);

/// Overlays the keys of a JSON config object onto `config`.
void apply_json(RunConfig& config, const nlohmann::json& j);

/// Fixed-width scientific notation with 16 significant digits.
std::string format_number(double v);

/// Runs one CLI invocation; returns the process exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ifr::cli
