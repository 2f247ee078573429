// Experiment drivers behind the CLI subcommands: single runs with snapshot +
// diagnostics CSV output, L1 convergence tables, and snapshot comparison.
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "harness/config.hpp"

namespace ch::harness {

struct ErrorRow {
    int k;
    double dx;
    std::optional<double> err_first, err_second;  // empty: not run or unstable
};

struct ErrorTable {
    std::vector<ErrorRow> rows;
    double t_eval{};
    double a{}, b{};
    std::string cfl_desc;
};

// L1 errors against the closed-form reference, one run per (k, scheme).
// Unstable runs leave their cell empty; nothing aborts the table.
ErrorTable convergence_table(const RunConfig& cfg);

// exit codes: 0 success, 1 config error, 2 instability, 3 I/O error
int cmd_run(const RunConfig& cfg);
int cmd_convergence(const RunConfig& cfg);
int cmd_compare(const std::string& path_a, const std::string& path_b);

}  // namespace ch::harness
